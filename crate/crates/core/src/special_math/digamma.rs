use crate::error::{Error, Result};

/// Digamma `ψ(x) = d/dx ln Γ(x)` for positive `x`.
///
/// Shifts the argument above 10 with `ψ(x) = ψ(x + 1) - 1/x`, then applies
/// the asymptotic expansion in `1/x²`.
pub fn digamma(x: f64) -> Result<f64> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::domain(
            "digamma",
            format!("x = {x} must be positive"),
        ));
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // Bernoulli terms B_{2k} / (2k)
    let tail = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * 691.0 / 32760.0)))));
    Ok(shift + x.ln() - 0.5 / x - tail)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn known_values() {
        assert_abs_diff_eq!(
            digamma(1.0).unwrap(),
            -0.577_215_664_901_532_9,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            digamma(2.0).unwrap(),
            0.422_784_335_098_467_1,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            digamma(0.5).unwrap(),
            -1.963_510_026_021_423_5,
            epsilon = 1e-13
        );
        assert_abs_diff_eq!(
            digamma(1e-3).unwrap(),
            -1_000.575_571_931_810_3,
            epsilon = 1e-10
        );
        assert_abs_diff_eq!(
            digamma(100.0).unwrap(),
            4.600_161_852_738_087,
            epsilon = 1e-13
        );
    }

    #[test]
    fn recurrence() {
        for &x in &[0.1, 0.77, 3.3, 9.99, 10.01, 42.0] {
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_non_positive() {
        assert!(digamma(0.0).is_err());
        assert!(digamma(-2.5).is_err());
    }
}
