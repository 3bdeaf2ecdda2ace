//! Channel models: turbulence, pointing error, path loss and the SNR
//! densities they induce.

mod link;
mod pointing;
mod snr;
mod turbulence;

pub use link::{atten_from_visibility, path_loss, LinkBudget};
pub use pointing::{
    beckmann_mgf, pointing_cdf, pointing_pdf, pointing_sample, PointingGeometry, PointingSampler,
};
pub use snr::{
    combined_asymptotic_mgf, combined_series_pdf, snr_pdf, EwSeries, SeriesDensity, SnrModel,
    SnrVariant, Support,
};
pub use turbulence::{ew_cdf, ew_moment, ew_pdf, ew_quantile, ew_sample, EwParams, UNIFORM_CLAMP};
