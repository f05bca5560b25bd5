//! Density estimation, Miles formulas and intensity inversion.

mod channels;
mod forward;
mod invert;
mod report;
mod window;

pub use channels::ChannelSpec;
pub use forward::{grain_process_densities, miles_forward, GrainProcessDensities};
pub use invert::{
    harmonic_series_constants, invert_isotropic, invert_kernel, invert_series, series_constant,
    tail_factor, FitMethod, FitResult, SeriesConstant, SATURATION_TOL,
};
pub use report::{
    compare_reports, estimate_densities, estimate_densities_rows, ChannelCheck, ChannelEstimate,
    DensityReport, EstimateRun,
};
pub use window::{
    expected_valuation_window, simulate_window_mean, tensor_isotropy_check, window_bias_identity,
    IdentityCheck, SeriesValue, TensorResidual,
};
