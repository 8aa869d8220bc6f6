//! Semicircle and perturbed spectral measures, Catalan numbers, Borel
//! transforms and the resolvent of the rank-one perturbed multiplication
//! operator.

pub mod borel;
pub mod catalan;
pub mod resolvent;
pub mod spectral;

pub use borel::{
    aronszajn_krein, borel_mu_c, borel_mu_c_series, boundary_density, boundary_density_refined,
    boundary_limit, principal_sqrt, BoundaryEstimate, DEFAULT_EPSILON,
};
pub use catalan::{catalan, catalan_big, catalan_f64, catalan_gf, catalan_series, CatalanTable};
pub use resolvent::{i_lambda, resolvent_a_delta, resolvent_residual, semicircle_rule, Resolvent};
pub use spectral::{
    mu_c_density, mu_c_moment, mu_cp_density, scaled_moment, spectrum_interval, MeasureKind,
    SpectralMeasure,
};
