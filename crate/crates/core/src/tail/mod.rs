//! Grand Lebesgue Space and B(φ) machinery: Young–Fenchel conjugates,
//! generating functions ψ and φ, their transforms, exponential tail bounds
//! and Rosenthal moment bounds.
//!
//! Suprema are computed on documented grids and are therefore lower bounds
//! of the true values. Divergence is reported through the `f64::INFINITY`
//! sentinel, never as an error.

mod conjugate;
mod gls;
mod phi;
mod rosenthal;
mod transforms;

pub use conjugate::{young_fenchel, CONJUGATE_GRID, CONJUGATE_REACH};
pub use gls::{
    gls_norm, phi_from_psi_delta, psi_from_phi, psi_power_transform, tail_from_gls, GeneratingPsi, GLS_GRID,
    GLS_P_MAX,
};
pub use phi::{b_phi_tail, combine_max, upsilon, TailBound, YoungOrliczPhi};
pub use rosenthal::{rosenthal_bound, rosenthal_constant, rosenthal_iid, rosenthal_weighted, ROSENTHAL_R};
pub use transforms::{
    chi, chi_transform, overline_phi, overline_transform, phi_sharp, phi_sharp_domain, MAX_TERMS, RESTARTS,
    SHARP_V_MAX, TABULATION_NODES,
};
