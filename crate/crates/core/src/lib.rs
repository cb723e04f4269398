//! Marcinkiewicz–Zygmund inequalities for polynomials sampled on perturbed
//! roots of unity.
//!
//! The crate computes two-sided sampling constants of node families on the
//! unit circle, uniform `(A_p)` constants of their generating polynomials,
//! Helson–Szegő data for damped generating polynomials, and the extremal
//! family whose weights fail `(A_p)` at the sharp perturbation `1/(2q)`.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*F64`
//! aliases below are the concrete types the experiment driver uses.

pub mod error;
pub mod experiments;
pub mod lemmas;
pub mod linalg;
pub mod mzbounds;
pub mod nodes;
pub mod polyspace;
pub mod quadrature;
pub mod real;
pub mod weights;

pub use error::{Error, Result};
pub use experiments::{
    run_necessity, run_sweep, NecessityConfig, NecessityOutput, SweepConfig, SweepOutput,
};
pub use lemmas::{
    critical_exponent, kadets_threshold, kernel_h, lemma_ratio_bound, log_p0_bounds,
    reduction_family, reduction_schedule, LemmaProbe, ReductionScaling,
};
pub use mzbounds::{
    mz_constant_p2, mz_constant_probe, mz_constant_probe_with, reconstruct_ls, sampling_matrix,
    Method, MzReport, ProbeConfig,
};
pub use nodes::{
    necessity_family, perturbed_family, roots_of_unity, separation, NodeSet, PerturbationSchedule,
    ScheduleKind,
};
pub use polyspace::{
    circle_norm, circle_norm_adaptive, eval, eval_grid, random_poly, sample_mean, CircleGrid,
    Polynomial,
};
pub use real::Real;
pub use weights::{
    ap_constant, ap_constant_with, conjugate, divisor_guard, generating_weight, helson_szego_check,
    limit_weight_arc_product, phi_limit_deviation, rho_kappa, v_kappa, ApReport, Arc, ArcFamily,
    HsReport, RadiusRule, WeightSamples,
};

pub type NodeSetF64 = NodeSet<f64>;
pub type NodeSetF32 = NodeSet<f32>;
pub type PolynomialF64 = Polynomial<f64>;
pub type PolynomialF32 = Polynomial<f32>;
pub type MzReportF64 = MzReport<f64>;
pub type WeightSamplesF64 = WeightSamples<f64>;
pub type ApReportF64 = ApReport<f64>;
pub type LemmaProbeF64 = LemmaProbe<f64>;
