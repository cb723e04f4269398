//! Comparison of damped products under fractional perturbation.
//!
//! For a schedule `δ_j` and `β ≥ 0` put `λ_j(β) = 2π(j + βδ_j)/(n+1)` and
//! `P_β(θ) = |Π_j (e^{iθ} − ρ_{κn} e^{iλ_j(β)})|`. When `sup|δ_j| < 1/2`
//! the ratio `R_n = P_α P_0^{α−1} / P_1^α` is bounded above and below
//! uniformly in `n`; this module measures `sup_θ |log R_n|`.

use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::nodes::{perturbed_family, NodeSet, PerturbationSchedule};
use crate::polyspace::CircleGrid;
use crate::real::Real;
use crate::weights::{log_product, rho_kappa};

/// Oversampling used by the lemma checks.
pub const LEMMA_OVERSAMPLING: usize = 64;

/// `h(t) = ρ sin t / (1 + ρ² − 2ρ cos t)`.
pub fn kernel_h<T: Real>(t: T, rho: T) -> T {
    rho * t.sin() / (T::one() + rho * rho - T::of(2.0) * rho * t.cos())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaProbe<T> {
    pub n: usize,
    pub kappa: T,
    pub alpha: T,
    pub schedule: PerturbationSchedule,
    pub grid: CircleGrid,
}

impl<T: Real> LemmaProbe<T> {
    /// Probe on the default grid `M = 64(n+1)`.
    pub fn new(n: usize, kappa: T, alpha: T, schedule: PerturbationSchedule) -> Result<Self> {
        Self::with_grid(
            n,
            kappa,
            alpha,
            schedule,
            CircleGrid::oversampled(n, LEMMA_OVERSAMPLING),
        )
    }

    pub fn with_grid(
        n: usize,
        kappa: T,
        alpha: T,
        schedule: PerturbationSchedule,
        grid: CircleGrid,
    ) -> Result<Self> {
        if !schedule.satisfies_lemma_hypothesis() {
            return Err(Error::param(
                "delta",
                format!("amplitude {} must be below 1/2", schedule.delta),
            ));
        }
        if !(alpha.is_finite() && alpha > T::zero()) {
            return Err(Error::param("alpha", "must be positive"));
        }
        if !(kappa.is_finite() && kappa > T::zero()) {
            return Err(Error::param("kappa", "must be positive"));
        }
        Ok(LemmaProbe {
            n,
            kappa,
            alpha,
            schedule,
            grid,
        })
    }

    pub fn rho(&self) -> T {
        rho_kappa(self.n, self.kappa)
    }

    /// `λ_j(β)` for every `j`.
    pub fn lambdas(&self, beta: T) -> Result<Vec<T>> {
        let np1 = T::of_usize(self.n + 1);
        let offsets: Vec<T> = self.schedule.offsets(self.n)?;
        Ok(offsets
            .iter()
            .enumerate()
            .map(|(j, &d)| T::two_pi() * (T::of_usize(j) + beta * d) / np1)
            .collect())
    }

    /// `log P_β` on the grid.
    pub fn log_product_beta(&self, beta: T) -> Result<Vec<T>> {
        Ok(log_product(&self.lambdas(beta)?, self.rho(), &self.grid))
    }

    /// `log R_n = (log P_α − log P_0) − α (log P_1 − log P_0)` on the grid.
    ///
    /// The grouping makes `α = 1` and `δ ≡ 0` vanish identically.
    pub fn log_ratio(&self) -> Result<Vec<T>> {
        let la = self.log_product_beta(self.alpha)?;
        let l1 = self.log_product_beta(T::one())?;
        let l0 = self.log_product_beta(T::zero())?;
        Ok(la
            .iter()
            .zip(&l1)
            .zip(&l0)
            .map(|((&a, &b), &c)| (a - c) - self.alpha * (b - c))
            .collect())
    }
}

/// `sup_θ |log R_n(θ)|`.
pub fn lemma_ratio_bound<T: Real>(probe: &LemmaProbe<T>) -> Result<T> {
    Ok(probe
        .log_ratio()?
        .into_iter()
        .fold(T::zero(), |m, x| m.max(x.abs())))
}

/// `(inf_θ log P_0, sup_θ log P_0)`; `P_0 = |z^{n+1} − ρ^{n+1}|`.
pub fn log_p0_bounds<T: Real>(n: usize, kappa: T, grid: &CircleGrid) -> Result<(T, T)> {
    let probe = LemmaProbe::with_grid(
        n,
        kappa,
        T::one(),
        PerturbationSchedule::unperturbed(),
        *grid,
    )?;
    let l0 = probe.log_product_beta(T::zero())?;
    Ok(l0
        .into_iter()
        .fold((T::infinity(), T::neg_infinity()), |(lo, hi), x| {
            (lo.min(x), hi.max(x))
        }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaRow {
    pub n: usize,
    pub alpha: f64,
    pub kappa: f64,
    pub delta: f64,
    #[serde(rename = "sup_log_R")]
    pub sup_log_r: f64,
}

impl LemmaRow {
    pub fn new<T: Real>(probe: &LemmaProbe<T>, sup_log_r: T) -> Self {
        LemmaRow {
            n: probe.n,
            alpha: probe.alpha.to_f64_lossy(),
            kappa: probe.kappa.to_f64_lossy(),
            delta: probe.schedule.delta,
            sup_log_r: sup_log_r.to_f64_lossy(),
        }
    }

    pub const HEADER: [&'static str; 5] = ["n", "alpha", "kappa", "delta", "sup_log_R"];

    pub fn record(&self) -> [String; 5] {
        [
            self.n.to_string(),
            self.alpha.to_string(),
            self.kappa.to_string(),
            self.delta.to_string(),
            self.sup_log_r.to_string(),
        ]
    }
}

/// `q = max(p, p/(p−1))`, rounded to 12 decimals so that `p = 4/3` gives `q = 4`.
pub fn critical_exponent(p: f64) -> Result<f64> {
    check_exponent(p)?;
    let q = p.max(p / (p - 1.0));
    Ok((q * 1e12).round() / 1e12)
}

/// `1/(2q)`, the sharp perturbation amplitude for exponent `p`.
pub fn kadets_threshold(p: f64) -> Result<f64> {
    Ok(0.5 / critical_exponent(p)?)
}

/// Perturbation multiplier of the family used to reduce `p ≠ 2` to `p = 2`.
///
/// The two displayed forms of that family differ by a factor 2; both are
/// available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionScaling {
    /// `λ_j(q/2)`: offsets scaled by `q/2`.
    HalfQ,
    /// `λ_j(q)`: offsets scaled by `q`.
    FullQ,
}

impl ReductionScaling {
    pub fn multiplier(self, p: f64) -> Result<f64> {
        let q = critical_exponent(p)?;
        Ok(match self {
            ReductionScaling::HalfQ => q / 2.0,
            ReductionScaling::FullQ => q,
        })
    }
}

/// Schedule with offsets `β·δ_j`, `β` from [`ReductionScaling::multiplier`].
pub fn reduction_schedule(
    n: usize,
    schedule: &PerturbationSchedule,
    p: f64,
    scaling: ReductionScaling,
) -> Result<PerturbationSchedule> {
    let beta = scaling.multiplier(p)?;
    let offsets: Vec<f64> = schedule.offsets(n)?;
    PerturbationSchedule::explicit(offsets.into_iter().map(|d| beta * d).collect())
}

pub fn reduction_family<T: Real>(
    n: usize,
    schedule: &PerturbationSchedule,
    p: f64,
    scaling: ReductionScaling,
) -> Result<NodeSet<T>> {
    perturbed_family(n, &reduction_schedule(n, schedule, p, scaling)?)
}
