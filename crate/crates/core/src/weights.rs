//! Generating polynomials, uniform `(A_p)` estimates and Helson–Szegő data.
//!
//! The generating polynomial of a node set with damping radius `r` is
//! `F(z) = Π_j (1 − r·conj(z_j)·z)`; its boundary modulus `|F|^p` is the
//! weight whose uniform `(A_p)` constant controls the sampling inequality.
//! Everything is kept as `log|F|` because `|F|` can span many orders of
//! magnitude.

use std::io::Write;

use num_complex::Complex;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::nodes::{necessity_family, perturbed_family, NodeSet, PerturbationSchedule};
use crate::polyspace::CircleGrid;
use crate::quadrature::integrate;
use crate::real::Real;

/// Damping radius of a generating polynomial of degree `n + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadiusRule {
    /// `r = n/(n+1)`.
    DegreeRatio,
    /// `r = ρ_{κn} = max(1/2, 1 − κ/(n+1))`.
    RhoKappa(f64),
}

impl RadiusRule {
    pub fn radius<T: Real>(self, n: usize) -> T {
        match self {
            RadiusRule::DegreeRatio => T::of_usize(n) / T::of_usize(n + 1),
            RadiusRule::RhoKappa(kappa) => rho_kappa(n, T::of(kappa)),
        }
    }
}

/// `ρ_{κn} = max(1/2, 1 − κ/(n+1))`.
pub fn rho_kappa<T: Real>(n: usize, kappa: T) -> T {
    (T::one() - kappa / T::of_usize(n + 1)).max(T::of(0.5))
}

/// `log w` sampled on a circle grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSamples<T> {
    grid: CircleGrid,
    log_values: Vec<T>,
}

impl<T: Real> WeightSamples<T> {
    pub fn new(grid: CircleGrid, log_values: Vec<T>) -> Result<Self> {
        if log_values.len() != grid.len() {
            return Err(Error::LengthMismatch {
                expected: grid.len(),
                actual: log_values.len(),
            });
        }
        if let Some(i) = log_values.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(
                "log_values",
                format!("weight is not positive and finite at grid index {i}"),
            ));
        }
        Ok(WeightSamples { grid, log_values })
    }

    pub fn from_fn(grid: CircleGrid, log_w: impl Fn(T) -> T) -> Result<Self> {
        let values = grid.angles().into_iter().map(log_w).collect();
        Self::new(grid, values)
    }

    pub fn grid(&self) -> CircleGrid {
        self.grid
    }

    pub fn log_values(&self) -> &[T] {
        &self.log_values
    }

    pub fn len(&self) -> usize {
        self.log_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log_values.is_empty()
    }

    /// Weight multiplied by `e^c`.
    pub fn shifted(&self, c: T) -> Self {
        WeightSamples {
            grid: self.grid,
            log_values: self.log_values.iter().map(|&v| v + c).collect(),
        }
    }

    /// Two-column `theta,log_w` CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta", "log_w"])?;
        for (i, v) in self.log_values.iter().enumerate() {
            let t: T = self.grid.angle(i);
            w.write_record([t.to_string(), v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `log|1 − r e^{ix}|`, written to stay accurate when `r → 1` and `x → 0`.
#[inline]
pub(crate) fn log_factor<T: Real>(r: T, x: T) -> T {
    let one_minus = T::one() - r;
    let s = (x / T::of(2.0)).sin();
    (one_minus * one_minus + T::of(4.0) * r * s * s).ln() / T::of(2.0)
}

/// `Σ_j log|1 − r e^{i(θ − α_j)}|` at every grid angle.
pub(crate) fn log_product<T: Real>(angles: &[T], r: T, grid: &CircleGrid) -> Vec<T> {
    (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let t: T = grid.angle(i);
            angles.iter().map(|&a| log_factor(r, t - a)).sum()
        })
        .collect()
}

/// `log|F(e^{iθ_m})|` for the generating polynomial of `nodes`.
pub fn generating_weight<T: Real>(
    nodes: &NodeSet<T>,
    rule: RadiusRule,
    grid: &CircleGrid,
) -> Result<WeightSamples<T>> {
    let n = nodes.degree();
    let required = 8 * (n + 1);
    if grid.len() < required {
        return Err(Error::GridTooCoarse {
            m: grid.len(),
            required,
        });
    }
    if let RadiusRule::RhoKappa(k) = rule {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::param("kappa", format!("{k} must be positive")));
        }
    }
    let r = rule.radius::<T>(n);
    WeightSamples::new(*grid, log_product(nodes.angles(), r, grid))
}

/// Arc in angle units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc<T> {
    pub center: T,
    pub length: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApReport<T> {
    pub p: T,
    pub k_p: T,
    pub argmax_arc: Arc<T>,
    /// `(arc length, largest product among arcs of that length)`.
    pub profile: Vec<(T, T)>,
    pub grid_m: usize,
}

/// CSV form of an [`ApReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApRow {
    pub p: f64,
    pub n: usize,
    pub delta: f64,
    pub k_p: f64,
    pub argmax_center: f64,
    pub argmax_length: f64,
    pub grid_m: usize,
}

impl<T: Real> ApReport<T> {
    pub fn row(&self, n: usize, delta: f64) -> ApRow {
        ApRow {
            p: self.p.to_f64_lossy(),
            n,
            delta,
            k_p: self.k_p.to_f64_lossy(),
            argmax_center: self.argmax_arc.center.to_f64_lossy(),
            argmax_length: self.argmax_arc.length.to_f64_lossy(),
            grid_m: self.grid_m,
        }
    }
}

/// Arcs of `L` consecutive grid cells, with starts every `⌊L/step_divisor⌋`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcFamily {
    pub lengths: Vec<usize>,
    pub step_divisor: usize,
}

impl ArcFamily {
    /// `L = M, M/2, M/4, ...` down to 8 cells, centers every `L/8`.
    pub fn dyadic(m: usize) -> Self {
        let floor = m.min(8);
        let lengths = (0..usize::BITS)
            .map(|k| m >> k)
            .take_while(|&l| l >= floor && l > 0)
            .collect();
        ArcFamily {
            lengths,
            step_divisor: 8,
        }
    }
}

/// Uniform `(A_p)` product of `w = exp(p · log_values)` over dyadic arcs.
pub fn ap_constant<T: Real>(weight: &WeightSamples<T>, p: T) -> Result<ApReport<T>> {
    ap_constant_with(weight, p, &ArcFamily::dyadic(weight.len()))
}

pub fn ap_constant_with<T: Real>(
    weight: &WeightSamples<T>,
    p: T,
    family: &ArcFamily,
) -> Result<ApReport<T>> {
    check_exponent(p.to_f64_lossy())?;
    let m = weight.len();
    if family.lengths.is_empty() || family.lengths.iter().any(|&l| l == 0 || l > m) {
        return Err(Error::param("arc family", "lengths must lie in 1..=M"));
    }
    let table = ArcTable::new(weight.log_values(), p);
    let h: T = weight.grid().spacing();
    let per_length: Vec<(usize, T, usize)> = family
        .lengths
        .par_iter()
        .map(|&l| {
            let step = (l / family.step_divisor.max(1)).max(1);
            let mut best = (T::neg_infinity(), 0);
            for s in (0..m).step_by(step) {
                let v = table.log_product(s, l);
                if v > best.0 {
                    best = (v, s);
                }
            }
            (l, best.0, best.1)
        })
        .collect();

    let mut profile = Vec::with_capacity(per_length.len());
    let mut top = (T::neg_infinity(), 0, 0);
    for &(l, v, s) in &per_length {
        profile.push((h * T::of_usize(l), v.exp()));
        if v > top.0 {
            top = (v, l, s);
        }
    }
    let (v, l, s) = top;
    let center = crate::real::wrap_angle(h * (T::of_usize(s) + T::of_usize(l - 1) / T::of(2.0)));
    Ok(ApReport {
        p,
        k_p: v.exp(),
        argmax_arc: Arc {
            center,
            length: h * T::of_usize(l),
        },
        profile,
        grid_m: m,
    })
}

/// Shifted exponentials and their prefix sums over two periods.
struct ArcTable<T> {
    p: T,
    lw: Vec<T>,
    lv: Vec<T>,
    max_w: T,
    max_v: T,
    pw: Vec<T>,
    pv: Vec<T>,
    tol: T,
}

impl<T: Real> ArcTable<T> {
    fn new(log_values: &[T], p: T) -> Self {
        // w = e^{p·log}, v = w^{-1/(p-1)}.
        let lw: Vec<T> = log_values.iter().map(|&x| p * x).collect();
        let lv: Vec<T> = lw.iter().map(|&x| -x / (p - T::one())).collect();
        let max_w = lw.iter().copied().fold(T::neg_infinity(), T::max);
        let max_v = lv.iter().copied().fold(T::neg_infinity(), T::max);
        let pw = prefix(&lw, max_w);
        let pv = prefix(&lv, max_v);
        ArcTable {
            p,
            lw,
            lv,
            max_w,
            max_v,
            pw,
            pv,
            tol: T::epsilon().sqrt(),
        }
    }

    /// `log` of the arc product for cells `s..s+l` (cyclic).
    fn log_product(&self, s: usize, l: usize) -> T {
        let lf = T::of_usize(l);
        let la = self.log_avg(&self.pw, &self.lw, self.max_w, s, l, lf);
        let lb = self.log_avg(&self.pv, &self.lv, self.max_v, s, l, lf);
        la / self.p + lb * (self.p - T::one()) / self.p
    }

    fn log_avg(&self, pre: &[T], logs: &[T], max: T, s: usize, l: usize, lf: T) -> T {
        let total = pre[logs.len()];
        let sum = pre[s + l] - pre[s];
        if sum > self.tol * total {
            return max + (sum / lf).ln();
        }
        // Cancellation in the prefix difference: sum directly with a local shift.
        let m = logs.len();
        let local = (s..s + l)
            .map(|i| logs[i % m])
            .fold(T::neg_infinity(), T::max);
        let acc: T = (s..s + l).map(|i| (logs[i % m] - local).exp()).sum();
        local + (acc / lf).ln()
    }
}

/// Compensated prefix sums of `exp(x − shift)` over two periods.
fn prefix<T: Real>(logs: &[T], shift: T) -> Vec<T> {
    let m = logs.len();
    let mut out = Vec::with_capacity(2 * m + 1);
    out.push(T::zero());
    let (mut sum, mut comp) = (T::zero(), T::zero());
    for i in 0..2 * m {
        let x = (logs[i % m] - shift).exp();
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
        out.push(sum + comp);
    }
    out
}

/// Discrete conjugate function: Fourier multiplier `−i·sign(k)`.
///
/// The mean and the Nyquist coefficient are set to zero.
pub fn conjugate<T: Real>(samples: &[T]) -> Result<Vec<T>> {
    let m = samples.len();
    if m == 0 || !m.is_multiple_of(2) {
        return Err(Error::param(
            "M",
            format!("conjugate needs an even grid, got {m}"),
        ));
    }
    let mut planner = FftPlanner::<T>::new();
    let mut buf: Vec<Complex<T>> = samples
        .iter()
        .map(|&x| Complex::new(x, T::zero()))
        .collect();
    planner.plan_fft_forward(m).process(&mut buf);
    let zero = Complex::new(T::zero(), T::zero());
    let minus_i = Complex::new(T::zero(), -T::one());
    buf[0] = zero;
    buf[m / 2] = zero;
    for (k, c) in buf.iter_mut().enumerate().skip(1) {
        if k < m / 2 {
            *c *= minus_i;
        } else if k > m / 2 {
            *c = -(*c * minus_i);
        }
    }
    planner.plan_fft_inverse(m).process(&mut buf);
    let inv = T::of_usize(m).recip();
    Ok(buf.into_iter().map(|c| c.re * inv).collect())
}

/// `Φ(x) = x + 2·atan2(ρ sin x, 1 − ρ cos x)`, an antiderivative of
/// `(1 − ρ²)/|e^{ix} − ρ|²`.
#[inline]
fn poisson_antiderivative<T: Real>(rho: T, x: T) -> T {
    x + T::of(2.0) * (rho * x.sin()).atan2(T::one() - rho * x.cos())
}

fn check_amplitude(schedule: &PerturbationSchedule) -> Result<()> {
    if schedule.satisfies_lemma_hypothesis() {
        Ok(())
    } else {
        Err(Error::param(
            "delta",
            format!("amplitude {} must be below 1/2", schedule.delta),
        ))
    }
}

/// `v_{κn}(θ) = Σ_j [Φ(θ − s_j − φ_j) − Φ(−φ_j)] − (n+1)θ` with
/// `s_j = 2πδ_j/(n+1)` and `φ_j = 2πj/(n+1)`.
pub fn v_kappa_at<T: Real>(n: usize, offsets: &[T], rho: T, theta: T) -> T {
    let np1 = T::of_usize(n + 1);
    let tau = T::two_pi();
    offsets
        .iter()
        .enumerate()
        .map(|(j, &d)| {
            let phi = tau * T::of_usize(j) / np1;
            let s = tau * d / np1;
            poisson_antiderivative(rho, theta - s - phi) - poisson_antiderivative(rho, -phi)
        })
        .sum::<T>()
        - np1 * theta
}

pub fn v_kappa<T: Real>(
    n: usize,
    schedule: &PerturbationSchedule,
    kappa: T,
    grid: &CircleGrid,
) -> Result<Vec<T>> {
    check_amplitude(schedule)?;
    if !(kappa.is_finite() && kappa > T::zero()) {
        return Err(Error::param("kappa", "must be positive"));
    }
    let offsets: Vec<T> = schedule.offsets(n)?;
    let rho = rho_kappa(n, kappa);
    Ok((0..grid.len())
        .into_par_iter()
        .map(|i| v_kappa_at(n, &offsets, rho, grid.angle(i)))
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsReport<T> {
    /// `‖log|F_n|² − log|F_{κn}|²‖_∞`.
    pub u_sup: T,
    pub v_sup: T,
    /// `sup|ṽ − log|F_{κn}|²|` after removing both means.
    pub conj_residual: T,
    /// `‖v‖_∞ < π/2`.
    pub passes: bool,
    /// Within 0.1 of the `π/2` gate.
    pub marginal: bool,
    /// `π/2 − ‖v‖_∞`.
    pub margin: T,
}

pub const MARGINAL_BAND: f64 = 0.1;

pub fn helson_szego_check<T: Real>(
    n: usize,
    schedule: &PerturbationSchedule,
    kappa: T,
    grid: &CircleGrid,
) -> Result<HsReport<T>> {
    check_amplitude(schedule)?;
    let nodes = perturbed_family::<T>(n, schedule)?;
    let f_n = generating_weight(&nodes, RadiusRule::DegreeRatio, grid)?;
    let f_k = generating_weight(&nodes, RadiusRule::RhoKappa(kappa.to_f64_lossy()), grid)?;
    let v = v_kappa(n, schedule, kappa, grid)?;
    let vt = conjugate(&v)?;

    let two = T::of(2.0);
    let u_sup = sup_abs(
        f_n.log_values()
            .iter()
            .zip(f_k.log_values())
            .map(|(&a, &b)| two * (a - b)),
    );
    let v_sup = sup_abs(v.iter().copied());
    let target: Vec<T> = f_k.log_values().iter().map(|&x| two * x).collect();
    let mt = mean(&target);
    let mv = mean(&vt);
    let conj_residual = sup_abs(vt.iter().zip(&target).map(|(&a, &b)| (a - mv) - (b - mt)));
    let margin = T::FRAC_PI_2() - v_sup;
    Ok(HsReport {
        u_sup,
        v_sup,
        conj_residual,
        passes: margin > T::zero(),
        marginal: margin.abs() < T::of(MARGINAL_BAND),
        margin,
    })
}

fn sup_abs<T: Real>(it: impl Iterator<Item = T>) -> T {
    it.fold(T::zero(), |m, x| m.max(x.abs()))
}

fn mean<T: Real>(xs: &[T]) -> T {
    xs.iter().copied().sum::<T>() / T::of_usize(xs.len())
}

/// `ρ = max(1/2, 1 − 1/(2n+1))`, the damping of the necessity family.
pub fn necessity_radius<T: Real>(n: usize) -> T {
    rho_kappa(2 * n, T::one())
}

/// `log|φ_n(e^{iθ})|` with `φ_n = F_{2n}(z)/(z^{2n+1} − ρ^{2n+1})`.
pub fn phi_log_modulus<T: Real>(n: usize, delta: T, grid: &CircleGrid) -> Result<Vec<T>> {
    let nodes = necessity_family::<T>(n, delta)?;
    let rho = necessity_radius::<T>(n);
    let deg = 2 * n + 1;
    let rho_d = rho.powi(deg as i32);
    let num = log_product(nodes.angles(), rho, grid);
    Ok(num
        .into_iter()
        .enumerate()
        .map(|(i, ln)| {
            let t: T = grid.angle(i);
            let den = Complex::from_polar(T::one(), T::of_usize(deg) * t)
                - Complex::new(rho_d, T::zero());
            ln - den.norm().ln()
        })
        .collect())
}

/// `|tan(t/2)|^{2δ} = |(1 − e^{it})/(1 + e^{it})|^{2δ}`.
pub fn limit_weight<T: Real>(delta: T, t: T) -> T {
    (t / T::of(2.0)).tan().abs().powf(T::of(2.0) * delta)
}

/// `sup_{t ∈ [0.1, π − 0.1]} ||φ_n(e^{it})| − |tan(t/2)|^{2δ}|` over grid angles.
pub fn phi_limit_deviation<T: Real>(n: usize, delta: T, grid: &CircleGrid) -> Result<T> {
    if n < 4 {
        return Err(Error::param("n", format!("{n} is below 4")));
    }
    let lo = T::of(0.1);
    let hi = T::PI() - lo;
    let logs = phi_log_modulus(n, delta, grid)?;
    let mut dev = T::neg_infinity();
    for (i, l) in logs.into_iter().enumerate() {
        let t: T = grid.angle(i);
        if t >= lo && t <= hi {
            dev = dev.max((l.exp() - limit_weight(delta, t)).abs());
        }
    }
    if dev.is_finite() {
        Ok(dev)
    } else {
        Err(Error::param("grid", "no grid angle lies in [0.1, π − 0.1]"))
    }
}

/// `min_θ |e^{i(2n+1)θ} − ρ^{2n+1}|` over grid angles.
pub fn divisor_guard<T: Real>(n: usize, grid: &CircleGrid) -> T {
    let deg = 2 * n + 1;
    let rho_d = necessity_radius::<T>(n).powi(deg as i32);
    (0..grid.len())
        .map(|i| {
            let t: T = grid.angle(i);
            (Complex::from_polar(T::one(), T::of_usize(deg) * t) - Complex::new(rho_d, T::zero()))
                .norm()
        })
        .fold(T::infinity(), T::min)
}

/// `(A_p)` product of the limit weight `|tan(t/2)|^{2δp}` over `[ε, π − ε]`.
///
/// Integrates in `u = log tan(t/2)`, where `dt = sech(u) du` and the weight
/// becomes `e^{2δp·u}`.
pub fn limit_weight_arc_product<T: Real>(delta: T, p: T, eps: T) -> Result<T> {
    check_exponent(p.to_f64_lossy())?;
    if !(eps > T::zero() && eps < T::FRAC_PI_2()) {
        return Err(Error::param("eps", "must lie in (0, π/2)"));
    }
    let a = T::of(2.0) * delta * p;
    let big_u = (eps / T::of(2.0)).tan().recip().ln();
    let panels = (big_u * T::of(4.0)).ceil().to_usize().unwrap_or(1).max(1);
    let moment = |c: T| integrate(|u: T| (c * u).exp() / u.cosh(), -big_u, big_u, panels, 16);
    let len = T::PI() - T::of(2.0) * eps;
    let avg_w = moment(a) / len;
    let avg_v = moment(-a / (p - T::one())) / len;
    Ok(avg_w.powf(p.recip()) * avg_v.powf((p - T::one()) / p))
}
