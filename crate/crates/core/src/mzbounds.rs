//! Two-sided Marcinkiewicz–Zygmund constants of a single node set.
//!
//! For a node set `Z(n)` the sampling ratio of a polynomial `P` of degree
//! at most `n` is
//!
//! ```text
//! r(P) = [(1/(n+1)) Σ_j |P(z_j)|^p] / [∫ |P(e^{iθ})|^p dθ/2π]
//! ```
//!
//! and the frame bounds are `inf r` (`lower_frame`) and `sup r`
//! (`upper_frame`). The two-sided constant is
//! `c_p = max(upper_frame, 1/lower_frame) ≥ 1`.
//!
//! For `p = 2` both bounds are spectral: `r` ranges exactly over
//! `[σ_min², σ_max²]` of the normalized sampling matrix
//! `A_{jk} = z_j^k / √(n+1)`. For other `p` only probe estimates are
//! available; those are attained ratios, so the reported `c_p` is a
//! certified lower bound on the true constant.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{check_exponent, Error, Result};
use crate::linalg::{extremal_singular_values, jacobi_svd, qr_solve, CMatrix};
use crate::nodes::{NodeSet, PerturbationSchedule};
use crate::polyspace::{
    abs_pow, eval_at, eval_grid, power_mean, random_poly, CircleGrid, Polynomial,
    DEFAULT_OVERSAMPLING,
};
use crate::real::Real;

/// Below this `σ_min` the sampling matrix is treated as singular.
pub const SINGULAR_SIGMA: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Svd,
    Probe,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Svd => "svd",
            Method::Probe => "probe",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MzReport<T> {
    pub n: usize,
    pub p: T,
    /// Infimum of the sampling ratio (upper estimate of it for probes).
    pub lower_frame: T,
    /// Supremum of the sampling ratio (lower estimate of it for probes).
    pub upper_frame: T,
    pub c_p: T,
    pub sigma_min: Option<T>,
    pub sigma_max: Option<T>,
    pub method: Method,
}

impl<T: Real> MzReport<T> {
    fn from_frames(n: usize, p: T, lower: T, upper: T, method: Method) -> Self {
        MzReport {
            n,
            p,
            lower_frame: lower,
            upper_frame: upper,
            c_p: upper.max(lower.recip()),
            sigma_min: None,
            sigma_max: None,
            method,
        }
    }

    /// `σ_max/σ_min` of the sampling matrix (p = 2 only).
    pub fn condition(&self) -> Option<T> {
        Some(self.sigma_max? / self.sigma_min?)
    }

    pub fn row(&self, schedule: Option<&PerturbationSchedule>) -> MzRow {
        MzRow {
            n: self.n,
            p: self.p.to_f64_lossy(),
            delta: schedule.map(|s| s.delta),
            schedule_kind: schedule.map(|s| s.kind.as_str().to_string()),
            lower_frame: self.lower_frame.to_f64_lossy(),
            upper_frame: self.upper_frame.to_f64_lossy(),
            c_p: self.c_p.to_f64_lossy(),
            sigma_min: self.sigma_min.map(Real::to_f64_lossy),
            sigma_max: self.sigma_max.map(Real::to_f64_lossy),
            method: self.method.as_str(),
        }
    }
}

/// One CSV row of an [`MzReport`]; empty cells for absent values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MzRow {
    pub n: usize,
    pub p: f64,
    pub delta: Option<f64>,
    pub schedule_kind: Option<String>,
    pub lower_frame: f64,
    pub upper_frame: f64,
    pub c_p: f64,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub method: &'static str,
}

/// `A_{jk} = z_j^k / √(n+1)`.
pub fn sampling_matrix<T: Real>(nodes: &NodeSet<T>) -> CMatrix<T> {
    let m = nodes.len();
    let scale = T::of_usize(m).sqrt().recip();
    let angles = nodes.angles();
    CMatrix::from_fn(m, m, |j, k| {
        Complex::from_polar(scale, T::of_usize(k) * angles[j])
    })
}

/// Exact `p = 2` constants from the extremal singular values.
pub fn mz_constant_p2<T: Real>(nodes: &NodeSet<T>) -> Result<MzReport<T>> {
    let (smin, smax) = extremal_singular_values(&sampling_matrix(nodes));
    if smin < T::of(SINGULAR_SIGMA) {
        return Err(Error::Singular {
            sigma_min: smin.to_f64_lossy(),
        });
    }
    let mut report = MzReport::from_frames(
        nodes.degree(),
        T::of(2.0),
        smin * smin,
        smax * smax,
        Method::Svd,
    );
    report.sigma_min = Some(smin);
    report.sigma_max = Some(smax);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeConfig {
    /// Number of random probe polynomials.
    pub budget: usize,
    pub seed: u64,
    /// Coordinate-ascent rounds applied to the best probe in each direction.
    pub refine_rounds: usize,
    /// Quadrature grid size as a multiple of `n + 1`.
    pub oversampling: usize,
    /// Seed with the extremal right singular vectors of the sampling matrix.
    pub singular_vectors: bool,
    /// Cap on the number of Lagrange basis probes.
    pub max_lagrange: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            budget: 200,
            seed: 0,
            refine_rounds: 50,
            oversampling: DEFAULT_OVERSAMPLING,
            singular_vectors: true,
            max_lagrange: 64,
        }
    }
}

/// Probe estimate with default refinement settings.
pub fn mz_constant_probe<T: Real>(
    nodes: &NodeSet<T>,
    p: T,
    budget: usize,
    seed: u64,
) -> Result<MzReport<T>> {
    let cfg = ProbeConfig {
        budget,
        seed,
        ..ProbeConfig::default()
    };
    mz_constant_probe_with(nodes, p, &cfg)
}

pub fn mz_constant_probe_with<T: Real>(
    nodes: &NodeSet<T>,
    p: T,
    cfg: &ProbeConfig,
) -> Result<MzReport<T>> {
    check_exponent(p.to_f64_lossy())?;
    if cfg.budget == 0 {
        return Err(Error::param("budget", "must be at least 1"));
    }
    // The ratio is rotation invariant; probing in a canonical frame makes the
    // estimate exactly so.
    let nodes = nodes.canonical();
    let n = nodes.degree();
    let ctx = ProbeContext::new(&nodes, p, cfg.oversampling);

    let mut candidates = structured_probes(&nodes, cfg);
    candidates
        .extend((0..cfg.budget as u64).map(|i| random_poly::<T>(n, cfg.seed.wrapping_add(i))));

    let mut best_hi: Option<(T, Polynomial<T>)> = None;
    let mut best_lo: Option<(T, Polynomial<T>)> = None;
    for poly in candidates {
        let r = match ctx.ratio(&poly) {
            Some(r) => r,
            None => continue,
        };
        if best_hi.as_ref().is_none_or(|(b, _)| r > *b) {
            best_hi = Some((r, poly.clone()));
        }
        if best_lo.as_ref().is_none_or(|(b, _)| r < *b) {
            best_lo = Some((r, poly));
        }
    }
    let (hi0, hi_poly) = best_hi.expect("at least one probe");
    let (lo0, lo_poly) = best_lo.expect("at least one probe");
    let hi = ctx
        .refine(&hi_poly, Direction::Up, cfg.refine_rounds)
        .max(hi0);
    let lo = ctx
        .refine(&lo_poly, Direction::Down, cfg.refine_rounds)
        .min(lo0);
    Ok(MzReport::from_frames(n, p, lo, hi, Method::Probe))
}

fn structured_probes<T: Real>(nodes: &NodeSet<T>, cfg: &ProbeConfig) -> Vec<Polynomial<T>> {
    let n = nodes.degree();
    let mut out = vec![Polynomial::monomial(n, 0), Polynomial::monomial(n, n)];
    // (1+z)^k, normalized, k = 1, 2, 4, ..., and n.
    let mut k = 1;
    while k <= n {
        out.push(binomial_probe(n, k));
        if k == n {
            break;
        }
        k = (2 * k).min(n);
    }
    out.extend(lagrange_probes(nodes, cfg.max_lagrange));
    if cfg.singular_vectors && n > 0 {
        let svd = jacobi_svd(&sampling_matrix(nodes));
        for i in [0, n] {
            out.push(Polynomial::new(svd.right_vector(i).to_vec()));
        }
    }
    out
}

/// `(1+z)^k / ‖(1+z)^k‖` padded to degree bound `n`.
fn binomial_probe<T: Real>(n: usize, k: usize) -> Polynomial<T> {
    // ln C(k, j) by the multiplicative recurrence; ‖(1+z)^k‖² = C(2k, k).
    let mut ln_c = vec![0.0f64; k + 1];
    for j in 1..=k {
        ln_c[j] = ln_c[j - 1] + ((k - j + 1) as f64 / j as f64).ln();
    }
    let ln_norm = 0.5
        * (1..=k)
            .map(|j| ((k + j) as f64 / j as f64).ln())
            .sum::<f64>();
    let mut coeffs = vec![Complex::new(T::zero(), T::zero()); n + 1];
    for (c, l) in coeffs.iter_mut().zip(&ln_c) {
        *c = Complex::new(T::of((l - ln_norm).exp()), T::zero());
    }
    Polynomial::new(coeffs)
}

/// Lagrange basis polynomials for the nodes with the closest neighbours.
fn lagrange_probes<T: Real>(nodes: &NodeSet<T>, cap: usize) -> Vec<Polynomial<T>> {
    let pts = nodes.points();
    let m = pts.len();
    if m < 2 || cap == 0 {
        return Vec::new();
    }
    let mut nearest: Vec<(T, usize)> = (0..m)
        .map(|j| {
            let d = (0..m)
                .filter(|&k| k != j)
                .map(|k| (pts[j] - pts[k]).norm())
                .fold(T::infinity(), T::min);
            (d, j)
        })
        .collect();
    nearest.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    nearest
        .into_iter()
        .take(cap)
        .map(|(_, j)| {
            // Π_{k≠j} (z − z_k), then normalize so that L_j(z_j) = 1.
            let mut coeffs = vec![Complex::new(T::one(), T::zero())];
            let mut at_node = Complex::new(T::one(), T::zero());
            for (k, &zk) in pts.iter().enumerate() {
                if k == j {
                    continue;
                }
                let mut next = vec![Complex::new(T::zero(), T::zero()); coeffs.len() + 1];
                for (i, &c) in coeffs.iter().enumerate() {
                    next[i + 1] += c;
                    next[i] -= c * zk;
                }
                coeffs = next;
                at_node *= pts[j] - zk;
            }
            let inv = at_node.inv();
            Polynomial::new(coeffs.into_iter().map(|c| c * inv).collect())
        })
        .collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Direction {
    Up,
    Down,
}

impl Direction {
    fn better<T: Real>(self, candidate: T, current: T) -> bool {
        match self {
            Direction::Up => candidate > current,
            Direction::Down => candidate < current,
        }
    }
}

struct ProbeContext<T> {
    p: T,
    grid: CircleGrid,
    /// `exp(2πi m / M)`.
    roots: Vec<Complex<T>>,
    /// `z_j^k`, row-major in `k`.
    node_powers: Vec<Vec<Complex<T>>>,
    nodes: Vec<Complex<T>>,
}

impl<T: Real> ProbeContext<T> {
    fn new(nodes: &NodeSet<T>, p: T, oversampling: usize) -> Self {
        let n = nodes.degree();
        let grid = CircleGrid::oversampled(n, oversampling.max(2));
        let angles = nodes.angles();
        let node_powers = (0..=n)
            .map(|k| {
                angles
                    .iter()
                    .map(|&a| Complex::from_polar(T::one(), T::of_usize(k) * a))
                    .collect()
            })
            .collect();
        ProbeContext {
            p,
            roots: grid.unit_points(),
            grid,
            node_powers,
            nodes: nodes.points(),
        }
    }

    fn values(&self, poly: &Polynomial<T>) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
        let on_grid = eval_grid(poly, &self.grid);
        let on_nodes = self.nodes.iter().map(|&z| eval_at(poly, z)).collect();
        (on_grid, on_nodes)
    }

    fn ratio_of(&self, on_grid: &[Complex<T>], on_nodes: &[Complex<T>]) -> Option<T> {
        let norm = power_mean(on_grid, self.p);
        let mean = power_mean(on_nodes, self.p);
        let r = mean / norm;
        (norm > T::zero() && r.is_finite()).then_some(r)
    }

    fn ratio(&self, poly: &Polynomial<T>) -> Option<T> {
        let (g, s) = self.values(poly);
        self.ratio_of(&g, &s)
    }

    /// Single-coefficient complex perturbation ascent with step halving.
    fn refine(&self, start: &Polynomial<T>, dir: Direction, rounds: usize) -> T {
        let (mut g, mut s) = self.values(start);
        let mut current = match self.ratio_of(&g, &s) {
            Some(r) => r,
            None => return T::nan(),
        };
        let m = self.grid.len();
        let inv_m = T::of_usize(m).recip();
        let inv_nodes = T::of_usize(s.len()).recip();
        let scale = (start.parseval_norm_sq() / T::of_usize(start.coeffs().len())).sqrt();
        let mut step = T::of(0.25) * scale;
        let one = T::one();
        let dirs = [
            Complex::new(one, T::zero()),
            Complex::new(-one, T::zero()),
            Complex::new(T::zero(), one),
            Complex::new(T::zero(), -one),
        ];
        for _ in 0..rounds {
            let mut improved = false;
            for (k, powers) in self.node_powers.iter().enumerate() {
                for &d in &dirs {
                    let delta = d * step;
                    let tg: T = (0..m)
                        .map(|i| abs_pow(g[i] + delta * self.roots[(k * i) % m], self.p))
                        .sum();
                    let ts: T = s
                        .iter()
                        .zip(powers)
                        .map(|(&v, &zk)| abs_pow(v + delta * zk, self.p))
                        .sum();
                    if tg <= T::zero() {
                        continue;
                    }
                    let r = (ts * inv_nodes) / (tg * inv_m);
                    if r.is_finite() && dir.better(r, current) {
                        for (i, gi) in g.iter_mut().enumerate() {
                            *gi += delta * self.roots[(k * i) % m];
                        }
                        for (v, &zk) in s.iter_mut().zip(powers) {
                            *v += delta * zk;
                        }
                        current = r;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                step /= T::of(2.0);
            }
        }
        self.ratio_of(&g, &s).unwrap_or(current)
    }
}

/// Degree-≤n polynomial through `(z_{nj}, samples_j)`.
pub fn reconstruct_ls<T: Real>(
    samples: &[Complex<T>],
    nodes: &NodeSet<T>,
) -> Result<Polynomial<T>> {
    if samples.len() != nodes.len() {
        return Err(Error::LengthMismatch {
            expected: nodes.len(),
            actual: samples.len(),
        });
    }
    let a = sampling_matrix(nodes);
    let (smin, _) = extremal_singular_values(&a);
    if smin < T::of(SINGULAR_SIGMA) {
        return Err(Error::Singular {
            sigma_min: smin.to_f64_lossy(),
        });
    }
    // A c = samples / √(n+1).
    let scale = T::of_usize(nodes.len()).sqrt().recip();
    let rhs: Vec<Complex<T>> = samples.iter().map(|&v| v * scale).collect();
    Ok(Polynomial::new(qr_solve(&a, &rhs)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodes::{perturbed_family, roots_of_unity, PerturbationSchedule};
    use crate::polyspace::{circle_norm, eval, sample_mean};
    use std::f64::consts::TAU;

    #[test]
    fn roots_of_unity_are_tight() {
        for n in [0usize, 1, 5, 32] {
            let r = mz_constant_p2(&roots_of_unity::<f64>(n)).unwrap();
            assert!((r.c_p - 1.0).abs() < 1e-9, "n={n}: {}", r.c_p);
            assert!((r.sigma_min.unwrap() - 1.0).abs() < 1e-9);
            assert!((r.sigma_max.unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rotation_keeps_c2_equal_to_one() {
        let r = roots_of_unity::<f64>(9).rotated(0.123);
        assert!((mz_constant_p2(&r).unwrap().c_p - 1.0).abs() < 1e-9);
    }

    #[test]
    fn probe_on_roots_is_one() {
        let r = mz_constant_probe(&roots_of_unity::<f64>(6), 2.0, 50, 1).unwrap();
        assert!((r.c_p - 1.0).abs() < 1e-9);
        assert_eq!(r.method, Method::Probe);
        assert!(r.sigma_min.is_none());
    }

    #[test]
    fn probe_p4_binomial_ratio_is_one() {
        // (1+z) at fifth roots: mean 6, norm 6 in closed form.
        let nodes = roots_of_unity::<f64>(4);
        let p = Polynomial::from_real(&[1.0, 1.0, 0.0, 0.0, 0.0]);
        let mean = sample_mean(&p, &nodes, 4.0).unwrap();
        let norm = circle_norm(&p, 4.0, &CircleGrid::oversampled(4, 32)).unwrap();
        assert!((mean - 6.0).abs() < 1e-12 && (norm - 6.0).abs() < 1e-12);
        let r = mz_constant_probe(&nodes, 4.0, 20, 3).unwrap();
        assert!(r.c_p >= 1.0);
    }

    #[test]
    fn probe_matches_svd_for_alternating() {
        let z =
            perturbed_family::<f64>(8, &PerturbationSchedule::alternating(0.2).unwrap()).unwrap();
        let exact = mz_constant_p2(&z).unwrap();
        let probe = mz_constant_probe(&z, 2.0, 2000, 11).unwrap();
        assert!(probe.c_p <= exact.c_p * (1.0 + 1e-9));
        assert!((probe.c_p - exact.c_p).abs() < 1e-6 * exact.c_p);
    }

    #[test]
    fn ratio_lies_in_spectral_interval() {
        let z =
            perturbed_family::<f64>(10, &PerturbationSchedule::random(0.3, 5).unwrap()).unwrap();
        let rep = mz_constant_p2(&z).unwrap();
        let grid = CircleGrid::oversampled(10, 4);
        for seed in 0..30 {
            let p = random_poly::<f64>(10, seed);
            let r = sample_mean(&p, &z, 2.0).unwrap() / circle_norm(&p, 2.0, &grid).unwrap();
            assert!(r >= rep.lower_frame * (1.0 - 1e-12) && r <= rep.upper_frame * (1.0 + 1e-12));
        }
    }

    #[test]
    fn near_duplicate_pair_is_detected_and_monotone() {
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-3, 1e-4] {
            let mut angles = roots_of_unity::<f64>(7).angles().to_vec();
            angles[3] = angles[2] + eps;
            let z = NodeSet::new(7, angles).unwrap();
            let lo = mz_constant_probe(&z, 2.0, 10, 0).unwrap().lower_frame;
            assert!(lo < prev, "eps={eps}: {lo} !< {prev}");
            prev = lo;
            let exact = mz_constant_p2(&z).unwrap().lower_frame;
            assert!(lo >= exact * (1.0 - 1e-9));
        }
        assert!(prev < 1e-6);
        let mut angles = roots_of_unity::<f64>(7).angles().to_vec();
        angles[3] = angles[2] + 1e-3;
        let z = NodeSet::new(7, angles).unwrap();
        let cfg = |budget| ProbeConfig {
            budget,
            singular_vectors: false,
            refine_rounds: 0,
            ..ProbeConfig::default()
        };
        let small = mz_constant_probe_with(&z, 3.0, &cfg(5))
            .unwrap()
            .lower_frame;
        let large = mz_constant_probe_with(&z, 3.0, &cfg(200))
            .unwrap()
            .lower_frame;
        assert!(large <= small);
    }

    #[test]
    fn probe_is_rotation_invariant() {
        let z =
            perturbed_family::<f64>(9, &PerturbationSchedule::random(0.25, 1).unwrap()).unwrap();
        for p in [1.5, 3.0] {
            let a = mz_constant_probe(&z, p, 40, 2).unwrap();
            let b = mz_constant_probe(&z.rotated(1.234), p, 40, 2).unwrap();
            assert!((a.c_p - b.c_p).abs() < 1e-9 * a.c_p, "p={p}");
        }
        let a = mz_constant_p2(&z).unwrap().c_p;
        let b = mz_constant_p2(&z.rotated(-2.5)).unwrap().c_p;
        assert!((a - b).abs() < 1e-9 * a);
    }

    #[test]
    fn singular_error_for_nearly_coincident_nodes() {
        let mut angles = roots_of_unity::<f64>(5).angles().to_vec();
        // Three nodes within 2e-7 give σ_min of order 1e-14.
        angles[1] = angles[0] + 1e-7;
        angles[2] = angles[0] + 2e-7;
        let z = NodeSet::new(5, angles).unwrap();
        assert!(matches!(mz_constant_p2(&z), Err(Error::Singular { .. })));
        let samples = vec![Complex::new(1.0, 0.0); 6];
        assert!(matches!(
            reconstruct_ls(&samples, &z),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn reconstruct_exact_and_zero() {
        let nodes = roots_of_unity::<f64>(4);
        let samples: Vec<Complex<f64>> = nodes
            .angles()
            .iter()
            .map(|&a| Complex::from_polar(1.0, 2.0 * a))
            .collect();
        let p = reconstruct_ls(&samples, &nodes).unwrap();
        for (k, c) in p.coeffs().iter().enumerate() {
            let e = if k == 2 { 1.0 } else { 0.0 };
            assert!((c - Complex::new(e, 0.0)).norm() < 1e-10);
        }
        let zero = reconstruct_ls(&[Complex::new(0.0, 0.0); 5], &nodes).unwrap();
        assert!(zero.coeffs().iter().all(|c| c.norm() == 0.0));
        assert!(matches!(
            reconstruct_ls(&[Complex::new(0.0, 0.0); 3], &nodes),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn reconstruct_noise_bound() {
        let n = 32;
        let nodes =
            perturbed_family::<f64>(n, &PerturbationSchedule::alternating(0.24).unwrap()).unwrap();
        let truth = random_poly::<f64>(n, 77);
        let noise = 1e-8;
        let samples: Vec<Complex<f64>> = nodes
            .angles()
            .iter()
            .enumerate()
            .map(|(j, &a)| eval(&truth, a) + Complex::from_polar(noise, TAU * j as f64 / 7.0))
            .collect();
        let rec = reconstruct_ls(&samples, &nodes).unwrap();
        let err = rec
            .coeffs()
            .iter()
            .zip(truth.coeffs())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let smin = mz_constant_p2(&nodes).unwrap().sigma_min.unwrap();
        assert!(err <= noise * ((n + 1) as f64).sqrt() / smin, "{err}");
        assert!(err > 0.0);
    }

    #[test]
    fn single_precision_roots() {
        let r = mz_constant_p2(&roots_of_unity::<f32>(16)).unwrap();
        assert!((r.c_p - 1.0).abs() < 1e-4);
    }

    #[test]
    fn csv_row_has_empty_sigma_for_probes() {
        let z = roots_of_unity::<f64>(3);
        let rep = mz_constant_probe(&z, 3.0, 5, 0).unwrap();
        let mut w = csv::Writer::from_writer(vec![]);
        w.serialize(rep.row(Some(&PerturbationSchedule::alternating(0.1).unwrap())))
            .unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "n,p,delta,schedule_kind,lower_frame,upper_frame,c_p,sigma_min,sigma_max,method"
        );
        assert!(lines.next().unwrap().ends_with(",,,probe"));
    }
}
