//! Threshold sweeps and necessity runs with deterministic CSV/JSON output.
//!
//! Cells run in parallel; results are collected in `(n, δ)` order so the
//! emitted files depend only on the configuration.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lemmas::{
    critical_exponent, kadets_threshold, lemma_ratio_bound, reduction_schedule, LemmaProbe,
    LemmaRow, ReductionScaling,
};
use crate::mzbounds::{mz_constant_p2, mz_constant_probe, MzReport};
use crate::nodes::{necessity_family, perturbed_family, PerturbationSchedule, ScheduleKind};
use crate::polyspace::{CircleGrid, DEFAULT_OVERSAMPLING};
use crate::weights::{
    ap_constant, divisor_guard, generating_weight, helson_szego_check, phi_limit_deviation,
    v_kappa, ApReport, RadiusRule,
};

pub const SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_N_LIST: [usize; 5] = [16, 32, 64, 128, 256];
/// How far above the threshold a necessity run may go.
pub const NECESSITY_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// `0.05, 0.10, ...` below `t − 0.01`, then `t − 0.01, t, t + 0.02`.
pub fn default_delta_list(threshold: f64) -> Vec<f64> {
    let round = |x: f64| (x * 1e9).round() / 1e9;
    let mut out: Vec<f64> = (1..)
        .map(|k| round(0.05 * k as f64))
        .take_while(|&d| d < threshold - 0.01 - 1e-12)
        .collect();
    out.extend([
        round(threshold - 0.01),
        round(threshold),
        round(threshold + 0.02),
    ]);
    out
}

/// Exact `p = 2` constants when `p = 2`, probe estimates otherwise.
pub fn mz_constant_auto(
    nodes: &crate::nodes::NodeSet<f64>,
    p: f64,
    budget: usize,
    seed: u64,
) -> Result<MzReport<f64>> {
    if p == 2.0 {
        mz_constant_p2(nodes)
    } else {
        mz_constant_probe(nodes, p, budget, seed)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    p: f64,
    pub n_list: Vec<usize>,
    pub delta_list: Vec<f64>,
    pub schedule: ScheduleKind,
    pub kappa: f64,
    pub oversampling: usize,
    pub probe_budget: usize,
    pub seed: u64,
    pub reduction: ReductionScaling,
}

impl SweepConfig {
    /// Default grid of `n` and `δ` bracketing the threshold for `p`.
    pub fn new(p: f64) -> Result<Self> {
        let threshold = kadets_threshold(p)?;
        Ok(SweepConfig {
            p,
            n_list: DEFAULT_N_LIST.to_vec(),
            delta_list: default_delta_list(threshold),
            schedule: ScheduleKind::Alternating,
            kappa: 100.0,
            oversampling: DEFAULT_OVERSAMPLING,
            probe_budget: 200,
            seed: 0,
            reduction: ReductionScaling::HalfQ,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        critical_exponent(self.p).expect("validated at construction")
    }

    pub fn threshold(&self) -> f64 {
        0.5 / self.q()
    }

    fn validate(&self) -> Result<()> {
        critical_exponent(self.p)?;
        if self.n_list.is_empty() || self.delta_list.is_empty() {
            return Err(Error::param("sweep", "n and delta lists must be non-empty"));
        }
        if self.schedule == ScheduleKind::Explicit {
            return Err(Error::param(
                "schedule",
                "explicit schedules cannot be swept",
            ));
        }
        if self.oversampling < 8 {
            return Err(Error::param("grid-oversample", "must be at least 8"));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::param("kappa", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub threshold: f64,
    pub delta: f64,
    pub schedule_kind: String,
    pub method: Option<String>,
    pub lower_frame: Option<f64>,
    pub upper_frame: Option<f64>,
    pub c_p: Option<f64>,
    pub sigma_min: Option<f64>,
    pub sigma_max: Option<f64>,
    pub k_p: Option<f64>,
    pub argmax_center: Option<f64>,
    pub argmax_length: Option<f64>,
    pub grid_m: Option<usize>,
    pub v_sup: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Growth {
    pub delta: f64,
    pub n_prev: usize,
    pub n_last: usize,
    /// `c_p(n_last)/c_p(n_prev)`.
    pub c_p_ratio: Option<f64>,
    /// `k_p(n_last)/k_p(n_prev)`.
    pub k_p_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub schema: u32,
    pub p: f64,
    pub q: f64,
    pub threshold: f64,
    pub schedule_kind: String,
    pub kappa: f64,
    pub seed: u64,
    pub oversampling: usize,
    pub probe_budget: usize,
    pub n_list: Vec<usize>,
    pub delta_list: Vec<f64>,
    pub cells: usize,
    pub errored: usize,
    pub growth: Vec<Growth>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepOutput {
    pub summary: SweepSummary,
    pub rows: Vec<SweepRow>,
}

impl SweepOutput {
    pub fn has_errors(&self) -> bool {
        self.summary.errored > 0
    }
}

struct Cell {
    mz: MzReport<f64>,
    ap: ApReport<f64>,
    v_sup: f64,
}

fn run_cell(cfg: &SweepConfig, n: usize, delta: f64) -> Result<Cell> {
    let schedule = PerturbationSchedule::new(cfg.schedule, delta, cfg.seed)?;
    let nodes = perturbed_family::<f64>(n, &schedule)?;
    let mz = mz_constant_auto(&nodes, cfg.p, cfg.probe_budget, cfg.seed)?;
    let grid = CircleGrid::oversampled(n, cfg.oversampling);
    let weight = generating_weight(&nodes, RadiusRule::DegreeRatio, &grid)?;
    let ap = ap_constant(&weight, cfg.p)?;
    let reduced = reduction_schedule(n, &schedule, cfg.p, cfg.reduction)?;
    let v = v_kappa(n, &reduced, cfg.kappa, &grid)?;
    let v_sup = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(Cell { mz, ap, v_sup })
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let (q, threshold) = (cfg.q(), cfg.threshold());
    let cells: Vec<(usize, f64)> = cfg
        .n_list
        .iter()
        .flat_map(|&n| cfg.delta_list.iter().map(move |&d| (n, d)))
        .collect();
    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|&(n, delta)| {
            let mut row = SweepRow {
                n,
                p: cfg.p,
                q,
                threshold,
                delta,
                schedule_kind: cfg.schedule.as_str().to_string(),
                method: None,
                lower_frame: None,
                upper_frame: None,
                c_p: None,
                sigma_min: None,
                sigma_max: None,
                k_p: None,
                argmax_center: None,
                argmax_length: None,
                grid_m: None,
                v_sup: None,
                error: None,
            };
            match run_cell(cfg, n, delta) {
                Ok(c) => {
                    row.method = Some(c.mz.method.as_str().to_string());
                    row.lower_frame = Some(c.mz.lower_frame);
                    row.upper_frame = Some(c.mz.upper_frame);
                    row.c_p = Some(c.mz.c_p);
                    row.sigma_min = c.mz.sigma_min;
                    row.sigma_max = c.mz.sigma_max;
                    row.k_p = Some(c.ap.k_p);
                    row.argmax_center = Some(c.ap.argmax_arc.center);
                    row.argmax_length = Some(c.ap.argmax_arc.length);
                    row.grid_m = Some(c.ap.grid_m);
                    row.v_sup = Some(c.v_sup);
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            row
        })
        .collect();

    let growth = growth_diagnostics(&cfg.n_list, &cfg.delta_list, &rows);
    let errored = rows.iter().filter(|r| r.error.is_some()).count();
    Ok(SweepOutput {
        summary: SweepSummary {
            schema: SCHEMA_VERSION,
            p: cfg.p,
            q,
            threshold,
            schedule_kind: cfg.schedule.as_str().to_string(),
            kappa: cfg.kappa,
            seed: cfg.seed,
            oversampling: cfg.oversampling,
            probe_budget: cfg.probe_budget,
            n_list: cfg.n_list.clone(),
            delta_list: cfg.delta_list.clone(),
            cells: rows.len(),
            errored,
            growth,
        },
        rows,
    })
}

fn growth_diagnostics(n_list: &[usize], delta_list: &[f64], rows: &[SweepRow]) -> Vec<Growth> {
    let mut sorted = n_list.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() < 2 {
        return Vec::new();
    }
    let (n_prev, n_last) = (sorted[sorted.len() - 2], sorted[sorted.len() - 1]);
    let find = |n: usize, d: f64| rows.iter().find(|r| r.n == n && r.delta == d);
    let ratio = |a: Option<f64>, b: Option<f64>| Some(b? / a?);
    delta_list
        .iter()
        .map(|&delta| {
            let (a, b) = (find(n_prev, delta), find(n_last, delta));
            Growth {
                delta,
                n_prev,
                n_last,
                c_p_ratio: ratio(a.and_then(|r| r.c_p), b.and_then(|r| r.c_p)),
                k_p_ratio: ratio(a.and_then(|r| r.k_p), b.and_then(|r| r.k_p)),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityConfig {
    pub n_list: Vec<usize>,
    pub delta: f64,
    pub p: f64,
    pub oversampling: usize,
    pub probe_budget: usize,
    pub seed: u64,
}

impl NecessityConfig {
    pub fn new(p: f64, delta: f64) -> Self {
        NecessityConfig {
            n_list: DEFAULT_N_LIST.to_vec(),
            delta,
            p,
            oversampling: DEFAULT_OVERSAMPLING,
            probe_budget: 200,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityRow {
    pub n: usize,
    pub degree: usize,
    pub p: f64,
    pub delta: f64,
    pub method: Option<String>,
    pub c_p: Option<f64>,
    pub k_p: Option<f64>,
    pub phi_deviation: Option<f64>,
    pub divisor_guard: f64,
    pub grid_m: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessitySummary {
    pub schema: u32,
    pub p: f64,
    pub q: f64,
    pub threshold: f64,
    pub delta: f64,
    pub n_list: Vec<usize>,
    pub errored: usize,
    /// `k_p` ratio over the last doubling of `n`.
    pub k_p_last_ratio: Option<f64>,
    pub c_p_last_ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NecessityOutput {
    pub summary: NecessitySummary,
    pub rows: Vec<NecessityRow>,
}

impl NecessityOutput {
    pub fn has_errors(&self) -> bool {
        self.summary.errored > 0
    }
}

pub fn run_necessity(cfg: &NecessityConfig) -> Result<NecessityOutput> {
    let q = critical_exponent(cfg.p)?;
    let threshold = 0.5 / q;
    if !(cfg.delta >= 0.0 && cfg.delta <= threshold + NECESSITY_MARGIN && cfg.delta < 0.5) {
        return Err(Error::param(
            "delta",
            format!(
                "{} exceeds 1/(2q) + {NECESSITY_MARGIN} = {}",
                cfg.delta,
                threshold + NECESSITY_MARGIN
            ),
        ));
    }
    if cfg.oversampling < 8 {
        return Err(Error::param("grid-oversample", "must be at least 8"));
    }
    let rows: Vec<NecessityRow> = cfg
        .n_list
        .par_iter()
        .map(|&n| {
            let grid = CircleGrid::oversampled(2 * n, cfg.oversampling);
            let mut row = NecessityRow {
                n,
                degree: 2 * n,
                p: cfg.p,
                delta: cfg.delta,
                method: None,
                c_p: None,
                k_p: None,
                phi_deviation: None,
                divisor_guard: divisor_guard(n, &grid),
                grid_m: grid.len(),
                error: None,
            };
            let mut cell = || -> Result<()> {
                let nodes = necessity_family::<f64>(n, cfg.delta)?;
                let weight = generating_weight(&nodes, RadiusRule::DegreeRatio, &grid)?;
                row.k_p = Some(ap_constant(&weight, cfg.p)?.k_p);
                if n >= 4 {
                    row.phi_deviation = Some(phi_limit_deviation(n, cfg.delta, &grid)?);
                }
                let mz = mz_constant_auto(&nodes, cfg.p, cfg.probe_budget, cfg.seed)?;
                row.method = Some(mz.method.as_str().to_string());
                row.c_p = Some(mz.c_p);
                Ok(())
            };
            if let Err(e) = cell() {
                row.error = Some(e.to_string());
            }
            row
        })
        .collect();

    let mut order: Vec<&NecessityRow> = rows.iter().collect();
    order.sort_by_key(|r| r.n);
    let last_ratio = |f: fn(&NecessityRow) -> Option<f64>| match order.as_slice() {
        [.., a, b] if a.n < b.n => Some(f(b)? / f(a)?),
        _ => None,
    };
    let summary = NecessitySummary {
        schema: SCHEMA_VERSION,
        p: cfg.p,
        q,
        threshold,
        delta: cfg.delta,
        n_list: cfg.n_list.clone(),
        errored: rows.iter().filter(|r| r.error.is_some()).count(),
        k_p_last_ratio: last_ratio(|r| r.k_p),
        c_p_last_ratio: last_ratio(|r| r.c_p),
    };
    Ok(NecessityOutput { summary, rows })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsRow {
    pub n: usize,
    pub kappa: f64,
    pub delta: f64,
    pub schedule_kind: String,
    pub u_sup: f64,
    pub v_sup: f64,
    pub conj_residual: f64,
    pub passes: bool,
    pub marginal: bool,
    pub margin: f64,
}

pub fn run_hs_check(
    n_list: &[usize],
    schedule: &PerturbationSchedule,
    kappa: f64,
    oversampling: usize,
) -> Result<Vec<HsRow>> {
    n_list
        .par_iter()
        .map(|&n| {
            let grid = CircleGrid::oversampled(n, oversampling);
            let r = helson_szego_check(n, schedule, kappa, &grid)?;
            Ok(HsRow {
                n,
                kappa,
                delta: schedule.delta,
                schedule_kind: schedule.kind.as_str().to_string(),
                u_sup: r.u_sup,
                v_sup: r.v_sup,
                conj_residual: r.conj_residual,
                passes: r.passes,
                marginal: r.marginal,
                margin: r.margin,
            })
        })
        .collect()
}

pub fn run_lemma_check(
    n_list: &[usize],
    alpha: f64,
    kappa: f64,
    schedule: &PerturbationSchedule,
) -> Result<Vec<LemmaRow>> {
    n_list
        .par_iter()
        .map(|&n| {
            let probe = LemmaProbe::new(n, kappa, alpha, schedule.clone())?;
            Ok(LemmaRow::new(&probe, lemma_ratio_bound(&probe)?))
        })
        .collect()
}

/// Serialize rows as CSV with a header; `None` becomes an empty cell.
pub fn write_csv<S: Serialize, W: Write>(rows: &[S], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(std::io::Error::other)?;
    }
    w.flush()
}

pub fn write_json<S: Serialize, W: Write>(value: &S, mut out: W) -> std::io::Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(std::io::Error::other)?;
    out.write_all(b"\n")
}

/// Write `<stem>.csv` plus `<stem>_summary.json`, or a single `<stem>.json`.
pub fn write_report<R: Serialize, S: Serialize>(
    dir: &Path,
    stem: &str,
    format: Format,
    rows: &[R],
    summary: &S,
) -> std::io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    match format {
        Format::Csv => {
            let csv_path = dir.join(format!("{stem}.csv"));
            let json_path = dir.join(format!("{stem}_summary.json"));
            write_csv(rows, fs::File::create(&csv_path)?)?;
            write_json(summary, fs::File::create(&json_path)?)?;
            Ok(vec![csv_path, json_path])
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a, S, R> {
                summary: &'a S,
                rows: &'a [R],
            }
            let path = dir.join(format!("{stem}.json"));
            write_json(&Doc { summary, rows }, fs::File::create(&path)?)?;
            Ok(vec![path])
        }
    }
}
