//! Triangular node families on the unit circle.
//!
//! A [`NodeSet`] is one row `Z(n)` of a family: `n + 1` distinct points
//! stored as angles. Index `j` pairs the point with the root of unity
//! `ω_{nj} = exp(2πij/(n+1))`, so the stored order is the index order and
//! not the sorted order of the angles.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::real::{wrap_angle, Real};

/// Coincidence threshold on chordal distance, scaled by `1/(n+1)`.
const COLLISION_CHORD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "NodeSetRepr<T>",
    bound(deserialize = "T: Real + Deserialize<'de>")
)]
pub struct NodeSet<T> {
    n: usize,
    angles: Vec<T>,
}

#[derive(Deserialize)]
struct NodeSetRepr<T> {
    n: usize,
    angles: Vec<T>,
}

impl<T: Real> TryFrom<NodeSetRepr<T>> for NodeSet<T> {
    type Error = Error;

    fn try_from(raw: NodeSetRepr<T>) -> Result<Self> {
        NodeSet::new(raw.n, raw.angles)
    }
}

impl<T: Real> NodeSet<T> {
    /// Validates length and distinctness; angles are reduced to `[0, 2π)`.
    pub fn new(n: usize, angles: Vec<T>) -> Result<Self> {
        if angles.len() != n + 1 {
            return Err(Error::LengthMismatch {
                expected: n + 1,
                actual: angles.len(),
            });
        }
        if let Some(a) = angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::param("angles", format!("non-finite angle {a}")));
        }
        let set = NodeSet {
            n,
            angles: angles.into_iter().map(wrap_angle).collect(),
        };
        set.check_distinct()?;
        Ok(set)
    }

    /// Degree bound `n`; the set holds `n + 1` points.
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn angles(&self) -> &[T] {
        &self.angles
    }

    pub fn points(&self) -> Vec<Complex<T>> {
        self.angles
            .iter()
            .map(|&a| Complex::from_polar(T::one(), a))
            .collect()
    }

    /// Every point multiplied by `exp(i·phi)`.
    pub fn rotated(&self, phi: T) -> NodeSet<T> {
        NodeSet {
            n: self.n,
            angles: self.angles.iter().map(|&a| wrap_angle(a + phi)).collect(),
        }
    }

    /// Rotation taking node 0 to angle 0.
    pub fn canonical(&self) -> NodeSet<T> {
        match self.angles.first() {
            Some(&a0) => self.rotated(-a0),
            None => self.clone(),
        }
    }

    /// Indices sorted by angle.
    fn sorted_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.angles.len()).collect();
        idx.sort_by(|&a, &b| {
            self.angles[a]
                .partial_cmp(&self.angles[b])
                .expect("finite angles")
        });
        idx
    }

    /// Smallest chordal distance between distinct points and the pair attaining it.
    fn min_chord(&self) -> Option<(T, usize, usize)> {
        if self.angles.len() < 2 {
            return None;
        }
        let order = self.sorted_order();
        let tau = T::two_pi();
        let two = T::of(2.0);
        let mut best: Option<(T, usize, usize)> = None;
        for w in 0..order.len() {
            let a = order[w];
            let b = order[(w + 1) % order.len()];
            let mut gap = self.angles[b] - self.angles[a];
            if gap < T::zero() {
                gap += tau;
            }
            let chord = two * (gap / two).sin().abs();
            if best.is_none_or(|(c, _, _)| chord < c) {
                best = Some((chord, a.min(b), a.max(b)));
            }
        }
        best
    }

    fn check_distinct(&self) -> Result<()> {
        let threshold = T::of(COLLISION_CHORD) / T::of_usize(self.n + 1);
        match self.min_chord() {
            Some((chord, first, second)) if chord < threshold => Err(Error::Collision {
                first,
                second,
                distance: chord.to_f64_lossy(),
            }),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScheduleKind {
    Constant,
    Alternating,
    Random,
    OneSidedNecessity,
    Explicit,
}

impl ScheduleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScheduleKind::Constant => "constant",
            ScheduleKind::Alternating => "alternating",
            ScheduleKind::Random => "random",
            ScheduleKind::OneSidedNecessity => "one-sided-necessity",
            ScheduleKind::Explicit => "explicit",
        }
    }
}

impl std::fmt::Display for ScheduleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for ScheduleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "constant" => ScheduleKind::Constant,
            "alternating" => ScheduleKind::Alternating,
            "random" => ScheduleKind::Random,
            "one-sided-necessity" | "necessity" => ScheduleKind::OneSidedNecessity,
            "explicit" => ScheduleKind::Explicit,
            other => return Err(Error::param("schedule", format!("unknown kind `{other}`"))),
        })
    }
}

/// Angular perturbation rule: node `j` of row `n` sits at `2π(j + δ_{nj})/(n+1)`.
///
/// Kinds:
/// - `constant`: `δ_{nj} = δ` (a rigid rotation).
/// - `alternating`: `+δ` for even `j`, `−δ` for odd `j`.
/// - `random`: iid uniform on `[−δ, δ]`, deterministic in `(n, seed)`.
/// - `one-sided-necessity`: `−δ` for `j ≤ ⌊n/2⌋`, `+δ` above; for even `n`
///   this is the extremal necessity family up to a common rotation.
/// - `explicit`: user supplied offsets, one per node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSchedule {
    pub kind: ScheduleKind,
    pub delta: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit_values: Option<Vec<f64>>,
}

impl PerturbationSchedule {
    pub fn new(kind: ScheduleKind, delta: f64, seed: u64) -> Result<Self> {
        if !(delta.is_finite() && delta >= 0.0) {
            return Err(Error::param(
                "delta",
                format!("{delta} must be finite and ≥ 0"),
            ));
        }
        if kind == ScheduleKind::Explicit {
            return Err(Error::param(
                "kind",
                "explicit schedules are built with PerturbationSchedule::explicit",
            ));
        }
        Ok(PerturbationSchedule {
            kind,
            delta,
            seed,
            explicit_values: None,
        })
    }

    pub fn unperturbed() -> Self {
        PerturbationSchedule {
            kind: ScheduleKind::Constant,
            delta: 0.0,
            seed: 0,
            explicit_values: None,
        }
    }

    pub fn constant(delta: f64) -> Result<Self> {
        Self::new(ScheduleKind::Constant, delta, 0)
    }

    pub fn alternating(delta: f64) -> Result<Self> {
        Self::new(ScheduleKind::Alternating, delta, 0)
    }

    pub fn random(delta: f64, seed: u64) -> Result<Self> {
        Self::new(ScheduleKind::Random, delta, seed)
    }

    pub fn one_sided_necessity(delta: f64) -> Result<Self> {
        Self::new(ScheduleKind::OneSidedNecessity, delta, 0)
    }

    /// Amplitude is the largest offset in absolute value.
    pub fn explicit(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("explicit_values", "non-finite offset"));
        }
        let delta = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(PerturbationSchedule {
            kind: ScheduleKind::Explicit,
            delta,
            seed: 0,
            explicit_values: Some(values),
        })
    }

    /// `sup |δ_{nj}| < 1/2`, the standing hypothesis of the product comparison lemma.
    pub fn satisfies_lemma_hypothesis(&self) -> bool {
        self.delta < 0.5
    }

    /// The offsets `δ_{nj}`, `j = 0..=n`.
    pub fn offsets<T: Real>(&self, n: usize) -> Result<Vec<T>> {
        let d = self.delta;
        let raw: Vec<f64> = match self.kind {
            ScheduleKind::Constant => vec![d; n + 1],
            ScheduleKind::Alternating => (0..=n).map(|j| if j % 2 == 0 { d } else { -d }).collect(),
            ScheduleKind::Random => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                rng.set_stream(n as u64);
                (0..=n)
                    .map(|_| {
                        if d > 0.0 {
                            rng.random_range(-d..=d)
                        } else {
                            0.0
                        }
                    })
                    .collect()
            }
            ScheduleKind::OneSidedNecessity => {
                (0..=n).map(|j| if j <= n / 2 { -d } else { d }).collect()
            }
            ScheduleKind::Explicit => {
                let values = self
                    .explicit_values
                    .as_ref()
                    .ok_or_else(|| Error::param("explicit_values", "missing"))?;
                if values.len() != n + 1 {
                    return Err(Error::LengthMismatch {
                        expected: n + 1,
                        actual: values.len(),
                    });
                }
                if let Some(v) = values.iter().find(|v| v.abs() > d) {
                    return Err(Error::param(
                        "explicit_values",
                        format!("offset {v} exceeds amplitude {d}"),
                    ));
                }
                values.clone()
            }
        };
        Ok(raw.into_iter().map(T::of).collect())
    }
}

/// The `(n+1)`th roots of unity in increasing angle order.
pub fn roots_of_unity<T: Real>(n: usize) -> NodeSet<T> {
    let step = T::two_pi() / T::of_usize(n + 1);
    NodeSet {
        n,
        angles: (0..=n).map(|j| T::of_usize(j) * step).collect(),
    }
}

pub fn perturbed_family<T: Real>(n: usize, schedule: &PerturbationSchedule) -> Result<NodeSet<T>> {
    let offsets = schedule.offsets::<T>(n)?;
    let step = T::two_pi() / T::of_usize(n + 1);
    let angles = offsets
        .iter()
        .enumerate()
        .map(|(j, &d)| (T::of_usize(j) + d) * step)
        .collect();
    NodeSet::new(n, angles)
}

/// The extremal family `Z(2n)`:
/// `{e^{2πij/(2n+1)}: j = 0..n} ∪ {e^{−2πi(j−2δ)/(2n+1)}: j = 1..n}`,
/// listed in that order. Degree parameter is `2n`.
pub fn necessity_family<T: Real>(n: usize, delta: T) -> Result<NodeSet<T>> {
    if n == 0 {
        return Err(Error::param("n", "necessity family needs n ≥ 1"));
    }
    if !(delta >= T::zero() && delta < T::of(0.5)) {
        return Err(Error::param(
            "delta",
            format!("{delta} is outside [0, 1/2)"),
        ));
    }
    let m = 2 * n + 1;
    let step = T::two_pi() / T::of_usize(m);
    let two = T::of(2.0);
    let upper = (0..=n).map(|j| T::of_usize(j) * step);
    let lower = (1..=n).map(|j| -(T::of_usize(j) - two * delta) * step);
    NodeSet::new(2 * n, upper.chain(lower).collect())
}

/// Scaled separation `(n+1) · min_{j≠k} |z_{nj} − z_{nk}|`; infinite for a single point.
pub fn separation<T: Real>(nodes: &NodeSet<T>) -> T {
    match nodes.min_chord() {
        Some((chord, _, _)) => T::of_usize(nodes.degree() + 1) * chord,
        None => T::infinity(),
    }
}
