//! The noise functionals: `μ(Φ; ρ₀)`, `μ_c`, EBⁿ membership and `n_c`.

use std::cmp::Ordering;

use nalgebra::Vector3;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::channel::{self, BlochVector, Channel, DensityMatrix, UnitalChannel};
use crate::error::{check_domain, Error, Result};
use crate::gad;
use crate::numerics::{eigenvalues_unchecked, partial_transpose, trace_norm, HermitianMat4};
use crate::optim::{self, SimplexConfig};
use crate::separability::{self, reference_state, EB_TRACE_NORM_TOL, SEP_TOL};

/// Default iteration cap for `n_c`.
pub const DEFAULT_CAP: u32 = 64;
/// Restarts whose minima differ by more than this are reported as a
/// possibly multimodal landscape.
pub const RESTART_SPREAD_WARN: f64 = 1e-3;

/// Iteration order at which a channel becomes entanglement breaking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NcResult {
    Finite(u32),
    /// No EB power up to `cap`. `divergent` is set only when a closed form
    /// proves that no power is ever EB.
    ExceedsCap {
        cap: u32,
        divergent: bool,
    },
}

impl NcResult {
    pub fn finite(&self) -> Option<u32> {
        match self {
            NcResult::Finite(n) => Some(*n),
            NcResult::ExceedsCap { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            NcResult::Finite(n) => n.to_string(),
            NcResult::ExceedsCap { .. } => "exceeds_cap".to_string(),
        }
    }
}

/// Larger means the channel survives more iterations.
impl Ord for NcResult {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (NcResult::Finite(a), NcResult::Finite(b)) => a.cmp(b),
            (NcResult::Finite(_), NcResult::ExceedsCap { .. }) => Ordering::Less,
            (NcResult::ExceedsCap { .. }, NcResult::Finite(_)) => Ordering::Greater,
            (NcResult::ExceedsCap { .. }, NcResult::ExceedsCap { .. }) => Ordering::Equal,
        }
    }
}

impl PartialOrd for NcResult {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for NcResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NcResult::Finite(n) => s.serialize_u32(*n),
            NcResult::ExceedsCap { .. } => s.serialize_str("exceeds_cap"),
        }
    }
}

/// Settings of the bisection and of the multistart search over `ρ₀`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    /// Bisection width on μ.
    pub tol: f64,
    /// Number of grid points used as simplex starts.
    pub restarts: usize,
    pub simplex: SimplexConfig,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            restarts: 3,
            simplex: SimplexConfig::default(),
        }
    }
}

impl OptimizerConfig {
    pub fn with_tol(tol: f64) -> Result<Self> {
        check_domain("tol", tol, tol > 0.0 && tol <= 1e-3, "(0, 1e-3]")?;
        Ok(Self {
            tol,
            ..Self::default()
        })
    }
}

/// Bisection threshold `μ(Φ; ρ₀)` against a fixed Choi state.
///
/// The reference state `ρ₀ ⊗ 1/2` is invariant under the partial transpose,
/// so the noisy state's partial transpose is a convex mixture of two fixed
/// matrices.
pub(crate) struct Threshold {
    pt_gamma: HermitianMat4,
    separable_at_zero: bool,
}

impl Threshold {
    pub(crate) fn new(c: &Channel) -> Result<Self> {
        let g = channel::choi(c)?;
        let pt_gamma = partial_transpose(g.matrix());
        let separable_at_zero = eigenvalues_unchecked(&pt_gamma)[0] >= -SEP_TOL;
        Ok(Self {
            pt_gamma,
            separable_at_zero,
        })
    }

    pub(crate) fn is_eb(&self) -> bool {
        self.separable_at_zero
    }

    pub(crate) fn mu(&self, rho0: &DensityMatrix, tol: f64) -> f64 {
        if self.separable_at_zero {
            return 0.0;
        }
        let r = reference_state(rho0);
        let separable = |mu: f64| {
            let m = self.pt_gamma * nalgebra::Complex::new(1.0 - mu, 0.0)
                + r * nalgebra::Complex::new(mu, 0.0);
            eigenvalues_unchecked(&m)[0] >= -SEP_TOL
        };
        let (mut lo, mut hi) = (0.0, 1.0);
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if separable(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// `μ(Φ; ρ₀)`: smallest admixture of `ρ₀` that makes the Choi state
/// separable, to within `tol` from above.
pub fn mu_given_rho0(c: &Channel, rho0: &DensityMatrix, tol: f64) -> Result<f64> {
    check_domain("tol", tol, tol > 0.0 && tol <= 1e-3, "(0, 1e-3]")?;
    Ok(Threshold::new(c)?.mu(rho0, tol))
}

/// `max{0, (‖T‖₁ - 1)/‖T‖₁}`.
pub fn mu_c_unital(t: &UnitalChannel) -> f64 {
    let s = t.trace_norm();
    if s <= 1.0 + EB_TRACE_NORM_TOL {
        0.0
    } else {
        (s - 1.0) / s
    }
}

/// Result of the multistart search over reference states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericMu {
    pub mu_c: f64,
    pub argmin: Vector3<f64>,
    /// Largest minus smallest restart minimum.
    pub restart_spread: f64,
}

/// Starting points: the six poles of the Bloch sphere, then the eight cube
/// corners and twelve edge midpoints scaled to radius 0.7.
pub fn start_grid() -> Vec<Vector3<f64>> {
    let mut pts = Vec::with_capacity(26);
    for axis in 0..3 {
        for s in [1.0, -1.0] {
            let mut v = Vector3::zeros();
            v[axis] = s;
            pts.push(v);
        }
    }
    for sx in [1.0, -1.0] {
        for sy in [1.0, -1.0] {
            for sz in [1.0, -1.0] {
                pts.push(Vector3::new(sx, sy, sz).normalize() * 0.7);
            }
        }
    }
    for zero in 0..3 {
        for s1 in [1.0, -1.0] {
            for s2 in [1.0, -1.0] {
                let mut v = Vector3::zeros();
                let others: Vec<usize> = (0..3).filter(|&k| k != zero).collect();
                v[others[0]] = s1;
                v[others[1]] = s2;
                pts.push(v.normalize() * 0.7);
            }
        }
    }
    pts
}

fn to_ball(x: &[f64; 3]) -> BlochVector {
    let v = Vector3::from(*x);
    let n = v.norm();
    let v = if n > 1.0 { v / n } else { v };
    BlochVector::from_vector(v).expect("projected into the ball")
}

/// `μ_c` by minimizing the bisection threshold over the Bloch ball.
pub fn mu_c_generic(c: &Channel, cfg: &OptimizerConfig) -> Result<GenericMu> {
    let th = Threshold::new(c)?;
    if th.is_eb() {
        return Ok(GenericMu {
            mu_c: 0.0,
            argmin: Vector3::zeros(),
            restart_spread: 0.0,
        });
    }
    let objective = |x: &[f64; 3]| th.mu(&to_ball(x).to_density(), cfg.tol);

    let grid = start_grid();
    let scored: Vec<(usize, f64)> = grid
        .par_iter()
        .enumerate()
        .map(|(i, v)| (i, objective(&[v.x, v.y, v.z])))
        .collect();
    let mut order = scored.clone();
    order.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));

    let runs: Vec<(f64, [f64; 3])> = order
        .iter()
        .take(cfg.restarts.max(1))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|&&(i, _)| {
            let v = grid[i];
            let m = optim::minimize(objective, [v.x, v.y, v.z], &cfg.simplex);
            (m.value, m.x)
        })
        .collect();

    let (mut best, mut arg) = (runs[0].0, runs[0].1);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &(v, x) in &runs {
        lo = lo.min(v);
        hi = hi.max(v);
        if v < best {
            best = v;
            arg = x;
        }
    }
    Ok(GenericMu {
        mu_c: best,
        argmin: to_ball(&arg).vector(),
        restart_spread: hi - lo,
    })
}

/// `μ_c` with the closed forms for unital and GAD channels.
pub fn mu_c(c: &Channel, cfg: &OptimizerConfig) -> Result<f64> {
    match c {
        Channel::Unital(u) => Ok(mu_c_unital(u)),
        Channel::Gad(g) => gad::mu_c_gad(g.p(), g.gamma()),
        Channel::Kraus(_) => Ok(mu_c_generic(c, cfg)?.mu_c),
    }
}

/// `d / (1 + d)`.
pub fn mu_c_upper_bound(d: u32) -> Result<f64> {
    if d < 2 {
        return Err(Error::OutOfDomain {
            name: "d",
            value: d as f64,
            domain: "d ≥ 2",
        });
    }
    Ok(d as f64 / (1.0 + d as f64))
}

/// Upper end of the ensemble bound,
/// `Σ_j (p_j μ_j)/(1-μ_j) / Σ_k p_k/(1-μ_k)`.
pub fn ensemble_upper_bound(weights: &[f64], mus: &[f64]) -> f64 {
    let num: f64 = weights
        .iter()
        .zip(mus)
        .map(|(p, m)| p * m / (1.0 - m))
        .sum();
    let den: f64 = weights.iter().zip(mus).map(|(p, m)| p / (1.0 - m)).sum();
    num / den
}

/// Whether `cⁿ` is entanglement breaking.
pub fn ebn_member(c: &Channel, n: u32) -> Result<bool> {
    if n == 0 {
        return Err(Error::ZeroPower);
    }
    match c {
        Channel::Unital(u) => Ok(trace_norm(&u.t().pow(n)) <= 1.0 + EB_TRACE_NORM_TOL),
        other => separability::is_eb(&channel::channel_power(other, n)?),
    }
}

/// EBⁿ flags for `n = 1..=cap`, computed by one pass over the powers.
pub fn ebn_flags(c: &Channel, cap: u32) -> Result<Vec<bool>> {
    let mut flags = Vec::with_capacity(cap as usize);
    match c {
        Channel::Unital(u) => {
            let mut acc = *u.t();
            for _ in 0..cap {
                flags.push(trace_norm(&acc) <= 1.0 + EB_TRACE_NORM_TOL);
                acc *= u.t();
            }
        }
        other => {
            let base = channel::to_kraus(other)?;
            let mut acc: Channel = base.clone().into();
            let base: Channel = base.into();
            for n in 0..cap {
                // once EB, every further power stays EB
                let eb = flags.last().copied().unwrap_or(false) || separability::is_eb(&acc)?;
                flags.push(eb);
                if eb {
                    flags.resize(cap as usize, true);
                    break;
                }
                if n + 1 < cap {
                    acc = channel::compose(&acc, &base)?;
                }
            }
        }
    }
    Ok(flags)
}

fn nc_from_flags(flags: &[bool], cap: u32) -> NcResult {
    flags
        .iter()
        .position(|&f| f)
        .map(|i| NcResult::Finite(i as u32 + 1))
        .unwrap_or(NcResult::ExceedsCap {
            cap,
            divergent: false,
        })
}

/// Smallest `n ≤ cap` with `cⁿ` entanglement breaking.
pub fn n_c(c: &Channel, cap: u32) -> Result<NcResult> {
    check_domain("cap", cap as f64, cap >= 1, "cap ≥ 1")?;
    Ok(nc_from_flags(&ebn_flags(c, cap)?, cap))
}

/// Summary of both functionals for one channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoiseReport {
    pub mu_c: f64,
    pub n_c: NcResult,
    pub cap: u32,
    pub ebn: Vec<bool>,
    /// Spread between restart minima, present only for the generic search.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restart_spread: Option<f64>,
}

pub fn analyze(c: &Channel, cap: u32, cfg: &OptimizerConfig) -> Result<NoiseReport> {
    check_domain("cap", cap as f64, cap >= 1, "cap ≥ 1")?;
    let (ebn, n_c) = match c {
        Channel::Gad(g) => {
            let flags: Vec<bool> = (1..=cap).map(|n| g.p() >= gad::p_n(g.gamma(), n)).collect();
            (flags, gad::n_c_gad(g.p(), g.gamma(), cap)?)
        }
        other => {
            let flags = ebn_flags(other, cap)?;
            let nc = nc_from_flags(&flags, cap);
            (flags, nc)
        }
    };
    let (mut mu, spread) = match c {
        Channel::Kraus(_) => {
            let g = mu_c_generic(c, cfg)?;
            (g.mu_c, Some(g.restart_spread))
        }
        other => (mu_c(other, cfg)?, None),
    };
    if ebn[0] {
        mu = 0.0;
    }
    Ok(NoiseReport {
        mu_c: mu,
        n_c,
        cap,
        ebn,
        restart_spread: spread,
    })
}
