//! One-mode bosonic Gaussian channels `(K, l, β)` with `ħ = 1`,
//! `Δ = [[0, 1], [-1, 0]]` and vacuum variance ½.

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{check_domain, Error, Result};
use crate::measures::NcResult;

/// Tolerance of the complete-positivity condition.
pub const CPT_TOL: f64 = 1e-10;
/// Inclusive tolerance of the EB inequalities.
pub const EB_TOL: f64 = 1e-12;

/// Triplet acting on Weyl operators as `W(z) ↦ W(Kz) exp(-½ zᵀβz + i lᵀz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianChannel {
    k: Matrix2<f64>,
    l: Vector2<f64>,
    beta: Matrix2<f64>,
}

impl GaussianChannel {
    /// Checks `β ∓ (i/2)(Δ - KᵀΔK) ⪰ 0`. For one mode `KᵀΔK = det(K) Δ`, so
    /// the condition is `β₁₁, β₂₂ ≥ 0` and `det β ≥ (1 - det K)²/4`.
    pub fn new(k: Matrix2<f64>, l: Vector2<f64>, beta: Matrix2<f64>) -> Result<Self> {
        if !(k
            .iter()
            .chain(l.iter())
            .chain(beta.iter())
            .all(|x| x.is_finite()))
        {
            return Err(Error::OutOfDomain {
                name: "triplet",
                value: f64::NAN,
                domain: "finite entries",
            });
        }
        let asym = (beta[(0, 1)] - beta[(1, 0)]).abs();
        if asym > CPT_TOL {
            return Err(Error::GaussianNotCpt(-asym));
        }
        let margin = cpt_margin(&k, &beta);
        if margin < -CPT_TOL {
            return Err(Error::GaussianNotCpt(margin));
        }
        Ok(Self { k, l, beta })
    }

    pub fn identity() -> Self {
        Self {
            k: Matrix2::identity(),
            l: Vector2::zeros(),
            beta: Matrix2::zeros(),
        }
    }

    pub fn k(&self) -> &Matrix2<f64> {
        &self.k
    }

    pub fn l(&self) -> &Vector2<f64> {
        &self.l
    }

    pub fn beta(&self) -> &Matrix2<f64> {
        &self.beta
    }
}

/// Smallest eigenvalue of the Hermitian matrix `β + (i/2)(1 - det K) Δ`.
fn cpt_margin(k: &Matrix2<f64>, beta: &Matrix2<f64>) -> f64 {
    let s = 0.5 * (1.0 - k.determinant());
    let b12 = 0.5 * (beta[(0, 1)] + beta[(1, 0)]);
    let tr = beta[(0, 0)] + beta[(1, 1)];
    let gap = ((beta[(0, 0)] - beta[(1, 1)]).powi(2) + 4.0 * (b12 * b12 + s * s)).sqrt();
    0.5 * (tr - gap)
}

/// `c2 ∘ c1`: `c1` acts first.
pub fn compose_gaussian(c1: &GaussianChannel, c2: &GaussianChannel) -> GaussianChannel {
    let k2t = c2.k.transpose();
    GaussianChannel {
        k: c1.k * c2.k,
        l: k2t * c1.l + c2.l,
        beta: k2t * c1.beta * c2.k + c2.beta,
    }
}

/// Feasibility of `β = α + ν` with `α = a·1 ⪰ (i/2)Δ` and
/// `ν ⪰ (i/2)KᵀΔK`. Exact for isotropic `β`; for anisotropic `β` the
/// isotropic ansatz makes it a sufficient condition only.
///
/// The best choice is `a = ½`, leaving `λ_min(β) ≥ ½` and
/// `det(β - ½) ≥ det(K)²/4`.
pub fn eb_split_feasible(c: &GaussianChannel) -> bool {
    let b = 0.5 * (c.beta + c.beta.transpose());
    let ev = b.symmetric_eigenvalues();
    let (lo, hi) = (ev.min(), ev.max());
    let d = c.k.determinant();
    lo >= 0.5 - EB_TOL && (lo - 0.5).max(0.0) * (hi - 0.5) >= d * d / 4.0 - EB_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Attenuation,
    Amplification,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Attenuation => "attenuation",
            Family::Amplification => "amplification",
        }
    }
}

/// Isotropic channel with `K = k·1` and added noise `N₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "IsoWire", into = "IsoWire")]
pub struct IsoChannel {
    family: Family,
    k: f64,
    n0: f64,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IsoWire {
    pub family: Family,
    pub k: f64,
    pub n0: f64,
}

impl TryFrom<IsoWire> for IsoChannel {
    type Error = Error;
    fn try_from(w: IsoWire) -> Result<Self> {
        IsoChannel::new(w.family, w.k, w.n0)
    }
}

impl From<IsoChannel> for IsoWire {
    fn from(c: IsoChannel) -> Self {
        IsoWire {
            family: c.family,
            k: c.k,
            n0: c.n0,
        }
    }
}

impl IsoChannel {
    /// Attenuation needs `0 < k < 1`, amplification `k ≥ 1`.
    pub fn new(family: Family, k: f64, n0: f64) -> Result<Self> {
        match family {
            Family::Attenuation => check_domain("k", k, k > 0.0 && k < 1.0, "(0, 1)")?,
            Family::Amplification => check_domain("k", k, k >= 1.0, "[1, ∞)")?,
        }
        check_domain("n0", n0, n0 >= 0.0, "[0, ∞)")?;
        Ok(Self { family, k, n0 })
    }

    pub fn attenuation(k: f64, n0: f64) -> Result<Self> {
        Self::new(Family::Attenuation, k, n0)
    }

    pub fn amplification(k: f64, n0: f64) -> Result<Self> {
        Self::new(Family::Amplification, k, n0)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn n0(&self) -> f64 {
        self.n0
    }
}

/// `K = k·1`, `l = 0`, `β = (N₀ + |1 - k²|/2)·1`.
pub fn to_triplet(c: &IsoChannel) -> GaussianChannel {
    let b = c.n0 + (1.0 - c.k * c.k).abs() / 2.0;
    GaussianChannel {
        k: Matrix2::identity() * c.k,
        l: Vector2::zeros(),
        beta: Matrix2::identity() * b,
    }
}

/// Attenuation: `N₀ ≥ k²`; amplification: `N₀ ≥ 1`.
pub fn is_eb_iso(c: &IsoChannel) -> bool {
    match c.family {
        Family::Attenuation => c.n0 >= c.k * c.k - EB_TOL,
        Family::Amplification => c.n0 >= 1.0 - EB_TOL,
    }
}

fn geometric(k2: f64, terms: u32) -> f64 {
    (0..terms).map(|j| k2.powi(j as i32)).sum()
}

fn first_band(cap: u32, n0: f64, lower: impl Fn(u32) -> f64) -> NcResult {
    if n0 == 0.0 {
        return NcResult::ExceedsCap {
            cap,
            divergent: true,
        };
    }
    (1..=cap)
        .find(|&n| n0 >= lower(n) - EB_TOL)
        .map(NcResult::Finite)
        .unwrap_or(NcResult::ExceedsCap {
            cap,
            divergent: false,
        })
}

/// Smallest `n` with `N₀ ≥ k²ⁿ / Σ_{j<n} k²ʲ`. `N₀ = 0` never qualifies.
pub fn n_c_attenuation(k: f64, n0: f64, cap: u32) -> Result<NcResult> {
    IsoChannel::attenuation(k, n0)?;
    let k2 = k * k;
    Ok(first_band(cap, n0, |n| {
        k2.powi(n as i32) / geometric(k2, n)
    }))
}

/// Smallest `n` with `N₀ ≥ (Σ_{j<n} k²ʲ)⁻¹`. `N₀ = 0` never qualifies.
pub fn n_c_amplification(k: f64, n0: f64, cap: u32) -> Result<NcResult> {
    IsoChannel::amplification(k, n0)?;
    let k2 = k * k;
    Ok(first_band(cap, n0, |n| 1.0 / geometric(k2, n)))
}

pub fn n_c_iso(c: &IsoChannel, cap: u32) -> Result<NcResult> {
    match c.family {
        Family::Attenuation => n_c_attenuation(c.k, c.n0, cap),
        Family::Amplification => n_c_amplification(c.k, c.n0, cap),
    }
}

/// `n_c` by composing triplets and testing each power.
pub fn n_c_iterated(c: &GaussianChannel, cap: u32) -> NcResult {
    let mut acc = *c;
    for n in 1..=cap {
        if eb_split_feasible(&acc) {
            return NcResult::Finite(n);
        }
        acc = compose_gaussian(&acc, c);
    }
    NcResult::ExceedsCap {
        cap,
        divergent: false,
    }
}
