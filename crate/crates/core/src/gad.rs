//! Closed forms for the generalized amplitude-damping family `Ψ_{p,γ}`.
//!
//! Every function reflects `γ > ½` to `1 - γ`; the family is symmetric under
//! conjugation by `σ_x`, so μ and n values are unchanged.

use serde::Serialize;

use crate::error::{check_domain, Error, Result};
use crate::measures::NcResult;

const RADICAND_GUARD: f64 = 1e-12;

fn check_p(p: f64) -> Result<()> {
    check_domain("p", p, (0.0..=1.0).contains(&p), "[0, 1]")
}

fn reflect(gamma: f64) -> Result<f64> {
    check_domain("gamma", gamma, (0.0..=1.0).contains(&gamma), "[0, 1]")?;
    Ok(gamma.min(1.0 - gamma))
}

fn guarded_sqrt(x: f64) -> f64 {
    if (-RADICAND_GUARD..0.0).contains(&x) {
        0.0
    } else {
        x.sqrt()
    }
}

/// Threshold `p_n(γ)` above which `Ψⁿ` is entanglement breaking; `p_0 = 1`.
pub fn p_n(gamma: f64, n: u32) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let inner = 1.0 - 2.0 / (1.0 + (1.0 + 4.0 * gamma * (1.0 - gamma)).sqrt());
    1.0 - inner.max(0.0).powf(1.0 / n as f64)
}

/// `μ(Ψ; ρ₀ᶻ)` for the reference state `(1 + v_z σ_z)/2`, clamped to `[0, 1]`.
pub fn mu_vs_vz(p: f64, gamma: f64, vz: f64) -> Result<f64> {
    check_p(p)?;
    check_domain("gamma", gamma, (0.0..=1.0).contains(&gamma), "[0, 1]")?;
    check_domain("v_z", vz, (-1.0..=1.0).contains(&vz), "[-1, 1]")?;
    if p >= p_n(gamma, 1) {
        return Ok(0.0);
    }
    let g = gamma;
    let radicand =
        p * p * (vz - 2.0 * g + 1.0).powi(2) + 4.0 * p * (vz * vz - 1.0) - 4.0 * vz * vz + 4.0;
    let num =
        p * (4.0 * p * (g - 1.0) * g - 2.0 * g * vz + vz - 3.0) + 4.0 - guarded_sqrt(radicand);
    let den = 4.0 * p * p * (g - 1.0) * g + 2.0 * p * (-2.0 * vz * g + vz - 1.0) + vz * vz + 3.0;
    Ok((num / den).clamp(0.0, 1.0))
}

/// `p̄(γ)`: below it the optimal reference state is interior to the z axis.
pub fn pbar(gamma: f64) -> Result<f64> {
    let g = reflect(gamma)?;
    Ok(((4.0 * g * g - 8.0 * g + 5.0).sqrt() - 1.0) / (2.0 * (1.0 - g).powi(2)))
}

/// `p̿(γ)`, the analogue of [`pbar`] for `Ψ²`.
pub fn pbarbar(gamma: f64) -> Result<f64> {
    let g = reflect(gamma)?;
    Ok(((4.0 * g * g - 8.0 * g + 5.0).sqrt() + 2.0 * g - 3.0) / (2.0 * (g - 1.0)))
}

/// Optimal `v_z` for `p ≤ p̄(γ)`.
pub fn vbar(p: f64, gamma: f64) -> Result<f64> {
    check_p(p)?;
    let limit = pbar(gamma)?;
    if p > limit + 1e-12 {
        return Err(Error::OutOfDomain {
            name: "p",
            value: p,
            domain: "[0, p̄(γ)]",
        });
    }
    Ok(p * (p + 2.0 * (1.0 - p).sqrt()) * (1.0 - 2.0 * gamma) / (4.0 - p * (p + 4.0)))
}

fn mu_c_below(p: f64) -> f64 {
    (p * p + 3.0 * p + 2.0 * (1.0 - p).sqrt() - 4.0) / (p * p + 2.0 * p - 3.0)
}

fn mu_c_above(p: f64, g: f64) -> f64 {
    (p * (p * (g - 1.0) * g - 1.0) + 1.0) / (p * g * (p * (g - 1.0) - 1.0) + 1.0)
}

/// `μ_c(Ψ_{p,γ})`.
pub fn mu_c_gad(p: f64, gamma: f64) -> Result<f64> {
    check_p(p)?;
    let g = reflect(gamma)?;
    if p >= p_n(g, 1) {
        return Ok(0.0);
    }
    let v = if p <= pbar(g)? {
        mu_c_below(p)
    } else {
        mu_c_above(p, g)
    };
    Ok(v.max(0.0))
}

/// `μ_c(Ψ²_{p,γ})`.
pub fn mu_c_gad_squared(p: f64, gamma: f64) -> Result<f64> {
    check_p(p)?;
    let g = reflect(gamma)?;
    if p >= p_n(g, 2) {
        return Ok(0.0);
    }
    let q = (p - 2.0) * p;
    let v = if p <= pbarbar(g)? {
        (p * p - 4.0 * p + 2.0) / (p * p - 4.0 * p + 3.0)
    } else {
        (q * (q * (g - 1.0) * g + 1.0) + 1.0) / (q * g * (q * (g - 1.0) + 1.0) + 1.0)
    };
    Ok(v.max(0.0))
}

/// `n_c(Ψ_{p,γ})` from the `p_n` thresholds. Pure amplitude damping
/// (`γ ∈ {0, 1}`, `p < 1`) is certified divergent.
pub fn n_c_gad(p: f64, gamma: f64, cap: u32) -> Result<NcResult> {
    check_p(p)?;
    let g = reflect(gamma)?;
    if g == 0.0 && p < 1.0 {
        return Ok(NcResult::ExceedsCap {
            cap,
            divergent: true,
        });
    }
    Ok((1..=cap)
        .find(|&n| p >= p_n(g, n))
        .map(NcResult::Finite)
        .unwrap_or(NcResult::ExceedsCap {
            cap,
            divergent: false,
        }))
}

/// Lower boundary in `p` of the region where `Ψ ∘ S₁ ∘ Ψ` is entanglement
/// breaking. Singular at `γ = 0`, where the limit is `(√5 - 1)/2`.
pub fn amend_boundary_s1(gamma: f64) -> Result<f64> {
    let g = reflect(gamma)?;
    check_domain("gamma", gamma, g > 0.0, "(0, 1)")?;
    let a = 4.0 * (1.0 - g) * g;
    let inner = (1.0 - 2.0 * (1.0 + a).sqrt()) * (1.0 - 2.0 * g).powi(2) + 1.0;
    Ok((-(a + 1.0).sqrt() + guarded_sqrt(inner) + 1.0) / a)
}

/// One cell of the `(p, γ)` plane with its iteration order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GadRegionPoint {
    pub p: f64,
    pub gamma: f64,
    pub n_c: NcResult,
}

impl GadRegionPoint {
    pub fn new(p: f64, gamma: f64, cap: u32) -> Result<Self> {
        Ok(Self {
            p,
            gamma,
            n_c: n_c_gad(p, gamma, cap)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const S2: f64 = std::f64::consts::SQRT_2;

    #[test]
    fn mu_vs_vz_examples() {
        assert!((mu_vs_vz(0.0, 0.3, 0.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        for &g in &[0.1, 0.3, 0.5] {
            assert_eq!(mu_vs_vz(p_n(g, 1), g, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn vbar_examples() {
        for &p in &[0.1, 0.5, 0.8] {
            assert_eq!(vbar(p, 0.5).unwrap(), 0.0);
        }
        assert_eq!(vbar(0.0, 0.2).unwrap(), 0.0);
        assert!(vbar(0.95, 0.2).is_err());
    }

    #[test]
    fn vbar_is_grid_minimizer() {
        let (p, g) = (0.3, 0.2);
        let grid = 10_000;
        let best = (0..=grid)
            .map(|i| -1.0 + 2.0 * i as f64 / grid as f64)
            .min_by(|a, b| {
                mu_vs_vz(p, g, *a)
                    .unwrap()
                    .total_cmp(&mu_vs_vz(p, g, *b).unwrap())
            })
            .unwrap();
        assert!((best - vbar(p, g).unwrap()).abs() < 1e-3);
    }

    #[test]
    fn threshold_values() {
        assert!((pbar(0.5).unwrap() - 2.0 * (S2 - 1.0)).abs() < 1e-15);
        assert!((pbarbar(0.5).unwrap() - (2.0 - S2)).abs() < 1e-15);
        assert!((pbar(0.0).unwrap() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        for i in 0..=50 {
            let g = i as f64 / 100.0;
            let (a, b) = (pbar(g).unwrap(), pbarbar(g).unwrap());
            assert!((0.0..=1.0).contains(&a) && (0.0..=1.0).contains(&b));
            assert!((b - (1.0 - (1.0 - a).sqrt())).abs() < 1e-12);
        }
    }

    #[test]
    fn mu_c_examples() {
        assert!((mu_c_gad(0.0, 0.2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!(mu_c_gad(pbar(0.5).unwrap(), 0.5).unwrap() < 1e-12);
        assert!(mu_c_gad_squared(2.0 - S2, 0.5).unwrap() < 1e-12);
        assert!((mu_c_gad_squared(0.0, 0.3).unwrap() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn continuity_at_thresholds() {
        for i in 0..=20 {
            let g = i as f64 / 40.0;
            let pb = pbar(g).unwrap();
            if pb < p_n(g, 1) {
                assert!(
                    (mu_c_below(pb) - mu_c_above(pb, g)).abs() < 1e-9,
                    "gamma {g}"
                );
            }
            let at = mu_c_gad(pb, g).unwrap();
            let expected = (2.0 - 4.0 * g) / (-4.0 * g + (4.0 * (g - 2.0) * g + 5.0).sqrt() + 3.0);
            assert!((at - expected.max(0.0)).abs() < 1e-9, "gamma {g}");
            let pbb = pbarbar(g).unwrap();
            let lo = mu_c_gad_squared(pbb - 1e-12, g).unwrap();
            let hi = mu_c_gad_squared(pbb + 1e-12, g).unwrap();
            assert!((lo - hi).abs() < 1e-9);
        }
    }

    #[test]
    fn squared_matches_single_with_composed_parameter() {
        for i in 0..=20 {
            for j in 0..=10 {
                let (p, g) = (i as f64 / 20.0, j as f64 / 20.0);
                let a = mu_c_gad_squared(p, g).unwrap();
                let b = mu_c_gad(2.0 * p - p * p, g).unwrap();
                assert!((a - b).abs() < 1e-12, "{p} {g}");
                assert!(a <= mu_c_gad(p, g).unwrap() + 1e-12);
            }
        }
    }

    #[test]
    fn reflection_symmetry() {
        for i in 0..=10 {
            for j in 0..=10 {
                let (p, g) = (i as f64 / 10.0, j as f64 / 10.0);
                assert!((mu_c_gad(p, g).unwrap() - mu_c_gad(p, 1.0 - g).unwrap()).abs() < 1e-12);
                assert_eq!(n_c_gad(p, g, 16).unwrap(), n_c_gad(p, 1.0 - g, 16).unwrap());
                for n in 1..5 {
                    assert!((p_n(g, n) - p_n(1.0 - g, n)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn p_n_examples() {
        assert!((p_n(0.5, 1) - 2.0 * (S2 - 1.0)).abs() < 1e-15);
        assert!((p_n(0.5, 2) - (2.0 - S2)).abs() < 1e-15);
        for n in 1..10 {
            assert_eq!(p_n(0.0, n), 1.0);
        }
    }

    #[test]
    fn n_c_examples() {
        assert_eq!(n_c_gad(0.9, 0.5, 64).unwrap(), NcResult::Finite(1));
        assert_eq!(n_c_gad(0.7, 0.5, 64).unwrap(), NcResult::Finite(2));
        assert_eq!(
            n_c_gad(0.5, 0.0, 64).unwrap(),
            NcResult::ExceedsCap {
                cap: 64,
                divergent: true
            }
        );
        assert_eq!(
            n_c_gad(1e-4, 0.3, 8).unwrap(),
            NcResult::ExceedsCap {
                cap: 8,
                divergent: false
            }
        );
    }

    #[test]
    fn amend_boundary_examples() {
        let golden = (5f64.sqrt() - 1.0) / 2.0;
        assert!((amend_boundary_s1(1e-6).unwrap() - golden).abs() < 1e-3);
        assert!((amend_boundary_s1(0.5).unwrap() - (2.0 - S2)).abs() < 1e-12);
        assert!(amend_boundary_s1(0.0).is_err());
        for i in 1..=50 {
            let g = i as f64 / 100.0;
            assert!(amend_boundary_s1(g).unwrap() <= p_n(g, 2) + 1e-12);
        }
    }
}
