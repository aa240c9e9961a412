//! Two-qubit separability of Choi states via the partial transpose.

use crate::channel::{self, Channel, DensityMatrix};
use crate::error::{check_domain, Error, Result};
use crate::numerics::{
    eigenvalues_unchecked, hermiticity_defect, partial_transpose, trace_norm, Complex64,
    HermitianMat4,
};

/// Tolerance for the trace and positivity contract of [`ChoiState`].
pub const STATE_TOL: f64 = 1e-10;
/// Default separability tolerance on the smallest partial-transpose eigenvalue.
pub const SEP_TOL: f64 = 1e-10;
/// Tolerance of the trace-norm EB test for unital maps.
pub const EB_TRACE_NORM_TOL: f64 = 1e-10;

/// Unit-trace positive semidefinite two-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiState {
    g: HermitianMat4,
}

impl ChoiState {
    pub fn new(g: HermitianMat4) -> Result<Self> {
        let defect = hermiticity_defect(&g);
        if defect > STATE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = g.trace().re;
        if (tr - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidChoiState(format!("trace {tr}")));
        }
        let min = eigenvalues_unchecked(&g)[0];
        if min < -STATE_TOL {
            return Err(Error::InvalidChoiState(format!("eigenvalue {min:e}")));
        }
        Ok(Self { g })
    }

    pub fn matrix(&self) -> &HermitianMat4 {
        &self.g
    }

    /// Smallest eigenvalue of the partial transpose.
    pub fn min_pt_eigenvalue(&self) -> f64 {
        eigenvalues_unchecked(&partial_transpose(&self.g))[0]
    }

    pub fn pt_determinant(&self) -> f64 {
        partial_transpose(&self.g).determinant().re
    }
}

/// PPT test: smallest partial-transpose eigenvalue `≥ -tol`.
pub fn is_separable(s: &ChoiState, tol: f64) -> bool {
    s.min_pt_eigenvalue() >= -tol
}

/// Determinant form of the two-qubit PPT test. Sign-unstable near the
/// boundary, so only a cross-check for [`is_separable`].
pub fn is_separable_by_determinant(s: &ChoiState) -> bool {
    s.pt_determinant() >= 0.0
}

/// `ρ₀ ⊗ 1/2`.
pub fn reference_state(rho0: &DensityMatrix) -> HermitianMat4 {
    rho0.matrix()
        .kronecker(&nalgebra::Matrix2::<Complex64>::identity())
        * Complex64::new(0.5, 0.0)
}

/// `(1-μ) Γ + μ ρ₀ ⊗ 1/2`.
pub fn noisy_choi(c: &Channel, rho0: &DensityMatrix, mu: f64) -> Result<ChoiState> {
    check_domain("mu", mu, (0.0..=1.0).contains(&mu), "[0, 1]")?;
    let g = channel::choi(c)?;
    Ok(mix(g.matrix(), &reference_state(rho0), mu))
}

fn mix(g: &HermitianMat4, r: &HermitianMat4, mu: f64) -> ChoiState {
    ChoiState {
        g: g * Complex64::new(1.0 - mu, 0.0) + r * Complex64::new(mu, 0.0),
    }
}

/// Whether `c` is entanglement breaking. Unital maps use `‖T‖₁ ≤ 1`,
/// everything else the PPT test on the Choi state.
pub fn is_eb(c: &Channel) -> Result<bool> {
    match c {
        Channel::Unital(u) => Ok(trace_norm(u.t()) <= 1.0 + EB_TRACE_NORM_TOL),
        other => Ok(is_separable(&channel::choi(other)?, SEP_TOL)),
    }
}

/// Choi-route EB test, valid for every representation.
pub fn is_eb_by_choi(c: &Channel) -> Result<bool> {
    Ok(is_separable(&channel::choi(c)?, SEP_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{GadParams, UnitalChannel};
    use crate::gad;
    use crate::sample;
    use nalgebra::{Vector3, Vector4};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn psi_plus() -> HermitianMat4 {
        let v = Vector4::new(c(1.0), c(0.0), c(0.0), c(1.0)) / c(2f64.sqrt());
        v * v.adjoint()
    }

    fn werner(mu: f64) -> ChoiState {
        mix(&psi_plus(), &(HermitianMat4::identity() * c(0.25)), mu)
    }

    #[test]
    fn separability_examples() {
        assert!(!is_separable(&ChoiState::new(psi_plus()).unwrap(), SEP_TOL));
        let mixed = ChoiState::new(HermitianMat4::identity() * c(0.25)).unwrap();
        assert!(is_separable(&mixed, SEP_TOL));
        assert!(is_separable(&werner(2.0 / 3.0), SEP_TOL));
        assert!(!is_separable(&werner(0.66), SEP_TOL));
    }

    #[test]
    fn invalid_states_rejected() {
        let mut g = HermitianMat4::identity() * c(0.25);
        g[(0, 0)] = c(-0.1);
        g[(1, 1)] = c(0.6);
        assert!(matches!(ChoiState::new(g), Err(Error::InvalidChoiState(_))));
        assert!(ChoiState::new(HermitianMat4::identity()).is_err());
    }

    #[test]
    fn noisy_choi_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ch: Channel = sample::random_unital_channel(&mut rng).into();
        let rho = sample::random_bloch(&mut rng).to_density();
        let zero = noisy_choi(&ch, &rho, 0.0).unwrap();
        assert_eq!(zero.matrix(), channel::choi(&ch).unwrap().matrix());
        let one = noisy_choi(&ch, &rho, 1.0).unwrap();
        assert_eq!(one.matrix(), &reference_state(&rho));

        let id: Channel = UnitalChannel::identity().into();
        let s = noisy_choi(&id, &DensityMatrix::maximally_mixed(), 2.0 / 3.0).unwrap();
        assert!(s.min_pt_eigenvalue().abs() < 1e-10);

        assert!(noisy_choi(&id, &rho, 1.2).is_err());
    }

    #[test]
    fn is_eb_examples() {
        let lambda = UnitalChannel::new(nalgebra::Matrix3::from_diagonal(&Vector3::new(
            0.73, 0.5, 0.5,
        )))
        .unwrap();
        assert!(!is_eb(&lambda.into()).unwrap());
        assert!(is_eb(&UnitalChannel::depolarizing().into()).unwrap());
        for &gamma in &[0.0, 0.2, 0.5, 0.9] {
            let p1 = gad::p_n(gamma, 1);
            let at = GadParams::new(p1, gamma).unwrap();
            let above = GadParams::new((p1 + 1e-3).min(1.0), gamma).unwrap();
            assert!(is_eb(&at.into()).unwrap(), "gamma {gamma}");
            assert!(is_eb(&above.into()).unwrap(), "gamma {gamma}");
        }
    }

    #[test]
    fn monotone_along_depolarizing_segments() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let ch: Channel = sample::random_unital_channel(&mut rng).into();
            let rho = sample::random_bloch(&mut rng).to_density();
            let mut seen = false;
            for k in 0..=100 {
                let sep = is_separable(&noisy_choi(&ch, &rho, k as f64 / 100.0).unwrap(), SEP_TOL);
                assert!(!seen || sep);
                seen |= sep;
            }
        }
    }

    #[test]
    fn determinant_agrees_with_eigenvalue_test() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut checked = 0;
        for _ in 0..1000 {
            let s = ChoiState::new(sample::random_two_qubit_state(&mut rng)).unwrap();
            if s.pt_determinant().abs() > 1e-8 {
                assert_eq!(is_separable(&s, SEP_TOL), is_separable_by_determinant(&s));
                checked += 1;
            }
        }
        assert!(checked > 900);
    }

    #[test]
    fn trace_norm_and_choi_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let ch: Channel = sample::random_unital_channel(&mut rng).into();
            let s = channel::choi(&ch).unwrap();
            if s.min_pt_eigenvalue().abs() > 1e-9 {
                assert_eq!(is_eb(&ch).unwrap(), is_eb_by_choi(&ch).unwrap());
            }
        }
    }
}
