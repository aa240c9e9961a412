//! Seeded random instances for property checks and the acceptance suite.

use std::f64::consts::PI;

use nalgebra::{Quaternion, UnitQuaternion, Vector3};
use rand::Rng;

use crate::channel::{in_tetrahedron, BlochVector, UnitalChannel};
use crate::numerics::{Complex64, HermitianMat4, RealMat3};

/// Haar-random rotation (Shoemake's uniform quaternion).
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R) -> RealMat3 {
    let u1: f64 = rng.random();
    let u2: f64 = rng.random();
    let u3: f64 = rng.random();
    let a = (1.0 - u1).sqrt();
    let b = u1.sqrt();
    let q = Quaternion::new(
        a * (2.0 * PI * u2).sin(),
        a * (2.0 * PI * u2).cos(),
        b * (2.0 * PI * u3).sin(),
        b * (2.0 * PI * u3).cos(),
    );
    UnitQuaternion::from_quaternion(q)
        .to_rotation_matrix()
        .into_inner()
}

/// Uniform point of the CPT tetrahedron of canonical triples.
pub fn random_canonical_triple<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let l = [
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        ];
        if in_tetrahedron(l, 0.0) {
            return l;
        }
    }
}

/// Random completely positive unital channel `O₁ · diag(λ) · O₂`.
pub fn random_unital_channel<R: Rng + ?Sized>(rng: &mut R) -> UnitalChannel {
    let l = random_canonical_triple(rng);
    let t =
        random_rotation(rng) * RealMat3::from_diagonal(&Vector3::from(l)) * random_rotation(rng);
    UnitalChannel::new(t).expect("tetrahedron points are contractive")
}

/// Random unitary channel.
pub fn random_unitary_channel<R: Rng + ?Sized>(rng: &mut R) -> UnitalChannel {
    UnitalChannel::new(random_rotation(rng)).expect("rotations are contractive")
}

/// Uniform point of the Bloch ball.
pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    loop {
        let v = Vector3::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        if v.norm() <= 1.0 {
            return BlochVector::new(v.x, v.y, v.z).expect("inside ball");
        }
    }
}

/// Random two-qubit density matrix `A·A† / Tr(A·A†)` with uniform complex `A`.
pub fn random_two_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> HermitianMat4 {
    let a = HermitianMat4::from_fn(|_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let g = a * a.adjoint();
    let tr = g.trace().re;
    g / Complex64::new(tr, 0.0)
}

/// Random Hermitian matrix with entries in the unit box.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R) -> HermitianMat4 {
    let a = HermitianMat4::from_fn(|_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    (a + a.adjoint()) * Complex64::new(0.5, 0.0)
}
