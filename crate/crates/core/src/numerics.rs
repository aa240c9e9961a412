//! Fixed-size dense kernels: 3×3 real singular-value factorizations and
//! 4×4 Hermitian eigensolves for two-qubit states.

use nalgebra::{Complex, Matrix3, Matrix4, Vector3};

use crate::error::{Error, Result};

pub type Complex64 = Complex<f64>;
/// Bloch-space action of a qubit map; row-major when built from a slice.
pub type RealMat3 = Matrix3<f64>;
/// Operator on the two-qubit space, index `2a + i` for |a⟩⊗|i⟩.
pub type HermitianMat4 = Matrix4<Complex64>;

/// Entrywise tolerance for the Hermiticity contract of `HermitianMat4`.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// `m = orthogonal · psd` with `psd` symmetric positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Polar {
    pub orthogonal: RealMat3,
    pub psd: RealMat3,
}

/// `m = o1 · diag(d) · o2` with `o1`, `o2` proper rotations.
///
/// `|d|` is sorted in descending order. When `det(m) < 0` the negative sign is
/// carried by the last (smallest-magnitude) entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Canonical {
    pub o1: RealMat3,
    pub d: Vector3<f64>,
    pub o2: RealMat3,
}

impl Canonical {
    pub fn reconstruct(&self) -> RealMat3 {
        self.o1 * RealMat3::from_diagonal(&self.d) * self.o2
    }
}

struct Svd3 {
    u: RealMat3,
    s: Vector3<f64>,
    v: RealMat3,
}

/// SVD with descending singular values and a deterministic sign gauge: the
/// largest-magnitude component of every right singular vector is positive.
fn svd3(m: &RealMat3) -> Svd3 {
    let svd = m.svd(true, true);
    let u = svd.u.expect("u requested");
    let v = svd.v_t.expect("v_t requested").transpose();
    let s = svd.singular_values;

    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]));

    let mut out = Svd3 {
        u: RealMat3::zeros(),
        s: Vector3::zeros(),
        v: RealMat3::zeros(),
    };
    for (dst, &src) in order.iter().enumerate() {
        let mut uc = u.column(src).into_owned();
        let mut vc = v.column(src).into_owned();
        let pivot = vc.iamax();
        if vc[pivot] < 0.0 {
            uc = -uc;
            vc = -vc;
        }
        out.u.set_column(dst, &uc);
        out.v.set_column(dst, &vc);
        out.s[dst] = s[src];
    }
    out
}

/// Sum of singular values, `Tr √(mᵀm)`.
pub fn trace_norm(m: &RealMat3) -> f64 {
    m.singular_values().sum()
}

/// Polar factorization. For singular input the orthogonal factor is
/// completed as `U·Vᵀ` from the SVD.
pub fn polar_decompose(m: &RealMat3) -> Polar {
    let Svd3 { u, s, v } = svd3(m);
    Polar {
        orthogonal: u * v.transpose(),
        psd: v * RealMat3::from_diagonal(&s) * v.transpose(),
    }
}

pub fn canonical_decompose(m: &RealMat3) -> Canonical {
    let Svd3 { mut u, s, mut v } = svd3(m);
    let mut d = s;
    if u.determinant() < 0.0 {
        u.column_mut(2).neg_mut();
        d[2] = -d[2];
    }
    if v.determinant() < 0.0 {
        v.column_mut(2).neg_mut();
        d[2] = -d[2];
    }
    Canonical {
        o1: u,
        d,
        o2: v.transpose(),
    }
}

/// Transpose on the second tensor factor of a 2⊗2 operator.
pub fn partial_transpose(g: &HermitianMat4) -> HermitianMat4 {
    let mut out = HermitianMat4::zeros();
    for a in 0..2 {
        for b in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    out[(2 * a + j, 2 * b + i)] = g[(2 * a + i, 2 * b + j)];
                }
            }
        }
    }
    out
}

/// Largest entry of `|g - g†|`.
pub fn hermiticity_defect(g: &HermitianMat4) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..4 {
        for c in r..4 {
            worst = worst.max((g[(r, c)] - g[(c, r)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues in ascending order.
pub fn hermitian_eigenvalues(g: &HermitianMat4) -> Result<[f64; 4]> {
    let defect = hermiticity_defect(g);
    if defect > HERMITIAN_TOL {
        return Err(Error::NotHermitian(defect));
    }
    Ok(eigenvalues_unchecked(g))
}

pub(crate) fn eigenvalues_unchecked(g: &HermitianMat4) -> [f64; 4] {
    let ev = g.symmetric_eigenvalues();
    let mut out = [ev[0], ev[1], ev[2], ev[3]];
    out.sort_by(f64::total_cmp);
    out
}

/// Eigenpairs of a Hermitian 4×4 matrix, eigenvalues ascending; column `k`
/// of the returned matrix belongs to eigenvalue `k`.
pub(crate) fn hermitian_eigen(g: &HermitianMat4) -> ([f64; 4], HermitianMat4) {
    let eig = g.symmetric_eigen();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut vals = [0.0; 4];
    let mut vecs = HermitianMat4::zeros();
    for (dst, &src) in order.iter().enumerate() {
        vals[dst] = eig.eigenvalues[src];
        vecs.set_column(dst, &eig.eigenvectors.column(src));
    }
    (vals, vecs)
}

/// Largest eigenvalue of a symmetric 3×3 matrix.
pub(crate) fn largest_symmetric_eigenvalue(m: &RealMat3) -> f64 {
    m.symmetric_eigenvalues().max()
}

pub(crate) fn mat3_from_rows(rows: [[f64; 3]; 3]) -> RealMat3 {
    RealMat3::new(
        rows[0][0], rows[0][1], rows[0][2], rows[1][0], rows[1][1], rows[1][2], rows[2][0],
        rows[2][1], rows[2][2],
    )
}

pub(crate) fn is_finite3(m: &RealMat3) -> bool {
    m.iter().all(|x| x.is_finite())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample;
    use nalgebra::Matrix2;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lambda() -> RealMat3 {
        RealMat3::from_diagonal(&Vector3::new(0.73, 0.5, 0.5))
    }

    fn swapped() -> RealMat3 {
        mat3_from_rows([[0.0, 0.5, 0.0], [0.73, 0.0, 0.0], [0.0, 0.0, 0.5]])
    }

    fn psi_plus() -> HermitianMat4 {
        let mut g = HermitianMat4::zeros();
        for &r in &[0usize, 3] {
            for &c in &[0usize, 3] {
                g[(r, c)] = Complex64::new(0.5, 0.0);
            }
        }
        g
    }

    fn max_abs(m: &RealMat3) -> f64 {
        m.iter().fold(0.0f64, |a, x| a.max(x.abs()))
    }

    #[test]
    fn trace_norm_fixtures() {
        assert!((trace_norm(&lambda()) - 1.73).abs() < 1e-12);
        assert!((trace_norm(&RealMat3::identity()) - 3.0).abs() < 1e-12);
        let tbar = mat3_from_rows([[0.0, 0.615, 0.0], [0.615, 0.0, 0.0], [0.0, 0.0, 0.5]]);
        let expected = 2.0 * 0.615f64.powi(2) + 0.25;
        assert!((trace_norm(&(tbar * tbar)) - expected).abs() < 1e-12);
    }

    #[test]
    fn polar_of_swapped_example() {
        let p = polar_decompose(&swapped());
        let swap = mat3_from_rows([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(max_abs(&(p.orthogonal - swap)) < 1e-10);
        assert!(max_abs(&(p.psd - lambda())) < 1e-10);
    }

    #[test]
    fn polar_trivial_cases() {
        let p = polar_decompose(&RealMat3::identity());
        assert!(max_abs(&(p.orthogonal - RealMat3::identity())) < 1e-12);
        assert!(max_abs(&(p.psd - RealMat3::identity())) < 1e-12);

        let refl = RealMat3::from_diagonal(&Vector3::new(-1.0, 1.0, 1.0));
        let p = polar_decompose(&refl);
        assert!(max_abs(&(p.orthogonal - refl)) < 1e-12);
        assert!(max_abs(&(p.psd - RealMat3::identity())) < 1e-12);
    }

    #[test]
    fn polar_rank_deficient() {
        let m = mat3_from_rows([[0.0, 0.3, 0.0], [0.0, 0.0, 0.0], [0.2, 0.0, 0.0]]);
        let p = polar_decompose(&m);
        assert!(max_abs(&(p.orthogonal * p.psd - m)) < 1e-10);
        assert!(max_abs(&(p.orthogonal * p.orthogonal.transpose() - RealMat3::identity())) < 1e-10);
        assert!(p.psd.symmetric_eigenvalues().min() > -1e-12);
    }

    #[test]
    fn canonical_of_positive_diagonal() {
        let c = canonical_decompose(&RealMat3::from_diagonal(&Vector3::new(0.9, 0.6, 0.3)));
        assert!(max_abs(&(c.o1 - RealMat3::identity())) < 1e-12);
        assert!(max_abs(&(c.o2 - RealMat3::identity())) < 1e-12);
        assert!((c.d - Vector3::new(0.9, 0.6, 0.3)).norm() < 1e-12);
    }

    #[test]
    fn canonical_of_swapped_example() {
        let c = canonical_decompose(&swapped());
        assert!((c.d[0] - 0.73).abs() < 1e-10);
        assert!((c.d[1] - 0.5).abs() < 1e-10);
        // det(T) < 0, so the sign sits on the last entry
        assert!((c.d[2] + 0.5).abs() < 1e-10);
        assert!(max_abs(&(c.reconstruct() - swapped())) < 1e-10);
        assert!((c.o1.determinant() - 1.0).abs() < 1e-10);
        assert!((c.o2.determinant() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn canonical_of_orthogonal_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for i in 0..100 {
            let mut o = sample::random_rotation(&mut rng);
            if i % 2 == 1 {
                o.column_mut(0).neg_mut();
            }
            let c = canonical_decompose(&o);
            for k in 0..3 {
                assert!((c.d[k].abs() - 1.0).abs() < 1e-10);
            }
            let prod = c.d[0] * c.d[1] * c.d[2];
            assert!((prod - o.determinant()).abs() < 1e-10);
            assert!(max_abs(&(c.reconstruct() - o)) < 1e-10);
        }
    }

    #[test]
    fn partial_transpose_of_psi_plus() {
        let pt = partial_transpose(&psi_plus());
        let ev = hermitian_eigenvalues(&pt).unwrap();
        let expected = [-0.5, 0.5, 0.5, 0.5];
        for (a, b) in ev.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn partial_transpose_of_product_state() {
        let rho = Matrix2::new(
            Complex64::new(0.7, 0.0),
            Complex64::new(0.1, 0.2),
            Complex64::new(0.1, -0.2),
            Complex64::new(0.3, 0.0),
        );
        let sigma = Matrix2::new(
            Complex64::new(0.4, 0.0),
            Complex64::new(0.0, 0.3),
            Complex64::new(0.0, -0.3),
            Complex64::new(0.6, 0.0),
        );
        let pt = partial_transpose(&rho.kronecker(&sigma));
        let expected = rho.kronecker(&sigma.transpose());
        assert!((pt - expected).norm() < 1e-15);

        let mixed = HermitianMat4::identity() * Complex64::new(0.25, 0.0);
        assert_eq!(partial_transpose(&mixed), mixed);
    }

    #[test]
    fn eigenvalue_fixtures() {
        let mixed = HermitianMat4::identity() * Complex64::new(0.25, 0.0);
        assert_eq!(hermitian_eigenvalues(&mixed).unwrap(), [0.25; 4]);

        let ev = hermitian_eigenvalues(&psi_plus()).unwrap();
        assert!(ev[..3].iter().all(|x| x.abs() < 1e-12));
        assert!((ev[3] - 1.0).abs() < 1e-12);

        let diag = HermitianMat4::from_diagonal(&nalgebra::Vector4::new(
            Complex64::new(3.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(4.0, 0.0),
            Complex64::new(2.0, 0.0),
        ));
        let ev = hermitian_eigenvalues(&diag).unwrap();
        for (a, b) in ev.iter().zip([1.0, 2.0, 3.0, 4.0]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut g = HermitianMat4::identity();
        g[(0, 1)] = Complex64::new(1e-6, 0.0);
        assert!(matches!(
            hermitian_eigenvalues(&g),
            Err(Error::NotHermitian(_))
        ));
    }
}
