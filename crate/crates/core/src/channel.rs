//! Qubit channels in three representations: the Bloch-space matrix of a
//! unital map, generalized amplitude-damping parameters, and explicit Kraus
//! operators.
//!
//! Choi convention: `Γ = (Φ ⊗ I)[ψ₊]`, the channel acts on the first tensor
//! factor and the basis index of |a⟩⊗|i⟩ is `2a + i`.

use nalgebra::{Matrix2, Matrix4, Rotation3, UnitQuaternion, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{check_domain, Error, Result};
use crate::numerics::{
    self, canonical_decompose, hermitian_eigen, largest_symmetric_eigenvalue, trace_norm,
    Complex64, HermitianMat4, RealMat3,
};
use crate::separability::ChoiState;

pub type CMat2 = Matrix2<Complex64>;

/// Tolerance on `TᵀT ≤ 1`.
pub const CONTRACTION_TOL: f64 = 1e-10;
/// Entrywise tolerance on `Σ E†E = 1`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Trace and positivity tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-10;
/// Choi eigenvalues at or below this are dropped when rebuilding Kraus sets.
pub const PRUNE_TOL: f64 = 1e-12;

const BLOCH_TOL: f64 = 1e-12;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Pauli matrix `σ_k`, with `σ₀ = 1`.
pub fn pauli(k: usize) -> CMat2 {
    let z = cx(0.0);
    let one = cx(1.0);
    let i = Complex64::new(0.0, 1.0);
    match k {
        0 => Matrix2::new(one, z, z, one),
        1 => Matrix2::new(z, one, one, z),
        2 => Matrix2::new(z, -i, i, z),
        3 => Matrix2::new(one, z, z, -one),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// Point of the Bloch ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector(Vector3<f64>);

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::from_vector(Vector3::new(x, y, z))
    }

    pub fn from_vector(v: Vector3<f64>) -> Result<Self> {
        let n = v.norm();
        check_domain("|v|", n, n <= 1.0 + BLOCH_TOL, "the Bloch ball")?;
        Ok(Self(v))
    }

    pub fn origin() -> Self {
        Self(Vector3::zeros())
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.0
    }

    pub fn to_density(&self) -> DensityMatrix {
        let v = self.0;
        let m = (pauli(0) + pauli(1) * cx(v.x) + pauli(2) * cx(v.y) + pauli(3) * cx(v.z)) * cx(0.5);
        DensityMatrix(m)
    }
}

/// Valid qubit state within [`DENSITY_TOL`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(CMat2);

impl DensityMatrix {
    pub fn new(m: CMat2) -> Result<Self> {
        let herm = (m - m.adjoint())
            .iter()
            .fold(0.0f64, |a, z| a.max(z.norm()));
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("not Hermitian ({herm:e})")));
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = m.symmetric_eigenvalues().min();
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("eigenvalue {min:e}")));
        }
        Ok(Self(m))
    }

    pub fn maximally_mixed() -> Self {
        BlochVector::origin().to_density()
    }

    /// Computational basis state |k⟩⟨k|.
    pub fn basis(k: usize) -> Self {
        let mut m = CMat2::zeros();
        m[(k, k)] = cx(1.0);
        Self(m)
    }

    pub fn matrix(&self) -> &CMat2 {
        &self.0
    }

    pub fn bloch(&self) -> Vector3<f64> {
        Vector3::new(
            (self.0 * pauli(1)).trace().re,
            (self.0 * pauli(2)).trace().re,
            (self.0 * pauli(3)).trace().re,
        )
    }
}

/// Whether a canonical triple lies in the tetrahedron of CPT unital maps,
/// `|λ₁ + λ₂| ≤ 1 + λ₃` and `|λ₁ - λ₂| ≤ 1 - λ₃`.
pub fn in_tetrahedron(l: [f64; 3], tol: f64) -> bool {
    (l[0] + l[1]).abs() <= 1.0 + l[2] + tol && (l[0] - l[1]).abs() <= 1.0 - l[2] + tol
}

/// Unital qubit map `v ↦ T v` with `TᵀT ≤ 1`.
///
/// The contraction condition admits maps that are positive but not
/// completely positive; [`UnitalChannel::is_completely_positive`] tells the
/// two apart, and every route through the Choi state requires it.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitalChannel {
    t: RealMat3,
}

impl UnitalChannel {
    pub fn new(t: RealMat3) -> Result<Self> {
        if !numerics::is_finite3(&t) {
            return Err(Error::OutOfDomain {
                name: "T",
                value: f64::NAN,
                domain: "finite matrices",
            });
        }
        let top = largest_symmetric_eigenvalue(&(t.transpose() * t));
        if top > 1.0 + CONTRACTION_TOL {
            return Err(Error::NotContractive(top));
        }
        Ok(Self { t })
    }

    pub fn from_rows(rows: [[f64; 3]; 3]) -> Result<Self> {
        Self::new(numerics::mat3_from_rows(rows))
    }

    pub fn identity() -> Self {
        Self {
            t: RealMat3::identity(),
        }
    }

    /// Completely depolarizing map onto 1/2.
    pub fn depolarizing() -> Self {
        Self {
            t: RealMat3::zeros(),
        }
    }

    pub fn t(&self) -> &RealMat3 {
        &self.t
    }

    pub fn trace_norm(&self) -> f64 {
        trace_norm(&self.t)
    }

    /// Signed canonical triple with the sign convention of
    /// [`numerics::canonical_decompose`].
    pub fn canonical_triple(&self) -> [f64; 3] {
        let d = canonical_decompose(&self.t).d;
        [d[0], d[1], d[2]]
    }

    pub fn is_completely_positive(&self) -> bool {
        in_tetrahedron(self.canonical_triple(), CONTRACTION_TOL)
    }

    pub fn transfer_matrix(&self) -> Matrix4<f64> {
        let mut r = Matrix4::zeros();
        r[(0, 0)] = 1.0;
        r.fixed_view_mut::<3, 3>(1, 1).copy_from(&self.t);
        r
    }
}

/// Generalized amplitude-damping parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GadParams {
    p: f64,
    gamma: f64,
}

impl GadParams {
    pub fn new(p: f64, gamma: f64) -> Result<Self> {
        check_domain("p", p, (0.0..=1.0).contains(&p), "[0, 1]")?;
        check_domain("gamma", gamma, (0.0..=1.0).contains(&gamma), "[0, 1]")?;
        Ok(Self { p, gamma })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Channel given by Kraus operators with `Σ E†E = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<CMat2>,
}

impl KrausChannel {
    pub fn new(ops: Vec<CMat2>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::EmptyKraus);
        }
        let k = Self { ops };
        let defect = k.completeness_defect();
        if defect.is_nan() || defect > COMPLETENESS_TOL {
            return Err(Error::KrausIncomplete(defect));
        }
        Ok(k)
    }

    pub fn ops(&self) -> &[CMat2] {
        &self.ops
    }

    pub fn completeness_defect(&self) -> f64 {
        let sum: CMat2 = self.ops.iter().map(|e| e.adjoint() * e).sum();
        (sum - CMat2::identity())
            .iter()
            .fold(0.0f64, |a, z| a.max(z.norm()))
    }

    /// `self ∘ inner`, before pruning.
    fn then_after(&self, inner: &KrausChannel) -> KrausChannel {
        let ops = self
            .ops
            .iter()
            .flat_map(|a| inner.ops.iter().map(move |b| a * b))
            .collect();
        KrausChannel { ops }
    }

    /// Minimal Kraus set obtained from the eigenvectors of the Choi state.
    pub fn pruned(&self) -> KrausChannel {
        kraus_from_choi(&choi_of_kraus(self))
    }
}

/// A qubit channel in its native representation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelWire", into = "ChannelWire")]
pub enum Channel {
    Unital(UnitalChannel),
    Gad(GadParams),
    Kraus(KrausChannel),
}

/// JSON layout of a [`Channel`] before validation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelWire {
    Unital { t: [f64; 9] },
    Gad { p: f64, gamma: f64 },
    Kraus { ops: Vec<[[f64; 2]; 4]> },
}

impl TryFrom<ChannelWire> for Channel {
    type Error = Error;

    fn try_from(w: ChannelWire) -> Result<Self> {
        match w {
            ChannelWire::Unital { t } => Ok(Channel::Unital(UnitalChannel::new(
                RealMat3::from_row_slice(&t),
            )?)),
            ChannelWire::Gad { p, gamma } => Ok(Channel::Gad(GadParams::new(p, gamma)?)),
            ChannelWire::Kraus { ops } => {
                let ops = ops
                    .iter()
                    .map(|e| {
                        let z: Vec<Complex64> =
                            e.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
                        CMat2::from_row_slice(&z)
                    })
                    .collect();
                Ok(Channel::Kraus(KrausChannel::new(ops)?))
            }
        }
    }
}

impl From<Channel> for ChannelWire {
    fn from(c: Channel) -> Self {
        match c {
            Channel::Unital(u) => {
                let t = u.t;
                let mut out = [0.0; 9];
                for r in 0..3 {
                    for col in 0..3 {
                        out[3 * r + col] = t[(r, col)];
                    }
                }
                ChannelWire::Unital { t: out }
            }
            Channel::Gad(g) => ChannelWire::Gad {
                p: g.p,
                gamma: g.gamma,
            },
            Channel::Kraus(k) => ChannelWire::Kraus {
                ops: k
                    .ops
                    .iter()
                    .map(|e| {
                        [
                            [e[(0, 0)].re, e[(0, 0)].im],
                            [e[(0, 1)].re, e[(0, 1)].im],
                            [e[(1, 0)].re, e[(1, 0)].im],
                            [e[(1, 1)].re, e[(1, 1)].im],
                        ]
                    })
                    .collect(),
            },
        }
    }
}

impl From<UnitalChannel> for Channel {
    fn from(u: UnitalChannel) -> Self {
        Channel::Unital(u)
    }
}

impl From<GadParams> for Channel {
    fn from(g: GadParams) -> Self {
        Channel::Gad(g)
    }
}

impl From<KrausChannel> for Channel {
    fn from(k: KrausChannel) -> Self {
        Channel::Kraus(k)
    }
}

impl Channel {
    pub fn as_unital(&self) -> Option<&UnitalChannel> {
        match self {
            Channel::Unital(u) => Some(u),
            _ => None,
        }
    }

    /// `R_ij = ½ Tr[σ_i Φ(σ_j)]`; the lower-right block is the Bloch matrix.
    pub fn transfer_matrix(&self) -> Result<Matrix4<f64>> {
        match self {
            Channel::Unital(u) => Ok(u.transfer_matrix()),
            other => {
                let k = to_kraus(other)?;
                Ok(Matrix4::from_fn(|i, j| {
                    let out: CMat2 = k.ops.iter().map(|e| e * pauli(j) * e.adjoint()).sum();
                    0.5 * (pauli(i) * out).trace().re
                }))
            }
        }
    }

    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        match self {
            Channel::Unital(u) => {
                let v = u.t * rho.bloch();
                Ok(BlochVector(v).to_density())
            }
            other => Ok(apply_kraus(&to_kraus(other)?, rho)),
        }
    }
}

pub fn apply_unital(c: &UnitalChannel, v: &BlochVector) -> BlochVector {
    BlochVector(c.t * v.0)
}

/// Bloch matrix of `c1 ∘ c2`.
pub fn compose_unital(c1: &UnitalChannel, c2: &UnitalChannel) -> UnitalChannel {
    UnitalChannel { t: c1.t * c2.t }
}

pub fn gad_kraus(g: &GadParams) -> KrausChannel {
    let (p, gm) = (g.p, g.gamma);
    let z = cx(0.0);
    let a = gm.sqrt();
    let b = (1.0 - gm).sqrt();
    let ops = vec![
        Matrix2::new(cx(a), z, z, cx(a * (1.0 - p).sqrt())),
        Matrix2::new(z, cx(a * p.sqrt()), z, z),
        Matrix2::new(cx(b * (1.0 - p).sqrt()), z, z, cx(b)),
        Matrix2::new(z, z, cx(b * p.sqrt()), z),
    ];
    KrausChannel { ops }
}

pub fn apply_kraus(c: &KrausChannel, rho: &DensityMatrix) -> DensityMatrix {
    let out: CMat2 = c.ops.iter().map(|e| e * rho.0 * e.adjoint()).sum();
    // Hermitian part only; the anti-Hermitian residue is rounding
    DensityMatrix((out + out.adjoint()) * cx(0.5))
}

fn vec_of(e: &CMat2) -> Vector4<Complex64> {
    Vector4::new(e[(0, 0)], e[(0, 1)], e[(1, 0)], e[(1, 1)])
}

pub(crate) fn choi_of_kraus(k: &KrausChannel) -> HermitianMat4 {
    k.ops
        .iter()
        .map(|e| {
            let v = vec_of(e);
            v * v.adjoint() * cx(0.5)
        })
        .sum()
}

/// `Γ = ¼ Σ_ij R_ij σ_i ⊗ σ_jᵀ` from a transfer matrix.
pub(crate) fn choi_of_transfer(r: &Matrix4<f64>) -> HermitianMat4 {
    let mut g = HermitianMat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            if r[(i, j)] != 0.0 {
                g += pauli(i).kronecker(&pauli(j).transpose()) * cx(0.25 * r[(i, j)]);
            }
        }
    }
    g
}

/// Choi matrix without validity checks; for a unital map that is not
/// completely positive it has a negative eigenvalue.
pub fn choi_matrix(ch: &Channel) -> HermitianMat4 {
    match ch {
        Channel::Unital(u) => choi_of_transfer(&u.transfer_matrix()),
        Channel::Gad(g) => choi_of_kraus(&gad_kraus(g)),
        Channel::Kraus(k) => choi_of_kraus(k),
    }
}

pub fn choi(ch: &Channel) -> Result<ChoiState> {
    if let Channel::Unital(u) = ch {
        if !u.is_completely_positive() {
            return Err(Error::NotCompletelyPositive(u.canonical_triple()));
        }
    }
    ChoiState::new(choi_matrix(ch))
}

/// Kraus operators `√(2λ_k) · unvec(v_k)` for the Choi eigenpairs above
/// [`PRUNE_TOL`]; at most four operators.
pub(crate) fn kraus_from_choi(g: &HermitianMat4) -> KrausChannel {
    let (vals, vecs) = hermitian_eigen(g);
    let mut ops = Vec::with_capacity(4);
    for k in (0..4).rev() {
        if vals[k] > PRUNE_TOL {
            let s = cx((2.0 * vals[k]).sqrt());
            let v = vecs.column(k);
            ops.push(Matrix2::new(v[0], v[1], v[2], v[3]) * s);
        }
    }
    KrausChannel { ops }
}

pub fn to_kraus(ch: &Channel) -> Result<KrausChannel> {
    match ch {
        Channel::Kraus(k) => Ok(k.clone()),
        Channel::Gad(g) => Ok(gad_kraus(g)),
        Channel::Unital(_) => Ok(kraus_from_choi(choi(ch)?.matrix())),
    }
}

/// `outer ∘ inner`. Two unital maps compose as Bloch matrices; anything else
/// goes through pruned Kraus products.
pub fn compose(outer: &Channel, inner: &Channel) -> Result<Channel> {
    if let (Channel::Unital(a), Channel::Unital(b)) = (outer, inner) {
        return Ok(Channel::Unital(compose_unital(a, b)));
    }
    let a = to_kraus(outer)?;
    let b = to_kraus(inner)?;
    Ok(Channel::Kraus(a.then_after(&b).pruned()))
}

/// SU(2) lift `w·1 - i(x σ_x + y σ_y + z σ_z)` of a proper rotation, where
/// `(w, x, y, z)` is its unit quaternion.
pub fn su2_from_rotation(r: &RealMat3) -> CMat2 {
    let q = UnitQuaternion::from_rotation_matrix(&Rotation3::from_matrix_unchecked(*r));
    let minus_i = Complex64::new(0.0, -1.0);
    pauli(0) * cx(q.w) + (pauli(1) * cx(q.i) + pauli(2) * cx(q.j) + pauli(3) * cx(q.k)) * minus_i
}

impl KrausChannel {
    /// Unitary channel `ρ ↦ U ρ U†`; `u` must be unitary.
    pub fn unitary(u: CMat2) -> Result<Self> {
        Self::new(vec![u])
    }
}

/// `n`-fold self-composition.
pub fn channel_power(ch: &Channel, n: u32) -> Result<Channel> {
    if n == 0 {
        return Err(Error::ZeroPower);
    }
    match ch {
        Channel::Unital(u) => Ok(Channel::Unital(UnitalChannel { t: u.t.pow(n) })),
        other => {
            let base = to_kraus(other)?;
            let mut acc = base.clone();
            for _ in 1..n {
                acc = acc.then_after(&base).pruned();
            }
            Ok(Channel::Kraus(acc))
        }
    }
}

/// Weights `p = M⁻¹ (1, λ₁, λ₂, λ₃)` of the canonical map `Φ_λ = Σ p_i S_i`
/// with `S_i[ρ] = σ_i ρ σ_i`. `M` is symmetric with `M² = 4`.
pub fn pauli_decompose(lambda: [f64; 3]) -> [f64; 4] {
    let l = [1.0, lambda[0], lambda[1], lambda[2]];
    let m = pauli_sign_matrix();
    let mut p = [0.0; 4];
    for i in 0..4 {
        p[i] = (0..4).map(|j| m[i][j] * l[j]).sum::<f64>() / 4.0;
    }
    p
}

/// `M_ij` with `σ_i σ_j σ_i = M_ij σ_j`.
pub fn pauli_sign_matrix() -> [[f64; 4]; 4] {
    [
        [1.0, 1.0, 1.0, 1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, 1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ]
}
