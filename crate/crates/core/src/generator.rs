//! Builders for product bases.
//!
//! [`generate_from_type`] runs the structure theorem backwards: pick an
//! orthogonal splitting Cⁿ = ⊕V_i with prescribed dimensions, two orthonormal
//! bases per V_i and one antipodal qubit pair per V_i. [`named_family`]
//! instantiates the fixed low-dimensional families (d = 4 and d = 6), the
//! mutually unbiased product-basis triples and the non-basis counterexample.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::analyzer::{mu_check, ProductBasis};
use crate::error::{Error, Result};
use crate::numerics::{inner, omega, ComplexMatrix, ComplexVector, Tolerances};
use crate::partitions::Partition;
use crate::product_space::{kron, qubit_orthogonal};

/// Minimum distance from both 0 and 1 of `|<a_i|a_j>|` for qubit rays of
/// different blocks.
pub const SKEW_MARGIN: f64 = 0.1;

const MAX_SKEW_ATTEMPTS: usize = 10_000;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/* Random unitaries ***********************************************************/

fn gaussian_matrix(rng: &mut ChaCha20Rng, d: usize) -> ComplexMatrix {
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(d, d);
    for r in 0..d {
        for col in 0..d {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m[(r, col)] = c(re * scale, im * scale);
        }
    }
    m
}

/// QR by Gram–Schmidt with re-orthogonalization. The implicit R has a
/// positive real diagonal, which makes the Q factor Haar distributed.
fn gram_schmidt_columns(m: &ComplexMatrix) -> ComplexMatrix {
    let d = m.cols();
    let mut q: Vec<ComplexVector> = Vec::with_capacity(d);
    for col in 0..d {
        let mut w: Vec<Complex64> = m.column(col).into_entries();
        for _pass in 0..2 {
            for prev in &q {
                let proj: Complex64 = prev
                    .entries()
                    .iter()
                    .zip(&w)
                    .map(|(p, x)| p.conj() * x)
                    .sum();
                for (x, p) in w.iter_mut().zip(prev.entries()) {
                    *x -= proj * p;
                }
            }
        }
        let v = ComplexVector::new(w)
            .normalized()
            .expect("Gaussian columns are independent with probability one");
        q.push(v);
    }
    ComplexMatrix::from_columns(&q).expect("square by construction")
}

fn random_unitary_with(rng: &mut ChaCha20Rng, d: usize) -> ComplexMatrix {
    gram_schmidt_columns(&gaussian_matrix(rng, d))
}

/// Haar-random `d×d` unitary, deterministic in `seed`.
pub fn random_unitary(d: usize, seed: u64) -> ComplexMatrix {
    assert!(d >= 1, "unitary dimension must be positive");
    random_unitary_with(&mut ChaCha20Rng::seed_from_u64(seed), d)
}

fn random_qubit(rng: &mut ChaCha20Rng) -> ComplexVector {
    random_unitary_with(rng, 2).column(0).canonical_phase()
}

/* Generation from a type *****************************************************/

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceMode {
    /// V_i spanned by consecutive coordinate vectors.
    IdentityBlocks,
    /// V_i spanned by consecutive columns of a Haar-random unitary.
    HaarRandom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMode {
    /// A(a⊥) = A(a).
    EqualGroups,
    /// A(a⊥) = A(a) rotated by a random unitary inside V_i.
    IndependentGroups,
}

#[derive(Clone, Debug, PartialEq)]
pub enum QubitMode {
    /// One qubit state per block, in block order.
    FixedList(Vec<ComplexVector>),
    /// Rejection-sampled pairwise skew qubit rays.
    RandomSkew,
}

/// Recipe for [`generate_from_type`].
#[derive(Clone, Debug, PartialEq)]
pub struct TypeSpec {
    pub n: usize,
    pub partition: Partition,
    pub seed: u64,
    pub subspace_mode: SubspaceMode,
    pub pair_mode: PairMode,
    pub qubit_mode: QubitMode,
}

impl TypeSpec {
    /// Random subspaces, independent groups and random skew qubits.
    pub fn new(partition: Partition, seed: u64) -> Self {
        TypeSpec {
            n: partition.n(),
            partition,
            seed,
            subspace_mode: SubspaceMode::HaarRandom,
            pair_mode: PairMode::IndependentGroups,
            qubit_mode: QubitMode::RandomSkew,
        }
    }

    pub fn subspace_mode(mut self, mode: SubspaceMode) -> Self {
        self.subspace_mode = mode;
        self
    }

    pub fn pair_mode(mut self, mode: PairMode) -> Self {
        self.pair_mode = mode;
        self
    }

    pub fn qubit_mode(mut self, mode: QubitMode) -> Self {
        self.qubit_mode = mode;
        self
    }
}

fn is_skew(x: &ComplexVector, y: &ComplexVector) -> bool {
    let overlap = inner(x, y).map_or(0.0, |z| z.norm());
    (SKEW_MARGIN..=1.0 - SKEW_MARGIN).contains(&overlap)
}

fn skew_qubits(rng: &mut ChaCha20Rng, count: usize) -> Result<Vec<ComplexVector>> {
    let mut out: Vec<ComplexVector> = Vec::with_capacity(count);
    while out.len() < count {
        let mut attempts = 0;
        let next = loop {
            let candidate = random_qubit(rng);
            if out.iter().all(|prev| is_skew(prev, &candidate)) {
                break candidate;
            }
            attempts += 1;
            if attempts == MAX_SKEW_ATTEMPTS {
                return Err(Error::InvalidParams(format!(
                    "could not sample {count} pairwise skew qubit rays"
                )));
            }
        };
        out.push(next);
    }
    Ok(out)
}

fn fixed_qubits(states: &[ComplexVector], count: usize) -> Result<Vec<ComplexVector>> {
    if states.len() != count {
        return Err(Error::InvalidParams(format!(
            "{} qubit states supplied for {count} blocks",
            states.len()
        )));
    }
    let out = states
        .iter()
        .map(|s| {
            if s.dim() != 2 {
                return Err(Error::InvalidParams("qubit states must lie in C^2".into()));
            }
            s.normalized()
                .map(|u| u.canonical_phase())
                .ok_or(Error::ZeroVector)
        })
        .collect::<Result<Vec<_>>>()?;
    for (i, x) in out.iter().enumerate() {
        for y in &out[i + 1..] {
            if !is_skew(x, y) {
                return Err(Error::InvalidParams(format!(
                    "qubit states {x} and {y} are not skew (overlap outside [{SKEW_MARGIN}, {}])",
                    1.0 - SKEW_MARGIN
                )));
            }
        }
    }
    Ok(out)
}

/// Builds a product basis whose right type is `spec.partition`.
///
/// Members are emitted block by block: `a_i ⊗ A(a_i)` followed by
/// `a_i⊥ ⊗ A(a_i⊥)`, blocks in partition order.
pub fn generate_from_type(spec: &TypeSpec) -> Result<ProductBasis> {
    let n = spec.n;
    if spec.partition.n() != n {
        return Err(Error::PartitionMismatch {
            expected: n,
            got: spec.partition.n(),
        });
    }
    if n == 0 || n > crate::partitions::MAX_N {
        return Err(Error::OutOfRange(n));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);

    let frame = match spec.subspace_mode {
        SubspaceMode::IdentityBlocks => ComplexMatrix::identity(n),
        SubspaceMode::HaarRandom => random_unitary_with(&mut rng, n),
    };
    let qubits = match &spec.qubit_mode {
        QubitMode::FixedList(states) => fixed_qubits(states, spec.partition.len())?,
        QubitMode::RandomSkew => skew_qubits(&mut rng, spec.partition.len())?,
    };

    let mut vectors = Vec::with_capacity(2 * n);
    let mut offset = 0;
    for (&m, a) in spec.partition.parts().iter().zip(&qubits) {
        let group_a: Vec<ComplexVector> = (offset..offset + m).map(|k| frame.column(k)).collect();
        let group_a_perp = match spec.pair_mode {
            PairMode::EqualGroups => group_a.clone(),
            PairMode::IndependentGroups => {
                rotate_within(&group_a, &random_unitary_with(&mut rng, m))
            }
        };
        let a_perp = qubit_orthogonal(a)?;
        vectors.extend(group_a.iter().map(|b| kron(a, b)));
        vectors.extend(group_a_perp.iter().map(|b| kron(&a_perp, b)));
        offset += m;
    }
    ProductBasis::new(n, vectors)
}

/// `w_k = Σ_j u_{jk} v_j`: another orthonormal basis of span{v_j}.
fn rotate_within(vs: &[ComplexVector], u: &ComplexMatrix) -> Vec<ComplexVector> {
    let dim = vs[0].dim();
    (0..u.cols())
        .map(|k| {
            let mut out = vec![c(0.0, 0.0); dim];
            for (j, v) in vs.iter().enumerate() {
                for (o, x) in out.iter_mut().zip(v.entries()) {
                    *o += u[(j, k)] * x;
                }
            }
            ComplexVector::new(out)
        })
        .collect()
}

/* Named families *************************************************************/

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyTag {
    D4B0,
    D4B1,
    D4B2,
    D6B0,
    D6B1,
    D6B2,
    D6B3,
    D4MupbTriple,
    D6MubTriple,
    GeneralMupbTriple,
    Counterexample1_4,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 11] = [
        FamilyTag::D4B0,
        FamilyTag::D4B1,
        FamilyTag::D4B2,
        FamilyTag::D6B0,
        FamilyTag::D6B1,
        FamilyTag::D6B2,
        FamilyTag::D6B3,
        FamilyTag::D4MupbTriple,
        FamilyTag::D6MubTriple,
        FamilyTag::GeneralMupbTriple,
        FamilyTag::Counterexample1_4,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyTag::D4B0 => "d4_B0",
            FamilyTag::D4B1 => "d4_B1",
            FamilyTag::D4B2 => "d4_B2",
            FamilyTag::D6B0 => "d6_B0",
            FamilyTag::D6B1 => "d6_B1",
            FamilyTag::D6B2 => "d6_B2",
            FamilyTag::D6B3 => "d6_B3",
            FamilyTag::D4MupbTriple => "d4_mupb_triple",
            FamilyTag::D6MubTriple => "d6_mub_triple",
            FamilyTag::GeneralMupbTriple => "general_mupb_triple",
            FamilyTag::Counterexample1_4 => "counterexample_1_4",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Parameters for [`named_family`].
#[derive(Clone, Debug, PartialEq)]
pub struct FamilyParams {
    pub family: FamilyTag,
    /// `(α, β)` of the 2-dimensional block rotation for `d6_B1`.
    pub unitary_params: Vec<Complex64>,
    /// Overrides the default qubit states `|0⟩, |+⟩, |+i⟩`.
    pub qubit_states: Option<Vec<ComplexVector>>,
    /// For `general_mupb_triple`: G(0_z), G(1_z), G(0_x), G(1_x), G(0_y),
    /// G(1_y), each a list of n vectors of Cⁿ.
    pub qudit_bases: Vec<Vec<ComplexVector>>,
}

impl FamilyParams {
    pub fn new(family: FamilyTag) -> Self {
        FamilyParams {
            family,
            unitary_params: Vec::new(),
            qubit_states: None,
            qudit_bases: Vec::new(),
        }
    }

    pub fn with_unitary_params(mut self, params: Vec<Complex64>) -> Self {
        self.unitary_params = params;
        self
    }

    pub fn with_qubit_states(mut self, states: Vec<ComplexVector>) -> Self {
        self.qubit_states = Some(states);
        self
    }

    pub fn with_qudit_bases(mut self, bases: Vec<Vec<ComplexVector>>) -> Self {
        self.qudit_bases = bases;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilyOutput {
    Single(ProductBasis),
    Triple([ProductBasis; 3]),
}

impl FamilyOutput {
    pub fn into_bases(self) -> Vec<ProductBasis> {
        match self {
            FamilyOutput::Single(b) => vec![b],
            FamilyOutput::Triple(t) => t.into(),
        }
    }

    pub fn single(self) -> Option<ProductBasis> {
        match self {
            FamilyOutput::Single(b) => Some(b),
            FamilyOutput::Triple(_) => None,
        }
    }
}

/// Pauli eigenbases of C²: index 0 = z, 1 = x, 2 = y.
pub fn pauli_eigenbasis(axis: usize) -> [ComplexVector; 2] {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    match axis {
        0 => [ComplexVector::basis(2, 0), ComplexVector::basis(2, 1)],
        1 => [
            ComplexVector::new(vec![c(r, 0.0), c(r, 0.0)]),
            ComplexVector::new(vec![c(r, 0.0), c(-r, 0.0)]),
        ],
        2 => [
            ComplexVector::new(vec![c(r, 0.0), c(0.0, r)]),
            ComplexVector::new(vec![c(r, 0.0), c(0.0, -r)]),
        ],
        _ => panic!("Pauli axis must be 0, 1 or 2"),
    }
}

/// The four matrices of the d = 6 MUB triple: `(B11, B12, B21, B22)`.
pub fn d6_mub_matrices() -> (ComplexMatrix, ComplexMatrix, ComplexMatrix, ComplexMatrix) {
    let one = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let w = omega();
    let w2 = w * w;
    let s2 = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let s3 = c(1.0 / 3f64.sqrt(), 0.0);
    let b11 = ComplexMatrix::from_rows(&[vec![one, one], vec![one, -one]]).unwrap();
    let b12 = ComplexMatrix::from_rows(&[vec![one, one, one], vec![one, w, w2], vec![one, w2, w]])
        .unwrap();
    let b21 = ComplexMatrix::from_rows(&[vec![one, one], vec![i, -i]]).unwrap();
    let b22 = ComplexMatrix::from_rows(&[vec![one, one, one], vec![w, w2, one], vec![w, one, w2]])
        .unwrap();
    (b11.scale(s2), b12.scale(s3), b21.scale(s2), b22.scale(s3))
}

fn default_qubits() -> Vec<ComplexVector> {
    vec![
        ComplexVector::basis(2, 0),
        pauli_eigenbasis(1)[0].clone(),
        pauli_eigenbasis(2)[0].clone(),
    ]
}

fn qubits_for(params: &FamilyParams, needed: usize) -> Result<Vec<ComplexVector>> {
    match &params.qubit_states {
        None => Ok(default_qubits().into_iter().take(needed).collect()),
        Some(states) => {
            if states.len() < needed {
                return Err(Error::InvalidParams(format!(
                    "{} needs {needed} qubit states, got {}",
                    params.family,
                    states.len()
                )));
            }
            fixed_qubits(&states[..needed], needed)
        }
    }
}

fn pairs_with(
    a: &ComplexVector,
    group_a: &[ComplexVector],
    group_a_perp: &[ComplexVector],
) -> Result<Vec<ComplexVector>> {
    let a_perp = qubit_orthogonal(a)?;
    Ok(group_a
        .iter()
        .map(|b| kron(a, b))
        .chain(group_a_perp.iter().map(|b| kron(&a_perp, b)))
        .collect())
}

fn e(n: usize, k: usize) -> ComplexVector {
    ComplexVector::basis(n, k)
}

/// Instantiates one of the named families.
pub fn named_family(params: &FamilyParams) -> Result<FamilyOutput> {
    let single = |n: usize, vectors: Vec<ComplexVector>| -> Result<FamilyOutput> {
        Ok(FamilyOutput::Single(ProductBasis::new(n, vectors)?))
    };
    let plus = pauli_eigenbasis(1);
    match params.family {
        FamilyTag::D4B0 => {
            // a1 ⊗ b, a1⊥ ⊗ b, a2 ⊗ b⊥, a2⊥ ⊗ b⊥
            let q = qubits_for(params, 2)?;
            let mut vs = pairs_with(&q[0], &[e(2, 0)], &[e(2, 0)])?;
            vs.extend(pairs_with(&q[1], &[e(2, 1)], &[e(2, 1)])?);
            single(2, vs)
        }
        FamilyTag::D4B1 => {
            let q = qubits_for(params, 1)?;
            single(2, pairs_with(&q[0], &[e(2, 0), e(2, 1)], &plus)?)
        }
        FamilyTag::D4B2 => {
            let q = qubits_for(params, 1)?;
            let b = [e(2, 0), e(2, 1)];
            single(2, pairs_with(&q[0], &b, &b)?)
        }
        FamilyTag::D6B0 => {
            let q = qubits_for(params, 3)?;
            let mut vs = Vec::with_capacity(6);
            for (k, a) in q.iter().enumerate() {
                vs.extend(pairs_with(a, &[e(3, k)], &[e(3, k)])?);
            }
            single(3, vs)
        }
        FamilyTag::D6B1 => {
            let (alpha, beta) = d6_b1_params(&params.unitary_params)?;
            let q = qubits_for(params, 2)?;
            let (b, b_perp) = (e(3, 0), e(3, 1));
            // V̂b = αb + βb⊥,  V̂b⊥ = β̄b − ᾱb⊥
            let vb = ComplexVector::new(vec![alpha, beta, c(0.0, 0.0)]);
            let vb_perp = ComplexVector::new(vec![beta.conj(), -alpha.conj(), c(0.0, 0.0)]);
            let mut vs = pairs_with(&q[0], &[b, b_perp], &[vb, vb_perp])?;
            vs.extend(pairs_with(&q[1], &[e(3, 2)], &[e(3, 2)])?);
            single(3, vs)
        }
        FamilyTag::D6B2 => {
            let q = qubits_for(params, 1)?;
            let (_, b12, _, _) = d6_mub_matrices();
            let first: Vec<_> = (0..3).map(|k| e(3, k)).collect();
            single(3, pairs_with(&q[0], &first, &b12.columns())?)
        }
        FamilyTag::D6B3 => {
            let q = qubits_for(params, 1)?;
            let b: Vec<_> = (0..3).map(|k| e(3, k)).collect();
            single(3, pairs_with(&q[0], &b, &b)?)
        }
        FamilyTag::D4MupbTriple => {
            let triple = [0, 1, 2].map(|axis| {
                let basis = pauli_eigenbasis(axis);
                let vs = basis
                    .iter()
                    .flat_map(|x| basis.iter().map(move |y| kron(x, y)))
                    .collect();
                ProductBasis::new(2, vs)
            });
            let [b0, b1, b2] = triple;
            Ok(FamilyOutput::Triple([b0?, b1?, b2?]))
        }
        FamilyTag::D6MubTriple => {
            let (b11, b12, b21, b22) = d6_mub_matrices();
            let bases = [ComplexMatrix::identity(6), b11.kron(&b12), b21.kron(&b22)]
                .map(|m| ProductBasis::new(3, m.columns()));
            let [b0, b1, b2] = bases;
            Ok(FamilyOutput::Triple([b0?, b1?, b2?]))
        }
        FamilyTag::GeneralMupbTriple => general_mupb_triple(&params.qudit_bases),
        FamilyTag::Counterexample1_4 => {
            let (a1, a2) = (e(2, 0), plus[0].clone());
            let a1_perp = qubit_orthogonal(&a1)?;
            let a2_perp = qubit_orthogonal(&a2)?;
            single(
                2,
                vec![
                    kron(&a1, &a1),
                    kron(&a1_perp, &a1_perp),
                    kron(&a2, &a2),
                    kron(&a2_perp, &a2_perp),
                ],
            )
        }
    }
}

fn d6_b1_params(params: &[Complex64]) -> Result<(Complex64, Complex64)> {
    let (alpha, beta) = match params {
        [] => {
            let r = std::f64::consts::FRAC_1_SQRT_2;
            (c(r, 0.0), c(r, 0.0))
        }
        [alpha, beta] => (*alpha, *beta),
        _ => {
            return Err(Error::InvalidParams(format!(
                "d6_B1 takes exactly two parameters (alpha, beta), got {}",
                params.len()
            )))
        }
    };
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParams(format!(
            "|alpha|^2 + |beta|^2 = {norm} must equal 1"
        )));
    }
    Ok((alpha, beta))
}

/// `{|j_b⟩ ⊗ G(j_b)}` for b = z, x, y. The supplied G bases are validated:
/// each must be an orthonormal basis of Cⁿ, and G(j_b), G(k_b') must be
/// mutually unbiased whenever b ≠ b'.
fn general_mupb_triple(g: &[Vec<ComplexVector>]) -> Result<FamilyOutput> {
    if g.len() != 6 {
        return Err(Error::InvalidParams(format!(
            "general_mupb_triple needs six qudit bases, got {}",
            g.len()
        )));
    }
    let n = g[0].len();
    if n == 0 {
        return Err(Error::InvalidParams("qudit bases must be non-empty".into()));
    }
    let tol = Tolerances::default();
    for (x, gx) in g.iter().enumerate() {
        for (y, gy) in g.iter().enumerate().skip(x + 1) {
            if x / 2 == y / 2 {
                continue;
            }
            let (ok, dev) = mu_check(gx, gy, &tol)
                .map_err(|err| Error::InvalidParams(format!("qudit basis {x} or {y}: {err}")))?;
            if !ok {
                return Err(Error::InvalidParams(format!(
                    "qudit bases {x} and {y} are not mutually unbiased (deviation {dev:.3e})"
                )));
            }
        }
    }
    let mut out = Vec::with_capacity(3);
    for axis in 0..3 {
        let [j0, j1] = pauli_eigenbasis(axis);
        let vectors = g[2 * axis]
            .iter()
            .map(|b| kron(&j0, b))
            .chain(g[2 * axis + 1].iter().map(|b| kron(&j1, b)))
            .collect();
        out.push(ProductBasis::new(n, vectors)?);
    }
    let [b0, b1, b2]: [ProductBasis; 3] = out.try_into().expect("three bases");
    Ok(FamilyOutput::Triple([b0, b1, b2]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyzer::{classify, verify_product_basis};

    #[test]
    fn random_unitary_is_unitary_and_deterministic() {
        let u = random_unitary(1, 3);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-12);
        for d in 1..=8 {
            for seed in 0..5 {
                let u = random_unitary(d, seed);
                assert!(u.unitarity_residual() < 1e-12);
                assert_eq!(u, random_unitary(d, seed));
            }
        }
        assert_ne!(random_unitary(3, 1), random_unitary(3, 2));
    }

    #[test]
    fn direct_product_from_single_block() {
        let spec = TypeSpec::new(Partition::new(vec![4]).unwrap(), 0)
            .pair_mode(PairMode::EqualGroups)
            .qubit_mode(QubitMode::FixedList(vec![ComplexVector::basis(2, 0)]));
        let basis = generate_from_type(&spec).unwrap();
        let report = classify(&basis, &Tolerances::default());
        assert_eq!(report.right_type.unwrap().parts(), &[4]);
        assert!(report.is_direct_product);
    }

    #[test]
    fn generated_basis_round_trips() {
        let spec = TypeSpec::new("1+1+1".parse().unwrap(), 7);
        let report = classify(&generate_from_type(&spec).unwrap(), &Tolerances::default());
        assert_eq!(report.right_type.unwrap().to_string(), "1+1+1");

        let spec = TypeSpec::new("3+2+1".parse().unwrap(), 1);
        let mut basis = generate_from_type(&spec).unwrap();
        let check = verify_product_basis(&mut basis, &Tolerances::default());
        assert!(check.ok);
        assert!(check.gram_residual < 1e-12);
    }

    #[test]
    fn partition_mismatch() {
        let mut spec = TypeSpec::new("2+1".parse().unwrap(), 0);
        spec.n = 4;
        assert_eq!(
            generate_from_type(&spec),
            Err(Error::PartitionMismatch {
                expected: 4,
                got: 3
            })
        );
    }

    #[test]
    fn fixed_qubits_must_be_skew() {
        let spec = TypeSpec::new("1+1".parse().unwrap(), 0).qubit_mode(QubitMode::FixedList(vec![
            ComplexVector::basis(2, 0),
            ComplexVector::basis(2, 1),
        ]));
        assert!(matches!(
            generate_from_type(&spec),
            Err(Error::InvalidParams(_))
        ));
        let spec = TypeSpec::new("1+1".parse().unwrap(), 0)
            .qubit_mode(QubitMode::FixedList(vec![ComplexVector::basis(2, 0)]));
        assert!(generate_from_type(&spec).is_err());
    }

    #[test]
    fn family_tags_parse() {
        for tag in FamilyTag::ALL {
            assert_eq!(tag.name().parse::<FamilyTag>().unwrap(), tag);
        }
        assert!(matches!(
            "d8_B0".parse::<FamilyTag>(),
            Err(Error::UnknownFamily(_))
        ));
    }

    #[test]
    fn d6_b1_rejects_unnormalized_params() {
        let params =
            FamilyParams::new(FamilyTag::D6B1).with_unitary_params(vec![c(1.0, 0.0), c(0.5, 0.0)]);
        assert!(matches!(
            named_family(&params),
            Err(Error::InvalidParams(_))
        ));
        let params = FamilyParams::new(FamilyTag::D6B1).with_unitary_params(vec![c(1.0, 0.0)]);
        assert!(named_family(&params).is_err());
    }

    #[test]
    fn d6_matrices_are_unitary() {
        let (b11, b12, b21, b22) = d6_mub_matrices();
        for m in [b11, b12, b21, b22] {
            assert!(m.unitarity_residual() < 1e-15);
        }
    }

    #[test]
    fn general_triple_rejects_biased_qudit_bases() {
        let id: Vec<_> = (0..2).map(|k| ComplexVector::basis(2, k)).collect();
        let params =
            FamilyParams::new(FamilyTag::GeneralMupbTriple).with_qudit_bases(vec![id.clone(); 6]);
        assert!(matches!(
            named_family(&params),
            Err(Error::InvalidParams(_))
        ));
        let params = FamilyParams::new(FamilyTag::GeneralMupbTriple).with_qudit_bases(vec![id; 2]);
        assert!(named_family(&params).is_err());
    }
}
