//! Verification and structural classification of product bases of C² ⊗ Cⁿ.
//!
//! A verified product basis `{a_m ⊗ b_m}` always has the following shape:
//! the qubit factors fall into rays that pair up antipodally `(a_i, a_i⊥)`;
//! the qudit factors attached to `a_i` and to `a_i⊥` are two orthonormal
//! bases `A(a_i)`, `A(a_i⊥)` of one subspace `V_i`; and the `V_i` split Cⁿ
//! into mutually orthogonal pieces. [`classify`] recovers that structure and
//! reports the sorted subspace dimensions as the basis' right type.

use std::collections::BTreeSet;

use petgraph::algo::matching::maximum_matching;
use petgraph::graph::UnGraph;

use crate::error::{Error, Result};
use crate::numerics::{
    gram_residual, inner_unchecked, orthonormalize, singular_values_2xn, subspace_equal,
    ComplexVector, Subspace, Tolerances,
};
use crate::partitions::Partition;
use crate::product_space::{reshape_2xn, Factorization, ProductVector};

/// `2n` unit vectors of `C^{2n}`, claimed to be a product basis of C² ⊗ Cⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductBasis {
    n: usize,
    vectors: Vec<ComplexVector>,
    factored: Option<Vec<ProductVector>>,
}

impl ProductBasis {
    /// Checks shape and normalization (at the default unit tolerance).
    pub fn new(n: usize, vectors: Vec<ComplexVector>) -> Result<Self> {
        ProductBasis::with_tolerances(n, vectors, &Tolerances::default())
    }

    pub fn with_tolerances(
        n: usize,
        vectors: Vec<ComplexVector>,
        tol: &Tolerances,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::MalformedBasis("n must be positive".into()));
        }
        if vectors.len() != 2 * n {
            return Err(Error::MalformedBasis(format!(
                "expected {} vectors for n = {n}, got {}",
                2 * n,
                vectors.len()
            )));
        }
        for (idx, v) in vectors.iter().enumerate() {
            if v.dim() != 2 * n {
                return Err(Error::MalformedBasis(format!(
                    "vector {idx} has dimension {}, expected {}",
                    v.dim(),
                    2 * n
                )));
            }
            if !v.is_unit(tol) {
                return Err(Error::MalformedBasis(format!(
                    "vector {idx} is not normalized (|<v|v> - 1| = {:.3e})",
                    (v.norm_sqr() - 1.0).abs()
                )));
            }
        }
        Ok(ProductBasis {
            n,
            vectors,
            factored: None,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vectors(&self) -> &[ComplexVector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<ComplexVector> {
        self.vectors
    }

    /// Cached factorizations, present after a successful
    /// [`verify_product_basis`] or [`ProductBasis::factor`].
    pub fn factored(&self) -> Option<&[ProductVector]> {
        self.factored.as_deref()
    }

    /// Factorizes every vector and caches the result, without requiring
    /// orthonormality. Fails on the first entangled vector.
    pub fn factor(&mut self, tol: &Tolerances) -> Result<&[ProductVector]> {
        let mut out = Vec::with_capacity(self.vectors.len());
        for (index, v) in self.vectors.iter().enumerate() {
            match factor_member(v, tol) {
                Factorization::Product(p) => out.push(p),
                Factorization::NotProduct { sigma2 } => {
                    return Err(Error::NotAProduct { index, sigma2 })
                }
            }
        }
        Ok(self.factored.insert(out))
    }

    /// Exchanges the tensor factors of every vector (C² ⊗ C² only).
    pub fn swap_factors(&self) -> Result<ProductBasis> {
        if self.n != 2 {
            return Err(Error::Shape(format!(
                "factor swap stays inside C^2 ⊗ C^n only for n = 2, got n = {}",
                self.n
            )));
        }
        let vectors = self
            .vectors
            .iter()
            .map(|v| ComplexVector::new(vec![v[0], v[2], v[1], v[3]]))
            .collect();
        Ok(ProductBasis {
            n: 2,
            vectors,
            factored: None,
        })
    }
}

/// Factorization of a basis member. Normalization is enforced when the basis
/// is constructed, so only the rank test is applied here.
fn factor_member(v: &ComplexVector, tol: &Tolerances) -> Factorization {
    let relaxed = Tolerances {
        unit: f64::INFINITY,
        ..*tol
    };
    match crate::product_space::factorize(v, &relaxed) {
        Ok(f) => f,
        Err(_) => {
            let sigma2 = reshape_2xn(v)
                .and_then(|m| singular_values_2xn(&m))
                .map_or(f64::NAN, |(_, s2)| s2);
            Factorization::NotProduct { sigma2 }
        }
    }
}

/// Orthonormality of the whole basis: `(passes, max |G - I|)`.
pub fn verify_orthonormal(basis: &ProductBasis, tol: &Tolerances) -> (bool, f64) {
    let residual = gram_residual(&basis.vectors);
    (residual <= tol.orth, residual)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductCheck {
    pub ok: bool,
    pub orthonormal: bool,
    pub gram_residual: f64,
    pub factors: Vec<Factorization>,
}

impl ProductCheck {
    pub fn first_non_product(&self) -> Option<(usize, f64)> {
        self.factors.iter().enumerate().find_map(|(k, f)| match f {
            Factorization::NotProduct { sigma2 } => Some((k, *sigma2)),
            Factorization::Product(_) => None,
        })
    }
}

/// Orthonormality plus product-ness of every member. On success the
/// factorizations are cached in `basis`.
pub fn verify_product_basis(basis: &mut ProductBasis, tol: &Tolerances) -> ProductCheck {
    let (orthonormal, gram_residual) = verify_orthonormal(basis, tol);
    let factors: Vec<Factorization> = basis
        .vectors
        .iter()
        .map(|v| factor_member(v, tol))
        .collect();
    let ok = orthonormal && factors.iter().all(Factorization::is_product);
    if ok {
        basis.factored = Some(
            factors
                .iter()
                .filter_map(|f| f.product().cloned())
                .collect(),
        );
    }
    ProductCheck {
        ok,
        orthonormal,
        gram_residual,
        factors,
    }
}

fn require_factored(basis: &ProductBasis) -> Result<&[ProductVector]> {
    basis.factored().ok_or(Error::FactorizeFirst)
}

/// For every pair of members, either the qubit or the qudit factors are
/// orthogonal.
pub fn check_pairwise_condition(basis: &ProductBasis, tol: &Tolerances) -> Result<bool> {
    let factors = require_factored(basis)?;
    for (i, x) in factors.iter().enumerate() {
        for y in &factors[i + 1..] {
            let qubit = inner_unchecked(&x.a, &y.a).norm();
            let qudit = inner_unchecked(&x.b, &y.b).norm();
            if qubit.min(qudit) > tol.orth {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether the qubit factors split into `n` orthonormal bases of C² and the
/// qudit factors into two orthonormal bases of Cⁿ.
pub fn check_groupable(basis: &ProductBasis, tol: &Tolerances) -> Result<bool> {
    let factors = require_factored(basis)?;
    let qubits: Vec<&ComplexVector> = factors.iter().map(|p| &p.a).collect();
    let qudits: Vec<&ComplexVector> = factors.iter().map(|p| &p.b).collect();
    Ok(qubits_pair_up(&qubits, tol) && qudits_split_in_two(&qudits, basis.n, tol))
}

/// Perfect matching on the "orthogonal within tolerance" graph.
fn qubits_pair_up(qubits: &[&ComplexVector], tol: &Tolerances) -> bool {
    let mut graph = UnGraph::<(), ()>::with_capacity(qubits.len(), 0);
    let nodes: Vec<_> = qubits.iter().map(|_| graph.add_node(())).collect();
    for i in 0..qubits.len() {
        for j in (i + 1)..qubits.len() {
            if inner_unchecked(qubits[i], qubits[j]).norm() <= tol.orth {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }
    maximum_matching(&graph).is_perfect()
}

/// Two vectors that are not orthogonal must land in different bases, so the
/// split is a 2-colouring of the non-orthogonality graph with both colour
/// classes of size `n`. Components are 2-coloured, then oriented by
/// backtracking until the sizes balance.
fn qudits_split_in_two(qudits: &[&ComplexVector], n: usize, tol: &Tolerances) -> bool {
    let count = qudits.len();
    let conflict = |i: usize, j: usize| inner_unchecked(qudits[i], qudits[j]).norm() > tol.orth;

    let mut colour: Vec<Option<bool>> = vec![None; count];
    // (size of colour-false side, size of colour-true side) per component
    let mut components: Vec<(usize, usize)> = Vec::new();
    for start in 0..count {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut sizes = (0, 0);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let c = colour[v].expect("coloured before push");
            if c {
                sizes.1 += 1;
            } else {
                sizes.0 += 1;
            }
            for w in (0..count).filter(|&w| w != v && conflict(v, w)) {
                match colour[w] {
                    None => {
                        colour[w] = Some(!c);
                        stack.push(w);
                    }
                    Some(cw) if cw == c => return false,
                    Some(_) => {}
                }
            }
        }
        components.push(sizes);
    }
    orient(&components, n)
}

fn orient(components: &[(usize, usize)], target: usize) -> bool {
    fn go(rest: &[(usize, usize)], left: usize, suffix_max: &[usize]) -> bool {
        match rest.split_first() {
            None => left == 0,
            Some((&(x, y), tail)) => {
                if left > suffix_max[0] {
                    return false;
                }
                (x <= left && go(tail, left - x, &suffix_max[1..]))
                    || (y <= left && go(tail, left - y, &suffix_max[1..]))
            }
        }
    }
    let mut suffix_max = vec![0; components.len() + 1];
    for k in (0..components.len()).rev() {
        let (x, y) = components[k];
        suffix_max[k] = suffix_max[k + 1] + x.max(y);
    }
    go(components, target, &suffix_max)
}

/* Classification *************************************************************/

/// Basis members whose qubit factors are the same ray.
#[derive(Clone, Debug, PartialEq)]
pub struct RayClass {
    pub representative: ComplexVector,
    pub member_indices: Vec<usize>,
}

/// One antipodal pair `(a, a⊥)` with its two qudit groups.
#[derive(Clone, Debug, PartialEq)]
pub struct PairBlock {
    pub a: ComplexVector,
    pub a_perp: ComplexVector,
    /// Basis indices of the members `a ⊗ ·`.
    pub a_indices: Vec<usize>,
    /// Basis indices of the members `a⊥ ⊗ ·`.
    pub a_perp_indices: Vec<usize>,
    /// `A(a)`.
    pub group_a: Vec<ComplexVector>,
    /// `A(a⊥)`.
    pub group_a_perp: Vec<ComplexVector>,
    /// Span of both groups.
    pub subspace: Subspace,
    pub multiplicity: usize,
    /// `A(a)` and `A(a⊥)` are the same set of rays.
    pub groups_coincide: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub valid: bool,
    pub n: usize,
    pub ray_classes: Vec<RayClass>,
    /// Sorted by decreasing multiplicity.
    pub blocks: Vec<PairBlock>,
    pub right_type: Option<Partition>,
    /// Concatenation of the `A(a_i)`: an orthonormal basis of Cⁿ.
    pub basis_b1n: Vec<ComplexVector>,
    /// Concatenation of the `A(a_i⊥)`: an orthonormal basis of Cⁿ.
    pub basis_b2n: Vec<ComplexVector>,
    pub is_direct_product: bool,
    pub gram_residual: f64,
    pub diagnostics: Vec<String>,
}

impl StructureReport {
    pub fn r(&self) -> usize {
        self.blocks.len()
    }

    fn invalid(n: usize, gram_residual: f64, diagnostics: Vec<String>) -> Self {
        StructureReport {
            valid: false,
            n,
            ray_classes: Vec::new(),
            blocks: Vec::new(),
            right_type: None,
            basis_b1n: Vec::new(),
            basis_b2n: Vec::new(),
            is_direct_product: false,
            gram_residual,
            diagnostics,
        }
    }
}

/// Decomposes a product basis into antipodal pairs, qudit groups and
/// orthogonal subspaces.
///
/// Failures are reported in the returned [`StructureReport`] (with
/// `valid = false` and a diagnostic naming the first violated step).
pub fn classify(basis: &ProductBasis, tol: &Tolerances) -> StructureReport {
    let n = basis.n;
    let mut local = basis.clone();
    let check = verify_product_basis(&mut local, tol);
    if !check.ok {
        let mut diagnostics = Vec::new();
        if !check.orthonormal {
            diagnostics.push(format!(
                "not orthonormal: Gram residual {:.3e} exceeds {:.1e}",
                check.gram_residual, tol.orth
            ));
        }
        for (k, f) in check.factors.iter().enumerate() {
            if let Factorization::NotProduct { sigma2 } = f {
                diagnostics.push(format!(
                    "vector {k} is not a product vector (sigma2 = {sigma2:.3e})"
                ));
            }
        }
        return StructureReport::invalid(n, check.gram_residual, diagnostics);
    }
    let factors = local.factored.as_deref().expect("cached on success");

    let fail = |classes: Vec<RayClass>, msg: String| {
        let mut report = StructureReport::invalid(n, check.gram_residual, vec![msg]);
        report.ray_classes = classes;
        report
    };

    let classes = match ray_classes(factors, tol) {
        Ok(c) => c,
        Err(msg) => return fail(Vec::new(), msg),
    };
    let pairs = match pair_classes(&classes, tol) {
        Ok(p) => p,
        Err(msg) => return fail(classes, msg),
    };

    let mut blocks = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        match build_block(&classes[i], &classes[j], factors, tol) {
            Ok(block) => blocks.push(block),
            Err(msg) => return fail(classes, msg),
        }
    }
    // stable: ties keep first-appearance order
    blocks.sort_by_key(|b| std::cmp::Reverse(b.multiplicity));

    let total: usize = blocks.iter().map(|b| b.multiplicity).sum();
    if total != n {
        return fail(
            classes,
            format!("multiplicities sum to {total}, expected n = {n}"),
        );
    }
    for (k, x) in blocks.iter().enumerate() {
        for (l, y) in blocks.iter().enumerate().skip(k + 1) {
            let overlap = x.subspace.max_cross_overlap(&y.subspace);
            if overlap > tol.orth {
                return fail(
                    classes,
                    format!("subspaces of blocks {k} and {l} are not orthogonal (overlap {overlap:.3e})"),
                );
            }
        }
    }

    let right_type = Partition::new(blocks.iter().map(|b| b.multiplicity).collect())
        .expect("multiplicities are positive and sorted");
    let basis_b1n = blocks
        .iter()
        .flat_map(|b| b.group_a.iter().cloned())
        .collect();
    let basis_b2n = blocks
        .iter()
        .flat_map(|b| b.group_a_perp.iter().cloned())
        .collect();
    let is_direct_product = blocks.len() == 1 && blocks[0].groups_coincide;

    StructureReport {
        valid: true,
        n,
        ray_classes: classes,
        blocks,
        right_type: Some(right_type),
        basis_b1n,
        basis_b2n,
        is_direct_product,
        gram_residual: check.gram_residual,
        diagnostics: Vec::new(),
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Union-find over "same ray" pairs, then a consistency re-check of every
/// class. Classes come out ordered by their smallest member index.
fn ray_classes(
    factors: &[ProductVector],
    tol: &Tolerances,
) -> std::result::Result<Vec<RayClass>, String> {
    let count = factors.len();
    let mut parent: Vec<usize> = (0..count).collect();
    for i in 0..count {
        for j in (i + 1)..count {
            if inner_unchecked(&factors[i].a, &factors[j].a).norm() >= 1.0 - tol.ray {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }

    let mut classes: Vec<RayClass> = Vec::new();
    let mut root_to_class = vec![usize::MAX; count];
    for (m, factor) in factors.iter().enumerate() {
        let root = find(&mut parent, m);
        if root_to_class[root] == usize::MAX {
            root_to_class[root] = classes.len();
            classes.push(RayClass {
                representative: factor.a.canonical_phase(),
                member_indices: Vec::new(),
            });
        }
        classes[root_to_class[root]].member_indices.push(m);
    }

    for class in &classes {
        let members = &class.member_indices;
        for (k, &x) in members.iter().enumerate() {
            for &y in &members[k + 1..] {
                let deviation = 1.0 - inner_unchecked(&factors[x].a, &factors[y].a).norm();
                if deviation >= 2.0 * tol.ray {
                    return Err(format!(
                        "ray class {members:?} is inconsistent: members {x} and {y} deviate by {deviation:.3e}"
                    ));
                }
            }
        }
    }
    Ok(classes)
}

/// Matches every ray class with its unique orthogonal partner class.
fn pair_classes(
    classes: &[RayClass],
    tol: &Tolerances,
) -> std::result::Result<Vec<(usize, usize)>, String> {
    let k = classes.len();
    let mut edges: Vec<(f64, usize, usize)> = Vec::new();
    let mut candidates = vec![0usize; k];
    for i in 0..k {
        for j in (i + 1)..k {
            let overlap =
                inner_unchecked(&classes[i].representative, &classes[j].representative).norm();
            if overlap <= tol.orth {
                edges.push((overlap, i, j));
                candidates[i] += 1;
                candidates[j] += 1;
            }
        }
    }
    for (i, &c) in candidates.iter().enumerate() {
        if c == 0 {
            return Err(format!(
                "no orthogonal partner for the qubit ray of members {:?}",
                classes[i].member_indices
            ));
        }
        if c > 1 {
            return Err(format!(
                "ambiguous orthogonal partner for the qubit ray of members {:?} ({c} candidates)",
                classes[i].member_indices
            ));
        }
    }

    edges.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut matched = vec![false; k];
    let mut pairs = Vec::with_capacity(k / 2);
    for (_, i, j) in edges {
        if !matched[i] && !matched[j] {
            matched[i] = true;
            matched[j] = true;
            pairs.push((i, j));
        }
    }
    if matched.iter().any(|m| !m) {
        return Err("qubit rays do not form a perfect antipodal matching".into());
    }
    pairs.sort_unstable();
    Ok(pairs)
}

fn build_block(
    first: &RayClass,
    second: &RayClass,
    factors: &[ProductVector],
    tol: &Tolerances,
) -> std::result::Result<PairBlock, String> {
    let group = |class: &RayClass| -> Vec<ComplexVector> {
        class
            .member_indices
            .iter()
            .map(|&m| factors[m].b.clone())
            .collect()
    };
    let group_a = group(first);
    let group_a_perp = group(second);
    if group_a.len() != group_a_perp.len() {
        return Err(format!(
            "|A(a)| = {} but |A(a⊥)| = {} for members {:?} / {:?}",
            group_a.len(),
            group_a_perp.len(),
            first.member_indices,
            second.member_indices
        ));
    }
    for (name, g) in [("A(a)", &group_a), ("A(a⊥)", &group_a_perp)] {
        let residual = gram_residual(g);
        if residual > tol.orth {
            return Err(format!(
                "{name} for members {:?} is not orthonormal (residual {residual:.3e})",
                first.member_indices
            ));
        }
    }
    let span_a = orthonormalize(&group_a, tol).map_err(|e| e.to_string())?;
    let span_perp = orthonormalize(&group_a_perp, tol).map_err(|e| e.to_string())?;
    if !subspace_equal(&span_a, &span_perp, tol).map_err(|e| e.to_string())? {
        return Err(format!(
            "span A(a) differs from span A(a⊥) for members {:?} / {:?}",
            first.member_indices, second.member_indices
        ));
    }
    let groups_coincide = same_rays(&group_a, &group_a_perp, tol);
    Ok(PairBlock {
        a: first.representative.clone(),
        a_perp: second.representative.clone(),
        a_indices: first.member_indices.clone(),
        a_perp_indices: second.member_indices.clone(),
        multiplicity: group_a.len(),
        group_a,
        group_a_perp,
        subspace: span_a,
        groups_coincide,
    })
}

/// Order- and phase-insensitive equality of two families of unit vectors.
fn same_rays(xs: &[ComplexVector], ys: &[ComplexVector], tol: &Tolerances) -> bool {
    if xs.len() != ys.len() {
        return false;
    }
    let mut used = BTreeSet::new();
    xs.iter().all(|x| {
        let hit = ys
            .iter()
            .enumerate()
            .find(|(k, y)| !used.contains(k) && inner_unchecked(x, y).norm() >= 1.0 - tol.ray);
        match hit {
            Some((k, _)) => {
                used.insert(k);
                true
            }
            None => false,
        }
    })
}

/// The right type of the factor-swapped basis, defined for n = 2 only.
pub fn left_classify(basis: &ProductBasis, tol: &Tolerances) -> Option<Partition> {
    if basis.n != 2 {
        return None;
    }
    let swapped = basis.swap_factors().ok()?;
    let report = classify(&swapped, tol);
    report.right_type
}

/// Mutual unbiasedness of two orthonormal bases of `C^d`:
/// `(passes, max | |<a_i|b_j>|² - 1/d |)`, passing at `10·tol.orth`.
pub fn mu_check(
    first: &[ComplexVector],
    second: &[ComplexVector],
    tol: &Tolerances,
) -> Result<(bool, f64)> {
    let d = check_is_basis(first, tol)?;
    let d2 = check_is_basis(second, tol)?;
    if d != d2 {
        return Err(Error::NotABasis(format!(
            "bases live in different dimensions ({d} vs {d2})"
        )));
    }
    let target = 1.0 / d as f64;
    let mut deviation: f64 = 0.0;
    for x in first {
        for y in second {
            deviation = deviation.max((inner_unchecked(x, y).norm_sqr() - target).abs());
        }
    }
    Ok((deviation <= 10.0 * tol.orth, deviation))
}

fn check_is_basis(vs: &[ComplexVector], tol: &Tolerances) -> Result<usize> {
    let d = vs
        .first()
        .map(ComplexVector::dim)
        .ok_or_else(|| Error::NotABasis("empty family".into()))?;
    if vs.iter().any(|v| v.dim() != d) || vs.len() != d {
        return Err(Error::NotABasis(format!(
            "{} vectors do not form a basis of C^{d}",
            vs.len()
        )));
    }
    let residual = gram_residual(vs);
    if residual > tol.orth {
        return Err(Error::NotABasis(format!(
            "family is not orthonormal (Gram residual {residual:.3e})"
        )));
    }
    Ok(d)
}
