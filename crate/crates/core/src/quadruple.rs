//! Metric quadruples (Γ, q, V, r): normalization of a presentation to its
//! classifying invariant, the equivalence decision between two quadruples,
//! 2-cocycle (fiber-functor) spaces, second invariant cohomology, and the
//! braided autoequivalence data.
//!
//! Equivalences are pairs (α, f) with α an orthogonal isomorphism and f a
//! graded isomorphism with r' ∘ (f ⊗ f) = ind_α(r), taken modulo f ↦ -f.
//! Since r vanishes between components that are not inverse to each other,
//! the congruence search decomposes into independent degree blocks where
//! alternating-form rank is a complete invariant.

use crate::abgroup::{
    orthogonal_isos, quotient, schur_multiplier_order, Bicharacter, Character, FinAbGroup,
    GroupElement, GroupIso, QuadraticForm, Subgroup,
};
use crate::linalg::{self, Matrix};
use crate::qls::{BilinearForm, QlsDatum};
use crate::scalar::CyclotomicContext;
use std::collections::BTreeMap;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuadrupleError {
    #[error("r_1 is not a Yetter-Drinfeld morphism; violating entries: {0:?}")]
    NotYdMorphism(Vec<(usize, usize)>),
    #[error("group error: {0}")]
    Group(#[from] crate::abgroup::GroupError),
    #[error("form is not alternating")]
    NotAlternating,
    #[error("stabilizer test requires an n x n matrix")]
    BadShape,
}

/// The classifying invariant of a presentation: the group with its
/// diagonalizable quadratic form, the graded object V, and the alternating
/// part of the braiding form.  The diagonalizing bicharacter that produced q
/// is recorded alongside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricQuadruple {
    pub group: FinAbGroup,
    pub q: QuadraticForm,
    pub diag_r0: Bicharacter,
    pub degrees: Vec<GroupElement>,
    pub characters: Vec<Character>,
    pub r: BilinearForm,
    pub ctx_order: u64,
}

impl MetricQuadruple {
    pub fn dim_v(&self) -> usize {
        self.degrees.len()
    }
}

/// (Γ, r_0, V, r_1) ↦ (Γ, q, V, (r_1)_alt) with q(g) = r_0(g, g).
pub fn normalize(
    datum: &QlsDatum,
    r1: &BilinearForm,
) -> Result<MetricQuadruple, QuadrupleError> {
    let violations = r1.yd_violations(datum);
    if !violations.is_empty() {
        return Err(QuadrupleError::NotYdMorphism(violations));
    }
    let (_, alt) = r1.decompose(&datum.ctx);
    Ok(MetricQuadruple {
        group: datum.group.clone(),
        q: datum.r0.diagonal_form(&datum.group),
        diag_r0: datum.r0.clone(),
        degrees: datum.degrees.clone(),
        characters: datum.characters.clone(),
        r: alt,
        ctx_order: datum.ctx.order(),
    })
}

/// Reconstructs the quantum-linear-space datum of a quadruple (through its
/// recorded diagonalizing bicharacter).
pub fn quadruple_datum(
    quad: &MetricQuadruple,
    ctx: &Arc<CyclotomicContext>,
) -> Result<QlsDatum, crate::qls::DatumError> {
    QlsDatum::new(
        ctx.clone(),
        quad.group.clone(),
        quad.diag_r0.clone(),
        quad.degrees.clone(),
        quad.characters.clone(),
    )
}

/// A concrete equivalence between quadruples; `f` is stored with canonical
/// sign (the class is {(α, f), (α, -f)}).
#[derive(Debug, Clone)]
pub struct EquivalenceWitness {
    pub alpha: GroupIso,
    pub f: Matrix,
}

#[derive(Debug, Clone)]
pub enum Equivalence {
    Equivalent(Box<EquivalenceWitness>),
    Inequivalent { reason: String },
    Undecided { bound: u64 },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent(_))
    }
}

fn degree_classes(degrees: &[GroupElement]) -> BTreeMap<Vec<u64>, Vec<usize>> {
    let mut map: BTreeMap<Vec<u64>, Vec<usize>> = BTreeMap::new();
    for (i, g) in degrees.iter().enumerate() {
        map.entry(g.exps.clone()).or_default().push(i);
    }
    map
}

fn submatrix(m: &Matrix, rows: &[usize], cols: &[usize], ctx: &Arc<CyclotomicContext>) -> Matrix {
    rows.iter()
        .map(|&i| {
            cols.iter()
                .map(|&j| {
                    if m.is_empty() {
                        ctx.zero()
                    } else {
                        m[i][j].clone()
                    }
                })
                .collect()
        })
        .collect()
}

/// Canonical sign: flip f so that its first nonzero entry (row-major) has a
/// positive leading rational coordinate.
fn normalize_sign(ctx: &Arc<CyclotomicContext>, f: &Matrix) -> Matrix {
    use num::Signed;
    for row in f {
        for v in row {
            if !v.is_zero() {
                let leading = v.coeffs().iter().find(|c| !num::Zero::is_zero(*c)).unwrap();
                if leading.is_negative() {
                    return linalg::scale(f, &ctx.from_int(-1));
                }
                return f.clone();
            }
        }
    }
    f.clone()
}

/// Tries to build a graded f for a fixed α with r' ∘ (f ⊗ f) = ind_α(r);
/// returns `None` when the block invariants obstruct it.
fn solve_graded_congruence(
    ctx: &Arc<CyclotomicContext>,
    group_dst: &FinAbGroup,
    src_degrees_relabeled: &[GroupElement],
    dst_degrees: &[GroupElement],
    r_src: &Matrix,
    r_dst: &Matrix,
) -> Option<Matrix> {
    let n = src_degrees_relabeled.len();
    let src_classes = degree_classes(src_degrees_relabeled);
    let dst_classes = degree_classes(dst_degrees);
    if src_classes.len() != dst_classes.len() {
        return None;
    }
    for (deg, idxs) in &src_classes {
        if dst_classes.get(deg).map(|v| v.len()) != Some(idxs.len()) {
            return None;
        }
    }
    let mut f = linalg::zeros(ctx, n, n);
    let mut done: Vec<Vec<u64>> = Vec::new();
    for (deg, src_i) in &src_classes {
        if done.contains(deg) {
            continue;
        }
        let dst_j = &dst_classes[deg];
        let g = GroupElement { exps: deg.clone() };
        let g_inv = group_dst.inverse(&g);
        if g_inv.exps == *deg {
            // self-paired block: alternating congruence decided by rank
            let a_src = submatrix(r_src, src_i, src_i, ctx);
            let a_dst = submatrix(r_dst, dst_j, dst_j, ctx);
            let (t_src, rank_src) = linalg::alternating_normal_form(ctx, &a_src);
            let (t_dst, rank_dst) = linalg::alternating_normal_form(ctx, &a_dst);
            if rank_src != rank_dst {
                return None;
            }
            // f_block = t_dst * t_src^{-1} satisfies f^t A_dst f = A_src
            let t_src_inv = linalg::invert(ctx, &t_src).unwrap();
            let block = linalg::mat_mul(&t_dst, &t_src_inv);
            for (bi, &j) in dst_j.iter().enumerate() {
                for (bj, &i) in src_i.iter().enumerate() {
                    f[j][i] = block[bi][bj].clone();
                }
            }
            done.push(deg.clone());
        } else {
            // dual pair of blocks: rectangular rank normal form on each side
            let src_k = src_classes.get(&g_inv.exps).cloned().unwrap_or_default();
            let dst_l = dst_classes.get(&g_inv.exps).cloned().unwrap_or_default();
            if src_k.len() != dst_l.len() {
                return None;
            }
            let b_src = submatrix(r_src, src_i, &src_k, ctx);
            let b_dst = submatrix(r_dst, dst_j, &dst_l, ctx);
            if src_k.is_empty() {
                // unpaired component: r vanishes, any bijection works
                for (slot, &i) in src_i.iter().enumerate() {
                    f[dst_j[slot]][i] = ctx.one();
                }
                done.push(deg.clone());
                continue;
            }
            let (p_src, q_src, rank_src) = linalg::rank_normal_form(ctx, &b_src);
            let (p_dst, q_dst, rank_dst) = linalg::rank_normal_form(ctx, &b_dst);
            if rank_src != rank_dst {
                return None;
            }
            // F_g = p_dst p_src^{-1}, F_h = q_dst q_src^{-1}
            let fg = linalg::mat_mul(&p_dst, &linalg::invert(ctx, &p_src).unwrap());
            let fh = linalg::mat_mul(&q_dst, &linalg::invert(ctx, &q_src).unwrap());
            for (bi, &j) in dst_j.iter().enumerate() {
                for (bj, &i) in src_i.iter().enumerate() {
                    f[j][i] = fg[bi][bj].clone();
                }
            }
            for (bi, &j) in dst_l.iter().enumerate() {
                for (bj, &i) in src_k.iter().enumerate() {
                    f[j][i] = fh[bi][bj].clone();
                }
            }
            done.push(deg.clone());
            done.push(g_inv.exps.clone());
        }
    }
    // exact verification: f^t r_dst f = r_src
    let check = linalg::mat_mul(
        &linalg::mat_mul(&linalg::transpose(&f), r_dst),
        &f,
    );
    if &check != r_src {
        return None;
    }
    Some(f)
}

/// Decides equivalence of two metric quadruples.  The α-search is exhaustive
/// up to `group_bound`; within each α the block decision is complete, so the
/// only undecided outcome is a group order above the bound.
pub fn is_equivalent(
    ctx: &Arc<CyclotomicContext>,
    a: &MetricQuadruple,
    b: &MetricQuadruple,
    group_bound: u64,
) -> Equivalence {
    // scalars from both quadruples are compared inside one field
    assert_eq!(ctx.order(), a.ctx_order, "context mismatch with first quadruple");
    assert_eq!(ctx.order(), b.ctx_order, "context mismatch with second quadruple");
    if a.dim_v() != b.dim_v() {
        return Equivalence::Inequivalent {
            reason: format!("dim V differs: {} vs {}", a.dim_v(), b.dim_v()),
        };
    }
    if a.group.canonical_invariants() != b.group.canonical_invariants() {
        return Equivalence::Inequivalent {
            reason: "groups are not isomorphic".into(),
        };
    }
    // congruence preserves the rank of the alternating form; rank = dim V is
    // the zsym_semisimple predicate of the symmetric center
    let rank_a = a.r.rank();
    let rank_b = b.r.rank();
    if rank_a != rank_b {
        let name = |rk: usize, q: &MetricQuadruple| {
            if rk == q.dim_v() {
                "semisimple symmetric center (zsym_semisimple = true)".to_string()
            } else {
                format!("alternating rank {rk}")
            }
        };
        return Equivalence::Inequivalent {
            reason: format!(
                "invariant mismatch: {} vs {}",
                name(rank_a, a),
                name(rank_b, b)
            ),
        };
    }
    let isos = match orthogonal_isos((&a.group, &a.q), (&b.group, &b.q), group_bound) {
        Ok(isos) => isos,
        Err(crate::abgroup::GroupError::TooLarge { bound, .. }) => {
            return Equivalence::Undecided { bound }
        }
        Err(_) => {
            return Equivalence::Inequivalent {
                reason: "no orthogonal isomorphism".into(),
            }
        }
    };
    if isos.is_empty() {
        return Equivalence::Inequivalent {
            reason: "no orthogonal isomorphism matches the quadratic forms".into(),
        };
    }
    for alpha in isos {
        let relabeled: Vec<GroupElement> =
            a.degrees.iter().map(|g| alpha.apply(g)).collect();
        if let Some(f) = solve_graded_congruence(
            ctx,
            &b.group,
            &relabeled,
            &b.degrees,
            &a.r.matrix,
            &b.r.matrix,
        ) {
            return Equivalence::Equivalent(Box::new(EquivalenceWitness {
                alpha,
                f: normalize_sign(ctx, &f),
            }));
        }
    }
    Equivalence::Inequivalent {
        reason: "no orthogonal isomorphism admits a graded congruence".into(),
    }
}

// ---------------------------------------------------------------------------
// 2-cocycle space (gauge classes with trivial group restriction)
// ---------------------------------------------------------------------------

/// A basis of the bilinear forms classifying 2-cocycles on H with trivial
/// restriction to Γ: Γ-module maps b with b ∘ c_{V,V} = -b.
#[derive(Debug, Clone)]
pub struct CocycleSpace {
    pub basis: Vec<BilinearForm>,
    pub dimension: usize,
}

pub fn cocycle_space(datum: &QlsDatum) -> CocycleSpace {
    let ctx = &datum.ctx;
    let n = datum.dim_v();
    let mut basis = Vec::new();
    for i in 0..n {
        // diagonal entries are free iff chi_i^2 = ε
        let chi2 = datum.characters[i].mul(&datum.group, &datum.characters[i]);
        if chi2.is_trivial() {
            let mut m = linalg::zeros(ctx, n, n);
            m[i][i] = ctx.one();
            basis.push(BilinearForm { matrix: m });
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let prod = datum.characters[i].mul(&datum.group, &datum.characters[j]);
            if !prod.is_trivial() {
                continue;
            }
            // pair entry with its partner: b_ij = 1 forces
            // b_ji = -chi_j(g_i)^{-1}
            let mut m = linalg::zeros(ctx, n, n);
            m[i][j] = ctx.one();
            m[j][i] = -datum
                .braiding_scalar(i, j)
                .inverse()
                .unwrap();
            basis.push(BilinearForm { matrix: m });
        }
    }
    let dimension = basis.len();
    CocycleSpace { basis, dimension }
}

/// Checks b ∘ c_{V,V} = -b on all basis pairs.
pub fn anti_braiding_symmetric(datum: &QlsDatum, b: &BilinearForm) -> bool {
    let n = datum.dim_v();
    (0..n).all(|i| {
        (0..n).all(|j| {
            let lhs = datum.braiding_scalar(i, j) * b.value(j, i);
            lhs == b.value(i, j).neg_ref()
        })
    })
}

// ---------------------------------------------------------------------------
// Second invariant cohomology
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct InvariantCohomology {
    /// |H²(Γ/Γ₀, k^×)| with Γ₀ = ⟨g_1, ..., g_n⟩.
    pub multiplier_order: u64,
    /// Dimension of the alternating Yetter-Drinfeld forms on V.
    pub alt_dim: usize,
}

pub fn h2_inv(datum: &QlsDatum) -> Result<InvariantCohomology, QuadrupleError> {
    let gamma0 = Subgroup::generated_by(&datum.group, &datum.degrees);
    let (quot, _) = quotient(&datum.group, &gamma0)?;
    let multiplier_order = schur_multiplier_order(&quot);
    let n = datum.dim_v();
    let mut alt_dim = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            let chi = datum.characters[i].mul(&datum.group, &datum.characters[j]);
            let deg = datum.group.mul(&datum.degrees[i], &datum.degrees[j]);
            if chi.is_trivial() && datum.group.is_identity(&deg) {
                alt_dim += 1;
            }
        }
    }
    Ok(InvariantCohomology {
        multiplier_order,
        alt_dim,
    })
}

/// Independent recomputation of `alt_dim`: spans the Yetter-Drinfeld form
/// space by elementary matrices, imposes skew-symmetry as linear conditions,
/// and measures the kernel rank.
pub fn alt_yd_dim_by_filter(datum: &QlsDatum) -> usize {
    let ctx = &datum.ctx;
    let support = crate::qls::yd_support(datum);
    let k = support.len();
    if k == 0 {
        return 0;
    }
    let n = datum.dim_v();
    // linear map: coefficient vector c over the support ↦ entries of M + Mᵀ
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i..n {
            let mut row = vec![ctx.zero(); k];
            for (slot, &(a, b)) in support.iter().enumerate() {
                if (a, b) == (i, j) {
                    row[slot] = &row[slot] + &ctx.one();
                }
                if (b, a) == (i, j) {
                    row[slot] = &row[slot] + &ctx.one();
                }
            }
            rows.push(row);
        }
    }
    linalg::right_kernel(ctx, &rows).len()
}

// ---------------------------------------------------------------------------
// Braided autoequivalences
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct AutBr {
    /// Orthogonal automorphisms α with ind_α(r) congruent to r.
    pub orthogonal_part: Vec<GroupIso>,
    quadruple: MetricQuadruple,
    ctx: Arc<CyclotomicContext>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerVerdict {
    pub graded: bool,
    pub invertible: bool,
    pub preserves_form: bool,
    /// Canonical representative of the sign class {f, -f} when accepted.
    pub representative: Option<Matrix>,
}

impl StabilizerVerdict {
    pub fn accepted(&self) -> bool {
        self.graded && self.invertible && self.preserves_form
    }
}

/// The short-exact-sequence data for Aut^br: the orthogonal quotient is
/// enumerated, membership in the stabilizer Aut(V, r)/{±id} is a test.
pub fn aut_br(
    ctx: &Arc<CyclotomicContext>,
    quad: &MetricQuadruple,
    group_bound: u64,
) -> Result<AutBr, QuadrupleError> {
    let isos = orthogonal_isos((&quad.group, &quad.q), (&quad.group, &quad.q), group_bound)?;
    let mut orthogonal_part = Vec::new();
    for alpha in isos {
        let relabeled: Vec<GroupElement> = quad.degrees.iter().map(|g| alpha.apply(g)).collect();
        if solve_graded_congruence(
            ctx,
            &quad.group,
            &relabeled,
            &quad.degrees,
            &quad.r.matrix,
            &quad.r.matrix,
        )
        .is_some()
        {
            orthogonal_part.push(alpha);
        }
    }
    Ok(AutBr {
        orthogonal_part,
        quadruple: quad.clone(),
        ctx: ctx.clone(),
    })
}

impl AutBr {
    /// Decides membership of a linear map f (n×n matrix, f(x_i) = Σ_j
    /// `f[j][i]` x_j) in Aut(V, r) = {f graded invertible : r∘(f⊗f) = r}/{±1}.
    pub fn stabilizer_test(&self, f: &Matrix) -> Result<StabilizerVerdict, QuadrupleError> {
        let n = self.quadruple.dim_v();
        if f.len() != n || f.iter().any(|row| row.len() != n) {
            return Err(QuadrupleError::BadShape);
        }
        let graded = (0..n).all(|j| {
            (0..n).all(|i| {
                f[j][i].is_zero() || self.quadruple.degrees[j] == self.quadruple.degrees[i]
            })
        });
        let invertible = linalg::invert(&self.ctx, f).is_some();
        let check = linalg::mat_mul(
            &linalg::mat_mul(&linalg::transpose(f), &self.quadruple.r.matrix),
            f,
        );
        let preserves_form = check == self.quadruple.r.matrix;
        let representative = (graded && invertible && preserves_form)
            .then(|| normalize_sign(&self.ctx, f));
        Ok(StabilizerVerdict {
            graded,
            invertible,
            preserves_form,
            representative,
        })
    }
}

/// Existence check for the invariant correction cocycle between two
/// diagonalizations of the same quadratic form along α: the alternating
/// bicharacter δ = r_0' ∘ (α × α) / r_0 must vanish on Γ × Γ₀.
pub fn invariant_correction_exists(
    datum: &QlsDatum,
    alpha: &GroupIso,
    r0_dst: &Bicharacter,
) -> bool {
    let n_root = datum.ctx.order();
    let gamma0 = Subgroup::generated_by(&datum.group, &datum.degrees);
    datum.group.elements().iter().all(|g| {
        gamma0.elements.iter().all(|h| {
            let lhs = r0_dst.eval_exponent(&alpha.apply(g), &alpha.apply(h));
            let rhs = datum.r0.eval_exponent(g, h);
            (lhs + n_root - rhs) % n_root == 0
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abgroup::FinAbGroup;
    use crate::hopf::{basis_elements, comultiply, multiply, HopfElement};
    use crate::rform::RForm;

    fn e_n(n: usize) -> QlsDatum {
        let ctx = CyclotomicContext::new(2);
        let group = FinAbGroup::new(vec![2]);
        let r0 = Bicharacter::new(&group, 2, vec![vec![1]]).unwrap();
        let g = group.generator(0);
        let chi = Character::new(&group, &[1]).unwrap();
        QlsDatum::new(ctx, group, r0, vec![g; n], vec![chi; n]).unwrap()
    }

    fn form(datum: &QlsDatum, entries: &[&[i64]]) -> BilinearForm {
        let ctx = &datum.ctx;
        BilinearForm::new(
            datum,
            entries
                .iter()
                .map(|row| row.iter().map(|&v| ctx.from_int(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn normalize_examples() {
        let d = e_n(2);
        // symmetric r1 → r = 0
        let quad = normalize(&d, &form(&d, &[&[1, 2], &[2, 3]])).unwrap();
        assert!(quad.r.matrix.iter().flatten().all(|x| x.is_zero()));

        // already alternating → unchanged
        let alt = form(&d, &[&[0, 5], &[-5, 0]]);
        let quad = normalize(&d, &alt).unwrap();
        assert_eq!(quad.r, alt);

        // [[0,1],[0,0]] → [[0,1/2],[-1/2,0]]
        let quad = normalize(&d, &form(&d, &[&[0, 1], &[0, 0]])).unwrap();
        let half = d
            .ctx
            .one()
            .arith(&d.ctx.from_int(2), crate::scalar::ArithOp::Div)
            .unwrap();
        assert_eq!(quad.r.matrix[0][1], half);
        assert_eq!(quad.r.matrix[1][0], -&half);
    }

    #[test]
    fn normalize_is_idempotent() {
        let d = e_n(2);
        let quad = normalize(&d, &form(&d, &[&[3, 1], &[0, 2]])).unwrap();
        let again = normalize(&quadruple_datum(&quad, &d.ctx).unwrap(), &quad.r).unwrap();
        assert_eq!(quad, again);
    }

    #[test]
    fn invariant_cocycle_perturbation_fixes_quadruple() {
        let d = e_n(2);
        let r1 = form(&d, &[&[0, 3], &[1, 4]]);
        let quad = normalize(&d, &r1).unwrap();
        // any symmetric YD form s: r1 + 2s normalizes identically
        for s in [form(&d, &[&[1, 0], &[0, -2]]), form(&d, &[&[0, 5], &[5, 3]])] {
            assert!(s.is_symmetric() && s.is_yd_morphism(&d));
            let perturbed = r1.add(&s.scale(&d.ctx.from_int(2)));
            let quad2 = normalize(&d, &perturbed).unwrap();
            assert_eq!(quad, quad2);
        }
    }

    #[test]
    fn self_equivalence_and_sign_class() {
        let d = e_n(2);
        let ctx = &d.ctx;
        let quad = normalize(&d, &form(&d, &[&[0, 1], &[-1, 0]])).unwrap();
        match is_equivalent(ctx, &quad, &quad, 64) {
            Equivalence::Equivalent(w) => {
                assert!(w.alpha.is_identity());
                // the witness matrix has canonical sign: -f maps to the same
                // stored representative
                let neg = linalg::scale(&w.f, &ctx.from_int(-1));
                assert_eq!(normalize_sign(ctx, &neg), w.f);
            }
            other => panic!("expected equivalence, got {other:?}"),
        }
    }

    #[test]
    fn zero_vs_symplectic_inequivalent() {
        let d = e_n(2);
        let ctx = &d.ctx;
        let zero = normalize(&d, &form(&d, &[&[0, 0], &[0, 0]])).unwrap();
        let symp = normalize(&d, &form(&d, &[&[0, 1], &[-1, 0]])).unwrap();
        match is_equivalent(ctx, &zero, &symp, 64) {
            Equivalence::Inequivalent { reason } => {
                assert!(
                    reason.contains("zsym_semisimple") || reason.contains("alternating rank"),
                    "distinguishing invariant not named: {reason}"
                );
            }
            other => panic!("expected inequivalence, got {other:?}"),
        }
    }

    #[test]
    fn equivalence_symmetric_and_transitive_sampled() {
        let d = e_n(3);
        let ctx = &d.ctx;
        let quads: Vec<MetricQuadruple> = [
            form(&d, &[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]),
            form(&d, &[&[0, 0, 2], &[0, 0, 0], &[-2, 0, 0]]),
            form(&d, &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]]),
        ]
        .iter()
        .map(|r| normalize(&d, r).unwrap())
        .collect();
        for a in &quads {
            for b in &quads {
                let ab = is_equivalent(ctx, a, b, 64).is_equivalent();
                let ba = is_equivalent(ctx, b, a, 64).is_equivalent();
                assert_eq!(ab, ba, "symmetry");
                for c in &quads {
                    let bc = is_equivalent(ctx, b, c, 64).is_equivalent();
                    let ac = is_equivalent(ctx, a, c, 64).is_equivalent();
                    if ab && bc {
                        assert!(ac, "transitivity");
                    }
                }
            }
        }
        // the two rank-2 forms are congruent, the zero form is not
        assert!(is_equivalent(ctx, &quads[0], &quads[1], 64).is_equivalent());
        assert!(!is_equivalent(ctx, &quads[0], &quads[2], 64).is_equivalent());
    }

    #[test]
    fn witness_satisfies_congruence_exactly() {
        let d = e_n(3);
        let ctx = &d.ctx;
        let a = normalize(&d, &form(&d, &[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]])).unwrap();
        let b = normalize(&d, &form(&d, &[&[0, 0, 3], &[0, 0, 0], &[-3, 0, 0]])).unwrap();
        match is_equivalent(ctx, &a, &b, 64) {
            Equivalence::Equivalent(w) => {
                let check = linalg::mat_mul(
                    &linalg::mat_mul(&linalg::transpose(&w.f), &b.r.matrix),
                    &w.f,
                );
                assert_eq!(check, a.r.matrix);
            }
            other => panic!("expected equivalence, got {other:?}"),
        }
    }

    #[test]
    fn witness_induces_hopf_and_rform_map() {
        // Functoriality at the Hopf algebra level: the map
        // φ(g x_P) = α(g) f(x_{i_1})···f(x_{i_s}) is a bialgebra map
        // preserving the r-forms when the diagonalizers are aligned
        let d = e_n(2);
        let ctx = &d.ctx;
        let r1a = form(&d, &[&[0, 1], &[-1, 0]]);
        let r1b = form(&d, &[&[0, 4], &[-4, 0]]);
        let qa = normalize(&d, &r1a).unwrap();
        let qb = normalize(&d, &r1b).unwrap();
        let w = match is_equivalent(ctx, &qa, &qb, 64) {
            Equivalence::Equivalent(w) => w,
            other => panic!("expected equivalence, got {other:?}"),
        };
        let rf_a = RForm::build(&d, &r1a).unwrap();
        let rf_b = RForm::build(&d, &r1b).unwrap();
        // φ on the Hopf basis
        let phi = |b: &crate::hopf::BasisElement| -> HopfElement {
            let mut acc = crate::hopf::group_like(&d, &w.alpha.apply(&b.group_part));
            for i in 0..d.dim_v() {
                if b.subset & (1 << i) != 0 {
                    let mut fx = HopfElement::zero();
                    for j in 0..d.dim_v() {
                        fx.insert(
                            crate::hopf::BasisElement {
                                group_part: d.group.identity(),
                                subset: 1 << j,
                            },
                            w.f[j][i].clone(),
                        );
                    }
                    acc = multiply(&d, &acc, &fx);
                }
            }
            acc
        };
        let basis = basis_elements(&d);
        for x in &basis {
            for y in &basis {
                // algebra map
                let lhs = match crate::hopf::multiply_basis(&d, x, y) {
                    Some((b, s)) => phi(&b).scale(&s),
                    None => HopfElement::zero(),
                };
                let rhs = multiply(&d, &phi(x), &phi(y));
                assert_eq!(lhs, rhs, "multiplicativity at ({x:?}, {y:?})");
                // r-form preservation (source value = target value on images)
                let src = rf_a.eval_basis(x, y);
                let dst = rf_b.eval(&phi(x), &phi(y));
                assert_eq!(src, dst, "r-form at ({x:?}, {y:?})");
            }
        }
        // coalgebra map on the basis
        for x in &basis {
            let lhs = comultiply(&d, &phi(x));
            let mut rhs = crate::hopf::TensorElement::zero();
            for ((l, r), c) in crate::hopf::comultiply_basis(&d, x).terms {
                for (bl, cl) in phi(&l).terms {
                    for (br, cr) in phi(&r).terms {
                        rhs.insert((bl.clone(), br), &c * &cl * cr);
                    }
                }
            }
            assert_eq!(lhs, rhs, "comultiplicativity at {x:?}");
        }
        // diagonalizers are literally equal here, so the invariant
        // correction exists trivially
        assert!(invariant_correction_exists(&d, &w.alpha, &d.r0));
    }

    #[test]
    fn witness_with_nontrivial_alpha_and_permuted_f() {
        // Klein-group datum and its relabeled copy (generators listed in the
        // opposite order): the equivalence needs a permutation-structured f,
        // and the induced basis map must still be a Hopf algebra map
        let ctx = CyclotomicContext::new(2);
        let group = FinAbGroup::new(vec![2, 2]);
        let r0 = Bicharacter::new(&group, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let chi1 = Character::new(&group, &[1, 0]).unwrap();
        let chi2 = Character::new(&group, &[0, 1]).unwrap();
        let d1 = QlsDatum::new(
            ctx.clone(),
            group.clone(),
            r0.clone(),
            vec![group.generator(0), group.generator(1)],
            vec![chi1.clone(), chi2.clone()],
        )
        .unwrap();
        let d2 = QlsDatum::new(
            ctx.clone(),
            group.clone(),
            r0,
            vec![group.generator(1), group.generator(0)],
            vec![chi2, chi1],
        )
        .unwrap();
        let q1 = normalize(&d1, &BilinearForm::zero(&ctx, 2)).unwrap();
        let q2 = normalize(&d2, &BilinearForm::zero(&ctx, 2)).unwrap();
        let w = match is_equivalent(&ctx, &q1, &q2, 64) {
            Equivalence::Equivalent(w) => w,
            other => panic!("expected equivalence, got {other:?}"),
        };
        // the witness must be graded: f[j][i] ≠ 0 only when the relabeled
        // source degree matches the target degree
        for i in 0..2 {
            for j in 0..2 {
                if !w.f[j][i].is_zero() {
                    assert_eq!(w.alpha.apply(&d1.degrees[i]), d2.degrees[j]);
                }
            }
        }
        // Hopf-level functoriality: φ(g x_P) = α(g) f(x_..) multiplicative
        let phi = |b: &crate::hopf::BasisElement| -> HopfElement {
            let mut acc = crate::hopf::group_like(&d2, &w.alpha.apply(&b.group_part));
            for i in 0..2 {
                if b.subset & (1 << i) != 0 {
                    let mut fx = HopfElement::zero();
                    for j in 0..2 {
                        fx.insert(
                            crate::hopf::BasisElement {
                                group_part: d2.group.identity(),
                                subset: 1 << j,
                            },
                            w.f[j][i].clone(),
                        );
                    }
                    acc = multiply(&d2, &acc, &fx);
                }
            }
            acc
        };
        let basis = basis_elements(&d1);
        for x in &basis {
            for y in &basis {
                let lhs = match crate::hopf::multiply_basis(&d1, x, y) {
                    Some((b, s)) => phi(&b).scale(&s),
                    None => HopfElement::zero(),
                };
                let rhs = multiply(&d2, &phi(x), &phi(y));
                assert_eq!(lhs, rhs, "φ not multiplicative at ({x:?}, {y:?})");
            }
        }
        for x in &basis {
            let lhs = comultiply(&d2, &phi(x));
            let mut rhs = crate::hopf::TensorElement::zero();
            for ((l, r), c) in crate::hopf::comultiply_basis(&d1, x).terms {
                for (bl, cl) in phi(&l).terms {
                    for (br, cr) in phi(&r).terms {
                        rhs.insert((bl.clone(), br), &c * &cl * cr);
                    }
                }
            }
            assert_eq!(lhs, rhs, "φ not comultiplicative at {x:?}");
        }
        // r-forms are preserved exactly (both restrictions are zero and the
        // diagonalizers correspond under α)
        let rf1 = RForm::build(&d1, &BilinearForm::zero(&ctx, 2)).unwrap();
        let rf2 = RForm::build(&d2, &BilinearForm::zero(&ctx, 2)).unwrap();
        for x in &basis {
            for y in &basis {
                assert_eq!(
                    rf1.eval_basis(x, y),
                    rf2.eval(&phi(x), &phi(y)),
                    "r-form not preserved at ({x:?}, {y:?})"
                );
            }
        }
        assert!(invariant_correction_exists(&d1, &w.alpha, &d2.r0));
    }

    #[test]
    fn aut_br_orthogonal_part_of_klein_datum() {
        // q(e1) = q(e2) = -1, b = 1: the orthogonal automorphisms are the
        // identity and the swap, and with r = 0 both lift to braided
        // autoequivalences
        let ctx = CyclotomicContext::new(2);
        let group = FinAbGroup::new(vec![2, 2]);
        let r0 = Bicharacter::new(&group, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let d = QlsDatum::new(
            ctx.clone(),
            group.clone(),
            r0,
            vec![group.generator(0), group.generator(1)],
            vec![
                Character::new(&group, &[1, 0]).unwrap(),
                Character::new(&group, &[0, 1]).unwrap(),
            ],
        )
        .unwrap();
        let quad = normalize(&d, &BilinearForm::zero(&ctx, 2)).unwrap();
        let aut = aut_br(&ctx, &quad, 64).unwrap();
        assert_eq!(aut.orthogonal_part.len(), 2);
        assert!(aut.orthogonal_part.iter().any(|a| a.is_identity()));
        assert!(aut
            .orthogonal_part
            .iter()
            .any(|a| a.gen_images == vec![group.generator(1), group.generator(0)]));
    }

    #[test]
    fn cocycle_space_dimensions() {
        // E(n): all characters equal, squares trivial → n(n+1)/2
        for n in 1..=3 {
            let d = e_n(n);
            let space = cocycle_space(&d);
            assert_eq!(space.dimension, n * (n + 1) / 2);
            for b in &space.basis {
                assert!(anti_braiding_symmetric(&d, b));
            }
        }
        // V = 0 → 0
        let ctx = CyclotomicContext::new(2);
        let group = FinAbGroup::new(vec![2]);
        let r0 = Bicharacter::new(&group, 2, vec![vec![1]]).unwrap();
        let d0 = QlsDatum::new(ctx, group, r0, vec![], vec![]).unwrap();
        assert_eq!(cocycle_space(&d0).dimension, 0);
    }

    #[test]
    fn cocycle_space_vanishes_for_high_order_character() {
        // Γ = Z/4 x Z/4 with a single generator whose character has order 4:
        // chi² ≠ ε kills every entry
        let ctx = CyclotomicContext::new(4);
        let group = FinAbGroup::new(vec![4, 4]);
        let r0 = Bicharacter::new(
            &group,
            4,
            vec![vec![2, 1], vec![3, 0]],
        )
        .unwrap();
        let g1 = group.generator(0);
        let chi1 = r0.left_character(&group, &g1).unwrap();
        let d = QlsDatum::new(ctx, group, r0, vec![g1], vec![chi1]).unwrap();
        assert_eq!(cocycle_space(&d).dimension, 0);
    }

    #[test]
    fn h2_inv_examples() {
        // E(n): Γ₀ = Γ, multiplier 1, alt_dim = n(n-1)/2
        for n in 1..=3 {
            let d = e_n(n);
            let h = h2_inv(&d).unwrap();
            assert_eq!(h.multiplier_order, 1);
            assert_eq!(h.alt_dim, n * (n - 1) / 2);
            assert_eq!(alt_yd_dim_by_filter(&d), h.alt_dim);
        }
        // (Z/2)³ with Γ₀ the first factor: quotient (Z/2)², multiplier 2
        let ctx = CyclotomicContext::new(2);
        let group = FinAbGroup::new(vec![2, 2, 2]);
        let mut exps = vec![vec![0; 3]; 3];
        exps[0][0] = 1;
        let r0 = Bicharacter::new(&group, 2, exps).unwrap();
        let d = QlsDatum::new(
            ctx,
            group.clone(),
            r0,
            vec![group.generator(0)],
            vec![Character::new(&group, &[1, 0, 0]).unwrap()],
        )
        .unwrap();
        let h = h2_inv(&d).unwrap();
        assert_eq!(h.multiplier_order, 2);
        assert_eq!(h.alt_dim, 0);
        assert_eq!(alt_yd_dim_by_filter(&d), 0);

        // Z/2 x Z/2 with Γ₀ the first factor: cyclic quotient, multiplier 1
        let ctx = CyclotomicContext::new(2);
        let group = FinAbGroup::new(vec![2, 2]);
        let mut exps = vec![vec![0; 2]; 2];
        exps[0][0] = 1;
        let r0 = Bicharacter::new(&group, 2, exps).unwrap();
        let d = QlsDatum::new(
            ctx,
            group.clone(),
            r0,
            vec![group.generator(0)],
            vec![Character::new(&group, &[1, 0]).unwrap()],
        )
        .unwrap();
        assert_eq!(h2_inv(&d).unwrap().multiplier_order, 1);
    }

    #[test]
    fn aut_br_examples() {
        let ctx2 = CyclotomicContext::new(2);
        // E(n) with r = 0: orthogonal part is the identity, every invertible
        // f is accepted
        let d = e_n(2);
        let quad = normalize(&d, &form(&d, &[&[0, 0], &[0, 0]])).unwrap();
        let aut = aut_br(&ctx2, &quad, 64).unwrap();
        assert_eq!(aut.orthogonal_part.len(), 1);
        assert!(aut.orthogonal_part[0].is_identity());
        let any = vec![
            vec![ctx2.from_int(2), ctx2.from_int(1)],
            vec![ctx2.from_int(1), ctx2.from_int(1)],
        ];
        assert!(aut.stabilizer_test(&any).unwrap().accepted());
        let singular = vec![
            vec![ctx2.one(), ctx2.one()],
            vec![ctx2.one(), ctx2.one()],
        ];
        assert!(!aut.stabilizer_test(&singular).unwrap().accepted());

        // E(2) symplectic: accepted maps are exactly the symplectic ones
        let quad = normalize(&d, &form(&d, &[&[0, 1], &[-1, 0]])).unwrap();
        let aut = aut_br(&ctx2, &quad, 64).unwrap();
        let sympl = vec![
            vec![ctx2.from_int(2), ctx2.zero()],
            vec![ctx2.zero(), ctx2.one().arith(&ctx2.from_int(2), crate::scalar::ArithOp::Div).unwrap()],
        ];
        assert!(aut.stabilizer_test(&sympl).unwrap().accepted());
        let not_sympl = vec![
            vec![ctx2.from_int(2), ctx2.zero()],
            vec![ctx2.zero(), ctx2.one()],
        ];
        let verdict = aut.stabilizer_test(&not_sympl).unwrap();
        assert!(verdict.graded && verdict.invertible && !verdict.preserves_form);

        // sign class: f and -f give the same representative
        let f = vec![
            vec![ctx2.from_int(3), ctx2.zero()],
            vec![
                ctx2.zero(),
                ctx2.one().arith(&ctx2.from_int(3), crate::scalar::ArithOp::Div).unwrap(),
            ],
        ];
        let neg = linalg::scale(&f, &ctx2.from_int(-1));
        let v1 = aut.stabilizer_test(&f).unwrap();
        let v2 = aut.stabilizer_test(&neg).unwrap();
        assert_eq!(v1.representative, v2.representative);

        // trivial quadruple
        let ctx = CyclotomicContext::new(2);
        let group = FinAbGroup::trivial();
        let r0 = Bicharacter::trivial(&group, 2);
        let d0 = QlsDatum::new(ctx.clone(), group, r0, vec![], vec![]).unwrap();
        let quad = normalize(&d0, &BilinearForm::zero(&ctx, 0)).unwrap();
        let aut = aut_br(&ctx, &quad, 64).unwrap();
        assert_eq!(aut.orthogonal_part.len(), 1);
    }

    #[test]
    fn graded_condition_enforced_in_stabilizer() {
        // two generators with different degrees: off-diagonal f entries are
        // not graded
        let ctx = CyclotomicContext::new(2);
        let group = FinAbGroup::new(vec![2, 2]);
        let r0 = Bicharacter::new(&group, 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        let d = QlsDatum::new(
            ctx.clone(),
            group.clone(),
            r0,
            vec![group.generator(0), group.generator(1)],
            vec![
                Character::new(&group, &[1, 0]).unwrap(),
                Character::new(&group, &[0, 1]).unwrap(),
            ],
        )
        .unwrap();
        let quad = normalize(&d, &BilinearForm::zero(&ctx, 2)).unwrap();
        let aut = aut_br(&ctx, &quad, 64).unwrap();
        let swap = vec![
            vec![ctx.zero(), ctx.one()],
            vec![ctx.one(), ctx.zero()],
        ];
        let verdict = aut.stabilizer_test(&swap).unwrap();
        assert!(!verdict.graded);
        assert!(!verdict.accepted());
    }
}
