//! The bosonization H = 𝔅(V)#k\[Γ\] of a symmetric-type quantum linear space:
//! a concrete Hopf algebra on the basis {g·x_P}, P a subset bitmask, with
//! multiplication, comultiplication, antipode, counit and an exhaustive
//! axiom verifier.
//!
//! Defining relations: h x_i = χ_i(h) x_i h,  x_i² = 0,  and
//! x_i x_j = χ_j(g_i) x_j x_i.  The normal form keeps the group part on the
//! left and the x-part ordered increasingly; all rewriting scalars are roots
//! of unity handled by exponent arithmetic.

use crate::abgroup::GroupElement;
use crate::qls::QlsDatum;
use crate::scalar::Scalar;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HopfError {
    #[error("subset {0:#b} is not contained in {1:#b}")]
    NotSubset(u32, u32),
    #[error("dim H = {dim} exceeds the verification bound {bound}")]
    DimBound { dim: u64, bound: u64 },
}

/// Basis element g·x_P of the bosonization.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisElement {
    pub group_part: GroupElement,
    pub subset: u32,
}

impl fmt::Debug for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}x[{:b}]", self.group_part, self.subset)
    }
}

/// A sparse linear combination of basis elements; zero coefficients are never
/// stored and keys are canonically ordered.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct HopfElement {
    pub terms: BTreeMap<BasisElement, Scalar>,
}

impl fmt::Debug for HopfElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(b, s)| format!("({s})·{b:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A sparse element of H ⊗ H.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TensorElement {
    pub terms: BTreeMap<(BasisElement, BasisElement), Scalar>,
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), s)| format!("({s})·{a:?}⊗{b:?}"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl HopfElement {
    pub fn zero() -> Self {
        HopfElement::default()
    }

    pub fn basis(b: BasisElement, coeff: Scalar) -> Self {
        let mut e = HopfElement::zero();
        e.insert(b, coeff);
        e
    }

    pub fn insert(&mut self, b: BasisElement, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(b) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &HopfElement) -> HopfElement {
        let mut out = self.clone();
        for (b, s) in &other.terms {
            out.insert(b.clone(), s.clone());
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> HopfElement {
        let mut out = HopfElement::zero();
        for (b, c) in &self.terms {
            out.insert(b.clone(), c * s);
        }
        out
    }

    pub fn sub(&self, other: &HopfElement) -> HopfElement {
        let mut out = self.clone();
        for (b, s) in &other.terms {
            out.insert(b.clone(), s.neg_ref());
        }
        out
    }
}

impl TensorElement {
    pub fn zero() -> Self {
        TensorElement::default()
    }

    pub fn insert(&mut self, key: (BasisElement, BasisElement), coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &coeff;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
}

/// Unit element 1·x_∅.
pub fn unit(datum: &QlsDatum) -> HopfElement {
    HopfElement::basis(
        BasisElement {
            group_part: datum.group.identity(),
            subset: 0,
        },
        datum.ctx.one(),
    )
}

pub fn group_like(datum: &QlsDatum, g: &GroupElement) -> HopfElement {
    HopfElement::basis(
        BasisElement {
            group_part: g.clone(),
            subset: 0,
        },
        datum.ctx.one(),
    )
}

pub fn generator(datum: &QlsDatum, i: usize) -> HopfElement {
    HopfElement::basis(
        BasisElement {
            group_part: datum.group.identity(),
            subset: 1 << i,
        },
        datum.ctx.one(),
    )
}

/// All basis elements in deterministic order (group part outer, subset inner).
pub fn basis_elements(datum: &QlsDatum) -> Vec<BasisElement> {
    let n = datum.dim_v();
    let mut out = Vec::with_capacity(datum.dim_hopf() as usize);
    for g in datum.group.elements() {
        for mask in 0u32..(1 << n) {
            out.push(BasisElement {
                group_part: g.clone(),
                subset: mask,
            });
        }
    }
    out
}

pub fn basis_index(datum: &QlsDatum, b: &BasisElement) -> usize {
    let n = datum.dim_v();
    datum.group.index_of(&b.group_part) * (1 << n) + b.subset as usize
}

/// ζ-exponent of the scalar produced by rewriting x_P · x_Q into x_{P∪Q}
/// (disjoint masks): ∏_{i∈P, j∈Q, j<i} χ_j(g_i).
fn reorder_exponent(datum: &QlsDatum, p: u32, q: u32) -> u64 {
    let n_root = datum.ctx.order();
    let mut acc = 0u64;
    for i in 0..datum.dim_v() {
        if p & (1 << i) == 0 {
            continue;
        }
        for j in 0..i {
            if q & (1 << j) != 0 {
                acc = (acc + datum.braiding_exponent(i, j)) % n_root;
            }
        }
    }
    acc
}

/// ζ-exponent of the scalar produced by moving a group element h leftwards
/// through x_P: ∏_{i∈P} χ_i(h)^{-1}.
fn commute_exponent(datum: &QlsDatum, p: u32, h: &GroupElement) -> u64 {
    let n_root = datum.ctx.order();
    let mut acc = 0u64;
    for i in 0..datum.dim_v() {
        if p & (1 << i) != 0 {
            acc = (acc + n_root - datum.character_exponent(i, h)) % n_root;
        }
    }
    acc
}

/// Product of two basis elements in normal form; `None` when it vanishes.
pub fn multiply_basis(
    datum: &QlsDatum,
    a: &BasisElement,
    b: &BasisElement,
) -> Option<(BasisElement, Scalar)> {
    if a.subset & b.subset != 0 {
        return None;
    }
    let n_root = datum.ctx.order();
    let e = (commute_exponent(datum, a.subset, &b.group_part)
        + reorder_exponent(datum, a.subset, b.subset))
        % n_root;
    Some((
        BasisElement {
            group_part: datum.group.mul(&a.group_part, &b.group_part),
            subset: a.subset | b.subset,
        },
        datum.ctx.zeta(e as i64),
    ))
}

/// Bilinear extension of the basis product.
pub fn multiply(datum: &QlsDatum, a: &HopfElement, b: &HopfElement) -> HopfElement {
    let mut out = HopfElement::zero();
    for (ba, ca) in &a.terms {
        for (bb, cb) in &b.terms {
            if let Some((basis, s)) = multiply_basis(datum, ba, bb) {
                out.insert(basis, ca * cb * s);
            }
        }
    }
    out
}

/// ψ(P, F) = ∏_{j∈F, i∈P∖F, i<j} χ_j(g_i), the scalar with
/// x_P = ψ(P, F) x_F x_{P∖F}.
pub fn psi(datum: &QlsDatum, p: u32, f: u32) -> Result<Scalar, HopfError> {
    if f & !p != 0 {
        return Err(HopfError::NotSubset(f, p));
    }
    let rest = p & !f;
    let n_root = datum.ctx.order();
    let mut acc = 0u64;
    for j in 0..datum.dim_v() {
        if f & (1 << j) == 0 {
            continue;
        }
        for i in 0..j {
            if rest & (1 << i) != 0 {
                acc = (acc + datum.braiding_exponent(i, j)) % n_root;
            }
        }
    }
    Ok(datum.ctx.zeta(acc as i64))
}

/// Δ(g x_P) = Σ_{F ⊆ P} ψ(P, F) (g g_F x_{P∖F}) ⊗ (g x_F).
pub fn comultiply_basis(datum: &QlsDatum, b: &BasisElement) -> TensorElement {
    let mut out = TensorElement::zero();
    let p = b.subset;
    let g = &b.group_part;
    // enumerate all submasks of p, including 0 and p itself
    let mut f = p;
    loop {
        let coeff = psi(datum, p, f).unwrap();
        let left = BasisElement {
            group_part: datum.group.mul(g, &datum.degree_of_subset(f)),
            subset: p & !f,
        };
        let right = BasisElement {
            group_part: g.clone(),
            subset: f,
        };
        out.insert((left, right), coeff);
        if f == 0 {
            break;
        }
        f = (f - 1) & p;
    }
    out
}

pub fn comultiply(datum: &QlsDatum, a: &HopfElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for (b, c) in &a.terms {
        for (key, s) in comultiply_basis(datum, b).terms {
            out.insert(key, &s * c);
        }
    }
    out
}

/// ε(g x_P) = [P = ∅], extended linearly.
pub fn counit(datum: &QlsDatum, a: &HopfElement) -> Scalar {
    let mut acc = datum.ctx.zero();
    for (b, c) in &a.terms {
        if b.subset == 0 {
            acc = acc + c;
        }
    }
    acc
}

/// Antipode: S(g) = g^{-1}, S(x_i) = -g_i^{-1} x_i, extended
/// anti-multiplicatively through the shared rewriting routine.
pub fn antipode_basis(datum: &QlsDatum, b: &BasisElement) -> HopfElement {
    let mut acc = group_like(datum, &datum.group.inverse(&b.group_part));
    // S(g x_P) = S(x_{i_s}) ... S(x_{i_1}) S(g); build right-to-left
    for i in 0..datum.dim_v() {
        if b.subset & (1 << i) == 0 {
            continue;
        }
        let factor = HopfElement::basis(
            BasisElement {
                group_part: datum.group.inverse(&datum.degrees[i]),
                subset: 1 << i,
            },
            datum.ctx.from_int(-1),
        );
        acc = multiply(datum, &factor, &acc);
    }
    acc
}

pub fn antipode(datum: &QlsDatum, a: &HopfElement) -> HopfElement {
    let mut out = HopfElement::zero();
    for (b, c) in &a.terms {
        for (basis, s) in antipode_basis(datum, b).terms {
            out.insert(basis, &s * c);
        }
    }
    out
}

/// Componentwise product in H ⊗ H.
pub fn tensor_multiply(datum: &QlsDatum, a: &TensorElement, b: &TensorElement) -> TensorElement {
    let mut out = TensorElement::zero();
    for ((a1, a2), ca) in &a.terms {
        for ((b1, b2), cb) in &b.terms {
            let Some((left, s1)) = multiply_basis(datum, a1, b1) else {
                continue;
            };
            let Some((right, s2)) = multiply_basis(datum, a2, b2) else {
                continue;
            };
            out.insert((left, right), ca * cb * s1 * s2);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Exhaustive axiom verification
// ---------------------------------------------------------------------------

/// A failed axiom instance: which basis indices witnessed the failure.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Counterexample {
    pub indices: Vec<usize>,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct AxiomResult {
    pub axiom: String,
    pub pass: bool,
    pub checked: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct HopfReport {
    pub dim: u64,
    pub axioms: Vec<AxiomResult>,
}

impl HopfReport {
    pub fn all_pass(&self) -> bool {
        self.axioms.iter().all(|a| a.pass)
    }
}

fn first_failure<F>(total: usize, check: F) -> (u64, Option<Counterexample>)
where
    F: Fn(usize) -> Option<Counterexample> + Sync,
{
    let failure = (0..total)
        .into_par_iter()
        .filter_map(|i| check(i).map(|c| (i, c)))
        .min_by_key(|(i, _)| *i);
    (total as u64, failure.map(|(_, c)| c))
}

/// Checks associativity, coassociativity, counit, antipode, and Δ-multipli-
/// cativity exhaustively on basis elements, pairs and triples.  Reports the
/// lexicographically first counterexample per axiom.
pub fn verify_hopf_axioms(datum: &QlsDatum, bound: u64) -> Result<HopfReport, HopfError> {
    let dim = datum.dim_hopf();
    if dim > bound {
        return Err(HopfError::DimBound { dim, bound });
    }
    let basis = basis_elements(datum);
    let d = basis.len();
    let one = unit(datum);
    let mut axioms = Vec::new();

    // associativity on basis triples
    let (checked, cx) = first_failure(d * d * d, |idx| {
        let (i, rest) = (idx / (d * d), idx % (d * d));
        let (j, k) = (rest / d, rest % d);
        let a = HopfElement::basis(basis[i].clone(), datum.ctx.one());
        let b = HopfElement::basis(basis[j].clone(), datum.ctx.one());
        let c = HopfElement::basis(basis[k].clone(), datum.ctx.one());
        let lhs = multiply(datum, &multiply(datum, &a, &b), &c);
        let rhs = multiply(datum, &a, &multiply(datum, &b, &c));
        (lhs != rhs).then(|| Counterexample {
            indices: vec![i, j, k],
            detail: format!("(ab)c = {lhs:?} but a(bc) = {rhs:?}"),
        })
    });
    axioms.push(AxiomResult {
        axiom: "associativity".into(),
        pass: cx.is_none(),
        checked,
        counterexample: cx,
    });

    // coassociativity on basis elements
    let (checked, cx) = first_failure(d, |i| {
        let delta = comultiply_basis(datum, &basis[i]);
        // (Δ ⊗ id) Δ and (id ⊗ Δ) Δ as triple-keyed maps
        let mut lhs: BTreeMap<(BasisElement, BasisElement, BasisElement), Scalar> =
            BTreeMap::new();
        let mut rhs = lhs.clone();
        for ((l, r), c) in &delta.terms {
            for ((l1, l2), c2) in comultiply_basis(datum, l).terms {
                let key = (l1, l2, r.clone());
                let v = c * &c2;
                let entry = lhs.entry(key).or_insert_with(|| datum.ctx.zero());
                *entry = &*entry + &v;
            }
            for ((r1, r2), c2) in comultiply_basis(datum, r).terms {
                let key = (l.clone(), r1, r2);
                let v = c * &c2;
                let entry = rhs.entry(key).or_insert_with(|| datum.ctx.zero());
                *entry = &*entry + &v;
            }
        }
        lhs.retain(|_, v| !v.is_zero());
        rhs.retain(|_, v| !v.is_zero());
        (lhs != rhs).then(|| Counterexample {
            indices: vec![i],
            detail: "(Δ⊗id)Δ ≠ (id⊗Δ)Δ".into(),
        })
    });
    axioms.push(AxiomResult {
        axiom: "coassociativity".into(),
        pass: cx.is_none(),
        checked,
        counterexample: cx,
    });

    // counit axiom on basis elements
    let (checked, cx) = first_failure(d, |i| {
        let a = HopfElement::basis(basis[i].clone(), datum.ctx.one());
        let delta = comultiply(datum, &a);
        let mut left = HopfElement::zero();
        let mut right = HopfElement::zero();
        for ((l, r), c) in &delta.terms {
            if l.subset == 0 {
                // ε(l) = 1 for the group part only
                left.insert(r.clone(), c.clone());
            }
            if r.subset == 0 {
                right.insert(l.clone(), c.clone());
            }
        }
        (left != a || right != a).then(|| Counterexample {
            indices: vec![i],
            detail: "(ε⊗id)Δ or (id⊗ε)Δ is not the identity".into(),
        })
    });
    axioms.push(AxiomResult {
        axiom: "counit".into(),
        pass: cx.is_none(),
        checked,
        counterexample: cx,
    });

    // antipode axiom on basis elements
    let (checked, cx) = first_failure(d, |i| {
        let a = HopfElement::basis(basis[i].clone(), datum.ctx.one());
        let delta = comultiply(datum, &a);
        let mut lhs = HopfElement::zero();
        let mut rhs = HopfElement::zero();
        for ((l, r), c) in &delta.terms {
            let sl = antipode_basis(datum, l);
            let rr = HopfElement::basis(r.clone(), datum.ctx.one());
            for (b, s) in multiply(datum, &sl, &rr).terms {
                lhs.insert(b, &s * c);
            }
            let ll = HopfElement::basis(l.clone(), datum.ctx.one());
            let sr = antipode_basis(datum, r);
            for (b, s) in multiply(datum, &ll, &sr).terms {
                rhs.insert(b, &s * c);
            }
        }
        let target = one.scale(&counit(datum, &a));
        (lhs != target || rhs != target).then(|| Counterexample {
            indices: vec![i],
            detail: "m(S⊗id)Δ or m(id⊗S)Δ differs from uε".into(),
        })
    });
    axioms.push(AxiomResult {
        axiom: "antipode".into(),
        pass: cx.is_none(),
        checked,
        counterexample: cx,
    });

    // bialgebra compatibility Δ(ab) = Δ(a)Δ(b) on basis pairs
    let (checked, cx) = first_failure(d * d, |idx| {
        let (i, j) = (idx / d, idx % d);
        let a = HopfElement::basis(basis[i].clone(), datum.ctx.one());
        let b = HopfElement::basis(basis[j].clone(), datum.ctx.one());
        let lhs = comultiply(datum, &multiply(datum, &a, &b));
        let rhs = tensor_multiply(
            datum,
            &comultiply(datum, &a),
            &comultiply(datum, &b),
        );
        (lhs != rhs).then(|| Counterexample {
            indices: vec![i, j],
            detail: "Δ(ab) ≠ Δ(a)Δ(b)".into(),
        })
    });
    axioms.push(AxiomResult {
        axiom: "bialgebra".into(),
        pass: cx.is_none(),
        checked,
        counterexample: cx,
    });

    Ok(HopfReport { dim, axioms })
}
