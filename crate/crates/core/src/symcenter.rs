//! The symmetric center of a braided category presented by (Γ, r_0, V, r_1):
//! the subgroup Γ^⊥ (radical of the symmetrized bicharacter), the subspace
//! V^⊥ (radical of the alternating part of r_1), the induced sub-datum, and
//! the symmetry/factorizability predicates.
//!
//! The defining condition is that the squared braiding fixes x ⊗ y for every
//! y; a brute-force solver for that condition doubles as the module's oracle.

use crate::abgroup::{Bicharacter, Character, GroupElement, Subgroup};
use crate::hopf::{basis_elements, basis_index, comultiply_basis, BasisElement, HopfElement};
use crate::linalg::{self, Matrix};
use crate::qls::{BilinearForm, QlsDatum};
use crate::rform::RForm;
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymCenterError {
    #[error("r-form construction failed: {0}")]
    Rform(#[from] crate::rform::RformError),
    #[error("restricted datum failed validation: {0}")]
    Restriction(#[from] crate::qls::DatumError),
    #[error("graded kernel dimension {graded} differs from ungraded kernel {ungraded}")]
    KernelMismatch { graded: usize, ungraded: usize },
    #[error("internal consistency: {0}")]
    Consistency(String),
}

/// The symmetric center as a sub-quantum-linear-space: Γ^⊥, a basis of V^⊥
/// expressed in the x_i coordinates, and the restricted (datum, form).
#[derive(Debug, Clone)]
pub struct SymCenterResult {
    pub gamma_perp: Subgroup,
    /// Basis vectors of V^⊥ in x-coordinates, normalized to leading
    /// coefficient one, grouped by isotypic label.
    pub v_perp: Vec<Vec<Scalar>>,
    /// For each V^⊥ basis vector, an original index carrying its
    /// (degree, character) label.
    pub v_perp_labels: Vec<usize>,
    /// The sub-datum over the abstract form of Γ^⊥.
    pub restricted: QlsDatum,
    pub restricted_r1: BilinearForm,
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct Predicates {
    pub is_symmetric: bool,
    pub is_factorizable: bool,
    pub zsym_semisimple: bool,
}

impl SymCenterResult {
    pub fn is_whole_category(&self, datum: &QlsDatum) -> bool {
        self.gamma_perp.is_whole() && self.v_perp.len() == datum.dim_v()
    }
}

/// Basis of the radical of the alternating part of r_1, computed per
/// isotypic (degree, character) label so each kernel vector carries a label.
fn graded_alternating_kernel(
    datum: &QlsDatum,
    alt: &BilinearForm,
) -> Result<(Vec<Vec<Scalar>>, Vec<usize>), SymCenterError> {
    let ctx = &datum.ctx;
    let n = datum.dim_v();
    let mut vectors: Vec<Vec<Scalar>> = Vec::new();
    let mut labels: Vec<usize> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..n {
        if seen.contains(&i) {
            continue;
        }
        let block: Vec<usize> = (i..n)
            .filter(|&j| {
                datum.degrees[j] == datum.degrees[i] && datum.characters[j] == datum.characters[i]
            })
            .collect();
        seen.extend(&block);
        // kernel vectors supported on this label block: w with
        // Σ_{b} w_b · alt(x_b, x_j) = 0 for all j
        let m: Matrix = (0..n)
            .map(|j| block.iter().map(|&b| alt.value(b, j).clone()).collect())
            .collect();
        for w in linalg::right_kernel(ctx, &m) {
            let mut full = vec![ctx.zero(); n];
            for (slot, &b) in block.iter().enumerate() {
                full[b] = w[slot].clone();
            }
            // normalize to leading coefficient one
            if let Some(first) = full.iter().position(|c| !c.is_zero()) {
                let inv = full[first].inverse().unwrap();
                for c in full.iter_mut() {
                    *c = &*c * &inv;
                }
            }
            vectors.push(full);
            labels.push(i);
        }
    }
    // the alternating part of a YD form pairs label blocks in disjoint
    // pairs, so the graded kernel must exhaust the full kernel
    let full_kernel = linalg::right_kernel(
        ctx,
        &(0..n)
            .map(|j| (0..n).map(|b| alt.value(b, j).clone()).collect())
            .collect::<Matrix>(),
    );
    if full_kernel.len() != vectors.len() {
        return Err(SymCenterError::KernelMismatch {
            graded: vectors.len(),
            ungraded: full_kernel.len(),
        });
    }
    Ok((vectors, labels))
}

/// Restriction of a character to a subgroup, in the subgroup's abstract
/// coordinates.
fn restrict_character(
    datum: &QlsDatum,
    sub: &Subgroup,
    chi: &Character,
) -> Result<Character, SymCenterError> {
    let n_root = datum.ctx.order();
    let eval = chi.eval_exponent(&datum.group, n_root);
    let mut exps = Vec::with_capacity(sub.abstract_group.rank());
    for (t, img) in sub.embedding.iter().enumerate() {
        let e = eval(img);
        let m = sub.abstract_group.invariants()[t];
        let step = n_root / m;
        if e % step != 0 {
            return Err(SymCenterError::Consistency(format!(
                "character restriction has order not dividing {m}"
            )));
        }
        exps.push((e / step) % m);
    }
    Ok(Character { exps })
}

/// Computes (Γ^⊥, V^⊥) and the restricted sub-datum, and cross-checks
/// sampled members and non-members against the squared-braiding condition
/// when the Hopf dimension is small enough.
pub fn symmetric_center(
    datum: &QlsDatum,
    r1: &BilinearForm,
) -> Result<SymCenterResult, SymCenterError> {
    let b = datum.r0.symmetrization();
    let gamma_perp =
        crate::abgroup::radical(&datum.group, &b).expect("symmetrization is symmetric");
    let (_, alt) = r1.decompose(&datum.ctx);
    let (v_perp, v_perp_labels) = graded_alternating_kernel(datum, &alt)?;

    // restricted bicharacter on the abstract generators of Γ^⊥
    let sub = &gamma_perp;
    let k = sub.abstract_group.rank();
    let r0_exps: Vec<Vec<u64>> = (0..k)
        .map(|a| {
            (0..k)
                .map(|bb| datum.r0.eval_exponent(&sub.embedding[a], &sub.embedding[bb]))
                .collect()
        })
        .collect();
    let restricted_r0 = Bicharacter::new(&sub.abstract_group, datum.ctx.order(), r0_exps)
        .map_err(|e| SymCenterError::Consistency(format!("restricted bicharacter: {e}")))?;

    // degrees of the kernel vectors, in Γ^⊥ coordinates
    let mut degrees: Vec<GroupElement> = Vec::with_capacity(v_perp.len());
    let mut characters: Vec<Character> = Vec::with_capacity(v_perp.len());
    for &rep in &v_perp_labels {
        let g = &datum.degrees[rep];
        let coords = sub.coordinates(g).ok_or_else(|| {
            SymCenterError::Consistency("generator degree outside Γ^⊥".into())
        })?;
        degrees.push(coords);
        characters.push(restrict_character(datum, sub, &datum.characters[rep])?);
    }
    let restricted = QlsDatum::new(
        datum.ctx.clone(),
        sub.abstract_group.clone(),
        restricted_r0,
        degrees,
        characters,
    )?;

    // restricted form: r_1 on pairs of kernel vectors
    let m = v_perp.len();
    let mut rm = linalg::zeros(&datum.ctx, m, m);
    for a in 0..m {
        for bb in 0..m {
            let mut acc = datum.ctx.zero();
            for (i, ci) in v_perp[a].iter().enumerate() {
                if ci.is_zero() {
                    continue;
                }
                for (j, cj) in v_perp[bb].iter().enumerate() {
                    if cj.is_zero() {
                        continue;
                    }
                    acc = acc + ci * cj * r1.value(i, j);
                }
            }
            rm[a][bb] = acc;
        }
    }
    let restricted_r1 = BilinearForm::new(&restricted, rm)?;

    let result = SymCenterResult {
        gamma_perp,
        v_perp,
        v_perp_labels,
        restricted,
        restricted_r1,
    };

    if datum.dim_hopf() <= 128 {
        let rf = RForm::build(datum, r1)?;
        verify_sampled(&result, &rf)?;
    }
    Ok(result)
}

/// Squared-braiding image x_(1) r(x_(2), y_(1)) r(y_(2), x_(3)) of a basis
/// element against a basis element y.
fn centralizer_image(r: &RForm, a: &BasisElement, y: &BasisElement) -> HopfElement {
    let datum = &r.datum;
    let mut out = HopfElement::zero();
    for ((a1, rest), c) in &comultiply_basis(datum, a).terms {
        for ((a2, a3), c2) in comultiply_basis(datum, rest).terms {
            for ((y1, y2), cy) in &comultiply_basis(datum, y).terms {
                let f = r.eval_basis(&a2, y1);
                if f.is_zero() {
                    continue;
                }
                let g = r.eval_basis(y2, &a3);
                if g.is_zero() {
                    continue;
                }
                out.insert(a1.clone(), c * &c2 * cy * f * g);
            }
        }
    }
    out
}

fn centralizer_image_element(r: &RForm, x: &HopfElement, y: &BasisElement) -> HopfElement {
    let mut out = HopfElement::zero();
    for (b, c) in &x.terms {
        for (bb, s) in centralizer_image(r, b, y).terms {
            out.insert(bb, &s * c);
        }
    }
    out
}

/// Membership in H_sym by the defining condition, tested against every basis
/// element y.
pub fn satisfies_centralizer_condition(r: &RForm, x: &HopfElement) -> bool {
    let datum = &r.datum;
    basis_elements(datum).iter().all(|y| {
        let image = centralizer_image_element(r, x, y);
        let expected = if y.subset == 0 {
            x.clone()
        } else {
            HopfElement::zero()
        };
        image == expected
    })
}

fn verify_sampled(result: &SymCenterResult, r: &RForm) -> Result<(), SymCenterError> {
    let datum = &r.datum;
    // claimed generators must satisfy the condition
    for img in &result.gamma_perp.embedding {
        let x = crate::hopf::group_like(datum, img);
        if !satisfies_centralizer_condition(r, &x) {
            return Err(SymCenterError::Consistency(
                "claimed Γ^⊥ generator fails the squared-braiding condition".into(),
            ));
        }
    }
    for v in &result.v_perp {
        let mut x = HopfElement::zero();
        for (i, c) in v.iter().enumerate() {
            x.insert(
                BasisElement {
                    group_part: datum.group.identity(),
                    subset: 1 << i,
                },
                c.clone(),
            );
        }
        if !satisfies_centralizer_condition(r, &x) {
            return Err(SymCenterError::Consistency(
                "claimed V^⊥ vector fails the squared-braiding condition".into(),
            ));
        }
    }
    // non-members must fail: the first group element outside Γ^⊥, and the
    // first basis vector of V outside the span of V^⊥
    if let Some(g) = datum
        .group
        .elements()
        .into_iter()
        .find(|g| !result.gamma_perp.contains(g))
    {
        let x = crate::hopf::group_like(datum, &g);
        if satisfies_centralizer_condition(r, &x) {
            return Err(SymCenterError::Consistency(
                "element outside Γ^⊥ passes the squared-braiding condition".into(),
            ));
        }
    }
    let n = datum.dim_v();
    if result.v_perp.len() < n {
        let ctx = &datum.ctx;
        let outside = (0..n).find(|&i| {
            let mut unit_row = vec![ctx.zero(); n];
            unit_row[i] = ctx.one();
            let mut stacked = result.v_perp.clone();
            stacked.push(unit_row);
            crate::linalg::rank(&stacked) > result.v_perp.len()
        });
        if let Some(i) = outside {
            let x = HopfElement::basis(
                BasisElement {
                    group_part: datum.group.identity(),
                    subset: 1 << i,
                },
                datum.ctx.one(),
            );
            if satisfies_centralizer_condition(r, &x) {
                return Err(SymCenterError::Consistency(
                    "vector outside V^⊥ passes the squared-braiding condition".into(),
                ));
            }
        }
    }
    Ok(())
}

/// The three classification predicates.
pub fn predicates(datum: &QlsDatum, r1: &BilinearForm) -> Result<Predicates, SymCenterError> {
    let result = symmetric_center(datum, r1)?;
    let (_, alt) = r1.decompose(&datum.ctx);
    Ok(Predicates {
        is_symmetric: result.is_whole_category(datum),
        is_factorizable: result.gamma_perp.is_trivial() && datum.dim_v() == 0,
        zsym_semisimple: alt.rank() == datum.dim_v(),
    })
}

/// Brute-force basis of {x ∈ H : squared braiding fixes x ⊗ y for all y},
/// as coefficient vectors over the Hopf basis.  This is the module's oracle;
/// it solves the linear system directly and ignores the radical description.
pub fn hsym_brute_force(r: &RForm, bound: u64) -> Result<Vec<Vec<Scalar>>, SymCenterError> {
    let datum = &r.datum;
    let dim = datum.dim_hopf();
    if dim > bound {
        return Err(SymCenterError::Consistency(format!(
            "dim H = {dim} exceeds the brute-force bound {bound}"
        )));
    }
    let ctx = &datum.ctx;
    let basis = basis_elements(datum);
    let d = basis.len();
    use rayon::prelude::*;
    // stack (L_y - ε(y) id) over all y; kernel = H_sym
    let blocks: Vec<Matrix> = basis
        .par_iter()
        .map(|y| {
            let mut block = linalg::zeros(ctx, d, d);
            for (col, a) in basis.iter().enumerate() {
                let image = centralizer_image(r, a, y);
                for (b, c) in image.terms {
                    block[basis_index(datum, &b)][col] = c;
                }
                if y.subset == 0 {
                    block[col][col] = &block[col][col] - &ctx.one();
                }
            }
            block
        })
        .collect();
    let stacked: Matrix = blocks.into_iter().flatten().collect();
    Ok(linalg::right_kernel(ctx, &stacked))
}

/// Coefficient vectors spanning 𝔅(V^⊥)#k[Γ^⊥] inside H: products of the
/// V^⊥ basis vectors times Γ^⊥ group-likes.
pub fn hsym_span(result: &SymCenterResult, datum: &QlsDatum) -> Vec<Vec<Scalar>> {
    let ctx = &datum.ctx;
    let d = datum.dim_hopf() as usize;
    let mut rows = Vec::new();
    let kernel_elements: Vec<HopfElement> = result
        .v_perp
        .iter()
        .map(|v| {
            let mut x = HopfElement::zero();
            for (i, c) in v.iter().enumerate() {
                x.insert(
                    BasisElement {
                        group_part: datum.group.identity(),
                        subset: 1 << i,
                    },
                    c.clone(),
                );
            }
            x
        })
        .collect();
    for g in &result.gamma_perp.elements {
        for mask in 0u32..(1 << kernel_elements.len()) {
            let mut elt = crate::hopf::group_like(datum, g);
            for (s, v) in kernel_elements.iter().enumerate() {
                if mask & (1 << s) != 0 {
                    elt = crate::hopf::multiply(datum, &elt, v);
                }
            }
            let mut row = vec![ctx.zero(); d];
            for (b, c) in elt.terms {
                row[basis_index(datum, &b)] = c;
            }
            rows.push(row);
        }
    }
    rows
}
