//! The Drinfeld double of a self-dual quantum linear space: the subgroup
//! Σ = ⟨(g_i, χ_i^{-1})⟩ of Γ × Γ̂ with its canonical quadratic form
//! q_Σ(g, χ) = χ(g), the 2n-dimensional datum W ⊕ W* over Σ, and the
//! canonical symplectic form pairing the two halves.  This quadruple presents
//! the adjoint (trivial-grading) part of the Drinfeld center of the category
//! presented by the input datum.

use crate::abgroup::{Bicharacter, Character, FinAbGroup, GroupElement, QuadraticForm, Subgroup};
use crate::linalg;
use crate::qls::{BilinearForm, QlsDatum};
use crate::quadruple::MetricQuadruple;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DoubleError {
    #[error("the datum is not self-dual: no generator pairs with (g_{0}^-1, chi_{0}^-1)")]
    NotSelfDual(usize),
    #[error("datum validation of the double failed: {0}")]
    Datum(#[from] crate::qls::DatumError),
    #[error("internal consistency: {0}")]
    Consistency(String),
}

/// The double's data: Σ in abstract invariant-factor form with its embedding
/// into Γ × Γ̂, the canonical quadratic form and its diagonalizer, the
/// 2n-dimensional datum, and the symplectic form.
#[derive(Debug, Clone)]
pub struct DoubleResult {
    /// Γ × Γ̂ with the dual coordinatized like Γ.
    pub ambient: FinAbGroup,
    /// Σ as a subgroup of the ambient product.
    pub sigma: Subgroup,
    pub q_sigma: QuadraticForm,
    pub r_sigma: Bicharacter,
    /// The datum of D(V) = W ⊕ W* over the abstract form of Σ; indices
    /// 0..n are the W half, n..2n the dual half in matching components.
    pub dv_datum: QlsDatum,
    pub r_dv: BilinearForm,
    /// The involutive duality pairing on indices: (g_{π(i)}, χ_{π(i)}) =
    /// (g_i^{-1}, χ_i^{-1}).
    pub pairing: Vec<usize>,
    pub sigma_perp_order: u64,
    /// dim_k of the adjoint Hopf algebra, |Σ| · 2^{2n}.
    pub dim_a: u64,
}

/// Self-duality test: the multiset {(g_i, χ_i)} must be closed under
/// inversion.  Returns the involutive index pairing when it is.
pub fn is_self_dual(datum: &QlsDatum) -> Option<Vec<usize>> {
    let n = datum.dim_v();
    let mut pairing = vec![usize::MAX; n];
    for i in 0..n {
        if pairing[i] != usize::MAX {
            continue;
        }
        let target_g = datum.group.inverse(&datum.degrees[i]);
        let target_chi = datum.characters[i].inverse(&datum.group);
        let j = (i..n).find(|&j| {
            (pairing[j] == usize::MAX || (j == i && target_g == datum.degrees[i]))
                && datum.degrees[j] == target_g
                && datum.characters[j] == target_chi
        })?;
        pairing[i] = j;
        pairing[j] = i;
    }
    Some(pairing)
}

fn ambient_product(group: &FinAbGroup) -> FinAbGroup {
    let mut inv = group.invariants().to_vec();
    inv.extend_from_slice(group.invariants());
    if inv.is_empty() {
        FinAbGroup::trivial()
    } else {
        FinAbGroup::new(inv)
    }
}

fn pair_element(g: &GroupElement, chi: &Character) -> GroupElement {
    let mut exps = g.exps.clone();
    exps.extend_from_slice(&chi.exps);
    GroupElement { exps }
}

/// ζ-exponent of the canonical pairing b((g, χ), (g', χ')) = χ(g') χ'(g).
fn canonical_pairing_exponent(
    group: &FinAbGroup,
    n_root: u64,
    a: &GroupElement,
    b: &GroupElement,
) -> u64 {
    let k = group.rank();
    let split = |e: &GroupElement| {
        (
            GroupElement {
                exps: e.exps[..k].to_vec(),
            },
            Character {
                exps: e.exps[k..].to_vec(),
            },
        )
    };
    let (ga, chi_a) = split(a);
    let (gb, chi_b) = split(b);
    let ea = chi_a.eval_exponent(group, n_root)(&gb);
    let eb = chi_b.eval_exponent(group, n_root)(&ga);
    (ea + eb) % n_root
}

/// Σ^⊥ inside Γ × Γ̂ under the canonical pairing, with its order; defined
/// for every datum (self-dual or not).  The universal grading group of the
/// Drinfeld center is the character group of Σ^⊥, of the same order.
pub fn grading_group(datum: &QlsDatum) -> (Vec<GroupElement>, u64) {
    let ambient = ambient_product(&datum.group);
    let n_root = datum.ctx.order();
    let gens: Vec<GroupElement> = datum
        .degrees
        .iter()
        .zip(&datum.characters)
        .map(|(g, chi)| pair_element(g, &chi.inverse(&datum.group)))
        .collect();
    let perp: Vec<GroupElement> = ambient
        .elements()
        .into_iter()
        .filter(|x| {
            gens.iter()
                .all(|s| canonical_pairing_exponent(&datum.group, n_root, x, s) == 0)
        })
        .collect();
    let order = perp.len() as u64;
    (perp, order)
}

/// Builds the Drinfeld double of a self-dual datum and validates every
/// structural identity: the φ-conditions, the symplectic form, isotropy of
/// Σ, and the order identity |Σ| · |Σ^⊥| = |Γ|².
pub fn drinfeld_double(datum: &QlsDatum) -> Result<DoubleResult, DoubleError> {
    let n = datum.dim_v();
    let pairing = is_self_dual(datum).ok_or_else(|| {
        let i = (0..n)
            .find(|&i| {
                let tg = datum.group.inverse(&datum.degrees[i]);
                let tc = datum.characters[i].inverse(&datum.group);
                !datum
                    .degrees
                    .iter()
                    .zip(&datum.characters)
                    .any(|(g, c)| *g == tg && *c == tc)
            })
            .unwrap_or(0);
        DoubleError::NotSelfDual(i + 1)
    })?;
    let ambient = ambient_product(&datum.group);
    let n_root = datum.ctx.order();
    let sigma_gens: Vec<GroupElement> = datum
        .degrees
        .iter()
        .zip(&datum.characters)
        .map(|(g, chi)| pair_element(g, &chi.inverse(&datum.group)))
        .collect();
    let sigma = Subgroup::generated_by(&ambient, &sigma_gens);

    // isotropy: Σ ⊆ Σ^⊥
    for a in &sigma.elements {
        for b in &sigma.elements {
            if canonical_pairing_exponent(&datum.group, n_root, a, b) != 0 {
                return Err(DoubleError::Consistency(
                    "Σ is not isotropic for the canonical pairing".into(),
                ));
            }
        }
    }
    let (_, sigma_perp_order) = grading_group(datum);
    let gamma_sq = datum.group.order() * datum.group.order();
    if sigma.order() * sigma_perp_order != gamma_sq {
        return Err(DoubleError::Consistency(format!(
            "|Σ|·|Σ^⊥| = {} but |Γ|² = {}",
            sigma.order() * sigma_perp_order,
            gamma_sq
        )));
    }

    // characters and forms on Σ are evaluated through the embedding of its
    // abstract generators
    let abs = &sigma.abstract_group;
    let k = abs.rank();
    let split_embed: Vec<(GroupElement, Character)> = sigma
        .embedding
        .iter()
        .map(|e| {
            let kk = datum.group.rank();
            (
                GroupElement {
                    exps: e.exps[..kk].to_vec(),
                },
                Character {
                    exps: e.exps[kk..].to_vec(),
                },
            )
        })
        .collect();
    let char_exponent = |value_exp: u64, t: usize| -> Result<u64, DoubleError> {
        let m = abs.invariants()[t];
        let step = n_root / m;
        if value_exp % step != 0 {
            return Err(DoubleError::Consistency(
                "character of Σ has order not dividing the generator order".into(),
            ));
        }
        Ok((value_exp / step) % m)
    };

    // φ_i(g, χ) = χ_i(g) as characters of Σ
    let mut phis: Vec<Character> = Vec::with_capacity(n);
    for i in 0..n {
        let eval_i = datum.characters[i].eval_exponent(&datum.group, n_root);
        let mut exps = Vec::with_capacity(k);
        for (t, (g_t, _)) in split_embed.iter().enumerate() {
            exps.push(char_exponent(eval_i(g_t), t)?);
        }
        phis.push(Character { exps });
    }

    // r_Σ((g, χ), (g', χ')) = χ'(g); q_Σ its diagonal
    let mut r_exps = vec![vec![0u64; k]; k];
    for (a, (g_a, _)) in split_embed.iter().enumerate() {
        for (b, (_, chi_b)) in split_embed.iter().enumerate() {
            r_exps[a][b] = chi_b.eval_exponent(&datum.group, n_root)(g_a);
        }
    }
    let r_sigma = Bicharacter::new(abs, n_root, r_exps)
        .map_err(|e| DoubleError::Consistency(format!("r_Σ ill-formed: {e}")))?;
    let q_sigma = r_sigma.diagonal_form(abs);

    // degrees of the double: s_i in abstract coordinates, duplicated so the
    // dual half sits in the same isotypic components
    let mut degrees: Vec<GroupElement> = Vec::with_capacity(2 * n);
    for s in &sigma_gens {
        degrees.push(sigma.coordinates(s).ok_or_else(|| {
            DoubleError::Consistency("generator missing from Σ coordinates".into())
        })?);
    }
    degrees.extend_from_slice(&degrees.clone());
    let mut characters = phis.clone();
    characters.extend_from_slice(&phis);
    let dv_datum = QlsDatum::new(
        datum.ctx.clone(),
        abs.clone(),
        r_sigma.clone(),
        degrees,
        characters,
    )?;

    // r_{D(V)} from the evaluation pairing and the braiding: the dual-basis
    // vector paired with x_i sits at index n + π(i), with value
    // φ_i(s_i)^{-1} = -1 on the braided side and +1 on the evaluation side
    let ctx = &datum.ctx;
    let mut m = linalg::zeros(ctx, 2 * n, 2 * n);
    for i in 0..n {
        m[i][n + pairing[i]] = ctx.from_int(-1);
        m[n + pairing[i]][i] = ctx.one();
    }
    let r_dv = BilinearForm::new(&dv_datum, m)?;
    if !r_dv.is_alternating() {
        return Err(DoubleError::Consistency("r_{D(V)} is not alternating".into()));
    }
    if r_dv.rank() != 2 * n {
        return Err(DoubleError::Consistency(
            "r_{D(V)} is not symplectic (degenerate)".into(),
        ));
    }
    if !r_dv.is_yd_morphism(&dv_datum) {
        return Err(DoubleError::Consistency(
            "r_{D(V)} is not a Yetter-Drinfeld morphism".into(),
        ));
    }
    if is_self_dual(&dv_datum).is_none() {
        return Err(DoubleError::Consistency("D(V) is not self-dual".into()));
    }

    Ok(DoubleResult {
        ambient,
        sigma,
        q_sigma,
        r_sigma,
        dv_datum,
        r_dv,
        pairing,
        sigma_perp_order,
        dim_a: 0, // set below
    }
    .with_dim_a())
}

impl DoubleResult {
    fn with_dim_a(mut self) -> Self {
        self.dim_a = self.sigma.order() << (self.dv_datum.dim_v());
        self
    }

    /// The metric quadruple (Σ, q_Σ, D(V), r_{D(V)}).
    pub fn quadruple(&self) -> MetricQuadruple {
        MetricQuadruple {
            group: self.dv_datum.group.clone(),
            q: self.q_sigma.clone(),
            diag_r0: self.r_sigma.clone(),
            degrees: self.dv_datum.degrees.clone(),
            characters: self.dv_datum.characters.clone(),
            r: self.r_dv.clone(),
            ctx_order: self.dv_datum.ctx.order(),
        }
    }

    /// Reindexing the dual half by the duality pairing turns the form into
    /// the standard symplectic block [[0, -I], [I, 0]]; this re-derives the
    /// congruence normal form of the construction.
    pub fn congruent_to_standard_symplectic(&self) -> bool {
        let n = self.dv_datum.dim_v() / 2;
        let ctx = &self.dv_datum.ctx;
        let perm = |idx: usize| -> usize {
            if idx < n {
                idx
            } else {
                n + self.pairing[idx - n]
            }
        };
        let mut expected = linalg::zeros(ctx, 2 * n, 2 * n);
        for i in 0..n {
            expected[i][n + i] = ctx.from_int(-1);
            expected[n + i][i] = ctx.one();
        }
        (0..2 * n).all(|i| {
            (0..2 * n).all(|j| self.r_dv.matrix[perm(i)][perm(j)] == expected[i][j])
        })
    }
}
