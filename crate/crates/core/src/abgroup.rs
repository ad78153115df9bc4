//! Finite abelian groups with characters, bicharacters, quadratic forms,
//! radicals, quotients and orthogonal isomorphisms.
//!
//! A group is a product of cyclic factors `Z/m_1 x ... x Z/m_k`; elements are
//! exponent vectors.  Characters and bicharacters are stored by integer
//! exponents of ζ_N for the session root order N, so all evaluation is exact
//! exponent arithmetic and only turns into a [`Scalar`] on demand.

use crate::scalar::{lcm, CyclotomicContext, Scalar};
use crate::snf::{self, smith_normal_form};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("element has {got} exponents, group has rank {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("value at generator pair ({i}, {j}) is not a root of unity")]
    NotRootOfUnity { i: usize, j: usize },
    #[error("bicharacter value at ({i}, {j}) has order not dividing the generator orders")]
    IllFormedBicharacter { i: usize, j: usize },
    #[error("bicharacter is not symmetric at generator pair ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("quadratic form axiom q(g^-1) = q(g) fails at element {0:?}")]
    NotQuadratic(Vec<u64>),
    #[error("subgroup is not closed or not contained in the group")]
    NotSubgroup,
    #[error("group order {order} exceeds the search bound {bound}")]
    TooLarge { order: u64, bound: u64 },
    #[error("character order incompatible with root order N = {0}")]
    CharacterOrder(u64),
}

/// Γ ≅ Z/m_1 x ... x Z/m_k in declared coordinates, each m_i ≥ 2 (a rank-0
/// list is the trivial group).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinAbGroup {
    invariants: Vec<u64>,
}

/// An exponent vector (a_1, ..., a_k) with 0 ≤ a_i < m_i.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElement {
    pub exps: Vec<u64>,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{:?}", self.exps)
    }
}

impl FinAbGroup {
    pub fn new(invariants: Vec<u64>) -> Self {
        assert!(
            invariants.iter().all(|&m| m >= 2),
            "cyclic factors must have order at least 2"
        );
        FinAbGroup { invariants }
    }

    pub fn trivial() -> Self {
        FinAbGroup { invariants: vec![] }
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn order(&self) -> u64 {
        self.invariants.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.iter().fold(1, |acc, &m| lcm(acc, m))
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            exps: vec![0; self.rank()],
        }
    }

    pub fn generator(&self, i: usize) -> GroupElement {
        let mut exps = vec![0; self.rank()];
        exps[i] = 1;
        GroupElement { exps }
    }

    pub fn element(&self, exps: &[i64]) -> Result<GroupElement, GroupError> {
        if exps.len() != self.rank() {
            return Err(GroupError::RankMismatch {
                expected: self.rank(),
                got: exps.len(),
            });
        }
        Ok(GroupElement {
            exps: exps
                .iter()
                .zip(&self.invariants)
                .map(|(&a, &m)| a.rem_euclid(m as i64) as u64)
                .collect(),
        })
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            exps: a
                .exps
                .iter()
                .zip(&b.exps)
                .zip(&self.invariants)
                .map(|((&x, &y), &m)| (x + y) % m)
                .collect(),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            exps: a
                .exps
                .iter()
                .zip(&self.invariants)
                .map(|(&x, &m)| (m - x) % m)
                .collect(),
        }
    }

    pub fn pow(&self, a: &GroupElement, e: i64) -> GroupElement {
        GroupElement {
            exps: a
                .exps
                .iter()
                .zip(&self.invariants)
                .map(|(&x, &m)| ((x as i64 * e).rem_euclid(m as i64)) as u64)
                .collect(),
        }
    }

    pub fn element_order(&self, a: &GroupElement) -> u64 {
        a.exps
            .iter()
            .zip(&self.invariants)
            .fold(1, |acc, (&x, &m)| {
                let o = m / crate::scalar::gcd(m, x);
                lcm(acc, o)
            })
    }

    pub fn is_identity(&self, a: &GroupElement) -> bool {
        a.exps.iter().all(|&x| x == 0)
    }

    /// All elements in mixed-radix order; the identity comes first.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut cur = vec![0u64; self.rank()];
        loop {
            out.push(GroupElement { exps: cur.clone() });
            let mut i = self.rank();
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.invariants[i] {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    pub fn index_of(&self, a: &GroupElement) -> usize {
        let mut idx = 0usize;
        for (x, m) in a.exps.iter().zip(&self.invariants) {
            idx = idx * (*m as usize) + *x as usize;
        }
        idx
    }

    /// Canonical invariant factors (divisibility chain) of the group, for
    /// presentation-independent comparisons.
    pub fn canonical_invariants(&self) -> Vec<u64> {
        if self.rank() == 0 {
            return vec![];
        }
        let rel: Vec<Vec<i64>> = (0..self.rank())
            .map(|i| {
                (0..self.rank())
                    .map(|j| if i == j { self.invariants[i] as i64 } else { 0 })
                    .collect()
            })
            .collect();
        let snf = smith_normal_form(&rel);
        snf::diagonal(&snf)
            .into_iter()
            .map(|d| d.unsigned_abs())
            .filter(|&d| d > 1)
            .collect()
    }
}

/// A character of Γ, stored as exponents c with χ(e_i) = ζ_{m_i}^{c_i}.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Character {
    pub exps: Vec<u64>,
}

impl fmt::Debug for Character {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi{:?}", self.exps)
    }
}

impl Character {
    pub fn trivial(group: &FinAbGroup) -> Self {
        Character {
            exps: vec![0; group.rank()],
        }
    }

    pub fn new(group: &FinAbGroup, exps: &[i64]) -> Result<Self, GroupError> {
        if exps.len() != group.rank() {
            return Err(GroupError::RankMismatch {
                expected: group.rank(),
                got: exps.len(),
            });
        }
        Ok(Character {
            exps: exps
                .iter()
                .zip(group.invariants())
                .map(|(&c, &m)| c.rem_euclid(m as i64) as u64)
                .collect(),
        })
    }

    pub fn mul(&self, group: &FinAbGroup, other: &Character) -> Character {
        Character {
            exps: self
                .exps
                .iter()
                .zip(&other.exps)
                .zip(group.invariants())
                .map(|((&a, &b), &m)| (a + b) % m)
                .collect(),
        }
    }

    pub fn inverse(&self, group: &FinAbGroup) -> Character {
        Character {
            exps: self
                .exps
                .iter()
                .zip(group.invariants())
                .map(|(&a, &m)| (m - a) % m)
                .collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.exps.iter().all(|&c| c == 0)
    }

    /// Exponent k with χ(g) = ζ_N^k; requires every m_i to divide N.
    pub fn eval_exponent(&self, group: &FinAbGroup, n_root: u64) -> impl Fn(&GroupElement) -> u64 + '_ {
        let steps: Vec<u64> = group
            .invariants()
            .iter()
            .map(|&m| {
                assert!(n_root % m == 0, "root order must be divisible by every invariant");
                n_root / m
            })
            .collect();
        move |g: &GroupElement| {
            self.exps
                .iter()
                .zip(&g.exps)
                .zip(&steps)
                .map(|((&c, &a), &s)| (c as u128 * a as u128 * s as u128) % n_root as u128)
                .fold(0u128, |acc, t| (acc + t) % n_root as u128) as u64
        }
    }

    pub fn eval(
        &self,
        group: &FinAbGroup,
        ctx: &Arc<CyclotomicContext>,
        g: &GroupElement,
    ) -> Scalar {
        let k = self.eval_exponent(group, ctx.order())(g);
        ctx.zeta(k as i64)
    }

    /// Order of χ as a group element of the dual.
    pub fn order(&self, group: &FinAbGroup) -> u64 {
        // the dual group has the same invariants
        group.element_order(&GroupElement {
            exps: self.exps.clone(),
        })
    }
}

/// A bicharacter r_0 : Γ x Γ → k^x, stored as ζ_N-exponents on generator
/// pairs and extended bimultiplicatively.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bicharacter {
    pub n_root: u64,
    /// `exps[i][j]` is the ζ_N-exponent of r_0(e_i, e_j).
    pub exps: Vec<Vec<u64>>,
}

impl Bicharacter {
    pub fn trivial(group: &FinAbGroup, n_root: u64) -> Self {
        Bicharacter {
            n_root,
            exps: vec![vec![0; group.rank()]; group.rank()],
        }
    }

    /// Builds from generator-pair exponents, checking well-definedness:
    /// r_0(e_i, e_j) must be killed by both generator orders.
    pub fn new(group: &FinAbGroup, n_root: u64, exps: Vec<Vec<u64>>) -> Result<Self, GroupError> {
        let k = group.rank();
        assert_eq!(exps.len(), k);
        for (i, row) in exps.iter().enumerate() {
            assert_eq!(row.len(), k);
            for (j, &e) in row.iter().enumerate() {
                let mi = group.invariants()[i] as u128;
                let mj = group.invariants()[j] as u128;
                let n = n_root as u128;
                if (e as u128 * mi) % n != 0 || (e as u128 * mj) % n != 0 {
                    return Err(GroupError::IllFormedBicharacter { i, j });
                }
            }
        }
        Ok(Bicharacter { n_root, exps })
    }

    /// Builds from a table of scalar values on generator pairs.
    pub fn from_scalar_table(
        group: &FinAbGroup,
        table: &[Vec<Scalar>],
    ) -> Result<Self, GroupError> {
        let k = group.rank();
        let mut exps = vec![vec![0u64; k]; k];
        let mut n_root = 2;
        for (i, row) in table.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                n_root = s.context().order();
                exps[i][j] = s
                    .as_root_of_unity()
                    .ok_or(GroupError::NotRootOfUnity { i, j })?;
            }
        }
        if k == 0 {
            return Ok(Bicharacter { n_root: 2, exps });
        }
        Bicharacter::new(group, n_root, exps)
    }

    pub fn eval_exponent(&self, g: &GroupElement, h: &GroupElement) -> u64 {
        let n = self.n_root as u128;
        let mut acc = 0u128;
        for (i, &a) in g.exps.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in h.exps.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                acc = (acc + a as u128 * b as u128 % n * self.exps[i][j] as u128) % n;
            }
        }
        acc as u64
    }

    pub fn eval(&self, ctx: &Arc<CyclotomicContext>, g: &GroupElement, h: &GroupElement) -> Scalar {
        assert_eq!(ctx.order(), self.n_root);
        ctx.zeta(self.eval_exponent(g, h) as i64)
    }

    /// The character r_0(g, -).
    pub fn left_character(&self, group: &FinAbGroup, g: &GroupElement) -> Result<Character, GroupError> {
        let mut exps = Vec::with_capacity(group.rank());
        for j in 0..group.rank() {
            let e = self.eval_exponent(g, &group.generator(j));
            let m = group.invariants()[j];
            let step = self.n_root / m;
            if e % step != 0 {
                return Err(GroupError::CharacterOrder(self.n_root));
            }
            exps.push((e / step) % m);
        }
        Ok(Character { exps })
    }

    pub fn is_symmetric(&self) -> Result<(), GroupError> {
        for i in 0..self.exps.len() {
            for j in 0..self.exps.len() {
                if self.exps[i][j] != self.exps[j][i] {
                    return Err(GroupError::NotSymmetric { i, j });
                }
            }
        }
        Ok(())
    }

    /// The symmetric bicharacter b(g, h) = r_0(g, h) r_0(h, g).
    pub fn symmetrization(&self) -> Bicharacter {
        let k = self.exps.len();
        let exps = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| (self.exps[i][j] + self.exps[j][i]) % self.n_root)
                    .collect()
            })
            .collect();
        Bicharacter {
            n_root: self.n_root,
            exps,
        }
    }

    /// Restriction of the quadratic form g ↦ r_0(g, g).
    pub fn diagonal_form(&self, group: &FinAbGroup) -> QuadraticForm {
        let k = group.rank();
        let diag: Vec<u64> = (0..k).map(|i| self.exps[i][i]).collect();
        let pair: Vec<Vec<u64>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            0
                        } else {
                            (self.exps[i][j] + self.exps[j][i]) % self.n_root
                        }
                    })
                    .collect()
            })
            .collect();
        QuadraticForm {
            n_root: self.n_root,
            diag,
            pair,
        }
    }
}

/// A quadratic form q : Γ → k^x given by generator values q(e_i) = ζ^diag_i
/// and polarization values b(e_i, e_j) = ζ^pair_ij, evaluated everywhere via
/// q(gh) = q(g) q(h) b(g, h).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuadraticForm {
    pub n_root: u64,
    pub diag: Vec<u64>,
    pub pair: Vec<Vec<u64>>,
}

impl QuadraticForm {
    pub fn trivial(group: &FinAbGroup, n_root: u64) -> Self {
        QuadraticForm {
            n_root,
            diag: vec![0; group.rank()],
            pair: vec![vec![0; group.rank()]; group.rank()],
        }
    }

    /// Validates the quadratic-form axioms exhaustively: q(g^-1) = q(g) and
    /// the polarization identity q(gh) = q(g) q(h) b(g, h) with b the
    /// associated symmetric bicharacter.  Intended for desk-scale groups;
    /// cost is O(|Γ|^2).
    pub fn validate(&self, group: &FinAbGroup) -> Result<(), GroupError> {
        for (i, row) in self.pair.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                if e != self.pair[j][i] {
                    return Err(GroupError::NotSymmetric { i, j });
                }
            }
            // diagonal pair entries are derived (b(e_i, e_i) = q(e_i)^2),
            // stored as zero for canonical equality
            if self.pair[i][i] != 0 {
                return Err(GroupError::NotSymmetric { i, j: i });
            }
        }
        let b = self.polarization();
        let elems = group.elements();
        for g in &elems {
            if self.eval_exponent(g) != self.eval_exponent(&group.inverse(g)) {
                return Err(GroupError::NotQuadratic(g.exps.clone()));
            }
        }
        for g in &elems {
            for h in &elems {
                let gh = group.mul(g, h);
                let lhs = self.eval_exponent(&gh);
                let rhs = (self.eval_exponent(g) + self.eval_exponent(h)
                    + b.eval_exponent(g, h))
                    % self.n_root;
                if lhs != rhs {
                    return Err(GroupError::NotQuadratic(gh.exps.clone()));
                }
            }
        }
        Ok(())
    }

    pub fn eval_exponent(&self, g: &GroupElement) -> u64 {
        let n = self.n_root as u128;
        let mut acc = 0u128;
        for (i, &a) in g.exps.iter().enumerate() {
            if a == 0 {
                continue;
            }
            acc = (acc + a as u128 * a as u128 % n * self.diag[i] as u128) % n;
            for (j, &b) in g.exps.iter().enumerate().skip(i + 1) {
                if b == 0 {
                    continue;
                }
                acc = (acc + a as u128 * b as u128 % n * self.pair[i][j] as u128) % n;
            }
        }
        acc as u64
    }

    pub fn eval(&self, ctx: &Arc<CyclotomicContext>, g: &GroupElement) -> Scalar {
        assert_eq!(ctx.order(), self.n_root);
        ctx.zeta(self.eval_exponent(g) as i64)
    }

    /// The polarization b(g, h) = q(gh)/(q(g)q(h)) as a symmetric bicharacter.
    pub fn polarization(&self) -> Bicharacter {
        let k = self.diag.len();
        let exps = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            (2 * self.diag[i]) % self.n_root
                        } else {
                            self.pair[i][j]
                        }
                    })
                    .collect()
            })
            .collect();
        Bicharacter {
            n_root: self.n_root,
            exps,
        }
    }
}

/// A subgroup of an ambient group, with a canonical abstract presentation and
/// the embedding of its abstract generators.
#[derive(Clone, Debug)]
pub struct Subgroup {
    pub ambient: FinAbGroup,
    /// All members, sorted lexicographically by exponent vector.
    pub elements: Vec<GroupElement>,
    /// Invariant-factor presentation of the subgroup.
    pub abstract_group: FinAbGroup,
    /// Images in the ambient group of the abstract generators.
    pub embedding: Vec<GroupElement>,
    /// Ambient element → abstract coordinates.
    coords: BTreeMap<Vec<u64>, Vec<u64>>,
}

impl Subgroup {
    /// Closure of a generating set.
    pub fn generated_by(ambient: &FinAbGroup, gens: &[GroupElement]) -> Subgroup {
        let mut seen: BTreeMap<Vec<u64>, ()> = BTreeMap::new();
        let mut queue = vec![ambient.identity()];
        seen.insert(ambient.identity().exps, ());
        while let Some(e) = queue.pop() {
            for g in gens {
                let f = ambient.mul(&e, g);
                if !seen.contains_key(&f.exps) {
                    seen.insert(f.exps.clone(), ());
                    queue.push(f);
                }
            }
        }
        let elements: Vec<GroupElement> = seen
            .keys()
            .map(|e| GroupElement { exps: e.clone() })
            .collect();

        // abstract presentation: Z^s / K where K is the lattice of relations
        // among the given generators
        let s = gens.len();
        let (abstract_group, embedding, gen_coords) = if s == 0 {
            (FinAbGroup::trivial(), vec![], vec![])
        } else {
            let k = ambient.rank();
            // relation lattice: c such that sum c_i gens_i = 0 in ambient
            let mut b: Vec<Vec<i64>> = vec![vec![0i64; s + k]; k];
            for (j, g) in gens.iter().enumerate() {
                for (i, &x) in g.exps.iter().enumerate() {
                    b[i][j] = x as i64;
                }
            }
            for i in 0..k {
                b[i][s + i] = ambient.invariants()[i] as i64;
            }
            let ker = snf::integer_kernel(&b);
            let rel: Vec<Vec<i64>> = (0..s)
                .map(|i| ker.iter().map(|col| col[i]).collect())
            .collect();
            let snf_rel = smith_normal_form(&rel);
            let diag = snf::diagonal(&snf_rel);
            // abstract coordinates of x (in gen powers) are (u x) mod diag,
            // keeping rows with invariant > 1
            let kept: Vec<usize> = diag
                .iter()
                .enumerate()
                .filter(|(_, &d)| d.unsigned_abs() > 1)
                .map(|(i, _)| i)
                .collect();
            let inv: Vec<u64> = kept.iter().map(|&i| diag[i].unsigned_abs()).collect();
            let abstract_group = FinAbGroup::new(inv.clone());
            let u_inv = snf::mat_inverse_unimodular(&snf_rel.u);
            // abstract generator a corresponds to gen-power vector u_inv[:, kept[a]]
            let embedding: Vec<GroupElement> = kept
                .iter()
                .map(|&col| {
                    let mut acc = ambient.identity();
                    for (i, g) in gens.iter().enumerate() {
                        acc = ambient.mul(&acc, &ambient.pow(g, u_inv[i][col]));
                    }
                    acc
                })
                .collect();
            let gen_coords: Vec<Vec<u64>> = (0..s)
                .map(|j| {
                    kept.iter()
                        .zip(&inv)
                        .map(|(&row, &m)| (snf_rel.u[row][j].rem_euclid(m as i64)) as u64)
                        .collect()
                })
                .collect();
            (abstract_group, embedding, gen_coords)
        };

        // coordinates of every member, by closure over generator coordinates
        let mut coords: BTreeMap<Vec<u64>, Vec<u64>> = BTreeMap::new();
        coords.insert(ambient.identity().exps, abstract_group.identity().exps);
        let mut queue = vec![ambient.identity()];
        while let Some(e) = queue.pop() {
            let ce = coords.get(&e.exps).unwrap().clone();
            for (j, g) in gens.iter().enumerate() {
                let f = ambient.mul(&e, g);
                if !coords.contains_key(&f.exps) {
                    let cf = abstract_group.mul(
                        &GroupElement { exps: ce.clone() },
                        &GroupElement {
                            exps: gen_coords[j].clone(),
                        },
                    );
                    coords.insert(f.exps.clone(), cf.exps);
                    queue.push(f);
                }
            }
        }

        Subgroup {
            ambient: ambient.clone(),
            elements,
            abstract_group,
            embedding,
            coords,
        }
    }

    pub fn whole(ambient: &FinAbGroup) -> Subgroup {
        let gens: Vec<GroupElement> = (0..ambient.rank()).map(|i| ambient.generator(i)).collect();
        Subgroup::generated_by(ambient, &gens)
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.coords.contains_key(&g.exps)
    }

    /// Abstract coordinates of an ambient member.
    pub fn coordinates(&self, g: &GroupElement) -> Option<GroupElement> {
        self.coords.get(&g.exps).map(|c| GroupElement { exps: c.clone() })
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.ambient.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }
}

/// Radical Γ^⊥ = {g : b(g, h) = 1 for all h} of a symmetric bicharacter.
pub fn radical(group: &FinAbGroup, b: &Bicharacter) -> Result<Subgroup, GroupError> {
    b.is_symmetric()?;
    let members: Vec<GroupElement> = group
        .elements()
        .into_iter()
        .filter(|g| {
            (0..group.rank()).all(|j| b.eval_exponent(g, &group.generator(j)) == 0)
        })
        .collect();
    Ok(Subgroup::generated_by(group, &members))
}

/// Some bicharacter r_0 with r_0(g, g) = q(g) for all g, if q is
/// diagonalizable; `None` otherwise.
pub fn diagonalize_quadratic(group: &FinAbGroup, q: &QuadraticForm) -> Option<Bicharacter> {
    let n = q.n_root;
    let k = group.rank();
    let mut exps = vec![vec![0u64; k]; k];
    for i in 0..k {
        let m = group.invariants()[i] as u128;
        // q(e_i) must be an m_i-th root of unity, else no bicharacter matches
        // on the cyclic factor
        if (q.diag[i] as u128 * m) % n as u128 != 0 {
            return None;
        }
        exps[i][i] = q.diag[i];
    }
    for i in 0..k {
        for j in (i + 1)..k {
            // put the whole polarization value on one side
            exps[i][j] = q.pair[i][j];
        }
    }
    let r0 = Bicharacter::new(group, n, exps).ok()?;
    // construction guarantees the diagonal matches; assert on small groups
    debug_assert!(group
        .elements()
        .iter()
        .all(|g| r0.eval_exponent(g, g) == q.eval_exponent(g)));
    Some(r0)
}

/// A group isomorphism given by generator images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupIso {
    pub src: FinAbGroup,
    pub dst: FinAbGroup,
    pub gen_images: Vec<GroupElement>,
}

impl GroupIso {
    pub fn identity(group: &FinAbGroup) -> Self {
        GroupIso {
            src: group.clone(),
            dst: group.clone(),
            gen_images: (0..group.rank()).map(|i| group.generator(i)).collect(),
        }
    }

    pub fn apply(&self, g: &GroupElement) -> GroupElement {
        let mut acc = self.dst.identity();
        for (a, img) in g.exps.iter().zip(&self.gen_images) {
            acc = self.dst.mul(&acc, &self.dst.pow(img, *a as i64));
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.src == self.dst
            && self
                .gen_images
                .iter()
                .enumerate()
                .all(|(i, img)| *img == self.src.generator(i))
    }

    /// The inverse isomorphism, by exhausting the (desk-scale) source group.
    pub fn inverse(&self) -> GroupIso {
        let mut images = vec![None; self.dst.rank()];
        let mut map: BTreeMap<Vec<u64>, GroupElement> = BTreeMap::new();
        for g in self.src.elements() {
            map.insert(self.apply(&g).exps, g);
        }
        for (j, slot) in images.iter_mut().enumerate() {
            *slot = map.get(&self.dst.generator(j).exps).cloned();
        }
        GroupIso {
            src: self.dst.clone(),
            dst: self.src.clone(),
            gen_images: images.into_iter().map(|o| o.expect("not a bijection")).collect(),
        }
    }

    /// Pushforward of a character along the isomorphism: χ ∘ α^{-1}.
    pub fn push_character(&self, chi: &Character, n_root: u64) -> Character {
        let inv = self.inverse();
        let mut exps = Vec::with_capacity(self.dst.rank());
        let eval = chi.eval_exponent(&self.src, n_root);
        for j in 0..self.dst.rank() {
            let pre = inv.apply(&self.dst.generator(j));
            let e = eval(&pre);
            let m = self.dst.invariants()[j];
            let step = n_root / m;
            assert!(e % step == 0, "pushed character has invalid order");
            exps.push((e / step) % m);
        }
        Character { exps }
    }
}

/// All group isomorphisms α with q_dst ∘ α = q_src, by backtracking over
/// generator images; deterministic lexicographic order.
pub fn orthogonal_isos(
    src: (&FinAbGroup, &QuadraticForm),
    dst: (&FinAbGroup, &QuadraticForm),
    bound: u64,
) -> Result<Vec<GroupIso>, GroupError> {
    let (g_src, q_src) = src;
    let (g_dst, q_dst) = dst;
    if g_src.order() > bound || g_dst.order() > bound {
        return Err(GroupError::TooLarge {
            order: g_src.order().max(g_dst.order()),
            bound,
        });
    }
    if g_src.order() != g_dst.order()
        || g_src.canonical_invariants() != g_dst.canonical_invariants()
    {
        return Ok(vec![]);
    }
    let b_src = q_src.polarization();
    let b_dst = q_dst.polarization();
    let dst_elems = g_dst.elements();
    let k = g_src.rank();
    let mut out = Vec::new();
    let mut images: Vec<GroupElement> = Vec::with_capacity(k);

    fn extend(
        g_src: &FinAbGroup,
        g_dst: &FinAbGroup,
        q_src: &QuadraticForm,
        q_dst: &QuadraticForm,
        b_src: &Bicharacter,
        b_dst: &Bicharacter,
        dst_elems: &[GroupElement],
        images: &mut Vec<GroupElement>,
        out: &mut Vec<GroupIso>,
    ) {
        let i = images.len();
        if i == g_src.rank() {
            // surjectivity check: images generate the target
            let sub = Subgroup::generated_by(g_dst, images);
            if sub.order() == g_dst.order() {
                out.push(GroupIso {
                    src: g_src.clone(),
                    dst: g_dst.clone(),
                    gen_images: images.clone(),
                });
            }
            return;
        }
        let e_i = g_src.generator(i);
        let m_i = g_src.invariants()[i];
        for cand in dst_elems {
            // hom well-definedness on the cyclic factor
            if m_i % g_dst.element_order(cand) != 0 {
                continue;
            }
            if q_dst.eval_exponent(cand) != q_src.eval_exponent(&e_i) {
                continue;
            }
            let mut ok = true;
            for (j, img_j) in images.iter().enumerate() {
                let e_j = g_src.generator(j);
                if b_dst.eval_exponent(cand, img_j) != b_src.eval_exponent(&e_i, &e_j) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            images.push(cand.clone());
            extend(
                g_src, g_dst, q_src, q_dst, b_src, b_dst, dst_elems, images, out,
            );
            images.pop();
        }
    }

    extend(
        g_src, g_dst, q_src, q_dst, &b_src, &b_dst, &dst_elems, &mut images, &mut out,
    );
    Ok(out)
}

/// |H^2(G, k^x)| = ∏_{i<j} gcd(m_i, m_j) for G ≅ ⊕ Z/m_i.
pub fn schur_multiplier_order(group: &FinAbGroup) -> u64 {
    let inv = group.invariants();
    let mut order = 1u64;
    for i in 0..inv.len() {
        for j in (i + 1)..inv.len() {
            order *= crate::scalar::gcd(inv[i], inv[j]);
        }
    }
    order
}

/// Quotient G/H in invariant-factor form, with the projection images of G's
/// generators.
pub fn quotient(
    group: &FinAbGroup,
    sub: &Subgroup,
) -> Result<(FinAbGroup, Vec<GroupElement>), GroupError> {
    if sub.ambient != *group {
        return Err(GroupError::NotSubgroup);
    }
    let k = group.rank();
    if k == 0 {
        return Ok((FinAbGroup::trivial(), vec![]));
    }
    let mut b: Vec<Vec<i64>> = vec![Vec::new(); k];
    for i in 0..k {
        for j in 0..k {
            b[i].push(if i == j { group.invariants()[i] as i64 } else { 0 });
        }
        for h in &sub.embedding {
            b[i].push(h.exps[i] as i64);
        }
    }
    let snf_b = smith_normal_form(&b);
    let diag = snf::diagonal(&snf_b);
    let kept: Vec<usize> = diag
        .iter()
        .enumerate()
        .filter(|(_, &d)| d.unsigned_abs() > 1)
        .map(|(i, _)| i)
        .collect();
    let inv: Vec<u64> = kept.iter().map(|&i| diag[i].unsigned_abs()).collect();
    let q_group = FinAbGroup::new(inv.clone());
    // projection of x is (u x) over the kept rows
    let proj: Vec<GroupElement> = (0..k)
        .map(|t| GroupElement {
            exps: kept
                .iter()
                .zip(&inv)
                .map(|(&row, &m)| (snf_b.u[row][t].rem_euclid(m as i64)) as u64)
                .collect(),
        })
        .collect();
    Ok((q_group, proj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64) -> FinAbGroup {
        FinAbGroup::new(vec![n])
    }

    #[test]
    fn bicharacter_identity_and_values() {
        let g2 = z(2);
        let ctx = CyclotomicContext::new(2);
        let r0 = Bicharacter::new(&g2, 2, vec![vec![1]]).unwrap();
        let e = g2.generator(0);
        let one = g2.identity();
        assert_eq!(r0.eval(&ctx, &one, &e), ctx.one());
        assert_eq!(r0.eval(&ctx, &e, &e), ctx.from_int(-1));
    }

    #[test]
    fn z4_bicharacter_powers() {
        // r0(g, g) = zeta_4; r0(g^2, g^2) = zeta_4^4 = 1
        let g4 = z(4);
        let ctx = CyclotomicContext::new(4);
        let r0 = Bicharacter::new(&g4, 4, vec![vec![1]]).unwrap();
        let g2 = g4.element(&[2]).unwrap();
        assert_eq!(r0.eval(&ctx, &g2, &g2), ctx.one());
    }

    #[test]
    fn bimultiplicativity_exhaustive_small() {
        let cases = vec![
            (z(2), Bicharacter::new(&z(2), 2, vec![vec![1]]).unwrap()),
            (z(4), Bicharacter::new(&z(4), 4, vec![vec![1]]).unwrap()),
            (
                FinAbGroup::new(vec![2, 4]),
                Bicharacter::new(&FinAbGroup::new(vec![2, 4]), 4, vec![vec![2, 2], vec![0, 1]])
                    .unwrap(),
            ),
        ];
        for (grp, r0) in cases {
            assert!(grp.order() <= 16);
            let elems = grp.elements();
            for g in &elems {
                for h in &elems {
                    for f in &elems {
                        let gh = grp.mul(g, h);
                        assert_eq!(
                            r0.eval_exponent(&gh, f),
                            (r0.eval_exponent(g, f) + r0.eval_exponent(h, f)) % r0.n_root
                        );
                        assert_eq!(
                            r0.eval_exponent(f, &gh),
                            (r0.eval_exponent(f, g) + r0.eval_exponent(f, h)) % r0.n_root
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn ill_formed_bicharacter_rejected() {
        // zeta_4 on a Z/2 generator pair is not killed by the order
        let g2 = z(2);
        assert!(matches!(
            Bicharacter::new(&g2, 4, vec![vec![1]]),
            Err(GroupError::IllFormedBicharacter { .. })
        ));
    }

    #[test]
    fn radical_examples() {
        let ctx_n = 2;
        let g2 = z(2);
        let trivial = Bicharacter::trivial(&g2, ctx_n);
        assert!(radical(&g2, &trivial).unwrap().is_whole());

        // b = square of r0(g,g) = -1 is trivial on Z/2
        let r0 = Bicharacter::new(&g2, 2, vec![vec![1]]).unwrap();
        let b = r0.symmetrization();
        assert!(radical(&g2, &b).unwrap().is_whole());

        // Z/4 with r0(g,g) = zeta_4: b(g,g) = -1, radical = {1, g^2}
        let g4 = z(4);
        let r0 = Bicharacter::new(&g4, 4, vec![vec![1]]).unwrap();
        let b = r0.symmetrization();
        let rad = radical(&g4, &b).unwrap();
        assert_eq!(rad.order(), 2);
        assert!(rad.contains(&g4.element(&[2]).unwrap()));
        // membership is exactly annihilation
        for g in g4.elements() {
            let kills_all = g4
                .elements()
                .iter()
                .all(|h| b.eval_exponent(&g, h) == 0);
            assert_eq!(rad.contains(&g), kills_all);
        }
    }

    #[test]
    fn radical_rejects_non_symmetric() {
        let g = FinAbGroup::new(vec![3, 3]);
        let b = Bicharacter::new(&g, 3, vec![vec![0, 1], vec![0, 0]]).unwrap();
        assert!(matches!(
            radical(&g, &b),
            Err(GroupError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn diagonalize_examples() {
        let g2 = z(2);
        // q(g) = -1 on Z/2 diagonalizes
        let q = QuadraticForm {
            n_root: 2,
            diag: vec![1],
            pair: vec![vec![0]],
        };
        q.validate(&g2).unwrap();
        let r0 = diagonalize_quadratic(&g2, &q).unwrap();
        assert_eq!(r0.exps[0][0], 1);

        // q(g) = zeta_4 on Z/2 does not
        let q = QuadraticForm {
            n_root: 4,
            diag: vec![1],
            pair: vec![vec![0]],
        };
        q.validate(&g2).unwrap();
        assert!(diagonalize_quadratic(&g2, &q).is_none());

        // trivial q diagonalizes trivially
        let q = QuadraticForm::trivial(&g2, 2);
        let r0 = diagonalize_quadratic(&g2, &q).unwrap();
        assert_eq!(r0, Bicharacter::trivial(&g2, 2));
    }

    #[test]
    fn diagonalize_matches_on_all_elements() {
        let grp = FinAbGroup::new(vec![2, 4]);
        let r_seed = Bicharacter::new(&grp, 4, vec![vec![2, 2], vec![2, 3]]).unwrap();
        let q = r_seed.diagonal_form(&grp);
        q.validate(&grp).unwrap();
        let r0 = diagonalize_quadratic(&grp, &q).unwrap();
        for g in grp.elements() {
            assert_eq!(r0.eval_exponent(&g, &g), q.eval_exponent(&g));
        }
    }

    #[test]
    fn quadratic_form_inverse_invariance_exhaustive() {
        let grp = FinAbGroup::new(vec![2, 4]);
        let q = QuadraticForm {
            n_root: 8,
            diag: vec![4, 1],
            pair: vec![vec![0, 4], vec![4, 0]],
        };
        q.validate(&grp).unwrap();
        for g in grp.elements() {
            assert_eq!(q.eval_exponent(&g), q.eval_exponent(&grp.inverse(&g)));
        }
    }

    #[test]
    fn orthogonal_isos_examples() {
        // Z/2 with nontrivial q: only the identity
        let g2 = z(2);
        let q = QuadraticForm {
            n_root: 2,
            diag: vec![1],
            pair: vec![vec![0]],
        };
        let isos = orthogonal_isos((&g2, &q), (&g2, &q), 64).unwrap();
        assert_eq!(isos.len(), 1);
        assert!(isos[0].is_identity());

        // Z/3 with q(g) = q(g^2) = zeta_3: identity and inversion
        let g3 = z(3);
        let q3 = QuadraticForm {
            n_root: 3,
            diag: vec![1],
            pair: vec![vec![0]],
        };
        q3.validate(&g3).unwrap();
        let isos = orthogonal_isos((&g3, &q3), (&g3, &q3), 64).unwrap();
        assert_eq!(isos.len(), 2);
        // exhaustive cross-check: every bijective hom preserving q appears
        for iso in &isos {
            for g in g3.elements() {
                assert_eq!(q3.eval_exponent(&iso.apply(&g)), q3.eval_exponent(&g));
            }
        }

        // nontrivial vs trivial: empty
        let q_triv = QuadraticForm::trivial(&g2, 2);
        let isos = orthogonal_isos((&g2, &q), (&g2, &q_triv), 64).unwrap();
        assert!(isos.is_empty());
    }

    #[test]
    fn orthogonal_isos_bound() {
        let g = FinAbGroup::new(vec![128]);
        let q = QuadraticForm::trivial(&g, 2);
        assert!(matches!(
            orthogonal_isos((&g, &q), (&g, &q), 64),
            Err(GroupError::TooLarge { .. })
        ));
    }

    #[test]
    fn schur_multiplier_examples() {
        assert_eq!(schur_multiplier_order(&z(12)), 1);
        assert_eq!(schur_multiplier_order(&FinAbGroup::new(vec![2, 2])), 2);
        assert_eq!(schur_multiplier_order(&FinAbGroup::new(vec![2, 4])), 2);
        assert_eq!(schur_multiplier_order(&FinAbGroup::new(vec![2, 2, 2])), 8);
        assert_eq!(schur_multiplier_order(&FinAbGroup::trivial()), 1);
    }

    #[test]
    fn schur_multiplier_matches_alternating_count() {
        // |H^2(G)| equals the number of alternating bicharacters on G
        for grp in [
            z(2),
            z(4),
            FinAbGroup::new(vec![2, 2]),
            FinAbGroup::new(vec![2, 4]),
            FinAbGroup::new(vec![3, 3]),
        ] {
            let n = grp.exponent();
            let k = grp.rank();
            let mut count = 0u64;
            // enumerate generator-pair exponent tables
            let mut table = vec![vec![0u64; k]; k];
            fn rec(
                grp: &FinAbGroup,
                n: u64,
                table: &mut Vec<Vec<u64>>,
                pos: usize,
                count: &mut u64,
            ) {
                let k = grp.rank();
                if pos == k * k {
                    if let Ok(b) = Bicharacter::new(grp, n, table.clone()) {
                        if grp.elements().iter().all(|g| b.eval_exponent(g, g) == 0) {
                            *count += 1;
                        }
                    }
                    return;
                }
                let (i, j) = (pos / k, pos % k);
                let step = n / crate::scalar::gcd(grp.invariants()[i], grp.invariants()[j]);
                let mut e = 0;
                while e < n {
                    table[i][j] = e;
                    rec(grp, n, table, pos + 1, count);
                    e += step;
                }
                table[i][j] = 0;
            }
            rec(&grp, n, &mut table, 0, &mut count);
            assert_eq!(
                count,
                schur_multiplier_order(&grp),
                "alternating bicharacter count mismatch for {:?}",
                grp.invariants()
            );
        }
    }

    #[test]
    fn quotient_examples() {
        let g4 = z(4);
        // by the trivial subgroup: Z/4 again
        let triv = Subgroup::generated_by(&g4, &[]);
        let (q, _) = quotient(&g4, &triv).unwrap();
        assert_eq!(q.invariants(), &[4]);

        // Z/4 / {1, g^2} = Z/2
        let half = Subgroup::generated_by(&g4, &[g4.element(&[2]).unwrap()]);
        let (q, proj) = quotient(&g4, &half).unwrap();
        assert_eq!(q.invariants(), &[2]);
        assert_eq!(q.element_order(&proj[0]), 2);

        // (Z/2)^2 / diagonal = Z/2
        let g22 = FinAbGroup::new(vec![2, 2]);
        let diag = Subgroup::generated_by(&g22, &[g22.element(&[1, 1]).unwrap()]);
        let (q, proj) = quotient(&g22, &diag).unwrap();
        assert_eq!(q.invariants(), &[2]);
        // both generators map to the same nontrivial class
        assert_eq!(proj[0], proj[1]);
        assert!(!q.is_identity(&proj[0]));
    }

    #[test]
    fn subgroup_times_quotient_is_group() {
        let grp = FinAbGroup::new(vec![2, 4]);
        for g in grp.elements() {
            let sub = Subgroup::generated_by(&grp, &[g]);
            let (q, _) = quotient(&grp, &sub).unwrap();
            assert_eq!(sub.order() * q.order(), grp.order());
        }
    }

    #[test]
    fn subgroup_presentation_consistency() {
        let grp = FinAbGroup::new(vec![4, 4]);
        let sub = Subgroup::generated_by(
            &grp,
            &[grp.element(&[2, 0]).unwrap(), grp.element(&[0, 1]).unwrap()],
        );
        assert_eq!(sub.order(), 8);
        assert_eq!(sub.abstract_group.order(), 8);
        // embedding respects coordinates
        for m in &sub.elements {
            let c = sub.coordinates(m).unwrap();
            let mut rebuilt = grp.identity();
            for (a, img) in c.exps.iter().zip(&sub.embedding) {
                rebuilt = grp.mul(&rebuilt, &grp.pow(img, *a as i64));
            }
            assert_eq!(&rebuilt, m);
        }
    }

    #[test]
    fn character_evaluation() {
        let grp = FinAbGroup::new(vec![2, 4]);
        let ctx = CyclotomicContext::new(4);
        let chi = Character::new(&grp, &[1, 1]).unwrap();
        let g = grp.element(&[1, 2]).unwrap();
        // chi(g) = (-1)^1 * zeta4^2 = -1 * -1 = 1
        assert_eq!(chi.eval(&grp, &ctx, &g), ctx.one());
        assert_eq!(chi.order(&grp), 4);
    }

    #[test]
    fn canonical_invariants_normalize_presentations() {
        assert_eq!(
            FinAbGroup::new(vec![2, 3]).canonical_invariants(),
            vec![6]
        );
        assert_eq!(
            FinAbGroup::new(vec![4, 2]).canonical_invariants(),
            vec![2, 4]
        );
        assert_eq!(FinAbGroup::trivial().canonical_invariants(), Vec::<u64>::new());
    }
}
