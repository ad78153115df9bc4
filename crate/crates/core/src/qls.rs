//! Quantum linear spaces of symmetric type over a finite abelian group, and
//! bilinear forms on them.
//!
//! A datum is a list of pairs (g_i, χ_i) with χ_i(g_i) = -1 and
//! χ_j(g_i) χ_i(g_j) = 1, compatible with the ambient bicharacter r_0 through
//! r_0(g_i, -) = χ_i = r_0(-, g_i)^{-1}.  The basis vectors x_i span V; the
//! braiding acts by c(x_i ⊗ x_j) = χ_j(g_i) x_j ⊗ x_i.

use crate::abgroup::{Bicharacter, Character, FinAbGroup, GroupElement};
use crate::linalg::{self, Matrix};
use crate::scalar::{CyclotomicContext, Scalar};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Maximum number of generators; subsets of the basis are u32 bitmasks.
pub const MAX_GENERATORS: usize = 30;

/// One violated datum condition, with the offending indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// χ_i(g_i) ≠ -1.
    NotSymmetricType { i: usize, value: String },
    /// χ_j(g_i) χ_i(g_j) ≠ 1.
    CrossCondition { i: usize, j: usize, value: String },
    /// r_0(g_i, -) ≠ χ_i on some generator.
    LeftCharacterMismatch { i: usize, generator: usize },
    /// r_0(-, g_i) ≠ χ_i^{-1} on some generator.
    RightCharacterMismatch { i: usize, generator: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotSymmetricType { i, value } => {
                write!(f, "chi_{}(g_{}) = {} but must be -1", i + 1, i + 1, value)
            }
            Violation::CrossCondition { i, j, value } => write!(
                f,
                "chi_{}(g_{}) * chi_{}(g_{}) = {} but must be 1",
                j + 1,
                i + 1,
                i + 1,
                j + 1,
                value
            ),
            Violation::LeftCharacterMismatch { i, generator } => write!(
                f,
                "r0(g_{}, -) differs from chi_{} at generator {}",
                i + 1,
                i + 1,
                generator + 1
            ),
            Violation::RightCharacterMismatch { i, generator } => write!(
                f,
                "r0(-, g_{}) differs from chi_{}^-1 at generator {}",
                i + 1,
                i + 1,
                generator + 1
            ),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("datum has {degrees} degrees but {characters} characters")]
    LengthMismatch { degrees: usize, characters: usize },
    #[error("datum has {0} generators, more than the supported {MAX_GENERATORS}")]
    TooManyGenerators(usize),
    #[error("invalid quantum linear space datum: {}",
            .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("bilinear form is {got}x{got2}, datum has dimension {expected}")]
    FormSize { expected: usize, got: usize, got2: usize },
    #[error("root order N = {0} does not cover the group exponent")]
    RootOrder(u64),
}

/// A validated quantum linear space of symmetric type together with its
/// ambient (Γ, r_0) and the session scalar context.
#[derive(Clone)]
pub struct QlsDatum {
    pub group: FinAbGroup,
    pub r0: Bicharacter,
    pub degrees: Vec<GroupElement>,
    pub characters: Vec<Character>,
    pub ctx: Arc<CyclotomicContext>,
}

impl fmt::Debug for QlsDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "QlsDatum(invariants = {:?}, n = {})",
            self.group.invariants(),
            self.degrees.len()
        )
    }
}

impl PartialEq for QlsDatum {
    fn eq(&self, other: &Self) -> bool {
        self.group == other.group
            && self.r0 == other.r0
            && self.degrees == other.degrees
            && self.characters == other.characters
            && self.ctx.order() == other.ctx.order()
    }
}

impl QlsDatum {
    /// Validates a datum; on failure every violated condition is reported.
    pub fn new(
        ctx: Arc<CyclotomicContext>,
        group: FinAbGroup,
        r0: Bicharacter,
        degrees: Vec<GroupElement>,
        characters: Vec<Character>,
    ) -> Result<Self, DatumError> {
        if degrees.len() != characters.len() {
            return Err(DatumError::LengthMismatch {
                degrees: degrees.len(),
                characters: characters.len(),
            });
        }
        if degrees.len() > MAX_GENERATORS {
            return Err(DatumError::TooManyGenerators(degrees.len()));
        }
        if ctx.order() % group.exponent() != 0 || ctx.order() % 2 != 0 {
            return Err(DatumError::RootOrder(ctx.order()));
        }
        let datum = QlsDatum {
            group,
            r0,
            degrees,
            characters,
            ctx,
        };
        let violations = datum.violations();
        if violations.is_empty() {
            Ok(datum)
        } else {
            Err(DatumError::Invalid(violations))
        }
    }

    fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n_root = self.ctx.order();
        let minus_one = n_root / 2;
        let n = self.degrees.len();
        for i in 0..n {
            let eval_i = self.characters[i].eval_exponent(&self.group, n_root);
            let e = eval_i(&self.degrees[i]);
            if e != minus_one {
                out.push(Violation::NotSymmetricType {
                    i,
                    value: self.ctx.zeta(e as i64).to_expression(),
                });
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let eval_j = self.characters[j].eval_exponent(&self.group, n_root);
                let eval_i = self.characters[i].eval_exponent(&self.group, n_root);
                let e = (eval_j(&self.degrees[i]) + eval_i(&self.degrees[j])) % n_root;
                if e != 0 && i < j {
                    out.push(Violation::CrossCondition {
                        i,
                        j,
                        value: self.ctx.zeta(e as i64).to_expression(),
                    });
                }
            }
        }
        // membership of V in the symmetric center of C(Γ, r_0):
        // r_0(g_i, -) = chi_i and r_0(-, g_i) = chi_i^{-1}, checked on group
        // generators (both sides are characters)
        for i in 0..n {
            let eval_i = self.characters[i].eval_exponent(&self.group, n_root);
            for t in 0..self.group.rank() {
                let e_t = self.group.generator(t);
                if self.r0.eval_exponent(&self.degrees[i], &e_t) != eval_i(&e_t) {
                    out.push(Violation::LeftCharacterMismatch { i, generator: t });
                }
                if (self.r0.eval_exponent(&e_t, &self.degrees[i]) + eval_i(&e_t)) % n_root != 0 {
                    out.push(Violation::RightCharacterMismatch { i, generator: t });
                }
            }
        }
        out
    }

    pub fn dim_v(&self) -> usize {
        self.degrees.len()
    }

    /// dim H = |Γ| · 2^n for the bosonization.
    pub fn dim_hopf(&self) -> u64 {
        self.group.order() << self.degrees.len()
    }

    /// ζ_N-exponent of χ_j(g_i), the braiding coefficient on x_i ⊗ x_j.
    pub fn braiding_exponent(&self, i: usize, j: usize) -> u64 {
        self.characters[j].eval_exponent(&self.group, self.ctx.order())(&self.degrees[i])
    }

    pub fn braiding_scalar(&self, i: usize, j: usize) -> Scalar {
        self.ctx.zeta(self.braiding_exponent(i, j) as i64)
    }

    /// ζ_N-exponent of χ_i(h).
    pub fn character_exponent(&self, i: usize, h: &GroupElement) -> u64 {
        self.characters[i].eval_exponent(&self.group, self.ctx.order())(h)
    }

    /// The braiding c(x_i ⊗ x_j) = χ_j(g_i) x_j ⊗ x_i as an n²×n² matrix on
    /// the basis {x_i ⊗ x_j}, row-major index i*n + j.
    pub fn braiding_matrix(&self) -> Matrix {
        let n = self.dim_v();
        let mut m = linalg::zeros(&self.ctx, n * n, n * n);
        for i in 0..n {
            for j in 0..n {
                m[j * n + i][i * n + j] = self.braiding_scalar(i, j);
            }
        }
        m
    }

    /// Product of the degrees over a subset bitmask: g_P = ∏_{i∈P} g_i.
    pub fn degree_of_subset(&self, mask: u32) -> GroupElement {
        let mut acc = self.group.identity();
        for (i, d) in self.degrees.iter().enumerate() {
            if mask & (1 << i) != 0 {
                acc = self.group.mul(&acc, d);
            }
        }
        acc
    }
}

/// A bilinear form V ⊗ V → k as an n×n scalar matrix, entry (i, j) being the
/// value on x_i ⊗ x_j.
#[derive(Clone, PartialEq, Eq)]
pub struct BilinearForm {
    pub matrix: Matrix,
}

impl fmt::Debug for BilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BilinearForm({:?})", self.matrix)
    }
}

impl BilinearForm {
    pub fn zero(ctx: &Arc<CyclotomicContext>, n: usize) -> Self {
        BilinearForm {
            matrix: linalg::zeros(ctx, n, n),
        }
    }

    pub fn new(datum: &QlsDatum, matrix: Matrix) -> Result<Self, DatumError> {
        let n = datum.dim_v();
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(DatumError::FormSize {
                expected: n,
                got: matrix.len(),
                got2: matrix.first().map(|r| r.len()).unwrap_or(0),
            });
        }
        Ok(BilinearForm { matrix })
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn value(&self, i: usize, j: usize) -> &Scalar {
        &self.matrix[i][j]
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    pub fn is_alternating(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| {
            (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i].neg_ref())
        })
    }

    /// Splits into (symmetric, alternating) halves: (M ± Mᵀ)/2.
    pub fn decompose(&self, ctx: &Arc<CyclotomicContext>) -> (BilinearForm, BilinearForm) {
        let n = self.dim();
        let half = ctx
            .from_int(1)
            .arith(&ctx.from_int(2), crate::scalar::ArithOp::Div)
            .unwrap();
        let mut sym = linalg::zeros(ctx, n, n);
        let mut alt = linalg::zeros(ctx, n, n);
        for i in 0..n {
            for j in 0..n {
                sym[i][j] = (&self.matrix[i][j] + &self.matrix[j][i]) * &half;
                alt[i][j] = (&self.matrix[i][j] - &self.matrix[j][i]) * &half;
            }
        }
        (BilinearForm { matrix: sym }, BilinearForm { matrix: alt })
    }

    pub fn add(&self, other: &BilinearForm) -> BilinearForm {
        BilinearForm {
            matrix: linalg::add(&self.matrix, &other.matrix),
        }
    }

    pub fn scale(&self, s: &Scalar) -> BilinearForm {
        BilinearForm {
            matrix: linalg::scale(&self.matrix, s),
        }
    }

    /// Checks the Yetter-Drinfeld morphism conditions: entries vanish where
    /// χ_i χ_j ≠ ε (module condition) or g_i g_j ≠ 1 (comodule condition).
    /// Returns the violating index pairs.
    pub fn yd_violations(&self, datum: &QlsDatum) -> Vec<(usize, usize)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if self.matrix[i][j].is_zero() {
                    continue;
                }
                let chi_prod = datum.characters[i].mul(&datum.group, &datum.characters[j]);
                let deg_prod = datum.group.mul(&datum.degrees[i], &datum.degrees[j]);
                if !chi_prod.is_trivial() || !datum.group.is_identity(&deg_prod) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_yd_morphism(&self, datum: &QlsDatum) -> bool {
        self.yd_violations(datum).is_empty()
    }

    /// Rank over ℚ(ζ_N).
    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix)
    }
}

/// Index pairs (i, j) on which a Yetter-Drinfeld morphism form may be
/// nonzero; these span the space of YD forms.
pub fn yd_support(datum: &QlsDatum) -> Vec<(usize, usize)> {
    let n = datum.dim_v();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let chi_prod = datum.characters[i].mul(&datum.group, &datum.characters[j]);
            let deg_prod = datum.group.mul(&datum.degrees[i], &datum.degrees[j]);
            if chi_prod.is_trivial() && datum.group.is_identity(&deg_prod) {
                out.push((i, j));
            }
        }
    }
    out
}
