//! Exact arithmetic in a fixed cyclotomic field ℚ(ζ_N).
//!
//! All scalar values in the library live in a single [`CyclotomicContext`],
//! which fixes the root order `N` and stores elements as rational coordinate
//! vectors in the power basis `1, ζ, …, ζ^{φ(N)-1}` of ℚ\[x\]/(Φ_N).  Reduction
//! modulo the cyclotomic polynomial Φ_N makes the representation canonical, so
//! equality is plain coefficient comparison and no tolerances exist anywhere.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero scalar")]
    DivisionByZero,
    #[error("scalars belong to different cyclotomic contexts (N = {0} vs N = {1})")]
    ContextMismatch(u64, u64),
    #[error("scalar expression parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

/// Euler's totient, by trial-division factorization.
pub fn euler_phi(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut ds = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            ds.push(d);
            if d != n / d {
                ds.push(n / d);
            }
        }
        d += 1;
    }
    ds.sort_unstable();
    ds
}

/// Exact division of integer polynomials, `num / den` with `den` monic.
/// Coefficient vectors are little-endian.  Panics if the division is inexact,
/// which cannot happen for products of cyclotomic polynomials.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false));
    let mut rem: Vec<BigInt> = num.to_vec();
    let dn = den.len() - 1;
    if rem.len() < den.len() {
        assert!(rem.iter().all(|c| c.is_zero()));
        return vec![BigInt::zero()];
    }
    let qn = rem.len() - den.len();
    let mut quot = vec![BigInt::zero(); qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dn].clone();
        if !c.is_zero() {
            for (i, dc) in den.iter().enumerate() {
                let t = &c * dc;
                rem[k + i] -= t;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

/// The N-th cyclotomic polynomial Φ_N as a little-endian integer coefficient
/// vector, computed as (x^N - 1) / ∏_{d|N, d<N} Φ_d.
pub fn cyclotomic_polynomial(n: u64) -> Vec<BigInt> {
    assert!(n >= 1);
    let mut cache: Vec<(u64, Vec<BigInt>)> = Vec::new();
    for d in divisors(n) {
        let mut num = vec![BigInt::zero(); d as usize + 1];
        num[0] = -BigInt::one();
        num[d as usize] = BigInt::one();
        let mut quot = num;
        for (e, phi_e) in &cache {
            if d % e == 0 {
                quot = poly_div_exact(&quot, phi_e);
            }
        }
        cache.push((d, quot));
    }
    cache.pop().unwrap().1
}

/// Fixes the ground field ℚ(ζ_N) for a session.  Immutable after
/// construction; all operations are pure and thread-safe.
pub struct CyclotomicContext {
    n: u64,
    phi: usize,
    /// Row `j` is the power-basis expansion of x^{φ+j} modulo Φ_N.
    reduction: Vec<Vec<BigRational>>,
    /// Power-basis coordinates of ζ^k for k in 0..N.
    zeta_pows: Vec<Vec<BigRational>>,
}

impl fmt::Debug for CyclotomicContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclotomicContext(N = {})", self.n)
    }
}

impl CyclotomicContext {
    pub fn new(n: u64) -> Arc<Self> {
        assert!(n >= 1, "root order must be positive");
        let poly = cyclotomic_polynomial(n);
        let phi = poly.len() - 1;
        // x^phi = -(c_0 + c_1 x + ... + c_{phi-1} x^{phi-1})
        let base: Vec<BigRational> = poly[..phi]
            .iter()
            .map(|c| BigRational::from_integer(-c.clone()))
            .collect();
        let mut reduction = vec![base];
        for _ in 1..phi.max(1) {
            let prev = reduction.last().unwrap().clone();
            // multiply by x, then substitute x^phi
            let mut next = vec![BigRational::zero(); phi];
            let carry = prev[phi - 1].clone();
            for i in 1..phi {
                next[i] = prev[i - 1].clone();
            }
            if !carry.is_zero() {
                for (i, r) in reduction[0].iter().enumerate() {
                    next[i] += &carry * r;
                }
            }
            reduction.push(next);
        }
        let mut zeta_pows = Vec::with_capacity(n as usize);
        let mut cur = vec![BigRational::zero(); phi];
        if phi > 0 {
            cur[0] = BigRational::one();
        }
        for _ in 0..n {
            zeta_pows.push(cur.clone());
            // multiply by zeta
            let mut next = vec![BigRational::zero(); phi];
            let carry = cur[phi - 1].clone();
            for i in 1..phi {
                next[i] = cur[i - 1].clone();
            }
            if !carry.is_zero() {
                for (i, r) in reduction[0].iter().enumerate() {
                    next[i] += &carry * r;
                }
            }
            cur = next;
        }
        Arc::new(CyclotomicContext {
            n,
            phi,
            reduction,
            zeta_pows,
        })
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn zero(self: &Arc<Self>) -> Scalar {
        Scalar {
            ctx: Arc::clone(self),
            coeffs: vec![BigRational::zero(); self.phi],
        }
    }

    pub fn one(self: &Arc<Self>) -> Scalar {
        self.from_rational(BigRational::one())
    }

    pub fn from_int(self: &Arc<Self>, v: i64) -> Scalar {
        self.from_rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(self: &Arc<Self>, v: BigRational) -> Scalar {
        let mut coeffs = vec![BigRational::zero(); self.phi];
        if self.phi > 0 {
            coeffs[0] = v;
        }
        Scalar {
            ctx: Arc::clone(self),
            coeffs,
        }
    }

    /// ζ_N^k, with k taken modulo N.
    pub fn zeta(self: &Arc<Self>, k: i64) -> Scalar {
        let k = k.rem_euclid(self.n as i64) as usize;
        Scalar {
            ctx: Arc::clone(self),
            coeffs: self.zeta_pows[k].clone(),
        }
    }

    fn reduce(&self, mut raw: Vec<BigRational>) -> Vec<BigRational> {
        // raw has degree at most 2*phi - 2
        for d in (self.phi..raw.len()).rev() {
            let c = std::mem::replace(&mut raw[d], BigRational::zero());
            if !c.is_zero() {
                let row = &self.reduction[d - self.phi];
                for i in 0..self.phi {
                    let t = &c * &row[i];
                    raw[i] += t;
                }
            }
        }
        raw.truncate(self.phi);
        raw
    }
}

/// One element of ℚ(ζ_N), in canonical power-basis form.
#[derive(Clone)]
pub struct Scalar {
    ctx: Arc<CyclotomicContext>,
    coeffs: Vec<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl Scalar {
    pub fn context(&self) -> &Arc<CyclotomicContext> {
        &self.ctx
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.ctx.phi > 0
            && self.coeffs[0].is_one()
            && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    fn same_ctx(&self, other: &Scalar) -> Result<(), ScalarError> {
        if self.ctx.n != other.ctx.n {
            return Err(ScalarError::ContextMismatch(self.ctx.n, other.ctx.n));
        }
        Ok(())
    }

    /// The four field operations behind one checked entry point.
    pub fn arith(&self, other: &Scalar, op: ArithOp) -> Result<Scalar, ScalarError> {
        self.same_ctx(other)?;
        match op {
            ArithOp::Add => Ok(self.add_ref(other)),
            ArithOp::Sub => Ok(self.sub_ref(other)),
            ArithOp::Mul => Ok(self.mul_ref(other)),
            ArithOp::Div => {
                let inv = other.inverse()?;
                Ok(self.mul_ref(&inv))
            }
        }
    }

    fn add_ref(&self, other: &Scalar) -> Scalar {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        }
    }

    fn sub_ref(&self, other: &Scalar) -> Scalar {
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        }
    }

    fn mul_ref(&self, other: &Scalar) -> Scalar {
        let phi = self.ctx.phi;
        if phi == 0 {
            return self.clone();
        }
        let mut raw = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.ctx.reduce(raw),
        }
    }

    pub fn neg_ref(&self) -> Scalar {
        Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in ℚ\[x\]
    /// against Φ_N; exists for every nonzero element since Φ_N is irreducible.
    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        let phi = self.ctx.phi;
        // r0 = Phi_N, r1 = self; track s-coefficients for r1 only.
        let modulus: Vec<BigRational> = {
            let poly = cyclotomic_polynomial(self.ctx.n);
            poly.iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect()
        };
        let trim = |v: &mut Vec<BigRational>| {
            while v.len() > 1 && v.last().unwrap().is_zero() {
                v.pop();
            }
        };
        let mut r0 = modulus;
        let mut r1 = self.coeffs.clone();
        trim(&mut r1);
        let mut t0: Vec<BigRational> = vec![BigRational::zero()];
        let mut t1: Vec<BigRational> = vec![BigRational::one()];
        while !(r1.len() == 1 && r1[0].is_zero()) {
            // quotient of r0 by r1
            let mut q = vec![BigRational::zero(); r0.len().saturating_sub(r1.len()) + 1];
            let mut rem = r0.clone();
            let lead = r1.last().unwrap().clone();
            for k in (0..q.len()).rev() {
                if k + r1.len() - 1 >= rem.len() {
                    continue;
                }
                let c = &rem[k + r1.len() - 1] / &lead;
                if !c.is_zero() {
                    for (i, rc) in r1.iter().enumerate() {
                        let t = &c * rc;
                        rem[k + i] -= t;
                    }
                }
                q[k] = c;
            }
            trim(&mut rem);
            // t2 = t0 - q * t1
            let mut qt = vec![BigRational::zero(); q.len() + t1.len() - 1];
            for (i, a) in q.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (j, b) in t1.iter().enumerate() {
                    qt[i + j] += a * b;
                }
            }
            let mut t2 = vec![BigRational::zero(); t0.len().max(qt.len())];
            for (i, c) in t0.iter().enumerate() {
                t2[i] += c;
            }
            for (i, c) in qt.iter().enumerate() {
                t2[i] -= c;
            }
            trim(&mut t2);
            r0 = r1;
            r1 = rem;
            t0 = t1;
            t1 = t2;
        }
        // r0 is the gcd, a nonzero constant
        let g = r0[0].clone();
        assert!(r0.len() == 1 && !g.is_zero(), "cyclotomic polynomial must be coprime to nonzero elements");
        let mut coeffs = vec![BigRational::zero(); phi];
        for (i, c) in t0.iter().enumerate() {
            assert!(i < phi);
            coeffs[i] = c / &g;
        }
        Ok(Scalar {
            ctx: Arc::clone(&self.ctx),
            coeffs,
        })
    }

    pub fn pow(&self, e: i64) -> Result<Scalar, ScalarError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = self.ctx.one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&b);
            }
            b = b.mul_ref(&b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// If this scalar equals ζ_N^k for some k, returns k.
    pub fn as_root_of_unity(&self) -> Option<u64> {
        (0..self.ctx.n).find(|&k| self.coeffs == self.ctx.zeta_pows[k as usize])
    }

    /// Canonical textual form, parseable by [`parse_expression`].
    pub fn to_expression(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let coeff = if mag.is_one() && k > 0 {
                String::new()
            } else if mag.denom().is_one() {
                format!("{}", mag.numer())
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            let atom = match k {
                0 => coeff,
                1 if coeff.is_empty() => "z".to_string(),
                1 => format!("{coeff}*z"),
                _ if coeff.is_empty() => format!("z^{k}"),
                _ => format!("{coeff}*z^{k}"),
            };
            if parts.is_empty() {
                parts.push(if c.is_negative() {
                    format!("-{atom}")
                } else {
                    atom
                });
            } else if c.is_negative() {
                parts.push(format!("- {atom}"));
            } else {
                parts.push(format!("+ {atom}"));
            }
        }
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.n == other.ctx.n && self.coeffs == other.coeffs
    }
}

impl Eq for Scalar {}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({})", self.to_expression())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_expression())
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl std::ops::$trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.same_ctx(rhs).expect("scalar context mismatch");
                self.$inner(rhs)
            }
        }
        impl std::ops::$trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                self.$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, add_ref);
scalar_binop!(Sub, sub, sub_ref);
scalar_binop!(Mul, mul, mul_ref);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl std::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

// ---------------------------------------------------------------------------
// Expression parser: integers, rationals "p/q", powers "z^k", combined with
// +, -, * and parentheses, evaluated in a given context.
// ---------------------------------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ctx: Arc<CyclotomicContext>,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ScalarError {
        ScalarError::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc + t;
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    acc = acc - t;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Scalar, ScalarError> {
        let mut acc = self.factor()?;
        while let Some(b'*') = self.peek() {
            self.pos += 1;
            let f = self.factor()?;
            acc = acc * f;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Scalar, ScalarError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.factor()?)
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'z') => {
                self.pos += 1;
                let k = if self.peek() == Some(b'^') {
                    self.pos += 1;
                    self.integer()?
                } else {
                    1
                };
                Ok(self.ctx.zeta(k))
            }
            Some(c) if c.is_ascii_digit() => {
                let p = self.integer()?;
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let q = self.integer()?;
                    if q == 0 {
                        return Err(self.error("zero denominator"));
                    }
                    Ok(self
                        .ctx
                        .from_rational(BigRational::new(BigInt::from(p), BigInt::from(q))))
                } else {
                    Ok(self.ctx.from_int(p))
                }
            }
            Some(c) => Err(self.error(format!("unexpected character '{}'", c as char))),
            None => Err(self.error("unexpected end of expression")),
        }
    }

    fn integer(&mut self) -> Result<i64, ScalarError> {
        self.skip_ws();
        let neg = if self.src.get(self.pos) == Some(&b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let v: i64 = text
            .parse()
            .map_err(|_| self.error("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }
}

/// Parses a scalar expression such as `1/2 + 3*z^2 - z` relative to `ctx`.
pub fn parse_expression(ctx: &Arc<CyclotomicContext>, text: &str) -> Result<Scalar, ScalarError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ctx: Arc::clone(ctx),
    };
    let value = p.expr()?;
    if p.peek().is_some() {
        return Err(p.error("trailing input"));
    }
    Ok(value)
}

/// Least common multiple of two positive integers.
pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b).max(1);
    }
    a / gcd(a, b) * b
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta4_squared_is_minus_one() {
        let ctx = CyclotomicContext::new(4);
        let i = ctx.zeta(1);
        assert_eq!(&i * &i, ctx.from_int(-1));
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let ctx = CyclotomicContext::new(3);
        let s = ctx.one() + ctx.zeta(1) + ctx.zeta(2);
        assert!(s.is_zero());
    }

    #[test]
    fn zeta8_self_division_is_one() {
        let ctx = CyclotomicContext::new(8);
        let z = ctx.zeta(1);
        assert_eq!(z.arith(&z, ArithOp::Div).unwrap(), ctx.one());
    }

    #[test]
    fn root_of_unity_examples() {
        let c4 = CyclotomicContext::new(4);
        assert_eq!(c4.zeta(2), c4.from_int(-1));
        let c6 = CyclotomicContext::new(6);
        assert_eq!(c6.zeta(3), c6.from_int(-1));
        let c8 = CyclotomicContext::new(8);
        assert_eq!(c8.zeta(1).pow(8).unwrap(), c8.one());
    }

    #[test]
    fn zeta_has_exact_order_n() {
        for n in [1u64, 2, 3, 4, 6, 8, 12, 15] {
            let ctx = CyclotomicContext::new(n);
            let z = ctx.zeta(1);
            let mut acc = ctx.one();
            for k in 1..=n {
                acc = acc * &z;
                if k < n {
                    assert_ne!(acc, ctx.one(), "zeta_{n} has premature order {k}");
                }
            }
            assert_eq!(acc, ctx.one());
        }
    }

    #[test]
    fn additive_exponent_law() {
        let ctx = CyclotomicContext::new(12);
        for a in 0..12 {
            for b in 0..12 {
                assert_eq!(ctx.zeta(a) * ctx.zeta(b), ctx.zeta(a + b));
            }
        }
    }

    #[test]
    fn division_by_zero_reported() {
        let ctx = CyclotomicContext::new(4);
        let err = ctx.one().arith(&ctx.zero(), ArithOp::Div).unwrap_err();
        assert_eq!(err, ScalarError::DivisionByZero);
    }

    #[test]
    fn context_mismatch_reported() {
        let a = CyclotomicContext::new(4).one();
        let b = CyclotomicContext::new(8).one();
        match a.arith(&b, ArithOp::Add) {
            Err(ScalarError::ContextMismatch(4, 8)) => {}
            other => panic!("expected mismatch, got {other:?}"),
        }
    }

    #[test]
    fn inverse_of_general_element() {
        let ctx = CyclotomicContext::new(8);
        // 1 + zeta + zeta^3, a unit like every nonzero element
        let a = ctx.one() + ctx.zeta(1) + ctx.zeta(3);
        let inv = a.inverse().unwrap();
        assert_eq!(a * inv, ctx.one());
    }

    #[test]
    fn dlog_recovers_powers() {
        let ctx = CyclotomicContext::new(12);
        for k in 0..12 {
            assert_eq!(ctx.zeta(k).as_root_of_unity(), Some(k as u64));
        }
        assert_eq!((ctx.zeta(1) + ctx.one()).as_root_of_unity(), None);
    }

    #[test]
    fn expression_round_trip() {
        let ctx = CyclotomicContext::new(8);
        let samples = [
            ctx.zero(),
            ctx.one(),
            ctx.from_int(-7),
            ctx.zeta(3),
            ctx.from_rational(BigRational::new(BigInt::from(3), BigInt::from(4))) * ctx.zeta(2)
                - ctx.one(),
        ];
        for s in samples {
            let back = parse_expression(&ctx, &s.to_expression()).unwrap();
            assert_eq!(back, s);
        }
    }

    #[test]
    fn expression_parser_examples() {
        let ctx = CyclotomicContext::new(4);
        assert_eq!(parse_expression(&ctx, "z^2").unwrap(), ctx.from_int(-1));
        assert_eq!(
            parse_expression(&ctx, "1/2 + 1/2").unwrap(),
            ctx.one()
        );
        assert_eq!(
            parse_expression(&ctx, "2*z - z - z").unwrap(),
            ctx.zero()
        );
        assert_eq!(parse_expression(&ctx, "-(1 - 2)").unwrap(), ctx.one());
        assert!(parse_expression(&ctx, "1 +").is_err());
        assert!(parse_expression(&ctx, "q").is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_scalar(n: u64) -> impl Strategy<Value = Scalar> {
            let ctx = CyclotomicContext::new(n);
            proptest::collection::vec((-6i64..=6, 1i64..=4, 0i64..(n as i64)), 0..4).prop_map(
                move |terms| {
                    let mut acc = ctx.zero();
                    for (p, q, k) in terms {
                        let c = ctx
                            .from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)));
                        acc = acc + c * ctx.zeta(k);
                    }
                    acc
                },
            )
        }

        proptest! {
            #[test]
            fn field_axioms_hold_exactly(
                a in arb_scalar(12), b in arb_scalar(12), c in arb_scalar(12)
            ) {
                let ctx = a.context().clone();
                prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &a * &b + &a * &c);
                prop_assert_eq!(&a + &b, &b + &a);
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!(&a + &ctx.zero(), a.clone());
                prop_assert_eq!(&a * &ctx.one(), a.clone());
                if !b.is_zero() {
                    let q = a.arith(&b, ArithOp::Div).unwrap();
                    prop_assert_eq!(q * &b, a.clone());
                }
            }

            #[test]
            fn canonical_form_is_idempotent(a in arb_scalar(12)) {
                // re-running reduction on an already reduced vector is the identity
                let ctx = a.context().clone();
                let again = Scalar {
                    ctx: ctx.clone(),
                    coeffs: ctx.reduce(a.coeffs().to_vec()),
                };
                prop_assert_eq!(again, a);
            }
        }
    }
}
