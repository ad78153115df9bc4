//! Dense exact linear algebra over ℚ(ζ_N): rank, kernels, congruence normal
//! forms for alternating and rectangular pairings.

use crate::scalar::{CyclotomicContext, Scalar};
use std::sync::Arc;

pub type Matrix = Vec<Vec<Scalar>>;

pub fn zeros(ctx: &Arc<CyclotomicContext>, rows: usize, cols: usize) -> Matrix {
    vec![vec![ctx.zero(); cols]; rows]
}

pub fn identity(ctx: &Arc<CyclotomicContext>, n: usize) -> Matrix {
    let mut m = zeros(ctx, n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ctx.one();
    }
    m
}

pub fn transpose(m: &Matrix) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out: Matrix = Vec::with_capacity(rows);
    for i in 0..rows {
        let mut row = Vec::with_capacity(cols);
        for j in 0..cols {
            let mut acc: Option<Scalar> = None;
            for k in 0..inner {
                if a[i][k].is_zero() || b[k][j].is_zero() {
                    continue;
                }
                let t = &a[i][k] * &b[k][j];
                acc = Some(match acc {
                    None => t,
                    Some(s) => s + t,
                });
            }
            row.push(acc.unwrap_or_else(|| a[i][0].context().zero()));
        }
        out.push(row);
    }
    out
}

pub fn mat_eq(a: &Matrix, b: &Matrix) -> bool {
    a == b
}

pub fn scale(m: &Matrix, s: &Scalar) -> Matrix {
    m.iter()
        .map(|row| row.iter().map(|x| x * s).collect())
        .collect()
}

pub fn add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

/// Row echelon reduction in place; returns the rank and records pivot columns.
fn row_reduce(m: &mut Matrix) -> (usize, Vec<usize>) {
    let rows = m.len();
    let cols = if rows > 0 { m[0].len() } else { 0 };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inverse().unwrap();
        for j in 0..cols {
            m[r][j] = &m[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let t = &f * &m[r][j];
                    m[i][j] = &m[i][j] - &t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (r, pivots)
}

pub fn rank(m: &Matrix) -> usize {
    let mut copy = m.to_vec();
    row_reduce(&mut copy).0
}

/// Basis of the right kernel {v : M v = 0}, each vector normalized to leading
/// coefficient one at its lowest nonzero index; deterministic.
pub fn right_kernel(ctx: &Arc<CyclotomicContext>, m: &Matrix) -> Vec<Vec<Scalar>> {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    let mut red = m.to_vec();
    let (_, pivots) = row_reduce(&mut red);
    let mut basis = Vec::new();
    let pivot_set: Vec<bool> = {
        let mut v = vec![false; cols];
        for &p in &pivots {
            v[p] = true;
        }
        v
    };
    for free in 0..cols {
        if pivot_set[free] {
            continue;
        }
        let mut vec_out = vec![ctx.zero(); cols];
        vec_out[free] = ctx.one();
        for (r, &p) in pivots.iter().enumerate() {
            vec_out[p] = -&red[r][free];
        }
        basis.push(vec_out);
    }
    basis
}

/// Left kernel {v : v^T M = 0}.
pub fn left_kernel(ctx: &Arc<CyclotomicContext>, m: &Matrix) -> Vec<Vec<Scalar>> {
    right_kernel(ctx, &transpose(m))
}

pub fn invert(ctx: &Arc<CyclotomicContext>, m: &Matrix) -> Option<Matrix> {
    let n = m.len();
    let mut aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { ctx.one() } else { ctx.zero() });
            }
            r
        })
        .collect();
    let (_, pivots) = row_reduce(&mut aug);
    // invertible iff the first n pivots land in the left block
    if pivots.iter().filter(|&&c| c < n).count() < n {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Whether the span of `a`'s rows equals the span of `b`'s rows, decided by
/// rank arithmetic.
pub fn row_span_eq(a: &Matrix, b: &Matrix) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    if ra != rb {
        return false;
    }
    let mut stacked = a.to_vec();
    stacked.extend(b.iter().cloned());
    rank(&stacked) == ra
}

/// For an alternating matrix A, finds invertible T with T^t A T in the
/// standard form J ⊕ 0, where J is a direct sum of rank/2 blocks
/// [[0, 1], [-1, 0]].  Returns (T, rank).
pub fn alternating_normal_form(ctx: &Arc<CyclotomicContext>, a: &Matrix) -> (Matrix, usize) {
    let n = a.len();
    let mut basis = identity(ctx, n); // columns are current basis vectors
    let form = |basis: &Matrix, i: usize, j: usize, a: &Matrix, ctx: &Arc<CyclotomicContext>| {
        // value of A on basis columns i, j
        let mut acc = ctx.zero();
        for r in 0..n {
            if basis[r][i].is_zero() {
                continue;
            }
            for c in 0..n {
                if basis[c][j].is_zero() || a[r][c].is_zero() {
                    continue;
                }
                acc = acc + &basis[r][i] * &a[r][c] * &basis[c][j];
            }
        }
        acc
    };
    let mut placed = 0; // basis columns already fixed into symplectic pairs
    loop {
        // find a pair (i, j) among unplaced columns with nonzero pairing
        let mut found = None;
        'search: for i in placed..n {
            for j in (i + 1)..n {
                if !form(&basis, i, j, a, ctx).is_zero() {
                    found = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((i, j)) = found else { break };
        // move them to the front of the unplaced block
        for r in 0..n {
            basis[r].swap(placed, i);
        }
        let j = if j == placed { i } else { j };
        for r in 0..n {
            basis[r].swap(placed + 1, j);
        }
        // normalize the pairing to 1
        let v = form(&basis, placed, placed + 1, a, ctx);
        let inv = v.inverse().unwrap();
        for r in 0..n {
            basis[r][placed + 1] = &basis[r][placed + 1] * &inv;
        }
        // clear the pairings of the remaining columns against this pair:
        // with A(u, w) = 1, x = A(u, c), y = A(w, c), the projection is
        // c + y*u - x*w
        for c in (placed + 2)..n {
            let x = form(&basis, placed, c, a, ctx);
            let y = form(&basis, placed + 1, c, a, ctx);
            for r in 0..n {
                let t1 = &basis[r][placed] * &y;
                let t2 = &basis[r][placed + 1] * &x;
                basis[r][c] = &basis[r][c] + &t1 - &t2;
            }
        }
        placed += 2;
    }
    (basis, placed)
}

/// For a rectangular matrix B, finds invertible P (rows) and Q (cols) with
/// P^t B Q = [[I_r, 0], [0, 0]].  Returns (P, Q, r).
pub fn rank_normal_form(ctx: &Arc<CyclotomicContext>, b: &Matrix) -> (Matrix, Matrix, usize) {
    let rows = b.len();
    let cols = if rows > 0 { b[0].len() } else { 0 };
    let mut p = identity(ctx, rows);
    let mut q = identity(ctx, cols);
    let mut work = b.to_vec();
    let mut r = 0;
    while r < rows.min(cols) {
        // find pivot in work[r.., r..]
        let mut piv = None;
        'p: for i in r..rows {
            for j in r..cols {
                if !work[i][j].is_zero() {
                    piv = Some((i, j));
                    break 'p;
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        work.swap(r, pi);
        p.swap(r, pi);
        for row in work.iter_mut() {
            row.swap(r, pj);
        }
        for row in q.iter_mut() {
            row.swap(r, pj);
        }
        let inv = work[r][r].inverse().unwrap();
        for j in 0..cols {
            work[r][j] = &work[r][j] * &inv;
        }
        for j in 0..rows {
            p[r][j] = &p[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !work[i][r].is_zero() {
                let f = work[i][r].clone();
                for j in 0..cols {
                    let t = &f * &work[r][j];
                    work[i][j] = &work[i][j] - &t;
                }
                for j in 0..rows {
                    let t = &f * &p[r][j];
                    p[i][j] = &p[i][j] - &t;
                }
            }
        }
        for j in 0..cols {
            if j != r && !work[r][j].is_zero() {
                let f = work[r][j].clone();
                for i in 0..rows {
                    let t = &f * &work[i][r];
                    work[i][j] = &work[i][j] - &t;
                }
                for i in 0..cols {
                    let t = &f * &q[i][r];
                    q[i][j] = &q[i][j] - &t;
                }
            }
        }
        r += 1;
    }
    // here P_rows * B * Q = normal form with P applied as row transforms;
    // convert to the stated P^t B Q convention
    (transpose(&p), q, r)
}
