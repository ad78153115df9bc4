//! Smith normal form of integer matrices, with unimodular transforms.
//!
//! Used to put finite abelian group presentations into invariant-factor form
//! and to compute quotients and subgroup presentations.  Matrices are dense
//! `Vec<Vec<i64>>`, row-major; sizes stay tiny at desk scale.

/// Result of `u * a * v = d` with `u`, `v` unimodular and `d` in Smith form
/// (diagonal, each entry dividing the next, nonnegative).
#[derive(Debug, Clone)]
pub struct Snf {
    pub d: Vec<Vec<i64>>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = vec![vec![0i64; cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..cols {
                out[i][j] = out[i][j]
                    .checked_add(a[i][k].checked_mul(b[k][j]).expect("snf overflow"))
                    .expect("snf overflow");
            }
        }
    }
    out
}

/// Smith normal form by row/column reduction.  `a` may be empty or ragged-free
/// rectangular; overflow panics rather than wrapping.
pub fn smith_normal_form(a: &[Vec<i64>]) -> Snf {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut d: Vec<Vec<i64>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let add_row = |d: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, src: usize, dst: usize, f: i64| {
        for j in 0..d[0].len() {
            d[dst][j] = d[dst][j].checked_add(f.checked_mul(d[src][j]).unwrap()).unwrap();
        }
        for j in 0..u[0].len() {
            u[dst][j] = u[dst][j].checked_add(f.checked_mul(u[src][j]).unwrap()).unwrap();
        }
    };
    let add_col = |d: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, src: usize, dst: usize, f: i64| {
        for row in d.iter_mut() {
            row[dst] = row[dst].checked_add(f.checked_mul(row[src]).unwrap()).unwrap();
        }
        for row in v.iter_mut() {
            row[dst] = row[dst].checked_add(f.checked_mul(row[src]).unwrap()).unwrap();
        }
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // find a pivot: smallest nonzero absolute value in d[t.., t..]
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if d[i][j] != 0
                    && pivot.map(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs()).unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        if pj != t {
            for row in d.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
        }
        // clear row and column t
        let mut dirty = true;
        while dirty {
            dirty = false;
            for i in (t + 1)..rows {
                if d[i][t] != 0 {
                    let f = -(d[i][t] / d[t][t]);
                    add_row(&mut d, &mut u, t, i, f);
                    if d[i][t] != 0 {
                        d.swap(t, i);
                        u.swap(t, i);
                        dirty = true;
                    }
                }
            }
            for j in (t + 1)..cols {
                if d[t][j] != 0 {
                    let f = -(d[t][j] / d[t][t]);
                    add_col(&mut d, &mut v, t, j, f);
                    if d[t][j] != 0 {
                        for row in d.iter_mut() {
                            row.swap(t, j);
                        }
                        for row in v.iter_mut() {
                            row.swap(t, j);
                        }
                        dirty = true;
                    }
                }
            }
        }
        // enforce divisibility of the remaining block by d[t][t]
        let mut fixed = false;
        'outer: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if d[i][j] % d[t][t] != 0 {
                    add_row(&mut d, &mut u, i, t, 1);
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue; // redo the same t with the disturbed row
        }
        if d[t][t] < 0 {
            for j in 0..cols {
                d[t][j] = -d[t][j];
            }
            for j in 0..rows {
                u[t][j] = -u[t][j];
            }
        }
        t += 1;
    }
    Snf { d, u, v }
}

/// Diagonal entries of the Smith form (length min(rows, cols)).
pub fn diagonal(snf: &Snf) -> Vec<i64> {
    let rows = snf.d.len();
    let cols = if rows > 0 { snf.d[0].len() } else { 0 };
    (0..rows.min(cols)).map(|i| snf.d[i][i]).collect()
}

/// A basis of the integer kernel {x : a x = 0}, as column vectors.
pub fn integer_kernel(a: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    if cols == 0 {
        return Vec::new();
    }
    if rows == 0 {
        return (0..cols)
            .map(|j| (0..cols).map(|i| i64::from(i == j)).collect())
            .collect();
    }
    let snf = smith_normal_form(a);
    let diag = diagonal(&snf);
    let rank = diag.iter().filter(|&&x| x != 0).count();
    // kernel of d is spanned by e_j for j >= rank; kernel of a = v * that
    (rank..cols)
        .map(|j| (0..cols).map(|i| snf.v[i][j]).collect())
        .collect()
}

pub fn mat_inverse_unimodular(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    // inverse of a unimodular integer matrix via adjugate-free elimination:
    // augment with identity and run integer Gauss-Jordan using that the
    // matrix is invertible over the integers.
    let n = m.len();
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let mut inv = identity(n);
    for col in 0..n {
        // make a[col][col] == ±1 by Euclidean row operations
        loop {
            let mut best: Option<usize> = None;
            for i in col..n {
                if a[i][col] != 0
                    && best.map(|b| a[i][col].abs() < a[b][col].abs()).unwrap_or(true)
                {
                    best = Some(i);
                }
            }
            let b = best.expect("matrix not invertible");
            a.swap(col, b);
            inv.swap(col, b);
            let mut changed = false;
            for i in (col + 1)..n {
                if a[i][col] != 0 {
                    let f = -(a[i][col] / a[col][col]);
                    for j in 0..n {
                        a[i][j] += f * a[col][j];
                        inv[i][j] += f * inv[col][j];
                    }
                    if a[i][col] != 0 {
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        assert!(a[col][col].abs() == 1, "matrix not unimodular");
        if a[col][col] == -1 {
            for j in 0..n {
                a[col][j] = -a[col][j];
                inv[col][j] = -inv[col][j];
            }
        }
        for i in 0..n {
            if i != col && a[i][col] != 0 {
                let f = -a[i][col];
                for j in 0..n {
                    a[i][j] += f * a[col][j];
                    inv[i][j] += f * inv[col][j];
                }
            }
        }
    }
    inv
}
