//! Small exact linear algebra helpers over Q and Z.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

/// Solves `a * x = b` over Q, where `a` is given by rows. Returns one solution
/// (free variables set to zero) or `None` if the system is inconsistent.
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut r = r.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for c in col..=cols {
            m[row][c] = &m[row][c] * &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let t = &f * &m[row][c];
                    m[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Smith normal form `u * a * v = s` of an integer matrix.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: Vec<Vec<i128>>,
    pub v: Vec<Vec<i128>>,
    /// Diagonal entries, all positive, each dividing the next.
    pub diag: Vec<i128>,
}

pub fn smith(a: &[Vec<i128>], cols: usize) -> Smith {
    let rows = a.len();
    let mut s: Vec<Vec<i128>> = a.to_vec();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the remaining block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if s[i][j] != 0 && best.map_or(true, |(bi, bj)| s[i][j].abs() < s[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap(t, pi);
        u.swap(t, pi);
        for r in s.iter_mut() {
            r.swap(t, pj);
        }
        for r in v.iter_mut() {
            r.swap(t, pj);
        }
        let mut clean = true;
        for i in t + 1..rows {
            let q = Integer::div_floor(&s[i][t], &s[t][t]);
            if q != 0 {
                row_axpy(&mut s, i, t, -q);
                row_axpy(&mut u, i, t, -q);
            }
            if s[i][t] != 0 {
                clean = false;
            }
        }
        for j in t + 1..cols {
            let q = Integer::div_floor(&s[t][j], &s[t][t]);
            if q != 0 {
                col_axpy(&mut s, j, t, -q);
                col_axpy(&mut v, j, t, -q);
            }
            if s[t][j] != 0 {
                clean = false;
            }
        }
        if !clean {
            continue;
        }
        // divisibility of the rest of the block
        let p = s[t][t];
        let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| s[i][j] % p != 0);
        if let Some((i, _)) = bad {
            row_axpy(&mut s, t, i, 1);
            row_axpy(&mut u, t, i, 1);
            continue;
        }
        if p < 0 {
            for c in 0..cols {
                s[t][c] = -s[t][c];
            }
            for c in 0..rows {
                u[t][c] = -u[t][c];
            }
        }
        t += 1;
    }
    let diag = (0..t).map(|i| s[i][i]).collect();
    Smith { u, v, diag }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect()
}

// row[dst] += k * row[src]
fn row_axpy(m: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    let src_row = m[src].clone();
    for (d, s) in m[dst].iter_mut().zip(src_row) {
        *d += k * s;
    }
}

// col[dst] += k * col[src]
fn col_axpy(m: &mut [Vec<i128>], dst: usize, src: usize, k: i128) {
    for r in m.iter_mut() {
        r[dst] += k * r[src];
    }
}

pub fn mat_vec(m: &[Vec<i128>], x: &[i128]) -> Vec<i128> {
    m.iter().map(|r| r.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Leading principal minors of an integer matrix (fraction-free Bareiss).
pub fn leading_minors(a: &[Vec<i128>]) -> Vec<i128> {
    let n = a.len();
    let mut m = a.to_vec();
    let mut out = Vec::with_capacity(n);
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            // a zero pivot means this minor vanishes; later minors need pivoting,
            // which the callers never require (they stop at the first non-positive one)
            out.push(0);
            return out;
        }
        out.push(m[k][k]);
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    out
}

