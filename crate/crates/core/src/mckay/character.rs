//! Character tables by Dixon's method: common eigenvectors of the class
//! matrices over F_p, lifted to Q(zeta_N) through eigenvalue multiplicities
//! and checked exactly afterwards.

use crate::cyclotomic::{root_of_unity, CycloNumber};
use crate::error::{Error, Result};
use crate::matgroup::GroupTable;

#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub order: usize,
    pub classes: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
    /// `chars[i][j]` is the value of the i-th character on class j.
    pub chars: Vec<Vec<CycloNumber>>,
    pub exponent: u64,
}

impl CharacterTable {
    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.chars
            .iter()
            .map(|row| row[0].to_rational().and_then(|q| q.to_integer().try_into().ok()).unwrap_or(0))
            .collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }

    /// sum_j |C_j| chi_a(g_j) conj(chi_b(g_j)) = |G| delta_ab, exactly.
    pub fn rows_orthogonal(&self) -> bool {
        let sizes = self.class_sizes();
        let n = CycloNumber::from_int(self.order as i64);
        (0..self.len()).all(|a| {
            (0..self.len()).all(|b| {
                let s = (0..sizes.len()).fold(CycloNumber::zero(), |acc, j| {
                    acc.add(&self.chars[a][j].mul(&self.chars[b][j].conj()).mul(&CycloNumber::from_int(sizes[j] as i64)))
                });
                if a == b {
                    s == n
                } else {
                    s.is_zero()
                }
            })
        })
    }

    /// sum_chi chi(g_j) conj(chi(g_k)) = |C_G(g_j)| delta_jk, exactly.
    pub fn columns_orthogonal(&self) -> bool {
        let sizes = self.class_sizes();
        let r = sizes.len();
        (0..r).all(|j| {
            (0..r).all(|k| {
                let s = self.chars.iter().fold(CycloNumber::zero(), |acc, row| acc.add(&row[j].mul(&row[k].conj())));
                if j == k {
                    s == CycloNumber::from_int((self.order / sizes[j]) as i64)
                } else {
                    s.is_zero()
                }
            })
        })
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut a: u64, mut k: u64, p: u64) -> u64 {
    let mut r = 1;
    a %= p;
    while k > 0 {
        if k & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        k >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// Smallest prime p = 1 mod m with p > bound.
fn choose_prime(m: u64, bound: u64) -> u64 {
    let mut p = (bound / m) * m + 1;
    while p <= bound || !is_prime(p) {
        p += m;
    }
    p
}

fn primitive_root(p: u64) -> u64 {
    let mut factors = Vec::new();
    let mut x = p - 1;
    let mut d = 2;
    while d * d <= x {
        if x % d == 0 {
            factors.push(d);
            while x % d == 0 {
                x /= d;
            }
        }
        d += 1;
    }
    if x > 1 {
        factors.push(x);
    }
    (2..p).find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1)).expect("prime has a primitive root")
}

/// Reduces basis vectors (rows) to reduced echelon form; returns the
/// reduced rows and their pivot columns.
fn rref(mut rows: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let cols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, i);
        let inv = inv_mod(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let f = rows[i][c];
                for k in 0..cols {
                    let t = mul_mod(f, rows[r][k], p);
                    rows[i][k] = (rows[i][k] + p - t) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Null space of a square matrix, as row vectors.
fn kernel(m: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = m.len();
    let (red, pivots) = rref(m.to_vec(), p);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; n];
            v[f] = 1;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = (p - row[f]) % p;
            }
            v
        })
        .collect()
}

/// Characteristic polynomial (low degree first) via Hessenberg reduction.
fn char_poly(mut h: Vec<Vec<u64>>, p: u64) -> Vec<u64> {
    let n = h.len();
    for k in 0..n.saturating_sub(2) {
        let Some(i) = (k + 1..n).find(|&i| h[i][k] != 0) else { continue };
        if i != k + 1 {
            h.swap(i, k + 1);
            for row in h.iter_mut() {
                row.swap(i, k + 1);
            }
        }
        let inv = inv_mod(h[k + 1][k], p);
        for r in k + 2..n {
            let u = mul_mod(h[r][k], inv, p);
            if u == 0 {
                continue;
            }
            for c in 0..n {
                let t = mul_mod(u, h[k + 1][c], p);
                h[r][c] = (h[r][c] + p - t) % p;
            }
            for row in h.iter_mut() {
                let t = mul_mod(u, row[r], p);
                row[k + 1] = (row[k + 1] + t) % p;
            }
        }
    }
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut pm = vec![0; m + 1];
        for (d, &c) in prev.iter().enumerate() {
            pm[d + 1] = (pm[d + 1] + c) % p;
            pm[d] = (pm[d] + p - mul_mod(h[m - 1][m - 1], c, p)) % p;
        }
        let mut t = 1;
        for i in 1..m {
            t = mul_mod(t, h[m - i][m - i - 1], p);
            let f = mul_mod(t, h[m - i - 1][m - 1], p);
            for (d, &c) in polys[m - i - 1].iter().enumerate() {
                pm[d] = (pm[d] + p - mul_mod(f, c, p)) % p;
            }
        }
        polys.push(pm);
    }
    polys.pop().unwrap()
}

fn roots(poly: &[u64], p: u64) -> Vec<u64> {
    (0..p)
        .filter(|&x| poly.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p) == 0)
        .collect()
}

pub fn character_table(g: &GroupTable) -> Result<CharacterTable> {
    let n = g.order();
    let classes = g.conjugacy_classes();
    let cls = g.class_of();
    let r = classes.len();
    let reps: Vec<usize> = classes.iter().map(|c| c[0]).collect();
    let exponent = g.exponent() as u64;
    let p = choose_prime(exponent, 2 * n as u64);
    let fail = |m: &str| Error::CharacterTable(m.to_string());

    // a[j][l][m] = #{x in C_j : x^-1 y_m in C_l}
    let mut a = vec![vec![vec![0u64; r]; r]; r];
    for (m, &y) in reps.iter().enumerate() {
        for x in 0..n {
            a[cls[x]][cls[g.mul(g.inv(x), y)]][m] += 1;
        }
    }

    // refine the whole space into common eigenspaces of the A_j
    let identity: Vec<Vec<u64>> = (0..r).map(|i| (0..r).map(|k| u64::from(i == k)).collect()).collect();
    let mut spaces = vec![identity];
    for aj in a.iter().skip(1) {
        if spaces.iter().all(|s| s.len() == 1) {
            break;
        }
        let mut next = Vec::new();
        for space in spaces {
            if space.len() == 1 {
                next.push(space);
                continue;
            }
            let (basis, pivots) = rref(space, p);
            let image: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| (0..r).map(|l| (0..r).fold(0, |acc, m| (acc + mul_mod(aj[l][m], b[m], p)) % p)).collect())
                .collect();
            // restricted matrix: column i holds the coordinates of A_j b_i
            let d = basis.len();
            let bmat: Vec<Vec<u64>> = (0..d).map(|row| (0..d).map(|col| image[col][pivots[row]]).collect()).collect();
            let mut total = 0;
            for lambda in roots(&char_poly(bmat.clone(), p), p) {
                let shifted: Vec<Vec<u64>> = (0..d)
                    .map(|i| (0..d).map(|k| if i == k { (bmat[i][k] + p - lambda) % p } else { bmat[i][k] }).collect())
                    .collect();
                let ker = kernel(&shifted, p);
                total += ker.len();
                let vecs: Vec<Vec<u64>> = ker
                    .iter()
                    .map(|c| (0..r).map(|x| (0..d).fold(0, |acc, i| (acc + mul_mod(c[i], basis[i][x], p)) % p)).collect())
                    .collect();
                next.push(vecs);
            }
            if total != d {
                return Err(fail("class matrix not diagonalizable mod p"));
            }
        }
        spaces = next;
    }
    if spaces.len() != r {
        return Err(fail("class matrices do not separate characters"));
    }

    let sizes: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();
    let inv_class: Vec<usize> = reps.iter().map(|&x| cls[g.inv(x)]).collect();
    let z = pow_mod(primitive_root(p), (p - 1) / exponent, p);
    let orders: Vec<usize> = reps.iter().map(|&x| g.element_order(x)).collect();
    // power_class[j][t] = class of rep_j^t
    let power_class: Vec<Vec<usize>> = reps
        .iter()
        .zip(&orders)
        .map(|(&x, &o)| {
            let mut y = 0;
            (0..o)
                .map(|_| {
                    let c = cls[y];
                    y = g.mul(y, x);
                    c
                })
                .collect()
        })
        .collect();

    let mut chars = Vec::with_capacity(r);
    for space in &spaces {
        let v = &space[0];
        if v[0] == 0 {
            return Err(fail("eigenvector vanishes on the identity class"));
        }
        let norm = inv_mod(v[0], p);
        let w: Vec<u64> = v.iter().map(|&x| mul_mod(x, norm, p)).collect();
        let s = (0..r).fold(0, |acc, j| (acc + mul_mod(mul_mod(w[j], w[inv_class[j]], p), inv_mod(sizes[j] % p, p), p)) % p);
        if s == 0 {
            return Err(fail("degenerate degree sum"));
        }
        let d2 = mul_mod(n as u64 % p, inv_mod(s, p), p);
        let deg = (1..=n as u64).take_while(|d| d * d <= n as u64).find(|d| (d * d) % p == d2).ok_or_else(|| fail("no integral degree"))?;
        let modval: Vec<u64> = (0..r).map(|j| mul_mod(deg, mul_mod(w[j], inv_mod(sizes[j] % p, p), p), p)).collect();
        let mut row = Vec::with_capacity(r);
        for j in 0..r {
            let o = orders[j] as u64;
            let zo = pow_mod(z, exponent / o, p);
            let inv_o = inv_mod(o % p, p);
            let mut value = CycloNumber::zero();
            for k in 0..o {
                let c = (0..o).fold(0, |acc, t| {
                    let root = pow_mod(zo, (o - (t * k) % o) % o, p);
                    (acc + mul_mod(modval[power_class[j][t as usize]], root, p)) % p
                });
                let c = mul_mod(c, inv_o, p);
                if c > deg {
                    return Err(fail("eigenvalue multiplicity out of range"));
                }
                if c > 0 {
                    let term = root_of_unity(exponent, (k * (exponent / o)) as i64);
                    value = value.add(&term.scale(&crate::cyclotomic::rat(c as i64, 1)));
                }
            }
            row.push(value.embed(exponent));
        }
        chars.push(row);
    }
    // trivial character first, then by degree
    chars.sort_by_key(|row| {
        let trivial = row.iter().all(CycloNumber::is_one);
        (!trivial, row[0].to_rational().map(|q| q.to_integer()).unwrap_or_default())
    });
    let table = CharacterTable { order: n, classes, representatives: reps, chars, exponent };
    if !table.rows_orthogonal() {
        return Err(fail("orthogonality check failed"));
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modular_helpers() {
        assert_eq!(choose_prime(60, 240), 241);
        assert!(is_prime(241));
        let g = primitive_root(241);
        assert_eq!(pow_mod(g, 240, 241), 1);
        // x^2 - 3x + 2 has roots 1, 2
        let m = vec![vec![1, 0], vec![0, 2]];
        let poly = char_poly(m, 7);
        assert_eq!(roots(&poly, 7), vec![1, 2]);
    }

    #[test]
    fn cyclic_table() {
        let t = character_table(&GroupTable::cyclic(5)).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.degrees(), vec![1; 5]);
        assert!(t.columns_orthogonal());
    }

    #[test]
    fn dihedral_table() {
        let t = character_table(&GroupTable::dihedral(4)).unwrap();
        assert_eq!(t.degrees(), vec![1, 1, 1, 1, 2]);
        assert!(t.columns_orthogonal());
    }
}
