//! Truncated monomial checks of the cyclic cover structure
//! A = S + L sigma + ... + L^[e-1] sigma^(e-1) over S = k[[s,t]]^<tau>.
//!
//! tau = diag(zeta^n, zeta^-n) with zeta^n = w a primitive e-th root of unity,
//! so s^a t^b lies in the w^(a-b) eigenspace. sigma acts by s -> w s, t -> t.

use crate::error::{Error, Result};

/// Exponents (a, b) of s^a t^b.
pub type Monomial = (u32, u32);

fn degree(m: Monomial) -> u32 {
    m.0 + m.1
}

fn mul(x: Monomial, y: Monomial) -> Monomial {
    (x.0 + y.0, x.1 + y.1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedEigenModule {
    pub e: u32,
    pub n: u32,
    pub degree_cap: u32,
    /// `eigenspaces[i]`: monomials of degree <= cap on which tau acts by w^i.
    pub eigenspaces: Vec<Vec<Monomial>>,
}

impl TruncatedEigenModule {
    pub fn eigen_index(&self, m: Monomial) -> u32 {
        eigen_index(self.e, m)
    }

    /// Monomials of eigenspace i that are not invariant multiples of a
    /// smaller monomial in the same eigenspace.
    pub fn generators(&self, i: usize) -> Vec<Monomial> {
        let space = &self.eigenspaces[i];
        space
            .iter()
            .copied()
            .filter(|&m| !space.iter().any(|&g| g != m && g.0 <= m.0 && g.1 <= m.1 && is_invariant(self.e, (m.0 - g.0, m.1 - g.1))))
            .collect()
    }
}

fn eigen_index(e: u32, m: Monomial) -> u32 {
    (m.0 as i64 - m.1 as i64).rem_euclid(e as i64) as u32
}

/// Invariant monomials are exactly the monomials in s^e, st, t^e.
fn is_invariant(e: u32, m: Monomial) -> bool {
    eigen_index(e, m) == 0
}

/// Writes an invariant monomial as (st)^k s^(e x) or (st)^k t^(e y).
fn invariant_certificate(e: u32, m: Monomial) -> Option<(u32, u32, u32)> {
    let k = m.0.min(m.1);
    let (x, y) = (m.0 - k, m.1 - k);
    (x % e == 0 && y % e == 0).then_some((k, x / e, y / e))
}

/// Membership of s^a t^b in L^i, where L = S s + S t^(e-1) and L^i is the
/// module generated by the s^j t^((e-1)(i-j)).
fn in_power(e: u32, i: u32, m: Monomial) -> bool {
    (0..=i).any(|j| {
        let b = (e - 1) * (i - j);
        m.0 >= j && m.1 >= b && is_invariant(e, (m.0 - j, m.1 - b))
    })
}

/// Reflexive hull of L^i: m lies in it when m s^(eN) and m t^(eN) lie in L^i.
fn in_reflexive_power(e: u32, i: u32, m: Monomial) -> bool {
    let k = e * i;
    in_power(e, i, (m.0 + k, m.1)) && in_power(e, i, (m.0, m.1 + k))
}

pub fn eigenspace_decompose(e: u32, n: u32, d: u32) -> Result<TruncatedEigenModule> {
    if e == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!("e = {e}, n = {n}")));
    }
    if d < 2 * e {
        return Err(Error::DegreeCapTooSmall(d, 2 * e));
    }
    let mut eigenspaces = vec![Vec::new(); e as usize];
    for deg in 0..=d {
        for a in 0..=deg {
            let m = (a, deg - a);
            eigenspaces[eigen_index(e, m) as usize].push(m);
        }
    }
    let module = TruncatedEigenModule { e, n, degree_cap: d, eigenspaces };
    // invariants are spanned by monomials in s^e, st, t^e
    if let Some(&m) = module.eigenspaces[0].iter().find(|&&m| invariant_certificate(e, m).is_none()) {
        return Err(cover_error("invariant not generated by s^e, st, t^e", &[m]));
    }
    // the w-eigenspace is generated by s and t^(e-1) up to degree d - e
    let gens = [(1, 0), (0, e - 1)];
    for &m in module.eigenspaces[1 % e as usize].iter().filter(|&&m| degree(m) <= d - e) {
        let ok = gens.iter().any(|&g| g.0 <= m.0 && g.1 <= m.1 && invariant_certificate(e, (m.0 - g.0, m.1 - g.1)).is_some());
        if !ok {
            return Err(cover_error("eigenspace monomial not generated by s, t^(e-1)", &[m]));
        }
    }
    Ok(module)
}

fn cover_error(what: &str, witness: &[Monomial]) -> Error {
    let w: Vec<String> = witness.iter().map(|&(a, b)| format!("s^{a} t^{b}")).collect();
    Error::CoverCheck(format!("{what}: {}", w.join(", ")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverReport {
    pub e: u32,
    pub n: u32,
    pub degree_cap: u32,
    /// Named checks, all of which passed.
    pub checks: Vec<String>,
}

/// Element w^k m sigma^i of A.
type Term = (u32, Monomial, u32);

fn a_mul(e: u32, x: Term, y: Term) -> Term {
    // sigma^i m2 = w^(i a2) m2 sigma^i
    let k = (x.0 + y.0 + x.2 * y.1 .0) % e;
    (k, mul(x.1, y.1), (x.2 + y.2) % e)
}

pub fn cover_structure_check(e: u32, n: u32, d: u32) -> Result<CoverReport> {
    let module = eigenspace_decompose(e, n, d)?;
    let mut checks = vec!["eigenspace generation".to_string()];
    let all: Vec<Monomial> = module.eigenspaces.iter().flatten().copied().collect();
    let total = ((d + 1) * (d + 2) / 2) as usize;
    if all.len() != total {
        return Err(Error::CoverCheck(format!("eigenspaces hold {} of {total} monomials", all.len())));
    }
    checks.push("partition".into());

    for i in 0..e {
        for &m in &all {
            if in_reflexive_power(e, i, m) != (eigen_index(e, m) == i) {
                return Err(cover_error(&format!("L^[{i}] differs from eigenspace {i}"), &[m]));
            }
        }
    }
    checks.push("reflexive powers equal eigenspaces".into());

    for &x in &all {
        for &y in all.iter().filter(|&&y| degree(x) + degree(y) <= d) {
            let (i, j) = (eigen_index(e, x), eigen_index(e, y));
            if !in_reflexive_power(e, (i + j) % e, mul(x, y)) {
                return Err(cover_error("product leaves the graded piece", &[x, y]));
            }
        }
    }
    checks.push("grading".into());

    // e-fold products of generators of L are invariant
    for j in 0..=e {
        let m = (j, (e - 1) * (e - j));
        if !is_invariant(e, m) {
            return Err(cover_error("e-fold product of generators is not invariant", &[m]));
        }
    }
    checks.push("relation L^[e] = S".into());

    let gens: Vec<Term> = (0..e as usize)
        .flat_map(|i| module.generators(i).into_iter().map(move |m| (0, m, i as u32)))
        .collect();
    for &x in &gens {
        for &y in &gens {
            for &z in &gens {
                let l = a_mul(e, a_mul(e, x, y), z);
                let r = a_mul(e, x, a_mul(e, y, z));
                if l != r {
                    return Err(cover_error("associativity fails", &[x.1, y.1, z.1]));
                }
            }
        }
    }
    checks.push("associativity".into());

    // sigma scales each monomial, so it preserves every eigenspace
    for (i, space) in module.eigenspaces.iter().enumerate() {
        if space.iter().any(|&m| eigen_index(e, m) as usize != i) {
            return Err(Error::CoverCheck(format!("sigma moves eigenspace {i}")));
        }
    }
    checks.push("sigma-stability".into());
    Ok(CoverReport { e, n, degree_cap: d, checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_cover() {
        let m = eigenspace_decompose(1, 1, 4).unwrap();
        assert_eq!(m.eigenspaces.len(), 1);
        assert_eq!(m.generators(0), vec![(0, 0)]);
        assert!(cover_structure_check(1, 1, 4).is_ok());
    }

    #[test]
    fn generators_small() {
        let m = eigenspace_decompose(2, 1, 8).unwrap();
        assert_eq!(m.generators(0), vec![(0, 0)]);
        let mut g = m.generators(1);
        g.sort_unstable();
        assert_eq!(g, vec![(0, 1), (1, 0)]);
        let m = eigenspace_decompose(3, 1, 12).unwrap();
        let mut g = m.generators(1);
        g.sort_unstable();
        assert_eq!(g, vec![(0, 2), (1, 0)]);
    }

    #[test]
    fn cap_too_small() {
        assert_eq!(eigenspace_decompose(3, 1, 5).unwrap_err(), Error::DegreeCapTooSmall(5, 6));
    }

    #[test]
    fn power_membership() {
        // t is in the w^(e-1) eigenspace but not in L when e = 3
        assert!(!in_power(3, 1, (0, 1)));
        assert!(in_reflexive_power(3, 2, (0, 1)));
        assert!(cover_structure_check(3, 2, 12).is_ok());
    }
}
