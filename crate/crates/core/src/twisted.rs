//! Central extensions by mu_e, the idempotents of k mu_e, and block counts of
//! twisted group algebras.

use std::collections::{BTreeMap, HashMap};

use crate::cyclotomic::{rat, root_of_unity, CycloNumber};
use crate::error::{Error, Result};
use crate::matgroup::GroupTable;

/// G' = G x Z/e as a set, with (g,i)(h,j) = (gh, i + j + c(g,h)).
#[derive(Clone, Debug)]
pub struct CentralExtension {
    base: GroupTable,
    e: u32,
    cocycle: Vec<u32>,
    table: GroupTable,
}

impl CentralExtension {
    /// Validates a normalized 2-cocycle and builds the extension table.
    pub fn from_cocycle(base: GroupTable, e: u32, cocycle: Vec<u32>) -> Result<Self> {
        let n = base.order();
        if e == 0 || cocycle.len() != n * n || cocycle.iter().any(|&c| c >= e) {
            return Err(Error::InvalidParameter("cocycle table".into()));
        }
        let c = |a: usize, b: usize| cocycle[a * n + b];
        if (0..n).any(|g| c(0, g) != 0 || c(g, 0) != 0) {
            return Err(Error::CocycleViolation(0, 0, 0));
        }
        for g in 0..n {
            for h in 0..n {
                let gh = base.mul(g, h);
                let cgh = c(g, h);
                for k in 0..n {
                    let lhs = (cgh + c(gh, k)) % e;
                    let rhs = (c(h, k) + c(g, base.mul(h, k))) % e;
                    if lhs != rhs {
                        return Err(Error::CocycleViolation(g, h, k));
                    }
                }
            }
        }
        let eu = e as usize;
        let big = n * eu;
        let mut mul = Vec::with_capacity(big * big);
        for x in 0..big {
            let (g, i) = (x / eu, x % eu);
            for y in 0..big {
                let (h, j) = (y / eu, y % eu);
                let k = (i + j + c(g, h) as usize) % eu;
                mul.push((base.mul(g, h) * eu + k) as u32);
            }
        }
        let table = GroupTable::from_mul(big, mul)?;
        Ok(CentralExtension { base, e, cocycle, table })
    }

    pub fn trivial(base: GroupTable, e: u32) -> Self {
        let n = base.order();
        Self::from_cocycle(base, e, vec![0; n * n]).expect("zero cocycle")
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn base(&self) -> &GroupTable {
        &self.base
    }

    pub fn table(&self) -> &GroupTable {
        &self.table
    }

    pub fn order(&self) -> usize {
        self.table.order()
    }

    pub fn cocycle(&self, g: usize, h: usize) -> u32 {
        self.cocycle[g * self.base.order() + h]
    }

    pub fn element(&self, g: usize, j: u32) -> usize {
        g * self.e as usize + (j % self.e) as usize
    }

    pub fn split(&self, x: usize) -> (usize, u32) {
        (x / self.e as usize, (x % self.e as usize) as u32)
    }

    /// The generator (1, 1) of mu_e.
    pub fn rho(&self) -> usize {
        self.element(0, 1)
    }

    pub fn lift(&self, g: usize) -> usize {
        self.element(g, 0)
    }

    /// Pulls the extension back along a surjective homomorphism `map: G -> base`.
    pub fn pullback(&self, g: &GroupTable, map: &[usize]) -> Result<CentralExtension> {
        check_surjective_hom(g, &self.base, map)?;
        let n = g.order();
        let cocycle = (0..n * n).map(|x| self.cocycle(map[x / n], map[x % n])).collect();
        CentralExtension::from_cocycle(g.clone(), self.e, cocycle)
    }
}

fn check_surjective_hom(g: &GroupTable, q: &GroupTable, map: &[usize]) -> Result<()> {
    if map.len() != g.order() || map.iter().any(|&x| x >= q.order()) {
        return Err(Error::NotSurjective);
    }
    let mut hit = vec![false; q.order()];
    for a in 0..g.order() {
        hit[map[a]] = true;
        for b in 0..g.order() {
            if map[g.mul(a, b)] != q.mul(map[a], map[b]) {
                return Err(Error::NotSurjective);
            }
        }
    }
    if hit.iter().all(|&h| h) {
        Ok(())
    } else {
        Err(Error::NotSurjective)
    }
}

/// The extension of Gbar = Z/ne x Z/e by mu_e with cocycle c((a,b),(a',b')) = b a' mod e,
/// optionally pulled back along `pullback = (G, G -> Gbar)`.
pub fn build_extension(
    gbar: &GroupTable,
    ne: u32,
    e: u32,
    pullback: Option<(&GroupTable, &[usize])>,
) -> Result<CentralExtension> {
    let coords = gbar.abelian_coordinates(ne as usize, e as usize).ok_or(Error::ShapeMismatch(ne, e))?;
    let n = gbar.order();
    let cocycle = (0..n * n)
        .map(|x| {
            let (_, b) = coords[x / n];
            let (a2, _) = coords[x % n];
            ((b as u64 * a2 as u64) % e as u64) as u32
        })
        .collect();
    let ext = CentralExtension::from_cocycle(gbar.clone(), e, cocycle)?;
    match pullback {
        None => Ok(ext),
        Some((g, map)) => ext.pullback(g, map),
    }
}

/// The double cover D_{4m} -> D_{2m} of a dihedral group of order 2m, as the
/// carry cocycle in coordinates r^a s^b; optionally pulled back to G.
pub fn dihedral_double_cover(q: &GroupTable, m: u32, pullback: Option<(&GroupTable, &[usize])>) -> Result<CentralExtension> {
    let coords = q.dihedral_coordinates(m as usize).ok_or_else(|| Error::InvalidParameter(format!("not dihedral of order {}", 2 * m)))?;
    let n = q.order();
    let m = m as i64;
    let cocycle = (0..n * n)
        .map(|x| {
            let (a, b) = coords[x / n];
            let (c, _) = coords[x % n];
            let sum = if b == 0 { a as i64 + c as i64 } else { a as i64 - c as i64 };
            (sum.rem_euclid(2 * m) >= m) as u32
        })
        .collect();
    let ext = CentralExtension::from_cocycle(q.clone(), 2, cocycle)?;
    match pullback {
        None => Ok(ext),
        Some((g, map)) => ext.pullback(g, map),
    }
}

/// A sparse element of the group algebra of an extension.
#[derive(Clone, Debug)]
pub struct AlgebraElement<'a> {
    pub ext: &'a CentralExtension,
    pub coeffs: BTreeMap<usize, CycloNumber>,
}

impl<'a> AlgebraElement<'a> {
    pub fn zero(ext: &'a CentralExtension) -> Self {
        AlgebraElement { ext, coeffs: BTreeMap::new() }
    }

    pub fn basis(ext: &'a CentralExtension, x: usize) -> Self {
        Self::zero(ext).plus_term(x, &CycloNumber::one())
    }

    pub fn one(ext: &'a CentralExtension) -> Self {
        Self::basis(ext, 0)
    }

    fn plus_term(mut self, x: usize, c: &CycloNumber) -> Self {
        add_term(&mut self.coeffs, x, c);
        self
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&x, c) in &o.coeffs {
            add_term(&mut out.coeffs, x, c);
        }
        out
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        let mut out = Self::zero(self.ext);
        for (&x, a) in &self.coeffs {
            add_term(&mut out.coeffs, x, &a.mul(c));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let t = self.ext.table();
        let mut out = Self::zero(self.ext);
        for (&x, a) in &self.coeffs {
            for (&y, b) in &o.coeffs {
                add_term(&mut out.coeffs, t.mul(x, y), &a.mul(b));
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl PartialEq for AlgebraElement<'_> {
    fn eq(&self, o: &Self) -> bool {
        self.coeffs == o.coeffs
    }
}

fn add_term(map: &mut BTreeMap<usize, CycloNumber>, x: usize, c: &CycloNumber) {
    if c.is_zero() {
        return;
    }
    let v = match map.remove(&x) {
        Some(old) => old.add(c),
        None => c.clone(),
    };
    if !v.is_zero() {
        map.insert(x, v);
    }
}

/// The idempotent of k mu_e on which rho acts by `omega` (any e-th root of unity):
/// (1/e) sum_j omega^{-j} rho^j.
pub fn mu_idempotent<'a>(ext: &'a CentralExtension, omega: &CycloNumber) -> Result<AlgebraElement<'a>> {
    let e = ext.e();
    if !omega.pow(e as i64)?.is_one() {
        return Err(Error::NotPrimitiveRoot(e));
    }
    let inv = omega.inv()?;
    let scale = CycloNumber::from_rational(rat(1, e as i64));
    let mut out = AlgebraElement::zero(ext);
    let mut w = CycloNumber::one();
    for j in 0..e {
        add_term(&mut out.coeffs, ext.element(0, j), &w.mul(&scale));
        w = w.mul(&inv);
    }
    Ok(out)
}

/// The central idempotent cutting out the factor where rho acts as `zeta_n`,
/// a primitive e-th root of unity.
pub fn idempotent_epsilon<'a>(e: u32, zeta_n: &CycloNumber, ext: &'a CentralExtension) -> Result<AlgebraElement<'a>> {
    if ext.e() != e || zeta_n.root_order(e as u64) != Some(e as u64) {
        return Err(Error::NotPrimitiveRoot(e));
    }
    mu_idempotent(ext, zeta_n)
}

pub fn is_central(x: &AlgebraElement<'_>) -> bool {
    let ext = x.ext;
    (0..ext.order()).all(|g| {
        let b = AlgebraElement::basis(ext, g);
        b.mul(x) == x.mul(&b)
    })
}

/// Number of simple blocks of eps kG': the dimension of the span of the class
/// sums multiplied by eps.
pub fn block_count(ext: &CentralExtension, eps: &AlgebraElement<'_>) -> Result<usize> {
    if eps.mul(eps) != *eps {
        return Err(Error::NotIdempotent);
    }
    if !is_central(eps) {
        return Err(Error::NotCentral);
    }
    let rows: Vec<BTreeMap<usize, CycloNumber>> = ext
        .table()
        .conjugacy_classes()
        .iter()
        .map(|cls| {
            let mut sum = AlgebraElement::zero(ext);
            for &x in cls {
                add_term(&mut sum.coeffs, x, &CycloNumber::one());
            }
            sum.mul(eps).coeffs
        })
        .collect();
    Ok(sparse_rank(rows))
}

/// Rank of sparse vectors over the cyclotomic field.
pub fn sparse_rank(rows: Vec<BTreeMap<usize, CycloNumber>>) -> usize {
    let mut pivots: HashMap<usize, BTreeMap<usize, CycloNumber>> = HashMap::new();
    for mut row in rows {
        while let Some((&lead, c)) = row.iter().next() {
            match pivots.get(&lead) {
                Some(p) => {
                    let f = c.clone();
                    for (&x, v) in p {
                        add_term(&mut row, x, &v.mul(&f).neg());
                    }
                }
                None => {
                    let inv = c.inv().expect("nonzero pivot");
                    let normalized = row.iter().map(|(&x, v)| (x, v.mul(&inv))).collect();
                    pivots.insert(lead, normalized);
                    break;
                }
            }
        }
    }
    pivots.len()
}

/// Convenience: block count of the factor where rho acts by the primitive root
/// zeta_e^k.
pub fn twisted_block_count(ext: &CentralExtension, k: i64) -> Result<usize> {
    let omega = root_of_unity(ext.e() as u64, k);
    let eps = mu_idempotent(ext, &omega)?;
    block_count(ext, &eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_extension_counts_classes() {
        let d3 = GroupTable::dihedral(3);
        let ext = CentralExtension::trivial(d3, 1);
        assert_eq!(ext.order(), 6);
        let one = AlgebraElement::one(&ext);
        assert_eq!(block_count(&ext, &one).unwrap(), 3);
    }

    #[test]
    fn klein_four_extension_anticommutes() {
        let gbar = GroupTable::abelian(2, 2);
        let ext = build_extension(&gbar, 2, 2, None).unwrap();
        assert_eq!(ext.order(), 8);
        let coords = gbar.abelian_coordinates(2, 2).unwrap();
        let x = coords.iter().position(|&c| c == (1, 0)).unwrap();
        let y = coords.iter().position(|&c| c == (0, 1)).unwrap();
        let t = ext.table();
        let (sx, sy) = (ext.lift(x), ext.lift(y));
        // y x = rho x y
        assert_eq!(t.mul(sy, sx), t.mul(ext.rho(), t.mul(sx, sy)));
        assert_eq!(t.conjugacy_classes().len(), 5);
        assert_eq!(twisted_block_count(&ext, 1).unwrap(), 1);
    }

    #[test]
    fn dihedral_cover_presentation() {
        for m in [4usize, 6, 8] {
            let q = GroupTable::dihedral(m);
            let ext = dihedral_double_cover(&q, m as u32, None).unwrap();
            let t = ext.table();
            let coords = q.dihedral_coordinates(m).unwrap();
            let r = coords.iter().position(|&c| c == (1, 0)).unwrap();
            let s = coords.iter().position(|&c| c == (0, 1)).unwrap();
            let (sr, ss) = (ext.lift(r), ext.lift(s));
            assert_eq!(t.element_order(sr), 2 * m);
            assert_eq!(t.element_order(ss), 2);
            assert_eq!(t.mul(ss, sr), t.mul(t.inv(sr), ss));
            assert_eq!(t.generated(&[sr, ss]).len(), 4 * m);
            assert_eq!(t.power(sr, m as i64), ext.rho());
        }
    }

    #[test]
    fn bad_cocycle_rejected() {
        let z2 = GroupTable::cyclic(2);
        // c(1,1) = 1 is a cocycle (Z/4); a non-normalized table is not
        assert!(CentralExtension::from_cocycle(z2.clone(), 2, vec![0, 0, 0, 1]).is_ok());
        assert!(CentralExtension::from_cocycle(z2, 2, vec![1, 0, 0, 0]).is_err());
        let z3 = GroupTable::cyclic(3);
        let mut c = vec![0; 9];
        c[4] = 1;
        assert!(matches!(CentralExtension::from_cocycle(z3, 2, c), Err(Error::CocycleViolation(..))));
    }

    #[test]
    fn idempotent_identities_small() {
        for e in 1..=4u32 {
            let ext = build_extension(&GroupTable::abelian(e as usize, e as usize), e, e, None).unwrap();
            for k in (1..=e as i64).filter(|&k| num_integer::gcd(k, e as i64) == 1) {
                let w = root_of_unity(e as u64, k);
                let eps = idempotent_epsilon(e, &w, &ext).unwrap();
                assert!(eps.mul(&eps) == eps);
                assert!(is_central(&eps));
                let rho = AlgebraElement::basis(&ext, ext.rho());
                assert!(rho.mul(&eps) == eps.scale(&w));
            }
        }
        let ext = CentralExtension::trivial(GroupTable::cyclic(2), 3);
        assert!(idempotent_epsilon(3, &root_of_unity(3, 0), &ext).is_err());
    }

    #[test]
    fn idempotent_blocks_sum_to_classes() {
        let ext = build_extension(&GroupTable::abelian(6, 3), 6, 3, None).unwrap();
        let total: usize = (0..3).map(|k| twisted_block_count(&ext, k).unwrap()).sum();
        assert_eq!(total, ext.table().conjugacy_classes().len());
    }

    #[test]
    fn non_idempotent_rejected() {
        let ext = CentralExtension::trivial(GroupTable::cyclic(2), 1);
        let two = AlgebraElement::one(&ext).scale(&CycloNumber::from_int(2));
        assert_eq!(block_count(&ext, &two).unwrap_err(), Error::NotIdempotent);
    }
}
