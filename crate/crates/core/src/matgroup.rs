//! Finite subgroups of GL2 over cyclotomic fields and abstract group tables.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;

use crate::cyclotomic::{CycloNumber, Rational};
use crate::error::{Error, Result};

pub const DEFAULT_CAP: usize = 10_000;

/// Closure cap, overridable through `CANORD_CAP`.
pub fn cap_from_env() -> usize {
    std::env::var("CANORD_CAP").ok().and_then(|s| s.trim().parse().ok()).filter(|&c| c > 0).unwrap_or(DEFAULT_CAP)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix2 {
    pub entries: [[CycloNumber; 2]; 2],
}

type MatKey = [(u64, Vec<Rational>); 4];

impl Matrix2 {
    pub fn new(a: CycloNumber, b: CycloNumber, c: CycloNumber, d: CycloNumber) -> Self {
        Matrix2 { entries: [[a, b], [c, d]] }
    }

    pub fn identity() -> Self {
        Self::diag(CycloNumber::one(), CycloNumber::one())
    }

    pub fn diag(a: CycloNumber, d: CycloNumber) -> Self {
        Self::new(a, CycloNumber::zero(), CycloNumber::zero(), d)
    }

    pub fn antidiag(b: CycloNumber, c: CycloNumber) -> Self {
        Self::new(CycloNumber::zero(), b, c, CycloNumber::zero())
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let e = &self.entries;
        let f = &o.entries;
        let at = |i: usize, j: usize| e[i][0].mul(&f[0][j]).add(&e[i][1].mul(&f[1][j]));
        Matrix2 { entries: [[at(0, 0), at(0, 1)], [at(1, 0), at(1, 1)]] }
    }

    pub fn det(&self) -> CycloNumber {
        let e = &self.entries;
        e[0][0].mul(&e[1][1]).sub(&e[0][1].mul(&e[1][0]))
    }

    pub fn trace(&self) -> CycloNumber {
        self.entries[0][0].add(&self.entries[1][1])
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    pub fn conductor(&self) -> u64 {
        self.entries.iter().flatten().fold(1, |m, x| m.lcm(&x.conductor()))
    }

    pub fn embed(&self, m: u64) -> Self {
        let e = &self.entries;
        Self::new(e[0][0].embed(m), e[0][1].embed(m), e[1][0].embed(m), e[1][1].embed(m))
    }

    pub fn apply(&self, v: &[CycloNumber; 2]) -> [CycloNumber; 2] {
        let e = &self.entries;
        [e[0][0].mul(&v[0]).add(&e[0][1].mul(&v[1])), e[1][0].mul(&v[0]).add(&e[1][1].mul(&v[1]))]
    }

    fn key(&self) -> MatKey {
        let e = &self.entries;
        [e[0][0].key(), e[0][1].key(), e[1][0].key(), e[1][1].key()]
    }
}

/// A finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl GroupTable {
    /// Builds a table from a row-major product list, checking the identity and
    /// Latin-square property.
    pub fn from_mul(n: usize, mul: Vec<u32>) -> Result<Self> {
        if n == 0 || mul.len() != n * n {
            return Err(Error::InvalidParameter("table size".into()));
        }
        let mut t = GroupTable { n, mul, inv: vec![0; n] };
        if (0..n).any(|a| t.mul(0, a) != a || t.mul(a, 0) != a) || !t.is_latin() {
            return Err(Error::InvalidParameter("not a group table".into()));
        }
        for a in 0..n {
            t.inv[a] = (0..n).find(|&b| t.mul(a, b) == 0).unwrap() as u32;
        }
        Ok(t)
    }

    pub fn cyclic(n: usize) -> Self {
        let mul = (0..n).flat_map(|a| (0..n).map(move |b| ((a + b) % n) as u32)).collect();
        Self::from_mul(n, mul).unwrap()
    }

    /// Z/a x Z/b with element (i, j) at index i*b + j.
    pub fn abelian(a: usize, b: usize) -> Self {
        let n = a * b;
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let i = (x / b + y / b) % a;
                let j = (x % b + y % b) % b;
                mul.push((i * b + j) as u32);
            }
        }
        Self::from_mul(n, mul).unwrap()
    }

    /// Dihedral group of order 2m with r^a s^b at index 2a + b.
    pub fn dihedral(m: usize) -> Self {
        let n = 2 * m;
        let mut mul = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                let (a, b) = (x / 2, x % 2);
                let (c, d) = (y / 2, y % 2);
                let r = if b == 0 { (a + c) % m } else { (a + m - c) % m };
                mul.push((2 * r + (b + d) % 2) as u32);
            }
        }
        Self::from_mul(n, mul).unwrap()
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.n + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn is_latin(&self) -> bool {
        let n = self.n;
        let mut seen = vec![0usize; n];
        for a in 0..n {
            for b in 0..n {
                let x = self.mul(a, b);
                if seen[x] == 2 * a + 1 {
                    return false;
                }
                seen[x] = 2 * a + 1;
            }
        }
        for b in 0..n {
            for a in 0..n {
                let x = self.mul(a, b);
                if seen[x] == 2 * b + 2 {
                    return false;
                }
                seen[x] = 2 * b + 2;
            }
        }
        true
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn power(&self, a: usize, k: i64) -> usize {
        let o = self.element_order(a) as i64;
        let k = k.rem_euclid(o);
        (0..k).fold(0, |x, _| self.mul(x, a))
    }

    pub fn exponent(&self) -> usize {
        (0..self.n).fold(1, |m, a| m.lcm(&self.element_order(a)))
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Index of each element's conjugacy class, classes numbered by first occurrence.
    pub fn class_of(&self) -> Vec<usize> {
        let mut cls = vec![usize::MAX; self.n];
        let mut next = 0;
        for x in 0..self.n {
            if cls[x] != usize::MAX {
                continue;
            }
            for g in 0..self.n {
                let y = self.mul(self.mul(g, x), self.inv(g));
                cls[y] = next;
            }
            next += 1;
        }
        cls
    }

    /// Conjugacy classes as sorted index lists; the identity class comes first.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let cls = self.class_of();
        let k = cls.iter().max().map_or(0, |&m| m + 1);
        let mut out = vec![Vec::new(); k];
        for (x, &c) in cls.iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    pub fn is_subgroup(&self, h: &[usize]) -> bool {
        let mut mem = vec![false; self.n];
        for &x in h {
            if x >= self.n {
                return false;
            }
            mem[x] = true;
        }
        mem[0] && h.iter().all(|&a| h.iter().all(|&b| mem[self.mul(a, b)]))
    }

    /// The subgroup generated by `gens`, sorted.
    pub fn generated(&self, gens: &[usize]) -> Vec<usize> {
        let mut mem = vec![false; self.n];
        mem[0] = true;
        let mut queue = VecDeque::from([0usize]);
        let mut out = vec![0];
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !mem[y] {
                    mem[y] = true;
                    out.push(y);
                    queue.push_back(y);
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// The table of a subgroup, re-indexed in sorted order (identity first),
    /// together with the map from new indices to old ones.
    pub fn subgroup_table(&self, h: &[usize]) -> Result<(GroupTable, Vec<usize>)> {
        let mut h = h.to_vec();
        h.sort_unstable();
        h.dedup();
        if !self.is_subgroup(&h) {
            return Err(Error::NotSubgroup);
        }
        let pos: HashMap<usize, usize> = h.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mul = h.iter().flat_map(|&a| h.iter().map(|&b| pos[&self.mul(a, b)] as u32).collect::<Vec<_>>()).collect();
        Ok((GroupTable::from_mul(h.len(), mul)?, h))
    }

    pub fn quotient(&self, h: &[usize]) -> Result<Quotient> {
        if !self.is_subgroup(h) {
            return Err(Error::NotSubgroup);
        }
        let mut mem = vec![false; self.n];
        for &x in h {
            mem[x] = true;
        }
        for g in 0..self.n {
            for &x in h {
                if !mem[self.mul(self.mul(g, x), self.inv(g))] {
                    return Err(Error::NotNormal);
                }
            }
        }
        let mut coset_of = vec![usize::MAX; self.n];
        let mut reps = Vec::new();
        for g in 0..self.n {
            if coset_of[g] == usize::MAX {
                for &x in h {
                    coset_of[self.mul(g, x)] = reps.len();
                }
                reps.push(g);
            }
        }
        let k = reps.len();
        let mul = (0..k).flat_map(|a| (0..k).map(move |b| (a, b))).map(|(a, b)| coset_of[self.mul(reps[a], reps[b])] as u32).collect();
        Ok(Quotient { table: GroupTable::from_mul(k, mul)?, coset_of, representatives: reps })
    }

    /// Coordinates (i, j) with element = x^i y^j for some x of order `a` and y
    /// of order `b`, if the group is isomorphic to Z/a x Z/b.
    pub fn abelian_coordinates(&self, a: usize, b: usize) -> Option<Vec<(u32, u32)>> {
        if self.n != a * b || !self.is_abelian() {
            return None;
        }
        let ord: Vec<usize> = (0..self.n).map(|x| self.element_order(x)).collect();
        for x in (0..self.n).filter(|&x| ord[x] == a) {
            let xp = powers(self, x, a);
            'y: for y in (0..self.n).filter(|&y| ord[y] == b) {
                let yp = powers(self, y, b);
                let mut coords = vec![None; self.n];
                for (i, &xi) in xp.iter().enumerate() {
                    for (j, &yj) in yp.iter().enumerate() {
                        let z = self.mul(xi, yj);
                        if coords[z].is_some() {
                            continue 'y;
                        }
                        coords[z] = Some((i as u32, j as u32));
                    }
                }
                return Some(coords.into_iter().map(Option::unwrap).collect());
            }
        }
        None
    }

    /// Coordinates (a, b) with element = r^a s^b, where r has order `m`, s has
    /// order 2 and s r s = r^-1, if the group is dihedral of order 2m.
    pub fn dihedral_coordinates(&self, m: usize) -> Option<Vec<(u32, u32)>> {
        if self.n != 2 * m {
            return None;
        }
        for r in (0..self.n).filter(|&r| self.element_order(r) == m) {
            let rp = powers(self, r, m);
            for s in (1..self.n).filter(|&s| self.mul(s, s) == 0 && !rp.contains(&s)) {
                if self.mul(self.mul(s, r), s) != self.inv(r) {
                    continue;
                }
                let mut coords = vec![(0, 0); self.n];
                for (a, &x) in rp.iter().enumerate() {
                    coords[x] = (a as u32, 0);
                    coords[self.mul(x, s)] = (a as u32, 1);
                }
                return Some(coords);
            }
        }
        None
    }
}

fn powers(t: &GroupTable, x: usize, k: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut y = 0;
    for _ in 0..k {
        out.push(y);
        y = t.mul(y, x);
    }
    out
}

/// A coset table G/H with the projection from G.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub table: GroupTable,
    pub coset_of: Vec<usize>,
    pub representatives: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct FiniteMatrixGroup {
    pub elements: Vec<Matrix2>,
    pub table: GroupTable,
    pub generator_indices: Vec<usize>,
}

/// Closure of `gens` under multiplication, breadth first from the identity.
pub fn generate_group(gens: &[Matrix2], cap: usize) -> Result<FiniteMatrixGroup> {
    let m = gens.iter().fold(1, |m, g| m.lcm(&g.conductor()));
    let gens: Vec<Matrix2> = gens.iter().map(|g| g.embed(m)).collect();
    if gens.iter().any(|g| g.det().is_zero()) {
        return Err(Error::Singular);
    }
    let id = Matrix2::identity().embed(m);
    let mut elements = vec![id.clone()];
    let mut index: HashMap<MatKey, usize> = HashMap::from([(id.key(), 0)]);
    // parent[x] = (p, g) with x = elements[p] * gens[g]
    let mut parent: Vec<(usize, usize)> = vec![(0, usize::MAX)];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (gi, g) in gens.iter().enumerate() {
            let y = elements[i].mul(g);
            let k = y.key();
            let idx = match index.get(&k) {
                Some(&j) => j,
                None => {
                    if elements.len() >= cap {
                        return Err(Error::CapExceeded(cap));
                    }
                    elements.push(y);
                    parent.push((i, gi));
                    index.insert(k, elements.len() - 1);
                    elements.len() - 1
                }
            };
            row.push(idx);
        }
        right.push(row);
        i += 1;
    }
    let n = elements.len();
    let mut mul = vec![0u32; n * n];
    for a in 0..n {
        mul[a * n] = a as u32;
        for b in 1..n {
            let (p, g) = parent[b];
            mul[a * n + b] = right[mul[a * n + p] as usize][g] as u32;
        }
    }
    let table = GroupTable::from_mul(n, mul)?;
    let generator_indices = gens.iter().map(|g| index[&g.key()]).collect();
    Ok(FiniteMatrixGroup { elements, table, generator_indices })
}

impl FiniteMatrixGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn conductor(&self) -> u64 {
        self.elements[0].conductor().max(self.elements.iter().fold(1, |m, g| m.lcm(&g.conductor())))
    }

    pub fn index_of(&self, g: &Matrix2) -> Option<usize> {
        self.elements.iter().position(|x| x == g)
    }

    /// The subgroup generated by the given matrices, as sorted element indices.
    pub fn subgroup_of(&self, gens: &[Matrix2]) -> Option<Vec<usize>> {
        let idx: Option<Vec<usize>> = gens.iter().map(|g| self.index_of(g)).collect();
        Some(self.table.generated(&idx?))
    }

    pub fn is_special_linear(&self) -> bool {
        self.elements.iter().all(|g| g.det().is_one())
    }
}

pub fn conjugacy_classes(g: &FiniteMatrixGroup) -> Vec<Vec<usize>> {
    g.table.conjugacy_classes()
}

pub fn quotient(g: &FiniteMatrixGroup, h: &[usize]) -> Result<Quotient> {
    g.table.quotient(h)
}

#[derive(Clone, Debug)]
pub struct LineOrbit {
    /// Projective point with first nonzero coordinate 1.
    pub representative: [CycloNumber; 2],
    pub orbit_size: usize,
    pub inertia_order: usize,
}

#[derive(Clone, Debug)]
pub struct LineOrbitRamification {
    pub orbits: Vec<LineOrbit>,
}

impl LineOrbitRamification {
    /// Sorted multiset of inertia orders.
    pub fn indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.orbits.iter().map(|o| o.inertia_order).collect();
        v.sort_unstable();
        v
    }
}

fn normalize_line(v: &[CycloNumber; 2]) -> [CycloNumber; 2] {
    let m = v[0].conductor().lcm(&v[1].conductor());
    if v[0].is_zero() {
        [CycloNumber::zero().embed(m), CycloNumber::one().embed(m)]
    } else {
        let y = v[1].div(&v[0]).expect("nonzero").embed(m);
        [CycloNumber::one().embed(m), y]
    }
}

fn line_key(v: &[CycloNumber; 2]) -> ((u64, Vec<Rational>), (u64, Vec<Rational>)) {
    (v[0].key(), v[1].key())
}

/// Lines fixed pointwise by a non-trivial element, grouped into orbits with
/// their inertia orders.
pub fn fixed_line_ramification(g: &FiniteMatrixGroup) -> LineOrbitRamification {
    let m = g.elements.iter().fold(1, |m, x| m.lcm(&x.conductor()));
    let one = CycloNumber::one();
    let mut lines: Vec<[CycloNumber; 2]> = Vec::new();
    let mut seen = HashMap::new();
    for x in g.elements.iter().skip(1) {
        let e = &x.entries;
        let a = e[0][0].sub(&one);
        let d = e[1][1].sub(&one);
        let det = a.mul(&d).sub(&e[0][1].mul(&e[1][0]));
        if !det.is_zero() {
            continue;
        }
        let (p, q) = if !a.is_zero() || !e[0][1].is_zero() { (a, e[0][1].clone()) } else { (e[1][0].clone(), d) };
        let v = normalize_line(&[q.embed(m), p.neg().embed(m)]);
        if let std::collections::hash_map::Entry::Vacant(slot) = seen.entry(line_key(&v)) {
            slot.insert(lines.len());
            lines.push(v);
        }
    }
    let mut orbit_of = vec![usize::MAX; lines.len()];
    let mut orbits = Vec::new();
    for start in 0..lines.len() {
        if orbit_of[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        let mut size = 0;
        for x in &g.elements {
            let w = normalize_line(&x.apply(&lines[start]));
            let j = seen[&line_key(&w)];
            if orbit_of[j] == usize::MAX {
                orbit_of[j] = id;
                size += 1;
            }
        }
        let v = &lines[start];
        let inertia = g.elements.iter().filter(|x| x.apply(v) == *v).count();
        orbits.push(LineOrbit { representative: v.clone(), orbit_size: size, inertia_order: inertia });
    }
    LineOrbitRamification { orbits }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::root_of_unity;

    fn z(m: u64, k: i64) -> CycloNumber {
        root_of_unity(m, k)
    }

    #[test]
    fn small_closures() {
        let g = generate_group(&[Matrix2::from_ints(-1, 0, 0, -1)], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 2);
        let bl = generate_group(&[Matrix2::diag(z(3, 1), z(3, -1)), Matrix2::from_ints(0, 1, 1, 0)], DEFAULT_CAP).unwrap();
        assert_eq!(bl.order(), 6);
        assert_eq!(conjugacy_classes(&bl).len(), 3);
        let a12 = generate_group(&[Matrix2::diag(z(2, 1), 1.into()), Matrix2::diag(1.into(), z(2, 1))], DEFAULT_CAP).unwrap();
        assert_eq!(a12.order(), 4);
        assert!(a12.table.abelian_coordinates(2, 2).is_some());
        assert!(a12.table.is_latin());
    }

    #[test]
    fn quaternion_classes() {
        let i = Matrix2::diag(z(4, 1), z(4, 3));
        let j = Matrix2::from_ints(0, 1, -1, 0);
        let q8 = generate_group(&[i, j], DEFAULT_CAP).unwrap();
        assert_eq!(q8.order(), 8);
        let cls = conjugacy_classes(&q8);
        assert_eq!(cls.len(), 5);
        assert_eq!(cls[0], vec![0]);
        assert!(cls.iter().all(|c| 8 % c.len() == 0));
    }

    #[test]
    fn cap_exceeded() {
        let g = generate_group(&[Matrix2::diag(z(7, 1), 1.into())], 5);
        assert_eq!(g.unwrap_err(), Error::CapExceeded(5));
        let s = generate_group(&[Matrix2::from_ints(1, 1, 1, 1)], 5);
        assert_eq!(s.unwrap_err(), Error::Singular);
    }

    #[test]
    fn quotients() {
        let g = GroupTable::cyclic(6);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(g.quotient(&all).unwrap().table.order(), 1);
        assert_eq!(g.quotient(&[0, 2]).unwrap_err(), Error::NotSubgroup);
        assert!(g.quotient(&[0, 3]).unwrap().table.abelian_coordinates(3, 1).is_some());
        // a reflection subgroup of S3 is not normal
        let s3 = generate_group(&[Matrix2::diag(z(3, 1), z(3, -1)), Matrix2::from_ints(0, 1, 1, 0)], DEFAULT_CAP).unwrap();
        let r = s3.index_of(&Matrix2::from_ints(0, 1, 1, 0).embed(3)).unwrap();
        assert_eq!(s3.table.quotient(&[0, r]).unwrap_err(), Error::NotNormal);
    }

    #[test]
    fn fixed_lines() {
        let g = generate_group(&[Matrix2::from_ints(-1, 0, 0, -1)], DEFAULT_CAP).unwrap();
        assert!(fixed_line_ramification(&g).orbits.is_empty());
        let bl = generate_group(&[Matrix2::diag(z(5, 1), z(5, -1)), Matrix2::from_ints(0, 1, 1, 0)], DEFAULT_CAP).unwrap();
        let r = fixed_line_ramification(&bl);
        assert_eq!(r.orbits.len(), 1);
        assert_eq!(r.orbits[0].orbit_size, 5);
        assert_eq!(r.orbits[0].inertia_order, 2);
    }
}
