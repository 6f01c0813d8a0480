//! Intersection lattices of curve configurations on resolved surfaces.
//!
//! Divisors are integer vectors over the curves of a configuration. Linear
//! equivalence is tested numerically against the contracted (negative definite)
//! curves, which is exact on resolutions of rational singularities.

use std::fmt::Write as _;

use num_integer::Integer;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{leading_minors, mat_vec, smith};
use crate::ramdata::{resolution_ram, CanonicalType, ResolutionRamData};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    Exceptional,
    Transverse,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeCurve {
    pub label: String,
    pub kind: CurveKind,
    pub self_int: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice {
    pub curves: Vec<LatticeCurve>,
    /// Symmetric; diagonal entries of exceptional curves are self-intersections,
    /// those of transverse curves are 0 and never used.
    pub pairing: Vec<Vec<i64>>,
    pub contracted: Vec<usize>,
}

/// Integer combination of the curves of a lattice, indexed like `curves`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    pub coeffs: Vec<i64>,
}

impl DivisorClass {
    pub fn zero(n: usize) -> Self {
        DivisorClass { coeffs: vec![0; n] }
    }

    pub fn from_terms(n: usize, terms: &[(usize, i64)]) -> Self {
        let mut d = Self::zero(n);
        for &(i, c) in terms {
            d.coeffs[i] += c;
        }
        d
    }

    pub fn add(&self, o: &Self) -> Self {
        DivisorClass { coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(-1))
    }

    pub fn scale(&self, k: i64) -> Self {
        DivisorClass { coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    /// Image under the curve permutation i -> perm[i].
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut out = Self::zero(self.coeffs.len());
        for (i, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[perm[i]] += c;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

#[derive(Default, Debug, Clone)]
pub struct LatticeBuilder {
    curves: Vec<LatticeCurve>,
    meets: Vec<(usize, usize, i64)>,
}

impl LatticeBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn exceptional(&mut self, label: impl Into<String>, self_int: i64) -> usize {
        self.curves.push(LatticeCurve { label: label.into(), kind: CurveKind::Exceptional, self_int: Some(self_int) });
        self.curves.len() - 1
    }

    pub fn transverse(&mut self, label: impl Into<String>) -> usize {
        self.curves.push(LatticeCurve { label: label.into(), kind: CurveKind::Transverse, self_int: None });
        self.curves.len() - 1
    }

    pub fn meet(&mut self, a: usize, b: usize, mult: i64) -> &mut Self {
        self.meets.push((a, b, mult));
        self
    }

    pub fn build(&self) -> IntersectionLattice {
        let n = self.curves.len();
        let mut pairing = vec![vec![0; n]; n];
        for (i, c) in self.curves.iter().enumerate() {
            pairing[i][i] = c.self_int.unwrap_or(0);
        }
        for &(a, b, m) in &self.meets {
            pairing[a][b] += m;
            pairing[b][a] += m;
        }
        let contracted = (0..n).filter(|&i| self.curves[i].kind == CurveKind::Exceptional).collect();
        IntersectionLattice { curves: self.curves.clone(), pairing, contracted }
    }
}

impl IntersectionLattice {
    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    pub fn index(&self, label: &str) -> Option<usize> {
        self.curves.iter().position(|c| c.label == label)
    }

    /// Index of a curve known to exist; panics otherwise.
    pub fn idx(&self, label: &str) -> usize {
        self.index(label).unwrap_or_else(|| panic!("no curve {label}"))
    }

    pub fn exceptional(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.curves[i].kind == CurveKind::Exceptional).collect()
    }

    pub fn divisor(&self, terms: &[(&str, i64)]) -> DivisorClass {
        let t: Vec<(usize, i64)> = terms.iter().map(|&(l, c)| (self.idx(l), c)).collect();
        DivisorClass::from_terms(self.len(), &t)
    }

    /// Intersection of a divisor with curve k.
    pub fn dot_curve(&self, d: &DivisorClass, k: usize) -> i64 {
        d.coeffs.iter().enumerate().map(|(i, &c)| c * self.pairing[i][k]).sum()
    }

    pub fn dot(&self, a: &DivisorClass, b: &DivisorClass) -> i64 {
        b.coeffs.iter().enumerate().map(|(k, &c)| c * self.dot_curve(a, k)).sum()
    }

    pub fn is_connected(&self, subset: &[usize]) -> bool {
        if subset.is_empty() {
            return true;
        }
        let mut seen = vec![false; subset.len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(i) = stack.pop() {
            for j in 0..subset.len() {
                if !seen[j] && self.pairing[subset[i]][subset[j]] > 0 {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    pub fn is_negative_definite(&self, subset: &[usize]) -> bool {
        let m: Vec<Vec<i128>> =
            subset.iter().map(|&i| subset.iter().map(|&j| -(self.pairing[i][j] as i128)).collect()).collect();
        let minors = leading_minors(&m);
        minors.len() == subset.len() && minors.iter().all(|&d| d > 0)
    }
}

/// Named configurations. `Paper` is the minimal resolution of the canonical
/// type's base surface; `Cover` is the resolution of its cyclic cover, with
/// curves F_i and transverse curves C_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigKind {
    AString(u32),
    DTree(u32),
    ETree(u32),
    Paper(CanonicalType),
    Cover(CanonicalType),
}

/// Edges of the A, D and E shapes on nodes 0..m.
pub fn dynkin_edges(letter: char, m: u32) -> Result<Vec<(usize, usize)>> {
    let m = m as usize;
    let path = |k: usize| (1..k).map(|i| (i - 1, i)).collect::<Vec<_>>();
    match letter {
        'A' if m >= 1 => Ok(path(m)),
        'D' if m >= 3 => {
            let mut e = path(m - 1);
            e.push((m - 3, m - 1));
            Ok(e)
        }
        'E' if (6..=8).contains(&m) => {
            let mut e = path(m - 1);
            e.push((2, m - 1));
            Ok(e)
        }
        _ => Err(Error::InvalidParameter(format!("{letter}{m}"))),
    }
}

/// (-2)-curves F1..Fm in the given shape, each cut by one transverse curve Ci.
pub fn standard_config(letter: char, m: u32) -> Result<IntersectionLattice> {
    let edges = dynkin_edges(letter, m)?;
    let mut b = LatticeBuilder::new();
    let f: Vec<usize> = (1..=m).map(|i| b.exceptional(format!("F{i}"), -2)).collect();
    let c: Vec<usize> = (1..=m).map(|i| b.transverse(format!("C{i}"))).collect();
    for (x, y) in edges {
        b.meet(f[x], f[y], 1);
    }
    for i in 0..m as usize {
        b.meet(f[i], c[i], 1);
    }
    Ok(b.build())
}

pub fn build_config(kind: &ConfigKind) -> Result<IntersectionLattice> {
    match kind {
        ConfigKind::AString(m) => standard_config('A', *m),
        ConfigKind::DTree(m) => standard_config('D', *m),
        ConfigKind::ETree(m) => standard_config('E', *m),
        ConfigKind::Paper(t) => Ok(resolution_ram(t)?.lattice),
        ConfigKind::Cover(t) => {
            t.validate()?;
            match *t {
                CanonicalType::A12 { e } => standard_config('A', 2 * e - 1),
                CanonicalType::L { n } => standard_config('A', 2 * n + 1),
                CanonicalType::BD { n } => standard_config('D', 2 * n),
                CanonicalType::DL { n } => standard_config('D', 2 * n + 1),
                CanonicalType::Anz { n, e } => standard_config('A', n * e + e - 1),
                _ => Err(Error::InvalidParameter(format!("no cover configuration for {t}"))),
            }
        }
    }
}

/// Artin's algorithm: the smallest positive cycle on `subset` with Z.E <= 0.
pub fn fundamental_cycle(lat: &IntersectionLattice, subset: &[usize]) -> Result<DivisorClass> {
    if subset.is_empty() || !lat.is_connected(subset) {
        return Err(Error::Disconnected);
    }
    if !lat.is_negative_definite(subset) {
        return Err(Error::NotNegativeDefinite);
    }
    let mut z = DivisorClass::zero(lat.len());
    for &i in subset {
        z.coeffs[i] = 1;
    }
    while let Some(&i) = subset.iter().find(|&&i| lat.dot_curve(&z, i) > 0) {
        z.coeffs[i] += 1;
    }
    Ok(z)
}

struct SupportSystem {
    smith: crate::linalg::Smith,
    support: Vec<usize>,
}

impl SupportSystem {
    fn new(lat: &IntersectionLattice, support: &[usize]) -> Self {
        let a: Vec<Vec<i128>> =
            lat.contracted.iter().map(|&k| support.iter().map(|&j| lat.pairing[j][k] as i128).collect()).collect();
        SupportSystem { smith: smith(&a, support.len()), support: support.to_vec() }
    }

    fn rhs(&self, lat: &IntersectionLattice, d: &DivisorClass) -> Vec<i128> {
        let b: Vec<i128> = lat.contracted.iter().map(|&k| lat.dot_curve(d, k) as i128).collect();
        mat_vec(&self.smith.u, &b)
    }
}

/// Integers a_j on `support` with D.F_k = (sum a_j F_j).F_k for every contracted k.
pub fn linear_equivalence_solve(lat: &IntersectionLattice, d: &DivisorClass, support: &[usize]) -> Option<DivisorClass> {
    let sys = SupportSystem::new(lat, support);
    let ub = sys.rhs(lat, d);
    let r = sys.smith.diag.len();
    if ub[r..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut y = vec![0i128; support.len()];
    for i in 0..r {
        let s = sys.smith.diag[i];
        if ub[i] % s != 0 {
            return None;
        }
        y[i] = ub[i] / s;
    }
    let a = mat_vec(&sys.smith.v, &y);
    let mut out = DivisorClass::zero(lat.len());
    for (j, &i) in sys.support.iter().enumerate() {
        out.coeffs[i] = a[j] as i64;
    }
    Some(out)
}

/// Smallest k >= 1 with k D solvable on `support`, read off the Smith form.
pub fn torsion_order(lat: &IntersectionLattice, d: &DivisorClass, support: &[usize]) -> Option<u64> {
    let sys = SupportSystem::new(lat, support);
    let ub = sys.rhs(lat, d);
    let r = sys.smith.diag.len();
    if ub[r..].iter().any(|&x| x != 0) {
        return None;
    }
    let mut k: i128 = 1;
    for i in 0..r {
        let s = sys.smith.diag[i];
        k = k.lcm(&(s / s.gcd(&ub[i])));
    }
    Some(k as u64)
}

/// Smallest k >= 1 with D + perm(D) + ... + perm^{k-1}(D) solvable on `support`.
pub fn twisted_torsion_order(lat: &IntersectionLattice, d: &DivisorClass, support: &[usize], perm: &[usize], limit: u64) -> Option<u64> {
    let mut sum = DivisorClass::zero(lat.len());
    let mut term = d.clone();
    for k in 1..=limit {
        sum = sum.add(&term);
        if linear_equivalence_solve(lat, &sum, support).is_some() {
            return Some(k);
        }
        term = term.permute(perm);
    }
    None
}

/// K.E_i for each exceptional curve, with K = K_Z + sum (1 - 1/e_C) C.
pub fn canonical_degrees(lat: &IntersectionLattice, ram: &[u32]) -> Result<Vec<Rational64>> {
    lat.exceptional()
        .into_iter()
        .map(|i| {
            let c = &lat.curves[i];
            let s = c.self_int.ok_or_else(|| Error::MissingSelfIntersection(c.label.clone()))?;
            let mut k = Rational64::from_integer(-2 - s);
            for (j, &e) in ram.iter().enumerate() {
                if e > 1 && lat.pairing[j][i] != 0 {
                    k += (Rational64::from_integer(1) - Rational64::new(1, e as i64)) * lat.pairing[j][i];
                }
            }
            Ok(k)
        })
        .collect()
}

pub fn canonical_check(res: &ResolutionRamData) -> Result<Vec<Rational64>> {
    canonical_degrees(&res.lattice, &res.ram)
}

/// Graphviz rendering: nodes carry self-intersection and ramification index,
/// edges carry multiplicities above one.
pub fn to_dot(lat: &IntersectionLattice, ram: Option<&[u32]>, name: &str) -> String {
    let mut s = String::new();
    writeln!(s, "graph \"{name}\" {{").unwrap();
    for (i, c) in lat.curves.iter().enumerate() {
        let e = ram.map_or(1, |r| r[i]);
        let mut label = c.label.clone();
        if let Some(si) = c.self_int {
            write!(label, "\\n{si}").unwrap();
        }
        if e > 1 {
            write!(label, "\\ne={e}").unwrap();
        }
        let shape = if c.kind == CurveKind::Exceptional { "ellipse" } else { "box" };
        let style = if e > 1 { ", style=bold, color=red" } else { "" };
        writeln!(s, "  \"{}\" [label=\"{}\", shape={}{}];", c.label, label, shape, style).unwrap();
    }
    for i in 0..lat.len() {
        for j in i + 1..lat.len() {
            let m = lat.pairing[i][j];
            if m > 1 {
                writeln!(s, "  \"{}\" -- \"{}\" [label=\"{}\"];", lat.curves[i].label, lat.curves[j].label, m).unwrap();
            } else if m == 1 {
                writeln!(s, "  \"{}\" -- \"{}\";", lat.curves[i].label, lat.curves[j].label).unwrap();
            }
        }
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_curve() {
        let lat = build_config(&ConfigKind::AString(1)).unwrap();
        assert_eq!(lat.len(), 2);
        assert_eq!(lat.pairing[0][0], -2);
        assert_eq!(lat.pairing[0][1], 1);
        let z = fundamental_cycle(&lat, &[0]).unwrap();
        assert_eq!(z.coeffs, vec![1, 0]);
    }

    #[test]
    fn d4_cycle() {
        let lat = build_config(&ConfigKind::DTree(4)).unwrap();
        let z = fundamental_cycle(&lat, &lat.contracted).unwrap();
        assert_eq!(&z.coeffs[..4], &[1, 2, 1, 1]);
    }

    #[test]
    fn e8_cycle() {
        let lat = build_config(&ConfigKind::ETree(8)).unwrap();
        let z = fundamental_cycle(&lat, &lat.contracted).unwrap();
        let mut c = z.coeffs[..8].to_vec();
        c.sort_unstable();
        assert_eq!(c, vec![2, 2, 3, 3, 4, 4, 5, 6]);
    }

    #[test]
    fn not_definite_or_connected() {
        let mut b = LatticeBuilder::new();
        let x = b.exceptional("E1", -1);
        let y = b.exceptional("E2", -1);
        b.meet(x, y, 1);
        let lat = b.build();
        assert_eq!(fundamental_cycle(&lat, &[0, 1]).unwrap_err(), Error::NotNegativeDefinite);
        let lat = build_config(&ConfigKind::AString(3)).unwrap();
        assert_eq!(fundamental_cycle(&lat, &[0, 2]).unwrap_err(), Error::Disconnected);
    }

    #[test]
    fn zero_divisor_solves_to_zero() {
        let lat = build_config(&ConfigKind::AString(4)).unwrap();
        let d = DivisorClass::zero(lat.len());
        let a = linear_equivalence_solve(&lat, &d, &lat.contracted).unwrap();
        assert!(a.is_zero());
        let f1 = lat.divisor(&[("F1", 1)]);
        assert_eq!(torsion_order(&lat, &f1, &lat.contracted), Some(1));
    }

    #[test]
    fn a12_relation() {
        for e in 1..=4i64 {
            let lat = build_config(&ConfigKind::Cover(CanonicalType::A12 { e: e as u32 })).unwrap();
            let m = 2 * e - 1;
            let d = lat.divisor(&[("C1", 2 * e), (&format!("C{m}"), -2 * e)]);
            let a = linear_equivalence_solve(&lat, &d, &lat.contracted).unwrap();
            for j in 1..=m {
                assert_eq!(a.coeffs[lat.idx(&format!("F{j}"))], j - (2 * e - j));
            }
        }
    }

    #[test]
    fn dot_output() {
        let lat = build_config(&ConfigKind::AString(2)).unwrap();
        let dot = to_dot(&lat, None, "A2");
        assert!(dot.starts_with("graph \"A2\" {"));
        assert!(dot.contains("\"F1\" -- \"F2\";"));
    }
}
