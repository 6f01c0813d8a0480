//! The two sides of the numerical McKay correspondence, the classical McKay
//! quiver for finite subgroups of SL2, and the end-to-end verifier.

mod character;

use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

pub use character::{character_table, CharacterTable};

use crate::cyclotomic::{rat, root_of_unity, CycloNumber};
use crate::error::{Error, Result};
use crate::lattice::{
    build_config, canonical_check, torsion_order, twisted_torsion_order, ConfigKind,
    DivisorClass, IntersectionLattice,
};
use crate::matgroup::{cap_from_env, generate_group, FiniteMatrixGroup, Matrix2};
use crate::ramdata::{
    classify_exceptional, resolution_ram, skew_constructible, CanonicalType, CurveType, Dynkin, Family, Params,
    ResolutionRamData,
};
use crate::twisted::{block_count, build_extension, dihedral_double_cover, idempotent_epsilon, CentralExtension};

fn z(m: u64, k: i64) -> CycloNumber {
    root_of_unity(m, k)
}

fn diag_pair(m: u64) -> Matrix2 {
    Matrix2::diag(z(m, 1), z(m, -1))
}

fn quaternion(a: CycloNumber, b: CycloNumber, c: CycloNumber, d: CycloNumber) -> Matrix2 {
    let i = z(4, 1);
    Matrix2::new(a.add(&b.mul(&i)), c.add(&d.mul(&i)), c.neg().add(&d.mul(&i)), a.sub(&b.mul(&i)))
}

/// Generators of a finite subgroup of SL2 with the given Kleinian resolution graph.
pub fn ade_generators(dynkin: Dynkin, rank: u32) -> Result<Vec<Matrix2>> {
    CanonicalType::ADE { dynkin, rank }.validate()?;
    let half = CycloNumber::from_rational(rat(1, 2));
    let j = Matrix2::from_ints(0, 1, -1, 0);
    let h = |x: i64| CycloNumber::from_int(x);
    let tetra = quaternion(half.clone(), half.clone(), half.clone(), half.clone());
    Ok(match (dynkin, rank) {
        (Dynkin::A, n) => vec![diag_pair(n as u64 + 1)],
        (Dynkin::D, n) => vec![diag_pair(2 * (n as u64 - 2)), j],
        (Dynkin::E, 6) => vec![quaternion(h(0), h(1), h(0), h(0)), j, tetra],
        (Dynkin::E, 7) => vec![quaternion(h(0), h(1), h(0), h(0)), j, tetra, diag_pair(8)],
        (Dynkin::E, _) => {
            let phi_inv = z(5, 1).add(&z(5, 4));
            let phi = phi_inv.add(&CycloNumber::one());
            let icosa = quaternion(phi.mul(&half), phi_inv.mul(&half), half.clone(), h(0));
            vec![tetra, icosa]
        }
    })
}

pub fn ade_group(dynkin: Dynkin, rank: u32) -> Result<FiniteMatrixGroup> {
    generate_group(&ade_generators(dynkin, rank)?, cap_from_env())
}

/// Generators of the group G attached to a canonical type.
pub fn table_generators(t: &CanonicalType) -> Result<Vec<Matrix2>> {
    t.validate()?;
    let swap = Matrix2::from_ints(0, 1, 1, 0);
    let tau = Matrix2::from_ints(0, 1, -1, 0);
    let rho = Matrix2::from_ints(-1, 0, 0, 1);
    Ok(match *t {
        CanonicalType::A12 { e } => {
            let m = 2 * e as u64;
            vec![Matrix2::diag(z(m, 1), CycloNumber::one()), Matrix2::diag(CycloNumber::one(), z(m, 1))]
        }
        CanonicalType::BL { n } => vec![diag_pair(2 * n as u64 + 1), swap],
        CanonicalType::B { n } => vec![diag_pair(2 * n as u64), swap],
        CanonicalType::L { n } => vec![diag_pair(2 * n as u64 + 2), swap],
        CanonicalType::DL { n } => vec![diag_pair(4 * n as u64 - 2), tau, rho],
        CanonicalType::BD { n } => vec![diag_pair(4 * n as u64 - 4), tau, rho],
        CanonicalType::Anz { n, e } => {
            let m = (n as u64 + 1) * e as u64;
            vec![diag_pair(m), Matrix2::diag(CycloNumber::one(), z(m, n as i64 + 1))]
        }
        CanonicalType::ADE { dynkin, rank } => ade_generators(dynkin, rank)?,
    })
}

pub fn table_group(t: &CanonicalType) -> Result<FiniteMatrixGroup> {
    generate_group(&table_generators(t)?, cap_from_env())
}

/// Generators of the normal subgroup H with G/H = Gbar, where the
/// construction goes through an abelian quotient.
fn table_subgroup(t: &CanonicalType, gens: &[Matrix2]) -> Option<Vec<Matrix2>> {
    match *t {
        CanonicalType::A12 { .. } => Some(vec![Matrix2::from_ints(-1, 0, 0, -1)]),
        CanonicalType::BD { .. } => Some(vec![gens[0].mul(&gens[0]), gens[1].clone()]),
        CanonicalType::Anz { e, .. } => {
            let mut s = Matrix2::identity();
            for _ in 0..e {
                s = s.mul(&gens[0]);
            }
            Some(vec![s])
        }
        _ => None,
    }
}

/// The central extension G' of G whose eps-block counts the reflexive modules.
pub fn table_extension(t: &CanonicalType, g: &FiniteMatrixGroup) -> Result<CentralExtension> {
    let gens = table_generators(t)?;
    let (n, e) = t.table_ne();
    match *t {
        CanonicalType::BL { .. } | CanonicalType::B { .. } | CanonicalType::ADE { .. } => {
            Ok(CentralExtension::trivial(g.table.clone(), 1))
        }
        CanonicalType::L { n } => dihedral_double_cover(&g.table, 2 * n + 2, None),
        CanonicalType::DL { .. } => {
            let h = g.subgroup_of(&[gens[0].mul(&gens[0])]).ok_or(Error::NotSubgroup)?;
            let q = g.table.quotient(&h)?;
            dihedral_double_cover(&q.table, 4, Some((&g.table, &q.coset_of)))
        }
        _ => {
            let hg = table_subgroup(t, &gens).expect("abelian quotient construction");
            let h = g.subgroup_of(&hg).ok_or(Error::NotSubgroup)?;
            let q = g.table.quotient(&h)?;
            build_extension(&q.table, n * e, e, Some((&g.table, &q.coset_of)))
        }
    }
}

/// Number of blocks of eps kG' (for ADE: conjugacy classes of H).
pub fn count_from_group(t: &CanonicalType) -> Result<usize> {
    let g = table_group(t)?;
    if let CanonicalType::ADE { .. } = t {
        return Ok(g.table.conjugacy_classes().len());
    }
    let ext = table_extension(t, &g)?;
    let e = ext.e();
    let eps = idempotent_epsilon(e, &z(e as u64, 1), &ext)?;
    block_count(&ext, &eps)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveReport {
    pub label: String,
    pub curve_type: String,
    pub ni: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionCount {
    pub total: usize,
    pub n0: u32,
    pub curves: Vec<CurveReport>,
}

pub fn n0_rule(f: Family) -> u32 {
    match f {
        Family::A12 | Family::BL | Family::B => 2,
        _ => 1,
    }
}

pub fn ni_rule(ty: CurveType) -> Result<u32> {
    match ty {
        CurveType::Zero | CurveType::I(1, _) | CurveType::C(2) | CurveType::X(2) => Ok(1),
        CurveType::I(2, _) => Ok(2),
        other => Err(Error::UnsupportedCurveType(other.to_string())),
    }
}

pub fn count_from_resolution(res: &ResolutionRamData) -> Result<ResolutionCount> {
    let n0 = n0_rule(res.t.family());
    let mut curves = Vec::new();
    let mut total = n0 as usize;
    for i in res.lattice.exceptional() {
        let ty = classify_exceptional(res, i)?;
        let ni = ni_rule(ty)?;
        total += ni as usize;
        curves.push(CurveReport { label: res.label(i).to_string(), curve_type: ty.to_string(), ni });
    }
    Ok(ResolutionCount { total, n0, curves })
}

/// The totals stated case by case for each family.
pub fn closed_form(t: &CanonicalType) -> usize {
    match *t {
        CanonicalType::A12 { .. } => 4,
        CanonicalType::BL { n } | CanonicalType::BD { n } => n as usize + 2,
        CanonicalType::B { n } => n as usize + 3,
        CanonicalType::L { n } | CanonicalType::DL { n } | CanonicalType::Anz { n, .. } => n as usize + 1,
        CanonicalType::ADE { rank, .. } => rank as usize + 1,
    }
}

#[derive(Clone, Debug)]
pub struct McKayQuiver {
    pub dims: Vec<u64>,
    pub adjacency: Vec<Vec<u64>>,
}

impl McKayQuiver {
    pub fn is_symmetric(&self) -> bool {
        let a = &self.adjacency;
        (0..a.len()).all(|i| (0..a.len()).all(|j| a[i][j] == a[j][i]))
    }

    /// 2 d_i = sum_j a_ij d_j for every node.
    pub fn dimension_identity(&self) -> bool {
        self.adjacency
            .iter()
            .zip(&self.dims)
            .all(|(row, &d)| 2 * d == row.iter().zip(&self.dims).map(|(a, dj)| a * dj).sum::<u64>())
    }

    pub fn dims_square_sum(&self) -> u64 {
        self.dims.iter().map(|d| d * d).sum()
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph \"{name}\" {{\n");
        for (i, d) in self.dims.iter().enumerate() {
            s.push_str(&format!("  \"{i}\" [label=\"chi{i}\\nd={d}\"];\n"));
        }
        for i in 0..self.dims.len() {
            for j in i..self.dims.len() {
                for _ in 0..self.adjacency[i][j] {
                    s.push_str(&format!("  \"{i}\" -- \"{j}\";\n"));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

pub fn mckay_quiver(h: &FiniteMatrixGroup) -> Result<McKayQuiver> {
    if !h.is_special_linear() {
        return Err(Error::NotSpecialLinear);
    }
    let table = character_table(&h.table)?;
    let sizes = table.class_sizes();
    let traces: Vec<CycloNumber> = table.representatives.iter().map(|&x| h.elements[x].trace()).collect();
    let r = table.len();
    let inv_order = rat(1, h.order() as i64);
    let mut adjacency = vec![vec![0u64; r]; r];
    for i in 0..r {
        for j in 0..r {
            let s = (0..sizes.len()).fold(CycloNumber::zero(), |acc, c| {
                let term = traces[c].mul(&table.chars[i][c]).mul(&table.chars[j][c].conj());
                acc.add(&term.scale(&rat(sizes[c] as i64, 1)))
            });
            let q = s.scale(&inv_order).to_rational().ok_or_else(|| Error::CharacterTable("irrational multiplicity".into()))?;
            if !q.is_integer() || q < rat(0, 1) {
                return Err(Error::CharacterTable(format!("multiplicity {q} is not a natural number")));
            }
            adjacency[i][j] = q.to_integer().try_into().unwrap_or(0);
        }
    }
    Ok(McKayQuiver { dims: table.degrees(), adjacency })
}

/// Adjacency matrix of the affine Dynkin diagram extending the given type.
pub fn affine_diagram(dynkin: Dynkin, rank: u32) -> Result<Vec<Vec<u64>>> {
    CanonicalType::ADE { dynkin, rank }.validate()?;
    let m = rank as usize;
    let mut edges = crate::lattice::dynkin_edges(dynkin.letter(), rank)?;
    let extra = m;
    match dynkin {
        Dynkin::A if m == 1 => edges.extend([(0, 1), (0, 1)]),
        Dynkin::A => edges.extend([(0, extra), (m - 1, extra)]),
        Dynkin::D => edges.push((1, extra)),
        Dynkin::E => edges.push((
            match m {
                6 => 5,
                7 => 0,
                _ => 6,
            },
            extra,
        )),
    }
    let mut a = vec![vec![0u64; m + 1]; m + 1];
    for (x, y) in edges {
        a[x][y] += 1;
        a[y][x] += 1;
    }
    Ok(a)
}

fn to_graph(a: &[Vec<u64>]) -> UnGraph<(), u64> {
    let mut g = UnGraph::new_undirected();
    let nodes: Vec<_> = (0..a.len()).map(|_| g.add_node(())).collect();
    for i in 0..a.len() {
        for j in i..a.len() {
            if a[i][j] > 0 {
                g.add_edge(nodes[i], nodes[j], a[i][j]);
            }
        }
    }
    g
}

pub fn isomorphic_adjacency(a: &[Vec<u64>], b: &[Vec<u64>]) -> bool {
    a.len() == b.len()
        && petgraph::algo::is_isomorphic_matching(&to_graph(a), &to_graph(b), |_, _| true, |x, y| x == y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCheck {
    pub label: String,
    pub order: Option<u64>,
    pub expected: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct McKayReport {
    #[serde(rename = "type")]
    pub family: Family,
    pub params: Params,
    pub count_resolution: usize,
    pub count_group: usize,
    pub curves: Vec<CurveReport>,
    pub n0: u32,
    pub k_trivial: bool,
    pub torsion: Vec<TorsionCheck>,
    pub agree: bool,
    pub terminal: bool,
    pub skew_constructible: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl McKayReport {
    pub fn canonical_type(&self) -> Result<CanonicalType> {
        CanonicalType::from_parts(self.family, &self.params)
    }

    pub fn torsion_ok(&self) -> bool {
        self.torsion.iter().all(|c| c.order == Some(c.expected))
    }
}

fn labels(lat: &IntersectionLattice, prefix: char, idx: impl IntoIterator<Item = u32>) -> Vec<usize> {
    idx.into_iter().map(|i| lat.idx(&format!("{prefix}{i}"))).collect()
}

fn alternating(lat: &IntersectionLattice, upto: u32) -> DivisorClass {
    let terms: Vec<(usize, i64)> =
        (1..=upto).map(|i| (lat.idx(&format!("C{i}")), if i % 2 == 1 { 1 } else { -1 })).collect();
    DivisorClass::from_terms(lat.len(), &terms)
}

/// Permutation of the cover lattice swapping the two labelled pairs.
fn swap_perm(lat: &IntersectionLattice, pairs: &[(String, String)]) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..lat.len()).collect();
    for (a, b) in pairs {
        let (x, y) = (lat.idx(a), lat.idx(b));
        perm[x] = y;
        perm[y] = x;
    }
    perm
}

/// The torsion checks on the cover lattice of each type.
pub fn torsion_checks(t: &CanonicalType) -> Result<Vec<TorsionCheck>> {
    let check = |label: String, order: Option<u64>, expected: u64| TorsionCheck { label, order, expected };
    Ok(match *t {
        CanonicalType::A12 { e } => {
            let lat = build_config(&ConfigKind::Cover(*t))?;
            let m = 2 * e - 1;
            let d = lat.divisor(&[("C1", 1), (&format!("C{m}"), -1)]);
            let support = labels(&lat, 'F', (1..=m).filter(|&j| j != e));
            vec![check(format!("C1-C{m}"), torsion_order(&lat, &d, &support), e as u64)]
        }
        CanonicalType::L { n } => {
            let lat = build_config(&ConfigKind::Cover(*t))?;
            let d = lat.divisor(&[(&format!("C{}", n + 1), 1), (&format!("C{n}"), -1)]);
            let pairs: Vec<(String, String)> =
                (1..=n).flat_map(|i| [(format!("C{i}"), format!("C{}", 2 * n + 2 - i)), (format!("F{i}"), format!("F{}", 2 * n + 2 - i))]).collect();
            let perm = swap_perm(&lat, &pairs);
            let support = labels(&lat, 'F', [n + 1]);
            vec![check(format!("(1+tau) C{}-C{n}", n + 1), twisted_torsion_order(&lat, &d, &support, &perm, 8), 2)]
        }
        CanonicalType::BD { n } => {
            let lat = build_config(&ConfigKind::Cover(*t))?;
            let d = alternating(&lat, 2 * n - 1);
            let support = labels(&lat, 'F', (1..2 * n).step_by(2));
            vec![check(format!("C1-C2+...+C{}", 2 * n - 1), torsion_order(&lat, &d, &support), 2)]
        }
        CanonicalType::DL { n } => {
            let lat = build_config(&ConfigKind::Cover(*t))?;
            let d = alternating(&lat, 2 * n);
            let pairs = [(format!("C{}", 2 * n), format!("C{}", 2 * n + 1)), (format!("F{}", 2 * n), format!("F{}", 2 * n + 1))];
            let perm = swap_perm(&lat, &pairs);
            let support = labels(&lat, 'F', (1..2 * n).step_by(2));
            vec![check(format!("(1+rho) C1-C2+...-C{}", 2 * n), twisted_torsion_order(&lat, &d, &support, &perm, 8), 2)]
        }
        CanonicalType::Anz { n, e } => {
            let lat = build_config(&ConfigKind::Cover(*t))?;
            let mut terms: Vec<(usize, i64)> = (0..=n).map(|i| (lat.idx(&format!("C{}", i * e + 1)), 1)).collect();
            terms.extend((1..=n).map(|i| (lat.idx(&format!("C{}", i * e)), -1)));
            let d = DivisorClass::from_terms(lat.len(), &terms);
            let support = labels(&lat, 'F', (1..=n * e + e - 1).filter(|j| j % e != 0));
            vec![check("sum C(ie+1) - sum C(ie)".into(), torsion_order(&lat, &d, &support), e as u64)]
        }
        _ => Vec::new(),
    })
}

pub fn verify(t: &CanonicalType) -> Result<McKayReport> {
    let res = resolution_ram(t)?;
    let rc = count_from_resolution(&res)?;
    let count_group = count_from_group(t)?;
    let k_trivial = canonical_check(&res)?.iter().all(|k| *k == num_rational::Rational64::from_integer(0));
    let (n, e) = t.table_ne();
    let skew = skew_constructible(&res, n, e);
    let mut notes = Vec::new();
    for (label, reason) in &skew.failures {
        notes.push(format!("skew-constructible: false ({label}: {reason})"));
    }
    if matches!(t, CanonicalType::DL { .. }) {
        notes.push("group side computed from the dihedral double cover of G/<sigma^2>".into());
    }
    if rc.n0 != n && !matches!(t, CanonicalType::L { .. } | CanonicalType::DL { .. }) {
        notes.push(format!("n0 = {} differs from group-side n = {n}", rc.n0));
    }
    Ok(McKayReport {
        family: t.family(),
        params: t.params(),
        count_resolution: rc.total,
        count_group,
        curves: rc.curves,
        n0: rc.n0,
        k_trivial,
        torsion: torsion_checks(t)?,
        agree: rc.total == count_group,
        terminal: res.is_terminal(),
        skew_constructible: skew.ok,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_group_counts() {
        assert_eq!(count_from_group(&CanonicalType::BL { n: 1 }).unwrap(), 3);
        assert_eq!(count_from_group(&CanonicalType::A12 { e: 2 }).unwrap(), 4);
        assert_eq!(count_from_group(&"A1".parse().unwrap()).unwrap(), 2);
        assert_eq!(count_from_group(&CanonicalType::L { n: 1 }).unwrap(), 2);
    }

    #[test]
    fn binary_polyhedral_orders() {
        assert_eq!(ade_group(Dynkin::E, 6).unwrap().order(), 24);
        assert_eq!(ade_group(Dynkin::E, 7).unwrap().order(), 48);
        assert_eq!(ade_group(Dynkin::E, 8).unwrap().order(), 120);
        assert_eq!(ade_group(Dynkin::D, 5).unwrap().order(), 12);
    }

    #[test]
    fn a1_quiver() {
        let q = mckay_quiver(&ade_group(Dynkin::A, 1).unwrap()).unwrap();
        assert_eq!(q.adjacency, vec![vec![0, 2], vec![2, 0]]);
    }

    #[test]
    fn verify_examples() {
        let r = verify(&CanonicalType::BL { n: 3 }).unwrap();
        assert_eq!((r.count_resolution, r.count_group), (5, 5));
        assert!(r.agree && r.k_trivial);
        let r = verify(&CanonicalType::L { n: 2 }).unwrap();
        assert_eq!((r.count_resolution, r.count_group), (3, 3));
        assert!(!r.skew_constructible);
        let r = verify(&CanonicalType::Anz { n: 2, e: 3 }).unwrap();
        assert_eq!((r.count_resolution, r.count_group), (3, 3));
        assert_eq!(r.torsion[0].order, Some(3));
    }
}
