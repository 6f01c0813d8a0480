//! Ramification data of canonical orders: the base germ, its minimal
//! resolution, terminality and exceptional curve types.

use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lattice::{dynkin_edges, CurveKind, IntersectionLattice, LatticeBuilder};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A12,
    BL,
    B,
    L,
    DL,
    BD,
    Anz,
    ADE,
}

impl Family {
    pub const ALL: [Family; 8] =
        [Family::A12, Family::BL, Family::B, Family::L, Family::DL, Family::BD, Family::Anz, Family::ADE];

    pub fn name(self) -> &'static str {
        match self {
            Family::A12 => "A12",
            Family::BL => "BL",
            Family::B => "B",
            Family::L => "L",
            Family::DL => "DL",
            Family::BD => "BD",
            Family::Anz => "Anz",
            Family::ADE => "ADE",
        }
    }

    pub fn uses_n(self) -> bool {
        !matches!(self, Family::A12 | Family::ADE)
    }

    pub fn uses_e(self) -> bool {
        matches!(self, Family::A12 | Family::Anz)
    }

    /// Smallest admissible n and e.
    pub fn min_n(self) -> u32 {
        match self {
            Family::BD => 2,
            _ => 1,
        }
    }

    pub fn min_e(self) -> u32 {
        match self {
            Family::Anz => 2,
            _ => 1,
        }
    }

    /// Builds the type from CLI-style parameters; unused parameters are ignored.
    pub fn with_params(self, n: u32, e: u32) -> Result<CanonicalType> {
        let t = match self {
            Family::A12 => CanonicalType::A12 { e },
            Family::BL => CanonicalType::BL { n },
            Family::B => CanonicalType::B { n },
            Family::L => CanonicalType::L { n },
            Family::DL => CanonicalType::DL { n },
            Family::BD => CanonicalType::BD { n },
            Family::Anz => CanonicalType::Anz { n, e },
            Family::ADE => return Err(Error::InvalidParameter("ADE types are named like A3, D4, E6".into())),
        };
        t.validate()?;
        Ok(t)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let find = |x: &str| Family::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(x));
        find(s)
            .or_else(|| s.strip_suffix("_n").and_then(find))
            .or_else(|| s.strip_suffix('n').and_then(find))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown family {s}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dynkin {
    A,
    D,
    E,
}

impl Dynkin {
    pub fn letter(self) -> char {
        match self {
            Dynkin::A => 'A',
            Dynkin::D => 'D',
            Dynkin::E => 'E',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CanonicalType {
    A12 { e: u32 },
    BL { n: u32 },
    B { n: u32 },
    L { n: u32 },
    DL { n: u32 },
    BD { n: u32 },
    Anz { n: u32, e: u32 },
    ADE { dynkin: Dynkin, rank: u32 },
}

impl CanonicalType {
    pub fn family(&self) -> Family {
        match self {
            CanonicalType::A12 { .. } => Family::A12,
            CanonicalType::BL { .. } => Family::BL,
            CanonicalType::B { .. } => Family::B,
            CanonicalType::L { .. } => Family::L,
            CanonicalType::DL { .. } => Family::DL,
            CanonicalType::BD { .. } => Family::BD,
            CanonicalType::Anz { .. } => Family::Anz,
            CanonicalType::ADE { .. } => Family::ADE,
        }
    }

    pub fn n(&self) -> Option<u32> {
        match *self {
            CanonicalType::BL { n }
            | CanonicalType::B { n }
            | CanonicalType::L { n }
            | CanonicalType::DL { n }
            | CanonicalType::BD { n }
            | CanonicalType::Anz { n, .. } => Some(n),
            _ => None,
        }
    }

    pub fn e(&self) -> Option<u32> {
        match *self {
            CanonicalType::A12 { e } | CanonicalType::Anz { e, .. } => Some(e),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            CanonicalType::A12 { e } => e >= 1,
            CanonicalType::BL { n } | CanonicalType::B { n } | CanonicalType::L { n } | CanonicalType::DL { n } => n >= 1,
            CanonicalType::BD { n } => n >= 2,
            CanonicalType::Anz { n, e } => n >= 1 && e >= 2,
            CanonicalType::ADE { dynkin, rank } => match dynkin {
                Dynkin::A => rank >= 1,
                Dynkin::D => rank >= 4,
                Dynkin::E => (6..=8).contains(&rank),
            },
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("{self} is outside the valid range")))
        }
    }

    /// The (n, e) with Gbar = Z/ne x Z/e used by the skew group construction.
    pub fn table_ne(&self) -> (u32, u32) {
        match *self {
            CanonicalType::A12 { e } => (2, e),
            CanonicalType::BL { .. } | CanonicalType::B { .. } => (2, 1),
            CanonicalType::BD { .. } | CanonicalType::L { .. } | CanonicalType::DL { .. } => (1, 2),
            CanonicalType::Anz { e, .. } => (1, e),
            CanonicalType::ADE { .. } => (1, 1),
        }
    }

    pub fn params(&self) -> Params {
        match *self {
            CanonicalType::ADE { dynkin, rank } => {
                Params { n: None, e: None, dynkin: Some(format!("{}{}", dynkin.letter(), rank)) }
            }
            _ => Params { n: self.n(), e: self.e(), dynkin: None },
        }
    }

    pub fn from_parts(family: Family, p: &Params) -> Result<Self> {
        if family == Family::ADE {
            let d = p.dynkin.as_deref().ok_or_else(|| Error::InvalidParameter("missing dynkin".into()))?;
            return d.parse();
        }
        let need = |v: Option<u32>, what: &str| v.ok_or_else(|| Error::InvalidParameter(format!("missing {what}")));
        let n = if family.uses_n() { need(p.n, "n")? } else { 0 };
        let e = if family.uses_e() { need(p.e, "e")? } else { 0 };
        family.with_params(n, e)
    }
}

impl fmt::Display for CanonicalType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CanonicalType::A12 { e } => write!(f, "A12(e={e})"),
            CanonicalType::Anz { n, e } => write!(f, "Anz(n={n},e={e})"),
            CanonicalType::ADE { dynkin, rank } => write!(f, "{}{}", dynkin.letter(), rank),
            t => write!(f, "{}(n={})", t.family(), t.n().unwrap()),
        }
    }
}

impl FromStr for CanonicalType {
    type Err = Error;

    /// Parses ADE names such as "A3", "D5", "E8".
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("not an ADE type: {s}"));
        let mut chars = s.trim().chars();
        let dynkin = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Dynkin::A,
            Some('D') => Dynkin::D,
            Some('E') => Dynkin::E,
            _ => return Err(bad()),
        };
        let rank: u32 = chars.as_str().parse().map_err(|_| bad())?;
        let t = CanonicalType::ADE { dynkin, rank };
        t.validate()?;
        Ok(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub e: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dynkin: Option<String>,
}

/// Intersection multiplicity; rational on the A_n germ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Mult(pub Rational64);

impl Serialize for Mult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_integer() {
            s.serialize_i64(self.0.to_integer())
        } else {
            s.serialize_str(&format!("{}/{}", self.0.numer(), self.0.denom()))
        }
    }
}

impl<'de> Deserialize<'de> for Mult {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(i) => Ok(Mult(Rational64::from_integer(i))),
            Raw::Str(s) => {
                let (p, q) = s.split_once('/').ok_or_else(|| serde::de::Error::custom("expected p/q"))?;
                let p: i64 = p.trim().parse().map_err(serde::de::Error::custom)?;
                let q: i64 = q.trim().parse().map_err(serde::de::Error::custom)?;
                if q == 0 {
                    return Err(serde::de::Error::custom("zero denominator"));
                }
                Ok(Mult(Rational64::new(p, q)))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamCurve {
    pub label: String,
    #[serde(rename = "eC")]
    pub e_c: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intersection {
    pub a: String,
    pub b: String,
    pub point: String,
    pub mult: Mult,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Secondary {
    pub curve: String,
    pub point: String,
    pub ep: u32,
}

/// Ramification data on the base germ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RamData {
    #[serde(rename = "type")]
    pub family: Family,
    pub params: Params,
    pub curves: Vec<RamCurve>,
    pub intersections: Vec<Intersection>,
    pub secondary: Vec<Secondary>,
}

impl RamData {
    pub fn canonical_type(&self) -> Result<CanonicalType> {
        CanonicalType::from_parts(self.family, &self.params)
    }
}

pub fn canonical_ram(t: &CanonicalType) -> Result<RamData> {
    t.validate()?;
    let int = Rational64::from_integer;
    let (curves, meets, eps): (Vec<(&str, u32)>, Vec<(&str, &str, Rational64)>, Vec<u32>) = match *t {
        CanonicalType::A12 { e } => (vec![("u=0", 2 * e), ("v=0", 2 * e)], vec![("u=0", "v=0", int(1))], vec![e, e]),
        CanonicalType::BL { .. } => (vec![("C", 2)], vec![], vec![1]),
        CanonicalType::B { n } => (vec![("v=u^n", 2), ("v=-u^n", 2)], vec![("v=u^n", "v=-u^n", int(n as i64))], vec![1, 1]),
        CanonicalType::L { n } => {
            (vec![("v=u^(n+1)", 2), ("v=-u^(n+1)", 2)], vec![("v=u^(n+1)", "v=-u^(n+1)", int(n as i64 + 1))], vec![2, 2])
        }
        CanonicalType::DL { .. } => (vec![("u=0", 2), ("v^2=u^(2n-1)", 2)], vec![("u=0", "v^2=u^(2n-1)", int(2))], vec![2, 2]),
        CanonicalType::BD { n } => (
            vec![("u=0", 2), ("v=u^(n-1)", 2), ("v=-u^(n-1)", 2)],
            vec![
                ("u=0", "v=u^(n-1)", int(1)),
                ("u=0", "v=-u^(n-1)", int(1)),
                ("v=u^(n-1)", "v=-u^(n-1)", int(n as i64 - 1)),
            ],
            vec![2, 2, 1],
        ),
        CanonicalType::Anz { n, e } => {
            (vec![("w=0=u", e), ("w=0=v", e)], vec![("w=0=u", "w=0=v", Rational64::new(1, n as i64 + 1))], vec![e, e])
        }
        CanonicalType::ADE { .. } => (vec![], vec![], vec![]),
    };
    let mut base_curves: Vec<RamCurve> = curves.iter().map(|&(l, e)| RamCurve { label: l.to_string(), e_c: e }).collect();
    // the BL curve is named by its equation
    if let CanonicalType::BL { .. } = t {
        base_curves[0].label = "v^2=u^(2n+1)".into();
    }
    let intersections = meets
        .into_iter()
        .map(|(a, b, m)| Intersection { a: a.into(), b: b.into(), point: "p".into(), mult: Mult(m) })
        .collect();
    let secondary = base_curves
        .iter()
        .zip(eps)
        .map(|(c, ep)| Secondary { curve: c.label.clone(), point: "p".into(), ep })
        .collect();
    Ok(RamData { family: t.family(), params: t.params(), curves: base_curves, intersections, secondary })
}

/// A point of the resolution where several curves meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResPoint {
    pub label: String,
    pub curves: Vec<usize>,
    /// Local intersection multiplicity of each pair of curves at this point.
    pub mults: Vec<(usize, usize, i64)>,
}

impl ResPoint {
    pub fn mult(&self, a: usize, b: usize) -> i64 {
        self.mults.iter().find(|&&(x, y, _)| (x, y) == (a, b) || (x, y) == (b, a)).map_or(0, |m| m.2)
    }
}

/// Ramification data on the minimal resolution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionRamData {
    pub t: CanonicalType,
    pub lattice: IntersectionLattice,
    /// Primary index per lattice curve.
    pub ram: Vec<u32>,
    pub points: Vec<ResPoint>,
    pub secondary: Vec<Secondary>,
}

#[derive(Default)]
struct ResBuilder {
    lat: LatticeBuilder,
    labels: Vec<String>,
    ram: Vec<u32>,
    points: Vec<ResPoint>,
}

impl ResBuilder {
    fn exc(&mut self, label: String, self_int: i64, e: u32) -> usize {
        self.labels.push(label.clone());
        self.ram.push(e);
        self.lat.exceptional(label, self_int)
    }

    fn tr(&mut self, label: &str, e: u32) -> usize {
        self.labels.push(label.into());
        self.ram.push(e);
        self.lat.transverse(label)
    }

    /// Curves pairwise meeting at one point, each pair with multiplicity `m`.
    fn point(&mut self, curves: &[usize], m: i64) {
        let mut mults = Vec::new();
        for (i, &a) in curves.iter().enumerate() {
            for &b in &curves[i + 1..] {
                self.lat.meet(a, b, m);
                mults.push((a, b, m));
            }
        }
        let names: Vec<&str> = curves.iter().map(|&c| self.labels[c].as_str()).collect();
        self.points.push(ResPoint { label: format!("p({})", names.join(",")), curves: curves.to_vec(), mults });
    }

    fn string(&mut self, n: u32, last_self: i64, e: u32) -> Vec<usize> {
        let es: Vec<usize> =
            (1..=n).map(|i| self.exc(format!("E{i}"), if i == n { last_self } else { -2 }, e)).collect();
        for w in es.windows(2) {
            self.point(w, 1);
        }
        es
    }

    fn finish(self, t: CanonicalType) -> ResolutionRamData {
        let lattice = self.lat.build();
        let mut secondary = Vec::new();
        for p in &self.points {
            let ramified: Vec<usize> = p.curves.iter().copied().filter(|&c| self.ram[c] > 1).collect();
            if ramified.len() == 2 {
                let ep = ramified.iter().map(|&c| self.ram[c]).min().unwrap();
                for &c in &ramified {
                    secondary.push(Secondary { curve: self.labels[c].clone(), point: p.label.clone(), ep });
                }
            }
        }
        ResolutionRamData { t, lattice, ram: self.ram, points: self.points, secondary }
    }
}

pub fn resolution_ram(t: &CanonicalType) -> Result<ResolutionRamData> {
    t.validate()?;
    let mut b = ResBuilder::default();
    match *t {
        CanonicalType::A12 { e } => {
            let ex = b.exc("E1".into(), -1, e);
            let u = b.tr("U", 2 * e);
            let v = b.tr("V", 2 * e);
            b.point(&[ex, u], 1);
            b.point(&[ex, v], 1);
        }
        CanonicalType::BL { n } => {
            let es = b.string(n, -1, 1);
            let d = b.tr("D", 2);
            b.point(&[es[n as usize - 1], d], 2);
        }
        CanonicalType::B { n } => {
            let es = b.string(n, -1, 1);
            let last = es[n as usize - 1];
            let d1 = b.tr("D1", 2);
            let d2 = b.tr("D2", 2);
            b.point(&[last, d1], 1);
            b.point(&[last, d2], 1);
        }
        CanonicalType::L { n } => {
            let es = b.string(n, -1, 1);
            let u = b.tr("U", 2);
            let v = b.tr("V", 2);
            b.point(&[es[n as usize - 1], u, v], 1);
        }
        CanonicalType::DL { n: 1 } => {
            let ex = b.exc("E1".into(), -1, 1);
            let d1 = b.tr("D1", 2);
            let d2 = b.tr("D2", 2);
            b.point(&[ex, d1, d2], 1);
        }
        CanonicalType::DL { n } => {
            let n = n as usize;
            let mut es: Vec<usize> = (1..n).map(|i| b.exc(format!("E{i}"), -2, 2)).collect();
            es.push(b.exc(format!("E{n}"), -1, 1));
            for w in es[..n - 1].windows(2) {
                b.point(w, 1);
            }
            let d1 = b.tr("D1", 2);
            let d2 = b.tr("D2", 2);
            b.point(&[es[0], d1], 1);
            b.point(&[es[n - 2], es[n - 1], d2], 1);
        }
        CanonicalType::BD { n } => {
            let n = n as usize;
            let mut es: Vec<usize> = (1..n).map(|i| b.exc(format!("E{i}"), -2, 2)).collect();
            es.push(b.exc(format!("E{n}"), -1, 1));
            for w in es.windows(2) {
                b.point(w, 1);
            }
            let d1 = b.tr("D1", 2);
            let d2 = b.tr("D2", 2);
            let d3 = b.tr("D3", 2);
            b.point(&[es[0], d1], 1);
            b.point(&[es[n - 2], d2], 1);
            b.point(&[es[n - 1], d3], 1);
        }
        CanonicalType::Anz { n, e } => {
            let es = b.string(n, -2, e);
            let d0 = b.tr("D0", e);
            let d1 = b.tr("D1", e);
            b.point(&[es[0], d0], 1);
            b.point(&[es[n as usize - 1], d1], 1);
        }
        CanonicalType::ADE { dynkin, rank } => {
            let es: Vec<usize> = (1..=rank).map(|i| b.exc(format!("E{i}"), -2, 1)).collect();
            for (x, y) in dynkin_edges(dynkin.letter(), rank)? {
                b.point(&[es[x], es[y]], 1);
            }
        }
    }
    Ok(b.finish(*t))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Branch {
    pub e: u32,
    pub secondary: u32,
}

/// Ramification at one point: the curves through it and whether each pair
/// of ramified branches crosses transversally.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRamification {
    pub branches: Vec<Branch>,
    pub normal_crossing: bool,
}

pub fn is_terminal(local: &LocalRamification) -> bool {
    let mut br: Vec<Branch> = local.branches.iter().copied().filter(|b| b.e > 1).collect();
    br.sort_by_key(|b| b.e);
    match br.as_slice() {
        [] => true,
        [b] => b.secondary == 1,
        [b1, b2] => local.normal_crossing && b2.e % b1.e == 0 && b1.secondary == b1.e && b2.secondary == b1.e,
        _ => false,
    }
}

impl ResolutionRamData {
    pub fn label(&self, i: usize) -> &str {
        &self.lattice.curves[i].label
    }

    pub fn secondary_at(&self, curve: usize, point: &str) -> u32 {
        let l = self.label(curve);
        self.secondary.iter().find(|s| s.curve == l && s.point == point).map_or(1, |s| s.ep)
    }

    pub fn local(&self, p: &ResPoint) -> LocalRamification {
        let ramified: Vec<usize> = p.curves.iter().copied().filter(|&c| self.ram[c] > 1).collect();
        let normal_crossing = ramified
            .iter()
            .enumerate()
            .all(|(i, &a)| ramified[i + 1..].iter().all(|&b| p.mult(a, b) == 1));
        let branches =
            p.curves.iter().map(|&c| Branch { e: self.ram[c], secondary: self.secondary_at(c, &p.label) }).collect();
        LocalRamification { branches, normal_crossing }
    }

    /// Points failing terminality, plus secondary data recorded at unknown points.
    pub fn terminality_violations(&self) -> Vec<String> {
        let mut out: Vec<String> =
            self.points.iter().filter(|p| !is_terminal(&self.local(p))).map(|p| p.label.clone()).collect();
        for s in &self.secondary {
            let known = self.points.iter().any(|p| p.label == s.point && p.curves.iter().any(|&c| self.label(c) == s.curve));
            if !known && s.ep != 1 {
                out.push(format!("{}@{}", s.curve, s.point));
            }
        }
        out
    }

    pub fn is_terminal(&self) -> bool {
        self.terminality_violations().is_empty()
    }

    pub fn to_json(&self) -> ResolutionJson {
        let curves = self
            .lattice
            .curves
            .iter()
            .zip(&self.ram)
            .map(|(c, &e)| ResCurveJson { label: c.label.clone(), e_c: e, kind: c.kind, self_int: c.self_int })
            .collect();
        let mut intersections = Vec::new();
        for p in &self.points {
            for &(a, b, m) in &p.mults {
                intersections.push(Intersection {
                    a: self.label(a).into(),
                    b: self.label(b).into(),
                    point: p.label.clone(),
                    mult: Mult(Rational64::from_integer(m)),
                });
            }
        }
        ResolutionJson {
            family: self.t.family(),
            params: self.t.params(),
            curves,
            intersections,
            secondary: self.secondary.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResCurveJson {
    pub label: String,
    #[serde(rename = "eC")]
    pub e_c: u32,
    pub kind: CurveKind,
    #[serde(rename = "selfInt", skip_serializing_if = "Option::is_none", default)]
    pub self_int: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResolutionJson {
    #[serde(rename = "type")]
    pub family: Family,
    pub params: Params,
    pub curves: Vec<ResCurveJson>,
    pub intersections: Vec<Intersection>,
    pub secondary: Vec<Secondary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CurveType {
    Zero,
    I(u32, u32),
    C(u32),
    X(u32),
}

impl fmt::Display for CurveType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CurveType::Zero => write!(f, "0"),
            CurveType::I(a, b) => write!(f, "I({a},{b})"),
            CurveType::C(n) => write!(f, "C({n})"),
            CurveType::X(e) => write!(f, "X({e})"),
        }
    }
}

pub fn classify_exceptional(res: &ResolutionRamData, curve: usize) -> Result<CurveType> {
    let lat = &res.lattice;
    let label = || res.label(curve).to_string();
    if lat.curves[curve].kind != CurveKind::Exceptional {
        return Err(Error::Unclassifiable(format!("{} is not exceptional", label())));
    }
    let e_e = res.ram[curve];
    let nbrs: Vec<usize> =
        (0..lat.len()).filter(|&j| j != curve && res.ram[j] > 1 && lat.pairing[curve][j] > 0).collect();
    let mult = |j: usize| lat.pairing[curve][j];
    match nbrs.as_slice() {
        [] if e_e == 1 => Ok(CurveType::Zero),
        [u] if e_e == 1 && mult(*u) == 2 => Ok(CurveType::C(res.ram[*u])),
        [u, v] if mult(*u) == 1 && mult(*v) == 1 && res.ram[*u] == res.ram[*v] => {
            let eu = res.ram[*u];
            if lat.pairing[*u][*v] == 0 {
                if eu % e_e == 0 {
                    return Ok(CurveType::I(eu / e_e, e_e));
                }
            } else if e_e == 1 {
                return Ok(CurveType::X(eu));
            }
            Err(Error::Unclassifiable(label()))
        }
        _ => Err(Error::Unclassifiable(label())),
    }
}

/// Result of the skew group constructibility test; `failures` lists the
/// curves matching none of the allowed clauses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructibility {
    pub ok: bool,
    pub failures: Vec<(String, String)>,
}

pub fn skew_constructible(res: &ResolutionRamData, n: u32, e: u32) -> Constructibility {
    let mut failures = Vec::new();
    for i in res.lattice.exceptional() {
        let reason = match classify_exceptional(res, i) {
            Ok(CurveType::Zero) => None,
            Ok(CurveType::I(a, b)) if (a, b) == (n, e) => None,
            Ok(CurveType::C(2)) if (n, e) == (2, 1) => None,
            Ok(CurveType::I(a, 1)) if a == e && n == 1 => None,
            Ok(ty) => Some(format!("type {ty} not allowed for (n,e)=({n},{e})")),
            Err(err) => Some(err.to_string()),
        };
        if let Some(r) = reason {
            failures.push((res.label(i).to_string(), r));
        }
    }
    Constructibility { ok: failures.is_empty(), failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_parse() {
        assert_eq!("BDn".parse::<Family>().unwrap(), Family::BD);
        assert_eq!("bl".parse::<Family>().unwrap(), Family::BL);
        assert_eq!("Anz".parse::<Family>().unwrap(), Family::Anz);
        assert_eq!("L_n".parse::<Family>().unwrap(), Family::L);
        assert!("Q".parse::<Family>().is_err());
        assert_eq!("E7".parse::<CanonicalType>().unwrap(), CanonicalType::ADE { dynkin: Dynkin::E, rank: 7 });
        assert!("E9".parse::<CanonicalType>().is_err());
        assert!("D3".parse::<CanonicalType>().is_err());
    }

    #[test]
    fn validity() {
        assert!(CanonicalType::BD { n: 1 }.validate().is_err());
        assert!(CanonicalType::Anz { n: 1, e: 1 }.validate().is_err());
        assert!(CanonicalType::A12 { e: 0 }.validate().is_err());
        assert!(Family::BD.with_params(0, 1).is_err());
    }

    #[test]
    fn base_rows() {
        assert!(canonical_ram(&"A2".parse().unwrap()).unwrap().curves.is_empty());
        let a = canonical_ram(&CanonicalType::A12 { e: 3 }).unwrap();
        assert_eq!(a.curves.iter().map(|c| c.e_c).collect::<Vec<_>>(), vec![6, 6]);
        assert!(a.secondary.iter().all(|s| s.ep == 3));
        let bd = canonical_ram(&CanonicalType::BD { n: 3 }).unwrap();
        assert_eq!(bd.secondary.iter().map(|s| s.ep).collect::<Vec<_>>(), vec![2, 2, 1]);
        for t in [CanonicalType::BD { n: 3 }, CanonicalType::L { n: 2 }, CanonicalType::Anz { n: 2, e: 3 }] {
            let r = canonical_ram(&t).unwrap();
            for s in &r.secondary {
                let c = r.curves.iter().find(|c| c.label == s.curve).unwrap();
                assert_eq!(c.e_c % s.ep, 0);
            }
        }
    }

    #[test]
    fn json_roundtrip() {
        let r = canonical_ram(&CanonicalType::Anz { n: 2, e: 3 }).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"mult\":\"1/3\""));
        assert!(s.contains("\"type\":\"Anz\""));
        let back: RamData = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
        assert_eq!(back.canonical_type().unwrap(), CanonicalType::Anz { n: 2, e: 3 });
    }

    #[test]
    fn curve_types() {
        let a = resolution_ram(&CanonicalType::A12 { e: 2 }).unwrap();
        assert_eq!(classify_exceptional(&a, 0).unwrap(), CurveType::I(2, 2));
        let bl = resolution_ram(&CanonicalType::BL { n: 3 }).unwrap();
        assert_eq!(classify_exceptional(&bl, 2).unwrap(), CurveType::C(2));
        assert_eq!(classify_exceptional(&bl, 0).unwrap(), CurveType::Zero);
        let dl = resolution_ram(&CanonicalType::DL { n: 3 }).unwrap();
        assert_eq!(classify_exceptional(&dl, 2).unwrap(), CurveType::X(2));
        assert_eq!(classify_exceptional(&dl, 0).unwrap(), CurveType::I(1, 2));
        assert!(classify_exceptional(&dl, 3).is_err());
    }

    #[test]
    fn terminal_points() {
        let b = |e, secondary| Branch { e, secondary };
        assert!(is_terminal(&LocalRamification { branches: vec![b(2, 2), b(6, 2)], normal_crossing: true }));
        assert!(!is_terminal(&LocalRamification { branches: vec![b(2, 1), b(3, 1)], normal_crossing: true }));
        assert!(!is_terminal(&LocalRamification { branches: vec![b(2, 2); 3], normal_crossing: true }));
        assert!(!is_terminal(&LocalRamification { branches: vec![b(2, 2); 2], normal_crossing: false }));
        assert!(is_terminal(&LocalRamification { branches: vec![b(1, 1), b(2, 1)], normal_crossing: false }));
        let l = resolution_ram(&CanonicalType::L { n: 2 }).unwrap();
        assert!(l.is_terminal());
        assert_eq!(l.points.last().unwrap().label, "p(E2,U,V)");
    }

    #[test]
    fn constructible() {
        let bl = resolution_ram(&CanonicalType::BL { n: 2 }).unwrap();
        assert!(skew_constructible(&bl, 2, 1).ok);
        let l = resolution_ram(&CanonicalType::L { n: 2 }).unwrap();
        let c = skew_constructible(&l, 1, 2);
        assert!(!c.ok);
        assert_eq!(c.failures[0].0, "E2");
    }
}
