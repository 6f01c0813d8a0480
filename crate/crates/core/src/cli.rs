//! Command-line front end: `verify`, `table`, `quiver`, `lattice`.
//!
//! Exit codes: 0 when every report agrees, 1 on a disagreement or failed
//! computation, 2 on usage or parameter errors.

use std::fmt::Write as _;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{build_config, to_dot, ConfigKind};
use crate::mckay::{ade_group, affine_diagram, isomorphic_adjacency, mckay_quiver, verify, McKayReport};
use crate::ramdata::{resolution_ram, CanonicalType, Dynkin, Family};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DISAGREE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "canord", version, about = "Numerical McKay correspondence for canonical orders")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Verify one canonical type.
    Verify(TypeArgs),
    /// Sweep families and parameter ranges.
    Table(TableArgs),
    /// McKay quiver of a finite subgroup of SL2.
    Quiver(QuiverArgs),
    /// Curve configuration of a resolution.
    Lattice(LatticeArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args, Debug)]
pub struct TypeArgs {
    /// Family (A12, BL, B, L, DL, BD, Anz) or an ADE name such as D5.
    #[arg(long = "type")]
    pub family: String,
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long)]
    pub e: Option<u32>,
    /// ADE name when `--type ADE` is given.
    #[arg(long)]
    pub dynkin: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    /// Comma separated families; all families when omitted.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub families: Option<Vec<String>>,
    #[arg(long = "n", default_value = "1..6", value_parser = parse_range)]
    pub n_range: RangeInclusive<u32>,
    #[arg(long = "e", default_value = "1..4", value_parser = parse_range)]
    pub e_range: RangeInclusive<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct QuiverArgs {
    /// ADE name of the group: A1.., D4.., E6, E7, E8.
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub dot: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub ty: TypeArgs,
    #[arg(long)]
    pub dot: bool,
    /// Resolution of the cyclic cover instead of the minimal resolution.
    #[arg(long)]
    pub cover: bool,
}

/// Parses `a..b`, `a..=b` or a single integer.
pub fn parse_range(s: &str) -> std::result::Result<RangeInclusive<u32>, String> {
    let num = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("bad bound {x:?}: {e}"));
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
        None => {
            let v = num(s)?;
            v..=v
        }
    };
    if r.is_empty() {
        return Err(format!("empty range {s}"));
    }
    Ok(r)
}

impl TypeArgs {
    pub fn canonical_type(&self) -> Result<CanonicalType> {
        match self.family.parse::<Family>() {
            Ok(Family::ADE) => {
                let d = self.dynkin.as_deref().ok_or_else(|| Error::InvalidParameter("--type ADE needs --dynkin".into()))?;
                d.parse()
            }
            Ok(f) => {
                let need = |v: Option<u32>, flag: &str| {
                    v.ok_or_else(|| Error::InvalidParameter(format!("{f} needs --{flag}")))
                };
                let n = if f.uses_n() { need(self.n, "n")? } else { 0 };
                let e = if f.uses_e() { need(self.e, "e")? } else { 0 };
                f.with_params(n, e)
            }
            Err(_) => self.family.parse::<CanonicalType>().map_err(|_| Error::Unknown(format!("type {}", self.family))),
        }
    }
}

fn ade_sweep() -> Vec<CanonicalType> {
    let mut v: Vec<CanonicalType> = (1..=6).map(|rank| CanonicalType::ADE { dynkin: Dynkin::A, rank }).collect();
    v.extend((4..=6).map(|rank| CanonicalType::ADE { dynkin: Dynkin::D, rank }));
    v.extend((6..=8).map(|rank| CanonicalType::ADE { dynkin: Dynkin::E, rank }));
    v
}

/// Every case of the sweep, clipped to each family's valid range and sorted.
pub fn sweep_cases(families: &[Family], n: &RangeInclusive<u32>, e: &RangeInclusive<u32>) -> Result<Vec<CanonicalType>> {
    let mut out = Vec::new();
    for &f in families {
        if f == Family::ADE {
            out.extend(ade_sweep());
            continue;
        }
        let ns: Vec<u32> = if f.uses_n() { (*n.start()).max(f.min_n())..=*n.end() } else { 0..=0 }.collect();
        let es: Vec<u32> = if f.uses_e() { (*e.start()).max(f.min_e())..=*e.end() } else { 0..=0 }.collect();
        for &nv in &ns {
            for &ev in &es {
                out.push(f.with_params(nv, ev)?);
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn report_text(r: &McKayReport) -> String {
    let t = r.canonical_type().map(|t| t.to_string()).unwrap_or_else(|_| r.family.to_string());
    let mut s = String::new();
    writeln!(
        s,
        "{t}: resolution {} group {} {}",
        r.count_resolution,
        r.count_group,
        if r.agree { "agree" } else { "DISAGREE" }
    )
    .unwrap();
    writeln!(s, "  n0 = {}", r.n0).unwrap();
    for c in &r.curves {
        writeln!(s, "  {:<4} type {:<7} n_i = {}", c.label, c.curve_type, c.ni).unwrap();
    }
    writeln!(s, "  K trivial: {}", r.k_trivial).unwrap();
    writeln!(s, "  terminal: {}", r.terminal).unwrap();
    writeln!(s, "  skew-constructible: {}", r.skew_constructible).unwrap();
    for c in &r.torsion {
        let order = c.order.map_or("none".to_string(), |o| o.to_string());
        writeln!(s, "  torsion {}: {} (expected {})", c.label, order, c.expected).unwrap();
    }
    for note in &r.notes {
        writeln!(s, "  note: {note}").unwrap();
    }
    s
}

fn table_text(reports: &[McKayReport]) -> String {
    let mut s = String::new();
    writeln!(s, "{:<16} {:>4} {:>4} {:<7} {:<9} {:<24} curves", "type", "res", "grp", "agree", "K", "torsion").unwrap();
    for r in reports {
        let t = r.canonical_type().map(|t| t.to_string()).unwrap_or_default();
        let torsion: Vec<String> =
            r.torsion.iter().map(|c| format!("{}/{}", c.order.map_or("-".into(), |o| o.to_string()), c.expected)).collect();
        let curves: Vec<String> = r.curves.iter().map(|c| c.curve_type.clone()).collect();
        writeln!(
            s,
            "{:<16} {:>4} {:>4} {:<7} {:<9} {:<24} {}",
            t,
            r.count_resolution,
            r.count_group,
            r.agree,
            if r.k_trivial { "trivial" } else { "NONZERO" },
            if torsion.is_empty() { "-".into() } else { torsion.join(",") },
            curves.join(" ")
        )
        .unwrap();
    }
    s
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn emit(text: &str, output: &Option<PathBuf>, out: &mut dyn Write) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Unknown(format!("output {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Error::Unknown(format!("stdout: {e}"))),
    }
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::Unknown(_) | Error::CapExceeded(_) => EXIT_USAGE,
        _ => EXIT_DISAGREE,
    }
}

fn cmd_verify(a: &TypeArgs, out: &mut dyn Write) -> Result<i32> {
    let t = a.canonical_type()?;
    let r = verify(&t)?;
    let text = match a.format {
        Format::Json => to_json(&r),
        _ => report_text(&r),
    };
    emit(&text, &a.output, out)?;
    Ok(if r.agree { EXIT_OK } else { EXIT_DISAGREE })
}

fn cmd_table(a: &TableArgs, out: &mut dyn Write) -> Result<i32> {
    let families: Vec<Family> = match &a.families {
        None => Family::ALL.to_vec(),
        Some(list) => {
            let list: Vec<&String> = list.iter().filter(|s| !s.trim().is_empty()).collect();
            if list.is_empty() {
                return Err(Error::InvalidParameter("empty family list".into()));
            }
            list.iter().map(|s| s.parse()).collect::<Result<_>>()?
        }
    };
    let cases = sweep_cases(&families, &a.n_range, &a.e_range)?;
    let reports: Vec<McKayReport> = cases.par_iter().map(verify).collect::<Result<_>>()?;
    let text = match a.format {
        Format::Json => to_json(&reports),
        _ => table_text(&reports),
    };
    emit(&text, &a.output, out)?;
    Ok(if reports.iter().all(|r| r.agree) { EXIT_OK } else { EXIT_DISAGREE })
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct QuiverJson {
    group: String,
    order: usize,
    dims: Vec<u64>,
    adjacency: Vec<Vec<u64>>,
    affine_match: bool,
}

fn cmd_quiver(a: &QuiverArgs, out: &mut dyn Write) -> Result<i32> {
    let t: CanonicalType = a.group.parse().map_err(|_| Error::Unknown(format!("group {}", a.group)))?;
    let CanonicalType::ADE { dynkin, rank } = t else { unreachable!("ADE parse") };
    let h = ade_group(dynkin, rank)?;
    let q = mckay_quiver(&h)?;
    let matches = isomorphic_adjacency(&q.adjacency, &affine_diagram(dynkin, rank)?);
    let format = if a.dot { Format::Dot } else { a.format };
    let text = match format {
        Format::Dot => q.to_dot(&a.group),
        Format::Json => to_json(&QuiverJson {
            group: a.group.clone(),
            order: h.order(),
            dims: q.dims.clone(),
            adjacency: q.adjacency.clone(),
            affine_match: matches,
        }),
        Format::Text => {
            let mut s = format!("{} (order {}): dims {:?}\n", a.group, h.order(), q.dims);
            for row in &q.adjacency {
                let cells: Vec<String> = row.iter().map(u64::to_string).collect();
                writeln!(s, "  {}", cells.join(" ")).unwrap();
            }
            writeln!(s, "  affine {t}: {matches}").unwrap();
            s
        }
    };
    emit(&text, &a.output, out)?;
    Ok(if matches { EXIT_OK } else { EXIT_DISAGREE })
}

fn cmd_lattice(a: &LatticeArgs, out: &mut dyn Write) -> Result<i32> {
    let t = a.ty.canonical_type()?;
    let format = if a.dot { Format::Dot } else { a.ty.format };
    let name = t.to_string();
    let text = if a.cover {
        let lat = build_config(&ConfigKind::Cover(t))?;
        match format {
            Format::Json => return Err(Error::InvalidParameter("JSON output is for the minimal resolution".into())),
            Format::Dot => to_dot(&lat, None, &name),
            Format::Text => pairing_text(&lat),
        }
    } else {
        let res = resolution_ram(&t)?;
        match format {
            Format::Json => to_json(&res.to_json()),
            Format::Dot => to_dot(&res.lattice, Some(&res.ram), &name),
            Format::Text => {
                let mut s = pairing_text(&res.lattice);
                for (c, e) in res.lattice.curves.iter().zip(&res.ram) {
                    if *e > 1 {
                        writeln!(s, "  e({}) = {e}", c.label).unwrap();
                    }
                }
                s
            }
        }
    };
    emit(&text, &a.ty.output, out)?;
    Ok(EXIT_OK)
}

fn pairing_text(lat: &crate::lattice::IntersectionLattice) -> String {
    let mut s = String::new();
    let w = lat.curves.iter().map(|c| c.label.len()).max().unwrap_or(1).max(3);
    write!(s, "{:w$}", "").unwrap();
    for c in &lat.curves {
        write!(s, " {:>w$}", c.label).unwrap();
    }
    s.push('\n');
    for (i, c) in lat.curves.iter().enumerate() {
        write!(s, "{:w$}", c.label).unwrap();
        for j in 0..lat.len() {
            if i == j && c.self_int.is_none() {
                write!(s, " {:>w$}", ".").unwrap();
            } else {
                write!(s, " {:>w$}", lat.pairing[i][j]).unwrap();
            }
        }
        s.push('\n');
    }
    s
}

/// Runs the CLI on `args` and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => cmd_verify(a, out),
        Command::Table(a) => cmd_table(a, out),
        Command::Quiver(a) => cmd_quiver(a, out),
        Command::Lattice(a) => cmd_lattice(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_for(&e)
        }
    }
}
