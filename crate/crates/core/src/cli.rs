//! Command-line surface.
//!
//! Exit codes: 0 success, 1 input error, 2 mismatch against an oracle or a
//! cross-check, 3 no Poincaré fit at the requested denominator.
//!
//! Group file (`--group file:<path>`), one directive per line, `#` comments:
//!
//! ```text
//! name Z4
//! degree 4
//! gen [1,2,3,0]
//! ```
//!
//! Module file (`--module <path>`): the prime, the dimension, then one
//! `mat` block per generator of the group, in generator order, each with
//! `dim` rows of residues:
//!
//! ```text
//! p 2
//! dim 2
//! mat
//! 0 1
//! 1 0
//! ```

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::actions::{full_report, ConditionReport};
use crate::catalog::{expected_dims, lookup, manifest};
use crate::cohmaps::CohEngine;
use crate::error::{Error, Result};
use crate::fplinalg::FpMatrix;
use crate::gmodules::GModule;
use crate::groups::{
    all_subgroups, generate_group_with_cap, sylow, FiniteGroup, Permutation, Subgroup,
    DEFAULT_SIZE_CAP,
};
use crate::resolutions::{
    chouinard_projective, cohomology_dims, complexity, is_projective, poincare_fit, render_poly,
    GROWTH_PROBE, PROJECTIVE_PROBE,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModuleTask {
    Projective,
    Chouinard,
    Complexity,
}

#[derive(Debug, Parser)]
#[command(
    name = "modcoh",
    version,
    about = "Mod-p cohomology of finite permutation groups"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// Catalog name, or `file:<path>` for a group file.
    #[arg(long, global = true)]
    pub group: Option<String>,
    #[arg(long, global = true)]
    pub p: Option<u32>,
    #[arg(long = "max-deg", global = true)]
    pub max_deg: Option<usize>,
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Largest group order accepted.
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_CAP)]
    pub cap: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimensions of H^i(G, F_p), checked against the catalog when possible.
    Dims,
    /// Rational fit of the Poincaré series.
    Poincare {
        /// Denominator exponents, e.g. `1,1` for (1-t)^2.
        #[arg(long, value_delimiter = ',')]
        den: Vec<usize>,
    },
    /// Restriction and transfer for a subgroup.
    Maps {
        /// `sylow:<p>`, `order:<n>`, or comma-separated element indices.
        #[arg(long)]
        sub: String,
        /// Also check the double-coset formula with K = H.
        #[arg(long)]
        dcheck: bool,
    },
    /// Conditions for free actions on spheres.
    Actions,
    /// Projectivity or complexity of a module given in a file.
    Module {
        #[arg(long)]
        module: String,
        #[arg(long, value_enum)]
        task: ModuleTask,
    },
    /// Print the catalog manifest.
    Catalog,
}

enum Failure {
    Input(String),
    Mismatch,
    NoFit,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let mut buf = String::new();
    let result = execute(&config, &mut buf);
    let _ = out.write_all(buf.as_bytes());
    match result {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Mismatch) => {
            let _ = writeln!(err, "mismatch");
            2
        }
        Err(Failure::NoFit) => {
            let _ = writeln!(err, "no fit");
            3
        }
    }
}

fn execute(c: &RunConfig, out: &mut String) -> Outcome {
    match &c.command {
        Command::Dims => cmd_dims(c, out),
        Command::Poincare { den } => cmd_poincare(c, den, out),
        Command::Maps { sub, dcheck } => cmd_maps(c, sub, *dcheck, out),
        Command::Actions => cmd_actions(c, out),
        Command::Module { module, task } => cmd_module(c, module, *task, out),
        Command::Catalog => {
            out.push_str(&manifest());
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T, out: &mut String) {
    out.push_str(&serde_json::to_string_pretty(v).expect("plain data"));
    out.push('\n');
}

pub fn parse_group_file(text: &str, cap: usize) -> Result<FiniteGroup> {
    let mut name = None;
    let mut degree = None;
    let mut gens = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |msg: &str| Error::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        let (key, rest) = line
            .split_once(char::is_whitespace)
            .ok_or_else(|| err("missing value"))?;
        let rest = rest.trim();
        match key {
            "name" => name = Some(rest.to_string()),
            "degree" => degree = Some(rest.parse::<usize>().map_err(|_| err("bad degree"))?),
            "gen" => {
                let inner = rest
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| err("generator must be a bracketed list"))?;
                let images = inner
                    .split(',')
                    .map(|s| s.trim().parse::<usize>().map_err(|_| err("bad image")))
                    .collect::<Result<Vec<_>>>()?;
                gens.push(images);
            }
            _ => return Err(err(&format!("unknown directive `{key}`"))),
        }
    }
    let degree = degree.ok_or(Error::Parse {
        line: 0,
        msg: "missing degree".into(),
    })?;
    let perms = gens
        .into_iter()
        .map(Permutation::new)
        .collect::<Result<Vec<_>>>()?;
    generate_group_with_cap(degree, &perms, name.as_deref().unwrap_or("G"), cap)
}

fn keyed<'a>(
    rows: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> Result<(usize, &'a str)> {
    let (n, l) = rows.next().ok_or(Error::Parse {
        line: 0,
        msg: format!("expected `{key}`"),
    })?;
    let rest = l.strip_prefix(key).ok_or(Error::Parse {
        line: n,
        msg: format!("expected `{key}`"),
    })?;
    Ok((n, rest.trim()))
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

pub fn parse_module_file(text: &str, g: &Arc<FiniteGroup>) -> Result<GModule> {
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .peekable();
    let (n, s) = keyed(&mut rows, "p")?;
    let p: u32 = s.parse().map_err(|_| Error::Parse {
        line: n,
        msg: "bad prime".into(),
    })?;
    let (n, s) = keyed(&mut rows, "dim")?;
    let dim: usize = s.parse().map_err(|_| Error::Parse {
        line: n,
        msg: "bad dimension".into(),
    })?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let mut mats = Vec::new();
    while rows.peek().is_some() {
        keyed(&mut rows, "mat")?;
        let mut data = Vec::with_capacity(dim * dim);
        for _ in 0..dim {
            let (n, l) = rows.next().ok_or(Error::Parse {
                line: 0,
                msg: "truncated matrix".into(),
            })?;
            let vals = l
                .split_whitespace()
                .map(|t| t.parse::<u32>().ok().filter(|&v| v < p))
                .collect::<Option<Vec<_>>>()
                .ok_or(Error::Parse {
                    line: n,
                    msg: "bad residue".into(),
                })?;
            if vals.len() != dim {
                return Err(Error::Parse {
                    line: n,
                    msg: format!("expected {dim} entries"),
                });
            }
            data.extend(vals);
        }
        mats.push(FpMatrix::from_data(p, dim, dim, data));
    }
    GModule::from_generator_matrices(g, p, dim, &mats)
}

fn load_group(c: &RunConfig) -> Result<Arc<FiniteGroup>> {
    let src = c
        .group
        .as_deref()
        .ok_or_else(|| Error::BadParameters("--group is required".into()))?;
    let g = match src.strip_prefix("file:") {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            Arc::new(parse_group_file(&text, c.cap)?)
        }
        None => lookup(src)?.build()?,
    };
    if g.order() > c.cap {
        return Err(Error::GroupTooLarge { cap: c.cap });
    }
    Ok(g)
}

fn need_p(c: &RunConfig, g: &FiniteGroup) -> Result<u32> {
    let p =
        c.p.ok_or_else(|| Error::BadParameters("--p is required".into()))?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if g.order() % p as usize != 0 {
        return Err(Error::BadParameters(format!(
            "{p} does not divide |G| = {}",
            g.order()
        )));
    }
    Ok(p)
}

#[derive(Serialize)]
struct DimsOut {
    group: String,
    p: u32,
    dims: Vec<usize>,
    expected: Option<Vec<usize>>,
    matches: Option<bool>,
}

fn cmd_dims(c: &RunConfig, out: &mut String) -> Outcome {
    let g = load_group(c)?;
    let p =
        c.p.ok_or_else(|| Error::BadParameters("--p is required".into()))?;
    if !is_prime(p) {
        return Err(Error::NotPrime(p).into());
    }
    let max_deg = c.max_deg.unwrap_or(8);
    let dims = cohomology_dims(&g, p, max_deg).dims;
    let expected = match c.group.as_deref().filter(|s| !s.starts_with("file:")) {
        Some(name) => lookup(name)
            .ok()
            .and_then(|e| expected_dims(&e, p, max_deg).ok())
            .map(|s| s.dims),
        None => None,
    };
    let matches = expected.as_ref().map(|e| *e == dims);
    let row_match = |i: usize| expected.as_ref().map(|e| e[i] == dims[i]);
    match c.format {
        Format::Json => json(
            &DimsOut {
                group: g.name().into(),
                p,
                dims: dims.clone(),
                expected: expected.clone(),
                matches,
            },
            out,
        ),
        Format::Csv => {
            out.push_str("i,dim,expected,match\n");
            for (i, d) in dims.iter().enumerate() {
                let e = expected
                    .as_ref()
                    .map_or(String::new(), |e| e[i].to_string());
                let m = row_match(i).map_or(String::new(), |m| m.to_string());
                let _ = writeln!(out, "{i},{d},{e},{m}");
            }
        }
        Format::Text => {
            let _ = writeln!(out, "H^i({}, F_{p})", g.name());
            for (i, d) in dims.iter().enumerate() {
                match (&expected, row_match(i)) {
                    (Some(e), Some(m)) => {
                        let _ = writeln!(
                            out,
                            "{i:>3} {d:>4}  expected {:>4}  {}",
                            e[i],
                            if m { "ok" } else { "MISMATCH" }
                        );
                    }
                    _ => {
                        let _ = writeln!(out, "{i:>3} {d:>4}");
                    }
                }
            }
        }
    }
    if matches == Some(false) {
        return Err(Failure::Mismatch);
    }
    Ok(())
}

#[derive(Serialize)]
struct FitOut {
    group: String,
    p: u32,
    numerator: Vec<i64>,
    denominator: Vec<usize>,
    verified_through: usize,
    pole_order: usize,
}

fn cmd_poincare(c: &RunConfig, den: &[usize], out: &mut String) -> Outcome {
    let g = load_group(c)?;
    let p = need_p(c, &g)?;
    let den = if den.is_empty() {
        let name = c.group.as_deref().unwrap_or_default();
        let entry = lookup(name).map_err(|_| Error::BadParameters("--den is required".into()))?;
        entry
            .record(p)
            .ok_or_else(|| Error::BadParameters("--den is required".into()))?
            .denominator
            .clone()
    } else {
        den.to_vec()
    };
    let series = cohomology_dims(&g, p, c.max_deg.unwrap_or(12));
    let fit = poincare_fit(&series, &den)?.ok_or(Failure::NoFit)?;
    let res = FitOut {
        group: g.name().into(),
        p,
        numerator: fit.numerator.clone(),
        denominator: fit.denominator_exponents.clone(),
        verified_through: fit.verified_through,
        pole_order: fit.pole_order(),
    };
    let join = |v: &[String]| v.join(",");
    let num: Vec<String> = res.numerator.iter().map(|x| x.to_string()).collect();
    let dn: Vec<String> = res.denominator.iter().map(|x| x.to_string()).collect();
    match c.format {
        Format::Json => json(&res, out),
        Format::Csv => {
            out.push_str("group,p,numerator,denominator,verified_through,pole_order\n");
            let _ = writeln!(
                out,
                "{},{p},\"{}\",\"{}\",{},{}",
                res.group,
                join(&num),
                join(&dn),
                res.verified_through,
                res.pole_order
            );
        }
        Format::Text => {
            let _ = writeln!(out, "P(t) = {}", fit.render());
            let _ = writeln!(out, "numerator {}", render_poly(&res.numerator));
            let _ = writeln!(out, "numerator coefficients {}", join(&num));
            let _ = writeln!(out, "denominator exponents {}", join(&dn));
            let _ = writeln!(out, "verified through degree {}", res.verified_through);
        }
    }
    Ok(())
}

/// Resolves `sylow:<p>`, `order:<n>` (first subgroup of that order in the
/// canonical enumeration) or a list of generating element indices.
pub fn resolve_subgroup(g: &Arc<FiniteGroup>, spec: &str) -> Result<Subgroup> {
    let bad = || Error::UnresolvableSubgroup(spec.to_string());
    if let Some(p) = spec.strip_prefix("sylow:") {
        let p: u32 = p.parse().map_err(|_| bad())?;
        if p < 2 || g.order() % p as usize != 0 {
            return Err(bad());
        }
        return Ok(sylow(g, p));
    }
    if let Some(n) = spec.strip_prefix("order:") {
        let n: usize = n.parse().map_err(|_| bad())?;
        return all_subgroups(g)
            .into_iter()
            .find(|h| h.order() == n)
            .ok_or_else(bad);
    }
    let seeds = spec
        .strip_prefix("gens:")
        .unwrap_or(spec)
        .split(',')
        .map(|s| s.trim().parse::<usize>().ok().filter(|&x| x < g.order()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(bad)?;
    Ok(crate::groups::subgroup_closure(g, &seeds))
}

#[derive(Serialize)]
struct MapsRow {
    degree: usize,
    dim_g: usize,
    dim_h: usize,
    res_rank: usize,
    tr_rank: usize,
    tr_res_is_index: bool,
    double_coset: Option<bool>,
}

fn cmd_maps(c: &RunConfig, spec: &str, dcheck: bool, out: &mut String) -> Outcome {
    let g = load_group(c)?;
    let p = need_p(c, &g)?;
    let h = resolve_subgroup(&g, spec)?;
    let max_deg = c.max_deg.unwrap_or(3);
    let engine = CohEngine::trivial(&g, p, max_deg);
    let whole = Subgroup::whole(&g);
    let index = (h.index() % p as usize) as u32;
    let mut rows = Vec::new();
    for i in 0..=max_deg {
        let res = engine.restriction(&whole, &h, i)?;
        let tr = engine.transfer(&h, &whole, i)?;
        let dim_g = res.matrix.cols();
        rows.push(MapsRow {
            degree: i,
            dim_g,
            dim_h: res.matrix.rows(),
            res_rank: res.rank(),
            tr_rank: tr.rank(),
            tr_res_is_index: tr.matrix.mul(&res.matrix)
                == FpMatrix::identity(p, dim_g).scale(index),
            double_coset: if dcheck {
                Some(engine.double_coset_identity(&h, &h, i)?)
            } else {
                None
            },
        });
    }
    let opt = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
    match c.format {
        Format::Json => json(&rows, out),
        Format::Csv => {
            out.push_str("degree,dim_g,dim_h,res_rank,tr_rank,tr_res_is_index,double_coset\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    r.degree,
                    r.dim_g,
                    r.dim_h,
                    r.res_rank,
                    r.tr_rank,
                    r.tr_res_is_index,
                    r.double_coset.map_or(String::new(), |b| b.to_string())
                );
            }
        }
        Format::Text => {
            let _ = writeln!(
                out,
                "G = {} (order {}), H of order {}, index {}",
                g.name(),
                g.order(),
                h.order(),
                h.index()
            );
            let _ = writeln!(
                out,
                "  i  dimG  dimH  rk(res)  rk(tr)  tr.res=[G:H]  dcoset"
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{:>3} {:>5} {:>5} {:>8} {:>7} {:>13} {:>7}",
                    r.degree,
                    r.dim_g,
                    r.dim_h,
                    r.res_rank,
                    r.tr_rank,
                    r.tr_res_is_index,
                    opt(r.double_coset)
                );
            }
        }
    }
    if rows
        .iter()
        .any(|r| !r.tr_res_is_index || r.double_coset == Some(false))
    {
        return Err(Failure::Mismatch);
    }
    Ok(())
}

fn cmd_actions(c: &RunConfig, out: &mut String) -> Outcome {
    let g = load_group(c)?;
    let report: ConditionReport = full_report(&g, c.max_deg.unwrap_or(8).max(5))?;
    match c.format {
        Format::Json => {
            out.push_str(&report.to_json());
            out.push('\n');
        }
        Format::Csv => {
            let _ = writeln!(
                out,
                "{}\n{}",
                ConditionReport::CSV_HEADER,
                report.to_csv_row()
            );
        }
        Format::Text => {
            let _ = writeln!(out, "group {} (order {})", report.group, report.order);
            for (k, v) in [
                ("swan (p^2 for all p)", report.swan_ok),
                ("2p, central involutions", report.twop_milnor_ok),
                ("2p, order-2p subgroups cyclic", report.twop_cyclic_ok),
                ("2p forms agree", report.twop_forms_agree),
                ("madsen-thomas-wall", report.mtw_ok),
                ("wolf (pq-clause only)", report.wolf_pq_ok),
                ("periodic cohomology", report.periodic_ok),
            ] {
                let _ = writeln!(out, "{k:<32} {v}");
            }
            let _ = writeln!(out, "{:<32} {}", "r(G)", report.r_of_g);
            for r in &report.primes {
                let period = r
                    .periodicity
                    .observed_period
                    .map_or("-".to_string(), |d| d.to_string());
                let _ = writeln!(
                    out,
                    "p={} p2={} 2p={} r_p={} r_p(Z)={} pole={} period={period}",
                    r.p, r.p2_ok, r.twop_ok, r.p_rank, r.duflot_z, r.krull_pole_order
                );
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ModuleOut {
    task: &'static str,
    dim: usize,
    p: u32,
    verdict: String,
    probe_degree: usize,
    cross_check: Option<bool>,
}

fn cmd_module(c: &RunConfig, path: &str, task: ModuleTask, out: &mut String) -> Outcome {
    let g = load_group(c)?;
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    let m = parse_module_file(&text, &g)?;
    if c.p.is_some_and(|p| p != m.p()) {
        return Err(Error::BadParameters(format!(
            "--p disagrees with the module file prime {}",
            m.p()
        ))
        .into());
    }
    let row = match task {
        ModuleTask::Projective | ModuleTask::Chouinard => {
            let direct = is_projective(&m);
            let via_elementary = chouinard_projective(&m);
            let (name, verdict) = match task {
                ModuleTask::Projective => ("projective", direct),
                _ => ("chouinard", via_elementary),
            };
            ModuleOut {
                task: name,
                dim: m.dim(),
                p: m.p(),
                verdict: verdict.to_string(),
                probe_degree: PROJECTIVE_PROBE,
                cross_check: Some(direct == via_elementary),
            }
        }
        ModuleTask::Complexity => ModuleOut {
            task: "complexity",
            dim: m.dim(),
            p: m.p(),
            verdict: complexity(&m, GROWTH_PROBE)?.to_string(),
            probe_degree: GROWTH_PROBE,
            cross_check: None,
        },
    };
    match c.format {
        Format::Json => json(&row, out),
        Format::Csv => {
            out.push_str("task,dim,p,verdict,probe_degree,cross_check\n");
            let cc = row.cross_check.map_or(String::new(), |b| b.to_string());
            let _ = writeln!(
                out,
                "{},{},{},{},{},{cc}",
                row.task, row.dim, row.p, row.verdict, row.probe_degree
            );
        }
        Format::Text => {
            let _ = write!(
                out,
                "{} {} (dim {}, p = {}, probe degree {})",
                row.task, row.verdict, row.dim, row.p, row.probe_degree
            );
            if let Some(cc) = row.cross_check {
                let _ = write!(out, ", projective and chouinard agree: {cc}");
            }
            out.push('\n');
        }
    }
    if row.cross_check == Some(false) {
        return Err(Failure::Mismatch);
    }
    Ok(())
}
