//! Command implementations behind the `synclcs` binary.
//!
//! Each command returns an [`Outcome`]: the JSON [`Report`] and the process
//! exit code. Errors that stop a command early are mapped to exit codes by
//! [`exit_code_for`].

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::examples;
use crate::game::{best_deterministic, build_synclcs_game, find_perfect_deterministic, SynchronousGame};
use crate::graph::{build_game_graph, find_isomorphism, translate_isomorphism, verify_isomorphism, GameGraph};
use crate::group::build_presentation;
use crate::limits::Limits;
use crate::report::{CheckRecord, Report, ResidualCheck, Verdict};
use crate::star::{
    check_iso_relations, iso_generator_images, iso_sum_checks, load_representation, pauli_magic_square_rep, phi_checks,
    round_trip_checks, scalar_rep_from_solution, spectral_checks, Cyclotomic, ProjectionFamily, Representation, Scalar,
};
use crate::system::{validate_system, CheckStatus, LinearSystem, SystemFile};
use crate::zp::{Solution, ZpVector};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

/// A finished command.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub exit_code: i32,
}

impl Outcome {
    fn from_report(report: Report) -> Self {
        let exit_code = if report.summary == Verdict::Fail { EXIT_CHECK_FAILED } else { EXIT_PASS };
        Outcome { report, exit_code }
    }
}

pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) | Error::UnknownExample(_) => EXIT_PARSE,
        Error::EnumerationTooLarge { .. } | Error::SearchBudgetExceeded { .. } => EXIT_BUDGET,
        Error::NotPrime(_)
        | Error::DimensionMismatch(_)
        | Error::RowOutOfRange { .. }
        | Error::NotASolution(_)
        | Error::VariableUnused(_) => EXIT_INVALID,
        Error::NonCommutingFactors { .. }
        | Error::InvariantViolation { .. }
        | Error::UnitarityViolation { .. }
        | Error::JNotIdentified { .. } => EXIT_CHECK_FAILED,
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn file_digest(file: &SystemFile) -> String {
    sha256_hex(serde_json::to_string(file).expect("serializable").as_bytes())
}

fn validation_records(file: &SystemFile) -> Vec<CheckRecord> {
    validate_system(file)
        .items
        .into_iter()
        .map(|item| {
            let verdict = match item.status {
                CheckStatus::Pass => Verdict::Pass,
                CheckStatus::Warn => Verdict::Warn,
                CheckStatus::Fail => Verdict::Fail,
            };
            CheckRecord::verdict(item.name, verdict, item.detail)
        })
        .collect()
}

enum Loaded {
    System(LinearSystem, Vec<CheckRecord>),
    Rejected(Outcome),
}

/// Parses and validates a system file; invalid systems become a report
/// with exit code 2.
fn load_checked(path: &Path, command: &str) -> Result<Loaded> {
    let file = SystemFile::from_json(&read_text(path)?)?;
    let records = validation_records(&file);
    if records.iter().any(|r| r.verdict == Verdict::Fail) {
        let mut report = Report::new(command, file_digest(&file));
        for r in records {
            report.push(r);
        }
        return Ok(Loaded::Rejected(Outcome { report, exit_code: EXIT_INVALID }));
    }
    Ok(Loaded::System(LinearSystem::from_file(&file)?, records))
}

macro_rules! checked_system {
    ($path:expr, $command:expr) => {
        match load_checked($path, $command)? {
            Loaded::System(sys, records) => (sys, records),
            Loaded::Rejected(outcome) => return Ok(outcome),
        }
    };
}

pub fn cmd_validate(path: &Path) -> Result<Outcome> {
    let file = SystemFile::from_json(&read_text(path)?)?;
    let records = validation_records(&file);
    let digest = match LinearSystem::from_file(&file) {
        Ok(sys) if records.iter().all(|r| r.verdict != Verdict::Fail) => sys.digest(),
        _ => file_digest(&file),
    };
    let mut report = Report::new("validate", digest);
    let failed = records.iter().any(|r| r.verdict == Verdict::Fail);
    for r in records {
        report.push(r);
    }
    report.data = json!({
        "p": file.p,
        "m": file.a.len(),
        "n": file.a.first().map_or(0, Vec::len),
    });
    Ok(Outcome { report, exit_code: if failed { EXIT_INVALID } else { EXIT_PASS } })
}

fn graph_summary(g: &GameGraph) -> serde_json::Value {
    json!({ "vertices": g.len(), "edges": g.edge_count() })
}

pub fn cmd_analyze(path: &Path, limits: &Limits) -> Result<Outcome> {
    let (sys, _) = checked_system!(path, "analyze");
    analyze(&sys, limits)
}

pub fn analyze(sys: &LinearSystem, limits: &Limits) -> Result<Outcome> {
    let records = validation_records(&sys.to_file());
    let mut report = Report::new("analyze", sys.digest());
    for r in records {
        report.push(r);
    }
    let rows: Vec<_> = sys
        .rows(limits.enumeration_cap)?
        .into_iter()
        .map(|r| {
            json!({
                "row": r.index,
                "support": r.support,
                "support_size": r.support.len(),
                "solutions": r.solutions.len(),
            })
        })
        .collect();
    let g = build_game_graph(sys, false, limits.enumeration_cap)?;
    let h = build_game_graph(sys, true, limits.enumeration_cap)?;
    let solution = sys.solve();
    report.data = json!({
        "p": sys.p(),
        "m": sys.m(),
        "n": sys.n(),
        "rank": solution.rank(),
        "consistent": solution.is_consistent(),
        "rows": rows,
        "graph": graph_summary(&g),
        "homogeneous_graph": graph_summary(&h),
    });
    Ok(Outcome::from_report(report))
}

fn solution_json(solution: &Solution) -> serde_json::Value {
    match solution {
        Solution::Consistent { set, rank } => json!({
            "consistent": true,
            "rank": rank,
            "particular": set.particular.entries(),
            "kernel_dimension": set.basis.len(),
        }),
        Solution::Inconsistent { rank } => json!({ "consistent": false, "rank": rank }),
    }
}

pub fn cmd_solve(path: &Path, rules_out: Option<&Path>, limits: &Limits) -> Result<Outcome> {
    let (sys, _) = checked_system!(path, "solve");
    solve(&sys, rules_out, limits)
}

pub fn solve(sys: &LinearSystem, rules_out: Option<&Path>, limits: &Limits) -> Result<Outcome> {
    let mut report = Report::new("solve", sys.digest());
    let solution = sys.solve();
    let game = build_synclcs_game(sys, limits.enumeration_cap)?;
    if let Some(out) = rules_out {
        let mut text = serde_json::to_string_pretty(&game.rule_table_json()).expect("serializable");
        text.push('\n');
        write_text(out, &text)?;
    }
    let (perfect, stats) = find_perfect_deterministic(&game, limits.search_budget)?;
    let (strategy, value, best_nodes) = match perfect {
        Some(s) => {
            let v = crate::game::game_value(&s, &game)?;
            (s, v, 0)
        }
        None => {
            let (s, v, st) = best_deterministic(&game, limits.search_budget)?;
            (s, v, st.nodes)
        }
    };
    let agree = value.is_one() == solution.is_consistent();
    report.push(CheckRecord::verdict(
        "perfect-strategy-matches-gauss",
        if agree { Verdict::Pass } else { Verdict::Fail },
        format!(
            "gauss: {}; perfect deterministic strategy: {}",
            if solution.is_consistent() { "consistent" } else { "inconsistent" },
            if value.is_one() { "found" } else { "none" }
        ),
    ));
    let answers: Vec<_> = (0..game.num_inputs())
        .map(|i| json!({ "row": i + 1, "answer": game.output_label(strategy.answer(i)) }))
        .collect();
    report.data = json!({
        "gauss": solution_json(&solution),
        "perfect": value.is_one(),
        "strategy": answers,
        "value": value.to_string(),
        "perfect_search_nodes": stats.nodes,
        "best_search_nodes": best_nodes,
    });
    Ok(Outcome::from_report(report))
}

pub struct GraphOptions<'a> {
    pub homogeneous: bool,
    pub dot: Option<&'a Path>,
    pub adjacency: Option<&'a Path>,
}

pub fn cmd_graph(path: &Path, opts: &GraphOptions<'_>, limits: &Limits) -> Result<Outcome> {
    let (sys, _) = checked_system!(path, "graph");
    graph(&sys, opts, limits)
}

pub fn graph(sys: &LinearSystem, opts: &GraphOptions<'_>, limits: &Limits) -> Result<Outcome> {
    let mut report = Report::new("graph", sys.digest());
    let g = build_game_graph(sys, opts.homogeneous, limits.enumeration_cap)?;
    let name = if opts.homogeneous { "G_A0" } else { "G_Ab" };
    if let Some(out) = opts.dot {
        write_text(out, &g.export_dot(name))?;
    }
    if let Some(out) = opts.adjacency {
        let mut text = serde_json::to_string_pretty(&g.adjacency_json()).expect("serializable");
        text.push('\n');
        write_text(out, &text)?;
    }
    let symmetric =
        (0..g.len()).all(|a| !g.adjacent(a, a) && (0..g.len()).all(|b| g.adjacent(a, b) == g.adjacent(b, a)));
    report.push(CheckRecord::verdict(
        "adjacency-symmetric",
        if symmetric { Verdict::Pass } else { Verdict::Fail },
        "no self-loops, symmetric adjacency",
    ));
    report.data = json!({
        "name": name,
        "homogeneous": opts.homogeneous,
        "vertices": g.len(),
        "edges": g.edge_count(),
    });
    Ok(Outcome::from_report(report))
}

fn bijection_json(g: &GameGraph, h: &GameGraph, forward: &[usize]) -> serde_json::Value {
    forward.iter().enumerate().map(|(a, &b)| json!([g.vertex(a).label(), h.vertex(b).label()])).collect()
}

pub fn cmd_iso(path: &Path, limits: &Limits) -> Result<Outcome> {
    let (sys, _) = checked_system!(path, "iso");
    iso(&sys, limits)
}

pub fn iso(sys: &LinearSystem, limits: &Limits) -> Result<Outcome> {
    let mut report = Report::new("iso", sys.digest());
    let cap = limits.enumeration_cap;
    let g = build_game_graph(sys, false, cap)?;
    let h = build_game_graph(sys, true, cap)?;
    let found = find_isomorphism(&g, &h, limits.search_budget)?;
    let solution = sys.solve();
    let isomorphic = found.bijection.is_some();
    report.push(CheckRecord::verdict(
        "isomorphism-matches-gauss",
        if isomorphic == solution.is_consistent() { Verdict::Pass } else { Verdict::Fail },
        format!(
            "gauss: {}; G_Ab ~ G_A0: {}",
            if solution.is_consistent() { "consistent" } else { "inconsistent" },
            if isomorphic { "found" } else { "none" }
        ),
    ));
    if let Some(bij) = &found.bijection {
        let ok = verify_isomorphism(&g, &h, bij);
        report.push(CheckRecord::verdict(
            "search-isomorphism-verified",
            if ok { Verdict::Pass } else { Verdict::Fail },
            "edge preservation over all vertex pairs",
        ));
    }
    let mut translation = serde_json::Value::Null;
    if let Some(set) = solution.affine_set() {
        let bij = translate_isomorphism(sys, &set.particular, cap)?;
        let ok = verify_isomorphism(&g, &h, &bij);
        report.push(CheckRecord::verdict(
            "translation-isomorphism-verified",
            if ok { Verdict::Pass } else { Verdict::Fail },
            format!("x* = {}", set.particular),
        ));
        translation = bijection_json(&g, &h, &bij.forward);
    }
    report.data = json!({
        "vertices": [g.len(), h.len()],
        "edges": [g.edge_count(), h.edge_count()],
        "isomorphic": isomorphic,
        "identity": found.bijection.as_ref().is_some_and(|b| b.is_identity()),
        "bijection": found.bijection.as_ref().map(|b| bijection_json(&g, &h, &b.forward)),
        "translation": translation,
        "search": found.stats,
    });
    Ok(Outcome::from_report(report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupFormat {
    Json,
    Relators,
}

impl FromStr for GroupFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(GroupFormat::Json),
            "relators" => Ok(GroupFormat::Relators),
            other => Err(Error::Parse(format!("unknown format `{other}` (expected json or relators)"))),
        }
    }
}

pub fn cmd_group(path: &Path, format: GroupFormat, out: Option<&Path>) -> Result<Outcome> {
    let (sys, _) = checked_system!(path, "group");
    group(&sys, format, out)
}

pub fn group(sys: &LinearSystem, format: GroupFormat, out: Option<&Path>) -> Result<Outcome> {
    let mut report = Report::new("group", sys.digest());
    let pres = build_presentation(sys);
    let body = match format {
        GroupFormat::Json => {
            let mut s = serde_json::to_string_pretty(&pres.to_json()).expect("serializable");
            s.push('\n');
            s
        }
        GroupFormat::Relators => pres.relators_text(),
    };
    if let Some(out) = out {
        write_text(out, &body)?;
    }
    let counts: serde_json::Map<String, serde_json::Value> =
        crate::group::RelationFamily::ALL.iter().map(|&f| (f.name().to_string(), json!(pres.count(f)))).collect();
    report.data = json!({
        "generators": pres.n + 1,
        "relations": pres.relations.len(),
        "by_family": counts,
        "presentation": if out.is_none() { Some(pres.to_json()) } else { None },
    });
    Ok(Outcome::from_report(report))
}

/// Where `repcheck` gets its representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RepSource {
    /// A matrix JSON file.
    File(PathBuf),
    /// `scalar:<x1,..,xn>`: the one-dimensional representation of a solution.
    Scalar(Vec<i64>),
    /// `scalar:auto`: the scalar representation of the particular solution.
    ScalarAuto,
    /// `pauli-ms`: the two-qubit Pauli operator solution of the magic square.
    PauliMagicSquare,
}

impl FromStr for RepSource {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s == "pauli-ms" {
            return Ok(RepSource::PauliMagicSquare);
        }
        let Some(rest) = s.strip_prefix("scalar:") else {
            return Ok(RepSource::File(PathBuf::from(s)));
        };
        if rest == "auto" {
            return Ok(RepSource::ScalarAuto);
        }
        rest.split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad solution entry `{t}`"))))
            .collect::<Result<Vec<_>>>()
            .map(RepSource::Scalar)
    }
}

impl fmt::Display for RepSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepSource::File(p) => write!(f, "{}", p.display()),
            RepSource::Scalar(x) => {
                let parts: Vec<String> = x.iter().map(i64::to_string).collect();
                write!(f, "scalar:{}", parts.join(","))
            }
            RepSource::ScalarAuto => f.write_str("scalar:auto"),
            RepSource::PauliMagicSquare => f.write_str("pauli-ms"),
        }
    }
}

/// Every residual suite on one representation, in order: unitarity and
/// `J`, group relations, spectral projections, the `psi` family, `phi`
/// well-definedness, both round trips, and the Iso-game family.
pub fn repcheck_suite<T: Scalar>(
    rep: &Representation<T>,
    sys: &LinearSystem,
    limits: &Limits,
    tol: f64,
) -> Result<(Vec<ResidualCheck>, serde_json::Value)> {
    let cap = limits.enumeration_cap;
    let mut checks = Vec::new();
    let mut unitary = ResidualCheck::new("rep/unitary", tol);
    for (name, r) in rep.unitarity_residuals() {
        unitary.record(r, || name.clone());
    }
    checks.push(unitary);
    let mut jcheck = ResidualCheck::new("rep/j-identified", tol);
    jcheck.record(rep.j_residual(), || "J - omega I".into());
    checks.push(jcheck);

    let pres = build_presentation(sys);
    checks.extend(crate::group::relation_residuals(rep, &pres, tol)?.by_family());
    checks.extend(spectral_checks(rep, tol));

    let fam = match ProjectionFamily::from_representation(rep, sys, cap, tol) {
        Ok(f) => f,
        Err(Error::NonCommutingFactors { j, l, residual }) => {
            let mut c = ResidualCheck::new("family/row-commutation", tol);
            c.record(residual, || format!("[g{j},g{l}]"));
            checks.push(c);
            return Ok((checks, json!({ "dim": rep.dim(), "relations": pres.relations.len() })));
        }
        Err(e) => return Err(e),
    };
    checks.extend(fam.invariant_checks(tol));
    checks.extend(phi_checks(&fam, tol));
    checks.extend(round_trip_checks(rep, &fam, tol));

    let g = build_game_graph(sys, false, cap)?;
    let h = build_game_graph(sys, true, cap)?;
    let e = iso_generator_images(&fam, &g, &h)?;
    checks.extend(iso_sum_checks(&e, &fam, &g, &h, tol));
    let rel = check_iso_relations(&e, &g, &h, tol);
    let grid = (g.len() * h.len()) as u64;
    checks.extend(rel.checks);
    let data = json!({
        "dim": rep.dim(),
        "relations": pres.relations.len(),
        "iso_generators": grid,
        "iso_vanishing_generators": rel.vanishing,
        "iso_rule_products": rel.products,
        "iso_generator_pairs": grid * grid,
    });
    Ok((checks, data))
}

pub fn cmd_repcheck(path: &Path, source: &RepSource, tol: f64, limits: &Limits) -> Result<Outcome> {
    let (sys, _) = checked_system!(path, "repcheck");
    repcheck(&sys, source, tol, limits)
}

pub fn repcheck(sys: &LinearSystem, source: &RepSource, tol: f64, limits: &Limits) -> Result<Outcome> {
    let rep_bytes = match source {
        RepSource::File(p) => read_text(p)?,
        other => other.to_string(),
    };
    let digest = sha256_hex(format!("{}\n{}", sys.digest(), rep_bytes).as_bytes());
    let mut report = Report::new("repcheck", digest);
    report.tolerance = Some(tol);

    let (checks, mut data, arithmetic) = match source {
        RepSource::File(_) => {
            let loaded = load_representation(&rep_bytes, tol, true)?;
            let (c, d) = repcheck_suite(&loaded.rep, sys, limits, tol)?;
            (c, d, "float64")
        }
        RepSource::PauliMagicSquare => {
            if sys.digest() != examples::magic_square().digest() {
                return Err(Error::DimensionMismatch(
                    "pauli-ms applies only to the built-in magic-square system".into(),
                ));
            }
            let (c, d) = repcheck_suite::<Complex64>(&pauli_magic_square_rep(), sys, limits, tol)?;
            (c, d, "float64")
        }
        RepSource::Scalar(x) => {
            let x = ZpVector::new(sys.p(), x)?;
            let rep: Representation<Cyclotomic> = scalar_rep_from_solution(sys, &x)?;
            let (c, d) = repcheck_suite(&rep, sys, limits, tol)?;
            (c, d, "exact-cyclotomic")
        }
        RepSource::ScalarAuto => {
            let solution = sys.solve();
            let set = solution
                .affine_set()
                .ok_or_else(|| Error::NotASolution("system is inconsistent; no scalar representation".into()))?;
            let rep: Representation<Cyclotomic> = scalar_rep_from_solution(sys, &set.particular)?;
            let (c, d) = repcheck_suite(&rep, sys, limits, tol)?;
            (c, d, "exact-cyclotomic")
        }
    };
    for c in &checks {
        report.push_residual(c);
    }
    if let serde_json::Value::Object(map) = &mut data {
        map.insert("source".into(), json!(source.to_string()));
        map.insert("arithmetic".into(), json!(arithmetic));
        map.insert("max_residual".into(), json!(checks.iter().map(|c| c.max_residual).fold(0.0, f64::max)));
        map.insert("first_failure".into(), json!(report.first_failure().map(|c| c.name.clone())));
    }
    report.data = data;
    Ok(Outcome::from_report(report))
}

pub fn cmd_examples(name: &str, out: Option<&Path>) -> Result<Outcome> {
    let sys = examples::builtin(name)?;
    let file = sys.to_file();
    let text = file.to_json_pretty();
    if let Some(out) = out {
        write_text(out, &text)?;
    }
    let mut report = Report::new("examples", sys.digest());
    report.push(CheckRecord::verdict(
        "validate",
        if validate_system(&file).passed() { Verdict::Pass } else { Verdict::Fail },
        "built-in passes validation",
    ));
    report.data = json!({
        "name": name,
        "system": file,
        "written": out.is_some(),
    });
    Ok(Outcome::from_report(report))
}
