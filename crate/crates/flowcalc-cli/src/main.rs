//! Command-line driver for the `flowcalc` library: invariants, moves,
//! cross sections, word codes, and cocycle solvers over plain-text files.
//!
//! Exit codes: 0 when a report or decision is produced — negative
//! decisions with witnesses included; 1 when a hypothesis guard refuses
//! the input (`NotIrreducible`, `TrivialSFT`, invalid or overlapping
//! sections, incomplete code tables); 2 when a file or argument does not
//! parse. Parse failures name the file and line, usage failures the
//! offending token.
//!
//! Reports go to stdout and are byte-stable: the same input files give
//! the same bytes on every run. `--json` switches each report to one
//! pretty-printed JSON object with sorted keys; exact integers and
//! rationals are carried as strings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::{fmt, fs};

use clap::{Parser, Subcommand, ValueEnum};
use num::{BigRational, One};
use serde_json::{json, Value};

use flowcalc::flow_code::{
    build_code, conjugacy_certificate, openness_check, substitution_code,
    verify_isotopy_certificate, verify_section_condition, ConjugacyVerdict, IsotopyVerdict,
    OpennessVerdict, SectionConditionVerdict, WordBlockCode,
};
use flowcalc::graph::DirectedGraph;
use flowcalc::invariants::{flow_invariants, franks_equivalent, FranksDecision, FranksError};
use flowcalc::io::{self, ParseError};
use flowcalc::livsic::{self, CoboundaryError, PotentialError};
use flowcalc::matrix::IntMatrix;
use flowcalc::section::{self, CrossSection, ReturnSystem, SectionVerdict};
use flowcalc::shift::EdgeShift;
use flowcalc::word::Word;
use flowcalc::{fixtures, moves};

#[derive(Parser)]
#[command(
    name = "flowcalc",
    version,
    about = "Exact flow-equivalence invariants of shifts of finite type"
)]
struct Cli {
    /// Emit one machine-readable JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parry-Sullivan number and Bowen-Franks group of an adjacency matrix.
    Invariants { matrix: PathBuf },
    /// Decide flow equivalence of two nontrivial irreducible edge shifts.
    DecideFe { a: PathBuf, b: PathBuf },
    /// Split one edge in two through a fresh vertex (symbol expansion).
    Expand {
        graph: PathBuf,
        symbol: String,
        /// Where to write the expanded graph (default: <graph>.expanded).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Out-split a vertex along a partition of its out-edges.
    Split {
        graph: PathBuf,
        vertex: String,
        /// Partition classes, each a comma-joined list of edge labels.
        #[arg(required = true)]
        classes: Vec<String>,
        /// Where to write the split graph (default: <graph>.split).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cross sections: validity, return systems, pullbacks, first hits.
    #[command(subcommand)]
    Section(SectionCmd),
    /// Word block codes between edge shifts.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Rational cocycles: cycle sums, potentials, coboundaries.
    #[command(subcommand)]
    Livsic(LivsicCmd),
    /// Run a canned pipeline and check it against its expected values.
    Example {
        name: ExampleName,
        /// Openness window bound, used by not-open-5.9.
        #[arg(long, default_value_t = 3)]
        kmax: usize,
    },
}

#[derive(Subcommand)]
enum SectionCmd {
    /// Check the section condition and report the maximal return time.
    Validate { graph: PathBuf, section: PathBuf },
    /// Return words and return graph of a valid section.
    Returns {
        graph: PathBuf,
        section: PathBuf,
        /// Also write the return graph as a graph file.
        #[arg(long)]
        out_graph: Option<PathBuf>,
    },
    /// Pull a target section back through a sliding block code.
    Pullback {
        source: PathBuf,
        target: PathBuf,
        code: PathBuf,
        section: PathBuf,
        /// Also write the pulled-back section as a section file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// First-hit part of one section relative to a second, with the
    /// return morphism between the carved sections.
    PsCase1 {
        graph: PathBuf,
        first: PathBuf,
        second: PathBuf,
        /// Verify the construction on all orbits up to this period.
        #[arg(long, default_value_t = 6)]
        verify_pmax: usize,
        /// Also write the carved section inside the first input.
        #[arg(long)]
        out_d: Option<PathBuf>,
        /// Also write the pushed-forward section inside the second input.
        #[arg(long)]
        out_dd: Option<PathBuf>,
    },
    /// Stagger heights so the given sections become pairwise disjoint.
    Disjointify {
        graph: PathBuf,
        #[arg(required = true)]
        sections: Vec<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Resolve a code table against its section and validate it.
    Build {
        graph: PathBuf,
        target: PathBuf,
        code: PathBuf,
    },
    /// Apply a code to one periodic orbit, given as a closed word.
    Apply {
        graph: PathBuf,
        target: PathBuf,
        code: PathBuf,
        orbit: String,
    },
    /// Check that the code carries its section onto a target section.
    Verify {
        graph: PathBuf,
        target: PathBuf,
        code: PathBuf,
        section: PathBuf,
        /// Check all orbits up to this period.
        #[arg(long, default_value_t = 8)]
        pmax: usize,
    },
    /// Certify the code length-preserving, or exhibit a stretched orbit.
    Certificate {
        graph: PathBuf,
        target: PathBuf,
        code: PathBuf,
    },
    /// Bounded openness of the image of the section.
    Openness {
        graph: PathBuf,
        target: PathBuf,
        code: PathBuf,
        /// Largest window radius to try.
        #[arg(long, default_value_t = 3)]
        kmax: usize,
        /// Orbit period bound on both sides.
        #[arg(long, default_value_t = 12)]
        pmax: usize,
    },
    /// Check a window function as an isotopy certificate for the code.
    Isotopy {
        graph: PathBuf,
        target: PathBuf,
        code: PathBuf,
        beta: PathBuf,
    },
}

#[derive(Subcommand)]
enum LivsicCmd {
    /// Decide whether rational edge weights sum to zero on every cycle.
    Check { graph: PathBuf, weights: PathBuf },
    /// Solve h(target) - h(source) = weight on a strongly connected graph.
    Solve { graph: PathBuf, weights: PathBuf },
    /// Write a window function as b∘shift - b, or exhibit an obstruction.
    Coboundary { graph: PathBuf, function: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleName {
    #[value(name = "expansion-5.6")]
    Expansion56,
    #[value(name = "not-open-5.9")]
    NotOpen59,
    #[value(name = "reducible-3.4")]
    Reducible34,
}

/// A failed run: refusals keep exit code 1, malformed input exit code 2.
enum Failure {
    Refused(String),
    Malformed(String),
}

impl Failure {
    fn message(&self) -> &str {
        match self {
            Failure::Refused(m) | Failure::Malformed(m) => m,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            Failure::Refused(_) => 1,
            Failure::Malformed(_) => 2,
        }
    }
}

fn refused(e: impl fmt::Display) -> Failure {
    Failure::Refused(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let json = cli.json;
    match cli.command {
        Command::Invariants { matrix } => cmd_invariants(&matrix, json),
        Command::DecideFe { a, b } => cmd_decide_fe(&a, &b, json),
        Command::Expand { graph, symbol, out } => cmd_expand(&graph, &symbol, out),
        Command::Split {
            graph,
            vertex,
            classes,
            out,
        } => cmd_split(&graph, &vertex, &classes, out),
        Command::Section(c) => match c {
            SectionCmd::Validate { graph, section } => cmd_validate(&graph, &section, json),
            SectionCmd::Returns {
                graph,
                section,
                out_graph,
            } => cmd_returns(&graph, &section, out_graph, json),
            SectionCmd::Pullback {
                source,
                target,
                code,
                section,
                out,
            } => cmd_pullback(&source, &target, &code, &section, out, json),
            SectionCmd::PsCase1 {
                graph,
                first,
                second,
                verify_pmax,
                out_d,
                out_dd,
            } => cmd_ps_case1(&graph, &first, &second, verify_pmax, out_d, out_dd, json),
            SectionCmd::Disjointify { graph, sections } => {
                cmd_disjointify(&graph, &sections, json)
            }
        },
        Command::Code(c) => match c {
            CodeCmd::Build {
                graph,
                target,
                code,
            } => cmd_code_build(&graph, &target, &code, json),
            CodeCmd::Apply {
                graph,
                target,
                code,
                orbit,
            } => cmd_code_apply(&graph, &target, &code, &orbit, json),
            CodeCmd::Verify {
                graph,
                target,
                code,
                section,
                pmax,
            } => cmd_code_verify(&graph, &target, &code, &section, pmax, json),
            CodeCmd::Certificate {
                graph,
                target,
                code,
            } => cmd_code_certificate(&graph, &target, &code, json),
            CodeCmd::Openness {
                graph,
                target,
                code,
                kmax,
                pmax,
            } => cmd_code_openness(&graph, &target, &code, kmax, pmax, json),
            CodeCmd::Isotopy {
                graph,
                target,
                code,
                beta,
            } => cmd_code_isotopy(&graph, &target, &code, &beta, json),
        },
        Command::Livsic(c) => match c {
            LivsicCmd::Check { graph, weights } => cmd_livsic_check(&graph, &weights, json),
            LivsicCmd::Solve { graph, weights } => cmd_livsic_solve(&graph, &weights, json),
            LivsicCmd::Coboundary { graph, function } => {
                cmd_livsic_coboundary(&graph, &function, json)
            }
        },
        Command::Example { name, kmax } => cmd_example(name, kmax, json),
    }
}

// ---- input plumbing ----

fn slurp(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))
}

/// Parse failures keep their line number, prefixed with the file name.
fn located(path: &Path, e: ParseError) -> Failure {
    let detail = if e.line == 0 { e.message } else { e.to_string() };
    Failure::Malformed(format!("{}: {detail}", path.display()))
}

fn graph_from(path: &Path) -> Result<DirectedGraph, Failure> {
    io::parse_graph(&slurp(path)?).map_err(|e| located(path, e))
}

fn shift_from(path: &Path) -> Result<EdgeShift, Failure> {
    EdgeShift::new(graph_from(path)?).map_err(refused)
}

fn matrix_from(path: &Path) -> Result<IntMatrix, Failure> {
    let m = io::parse_matrix(&slurp(path)?).map_err(|e| located(path, e))?;
    if !m.is_nonnegative() {
        return Err(Failure::Malformed(format!(
            "{}: adjacency entries must be nonnegative",
            path.display()
        )));
    }
    Ok(m)
}

fn section_from(g: &DirectedGraph, path: &Path) -> Result<CrossSection, Failure> {
    io::parse_section(g, &slurp(path)?).map_err(|e| located(path, e))
}

/// Reads the full word-code bundle: base and target shifts, the section
/// named by the code file's header (relative to the code file), and the
/// resolved, validated table.
fn code_from(graph: &Path, target: &Path, code_path: &Path) -> Result<WordBlockCode, Failure> {
    let x = shift_from(graph)?;
    let y = shift_from(target)?;
    let file = io::parse_code_file(&slurp(code_path)?).map_err(|e| located(code_path, e))?;
    let section_path = code_path
        .parent()
        .unwrap_or_else(|| Path::new(""))
        .join(&file.section_path);
    let c = section_from(x.graph(), &section_path)?;
    let system = ReturnSystem::build(&x, &c).map_err(refused)?;
    let table = io::resolve_code_rules(system.graph(), &y, &file).map_err(|e| located(code_path, e))?;
    build_code(system, y, file.m, table).map_err(refused)
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| Failure::Malformed(format!("cannot write {}: {e}", path.display())))
}

fn default_out(input: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}.{suffix}", input.display()))
}

// ---- output plumbing ----

fn emit(json_mode: bool, value: Value, text: String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).expect("report serializes"));
    } else {
        print!("{text}");
    }
}

/// Move records are JSON in both modes; the record is the report.
fn emit_record(value: Value) {
    println!("{}", serde_json::to_string_pretty(&value).expect("record serializes"));
}

// ---- invariants and the decision ----

fn cmd_invariants(matrix: &Path, json: bool) -> Result<(), Failure> {
    let m = matrix_from(matrix)?;
    let inv = flow_invariants(&m);
    let factors: Vec<String> = inv.bf.factors.iter().map(|d| d.to_string()).collect();
    emit(
        json,
        json!({
            "ps": inv.ps.to_string(),
            "bf_factors": factors,
            "free_rank": inv.bf.free_rank,
        }),
        format!(
            "ps = {}\nbf = {}\nfree_rank = {}\n",
            inv.ps, inv.bf, inv.bf.free_rank
        ),
    );
    Ok(())
}

fn cmd_decide_fe(a: &Path, b: &Path, json: bool) -> Result<(), Failure> {
    let ma = matrix_from(a)?;
    let mb = matrix_from(b)?;
    match franks_equivalent(&ma, &mb).map_err(refused)? {
        FranksDecision::Equivalent => emit(
            json,
            json!({ "decision": "equivalent" }),
            "equivalent\n".to_string(),
        ),
        FranksDecision::NotEquivalent { reason } => emit(
            json,
            json!({ "decision": "not-equivalent", "reason": reason }),
            format!("not equivalent: {reason}\n"),
        ),
    }
    Ok(())
}

// ---- moves ----

fn cmd_expand(graph: &Path, symbol: &str, out: Option<PathBuf>) -> Result<(), Failure> {
    let x = shift_from(graph)?;
    let (result, record) =
        moves::symbol_expansion(&x, symbol).map_err(|e| Failure::Malformed(e.to_string()))?;
    let out = out.unwrap_or_else(|| default_out(graph, "expanded"));
    write_out(&out, &result.graph().to_string())?;
    emit_record(json!({
        "kind": "symbol-expansion",
        "symbol": record.symbol,
        "fresh_symbol": record.fresh_symbol,
        "out": out.display().to_string(),
    }));
    Ok(())
}

fn cmd_split(
    graph: &Path,
    vertex: &str,
    classes: &[String],
    out: Option<PathBuf>,
) -> Result<(), Failure> {
    let x = shift_from(graph)?;
    let partition: Vec<Vec<String>> = classes
        .iter()
        .map(|c| c.split(',').map(str::to_string).collect())
        .collect();
    let (result, code) =
        moves::out_split(&x, vertex, &partition).map_err(|e| Failure::Malformed(e.to_string()))?;
    let out = out.unwrap_or_else(|| default_out(graph, "split"));
    write_out(&out, &result.graph().to_string())?;
    emit_record(json!({
        "kind": "out-split",
        "vertex": vertex,
        "classes": partition,
        "code_radius": code.radius(),
        "out": out.display().to_string(),
    }));
    Ok(())
}

// ---- sections ----

fn cmd_validate(graph: &Path, section: &Path, json: bool) -> Result<(), Failure> {
    let x = shift_from(graph)?;
    let c = section_from(x.graph(), section)?;
    match c.validate(&x) {
        SectionVerdict::Valid { max_return } => emit(
            json,
            json!({ "valid": true, "max_return": max_return }),
            format!("valid\nmax_return = {max_return}\n"),
        ),
        SectionVerdict::Invalid { witness } => emit(
            json,
            json!({ "valid": false, "witness": witness.text(x.graph()) }),
            format!("invalid\nwitness = {}\n", witness.text(x.graph())),
        ),
    }
    Ok(())
}

fn cmd_returns(
    graph: &Path,
    section: &Path,
    out_graph: Option<PathBuf>,
    json: bool,
) -> Result<(), Failure> {
    let x = shift_from(graph)?;
    let c = section_from(x.graph(), section)?;
    let system = ReturnSystem::build(&x, &c).map_err(refused)?;
    let words: Vec<String> = system.words().iter().map(|w| w.text(x.graph())).collect();
    if let Some(p) = out_graph {
        write_out(&p, &system.graph().to_string())?;
    }
    let mut text = format!(
        "max_return = {}\nvertices = {}\nwords:\n",
        system.max_return(),
        system.graph().vertex_count()
    );
    for w in &words {
        text.push_str(w);
        text.push('\n');
    }
    emit(
        json,
        json!({
            "max_return": system.max_return(),
            "vertices": system.graph().vertex_count(),
            "words": words,
        }),
        text,
    );
    Ok(())
}

fn cmd_pullback(
    source: &Path,
    target: &Path,
    code: &Path,
    section: &Path,
    out: Option<PathBuf>,
    json: bool,
) -> Result<(), Failure> {
    let x = shift_from(source)?;
    let y = shift_from(target)?;
    let sliding = io::parse_sliding_code(&x, &y, &slurp(code)?).map_err(|e| located(code, e))?;
    let c_prime = section_from(y.graph(), section)?;
    let c = section::pullback(&sliding, &c_prime);
    let text = io::write_section(x.graph(), &c);
    if let Some(p) = out {
        write_out(&p, &text)?;
    }
    let centers: Vec<String> = c.centers().iter().map(|w| w.text(x.graph())).collect();
    emit(
        json,
        json!({
            "radius": c.radius(),
            "height": c.height().to_string(),
            "centers": centers,
        }),
        text,
    );
    Ok(())
}

fn cmd_ps_case1(
    graph: &Path,
    first: &Path,
    second: &Path,
    verify_pmax: usize,
    out_d: Option<PathBuf>,
    out_dd: Option<PathBuf>,
    json: bool,
) -> Result<(), Failure> {
    let x = shift_from(graph)?;
    let c1 = section_from(x.graph(), first)?;
    let c2 = section_from(x.graph(), second)?;
    let case = section::ps_case1(&x, &c1, &c2).map_err(refused)?;
    section::verify_case_one(&x, &case, verify_pmax).map_err(Failure::Refused)?;
    let d = case.d();
    let dd = &case.d_second;
    if let Some(p) = out_d {
        write_out(&p, &io::write_section(x.graph(), d))?;
    }
    if let Some(p) = out_dd {
        write_out(&p, &io::write_section(x.graph(), dd))?;
    }
    let hits: BTreeMap<String, usize> = case
        .hit_steps
        .iter()
        .map(|(w, k)| (w.text(x.graph()), *k))
        .collect();
    let mut text = format!(
        "d_radius = {}\nd_centers = {}\nd_height = {}\n",
        d.radius(),
        d.centers().len(),
        d.height()
    );
    let _ = write!(
        text,
        "second_radius = {}\nsecond_centers = {}\nsecond_height = {}\n",
        dd.radius(),
        dd.centers().len(),
        dd.height()
    );
    let _ = write!(
        text,
        "psi_m = {}\npsi_rules = {}\nverified_up_to = {verify_pmax}\nhits:\n",
        case.psi.m,
        case.psi.table.len()
    );
    for (w, k) in &hits {
        let _ = writeln!(text, "{w} {k}");
    }
    emit(
        json,
        json!({
            "d": { "radius": d.radius(), "centers": d.centers().len(), "height": d.height().to_string() },
            "second": { "radius": dd.radius(), "centers": dd.centers().len(), "height": dd.height().to_string() },
            "psi_m": case.psi.m,
            "psi_rules": case.psi.table.len(),
            "verified_up_to": verify_pmax,
            "hits": hits,
        }),
        text,
    );
    Ok(())
}

fn cmd_disjointify(graph: &Path, sections: &[PathBuf], json: bool) -> Result<(), Failure> {
    let x = shift_from(graph)?;
    let mut cs = Vec::new();
    for p in sections {
        cs.push(section_from(x.graph(), p)?);
    }
    let adjusted = section::disjointify(&x, &cs);
    let mut text = String::new();
    let mut rows = Vec::new();
    for (p, c) in sections.iter().zip(&adjusted) {
        let _ = writeln!(text, "{} height {}", p.display(), c.height());
        rows.push(json!({
            "path": p.display().to_string(),
            "height": c.height().to_string(),
        }));
    }
    emit(json, Value::Array(rows), text);
    Ok(())
}

// ---- word codes ----

/// Blocks are named the way code files write them: return-word labels
/// joined by spaces.
fn block_label(system: &ReturnSystem, block: &[flowcalc::graph::EdgeId]) -> String {
    block
        .iter()
        .map(|&e| system.graph().edge(e).label.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_code_build(graph: &Path, target: &Path, code: &Path, json: bool) -> Result<(), Failure> {
    let code = code_from(graph, target, code)?;
    let ratios: BTreeMap<String, String> = code
        .time_change()
        .ratios
        .iter()
        .map(|(b, r)| (block_label(code.system(), b), r.to_string()))
        .collect();
    let mut text = format!("m = {}\nblocks = {}\nratios:\n", code.m(), code.table().len());
    for (b, r) in &ratios {
        let _ = writeln!(text, "{b} {r}");
    }
    emit(
        json,
        json!({ "m": code.m(), "blocks": code.table().len(), "ratios": ratios }),
        text,
    );
    Ok(())
}

fn cmd_code_apply(
    graph: &Path,
    target: &Path,
    code: &Path,
    orbit: &str,
    json: bool,
) -> Result<(), Failure> {
    let code = code_from(graph, target, code)?;
    let o = io::parse_orbit(code.system().base().graph(), orbit)
        .map_err(|e| Failure::Malformed(e.message))?;
    let app = code.apply_periodic(&o).map_err(refused)?;
    let image = app.image.text(code.target().graph());
    let phases: Vec<usize> = app.anchor_phases.iter().copied().collect();
    let phase_list = phases
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ");
    emit(
        json,
        json!({
            "image": image,
            "domain_length": app.domain_length,
            "image_length": app.image_length,
            "hits": app.hits,
            "anchor_phases": phases,
        }),
        format!(
            "image = {image}\ndomain_length = {}\nimage_length = {}\nhits = {}\nanchor_phases = {phase_list}\n",
            app.domain_length, app.image_length, app.hits
        ),
    );
    Ok(())
}

fn cmd_code_verify(
    graph: &Path,
    target: &Path,
    code: &Path,
    section: &Path,
    pmax: usize,
    json: bool,
) -> Result<(), Failure> {
    let code = code_from(graph, target, code)?;
    let c_prime = section_from(code.target().graph(), section)?;
    match verify_section_condition(&code, &c_prime, pmax) {
        SectionConditionVerdict::HoldsUpTo(p) => emit(
            json,
            json!({ "holds_up_to": p }),
            format!("holds up to period {p}\n"),
        ),
        SectionConditionVerdict::Violated {
            orbit,
            image,
            position,
        } => {
            let o = orbit.text(code.system().base().graph());
            let i = image.text(code.target().graph());
            emit(
                json,
                json!({ "orbit": o, "image": i, "position": position }),
                format!("violated\norbit = {o}\nimage = {i}\nposition = {position}\n"),
            );
        }
    }
    Ok(())
}

fn cmd_code_certificate(
    graph: &Path,
    target: &Path,
    code: &Path,
    json: bool,
) -> Result<(), Failure> {
    let code = code_from(graph, target, code)?;
    match conjugacy_certificate(&code).map_err(refused)? {
        ConjugacyVerdict::Certificate(cert) => {
            let potential: BTreeMap<String, String> = cert
                .graph
                .vertices()
                .map(|(v, data)| (data.id.clone(), cert.potential[v.0].to_string()))
                .collect();
            let mut text = format!(
                "certified\nvertices = {}\npotential:\n",
                cert.graph.vertex_count()
            );
            for (id, h) in &potential {
                let _ = writeln!(text, "{id} {h}");
            }
            emit(json, json!({ "certified": true, "potential": potential }), text);
        }
        ConjugacyVerdict::Refused { orbit, g_sum } => {
            let o = orbit.text(code.system().base().graph());
            emit(
                json,
                json!({ "certified": false, "orbit": o, "g_sum": g_sum.to_string() }),
                format!("refused\norbit = {o}\ng_sum = {g_sum}\n"),
            );
        }
    }
    Ok(())
}

fn cmd_code_openness(
    graph: &Path,
    target: &Path,
    code: &Path,
    kmax: usize,
    pmax: usize,
    json: bool,
) -> Result<(), Failure> {
    let code = code_from(graph, target, code)?;
    let g = code.target().graph();
    match openness_check(&code, kmax, pmax) {
        OpennessVerdict::OpenWithRadius(r) => emit(
            json,
            json!({ "open": true, "radius": r }),
            format!("open\nradius = {r}\n"),
        ),
        OpennessVerdict::NotOpenUpTo { k_max, witnesses } => {
            let mut text = format!("not open\nk_max = {k_max}\nwitnesses:\n");
            let mut rows = Vec::new();
            for w in &witnesses {
                let k = (w.window.len() - 1) / 2;
                let _ = writeln!(
                    text,
                    "k = {k}: window = {}; member = {} @ {}; non_member = {} @ {}",
                    w.window.text(g),
                    w.member.text(g),
                    w.member_phase,
                    w.non_member.text(g),
                    w.phase
                );
                rows.push(json!({
                    "k": k,
                    "window": w.window.text(g),
                    "member": w.member.text(g),
                    "member_phase": w.member_phase,
                    "non_member": w.non_member.text(g),
                    "phase": w.phase,
                }));
            }
            emit(
                json,
                json!({ "open": false, "k_max": k_max, "witnesses": rows }),
                text,
            );
        }
    }
    Ok(())
}

fn cmd_code_isotopy(
    graph: &Path,
    target: &Path,
    code: &Path,
    beta: &Path,
    json: bool,
) -> Result<(), Failure> {
    let code = code_from(graph, target, code)?;
    let g = code.system().base().graph();
    let beta = io::parse_window_function(g, &slurp(beta)?).map_err(|e| located(beta, e))?;
    match verify_isotopy_certificate(&code, &beta).map_err(refused)? {
        IsotopyVerdict::Valid => emit(json, json!({ "valid": true }), "valid\n".to_string()),
        IsotopyVerdict::Violated {
            cylinder,
            anchor,
            lhs,
            rhs,
        } => emit(
            json,
            json!({
                "valid": false,
                "cylinder": cylinder.text(g),
                "anchor": anchor,
                "lhs": lhs.to_string(),
                "rhs": rhs.to_string(),
            }),
            format!(
                "violated\ncylinder = {}\nanchor = {anchor}\nlhs = {lhs}\nrhs = {rhs}\n",
                cylinder.text(g)
            ),
        ),
    }
    Ok(())
}

// ---- cocycles ----

fn weights_from(g: &DirectedGraph, path: &Path) -> Result<Vec<BigRational>, Failure> {
    io::parse_weights(g, &slurp(path)?).map_err(|e| located(path, e))
}

fn cycle_text(g: &DirectedGraph, cycle: &[flowcalc::graph::EdgeId]) -> String {
    cycle
        .iter()
        .map(|&e| g.label(e))
        .collect::<Vec<_>>()
        .join(",")
}

fn cmd_livsic_check(graph: &Path, weights: &Path, json: bool) -> Result<(), Failure> {
    let g = graph_from(graph)?;
    let w = weights_from(&g, weights)?;
    match livsic::find_unbalanced_cycle(&g, &w) {
        None => emit(json, json!({ "balanced": true }), "balanced\n".to_string()),
        Some((cycle, sum)) => {
            let c = cycle_text(&g, &cycle);
            emit(
                json,
                json!({ "balanced": false, "cycle": c, "sum": sum.to_string() }),
                format!("unbalanced\ncycle = {c}\nsum = {sum}\n"),
            );
        }
    }
    Ok(())
}

fn cmd_livsic_solve(graph: &Path, weights: &Path, json: bool) -> Result<(), Failure> {
    let g = graph_from(graph)?;
    let w = weights_from(&g, weights)?;
    match livsic::graph_potential(&g, &w) {
        Ok(h) => {
            let potential: BTreeMap<String, String> = g
                .vertices()
                .map(|(v, data)| (data.id.clone(), h[v.0].to_string()))
                .collect();
            let mut text = String::new();
            for (v, data) in g.vertices() {
                let _ = writeln!(text, "vertex {} {}", data.id, h[v.0]);
            }
            emit(json, json!({ "potential": potential }), text);
        }
        Err(PotentialError::CycleObstruction { cycle, sum }) => {
            let c = cycle_text(&g, &cycle);
            emit(
                json,
                json!({ "obstruction": { "cycle": c, "sum": sum.to_string() } }),
                format!("no potential\ncycle = {c}\nsum = {sum}\n"),
            );
        }
        Err(e @ PotentialError::NotIrreducible(_)) => return Err(refused(e)),
    }
    Ok(())
}

fn cmd_livsic_coboundary(graph: &Path, function: &Path, json: bool) -> Result<(), Failure> {
    let x = shift_from(graph)?;
    let f = io::parse_window_function(x.graph(), &slurp(function)?)
        .map_err(|e| located(function, e))?;
    // The solver needs a value on every occurring window; check totality
    // up front so the gap is a refusal, not a crash.
    for w in x.words_of_length(2 * f.radius() + 1) {
        if f.value(&w).is_none() {
            return Err(Failure::Refused(format!(
                "ResolutionMismatch: no value for occurring window {}",
                w.text(x.graph())
            )));
        }
    }
    match livsic::coboundary(&x, &f) {
        Ok(b) => {
            let table: BTreeMap<String, String> = b
                .table()
                .iter()
                .map(|(w, v)| (w.text(x.graph()), v.to_string()))
                .collect();
            emit(
                json,
                json!({ "coboundary": true, "radius": b.radius(), "table": table }),
                io::write_window_function(x.graph(), &b),
            );
        }
        Err(CoboundaryError::CycleObstruction { orbit, sum }) => {
            let o = orbit.text(x.graph());
            emit(
                json,
                json!({ "coboundary": false, "orbit": o, "sum": sum.to_string() }),
                format!("not a coboundary\norbit = {o}\nsum = {sum}\n"),
            );
        }
        Err(e @ CoboundaryError::NotIrreducible(_)) => return Err(refused(e)),
    }
    Ok(())
}

// ---- canned pipelines ----

struct Step {
    name: &'static str,
    pass: bool,
    detail: Vec<String>,
}

fn step(name: &'static str, pass: bool, detail: Vec<String>) -> Step {
    Step { name, pass, detail }
}

fn cmd_example(name: ExampleName, kmax: usize, json: bool) -> Result<(), Failure> {
    let (label, steps) = match name {
        ExampleName::Expansion56 => ("expansion-5.6", example_expansion()),
        ExampleName::NotOpen59 => ("not-open-5.9", example_not_open(kmax)),
        ExampleName::Reducible34 => ("reducible-3.4", example_reducible()),
    };
    let pass = steps.iter().all(|s| s.pass);
    if json {
        let rows: Vec<Value> = steps
            .iter()
            .map(|s| json!({ "name": s.name, "pass": s.pass, "detail": s.detail }))
            .collect();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "example": label,
                "pass": pass,
                "steps": rows,
            }))
            .expect("report serializes")
        );
    } else {
        for s in &steps {
            println!("step {}: {}", s.name, if s.pass { "pass" } else { "fail" });
            for d in &s.detail {
                println!("  {d}");
            }
        }
        println!("{label}: {}", if pass { "pass" } else { "fail" });
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Refused(format!("{label}: fail")))
    }
}

/// Symbol expansion of the full 2-shift at `a`: the result matches the
/// golden-mean presentation, preserves both invariants, is decided flow
/// equivalent, and the induced word code is refused a length certificate
/// on the fixed point of `a`.
fn example_expansion() -> Vec<Step> {
    let x = fixtures::full_2_shift();
    let (expanded, record) = moves::symbol_expansion(&x, "a").expect("fixture symbol exists");
    let gm = fixtures::golden_mean();

    let same_language = (1..=6).all(|n| {
        let texts = |s: &EdgeShift| -> BTreeSet<String> {
            s.words_of_length(n)
                .iter()
                .map(|w| w.text(s.graph()))
                .collect()
        };
        texts(&expanded) == texts(&gm)
    });
    let mut steps = vec![step(
        "expansion-graph",
        expanded.adjacency() == gm.adjacency() && record.fresh_symbol == "a'" && same_language,
        vec![format!("fresh_symbol = {}", record.fresh_symbol)],
    )];

    let before = flow_invariants(&x.adjacency());
    let after = flow_invariants(&expanded.adjacency());
    steps.push(step(
        "invariants-preserved",
        before == after && after.ps.to_string() == "-1" && after.bf.to_string() == "0",
        vec![format!("ps = {}", after.ps), format!("bf = {}", after.bf)],
    ));

    steps.push(step(
        "decide-fe",
        franks_equivalent(&x.adjacency(), &expanded.adjacency())
            == Ok(FranksDecision::Equivalent),
        Vec::new(),
    ));

    // The expansion as a word code on the full section: each symbol maps
    // to its substitution image, so `a`-crossings gain one symbol.
    let system = ReturnSystem::build(&x, &CrossSection::full(&x)).expect("full section is valid");
    let mut images = BTreeMap::new();
    for (e, data) in x.graph().edges() {
        let mut w = vec![expanded
            .graph()
            .edge_by_label(&data.label)
            .expect("labels are preserved")];
        if data.label == record.symbol {
            w.push(
                expanded
                    .graph()
                    .edge_by_label(&record.fresh_symbol)
                    .expect("fresh label exists"),
            );
        }
        images.insert(e, Word(w));
    }
    let code = substitution_code(&system, &expanded, &images).expect("expansion code is total");
    let (pass, detail) = match conjugacy_certificate(&code) {
        Ok(ConjugacyVerdict::Refused { orbit, g_sum }) => (
            orbit.text(x.graph()) == "(a)" && g_sum == BigRational::one(),
            vec![
                format!("orbit = {}", orbit.text(x.graph())),
                format!("g_sum = {g_sum}"),
            ],
        ),
        _ => (false, vec!["expected a refusal".to_string()]),
    };
    steps.push(step("certificate-refused", pass, detail));
    steps
}

/// The paired-run collapse presented on the section {a1, b}: a valid
/// section with return words a1a2 and b, whose word code is not open —
/// every window radius k admits the run a^{2k+1}b as a non-member
/// matching the fixed point of `a`.
fn example_not_open(kmax: usize) -> Vec<Step> {
    let (x, code) = fixtures::paired_run_word_code();
    let system = code.system();
    let mut steps = vec![step(
        "section-valid",
        system.section().validate(&x) == SectionVerdict::Valid { max_return: 2 },
        vec!["max_return = 2".to_string()],
    )];

    let words: BTreeSet<String> = system.words().iter().map(|w| w.text(x.graph())).collect();
    let expected: BTreeSet<String> = ["a1,a2", "b"].iter().map(|s| s.to_string()).collect();
    steps.push(step(
        "return-words",
        words == expected,
        words.iter().cloned().collect(),
    ));

    steps.push(step(
        "return-graph",
        system.graph().vertex_count() == 1
            && IntMatrix::adjacency(system.graph()) == IntMatrix::from_rows(&[vec![2]]),
        Vec::new(),
    ));

    let y = code.target();
    let a = y.graph().edge_by_label("a").expect("target symbol a");
    let b = y.graph().edge_by_label("b").expect("target symbol b");
    let (pass, detail) = match openness_check(&code, kmax, 12) {
        OpennessVerdict::NotOpenUpTo { k_max, witnesses } => {
            let mut ok = k_max == kmax && witnesses.len() == kmax + 1;
            let mut lines = Vec::new();
            for (k, w) in witnesses.iter().enumerate() {
                let mut run = vec![a; 2 * k + 1];
                run.push(b);
                ok &= w.window == Word(vec![a; 2 * k + 1])
                    && w.member.word().0 == vec![a]
                    && w.member_phase == 0
                    && w.non_member.word().0 == run
                    && w.phase == k;
                lines.push(format!(
                    "k = {k}: window = {}; member = {} @ {}; non_member = {} @ {}",
                    w.window.text(y.graph()),
                    w.member.text(y.graph()),
                    w.member_phase,
                    w.non_member.text(y.graph()),
                    w.phase
                ));
            }
            (ok, lines)
        }
        OpennessVerdict::OpenWithRadius(r) => {
            (false, vec![format!("unexpectedly open at radius {r}")])
        }
    };
    steps.push(step("openness", pass, detail));
    steps
}

/// A two-component shift: invariants still compute, but the
/// flow-equivalence decision refuses it by hypothesis.
fn example_reducible() -> Vec<Step> {
    let x = fixtures::reducible();
    let inv = flow_invariants(&x.adjacency());
    let refusal = franks_equivalent(&x.adjacency(), &fixtures::full_2_shift().adjacency());
    let (pass, detail) = match refusal {
        Err(e @ FranksError::NotIrreducible(_)) => (true, vec![e.to_string()]),
        _ => (false, vec!["expected a NotIrreducible refusal".to_string()]),
    };
    vec![
        step("not-irreducible", !x.is_irreducible(), Vec::new()),
        step(
            "invariants-computable",
            inv.ps.to_string() == "0" && inv.bf.to_string() == "Z/2 (+) Z",
            vec![format!("ps = {}", inv.ps), format!("bf = {}", inv.bf)],
        ),
        step("guarded-refusal", pass, detail),
    ]
}
