//! `spine` -- command-line front end for the exact spine-algebra models:
//! semilattice enumeration, grade arithmetic, the spine semigroup,
//! character evaluation, idempotent synthesis, affine pullbacks, p-adic
//! norms, and Hasse-diagram export.
//!
//! Results go to stdout, diagnostics to stderr. Exit codes: 0 on success,
//! 1 on domain errors, 2 on usage errors (including malformed literals).

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spine_core::json;
use spine_core::padic;
use spine_core::rat::format_rat;
use spine_core::semilattice::{FiniteSemilattice, EXHAUSTIVE_LIMIT};
use spine_core::topology::{
    dual_descriptor, enumerate_grades, restrict_to_generators, GradeEnumeration, Model,
    ModelSemilattice, TopologyGrade,
};

use spine_cli::dsl::{
    self as dsl, parse_coset_expr, parse_grade, parse_matrix, parse_model, parse_spine,
    parse_vector,
};

#[derive(Parser)]
#[command(
    name = "spine",
    version,
    about = "Exact models of topology semilattices, the spine semigroup and its graded algebra",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum HasseFormat {
    Dot,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate a model's grade semilattice and verify its axioms
    Semilattice {
        /// Model spec: compact | R | Z | minWAP | R^n | Z^n | Q | axb
        spec: String,
        /// Grade literals generating a finite restriction
        #[arg(long, num_args = 1..)]
        generators: Vec<String>,
    },
    /// Join of two grades
    Join {
        spec: String,
        g1: String,
        g2: String,
    },
    /// Meet of two grades
    Meet {
        spec: String,
        g1: String,
        g2: String,
    },
    /// Product of two spine elements
    SpineMul {
        spec: String,
        s: String,
        t: String,
    },
    /// Evaluate the character of a spine element on a graded element (JSON file)
    CharEval {
        spec: String,
        s: String,
        /// Path to a graded-element JSON document
        u: String,
    },
    /// Synthesize the indicator of a coset ring expression over Z^m
    Idempotent {
        /// Integer-lattice model, e.g. Z^2
        spec: String,
        /// Coset expression, e.g. "(2Z \ 4Z)" or "H[[2,0],[0,2]]"
        #[arg(long)]
        expr: String,
    },
    /// Pull a graded element back along the affine map h -> A h + b
    Pullback {
        /// Rational matrix literal [[..],[..]] (rows)
        #[arg(long)]
        matrix: String,
        /// Rational vector literal [..]
        #[arg(long)]
        offset: String,
        /// Path to a graded-element JSON document over R^n
        u: String,
    },
    /// p-adic valuation and norm of a rational
    Padic {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: String,
    },
    /// Distinctness table |p^n/q^n|_p vs |p^n/q^n|_q
    Witness {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: u32,
    },
    /// Relabel a vector-model grade as a dual-group topology
    Dual {
        spec: String,
        g: String,
    },
    /// Export the covering relation of a finite grade semilattice
    ExportHasse {
        spec: String,
        #[arg(long, num_args = 1..)]
        generators: Vec<String>,
        #[arg(long, value_enum)]
        format: HasseFormat,
    },
}

enum CliError {
    Usage(String),
    Domain(String),
}

impl From<dsl::SyntaxError> for CliError {
    fn from(e: dsl::SyntaxError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<spine_core::Error> for CliError {
    fn from(e: spine_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

type CmdResult = Result<String, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> CmdResult {
    match cmd {
        Command::Semilattice { spec, generators } => cmd_semilattice(&spec, &generators),
        Command::Join { spec, g1, g2 } => cmd_join_meet(&spec, &g1, &g2, true),
        Command::Meet { spec, g1, g2 } => cmd_join_meet(&spec, &g1, &g2, false),
        Command::SpineMul { spec, s, t } => cmd_spine_mul(&spec, &s, &t),
        Command::CharEval { spec, s, u } => cmd_char_eval(&spec, &s, &u),
        Command::Idempotent { spec, expr } => cmd_idempotent(&spec, &expr),
        Command::Pullback { matrix, offset, u } => cmd_pullback(&matrix, &offset, &u),
        Command::Padic { p, r } => cmd_padic(p, &r),
        Command::Witness { p, q, n } => cmd_witness(p, q, n),
        Command::Dual { spec, g } => cmd_dual(&spec, &g),
        Command::ExportHasse {
            spec,
            generators,
            format,
        } => cmd_export_hasse(&spec, &generators, format),
    }
}

fn model_of(spec: &str) -> Result<Model, CliError> {
    Ok(parse_model(spec)?)
}

fn grades_of(model: &Model, literals: &[String]) -> Result<Vec<TopologyGrade>, CliError> {
    literals
        .iter()
        .map(|g| Ok(parse_grade(model, g)?))
        .collect()
}

fn describe_finite(ms: &ModelSemilattice) -> String {
    let mut out = String::new();
    let s = ms.semilattice();
    let _ = writeln!(out, "elements: {}", s.len());
    for (i, label) in s.labels().iter().enumerate() {
        let _ = writeln!(out, "  {i}: {label}");
    }
    let _ = writeln!(
        out,
        "unit: {}",
        s.unit().map_or("none".to_string(), |u| s.labels()[u].clone())
    );
    let report = s.verify_axioms();
    let _ = writeln!(
        out,
        "axioms: {}",
        if report.is_empty() { "ok" } else { "violated" }
    );
    if !report.is_empty() {
        for (x, y) in &report.commutativity {
            let _ = writeln!(out, "  commutativity fails at ({x},{y})");
        }
        for (x, y, z) in &report.associativity {
            let _ = writeln!(out, "  associativity fails at ({x},{y},{z})");
        }
        for x in &report.idempotency {
            let _ = writeln!(out, "  idempotency fails at {x}");
        }
        for x in &report.unit_law {
            let _ = writeln!(out, "  unit law fails at {x}");
        }
    }
    if s.len() <= EXHAUSTIVE_LIMIT {
        let hereditary = s.enumerate_hereditary_sets().unwrap_or_default();
        let semichars = s.semicharacters().unwrap_or_default();
        let _ = writeln!(out, "hereditary sets: {}", hereditary.len());
        let _ = writeln!(out, "semicharacters: {}", semichars.len());
        let all_principal = hereditary
            .iter()
            .all(|h| matches!(s.is_principal(h), Ok(Some(_))));
        let bijection = {
            let mut supports: Vec<_> = semichars.iter().map(|c| c.support()).collect();
            supports.sort();
            let mut members: Vec<_> = hereditary
                .iter()
                .map(|h| h.members().collect::<std::collections::BTreeSet<_>>())
                .collect();
            members.sort();
            supports == members
        };
        let _ = writeln!(
            out,
            "duality: {}",
            if all_principal && bijection { "ok" } else { "violated" }
        );
    }
    out
}

fn cmd_semilattice(spec: &str, generators: &[String]) -> CmdResult {
    let model = model_of(spec)?;
    let mut out = format!("model: {model}\n");
    if generators.is_empty() {
        match enumerate_grades(&model)? {
            GradeEnumeration::Finite(ms) => out.push_str(&describe_finite(&ms)),
            GradeEnumeration::Symbolic(desc) => {
                let _ = writeln!(out, "symbolic: {desc}");
                let _ = writeln!(
                    out,
                    "hint: pass --generators to build a finite restriction"
                );
            }
        }
    } else {
        let gens = grades_of(&model, generators)?;
        let ms = restrict_to_generators(&model, &gens)?;
        let _ = writeln!(out, "restriction of {} generator(s)", gens.len());
        out.push_str(&describe_finite(&ms));
    }
    Ok(out)
}

fn cmd_join_meet(spec: &str, g1: &str, g2: &str, join: bool) -> CmdResult {
    let model = model_of(spec)?;
    let a = parse_grade(&model, g1)?;
    let b = parse_grade(&model, g2)?;
    let result = if join { a.join(&b)? } else { a.meet(&b)? };
    Ok(format!("{result}\n"))
}

fn cmd_spine_mul(spec: &str, s: &str, t: &str) -> CmdResult {
    let model = model_of(spec)?;
    let a = parse_spine(&model, s)?;
    let b = parse_spine(&model, t)?;
    Ok(format!("{}\n", a.mul(&b)?))
}

fn read_graded(path: &str) -> Result<spine_core::algebra::GradedElement, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {path:?}: {e}")))?;
    json::graded_from_str(&text).map_err(|e| match e {
        spine_core::Error::Malformed(m) => CliError::Usage(format!("{path}: {m}")),
        other => CliError::Domain(other.to_string()),
    })
}

/// Formats a complex number with 12 significant digits per component.
fn format_complex(re: f64, im: f64) -> String {
    let norm = |x: f64| if x == 0.0 { 0.0 } else { x };
    let (re, im) = (norm(re), norm(im));
    if im == 0.0 {
        format!("{re:.11e}")
    } else if im > 0.0 {
        format!("{re:.11e}+{im:.11e}i")
    } else {
        format!("{re:.11e}-{:.11e}i", -im)
    }
}

fn cmd_char_eval(spec: &str, s: &str, u: &str) -> CmdResult {
    let model = model_of(spec)?;
    let elem = parse_spine(&model, s)?;
    let graded = read_graded(u)?;
    let value = graded.char_eval(&elem)?;
    let (re, im) = value.to_complex_f64();
    Ok(format!(
        "exact: {value}\nnumeric: {}\n",
        format_complex(re, im)
    ))
}

fn cmd_idempotent(spec: &str, expr: &str) -> CmdResult {
    let model = model_of(spec)?;
    let Model::Vector {
        group: spine_core::topology::VectorGroup::Integer,
        dim,
    } = model
    else {
        return Err(CliError::Usage(format!(
            "idempotent synthesis runs over integer-lattice models (Z^m), got {model}"
        )));
    };
    let parsed = parse_coset_expr(dim, expr)?;
    let q = spine_core::coset::synthesize_idempotent(&parsed)?;
    Ok(format!("{}\n", json::graded_to_string(&q)))
}

fn cmd_pullback(matrix: &str, offset: &str, u: &str) -> CmdResult {
    let m = parse_matrix(matrix)?;
    let b = parse_vector(offset)?;
    let map = spine_core::algebra::AffineMap::new(m, b)?;
    let graded = read_graded(u)?;
    let pulled = graded.affine_pullback(&map)?;
    Ok(format!("{}\n", json::graded_to_string(&pulled)))
}

fn cmd_padic(p: u64, r: &str) -> CmdResult {
    let r = spine_core::rat::parse_rat(r)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let nu = padic::nu_p(p, &r)?;
    let abs = padic::abs_p(p, &r)?;
    Ok(format!("nu={nu} abs={}\n", format_rat(&abs)))
}

fn cmd_witness(p: u64, q: u64, n: u32) -> CmdResult {
    let rows = padic::q_distinctness_witness(p, q, n)?;
    let mut out = String::new();
    for row in rows {
        let _ = writeln!(
            out,
            "n={} r={} abs_p={} abs_q={}",
            row.n,
            format_rat(&row.r),
            format_rat(&row.abs_p),
            format_rat(&row.abs_q)
        );
    }
    Ok(out)
}

fn cmd_dual(spec: &str, g: &str) -> CmdResult {
    let model = model_of(spec)?;
    let grade = parse_grade(&model, g)?;
    let d = dual_descriptor(&grade)?;
    Ok(format!(
        "dual: {} as an open subgroup of the dual group\ninvolution: {}\n",
        d.open_subgroup,
        d.dual()
    ))
}

fn hasse_dot(s: &FiniteSemilattice) -> String {
    let mut out = String::from("digraph semilattice {\n  rankdir=BT;\n");
    for (i, label) in s.labels().iter().enumerate() {
        let escaped = label.replace('"', "\\\"");
        let _ = writeln!(out, "  n{i} [label=\"{escaped}\"];");
    }
    for (x, y) in s.covering_pairs() {
        let _ = writeln!(out, "  n{x} -> n{y};");
    }
    out.push_str("}\n");
    out
}

fn hasse_json(s: &FiniteSemilattice) -> String {
    let covers: Vec<serde_json::Value> = s
        .covering_pairs()
        .into_iter()
        .map(|(x, y)| serde_json::json!([x, y]))
        .collect();
    let value = serde_json::json!({
        "covers": covers,
        "elements": s.labels(),
        "unit": s.unit(),
    });
    format!("{value}\n")
}

fn cmd_export_hasse(spec: &str, generators: &[String], format: HasseFormat) -> CmdResult {
    let model = model_of(spec)?;
    let ms = if generators.is_empty() {
        match enumerate_grades(&model)? {
            GradeEnumeration::Finite(ms) => ms,
            GradeEnumeration::Symbolic(_) => {
                return Err(CliError::Usage(format!(
                    "{model} has infinitely many grades; pass --generators for a finite restriction"
                )))
            }
        }
    } else {
        restrict_to_generators(&model, &grades_of(&model, generators)?)?
    };
    Ok(match format {
        HasseFormat::Dot => hasse_dot(ms.semilattice()),
        HasseFormat::Json => hasse_json(ms.semilattice()),
    })
}
