//! The `charkummer` command line.
//!
//! Exit codes: 0 when every assertion passes, 1 on a failed assertion, 2 on
//! a parse error, 3 on a domain error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::blowup::ChartTag;
use crate::error::{Error, Result};
use crate::field::GaloisField;
use crate::involution::{Chart, InvolutionData, PointCount};
use crate::kummer::{gf16, run_pipeline, ScenarioCase};
use crate::lattice::{parse_graph, CurveConfig, Dynkin, GraphFile};
use crate::localring::tjurina_number;
use crate::rdp::RdpDatabase;
use crate::report::{Provenance, Record};
use crate::series::TruncatedSeries;
use crate::serre::{sym_depth_report, SymDepthQuery};
use crate::verify::{run_all, run_criterion, sorted_records, VerifyOptions, DEFAULT_PRECISION};

pub const PRECISION_ENV: &str = "CHARKUMMER_PRECISION";

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "charkummer",
    version,
    about = "Wild involution quotients in characteristic two"
)]
struct Cli {
    /// Output mode.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    format: Format,
    /// Truncation degree N; overrides CHARKUMMER_PRECISION (default 12).
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Records,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Invariant equation of the involution given by (a, b), with residuals.
    Quotient(PairArgs),
    /// Charts of the blow-up of (a, b, z) and their singular points.
    Blowup(PairArgs),
    /// Tjurina number of a hypersurface.
    Tjurina {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value = "x,y,z")]
        vars: String,
        #[arg(long, default_value = "2")]
        field: String,
        /// Classify against the database under this Dynkin type.
        #[arg(long)]
        dynkin: Option<String>,
        #[arg(long)]
        rdp_db: Option<PathBuf>,
    },
    /// Exceptional-curve lattices read from a graph file.
    Lattice {
        #[command(subcommand)]
        op: LatticeOp,
    },
    /// Depth and Serre conditions of Sym^n of a smooth g-fold.
    Serre {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
    },
    /// Singularities of the Kummer surface and its partial resolution.
    Scenario {
        #[arg(long)]
        p_rank: u8,
        #[arg(long)]
        a_number: Option<u8>,
        /// Oort parameter in GF(16), as `0`, `1` or `g^j`.
        #[arg(long)]
        q: Option<String>,
        #[arg(long)]
        rdp_db: Option<PathBuf>,
    },
    /// Runs every acceptance criterion.
    VerifyPaper {
        #[arg(long)]
        rdp_db: Option<PathBuf>,
        /// Run a single criterion.
        #[arg(long)]
        criterion: Option<usize>,
    },
}

#[derive(Args, Debug)]
struct PairArgs {
    #[arg(long)]
    a: String,
    #[arg(long)]
    b: String,
    /// Field as `p^k`; elements print as powers `g^j` of the fixed generator.
    #[arg(long, default_value = "2")]
    field: String,
}

#[derive(Subcommand, Debug)]
enum LatticeOp {
    /// Fundamental cycle and its self-intersection.
    Fundamental(GraphArg),
    /// Canonical cycle, minimal ellipticity and multiplicity.
    Canonical(GraphArg),
    /// Solves M x = pairing and reports integrality.
    Cartier {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma-separated pairing vector.
        #[arg(long)]
        pairing: String,
    },
    /// ADE type of each connected component.
    Dynkin(GraphArg),
    /// Components left after removing curves.
    Remove {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma-separated curve labels.
        #[arg(long)]
        curves: String,
    },
    /// Blows up a point on the listed curves and prints the new graph.
    Blowup {
        #[command(flatten)]
        graph: GraphArg,
        /// Comma-separated `label` or `label:multiplicity`.
        #[arg(long)]
        through: String,
        #[arg(long)]
        label: String,
    },
    /// Compares every `cycle` line of the file with the fundamental cycle.
    Check(GraphArg),
}

#[derive(Args, Debug)]
struct GraphArg {
    #[arg(long)]
    graph: PathBuf,
}

/// Output of a command: text for humans, records for machines.
#[derive(Default)]
struct Outcome {
    text: String,
    records: Vec<Record>,
    /// Values shown in records mode when a command has no assertions.
    values: Vec<(String, String)>,
}

impl Outcome {
    fn line(&mut self, s: impl AsRef<str>) {
        self.text.push_str(s.as_ref());
        self.text.push('\n');
    }

    fn value(&mut self, key: &str, v: impl ToString) {
        self.values.push((key.to_string(), v.to_string()));
    }

    fn passes(&self) -> bool {
        crate::report::all_pass(&self.records)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::UnknownVariable(_) | Error::VariableMismatch(..) => EXIT_PARSE,
        _ => EXIT_DOMAIN,
    }
}

/// Precision from the flag, then the environment, then the default.
fn precision(flag: Option<u32>) -> Result<u32> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(PRECISION_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("{PRECISION_ENV}={s:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

fn load_db(path: &Option<PathBuf>) -> Result<RdpDatabase> {
    match path {
        Some(p) => RdpDatabase::load(p),
        None => RdpDatabase::builtin(),
    }
}

fn read_graph(arg: &GraphArg) -> Result<GraphFile> {
    let text = std::fs::read_to_string(&arg.graph)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", arg.graph.display())))?;
    parse_graph(&text)
}

fn int_list(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

fn indices(config: &CurveConfig, labels: &str) -> Result<Vec<usize>> {
    labels
        .split(',')
        .map(|l| {
            config
                .index_of(l.trim())
                .ok_or_else(|| Error::Parse(format!("unknown curve {l:?}")))
        })
        .collect()
}

fn component_names(parts: &[CurveConfig]) -> String {
    let names: Vec<String> = parts
        .iter()
        .map(|p| {
            p.dynkin_recognize()
                .map_or("non-ADE".to_string(), |t| t.to_string())
        })
        .collect();
    if names.is_empty() {
        "empty".into()
    } else {
        names.join("+")
    }
}

fn pair(args: &PairArgs) -> Result<InvolutionData> {
    let f = GaloisField::parse(&args.field)?;
    InvolutionData::parse(&args.a, &args.b, &f)
}

fn quotient(args: &PairArgs, n: u32) -> Result<Outcome> {
    let d = pair(args)?;
    let mut o = Outcome::default();
    let eq = d.invariant_equation()?;
    o.line(format!("field: {}", d.field()));
    o.line(format!("equation: {eq}"));
    o.line(format!("center length: {}", d.center_length()));
    o.value("equation", &eq);
    let id = d.verify_invariant_identity(n)?;
    let verdict = if id.passes() { "PASS" } else { "FAIL" };
    o.line(format!("identity residual mod m^{n}: {verdict}"));
    o.records.push(Record::check(
        "quotient.identity",
        id.passes(),
        "0",
        if id.passes() { "0" } else { "nonzero" },
        Provenance::Derived,
    ));
    let count = d.count_singular_chart_points();
    o.line(format!("singular points on the exceptional curve: {count}"));
    o.value("singular_points", count);
    if count == PointCount::NonNormal {
        o.line("note: NONNORMAL, the blow-up of (a, b, z) is not normal");
    }
    Ok(o)
}

fn blowup(args: &PairArgs, n: u32) -> Result<Outcome> {
    let d = pair(args)?;
    let mut o = Outcome::default();
    let r = d.blowup()?;
    o.line(format!("center length: {}", r.center_length));
    o.line(format!(
        "agrees with the point blow-up: {}",
        r.point_blowup_equivalent
    ));
    for c in &r.charts {
        o.line(format!(
            "{} ({}), variables {}:",
            c.tag,
            c.note,
            c.vars.join(",")
        ));
        for rel in &c.relations {
            o.line(format!("  {rel}"));
        }
    }
    o.records.push(Record::new(
        "blowup.z_chart.exceptional_empty",
        true,
        r.z_chart_exceptional_empty,
        Provenance::Derived,
    ));
    let f = d.field().clone();
    for chart in [Chart::A, Chart::B] {
        let tag = if chart == Chart::A {
            ChartTag::A
        } else {
            ChartTag::B
        };
        let c = d.chart_consistency_check(chart)?;
        o.records.push(Record::new(
            format!("blowup.{tag}.consistency"),
            true,
            c.passes(),
            Provenance::Derived,
        ));
        let s = d.chart_singularities(chart, n)?;
        o.line(format!("{chart}: nonsmoothness length {}", s.length));
        o.value(&format!("{tag}.length"), s.length);
        for (slope, len) in &s.points {
            o.line(format!("  slope {}: length {len}", f.format(*slope)));
        }
        if s.irrational_points > 0 {
            o.line(format!(
                "  {} further points over an extension",
                s.irrational_points
            ));
        }
    }
    o.line(format!(
        "singular points on the exceptional curve: {}",
        d.count_singular_chart_points()
    ));
    Ok(o)
}

fn tjurina(
    poly: &str,
    vars: &str,
    field: &str,
    dynkin: &Option<String>,
    db: &Option<PathBuf>,
    n: u32,
) -> Result<Outcome> {
    let f = GaloisField::parse(field)?;
    let names: Vec<&str> = vars.split(',').map(str::trim).collect();
    let g = TruncatedSeries::parse(poly, &f, &names)?;
    let tau = tjurina_number(&g, n)?;
    let mut o = Outcome::default();
    o.line(format!("{tau}"));
    o.value("tau", tau);
    if let Some(t) = dynkin {
        let t = Dynkin::parse(t)?;
        let class = match tau {
            crate::localring::Length::Finite(k) => {
                load_db(db)?.classify_by_tjurina(k, t).to_string()
            }
            crate::localring::Length::Infinite => "unknown".into(),
        };
        o.line(format!("class: {class}"));
        o.value("class", class);
    }
    Ok(o)
}

fn lattice(op: &LatticeOp) -> Result<Outcome> {
    let mut o = Outcome::default();
    match op {
        LatticeOp::Fundamental(g) => {
            let c = read_graph(g)?.config;
            let z = c.fundamental_cycle()?;
            let z2 = c.intersect(&z, &z);
            o.line(format!("Z = {z}  Z^2 = {z2}"));
            o.value("Z", &z);
            o.value("Z^2", z2);
        }
        LatticeOp::Canonical(g) => {
            let c = read_graph(g)?.config;
            let k = c.canonical_cycle()?;
            let elliptic = c.is_minimally_elliptic()?;
            o.line(format!("K = {k}"));
            o.line(format!("minimally elliptic: {elliptic}"));
            o.value("K", &k);
            o.value("minimally_elliptic", elliptic);
            if elliptic {
                let m = c.elliptic_multiplicity()?;
                o.line(format!("multiplicity: {m}"));
                o.value("multiplicity", m);
            }
        }
        LatticeOp::Cartier { graph, pairing } => {
            let c = read_graph(graph)?.config;
            let s = c.numerically_cartier(&int_list(pairing)?)?;
            o.line(format!("x = {}", s.solution));
            o.line(format!("integral: {}", s.integral));
            o.value("x", &s.solution);
            o.value("integral", s.integral);
        }
        LatticeOp::Dynkin(g) => {
            let c = read_graph(g)?.config;
            let names = component_names(&c.remove_curves(&[]));
            o.line(&names);
            o.value("type", names);
        }
        LatticeOp::Remove { graph, curves } => {
            let c = read_graph(graph)?.config;
            let names = component_names(&c.remove_curves(&indices(&c, curves)?));
            o.line(&names);
            o.value("components", names);
        }
        LatticeOp::Blowup {
            graph,
            through,
            label,
        } => {
            let c = read_graph(graph)?.config;
            let mut pts = Vec::new();
            for t in through.split(',') {
                let (l, m) = match t.split_once(':') {
                    Some((l, m)) => (
                        l,
                        m.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad multiplicity {m:?}")))?,
                    ),
                    None => (t, 1),
                };
                pts.push((indices(&c, l)?[0], m));
            }
            let b = c.point_blowup(&pts, label)?;
            o.text.push_str(&b.to_graph_text());
            let selfs: Vec<String> = b.self_int.iter().map(i64::to_string).collect();
            o.value("self_intersections", selfs.join(","));
        }
        LatticeOp::Check(g) => {
            let file = read_graph(g)?;
            let z = file.config.fundamental_cycle()?;
            if file.cycles.is_empty() {
                return Err(Error::Parse("no cycle lines in graph file".into()));
            }
            for (i, stored) in file.cycles.iter().enumerate() {
                o.records.push(Record::new(
                    format!("lattice.cycle.{i}"),
                    stored,
                    &z,
                    Provenance::Derived,
                ));
            }
            o.line(format!("Z = {z}"));
            for r in &o.records.clone() {
                o.line(format!(
                    "{}: {}",
                    r.id,
                    if r.pass { "matches" } else { "differs" }
                ));
            }
        }
    }
    Ok(o)
}

fn serre(g: u32, n: u32, p: u32) -> Result<Outcome> {
    let r = sym_depth_report(SymDepthQuery::new(g, n, p)?)?;
    let mut o = Outcome::default();
    o.text = r.to_string();
    o.value("cohen_macaulay", r.cohen_macaulay);
    o.value(
        "depth",
        r.depth
            .map_or("UNDETERMINED-BY-PAPER".to_string(), |d| d.to_string()),
    );
    let contradictions = r.contradictions();
    o.records.push(Record::new(
        "serre.contradictions",
        0,
        contradictions.len(),
        Provenance::Derived,
    ));
    Ok(o)
}

fn scenario(
    p_rank: u8,
    a_number: Option<u8>,
    q: &Option<String>,
    db: &Option<PathBuf>,
    n: u32,
) -> Result<Outcome> {
    let q = q.as_deref().map(|s| gf16().parse_elem(s)).transpose()?;
    let case = ScenarioCase::new(p_rank, a_number, q)?;
    let report = run_pipeline(&case, &load_db(db)?, n)?;
    let mut o = Outcome::default();
    o.text = report.to_string();
    o.records = report.records;
    Ok(o)
}

fn verify(db: &Option<PathBuf>, criterion: Option<usize>, n: u32) -> Result<Outcome> {
    let mut opts = VerifyOptions::new(load_db(db)?);
    opts.precision = n;
    let criteria = match criterion {
        Some(k) => vec![run_criterion(k, &opts)?],
        None => run_all(&opts)?,
    };
    let mut o = Outcome::default();
    for c in &criteria {
        o.line(format!(
            "criterion {:2} {:<24} {}",
            c.number,
            c.title,
            if c.passes() { "PASS" } else { "FAIL" }
        ));
        for r in c.failures() {
            o.line(format!("    {r}"));
        }
    }
    o.records = sorted_records(&criteria);
    let failed = o.records.iter().filter(|r| !r.pass).count();
    o.line(format!("{} assertions, {failed} failed", o.records.len()));
    Ok(o)
}

fn dispatch(cli: &Cli) -> Result<Outcome> {
    let n = precision(cli.precision)?;
    match &cli.command {
        Command::Quotient(a) => quotient(a, n),
        Command::Blowup(a) => blowup(a, n),
        Command::Tjurina {
            poly,
            vars,
            field,
            dynkin,
            rdp_db,
        } => tjurina(poly, vars, field, dynkin, rdp_db, n),
        Command::Lattice { op } => lattice(op),
        Command::Serre { g, n, p } => serre(*g, *n, *p),
        Command::Scenario {
            p_rank,
            a_number,
            q,
            rdp_db,
        } => scenario(*p_rank, *a_number, q, rdp_db, n),
        Command::VerifyPaper { rdp_db, criterion } => verify(rdp_db, *criterion, n),
    }
}

/// Runs the command line and returns the exit code with stdout and stderr.
pub fn run<I, T>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_PARSE
            } else {
                EXIT_PASS
            };
            let text = e.render().to_string();
            return if e.use_stderr() {
                (code, String::new(), text)
            } else {
                (code, text, String::new())
            };
        }
    };
    match dispatch(&cli) {
        Err(e) => (exit_code(&e), String::new(), format!("error: {e}\n")),
        Ok(o) => {
            let code = if o.passes() { EXIT_PASS } else { EXIT_FAIL };
            let out = match cli.format {
                Format::Human => o.text,
                Format::Records => {
                    let mut s = String::new();
                    for (k, v) in &o.values {
                        let _ = writeln!(s, "value {k}={}", v.replace(' ', "_"));
                    }
                    let mut records = o.records;
                    records.sort();
                    for r in records {
                        let _ = writeln!(s, "{r}");
                    }
                    s
                }
            };
            (code, out, String::new())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(
            run(["charkummer", "quotient", "--a", "x", "--b", "y"]).0,
            EXIT_PASS
        );
        assert_eq!(
            run(["charkummer", "quotient", "--a", "0", "--b", "y"]).0,
            EXIT_DOMAIN
        );
        assert_eq!(
            run(["charkummer", "quotient", "--a", "x+", "--b", "y"]).0,
            EXIT_PARSE
        );
        assert_eq!(run(["charkummer", "bogus"]).0, EXIT_PARSE);
        assert_eq!(
            run(["charkummer", "serre", "--g", "2", "--n", "2", "--p", "4"]).0,
            EXIT_DOMAIN
        );
    }

    #[test]
    fn quotient_output() {
        let (code, out, _) = run(["charkummer", "quotient", "--a", "x", "--b", "y"]);
        assert_eq!(code, 0);
        assert!(
            out.contains("equation: z^2 + x^2*y + x*y^2 + x*y*z"),
            "{out}"
        );
        let (_, out, _) = run(["charkummer", "quotient", "--a", "x^2", "--b", "y^2"]);
        assert!(out.contains("NONNORMAL"));
    }
}
