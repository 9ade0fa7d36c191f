use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use knotarc_core::grid::{template_variant, GridDiagram};
use knotarc_core::harness::{ingest_golden, table1, verify_theorem, Status, Table1Report, TheoremReport};
use knotarc_core::jones::jones;
use knotarc_core::kauffman::{kauffman_f, SkeinConfig};
use knotarc_core::montesinos::{build_diagram, classify_equal, mutate_diagram, mutate_spec, Axis, MontesinosSpec};
use knotarc_core::Diagram;

#[derive(Parser)]
#[command(name = "knotarc", version, about = "Knot polynomials, Montesinos mutants and arc index certificates")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Worker threads for verification runs.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest diagram the Kauffman engine accepts, in crossings.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a polynomial invariant.
    Poly {
        #[arg(value_enum)]
        invariant: Invariant,
        #[command(flatten)]
        input: Input,
    },
    #[command(subcommand)]
    Montesinos(MontesinosCmd),
    #[command(subcommand)]
    Grid(GridCmd),
    /// Check every claim about one mutant family for n = 0..=n-max.
    Verify {
        #[arg(long)]
        theorem: u8,
        #[arg(long, default_value_t = 4)]
        n_max: u32,
        #[arg(long)]
        golden: PathBuf,
    },
    /// Arc index of the n = 0 members from both bounds.
    Table1 {
        #[arg(long)]
        golden: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Invariant {
    Kauffman,
    Jones,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Planar diagram code, e.g. "X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]".
    #[arg(long)]
    pd: Option<String>,
    /// Montesinos link, e.g. "M(2/3,-2/3,2/3,1/2)".
    #[arg(long)]
    montesinos: Option<String>,
    /// Grid diagram, e.g. "grid 5 / X: 2,3,4,5,1 / O: 4,5,1,2,3".
    #[arg(long)]
    grid: Option<String>,
}

impl Input {
    fn diagram(&self) -> Result<Diagram> {
        if let Some(pd) = &self.pd {
            return Diagram::parse_pd(pd).context("invalid PD code");
        }
        if let Some(m) = &self.montesinos {
            return Ok(build_diagram(&parse_spec(m)?)?);
        }
        if let Some(g) = &self.grid {
            let g: GridDiagram = g.parse().context("invalid grid")?;
            return Ok(g.to_diagram()?);
        }
        bail!("one of --pd, --montesinos, --grid is required")
    }
}

#[derive(Subcommand)]
enum MontesinosCmd {
    /// Print a PD code of the standard diagram.
    Build { spec: String },
    /// Decide whether two Montesinos knots are isotopic.
    Classify { first: String, second: String },
    /// Mutate by swapping adjacent tangles, or by turning a disk of a PD diagram.
    Mutate {
        spec: Option<String>,
        /// Swap tangles i and i+1.
        #[arg(long, conflicts_with_all = ["pd", "disk", "axis"])]
        swap: Option<usize>,
        #[arg(long, requires_all = ["disk", "axis"])]
        pd: Option<String>,
        /// Crossings inside the tangle disk, comma separated.
        #[arg(long, value_delimiter = ',')]
        disk: Option<Vec<usize>>,
        /// ew, ns or vertical.
        #[arg(long)]
        axis: Option<String>,
    },
}

#[derive(Subcommand)]
enum GridCmd {
    /// Arc presentation of a family member.
    Template {
        #[arg(long)]
        theorem: u8,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        variant: usize,
    },
}

fn parse_spec(s: &str) -> Result<MontesinosSpec> {
    s.parse().map_err(|e| anyhow!("invalid Montesinos spec {s:?}: {e}"))
}

/// Normal output, plus whether the run verified what it checked.
struct Outcome {
    text: String,
    json: serde_json::Value,
    ok: bool,
}

impl Outcome {
    fn ok(text: String, json: serde_json::Value) -> Self {
        Outcome { text, json, ok: true }
    }
}

fn run(cli: &Cli) -> Result<Outcome> {
    let mut cfg = SkeinConfig::default();
    if let Some(b) = cli.budget {
        cfg.max_crossings = b;
    }
    match &cli.command {
        Command::Poly { invariant, input } => {
            let d = input.diagram()?;
            let (name, p) = match invariant {
                Invariant::Kauffman => ("kauffman", kauffman_f(&d, &cfg)?.to_string()),
                Invariant::Jones => ("jones", jones(&d)?.to_string()),
            };
            Ok(Outcome::ok(p.clone(), json!({ "invariant": name, "crossings": d.crossing_count(), "polynomial": p })))
        }
        Command::Montesinos(MontesinosCmd::Build { spec }) => {
            let s = parse_spec(spec)?;
            let d = build_diagram(&s)?;
            let pd = d.to_pd();
            Ok(Outcome::ok(pd.clone(), json!({ "spec": s.to_string(), "crossings": d.crossing_count(), "pd": pd })))
        }
        Command::Montesinos(MontesinosCmd::Classify { first, second }) => {
            let (a, b) = (parse_spec(first)?, parse_spec(second)?);
            let verdict = if classify_equal(&a, &b)? { "equal" } else { "distinct" };
            Ok(Outcome::ok(
                verdict.into(),
                json!({ "first": a.to_string(), "second": b.to_string(), "verdict": verdict }),
            ))
        }
        Command::Montesinos(MontesinosCmd::Mutate { spec, swap, pd, disk, axis }) => match (spec, swap, pd) {
            (Some(spec), Some(i), None) => {
                let m = mutate_spec(&parse_spec(spec)?, *i, i + 1)?;
                Ok(Outcome::ok(m.to_string(), json!({ "mutant": m.to_string() })))
            }
            (None, None, Some(pd)) => {
                let d = Diagram::parse_pd(pd).context("invalid PD code")?;
                let axis: Axis = axis.as_deref().unwrap_or_default().parse()?;
                let m = mutate_diagram(&d, disk.as_deref().unwrap_or_default(), axis)?;
                let out = m.to_pd();
                Ok(Outcome::ok(out.clone(), json!({ "pd": out })))
            }
            _ => bail!("give either SPEC --swap I or --pd CODE --disk LIST --axis AXIS"),
        },
        Command::Grid(GridCmd::Template { theorem, n, variant }) => {
            let g = template_variant(*theorem, *variant, *n)?;
            Ok(Outcome::ok(g.to_string(), serde_json::to_value(&g)?))
        }
        Command::Verify { theorem, n_max, golden } => {
            let corpus = ingest_golden(golden)?;
            let r = verify_theorem(*theorem, *n_max, &corpus, &cfg)?;
            Ok(Outcome { text: render_report(&r), json: serde_json::to_value(&r)?, ok: r.status == Status::Pass })
        }
        Command::Table1 { golden } => {
            // The table does not read the corpus, but a broken corpus is still
            // reported as an input error.
            ingest_golden(golden)?;
            let t = table1(&cfg)?;
            Ok(Outcome { text: render_table(&t), json: serde_json::to_value(&t)?, ok: t.status == Status::Pass })
        }
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

fn render_report(r: &TheoremReport) -> String {
    let mut out = format!("family {}: {:?}\n", r.theorem, r.status);
    for rec in &r.records {
        out += &format!(
            "  n={} c={} distinct={} F-equal={} V-equal={} arc={} jones-breadth={} obstruction={}",
            rec.n,
            rec.crossing_number,
            mark(rec.distinct),
            mark(rec.f_equal),
            mark(rec.v_equal),
            mark(rec.arc_index_certified),
            mark(rec.jones_breadth_match),
            mark(rec.not_semi_alternating),
        );
        if let Some(b) = rec.bracket_match {
            out += &format!(" bracket={}", mark(b));
        }
        if let (Some(l), Some(j)) = (&rec.lambda_recurrence, &rec.jones_recurrence) {
            out += &format!(" recurrences={}", mark(l.holds() && j.holds()));
        }
        if let Some(g) = &rec.golden {
            out += &format!(" reference={}", mark(g.holds()));
        }
        out.push('\n');
        for f in &rec.failures {
            out += &format!("    {f}\n");
        }
    }
    for n in &r.notes {
        out += &format!("  note: {n}\n");
    }
    out.trim_end().to_string()
}

fn render_table(t: &Table1Report) -> String {
    let mut out = String::new();
    for r in &t.rows {
        out += &format!(
            "{} {:<26} {:<8} {:>2}  lower={} upper={} {}\n",
            r.theorem,
            r.spec,
            r.name,
            r.arc_index,
            r.arc_lower,
            r.arc_upper,
            mark(r.pass)
        );
    }
    out += &format!("{:?}", t.status);
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(o) => {
            let body = match cli.format {
                Format::Text => o.text,
                Format::Json => serde_json::to_string_pretty(&o.json).expect("serializable"),
            };
            // A closed pipe downstream is not an error of ours.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
