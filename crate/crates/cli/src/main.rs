//! `nullcone`: classify nilpotent 3x3 matrix pairs, compare orbits, and check
//! the embedded tables and diagrams.

mod doc;

use std::collections::HashMap;
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use nullcone::classify::{classify_pair, conjugation_witness};
use nullcone::expr::parse_ncmatrix;
use nullcone::free_algebra::kron_rank;
use nullcone::group::{
    classify_g, classify_gl32, deg_le_g, deg_le_gl32, g_hasse, gl32_hasse, hesselink_stratum, stratum_hasse,
};
use nullcone::hom::{deg2_compare, hom_dim, orbit_dim, DEFAULT_SEED};
use nullcone::label::representative;
use nullcone::order::{deg_compare_m, deg_compare_pairs, family_hasse, find_rank_witness};
use nullcone::verify::{verify_paper, DEFAULT_GRID};
use nullcone::{Error, Field, Matrix, MatrixTuple, OrbitLabel};

use doc::TupleDocument;

#[derive(Parser)]
#[command(
    name = "nullcone",
    version,
    about = "Orbits of nilpotent 3x3 matrix pairs under simultaneous conjugation"
)]
struct Cli {
    /// Seed for randomized searches; the answers do not depend on it.
    #[arg(long, global = true, env = "NULLCONE_SEED")]
    seed: Option<u64>,
    /// Work over GF(p) instead of the rationals for labels and inline tuples.
    #[arg(long, global = true)]
    prime: Option<u64>,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

/// A tuple is given as an inline list of matrices separated by `;`, an orbit
/// label such as `B[inf,1/4]`, or a path to a JSON document.
#[derive(Subcommand)]
enum Command {
    /// Name the orbit of a nilpotent 3x3 pair.
    Classify {
        tuple: String,
        /// Also print g with g·A·g⁻¹ equal to the representative.
        #[arg(long)]
        witness: bool,
    },
    /// Decide A ≤ B in the degeneration or hom order.
    Compare {
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t = Order::Deg)]
        order: Order,
        #[arg(long, value_enum, default_value_t = Group::Gl3)]
        group: Group,
    },
    /// Dimension of the space of intertwiners from A to B.
    Homdim { a: String, b: String },
    /// Rank of φ(A) for a matrix φ over the free algebra, or of the pencil
    /// T0⊗I + Σ Tk⊗Ak.
    Kronrank {
        tuple: String,
        #[arg(long, conflicts_with = "pencil")]
        phi: Option<String>,
        #[arg(long, num_args = 1..)]
        pencil: Vec<String>,
    },
    /// Check every embedded table row, curve and diagram on a parameter grid.
    VerifyPaper {
        /// Comma-separated integers.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        grid: Option<Vec<i64>>,
    },
    /// Print a Hasse diagram.
    ExportHasse {
        #[arg(long, value_enum, default_value_t = Diagram::Gl3)]
        diagram: Diagram,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Decide A ≤deg B for tuples of 2x2 matrices.
    Deg2 { a: String, b: String },
    /// Print the representative of a label as a JSON document.
    Rep { label: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum Order {
    Deg,
    Hom,
}

#[derive(Clone, Copy, ValueEnum)]
enum Group {
    Gl3,
    Gl3h,
    Gl32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Diagram {
    Gl3,
    Gl3h,
    Gl32,
    Strata,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
}

enum Failure {
    Verification,
    Domain(String),
    Parse(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Parse { .. } | Error::InvalidLabel(_) | Error::UnknownParameter(_) | Error::InvalidPrime(_) => {
                Failure::Parse(e.to_string())
            }
            Error::NotNilpotent => Failure::Domain("not in nullcone".into()),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    seed: u64,
    field: Field,
    json: bool,
}

enum Input {
    Label(OrbitLabel),
    Tuple(MatrixTuple),
}

impl Ctx {
    fn input(&self, text: &str) -> Result<Input, Failure> {
        let t = text.trim();
        if t.starts_with('[') {
            let tuple: MatrixTuple = t.parse().map_err(|e: Error| Failure::Parse(e.to_string()))?;
            return Ok(Input::Tuple(tuple.to_field(self.field)?));
        }
        match t.parse::<OrbitLabel>() {
            Ok(label) => {
                label.validate()?;
                Ok(Input::Label(label.to_field(self.field)?))
            }
            Err(e) if !Path::new(t).is_file() => Err(e.into()),
            Err(_) => {
                let raw = std::fs::read_to_string(t).map_err(|e| Failure::Parse(format!("{t}: {e}")))?;
                let doc: TupleDocument = serde_json::from_str(&raw).map_err(|e| Failure::Parse(format!("{t}: {e}")))?;
                doc.to_tuple().map(Input::Tuple).map_err(Failure::Parse)
            }
        }
    }

    fn tuple(&self, text: &str) -> Result<MatrixTuple, Failure> {
        Ok(match self.input(text)? {
            Input::Tuple(t) => t,
            Input::Label(l) => representative(&l, self.field)?,
        })
    }

    fn label(&self, text: &str) -> Result<OrbitLabel, Failure> {
        Ok(match self.input(text)? {
            Input::Label(l) => l,
            Input::Tuple(t) => classify_pair(&t)?,
        })
    }

    fn emit(&self, text: String, value: serde_json::Value) {
        if self.json {
            println!("{}", serde_json::to_string_pretty(&value).expect("json"));
        } else {
            println!("{text}");
        }
    }
}

fn classify(ctx: &Ctx, tuple: &str, witness: bool) -> Outcome {
    let a = ctx.tuple(tuple)?;
    let label = classify_pair(&a)?;
    let dim = orbit_dim(&a)?;
    let stratum = hesselink_stratum(&label)?;
    let g = classify_g(&label)?;
    let gl32 = classify_gl32(&label)?;
    let beta: Vec<String> = stratum.beta().iter().map(ToString::to_string).collect();
    let mut text = format!(
        "{label}\norbit dimension: {dim}\nstratum: {stratum} ({})\nG-orbit: {g}\nGL3xGL2-orbit: {gl32}",
        beta.join(", ")
    );
    let mut value = json!({
        "label": label.to_string(),
        "orbit_dim": dim,
        "stratum": stratum,
        "beta": beta,
        "g_orbit": g,
        "gl32_orbit": gl32,
    });
    if witness {
        let (_, g) = conjugation_witness(&a, ctx.seed)?;
        text.push_str(&format!("\nwitness: {g}"));
        value["witness"] = json!(g.to_string());
    }
    ctx.emit(text, value);
    Ok(())
}

fn compare(ctx: &Ctx, a: &str, b: &str, order: Order, group: Group) -> Outcome {
    let (ia, ib) = (ctx.input(a)?, ctx.input(b)?);
    let mut value = json!({});
    let result = match (order, group) {
        (Order::Deg, Group::Gl3) => match (&ia, &ib) {
            (Input::Tuple(x), Input::Tuple(y)) if x.m() != 2 || y.m() != 2 => deg_compare_m(x, y)?,
            (Input::Tuple(x), Input::Tuple(y)) => deg_compare_pairs(x, y)?,
            _ => nullcone::order::deg_le_labels(&ctx.label(a)?, &ctx.label(b)?)?,
        },
        (Order::Deg, Group::Gl3h) => deg_le_g(classify_g(&ctx.label(a)?)?, classify_g(&ctx.label(b)?)?),
        (Order::Deg, Group::Gl32) => deg_le_gl32(classify_gl32(&ctx.label(a)?)?, classify_gl32(&ctx.label(b)?)?),
        (Order::Hom, Group::Gl3) => {
            let (la, lb) = (ctx.label(a)?, ctx.label(b)?);
            match find_rank_witness(&la, &lb, ctx.field)? {
                Some(w) => {
                    value["witness"] = json!({
                        "phi": w.phi.to_string(),
                        "rank_a": w.rank_source,
                        "rank_b": w.rank_target,
                    });
                    false
                }
                None => true,
            }
        }
        (Order::Hom, _) => return Err(Failure::Domain("the hom order is defined for GL3-orbits only".into())),
    };
    value["result"] = json!(result);
    let mut text = result.to_string();
    if let Some(w) = value.get("witness") {
        text.push_str(&format!(
            "\nwitness: phi = {}, rk phi(A) = {} < rk phi(B) = {}",
            w["phi"].as_str().unwrap_or_default(),
            w["rank_a"],
            w["rank_b"]
        ));
    }
    ctx.emit(text, value);
    Ok(())
}

fn kronrank(ctx: &Ctx, tuple: &str, phi: Option<&str>, pencil: &[String]) -> Outcome {
    let a = ctx.tuple(tuple)?;
    let rank = match phi {
        Some(text) => {
            let phi = parse_ncmatrix(text, &HashMap::new())?;
            phi.rank_at(&a)?
        }
        None => {
            let mats = pencil
                .iter()
                .map(|m| m.parse::<Matrix>()?.to_field(ctx.field))
                .collect::<Result<Vec<_>, Error>>()?;
            kron_rank(&a, &mats)?
        }
    };
    ctx.emit(rank.to_string(), json!({ "rank": rank }));
    Ok(())
}

fn verify(ctx: &Ctx, grid: Option<Vec<i64>>) -> Outcome {
    let grid = grid.unwrap_or_else(|| DEFAULT_GRID.to_vec());
    let report = verify_paper(&grid)?;
    if ctx.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("json"));
    } else {
        for c in &report.checks {
            let status = if c.pass() { "PASS" } else { "FAIL" };
            println!("{status} {} ({}/{})", c.name, c.passed, c.total);
            for f in &c.failures {
                println!("    {f}");
            }
        }
    }
    if report.pass() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn export(diagram: Diagram, format: Format) -> Outcome {
    let hasse = match diagram {
        Diagram::Gl3 => family_hasse(),
        Diagram::Gl3h => g_hasse(),
        Diagram::Gl32 => gl32_hasse(),
        Diagram::Strata => stratum_hasse(),
    };
    match format {
        Format::Dot => print!("{}", hasse.to_dot()),
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let field = match cli.prime {
        None => Field::Rational,
        Some(p) => Field::prime(p)?,
    };
    let ctx = Ctx {
        seed: cli.seed.unwrap_or(DEFAULT_SEED),
        field,
        json: cli.json,
    };
    match cli.command {
        Command::Classify { tuple, witness } => classify(&ctx, &tuple, witness),
        Command::Compare { a, b, order, group } => compare(&ctx, &a, &b, order, group),
        Command::Homdim { a, b } => {
            let d = hom_dim(&ctx.tuple(&a)?, &ctx.tuple(&b)?)?;
            ctx.emit(d.to_string(), json!({ "hom_dim": d }));
            Ok(())
        }
        Command::Kronrank { tuple, phi, pencil } => kronrank(&ctx, &tuple, phi.as_deref(), &pencil),
        Command::VerifyPaper { grid } => verify(&ctx, grid),
        Command::ExportHasse { diagram, format } => export(diagram, format),
        Command::Deg2 { a, b } => {
            let r = deg2_compare(&ctx.tuple(&a)?, &ctx.tuple(&b)?, ctx.seed)?;
            ctx.emit(r.to_string(), json!({ "result": r }));
            Ok(())
        }
        Command::Rep { label } => {
            let l: OrbitLabel = label.parse()?;
            let doc = TupleDocument::from_tuple(&representative(&l, ctx.field)?);
            println!("{}", serde_json::to_string_pretty(&doc).expect("json"));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Parse(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
