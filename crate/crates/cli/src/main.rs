use clap::{Args, Parser, Subcommand};
use logk3::brauer::{self, HilbertPlace};
use logk3::charclass::h1_enumerate;
use logk3::classify::{classify_input, ClassifyInput};
use logk3::exact::parse_rational;
use logk3::group::FiniteGroup;
use logk3::logk3::{enumerate_admissible, reduce_to_degree5, LogK3Structure, Rewrite};
use logk3::pell::{density_experiment, growth_probe, surjective_primes, GrowthReport};
use logk3::petersen::petersen_report;
use logk3::points::{curve_decomposition, nondensity_certificate, search_box, MPoint, SurfaceModel};
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{0}")]
    Core(#[from] logk3::Error),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Certification(_) => 3,
            CliError::Core(e) if e.is_certification_failure() => 3,
            CliError::Io(_) => 1,
            _ => 2,
        }
    }
}

fn core<E: Into<logk3::Error>>(e: E) -> CliError {
    CliError::Core(e.into())
}

/// Log K3 surfaces of Picard rank zero: classification, point searches and
/// Brauer-Manin checks.
#[derive(Debug, Parser)]
#[command(name = "logk3", version)]
struct Cli {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print compact JSON.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct StructureArgs {
    /// Path to a structure JSON file.
    #[arg(long, conflicts_with = "json")]
    input: Option<PathBuf>,
    /// Inline structure JSON.
    #[arg(long)]
    json: Option<String>,
    /// Square-free `a` for quadratic classes; overrides the input's `a`.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<i64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reduce, classify and pick a model for a log K3 structure.
    Classify(StructureArgs),
    /// Reduce a structure to degree 5 and print the rewrite trace.
    Reduce(StructureArgs),
    /// Admissible self-intersection sequences of one degree.
    Sequences {
        #[arg(long)]
        degree: i64,
    },
    /// Five-cycles and automorphisms of the Petersen graph.
    Petersen {
        /// Include every five-cycle in the output.
        #[arg(long)]
        list: bool,
    },
    /// Classes in H^1(G, D5) for a finite group G.
    H1 {
        /// Group name such as Z2, Z5, V4, D5, Z2xZ4.
        #[arg(long)]
        group: String,
    },
    /// M-integral point searches.
    Points {
        #[command(subcommand)]
        command: PointsCommand,
    },
    /// Integral points on several curves C_p of (x^2 - ay^2)t = y - 1.
    Density {
        #[arg(long, default_value_t = 2)]
        a: i64,
        #[arg(long, default_value_t = 3)]
        primes: usize,
        #[arg(long, default_value_t = 3)]
        points: usize,
        /// Also count points on the first curve up to 10^k.
        #[arg(long)]
        growth: Option<u32>,
    },
    /// Hilbert symbols and the Brauer-Manin counterexample.
    Brauer {
        #[command(subcommand)]
        command: BrauerCommand,
    },
}

#[derive(Debug, Subcommand)]
enum PointsCommand {
    /// All M-integral solutions in a box.
    Search {
        /// bilinear, normform or generalD7; or one of trivial, counterexample.
        #[arg(long, default_value = "bilinear")]
        family: String,
        /// Coefficient object, e.g. {"a":"1","b":"0","c":"0","d":"-1","e":"1","f":"-1"}.
        #[arg(long)]
        coeffs: Option<String>,
        #[arg(long = "M", default_value_t = 1)]
        m: u64,
        #[arg(long, visible_alias = "box", default_value_t = 100)]
        bound: u64,
    },
    /// Check that every point of the split model lies on the curve family.
    Certify {
        #[arg(long = "M", default_value_t = 1)]
        m: u64,
        #[arg(long, visible_alias = "box", default_value_t = 1000)]
        bound: u64,
    },
}

#[derive(Debug, Subcommand)]
enum BrauerCommand {
    /// The local symbol (a, b)_v.
    Hilbert {
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// A prime or "inf"; omit for every relevant place.
        #[arg(long)]
        place: Option<String>,
    },
    /// Full verdict for ((11x + 5)y + 3)t = 3x + 1.
    Counterexample {
        #[arg(long = "box", default_value_t = 1000)]
        box_bound: u64,
        #[arg(long, visible_alias = "prime-bound", default_value_t = 100)]
        places: u64,
    },
}

fn read_structure(args: &StructureArgs) -> Result<ClassifyInput, CliError> {
    let text = match (&args.input, &args.json) {
        (Some(path), _) => std::fs::read_to_string(path)?,
        (None, Some(json)) => json.clone(),
        (None, None) => return Err(CliError::Input("pass --input <file> or --json <text>".into())),
    };
    let mut input: ClassifyInput = serde_json::from_str(&text).map_err(|e| CliError::Input(e.to_string()))?;
    if args.a.is_some() {
        input.a = args.a;
    }
    Ok(input)
}

#[derive(Serialize)]
struct ReduceOutput {
    input: LogK3Structure,
    reduced: LogK3Structure,
    trace: Vec<Rewrite>,
}

#[derive(Serialize)]
struct SearchOutput {
    model: SurfaceModel,
    equation: String,
    #[serde(rename = "M")]
    m: u64,
    bound: u64,
    count: usize,
    solutions: Vec<MPoint>,
    /// Points on each line of the split-model curve family for this M.
    curves: BTreeMap<String, usize>,
}

#[derive(Serialize)]
struct DensityOutput {
    #[serde(flatten)]
    report: logk3::pell::DensityReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    growth: Option<GrowthReport>,
}

#[derive(Serialize)]
struct HilbertOutput {
    a: String,
    b: String,
    symbols: Vec<(HilbertPlace, i8)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    product: Option<i8>,
}

fn parse_model(family: &str, coeffs: Option<&str>) -> Result<SurfaceModel, CliError> {
    match (family, coeffs) {
        ("trivial", None) => Ok(SurfaceModel::trivial()),
        ("counterexample", None) => Ok(SurfaceModel::counterexample()),
        (_, None) => Err(CliError::Input(format!("family {family} needs --coeffs"))),
        (_, Some(text)) => {
            let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(e.to_string()))?;
            SurfaceModel::from_parts(family, &v).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

fn run(cmd: Command) -> Result<Value, CliError> {
    match cmd {
        Command::Classify(args) => {
            let input = read_structure(&args)?;
            let c = classify_input(&input).map_err(CliError::Core)?;
            Ok(to_json(&c))
        }
        Command::Reduce(args) => {
            let input = read_structure(&args)?;
            let s = input.structure()?;
            let (reduced, trace) = reduce_to_degree5(&s).map_err(core)?;
            Ok(to_json(&ReduceOutput {
                input: s,
                reduced,
                trace,
            }))
        }
        Command::Sequences { degree } => {
            let seqs = enumerate_admissible(degree).map_err(core)?;
            Ok(serde_json::json!({ "degree": degree, "sequences": seqs }))
        }
        Command::Petersen { list } => Ok(to_json(&petersen_report(list))),
        Command::H1 { group } => {
            let g = FiniteGroup::by_name(&group).map_err(core)?;
            Ok(to_json(&h1_enumerate(&g).map_err(core)?))
        }
        Command::Points { command } => match command {
            PointsCommand::Search {
                family,
                coeffs,
                m,
                bound,
            } => {
                let model = parse_model(&family, coeffs.as_deref())?;
                let solutions = search_box(&model, m, bound).map_err(core)?;
                let family = curve_decomposition(m).map_err(core)?;
                let mut curves = BTreeMap::new();
                for p in &solutions {
                    let scaled = p.scaled().expect("search returns M-integral points");
                    for i in family.curves_through(&scaled) {
                        *curves.entry(family.curves[i].to_string()).or_insert(0) += 1;
                    }
                }
                Ok(to_json(&SearchOutput {
                    equation: model.to_string(),
                    model,
                    m,
                    bound,
                    count: solutions.len(),
                    solutions,
                    curves,
                }))
            }
            PointsCommand::Certify { m, bound } => {
                let rep = nondensity_certificate(m, bound).map_err(core)?;
                if !rep.pass {
                    return Err(CliError::Certification(format!("M={m}, B={bound}")));
                }
                Ok(to_json(&rep))
            }
        },
        Command::Density {
            a,
            primes,
            points,
            growth,
        } => {
            if primes == 0 || points == 0 {
                return Err(CliError::Input("--primes and --points must be positive".into()));
            }
            let report = density_experiment(a, primes, points).map_err(core)?;
            if !report.all_verified {
                return Err(CliError::Certification("a generated point failed verification".into()));
            }
            let growth = match growth {
                Some(hi) => {
                    let datum = surjective_primes(a, report.curves[0].p).map_err(core)?;
                    let datum = datum
                        .into_iter()
                        .find(|d| d.p == report.curves[0].p)
                        .expect("the first curve's prime qualifies");
                    Some(growth_probe(a, &datum, 1, hi.max(1)).map_err(core)?)
                }
                None => None,
            };
            Ok(to_json(&DensityOutput { report, growth }))
        }
        Command::Brauer { command } => match command {
            BrauerCommand::Hilbert { a, b, place } => {
                let parse = |s: &str| parse_rational(s).map_err(|e| CliError::Input(format!("{s:?}: {e}")));
                let (alpha, beta) = (parse(&a)?, parse(&b)?);
                let out = match place {
                    Some(v) => {
                        let v: HilbertPlace = v.parse().map_err(|e: brauer::BrauerError| CliError::Input(e.to_string()))?;
                        let s = brauer::hilbert_symbol(&alpha, &beta, v).map_err(core)?;
                        HilbertOutput {
                            a,
                            b,
                            symbols: vec![(v, s)],
                            product: None,
                        }
                    }
                    None => {
                        let (prod, symbols) = brauer::hilbert_product(&alpha, &beta).map_err(core)?;
                        HilbertOutput {
                            a,
                            b,
                            symbols,
                            product: Some(prod),
                        }
                    }
                };
                Ok(to_json(&out))
            }
            BrauerCommand::Counterexample { box_bound, places } => {
                if box_bound == 0 || places < 2 {
                    return Err(CliError::Input("--box must be >= 1 and --places >= 2".into()));
                }
                let q = brauer::QuaternionClass::counterexample();
                let rep = brauer::brauer_manin_checks(&q, box_bound, places, 3).map_err(core)?;
                if !rep.all_pass {
                    return Err(CliError::Certification(rep.verdict));
                }
                Ok(to_json(&rep))
            }
        },
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli.command).and_then(|v| {
        let text = if cli.compact {
            serde_json::to_string(&v)
        } else {
            serde_json::to_string_pretty(&v)
        }
        .expect("values serialize");
        match &cli.out {
            Some(path) => std::fs::write(path, text + "\n")?,
            None => println!("{text}"),
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
