use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use khl_cli::golden;
use khl_cli::input::{ideal_from_spec, parse_list, parse_monomial_order, parse_order, read_matrix};
use khl_cli::repro::{run_gr36, run_pipeline, run_table1, run_table2, Limits, GR36_FIXTURES};
use khl_core::groebner::{buchberger_with, in_lineality_with, initial_ideal_m, initial_ideal_w, MonomialOrder};
use khl_core::ideals::subsets;
use khl_core::orders::WeightingMatrix;
use khl_core::plabic::{PlabicData, FIG1};
use khl_core::polytope::newton_okounkov_polytope;
use khl_core::string_val::{string_hat_matrix, string_matrix, string_valuation, string_weight_vector, ReducedWord};
use khl_core::toric::{khovanskii_check, trop_membership};
use khl_core::{Ideal, KhlError, Result};

#[derive(Parser)]
#[command(name = "khl", version, about = "Khovanskii-basis checks via initial ideals of weighting matrices")]
struct Cli {
    /// Wall-clock limit in seconds for each Gröbner computation (overrides KHL_DEADLINE_SECS).
    #[arg(long, global = true)]
    deadline_secs: Option<f64>,
    /// Worker threads for per-row jobs.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArgs {
    /// `string:WORD`, `plabic:NAME|PATH`, or a text file of integer rows.
    #[arg(long)]
    matrix: String,
    /// Prepend one degree row per block of the ideal (file matrices only).
    #[arg(long)]
    hat: bool,
    /// Order on values for file matrices: lex or sum-revlex.
    #[arg(long, default_value = "lex")]
    order: String,
}

#[derive(Subcommand)]
enum Command {
    /// Print the generators of a Plücker ideal (gr:K,N or flag:N).
    Ideal { ideal: String },
    /// Reduced Gröbner basis.
    Gb {
        ideal: String,
        /// Weight vector refined by degree reverse lex.
        #[arg(long, conflicts_with = "order")]
        weight: Option<String>,
        /// Monomial order without weights: degrevlex or lex.
        #[arg(long, default_value = "degrevlex")]
        order: String,
    },
    /// Initial ideal for a weight vector or a weighting matrix.
    InitIdeal {
        ideal: String,
        /// Comma-separated weight vector.
        #[arg(long, conflicts_with = "matrix")]
        weight: Option<String>,
        /// `string:WORD`, `plabic:NAME|PATH`, or a text file of integer rows.
        #[arg(long)]
        matrix: Option<String>,
        /// Prepend one degree row per block of the ideal (file matrices only).
        #[arg(long)]
        hat: bool,
        /// Order on values for file matrices: lex or sum-revlex.
        #[arg(long, default_value = "lex")]
        order: String,
    },
    /// Whether init_w(I) is monomial-free.
    TropCheck {
        ideal: String,
        #[arg(long)]
        weight: String,
        /// Exit with status 1 when the verdict differs.
        #[arg(long)]
        expect: Option<bool>,
    },
    /// Whether init_w(I) = I.
    LinealityCheck {
        ideal: String,
        #[arg(long)]
        weight: String,
        #[arg(long)]
        expect: Option<bool>,
    },
    /// Toric verdict for (I, M̂), optionally with the Newton–Okounkov polytope.
    KhovanskiiCheck {
        ideal: String,
        #[command(flatten)]
        matrix: MatrixArgs,
        #[arg(long)]
        polytope: bool,
        #[arg(long)]
        expect_toric: Option<bool>,
    },
    /// String valuations, matrix and weight vector of a reduced word.
    StringVal {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 4)]
        n: usize,
        /// Single subset such as 13; default prints every Plücker variable.
        #[arg(long)]
        subset: Option<String>,
    },
    /// Plabic graph valuations.
    Plabic {
        #[arg(value_enum)]
        what: PlabicWhat,
        /// fig1, gr36-g1, gr36-g2, gr36-toric, or a fixture path.
        #[arg(long, default_value = "fig1")]
        fixture: String,
    },
    /// Polytopes.
    Polytope {
        #[command(subcommand)]
        what: PolytopeCmd,
    },
    /// Reproduce the reference tables.
    Repro {
        #[command(subcommand)]
        what: ReproCmd,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PlabicWhat {
    /// Valuation of every Plücker coordinate.
    Val,
    /// Plabic degrees (the weight vector).
    Weights,
    /// Face rows with F_∅ and the degree.
    Table,
}

#[derive(Subcommand)]
enum PolytopeCmd {
    /// Newton–Okounkov polytope of a weighting matrix with a toric initial ideal.
    NoBody {
        #[arg(long)]
        ideal: String,
        #[command(flatten)]
        matrix: MatrixArgs,
        /// Block sizes; defaults to the blocks of the ideal.
        #[arg(long)]
        blocks: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Column {
    All,
    Faces,
    Deg,
    E,
}

#[derive(Subcommand)]
enum ReproCmd {
    /// String weight vectors, Minkowski property and primeness on Flag_4
    Table1 {
        /// Restrict to these words (repeatable)
        #[arg(long)]
        word: Vec<String>,
        /// Replacement reference data (JSON).
        #[arg(long)]
        golden: Option<String>,
    },
    /// Face rows, plabic degrees and e-values on the Gr(2,5) fixture
    Table2 {
        /// Which columns to compare
        #[arg(long, value_enum, default_value = "all")]
        column: Column,
        /// Replacement reference data (JSON).
        #[arg(long)]
        golden: Option<String>,
        /// Fixture name or .plabic path
        #[arg(long)]
        fixture: Option<String>,
    },
    /// Weight-vector verdicts on Gr(3,6) and the shipped Gr(3,6) fixtures
    Gr36 {
        /// Replacement example data (JSON).
        #[arg(long)]
        golden: Option<String>,
    },
}

fn read(path: &str) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| KhlError::Invalid(format!("{}: {}", path, e)))
}

fn fixture_text(name: &str) -> Result<String> {
    if name == "fig1" {
        return Ok(FIG1.to_string());
    }
    if let Some((_, t, _)) = GR36_FIXTURES.iter().find(|(n, _, _)| *n == name) {
        return Ok(t.to_string());
    }
    read(name)
}

fn word_for(s: &str) -> Result<ReducedWord> {
    let len = s.trim().len();
    let n = (2..=8).find(|n| n * (n - 1) / 2 == len).ok_or_else(|| KhlError::Parse(format!("{} is not a word for w0", s)))?;
    ReducedWord::parse(n, s)
}

fn matrix_from(args: &MatrixArgs, ideal: &Ideal) -> Result<WeightingMatrix> {
    if let Some(w) = args.matrix.strip_prefix("string:") {
        return string_hat_matrix(&word_for(w)?);
    }
    if let Some(f) = args.matrix.strip_prefix("plabic:") {
        return PlabicData::from_text(&fixture_text(f)?)?.hat_matrix();
    }
    let m = read_matrix(&args.matrix, parse_order(&args.order)?)?;
    if args.hat {
        m.hat(ideal.universe().block_sizes())
    } else {
        Ok(m)
    }
}

fn print(v: &serde_json::Value) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn expect(verdict: bool, expected: Option<bool>) -> bool {
    expected.is_none_or(|e| e == verdict)
}

fn to_json<T: serde::Serialize>(t: &T) -> serde_json::Value {
    serde_json::to_value(t).expect("serializable")
}

fn run(cli: Cli) -> Result<bool> {
    let limits = Limits { deadline_secs: cli.deadline_secs, threads: cli.threads };
    match cli.command {
        Command::Ideal { ideal } => {
            let i = ideal_from_spec(&ideal)?;
            print(&json!({
                "variables": i.universe().names(),
                "blocks": i.universe().block_sizes(),
                "generators": i.generators().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            }));
            Ok(true)
        }
        Command::Gb { ideal, weight, order } => {
            let i = ideal_from_spec(&ideal)?;
            let order = match weight {
                Some(w) => MonomialOrder::for_weight(&parse_list::<i64>(&w)?),
                None => parse_monomial_order(&order)?,
            };
            let gb = buchberger_with(&i, &order, &limits.deadline())?;
            print(&gb.to_json());
            Ok(true)
        }
        Command::InitIdeal { ideal, weight, matrix, hat, order } => {
            let i = ideal_from_spec(&ideal)?;
            let init = match (weight, matrix) {
                (Some(w), _) => initial_ideal_w(&i, &parse_list::<i64>(&w)?, &limits.deadline())?,
                (None, Some(m)) => {
                    let m = matrix_from(&MatrixArgs { matrix: m, hat, order }, &i)?;
                    initial_ideal_m(&i, &m, &limits.deadline())?
                }
                (None, None) => return Err(KhlError::Invalid("give --weight or --matrix".into())),
            };
            print(&init.basis.to_json());
            Ok(true)
        }
        Command::TropCheck { ideal, weight, expect: e } => {
            let i = ideal_from_spec(&ideal)?;
            let v = trop_membership(&i, &parse_list::<i64>(&weight)?, &limits.deadline())?;
            print(&json!({ "in_trop": v }));
            Ok(expect(v, e))
        }
        Command::LinealityCheck { ideal, weight, expect: e } => {
            let i = ideal_from_spec(&ideal)?;
            let v = in_lineality_with(&i, &parse_list::<i64>(&weight)?, &limits.deadline())?;
            print(&json!({ "in_lineality": v }));
            Ok(expect(v, e))
        }
        Command::KhovanskiiCheck { ideal, matrix, polytope, expect_toric } => {
            let i = ideal_from_spec(&ideal)?;
            let m = matrix_from(&matrix, &i)?;
            let report = run_pipeline(&i, &m, polytope, &limits)?;
            print(&to_json(&report));
            Ok(expect(report.verdict.is_toric, expect_toric))
        }
        Command::StringVal { word, n, subset } => {
            let w = ReducedWord::parse(n, &word)?;
            match subset {
                Some(s) => {
                    let j: Vec<usize> = s.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect::<Option<_>>().ok_or_else(|| KhlError::Parse(format!("bad subset {}", s)))?;
                    print(&json!({ "word": word, "subset": j, "valuation": string_valuation(&w, &j)? }));
                }
                None => {
                    let m = string_matrix(&w)?;
                    let sets: Vec<String> = (1..n).flat_map(|k| subsets(n, k)).map(|j| j.iter().map(|x| x.to_string()).collect()).collect();
                    print(&json!({
                        "word": word,
                        "subsets": sets,
                        "columns": m.columns(),
                        "weight_vector": string_weight_vector(&w)?,
                    }));
                }
            }
            Ok(true)
        }
        Command::Plabic { what, fixture } => {
            let d = PlabicData::from_text(&fixture_text(&fixture)?)?;
            let sets = d.subsets();
            let names: Vec<String> = sets.iter().map(|j| j.iter().map(|x| x.to_string()).collect()).collect();
            match what {
                PlabicWhat::Val => {
                    let vals = sets.iter().map(|j| d.valuation(j)).collect::<Result<Vec<_>>>()?;
                    print(&json!({ "coordinates": d.labels.coordinate_names(false), "subsets": names, "valuations": vals }));
                }
                PlabicWhat::Weights => print(&json!({ "subsets": names, "weight_vector": d.weight_vector()? })),
                PlabicWhat::Table => {
                    let rows = sets.iter().map(|j| d.minimal_flow(j).map(|(_, w, deg)| json!({"faces": w, "deg": deg}))).collect::<Result<Vec<_>>>()?;
                    print(&json!({ "coordinates": d.labels.coordinate_names(true), "subsets": names, "rows": rows }));
                }
            }
            Ok(true)
        }
        Command::Polytope { what: PolytopeCmd::NoBody { ideal, matrix, blocks } } => {
            let i = ideal_from_spec(&ideal)?;
            let m = matrix_from(&matrix, &i)?;
            let blocks = match blocks {
                Some(b) => parse_list::<usize>(&b)?,
                None => i.universe().block_sizes().to_vec(),
            };
            let verdict = khovanskii_check(&i, &m, &limits.deadline())?;
            if !verdict.is_toric {
                print(&json!({ "toric": false, "certificate": to_json(&verdict.certificate) }));
                return Ok(false);
            }
            let p = newton_okounkov_polytope(&m, &blocks, Some(&verdict))?;
            let mut out = p.to_json();
            out["lattice_points"] = json!(p.lattice_points().len());
            out["dim"] = json!(p.dim());
            print(&out);
            Ok(true)
        }
        Command::Repro { what } => match what {
            ReproCmd::Table1 { word, golden: g } => {
                let text = g.as_deref().map(read).transpose()?;
                let gold = golden::table1(text.as_deref())?;
                let rep = run_table1(&gold, &word, &limits)?;
                for r in &rep.rows {
                    eprintln!("{} {} {}", if r.matches() { "match   " } else { "MISMATCH" }, r.class, r.word);
                }
                eprintln!("{}/{} rows match", rep.matched, rep.rows.len());
                print(&to_json(&rep));
                Ok(rep.all_match())
            }
            ReproCmd::Table2 { column, golden: g, fixture } => {
                let text = g.as_deref().map(read).transpose()?;
                let gold = golden::table2(text.as_deref())?;
                let fx = fixture_text(fixture.as_deref().unwrap_or("fig1"))?;
                let rep = run_table2(&gold, &fx)?;
                let ok = match column {
                    Column::All => {
                        print(&to_json(&rep));
                        rep.all_match()
                    }
                    Column::Faces => {
                        print(&json!({ "columns": rep.columns, "faces": rep.rows.iter().map(|r| &r.faces).collect::<Vec<_>>() }));
                        rep.rows.iter().all(|r| r.faces_match())
                    }
                    Column::Deg => {
                        print(&json!({ "deg": rep.degrees() }));
                        rep.rows.iter().all(|r| r.deg == r.expected_deg)
                    }
                    Column::E => {
                        print(&json!({ "e": rep.e_column() }));
                        rep.rows.iter().all(|r| r.e == r.expected_e)
                    }
                };
                eprintln!("{}/{} rows match", rep.matched, rep.rows.len());
                Ok(ok)
            }
            ReproCmd::Gr36 { golden: g } => {
                let text = g.as_deref().map(read).transpose()?;
                let ex = golden::examples(text.as_deref())?;
                let rep = run_gr36(&ex, &limits)?;
                print(&to_json(&rep));
                Ok(rep.all_match())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(KhlError::Deadline) => {
            eprintln!("error: deadline exceeded");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
