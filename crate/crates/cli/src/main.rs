use std::fs;
use std::io::{self, Read};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use isotori::analytic::dual;
use isotori::congruence::{bruteforce_congruent, symplectic_divisors, AntisymmetricForm};
use isotori::equivalence::{classify, mirror};
use isotori::exactint::{lcd_scale, parse_rational, Rational};
use isotori::strictify::{
    cayley_graph, random_assignment, right_action_law_holds, spanning_tree, strictify, unit_characters,
    verify_compatibility, CoefficientGroup, CoherentActionData, FiniteGroup,
};
use isotori::symptorus::{omega, reduce_general_quotient};
use isotori::wire::{
    coefficient_text, parse_form, AnalyticTorusJson, DivisorsJson, GroupJson, RationalText, ReductionJson,
    ReportJson, TorusJson,
};
use isotori::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_INEQUIVALENT: u8 = 1;
const EXIT_ERROR: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "isotori", version, about = "Classify special isogenous tori and strictify finite group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two tori on the symplectic and the analytic side.
    Classify {
        lhs: String,
        rhs: String,
        /// Include the unimodular congruence witness.
        #[arg(long)]
        witness: bool,
        /// Cross-check with exhaustive search (dimension 4 or less).
        #[arg(long)]
        oracle: bool,
    },
    /// Mirror analytic torus of a symplectic torus.
    Mirror { torus: String },
    /// Dual lattice of an analytic torus.
    Dual { torus: String },
    /// Reduce a general quotient to a special isogenous torus.
    Reduce {
        /// Comma-separated positive rationals.
        #[arg(long, value_delimiter = ',', required = true)]
        areas: Vec<String>,
        /// Comma-separated positive integers with gcd 1.
        #[arg(long = "l-vector", value_delimiter = ',', required = true)]
        l_vector: Vec<u64>,
    },
    /// Strictify a random coherent action.
    Strictify {
        /// Preset name: Z<n>, S3, D4, Z2xZ2.
        #[arg(long, conflicts_with = "group_file", required_unless_present = "group_file")]
        group: Option<String>,
        /// Group table as JSON.
        #[arg(long)]
        group_file: Option<String>,
        /// Qstar or Z<m>.
        #[arg(long, default_value = "Qstar")]
        coeff: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Let the group act through its first nontrivial character.
        #[arg(long)]
        twist: bool,
    },
    /// Symplectic elementary divisors of an integer antisymmetric form.
    Divisors { form: String },
}

enum Failure {
    Error(Error),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TheoremViolation(v) => Failure::Violation(v.to_string()),
            other => Failure::Error(other),
        }
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))
    }
}

fn load<T: DeserializeOwned>(path: &str) -> Result<T, Error> {
    serde_json::from_str(&read_input(path)?).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

fn emit<T: Serialize>(value: &T) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Classify { lhs, rhs, witness, oracle } => {
            if lhs == "-" && rhs == "-" {
                return Err(Error::Parse("only one input may be read from stdin".into()).into());
            }
            let t1 = load::<TorusJson>(&lhs)?.to_torus()?;
            let t2 = load::<TorusJson>(&rhs)?.to_torus()?;
            let report = classify(&t1, &t2)?;
            let mut out = ReportJson::from(&report);
            if !witness {
                out.witness = None;
            }
            let mut value = serde_json::to_value(&out).expect("serializable");
            if oracle {
                value["oracle"] = run_oracle(&omega(&t1), &omega(&t2), report.symplectomorphic)?;
            }
            emit(&value);
            Ok(if report.symplectomorphic { 0 } else { EXIT_INEQUIVALENT })
        }
        Command::Mirror { torus } => {
            let t = load::<TorusJson>(&torus)?.to_torus()?;
            emit(&AnalyticTorusJson::try_from(&mirror(&t))?);
            Ok(0)
        }
        Command::Dual { torus } => {
            let a = load::<AnalyticTorusJson>(&torus)?.to_torus()?;
            emit(&AnalyticTorusJson::from_lattice(&dual(a.lattice())));
            Ok(0)
        }
        Command::Reduce { areas, l_vector } => {
            let areas = areas.iter().map(|a| parse_rational(a)).collect::<Result<Vec<Rational>, _>>()?;
            let r = reduce_general_quotient(&areas, &l_vector)?;
            emit(&ReductionJson::from(&r));
            Ok(0)
        }
        Command::Strictify { group, group_file, coeff, seed, twist } => {
            let (name, g) = match (group, group_file) {
                (Some(name), _) => (name.clone(), FiniteGroup::preset(&name)?),
                (None, Some(path)) => (path.clone(), load::<GroupJson>(&path)?.to_group()?),
                (None, None) => return Err(Error::Parse("--group or --group-file is required".into()).into()),
            };
            let coeffs = coefficient_model(&g, &coeff, twist)?;
            emit(&strictify_report(&name, g, coeffs, &coeff, twist, seed)?);
            Ok(0)
        }
        Command::Divisors { form } => {
            let rows: Vec<Vec<RationalText>> = load(&form)?;
            let (d, _) = symplectic_divisors(&parse_form(&rows)?)?;
            emit(&DivisorsJson::from(&d));
            Ok(0)
        }
    }
}

fn run_oracle(a: &AntisymmetricForm, b: &AntisymmetricForm, decided: bool) -> Result<Value, Error> {
    let bound = match a.dim() {
        2 => 3,
        4 => 1,
        d => return Err(Error::OverBudget(format!("oracle supports dimension 2 or 4, got {d}"))),
    };
    if b.dim() != a.dim() {
        return Ok(json!({ "bound": bound, "equivalent": false, "agrees": !decided }));
    }
    let (ai, bi, _) = lcd_scale(a.matrix(), b.matrix());
    let found = bruteforce_congruent(&AntisymmetricForm::from_int(&ai)?, &AntisymmetricForm::from_int(&bi)?, bound)?;
    // a bounded search can miss a witness, never invent one
    let agrees = !found.equivalent || decided;
    Ok(json!({ "bound": bound, "equivalent": found.equivalent, "agrees": agrees }))
}

fn coefficient_model(g: &FiniteGroup, coeff: &str, twist: bool) -> Result<CoefficientGroup, Error> {
    let n = g.order();
    if coeff == "Qstar" {
        if !twist {
            return Ok(CoefficientGroup::rationals(n));
        }
        let sign = unit_characters(g, None)
            .into_iter()
            .find(|c| c.iter().any(|&s| s == 1))
            .ok_or_else(|| Error::InvalidCoefficients("group has no nontrivial sign character".into()))?;
        return CoefficientGroup::rationals_twisted(g, &sign);
    }
    let m = coeff
        .strip_prefix('Z')
        .and_then(|m| m.parse::<u64>().ok())
        .ok_or_else(|| Error::Parse(format!("unknown coefficient model {coeff:?}")))?;
    if !twist {
        return CoefficientGroup::residues(n, m);
    }
    let tw = unit_characters(g, Some(m))
        .into_iter()
        .find(|c| c.iter().any(|&u| u != 1))
        .ok_or_else(|| Error::InvalidCoefficients(format!("group has no nontrivial character into (Z/{m})^x")))?;
    CoefficientGroup::residues_twisted(g, m, tw)
}

fn strictify_report(
    name: &str,
    g: FiniteGroup,
    coeffs: CoefficientGroup,
    coeff: &str,
    twist: bool,
    seed: u64,
) -> Result<Value, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.order();
    let tree = spanning_tree(&cayley_graph(&g));
    let data = CoherentActionData::random(g, coeffs, &mut rng);
    let assignment = random_assignment(&data, &mut rng);
    let system = strictify(&data, &assignment)?;
    let other = strictify(&data, &random_assignment(&data, &mut rng))?;
    let morphism = data.coefficients().random(&mut rng);

    let grid = |f: &dyn Fn(usize, usize) -> String| -> Vec<Vec<String>> {
        (0..n).map(|a| (0..n).map(|b| f(a, b)).collect()).collect()
    };
    let tree_json: Vec<Value> = tree
        .edges()
        .iter()
        .map(|e| {
            let value = assignment.get(&(e.source, e.target)).expect("every tree edge is assigned");
            json!({ "source": e.source, "target": e.target, "label": e.label, "value": coefficient_text(value) })
        })
        .collect();
    Ok(json!({
        "group": name,
        "order": n,
        "coefficients": coeff,
        "twisted": twist,
        "seed": seed,
        "phi": grid(&|a, b| coefficient_text(data.phi(a, b))),
        "tree": tree_json,
        "system": grid(&|a, b| coefficient_text(system.get(a, b))),
        "compatible": verify_compatibility(&system, &data),
        "right_action": right_action_law_holds(&data, &morphism, &system, &other),
    }))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            emit(&json!({ "error": e.to_string().trim_end() }));
            return ExitCode::from(EXIT_ERROR);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Error(e)) => {
            emit(&json!({ "error": e.to_string() }));
            ExitCode::from(EXIT_ERROR)
        }
        Err(Failure::Violation(details)) => {
            eprintln!("{details}");
            emit(&json!({ "error": "theorem violation", "details": details }));
            ExitCode::from(EXIT_VIOLATION)
        }
    }
}
