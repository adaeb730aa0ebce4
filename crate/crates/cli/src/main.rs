use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use adhm::io::{datum_to_value, parse_datum, serialize_datum};
use adhm::monad::{
    euler_characteristic, evaluate_fiber, h0_twisted_with_cap, non_costable_locus, perverse_invariants,
    singular_support, Support, DEFAULT_TWIST_CAP,
};
use adhm::ratmat::format_scalar;
use adhm::strata::{conjugate_randomly, dimension_audit, sample_stratum};
use adhm::sweep::{run_all, SweepConfig};
use adhm::uhlenbeck::{uhlenbeck_image, uhlenbeck_invariants};
use adhm::{classify, AdhmDatum};
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Parser)]
#[command(name = "adhm", version, about = "Exact computations with ADHM data")]
struct Cli {
    /// Emit JSON instead of key/value text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Input {
    /// Datum file (JSON).
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate [A,B] + IJ and report whether it vanishes.
    Check(Input),
    /// Stability, costability, Jacobian and stabilizer report.
    Classify(Input),
    /// Sample solutions with a prescribed stabilizing-subspace dimension.
    Sample {
        #[arg(long)]
        r: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        s: usize,
        /// Overridden by ADHM_SEED when set.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Apply a random change of basis to each sample.
        #[arg(long)]
        conjugate: bool,
        /// Directory for the datum files; stdout when absent.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Compare the stratum dimension formula with the parametrization count.
    AuditDimensions {
        #[arg(long, default_value_t = 5)]
        rmax: usize,
        #[arg(long, default_value_t = 6)]
        cmax: usize,
    },
    /// The monad on the projective plane.
    Monad {
        #[command(flatten)]
        input: Input,
        #[command(subcommand)]
        query: MonadQuery,
    },
    /// Split a stable solution into a regular part and a point cloud.
    Uhlenbeck {
        #[command(flatten)]
        input: Input,
        /// Also write the regular part to this datum file.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Build and classify both members of the two-parameter c = r = 2 family.
    RemarkExperiment,
    /// Run the acceptance criteria.
    Sweep {
        /// Overridden by ADHM_SEED when set.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Small sample counts for a fast smoke run.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Subcommand)]
enum MonadQuery {
    /// Ranks and cohomology of the fiber complex at a point.
    Fiber {
        /// Homogeneous coordinates "x,y,z".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Singular support and the locus where alpha is not injective.
    Support,
    /// Global sections of the middle cohomology twisted by O(n).
    H0 {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = DEFAULT_TWIST_CAP)]
        cap: i64,
    },
    /// Rank, charge and length.
    Invariants,
}

/// Sorted key/value report.
type Report = BTreeMap<String, Value>;

enum Outcome {
    Ok,
    ChecksFailed,
}

fn seed_from_env(flag: u64) -> Result<u64> {
    match std::env::var("ADHM_SEED") {
        Ok(s) => s.trim().parse().with_context(|| format!("ADHM_SEED is not an unsigned integer: {s:?}")),
        Err(_) => Ok(flag),
    }
}

fn read_datum(path: &Path) -> Result<AdhmDatum> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    parse_datum(&text).with_context(|| format!("invalid datum file {}", path.display()))
}

fn text_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(|i| format!("\n  {}", text_value(i))).collect(),
        other => other.to_string(),
    }
}

fn emit(report: &Report, json: bool) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
    } else {
        for (k, v) in report {
            println!("{k}: {}", text_value(v));
        }
    }
}

fn support_values(s: &Support) -> Vec<Value> {
    s.points.iter().map(|p| Value::String(p.to_string())).collect()
}

fn insert_support(report: &mut Report, prefix: &str, s: &Support) {
    report.insert(format!("{prefix}_points"), Value::Array(support_values(s)));
    report.insert(format!("{prefix}_total_multiplicity"), json!(s.total_multiplicity()));
    let residue = match &s.residue {
        None => "none".to_string(),
        Some(r) => format!(
            "dimension {} in factors {}",
            r.dimension,
            r.factors.iter().map(|(d, m)| format!("deg {d}^{m}")).collect::<Vec<_>>().join(", ")
        ),
    };
    report.insert(format!("{prefix}_residue"), json!(residue));
}

fn run(cli: Cli) -> Result<Outcome> {
    let json = cli.json;
    let mut report = Report::new();
    let mut outcome = Outcome::Ok;
    match cli.command {
        Command::Check(input) => {
            let x = read_datum(&input.input)?;
            let solution = x.is_solution();
            report.insert("mu".into(), json!(x.mu().to_string()));
            report.insert("solution".into(), json!(solution));
            if !solution {
                outcome = Outcome::ChecksFailed;
            }
        }
        Command::Classify(input) => {
            let x = read_datum(&input.input)?;
            if let Value::Object(map) = serde_json::to_value(classify(&x))? {
                report.extend(map);
            }
        }
        Command::Sample { r, c, s, seed, count, conjugate, out } => {
            let seed = seed_from_env(seed)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut samples = Vec::with_capacity(count);
            for _ in 0..count {
                let mut x = sample_stratum(r, c, s, &mut rng)?.datum;
                if conjugate {
                    x = conjugate_randomly(&x, &mut rng);
                }
                samples.push(x);
            }
            match out {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("cannot create {}", dir.display()))?;
                    let mut files = Vec::new();
                    for (k, x) in samples.iter().enumerate() {
                        let path = dir.join(format!("sample-{k:03}.json"));
                        fs::write(&path, serialize_datum(x)).with_context(|| format!("cannot write {}", path.display()))?;
                        files.push(json!(path.display().to_string()));
                    }
                    report.insert("files".into(), Value::Array(files));
                    report.insert("seed".into(), json!(seed));
                }
                None => {
                    let docs: Vec<Value> = samples.iter().map(datum_to_value).collect();
                    println!("{}", serde_json::to_string_pretty(&Value::Array(docs))?);
                    return Ok(outcome);
                }
            }
        }
        Command::AuditDimensions { rmax, cmax } => {
            let rows = dimension_audit(rmax, cmax);
            let all = rows.iter().all(|r| r.agrees());
            if json {
                println!("{}", serde_json::to_string_pretty(&json!({ "rows": rows, "all_agree": all }))?);
            } else {
                println!("{:>3} {:>3} {:>3} {:>8} {:>16} {:>6}", "r", "c", "s", "formula", "parametrization", "agree");
                for row in &rows {
                    println!(
                        "{:>3} {:>3} {:>3} {:>8} {:>16} {:>6}",
                        row.r, row.c, row.s, row.formula, row.parametrization_sum, row.agrees()
                    );
                }
                println!("all_agree: {all}");
            }
            return Ok(if all { Outcome::Ok } else { Outcome::ChecksFailed });
        }
        Command::Monad { input, query } => {
            let x = read_datum(&input.input)?;
            match query {
                MonadQuery::Fiber { point } => {
                    let f = evaluate_fiber(&x, &point.parse()?)?;
                    report.insert("point".into(), json!(f.point.to_string()));
                    report.insert("rank_alpha".into(), json!(f.rank_alpha));
                    report.insert("rank_beta".into(), json!(f.rank_beta));
                    report.insert("h0_fiber".into(), json!(f.h0_fiber));
                    report.insert("h1_fiber".into(), json!(f.h1_fiber));
                    report.insert("alpha_injective".into(), json!(f.alpha_injective));
                }
                MonadQuery::Support => {
                    insert_support(&mut report, "singular_support", &singular_support(&x)?);
                    insert_support(&mut report, "non_costable_locus", &non_costable_locus(&x)?);
                }
                MonadQuery::H0 { n, cap } => {
                    report.insert("n".into(), json!(n));
                    report.insert("h0".into(), json!(h0_twisted_with_cap(&x, n, cap)?));
                    report.insert("euler_characteristic".into(), json!(euler_characteristic(&x, n)));
                }
                MonadQuery::Invariants => {
                    let inv = perverse_invariants(&x)?;
                    let (rank, c2) = inv.chern_character();
                    report.insert("rank".into(), json!(inv.rank));
                    report.insert("charge".into(), json!(inv.charge));
                    report.insert("length".into(), json!(inv.length));
                    report.insert("chern_character".into(), json!(format!("{rank} - {c2} h^2")));
                }
            }
        }
        Command::Uhlenbeck { input, out } => {
            let x = read_datum(&input.input)?;
            let img = uhlenbeck_image(&x)?;
            let fp = uhlenbeck_invariants(&img);
            if let Some(path) = out {
                fs::write(&path, serialize_datum(&img.regular_part))
                    .with_context(|| format!("cannot write {}", path.display()))?;
            }
            let poly = |p: &Vec<adhm::Scalar>| p.iter().map(format_scalar).collect::<Vec<_>>().join(" ");
            report.insert("regular_part".into(), datum_to_value(&img.regular_part));
            report.insert("s_prime".into(), json!(fp.s_prime));
            report.insert("cloud_size".into(), json!(img.cloud.n()));
            report.insert("cloud_charpoly_p".into(), json!(poly(&fp.cloud_polynomials.0)));
            report.insert("cloud_charpoly_q".into(), json!(poly(&fp.cloud_polynomials.1)));
            insert_support(&mut report, "cloud", &img.points);
        }
        Command::RemarkExperiment => {
            for rep in adhm::experiments::remark_experiment() {
                let p = &rep.label;
                let c = &rep.classification;
                report.insert(format!("{p}.datum"), datum_to_value(&rep.datum));
                report.insert(format!("{p}.relation"), json!(format_scalar(&rep.relation_value)));
                report.insert(format!("{p}.mu_vanishes"), json!(rep.mu_vanishes));
                report.insert(format!("{p}.jacobian_rank"), json!(rep.jacobian_rank));
                report.insert(
                    format!("{p}.stabilizer_basis"),
                    Value::Array(rep.stabilizer_basis.iter().map(|m| json!(m.to_string())).collect()),
                );
                report.insert(
                    format!("{p}.witness"),
                    json!(rep.witness.as_ref().map_or("none".to_string(), |g| g.to_string())),
                );
                report.insert(format!("{p}.stable"), json!(c.stable));
                report.insert(format!("{p}.costable"), json!(c.costable));
                report.insert(format!("{p}.sj"), json!(c.sj));
                report.insert(format!("{p}.ts"), json!(c.ts));
            }
        }
        Command::Sweep { seed, quick } => {
            let seed = seed_from_env(seed)?;
            let config = if quick { SweepConfig::quick(seed) } else { SweepConfig::full(seed) };
            let outcomes = run_all(&config);
            let mut failed = false;
            for o in &outcomes {
                failed |= !o.passed;
                let mut entry = vec![json!(format!(
                    "{} {} ({} checks)",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.name,
                    o.checks
                ))];
                entry.extend(o.failures.iter().map(|f| json!(format!("failure: {f}"))));
                entry.extend(o.notes.iter().map(|n| json!(format!("note: {n}"))));
                report.insert(format!("criterion_{:02}", o.id), Value::Array(entry));
            }
            report.insert("seed".into(), json!(seed));
            report.insert("all_passed".into(), json!(!failed));
            if failed {
                outcome = Outcome::ChecksFailed;
            }
        }
    }
    if report.is_empty() {
        bail!("nothing to report");
    }
    emit(&report, json);
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
