use std::fs::{self, File, OpenOptions};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use tdlc::battery;
use tdlc::config::{ExperimentConfig, FamilyKind};
use tdlc::families::{AffineGroup, LampGroup, Sym3Group};
use tdlc::group::Family;
use tdlc::lattice::{find_witness, AffineCovolume, CovolumeSubgroup, RationalLattice, Sym3Lattice, WitnessOptions};
use tdlc::report::{self, Record, Verdict};
use tdlc::scale::{displacement_index, is_tidy, scale, EngineOptions};
use tdlc::Error;

const EXIT_CHECK: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNCERTIFIED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "tdlc", version, about = "Scale functions, tidy subgroups and lattice witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Group family: affine, sym3 or lamp.
    #[arg(long, global = true, default_value = "affine")]
    family: FamilyKind,

    /// Prime for the affine family.
    #[arg(short = 'p', long = "prime", global = true, default_value_t = 2)]
    prime: u64,

    /// Modulus m of the affine subgroup Q_p x mZ.
    #[arg(long, global = true, default_value_t = 2)]
    modulus: u32,

    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Largest exponent tried by the witness search.
    #[arg(long = "n-max", global = true)]
    n_max: Option<u32>,

    /// Conjugation steps before a limit subgroup is declared undetermined.
    #[arg(long = "max-steps", global = true)]
    max_steps: Option<usize>,

    /// Append records here (verify: directory for records and summary).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certified scale of an element.
    Scale { element: String },
    /// Contraction group of an element, and membership of optional probes.
    Con {
        element: String,
        #[arg(long = "probe")]
        probes: Vec<String>,
    },
    /// Tidiness of a compact open subgroup for an element.
    Tidy { element: String, subgroup: String },
    /// Witness (n, h, t) for an element against the family's lattice.
    Witness {
        element: String,
        /// Powers checked for the conjugator.
        #[arg(long, default_value_t = 16)]
        k: u32,
    },
    /// Runs the battery described by a config file.
    Verify { config: PathBuf },
    /// CSV summary of a JSON-lines record file.
    Report { records: PathBuf },
}

fn exit_for(err: &Error) -> u8 {
    match err {
        Error::Undetermined { .. } | Error::Uncertified { .. } => EXIT_UNCERTIFIED,
        Error::NoWitness { .. } | Error::NoConjugator { .. } | Error::Inconsistent(_) => EXIT_CHECK,
        _ => EXIT_INPUT,
    }
}

fn exit_for_verdict(v: Verdict) -> u8 {
    match v {
        Verdict::Pass | Verdict::Vacuous => 0,
        Verdict::Fail => EXIT_CHECK,
        Verdict::Uncertified => EXIT_UNCERTIFIED,
    }
}

fn engine(cli: &Cli) -> EngineOptions {
    let mut opts = EngineOptions::default();
    if let Some(s) = cli.max_steps {
        opts.max_steps = s;
    }
    opts
}

fn emit(cli: &Cli, rec: &Record) -> tdlc::Result<()> {
    println!("{}", rec.to_line());
    if let Some(path) = &cli.out {
        let mut f = OpenOptions::new().create(true).append(true).open(path)?;
        writeln!(f, "{}", rec.to_line())?;
    }
    Ok(())
}

fn single<H: CovolumeSubgroup>(cli: &Cli, fam: &H::Family, lattice: &H) -> tdlc::Result<Record> {
    let opts = engine(cli);
    let params = json!(fam.params());
    match &cli.command {
        Command::Scale { element } => {
            let x = fam.parse_element(element)?;
            let rec = Record::new(fam.name(), "scale", json!({ "params": params, "x": x.to_string() }));
            let cert = scale(fam, &x, &opts)?;
            Ok(rec.outcome(json!({ "scale": cert.scale.to_string() }), Verdict::Pass, cert.to_json()))
        }
        Command::Con { element, probes } => {
            let x = fam.parse_element(element)?;
            let probes = probes.iter().map(|g| fam.parse_element(g)).collect::<tdlc::Result<Vec<_>>>()?;
            let con = fam.contraction_group(&x);
            let decisions: Vec<_> =
                probes.iter().map(|g| json!({ "g": g.to_string(), "decision": fam.in_contraction(g, &x) })).collect();
            let rec = Record::new(fam.name(), "con", json!({ "params": params, "x": x.to_string() }));
            Ok(rec.outcome(
                json!({ "con": con, "trivial": con.is_trivial(), "closed": con.is_closed() }),
                Verdict::Pass,
                json!({ "probes": decisions }),
            ))
        }
        Command::Tidy { element, subgroup } => {
            let x = fam.parse_element(element)?;
            let v = fam.parse_subgroup(subgroup)?;
            let rec =
                Record::new(fam.name(), "tidy", json!({ "params": params, "x": x.to_string(), "v": v.to_string() }));
            let report = is_tidy(fam, &x, &v, &opts)?;
            let index = displacement_index(fam, &x, &v)?;
            Ok(rec.outcome(json!({ "tidy": report.tidy, "index": index.to_string() }), Verdict::Pass, report.to_json()))
        }
        Command::Witness { element, k } => {
            let x = fam.parse_element(element)?;
            let n_max = cli.n_max.unwrap_or(lattice.default_n_max());
            let rec = Record::new(
                fam.name(),
                "witness",
                json!({ "params": params, "x": x.to_string(), "subgroup": lattice.describe(), "n_max": n_max }),
            );
            let wopts = WitnessOptions {
                n_max,
                conjugator_k: *k,
                contraction_samples: 20,
                sample_bound: 4,
                seed: cli.seed.unwrap_or(0),
            };
            let w = find_witness(fam, lattice, &x, &wopts, &opts)?;
            Ok(rec.outcome(w.to_json(), Verdict::from_bool(w.holds()), w.scale_x.to_json()))
        }
        Command::Verify { .. } | Command::Report { .. } => unreachable!("handled by run"),
    }
}

fn dispatch(cli: &Cli) -> tdlc::Result<Record> {
    match cli.family {
        FamilyKind::Affine => single(cli, &AffineGroup::new(cli.prime)?, &AffineCovolume::new(cli.modulus)?),
        FamilyKind::Sym3 => single(cli, &Sym3Group, &Sym3Lattice),
        FamilyKind::Lamp => single(cli, &LampGroup, &RationalLattice),
    }
}

fn write_outputs(dir: &Path, name: &str, report: &report::RunReport) -> tdlc::Result<()> {
    fs::create_dir_all(dir)?;
    report::write_jsonl(File::create(dir.join(format!("{name}.jsonl")))?, &report.records)?;
    report::write_summary_csv(File::create(dir.join(format!("{name}.csv")))?, &report.summary())
}

fn verify(cli: &Cli, path: &Path) -> tdlc::Result<u8> {
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(steps) = cli.max_steps {
        cfg.engine.max_steps = steps;
    }
    let report = battery::run(&cfg);
    match &cli.out {
        Some(dir) => write_outputs(dir, &cfg.name, &report)?,
        None => {
            let base = path.parent().unwrap_or(Path::new("."));
            if let Some(p) = &cfg.output.records {
                let p = base.join(p);
                if let Some(d) = p.parent() {
                    fs::create_dir_all(d)?;
                }
                report::write_jsonl(File::create(p)?, &report.records)?;
            }
            if let Some(p) = &cfg.output.summary {
                let p = base.join(p);
                if let Some(d) = p.parent() {
                    fs::create_dir_all(d)?;
                }
                report::write_summary_csv(File::create(p)?, &report.summary())?;
            }
        }
    }
    report::write_summary_csv(io::stdout().lock(), &report.summary())?;
    let mut code = 0;
    for rec in report.failures() {
        eprintln!("{}", rec.to_line());
        code = code.max(exit_for_verdict(rec.verdict));
    }
    Ok(code)
}

fn run(cli: &Cli) -> tdlc::Result<u8> {
    match &cli.command {
        Command::Verify { config } => verify(cli, config),
        Command::Report { records } => {
            let recs = report::read_jsonl(BufReader::new(File::open(records)?))?;
            let rows = report::summarize(&recs, &Default::default());
            match &cli.out {
                Some(p) => report::write_summary_csv(File::create(p)?, &rows)?,
                None => report::write_summary_csv(io::stdout().lock(), &rows)?,
            }
            Ok(if recs.iter().any(|r| r.verdict.is_failure()) { EXIT_CHECK } else { 0 })
        }
        _ => {
            let rec = dispatch(cli)?;
            emit(cli, &rec)?;
            Ok(exit_for_verdict(rec.verdict))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
