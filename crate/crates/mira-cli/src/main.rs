mod kat;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mira::estimator::CostReport;
use mira::keys::{armor, dearmor};
use mira::{keygen_optimized, ParameterSet, PublicKey, SecretKey, Variant};

/// Exit status for malformed input, matching clap's usage errors.
const MALFORMED: u8 = 2;

#[derive(Parser)]
#[command(name = "mira", version, about = "MinRank MPC-in-the-Head signatures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct SetArgs {
    #[arg(long, value_parser = parse_variant)]
    variant: Variant,
    #[arg(long, value_parser = parse_level)]
    level: u8,
}

impl SetArgs {
    fn operational(&self) -> ParameterSet {
        ParameterSet::operational(self.variant, self.level).expect("level checked by clap")
    }
}

#[derive(Subcommand)]
enum Command {
    /// Generate a key pair; writes <out>.pk and <out>.sk as hex.
    Keygen {
        #[command(flatten)]
        set: SetArgs,
        /// Seed (any string); omitted means fresh OS randomness.
        #[arg(long)]
        seed: Option<String>,
        /// Output path prefix.
        #[arg(long, default_value = "mira")]
        out: PathBuf,
    },
    /// Sign a message file with a secret key.
    Sign {
        /// Secret key file.
        #[arg(long)]
        key: PathBuf,
        /// Message file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Signature output file (hex).
        #[arg(long)]
        out: PathBuf,
        /// Signing entropy; omitted means fresh OS randomness.
        #[arg(long)]
        seed: Option<String>,
    },
    /// Verify a signature: exit 0 accept, 1 reject, 2 malformed.
    Verify {
        /// Public key file.
        #[arg(long)]
        key: PathBuf,
        /// Message file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Signature file.
        #[arg(long)]
        sig: PathBuf,
    },
    /// Sizes, soundness and attack costs for a parameter set.
    Estimate(EstimateArgs),
    /// Generate known-answer tests, or re-check a KAT file.
    Kat {
        #[arg(long, value_parser = parse_variant, required_unless_present = "check")]
        variant: Option<Variant>,
        #[arg(long, value_parser = parse_level, required_unless_present = "check")]
        level: Option<u8>,
        #[arg(long, default_value_t = 5)]
        count: u32,
        #[arg(long, default_value = "mira-kat")]
        seed: String,
        /// Output file; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-derive every record of this file and compare.
        #[arg(long, conflicts_with_all = ["variant", "level", "out"])]
        check: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long)]
    q: Option<u16>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    /// Number of parties N.
    #[arg(long = "N")]
    parties: Option<usize>,
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    tau: Option<usize>,
    #[arg(long)]
    eta: Option<usize>,
    /// Linear-algebra exponent.
    #[arg(long)]
    omega: Option<f64>,
    /// Print only the key = value records.
    #[arg(long)]
    records: bool,
}

fn parse_level(s: &str) -> Result<u8, String> {
    match s {
        "1" | "3" | "5" => Ok(s.parse().unwrap()),
        _ => Err(format!("level must be 1, 3 or 5, got {s}")),
    }
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: mira::Error| e.to_string())
}

/// A command failure carrying its exit status.
struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(MALFORMED, e.to_string())
    }
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure(MALFORMED, format!("{}: {e}", path.display())))
}

fn write(path: &Path, data: &[u8]) -> Result<(), Failure> {
    fs::write(path, data).map_err(|e| Failure(1, format!("{}: {e}", path.display())))
}

fn entropy(seed: &Option<String>) -> Vec<u8> {
    match seed {
        Some(s) => s.as_bytes().to_vec(),
        None => {
            let mut buf = [0u8; 32];
            rand::RngCore::fill_bytes(&mut rand::rngs::OsRng, &mut buf);
            buf.to_vec()
        }
    }
}

fn keygen(set: SetArgs, seed: &Option<String>, out: &Path) -> Result<u8, Failure> {
    let p = set.operational();
    let (pk, sk) = keygen_optimized(&p, &entropy(seed))?;
    let pk_path = out.with_extension("pk");
    let sk_path = out.with_extension("sk");
    write(&pk_path, armor(&pk.to_bytes()).as_bytes())?;
    write(&sk_path, armor(&sk.to_bytes()).as_bytes())?;
    println!("{}", p.name());
    println!(
        "public key  {} bytes ({} + 1 id byte) -> {}",
        pk.body_bytes().len() + 1,
        pk.body_bytes().len(),
        pk_path.display()
    );
    println!(
        "secret key  {} bytes ({} + 1 id byte) -> {}",
        sk.seed_sk.len() + 1,
        sk.seed_sk.len(),
        sk_path.display()
    );
    Ok(0)
}

fn sign(key: &Path, input: &Path, out: &Path, seed: &Option<String>) -> Result<u8, Failure> {
    let sk = SecretKey::from_bytes(&dearmor(&read(key)?)?)?;
    let (pk, _) = sk.expand()?;
    let msg = read(input)?;
    let sig = mira::sign(&sk, &pk, &msg, &entropy(seed))?;
    write(out, armor(&sig).as_bytes())?;
    println!("{} signature, {} bytes", sk.params.name(), sig.len());
    Ok(0)
}

fn verify(key: &Path, input: &Path, sig: &Path) -> Result<u8, Failure> {
    let pk = PublicKey::from_bytes(&dearmor(&read(key)?)?)?;
    let msg = read(input)?;
    let sig = dearmor(&read(sig)?)?;
    if mira::verify(&pk, &msg, &sig)? {
        println!("accept");
        Ok(0)
    } else {
        println!("reject");
        Ok(1)
    }
}

fn estimate(a: &EstimateArgs) -> Result<u8, Failure> {
    let mut p = ParameterSet::published(a.set.variant, a.set.level)?;
    let base = p.clone();
    p.q = a.q.unwrap_or(p.q);
    p.m = a.m.unwrap_or(p.m);
    p.n = a.n.unwrap_or(p.n);
    p.k = a.k.unwrap_or(p.k);
    p.r = a.r.unwrap_or(p.r);
    p.parties = a.parties.unwrap_or(p.parties);
    p.ell = a.ell.unwrap_or(p.ell);
    p.tau = a.tau.unwrap_or(p.tau);
    p.eta = a.eta.unwrap_or(p.eta);
    p.omega = a.omega.unwrap_or(p.omega);
    if p != base {
        p.level = 0;
    }
    if p.r == 0 || p.r > p.m.min(p.n) || p.k == 0 || p.parties == 0 || p.tau == 0 || p.eta == 0 {
        return Err(Failure(
            MALFORMED,
            "need 1 <= r <= min(m, n) and positive k, N, tau, eta".into(),
        ));
    }
    let records = CostReport::new(&p).records();
    let mut text = String::new();
    if !a.records {
        let width = records.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in &records {
            text.push_str(&format!("{k:<width$}  {v:>12}\n"));
        }
        text.push('\n');
    }
    for (k, v) in &records {
        text.push_str(&format!("{k} = {v}\n"));
    }
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = std::io::stdout().write_all(text.as_bytes());
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Keygen { set, seed, out } => keygen(set, &seed, &out),
        Command::Sign {
            key,
            input,
            out,
            seed,
        } => sign(&key, &input, &out, &seed),
        Command::Verify { key, input, sig } => verify(&key, &input, &sig),
        Command::Estimate(a) => estimate(&a),
        Command::Kat {
            check: Some(path), ..
        } => {
            let text = String::from_utf8(read(&path)?)?;
            match kat::check(&text) {
                Ok(n) => {
                    println!("{n} records match");
                    Ok(0)
                }
                Err(kat::Mismatch { count, field }) => Err(Failure(
                    1,
                    format!("record {count}: field `{field}` differs"),
                )),
            }
        }
        Command::Kat {
            variant,
            level,
            count,
            seed,
            out,
            check: None,
        } => {
            let (Some(variant), Some(level)) = (variant, level) else {
                return Err(Failure(
                    MALFORMED,
                    "--variant and --level are required".into(),
                ));
            };
            let p = ParameterSet::operational(variant, level)?;
            let text = kat::generate(&p, seed.as_bytes(), count)?;
            match out {
                Some(path) => write(&path, text.as_bytes())?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    if let Some(t) = std::env::var("MIRA_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // the global pool can only be configured once; ignore a second attempt
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build_global();
    }
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
