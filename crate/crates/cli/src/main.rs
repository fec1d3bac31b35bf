//! `algid`: hashing, algebra, codecs, analysis, planning and a digest store
//! from the command line.
//!
//! Exit status is 0 on success, 1 on domain errors and 2 on usage errors.
//! Digest arguments may be written `@D` so that digests starting with `-`
//! are not taken for flags.

mod selftest;

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use algid::analysis::{render_table1_text, render_table1_tsv, robustness_report, table1_report};
use algid::codec::reserved_digest;
use algid::plan::{plan, PlanFile};
use algid::{
    decode, encode, gen_function_element, gen_value_element, import_legacy, key_element, Error,
    GroupParams, ImportMode, LegacyBase, Reserved, Store, UtElement,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;

#[derive(Parser)]
#[command(name = "algid", about = "Algebraic identifiers for data processing", disable_version_flag = true)]
struct Cli {
    /// Group version: ut32.4, ut40.4 or ut64.4.
    #[arg(long, global = true, env = "ALGID_VERSION", default_value = "ut40.4")]
    version: String,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Identifier of some content (a file, or stdin with `-`).
    Hash {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(default_value = "-")]
        path: String,
    },
    /// Left-to-right product of two or more digests.
    Op {
        #[arg(required = true, num_args = 2..)]
        digests: Vec<String>,
    },
    /// Inverse of a digest.
    Inv { digest: String },
    /// Power of a digest.
    Pow { digest: String, exponent: BigUint },
    /// Prints the class and rank of a digest.
    Classify { digest: String },
    /// Exits with 0 when the two digests commute, 1 otherwise.
    Commutes { a: String, b: String },
    /// Imports a legacy base-16 or base-62 identifier.
    Import {
        #[arg(long, value_parser = ["16", "62"])]
        base: String,
        #[arg(long, value_enum)]
        mode: Mode,
        text: String,
    },
    /// Reserved and removal identifiers.
    Reserved {
        #[command(subcommand)]
        kind: ReservedKind,
    },
    /// Identifier of a map key.
    Key { key: String },
    /// Robustness figures for the selected version.
    Analyze {
        /// Prints the comparison of candidate groups instead.
        #[arg(long)]
        table1: bool,
        /// Bits of the identifier space; defaults to 192 for the table and
        /// to six bits per digest character otherwise.
        #[arg(long)]
        beta: Option<u32>,
        /// Expression lengths to evaluate (repeatable).
        #[arg(long = "length")]
        lengths: Vec<u64>,
        #[arg(long)]
        tsv: bool,
    },
    /// Predicts the digests of a pipeline plan file.
    Plan {
        file: PathBuf,
        /// Store to check each step's digest against.
        #[arg(long)]
        store: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Content-addressable store operations.
    Store(StoreArgs),
    /// Exhaustive checks over a small group.
    Selftest {
        #[arg(long, default_value_t = 5)]
        prime: u64,
        #[arg(long, default_value_t = 120)]
        budget_seconds: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Value,
    Function,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Ordered,
    Commuting,
}

#[derive(Subcommand)]
enum ReservedKind {
    Rho,
    Theta { index: usize },
    Delta {
        #[arg(long, conflicts_with = "name", required_unless_present = "name")]
        index: Option<u64>,
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Args)]
struct StoreArgs {
    #[arg(long, env = "ALGID_STORE")]
    root: PathBuf,
    #[command(subcommand)]
    action: StoreAction,
}

#[derive(Subcommand)]
enum StoreAction {
    /// Stores content (a file, or stdin with `-`) under a digest.
    Put {
        digest: String,
        #[arg(default_value = "-")]
        path: String,
    },
    /// Writes the content stored under a digest to stdout.
    Get { digest: String },
    /// Exits with 0 when the digest is stored, 1 otherwise.
    Has { digest: String },
    /// Records `from` as another identity of `to`.
    Alias { from: String, to: String },
    /// Prints the digest an alias points to.
    Resolve { digest: String },
}

fn unescape(digest: &str) -> &str {
    digest.strip_prefix('@').unwrap_or(digest)
}

fn element(digest: &str, params: GroupParams) -> algid::Result<UtElement> {
    decode(unescape(digest), params)
}

fn read_input(path: &str) -> algid::Result<Vec<u8>> {
    let mut buf = Vec::new();
    let result = if path == "-" {
        io::stdin().read_to_end(&mut buf).map(|_| ())
    } else {
        std::fs::read(path).map(|b| buf = b)
    };
    result.map_err(|source| Error::Io {
        path: PathBuf::from(path),
        source,
    })?;
    Ok(buf)
}

fn line(out: &mut impl Write, text: impl std::fmt::Display) {
    let _ = writeln!(out, "{text}");
}

fn print_element(out: &mut impl Write, e: &UtElement) -> algid::Result<()> {
    line(out, encode(e)?);
    Ok(())
}

fn run(cli: Cli) -> algid::Result<ExitCode> {
    let params = GroupParams::from_name(&cli.version)?;
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Hash { kind, path } => {
            let content = read_input(&path)?;
            let e = match kind {
                Kind::Value => gen_value_element(&content, params),
                Kind::Function => gen_function_element(&content, params),
            };
            print_element(&mut out, &e)?;
        }
        Command::Op { digests } => {
            let elements = digests
                .iter()
                .map(|d| element(d, params))
                .collect::<algid::Result<Vec<_>>>()?;
            print_element(&mut out, &UtElement::product(params, &elements)?)?;
        }
        Command::Inv { digest } => print_element(&mut out, &element(&digest, params)?.inverse())?,
        Command::Pow { digest, exponent } => {
            print_element(&mut out, &element(&digest, params)?.pow(&exponent))?
        }
        Command::Classify { digest } => {
            let e = element(&digest, params)?;
            line(&mut out, format_args!("{} {}", e.classify(), e.rank()));
        }
        Command::Commutes { a, b } => {
            let commute = element(&a, params)?.commutes(&element(&b, params)?)?;
            line(&mut out, commute);
            return Ok(if commute { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        Command::Import { base, mode, text } => {
            let base = if base == "16" { LegacyBase::Hex } else { LegacyBase::Base62 };
            let mode = match mode {
                Mode::Ordered => ImportMode::Ordered,
                Mode::Commuting => ImportMode::Commuting,
            };
            print_element(&mut out, &import_legacy(&text, base, mode, params)?)?;
        }
        Command::Reserved { kind } => {
            let kind = match kind {
                ReservedKind::Rho => Reserved::Rho,
                ReservedKind::Theta { index } => Reserved::Theta(index),
                ReservedKind::Delta { index: Some(i), .. } => Reserved::RemovalIndex(i),
                ReservedKind::Delta { name, .. } => Reserved::RemovalName(name.expect("required by clap")),
            };
            line(&mut out, reserved_digest(&kind, params)?);
        }
        Command::Key { key } => print_element(&mut out, &key_element(&key, params)?)?,
        Command::Analyze {
            table1,
            beta,
            lengths,
            tsv,
        } => {
            let text = if table1 {
                let rows = table1_report(beta.unwrap_or(192));
                if tsv {
                    render_table1_tsv(&rows)
                } else {
                    render_table1_text(&rows)
                }
            } else {
                let version = params
                    .version()
                    .ok_or_else(|| Error::NoDigestSupport(params.name()))?;
                let lengths = if lengths.is_empty() { vec![10_000_000] } else { lengths };
                let report = robustness_report(version, beta, &lengths);
                if tsv {
                    report.render_tsv()
                } else {
                    report.render_text()
                }
            };
            let _ = out.write_all(text.as_bytes());
        }
        Command::Plan { file, store, json } => {
            let plan_file = PlanFile::load(&file)?;
            let store = store
                .map(|root| Store::open(root, GroupParams::from_name(&plan_file.version)?))
                .transpose()?;
            let report = plan(&plan_file, store.as_ref())?;
            if json {
                line(&mut out, report.to_json());
            } else {
                let _ = out.write_all(report.render_text().as_bytes());
            }
        }
        Command::Store(args) => return store_command(&mut out, args, params),
        Command::Selftest {
            prime,
            budget_seconds,
        } => {
            let ok = selftest::run(prime, Duration::from_secs(budget_seconds), &mut out)?;
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn store_command(out: &mut impl Write, args: StoreArgs, params: GroupParams) -> algid::Result<ExitCode> {
    let store = Store::open(&args.root, params)?;
    match args.action {
        StoreAction::Put { digest, path } => {
            let payload = read_input(&path)?;
            store.put(unescape(&digest), &payload)?;
        }
        StoreAction::Get { digest } => {
            let payload = store.get(unescape(&digest))?;
            let _ = out.write_all(&payload);
        }
        StoreAction::Has { digest } => {
            let has = store.has(unescape(&digest))?;
            line(out, has);
            return Ok(if has { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        StoreAction::Alias { from, to } => store.alias_put(unescape(&from), unescape(&to))?,
        StoreAction::Resolve { digest } => line(out, store.resolve(unescape(&digest))?),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let _ = io::stdout().flush();
            eprintln!("algid: {e}");
            ExitCode::from(1)
        }
    }
}
