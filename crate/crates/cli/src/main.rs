mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cm_index_core::classpoly::{cached_class_polynomial, ring_class_polynomial_from};
use cm_index_core::pipeline::parse_curve_file;
use cm_index_core::quadorder::QuadOrder;
use cm_index_core::{
    batch_class_number_2, compute_index, compute_index_curve, twist_demo, Base, Error, Family, IndexSpec, Result,
    RunConfig,
};

use output::Format;

#[derive(Parser)]
#[command(name = "cm-index", version, about = "Index of the Galois image of CM elliptic curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index of one curve: a family member at a CM j-invariant, or a curve file.
    Index(IndexArgs),
    /// Every class-number-two discriminant in all requested families.
    Batch(BatchArgs),
    /// Ring class polynomial H_D.
    Classpoly(ClasspolyArgs),
    /// The quadratic twist over Q(sqrt -5, i) with discriminant -20.
    TwistDemo(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Largest rational prime sampled for the norm group.
    #[arg(long, default_value_t = 10_000)]
    prime_bound: u64,
    /// Primes without change required before stopping.
    #[arg(long, default_value_t = 50)]
    stab_window: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Record wall-clock timings in the report.
    #[arg(long)]
    timings: bool,
    /// Directory for cached class polynomials.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

impl CommonArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            prime_bound: self.prime_bound,
            stab_window: self.stab_window,
            seed: self.seed,
            start_precision: None,
            cache_dir: self.cache_dir.clone(),
            record_timings: self.timings,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    A,
    B,
    C,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::A => Family::A,
            FamilyArg::B => Family::B,
            FamilyArg::C => Family::C,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Moduli,
    Ringclass,
}

#[derive(Args)]
struct IndexArgs {
    /// Discriminant of the CM order.
    #[arg(long, allow_negative_numbers = true, required_unless_present = "curve", conflicts_with = "curve")]
    disc: Option<i64>,
    /// Curve description (TOML).
    #[arg(long)]
    curve: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FamilyArg::A)]
    family: FamilyArg,
    #[arg(long, value_enum, default_value_t = BaseArg::Moduli)]
    base: BaseArg,
    /// Division level.
    #[arg(long)]
    n: Option<usize>,
    /// Use the other root of H_D (class number two).
    #[arg(long)]
    conjugate: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BatchArgs {
    /// The class-number-two table.
    #[arg(long, required = true)]
    h2: bool,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [FamilyArg::A, FamilyArg::B, FamilyArg::C])]
    families: Vec<FamilyArg>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ClasspolyArgs {
    #[arg(long, allow_negative_numbers = true)]
    disc: i64,
    /// Starting precision in bits (default: coefficient-size estimate).
    #[arg(long)]
    precision: Option<u32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Index(a) => {
            let cfg = a.common.config();
            let report = match &a.curve {
                Some(path) => {
                    let text = std::fs::read_to_string(path)?;
                    let cf = parse_curve_file(&text)?;
                    let n = a.n.unwrap_or(cf.n);
                    compute_index_curve(&cf.curve, cf.disc, &cf.label, n, &cfg)?
                }
                None => {
                    let spec = IndexSpec {
                        disc: a.disc.expect("required by clap"),
                        family: a.family.into(),
                        base: match a.base {
                            BaseArg::Moduli => Base::Moduli,
                            BaseArg::Ringclass => Base::RingClass,
                        },
                        n: a.n.unwrap_or(3),
                        conjugate: a.conjugate,
                    };
                    compute_index(&spec, &cfg)?
                }
            };
            output::print_reports(a.common.format, &[report])
        }
        Command::Batch(a) => {
            let cfg = a.common.config();
            let families: Vec<Family> = a.families.iter().map(|&f| f.into()).collect();
            let rows = batch_class_number_2(&families, &cfg, |row| {
                let got: Vec<String> = row.reports.iter().map(|r| r.index.to_string()).collect();
                let mark = if row.matches_expected && row.families_agree { "ok" } else { "MISMATCH" };
                eprintln!("{:>6}  index {:<8} expected {}  {mark}", row.disc, got.join("/"), row.expected);
            })?;
            output::print_batch(a.common.format, &rows)?;
            let bad: Vec<String> = rows
                .iter()
                .filter(|r| !(r.matches_expected && r.families_agree))
                .map(|r| r.disc.to_string())
                .collect();
            if !bad.is_empty() {
                return Err(Error::Invariant(format!(
                    "batch disagrees with the reference table at {}",
                    bad.join(", ")
                )));
            }
            Ok(())
        }
        Command::Classpoly(a) => {
            let order = QuadOrder::new(a.disc)?;
            let cp = match a.precision {
                Some(p) => ring_class_polynomial_from(&order, p)?,
                None => cached_class_polynomial(&order, a.cache_dir.as_deref())?,
            };
            if cp.degree() as u64 != order.class_number() {
                return Err(Error::Invariant(format!(
                    "degree {} differs from class number {}",
                    cp.degree(),
                    order.class_number()
                )));
            }
            output::print_classpoly(a.format, &order, &cp)
        }
        Command::TwistDemo(c) => {
            let demo = twist_demo(&c.config())?;
            output::print_twist(c.format, &demo)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
