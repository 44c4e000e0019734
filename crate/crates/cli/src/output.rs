use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;

use cm_index_core::classpoly::ClassPolynomial;
use cm_index_core::quadorder::QuadOrder;
use cm_index_core::{BatchRow, Error, IndexReport, Result, TwistDemo};

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One CSV line per report; list fields are joined with spaces.
#[derive(Serialize)]
struct CsvRow<'a> {
    disc: i64,
    fundamental_disc: i64,
    class_number: u64,
    units: u64,
    curve: &'a str,
    base: &'a str,
    n: usize,
    division_degree: u64,
    degree_over_k: u64,
    abelian_degree: u64,
    base_abelian_degree: u64,
    index: u64,
    modulus: &'a str,
    ray_class_invariants: String,
    primes_used: usize,
    last_prime: u64,
    reached_floor: bool,
    index_history: String,
    prime_bound: u64,
    stab_window: usize,
    grh_assumed: bool,
    seed: u64,
    total_ms: Option<u64>,
}

impl<'a> From<&'a IndexReport> for CsvRow<'a> {
    fn from(r: &'a IndexReport) -> Self {
        CsvRow {
            disc: r.disc,
            fundamental_disc: r.fundamental_disc,
            class_number: r.class_number,
            units: r.units,
            curve: &r.curve,
            base: &r.base,
            n: r.n,
            division_degree: r.division_degree,
            degree_over_k: r.degree_over_k,
            abelian_degree: r.abelian_degree,
            base_abelian_degree: r.base_abelian_degree,
            index: r.index,
            modulus: &r.modulus,
            ray_class_invariants: r.ray_class_invariants.join(" "),
            primes_used: r.primes_used,
            last_prime: r.last_prime,
            reached_floor: r.reached_floor,
            index_history: r
                .index_history
                .iter()
                .map(|(p, i)| format!("{p}:{i}"))
                .collect::<Vec<_>>()
                .join(" "),
            prime_bound: r.prime_bound,
            stab_window: r.stab_window,
            grh_assumed: r.grh_assumed,
            seed: r.seed,
            total_ms: r.timings.as_ref().map(|t| t.total_ms),
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn json<T: Serialize + ?Sized>(v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Io(e.into()))?;
    println!("{s}");
    Ok(())
}

fn write_csv<'a>(reports: impl Iterator<Item = &'a IndexReport>) -> Result<()> {
    let mut w = csv::Writer::from_writer(std::io::stdout());
    for r in reports {
        w.serialize(CsvRow::from(r)).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

fn text_report(out: &mut impl Write, r: &IndexReport) -> std::io::Result<()> {
    writeln!(out, "discriminant        {} (field {}, h = {}, w = {})", r.disc, r.fundamental_disc, r.class_number, r.units)?;
    writeln!(out, "curve               {}", r.curve)?;
    writeln!(out, "model               {}", r.model)?;
    writeln!(out, "base                {} (computed over {})", r.base, r.computed_over)?;
    writeln!(out, "[L:F]               {} (x-coordinates {}), n = {}", r.division_degree, r.x_degree, r.n)?;
    writeln!(out, "[L:K]               {}", r.degree_over_k)?;
    writeln!(out, "[L∩K^ab:K]          {}", r.abelian_degree)?;
    if r.base_abelian_degree != 1 {
        writeln!(out, "[F∩K^ab:H]          {}", r.base_abelian_degree)?;
    }
    writeln!(out, "index               {}", r.index)?;
    writeln!(out, "modulus             {}", r.modulus)?;
    writeln!(out, "Cl_m                {}", r.ray_class_invariants.join(" x "))?;
    let hist: Vec<String> = r.index_history.iter().map(|(p, i)| format!("{i}@{p}")).collect();
    writeln!(out, "index history       {}", hist.join(" "))?;
    writeln!(
        out,
        "primes              {} used, last {}, {}",
        r.primes_used,
        r.last_prime,
        if r.reached_floor { "stopped at lower bound".to_string() } else { format!("stable over {}", r.stab_window) }
    )?;
    if !r.skipped_primes.is_empty() {
        let s: Vec<String> = r.skipped_primes.iter().map(|p| p.to_string()).collect();
        writeln!(out, "skipped             {}", s.join(" "))?;
    }
    writeln!(out, "prime bound         {} (seed {}, GRH assumed)", r.prime_bound, r.seed)?;
    if let Some(t) = &r.timings {
        writeln!(
            out,
            "timings (ms)        class poly {}, division field {}, norm group {}, total {}",
            t.class_polynomial_ms, t.division_field_ms, t.norm_group_ms, t.total_ms
        )?;
    }
    Ok(())
}

pub fn print_reports(format: Format, reports: &[IndexReport]) -> Result<()> {
    match format {
        Format::Json => json(reports),
        Format::Csv => write_csv(reports.iter()),
        Format::Text => {
            let mut out = std::io::stdout().lock();
            for (i, r) in reports.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                text_report(&mut out, r)?;
            }
            Ok(())
        }
    }
}

pub fn print_batch(format: Format, rows: &[BatchRow]) -> Result<()> {
    match format {
        Format::Json => json(rows),
        Format::Csv => write_csv(rows.iter().flat_map(|r| r.reports.iter())),
        Format::Text => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{:>6}  {:>3}  {:>8}  {:>8}  agree", "disc", "h", "indices", "expected")?;
            for row in rows {
                let got: Vec<String> = row.reports.iter().map(|r| r.index.to_string()).collect();
                writeln!(
                    out,
                    "{:>6}  {:>3}  {:>8}  {:>8}  {}",
                    row.disc,
                    row.reports.first().map_or(0, |r| r.class_number),
                    got.join("/"),
                    row.expected,
                    if row.families_agree && row.matches_expected { "yes" } else { "NO" }
                )?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct ClasspolyOut {
    disc: i64,
    class_number: u64,
    degree: usize,
    /// Constant term first.
    coefficients: Vec<String>,
    precision_bits: u32,
    truncation: usize,
}

pub fn print_classpoly(format: Format, order: &QuadOrder, cp: &ClassPolynomial) -> Result<()> {
    let out = ClasspolyOut {
        disc: cp.disc,
        class_number: order.class_number(),
        degree: cp.degree(),
        coefficients: cp.poly.coeffs().iter().map(|c| c.to_string()).collect(),
        precision_bits: cp.precision,
        truncation: cp.truncation,
    };
    match format {
        Format::Json => json(&out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(std::io::stdout());
            w.write_record(["disc", "degree", "power", "coefficient"]).map_err(csv_err)?;
            for (i, c) in out.coefficients.iter().enumerate() {
                w.write_record([out.disc.to_string(), out.degree.to_string(), i.to_string(), c.clone()])
                    .map_err(csv_err)?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            println!("H_{}(x) = {}", cp.disc, cp.poly);
            println!("h = {}, precision {} bits", out.class_number, out.precision_bits);
            Ok(())
        }
    }
}

pub fn print_twist(format: Format, d: &TwistDemo) -> Result<()> {
    match format {
        Format::Json => json(d),
        Format::Csv => write_csv(d.reports.iter()),
        Format::Text => {
            println!("{}", d.field);
            println!("j0                  {}", d.j0);
            println!("E                   {}", d.model);
            println!("psi_3 factors       {}", d.psi3_factors.join("  |  "));
            let ps: Vec<String> = d.kernel_primes.iter().map(|p| p.to_string()).collect();
            println!("x3                  {}  (Frobenius checks at {})", d.x3, ps.join(" "));
            println!("alpha               {}", d.alpha);
            println!(
                "H(sqrt alpha)/K     degree {}, abelian part {} => {}",
                d.sqrt_alpha_degree,
                d.sqrt_alpha_abelian_degree,
                if d.sqrt_alpha_abelian { "abelian" } else { "not abelian" }
            );
            println!("E'                  {}", d.twist_model);
            println!("index of E/H        {} (division field), {} (from E' and alpha)", d.index_e, d.index_e_shortcut);
            println!("index of E'/H       {}", d.index_twist);
            println!("conjugate j0        {}", d.index_conjugate);
            println!("routes agree        {}", if d.routes_agree { "yes" } else { "no" });
            Ok(())
        }
    }
}
