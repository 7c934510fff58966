use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use trigapprox::harness::{
    classical_lebesgue_check, context, sharpness_probe, verify_lebesgue, BoundReport, ClassicalRow,
};
use trigapprox::report::{plot_script, write_csv, write_csv_file, write_json_file, Summary};
use trigapprox::spec::{parse_poly, parse_psi};
use trigapprox::ExperimentConfig;
use trigapprox_core::bestapprox::{best_l1, best_uniform};
use trigapprox_core::interp::{lebesgue_fn, lebesgue_residual};
use trigapprox_core::psi::{characteristics, class_check, lemma1_check, limit_ratio, tail_sum, weighted_tail};
use trigapprox_core::{SumConfig, TrigPoly};

#[derive(Parser)]
#[command(name = "trigapprox", version, about = "Interpolation error bounds for (psi, beta)-integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Campaign {
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV output; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON summary {pass, fail, worst_ratio}
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Write a gnuplot script for the CSV next to it
    #[arg(long)]
    emit_plot_script: Option<PathBuf>,
}

impl Campaign {
    fn config(&self) -> anyhow::Result<ExperimentConfig> {
        match &self.config {
            Some(p) => ExperimentConfig::load(p).with_context(|| format!("loading {}", p.display())),
            None => Ok(ExperimentConfig::default()),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    L1,
    Sup,
}

#[derive(Subcommand)]
enum Command {
    /// Check the L1-type interpolation inequality on seeded test functions
    VerifyLebesgue(Campaign),
    /// Ratio of the unit-ball supremum to its main term
    Sharpness(Campaign),
    /// Compare against the classical (1 + L_n) E_n(f)_C bound
    ClassicalCheck(Campaign),
    /// Tabulate the Lebesgue function
    Lebesgue {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1024)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the bounds at one n on an x grid
    Bounds {
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 0.0)]
        beta: f64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        x_grid: usize,
        /// Best approximation error multiplying the right-hand sides
        #[arg(long, default_value_t = 1.0)]
        e: f64,
        #[arg(long, value_enum, default_value_t = Emit::Csv)]
        emit: Emit,
    },
    /// Best approximation by trigonometric polynomials of order n - 1
    Bestapprox {
        #[arg(long, value_enum, default_value_t = MetricArg::L1)]
        metric: MetricArg,
        #[arg(long)]
        n: usize,
        /// Grid points; defaults to 64 n
        #[arg(long)]
        grid: Option<usize>,
        /// `cos:3 + 0.5*sin:1` or a JSON polynomial
        #[arg(long = "fn")]
        function: String,
    },
    /// Tails, characteristics and class membership of a psi family
    PsiInfo {
        #[arg(long)]
        psi: String,
        #[arg(long, default_value_t = 16)]
        n: u64,
    },
}

fn emit_rows<T: Serialize>(rows: &[T], out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(p) => write_csv_file(p, rows)?,
        None => write_csv(std::io::stdout().lock(), rows)?,
    }
    Ok(())
}

fn finish(c: &Campaign, summary: Summary, ys: &[&str]) -> anyhow::Result<ExitCode> {
    if let Some(p) = &c.summary {
        write_json_file(p, &summary)?;
    }
    if let Some(p) = &c.emit_plot_script {
        let csv = c.out.clone().unwrap_or_else(|| PathBuf::from("out.csv"));
        std::fs::write(p, plot_script(&csv, "x", ys))?;
    }
    eprintln!("pass {} fail {} worst_ratio {:.6}", summary.pass, summary.fail, summary.worst_ratio);
    Ok(if summary.ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

#[derive(Serialize)]
struct BoundsRow {
    x: f64,
    thm1: f64,
    thm1_modified: f64,
    thm2_lo: f64,
    thm2_hi: f64,
    dual_lo: f64,
    dual_hi: f64,
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::VerifyLebesgue(c) => {
            let cfg = c.config()?;
            let out = verify_lebesgue(&cfg)?;
            emit_rows::<BoundReport>(&out.rows, c.out.as_deref())?;
            finish(&c, out.summary, &["lhs", "thm1", "thm1_modified"])
        }
        Command::Sharpness(c) => {
            let cfg = c.config()?;
            let s = sharpness_probe(&cfg)?;
            emit_rows(&s.rows, c.out.as_deref())?;
            let within = s.rows.iter().filter(|r| r.within).count();
            let summary = Summary { pass: within, fail: s.rows.len() - within, worst_ratio: 0.0 };
            if !s.monotone {
                eprintln!("ratios are not monotone in n");
            }
            finish(&c, summary, &["ratio", "envelope_lo", "envelope_hi"])
        }
        Command::ClassicalCheck(c) => {
            let cfg = c.config()?;
            let (rows, summary) = classical_lebesgue_check(&cfg)?;
            emit_rows::<ClassicalRow>(&rows, c.out.as_deref())?;
            finish(&c, summary, &["lhs", "classical_rhs", "thm1"])
        }
        Command::Lebesgue { n, grid, out } => {
            if n == 0 || grid == 0 {
                bail!("n and grid must be positive");
            }
            #[derive(Serialize)]
            struct Row {
                x: f64,
                lebesgue: f64,
                residual: f64,
            }
            let rows: Vec<Row> = (0..grid)
                .map(|i| {
                    let x = 2.0 * std::f64::consts::PI * i as f64 / grid as f64;
                    Row { x, lebesgue: lebesgue_fn(n, x), residual: lebesgue_residual(n, x) }
                })
                .collect();
            emit_rows(&rows, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bounds { psi, beta, n, x_grid, e, emit } => {
            let psi = parse_psi(&psi)?;
            if n == 0 || x_grid == 0 {
                bail!("n and x-grid must be positive");
            }
            let ctx = context(&psi, n, n, 1e-12)?;
            let kernel = ctx.duality_kernel(n, 32 * n)?;
            let rows: Vec<BoundsRow> = (0..x_grid)
                .map(|i| {
                    let x = 2.0 * std::f64::consts::PI * i as f64 / x_grid as f64;
                    let b = ctx.thm2_sup_bracket(n, x);
                    let d = kernel.eval(beta, x).interval;
                    BoundsRow {
                        x,
                        thm1: ctx.thm1_rhs(n, x, e),
                        thm1_modified: ctx.thm1_rhs_modified(n, x, e),
                        thm2_lo: b.lo,
                        thm2_hi: b.hi,
                        dual_lo: d.lo,
                        dual_hi: d.hi,
                    }
                })
                .collect();
            match emit {
                Emit::Csv => emit_rows(&rows, None)?,
                Emit::Json => {
                    let mut w = std::io::stdout().lock();
                    serde_json::to_writer_pretty(&mut w, &rows)?;
                    writeln!(w)?;
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bestapprox { metric, n, grid, function } => {
            let f: TrigPoly = parse_poly(&function)?;
            let m = grid.unwrap_or(64 * n);
            let r = match metric {
                MetricArg::L1 => best_l1(&f, n, m)?,
                MetricArg::Sup => best_uniform(&f, n, m)?,
            };
            #[derive(Serialize)]
            struct Out<'a> {
                value: f64,
                norm_estimate: f64,
                coeffs: &'a TrigPoly,
                grid_size: usize,
            }
            let out = Out { value: r.value, norm_estimate: r.norm_estimate, coeffs: &r.argmin, grid_size: r.grid_size };
            writeln!(std::io::stdout().lock(), "{}", serde_json::to_string_pretty(&out)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::PsiInfo { psi, n } => {
            let psi = parse_psi(&psi)?;
            let cfg = SumConfig::default();
            println!("family        {psi}");
            println!("psi(n)        {:e}", psi.eval(n));
            let show = |name: &str, v: trigapprox_core::Result<trigapprox_core::CertifiedSum>| match v {
                Ok(s) => println!("{name:<13} {:e} (+{:.1e}, {} terms)", s.value, s.remainder_bound, s.terms_used),
                Err(e) => println!("{name:<13} {e}"),
            };
            show("tail", tail_sum(&psi, n, &cfg));
            show("weighted", weighted_tail(&psi, n, &cfg));
            match limit_ratio(&psi, n, &cfg) {
                Ok(v) => println!("limit ratio   {v:e}"),
                Err(e) => println!("limit ratio   {e}"),
            }
            match lemma1_check(&psi, n, &cfg) {
                Ok(l) => println!("weighted >= double  {} (strict {})", l.holds, l.strict),
                Err(e) => println!("weighted >= double  {e}"),
            }
            match characteristics(&psi, n as f64) {
                Ok(c) => println!("alpha {:e} lambda {:e} eta {:e} mu {:e}", c.alpha_t, c.lambda_t, c.eta_t, c.mu_t),
                Err(e) => println!("characteristics: {e}"),
            }
            match class_check(&psi, n..=n) {
                Ok(f) => println!(
                    "D_q {} D_0 {} alpha decreasing {} lambda increasing {}",
                    f.is_dq.map_or("no".to_string(), |d| format!("q = {}", d.q)),
                    f.is_d0,
                    f.alpha_decreasing,
                    f.lambda_increasing
                ),
                Err(e) => println!("class: {e}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
