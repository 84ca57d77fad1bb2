use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use khwidth::format::{parse, write_link, Fixture};
use khwidth::khovanov::{self, jones, reduced_kh_with, render_grid, Backend, KhOptions, DEFAULT_CAPACITY};
use khwidth::obstruct::{obstruct_all, scan_integers, unknot_certificate, Mode, ScanOptions, StabilityReport};
use khwidth::{corpus, goeritz, tau, Error, PlanarDiagram, Slope, Tangle};

#[derive(Parser)]
#[command(name = "khwidth", version, about = "Reduced Khovanov homology and width obstructions for Dehn fillings")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Khovanov backend: scan or naive.
    #[arg(long, global = true, default_value = "scan")]
    backend: Backend,

    /// Crossing cap for the naive backend.
    #[arg(long, global = true, env = "KHWIDTH_CAPACITY", default_value_t = DEFAULT_CAPACITY)]
    capacity: usize,

    #[arg(long, global = true, value_enum, default_value = "grid")]
    format: Format,

    /// Print timings to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Grid,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Khovanov homology of a link.
    Kh { input: String },
    /// The closure tau(p/q) of a tangle, as a PD code.
    Tau {
        input: String,
        /// `p/q`, an integer, or `1/0`.
        #[arg(allow_hyphen_values = true)]
        slope: Slope,
    },
    /// Integer-slope width scan of a tangle.
    Scan {
        input: String,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Lens space or finite filling verdicts over all slopes.
    Obstruct {
        input: String,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Goeritz matrix, signature and determinant of a link.
    Goeritz { input: String },
    /// Jones polynomial from the Khovanov ranks.
    Jones { input: String },
    /// Thin-closure test for the unknot.
    UnknotCheck {
        input: String,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(clap::Args)]
struct WindowArgs {
    /// Integer window `a..b`.
    #[arg(long, default_value = "-6..6", value_parser = parse_window, allow_hyphen_values = true)]
    window: (i64, i64),
    /// Keep the window fixed instead of widening until the tails stabilize.
    #[arg(long)]
    fixed: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Lens,
    Finite,
}

fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once("..").ok_or("expected a..b")?;
    let a: i64 = a.trim().parse().map_err(|_| format!("bad lower end {a:?}"))?;
    let b: i64 = b.trim().parse().map_err(|_| format!("bad upper end {b:?}"))?;
    if a >= b {
        return Err(format!("empty window {a}..{b}"));
    }
    Ok((a, b))
}

fn load(input: &str) -> anyhow::Result<Fixture> {
    if let Some(name) = input.strip_prefix("corpus:") {
        return Ok(corpus::load(name)?);
    }
    let text = std::fs::read_to_string(Path::new(input)).with_context(|| format!("reading {input}"))?;
    Ok(parse(&text)?)
}

fn load_link(input: &str) -> anyhow::Result<PlanarDiagram> {
    let f = load(input)?;
    f.link().cloned().ok_or_else(|| anyhow!(Error::Invalid(format!("{} is a tangle, not a link", f.name))))
}

fn load_tangle(input: &str) -> anyhow::Result<Tangle> {
    let f = load(input)?;
    f.tangle().cloned().ok_or_else(|| anyhow!(Error::Invalid(format!("{} is a link, not a tangle", f.name))))
}

fn entries_json(r: &khovanov::BigradedRanks) -> serde_json::Value {
    r.entries()
        .iter()
        .map(|(&(d, q), &n)| json!({ "two_delta": d, "two_q": q, "rank": n }))
        .collect()
}

fn scan(t: &Tangle, w: &WindowArgs, kh: KhOptions) -> anyhow::Result<StabilityReport> {
    let opts = ScanOptions { window: w.window, auto_widen: !w.fixed, kh, ..Default::default() };
    Ok(scan_integers(t, opts)?)
}

fn report_text(rep: &StabilityReport) -> String {
    let mut out = format!("tangle {}  window {}..{}\n", rep.name, rep.window.0, rep.window.1);
    out += "   n  det  sigma  width  columns (two_delta - sigma: rank)\n";
    for s in &rep.slopes {
        let cols: Vec<String> = s.normalized_columns().iter().map(|(d, r)| format!("{d}:{r}")).collect();
        out += &format!("{:>4} {:>4} {:>6} {:>6}  {}\n", s.n, s.det, s.sigma, s.width, cols.join(" "));
    }
    let opt = |x: Option<i64>| x.map_or("-".to_string(), |v| v.to_string());
    out += &format!(
        "w_min {}  w_max {}  ell {}  genericity {:?}  strong-generic at {}\n",
        rep.w_min,
        rep.w_max,
        opt(rep.ell),
        rep.genericity,
        opt(rep.strong_generic)
    );
    out += &format!(
        "stabilized lo {} hi {}  det pattern {}\n",
        rep.stabilized_lo, rep.stabilized_hi, rep.det_pattern
    );
    out
}

fn run(cli: &Cli) -> anyhow::Result<String> {
    let kh = KhOptions { backend: cli.backend, capacity: cli.capacity };
    if cli.capacity == 0 {
        bail!(Error::Invalid("capacity must be at least 1".into()));
    }
    let json_out = cli.format == Format::Json;
    let out = match &cli.command {
        Command::Kh { input } => {
            let d = load_link(input)?;
            let r = reduced_kh_with(&d, kh)?;
            if json_out {
                let w = khovanov::width(&r);
                serde_json::to_string_pretty(&json!({
                    "name": d.label(),
                    "crossings": d.len(),
                    "entries": entries_json(&r),
                    "width": w.width,
                    "total_rank": r.total_rank(),
                }))?
            } else {
                render_grid(&r)
            }
        }
        Command::Tau { input, slope } => {
            let d = tau(&load_tangle(input)?, *slope)?;
            if json_out {
                serde_json::to_string_pretty(&json!({
                    "name": d.label(),
                    "crossings": d.len(),
                    "components": d.count_components(),
                    "pd": d.pd_rows(),
                    "basepoint": d.basepoint(),
                    "loops": d.loops(),
                }))?
            } else {
                write_link(&d)
            }
        }
        Command::Scan { input, window } => {
            let rep = scan(&load_tangle(input)?, window, kh)?;
            if json_out {
                serde_json::to_string_pretty(&rep)?
            } else {
                report_text(&rep)
            }
        }
        Command::Obstruct { input, mode, window } => {
            let rep = scan(&load_tangle(input)?, window, kh)?;
            let mode = match mode {
                ModeArg::Lens => Mode::Lens,
                ModeArg::Finite => Mode::Finite,
            };
            let o = obstruct_all(&rep, mode);
            if json_out {
                serde_json::to_string_pretty(&o)?
            } else {
                let mut s = report_text(&rep);
                s += &format!("mode {mode:?}  generic {}  w_min {}\n", o.generic, o.w_min);
                for i in &o.intervals {
                    let end = |x: Option<i64>, inf: &str| x.map_or(inf.to_string(), |v| v.to_string());
                    let upper = i.upper.map_or("?".to_string(), |u| u.to_string());
                    s += &format!(
                        "  [{}, {}]  width {}..{}  {:?}\n",
                        end(i.from, "-inf"),
                        end(i.to, "+inf"),
                        i.lower,
                        upper,
                        i.verdict
                    );
                }
                for n in &o.notes {
                    s += &format!("note: {n}\n");
                }
                s
            }
        }
        Command::Goeritz { input } => {
            let d = load_link(input)?;
            let det = goeritz::determinant(&d)?;
            let sig = goeritz::signature(&d)?;
            let matrix = goeritz::checkerboard(&d).ok().map(|c| goeritz::goeritz(&d.reduce_r1(), &c).g);
            if json_out {
                serde_json::to_string_pretty(&json!({ "determinant": det, "signature": sig, "matrix": matrix }))?
            } else {
                let mut s = format!("determinant {det}\nsignature {sig}\n");
                if let Some(m) = matrix {
                    for row in m {
                        let r: Vec<String> = row.iter().map(|x| format!("{x:>3}")).collect();
                        s += &format!("{}\n", r.join(" "));
                    }
                }
                s
            }
        }
        Command::Jones { input } => {
            let d = load_link(input)?;
            let v = jones(&reduced_kh_with(&d, kh)?)?;
            if json_out {
                serde_json::to_string_pretty(&json!({ "jones": v.to_string(), "abs_at_minus_one": v.abs_at_minus_one() }))?
            } else {
                format!("V(t) = {v}\n|V(-1)| = {}\n", v.abs_at_minus_one())
            }
        }
        Command::UnknotCheck { input, window } => {
            let rep = scan(&load_tangle(input)?, window, kh)?;
            let c = unknot_certificate(&rep, &rep.mirrored());
            if json_out {
                serde_json::to_string_pretty(&json!({ "certificate": c, "window": rep.window, "widths": rep.widths() }))?
            } else {
                let name = serde_json::to_value(c)?;
                format!("{}\n", name.as_str().unwrap_or("inconclusive"))
            }
        }
    };
    Ok(out)
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::Invalid(_) | Error::InvalidDiagram(_)) => 2,
        Some(_) => 3,
        None if e.downcast_ref::<std::io::Error>().is_some() => 2,
        None => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = std::time::Instant::now();
    let result = run(&cli);
    if cli.verbose {
        eprintln!("elapsed {:?}", start.elapsed());
    }
    match result {
        Ok(mut s) => {
            if !s.ends_with('\n') {
                s.push('\n');
            }
            // A closed pipe downstream is not an error of ours.
            let _ = std::io::stdout().lock().write_all(s.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
