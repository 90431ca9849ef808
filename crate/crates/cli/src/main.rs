use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;

use forge_core::casebook::{ns_target, run_case, table2, Case, CaseReport};
use forge_core::enumeration::{vectors_with_norm, EnumStatus};
use forge_core::golay::{build_golay, build_niemeier};
use forge_core::lattice::Lattice;

#[derive(Parser)]
#[command(
    name = "forge",
    version,
    about = "Exact lattice certificates for the three-orbit subgroups of M23"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Golay code checks.
    Golay {
        #[command(subcommand)]
        action: GolayAction,
    },
    /// Run the pipeline for one case.
    Case {
        /// One of M22, L34, A7, A8, M11, A5x3.
        name: String,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run all six cases and print the summary table.
    Table2 {
        #[arg(long)]
        json: bool,
    },
    /// List lattice vectors of a given norm (up to sign).
    Svp {
        #[arg(long, allow_hyphen_values = true)]
        norm: i64,
        /// Lattice file in the JSON Gram format.
        file: PathBuf,
    },
    /// Build the Néron–Severi lattice for p in {5, 7, 11}.
    NsTarget {
        p: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GolayAction {
    /// Check the code and the Niemeier lattice built from it.
    Verify,
}

/// Failures that map to exit code 1; usage problems are reported as 2.
enum Failure {
    Check(String),
    Usage(String),
}

impl From<forge_core::Error> for Failure {
    fn from(e: forge_core::Error) -> Self {
        use forge_core::Error as E;
        match e {
            E::Parse(_)
            | E::Io(_)
            | E::Json(_)
            | E::UnsupportedPrime(_)
            | E::InvalidParameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Check(other.to_string()),
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn golay_verify() -> Result<(), Failure> {
    let code = build_golay()?;
    println!("dimension: {}", forge_core::golay::DIMENSION);
    let dist: Vec<String> = code
        .weight_distribution()
        .iter()
        .map(|(w, n)| format!("{w}:{n}"))
        .collect();
    println!("weight distribution: {{{}}}", dist.join(", "));
    println!("self-dual: {}", code.is_self_dual());
    println!("octads: {}", code.octads().len());
    println!("dodecads: {}", code.dodecads().len());
    let n = build_niemeier(&code)?;
    println!(
        "Niemeier A1^24: rank {}, det {}, signature {}, even {}",
        n.lattice.rank(),
        n.lattice.det(),
        n.lattice.signature(),
        n.lattice.is_even()
    );
    println!("index over root span: {}", n.root_span_index());
    Ok(())
}

fn case_cmd(name: &str, json: bool, out: Option<&Path>) -> Result<(), Failure> {
    let case: Case = name.parse()?;
    let report = run_case(case)?;
    let text = if json {
        report.to_json()?
    } else {
        report.to_string()
    };
    write_out(out, &text)?;
    finish(&[report])
}

fn finish(reports: &[CaseReport]) -> Result<(), Failure> {
    let failed: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{}: {}", r.case, r.failures.join("; ")))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Check(failed.join("\n")))
    }
}

fn table2_cmd(json: bool) -> Result<(), Failure> {
    let reports = table2()?;
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&reports).map_err(forge_core::Error::from)?
        );
    } else {
        println!(
            "{:<6} {:<14} {:>4} {:>5} {:>7} {:>6}  status",
            "case", "group", "p", "h^2", "det N^G", "det S"
        );
        for r in &reports {
            println!(
                "{:<6} {:<14} {:>4} {:>5} {:>7} {:>6}  {}",
                r.case,
                r.group,
                r.target_p.map_or("-".into(), |p| p.to_string()),
                r.h2,
                r.det_ng.map_or("-".into(), |d| d.to_string()),
                r.det_s.map_or("-".into(), |d| d.to_string()),
                r.status
            );
        }
    }
    finish(&reports)
}

fn svp_cmd(norm: i64, file: &Path) -> Result<(), Failure> {
    let text =
        fs::read_to_string(file).map_err(|e| Failure::Usage(format!("{}: {e}", file.display())))?;
    let lattice = Lattice::from_json(&text)?;
    let report = vectors_with_norm(&lattice, &BigInt::from(norm))?;
    if report.status == EnumStatus::SignMismatch {
        eprintln!("warning: norm {norm} has the wrong sign for this lattice");
    }
    println!(
        "norm {norm}: {} vectors up to sign ({} total)",
        report.vectors.len(),
        report.total_with_signs()
    );
    for v in &report.vectors {
        let c: Vec<String> = v.coords.iter().map(ToString::to_string).collect();
        println!("[{}]", c.join(", "));
    }
    Ok(())
}

fn ns_target_cmd(p: u64, out: Option<&Path>) -> Result<(), Failure> {
    let t = ns_target(p)?;
    match out {
        Some(path) => {
            write_out(Some(path), &t.lattice.to_json()?)?;
            println!(
                "p = {p}: rank {}, det {}, signature {}, q = {}",
                t.lattice.rank(),
                t.lattice.det(),
                t.lattice.signature(),
                t.fqf
            );
        }
        None => {
            println!("p = {p}, sigma = {}", t.sigma);
            println!(
                "rank {}, det {}, signature {}",
                t.lattice.rank(),
                t.lattice.det(),
                t.lattice.signature()
            );
            println!("q = {}", t.fqf);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Golay {
            action: GolayAction::Verify,
        } => golay_verify(),
        Command::Case { name, json, out } => case_cmd(name, *json, out.as_deref()),
        Command::Table2 { json } => table2_cmd(*json),
        Command::Svp { norm, file } => svp_cmd(*norm, file),
        Command::NsTarget { p, out } => ns_target_cmd(*p, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(m)) => {
            eprintln!("verification failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
