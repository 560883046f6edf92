use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use realtoric::fan::{Builtin, Fan};
use realtoric::orbit::OrbitComplex;
use realtoric::report::{emit_report, run_check_file, Verdict};
use realtoric::spectral::{check_s_condition, FilteredView};

/// Mod-2 homology of real toric varieties and maximality certification.
#[derive(Parser)]
#[command(name = "realtoric", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a fan file: Betti numbers, spectral-sequence pages, verdict.
    ///
    /// Exits 0 when maximality is certified, 2 when undetermined.
    Check {
        /// Fan file (JSON)
        fan: PathBuf,
        /// Write the full JSON report here
        #[arg(long)]
        report: Option<PathBuf>,
        /// Compute pages up to this index (raised to n+2 when smaller)
        #[arg(long = "max-r")]
        max_r: Option<usize>,
    },
    /// Write a named standard fan as a fan file.
    Builtin {
        /// One of: projective, hirzebruch, weighted_p112
        #[arg(long)]
        name: String,
        /// Dimension for projective
        #[arg(long)]
        k: Option<usize>,
        /// Parameter for hirzebruch
        #[arg(long)]
        a: Option<i64>,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the product of two fans.
    Product {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the star subdivision of a fan at one cone.
    Subdivide {
        fan: PathBuf,
        /// Cone id to subdivide (ids as in the parsed fan's cone order)
        #[arg(long)]
        cone: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a deterministic corpus of valid complete fans.
    Corpus {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        dim: usize,
        #[arg(long = "out-dir")]
        out_dir: PathBuf,
    },
    /// Print the lifting-condition table s(p, q) of a fan.
    SConditions { fan: PathBuf },
}

fn load_fan(path: &Path) -> Result<Fan> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let fan = Fan::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    let violations = fan.validate();
    if !violations.is_empty() {
        let listing: Vec<String> = violations.iter().map(ToString::to_string).collect();
        bail!("{} is not a valid fan: {}", path.display(), listing.join("; "));
    }
    Ok(fan)
}

fn write_fan(fan: &Fan, out: Option<&Path>) -> Result<()> {
    let text = fan.to_json_string();
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Check {
            fan,
            report: report_path,
            max_r,
        } => {
            let report = run_check_file(&fan, max_r)?;
            println!(
                "fan: dimension {}, {} rays, cones by dimension {:?}",
                report.fan.lattice_dim, report.fan.num_rays, report.fan.cones_by_dim
            );
            println!(
                "betti (mod 2): {:?}  total {}",
                report.betti_real, report.betti_real_sum
            );
            println!("second-page total: {}", report.e2.sum);
            println!("degenerates at page one: {}", report.degenerate_at_one);
            match report.verdict {
                Verdict::MaximalCertified => println!("verdict: maximal_certified"),
                Verdict::Undetermined => println!("verdict: undetermined"),
            }
            if let Some(path) = report_path {
                emit_report(&report, &path)?;
                println!("report written to {}", path.display());
            }
            Ok(match report.verdict {
                Verdict::MaximalCertified => ExitCode::SUCCESS,
                Verdict::Undetermined => ExitCode::from(2),
            })
        }
        Command::Builtin { name, k, a, out } => {
            let which = match name.as_str() {
                "projective" => Builtin::Projective {
                    k: k.context("projective needs --k")?,
                },
                "hirzebruch" => Builtin::Hirzebruch {
                    a: a.context("hirzebruch needs --a")?,
                },
                "weighted_p112" => Builtin::WeightedP112,
                other => {
                    bail!("unknown builtin {other:?} (expected projective, hirzebruch or weighted_p112)")
                }
            };
            let fan = Fan::builtin(&which)?;
            write_fan(&fan, out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Product { a, b, out } => {
            let fan = Fan::product(&load_fan(&a)?, &load_fan(&b)?)?;
            write_fan(&fan, Some(&out))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Subdivide { fan, cone, out } => {
            let subdivided = load_fan(&fan)?.star_subdivision(cone)?;
            write_fan(&subdivided, Some(&out))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Corpus {
            seed,
            count,
            dim,
            out_dir,
        } => {
            let corpus = realtoric::corpus::generate_corpus(seed, count, dim)?;
            fs::create_dir_all(&out_dir)
                .with_context(|| format!("creating {}", out_dir.display()))?;
            for cf in &corpus {
                let path = out_dir.join(format!("{}.json", cf.name));
                fs::write(&path, cf.fan.to_json_string())
                    .with_context(|| format!("writing {}", path.display()))?;
                println!("{}", path.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::SConditions { fan } => {
            let fan = load_fan(&fan)?;
            let cx = OrbitComplex::build(&fan);
            let view = FilteredView::new(&cx);
            let n = fan.dim();
            let mut all = true;
            for p in 0..=n {
                for q in 0..=n {
                    let ok = check_s_condition(&view, p, q);
                    all &= ok;
                    println!("s({p},{q}) = {ok}");
                }
            }
            println!("all: {all}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}
