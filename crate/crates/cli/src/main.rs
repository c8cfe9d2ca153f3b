use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;
use vn_cli::*;
use vn_core::analysis::{read_records, sieve_classes};
use vn_core::diagram::{cable_2_1, parse_pd, whitehead_double, PDCode};
use vn_core::engine::{choose_best_long, evaluate};
use vn_core::rmatrix::{verify_bundle, VerifyMode};
use vn_core::UForm;

#[derive(Parser)]
#[command(name = "vn", version, about = "Exact R-matrix knot polynomials V_n(t, q)")]
struct Cli {
    /// Worker threads for batch work.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Exit nonzero on any audit failure or skipped input row.
    #[arg(long, global = true)]
    strict: bool,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args)]
struct BundleArgs {
    /// Bundle file; overrides --n.
    #[arg(long)]
    bundle: Option<PathBuf>,
    /// Load v<n>.rmx from $VN_BUNDLE_DIR (default: the shipped bundles).
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one diagram.
    Compute {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        pd: String,
        /// Print the coefficients of u = t + 1/t - q - 1/q instead.
        #[arg(long)]
        uform: bool,
        #[arg(long)]
        mirror: bool,
    },
    /// Evaluate every row of a `name<TAB>pd` table into a results TSV.
    Batch {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long = "in")]
        input: PathBuf,
        /// Sidecar CSV `name,genus,alternating,thin`.
        #[arg(long)]
        annotations: Option<PathBuf>,
    },
    /// Equal-value classes in a results TSV.
    Sieve {
        #[arg(long = "in", required = true)]
        input: Vec<PathBuf>,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        mirror_fold: bool,
    },
    /// Symmetry, specialization, genus and positivity audits of a results TSV.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        /// Diagram table for the Alexander specialization check.
        #[arg(long)]
        pd_table: Option<PathBuf>,
        #[arg(long)]
        annotations: Option<PathBuf>,
    },
    /// Satellite diagram of a knot: the (2,1)-cable or the Whitehead double.
    Cable {
        #[arg(long)]
        pd: String,
        #[arg(long)]
        whitehead: bool,
    },
    /// Values of a recurrence family.
    Recurse {
        #[arg(long, default_value = "torus2")]
        family: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, default_value = "-3..3", allow_hyphen_values = true)]
        range: String,
    },
    /// Contraction plan of the best long diagram.
    Plan {
        #[arg(long)]
        pd: String,
        #[arg(long)]
        explain: bool,
    },
    /// Inverse, Yang-Baxter and kink checks of a bundle.
    VerifyBundle {
        #[command(flatten)]
        bundle: BundleArgs,
        #[arg(long)]
        full: bool,
    },
}

fn pd_arg(s: &str) -> Result<PDCode> {
    parse_pd(s).with_context(|| format!("parsing PD code `{s}`"))
}

fn run(cli: Cli) -> Result<bool> {
    let out = cli.out.as_deref();
    match cli.cmd {
        Cmd::Compute { bundle, pd, uform, mirror } => {
            let b = resolve_bundle(bundle.bundle.as_deref(), bundle.n)?;
            let mut d = pd_arg(&pd)?;
            if mirror {
                d = d.mirror();
            }
            let v = evaluate(&d, &b)?.value;
            let text = if uform {
                match UForm::extract(&v) {
                    Some(u) => u.u_coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("\n"),
                    None => bail!("value is not a polynomial in u"),
                }
            } else {
                v.to_string()
            };
            write_output(out, &(text + "\n"))?;
            Ok(true)
        }
        Cmd::Batch { bundle, input, annotations } => {
            let b = resolve_bundle(bundle.bundle.as_deref(), bundle.n)?;
            let table = ingest_table(&input)?;
            for w in &table.warnings {
                eprintln!("warning: {w}");
            }
            let ann = load_annotations(annotations.as_deref())?;
            let mut recs = batch_evaluate(&table.rows, &b, cli.jobs)?;
            annotate_all(&mut recs, &table.rows, &ann);
            write_output(out, &records_to_string(&recs)?)?;
            Ok(table.warnings.is_empty() || !cli.strict)
        }
        Cmd::Sieve { input, mirror_fold } => {
            let mut recs = Vec::new();
            for p in &input {
                let f = std::fs::File::open(p).with_context(|| format!("opening {}", p.display()))?;
                recs.extend(read_records(f)?);
            }
            write_output(out, &format_classes(&sieve_classes(&recs, mirror_fold)))?;
            Ok(true)
        }
        Cmd::Check { input, pd_table, annotations } => {
            let f = std::fs::File::open(&input).with_context(|| format!("opening {}", input.display()))?;
            let mut recs = read_records(f)?;
            let diagrams: Option<BTreeMap<String, PDCode>> = match &pd_table {
                Some(p) => Some(ingest_table(p)?.rows.into_iter().collect()),
                None => None,
            };
            let ann = load_annotations(annotations.as_deref())?;
            for r in recs.iter_mut() {
                if let Some(a) = ann.get(&r.name) {
                    let alex = diagrams.as_ref().and_then(|d| d.get(&r.name)).map(vn_core::analysis::alexander_oracle);
                    r.annotate(Some(a), alex.as_ref());
                }
            }
            let s = audit(&recs, diagrams.as_ref());
            write_output(out, &(s.lines.join("\n") + "\n"))?;
            Ok(s.failures == 0 || !cli.strict)
        }
        Cmd::Cable { pd, whitehead } => {
            let d = pd_arg(&pd)?;
            let c = if whitehead { whitehead_double(&d)? } else { cable_2_1(&d)? };
            write_output(out, &format!("{c}\n"))?;
            Ok(true)
        }
        Cmd::Recurse { family, n, range } => {
            if family != "torus2" {
                bail!("unknown family `{family}` (available: torus2)");
            }
            if !(1..=2).contains(&n) {
                bail!("torus2 recurrences exist for n = 1, 2");
            }
            write_output(out, &recurse_lines(n, parse_range(&range)?)?)?;
            Ok(true)
        }
        Cmd::Plan { pd, explain } => {
            let d = pd_arg(&pd)?;
            let (ld, plan) = choose_best_long(&d)?;
            let mut s = format!(
                "cut arc {} ({} face unbounded)\n",
                ld.cut_label,
                if ld.outer_left { "left" } else { "right" }
            );
            if explain {
                s.push_str(&plan.explain(&ld.labels));
            } else {
                s.push_str(&format!("max log_cost {}\n", plan.max_log_cost()));
            }
            write_output(out, &s)?;
            Ok(true)
        }
        Cmd::VerifyBundle { bundle, full } => {
            let b = resolve_bundle(bundle.bundle.as_deref(), bundle.n)?;
            let r = verify_bundle(&b, if full { VerifyMode::Full } else { VerifyMode::Sampled });
            let mut s = String::new();
            s.push_str(&match r.inverse_violation {
                None => "inverse: ok\n".to_string(),
                Some((o, i)) => format!("inverse: FAIL at output {:?} input {:?}\n", o.map(|x| x + 1), i.map(|x| x + 1)),
            });
            s.push_str(&match r.ybe_violation {
                None => format!("yang-baxter: ok ({} basis triples)\n", r.ybe_checked),
                Some(x) => format!("yang-baxter: FAIL at {:?}\n", x.map(|v| v + 1)),
            });
            if r.kink_failures.is_empty() {
                s.push_str("kinks: ok\n");
            }
            for (pd, v) in &r.kink_failures {
                s.push_str(&format!("kinks: FAIL {pd} -> {v}\n"));
            }
            write_output(out, &s)?;
            Ok(r.ok() || !cli.strict)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
