//! Command-line front end: run individual computations on scenario bundles,
//! dump machine-readable records, and execute the full verification suite.
//!
//! Exit codes: 0 on success, 1 on usage or computation errors, 2 when the
//! verification suite reports a failing row.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use kstab_core::azchain::chain_bound;
use kstab_core::exact::decimal::{Decimal, DEFAULT_PRECISION};
use kstab_core::exact::rational::{parse_rat, rat_str};
use kstab_core::scenario::{builtin_names, load_scenario, Scenario};
use kstab_core::soliton::{solve_soliton_candidate, weighted_chain_bound};
use kstab_core::stability::{cone_bound, kss_domain, wall_of, Wall};
use kstab_core::valuation::{g_function, s_invariant, shift_weight};
use kstab_core::verify;

#[derive(Parser)]
#[command(
    name = "kstab",
    about = "Exact-arithmetic K-stability calculator for scenario bundles",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Records,
}

#[derive(Args)]
struct Common {
    /// Builtin scenario name or path to a bundle file.
    #[arg(long, default_value = "m4")]
    scenario: String,
    /// Output format: human table or one JSON record per line.
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Okounkov body volume and the exact S-invariants of the bundled
    /// weight vectors.
    Okounkov(Common),
    /// Evaluate or minimize the delta map on the co-weight plane.
    DeltaMap {
        #[command(flatten)]
        common: Common,
        /// Evaluate at a rational point "a,b" instead of minimizing.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// S-invariant of a named chain step.
    S {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "plain")]
        chain: String,
        #[arg(long)]
        step: String,
    },
    /// Chain lower bound with per-step ratios.
    Chain {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "plain")]
        chain: String,
    },
    /// Coefficient walls of the bundled ratio functions.
    Walls(Common),
    /// Cone-construction coefficient interval.
    ConeBound(Common),
    /// Dimension of the constrained symmetry algebra.
    AutDim(Common),
    /// Soliton candidate, weighted volume, weighted S-invariants and the
    /// weighted chain minimum.
    Soliton {
        #[command(flatten)]
        common: Common,
        /// Print only the candidate (17 significant digits).
        #[arg(long)]
        candidate: bool,
    },
    /// Run the verification suite.
    Verify {
        /// Scenario filter: m4, m5 or all.
        #[arg(long, default_value = "all")]
        scenario: String,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
        /// Run exactly one row by id.
        #[arg(long)]
        only: Option<String>,
        /// Override every approximate tolerance (plain decimal).
        #[arg(long)]
        tol: Option<String>,
    },
    /// List the available scenario bundles.
    List,
}

fn precision_from_env() -> u32 {
    std::env::var("KSTAB_PRECISION")
        .ok()
        .and_then(|v| v.parse::<u32>().ok())
        .map(|p| p.clamp(12, 200))
        .unwrap_or(DEFAULT_PRECISION)
}

fn load(common: &Common) -> Result<Scenario, String> {
    load_scenario(&common.scenario).map_err(|e| e.to_string())
}

fn wall_str(w: &Wall) -> String {
    match w {
        Wall::Exact(c) => rat_str(c),
        Wall::Isolated(lo, hi) => format!("[{}, {}]", rat_str(lo), rat_str(hi)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli, precision_from_env()) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli, precision: u32) -> Result<ExitCode, String> {
    match cli.command {
        Command::List => {
            for name in builtin_names() {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Okounkov(common) => {
            let s = load(&common)?;
            let cs = s
                .coordinate_system
                .as_ref()
                .ok_or("scenario has no coordinate system")?;
            let mut invariants = Vec::new();
            for (name, w) in &s.weight_vectors {
                let shifted = shift_weight(&w.weights);
                let g = g_function(&shifted, cs).map_err(|e| e.to_string())?;
                let value = s_invariant(&g, cs).map_err(|e| e.to_string())?;
                invariants.push((name.clone(), value));
            }
            match common.format {
                Format::Table => {
                    println!("volume {}", rat_str(cs.body_volume()));
                    for (name, v) in &invariants {
                        println!("s-invariant[{name}] {}", rat_str(v));
                    }
                }
                Format::Records => {
                    println!(
                        "{}",
                        json!({
                            "volume": rat_str(cs.body_volume()),
                            "s_invariants": invariants
                                .iter()
                                .map(|(n, v)| (n.clone(), rat_str(v)))
                                .collect::<std::collections::BTreeMap<_, _>>(),
                        })
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::DeltaMap { common, at } => {
            let s = load(&common)?;
            let map = s.delta_map.as_ref().ok_or("scenario has no delta map")?;
            match at {
                Some(point) => {
                    let (a, b) = point
                        .split_once(',')
                        .ok_or("write the point as a,b with rational entries")?;
                    let p = (
                        parse_rat(a).map_err(|e| e.to_string())?,
                        parse_rat(b).map_err(|e| e.to_string())?,
                    );
                    let v = map.delta_at(&p).map_err(|e| e.to_string())?;
                    match common.format {
                        Format::Table => println!("{}", rat_str(&v)),
                        Format::Records => println!(
                            "{}",
                            json!({"at": [rat_str(&p.0), rat_str(&p.1)], "delta": rat_str(&v)})
                        ),
                    }
                }
                None => {
                    let (v, rays) = map.minimize().map_err(|e| e.to_string())?;
                    match common.format {
                        Format::Table => println!(
                            "minimum {} at {}",
                            rat_str(&v),
                            rays.iter()
                                .map(|(a, b)| format!("({a}, {b})"))
                                .collect::<Vec<_>>()
                                .join(" ")
                        ),
                        Format::Records => println!(
                            "{}",
                            json!({
                                "minimum": rat_str(&v),
                                "rays": rays
                                    .iter()
                                    .map(|(a, b)| vec![a.to_string(), b.to_string()])
                                    .collect::<Vec<_>>(),
                            })
                        ),
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::S { common, chain, step } => {
            let s = load(&common)?;
            let c = s
                .chains
                .get(&chain)
                .ok_or_else(|| format!("no chain named `{chain}`"))?;
            let st = c
                .steps
                .iter()
                .find(|st| st.name == step)
                .ok_or_else(|| format!("no step named `{step}` in chain `{chain}`"))?;
            let value = c.step_s(st).map_err(|e| e.to_string())?;
            match common.format {
                Format::Table => println!("{}", rat_str(&value)),
                Format::Records => println!(
                    "{}",
                    json!({"chain": chain, "step": step, "s": rat_str(&value)})
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Chain { common, chain } => {
            let s = load(&common)?;
            let c = s
                .chains
                .get(&chain)
                .ok_or_else(|| format!("no chain named `{chain}`"))?;
            let b = chain_bound(c).map_err(|e| e.to_string())?;
            match common.format {
                Format::Table => {
                    for (name, r) in &b.ratios {
                        println!("{name} {}", rat_str(r));
                    }
                    println!("bound {}", rat_str(&b.bound));
                }
                Format::Records => println!(
                    "{}",
                    json!({
                        "chain": chain,
                        "ratios": b
                            .ratios
                            .iter()
                            .map(|(n, r)| vec![n.clone(), rat_str(r)])
                            .collect::<Vec<_>>(),
                        "bound": rat_str(&b.bound),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Walls(common) => {
            let s = load(&common)?;
            let mut walls = Vec::new();
            for ratio in &s.ratios {
                if let Some(w) = wall_of(ratio).map_err(|e| e.to_string())? {
                    walls.push(w);
                }
            }
            let range = s.kss_range.clone().ok_or("scenario has no domain range")?;
            let domain = kss_domain(&s.ratios, &range).map_err(|e| e.to_string())?;
            match common.format {
                Format::Table => println!(
                    "{}",
                    walls.iter().map(wall_str).collect::<Vec<_>>().join(" ")
                ),
                Format::Records => println!(
                    "{}",
                    json!({
                        "walls": walls.iter().map(wall_str).collect::<Vec<_>>(),
                        "domain": domain.map(|(lo, hi)| vec![rat_str(&lo), rat_str(&hi)]),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ConeBound(common) => {
            let s = load(&common)?;
            let input = s.cone_bound.as_ref().ok_or("scenario has no cone data")?;
            let interval = cone_bound(input);
            match common.format {
                Format::Table => match &interval {
                    Some((lo, hi)) => println!("({}, {})", rat_str(lo), rat_str(hi)),
                    None => println!("empty"),
                },
                Format::Records => println!(
                    "{}",
                    json!({
                        "interval": interval.map(|(lo, hi)| vec![rat_str(&lo), rat_str(&hi)]),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::AutDim(common) => {
            let s = load(&common)?;
            let a = s
                .automorphism
                .as_ref()
                .ok_or("scenario has no automorphism data")?;
            let basis = kstab_core::exact::constrained_matrix_space(&a.j, &a.j2)
                .map_err(|e| e.to_string())?;
            match common.format {
                Format::Table => println!("{}", basis.len()),
                Format::Records => println!("{}", json!({"dimension": basis.len()})),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Soliton { common, candidate } => {
            let s = load(&common)?;
            let cfg = s.soliton.as_ref().ok_or("scenario has no soliton data")?;
            let xi =
                solve_soliton_candidate(&cfg.measure, precision).map_err(|e| e.to_string())?;
            if candidate {
                match common.format {
                    Format::Table => println!("{}", xi.to_sig_string(17)),
                    Format::Records => {
                        println!("{}", json!({"candidate": xi.to_sig_string(17)}))
                    }
                }
                return Ok(ExitCode::SUCCESS);
            }
            let chain = s
                .chains
                .get(&cfg.chain)
                .ok_or_else(|| format!("no chain named `{}`", cfg.chain))?;
            let bound = weighted_chain_bound(chain, &cfg.measure, &s.polarization, &xi)
                .map_err(|e| e.to_string())?;
            // recover each step's weighted S from its chain ratio
            let mut weighted_s = Vec::new();
            for (step, (name, ratio)) in chain.steps.iter().zip(&bound.ratios) {
                let a = kstab_core::azchain::adjusted_log_discrepancy(step)
                    .map_err(|e| e.to_string())?;
                let a_over_r = Decimal::from_rat(&(a / s.polarization.clone()), xi.scale());
                weighted_s.push((name.clone(), a_over_r.div(ratio)));
            }
            match common.format {
                Format::Table => {
                    println!("candidate {}", xi.to_sig_string(17));
                    println!(
                        "weighted-volume {}",
                        bound.weighted_total.to_sig_string(17)
                    );
                    for (name, v) in &weighted_s {
                        println!("weighted-s[{name}] {}", v.to_sig_string(17));
                    }
                    println!("weighted-bound {}", bound.bound.to_sig_string(17));
                }
                Format::Records => println!(
                    "{}",
                    json!({
                        "candidate": xi.to_sig_string(17),
                        "weighted_volume": bound.weighted_total.to_sig_string(17),
                        "weighted_s": weighted_s
                            .iter()
                            .map(|(n, v)| (n.clone(), v.to_sig_string(17)))
                            .collect::<std::collections::BTreeMap<_, _>>(),
                        "weighted_bound": bound.bound.to_sig_string(17),
                    })
                ),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            scenario,
            format,
            only,
            tol,
        } => {
            let tol_override = match tol {
                None => None,
                Some(t) => {
                    Some(Decimal::parse(&t).ok_or("tolerance must be a plain decimal literal")?)
                }
            };
            let rows = verify::run_with_tolerance(
                Some(scenario.as_str()),
                only.as_deref(),
                precision,
                tol_override,
            )
            .map_err(|e| e.to_string())?;
            let mut all_ok = true;
            for row in &rows {
                all_ok &= row.passed;
                match format {
                    Format::Table => println!(
                        "{} [{}] {} | expected {} | computed {} | {}",
                        if row.passed { "ok  " } else { "FAIL" },
                        row.scenario,
                        row.id,
                        row.expected,
                        row.computed,
                        row.provenance.label(),
                    ),
                    Format::Records => println!(
                        "{}",
                        json!({
                            "id": row.id,
                            "criterion": row.criterion,
                            "scenario": row.scenario,
                            "provenance": row.provenance.label(),
                            "expected": row.expected,
                            "computed": row.computed,
                            "passed": row.passed,
                        })
                    ),
                }
            }
            Ok(if all_ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
    }
}
