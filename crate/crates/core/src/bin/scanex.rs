use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use scan_exchange::candidates::synthetic::{elongated_loop, figure_eight_pair};
use scan_exchange::candidates::{self, AppearanceParams, GeometryParams, Trajectory};
use scan_exchange::error::{read_file, Error, ErrorClass, Result};
use scan_exchange::graph::{ExchangeGraph, Side};
use scan_exchange::policy::{self, Objective, Policy};
use scan_exchange::protocol::{self, BrokerPlacement, RendezvousConfig};
use scan_exchange::rational::{self, Rational};
use scan_exchange::solver;
use scan_exchange::sweep::{self, SweepInput, SweepParam, SweepSpec};

#[derive(Parser)]
#[command(name = "scanex", version, about = "Plan scan exchange between two robots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build an exchange graph from poses or similarity scores.
    BuildGraph {
        #[command(flatten)]
        source: Box<Source>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Solve for the optimal exchange policy.
    Solve {
        #[arg(long)]
        graph: PathBuf,
        #[command(flatten)]
        objective: ObjectiveArgs,
        /// Where to write the policy (printed to stdout otherwise).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether a monolog is optimal, with a certificate.
    CheckMonolog {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_parser = parse_side)]
        side: Side,
        #[command(flatten)]
        objective: ObjectiveArgs,
        /// Write the cheaper policy here when the monolog is not optimal.
        #[arg(long)]
        improving_out: Option<PathBuf>,
    },
    /// Simulate a rendezvous and print the message trace.
    Simulate {
        #[arg(long)]
        graph: PathBuf,
        /// Execute this policy instead of solving.
        #[arg(long)]
        policy: Option<PathBuf>,
        /// Lines of `u v` naming true loop closures.
        #[arg(long)]
        ground_truth: Option<PathBuf>,
        #[command(flatten)]
        objective: ObjectiveArgs,
        #[arg(long)]
        dead_channel: bool,
        #[arg(long, value_enum, default_value_t = Broker::ThirdParty)]
        broker: Broker,
        #[arg(long, default_value = "64", value_parser = parse_rational)]
        closure_bytes: Rational,
        /// Print the strategy comparison table instead of the trace.
        #[arg(long)]
        compare: bool,
    },
    /// Sweep one parameter and print a cost table.
    Sweep {
        #[arg(long)]
        param: SweepParam,
        #[arg(long, value_parser = parse_rational)]
        from: Rational,
        #[arg(long, value_parser = parse_rational)]
        to: Rational,
        #[arg(long, value_parser = parse_rational)]
        step: Rational,
        #[command(flatten)]
        source: Box<Source>,
        /// Fixed graph for omega sweeps.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[command(flatten)]
        objective: ObjectiveArgs,
        /// Emit a gnuplot data block instead of CSV.
        #[arg(long)]
        gnuplot: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Synthetic {
    FigureEight,
    ElongatedLoop,
}

#[derive(Clone, Copy, ValueEnum)]
enum Broker {
    ThirdParty,
    Robot1,
    Robot2,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    P1,
    P2,
    P3,
}

#[derive(Args)]
struct Source {
    #[arg(long, requires = "poses2")]
    poses1: Option<PathBuf>,
    #[arg(long)]
    poses2: Option<PathBuf>,
    #[arg(long)]
    features1: Option<PathBuf>,
    #[arg(long)]
    features2: Option<PathBuf>,
    #[arg(long, value_enum, conflicts_with = "poses1")]
    synthetic: Option<Synthetic>,
    /// Poses per robot for synthetic routes.
    #[arg(long, default_value_t = 100)]
    poses: usize,
    #[arg(long, default_value_t = 30.0)]
    dmax: f64,
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Keep every n-th pose.
    #[arg(long, default_value_t = 1)]
    rate: usize,
    #[arg(long, requires_all = ["weights1", "weights2"], conflicts_with_all = ["poses1", "synthetic"])]
    scores: Option<PathBuf>,
    #[arg(long)]
    weights1: Option<PathBuf>,
    #[arg(long)]
    weights2: Option<PathBuf>,
    #[arg(long, default_value_t = 0.3)]
    alpha: f64,
    #[arg(long, default_value_t = 2)]
    top_k: usize,
    #[arg(long)]
    symmetric: bool,
}

#[derive(Args)]
struct ObjectiveArgs {
    #[arg(long, value_enum, default_value_t = Variant::P2)]
    objective: Variant,
    #[arg(long, default_value = "1", value_parser = parse_rational)]
    alpha1: Rational,
    #[arg(long, default_value = "1", value_parser = parse_rational)]
    alpha2: Rational,
    #[arg(long, default_value = "0", value_parser = parse_rational)]
    omega: Rational,
}

impl ObjectiveArgs {
    fn build(&self) -> Result<Objective> {
        match self.objective {
            Variant::P1 => Objective::p1(self.alpha1.clone(), self.alpha2.clone()),
            Variant::P2 => Ok(Objective::p2()),
            Variant::P3 => Objective::p3(self.alpha1.clone(), self.alpha2.clone(), self.omega.clone()),
        }
    }
}

fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn parse_side(s: &str) -> std::result::Result<Side, String> {
    s.parse::<u8>()
        .ok()
        .and_then(|i| Side::from_index(i).ok())
        .ok_or_else(|| "side must be 1 or 2".to_string())
}

enum Loaded {
    Poses(Trajectory, Trajectory, GeometryParams),
    Scores(Vec<(usize, usize, f64)>, Vec<Rational>, Vec<Rational>, AppearanceParams),
}

impl Source {
    fn load(&self) -> Result<Loaded> {
        let geometry = GeometryParams {
            d_max: self.dmax,
            eta: self.eta,
            rate_divisor: self.rate,
            ..Default::default()
        };
        if let Some(scores) = &self.scores {
            let (w1, w2) = (self.weights1.as_ref().unwrap(), self.weights2.as_ref().unwrap());
            let appearance = AppearanceParams {
                alpha: self.alpha,
                top_k: self.top_k,
                symmetric: self.symmetric,
            };
            return Ok(Loaded::Scores(
                candidates::parse_scores(&read_file(scores)?)?,
                candidates::parse_weights(&read_file(w1)?)?,
                candidates::parse_weights(&read_file(w2)?)?,
                appearance,
            ));
        }
        let (t1, t2) = match (&self.synthetic, &self.poses1, &self.poses2) {
            (Some(Synthetic::FigureEight), _, _) => figure_eight_pair(self.poses),
            (Some(Synthetic::ElongatedLoop), _, _) => elongated_loop(2 * self.poses),
            (None, Some(p1), Some(p2)) => (
                Trajectory::read_kitti(p1, self.features1.as_ref())?,
                Trajectory::read_kitti(p2, self.features2.as_ref())?,
            ),
            _ => {
                return Err(Error::InvalidParameter(
                    "give --poses1/--poses2, --synthetic, or --scores with weights".into(),
                ))
            }
        };
        Ok(Loaded::Poses(t1, t2, geometry))
    }
}

fn load_graph(path: &PathBuf) -> Result<ExchangeGraph> {
    let outcome = ExchangeGraph::read(path)?;
    if !outcome.pruned.is_empty() {
        eprintln!("pruned {} isolated vertices", outcome.pruned.len());
    }
    Ok(outcome.graph)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::Io {
            path: p.display().to_string(),
            source: e,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fmt(q: &Rational) -> String {
    rational::format(q)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::BuildGraph { source, out } => {
            let outcome = match source.load()? {
                Loaded::Poses(t1, t2, p) => candidates::build_geometric(&t1, &t2, &p)?,
                Loaded::Scores(s, w1, w2, p) => candidates::build_appearance(&s, &w1, &w2, &p)?,
            };
            outcome.graph.write(&out)?;
            println!(
                "vertices {} edges {} pruned {}",
                outcome.graph.vertex_count(),
                outcome.graph.edge_count(),
                outcome.pruned.len()
            );
        }
        Command::Solve { graph, objective, out } => {
            let g = load_graph(&graph)?;
            let obj = objective.build()?;
            let start = Instant::now();
            let r = solver::solve(&g, &obj)?;
            let elapsed = start.elapsed();
            println!("optimal cost {}", fmt(&r.optimal_cost));
            for side in Side::BOTH {
                println!("monolog{side} cost {}", fmt(&solver::monolog_cost(&g, &obj, side)));
            }
            println!("method {}", r.method);
            println!("solve time {:.6} s", elapsed.as_secs_f64());
            match out {
                Some(p) => r.policy.write(&p)?,
                None => println!("{}", r.policy.to_json()),
            }
        }
        Command::CheckMonolog {
            graph,
            side,
            objective,
            improving_out,
        } => {
            let g = load_graph(&graph)?;
            let c = solver::check_ghc(&g, &objective.build()?, side)?;
            println!("monolog{side} {}", if c.holds { "optimal" } else { "not optimal" });
            println!("monolog cost {}", fmt(&c.monolog_cost));
            println!("optimal cost {}", fmt(&c.optimal_cost));
            if !c.holds {
                let ids: Vec<String> = c.witness.iter().map(ToString::to_string).collect();
                println!("witness {}", ids.join(" "));
                println!(
                    "witness weight {} neighbourhood weight {}",
                    fmt(&c.witness_weight),
                    fmt(&c.neighbourhood_weight)
                );
                if let Some(cost) = &c.improving_cost {
                    println!("improving cost {}", fmt(cost));
                }
                if let (Some(p), Some(path)) = (&c.improving_policy, &improving_out) {
                    p.write(path)?;
                }
            }
        }
        Command::Simulate {
            graph,
            policy: policy_path,
            ground_truth,
            objective,
            dead_channel,
            broker,
            closure_bytes,
            compare,
        } => {
            let g = load_graph(&graph)?;
            let cfg = RendezvousConfig {
                objective: objective.build()?,
                ground_truth: match &ground_truth {
                    Some(p) => protocol::parse_ground_truth(&read_file(p)?)?,
                    None => Default::default(),
                },
                channel_alive_after_exchange: !dead_channel,
                broker: match broker {
                    Broker::ThirdParty => BrokerPlacement::ThirdParty,
                    Broker::Robot1 => BrokerPlacement::OnRobot(Side::One),
                    Broker::Robot2 => BrokerPlacement::OnRobot(Side::Two),
                },
                closure_bytes,
                ..Default::default()
            };
            if compare {
                print!("{}", protocol::strategies_csv(&protocol::compare_strategies(&g, &cfg)?));
                return Ok(());
            }
            let trace = match &policy_path {
                Some(p) => {
                    let pi = Policy::read(p)?;
                    if !policy::is_admissible(&g, &pi)? {
                        return Err(Error::InvalidParameter(
                            "policy leaves some candidate unverified".into(),
                        ));
                    }
                    protocol::run_with_policy(&g, &cfg, &pi)?
                }
                None => protocol::run_rendezvous(&g, &cfg)?,
            };
            print!("{}", trace.to_log());
            println!(
                "# metadata {} scan {} closure {} total {}",
                fmt(&trace.metadata_bytes),
                fmt(&trace.scan_bytes),
                fmt(&trace.closure_bytes),
                fmt(&trace.total_bytes())
            );
            println!("# ell1 {} ell2 {}", fmt(&trace.ell1), fmt(&trace.ell2));
            for side in Side::BOTH {
                let i = side.index() as usize - 1;
                println!(
                    "# robot{side} verified {} discovered {} undelivered {}",
                    trace.verified[i].len(),
                    trace.discovered[i].len(),
                    trace.undelivered[i].len()
                );
            }
        }
        Command::Sweep {
            param,
            from,
            to,
            step,
            source,
            graph,
            objective,
            gnuplot,
            out,
        } => {
            let spec = SweepSpec::new(param, from, to, step)?;
            let obj = objective.build()?;
            let report = if param == SweepParam::Omega {
                let g = match &graph {
                    Some(p) => load_graph(p)?,
                    None => match source.load()? {
                        Loaded::Poses(t1, t2, p) => candidates::build_geometric(&t1, &t2, &p)?.graph,
                        Loaded::Scores(s, w1, w2, p) => candidates::build_appearance(&s, &w1, &w2, &p)?.graph,
                    },
                };
                sweep::run_sweep(&SweepInput::Graph(&g), &spec, &obj)?
            } else {
                match source.load()? {
                    Loaded::Poses(t1, t2, p) => sweep::run_sweep(
                        &SweepInput::Poses {
                            t1: &t1,
                            t2: &t2,
                            params: &p,
                        },
                        &spec,
                        &obj,
                    )?,
                    Loaded::Scores(s, w1, w2, p) => sweep::run_sweep(
                        &SweepInput::Scores {
                            scores: &s,
                            w1: &w1,
                            w2: &w2,
                            params: &p,
                        },
                        &spec,
                        &obj,
                    )?,
                }
            };
            if !report.nested() {
                eprintln!(
                    "warning: candidate sets not nested at rows {:?}",
                    report.nesting_violations
                );
            }
            let text = if gnuplot { report.to_gnuplot() } else { report.to_csv() };
            emit(&text, out.as_ref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Parse => 2,
                ErrorClass::Validation => 3,
                ErrorClass::Internal => 4,
            })
        }
    }
}
