use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use spsynth::io::{
    export_game_dot, export_product_dot, parse_cnf_instance, parse_game, parse_sc, parse_strategy, serialize_game,
    serialize_ssc, serialize_strategy, CnfInstance,
};
use spsynth::objectives::Objective;
use spsynth::reductions::{build_qk, count_paths, sc_to_sps, sds_to_ssc, ssc_to_parity_sps, ssc_to_reach_sps};
use spsynth::strategy::{product, tree_solve};
use spsynth::{brute_force_solve, extended_payoff, feasible_payoffs, solve_sps, verify_strategy, MooreStrategy, SpGame};

const SOLVABLE: u8 = 0;
const INPUT_ERROR: u8 = 2;
const NOT_SOLVABLE: u8 = 10;
const COUNTEREXAMPLE: u8 = 11;

#[derive(Parser)]
#[command(name = "spsynth", version, about = "Stackelberg-Pareto synthesis on finite game graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide the game and extract a strategy.
    Solve {
        game: PathBuf,
        #[arg(long, value_name = "FILE")]
        emit_strategy: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        emit_dot: Option<PathBuf>,
    },
    /// Check a strategy; prints a lost Pareto-optimal play if there is one.
    Verify {
        game: PathBuf,
        strategy: PathBuf,
        #[arg(long, value_name = "FILE")]
        emit_dot: Option<PathBuf>,
    },
    /// Search all Moore machines up to a memory bound.
    Brute {
        game: PathBuf,
        #[arg(long, default_value_t = 2)]
        memory: usize,
        #[arg(long, value_name = "FILE")]
        emit_strategy: Option<PathBuf>,
    },
    /// Memoryless search for reachability games on trees.
    TreeSolve { game: PathBuf },
    /// Build the game of a hardness reduction.
    Reduce {
        kind: Reduction,
        instance: PathBuf,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    #[command(subcommand)]
    Gadget(Gadget),
    /// Print the payoffs of all plays.
    Feasible { game: PathBuf },
}

#[derive(Clone, Copy, ValueEnum)]
enum Reduction {
    Sc2sps,
    Ssc2reach,
    Ssc2parity,
    Sds2ssc,
}

#[derive(Subcommand)]
enum Gadget {
    /// Write the fragment with k alpha-beta paths as a game document.
    Qk {
        k: u64,
        #[arg(short, long, value_name = "FILE")]
        output: PathBuf,
    },
    /// Count the paths between two vertices of an acyclic game document,
    /// ignoring self-loops.
    Count {
        game: PathBuf,
        #[arg(long, default_value = "alpha")]
        from: String,
        #[arg(long, default_value = "beta")]
        to: String,
    },
}

struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Failure {
        Failure(e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

fn load_game(path: &Path) -> Result<SpGame, Failure> {
    parse_game(&read(path)?).map_err(|e| Failure(format!("{}: {e}", path.display())))
}

/// Edges some reachable memory state plays.
fn played_edges(game: &SpGame, strategy: &MooreStrategy) -> Result<Vec<(usize, usize)>, Failure> {
    let prod = product(game, strategy)?;
    let prod = &prod;
    let mut edges: Vec<(usize, usize)> = prod
        .succ
        .iter()
        .enumerate()
        .filter(|&(i, _)| game.arena().owner(prod.vertex(i)) == spsynth::Player::Zero)
        .flat_map(|(i, list)| list.iter().map(move |&j| (prod.vertex(i), prod.vertex(j))))
        .collect();
    edges.sort_unstable();
    edges.dedup();
    Ok(edges)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            game,
            emit_strategy,
            emit_dot,
        } => {
            let game = load_game(&game)?;
            let sol = solve_sps(&game)?;
            let bold = match &sol.strategy {
                Some(s) => played_edges(&game, s)?,
                None => Vec::new(),
            };
            if let Some(path) = emit_dot {
                write(&path, &export_game_dot(&game, &bold))?;
            }
            match (sol.strategy, sol.pareto) {
                (Some(strategy), Some(pareto)) => {
                    println!("solvable");
                    println!("pareto {pareto}");
                    println!("memory {}", strategy.states());
                    if let Some(path) = emit_strategy {
                        write(&path, &serialize_strategy(&strategy, game.arena()))?;
                    }
                    Ok(SOLVABLE)
                }
                _ => {
                    println!("not solvable");
                    Ok(NOT_SOLVABLE)
                }
            }
        }
        Command::Verify { game, strategy, emit_dot } => {
            let game = load_game(&game)?;
            let strategy = parse_strategy(&read(&strategy)?, game.arena()).map_err(|e| Failure(format!("{}: {e}", strategy.display())))?;
            let report = verify_strategy(&game, &strategy)?;
            if let Some(path) = emit_dot {
                write(&path, &export_product_dot(&game, &product(&game, &strategy)?, &report))?;
            }
            let arena = game.arena();
            println!("pareto {}", report.pareto_set);
            match &report.counterexample {
                None => {
                    for (p, w) in &report.witnesses {
                        println!("witness {p} {}", w.display(arena));
                    }
                    println!("solution");
                    Ok(SOLVABLE)
                }
                Some(play) => {
                    let p = extended_payoff(&game, play).payoff;
                    println!("counterexample {p} {}", play.display(arena));
                    Ok(COUNTEREXAMPLE)
                }
            }
        }
        Command::Brute {
            game,
            memory,
            emit_strategy,
        } => {
            let game = load_game(&game)?;
            match brute_force_solve(&game, memory) {
                Some(strategy) => {
                    println!("solvable");
                    println!("memory {}", strategy.states());
                    if let Some(path) = emit_strategy {
                        write(&path, &serialize_strategy(&strategy, game.arena()))?;
                    }
                    Ok(SOLVABLE)
                }
                None => {
                    println!("no solution with memory {memory}");
                    Ok(NOT_SOLVABLE)
                }
            }
        }
        Command::TreeSolve { game } => {
            let game = load_game(&game)?;
            let arena = game.arena();
            match tree_solve(&game)? {
                (true, Some(choice)) => {
                    println!("solvable");
                    for v in arena.vertices() {
                        if let Some(u) = choice[v] {
                            println!("{} -> {}", arena.name(v), arena.name(u));
                        }
                    }
                    Ok(SOLVABLE)
                }
                _ => {
                    println!("not solvable");
                    Ok(NOT_SOLVABLE)
                }
            }
        }
        Command::Reduce { kind, instance, output } => {
            let text = read(&instance)?;
            let ssc = || match parse_cnf_instance(&text)? {
                CnfInstance::Ssc(i) => Ok(i),
                CnfInstance::Sds(_) => Err(Failure("expected a `p ssc` instance".into())),
            };
            let out = match kind {
                Reduction::Sc2sps => serialize_game(&sc_to_sps(&parse_sc(&text)?)?),
                Reduction::Ssc2reach => serialize_game(&ssc_to_reach_sps(&ssc()?)?),
                Reduction::Ssc2parity => serialize_game(&ssc_to_parity_sps(&ssc()?)?),
                Reduction::Sds2ssc => match parse_cnf_instance(&text)? {
                    CnfInstance::Sds(i) => serialize_ssc(&sds_to_ssc(&i)?),
                    CnfInstance::Ssc(_) => return Err(Failure("expected a `p sds` instance".into())),
                },
            };
            write(&output, &out)?;
            Ok(SOLVABLE)
        }
        Command::Gadget(Gadget::Qk { k, output }) => {
            let q = build_qk(k)?;
            let arena = q.arena();
            let beta = Objective::reach(arena.len(), &[q.beta]);
            let game = SpGame::new(arena, beta.clone(), vec![beta])?;
            write(&output, &serialize_game(&game))?;
            println!("vertices {}", q.len());
            Ok(SOLVABLE)
        }
        Command::Gadget(Gadget::Count { game, from, to }) => {
            let game = load_game(&game)?;
            let arena = game.arena();
            let find = |name: &str| arena.find(name).ok_or_else(|| Failure(format!("no vertex named {name:?}")));
            println!("{}", count_paths(arena.adjacency(), find(&from)?, find(&to)?));
            Ok(SOLVABLE)
        }
        Command::Feasible { game } => {
            let game = load_game(&game)?;
            for p in feasible_payoffs(&game)? {
                println!("{p}");
            }
            Ok(SOLVABLE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(INPUT_ERROR)
        }
    }
}
