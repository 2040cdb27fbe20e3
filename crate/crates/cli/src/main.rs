use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use rowmotion_cli::commands::{self, DynamicsArg, ModeArg, Outcome, RowmotionRequest};
use rowmotion_cli::config::{RealmConfig, RealmKind};
use rowmotion_cli::fuzz::FuzzConfig;
use rowmotion_cli::io::PosetFile;
use rowmotion_core::realm::MERSENNE_61;

#[derive(Parser)]
#[command(
    name = "rowmotion",
    version,
    about = "Rowmotion on posets across combinatorial, piecewise-linear, birational and noncommutative realms"
)]
struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a poset and echo its canonical form.
    Poset(PosetArgs),
    /// Combinatorial antichain rowmotion orbits of [a]x[b].
    Orbits {
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        chains: Vec<usize>,
        #[arg(long, value_enum, default_value_t = CombRealm::Comb)]
        realm: CombRealm,
    },
    /// Iterate rowmotion on a labeling.
    Rowmotion {
        #[command(flatten)]
        poset: PosetArgs,
        #[command(flatten)]
        realm: RealmArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::Transfer)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = DynamicsArg::Antichain)]
        dynamics: DynamicsArg,
        /// Step bound; defaults to 4(a+b) on rectangles.
        #[arg(long)]
        steps: Option<usize>,
        /// Labeling JSON; sampled from the seed when absent.
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Stanley-Thomas word of a labeling and of its rowmotion image.
    Stword {
        #[arg(long, num_args = 2, value_names = ["A", "B"], required = true)]
        chains: Vec<usize>,
        #[command(flatten)]
        realm: RealmArgs,
        #[arg(long = "in")]
        input: Option<PathBuf>,
    },
    /// Orbit homomesy of the fiber statistics on [a]x[b].
    Homomesy {
        #[command(flatten)]
        realm: RealmArgs,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Search for counterexamples to NAR^(a+b) = id over matrices.
    FuzzNar {
        #[arg(long, default_value_t = 3)]
        max_a: usize,
        #[arg(long, default_value_t = 3)]
        max_b: usize,
        #[arg(long, default_value_t = 3)]
        max_d: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = MERSENNE_61)]
        p: u64,
    },
    /// Run the worked-example regression table.
    Fixtures,
}

#[derive(Clone, Copy, ValueEnum)]
enum CombRealm {
    Comb,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PosetArgs {
    /// Poset JSON file.
    #[arg(long)]
    poset: Option<PathBuf>,
    /// The rectangle [A]x[B].
    #[arg(long, num_args = 2, value_names = ["A", "B"])]
    chains: Option<Vec<usize>>,
}

impl PosetArgs {
    fn load(&self) -> Result<PosetFile> {
        match (&self.poset, &self.chains) {
            (Some(path), _) => PosetFile::from_json(&read(path)?),
            (None, Some(c)) => Ok(PosetFile::chains(c[0], c[1])),
            (None, None) => bail!("give --poset or --chains"),
        }
    }
}

#[derive(Args)]
struct RealmArgs {
    #[arg(long, value_enum, required_unless_present = "realm_config")]
    realm: Option<RealmKind>,
    /// Realm config JSON {"realm", "p", "d", "c"}; overrides the flags below.
    #[arg(long)]
    realm_config: Option<PathBuf>,
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    c: Option<String>,
}

impl RealmArgs {
    fn load(&self) -> Result<RealmConfig> {
        let config = match &self.realm_config {
            Some(path) => serde_json::from_str(&read(path)?).context("realm config")?,
            None => {
                RealmConfig { realm: self.realm.expect("required by clap"), p: self.p, d: self.d, c: self.c.clone() }
            }
        };
        config.validate()?;
        Ok(config)
    }
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_json(path: &Option<PathBuf>) -> Result<Option<Value>> {
    path.as_ref()
        .map(|p| serde_json::from_str(&read(p)?).with_context(|| format!("parsing {}", p.display())))
        .transpose()
}

fn pair(v: &[usize]) -> (usize, usize) {
    (v[0], v[1])
}

fn run(cli: &Cli) -> Result<Outcome> {
    let seed = cli.seed;
    match &cli.command {
        Command::Poset(args) => commands::poset(&args.load()?),
        Command::Orbits { chains, realm: CombRealm::Comb } => {
            let (a, b) = pair(chains);
            commands::orbits(a, b)
        }
        Command::Rowmotion { poset, realm, mode, dynamics, steps, input } => commands::rowmotion(&RowmotionRequest {
            poset: poset.load()?,
            realm: realm.load()?,
            mode: *mode,
            dynamics: *dynamics,
            steps: *steps,
            input: read_json(input)?,
            seed,
        }),
        Command::Stword { chains, realm, input } => {
            let (a, b) = pair(chains);
            commands::stword(a, b, &realm.load()?, read_json(input)?.as_ref(), seed)
        }
        Command::Homomesy { realm, a, b, samples } => commands::homomesy(&realm.load()?, *a, *b, *samples, seed),
        Command::FuzzNar { max_a, max_b, max_d, trials, p } => {
            commands::fuzz_nar(FuzzConfig { max_a: *max_a, max_b: *max_b, max_d: *max_d, trials: *trials, p: *p, seed })
        }
        Command::Fixtures => commands::fixtures(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let Format::Json = cli.format;
    let mut text = serde_json::to_string_pretty(&outcome.report).expect("reports serialize");
    text.push('\n');
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
