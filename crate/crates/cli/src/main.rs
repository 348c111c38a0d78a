use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chaindecomp::format::{parse_field_name, serialize_chain};
use chaindecomp::{parse_chain, parse_matrix, report};
use chaindecomp_core::canon3::{read_intervals_t3, reduce_chain, CanonError};
use chaindecomp_core::chain::{default_pool, format_directions, parse_directions, random_chain, ChainShape};
use chaindecomp_core::gadget::{gadget_chain, GadgetError};
use chaindecomp_core::{
    canonical_decomposition, invariant_table, multiplicities_solve, multiplicities_sweep, Chain,
    IntervalMultiset, InvariantError,
};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "chaindecomp", version, about = "Classify chains of linear maps up to linear isomorphism")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariant table, one row `i: n_i1 ... n_ii` per vertex.
    Invariants { file: PathBuf },
    /// Print the interval decomposition as `L p q x m` lines.
    Decompose {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Sweep)]
        method: Method,
        /// Also print the base change carrying the chain to its canonical form.
        #[arg(long)]
        witness: bool,
    },
    /// Exit 0 if the chains are linearly isomorphic, 1 otherwise.
    Isocheck { a: PathBuf, b: PathBuf },
    /// Canonical form of a chain with orientation `><`.
    Canon3 { file: PathBuf },
    /// Print the chain (M, N_X) for the matrix X in a matrix file.
    Gadget {
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Print a random chain.
    Gen {
        #[arg(long)]
        t: usize,
        /// Orientation, e.g. `><<`; empty for t = 1.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        dirs: String,
        /// Vertex dimensions, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        /// `Q` or `GF<p>`.
        #[arg(long)]
        field: String,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Sweep,
    Solve,
    Both,
}

enum Failure {
    NotIsomorphic,
    Usage(String),
    Input(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::NotIsomorphic => 1,
            Failure::Usage(_) => 2,
            Failure::Input(_) => 3,
            Failure::Verification(_) => 4,
        }
    }
}

impl From<InvariantError> for Failure {
    fn from(e: InvariantError) -> Failure {
        Failure::Verification(e.to_string())
    }
}

impl From<CanonError> for Failure {
    fn from(e: CanonError) -> Failure {
        match e {
            CanonError::WrongOrientation(_) => Failure::Input(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

impl From<GadgetError> for Failure {
    fn from(e: GadgetError) -> Failure {
        match e {
            GadgetError::NotSquare(..) | GadgetError::SmallCharacteristic(_) => Failure::Input(e.to_string()),
            _ => Failure::Verification(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_chain(path: &Path) -> Result<Chain, Failure> {
    parse_chain(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn decompose(c: &Chain, method: Method) -> Result<IntervalMultiset, Failure> {
    let table = invariant_table(c);
    let dirs = c.directions();
    match method {
        Method::Sweep => Ok(multiplicities_sweep(&table, dirs)?),
        Method::Solve => Ok(multiplicities_solve(&table, dirs)?),
        Method::Both => {
            let sweep = multiplicities_sweep(&table, dirs)?;
            let solve = multiplicities_solve(&table, dirs)?;
            if sweep != solve {
                return Err(Failure::Verification(format!("sweep and solve disagree:\n{sweep}--\n{solve}")));
            }
            Ok(sweep)
        }
    }
}

fn run(command: Command) -> Result<String, Failure> {
    match command {
        Command::Invariants { file } => Ok(invariant_table(&load_chain(&file)?).to_string()),
        Command::Decompose { file, method, witness } => {
            let c = load_chain(&file)?;
            let m = decompose(&c, method)?;
            let mut out = m.to_string();
            if witness {
                let (explicit, phi) = canonical_decomposition(&c)?;
                if explicit != m {
                    return Err(Failure::Verification("explicit decomposition disagrees with the table".into()));
                }
                let canonical = m.to_chain(c.directions(), c.field())?;
                let moved = c.transport(&phi).map_err(|e| Failure::Verification(e.to_string()))?;
                if moved != canonical {
                    return Err(Failure::Verification("witness does not carry the chain to canonical form".into()));
                }
                out.push_str(&report::witness(&phi));
            }
            Ok(out)
        }
        Command::Isocheck { a, b } => {
            let (ca, cb) = (load_chain(&a)?, load_chain(&b)?);
            let mut diff = Vec::new();
            if ca.field() != cb.field() {
                diff.push(format!("field: {} vs {}", ca.field(), cb.field()));
            }
            if ca.directions() != cb.directions() {
                let (da, db) = (format_directions(ca.directions()), format_directions(cb.directions()));
                diff.push(format!("dirs: {da:?} vs {db:?}"));
            }
            if diff.is_empty() {
                let color = std::env::var("CHAINDECOMP_COLOR").is_ok_and(|v| v == "1");
                diff = report::table_diff(&invariant_table(&ca), &invariant_table(&cb), color);
            }
            if diff.is_empty() {
                return Ok("isomorphic\n".into());
            }
            println!("not isomorphic");
            for line in diff {
                println!("{line}");
            }
            Err(Failure::NotIsomorphic)
        }
        Command::Canon3 { file } => {
            let c = load_chain(&file)?;
            let canon = reduce_chain(&c)?;
            let dims = c.dims();
            let m = read_intervals_t3(&canon, (dims[0], dims[1], dims[2]))?;
            if m != decompose(&c, Method::Sweep)? {
                return Err(Failure::Verification("canonical form disagrees with the invariant table".into()));
            }
            Ok(report::canon3(&canon, &m))
        }
        Command::Gadget { matrix } => {
            let x = parse_matrix(&read(&matrix)?).map_err(|e| Failure::Input(format!("{}: {e}", matrix.display())))?;
            Ok(serialize_chain(&gadget_chain(&x)?))
        }
        Command::Gen { t, dirs, dims, field, seed } => {
            let field = parse_field_name(&field).map_err(|e| Failure::Usage(e.to_string()))?;
            let dirs = parse_directions(&dirs).ok_or_else(|| Failure::Usage(format!("--dirs {dirs:?}: use only `>` and `<`")))?;
            if t == 0 || dirs.len() + 1 != t || dims.len() != t {
                return Err(Failure::Usage(format!(
                    "t = {t} needs {} arrows and {t} dimensions, got {} and {}",
                    t.saturating_sub(1),
                    dirs.len(),
                    dims.len()
                )));
            }
            let shape = ChainShape::new(dirs, dims).map_err(|e| Failure::Usage(e.to_string()))?;
            Ok(serialize_chain(&random_chain(&shape, field, seed, default_pool(field))))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            match &f {
                Failure::NotIsomorphic => {}
                Failure::Usage(msg) | Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Verification(msg) => eprintln!("verification failed: {msg}"),
            }
            ExitCode::from(f.code())
        }
    }
}
