//! `coha`: batch verification and exploration of the shuffle-algebra model.
//!
//! Exit codes: 0 success / wheel PASS, 1 wheel FAIL or internal error,
//! 2 parse failure, 3 flavor mismatch, 4 no preimage within bounds,
//! 5 resource cap exceeded.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use shuffle_coha::{
    graded_dimension_census, k_wheel_check, shuffle_mul, verify_theorem, wheel_check,
    wheel_violations, DimVector, Error, Flavor, Quiver, ShuffleElement, SolverLimits, VerifyPath,
};

#[derive(Parser)]
#[command(name = "coha", version, about = "Shuffle-algebra CoHA toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    Coh,
    K,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Coh => Flavor::Cohomological,
            FlavorArg::K => Flavor::KTheoretic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum PathArg {
    Direct,
    KThenDegenerate,
    Both,
}

impl From<PathArg> for VerifyPath {
    fn from(p: PathArg) -> VerifyPath {
        match p {
            PathArg::Direct => VerifyPath::Direct,
            PathArg::KThenDegenerate => VerifyPath::KThenDegenerate,
            PathArg::Both => VerifyPath::Both,
        }
    }
}

/// Resource caps shared by the search-based subcommands. The defaults bound
/// desk-scale runs; raise them only deliberately.
#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Maximum straightening iterations before giving up.
    #[arg(long, default_value_t = 20_000)]
    max_iterations: usize,
    /// Maximum number of unknowns in any linear solve.
    #[arg(long, default_value_t = 4_000)]
    max_unknowns: usize,
    /// Bound-widening rounds for the fallback linear ansatz.
    #[arg(long, default_value_t = 6)]
    widen_rounds: i32,
}

impl From<CapArgs> for SolverLimits {
    fn from(c: CapArgs) -> SolverLimits {
        SolverLimits {
            max_iterations: c.max_iterations,
            max_unknowns: c.max_unknowns,
            widen_rounds: c.widen_rounds,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Multiply two serialized elements and print the product element.
    Mul {
        /// Quiver description (JSON file).
        quiver: String,
        /// Left factor (element JSON file).
        a: String,
        /// Right factor (element JSON file).
        b: String,
        /// Expected flavor of both factors.
        #[arg(long, value_enum)]
        flavor: FlavorArg,
    },
    /// Check the wheel conditions of an element; PASS exits 0, FAIL exits 1.
    Wheel {
        /// Quiver description (JSON file).
        quiver: String,
        /// Element to check (element JSON file).
        element: String,
        /// Expected flavor of the element.
        #[arg(long, value_enum)]
        flavor: FlavorArg,
    },
    /// Express kappa_{1,n,d} on the g-loop quiver in single-variable
    /// generators and print the verification report (JSON).
    VerifyTheorem {
        /// Number of loops of the quiver.
        #[arg(long)]
        g: usize,
        /// Dimension (number of alphabet slots).
        #[arg(long)]
        n: u32,
        /// Generator degree of the target.
        #[arg(long)]
        d: u32,
        /// Which pipeline(s) to run.
        #[arg(long, value_enum, default_value = "direct")]
        path: PathArg,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Print one census CSV row: quiver,n,degree,wheel_dim,subalg_dim,equal.
    Census {
        /// Quiver description (JSON file).
        quiver: String,
        /// Dimension at the chosen vertex.
        #[arg(long)]
        n: u32,
        /// Alphabet degree of the census row.
        #[arg(long)]
        degree: i32,
        /// Vertex carrying the dimension (default: the quiver's first vertex).
        #[arg(long)]
        vertex: Option<String>,
        #[command(flatten)]
        caps: CapArgs,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 2,
        Error::FlavorMismatch { .. } => 3,
        Error::NotFoundWithinBounds(_) => 4,
        Error::ResourceCap(_) => 5,
        _ => 1,
    }
}

fn read_file(path: &str) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
}

fn read_quiver(path: &str) -> Result<Quiver, Error> {
    Quiver::from_json(&read_file(path)?)
}

fn read_element(path: &str, quiver: &Quiver, flavor: Flavor) -> Result<ShuffleElement, Error> {
    let v: serde_json::Value = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    let el = ShuffleElement::from_json(&v)?;
    if el.flavor != flavor {
        return Err(Error::FlavorMismatch {
            expected: flavor.to_string(),
            found: el.flavor.to_string(),
        });
    }
    if el.quiver != *quiver {
        return Err(Error::Parse(format!(
            "{path}: element quiver does not match the quiver file"
        )));
    }
    Ok(el)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Mul { quiver, a, b, flavor } => {
            let q = read_quiver(&quiver)?;
            let flavor = Flavor::from(flavor);
            let a = read_element(&a, &q, flavor)?;
            let b = read_element(&b, &q, flavor)?;
            let p = shuffle_mul(&a, &b)?;
            println!("{}", p.to_json());
            Ok(0)
        }
        Command::Wheel { quiver, element, flavor } => {
            let q = read_quiver(&quiver)?;
            let flavor = Flavor::from(flavor);
            let el = read_element(&element, &q, flavor)?;
            let ok = match flavor {
                Flavor::Cohomological => wheel_check(&el)?,
                Flavor::KTheoretic => k_wheel_check(&el)?,
            };
            if ok {
                println!("PASS");
                Ok(0)
            } else {
                println!("FAIL");
                for v in wheel_violations(&el)? {
                    println!("violated: {v}");
                }
                Ok(1)
            }
        }
        Command::VerifyTheorem { g, n, d, path, caps } => {
            let report = verify_theorem(g, n, d, path.into(), caps.into())?;
            println!("{report}");
            Ok(0)
        }
        Command::Census { quiver, n, degree, vertex, caps } => {
            let q = read_quiver(&quiver)?;
            let vertex = match vertex {
                Some(v) => {
                    q.vertex_index(&v)?;
                    v
                }
                None => q
                    .vertices
                    .first()
                    .ok_or_else(|| Error::Parse("quiver has no vertices".into()))?
                    .clone(),
            };
            let dim = DimVector::scaled_unit(&vertex, n);
            let (wheel, sub) = graded_dimension_census(&q, &dim, degree, caps.into())?;
            println!(
                "{},{},{},{},{},{}",
                quiver,
                n,
                degree,
                wheel,
                sub,
                sub == wheel
            );
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
