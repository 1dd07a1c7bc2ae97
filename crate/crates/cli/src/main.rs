//! `hypcone`: batch verifications over graphs, group actions, cone-offs and
//! presentations. Reports go to stdout; exit status is 0 on success, 2 when
//! a check fails and 1 on input or usage errors.

mod commands;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::Format;

#[derive(Parser, Debug)]
#[command(name = "hypcone", version, about = "Hyperbolic graphs, cone-offs and small cancellation at desk scale")]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

/// A finite metric space given as a graph or as a distance matrix.
#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Space {
    /// Graph JSON: {"vertices": [...], "edges": [[u, v, length], ...]}.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Metric JSON: {"points": n, "dist": [[...], ...]}, null for infinity.
    #[arg(long)]
    metric: Option<PathBuf>,
}

/// An infinite group seen through a ball of its Cayley graph.
#[derive(Args, Debug)]
pub struct Window {
    /// Presentation file (free or C'(1/6)).
    #[arg(long)]
    presentation: PathBuf,
    /// Ball radius.
    #[arg(long)]
    radius: usize,
    /// Element acting by left multiplication.
    #[arg(long)]
    word: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Four-point hyperbolicity constant with a witness quadruple.
    Delta {
        #[command(flatten)]
        space: Space,
        /// Scan variant.
        #[arg(long, value_enum, default_value = "parallel")]
        scan: commands::Scan,
    },
    /// Gromov product ⟨x, y⟩_z.
    Gromov {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long)]
        z: usize,
    },
    /// Exact r-capacity of a region (all points by default).
    Capacity {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        r: f64,
        #[arg(long, value_delimiter = ',')]
        region: Option<Vec<usize>>,
    },
    /// Greedy maximal r-separated net; with --radius, the bounded-geometry bound.
    Net {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        r: f64,
        #[arg(long)]
        radius: Option<f64>,
    },
    /// α-quasi-convexity of a vertex set; --delta adds the strong variant.
    Quasiconvex {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// max_x |{g : d(x, gx) ≤ r}| for a finite action.
    Properness {
        #[command(flatten)]
        space: Space,
        #[arg(long)]
        action: PathBuf,
        #[arg(long)]
        r: f64,
    },
    /// Translation length and min-set of a group element.
    Translation {
        #[command(flatten)]
        target: commands::ElementTarget,
    },
    /// Elliptic / loxodromic verdict from an orbit; --rho adds the power threshold.
    Classify {
        #[command(flatten)]
        target: commands::ElementTarget,
        /// Base point (defaults to vertex 0, the identity in a window).
        #[arg(long, default_value_t = 0)]
        base: usize,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long)]
        rho: Option<f64>,
    },
    /// Graph on G × S₀ with the free G-action and its comparison constants.
    OrbitGraph {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        action: PathBuf,
        #[arg(long)]
        r: f64,
    },
    /// Quotient metric by a subgroup; --subdivide prints the barycentric subdivision instead.
    Quotient {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        action: PathBuf,
        /// Elements generating K (defaults to the whole group).
        #[arg(long, value_delimiter = ',')]
        subgroup: Option<Vec<usize>>,
        #[arg(long)]
        subdivide: bool,
    },
    /// Cone-off of a graph along a cone family.
    Coneoff {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        family: PathBuf,
        /// Expand the family over this action first.
        #[arg(long)]
        action: Option<PathBuf>,
    },
    /// δ, Δ(Q, X) and inj(Q) of a family.
    ScParams {
        #[command(flatten)]
        params: commands::ParamInputs,
    },
    /// Small-cancellation hypotheses against configured constants.
    ScCheck {
        #[command(flatten)]
        params: commands::ParamInputs,
        /// Constants file; falls back to $HYPCONE_CONSTANTS.
        #[arg(long)]
        constants: Option<PathBuf>,
    },
    /// Compare X/K with the cone-off quotient.
    QiCheck {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        action: PathBuf,
        #[arg(long)]
        family: PathBuf,
        /// Elements generating K.
        #[arg(long, value_delimiter = ',', required = true)]
        subgroup: Vec<usize>,
    },
    /// Longest piece of a presentation.
    Pieces {
        #[arg(long)]
        presentation: PathBuf,
    },
    /// Metric small cancellation C'(λ).
    CPrime {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long, default_value = "1/6")]
        lambda: String,
    },
    /// Dehn's algorithm on a word.
    Dehn {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Commensurability gⁿ = u hᵐ u⁻¹ in a free group.
    Commensurable {
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        /// Fix generator names (defaults to the letters used).
        #[arg(long)]
        presentation: Option<PathBuf>,
    },
    /// Ball of a Cayley graph with generator actions.
    CayleyBall {
        #[arg(long)]
        presentation: PathBuf,
        #[arg(long)]
        radius: usize,
    },
    /// The two-generator relator x(y⁻¹xy)x²(y⁻¹xy)⋯x¹⁰(y⁻¹xy) = y and its C'(1/6) check.
    H2,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            let message: Vec<&str> = rendered
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:"))
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("{}", message.join(" "));
            return ExitCode::from(1);
        }
    };
    let result = commands::run(&cli.command).and_then(|o| output::render(&o, cli.format).map(|s| (s, o.passed)));
    match result {
        Ok((text, passed)) => {
            print!("{text}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::from(1)
        }
    }
}
