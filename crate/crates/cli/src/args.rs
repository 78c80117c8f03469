use std::path::PathBuf;

use anyhow::{anyhow, bail};
use clap::{Args, Parser, Subcommand, ValueEnum};
use opmeans::operator::OperatorMeanKind;
use opmeans::scalar::{ScalarMeanKind, Weight};

/// Weighted logarithmic and identric means of scalars and SPD matrices.
#[derive(Debug, Parser)]
#[command(name = "means", version)]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Loewner-order tolerance (relative to max(1, scale)).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON file with campaign settings; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Weighted mean of two positive numbers.
    Scalar {
        /// arith, geo, harm, log, identric, heron or stolarsky
        #[arg(long)]
        kind: String,
        /// Weight in [0, 1]; decimal or fraction such as 1/3.
        #[arg(long, default_value = "1/2")]
        t: String,
        /// Stolarsky parameter.
        #[arg(long, allow_hyphen_values = true)]
        r: Option<f64>,
        a: f64,
        b: f64,
    },
    /// Weighted operator mean of two SPD matrices given as {"dim", "data"} files.
    Matrix {
        /// arith, geo, harm, log or identric
        #[arg(long)]
        kind: String,
        #[arg(long, default_value = "1/2")]
        t: String,
        a: PathBuf,
        b: PathBuf,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run property campaigns.
    Verify(VerifyArgs),
    /// Counterexample searches.
    Search {
        #[arg(value_enum)]
        target: SearchTarget,
        #[arg(long)]
        iters: Option<usize>,
        /// Fix the weight instead of sampling it.
        #[arg(long)]
        t: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SearchTarget {
    Heronian,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// chain, identric-chain, block, invariance, monotone, hh, scalar, axioms or all
    pub suite: String,
    /// Comma-separated dimensions.
    #[arg(long, alias = "dim", value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Single weight replacing the default grid.
    #[arg(long)]
    pub t: Option<String>,
    /// Function for the monotone suite.
    #[arg(long = "fn")]
    pub function: Option<String>,
    /// Largest Loewner-matrix order for the monotone suite.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub q: Option<String>,
    #[arg(long)]
    pub r: Option<String>,
}

/// A decimal, or a fraction `p/q` of two decimals.
pub fn parse_weight(s: &str) -> anyhow::Result<Weight> {
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| anyhow!("bad numerator in {s:?}"))?;
            let q: f64 = q.trim().parse().map_err(|_| anyhow!("bad denominator in {s:?}"))?;
            if q == 0.0 {
                bail!("zero denominator in {s:?}");
            }
            p / q
        }
        None => s.trim().parse().map_err(|_| anyhow!("bad weight {s:?}"))?,
    };
    Ok(Weight::new(v)?)
}

pub fn scalar_kind(s: &str, r: Option<f64>) -> anyhow::Result<ScalarMeanKind> {
    let kind = match s {
        "arith" | "arithmetic" => ScalarMeanKind::Arithmetic,
        "geo" | "geometric" => ScalarMeanKind::Geometric,
        "harm" | "harmonic" => ScalarMeanKind::Harmonic,
        "log" | "logarithmic" => ScalarMeanKind::Logarithmic,
        "identric" => ScalarMeanKind::Identric,
        "heron" | "heronian" => ScalarMeanKind::HeronianWeighted,
        "stolarsky" => {
            let r = r.ok_or_else(|| anyhow!("--kind stolarsky needs --r"))?;
            if !r.is_finite() {
                bail!("Stolarsky parameter must be finite");
            }
            ScalarMeanKind::Stolarsky(r)
        }
        _ => bail!("unknown scalar kind {s:?}"),
    };
    if r.is_some() && !matches!(kind, ScalarMeanKind::Stolarsky(_)) {
        bail!("--r only applies to --kind stolarsky");
    }
    Ok(kind)
}

pub fn operator_kind(s: &str) -> anyhow::Result<OperatorMeanKind> {
    Ok(match s {
        "arith" | "arithmetic" => OperatorMeanKind::Arithmetic,
        "geo" | "geometric" => OperatorMeanKind::Geometric,
        "harm" | "harmonic" => OperatorMeanKind::Harmonic,
        "log" | "logarithmic" => OperatorMeanKind::Logarithmic,
        "identric" => OperatorMeanKind::Identric,
        _ => bail!("unknown operator mean {s:?}"),
    })
}
