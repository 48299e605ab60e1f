//! Command-line entry point.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::branching::{OffspringDist, DEFAULT_PROGENY_CAP};
use crate::checks;
use crate::error::Error;
use crate::report::{self, ReportRecord};
use crate::rng::DEFAULT_SEED;

#[derive(Debug, Parser)]
#[command(name = "foldpower", version, about = "Verify f(m,c)^m = f(1,c) numerically, exactly and by simulation")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Absolute tolerance for numeric checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,
    /// Also write the report to this file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Record measured runtimes in the CSV runtime_ms column instead of 0.
    #[arg(long, global = true)]
    pub timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Equation {
    /// z = exp(-c(1-z))
    One,
    /// y = exp(-c(1-y^m)/m)
    Two,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// |f(m,c)^m - f(1,c)| against --tol.
    Identity {
        #[arg(long)]
        m: f64,
        #[arg(long)]
        c: f64,
    },
    /// Solve the extinction equation and compare with the series.
    Solve {
        #[arg(long, value_enum, default_value_t = Equation::Two)]
        eq: Equation,
        #[arg(long, default_value_t = 1.0)]
        m: f64,
        #[arg(long)]
        c: f64,
    },
    /// Exact check of g(p/q,x)^p = g(1,x)^q.
    Coeffs {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        q: u64,
        #[arg(long, default_value_t = 16)]
        degree: usize,
    },
    /// Multinomial sum over compositions against (n+1)^(n-1) m^n.
    Lemma22 {
        #[arg(long)]
        m: u64,
        #[arg(long)]
        n: usize,
    },
    /// The (p,q) composition-sum identity.
    Lemma23 {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        n: usize,
    },
    /// Symbolic Lagrange inversion terms against the terms of f(m,c).
    Lagrange {
        #[arg(long)]
        m: u64,
        #[arg(long = "k-max", default_value_t = 13)]
        k_max: usize,
        /// Print one row per term.
        #[arg(long)]
        terms: bool,
    },
    /// Brute-force enumeration oracles.
    Forests {
        #[arg(long, value_enum, default_value_t = ForestKind::Rooted)]
        kind: ForestKind,
        #[arg(long)]
        n: usize,
        /// Edge colors (m or p).
        #[arg(long, default_value_t = 1)]
        edge_colors: u32,
        /// Root colors (q).
        #[arg(long, default_value_t = 1)]
        root_colors: u32,
    },
    /// Monte Carlo extinction probability.
    Gw {
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_PROGENY_CAP)]
        cap: u64,
    },
    /// Empirical total-progeny frequencies against the Borel terms.
    Borel {
        #[arg(long)]
        c: f64,
        #[arg(long = "k-max", default_value_t = 10)]
        k_max: u64,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
    },
    /// Largest-component fraction of random r-uniform hypergraphs.
    Graph {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        r: usize,
        #[arg(long)]
        c: f64,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Allowed deviation from theory (c > 1) or bound on the fraction (c <= 1).
        #[arg(long, default_value_t = 0.01)]
        tolerance: f64,
    },
    /// Run the full acceptance battery.
    Suite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ForestKind {
    /// Labeled trees on [n].
    Trees,
    /// Rooted forests with colored edges and roots.
    Rooted,
    /// Edge-colored trees on {0..n}, cut at vertex 0.
    ColoredTrees,
    /// Doubly colored roots, tallied by each root color.
    RootGrouping,
}

fn execute(cmd: &Command, g: &GlobalOpts) -> Result<Vec<ReportRecord>, Error> {
    let tol = g.tol;
    let seed = g.seed;
    Ok(match *cmd {
        Command::Identity { m, c } => vec![checks::identity(m, c, tol)?],
        Command::Solve { eq: Equation::One, c, .. } => vec![checks::solve(1.0, c, tol)?],
        Command::Solve { eq: Equation::Two, m, c } => vec![checks::solve(m, c, tol)?],
        Command::Coeffs { p, q, degree } => vec![checks::coeffs(p, q, degree)?],
        Command::Lemma22 { m, n } => vec![checks::lemma22(m, n)?],
        Command::Lemma23 { p, q, n } => vec![checks::lemma23(p, q, n)?],
        Command::Lagrange { m, k_max, terms } => {
            if terms {
                checks::lagrange_table(m, k_max)?
            } else {
                vec![checks::lagrange(m, k_max)?]
            }
        }
        Command::Forests { kind, n, edge_colors, root_colors } => vec![match kind {
            ForestKind::Trees => checks::labeled_trees(n)?,
            ForestKind::Rooted => checks::rooted_forests(n, edge_colors, root_colors)?,
            ForestKind::ColoredTrees => checks::colored_trees(n, edge_colors)?,
            ForestKind::RootGrouping => checks::root_color_grouping(n, edge_colors, root_colors)?,
        }],
        Command::Gw { m, c, trials, cap } => {
            let d = if m == 1 { OffspringDist::poisson(c)? } else { OffspringDist::m_fold(m, c)? };
            let allowance = if c <= 1.0 { checks::CENSORING_ALLOWANCE } else { 0.0 };
            vec![checks::gw_against_series(d, trials, cap, seed, allowance)?]
        }
        Command::Borel { c, k_max, trials } => checks::borel(c, k_max, trials, seed)?,
        Command::Graph { n, r, c, trials, tolerance } => vec![checks::giant(n, r, c, trials, seed, tolerance)?],
        Command::Suite => checks::suite(seed)?,
    })
}

fn render(records: &[ReportRecord], g: &GlobalOpts) -> String {
    match g.format {
        Format::Table => report::to_table(records),
        Format::Json => report::to_json(records),
        Format::Csv => {
            let mut buf = Vec::new();
            report::write_csv(records, g.timings, &mut buf).expect("in-memory write");
            String::from_utf8(buf).expect("csv is utf-8")
        }
    }
}

/// Parses `argv` and runs it. Exit code 0 when every check passes, 1 when
/// any fails, 2 on usage or input errors.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let g = &cli.global;
    if let Some(jobs) = g.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return 2;
        }
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global();
    }

    let records = match execute(&cli.command, g) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::NoConvergence { .. } | Error::RouteMismatch { .. } => 1,
                _ => 2,
            };
        }
    };

    let text = render(&records, g);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes());
    if let Some(path) = &g.out {
        if let Err(e) = fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return 2;
        }
    }
    if report::all_pass(&records) {
        0
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["foldpower", "identity", "--m", "2", "--c", "2", "--tol", "1e-9", "--format", "json"])
            .unwrap();
        assert_eq!(cli.global.tol, 1e-9);
        assert_eq!(cli.global.format, Format::Json);
        assert_eq!(cli.global.seed, 42);
        assert!(matches!(cli.command, Command::Identity { m, c } if m == 2.0 && c == 2.0));
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run(["foldpower", "nonsense"]), 2);
        assert_eq!(run(["foldpower", "identity", "--m", "2"]), 2);
        assert_eq!(run(["foldpower", "lemma22", "--m", "2", "--n", "x"]), 2);
    }

    #[test]
    fn input_errors_exit_2() {
        assert_eq!(run(["foldpower", "forests", "--kind", "trees", "--n", "9"]), 2);
        assert_eq!(run(["foldpower", "identity", "--m=-1", "--c", "2"]), 2);
    }

    #[test]
    fn passing_checks_exit_0() {
        assert_eq!(run(["foldpower", "lemma22", "--m", "2", "--n", "2"]), 0);
        assert_eq!(run(["foldpower", "coeffs", "--p", "2", "--q", "1", "--degree", "16"]), 0);
        assert_eq!(run(["foldpower", "identity", "--m", "2", "--c", "2", "--tol", "1e-9"]), 0);
    }
}
