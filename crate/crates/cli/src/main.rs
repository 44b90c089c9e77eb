//! `thickcurve` command-line front end.
//!
//! Exit codes: 0 on success, 2 when a check runs but fails, 1 on input errors.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "thickcurve", version, about = "Thickness, ropelength and bounded-curvature paths of sampled curves")]
pub struct Cli {
    /// Seed for randomized commands; echoed in every report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,
    /// Read CSV curve files as open curves (CSV input is closed by default).
    #[arg(long, global = true)]
    pub open: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct BoundaryArgs {
    /// Start point, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub p: String,
    /// End point.
    #[arg(long, allow_hyphen_values = true)]
    pub q: String,
    /// Start direction (normalized on input).
    #[arg(long, allow_hyphen_values = true)]
    pub v: String,
    /// End direction (normalized on input).
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
    /// Curvature bound.
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Thickness report: f_k, f_g, mdc, r_o, ropelength.
    Thickness {
        curve: PathBuf,
        /// Per-sample CSV (sample, s, kappa, f_g).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Windowed curvature profile, optionally checked against a bound.
    Curvature {
        curve: PathBuf,
        /// Window half-width in arclength (default 5 mean spacings).
        #[arg(long)]
        window: Option<f64>,
        /// Check the curvature bound `lambda` three equivalent ways.
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        tol: Option<f64>,
        /// Per-sample CSV (sample, s, kappa).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Doubly critical chords and their minimum.
    Mdc {
        curve: PathBuf,
        /// Scan step in arclength (default: every sample).
        #[arg(long)]
        grid_step: Option<f64>,
        /// Minimum arclength separation (default from the focal distance).
        #[arg(long)]
        exclusion: Option<f64>,
        /// CSV of all pairs (s, t, chord, residual_s, residual_t).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Curvature class and critical flag of every sample.
    Classify {
        curve: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        /// Per-sample CSV (sample, kappa, class, critical); class 0 zero, 1 maximal, 2 between.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Runs of segments, arcs and other pieces.
    Decompose {
        curve: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        /// Write the curve with segments and arcs projected onto their fits.
        #[arg(long)]
        reconstruct: Option<PathBuf>,
    },
    /// Thickness equals half the mdc; straight runs are flanked by long arcs.
    #[command(name = "check-thm2")]
    CheckThm2 {
        curve: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Constant curvature whenever half the mdc exceeds the ball radius.
    #[command(name = "check-thm3")]
    CheckThm3 {
        curve: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Shortest CLC paths for boundary data.
    ClcPlan {
        #[command(flatten)]
        boundary: BoundaryArgs,
        /// Also run the discrete oracle as referee (coplanar data only).
        #[arg(long)]
        oracle: bool,
        /// Write the best path sampled at `--samples` points.
        #[arg(long)]
        curve_out: Option<PathBuf>,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
    /// Arc/segment structure and containment of an open curve.
    ClcVerify {
        curve: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
    /// Discrete shortest polyline with bounded turning (coplanar data).
    Oracle {
        #[command(flatten)]
        boundary: BoundaryArgs,
        #[arg(long, default_value_t = 256)]
        segments: usize,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        /// Inner L-BFGS iterations per augmented Lagrangian round.
        #[arg(long, default_value_t = 60)]
        iters: usize,
        /// Leave the end direction free.
        #[arg(long)]
        start_only: bool,
        #[arg(long)]
        curve_out: Option<PathBuf>,
    },
    /// Ropelength descent under a curvature cap.
    Relax {
        curve: PathBuf,
        #[arg(long)]
        cap: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        #[arg(long, default_value_t = 1e-3)]
        r_o_tol: f64,
        #[arg(long)]
        min_r_o: Option<f64>,
        /// Trace CSV (step, length, r_o, ropelength, accepted).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        curve_out: Option<PathBuf>,
    },
    /// Write an analytic fixture curve document.
    Generate {
        /// One of circle, ellipse, stadium, rounded_square, clc,
        /// example1_offset_circle, torus_knot_sample, bumped_circle.
        kind: String,
        /// Fixture parameters as key=value.
        #[arg(long = "param", short = 'P', value_parser = commands::parse_key_value, allow_hyphen_values = true)]
        params: Vec<(String, f64)>,
    },
    /// Upper semicontinuity of r_o and lower of mdc along a sequence whose
    /// last member is the limit.
    Semicontinuity {
        #[arg(required = true, num_args = 2..)]
        curves: Vec<PathBuf>,
        /// Sequence index whose tail is compared with the limit (default: the
        /// last member before the limit).
        #[arg(long)]
        tail_start: Option<usize>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(commands::Outcome::Pass) => ExitCode::SUCCESS,
        Ok(commands::Outcome::Fail) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
