use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hce", version, about = "Win statistics and plots for hierarchical composite endpoints")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Win probability, win odds, win ratio and net benefit with cumulative rows.
    Summarize(SummarizeArgs),
    /// Render SVG plots with metadata sidecars.
    Plot(PlotArgs),
    /// Win-odds landscape over hazard ratio and mean difference.
    Sunset(SunsetArgs),
    /// Simulate a trial from a scenario file.
    Simulate(SimulateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CiArg {
    Analytic,
    Bootstrap,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum InputFormat {
    /// One row per subject: SUBJID, ARM, GROUPN, AVAL0.
    Composed,
    /// Per-component event flags and times plus the continuous value.
    Wide,
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Subject-level CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Component configuration JSON (defaults to the seven-component kidney layout).
    #[arg(long)]
    pub components: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "composed")]
    pub format: InputFormat,
    /// Arm labels as they appear in the ARM column: ACTIVE,CONTROL.
    #[arg(long, default_value = "Active,Control")]
    pub arm_labels: String,
}

#[derive(Args, Debug, Clone)]
pub struct StatsArgs {
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value = "analytic")]
    pub ci: CiArg,
    #[arg(long, default_value_t = hce_core::win::DEFAULT_BOOT_REPS)]
    pub boot_reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct SummarizeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub stats: StatsArgs,
    /// Directory for summary.json.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print the JSON document instead of the text summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlotKind {
    Shift,
    Binary,
    Mosaic,
    Mosaic2d,
    Maraca,
    Components,
}

impl PlotKind {
    pub fn name(self) -> &'static str {
        match self {
            PlotKind::Shift => "shift",
            PlotKind::Binary => "binary",
            PlotKind::Mosaic => "mosaic",
            PlotKind::Mosaic2d => "mosaic2d",
            PlotKind::Maraca => "maraca",
            PlotKind::Components => "components",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieModeArg {
    Triangle,
    Ordered,
}

#[derive(Args, Debug)]
pub struct PlotArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[command(flatten)]
    pub stats: StatsArgs,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "shift,binary,mosaic,mosaic2d,maraca,components")]
    pub plots: Vec<PlotKind>,
    /// Tie display in the two-dimensional mosaic.
    #[arg(long, value_enum, default_value = "triangle")]
    pub tie_mode: TieModeArg,
    /// Mosaic gap after this category (defaults to 7 for the eight-category kidney view).
    #[arg(long)]
    pub split: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodArg {
    Cf,
    Mc,
}

#[derive(Args, Debug)]
pub struct SunsetArgs {
    #[arg(long, default_value = "0.5,1.15", allow_hyphen_values = true)]
    pub hr_range: String,
    #[arg(long, default_value = "-0.5,2.0", allow_hyphen_values = true)]
    pub delta_range: String,
    /// Points per axis: N or HRxDELTA.
    #[arg(long, default_value = "60")]
    pub grid: String,
    /// Control-arm probability of any event within follow-up.
    #[arg(long, default_value_t = 0.5)]
    pub p_event: f64,
    #[arg(long, default_value_t = 4.0)]
    pub sd: f64,
    /// Follow-up in days.
    #[arg(long, default_value_t = 1095.0)]
    pub tau: f64,
    #[arg(long, value_enum, default_value = "cf")]
    pub method: MethodArg,
    /// Subjects per arm for Monte Carlo cells.
    #[arg(long, default_value_t = 500)]
    pub n: usize,
    /// Replicates per Monte Carlo cell.
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Comma-separated contour levels (default: ten levels from 1.00 to 1.86).
    #[arg(long)]
    pub iso: Option<String>,
    /// Level drawn as a solid grey line; `none` disables it.
    #[arg(long, default_value = "1.2")]
    pub highlight: String,
    /// Marker at HR,WO; the mean difference is solved from the closed form. Repeatable.
    #[arg(long)]
    pub anchor: Vec<String>,
    /// CSV of HR,DELTA[,LABEL] points drawn on top.
    #[arg(long)]
    pub overlay: Option<PathBuf>,
    /// Shade the convex hull of the overlay points.
    #[arg(long)]
    pub hull: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Scenario JSON.
    #[arg(long)]
    pub scenario: PathBuf,
    /// Override subjects per arm.
    #[arg(long)]
    pub n: Option<usize>,
    /// Override the scenario seed.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "Active,Control")]
    pub arm_labels: String,
    /// Directory for dataset.csv and components.json.
    #[arg(long)]
    pub out: PathBuf,
}
