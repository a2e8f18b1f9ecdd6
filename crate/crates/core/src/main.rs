use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use legdrain::report::{self, Command, OutputFormat, RunConfig, DEFAULT_TOP_CORRIDORS};

#[derive(Parser, Debug)]
#[command(name = "legdrain", version, about = "Dual-citizenship talent flows, Best XI counterfactuals and gravity estimates")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Player records (id, name, citizenship, market_value_eur, ...)
    #[arg(long, global = true)]
    players: Option<PathBuf>,

    /// WDI extract in long format (country_code, indicator, year, value)
    #[arg(long, global = true)]
    wdi: Option<PathBuf>,

    /// Colonial coding (colony, coloniser); the bundled coding when omitted
    #[arg(long, global = true)]
    colonial: Option<PathBuf>,

    /// Extra country-name overrides (display_name, stats_code, wdi_code, aliases)
    #[arg(long, global = true)]
    overrides: Option<PathBuf>,

    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for synthetic data
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Preferred indicator year; the previous year fills gaps
    #[arg(long, global = true, default_value_t = 2024)]
    wdi_year: i32,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Player and dual-citizenship aggregates
    Stats,
    /// Gross and net flow rankings plus the full corridor dump
    Flows,
    /// Best XI actual vs counterfactual
    Bestxi,
    /// The four gravity specifications
    Gravity {
        /// Estimate on synthetic corridors instead of the inputs
        #[arg(long)]
        synthetic: bool,
    },
    /// Inflows to former colonisers
    Colonial,
    /// Net value per country code and colony losses
    Mapdata,
    /// Largest corridors by value
    Corridors {
        #[arg(long, default_value_t = DEFAULT_TOP_CORRIDORS)]
        top: usize,
    },
    /// Estimator recovery on synthetic data
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Stats => Command::Stats,
        Cmd::Flows => Command::Flows,
        Cmd::Bestxi => Command::BestXi,
        Cmd::Gravity { synthetic } => Command::Gravity { synthetic },
        Cmd::Colonial => Command::Colonial,
        Cmd::Mapdata => Command::MapData,
        Cmd::Corridors { top } => Command::Corridors { top },
        Cmd::Selftest => Command::SelfTest,
    };
    let cfg = RunConfig {
        players: cli.players,
        wdi: cli.wdi,
        colonial: cli.colonial,
        overrides: cli.overrides,
        out: cli.out,
        format: match cli.format {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
        },
        seed: cli.seed,
        wdi_year: cli.wdi_year,
        wdi_fallback_year: cli.wdi_year - 1,
        ..RunConfig::new(command)
    };
    match report::run(&cfg) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.status as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(report::exit_code(&e) as u8)
        }
    }
}
