//! Pipeline orchestration: load inputs, compute one view, write artifacts
//! and a manifest.

mod format;
mod manifest;
pub mod render;

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

pub use format::{eur_m, eur_m_short, thousands};
pub use manifest::{atomic_write, sha256_file, sha256_hex, InputDigest, Manifest, OutputDigest};
pub use render::Artifact;

use crate::counterfactual::bestxi_table;
use crate::error::{Error, Result};
use crate::estimators::PoissonOptions;
use crate::flowledger::{aggregate_stats, build_flows, country_summaries, BilateralFlow, CountrySummary};
use crate::gravity::synthetic::{generate, SyntheticConfig, TRUE_COLONIAL};
use crate::gravity::{
    build_gravity_dataset, coloniser_summary, colony_losses, run_specifications, ColonialCoding, GravityResults,
    COLONIAL,
};
use crate::ingest::{
    load_indicators, load_players, CountryResolver, IndicatorReport, IndicatorTable, IngestReport, PlayerRecord,
};

pub const TABLE1_ROWS: usize = 10;
pub const TABLE2_ROWS: usize = 15;
pub const DEFAULT_TOP_CORRIDORS: usize = 15;
/// Allowed distance between a synthetic estimate and the true colonial coefficient.
pub const SELFTEST_TOLERANCE: f64 = 0.15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Text => "txt",
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "name")]
pub enum Command {
    Stats,
    Flows,
    BestXi,
    Gravity { synthetic: bool },
    Colonial,
    MapData,
    Corridors { top: usize },
    SelfTest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stats => "stats",
            Command::Flows => "flows",
            Command::BestXi => "bestxi",
            Command::Gravity { .. } => "gravity",
            Command::Colonial => "colonial",
            Command::MapData => "mapdata",
            Command::Corridors { .. } => "corridors",
            Command::SelfTest => "selftest",
        }
    }

    fn needs_players(&self) -> bool {
        !matches!(self, Command::SelfTest | Command::Gravity { synthetic: true })
    }

    fn needs_indicators(&self) -> bool {
        matches!(self, Command::Gravity { synthetic: false })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub players: Option<PathBuf>,
    pub wdi: Option<PathBuf>,
    pub colonial: Option<PathBuf>,
    pub overrides: Option<PathBuf>,
    pub out: PathBuf,
    pub format: OutputFormat,
    pub seed: Option<u64>,
    pub wdi_year: i32,
    pub wdi_fallback_year: i32,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        RunConfig {
            command,
            players: None,
            wdi: None,
            colonial: None,
            overrides: None,
            out: PathBuf::from("out"),
            format: OutputFormat::Text,
            seed: None,
            wdi_year: 2024,
            wdi_fallback_year: 2023,
        }
    }

    fn inputs(&self) -> Vec<(&'static str, &Path)> {
        [("players", &self.players), ("wdi", &self.wdi), ("colonial", &self.colonial), ("overrides", &self.overrides)]
            .into_iter()
            .filter_map(|(role, p)| p.as_deref().map(|p| (role, p)))
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.command.needs_players() && self.players.is_none() {
            return Err(Error::Config(format!("`{}` requires --players", self.command.name())));
        }
        if self.command.needs_indicators() && self.wdi.is_none() {
            return Err(Error::Config(format!("`{}` requires --wdi", self.command.name())));
        }
        for (role, path) in self.inputs() {
            if !path.is_file() {
                return Err(Error::Config(format!("--{role} {} does not exist", path.display())));
            }
        }
        Ok(())
    }

    fn synthetic(&self) -> SyntheticConfig {
        let base = SyntheticConfig::default();
        SyntheticConfig { seed: self.seed.unwrap_or(base.seed), ..base }
    }
}

/// Loaded inputs and the corridor table every view derives from.
#[derive(Debug, Clone)]
pub struct Pipeline {
    pub resolver: CountryResolver,
    pub players: Vec<PlayerRecord>,
    pub ingest: IngestReport,
    pub indicators: IndicatorTable,
    pub indicator_report: Option<IndicatorReport>,
    pub coding: ColonialCoding,
    pub flows: Vec<BilateralFlow>,
}

impl Pipeline {
    pub fn load(cfg: &RunConfig) -> Result<Self> {
        let mut resolver = CountryResolver::bundled();
        if let Some(p) = &cfg.overrides {
            resolver = resolver.with_override_file(p)?;
        }
        let (players, ingest) = match &cfg.players {
            Some(p) => load_players(p, &resolver)?,
            None => (Vec::new(), IngestReport::default()),
        };
        let (indicators, indicator_report) = match &cfg.wdi {
            Some(p) => {
                let (t, r) = load_indicators(p, cfg.wdi_year, cfg.wdi_fallback_year)?;
                (t, Some(r))
            }
            None => (IndicatorTable::new(), None),
        };
        let coding = match &cfg.colonial {
            Some(p) => ColonialCoding::load(p, &resolver)?,
            None => ColonialCoding::bundled(&resolver)?,
        };
        let flows = build_flows(&players);
        Ok(Pipeline { resolver, players, ingest, indicators, indicator_report, coding, flows })
    }

    pub fn summaries(&self) -> Vec<CountrySummary> {
        country_summaries(&self.flows, &self.indicators)
    }

    pub fn gravity(&self, opts: &PoissonOptions) -> Result<(GravityResults, usize)> {
        let ds = build_gravity_dataset(&self.flows, &self.indicators, &self.coding);
        if !ds.excluded.is_empty() {
            log::info!("gravity: {} corridors lack indicator coverage", ds.excluded.len());
        }
        Ok((run_specifications(&ds.observations, opts)?, ds.excluded.len()))
    }
}

/// Result of a completed run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub status: i32,
    /// Rendering of the primary artifact.
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

/// Exit status for an error: 2 for estimation failures, 1 for anything
/// wrong with the inputs or configuration.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Estimation(_) => 2,
        _ => 1,
    }
}

fn selftest(cfg: &RunConfig, opts: &PoissonOptions) -> Result<(Vec<Artifact>, i32)> {
    let data = generate(&cfg.synthetic());
    let results = run_specifications(&data.observations, opts)?;
    let mut status = 0;
    let mut checks = Vec::new();
    for (col, t) in results.columns.iter().zip(&results.table.columns) {
        let est = col.fit.coefficient(COLONIAL).unwrap_or(f64::NAN);
        let gated = col.spec.estimator != crate::estimators::Estimator::Ols;
        let pass = (est - TRUE_COLONIAL).abs() <= SELFTEST_TOLERANCE;
        if gated && !pass {
            status = 2;
        }
        checks.push(serde_json::json!({
            "column": t.label,
            "estimator": t.estimator,
            "destination_fe": t.destination_fe,
            "colonial": est,
            "truth": TRUE_COLONIAL,
            "tolerance": SELFTEST_TOLERANCE,
            "gated": gated,
            "pass": pass,
        }));
    }
    let summary = match cfg.format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&serde_json::json!({
                "seed": data.config.seed,
                "corridors": data.observations.len(),
                "checks": checks,
            }))
            .expect("serialises");
            s.push('\n');
            s
        }
        _ => {
            let mut s = format!(
                "synthetic corridors: {} (seed {})\ntrue colonial coefficient: {TRUE_COLONIAL}\n",
                data.observations.len(),
                data.config.seed
            );
            for c in &checks {
                s.push_str(&format!(
                    "{} {:<7} colonial {:.3}  {}\n",
                    c["column"].as_str().unwrap_or(""),
                    c["estimator"].as_str().unwrap_or(""),
                    c["colonial"].as_f64().unwrap_or(f64::NAN),
                    match (c["gated"].as_bool(), c["pass"].as_bool()) {
                        (Some(false), _) => "(not gated)",
                        (_, Some(true)) => "PASS",
                        _ => "FAIL",
                    }
                ));
            }
            s
        }
    };
    let ext = cfg.format.extension();
    Ok((
        vec![
            Artifact { file: format!("selftest.{ext}"), contents: summary },
            render::gravity(&results, 0, cfg.format),
        ],
        status,
    ))
}

fn compute(cfg: &RunConfig) -> Result<(Vec<Artifact>, i32)> {
    let opts = PoissonOptions::default();
    let fmt = cfg.format;
    match &cfg.command {
        Command::SelfTest => return selftest(cfg, &opts),
        Command::Gravity { synthetic: true } => {
            let data = generate(&cfg.synthetic());
            let results = run_specifications(&data.observations, &opts)?;
            return Ok((vec![render::gravity(&results, 0, fmt)], 0));
        }
        _ => {}
    }
    let p = Pipeline::load(cfg)?;
    let artifacts = match &cfg.command {
        Command::Stats => vec![render::stats(&aggregate_stats(&p.players), &p.ingest, fmt)],
        Command::Flows => vec![
            render::flows(&p.summaries(), TABLE1_ROWS, fmt),
            Artifact { file: "corridors_all.csv".into(), contents: render::corridor_dump(&p.flows) },
        ],
        Command::BestXi => vec![render::bestxi(&bestxi_table(&p.players, &p.indicators), TABLE2_ROWS, fmt)],
        Command::Gravity { .. } => {
            let (results, excluded) = p.gravity(&opts)?;
            vec![render::gravity(&results, excluded, fmt)]
        }
        Command::Colonial => vec![render::colonial(&coloniser_summary(&p.flows, &p.coding), fmt)],
        Command::MapData => render::mapdata(&p.summaries(), &colony_losses(&p.flows, &p.coding), fmt),
        Command::Corridors { top } => vec![render::corridors(&p.flows, *top, fmt)],
        Command::SelfTest => unreachable!(),
    };
    Ok((artifacts, 0))
}

/// Runs one command. The manifest is written first with `complete: false`
/// and rewritten with the output digests once every artifact is on disk.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    fs::create_dir_all(&cfg.out).map_err(|e| Error::io(&cfg.out, e))?;
    let inputs = cfg
        .inputs()
        .into_iter()
        .map(|(role, path)| {
            Ok(InputDigest { role: role.to_owned(), path: path.to_path_buf(), sha256: sha256_file(path)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").to_owned(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        command: cfg.command.name().to_owned(),
        config: serde_json::to_value(cfg).expect("config serialises"),
        inputs,
        outputs: Vec::new(),
        complete: false,
    };
    manifest.write(&cfg.out)?;

    let (artifacts, status) = compute(cfg)?;
    let mut files = Vec::new();
    for a in &artifacts {
        let path = cfg.out.join(&a.file);
        atomic_write(&path, a.contents.as_bytes())?;
        manifest.outputs.push(OutputDigest { file: a.file.clone(), sha256: sha256_hex(a.contents.as_bytes()) });
        files.push(path);
    }
    manifest.complete = true;
    manifest.write(&cfg.out)?;
    Ok(RunOutcome { status, stdout: artifacts.first().map(|a| a.contents.clone()).unwrap_or_default(), files })
}
