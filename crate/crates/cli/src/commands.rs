use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use spinstar_core::analysis::{
    concurrence_columns, scan_trajectory, uniform_grid, verify, DetectorContext, DetectorRegistry,
    EventList, QuantityCatalog, Roles, Scenario, TimeSeries, Trajectory, VerifyOptions,
    VerifyReport,
};
use spinstar_core::model::StarModel;
use spinstar_core::tolerances::Tolerances;

use crate::args::{
    EventsArgs, EvolveArgs, Format, ModelArgs, ScenarioArg, TrajectoryArgs, VerifyArgs,
};
use crate::error::{CliError, Result};
use crate::output::{gnuplot_script, render_series};

/// Fully validated description of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: StarModel,
    pub scenario: Scenario,
    pub t_max: f64,
    pub steps: usize,
    pub quantities: Vec<String>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub gnuplot: bool,
}

impl RunConfig {
    pub fn from_evolve(args: &EvolveArgs) -> Result<Self> {
        let model = resolve_model(&args.model)?;
        let scenario = resolve_scenario(&args.trajectory, &model)?;
        let roles = Roles::new(&model, &scenario);
        let quantities = if args.quantities.is_empty() {
            concurrence_columns(&roles)
        } else {
            args.quantities
                .iter()
                .map(|q| q.trim().to_string())
                .collect()
        };
        QuantityCatalog::global().resolve(&quantities, &roles)?;
        uniform_grid(args.trajectory.tmax, args.trajectory.steps)?;
        if args.gnuplot && (args.trajectory.output.is_none() || args.format != Format::Csv) {
            return Err(CliError::Usage(
                "--gnuplot needs --output and CSV format".into(),
            ));
        }
        Ok(Self {
            model,
            scenario,
            t_max: args.trajectory.tmax,
            steps: args.trajectory.steps,
            quantities,
            output: args.trajectory.output.clone(),
            format: args.format,
            gnuplot: args.gnuplot,
        })
    }
}

pub fn resolve_model(args: &ModelArgs) -> Result<StarModel> {
    let base = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            StarModel::from_config_str(&text)?
        }
        None => StarModel::default(),
    };
    Ok(StarModel::new(
        args.ligands.unwrap_or(base.ligand_count()),
        args.coupling.unwrap_or(base.coupling()),
    )?)
}

pub fn resolve_scenario(args: &TrajectoryArgs, model: &StarModel) -> Result<Scenario> {
    if args.amps.is_some() && args.scenario != ScenarioArg::CustomAmplitudes {
        return Err(CliError::Usage(
            "--amps requires --scenario custom-amplitudes".into(),
        ));
    }
    if args.excited_ligand.is_some() && args.scenario != ScenarioArg::Lops {
        return Err(CliError::Usage(
            "--excited-ligand requires --scenario lops".into(),
        ));
    }
    let scenario = match args.scenario {
        ScenarioArg::Cops => Scenario::Cops,
        ScenarioArg::Lops => Scenario::Lops {
            excited_ligand: args.excited_ligand.unwrap_or(model.ligand_count()),
        },
        ScenarioArg::CustomAmplitudes => {
            let amps: Vec<Complex64> = args
                .amps
                .clone()
                .ok_or_else(|| CliError::Usage("custom-amplitudes needs --amps".into()))?;
            Scenario::CustomAmplitudes(amps)
        }
    };
    scenario.initial(model)?;
    Ok(scenario)
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

pub fn run_scan(config: &RunConfig) -> Result<TimeSeries> {
    let trajectory = Trajectory::new(&config.model, &config.scenario)?;
    let grid = uniform_grid(config.t_max, config.steps)?;
    Ok(scan_trajectory(&trajectory, &grid, &config.quantities)?)
}

/// Scan and write the series (and optional gnuplot script).
pub fn cmd_evolve(config: &RunConfig, stdout: &mut dyn Write) -> Result<TimeSeries> {
    let series = run_scan(config)?;
    let text = render_series(&series, config.format)?;
    write_output(config.output.as_deref(), &text, stdout)?;
    if config.gnuplot {
        let csv = config.output.as_deref().expect("validated");
        let script_path = gnuplot_path(csv);
        let script = gnuplot_script(csv, &series);
        fs::write(&script_path, script).map_err(|e| CliError::io(&script_path, e))?;
    }
    Ok(series)
}

pub fn gnuplot_path(csv: &Path) -> PathBuf {
    let mut name = csv.as_os_str().to_owned();
    name.push(".gp");
    PathBuf::from(name)
}

/// Run detectors and write the merged event list as JSON.
pub fn cmd_events(args: &EventsArgs, stdout: &mut dyn Write) -> Result<EventList> {
    let model = resolve_model(&args.model)?;
    let scenario = resolve_scenario(&args.trajectory, &model)?;
    let trajectory = Trajectory::new(&model, &scenario)?;
    let grid = uniform_grid(args.trajectory.tmax, args.trajectory.steps)?;
    let mut ctx = DetectorContext::new(&trajectory, &grid);
    ctx.tolerances = Tolerances::from_env();
    if let Some(tol) = args.tolerance {
        if tol.is_nan() || tol <= 0.0 {
            return Err(CliError::Usage(format!(
                "--tolerance must be positive, got {tol}"
            )));
        }
        ctx.tolerances.exact_w = tol;
    }
    let names: Vec<String> = args.detector.iter().map(|d| d.trim().to_string()).collect();
    let events = DetectorRegistry::global().run(&names, &ctx)?;
    let mut text = serde_json::to_string_pretty(&events).expect("event lists serialize");
    text.push('\n');
    write_output(args.trajectory.output.as_deref(), &text, stdout)?;
    Ok(events)
}

/// Run the verification suite, print the table, and fail with exit code 1 on any failing row.
pub fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<VerifyReport> {
    let model = resolve_model(&args.model)?;
    let mut opts = VerifyOptions {
        steps: args.steps,
        deep: args.deep,
        ..VerifyOptions::default()
    };
    if let Some(tol) = args.tolerance {
        if tol.is_nan() || tol <= 0.0 {
            return Err(CliError::Usage(format!(
                "--tolerance must be positive, got {tol}"
            )));
        }
        opts.tolerance = tol;
    }
    if let Some(seed) = args.seed {
        opts.seed = seed;
    }
    let report = verify(&model, &opts)?;
    let table = crate::output::render_report(&report);
    stdout
        .write_all(table.as_bytes())
        .map_err(|e| CliError::io("<stdout>", e))?;
    if !report.passed() {
        return Err(CliError::VerificationFailed(
            report.failures().map(|f| f.check.clone()).collect(),
        ));
    }
    Ok(report)
}

/// Build the run configuration for `evolve` and execute it.
pub fn evolve(args: &EvolveArgs, stdout: &mut dyn Write) -> Result<TimeSeries> {
    cmd_evolve(&RunConfig::from_evolve(args)?, stdout)
}
