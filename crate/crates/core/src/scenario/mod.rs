//! Config-driven runs of the full invariant suite.
//!
//! A run builds Alice's profile from the config, applies every listed boost,
//! executes the requested checks in order, and writes `report.json` plus CSV
//! sample dumps into the output directory.

mod checks;
mod config;
mod report;

use std::path::{Path, PathBuf};

use serde_json::json;

pub use config::{load_config, CheckName, ScenarioConfig, StateKind, StateParams};
pub use report::{CheckRecord, Diagnostics, Metric, ReportMeta, ScenarioReport};

use crate::blip::RegularisationKernel;
use crate::classical;
use crate::error::{Error, Result};
use crate::grid::{Axis, SampledFunction};
use crate::spectral;
use checks::Context;

pub const TOOL_NAME: &str = "lcdoppler";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Runs every check without touching the filesystem, except to read a
/// custom sample file. A state that cannot be built errors every check.
pub fn evaluate(config: &ScenarioConfig) -> ScenarioReport {
    evaluate_with(config, &Context::build(config))
}

fn evaluate_with(config: &ScenarioConfig, ctx: &Result<Context<'_>>) -> ScenarioReport {
    let checks = config
        .checks
        .iter()
        .map(|&c| match ctx {
            Ok(ctx) => ctx.run(c),
            Err(e) => CheckRecord::errored(
                c.name(),
                config.tolerance(c),
                format!("state could not be built: {e}"),
            ),
        })
        .collect();
    let axis = ctx.as_ref().ok().map(|c| c.axis).or(config.grid);
    ScenarioReport {
        meta: meta(config, axis.as_ref()),
        checks,
    }
}

/// Runs the scenario and writes `report.json` and sample CSVs to
/// `config.output_dir`. Only output I/O failures are returned as errors.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport> {
    let ctx = Context::build(config);
    let report = evaluate_with(config, &ctx);
    let dir = &config.output_dir;
    std::fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.clone(),
        source,
    })?;
    if let Ok(ctx) = &ctx {
        write_samples(ctx, dir)?;
    }
    report.save_json(&dir.join("report.json"))?;
    Ok(report)
}

/// Writes the kernel's Fourier multiplier table for the scenario grid and
/// constants. Defaults to `kernel.csv` in the output directory.
pub fn export_kernel(config: &ScenarioConfig, out: Option<&Path>) -> Result<PathBuf> {
    let axis = match config.grid {
        Some(a) => a,
        None => *Context::build(config)?.field.axis(),
    };
    let kernel = RegularisationKernel::new(axis, &config.constants)?;
    let path = match out {
        Some(p) => p.to_path_buf(),
        None => {
            std::fs::create_dir_all(&config.output_dir).map_err(|source| Error::Io {
                path: config.output_dir.clone(),
                source,
            })?;
            config.output_dir.join("kernel.csv")
        }
    };
    kernel.save_csv(&path)?;
    Ok(path)
}

fn write_samples(ctx: &Context<'_>, dir: &Path) -> Result<()> {
    let save = |f: &SampledFunction, name: String| f.save_csv(&dir.join(name));
    save(&ctx.field, "state_a.csv".into())?;
    save(&spectral::to_momentum(&ctx.field)?, "spectrum_a.csv".into())?;
    let Ok(packet) = classical::ClassicalWavePacket::single(ctx.field.clone(), ctx.config.constants) else {
        return Ok(());
    };
    for (i, boost) in ctx.config.boosts.iter().enumerate() {
        let b = classical::boost_packet(&packet, boost, &ctx.axis)?;
        let e = b.packet.electric(ctx.field.s())?;
        save(e, format!("boost{i}_state_b.csv"))?;
        save(&spectral::to_momentum(e)?, format!("boost{i}_spectrum_b.csv"))?;
    }
    Ok(())
}

fn meta(config: &ScenarioConfig, axis: Option<&Axis>) -> ReportMeta {
    let k = &config.constants;
    let st = &config.state;
    ReportMeta {
        tool: TOOL_NAME.into(),
        version: VERSION.into(),
        scenario: config.name.clone(),
        config_sha256: config.hash.clone(),
        grid: axis.map_or(
            serde_json::Value::Null,
            |a| json!({ "start": a.start(), "step": a.step(), "count": a.count() }),
        ),
        constants: json!({
            "c": k.c, "hbar": k.hbar, "epsilon": k.epsilon, "area": k.area, "h_density": config.h_density,
        }),
        state: json!({
            "kind": st.kind,
            "center": st.center,
            "width": st.width,
            "carrier_k": st.carrier_k,
            "amplitude": st.amplitude,
            "s": st.s.sign(),
            "lambda": st.lambda.name(),
            "file": st.file.as_ref().and_then(|f| f.file_name()).map(|f| f.to_string_lossy().into_owned()),
        }),
        boosts: config.boosts.iter().map(|b| b.beta()).collect(),
        timestamp: timestamp(),
    }
}

fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
