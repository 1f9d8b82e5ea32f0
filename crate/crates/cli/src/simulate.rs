//! `zecmac simulate`: closed-loop estimation runs over a zero-error code.

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use zecmac::estimator::quantizer::INFLATE;
use zecmac::estimator::{
    feasibility_check, EntropyVector, FeasibilityMode, ObserverSpec, PlantSpec, QuantizerSpec, SimConfig, SimTrace,
    Simulator, Status, Verdict,
};
use zecmac::mac::MacSpec;
use zecmac::zec::{RegionApprox, ZeCode};

use crate::io::{csv_error, csv_writer, finish_csv, read_json, write_json};
use crate::region::{compute, CodesFile, HullFile, RegionSpec};
use crate::{CliError, RunManifest};

pub const SUMMARY_FILE: &str = "summary.json";

const TRACE_HEADER: [&str; 8] = ["t", "err0", "err1", "err2", "bound0", "bound1", "bound2", "overflow"];

#[derive(Debug, Clone, clap::Args)]
pub struct SimulateArgs {
    /// Simulation JSON file.
    #[arg(long)]
    pub config: PathBuf,
    /// Seeds as a list `1,2,5` or a half-open range `0..100`; overrides the config.
    #[arg(long)]
    pub seeds: Option<String>,
    /// Number of steps; overrides the config.
    #[arg(long)]
    pub horizon: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Where the rate region used for the feasibility verdict comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RegionSource {
    /// A `hull_<method>.json` written by `zecmac region`.
    File { hull: PathBuf },
    /// Enumerated from the channel before simulating.
    Compute(RegionSpec),
}

/// Simulation config file: the simulation settings plus the channel, the
/// code and optionally a rate region. Paths are relative to the file's
/// directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimFile {
    pub mac: PathBuf,
    /// A code JSON file, or a `codes_<method>.json` when `code_index` is set.
    pub code: PathBuf,
    #[serde(default)]
    pub code_index: Option<usize>,
    #[serde(default)]
    pub region: Option<RegionSource>,
    pub plants: Vec<PlantSpec>,
    #[serde(default)]
    pub observer: ObserverSpec,
    pub quantizer: QuantizerSpec,
    pub horizon: usize,
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub transient: Option<usize>,
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default = "default_inflate")]
    pub inflate: f64,
}

fn default_inflate() -> f64 {
    INFLATE
}

impl SimFile {
    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            plants: self.plants.clone(),
            observer: self.observer.clone(),
            quantizer: self.quantizer.clone(),
            horizon: self.horizon,
            seeds: self.seeds.clone(),
            transient: self.transient,
            window: self.window,
            inflate: self.inflate,
            record_states: false,
        }
    }
}

/// One row of `trace_<seed>.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: usize,
    pub err0: f64,
    pub err1: f64,
    pub err2: f64,
    pub bound0: f64,
    pub bound1: f64,
    pub bound2: f64,
    pub overflow: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssumptionRow {
    pub label: String,
    pub state: Status,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub steps: usize,
    pub sup_error: Vec<f64>,
    pub bounded: bool,
    pub growth_ratio: Option<f64>,
    pub overflow_count: usize,
    pub overflow_after_transient: usize,
    pub non_increasing_fraction: f64,
    pub envelope: f64,
    pub contraction: f64,
    pub truncated_at: Option<usize>,
    pub bound_violations: usize,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub manifest: String,
    pub horizon: usize,
    pub blocklength: usize,
    pub seeds: Vec<u64>,
    pub entropy: Vec<f64>,
    /// `log₂(cells)/n − hᵢ` per plant.
    pub rate_margins: Vec<f64>,
    /// Absent when the config names no region.
    pub verdict: Option<Verdict>,
    pub assumptions: Vec<Vec<AssumptionRow>>,
    /// True when every seed was diagnosed bounded.
    pub bounded: bool,
    pub sup_error: Vec<f64>,
    pub runs: Vec<SeedSummary>,
}

pub fn trace_name(seed: u64) -> String {
    format!("trace_{seed}.csv")
}

/// Parses `1,2,5`, `7` or `0..100`.
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>, CliError> {
    let bad = |e: std::num::ParseIntError| CliError::Config(format!("--seeds `{spec}`: {e}"));
    if let Some((a, b)) = spec.split_once("..") {
        let (a, b): (u64, u64) = (a.trim().parse().map_err(bad)?, b.trim().parse().map_err(bad)?);
        if a >= b {
            return Err(CliError::Config(format!("--seeds range `{spec}` is empty")));
        }
        return Ok((a..b).collect());
    }
    spec.split(',').map(|s| s.trim().parse().map_err(bad)).collect()
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

fn load_code(path: &Path, index: Option<usize>) -> Result<ZeCode, CliError> {
    let code: ZeCode = match index {
        None => read_json(path)?,
        Some(i) => {
            let file: CodesFile = read_json(path)?;
            let count = file.codes.len();
            file.codes
                .into_iter()
                .nth(i)
                .ok_or_else(|| CliError::Config(format!("{}: code_index {i} out of range ({count} codes)", path.display())))?
                .code
        }
    };
    Ok(ZeCode::new(
        code.blocklength(),
        code.cardinalities().to_vec(),
        code.encoders().to_vec(),
        code.channel(),
    )?)
}

fn region_for(src: &RegionSource, base: &Path, mac: &MacSpec) -> Result<RegionApprox, CliError> {
    match src {
        RegionSource::File { hull } => Ok(read_json::<HullFile>(&resolve(base, hull))?.to_region()),
        RegionSource::Compute(spec) => {
            let parts = compute(mac, spec)?.into_iter().map(|(_, r)| r).collect();
            Ok(RegionApprox::merge(parts))
        }
    }
}

fn write_trace(path: &Path, hash: &str, tr: &SimTrace) -> Result<(), CliError> {
    let mut w = csv_writer(path, hash, &[format!("seed={}", tr.seed)])?;
    w.write_record(TRACE_HEADER).map_err(|e| csv_error(path, e))?;
    // Floats go through `Display`, the shortest representation that parses
    // back to the same value.
    for (t, (e, b)) in tr.errors.iter().zip(&tr.bounds).enumerate() {
        let mut rec = vec![t.to_string()];
        rec.extend(e.iter().chain(b).map(f64::to_string));
        rec.push(u8::from(tr.overflow[t]).to_string());
        w.write_record(&rec).map_err(|e| csv_error(path, e))?;
    }
    finish_csv(w, path)
}

pub fn run(args: &SimulateArgs) -> Result<SimSummary, CliError> {
    let mut file: SimFile = read_json(&args.config)?;
    let base = args.config.parent().unwrap_or(Path::new("."));
    if let Some(h) = args.horizon {
        file.horizon = h;
    }
    let seeds = match &args.seeds {
        Some(s) => parse_seeds(s)?,
        None if file.seeds.is_empty() => vec![0],
        None => file.seeds.clone(),
    };
    let mac_path = resolve(base, &file.mac);
    let code_path = resolve(base, &file.code);
    let mut manifest = RunManifest::new("simulate", &args.out);
    for p in [args.config.as_path(), &mac_path, &code_path] {
        manifest.add_config(p)?;
    }
    if let Some(RegionSource::File { hull }) = &file.region {
        manifest.add_config(&resolve(base, hull))?;
    }
    manifest.seeds = seeds.clone();
    manifest.option("horizon", file.horizon);
    let cfg = file.sim_config();

    let mac: MacSpec = read_json(&mac_path)?;
    let code = load_code(&code_path, file.code_index)?;
    let assumptions = cfg
        .plants
        .iter()
        .map(|p| {
            Ok(p.check_assumptions()?
                .into_iter()
                .map(|a| AssumptionRow {
                    label: a.label.into(),
                    state: a.state,
                    detail: a.detail,
                })
                .collect())
        })
        .collect::<Result<Vec<Vec<_>>, CliError>>()?;
    let sim = Simulator::new(&cfg, &mac, &code)?;
    let entropy = EntropyVector::from_plants(&cfg.plants)?;
    let verdict = match &file.region {
        None => None,
        Some(src) => Some(feasibility_check(&entropy, &region_for(src, base, &mac)?, FeasibilityMode::Exact)?),
    };

    let traces = seeds
        .par_iter()
        .map(|&s| sim.run(s))
        .collect::<Result<Vec<_>, _>>()?;
    let hash = manifest.write(&args.out)?;
    let mut runs = Vec::with_capacity(traces.len());
    for tr in &traces {
        write_trace(&args.out.join(trace_name(tr.seed)), &hash, tr)?;
        let d = tr.diagnose(sim.transient, sim.window);
        runs.push(SeedSummary {
            seed: tr.seed,
            steps: tr.steps(),
            sup_error: d.sup_error,
            bounded: d.bounded,
            growth_ratio: d.growth_ratio,
            overflow_count: d.overflow_count,
            overflow_after_transient: d.overflow_after_transient,
            non_increasing_fraction: d.non_increasing_fraction,
            envelope: d.envelope,
            contraction: d.contraction,
            truncated_at: d.truncated_at,
            bound_violations: tr.bound_violations,
        });
    }
    let sup_error = (0..entropy.0.len())
        .map(|i| runs.iter().map(|r| r.sup_error[i]).fold(0.0, f64::max))
        .collect();
    let summary = SimSummary {
        manifest: hash,
        horizon: cfg.horizon,
        blocklength: code.blocklength(),
        seeds,
        entropy: entropy.0.clone(),
        rate_margins: sim.rate_margins()?,
        verdict,
        assumptions,
        bounded: runs.iter().all(|r| r.bounded),
        sup_error,
        runs,
    };
    write_json(&args.out.join(SUMMARY_FILE), &summary)?;
    println!("h = {entropy}");
    if let Some(v) = verdict {
        println!("feasibility: {}", serde_json::to_string(&v).unwrap_or_default().trim_matches('"'));
    }
    for r in &summary.runs {
        let growth = r.growth_ratio.map_or("-".to_owned(), |g| format!("{g:.4}"));
        println!(
            "seed {}: bounded={} sup_error={:?} growth_ratio={growth} overflows={}",
            r.seed, r.bounded, r.sup_error, r.overflow_count
        );
    }
    Ok(summary)
}
