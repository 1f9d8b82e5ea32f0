//! `zecmac region`: finite-blocklength rate regions of a channel.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use zecmac::mac::{MacSpec, DEFAULT_LIMIT_N};
use zecmac::zec::{
    enumerate_region_bruteforce, enumerate_region_thm1, region_diff, Caps, RatePoint, RegionApprox, RegionMeta,
    Source, ZeCode,
};

use crate::io::{csv_error, csv_writer, finish_csv, read_json, write_json};
use crate::{CliError, RunManifest};

pub const DIFF_FILE: &str = "diff.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Thm1,
    Bruteforce,
    Both,
}

impl Method {
    fn methods(self) -> &'static [Method] {
        match self {
            Method::Thm1 => &[Method::Thm1],
            Method::Bruteforce => &[Method::Bruteforce],
            Method::Both => &[Method::Thm1, Method::Bruteforce],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Method::Thm1 => "thm1",
            Method::Bruteforce => "bruteforce",
            Method::Both => "both",
        }
    }
}

#[derive(Debug, Clone, clap::Args)]
pub struct RegionArgs {
    /// Channel JSON file.
    #[arg(long)]
    pub config: PathBuf,
    /// Largest blocklength; every n in 1..=N is explored and the results merged.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Bound on the common-message cardinality.
    #[arg(long)]
    pub cap_u: Option<usize>,
    /// Bound on each private-message cardinality.
    #[arg(long)]
    pub cap_wmax: Option<usize>,
    /// Largest blocklength accepted.
    #[arg(long, default_value_t = DEFAULT_LIMIT_N)]
    pub limit_n: usize,
    #[arg(long, value_enum, default_value_t = Method::Thm1)]
    pub method: Method,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

/// Region settings as they appear inside other config files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSpec {
    pub n: usize,
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default)]
    pub cap_u: Option<usize>,
    #[serde(default)]
    pub cap_wmax: Option<usize>,
    #[serde(default = "default_limit")]
    pub limit_n: usize,
}

fn default_method() -> Method {
    Method::Thm1
}

fn default_limit() -> usize {
    DEFAULT_LIMIT_N
}

impl RegionSpec {
    pub fn caps(&self) -> Caps {
        Caps {
            cap_u: self.cap_u,
            cap_wmax: self.cap_wmax,
            limit_n: self.limit_n,
            ..Caps::default()
        }
    }
}

impl From<&RegionArgs> for RegionSpec {
    fn from(a: &RegionArgs) -> Self {
        Self {
            n: a.n,
            method: a.method,
            cap_u: a.cap_u,
            cap_wmax: a.cap_wmax,
            limit_n: a.limit_n,
        }
    }
}

/// One rate point as written to CSV and JSON outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRow {
    pub n: usize,
    pub rates: Vec<f64>,
    pub w_max: Vec<u128>,
    pub source: Source,
}

impl PointRow {
    pub fn from_point(p: &RatePoint) -> Self {
        Self {
            n: p.blocklength,
            rates: p.rates(),
            w_max: p.cardinalities.clone(),
            source: p.source,
        }
    }

    pub fn to_point(&self) -> RatePoint {
        RatePoint::new(self.n, self.w_max.clone(), self.source)
    }
}

/// Contents of `hull_<method>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullFile {
    pub manifest: String,
    pub method: Method,
    pub n_max: usize,
    pub points: Vec<PointRow>,
    pub hull: Vec<PointRow>,
    pub meta: Vec<RegionMeta>,
}

impl HullFile {
    pub fn to_region(&self) -> RegionApprox {
        RegionApprox {
            points: self.points.iter().map(PointRow::to_point).collect(),
            codes: Vec::new(),
            info: Vec::new(),
            hull: self.hull.iter().map(PointRow::to_point).collect(),
            n_max: self.n_max,
            meta: self.meta.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeEntry {
    pub point: PointRow,
    pub code: ZeCode,
}

/// Contents of `codes_<method>.json`: one witness code per maximal point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodesFile {
    pub manifest: String,
    pub codes: Vec<CodeEntry>,
}

/// Contents of `diff.json`; empty `differences` means the methods agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffFile {
    pub manifest: String,
    pub differences: Vec<String>,
}

/// One CSV row: `n, R0..RM, w_max0..w_maxM, source`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionRow {
    pub n: usize,
    pub rates: Vec<f64>,
    pub w_max: Vec<u128>,
    pub source: String,
}

pub fn csv_name(m: Method) -> String {
    format!("region_{}.csv", m.name())
}

pub fn hull_name(m: Method) -> String {
    format!("hull_{}.json", m.name())
}

pub fn codes_name(m: Method) -> String {
    format!("codes_{}.json", m.name())
}

/// Enumerates every requested method over blocklengths `1..=spec.n`.
pub fn compute(mac: &MacSpec, spec: &RegionSpec) -> Result<Vec<(Method, RegionApprox)>, CliError> {
    if spec.n == 0 {
        return Err(CliError::Config("--n must be positive".into()));
    }
    if spec.n > spec.limit_n {
        return Err(CliError::Size(format!(
            "blocklength {} exceeds the limit {}; raise --limit-n to allow it",
            spec.n, spec.limit_n
        )));
    }
    let caps = spec.caps();
    spec.method
        .methods()
        .iter()
        .map(|&m| {
            let parts = (1..=spec.n)
                .map(|n| match m {
                    Method::Bruteforce => enumerate_region_bruteforce(mac, n, &caps),
                    _ => enumerate_region_thm1(mac, n, &caps),
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok((m, RegionApprox::merge(parts)))
        })
        .collect()
}

fn write_csv(path: &Path, hash: &str, region: &RegionApprox, dim: usize) -> Result<(), CliError> {
    let mut w = csv_writer(path, hash, &[])?;
    let mut header = vec!["n".to_owned()];
    header.extend((0..dim).map(|i| format!("R{i}")));
    header.extend((0..dim).map(|i| format!("w_max{i}")));
    header.push("source".into());
    w.write_record(&header).map_err(|e| csv_error(path, e))?;
    for p in &region.points {
        let mut rec = vec![p.blocklength.to_string()];
        rec.extend(p.rates().iter().map(f64::to_string));
        rec.extend(p.cardinalities.iter().map(u128::to_string));
        rec.push(p.source.to_string());
        w.write_record(&rec).map_err(|e| csv_error(path, e))?;
    }
    finish_csv(w, path)
}

/// Parses a region CSV written by this command.
pub fn read_region_csv(path: &Path) -> Result<Vec<RegionRow>, CliError> {
    let bad = |e: String| CliError::Config(format!("{}: {e}", path.display()));
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| bad(e.to_string()))?;
    let header = rdr.headers().map_err(|e| bad(e.to_string()))?.clone();
    let dim = header.len().checked_sub(2).map(|k| k / 2).filter(|&d| d > 0 && header.len() == 2 * d + 2);
    let dim = dim.ok_or_else(|| bad(format!("unexpected header {header:?}")))?;
    rdr.records()
        .map(|rec| {
            let rec = rec.map_err(|e| bad(e.to_string()))?;
            let field = |i: usize| rec.get(i).unwrap_or("");
            let n = field(0).parse().map_err(|e| bad(format!("n: {e}")))?;
            let rates = (1..=dim)
                .map(|i| field(i).parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| bad(format!("rate: {e}")))?;
            let w_max = (dim + 1..=2 * dim)
                .map(|i| field(i).parse::<u128>())
                .collect::<Result<_, _>>()
                .map_err(|e| bad(format!("w_max: {e}")))?;
            Ok(RegionRow {
                n,
                rates,
                w_max,
                source: field(2 * dim + 1).to_owned(),
            })
        })
        .collect()
}

/// Writes CSV, hull and code files for one region.
pub fn write_region(dir: &Path, hash: &str, method: Method, region: &RegionApprox, dim: usize) -> Result<(), CliError> {
    write_csv(&dir.join(csv_name(method)), hash, region, dim)?;
    write_json(
        &dir.join(hull_name(method)),
        &HullFile {
            manifest: hash.into(),
            method,
            n_max: region.n_max,
            points: region.points.iter().map(PointRow::from_point).collect(),
            hull: region.hull.iter().map(PointRow::from_point).collect(),
            meta: region.meta.clone(),
        },
    )?;
    write_json(
        &dir.join(codes_name(method)),
        &CodesFile {
            manifest: hash.into(),
            codes: region
                .points
                .iter()
                .zip(&region.codes)
                .map(|(p, c)| CodeEntry {
                    point: PointRow::from_point(p),
                    code: c.clone(),
                })
                .collect(),
        },
    )
}

pub fn run(args: &RegionArgs) -> Result<Vec<(Method, RegionApprox)>, CliError> {
    let mac: MacSpec = read_json(&args.config)?;
    let spec = RegionSpec::from(args);
    let mut manifest = RunManifest::new("region", &args.out);
    manifest.add_config(&args.config)?;
    manifest.caps = Some(spec.caps());
    manifest.option("n", args.n);
    manifest.option("method", args.method.name());
    let regions = compute(&mac, &spec)?;
    let hash = manifest.write(&args.out)?;
    let dim = mac.users() + 1;
    for (m, r) in &regions {
        write_region(&args.out, &hash, *m, r, dim)?;
        println!(
            "{}: {} maximal points, {} hull vertices, n <= {}",
            m.name(),
            r.points.len(),
            r.hull.len(),
            r.n_max
        );
        for w in r.warnings() {
            eprintln!("warning ({}): {w}", m.name());
        }
    }
    if let [(_, a), (_, b)] = regions.as_slice() {
        let differences = region_diff(a, b);
        println!("diff: {} differences", differences.len());
        for d in &differences {
            println!("  {d}");
        }
        write_json(
            &args.out.join(DIFF_FILE),
            &DiffFile {
                manifest: hash,
                differences,
            },
        )?;
    }
    Ok(regions)
}
