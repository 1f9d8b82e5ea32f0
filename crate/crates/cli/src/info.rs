//! `zecmac info`: overlap partitions, nonstochastic information and
//! unrelatedness verdicts for a joint range.

use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use zecmac::uv::{JointRange, Tuple};

use crate::io::{read_json, write_json};
use crate::{CliError, RunManifest};

pub const INFO_FILE: &str = "info.json";

#[derive(Debug, Clone, clap::Args)]
pub struct InfoArgs {
    /// Joint range JSON file.
    #[arg(long)]
    pub config: PathBuf,
    /// Comma-separated variables on the first side; defaults to the first variable.
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<String>,
    /// Comma-separated variables on the second side; defaults to every
    /// variable not named in --x or --given.
    #[arg(long, value_delimiter = ',')]
    pub y: Vec<String>,
    /// Conditioning variables for the conditional information and for --unrelated.
    #[arg(long, value_delimiter = ',')]
    pub given: Vec<String>,
    /// Markov chain to test, written `A:B:C` with comma-separated groups.
    #[arg(long)]
    pub markov: Option<String>,
    /// Groups to test for unrelatedness, written `A:B[:C...]`.
    #[arg(long)]
    pub unrelated: Option<String>,
    /// Also write `info.json` and `manifest.json` here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceCount {
    pub given: Tuple,
    pub blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionalInfo {
    pub given: Vec<String>,
    pub info_bits: f64,
    pub slices: Vec<SliceCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupVerdict {
    pub groups: Vec<Vec<String>>,
    pub given: Vec<String>,
    pub holds: bool,
}

/// Contents of `info.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InfoReport {
    pub manifest: String,
    pub variables: Vec<String>,
    pub tuples: usize,
    pub x: Vec<String>,
    pub y: Vec<String>,
    pub info_bits: f64,
    /// Overlap partition of the range of `x`, block by block.
    pub blocks: Vec<Vec<Tuple>>,
    pub common_cardinality: usize,
    pub conditional: Option<ConditionalInfo>,
    pub markov: Option<GroupVerdict>,
    pub unrelated: Option<GroupVerdict>,
}

fn groups(spec: &str) -> Result<Vec<Vec<String>>, CliError> {
    let out: Vec<Vec<String>> = spec
        .split(':')
        .map(|g| g.split(',').map(|v| v.trim().to_owned()).filter(|v| !v.is_empty()).collect())
        .collect();
    if out.iter().any(Vec::is_empty) {
        return Err(CliError::Config(format!("empty variable group in `{spec}`")));
    }
    Ok(out)
}

fn strs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

pub fn fmt_tuple(t: &Tuple) -> String {
    match t.as_slice() {
        [s] => s.to_string(),
        _ => format!("({})", t.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")),
    }
}

/// Computes the report; `hash` is the manifest hash to cite.
pub fn analyze(joint: &JointRange, args: &InfoArgs, hash: &str) -> Result<InfoReport, CliError> {
    let vars = joint.variables();
    let x = if args.x.is_empty() { vec![vars[0].clone()] } else { args.x.clone() };
    let y: Vec<String> = if args.y.is_empty() {
        vars.iter().filter(|v| !x.contains(v) && !args.given.contains(v)).cloned().collect()
    } else {
        args.y.clone()
    };
    if y.is_empty() {
        return Err(CliError::Config("no variables left for --y".into()));
    }
    let (xs, ys, ws) = (strs(&x), strs(&y), strs(&args.given));
    let partition = joint.conditional_family(&xs, &ys)?.overlap_partition();
    let blocks = partition.blocks().iter().map(|b| b.iter().cloned().collect()).collect();
    let witness = joint.maximal_common_variable(&xs, &ys)?;
    let conditional = if ws.is_empty() {
        None
    } else {
        let counts = joint.conditional_block_counts(&xs, &ys, &ws)?;
        Some(ConditionalInfo {
            given: args.given.clone(),
            info_bits: joint.conditional_nonstochastic_info(&xs, &ys, &ws)?,
            slices: counts.into_iter().map(|(given, blocks)| SliceCount { given, blocks }).collect(),
        })
    };
    let markov = match &args.markov {
        None => None,
        Some(spec) => {
            let g = groups(spec)?;
            if g.len() != 3 {
                return Err(CliError::Config(format!("--markov needs three groups, got `{spec}`")));
            }
            let holds = joint.is_markov(&strs(&g[0]), &strs(&g[1]), &strs(&g[2]))?;
            Some(GroupVerdict {
                groups: g,
                given: Vec::new(),
                holds,
            })
        }
    };
    let unrelated = match &args.unrelated {
        None => None,
        Some(spec) => {
            let g = groups(spec)?;
            let refs: Vec<Vec<&str>> = g.iter().map(|v| strs(v)).collect();
            let slices: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
            let holds = if ws.is_empty() {
                joint.is_unrelated(&slices)?
            } else {
                joint.is_conditionally_unrelated(&slices, &ws)?
            };
            Some(GroupVerdict {
                groups: g,
                given: args.given.clone(),
                holds,
            })
        }
    };
    Ok(InfoReport {
        manifest: hash.into(),
        variables: vars.to_vec(),
        tuples: joint.len(),
        x,
        y,
        info_bits: (partition.len() as f64).log2(),
        blocks,
        common_cardinality: witness.cardinality,
        conditional,
        markov,
        unrelated,
    })
}

pub fn render(r: &InfoReport) -> String {
    let mut s = String::new();
    let (x, y) = (r.x.join(","), r.y.join(","));
    let _ = writeln!(s, "joint range: {} tuples over {}", r.tuples, r.variables.join(", "));
    let _ = writeln!(s, "I*[{x};{y}] = {:?} bits", r.info_bits);
    let _ = writeln!(s, "overlap partition of [[{x}]] ({} blocks):", r.blocks.len());
    for (i, b) in r.blocks.iter().enumerate() {
        let items: Vec<String> = b.iter().map(fmt_tuple).collect();
        let _ = writeln!(s, "  block {i}: {{{}}}", items.join(", "));
    }
    let _ = writeln!(s, "maximal common variable: {} values", r.common_cardinality);
    if let Some(c) = &r.conditional {
        let per: Vec<String> = c.slices.iter().map(|sl| format!("{}: {}", fmt_tuple(&sl.given), sl.blocks)).collect();
        let _ = writeln!(
            s,
            "I*[{x};{y}|{}] = {:?} bits (blocks per slice: {})",
            c.given.join(","),
            c.info_bits,
            per.join(", ")
        );
    }
    if let Some(m) = &r.markov {
        let g: Vec<String> = m.groups.iter().map(|v| v.join(",")).collect();
        let _ = writeln!(s, "Markov chain {}: {}", g.join(" <-> "), if m.holds { "holds" } else { "fails" });
    }
    if let Some(u) = &r.unrelated {
        let g: Vec<String> = u.groups.iter().map(|v| v.join(",")).collect();
        let cond = if u.given.is_empty() { String::new() } else { format!(" given {}", u.given.join(",")) };
        let _ = writeln!(s, "unrelated {}{cond}: {}", g.join(" | "), if u.holds { "yes" } else { "no" });
    }
    s
}

pub fn run(args: &InfoArgs) -> Result<InfoReport, CliError> {
    let joint: JointRange = read_json(&args.config)?;
    let mut manifest = RunManifest::new("info", args.out.as_deref().unwrap_or("-".as_ref()));
    manifest.add_config(&args.config)?;
    for (key, v) in [("x", &args.x), ("y", &args.y), ("given", &args.given)] {
        if !v.is_empty() {
            manifest.option(key, v.join(","));
        }
    }
    for (key, v) in [("markov", &args.markov), ("unrelated", &args.unrelated)] {
        if let Some(v) = v {
            manifest.option(key, v);
        }
    }
    let report = analyze(&joint, args, &manifest.hash())?;
    print!("{}", render(&report));
    if let Some(dir) = &args.out {
        manifest.write(dir)?;
        write_json(&dir.join(INFO_FILE), &report)?;
    }
    Ok(report)
}
