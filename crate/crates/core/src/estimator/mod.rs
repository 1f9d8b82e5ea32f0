//! Remote state estimation of three linear plants over a two-user MAC.
//!
//! Plant 0 is observed by both encoders and travels as the common message;
//! plants 1 and 2 are private to encoders 1 and 2. Each encoder runs a
//! Luenberger observer, downsamples by the code blocklength `n`, quantizes
//! the observer state with an adaptive box quantizer and sends the cell
//! indices through a zero-error code. The decoder mirrors the quantizer
//! boxes and propagates estimates between block boundaries.

mod feasibility;
pub mod linalg;
pub mod quantizer;
mod sim;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::zec::ZecError;

pub use feasibility::{feasibility_check, FeasibilityMode, Verdict};
pub use quantizer::{upsample, BoxState};
pub use sim::{
    growth_ratio, run_simulation, window_maxima, BlockRecord, Diagnosis, OverflowEvent, SimTrace, Simulator,
};

/// Number of plants in the fixed wiring.
pub const PLANTS: usize = 3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("assumption {label} violated: {detail}")]
    Assumption { label: String, detail: String },
    #[error("numerical error: {detail}; matrix {matrix}")]
    Numerical { detail: String, matrix: String },
    #[error(transparent)]
    Zec(#[from] ZecError),
}

type Matrix = Vec<Vec<f64>>;

fn to_dmatrix(rows: &Matrix, what: &str) -> Result<DMatrix<f64>, EstimatorError> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
        return Err(EstimatorError::Config(format!("{what} must be a nonempty rectangular matrix")));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(EstimatorError::Config(format!("{what} has non-finite entries")));
    }
    Ok(DMatrix::from_fn(r, c, |i, j| rows[i][j]))
}

fn from_dmatrix(m: &DMatrix<f64>) -> Matrix {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlantFile {
    #[serde(rename = "A")]
    a: Matrix,
    #[serde(rename = "C")]
    c: Matrix,
    v_bound: f64,
    w_bound: f64,
    l: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    degenerate_stable: bool,
}

/// `X(t+1) = A X(t) + V(t)`, `Y(t) = C X(t) + W(t)` with `‖V‖∞ ≤ v_bound`,
/// `‖W‖∞ ≤ w_bound` and `‖X(0)‖∞ ≤ l`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PlantFile", into = "PlantFile")]
pub struct PlantSpec {
    pub a: DMatrix<f64>,
    pub c: DMatrix<f64>,
    pub v_bound: f64,
    pub w_bound: f64,
    pub l: f64,
    /// Allows a plant without unstable modes.
    pub degenerate_stable: bool,
}

impl TryFrom<PlantFile> for PlantSpec {
    type Error = EstimatorError;
    fn try_from(f: PlantFile) -> Result<Self, EstimatorError> {
        let p = PlantSpec {
            a: to_dmatrix(&f.a, "A")?,
            c: to_dmatrix(&f.c, "C")?,
            v_bound: f.v_bound,
            w_bound: f.w_bound,
            l: f.l,
            degenerate_stable: f.degenerate_stable,
        };
        p.check_dimensions()?;
        Ok(p)
    }
}

impl From<PlantSpec> for PlantFile {
    fn from(p: PlantSpec) -> Self {
        PlantFile {
            a: from_dmatrix(&p.a),
            c: from_dmatrix(&p.c),
            v_bound: p.v_bound,
            w_bound: p.w_bound,
            l: p.l,
            degenerate_stable: p.degenerate_stable,
        }
    }
}

impl PlantSpec {
    pub fn scalar(a: f64, c: f64, v_bound: f64, w_bound: f64, l: f64) -> Self {
        Self {
            a: DMatrix::from_element(1, 1, a),
            c: DMatrix::from_element(1, 1, c),
            v_bound,
            w_bound,
            l,
            degenerate_stable: false,
        }
    }

    pub fn degenerate(mut self) -> Self {
        self.degenerate_stable = true;
        self
    }

    pub fn state_dim(&self) -> usize {
        self.a.nrows()
    }

    pub fn output_dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn check_dimensions(&self) -> Result<(), EstimatorError> {
        if self.a.nrows() != self.a.ncols() {
            return Err(EstimatorError::Config(format!(
                "A must be square, got {}x{}",
                self.a.nrows(),
                self.a.ncols()
            )));
        }
        if self.c.ncols() != self.a.nrows() {
            return Err(EstimatorError::Config(format!(
                "C has {} columns but the state has dimension {}",
                self.c.ncols(),
                self.a.nrows()
            )));
        }
        Ok(())
    }

    pub fn entropy(&self) -> Result<f64, EstimatorError> {
        linalg::topological_entropy(&self.a)
    }

    /// Checks the standing assumptions and returns one report line per label.
    /// The first violated assumption is returned as an error.
    pub fn check_assumptions(&self) -> Result<Vec<AssumptionStatus>, EstimatorError> {
        self.check_dimensions()?;
        let mut out = Vec::new();
        let mut push = |label: &'static str, state: Status, detail: String| {
            if state == Status::Violated {
                return Err(EstimatorError::Assumption {
                    label: label.into(),
                    detail,
                });
            }
            out.push(AssumptionStatus { label, state, detail });
            Ok(())
        };
        let observable = linalg::is_observable(&self.a, &self.c);
        push(
            "A1",
            if observable { Status::Satisfied } else { Status::Violated },
            if observable {
                "(C, A) observable".into()
            } else {
                "observability matrix is rank deficient".into()
            },
        )?;
        let bounds_ok = [self.v_bound, self.w_bound, self.l]
            .iter()
            .all(|b| b.is_finite() && *b >= 0.0);
        push(
            "A2",
            if bounds_ok { Status::Satisfied } else { Status::Violated },
            format!(
                "noise bounds v={}, w={} and initial radius l={} must be finite and nonnegative",
                self.v_bound, self.w_bound, self.l
            ),
        )?;
        push("A3", Status::Satisfied, "noise drawn from independent seeded streams".into())?;
        push("A4", Status::Satisfied, "initial state drawn from its own seeded stream".into())?;
        let h = self.entropy()?;
        let unstable = linalg::eigenvalues(&self.a)?
            .iter()
            .any(|l| l.norm() >= 1.0 - linalg::UNSTABLE_MARGIN);
        let a5 = match (unstable, self.degenerate_stable) {
            (true, _) => Status::Satisfied,
            (false, true) => Status::Waived,
            (false, false) => Status::Violated,
        };
        push("A5", a5, format!("topological entropy {h} bits/step"))?;
        push("A6", Status::Satisfied, "zero lies in every noise set".into())?;
        if linalg::max_jordan_block(&self.a)? > 2 {
            return Err(EstimatorError::Config("Jordan blocks larger than 2 are not supported".into()));
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Satisfied,
    Waived,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssumptionStatus {
    pub label: &'static str,
    pub state: Status,
    pub detail: String,
}

/// Topological entropies `(h₀, h₁, h₂)` in bits per step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyVector(pub Vec<f64>);

impl EntropyVector {
    pub fn from_plants(plants: &[PlantSpec]) -> Result<Self, EstimatorError> {
        plants.iter().map(PlantSpec::entropy).collect::<Result<_, _>>().map(Self)
    }
}

impl fmt::Display for EntropyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|h| format!("{h}")).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Observer gains: `"auto"` or one explicit `L` per plant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ObserverSpec {
    Named(String),
    Gains {
        #[serde(rename = "L")]
        l: Vec<Matrix>,
    },
}

impl Default for ObserverSpec {
    fn default() -> Self {
        ObserverSpec::Named("auto".into())
    }
}

impl ObserverSpec {
    /// Resolves and validates the gain of every plant.
    pub fn gains(&self, plants: &[PlantSpec]) -> Result<Vec<DMatrix<f64>>, EstimatorError> {
        let gains: Vec<DMatrix<f64>> = match self {
            ObserverSpec::Named(s) if s == "auto" => plants
                .iter()
                .enumerate()
                .map(|(i, p)| {
                    linalg::auto_gain(&p.a, &p.c).ok_or_else(|| {
                        EstimatorError::Config(format!(
                            "plant {i}: no single output row makes (C, A) observable; give L explicitly"
                        ))
                    })
                })
                .collect::<Result<_, _>>()?,
            ObserverSpec::Named(s) => {
                return Err(EstimatorError::Config(format!("unknown observer setting {s:?}")))
            }
            ObserverSpec::Gains { l } => {
                if l.len() != plants.len() {
                    return Err(EstimatorError::Config(format!(
                        "expected {} observer gains, got {}",
                        plants.len(),
                        l.len()
                    )));
                }
                l.iter().map(|m| to_dmatrix(m, "L")).collect::<Result<_, _>>()?
            }
        };
        for (i, (p, l)) in plants.iter().zip(&gains).enumerate() {
            if l.nrows() != p.state_dim() || l.ncols() != p.output_dim() {
                return Err(EstimatorError::Config(format!(
                    "plant {i}: L must be {}x{}, got {}x{}",
                    p.state_dim(),
                    p.output_dim(),
                    l.nrows(),
                    l.ncols()
                )));
            }
            let f = &p.a - l * &p.c;
            let sr = linalg::spectral_radius(&f)?;
            if sr >= 1.0 {
                return Err(EstimatorError::Config(format!(
                    "plant {i}: A - LC has spectral radius {sr}, observer is not stable"
                )));
            }
        }
        Ok(gains)
    }
}

/// Per-axis cell counts; a bare number is accepted for scalar plants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CellSpec {
    Scalar(usize),
    Axes(Vec<usize>),
}

impl CellSpec {
    pub fn axes(&self) -> Vec<usize> {
        match self {
            CellSpec::Scalar(c) => vec![*c],
            CellSpec::Axes(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuantizerSpec {
    pub n: usize,
    pub cells: Vec<CellSpec>,
}

fn default_inflate() -> f64 {
    quantizer::INFLATE
}

/// Simulation settings shared by every seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub plants: Vec<PlantSpec>,
    #[serde(default)]
    pub observer: ObserverSpec,
    pub quantizer: QuantizerSpec,
    pub horizon: usize,
    #[serde(default)]
    pub seeds: Vec<u64>,
    /// Steps excluded from boundedness checks; defaults to `horizon/10`.
    #[serde(default)]
    pub transient: Option<usize>,
    /// Window length for windowed maxima; defaults to `max(1, horizon/20)`.
    #[serde(default)]
    pub window: Option<usize>,
    #[serde(default = "default_inflate")]
    pub inflate: f64,
    /// Keep absolute states and estimates in the trace.
    #[serde(default)]
    pub record_states: bool,
}

impl SimConfig {
    pub fn transient(&self) -> usize {
        self.transient.unwrap_or(self.horizon / 10)
    }

    pub fn window(&self) -> usize {
        self.window.unwrap_or((self.horizon / 20).max(1))
    }
}

/// One observer update `x̄′ = A x̄ + L(y − C x̄)`. Returns the new estimate
/// and the innovation term `L(y − C x̄)`.
pub fn observer_step(
    plant: &PlantSpec,
    l: &DMatrix<f64>,
    xbar: &DVector<f64>,
    y: &DVector<f64>,
) -> Result<(DVector<f64>, DVector<f64>), EstimatorError> {
    if xbar.len() != plant.state_dim() || y.len() != plant.output_dim() {
        return Err(EstimatorError::Config(format!(
            "observer step expects state {} and measurement {}, got {} and {}",
            plant.state_dim(),
            plant.output_dim(),
            xbar.len(),
            y.len()
        )));
    }
    if l.nrows() != plant.state_dim() || l.ncols() != plant.output_dim() {
        return Err(EstimatorError::Config("observer gain has the wrong shape".into()));
    }
    let innovation = l * (y - &plant.c * xbar);
    Ok((&plant.a * xbar + &innovation, innovation))
}
