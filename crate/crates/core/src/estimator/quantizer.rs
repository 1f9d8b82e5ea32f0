//! Adaptive box quantizer shared by encoder and decoder.

use nalgebra::{DMatrix, DVector};

/// Default box inflation factor after an overflow.
pub const INFLATE: f64 = 4.0;

/// Smallest half-length used when inflating a collapsed box.
pub const INFLATE_FLOOR: f64 = 1e-9;

/// Cell of a scalar offset in `[-ρ, ρ]` split into `cells` equal intervals.
/// A value on a cell boundary goes to the upper cell; values beyond the box
/// are clamped. A collapsed box (`ρ = 0`) maps to cell `cells/2`.
pub fn cell_index(offset: f64, rho: f64, cells: usize) -> usize {
    if rho <= 0.0 {
        return cells / 2;
    }
    let width = 2.0 * rho / cells as f64;
    let raw = ((offset + rho) / width).floor();
    if raw.is_nan() || raw < 0.0 {
        0
    } else {
        (raw as usize).min(cells - 1)
    }
}

/// Midpoint offset of cell `i`.
pub fn cell_midpoint(i: usize, rho: f64, cells: usize) -> f64 {
    if rho <= 0.0 {
        return 0.0;
    }
    let width = 2.0 * rho / cells as f64;
    -rho + (i as f64 + 0.5) * width
}

/// One plant's quantizer box: center `c`, per-axis half-lengths `ρ` and a
/// uniform grid of `cells[i]` intervals on axis `i`. Flattened cell indices
/// are row-major with axis 0 most significant.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxState {
    pub center: DVector<f64>,
    pub rho: DVector<f64>,
    pub cells: Vec<usize>,
    pub block: usize,
}

impl BoxState {
    pub fn new(center: DVector<f64>, rho: DVector<f64>, cells: Vec<usize>) -> Self {
        assert_eq!(center.len(), rho.len());
        assert_eq!(center.len(), cells.len());
        assert!(cells.iter().all(|&c| c > 0));
        Self {
            center,
            rho,
            cells,
            block: 0,
        }
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().product()
    }

    pub fn contains_offset(&self, d: &DVector<f64>) -> bool {
        d.iter().zip(self.rho.iter()).all(|(x, r)| x.abs() <= *r)
    }

    /// Inflates the box around its current center: `ρ ← factor·max(ρ, floor)`.
    pub fn inflate(&mut self, factor: f64) {
        for r in self.rho.iter_mut() {
            *r = factor * r.max(INFLATE_FLOOR);
        }
    }

    /// Quantizes an offset from the box center. Returns the 0-based flat cell
    /// index and the number of inflations needed to contain the offset.
    pub fn quantize_offset(&mut self, d: &DVector<f64>, factor: f64) -> (usize, usize) {
        let mut inflations = 0;
        while !self.contains_offset(d) {
            if d.iter().any(|x| !x.is_finite()) {
                break;
            }
            self.inflate(factor);
            inflations += 1;
        }
        let mut flat = 0;
        for (i, &cells) in self.cells.iter().enumerate() {
            flat = flat * cells + cell_index(d[i], self.rho[i], cells);
        }
        (flat, inflations)
    }

    pub fn quantize(&mut self, x: &DVector<f64>, factor: f64) -> (usize, usize) {
        let d = x - &self.center;
        self.quantize_offset(&d, factor)
    }

    /// Midpoint offset of a flat cell index.
    pub fn midpoint_offset(&self, mut flat: usize) -> DVector<f64> {
        let mut out = DVector::zeros(self.cells.len());
        for i in (0..self.cells.len()).rev() {
            let c = self.cells[i];
            out[i] = cell_midpoint(flat % c, self.rho[i], c);
            flat /= c;
        }
        out
    }

    pub fn reconstruct(&self, flat: usize) -> DVector<f64> {
        &self.center + self.midpoint_offset(flat)
    }

    /// Zoom law after sending cell `flat`: the center moves to the image of
    /// the cell midpoint under `Aⁿ` and `ρ ← |Aⁿ|·(ρ/cells) + margin`.
    pub fn advance(&mut self, flat: usize, a_n: &DMatrix<f64>, margin: f64) {
        let q = self.reconstruct(flat);
        let half_cell = DVector::from_iterator(
            self.rho.len(),
            self.rho.iter().zip(&self.cells).map(|(r, &c)| r / c as f64),
        );
        self.center = a_n * q;
        self.rho = a_n.abs() * half_cell;
        self.rho.add_scalar_mut(margin);
        self.block += 1;
    }

    /// Bitwise equality, used for encoder/decoder synchrony checks.
    pub fn bit_identical(&self, other: &BoxState) -> bool {
        let same = |a: &DVector<f64>, b: &DVector<f64>| {
            a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x.to_bits() == y.to_bits())
        };
        self.block == other.block && self.cells == other.cells && same(&self.center, &other.center) && same(&self.rho, &other.rho)
    }
}

/// Inter-block estimate `Aʳ·x̂(kn)`.
pub fn upsample(a: &DMatrix<f64>, xhat: &DVector<f64>, r: usize) -> DVector<f64> {
    let mut out = xhat.clone();
    for _ in 0..r {
        out = a * out;
    }
    out
}
