use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::geometry::{q_from_f64, Q};

/// Where a rate point came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Thm1,
    Bruteforce,
    Timeshare,
    Code,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Thm1 => "thm1",
            Source::Bruteforce => "bruteforce",
            Source::Timeshare => "timeshare",
            Source::Code => "code",
        })
    }
}

/// Rate tuple `Rⁱ = log₂(w_maxⁱ)/n`, stored as the exact pair
/// `(w_max, n)` so that comparisons never go through floating point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatePoint {
    pub blocklength: usize,
    pub cardinalities: Vec<u128>,
    pub source: Source,
}

impl RatePoint {
    pub fn new(blocklength: usize, cardinalities: Vec<u128>, source: Source) -> Self {
        assert!(blocklength > 0, "blocklength must be positive");
        assert!(cardinalities.iter().all(|&c| c > 0), "cardinalities must be positive");
        Self {
            blocklength,
            cardinalities,
            source,
        }
    }

    pub fn from_code(code: &super::ZeCode, source: Source) -> Self {
        Self::new(
            code.blocklength(),
            code.cardinalities().iter().map(|&c| c as u128).collect(),
            source,
        )
    }

    pub fn dim(&self) -> usize {
        self.cardinalities.len()
    }

    pub fn rates(&self) -> Vec<f64> {
        self.cardinalities
            .iter()
            .map(|&c| (c as f64).log2() / self.blocklength as f64)
            .collect()
    }

    /// Exact rate of coordinate `i`, available when `w_maxⁱ` is a power of two.
    pub fn exact_rate(&self, i: usize) -> Option<Q> {
        let c = self.cardinalities[i];
        c.is_power_of_two().then(|| {
            BigRational::new(
                BigInt::from(c.trailing_zeros()),
                BigInt::from(self.blocklength),
            )
        })
    }

    /// Rates after flooring each cardinality to a power of two; always exact.
    pub fn floored_rates(&self) -> Vec<Q> {
        self.cardinalities
            .iter()
            .map(|&c| {
                let bits = 127 - c.leading_zeros();
                BigRational::new(BigInt::from(bits), BigInt::from(self.blocklength))
            })
            .collect()
    }

    /// Rational coordinates for geometry: exact where possible, otherwise the
    /// exact value of the double-precision rate.
    pub fn coords(&self) -> Vec<Q> {
        let approx = self.rates();
        (0..self.dim())
            .map(|i| self.exact_rate(i).unwrap_or_else(|| q_from_f64(approx[i])))
            .collect()
    }

    /// Exact comparison of coordinate `i` of `self` with coordinate `i` of
    /// `other`: `a^{1/n}` against `b^{1/m}`, i.e. `a^m` against `b^n`.
    pub fn cmp_rate(&self, other: &RatePoint, i: usize) -> Ordering {
        let a = BigUint::from(self.cardinalities[i]).pow(other.blocklength as u32);
        let b = BigUint::from(other.cardinalities[i]).pow(self.blocklength as u32);
        a.cmp(&b)
    }

    pub fn same_rates(&self, other: &RatePoint) -> bool {
        self.dim() == other.dim() && (0..self.dim()).all(|i| self.cmp_rate(other, i) == Ordering::Equal)
    }

    /// Componentwise `≤` with at least one strict `<`.
    pub fn dominated_by(&self, other: &RatePoint) -> bool {
        let mut strict = false;
        for i in 0..self.dim() {
            match self.cmp_rate(other, i) {
                Ordering::Greater => return false,
                Ordering::Less => strict = true,
                Ordering::Equal => {}
            }
        }
        strict
    }

    /// Componentwise `≤`.
    pub fn weakly_dominated_by(&self, other: &RatePoint) -> bool {
        (0..self.dim()).all(|i| self.cmp_rate(other, i) != Ordering::Greater)
    }
}

/// Indices of the Pareto-maximal points, one representative per distinct
/// rate tuple, sorted by decreasing rates in coordinate order. Among equal
/// rate tuples the one with the smallest blocklength (then the earliest) is
/// kept.
pub fn maximal_indices(points: &[RatePoint]) -> Vec<usize> {
    let mut keep: Vec<usize> = Vec::new();
    for (i, p) in points.iter().enumerate() {
        if points.iter().any(|q| p.dominated_by(q)) {
            continue;
        }
        match keep.iter_mut().find(|k| points[**k].same_rates(p)) {
            Some(k) if p.blocklength < points[*k].blocklength => *k = i,
            Some(_) => {}
            None => keep.push(i),
        }
    }
    keep.sort_by(|&a, &b| {
        let (a, b) = (&points[a], &points[b]);
        (0..a.dim())
            .map(|i| b.cmp_rate(a, i))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
            .then(a.blocklength.cmp(&b.blocklength))
    });
    keep
}

/// The points selected by [`maximal_indices`].
pub fn maximal_points(points: &[RatePoint]) -> Vec<RatePoint> {
    maximal_indices(points).into_iter().map(|i| points[i].clone()).collect()
}
