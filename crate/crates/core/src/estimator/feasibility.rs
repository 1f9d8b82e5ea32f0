//! Classification of an entropy vector against a rate region.
//!
//! The region is the downward closure, within the nonnegative orthant, of
//! the convex hull of the region's rate points. Coordinate `i` of `h` is
//! compared with rate `Rⁱ` (`h₀` with the common rate).

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{EntropyVector, EstimatorError};
use crate::geometry::{gauge, q_from_f64, Q};
use crate::zec::{RatePoint, RegionApprox};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Outside,
    Boundary,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeasibilityMode {
    /// Rational arithmetic. Power-of-two cardinalities give exact rates;
    /// other rates are bracketed by `log₂ ± 2⁻⁴⁰`, and a verdict is
    /// returned only when both brackets agree on it, otherwise `Boundary`.
    Exact,
    /// Rates rounded to `f64`; gauge within `eps` of 1 counts as boundary.
    Float { eps: f64 },
}

fn bracket() -> Q {
    Q::new(1.into(), num_bigint::BigInt::from(1u64 << 40))
}

fn classify(h: &[Q], points: &[Vec<Q>], eps: &Q) -> Verdict {
    let one = Q::one();
    let on_face = h.iter().any(|v| v <= eps);
    match gauge(h, points) {
        None => Verdict::Boundary,
        Some(t) if t > &one + eps => {
            if on_face {
                Verdict::Boundary
            } else {
                Verdict::Interior
            }
        }
        Some(t) if t < &one - eps => Verdict::Outside,
        Some(_) => Verdict::Boundary,
    }
}

fn shifted(p: &RatePoint, delta: &Q) -> Vec<Q> {
    let approx = p.rates();
    (0..p.dim())
        .map(|i| {
            p.exact_rate(i).unwrap_or_else(|| {
                let v = q_from_f64(approx[i]) + delta;
                if v < Q::zero() {
                    Q::zero()
                } else {
                    v
                }
            })
        })
        .collect()
}

/// Where `h` lies relative to the region spanned by `region`'s rate points.
pub fn feasibility_check(
    h: &EntropyVector,
    region: &RegionApprox,
    mode: FeasibilityMode,
) -> Result<Verdict, EstimatorError> {
    let pts: &[RatePoint] = if region.hull.is_empty() { &region.points } else { &region.hull };
    let dim = pts
        .first()
        .map(RatePoint::dim)
        .ok_or_else(|| EstimatorError::Config("rate region is empty".into()))?;
    if h.0.len() != dim {
        return Err(EstimatorError::Config(format!(
            "entropy vector has {} coordinates, rate region has {dim}",
            h.0.len()
        )));
    }
    if h.0.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(EstimatorError::Config(format!("entropy vector {h} must be finite and nonnegative")));
    }
    let hq: Vec<Q> = h.0.iter().map(|&v| q_from_f64(v)).collect();
    Ok(match mode {
        FeasibilityMode::Exact => {
            let zero = Q::zero();
            let b = bracket();
            let inner: Vec<Vec<Q>> = pts.iter().map(|p| shifted(p, &-b.clone())).collect();
            let outer: Vec<Vec<Q>> = pts.iter().map(|p| shifted(p, &b)).collect();
            let vi = classify(&hq, &inner, &zero);
            let vo = classify(&hq, &outer, &zero);
            match (vi, vo) {
                (Verdict::Interior, _) => Verdict::Interior,
                (_, Verdict::Outside) => Verdict::Outside,
                _ => Verdict::Boundary,
            }
        }
        FeasibilityMode::Float { eps } => {
            let coords: Vec<Vec<Q>> = pts.iter().map(|p| p.rates().into_iter().map(q_from_f64).collect()).collect();
            classify(&hq, &coords, &q_from_f64(eps.abs()))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zec::Source;

    fn simplex() -> RegionApprox {
        let pts = vec![
            RatePoint::new(1, vec![2, 1, 1], Source::Code),
            RatePoint::new(1, vec![1, 2, 1], Source::Code),
            RatePoint::new(1, vec![1, 1, 2], Source::Code),
        ];
        RegionApprox {
            points: pts.clone(),
            codes: Vec::new(),
            info: Vec::new(),
            hull: pts,
            n_max: 1,
            meta: Vec::new(),
        }
    }

    fn check(h: &[f64]) -> Verdict {
        feasibility_check(&EntropyVector(h.to_vec()), &simplex(), FeasibilityMode::Exact).unwrap()
    }

    #[test]
    fn simplex_examples() {
        assert_eq!(check(&[0.0, 0.0, 0.0]), Verdict::Boundary);
        assert_eq!(check(&[0.25, 0.25, 0.25]), Verdict::Interior);
        assert_eq!(check(&[1.0, 1.0, 1.0]), Verdict::Outside);
        assert_eq!(check(&[0.5, 0.25, 0.25]), Verdict::Boundary);
        assert_eq!(check(&[0.5, 0.25, 0.0]), Verdict::Boundary);
        let float = FeasibilityMode::Float { eps: 1e-9 };
        let r = simplex();
        assert_eq!(
            feasibility_check(&EntropyVector(vec![0.25; 3]), &r, float).unwrap(),
            Verdict::Interior
        );
        assert_eq!(
            feasibility_check(&EntropyVector(vec![0.5, 0.25, 0.25 + 1e-12]), &r, float).unwrap(),
            Verdict::Boundary
        );
    }

    #[test]
    fn non_dyadic_rates_are_bracketed() {
        let mut r = simplex();
        r.hull[0] = RatePoint::new(1, vec![3, 1, 1], Source::Code);
        let l3 = 3f64.log2();
        let v = |h: Vec<f64>| feasibility_check(&EntropyVector(h), &r, FeasibilityMode::Exact).unwrap();
        assert_eq!(v(vec![l3 * 0.99, 0.0, 0.0]), Verdict::Boundary);
        assert_eq!(v(vec![l3 * 0.5, 0.25, 0.2]), Verdict::Interior);
        assert_eq!(v(vec![l3 * 1.01, 0.0, 0.0]), Verdict::Outside);
        assert_eq!(v(vec![l3, 0.0, 0.0]), Verdict::Boundary);
    }

    #[test]
    fn bad_inputs() {
        let r = simplex();
        assert!(matches!(
            feasibility_check(&EntropyVector(vec![0.1, 0.1]), &r, FeasibilityMode::Exact),
            Err(EstimatorError::Config(_))
        ));
        assert!(feasibility_check(&EntropyVector(vec![-0.1, 0.1, 0.1]), &r, FeasibilityMode::Exact).is_err());
    }
}
