//! Small dense linear algebra for plant checks: characteristic polynomials,
//! eigenvalues by polynomial root finding, observability, Jordan structure
//! and observer gains.

use nalgebra::{Complex, DMatrix};

use super::EstimatorError;

/// Eigenvalues with `|λ| ≥ 1 − UNSTABLE_MARGIN` count as unstable.
pub const UNSTABLE_MARGIN: f64 = 1e-12;

/// Root-finder stopping tolerance, relative to root magnitude.
pub const ROOT_TOL: f64 = 1e-13;

const MAX_DIM: usize = 6;
const MAX_ITER: usize = 20_000;

fn echo(a: &DMatrix<f64>) -> String {
    let rows: Vec<String> = a
        .row_iter()
        .map(|r| {
            let vals: Vec<String> = r.iter().map(|v| format!("{v}")).collect();
            format!("[{}]", vals.join(", "))
        })
        .collect();
    format!("[{}]", rows.join(", "))
}

/// Coefficients `c₀ … c_d` (monic, `c_d = 1`) of `det(λI − A)` by the
/// Faddeev–LeVerrier recursion.
pub fn char_poly(a: &DMatrix<f64>) -> Vec<f64> {
    let d = a.nrows();
    let mut coeffs = vec![0.0; d + 1];
    coeffs[d] = 1.0;
    let id = DMatrix::<f64>::identity(d, d);
    let mut m = DMatrix::<f64>::zeros(d, d);
    for k in 1..=d {
        m = a * &m + &id * coeffs[d - k + 1];
        coeffs[d - k] = -(a * &m).trace() / k as f64;
    }
    coeffs
}

fn horner(coeffs: &[f64], z: Complex<f64>) -> Complex<f64> {
    coeffs
        .iter()
        .rev()
        .fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// Roots of a monic real polynomial by Durand–Kerner iteration.
///
/// Iteration stops once every update is below `ROOT_TOL · max(1, |z|)`.
/// Repeated roots converge only linearly, so after `MAX_ITER` sweeps the
/// residual is accepted if `|p(z)| ≤ 1e-8 · Σ|cₖ||z|ᵏ`.
pub fn poly_roots(coeffs: &[f64]) -> Option<Vec<Complex<f64>>> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Some(Vec::new());
    }
    let radius = 1.0 + coeffs[..d].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let seed = Complex::new(0.4, 0.9);
    let mut z: Vec<Complex<f64>> = (0..d).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    for _ in 0..MAX_ITER {
        let mut worst: f64 = 0.0;
        for i in 0..d {
            let mut denom = Complex::new(1.0, 0.0);
            for j in 0..d {
                if j != i {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex::new(f64::EPSILON, f64::EPSILON);
            }
            let step = horner(coeffs, z[i]) / denom;
            z[i] -= step;
            worst = worst.max(step.norm() / z[i].norm().max(1.0));
        }
        if !worst.is_finite() {
            return None;
        }
        if worst <= ROOT_TOL {
            return Some(z);
        }
    }
    let ok = z.iter().all(|&r| {
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.abs() * r.norm().powi(k as i32))
            .sum();
        horner(coeffs, r).norm() <= 1e-8 * scale.max(1.0)
    });
    ok.then_some(z)
}

fn check_square(a: &DMatrix<f64>) -> Result<(), EstimatorError> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(EstimatorError::Config(format!(
            "system matrix must be square and nonempty, got {}x{}",
            a.nrows(),
            a.ncols()
        )));
    }
    if a.nrows() > MAX_DIM {
        return Err(EstimatorError::Config(format!(
            "state dimension {} exceeds {MAX_DIM}",
            a.nrows()
        )));
    }
    if a.iter().any(|v| !v.is_finite()) {
        return Err(EstimatorError::Config("system matrix has non-finite entries".into()));
    }
    Ok(())
}

/// Eigenvalues of `A` as roots of its characteristic polynomial.
pub fn eigenvalues(a: &DMatrix<f64>) -> Result<Vec<Complex<f64>>, EstimatorError> {
    check_square(a)?;
    poly_roots(&char_poly(a)).ok_or_else(|| EstimatorError::Numerical {
        detail: "eigenvalue iteration did not converge".into(),
        matrix: echo(a),
    })
}

/// `Σ log₂|λ|` over eigenvalues with `|λ| ≥ 1 − UNSTABLE_MARGIN`, with
/// multiplicity, in bits per step.
pub fn topological_entropy(a: &DMatrix<f64>) -> Result<f64, EstimatorError> {
    Ok(eigenvalues(a)?
        .iter()
        .map(|l| l.norm())
        .filter(|&m| m >= 1.0 - UNSTABLE_MARGIN)
        .map(|m| m.log2().max(0.0))
        .fold(0.0, |acc, v| acc + v))
}

pub fn spectral_radius(a: &DMatrix<f64>) -> Result<f64, EstimatorError> {
    Ok(eigenvalues(a)?.iter().map(|l| l.norm()).fold(0.0, f64::max))
}

/// Induced ∞-norm: largest absolute row sum.
pub fn norm_inf(a: &DMatrix<f64>) -> f64 {
    a.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn rank_of(svals: impl Iterator<Item = f64>, scale: f64, rel: f64) -> usize {
    let tol = rel * scale.max(1.0);
    svals.filter(|&s| s > tol).count()
}

pub fn rank(a: &DMatrix<f64>) -> usize {
    if a.is_empty() {
        return 0;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let scale = sv.iter().copied().fold(0.0, f64::max);
    rank_of(sv.iter().copied(), scale, 1e-9)
}

/// `[C; CA; …; CA^{d-1}]`.
pub fn observability_matrix(a: &DMatrix<f64>, c: &DMatrix<f64>) -> DMatrix<f64> {
    let d = a.nrows();
    let b = c.nrows();
    let mut o = DMatrix::<f64>::zeros(b * d, d);
    let mut block = c.clone();
    for k in 0..d {
        o.view_mut((k * b, 0), (b, d)).copy_from(&block);
        block = &block * a;
    }
    o
}

pub fn is_observable(a: &DMatrix<f64>, c: &DMatrix<f64>) -> bool {
    rank(&observability_matrix(a, c)) == a.nrows()
}

fn complex_rank(m: &DMatrix<Complex<f64>>) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let scale = sv.iter().copied().fold(0.0, f64::max);
    rank_of(sv.iter().copied(), scale, 1e-6)
}

/// Largest Jordan block size of `A`, capped at 3 (the first unsupported size).
pub fn max_jordan_block(a: &DMatrix<f64>) -> Result<usize, EstimatorError> {
    let eig = eigenvalues(a)?;
    let d = a.nrows();
    let ac: DMatrix<Complex<f64>> = a.map(|v| Complex::new(v, 0.0));
    let id = DMatrix::<Complex<f64>>::identity(d, d);
    // Cluster numerically repeated roots.
    let mut reps: Vec<(Complex<f64>, usize)> = Vec::new();
    for l in eig {
        match reps.iter_mut().find(|(r, _)| (*r - l).norm() < 1e-6 * l.norm().max(1.0)) {
            Some((r, k)) => {
                *r = (*r * *k as f64 + l) / (*k as f64 + 1.0);
                *k += 1;
            }
            None => reps.push((l, 1)),
        }
    }
    let mut largest = 1;
    for (l, mult) in reps {
        if mult == 1 {
            continue;
        }
        let n1 = &ac - &id * l;
        let n2 = &n1 * &n1;
        let n3 = &n2 * &n1;
        let (r1, r2, r3) = (complex_rank(&n1), complex_rank(&n2), complex_rank(&n3));
        if r2 > r3 {
            return Ok(3);
        }
        if r1 > r2 {
            largest = 2;
        }
    }
    Ok(largest)
}

fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut c = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; c.len() + 1];
        for (k, &v) in c.iter().enumerate() {
            next[k + 1] += v;
            next[k] -= r * v;
        }
        c = next;
    }
    c
}

/// Observer gain for a single output row by Ackermann's formula, placing the
/// poles of `A − LC` at `0.5·k/d` for `k = 1…d`.
fn ackermann(a: &DMatrix<f64>, c_row: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let d = a.nrows();
    let poles: Vec<f64> = (1..=d).map(|k| 0.5 * k as f64 / d as f64).collect();
    let coeffs = poly_from_roots(&poles);
    let mut phi = DMatrix::<f64>::zeros(d, d);
    let mut power = DMatrix::<f64>::identity(d, d);
    for &ck in &coeffs {
        phi += &power * ck;
        power = &power * a;
    }
    let o = observability_matrix(a, c_row);
    let inv = o.try_inverse()?;
    let mut e = DMatrix::<f64>::zeros(d, 1);
    e[(d - 1, 0)] = 1.0;
    Some(phi * inv * e)
}

/// Default observer gain: `L = A/C` for scalar plants, otherwise Ackermann
/// pole placement on the first output row that alone makes the pair
/// observable. Returns `None` when no single row does.
pub fn auto_gain(a: &DMatrix<f64>, c: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    let d = a.nrows();
    let b = c.nrows();
    if d == 1 && b == 1 {
        return (c[(0, 0)] != 0.0).then(|| DMatrix::from_element(1, 1, a[(0, 0)] / c[(0, 0)]));
    }
    for i in 0..b {
        let row = c.rows(i, 1).into_owned();
        if !is_observable(a, &row) {
            continue;
        }
        let col = ackermann(a, &row)?;
        let mut l = DMatrix::<f64>::zeros(d, b);
        l.set_column(i, &col.column(0));
        return Some(l);
    }
    None
}
