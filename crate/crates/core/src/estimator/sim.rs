//! Closed-form coder/estimator simulation.
//!
//! Unstable open-loop states leave the range of `f64` long before typical
//! horizons (`2^{t/4}` overflows near `t ≈ 4100`), so the error is
//! propagated in error coordinates: `e(t) = x̄(t) − X(t)` for the observer
//! and `δ(t) = x̄(t) − Aʳc_k` for the quantizer, giving
//! `X̂(t) − X(t) = e(t) − δ(t)` without cancellation. Absolute states are
//! kept only on request.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{norm_inf, spectral_radius};
use super::quantizer::{upsample, BoxState};
use super::{EstimatorError, PlantSpec, SimConfig, PLANTS};
use crate::mac::MacSpec;
use crate::zec::{ZeCode, ZeDecoder, ZecError};

/// Values beyond this magnitude stop the run.
pub const OVERFLOW_GUARD: f64 = 1e300;

/// Relative slack for envelope comparisons.
const REL_TOL: f64 = 1e-9;

const CHANNEL_STREAM: u64 = 1 << 32;

#[derive(Debug, Clone, PartialEq)]
pub struct OverflowEvent {
    pub t: usize,
    pub block: usize,
    pub plant: usize,
    pub inflations: usize,
}

/// What crossed the channel in one block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockRecord {
    pub block: usize,
    /// 1-based `(w⁰, w¹, w²)`.
    pub messages: Vec<usize>,
    pub inputs: Vec<Vec<usize>>,
    pub noise: Vec<usize>,
    pub output: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct SimTrace {
    pub seed: u64,
    pub horizon: usize,
    pub n: usize,
    /// `‖X̂ᵢ(t) − Xᵢ(t)‖∞` per step and plant.
    pub errors: Vec<Vec<f64>>,
    /// Certified bound on each entry of `errors`.
    pub bounds: Vec<Vec<f64>>,
    /// Set at block starts where some box had to be inflated.
    pub overflow: Vec<bool>,
    pub overflow_events: Vec<OverflowEvent>,
    pub blocks: Vec<BlockRecord>,
    /// Absolute `X(t)`, `X̂(t)` and `X̂(t) − X(t)` per plant, when recorded.
    pub states: Option<Vec<Vec<DVector<f64>>>>,
    pub estimates: Option<Vec<Vec<DVector<f64>>>>,
    pub error_vectors: Option<Vec<Vec<DVector<f64>>>>,
    /// First step not simulated because a value passed the overflow guard.
    pub truncated_at: Option<usize>,
    pub box_mismatches: usize,
    pub bound_violations: usize,
    /// Spectral radius of each plant's zoom map.
    pub contraction: Vec<f64>,
}

impl SimTrace {
    pub fn steps(&self) -> usize {
        self.errors.len()
    }

    pub fn step_max(&self, t: usize) -> f64 {
        self.errors[t].iter().copied().fold(0.0, f64::max)
    }

    pub fn sup_error(&self) -> Vec<f64> {
        (0..PLANTS)
            .map(|i| self.errors.iter().map(|e| e[i]).fold(0.0, f64::max))
            .collect()
    }

    /// Boundedness diagnosis.
    ///
    /// The certified envelope `B(t)` depends only on the box sequence and
    /// stays bounded exactly when every zoom map `ρ ↦ |Aⁿ|·diag(1/cells)·ρ`
    /// has spectral radius below 1. The run counts as bounded when the zoom
    /// maps contract, every post-transient windowed error maximum satisfies
    /// `M_{k+1} ≤ max(M_k, B_ss)` with `B_ss` the post-transient envelope
    /// maximum, no box overflowed after the transient, no error exceeded its
    /// bound and the trace was not truncated.
    pub fn diagnose(&self, transient: usize, window: usize) -> Diagnosis {
        let steps = self.steps();
        let err: Vec<f64> = (0..steps).map(|t| self.step_max(t)).collect();
        let env: Vec<f64> = self
            .bounds
            .iter()
            .map(|b| b.iter().copied().fold(0.0, f64::max))
            .collect();
        let start = transient.min(steps);
        let window_max = window_maxima(&err, start, window);
        let envelope = env[start..].iter().copied().fold(0.0, f64::max);
        let contraction = self.contraction.iter().copied().fold(0.0, f64::max);
        let within = window_max
            .windows(2)
            .all(|w| w[1] <= w[0].max(envelope) * (1.0 + REL_TOL));
        let non_increasing = window_max.windows(2).filter(|w| w[1] <= w[0]).count();
        let overflow_after_transient = self.overflow_events.iter().filter(|e| e.t >= transient).count();
        let end = self.truncated_at.unwrap_or(steps).min(steps);
        let fit = growth_ratio(&err[..end], self.horizon / 2, 5);
        Diagnosis {
            sup_error: self.sup_error(),
            overflow_count: self.overflow_events.len(),
            overflow_after_transient,
            envelope,
            contraction,
            non_increasing_fraction: if window_max.len() > 1 {
                non_increasing as f64 / (window_max.len() - 1) as f64
            } else {
                1.0
            },
            bounded: contraction < 1.0
                && within
                && overflow_after_transient == 0
                && self.truncated_at.is_none()
                && self.bound_violations == 0,
            growth_ratio: fit,
            truncated_at: self.truncated_at,
            window_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnosis {
    pub sup_error: Vec<f64>,
    pub overflow_count: usize,
    pub overflow_after_transient: usize,
    pub window_max: Vec<f64>,
    pub envelope: f64,
    /// Largest spectral radius among the plants' zoom maps.
    pub contraction: f64,
    /// Share of consecutive post-transient windows with `M_{k+1} ≤ M_k`.
    pub non_increasing_fraction: f64,
    pub bounded: bool,
    pub growth_ratio: Option<f64>,
    pub truncated_at: Option<usize>,
}

/// Maxima over consecutive full windows of `window` steps from `start`.
pub fn window_maxima(values: &[f64], start: usize, window: usize) -> Vec<f64> {
    assert!(window > 0);
    values
        .get(start..)
        .unwrap_or(&[])
        .chunks_exact(window)
        .map(|c| c.iter().copied().fold(0.0, f64::max))
        .collect()
}

/// Per-step growth ratio `2^s`, where `s` is the least-squares slope of
/// `log₂` of the windowed maxima against time, using windows of `window`
/// steps from `start`. Windows with a zero maximum are skipped.
pub fn growth_ratio(values: &[f64], start: usize, window: usize) -> Option<f64> {
    let pts: Vec<(f64, f64)> = window_maxima(values, start, window)
        .into_iter()
        .enumerate()
        .filter(|(_, m)| *m > 0.0 && m.is_finite())
        .map(|(k, m)| ((k * window) as f64, m.log2()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some((sxy / sxx).exp2())
}

/// Deterministic per-plant data shared by every seed.
#[derive(Debug, Clone)]
struct Prepared {
    plant: PlantSpec,
    l: DMatrix<f64>,
    f: DMatrix<f64>,
    a_n: DMatrix<f64>,
    a_pow_norm: Vec<f64>,
    cells: Vec<usize>,
    /// Bound on `‖e(t)‖∞`.
    e_obs: Vec<f64>,
    /// Accumulated-noise margin of each block.
    margin: Vec<f64>,
    /// Bound on the noise part of `δ(kn+r)`.
    inter: Vec<f64>,
    contraction: f64,
}

impl Prepared {
    fn new(plant: PlantSpec, l: DMatrix<f64>, cells: Vec<usize>, n: usize, horizon: usize) -> Self {
        let f = &plant.a - &l * &plant.c;
        let d = plant.state_dim();
        let beta = norm_inf(&l) * plant.w_bound + plant.v_bound;
        let lc = norm_inf(&(&l * &plant.c));
        let mut e_obs = Vec::with_capacity(horizon + 1);
        let mut fp = DMatrix::<f64>::identity(d, d);
        let mut acc = 0.0;
        for _ in 0..=horizon {
            let nf = norm_inf(&fp);
            e_obs.push(nf * plant.l + acc);
            acc += nf * beta;
            if nf > 0.0 {
                fp = &f * fp;
                if norm_inf(&fp) < 1e-300 {
                    fp.fill(0.0);
                }
            }
        }
        let v_eff: Vec<f64> = e_obs.iter().map(|e| lc * e + norm_inf(&l) * plant.w_bound).collect();
        let mut a_pow_norm = Vec::with_capacity(n + 1);
        let mut ap = DMatrix::<f64>::identity(d, d);
        for _ in 0..=n {
            a_pow_norm.push(norm_inf(&ap));
            ap = &plant.a * ap;
        }
        let a_n = upsample_matrix(&plant.a, n);
        let zoom = a_n.abs() * DMatrix::from_diagonal(&DVector::from_iterator(d, cells.iter().map(|&c| 1.0 / c as f64)));
        let contraction = spectral_radius(&zoom).unwrap_or(f64::INFINITY);
        let blocks = horizon.div_ceil(n) + 1;
        let ve = |t: usize| v_eff[t.min(horizon)];
        let margin = (0..blocks)
            .map(|k| (0..n).map(|xi| a_pow_norm[n - 1 - xi] * ve(k * n + xi)).sum())
            .collect();
        let inter = (0..=horizon)
            .map(|t| {
                let (k, r) = (t / n, t % n);
                (0..r).map(|s| a_pow_norm[r - 1 - s] * ve(k * n + s)).sum()
            })
            .collect();
        Self {
            plant,
            l,
            f,
            a_n,
            a_pow_norm,
            cells,
            e_obs,
            margin,
            inter,
            contraction,
        }
    }
}

fn upsample_matrix(a: &DMatrix<f64>, r: usize) -> DMatrix<f64> {
    let mut out = DMatrix::<f64>::identity(a.nrows(), a.ncols());
    for _ in 0..r {
        out = a * out;
    }
    out
}

fn uniform(rng: &mut ChaCha8Rng, bound: f64, dim: usize) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| {
        if bound > 0.0 {
            rng.random_range(-bound..=bound).clamp(-bound, bound)
        } else {
            0.0
        }
    })
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// A validated configuration ready to run any number of seeds.
#[derive(Debug, Clone)]
pub struct Simulator {
    prepared: Vec<Prepared>,
    mac: MacSpec,
    code: ZeCode,
    decoder: ZeDecoder,
    n: usize,
    horizon: usize,
    inflate: f64,
    record_states: bool,
    pub transient: usize,
    pub window: usize,
}

impl Simulator {
    pub fn new(cfg: &SimConfig, mac: &MacSpec, code: &ZeCode) -> Result<Self, EstimatorError> {
        if cfg.plants.len() != PLANTS {
            return Err(EstimatorError::Config(format!(
                "expected {PLANTS} plants, got {}",
                cfg.plants.len()
            )));
        }
        for p in &cfg.plants {
            p.check_assumptions()?;
        }
        if cfg.horizon == 0 {
            return Err(EstimatorError::Config("horizon must be positive".into()));
        }
        if !(cfg.inflate > 1.0 && cfg.inflate.is_finite()) {
            return Err(EstimatorError::Config(format!("inflation factor {} must exceed 1", cfg.inflate)));
        }
        if code.users() + 1 != PLANTS || mac.users() != code.users() {
            return Err(EstimatorError::Config(format!(
                "the estimator needs a two-user code and channel, got {} and {}",
                code.users(),
                mac.users()
            )));
        }
        code.check_compatible(mac)?;
        let decoder = ZeDecoder::new(code, mac)?;
        let n = cfg.quantizer.n;
        if n != code.blocklength() {
            return Err(EstimatorError::Config(format!(
                "quantizer downsampling {n} differs from code blocklength {}",
                code.blocklength()
            )));
        }
        if cfg.quantizer.cells.len() != PLANTS {
            return Err(EstimatorError::Config(format!(
                "expected cell counts for {PLANTS} plants, got {}",
                cfg.quantizer.cells.len()
            )));
        }
        let gains = cfg.observer.gains(&cfg.plants)?;
        let mut prepared = Vec::with_capacity(PLANTS);
        for (i, (p, l)) in cfg.plants.iter().zip(gains).enumerate() {
            let cells = cfg.quantizer.cells[i].axes();
            if cells.len() != p.state_dim() || cells.contains(&0) {
                return Err(EstimatorError::Config(format!(
                    "plant {i}: need {} positive per-axis cell counts, got {cells:?}",
                    p.state_dim()
                )));
            }
            let total: usize = cells.iter().product();
            if total != code.cardinalities()[i] {
                return Err(EstimatorError::Config(format!(
                    "plant {i}: {total} quantizer cells but message {i} has {} values",
                    code.cardinalities()[i]
                )));
            }
            prepared.push(Prepared::new(p.clone(), l, cells, n, cfg.horizon));
        }
        Ok(Self {
            prepared,
            mac: mac.clone(),
            code: code.clone(),
            decoder,
            n,
            horizon: cfg.horizon,
            inflate: cfg.inflate,
            record_states: cfg.record_states,
            transient: cfg.transient(),
            window: cfg.window(),
        })
    }

    /// Per-plant `log₂(cells)/n − hᵢ`.
    pub fn rate_margins(&self) -> Result<Vec<f64>, EstimatorError> {
        self.prepared
            .iter()
            .map(|p| {
                let cells: usize = p.cells.iter().product();
                Ok((cells as f64).log2() / self.n as f64 - p.plant.entropy()?)
            })
            .collect()
    }

    pub fn run(&self, seed: u64) -> Result<SimTrace, EstimatorError> {
        let n = self.n;
        let horizon = self.horizon;
        let mut v_rng: Vec<ChaCha8Rng> = (0..PLANTS as u64).map(|i| stream(seed, 3 * i)).collect();
        let mut w_rng: Vec<ChaCha8Rng> = (0..PLANTS as u64).map(|i| stream(seed, 3 * i + 1)).collect();
        let mut x0_rng: Vec<ChaCha8Rng> = (0..PLANTS as u64).map(|i| stream(seed, 3 * i + 2)).collect();
        let mut z_rng = stream(seed, CHANNEL_STREAM);
        let q = self.mac.noise_alphabet().len();

        let mut x: Vec<DVector<f64>> = Vec::new();
        let mut xbar: Vec<DVector<f64>> = Vec::new();
        let mut e_o: Vec<DVector<f64>> = Vec::new();
        let mut delta: Vec<DVector<f64>> = Vec::new();
        let mut enc: Vec<BoxState> = Vec::new();
        let mut dec: Vec<BoxState> = Vec::new();
        for (i, p) in self.prepared.iter().enumerate() {
            let d = p.plant.state_dim();
            let x0 = uniform(&mut x0_rng[i], p.plant.l, d);
            e_o.push(-&x0);
            x.push(x0);
            xbar.push(DVector::zeros(d));
            delta.push(DVector::zeros(d));
            let b = BoxState::new(DVector::zeros(d), DVector::zeros(d), p.cells.clone());
            enc.push(b.clone());
            dec.push(b);
        }

        let mut trace = SimTrace {
            seed,
            horizon,
            n,
            errors: Vec::with_capacity(horizon),
            bounds: Vec::with_capacity(horizon),
            overflow: Vec::with_capacity(horizon),
            overflow_events: Vec::new(),
            blocks: Vec::with_capacity(horizon / n + 1),
            states: self.record_states.then(Vec::new),
            estimates: self.record_states.then(Vec::new),
            error_vectors: self.record_states.then(Vec::new),
            truncated_at: None,
            box_mismatches: 0,
            bound_violations: 0,
            contraction: self.prepared.iter().map(|p| p.contraction).collect(),
        };

        let mut k = 0;
        'blocks: while k * n < horizon {
            let t0 = k * n;
            // Encoders quantize the offset of x̄(kn) from the box center.
            let mut messages = Vec::with_capacity(PLANTS);
            let mut inflations = Vec::with_capacity(PLANTS);
            for (i, b) in enc.iter_mut().enumerate() {
                let (idx, infl) = b.quantize_offset(&delta[i], self.inflate);
                if infl > 0 {
                    trace.overflow_events.push(OverflowEvent {
                        t: t0,
                        block: k,
                        plant: i,
                        inflations: infl,
                    });
                }
                messages.push(idx + 1);
                inflations.push(infl);
            }
            let overflowed = inflations.iter().any(|&c| c > 0);

            let inputs: Vec<Vec<usize>> = self.code.encode(&messages).into_iter().map(<[usize]>::to_vec).collect();
            let noise: Vec<usize> = (0..n).map(|_| z_rng.random_range(0..q)).collect();
            let mut xs = vec![0; inputs.len()];
            let output: Vec<usize> = (0..n)
                .map(|pos| {
                    for (x, cw) in xs.iter_mut().zip(&inputs) {
                        *x = cw[pos];
                    }
                    self.mac.eval(&xs, noise[pos])
                })
                .collect();
            let decoded = self.decoder.decode(&output)?;
            if decoded != messages {
                return Err(ZecError::Internal(format!("block {k}: sent {messages:?}, decoded {decoded:?}")).into());
            }

            // Decoders mirror the out-of-band inflation count, then both zoom.
            let mut centers = Vec::with_capacity(PLANTS);
            let mut rho_start = Vec::with_capacity(PLANTS);
            let mut shifts = Vec::with_capacity(PLANTS);
            for i in 0..PLANTS {
                let p = &self.prepared[i];
                for _ in 0..inflations[i] {
                    dec[i].inflate(self.inflate);
                }
                if !enc[i].bit_identical(&dec[i]) {
                    trace.box_mismatches += 1;
                }
                centers.push(dec[i].center.clone());
                rho_start.push(enc[i].rho.iter().copied().fold(0.0, f64::max));
                shifts.push(&p.a_n * enc[i].midpoint_offset(messages[i] - 1));
                enc[i].advance(messages[i] - 1, &p.a_n, p.margin[k]);
                dec[i].advance(decoded[i] - 1, &p.a_n, p.margin[k]);
                if !enc[i].bit_identical(&dec[i]) {
                    trace.box_mismatches += 1;
                }
            }
            debug_assert_eq!(trace.box_mismatches, 0, "encoder and decoder boxes diverged");
            trace.blocks.push(BlockRecord {
                block: k,
                messages,
                inputs,
                noise,
                output,
            });

            for r in 0..n {
                let t = t0 + r;
                if t >= horizon {
                    break 'blocks;
                }
                let mut errs = Vec::with_capacity(PLANTS);
                let mut bnds = Vec::with_capacity(PLANTS);
                let mut row_x = Vec::new();
                let mut row_xhat = Vec::new();
                let mut row_e = Vec::new();
                for i in 0..PLANTS {
                    let p = &self.prepared[i];
                    let ev = &e_o[i] - &delta[i];
                    let err = ev.amax();
                    let bound = p.e_obs[t] + p.a_pow_norm[r] * rho_start[i] + p.inter[t];
                    if err > bound * (1.0 + REL_TOL) {
                        trace.bound_violations += 1;
                    }
                    errs.push(err);
                    bnds.push(bound);
                    if self.record_states {
                        row_x.push(x[i].clone());
                        row_xhat.push(upsample(&p.plant.a, &centers[i], r));
                        row_e.push(ev);
                    }
                }
                debug_assert_eq!(trace.bound_violations, 0, "error exceeded its certified bound at t={t}");
                trace.errors.push(errs);
                trace.bounds.push(bnds);
                trace.overflow.push(r == 0 && overflowed);
                if self.record_states {
                    trace.states.as_mut().unwrap().push(row_x);
                    trace.estimates.as_mut().unwrap().push(row_xhat);
                    trace.error_vectors.as_mut().unwrap().push(row_e);
                }

                // Plant, observer and quantizer offset advance one step.
                let mut blown = false;
                for i in 0..PLANTS {
                    let p = &self.prepared[i];
                    let d = p.plant.state_dim();
                    let v = uniform(&mut v_rng[i], p.plant.v_bound, d);
                    let w = uniform(&mut w_rng[i], p.plant.w_bound, p.plant.output_dim());
                    let nu = &p.l * (&w - &p.plant.c * &e_o[i]);
                    delta[i] = &p.plant.a * &delta[i] + &nu;
                    e_o[i] = &p.f * &e_o[i] + &p.l * &w - &v;
                    if self.record_states {
                        let y = &p.plant.c * &x[i] + &w;
                        xbar[i] = &p.plant.a * &xbar[i] + &p.l * (y - &p.plant.c * &xbar[i]);
                        x[i] = &p.plant.a * &x[i] + &v;
                    }
                    if r + 1 == n {
                        delta[i] -= &shifts[i];
                    }
                    blown |= delta[i].iter().chain(e_o[i].iter()).any(|v| !(v.abs() < OVERFLOW_GUARD));
                }
                if blown {
                    trace.truncated_at = Some(t + 1);
                    break 'blocks;
                }
            }
            k += 1;
        }
        Ok(trace)
    }
}

/// Validates `cfg` and runs one seed.
pub fn run_simulation(cfg: &SimConfig, mac: &MacSpec, code: &ZeCode, seed: u64) -> Result<SimTrace, EstimatorError> {
    Simulator::new(cfg, mac, code)?.run(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::{CellSpec, ObserverSpec, QuantizerSpec};
    use crate::mac::fixtures::binary_adder;
    use crate::zec::time_share;

    fn unit(k: usize) -> ZeCode {
        let two = vec![vec![0], vec![1]];
        let one = vec![vec![0]];
        match k {
            0 => ZeCode::new(1, vec![2, 1, 1], vec![two.clone(), two], ""),
            1 => ZeCode::new(1, vec![1, 2, 1], vec![two, one], ""),
            _ => ZeCode::new(1, vec![1, 1, 2], vec![one, two], ""),
        }
        .unwrap()
    }

    fn shared_code() -> ZeCode {
        let mac = binary_adder();
        let (_, ab) = time_share(&unit(0), &unit(1), 1, 1, &mac).unwrap();
        time_share(&ab, &unit(2), 1, 1, &mac).unwrap().1
    }

    fn config(plants: Vec<PlantSpec>, n: usize, cells: [usize; 3], horizon: usize) -> SimConfig {
        SimConfig {
            plants,
            observer: ObserverSpec::default(),
            quantizer: QuantizerSpec {
                n,
                cells: cells.iter().map(|&c| CellSpec::Scalar(c)).collect(),
            },
            horizon,
            seeds: vec![],
            transient: None,
            window: None,
            inflate: 4.0,
            record_states: false,
        }
    }

    fn quarter(noise: f64, l: f64) -> Vec<PlantSpec> {
        vec![PlantSpec::scalar(2f64.powf(0.25), 1.0, noise, noise, l); 3]
    }

    #[test]
    fn zero_noise_is_exact() {
        let cfg = config(quarter(0.0, 0.0), 3, [2, 2, 2], 1000);
        let tr = run_simulation(&cfg, &binary_adder(), &shared_code(), 7).unwrap();
        assert_eq!(tr.steps(), 1000);
        assert!(tr.errors.iter().flatten().all(|&e| e == 0.0));
    }

    #[test]
    fn error_matches_absolute_difference() {
        let mut cfg = config(quarter(0.01, 1.0), 3, [2, 2, 2], 60);
        cfg.record_states = true;
        let tr = run_simulation(&cfg, &binary_adder(), &shared_code(), 3).unwrap();
        let (xs, xh, ev) = (
            tr.states.as_ref().unwrap(),
            tr.estimates.as_ref().unwrap(),
            tr.error_vectors.as_ref().unwrap(),
        );
        for t in 0..tr.steps() {
            for i in 0..PLANTS {
                let direct = &xh[t][i] - &xs[t][i];
                let scale = xs[t][i].amax().max(1.0);
                assert!((direct - &ev[t][i]).amax() <= 1e-12 * scale, "t={t} plant={i}");
            }
        }
    }

    #[test]
    fn feasible_rates_stay_bounded() {
        let cfg = config(quarter(0.001, 1.0), 3, [2, 2, 2], 3000);
        let sim = Simulator::new(&cfg, &binary_adder(), &shared_code()).unwrap();
        assert!(sim.rate_margins().unwrap().iter().all(|m| *m > 0.0));
        for seed in 0..5 {
            let tr = sim.run(seed).unwrap();
            assert_eq!(tr.box_mismatches, 0);
            assert_eq!(tr.bound_violations, 0);
            let d = tr.diagnose(sim.transient, sim.window);
            assert!(d.bounded, "{d:?}");
            assert_eq!(d.overflow_count, 0);
        }
    }

    #[test]
    fn starved_plant_diverges() {
        let plants = vec![
            PlantSpec::scalar(0.5, 1.0, 0.001, 0.001, 1.0).degenerate(),
            PlantSpec::scalar(4.0, 1.0, 0.001, 0.001, 1.0),
            PlantSpec::scalar(0.5, 1.0, 0.001, 0.001, 1.0).degenerate(),
        ];
        let cfg = config(plants, 1, [1, 2, 1], 100);
        let tr = run_simulation(&cfg, &binary_adder(), &unit(1), 11).unwrap();
        let d = tr.diagnose(cfg.transient(), cfg.window());
        assert!(!d.bounded);
        let ratio = d.growth_ratio.unwrap();
        assert!((1.9..=2.1).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn configuration_errors() {
        let mac = binary_adder();
        let code = shared_code();
        let bad_cells = config(quarter(0.0, 0.0), 3, [2, 4, 2], 10);
        assert!(matches!(Simulator::new(&bad_cells, &mac, &code), Err(EstimatorError::Config(_))));
        let bad_n = config(quarter(0.0, 0.0), 2, [2, 2, 2], 10);
        assert!(matches!(Simulator::new(&bad_n, &mac, &code), Err(EstimatorError::Config(_))));
        let mut two = config(quarter(0.0, 0.0), 3, [2, 2, 2], 10);
        two.plants.pop();
        assert!(Simulator::new(&two, &mac, &code).is_err());
        let mut stable = config(quarter(0.0, 0.0), 3, [2, 2, 2], 10);
        stable.plants[2] = PlantSpec::scalar(0.5, 1.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            Simulator::new(&stable, &mac, &code),
            Err(EstimatorError::Assumption { label, .. }) if label == "A5"
        ));
    }

    #[test]
    fn growth_fit() {
        let v: Vec<f64> = (0..100).map(|t| 2f64.powi(t)).collect();
        assert!((growth_ratio(&v, 50, 5).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(window_maxima(&[1.0, 3.0, 2.0, 5.0, 4.0], 1, 2), vec![3.0, 5.0]);
    }
}
