//! Finite-blocklength zero-error rate regions.
//!
//! Two independent enumerations are provided. [`enumerate_region_thm1`]
//! optimizes over auxiliary structures `(U, X¹, …, X^M)` and reads rates off
//! overlap partitions; [`enumerate_region_bruteforce`] searches encoder tables
//! directly and accepts a code only if every pair of distinct messages has
//! disjoint output sets.
//!
//! # Reduction used by the structural enumeration
//!
//! For a structure whose slices `⟦X¹,…,X^M|u⟧` are products, the rate box is
//! `w⁰ ≤ |⟦U|Y⟧*|`, `wʲ ≤ min_u |⟦Xʲ|Y,u⟧*|`. Deleting values of `U` or of
//! any `Xʲ` only removes edges from the overlap graphs, so components can
//! only split. Keeping one `u` per block of `⟦U|Y⟧*` and one `xʲ` per block
//! of each slice partition therefore preserves the box, and leaves a
//! structure in which
//!
//! * each slice is a product `S¹(u) × … × S^M(u)` with `|Sʲ(u)| = wʲ`,
//! * within a slice, the sets `Oʲ(x) = ⋃ outputs(x, x⁻ʲ)` over `x⁻ʲ ∈ S⁻ʲ(u)`
//!   are pairwise disjoint for every user ("isolated slice"),
//! * the output sets of distinct slices are pairwise disjoint.
//!
//! Conversely every such family is itself a valid structure whose overlap
//! partitions are all singletons. So `w⁰` for private sizes `s` is the
//! maximum number of isolated slices of size `s` with pairwise disjoint
//! outputs, a set-packing problem over the output alphabet `𝒴ⁿ`. Only
//! inclusion-minimal output sets need to be considered.
//!
//! [`enumerate_region_thm1_exhaustive`] skips the reduction and evaluates
//! the partitions of every family of product slices through the
//! uncertain-variable engine; it is only usable on tiny instances and exists
//! to cross-check the reduction.

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::code::{is_zero_error, ZeCode, ZeDecoder};
use super::construct::construct_code;
use super::rate::{maximal_indices, RatePoint, Source};
use super::ZecError;
use crate::geometry::{convex_hull_indices, q_from_f64};
use crate::mac::{extend_joint, names, x_block_vars, y_block_vars, InputProcess, MacError, MacSpec, MixedRadix, DEFAULT_LIMIT_N};
use crate::uv::{Symbol, Tuple};

/// Tolerance used when deciding hull vertices from floating-point rates.
pub const HULL_EPS: f64 = 1e-9;

/// Enumeration bounds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Bound on `|⟦U⟧|`, i.e. on `w_max⁰`. Defaults to `|𝒴|ⁿ`.
    pub cap_u: Option<usize>,
    /// Bound on each private cardinality. Defaults to `|𝒳ʲ|ⁿ`.
    pub cap_wmax: Option<usize>,
    pub limit_n: usize,
    /// Largest accepted search-size estimate.
    pub search_limit: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            cap_u: None,
            cap_wmax: None,
            limit_n: DEFAULT_LIMIT_N,
            search_limit: 50_000_000,
        }
    }
}

impl Caps {
    pub fn uniform(cap: usize) -> Self {
        Self {
            cap_u: Some(cap),
            cap_wmax: Some(cap),
            ..Self::default()
        }
    }
}

/// Provenance and diagnostics of an enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionMeta {
    pub method: String,
    pub cap_u: usize,
    pub cap_wmax: Vec<usize>,
    pub search_estimate: u128,
    pub warnings: Vec<String>,
}

/// Maximal achievable points, their witness codes and the hull.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionApprox {
    pub points: Vec<RatePoint>,
    /// Witness code per point, same order.
    pub codes: Vec<ZeCode>,
    /// Per point: `I*[U;Y]` then `I*[Xʲ;Y|U]` in bits for structural
    /// witnesses, empty otherwise.
    pub info: Vec<Vec<f64>>,
    pub hull: Vec<RatePoint>,
    pub n_max: usize,
    pub meta: Vec<RegionMeta>,
}

impl RegionApprox {
    fn assemble(entries: Vec<(RatePoint, ZeCode, Vec<f64>)>, n_max: usize, meta: Vec<RegionMeta>) -> Self {
        let pts: Vec<RatePoint> = entries.iter().map(|e| e.0.clone()).collect();
        let mut points = Vec::new();
        let mut codes = Vec::new();
        let mut info = Vec::new();
        for i in maximal_indices(&pts) {
            let (p, c, v) = entries[i].clone();
            points.push(p);
            codes.push(c);
            info.push(v);
        }
        let hull = hull_of(&points);
        Self {
            points,
            codes,
            info,
            hull,
            n_max,
            meta,
        }
    }

    fn into_entries(self) -> (Vec<(RatePoint, ZeCode, Vec<f64>)>, usize, Vec<RegionMeta>) {
        let entries = self
            .points
            .into_iter()
            .zip(self.codes)
            .zip(self.info)
            .map(|((p, c), v)| (p, c, v))
            .collect();
        (entries, self.n_max, self.meta)
    }

    /// Union of several regions, reduced to maximal points.
    pub fn merge(regions: Vec<RegionApprox>) -> Self {
        let mut all = Vec::new();
        let mut n_max = 0;
        let mut meta = Vec::new();
        for r in regions {
            let (e, n, m) = r.into_entries();
            all.extend(e);
            n_max = n_max.max(n);
            meta.extend(m);
        }
        Self::assemble(all, n_max, meta)
    }

    /// Adds extra points (for instance time-sharing composites).
    pub fn with_points(self, extra: Vec<(RatePoint, ZeCode)>) -> Self {
        let (mut all, n_max, meta) = self.into_entries();
        all.extend(extra.into_iter().map(|(p, c)| (p, c, Vec::new())));
        Self::assemble(all, n_max, meta)
    }

    pub fn warnings(&self) -> Vec<String> {
        self.meta.iter().flat_map(|m| m.warnings.iter().cloned()).collect()
    }

    /// Whether some stored point weakly dominates `p`.
    pub fn contains(&self, p: &RatePoint) -> bool {
        self.points.iter().any(|q| p.weakly_dominated_by(q))
    }
}

fn hull_of(points: &[RatePoint]) -> Vec<RatePoint> {
    if points.is_empty() {
        return Vec::new();
    }
    let coords: Vec<_> = points.iter().map(RatePoint::coords).collect();
    convex_hull_indices(&coords, &q_from_f64(HULL_EPS))
        .into_iter()
        .map(|i| points[i].clone())
        .collect()
}

/// Points present in one region and absent from the other, compared exactly
/// on rates.
pub fn region_diff(a: &RegionApprox, b: &RegionApprox) -> Vec<String> {
    let mut out = Vec::new();
    for (x, y, label) in [(a, b, "only in first"), (b, a, "only in second")] {
        for p in &x.points {
            if !y.points.iter().any(|q| q.same_rates(p)) {
                out.push(format!(
                    "{label}: n={} w_max={:?} rates={:?}",
                    p.blocklength,
                    p.cardinalities,
                    p.rates()
                ));
            }
        }
    }
    out
}

/// Precomputed single-block geometry: codeword spaces and output sets of
/// every codeword tuple.
struct Space<'a> {
    mac: &'a MacSpec,
    n: usize,
    /// `|𝒳ʲ|ⁿ` per user.
    sizes: Vec<usize>,
    ny: usize,
    outputs: Vec<FixedBitSet>,
    min_outputs: usize,
}

impl<'a> Space<'a> {
    fn new(mac: &'a MacSpec, n: usize, caps: &Caps) -> Result<Self, ZecError> {
        if n == 0 {
            return Err(MacError::ZeroBlocklength.into());
        }
        if n > caps.limit_n {
            return Err(MacError::BlocklengthLimit { n, limit: caps.limit_n }.into());
        }
        let ny = mac.output_space(n)?;
        if ny > 1 << 24 {
            return Err(MacError::OutputSpaceTooLarge {
                base: mac.output_alphabet().len(),
                n,
            }
            .into());
        }
        let ny = ny as usize;
        let sizes: Vec<usize> = mac
            .input_alphabets()
            .iter()
            .map(|a| a.len().pow(n as u32))
            .collect();
        let mut space = Self {
            mac,
            n,
            sizes,
            ny,
            outputs: Vec::new(),
            min_outputs: usize::MAX,
        };
        let outputs: Vec<FixedBitSet> = MixedRadix::new(&space.sizes.clone())
            .collect::<Vec<_>>()
            .par_iter()
            .map(|cs| {
                let blocks: Vec<Vec<usize>> = cs.iter().enumerate().map(|(j, &c)| space.codeword(j, c)).collect();
                let refs: Vec<&[usize]> = blocks.iter().map(Vec::as_slice).collect();
                let mut bits = FixedBitSet::with_capacity(ny);
                mac.for_each_output(&refs, |y| bits.insert(y as usize));
                bits
            })
            .collect();
        space.min_outputs = outputs.iter().map(|b| b.count_ones(..)).min().unwrap_or(1);
        space.outputs = outputs;
        Ok(space)
    }

    fn users(&self) -> usize {
        self.sizes.len()
    }

    /// Codeword index to symbol indices, most significant position first.
    fn codeword(&self, user: usize, mut c: usize) -> Vec<usize> {
        let q = self.mac.input_alphabet(user).len();
        let mut out = vec![0; self.n];
        for slot in out.iter_mut().rev() {
            *slot = c % q;
            c /= q;
        }
        out
    }

    fn tuple_index(&self, cs: &[usize]) -> usize {
        cs.iter().zip(&self.sizes).fold(0, |acc, (&c, &s)| acc * s + c)
    }

    /// Union of outputs over the product of per-user codeword sets.
    fn union_over(&self, sets: &[&[usize]]) -> FixedBitSet {
        let mut acc = FixedBitSet::with_capacity(self.ny);
        let radices: Vec<usize> = sets.iter().map(|s| s.len()).collect();
        let mut cs = vec![0; sets.len()];
        for digits in MixedRadix::new(&radices) {
            for (slot, (set, &d)) in cs.iter_mut().zip(sets.iter().zip(&digits)) {
                *slot = set[d];
            }
            acc.union_with(&self.outputs[self.tuple_index(&cs)]);
        }
        acc
    }

    /// Whether, for user `j`, the sets `Oʲ(x)` over `x ∈ Sʲ` are pairwise
    /// disjoint.
    fn user_isolated(&self, sets: &[Vec<usize>], j: usize) -> bool {
        let mut seen = FixedBitSet::with_capacity(self.ny);
        for &x in &sets[j] {
            let single = [x];
            let view: Vec<&[usize]> = sets
                .iter()
                .enumerate()
                .map(|(i, s)| if i == j { &single[..] } else { s.as_slice() })
                .collect();
            let o = self.union_over(&view);
            if !o.is_disjoint(&seen) {
                return false;
            }
            seen.union_with(&o);
        }
        true
    }

    fn resolve_caps(&self, caps: &Caps) -> (usize, Vec<usize>) {
        let cap_u = caps.cap_u.unwrap_or(self.ny).max(1);
        let cap_w = self
            .sizes
            .iter()
            .map(|&s| caps.cap_wmax.map_or(s, |c| c.min(s)).max(1))
            .collect();
        (cap_u, cap_w)
    }

    /// `cap_u · Σ_s Πⱼ C(|𝒳ʲ|ⁿ, sⱼ)`: number of candidate slices times the
    /// number of slices a code may hold.
    fn estimate(&self, cap_u: usize, cap_w: &[usize]) -> u128 {
        let mut total: u128 = 1;
        for (&size, &cap) in self.sizes.iter().zip(cap_w) {
            let per_user: u128 = (1..=cap).map(|k| binomial(size as u128, k as u128)).fold(0u128, u128::saturating_add);
            total = total.saturating_mul(per_user);
        }
        total.saturating_mul(cap_u as u128)
    }

    fn check_estimate(&self, estimate: u128, caps: &Caps) -> Result<(), ZecError> {
        if estimate > caps.search_limit {
            return Err(ZecError::SearchTooLarge {
                estimate,
                limit: caps.search_limit,
            });
        }
        Ok(())
    }

    fn symbol_rows(&self, slices: &[Vec<Vec<usize>>]) -> (Vec<Symbol>, Vec<Vec<Tuple>>) {
        let mut us = Vec::new();
        let mut rows = Vec::new();
        for (a, sets) in slices.iter().enumerate() {
            let radices: Vec<usize> = sets.iter().map(Vec::len).collect();
            for digits in MixedRadix::new(&radices) {
                us.push(Symbol::Int(a as i64 + 1));
                rows.push(
                    digits
                        .iter()
                        .enumerate()
                        .map(|(j, &d)| {
                            self.codeword(j, sets[j][d])
                                .into_iter()
                                .map(|x| self.mac.input_alphabet(j)[x].clone())
                                .collect()
                        })
                        .collect(),
                );
            }
        }
        (us, rows)
    }

    /// Code whose slice `a` uses the given per-user codeword sets.
    fn code_from_slices(&self, slices: &[Vec<Vec<usize>>]) -> Result<ZeCode, ZecError> {
        let w0 = slices.len();
        let cards: Vec<usize> = std::iter::once(w0).chain(slices[0].iter().map(Vec::len)).collect();
        ZeCode::from_fn(self.n, cards, self.mac.fingerprint(), |j, a, b| {
            self.codeword(j, slices[a - 1][j][b - 1])
        })
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// An isolated slice: per-user codeword sets and the union of its outputs.
#[derive(Debug, Clone)]
struct Slice {
    sets: Vec<Vec<usize>>,
    outputs: FixedBitSet,
}

/// All isolated product slices within the caps, grouped by size tuple and
/// reduced to inclusion-minimal output sets.
fn isolated_slices(space: &Space, cap_w: &[usize]) -> BTreeMap<Vec<usize>, Vec<Slice>> {
    let m = space.users();
    // Every combination of sets for users 1..M, in lexicographic order.
    let others: Vec<Vec<Vec<usize>>> = (1..m)
        .map(|j| {
            (1..=cap_w[j])
                .flat_map(|k| (0..space.sizes[j]).combinations(k))
                .collect::<Vec<_>>()
        })
        .multi_cartesian_product()
        .collect();
    let others = if m == 1 { vec![Vec::new()] } else { others };

    let found: Vec<Slice> = others
        .par_iter()
        .flat_map_iter(|rest| {
            let mut out = Vec::new();
            let rest_refs: Vec<&[usize]> = rest.iter().map(Vec::as_slice).collect();
            let o0: Vec<FixedBitSet> = (0..space.sizes[0])
                .map(|c| {
                    let single = [c];
                    let mut view = vec![&single[..]];
                    view.extend(rest_refs.iter().copied());
                    space.union_over(&view)
                })
                .collect();
            let mut sets: Vec<Vec<usize>> = std::iter::once(Vec::new()).chain(rest.iter().cloned()).collect();
            let mut used = FixedBitSet::with_capacity(space.ny);
            grow_first_user(space, cap_w[0], &o0, 0, &mut sets, &mut used, &mut out);
            out
        })
        .collect();

    let mut by_size: BTreeMap<Vec<usize>, BTreeMap<Vec<usize>, Slice>> = BTreeMap::new();
    for s in found {
        let sizes: Vec<usize> = s.sets.iter().map(Vec::len).collect();
        let key = s.outputs.as_slice().to_vec();
        let entry = by_size.entry(sizes).or_default();
        match entry.get(&key) {
            Some(prev) if prev.sets <= s.sets => {}
            _ => {
                entry.insert(key, s);
            }
        }
    }
    by_size
        .into_iter()
        .map(|(sizes, slices)| {
            let mut all: Vec<Slice> = slices.into_values().collect();
            all.sort_by(|a, b| {
                a.outputs
                    .count_ones(..)
                    .cmp(&b.outputs.count_ones(..))
                    .then_with(|| a.sets.cmp(&b.sets))
            });
            let mut minimal: Vec<Slice> = Vec::new();
            for s in all {
                if !minimal.iter().any(|k| k.outputs.is_subset(&s.outputs)) {
                    minimal.push(s);
                }
            }
            (sizes, minimal)
        })
        .collect()
}

fn grow_first_user(
    space: &Space,
    cap: usize,
    o0: &[FixedBitSet],
    start: usize,
    sets: &mut Vec<Vec<usize>>,
    used: &mut FixedBitSet,
    out: &mut Vec<Slice>,
) {
    if sets[0].len() == cap {
        return;
    }
    for c in start..space.sizes[0] {
        if !o0[c].is_disjoint(used) {
            continue;
        }
        sets[0].push(c);
        if (1..space.users()).all(|j| space.user_isolated(sets, j)) {
            let mut next = used.clone();
            next.union_with(&o0[c]);
            out.push(Slice {
                sets: sets.clone(),
                outputs: next.clone(),
            });
            grow_first_user(space, cap, o0, c + 1, sets, &mut next, out);
        }
        sets[0].pop();
    }
}

/// Largest family of pairwise disjoint sets, capped at `cap`.
fn max_packing(cands: &[Slice], cap: usize, universe: usize) -> Vec<usize> {
    struct Search<'a> {
        cands: &'a [Slice],
        cap: usize,
        universe: usize,
        min_size: usize,
        best: Vec<usize>,
    }
    impl Search<'_> {
        fn run(&mut self, start: usize, used: &FixedBitSet, chosen: &mut Vec<usize>) {
            if chosen.len() > self.best.len() {
                self.best = chosen.clone();
            }
            if self.best.len() >= self.cap {
                return;
            }
            let free = self.universe - used.count_ones(..);
            if chosen.len() + free / self.min_size <= self.best.len() {
                return;
            }
            for i in start..self.cands.len() {
                if self.best.len() >= self.cap {
                    return;
                }
                let s = &self.cands[i].outputs;
                if s.is_disjoint(used) {
                    let mut next = used.clone();
                    next.union_with(s);
                    chosen.push(i);
                    self.run(i + 1, &next, chosen);
                    chosen.pop();
                }
            }
        }
    }
    let min_size = cands.iter().map(|c| c.outputs.count_ones(..)).min().unwrap_or(1).max(1);
    let mut search = Search {
        cands,
        cap,
        universe,
        min_size,
        best: Vec::new(),
    };
    search.run(0, &FixedBitSet::with_capacity(universe), &mut Vec::new());
    search.best
}

fn cap_warnings(points: &[RatePoint], cap_u: usize, cap_w: &[usize], space: &Space) -> Vec<String> {
    let mut warnings = Vec::new();
    if cap_u < space.ny && points.iter().any(|p| p.cardinalities[0] as usize >= cap_u) {
        warnings.push(format!(
            "cap_u = {cap_u} is binding at n = {}; the common rate may be under-reported",
            space.n
        ));
    }
    for (j, (&cap, &size)) in cap_w.iter().zip(&space.sizes).enumerate() {
        if cap < size && points.iter().any(|p| p.cardinalities[j + 1] as usize >= cap) {
            warnings.push(format!(
                "cap_wmax = {cap} is binding for user {} at n = {}; its rate may be under-reported",
                j + 1,
                space.n
            ));
        }
    }
    warnings
}

/// Zero-error region at blocklength `n` from the structural characterization.
///
/// Every reported point is re-derived through the uncertain-variable engine:
/// its witness structure is extended through the channel, the conditions
/// are checked, the block counts are recomputed and a code is built from
/// them with [`construct_code`].
pub fn enumerate_region_thm1(mac: &MacSpec, n: usize, caps: &Caps) -> Result<RegionApprox, ZecError> {
    let space = Space::new(mac, n, caps)?;
    let (cap_u, cap_w) = space.resolve_caps(caps);
    let estimate = space.estimate(cap_u, &cap_w);
    space.check_estimate(estimate, caps)?;

    let catalogue = isolated_slices(&space, &cap_w);
    let mut candidates: Vec<(RatePoint, Vec<Vec<Vec<usize>>>)> = catalogue
        .par_iter()
        .map(|(sizes, cands)| {
            let chosen = max_packing(cands, cap_u, space.ny);
            let slices: Vec<Vec<Vec<usize>>> = chosen.iter().map(|&i| cands[i].sets.clone()).collect();
            let cards = std::iter::once(slices.len() as u128)
                .chain(sizes.iter().map(|&s| s as u128))
                .collect();
            (RatePoint::new(n, cards, Source::Thm1), slices)
        })
        .collect();
    candidates.sort_by(|a, b| a.0.cardinalities.cmp(&b.0.cardinalities));

    let pts: Vec<RatePoint> = candidates.iter().map(|c| c.0.clone()).collect();
    let keep = maximal_indices(&pts);
    let kept: Vec<RatePoint> = keep.iter().map(|&i| pts[i].clone()).collect();
    let warnings = cap_warnings(&kept, cap_u, &cap_w, &space);

    let verified: Vec<(RatePoint, ZeCode, Vec<f64>)> = keep
        .par_iter()
        .map(|&i| {
            let (point, slices) = &candidates[i];
            let (us, rows) = space.symbol_rows(slices);
            let p = InputProcess::from_rows(mac, n, Some(&us), &rows)?;
            let built = construct_code(&p, mac)?;
            let expected: Vec<usize> = point.cardinalities.iter().map(|&c| c as usize).collect();
            if built.block_counts != expected {
                return Err(ZecError::Internal(format!(
                    "witness for {expected:?} has block counts {:?}",
                    built.block_counts
                )));
            }
            Ok((point.clone(), built.code, built.info))
        })
        .collect::<Result<_, ZecError>>()?;

    let meta = RegionMeta {
        method: "thm1".into(),
        cap_u,
        cap_wmax: cap_w,
        search_estimate: estimate,
        warnings,
    };
    Ok(RegionApprox::assemble(verified, n, vec![meta]))
}

/// Structural enumeration without the reduction: every family of distinct
/// product slices (each factor a nonempty codeword set within `cap_wmax`)
/// of at most `cap_u` members is extended through the channel and its block
/// counts are computed by the uncertain-variable engine.
pub fn enumerate_region_thm1_exhaustive(mac: &MacSpec, n: usize, caps: &Caps) -> Result<RegionApprox, ZecError> {
    let space = Space::new(mac, n, caps)?;
    let (cap_u, cap_w) = space.resolve_caps(caps);
    let per_user: Vec<Vec<Vec<usize>>> = (0..space.users())
        .map(|j| {
            (1..=cap_w[j])
                .flat_map(|k| (0..space.sizes[j]).combinations(k))
                .collect()
        })
        .collect();
    let slices: Vec<Vec<Vec<usize>>> = per_user.into_iter().multi_cartesian_product().collect();
    let family_count: u128 = (1..=cap_u)
        .map(|k| binomial(slices.len() as u128, k as u128))
        .fold(0u128, u128::saturating_add);
    space.check_estimate(family_count, caps)?;

    let m = space.users();
    let xs: Vec<Vec<String>> = (1..=m).map(|j| x_block_vars(j, n)).collect();
    let ys = y_block_vars(n);
    let families: Vec<Vec<usize>> = (1..=cap_u).flat_map(|k| (0..slices.len()).combinations(k)).collect();
    let mut found: Vec<(Vec<usize>, Vec<Vec<Vec<usize>>>)> = families
        .par_iter()
        .map(|fam| {
            let chosen: Vec<Vec<Vec<usize>>> = fam.iter().map(|&i| slices[i].clone()).collect();
            let (us, rows) = space.symbol_rows(&chosen);
            let p = InputProcess::from_rows(mac, n, Some(&us), &rows)?;
            let joint = extend_joint(mac, &p)?;
            let y_names = names(&ys);
            let mut counts = vec![joint.overlap_block_count(&["U"], &y_names)?];
            for xb in &xs {
                counts.push(joint.conditional_block_count(&names(xb), &y_names, &["U"])?);
            }
            Ok((counts, chosen))
        })
        .collect::<Result<_, ZecError>>()?;
    found.sort();

    let pts: Vec<RatePoint> = found
        .iter()
        .map(|(c, _)| RatePoint::new(n, c.iter().map(|&v| v as u128).collect(), Source::Thm1))
        .collect();
    let keep = maximal_indices(&pts);
    let mut out = Vec::new();
    for i in keep {
        let (us, rows) = space.symbol_rows(&found[i].1);
        let p = InputProcess::from_rows(mac, n, Some(&us), &rows)?;
        let built = construct_code(&p, mac)?;
        out.push((pts[i].clone(), built.code, built.info));
    }
    let kept: Vec<RatePoint> = out.iter().map(|o| o.0.clone()).collect();
    let meta = RegionMeta {
        method: "thm1-exhaustive".into(),
        cap_u,
        warnings: cap_warnings(&kept, cap_u, &cap_w, &space),
        cap_wmax: cap_w,
        search_estimate: family_count,
    };
    Ok(RegionApprox::assemble(out, n, vec![meta]))
}

/// Depth-first search over encoder tables for one private-size tuple.
///
/// Table entries are filled slice by slice, and within a slice in the order
/// `E¹(a,1), E²(a,1), …, E¹(a,2), …`. Each entry completes a set of message
/// tuples whose output sets must avoid everything already used. Two
/// symmetries are removed: codewords of a user within a slice are strictly
/// increasing, and slices are strictly increasing in their first-codeword
/// tuple `(E¹(a,1), …, E^M(a,1))`.
struct TableSearch<'a> {
    space: &'a Space<'a>,
    sizes: Vec<usize>,
    cap: usize,
    order: Vec<(usize, usize)>,
    per_slice_min: usize,
    slices: Vec<Vec<Vec<usize>>>,
    best: Vec<Vec<Vec<usize>>>,
}

impl TableSearch<'_> {
    fn slice_key(slice: &[Vec<usize>]) -> Vec<usize> {
        slice.iter().map(|s| s[0]).collect()
    }

    fn run(&mut self, entry: usize, used: &FixedBitSet) {
        let a = self.slices.len() - 1;
        if entry == self.order.len() {
            if self.slices.len() > self.best.len() {
                self.best = self.slices.clone();
            }
            if self.best.len() >= self.cap {
                return;
            }
            let free = self.space.ny - used.count_ones(..);
            if self.slices.len() + free / self.per_slice_min <= self.best.len() {
                return;
            }
            self.slices.push(vec![Vec::new(); self.sizes.len()]);
            self.run(0, used);
            self.slices.pop();
            return;
        }
        let (j, b) = self.order[entry];
        let lo = if b == 0 { 0 } else { self.slices[a][j][b - 1] + 1 };
        let hi = self.space.sizes[j] - (self.sizes[j] - b);
        let m = self.sizes.len();
        for c in lo..=hi {
            if self.best.len() >= self.cap {
                return;
            }
            if b == 0 && a > 0 {
                let prev = Self::slice_key(&self.slices[a - 1]);
                let mut key: Vec<usize> = self.slices[a][..j].iter().map(|s| s[0]).collect();
                key.push(c);
                let ord = key.as_slice().cmp(&prev[..=j]);
                if ord.is_lt() || (j == m - 1 && ord.is_eq()) {
                    continue;
                }
            }
            self.slices[a][j].push(c);
            if let Some(next) = self.admit(a, j, used) {
                self.run(entry + 1, &next);
            }
            self.slices[a][j].pop();
        }
    }

    /// Adds the tuples completed by the newest entry of user `j` in slice
    /// `a`; `None` if any of them collides with used outputs.
    fn admit(&self, a: usize, j: usize, used: &FixedBitSet) -> Option<FixedBitSet> {
        let slice = &self.slices[a];
        if slice.iter().any(Vec::is_empty) {
            return Some(used.clone());
        }
        let newest = *slice[j].last().expect("entry was pushed");
        let radices: Vec<usize> = slice
            .iter()
            .enumerate()
            .map(|(i, s)| if i == j { 1 } else { s.len() })
            .collect();
        let mut next = used.clone();
        let mut cs = vec![0; slice.len()];
        for digits in MixedRadix::new(&radices) {
            for (i, slot) in cs.iter_mut().enumerate() {
                *slot = if i == j { newest } else { slice[i][digits[i]] };
            }
            let out = &self.space.outputs[self.space.tuple_index(&cs)];
            if !out.is_disjoint(&next) {
                return None;
            }
            next.union_with(out);
        }
        Some(next)
    }
}

/// Zero-error region at blocklength `n` by exhaustive search over encoder
/// tables. Every reported code is re-verified with [`is_zero_error`].
pub fn enumerate_region_bruteforce(mac: &MacSpec, n: usize, caps: &Caps) -> Result<RegionApprox, ZecError> {
    let space = Space::new(mac, n, caps)?;
    let (cap_u, cap_w) = space.resolve_caps(caps);
    let estimate = space.estimate(cap_u, &cap_w);
    space.check_estimate(estimate, caps)?;

    let size_tuples: Vec<Vec<usize>> = MixedRadix::new(&cap_w)
        .map(|d| d.into_iter().map(|v| v + 1).collect())
        .collect();
    let results: Vec<(Vec<usize>, Vec<Vec<Vec<usize>>>)> = size_tuples
        .par_iter()
        .map(|sizes| {
            let maxw = *sizes.iter().max().expect("at least one user");
            let order: Vec<(usize, usize)> = (0..maxw)
                .flat_map(|b| (0..sizes.len()).filter(move |&j| b < sizes[j]).map(move |j| (j, b)))
                .collect();
            let per_slice_min = space.min_outputs.max(1) * sizes.iter().product::<usize>();
            let mut search = TableSearch {
                space: &space,
                sizes: sizes.clone(),
                cap: cap_u,
                order,
                per_slice_min,
                slices: vec![vec![Vec::new(); sizes.len()]],
                best: Vec::new(),
            };
            search.run(0, &FixedBitSet::with_capacity(space.ny));
            (sizes.clone(), search.best)
        })
        .collect();

    let mut candidates = Vec::new();
    for (sizes, best) in results {
        if best.is_empty() {
            continue;
        }
        let code = space.code_from_slices(&best)?;
        if !is_zero_error(&code, mac)? {
            return Err(ZecError::Internal(format!(
                "search returned a code with collisions for sizes {sizes:?}"
            )));
        }
        candidates.push((RatePoint::from_code(&code, Source::Bruteforce), code, Vec::new()));
    }
    let pts: Vec<RatePoint> = candidates.iter().map(|c| c.0.clone()).collect();
    let kept: Vec<RatePoint> = maximal_indices(&pts).into_iter().map(|i| pts[i].clone()).collect();
    let meta = RegionMeta {
        method: "bruteforce".into(),
        cap_u,
        warnings: cap_warnings(&kept, cap_u, &cap_w, &space),
        cap_wmax: cap_w,
        search_estimate: estimate,
    };
    let region = RegionApprox::assemble(candidates, n, vec![meta]);
    for code in &region.codes {
        ZeDecoder::new(code, mac)?;
    }
    Ok(region)
}
