//! Finite uncertain variables.
//!
//! An uncertain variable is described only by the set of values it can take.
//! A [`JointRange`] holds the joint range of a list of named variables as an
//! explicit set of tuples; the sample space itself is never materialized, since
//! every quantity computed here depends only on ranges.
//!
//! Variable groups are passed as slices of names. A group such as
//! `&["X1_1", "X1_2"]` is treated as a single compound variable whose
//! realizations are the projected sub-tuples.

mod json;
mod partition;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use json::JointRangeFile;
pub use partition::{OverlapPartition, UnionFind};

/// A symbol from a finite alphabet. Integers order before strings.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Symbol {
    Int(i64),
    Str(String),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Int(v) => write!(f, "{v}"),
            Symbol::Str(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Symbol {
    fn from(v: i64) -> Self {
        Symbol::Int(v)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::Str(s.to_owned())
    }
}

impl From<String> for Symbol {
    fn from(s: String) -> Self {
        Symbol::Str(s)
    }
}

/// One realization of an ordered group of variables.
pub type Tuple = Vec<Symbol>;

/// Builds a tuple of integer symbols.
pub fn int_tuple(values: &[i64]) -> Tuple {
    values.iter().map(|&v| Symbol::Int(v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UvError {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` is listed more than once")]
    DuplicateVariable(String),
    #[error("variable group is empty")]
    EmptyGroup,
    #[error("variable `{0}` appears in more than one group")]
    OverlappingGroups(String),
    #[error("joint range has empty support")]
    EmptySupport,
    #[error("support tuple #{index} has arity {found}, expected {expected}")]
    Arity {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("symbol `{symbol}` is not in the alphabet of `{variable}`")]
    SymbolNotInAlphabet { variable: String, symbol: Symbol },
    #[error("conditional range for {given:?} is empty")]
    EmptyConditionalRange { given: Tuple },
    #[error("malformed joint range: {0}")]
    Malformed(String),
}

/// Explicit finite joint range of named uncertain variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "JointRangeFile", into = "JointRangeFile")]
pub struct JointRange {
    variables: Vec<String>,
    alphabets: Vec<BTreeSet<Symbol>>,
    support: BTreeSet<Tuple>,
}

impl JointRange {
    pub fn new(
        variables: Vec<String>,
        alphabets: Vec<BTreeSet<Symbol>>,
        support: impl IntoIterator<Item = Tuple>,
    ) -> Result<Self, UvError> {
        if alphabets.len() != variables.len() {
            return Err(UvError::Malformed(format!(
                "{} alphabets for {} variables",
                alphabets.len(),
                variables.len()
            )));
        }
        let mut seen = BTreeSet::new();
        for v in &variables {
            if !seen.insert(v.as_str()) {
                return Err(UvError::DuplicateVariable(v.clone()));
            }
        }
        let support: BTreeSet<Tuple> = support.into_iter().collect();
        if support.is_empty() {
            return Err(UvError::EmptySupport);
        }
        for (index, tuple) in support.iter().enumerate() {
            if tuple.len() != variables.len() {
                return Err(UvError::Arity {
                    index,
                    found: tuple.len(),
                    expected: variables.len(),
                });
            }
            for (pos, sym) in tuple.iter().enumerate() {
                if !alphabets[pos].contains(sym) {
                    return Err(UvError::SymbolNotInAlphabet {
                        variable: variables[pos].clone(),
                        symbol: sym.clone(),
                    });
                }
            }
        }
        Ok(Self {
            variables,
            alphabets,
            support,
        })
    }

    /// Joint range whose alphabets are the marginal ranges of the support.
    pub fn from_support(
        variables: Vec<String>,
        support: impl IntoIterator<Item = Tuple>,
    ) -> Result<Self, UvError> {
        let support: BTreeSet<Tuple> = support.into_iter().collect();
        let mut alphabets = vec![BTreeSet::new(); variables.len()];
        for tuple in &support {
            for (pos, sym) in tuple.iter().enumerate() {
                if let Some(a) = alphabets.get_mut(pos) {
                    a.insert(sym.clone());
                }
            }
        }
        Self::new(variables, alphabets, support)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn alphabet(&self, variable: &str) -> Option<&BTreeSet<Symbol>> {
        self.variables
            .iter()
            .position(|v| v == variable)
            .map(|p| &self.alphabets[p])
    }

    pub fn alphabets(&self) -> &[BTreeSet<Symbol>] {
        &self.alphabets
    }

    pub fn support(&self) -> &BTreeSet<Tuple> {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    pub fn has_variable(&self, variable: &str) -> bool {
        self.variables.iter().any(|v| v == variable)
    }

    /// Column positions of a nonempty group of distinct variable names.
    pub fn positions(&self, vars: &[&str]) -> Result<Vec<usize>, UvError> {
        if vars.is_empty() {
            return Err(UvError::EmptyGroup);
        }
        let mut out = Vec::with_capacity(vars.len());
        for &name in vars {
            let pos = self
                .variables
                .iter()
                .position(|v| v == name)
                .ok_or_else(|| UvError::UnknownVariable(name.to_owned()))?;
            if out.contains(&pos) {
                return Err(UvError::DuplicateVariable(name.to_owned()));
            }
            out.push(pos);
        }
        Ok(out)
    }

    fn disjoint_positions(&self, groups: &[&[&str]]) -> Result<Vec<Vec<usize>>, UvError> {
        let mut used = BTreeSet::new();
        let mut out = Vec::with_capacity(groups.len());
        for group in groups {
            let pos = self.positions(group)?;
            for &p in &pos {
                if !used.insert(p) {
                    return Err(UvError::OverlappingGroups(self.variables[p].clone()));
                }
            }
            out.push(pos);
        }
        Ok(out)
    }

    /// Projection of the support onto `vars`, in the order given.
    pub fn marginal_range(&self, vars: &[&str]) -> Result<BTreeSet<Tuple>, UvError> {
        let pos = self.positions(vars)?;
        Ok(self.support.iter().map(|t| project(t, &pos)).collect())
    }

    /// Sub-range of tuples whose `vars` take the value `value`; `None` if that
    /// value never occurs. All variables are kept.
    pub fn restrict(&self, vars: &[&str], value: &[Symbol]) -> Result<Option<JointRange>, UvError> {
        let pos = self.positions(vars)?;
        if value.len() != pos.len() {
            return Err(UvError::Arity {
                index: 0,
                found: value.len(),
                expected: pos.len(),
            });
        }
        let support: BTreeSet<Tuple> = self
            .support
            .iter()
            .filter(|t| pos.iter().zip(value).all(|(&p, s)| &t[p] == s))
            .cloned()
            .collect();
        if support.is_empty() {
            return Ok(None);
        }
        Ok(Some(JointRange {
            variables: self.variables.clone(),
            alphabets: self.alphabets.clone(),
            support,
        }))
    }

    /// The family of conditional ranges of `target` given each realization of
    /// `given`.
    pub fn conditional_family(&self, target: &[&str], given: &[&str]) -> Result<CondFamily, UvError> {
        let pos = self.disjoint_positions(&[target, given])?;
        let map = family_map(self.support.iter(), &pos[0], &pos[1]);
        Ok(CondFamily {
            target: target.iter().map(|s| s.to_string()).collect(),
            given: given.iter().map(|s| s.to_string()).collect(),
            map,
        })
    }

    /// Mutual unrelatedness: the joint range over the groups is the product
    /// of their marginal ranges.
    pub fn is_unrelated(&self, groups: &[&[&str]]) -> Result<bool, UvError> {
        let pos = self.disjoint_positions(groups)?;
        Ok(factors(self.support.iter(), &pos))
    }

    /// Unrelatedness of `groups` within every slice `given = g`.
    pub fn is_conditionally_unrelated(&self, groups: &[&[&str]], given: &[&str]) -> Result<bool, UvError> {
        let mut all: Vec<&[&str]> = groups.to_vec();
        all.push(given);
        let pos = self.disjoint_positions(&all)?;
        let (given_pos, group_pos) = pos.split_last().expect("given group present");
        let mut slices: BTreeMap<Tuple, Vec<&Tuple>> = BTreeMap::new();
        for t in &self.support {
            slices.entry(project(t, given_pos)).or_default().push(t);
        }
        Ok(slices
            .values()
            .all(|slice| factors(slice.iter().copied(), group_pos)))
    }

    /// Markov uncertainty chain `x1 <-> y <-> x2`: conditioning on `x2` in
    /// addition to `y` never shrinks the range of `x1`.
    ///
    /// The conditional-unrelatedness form is evaluated as well and the two
    /// are asserted to agree.
    pub fn is_markov(&self, x1: &[&str], y: &[&str], x2: &[&str]) -> Result<bool, UvError> {
        let pos = self.disjoint_positions(&[x1, y, x2])?;
        let mut given = pos[1].clone();
        given.extend_from_slice(&pos[2]);
        let fine = family_map(self.support.iter(), &pos[0], &given);
        let coarse = family_map(self.support.iter(), &pos[0], &pos[1]);
        let split = pos[1].len();
        let by_range = fine.iter().all(|(key, set)| coarse[&key[..split].to_vec()] == *set);
        let by_unrelatedness = self.is_conditionally_unrelated(&[x1, x2], y)?;
        assert_eq!(
            by_range, by_unrelatedness,
            "Markov chain forms disagree for {x1:?} <-> {y:?} <-> {x2:?}"
        );
        Ok(by_range)
    }

    /// Number of blocks of the overlap partition of `x` induced by `y`.
    pub fn overlap_block_count(&self, x: &[&str], y: &[&str]) -> Result<usize, UvError> {
        Ok(self.conditional_family(x, y)?.overlap_partition().len())
    }

    /// Nonstochastic information between `x` and `y`, in bits.
    pub fn nonstochastic_info(&self, x: &[&str], y: &[&str]) -> Result<f64, UvError> {
        Ok(bits(self.overlap_block_count(x, y)?))
    }

    /// Minimum over realizations `w` of the overlap-partition block count of
    /// `x` given `y` computed inside the slice `W = w`.
    pub fn conditional_block_count(&self, x: &[&str], y: &[&str], w: &[&str]) -> Result<usize, UvError> {
        Ok(self
            .conditional_block_counts(x, y, w)?
            .into_values()
            .min()
            .expect("support is nonempty"))
    }

    /// Per-slice overlap-partition block counts, keyed by the value of `w`.
    pub fn conditional_block_counts(
        &self,
        x: &[&str],
        y: &[&str],
        w: &[&str],
    ) -> Result<BTreeMap<Tuple, usize>, UvError> {
        let pos = self.disjoint_positions(&[x, y, w])?;
        let mut slices: BTreeMap<Tuple, Vec<&Tuple>> = BTreeMap::new();
        for t in &self.support {
            slices.entry(project(t, &pos[2])).or_default().push(t);
        }
        Ok(slices
            .into_iter()
            .map(|(key, slice)| {
                let fam = family_map(slice.into_iter(), &pos[0], &pos[1]);
                (key, partition::partition_sets(fam.values()).len())
            })
            .collect())
    }

    /// Conditional nonstochastic information of `x` and `y` given `w`, in bits.
    pub fn conditional_nonstochastic_info(&self, x: &[&str], y: &[&str], w: &[&str]) -> Result<f64, UvError> {
        Ok(bits(self.conditional_block_count(x, y, w)?))
    }

    /// A maximal common variable of `x` and `y`, given by labelling each side
    /// with the block of the overlap partition it falls in.
    pub fn maximal_common_variable(&self, x: &[&str], y: &[&str]) -> Result<CommonVariableWitness, UvError> {
        let family = self.conditional_family(x, y)?;
        let partition = family.overlap_partition();
        let label_of_y = family
            .map
            .iter()
            .map(|(yv, xs)| {
                let first = xs.iter().next().expect("conditional ranges are nonempty");
                (yv.clone(), partition.block_of(first).expect("x in partition"))
            })
            .collect();
        let witness = CommonVariableWitness {
            cardinality: partition.len(),
            label_of_x: partition.block_index().clone(),
            label_of_y,
        };
        debug_assert!(witness.is_consistent(self, x, y).unwrap_or(false));
        Ok(witness)
    }
}

fn bits(blocks: usize) -> f64 {
    (blocks as f64).log2()
}

pub(crate) fn project(tuple: &[Symbol], positions: &[usize]) -> Tuple {
    positions.iter().map(|&p| tuple[p].clone()).collect()
}

fn family_map<'a>(
    tuples: impl Iterator<Item = &'a Tuple>,
    target: &[usize],
    given: &[usize],
) -> BTreeMap<Tuple, BTreeSet<Tuple>> {
    let mut map: BTreeMap<Tuple, BTreeSet<Tuple>> = BTreeMap::new();
    for t in tuples {
        map.entry(project(t, given)).or_default().insert(project(t, target));
    }
    map
}

/// Whether the projections of `tuples` onto the disjoint `groups` form a full
/// product. Since the joint projection is always a subset of the product of
/// marginals, comparing cardinalities decides equality.
fn factors<'a>(tuples: impl Iterator<Item = &'a Tuple>, groups: &[Vec<usize>]) -> bool {
    let mut joint: BTreeSet<Vec<Tuple>> = BTreeSet::new();
    let mut marginals: Vec<BTreeSet<Tuple>> = vec![BTreeSet::new(); groups.len()];
    for t in tuples {
        let parts: Vec<Tuple> = groups.iter().map(|g| project(t, g)).collect();
        for (m, p) in marginals.iter_mut().zip(&parts) {
            m.insert(p.clone());
        }
        joint.insert(parts);
    }
    let product = marginals
        .iter()
        .try_fold(1usize, |acc, m| acc.checked_mul(m.len()));
    product == Some(joint.len())
}

/// Family of conditional ranges of `target` indexed by realizations of `given`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondFamily {
    target: Vec<String>,
    given: Vec<String>,
    map: BTreeMap<Tuple, BTreeSet<Tuple>>,
}

impl CondFamily {
    /// Family from an explicit map. Every conditional range must be nonempty.
    pub fn from_map(
        target: Vec<String>,
        given: Vec<String>,
        map: BTreeMap<Tuple, BTreeSet<Tuple>>,
    ) -> Result<Self, UvError> {
        if let Some((g, _)) = map.iter().find(|(_, s)| s.is_empty()) {
            return Err(UvError::EmptyConditionalRange { given: g.clone() });
        }
        if map.is_empty() {
            return Err(UvError::EmptySupport);
        }
        Ok(Self { target, given, map })
    }

    pub fn target(&self) -> &[String] {
        &self.target
    }

    pub fn given(&self) -> &[String] {
        &self.given
    }

    pub fn map(&self) -> &BTreeMap<Tuple, BTreeSet<Tuple>> {
        &self.map
    }

    pub fn get(&self, given: &[Symbol]) -> Option<&BTreeSet<Tuple>> {
        self.map.get(given)
    }

    /// Union of all conditional ranges, i.e. the marginal range of the target.
    pub fn target_range(&self) -> BTreeSet<Tuple> {
        self.map.values().flatten().cloned().collect()
    }

    /// Connected components of the "conditional ranges intersect" relation.
    pub fn overlap_partition(&self) -> OverlapPartition {
        partition::partition_sets(self.map.values())
    }
}

/// A common variable `Z = f(X) = g(Y)` given as two labellings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommonVariableWitness {
    pub cardinality: usize,
    pub label_of_x: BTreeMap<Tuple, usize>,
    pub label_of_y: BTreeMap<Tuple, usize>,
}

impl CommonVariableWitness {
    /// Checks `label_of_x(x) == label_of_y(y)` on every pair of the joint
    /// support.
    pub fn is_consistent(&self, joint: &JointRange, x: &[&str], y: &[&str]) -> Result<bool, UvError> {
        let xp = joint.positions(x)?;
        let yp = joint.positions(y)?;
        Ok(joint.support.iter().all(|t| {
            let lx = self.label_of_x.get(&project(t, &xp));
            let ly = self.label_of_y.get(&project(t, &yp));
            lx.is_some() && lx == ly
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn five_tuple() -> JointRange {
        let support = [(0, "a"), (1, "a"), (1, "b"), (2, "b"), (3, "c")]
            .iter()
            .map(|&(x, y)| vec![Symbol::Int(x), Symbol::from(y)]);
        JointRange::from_support(vec!["X".into(), "Y".into()], support).unwrap()
    }

    fn ints(vars: &[&str], rows: &[&[i64]]) -> JointRange {
        JointRange::from_support(
            vars.iter().map(|s| s.to_string()).collect(),
            rows.iter().map(|r| int_tuple(r)),
        )
        .unwrap()
    }

    fn set(rows: &[&[i64]]) -> BTreeSet<Tuple> {
        rows.iter().map(|r| int_tuple(r)).collect()
    }

    #[test]
    fn marginal_projection() {
        let j = JointRange::from_support(
            vec!["X".into(), "Y".into()],
            vec![
                vec![0.into(), "a".into()],
                vec![1.into(), "a".into()],
                vec![1.into(), "b".into()],
            ],
        )
        .unwrap();
        assert_eq!(j.marginal_range(&["X"]).unwrap(), set(&[&[0], &[1]]));
        assert_eq!(&j.marginal_range(&["X", "Y"]).unwrap(), j.support());

        let j = JointRange::from_support(
            vec!["X".into(), "Y".into()],
            vec![
                vec![0.into(), "a".into()],
                vec![1.into(), "b".into()],
                vec![2.into(), "b".into()],
            ],
        )
        .unwrap();
        let ys: BTreeSet<Tuple> = [vec!["a".into()], vec!["b".into()]].into_iter().collect();
        assert_eq!(j.marginal_range(&["Y"]).unwrap(), ys);
    }

    #[test]
    fn unknown_variable_is_rejected() {
        let j = five_tuple();
        assert_eq!(
            j.marginal_range(&["Q"]),
            Err(UvError::UnknownVariable("Q".into()))
        );
        assert_eq!(j.marginal_range(&[]), Err(UvError::EmptyGroup));
    }

    #[test]
    fn conditional_family_examples() {
        let fam = five_tuple().conditional_family(&["X"], &["Y"]).unwrap();
        assert_eq!(fam.get(&["a".into()]).unwrap(), &set(&[&[0], &[1]]));
        assert_eq!(fam.get(&["b".into()]).unwrap(), &set(&[&[1], &[2]]));
        assert_eq!(fam.get(&["c".into()]).unwrap(), &set(&[&[3]]));

        let product = ints(&["X", "Y"], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let fam = product.conditional_family(&["X"], &["Y"]).unwrap();
        assert!(fam.map().values().all(|s| *s == set(&[&[0], &[1]])));

        let diag = ints(&["X", "Y"], &[&[0, 0], &[1, 1]]);
        let fam = diag.conditional_family(&["X"], &["Y"]).unwrap();
        assert_eq!(fam.get(&int_tuple(&[0])).unwrap(), &set(&[&[0]]));
        assert_eq!(fam.get(&int_tuple(&[1])).unwrap(), &set(&[&[1]]));

        assert_eq!(
            diag.conditional_family(&["X"], &["X"]),
            Err(UvError::OverlappingGroups("X".into()))
        );
    }

    #[test]
    fn external_family_rejects_empty_sets() {
        let mut map = BTreeMap::new();
        map.insert(int_tuple(&[0]), BTreeSet::new());
        assert!(matches!(
            CondFamily::from_map(vec!["X".into()], vec!["Y".into()], map),
            Err(UvError::EmptyConditionalRange { .. })
        ));
    }

    #[test]
    fn unrelatedness() {
        let product = ints(&["X", "Y"], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert!(product.is_unrelated(&[&["X"], &["Y"]]).unwrap());
        let diag = ints(&["X", "Y"], &[&[0, 0], &[1, 1]]);
        assert!(!diag.is_unrelated(&[&["X"], &["Y"]]).unwrap());
        let missing = ints(&["X", "Y"], &[&[0, 0], &[0, 1], &[1, 0]]);
        assert!(!missing.is_unrelated(&[&["X"], &["Y"]]).unwrap());
    }

    #[test]
    fn conditional_unrelatedness() {
        let copies = ints(&["X1", "X2", "Y"], &[&[0, 0, 0], &[1, 1, 1]]);
        assert!(copies.is_conditionally_unrelated(&[&["X1"], &["X2"]], &["Y"]).unwrap());

        let mut rows = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    rows.push(vec![a, b, c]);
                }
            }
        }
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let free = ints(&["X1", "X2", "Y"], &refs);
        assert!(free.is_conditionally_unrelated(&[&["X1"], &["X2"]], &["Y"]).unwrap());

        let tied = ints(
            &["X1", "X2", "Y"],
            &[&[0, 0, 0], &[1, 1, 0], &[0, 0, 1], &[1, 1, 1]],
        );
        assert!(!tied.is_conditionally_unrelated(&[&["X1"], &["X2"]], &["Y"]).unwrap());
    }

    #[test]
    fn markov_examples() {
        let mut rows = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    rows.push(vec![a, b, c]);
                }
            }
        }
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let free = ints(&["X1", "Y", "X2"], &refs);
        assert!(free.is_markov(&["X1"], &["Y"], &["X2"]).unwrap());

        let tied = ints(
            &["X1", "Y", "X2"],
            &[&[0, 0, 0], &[1, 0, 1], &[0, 1, 0], &[1, 1, 1]],
        );
        assert!(!tied.is_markov(&["X1"], &["Y"], &["X2"]).unwrap());
    }

    #[test]
    fn markov_through_a_function() {
        // X1 in {0..3}, Y = X1 / 2, X2 unrelated to X1 but tied to Y.
        let mut rows = Vec::new();
        for x1 in 0..4 {
            let y = x1 / 2;
            for x2 in [y, y + 5] {
                rows.push(vec![x1, y, x2]);
            }
        }
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let j = ints(&["X1", "Y", "X2"], &refs);
        // Brute-force check of the defining range equality.
        let mut expected = true;
        for t in j.support() {
            let (y, x2) = (&t[1], &t[2]);
            let given_both: BTreeSet<_> = j
                .support()
                .iter()
                .filter(|s| &s[1] == y && &s[2] == x2)
                .map(|s| s[0].clone())
                .collect();
            let given_y: BTreeSet<_> = j
                .support()
                .iter()
                .filter(|s| &s[1] == y)
                .map(|s| s[0].clone())
                .collect();
            expected &= given_both == given_y;
        }
        assert!(expected);
        assert!(j.is_markov(&["X1"], &["Y"], &["X2"]).unwrap());
        assert!(j.is_markov(&["X2"], &["Y"], &["X1"]).unwrap());
    }

    #[test]
    fn partition_examples() {
        let fam = five_tuple().conditional_family(&["X"], &["Y"]).unwrap();
        let p = fam.overlap_partition();
        assert_eq!(p.len(), 2);
        assert_eq!(p.blocks()[0], set(&[&[0], &[1], &[2]]));
        assert_eq!(p.blocks()[1], set(&[&[3]]));

        let product = ints(&["X", "Y"], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert_eq!(product.overlap_block_count(&["X"], &["Y"]).unwrap(), 1);

        let singletons = ints(&["X", "Y"], &[&[0, 0], &[1, 1], &[2, 2], &[3, 3], &[4, 4]]);
        assert_eq!(singletons.overlap_block_count(&["X"], &["Y"]).unwrap(), 5);
    }

    #[test]
    fn information_examples() {
        let id = ints(&["X", "Y"], &[&[0, 0], &[1, 1], &[2, 2], &[3, 3]]);
        assert_eq!(id.nonstochastic_info(&["X"], &["Y"]).unwrap(), 2.0);
        let product = ints(&["X", "Y"], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        assert_eq!(product.nonstochastic_info(&["X"], &["Y"]).unwrap(), 0.0);
        assert_eq!(five_tuple().nonstochastic_info(&["X"], &["Y"]).unwrap(), 1.0);
        assert_eq!(five_tuple().nonstochastic_info(&["Y"], &["X"]).unwrap(), 1.0);
    }

    #[test]
    fn common_variable_examples() {
        let id = ints(&["X", "Y"], &[&[0, 0], &[1, 1], &[2, 2]]);
        let cv = id.maximal_common_variable(&["X"], &["Y"]).unwrap();
        assert_eq!(cv.cardinality, 3);
        let labels: BTreeSet<usize> = cv.label_of_x.values().copied().collect();
        assert_eq!(labels.len(), 3);

        let product = ints(&["X", "Y"], &[&[0, 0], &[0, 1], &[1, 0], &[1, 1]]);
        let cv = product.maximal_common_variable(&["X"], &["Y"]).unwrap();
        assert_eq!(cv.cardinality, 1);
        assert!(cv.label_of_x.values().chain(cv.label_of_y.values()).all(|&l| l == 0));

        let j = five_tuple();
        let cv = j.maximal_common_variable(&["X"], &["Y"]).unwrap();
        assert_eq!(cv.cardinality, 2);
        for x in 0..3 {
            assert_eq!(cv.label_of_x[&int_tuple(&[x])], 0);
        }
        assert_eq!(cv.label_of_x[&int_tuple(&[3])], 1);
        assert!(cv.is_consistent(&j, &["X"], &["Y"]).unwrap());
    }

    #[test]
    fn conditional_information_examples() {
        // W single-valued: same as the unconditional quantity.
        let j = ints(&["X", "Y", "W"], &[&[0, 0, 7], &[1, 0, 7], &[2, 1, 7], &[3, 2, 7]]);
        assert_eq!(j.conditional_block_count(&["X"], &["Y"], &["W"]).unwrap(), 3);
        assert_eq!(j.overlap_block_count(&["X"], &["Y"]).unwrap(), 3);

        // Slice w=0 has 2 blocks, slice w=1 has 4.
        let j = ints(
            &["X", "Y", "W"],
            &[
                &[0, 0, 0],
                &[1, 0, 0],
                &[2, 1, 0],
                &[3, 1, 0],
                &[0, 0, 1],
                &[1, 1, 1],
                &[2, 2, 1],
                &[3, 3, 1],
            ],
        );
        let per = j.conditional_block_counts(&["X"], &["Y"], &["W"]).unwrap();
        assert_eq!(per[&int_tuple(&[0])], 2);
        assert_eq!(per[&int_tuple(&[1])], 4);
        assert_eq!(j.conditional_nonstochastic_info(&["X"], &["Y"], &["W"]).unwrap(), 1.0);

        // X is a copy of W: each slice has a one-point X range.
        let j = ints(&["X", "Y", "W"], &[&[0, 0, 0], &[0, 1, 0], &[1, 0, 1], &[1, 1, 1]]);
        assert_eq!(j.conditional_nonstochastic_info(&["X"], &["Y"], &["W"]).unwrap(), 0.0);
    }

    #[test]
    fn restrict_keeps_matching_tuples() {
        let j = five_tuple();
        let r = j.restrict(&["Y"], &["b".into()]).unwrap().unwrap();
        assert_eq!(r.len(), 2);
        assert!(j.restrict(&["Y"], &["zz".into()]).unwrap().is_none());
    }
}
