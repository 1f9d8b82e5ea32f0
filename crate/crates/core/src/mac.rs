//! Deterministic multiple access channels with bounded noise.
//!
//! A channel is a total table `y = f(x¹, …, x^M, z)` over finite alphabets.
//! Its n-fold extension applies the table symbol by symbol, with the noise
//! sequence ranging over the full product `𝒵ⁿ`.
//!
//! Internally symbols are addressed by their position in the configured
//! alphabet, and an output sequence `y₁:ₙ` is packed into a single integer in
//! base `|𝒴|`, most significant symbol first.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::uv::{JointRange, Symbol, Tuple, UvError};

/// Default upper bound on the blocklength accepted by enumeration routines.
pub const DEFAULT_LIMIT_N: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MacError {
    #[error("channel must have at least one user")]
    NoUsers,
    #[error("expected {expected} input alphabets, found {found}")]
    UserCount { expected: usize, found: usize },
    #[error("{what} alphabet is empty")]
    EmptyAlphabet { what: String },
    #[error("{what} alphabet lists `{symbol}` twice")]
    DuplicateSymbol { what: String, symbol: Symbol },
    #[error("symbol `{symbol}` is not in the {what} alphabet")]
    UnknownSymbol { what: String, symbol: String },
    #[error("table has no entry for cell ({0})")]
    MissingCell(String),
    #[error("table key `{0}` does not match the channel arity")]
    BadKey(String),
    #[error("table has {found} cells, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("blocklength {n} exceeds the configured limit {limit}")]
    BlocklengthLimit { n: usize, limit: usize },
    #[error("blocklength must be positive")]
    ZeroBlocklength,
    #[error("|Y|^n = {base}^{n} does not fit in 64 bits")]
    OutputSpaceTooLarge { base: usize, n: usize },
    #[error("input block for user {user} has length {found}, expected {expected}")]
    BlockLength { user: usize, found: usize, expected: usize },
    #[error(transparent)]
    Uv(#[from] UvError),
}

/// A finite deterministic MAC with bounded noise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MacFile", into = "MacFile")]
pub struct MacSpec {
    inputs: Vec<Vec<Symbol>>,
    noise: Vec<Symbol>,
    output: Vec<Symbol>,
    /// Output index per cell, row-major over `(x¹, …, x^M, z)` with `z`
    /// varying fastest.
    table: Vec<usize>,
}

impl MacSpec {
    /// Builds a channel from a table given as output indices in row-major
    /// order.
    pub fn new(
        inputs: Vec<Vec<Symbol>>,
        noise: Vec<Symbol>,
        output: Vec<Symbol>,
        table: Vec<usize>,
    ) -> Result<Self, MacError> {
        if inputs.is_empty() {
            return Err(MacError::NoUsers);
        }
        for (j, a) in inputs.iter().enumerate() {
            check_alphabet(a, &format!("input {}", j + 1))?;
        }
        check_alphabet(&noise, "noise")?;
        check_alphabet(&output, "output")?;
        let cells = inputs.iter().map(Vec::len).product::<usize>() * noise.len();
        if table.len() != cells {
            return Err(MacError::TableSize {
                expected: cells,
                found: table.len(),
            });
        }
        if let Some(&bad) = table.iter().find(|&&y| y >= output.len()) {
            return Err(MacError::UnknownSymbol {
                what: "output".into(),
                symbol: format!("#{bad}"),
            });
        }
        Ok(Self {
            inputs,
            noise,
            output,
            table,
        })
    }

    /// Builds a channel by evaluating `f` on every cell. The output alphabet
    /// is the sorted set of values produced.
    pub fn from_fn(
        inputs: Vec<Vec<Symbol>>,
        noise: Vec<Symbol>,
        f: impl Fn(&[Symbol], &Symbol) -> Symbol,
    ) -> Result<Self, MacError> {
        if inputs.is_empty() {
            return Err(MacError::NoUsers);
        }
        let radices: Vec<usize> = inputs.iter().map(Vec::len).chain([noise.len()]).collect();
        let mut values = Vec::new();
        for cell in MixedRadix::new(&radices) {
            let xs: Vec<Symbol> = cell[..inputs.len()]
                .iter()
                .zip(&inputs)
                .map(|(&i, a)| a[i].clone())
                .collect();
            values.push(f(&xs, &noise[cell[inputs.len()]]));
        }
        let output: Vec<Symbol> = values.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let table = values
            .iter()
            .map(|v| output.binary_search(v).expect("value collected"))
            .collect();
        Self::new(inputs, noise, output, table)
    }

    pub fn users(&self) -> usize {
        self.inputs.len()
    }

    pub fn input_alphabet(&self, user: usize) -> &[Symbol] {
        &self.inputs[user]
    }

    pub fn input_alphabets(&self) -> &[Vec<Symbol>] {
        &self.inputs
    }

    pub fn noise_alphabet(&self) -> &[Symbol] {
        &self.noise
    }

    pub fn output_alphabet(&self) -> &[Symbol] {
        &self.output
    }

    pub fn input_index(&self, user: usize, s: &Symbol) -> Result<usize, MacError> {
        self.inputs[user]
            .iter()
            .position(|a| a == s)
            .ok_or_else(|| MacError::UnknownSymbol {
                what: format!("input {}", user + 1),
                symbol: s.to_string(),
            })
    }

    pub fn output_index(&self, s: &Symbol) -> Result<usize, MacError> {
        self.output
            .iter()
            .position(|a| a == s)
            .ok_or_else(|| MacError::UnknownSymbol {
                what: "output".into(),
                symbol: s.to_string(),
            })
    }

    /// Single-letter table lookup on symbol indices.
    pub fn eval(&self, xs: &[usize], z: usize) -> usize {
        let mut cell = 0;
        for (x, a) in xs.iter().zip(&self.inputs) {
            cell = cell * a.len() + x;
        }
        self.table[cell * self.noise.len() + z]
    }

    /// Number of distinct output sequences of length `n`, checked to fit the
    /// packed representation.
    pub fn output_space(&self, n: usize) -> Result<u64, MacError> {
        (self.output.len() as u64)
            .checked_pow(n as u32)
            .filter(|&v| v < u64::MAX / 2)
            .ok_or(MacError::OutputSpaceTooLarge {
                base: self.output.len(),
                n,
            })
    }

    /// Packed output sequences reachable from the given per-user index blocks,
    /// sorted and deduplicated.
    pub fn output_codes(&self, blocks: &[&[usize]]) -> Vec<u64> {
        let n = blocks.first().map_or(0, |b| b.len());
        let mut out = Vec::with_capacity(self.noise.len().pow(n as u32));
        self.for_each_output(blocks, |y| out.push(y));
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Calls `visit` with the packed output for every noise sequence in `𝒵ⁿ`,
    /// enumerated in lexicographic order.
    pub fn for_each_output(&self, blocks: &[&[usize]], mut visit: impl FnMut(u64)) {
        let n = blocks.first().map_or(0, |b| b.len());
        let q = self.noise.len();
        let base = self.output.len() as u64;
        // Per-position output for every noise symbol.
        let mut per_pos = vec![0usize; n * q];
        let mut xs = vec![0usize; blocks.len()];
        for k in 0..n {
            for (x, b) in xs.iter_mut().zip(blocks) {
                *x = b[k];
            }
            for z in 0..q {
                per_pos[k * q + z] = self.eval(&xs, z);
            }
        }
        for zs in MixedRadix::new(&vec![q; n]) {
            let mut y = 0u64;
            for (k, &z) in zs.iter().enumerate() {
                y = y * base + per_pos[k * q + z] as u64;
            }
            visit(y);
        }
    }

    /// Unpacks an output sequence code into symbol indices.
    pub fn unpack_output(&self, mut code: u64, n: usize) -> Vec<usize> {
        let base = self.output.len() as u64;
        let mut out = vec![0; n];
        for slot in out.iter_mut().rev() {
            *slot = (code % base) as usize;
            code /= base;
        }
        out
    }

    pub fn pack_output(&self, ys: &[usize]) -> u64 {
        ys.iter()
            .fold(0u64, |acc, &y| acc * self.output.len() as u64 + y as u64)
    }

    /// The set of output sequences compatible with one input block per user.
    pub fn output_set(&self, x_blocks: &[Tuple]) -> Result<BTreeSet<Tuple>, MacError> {
        let idx = self.index_blocks(x_blocks)?;
        let refs: Vec<&[usize]> = idx.iter().map(Vec::as_slice).collect();
        let n = refs.first().map_or(0, |b| b.len());
        Ok(self
            .output_codes(&refs)
            .into_iter()
            .map(|c| {
                self.unpack_output(c, n)
                    .into_iter()
                    .map(|y| self.output[y].clone())
                    .collect()
            })
            .collect())
    }

    /// Converts per-user symbol blocks into index blocks of equal length.
    pub fn index_blocks(&self, x_blocks: &[Tuple]) -> Result<Vec<Vec<usize>>, MacError> {
        if x_blocks.len() != self.users() {
            return Err(MacError::UserCount {
                expected: self.users(),
                found: x_blocks.len(),
            });
        }
        let n = x_blocks[0].len();
        x_blocks
            .iter()
            .enumerate()
            .map(|(j, b)| {
                if b.len() != n {
                    return Err(MacError::BlockLength {
                        user: j + 1,
                        found: b.len(),
                        expected: n,
                    });
                }
                b.iter().map(|s| self.input_index(j, s)).collect()
            })
            .collect()
    }

    /// Stable 64-bit fingerprint of the channel definition.
    pub fn fingerprint(&self) -> String {
        let text = serde_json::to_string(self).expect("channel serializes");
        format!("{:016x}", fnv1a(text.as_bytes()))
    }
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn check_alphabet(a: &[Symbol], what: &str) -> Result<(), MacError> {
    if a.is_empty() {
        return Err(MacError::EmptyAlphabet { what: what.into() });
    }
    let mut seen = BTreeSet::new();
    for s in a {
        if !seen.insert(s) {
            return Err(MacError::DuplicateSymbol {
                what: what.into(),
                symbol: s.clone(),
            });
        }
    }
    Ok(())
}

/// Odometer over a mixed-radix digit vector, last digit fastest.
#[derive(Debug, Clone)]
pub struct MixedRadix {
    radices: Vec<usize>,
    digits: Vec<usize>,
    done: bool,
}

impl MixedRadix {
    pub fn new(radices: &[usize]) -> Self {
        Self {
            radices: radices.to_vec(),
            digits: vec![0; radices.len()],
            done: radices.contains(&0),
        }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.digits.clone();
        let mut i = self.radices.len();
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.digits[i] += 1;
            if self.digits[i] < self.radices[i] {
                break;
            }
            self.digits[i] = 0;
        }
        Some(out)
    }
}

/// Channel input process over a block: an optional auxiliary `U` followed
/// by the per-user blocks `Xj_1 … Xj_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputProcess {
    pub n: usize,
    pub joint: JointRange,
    pub has_u: bool,
}

pub fn u_var() -> String {
    "U".to_owned()
}

pub fn x_var(user: usize, k: usize) -> String {
    format!("X{user}_{k}")
}

pub fn y_var(k: usize) -> String {
    format!("Y_{k}")
}

pub fn z_var(k: usize) -> String {
    format!("Z_{k}")
}

/// Names of user `user`'s block `X{user}_1 … X{user}_n` (1-based user).
pub fn x_block_vars(user: usize, n: usize) -> Vec<String> {
    (1..=n).map(|k| x_var(user, k)).collect()
}

pub fn y_block_vars(n: usize) -> Vec<String> {
    (1..=n).map(y_var).collect()
}

pub fn z_block_vars(n: usize) -> Vec<String> {
    (1..=n).map(z_var).collect()
}

/// Borrowed view of a list of owned names.
pub fn names(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

impl InputProcess {
    /// Input process whose support is the given list of `(u, x¹, …, x^M)`
    /// rows, each `x^j` a block of `n` input symbols.
    pub fn from_rows(
        mac: &MacSpec,
        n: usize,
        u: Option<&[Symbol]>,
        rows: &[Vec<Tuple>],
    ) -> Result<Self, MacError> {
        let m = mac.users();
        let mut variables = Vec::new();
        if u.is_some() {
            variables.push(u_var());
        }
        for j in 1..=m {
            variables.extend(x_block_vars(j, n));
        }
        let mut support = Vec::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(MacError::UserCount {
                    expected: m,
                    found: row.len(),
                });
            }
            let mut t = Vec::with_capacity(variables.len());
            if let Some(us) = u {
                t.push(us[i].clone());
            }
            for (j, block) in row.iter().enumerate() {
                if block.len() != n {
                    return Err(MacError::BlockLength {
                        user: j + 1,
                        found: block.len(),
                        expected: n,
                    });
                }
                t.extend(block.iter().cloned());
            }
            support.push(t);
        }
        let mut alphabets: Vec<BTreeSet<Symbol>> = Vec::new();
        if u.is_some() {
            alphabets.push(u.unwrap().iter().cloned().collect());
        }
        for j in 0..m {
            for _ in 0..n {
                alphabets.push(mac.input_alphabet(j).iter().cloned().collect());
            }
        }
        let joint = JointRange::new(variables, alphabets, support)?;
        Self::new(mac, n, joint)
    }

    /// Validates an existing joint range as an input process for `mac`.
    pub fn new(mac: &MacSpec, n: usize, joint: JointRange) -> Result<Self, MacError> {
        if n == 0 {
            return Err(MacError::ZeroBlocklength);
        }
        let has_u = joint.has_variable("U");
        let expected = usize::from(has_u) + mac.users() * n;
        if joint.variables().len() != expected {
            return Err(MacError::Uv(UvError::Malformed(format!(
                "input process has {} variables, expected {expected}",
                joint.variables().len()
            ))));
        }
        for j in 1..=mac.users() {
            for name in x_block_vars(j, n) {
                let alpha = joint
                    .alphabet(&name)
                    .ok_or_else(|| UvError::UnknownVariable(name.clone()))?;
                for s in alpha {
                    mac.input_index(j - 1, s)?;
                }
            }
        }
        Ok(Self { n, joint, has_u })
    }

    /// Whether the user blocks are conditionally unrelated given `U`
    /// (mutually unrelated when `U` is absent).
    pub fn inputs_conditionally_unrelated(&self, users: usize) -> Result<bool, MacError> {
        let blocks: Vec<Vec<String>> = (1..=users).map(|j| x_block_vars(j, self.n)).collect();
        let refs: Vec<Vec<&str>> = blocks.iter().map(|b| names(b)).collect();
        let groups: Vec<&[&str]> = refs.iter().map(Vec::as_slice).collect();
        if self.has_u {
            Ok(self.joint.is_conditionally_unrelated(&groups, &["U"])?)
        } else {
            Ok(self.joint.is_unrelated(&groups)?)
        }
    }
}

fn split_row(mac: &MacSpec, p: &InputProcess, t: &Tuple) -> Result<Vec<Vec<usize>>, MacError> {
    let offset = usize::from(p.has_u);
    (0..mac.users())
        .map(|j| {
            t[offset + j * p.n..offset + (j + 1) * p.n]
                .iter()
                .map(|s| mac.input_index(j, s))
                .collect()
        })
        .collect()
}

/// Pairs every input row with every noise sequence and appends the resulting
/// outputs `Y_1 … Y_n`.
pub fn extend_joint(mac: &MacSpec, p: &InputProcess) -> Result<JointRange, MacError> {
    let joint = extend_inner(mac, p, false)?;
    if cfg!(debug_assertions) && p.has_u && joint.len() <= 512 {
        let xs: Vec<String> = (1..=mac.users()).flat_map(|j| x_block_vars(j, p.n)).collect();
        let ys = y_block_vars(p.n);
        debug_assert!(joint.is_markov(&["U"], &names(&xs), &names(&ys))?);
    }
    Ok(joint)
}

/// Like [`extend_joint`] but keeps the noise sequence as explicit variables
/// `Z_1 … Z_n` placed before the outputs.
pub fn extend_joint_with_noise(mac: &MacSpec, p: &InputProcess) -> Result<JointRange, MacError> {
    extend_inner(mac, p, true)
}

fn extend_inner(mac: &MacSpec, p: &InputProcess, keep_noise: bool) -> Result<JointRange, MacError> {
    let n = p.n;
    let mut variables = p.joint.variables().to_vec();
    let mut alphabets = p.joint.alphabets().to_vec();
    if keep_noise {
        variables.extend(z_block_vars(n));
        alphabets.extend((0..n).map(|_| mac.noise_alphabet().iter().cloned().collect()));
    }
    variables.extend(y_block_vars(n));
    alphabets.extend((0..n).map(|_| mac.output_alphabet().iter().cloned().collect()));

    let q = mac.noise_alphabet().len();
    let mut support = BTreeSet::new();
    let mut xs = vec![0usize; mac.users()];
    for t in p.joint.support() {
        let blocks = split_row(mac, p, t)?;
        for zs in MixedRadix::new(&vec![q; n]) {
            let mut row = t.clone();
            if keep_noise {
                row.extend(zs.iter().map(|&z| mac.noise_alphabet()[z].clone()));
            }
            for (k, &z) in zs.iter().enumerate() {
                for (x, b) in xs.iter_mut().zip(&blocks) {
                    *x = b[k];
                }
                row.push(mac.output_alphabet()[mac.eval(&xs, z)].clone());
            }
            support.insert(row);
        }
    }
    Ok(JointRange::new(variables, alphabets, support)?)
}

/// On-disk channel description.
///
/// `table` is either an object keyed by `"x1,…,xM,z"` or a dense array in
/// row-major order with the noise symbol varying fastest.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacFile {
    pub users: usize,
    pub inputs: Vec<Vec<Symbol>>,
    pub noise: Vec<Symbol>,
    pub output: Vec<Symbol>,
    pub table: TableFile,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TableFile {
    Dense(Vec<Symbol>),
    Keyed(BTreeMap<String, Symbol>),
}

fn lookup(alphabet: &[Symbol], text: &str, what: &str) -> Result<usize, MacError> {
    alphabet
        .iter()
        .position(|s| s.to_string() == text)
        .ok_or_else(|| MacError::UnknownSymbol {
            what: what.into(),
            symbol: text.into(),
        })
}

impl TryFrom<MacFile> for MacSpec {
    type Error = MacError;

    fn try_from(f: MacFile) -> Result<Self, MacError> {
        if f.users == 0 {
            return Err(MacError::NoUsers);
        }
        if f.inputs.len() != f.users {
            return Err(MacError::UserCount {
                expected: f.users,
                found: f.inputs.len(),
            });
        }
        let mut radices: Vec<usize> = f.inputs.iter().map(Vec::len).collect();
        radices.push(f.noise.len());
        let cells: usize = radices.iter().product();
        let table = match &f.table {
            TableFile::Dense(values) => {
                if values.len() != cells {
                    return Err(MacError::TableSize {
                        expected: cells,
                        found: values.len(),
                    });
                }
                values
                    .iter()
                    .map(|v| lookup(&f.output, &v.to_string(), "output"))
                    .collect::<Result<Vec<_>, _>>()?
            }
            TableFile::Keyed(map) => {
                let mut table = vec![usize::MAX; cells];
                for (key, value) in map {
                    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
                    if parts.len() != radices.len() {
                        return Err(MacError::BadKey(key.clone()));
                    }
                    let mut cell = 0;
                    for (i, part) in parts.iter().enumerate() {
                        let (alpha, what) = if i < f.users {
                            (&f.inputs[i], format!("input {}", i + 1))
                        } else {
                            (&f.noise, "noise".to_owned())
                        };
                        cell = cell * radices[i] + lookup(alpha, part, &what)?;
                    }
                    table[cell] = lookup(&f.output, &value.to_string(), "output")?;
                }
                if let Some(missing) = table.iter().position(|&v| v == usize::MAX) {
                    let mut digits = vec![0; radices.len()];
                    let mut rest = missing;
                    for i in (0..radices.len()).rev() {
                        digits[i] = rest % radices[i];
                        rest /= radices[i];
                    }
                    let label: Vec<String> = digits
                        .iter()
                        .enumerate()
                        .map(|(i, &d)| {
                            if i < f.users {
                                f.inputs[i][d].to_string()
                            } else {
                                f.noise[d].to_string()
                            }
                        })
                        .collect();
                    return Err(MacError::MissingCell(label.join(",")));
                }
                table
            }
        };
        MacSpec::new(f.inputs, f.noise, f.output, table)
    }
}

impl From<MacSpec> for MacFile {
    fn from(m: MacSpec) -> Self {
        let table = TableFile::Dense(m.table.iter().map(|&y| m.output[y].clone()).collect());
        MacFile {
            users: m.inputs.len(),
            inputs: m.inputs,
            noise: m.noise,
            output: m.output,
            table,
        }
    }
}

/// Small reference channels.
pub mod fixtures {
    use super::*;

    fn ints(range: std::ops::Range<i64>) -> Vec<Symbol> {
        range.map(Symbol::Int).collect()
    }

    fn int(s: &Symbol) -> i64 {
        match s {
            Symbol::Int(v) => *v,
            Symbol::Str(_) => unreachable!("fixture alphabets are integers"),
        }
    }

    /// `y = x¹ + x²` over binary inputs, no noise.
    pub fn binary_adder() -> MacSpec {
        MacSpec::from_fn(vec![ints(0..2), ints(0..2)], ints(0..1), |x, _| {
            Symbol::Int(int(&x[0]) + int(&x[1]))
        })
        .expect("valid fixture")
    }

    /// `y = x¹ ∧ x²` over binary inputs, no noise.
    pub fn binary_and() -> MacSpec {
        MacSpec::from_fn(vec![ints(0..2), ints(0..2)], ints(0..1), |x, _| {
            Symbol::Int(int(&x[0]) & int(&x[1]))
        })
        .expect("valid fixture")
    }

    /// `y = x¹ ⊕ x² ⊕ z` with `z` ranging over `{0,1}`.
    pub fn xor_full_noise() -> MacSpec {
        MacSpec::from_fn(vec![ints(0..2), ints(0..2)], ints(0..2), |x, z| {
            Symbol::Int(int(&x[0]) ^ int(&x[1]) ^ int(z))
        })
        .expect("valid fixture")
    }

    /// `y = (x¹ + x² + z) mod 3` over ternary inputs with `z ∈ {0,1}`.
    pub fn ternary_noisy_sum() -> MacSpec {
        MacSpec::from_fn(vec![ints(0..3), ints(0..3)], ints(0..2), |x, z| {
            Symbol::Int((int(&x[0]) + int(&x[1]) + int(z)) % 3)
        })
        .expect("valid fixture")
    }

    /// `y = max(x¹, x²)` over ternary inputs, pushed up by one (saturating
    /// at 2) when `z = 1`.
    pub fn ternary_noisy_max() -> MacSpec {
        MacSpec::from_fn(vec![ints(0..3), ints(0..3)], ints(0..2), |x, z| {
            Symbol::Int((int(&x[0]).max(int(&x[1])) + int(z)).min(2))
        })
        .expect("valid fixture")
    }

    /// Single-user binary identity channel.
    pub fn binary_identity() -> MacSpec {
        MacSpec::from_fn(vec![ints(0..2)], ints(0..1), |x, _| x[0].clone()).expect("valid fixture")
    }

    /// `y = x¹ + x² + z` over binary inputs with `z ∈ {0,1}`.
    pub fn noisy_adder() -> MacSpec {
        MacSpec::from_fn(vec![ints(0..2), ints(0..2)], ints(0..2), |x, z| {
            Symbol::Int(int(&x[0]) + int(&x[1]) + int(z))
        })
        .expect("valid fixture")
    }
}

/// Output sets of every input tuple, keyed by the tuple of per-user indices.
pub fn single_letter_outputs(mac: &MacSpec) -> HashMap<Vec<usize>, BTreeSet<usize>> {
    let radices: Vec<usize> = mac.input_alphabets().iter().map(Vec::len).collect();
    MixedRadix::new(&radices)
        .map(|xs| {
            let ys = (0..mac.noise_alphabet().len()).map(|z| mac.eval(&xs, z)).collect();
            (xs, ys)
        })
        .collect()
}
