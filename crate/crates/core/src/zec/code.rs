use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::ZecError;
use crate::mac::{x_block_vars, InputProcess, MacSpec, MixedRadix};
use crate::uv::{JointRange, Symbol};

/// A codeword as symbol indices into the user's input alphabet.
pub type Codeword = Vec<usize>;

/// Encoder tables and message cardinalities of a block code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeCode {
    blocklength: usize,
    cardinalities: Vec<usize>,
    /// `encoders[j][(w⁰-1)·w_maxʲ + (wʲ-1)]`.
    encoders: Vec<Vec<Codeword>>,
    /// Fingerprint of the channel the code was built for; empty if unknown.
    #[serde(default)]
    channel: String,
    #[serde(skip)]
    staged: Option<StagedDecoder>,
}

impl ZeCode {
    pub fn new(
        blocklength: usize,
        cardinalities: Vec<usize>,
        encoders: Vec<Vec<Codeword>>,
        channel: impl Into<String>,
    ) -> Result<Self, ZecError> {
        let code = Self {
            blocklength,
            cardinalities,
            encoders,
            channel: channel.into(),
            staged: None,
        };
        code.validate_shape()?;
        Ok(code)
    }

    /// Builds a code from an encoder function over 1-based messages.
    pub fn from_fn(
        blocklength: usize,
        cardinalities: Vec<usize>,
        channel: impl Into<String>,
        mut f: impl FnMut(usize, usize, usize) -> Codeword,
    ) -> Result<Self, ZecError> {
        let w0 = *cardinalities.first().ok_or_else(|| ZecError::Config("no cardinalities".into()))?;
        let encoders = cardinalities[1..]
            .iter()
            .enumerate()
            .map(|(j, &wj)| {
                let mut table = Vec::with_capacity(w0 * wj);
                for a in 1..=w0 {
                    for b in 1..=wj {
                        table.push(f(j, a, b));
                    }
                }
                table
            })
            .collect();
        Self::new(blocklength, cardinalities, encoders, channel)
    }

    fn validate_shape(&self) -> Result<(), ZecError> {
        if self.blocklength == 0 {
            return Err(ZecError::Config("blocklength must be positive".into()));
        }
        if self.cardinalities.len() != self.encoders.len() + 1 || self.encoders.is_empty() {
            return Err(ZecError::Config(format!(
                "{} cardinalities for {} encoders",
                self.cardinalities.len(),
                self.encoders.len()
            )));
        }
        if self.cardinalities.contains(&0) {
            return Err(ZecError::Config("message cardinalities must be positive".into()));
        }
        let w0 = self.cardinalities[0];
        for (j, table) in self.encoders.iter().enumerate() {
            let wj = self.cardinalities[j + 1];
            let expected = w0
                .checked_mul(wj)
                .ok_or_else(|| ZecError::Config("encoder table size overflows".into()))?;
            if table.len() != expected {
                return Err(ZecError::Config(format!(
                    "encoder {} has {} entries, expected {expected}",
                    j + 1,
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|c| c.len() != self.blocklength) {
                return Err(ZecError::Config(format!(
                    "encoder {} has a codeword of length {}, expected {}",
                    j + 1,
                    bad.len(),
                    self.blocklength
                )));
            }
        }
        Ok(())
    }

    pub fn blocklength(&self) -> usize {
        self.blocklength
    }

    pub fn users(&self) -> usize {
        self.encoders.len()
    }

    /// `(w_max⁰, …, w_max^M)`.
    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn channel(&self) -> &str {
        &self.channel
    }

    pub fn encoders(&self) -> &[Vec<Codeword>] {
        &self.encoders
    }

    pub fn staged(&self) -> Option<&StagedDecoder> {
        self.staged.as_ref()
    }

    pub(crate) fn with_staged(mut self, staged: StagedDecoder) -> Self {
        self.staged = Some(staged);
        self
    }

    /// Codeword of user `user` (0-based) for 1-based messages.
    pub fn codeword(&self, user: usize, w0: usize, wj: usize) -> &[usize] {
        let card = self.cardinalities[user + 1];
        &self.encoders[user][(w0 - 1) * card + (wj - 1)]
    }

    /// Codewords of all users for a full 1-based message tuple.
    pub fn encode(&self, msg: &[usize]) -> Vec<&[usize]> {
        (0..self.users()).map(|j| self.codeword(j, msg[0], msg[j + 1])).collect()
    }

    pub fn message_count(&self) -> u128 {
        self.cardinalities.iter().map(|&c| c as u128).product()
    }

    /// All 1-based message tuples in lexicographic order.
    pub fn messages(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        MixedRadix::new(&self.cardinalities).map(|d| d.into_iter().map(|v| v + 1).collect())
    }

    /// Rate of message `i` in bits per channel use.
    pub fn rate(&self, i: usize) -> f64 {
        (self.cardinalities[i] as f64).log2() / self.blocklength as f64
    }

    /// Checks users, codeword symbols and channel fingerprint against `mac`.
    pub fn check_compatible(&self, mac: &MacSpec) -> Result<(), ZecError> {
        self.validate_shape()?;
        if self.users() != mac.users() {
            return Err(ZecError::Config(format!(
                "code has {} users, channel has {}",
                self.users(),
                mac.users()
            )));
        }
        if !self.channel.is_empty() && self.channel != mac.fingerprint() {
            return Err(ZecError::Config("code was built for a different channel".into()));
        }
        for (j, table) in self.encoders.iter().enumerate() {
            let q = mac.input_alphabet(j).len();
            if table.iter().flatten().any(|&x| x >= q) {
                return Err(ZecError::Config(format!(
                    "encoder {} uses a symbol outside the input alphabet",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    /// Input process with `U = w⁰` and one row per message tuple.
    pub fn input_process(&self, mac: &MacSpec) -> Result<InputProcess, ZecError> {
        self.check_compatible(mac)?;
        let n = self.blocklength;
        let mut variables = vec!["U".to_owned()];
        let mut alphabets = vec![(1..=self.cardinalities[0] as i64).map(Symbol::Int).collect()];
        for j in 0..self.users() {
            variables.extend(x_block_vars(j + 1, n));
            for _ in 0..n {
                alphabets.push(mac.input_alphabet(j).iter().cloned().collect());
            }
        }
        let mut support = Vec::new();
        for msg in self.messages() {
            let mut row = vec![Symbol::Int(msg[0] as i64)];
            for (j, cw) in self.encode(&msg).into_iter().enumerate() {
                row.extend(cw.iter().map(|&x| mac.input_alphabet(j)[x].clone()));
            }
            support.push(row);
        }
        let joint = JointRange::new(variables, alphabets, support)?;
        Ok(InputProcess::new(mac, n, joint)?)
    }
}

/// Result of inverting the code over every message and noise sequence.
enum Inversion {
    Table(HashMap<u64, usize>),
    Collision { y: u64, first: usize, second: usize },
}

fn invert(code: &ZeCode, mac: &MacSpec) -> Result<Inversion, ZecError> {
    code.check_compatible(mac)?;
    mac.output_space(code.blocklength)?;
    let mut table: HashMap<u64, usize> = HashMap::new();
    for (idx, msg) in code.messages().enumerate() {
        let blocks = code.encode(&msg);
        let mut clash = None;
        mac.for_each_output(&blocks, |y| {
            if clash.is_some() {
                return;
            }
            match table.get(&y) {
                Some(&prev) if prev != idx => clash = Some((y, prev)),
                Some(_) => {}
                None => {
                    table.insert(y, idx);
                }
            }
        });
        if let Some((y, first)) = clash {
            return Ok(Inversion::Collision {
                y,
                first,
                second: idx,
            });
        }
    }
    Ok(Inversion::Table(table))
}

/// True iff distinct message tuples have disjoint output sets, checked over
/// every message tuple and every noise sequence.
pub fn is_zero_error(code: &ZeCode, mac: &MacSpec) -> Result<bool, ZecError> {
    Ok(matches!(invert(code, mac)?, Inversion::Table(_)))
}

fn nth_message(cards: &[usize], mut idx: usize) -> Vec<usize> {
    let mut out = vec![0; cards.len()];
    for (slot, &c) in out.iter_mut().zip(cards).rev() {
        *slot = idx % c + 1;
        idx /= c;
    }
    out
}

/// Decoder metadata for codes built from overlap partitions: the common
/// message is read off the block of `⟦U|Y⟧*` containing `y`, then each
/// private message off the block of `⟦Xʲ|Y, u(w⁰)⟧*`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StagedDecoder {
    /// Packed output → common message.
    pub stage1: HashMap<u64, usize>,
    /// `[user][w⁰ - 1]`: packed output → private message.
    pub stage2: Vec<Vec<HashMap<u64, usize>>>,
}

impl StagedDecoder {
    pub fn decode(&self, y: u64) -> Option<Vec<usize>> {
        let w0 = *self.stage1.get(&y)?;
        let mut msg = vec![w0];
        for per_user in &self.stage2 {
            msg.push(*per_user.get(w0 - 1)?.get(&y)?);
        }
        Some(msg)
    }
}

/// Precomputed decoder. Construction fails unless the code is zero-error;
/// when staged metadata is present it must agree with table inversion on
/// every reachable output.
#[derive(Debug, Clone)]
pub struct ZeDecoder {
    n: usize,
    cardinalities: Vec<usize>,
    table: HashMap<u64, usize>,
    output_base: u64,
}

impl ZeDecoder {
    pub fn new(code: &ZeCode, mac: &MacSpec) -> Result<Self, ZecError> {
        let table = match invert(code, mac)? {
            Inversion::Table(t) => t,
            Inversion::Collision { y, first, second } => {
                return Err(ZecError::Internal(format!(
                    "code is not zero-error: output {:?} is reachable from messages {:?} and {:?}",
                    mac.unpack_output(y, code.blocklength),
                    nth_message(&code.cardinalities, first),
                    nth_message(&code.cardinalities, second)
                )))
            }
        };
        if let Some(staged) = &code.staged {
            for (&y, &idx) in &table {
                let expected = nth_message(&code.cardinalities, idx);
                let got = staged.decode(y);
                if got.as_deref() != Some(expected.as_slice()) {
                    return Err(ZecError::Internal(format!(
                        "staged decoder returned {got:?} for output {:?}, table inversion gives {expected:?}",
                        mac.unpack_output(y, code.blocklength)
                    )));
                }
            }
        }
        Ok(Self {
            n: code.blocklength,
            cardinalities: code.cardinalities.clone(),
            table,
            output_base: mac.output_alphabet().len() as u64,
        })
    }

    /// Message tuple for an output block given as symbol indices.
    pub fn decode(&self, y: &[usize]) -> Result<Vec<usize>, ZecError> {
        if y.len() != self.n || y.iter().any(|&v| v as u64 >= self.output_base) {
            return Err(ZecError::ChannelContract(y.to_vec()));
        }
        let packed = y.iter().fold(0u64, |acc, &v| acc * self.output_base + v as u64);
        self.decode_packed(packed)
            .ok_or_else(|| ZecError::ChannelContract(y.to_vec()))
    }

    pub fn decode_packed(&self, y: u64) -> Option<Vec<usize>> {
        self.table.get(&y).map(|&idx| nth_message(&self.cardinalities, idx))
    }

    /// Number of distinct reachable output sequences.
    pub fn reachable(&self) -> usize {
        self.table.len()
    }
}

/// One-shot decode of an output block given as symbols.
pub fn decode(code: &ZeCode, mac: &MacSpec, y: &[Symbol]) -> Result<Vec<usize>, ZecError> {
    let idx = y
        .iter()
        .map(|s| mac.output_index(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| ZecError::ChannelContract(Vec::new()))?;
    ZeDecoder::new(code, mac)?.decode(&idx)
}
