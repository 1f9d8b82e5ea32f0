//! Zero-error codes for multiple access channels.
//!
//! Messages are numbered from 1 at the public surface. A code of blocklength
//! `n` carries a common message `w⁰ ∈ [1:w_max⁰]` seen by every encoder and a
//! private message `wʲ ∈ [1:w_maxʲ]` per user; user `j` sends `Eʲ(w⁰, wʲ)`.

mod code;
mod construct;
mod rate;
mod region;
mod timeshare;

use thiserror::Error;

use crate::mac::MacError;
use crate::uv::UvError;

pub use code::{decode, is_zero_error, Codeword, StagedDecoder, ZeCode, ZeDecoder};
pub use construct::{construct_code, ConstructedCode};
pub use rate::{maximal_indices, maximal_points, RatePoint, Source};
pub use region::{
    enumerate_region_bruteforce, enumerate_region_thm1, enumerate_region_thm1_exhaustive, region_diff, Caps,
    RegionApprox, RegionMeta,
};
pub use timeshare::time_share;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZecError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("output sequence {0:?} is not reachable from any codeword")]
    ChannelContract(Vec<usize>),
    #[error("internal invariant failure: {0}")]
    Internal(String),
    #[error("search space estimate {estimate} exceeds the limit {limit}")]
    SearchTooLarge { estimate: u128, limit: u128 },
    #[error(transparent)]
    Mac(#[from] MacError),
    #[error(transparent)]
    Uv(#[from] UvError),
}
