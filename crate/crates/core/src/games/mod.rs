//! Benchmark games.
//!
//! - [`liars_dice`]: bidding over hidden dice with a wild highest face,
//! - [`trick`]: a two-suit trick-taking card game with a hidden talon,
//! - [`leduc`]: a two-round, six-card poker variant with one board card,
//! - [`one_shot`]: a single-decision game with fixed payoffs, useful for
//!   calibrating deciders.

pub mod leduc;
pub mod liars_dice;
pub mod one_shot;
pub mod trick;

pub use leduc::{LeducConfig, LeducGame};
pub use liars_dice::{LiarsDiceConfig, LiarsDiceGame};
pub use one_shot::OneShotGame;
pub use trick::{TrickGame, TrickGameConfig};

/// Binomial coefficient as u64; small arguments only.
pub(crate) fn binom(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Rank of a sorted k-subset of `0..n` in lexicographic order.
pub(crate) fn combo_rank(n: usize, set: &[u8]) -> u64 {
    let k = set.len();
    let mut rank = 0u64;
    let mut prev = 0usize;
    for (i, &c) in set.iter().enumerate() {
        for skipped in prev..c as usize {
            rank += binom(n - skipped - 1, k - i - 1);
        }
        prev = c as usize + 1;
    }
    rank
}

/// Inverse of [`combo_rank`]: the sorted k-subset of `0..n` at `rank`.
pub(crate) fn combo_unrank(n: usize, k: usize, mut rank: u64) -> Vec<u8> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0usize;
    for remaining in (1..=k).rev() {
        let mut c = next;
        loop {
            let below = binom(n - c - 1, remaining - 1);
            if rank < below {
                break;
            }
            rank -= below;
            c += 1;
        }
        out.push(c as u8);
        next = c + 1;
    }
    out
}
