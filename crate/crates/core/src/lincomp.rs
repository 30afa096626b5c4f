//! Linear complexity of `p^n`-periodic binary sequences.
//!
//! Three engines are provided and cross-checked in tests:
//!
//! * [`xwli_lc`], the p-way divide-and-sum algorithm for odd `p`. At each of
//!   the `n` steps the current vector `a` is cut into `p` equal blocks. Equal
//!   blocks collapse to the first block; otherwise `a` becomes their sum and
//!   the complexity grows by `(p-1)p^(n-l)`. A nonzero scalar at the end
//!   adds one.
//! * [`games_chan_lc`], the halving recurrence for `p = 2`.
//! * [`berlekamp_massey_lc`], generic LFSR synthesis over two periods. It
//!   does not depend on the period structure and serves as the oracle.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{Modulus, PeriodicSequence};

/// A linear complexity written as `ε + (p-1)·Σ_{v∈V} p^(v-1)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LcForm {
    pub epsilon: u8,
    /// Exponent set `V ⊆ {1, …, n}`.
    pub exponents: BTreeSet<u32>,
    pub value: u64,
}

impl LcForm {
    pub fn reconstruct(epsilon: u8, exponents: &BTreeSet<u32>, modulus: &Modulus) -> u64 {
        let p = modulus.p();
        epsilon as u64 + exponents.iter().map(|&v| (p - 1) * modulus.power(v - 1)).sum::<u64>()
    }
}

/// Splits `lc` into its `(ε, V)` form by greedy extraction from the largest term down.
pub fn lc_form_decompose(lc: u64, modulus: &Modulus) -> Result<LcForm> {
    let p = modulus.p();
    let mut rest = lc;
    let mut exponents = BTreeSet::new();
    for v in (1..=modulus.n()).rev() {
        let term = (p - 1) * modulus.power(v - 1);
        if rest >= term {
            rest -= term;
            exponents.insert(v);
        }
    }
    if rest > 1 {
        return Err(Error::NotRepresentable { value: lc, p, n: modulus.n() });
    }
    Ok(LcForm { epsilon: rest as u8, exponents, value: lc })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// All blocks equal; `a` collapses to the first block.
    Equal,
    /// Blocks differ; `a` becomes their sum.
    Sum,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XwliStep {
    /// Step index `l` after the increment, `1..=n`.
    pub step: u32,
    pub branch: Branch,
    /// Nonzeros in `a` before the step.
    pub weight_before: usize,
    /// Nonzeros in `a` after the step.
    pub weight_after: usize,
    pub increment: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct XwliTrace {
    pub steps: Vec<XwliStep>,
    /// Whether the final scalar was nonzero (adds one).
    pub final_one: bool,
}

impl XwliTrace {
    pub fn total(&self) -> u64 {
        self.steps.iter().map(|s| s.increment).sum::<u64>() + u64::from(self.final_one)
    }
}

/// Runs the divide-and-sum algorithm with a full trace. Requires odd `p`.
pub fn xwli_lc(s: &PeriodicSequence) -> Result<(LcForm, XwliTrace)> {
    let modulus = *s.modulus();
    modulus.require_odd()?;
    let p = modulus.p() as usize;
    let n = modulus.n();
    let mut a = s.to_bytes();
    let mut len = a.len();
    let mut trace = XwliTrace::default();
    let mut lc = 0u64;
    for step in 1..=n {
        let block = len / p;
        let weight_before = count_ones(&a[..len]);
        let branch = if blocks_equal(&a[..len], p) {
            Branch::Equal
        } else {
            fold_blocks(&mut a[..len], p);
            Branch::Sum
        };
        let increment = match branch {
            Branch::Equal => 0,
            Branch::Sum => (p as u64 - 1) * modulus.power(n - step),
        };
        lc += increment;
        len = block;
        trace.steps.push(XwliStep {
            step,
            branch,
            weight_before,
            weight_after: count_ones(&a[..len]),
            increment,
        });
    }
    trace.final_one = a[0] != 0;
    lc += u64::from(trace.final_one);
    debug_assert_eq!(trace.total(), lc);
    let form = lc_form_decompose(lc, &modulus)?;
    Ok((form, trace))
}

/// Games-Chan halving recurrence. Requires `p = 2`.
pub fn games_chan_lc(s: &PeriodicSequence) -> Result<u64> {
    s.modulus().require_binary()?;
    let mut a = s.to_bytes();
    Ok(games_chan_in_place(&mut a))
}

/// Berlekamp-Massey over GF(2) on two periods of `s`.
pub fn berlekamp_massey_lc(s: &PeriodicSequence) -> u64 {
    let period = s.to_bytes();
    let seq: Vec<u8> = period.iter().chain(period.iter()).copied().collect();
    berlekamp_massey(&seq) as u64
}

/// Linear complexity by the fast engine for the modulus: XWLI for odd `p`, Games-Chan for `p = 2`.
pub fn linear_complexity(s: &PeriodicSequence) -> u64 {
    let mut a = s.to_bytes();
    lc_in_place(&mut a, s.modulus())
}

/// Shortest LFSR length generating the finite sequence `seq` over GF(2).
pub fn berlekamp_massey(seq: &[u8]) -> usize {
    let len = seq.len();
    let mut c = vec![0u8; len + 1];
    let mut b = vec![0u8; len + 1];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut shift = 1usize;
    for i in 0..len {
        let mut d = seq[i];
        for j in 1..=l {
            d ^= c[j] & seq[i - j];
        }
        if d == 0 {
            shift += 1;
            continue;
        }
        if 2 * l <= i {
            let previous = c.clone();
            for j in 0..=len - shift {
                c[j + shift] ^= b[j];
            }
            l = i + 1 - l;
            b = previous;
            shift = 1;
        } else {
            for j in 0..=len - shift {
                c[j + shift] ^= b[j];
            }
            shift += 1;
        }
    }
    l
}

/// Linear complexity of the period held in `buf` (0/1 bytes). `buf` is clobbered.
pub(crate) fn lc_in_place(buf: &mut [u8], modulus: &Modulus) -> u64 {
    if modulus.is_binary() {
        games_chan_in_place(buf)
    } else {
        xwli_in_place(buf, modulus)
    }
}

fn xwli_in_place(buf: &mut [u8], modulus: &Modulus) -> u64 {
    let p = modulus.p() as usize;
    let n = modulus.n();
    let mut len = buf.len();
    let mut lc = 0u64;
    for step in 1..=n {
        let block = len / p;
        if !blocks_equal(&buf[..len], p) {
            fold_blocks(&mut buf[..len], p);
            lc += (p as u64 - 1) * modulus.power(n - step);
        }
        len = block;
    }
    lc + u64::from(buf[0] != 0)
}

fn games_chan_in_place(buf: &mut [u8]) -> u64 {
    let mut len = buf.len();
    let mut lc = 0u64;
    while len > 1 {
        let half = len / 2;
        let (left, right) = buf[..len].split_at_mut(half);
        let mut differ = false;
        for (l, r) in left.iter_mut().zip(right.iter()) {
            if *l != *r {
                differ = true;
            }
        }
        if differ {
            for (l, r) in left.iter_mut().zip(right.iter()) {
                *l ^= *r;
            }
            lc += half as u64;
        }
        len = half;
    }
    lc + u64::from(buf[0] != 0)
}

/// True when the `p` consecutive blocks of `a` are identical.
pub(crate) fn blocks_equal(a: &[u8], p: usize) -> bool {
    let block = a.len() / p;
    let first = &a[..block];
    (1..p).all(|i| &a[i * block..(i + 1) * block] == first)
}

/// Replaces the first block of `a` by the sum of all `p` blocks.
pub(crate) fn fold_blocks(a: &mut [u8], p: usize) {
    let block = a.len() / p;
    let (head, tail) = a.split_at_mut(block);
    for i in 0..p - 1 {
        for (h, t) in head.iter_mut().zip(&tail[i * block..(i + 1) * block]) {
            *h ^= *t;
        }
    }
}

pub(crate) fn count_ones(a: &[u8]) -> usize {
    a.iter().filter(|&&b| b != 0).count()
}
