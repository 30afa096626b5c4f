//! Exhaustive error-pattern sweeps.
//!
//! Patterns are visited by exact weight. For each weight the combinations are
//! split by their smallest position and spread over the rayon pool; results
//! merge with `min` or `any`, so the outcome does not depend on scheduling.

use rayon::prelude::*;

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::lincomp::lc_in_place;
use crate::sequence::{Modulus, PeriodicSequence};

/// Default limit on the number of complexity evaluations in one sweep.
pub const DEFAULT_CAP: u64 = 100_000_000;

/// Running count of evaluations against a cap.
#[derive(Debug, Clone)]
pub struct Budget {
    cap: u64,
    used: u128,
}

impl Budget {
    pub fn new(cap: u64) -> Self {
        Self { cap, used: 0 }
    }

    pub fn used(&self) -> u128 {
        self.used
    }

    fn charge(&mut self, amount: u128) -> Result<()> {
        let required = self.used.saturating_add(amount);
        if required > self.cap as u128 {
            return Err(Error::BudgetExceeded { required, cap: self.cap });
        }
        self.used = required;
        Ok(())
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_CAP)
    }
}

pub(crate) struct Sweep<'a> {
    base: Vec<u8>,
    modulus: &'a Modulus,
}

impl<'a> Sweep<'a> {
    pub fn new(s: &'a PeriodicSequence) -> Self {
        Self { base: s.to_bytes(), modulus: s.modulus() }
    }

    fn period(&self) -> usize {
        self.base.len()
    }

    fn charge(&self, weight: usize, budget: &mut Budget) -> Result<()> {
        budget.charge(binomial(self.period() as u64, weight as u64))
    }

    fn eval(&self, scratch: &mut Vec<u8>, positions: &[usize]) -> u64 {
        scratch.clear();
        scratch.extend_from_slice(&self.base);
        for &i in positions {
            scratch[i] ^= 1;
        }
        lc_in_place(scratch, self.modulus)
    }

    /// Minimum complexity over all patterns of exactly `weight` flips.
    pub fn min_at(&self, weight: usize, budget: &mut Budget) -> Result<u64> {
        self.charge(weight, budget)?;
        let n = self.period();
        if weight == 0 {
            return Ok(self.eval(&mut Vec::new(), &[]));
        }
        Ok((0..=n - weight)
            .into_par_iter()
            .map_init(Vec::new, |scratch, first| {
                let mut best = u64::MAX;
                for_each_combination(n, weight, first, |idx| {
                    best = best.min(self.eval(scratch, idx));
                    best > 0
                });
                best
            })
            .min()
            .unwrap_or(u64::MAX))
    }

    /// Whether some pattern of exactly `weight` flips gets below `target`.
    pub fn any_below(&self, weight: usize, target: u64, budget: &mut Budget) -> Result<bool> {
        self.charge(weight, budget)?;
        let n = self.period();
        if weight == 0 {
            return Ok(self.eval(&mut Vec::new(), &[]) < target);
        }
        Ok((0..=n - weight).into_par_iter().any(|first| {
            let mut scratch = Vec::with_capacity(n);
            let mut found = false;
            for_each_combination(n, weight, first, |idx| {
                found = self.eval(&mut scratch, idx) < target;
                !found
            });
            found
        }))
    }

    /// Smallest weight above `from` whose patterns reach below `target`,
    /// never exceeding `limit`.
    pub fn first_weight_below(&self, from: usize, limit: usize, target: u64, budget: &mut Budget) -> Result<Option<usize>> {
        for w in from + 1..=limit {
            if self.any_below(w, target, budget)? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }
}

/// Visits all `weight`-subsets of `0..n` whose smallest element is `first`.
/// The callback returns `false` to stop early.
fn for_each_combination<F: FnMut(&[usize]) -> bool>(n: usize, weight: usize, first: usize, mut f: F) {
    let mut idx: Vec<usize> = (first..first + weight).collect();
    if idx.last().is_some_and(|&last| last >= n) {
        return;
    }
    loop {
        if !f(&idx) {
            return;
        }
        // advance idx[1..] as a combination of (first+1)..n
        let mut i = weight;
        loop {
            if i <= 1 {
                return;
            }
            i -= 1;
            if idx[i] < n - (weight - i) {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..weight {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
