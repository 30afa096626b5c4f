//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use seqcomplex::{Modulus, PeriodicSequence};

/// Berlekamp-Massey over GF(2) on two periods of `bits`.
pub fn oracle_lc(bits: &[u8]) -> u64 {
    let seq: Vec<u8> = bits.iter().chain(bits.iter()).copied().collect();
    let len = seq.len();
    let mut c = vec![0u8; len + 1];
    let mut b = vec![0u8; len + 1];
    c[0] = 1;
    b[0] = 1;
    let (mut l, mut m) = (0usize, 1usize);
    for i in 0..len {
        let mut d = seq[i];
        for j in 1..=l {
            d ^= c[j] & seq[i - j];
        }
        if d == 0 {
            m += 1;
        } else if 2 * l <= i {
            let t = c.clone();
            for j in 0..=len - m {
                c[j + m] ^= b[j];
            }
            l = i + 1 - l;
            b = t;
            m = 1;
        } else {
            for j in 0..=len - m {
                c[j + m] ^= b[j];
            }
            m += 1;
        }
    }
    l as u64
}

pub fn oracle_seq_lc(s: &PeriodicSequence) -> u64 {
    oracle_lc(&s.to_bytes())
}

pub fn from_index(x: u64, modulus: Modulus) -> PeriodicSequence {
    let period = modulus.period();
    PeriodicSequence::from_bits(modulus, (0..period).map(|i| (x >> i) & 1 == 1)).unwrap()
}

/// Oracle complexity of every pattern of a small period, indexed by bit mask.
pub struct Table {
    pub modulus: Modulus,
    pub lc: Vec<u64>,
}

impl Table {
    pub fn new(modulus: Modulus) -> Self {
        let period = modulus.period();
        assert!(period <= 20, "table only for small periods");
        let lc = (0u64..1 << period)
            .map(|x| {
                let bits: Vec<u8> = (0..period).map(|i| ((x >> i) & 1) as u8).collect();
                oracle_lc(&bits)
            })
            .collect();
        Self { modulus, lc }
    }

    pub fn size(&self) -> u64 {
        self.lc.len() as u64
    }

    /// `L_k` of pattern `x`.
    pub fn k_error(&self, x: u64, k: u32) -> u64 {
        (0..self.size()).filter(|e| e.count_ones() <= k).map(|e| self.lc[(x ^ e) as usize]).min().unwrap()
    }

    /// Smallest flip count that lowers the complexity of `x`.
    pub fn first_drop(&self, x: u64) -> u32 {
        let target = self.lc[x as usize];
        (0..self.size()).filter(|&e| self.lc[(x ^ e) as usize] < target).map(|e| e.count_ones()).min().unwrap()
    }
}

/// Flip-count oracle for a tuple vertex: the fewest flips over every
/// nonzero target block shared by all `p` blocks.
pub fn vertex_min_change_exhaustive(blocks: &[Vec<u8>]) -> u64 {
    let len = blocks[0].len();
    assert!(len <= 20);
    (1u32..1 << len)
        .map(|target| {
            blocks
                .iter()
                .map(|b| (0..len).filter(|&r| b[r] != ((target >> r) & 1) as u8).count() as u64)
                .sum::<u64>()
        })
        .min()
        .unwrap()
}
