//! Periodic binary sequences over a validated period `p^n`.

use std::fmt;

use bitvec::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};

/// Largest supported period length.
pub const MAX_PERIOD: usize = 1 << 20;

/// A period length `N = p^n`.
///
/// `p` is either 2, or an odd prime for which 2 is a primitive root modulo
/// `p^2`. The closed forms for odd `p` depend on that condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Modulus {
    p: u64,
    n: u32,
    #[serde(rename = "period")]
    len: usize,
}

impl Modulus {
    pub fn new(p: u64, n: u32) -> Result<Self> {
        if p < 2 || n < 1 {
            return Err(Error::InvalidModulus { p, n });
        }
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p != 2 {
            let sq = p * p;
            let required = p * (p - 1);
            let order = arith::multiplicative_order(2, sq, required);
            if order != required {
                return Err(Error::NotPrimitiveRoot { p, order, required });
            }
        }
        let len = p
            .checked_pow(n)
            .filter(|&len| len <= MAX_PERIOD as u64)
            .ok_or(Error::PeriodTooLarge { p, n, limit: MAX_PERIOD })?;
        Ok(Self { p, n, len: len as usize })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The period length `p^n`.
    pub fn period(&self) -> usize {
        self.len
    }

    pub fn is_binary(&self) -> bool {
        self.p == 2
    }

    pub(crate) fn require_odd(&self) -> Result<()> {
        if self.is_binary() {
            Err(Error::EvenModulus)
        } else {
            Ok(())
        }
    }

    pub(crate) fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::OddModulus)
        }
    }

    /// `p^e` as a machine integer.
    pub fn power(&self, e: u32) -> u64 {
        arith::pow(self.p, e)
    }
}

impl fmt::Display for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.p, self.n)
    }
}

/// The distance `p^y` between two positions whose difference is `(px + i)p^y`, `0 < i < p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PDistance {
    pub exponent: u32,
    pub value: u64,
}

pub fn pn_distance(i: usize, j: usize, modulus: &Modulus) -> Result<PDistance> {
    let period = modulus.period();
    for position in [i, j] {
        if position >= period {
            return Err(Error::PositionOutOfRange { position, period });
        }
    }
    if i == j {
        return Err(Error::EqualPositions);
    }
    let d = i.abs_diff(j) as u64;
    let exponent = arith::valuation(d, modulus.p());
    Ok(PDistance { exponent, value: modulus.power(exponent) })
}

/// One period `s_0 … s_{N-1}` of a periodic binary sequence.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PeriodicSequence {
    modulus: Modulus,
    bits: BitVec<u64, Lsb0>,
}

impl PeriodicSequence {
    pub fn zero(modulus: Modulus) -> Self {
        Self { modulus, bits: bitvec![u64, Lsb0; 0; modulus.period()] }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(modulus: Modulus, bits: I) -> Result<Self> {
        let bits: BitVec<u64, Lsb0> = bits.into_iter().collect();
        if bits.len() != modulus.period() {
            return Err(Error::LengthMismatch { expected: modulus.period(), found: bits.len() });
        }
        Ok(Self { modulus, bits })
    }

    /// Builds a sequence from 0/1 bytes. Any nonzero byte counts as 1.
    pub fn from_bytes(modulus: Modulus, bytes: &[u8]) -> Result<Self> {
        Self::from_bits(modulus, bytes.iter().map(|&b| b != 0))
    }

    /// Sequence with ones exactly at `positions`.
    pub fn from_support(modulus: Modulus, positions: &[usize]) -> Result<Self> {
        let mut s = Self::zero(modulus);
        for &position in positions {
            if position >= modulus.period() {
                return Err(Error::PositionOutOfRange { position, period: modulus.period() });
            }
            s.bits.set(position, true);
        }
        Ok(s)
    }

    /// Parses a literal of `0`/`1` characters; whitespace is ignored.
    pub fn parse(text: &str, modulus: Modulus) -> Result<Self> {
        let mut bits = BitVec::<u64, Lsb0>::with_capacity(modulus.period());
        for (offset, ch) in text.char_indices() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => return Err(Error::InvalidCharacter { ch: c, offset }),
            }
        }
        if bits.len() != modulus.period() {
            return Err(Error::LengthMismatch { expected: modulus.period(), found: bits.len() });
        }
        Ok(Self { modulus, bits })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, value: bool) {
        self.bits.set(i, value);
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.bits[i];
        self.bits.set(i, !v);
    }

    pub fn bits(&self) -> &BitSlice<u64, Lsb0> {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().by_vals()
    }

    /// Bits as 0/1 bytes, the working layout of the complexity kernels.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.iter().map(u8::from).collect()
    }

    /// Positions of the nonzero elements, ascending.
    pub fn support(&self) -> Vec<usize> {
        self.bits.iter_ones().collect()
    }

    /// `W_H(s)`, the number of ones in one period.
    pub fn weight(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.bits.not_any()
    }

    pub fn xor(&self, other: &Self) -> Result<Self> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch);
        }
        let mut bits = self.bits.clone();
        bits ^= &other.bits;
        Ok(Self { modulus: self.modulus, bits })
    }

    /// Hamming distance between two periods.
    pub fn distance(&self, other: &Self) -> Result<usize> {
        Ok(self.xor(other)?.weight())
    }

    /// The literal with a space every `group` characters, as in `110 000 000`.
    pub fn to_grouped(&self, group: usize) -> String {
        let mut out = String::with_capacity(self.len() + self.len() / group.max(1));
        for (i, b) in self.iter().enumerate() {
            if group > 0 && i > 0 && i % group == 0 {
                out.push(' ');
            }
            out.push(if b { '1' } else { '0' });
        }
        out
    }
}

pub fn hamming_weight(s: &PeriodicSequence) -> usize {
    s.weight()
}

pub fn xor_sequences(a: &PeriodicSequence, b: &PeriodicSequence) -> Result<PeriodicSequence> {
    a.xor(b)
}

impl fmt::Display for PeriodicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for PeriodicSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PeriodicSequence({}, {})", self.modulus, self.to_grouped(self.modulus.p() as usize))
    }
}

impl Serialize for PeriodicSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// One line of a corpus file that holds a sequence literal.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    /// 1-based line number in the source text.
    pub line: usize,
    pub sequence: PeriodicSequence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusError {
    pub line: usize,
    pub error: Error,
}

impl fmt::Display for CorpusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

impl std::error::Error for CorpusError {}

/// Parses a corpus: one literal per line; blank lines and lines starting with `#` are skipped.
pub fn parse_corpus(text: &str, modulus: Modulus) -> std::result::Result<Vec<CorpusEntry>, CorpusError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let sequence =
            PeriodicSequence::parse(line, modulus).map_err(|error| CorpusError { line: idx + 1, error })?;
        out.push(CorpusEntry { line: idx + 1, sequence });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(p: u64, n: u32) -> Modulus {
        Modulus::new(p, n).unwrap()
    }

    #[test]
    fn modulus_validation() {
        assert_eq!(m(3, 2).period(), 9);
        assert_eq!(m(5, 2).period(), 25);
        assert_eq!(m(2, 5).period(), 32);
        assert!(matches!(Modulus::new(7, 1), Err(Error::NotPrimitiveRoot { order: 21, .. })));
        assert_eq!(Modulus::new(9, 1), Err(Error::NotPrime(9)));
        assert!(matches!(Modulus::new(3, 13), Err(Error::PeriodTooLarge { .. })));
        assert!(Modulus::new(2, 20).is_ok());
        assert!(matches!(Modulus::new(1, 2), Err(Error::InvalidModulus { .. })));
        assert!(matches!(Modulus::new(3, 0), Err(Error::InvalidModulus { .. })));
    }

    #[test]
    fn accepted_odd_primes_below_64() {
        let accepted: Vec<u64> =
            (3..64).filter(|&p| arith::is_prime(p)).filter(|&p| Modulus::new(p, 1).is_ok()).collect();
        assert_eq!(accepted, vec![3, 5, 11, 13, 19, 29, 37, 53, 59, 61]);
    }

    #[test]
    fn parse_literals() {
        let s = PeriodicSequence::parse("110 100 100", m(3, 2)).unwrap();
        assert_eq!(s.to_string(), "110100100");
        assert_eq!(s.to_grouped(3), "110 100 100");
        assert!(PeriodicSequence::parse("000000000", m(3, 2)).unwrap().is_zero());
        assert_eq!(
            PeriodicSequence::parse("11", m(3, 2)),
            Err(Error::LengthMismatch { expected: 9, found: 2 })
        );
        assert_eq!(
            PeriodicSequence::parse("1102100100", m(3, 2)),
            Err(Error::InvalidCharacter { ch: '2', offset: 3 })
        );
    }

    #[test]
    fn weights() {
        let md = m(3, 2);
        assert_eq!(PeriodicSequence::parse("110 000 000", md).unwrap().weight(), 2);
        assert_eq!(PeriodicSequence::zero(md).weight(), 0);
        assert_eq!(hamming_weight(&PeriodicSequence::parse("111 000 000", md).unwrap()), 3);
    }

    #[test]
    fn distances() {
        let md = m(3, 2);
        assert_eq!(pn_distance(0, 3, &md).unwrap().value, 3);
        assert_eq!(pn_distance(0, 1, &md).unwrap().value, 1);
        assert_eq!(pn_distance(0, 6, &md).unwrap(), PDistance { exponent: 1, value: 3 });
        assert_eq!(pn_distance(6, 0, &md).unwrap().value, 3);
        assert_eq!(pn_distance(4, 4, &md), Err(Error::EqualPositions));
        assert!(matches!(pn_distance(0, 9, &md), Err(Error::PositionOutOfRange { .. })));
    }

    #[test]
    fn xor_examples() {
        let md = m(3, 2);
        let p = |t| PeriodicSequence::parse(t, md).unwrap();
        assert_eq!(xor_sequences(&p("100 100 100"), &p("010 000 000")).unwrap(), p("110 100 100"));
        assert_eq!(xor_sequences(&p("111 000 000"), &p("000 111 111")).unwrap(), p("111 111 111"));
        let s = p("101 110 011");
        assert!(s.xor(&s).unwrap().is_zero());
        let other = PeriodicSequence::zero(m(2, 3));
        assert_eq!(PeriodicSequence::zero(m(3, 1)).xor(&other), Err(Error::ModulusMismatch));
    }

    #[test]
    fn corpus_parsing() {
        let md = m(3, 2);
        let text = "# header\n110 000 000\n\n   # indented comment\n111111111\n";
        let entries = parse_corpus(text, md).unwrap();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].line, 2);
        assert_eq!(entries[1].line, 5);
        let err = parse_corpus("110000000\n1100\n", md).unwrap_err();
        assert_eq!(err.line, 2);
        assert!(matches!(err.error, Error::LengthMismatch { .. }));
    }
}
