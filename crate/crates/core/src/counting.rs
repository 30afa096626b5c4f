//! Counting sequences and hypercubes of a given linear complexity, plus
//! enumerators used to check the counts.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::hypercube::{cube_structure, descend, structure_of, HypercubeStructure, Vertex};
use crate::lincomp::lc_form_decompose;
use crate::sequence::{Modulus, PeriodicSequence};

fn ser_big<S: Serializer>(value: &BigUint, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.serialize_str(&value.to_str_radix(10))
}

/// `multiplier · base^exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factored {
    #[serde(serialize_with = "ser_big")]
    pub multiplier: BigUint,
    pub base: u64,
    pub exponent: u64,
}

impl Factored {
    pub fn evaluate(&self) -> Result<BigUint> {
        let exponent = u32::try_from(self.exponent).map_err(|_| Error::Internal(format!("exponent {} too large", self.exponent)))?;
        Ok(&self.multiplier * BigUint::from(self.base).pow(exponent))
    }
}

impl std::fmt::Display for Factored {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.multiplier != BigUint::from(1u32) {
            write!(f, "{}*", self.multiplier)?;
        }
        write!(f, "{}^{}", self.base, self.exponent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountResult {
    #[serde(serialize_with = "ser_big")]
    pub value: BigUint,
    pub factored: Option<Factored>,
}

impl CountResult {
    fn from_factored(factored: Factored) -> Result<Self> {
        Ok(Self { value: factored.evaluate()?, factored: Some(factored) })
    }
}

/// Number of sequences with linear complexity `lc`:
/// `Π_{v∈V} (2^{(p-1)p^{v-1}} - 1)` over the exponent set of `lc`.
pub fn count_lc_lemma21(lc: u64, modulus: &Modulus) -> Result<CountResult> {
    modulus.require_odd()?;
    let form = lc_form_decompose(lc, modulus)?;
    let one = BigUint::from(1u32);
    let value = form.exponents.iter().fold(one.clone(), |acc, &v| {
        let bits = (modulus.p() - 1) * modulus.power(v - 1);
        acc * ((&one << bits) - &one)
    });
    Ok(CountResult { value, factored: None })
}

fn validate_edges(edges: &[u32], min: u32, n: u32) -> Result<()> {
    let increasing = edges.windows(2).all(|w| w[0] < w[1]);
    if !increasing || edges.first().is_some_and(|&e| e < min) || edges.last().is_some_and(|&e| e >= n) {
        return Err(Error::InvalidEdges { edges: edges.to_vec(), min, n });
    }
    Ok(())
}

/// Free exponent `p^m·n - Σ_t (p^t - p^{t-1}) i_t - (p^{m+1} - p)/(p-1)`.
fn element_exponent(modulus: &Modulus, edges: &[u32]) -> Result<u64> {
    let p = modulus.p() as i128;
    let m = edges.len() as u32;
    let pm = p.pow(m);
    let mut e = pm * modulus.n() as i128;
    for (t, &i) in edges.iter().enumerate() {
        let t = t as u32 + 1;
        e -= (p.pow(t) - p.pow(t - 1)) * i as i128;
    }
    e -= (pm * p - p) / (p - 1);
    u64::try_from(e).map_err(|_| Error::Internal(format!("negative count exponent for edges {edges:?}")))
}

/// Number of `m`-hypercubes with edge exponents `edges` and a vertex of
/// length 0: an element vertex for `eps = 1`, or a tuple with `l` nonzeros
/// for `eps = 0`.
pub fn count_hypercubes_thm43(modulus: &Modulus, edges: &[u32], eps: u8, l: Option<usize>) -> Result<CountResult> {
    modulus.require_odd()?;
    let p = modulus.p();
    match (eps, l) {
        (1, None) => {
            validate_edges(edges, 0, modulus.n())?;
            let exponent = element_exponent(modulus, edges)?;
            CountResult::from_factored(Factored { multiplier: BigUint::from(1u32), base: p, exponent })
        }
        (1, Some(l)) => Err(Error::InvalidL { l, p, reason: "only a tuple vertex (eps = 0) takes l" }),
        (0, None) => Err(Error::InvalidL { l: 0, p, reason: "a tuple vertex (eps = 0) needs l" }),
        (0, Some(l)) => {
            if !(1 < l && (l as u64) < p) {
                return Err(Error::InvalidL { l, p, reason: "need 1 < l < p" });
            }
            if l % 2 == 1 {
                return Err(Error::InvalidL { l, p, reason: "a vertex row sum must be even" });
            }
            // the vertex occupies the last step, so no edge may have length 1
            validate_edges(edges, 1, modulus.n())?;
            let exponent = element_exponent(modulus, edges)?;
            let multiplier = BigUint::from(binomial(p, l as u64));
            CountResult::from_factored(Factored { multiplier, base: p, exponent: l as u64 * (exponent - 1) })
        }
        _ => Err(Error::InvalidL { l: l.unwrap_or(0), p, reason: "eps must be 0 or 1" }),
    }
}

/// Number of `2^n`-periodic sequences forming a cube with the given edges:
/// `2^{2^m·n - Σ_t 2^{t-1} i_t - 2^{m+1} + 2}`.
pub fn count_cubes_prop42(modulus: &Modulus, edges: &[u32]) -> Result<CountResult> {
    modulus.require_binary()?;
    validate_edges(edges, 0, modulus.n())?;
    let m = edges.len() as u32;
    let mut e = (1i128 << m) * modulus.n() as i128 - (1i128 << (m + 1)) + 2;
    for (t, &i) in edges.iter().enumerate() {
        e -= (1i128 << t) * i as i128;
    }
    let exponent = u64::try_from(e).map_err(|_| Error::Internal(format!("negative count exponent for edges {edges:?}")))?;
    CountResult::from_factored(Factored { multiplier: BigUint::from(1u32), base: 2, exponent })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VertexClass {
    Element,
    /// Length `q`, optionally with a fixed number of nonzeros.
    Tuple { length: u32, weight: Option<usize> },
}

/// Structure filter for enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypercubeClass {
    pub edges: Vec<u32>,
    pub vertex: VertexClass,
}

impl HypercubeClass {
    pub fn element(edges: Vec<u32>) -> Self {
        Self { edges, vertex: VertexClass::Element }
    }

    pub fn tuple(edges: Vec<u32>, length: u32, weight: Option<usize>) -> Self {
        Self { edges, vertex: VertexClass::Tuple { length, weight } }
    }

    pub fn matches(&self, h: &HypercubeStructure) -> bool {
        if h.edges != self.edges {
            return false;
        }
        match (&self.vertex, &h.vertex) {
            (VertexClass::Element, Vertex::Element) => true,
            (VertexClass::Tuple { length, weight }, Vertex::Tuple(t)) => {
                *length == t.length() && weight.is_none_or(|w| w == t.weight())
            }
            _ => false,
        }
    }

    /// Support sizes a member can have.
    fn weights(&self, modulus: &Modulus) -> Vec<usize> {
        let copies = modulus.power(self.edges.len() as u32) as usize;
        match self.vertex {
            VertexClass::Element => vec![copies],
            VertexClass::Tuple { weight: Some(w), .. } => vec![w * copies],
            VertexClass::Tuple { length, weight: None } => {
                let cells = modulus.power(length + 1) as usize;
                (1..=cells / 2).map(|l| 2 * l * copies).collect()
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationMode {
    /// Test every one of the `2^N` patterns.
    Exhaustive,
    /// Test every pattern whose weight a member could have.
    WeightSweep,
    /// Generate members directly from the vertex outwards.
    Constructive,
}

/// All sequences whose hypercube structure (cube edges for `p = 2`) matches
/// `class`, sorted by their literal.
pub fn enumerate_hypercubes(modulus: &Modulus, class: &HypercubeClass, mode: EnumerationMode, cap: u64) -> Result<Vec<PeriodicSequence>> {
    if modulus.is_binary() && class.vertex != VertexClass::Element {
        return Ok(Vec::new());
    }
    let period = modulus.period();
    let mut found = match mode {
        EnumerationMode::Exhaustive => {
            let required = if period >= 127 { u128::MAX } else { 1u128 << period };
            if required > cap as u128 {
                return Err(Error::BudgetExceeded { required, cap });
            }
            (1u64..1u64 << period)
                .into_par_iter()
                .filter_map(|x| {
                    let s = PeriodicSequence::from_bits(*modulus, (0..period).map(|i| (x >> i) & 1 == 1)).ok()?;
                    member(&s, class).then_some(s)
                })
                .collect()
        }
        EnumerationMode::WeightSweep => weight_sweep(modulus, class, cap)?,
        EnumerationMode::Constructive => {
            if modulus.is_binary() {
                return Err(Error::OddModulus);
            }
            constructive(modulus, class, cap)?
        }
    };
    found.par_sort_by_cached_key(|s| s.to_string());
    Ok(found)
}

fn member(s: &PeriodicSequence, class: &HypercubeClass) -> bool {
    if s.modulus().is_binary() {
        return cube_structure(s).ok().flatten().is_some_and(|edges| edges == class.edges);
    }
    match descend(s, false) {
        Ok(descent) => class.matches(&structure_of(&descent, s)),
        Err(_) => false,
    }
}

fn weight_sweep(modulus: &Modulus, class: &HypercubeClass, cap: u64) -> Result<Vec<PeriodicSequence>> {
    let period = modulus.period();
    let weights: Vec<usize> = class.weights(modulus).into_iter().filter(|&w| w <= period).collect();
    let required = weights.iter().map(|&w| binomial(period as u64, w as u64)).fold(0u128, u128::saturating_add);
    if required > cap as u128 {
        return Err(Error::BudgetExceeded { required, cap });
    }
    let mut out = Vec::new();
    for w in weights {
        let batch: Vec<PeriodicSequence> = (0..=period - w)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut hits = Vec::new();
                let mut idx: Vec<usize> = (first..first + w).collect();
                loop {
                    let s = PeriodicSequence::from_support(*modulus, &idx).expect("positions within the period");
                    if member(&s, class) {
                        hits.push(s);
                    }
                    if !next_tail(&mut idx, period) {
                        break;
                    }
                }
                hits
            })
            .collect();
        out.extend(batch);
    }
    Ok(out)
}

/// Advances `idx[1..]` to the next combination below `n`, keeping `idx[0]`.
fn next_tail(idx: &mut [usize], n: usize) -> bool {
    let w = idx.len();
    let mut i = w;
    loop {
        if i <= 1 {
            return false;
        }
        i -= 1;
        if idx[i] < n - (w - i) {
            break;
        }
    }
    idx[i] += 1;
    for j in i + 1..w {
        idx[j] = idx[j - 1] + 1;
    }
    true
}

/// Reverses the descent: start from every admissible vertex, then at each
/// exponent either replicate `p` times (an edge) or send every nonzero into
/// one of the `p` blocks (a lossless sum step).
fn constructive(modulus: &Modulus, class: &HypercubeClass, cap: u64) -> Result<Vec<PeriodicSequence>> {
    let p = modulus.p() as usize;
    let n = modulus.n();
    let (start, seeds) = match class.vertex {
        VertexClass::Element => (0, vec![vec![1u8]]),
        VertexClass::Tuple { length, weight } => {
            if length >= n {
                return Ok(Vec::new());
            }
            (length + 1, tuple_vertices(p, modulus.power(length) as usize, weight, cap)?)
        }
    };
    let edges: BTreeSet<u32> = class.edges.iter().copied().collect();
    if edges.len() != class.edges.len() || edges.iter().any(|&e| e < start || e >= n) {
        return Ok(Vec::new());
    }
    // members per seed: each distribution level multiplies by p^(weight)
    let mut required: u128 = seeds.len() as u128;
    if let Some(seed) = seeds.first() {
        let mut weight = seed.iter().filter(|&&x| x == 1).count() as u32;
        for e in start..n {
            if edges.contains(&e) {
                weight *= p as u32;
            } else {
                required = required.saturating_mul((p as u128).saturating_pow(weight));
            }
        }
    }
    if required > cap as u128 {
        return Err(Error::BudgetExceeded { required, cap });
    }
    let mut level: Vec<Vec<u8>> = seeds;
    for e in start..n {
        let len = modulus.power(e) as usize;
        if edges.contains(&e) {
            level = level.into_par_iter().map(|v| v.repeat(p)).collect();
            continue;
        }
        level = level
            .into_par_iter()
            .flat_map_iter(|v| {
                let ones: Vec<usize> = (0..len).filter(|&r| v[r] == 1).collect();
                let total = p.pow(ones.len() as u32);
                (0..total).map(move |mut code| {
                    let mut next = vec![0u8; len * p];
                    for &r in &ones {
                        next[(code % p) * len + r] = 1;
                        code /= p;
                    }
                    next
                })
            })
            .collect();
    }
    level.into_iter().map(|v| PeriodicSequence::from_bytes(*modulus, &v)).collect()
}

/// All `p` blocks of length `block` whose rows have even sums, not all zero,
/// laid out block after block.
fn tuple_vertices(p: usize, block: usize, weight: Option<usize>, cap: u64) -> Result<Vec<Vec<u8>>> {
    let even_rows: Vec<u32> = (0u32..1 << p).filter(|mask| mask.count_ones() % 2 == 0).collect();
    let required = (even_rows.len() as u128).saturating_pow(block as u32);
    if required > cap as u128 {
        return Err(Error::BudgetExceeded { required, cap });
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; block];
    loop {
        let ones: usize = choice.iter().map(|&c| even_rows[c].count_ones() as usize).sum();
        if ones > 0 && weight.is_none_or(|w| w == ones) {
            let mut v = vec![0u8; block * p];
            for (r, &c) in choice.iter().enumerate() {
                for b in 0..p {
                    v[b * block + r] = ((even_rows[c] >> b) & 1) as u8;
                }
            }
            out.push(v);
        }
        let mut r = 0;
        loop {
            if r == block {
                return Ok(out);
            }
            choice[r] += 1;
            if choice[r] < even_rows.len() {
                break;
            }
            choice[r] = 0;
            r += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn md(p: u64, n: u32) -> Modulus {
        Modulus::new(p, n).unwrap()
    }

    #[test]
    fn lc_count_values() {
        let m = md(3, 2);
        assert_eq!(count_lc_lemma21(7, &m).unwrap().value, BigUint::from(63u32));
        assert_eq!(count_lc_lemma21(9, &m).unwrap().value, BigUint::from(189u32));
        assert_eq!(count_lc_lemma21(0, &m).unwrap().value, BigUint::from(1u32));
        assert!(matches!(count_lc_lemma21(4, &m), Err(Error::NotRepresentable { .. })));
    }

    #[test]
    fn hypercube_count_values() {
        let m = md(3, 2);
        let c = |edges: &[u32], eps, l| count_hypercubes_thm43(&m, edges, eps, l).unwrap().value;
        assert_eq!(c(&[0], 1, None), BigUint::from(27u32));
        assert_eq!(c(&[1], 1, None), BigUint::from(3u32));
        assert_eq!(c(&[], 1, None), BigUint::from(9u32));
        assert_eq!(c(&[], 0, Some(2)), BigUint::from(27u32));
        let r = count_hypercubes_thm43(&md(3, 3), &[2], 0, Some(2)).unwrap();
        assert_eq!(r.factored.as_ref().unwrap().to_string(), "3*3^2");
        assert!(matches!(count_hypercubes_thm43(&m, &[0], 0, Some(2)), Err(Error::InvalidEdges { .. })));
        assert!(matches!(count_hypercubes_thm43(&m, &[1, 0], 1, None), Err(Error::InvalidEdges { .. })));
        assert!(matches!(count_hypercubes_thm43(&md(5, 1), &[], 0, Some(3)), Err(Error::InvalidL { .. })));
        assert!(matches!(count_hypercubes_thm43(&m, &[], 0, Some(1)), Err(Error::InvalidL { .. })));
    }

    #[test]
    fn cube_values() {
        let c = |n, edges: &[u32]| count_cubes_prop42(&md(2, n), edges).unwrap().value;
        assert_eq!(c(2, &[0]), BigUint::from(4u32));
        assert_eq!(c(2, &[1]), BigUint::from(2u32));
        assert_eq!(c(3, &[]), BigUint::from(8u32));
        assert_eq!(count_cubes_prop42(&md(3, 2), &[0]).unwrap_err(), Error::OddModulus);
    }

    #[test]
    fn enumeration_modes_agree() {
        let m = md(3, 2);
        let classes = [
            HypercubeClass::element(vec![]),
            HypercubeClass::element(vec![0]),
            HypercubeClass::element(vec![1]),
            HypercubeClass::tuple(vec![], 0, Some(2)),
            HypercubeClass::tuple(vec![1], 0, None),
            HypercubeClass::tuple(vec![], 1, None),
        ];
        for class in &classes {
            let a = enumerate_hypercubes(&m, class, EnumerationMode::Exhaustive, 1 << 20).unwrap();
            let b = enumerate_hypercubes(&m, class, EnumerationMode::WeightSweep, 1 << 20).unwrap();
            let c = enumerate_hypercubes(&m, class, EnumerationMode::Constructive, 1 << 20).unwrap();
            assert_eq!(a, b, "{class:?}");
            assert_eq!(a, c, "{class:?}");
        }
        let three = enumerate_hypercubes(&m, &classes[2], EnumerationMode::Exhaustive, 1 << 20).unwrap();
        let lits: Vec<String> = three.iter().map(|s| s.to_string()).collect();
        assert_eq!(lits, vec!["001001001", "010010010", "100100100"]);
    }

    #[test]
    fn cube_enumeration() {
        let m = md(2, 2);
        let found = enumerate_hypercubes(&m, &HypercubeClass::element(vec![1]), EnumerationMode::Exhaustive, 1 << 20).unwrap();
        let lits: Vec<String> = found.iter().map(|s| s.to_string()).collect();
        assert_eq!(lits, vec!["0101", "1010"]);
    }
}
