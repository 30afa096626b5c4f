//! Hypercubes: sequences whose divide-and-sum descent never loses a nonzero
//! element except in the sum that produces the vertex.
//!
//! The descent either ends on a single nonzero element (an element vertex)
//! or reaches a step whose blocks are nonzero but sum to zero (a tuple
//! vertex of length `q` when each block has `p^q` entries). Every
//! equal-block step before that contributes an edge of length `p^i`,
//! where `p^i` is the block length at that step.

mod cube;
mod decompose;

pub use cube::{cube_lc_2n, cube_structure, Cube};
pub use decompose::{standard_decompose, Decomposition, DecompositionPart};

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::lincomp::{blocks_equal, count_ones, fold_blocks};
use crate::sequence::{Modulus, PeriodicSequence};

/// A vertex tuple `{A_0, …, A_{p-1}}`: `p` blocks of length `p^q` that are
/// not all zero and whose elementwise sum is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TupleVertex {
    length: u32,
    blocks: Vec<Vec<u8>>,
}

impl TupleVertex {
    pub fn new(blocks: Vec<Vec<u8>>, p: u64) -> Result<Self> {
        if blocks.len() as u64 != p || blocks[0].is_empty() || blocks.iter().any(|b| b.len() != blocks[0].len()) {
            return Err(Error::MalformedBlocks);
        }
        let length = crate::arith::exact_log(blocks[0].len() as u64, p).ok_or(Error::MalformedBlocks)?;
        if blocks.iter().flatten().any(|&b| b > 1) {
            return Err(Error::MalformedBlocks);
        }
        let tuple = Self { length, blocks };
        if tuple.weight() == 0 || tuple.rows().any(|row| row.iter().sum::<u8>() % 2 != 0) {
            return Err(Error::NotTupleVertex);
        }
        Ok(tuple)
    }

    /// `q`, with blocks of length `p^q`.
    pub fn length(&self) -> u32 {
        self.length
    }

    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn block_len(&self) -> usize {
        self.blocks[0].len()
    }

    /// Number of nonzero entries `l`.
    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| count_ones(b)).sum()
    }

    /// Row `r` across the blocks: `(A_0[r], …, A_{p-1}[r])`.
    pub fn rows(&self) -> impl Iterator<Item = Vec<u8>> + '_ {
        (0..self.block_len()).map(move |r| self.blocks.iter().map(|b| b[r]).collect())
    }

    pub fn block_literals(&self) -> Vec<String> {
        self.blocks.iter().map(|b| b.iter().map(|&x| if x == 1 { '1' } else { '0' }).collect()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Vertex {
    /// The descent ends on a single nonzero element.
    Element,
    Tuple(TupleVertex),
}

impl Vertex {
    /// Nonzero entries of one vertex copy.
    pub fn weight(&self) -> usize {
        match self {
            Vertex::Element => 1,
            Vertex::Tuple(t) => t.weight(),
        }
    }

    pub fn length(&self) -> Option<u32> {
        match self {
            Vertex::Element => None,
            Vertex::Tuple(t) => Some(t.length()),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Vertex::Element => "element",
            Vertex::Tuple(_) => "tuple",
        }
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Vertex::Element => {
                let mut st = serializer.serialize_struct("Vertex", 1)?;
                st.serialize_field("kind", "element")?;
                st.end()
            }
            Vertex::Tuple(t) => {
                let mut st = serializer.serialize_struct("Vertex", 4)?;
                st.serialize_field("kind", "tuple")?;
                st.serialize_field("length", &t.length())?;
                st.serialize_field("l", &t.weight())?;
                st.serialize_field("blocks", &t.block_literals())?;
                st.end()
            }
        }
    }
}

/// Dimension, edge exponents and vertex of a hypercube.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HypercubeStructure {
    /// Edge exponents `i_1 < … < i_m`; edge lengths are `p^{i_t}`.
    pub edges: Vec<u32>,
    pub vertex: Vertex,
}

impl HypercubeStructure {
    pub fn dimension(&self) -> u32 {
        self.edges.len() as u32
    }

    pub fn vertex_count(&self, modulus: &Modulus) -> u64 {
        modulus.power(self.dimension())
    }

    /// `ε` of the closed form: 1, 0, or `(1-p)(p^0 + … + p^(q-1)) = 1 - p^q`.
    pub fn epsilon(&self, modulus: &Modulus) -> i64 {
        match &self.vertex {
            Vertex::Element => 1,
            Vertex::Tuple(t) => 1 - modulus.power(t.length()) as i64,
        }
    }
}

impl Serialize for HypercubeStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("HypercubeStructure", 3)?;
        st.serialize_field("m", &self.dimension())?;
        st.serialize_field("edges", &self.edges)?;
        st.serialize_field("vertex", &self.vertex)?;
        st.end()
    }
}

impl fmt::Display for HypercubeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self.edges.iter().map(|e| e.to_string()).collect();
        write!(f, "m={} edges={{{}}} vertex={}", self.dimension(), edges.join(","), self.vertex.kind())?;
        if let Vertex::Tuple(t) = &self.vertex {
            write!(f, " length={} l={}", t.length(), t.weight())?;
        }
        Ok(())
    }
}

/// How the descent ended, with the positions of `s` behind each vertex cell.
#[derive(Debug, Clone)]
pub(crate) enum Terminal {
    Element,
    /// The tuple and, for each `(block, row)`, the positions whose flip toggles that cell.
    Tuple { vertex: TupleVertex, sources: Vec<Vec<Vec<usize>>> },
}

pub(crate) struct Descent {
    pub edges: Vec<u32>,
    pub terminal: Terminal,
    /// The input after any rewrites.
    pub rewritten: Vec<u8>,
}

/// Walks the divide-and-sum descent of a nonzero sequence while tracking
/// which original positions stand behind each entry of the current vector.
///
/// With `rewrite`, every lossy sum step is replaced by its tilde rewrite and
/// the zeroed entries are traced back into the input. Without it, a lossy
/// non-terminal sum fails with [`Error::NotAHypercube`].
pub(crate) fn descend(s: &PeriodicSequence, rewrite: bool) -> Result<Descent> {
    let modulus = *s.modulus();
    let p = modulus.p() as usize;
    let n = modulus.n();
    let mut h = s.to_bytes();
    let mut a = h.clone();
    let mut sources: Vec<Vec<usize>> = (0..a.len()).map(|i| vec![i]).collect();
    let mut edges = Vec::new();
    for step in 1..=n {
        let block = a.len() / p;
        let exponent = n - step;
        if blocks_equal(&a, p) {
            a.truncate(block);
            let mut merged: Vec<Vec<usize>> = vec![Vec::new(); block];
            for (idx, src) in sources.into_iter().enumerate() {
                merged[idx % block].extend(src);
            }
            sources = merged;
            edges.push(exponent);
            continue;
        }
        let parts: Vec<Vec<u8>> = a.chunks(block).map(<[u8]>::to_vec).collect();
        let mut sum = a.clone();
        fold_blocks(&mut sum, p);
        sum.truncate(block);
        if count_ones(&sum) == 0 {
            let vertex = TupleVertex::new(parts, p as u64)?;
            let mut cells = vec![Vec::with_capacity(block); p];
            for (idx, src) in sources.into_iter().enumerate() {
                cells[idx / block].push(src);
            }
            edges.sort_unstable();
            return Ok(Descent { edges, terminal: Terminal::Tuple { vertex, sources: cells }, rewritten: h });
        }
        let parts = if count_ones(&sum) < count_ones(&a) {
            if !rewrite {
                return Err(Error::NotAHypercube);
            }
            let rw = tilde_rewrite(&parts)?;
            for (i, (old, new)) in parts.iter().zip(&rw.blocks).enumerate() {
                for r in 0..block {
                    if old[r] != new[r] {
                        for &pos in &sources[i * block + r] {
                            h[pos] = 0;
                        }
                    }
                }
            }
            rw.blocks
        } else {
            parts
        };
        let mut next = Vec::with_capacity(block);
        for r in 0..block {
            let owner = (0..p).find(|&i| parts[i][r] == 1).unwrap_or(0);
            next.push(std::mem::take(&mut sources[owner * block + r]));
        }
        sources = next;
        a = sum;
    }
    debug_assert_eq!(a, vec![1]);
    edges.sort_unstable();
    Ok(Descent { edges, terminal: Terminal::Element, rewritten: h })
}

/// Whether `s` is a hypercube. Requires odd `p` and a nonzero sequence.
pub fn is_hypercube(s: &PeriodicSequence) -> Result<bool> {
    s.modulus().require_odd()?;
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    match descend(s, false) {
        Ok(_) => Ok(true),
        Err(Error::NotAHypercube) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Edges and vertex of a hypercube.
pub fn extract_structure(s: &PeriodicSequence) -> Result<HypercubeStructure> {
    s.modulus().require_odd()?;
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let descent = descend(s, false)?;
    Ok(structure_of(&descent, s))
}

pub(crate) fn structure_of(descent: &Descent, s: &PeriodicSequence) -> HypercubeStructure {
    let vertex = match &descent.terminal {
        Terminal::Element => Vertex::Element,
        Terminal::Tuple { vertex, .. } => Vertex::Tuple(vertex.clone()),
    };
    let structure = HypercubeStructure { edges: descent.edges.clone(), vertex };
    debug_assert_eq!(
        s.weight() as u64,
        structure.vertex.weight() as u64 * structure.vertex_count(s.modulus())
    );
    structure
}

fn closed_form(eps: i64, edges: impl Iterator<Item = u32>, modulus: &Modulus) -> u64 {
    let p = modulus.p() as i64;
    let span: i64 = edges.map(|e| modulus.power(e) as i64).sum();
    let lc = eps - 1 + modulus.period() as i64 - (p - 1) * span;
    debug_assert!(lc >= 0);
    lc as u64
}

/// `ε - 1 + p^n - (p-1)(p^{i_1} + … + p^{i_m})`.
pub fn lc_from_structure(h: &HypercubeStructure, modulus: &Modulus) -> u64 {
    closed_form(h.epsilon(modulus), h.edges.iter().copied(), modulus)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NextLower {
    /// The smallest unused admissible exponent `i_0`.
    pub exponent: u32,
    pub lc: u64,
}

/// Largest hypercube complexity below `L(h)` reachable by adding one edge.
pub fn next_lower_hypercube_lc(h: &HypercubeStructure, modulus: &Modulus) -> Result<NextLower> {
    let start = match &h.vertex {
        Vertex::Element => 0,
        Vertex::Tuple(t) => t.length() + 1,
    };
    let exponent = (start..modulus.n()).find(|e| !h.edges.contains(e)).ok_or(Error::NoEligibleExponent)?;
    let edges = h.edges.iter().copied().chain(std::iter::once(exponent));
    Ok(NextLower { exponent, lc: closed_form(h.epsilon(modulus), edges, modulus) })
}

/// Result of rewriting unbalanced blocks so the sum step loses nothing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeRewrite {
    pub blocks: Vec<Vec<u8>>,
    /// For each row, the block holding its single surviving nonzero.
    pub sources: Vec<Option<usize>>,
}

/// Keeps the first nonzero of every odd row and clears every even row.
///
/// The block sum is unchanged, the rewritten blocks carry exactly as many
/// nonzeros as the sum, and the blocks remain pairwise unequal as a set.
pub fn tilde_rewrite(blocks: &[Vec<u8>]) -> Result<TildeRewrite> {
    if blocks.len() < 2 || blocks[0].is_empty() || blocks.iter().any(|b| b.len() != blocks[0].len()) {
        return Err(Error::MalformedBlocks);
    }
    if blocks.iter().all(|b| b == &blocks[0]) {
        return Err(Error::BlocksEqual);
    }
    let rows = blocks[0].len();
    let mut out = vec![vec![0u8; rows]; blocks.len()];
    let mut sources = Vec::with_capacity(rows);
    for r in 0..rows {
        let ones: Vec<usize> = (0..blocks.len()).filter(|&i| blocks[i][r] != 0).collect();
        if ones.len() % 2 == 1 {
            out[ones[0]][r] = 1;
            sources.push(Some(ones[0]));
        } else {
            sources.push(None);
        }
    }
    if sources.iter().all(Option::is_none) {
        return Err(Error::IsVertex);
    }
    Ok(TildeRewrite { blocks: out, sources })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(t: &str, p: u64, n: u32) -> PeriodicSequence {
        PeriodicSequence::parse(t, Modulus::new(p, n).unwrap()).unwrap()
    }

    fn blocks(ts: &[&str]) -> Vec<Vec<u8>> {
        ts.iter().map(|t| t.bytes().map(|b| b - b'0').collect()).collect()
    }

    #[test]
    fn recognition() {
        assert!(is_hypercube(&seq("110 000 000 110 000 000 110 000 000", 3, 3)).unwrap());
        assert!(!is_hypercube(&seq("110 100 100 110 100 100 110 100 100", 3, 3)).unwrap());
        assert!(is_hypercube(&seq("100 000 000", 3, 2)).unwrap());
        assert_eq!(is_hypercube(&seq("000 000 000", 3, 2)), Err(Error::ZeroSequence));
        assert_eq!(is_hypercube(&seq("1100", 2, 2)), Err(Error::EvenModulus));
    }

    #[test]
    fn lossy_final_scalar_is_not_a_hypercube() {
        // 1,1,1,0,0 sums to a single one while three elements enter the step
        assert!(!is_hypercube(&seq("11100", 5, 1)).unwrap());
        assert!(is_hypercube(&seq("11000", 5, 1)).unwrap());
    }

    #[test]
    fn structures_from_examples() {
        let md = Modulus::new(3, 3).unwrap();
        let h = extract_structure(&seq("110 110 110 110 110 110 110 110 110", 3, 3)).unwrap();
        assert_eq!(h.edges, vec![1, 2]);
        let Vertex::Tuple(t) = &h.vertex else { panic!("expected tuple") };
        assert_eq!((t.length(), t.weight()), (0, 2));
        assert_eq!(lc_from_structure(&h, &md), 2);

        let h = extract_structure(&seq("000 100 100 000 100 100 000 100 100", 3, 3)).unwrap();
        assert_eq!(h.edges, vec![2]);
        let Vertex::Tuple(t) = &h.vertex else { panic!("expected tuple") };
        assert_eq!((t.length(), t.weight()), (1, 2));
        assert_eq!(t.block_literals(), vec!["000", "100", "100"]);
        assert_eq!(h.epsilon(&md), -2);
        assert_eq!(lc_from_structure(&h, &md), 6);

        let md = Modulus::new(3, 2).unwrap();
        let h = extract_structure(&seq("100 100 100", 3, 2)).unwrap();
        assert_eq!((h.dimension(), h.edges.clone(), h.vertex.clone()), (1, vec![1], Vertex::Element));
        assert_eq!(h.vertex_count(&md), 3);
        let h = extract_structure(&seq("000 010 000", 3, 2)).unwrap();
        assert_eq!(lc_from_structure(&h, &md), 9);
        assert_eq!(
            extract_structure(&seq("110 100 100", 3, 2)).unwrap_err(),
            Error::NotAHypercube
        );
    }

    #[test]
    fn next_lower_values() {
        let md = Modulus::new(3, 2).unwrap();
        let el = |edges: Vec<u32>| HypercubeStructure { edges, vertex: Vertex::Element };
        assert_eq!(next_lower_hypercube_lc(&el(vec![1]), &md).unwrap(), NextLower { exponent: 0, lc: 1 });
        assert_eq!(next_lower_hypercube_lc(&el(vec![]), &md).unwrap(), NextLower { exponent: 0, lc: 7 });
        assert_eq!(next_lower_hypercube_lc(&el(vec![0, 1]), &md), Err(Error::NoEligibleExponent));
        let tuple = TupleVertex::new(blocks(&["1", "1", "0"]), 3).unwrap();
        let h = HypercubeStructure { edges: vec![], vertex: Vertex::Tuple(tuple) };
        assert_eq!(next_lower_hypercube_lc(&h, &md).unwrap(), NextLower { exponent: 1, lc: 2 });
        let tuple = TupleVertex::new(blocks(&["000", "100", "100"]), 3).unwrap();
        let h = HypercubeStructure { edges: vec![], vertex: Vertex::Tuple(tuple) };
        assert_eq!(next_lower_hypercube_lc(&h, &md), Err(Error::NoEligibleExponent));
    }

    #[test]
    fn tilde_examples() {
        let rw = tilde_rewrite(&blocks(&["110", "100", "100"])).unwrap();
        assert_eq!(rw.blocks, blocks(&["110", "000", "000"]));
        assert_eq!(rw.sources, vec![Some(0), Some(0), None]);
        let balanced = blocks(&["100", "010", "000"]);
        assert_eq!(tilde_rewrite(&balanced).unwrap().blocks, balanced);
        assert_eq!(tilde_rewrite(&blocks(&["1", "1", "1"])), Err(Error::BlocksEqual));
        assert_eq!(tilde_rewrite(&blocks(&["1", "1", "0"])), Err(Error::IsVertex));
        assert_eq!(tilde_rewrite(&blocks(&["1", "10", "0"])), Err(Error::MalformedBlocks));
    }

    #[test]
    fn tuple_validation() {
        assert!(TupleVertex::new(blocks(&["1", "1", "0"]), 3).is_ok());
        assert_eq!(TupleVertex::new(blocks(&["1", "0", "0"]), 3), Err(Error::NotTupleVertex));
        assert_eq!(TupleVertex::new(blocks(&["0", "0", "0"]), 3), Err(Error::NotTupleVertex));
        assert_eq!(TupleVertex::new(blocks(&["10", "10", "00"]), 3), Err(Error::MalformedBlocks));
    }
}
