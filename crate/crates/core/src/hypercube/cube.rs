//! Cubes for period `2^n`: `2^m` nonzero elements built from two
//! `(m-1)`-cubes whose paired elements are all at distance `2^{i_m}`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::PeriodicSequence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cube {
    /// Edge exponents, ascending.
    pub edges: Vec<u32>,
    pub lc: u64,
}

impl Cube {
    pub fn dimension(&self) -> u32 {
        self.edges.len() as u32
    }
}

/// Edge exponents of the cube formed by `s`, or `None` if the support is not a cube.
pub fn cube_structure(s: &PeriodicSequence) -> Result<Option<Vec<u32>>> {
    s.modulus().require_binary()?;
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let support: Vec<u64> = s.support().into_iter().map(|x| x as u64).collect();
    Ok(cube_edges(&support, s.modulus().n()))
}

/// Recognizes the cube and returns `L = 2^n - (2^{i_1} + … + 2^{i_m})`.
pub fn cube_lc_2n(s: &PeriodicSequence) -> Result<Cube> {
    let edges = cube_structure(s)?.ok_or(Error::NotACube)?;
    let lc = s.modulus().period() as u64 - edges.iter().map(|&e| 1u64 << e).sum::<u64>();
    Ok(Cube { edges, lc })
}

fn two_adic(d: u64) -> u32 {
    d.trailing_zeros()
}

/// `bound` is an exclusive upper limit on the edge exponents.
fn cube_edges(points: &[u64], bound: u32) -> Option<Vec<u32>> {
    if points.len() == 1 {
        return Some(Vec::new());
    }
    if !points.len().is_power_of_two() {
        return None;
    }
    let top = points
        .iter()
        .enumerate()
        .flat_map(|(i, &a)| points[i + 1..].iter().map(move |&b| two_adic(a.abs_diff(b))))
        .max()?;
    if top >= bound {
        return None;
    }
    // every element needs exactly one partner at the top distance
    for &a in points {
        let partners = points.iter().filter(|&&b| b != a && two_adic(a.abs_diff(b)) == top).count();
        if partners != 1 {
            return None;
        }
    }
    let (low, high): (Vec<u64>, Vec<u64>) = points.iter().partition(|&&x| (x >> top) & 1 == 0);
    if low.len() != high.len() {
        return None;
    }
    let edges = cube_edges(&low, top)?;
    if cube_edges(&high, top)? != edges {
        return None;
    }
    let mut edges = edges;
    edges.push(top);
    Some(edges)
}
