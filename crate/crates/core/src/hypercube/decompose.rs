use std::fmt;

use serde::Serialize;

use super::{descend, lc_from_structure, structure_of, HypercubeStructure};
use crate::error::{Error, Result};
use crate::lincomp::linear_complexity;
use crate::sequence::PeriodicSequence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionPart {
    pub sequence: PeriodicSequence,
    pub structure: HypercubeStructure,
    pub lc: u64,
}

/// The standard hypercube decomposition `s = h_1 ⊕ h_2 ⊕ …`, ordered by
/// strictly decreasing linear complexity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub parts: Vec<DecompositionPart>,
}

impl Decomposition {
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn first(&self) -> &DecompositionPart {
        &self.parts[0]
    }

    /// XOR of all parts.
    pub fn recombine(&self) -> Option<PeriodicSequence> {
        let mut iter = self.parts.iter();
        let first = iter.next()?.sequence.clone();
        Some(iter.fold(first, |acc, part| acc.xor(&part.sequence).expect("parts share a modulus")))
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.parts.iter().enumerate() {
            let p = part.sequence.modulus().p() as usize;
            writeln!(f, "h{} {} {} L={}", i + 1, part.sequence.to_grouped(p), part.structure, part.lc)?;
        }
        Ok(())
    }
}

/// Peels hypercubes off `s`: each pass rewrites lossy sum steps so that the
/// surviving elements form a hypercube with the complexity of the current
/// residue, then continues on the residue.
pub fn standard_decompose(s: &PeriodicSequence) -> Result<Decomposition> {
    s.modulus().require_odd()?;
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let cap = s.len();
    let mut residue = s.clone();
    let mut parts: Vec<DecompositionPart> = Vec::new();
    while !residue.is_zero() {
        if parts.len() >= cap {
            return Err(Error::Internal(format!("decomposition of {s} did not terminate in {cap} passes")));
        }
        let descent = descend(&residue, true)?;
        let h = PeriodicSequence::from_bytes(*s.modulus(), &descent.rewritten)?;
        let structure = structure_of(&descent, &h);
        let lc = lc_from_structure(&structure, s.modulus());
        debug_assert_eq!(lc, linear_complexity(&residue));
        if let Some(prev) = parts.last() {
            if lc >= prev.lc {
                return Err(Error::Internal(format!("decomposition of {s}: complexity did not decrease")));
            }
        }
        residue = residue.xor(&h)?;
        parts.push(DecompositionPart { sequence: h, structure, lc });
    }
    Ok(Decomposition { parts })
}
