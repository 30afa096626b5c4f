//! k-error linear complexity.
//!
//! `L_k(s)` is the smallest linear complexity reachable by flipping at most
//! `k` entries of one period. Critical points of the spectrum come either
//! from the hypercube closed forms or from an exhaustive sweep.

mod brute;

pub use brute::{Budget, DEFAULT_CAP};

use serde::Serialize;

use crate::arith::{binomial, digit_weight};
use crate::error::{Error, Result};
use crate::hypercube::{descend, lc_from_structure, standard_decompose, structure_of, HypercubeStructure, Terminal, TupleVertex, Vertex};
use crate::lincomp::{lc_form_decompose, linear_complexity};
use crate::sequence::{Modulus, PeriodicSequence};
use brute::Sweep;

/// A point `(k, L_k(s))` of the critical error linear complexity spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CelcsPoint {
    pub k: u64,
    #[serde(rename = "L")]
    pub lc: u64,
}

impl CelcsPoint {
    pub fn new(k: u64, lc: u64) -> Self {
        Self { k, lc }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Formula,
    BruteForce,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalReport {
    /// First critical point `m(s)`.
    #[serde(rename = "m_s")]
    pub m: u64,
    /// `L_{m(s)}(s)`, when known.
    #[serde(rename = "L_after")]
    pub lc_after: Option<u64>,
    /// Second critical point `m_1(s)`, when known and present.
    #[serde(rename = "m1_s")]
    pub m1: Option<u64>,
    pub method: Method,
    /// Minimal flip count `j` for a tuple vertex of nonzero length.
    pub vertex_j: Option<u64>,
}

/// `L_k(s)` by exhaustive search over all patterns of weight at most `k`.
pub fn k_error_lc_bruteforce(s: &PeriodicSequence, k: usize, cap: u64) -> Result<u64> {
    if k > s.len() {
        return Err(Error::KOutOfRange { k, period: s.len() });
    }
    if k >= s.weight() {
        return Ok(0);
    }
    let n = s.len() as u64;
    let required: u128 = (0..=k as u64).map(|i| binomial(n, i)).fold(0u128, u128::saturating_add);
    if required > cap as u128 {
        return Err(Error::BudgetExceeded { required, cap });
    }
    let sweep = Sweep::new(s);
    let mut budget = Budget::new(cap);
    let mut best = u64::MAX;
    for w in 0..=k {
        best = best.min(sweep.min_at(w, &mut budget)?);
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// `L_0(s), L_1(s), …` up to the first zero, which occurs by `k = W_H(s)`.
pub fn k_error_profile(s: &PeriodicSequence, cap: u64) -> Result<Vec<u64>> {
    let weight = s.weight();
    let sweep = Sweep::new(s);
    let mut budget = Budget::new(cap);
    let mut profile = Vec::with_capacity(weight + 1);
    let mut best = u64::MAX;
    for w in 0..weight {
        best = best.min(sweep.min_at(w, &mut budget)?);
        profile.push(best);
        if best == 0 {
            return Ok(profile);
        }
    }
    profile.push(0);
    debug_assert!(profile.windows(2).all(|w| w[0] >= w[1]));
    Ok(profile)
}

/// Critical points of the spectrum, ascending in `k`.
///
/// Formula mode needs a hypercube (odd `p`) and emits the points the closed
/// forms determine; brute force computes the full profile under `cap`.
pub fn celcs(s: &PeriodicSequence, method: Method, cap: u64) -> Result<Vec<CelcsPoint>> {
    if s.is_zero() {
        return Ok(vec![CelcsPoint::new(0, 0)]);
    }
    match method {
        Method::BruteForce => {
            let profile = k_error_profile(s, cap)?;
            let mut points: Vec<CelcsPoint> = Vec::new();
            for (k, &lc) in profile.iter().enumerate() {
                if points.last().is_none_or(|last| lc < last.lc) {
                    points.push(CelcsPoint::new(k as u64, lc));
                }
            }
            Ok(points)
        }
        Method::Formula => {
            s.modulus().require_odd()?;
            let profile = match HypercubeProfile::of(s) {
                Ok(profile) => profile,
                Err(Error::NotAHypercube) => return Err(Error::FormulaInapplicable),
                Err(e) => return Err(e),
            };
            let mut points = vec![CelcsPoint::new(0, profile.lc), CelcsPoint::new(profile.m, profile.lc_after)];
            if let Some(m1) = profile.m1 {
                points.push(CelcsPoint::new(m1, 0));
            }
            Ok(points)
        }
    }
}

/// Closed-form critical data of a hypercube.
struct HypercubeProfile {
    lc: u64,
    m: u64,
    lc_after: u64,
    m1: Option<u64>,
    j: Option<u64>,
}

impl HypercubeProfile {
    fn of(s: &PeriodicSequence) -> Result<Self> {
        let descent = descend(s, false)?;
        let structure = structure_of(&descent, s);
        let modulus = s.modulus();
        let lc = lc_from_structure(&structure, modulus);
        let (m, m1, j) = critical_points(&structure, modulus)?;
        let lc_after = match (&descent.terminal, m1) {
            (Terminal::Tuple { vertex, sources }, Some(_)) => {
                let target = match vertex.length() {
                    0 => vec![1u8],
                    _ => vertex_target(vertex).1,
                };
                let mut witness = s.clone();
                for (block, rows) in vertex.blocks().iter().zip(sources) {
                    for (r, positions) in rows.iter().enumerate() {
                        if block[r] != target[r] {
                            positions.iter().for_each(|&pos| witness.flip(pos));
                        }
                    }
                }
                debug_assert_eq!(s.distance(&witness)? as u64, m);
                linear_complexity(&witness)
            }
            _ => 0,
        };
        Ok(Self { lc, m, lc_after, m1, j })
    }
}

/// `(m(s), m_1(s), j)` of a hypercube from its vertex and dimension.
fn critical_points(h: &HypercubeStructure, modulus: &Modulus) -> Result<(u64, Option<u64>, Option<u64>)> {
    let copies = h.vertex_count(modulus);
    let p = modulus.p();
    match &h.vertex {
        Vertex::Element => Ok((copies, None, None)),
        Vertex::Tuple(t) => {
            let l = t.weight() as u64;
            let (removal, change, j) = if t.length() == 0 { (l, p - l, None) } else {
                let j = vertex_min_change(&h.vertex)?;
                (l, j, Some(j))
            };
            if removal <= change {
                Ok((removal * copies, None, j))
            } else {
                Ok((change * copies, Some(removal * copies), j))
            }
        }
    }
}

/// `m(s)` from the first hypercube of the standard decomposition.
///
/// For a hypercube the report also carries `L_{m(s)}(s)` and `m_1(s)`.
pub fn first_critical_m(s: &PeriodicSequence) -> Result<CriticalReport> {
    s.modulus().require_odd()?;
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let decomposition = standard_decompose(s)?;
    if decomposition.len() == 1 {
        let profile = HypercubeProfile::of(s)?;
        return Ok(CriticalReport {
            m: profile.m,
            lc_after: Some(profile.lc_after),
            m1: profile.m1,
            method: Method::Formula,
            vertex_j: profile.j,
        });
    }
    let (m, _, j) = critical_points(&decomposition.first().structure, s.modulus())?;
    Ok(CriticalReport { m, lc_after: None, m1: None, method: Method::Formula, vertex_j: j })
}

fn first_drop(s: &PeriodicSequence, sweep: &Sweep<'_>, budget: &mut Budget) -> Result<(usize, u64)> {
    let lc = linear_complexity(s);
    let m = sweep
        .first_weight_below(0, s.weight(), lc, budget)?
        .ok_or_else(|| Error::Internal(format!("no drop found for {s}")))?;
    Ok((m, sweep.min_at(m, budget)?))
}

/// The first critical point `(m(s), L_{m(s)}(s))` by exhaustive search.
pub fn first_drop_bruteforce(s: &PeriodicSequence, cap: u64) -> Result<CelcsPoint> {
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let sweep = Sweep::new(s);
    let (m, lc) = first_drop(s, &sweep, &mut Budget::new(cap))?;
    Ok(CelcsPoint::new(m as u64, lc))
}

/// `m(s)`, `L_{m(s)}(s)` and `m_1(s)` by exhaustive search.
pub fn first_critical_bruteforce(s: &PeriodicSequence, cap: u64) -> Result<CriticalReport> {
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let sweep = Sweep::new(s);
    let mut budget = Budget::new(cap);
    let weight = s.weight();
    let (m, lc_after) = first_drop(s, &sweep, &mut budget)?;
    let m1 = match lc_after {
        0 => None,
        _ => sweep.first_weight_below(m, weight, lc_after, &mut budget)?,
    };
    Ok(CriticalReport {
        m: m as u64,
        lc_after: Some(lc_after),
        m1: m1.map(|w| w as u64),
        method: Method::BruteForce,
        vertex_j: None,
    })
}

/// `m_1(s)`: closed form for hypercubes, exhaustive search otherwise.
pub fn second_critical_m1(s: &PeriodicSequence, cap: u64) -> Result<Option<u64>> {
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    if !s.modulus().is_binary() {
        match HypercubeProfile::of(s) {
            Ok(profile) => return Ok(profile.m1),
            Err(Error::NotAHypercube) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(first_critical_bruteforce(s, cap)?.m1)
}

/// Fewest flips turning the vertex blocks into `p` equal nonzero blocks.
pub fn vertex_min_change(v: &Vertex) -> Result<u64> {
    match v {
        Vertex::Element => Err(Error::NotTupleVertex),
        Vertex::Tuple(t) if t.length() == 0 => Err(Error::ZeroLengthVertex),
        Vertex::Tuple(t) => Ok(vertex_target(t).0),
    }
}

/// Flip count and common target block. Each row goes to whichever of
/// all-ones or all-zeros is closer; if every row chose zeros, the fullest
/// row is filled instead.
fn vertex_target(t: &TupleVertex) -> (u64, Vec<u8>) {
    let p = t.blocks().len() as u64;
    let counts: Vec<u64> = t.rows().map(|row| row.iter().map(|&x| x as u64).sum()).collect();
    let mut target: Vec<u8> = counts.iter().map(|&c| u8::from(2 * c > p)).collect();
    if target.iter().all(|&x| x == 0) {
        let fullest = (0..counts.len()).max_by_key(|&r| (counts[r], std::cmp::Reverse(r))).unwrap_or(0);
        target[fullest] = 1;
    }
    let flips = counts.iter().zip(&target).map(|(&c, &x)| if x == 1 { p - c } else { c }).sum();
    (flips, target)
}

/// `2^{W(2^n - L(s))}` for period `2^n`.
pub fn kurosawa_m_2n(s: &PeriodicSequence) -> Result<u64> {
    s.modulus().require_binary()?;
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let gap = s.len() as u64 - linear_complexity(s);
    Ok(1u64 << gap.count_ones())
}

/// `((p-1)/2)^δ · p^{W}` with `δ = (ε+1) mod 2` and `W` the number of nonzero
/// base-`p` digits of `p^n - L(s)`, both read off the complexity form.
pub fn meidl_upper_bound(s: &PeriodicSequence) -> Result<u64> {
    s.modulus().require_odd()?;
    if s.is_zero() {
        return Err(Error::ZeroSequence);
    }
    let modulus = s.modulus();
    let form = lc_form_decompose(linear_complexity(s), modulus)?;
    let delta = (form.epsilon + 1) % 2;
    let missing = modulus.n() - form.exponents.len() as u32;
    let half = (modulus.p() - 1) / 2;
    Ok(half.pow(delta as u32) * modulus.power(missing))
}

/// Base-`p` digit weight of `p^n - L`, the literal exponent of the bound.
pub fn complement_digit_weight(lc: u64, modulus: &Modulus) -> u32 {
    digit_weight(modulus.period() as u64 - lc, modulus.p())
}

/// `p^l` leading ones for the smallest `l` with `k < p^l`; its `k`-error
/// complexity `p^n - (p^l - 1)` is the largest possible.
pub fn construct_stable(modulus: Modulus, k: u64) -> Result<PeriodicSequence> {
    let period = modulus.period() as u64;
    if k >= period {
        return Err(Error::KOutOfRange { k: k as usize, period: period as usize });
    }
    let l = (0..=modulus.n()).find(|&l| k < modulus.power(l)).unwrap_or(modulus.n());
    let ones = modulus.power(l) as usize;
    PeriodicSequence::from_bits(modulus, (0..period as usize).map(|i| i < ones))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(t: &str, p: u64, n: u32) -> PeriodicSequence {
        PeriodicSequence::parse(t, Modulus::new(p, n).unwrap()).unwrap()
    }

    fn tuple(ts: &[&str]) -> Vertex {
        let blocks = ts.iter().map(|t| t.bytes().map(|b| b - b'0').collect()).collect();
        Vertex::Tuple(TupleVertex::new(blocks, ts.len() as u64).unwrap())
    }

    #[test]
    fn first_critical_examples() {
        let a = seq("110 000 000 110 000 000 110 000 000", 3, 3);
        let r = first_critical_m(&a).unwrap();
        assert_eq!((r.m, r.m1), (3, Some(6)));
        assert_eq!(first_critical_m(&seq(&"11110".repeat(5), 5, 2)).unwrap().m, 5);
        let b = seq("000 100 100 000 100 100 000 100 100", 3, 3);
        let r = first_critical_m(&b).unwrap();
        assert_eq!((r.m, r.vertex_j), (3, Some(1)));
        let c = seq("110 000 000 111 000 000 111 000 000", 3, 3);
        assert_eq!(first_critical_m(&c).unwrap().m, 1);
        assert_eq!(first_critical_m(&seq("000 010 000", 3, 2)).unwrap().m, 1);
    }

    #[test]
    fn bruteforce_matches_examples() {
        let a = seq("110 000 000 110 000 000 110 000 000", 3, 3);
        let r = first_critical_bruteforce(&a, DEFAULT_CAP).unwrap();
        assert_eq!((r.m, r.m1), (3, Some(6)));
        assert_eq!(r.lc_after, first_critical_m(&a).unwrap().lc_after);
        let c = seq("110 000 000 111 000 000 111 000 000", 3, 3);
        let r = first_critical_bruteforce(&c, DEFAULT_CAP).unwrap();
        assert_eq!((r.m, r.m1), (1, Some(8)));
        assert_eq!(second_critical_m1(&c, DEFAULT_CAP).unwrap(), Some(8));
    }

    #[test]
    fn k_error_basics() {
        let s = seq("110 000 000 110 000 000 110 000 000", 3, 3);
        assert_eq!(k_error_lc_bruteforce(&s, 0, DEFAULT_CAP).unwrap(), 8);
        assert_eq!(k_error_lc_bruteforce(&s, 2, DEFAULT_CAP).unwrap(), 8);
        assert!(k_error_lc_bruteforce(&s, 3, DEFAULT_CAP).unwrap() < 8);
        assert_eq!(k_error_lc_bruteforce(&s, 6, DEFAULT_CAP).unwrap(), 0);
        assert!(matches!(k_error_lc_bruteforce(&s, 5, 1000), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(k_error_lc_bruteforce(&s, 28, DEFAULT_CAP), Err(Error::KOutOfRange { .. })));
    }

    #[test]
    fn celcs_modes() {
        let md = Modulus::new(3, 2).unwrap();
        assert_eq!(celcs(&PeriodicSequence::zero(md), Method::BruteForce, 10).unwrap(), vec![CelcsPoint::new(0, 0)]);
        let s = seq("111 000 000", 3, 2);
        let brute = celcs(&s, Method::BruteForce, DEFAULT_CAP).unwrap();
        assert_eq!(brute[0], CelcsPoint::new(0, 7));
        assert_eq!(brute[1].k, 3);
        assert_eq!(brute, celcs(&s, Method::Formula, DEFAULT_CAP).unwrap());
        let t = seq("110 100 100", 3, 2);
        assert_eq!(celcs(&t, Method::Formula, DEFAULT_CAP), Err(Error::FormulaInapplicable));
        let a = seq("110 000 000 110 000 000 110 000 000", 3, 3);
        let f = celcs(&a, Method::Formula, DEFAULT_CAP).unwrap();
        assert_eq!(f.iter().map(|p| p.k).collect::<Vec<_>>(), vec![0, 3, 6]);
    }

    #[test]
    fn vertex_changes() {
        assert_eq!(vertex_min_change(&tuple(&["000", "100", "100"])).unwrap(), 1);
        assert_eq!(vertex_min_change(&tuple(&["110", "100", "010"])).unwrap(), 2);
        assert_eq!(vertex_min_change(&Vertex::Element), Err(Error::NotTupleVertex));
        assert_eq!(vertex_min_change(&tuple(&["1", "1", "0"])), Err(Error::ZeroLengthVertex));
    }

    #[test]
    fn bounds() {
        assert_eq!(meidl_upper_bound(&seq(&"11110".repeat(5), 5, 2)).unwrap(), 10);
        assert_eq!(meidl_upper_bound(&seq("000 100 100 000 100 100 000 100 100", 3, 3)).unwrap(), 9);
        assert_eq!(complement_digit_weight(4, &Modulus::new(5, 2).unwrap()), 2);
        assert_eq!(kurosawa_m_2n(&seq("1100", 2, 2)).unwrap(), 2);
        assert_eq!(kurosawa_m_2n(&seq("1000", 2, 2)).unwrap(), 1);
        assert_eq!(kurosawa_m_2n(&seq("1010", 2, 2)).unwrap(), 2);
        assert_eq!(kurosawa_m_2n(&seq("100", 3, 1)), Err(Error::OddModulus));
    }

    #[test]
    fn stable_sequences() {
        let md = Modulus::new(3, 2).unwrap();
        let s = construct_stable(md, 2).unwrap();
        assert_eq!(s.to_string(), "111000000");
        assert_eq!(linear_complexity(&s), 7);
        assert_eq!(construct_stable(md, 0).unwrap().to_string(), "100000000");
        assert_eq!(construct_stable(md, 3).unwrap().weight(), 9);
        assert!(matches!(construct_stable(md, 9), Err(Error::KOutOfRange { .. })));
    }
}
