//! Verification suites: closed forms against oracles over exhaustive or
//! sampled input sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use seqcomplex::{
    berlekamp_massey_lc, construct_stable, first_critical_m, first_drop_bruteforce, is_hypercube,
    k_error_lc_bruteforce, kurosawa_m_2n, lc_form_decompose, linear_complexity, meidl_upper_bound,
    standard_decompose, xwli_lc, Error, Modulus, PeriodicSequence,
};

use crate::commands::{csv_table, envelope, evaluate_count, CountSpec};
use crate::{read_inputs, Common, Failure, Format, Suite};

/// Largest period swept exhaustively when no input is given.
const EXHAUSTIVE_PERIOD: usize = 20;

pub(crate) struct VerificationReport {
    suite: Suite,
    modulus: Modulus,
    verdict: &'static str,
    total: usize,
    agree: usize,
    counterexamples: Vec<String>,
}

impl VerificationReport {
    pub fn exit_code(&self) -> i32 {
        if self.counterexamples.is_empty() { crate::exit::OK } else { crate::exit::MISMATCH }
    }

    fn name(&self) -> &'static str {
        match self.suite {
            Suite::LcOracle => "lc-oracle",
            Suite::McritExhaustive => "mcrit-exhaustive",
            Suite::Counting => "counting",
            Suite::Decomposition => "decomposition",
            Suite::Bounds => "bounds",
            Suite::Stability => "stability",
        }
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => {
                let mut out = format!(
                    "suite {} p={} n={}: {}/{} {}\n",
                    self.name(),
                    self.modulus.p(),
                    self.modulus.n(),
                    self.agree,
                    self.total,
                    self.verdict
                );
                for c in &self.counterexamples {
                    out.push_str("  counterexample ");
                    out.push_str(c);
                    out.push('\n');
                }
                out
            }
            Format::Json => envelope(
                "verify",
                &self.modulus,
                json!({
                    "suite": self.name(),
                    "verdict": self.verdict,
                    "total": self.total,
                    "agree": self.agree,
                    "counterexamples": self.counterexamples,
                }),
            ),
            Format::Csv => csv_table(
                &["suite", "p", "n", "total", "agree", "counterexample"],
                std::iter::once(None).chain(self.counterexamples.iter().map(Some)).map(|c| {
                    vec![
                        self.name().to_string(),
                        self.modulus.p().to_string(),
                        self.modulus.n().to_string(),
                        self.total.to_string(),
                        self.agree.to_string(),
                        c.cloned().unwrap_or_default(),
                    ]
                }),
            ),
        }
    }
}

/// Sequences to check: the given input, every pattern of a small period, or
/// a seeded random sample.
fn population(common: &Common, modulus: Modulus, samples: usize, seed: u64, nonzero: bool) -> Result<Vec<PeriodicSequence>, Failure> {
    if common.input.seq.is_some() || common.input.file.is_some() {
        let records = read_inputs(&common.input, modulus)?;
        return Ok(records.into_iter().map(|r| r.sequence).filter(|s| !(nonzero && s.is_zero())).collect());
    }
    let period = modulus.period();
    if period <= EXHAUSTIVE_PERIOD {
        let start = u64::from(nonzero);
        return Ok((start..1u64 << period)
            .map(|x| PeriodicSequence::from_bits(modulus, (0..period).map(|i| (x >> i) & 1 == 1)).expect("period-length pattern"))
            .collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    while out.len() < samples {
        let s = PeriodicSequence::from_bits(modulus, (0..period).map(|_| rng.gen_bool(0.5))).expect("period-length pattern");
        if !(nonzero && s.is_zero()) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Runs `check` on every sequence; `None` means agreement.
fn sweep(
    items: &[PeriodicSequence],
    check: impl Fn(&PeriodicSequence) -> seqcomplex::Result<Option<String>> + Sync + Send,
) -> Result<(usize, Vec<String>), Failure> {
    let results: Vec<seqcomplex::Result<Option<String>>> = items.par_iter().map(&check).collect();
    let mut counterexamples = Vec::new();
    for r in results {
        if let Some(c) = r? {
            counterexamples.push(c);
        }
    }
    Ok((items.len(), counterexamples))
}

pub(crate) fn run(common: &Common, suite: Suite, samples: usize, seed: u64, cap: u64) -> Result<VerificationReport, Failure> {
    let modulus = common.modulus.modulus()?;
    let odd = !modulus.is_binary();
    let mut verdict = "agree";
    let (total, counterexamples) = match suite {
        Suite::LcOracle => {
            let items = population(common, modulus, samples, seed, false)?;
            sweep(&items, |s| {
                let oracle = berlekamp_massey_lc(s);
                let fast = linear_complexity(s);
                let traced = if odd { Some(xwli_lc(s)?.1.total()) } else { None };
                Ok((fast != oracle || traced.is_some_and(|t| t != oracle))
                    .then(|| format!("{s}: engine L={fast} trace={} Berlekamp-Massey L={oracle}", traced.map_or("-".into(), |t| t.to_string()))))
            })?
        }
        Suite::McritExhaustive => {
            let items = population(common, modulus, samples, seed, true)?;
            sweep(&items, |s| {
                let formula = if odd { first_critical_m(s)?.m } else { kurosawa_m_2n(s)? };
                let brute = first_drop_bruteforce(s, cap)?.k;
                Ok((formula != brute).then(|| format!("{s}: L={} formula m={formula} brute-force m={brute}", linear_complexity(s))))
            })?
        }
        Suite::Bounds => {
            let items = population(common, modulus, samples, seed, true)?;
            if odd {
                verdict = "satisfy m(s) <= Meidl bound";
                sweep(&items, |s| {
                    let brute = first_drop_bruteforce(s, cap)?.k;
                    let bound = meidl_upper_bound(s)?;
                    Ok((brute > bound).then(|| format!("{s}: m={brute} Meidl bound={bound}")))
                })?
            } else {
                verdict = "match Kurosawa's m(s)";
                sweep(&items, |s| {
                    let brute = first_drop_bruteforce(s, cap)?.k;
                    let formula = kurosawa_m_2n(s)?;
                    Ok((brute != formula).then(|| format!("{s}: brute-force m={brute} Kurosawa m={formula}")))
                })?
            }
        }
        Suite::Decomposition => {
            if !odd {
                return Err(Error::EvenModulus.into());
            }
            let items = population(common, modulus, samples, seed, true)?;
            sweep(&items, |s| {
                let d = standard_decompose(s)?;
                let mut problems = Vec::new();
                if d.recombine().as_ref() != Some(s) {
                    problems.push("parts do not recombine".to_string());
                }
                let oracle = berlekamp_massey_lc(s);
                if d.first().lc != oracle {
                    problems.push(format!("L(h1)={} but L(s)={oracle}", d.first().lc));
                }
                if d.parts.windows(2).any(|w| w[0].lc <= w[1].lc) {
                    problems.push("complexities not strictly decreasing".into());
                }
                for part in &d.parts {
                    if !is_hypercube(&part.sequence)? || berlekamp_massey_lc(&part.sequence) != part.lc {
                        problems.push(format!("part {} is not a hypercube with L={}", part.sequence, part.lc));
                    }
                }
                Ok((!problems.is_empty()).then(|| format!("{s}: {}", problems.join("; "))))
            })?
        }
        Suite::Counting => counting(&modulus, cap)?,
        Suite::Stability => stability(&modulus, cap)?,
    };
    Ok(VerificationReport { suite, modulus, verdict, total, agree: total - counterexamples.len(), counterexamples })
}

fn subsets(n: u32, min: u32) -> Vec<Vec<u32>> {
    let items: Vec<u32> = (min..n).collect();
    (0u32..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| (mask >> i) & 1 == 1).map(|(_, &e)| e).collect())
        .collect()
}

/// Every feasible parameter set, formula against enumeration.
fn counting(modulus: &Modulus, cap: u64) -> Result<(usize, Vec<String>), Failure> {
    let mut specs = Vec::new();
    for edges in subsets(modulus.n(), 0) {
        specs.push(CountSpec { lc: None, edges, eps: 1, l: None });
    }
    if !modulus.is_binary() {
        let p = modulus.p() as usize;
        for l in (2..p).step_by(2) {
            for edges in subsets(modulus.n(), 1) {
                specs.push(CountSpec { lc: None, edges, eps: 0, l: Some(l) });
            }
        }
        let exhaustive = modulus.period() < 64 && (1u128 << modulus.period()) <= cap as u128;
        if exhaustive {
            for lc in 0..=modulus.period() as u64 {
                if lc_form_decompose(lc, modulus).is_ok() {
                    specs.push(CountSpec { lc: Some(lc), edges: Vec::new(), eps: 1, l: None });
                }
            }
        }
    }
    let mut counterexamples = Vec::new();
    for spec in &specs {
        let (result, enumerated) = evaluate_count(modulus, spec, true, cap)?;
        let enumerated = enumerated.expect("enumeration requested");
        if enumerated != result.value {
            let what = match spec.lc {
                Some(lc) => format!("L={lc}"),
                None => format!("edges={:?} eps={} l={:?}", spec.edges, spec.eps, spec.l),
            };
            counterexamples.push(format!("{what}: formula {} enumerated {enumerated}", result.value));
        }
    }
    Ok((specs.len(), counterexamples))
}

/// For every `k < p^(n-1)`, the constructed sequence keeps its complexity through `k`
/// errors and nothing beats it when the whole space is small enough to sweep.
fn stability(modulus: &Modulus, cap: u64) -> Result<(usize, Vec<String>), Failure> {
    let period = modulus.period();
    let everything: Vec<PeriodicSequence> = if period <= 16 {
        (0u64..1 << period)
            .map(|x| PeriodicSequence::from_bits(*modulus, (0..period).map(|i| (x >> i) & 1 == 1)).expect("period-length pattern"))
            .collect()
    } else {
        Vec::new()
    };
    // k >= p^(n-1) needs the all-ones period, whose L = 1 is not maximal
    let ks: Vec<u64> = (0..(period / modulus.p() as usize) as u64).collect();
    let results: Vec<seqcomplex::Result<Option<String>>> = ks
        .par_iter()
        .map(|&k| {
            let s = construct_stable(*modulus, k)?;
            let ones = s.weight() as u64;
            let want = period as u64 - (ones - 1);
            let lc = berlekamp_massey_lc(&s);
            let lk = k_error_lc_bruteforce(&s, k as usize, cap)?;
            let mut problems = Vec::new();
            if lc != want || lk != lc {
                problems.push(format!("L={lc} L_k={lk}, want {want}"));
            }
            for t in &everything {
                let other = k_error_lc_bruteforce(t, k as usize, cap)?;
                if other > lk {
                    problems.push(format!("{t} has L_k={other}"));
                    break;
                }
            }
            Ok((!problems.is_empty()).then(|| format!("k={k} {s}: {}", problems.join("; "))))
        })
        .collect();
    let mut counterexamples = Vec::new();
    for r in results {
        if let Some(c) = r? {
            counterexamples.push(c);
        }
    }
    Ok((ks.len(), counterexamples))
}
