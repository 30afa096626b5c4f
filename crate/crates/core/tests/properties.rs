mod common;

use proptest::prelude::*;

use common::{from_index, oracle_lc, oracle_seq_lc, vertex_min_change_exhaustive, Table};
use seqcomplex::*;

fn md(p: u64, n: u32) -> Modulus {
    Modulus::new(p, n).unwrap()
}

fn arb_sequence(p: u64, n: u32) -> impl Strategy<Value = PeriodicSequence> {
    let modulus = md(p, n);
    proptest::collection::vec(any::<bool>(), modulus.period())
        .prop_map(move |bits| PeriodicSequence::from_bits(modulus, bits).unwrap())
}

fn arb_nonzero(p: u64, n: u32) -> impl Strategy<Value = PeriodicSequence> {
    arb_sequence(p, n).prop_filter("nonzero", |s| !s.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn xor_laws(a in arb_sequence(3, 3), b in arb_sequence(3, 3), c in arb_sequence(3, 3)) {
        prop_assert_eq!(a.xor(&b).unwrap(), b.xor(&a).unwrap());
        prop_assert_eq!(a.xor(&b).unwrap().xor(&c).unwrap(), a.xor(&b.xor(&c).unwrap()).unwrap());
        prop_assert!(a.xor(&a).unwrap().is_zero());
        prop_assert_eq!(a.distance(&b).unwrap(), a.xor(&b).unwrap().weight());
    }

    #[test]
    fn engines_match_oracle(s27 in arb_sequence(3, 3), s25 in arb_sequence(5, 2), s81 in arb_sequence(3, 4), s121 in arb_sequence(11, 2)) {
        for s in [&s27, &s25, &s81, &s121] {
            let (form, trace) = xwli_lc(s).unwrap();
            let oracle = oracle_seq_lc(s);
            prop_assert_eq!(form.value, oracle);
            prop_assert_eq!(trace.total(), oracle);
            prop_assert_eq!(LcForm::reconstruct(form.epsilon, &form.exponents, s.modulus()), oracle);
            prop_assert_eq!(berlekamp_massey_lc(s), oracle);
        }
    }

    #[test]
    fn games_chan_matches_oracle(s32 in arb_sequence(2, 5), s64 in arb_sequence(2, 6)) {
        prop_assert_eq!(games_chan_lc(&s32).unwrap(), oracle_seq_lc(&s32));
        prop_assert_eq!(games_chan_lc(&s64).unwrap(), oracle_seq_lc(&s64));
    }

    #[test]
    fn decomposition_invariants(s in arb_nonzero(3, 4)) {
        let d = standard_decompose(&s).unwrap();
        prop_assert_eq!(d.recombine().unwrap(), s.clone());
        prop_assert_eq!(d.first().lc, oracle_seq_lc(&s));
        for w in d.parts.windows(2) {
            prop_assert!(w[0].lc > w[1].lc);
        }
        for part in &d.parts {
            prop_assert!(is_hypercube(&part.sequence).unwrap());
            prop_assert_eq!(&extract_structure(&part.sequence).unwrap(), &part.structure);
            prop_assert_eq!(oracle_seq_lc(&part.sequence), part.lc);
        }
        let h1 = &d.first().sequence;
        prop_assert!(h1.support().iter().all(|&i| s.get(i)));
    }

    #[test]
    fn hypercube_weight_identity(s in arb_nonzero(5, 2)) {
        if is_hypercube(&s).unwrap() {
            let h = extract_structure(&s).unwrap();
            prop_assert_eq!(s.weight() as u64, h.vertex.weight() as u64 * h.vertex_count(s.modulus()));
            prop_assert_eq!(lc_from_structure(&h, s.modulus()), oracle_seq_lc(&s));
        }
    }

    #[test]
    fn k_error_monotone(s in arb_nonzero(3, 3)) {
        let l0 = k_error_lc_bruteforce(&s, 0, DEFAULT_CAP).unwrap();
        let l1 = k_error_lc_bruteforce(&s, 1, DEFAULT_CAP).unwrap();
        let l2 = k_error_lc_bruteforce(&s, 2, DEFAULT_CAP).unwrap();
        prop_assert_eq!(l0, oracle_seq_lc(&s));
        prop_assert!(l0 >= l1 && l1 >= l2);
    }

    #[test]
    fn meidl_dominates(s in arb_nonzero(3, 3)) {
        let m = first_critical_m(&s).unwrap().m;
        prop_assert!(m <= meidl_upper_bound(&s).unwrap());
    }

    #[test]
    fn cube_lc_matches_games_chan(s in arb_nonzero(2, 4)) {
        if let Ok(cube) = cube_lc_2n(&s) {
            prop_assert_eq!(cube.lc, games_chan_lc(&s).unwrap());
            prop_assert_eq!(s.weight(), 1 << cube.dimension());
        }
    }
}

#[test]
fn games_chan_exhaustive_small() {
    for n in 1..=4 {
        let modulus = md(2, n);
        for x in 0u64..1 << modulus.period() {
            let s = from_index(x, modulus);
            assert_eq!(games_chan_lc(&s).unwrap(), oracle_seq_lc(&s), "{s}");
        }
    }
}

#[test]
fn sum_of_unequal_complexities_is_the_max_at_n8() {
    let table = Table::new(md(2, 3));
    for a in 0..table.size() {
        for b in 0..table.size() {
            let (la, lb) = (table.lc[a as usize], table.lc[b as usize]);
            if la != lb {
                assert_eq!(table.lc[(a ^ b) as usize], la.max(lb), "{a:08b} {b:08b}");
            }
        }
    }
}

#[test]
fn closed_forms_match_bruteforce_on_every_hypercube_at_n9() {
    let modulus = md(3, 2);
    let table = Table::new(modulus);
    let mut hypercubes = 0;
    for x in 1..table.size() {
        let s = from_index(x, modulus);
        if !is_hypercube(&s).unwrap() {
            continue;
        }
        hypercubes += 1;
        let formula = first_critical_m(&s).unwrap();
        let brute = first_critical_bruteforce(&s, DEFAULT_CAP).unwrap();
        assert_eq!(formula.m, table.first_drop(x) as u64, "{s}");
        assert_eq!((formula.m, formula.lc_after, formula.m1), (brute.m, brute.lc_after, brute.m1), "{s}");
        assert_eq!(celcs(&s, Method::Formula, DEFAULT_CAP).unwrap(), celcs(&s, Method::BruteForce, DEFAULT_CAP).unwrap(), "{s}");
    }
    assert_eq!(hypercubes, 133);
}

#[test]
fn celcs_brute_force_matches_table_at_n9() {
    let modulus = md(3, 2);
    let table = Table::new(modulus);
    for x in (1..table.size()).step_by(7) {
        let s = from_index(x, modulus);
        let points = celcs(&s, Method::BruteForce, DEFAULT_CAP).unwrap();
        let mut expected = Vec::new();
        for k in 0..=s.weight() as u32 {
            let lk = table.k_error(x, k);
            if expected.last().is_none_or(|p: &CelcsPoint| lk < p.lc) {
                expected.push(CelcsPoint::new(k as u64, lk));
            }
        }
        assert_eq!(points, expected, "{s}");
        assert_eq!(points.last().unwrap().lc, 0);
    }
}

#[test]
fn next_lower_is_not_a_global_gap() {
    // the next lower value via one more edge is 1, yet a hypercube with L = 3 exists
    let modulus = md(3, 2);
    let h = HypercubeStructure { edges: vec![0], vertex: Vertex::Element };
    assert_eq!(lc_from_structure(&h, &modulus), 7);
    assert_eq!(next_lower_hypercube_lc(&h, &modulus).unwrap().lc, 1);
    let s = PeriodicSequence::parse("100100100", modulus).unwrap();
    assert!(is_hypercube(&s).unwrap());
    assert_eq!(oracle_seq_lc(&s), 3);
}

#[test]
fn vertex_change_matches_exhaustive_on_all_small_tuples() {
    for (p, block) in [(3usize, 3usize), (5, 5)] {
        let even_rows: Vec<u32> = (0u32..1 << p).filter(|m| m.count_ones() % 2 == 0).collect();
        let total = even_rows.len().pow(block as u32);
        for code in 1..total {
            let mut blocks = vec![vec![0u8; block]; p];
            let mut c = code;
            for r in 0..block {
                let row = even_rows[c % even_rows.len()];
                c /= even_rows.len();
                for (b, blk) in blocks.iter_mut().enumerate() {
                    blk[r] = ((row >> b) & 1) as u8;
                }
            }
            let v = Vertex::Tuple(TupleVertex::new(blocks.clone(), p as u64).unwrap());
            assert_eq!(vertex_min_change(&v).unwrap(), vertex_min_change_exhaustive(&blocks), "{blocks:?}");
        }
    }
}

#[test]
fn stable_sequences_keep_their_complexity() {
    let modulus = md(3, 2);
    let table = Table::new(modulus);
    for k in 0..9u64 {
        let s = construct_stable(modulus, k).unwrap();
        let x = s.iter().enumerate().fold(0u64, |acc, (i, b)| acc | (u64::from(b) << i));
        let ones = s.weight() as u64;
        assert_eq!(table.lc[x as usize], 9 - (ones - 1));
        for e in 0..ones as u32 {
            assert_eq!(table.k_error(x, e), table.lc[x as usize], "k={k} e={e}");
        }
        assert!(table.k_error(x, ones as u32) < table.lc[x as usize]);
    }
}

#[test]
fn lc_oracle_is_sane() {
    assert_eq!(oracle_lc(&[1, 0, 0]), 3);
    assert_eq!(oracle_lc(&[1, 1, 1]), 1);
    assert_eq!(oracle_lc(&[0, 0, 0]), 0);
}
