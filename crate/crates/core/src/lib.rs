//! Linear complexity, k-error linear complexity and hypercube structure of
//! binary sequences with period `p^n`, where `p` is 2 or an odd prime with 2
//! a primitive root modulo `p^2`.
//!
//! ```
//! use seqcomplex::{linear_complexity, first_critical_m, Modulus, PeriodicSequence};
//!
//! let md = Modulus::new(3, 3).unwrap();
//! let s = PeriodicSequence::parse("110 000 000 110 000 000 110 000 000", md).unwrap();
//! assert_eq!(linear_complexity(&s), 8);
//! assert_eq!(first_critical_m(&s).unwrap().m, 3);
//! ```

pub mod arith;
pub mod counting;
mod error;
pub mod hypercube;
pub mod kerror;
pub mod lincomp;
pub mod sequence;

pub use counting::{
    count_cubes_prop42, count_hypercubes_thm43, count_lc_lemma21, enumerate_hypercubes, CountResult, EnumerationMode,
    Factored, HypercubeClass, VertexClass,
};
pub use error::{Error, Result};
pub use hypercube::{
    cube_lc_2n, cube_structure, extract_structure, is_hypercube, lc_from_structure, next_lower_hypercube_lc,
    standard_decompose, tilde_rewrite, Cube, Decomposition, DecompositionPart, HypercubeStructure, NextLower,
    TildeRewrite, TupleVertex, Vertex,
};
pub use kerror::{
    celcs, construct_stable, first_critical_bruteforce, first_drop_bruteforce, first_critical_m, k_error_lc_bruteforce, k_error_profile,
    kurosawa_m_2n, meidl_upper_bound, second_critical_m1, vertex_min_change, Budget, CelcsPoint, CriticalReport,
    Method, DEFAULT_CAP,
};
pub use lincomp::{
    berlekamp_massey, berlekamp_massey_lc, games_chan_lc, lc_form_decompose, linear_complexity, xwli_lc, Branch,
    LcForm, XwliStep, XwliTrace,
};
pub use sequence::{
    hamming_weight, parse_corpus, pn_distance, xor_sequences, CorpusEntry, CorpusError, Modulus, PDistance,
    PeriodicSequence, MAX_PERIOD,
};
