//! Home of the `acceptance` test target for `seqcomplex`. Run it with
//! `cargo test -p seqcomplex-validation --test acceptance`.
