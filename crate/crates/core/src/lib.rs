//! Quantum CSS/LDPC codes built from chain complexes over GF(2).
//!
//! The crate provides:
//!
//! * exact GF(2) linear algebra on sparse binary matrices ([`gf2`]),
//! * chain complexes with homology, systole and cosystole oracles ([`chain`]),
//! * simplicial complexes, clique closures and test fixtures ([`simplicial`]),
//! * explicit LSV Ramanujan-complex quotients from Cartwright–Steger
//!   generators ([`lsv`]),
//! * classical bipartite component codes ([`classical`]),
//! * the distance-balancing product of a 2-complex with a classical code
//!   ([`product`]),
//! * syndrome decoders for both error types plus local coboundary decoders,
//!   and a reproducible Monte Carlo harness ([`decoders`]).
//!
//! The `qldpc` binary exposes all of it as a CLI workbench.

pub mod chain;
pub mod classical;
pub mod cli;
pub mod decoders;
pub mod gf2;
pub mod graph;
pub mod lsv;
pub mod par;
pub mod product;
pub mod simplicial;
