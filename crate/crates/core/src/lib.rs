//! Linear secret sharing for k-uniform access structures.
//!
//! The crate builds monotone span programs (MSPs) for access structures in
//! which a set of participants is qualified when it contains a hyperedge of a
//! k-uniform hypergraph or has at least `k+1` members. It covers:
//!
//! * exact linear algebra over prime fields ([`field`]);
//! * hypergraph data model and text formats ([`hypergraph`]);
//! * randomized covers, degree buckets and block partitions ([`decompose`]);
//! * MSP acceptance, sharing, reconstruction and composition ([`msp`]);
//! * the polynomial gadget behind the partite constructions ([`polygadget`]);
//! * the sparse and dense scheme pipelines with share-size reports ([`scheme`]);
//! * brute-force audits and privacy counting ([`oracle`]).

#![allow(clippy::needless_range_loop)]

pub mod decompose;
pub mod error;
pub mod field;
pub mod hypergraph;
pub mod msp;
pub mod oracle;
pub mod polygadget;
pub mod rng;
pub mod scheme;

pub use error::{Error, Result};
pub use field::{FieldElement, Matrix, PrimeField, Vector};
pub use hypergraph::{AccessStructure, Family, Hypergraph, PartiteHypergraph};
pub use msp::{MonotoneSpanProgram, ShareBundle};
pub use rng::RandomTape;
pub use scheme::{BuiltScheme, SchemeReport};
