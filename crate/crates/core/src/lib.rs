//! Weighted edge ideals of graphs: exact monomial-ideal arithmetic,
//! decompositions, two independent Cohen-Macaulay oracles and the
//! combinatorial criteria that predict their verdicts.

pub mod cm;
pub mod complex;
pub mod criteria;
pub mod decompose;
pub mod error;
pub mod graph;
pub mod harness;
pub mod homology;
pub mod monomial;

pub use error::{Error, Result};
pub use homology::FieldConfig;
pub use monomial::{Monomial, MonomialIdeal, Ring, VarSet};
