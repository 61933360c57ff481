//! Instance generators, oracle-versus-criteria sweeps and counterexample
//! searches.

pub mod generate;
pub mod search;
pub mod sweep;

pub use generate::{generate, Family, GenParams, Instance};
pub use search::{search_conjecture, Conjecture, SearchReport};
pub use sweep::{sweep, sweep_instances, OracleChoice, SweepReport, SweepSpec};
