//! Measurement events, exclusivity graphs, and bounds on sums of event
//! probabilities: deterministic hidden-variable maxima, edge and clique
//! linear programs, the Lovász theta number, and mechanically verified
//! exclusivity-principle derivations of the pentagon and CHSH quantum
//! maxima with explicit realizations certifying achievability.

pub mod algebra;
pub mod bounds;
pub mod classical;
pub mod error;
pub mod everify;
pub mod graph;
pub mod linalg;
pub mod lp;
pub mod quantum;
pub mod report;
pub mod scenario;
pub mod theta;

pub use error::Error;
