//! Exact tallying and worst-case guarantees for committee elections in
//! which every voter submits an unordered list of `j` candidates and
//! approves any `k`-committee containing that list.
//!
//! All proportions are exact [`Rational`]s. The modules follow the flow of
//! an analysis:
//!
//! - [`johnson`]: list space geometry (distance, rings, balls).
//! - [`ballots`]: voter distributions, ballot files, concentric projection.
//! - [`tally`]: approval proportions and most-popular committees.
//! - [`theory`]: closed-form guarantees and the exact concentric minimax.
//! - [`oracle`]: naive reference implementations.
//! - [`verify`]: seeded validation sweeps.

pub mod ballots;
pub mod error;
pub mod exactnum;
pub mod johnson;
pub mod oracle;
pub mod report;
pub mod tally;
pub mod theory;
pub mod verify;

pub use ballots::{RawBallotFile, RingWeights, VoterDistribution};
pub use error::{Error, Result};
pub use exactnum::{BinomialTable, Rational};
pub use johnson::{BallSpec, CandidateSubset, ElectionParams};
pub use report::VerificationReport;
pub use tally::{Strategy, TallyResult};
pub use theory::{BCoeffTable, WorstCaseResult};
