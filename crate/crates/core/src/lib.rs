//! Cooling a qubit with an n-qubit thermal machine: the optimal protocol,
//! its population gain and bounds, reducibility, and minimum-cost circuits.

pub mod bitstring;
pub mod circuit;
pub mod cooling;
pub mod error;
pub mod format;
pub mod machine;
pub mod matching;
pub mod oracle;
pub mod orders;
pub mod reducibility;
pub mod report;
pub mod sweep;
pub mod verify;

pub use bitstring::{hamming_distance, lex_compare, upset, BitString, OrderRelation};
pub use circuit::{Circuit, Gate, TwoLevelPermutation};
pub use cooling::{delta_p0, CoolingReport};
pub use error::{Error, Result};
pub use machine::{load_machine, Family, MachineDocument, MachineSpec, SwappableSet};
pub use matching::{CostFunction, CostKind, CostMatrix, Matching};
pub use reducibility::ReducibilityReport;
