//! S-machines over group alphabets: the machine engine, the tower of
//! machines recognizing the language `{u^n}`, the associated group
//! presentations and the van Kampen diagrams built from computations.

pub mod admissible;
pub mod combinators;
pub mod computation;
pub mod decide;
pub mod diagram;
pub mod error;
pub mod format;
pub mod machine;
pub mod metrics;
pub mod normalize;
pub mod presentation;
pub mod search;
pub mod step;
pub mod tower;
pub mod verify;
pub mod word;

pub use admissible::AdmissibleWord;
pub use computation::Computation;
pub use error::{Error, Result};
pub use machine::{Domain, Letter, Machine, MachineSpec, RuleIdx};
pub use step::{Step, StepHistory};
pub use word::{FreeWord, Lit};
