//! Ground-state electroluminescence in ultrastrongly coupled cavity QED.
//!
//! Three model tiers compute the rate at which extracting an electron from
//! the hybridized light-matter ground state leaves the cavity in an excited
//! polariton state:
//!
//! - [`bosonic_pert`]: Jaynes–Cummings polaritons with first-order
//!   counter-rotating dressing,
//! - [`bosonic_full`]: exact Hopfield diagonalization of the bosonic model,
//! - [`fermionic`]: Tavis–Cummings subspaces, first-order dressing and
//!   Clebsch–Gordan transition algebra at finite N,
//!
//! plus the brute-force [`oracle`] and the observables in [`emission`].
//! Frequencies are in units of ω₀ and rates in units of Γ_el.

pub mod bosonic_full;
pub mod bosonic_pert;
pub mod emission;
pub mod error;
pub mod fermionic;
pub mod oracle;
pub mod params;

pub use error::{GseError, Result};
pub use params::{DickeParams, SystemParams};

/// Upper (+) or lower (−) polariton branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];
}

/// Final two-polariton state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolaritonPair {
    PlusPlus,
    PlusMinus,
    MinusMinus,
}

impl PolaritonPair {
    pub const ALL: [PolaritonPair; 3] = [PolaritonPair::PlusPlus, PolaritonPair::PlusMinus, PolaritonPair::MinusMinus];
}

/// Model tier used to produce a rate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Model {
    Pert,
    Full,
    Fermionic,
}

impl Model {
    pub const ALL: [Model; 3] = [Model::Pert, Model::Full, Model::Fermionic];

    pub fn name(self) -> &'static str {
        match self {
            Model::Pert => "pert",
            Model::Full => "full",
            Model::Fermionic => "fermionic",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = GseError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pert" => Ok(Model::Pert),
            "full" => Ok(Model::Full),
            "fermionic" => Ok(Model::Fermionic),
            other => Err(GseError::Config(format!("unknown model '{other}'"))),
        }
    }
}
