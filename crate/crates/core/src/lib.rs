//! Poisson-Lie groups, modular vector fields and invariant volumes of
//! Hamiltonian flows.

pub mod bialgebra;
pub mod chart;
pub mod config;
pub mod dynamics;
pub mod error;
pub mod expr;
pub mod fd;
pub mod field;
pub mod group;
pub mod lie;
pub mod models;
pub mod modular;
pub mod report;
pub mod sampling;

pub use bialgebra::{Cobracket, LieBialgebra, UnimodularityVerdict};
pub use chart::PoissonChart;
pub use error::{PlgError, Result};
pub use field::{ScalarField, VectorField};
pub use lie::{standard_algebra, LieAlgebra, Multivector};
pub use group::{GroupModel, Side};
pub use modular::{MorseReport, MorseVerdict, VolumeForm};
pub use dynamics::{DriftReport, Trajectory};
