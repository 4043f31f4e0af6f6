//! Retarded interaction phases and mediated spin entanglement.
//!
//! This crate computes the on-shell action phases accumulated by superposed
//! particle trajectories that interact through linearized gravity or
//! electromagnetism, keeping retardation exact via Liénard–Wiechert fields.
//! The phases feed a small entanglement toolkit (negativity, concurrence,
//! phase-additivity separability test) so that the causal structure of the
//! interaction — in particular the impossibility of entangling spacelike
//! separated superposition events — can be checked numerically.
//!
//! The main pipeline is:
//!
//! 1. build a [`kinematics::BranchScenario`] (by hand or with
//!    [`scenarios::build_bmv`] / [`scenarios::build_spacelike`]),
//! 2. evaluate a [`action::PhaseTable`] with [`action::phase_table`] under one
//!    of the three interaction models ([`action::ActionModel`]),
//! 3. evolve a [`entanglement::SpinState`] and quantify entanglement.

pub mod action;
pub mod boost;
pub mod constants;
pub mod entanglement;
pub mod error;
pub mod geometry;
pub mod kinematics;
pub mod linalg;
pub mod quadrature;
pub mod retardation;
pub mod scenarios;
pub mod validation;
pub mod worldline;

pub use action::{ActionModel, PhaseEstimate, PhaseTable};
pub use constants::PhysicalConstants;
pub use entanglement::{EntanglementReport, SpinState};
pub use error::Error;
pub use geometry::Vec3;
pub use kinematics::{BranchScenario, Interaction, ParticleBranches, Spin, SpinConfiguration};
pub use retardation::RetardedPoint;
pub use scenarios::BmvParams;
pub use worldline::Worldline;
