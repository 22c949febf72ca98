//! Optical-pump heating of a cryogenic electro-optic transducer and its effect on
//! the thermal occupancy of the microwave mode and on quantum state-transfer fidelity.
//!
//! The crate is organised bottom-up:
//!
//! * [`materials`] - sub-Kelvin power-law thermal properties and Kirchhoff potentials
//! * [`device`] - the axisymmetric disc geometry and its regions
//! * [`mesh`] - structured finite-volume discretisation of the device
//! * [`thermal`] - nonlinear transient and steady heat diffusion
//! * [`fridge`] - mixing-chamber temperature versus heat load
//! * [`quantum`] - occupancies, cooperativity and transfer fidelities
//! * [`sweep`] - the thermal → fridge → quantum chain, sweeps and optimisation
//! * [`config`] and [`run`] - configuration files, scenarios and figure presets
//!
//! Every quantity is in SI units; rates are angular (rad/s).

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod constants;
pub mod device;
pub mod error;
pub mod fridge;
pub mod interp;
pub mod materials;
pub mod mesh;
pub mod optimize;
pub mod output;
pub mod quantum;
pub mod run;
pub mod svg;
pub mod sweep;
pub mod thermal;

mod banded;

pub use error::{Error, Result};
