//! Procedurally generated social grid-world environments with scripted peers.
//!
//! The crate is organised bottom-up: [`grid`] holds world geometry and
//! physics, [`peer`] the scripted social partner, [`envs`] builds concrete
//! environments from sampled [`param_tree`] assignments, and [`episode`]
//! runs the reset/step loop and records replayable trajectories.

pub mod baselines;
pub mod bonuses;
pub mod envs;
pub mod episode;
pub mod error;
pub mod grid;
pub mod lang;
pub mod param_tree;
pub mod peer;
pub mod planner;
pub mod rng;
pub mod textworld;

pub use envs::{EnvParams, EnvState, EnvType, Problem};
pub use episode::{AgentAction, Episode, Observation, StepResult, Trajectory};
pub use error::{Error, Result};
pub use grid::{AgentPose, Color, Direction, Grid, ObjectKind, ObjectState, Position, WorldObject};
pub use param_tree::{ParamSet, ParamTree};
