//! Lifting a base nullity along `B → I → M`: models, the two-step Kan
//! pipeline, oracles and the checks run against its output.
mod lemmas;
mod models;
mod pipeline;
mod saturation;
mod setup;
mod verify;

pub use lemmas::*;
pub use models::*;
pub use pipeline::*;
pub use saturation::*;
pub use setup::*;
pub use verify::*;
