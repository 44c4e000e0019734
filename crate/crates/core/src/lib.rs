//! Exact computation of the index of the Galois image of a CM elliptic
//! curve inside its CM supergroup.

pub mod arith;
pub mod bigfloat;
pub mod classpoly;
pub mod cmcurve;
pub mod error;
pub mod numfield;
pub mod pipeline;
pub mod quadorder;
pub mod rayclass;

pub use cmcurve::{CurveModel, Family};
pub use error::{Error, Result};
pub use pipeline::{
    batch_class_number_2, compute_index, compute_index_curve, compute_index_rational, index_from_degrees, twist_demo, Base, BatchRow,
    IndexReport, IndexSpec, RunConfig, TwistDemo,
};
