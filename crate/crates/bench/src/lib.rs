//! Fixed inputs shared by the benchmarks.

use cm_index_core::cmcurve::{curve_from_family, CurveModel, Family};
use cm_index_core::pipeline::ring_class_field;
use cm_index_core::quadorder::QuadOrder;
use cm_index_core::RunConfig;

/// Family A at the first root of `H_D`, over `K(j_0)`.
pub fn family_curve(disc: i64) -> CurveModel {
    let order = QuadOrder::new(disc).expect("valid discriminant");
    let rcf = ring_class_field(&order, &RunConfig::default()).expect("class polynomial");
    curve_from_family(Family::A, &rcf.field, &rcf.j0).expect("nonsingular")
}
