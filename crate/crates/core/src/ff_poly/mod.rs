//! Finite fields, polynomials, binary forms and divisors on P^1.

pub mod divisor;
pub mod field;
pub mod form;
pub mod poly;

pub use divisor::{closed_point_count, closed_points, divisor_of, effective_divisors, ClosedPoint, DivisorP1};
pub use field::{Elem, FieldCtx};
pub use form::{enumerate_forms, BinaryForm, FormSpace};
pub use poly::Poly;

/// Builds F_{p^f}.
pub fn make_field(p: u32, f: u32) -> crate::error::Result<FieldCtx> {
    FieldCtx::new(p, f)
}
