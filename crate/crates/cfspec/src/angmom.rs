//! Angular-momentum algebra: half-integer quantum numbers, Wigner symbols computed in
//! exact rational arithmetic, spherical-tensor matrix elements and operator matrices.

pub mod half;
pub mod tensor;
pub mod wigner;
