//! Shared numeric type aliases.

pub type C64 = num_complex::Complex<f64>;
pub type CVec = nalgebra::DVector<C64>;
pub type CMat = nalgebra::DMatrix<C64>;
pub type RVec = nalgebra::DVector<f64>;
pub type RMat = nalgebra::DMatrix<f64>;
