//! Operators acting on sampled functions: Fourier multipliers (including
//! the compactly supported radial kernels and the oscillating symbols),
//! maximal functions of Peetre and geometric type, finite differences and
//! the smoothness modulus.

pub mod differences;
pub mod maximal;
pub mod multiplier;
pub mod oscillatory;
