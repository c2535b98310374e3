//! Function constructions: random cube fields and their moments, the
//! band-limited mollifier, the concrete families driven through the
//! operators, and a binary container for saving and loading them.

pub mod bernoulli;
pub mod container;
pub mod families;
pub mod mollifier;
pub mod moments;
