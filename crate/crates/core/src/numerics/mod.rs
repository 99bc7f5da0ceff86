//! Linear algebra, quadrature, interpolation, special functions and random streams.

pub mod interp;
pub mod linalg;
pub mod quadrature;
pub mod rng;
pub mod special;

pub use interp::{invert_monotone, Inversion};
pub use linalg::{eigh, CMatrix, CVector, EigenSystem, HermitianOperator};
pub use quadrature::{integrate_grid, Grid1D, Spacing};
pub use rng::RandomStream;
pub use special::{digamma, trigamma};
