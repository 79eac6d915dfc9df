pub mod combinatorics;
pub mod error;
pub mod operator;
pub mod orthogonal;
pub mod params;
pub mod poly;
pub mod quadrature;
pub mod rational;
pub mod series;
pub mod transform;
pub mod verify;

pub use error::{Error, Result};
pub use params::ModelParams;
pub use poly::Poly;
pub use rational::Rational;
pub use series::Series;
