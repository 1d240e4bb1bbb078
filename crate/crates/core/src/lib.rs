//! Shuffle algebra, Toeplitz feedback group, Abel generating series and the
//! Faà di Bruno type Hopf algebra of coordinate functions, with a numeric
//! harness for the Abel center problem.

pub mod abelfeed;
pub mod bench;
pub mod cli;
pub mod combinat;
pub mod compose;
pub mod error;
pub mod fdbclassical;
pub mod hopf;
pub mod numeric;
pub mod polyring;
pub mod rational;
pub mod report;
pub mod series;
pub mod verify;
pub mod words;

pub use error::{Error, Result};
pub use polyring::{CPoly, Generator, Monomial, UPoly};
pub use rational::Q;
pub use series::NCSeries;
pub use words::{Letter, Word};
