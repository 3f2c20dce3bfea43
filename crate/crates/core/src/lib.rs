//! Topology and Sasaki–Einstein existence tests for links of
//! weighted-homogeneous hypersurface singularities, plus toric moment cones
//! and Reeb vector volume minimization.

pub mod catalog;
pub mod dimension;
pub mod error;
pub mod existence;
pub mod homology;
pub mod link;
pub mod toric;

pub use error::{Error, ErrorKind, Result};
pub use homology::{homology, Applicability, HomologyGroup, OrlikTable};
pub use link::{
    BPExponents, FractionalWeights, PolynomialClass, Presentation, TrichotomyType, WeightedLink,
};
