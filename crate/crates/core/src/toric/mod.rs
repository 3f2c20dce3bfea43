//! Toric Sasakian geometry: moment cones, the Gorenstein condition, the
//! Guillemin potential and volume minimization over the Reeb slice.

pub mod cone;
pub mod linalg;
pub mod potential;
pub mod quotient;
pub mod reeb;

pub use cone::{MomentCone, Simplex};
pub use potential::{guillemin_hessian, guillemin_potential};
pub use quotient::{cone_from_weights, cy_condition, Quotient, WeightMatrix};
pub use reeb::{
    gorenstein_gamma, minimize_volume, minimize_volume_from, reeb_slice_project, slice_gradient,
    volume, volume_gradient, volume_hessian, GammaFailure, MinimizeOptions, ReebVector,
    VolumeMinimum,
};

use crate::error::{Error, Result};

impl MomentCone {
    /// One facet normal per line, space-separated integers; blank lines and
    /// `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let normals = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(quotient::parse_ints)
            .collect::<Result<Vec<_>>>()?;
        if normals.is_empty() {
            return Err(Error::Parse("cone file has no normals".into()));
        }
        MomentCone::new(normals)
    }
}
