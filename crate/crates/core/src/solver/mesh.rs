use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qubit::BlochVector;
use crate::sphere;

/// Latitude/longitude mesh resolution; `k` polar steps and `k` azimuth steps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshSpec {
    pub k: usize,
}

impl MeshSpec {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!(
                "mesh resolution k = {k} < 2"
            )));
        }
        Ok(Self { k })
    }

    pub fn point_count(self) -> usize {
        self.k * self.k - self.k + 2
    }
}

/// Pure states on the mesh, poles included once each.
pub fn mesh_points(spec: MeshSpec) -> Result<Vec<BlochVector>> {
    let spec = MeshSpec::new(spec.k)?;
    Ok(sphere::lat_long_mesh(spec.k)
        .into_iter()
        .map(BlochVector::from_array)
        .collect())
}
