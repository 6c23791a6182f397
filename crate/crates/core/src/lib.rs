//! Holevo capacity of qubit channels in affine Bloch form.
//!
//! The crate computes the capacity
//! `C = max sum_i p_i H[Gamma(rho_i), Gamma(rho_avg)]` of a qubit channel
//! `Gamma(rho(x,y,z)) = rho(l1 x + t1, l2 y + t2, l3 z + t3)`, certifies the
//! optimum with a supporting hyperplane and the relative-entropy dual bound,
//! and provides the two-qubit machinery used to probe additivity of `Gamma (x) Gamma`.
//!
//! Modules:
//! - [`qubit`]: Bloch vectors, channels, entropies, Choi matrix and CP check.
//! - [`solver`]: mesh approximation, simplex maximization, Newton refinement, certificates.
//! - [`relent`]: equidistance, relative-entropy landscapes and critical points.
//! - [`product`]: Kraus form, Schmidt states, product-channel scans, concavity example.
//! - [`channel_file`]: the `lambda = ... / t = ...` text format.
//!
//! All entropies are in bits.

pub mod channel_file;
pub mod error;
pub mod linalg;
mod optim;
pub mod product;
pub mod qubit;
pub mod reference;
pub mod relent;
pub mod solver;
pub mod sphere;

pub use channel_file::{format_channel, parse_channel};
pub use error::{Error, Result};
pub use product::{
    additivity_scan, concavity_curve, gslice, kraus_from_choi, min_output_entropy_product_floor,
    nonschmidt_pair_scan, product_output, relent_vs_product_avg, schmidt_vector, KrausSet,
    SchmidtState,
};
pub use qubit::{
    bloch_to_density, entropy, entropy_matrix, relative_entropy, relative_entropy_bloch,
    BlochVector, CpCheck, DensityMatrix, QubitChannel, QubitLog,
};
pub use relent::{
    critical_census, equidistance, landscape, sup_relent, CriticalKind, CriticalPoint,
    LandscapeGrid, SupRelent,
};
pub use solver::{
    capacity, holevo_chi, refine, supporting_hyperplane, verify_hyperplane, CapacityConfig,
    CapacityResult, Ensemble, EnsembleEntry, MeshSpec,
};
