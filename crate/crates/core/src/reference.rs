//! Published channels and the numerical values reported for them.
//!
//! These are targets for the reproduction driver and the test suites; nothing
//! in the solver reads them.

use crate::qubit::{BlochVector, QubitChannel};
use crate::solver::{Ensemble, EnsembleEntry};

/// `(0.6x + 0.021, 0.601y, 0.5z + 0.495)`: optimal ensembles need four inputs.
pub const fn four_state_channel() -> QubitChannel {
    shifted_family(0.021)
}

/// `(0.6x + t1, 0.601y, 0.5z + 0.495)`.
pub const fn shifted_family(t1: f64) -> QubitChannel {
    QubitChannel::new([0.6, 0.601, 0.5], [t1, 0.0, 0.495])
}

/// `(mu x, mu y, 0.5 z)`, completely positive for `0 <= mu <= 0.75`.
pub const fn mu_channel(mu: f64) -> QubitChannel {
    QubitChannel::new([mu, mu, 0.5], [0.0; 3])
}

/// Second four-state example `(0.8x + 0.22, 0.8015y, 0.75z + 0.245)`.
pub const fn second_four_state_channel() -> QubitChannel {
    QubitChannel::new([0.8, 0.8015, 0.75], [0.22, 0.0, 0.245])
}

/// Four-state channel with a small `y` translation, `t2 = 5e-5`.
pub const fn tilted_four_state_channel() -> QubitChannel {
    QubitChannel::new([0.6, 0.601, 0.5], [0.021, 0.00005, 0.495])
}

pub const FOUR_STATE_CAPACITY: f64 = 0.3214851589;

pub const TABLE1_PROBABILITIES: [f64; 4] = [0.2322825705, 0.2133220819, 0.2771976738, 0.2771976738];

pub const TABLE1_INPUTS: [BlochVector; 4] = [
    BlochVector::new_unchecked(0.2530759862, 0.0, 0.9674464043),
    BlochVector::new_unchecked(0.9783950999, 0.0, 0.2067438718),
    BlochVector::new_unchecked(-0.4734087533, 0.8646461389, -0.1681404376),
    BlochVector::new_unchecked(-0.4734087533, -0.8646461389, -0.1681404376),
];

/// `(phi, theta)` columns: half polar angle and azimuth, rounded from the
/// Cartesian inputs above.
pub const TABLE1_ANGLES: [(f64, f64); 4] = [
    (0.127929, 0.0),
    (0.681275, 0.0),
    (0.869870, 2.071731),
    (0.869870, -2.071731),
];

pub const TABLE1_AVERAGE_INPUT: BlochVector =
    BlochVector::new_unchecked(0.0050428099, 0.0, 0.1756076944);

pub const TABLE1_OUTPUTS: [BlochVector; 4] = [
    BlochVector::new_unchecked(0.1728455917, 0.0, 0.9787232022),
    BlochVector::new_unchecked(0.6080370599, 0.0, 0.5983719359),
    BlochVector::new_unchecked(-0.2630452520, 0.5196523295, 0.4109297812),
    BlochVector::new_unchecked(-0.2630452520, -0.5196523295, 0.4109297812),
];

pub const TABLE1_OUTPUT_ENTROPIES: [f64; 4] =
    [0.0300135405, 0.3786915585, 0.5935800377, 0.5935800377];

pub const TABLE1_AVERAGE_OUTPUT: BlochVector =
    BlochVector::new_unchecked(0.0240256859, 0.0, 0.5828038472);

pub const TABLE1_AVERAGE_OUTPUT_ENTROPY: f64 = 0.7383180644;

/// Supporting hyperplane normal, convention `xi . Gamma(rho_i) + xi0 = S(Gamma(rho_i))`.
pub const TABLE1_XI: [f64; 3] = [-0.0396622022, 0.0, -0.9621071440];

pub const TABLE1_XI0: f64 = 0.9785055621;

/// Magnitude of the identity coefficient and the `sigma_x`, `sigma_z`
/// coefficients of `log2 Gamma(rho_avg)` (the identity coefficient itself is negative).
pub const LOG_AVERAGE_OUTPUT: [f64; 3] = [1.299989, 0.039662, 0.962105];

/// Constant in `F(rho) = c - H[Gamma(rho), Gamma(rho_avg)]`.
pub const F_IDENTITY_CONSTANT: f64 = 1.299989;

/// Three channels with three-input optima and their capacities.
pub const TABLE2: [(QubitChannel, f64); 3] = [
    (
        QubitChannel::new([0.6, 0.6, 0.5], [0.0, 0.0, 0.5]),
        0.324990,
    ),
    (
        QubitChannel::new([0.6, 0.601, 0.5], [0.0, 0.0, 0.5]),
        0.325555,
    ),
    (
        QubitChannel::new([0.6, 0.601, 0.5], [0.0, 0.0, 0.495]),
        0.320535,
    ),
];

/// Three-input optimum of the four-state channel restricted to the x-z plane.
pub const TABLE3_PLANAR_CAPACITY: f64 = 0.3214609877;

pub const TABLE3_PLANAR_PROBABILITIES: [f64; 3] = [0.213290, 0.366051, 0.420657];

pub const TABLE3_PLANAR_INPUTS: [BlochVector; 3] = [
    BlochVector::new_unchecked(0.252867, 0.0, 0.9675017),
    BlochVector::new_unchecked(0.978544, 0.0, 0.206036),
    BlochVector::new_unchecked(-0.967649, 0.0, -0.252299),
];

pub const TABLE3_PLANAR_AVERAGE_INPUT: BlochVector =
    BlochVector::new_unchecked(0.005083, 0.0, 0.1756493);

/// Equidistance value of the planar three-state ensemble.
pub const TABLE3_EQUIDISTANCE: f64 = 0.321460988;

/// Relative-entropy maxima with respect to the three-state average output.
pub const TABLE4_MAXIMUM: f64 = 0.321505535;

pub const TABLE4_LOCATIONS: [BlochVector; 2] = [
    BlochVector::new_unchecked(-0.539291, 0.822613, -0.180202),
    BlochVector::new_unchecked(-0.539291, -0.822613, -0.180202),
];

/// Boundary of complete positivity of [`shifted_family`] in `|t1|`.
pub const SHIFTED_FAMILY_CP_BOUNDARY: f64 = 0.05277;

/// Twice the minimal single-qubit output entropy of [`mu_channel`].
pub const MIN_OUTPUT_ENTROPY_FLOORS: [(f64, f64); 2] = [
    (std::f64::consts::FRAC_1_SQRT_2, 1.2017521),
    (0.75, 1.087129),
];

/// Mesh error reference `0.05 / k^2`.
pub fn mesh_reference_deficit(k: usize) -> f64 {
    0.05 / (k * k) as f64
}

fn published_ensemble(probabilities: &[f64], inputs: &[BlochVector]) -> Ensemble {
    Ensemble::from_weights(
        probabilities
            .iter()
            .zip(inputs)
            .map(|(p, r)| EnsembleEntry::new(*p, r.normalized()))
            .collect(),
    )
    .expect("published ensembles are valid")
}

/// Table 1 ensemble, inputs projected onto the sphere (the printed digits
/// leave them ~1e-11 off it).
pub fn table1_ensemble() -> Ensemble {
    published_ensemble(&TABLE1_PROBABILITIES, &TABLE1_INPUTS)
}

/// Planar three-state ensemble, inputs projected onto the sphere.
pub fn table3_planar_ensemble() -> Ensemble {
    published_ensemble(&TABLE3_PLANAR_PROBABILITIES, &TABLE3_PLANAR_INPUTS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_angles_match_inputs() {
        for (r, &(phi, theta)) in TABLE1_INPUTS.iter().zip(TABLE1_ANGLES.iter()) {
            let (p, t) = r.angles();
            assert!((p - phi).abs() < 1e-6, "{p} vs {phi}");
            assert!((t - theta).abs() < 1e-6, "{t} vs {theta}");
        }
    }
}
