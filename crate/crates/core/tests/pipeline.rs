use holocap::reference::{second_four_state_channel, tilted_four_state_channel};
use holocap::{
    capacity, format_channel, parse_channel, CapacityConfig, CapacityResult, QubitChannel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h2(q: f64) -> f64 {
    [q, 1.0 - q]
        .iter()
        .filter(|p| **p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

fn quick() -> CapacityConfig {
    CapacityConfig {
        mesh_sizes: vec![12, 16],
        rotations: 2,
        verify_k: 60,
        ..CapacityConfig::default()
    }
}

// unital qubit channels reach 1 - h2((1 + max|lambda|)/2) with an antipodal pair
#[test]
fn unital_channels_match_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut done = 0;
    while done < 4 {
        let l: [f64; 3] = std::array::from_fn(|_| rng.random_range(-0.95..0.95));
        let ch = QubitChannel::new(l, [0.0; 3]);
        if !ch.is_cp().completely_positive {
            continue;
        }
        let m = l.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let want = 1.0 - h2((1.0 + m) / 2.0);
        let r = capacity(&ch, &quick()).unwrap();
        assert!(
            (r.capacity - want).abs() < 1e-9,
            "{l:?}: {} vs {want}",
            r.capacity
        );
        assert!(r.certified && r.ensemble.len() <= 4);
        done += 1;
    }
}

#[test]
fn channel_file_to_capacity() {
    let ch = parse_channel("# depolarizing\nlambda = 0.5 0.5 0.5\nt = 0 0 0\n").unwrap();
    let r = capacity(&ch, &quick()).unwrap();
    assert!((r.capacity - (1.0 - h2(0.75))).abs() < 1e-10);
    assert_eq!(parse_channel(&format_channel(&ch)).unwrap(), ch);
}

#[test]
fn tilted_four_state_channel_needs_four_inputs() {
    let r = capacity(&tilted_four_state_channel(), &CapacityConfig::default()).unwrap();
    assert!(r.certified, "{r:?}");
    assert_eq!(r.ensemble.len(), 4);
    // no y-reflection symmetry left: the two off-plane inputs differ in weight
    let mut p = r.ensemble.probabilities();
    p.sort_by(f64::total_cmp);
    assert!(p.windows(2).all(|w| w[1] - w[0] > 1e-4), "{p:?}");
    let three = capacity(
        &tilted_four_state_channel(),
        &CapacityConfig {
            max_support: 3,
            ..CapacityConfig::default()
        },
    )
    .unwrap();
    assert!(three.capacity < r.capacity - 1e-6);
    assert!(!three.certified);
}

#[test]
fn printed_second_four_state_map_is_not_a_channel() {
    let ch = second_four_state_channel();
    assert!(!ch.is_cp().completely_positive);
    let cfg = CapacityConfig {
        allow_non_cp: true,
        ..quick()
    };
    assert!(capacity(&ch, &cfg).is_err());
}

#[test]
fn config_and_result_serialize() {
    let cfg: CapacityConfig = serde_json::from_str(r#"{"meshSizes":[10],"seed":4}"#).unwrap();
    assert_eq!(cfg.mesh_sizes, vec![10]);
    assert_eq!(cfg.seed, 4);
    assert_eq!(cfg.rotations, CapacityConfig::default().rotations);
    let r = capacity(&QubitChannel::identity(), &quick()).unwrap();
    let back: CapacityResult = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert!((back.capacity - r.capacity).abs() <= 1e-15);
    assert_eq!(back.ensemble.len(), r.ensemble.len());
    assert_eq!(back.seed, r.seed);
}
