mod common;

use common::oracle_module_availability;
use nmr_voting::plant::{
    apply_stuck_faults, full_adder_16, inject_channel_errors, make_faulty_module_spec, AdderInput,
    ChannelNoise, FaultSpec, ADDER_WIDTH,
};
use nmr_voting::{hamming_distance, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn three_stuck_sum_bits_give_one_eighth() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = oracle_module_availability(&mut rng, &[(0, true), (5, false), (10, true)], 1_000_000);
    assert!((a - 0.125).abs() < 0.002, "{a}");
}

/// Averaged over random fault specs, the correlation between the top sum
/// bit and the carry-out cancels and the mean is 2^-3.
#[test]
fn random_three_bit_specs_average_one_eighth() {
    let mut spec_rng = ChaCha8Rng::seed_from_u64(2);
    let mut input_rng = ChaCha8Rng::seed_from_u64(3);
    let specs = 400;
    let mut total = 0.0;
    for _ in 0..specs {
        let spec = make_faulty_module_spec(&mut spec_rng, ADDER_WIDTH, 3).unwrap();
        let pairs: Vec<(u32, bool)> = spec.iter().collect();
        total += oracle_module_availability(&mut input_rng, &pairs, 5_000);
    }
    let mean = total / specs as f64;
    assert!((mean - 0.125).abs() < 0.01, "{mean}");
}

/// Two independent stuck bits would match a quarter of the time; the
/// carry-out and bit 15 are both set only when the sum reaches 3 * 2^15.
#[test]
fn carry_correlated_spec_deviates() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let a = oracle_module_availability(&mut rng, &[(15, true), (16, true)], 400_000);
    assert!((a - 0.125).abs() < 0.003, "{a}");
}

#[test]
fn library_faults_agree_with_oracle_predicate() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let spec = make_faulty_module_spec(&mut rng, ADDER_WIDTH, 3).unwrap();
        for _ in 0..200 {
            let input = AdderInput::random(&mut rng);
            let truth = full_adder_16(input);
            let faulty = apply_stuck_faults(truth, &spec).unwrap();
            let coincide = spec.iter().all(|(p, v)| truth.bit(p).unwrap() == v);
            assert_eq!(faulty == truth, coincide);
        }
    }
}

#[test]
fn empty_spec_module_is_always_correct() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let spec = FaultSpec::new();
    for _ in 0..10_000 {
        let truth = full_adder_16(AdderInput::random(&mut rng));
        assert_eq!(apply_stuck_faults(truth, &spec).unwrap(), truth);
    }
}

proptest! {
    #[test]
    fn stuck_faults_are_idempotent(bits in any::<u64>(), n in 0u32..=17, seed in any::<u64>()) {
        let spec = make_faulty_module_spec(&mut ChaCha8Rng::seed_from_u64(seed), ADDER_WIDTH, n).unwrap();
        let w = Word::truncating(bits, ADDER_WIDTH).unwrap();
        let once = apply_stuck_faults(w, &spec).unwrap();
        prop_assert_eq!(apply_stuck_faults(once, &spec).unwrap(), once);
        for (p, v) in spec.iter() {
            prop_assert_eq!(once.bit(p).unwrap(), v);
        }
    }

    #[test]
    fn channel_flips_exactly_e_bits(bits in 0u64..256, e in 0u32..=8, seed in any::<u64>()) {
        let w = Word::new(bits, 8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noisy = inject_channel_errors(w, ChannelNoise { error_bits: e }, &mut rng).unwrap();
        prop_assert_eq!(hamming_distance(&w, &noisy).unwrap(), e);
    }

    #[test]
    fn adder_matches_integer_sum(a in any::<u16>(), b in any::<u16>(), c in any::<bool>()) {
        let out = full_adder_16(AdderInput::new(a, b, c));
        prop_assert_eq!(out.bits(), a as u64 + b as u64 + c as u64);
    }
}
