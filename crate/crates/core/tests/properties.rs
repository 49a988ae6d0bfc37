use parafermion::algebra::AlgebraElement;
use parafermion::braid::{braid_generator, schmidt_spectrum};
use parafermion::diagram::{apply_rule, evaluate, parse, sample, serialize, Rule};
use parafermion::fock::{represent, RepConfig, StateVector};
use parafermion::C64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn element(seed: u64, d: u32, m: usize) -> AlgebraElement {
    AlgebraElement::random(&mut ChaCha8Rng::seed_from_u64(seed), d, m, 4, None)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_is_associative(d in 2u32..=5, m in 1usize..=4, s in any::<[u64; 3]>()) {
        let (a, b, c) = (element(s[0], d, m), element(s[1], d, m), element(s[2], d, m));
        let lhs = a.mul(&b).unwrap().mul(&c).unwrap();
        let rhs = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.max_deviation(&rhs).unwrap() < 1e-9);
    }

    #[test]
    fn trace_is_cyclic(d in 2u32..=5, m in 1usize..=4, s in any::<[u64; 2]>()) {
        let (a, b) = (element(s[0], d, m), element(s[1], d, m));
        let ab = a.mul(&b).unwrap().trace().value();
        let ba = b.mul(&a).unwrap().trace().value();
        prop_assert!((ab - ba).norm() < 1e-9);
    }

    #[test]
    fn adjoint_reverses_products(d in 2u32..=4, m in 1usize..=3, s in any::<[u64; 2]>()) {
        let (a, b) = (element(s[0], d, m), element(s[1], d, m));
        let lhs = a.mul(&b).unwrap().adjoint();
        let rhs = b.adjoint().mul(&a.adjoint()).unwrap();
        prop_assert!(lhs.max_deviation(&rhs).unwrap() < 1e-9);
    }

    #[test]
    fn representation_is_a_star_homomorphism(d in 2u32..=4, m in 1usize..=3, s in any::<[u64; 2]>()) {
        let cfg = RepConfig::new(d, m).unwrap();
        let (a, b) = (element(s[0], d, m), element(s[1], d, m));
        let (ra, rb) = (represent(&a, &cfg).unwrap(), represent(&b, &cfg).unwrap());
        let prod = represent(&a.mul(&b).unwrap(), &cfg).unwrap();
        prop_assert!(prod.max_abs_diff(&ra.mul(&rb).unwrap()).unwrap() < 1e-9);
        let star = represent(&a.adjoint(), &cfg).unwrap();
        prop_assert!(star.max_abs_diff(&ra.adjoint()).unwrap() < 1e-9);
    }

    #[test]
    fn braid_output_is_maximally_entangled(d in 2u32..=5, i1 in 0u32..5, i2 in 0u32..5) {
        let (i1, i2) = (i1 % d, i2 % d);
        let b = braid_generator(1, 1, &RepConfig::new(d, 2).unwrap()).unwrap();
        let v = StateVector::basis(d, 2, &[i1, i2]).unwrap();
        let out = StateVector::new(d, 2, b.apply(&v.amplitudes).unwrap()).unwrap();
        let spec = schmidt_spectrum(&out, 1, 1e-9).unwrap();
        let flat = 1.0 / (d as f64).sqrt();
        prop_assert_eq!(spec.iter().filter(|x| **x > 1e-9).count(), d as usize);
        for x in spec.iter().take(d as usize) {
            prop_assert!((x - flat).abs() < 1e-9);
        }
    }

    #[test]
    fn state_amplitudes_survive_pair_encoding(d in 2u32..=4, re in prop::collection::vec(-1.0f64..1.0, 16)) {
        let n = (d * d) as usize;
        let amps: Vec<C64> = (0..n).map(|i| C64::new(re[i % 16], re[(i + 5) % 16])).collect();
        let s = StateVector::new(d, 2, amps).unwrap();
        let back = StateVector::from_pairs(d, 2, &s.to_pairs()).unwrap();
        prop_assert_eq!(back.amplitudes, s.amplitudes);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn every_rule_preserves_evaluation(seed in any::<u64>(), d in 2u32..=3, r in 0usize..Rule::ALL.len()) {
        let rule = Rule::ALL[r];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (dg, loc) = sample::planted_site(&mut rng, d, rule);
        let (after, step) = apply_rule(&dg, rule, loc).unwrap();
        prop_assert_eq!(step.rule, rule);
        let dev = evaluate(&dg).unwrap().max_abs_diff(&evaluate(&after).unwrap()).unwrap();
        prop_assert!(dev < 1e-9, "{} at {:?} on {}: {}", rule.name(), loc, dg, dev);
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>(), d in 2u32..=5, r in 0usize..Rule::ALL.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dg = sample::planted(&mut rng, d, Rule::ALL[r]);
        prop_assert_eq!(parse(&serialize(&dg)).unwrap(), dg);
    }
}

#[test]
fn every_rule_sound_on_one_hundred_sites_each() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 3] {
        for rule in Rule::ALL {
            for _ in 0..100 {
                let (dg, loc) = sample::planted_site(&mut rng, d, rule);
                let (after, _) = apply_rule(&dg, rule, loc).unwrap();
                let dev = evaluate(&dg)
                    .unwrap()
                    .max_abs_diff(&evaluate(&after).unwrap())
                    .unwrap();
                assert!(dev < 1e-9, "{} d={d}: {dev}", rule.name());
            }
        }
    }
}
