mod common;

use common::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ratdense::density;
use ratdense::sequential::{sequential_density, sequential_term, Verdict};
use ratdense::{Dfa, Family, Measure, MeasureSequence};

const AB: [char; 2] = ['a', 'b'];

fn random_language(rng: &mut ChaCha8Rng) -> Dfa {
    Dfa::parse_regex(&random_regex(rng, &AB, 4).render(), &AB).unwrap()
}

#[test]
fn constant_sequences_reduce_to_density() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let l = random_language(&mut rng);
        let mu = random_bernoulli(&mut rng, &AB);
        let delta = density::density(&l, &mu).unwrap().value;
        let r = sequential_density(&MeasureSequence::constant(mu), &l, 4000, &[]).unwrap();
        assert_eq!(r.limit_density, Some(delta));
        assert!((r.summary.estimate - delta).abs() <= 5e-3, "{} vs {delta}", r.summary.estimate);
    }
}

#[test]
fn eventually_constant_sequences() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let l = random_language(&mut rng);
        let before = random_markov(&mut rng, &AB);
        let after = random_bernoulli(&mut rng, &AB);
        let delta = density::density(&l, &after).unwrap().value;
        let seq = MeasureSequence::eventually_constant(before, after, 100).unwrap();
        let r = sequential_density(&seq, &l, 10_000, &[]).unwrap();
        assert_eq!(r.limit_density, Some(delta));
        // the first 100 terms shift the average by at most 100 / N
        assert!((r.summary.estimate - delta).abs() <= 1e-2 + 1e-3);
    }
}

#[test]
fn convergent_bernoulli_sequence_with_positive_limit() {
    let limit = Measure::bernoulli(&[('a', 0.4), ('b', 0.6)]).unwrap();
    let seq = MeasureSequence::from_fn("p_n = 0.4 + 0.5/n", &AB, Some(limit.clone()), |n| {
        let p = 0.4 + 0.5 / n.max(1) as f64;
        Measure::bernoulli(&[('a', p), ('b', 1.0 - p)])
    });
    for re in ["(a|b)*a(a|b)*", "(a|b)*ab", "b*a(b|ab*a)*"] {
        let l = Dfa::parse_regex(re, &AB).unwrap();
        let delta = density::density(&l, &limit).unwrap().value;
        let r = sequential_density(&seq, &l, 100_000, &[]).unwrap();
        assert!((r.summary.estimate - delta).abs() <= 2e-3, "{re}: {} vs {delta}", r.summary.estimate);
        assert!(matches!(r.summary.verdict, Verdict::Converged(_)));
    }
}

#[test]
fn one_over_n_closed_form_cross_check() {
    let l = Dfa::parse_regex("(a|b)*a(a|b)*", &AB).unwrap();
    for (c, e) in [(1.0, -1.0), (2.0, -1.0), (1.0, -2.0), (1.0, -0.5)] {
        let seq = MeasureSequence::power(&AB, c, e).unwrap();
        for i in [1usize, 2, 10, 100, 1000] {
            let p = (c * (i as f64).powf(e)).clamp(0.0, 1.0);
            let closed = 1.0 - (1.0 - p).powi(i as i32);
            assert!((sequential_term(&seq, &l, i).unwrap() - closed).abs() <= 1e-12);
        }
    }
}

#[test]
fn window_family_regimes_jump() {
    let l = Dfa::parse_regex("a.*a|a", &['a', 'b', 'c']).unwrap();
    let seq = MeasureSequence::maxent(Family::Window);
    let r = sequential_density(&seq, &l, 17, &[4, 8, 16, 17]).unwrap();
    // terms by regime: n in [2,4) and [8,16) forbid a..b, [4,8) and 16 forbid a..a
    for n in 2..=16usize {
        let t = r.terms[n];
        if n.ilog2() % 2 == 0 {
            assert!(t.abs() < 1e-12, "n={n}: {t}");
        } else {
            assert!(t > 0.1, "n={n}: {t}");
        }
    }
    let u: Vec<f64> = r.summary.checkpoints.iter().map(|c| c.1).collect();
    assert!(u[1] < u[0] && u[2] > u[1] && u[3] < u[2], "{u:?}");
}
