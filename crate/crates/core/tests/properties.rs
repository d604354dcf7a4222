mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use ratdense::density::{self, brute_force_slice, check_corollary, element_densities, lift_chain, slice_mass};
use ratdense::measures::max_entropy;
use ratdense::sequential::{cesaro_partials, sequential_density};
use ratdense::{combinatorial, DensityMode, Dfa, Measure, MeasureSequence, Monoid, Sft};

const AB: [char; 2] = ['a', 'b'];
const ABC: [char; 3] = ['a', 'b', 'c'];

fn dfa(re: &Re, alphabet: &[char]) -> Dfa {
    Dfa::parse_regex(&re.render(), alphabet).unwrap()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn measure(seed: u64, alphabet: &[char]) -> Measure {
    let mut r = rng(seed);
    if seed % 2 == 0 {
        random_bernoulli(&mut r, alphabet)
    } else {
        random_markov(&mut r, alphabet)
    }
}

fn sft_strategy() -> impl Strategy<Value = Sft> {
    proptest::collection::vec(proptest::collection::vec(0usize..3, 2..=3), 0..4).prop_filter_map("empty or reducible", |blocks| {
        let words: Vec<String> = blocks.iter().map(|b| b.iter().map(|&i| ABC[i]).collect()).collect();
        let refs: Vec<&str> = words.iter().map(String::as_str).collect();
        Sft::from_forbidden_blocks(&ABC, &refs).ok().filter(Sft::is_irreducible)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn regex_matches_reference(re in re_strategy(AB.to_vec())) {
        let d = dfa(&re, &AB);
        for w in words_upto(&AB, 8) {
            prop_assert_eq!(d.accepts(&w).unwrap(), re.matches(&w), "{} on {:?}", re.render(), w);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn minimization_is_a_fixpoint(re in re_strategy(ABC.to_vec())) {
        let d = dfa(&re, &ABC);
        prop_assert_eq!(d.minimize(), d.clone());
        let reordered = d.with_alphabet_order(&['c', 'a', 'b']).unwrap();
        prop_assert_eq!(reordered.with_alphabet_order(&ABC).unwrap(), d);
    }

    #[test]
    fn de_morgan(x in re_strategy(AB.to_vec()), y in re_strategy(AB.to_vec())) {
        let (dx, dy) = (dfa(&x, &AB), dfa(&y, &AB));
        let lhs = dx.union(&dy).unwrap().complement();
        let rhs = dx.complement().intersect(&dy.complement()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(dx.intersect(&dy).unwrap().is_subset_of(&dx).unwrap());
        for w in words_upto(&AB, 5) {
            prop_assert_ne!(dx.accepts(&w).unwrap(), dx.complement().accepts(&w).unwrap());
        }
    }

    #[test]
    fn transition_monoid_is_a_morphism(re in re_strategy(AB.to_vec()), seed in any::<u64>()) {
        let d = dfa(&re, &AB);
        let m = Monoid::transition_monoid(&d).unwrap();
        let words = words_upto(&AB, 4);
        let mut r = rng(seed);
        for _ in 0..20 {
            use rand::Rng;
            let u = &words[r.gen_range(0..words.len())];
            let v = &words[r.gen_range(0..words.len())];
            let idx = |w: &[char]| w.iter().map(|c| d.symbol_index(*c).unwrap()).collect::<Vec<_>>();
            let uv: Vec<char> = u.iter().chain(v).copied().collect();
            let (eu, ev, euv) = (m.element_of(&idx(u)), m.element_of(&idx(v)), m.element_of(&idx(&uv)));
            prop_assert_eq!(m.mult(eu, ev), euv);
            let q = m.transformation(euv)[d.initial()] as usize;
            prop_assert_eq!(d.is_terminal(q), d.accepts(&uv).unwrap());
        }
    }

    #[test]
    fn aperiodic_languages_have_strong_densities(re in re_strategy(AB.to_vec()), seed in any::<u64>()) {
        let d = dfa(&re, &AB);
        let mu = random_bernoulli(&mut rng(seed), &AB);
        let r = density::density(&d, &mu).unwrap();
        if r.aperiodic_language == Some(true) {
            prop_assert_eq!(r.mode, DensityMode::Strong, "{}", re.render());
        }
    }

    #[test]
    fn slice_mass_matches_enumeration(re in re_strategy(AB.to_vec()), seed in any::<u64>()) {
        let d = dfa(&re, &AB);
        let mu = measure(seed, &AB);
        let chain = lift_chain(&d, &mu).unwrap();
        for n in 0..=10 {
            let expect = brute_force_slice(&d, &mu, n).unwrap();
            prop_assert!((slice_mass(&chain, n) - expect).abs() <= 1e-10);
        }
    }

    #[test]
    fn kolmogorov_consistency(seed in any::<u64>()) {
        let mu = measure(seed, &ABC);
        for w in words_upto(&ABC, 3) {
            let whole = mu.word_mass(&w).unwrap();
            let right: f64 = ABC.iter().map(|&a| mu.word_mass(&[w.clone(), vec![a]].concat()).unwrap()).sum();
            prop_assert!((whole - right).abs() <= 1e-12);
            if mu.is_invariant() {
                let left: f64 = ABC.iter().map(|&a| mu.word_mass(&[vec![a], w.clone()].concat()).unwrap()).sum();
                prop_assert!((whole - left).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn density_is_additive_and_monotone(x in re_strategy(AB.to_vec()), y in re_strategy(AB.to_vec()), seed in any::<u64>()) {
        let mu = measure(seed, &AB);
        let dx = dfa(&x, &AB);
        let dy = dfa(&y, &AB).difference(&dx).unwrap();
        prop_assert!(dx.intersect(&dy).unwrap().is_empty());
        let delta = |d: &Dfa| density::density(d, &mu).unwrap().value;
        let (a, b, u) = (delta(&dx), delta(&dy), delta(&dx.union(&dy).unwrap()));
        prop_assert!((u - a - b).abs() <= 1e-9, "{} + {} vs {}", a, b, u);
        for v in [a, b, u] {
            prop_assert!((0.0..=1.0).contains(&v));
        }
        prop_assert!(a <= u + 1e-12 && b <= u + 1e-12);
        prop_assert_eq!(delta(&Dfa::universal(&AB).unwrap()), 1.0);
        prop_assert_eq!(delta(&Dfa::empty(&AB).unwrap()), 0.0);
    }

    #[test]
    fn element_densities_partition_unity(re in re_strategy(AB.to_vec()), seed in any::<u64>()) {
        let d = dfa(&re, &AB);
        let m = Monoid::transition_monoid(&d).unwrap();
        let mu = random_bernoulli(&mut rng(seed), &AB);
        let nu = element_densities(&m, &mu).unwrap();
        prop_assert!((nu.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        let report = check_corollary(&m, &m.minimal_ideal(), &nu);
        prop_assert!(report.passed(), "{}: {:?}", re.render(), report.violations);
    }

    #[test]
    fn maximal_entropy_measure_is_invariant(x in sft_strategy()) {
        let me = max_entropy(&x).unwrap();
        prop_assert!(me.measure.invariance_defect() <= 1e-10);
        let pi: f64 = me.measure.initial().iter().sum();
        prop_assert!((pi - 1.0).abs() <= 1e-9);
        // word masses of each length sum to one and vanish off L(X)
        let mu = Measure::Markov(me.measure.clone());
        let lang = x.language_dfa();
        for n in 1..=4 {
            let total: f64 = all_words(&ABC, n).iter().map(|w| {
                let m = mu.word_mass(w).unwrap();
                if !lang.accepts(w).unwrap() {
                    assert!(m == 0.0);
                }
                m
            }).sum();
            prop_assert!((total - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn block_presentations_preserve_word_counts(x in sft_strategy(), k in 1usize..=3) {
        let b = x.k_block_presentation(k).unwrap();
        for n in 1..=6 {
            prop_assert_eq!(b.count_words(n), x.count_words(n + k - 1));
        }
    }

    #[test]
    fn product_counts_match_enumeration(re in re_strategy(ABC.to_vec()), x in sft_strategy()) {
        let d = dfa(&re, &ABC);
        let r = combinatorial::combinatorial_density(&d, &x, 8).unwrap();
        let lang = x.language_dfa();
        for n in 0..8 {
            let (mut both, mut all) = (0u64, 0u64);
            for w in all_words(&ABC, n) {
                if lang.accepts(&w).unwrap() {
                    all += 1;
                    both += u64::from(d.accepts(&w).unwrap());
                }
            }
            prop_assert_eq!(r.counts[n].clone(), both.into());
            prop_assert_eq!(r.totals[n].clone(), all.into());
            prop_assert!((0.0..=1.0).contains(&r.ratios[n]));
        }
    }

    #[test]
    fn cesaro_partials_are_reproducible(re in re_strategy(AB.to_vec()), c in 0.1f64..2.0, e in -2.0f64..0.0) {
        let d = dfa(&re, &AB);
        let seq = MeasureSequence::power(&AB, c, e).unwrap();
        let r = sequential_density(&seq, &d, 300, &[300]).unwrap();
        let mut sum = 0.0;
        for t in &r.terms {
            sum += t;
        }
        prop_assert_eq!((sum / 300.0).to_bits(), r.summary.estimate.to_bits());
        prop_assert_eq!(cesaro_partials(&r.terms)[299].to_bits(), r.summary.checkpoints[0].1.to_bits());
    }
}
