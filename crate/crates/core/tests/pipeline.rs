use std::collections::BTreeMap;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparse_mds::support::counterexample_p;
use sparse_mds::{
    construct_balanced_support, instantiate, DecodeResult, FieldChoice, FieldElement, GeneratorMatrix,
    MdsVerdict, PrimeField, SupportMatrix,
};

fn balanced_code(n: usize, k: usize, seed: u64) -> GeneratorMatrix {
    let (m, _) = construct_balanced_support(n, k).unwrap();
    instantiate(&m, FieldChoice::AUTO, seed, 64).unwrap().generator
}

fn random_message(g: &GeneratorMatrix, rng: &mut ChaCha8Rng) -> Vec<FieldElement> {
    let f = g.field();
    (0..g.k()).map(|_| f.elem(rng.gen_range(0..f.modulus()))).collect()
}

#[test]
fn instantiation_succeeds_for_many_seeds() {
    for n in 1..=10 {
        for k in 1..=n {
            let (m, _) = construct_balanced_support(n, k).unwrap();
            for seed in 0..8 {
                let inst = instantiate(&m, FieldChoice::AUTO, seed, 64).unwrap();
                assert_eq!(inst.generator.support_of(), m, "({n},{k}) seed {seed}");
                assert!(inst.generator.verify_mds().unwrap().is_mds());
            }
        }
    }
}

#[test]
fn error_decoding_is_sound_within_radius() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for n in 3..=10 {
        for k in 1..=n {
            let t = (n - k) / 2;
            if t == 0 {
                continue;
            }
            let g = balanced_code(n, k, 1);
            let f = g.field();
            let supports: Vec<Vec<usize>> = if n <= 8 {
                (1..=t).flat_map(|s| (0..n).combinations(s)).collect()
            } else {
                (0..200)
                    .map(|_| {
                        let s = rng.gen_range(1..=t);
                        let mut v = rand::seq::index::sample(&mut rng, n, s).into_vec();
                        v.sort_unstable();
                        v
                    })
                    .collect()
            };
            for support in supports {
                let x = random_message(&g, &mut rng);
                let mut y = g.encode(&x).unwrap();
                for &p in &support {
                    y[p] = y[p] + f.elem(rng.gen_range(1..f.modulus()));
                }
                assert_eq!(
                    g.error_decode(&y).unwrap(),
                    DecodeResult::Decoded {
                        message: x,
                        error_positions: support.clone(),
                    },
                    "({n},{k}) errors at {support:?}"
                );
            }
        }
    }
}

#[test]
fn any_k_positions_recover_the_message() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 1..=8 {
        for k in 1..=n {
            let g = balanced_code(n, k, 3);
            let x = random_message(&g, &mut rng);
            let c = g.encode(&x).unwrap();
            for subset in (0..n).combinations(k) {
                let known: BTreeMap<usize, FieldElement> = subset.iter().map(|&j| (j, c[j])).collect();
                assert_eq!(g.erasure_decode(&known).unwrap(), x, "({n},{k}) {subset:?}");
            }
        }
    }
}

#[test]
fn support_without_hall_condition_never_carries_mds() {
    // toy 2x3 support: columns 1 and 3 share the single row, so the minor on
    // them vanishes for every assignment over every field tried
    let toy = SupportMatrix::from_strs(&["101", "010"]).unwrap();
    assert!(!toy.check_hall_columns().unwrap());
    for q in [2u64, 3, 5, 7] {
        let f = PrimeField::new(q).unwrap();
        for (a, b, c) in (1..q).cartesian_product(1..q).cartesian_product(1..q).map(|((a, b), c)| (a, b, c)) {
            let g = GeneratorMatrix::from_rows(f, &[[a, 0, b], [0, c, 0]]).unwrap();
            assert_eq!(g.verify_mds().unwrap(), MdsVerdict::Singular(vec![0, 2]));
        }
    }

    // the 5x8 counterexample: random nonzero fillings over GF(37) are never MDS
    let p = counterexample_p();
    let f = PrimeField::new(37).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let rows: Vec<Vec<u64>> = (0..5)
            .map(|i| (0..8).map(|j| if p.get(i, j) { rng.gen_range(1..37) } else { 0 }).collect())
            .collect();
        let g = GeneratorMatrix::from_rows(f, &rows).unwrap();
        assert!(!g.verify_mds().unwrap().is_mds());
    }
}

#[test]
fn distance_meets_singleton_bound() {
    for n in 2..=9 {
        for k in 1..=n {
            let g = balanced_code(n, k, 5);
            let q = g.field().modulus();
            if q.checked_pow(k as u32).is_some_and(|t| t <= 1_000_000) {
                assert_eq!(g.minimum_distance_bruteforce().unwrap(), n - k + 1, "({n},{k})");
            }
        }
    }
}
