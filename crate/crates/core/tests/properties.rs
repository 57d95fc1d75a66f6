use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hullcensus::census::{self, Method};
use hullcensus::classify::{aut_order, canonical_form};
use hullcensus::gf::{Code, Field, Matrix};
use hullcensus::qcomb::{gaussian_binomial, gaussian_identity_suite};

fn random_code(q: u32, n: usize, k: usize, entries: &[u8]) -> Code {
    let f = Field::of_order(q).unwrap();
    let data = entries.iter().take(k * n).map(|&x| x % q as u8).collect();
    Code::from_generator(&Matrix::new(f, k, n, data).unwrap())
}

fn code_strategy(q: u32) -> impl Strategy<Value = Code> {
    (1usize..=9)
        .prop_flat_map(|n| (Just(n), 0..=n))
        .prop_flat_map(move |(n, k)| (Just(n), Just(k), prop::collection::vec(any::<u8>(), k * n)))
        .prop_map(move |(n, k, e)| random_code(q, n, k, &e))
}

macro_rules! gram_vs_intersection {
    ($name:ident, $q:expr) => {
        proptest! {
            #![proptest_config(ProptestConfig::with_cases(1000))]
            #[test]
            fn $name(c in code_strategy($q)) {
                prop_assert_eq!(c.hull_dimension(), c.hull_dimension_by_intersection());
                let d = c.dual();
                prop_assert_eq!(d.dimension() + c.dimension(), c.length());
                prop_assert_eq!(&d.dual(), &c);
                prop_assert_eq!(d.hull_dimension(), c.hull_dimension());
            }
        }
    };
}

gram_vs_intersection!(hull_gram_rank_gf2, 2);
gram_vs_intersection!(hull_gram_rank_gf3, 3);
gram_vs_intersection!(hull_gram_rank_gf4, 4);
gram_vs_intersection!(hull_gram_rank_gf5, 5);

proptest! {
    #[test]
    fn spectrum_partitions_all_codes(q in prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9]), n in 1u32..=14, kk in 0u32..=7) {
        let k = kk.min(n / 2);
        let s = census::spectrum(n, k, q, Method::Sendrier).unwrap();
        prop_assert_eq!(s.total(), gaussian_binomial(n as u64, k as u64, q as u64));
        prop_assert!(s.validate().is_ok());
    }

    #[test]
    fn counts_are_symmetric_under_duality(q in prop::sample::select(vec![2u32, 3, 4, 5, 7]), n in 1u32..=14, k in 0u32..=14, l in 0u32..=7) {
        prop_assume!(k <= n && l <= k.min(n - k));
        prop_assert_eq!(
            census::sendrier_count(n, k, l, q).unwrap(),
            census::sendrier_count(n, n - k, l, q).unwrap()
        );
    }
}

#[test]
fn gaussian_identities_grid() {
    for q in [2u64, 3, 4, 5, 7, 8, 9] {
        for n in 1..=14 {
            for k in 0..n {
                assert!(
                    gaussian_identity_suite(n, k, q).unwrap(),
                    "q={q} n={n} k={k}"
                );
            }
        }
    }
}

/// Applies column signs (q = 3 only) then the permutation to a generator.
fn transform(c: &Code, rng: &mut ChaCha8Rng) -> Code {
    let g = c.generator();
    let f = g.field();
    let (k, n) = (g.rows(), g.cols());
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let signs: Vec<bool> = (0..n).map(|_| f.order() == 3 && rng.gen()).collect();
    let mut data = vec![0u8; k * n];
    for r in 0..k {
        for j in 0..n {
            let x = g.get(r, j);
            data[r * n + perm[j]] = if signs[j] { f.neg(x) } else { x };
        }
    }
    Code::from_generator(&Matrix::new(f, k, n, data).unwrap())
}

#[test]
fn canonical_form_is_a_class_function() {
    let params = [
        (2u32, 5usize, 2usize),
        (2, 6, 3),
        (2, 7, 3),
        (3, 4, 2),
        (3, 5, 2),
        (3, 6, 3),
    ];
    for (i, &(q, n, k)) in params.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed + i as u64);
        for _ in 0..500 {
            let entries: Vec<u8> = (0..k * n).map(|_| rng.gen()).collect();
            let c = random_code(q, n, k, &entries);
            let a = transform(&c, &mut rng);
            let b = transform(&c, &mut rng);
            let ca = canonical_form(&a).unwrap();
            assert_eq!(
                ca,
                canonical_form(&b).unwrap(),
                "q={q} n={n} k={k} code {c:?}"
            );
            // the canonical form is a member of the class and is fixed by canonicalization
            let cc = Code::from_generator(&ca);
            assert_eq!(canonical_form(&cc).unwrap(), ca);
            assert_eq!(cc.hull_dimension(), c.hull_dimension());
        }
        // automorphism order is also a class invariant
        for _ in 0..20 {
            let entries: Vec<u8> = (0..k * n).map(|_| rng.gen()).collect();
            let c = random_code(q, n, k, &entries);
            assert_eq!(
                aut_order(&c).unwrap(),
                aut_order(&transform(&c, &mut rng)).unwrap()
            );
        }
    }
}
