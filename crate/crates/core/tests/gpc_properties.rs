use gpc_core::epc::{distance_bound, EpcShape, LinearCode};
use gpc_core::field::{Field, FieldElement};
use gpc_core::gpc::{
    decodable_profile, decode_iterative, decode_rows, min_weight_codeword, Encoder, ErasurePattern, GpcError,
    GpcParams, SymbolArray,
};
use gpc_core::oracle::{correctable, random_pattern};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random valid code with `m <= 6`, `n <= 7`, `t <= 3`, over GF(8).
fn params_from_seed(seed: u64) -> GpcParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = Field::with_default_modulus(3).unwrap();
    loop {
        let m = rng.gen_range(2..=6);
        let n = rng.gen_range(3..=7);
        let t = rng.gen_range(1..=3usize.min(m).min(n - 1));
        let mut cuts: Vec<usize> = (1..m).collect();
        cuts.shuffle(&mut rng);
        let mut cuts: Vec<usize> = cuts.into_iter().take(t - 1).collect();
        cuts.sort_unstable();
        cuts.insert(0, 0);
        cuts.push(m);
        let s: Vec<usize> = cuts.windows(2).map(|w| w[1] - w[0]).collect();
        let mut u: Vec<usize> = (1..n).collect();
        u.shuffle(&mut rng);
        let mut u: Vec<usize> = u.into_iter().take(t).collect();
        u.sort_unstable();
        let last = s[t - 1];
        let k = rng.gen_range(m + 1 - last..=m);
        if let Ok(p) = GpcParams::new(m, n, k, s, u, field.clone()) {
            return p;
        }
    }
}

fn random_codeword(p: &GpcParams, rng: &mut impl Rng) -> SymbolArray {
    let data: Vec<FieldElement> = (0..p.dimension())
        .map(|_| FieldElement(rng.gen_range(0..p.field().size() as u64)))
        .collect();
    Encoder::new(p).encode(&data).unwrap()
}

fn erased(p: &GpcParams, c: &SymbolArray, pattern: &ErasurePattern) -> SymbolArray {
    assert_eq!((pattern.m(), pattern.n()), (p.m(), p.n()));
    let mut r = c.clone();
    r.apply_erasures(pattern);
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn encoding_is_systematic_and_lands_in_the_code(seed in any::<u64>()) {
        let p = params_from_seed(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 1);
        let enc = Encoder::new(&p);
        let data: Vec<FieldElement> = (0..p.dimension())
            .map(|_| FieldElement(rng.gen_range(0..8)))
            .collect();
        let c = enc.encode(&data).unwrap();
        prop_assert!(p.is_member(&c).unwrap());
        prop_assert_eq!(enc.extract(&c).unwrap(), data);
        let lc = LinearCode::from_gpc(&p);
        prop_assert!(lc.is_codeword(c.values()));
        prop_assert_eq!(lc.dimension(), p.dimension());
    }

    #[test]
    fn row_decoder_matches_its_predicate_and_the_oracle(seed in any::<u64>()) {
        let p = params_from_seed(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 2);
        let c = random_codeword(&p, &mut rng);
        let h = p.full_parity_matrix();
        for _ in 0..10 {
            let pattern = random_pattern(p.m(), p.n(), p.length(), &mut rng);
            let r = erased(&p, &c, &pattern);
            let predicted = decodable_profile(&p, &pattern.profile());
            match decode_rows(&p, &r) {
                Ok(out) => {
                    prop_assert!(predicted);
                    prop_assert_eq!(&out, &c);
                    prop_assert!(correctable(p.field(), &h, &pattern.flat()));
                }
                Err(e) => {
                    prop_assert!(!predicted);
                    let is_uncorrectable = matches!(e, GpcError::Uncorrectable { .. });
                    prop_assert!(is_uncorrectable);
                }
            }
        }
    }

    #[test]
    fn fewer_than_d_erasures_always_decode_by_rows(seed in any::<u64>()) {
        let p = params_from_seed(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 3);
        let c = random_codeword(&p, &mut rng);
        let d = p.min_distance();
        for _ in 0..10 {
            let w = rng.gen_range(0..d.min(p.length() + 1));
            let flat = rand::seq::index::sample(&mut rng, p.length(), w).into_vec();
            let pattern = ErasurePattern::from_flat(p.m(), p.n(), &flat);
            prop_assert!(decodable_profile(&p, &pattern.profile()), "{:?}", pattern);
            prop_assert_eq!(decode_rows(&p, &erased(&p, &c, &pattern)).unwrap(), c.clone());
        }
    }

    #[test]
    fn iterative_decoding_is_sound(seed in any::<u64>()) {
        let p = params_from_seed(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 4);
        let c = random_codeword(&p, &mut rng);
        let h = p.full_parity_matrix();
        for _ in 0..10 {
            let pattern = random_pattern(p.m(), p.n(), p.length(), &mut rng);
            let r = erased(&p, &c, &pattern);
            let rows_ok = decode_rows(&p, &r).is_ok();
            match decode_iterative(&p, &r) {
                Ok(out) => {
                    prop_assert_eq!(&out, &c);
                    prop_assert!(correctable(p.field(), &h, &pattern.flat()));
                }
                Err(GpcError::Stalled { remaining, partial }) => {
                    prop_assert!(!rows_ok);
                    prop_assert!(!remaining.is_empty());
                    for (i, (&x, &y)) in partial.values().iter().zip(c.values()).enumerate() {
                        let pos = (i / p.n(), i % p.n());
                        prop_assert!(remaining.contains(&pos) || x == y);
                    }
                }
                Err(e) => prop_assert!(false, "unexpected error {}", e),
            }
        }
    }

    #[test]
    fn transposed_code_holds_the_transposed_arrays(seed in any::<u64>()) {
        let p = params_from_seed(seed);
        prop_assume!(p.k() < p.m());
        let t = p.transpose().unwrap();
        prop_assert_eq!(t.transpose().unwrap(), p.clone());
        prop_assert_eq!(t.dimension(), p.dimension());
        prop_assert_eq!(t.min_distance(), p.min_distance());
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 5);
        for _ in 0..3 {
            let c = random_codeword(&p, &mut rng);
            prop_assert!(t.is_member(&c.transpose()).unwrap());
        }
    }

    #[test]
    fn minimum_weight_arrays_exist_at_every_level(seed in any::<u64>()) {
        let p = params_from_seed(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 6);
        for level in 0..p.t() {
            let mut rows: Vec<usize> = (0..p.m()).collect();
            rows.shuffle(&mut rng);
            rows.truncate(p.s_hat(level + 1) + 1);
            let mut cols: Vec<usize> = (0..p.n()).collect();
            cols.shuffle(&mut rng);
            cols.truncate(p.u()[level] + 1);
            let c = min_weight_codeword(&p, level, &rows, &cols).unwrap();
            prop_assert!(p.is_member(&c).unwrap());
            let weight = c.values().iter().filter(|x| !x.is_zero()).count();
            prop_assert_eq!(weight, rows.len() * cols.len());
            prop_assert!(weight >= p.min_distance());
        }
    }

    #[test]
    fn gpc_distance_respects_the_extended_product_bound(seed in any::<u64>()) {
        let p = params_from_seed(seed);
        prop_assume!(p.k() < p.m());
        let (v, h) = (p.m() - p.k(), p.u()[0]);
        let product_payload = (p.m() - v) * (p.n() - h);
        let g = product_payload - p.dimension();
        let b = distance_bound(&EpcShape::new(p.m(), v, p.n(), h, g).unwrap()).unwrap();
        prop_assert!(p.min_distance() <= b.bound, "{} > {}", p.min_distance(), b.bound);
    }

    #[test]
    fn correctability_is_monotone(seed in any::<u64>()) {
        let p = params_from_seed(seed);
        let h = p.full_parity_matrix();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 7);
        let pattern = random_pattern(p.m(), p.n(), p.length(), &mut rng).flat();
        if correctable(p.field(), &h, &pattern) {
            for drop in 0..pattern.len() {
                let mut sub = pattern.clone();
                sub.remove(drop);
                prop_assert!(correctable(p.field(), &h, &sub));
            }
        }
    }
}

#[test]
fn full_parity_matrix_kills_exactly_the_members() {
    let p = params_from_seed(11);
    let h = p.full_parity_matrix();
    let f = p.field();
    let basis = h.null_space(f);
    assert_eq!(basis.len(), p.dimension());
    for v in basis {
        let arr = SymbolArray::from_values(p.m(), p.n(), v).unwrap();
        assert!(p.is_member(&arr).unwrap());
    }
}
