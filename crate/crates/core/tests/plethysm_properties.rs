use plethysm_core::partition::{partitions_of, partitions_with_max_len};
use plethysm_core::plethysm::{coefficient, decompose, evaluate, reduce, Inner, PlethysmQuery};
use plethysm_core::symfunc::oracle_plethysm;
use plethysm_core::Partition;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

#[test]
fn formula_matches_oracle() {
    for d in 2..=4u64 {
        for mu in partitions_of(d) {
            for k in 0..=6u64 {
                let truth = oracle_plethysm(&mu, k as u32, d as usize, Inner::Sym).unwrap();
                let got = decompose(&mu, k, Inner::Sym).unwrap();
                assert_eq!(got, truth, "μ=({mu}) k={k}");
            }
        }
    }
}

#[test]
fn formula_matches_oracle_in_degree_five_spots() {
    let mu = Partition::new(vec![3, 2]).unwrap();
    for k in 1..=3u64 {
        let truth = oracle_plethysm(&mu, k as u32, 5, Inner::Sym).unwrap();
        assert_eq!(decompose(&mu, k, Inner::Sym).unwrap(), truth, "k={k}");
    }
}

#[test]
fn evaluation_routes_agree() {
    for d in 2..=5u64 {
        for mu in partitions_of(d) {
            for k in 1..=3u64 {
                for lambda in partitions_with_max_len(d * k, d as usize) {
                    let e = evaluate(&PlethysmQuery::sym(mu.clone(), k, lambda).unwrap()).unwrap();
                    assert_eq!(e.uniform, e.split);
                    assert!(e.uniform >= 0.into());
                }
            }
        }
    }
}

fn random_partition(rng: &mut StdRng, total: u64, max_len: usize) -> Partition {
    let all = partitions_with_max_len(total, max_len);
    all.choose(rng).unwrap().clone()
}

#[test]
fn reduction_is_sound() {
    let mut rng = StdRng::seed_from_u64(99);
    let mut full_rows = 0;
    for _ in 0..200 {
        let d = rng.gen_range(1..=5u64);
        let mu = partitions_of(d).choose(&mut rng).unwrap().clone();
        let k = rng.gen_range(0..=5u64);
        // Favour λ with exactly d rows, where the reduction does something.
        let lambda = if rng.gen_bool(0.6) && k > 0 {
            let base = if d == 1 { k } else { rng.gen_range(1..=k) };
            let rest = random_partition(&mut rng, d * (k - base), d as usize - 1);
            let mut parts: Vec<u64> = rest.padded(d as usize).unwrap();
            parts.iter_mut().for_each(|x| *x += base);
            Partition::new(parts).unwrap()
        } else {
            random_partition(&mut rng, d * k, d as usize + 1)
        };
        let q = PlethysmQuery::sym(mu, k, lambda).unwrap();
        let r = reduce(&q);
        if r != q {
            full_rows += 1;
            assert!(r.lambda.len() < d as usize);
        }
        assert_eq!(reduce(&r), r);
        assert_eq!(coefficient(&q).unwrap(), coefficient(&r).unwrap(), "{q:?}");
    }
    assert!(full_rows > 50);
}

#[test]
fn exterior_powers_match_oracle() {
    for d in 1..=4u64 {
        for mu in partitions_of(d) {
            for k in 1..=4u64 {
                let n = (d * k).min(6) as usize;
                let truth = oracle_plethysm(&mu, k as u32, n, Inner::Wedge).unwrap();
                let twisted = if k % 2 == 0 { mu.clone() } else { mu.conjugate() };
                for lambda in partitions_with_max_len(d * k, d as usize) {
                    if lambda.part(0) as usize > n {
                        continue;
                    }
                    let sym = coefficient(&PlethysmQuery::sym(twisted.clone(), k, lambda.clone()).unwrap()).unwrap();
                    let wedge_q = PlethysmQuery::new(mu.clone(), k, lambda.conjugate(), Inner::Wedge).unwrap();
                    let wedge = coefficient(&wedge_q).unwrap();
                    let oracle = truth.get(&lambda.conjugate()).cloned().unwrap_or_default();
                    assert_eq!(sym, oracle, "μ=({mu}) k={k} λ=({lambda})");
                    assert_eq!(wedge, oracle);
                }
            }
        }
    }
}

#[test]
fn multiplicities_are_natural() {
    for d in 1..=5u64 {
        for mu in partitions_of(d) {
            for k in 0..=4u64 {
                for lambda in partitions_with_max_len(d * k, d as usize + 1) {
                    // `coefficient` rejects negative or fractional values.
                    coefficient(&PlethysmQuery::sym(mu.clone(), k, lambda).unwrap()).unwrap();
                }
            }
        }
    }
}
