use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use rowmotion_core::combinatorial::{
    combinatorial_orbits, rowmotion_antichain, rowmotion_power_is_identity, st_word_combinatorial, st_word_from_sums,
};
use rowmotion_core::realm::{GenericSample, Poly, RatFun, RatFunRealm, TropicalRealm};
use rowmotion_core::rng::rng_from_seed;
use rowmotion_core::stword::check_rotation;
use rowmotion_core::transfer::{polytope_membership, Polytope};
use rowmotion_core::{
    antichain_rowmotion, iterate, product_of_chains, st_word, transfer, Dynamics, Labeling, Mode, TransferKind,
};

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn antichain_counts_are_binomial() {
    for a in 1..=4 {
        for b in 1..=4 {
            let rect = product_of_chains(a, b).unwrap();
            assert_eq!(rect.poset().antichains().len() as u64, binomial((a + b) as u64, a as u64), "{a}x{b}");
        }
    }
}

#[test]
fn rowmotion_is_a_bijection_of_period_dividing_a_plus_b() {
    for a in 1..=5 {
        for b in 1..=5 {
            let rect = product_of_chains(a, b).unwrap();
            let p = rect.poset();
            let all = p.antichains();
            let mut images: Vec<_> = all.iter().map(|x| rowmotion_antichain(p, x)).collect();
            images.sort();
            let mut sorted = all.clone();
            sorted.sort();
            assert_eq!(images, sorted, "{a}x{b}");
            assert!(rowmotion_power_is_identity(p, a + b), "{a}x{b}");
        }
    }
}

#[test]
fn combinatorial_words_rotate_and_match_sums() {
    for a in 1..=4 {
        for b in 1..=4 {
            let rect = product_of_chains(a, b).unwrap();
            let p = rect.poset();
            for x in p.antichains() {
                let w = st_word_combinatorial(rect.grid(), &x);
                let sums = st_word_from_sums(rect.grid(), &x);
                assert_eq!(w.iter().map(|&v| i64::from(v)).collect::<Vec<_>>(), sums);
                let mut rotated = w.clone();
                rotated.rotate_right(1);
                assert_eq!(st_word_combinatorial(rect.grid(), &rowmotion_antichain(p, &x)), rotated);
            }
        }
    }
}

#[test]
fn combinatorial_orbit_averages() {
    for a in 1..=4 {
        for b in 1..=4 {
            let want_card = BigRational::new(BigInt::from(a * b), BigInt::from(a + b));
            let want_fiber = BigRational::new(BigInt::from(b), BigInt::from(a + b));
            let want_neg = BigRational::new(BigInt::from(a), BigInt::from(a + b));
            for o in combinatorial_orbits(a, b).unwrap() {
                assert_eq!(o.cardinality_avg, want_card);
                for (name, v) in &o.fiber_avgs {
                    let want = if name.starts_with('p') { &want_fiber } else { &want_neg };
                    assert_eq!(v, want, "{a}x{b} {name}");
                }
            }
        }
    }
}

#[test]
fn tropical_rowmotion_restricts_to_combinatorial() {
    let t = TropicalRealm::default();
    for a in 1..=3 {
        for b in 1..=3 {
            let rect = product_of_chains(a, b).unwrap();
            let p = rect.poset();
            for x in p.antichains() {
                let indicator = |set: &rowmotion_core::Antichain| -> Labeling<BigRational> {
                    set.indicator(p.len()).into_iter().map(|v| BigRational::from_integer(i32::from(v).into())).collect()
                };
                let want = indicator(&rowmotion_antichain(p, &x));
                for mode in [Mode::Transfer, Mode::Toggles] {
                    assert_eq!(antichain_rowmotion(&t, p, &indicator(&x), mode).unwrap(), want);
                }
            }
        }
    }
}

// max-plus evaluation of a subtraction-free polynomial, C at 1
fn tropicalize(poly: &Poly, values: &[BigRational]) -> BigRational {
    poly.terms()
        .iter()
        .map(|(m, c)| {
            assert!(c.is_positive(), "negative coefficient");
            m.exponents().iter().zip(values).map(|(&e, v)| v * BigInt::from(e)).sum::<BigRational>()
        })
        .max()
        .unwrap_or_else(BigRational::zero)
}

fn tropicalize_ratfun(f: &RatFun, values: &[BigRational]) -> BigRational {
    tropicalize(f.numerator(), values) - tropicalize(f.denominator(), values)
}

#[test]
fn birational_tropicalizes_to_piecewise_linear() {
    let t = TropicalRealm::default();
    for (a, b) in [(1, 1), (1, 3), (2, 2), (2, 3), (3, 2)] {
        let rect = product_of_chains(a, b).unwrap();
        let p = rect.poset();
        let realm = RatFunRealm::for_poset(p);
        let g = realm.generic_labeling(p);
        let orbit = iterate(&realm, p, &g, a + b, Dynamics::Antichain(Mode::Transfer)).unwrap();
        // variable k + 1 labels the k-th element of the linear extension
        let mut rng = rng_from_seed(a as u64 * 10 + b as u64);
        for _ in 0..20 {
            let h = t.sample_labeling(p, &mut rng);
            let mut values = vec![BigRational::one(); p.len() + 1];
            for (k, &x) in p.linear_extension().iter().enumerate() {
                values[k + 1] = h[x].clone();
            }
            let mut pl = h.clone();
            for (m, symbolic) in orbit.labelings.iter().enumerate() {
                let evaluated: Labeling<BigRational> =
                    symbolic.iter().map(|f| tropicalize_ratfun(f, &values)).collect();
                assert_eq!(evaluated, pl, "{a}x{b} step {m}");
                pl = antichain_rowmotion(&t, p, &pl, Mode::Transfer).unwrap();
            }
        }
    }
}

fn shape_and_seed() -> impl Strategy<Value = (usize, usize, u64)> {
    (1usize..=3, 1usize..=3, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tropical_modes_agree_and_words_rotate((a, b, seed) in shape_and_seed()) {
        let rect = product_of_chains(a, b).unwrap();
        let p = rect.poset();
        let t = TropicalRealm::default();
        let g = t.sample_labeling(p, &mut rng_from_seed(seed));
        let via_transfer = antichain_rowmotion(&t, p, &g, Mode::Transfer).unwrap();
        let via_toggles = antichain_rowmotion(&t, p, &g, Mode::Toggles).unwrap();
        prop_assert_eq!(&via_transfer, &via_toggles);
        prop_assert!(check_rotation(&t, rect.grid(), &g, &via_transfer).unwrap().holds());
    }

    #[test]
    fn tropical_transfer_maps_invert((a, b, seed) in shape_and_seed()) {
        let rect = product_of_chains(a, b).unwrap();
        let p = rect.poset();
        let t = TropicalRealm::default();
        let g = t.sample_labeling(p, &mut rng_from_seed(seed));
        for (f, h) in [
            (TransferKind::Nabla, TransferKind::NablaInv),
            (TransferKind::Delta, TransferKind::DeltaInv),
            (TransferKind::Theta, TransferKind::Theta),
        ] {
            let there = transfer(f, &t, p, &g).unwrap();
            prop_assert_eq!(&transfer(h, &t, p, &there).unwrap(), &g);
            let back = transfer(h, &t, p, &g).unwrap();
            prop_assert_eq!(&transfer(f, &t, p, &back).unwrap(), &g);
        }
    }

    #[test]
    fn tropical_period_divides_a_plus_b((a, b, seed) in shape_and_seed()) {
        let rect = product_of_chains(a, b).unwrap();
        let p = rect.poset();
        let t = TropicalRealm::default();
        let g = t.sample_labeling(p, &mut rng_from_seed(seed));
        let orbit = iterate(&t, p, &g, a + b, Dynamics::Antichain(Mode::Transfer)).unwrap();
        let period = orbit.period.expect("no return");
        prop_assert_eq!((a + b) % period, 0);
        // every word entry averages b/(a+b) over a+b steps
        let mut h = g.clone();
        let mut sums = vec![BigRational::zero(); a + b];
        for _ in 0..a + b {
            for (s, v) in sums.iter_mut().zip(st_word(&t, rect.grid(), &h).unwrap().entries()) {
                *s += v;
            }
            h = antichain_rowmotion(&t, p, &h, Mode::Transfer).unwrap();
        }
        let n = BigInt::from(a + b);
        let want = BigRational::new(BigInt::from(b), n.clone());
        for s in &sums {
            prop_assert_eq!(s / BigRational::from_integer(n.clone()), want.clone());
        }
    }

    #[test]
    fn chain_polytope_is_preserved((a, b, seed) in shape_and_seed()) {
        let rect = product_of_chains(a, b).unwrap();
        let p = rect.poset();
        let t = TropicalRealm::default();
        let g = t.sample_chain_polytope_point(p, &mut rng_from_seed(seed));
        prop_assert!(polytope_membership(Polytope::Chain, p, &g));
        let h = antichain_rowmotion(&t, p, &g, Mode::Transfer).unwrap();
        prop_assert!(polytope_membership(Polytope::Chain, p, &h));
    }

    #[test]
    fn order_rowmotion_also_returns((a, b, seed) in shape_and_seed()) {
        let rect = product_of_chains(a, b).unwrap();
        let p = rect.poset();
        let t = TropicalRealm::default();
        let g = t.sample_labeling(p, &mut rng_from_seed(seed));
        let orbit = iterate(&t, p, &g, a + b, Dynamics::Order).unwrap();
        prop_assert!(orbit.period.is_some_and(|k| (a + b) % k == 0));
    }
}
