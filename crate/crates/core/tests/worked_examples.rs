//! Worked orbits and words on small rectangles, checked value by value.

use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rowmotion_core::combinatorial::{
    combinatorial_orbits, complement, downward_saturation, minimal_elements, rowmotion_antichain, st_word_combinatorial,
};
use rowmotion_core::realm::{MatP, MatrixRealm, PrimeField, RatFun, RatFunRealm, TropicalRealm};
use rowmotion_core::stword::{check_rotation, expected_fiber_product, fiber_orbit_product, pl_orbit_stats, Fiber};
use rowmotion_core::transfer::{polytope_membership, sample_generic_labeling, Polytope};
use rowmotion_core::{
    antichain_rowmotion, iterate, product_of_chains, st_word, transfer, Antichain, Dynamics, Labeling, Mode, Realm,
    TransferKind,
};

fn q(s: &str) -> BigRational {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let scale = |t: &str| -> (i64, i64) {
        match t.split_once('.') {
            Some((w, f)) => (format!("{w}{f}").parse().unwrap(), 10i64.pow(f.len() as u32)),
            None => (t.parse().unwrap(), 1),
        }
    };
    let (nn, nd) = scale(n);
    let (dn, dd) = scale(d);
    BigRational::new((nn * dd).into(), (nd * dn).into())
}

fn tropical(values: &[&str]) -> Labeling<BigRational> {
    values.iter().map(|v| q(v)).collect()
}

fn symbolic(realm: &RatFunRealm, exprs: &[&str]) -> Labeling<RatFun> {
    exprs.iter().map(|e| realm.parse(e).unwrap()).collect()
}

fn assert_symbolic(realm: &RatFunRealm, got: &Labeling<RatFun>, want: &[&str]) {
    let want = symbolic(realm, want);
    for (k, (g, w)) in got.iter().zip(want.iter()).enumerate() {
        assert!(realm.equal(g, w), "label {k}: got {}, want {}", realm.format(g), realm.format(w));
    }
}

#[test]
fn antichain_word_on_3x5() {
    let rect = product_of_chains(3, 5).unwrap();
    let p = rect.poset();
    let a = Antichain::new(p, vec![rect.id(2, 4), rect.id(3, 1)]).unwrap();
    assert_eq!(st_word_combinatorial(rect.grid(), &a), [0, 1, 1, 0, 1, 1, 0, 1]);

    let ideal = downward_saturation(p, &a);
    let filter = complement(p, &ideal);
    let want_filter: Vec<usize> = [(1, 5), (2, 5), (3, 2), (3, 3), (3, 4), (3, 5)]
        .iter()
        .map(|&(i, j)| rect.id(i, j))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    assert_eq!(filter.members(), want_filter.as_slice());
    let image = minimal_elements(p, &filter);
    assert_eq!(image, Antichain::new(p, vec![rect.id(1, 5), rect.id(3, 2)]).unwrap());
    assert_eq!(rowmotion_antichain(p, &a), image);
    assert_eq!(st_word_combinatorial(rect.grid(), &image), [1, 0, 1, 1, 0, 1, 1, 0]);
}

#[test]
fn antichain_orbits_on_2x2() {
    let rect = product_of_chains(2, 2).unwrap();
    assert_eq!(rect.poset().antichains().len(), 6);
    let orbits = combinatorial_orbits(2, 2).unwrap();
    let mut sizes: Vec<usize> = orbits.iter().map(|o| o.size()).collect();
    sizes.sort_unstable();
    assert_eq!(sizes, [2, 4]);

    // the 4-cycle through the minimum
    let bottom = Antichain::new(rect.poset(), vec![rect.id(1, 1)]).unwrap();
    let four = orbits.iter().find(|o| o.antichains.contains(&bottom)).unwrap();
    assert_eq!(four.size(), 4);
    for o in &orbits {
        assert_eq!(o.cardinality_avg, q("1"));
        assert!(o.fiber_avgs.iter().all(|(_, v)| *v == q("1/2")));
    }
}

// (bottom, left, right, top) = (1,1), (2,1), (1,2), (2,2): element id order.
const PL_ORBIT: [([&str; 4], [&str; 4], &str); 4] = [
    (["0.2", "0.1", "0.4", "0.3"], ["0.6", "0.4", "0.7", "0.3"], "1"),
    (["0.1", "0.5", "0.2", "0.1"], ["0.3", "0.6", "0.4", "0.7"], "0.9"),
    (["0.3", "0.1", "0.4", "0.2"], ["0.7", "0.3", "0.6", "0.4"], "1"),
    (["0.1", "0.6", "0.3", "0.1"], ["0.4", "0.7", "0.3", "0.6"], "1.1"),
];

#[test]
fn piecewise_linear_orbit_on_2x2() {
    let rect = product_of_chains(2, 2).unwrap();
    let p = rect.poset();
    let t = TropicalRealm::default();
    let g = tropical(&PL_ORBIT[0].0);
    let orbit = iterate(&t, p, &g, 16, Dynamics::Antichain(Mode::Transfer)).unwrap();
    assert_eq!(orbit.period, Some(4));
    let words = orbit.st_words.unwrap();
    for (k, (labels, word, sum)) in PL_ORBIT.iter().enumerate() {
        assert_eq!(orbit.labelings[k], tropical(labels), "step {k}");
        assert_eq!(words[k].entries(), tropical(word).as_slice(), "step {k}");
        assert_eq!(orbit.labelings[k].iter().cloned().sum::<BigRational>(), q(sum));
        assert!(polytope_membership(Polytope::Chain, p, &orbit.labelings[k]));
    }
    let stats = pl_orbit_stats(rect.grid(), p, &g).unwrap();
    assert_eq!(stats.means, vec![q("1/2"); 4].into_iter().chain([q("1")]).collect::<Vec<_>>());

    for mode in [Mode::Transfer, Mode::Toggles] {
        assert_eq!(antichain_rowmotion(&t, p, &g, mode).unwrap(), tropical(&PL_ORBIT[1].0));
    }
}

#[test]
fn distinct_pl_labelings_share_a_word() {
    let rect = product_of_chains(2, 2).unwrap();
    let t = TropicalRealm::default();
    let f = tropical(&["0.1", "0.2", "0.5", "0.3"]);
    let g = tropical(&["0.2", "0.1", "0.4", "0.4"]);
    assert_ne!(f, g);
    let want = tropical(&["0.6", "0.5", "0.7", "0.2"]);
    assert_eq!(st_word(&t, rect.grid(), &f).unwrap().entries(), want.as_slice());
    assert_eq!(st_word(&t, rect.grid(), &g).unwrap().entries(), want.as_slice());
}

#[test]
fn one_bar_step_on_2x3() {
    let rect = product_of_chains(2, 3).unwrap();
    let p = rect.poset();
    let realm = RatFunRealm::for_poset(p);
    let g = realm.generic_labeling(p);
    assert_symbolic(&realm, &g, &["u", "v", "w", "x", "y", "z"]);

    let d = transfer(TransferKind::DeltaInv, &realm, p, &g).unwrap();
    assert_symbolic(&realm, &d, &["u*(v*x+w*x+w*y)*z", "v*x*z", "w*(x+y)*z", "x*z", "y*z", "z"]);
    let t = transfer(TransferKind::Theta, &realm, p, &d).unwrap();
    assert_symbolic(&realm, &t, &["C/(u*(v*x+w*x+w*y)*z)", "C/(v*x*z)", "C/(w*(x+y)*z)", "C/(x*z)", "C/(y*z)", "C/z"]);
    let bar = transfer(TransferKind::Nabla, &realm, p, &t).unwrap();
    let want = [
        "C/(u*(v*x+w*x+w*y)*z)",
        "u*(v*x+w*x+w*y)/(v*x)",
        "u*(v*x+w*x+w*y)/(w*(x+y))",
        "v*w*(x+y)/(v*x+w*x+w*y)",
        "w*(x+y)/y",
        "x*y/(x+y)",
    ];
    assert_symbolic(&realm, &bar, &want);
    assert_symbolic(&realm, &antichain_rowmotion(&realm, p, &g, Mode::Toggles).unwrap(), &want);

    let report = check_rotation(&realm, rect.grid(), &g, &bar).unwrap();
    assert!(report.holds());
    let word = st_word(&realm, rect.grid(), &bar).unwrap();
    let want_word = symbolic(&realm, &["C/(y*z)", "u*w*y", "v*x*z", "C/(u*v)", "C/(w*x)"]);
    assert!(word.entries().iter().zip(want_word.iter()).all(|(a, b)| realm.equal(a, b)));
}

#[test]
fn bar_orbit_on_2x2() {
    let rect = product_of_chains(2, 2).unwrap();
    let p = rect.poset();
    let realm = RatFunRealm::for_poset(p);
    let g = realm.generic_labeling(p);
    let orbit = iterate(&realm, p, &g, 16, Dynamics::Antichain(Mode::Transfer)).unwrap();
    assert_eq!(orbit.period, Some(4));
    let steps: [[&str; 4]; 4] = [
        ["w", "x", "y", "z"],
        ["C/(w*(x+y)*z)", "w*(x+y)/x", "w*(x+y)/y", "x*y/(x+y)"],
        ["z", "C/(w*y*z)", "C/(w*x*z)", "w"],
        ["x*y/(x+y)", "(x+y)*z/x", "(x+y)*z/y", "C/(w*(x+y)*z)"],
    ];
    for (h, want) in orbit.labelings.iter().zip(steps) {
        assert_symbolic(&realm, h, &want);
    }
    let word = st_word(&realm, rect.grid(), &g).unwrap();
    let want = symbolic(&realm, &["w*y", "x*z", "C/(w*x)", "C/(y*z)"]);
    assert!(word.entries().iter().zip(want.iter()).all(|(a, b)| realm.equal(a, b)));

    // the worked product along the first positive fiber
    let product = fiber_orbit_product(&realm, rect.grid(), &g, Fiber::Positive(1)).unwrap();
    let by_hand = realm.parse("w*y*C/(w*(x+y)*z)*w*(x+y)/y*z*C/(w*x*z)*x*y/(x+y)*(x+y)*z/y").unwrap();
    assert!(realm.equal(&product, &by_hand));
    assert!(realm.equal(&product, &realm.parse("C^2").unwrap()));
    for fiber in Fiber::all(rect.grid()) {
        let got = fiber_orbit_product(&realm, rect.grid(), &g, fiber).unwrap();
        assert!(realm.equal(&got, &expected_fiber_product(&realm, rect.grid(), fiber)));
    }
}

#[test]
fn bar_orbit_on_2x3() {
    let rect = product_of_chains(2, 3).unwrap();
    let p = rect.poset();
    let realm = RatFunRealm::for_poset(p);
    let g = realm.generic_labeling(p);
    let orbit = iterate(&realm, p, &g, 20, Dynamics::Antichain(Mode::Transfer)).unwrap();
    assert_eq!(orbit.period, Some(5));
    let steps: [[&str; 6]; 4] = [
        ["z", "C/(u*w*y*z)", "C/(u*(v+w)*x*z)", "u*(v+w)/v", "u*(v+w)/w", "v*w/(v+w)"],
        ["x*y/(x+y)", "(x+y)*z/x", "(x+y)*z/y", "C/(u*w*(x+y)*z)", "C/(u*v*x*z)", "u"],
        [
            "v*w/(v+w)",
            "(v+w)*x/v",
            "(v+w)*x*y/(v*x+w*x+w*y)",
            "(v*x+w*x+w*y)*z/((v+w)*x)",
            "(v*x+w*x+w*y)*z/(w*y)",
            "C/(u*(v*x+w*x+w*y)*z)",
        ],
        // one more step returns to g
        ["u", "v", "w", "x", "y", "z"],
    ];
    for (k, want) in steps[..3].iter().enumerate() {
        assert_symbolic(&realm, &orbit.labelings[k + 2], want);
    }
    let last = antichain_rowmotion(&realm, p, &orbit.labelings[4], Mode::Transfer).unwrap();
    assert_symbolic(&realm, &last, &steps[3]);

    let words = orbit.st_words.unwrap();
    let base = symbolic(&realm, &["u*w*y", "v*x*z", "C/(u*v)", "C/(w*x)", "C/(y*z)"]);
    for (m, word) in words.iter().enumerate() {
        for i in 1..=5i64 {
            assert!(realm.equal(word.at(i), &base[((i - 1 - m as i64).rem_euclid(5)) as usize]));
        }
    }

    let c3 = realm.parse("C^3").unwrap();
    let c2 = realm.parse("C^2").unwrap();
    for k in 1..=2 {
        assert!(realm.equal(&fiber_orbit_product(&realm, rect.grid(), &g, Fiber::Positive(k)).unwrap(), &c3));
    }
    for l in 1..=3 {
        assert!(realm.equal(&fiber_orbit_product(&realm, rect.grid(), &g, Fiber::Negative(l)).unwrap(), &c2));
    }
}

fn matrix_realms() -> Vec<MatP> {
    let mut rng = ChaCha8Rng::seed_from_u64(2718);
    (1..=3)
        .flat_map(|d| (0..100).map(move |_| d))
        .map(|d| MatrixRealm::with_random_constant(PrimeField::default(), d, &mut rng))
        .collect()
}

#[test]
fn nar_orbit_on_2x2() {
    let rect = product_of_chains(2, 2).unwrap();
    let p = rect.poset();
    for (s, r) in matrix_realms().iter().enumerate() {
        let g = sample_generic_labeling(p, r, s as u64).unwrap();
        let (w, x, y, z) = (&g[0], &g[1], &g[2], &g[3]);
        let c = r.constant();
        let inv = |v: &_| r.inv(v).unwrap();
        let prod = |vs: &[&_]| r.product(vs.iter().copied());
        let xy = r.add(x, y);
        let top1 = inv(&r.add(&inv(x), &inv(y)));
        let bottom1 = prod(&[&c, &inv(w), &inv(&xy), &inv(z)]);
        let want = [
            vec![bottom1.clone(), prod(&[&inv(x), &xy, w]), prod(&[&inv(y), &xy, w]), top1.clone()],
            vec![z.clone(), prod(&[&c, &inv(w), &inv(y), &inv(z)]), prod(&[&c, &inv(w), &inv(x), &inv(z)]), w.clone()],
            vec![top1, prod(&[z, &xy, &inv(x)]), prod(&[z, &xy, &inv(y)]), bottom1],
        ];
        let mut h = g.clone();
        for labels in &want {
            h = antichain_rowmotion(r, p, &h, Mode::Toggles).unwrap();
            assert!(r.labelings_eq(&h, &Labeling::new(labels.clone())), "sample {s}");
        }
        h = antichain_rowmotion(r, p, &h, Mode::Toggles).unwrap();
        assert!(r.labelings_eq(&h, &g));

        let word = st_word(r, rect.grid(), &g).unwrap();
        let want_word = [prod(&[y, w]), prod(&[z, x]), prod(&[&c, &inv(w), &inv(x)]), prod(&[&c, &inv(y), &inv(z)])];
        assert!(word.entries().iter().zip(&want_word).all(|(a, b)| r.equal(a, b)));
    }
}

#[test]
fn skew_field_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut refuted = [0usize; 4];
    for d in 1..=3 {
        let r = MatrixRealm::new(PrimeField::default(), d, 1);
        for _ in 0..100 {
            let (x, y) = (r.random_matrix(&mut rng), r.random_matrix(&mut rng));
            let (Ok(ix), Ok(iy), Ok(ixy)) = (r.inv(&x), r.inv(&y), r.inv(&r.add(&x, &y))) else {
                continue;
            };
            let Ok(lhs) = r.inv(&r.add(&ix, &iy)) else { continue };
            assert!(r.equal(&lhs, &r.product([&y, &ixy, &x])));
            assert!(r.equal(&lhs, &r.product([&x, &ixy, &y])));
            let wrong = [
                r.product([&y, &x, &ixy]),
                r.product([&ixy, &x, &y]),
                r.product([&x, &y, &ixy]),
                r.product([&ixy, &y, &x]),
            ];
            for (k, v) in wrong.iter().enumerate() {
                if d >= 2 && !r.equal(&lhs, v) {
                    refuted[k] += 1;
                }
            }
        }
    }
    assert!(refuted.iter().all(|&n| n > 0), "{refuted:?}");
}
