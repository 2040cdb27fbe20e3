//! Regression table of worked examples: small orbits, words and products
//! whose values are known exactly.

use anyhow::{anyhow, ensure, Result};
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use rowmotion_core::combinatorial::{
    combinatorial_orbits, complement, downward_saturation, rowmotion_antichain, rowmotion_power_is_identity,
    st_word_combinatorial,
};
use rowmotion_core::realm::{MatP, MatrixRealm, PrimeField, RatFun, RatFunRealm, TropicalRealm};
use rowmotion_core::stword::{expected_fiber_product, fiber_orbit_product, pl_orbit_stats, Fiber};
use rowmotion_core::transfer::sample_generic_labeling;
use rowmotion_core::{
    antichain_rowmotion, iterate, product_of_chains, st_word, transfer, Antichain, Dynamics, Labeling, Mode, Realm,
    TransferKind,
};

use crate::io::parse_rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureResult {
    pub name: &'static str,
    pub source: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

struct Fixture {
    name: &'static str,
    source: &'static str,
    check: fn() -> Result<()>,
}

const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "stword-3x5-antichain",
        source: "antichain {(2,4),(3,1)} of [3]x[5]: ideal, filter and word",
        check: stword_3x5,
    },
    Fixture {
        name: "rowmotion-3x5-image",
        source: "rowmotion image {(1,5),(3,2)} of the same antichain and its shifted word",
        check: rowmotion_3x5,
    },
    Fixture {
        name: "car-2x2-census",
        source: "combinatorial rowmotion on [2]x[2]: orbits of sizes 4 and 2",
        check: car_2x2,
    },
    Fixture { name: "plar-2x2-orbit", source: "piecewise-linear rowmotion orbit on [2]x[2]", check: plar_2x2 },
    Fixture {
        name: "pl-shared-stword",
        source: "two labelings of [2]x[2] with the word (0.6, 0.5, 0.7, 0.2)",
        check: pl_shared_word,
    },
    Fixture {
        name: "bar-2x3-one-step",
        source: "one step of BAR on [2]x[3] through its transfer maps",
        check: bar_2x3_step,
    },
    Fixture { name: "bar-2x2-orbit", source: "symbolic BAR orbit on [2]x[2], period 4", check: bar_2x2_orbit },
    Fixture { name: "bar-2x3-orbit", source: "symbolic BAR orbit on [2]x[3], period 5", check: bar_2x3_orbit },
    Fixture {
        name: "bar-2x2-fiber-products",
        source: "multiplicative homomesy on [2]x[2]: the worked product equals C^2",
        check: fiber_products_2x2,
    },
    Fixture {
        name: "bar-2x3-fiber-products",
        source: "multiplicative homomesy on [2]x[3]: C^3 on rows, C^2 on columns",
        check: fiber_products_2x3,
    },
    Fixture {
        name: "nar-2x2-orbit",
        source: "closed-form NAR orbit and words on [2]x[2], matrix evaluation d = 1, 2, 3",
        check: nar_2x2_orbit,
    },
    Fixture {
        name: "skew-identity",
        source: "inv(inv x + inv y) = y inv(x+y) x = x inv(x+y) y, and four near misses that fail",
        check: skew_identity,
    },
    Fixture { name: "nar-1x1", source: "NAR(g) = C inv(g) on one element, order 2", check: nar_1x1 },
];

pub fn fixture_names() -> Vec<&'static str> {
    FIXTURES.iter().map(|f| f.name).collect()
}

fn run(f: &Fixture) -> FixtureResult {
    let outcome = (f.check)();
    FixtureResult {
        name: f.name,
        source: f.source,
        passed: outcome.is_ok(),
        detail: outcome.err().map(|e| e.to_string()),
    }
}

/// Runs every fixture; failures are recorded and the run continues.
pub fn run_fixtures() -> Vec<FixtureResult> {
    FIXTURES.iter().map(run).collect()
}

pub fn run_fixture(name: &str) -> Result<FixtureResult> {
    FIXTURES.iter().find(|f| f.name == name).map(run).ok_or_else(|| anyhow!("no fixture named {name:?}"))
}

fn q(s: &str) -> BigRational {
    parse_rational(s).expect("fixture literal")
}

fn rationals(values: &[&str]) -> Labeling<BigRational> {
    values.iter().map(|v| q(v)).collect()
}

fn symbolic_eq(realm: &RatFunRealm, got: &[RatFun], want: &[&str]) -> Result<()> {
    ensure!(got.len() == want.len(), "length {} != {}", got.len(), want.len());
    for (k, (g, w)) in got.iter().zip(want).enumerate() {
        let w = realm.parse(w)?;
        ensure!(realm.equal(g, &w), "entry {k}: got {}, want {}", realm.format(g), realm.format(&w));
    }
    Ok(())
}

fn stword_3x5() -> Result<()> {
    let rect = product_of_chains(3, 5)?;
    let p = rect.poset();
    let a = Antichain::new(p, vec![rect.id(2, 4), rect.id(3, 1)])?;
    let ideal = downward_saturation(p, &a);
    ensure!(ideal.len() == 9, "ideal has {} elements", ideal.len());
    let filter = complement(p, &ideal);
    let mut want: Vec<usize> =
        [(1, 5), (2, 5), (3, 2), (3, 3), (3, 4), (3, 5)].iter().map(|&(i, j)| rect.id(i, j)).collect();
    want.sort_unstable();
    ensure!(filter.members() == want.as_slice(), "filter {:?}", filter.members());
    let w = st_word_combinatorial(rect.grid(), &a);
    ensure!(w == [0, 1, 1, 0, 1, 1, 0, 1], "word {w:?}");
    Ok(())
}

fn rowmotion_3x5() -> Result<()> {
    let rect = product_of_chains(3, 5)?;
    let p = rect.poset();
    let a = Antichain::new(p, vec![rect.id(2, 4), rect.id(3, 1)])?;
    let image = rowmotion_antichain(p, &a);
    ensure!(image == Antichain::new(p, vec![rect.id(1, 5), rect.id(3, 2)])?, "image {:?}", image.members());
    let w = st_word_combinatorial(rect.grid(), &image);
    ensure!(w == [1, 0, 1, 1, 0, 1, 1, 0], "word {w:?}");
    Ok(())
}

fn car_2x2() -> Result<()> {
    let rect = product_of_chains(2, 2)?;
    let p = rect.poset();
    ensure!(p.antichains().len() == 6, "antichain count");
    let orbits = combinatorial_orbits(2, 2)?;
    let mut sizes: Vec<usize> = orbits.iter().map(|o| o.size()).collect();
    sizes.sort_unstable();
    ensure!(sizes == [2, 4], "orbit sizes {sizes:?}");
    for o in &orbits {
        ensure!(o.cardinality_avg == q("1"), "cardinality average {}", o.cardinality_avg);
        for (name, v) in &o.fiber_avgs {
            ensure!(*v == q("1/2"), "{name} average {v}");
        }
    }
    ensure!(rowmotion_power_is_identity(p, 4) && !rowmotion_power_is_identity(p, 2), "order is not 4");
    Ok(())
}

const PL_ORBIT: [([&str; 4], [&str; 4], &str); 4] = [
    (["0.2", "0.1", "0.4", "0.3"], ["0.6", "0.4", "0.7", "0.3"], "1"),
    (["0.1", "0.5", "0.2", "0.1"], ["0.3", "0.6", "0.4", "0.7"], "0.9"),
    (["0.3", "0.1", "0.4", "0.2"], ["0.7", "0.3", "0.6", "0.4"], "1"),
    (["0.1", "0.6", "0.3", "0.1"], ["0.4", "0.7", "0.3", "0.6"], "1.1"),
];

fn plar_2x2() -> Result<()> {
    let rect = product_of_chains(2, 2)?;
    let p = rect.poset();
    let t = TropicalRealm::default();
    let g = rationals(&PL_ORBIT[0].0);
    let orbit = iterate(&t, p, &g, 16, Dynamics::Antichain(Mode::Toggles))?;
    ensure!(orbit.period == Some(4), "period {:?}", orbit.period);
    let words = orbit.st_words.ok_or_else(|| anyhow!("no words"))?;
    for (k, (labels, word, sum)) in PL_ORBIT.iter().enumerate() {
        ensure!(orbit.labelings[k] == rationals(labels), "labels at step {k}");
        ensure!(words[k].entries() == rationals(word).as_slice(), "word at step {k}");
        ensure!(orbit.labelings[k].iter().cloned().sum::<BigRational>() == q(sum), "label sum at step {k}");
    }
    let stats = pl_orbit_stats(rect.grid(), p, &g)?;
    ensure!(stats.means.last() == Some(&q("1")), "mean label sum");
    Ok(())
}

fn pl_shared_word() -> Result<()> {
    let rect = product_of_chains(2, 2)?;
    let t = TropicalRealm::default();
    let want = rationals(&["0.6", "0.5", "0.7", "0.2"]);
    for labels in [["0.1", "0.2", "0.5", "0.3"], ["0.2", "0.1", "0.4", "0.4"]] {
        let word = st_word(&t, rect.grid(), &rationals(&labels))?;
        ensure!(word.entries() == want.as_slice(), "word of {labels:?}");
    }
    Ok(())
}

fn bar_2x3_step() -> Result<()> {
    let rect = product_of_chains(2, 3)?;
    let p = rect.poset();
    let r = RatFunRealm::for_poset(p);
    let g = r.generic_labeling(p);
    let d = transfer(TransferKind::DeltaInv, &r, p, &g)?;
    symbolic_eq(&r, d.as_slice(), &["u*(v*x+w*x+w*y)*z", "v*x*z", "w*(x+y)*z", "x*z", "y*z", "z"])?;
    let t = transfer(TransferKind::Theta, &r, p, &d)?;
    symbolic_eq(
        &r,
        t.as_slice(),
        &["C/(u*(v*x+w*x+w*y)*z)", "C/(v*x*z)", "C/(w*(x+y)*z)", "C/(x*z)", "C/(y*z)", "C/z"],
    )?;
    let bar = transfer(TransferKind::Nabla, &r, p, &t)?;
    let want = [
        "C/(u*(v*x+w*x+w*y)*z)",
        "u*(v*x+w*x+w*y)/(v*x)",
        "u*(v*x+w*x+w*y)/(w*(x+y))",
        "v*w*(x+y)/(v*x+w*x+w*y)",
        "w*(x+y)/y",
        "x*y/(x+y)",
    ];
    symbolic_eq(&r, bar.as_slice(), &want)?;
    symbolic_eq(&r, antichain_rowmotion(&r, p, &g, Mode::Toggles)?.as_slice(), &want)
}

fn bar_2x2_orbit() -> Result<()> {
    let rect = product_of_chains(2, 2)?;
    let p = rect.poset();
    let r = RatFunRealm::for_poset(p);
    let g = r.generic_labeling(p);
    let orbit = iterate(&r, p, &g, 16, Dynamics::Antichain(Mode::Transfer))?;
    ensure!(orbit.period == Some(4), "period {:?}", orbit.period);
    let steps: [[&str; 4]; 4] = [
        ["w", "x", "y", "z"],
        ["C/(w*(x+y)*z)", "w*(x+y)/x", "w*(x+y)/y", "x*y/(x+y)"],
        ["z", "C/(w*y*z)", "C/(w*x*z)", "w"],
        ["x*y/(x+y)", "(x+y)*z/x", "(x+y)*z/y", "C/(w*(x+y)*z)"],
    ];
    for (h, want) in orbit.labelings.iter().zip(&steps) {
        symbolic_eq(&r, h.as_slice(), want)?;
    }
    let words = orbit.st_words.ok_or_else(|| anyhow!("no words"))?;
    let base = ["w*y", "x*z", "C/(w*x)", "C/(y*z)"];
    for (m, word) in words.iter().enumerate() {
        let want: Vec<&str> = (0..4).map(|i| base[(i + 4 - m % 4) % 4]).collect();
        symbolic_eq(&r, word.entries(), &want)?;
    }
    Ok(())
}

fn bar_2x3_orbit() -> Result<()> {
    let rect = product_of_chains(2, 3)?;
    let p = rect.poset();
    let r = RatFunRealm::for_poset(p);
    let g = r.generic_labeling(p);
    let orbit = iterate(&r, p, &g, 20, Dynamics::Antichain(Mode::Transfer))?;
    ensure!(orbit.period == Some(5), "period {:?}", orbit.period);
    let steps: [[&str; 6]; 3] = [
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
    ];
    for (k, want) in steps.iter().enumerate() {
        symbolic_eq(&r, orbit.labelings[k + 2].as_slice(), want)?;
    }
    let words = orbit.st_words.ok_or_else(|| anyhow!("no words"))?;
    let base = ["u*w*y", "v*x*z", "C/(u*v)", "C/(w*x)", "C/(y*z)"];
    for (m, word) in words.iter().enumerate() {
        let want: Vec<&str> = (0..5).map(|i| base[(i + 5 - m % 5) % 5]).collect();
        symbolic_eq(&r, word.entries(), &want)?;
    }
    Ok(())
}

fn fiber_products_2x2() -> Result<()> {
    let rect = product_of_chains(2, 2)?;
    let p = rect.poset();
    let r = RatFunRealm::for_poset(p);
    let g = r.generic_labeling(p);
    let worked = r.parse("w*y*C/(w*(x+y)*z)*w*(x+y)/y*z*C/(w*x*z)*x*y/(x+y)*(x+y)*z/y")?;
    let first = fiber_orbit_product(&r, rect.grid(), &g, Fiber::Positive(1))?;
    ensure!(r.equal(&first, &worked), "p1 product {}", r.format(&first));
    ensure!(r.equal(&worked, &r.parse("C^2")?), "worked product is {}", r.format(&worked));
    check_all_fibers(&r, &rect, &g)
}

fn fiber_products_2x3() -> Result<()> {
    let rect = product_of_chains(2, 3)?;
    let p = rect.poset();
    let r = RatFunRealm::for_poset(p);
    check_all_fibers(&r, &rect, &r.generic_labeling(p))
}

fn check_all_fibers(r: &RatFunRealm, rect: &rowmotion_core::RectanglePoset, g: &Labeling<RatFun>) -> Result<()> {
    for fiber in Fiber::all(rect.grid()) {
        let got = fiber_orbit_product(r, rect.grid(), g, fiber)?;
        let want = expected_fiber_product(r, rect.grid(), fiber);
        ensure!(r.equal(&got, &want), "{}: {} != {}", fiber.label(), r.format(&got), r.format(&want));
    }
    Ok(())
}

fn matrix_samples() -> Vec<MatP> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    (1..=3)
        .flat_map(|d| std::iter::repeat_n(d, 100))
        .map(|d| MatrixRealm::with_random_constant(PrimeField::default(), d, &mut rng))
        .collect()
}

fn nar_2x2_orbit() -> Result<()> {
    let rect = product_of_chains(2, 2)?;
    let p = rect.poset();
    for (s, r) in matrix_samples().iter().enumerate() {
        let g = sample_generic_labeling(p, r, s as u64)?;
        let (w, x, y, z) = (&g[0], &g[1], &g[2], &g[3]);
        let c = r.constant();
        let inv = |v: &_| r.inv(v).map_err(|_| anyhow!("singular value in sample {s}"));
        let prod = |vs: &[&_]| r.product(vs.iter().copied());
        let xy = r.add(x, y);
        let (iw, ix, iy, iz, ixy) = (inv(w)?, inv(x)?, inv(y)?, inv(z)?, inv(&xy)?);
        let top = inv(&r.add(&ix, &iy))?;
        let bottom = prod(&[&c, &iw, &ixy, &iz]);
        let orbit = [
            vec![bottom.clone(), prod(&[&ix, &xy, w]), prod(&[&iy, &xy, w]), top.clone()],
            vec![z.clone(), prod(&[&c, &iw, &iy, &iz]), prod(&[&c, &iw, &ix, &iz]), w.clone()],
            vec![top, prod(&[z, &xy, &ix]), prod(&[z, &xy, &iy]), bottom],
            g.as_slice().to_vec(),
        ];
        let base = [prod(&[y, w]), prod(&[z, x]), prod(&[&c, &iw, &ix]), prod(&[&c, &iy, &iz])];
        let mut h = g.clone();
        for (k, want) in orbit.iter().enumerate() {
            let word = st_word(r, rect.grid(), &h)?;
            let shift = k % 4;
            for i in 0..4 {
                ensure!(
                    r.equal(&word.entries()[i], &base[(i + 4 - shift) % 4]),
                    "word entry {i} at step {k}, sample {s}"
                );
            }
            h = antichain_rowmotion(r, p, &h, Mode::Toggles)?;
            ensure!(r.labelings_eq(&h, &Labeling::new(want.clone())), "step {} of sample {s} (d = {})", k + 1, r.dim());
        }
    }
    Ok(())
}

fn skew_identity() -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut refuted = [false; 4];
    for d in 1..=3 {
        let r = MatrixRealm::new(PrimeField::default(), d, 1);
        for _ in 0..100 {
            let (x, y) = (r.random_matrix(&mut rng), r.random_matrix(&mut rng));
            let (Ok(ix), Ok(iy), Ok(ixy)) = (r.inv(&x), r.inv(&y), r.inv(&r.add(&x, &y))) else { continue };
            let Ok(lhs) = r.inv(&r.add(&ix, &iy)) else { continue };
            ensure!(r.equal(&lhs, &r.product([&y, &ixy, &x])), "y inv(x+y) x differs at d = {d}");
            ensure!(r.equal(&lhs, &r.product([&x, &ixy, &y])), "x inv(x+y) y differs at d = {d}");
            let near = [
                r.product([&y, &x, &ixy]),
                r.product([&ixy, &x, &y]),
                r.product([&x, &y, &ixy]),
                r.product([&ixy, &y, &x]),
            ];
            for (k, v) in near.iter().enumerate() {
                refuted[k] |= d >= 2 && !r.equal(&lhs, v);
            }
        }
    }
    ensure!(refuted.iter().all(|&b| b), "a near miss was never refuted: {refuted:?}");
    Ok(())
}

fn nar_1x1() -> Result<()> {
    let rect = product_of_chains(1, 1)?;
    let p = rect.poset();
    for r in matrix_samples().iter().step_by(10) {
        let g = sample_generic_labeling(p, r, 0)?;
        let once = antichain_rowmotion(r, p, &g, Mode::Toggles)?;
        let want = r.mul(&r.constant(), &r.inv(&g[0]).map_err(|_| anyhow!("singular"))?);
        ensure!(r.equal(&once[0], &want), "NAR g != C inv g");
        ensure!(r.labelings_eq(&antichain_rowmotion(r, p, &once, Mode::Toggles)?, &g), "NAR^2 g != g");
    }
    Ok(())
}
