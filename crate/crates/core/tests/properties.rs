//! Heavier structural invariants: exhaustive group laws, the Gromov product
//! identity, and tripod locality of the cocycle-identity error.

mod common;

use common::w;

use qclab_core::brooks::{defect_term, QuasiCocycleSpec};
use qclab_core::spaces::{LpNorm, Representation, Vector};
use qclab_core::words::{ball, occurrences, Occurrence, ReducedWord, Sign, WordSampler};

#[test]
fn group_laws_exhaustive_on_ball4() {
    let b4: Vec<ReducedWord> = ball(4).collect();
    for u in &b4 {
        assert!(u.mul(&u.inverse()).is_identity());
        assert!(u.inverse().mul(u).is_identity());
        for v in &b4 {
            for t in &b4 {
                assert_eq!(u.mul(v).mul(t), u.mul(&v.mul(t)));
            }
        }
    }
    // length subadditivity with equality iff no cancellation
    for u in &b4 {
        for v in &b4 {
            let prod = u.mul(v);
            assert!(prod.len() <= u.len() + v.len());
            let cancels = u
                .letters()
                .last()
                .zip(v.letters().first())
                .is_some_and(|(x, y)| *x == y.inverse());
            assert_eq!(prod.len() == u.len() + v.len(), !cancels);
        }
    }
}

#[test]
fn regular_action_homomorphism_exhaustive_ball4() {
    use qclab_core::exact::Rational;
    use qclab_core::spaces::GroupVector;
    use rand::Rng;

    let rep = Representation::Regular(LpNorm::Exact(2));
    let mut sampler = WordSampler::new(4242);
    let vectors: Vec<Vector> = (0..20)
        .map(|_| {
            let entries: Vec<(ReducedWord, Rational)> = (0..4)
                .map(|_| {
                    let len = sampler.rng().random_range(0..5usize);
                    let support = sampler.word(len);
                    let num = i64::from(sampler.rng().random_range(-9..=9i32));
                    (support, Rational::new(num.into(), 7.into()))
                })
                .collect();
            Vector::Group(GroupVector::from_entries(entries))
        })
        .collect();
    let b4: Vec<ReducedWord> = ball(4).collect();
    for g in &b4 {
        for h in &b4 {
            let gh = g.mul(h);
            for v in &vectors {
                let joint = rep.act(&gh, v).unwrap();
                let split = rep.act(g, &rep.act(h, v).unwrap()).unwrap();
                assert_eq!(joint, split);
            }
        }
    }
}

#[test]
fn evaluate_antisymmetry_mass_random() {
    let spec = QuasiCocycleSpec::new(
        w("ab"),
        Vector::delta_identity(),
        Representation::Regular(LpNorm::Exact(2)),
    )
    .unwrap();
    let mut sampler = WordSampler::new(271828);
    for i in 0..10_000 {
        let g = sampler.word(20 + (i % 80));
        let lhs = spec.evaluate(&g.inverse());
        let rhs = spec.rep.act(&g.inverse(), &spec.evaluate(&g)).unwrap().negate();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn gromov_product_identity_exhaustive_ball5() {
    let b5: Vec<ReducedWord> = ball(5).collect();
    for u in &b5 {
        for v in &b5 {
            let d = u.inverse().mul(v).len();
            assert_eq!(d, u.len() + v.len() - 2 * u.common_prefix(v).len());
        }
    }
}

/// Occurrence intervals strictly containing the given coordinate.
fn crosses(o: &Occurrence, center: usize, wlen: usize) -> bool {
    match o.sign {
        Sign::Pos => o.start < center && center < o.start + wlen,
        Sign::Neg => o.start - wlen < center && center < o.start,
    }
}

/// Recomputes `H(gf) - H(g) - g H(f)` from the occurrences that straddle the
/// tripod center only; all others cancel pairwise between the three sums.
fn local_defect_term(
    spec: &QuasiCocycleSpec,
    g: &ReducedWord,
    f: &ReducedWord,
) -> Vector {
    let wlen = spec.w.len();
    let gf = g.mul(f);
    let center = g.common_prefix(&gf).len();
    let center_on_f_leg = g.len() - center;

    let mut acc = spec.rep.zero_vector();
    let signed = |o: &Occurrence, flip: bool| -> Vector {
        let moved = spec.rep.act(&o.prefix, &spec.e).unwrap();
        match (o.sign, flip) {
            (Sign::Pos, false) | (Sign::Neg, true) => moved,
            _ => moved.negate(),
        }
    };
    for o in occurrences(&spec.w, &gf).unwrap() {
        if crosses(&o, center, wlen) {
            acc = acc.add(&signed(&o, false)).unwrap();
        }
    }
    for o in occurrences(&spec.w, g).unwrap() {
        if crosses(&o, center, wlen) {
            acc = acc.add(&signed(&o, true)).unwrap();
        }
    }
    for o in occurrences(&spec.w, f).unwrap() {
        if crosses(&o, center_on_f_leg, wlen) {
            let moved = spec
                .rep
                .act(&g.mul(&o.prefix), &spec.e)
                .unwrap();
            let term = match o.sign {
                Sign::Pos => moved.negate(),
                Sign::Neg => moved,
            };
            acc = acc.add(&term).unwrap();
        }
    }
    acc
}

#[test]
fn tripod_locality_of_the_defect_term() {
    let rep = Representation::Regular(LpNorm::Exact(2));
    for pattern in ["ab", "aba", "aBa"] {
        let spec =
            QuasiCocycleSpec::new(w(pattern), Vector::delta_identity(), rep.clone()).unwrap();
        // exhaustive small pairs
        for g in ball(4) {
            for f in ball(4) {
                let full = defect_term(&spec, &g, &f);
                let local = local_defect_term(&spec, &g, &f);
                assert_eq!(full, local, "locality failed at w = {pattern}, g = {g}, f = {f}");
            }
        }
        // long random pairs
        let mut sampler = WordSampler::new(3141);
        for _ in 0..200 {
            let g = sampler.word(40);
            let f = sampler.word(35);
            assert_eq!(defect_term(&spec, &g, &f), local_defect_term(&spec, &g, &f));
        }
    }
}
