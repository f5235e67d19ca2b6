use cotlab_core::bifunctor::{Identity, Tensor};
use cotlab_core::complex::{
    chain_maps, classify, disc_extensions, lift_functor, null_homotopy, random_entrywise, sample_set,
    sphere_extensions, spliced_exact, tilde_criterion_check, total_complex, ChainComplex, ChainMap, MultiComplex,
    TotalFlavor,
};
use cotlab_core::cotorsion::{ClassSpec, Universe};
use cotlab_core::gen::{random_extension, random_module, rng};
use cotlab_core::module::is_exact;
use cotlab_core::{FPModule, Morphism, Ring};
use proptest::prelude::*;

fn ring(n: u64) -> Ring {
    Ring::new(n).unwrap()
}

fn squares_to_zero(c: &ChainComplex) -> bool {
    c.differentials().windows(2).all(|w| w[0].then(&w[1]).unwrap().is_zero())
}

#[test]
fn two_term_doubling_complex_is_not_contractible() {
    let r = ring(4);
    let a = FPModule::free(r, 1);
    let c = ChainComplex::from_maps(0, vec![Morphism::scalar(&a, 2)]).unwrap();
    assert!(!c.is_exact());
    assert!(null_homotopy(&ChainMap::identity(&c)).unwrap().is_none());
    // Multiplication by 2 is the differential itself, hence null-homotopic.
    let two: Vec<Morphism> = c.modules().iter().map(|m| Morphism::scalar(m, 2)).collect();
    let f = ChainMap::new(c.clone(), c.clone(), two).unwrap();
    assert!(null_homotopy(&f).unwrap().is_some());
}

#[test]
fn discs_are_contractible() {
    let u = Universe::enumerate(ring(6), 2);
    for m in u.modules() {
        let d = ChainComplex::disc(0, m);
        assert!(d.is_exact());
        assert!(null_homotopy(&ChainMap::identity(&d)).unwrap().is_some(), "{m}");
    }
}

#[test]
fn chain_maps_from_spheres_are_module_maps() {
    let r = ring(4);
    let a = FPModule::cyclic(r, 2).unwrap();
    let b = FPModule::free(r, 1);
    let maps = chain_maps(&ChainComplex::sphere(0, &a), &ChainComplex::sphere(0, &b), 1 << 10).unwrap();
    assert_eq!(maps.len(), 2);
}

#[test]
fn sample_sets_are_reproducible_and_classified_consistently() {
    let u = Universe::enumerate(ring(4), 2);
    let a = sample_set(&u, &ClassSpec::Flat, 3, 8).unwrap();
    let b = sample_set(&u, &ClassSpec::Flat, 3, 8).unwrap();
    let (xa, xb) = (a.all(), b.all());
    assert_eq!(xa.len(), xb.len());
    for (p, q) in xa.iter().zip(&xb) {
        assert_eq!(p.describe(), q.describe());
    }
    for c in &a.tilde {
        let k = classify(c, &ClassSpec::Flat, &ClassSpec::All, &u).unwrap();
        assert!(k.is_tilde_d && k.consistent(), "{}", c.describe());
        assert!(tilde_criterion_check(c, &ClassSpec::Flat, &ClassSpec::All, &u).unwrap().holds);
    }
    for c in &a.exact {
        assert!(c.is_exact());
    }
}

#[test]
fn elementary_extensions_have_long_exact_sequences() {
    let r = ring(4);
    let mut g = rng(11);
    for _ in 0..10 {
        let d = random_module(&mut g, r, 2);
        let x = random_module(&mut g, r, 2);
        let s = random_extension(&mut g, &d, &x).unwrap();
        let seqs = [s];
        for ses in sphere_extensions(&seqs, 0).unwrap().into_iter().chain(disc_extensions(&seqs, 1).unwrap()) {
            let ses = ses.padded().unwrap();
            let lo = ses.inj.lo();
            let maps = ses.long_exact_segment(lo).unwrap();
            for w in maps.windows(2) {
                assert!(is_exact(&w[0], &w[1]).unwrap());
            }
        }
    }
}

#[test]
fn identity_functor_lifts_to_the_identity() {
    let u = Universe::enumerate(ring(6), 2);
    let mut g = rng(2);
    let c = spliced_exact(&mut g, u.modules(), 3).unwrap();
    let lifted = lift_functor(&Identity { ring: ring(6) }, std::slice::from_ref(&c)).unwrap();
    assert_eq!(lifted.describe(), c.describe());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn random_complexes_square_to_zero(n in prop::sample::select(vec![4u64, 6, 12]), seed in 0u64..10_000) {
        let u = Universe::enumerate(ring(n), 2);
        let mut g = rng(seed);
        let c = random_entrywise(&mut g, u.modules(), 3).unwrap();
        prop_assert!(squares_to_zero(&c));
        let e = spliced_exact(&mut g, u.modules(), 3).unwrap();
        prop_assert!(squares_to_zero(&e) && e.is_exact());
    }

    #[test]
    fn tensor_totals_square_to_zero(n in prop::sample::select(vec![4u64, 6]), seed in 0u64..10_000) {
        let u = Universe::enumerate(ring(n), 1);
        let mut g = rng(seed);
        let a = random_entrywise(&mut g, u.modules(), 2).unwrap();
        let b = random_entrywise(&mut g, u.modules(), 2).unwrap();
        let t = Tensor { ring: ring(n), arity: 2 };
        let mc = MultiComplex::from_functor(&t, &[a, b]).unwrap();
        for flavor in [TotalFlavor::Sum, TotalFlavor::Product] {
            prop_assert!(squares_to_zero(&total_complex(&mc, flavor).unwrap()));
        }
    }

    #[test]
    fn tensoring_with_a_flat_exact_complex_stays_exact(seed in 0u64..10_000) {
        let r = ring(4);
        let u = Universe::enumerate(r, 2);
        let flats = ClassSpec::Flat.members(&u).unwrap();
        let mut g = rng(seed);
        let a = spliced_exact(&mut g, &flats, 3).unwrap();
        let b = random_entrywise(&mut g, u.modules(), 1).unwrap();
        let t = Tensor { ring: r, arity: 2 };
        prop_assert!(lift_functor(&t, &[a, b]).unwrap().is_exact());
    }

    #[test]
    fn homotopy_certificates_are_sound(seed in 0u64..10_000) {
        let r = ring(4);
        let u = Universe::enumerate(r, 1);
        let mut g = rng(seed);
        let c = random_entrywise(&mut g, u.modules(), 2).unwrap();
        let s = null_homotopy(&ChainMap::zero(&c, &c)).unwrap();
        prop_assert!(s.is_some());
        // A contractible complex is exact.
        if null_homotopy(&ChainMap::identity(&c)).unwrap().is_some() {
            prop_assert!(c.is_exact());
        }
    }
}
