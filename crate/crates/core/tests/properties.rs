use proptest::prelude::*;

use scx_core::complex::{homology, FilteredChainComplex};
use scx_core::filtered::{
    barcode, persistence_rank_bruteforce, psc_check, rho_degree, rho_degree_bruteforce,
};
use scx_core::gen::{
    gen_filtered_complex, gen_scomplex, gen_smorphism, Bounds, Toggles, XorShift64,
};
use scx_core::io;
use scx_core::level::{format_rational, int, parse_rational, rat, Extended};
use scx_core::scomplex::assemble_total;
use scx_core::specseq::{abutment, pages_closed_form, pages_generic};
use scx_core::suite::{run_instance, SuiteName};

fn small() -> Bounds {
    Bounds {
        generators: 9,
        reducible: 3,
        ..Bounds::default()
    }
}

fn complex(seed: u64) -> FilteredChainComplex<scx_core::algebra::F2> {
    gen_filtered_complex(&mut XorShift64::new(seed), &small(), "g").unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_scomplexes_validate(seed: u64, h1: bool, h2: bool) {
        let t = Toggles { force_hypothesis1: h1, force_hypothesis2: h2, ..Toggles::default() };
        let s = gen_scomplex(&mut XorShift64::new(seed), &small(), &t).unwrap();
        let r = s.validate();
        prop_assert!(r.is_clean(), "{}", r.summary());
        prop_assert!(r.total_d_squared_zero);
    }

    #[test]
    fn generated_smorphisms_satisfy_identities(seed: u64) {
        let f = gen_smorphism(&mut XorShift64::new(seed), &small(), &Toggles::default()).unwrap();
        let r = f.report();
        prop_assert!(r.is_clean() && r.commutes, "{}", r.summary());
    }

    #[test]
    fn barcode_matches_bruteforce(seed: u64) {
        let c = complex(seed);
        let b = barcode(&c).unwrap();
        let mut ts: Vec<_> = c.levels();
        ts.push(int(-1));
        for q in c.degrees() {
            for t in &ts {
                for s in ts.iter().filter(|s| *s >= t) {
                    prop_assert_eq!(b.rank_between(q, t, s), persistence_rank_bruteforce(&c, q, t, s));
                }
            }
            prop_assert_eq!(rho_degree(&c, q).unwrap().value, rho_degree_bruteforce(&c, q));
        }
    }

    #[test]
    fn essential_bars_count_homology(seed: u64) {
        let c = complex(seed);
        let b = barcode(&c).unwrap();
        let h = homology(&c).unwrap();
        for q in c.degrees() {
            prop_assert_eq!(b.essential.get(&q).copied().unwrap_or(0), h.dim(q));
        }
    }

    #[test]
    fn homology_euler_characteristic(seed: u64) {
        let c = complex(seed);
        let h = homology(&c).unwrap();
        let chi: i64 = h.dims().iter().map(|(n, d)| if n.rem_euclid(2) == 0 { *d as i64 } else { -(*d as i64) }).sum();
        prop_assert_eq!(chi, c.euler_characteristic());
    }

    #[test]
    fn complex_documents_round_trip(seed: u64) {
        let c = complex(seed);
        let text = io::to_json(&io::complex_to_doc(&c));
        let back = io::complex_f2_from_doc(&io::from_json(&text).unwrap()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn scomplex_documents_round_trip(seed: u64) {
        let s = gen_scomplex(&mut XorShift64::new(seed), &small(), &Toggles::default()).unwrap();
        let text = io::to_json(&io::scomplex_to_doc(&s));
        let back = io::scomplex_from_doc(&io::from_json(&text).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn pages_agree_and_reconstruct(seed: u64) {
        let s = gen_scomplex(&mut XorShift64::new(seed), &small(), &Toggles::default()).unwrap();
        let closed = pages_closed_form(&s).unwrap();
        let generic = pages_generic(&s).unwrap();
        for (a, b) in closed.iter().zip(&generic) {
            prop_assert!(a.same_dims(b), "page {}", a.r);
        }
        prop_assert!(abutment(&s).unwrap().holds());
        let chi = assemble_total(&s).unwrap().euler_characteristic();
        for p in &closed {
            prop_assert_eq!(p.euler(), chi);
        }
    }

    #[test]
    fn suite_instances_replay(seed: u64, which in 0usize..8, index in 0u64..1000) {
        let name = SuiteName::ALL[which];
        let a = run_instance(name, index, seed);
        let b = run_instance(name, index, seed);
        prop_assert_eq!(&a, &b);
        prop_assert!(a.passed, "{}: {}", name, a.detail);
    }

    #[test]
    fn psc_bound_tracks_obstruction(a in -20i64..20, b in -20i64..20, c in 0i64..10, den in 1i64..4) {
        let (ra, rb, rc) = (rat(a, den), rat(b, den), rat(c, den));
        let v = psc_check(&Extended::Finite(ra.clone()), &Extended::Finite(rb.clone()), &rc, None);
        prop_assert_eq!(v.obstructed, rb > &ra + &rc);
        let bound = v.s2_lower_bound.unwrap();
        prop_assert_eq!(v.obstructed, bound > Extended::Finite(int(0)));
        prop_assert!(!v.vacuous);
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..60) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
}
