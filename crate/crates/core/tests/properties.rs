use dgmf_core::bundle::{bundle_file, read_bundle, to_json};
use dgmf_core::dga::{build_koszul, validate_dga};
use dgmf_core::factorization::{build_mf, verify_mf, MfVariant};
use dgmf_core::fixtures::e1;
use dgmf_core::linkage::{run_pipeline, verify_identity_suite, LinkageInput, LinkageOptions};
use dgmf_core::ring::{format_poly, parse_poly, solve_lift, Field, Poly, PolyMatrix, Ring};
use proptest::prelude::*;

const P: u64 = 101;

fn ring(n: usize) -> Ring {
    Ring::new(Field::Prime(P), n)
}

fn names(n: usize) -> Vec<String> {
    ["x", "y", "z", "w"][..n].iter().map(|s| s.to_string()).collect()
}

/// Up to `terms` terms with exponents ≤ 2 in `n` variables.
fn poly(n: usize, terms: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, n), -50i64..=50), 0..=terms).prop_map(move |ts| {
        let r = ring(n);
        ts.into_iter().fold(r.zero(), |acc, (exps, c)| {
            let mono = (0..n).fold(r.from_i64(c), |m, i| m.mul(&r.var(i).pow(exps[i])));
            acc.add(&mono)
        })
    })
}

fn matrix(n: usize, rows: usize, cols: usize) -> impl Strategy<Value = PolyMatrix> {
    prop::collection::vec(poly(n, 3), rows * cols).prop_map(move |es| {
        PolyMatrix::from_fn(ring(n), rows, cols, |i, j| es[i * cols + j].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in poly(3, 4), b in poly(3, 4), c in poly(3, 4)) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn exact_division_recovers_factor(a in poly(3, 4), b in poly(3, 3)) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!(a.mul(&b).divide_exact(&b).unwrap(), a);
    }

    #[test]
    fn format_then_parse_is_identity(a in poly(4, 6)) {
        let text = format_poly(&a, &names(4));
        prop_assert_eq!(parse_poly(&text, &names(4), Field::Prime(P)).unwrap(), a);
    }

    #[test]
    fn lifts_solve_image_equations(a in matrix(3, 2, 3), x in matrix(3, 3, 1)) {
        let y = a.mul(&x);
        let sol = solve_lift(&a, &y).unwrap();
        prop_assert_eq!(a.mul(&sol), y);
    }

    #[test]
    fn koszul_algebras_validate(e in prop::collection::vec(1u32..=3, 4)) {
        let r = ring(4);
        let a: Vec<Poly> = (0..4).map(|i| r.var(i).pow(e[i])).collect();
        let k = build_koszul(&a);
        prop_assert_eq!(validate_dga(&k, Some(&a)).failures().count(), 0);
    }

    #[test]
    fn bundles_round_trip(extra in poly(4, 4)) {
        let ex = e1();
        let f = ex.f.add(&extra.mul(&ex.a[0]));
        let opts = LinkageOptions::default();
        let text = to_json(&bundle_file(&ex.vars, &ex.a, &f, &ex.m, &opts));
        let loaded = read_bundle(&text).unwrap();
        prop_assert_eq!(&loaded.f, &f);
        prop_assert_eq!(to_json(&bundle_file(&loaded.vars, &loaded.a, &loaded.f, loaded.m.as_ref().unwrap(), &opts)), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Any f with a unit constant term links the Koszul complex to itself with r a unit,
    /// and the reduced factorization closes.
    #[test]
    fn unit_constant_term_gives_reduced_factorization(c in 1i64..=100, g in poly(4, 3)) {
        let r = ring(4);
        let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
        let g = r.from_terms(g.into_terms().into_iter().filter(|(m, _)| m.degree() > 0).collect());
        let f = r.from_i64(c).add(&g);
        let input = LinkageInput { a: a.clone(), f, m: build_koszul(&a), options: LinkageOptions::default() };
        let st = run_pipeline(&input).unwrap();
        prop_assert!(st.sigma.r.is_unit());
        prop_assert_eq!(verify_identity_suite(&st, false).failures().count(), 0);
        let mf = build_mf(&st, MfVariant::Reduced).unwrap();
        prop_assert_eq!(verify_mf(&mf).failures().count(), 0);
    }
}

