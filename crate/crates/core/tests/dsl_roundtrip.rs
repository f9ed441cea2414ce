use associator::dsl::{
    evaluate, parse_catalogue, parse_relation, print_catalogue, print_relation, Env, Expr, LieAtom, LieExpr, LieTerm, Relation,
    Sep, Span,
};
use associator::relations::DEFAULT_CATALOGUE;
use associator::{Algebra, GaussRational, Pos};
use proptest::prelude::*;

fn span() -> Span {
    Span(Pos { line: 1, col: 1 })
}

fn gauss() -> impl Strategy<Value = GaussRational> {
    (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4).prop_map(|(a, b, c, d)| {
        &GaussRational::from_ratio(a, b) + &(&GaussRational::from_ratio(c, d) * &GaussRational::i())
    })
}

fn nonzero_gauss() -> impl Strategy<Value = GaussRational> {
    gauss().prop_filter("nonzero", |g| !g.is_zero())
}

fn generator() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["A", "B", "C", "b1", "bi", "bm1", "bmi", "t12", "Z"]).prop_map(String::from)
}

fn lie() -> impl Strategy<Value = LieExpr> {
    let term = prop_oneof![
        4 => (nonzero_gauss(), generator()).prop_map(|(c, n)| LieTerm { coeff: c, atom: LieAtom::Name(n, span()) }),
        1 => any::<bool>().prop_map(|neg| LieTerm {
            coeff: GaussRational::from_int(if neg { -1 } else { 1 }),
            atom: LieAtom::Zero
        }),
    ];
    let flat = prop::collection::vec(term, 1..4).prop_map(|terms| LieExpr { terms, span: span() });
    flat.prop_recursive(2, 8, 3, |inner| {
        prop::collection::vec(
            prop_oneof![
                (nonzero_gauss(), generator()).prop_map(|(c, n)| LieTerm { coeff: c, atom: LieAtom::Name(n, span()) }),
                (nonzero_gauss(), inner).prop_map(|(c, g)| LieTerm { coeff: c, atom: LieAtom::Group(g) }),
            ],
            1..4,
        )
        .prop_map(|terms| LieExpr { terms, span: span() })
    })
}

fn series_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["Psi4", "Psi2", "Phi", "PhiHalf", "X"]).prop_map(String::from)
}

fn map_name() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["s", "s2", "t", "st", "sigma", "theta", "d42", "p41"]).prop_map(String::from)
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        Just(Expr::Unit(span())),
        series_name().prop_map(|name| Expr::Named { name, span: span() }),
        (nonzero_gauss(), lie()).prop_map(|(base, exponent)| Expr::ScalarPower { base, exponent, span: span() }),
        (series_name(), prop::collection::vec((lie(), any::<bool>()), 1..4)).prop_map(|(name, args)| {
            let seps = args.iter().skip(1).map(|(_, bar)| if *bar { Sep::Bar } else { Sep::Comma }).collect();
            Expr::Substitute { name, args: args.into_iter().map(|(a, _)| a).collect(), seps, span: span() }
        }),
    ];
    leaf.prop_recursive(3, 16, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(Expr::Product),
            inner.clone().prop_map(|e| Expr::Inverse(Box::new(e))),
            (map_name(), inner).prop_map(|(map, arg)| Expr::MapApply { map, arg: Box::new(arg), span: span() }),
        ]
    })
}

#[test]
fn shipped_catalogue_round_trips() {
    let c = parse_catalogue(DEFAULT_CATALOGUE).unwrap();
    let printed = print_catalogue(&c);
    let again = parse_catalogue(&printed).unwrap();
    assert_eq!(c.len(), again.len());
    for (a, b) in c.iter().zip(&again) {
        assert_eq!(a.name, b.name);
        assert_eq!(a.degree, b.degree);
        assert_eq!(a.tolerance, b.tolerance);
        assert_eq!(a.relation, b.relation);
    }
    assert_eq!(print_catalogue(&again), printed);
}

fn probe_env() -> Env {
    let mut e = Env::default();
    let alg = Algebra::free(associator::alphabet::kz(), 2, 64);
    e.series.insert("X".into(), alg.named("A").unwrap().exp().unwrap());
    e.algebras.push(alg);
    e
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn print_then_parse_is_identity(lhs in expr(), rhs in expr()) {
        let r = Relation { lhs, rhs };
        let text = print_relation(&r);
        let back = parse_relation(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        prop_assert_eq!(&back, &r, "{}", text);
        prop_assert_eq!(print_relation(&back), text);
    }

    #[test]
    fn arbitrary_text_never_panics(text in "[ A-Za-z0-9_(){}^*/+|,=#-]{0,40}") {
        if let Ok(r) = parse_relation(&text) {
            let _ = evaluate(&probe_env(), &r);
        }
        let _ = parse_catalogue(&text);
    }

    #[test]
    fn printed_random_relations_evaluate_or_fail_cleanly(lhs in expr(), rhs in expr()) {
        let _ = evaluate(&probe_env(), &Relation { lhs, rhs });
    }
}
