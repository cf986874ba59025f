use proptest::prelude::*;

use hktlab::ctxfile::shipped_context;
use hktlab::{parse_context, parse_expr, parse_scalar, print_expr, write_context, Element, ParseError};
use hktlab_core::sample::Sampler;
use hktlab_core::twistor::{Chart, TwistorContext};
use hktlab_core::{FrameContext, FormField, Multivector};

fn contexts() -> Vec<FrameContext> {
    vec![
        shipped_context("su3").unwrap().unwrap(),
        shipped_context("sl2").unwrap().unwrap(),
        TwistorContext::new(1, Chart::Two).unwrap().ctx,
    ]
}

/// Prints `count` random elements of each grade and kind and parses them back.
fn round_trip(ctx: &FrameContext, sampler: &mut Sampler, count: usize) -> Result<(), String> {
    for t in 0..count {
        let k = t % 4;
        let e = if t % 2 == 0 {
            Element::Vector(sampler.in_context::<hktlab_core::exterior::Vectors>(ctx, k, 3))
        } else {
            Element::Form(sampler.in_context::<hktlab_core::exterior::Covectors>(ctx, k, 3))
        };
        let text = print_expr(&e);
        match parse_expr(&text, ctx) {
            Ok(back) if back == e => {}
            Ok(back) => return Err(format!("{text} parsed as {}", print_expr(&back))),
            Err(err) => return Err(format!("{text}: {err}")),
        }
    }
    Ok(())
}

#[test]
fn hundred_printed_elements_round_trip() {
    let mut sampler = Sampler::new(7);
    for ctx in contexts() {
        round_trip(&ctx, &mut sampler, 100).unwrap_or_else(|e| panic!("{}: {e}", ctx.name()));
    }
}

#[test]
fn printed_examples() {
    let ctx = shipped_context("su3").unwrap().unwrap();
    let p = parse_expr("(wedge (vec E12) (vec E23))", &ctx).unwrap();
    let e12: Multivector = ctx.vector("E12").unwrap();
    assert_eq!(p, Element::Vector(e12.wedge(&ctx.vector("E23").unwrap()).unwrap()));
    let q = parse_expr("(scale \"1+i*a\" (vec E12))", &ctx).unwrap();
    assert_eq!(print_expr(&q), "(scale \"i*a + 1\" (vec E12))");
    let w = parse_expr("(add (cov dE12) (scale \"-1\" (cov dE12)))", &ctx).unwrap();
    assert_eq!(w, Element::Form(FormField::zero(ctx.basis())));
}

#[test]
fn fixtures_match_the_engine() {
    for name in ["su3", "sl2", "abelian2"] {
        let path = format!("{}/fixtures/{name}.ctx", env!("CARGO_MANIFEST_DIR"));
        let text = std::fs::read_to_string(&path).unwrap();
        let parsed = parse_context(&text).unwrap_or_else(|e| panic!("{path}: {e}"));
        let built = shipped_context(name).unwrap().unwrap();
        assert_eq!(parsed, built, "{name}");
        assert_eq!(write_context(&parsed), text, "{name}");
    }
}

#[test]
fn su3_fixture_is_quaternionic() {
    let text = std::fs::read_to_string(format!("{}/fixtures/su3.ctx", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let ctx = parse_context(&text).unwrap();
    let (i, j, k) = (ctx.structure(0).unwrap(), ctx.structure(1).unwrap(), ctx.structure(2).unwrap());
    let minus_one = hktlab_core::LinearOperator::identity(ctx.basis()).scale(&hktlab_core::Scalar::from_int(-1));
    for op in [i, j, k] {
        assert_eq!(op.compose(op), minus_one);
    }
    assert_eq!(i.compose(j), *k);
    assert_eq!(j.compose(i), k.scale(&hktlab_core::Scalar::from_int(-1)));
}

#[test]
fn abelian_fixture_has_no_brackets() {
    let text = std::fs::read_to_string(format!("{}/fixtures/abelian2.ctx", env!("CARGO_MANIFEST_DIR"))).unwrap();
    let ctx = parse_context(&text).unwrap();
    assert_eq!(ctx.bracket_table().count(), 0);
}

#[test]
fn non_antisymmetric_table_names_the_pair() {
    let text = "[basis]\nX\nY\nZ\n[brackets]\n[X, Y] = Z\n[Y, X] = Z\n";
    match parse_context(text) {
        Err(ParseError::Semantic { message, .. }) => assert!(message.contains("(Y, X)"), "{message}"),
        other => panic!("{other:?}"),
    }
}

fn structured(r: Result<impl Sized, ParseError>) -> bool {
    matches!(r, Ok(_) | Err(ParseError::Syntax { .. }) | Err(ParseError::Semantic { .. }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parsers_are_total(text in "\\PC{0,80}") {
        let ctx = shipped_context("sl2").unwrap().unwrap();
        prop_assert!(structured(parse_expr(&text, &ctx)));
        prop_assert!(structured(parse_context(&text)));
        prop_assert!(structured(parse_scalar(&text, ctx.vars())));
    }

    #[test]
    fn grammar_shaped_input_is_total(
        parts in proptest::collection::vec(
            prop_oneof![
                Just("("), Just(")"), Just("vec"), Just("cov"), Just("wedge"), Just("add"), Just("scale"),
                Just("H"), Just("E12"), Just("\"1/0\""), Just("\"2^99\""), Just("\"i*(\""), Just(" "), Just("\n"),
                Just("[basis]"), Just("[brackets]"), Just("[H, E12] ="), Just("->"), Just("#"), Just("unit"),
            ],
            0..40,
        )
    ) {
        let text: String = parts.concat();
        let ctx = shipped_context("sl2").unwrap().unwrap();
        prop_assert!(structured(parse_expr(&text, &ctx)));
        prop_assert!(structured(parse_context(&text)));
    }
}

#[test]
fn deep_nesting_is_rejected() {
    let ctx = shipped_context("sl2").unwrap().unwrap();
    let deep = format!("{}(vec H){}", "(wedge ".repeat(5000), ")".repeat(5000));
    assert!(parse_expr(&deep, &ctx).is_err());
    let scalar = format!("{}1{}", "(".repeat(5000), ")".repeat(5000));
    assert!(parse_scalar(&scalar, ctx.vars()).is_err());
    assert!(parse_scalar(&"-".repeat(5000), ctx.vars()).is_err());
}
