use hktlab_core::liealg::{param_a, sl2_algebra, su3_bivector, su3_structure};
use hktlab_core::properties::{
    cross_oracle, d_squared, frame_change_invariance, invert_round_trip, projector_algebra,
};
use hktlab_core::sample::Sampler;
use hktlab_core::schouten::{schouten_coordinate, schouten_leibniz};
use hktlab_core::twistor::{Chart, TwistorContext};
use hktlab_core::{FrameContext, Multivector, Scalar};
use proptest::prelude::*;

fn sl2() -> FrameContext {
    sl2_algebra().builder("sl2").unwrap().build().unwrap()
}

fn su3() -> FrameContext {
    su3_structure(&Scalar::var(&param_a()), true).unwrap()
}

fn twistor() -> TwistorContext {
    TwistorContext::new(1, Chart::Two).unwrap()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, failure_persistence: None, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(10))]

    #[test]
    fn brackets_agree_across_oracles_su3(seed in any::<u64>()) {
        cross_oracle(&su3(), &mut Sampler::new(seed), 10).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn brackets_agree_across_oracles_twistor(seed in any::<u64>()) {
        cross_oracle(&twistor().ctx, &mut Sampler::new(seed), 10).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn brackets_agree_across_oracles_sl2(seed in any::<u64>()) {
        cross_oracle(&sl2(), &mut Sampler::new(seed), 10).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn d_squares_to_zero(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        for ctx in [sl2(), su3(), twistor().ctx] {
            d_squared(&ctx, &mut s, 6).map_err(|e| TestCaseError::fail(format!("{}: {e}", ctx.name())))?;
        }
    }

    #[test]
    fn projectors_form_a_partition(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let ctx = su3();
        projector_algebra(&ctx, ctx.i_op().unwrap(), &mut s, 3).map_err(TestCaseError::fail)?;
        let t = twistor();
        projector_algebra(&t.ctx, &t.complex_structure().unwrap(), &mut s, 3).map_err(TestCaseError::fail)?;
    }

    #[test]
    fn inversion_round_trips(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let ctx = su3();
        invert_round_trip(&ctx, Some(ctx.i_op().unwrap()), &mut s, 2).map_err(TestCaseError::fail)?;
        let t = twistor();
        invert_round_trip(&t.ctx, None, &mut s, 2).map_err(TestCaseError::fail)?;
    }
}

proptest! {
    #![proptest_config(config(4))]

    #[test]
    fn brackets_survive_frame_changes(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        for ctx in [sl2(), su3(), twistor().ctx] {
            frame_change_invariance(&ctx, &mut s, 2).map_err(|e| TestCaseError::fail(format!("{}: {e}", ctx.name())))?;
        }
    }

    #[test]
    fn bivector_bracket_is_symmetric(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        for ctx in [su3(), twistor().ctx] {
            let p: Multivector = s.in_context(&ctx, 2, 3);
            let q: Multivector = s.in_context(&ctx, 2, 3);
            prop_assert_eq!(schouten_coordinate(&ctx, &p, &q).unwrap(), schouten_coordinate(&ctx, &q, &p).unwrap());
        }
    }

    #[test]
    fn bracket_is_a_derivation(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        for ctx in [su3(), twistor().ctx] {
            let p: Multivector = s.in_context(&ctx, 2, 2);
            let q: Multivector = s.in_context(&ctx, 2, 2);
            let x: Multivector = s.in_context(&ctx, 1, 2);
            let lhs = schouten_leibniz(&ctx, &p, &q.wedge(&x).unwrap()).unwrap();
            let rhs = schouten_leibniz(&ctx, &p, &q)
                .unwrap()
                .wedge(&x)
                .unwrap()
                .add(&q.wedge(&schouten_leibniz(&ctx, &p, &x).unwrap()).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn poisson_differential_squares_to_zero(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        let ctx = su3();
        let p = su3_bivector(&Scalar::var(&param_a()));
        let q: Multivector = s.in_context(&ctx, 2, 3);
        let pq = schouten_leibniz(&ctx, &p, &q).unwrap();
        prop_assert!(schouten_leibniz(&ctx, &p, &pq).unwrap().is_zero());
    }

    #[test]
    fn lie_bracket_satisfies_jacobi(seed in any::<u64>()) {
        let mut s = Sampler::new(seed);
        for ctx in [sl2(), su3(), twistor().ctx] {
            let x: Multivector = s.in_context(&ctx, 1, 3);
            let y: Multivector = s.in_context(&ctx, 1, 3);
            let z: Multivector = s.in_context(&ctx, 1, 3);
            let b = |u: &Multivector, v: &Multivector| ctx.lie_bracket(u, v).unwrap();
            let sum = b(&b(&x, &y), &z).add(&b(&b(&y, &z), &x)).add(&b(&b(&z, &x), &y));
            prop_assert!(sum.is_zero(), "{}: {}", ctx.name(), sum);
        }
    }
}

#[test]
fn hundred_bivectors_per_shipped_context() {
    for ctx in [su3(), twistor().ctx] {
        cross_oracle(&ctx, &mut Sampler::new(2024), 100).unwrap();
    }
}
