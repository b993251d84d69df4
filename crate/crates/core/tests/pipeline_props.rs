use proptest::prelude::*;

use s2o_core::harness::*;
use s2o_core::model::default_model;
use s2o_core::pipeline::*;
use s2o_core::trajectory::*;
use s2o_core::{Case, Model, Params, ParamsF32};

fn raw_terms_strategy() -> impl Strategy<Value = TermScores<f64>> {
    (0.0..1e6f64, 0.0..1.0f64, 0.0..200.0f64, -50.0..200.0f64)
        .prop_map(|(s, e, c, g)| TermScores { safety: s, efficiency: e, comfort: c, energy: g })
}

fn normalized_strategy() -> impl Strategy<Value = [f64; 4]> {
    [60.0..=100.0f64, 60.0..=100.0f64, 60.0..=100.0f64, 60.0..=100.0f64]
}

fn level_strategy() -> impl Strategy<Value = Level> {
    prop_oneof![Just(Level::Low), Just(Level::Mid), Just(Level::High)]
}

fn corpus_case(seed: u64, index: usize) -> Case {
    let spec = corpus_spec(seed, index);
    let world = generate_scenario(&spec).unwrap();
    let name = ["idm", "conservative", "aggressive"][index % 3];
    let mut planner = planner_by_name(name).unwrap();
    run_closed_loop(&world, planner.as_mut(), world.dt, world.duration).unwrap()
}

fn stream_last(case: &Case, params: &Params, model: &Model) -> Vec<EvaluationReport<f64>> {
    let mut s = StreamEvaluator::new(*params, *model, case.road);
    s.set_crash(case.crash);
    case.frames.iter().filter_map(|f| s.push(f.clone()).unwrap()).map(|r| r.report).collect()
}

const F32_TOL: f64 = 0.5;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn crash_absorbs_everything(raw in raw_terms_strategy()) {
        let r = score_terms(raw, true, &default_model()).unwrap();
        prop_assert_eq!(r.final_score, 0.0);
        prop_assert_eq!(r.segment, Level::Low);
    }

    #[test]
    fn non_crash_scores_stay_in_range(raw in raw_terms_strategy()) {
        let r = score_terms(raw, false, &default_model()).unwrap();
        prop_assert!((10.0..=112.0).contains(&r.final_score), "{}", r.final_score);
        prop_assert_eq!(r.final_score, r.integrated);
    }

    #[test]
    fn integrator_is_monotone(n in normalized_strategy(), level in level_strategy(), k in 0usize..4, bump in 0.0..40.0f64) {
        let w = SegmentWeights::reference();
        let base = NormalizedScores::from_array(n);
        let mut up = n;
        up[k] = (up[k] + bump).min(100.0);
        prop_assert!(integrate(&NormalizedScores::from_array(up), &w, level) >= integrate(&base, &w, level));
    }

    #[test]
    fn dyadic_affine_rescaling_is_bit_identical(
        ticks in [0i64..4096, 0i64..4096, 0i64..4096, 0i64..4096],
        lo in 0i64..1000, span in 1i64..3000, exp in -6i32..6, shift in -4096i64..4096,
    ) {
        // Multiples of 1/64 with small magnitude keep every operation exact.
        let q = |v: i64| v as f64 / 64.0;
        let range = TermRange { min: q(lo), max: q(lo + span) };
        let cal = CalibrationTable::from_ranges([range; 4]);
        let raw = TermScores::from_array(ticks.map(q));
        let a = 2f64.powi(exp);
        let b = q(shift);
        let tr = |v: f64| a * v + b;
        let cal2 = CalibrationTable::from_ranges([TermRange { min: tr(range.min), max: tr(range.max) }; 4]);
        let n1 = normalize(&raw, &cal).unwrap();
        let n2 = normalize(&raw.map(tr), &cal2).unwrap();
        prop_assert_eq!(n1, n2);
    }

    #[test]
    fn affine_rescaling_preserves_order(
        x in raw_terms_strategy(), y in raw_terms_strategy(), a in 1e-3..1e3f64, b in -1e3..1e3f64,
    ) {
        let cal = CalibrationTable::from_ranges([
            TermRange { min: 0.0, max: 1e5 },
            TermRange { min: 0.0, max: 1.0 },
            TermRange { min: 0.0, max: 150.0 },
            TermRange { min: -10.0, max: 150.0 },
        ]);
        let tr = |v: f64| a * v + b;
        let cal2 = CalibrationTable::from_ranges(cal.ranges().map(|r| TermRange { min: tr(r.min), max: tr(r.max) }));
        let (nx, ny) = (normalize(&x, &cal).unwrap().to_array(), normalize(&y, &cal).unwrap().to_array());
        let (mx, my) = (normalize(&x.map(tr), &cal2).unwrap().to_array(), normalize(&y.map(tr), &cal2).unwrap().to_array());
        for k in 0..4 {
            prop_assert!((nx[k] - mx[k]).abs() <= 1e-9);
            if (nx[k] - ny[k]).abs() > 1e-9 {
                prop_assert_eq!(nx[k] < ny[k], mx[k] < my[k]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn stream_matches_batch(seed in 0u64..1_000_000, index in 0usize..1000) {
        let case = corpus_case(seed, index);
        let params = Params::default();
        let model = default_model();
        let batch = evaluate_case(&case, &params, &model).unwrap();
        let reports = stream_last(&case, &params, &model);
        prop_assert_eq!(reports.len(), case.frames.len() - 1);
        let last = reports.last().unwrap();
        let (a, b) = (batch.raw.to_array(), last.raw.to_array());
        for k in 0..4 {
            prop_assert!(rel(a[k], b[k]) <= 1e-9, "term {k}: batch {} stream {}", a[k], b[k]);
        }
        prop_assert_eq!(batch.segment, last.segment);
        prop_assert_eq!(batch.crash, last.crash);
        prop_assert!(rel(batch.final_score, last.final_score) <= 1e-9);
    }

    #[test]
    fn f32_tracks_f64(seed in 0u64..1_000_000, index in 0usize..1000) {
        let case = corpus_case(seed, index);
        let r64 = evaluate_case(&case, &Params::default(), &default_model()).unwrap();
        let r32 = evaluate_case(&case.cast::<f32>(), &ParamsF32::default(), &default_model().cast::<f32>()).unwrap();
        let n64 = r64.normalized.to_array();
        let n32 = r32.normalized.to_array();
        // Jerk is a second difference, so comfort carries most of the f32 error.
        for k in 0..4 {
            prop_assert!((n64[k] - n32[k] as f64).abs() <= F32_TOL, "term {k}: {} vs {}", n64[k], n32[k]);
        }
        if r64.segment == r32.segment {
            prop_assert!((r64.final_score - r32.final_score as f64).abs() <= F32_TOL);
        }
    }
}

#[test]
fn stream_emits_nothing_for_one_frame() {
    let case = corpus_case(1, 0);
    let mut s = StreamEvaluator::new(Params::default(), default_model(), case.road);
    assert!(s.push(case.frames[0].clone()).unwrap().is_none());
    assert!(s.push(case.frames[0].clone()).is_err());
}

#[test]
fn crash_mid_stream_zeroes_the_rest() {
    let mut spec = ScenarioSpec::new(ScenarioKind::CarFollowing, 1, 20.0, 3);
    spec.section = Some(RoadSection::UrbanRegular);
    spec.initial = vec![AgentInit { kind: AgentKind::Car, lane: 0, offset: 40.0, speed: 0.0, behaviour: Longitudinal::Constant, lane_change: None }];
    let world = generate_scenario(&spec).unwrap();
    let case = run_closed_loop(&world, &mut ConstantAccelPlanner::new(1.0), world.dt, world.duration).unwrap();
    assert!(case.crash);
    let hit = case.frames.iter().position(frame_collides).unwrap();
    let reports = stream_last(&Case { crash: false, ..case.clone() }, &Params::default(), &default_model());
    assert!(reports[..hit - 1].iter().all(|r| !r.crash && r.final_score > 0.0));
    assert!(reports[hit - 1..].iter().all(|r| r.crash && r.final_score == 0.0));
}

#[test]
fn crashed_case_scores_zero_in_batch() {
    let mut case = corpus_case(2, 5);
    case.crash = true;
    let r = evaluate_case(&case, &Params::default(), &default_model()).unwrap();
    assert_eq!(r.final_score, 0.0);
    assert_eq!(r.segment, Level::Low);
}

#[test]
fn evaluation_is_deterministic() {
    let case = corpus_case(9, 14);
    let a = evaluate_case(&case, &Params::default(), &default_model()).unwrap();
    let b = evaluate_case(&case.clone(), &Params::default(), &default_model()).unwrap();
    assert_eq!(a, b);
}
