//! Worked examples with hand-computed expected values. Each check computes
//! the value through the library and compares it with a value derived
//! independently in this file.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use s2o_core::experience::*;
use s2o_core::fitting::*;
use s2o_core::harness::*;
use s2o_core::model::synthetic_level;
use s2o_core::pipeline::*;
use s2o_core::quadrature::time_average;
use s2o_core::safety::*;
use s2o_core::scalar::wrap_angle;
use s2o_core::trajectory::*;

use super::*;

#[derive(Debug, Clone, Copy)]
pub enum Expect {
    /// Closed form, 1e-9 relative.
    Close(f64),
    /// Quadrature against a fine-step oracle, 0.5% relative.
    Quadrature(f64),
    Range(f64, f64),
    AtLeast(f64),
    AtMost(f64),
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: &'static str,
    pub got: f64,
    pub expect: Expect,
}

impl Check {
    pub fn passed(&self) -> bool {
        let g = self.got;
        match self.expect {
            Expect::Close(w) => (g - w).abs() <= 1e-9 * w.abs().max(1e-3),
            Expect::Quadrature(w) => (g - w).abs() <= 5e-3 * w.abs(),
            Expect::Range(lo, hi) => (lo..=hi).contains(&g),
            Expect::AtLeast(lo) => g >= lo,
            Expect::AtMost(hi) => g <= hi,
        }
    }
}

fn check(name: &'static str, got: f64, expect: Expect) -> Check {
    Check { name, got, expect }
}

fn bool_check(name: &'static str, ok: bool) -> Check {
    check(name, if ok { 1.0 } else { 0.0 }, Expect::Close(1.0))
}

pub fn trajectory_checks() -> Vec<Check> {
    let mut c = case(vec![
        frame(0.0, body(0.0, 0.0, 0.0, 0.0), vec![]),
        frame(1.0, body(1.0, 0.0, 0.0, 0.0), vec![]),
        frame(2.0, body(2.0, 0.0, 0.0, 0.0), vec![]),
    ]);
    c.speed_source = SpeedSource::Positions;
    let speed = derive_kinematics(c).unwrap().frames[1].ego.body.speed;

    let wrap = case(vec![frame(0.0, body(0.0, 0.0, 3.1, 5.0), vec![]), frame(1.0, body(5.0, 0.0, -3.1, 5.0), vec![])]);
    let yaw = derive_kinematics(wrap).unwrap().frames[0].ego.kin.yaw_rate;
    vec![
        check("finite-difference speed at middle frame", speed, Expect::Close(1.0)),
        check("yaw rate across the heading wrap", yaw, Expect::Close(2.0 * PI - 6.2)),
    ]
}

pub fn safety_checks() -> Vec<Check> {
    let p = DsfParams::<f64>::default();
    let mover = Body::new(0.0, 0.0, 0.0, 10.0, 4.5, 1.8, 1500.0);
    let m_eq = virtual_mass(&mover, &p);

    let ego = body(0.0, 0.0, 0.0, 0.0);
    let slim = AgentState { id: "a".into(), kind: AgentKind::Car, body: Body::new(3.0, 4.0, 0.0, 0.0, 4.0, 1.0, 1500.0) };
    let r_eq = equivalent_distance(&ego, &slim).unwrap();

    let unit = DsfParams { g: 1.0, k1: 1.0, a: 0.0, ..DsfParams::default() };
    let light = AgentState { id: "b".into(), kind: AgentKind::Car, body: Body::new(10.0, 0.0, 0.0, 0.0, 2.0, 2.0, 100.0) };
    let still = agent_risk(&ego, &light, &unit).unwrap();
    let closing = Body::new(0.0, 0.0, 0.0, 100f64.ln(), 4.5, 1.8, 1500.0);
    let approaching = agent_risk(&closing, &light, &unit).unwrap();

    let times: Vec<f64> = (0..=100).map(|i| i as f64 * 0.1).collect();
    let ramp: Vec<f64> = times.clone();
    let ramp_mean = time_average(&times, &ramp).unwrap();

    let spec = GridSpec { cell: 1.0, rows: 20, cols: 40 };
    let (ax, ay) = (12.3, -1.6);
    let scene = frame(0.0, body(0.0, 0.0, 0.0, 5.0), vec![car("a", ax, ay, 0.0, 5.0)]);
    let grid = risk_heatmap(&scene, &p, &spec);
    let (r, col) = grid.argmax();
    let (cx, cy) = grid.cell_center(r, col);
    // Cell centres sit on half-integers for this window.
    let nearest = ((ax - 0.5f64).round() + 0.5, (ay - 0.5f64).round() + 0.5);
    let top = grid.get(r, col);
    let unique = grid.values.iter().filter(|v| **v == top).count() == 1;

    vec![
        check("virtual mass of a 1500 kg car at 10 m/s", m_eq, Expect::Close(1500.0 * (0.05 * 10.0 + 1.0))),
        check("equivalent distance with aspect ratio 4", r_eq, Expect::Close(73f64.sqrt())),
        check("risk with zero closing speed", still, Expect::Close(1.0 + 1.0 / 100.0)),
        check("risk with closing term ln(100)", approaching, Expect::Close(2.0)),
        check("time average of a 0 to 10 ramp", ramp_mean, Expect::Close(5.0)),
        bool_check("heatmap argmax is the unique cell nearest the agent", unique && (cx, cy) == nearest),
    ]
}

fn u_turn_case() -> DrivingCase<f64> {
    let dt = 0.1;
    let v = 5.0;
    let mut frames = Vec::new();
    let (mut x, mut y) = (0.0, 0.0);
    for i in 0..=130 {
        let t = i as f64 * dt;
        let h = PI * (t / 8.0).min(1.0);
        if i > 0 {
            let hp = PI * ((t - dt) / 8.0).min(1.0);
            let hm = 0.5 * (h + hp);
            x += v * hm.cos() * dt;
            y += v * hm.sin() * dt;
        }
        frames.push(frame(t, body(x, y, wrap_angle(h), v), vec![]));
    }
    case(frames)
}

fn braking_case() -> DrivingCase<f64> {
    straight_case(0.05, 4.0, |t| 20.0 - 7.0 * (t - 1.0).clamp(0.0, 0.5))
}

fn events_of(c: DrivingCase<f64>, kind: MotionEventKind) -> (f64, f64) {
    let cp = ComfortParams::default();
    let c = derive_kinematics(c).unwrap();
    let n = detect_motion_events(&c, &cp).iter().filter(|e| e.kind == kind).count();
    let peak = unpleasant_motion_loss(&c, &cp).into_iter().fold(0.0, f64::max);
    (n as f64, peak)
}

pub fn experience_checks() -> Vec<Check> {
    let lim = 60.0 / 3.6;
    let e135 = instantaneous_efficiency(1.35 * lim, lim).unwrap();

    let half = straight_case(0.01, 20.0, |t| if t < 10.0 { lim } else { 0.5 * lim });
    let eff = efficiency_score(&half, &half.road).unwrap();
    let eff_oracle = fine_average(|t| if t < 10.0 { 0.0 } else { 1.0 - 0.5 }, 0.0, 20.0, 200_000);

    let (turns, turn_peak) = events_of(u_turn_case(), MotionEventKind::UTurn);
    let (stops, stop_peak) = events_of(braking_case(), MotionEventKind::EmergencyStop);

    let cp = ComfortParams::<f64>::default();
    let turning = instantaneous_comfort(0.1, 10.0, 0.0, 0.0, &cp);
    let jerky = instantaneous_comfort(0.0, 0.0, 2.0, 0.0, &cp);

    let mut frames = Vec::new();
    for i in 0..=1000 {
        let t = i as f64 * 0.01;
        let mut f = frame(t, body(0.0, 0.0, 0.0, 0.0), vec![]);
        f.ego.kin.jerk_long = if t < 5.0 { 2.0 } else { 0.0 };
        frames.push(f);
    }
    let jerk_mean = comfort_score(&case(frames), &cp).unwrap();
    let jerk_oracle = fine_average(|t| if t < 5.0 { 0.5 * 4.0 } else { 0.0 }, 0.0, 10.0, 100_000);

    let vp = VehicleParams::<f64>::default();
    let road = RoadContext::<f64>::default();
    let at36 = power_terms(10.0, 1.0, 1500.0, &vp, &road);
    let at100 = power_terms(100.0 / 3.6, 0.0, 1500.0, &vp, &road);
    let cruise = derive_kinematics(straight_case(0.1, 10.0, |_| 100.0 / 3.6)).unwrap();
    let energy = energy_score(&cruise, &vp, &cruise.road).unwrap();
    let wind100 = 0.3 * 2.0 * 1e6 / 76140.0;
    let roll100 = 1500.0 * 9.81 * 0.015 * 100.0 / 3600.0;

    vec![
        check("efficiency at 1.35 times the limit", e135, Expect::Close(0.5)),
        check("efficiency half at the limit, half at half the limit", eff, Expect::Quadrature(eff_oracle)),
        check("180 degree reversal in 8 s counts one u-turn", turns, Expect::Close(1.0)),
        check("u-turn penalty is not stacked", turn_peak, Expect::Close(5.0)),
        check("7 m/s^2 for 0.5 s counts one emergency stop", stops, Expect::Close(1.0)),
        check("emergency stop penalty is not stacked", stop_peak, Expect::Close(5.0)),
        check("comfort of omega 0.1 at 10 m/s", turning, Expect::Close(1.0)),
        check("comfort of jerk 2 with k 0.5", jerky, Expect::Close(2.0)),
        check("comfort with jerk 2 over half the case", jerk_mean, Expect::Quadrature(jerk_oracle)),
        check("acceleration power at 36 km/h and 1 m/s^2", at36.accel, Expect::Close(1.1 * 1500.0 * 36.0 / 3600.0)),
        check("drag power at 100 km/h", at100.wind, Expect::Close(wind100)),
        check("rolling power at 36 km/h", at36.roll, Expect::Close(14715.0 * 0.015 * 36.0 / 3600.0)),
        check("cruise energy at 100 km/h", energy, Expect::Close(wind100 + roll100)),
    ]
}

/// Normalized points labelled by the reference integrator's mid row, which
/// puts all-100 in high and all-60 in low.
fn synthetic_levels(n: usize, seed: u64) -> (Vec<NormalizedScores<f64>>, Vec<Level>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let xs: Vec<NormalizedScores<f64>> =
        (0..n).map(|_| NormalizedScores::from_array([(); 4].map(|_| rng.gen_range(60.0..=100.0)))).collect();
    let ys = xs.iter().map(synthetic_level).collect();
    (xs, ys)
}

pub fn pipeline_checks() -> Vec<Check> {
    let (xs, ys) = synthetic_levels(600, 3);
    let svm = train_svm(&xs, &ys, &SvmParams::default()).unwrap().model;
    let top = classify_segment(&NormalizedScores::from_array([100.0; 4]), &svm, false);
    let bottom = classify_segment(&NormalizedScores::from_array([60.0; 4]), &svm, false);

    let w = SegmentWeights::<f64>::reference();
    let flat = |v| NormalizedScores::from_array([v; 4]);
    vec![
        check("all-100 classified high", top.index() as f64, Expect::Close(Level::High.index() as f64)),
        check("all-60 classified low", bottom.index() as f64, Expect::Close(Level::Low.index() as f64)),
        check("high row at 100", integrate(&flat(100.0), &w, Level::High), Expect::Close((0.010 + 0.103 + 0.507 + 0.238) * 100.0 + 10.0)),
        check("mid row at 80", integrate(&flat(80.0), &w, Level::Mid), Expect::Close((0.160 + 0.343 + 0.161 + 0.166) * 80.0 + 10.0)),
        check("low row at 60", integrate(&flat(60.0), &w, Level::Low), Expect::Close((0.165 + 0.235 + 0.010 + 0.280) * 60.0 + 10.0)),
    ]
}

/// Clusters around 65, 80 and 95 on every axis with half-width 2.5, so
/// neighbouring clusters are at least 10 apart.
pub fn separable_clusters(per_class: usize, seed: u64) -> (Vec<NormalizedScores<f64>>, Vec<Level>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (centre, level) in [(65.0, Level::Low), (80.0, Level::Mid), (95.0, Level::High)] {
        for _ in 0..per_class {
            xs.push(NormalizedScores::from_array([(); 4].map(|_| centre + rng.gen_range(-2.5..=2.5))));
            ys.push(level);
        }
    }
    (xs, ys)
}

fn majority_prior(ys: &[Level]) -> f64 {
    let mut counts = [0usize; 3];
    for y in ys {
        counts[y.index()] += 1;
    }
    *counts.iter().max().unwrap() as f64 / ys.len() as f64
}

/// Samples generated exactly from the reference rows.
pub fn reference_samples(per_level: usize, seed: u64) -> Vec<FitSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = SegmentWeights::reference();
    let mut out = Vec::new();
    for level in Level::ALL {
        for _ in 0..per_level {
            let features = NormalizedScores::from_array([(); 4].map(|_| rng.gen_range(60.0..=100.0)));
            out.push(FitSample { features, target: integrate(&features, &w, level), level });
        }
    }
    out
}

/// Ordinary least squares through the normal equations with Gaussian
/// elimination; the unconstrained reference for the bound check.
pub fn least_squares(xs: &[[f64; 4]], ys: &[f64]) -> [f64; 4] {
    let mut a = [[0.0; 5]; 4];
    for (x, y) in xs.iter().zip(ys) {
        for i in 0..4 {
            for j in 0..4 {
                a[i][j] += x[i] * x[j];
            }
            a[i][4] += x[i] * y;
        }
    }
    for col in 0..4 {
        let piv = (col..4).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs())).unwrap();
        a.swap(col, piv);
        for row in 0..4 {
            if row != col {
                let f = a[row][col] / a[col][col];
                let pivot = a[col];
                for (x, p) in a[row].iter_mut().zip(pivot).skip(col) {
                    *x -= f * p;
                }
            }
        }
    }
    [0, 1, 2, 3].map(|i| a[i][4] / a[i][i])
}

pub fn fitting_checks() -> Vec<Check> {
    let mut ratings = vec![0.0, 100.0];
    ratings.extend([80.0; 8]);
    let trimmed = ground_truth("c", &ratings).unwrap().score;

    let mut terms: Vec<TermScores<f64>> =
        (0..999).map(|i| TermScores { safety: i as f64, efficiency: (i % 7) as f64, comfort: (i % 5) as f64, energy: (i % 3) as f64 }).collect();
    terms.push(TermScores { safety: 1e6, efficiency: 1.0, comfort: 1.0, energy: 1.0 });
    let robust = calibrate_normalization(&terms, CalibrationMode::Robust).unwrap();
    // Sorted safety column is 0..=998 then 1e6; position 0.99 * 999.
    let pos: f64 = 0.99 * 999.0;
    let p99 = pos.floor() + (pos - pos.floor());

    let (xs, ys) = separable_clusters(60, 8);
    let svm = train_svm(&xs, &ys, &SvmParams::default()).unwrap().model;
    let sep_acc = accuracy(&svm, &xs, &ys);

    let (nx, mut ny) = synthetic_levels(900, 21);
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for i in (1..ny.len()).rev() {
        ny.swap(i, rng.gen_range(0..=i));
    }
    let null = train_svm(&nx, &ny, &SvmParams::default()).unwrap().model;
    let null_gap = (accuracy(&null, &nx, &ny) - majority_prior(&ny)).abs();

    let samples = reference_samples(30, 5);
    let fitted = fit_weights(&samples).unwrap();
    let truth = SegmentWeights::<f64>::reference();
    let mut linf = (fitted.offset - truth.offset).abs();
    for l in Level::ALL {
        linf = linf.max(max_abs_diff(&fitted.row(l).to_array(), &truth.row(l).to_array()));
    }
    let fit_mae = mae(&samples, &fitted);

    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let signed = [0.3, -0.2, 0.25, 0.2];
    let feats: Vec<NormalizedScores<f64>> =
        (0..40).map(|_| NormalizedScores::from_array([(); 4].map(|_| rng.gen_range(60.0..=100.0)))).collect();
    let targets: Vec<f64> = feats.iter().map(|f| 10.0 + f.to_array().iter().zip(signed).map(|(x, w)| x * w).sum::<f64>()).collect();
    let bounded = fit_segment_fixed_offset(&feats, &targets, 10.0).unwrap();
    let xs4: Vec<[f64; 4]> = feats.iter().map(|f| f.to_array()).collect();
    let shifted: Vec<f64> = targets.iter().map(|t| t - 10.0).collect();
    let free = least_squares(&xs4, &shifted);

    let clean = linear_dataset(200, 0.0, 41);
    let (_, clean_fit) = cross_validate(&clean, &FitConfig::default()).unwrap();
    let worst_clean = clean_fit.per_repeat.iter().cloned().fold(0.0, f64::max);
    let noisy = linear_dataset(400, 3.0, 42);
    let (_, noisy_fit) = cross_validate(&noisy, &FitConfig::default()).unwrap();
    let e_abs = 3.0 * (2.0 / PI).sqrt();

    vec![
        check("trimmed mean of [0, 80 x 8, 100]", trimmed, Expect::Close(80.0)),
        check("robust upper calibration bound", robust.safety.max, Expect::Close(p99)),
        check("separable clusters train accuracy", sep_acc, Expect::Close(1.0)),
        check("permuted labels accuracy minus majority prior", null_gap, Expect::AtMost(0.10)),
        check("exact recovery weight error", linf, Expect::AtMost(1e-6)),
        check("exact recovery training MAE", fit_mae, Expect::AtMost(1e-8)),
        check("unconstrained fit sees the negative weight", free[1], Expect::Close(-0.2)),
        check("bounded fit clamps the negative weight", bounded.efficiency, Expect::AtMost(1e-9)),
        check("noise-free cross-validation worst repeat MAE", worst_clean, Expect::AtMost(1e-6)),
        check("sigma 3 cross-validation mean MAE", noisy_fit.validation_mae, Expect::Range(0.8 * e_abs, 1.3 * e_abs)),
    ]
}

pub fn idm_equilibrium_gap(v: f64, p: &IdmParams) -> f64 {
    (p.min_gap + v * p.time_headway) / (1.0 - (v / p.v0).powi(4)).sqrt()
}

/// Ego on IDM behind a constant-speed leader; returns (crash, final gap,
/// final ego speed).
pub fn idm_follow(leader_speed: f64, dt: f64, duration: f64) -> (bool, f64, f64) {
    let mut spec = ScenarioSpec::new(ScenarioKind::CarFollowing, 1, duration, 1);
    spec.dt = dt;
    spec.ego_speed_factor = Some(0.9);
    spec.section = Some(RoadSection::UrbanRegular);
    spec.initial = vec![AgentInit { kind: AgentKind::Car, lane: 0, offset: 60.0, speed: leader_speed, behaviour: Longitudinal::Constant, lane_change: None }];
    let world = generate_scenario(&spec).unwrap();
    let c = run_closed_loop(&world, &mut IdmPlanner::default(), dt, duration).unwrap();
    let last = c.frames.last().unwrap();
    let lead = &last.agents[0].body;
    let gap = lead.x - last.ego.body.x - 0.5 * (lead.length + last.ego.body.length);
    (c.crash, gap, last.ego.body.speed)
}

pub fn harness_checks() -> Vec<Check> {
    let p = IdmParams { v0: 20.0, ..IdmParams::default() };
    let s_star = p.min_gap + 20.0 * p.time_headway;
    let at_gap = idm_accel(20.0, s_star, 0.0, &p).unwrap();

    let leader = 10.0;
    let (crash, gap, _) = idm_follow(leader, 0.01, 120.0);
    let expected = idm_equilibrium_gap(leader, &IdmParams::default());

    let reports: Vec<(String, EvaluationReport<f64>)> = (0..1000)
        .map(|i| {
            let n = NormalizedScores::from_array([80.0; 4]);
            let r = EvaluationReport { raw: TermScores::default(), normalized: n, segment: Level::Mid, crash: false, integrated: 0.0, final_score: 0.0 };
            (format!("c{i}"), r)
        })
        .collect();
    let rated = synthetic_rating_oracle(&reports, &SegmentWeights::reference(), &OracleParams { sigma: 3.0, raters: 40, seed: 12 }).unwrap();
    let in_band = rated
        .iter()
        .filter(|c| {
            let n = c.ratings.len() as f64;
            let m = c.ratings.iter().sum::<f64>() / n;
            let sd = (c.ratings.iter().map(|r| (r - m).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
            (2.2..=3.8).contains(&sd)
        })
        .count() as f64
        / rated.len() as f64;

    vec![
        check("IDM at the desired gap brakes at a_max", at_gap, Expect::Close(-p.a_max)),
        bool_check("IDM follower does not crash", !crash),
        check("IDM terminal gap relative to equilibrium", gap / expected, Expect::Range(0.9, 1.1)),
        check("share of cases with rater std in [2.2, 3.8]", in_band, Expect::AtLeast(0.95)),
    ]
}

pub fn all_checks() -> Vec<Check> {
    let mut out = trajectory_checks();
    out.extend(safety_checks());
    out.extend(experience_checks());
    out.extend(pipeline_checks());
    out.extend(fitting_checks());
    out.extend(harness_checks());
    out
}
