use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::planner::{DrivingStyle, ErraticPlanner, GapAcceptancePlanner, IdmPlanner, Planner};
use super::scenario::{generate_scenario, ScenarioKind, ScenarioSpec, MAX_SCENARIO_AGENTS};
use super::sim::run_closed_loop;
use crate::error::Result;
use crate::trajectory::{DrivingCase, RoadSection};

const KINDS: [ScenarioKind; 4] = [ScenarioKind::CarFollowing, ScenarioKind::Overtake, ScenarioKind::Merge, ScenarioKind::MultiAgent];

/// Planner names used by [`generate_corpus`], cycled per case. "sampled" is
/// a gap-acceptance driver with parameters drawn per case, "erratic" adds a
/// drawn throttle oscillation to one.
pub const CORPUS_PLANNERS: [&str; 5] = ["idm", "conservative", "aggressive", "sampled", "erratic"];

/// Gap-acceptance driver with randomly drawn headway, acceleration limits,
/// desired speed and gap thresholds.
pub fn sampled_planner(rng: &mut ChaCha8Rng) -> GapAcceptancePlanner {
    let mut p = GapAcceptancePlanner::new(DrivingStyle::Aggressive);
    p.idm.time_headway = rng.gen_range(0.4..3.0);
    p.idm.min_gap = rng.gen_range(1.0..4.0);
    p.idm.a_max = rng.gen_range(0.8..3.5);
    p.idm.b_comf = rng.gen_range(1.0..4.5);
    p.speed_factor = rng.gen_range(0.5..1.4);
    p.accept_front = rng.gen_range(8.0..50.0);
    p.accept_rear = rng.gen_range(5.0..35.0);
    p.overtake_margin = rng.gen_range(0.5..6.0);
    p
}

pub fn planner_by_name(name: &str) -> Option<Box<dyn Planner>> {
    match name {
        "idm" => Some(Box::new(IdmPlanner::default())),
        "conservative" => Some(Box::new(GapAcceptancePlanner::new(DrivingStyle::Conservative))),
        "aggressive" => Some(Box::new(GapAcceptancePlanner::new(DrivingStyle::Aggressive))),
        _ => None,
    }
}

/// Randomized scenario spec number `index` of a corpus.
pub fn corpus_spec(seed: u64, index: usize) -> ScenarioSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let kind = KINDS[index % KINDS.len()];
    let mut spec = ScenarioSpec::new(kind, rng.gen_range(1..=MAX_SCENARIO_AGENTS), rng.gen_range(15.0..35.0), rng.gen());
    spec.name = Some(format!("corpus-{index:05}"));
    spec.section = Some(RoadSection::ALL[rng.gen_range(0..RoadSection::ALL.len())]);
    spec.ego_speed_factor = Some(rng.gen_range(0.2..1.3));
    spec
}

/// `count` closed-loop cases over varied scenes and planners, in index order.
pub fn generate_corpus(count: usize, seed: u64) -> Result<Vec<DrivingCase<f64>>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let spec = corpus_spec(seed, i);
            let world = generate_scenario(&spec)?;
            let name = CORPUS_PLANNERS[(i / KINDS.len()) % CORPUS_PLANNERS.len()];
            let mut planner: Box<dyn Planner> = match name {
                "sampled" => {
                    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                    Box::new(sampled_planner(&mut rng))
                }
                "erratic" => {
                    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
                    let mut base = sampled_planner(&mut rng);
                    base.speed_factor = rng.gen_range(0.2..1.0);
                    Box::new(ErraticPlanner {
                        base,
                        amplitude: rng.gen_range(0.5..4.0),
                        period: rng.gen_range(3.0..10.0),
                        phase: rng.gen_range(0.0..std::f64::consts::TAU),
                    })
                }
                _ => planner_by_name(name).expect("known planner"),
            };
            run_closed_loop(&world, planner.as_mut(), world.dt, world.duration)
        })
        .collect()
}
