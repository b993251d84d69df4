use super::types::*;
use crate::scalar::{wrap_angle, Scalar};

/// Relative deviation of a gap from the median beyond which a case is resampled.
pub const IRREGULAR_GAP_TOLERANCE: f64 = 0.1;

pub fn is_irregular<T: Scalar>(case: &DrivingCase<T>) -> bool {
    let dt = case.meta.dt;
    let tol = dt * T::lit(IRREGULAR_GAP_TOLERANCE);
    case.frames.windows(2).any(|w| ((w[1].t - w[0].t) - dt).abs() > tol)
}

/// Linearly resamples onto a uniform grid with the median period when the
/// sampling is irregular; returns the case unchanged otherwise.
pub fn resample_if_irregular<T: Scalar>(case: DrivingCase<T>) -> DrivingCase<T> {
    if is_irregular(&case) {
        let dt = case.meta.dt;
        resample_uniform(&case, dt)
    } else {
        case
    }
}

fn lerp<T: Scalar>(a: T, b: T, s: T) -> T {
    a + (b - a) * s
}

fn lerp_body<T: Scalar>(a: &Body<T>, b: &Body<T>, s: T) -> Body<T> {
    Body {
        x: lerp(a.x, b.x, s),
        y: lerp(a.y, b.y, s),
        heading: wrap_angle(a.heading + wrap_angle(b.heading - a.heading) * s),
        speed: lerp(a.speed, b.speed, s),
        v_long: lerp(a.v_long, b.v_long, s),
        length: lerp(a.length, b.length, s),
        width: lerp(a.width, b.width, s),
        mass: lerp(a.mass, b.mass, s),
    }
}

fn interpolate<T: Scalar>(f0: &SceneFrame<T>, f1: &SceneFrame<T>, t: T) -> SceneFrame<T> {
    let s = (t - f0.t) / (f1.t - f0.t);
    let nearer = if s < T::lit(0.5) { f0 } else { f1 };
    let mut agents = Vec::with_capacity(nearer.agents.len());
    for a in &nearer.agents {
        let other = if std::ptr::eq(nearer, f0) { f1 } else { f0 };
        match other.agents.iter().find(|b| b.id == a.id) {
            Some(b) => {
                let (p, q) = if std::ptr::eq(nearer, f0) { (a, b) } else { (b, a) };
                agents.push(AgentState { id: a.id.clone(), kind: a.kind, body: lerp_body(&p.body, &q.body, s) });
            }
            None => agents.push(a.clone()),
        }
    }
    SceneFrame {
        t,
        ego: EgoState {
            body: lerp_body(&f0.ego.body, &f1.ego.body, s),
            section: nearer.ego.section,
            kin: Kinematics::default(),
        },
        agents,
    }
}

/// Resamples onto `t0 + k * dt` for every grid point within the case span.
pub fn resample_uniform<T: Scalar>(case: &DrivingCase<T>, dt: T) -> DrivingCase<T> {
    let t0 = case.start_time();
    let t_end = case.end_time();
    let steps = ((t_end - t0) / dt + T::lit(1e-9)).floor().to_usize().unwrap_or(0);
    let mut frames = Vec::with_capacity(steps + 1);
    let mut seg = 0;
    for k in 0..=steps {
        let t = t0 + dt * T::from_usize(k).expect("index fits");
        while seg + 2 < case.frames.len() && case.frames[seg + 1].t < t {
            seg += 1;
        }
        let (a, b) = (&case.frames[seg], &case.frames[seg + 1]);
        frames.push(interpolate(a, b, t.min(b.t)));
    }
    let mut meta = case.meta.clone();
    meta.dt = dt;
    DrivingCase { frames, crash: case.crash, meta, road: case.road, speed_source: case.speed_source }
}
