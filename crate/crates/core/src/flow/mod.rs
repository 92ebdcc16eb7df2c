//! Negative-gradient-flow numerics on chart-based model manifolds.

pub mod expr;
mod hetero;
mod hypotheses;
mod integrate;
mod lyapunov;
mod scenario;
mod transform;
mod zeros;

pub use hetero::{
    detect_heteroclinics, find_homoclinic_cycles, CycleReport, DetectOptions, DetectionReport,
    HeteroclinicEdge, InconclusiveOrbit,
};
pub use hypotheses::{check_hypotheses, HypothesisReport};
pub use integrate::{
    integrate_flow, integrate_with, Direction, IntegrateOptions, Termination, Trajectory,
};
pub use lyapunov::{local_primitive, lyapunov_box, BoxOptions, LyapunovBox};
pub use scenario::{parse_scenario_json, FlowError, MetricSpec, Model, Scenario};
pub use transform::{perturb_metric, product_scenario};
pub use zeros::{find_zeros, Classification, ZeroPoint, ZeroReport};

/// Order-preserving parallel map over owned items; with `threads <= 1`
/// it degenerates to a plain sequential map, and the output order never
/// depends on the thread count.
pub fn par_map<T, U, F>(threads: usize, items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync,
{
    if threads <= 1 || items.len() <= 1 {
        return items.into_iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    let chunks: Vec<Vec<T>> = {
        let mut out = Vec::new();
        let mut it = items.into_iter();
        loop {
            let c: Vec<T> = it.by_ref().take(chunk).collect();
            if c.is_empty() {
                break;
            }
            out.push(c);
        }
        out
    };
    let f = &f;
    std::thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|c| scope.spawn(move || c.into_iter().map(f).collect::<Vec<U>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("worker panicked"))
            .collect()
    })
}
