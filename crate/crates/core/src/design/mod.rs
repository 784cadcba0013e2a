//! Trial-design machinery: win-odds landscapes and a scenario simulator.
//!
//! Model assumptions (shared by the closed form, the Monte Carlo path and the
//! simulator): event times are exponential with a fixed follow-up window and
//! no censoring before it; the active arm's hazards are the control hazards
//! times one common hazard ratio; event-free subjects have a Normal continuous
//! outcome with a common standard deviation. With continuous distributions
//! the probability of a tie is zero.

mod overlay;
mod scenario;
mod sunset;

pub use overlay::{convex_hull, feasibility_overlay, is_simple, load_overlay_csv, FeasibilityOverlay, OverlayPoint};
pub use scenario::{hce_theta, simulate_trial, tune_mean_difference, Scenario};
pub use sunset::{
    default_iso_levels, linspace, solve_delta_for_wo, sunset_cell_closed_form, sunset_cell_mc, sunset_grid,
    sunset_theta_closed_form, GridMethod, GridSpec, McConfig, McEstimate, SunsetGrid, SunsetParams,
    DEFAULT_DELTA_RANGE, DEFAULT_HR_RANGE, DEFAULT_RESOLUTION,
};

/// Bisection for `f(x) = target` with `f` increasing on `[lo, hi]`.
pub(crate) fn bisect_increasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> Option<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo <= target && target <= fhi) {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
