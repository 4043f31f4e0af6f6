//! Retarded-time root solving.
//!
//! For a source worldline x_s(t′) and a target event (t, p), the retarded
//! time is the unique root of
//!
//! g(t′) = c (t − t′) − |p − x_s(t′)|,
//!
//! the time at which the source crosses the past lightcone of the event.
//! For subluminal sources g is strictly decreasing (g′ ∈ (−2c, 0)), so the
//! root is unique and bracketing is safe. The solver establishes a sign
//! change by geometric backward expansion and then refines with Newton steps
//! safeguarded by bisection.

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::kinematics::{BranchScenario, SpinConfiguration};
use crate::worldline::Worldline;

const MAX_ITER: usize = 120;
const MAX_BRACKET_EXPANSIONS: usize = 64;

/// Solution of the retarded-time equation for one (source, target event)
/// pair, with the derived quantities the integrands need.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetardedPoint {
    /// Retarded time t′ (s).
    pub t_ret: f64,
    /// Retarded displacement p − x_s(t′) (m).
    pub d_vec: Vec3,
    /// Retarded distance |d_vec| (m).
    pub d: f64,
    /// Liénard–Wiechert denominator d − d_vec·v_s(t′)/c (m).
    pub denom: f64,
    /// |c (t − t′) − d| at the returned root (m).
    pub residual: f64,
}

/// Solves the retarded-time equation for `target_pos` at coordinate time `t`
/// against the given source worldline.
///
/// `tol` is a length: the returned residual satisfies |g(t_ret)| ≤ tol.
/// Errors if the root lies before the source domain (the scenario lacks
/// static history) or if the iteration cap is hit.
///
/// Internally the root is found for the light delay τ = t − t′ rather than
/// t′ itself: the residual cτ − |p − x(t − τ)| then avoids the c·ε·|t|
/// cancellation noise that absolute-time iterates would carry, which matters
/// for windows measured in seconds.
pub fn retarded_time(
    source: &Worldline,
    target_pos: Vec3,
    t: f64,
    c: f64,
    tol: f64,
) -> Result<RetardedPoint> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("retardation tolerance must be positive, got {tol}")));
    }
    let (domain_lo, _) = source.domain();
    let tau_max = t - domain_lo;

    // g(τ) = cτ − |p − x(t − τ)|, strictly increasing in τ
    let g = |tau: f64| -> Result<f64> {
        let d = (target_pos - source.position(t - tau)?).norm();
        Ok(c * tau - d)
    };
    // g′(τ) = c − (p − x)·v / d ∈ (c − |v|, c + |v|)
    let g_prime = |tau: f64| -> Result<f64> {
        let dv = target_pos - source.position(t - tau)?;
        let d = dv.norm();
        if d == 0.0 {
            return Ok(c);
        }
        Ok(c - dv.dot(source.velocity(t - tau)?) / d)
    };

    let dist_now = (target_pos - source.position(t)?).norm();
    if dist_now == 0.0 {
        // degenerate: the event sits on the source
        return Ok(RetardedPoint {
            t_ret: t,
            d_vec: Vec3::ZERO,
            d: 0.0,
            denom: 0.0,
            residual: 0.0,
        });
    }

    // expand forward in delay until g changes sign; the first guess d/c is
    // exact for a static source
    let mut hi = dist_now / c;
    let mut g_hi;
    let mut expansions = 0;
    loop {
        if hi > tau_max {
            hi = tau_max;
        }
        g_hi = g(hi)?;
        if g_hi >= 0.0 {
            break;
        }
        if hi == tau_max {
            return Err(Error::RootOutsideDomain { needed: t - hi, domain_start: domain_lo });
        }
        expansions += 1;
        if expansions > MAX_BRACKET_EXPANSIONS {
            return Err(Error::NoConvergence { iterations: expansions, residual: g_hi.abs() });
        }
        hi *= 2.0;
    }

    let mut lo = 0.0f64; // g(0) = −dist_now < 0
    let mut x = if g_hi == 0.0 { hi } else { 0.5 * (lo + hi) };

    for iter in 0..MAX_ITER {
        let gx = g(x)?;
        if gx.abs() <= tol {
            return finish(source, target_pos, c, t - x, gx);
        }
        if gx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let gpx = g_prime(x)?;
        let newton = x - gx / gpx;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        // bracket collapsed to machine width: accept the midpoint
        if hi - lo <= f64::EPSILON * hi.max(f64::MIN_POSITIVE) {
            let gx = g(x)?;
            if gx.abs() <= tol.max(8.0 * f64::EPSILON * c * x) {
                return finish(source, target_pos, c, t - x, gx);
            }
            return Err(Error::NoConvergence { iterations: iter, residual: gx.abs() });
        }
    }
    let gx = g(x)?;
    Err(Error::NoConvergence { iterations: MAX_ITER, residual: gx.abs() })
}

fn finish(
    source: &Worldline,
    target_pos: Vec3,
    c: f64,
    t_ret: f64,
    g_value: f64,
) -> Result<RetardedPoint> {
    let d_vec = target_pos - source.position(t_ret)?;
    let d = d_vec.norm();
    let denom = d - d_vec.dot(source.velocity(t_ret)?) / c;
    if denom <= 0.0 && d > 0.0 {
        return Err(Error::Numerical(format!(
            "non-positive retardation denominator {denom} at t' = {t_ret}; source is not subluminal"
        )));
    }
    Ok(RetardedPoint {
        t_ret,
        d_vec,
        d,
        denom,
        residual: g_value.abs(),
    })
}

/// Retardation data for the ordered particle pair (a → b) of a scenario:
/// particle b observed at time `t`, particle a as the retarded source, both
/// on the branches selected by σ.
pub fn pair_retardation(
    scenario: &BranchScenario,
    sigma: &SpinConfiguration,
    a: usize,
    b: usize,
    t: f64,
) -> Result<RetardedPoint> {
    if a == b {
        return Err(Error::InvalidInput("self-interaction pair (a == b) is excluded".into()));
    }
    let target_pos = scenario.branch(sigma, b).position(t)?;
    retarded_time(
        scenario.branch(sigma, a),
        target_pos,
        t,
        scenario.constants().c,
        default_tolerance(scenario),
    )
}

/// Default retardation tolerance: 1e-12 of the scenario length scale, far
/// below any quadrature error budget.
pub fn default_tolerance(scenario: &BranchScenario) -> f64 {
    1e-12 * scenario.length_scale()
}

/// Forward image of a source breakpoint under the retarded-time map: the
/// observation time `t` at which the retarded time along `target` equals
/// `tau`. Solves c (t − τ) = |x_target(t) − x_source(τ)|, which is strictly
/// increasing in t. Returns `None` when the image lies beyond `search_hi`.
///
/// These images are the kink points of retarded integrands and become
/// quadrature panel boundaries.
pub fn breakpoint_image(
    source: &Worldline,
    target: &Worldline,
    tau: f64,
    c: f64,
    tol: f64,
    search_hi: f64,
) -> Result<Option<f64>> {
    let source_pos = source.position(tau)?;
    let (target_lo, target_hi) = target.domain();
    let cap = search_hi.min(target_hi);
    if tau >= cap {
        return Ok(None);
    }

    // work in the delay delta = t − τ, as in `retarded_time`; the target may
    // only be evaluated inside its own domain
    let delta_min = (target_lo - tau).max(0.0);
    let delta_max = cap - tau;
    if delta_min >= delta_max {
        return Ok(None);
    }
    let h = |delta: f64| -> Result<f64> {
        let d = (target.position(tau + delta)? - source_pos).norm();
        Ok(c * delta - d)
    };
    let h_prime = |delta: f64| -> Result<f64> {
        let dv = target.position(tau + delta)? - source_pos;
        let d = dv.norm();
        if d == 0.0 {
            return Ok(c);
        }
        Ok(c + dv.dot(target.velocity(tau + delta)?) / d)
    };

    if h(delta_min)? >= 0.0 {
        // the image sits at or before the target domain start, hence outside
        // any window the domain covers
        return Ok(if delta_min == 0.0 { Some(tau) } else { None });
    }
    let dist0 = (target.position(tau + delta_min)? - source_pos).norm();
    let mut hi = (dist0 / c).max(delta_min);
    let mut expansions = 0;
    loop {
        if hi >= delta_max {
            hi = delta_max;
            if h(hi)? < 0.0 {
                return Ok(None);
            }
            break;
        }
        if h(hi)? >= 0.0 {
            break;
        }
        expansions += 1;
        if expansions > MAX_BRACKET_EXPANSIONS {
            return Ok(None);
        }
        hi *= 2.0;
    }

    let mut lo = delta_min; // h(delta_min) < 0
    let mut x = 0.5 * (lo + hi);
    for _ in 0..MAX_ITER {
        let hx = h(x)?;
        if hx.abs() <= tol {
            return Ok(Some(tau + x));
        }
        if hx < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let hpx = h_prime(x)?;
        let newton = x - hx / hpx;
        x = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if hi - lo <= f64::EPSILON * hi.max(f64::MIN_POSITIVE) {
            return Ok(Some(tau + x));
        }
    }
    Err(Error::NoConvergence { iterations: MAX_ITER, residual: h(x)?.abs() })
}
