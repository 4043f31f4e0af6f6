//! Lorentz boosts of worldlines and scenarios.
//!
//! A boosted polynomial worldline is no longer polynomial in the new frame
//! time, so boosted segments are refit adaptively: each original segment is
//! sampled at four points (endpoints included, which keeps continuity exact),
//! the transformed events are interpolated by a cubic in the boosted time,
//! and segments are bisected until the fit error is below the requested
//! budget. Static and uniform-motion segments transform exactly.
//!
//! Used by the invariance checks: the exact-model phase of a scenario whose
//! particles start and end at the same positions and rest near the window
//! ends is unchanged by a common boost of all worldlines and the window.

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::kinematics::{BranchScenario, ParticleBranches};
use crate::worldline::{Segment, Worldline};

/// An active Lorentz boost with velocity β·c.
#[derive(Debug, Clone, Copy)]
pub struct Boost {
    beta: Vec3,
    gamma: f64,
    c: f64,
}

impl Boost {
    pub fn new(beta: Vec3, c: f64) -> Result<Self> {
        let b2 = beta.norm_squared();
        if b2 >= 1.0 {
            return Err(Error::InvalidInput(format!("boost speed |beta| = {} must be < 1", beta.norm())));
        }
        Ok(Self { beta, gamma: 1.0 / (1.0 - b2).sqrt(), c })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Transforms an event (t, x) into the boosted frame.
    pub fn event(&self, t: f64, x: Vec3) -> (f64, Vec3) {
        let b2 = self.beta.norm_squared();
        if b2 == 0.0 {
            return (t, x);
        }
        let bx = self.beta.dot(x);
        let t_p = self.gamma * (t - bx / self.c);
        let x_p = x + self.beta * ((self.gamma - 1.0) * bx / b2 - self.gamma * self.c * t);
        (t_p, x_p)
    }
}

/// Refits one original-segment time span [ta, tb] in the boosted frame,
/// splitting until the positional fit error is within `tol` (m).
fn refit_span(
    w: &Worldline,
    boost: &Boost,
    ta: f64,
    tb: f64,
    tol: f64,
    depth: usize,
    out: &mut Vec<Segment>,
) -> Result<()> {
    if depth > 40 {
        return Err(Error::Numerical("boost refit did not converge; worldline too wild".into()));
    }
    // four interpolation nodes; endpoints taken exactly so adjacent spans
    // share the same boosted breakpoint bit for bit
    let mut tp = [0.0f64; 4];
    let mut xp = [Vec3::ZERO; 4];
    for (k, (tpk, xpk)) in tp.iter_mut().zip(xp.iter_mut()).enumerate() {
        let t = match k {
            0 => ta,
            3 => tb,
            _ => ta + (tb - ta) * k as f64 / 3.0,
        };
        let (a, b) = boost.event(t, w.position(t)?);
        *tpk = a;
        *xpk = b;
    }
    // cubic through the four (t', x') samples, in local time tau = t' − tp[0]
    let tau: Vec<f64> = tp.iter().map(|&v| v - tp[0]).collect();
    let mut vmat = vec![vec![0.0f64; 4]; 4];
    for (i, row) in vmat.iter_mut().enumerate() {
        let mut p = 1.0;
        for el in row.iter_mut() {
            *el = p;
            p *= tau[i];
        }
    }
    let cx = crate::linalg::solve_linear(vmat.clone(), xp.iter().map(|v| v.x).collect())?;
    let cy = crate::linalg::solve_linear(vmat.clone(), xp.iter().map(|v| v.y).collect())?;
    let cz = crate::linalg::solve_linear(vmat, xp.iter().map(|v| v.z).collect())?;
    let coeffs = [
        Vec3::new(cx[0], cy[0], cz[0]),
        Vec3::new(cx[1], cy[1], cz[1]),
        Vec3::new(cx[2], cy[2], cz[2]),
        Vec3::new(cx[3], cy[3], cz[3]),
    ];
    let eval = |taus: f64| coeffs[0] + taus * (coeffs[1] + taus * (coeffs[2] + taus * coeffs[3]));

    // check the fit on interior probes
    let mut worst = 0.0f64;
    for k in 1..8 {
        let t = ta + (tb - ta) * k as f64 / 8.0;
        let (tpk, xpk) = boost.event(t, w.position(t)?);
        worst = worst.max((eval(tpk - tp[0]) - xpk).norm());
    }
    if worst <= tol {
        out.push(Segment { t_start: tp[0], t_end: tp[3], coeffs });
        return Ok(());
    }
    let tm = 0.5 * (ta + tb);
    refit_span(w, boost, ta, tm, tol, depth + 1, out)?;
    refit_span(w, boost, tm, tb, tol, depth + 1, out)
}

/// Boosts a worldline; `tol` bounds the refit position error (m).
pub fn boost_worldline(w: &Worldline, boost: &Boost, tol: f64) -> Result<Worldline> {
    let mut segments = Vec::new();
    for s in w.segments() {
        refit_span(w, boost, s.t_start, s.t_end, tol, 0, &mut segments)?;
    }
    Worldline::new(segments)
}

/// Boosts every branch worldline of a scenario and the window endpoints
/// (taken as events at the spatial origin). The refit budget is 1e-10 of the
/// scenario length scale.
///
/// The boosted phase equals the original exactly only when, per particle,
/// the window-start and window-end positions coincide and the configuration
/// is static near both window ends for longer than the simultaneity offsets
/// γ|β·x|/c — the scenario-builder geometries satisfy this by construction.
pub fn boost_scenario(scenario: &BranchScenario, beta: Vec3) -> Result<BranchScenario> {
    let c = scenario.constants().c;
    let boost = Boost::new(beta, c)?;
    let tol = 1e-10 * scenario.length_scale();
    let particles = scenario
        .particles()
        .iter()
        .map(|p| {
            Ok(ParticleBranches {
                mass: p.mass,
                charge: p.charge,
                up: boost_worldline(&p.up, &boost, tol)?,
                down: boost_worldline(&p.down, &boost, tol)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (t_i, t_f) = scenario.window();
    let (t_i_p, _) = boost.event(t_i, Vec3::ZERO);
    let (t_f_p, _) = boost.event(t_f, Vec3::ZERO);
    BranchScenario::new(particles, scenario.interaction(), (t_i_p, t_f_p), *scenario.constants())
}
