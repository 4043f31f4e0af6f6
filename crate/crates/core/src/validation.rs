//! Built-in invariant suite behind the `validate` CLI command.
//!
//! Each check exercises one convention-critical piece of the pipeline with a
//! known answer: retardation residual contracts, the static Newtonian limit,
//! the model hierarchy, boost invariance of the exact phase, the Bell-state
//! entanglement oracle, the static metric component, and a deliberate-fault
//! meta-check that doubles the gravitational bilinear and confirms the static
//! limit then fails. `tol_scale` tightens every tolerance and bound together,
//! so the suite passes under rescaling.

use crate::action::{field_h, phase, ActionModel};
use crate::boost::boost_scenario;
use crate::constants::PhysicalConstants;
use crate::entanglement::{evolve, negativity, SpinState};
use crate::error::Result;
use crate::geometry::Vec3;
use crate::kinematics::{BranchScenario, Interaction, SpinConfiguration};
use crate::retardation::retarded_time;
use crate::scenarios::{build_bmv, BmvParams};
use crate::worldline::{Segment, Worldline};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Outcome of one validation check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Suite configuration.
#[derive(Debug, Clone, Copy)]
pub struct ValidationOptions {
    /// Multiplies every tolerance and acceptance bound (1.0 = defaults,
    /// 0.1 = ten times tighter).
    pub tol_scale: f64,
    /// When set, scales the gravitational bilinear in the exact integrand to
    /// emulate a convention fault; the affected checks are expected to fail.
    pub bilinear_fault: Option<f64>,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self { tol_scale: 1.0, bilinear_fault: None }
    }
}

fn fault_scale(opts: &ValidationOptions) -> f64 {
    opts.bilinear_fault.unwrap_or(1.0)
}

/// Runs every check and collects the results.
pub fn run_all(opts: &ValidationOptions) -> Vec<CheckResult> {
    let mut out = Vec::new();
    out.push(wrap("retardation_residuals", check_retardation_residuals(opts)));
    out.push(wrap("static_newtonian_limit", check_static_newtonian_limit(opts)));
    out.push(wrap("model_hierarchy_static", check_model_hierarchy(opts)));
    out.push(wrap("boost_invariance", check_boost_invariance(opts)));
    out.push(wrap("bell_state_oracle", check_bell_oracle(opts)));
    out.push(wrap("static_metric_component", check_static_metric(opts)));
    if opts.bilinear_fault.is_none() {
        out.push(wrap("fault_injection_detected", check_fault_injection(opts)));
    }
    out
}

fn wrap(name: &'static str, res: Result<(bool, String)>) -> CheckResult {
    match res {
        Ok((passed, detail)) => CheckResult { name, passed, detail },
        Err(e) => CheckResult { name, passed: false, detail: format!("error: {e}") },
    }
}

fn random_bounded_velocity<R: Rng>(rng: &mut R, v_max: f64) -> Vec3 {
    Vec3::new(
        rng.gen_range(-v_max..v_max) * 0.5,
        rng.gen_range(-v_max..v_max) * 0.5,
        rng.gen_range(-v_max..v_max) * 0.5,
    )
}

/// Random subluminal piecewise-cubic worldline for the residual check. The
/// moving part brackets t = 0; long static tails guarantee every retarded
/// root of nearby observation times can be bracketed.
pub fn random_worldline<R: Rng>(rng: &mut R, c: f64) -> Worldline {
    let n_segments = rng.gen_range(1..=4);
    let mut t = rng.gen_range(-4.0e-7..-2.0e-7);
    let mut pos = Vec3::new(
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
        rng.gen_range(-10.0..10.0),
    );
    // velocities bounded well below c; Hermite interpolation of positions
    // spaced v*dt keeps the interior speed under ~1.5 v_max
    let v_max = 0.5 * c;
    let mut vel = random_bounded_velocity(rng, v_max);
    let mut segments = Vec::new();
    for _ in 0..n_segments {
        let dt = rng.gen_range(0.5e-7..2.0e-7);
        let next_vel = random_bounded_velocity(rng, v_max);
        let next_pos = pos + (vel + next_vel) * (0.5 * dt);
        segments.push(Segment::hermite(t, t + dt, pos, vel, next_pos, next_vel));
        t += dt;
        pos = next_pos;
        vel = next_vel;
    }
    Worldline::new(segments)
        .unwrap()
        .with_static_padding(-1.0, 1.0)
        .unwrap()
}

fn check_retardation_residuals(opts: &ValidationOptions) -> Result<(bool, String)> {
    let c = PhysicalConstants::codata2018().c;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let tol = 1e-12 * 20.0 * opts.tol_scale;
    let mut worst = 0.0f64;
    let trials = 300;
    for _ in 0..trials {
        let w = random_worldline(&mut rng, c);
        let p = Vec3::new(
            rng.gen_range(-30.0..30.0),
            rng.gen_range(-30.0..30.0),
            rng.gen_range(-30.0..30.0),
        );
        let t = rng.gen_range(-0.5e-7..0.5e-7);
        let rp = retarded_time(&w, p, t, c, tol)?;
        worst = worst.max(rp.residual);
        if rp.residual > tol {
            return Ok((false, format!("residual {} exceeds tolerance {tol}", rp.residual)));
        }
    }
    Ok((true, format!("{trials} random worldlines, worst residual {worst:.3e} <= {tol:.3e}")))
}

fn static_pair_scenario(m: f64, d: f64, t_dur: f64) -> Result<BranchScenario> {
    let consts = PhysicalConstants::codata2018();
    let pad = 2.0 * d / consts.c + t_dur;
    let w0 = Worldline::at_rest(Vec3::ZERO, -pad, t_dur + pad)?;
    let w1 = Worldline::at_rest(Vec3::new(d, 0.0, 0.0), -pad, t_dur + pad)?;
    BranchScenario::new(
        vec![
            crate::kinematics::ParticleBranches { mass: m, charge: 0.0, up: w0.clone(), down: w0 },
            crate::kinematics::ParticleBranches { mass: m, charge: 0.0, up: w1.clone(), down: w1 },
        ],
        Interaction::Gravity,
        (0.0, t_dur),
        consts,
    )
}

fn check_static_newtonian_limit(opts: &ValidationOptions) -> Result<(bool, String)> {
    let consts = PhysicalConstants::codata2018();
    let (m, d, t_dur) = (1.0e-14, 1.0, 1.0);
    let s = static_pair_scenario(m, d, t_dur)?.with_bilinear_fault(fault_scale(opts));
    let sigma = SpinConfiguration::from_index(0, 2);
    let expected = consts.g * m * m * t_dur / (consts.hbar * d);
    let bound = 1e-8 * opts.tol_scale;
    let mut worst = 0.0f64;
    for model in ActionModel::all() {
        let est = phase(&s, &sigma, model, expected * bound * 0.1)?;
        let rel = (est.phase - expected).abs() / expected;
        worst = worst.max(rel);
        if rel > bound {
            return Ok((false, format!("{model}: relative error {rel:.3e} exceeds {bound:.1e}")));
        }
    }
    Ok((true, format!("all models reproduce G m1 m2 T/(hbar d), worst relative error {worst:.3e}")))
}

fn check_model_hierarchy(opts: &ValidationOptions) -> Result<(bool, String)> {
    let s = static_pair_scenario(1.0e-14, 2.0, 0.5)?.with_bilinear_fault(fault_scale(opts));
    let sigma = SpinConfiguration::from_index(0, 2);
    let tol = 1e-12 * opts.tol_scale;
    let exact = phase(&s, &sigma, ActionModel::Exact, tol)?.phase;
    let slow = phase(&s, &sigma, ActionModel::SlowMotion, tol)?.phase;
    let inst = phase(&s, &sigma, ActionModel::Instantaneous, tol)?.phase;
    let spread = (exact - slow).abs().max((slow - inst).abs()).max((exact - inst).abs());
    let bound = 2.0 * tol;
    Ok((
        spread <= bound,
        format!("static-model spread {spread:.3e} against bound {bound:.3e}"),
    ))
}

fn check_boost_invariance(opts: &ValidationOptions) -> Result<(bool, String)> {
    let consts = PhysicalConstants::codata2018();
    let d = 1.0;
    let light = d / consts.c;
    let params = BmvParams::new(Interaction::Gravity, 2.0e-9, d, 0.2, 40.0 * light, 20.0 * light);
    let s = build_bmv(&params, &consts)?.with_bilinear_fault(fault_scale(opts));
    let sigma = SpinConfiguration::from_index(1, 2);
    let tol = 1e-10 * opts.tol_scale;
    let original = phase(&s, &sigma, ActionModel::Exact, tol)?;
    let boosted_scenario = boost_scenario(&s, Vec3::new(0.2, 0.0, 0.0))?;
    let boosted = phase(&boosted_scenario, &sigma, ActionModel::Exact, tol)?;
    // refit budget: 1e-10 relative position error propagates linearly
    let refit = 1e-9 * original.phase.abs();
    let bound = 10.0 * (original.quad_error + boosted.quad_error + refit);
    let diff = (original.phase - boosted.phase).abs();
    Ok((
        diff <= bound,
        format!("|phi − phi_boosted| = {diff:.3e} against bound {bound:.3e}"),
    ))
}

fn check_bell_oracle(opts: &ValidationOptions) -> Result<(bool, String)> {
    let tol = 1e-10 * opts.tol_scale;
    // evolve the uniform state by a pi phase on one branch: negativity 1/2
    let mk_table = |dphi: f64| crate::action::PhaseTable {
        model: ActionModel::SlowMotion,
        scenario_digest: "validation".into(),
        n_particles: 2,
        entries: [0.0, dphi, 0.0, 0.0]
            .iter()
            .map(|&p| crate::action::PhaseEstimate { phase: p, quad_error: 0.0 })
            .collect(),
    };
    let bell = evolve(&SpinState::uniform(2), &mk_table(std::f64::consts::PI))?;
    let neg = negativity(&bell, &[0])?;
    if (neg - 0.5).abs() > tol {
        return Ok((false, format!("Bell-state negativity {neg} != 1/2")));
    }
    let mut worst = 0.0f64;
    for k in 0..16 {
        let dphi = -std::f64::consts::PI + k as f64 * (2.0 * std::f64::consts::PI / 15.0);
        let st = evolve(&SpinState::uniform(2), &mk_table(dphi))?;
        let got = negativity(&st, &[0])?;
        let want = 0.5 * (dphi / 2.0).sin().abs();
        worst = worst.max((got - want).abs());
        if (got - want).abs() > tol {
            return Ok((false, format!("negativity {got} vs sin-law {want} at dphi = {dphi}")));
        }
    }
    Ok((true, format!("Bell oracle and sin-law grid pass, worst deviation {worst:.3e}")))
}

fn check_static_metric(opts: &ValidationOptions) -> Result<(bool, String)> {
    let consts = PhysicalConstants::codata2018();
    let m = 3.0;
    let r = 11.0;
    let w = Worldline::at_rest(Vec3::ZERO, -1.0, 1.0)?;
    let s = BranchScenario::new(
        vec![crate::kinematics::ParticleBranches { mass: m, charge: 0.0, up: w.clone(), down: w }],
        Interaction::Gravity,
        (0.0, 0.5),
        consts,
    )?;
    let sigma = SpinConfiguration::from_index(0, 1);
    let h = field_h(&s, &sigma, 0.2, Vec3::new(0.0, r, 0.0))?;
    let expected = 2.0 * consts.g * m / (consts.c * consts.c * r);
    let rel = (h[0][0] - expected).abs() / expected;
    let bound = 1e-10 * opts.tol_scale;
    Ok((
        rel <= bound,
        format!("h00 relative error {rel:.3e} against bound {bound:.1e}"),
    ))
}

/// Meta-check: doubling the gravitational bilinear must break the static
/// Newtonian limit. Passing means the suite can actually see the fault.
fn check_fault_injection(opts: &ValidationOptions) -> Result<(bool, String)> {
    let faulted = ValidationOptions { tol_scale: opts.tol_scale, bilinear_fault: Some(2.0) };
    let (static_ok, _) = check_static_newtonian_limit(&faulted)?;
    let (hierarchy_ok, _) = check_model_hierarchy(&faulted)?;
    let detected = !static_ok && !hierarchy_ok;
    Ok((
        detected,
        if detected {
            "doubled bilinear breaks the static limit and the model hierarchy, as it must".into()
        } else {
            "fault went undetected: convention checks are not sensitive".into()
        },
    ))
}
