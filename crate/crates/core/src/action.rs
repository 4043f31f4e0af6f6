//! On-shell interaction phases for spin-conditioned branch trajectories.
//!
//! For each spin configuration σ the accumulated phase is the time integral,
//! over the scenario window, of an ordered-pair sum of interaction rates,
//! divided by ħ. Three models are provided:
//!
//! * [`ActionModel::Exact`] — the full Liénard–Wiechert rate. For gravity the
//!   ordered (a → b) term is (G/c⁴) m_a m_b V̄_a(t_ab):V_b(t) / (d_ab −
//!   **d**_ab·**v**_a(t_ab)/c), with V̄:V the componentwise tensor
//!   contraction of [`crate::kinematics::v_bilinear_gravity`]; for
//!   electromagnetism (k_e/2c²) q_a q_b v_a(t_ab)·v_b(t) over the same
//!   denominator. Since the bilinears evaluate to c⁴/2 and −c² at rest, the
//!   static ordered-pair sums reduce to G m₁m₂/d and −k_e q₁q₂/d, the
//!   Newtonian and Coulomb rates.
//! * [`ActionModel::SlowMotion`] — velocity factors dropped, retardation in
//!   the positions kept: ½ G m_a m_b / d_ab(t) per ordered term (gravity),
//!   −½ k_e q_a q_b / d_ab(t) (electromagnetism). Still a local model.
//! * [`ActionModel::Instantaneous`] — the near-field comparison baseline:
//!   retarded times replaced by coordinate time, d_ab(t) = |x_b(t) − x_a(t)|.
//!
//! Self-interaction terms (a = b) are excluded; they only shift all phases by
//! a common (divergent) constant. Phases are reported as full real values —
//! differences between configurations are the observables — with
//! [`wrap_to_pi`] available for display.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{trace_reverse, Tensor4, Vec3};
use crate::kinematics::{
    v_bilinear_em, v_bilinear_gravity, BranchScenario, Interaction, Kinematics4,
    SpinConfiguration,
};
use crate::quadrature::{cell_boundaries, integrate_adaptive, KahanSum};
use crate::retardation::{breakpoint_image, default_tolerance, pair_retardation, retarded_time};

/// Interaction model selecting how retardation and velocities enter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ActionModel {
    Exact,
    SlowMotion,
    Instantaneous,
}

impl ActionModel {
    pub fn all() -> [ActionModel; 3] {
        [ActionModel::Exact, ActionModel::SlowMotion, ActionModel::Instantaneous]
    }

    pub fn name(&self) -> &'static str {
        match self {
            ActionModel::Exact => "exact",
            ActionModel::SlowMotion => "slow_motion",
            ActionModel::Instantaneous => "instantaneous",
        }
    }
}

impl std::str::FromStr for ActionModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(ActionModel::Exact),
            "slow_motion" => Ok(ActionModel::SlowMotion),
            "instantaneous" => Ok(ActionModel::Instantaneous),
            other => Err(Error::InvalidInput(format!(
                "unknown model '{other}' (expected exact | slow_motion | instantaneous)"
            ))),
        }
    }
}

impl std::fmt::Display for ActionModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One accumulated phase with its quadrature error estimate (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimate {
    pub phase: f64,
    pub quad_error: f64,
}

/// Phases for every spin configuration of a scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseTable {
    pub model: ActionModel,
    pub scenario_digest: String,
    pub n_particles: usize,
    /// Indexed by [`SpinConfiguration::index`].
    pub entries: Vec<PhaseEstimate>,
}

impl PhaseTable {
    pub fn get(&self, sigma: &SpinConfiguration) -> &PhaseEstimate {
        &self.entries[sigma.index()]
    }

    pub fn phases(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.phase).collect()
    }

    /// Worst-case quadrature error across configurations (radians).
    pub fn max_quad_error(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.quad_error))
    }

    /// The local-phase-invariant combination φ_uu − φ_ud − φ_du + φ_dd for
    /// two particles; the quantity entanglement depends on.
    pub fn delta_phi(&self) -> Result<f64> {
        if self.n_particles != 2 {
            return Err(Error::InvalidInput(format!(
                "delta_phi is defined for 2 particles, table has {}",
                self.n_particles
            )));
        }
        let p = &self.entries;
        Ok(p[0].phase - p[1].phase - p[2].phase + p[3].phase)
    }
}

/// Reduces a phase difference to (−π, π] for display.
pub fn wrap_to_pi(x: f64) -> f64 {
    let two_pi = std::f64::consts::TAU;
    let mut r = x % two_pi;
    if r <= -std::f64::consts::PI {
        r += two_pi;
    } else if r > std::f64::consts::PI {
        r -= two_pi;
    }
    r
}

/// Exact interaction rate (J) of the ordered pair (a → b) at time t.
pub fn integrand_exact(
    scenario: &BranchScenario,
    sigma: &SpinConfiguration,
    a: usize,
    b: usize,
    t: f64,
) -> Result<f64> {
    let rp = pair_retardation(scenario, sigma, a, b, t)?;
    let c = scenario.constants().c;
    let ka = Kinematics4::from_velocity(scenario.branch(sigma, a).velocity(rp.t_ret)?, c)?;
    let kb = Kinematics4::from_velocity(scenario.branch(sigma, b).velocity(t)?, c)?;
    match scenario.interaction() {
        Interaction::Gravity => {
            let g = scenario.constants().g;
            let bilinear = v_bilinear_gravity(&ka, &kb) * scenario.bilinear_scale;
            Ok(g / c.powi(4) * scenario.coupling(a) * scenario.coupling(b) * bilinear / rp.denom)
        }
        Interaction::Electromagnetism => {
            let k_e = scenario.constants().k_e;
            let bilinear = v_bilinear_em(&ka, &kb);
            Ok(k_e / (2.0 * c * c) * scenario.coupling(a) * scenario.coupling(b) * bilinear
                / rp.denom)
        }
    }
}

/// Slow-motion rate (J): velocities dropped, retarded positions kept.
pub fn integrand_slow_motion(
    scenario: &BranchScenario,
    sigma: &SpinConfiguration,
    a: usize,
    b: usize,
    t: f64,
) -> Result<f64> {
    let rp = pair_retardation(scenario, sigma, a, b, t)?;
    Ok(static_rate(scenario, a, b, rp.d))
}

/// Instantaneous rate (J): the near-field baseline without retardation.
pub fn integrand_instantaneous(
    scenario: &BranchScenario,
    sigma: &SpinConfiguration,
    a: usize,
    b: usize,
    t: f64,
) -> Result<f64> {
    if a == b {
        return Err(Error::InvalidInput("self-interaction pair (a == b) is excluded".into()));
    }
    let xa = scenario.branch(sigma, a).position(t)?;
    let xb = scenario.branch(sigma, b).position(t)?;
    Ok(static_rate(scenario, a, b, (xb - xa).norm()))
}

fn static_rate(scenario: &BranchScenario, a: usize, b: usize, d: f64) -> f64 {
    match scenario.interaction() {
        Interaction::Gravity => {
            0.5 * scenario.constants().g * scenario.coupling(a) * scenario.coupling(b) / d
        }
        Interaction::Electromagnetism => {
            -0.5 * scenario.constants().k_e * scenario.coupling(a) * scenario.coupling(b) / d
        }
    }
}

fn integrand(
    scenario: &BranchScenario,
    sigma: &SpinConfiguration,
    model: ActionModel,
    a: usize,
    b: usize,
    t: f64,
) -> Result<f64> {
    match model {
        ActionModel::Exact => integrand_exact(scenario, sigma, a, b, t),
        ActionModel::SlowMotion => integrand_slow_motion(scenario, sigma, a, b, t),
        ActionModel::Instantaneous => integrand_instantaneous(scenario, sigma, a, b, t),
    }
}

/// Kink points of the (a → b) integrand inside the window: breakpoints of the
/// target branch, plus — for retarded models — the forward images of the
/// source branch breakpoints under the retarded-time map.
fn pair_kinks(
    scenario: &BranchScenario,
    sigma: &SpinConfiguration,
    model: ActionModel,
    a: usize,
    b: usize,
) -> Result<Vec<f64>> {
    let (t_i, t_f) = scenario.window();
    let source = scenario.branch(sigma, a);
    let target = scenario.branch(sigma, b);
    let mut kinks: Vec<f64> = target
        .breakpoints()
        .into_iter()
        .filter(|&t| t > t_i && t < t_f)
        .collect();
    match model {
        ActionModel::Instantaneous => {
            kinks.extend(source.breakpoints().into_iter().filter(|&t| t > t_i && t < t_f));
        }
        ActionModel::Exact | ActionModel::SlowMotion => {
            let c = scenario.constants().c;
            let tol = default_tolerance(scenario);
            for tau in source.breakpoints() {
                if tau >= t_f {
                    continue;
                }
                if let Some(img) = breakpoint_image(source, target, tau, c, tol, t_f)? {
                    if img > t_i && img < t_f {
                        kinks.push(img);
                    }
                }
            }
        }
    }
    Ok(kinks)
}

/// Accumulated phase φ_σ (radians) under the given model, with the estimated
/// quadrature error bounded by `tol` (radians).
pub fn phase(
    scenario: &BranchScenario,
    sigma: &SpinConfiguration,
    model: ActionModel,
    tol: f64,
) -> Result<PhaseEstimate> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("phase tolerance must be positive, got {tol}")));
    }
    if sigma.len() != scenario.n_particles() {
        return Err(Error::InvalidInput(format!(
            "spin configuration has {} entries for {} particles",
            sigma.len(),
            scenario.n_particles()
        )));
    }
    let n = scenario.n_particles();
    let n_pairs = n * (n - 1);
    if n_pairs == 0 {
        return Ok(PhaseEstimate { phase: 0.0, quad_error: 0.0 });
    }
    let (t_i, t_f) = scenario.window();
    if t_f <= t_i {
        return Ok(PhaseEstimate { phase: 0.0, quad_error: 0.0 });
    }
    let hbar = scenario.constants().hbar;
    let pair_tol = tol / n_pairs as f64;

    let mut values = Vec::with_capacity(n_pairs);
    let mut errors = KahanSum::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let kinks = pair_kinks(scenario, sigma, model, a, b)?;
            let cells = cell_boundaries(t_i, t_f, &kinks);
            let f = |t: f64| Ok(integrand(scenario, sigma, model, a, b, t)? / hbar);
            let q = integrate_adaptive(&f, &cells, pair_tol)?;
            values.push(q.value);
            errors.add(q.error);
        }
    }
    Ok(PhaseEstimate {
        phase: crate::quadrature::pairwise_sum(&values),
        quad_error: errors.value(),
    })
}

/// Phases for all 2^N spin configurations; configurations are evaluated in
/// parallel and results are ordered by configuration index.
pub fn phase_table(
    scenario: &BranchScenario,
    model: ActionModel,
    tol: f64,
) -> Result<PhaseTable> {
    let n = scenario.n_particles();
    let entries: Result<Vec<PhaseEstimate>> = (0..1usize << n)
        .into_par_iter()
        .map(|i| phase(scenario, &SpinConfiguration::from_index(i, n), model, tol))
        .collect();
    Ok(PhaseTable {
        model,
        scenario_digest: scenario.digest(),
        n_particles: n,
        entries: entries?,
    })
}

/// Metric perturbation h^{μν}(t, x) sourced by the scenario's masses on the
/// branches selected by σ: the sum of per-particle Liénard–Wiechert terms
/// 4G m_a V̄_a^{μν}(t_a) / (c⁴ (d_a − **d**_a·**v**_a(t_a)/c)).
///
/// Diagnostic operation; the field is dimensionless. Errors when `x` sits on
/// a particle's retarded position.
pub fn field_h(
    scenario: &BranchScenario,
    sigma: &SpinConfiguration,
    t: f64,
    x: Vec3,
) -> Result<Tensor4> {
    let c = scenario.constants().c;
    let g = scenario.constants().g;
    let tol = default_tolerance(scenario);
    let mut h = [[0.0f64; 4]; 4];
    for (a, particle) in scenario.particles().iter().enumerate() {
        if particle.mass == 0.0 {
            continue;
        }
        let source = scenario.branch(sigma, a);
        let rp = retarded_time(source, x, t, c, tol)?;
        if rp.d == 0.0 {
            return Err(Error::InvalidInput(format!(
                "field evaluation point coincides with particle {a} at its retarded time"
            )));
        }
        let kin = Kinematics4::from_velocity(source.velocity(rp.t_ret)?, c)?;
        let vbar = trace_reverse(&kin.source_tensor());
        let prefactor = 4.0 * g * particle.mass / (c.powi(4) * rp.denom);
        for (mu, row) in h.iter_mut().enumerate() {
            for (nu, el) in row.iter_mut().enumerate() {
                *el += prefactor * vbar[mu][nu];
            }
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;
    use crate::kinematics::ParticleBranches;
    use crate::worldline::{Segment, Worldline};
    use approx::assert_relative_eq;

    fn static_pair(
        m1: f64,
        m2: f64,
        d: f64,
        window: (f64, f64),
        interaction: Interaction,
        charges: (f64, f64),
    ) -> BranchScenario {
        let consts = PhysicalConstants::codata2018();
        let pad = 2.0 * d / consts.c + (window.1 - window.0);
        let span = (window.0 - pad, window.1 + pad);
        let w0 = Worldline::at_rest(Vec3::ZERO, span.0, span.1).unwrap();
        let w1 = Worldline::at_rest(Vec3::new(d, 0.0, 0.0), span.0, span.1).unwrap();
        BranchScenario::new(
            vec![
                ParticleBranches { mass: m1, charge: charges.0, up: w0.clone(), down: w0 },
                ParticleBranches { mass: m2, charge: charges.1, up: w1.clone(), down: w1 },
            ],
            interaction,
            window,
            consts,
        )
        .unwrap()
    }

    #[test]
    fn static_gravity_rate_is_newtonian() {
        // ordered double sum over both pairs gives G m1 m2 / d
        let d = 3.0;
        let s = static_pair(2.0, 5.0, d, (0.0, 1.0), Interaction::Gravity, (0.0, 0.0));
        let sigma = SpinConfiguration::from_index(0, 2);
        let g = s.constants().g;
        let fwd = integrand_exact(&s, &sigma, 0, 1, 0.5).unwrap();
        let rev = integrand_exact(&s, &sigma, 1, 0, 0.5).unwrap();
        assert_relative_eq!(fwd + rev, g * 2.0 * 5.0 / d, max_relative = 1e-12);
        // each ordered term carries half the Newtonian rate
        assert_relative_eq!(fwd, 0.5 * g * 2.0 * 5.0 / d, max_relative = 1e-12);
    }

    #[test]
    fn static_em_rate_is_coulomb() {
        // each ordered term is −½ k_e q1 q2 / d (the v·v = −c² sign at rest)
        let d = 2.0;
        let q = 1.0e-9;
        let s = static_pair(1.0, 1.0, d, (0.0, 1.0), Interaction::Electromagnetism, (q, -q));
        let sigma = SpinConfiguration::from_index(0, 2);
        let k_e = s.constants().k_e;
        let fwd = integrand_exact(&s, &sigma, 0, 1, 0.5).unwrap();
        assert_relative_eq!(fwd, -0.5 * k_e * q * (-q) / d, max_relative = 1e-12);
        // attractive (opposite charges): positive rate
        assert!(fwd > 0.0);
        let slow = integrand_slow_motion(&s, &sigma, 0, 1, 0.5).unwrap();
        assert_relative_eq!(slow, fwd, max_relative = 1e-12);
    }

    #[test]
    fn vanishing_masses_kill_the_integrand() {
        let d = 2.0;
        // masses must be positive under gravity; approach zero instead
        let s = static_pair(1e-300, 1e-300, d, (0.0, 1.0), Interaction::Gravity, (0.0, 0.0));
        let sigma = SpinConfiguration::from_index(0, 2);
        let val = integrand_exact(&s, &sigma, 0, 1, 0.5).unwrap();
        assert!(val.abs() < 1e-300);
    }

    #[test]
    fn instantaneous_equals_slow_motion_when_static() {
        let s = static_pair(1.0, 1.0, 5.0, (0.0, 1.0), Interaction::Gravity, (0.0, 0.0));
        let sigma = SpinConfiguration::from_index(0, 2);
        let inst = integrand_instantaneous(&s, &sigma, 0, 1, 0.3).unwrap();
        let slow = integrand_slow_motion(&s, &sigma, 0, 1, 0.3).unwrap();
        assert_relative_eq!(inst, slow, max_relative = 1e-13);
    }

    #[test]
    fn instantaneous_sees_current_position_before_light_arrives() {
        // particle 0 jumps closer shortly before the observation time; the
        // instantaneous model reacts, the retarded one does not
        let consts = PhysicalConstants::codata2018();
        let d = 10.0;
        let dx = 0.5;
        let t_obs = 0.0;
        let ramp = 0.5 * d / consts.c; // slow enough to stay subluminal
        let t_move = t_obs - 0.1 * d / consts.c - ramp; // light needs d/c to cross
        let w0 = Worldline::new(vec![
            Segment::constant(Vec3::ZERO, -100.0 * d / consts.c, t_move),
            Segment::hermite(
                t_move,
                t_move + ramp,
                Vec3::ZERO,
                Vec3::ZERO,
                Vec3::new(dx, 0.0, 0.0),
                Vec3::ZERO,
            ),
            Segment::constant(Vec3::new(dx, 0.0, 0.0), t_move + ramp, 10.0),
        ])
        .unwrap();
        let w1 = Worldline::at_rest(Vec3::new(d, 0.0, 0.0), -100.0 * d / consts.c, 10.0).unwrap();
        let s = BranchScenario::new(
            vec![
                ParticleBranches { mass: 1.0, charge: 0.0, up: w0.clone(), down: w0 },
                ParticleBranches { mass: 1.0, charge: 0.0, up: w1.clone(), down: w1 },
            ],
            Interaction::Gravity,
            (t_obs, t_obs + 1e-9),
            consts,
        )
        .unwrap();
        let sigma = SpinConfiguration::from_index(0, 2);
        let g = consts.g;
        let inst = integrand_instantaneous(&s, &sigma, 0, 1, t_obs).unwrap();
        let slow = integrand_slow_motion(&s, &sigma, 0, 1, t_obs).unwrap();
        assert_relative_eq!(inst, 0.5 * g / (d - dx), max_relative = 1e-12);
        assert_relative_eq!(slow, 0.5 * g / d, max_relative = 1e-9);
        assert!((inst - slow).abs() > 0.01 * inst.abs());
        // summed over both orderings the instantaneous model is a <-> b symmetric
        let sum_fwd = integrand_instantaneous(&s, &sigma, 0, 1, t_obs).unwrap()
            + integrand_instantaneous(&s, &sigma, 1, 0, t_obs).unwrap();
        let swapped = s.with_particle_order(&[1, 0]).unwrap();
        let sum_rev = integrand_instantaneous(&swapped, &sigma, 0, 1, t_obs).unwrap()
            + integrand_instantaneous(&swapped, &sigma, 1, 0, t_obs).unwrap();
        assert_relative_eq!(sum_fwd, sum_rev, max_relative = 1e-13);
    }

    #[test]
    fn static_phase_reproduces_literature_formula() {
        let consts = PhysicalConstants::codata2018();
        let d = 1.0;
        let t_dur = 1.0;
        let m = 1.0e-14;
        let s = static_pair(m, m, d, (0.0, t_dur), Interaction::Gravity, (0.0, 0.0));
        let sigma = SpinConfiguration::from_index(0, 2);
        let expected = consts.g * m * m * t_dur / (consts.hbar * d);
        for model in ActionModel::all() {
            let est = phase(&s, &sigma, model, 1e-10 * expected).unwrap();
            assert_relative_eq!(est.phase, expected, max_relative = 1e-10);
            assert!(est.quad_error <= 1e-10 * expected);
        }
    }

    #[test]
    fn zero_duration_window_gives_zero_phase() {
        let s = static_pair(1.0, 1.0, 1.0, (0.0, 1.0), Interaction::Gravity, (0.0, 0.0));
        let s = s.with_window(0.0, 1e-300).unwrap();
        let sigma = SpinConfiguration::from_index(0, 2);
        let est = phase(&s, &sigma, ActionModel::SlowMotion, 1e-9).unwrap();
        // the rate is finite, so a vanishing window leaves a vanishing phase
        assert!(est.phase.abs() < 1e-270);
    }

    #[test]
    fn single_particle_has_empty_pair_sum() {
        let consts = PhysicalConstants::codata2018();
        let w = Worldline::at_rest(Vec3::ZERO, -1.0, 1.0).unwrap();
        let s = BranchScenario::new(
            vec![ParticleBranches { mass: 1.0, charge: 0.0, up: w.clone(), down: w }],
            Interaction::Gravity,
            (0.0, 0.5),
            consts,
        )
        .unwrap();
        let table = phase_table(&s, ActionModel::Exact, 1e-9).unwrap();
        assert_eq!(table.entries.len(), 2);
        assert_eq!(table.entries[0].phase, 0.0);
        assert_eq!(table.entries[1].phase, 0.0);
    }

    #[test]
    fn identical_branches_give_equal_phases() {
        let s = static_pair(1.0e-10, 1.0e-10, 2.0, (0.0, 0.5), Interaction::Gravity, (0.0, 0.0));
        let table = phase_table(&s, ActionModel::SlowMotion, 1e-12).unwrap();
        assert_eq!(table.entries.len(), 4);
        let p0 = table.entries[0].phase;
        for e in &table.entries {
            assert_relative_eq!(e.phase, p0, max_relative = 1e-12);
        }
        assert!(table.delta_phi().unwrap().abs() < 1e-12 * p0.abs().max(1e-300));
    }

    #[test]
    fn phase_is_additive_in_time() {
        let s = static_pair(1.0e-12, 1.0e-12, 1.5, (0.0, 1.0), Interaction::Gravity, (0.0, 0.0));
        let sigma = SpinConfiguration::from_index(0, 2);
        let tol = 1e-12;
        let full = phase(&s, &sigma, ActionModel::Exact, tol).unwrap();
        let left = phase(&s.with_window(0.0, 0.37).unwrap(), &sigma, ActionModel::Exact, tol).unwrap();
        let right = phase(&s.with_window(0.37, 1.0).unwrap(), &sigma, ActionModel::Exact, tol).unwrap();
        assert!((full.phase - left.phase - right.phase).abs() <= 2.0 * tol);
    }

    #[test]
    fn phase_scales_bilinearly_in_couplings() {
        let d = 2.0;
        let sigma = SpinConfiguration::from_index(0, 2);
        let base = static_pair(1e-12, 1e-12, d, (0.0, 1.0), Interaction::Gravity, (0.0, 0.0));
        let scaled = static_pair(3e-12, 1e-12, d, (0.0, 1.0), Interaction::Gravity, (0.0, 0.0));
        let p0 = phase(&base, &sigma, ActionModel::SlowMotion, 1e-14).unwrap().phase;
        let p1 = phase(&scaled, &sigma, ActionModel::SlowMotion, 1e-13).unwrap().phase;
        assert_relative_eq!(p1, 3.0 * p0, max_relative = 1e-11);
    }

    #[test]
    fn field_of_static_mass_matches_linearized_metric() {
        // h00 = 2 G m / (c² r), and the spatial diagonal matches it
        let consts = PhysicalConstants::codata2018();
        let m = 5.0;
        let w = Worldline::at_rest(Vec3::ZERO, -1.0, 1.0).unwrap();
        let s = BranchScenario::new(
            vec![ParticleBranches { mass: m, charge: 0.0, up: w.clone(), down: w }],
            Interaction::Gravity,
            (0.0, 0.5),
            consts,
        )
        .unwrap();
        let sigma = SpinConfiguration::from_index(0, 1);
        let r = 7.0;
        let h = field_h(&s, &sigma, 0.0, Vec3::new(r, 0.0, 0.0)).unwrap();
        let expected = 2.0 * consts.g * m / (consts.c * consts.c * r);
        for mu in 0..4 {
            assert_relative_eq!(h[mu][mu], expected, max_relative = 1e-12);
            for nu in 0..4 {
                if mu != nu {
                    assert!(h[mu][nu].abs() < 1e-30);
                }
            }
        }
    }

    #[test]
    fn field_is_linear_in_sources() {
        let consts = PhysicalConstants::codata2018();
        let w0 = Worldline::at_rest(Vec3::ZERO, -1.0, 1.0).unwrap();
        let w1 = Worldline::at_rest(Vec3::new(3.0, 0.0, 0.0), -1.0, 1.0).unwrap();
        let single = |pos: usize, m: f64| {
            let w = if pos == 0 { w0.clone() } else { w1.clone() };
            BranchScenario::new(
                vec![ParticleBranches { mass: m, charge: 0.0, up: w.clone(), down: w }],
                Interaction::Gravity,
                (0.0, 0.5),
                consts,
            )
            .unwrap()
        };
        let both = BranchScenario::new(
            vec![
                ParticleBranches { mass: 2.0, charge: 0.0, up: w0.clone(), down: w0.clone() },
                ParticleBranches { mass: 4.0, charge: 0.0, up: w1.clone(), down: w1.clone() },
            ],
            Interaction::Gravity,
            (0.0, 0.5),
            consts,
        )
        .unwrap();
        let x = Vec3::new(1.0, 2.0, 0.0);
        let sigma1 = SpinConfiguration::from_index(0, 1);
        let sigma2 = SpinConfiguration::from_index(0, 2);
        let ha = field_h(&single(0, 2.0), &sigma1, 0.0, x).unwrap();
        let hb = field_h(&single(1, 4.0), &sigma1, 0.0, x).unwrap();
        let hsum = field_h(&both, &sigma2, 0.0, x).unwrap();
        for mu in 0..4 {
            for nu in 0..4 {
                assert_relative_eq!(hsum[mu][nu], ha[mu][nu] + hb[mu][nu], max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn field_errors_on_particle_location() {
        let consts = PhysicalConstants::codata2018();
        let w = Worldline::at_rest(Vec3::ZERO, -1.0, 1.0).unwrap();
        let s = BranchScenario::new(
            vec![ParticleBranches { mass: 1.0, charge: 0.0, up: w.clone(), down: w }],
            Interaction::Gravity,
            (0.0, 0.5),
            consts,
        )
        .unwrap();
        let sigma = SpinConfiguration::from_index(0, 1);
        assert!(field_h(&s, &sigma, 0.0, Vec3::ZERO).is_err());
    }

    #[test]
    fn wrap_to_pi_range() {
        use std::f64::consts::PI;
        assert_relative_eq!(wrap_to_pi(3.0 * PI), PI, max_relative = 1e-12);
        assert_relative_eq!(wrap_to_pi(-3.0 * PI), PI, max_relative = 1e-12);
        assert_relative_eq!(wrap_to_pi(0.5), 0.5);
        for k in -7..=7 {
            let x = 0.3 + k as f64 * std::f64::consts::TAU;
            assert_relative_eq!(wrap_to_pi(x), 0.3, epsilon = 1e-9);
        }
    }
}
