//! Canonical two-particle interferometry configurations and the closed-form
//! experimental estimators used to cross-check the numerical pipeline.
//!
//! The built geometry: two particles a distance `d` apart on the x axis, each
//! held static, then driven through a spin-dependent symmetric split of
//! ±Δx/2 along the axis — spin up displaces each particle toward the other,
//! so the up-up branch pair reaches the closest approach D = d − Δx and the
//! phase combination φ_uu − φ_ud − φ_du + φ_dd is positive for gravity. The
//! branches are held at maximum separation, ramped back, and held static
//! again. Ramps are C¹ cubic segments so the worldlines stay subluminal with
//! finite fields. Static history long enough for every retarded-time root is
//! prepended automatically.

use serde::{Deserialize, Serialize};

use crate::constants::{planck_charge, planck_mass, PhysicalConstants};
use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::kinematics::{BranchScenario, Interaction, ParticleBranches};
use crate::worldline::{Segment, Worldline};

/// Parameters of the canonical split-interferometer scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BmvParams {
    /// Source strength A of both particles: mass (kg) under gravity, charge
    /// (C) under electromagnetism.
    pub mass_or_charge: f64,
    /// Initial separation d (m).
    pub d: f64,
    /// Maximum separation Δx of each particle's path superposition (m).
    pub delta_x: f64,
    /// Superposition duration T = t₂ − t₁ (s).
    pub duration: f64,
    /// Static padding before t₁ and after t₂ inside the window (s).
    pub hold: f64,
    /// Interaction kind.
    pub interaction: Interaction,
    /// Fraction of `duration` spent in each of the two ramps.
    pub ramp_fraction: f64,
}

impl BmvParams {
    /// Params with the default 10% ramp fraction.
    pub fn new(
        interaction: Interaction,
        mass_or_charge: f64,
        d: f64,
        delta_x: f64,
        duration: f64,
        hold: f64,
    ) -> Self {
        Self {
            mass_or_charge,
            d,
            delta_x,
            duration,
            hold,
            interaction,
            ramp_fraction: 0.1,
        }
    }

    /// Minimum distance D = d − Δx of the branches at closest approach.
    pub fn closest_approach(&self) -> f64 {
        self.d - self.delta_x
    }

    /// Peak branch speed of the cubic ramps (m/s).
    pub fn peak_speed(&self) -> f64 {
        // smoothstep maximum slope: 1.5 × (distance / ramp time)
        1.5 * (0.5 * self.delta_x) / (self.ramp_fraction * self.duration)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mass_or_charge.is_finite()) || self.mass_or_charge == 0.0 {
            return Err(Error::InvalidInput(format!(
                "mass_or_charge must be finite and non-zero, got {}",
                self.mass_or_charge
            )));
        }
        if self.interaction == Interaction::Gravity && self.mass_or_charge < 0.0 {
            return Err(Error::InvalidInput("mass must be positive under gravity".into()));
        }
        if !(self.d > 0.0) {
            return Err(Error::InvalidInput(format!("d must be positive, got {}", self.d)));
        }
        if !(self.delta_x >= 0.0) || self.delta_x >= self.d {
            return Err(Error::InvalidInput(format!(
                "delta_x must satisfy 0 <= delta_x < d, got delta_x = {}, d = {}",
                self.delta_x, self.d
            )));
        }
        if !(self.duration > 0.0) {
            return Err(Error::InvalidInput(format!(
                "duration must be positive, got {}",
                self.duration
            )));
        }
        if !(self.hold >= 0.0) {
            return Err(Error::InvalidInput(format!("hold must be non-negative, got {}", self.hold)));
        }
        if !(self.ramp_fraction > 0.0 && self.ramp_fraction <= 0.5) {
            return Err(Error::InvalidInput(format!(
                "ramp_fraction must lie in (0, 0.5], got {}",
                self.ramp_fraction
            )));
        }
        Ok(())
    }

    /// Non-fatal regime warnings for the closed-form estimators.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.delta_x / self.d > 0.3 {
            out.push(format!(
                "delta_x/d = {:.3} is outside the small-split regime the estimators assume",
                self.delta_x / self.d
            ));
        }
        out
    }
}

/// One particle's spin-conditioned branch pair for the split geometry.
fn branch_pair(
    base: Vec3,
    split: Vec3,
    t1: f64,
    t2: f64,
    ramp: f64,
    domain: (f64, f64),
) -> Result<(Worldline, Worldline)> {
    let make = |offset: Vec3| -> Result<Worldline> {
        let displaced = base + offset;
        let out_end = t1 + ramp;
        let back_start = (t2 - ramp).max(out_end);
        let mut segments = vec![
            Segment::constant(base, domain.0, t1),
            Segment::hermite(t1, out_end, base, Vec3::ZERO, displaced, Vec3::ZERO),
        ];
        if back_start > out_end {
            segments.push(Segment::constant(displaced, out_end, back_start));
        }
        segments.push(Segment::hermite(back_start, t2, displaced, Vec3::ZERO, base, Vec3::ZERO));
        segments.push(Segment::constant(base, t2, domain.1));
        Worldline::new(segments)
    };
    Ok((make(split)?, make(-split)?))
}

fn build(
    params: &BmvParams,
    constants: &PhysicalConstants,
    extra_tail: f64,
) -> Result<BranchScenario> {
    params.validate()?;
    constants.validate()?;
    let peak = params.peak_speed();
    if peak >= constants.c {
        return Err(Error::InvalidInput(format!(
            "branch ramps would reach speed {peak} >= c = {}; increase duration or ramp_fraction",
            constants.c
        )));
    }

    let max_dist = params.d + params.delta_x;
    let light = max_dist / constants.c;
    let t_i = 0.0;
    let t1 = params.hold;
    let t2 = t1 + params.duration;
    let t_f = t2 + extra_tail + params.hold;
    let span = t_f - t_i;
    // static history for every retarded root, plus slack for boosted frames
    let domain = (t_i - 2.5 * light - 0.25 * span, t_f + 1.5 * light + 0.25 * span);
    let ramp = params.ramp_fraction * params.duration;

    // up moves each particle toward the other
    let split = Vec3::new(0.5 * params.delta_x, 0.0, 0.0);
    let (up0, down0) = branch_pair(Vec3::ZERO, split, t1, t2, ramp, domain)?;
    let (up1, down1) = branch_pair(Vec3::new(params.d, 0.0, 0.0), -split, t1, t2, ramp, domain)?;

    let (mass, charge) = match params.interaction {
        Interaction::Gravity => (params.mass_or_charge, 0.0),
        Interaction::Electromagnetism => (0.0, params.mass_or_charge),
    };
    BranchScenario::new(
        vec![
            ParticleBranches { mass, charge, up: up0, down: down0 },
            ParticleBranches { mass, charge, up: up1, down: down1 },
        ],
        params.interaction,
        (t_i, t_f),
        *constants,
    )
}

/// Builds the canonical two-particle split scenario.
pub fn build_bmv(params: &BmvParams, constants: &PhysicalConstants) -> Result<BranchScenario> {
    build(params, constants, 0.0)
}

/// Builds the spacelike variant: enforces c·T < d so the two particles'
/// non-stationary worldline sections are spacelike separated, and extends the
/// window past t₃ = t₂ + d/c so the retarded image of the motion is fully
/// inside it.
pub fn build_spacelike(
    params: &BmvParams,
    constants: &PhysicalConstants,
) -> Result<BranchScenario> {
    if constants.c * params.duration >= params.d {
        return Err(Error::InvalidInput(format!(
            "spacelike scenario requires c*duration < d, got c*T = {} and d = {}",
            constants.c * params.duration,
            params.d
        )));
    }
    build(params, constants, params.d / constants.c)
}

/// Closed-form estimate of the entangling phase difference in the Newtonian
/// regime: (A/A_P)² (Δx/d)² (cT/D), with A_P the Planck mass or charge.
pub fn estimate_delta_phi(params: &BmvParams, constants: &PhysicalConstants) -> f64 {
    let a_p = match params.interaction {
        Interaction::Gravity => planck_mass(constants),
        Interaction::Electromagnetism => planck_charge(constants),
    };
    let a_ratio = params.mass_or_charge / a_p;
    let split_ratio = params.delta_x / params.d;
    a_ratio * a_ratio * split_ratio * split_ratio * constants.c * params.duration
        / params.closest_approach()
}

/// Closed-form estimate of the retardation correction to the phase
/// difference, from the effective-duration replacement T → T − d/c:
/// (A/A_P)² (Δx/d)².
pub fn estimate_retardation_correction(
    params: &BmvParams,
    constants: &PhysicalConstants,
) -> f64 {
    let a_p = match params.interaction {
        Interaction::Gravity => planck_mass(constants),
        Interaction::Electromagnetism => planck_charge(constants),
    };
    let a_ratio = params.mass_or_charge / a_p;
    let split_ratio = params.delta_x / params.d;
    a_ratio * a_ratio * split_ratio * split_ratio
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{phase_table, ActionModel};
    use crate::constants::ELEMENTARY_CHARGE;
    use approx::assert_relative_eq;

    fn codata() -> PhysicalConstants {
        PhysicalConstants::codata2018()
    }

    #[test]
    fn built_scenario_honors_the_declared_geometry() {
        let consts = codata();
        let p = BmvParams::new(Interaction::Gravity, 1e-14, 1.0, 0.2, 1.0, 0.2);
        let s = build_bmv(&p, &consts).unwrap();
        let (t_i, t_f) = s.window();
        let t1 = p.hold;
        let t_mid = t1 + 0.5 * p.duration;
        // before the split both branches coincide at the bases
        let b0u = s.particles()[0].up.position(t_i).unwrap();
        let b0d = s.particles()[0].down.position(t_i).unwrap();
        assert_eq!(b0u, b0d);
        assert_eq!(b0u, Vec3::ZERO);
        // at mid-motion the branches sit at +/- delta_x/2
        let m0u = s.particles()[0].up.position(t_mid).unwrap();
        let m0d = s.particles()[0].down.position(t_mid).unwrap();
        assert_relative_eq!(m0u.x, 0.1, max_relative = 1e-12);
        assert_relative_eq!(m0d.x, -0.1, max_relative = 1e-12);
        assert_relative_eq!((m0u - m0d).norm(), p.delta_x, max_relative = 1e-12);
        // up-up is the closest branch pair: D = d − delta_x
        let m1u = s.particles()[1].up.position(t_mid).unwrap();
        assert_relative_eq!((m1u - m0u).norm(), p.closest_approach(), max_relative = 1e-12);
        // up-down keeps the rest separation, down-down is the farthest
        let m1d = s.particles()[1].down.position(t_mid).unwrap();
        assert_relative_eq!((m1d - m0u).norm(), p.d, max_relative = 1e-12);
        assert_relative_eq!((m1d - m0d).norm(), p.d + p.delta_x, max_relative = 1e-12);
        // particles are back at base and static by the window end
        let e0 = s.particles()[0].up.position(t_f).unwrap();
        assert_eq!(e0, Vec3::ZERO);
        assert_eq!(s.particles()[0].up.velocity(t_f).unwrap(), Vec3::ZERO);
        // generous retarded history before the window
        let (lo, _) = s.particles()[0].up.domain();
        assert!(t_i - lo >= (p.d + p.delta_x) / consts.c);
    }

    #[test]
    fn zero_split_collapses_all_branches() {
        let consts = codata();
        let p = BmvParams::new(Interaction::Gravity, 1e-12, 1.0, 0.0, 0.5, 0.1);
        let s = build_bmv(&p, &consts).unwrap();
        let table = phase_table(&s, ActionModel::Instantaneous, 1e-12).unwrap();
        let p0 = table.entries[0].phase;
        assert!(p0 > 0.0);
        for e in &table.entries {
            assert_relative_eq!(e.phase, p0, max_relative = 1e-13);
        }
    }

    #[test]
    fn subluminal_bound_enforced_at_build() {
        let consts = codata();
        // 1 m split in 1 ns with 10% ramps needs ~7.5e9 m/s
        let p = BmvParams::new(Interaction::Gravity, 1e-12, 2.0, 1.0, 1e-9, 0.0);
        match build_bmv(&p, &consts) {
            Err(Error::InvalidInput(msg)) => assert!(msg.contains("c")),
            other => panic!("expected a speed-bound error, got {other:?}"),
        }
    }

    #[test]
    fn spacelike_constraint_enforced() {
        let consts = codata();
        let d = 0.5;
        let ok = BmvParams::new(Interaction::Gravity, 1e-12, d, 0.05, 0.8 * d / consts.c, d / consts.c);
        let s = build_spacelike(&ok, &consts).unwrap();
        // window reaches past t3 = t2 + d/c
        let t3 = ok.hold + ok.duration + d / consts.c;
        assert!(s.window().1 >= t3);
        let bad = BmvParams::new(Interaction::Gravity, 1e-12, d, 0.05, 1.2 * d / consts.c, 0.1);
        assert!(build_spacelike(&bad, &consts).is_err());
    }

    #[test]
    fn spacelike_motion_is_outside_the_other_lightcone() {
        let consts = codata();
        let d = 1.0;
        let t_dur = 0.8 * d / consts.c;
        // spacelike windows force quick splits: keep delta_x small and ramps
        // wide so the branches stay subluminal
        let mut p = BmvParams::new(Interaction::Gravity, 1e-12, d, 0.05, t_dur, 2.0 * d / consts.c);
        p.ramp_fraction = 0.2;
        let s = build_spacelike(&p, &consts).unwrap();
        let t1 = p.hold;
        let _t2 = t1 + t_dur;
        // while particle 1 moves (t in (t1, t2)), the retarded time of
        // particle 0 as seen from 1 predates the motion start
        let sigma = crate::kinematics::SpinConfiguration::from_index(0, 2);
        for k in 0..8 {
            let t = t1 + (k as f64 + 0.5) / 8.0 * t_dur;
            let rp = crate::retardation::pair_retardation(&s, &sigma, 0, 1, t).unwrap();
            assert!(rp.t_ret < t1, "retarded time {} reaches into the motion", rp.t_ret);
        }
    }

    #[test]
    fn estimator_unit_plugin() {
        // A = A_P, delta_x/d = 0.5, cT = D gives exactly 0.25
        let consts = codata();
        let m_p = crate::constants::planck_mass(&consts);
        let d = 1.0;
        let delta_x = 0.5;
        let big_d = d - delta_x;
        let p = BmvParams::new(Interaction::Gravity, m_p, d, delta_x, big_d / consts.c, 0.0);
        assert_relative_eq!(estimate_delta_phi(&p, &consts), 0.25, max_relative = 1e-12);
        assert!(!p.warnings().is_empty());
    }

    #[test]
    fn electron_retardation_correction_order_of_magnitude() {
        // single electron: A/A_P ~ 0.0854; delta_x/d = 0.3 gives ~6.6e-4
        let consts = codata();
        let p = BmvParams::new(
            Interaction::Electromagnetism,
            ELEMENTARY_CHARGE,
            1e-2,
            0.3e-2,
            50e-9,
            10e-9,
        );
        let corr = estimate_retardation_correction(&p, &consts);
        assert_relative_eq!(corr, 6.6e-4, max_relative = 0.01);
        // order 1e-3 as the feasibility argument demands
        assert!(corr > 1e-4 && corr < 1e-3);

        let dphi = estimate_delta_phi(&p, &consts);
        assert_relative_eq!(
            dphi,
            corr * consts.c * p.duration / p.closest_approach(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn estimators_scale_quadratically() {
        let consts = codata();
        let p = BmvParams::new(Interaction::Gravity, 1e-10, 1.0, 0.1, 1.0, 0.1);
        let mut doubled = p;
        doubled.mass_or_charge *= 2.0;
        assert_relative_eq!(
            estimate_delta_phi(&doubled, &consts),
            4.0 * estimate_delta_phi(&p, &consts),
            max_relative = 1e-12
        );
        let mut no_split = p;
        no_split.delta_x = 0.0;
        assert_eq!(estimate_delta_phi(&no_split, &consts), 0.0);
        assert_eq!(estimate_retardation_correction(&no_split, &consts), 0.0);
        let mut weightless = p;
        weightless.mass_or_charge = 1e-300;
        assert!(estimate_retardation_correction(&weightless, &consts) < 1e-100);
    }

    #[test]
    fn params_validation() {
        let mut p = BmvParams::new(Interaction::Gravity, 1e-12, 1.0, 0.1, 1.0, 0.1);
        assert!(p.validate().is_ok());
        p.delta_x = 1.5;
        assert!(p.validate().is_err());
        p.delta_x = 0.1;
        p.duration = 0.0;
        assert!(p.validate().is_err());
        p.duration = 1.0;
        p.ramp_fraction = 0.7;
        assert!(p.validate().is_err());
        p.ramp_fraction = 0.1;
        p.mass_or_charge = -1.0;
        assert!(p.validate().is_err());
        // negative charge is fine for electromagnetism
        p.interaction = Interaction::Electromagnetism;
        assert!(p.validate().is_ok());
    }
}
