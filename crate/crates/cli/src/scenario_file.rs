//! Scenario file schema and resolution into engine types.
//!
//! A scenario is a JSON document with an interaction kind, either a builder
//! shorthand (`bmv` or `spacelike`) or explicit particles with piecewise
//! polynomial worldlines, optional constants overrides, an optional common
//! boost, and run settings (model, tolerance). All numeric fields accept
//! `{"value": x, "unit": "..."}` objects; see [`crate::units`].

use retphase_core::boost::boost_scenario;
use retphase_core::constants::PhysicalConstants;
use retphase_core::geometry::Vec3;
use retphase_core::kinematics::{BranchScenario, Interaction, ParticleBranches};
use retphase_core::scenarios::{build_bmv, build_spacelike, BmvParams};
use retphase_core::worldline::{Segment, Worldline};
use retphase_core::ActionModel;
use serde::Deserialize;

use crate::units::{resolve, Dimension, RawQuantity};
use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub interaction: Interaction,
    #[serde(default)]
    pub model: Option<ActionModel>,
    #[serde(default)]
    pub tolerance: Option<f64>,
    #[serde(default)]
    pub constants: Option<ConstantsBlock>,
    #[serde(default)]
    pub builder: Option<BuilderBlock>,
    #[serde(default)]
    pub particles: Option<Vec<ParticleBlock>>,
    #[serde(default)]
    pub window: Option<WindowBlock>,
    #[serde(default)]
    pub boost: Option<BoostBlock>,
}

/// Constants overrides, plain SI. `k_e` is always derived from `epsilon0`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsBlock {
    #[serde(default)]
    pub c: Option<f64>,
    #[serde(default, rename = "G", alias = "g")]
    pub big_g: Option<f64>,
    #[serde(default)]
    pub hbar: Option<f64>,
    #[serde(default)]
    pub epsilon0: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuilderBlock {
    #[serde(rename = "type")]
    pub kind: String,
    pub params: BuilderParams,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuilderParams {
    #[serde(default)]
    pub mass: Option<RawQuantity>,
    #[serde(default)]
    pub charge: Option<RawQuantity>,
    pub d: RawQuantity,
    pub delta_x: RawQuantity,
    pub duration: RawQuantity,
    pub hold: RawQuantity,
    #[serde(default)]
    pub ramp_fraction: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleBlock {
    #[serde(default)]
    pub mass: Option<RawQuantity>,
    #[serde(default)]
    pub charge: Option<RawQuantity>,
    pub worldline_up: WorldlineBlock,
    pub worldline_down: WorldlineBlock,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum WorldlineBlock {
    /// Particle at rest at the given position (m) over the whole scenario.
    Rest { rest: [f64; 3] },
    /// Explicit contiguous polynomial segments starting at `start`.
    Segments { start: RawQuantity, segments: Vec<SegmentBlock> },
}

/// One polynomial piece; `coeffs[k]` is the τ^k coefficient [x, y, z] in SI
/// (m, m/s, m/s², m/s³) with τ the time since the segment start.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentBlock {
    pub duration: RawQuantity,
    pub coeffs: [[f64; 3]; 4],
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindowBlock {
    pub start: RawQuantity,
    pub end: RawQuantity,
}

/// Optional common boost applied to all worldlines and the window.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoostBlock {
    pub speed: RawQuantity,
    pub direction: [f64; 3],
}

/// Fully resolved run: the scenario plus the settings the commands need.
#[derive(Debug)]
pub struct LoadedScenario {
    pub scenario: BranchScenario,
    pub model: ActionModel,
    pub tolerance: f64,
}

const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Environment variable overriding the built-in default tolerance.
pub const TOLERANCE_ENV_VAR: &str = "RETPHASE_TOL";

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<ScenarioFile, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::schema(format!("scenario file: {e}")))
    }

    pub fn resolve_constants(&self) -> Result<PhysicalConstants, CliError> {
        let base = PhysicalConstants::codata2018();
        let block = match &self.constants {
            None => return Ok(base),
            Some(b) => b,
        };
        PhysicalConstants::new(
            block.c.unwrap_or(base.c),
            block.big_g.unwrap_or(base.g),
            block.hbar.unwrap_or(base.hbar),
            block.epsilon0.unwrap_or(base.epsilon0),
        )
        .map_err(|e| CliError::schema(format!("constants: {e}")))
    }

    /// Builds the scenario and resolves run settings. `model_override` and
    /// `tol_override` come from the command line; the default tolerance can
    /// also be overridden through [`TOLERANCE_ENV_VAR`].
    pub fn load(
        &self,
        model_override: Option<ActionModel>,
        tol_override: Option<f64>,
    ) -> Result<LoadedScenario, CliError> {
        let constants = self.resolve_constants()?;
        let mut scenario = match (&self.builder, &self.particles) {
            (Some(builder), None) => self.build_from_builder(builder, &constants)?,
            (None, Some(particles)) => self.build_explicit(particles, &constants)?,
            (Some(_), Some(_)) => {
                return Err(CliError::schema(
                    "scenario declares both 'builder' and 'particles'; pick one".into(),
                ))
            }
            (None, None) => {
                return Err(CliError::schema(
                    "scenario needs either a 'builder' block or explicit 'particles'".into(),
                ))
            }
        };

        if let Some(boost) = &self.boost {
            let speed = resolve(&boost.speed, Dimension::Speed, &constants, "boost.speed")?;
            let dir = Vec3::new(boost.direction[0], boost.direction[1], boost.direction[2]);
            let n = dir.norm();
            if n == 0.0 {
                return Err(CliError::schema("boost.direction: must be non-zero".into()));
            }
            let beta = dir * (speed / constants.c / n);
            scenario = boost_scenario(&scenario, beta).map_err(CliError::from_core)?;
        }

        let model = model_override.or(self.model).unwrap_or(ActionModel::SlowMotion);
        let default_tol = match std::env::var(TOLERANCE_ENV_VAR) {
            Ok(text) => text.parse::<f64>().map_err(|_| {
                CliError::schema(format!("{TOLERANCE_ENV_VAR}: '{text}' is not a number"))
            })?,
            Err(_) => DEFAULT_TOLERANCE,
        };
        let tolerance = tol_override.or(self.tolerance).unwrap_or(default_tol);
        if !(tolerance > 0.0) {
            return Err(CliError::schema(format!(
                "tolerance: must be positive, got {tolerance}"
            )));
        }
        Ok(LoadedScenario { scenario, model, tolerance })
    }

    fn build_from_builder(
        &self,
        builder: &BuilderBlock,
        constants: &PhysicalConstants,
    ) -> Result<BranchScenario, CliError> {
        if self.window.is_some() {
            return Err(CliError::schema(
                "builder scenarios derive their own window; remove the 'window' block".into(),
            ));
        }
        let p = &builder.params;
        let mass_or_charge = match self.interaction {
            Interaction::Gravity => {
                let q = p.mass.as_ref().ok_or_else(|| {
                    CliError::schema("builder.params.mass: required for gravity".into())
                })?;
                if p.charge.is_some() {
                    return Err(CliError::schema(
                        "builder.params.charge: not allowed for gravity".into(),
                    ));
                }
                resolve(q, Dimension::Mass, constants, "builder.params.mass")?
            }
            Interaction::Electromagnetism => {
                let q = p.charge.as_ref().ok_or_else(|| {
                    CliError::schema("builder.params.charge: required for electromagnetism".into())
                })?;
                if p.mass.is_some() {
                    return Err(CliError::schema(
                        "builder.params.mass: not allowed for electromagnetism".into(),
                    ));
                }
                resolve(q, Dimension::Charge, constants, "builder.params.charge")?
            }
        };
        let mut params = BmvParams::new(
            self.interaction,
            mass_or_charge,
            resolve(&p.d, Dimension::Length, constants, "builder.params.d")?,
            resolve(&p.delta_x, Dimension::Length, constants, "builder.params.delta_x")?,
            resolve(&p.duration, Dimension::Time, constants, "builder.params.duration")?,
            resolve(&p.hold, Dimension::Time, constants, "builder.params.hold")?,
        );
        if let Some(r) = p.ramp_fraction {
            params.ramp_fraction = r;
        }
        for w in params.warnings() {
            eprintln!("warning: {w}");
        }
        let built = match builder.kind.as_str() {
            "bmv" => build_bmv(&params, constants),
            "spacelike" => build_spacelike(&params, constants),
            other => {
                return Err(CliError::schema(format!(
                    "builder.type: unknown builder '{other}' (expected bmv | spacelike)"
                )))
            }
        };
        built.map_err(|e| CliError::schema(format!("builder.params: {e}")))
    }

    fn build_explicit(
        &self,
        particles: &[ParticleBlock],
        constants: &PhysicalConstants,
    ) -> Result<BranchScenario, CliError> {
        let window = self.window.as_ref().ok_or_else(|| {
            CliError::schema("window: required for explicit 'particles' scenarios".into())
        })?;
        let t_i = resolve(&window.start, Dimension::Time, constants, "window.start")?;
        let t_f = resolve(&window.end, Dimension::Time, constants, "window.end")?;
        if !(t_f > t_i) {
            return Err(CliError::schema(format!(
                "window: end ({t_f}) must exceed start ({t_i})"
            )));
        }

        // history requirement: rough bound from the rest positions
        let mut reach = 1.0_f64;
        for (i, p) in particles.iter().enumerate() {
            if let WorldlineBlock::Rest { rest } = &p.worldline_up {
                let _ = i;
                reach = reach.max(2.0 * Vec3::new(rest[0], rest[1], rest[2]).norm());
            }
        }
        let pad = 4.0 * reach / constants.c + 0.5 * (t_f - t_i);
        let full_domain = (t_i - pad, t_f + pad);

        let mut built = Vec::new();
        for (i, p) in particles.iter().enumerate() {
            let mass = match &p.mass {
                Some(q) => resolve(q, Dimension::Mass, constants, &format!("particles.{i}.mass"))?,
                None => 0.0,
            };
            let charge = match &p.charge {
                Some(q) => resolve(q, Dimension::Charge, constants, &format!("particles.{i}.charge"))?,
                None => 0.0,
            };
            let up = self.build_worldline(
                &p.worldline_up,
                constants,
                full_domain,
                &format!("particles.{i}.worldline_up"),
            )?;
            let down = self.build_worldline(
                &p.worldline_down,
                constants,
                full_domain,
                &format!("particles.{i}.worldline_down"),
            )?;
            built.push(ParticleBranches { mass, charge, up, down });
        }
        BranchScenario::new(built, self.interaction, (t_i, t_f), *constants)
            .map_err(|e| CliError::schema(format!("particles: {e}")))
    }

    fn build_worldline(
        &self,
        block: &WorldlineBlock,
        constants: &PhysicalConstants,
        full_domain: (f64, f64),
        path: &str,
    ) -> Result<Worldline, CliError> {
        match block {
            WorldlineBlock::Rest { rest } => {
                Worldline::at_rest(Vec3::new(rest[0], rest[1], rest[2]), full_domain.0, full_domain.1)
                    .map_err(|e| CliError::schema(format!("{path}: {e}")))
            }
            WorldlineBlock::Segments { start, segments } => {
                let mut t = resolve(start, Dimension::Time, constants, &format!("{path}.start"))?;
                if segments.is_empty() {
                    return Err(CliError::schema(format!("{path}.segments: must be non-empty")));
                }
                let mut segs = Vec::with_capacity(segments.len());
                for (k, s) in segments.iter().enumerate() {
                    let dur = resolve(
                        &s.duration,
                        Dimension::Time,
                        constants,
                        &format!("{path}.segments.{k}.duration"),
                    )?;
                    if !(dur > 0.0) {
                        return Err(CliError::schema(format!(
                            "{path}.segments.{k}.duration: must be positive, got {dur}"
                        )));
                    }
                    let coeffs = [
                        Vec3::new(s.coeffs[0][0], s.coeffs[0][1], s.coeffs[0][2]),
                        Vec3::new(s.coeffs[1][0], s.coeffs[1][1], s.coeffs[1][2]),
                        Vec3::new(s.coeffs[2][0], s.coeffs[2][1], s.coeffs[2][2]),
                        Vec3::new(s.coeffs[3][0], s.coeffs[3][1], s.coeffs[3][2]),
                    ];
                    segs.push(Segment { t_start: t, t_end: t + dur, coeffs });
                    t += dur;
                }
                let w = Worldline::new(segs).map_err(|e| CliError::schema(format!("{path}: {e}")))?;
                // static past/future padding is only valid from rest
                let (lo, hi) = w.domain();
                let needs_pad = lo > full_domain.0 || hi < full_domain.1;
                if needs_pad {
                    let v_start = w.velocity(lo).map_err(CliError::from_core)?.norm();
                    let v_end = w.velocity(hi).map_err(CliError::from_core)?.norm();
                    if v_start > 0.0 || v_end > 0.0 {
                        return Err(CliError::schema(format!(
                            "{path}: worldline must start and end at rest to be padded with static history (needs domain [{}, {}])",
                            full_domain.0, full_domain.1
                        )));
                    }
                    return w
                        .with_static_padding(full_domain.0, full_domain.1)
                        .map_err(|e| CliError::schema(format!("{path}: {e}")));
                }
                Ok(w)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const STATIC_PAIR: &str = r#"{
        "interaction": "gravity",
        "model": "exact",
        "tolerance": 1e-10,
        "window": {"start": 0.0, "end": 1.0},
        "particles": [
            {"mass": 1.0, "worldline_up": {"rest": [0, 0, 0]}, "worldline_down": {"rest": [0, 0, 0]}},
            {"mass": 1.0, "worldline_up": {"rest": [1, 0, 0]}, "worldline_down": {"rest": [1, 0, 0]}}
        ]
    }"#;

    #[test]
    fn static_pair_parses_and_loads() {
        let file = ScenarioFile::parse(STATIC_PAIR).unwrap();
        let loaded = file.load(None, None).unwrap();
        assert_eq!(loaded.model, ActionModel::Exact);
        assert_eq!(loaded.tolerance, 1e-10);
        assert_eq!(loaded.scenario.n_particles(), 2);
        assert_eq!(loaded.scenario.window(), (0.0, 1.0));
    }

    #[test]
    fn builder_with_units_loads() {
        let text = r#"{
            "interaction": "electromagnetism",
            "builder": {"type": "bmv", "params": {
                "charge": {"value": -1, "unit": "e"},
                "d": {"value": 1, "unit": "cm"},
                "delta_x": {"value": 0.3, "unit": "cm"},
                "duration": {"value": 50, "unit": "ns"},
                "hold": {"value": 200, "unit": "ns"}
            }}
        }"#;
        let file = ScenarioFile::parse(text).unwrap();
        let loaded = file.load(None, None).unwrap();
        assert_eq!(loaded.model, ActionModel::SlowMotion);
        assert!((loaded.scenario.length_scale() - 1e-2).abs() < 1e-15);
    }

    #[test]
    fn malformed_unit_names_the_field() {
        let text = r#"{
            "interaction": "gravity",
            "builder": {"type": "bmv", "params": {
                "mass": {"value": 1, "unit": "kg"},
                "d": {"value": 1, "unit": "kg"},
                "delta_x": 0.001,
                "duration": 1.0,
                "hold": 0.1
            }}
        }"#;
        let file = ScenarioFile::parse(text).unwrap();
        let err = file.load(None, None).unwrap_err();
        assert!(err.to_string().contains("builder.params.d"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{"interaction": "gravity", "bulider": {}}"#;
        assert!(ScenarioFile::parse(text).is_err());
    }

    #[test]
    fn constants_override_dials_c() {
        let text = r#"{
            "interaction": "gravity",
            "constants": {"c": 2.9979e10},
            "window": {"start": 0.0, "end": 1.0},
            "particles": [
                {"mass": 1.0, "worldline_up": {"rest": [0,0,0]}, "worldline_down": {"rest": [0,0,0]}},
                {"mass": 1.0, "worldline_up": {"rest": [2,0,0]}, "worldline_down": {"rest": [2,0,0]}}
            ]
        }"#;
        let file = ScenarioFile::parse(text).unwrap();
        let loaded = file.load(None, None).unwrap();
        assert_eq!(loaded.scenario.constants().c, 2.9979e10);
    }

    #[test]
    fn moving_worldline_without_rest_ends_cannot_be_padded() {
        let text = r#"{
            "interaction": "gravity",
            "window": {"start": 0.0, "end": 1.0},
            "particles": [
                {"mass": 1.0,
                 "worldline_up": {"start": 0.0, "segments": [
                    {"duration": 1.0, "coeffs": [[0,0,0],[5,0,0],[0,0,0],[0,0,0]]}
                 ]},
                 "worldline_down": {"rest": [0,0,0]}},
                {"mass": 1.0, "worldline_up": {"rest": [2,0,0]}, "worldline_down": {"rest": [2,0,0]}}
            ]
        }"#;
        let file = ScenarioFile::parse(text).unwrap();
        let err = file.load(None, None).unwrap_err();
        assert!(err.to_string().contains("at rest"), "{err}");
    }
}
