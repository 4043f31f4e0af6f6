//! Spin-conditioned branch scenarios and the velocity bilinears entering the
//! interaction integrands.
//!
//! The gravitational bilinear is evaluated by explicit componentwise 4×4
//! contraction — build V^{μν} = γ v^μ v^ν, trace-reverse one factor, lower
//! both indices of the other with the metric, and sum. The hand-simplified
//! scalar form γ_a γ_b [(v_a·v_b)² − ½ (v_a·v_a)(v_b·v_b)] is kept in the
//! tests as an independent algebraic route. The componentwise value at rest
//! is c⁴/2, which together with the G/c⁴ prefactor of the exact action makes
//! the static ordered-pair sum reduce to the Newtonian rate G m₁m₂/d — the
//! anchor the whole convention chain is validated against.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{Error, Result};
use crate::geometry::{contract, outer, trace_reverse, Tensor4, Vec3};
use crate::worldline::Worldline;

/// Four-velocity-like data of a worldline point: v^μ = (c, **v**) plus the
/// Lorentz factor γ = (1 − |**v**|²/c²)^(−1/2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics4 {
    pub v4: [f64; 4],
    pub gamma: f64,
}

impl Kinematics4 {
    /// Builds the kinematic data for a 3-velocity; errors on |v| ≥ c.
    pub fn from_velocity(v: Vec3, c: f64) -> Result<Self> {
        let beta2 = v.norm_squared() / (c * c);
        if beta2 >= 1.0 {
            return Err(Error::Numerical(format!(
                "superluminal velocity |v| = {} with c = {c}",
                v.norm()
            )));
        }
        Ok(Self {
            v4: [c, v.x, v.y, v.z],
            gamma: 1.0 / (1.0 - beta2).sqrt(),
        })
    }

    pub fn three_velocity(&self) -> Vec3 {
        Vec3::new(self.v4[1], self.v4[2], self.v4[3])
    }

    /// The rank-1 tensor V^{μν} = γ v^μ v^ν sourcing the metric perturbation.
    pub fn source_tensor(&self) -> Tensor4 {
        let mut t = outer(self.v4, self.v4);
        for row in t.iter_mut() {
            for el in row.iter_mut() {
                *el *= self.gamma;
            }
        }
        t
    }
}

/// Electromagnetic velocity bilinear η_{μν} v_a^μ v_b^ν = −c² + **v**_a·**v**_b.
pub fn v_bilinear_em(ka: &Kinematics4, kb: &Kinematics4) -> f64 {
    crate::geometry::minkowski_dot(ka.v4, kb.v4)
}

/// Gravitational velocity bilinear V̄_a^{μν} V_{b μν} via componentwise
/// contraction. Symmetric in (a, b); equals c⁴/2 when both particles are at
/// rest.
pub fn v_bilinear_gravity(ka: &Kinematics4, kb: &Kinematics4) -> f64 {
    let va_bar = trace_reverse(&ka.source_tensor());
    let vb = kb.source_tensor();
    contract(&va_bar, &vb)
}

/// Spin projection of one particle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

/// One spin assignment per particle, selecting one branch worldline each.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfiguration {
    spins: Vec<Spin>,
}

impl SpinConfiguration {
    pub fn new(spins: Vec<Spin>) -> Self {
        Self { spins }
    }

    /// Decodes a basis index: bit (N−1−a) of `index` holds particle a's spin,
    /// with up = 0. For N = 2 the order is uu, ud, du, dd.
    pub fn from_index(index: usize, n_particles: usize) -> Self {
        let spins = (0..n_particles)
            .map(|a| {
                if (index >> (n_particles - 1 - a)) & 1 == 0 {
                    Spin::Up
                } else {
                    Spin::Down
                }
            })
            .collect();
        Self { spins }
    }

    pub fn index(&self) -> usize {
        let n = self.spins.len();
        self.spins
            .iter()
            .enumerate()
            .map(|(a, s)| match s {
                Spin::Up => 0,
                Spin::Down => 1 << (n - 1 - a),
            })
            .sum()
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spin(&self, particle: usize) -> Spin {
        self.spins[particle]
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    /// All 2^N configurations in basis-index order.
    pub fn enumerate(n_particles: usize) -> Vec<SpinConfiguration> {
        (0..1usize << n_particles)
            .map(|i| SpinConfiguration::from_index(i, n_particles))
            .collect()
    }

    /// Compact label such as "uu" or "udd".
    pub fn label(&self) -> String {
        self.spins
            .iter()
            .map(|s| match s {
                Spin::Up => 'u',
                Spin::Down => 'd',
            })
            .collect()
    }
}

impl std::fmt::Display for SpinConfiguration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// Which field mediates the interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interaction {
    Gravity,
    Electromagnetism,
}

/// One particle with its two spin-conditioned branch trajectories.
#[derive(Debug, Clone)]
pub struct ParticleBranches {
    /// Mass (kg).
    pub mass: f64,
    /// Charge (C).
    pub charge: f64,
    /// Trajectory taken when the spin is up.
    pub up: Worldline,
    /// Trajectory taken when the spin is down.
    pub down: Worldline,
}

impl ParticleBranches {
    pub fn branch(&self, spin: Spin) -> &Worldline {
        match spin {
            Spin::Up => &self.up,
            Spin::Down => &self.down,
        }
    }
}

/// N particles with per-spin worldlines, an interaction kind, a coordinate
/// time window and the constants set. Immutable after construction.
#[derive(Debug, Clone)]
pub struct BranchScenario {
    particles: Vec<ParticleBranches>,
    interaction: Interaction,
    window: (f64, f64),
    constants: PhysicalConstants,
    length_scale: f64,
    /// Diagnostic hook used by the validation suite to inject a convention
    /// fault; 1.0 in normal operation.
    pub(crate) bilinear_scale: f64,
}

impl BranchScenario {
    pub fn new(
        particles: Vec<ParticleBranches>,
        interaction: Interaction,
        window: (f64, f64),
        constants: PhysicalConstants,
    ) -> Result<Self> {
        constants.validate()?;
        if particles.is_empty() {
            return Err(Error::InvalidInput("scenario needs at least one particle".into()));
        }
        let (t_i, t_f) = window;
        if !(t_f > t_i) || !t_i.is_finite() || !t_f.is_finite() {
            return Err(Error::InvalidInput(format!(
                "window [{t_i}, {t_f}] must be a finite, increasing interval"
            )));
        }
        for (a, p) in particles.iter().enumerate() {
            match interaction {
                Interaction::Gravity => {
                    if !(p.mass > 0.0) {
                        return Err(Error::InvalidInput(format!(
                            "particle {a}: gravity requires mass > 0, got {}",
                            p.mass
                        )));
                    }
                }
                Interaction::Electromagnetism => {
                    if p.charge == 0.0 || !p.charge.is_finite() {
                        return Err(Error::InvalidInput(format!(
                            "particle {a}: electromagnetism requires charge != 0, got {}",
                            p.charge
                        )));
                    }
                }
            }
            if p.mass < 0.0 {
                return Err(Error::InvalidInput(format!("particle {a}: negative mass")));
            }
            for (name, w) in [("up", &p.up), ("down", &p.down)] {
                let (lo, hi) = w.domain();
                if lo > t_i || hi < t_f {
                    return Err(Error::InvalidInput(format!(
                        "particle {a} branch {name}: domain [{lo}, {hi}] does not cover the window [{t_i}, {t_f}]"
                    )));
                }
            }
        }

        let length_scale = Self::compute_length_scale(&particles, t_i)?;

        // continuity relative to the scenario length scale
        let cont_tol = 1e-12 * length_scale;
        for (a, p) in particles.iter().enumerate() {
            for (name, w) in [("up", &p.up), ("down", &p.down)] {
                let disc = w.max_discontinuity();
                if disc > cont_tol {
                    return Err(Error::InvalidInput(format!(
                        "particle {a} branch {name}: position discontinuity {disc} exceeds {cont_tol}"
                    )));
                }
            }
        }

        // subluminality on a dense sample
        for (a, p) in particles.iter().enumerate() {
            for (name, w) in [("up", &p.up), ("down", &p.down)] {
                let vmax = w.max_speed_sampled(64);
                if vmax >= constants.c {
                    return Err(Error::InvalidInput(format!(
                        "particle {a} branch {name}: sampled speed {vmax} is not below c = {}",
                        constants.c
                    )));
                }
            }
        }

        Ok(Self {
            particles,
            interaction,
            window,
            constants,
            length_scale,
            bilinear_scale: 1.0,
        })
    }

    fn compute_length_scale(particles: &[ParticleBranches], t_i: f64) -> Result<f64> {
        let mut scale: f64 = 0.0;
        for a in 0..particles.len() {
            for b in (a + 1)..particles.len() {
                let pa = particles[a].up.position(t_i)?;
                let pb = particles[b].up.position(t_i)?;
                scale = scale.max((pa - pb).norm());
            }
            scale = scale.max(particles[a].up.position(t_i)?.norm() * f64::EPSILON);
        }
        Ok(if scale > 0.0 { scale } else { 1.0 })
    }

    pub fn particles(&self) -> &[ParticleBranches] {
        &self.particles
    }

    pub fn n_particles(&self) -> usize {
        self.particles.len()
    }

    pub fn interaction(&self) -> Interaction {
        self.interaction
    }

    pub fn window(&self) -> (f64, f64) {
        self.window
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    /// Characteristic length (max pairwise distance at the window start, or
    /// 1 m for degenerate inputs); sets retardation solver tolerances.
    pub fn length_scale(&self) -> f64 {
        self.length_scale
    }

    /// The branch worldline of particle `a` selected by σ.
    pub fn branch(&self, sigma: &SpinConfiguration, a: usize) -> &Worldline {
        self.particles[a].branch(sigma.spin(a))
    }

    /// Coupling strength of particle `a` for the scenario's interaction:
    /// mass for gravity, charge for electromagnetism.
    pub fn coupling(&self, a: usize) -> f64 {
        match self.interaction {
            Interaction::Gravity => self.particles[a].mass,
            Interaction::Electromagnetism => self.particles[a].charge,
        }
    }

    /// Same scenario restricted to a different window (still validated).
    pub fn with_window(&self, t_i: f64, t_f: f64) -> Result<Self> {
        Self::new(
            self.particles.clone(),
            self.interaction,
            (t_i, t_f),
            self.constants,
        )
    }

    /// Same scenario with particles (and their branches) reordered.
    pub fn with_particle_order(&self, order: &[usize]) -> Result<Self> {
        if order.len() != self.particles.len() {
            return Err(Error::InvalidInput("permutation length mismatch".into()));
        }
        let particles = order.iter().map(|&i| self.particles[i].clone()).collect();
        Self::new(particles, self.interaction, self.window, self.constants)
    }

    /// Validation hook: scales the gravitational bilinear to emulate a
    /// convention fault. Not part of the physics API.
    #[doc(hidden)]
    pub fn with_bilinear_fault(mut self, scale: f64) -> Self {
        self.bilinear_scale = scale;
        self
    }

    /// Non-cryptographic fingerprint of the full scenario definition, stable
    /// across runs; embedded in outputs so results are self-describing.
    pub fn digest(&self) -> String {
        let mut h = Fnv1a::new();
        h.write_u64(self.particles.len() as u64);
        for p in &self.particles {
            h.write_f64(p.mass);
            h.write_f64(p.charge);
            for w in [&p.up, &p.down] {
                h.write_u64(w.segments().len() as u64);
                for s in w.segments() {
                    h.write_f64(s.t_start);
                    h.write_f64(s.t_end);
                    for c in &s.coeffs {
                        h.write_f64(c.x);
                        h.write_f64(c.y);
                        h.write_f64(c.z);
                    }
                }
            }
        }
        h.write_u64(match self.interaction {
            Interaction::Gravity => 0,
            Interaction::Electromagnetism => 1,
        });
        h.write_f64(self.window.0);
        h.write_f64(self.window.1);
        for v in [
            self.constants.c,
            self.constants.g,
            self.constants.hbar,
            self.constants.k_e,
            self.constants.epsilon0,
        ] {
            h.write_f64(v);
        }
        format!("{:016x}", h.finish())
    }
}

/// FNV-1a 64-bit, enough for a scenario fingerprint.
struct Fnv1a(u64);

impl Fnv1a {
    fn new() -> Self {
        Fnv1a(0xcbf2_9ce4_8422_2325)
    }

    fn write_u64(&mut self, v: u64) {
        for byte in v.to_le_bytes() {
            self.0 ^= byte as u64;
            self.0 = self.0.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }

    fn write_f64(&mut self, v: f64) {
        self.write_u64(v.to_bits());
    }

    fn finish(&self) -> u64 {
        self.0
    }
}
