//! Piecewise-polynomial timelike trajectories.
//!
//! A [`Worldline`] is an ordered list of cubic (or lower degree) polynomial
//! segments x(t) ∈ ℝ³. Polynomials keep retarded-time root finding cheap and
//! exactly differentiable, and the scenarios of interest (rest → ramp → rest)
//! are piecewise polynomial to begin with. At an interior breakpoint the
//! velocity follows the right-limit convention; integration routines split
//! intervals at breakpoints so the convention never influences quadrature.

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// One polynomial piece, evaluated in local time τ = t − t_start for
/// conditioning. `coeffs[k]` is the coefficient of τ^k.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub t_start: f64,
    pub t_end: f64,
    pub coeffs: [Vec3; 4],
}

impl Segment {
    /// Constant-position segment.
    pub fn constant(pos: Vec3, t_start: f64, t_end: f64) -> Self {
        Self {
            t_start,
            t_end,
            coeffs: [pos, Vec3::ZERO, Vec3::ZERO, Vec3::ZERO],
        }
    }

    /// Uniform-motion segment x(t) = pos0 + vel·(t − t_start).
    pub fn uniform(pos0: Vec3, vel: Vec3, t_start: f64, t_end: f64) -> Self {
        Self {
            t_start,
            t_end,
            coeffs: [pos0, vel, Vec3::ZERO, Vec3::ZERO],
        }
    }

    /// Cubic Hermite segment interpolating endpoint positions and velocities.
    ///
    /// With zero endpoint velocities this is the C¹ smoothstep ramp used by
    /// the scenario builders.
    pub fn hermite(t_start: f64, t_end: f64, x0: Vec3, v0: Vec3, x1: Vec3, v1: Vec3) -> Self {
        let h = t_end - t_start;
        // cubic through (0, x0), (h, x1) with slopes v0, v1
        let c0 = x0;
        let c1 = v0;
        let c2 = ((x1 - x0) * 3.0 / h - (v0 * 2.0 + v1)) / h;
        let c3 = ((x0 - x1) * 2.0 + (v0 + v1) * h) / (h * h * h);
        Self {
            t_start,
            t_end,
            coeffs: [c0, c1, c2, c3],
        }
    }

    fn position_local(&self, tau: f64) -> Vec3 {
        let [c0, c1, c2, c3] = self.coeffs;
        c0 + tau * (c1 + tau * (c2 + tau * c3))
    }

    fn velocity_local(&self, tau: f64) -> Vec3 {
        let [_, c1, c2, c3] = self.coeffs;
        c1 + tau * (c2 * 2.0 + tau * (c3 * 3.0))
    }
}

/// Piecewise-cubic trajectory of one particle branch.
#[derive(Debug, Clone, PartialEq)]
pub struct Worldline {
    segments: Vec<Segment>,
}

impl Worldline {
    /// Builds a worldline from contiguous segments.
    ///
    /// Segments must be non-empty, each with positive duration, contiguous
    /// (`t_end` of one is `t_start` of the next) and with finite coefficients.
    /// Position continuity across breakpoints is a scenario-level check, since
    /// the admissible mismatch is relative to the scenario length scale.
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidInput("worldline needs at least one segment".into()));
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.t_end > s.t_start) {
                return Err(Error::InvalidInput(format!(
                    "segment {i} has non-increasing time span [{}, {}]",
                    s.t_start, s.t_end
                )));
            }
            if !s.coeffs.iter().all(|c| c.is_finite()) {
                return Err(Error::InvalidInput(format!("segment {i} has non-finite coefficients")));
            }
        }
        for i in 1..segments.len() {
            if segments[i].t_start != segments[i - 1].t_end {
                return Err(Error::InvalidInput(format!(
                    "segments {} and {i} are not contiguous ({} != {})",
                    i - 1,
                    segments[i - 1].t_end,
                    segments[i].t_start
                )));
            }
        }
        Ok(Self { segments })
    }

    /// Convenience: a particle at rest at `pos` over `[t_start, t_end]`.
    pub fn at_rest(pos: Vec3, t_start: f64, t_end: f64) -> Result<Self> {
        Self::new(vec![Segment::constant(pos, t_start, t_end)])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Domain [t_start, t_end] covered by the trajectory.
    pub fn domain(&self) -> (f64, f64) {
        (
            self.segments.first().unwrap().t_start,
            self.segments.last().unwrap().t_end,
        )
    }

    /// All segment boundaries including the domain endpoints, increasing.
    pub fn breakpoints(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self.segments.iter().map(|s| s.t_start).collect();
        out.push(self.segments.last().unwrap().t_end);
        out
    }

    fn segment_index(&self, t: f64) -> Result<usize> {
        let (lo, hi) = self.domain();
        // tiny slack for roundoff at the boundaries
        let slack = 1e-12 * (hi - lo).max(lo.abs()).max(hi.abs());
        if t < lo - slack || t > hi + slack {
            return Err(Error::OutOfDomain { t, lo, hi });
        }
        // right-limit convention: at an interior breakpoint pick the
        // segment starting there
        let idx = self
            .segments
            .partition_point(|s| s.t_start <= t)
            .saturating_sub(1);
        Ok(idx.min(self.segments.len() - 1))
    }

    /// Position x(t) (m).
    pub fn position(&self, t: f64) -> Result<Vec3> {
        let s = &self.segments[self.segment_index(t)?];
        Ok(s.position_local(t - s.t_start))
    }

    /// Velocity dx/dt (m/s); right limit at breakpoints.
    pub fn velocity(&self, t: f64) -> Result<Vec3> {
        let s = &self.segments[self.segment_index(t)?];
        Ok(s.velocity_local(t - s.t_start))
    }

    /// Largest position jump across interior breakpoints (m).
    pub fn max_discontinuity(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for pair in self.segments.windows(2) {
            let left = pair[0].position_local(pair[0].t_end - pair[0].t_start);
            let right = pair[1].position_local(0.0);
            worst = worst.max((left - right).norm());
        }
        worst
    }

    /// Largest speed found on a dense per-segment sample (m/s).
    pub fn max_speed_sampled(&self, samples_per_segment: usize) -> f64 {
        let n = samples_per_segment.max(2);
        let mut worst: f64 = 0.0;
        for s in &self.segments {
            let h = (s.t_end - s.t_start) / (n - 1) as f64;
            for k in 0..n {
                worst = worst.max(s.velocity_local(k as f64 * h).norm());
            }
        }
        worst
    }

    /// Extends the domain with static padding at the given end positions.
    /// Used by scenario builders to guarantee enough retarded history.
    pub fn with_static_padding(mut self, new_start: f64, new_end: f64) -> Result<Self> {
        let (lo, hi) = self.domain();
        if new_start < lo {
            let pos = self.position(lo)?;
            self.segments.insert(0, Segment::constant(pos, new_start, lo));
        }
        if new_end > hi {
            let pos = self.position(hi)?;
            self.segments.push(Segment::constant(pos, hi, new_end));
        }
        Worldline::new(self.segments)
    }
}
