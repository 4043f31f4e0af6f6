//! Spin-state evolution and entanglement quantification.
//!
//! Branch phases act on the spin state diagonally: A_σ → A_σ e^{iφ_σ}.
//! Whether the result is entangled is decided entirely by the non-additive
//! part of the phases — any pattern of the form φ_σ = C + Σ_a f_a(s_a) is a
//! product of local phase gates and creates nothing. [`phase_additivity_check`]
//! tests exactly this decomposition; [`negativity`] and [`concurrence`]
//! quantify the entanglement of the evolved state by two independent
//! constructions, which keeps linear-algebra bugs visible.

use num_complex::Complex64;
use serde::Serialize;

use crate::action::PhaseTable;
use crate::error::{Error, Result};
use crate::kinematics::Spin;
use crate::linalg::{hermitian_eigenvalues, solve_linear};

/// Pure state of N embedded spins: 2^N complex amplitudes indexed like
/// [`crate::kinematics::SpinConfiguration::index`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    amps: Vec<Complex64>,
    n_particles: usize,
}

impl SpinState {
    /// Builds a state from amplitudes; the norm must already be 1 within
    /// 1e-12.
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let n_particles = Self::check_len(&amps)?;
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "state is not normalized: sum |A|^2 = {norm2}"
            )));
        }
        Ok(Self { amps, n_particles })
    }

    /// Builds a state by rescaling arbitrary non-zero amplitudes to norm 1.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        Self::check_len(&amps)?;
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm2 <= 0.0 || !norm2.is_finite() {
            return Err(Error::InvalidInput("cannot normalize a zero or non-finite state".into()));
        }
        let scale = norm2.sqrt().recip();
        Self::new(amps.into_iter().map(|a| a * scale).collect())
    }

    /// Uniform superposition over all 2^N configurations.
    pub fn uniform(n_particles: usize) -> Self {
        let dim = 1usize << n_particles;
        let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        Self { amps: vec![amp; dim], n_particles }
    }

    fn check_len(amps: &[Complex64]) -> Result<usize> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::InvalidInput(format!(
                "amplitude count {dim} is not a power of two >= 2"
            )));
        }
        Ok(dim.trailing_zeros() as usize)
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_squared(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Applies the accumulated phases: A_σ → A_σ e^{iφ_σ}. Norm-preserving.
pub fn evolve(initial: &SpinState, phases: &PhaseTable) -> Result<SpinState> {
    if phases.n_particles != initial.n_particles() {
        return Err(Error::InvalidInput(format!(
            "phase table is for {} particles, state has {}",
            phases.n_particles,
            initial.n_particles()
        )));
    }
    let amps = initial
        .amps
        .iter()
        .zip(phases.entries.iter())
        .map(|(a, e)| a * Complex64::from_polar(1.0, e.phase))
        .collect();
    Ok(SpinState { amps, n_particles: initial.n_particles })
}

/// Negativity of the state across the bipartition given by the particle
/// indices in `partition` (subsystem A) versus the rest: the absolute sum of
/// the negative eigenvalues of the partially transposed density matrix.
/// For two qubits the value lies in [0, ½].
pub fn negativity(state: &SpinState, partition: &[usize]) -> Result<f64> {
    let n = state.n_particles();
    if n < 2 {
        return Err(Error::InvalidInput("negativity needs at least two particles".into()));
    }
    if partition.is_empty() || partition.len() >= n {
        return Err(Error::InvalidInput(
            "partition must be a non-empty proper subset of the particles".into(),
        ));
    }
    let mut mask = 0usize;
    for &a in partition {
        if a >= n {
            return Err(Error::InvalidInput(format!("partition index {a} out of range for {n} particles")));
        }
        let bit = 1usize << (n - 1 - a);
        if mask & bit != 0 {
            return Err(Error::InvalidInput(format!("duplicate partition index {a}")));
        }
        mask |= bit;
    }

    let dim = state.dim();
    let keep = !mask;
    // rho^{T_A}[i][j] = psi[(j&A)|(i&~A)] * conj(psi[(i&A)|(j&~A)])
    let mut pt = vec![vec![Complex64::new(0.0, 0.0); dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let row = (j & mask) | (i & keep);
            let col = (i & mask) | (j & keep);
            pt[i][j] = state.amps[row] * state.amps[col].conj();
        }
    }
    let eig = hermitian_eigenvalues(&pt)?;
    Ok(eig.iter().filter(|&&l| l < 0.0).map(|l| -l).sum())
}

/// Two-qubit concurrence of a pure state via the spin-flip construction:
/// C = |⟨ψ|σ_y⊗σ_y|ψ*⟩| = 2 |A_uu A_dd − A_ud A_du|.
pub fn concurrence(state: &SpinState) -> Result<f64> {
    if state.n_particles() != 2 {
        return Err(Error::InvalidInput(format!(
            "concurrence is defined here for 2 particles, state has {}",
            state.n_particles()
        )));
    }
    let a = &state.amps;
    Ok(2.0 * (a[0] * a[3] - a[1] * a[2]).norm())
}

/// Result of the additive-phase separability test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdditivityReport {
    pub is_additive: bool,
    /// Max absolute deviation of the phases from the best additive model
    /// φ_σ = c + Σ_a f_a(s_a) (radians).
    pub residual: f64,
}

/// Least-squares fit of the phase table to an additive (per-spin) model.
/// Additive phases evolve any product state to a product state, so
/// `is_additive` certifies that the table generates no entanglement.
pub fn phase_additivity_check(phases: &PhaseTable, tol: f64) -> Result<AdditivityReport> {
    let n = phases.n_particles;
    if n < 2 {
        return Err(Error::InvalidInput("additivity check needs at least two particles".into()));
    }
    if !(tol >= 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be non-negative, got {tol}")));
    }
    let dim = phases.entries.len();
    let params = n + 1; // constant + one up-indicator weight per particle
    // design matrix row for configuration sigma: [1, [s_0 = up], ..., [s_{N-1} = up]]
    let row = |idx: usize, p: usize| -> f64 {
        if p == 0 {
            1.0
        } else {
            let a = p - 1;
            let cfg = crate::kinematics::SpinConfiguration::from_index(idx, n);
            if cfg.spin(a) == Spin::Up {
                1.0
            } else {
                0.0
            }
        }
    };
    // normal equations X^T X beta = X^T phi
    let mut xtx = vec![vec![0.0f64; params]; params];
    let mut xtp = vec![0.0f64; params];
    for idx in 0..dim {
        let phi = phases.entries[idx].phase;
        for p in 0..params {
            let rp = row(idx, p);
            xtp[p] += rp * phi;
            for q in 0..params {
                xtx[p][q] += rp * row(idx, q);
            }
        }
    }
    let beta = solve_linear(xtx, xtp)?;
    let mut residual = 0.0f64;
    for idx in 0..dim {
        let fit: f64 = (0..params).map(|p| beta[p] * row(idx, p)).sum();
        residual = residual.max((phases.entries[idx].phase - fit).abs());
    }
    Ok(AdditivityReport { is_additive: residual <= tol, residual })
}

/// Combined entanglement summary for an evolved state.
#[derive(Debug, Clone, Serialize)]
pub struct EntanglementReport {
    pub negativity: f64,
    /// Present for two particles only.
    pub concurrence: Option<f64>,
    pub is_separable_by_phase_additivity: bool,
    /// Residual of the additive-phase fit (radians).
    pub phase_residual: f64,
}

/// Evolves `initial` under `phases` and reports negativity (first particle
/// versus the rest), concurrence (two particles) and the additivity verdict.
pub fn entanglement_report(
    initial: &SpinState,
    phases: &PhaseTable,
    additivity_tol: f64,
) -> Result<EntanglementReport> {
    let evolved = evolve(initial, phases)?;
    let additivity = phase_additivity_check(phases, additivity_tol)?;
    let neg = negativity(&evolved, &[0])?;
    let conc = if evolved.n_particles() == 2 {
        Some(concurrence(&evolved)?)
    } else {
        None
    };
    Ok(EntanglementReport {
        negativity: neg,
        concurrence: conc,
        is_separable_by_phase_additivity: additivity.is_additive,
        phase_residual: additivity.residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::{ActionModel, PhaseEstimate};
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn table(phases: &[f64]) -> PhaseTable {
        let n = phases.len().trailing_zeros() as usize;
        PhaseTable {
            model: ActionModel::SlowMotion,
            scenario_digest: "test".into(),
            n_particles: n,
            entries: phases
                .iter()
                .map(|&p| PhaseEstimate { phase: p, quad_error: 0.0 })
                .collect(),
        }
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn evolve_preserves_norm_and_equal_phases_are_global() {
        let st = SpinState::uniform(2);
        let out = evolve(&st, &table(&[0.7, 0.7, 0.7, 0.7])).unwrap();
        assert_relative_eq!(out.norm_squared(), 1.0, epsilon = 1e-14);
        // output equals input up to the global factor e^{0.7i}
        let g = Complex64::from_polar(1.0, 0.7);
        for (a, b) in out.amplitudes().iter().zip(st.amplitudes()) {
            assert!((a - g * b).norm() < 1e-14);
        }
        // zero phases act as the identity
        let id = evolve(&st, &table(&[0.0; 4])).unwrap();
        assert_eq!(id.amplitudes(), st.amplitudes());
    }

    #[test]
    fn pi_phase_on_one_branch_makes_bell_like_state() {
        let st = SpinState::uniform(2);
        let out = evolve(&st, &table(&[0.0, PI, 0.0, 0.0])).unwrap();
        let neg = negativity(&out, &[0]).unwrap();
        assert_relative_eq!(neg, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn product_state_has_zero_negativity() {
        let st = SpinState::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(negativity(&st, &[0]).unwrap() < 1e-13);
        // |+>|+> too
        let plus = SpinState::uniform(2);
        assert!(negativity(&plus, &[0]).unwrap() < 1e-13);
        assert!(concurrence(&plus).unwrap() < 1e-13);
    }

    #[test]
    fn bell_state_negativity_and_concurrence() {
        let r = 0.5f64.sqrt();
        let bell = SpinState::new(vec![c(r, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(r, 0.0)]).unwrap();
        assert_relative_eq!(negativity(&bell, &[0]).unwrap(), 0.5, epsilon = 1e-12);
        assert_relative_eq!(concurrence(&bell).unwrap(), 1.0, epsilon = 1e-12);
        // the other bipartition labelling gives the same value
        assert_relative_eq!(negativity(&bell, &[1]).unwrap(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn phase_state_negativity_closed_form() {
        // uniform amplitudes with phases (0, dphi, 0, 0): N = |sin(dphi/2)|/2,
        // checked against the partial-transpose eigensolve route
        for k in 0..=16 {
            let dphi = -2.0 * PI + 4.0 * PI * k as f64 / 16.0;
            let st = evolve(&SpinState::uniform(2), &table(&[0.0, dphi, 0.0, 0.0])).unwrap();
            let neg = negativity(&st, &[0]).unwrap();
            assert_relative_eq!(neg, 0.5 * (dphi / 2.0).sin().abs(), epsilon = 1e-12);
            // concurrence cross-check: C = 2 N for these pure states
            assert_relative_eq!(concurrence(&st).unwrap(), 2.0 * neg, epsilon = 1e-12);
        }
    }

    #[test]
    fn additivity_all_equal_phases() {
        let rep = phase_additivity_check(&table(&[1.3, 1.3, 1.3, 1.3]), 1e-12).unwrap();
        assert!(rep.is_additive);
        assert!(rep.residual < 1e-13);
    }

    #[test]
    fn additivity_detects_pi_defect_with_quarter_residual() {
        // best additive fit to (0, pi, 0, 0) leaves +/- pi/4 deviations
        let rep = phase_additivity_check(&table(&[0.0, PI, 0.0, 0.0]), 1e-6).unwrap();
        assert!(!rep.is_additive);
        assert_relative_eq!(rep.residual, PI / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn additivity_accepts_local_patterns() {
        // phi = c + f(s1) + g(s2) for arbitrary values
        let (cst, f_u, f_d, g_u, g_d) = (0.4, 1.0, -0.7, 0.2, 2.5);
        let phases = [
            cst + f_u + g_u,
            cst + f_u + g_d,
            cst + f_d + g_u,
            cst + f_d + g_d,
        ];
        let rep = phase_additivity_check(&table(&phases), 1e-12).unwrap();
        assert!(rep.is_additive, "residual = {}", rep.residual);
    }

    #[test]
    fn entanglement_invariant_under_local_phases() {
        let base = [0.0, 0.8, 0.0, 0.0];
        let st0 = evolve(&SpinState::uniform(2), &table(&base)).unwrap();
        let n0 = negativity(&st0, &[0]).unwrap();
        // add a global constant and arbitrary per-spin phases
        let (cst, f_u, f_d, g_u, g_d) = (1.1, -0.3, 0.9, 0.45, -2.0);
        let local = [
            base[0] + cst + f_u + g_u,
            base[1] + cst + f_u + g_d,
            base[2] + cst + f_d + g_u,
            base[3] + cst + f_d + g_d,
        ];
        let st1 = evolve(&SpinState::uniform(2), &table(&local)).unwrap();
        let n1 = negativity(&st1, &[0]).unwrap();
        assert_relative_eq!(n0, n1, epsilon = 1e-12);
        assert_relative_eq!(
            concurrence(&st0).unwrap(),
            concurrence(&st1).unwrap(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn three_particle_negativity_of_ghz() {
        let r = 0.5f64.sqrt();
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0] = c(r, 0.0);
        amps[7] = c(r, 0.0);
        let ghz = SpinState::new(amps).unwrap();
        // any single-particle cut of GHZ has negativity 1/2
        for a in 0..3 {
            assert_relative_eq!(negativity(&ghz, &[a]).unwrap(), 0.5, epsilon = 1e-11);
        }
    }

    #[test]
    fn input_validation() {
        assert!(SpinState::new(vec![c(1.0, 0.0)]).is_err());
        assert!(SpinState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(SpinState::normalized(vec![c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        let st = SpinState::uniform(2);
        assert!(negativity(&st, &[]).is_err());
        assert!(negativity(&st, &[0, 1]).is_err());
        assert!(negativity(&st, &[5]).is_err());
        assert!(concurrence(&SpinState::uniform(3)).is_err());
        // mismatched table size
        assert!(evolve(&SpinState::uniform(3), &table(&[0.0; 4])).is_err());
    }
}
