// scratch calibration runs; not part of the deliverable test surface
use retphase_core::action::{phase, phase_table, ActionModel};
use retphase_core::boost::boost_scenario;
use retphase_core::constants::{planck_mass, ELEMENTARY_CHARGE, PhysicalConstants};
use retphase_core::entanglement::{entanglement_report, SpinState};
use retphase_core::geometry::Vec3;
use retphase_core::kinematics::{Interaction, SpinConfiguration};
use retphase_core::scenarios::*;
use std::time::Instant;

fn main() {
    let consts = PhysicalConstants::codata2018();

    // criterion 2 calibration
    {
        let d = 1.0;
        let light = d / consts.c;
        let t0 = Instant::now();
        let m = 2.6e-7;
        let p = BmvParams::new(Interaction::Gravity, m, d, 0.05 * d, 0.8 * light, 2.0 * light);
        let s = build_spacelike(&p, &consts).unwrap();
        let tol = 1e-10;
        let slow = phase_table(&s, ActionModel::SlowMotion, tol).unwrap();
        let inst = phase_table(&s, ActionModel::Instantaneous, tol).unwrap();
        let rep_slow = entanglement_report(&SpinState::uniform(2), &slow, 10.0 * tol).unwrap();
        let rep_inst = entanglement_report(&SpinState::uniform(2), &inst, 10.0 * tol).unwrap();
        println!(
            "C2: m={m:.3e} dphi_slow={:.3e} dphi_inst={:.3e} neg_slow={:.3e} neg_inst={:.3e} resid_slow={:.3e} elapsed={:?}",
            slow.delta_phi().unwrap(),
            inst.delta_phi().unwrap(),
            rep_slow.negativity,
            rep_inst.negativity,
            rep_slow.phase_residual,
            t0.elapsed()
        );
    }

    // criterion 3 calibration: electron EM; ramps at half a light-crossing
    // so the retardation lag is not smoothed away
    {
        let t0 = Instant::now();
        let d = 1e-2;
        let t_dur = 50e-9;
        let mut p = BmvParams::new(
            Interaction::Electromagnetism,
            -ELEMENTARY_CHARGE,
            d,
            0.3 * d,
            t_dur,
            20e-9,
        );
        p.ramp_fraction = 0.5 * (d / consts.c) / t_dur;
        println!("C3 ramp_fraction={:.3e} peak={:.3e}", p.ramp_fraction, p.peak_speed());
        let s = build_bmv(&p, &consts).unwrap();
        let tol = 1e-8;
        let slow = phase_table(&s, ActionModel::SlowMotion, tol).unwrap();
        let inst = phase_table(&s, ActionModel::Instantaneous, tol).unwrap();
        let d_slow = slow.delta_phi().unwrap();
        let d_inst = inst.delta_phi().unwrap();
        let est = estimate_retardation_correction(&p, &consts);
        println!(
            "C3: dphi_slow={d_slow:.6e} dphi_inst={d_inst:.6e} |diff|={:.4e} est={est:.4e} ratio={:.3} est_dphi={:.3e} elapsed={:?}",
            (d_slow - d_inst).abs(),
            (d_slow - d_inst).abs() / est,
            estimate_delta_phi(&p, &consts),
            t0.elapsed()
        );
    }

    // criterion 4: slow-motion convergence family
    {
        let t0 = Instant::now();
        let d = 1.0;
        let delta_x = 0.1;
        let r = 0.1;
        let sigma = SpinConfiguration::from_index(0, 2);
        let mut last_ratio = None;
        for beta in [1e-2, 1e-3, 1e-4] {
            let t_dur = 0.75 * delta_x / (r * beta * consts.c);
            let m = 6.0e-11 * (1e-2 / beta).sqrt(); // keep phases O(0.1..10)
            let p = BmvParams::new(Interaction::Gravity, m, d, delta_x, t_dur, 0.2 * t_dur);
            let s = build_bmv(&p, &consts).unwrap();
            let tol = 1e-12;
            let ex = phase(&s, &sigma, ActionModel::Exact, tol).unwrap();
            let sl = phase(&s, &sigma, ActionModel::SlowMotion, tol).unwrap();
            let rel = (ex.phase - sl.phase).abs() / ex.phase.abs();
            println!(
                "C4: beta={beta:.0e} phi_exact={:.4} rel_dev={rel:.3e} quad={:.1e} ratio_prev={:?}",
                ex.phase,
                ex.quad_error,
                last_ratio.map(|l: f64| l / rel)
            );
            last_ratio = Some(rel);
        }
        println!("C4 elapsed={:?}", t0.elapsed());
    }

    // criterion 5: boost invariance cost
    {
        let t0 = Instant::now();
        let d = 1.0;
        let light = d / consts.c;
        let p = BmvParams::new(Interaction::Gravity, 3.5e-9, d, 0.2, 40.0 * light, 20.0 * light);
        let s = build_bmv(&p, &consts).unwrap();
        let sigma = SpinConfiguration::from_index(1, 2);
        let tol = 1e-10;
        let original = phase(&s, &sigma, ActionModel::Exact, tol).unwrap();
        let boosted = boost_scenario(&s, Vec3::new(0.2, 0.0, 0.0)).unwrap();
        let b = phase(&boosted, &sigma, ActionModel::Exact, tol).unwrap();
        println!(
            "C5: phi={:.6} boosted={:.6} diff={:.3e} quad={:.1e}/{:.1e} elapsed={:?}",
            original.phase,
            b.phase,
            (original.phase - b.phase).abs(),
            original.quad_error,
            b.quad_error,
            t0.elapsed()
        );
    }

    // criterion 1 cost
    {
        let t0 = Instant::now();
        let d = 1.0;
        let m = 1.0e-14;
        let t_dur = 1.0;
        let pad = 2.0 * d / consts.c + 0.1;
        let w0 = retphase_core::Worldline::at_rest(Vec3::ZERO, -pad, t_dur + pad).unwrap();
        let w1 = retphase_core::Worldline::at_rest(Vec3::new(d, 0.0, 0.0), -pad, t_dur + pad).unwrap();
        let s = retphase_core::BranchScenario::new(
            vec![
                retphase_core::ParticleBranches { mass: m, charge: 0.0, up: w0.clone(), down: w0 },
                retphase_core::ParticleBranches { mass: m, charge: 0.0, up: w1.clone(), down: w1 },
            ],
            Interaction::Gravity,
            (0.0, t_dur),
            consts,
        )
        .unwrap();
        let expected = consts.g * m * m * t_dur / (consts.hbar * d);
        for model in ActionModel::all() {
            let est = phase(&s, &SpinConfiguration::from_index(0, 2), model, expected * 1e-9).unwrap();
            println!(
                "C1 {model}: rel={:.2e}",
                (est.phase - expected).abs() / expected
            );
        }
        println!("C1 elapsed={:?}", t0.elapsed());
    }

    // planck sanity
    println!("m_P = {:.4e}", planck_mass(&consts));
}
