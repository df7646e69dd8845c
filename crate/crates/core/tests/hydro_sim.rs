use proptest::prelude::*;
use wec_core::control::{pc_damping, rc_params, ControlConfig, ControlMode};
use wec_core::hydro::{cylinder_sample, excitation_force, radiation_kernel, HydroTable, RadiationKernel};
use wec_core::sim::{metrics, run, simulate, TRANSIENT_S};
use wec_core::TimeSeries;

const DT: f64 = 0.05;

fn setup() -> (HydroTable, RadiationKernel) {
    let t = cylinder_sample();
    let k = radiation_kernel(&t, DT / 2.0).unwrap();
    (t, k)
}

#[test]
fn kernel_round_trip_recovers_damping() {
    let (t, k) = setup();
    let peak = t.radiation_damping.iter().cloned().fold(0.0, f64::max);
    for (w, b) in t.omega.iter().zip(&t.radiation_damping) {
        if *w > 6.0 {
            break;
        }
        let rec = k.cosine_transform(*w);
        assert!((rec - b).abs() < 0.01 * peak, "w={w}: {rec} vs {b}");
        if *b >= 0.1 * peak {
            assert!((rec - b).abs() < 0.03 * b, "w={w}: {rec} vs {b}");
        }
    }
    // taps beyond the memory are below the truncation level
    let hmax = k.taps().iter().fold(0.0f64, |m, h| m.max(h.abs()));
    assert!(k.at(k.memory_length() + 1.0).abs() < 0.01 * hmax);
    assert!(k.memory_length() < 60.0);
}

#[test]
fn non_decaying_kernel_is_rejected() {
    let mut t = cylinder_sample();
    // a narrow spike in damping rings for minutes
    for (w, b) in t.omega.iter().zip(t.radiation_damping.iter_mut()) {
        *b = if (*w - 1.0).abs() < 0.015 { 1e5 } else { 0.0 };
    }
    assert!(matches!(radiation_kernel(&t, 0.05), Err(wec_core::Error::NonDecayingKernel { .. })));
}

#[test]
fn tone_excitation_has_table_gain_and_phase() {
    let mut t = cylinder_sample();
    for (w, p) in t.omega.iter().zip(t.excitation_phase.iter_mut()) {
        *p = 0.3 * w;
    }
    let w0 = 0.8;
    let zeta = TimeSeries::from_fn(0.0, 0.5, 3000, |s| (w0 * s).cos()).unwrap();
    let f = excitation_force(&t, &zeta).unwrap();
    let h = t.interp(w0).excitation;
    let lo = 150;
    for k in lo..3000 - lo {
        let s = zeta.time(k);
        let expected = h.norm() * (w0 * s + h.arg()).cos();
        assert!((f.values()[k] - expected).abs() < 0.01 * h.norm(), "k={k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn excitation_is_linear(
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
        z1 in prop::collection::vec(-1.0f64..1.0, 200),
        z2 in prop::collection::vec(-1.0f64..1.0, 200),
    ) {
        let t = cylinder_sample();
        let s1 = TimeSeries::new(0.0, 0.78125, z1).unwrap();
        let s2 = s1.with_values(z2).unwrap();
        let mix = s1.with_values(s1.values().iter().zip(s2.values()).map(|(p, q)| a * p + b * q).collect()).unwrap();
        let f1 = excitation_force(&t, &s1).unwrap();
        let f2 = excitation_force(&t, &s2).unwrap();
        let fm = excitation_force(&t, &mix).unwrap();
        let scale = t.stiffness * 6.0;
        for k in 0..200 {
            let lin = a * f1.values()[k] + b * f2.values()[k];
            prop_assert!((fm.values()[k] - lin).abs() < 1e-9 * scale);
        }
    }

    #[test]
    fn pto_force_is_odd_and_bounded(
        b in 0.0f64..2e6, s in -2e6f64..2e6, x in -5.0f64..5.0, v in -5.0f64..5.0,
        mode in prop_oneof![Just(ControlMode::Pc), Just(ControlMode::Rc)],
    ) {
        use wec_core::control::{pto_force, Gains, Saturation};
        for sat in [Saturation::PerTerm, Saturation::Total, Saturation::Off] {
            let cfg = ControlConfig { mode, f_max: 5e5, saturation: sat };
            let g = Gains { b_p: b, s_p: s };
            let p = pto_force(g, x, v, &cfg);
            let q = pto_force(g, -x, -v, &cfg);
            prop_assert_eq!(p.f_p, -q.f_p);
            match sat {
                Saturation::PerTerm => {
                    prop_assert!(p.f_damp.abs() <= 5e5 && p.f_spring.abs() <= 5e5);
                    prop_assert!(p.f_p.abs() <= 1e6);
                }
                Saturation::Total => prop_assert!(p.f_p.abs() <= 5e5 * (1.0 + 1e-15)),
                Saturation::Off => {}
            }
            prop_assert!(-p.f_damp * v >= 0.0);
        }
    }
}

#[test]
fn pc_damping_is_continuous_across_nodes() {
    let t = cylinder_sample();
    for w in t.omega.iter().take(200).skip(4) {
        let a = pc_damping(&t, w - 1e-9);
        let b = pc_damping(&t, w + 1e-9);
        assert!((a - b).abs() < 1e-3 * a.max(1.0));
    }
}

fn regular_run(w0: f64, mode: ControlMode, tune_at: f64, dt: f64) -> wec_core::sim::Metrics {
    let t = cylinder_sample();
    let k = radiation_kernel(&t, dt / 2.0).unwrap();
    let g = t.interp(w0).excitation;
    let fe = TimeSeries::from_fn(0.0, dt, (1800.0 / dt) as usize + 1, |s| g.norm() * (w0 * s + g.arg()).cos()).unwrap();
    let what = fe.map(|_| tune_at);
    run(&t, &k, &fe, &what, &ControlConfig::unconstrained(mode), dt, None).unwrap().metrics
}

#[test]
fn resonated_absorber_reaches_the_optimum() {
    let t = cylinder_sample();
    for w0 in [0.6, 0.8, 1.2, 1.5] {
        let m = regular_run(w0, ControlMode::Rc, w0, DT);
        let f = t.interp(w0).excitation.norm();
        let optimum = f * f / (8.0 * t.interp(w0).damping);
        assert!((m.mean_power_w / optimum - 1.0).abs() < 0.03, "w0={w0}: {} vs {optimum}", m.mean_power_w);
        let pc = regular_run(w0, ControlMode::Pc, w0, DT);
        if (w0 - 1.2f64).abs() > 0.05 {
            assert!(pc.mean_power_w < m.mean_power_w);
        }
        assert!(m.energy_balance_error < 0.01, "{}", m.energy_balance_error);
    }
}

#[test]
fn rc_velocity_is_in_phase_with_force() {
    let (t, k) = setup();
    let w0 = 0.8;
    let g = t.interp(w0).excitation;
    let fe = TimeSeries::from_fn(0.0, DT, 12001, |s| g.norm() * (w0 * s).cos()).unwrap();
    let what = fe.map(|_| w0);
    let tr = simulate(&t, &k, &fe, &what, &ControlConfig::unconstrained(ControlMode::Rc), DT).unwrap();
    // project v onto cos and sin over the last 50 periods
    let per = 2.0 * std::f64::consts::PI / w0;
    let start = tr.len() - (50.0 * per / DT) as usize;
    let (mut c, mut s) = (0.0, 0.0);
    for i in start..tr.len() {
        let th = w0 * tr.time(i);
        c += tr.v[i] * th.cos();
        s += tr.v[i] * th.sin();
    }
    let lag = (-s).atan2(c).to_degrees();
    assert!(lag.abs() < 2.0, "{lag}");
    let _ = rc_params(&t, w0);
}

#[test]
fn halving_dt_barely_changes_energy() {
    for mode in [ControlMode::Pc, ControlMode::Rc] {
        let a = regular_run(0.9, mode, 0.85, 0.1);
        let b = regular_run(0.9, mode, 0.85, 0.05);
        assert!((a.energy_j / b.energy_j - 1.0).abs() < 0.005);
    }
}

#[test]
fn passive_power_is_never_negative() {
    let (t, k) = setup();
    let fe = TimeSeries::from_fn(0.0, DT, 8000, |s| 4e5 * ((0.7 * s).cos() + 0.5 * (1.3 * s).sin())).unwrap();
    let what = TimeSeries::from_fn(0.0, DT, 8000, |s| 0.9 + 0.3 * (0.01 * s).sin()).unwrap();
    let tr = simulate(&t, &k, &fe, &what, &ControlConfig::per_term(ControlMode::Pc, 5e5), DT).unwrap();
    assert!(tr.p_abs().iter().all(|p| *p >= 0.0));
    assert!(tr.f_damp.iter().all(|f| f.abs() <= 5e5));
    let m = metrics(&tr, &t, None, TRANSIENT_S);
    assert!(m.radiated_energy_j > 0.0);
}

#[test]
fn reactive_energy_cancels_over_whole_periods() {
    let (t, _) = setup();
    let w0: f64 = 0.8;
    let per = 2.0 * std::f64::consts::PI / w0;
    let dt = per / 200.0;
    let n = 200 * 40 + 1;
    let tr = wec_core::sim::Trajectory {
        t0: 0.0,
        dt,
        x: (0..n).map(|i| (w0 * i as f64 * dt).sin()).collect(),
        v: (0..n).map(|i| w0 * (w0 * i as f64 * dt).cos()).collect(),
        fe: vec![0.0; n],
        fp: (0..n).map(|i| -3e5 * (w0 * i as f64 * dt).sin()).collect(),
        f_damp: vec![0.0; n],
        f_spring: (0..n).map(|i| -3e5 * (w0 * i as f64 * dt).sin()).collect(),
        f_rad: vec![0.0; n],
        omega_hat: vec![w0; n],
    };
    let m = metrics(&tr, &t, None, 0.0);
    assert!(m.reactive_energy_j.abs() < 1e-6 * m.mean_abs_reactive_power_w * 40.0 * per);
    assert!(m.mean_abs_reactive_power_w > 0.0);
}
