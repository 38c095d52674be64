use memwin_core::attractor::{averaged_rhs, biolek_xa_closed_form};
use memwin_core::device::{Activation, MemristorModel};
use memwin_core::drive::{PulseLayout, PulseTrain, Waveform};
use memwin_core::sim::{detect_limit_cycle, integrate, moving_average, SimConfig};
use memwin_core::windows::WindowSpec;
use memwin_core::Error;
use proptest::prelude::*;

fn biolek(gamma: f64) -> MemristorModel {
    MemristorModel::new(WindowSpec::biolek(1).unwrap(), Activation::Linear { gamma }).unwrap()
}

fn symmetric_pulses() -> Waveform {
    Waveform::Rectangular(PulseTrain::new(0.05, 0.2, -0.05, 0.2, 1.0).unwrap())
}

#[test]
fn leibniz_identity_on_recorded_series() {
    let m = biolek(1.0);
    let w = Waveform::Rectangular(PulseTrain::new(0.5, 0.2, -0.3, 0.2, 1.0).unwrap());
    let c = SimConfig {
        x0: 0.15,
        periods: 6,
        steps_per_segment: 64,
        ..SimConfig::default()
    };
    let tr = integrate(&m, &w, &c).unwrap();
    let per_period = tr.index_near(1.0);
    let max_rate = 0.5;
    for k in 0..tr.averaged.len() - 1 {
        let delta = tr.times[k + 1] - tr.times[k];
        let lhs = (tr.averaged[k + 1] - tr.averaged[k]) / delta;
        let rhs = (tr.states[k + per_period] - tr.states[k]) / tr.period;
        // one-sided difference: O(delta) mismatch
        assert!(
            (lhs - rhs).abs() <= 2.0 * max_rate * delta / tr.period,
            "k={k}: {lhs} vs {rhs}"
        );
    }
}

#[test]
fn one_period_map_is_second_order_in_pulse_strength() {
    let w = Waveform::Rectangular(PulseTrain::new(0.5, 0.2, -0.25, 0.2, 1.0).unwrap());
    let error = |gamma: f64| {
        let m = biolek(gamma);
        let c = SimConfig {
            x0: 0.2,
            periods: 2,
            steps_per_segment: 32,
            ..SimConfig::default()
        };
        let tr = integrate(&m, &w, &c).unwrap();
        let n = tr.index_near(1.0);
        let displacement = tr.states[n] - tr.states[0];
        let predicted = averaged_rhs(&m, &w, tr.averaged[0]).unwrap() * tr.period;
        (displacement - predicted).abs()
    };
    let ratio = error(0.5) / error(0.25);
    assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
}

#[test]
fn converged_average_is_flat_at_attractor() {
    let tr = integrate(
        &biolek(1.0),
        &symmetric_pulses(),
        &SimConfig {
            x0: 0.5,
            periods: 700,
            ..SimConfig::default()
        },
    )
    .unwrap();
    let start = tr.index_near(650.0);
    for v in &tr.averaged[start..] {
        assert!((v - 0.5).abs() < 1e-6);
    }
}

#[test]
fn transient_is_not_periodic() {
    let tr = integrate(
        &biolek(1.0),
        &symmetric_pulses(),
        &SimConfig {
            x0: 0.1,
            periods: 2,
            ..SimConfig::default()
        },
    )
    .unwrap();
    let lc = detect_limit_cycle(&tr, 1.0, 1e-6).unwrap();
    assert!(!lc.periodic);
    assert!(lc.residual > 1e-3);
}

#[test]
fn moving_average_matches_stored_series() {
    let tr = integrate(&biolek(1.0), &symmetric_pulses(), &SimConfig::default()).unwrap();
    assert_eq!(moving_average(&tr, tr.period).unwrap(), tr.averaged);
}

#[test]
fn both_layouts_reach_the_same_average() {
    // alpha = -0.5
    let base = PulseTrain::new(0.025, 0.2, -0.05, 0.2, 1.0).unwrap();
    let expected = biolek_xa_closed_form(-0.5).unwrap();
    let mut finals = Vec::new();
    for layout in [PulseLayout::PlusThenMinus, PulseLayout::MinusThenPlus] {
        let w = Waveform::Rectangular(base.with_layout(layout));
        let tr = integrate(
            &biolek(1.0),
            &w,
            &SimConfig {
                x0: 0.9,
                periods: 1500,
                record_stride: 4,
                ..SimConfig::default()
            },
        )
        .unwrap();
        let last = *tr.averaged.last().unwrap();
        assert!(
            (last - expected).abs() < 2e-3,
            "{layout:?}: {last} vs {expected}"
        );
        finals.push(last);
    }
    assert!((finals[0] - finals[1]).abs() < 2e-3);
}

#[test]
fn smooth_drive_fan_runs_in_parallel() {
    let m = biolek(1.0);
    let w = Waveform::Sinusoid {
        i0: 0.05,
        period: 1.0,
    };
    let results: Vec<f64> = std::thread::scope(|s| {
        let handles: Vec<_> = [0.2, 0.8]
            .iter()
            .map(|&x0| {
                let (m, w) = (&m, &w);
                s.spawn(move || {
                    let c = SimConfig {
                        x0,
                        periods: 300,
                        dt: 0.01,
                        ..SimConfig::default()
                    };
                    *integrate(m, w, &c).unwrap().averaged.last().unwrap()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    for v in results {
        assert!((v - 0.5).abs() < 1e-3);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn states_stay_in_unit_interval(
        biolek_window in any::<bool>(),
        p in 1u32..6,
        x0 in 0.0f64..=1.0,
        a_plus in 0.01f64..1.5,
        a_minus in 0.01f64..1.5,
        smooth in any::<bool>(),
    ) {
        let window = if biolek_window { WindowSpec::biolek(p) } else { WindowSpec::joglekar(p) }.unwrap();
        let m = MemristorModel::new(window, Activation::Linear { gamma: 1.0 }).unwrap();
        let w = if smooth {
            Waveform::Triangle { i0: a_plus * 4.0, period: 1.0 }
        } else {
            Waveform::Rectangular(PulseTrain::new(a_plus / 0.3, 0.3, -a_minus / 0.3, 0.3, 1.0).unwrap())
        };
        // coarse steps may overshoot a boundary; that must surface as Divergence
        let coarse = SimConfig { x0, periods: 20, steps_per_segment: 16, dt: 0.01, ..SimConfig::default() };
        match integrate(&m, &w, &coarse) {
            Ok(tr) => prop_assert!(tr.states.iter().all(|x| (0.0..=1.0).contains(x))),
            Err(e) => prop_assert!(matches!(e, Error::Divergence { .. }), "{e}"),
        }
        let fine = SimConfig { steps_per_segment: 512, dt: 2e-4, ..coarse };
        let tr = integrate(&m, &w, &fine).unwrap();
        prop_assert!(tr.states.iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert!(tr.times.windows(2).all(|t| t[1] > t[0]));
    }
}
