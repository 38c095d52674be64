//! Acceptance criteria, one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the summary is always printed; the
//! process exits non-zero if any criterion fails.

use std::process::ExitCode;

use memwin_core::attractor::{
    averaged_rhs, biolek_xa_closed_form, find_fixed_point, linspace, potential,
    section_slope_at_half, sweep_section, sweep_xa, FixedPointKind, PulseStrengths,
    NEUTRAL_REL_TOL,
};
use memwin_core::device::{Activation, MemristorModel};
use memwin_core::drive::{PulseLayout, PulseTrain, Waveform};
use memwin_core::sim::{detect_limit_cycle, integrate, SimConfig, Trajectory};
use memwin_core::windows::{classify_window, CustomWindow, WindowClassKind, WindowSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Check {
    name: String,
    pass: bool,
    detail: String,
}

struct Criterion {
    id: u32,
    title: &'static str,
    checks: Vec<Check>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion {
            id,
            title,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        });
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn linear(window: WindowSpec, gamma: f64) -> MemristorModel {
    MemristorModel::new(window, Activation::Linear { gamma }).unwrap()
}

/// Symmetric pulses, `τ± = 0.2T`, `γ I+ τ+ = 0.01` for `gamma = 1`.
fn symmetric_pulses() -> Waveform {
    Waveform::Rectangular(PulseTrain::new(0.05, 0.2, -0.05, 0.2, 1.0).unwrap())
}

const FAN: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

fn run_fan(
    m: &MemristorModel,
    w: &Waveform,
    x0s: &[f64],
    periods: usize,
    dt: f64,
) -> Vec<Trajectory> {
    std::thread::scope(|s| {
        let handles: Vec<_> = x0s
            .iter()
            .map(|&x0| {
                s.spawn(move || {
                    let c = SimConfig {
                        x0,
                        periods,
                        dt,
                        ..SimConfig::default()
                    };
                    integrate(m, w, &c).unwrap()
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    })
}

fn averaged_at(tr: &Trajectory, t: f64) -> f64 {
    tr.averaged[tr.index_near(t)]
}

fn criterion_1() -> Criterion {
    let mut c = Criterion::new(
        1,
        "Biolek p=1 symmetric pulses: averaged state converges to 0.5",
    );
    let m = linear(WindowSpec::biolek(1).unwrap(), 1.0);
    let w = symmetric_pulses();
    for (x0, tr) in FAN.iter().zip(run_fan(&m, &w, &FAN, 601, 1e-3)) {
        let dev = (averaged_at(&tr, 600.0) - 0.5).abs();
        c.check(
            format!("x0={x0}: |xbar(600T) - 0.5| < 1e-3"),
            dev < 1e-3,
            format!("{dev:.3e}"),
        );
        let start = tr.index_near(10.0);
        let worst = tr.averaged[start..]
            .windows(2)
            .map(|p| (p[1] - 0.5).abs() - (p[0] - 0.5).abs())
            .fold(f64::NEG_INFINITY, f64::max);
        c.check(
            format!("x0={x0}: |xbar - 0.5| non-increasing after 10T"),
            worst <= 0.0,
            format!("largest step {worst:.3e}"),
        );
    }
    c
}

fn criterion_2() -> Criterion {
    let mut c = Criterion::new(2, "Joglekar p=1 balanced pulses: neutral equilibrium");
    let m = linear(WindowSpec::joglekar(1).unwrap(), 1.0);
    let w = symmetric_pulses();
    let threshold = NEUTRAL_REL_TOL * 0.01 / w.period();
    let max_rhs = linspace(0.0, 1.0, 1025)
        .into_iter()
        .map(|x| averaged_rhs(&m, &w, x).unwrap().abs())
        .fold(0.0, f64::max);
    c.check(
        "averaged rate identically zero",
        max_rhs < threshold,
        format!("max {max_rhs:.3e} vs {threshold:.1e}"),
    );
    let report = find_fixed_point(&m, &w, 1e-12).unwrap();
    c.check(
        "classified neutral",
        report.kind == FixedPointKind::Neutral,
        format!("{:?}", report.kind),
    );

    let drift = |gamma: f64| -> Vec<f64> {
        let m = linear(WindowSpec::joglekar(1).unwrap(), gamma);
        run_fan(&m, &w, &FAN, 101, 1e-3)
            .iter()
            .map(|tr| (averaged_at(tr, 100.0) - tr.averaged[0]).abs())
            .collect()
    };
    let full = drift(1.0);
    let half = drift(0.5);
    for ((x0, d1), d2) in FAN.iter().zip(&full).zip(&half) {
        c.check(
            format!("x0={x0}: drift < 5e-2"),
            *d1 < 5e-2,
            format!("{d1:.3e}"),
        );
        let ratio = d1 / d2;
        c.check(
            format!("x0={x0}: drift ratio for halved gamma in [3.5, 4.5]"),
            (3.5..=4.5).contains(&ratio),
            format!("{d1:.3e} / {d2:.3e} = {ratio:.3}"),
        );
    }
    c
}

/// Independent bisection on `a+ (1 - x^2p) + a- (1 - (x-1)^2p)`.
fn oracle_biolek_root(p: i32, a_plus: f64, a_minus: f64) -> f64 {
    let f = |x: f64| a_plus * (1.0 - x.powi(2 * p)) + a_minus * (1.0 - (x - 1.0).powi(2 * p));
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_3() -> Criterion {
    let mut c = Criterion::new(3, "Biolek p=1 closed form agrees with bisection");
    let mut worst: f64 = 0.0;
    for k in 0..100 {
        let alpha = -(10f64.powf(-2.0 + 4.0 * k as f64 / 99.0));
        let closed = biolek_xa_closed_form(alpha).unwrap();
        // alpha = a+ / a- with a- = -1
        let oracle = oracle_biolek_root(1, -alpha, -1.0);
        worst = worst.max((closed - oracle).abs());
    }
    c.check(
        "100 log-spaced alpha in [-100, -0.01] within 1e-9",
        worst < 1e-9,
        format!("max {worst:.3e}"),
    );
    let at_minus_one = biolek_xa_closed_form(-1.0).unwrap();
    c.check(
        "alpha = -1 gives exactly 0.5",
        at_minus_one == 0.5,
        format!("{at_minus_one:?}"),
    );
    let at_half = biolek_xa_closed_form(-0.5).unwrap();
    let err = (at_half - (2.0 - 3f64.sqrt())).abs();
    c.check(
        "alpha = -0.5 gives 2 - sqrt(3) within 1e-12",
        err < 1e-12,
        format!("{err:.3e}"),
    );
    c
}

fn criterion_4() -> Criterion {
    let mut c = Criterion::new(4, "Biolek p=1 attractor map reflection symmetry");
    let n = 51;
    let axis: Vec<f64> = (1..=n).map(|k| 10.0 * k as f64 / n as f64).collect();
    let neg: Vec<f64> = axis.iter().map(|a| -a).collect();
    let cells = sweep_xa(&axis, &neg, 1, 1e-13).unwrap();
    let at = |i: usize, j: usize| cells[i * n + j].x_a.unwrap();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            // (A, B) = (axis[i], -axis[j]) reflects to (-B, -A) = (axis[j], -axis[i])
            worst = worst.max((at(i, j) - (1.0 - at(j, i))).abs());
        }
    }
    c.check(
        "51x51 grid within 1e-9",
        worst < 1e-9,
        format!("max {worst:.3e}"),
    );
    c
}

fn criterion_5() -> Criterion {
    let mut c = Criterion::new(5, "Biolek section a- = a+ - 10: steepness grows with p");
    let a_plus: Vec<f64> = (1..1000).map(|k| 10.0 * k as f64 / 1000.0).collect();
    let mut slopes = Vec::new();
    for p in [1u32, 2, 5, 10] {
        let (_, slope) = section_slope_at_half(p, 10.0).unwrap();
        slopes.push(slope);
        // symmetric point x = 1/2, a+ = 5: dx/da+ = (4^p - 1) / (20 p)
        let oracle = (4f64.powi(p as i32) - 1.0) / (20.0 * p as f64);
        c.check(
            format!("p={p}: slope matches (4^p - 1)/(20p)"),
            (slope - oracle).abs() <= 1e-6 * oracle,
            format!("{slope:.6} vs {oracle:.6}"),
        );
        let cells = sweep_section(&a_plus, 10.0, p, 1e-13).unwrap();
        let xs: Vec<f64> = cells.iter().map(|cell| cell.x_a.unwrap()).collect();
        let lo = xs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        c.check(
            format!("p={p}: spans below 0.05 to above 0.95"),
            lo < 0.05 && hi > 0.95,
            format!("[{lo:.4}, {hi:.4}]"),
        );
        let monotone = xs.windows(2).all(|w| w[1] >= w[0]);
        c.check(format!("p={p}: monotone in a+"), monotone, "");
    }
    let increasing = slopes.windows(2).all(|w| w[1] > w[0]);
    c.check(
        "slope at the 0.5 crossing strictly increases over p = 1, 2, 5, 10",
        increasing,
        format!("{slopes:.4?}"),
    );
    c
}

fn class1_catalog() -> Vec<WindowSpec> {
    let mut out: Vec<WindowSpec> = [1, 2, 3, 5, 10]
        .into_iter()
        .map(|p| WindowSpec::biolek(p).unwrap())
        .collect();
    out.push(WindowSpec::custom(CustomWindow::new("linear", |x, i| {
        if i < 0.0 {
            x
        } else {
            1.0 - x
        }
    })));
    out.push(WindowSpec::custom(CustomWindow::new("cosine", |x, i| {
        let c = (std::f64::consts::PI * x).cos();
        if i < 0.0 {
            0.5 * (1.0 - c)
        } else {
            0.5 * (1.0 + c)
        }
    })));
    out
}

fn class2_catalog() -> Vec<WindowSpec> {
    let mut out: Vec<WindowSpec> = [1, 2, 3, 5, 10]
        .into_iter()
        .map(|p| WindowSpec::joglekar(p).unwrap())
        .collect();
    out.push(WindowSpec::custom(CustomWindow::new("sine", |x, _| {
        (std::f64::consts::PI * x).sin()
    })));
    out
}

fn random_activation(rng: &mut ChaCha8Rng) -> Activation {
    let gamma = rng.gen_range(0.1..5.0);
    match rng.gen_range(0..3) {
        0 => Activation::Linear { gamma },
        1 => Activation::Threshold {
            gamma,
            i_t: rng.gen_range(0.0..0.5),
        },
        _ => Activation::Quadratic { gamma },
    }
}

/// Current magnitude that makes `|h(I)| = target`.
fn current_for(act: Activation, target: f64) -> f64 {
    match act {
        Activation::Linear { gamma } => target / gamma,
        Activation::Threshold { gamma, i_t } => i_t + target / gamma,
        Activation::Quadratic { gamma } => (target / gamma).sqrt(),
    }
}

fn random_train(rng: &mut ChaCha8Rng, act: Activation, balanced: bool) -> PulseTrain {
    let tau_plus = rng.gen_range(0.05..0.45);
    let tau_minus = rng.gen_range(0.05..0.45);
    let a_plus = rng.gen_range(0.001..0.5);
    let a_minus = if balanced {
        a_plus
    } else {
        // keep well away from balance
        let r = rng.gen_range(0.1..0.9);
        if rng.gen_bool(0.5) {
            a_plus * r
        } else {
            a_plus / r
        }
    };
    let layout = if rng.gen_bool(0.5) {
        PulseLayout::PlusThenMinus
    } else {
        PulseLayout::MinusThenPlus
    };
    PulseTrain::new(
        current_for(act, a_plus / tau_plus),
        tau_plus,
        -current_for(act, a_minus / tau_minus),
        tau_minus,
        1.0,
    )
    .unwrap()
    .with_layout(layout)
}

fn criterion_6() -> Criterion {
    let mut c = Criterion::new(
        6,
        "Attracting and neutral window classes over random drives",
    );
    let class1 = class1_catalog();
    let class2 = class2_catalog();
    for w in &class1 {
        let got = classify_window(w, 1001, 1e-9).unwrap().class;
        c.check(
            format!("{w} classifies as class1"),
            got == WindowClassKind::Class1,
            format!("{got:?}"),
        );
    }
    for w in &class2 {
        let got = classify_window(w, 1001, 1e-9).unwrap().class;
        c.check(
            format!("{w} classifies as class2"),
            got == WindowClassKind::Class2,
            format!("{got:?}"),
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0x6d656d77);
    let mut class1_failures = Vec::new();
    let mut class2_failures = Vec::new();
    let (mut neutral_draws, mut none_draws) = (0, 0);
    for draw in 0..50 {
        let act = random_activation(&mut rng);

        let window = class1[rng.gen_range(0..class1.len())].clone();
        let train = random_train(&mut rng, act, false);
        let m = MemristorModel::new(window.clone(), act).unwrap();
        let r = find_fixed_point(&m, &Waveform::Rectangular(train), 1e-12).unwrap();
        let ok = r.kind == FixedPointKind::Stable
            && r.roots.len() == 1
            && r.stability_value.is_some_and(|s| s < 0.0);
        if !ok {
            class1_failures.push(format!(
                "draw {draw}: {window} {act:?} -> {:?}, {} roots",
                r.kind,
                r.roots.len()
            ));
        }

        let window = class2[rng.gen_range(0..class2.len())].clone();
        let balanced = rng.gen_bool(0.5);
        let train = random_train(&mut rng, act, balanced);
        let m = MemristorModel::new(window.clone(), act).unwrap();
        let strengths = PulseStrengths::from_drive(&m, &train).unwrap();
        let expect = if strengths.is_balanced(1e-12) {
            neutral_draws += 1;
            FixedPointKind::Neutral
        } else {
            none_draws += 1;
            FixedPointKind::None
        };
        let r = find_fixed_point(&m, &Waveform::Rectangular(train), 1e-12).unwrap();
        if r.kind != expect || r.roots.iter().any(|p| p.is_stable()) {
            class2_failures.push(format!(
                "draw {draw}: {window} {act:?} -> {:?}, expected {expect:?}",
                r.kind
            ));
        }
    }
    c.check(
        "class1: exactly one stable fixed point in 50 draws",
        class1_failures.is_empty(),
        class1_failures.join("; "),
    );
    c.check(
        "class2: never stable; neutral iff balanced to 1e-12",
        class2_failures.is_empty() && neutral_draws > 0 && none_draws > 0,
        format!(
            "{neutral_draws} neutral, {none_draws} none; {}",
            class2_failures.join("; ")
        ),
    );
    c
}

fn criterion_7() -> Criterion {
    let mut c = Criterion::new(7, "Biolek p=1 under rectangular, sine and triangle drives");
    let m = linear(WindowSpec::biolek(1).unwrap(), 1.0);
    // gamma I0 T = 0.05
    let drives = [
        ("rect", symmetric_pulses()),
        (
            "sin",
            Waveform::Sinusoid {
                i0: 0.05,
                period: 1.0,
            },
        ),
        (
            "tri",
            Waveform::Triangle {
                i0: 0.05,
                period: 1.0,
            },
        ),
    ];
    let x0s = [0.1, 0.5, 0.9];
    for (name, w) in &drives {
        for (x0, tr) in x0s.iter().zip(run_fan(&m, w, &x0s, 601, 1e-3)) {
            let dev = (averaged_at(&tr, 600.0) - 0.5).abs();
            c.check(
                format!("{name} x0={x0}: |xbar - 0.5| < 5e-3"),
                dev < 5e-3,
                format!("{dev:.3e}"),
            );
            let lc = detect_limit_cycle(&tr, w.period(), 1e-6).unwrap();
            c.check(
                format!("{name} x0={x0}: periodic, residual < 1e-6"),
                lc.periodic && lc.residual < 1e-6,
                format!("{:.3e}", lc.residual),
            );
        }
    }
    c
}

/// Largest deviation over one positive pulse of length 0.5 with `h(I) = k`.
fn segment_error(biolek: bool, strength: f64, x0: f64, steps: usize) -> f64 {
    let window = if biolek {
        WindowSpec::biolek(1)
    } else {
        WindowSpec::joglekar(1)
    };
    let m = linear(window.unwrap(), 1.0);
    let k = strength / 0.5;
    let w = Waveform::Rectangular(PulseTrain::new(k, 0.5, -k, 0.25, 1.0).unwrap());
    let cfg = SimConfig {
        x0,
        periods: 1,
        steps_per_segment: steps,
        ..SimConfig::default()
    };
    let tr = integrate(&m, &w, &cfg).unwrap();
    (0..=steps)
        .map(|j| {
            let s = tr.times[j];
            let exact = if biolek {
                // x' = k (1 - x^2)
                (k * s + x0.atanh()).tanh()
            } else {
                // u = 2x - 1, u' = 2k (1 - u^2)
                0.5 * (1.0 + (2.0 * k * s + (2.0 * x0 - 1.0).atanh()).tanh())
            };
            (tr.states[j] - exact).abs()
        })
        .fold(0.0, f64::max)
}

fn criterion_8() -> Criterion {
    let mut c = Criterion::new(
        8,
        "RK4 segments match tanh solutions with fourth-order convergence",
    );
    for (name, biolek) in [("biolek", true), ("joglekar", false)] {
        for x0 in [0.1, 0.6] {
            let e16 = segment_error(biolek, 0.25, x0, 16);
            let e32 = segment_error(biolek, 0.25, x0, 32);
            c.check(
                format!("{name} x0={x0}: error < 1e-8 at 16 sub-steps"),
                e16 < 1e-8,
                format!("{e16:.3e}"),
            );
            let ratio = e16 / e32;
            c.check(
                format!("{name} x0={x0}: error ratio in [12, 20]"),
                (12.0..=20.0).contains(&ratio),
                format!("{ratio:.2}"),
            );
        }
    }
    c
}

fn criterion_9() -> Criterion {
    let mut c = Criterion::new(
        9,
        "Potential: quadrature vs closed form, minima, monotonicity",
    );
    let grid = 10_001;
    let cell = 1.0 / (grid - 1) as f64;
    let trains = [
        PulseTrain::new(0.05, 0.2, -0.05, 0.2, 1.0).unwrap(),
        PulseTrain::new(0.05, 0.2, -0.1, 0.2, 1.0).unwrap(),
        PulseTrain::new(1.5, 0.2, -0.25, 0.4, 1.0).unwrap(),
    ];
    for train in trains {
        let w = Waveform::Rectangular(train);
        for p in [1, 2, 5] {
            let m = linear(WindowSpec::biolek(p).unwrap(), 1.0);
            let u = potential(&m, &w, grid).unwrap();
            let closed = u.closed_form.as_ref().unwrap();
            let err = u
                .numeric
                .iter()
                .zip(closed)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let label = format!(
                "biolek p={p} a+={:.3} a-={:.3}",
                train.i_plus * train.tau_plus,
                train.i_minus * train.tau_minus
            );
            c.check(
                format!("{label}: |U_num - U_closed| < 1e-8"),
                err < 1e-8,
                format!("{err:.3e}"),
            );
            let xa = find_fixed_point(&m, &w, 1e-12).unwrap().x_a.unwrap();
            let gap = (u.argmin() - xa).abs();
            c.check(
                format!("{label}: argmin within one cell of x_a"),
                gap <= cell,
                format!("{gap:.3e}"),
            );
        }
    }
    let unbalanced = [
        PulseTrain::new(0.06, 0.2, -0.05, 0.2, 1.0).unwrap(),
        PulseTrain::new(0.05, 0.2, -0.5, 0.3, 1.0).unwrap(),
    ];
    for train in unbalanced {
        let w = Waveform::Rectangular(train);
        for p in [1, 3] {
            let m = linear(WindowSpec::joglekar(p).unwrap(), 1.0);
            let u = potential(&m, &w, grid).unwrap();
            let closed = u.closed_form.as_ref().unwrap();
            let err = u
                .numeric
                .iter()
                .zip(closed)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let label = format!("joglekar p={p} charge={:.3}", train.charge());
            c.check(
                format!("{label}: |U_num - U_closed| < 1e-8"),
                err < 1e-8,
                format!("{err:.3e}"),
            );
            let diffs: Vec<f64> = u.numeric.windows(2).map(|d| d[1] - d[0]).collect();
            let monotone = diffs.iter().all(|d| *d > 0.0) || diffs.iter().all(|d| *d < 0.0);
            c.check(format!("{label}: U monotone"), monotone, "");
        }
    }
    c
}

/// Midpoint-rule averaged rate with `n` samples, then bisection.
fn oracle_attractor(act: Activation, w: &Waveform, p: i32) -> f64 {
    let n = 200_000;
    let period = w.period();
    let rate = |x: f64| -> f64 {
        (0..n)
            .map(|k| {
                let t = (k as f64 + 0.5) * period / n as f64;
                let i = w.sample(t);
                let g = if i < 0.0 {
                    1.0 - (x - 1.0).powi(2 * p)
                } else {
                    1.0 - x.powi(2 * p)
                };
                act.rate(i) * g
            })
            .sum::<f64>()
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if rate(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn criterion_10() -> Criterion {
    let mut c = Criterion::new(
        10,
        "Universality of the attractor and drive-shape dependence",
    );
    for (alpha, p) in [(-0.3, 1), (-1.7, 1), (-5.0, 3), (-0.8, 2)] {
        // linear: a+ = 0.2 * 1, a- = a+ / alpha
        let lin = MemristorModel::new(
            WindowSpec::biolek(p).unwrap(),
            Activation::Linear { gamma: 1.0 },
        )
        .unwrap();
        let lin_drive = PulseTrain::new(1.0, 0.2, 0.2 / alpha / 0.3, 0.3, 1.0).unwrap();
        // threshold: h(I) = 2 (|I| - 0.4); a+ = 0.05 * 2 * 1.1, a- = a+ / alpha
        let thr = MemristorModel::new(
            WindowSpec::biolek(p).unwrap(),
            Activation::Threshold {
                gamma: 2.0,
                i_t: 0.4,
            },
        )
        .unwrap();
        let a_plus = 0.05 * 2.0 * 1.1;
        let thr_drive =
            PulseTrain::new(1.5, 0.05, -(0.4 + a_plus / (-alpha) / 2.0 / 0.1), 0.1, 1.0).unwrap();
        let x_lin = find_fixed_point(&lin, &Waveform::Rectangular(lin_drive), 1e-12)
            .unwrap()
            .x_a
            .unwrap();
        let x_thr = find_fixed_point(&thr, &Waveform::Rectangular(thr_drive), 1e-12)
            .unwrap()
            .x_a
            .unwrap();
        let gap = (x_lin - x_thr).abs();
        c.check(
            format!("alpha={alpha} p={p}: linear vs threshold within 1e-9"),
            gap < 1e-9,
            format!("{gap:.3e}"),
        );
    }

    // charge-balanced but asymmetric pulses: I+ tau+ = -I- tau-
    let rect = Waveform::Rectangular(PulseTrain::new(1.0, 0.2, -0.5, 0.4, 1.0).unwrap());
    let sine = Waveform::Sinusoid {
        i0: 0.7,
        period: 1.0,
    };
    let window = || WindowSpec::biolek(1).unwrap();

    let lin = MemristorModel::new(window(), Activation::Linear { gamma: 0.05 }).unwrap();
    let lin_rect = find_fixed_point(&lin, &rect, 1e-12).unwrap().x_a.unwrap();
    let lin_sine = find_fixed_point(&lin, &sine, 1e-12).unwrap().x_a.unwrap();
    let lin_gap = (lin_rect - lin_sine).abs();
    c.check(
        "linear: rectangular and sine attractors coincide",
        lin_gap < 1e-9,
        format!("{lin_gap:.3e}"),
    );

    let quad_act = Activation::Quadratic { gamma: 0.05 };
    let quad = MemristorModel::new(window(), quad_act).unwrap();
    let q_rect = find_fixed_point(&quad, &rect, 1e-12).unwrap().x_a.unwrap();
    let q_sine = find_fixed_point(&quad, &sine, 1e-12).unwrap().x_a.unwrap();
    let gap = (q_rect - q_sine).abs();
    // Frozen from the quadrature oracle: rect alpha = -2 gives sqrt(3) - 1, sine gives 1/2.
    const EXPECTED_GAP: f64 = 0.232_050_807_568_877_3;
    let oracle_gap =
        (oracle_attractor(quad_act, &rect, 1) - oracle_attractor(quad_act, &sine, 1)).abs();
    c.check(
        "quadrature oracle reproduces the frozen gap",
        (oracle_gap - EXPECTED_GAP).abs() < 1e-6,
        format!("{oracle_gap:.10}"),
    );
    c.check(
        "quadratic: rectangular vs sine gap > 1e-3 and equal to the oracle",
        gap > 1e-3 && (gap - EXPECTED_GAP).abs() < 1e-6,
        format!("{gap:.10}"),
    );
    c
}

fn main() -> ExitCode {
    let criteria: [fn() -> Criterion; 10] = [
        criterion_1,
        criterion_2,
        criterion_3,
        criterion_4,
        criterion_5,
        criterion_6,
        criterion_7,
        criterion_8,
        criterion_9,
        criterion_10,
    ];
    let results: Vec<Criterion> = std::thread::scope(|s| {
        let handles: Vec<_> = criteria.iter().map(|f| s.spawn(f)).collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });

    let mut failed = 0;
    for c in &results {
        for check in c.checks.iter().filter(|k| !k.pass) {
            println!("    [{}] failed: {} ({})", c.id, check.name, check.detail);
        }
    }
    for c in &results {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        if !c.passed() {
            failed += 1;
        }
        let n_ok = c.checks.iter().filter(|k| k.pass).count();
        println!(
            "{status} criterion {:>2}: {} ({n_ok}/{} checks)",
            c.id,
            c.title,
            c.checks.len()
        );
    }
    if failed == 0 {
        println!("acceptance: all {} criteria passed", results.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of {} criteria failed", results.len());
        ExitCode::FAILURE
    }
}
