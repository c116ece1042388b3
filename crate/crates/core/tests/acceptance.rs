//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! exits non-zero if any of them fails.

mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use esdkit::dynamics::{
    bandwidth_threshold, birth_time_numeric, death_time_numeric, detection_probability, esb_birth_time, esd_death_time,
    four_mode_layout, jc_esd_window, jc_evolve_numeric, jc_state, long_time, mode_edge_grid, partition_scan,
    scan_transition, spectrum, JcParams, WwParams, WwPropagator,
};
use esdkit::geoment::{hierarchy, relative_ge, GeOptions};
use esdkit::measures::{
    concurrence_mixed, concurrence_pure, discord_pure_bipartition, discord_two_qubit, invariant_sigma, DiscordOptions,
    Model, ATOMS,
};
use esdkit::qcore::{binary_entropy, Partition};
use esdkit::C64;

use common::{random_qubits, rng};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn cut(s: &str) -> Partition {
    Partition::parse(s, &four_mode_layout()).unwrap()
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn max_dev(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, f64::max)
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn invariant_jc() -> Outcome {
    let start = Instant::now();
    let model = Model::JaynesCummings(JcParams::default());
    let mut worst: f64 = 0.0;
    for theta in grid(0.0, FRAC_PI_2, 9) {
        for jt in grid(0.0, PI, 65) {
            let s = invariant_sigma(theta, jt, &model).unwrap();
            worst = worst.max((s - (2.0 * theta).sin()).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst < 1e-9 && secs < 1.0,
        format!("max |Σ − sin 2θ| = {worst:.2e}, {secs:.3} s"),
    )
}

fn invariant_ww() -> Outcome {
    let start = Instant::now();
    let p = WwParams::default();
    let prop = WwPropagator::from_params(&p).unwrap();
    let model = Model::WeisskopfWigner(&prop);
    let mut worst: f64 = 0.0;
    for theta in grid(0.0, FRAC_PI_2, 9) {
        for gt in grid(0.0, 5.0, 65) {
            let s = invariant_sigma(theta, gt / p.gamma, &model).unwrap();
            worst = worst.max((s - (2.0 * theta).sin()).abs());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    (
        worst < 1e-3 && secs < 60.0,
        format!("max |Σ − sin 2θ| = {worst:.2e}, {secs:.2} s"),
    )
}

fn esd_window() -> Outcome {
    let theta = 0.4 * PI;
    let (a, b) = jc_esd_window(theta).unwrap().unwrap();
    let start = (1.0 / theta.tan()).sqrt().asin();
    let end = PI - start;
    let ok = (a - start).abs() < 1e-4 && (b - end).abs() < 1e-4;
    (ok, format!("window [{a:.6}, {b:.6}] vs [{start:.6}, {end:.6}]"))
}

fn sudden_times() -> Outcome {
    let p = WwParams {
        modes: 4000,
        half_bandwidth: 160.0,
        ..Default::default()
    };
    let prop = WwPropagator::from_params(&p).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, theta) in [("2π/5", 0.4 * PI), ("3π/8", 0.375 * PI), ("0.3π", 0.3 * PI)] {
        let td = esd_death_time(theta, p.gamma).unwrap().time().unwrap();
        let tb = esb_birth_time(theta, p.gamma).unwrap().time().unwrap();
        let tdn = death_time_numeric(theta, &prop, p.gamma)
            .unwrap()
            .time()
            .unwrap_or(f64::INFINITY);
        let tbn = birth_time_numeric(theta, &prop, p.gamma)
            .unwrap()
            .time()
            .unwrap_or(f64::INFINITY);
        let (ed, eb) = (tdn / td - 1.0, tbn / tb - 1.0);
        ok &= ed.abs() < 0.02 && eb.abs() < 0.02;
        parts.push(format!("{name}: t_d {:+.2}%, t_b {:+.2}%", 100.0 * ed, 100.0 * eb));
    }
    (ok, format!("N=4000, W=160Γ; {}", parts.join("; ")))
}

fn discord_pure_cuts() -> Outcome {
    let a1p1 = cut("A1P1|A2P2");
    let mut worst: f64 = 0.0;
    let mut peak = (0.0, 0.0);
    for theta in grid(0.0, FRAC_PI_2, 33) {
        let want = binary_entropy(theta.cos().powi(2));
        for jt in grid(0.0, PI, 33) {
            let d = discord_pure_bipartition(&jc_state(theta, jt).unwrap(), &a1p1).unwrap();
            worst = worst.max((d - want).abs());
            if d > peak.1 {
                peak = (theta, d);
            }
        }
    }
    let two = discord_pure_bipartition(&jc_state(FRAC_PI_2, FRAC_PI_4).unwrap(), &cut("A1A2|P1P2")).unwrap();
    let ok =
        worst < 1e-10 && (peak.0 - FRAC_PI_4).abs() < 1e-12 && (peak.1 - 1.0).abs() < 1e-10 && (two - 2.0).abs() < 1e-8;
    (
        ok,
        format!(
            "max |D − H₂| = {worst:.2e}; peak {:.10} at θ/π = {:.4}; D(A1A2|P1P2) = {two:.10}",
            peak.1,
            peak.0 / PI
        ),
    )
}

fn discord_without_entanglement() -> Outcome {
    let rho = jc_state(0.4 * PI, 1.2).unwrap().reduced_state(&ATOMS).unwrap();
    let c = concurrence_mixed(&rho).unwrap();
    let opts = DiscordOptions::default();
    let d = discord_two_qubit(&rho, &opts).unwrap();
    let reference = 0.005658863125414193;
    let ok = c == 0.0 && d.value > 10.0 * opts.tolerance && (d.value - reference).abs() < 1e-8;
    (ok, format!("C = {c}, D = {:.12} (reference {reference:.12})", d.value))
}

fn geometric_hierarchy() -> Outcome {
    let opts = GeOptions::default();
    let mut r = rng(20240607);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let h = hierarchy(&random_qubits(4, &mut r), &opts).unwrap();
        for w in h.levels.windows(2) {
            worst = worst.max(w[0].e_age - w[1].e_age);
        }
    }
    let full = Partition::singletons(4).unwrap();
    let want = (0.2 * PI).sin().powi(2);
    let age4 = max_dev(grid(0.0, PI, 17).into_iter().map(|jt| {
        (relative_ge(&jc_state(0.2 * PI, jt).unwrap(), &full, &opts)
            .unwrap()
            .energy
            - want)
            .abs()
    }));
    let a1p1 = cut("A1P1|A2P2");
    let rge: Vec<f64> = grid(0.0, PI, 17)
        .into_iter()
        .map(|jt| {
            relative_ge(&jc_state(0.4 * PI, jt).unwrap(), &a1p1, &opts)
                .unwrap()
                .energy
        })
        .collect();
    let spread = rge.iter().copied().fold(f64::MIN, f64::max) - rge.iter().copied().fold(f64::MAX, f64::min);
    let ok = worst <= 1e-6 && age4 < 1e-6 && spread < 1e-6;
    (
        ok,
        format!(
            "worst ladder violation {:.2e} over 200 states; max |E_AGE4 − sin²(π/5)| = {age4:.2e}; E_RGE(A1P1|A2P2) spread {spread:.2e}",
            worst.max(0.0)
        ),
    )
}

fn spectral() -> Outcome {
    let gamma = 1.0;
    let quad = max_dev([0.1, 1.0, 10.0].map(|x| {
        let dn = x * gamma;
        let q = simpson(|nu| spectrum(nu, gamma, 0.0).unwrap(), -dn, dn, 20_000);
        (q - detection_probability(dn, gamma).unwrap()).abs()
    }));

    let p = WwParams::default();
    let prop = WwPropagator::from_params(&p).unwrap();
    let t = long_time(&p, &prop).unwrap();
    let sol = prop.solve(&[t]).unwrap();
    let edges = mode_edge_grid(&sol.detunings, 10.0 * p.linewidth());
    let step = edges[1] - edges[0];
    let mut ok = quad < 1e-6;
    let mut parts = Vec::new();
    for (name, theta) in [("3π/8", 0.375 * PI), ("2π/5", 0.4 * PI)] {
        let rows = partition_scan(theta, &sol, t, &edges).unwrap();
        let at = scan_transition(&rows).unwrap_or(f64::INFINITY);
        let want = bandwidth_threshold(theta).unwrap() * p.linewidth();
        ok &= (at - want).abs() <= step;
        parts.push(format!(
            "{name}: {:.4} vs {:.4}",
            at / p.linewidth(),
            want / p.linewidth()
        ));
    }
    (
        ok,
        format!(
            "quadrature error {quad:.2e}; transitions (linewidth units, step {:.2}) {}",
            step / p.linewidth(),
            parts.join(", ")
        ),
    )
}

fn oracle_equivalences() -> Outcome {
    let mut r = rng(9);
    let conc = max_dev((0..1000).map(|_| {
        let psi = random_qubits(2, &mut r);
        (concurrence_pure(&psi).unwrap() - concurrence_mixed(&psi.density()).unwrap()).abs()
    }));

    let full = Partition::singletons(3).unwrap();
    let opts = GeOptions::default();
    let ge = max_dev((0..10).map(|_| {
        let psi = random_qubits(3, &mut r);
        let a = psi.amplitudes();
        let mut best: f64 = 0.0;
        for th in grid(0.0, PI, 201) {
            for ph in grid(0.0, 2.0 * PI, 401) {
                let q = [C64::new((th / 2.0).cos(), 0.0), C64::from_polar((th / 2.0).sin(), ph)];
                let m = nalgebra::Matrix2::from_fn(|i, j| q[0].conj() * a[2 * i + j] + q[1].conj() * a[4 + 2 * i + j]);
                let s = m.singular_values().max();
                best = best.max(s * s);
            }
        }
        (relative_ge(&psi, &full, &opts).unwrap().lambda_sq - best).abs()
    }));

    let p = JcParams::default();
    let jc = max_dev(grid(0.0, FRAC_PI_2, 9).into_iter().flat_map(|theta| {
        grid(0.0, PI, 33).into_iter().map(move |t| {
            let a = jc_evolve_numeric(theta, t, &p).unwrap();
            let b = jc_state(theta, p.coupling() * t).unwrap();
            a.amplitudes()
                .iter()
                .zip(b.amplitudes())
                .map(|(x, y)| (x - y).norm())
                .fold(0.0, f64::max)
        })
    }));
    let ok = conc < 1e-10 && ge < 1e-3 && jc < 1e-10;
    (
        ok,
        format!("concurrence {conc:.2e}; 3-qubit GE vs grid {ge:.2e}; JC closed vs numeric {jc:.2e}"),
    )
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir();
    let mut outputs = Vec::new();
    for workers in ["1", "8"] {
        let mut bytes = Vec::new();
        for args in [
            &["hierarchy", "--theta", "pi/5,2pi/5", "--steps", "8", "--seed", "42"][..],
            &["partition-scan", "--seed", "42"][..],
            &["discord", "--steps", "8", "--seed", "42"][..],
        ] {
            let out = dir.join(format!("esdkit-acceptance-{}-{workers}.csv", std::process::id()));
            let status = Command::new(env!("CARGO_BIN_EXE_esdkit"))
                .args(args)
                .args(["--workers", workers, "--out", out.to_str().unwrap()])
                .status()
                .unwrap();
            assert!(status.success());
            bytes.extend(std::fs::read(&out).unwrap());
            let _ = std::fs::remove_file(&out);
        }
        outputs.push(bytes);
    }
    let same = outputs[0] == outputs[1];
    (same, format!("{} bytes per run, identical = {same}", outputs[0].len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("invariant (cavity)", invariant_jc),
        ("invariant (bath)", invariant_ww),
        ("sudden-death window (cavity)", esd_window),
        ("death and birth times (bath)", sudden_times),
        ("discord of pure cuts", discord_pure_cuts),
        ("discord without entanglement", discord_without_entanglement),
        ("geometric hierarchy", geometric_hierarchy),
        ("spectral partitioning", spectral),
        ("oracle equivalences", oracle_equivalences),
        ("determinism across workers", determinism),
    ];
    let stderr = std::io::stderr();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        });
        failed += usize::from(!ok);
        let mut w = stderr.lock();
        let _ = writeln!(
            w,
            "criterion {:>2} {}: {name}: {detail}",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    let _ = writeln!(
        stderr.lock(),
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
