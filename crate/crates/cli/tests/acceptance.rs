//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use qwalk_core::apparatus::{max_steps, rayleigh_range};
use qwalk_core::distribution::fit_loglog_exponent;
use qwalk_core::open::{open_variance_scan, run_open};
use qwalk_core::pulse::{
    calibrate_kick, cat_expansion, cat_state, design_pulse, momentum_kick, rf_evolve, rf_evolve_rk4, Direction,
    PulseKind,
};
use qwalk_core::walk::{coin_symmetric, coin_zero, variance_scan};
use qwalk_core::{classical_walk, CoinOperator, NoiseModel, RamanConfig, RfPulse, TrapConfig, TwoLevelAmps, WalkState, AMU, C64};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t0 = Instant::now();
    let out = f();
    (out, t0.elapsed())
}

/// Sum over all 2ⁿ coin sequences; coin 0 moves left.
fn path_sum(coin: &[[C64; 2]; 2], start: [C64; 2], n: usize) -> BTreeMap<i64, f64> {
    let mut amps: BTreeMap<(i64, usize), C64> = BTreeMap::new();
    for (c0, a0) in start.iter().enumerate() {
        for path in 0u64..(1 << n) {
            let (mut amp, mut prev, mut x) = (*a0, c0, 0i64);
            for k in 0..n {
                let c = ((path >> k) & 1) as usize;
                amp *= coin[c][prev];
                x += if c == 0 { -1 } else { 1 };
                prev = c;
            }
            *amps.entry((x, prev)).or_default() += amp;
        }
    }
    let mut dist = BTreeMap::new();
    for ((x, _), a) in amps {
        *dist.entry(x).or_insert(0.0) += a.norm_sqr();
    }
    dist
}

struct XorShift(u64);

impl XorShift {
    fn next(&mut self) -> f64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        (self.0 >> 11) as f64 / (1u64 << 53) as f64
    }
    fn signed(&mut self) -> f64 {
        2.0 * self.next() - 1.0
    }
}

fn c1_three_step_oracle() -> Verdict {
    let (worst, elapsed) = timed(|| {
        let h = *CoinOperator::hadamard().entries();
        let mut worst: f64 = 0.0;
        for n in 0..=12 {
            let mut s = WalkState::point(0, 12, coin_zero()).unwrap();
            s.evolve(n, &CoinOperator::hadamard()).unwrap();
            let oracle = path_sum(&h, coin_zero(), n);
            for (x, p) in s.distribution().iter() {
                worst = worst.max((p - oracle.get(&x).copied().unwrap_or(0.0)).abs());
            }
        }
        worst
    });
    let mut s = WalkState::point(0, 3, coin_zero()).unwrap();
    s.evolve(3, &CoinOperator::hadamard()).unwrap();
    let d = s.distribution();
    let exact = [(-3, 0.125), (-1, 0.625), (1, 0.125), (3, 0.125)];
    let three = exact.iter().all(|(x, p)| (d.prob_at(*x) - p).abs() < 1e-12)
        && [-2, 0, 2].iter().all(|x| d.prob_at(*x) == 0.0);
    verdict(
        worst < 1e-10 && three && elapsed < Duration::from_secs(1),
        format!("max error {worst:.1e} over n ≤ 12, n=3 exact: {three}, {elapsed:.2?}"),
    )
}

fn c2_variance_scaling() -> Verdict {
    let ns: Vec<usize> = (20..=200).collect();
    let ((quantum, classical), elapsed) = timed(|| {
        let start = WalkState::point(0, 200, coin_symmetric()).unwrap();
        let scan = variance_scan(&start, &CoinOperator::hadamard(), &ns).unwrap();
        let q = fit_loglog_exponent(&scan.iter().map(|(n, v)| (*n as f64, *v)).collect::<Vec<_>>()).unwrap();
        let pts: Vec<(f64, f64)> = ns.iter().map(|&n| (n as f64, classical_walk(0, n).moments().variance)).collect();
        (q, fit_loglog_exponent(&pts).unwrap())
    });
    verdict(
        quantum >= 1.9 && (classical - 1.0).abs() <= 0.02 && elapsed < Duration::from_secs(5),
        format!("quantum exponent {quantum:.4}, classical {classical:.4}, {elapsed:.2?}"),
    )
}

fn c3_symmetric_peaks() -> Verdict {
    let n = 100;
    let mut s = WalkState::point(0, n, coin_symmetric()).unwrap();
    s.evolve(n, &CoinOperator::hadamard()).unwrap();
    let d = s.distribution();
    let asym = d.asymmetry();
    let peaks = d.peaks(1e-9);
    let edge = n as f64 / 2f64.sqrt();
    let near = peaks.len() == 2 && peaks.iter().all(|x| ((*x as f64).abs() - edge).abs() <= 2.0);
    verdict(
        asym < 1e-12 && near,
        format!("asymmetry {asym:.1e}, global maxima at {peaks:?}, target ±{edge:.2} ± 2"),
    )
}

fn c4_compensation_identity() -> Verdict {
    let mut rng = XorShift(0x5EED_1234_ABCD_0001);
    let mut worst: f64 = 0.0;
    for _ in 0..10 {
        let coin = CoinOperator::from_angles(
            PI * rng.signed(),
            PI * rng.signed(),
            PI * rng.signed(),
            0.5 * PI * rng.next(),
        );
        for _ in 0..100 {
            let h = 8;
            let mut amps = vec![C64::new(0.0, 0.0); 2 * (2 * h + 1)];
            // Leave the two edge sites empty for one shift of headroom.
            for a in amps.iter_mut().skip(2).take(2 * (2 * h - 1)) {
                *a = C64::new(rng.signed(), rng.signed());
            }
            let s = WalkState::from_amplitudes(0, amps).unwrap();
            let (mut a, mut b) = (s.clone(), s);
            a.step(&coin).unwrap();
            b.physical_step(&coin).unwrap();
            worst = worst.max(a.max_distance(&b));
        }
    }
    verdict(worst < 1e-14, format!("max amplitude distance {worst:.1e} over 100 states × 10 coins"))
}

fn c5_classical_crossover() -> Verdict {
    let ((tv, exps), elapsed) = timed(|| {
        let full = NoiseModel::new(0.0, 1.0, 0.0, 1.0).unwrap();
        let mut tv: f64 = 0.0;
        for n in 0..=20 {
            let s = WalkState::point(0, n.max(1), coin_zero()).unwrap();
            let run = run_open(&s, n, &CoinOperator::hadamard(), &full).unwrap();
            tv = tv.max(run.distribution.total_variation(&classical_walk(0, n)));
        }
        let ns: Vec<usize> = (20..=100).step_by(5).collect();
        let start = WalkState::point(0, 100, coin_symmetric()).unwrap();
        let exps: Vec<f64> = [0.0, 0.05, 0.2, 1.0]
            .iter()
            .map(|&p| {
                let noise = NoiseModel::new(0.0, p, 0.0, 1.0).unwrap();
                let scan = open_variance_scan(&start, &CoinOperator::hadamard(), &noise, &ns).unwrap();
                fit_loglog_exponent(&scan.iter().map(|(n, v)| (*n as f64, *v)).collect::<Vec<_>>()).unwrap()
            })
            .collect();
        (tv, exps)
    });
    let monotone = exps.windows(2).all(|w| w[1] < w[0]);
    verdict(
        tv < 1e-10 && monotone && elapsed < Duration::from_secs(30),
        format!("max TV {tv:.1e} for n ≤ 20, exponents {exps:.3?} at p_x = 0, 0.05, 0.2, 1, {elapsed:.2?}"),
    )
}

fn c6_rabi() -> Verdict {
    let w = 2.0 * PI * 1.0e3;
    let mut worst: f64 = 0.0;
    for ratio in [0.0, 0.5, 1.0, 5.0] {
        for k in 0..=200 {
            let tau = 4.0 * PI * k as f64 / (200.0 * w);
            let p = RfPulse::new(w, ratio * w, tau).unwrap();
            let a = rf_evolve(&TwoLevelAmps::ground(), &p).populations();
            let b = rf_evolve_rk4(&TwoLevelAmps::ground(), &p).populations();
            worst = worst.max((a.0 - b.0).abs()).max((a.1 - b.1).abs());
        }
    }
    let pi = rf_evolve(&TwoLevelAmps::ground(), &design_pulse(PulseKind::PiFlip, w).unwrap()).populations();
    let half = rf_evolve(&TwoLevelAmps::ground(), &design_pulse(PulseKind::HadamardRotation, w).unwrap()).populations();
    let pulses = (pi.1 - 1.0).abs() < 1e-12 && (half.0 - 0.5).abs() < 1e-12 && (half.1 - 0.5).abs() < 1e-12;
    verdict(
        worst < 1e-9 && pulses,
        format!("max RK4 population error {worst:.1e}, π transfer {:.15}, π/2 populations ({:.15}, {:.15})", pi.1, half.0, half.1),
    )
}

fn rb87(v: f64, delta: f64) -> RamanConfig {
    let (k1, k2) = RamanConfig::counterpropagating(780e-9);
    RamanConfig {
        v1: v,
        v2: v,
        delta1: delta,
        delta2: delta,
        phi1: 0.0,
        phi2: 0.0,
        k1,
        k2,
        atom_mass: 86.909_180_5 * AMU,
        step_length: 10e-6,
    }
}

fn c7_raman_kick() -> Verdict {
    let v = 2.0 * PI * 5.0e3;
    let cfg = rb87(v, 100.0 * v);
    let cal = calibrate_kick(&cfg, 2.0 * PI / cfg.effective_rabi()).unwrap();
    let left = momentum_kick(&cfg, Direction::Left).unwrap();
    let right = momentum_kick(&cfg, Direction::Right).unwrap();
    verdict(
        cal.fidelity >= 0.99 && cal.max_excited_population < 1e-3 && left + right == 0.0,
        format!(
            "fidelity {:.9}, max |e⟩ population {:.2e}, P_left + P_right = {:e}",
            cal.fidelity,
            cal.max_excited_population,
            left + right
        ),
    )
}

fn c8_cat_states() -> Verdict {
    let mut worst: f64 = 0.0;
    for atoms in [1usize, 10, 100, 1000, 10_000] {
        for (a, b) in [
            (C64::new(FRAC_1_SQRT_2, 0.0), C64::new(0.0, FRAC_1_SQRT_2)),
            (C64::new(0.6, 0.0), C64::new(0.8, 0.0)),
            (C64::new(0.1, 0.0), C64::from_polar(0.99f64.sqrt(), 1.0)),
        ] {
            let norm: f64 = cat_expansion(a, b, atoms).unwrap().iter().map(|c| c.norm_sqr()).sum();
            worst = worst.max((norm - 1.0).abs());
        }
    }
    let s = FRAC_1_SQRT_2;
    let (p0, p1) = cat_state(C64::new(s, 0.0), C64::new(s, 0.0), 10_000).unwrap().branch_probabilities();
    verdict(
        worst < 1e-9 && (p0 - 0.5).abs() < 1e-12 && (p1 - 0.5).abs() < 1e-12,
        format!("max norm error {worst:.1e} up to N = 10⁴, branches ({p0}, {p1})"),
    )
}

fn experiment(out: &Path) -> (i32, String) {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs/experiment.cfg");
    let status = Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(["experiment", "--config", config.to_str().unwrap()])
        .args(["--set", "kick=ideal", "--set", "kick_time=1 ms", "--set", "trials=1000000"])
        .args(["--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    (status.status.code().unwrap_or(-1), String::from_utf8_lossy(&status.stderr).into_owned())
}

fn c9_virtual_experiment() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let (code_a, err_a) = experiment(&a);
    let (code_b, _) = experiment(&b);
    if code_a != 0 || code_b != 0 {
        return verdict(false, format!("exit codes {code_a}, {code_b}: {err_a}"));
    }
    let read = |d: &Path, f: &str| std::fs::read(d.join(f)).unwrap();
    let identical = ["exact.csv", "empirical.csv", "experiment.json"].iter().all(|f| read(&a, f) == read(&b, f));
    let csv = String::from_utf8(read(&a, "empirical.csv")).unwrap();
    let oracle = BTreeMap::from([(-3, 0.125), (-1, 0.625), (1, 0.125), (3, 0.125)]);
    let tv = 0.5
        * csv
            .lines()
            .skip(1)
            .map(|l| {
                let cols: Vec<&str> = l.split(',').collect();
                let x: i64 = cols[0].parse().unwrap();
                (cols[2].parse::<f64>().unwrap() - oracle.get(&x).copied().unwrap_or(0.0)).abs()
            })
            .sum::<f64>();
    verdict(tv < 0.005 && identical, format!("TV to exact {tv:.2e} at 10⁶ trials, byte-identical rerun: {identical}"))
}

fn c10_performance() -> Verdict {
    let start = WalkState::point(0, 10_000, coin_symmetric()).unwrap();
    let (_, pure) = timed(|| {
        let mut s = start.clone();
        s.evolve(10_000, &CoinOperator::hadamard()).unwrap();
        s
    });
    let noise = NoiseModel::new(0.1, 0.05, 0.02, 1.0).unwrap();
    let (_, density) = timed(|| {
        let s = WalkState::point(0, 100, coin_symmetric()).unwrap();
        run_open(&s, 100, &CoinOperator::hadamard(), &noise).unwrap()
    });
    verdict(
        pure < Duration::from_secs(1) && density < Duration::from_secs(60),
        format!("pure n=10⁴ in {pure:.2?}, density n=100 in {density:.2?}"),
    )
}

fn c11_geometry() -> Verdict {
    let zr30 = rayleigh_range(1.064e-6, 30e-6);
    let zr100 = rayleigh_range(1.064e-6, 100e-6);
    let spots = (zr30 - 2.657e-3).abs() < 1e-6 && (zr100 - 29.5e-3).abs() < 0.1e-3;
    let quad = (rayleigh_range(1.064e-6, 60e-6) / zr30 - 4.0).abs() < 1e-12;
    let budgets: Vec<usize> = [1e-3, 2e-3, 5e-3]
        .iter()
        .map(|z| max_steps(&TrapConfig::new(1.064e-6, 100e-6, *z, 10e-6).unwrap()))
        .collect();
    let few_hundred = budgets.iter().all(|n| (100..1000).contains(n)) && budgets[2] == 500;
    verdict(
        spots && quad && few_hundred,
        format!("Z_R = {:.4} mm, {:.2} mm; n_max at Z = 1, 2, 5 mm: {budgets:?}", zr30 * 1e3, zr100 * 1e3),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 11] = [
        ("three-step walk and 2ⁿ path oracle", c1_three_step_oracle),
        ("variance scaling exponents", c2_variance_scaling),
        ("symmetric start, peaks near ±n/√2", c3_symmetric_peaks),
        ("compensation identity", c4_compensation_identity),
        ("classical crossover", c5_classical_crossover),
        ("Rabi closed form vs RK4", c6_rabi),
        ("Raman kick calibration", c7_raman_kick),
        ("cat-state algebra", c8_cat_states),
        ("end-to-end virtual experiment", c9_virtual_experiment),
        ("performance", c10_performance),
        ("geometry and step budget", c11_geometry),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!("criterion {:>2} {}: {name}: {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
