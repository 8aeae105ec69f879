mod common;

use std::f64::consts::PI;

use common::{expm_taylor, TestRng};
use qwalk_core::pulse::{
    calibrate_kick, cat_expansion, cat_state, momentum_kick, raman_evolve, raman_hamiltonian, rf_coin_matrix,
    rf_evolve, rf_evolve_rk4, translation_time, Branch, Direction, PulseKind,
};
use qwalk_core::pulse::design_pulse;
use qwalk_core::{RamanConfig, RfPulse, ThreeLevelState, TwoLevelAmps, WalkState, AMU, C64, HBAR};

fn raman(v: f64, delta: f64) -> RamanConfig {
    let (k1, k2) = RamanConfig::counterpropagating(780e-9);
    RamanConfig {
        v1: v,
        v2: v,
        delta1: delta,
        delta2: delta,
        phi1: 0.4,
        phi2: 1.7,
        k1,
        k2,
        atom_mass: 86.909_180_5 * AMU,
        step_length: 10e-6,
    }
}

#[test]
fn rk4_tracks_closed_form_on_grid() {
    let w = 2.0 * PI * 1.0e3;
    for ratio in [0.0, 0.5, 1.0, 5.0] {
        for k in 0..=64 {
            let tau = 4.0 * PI * k as f64 / (64.0 * w);
            let p = RfPulse::new(w, ratio * w, tau).unwrap();
            let exact = rf_evolve(&TwoLevelAmps::ground(), &p).populations();
            let rk = rf_evolve_rk4(&TwoLevelAmps::ground(), &p).populations();
            assert!((exact.0 - rk.0).abs() < 1e-9 && (exact.1 - rk.1).abs() < 1e-9, "Δ/ω={ratio} k={k}");
        }
    }
}

#[test]
fn detuned_transfer_follows_rabi_formula() {
    let w = 3.0e4;
    let mut rng = TestRng::new(3);
    for _ in 0..200 {
        let delta = rng.signed() * 4.0 * w;
        let tau = rng.next_f64() * 1e-3;
        let omega = w.hypot(delta);
        let oracle = (w / omega).powi(2) * (omega * tau / 2.0).sin().powi(2);
        let p1 = rf_evolve(&TwoLevelAmps::ground(), &RfPulse::new(w, delta, tau).unwrap()).populations().1;
        assert!((p1 - oracle).abs() < 1e-12);
    }
}

#[test]
fn rf_half_pi_coin_walk_symmetry() {
    // The σx-type coin is balanced for the real superposition (|0⟩+|1⟩)/√2;
    // from a basis state it drifts like the Hadamard walk, and |0⟩, |1⟩
    // give mirror images.
    let coin = rf_coin_matrix(&design_pulse(PulseKind::HadamardRotation, 1.0e4).unwrap()).unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let zero = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let one = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    for n in 1..=100 {
        let run = |start: [C64; 2]| {
            let mut w = WalkState::point(0, n, start).unwrap();
            w.evolve(n, &coin).unwrap();
            w.distribution()
        };
        assert!(run([C64::new(s, 0.0), C64::new(s, 0.0)]).asymmetry() < 1e-12, "n={n}");
        let (a, b) = (run(zero), run(one));
        let mirrored: Vec<f64> = b.probabilities().iter().rev().copied().collect();
        assert!(a.probabilities().iter().zip(&mirrored).all(|(p, q)| (p - q).abs() < 1e-12));
    }
    let mut w = WalkState::point(0, 3, zero).unwrap();
    w.evolve(3, &coin).unwrap();
    let d = w.distribution();
    for (x, p) in [(-3, 0.125), (-1, 0.625), (1, 0.125), (3, 0.125)] {
        assert!((d.prob_at(x) - p).abs() < 1e-15);
    }
}

#[test]
fn raman_evolution_matches_taylor_exponential() {
    let mut rng = TestRng::new(99);
    for _ in 0..20 {
        let mut cfg = raman(1.0e4 * (0.5 + rng.next_f64()), 1.0e5 * rng.signed());
        cfg.v2 *= 0.5 + rng.next_f64();
        cfg.delta2 = cfg.delta1 + 1.0e4 * rng.signed();
        cfg.phi1 = 3.0 * rng.signed();
        cfg.phi2 = 3.0 * rng.signed();
        for branch in [Branch::A, Branch::B] {
            let h = raman_hamiltonian(&cfg, branch);
            let dense: [[C64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| h[(i, j)]));
            let t = 2e-4 * rng.next_f64();
            let u = expm_taylor(&dense, t);
            for from in 0..3 {
                let out = raman_evolve(&ThreeLevelState::basis(from), &h, t).unwrap();
                for to in 0..3 {
                    assert!((out.amplitudes[to] - u[to][from]).norm() < 1e-10);
                }
            }
        }
    }
}

#[test]
fn far_detuned_kick_follows_adiabatic_elimination() {
    let v = 2.0 * PI * 5.0e3;
    for ratio in [50.0, 100.0, 400.0] {
        let cfg = raman(v, ratio * v);
        // Effective two-level Rabi frequency V1·V2/(2Δ); light shifts cancel
        // for equal couplings.
        let omega_eff = v * v / (2.0 * ratio * v);
        let h = raman_hamiltonian(&cfg, Branch::A);
        let scale = 4.0 * (1.0 / (2.0 * ratio)).powi(2);
        for k in 1..=20 {
            let t = k as f64 * PI / (10.0 * omega_eff);
            let pops = raman_evolve(&ThreeLevelState::basis(0), &h, t).unwrap().populations();
            let oracle = (omega_eff * t / 2.0).sin().powi(2);
            assert!((pops[2] - oracle).abs() < 2.0 * scale, "Δ/V={ratio} k={k}");
            assert!(pops[1] < 2.0 * scale);
        }
        let cal = calibrate_kick(&cfg, 2.0 * PI / omega_eff).unwrap();
        assert!((cal.t_kick * omega_eff / PI - 1.0).abs() < 2.0 * scale);
        assert!(cal.fidelity >= 1.0 - scale);
        assert!(cal.max_excited_population < 2.0 * scale);

        let hb = raman_hamiltonian(&cfg, Branch::B);
        let back = raman_evolve(&ThreeLevelState::basis(2), &hb, cal.t_kick).unwrap().populations()[0];
        assert!((back - cal.fidelity).abs() < 1e-6);
    }
}

#[test]
fn kicks_are_opposite_and_translation_uses_recoil_velocity() {
    let cfg = raman(1.0, 100.0);
    let left = momentum_kick(&cfg, Direction::Left).unwrap();
    let right = momentum_kick(&cfg, Direction::Right).unwrap();
    assert_eq!(left + right, 0.0);
    // Two counter-propagating 780 nm photons: v = 2ħk/m ≈ 11.8 mm/s.
    let k = 2.0 * PI / 780e-9;
    let velocity = 2.0 * HBAR * k / cfg.atom_mass;
    assert!((velocity - 11.77e-3).abs() < 0.01e-3);
    let t = translation_time(left, &cfg).unwrap();
    assert!((t - cfg.step_length / velocity).abs() < 1e-12 * t);
    assert!((t - 0.849e-3).abs() < 0.001e-3, "t={t}");
    assert_eq!(translation_time(right, &cfg).unwrap(), t);
}

#[test]
fn cat_expansion_norm_up_to_ten_thousand_atoms() {
    let mut rng = TestRng::new(8);
    for atoms in [1usize, 2, 17, 500, 10_000] {
        let theta = rng.next_f64() * PI;
        let a = C64::new(theta.cos(), 0.0);
        let b = C64::from_polar(theta.sin(), rng.signed() * PI);
        let coeffs = cat_expansion(a, b, atoms).unwrap();
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-9, "N={atoms} norm={norm}");
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let cat = cat_state(C64::new(s, 0.0), C64::new(0.0, s), 10_000).unwrap();
    let (p0, p1) = cat.branch_probabilities();
    assert!((p0 - 0.5).abs() < 1e-12 && (p1 - 0.5).abs() < 1e-12);
}

#[test]
fn cat_expansion_matches_binomial_for_small_n() {
    let a = C64::new(0.6, 0.0);
    let b = C64::new(0.0, 0.8);
    let coeffs = cat_expansion(a, b, 4).unwrap();
    let binom = [1.0, 4.0, 6.0, 4.0, 1.0];
    for (n, c) in coeffs.iter().enumerate() {
        let oracle = f64::sqrt(binom[n]) * a.powu(4 - n as u32) * b.powu(n as u32);
        assert!((c - oracle).norm() < 1e-14);
    }
}
