//! The acceptance gate: eight quantitative criteria, each reported as a
//! single `criterion N: PASS`/`FAIL` line (visible with --nocapture).
// Negated comparisons are deliberate throughout: `!(x < tol)` also
// fails on NaN, which a plain `x >= tol` would let through.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//!
//! The six reference runs are expensive, so they are shared lazily
//! across criteria within the process.

use std::f64::consts::PI;

use once_cell::sync::Lazy;
use plasma_osc::certifier::{condn_lhs, glue_bound};
use plasma_osc::dynamics::{period, rk4_step_vec, IDX_PBAR, IDX_Q};
use plasma_osc::experiments::{gaussian_pulse, InitialData};
use plasma_osc::scenario::{reproduce_variant, RunArtifacts};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

static VARIANTS: Lazy<Vec<RunArtifacts>> = Lazy::new(|| {
    (1..=6)
        .map(|k| reproduce_variant(k, None).expect("variant run"))
        .collect()
});

/// Reference (T_br, |rho_br|) per variant.
const BLOWUP_REFS: [(f64, f64); 6] = [
    (55.106, 0.19376),
    (29.493, 0.13653),
    (16.999, 0.20376),
    (34.852, 0.45274),
    (15.929, 0.47745),
    (15.023, 0.10343),
];

/// Reference T_{n,sm} per variant for n = 1, 2, 3 (NAN = absent).
const PREDICTION_REFS: [[f64; 3]; 6] = [
    [54.34, 51.68, 51.32],
    [25.84, 23.08, 22.52],
    [16.14, 12.98, 12.02],
    [28.04, 24.78, 24.02],
    [14.94, 14.38, 10.42],
    [11.24, 7.38, f64::NAN],
];

fn report(criterion: u32, failures: Vec<String>) {
    if failures.is_empty() {
        println!("criterion {criterion}: PASS");
    } else {
        println!("criterion {criterion}: FAIL");
        panic!("criterion {criterion} failed:\n{}", failures.join("\n"));
    }
}

#[test]
fn criterion_1_variant_reproduction() {
    let mut failures = Vec::new();
    for (i, art) in VARIANTS.iter().enumerate() {
        let (t_ref, r_ref) = BLOWUP_REFS[i];
        match art.report.t_br {
            Some(t) if (t - t_ref).abs() <= 0.05 => {}
            other => failures.push(format!("variant {}: T_br {other:?} vs {t_ref}", i + 1)),
        }
        let r = art.report.rho_br.first().map(|r| r.abs());
        match r {
            Some(r) if (r - r_ref).abs() <= 5e-3 => {}
            other => failures.push(format!("variant {}: |rho_br| {other:?} vs {r_ref}", i + 1)),
        }
    }
    report(1, failures);
}

#[test]
fn criterion_2_prediction_reproduction() {
    let mut failures = Vec::new();
    for (i, art) in VARIANTS.iter().enumerate() {
        for d in &art.dynamics {
            let want = PREDICTION_REFS[i][(d.n - 1) as usize];
            match (d.t_n_sm, want.is_nan()) {
                (None, true) => {}
                (Some(got), false) if (got - want).abs() <= 0.3 => {}
                (got, _) => failures.push(format!(
                    "variant {} n={}: T_n_sm {got:?} vs {want}",
                    i + 1,
                    d.n
                )),
            }
        }
    }
    // Pinned transition times.
    let theta = |v: usize, n: u32| {
        VARIANTS[v].dynamics[(n - 1) as usize]
            .theta_n
            .unwrap_or(f64::NAN)
    };
    for (got, want, label) in [
        (theta(0, 1), 51.2, "variant 1 theta_1"),
        (theta(0, 2), 45.4, "variant 1 theta_2"),
        (theta(2, 3), 2.6, "variant 3 theta_3"),
    ] {
        if !((got - want).abs() <= 0.3) {
            failures.push(format!("{label}: {got} vs {want}"));
        }
    }
    report(2, failures);
}

#[test]
fn criterion_3_theorem_soundness() {
    let mut failures = Vec::new();
    for (i, art) in VARIANTS.iter().enumerate() {
        let t_br = art.report.t_br.expect("all variants break");
        for d in &art.dynamics {
            let horizon = d.n as f64 * PI;
            if d.series[0].phi_min > 0.0 && !(t_br > horizon) {
                failures.push(format!("variant {} n={}: T_br {t_br} <= n*pi", i + 1, d.n));
            }
            for s in &d.series {
                if s.phi_min > 0.0 && !(t_br - s.theta > horizon - 1e-2) {
                    failures.push(format!(
                        "variant {} n={} theta={}: certified but breaks in {}",
                        i + 1,
                        d.n,
                        s.theta,
                        t_br - s.theta
                    ));
                }
            }
        }
    }
    report(3, failures);
}

#[test]
fn criterion_4_linearization_oracle() {
    // Direct RK4 on the nonlinear derivative system (rho, P, E, p, e):
    // p' = -e - p^2 K, e' = (1 - e) p K with K = gamma^-3.
    fn oracle_step(y: &[f64; 5], h: f64) -> [f64; 5] {
        let f = |y: &[f64; 5]| -> [f64; 5] {
            let gamma = (1.0 + y[1] * y[1]).sqrt();
            let k = 1.0 / (gamma * gamma * gamma);
            let v = y[1] / gamma;
            [
                v,
                -y[2],
                v,
                -y[4] - y[3] * y[3] * k,
                (1.0 - y[4]) * y[3] * k,
            ]
        };
        let k1 = f(y);
        let mut y2 = *y;
        for i in 0..5 {
            y2[i] = y[i] + 0.5 * h * k1[i];
        }
        let k2 = f(&y2);
        let mut y3 = *y;
        for i in 0..5 {
            y3[i] = y[i] + 0.5 * h * k2[i];
        }
        let k3 = f(&y3);
        let mut y4 = *y;
        for i in 0..5 {
            y4[i] = y[i] + h * k3[i];
        }
        let k4 = f(&y4);
        let mut out = *y;
        for i in 0..5 {
            out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out
    }

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let mut failures = Vec::new();
    let h = 1e-3;
    for case in 0..50 {
        let alpha = rng.gen_range(-0.5..0.5);
        let beta = rng.gen_range(-0.9..0.9);
        let rho_star = rng.gen_range(2.0..6.0);
        let field = gaussian_pulse(alpha, beta, rho_star).unwrap();
        let rho0 = rng.gen_range(-1.5 * rho_star..1.5 * rho_star);
        let s = field.initial_state(rho0);

        let mut lin = [s.rho, s.momentum, s.field, s.p_bar, s.q];
        // At theta = 0, q = 1, so p = p_bar = p0 and e = e0.
        let mut nl = [s.rho, s.momentum, s.field, s.p_bar, s.e0];
        let mut max_dev = 0.0f64;
        for _ in 0..30_000 {
            lin = rk4_step_vec(&lin, s.e0, h);
            nl = oracle_step(&nl, h);
            let q = lin[IDX_Q];
            if q <= 0.9 {
                break;
            }
            let p = lin[IDX_PBAR] / q;
            let e = (q + s.e0 - 1.0) / q;
            max_dev = max_dev.max((p - nl[3]).abs()).max((e - nl[4]).abs());
        }
        if !(max_dev < 1e-6) {
            failures.push(format!(
                "case {case} (alpha={alpha:.3}, beta={beta:.3}, rho*={rho_star:.3}, rho0={rho0:.3}): dev {max_dev:.3e}"
            ));
        }
    }
    report(4, failures);
}

#[test]
fn criterion_5_conservation_and_order() {
    let mut failures = Vec::new();

    // First-integral drift over 60 time units at dtheta = 1e-3 on a
    // surviving variant-1 tail characteristic.
    let field = gaussian_pulse(0.4761, 0.0, 3.0).unwrap();
    let s = field.initial_state(5.0);
    let c0 = s.conserved();
    let mut y = [s.rho, s.momentum, s.field, s.p_bar, s.q];
    let mut drift = 0.0f64;
    for _ in 0..60_000 {
        y = rk4_step_vec(&y, s.e0, 1e-3);
        let c = 2.0 * (1.0 + y[1] * y[1]).sqrt() + y[2] * y[2];
        drift = drift.max((c - c0).abs());
    }
    if y[IDX_Q] <= 0.0 {
        failures.push("tail characteristic unexpectedly broke".into());
    }
    if !(drift < 1e-8) {
        failures.push(format!("first-integral drift {drift:.3e} >= 1e-8"));
    }

    // RK4 convergence factor under step halving, against a much finer
    // self-reference on a smooth moderate-amplitude trajectory.
    let run = |h: f64| -> [f64; 5] {
        let mut y = [0.0, 0.2, 0.5, -0.1, 1.0];
        let n = (2.0 * PI / h).round() as usize;
        for _ in 0..n {
            y = rk4_step_vec(&y, 0.3, h);
        }
        y
    };
    let reference = run(2.0 * PI / 3200.0);
    let err = |y: [f64; 5]| -> f64 {
        (0..5)
            .map(|i| (y[i] - reference[i]).powi(2))
            .sum::<f64>()
            .sqrt()
    };
    let ratio = err(run(2.0 * PI / 100.0)) / err(run(2.0 * PI / 200.0));
    if !(12.0..=20.0).contains(&ratio) {
        failures.push(format!("convergence factor {ratio} outside [12, 20]"));
    }
    report(5, failures);
}

#[test]
fn criterion_6_gluing_vs_condn_lattice() {
    let grid: Vec<f64> = (-3..=3).map(|i| i as f64 * 0.3).collect();
    let mut failures = Vec::new();
    for &p0 in &grid {
        for &e0 in &grid {
            for k in [0.3, 0.6, 0.9, 1.0] {
                for n in 1..=3u32 {
                    let lhs = condn_lhs(p0, e0, k, n).unwrap();
                    if lhs > 0.0 {
                        let bound = glue_bound(p0, e0, k, n).unwrap();
                        if !bound.survives {
                            failures.push(format!(
                                "p0={p0:.1} e0={e0:.1} K={k:.1} n={n}: lhs={lhs:.4} but bound dies"
                            ));
                        }
                    }
                }
            }
        }
    }
    report(6, failures);
}

#[test]
fn criterion_7_reductions() {
    let mut failures = Vec::new();

    // Non-relativistic reduction is bit-exact at K_- = 1, n = 1.
    for i in -9..=9 {
        for j in -9..=9 {
            let p0 = i as f64 * 0.1;
            let e0 = j as f64 * 0.1;
            let got = condn_lhs(p0, e0, 1.0, 1).unwrap();
            let want = 1.0 - 2.0 * e0 - p0 * p0;
            if got.to_bits() != want.to_bits() {
                failures.push(format!("condn({p0}, {e0}, 1, 1) = {got:e} != {want:e}"));
            }
        }
    }

    // Equilibrium period is exactly 2*pi.
    let p2 = period(2.0, 1e-12).unwrap();
    if p2 != 2.0 * PI {
        failures.push(format!("period(2) = {p2:e} != 2*pi"));
    }

    // Strict monotonicity and agreement with an independent adaptive
    // Simpson quadrature (different substitution and rule).
    let mut last = 2.0 * PI;
    for c in [2.1, 2.5, 3.0, 3.5] {
        let got = period(c, 1e-12).unwrap();
        if !(got > last) {
            failures.push(format!("period({c}) = {got} not > period at previous C {last}"));
        }
        last = got;
        let want = period_oracle(c);
        if !((got - want).abs() < 1e-10) {
            failures.push(format!("period({c}) = {got:.15} vs oracle {want:.15}"));
        }
    }
    report(7, failures);
}

/// Brute-force period: T = 4 * int_0^{P+} dP / sqrt(C - 2 gamma), with
/// the singular factor rewritten as C - 2 gamma = 4 (P+^2 - P^2)/(C + 2 gamma)
/// and the endpoint half mapped through P = P+ - u^2.
fn period_oracle(c: f64) -> f64 {
    let p_plus = (c * c - 4.0).sqrt() / 2.0;
    let gamma = |p: f64| (1.0 + p * p).sqrt();
    let f = |p: f64| (c + 2.0 * gamma(p)).sqrt() / (2.0 * (p_plus * p_plus - p * p).sqrt());
    let g = |u: f64| {
        let p = p_plus - u * u;
        (c + 2.0 * gamma(p)).sqrt() / (2.0 * p_plus - u * u).sqrt()
    };
    let inner = adaptive_simpson(&f, 0.0, p_plus / 2.0, 1e-13, 60)
        + adaptive_simpson(&g, 0.0, (p_plus / 2.0).sqrt(), 1e-13, 60);
    4.0 * inner
}

fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    fn simpson(a: f64, fa: f64, b: f64, fb: f64, fm: f64) -> f64 {
        (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec(
        f: &dyn Fn(f64) -> f64,
        a: f64,
        b: f64,
        fa: f64,
        fb: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm);
        let frm = f(rm);
        let left = simpson(a, fa, m, fm, flm);
        let right = simpson(m, fm, b, fb, frm);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            rec(f, a, m, fa, fm, flm, left, tol / 2.0, depth - 1)
                + rec(f, m, b, fm, fb, frm, right, tol / 2.0, depth - 1)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let fm = f(0.5 * (a + b));
    let whole = simpson(a, fa, b, fb, fm);
    rec(f, a, b, fa, fb, fm, whole, tol, depth)
}

#[test]
fn criterion_8_symmetry_and_structure() {
    let mut failures = Vec::new();
    let art = &VARIANTS[0];
    let t_br = art.report.t_br.unwrap();

    // Odd-data antisymmetry of the near-blow-up profile.
    let (_, rows) = &art.profiles[0];
    let m = rows.len();
    let mut asym = 0.0f64;
    for i in 0..m / 2 {
        let (a, b) = (&rows[i], &rows[m - 1 - i]);
        asym = asym
            .max((a.rho + b.rho).abs())
            .max((a.momentum + b.momentum).abs())
            .max((a.field + b.field).abs())
            .max((a.density - b.density).abs());
    }
    if !(asym < 1e-3) {
        failures.push(format!("profile antisymmetry {asym:.3e} >= 1e-3"));
    }

    // Excess charge stays zero while the solution is smooth.
    let excess = art
        .density
        .iter()
        .filter(|s| s.theta < t_br)
        .map(|s| s.excess_charge.abs())
        .fold(0.0f64, f64::max);
    if !(excess < 1e-6) {
        failures.push(format!("excess charge {excess:.3e} >= 1e-6"));
    }

    // Singularity structure: e large-negative and monotone toward the
    // density peak; p rises through a smooth local maximum, crosses
    // zero once, and diverges negative at the peak.
    let i_peak = (0..m)
        .max_by(|&a, &b| rows[a].density.partial_cmp(&rows[b].density).unwrap())
        .unwrap();
    let peak = &rows[i_peak];
    if !(peak.e < -100.0) {
        failures.push(format!("peak e = {} not large-negative", peak.e));
    }
    if !(peak.p < -50.0) {
        failures.push(format!("peak p = {} not diverging negative", peak.p));
    }
    // Walk away from the peak on both sides (the pattern shows on the
    // interior side; the exterior side mirrors the opposite peak).
    let right: Vec<usize> = (i_peak..m)
        .take_while(|&j| rows[j].rho - peak.rho < 0.05)
        .collect();
    let left: Vec<usize> = (0..=i_peak)
        .rev()
        .take_while(|&j| peak.rho - rows[j].rho < 0.05)
        .collect();
    // `seq` walks from the peak outward.
    let structure = |seq: &[usize]| -> Result<(), String> {
        if seq.len() < 20 {
            return Err("window too small".into());
        }
        for w in seq.windows(2) {
            if rows[w[1]].e < rows[w[0]].e {
                return Err(format!("e not monotone at rho {}", rows[w[1]].rho));
            }
        }
        let (pos_max, _) = seq
            .iter()
            .enumerate()
            .max_by(|a, b| rows[*a.1].p.partial_cmp(&rows[*b.1].p).unwrap())
            .map(|(i, &j)| (i, j))
            .unwrap();
        if !(rows[seq[pos_max]].p > 1.0 && pos_max > 0 && pos_max < seq.len() - 1) {
            return Err("p has no interior local maximum".into());
        }
        let crossings = (0..pos_max)
            .filter(|&i| rows[seq[i]].p < 0.0 && rows[seq[i + 1]].p >= 0.0)
            .count();
        if crossings != 1 {
            return Err(format!("expected one p zero-crossing, found {crossings}"));
        }
        Ok(())
    };
    let checks = (structure(&right), structure(&left));
    if let (Err(r), Err(l)) = checks {
        failures.push(format!("no side shows the structure: right: {r}; left: {l}"));
    }
    report(8, failures);
}

#[test]
fn prediction_ordering_invariant() {
    // T_{1,sm} >= T_{2,sm} >= T_{3,sm} wherever defined; and every
    // reported prediction is conservative: T_br > T_n_sm - dtheta.
    for (i, art) in VARIANTS.iter().enumerate() {
        let t_br = art.report.t_br.unwrap();
        let mut prev = f64::INFINITY;
        for d in &art.dynamics {
            if let Some(t) = d.t_n_sm {
                assert!(
                    t <= prev + 1e-12,
                    "variant {}: T_{{{},sm}} = {t} out of order",
                    i + 1,
                    d.n
                );
                prev = t;
                assert!(t_br > t - 1e-3, "variant {}: T_br {t_br} <= T_n_sm {t}", i + 1);
            }
        }
    }
}

#[test]
fn blowup_pair_is_symmetric() {
    for (i, art) in VARIANTS.iter().enumerate() {
        assert_eq!(art.report.rho_br.len(), 2, "variant {} pair", i + 1);
        assert!(
            (art.report.rho_br[0] + art.report.rho_br[1]).abs() < 1e-3,
            "variant {}: locations {:?}",
            i + 1,
            art.report.rho_br
        );
        assert!(
            (art.report.rho0_star[0] + art.report.rho0_star[1]).abs() < 1e-3,
            "variant {}: labels {:?}",
            i + 1,
            art.report.rho0_star
        );
    }
}

#[test]
fn grid_refinement_stability() {
    // Halving d_rho_fine moves T_br and rho_br by < 1e-3 on variant 1.
    use plasma_osc::experiments::find_blowup;
    let field = gaussian_pulse(0.4761, 0.0, 3.0).unwrap();
    let base = find_blowup(&field, 13.5, 1e-2, 1e-3, 1e-3, 60.0).unwrap();
    let fine = find_blowup(&field, 13.5, 1e-2, 5e-4, 1e-3, 60.0).unwrap();
    let dt = (base.t_br.unwrap() - fine.t_br.unwrap()).abs();
    let dr = (base.rho_br[0].abs() - fine.rho_br[0].abs()).abs();
    assert!(dt < 1e-3, "T_br moved by {dt:.3e}");
    assert!(dr < 1e-3, "rho_br moved by {dr:.3e}");
}
