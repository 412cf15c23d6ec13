//! Characteristic ODE core.
//!
//! Along each characteristic the plasma system reduces to ODEs for
//! (rho, P, E) together with the linearized derivative variables
//! (p_bar, q).  The physical derivatives are recovered as p = p_bar/q,
//! e = e_bar/q, and the solution loses smoothness exactly where q
//! vanishes.  This module provides the right-hand sides, a fixed-step
//! RK4 integrator with q zero-crossing detection, the first integral
//! C = 2*sqrt(1+P^2) + E^2, and the oscillation period T(C).

use std::f64::consts::PI;

use crate::error::{PlasmaError, Result};

/// Default integration step, configurable everywhere it is used.
pub const DEFAULT_DTHETA: f64 = 1e-3;

/// Absolute tolerance in theta for the refined q zero-crossing.
pub const EVENT_THETA_TOL: f64 = 1e-10;

/// Indices into the integrated state vector.
pub const IDX_RHO: usize = 0;
pub const IDX_P: usize = 1;
pub const IDX_E: usize = 2;
pub const IDX_PBAR: usize = 3;
pub const IDX_Q: usize = 4;

/// Lorentz factor sqrt(1 + P^2).
pub fn lorentz_gamma(momentum: f64) -> Result<f64> {
    if !momentum.is_finite() {
        return Err(PlasmaError::NonFinite("momentum"));
    }
    Ok((1.0 + momentum * momentum).sqrt())
}

/// First integral C = 2*sqrt(1+P^2) + E^2, conserved along characteristics.
pub fn conserved_c(momentum: f64, field: f64) -> Result<f64> {
    if !momentum.is_finite() {
        return Err(PlasmaError::NonFinite("momentum"));
    }
    if !field.is_finite() {
        return Err(PlasmaError::NonFinite("field"));
    }
    Ok(2.0 * (1.0 + momentum * momentum).sqrt() + field * field)
}

/// Lower bound K_- = 8/C^3 of the periodic coefficient K(theta) = gamma^-3.
pub fn k_minus(c: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(PlasmaError::NonFinite("conserved C"));
    }
    if c < 2.0 {
        return Err(PlasmaError::Domain(format!(
            "conserved C must be >= 2, got {c}"
        )));
    }
    Ok(8.0 / (c * c * c))
}

/// Full state of one Lagrangian particle at time `theta`.
///
/// `e0` (the initial field derivative E0'(rho0)) and the label `rho0`
/// are constant along the trajectory.  The variable e_bar is not
/// integrated: it is reconstructed exactly as q + e0 - 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicState {
    pub theta: f64,
    pub rho: f64,
    pub momentum: f64,
    pub field: f64,
    pub p_bar: f64,
    pub q: f64,
    pub e0: f64,
    pub rho0: f64,
}

/// Quantities derived from a state with q > 0.
#[derive(Debug, Clone, Copy)]
pub struct DerivedQuantities {
    pub gamma: f64,
    pub velocity: f64,
    pub k: f64,
    /// Physical derivative P_rho = p_bar / q.
    pub p: f64,
    /// Physical derivative E_rho = e_bar / q.
    pub e: f64,
    /// Electron density N = 1 - e.
    pub density: f64,
}

impl CharacteristicState {
    /// State at theta = 0 for the characteristic with label `rho0`.
    /// `momentum0`/`field0` are P0(rho0)/E0(rho0), `p_bar0` is P0'(rho0)
    /// and `e0` is E0'(rho0); q starts at 1.
    pub fn initial(rho0: f64, momentum0: f64, field0: f64, p_bar0: f64, e0: f64) -> Self {
        Self {
            theta: 0.0,
            rho: rho0,
            momentum: momentum0,
            field: field0,
            p_bar: p_bar0,
            q: 1.0,
            e0,
            rho0,
        }
    }

    /// Linearized field-derivative variable, e_bar = q + e0 - 1.
    pub fn e_bar(&self) -> f64 {
        self.q + self.e0 - 1.0
    }

    /// First integral evaluated at this state.
    pub fn conserved(&self) -> f64 {
        2.0 * (1.0 + self.momentum * self.momentum).sqrt() + self.field * self.field
    }

    /// Derived quantities; meaningful only while q > 0.
    pub fn derived(&self) -> DerivedQuantities {
        let gamma = (1.0 + self.momentum * self.momentum).sqrt();
        let e = self.e_bar() / self.q;
        DerivedQuantities {
            gamma,
            velocity: self.momentum / gamma,
            k: 1.0 / (gamma * gamma * gamma),
            p: self.p_bar / self.q,
            e,
            density: 1.0 - e,
        }
    }

    fn to_vec(self) -> [f64; 5] {
        [self.rho, self.momentum, self.field, self.p_bar, self.q]
    }

    fn from_vec(y: [f64; 5], theta: f64, e0: f64, rho0: f64) -> Self {
        Self {
            theta,
            rho: y[IDX_RHO],
            momentum: y[IDX_P],
            field: y[IDX_E],
            p_bar: y[IDX_PBAR],
            q: y[IDX_Q],
            e0,
            rho0,
        }
    }
}

/// Right-hand side of the extended characteristic system:
/// d(rho, P, E, p_bar, q)/dtheta = (P/gamma, -E, P/gamma, -e_bar, p_bar*K)
/// with e_bar = q + e0 - 1 and K = gamma^-3.
#[inline]
pub fn rhs_vec(y: &[f64; 5], e0: f64) -> [f64; 5] {
    let p = y[IDX_P];
    let gamma = (1.0 + p * p).sqrt();
    let v = p / gamma;
    let k = 1.0 / (gamma * gamma * gamma);
    let e_bar = y[IDX_Q] + e0 - 1.0;
    [v, -y[IDX_E], v, -e_bar, y[IDX_PBAR] * k]
}

/// `rhs_vec` on a full state.
pub fn rhs(state: &CharacteristicState) -> [f64; 5] {
    rhs_vec(&state.to_vec(), state.e0)
}

/// One classical RK4 stage of size `h`.
#[inline]
pub fn rk4_step_vec(y: &[f64; 5], e0: f64, h: f64) -> [f64; 5] {
    let k1 = rhs_vec(y, e0);
    let mut y2 = *y;
    for i in 0..5 {
        y2[i] = y[i] + 0.5 * h * k1[i];
    }
    let k2 = rhs_vec(&y2, e0);
    for i in 0..5 {
        y2[i] = y[i] + 0.5 * h * k2[i];
    }
    let k3 = rhs_vec(&y2, e0);
    for i in 0..5 {
        y2[i] = y[i] + h * k3[i];
    }
    let k4 = rhs_vec(&y2, e0);
    let mut out = *y;
    for i in 0..5 {
        out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// One RK4 stage on a full state.
pub fn rk4_step(state: &CharacteristicState, dtheta: f64) -> CharacteristicState {
    let y = rk4_step_vec(&state.to_vec(), state.e0, dtheta);
    CharacteristicState::from_vec(y, state.theta + dtheta, state.e0, state.rho0)
}

/// Refined q zero-crossing of one characteristic.
#[derive(Debug, Clone, Copy)]
pub struct BlowupEvent {
    /// Refined crossing time theta*.
    pub theta: f64,
    /// Eulerian position rho(theta*) of the particle at the crossing.
    pub rho: f64,
    /// Lagrangian label of the characteristic.
    pub rho0: f64,
}

/// Time-ordered output of one characteristic.
///
/// States are recorded at a uniform cadence and all have q > 0; the
/// refined event, when present, is reported separately in `blowup`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub states: Vec<CharacteristicState>,
    pub blowup: Option<BlowupEvent>,
}

/// Locates the q zero-crossing inside the step [0, h] starting at `y0`.
///
/// A cubic Hermite interpolant of q over the step seeds the bracket,
/// which is then tightened by bisection on re-integrated partial RK4
/// steps until the interval is below `EVENT_THETA_TOL`.
fn refine_crossing(y0: &[f64; 5], e0: f64, h: f64) -> (f64, [f64; 5]) {
    let q0 = y0[IDX_Q];
    let dq0 = rhs_vec(y0, e0)[IDX_Q];
    let y1 = rk4_step_vec(y0, e0, h);
    let q1 = y1[IDX_Q];
    let dq1 = rhs_vec(&y1, e0)[IDX_Q];

    // Hermite cubic q(t) on [0, h]; locate its sign change cheaply.
    let hermite = |t: f64| -> f64 {
        let s = t / h;
        let h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
        let h10 = s * (1.0 - s) * (1.0 - s);
        let h01 = s * s * (3.0 - 2.0 * s);
        let h11 = s * s * (s - 1.0);
        h00 * q0 + h10 * h * dq0 + h01 * q1 + h11 * h * dq1
    };
    let mut a = 0.0;
    let mut b = h;
    for _ in 0..40 {
        let m = 0.5 * (a + b);
        if hermite(m) > 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    let seed = 0.5 * (a + b);

    // Verify a true bracket around the seed; fall back to the full step.
    let q_at = |t: f64| rk4_step_vec(y0, e0, t)[IDX_Q];
    let pad = (10.0 * EVENT_THETA_TOL).max(1e-6 * h);
    let (mut lo, mut hi) = (seed - pad, seed + pad);
    if !(lo > 0.0 && hi < h && q_at(lo) > 0.0 && q_at(hi) <= 0.0) {
        lo = 0.0;
        hi = h;
    }
    while hi - lo > EVENT_THETA_TOL {
        let m = 0.5 * (lo + hi);
        if q_at(m) > 0.0 {
            lo = m;
        } else {
            hi = m;
        }
    }
    let t_star = 0.5 * (lo + hi);
    (t_star, rk4_step_vec(y0, e0, t_star))
}

fn vec_finite(y: &[f64; 5]) -> bool {
    y.iter().all(|v| v.is_finite())
}

/// Integrates one characteristic with fixed step `dtheta` up to
/// `theta_max`, or up to the first q zero-crossing, whichever comes
/// first.  States are recorded every `cadence` steps (the initial state
/// included); on a sign change of q the crossing is refined to
/// `EVENT_THETA_TOL` in theta and recorded in `blowup`.
pub fn integrate_characteristic(
    initial: CharacteristicState,
    dtheta: f64,
    theta_max: f64,
    cadence: usize,
) -> Result<Trajectory> {
    if dtheta <= 0.0 {
        return Err(PlasmaError::Usage(format!(
            "dtheta must be positive, got {dtheta}"
        )));
    }
    let cadence = cadence.max(1);
    let e0 = initial.e0;
    let rho0 = initial.rho0;
    let theta0 = initial.theta;
    let n_steps = ((theta_max - theta0) / dtheta).ceil() as usize;

    let mut states = vec![initial];
    let mut y = initial.to_vec();
    if y[IDX_Q] <= 0.0 {
        return Err(PlasmaError::Usage("initial state must have q > 0".into()));
    }

    for step in 1..=n_steps {
        let y_prev = y;
        y = rk4_step_vec(&y_prev, e0, dtheta);
        let theta = theta0 + step as f64 * dtheta;
        if !vec_finite(&y) {
            return Err(PlasmaError::IntegratorFailure {
                theta,
                last_state: y_prev,
            });
        }
        if y[IDX_Q] <= 0.0 {
            let (t_star, y_star) = refine_crossing(&y_prev, e0, dtheta);
            let theta_star = theta - dtheta + t_star;
            return Ok(Trajectory {
                states,
                blowup: Some(BlowupEvent {
                    theta: theta_star,
                    rho: y_star[IDX_RHO],
                    rho0,
                }),
            });
        }
        if step % cadence == 0 {
            states.push(CharacteristicState::from_vec(y, theta, e0, rho0));
        }
    }
    Ok(Trajectory {
        states,
        blowup: None,
    })
}

/// Like `integrate_characteristic` but stores no trajectory, returning
/// only the refined q zero-crossing if one occurs before `theta_max`.
pub fn first_blowup(
    initial: CharacteristicState,
    dtheta: f64,
    theta_max: f64,
) -> Result<Option<BlowupEvent>> {
    let e0 = initial.e0;
    let rho0 = initial.rho0;
    let theta0 = initial.theta;
    let n_steps = ((theta_max - theta0) / dtheta).ceil() as usize;
    let mut y = initial.to_vec();
    for step in 1..=n_steps {
        let y_prev = y;
        y = rk4_step_vec(&y_prev, e0, dtheta);
        if !vec_finite(&y) {
            return Err(PlasmaError::IntegratorFailure {
                theta: theta0 + step as f64 * dtheta,
                last_state: y_prev,
            });
        }
        if y[IDX_Q] <= 0.0 {
            let (t_star, y_star) = refine_crossing(&y_prev, e0, dtheta);
            return Ok(Some(BlowupEvent {
                theta: theta0 + (step - 1) as f64 * dtheta + t_star,
                rho: y_star[IDX_RHO],
                rho0,
            }));
        }
    }
    Ok(None)
}

/// Oscillation period along a characteristic with first integral C:
/// T = 2 * int_{P-}^{P+} dP / sqrt(C - 2*sqrt(1+P^2)),
/// P+- = +-sqrt(C^2-4)/2.  The substitution P = P+ sin(psi) removes the
/// inverse-square-root endpoint singularity; the transformed integrand
/// is evaluated by Gauss-Legendre quadrature with node doubling until
/// the relative tolerance `tol` is met.  Returns 2*pi for C = 2.
pub fn period(c: f64, tol: f64) -> Result<f64> {
    if !c.is_finite() {
        return Err(PlasmaError::NonFinite("conserved C"));
    }
    if c < 2.0 {
        return Err(PlasmaError::Domain(format!(
            "period requires C >= 2, got {c}"
        )));
    }
    if c == 2.0 {
        return Ok(2.0 * PI);
    }
    let delta = c - 2.0;
    let p_plus = 0.5 * (c * c - 4.0).sqrt();
    // C - 2*gamma written as (C-2) - 2*(gamma-1) to survive C -> 2+.
    let integrand = |psi: f64| -> f64 {
        let p = p_plus * psi.sin();
        let p2 = p * p;
        let gamma = (1.0 + p2).sqrt();
        let gamma_m1 = p2 / (1.0 + gamma);
        let radicand = delta - 2.0 * gamma_m1;
        if radicand <= 0.0 {
            return 0.0;
        }
        p_plus * psi.cos() / radicand.sqrt()
    };
    let mut prev = f64::NAN;
    let mut n = 16;
    while n <= 8192 {
        let t = 4.0 * gauss_legendre(&integrand, 0.0, 0.5 * PI, n);
        if prev.is_finite() && (t - prev).abs() <= tol * t.abs() {
            return Ok(t);
        }
        prev = t;
        n *= 2;
    }
    Ok(prev)
}

/// Gauss-Legendre quadrature of `f` over [a, b] with `n` nodes.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    let (nodes, weights) = gauss_legendre_rule(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut sum = 0.0;
    for (&x, &w) in nodes.iter().zip(weights.iter()) {
        sum += w * f(mid + half * x);
    }
    half * sum
}

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1],
/// by Newton iteration on the Legendre recurrence.
fn gauss_legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        loop {
            // Legendre P_n(x) and its derivative via the recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                let w = 2.0 / ((1.0 - x * x) * dp * dp);
                nodes[i] = -x;
                nodes[n - 1 - i] = x;
                weights[i] = w;
                weights[n - 1 - i] = w;
                break;
            }
        }
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "expected {b}, got {a} (tol {tol})");
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(lorentz_gamma(0.0).unwrap(), 1.0);
        assert_close(lorentz_gamma(0.75).unwrap(), 1.25, 1e-15);
        assert_close(lorentz_gamma(-0.75).unwrap(), 1.25, 1e-15);
        assert!(lorentz_gamma(f64::NAN).is_err());
        assert!(lorentz_gamma(f64::INFINITY).is_err());
    }

    #[test]
    fn conserved_examples() {
        assert_eq!(conserved_c(0.0, 0.0).unwrap(), 2.0);
        assert_close(conserved_c(0.75, 1.0).unwrap(), 3.5, 1e-15);
        // Variant-1 pulse peak rho = rho*/2: E = alpha*rho*exp(-1/2)/... the
        // direct formula is the oracle here.
        let e = 0.4761 * 1.5 * (-0.5_f64).exp();
        assert_close(conserved_c(0.0, e).unwrap(), 2.0 + e * e, 1e-15);
        assert!(conserved_c(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn k_minus_examples() {
        assert_eq!(k_minus(2.0).unwrap(), 1.0);
        assert_close(k_minus(3.5).unwrap(), 8.0 / 42.875, 1e-15);
        let c: f64 = 2.1;
        assert_close(k_minus(c).unwrap(), 8.0 / c.powi(3), 1e-15);
        assert!(k_minus(1.9).is_err());
    }

    #[test]
    fn rhs_fixed_point_and_substitution() {
        let eq = CharacteristicState::initial(0.0, 0.0, 0.0, 0.0, 0.0);
        assert_eq!(rhs(&eq), [0.0; 5]);

        let s = CharacteristicState {
            theta: 0.0,
            rho: 0.0,
            momentum: 0.0,
            field: 1.0,
            p_bar: 0.0,
            q: 1.0,
            e0: 0.0,
            rho0: 0.0,
        };
        assert_eq!(rhs(&s), [0.0, -1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn rhs_matches_independent_evaluation() {
        // Second hand-written evaluation of the characteristic system and
        // its linearization, in long form.
        let s = CharacteristicState {
            theta: 0.3,
            rho: 0.7,
            momentum: -0.4,
            field: 0.9,
            p_bar: 0.2,
            q: 0.8,
            e0: 0.15,
            rho0: 0.5,
        };
        let gamma = (1.0_f64 + (-0.4_f64) * (-0.4)).sqrt();
        let expect = [
            -0.4 / gamma,
            -0.9,
            -0.4 / gamma,
            -(0.8 + 0.15 - 1.0),
            0.2 * (1.0 + 0.16_f64).powf(-1.5),
        ];
        let got = rhs(&s);
        for i in 0..5 {
            assert_close(got[i], expect[i], 1e-15);
        }
    }

    #[test]
    fn rk4_fixed_point() {
        let eq = CharacteristicState::initial(0.0, 0.0, 0.0, 0.0, 0.0);
        let out = rk4_step(&eq, 1e-2);
        assert_eq!(out.rho, 0.0);
        assert_eq!(out.momentum, 0.0);
        assert_eq!(out.q, 1.0);
    }

    #[test]
    fn rk4_small_oscillation_order() {
        // Richardson comparison against a much finer self-reference
        // (which cancels the anharmonic model error) shows fourth order.
        let run = |h: f64| -> [f64; 5] {
            let mut y = [0.0, 0.2, 0.5, -0.1, 1.0];
            let n = (2.0 * PI / h).round() as usize;
            for _ in 0..n {
                y = rk4_step_vec(&y, 0.3, h);
            }
            y
        };
        let reference = run(2.0 * PI / 3200.0);
        let err = |y: &[f64; 5]| -> f64 {
            (0..5)
                .map(|i| (y[i] - reference[i]).powi(2))
                .sum::<f64>()
                .sqrt()
        };
        let e1 = err(&run(2.0 * PI / 100.0));
        let e2 = err(&run(2.0 * PI / 200.0));
        let ratio = e1 / e2;
        assert!(
            (8.0..32.0).contains(&ratio),
            "expected ~16x error reduction, got {ratio}"
        );
    }

    #[test]
    fn conserved_drift_small() {
        // 1e4 steps at dtheta = 1e-3 on a moderate-amplitude trajectory.
        let mut y = [0.0, 0.3, 0.4, 0.0, 1.0];
        let c0 = conserved_c(y[IDX_P], y[IDX_E]).unwrap();
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            y = rk4_step_vec(&y, 0.0, 1e-3);
            let c = conserved_c(y[IDX_P], y[IDX_E]).unwrap();
            worst = worst.max((c - c0).abs());
        }
        assert!(worst < 1e-10, "drift {worst}");
    }

    #[test]
    fn stationary_characteristic() {
        let eq = CharacteristicState::initial(1.0, 0.0, 0.0, 0.0, 0.0);
        let traj = integrate_characteristic(eq, 1e-2, 10.0, 100).unwrap();
        assert!(traj.blowup.is_none());
        for s in &traj.states {
            assert_eq!(s.momentum, 0.0);
            assert_eq!(s.q, 1.0);
        }
    }

    #[test]
    fn trajectory_cadence_and_bounds() {
        let init = CharacteristicState::initial(0.0, 0.2, 0.3, 0.1, 0.05);
        let traj = integrate_characteristic(init, 1e-3, 20.0, 10).unwrap();
        let c0 = init.conserved();
        let mut prev_theta = f64::NEG_INFINITY;
        for s in &traj.states {
            assert!(s.theta > prev_theta);
            prev_theta = s.theta;
            assert!(s.q > 0.0);
            let gamma = (1.0 + s.momentum * s.momentum).sqrt();
            assert!(gamma <= c0 / 2.0 + 1e-10);
            assert!(s.field * s.field <= c0 - 2.0 + 1e-10);
            // e_bar identity holds by construction.
            assert_eq!(s.e_bar(), s.q + s.e0 - 1.0);
        }
    }

    #[test]
    fn event_refinement_self_consistency() {
        // A characteristic chosen to cross q = 0 quickly; re-integration
        // at dtheta/10 up to theta* must land on |q| < 1e-10.
        let init = CharacteristicState::initial(0.0, 0.0, 0.3, -0.2, 0.9);
        let traj = integrate_characteristic(init, 1e-3, 50.0, 10).unwrap();
        let ev = traj.blowup.expect("expected a q zero-crossing");

        let fine = 1e-4;
        let mut y = [init.rho, init.momentum, init.field, init.p_bar, init.q];
        let n_full = (ev.theta / fine).floor() as usize;
        for _ in 0..n_full {
            y = rk4_step_vec(&y, init.e0, fine);
        }
        let rem = ev.theta - n_full as f64 * fine;
        y = rk4_step_vec(&y, init.e0, rem);
        assert!(
            y[IDX_Q].abs() < 1e-10,
            "q at refined theta*: {}",
            y[IDX_Q]
        );
    }

    #[test]
    fn period_limits_and_monotonicity() {
        assert_eq!(period(2.0, 1e-12).unwrap(), 2.0 * PI);
        let near = period(2.0 + 1e-8, 1e-12).unwrap();
        assert_close(near, 2.0 * PI, 1e-3);
        let mut prev = 2.0 * PI;
        for c in [2.1, 2.5, 3.0, 3.5, 4.0] {
            let t = period(c, 1e-12).unwrap();
            assert!(t > prev, "period not increasing at C = {c}");
            prev = t;
        }
        assert!(period(1.5, 1e-12).is_err());
    }

    #[test]
    fn gauss_legendre_exactness() {
        // Degree-9 polynomial integrated exactly by a 5-node rule.
        let f = |x: f64| 3.0 * x.powi(9) - x.powi(4) + 2.0 * x + 1.0;
        let got = gauss_legendre(&f, -1.0, 1.0, 5);
        assert_close(got, -0.4 + 2.0, 1e-13);
    }
}
