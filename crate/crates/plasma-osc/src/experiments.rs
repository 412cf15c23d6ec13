//! Numerical experiments on Gaussian pulse data.
//!
//! Characteristic sweeps are data-parallel over the Lagrangian labels
//! rho0 and are reduced deterministically in label order.  With the
//! `parallel` feature (default) the sweeps run on rayon; without it the
//! same code runs sequentially.

use std::f64::consts::PI;

use crate::certifier::CertSample;
use crate::dynamics::{
    self, first_blowup, rk4_step_vec, CharacteristicState, IDX_E, IDX_P, IDX_PBAR, IDX_Q, IDX_RHO,
};
use crate::error::{PlasmaError, Result};

/// Relative spread below which C(rho) counts as identically constant.
pub const SIMPLE_WAVE_TOL: f64 = 1e-12;

/// Evaluable Cauchy data (P0, E0) with exact analytic derivatives.
pub trait InitialData: Sync {
    fn momentum0(&self, rho: f64) -> f64;
    fn field0(&self, rho: f64) -> f64;
    /// p0 = P0'(rho).
    fn momentum0_deriv(&self, rho: f64) -> f64;
    /// e0 = E0'(rho).
    fn field0_deriv(&self, rho: f64) -> f64;

    fn conserved(&self, rho: f64) -> f64 {
        let p = self.momentum0(rho);
        let e = self.field0(rho);
        2.0 * (1.0 + p * p).sqrt() + e * e
    }

    fn initial_state(&self, rho0: f64) -> CharacteristicState {
        CharacteristicState::initial(
            rho0,
            self.momentum0(rho0),
            self.field0(rho0),
            self.momentum0_deriv(rho0),
            self.field0_deriv(rho0),
        )
    }

    fn cert_sample(&self, rho: f64) -> CertSample {
        CertSample {
            rho,
            p0: self.momentum0_deriv(rho),
            e0: self.field0_deriv(rho),
            c: self.conserved(rho),
        }
    }
}

/// Gaussian laser pulse data:
/// E0 = alpha * rho * exp(-2 rho^2 / rho*^2),
/// P0 = beta  * rho * exp(-2 rho^2 / rho*^2).
#[derive(Debug, Clone, Copy)]
pub struct GaussianPulse {
    pub alpha: f64,
    pub beta: f64,
    pub rho_star: f64,
}

/// Constructs the pulse; `rho_star` must be positive.
pub fn gaussian_pulse(alpha: f64, beta: f64, rho_star: f64) -> Result<GaussianPulse> {
    if !rho_star.is_finite() || rho_star <= 0.0 {
        return Err(PlasmaError::Domain(format!(
            "rho_star must be positive, got {rho_star}"
        )));
    }
    Ok(GaussianPulse {
        alpha,
        beta,
        rho_star,
    })
}

impl GaussianPulse {
    #[inline]
    fn envelope(&self, rho: f64) -> f64 {
        (-2.0 * rho * rho / (self.rho_star * self.rho_star)).exp()
    }

    #[inline]
    fn deriv_factor(&self, rho: f64) -> f64 {
        (1.0 - 4.0 * rho * rho / (self.rho_star * self.rho_star)) * self.envelope(rho)
    }

    /// True when both amplitudes vanish (equilibrium data).
    pub fn is_equilibrium(&self) -> bool {
        self.alpha == 0.0 && self.beta == 0.0
    }
}

impl InitialData for GaussianPulse {
    fn momentum0(&self, rho: f64) -> f64 {
        self.beta * rho * self.envelope(rho)
    }

    fn field0(&self, rho: f64) -> f64 {
        self.alpha * rho * self.envelope(rho)
    }

    fn momentum0_deriv(&self, rho: f64) -> f64 {
        self.beta * self.deriv_factor(rho)
    }

    fn field0_deriv(&self, rho: f64) -> f64 {
        self.alpha * self.deriv_factor(rho)
    }
}

/// Symmetric uniform label grid covering [-half_width, half_width],
/// always including rho = 0.
pub fn label_grid(half_width: f64, d_rho: f64) -> Vec<f64> {
    let n = (half_width / d_rho).round() as i64;
    (-n..=n).map(|i| i as f64 * d_rho).collect()
}

/// Spatial truncation used when a config does not set one: Gaussian
/// tails beyond 4.5 rho* contribute below exp(-40).
pub fn default_half_width(rho_star: f64) -> f64 {
    (4.5 * rho_star).max(10.0)
}

/// True iff the sampled first integral is identically constant, i.e.
/// the data is a simple wave (or the equilibrium).
pub fn detect_simple_wave(c_samples: &[f64]) -> bool {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &c in c_samples {
        lo = lo.min(c);
        hi = hi.max(c);
    }
    hi - lo < SIMPLE_WAVE_TOL * hi.max(1.0)
}

/// Simple-wave check directly on a field over a label grid.
pub fn is_simple_wave(field: &dyn InitialData, labels: &[f64]) -> bool {
    let cs: Vec<f64> = labels.iter().map(|&r| field.conserved(r)).collect();
    detect_simple_wave(&cs)
}

/// Data-parallel map over labels; deterministic output order.
pub mod sweep {
    #[cfg(feature = "parallel")]
    use rayon::prelude::*;

    pub fn map_labels<T, F>(labels: &[f64], f: F) -> Vec<T>
    where
        F: Fn(f64) -> T + Sync,
        T: Send,
    {
        #[cfg(feature = "parallel")]
        {
            labels.par_iter().map(|&r| f(r)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            map_labels_sequential(labels, f)
        }
    }

    /// Sequential reference path, kept available for benchmarks.
    pub fn map_labels_sequential<T, F>(labels: &[f64], f: F) -> Vec<T>
    where
        F: Fn(f64) -> T + Sync,
        T: Send,
    {
        labels.iter().map(|&r| f(r)).collect()
    }
}

/// Grid steps used by a blow-up search.
#[derive(Debug, Clone, Copy)]
pub struct GridUsed {
    pub d_rho_coarse: f64,
    pub d_rho_fine: f64,
    pub d_theta: f64,
}

/// Outcome of the global blow-up search.
#[derive(Debug, Clone)]
pub struct BlowupReport {
    /// First q zero-crossing time over all characteristics, or None if
    /// no blow-up occurred before the horizon.
    pub t_br: Option<f64>,
    /// Eulerian blow-up location(s); a symmetric pair for odd data.
    pub rho_br: Vec<f64>,
    /// Lagrangian label(s) of the first-breaking characteristic(s).
    pub rho0_star: Vec<f64>,
    pub refined: bool,
    pub grid_used: GridUsed,
}

fn scan_events(
    field: &dyn InitialData,
    labels: &[f64],
    d_theta: f64,
    theta_cap: f64,
) -> Result<Vec<Option<dynamics::BlowupEvent>>> {
    let results = sweep::map_labels(labels, |rho0| {
        first_blowup(field.initial_state(rho0), d_theta, theta_cap)
    });
    results.into_iter().collect()
}

fn argmin_event(events: &[Option<dynamics::BlowupEvent>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, ev) in events.iter().enumerate() {
        if let Some(ev) = ev {
            if best.is_none_or(|b| ev.theta < events[b].as_ref().unwrap().theta) {
                best = Some(i);
            }
        }
    }
    best
}

/// Two-stage search for the first singularity: a coarse scan over the
/// full domain brackets the minimizing label, a local fine scan plus a
/// parabolic fit over the three smallest neighbors refines it, and the
/// winning characteristic is re-integrated to read off (T_br, rho_br).
/// Odd data produces a symmetric label pair, which is reported as such.
pub fn find_blowup(
    field: &dyn InitialData,
    domain_half_width: f64,
    d_rho_coarse: f64,
    d_rho_fine: f64,
    d_theta: f64,
    theta_cap: f64,
) -> Result<BlowupReport> {
    let grid_used = GridUsed {
        d_rho_coarse,
        d_rho_fine,
        d_theta,
    };
    let coarse = label_grid(domain_half_width, d_rho_coarse);
    if is_simple_wave(field, &coarse) {
        return Err(PlasmaError::SimpleWave);
    }

    let coarse_events = scan_events(field, &coarse, d_theta, theta_cap)?;
    let Some(ci) = argmin_event(&coarse_events) else {
        return Ok(BlowupReport {
            t_br: None,
            rho_br: Vec::new(),
            rho0_star: Vec::new(),
            refined: false,
            grid_used,
        });
    };

    // Local fine rescan over +-10 coarse cells around the coarse argmin.
    let center = coarse[ci];
    let half_cells = (10.0 * d_rho_coarse / d_rho_fine).round() as i64;
    let fine: Vec<f64> = (-half_cells..=half_cells)
        .map(|i| center + i as f64 * d_rho_fine)
        .collect();
    let fine_events = scan_events(field, &fine, d_theta, theta_cap)?;
    let fi = argmin_event(&fine_events).expect("fine scan lost the event");

    // Parabolic fit of theta*(rho0) through the minimum and neighbors.
    let rho0_star = if fi > 0 && fi + 1 < fine.len() {
        match (&fine_events[fi - 1], &fine_events[fi], &fine_events[fi + 1]) {
            (Some(a), Some(b), Some(c)) => {
                let denom = a.theta - 2.0 * b.theta + c.theta;
                if denom.abs() > 0.0 {
                    fine[fi] + 0.5 * d_rho_fine * (a.theta - c.theta) / denom
                } else {
                    fine[fi]
                }
            }
            _ => fine[fi],
        }
    } else {
        fine[fi]
    };

    let ev = first_blowup(field.initial_state(rho0_star), d_theta, theta_cap)?
        .expect("refined label lost the event");

    // Odd data breaks at a symmetric pair of labels.
    let mut rho_br = vec![ev.rho];
    let mut labels = vec![rho0_star];
    if rho0_star.abs() > d_rho_fine {
        if let Some(mirror) = first_blowup(field.initial_state(-rho0_star), d_theta, theta_cap)? {
            if (mirror.theta - ev.theta).abs() < 1e-6 {
                rho_br.push(mirror.rho);
                labels.push(mirror.rho0);
            }
        }
    }
    Ok(BlowupReport {
        t_br: Some(ev.theta),
        rho_br,
        rho0_star: labels,
        refined: true,
        grid_used,
    })
}

/// One sample of the condition-dynamics series.
#[derive(Debug, Clone, Copy)]
pub struct PhiSample {
    pub theta: f64,
    pub phi_min: f64,
    pub argmin_rho0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignDirection {
    PositiveToNegative,
    NegativeToPositive,
}

#[derive(Debug, Clone, Copy)]
pub struct SignChange {
    pub theta: f64,
    pub direction: SignDirection,
}

/// Time evolution of the order-n sufficient condition re-evaluated on
/// the current state of every characteristic.
#[derive(Debug, Clone)]
pub struct ConditionDynamics {
    pub n: u32,
    pub series: Vec<PhiSample>,
    pub sign_changes: Vec<SignChange>,
    /// First positive-to-negative transition (necessarily following any
    /// initial negative episode), if any.
    pub theta_n: Option<f64>,
    /// Predicted smoothness horizon theta_n + n*pi.
    pub t_n_sm: Option<f64>,
}

/// One sample of the density diagnostics.
#[derive(Debug, Clone, Copy)]
pub struct DensitySample {
    pub theta: f64,
    /// N interpolated at rho = 0.
    pub at_origin: f64,
    pub max: f64,
    pub rho_at_max: f64,
    /// Trapezoid of (N - 1) over the reconstructed profile.
    pub excess_charge: f64,
}

pub type DensitySeries = Vec<DensitySample>;

/// One row of an Eulerian snapshot, sorted by current position.
#[derive(Debug, Clone, Copy)]
pub struct ProfileRow {
    pub rho: f64,
    pub momentum: f64,
    pub field: f64,
    pub p: f64,
    pub e: f64,
    pub density: f64,
}

/// Everything a synchronized sweep can produce in one pass.
#[derive(Debug, Clone)]
pub struct SweepDiagnostics {
    pub dynamics: Vec<ConditionDynamics>,
    pub density: Option<DensitySeries>,
    pub profiles: Vec<(f64, Vec<ProfileRow>)>,
    /// Earliest q zero-crossing seen during the sweep.
    pub first_death: Option<f64>,
}

/// Sampling cadence of the diagnostics series, in integration steps.
pub const OUTPUT_EVERY: usize = 10;

struct SweepChar {
    y: [f64; 5],
    rho0: f64,
    e0: f64,
    k_minus: f64,
    alive: bool,
    death_theta: f64,
}

fn advance_block(chars: &mut [SweepChar], d_theta: f64, steps: usize, theta_base: f64) {
    let step_char = |ch: &mut SweepChar| {
        if !ch.alive {
            return;
        }
        for s in 0..steps {
            let y_prev = ch.y;
            ch.y = rk4_step_vec(&y_prev, ch.e0, d_theta);
            if ch.y[IDX_Q] <= 0.0 {
                // Local bisection inside the step is enough here; the
                // global search refines events to full accuracy.
                let mut lo = 0.0;
                let mut hi = d_theta;
                for _ in 0..30 {
                    let m = 0.5 * (lo + hi);
                    if rk4_step_vec(&y_prev, ch.e0, m)[IDX_Q] > 0.0 {
                        lo = m;
                    } else {
                        hi = m;
                    }
                }
                ch.alive = false;
                ch.death_theta = theta_base + s as f64 * d_theta + 0.5 * (lo + hi);
                ch.y = y_prev;
                return;
            }
        }
    };
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        chars.par_iter_mut().for_each(step_char);
    }
    #[cfg(not(feature = "parallel"))]
    {
        chars.iter_mut().for_each(step_char);
    }
}

fn sign_changes_of(series: &[PhiSample]) -> Vec<SignChange> {
    let mut out = Vec::new();
    for w in series.windows(2) {
        let (a, b) = (w[0], w[1]);
        if a.phi_min > 0.0 && b.phi_min <= 0.0 {
            let t = a.theta + (b.theta - a.theta) * a.phi_min / (a.phi_min - b.phi_min);
            out.push(SignChange {
                theta: t,
                direction: SignDirection::PositiveToNegative,
            });
        } else if a.phi_min <= 0.0 && b.phi_min > 0.0 {
            let t = a.theta + (b.theta - a.theta) * a.phi_min / (a.phi_min - b.phi_min);
            out.push(SignChange {
                theta: t,
                direction: SignDirection::NegativeToPositive,
            });
        }
    }
    out
}

/// Synchronized sweep over a label grid producing, in a single pass,
/// the condition-dynamics series for each requested n, the density
/// series, and Eulerian snapshots at the requested times.
///
/// The condition series is recorded while all characteristics are
/// alive, i.e. strictly before the first blow-up.
pub fn sweep_diagnostics(
    field: &dyn InitialData,
    labels: &[f64],
    d_theta: f64,
    theta_cap: f64,
    n_list: &[u32],
    snapshots: &[f64],
    want_density: bool,
) -> Result<SweepDiagnostics> {
    if labels.len() < 2 {
        return Err(PlasmaError::Usage("sweep requires at least 2 labels".into()));
    }
    let mut chars: Vec<SweepChar> = labels
        .iter()
        .map(|&rho0| {
            let s = field.initial_state(rho0);
            let c = s.conserved();
            SweepChar {
                y: [s.rho, s.momentum, s.field, s.p_bar, s.q],
                rho0,
                e0: s.e0,
                k_minus: 8.0 / (c * c * c),
                alive: true,
                death_theta: f64::INFINITY,
            }
        })
        .collect();

    let d_out = OUTPUT_EVERY as f64 * d_theta;
    let n_out = (theta_cap / d_out).floor() as usize;
    let mut phi_series: Vec<Vec<PhiSample>> = n_list.iter().map(|_| Vec::new()).collect();
    let mut density: DensitySeries = Vec::new();
    let mut profiles: Vec<(f64, Vec<ProfileRow>)> = Vec::new();
    let mut first_death: Option<f64> = None;

    for out_idx in 0..=n_out {
        let theta = out_idx as f64 * d_out;
        if out_idx > 0 {
            advance_block(&mut chars, d_theta, OUTPUT_EVERY, theta - d_out);
            for ch in &chars {
                if !ch.alive && ch.death_theta < first_death.unwrap_or(f64::INFINITY) {
                    first_death = Some(ch.death_theta);
                }
            }
        }
        let all_alive = chars.iter().all(|c| c.alive);

        if all_alive {
            for (slot, &n) in n_list.iter().enumerate() {
                let mut best = f64::INFINITY;
                let mut best_rho0 = labels[0];
                for (ch, &rho0) in chars.iter().zip(labels.iter()) {
                    let q = ch.y[IDX_Q];
                    let e = (q + ch.e0 - 1.0) / q;
                    let p = ch.y[IDX_PBAR] / q;
                    let km = ch.k_minus;
                    let one_me = 1.0 - e;
                    let phi = km.powi(n as i32 - 1) * one_me * one_me - e * e / km - p * p;
                    if phi < best {
                        best = phi;
                        best_rho0 = rho0;
                    }
                }
                phi_series[slot].push(PhiSample {
                    theta,
                    phi_min: best,
                    argmin_rho0: best_rho0,
                });
            }
        }

        if want_density {
            density.push(density_sample(&chars, theta));
        }

        if snapshots
            .iter()
            .any(|&t| (t - theta).abs() < 0.5 * d_out)
        {
            let rows: Vec<ProfileRow> = chars
                .iter()
                .filter(|c| c.alive)
                .map(|ch| {
                    let q = ch.y[IDX_Q];
                    let e = (q + ch.e0 - 1.0) / q;
                    ProfileRow {
                        rho: ch.y[IDX_RHO],
                        momentum: ch.y[IDX_P],
                        field: ch.y[IDX_E],
                        p: ch.y[IDX_PBAR] / q,
                        e,
                        density: 1.0 - e,
                    }
                })
                .collect();
            profiles.push((theta, rows));
        }
    }

    let dynamics = n_list
        .iter()
        .enumerate()
        .map(|(slot, &n)| {
            let series = std::mem::take(&mut phi_series[slot]);
            let sign_changes = sign_changes_of(&series);
            let theta_n = sign_changes
                .iter()
                .find(|s| s.direction == SignDirection::PositiveToNegative)
                .map(|s| s.theta);
            ConditionDynamics {
                n,
                t_n_sm: theta_n.map(|t| t + n as f64 * PI),
                theta_n,
                series,
                sign_changes,
            }
        })
        .collect();

    Ok(SweepDiagnostics {
        dynamics,
        density: want_density.then_some(density),
        profiles,
        first_death,
    })
}

fn density_sample(chars: &[SweepChar], theta: f64) -> DensitySample {
    let mut max = f64::NEG_INFINITY;
    let mut rho_at_max = f64::NAN;
    let mut excess = 0.0;
    let mut prev: Option<(f64, f64, f64, f64)> = None;
    let mut below: Option<(f64, f64)> = None;
    let mut above: Option<(f64, f64)> = None;
    for ch in chars {
        if !ch.alive {
            prev = None;
            continue;
        }
        let rho = ch.y[IDX_RHO];
        let q = ch.y[IDX_Q];
        let n = 1.0 - (q + ch.e0 - 1.0) / q;
        // (N - 1) d_rho = ((1 - e0) - q) d_rho0: the label-space
        // integrand stays smooth up to blow-up, unlike N itself.
        let f = (1.0 - ch.e0) - q;
        if n > max {
            max = n;
            rho_at_max = rho;
        }
        if let Some((rp, np, r0p, fp)) = prev {
            excess += 0.5 * (ch.rho0 - r0p) * (f + fp);
            if rp <= 0.0 && rho > 0.0 && below.is_none() {
                below = Some((rp, np));
                above = Some((rho, n));
            }
        }
        prev = Some((rho, n, ch.rho0, f));
    }
    let at_origin = match (below, above) {
        (Some((r0, n0)), Some((r1, n1))) => {
            if r0 == 0.0 {
                n0
            } else {
                n0 + (n1 - n0) * (0.0 - r0) / (r1 - r0)
            }
        }
        _ => f64::NAN,
    };
    DensitySample {
        theta,
        at_origin,
        max,
        rho_at_max,
        excess_charge: excess,
    }
}

/// Condition-dynamics series for a single n (see `sweep_diagnostics`).
pub fn condition_dynamics(
    field: &dyn InitialData,
    labels: &[f64],
    d_theta: f64,
    n: u32,
    theta_cap: f64,
) -> Result<ConditionDynamics> {
    let mut diag = sweep_diagnostics(field, labels, d_theta, theta_cap, &[n], &[], false)?;
    Ok(diag.dynamics.remove(0))
}

/// Density series (origin, domain maximum, excess charge) over time.
pub fn density_diagnostics(
    field: &dyn InitialData,
    labels: &[f64],
    d_theta: f64,
    theta_cap: f64,
) -> Result<DensitySeries> {
    let diag = sweep_diagnostics(field, labels, d_theta, theta_cap, &[], &[], true)?;
    Ok(diag.density.unwrap())
}

/// Eulerian snapshot (rho, P, E, p, e, N) at `theta_snapshot`, sorted by
/// current position.
pub fn eulerian_profiles(
    field: &dyn InitialData,
    labels: &[f64],
    d_theta: f64,
    theta_snapshot: f64,
) -> Result<Vec<ProfileRow>> {
    let mut diag = sweep_diagnostics(
        field,
        labels,
        d_theta,
        theta_snapshot + d_theta,
        &[],
        &[theta_snapshot],
        false,
    )?;
    if diag.profiles.is_empty() {
        return Err(PlasmaError::Usage(format!(
            "snapshot time {theta_snapshot} was not reached"
        )));
    }
    Ok(diag.profiles.remove(0).1)
}
