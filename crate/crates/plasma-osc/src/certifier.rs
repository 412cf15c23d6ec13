//! Smoothness certification.
//!
//! The sufficient condition for smoothness over a horizon of n*pi is
//!
//! ```text
//! inf_rho [ K_-^(n-1) (1-e0)^2 - e0^2/K_- - p0^2 ] > 0,
//! ```
//!
//! with per-characteristic K_- = 8/C^3.  The condition comes from
//! sandwiching the (q, p_bar) phase trajectory between integral curves
//! of the two extreme ellipse families
//!
//! ```text
//! K p_bar^2 + q^2 - 2(1-e0) q = const,   K in {K_-, 1},
//! ```
//!
//! glued where the slope (-q+1-e0)/p_bar changes sign.  `glue_bound`
//! reproduces that construction explicitly; `condn_lhs` is its closed
//! form.

use std::f64::consts::PI;

use crate::error::{PlasmaError, Result};

/// Left-hand side of the order-n sufficient condition,
/// K_-^(n-1) (1-e0)^2 - e0^2/K_- - p0^2.
///
/// For K_- = 1 this collapses, for every n, to the non-relativistic
/// criterion 1 - 2 e0 - p0^2, which is returned in that exact form.
pub fn condn_lhs(p0: f64, e0: f64, k_minus: f64, n: u32) -> Result<f64> {
    if !(k_minus > 0.0 && k_minus <= 1.0) {
        return Err(PlasmaError::Domain(format!(
            "K_- must lie in (0, 1], got {k_minus}"
        )));
    }
    if n < 1 {
        return Err(PlasmaError::Usage("n must be >= 1".into()));
    }
    if k_minus == 1.0 {
        return Ok(1.0 - 2.0 * e0 - p0 * p0);
    }
    let one_me = 1.0 - e0;
    Ok(k_minus.powi(n as i32 - 1) * one_me * one_me - e0 * e0 / k_minus - p0 * p0)
}

/// Non-relativistic smoothness criterion p0^2 + 2 e0 - 1 < 0.
pub fn nonrelativistic_criterion(p0: f64, e0: f64) -> bool {
    p0 * p0 + 2.0 * e0 - 1.0 < 0.0
}

/// Smallest n whose horizon n*pi covers the requested time T.
pub fn required_n(t: f64) -> u32 {
    (t / PI).ceil().max(1.0) as u32
}

/// n = floor(T/pi), the index as stated in the theorem; under-covers T
/// when T/pi is not an integer (see `required_n`).
pub fn floor_n(t: f64) -> u32 {
    ((t / PI).floor() as u32).max(1)
}

/// One data sample for certification: label, derivatives and first
/// integral of the characteristic through it.
#[derive(Debug, Clone, Copy)]
pub struct CertSample {
    pub rho: f64,
    pub p0: f64,
    pub e0: f64,
    pub c: f64,
}

/// Result of the order-n certification over a sample set.
#[derive(Debug, Clone, Copy)]
pub struct Certificate {
    pub n: u32,
    /// Minimum of the condition left-hand side over the samples; this is
    /// also the margin available to the caller.
    pub infimum: f64,
    /// infimum > 0, strictly; no tolerance band is applied.
    pub holds: bool,
    /// Guaranteed smoothness horizon n*pi when `holds`.
    pub horizon: f64,
    pub argmin_rho: f64,
}

/// Evaluates the order-n condition over `samples`, with K_- = 8/C^3
/// taken per sample.  The data must already be screened for the
/// simple-wave degeneracy.
pub fn certify(samples: &[CertSample], n: u32) -> Result<Certificate> {
    if samples.is_empty() {
        return Err(PlasmaError::Usage("certify requires samples".into()));
    }
    let mut infimum = f64::INFINITY;
    let mut argmin_rho = samples[0].rho;
    for s in samples {
        let km = crate::dynamics::k_minus(s.c)?;
        let v = condn_lhs(s.p0, s.e0, km, n)?;
        if v < infimum {
            infimum = v;
            argmin_rho = s.rho;
        }
    }
    Ok(Certificate {
        n,
        infimum,
        holds: infimum > 0.0,
        horizon: n as f64 * PI,
        argmin_rho,
    })
}

/// Which of the two extreme ellipse families an arc belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EllipseFamily {
    /// K = K_-; bounds the arcs that end on the extremum line q = 1-e0.
    KMinus,
    /// K = 1; bounds the arcs that end on the axis p_bar = 0.
    KPlus,
}

/// One glued arc of the bound curve in the (q, p_bar) plane.
#[derive(Debug, Clone, Copy)]
pub struct EllipseArc {
    pub family: EllipseFamily,
    pub k: f64,
    /// Invariant K p_bar^2 + q^2 - 2(1-e0) q of the arc's ellipse.
    pub constant: f64,
    pub start: (f64, f64),
    pub end: (f64, f64),
}

/// Piecewise-ellipse bound of the phase trajectory.
#[derive(Debug, Clone)]
pub struct BoundCurve {
    pub arcs: Vec<EllipseArc>,
    /// q values at the axis crossings entered from the lower half-plane,
    /// in traversal order; these are the only points where q can vanish.
    pub lower_crossings: Vec<f64>,
    pub min_q: f64,
    pub survives: bool,
}

// Clockwise node cycle of the gluing walk.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    RightAxis,
    BottomExtremum,
    LeftAxis,
    TopExtremum,
}

impl Node {
    fn next(self) -> Node {
        match self {
            Node::RightAxis => Node::BottomExtremum,
            Node::BottomExtremum => Node::LeftAxis,
            Node::LeftAxis => Node::TopExtremum,
            Node::TopExtremum => Node::RightAxis,
        }
    }

    fn is_axis(self) -> bool {
        matches!(self, Node::RightAxis | Node::LeftAxis)
    }

    /// Family of the arc that ends at this node.
    fn arriving_family(self) -> EllipseFamily {
        if self.is_axis() {
            EllipseFamily::KPlus
        } else {
            EllipseFamily::KMinus
        }
    }

    fn point(self, center: f64, amplitude: f64) -> (f64, f64) {
        match self {
            Node::RightAxis => (center + amplitude, 0.0),
            Node::BottomExtremum => (center, -amplitude),
            Node::LeftAxis => (center - amplitude, 0.0),
            Node::TopExtremum => (center, amplitude),
        }
    }
}

/// Constructs the glued ellipse bound for the phase trajectory starting
/// at (q, p_bar) = (1, p0), covering `n` half-turns (the horizon n*pi of
/// the order-n condition).  The motion is clockwise around the center
/// (1-e0, 0); arcs ending on the extremum line use the K_- family, arcs
/// ending on the axis use K = 1, so the amplitude grows by 1/sqrt(K_-)
/// per half-turn.  `survives` is true iff every lower-half axis crossing
/// reached within the horizon has q > 0.
pub fn glue_bound(p0: f64, e0: f64, k_minus: f64, n: u32) -> Result<BoundCurve> {
    if !(k_minus > 0.0 && k_minus <= 1.0) {
        return Err(PlasmaError::Domain(format!(
            "K_- must lie in (0, 1], got {k_minus}"
        )));
    }
    if n < 1 {
        return Err(PlasmaError::Usage("n must be >= 1".into()));
    }
    let center = 1.0 - e0;
    if p0 == 0.0 && e0 == 0.0 {
        // Equilibrium data: the trajectory is the single point (1, 0).
        return Ok(BoundCurve {
            arcs: Vec::new(),
            lower_crossings: Vec::new(),
            min_q: 1.0,
            survives: true,
        });
    }

    let invariant = |k: f64, (q, p): (f64, f64)| k * p * p + q * q - 2.0 * center * q;

    // Classify the start point (1, p0), whose offset from the center is
    // (e0, p0), and emit the first (generally partial) arc.  Amplitudes
    // are tracked squared so that the growth over a half-turn pair is a
    // single division by K_-; this keeps the axis-crossing comparison
    // consistent with the squared algebra of the order-n condition in
    // boundary cases where the true margin is at rounding level.
    let start = (1.0, p0);
    // Squared amplitude transported to the first node: to an extremum
    // node along a K_- arc, to an axis node along a K=1 arc.
    let to_extremum2 = p0 * p0 + e0 * e0 / k_minus;
    let to_axis2 = p0 * p0 + e0 * e0;
    let (mut node, mut amp2, first_arc) = if p0 < 0.0 {
        if e0 > 0.0 {
            (Node::BottomExtremum, to_extremum2, true)
        } else {
            // e0 <= 0: below the axis heading left (e0 = 0 starts on
            // the extremum line itself).
            (Node::LeftAxis, to_axis2, true)
        }
    } else if p0 > 0.0 {
        if e0 < 0.0 {
            (Node::TopExtremum, to_extremum2, true)
        } else {
            (Node::RightAxis, to_axis2, true)
        }
    } else if e0 > 0.0 {
        // p0 = 0: start exactly on the axis.
        (Node::RightAxis, e0 * e0, false)
    } else {
        (Node::LeftAxis, e0 * e0, false)
    };

    let mut arcs = Vec::new();
    let mut lower_crossings = Vec::new();
    let mut min_q = 1.0_f64;
    let mut survives = true;
    let mut crossings = 0u32;

    let arrive = |node: Node,
                      amplitude: f64,
                      from: (f64, f64),
                      arcs: &mut Vec<EllipseArc>,
                      lower_crossings: &mut Vec<f64>,
                      min_q: &mut f64,
                      survives: &mut bool,
                      crossings: &mut u32| {
        let family = node.arriving_family();
        let k = match family {
            EllipseFamily::KMinus => k_minus,
            EllipseFamily::KPlus => 1.0,
        };
        let end = node.point(center, amplitude);
        arcs.push(EllipseArc {
            family,
            k,
            constant: invariant(k, from),
            start: from,
            end,
        });
        *min_q = min_q.min(end.0);
        if node.is_axis() {
            *crossings += 1;
            if node == Node::LeftAxis {
                lower_crossings.push(end.0);
                if end.0 <= 0.0 {
                    *survives = false;
                }
            }
        }
        end
    };

    let mut here = start;
    if first_arc {
        here = arrive(
            node,
            amp2.sqrt(),
            here,
            &mut arcs,
            &mut lower_crossings,
            &mut min_q,
            &mut survives,
            &mut crossings,
        );
    }
    while crossings < n {
        let next = node.next();
        if next.arriving_family() == EllipseFamily::KMinus {
            amp2 /= k_minus;
        }
        here = arrive(
            next,
            amp2.sqrt(),
            here,
            &mut arcs,
            &mut lower_crossings,
            &mut min_q,
            &mut survives,
            &mut crossings,
        );
        node = next;
    }

    Ok(BoundCurve {
        arcs,
        lower_crossings,
        min_q,
        survives,
    })
}

/// Number of guaranteed half-horizons pi for small data, from the
/// asymptotic expansion of the order-n condition:
/// n ~ (4/3) (1 - 2 e0) / (E0^2 e0).
pub fn asymptotic_turns(field0: f64, e0: f64) -> Result<f64> {
    if !field0.is_finite() || !e0.is_finite() {
        return Err(PlasmaError::NonFinite("asymptotic inputs"));
    }
    if field0 == 0.0 {
        return Err(PlasmaError::Domain("E0 must be nonzero".into()));
    }
    if e0 <= 0.0 {
        return Err(PlasmaError::Domain(format!(
            "e0 must be positive, got {e0}"
        )));
    }
    Ok(4.0 / 3.0 * (1.0 - 2.0 * e0) / (field0 * field0 * e0))
}

/// Order-of-magnitude estimate of the breakup time,
/// theta_br ~ 1 / (E0^2 (1 - N0)).  Not a prediction.
pub fn breakup_order(field0: f64, density0: f64) -> Result<f64> {
    if !field0.is_finite() || !density0.is_finite() {
        return Err(PlasmaError::NonFinite("breakup inputs"));
    }
    if field0 == 0.0 || density0 == 1.0 {
        return Err(PlasmaError::Domain(
            "breakup order undefined for E0 = 0 or N0 = 1".into(),
        ));
    }
    Ok(1.0 / (field0 * field0 * (1.0 - density0)))
}
