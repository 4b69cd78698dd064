//! Real-root extraction for the distance polynomials.
//!
//! The collision algebra needs real roots of quadratics (constant velocity)
//! and quartics (constant acceleration) with explicit multiplicity, because a
//! double root means grazing contact and grazing contact is not a collision.
//!
//! Coefficients are normalised by their largest magnitude before any
//! threshold is applied, so results are invariant under uniform coefficient
//! scaling. Closed forms (stable quadratic formula, Ferrari's factorisation
//! through a resolvent cubic) produce candidates; every candidate is then
//! Newton-polished against the original polynomial and near-coincident roots
//! are merged into multiple roots.

use crate::tolerance::Tolerance;
use thiserror::Error;

/// Real roots of a polynomial, ascending, with multiplicities.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RealRoots {
    roots: Vec<(f64, u32)>,
}

impl RealRoots {
    /// `(root, multiplicity)` pairs in ascending root order.
    pub fn roots(&self) -> &[(f64, u32)] {
        &self.roots
    }

    /// Root values without multiplicities.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.roots.iter().map(|&(r, _)| r)
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// Number of distinct roots.
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    /// Sum of multiplicities.
    pub fn total_multiplicity(&self) -> u32 {
        self.roots.iter().map(|&(_, m)| m).sum()
    }

    /// Sorts candidates and merges clusters closer than `eps * (1 + |r|)`.
    fn from_candidates(mut candidates: Vec<f64>, eps: f64) -> Self {
        candidates.sort_by(|a, b| a.total_cmp(b));
        let mut roots: Vec<(f64, u32)> = Vec::with_capacity(candidates.len());
        for r in candidates {
            match roots.last_mut() {
                Some((rep, m)) if (r - *rep).abs() <= eps * (1.0 + rep.abs()) => {
                    // Multiplicity-weighted running mean keeps the merged
                    // representative centred on the cluster.
                    *rep += (r - *rep) / (*m as f64 + 1.0);
                    *m += 1;
                }
                _ => roots.push((r, 1)),
            }
        }
        Self { roots }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RootError {
    #[error("polynomial has a non-finite coefficient")]
    NonFiniteCoefficient,
}

/// Horner evaluation; `coeffs` are highest-degree first.
fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().fold(0.0, |acc, &c| acc * x + c)
}

fn horner_derivative(coeffs: &[f64], x: f64) -> f64 {
    let n = coeffs.len();
    let mut acc = 0.0;
    for (i, &c) in coeffs.iter().take(n - 1).enumerate() {
        let power = (n - 1 - i) as f64;
        acc = acc * x + c * power;
    }
    acc
}

/// A few Newton steps against the original polynomial. Keeps the start value
/// when the iteration stalls or makes the residual worse.
fn newton_polish(coeffs: &[f64], start: f64) -> f64 {
    let mut x = start;
    let mut best = start;
    let mut best_res = horner(coeffs, start).abs();
    for _ in 0..12 {
        let p = horner(coeffs, x);
        let dp = horner_derivative(coeffs, x);
        if dp.abs() <= f64::MIN_POSITIVE * 16.0 {
            break;
        }
        let step = p / dp;
        x -= step;
        if !x.is_finite() {
            return best;
        }
        let res = horner(coeffs, x).abs();
        if res < best_res {
            best_res = res;
            best = x;
        }
        if step.abs() <= f64::EPSILON * (1.0 + x.abs()) {
            break;
        }
    }
    best
}

fn max_abs(coeffs: &[f64]) -> f64 {
    coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
}

/// Real roots of `a t² + b t + c`.
///
/// A discriminant within `±eps_root` of zero (after coefficient
/// normalisation) is reported as one double root: the parabola is treated as
/// tangent. An identically zero polynomial reports no roots.
pub fn solve_quadratic(a: f64, b: f64, c: f64, tol: &Tolerance) -> Result<RealRoots, RootError> {
    if ![a, b, c].iter().all(|x| x.is_finite()) {
        return Err(RootError::NonFiniteCoefficient);
    }
    let scale = max_abs(&[a, b, c]);
    if scale == 0.0 {
        return Ok(RealRoots::default());
    }
    let (a, b, c) = (a / scale, b / scale, c / scale);
    let eps = tol.eps_root;

    if a.abs() <= eps {
        if b.abs() <= eps {
            return Ok(RealRoots::default());
        }
        let r = newton_polish(&[b, c], -c / b);
        return Ok(RealRoots::from_candidates(vec![r], eps));
    }

    let disc = b * b - 4.0 * a * c;
    if disc.abs() <= eps {
        return Ok(RealRoots {
            roots: vec![(-b / (2.0 * a), 2)],
        });
    }
    if disc < 0.0 {
        return Ok(RealRoots::default());
    }
    // Citardauq split avoids cancellation in the smaller root.
    let q = -0.5 * (b + b.signum() * disc.sqrt());
    let coeffs = [a, b, c];
    let r1 = newton_polish(&coeffs, q / a);
    let r2 = newton_polish(&coeffs, c / q);
    Ok(RealRoots::from_candidates(vec![r1, r2], eps))
}

/// Real roots of a monic cubic `u³ + p u² + q u + r`, unpolished.
fn monic_cubic_roots(p: f64, q: f64, r: f64) -> Vec<f64> {
    // Depress: u = y - p/3.
    let shift = p / 3.0;
    let a = q - p * p / 3.0;
    let b = 2.0 * p * p * p / 27.0 - p * q / 3.0 + r;
    let disc = -(4.0 * a * a * a + 27.0 * b * b);
    let mut ys = Vec::with_capacity(3);
    if a.abs() < 1e-300 && b.abs() < 1e-300 {
        ys.push(0.0);
    } else if disc > 0.0 {
        // Three real roots: trigonometric form (a < 0 here).
        let m = 2.0 * (-a / 3.0).sqrt();
        let arg = (3.0 * b / (a * m)).clamp(-1.0, 1.0);
        let theta = arg.acos() / 3.0;
        for k in 0..3 {
            ys.push(m * (theta - 2.0 * std::f64::consts::PI * k as f64 / 3.0).cos());
        }
    } else {
        // One real root: Cardano.
        let half_b = b / 2.0;
        let inner = half_b * half_b + a * a * a / 27.0;
        if inner >= 0.0 {
            let s = inner.sqrt();
            ys.push((-half_b + s).cbrt() + (-half_b - s).cbrt());
        } else {
            // Rounding pushed a borderline triple-real case here; recover the
            // dominant real root trigonometrically.
            let m = 2.0 * (-a / 3.0).sqrt();
            let arg = (3.0 * b / (a * m)).clamp(-1.0, 1.0);
            ys.push(m * (arg.acos() / 3.0).cos());
        }
    }
    ys.iter().map(|y| y - shift).collect()
}

/// Real roots of `a t⁴ + b t³ + c t² + d t + e`, with multiplicity.
///
/// Degrades gracefully: a vanishing leading coefficient (relative to the
/// largest coefficient) routes to the cubic/quadratic path, so quartic and
/// quadratic results agree on shared inputs. Candidates come from Ferrari's
/// factorisation into two quadratics via a resolvent cubic (or the
/// biquadratic shortcut when the depressed cubic term vanishes), then get
/// Newton-polished and multiplicity-merged.
pub fn solve_quartic(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
    tol: &Tolerance,
) -> Result<RealRoots, RootError> {
    if ![a, b, c, d, e].iter().all(|x| x.is_finite()) {
        return Err(RootError::NonFiniteCoefficient);
    }
    let scale = max_abs(&[a, b, c, d, e]);
    if scale == 0.0 {
        return Ok(RealRoots::default());
    }
    let (a, b, c, d, e) = (a / scale, b / scale, c / scale, d / scale, e / scale);
    let eps = tol.eps_root;

    if a.abs() <= eps {
        if b.abs() <= eps {
            return solve_quadratic(c, d, e, tol);
        }
        // Cubic: monic form, polish against the cubic itself.
        let coeffs = [b, c, d, e];
        let candidates = monic_cubic_roots(c / b, d / b, e / b)
            .into_iter()
            .map(|r| newton_polish(&coeffs, r))
            .collect();
        return Ok(RealRoots::from_candidates(candidates, eps));
    }

    // Monic, then depressed: t = y - p/4 turns t⁴+pt³+qt²+rt+s into
    // y⁴ + al·y² + be·y + ga.
    let (p, q, r, s) = (b / a, c / a, d / a, e / a);
    let shift = p / 4.0;
    let p2 = p * p;
    let al = q - 3.0 * p2 / 8.0;
    let be = r - p * q / 2.0 + p2 * p / 8.0;
    let ga = s - p * r / 4.0 + p2 * q / 16.0 - 3.0 * p2 * p2 / 256.0;

    let coeffs = [a, b, c, d, e];
    let mut candidates: Vec<f64> = Vec::with_capacity(4);
    let push_quadratic_roots = |b2: f64, c2: f64, out: &mut Vec<f64>| {
        // Roots of y² + b2·y + c2, with a tangency snap consistent with
        // solve_quadratic's discriminant rule.
        let disc = b2 * b2 - 4.0 * c2;
        if disc.abs() <= eps {
            out.push(-b2 / 2.0);
            out.push(-b2 / 2.0);
        } else if disc > 0.0 {
            let sq = disc.sqrt();
            let q2 = -0.5 * (b2 + b2.signum() * sq);
            if q2 == 0.0 {
                out.push(sq / 2.0);
                out.push(-sq / 2.0);
            } else {
                out.push(q2);
                out.push(c2 / q2);
            }
        }
    };

    if be.abs() <= eps {
        // Biquadratic in y²: z² + al·z + ga.
        let disc = al * al - 4.0 * ga;
        let zs: Vec<f64> = if disc.abs() <= eps {
            vec![-al / 2.0, -al / 2.0]
        } else if disc > 0.0 {
            let sq = disc.sqrt();
            vec![(-al + sq) / 2.0, (-al - sq) / 2.0]
        } else {
            vec![]
        };
        for z in zs {
            if z.abs() <= eps {
                // y² = 0: a double root of y per occurrence of z.
                candidates.push(0.0);
                candidates.push(0.0);
            } else if z > 0.0 {
                candidates.push(z.sqrt());
                candidates.push(-z.sqrt());
            }
        }
    } else {
        // Resolvent cubic 8m³ + 8al·m² + (2al² − 8ga)m − be² = 0 has a
        // positive real root; the largest gives the best-conditioned split.
        let m = monic_cubic_roots(
            al,
            (2.0 * al * al - 8.0 * ga) / 8.0,
            -be * be / 8.0,
        )
        .into_iter()
        .fold(f64::NEG_INFINITY, f64::max);
        let m = m.max(1e-300);
        let w = (2.0 * m).sqrt();
        let base = al / 2.0 + m;
        push_quadratic_roots(w, base - be / (2.0 * w), &mut candidates);
        push_quadratic_roots(-w, base + be / (2.0 * w), &mut candidates);
    }

    let polished = candidates
        .into_iter()
        .map(|y| newton_polish(&coeffs, y - shift))
        .collect();
    Ok(RealRoots::from_candidates(polished, eps))
}

/// Maximal open subintervals of `(lo, hi)` on which `eval` is negative.
///
/// The polynomial's sign is constant between consecutive real roots, so each
/// gap gets classified by one probe evaluation. Adjacent negative gaps are
/// not merged: the root separating them is a grazing touch, and touching
/// splits a collision region in two. `hi` may be infinite.
pub(crate) fn negative_intervals(
    roots: &RealRoots,
    lo: f64,
    hi: f64,
    eval: impl Fn(f64) -> f64,
) -> Vec<(f64, f64)> {
    let mut cuts = Vec::with_capacity(roots.len() + 2);
    cuts.push(lo);
    for r in roots.values() {
        if r > lo && r < hi {
            cuts.push(r);
        }
    }
    cuts.push(hi);
    let mut out = Vec::new();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(a < b) {
            continue;
        }
        let probe = if b.is_finite() {
            0.5 * (a + b)
        } else {
            a + 1.0 + a.abs()
        };
        if eval(probe) < 0.0 {
            out.push((a, b));
        }
    }
    out
}
