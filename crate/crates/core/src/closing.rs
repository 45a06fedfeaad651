//! Closing open curves: gradient descent on `Φ(q) = ½‖log r(q)‖²`, where
//! `r(q)` is the endpoint of the curve reconstructed from `q`.
//!
//! The gradient is the exact gradient of the discrete functional with
//! respect to `⟨f, g⟩ = Σ h_i ⟨f_i, g_i⟩`. With `w_i = h_i ‖q_i‖ q_i`,
//! `u = log r` and `x = dexpinv†_u(u)`, the covector on cell `i` is
//! `β_i = dexp_{w_i}(Ad_{c_i r⁻¹} x)` and
//! `grad_i = ‖q_i‖ β_i + ⟨β_i, q_i⟩ q_i / ‖q_i‖`.
//! Dropping the `dexp_{w_i}` factor gives the left-node rule of the
//! continuous formula, which agrees to first order in the grid spacing.

use alloc::vec::Vec;

use crate::curve::{srvt_inverse, CellField, SrvCurve};
use crate::error::{Error, Result};
use crate::lie::{self, AlgVec3, ProdAlg, ProdRot};

/// Endpoint `r(q)` of the reconstructed curve.
pub fn endpoint(q: &SrvCurve) -> Result<ProdRot> {
    let c = srvt_inverse(q)?;
    Ok(c.points()[c.points().len() - 1].clone())
}

/// `½ Σ_k ‖log r_k‖²`.
pub fn phi_functional(q: &SrvCurve) -> Result<f64> {
    Ok(0.5 * endpoint(q)?.log()?.norm_squared())
}

/// Which form of the gradient to assemble.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum GradientMode {
    /// Uses `dexpinv†_{log r}(log r)`; valid on any group with an inner product.
    #[default]
    General,
    /// Uses `log r` directly, relying on `ad` being skew.
    Semisimple,
}

/// Gradient of [`phi_functional`] as a field on `q`'s cells.
pub fn closing_gradient(q: &SrvCurve, mode: GradientMode) -> Result<CellField> {
    let c = srvt_inverse(q)?;
    let points = c.points();
    let r = &points[points.len() - 1];
    let u = r.log()?;
    let x = match mode {
        GradientMode::General => ProdAlg(
            u.parts()
                .iter()
                .map(|&uk| lie::dexpinv_dagger(uk, uk))
                .collect::<Result<Vec<AlgVec3>>>()?,
        ),
        GradientMode::Semisimple => u,
    };
    // r⁻¹ x, then rotate into each cell's frame
    let back: Vec<AlgVec3> = x.parts().iter().zip(r.parts()).map(|(&xk, rk)| lie::adjoint_dagger(rk, xk)).collect();
    let values = q
        .values()
        .iter()
        .zip(q.steps())
        .zip(points)
        .map(|((qi, wi), ci)| {
            let beta = ProdAlg(
                back.iter()
                    .zip(ci.parts())
                    .zip(wi.parts())
                    .map(|((&b, ck), &wk)| lie::dexp(wk, lie::adjoint(ck, b)))
                    .collect(),
            );
            let norm = qi.norm();
            beta.lincomb(norm, qi, beta.dot(qi) / norm)
        })
        .collect();
    CellField::new(q.grid().to_vec(), values)
}

/// Parameters of [`close_curve`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClosingOptions {
    /// Base step `α`; the applied step is `α / (1 + ‖grad‖)`.
    pub step: f64,
    pub max_iters: usize,
    /// Stop once `Φ < tol`.
    pub tol: f64,
    /// Armijo backtracking (`c₁ = 1e-4`, halving, at most 20 halvings).
    pub line_search: bool,
    pub mode: GradientMode,
}

impl Default for ClosingOptions {
    fn default() -> Self {
        ClosingOptions { step: 0.1, max_iters: 200, tol: 1e-8, line_search: false, mode: GradientMode::General }
    }
}

/// Outcome of [`close_curve`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClosingReport {
    /// Accepted descent steps.
    pub iterations: usize,
    /// `Φ` of the input followed by `Φ` after each accepted step.
    pub phi_history: Vec<f64>,
    pub final_q: SrvCurve,
    pub converged: bool,
}

const ARMIJO_C1: f64 = 1e-4;
const MAX_HALVINGS: usize = 20;
const MAX_INCREASES: usize = 5;

fn descend(q: &SrvCurve, grad: &CellField, alpha: f64) -> Result<SrvCurve> {
    SrvCurve::from_field(q.field().lincomb(1.0, grad, -alpha)?)
}

/// Explicit gradient descent toward a closed curve.
pub fn close_curve(q: &SrvCurve, options: &ClosingOptions) -> Result<ClosingReport> {
    if !(options.step > 0.0 && options.step.is_finite()) {
        return Err(Error::InvalidParameter("step must be positive"));
    }
    if !(options.tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive"));
    }
    let mut current = q.clone();
    let mut phi = phi_functional(&current)?;
    let mut history = alloc::vec![phi];
    let mut increases = 0;
    let mut iterations = 0;
    while phi >= options.tol && iterations < options.max_iters {
        let grad = closing_gradient(&current, options.mode)?;
        let gnorm = grad.l2_norm();
        let mut alpha = options.step / (1.0 + gnorm);
        let next = if options.line_search {
            let mut accepted = None;
            for _ in 0..=MAX_HALVINGS {
                let trial = descend(&current, &grad, alpha).and_then(|t| Ok((phi_functional(&t)?, t)));
                if let Ok((value, t)) = trial {
                    if value <= phi - ARMIJO_C1 * alpha * gnorm * gnorm && value < phi {
                        accepted = Some((value, t));
                        break;
                    }
                }
                alpha *= 0.5;
            }
            match accepted {
                Some(step) => step,
                None => {
                    log::debug!("closing: line search stalled at iteration {iterations}, phi = {phi:e}");
                    break;
                }
            }
        } else {
            let t = descend(&current, &grad, alpha)?;
            let value = phi_functional(&t)?;
            if value > phi {
                increases += 1;
                if increases >= MAX_INCREASES {
                    return Err(Error::Diverged { iteration: iterations + 1 });
                }
            } else {
                increases = 0;
            }
            (value, t)
        };
        iterations += 1;
        phi = next.0;
        current = next.1;
        history.push(phi);
        log::trace!("closing: iteration {iterations}, phi = {phi:e}");
    }
    Ok(ClosingReport { iterations, phi_history: history, final_q: current, converged: phi < options.tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{srvt, uniform_grid, DiscreteCurve};
    use core::f64::consts::{FRAC_PI_2, TAU};

    fn constant_srv(v: AlgVec3, n: usize) -> SrvCurve {
        let q = v * (1.0 / v.norm().sqrt());
        SrvCurve::new(uniform_grid(n), alloc::vec![ProdAlg(alloc::vec![q]); n]).unwrap()
    }

    #[test]
    fn full_turn_endpoint_is_identity() {
        let r = endpoint(&constant_srv(AlgVec3::new(0.0, 0.0, TAU), 16)).unwrap();
        assert!(r.distance(&ProdRot::identity(1)).unwrap() < 1e-12);
        assert!(phi_functional(&constant_srv(AlgVec3::new(0.0, TAU, 0.0), 7)).unwrap() < 1e-20);
    }

    #[test]
    fn quarter_turn_endpoint() {
        let v = AlgVec3::new(0.0, FRAC_PI_2, 0.0);
        let r = endpoint(&constant_srv(v, 10)).unwrap();
        assert!(r.distance(&ProdRot(alloc::vec![lie::exp(v)])).unwrap() < 1e-12);
    }

    #[test]
    fn phi_of_small_gap() {
        let q = constant_srv(AlgVec3::new(0.2, 0.0, 0.0), 5);
        assert!((phi_functional(&q).unwrap() - 0.02).abs() < 1e-15);
    }

    #[test]
    fn phi_rejects_half_turn() {
        let q = constant_srv(AlgVec3::new(0.0, 0.0, core::f64::consts::PI), 4);
        assert!(matches!(phi_functional(&q), Err(Error::AngleNearPi { component: Some(0), .. })));
    }

    #[test]
    fn closed_curve_has_zero_gradient_and_stays_put() {
        let q = constant_srv(AlgVec3::new(TAU, 0.0, 0.0), 12);
        for mode in [GradientMode::General, GradientMode::Semisimple] {
            assert!(closing_gradient(&q, mode).unwrap().l2_norm() < 1e-14);
        }
        let report = close_curve(&q, &ClosingOptions::default()).unwrap();
        assert_eq!(report.iterations, 0);
        assert!(report.converged);
        assert_eq!(report.final_q, q);
    }

    #[test]
    fn planar_gap_closes() {
        // a 300° planar turn: the gradient stays in the rotation plane
        let n = 20;
        let points = (0..=n)
            .map(|i| ProdRot(alloc::vec![lie::exp(AlgVec3::new(0.0, 0.0, 5.0 * i as f64 / n as f64 + 0.0))]))
            .collect();
        let c = DiscreteCurve::uniform(points).unwrap();
        let q = srvt(&c).unwrap();
        let opts = ClosingOptions { line_search: true, step: 1.0, ..ClosingOptions::default() };
        let report = close_curve(&q, &opts).unwrap();
        assert!(report.converged, "{:?}", report.phi_history);
        assert!(report.phi_history.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn invalid_options() {
        let q = constant_srv(AlgVec3::new(1.0, 0.0, 0.0), 4);
        assert!(close_curve(&q, &ClosingOptions { step: 0.0, ..ClosingOptions::default() }).is_err());
        assert!(close_curve(&q, &ClosingOptions { tol: f64::NAN, ..ClosingOptions::default() }).is_err());
    }

    #[test]
    fn huge_fixed_step_diverges() {
        let q = constant_srv(AlgVec3::new(0.0, 0.0, 5.0), 8);
        let r = close_curve(&q, &ClosingOptions { step: 1e3, ..ClosingOptions::default() });
        assert!(matches!(r, Err(Error::Diverged { .. }) | Err(Error::AngleNearPi { .. })), "{r:?}");
    }
}
