//! L² distances of SRV images, linear SRV interpolation and the elastic
//! metric obtained by pulling back the L² metric through the transform.
//!
//! Piecewise-constant quantities (SRV values) integrate exactly. Node-sampled
//! integrands (the pullback metric) use the trapezoid rule on the curve grid;
//! time derivatives are central differences inside, one-sided at the ends.

use alloc::vec::Vec;

use crate::curve::{srvt, srvt_inverse, trapezoid, CellField, DiscreteCurve, NodeField, SrvCurve, TangentField, ZERO_TOLERANCE};
use crate::error::{Error, Result};
use crate::lie::{self, check_width, ProdAlg, ProdRot};
use crate::math::sqrt;

/// `sqrt(Σ_i Δθ_i ‖q0_i - q1_i‖²)`.
pub fn l2_distance(q0: &SrvCurve, q1: &SrvCurve) -> Result<f64> {
    q0.field().same_shape(q1.field())?;
    Ok(q0.field().lincomb(1.0, q1.field(), -1.0)?.l2_norm())
}

/// Elastic distance of two curves on a common grid.
pub fn curve_distance(c0: &DiscreteCurve, c1: &DiscreteCurve) -> Result<f64> {
    if c0.grid() != c1.grid() {
        return Err(Error::GridMismatch);
    }
    l2_distance(&srvt(c0)?, &srvt(c1)?)
}

/// `(1 - s) q0 + s q1`, failing with `ZeroCrossing` where it vanishes.
pub fn interpolate_srv(q0: &SrvCurve, q1: &SrvCurve, s: f64) -> Result<SrvCurve> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange { t: s });
    }
    let mixed = q0.field().lincomb(1.0 - s, q1.field(), s)?;
    SrvCurve::from_field(mixed).map_err(|e| match e {
        Error::ZeroValue { segment } => Error::ZeroCrossing { segment },
        other => other,
    })
}

/// Geodesic in SRV space between two curves, reconstructed from the identity.
pub fn interpolate(c0: &DiscreteCurve, c1: &DiscreteCurve, s: f64) -> Result<DiscreteCurve> {
    if c0.grid() != c1.grid() {
        return Err(Error::GridMismatch);
    }
    srvt_inverse(&interpolate_srv(&srvt(c0)?, &srvt(c1)?, s)?)
}

/// Like [`interpolate`], but values with norm below `ZERO_TOLERANCE` are replaced
/// by `eps` times the unit direction of the endpoint with the larger weight.
pub fn interpolate_nudged(c0: &DiscreteCurve, c1: &DiscreteCurve, s: f64, eps: f64) -> Result<DiscreteCurve> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("nudge epsilon must be positive"));
    }
    if c0.grid() != c1.grid() {
        return Err(Error::GridMismatch);
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange { t: s });
    }
    let (q0, q1) = (srvt(c0)?, srvt(c1)?);
    let mixed = q0.field().lincomb(1.0 - s, q1.field(), s)?;
    let values = mixed
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            if v.norm() > ZERO_TOLERANCE {
                v.clone()
            } else {
                let anchor = if s <= 0.5 { &q0.values()[i] } else { &q1.values()[i] };
                anchor.scale(eps / anchor.norm())
            }
        })
        .collect();
    srvt_inverse(&SrvCurve::new(q0.grid().to_vec(), values)?)
}

/// Right-logarithmic derivative sampled at the nodes: `η_0` and `η_{n-1}` at
/// the ends, the spacing-weighted mean of the adjacent `η` inside.
pub fn node_log_derivative(c: &DiscreteCurve) -> Result<NodeField> {
    let eta = c.log_derivative()?;
    let grid = c.grid();
    let n = c.segments();
    let e = eta.values();
    let mut values = Vec::with_capacity(n + 1);
    values.push(e[0].clone());
    for i in 1..n {
        let (hl, hr) = (grid[i] - grid[i - 1], grid[i + 1] - grid[i]);
        values.push(e[i - 1].lincomb(hl / (hl + hr), &e[i], hr / (hl + hr)));
    }
    values.push(e[n - 1].clone());
    NodeField::new(grid.to_vec(), values)
}

fn check_tangent(c: &DiscreteCurve, v: &TangentField) -> Result<()> {
    if c.grid() != v.grid() {
        return Err(Error::GridMismatch);
    }
    check_width(c.width(), v.width())
}

fn node_derivative(grid: &[f64], values: &[ProdAlg]) -> Vec<ProdAlg> {
    let n = grid.len() - 1;
    (0..=n)
        .map(|i| {
            let (lo, hi) = (i.saturating_sub(1), (i + 1).min(n));
            values[hi].lincomb(1.0, &values[lo], -1.0).scale(1.0 / (grid[hi] - grid[lo]))
        })
        .collect()
}

fn bracket_field(a: &ProdAlg, b: &ProdAlg) -> ProdAlg {
    ProdAlg(a.parts().iter().zip(b.parts()).map(|(&x, &y)| lie::bracket(x, y)).collect())
}

fn tangent_log_derivative_with(c_delta: &NodeField, v: &TangentField) -> NodeField {
    let dv = node_derivative(v.grid(), v.values());
    let values = dv
        .iter()
        .zip(v.values())
        .zip(c_delta.values())
        .map(|((d, vi), delta)| d.axpy(1.0, &bracket_field(vi, delta)))
        .collect();
    NodeField::new(v.grid().to_vec(), values).expect("shapes checked by caller")
}

/// Tangent of the right-logarithmic derivative: `d/dt v + [v, δʳc]` at the
/// nodes, with `v` already right-trivialized.
pub fn tangent_log_derivative(c: &DiscreteCurve, v: &TangentField) -> Result<NodeField> {
    check_tangent(c, v)?;
    let delta = node_log_derivative(c)?;
    Ok(tangent_log_derivative_with(&delta, v))
}

// ‖δ‖^{-1/2} z - ½ ‖δ‖^{-5/2} ⟨z, δ⟩ δ
fn srv_tangent_pointwise(z: &ProdAlg, delta: &ProdAlg, node: usize) -> Result<ProdAlg> {
    let nd = delta.norm();
    if nd <= ZERO_TOLERANCE {
        return Err(Error::DegenerateSegment { segment: node.saturating_sub(1) });
    }
    let a = 1.0 / sqrt(nd);
    let b = -0.5 * z.dot(delta) / (nd * nd * sqrt(nd));
    Ok(z.lincomb(a, delta, b))
}

/// Tangent map of the SRV transform at `c` in direction `v`, node-sampled.
pub fn srvt_tangent(c: &DiscreteCurve, v: &TangentField) -> Result<NodeField> {
    check_tangent(c, v)?;
    let delta = node_log_derivative(c)?;
    let z = tangent_log_derivative_with(&delta, v);
    let values = z
        .values()
        .iter()
        .zip(delta.values())
        .enumerate()
        .map(|(i, (zi, di))| srv_tangent_pointwise(zi, di, i))
        .collect::<Result<Vec<_>>>()?;
    NodeField::new(c.grid().to_vec(), values)
}

/// The elastic (pullback) metric `G_c(v, w)`, trapezoid rule on the nodes.
pub fn pullback_metric(c: &DiscreteCurve, v: &TangentField, w: &TangentField) -> Result<f64> {
    check_tangent(c, v)?;
    check_tangent(c, w)?;
    let delta = node_log_derivative(c)?;
    let zv = tangent_log_derivative_with(&delta, v);
    let zw = tangent_log_derivative_with(&delta, w);
    let mut integrand = Vec::with_capacity(delta.values().len());
    for (i, ((dv, dw), d)) in zv.values().iter().zip(zw.values()).zip(delta.values()).enumerate() {
        let speed = d.norm();
        if speed <= ZERO_TOLERANCE {
            return Err(Error::DegenerateSegment { segment: i.saturating_sub(1) });
        }
        // D_s v = z_v / ‖ċ‖, u_c = δ / ‖δ‖, ds = ‖ċ‖ dt, and ‖ċ‖ = ‖δ‖
        let u = d.scale(1.0 / speed);
        let (ds_v, ds_w) = (dv.scale(1.0 / speed), dw.scale(1.0 / speed));
        let (pv, pw) = (ds_v.dot(&u), ds_w.dot(&u));
        let normal = ds_v.axpy(-pv, &u).dot(&ds_w.axpy(-pw, &u));
        integrand.push((0.25 * pv * pw + normal) * speed);
    }
    Ok(trapezoid(c.grid(), &integrand))
}

/// Right-trivialized tangent of `srvt_inverse` at `q` in direction `f`.
///
/// Exact for the discrete reconstruction: with `w_i = Δθ_i ‖q_i‖ q_i`,
/// `v_{i+1} = dexp_{w_i}(dw_i) + Ad_{exp w_i} v_i`, `v_0 = 0`.
pub fn srvt_inverse_tangent(q: &SrvCurve, f: &CellField) -> Result<TangentField> {
    q.field().same_shape(f)?;
    let d = q.width();
    let mut values = Vec::with_capacity(q.grid().len());
    let mut current = ProdAlg::zero(d);
    values.push(current.clone());
    for ((qi, fi), g) in q.values().iter().zip(f.values()).zip(q.grid().windows(2)) {
        let h = g[1] - g[0];
        let nq = qi.norm();
        let dw = fi.lincomb(h * nq, qi, h * fi.dot(qi) / nq);
        let w = qi.scale(h * nq);
        current = ProdAlg(
            (0..d)
                .map(|k| lie::dexp(w[k], dw[k]) + lie::adjoint(&lie::exp(w[k]), current[k]))
                .collect(),
        );
        values.push(current.clone());
    }
    NodeField::new(q.grid().to_vec(), values)
}

/// Length of `t ↦ srvt_inverse((1 - t) q0 + t q1)` under the pullback metric,
/// midpoint rule with `steps` path samples.
pub fn linear_path_length(q0: &SrvCurve, q1: &SrvCurve, steps: usize) -> Result<f64> {
    if steps == 0 {
        return Err(Error::InvalidParameter("path steps must be positive"));
    }
    let direction = q1.field().lincomb(1.0, q0.field(), -1.0)?;
    let mut total = 0.0;
    for k in 0..steps {
        let t = (k as f64 + 0.5) / steps as f64;
        let q = interpolate_srv(q0, q1, t)?;
        let c = srvt_inverse(&q)?;
        let v = srvt_inverse_tangent(&q, &direction)?;
        total += sqrt(pullback_metric(&c, &v, &v)?.max(0.0)) / steps as f64;
    }
    Ok(total)
}

/// Convenience: tangent field equal to `w` at every node.
pub fn constant_tangent(c: &DiscreteCurve, w: &ProdAlg) -> Result<TangentField> {
    check_width(c.width(), w.width())?;
    NodeField::new(c.grid().to_vec(), alloc::vec![w.clone(); c.grid().len()])
}

/// Perturb every node `c̄_i ↦ exp(ε v_i) c̄_i`.
pub fn perturb(c: &DiscreteCurve, v: &TangentField, eps: f64) -> Result<DiscreteCurve> {
    check_tangent(c, v)?;
    let points = c
        .points()
        .iter()
        .zip(v.values())
        .map(|(p, vi)| ProdRot::exp(&vi.scale(eps)).compose_unchecked(p))
        .collect();
    DiscreteCurve::new(c.grid().to_vec(), points)
}
