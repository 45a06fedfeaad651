//! Discrete curves on `SO(3)^d` and their square-root-velocity transform.
//!
//! A [`DiscreteCurve`] is a grid `0 = θ_0 < … < θ_n = 1` with one point per
//! node; between nodes it follows the geodesic
//! `exp(s · log(c̄_{k+1} c̄_kᵀ)) c̄_k`. Segments are half-open
//! `[θ_k, θ_{k+1})`, the last one closed.
//!
//! The SRV transform of such a curve is piecewise constant: one value per
//! segment, `q̄_i = η_i / sqrt(‖η_i‖)` with
//! `η_i = log(c̄_{i+1} c̄_iᵀ) / (θ_{i+1} - θ_i)`. The inverse rebuilds the
//! curve from the identity with `c̄_{i+1} = exp(Δθ_i ‖q̄_i‖ q̄_i) c̄_i`, so
//! `srvt_inverse(srvt(c)) == base_at_identity(c)` on any grid.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::{self, check_width, ProdAlg, ProdRot, Rot3};
use crate::math::sqrt;

/// Values with norm at or below this are treated as zero.
pub const ZERO_TOLERANCE: f64 = 1e-12;

/// Uniform grid with `n` cells; the last node is exactly 1.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

fn validate_grid(grid: &[f64]) -> Result<()> {
    if grid.len() < 2 || grid[0] != 0.0 || grid[grid.len() - 1] != 1.0 {
        return Err(Error::InvalidGrid);
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidGrid);
    }
    Ok(())
}

/// Index `k` of the segment `[θ_k, θ_{k+1})` containing `t` (last segment closed).
fn segment_index(grid: &[f64], t: f64) -> usize {
    let n = grid.len() - 1;
    grid.partition_point(|&x| x <= t).saturating_sub(1).min(n - 1)
}

/// A piecewise-geodesic curve sampled on a grid of `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteCurve {
    grid: Vec<f64>,
    points: Vec<ProdRot>,
}

impl DiscreteCurve {
    pub fn new(grid: Vec<f64>, points: Vec<ProdRot>) -> Result<Self> {
        validate_grid(&grid)?;
        if points.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), found: points.len() });
        }
        let width = points[0].width();
        if width == 0 {
            return Err(Error::InvalidParameter("curve points must have at least one component"));
        }
        for p in &points {
            check_width(width, p.width())?;
        }
        Ok(DiscreteCurve { grid, points })
    }

    /// Points on the uniform grid `θ_i = i / n`.
    pub fn uniform(points: Vec<ProdRot>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::InvalidGrid);
        }
        DiscreteCurve::new(uniform_grid(points.len() - 1), points)
    }

    /// Single-factor convenience constructor.
    pub fn from_rotations(grid: Vec<f64>, rotations: Vec<Rot3>) -> Result<Self> {
        DiscreteCurve::new(grid, rotations.into_iter().map(|r| ProdRot(alloc::vec![r])).collect())
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn points(&self) -> &[ProdRot] {
        &self.points
    }

    pub fn into_points(self) -> Vec<ProdRot> {
        self.points
    }

    /// Product width `d`.
    pub fn width(&self) -> usize {
        self.points[0].width()
    }

    /// Number of segments `n`.
    pub fn segments(&self) -> usize {
        self.grid.len() - 1
    }

    /// Right increments `log(c̄_{i+1} c̄_iᵀ)`, one per segment.
    pub fn increments(&self) -> Result<Vec<ProdAlg>> {
        self.points
            .windows(2)
            .enumerate()
            .map(|(i, w)| w[1].right_delta(&w[0]).log().map_err(|e| e.at_segment(i)))
            .collect()
    }

    /// Discrete right-logarithmic derivative `η_i`.
    pub fn log_derivative(&self) -> Result<CellField> {
        let values = self
            .increments()?
            .into_iter()
            .zip(self.grid.windows(2))
            .map(|(inc, w)| inc.scale(1.0 / (w[1] - w[0])))
            .collect();
        Ok(CellField { grid: self.grid.clone(), values })
    }

    /// Fails with `DegenerateSegment` at the first segment with zero increment.
    pub fn check_immersion(&self) -> Result<()> {
        for (i, inc) in self.increments()?.iter().enumerate() {
            if inc.norm() <= ZERO_TOLERANCE {
                return Err(Error::DegenerateSegment { segment: i });
            }
        }
        Ok(())
    }

    /// Right-multiply every point by `g`.
    pub fn right_translate(&self, g: &ProdRot) -> Result<DiscreteCurve> {
        check_width(self.width(), g.width())?;
        Ok(DiscreteCurve { grid: self.grid.clone(), points: self.points.iter().map(|p| p.compose_unchecked(g)).collect() })
    }

    /// Maximum pointwise product geodesic distance to `other` on the same grid.
    pub fn max_distance(&self, other: &DiscreteCurve) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let mut worst: f64 = 0.0;
        for (a, b) in self.points.iter().zip(&other.points) {
            worst = worst.max(a.distance(b)?);
        }
        Ok(worst)
    }
}

/// A piecewise-constant algebra-valued function: one value per grid cell.
#[derive(Clone, Debug, PartialEq)]
pub struct CellField {
    grid: Vec<f64>,
    values: Vec<ProdAlg>,
}

impl CellField {
    pub fn new(grid: Vec<f64>, values: Vec<ProdAlg>) -> Result<Self> {
        validate_grid(&grid)?;
        if values.len() + 1 != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len() - 1, found: values.len() });
        }
        let width = values[0].width();
        for v in &values {
            check_width(width, v.width())?;
        }
        Ok(CellField { grid, values })
    }

    pub fn zeros(grid: Vec<f64>, width: usize) -> Result<Self> {
        let n = grid.len().saturating_sub(1);
        CellField::new(grid, alloc::vec![ProdAlg::zero(width); n])
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[ProdAlg] {
        &self.values
    }

    pub fn width(&self) -> usize {
        self.values[0].width()
    }

    pub(crate) fn same_shape(&self, other: &CellField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        check_width(self.width(), other.width())
    }

    /// Exact L² inner product of two piecewise-constant fields.
    pub fn l2_inner(&self, other: &CellField) -> Result<f64> {
        self.same_shape(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .zip(self.grid.windows(2))
            .map(|((a, b), w)| (w[1] - w[0]) * a.dot(b))
            .sum())
    }

    pub fn l2_norm(&self) -> f64 {
        sqrt(self.values.iter().zip(self.grid.windows(2)).map(|(a, w)| (w[1] - w[0]) * a.norm_squared()).sum())
    }

    /// `a · self + b · other`.
    pub fn lincomb(&self, a: f64, other: &CellField, b: f64) -> Result<CellField> {
        self.same_shape(other)?;
        Ok(CellField {
            grid: self.grid.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| x.lincomb(a, y, b)).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> CellField {
        CellField { grid: self.grid.clone(), values: self.values.iter().map(|v| v.scale(s)).collect() }
    }

    /// Pointwise `sc(η) = η / sqrt(‖η‖)`.
    pub fn to_srv(&self) -> Result<SrvCurve> {
        let mut values = Vec::with_capacity(self.values.len());
        for (i, eta) in self.values.iter().enumerate() {
            let norm = eta.norm();
            if norm <= ZERO_TOLERANCE {
                return Err(Error::DegenerateSegment { segment: i });
            }
            values.push(eta.scale(1.0 / sqrt(norm)));
        }
        Ok(SrvCurve(CellField { grid: self.grid.clone(), values }))
    }
}

/// Image of a discrete curve under the SRV transform: nowhere-zero cell values.
#[derive(Clone, Debug, PartialEq)]
pub struct SrvCurve(CellField);

impl SrvCurve {
    pub fn new(grid: Vec<f64>, values: Vec<ProdAlg>) -> Result<Self> {
        SrvCurve::from_field(CellField::new(grid, values)?)
    }

    /// Validate that every value is nonzero.
    pub fn from_field(field: CellField) -> Result<Self> {
        if let Some(i) = field.values.iter().position(|v| v.norm() <= ZERO_TOLERANCE) {
            return Err(Error::ZeroValue { segment: i });
        }
        Ok(SrvCurve(field))
    }

    pub fn field(&self) -> &CellField {
        &self.0
    }

    pub fn into_field(self) -> CellField {
        self.0
    }

    pub fn grid(&self) -> &[f64] {
        &self.0.grid
    }

    pub fn values(&self) -> &[ProdAlg] {
        &self.0.values
    }

    pub fn width(&self) -> usize {
        self.0.width()
    }

    /// Increments `w_i = Δθ_i ‖q̄_i‖ q̄_i` used by the reconstruction.
    pub(crate) fn steps(&self) -> impl Iterator<Item = ProdAlg> + '_ {
        self.0.values.iter().zip(self.0.grid.windows(2)).map(|(q, w)| q.scale((w[1] - w[0]) * q.norm()))
    }
}

/// An algebra-valued function sampled at the grid nodes (tangent fields,
/// node-sampled derivatives).
#[derive(Clone, Debug, PartialEq)]
pub struct NodeField {
    grid: Vec<f64>,
    values: Vec<ProdAlg>,
}

/// Right-trivialized tangent vectors along a curve, one per node.
pub type TangentField = NodeField;

impl NodeField {
    pub fn new(grid: Vec<f64>, values: Vec<ProdAlg>) -> Result<Self> {
        validate_grid(&grid)?;
        if values.len() != grid.len() {
            return Err(Error::LengthMismatch { expected: grid.len(), found: values.len() });
        }
        let width = values[0].width();
        for v in &values {
            check_width(width, v.width())?;
        }
        Ok(NodeField { grid, values })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[ProdAlg] {
        &self.values
    }

    pub fn width(&self) -> usize {
        self.values[0].width()
    }

    pub fn scale(&self, s: f64) -> NodeField {
        NodeField { grid: self.grid.clone(), values: self.values.iter().map(|v| v.scale(s)).collect() }
    }

    /// Trapezoid-rule L² inner product.
    pub fn trapezoid_inner(&self, other: &NodeField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        check_width(self.width(), other.width())?;
        let pointwise: Vec<f64> = self.values.iter().zip(&other.values).map(|(a, b)| a.dot(b)).collect();
        Ok(trapezoid(&self.grid, &pointwise))
    }

    pub fn trapezoid_norm(&self) -> f64 {
        let pointwise: Vec<f64> = self.values.iter().map(|a| a.norm_squared()).collect();
        sqrt(trapezoid(&self.grid, &pointwise))
    }
}

pub(crate) fn trapezoid(grid: &[f64], values: &[f64]) -> f64 {
    grid.windows(2).zip(values.windows(2)).map(|(g, v)| 0.5 * (g[1] - g[0]) * (v[0] + v[1])).sum()
}

/// A piecewise-linear, strictly increasing bijection of `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reparam {
    knots: Vec<(f64, f64)>,
}

impl Reparam {
    /// Knots `(s_j, φ_j)`, strictly increasing in both coordinates, from
    /// `(0, 0)` to `(1, 1)`.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        let valid = knots.len() >= 2
            && knots[0] == (0.0, 0.0)
            && knots[knots.len() - 1] == (1.0, 1.0)
            && knots.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 < w[1].1);
        if !valid {
            return Err(Error::InvalidWarp);
        }
        Ok(Reparam { knots })
    }

    pub fn identity() -> Self {
        Reparam { knots: alloc::vec![(0.0, 0.0), (1.0, 1.0)] }
    }

    /// Piecewise-linear interpolant of `f` at `m + 1` uniform knots. `f` must
    /// be strictly increasing with `f(0) = 0` and `f(1) = 1`.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let knots = uniform_grid(m.max(1))
            .into_iter()
            .map(|s| {
                let v = if s == 0.0 {
                    0.0
                } else if s == 1.0 {
                    1.0
                } else {
                    f(s)
                };
                (s, v)
            })
            .collect();
        Reparam::new(knots)
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn segment(&self, t: f64) -> usize {
        let m = self.knots.len() - 1;
        self.knots.partition_point(|k| k.0 <= t).saturating_sub(1).min(m - 1)
    }

    /// `φ(t)`; clamps `t` to `[0, 1]`.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let j = self.segment(t);
        let (s0, p0) = self.knots[j];
        let (s1, p1) = self.knots[j + 1];
        if t == s0 {
            p0
        } else if t == s1 {
            p1
        } else {
            p0 + (t - s0) * (p1 - p0) / (s1 - s0)
        }
    }

    /// `φ'(t)` on the knot segment containing `t` (right-continuous).
    pub fn slope(&self, t: f64) -> f64 {
        let j = self.segment(t.clamp(0.0, 1.0));
        let (s0, p0) = self.knots[j];
        let (s1, p1) = self.knots[j + 1];
        (p1 - p0) / (s1 - s0)
    }

    /// `φ⁻¹`, obtained by swapping knot coordinates.
    pub fn inverse(&self) -> Reparam {
        Reparam { knots: self.knots.iter().map(|&(s, p)| (p, s)).collect() }
    }
}

/// SRV transform of a discrete curve.
pub fn srvt(c: &DiscreteCurve) -> Result<SrvCurve> {
    c.log_derivative()?.to_srv()
}

/// Rebuild the curve starting at the identity from its SRV values.
pub fn srvt_inverse(q: &SrvCurve) -> Result<DiscreteCurve> {
    for (i, v) in q.values().iter().enumerate() {
        if v.norm() <= ZERO_TOLERANCE {
            return Err(Error::ZeroValue { segment: i });
        }
    }
    let mut points = Vec::with_capacity(q.grid().len());
    let mut current = ProdRot::identity(q.width());
    points.push(current.clone());
    for step in q.steps() {
        current = ProdRot::exp(&step).compose_unchecked(&current);
        points.push(current.clone());
    }
    Ok(DiscreteCurve { grid: q.grid().to_vec(), points })
}

/// `t ↦ c(t) · c(0)⁻¹`; the first point becomes exactly the identity.
pub fn base_at_identity(c: &DiscreteCurve) -> DiscreteCurve {
    let start = c.points[0].inverse();
    let mut points: Vec<ProdRot> = c.points.iter().map(|p| p.compose_unchecked(&start)).collect();
    points[0] = ProdRot::identity(c.width());
    DiscreteCurve { grid: c.grid.clone(), points }
}

/// Point of the piecewise-geodesic curve at parameter `t`.
pub fn evaluate(c: &DiscreteCurve, t: f64) -> Result<ProdRot> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange { t });
    }
    let k = segment_index(&c.grid, t);
    let (t0, t1) = (c.grid[k], c.grid[k + 1]);
    if t == t0 {
        return Ok(c.points[k].clone());
    }
    if t == t1 {
        return Ok(c.points[k + 1].clone());
    }
    let s = (t - t0) / (t1 - t0);
    geodesic_point(&c.points[k], &c.points[k + 1], s).map_err(|e| e.at_segment(k))
}

fn geodesic_point(a: &ProdRot, b: &ProdRot, s: f64) -> Result<ProdRot> {
    let mut parts = Vec::with_capacity(a.width());
    for (k, (ra, rb)) in a.parts().iter().zip(b.parts()).enumerate() {
        let v = lie::log(&(*rb * ra.inverse())).map_err(|e| e.at_component(k))?;
        parts.push(lie::exp(v * s) * *ra);
    }
    Ok(ProdRot(parts))
}

/// Resample `c ∘ φ` on the same grid by geodesic interpolation.
pub fn resample(c: &DiscreteCurve, phi: &Reparam) -> Result<DiscreteCurve> {
    let points = c.grid.iter().map(|&t| evaluate(c, phi.eval(t))).collect::<Result<Vec<_>>>()?;
    Ok(DiscreteCurve { grid: c.grid.clone(), points })
}

/// Sample `c` at the nodes of another grid.
pub fn regrid_to(c: &DiscreteCurve, grid: Vec<f64>) -> Result<DiscreteCurve> {
    validate_grid(&grid)?;
    let points = grid.iter().map(|&t| evaluate(c, t)).collect::<Result<Vec<_>>>()?;
    Ok(DiscreteCurve { grid, points })
}

/// Sample `c` on the uniform grid with `n` cells.
pub fn regrid(c: &DiscreteCurve, n: usize) -> Result<DiscreteCurve> {
    if n == 0 {
        return Err(Error::InvalidGrid);
    }
    regrid_to(c, uniform_grid(n))
}
