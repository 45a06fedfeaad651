//! The rotation group `SO(3)`, its Lie algebra `so(3)` and finite products.
//!
//! Algebra elements are stored in vector coordinates: `x ↦ x̂` sends a
//! 3-vector to the skew matrix with `x̂ y = x × y`. With that identification
//! the bracket is the cross product and `Ad_R(v) = R v`.
//!
//! The invariant inner product is the plain dot product `x · y`. The trace
//! form `tr(X Yᵀ)` is twice that; only the global scale differs.
//!
//! All closed forms switch to Taylor expansions below [`SMALL_ANGLE`].

use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Index, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::math::{atan2, cos, sin, sqrt, tan};

/// Below this angle the Rodrigues, log and dexp coefficients use series.
pub const SMALL_ANGLE: f64 = 1e-4;

/// Logarithms are refused for angles above `π - LOG_PI_MARGIN`.
pub const LOG_PI_MARGIN: f64 = 1e-6;

/// `dexpinv_u` is refused for `‖u‖ ≥ 2π - DEXPINV_POLE_MARGIN`.
pub const DEXPINV_POLE_MARGIN: f64 = 1e-6;

/// Tolerance on the symmetric part accepted by [`vee`].
pub const SKEW_TOLERANCE: f64 = 1e-9;

/// Tolerance for [`Rot3::from_matrix`].
pub const ROTATION_TOLERANCE: f64 = 1e-12;

const PI: f64 = core::f64::consts::PI;
const TAU: f64 = core::f64::consts::TAU;

/// An element of `so(3)` in vector coordinates (a rotation vector in radians).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AlgVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl AlgVec3 {
    pub const ZERO: AlgVec3 = AlgVec3 { x: 0.0, y: 0.0, z: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        AlgVec3 { x, y, z }
    }

    #[inline]
    pub fn from_array(a: [f64; 3]) -> Self {
        AlgVec3::new(a[0], a[1], a[2])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    #[inline]
    pub fn dot(self, other: AlgVec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn cross(self, other: AlgVec3) -> AlgVec3 {
        AlgVec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        sqrt(self.norm_squared())
    }
}

impl Add for AlgVec3 {
    type Output = AlgVec3;
    #[inline]
    fn add(self, o: AlgVec3) -> AlgVec3 {
        AlgVec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for AlgVec3 {
    type Output = AlgVec3;
    #[inline]
    fn sub(self, o: AlgVec3) -> AlgVec3 {
        AlgVec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for AlgVec3 {
    type Output = AlgVec3;
    #[inline]
    fn neg(self) -> AlgVec3 {
        AlgVec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for AlgVec3 {
    type Output = AlgVec3;
    #[inline]
    fn mul(self, s: f64) -> AlgVec3 {
        AlgVec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<AlgVec3> for f64 {
    type Output = AlgVec3;
    #[inline]
    fn mul(self, v: AlgVec3) -> AlgVec3 {
        v * self
    }
}

impl AddAssign for AlgVec3 {
    #[inline]
    fn add_assign(&mut self, o: AlgVec3) {
        *self = *self + o;
    }
}

impl SubAssign for AlgVec3 {
    #[inline]
    fn sub_assign(&mut self, o: AlgVec3) {
        *self = *self - o;
    }
}

/// A dense row-major 3×3 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub const IDENTITY: Mat3 = Mat3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
    pub const ZERO: Mat3 = Mat3([[0.0; 3]; 3]);

    pub fn transpose(&self) -> Mat3 {
        let m = &self.0;
        Mat3([
            [m[0][0], m[1][0], m[2][0]],
            [m[0][1], m[1][1], m[2][1]],
            [m[0][2], m[1][2], m[2][2]],
        ])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[inline]
    pub fn mul_vec(&self, v: AlgVec3) -> AlgVec3 {
        let m = &self.0;
        AlgVec3::new(
            m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z,
        )
    }

    #[inline]
    pub fn transpose_mul_vec(&self, v: AlgVec3) -> AlgVec3 {
        let m = &self.0;
        AlgVec3::new(
            m[0][0] * v.x + m[1][0] * v.y + m[2][0] * v.z,
            m[0][1] * v.x + m[1][1] * v.y + m[2][1] * v.z,
            m[0][2] * v.x + m[1][2] * v.y + m[2][2] * v.z,
        )
    }

    pub fn scale(&self, s: f64) -> Mat3 {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for e in row.iter_mut() {
                *e *= s;
            }
        }
        out
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |acc: f64, e| acc.max(e.abs()))
    }
}

impl Mul for Mat3 {
    type Output = Mat3;
    fn mul(self, o: Mat3) -> Mat3 {
        let a = &self.0;
        let b = &o.0;
        let mut out = [[0.0; 3]; 3];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Mat3(out)
    }
}

impl Add for Mat3 {
    type Output = Mat3;
    fn add(self, o: Mat3) -> Mat3 {
        let mut out = self;
        for i in 0..3 {
            for j in 0..3 {
                out.0[i][j] += o.0[i][j];
            }
        }
        out
    }
}

impl Sub for Mat3 {
    type Output = Mat3;
    fn sub(self, o: Mat3) -> Mat3 {
        self + o.scale(-1.0)
    }
}

/// Skew matrix of a vector: `hat(x) y = x × y`.
pub fn hat(v: AlgVec3) -> Mat3 {
    Mat3([[0.0, -v.z, v.y], [v.z, 0.0, -v.x], [-v.y, v.x, 0.0]])
}

/// Vector coordinates of a skew matrix; rejects input whose symmetric part
/// exceeds [`SKEW_TOLERANCE`] (Frobenius norm).
pub fn vee(m: &Mat3) -> Result<AlgVec3> {
    let sym = (*m + m.transpose()).scale(0.5);
    let asymmetry = sqrt(sym.0.iter().flatten().map(|e| e * e).sum::<f64>());
    if asymmetry > SKEW_TOLERANCE {
        return Err(Error::NotSkew { asymmetry });
    }
    Ok(skew_part_vee(m))
}

// vee of (M - Mᵀ)/2, no checks.
#[inline]
fn skew_part_vee(m: &Mat3) -> AlgVec3 {
    let a = &m.0;
    AlgVec3::new(0.5 * (a[2][1] - a[1][2]), 0.5 * (a[0][2] - a[2][0]), 0.5 * (a[1][0] - a[0][1]))
}

/// A rotation matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rot3 {
    m: Mat3,
}

impl Rot3 {
    pub const IDENTITY: Rot3 = Rot3 { m: Mat3::IDENTITY };

    /// Validate `mᵀm = I` and `det m = 1` to [`ROTATION_TOLERANCE`].
    pub fn from_matrix(m: Mat3) -> Result<Self> {
        let gram = m.transpose() * m;
        let deviation = (gram - Mat3::IDENTITY).max_abs().max((m.det() - 1.0).abs());
        if deviation > ROTATION_TOLERANCE || deviation.is_nan() {
            return Err(Error::NotRotation { deviation });
        }
        Ok(Rot3 { m })
    }

    #[inline]
    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    #[inline]
    pub fn inverse(&self) -> Rot3 {
        Rot3 { m: self.m.transpose() }
    }

    #[inline]
    pub fn apply(&self, v: AlgVec3) -> AlgVec3 {
        self.m.mul_vec(v)
    }

    /// Rotation angle in `[0, π]`.
    pub fn angle(&self) -> f64 {
        let y = skew_part_vee(&self.m);
        atan2(y.norm(), 0.5 * (self.m.trace() - 1.0))
    }

    /// Geodesic distance `angle(self · otherᵀ)`.
    pub fn distance(&self, other: &Rot3) -> f64 {
        (*self * other.inverse()).angle()
    }
}

impl Mul for Rot3 {
    type Output = Rot3;
    #[inline]
    fn mul(self, o: Rot3) -> Rot3 {
        Rot3 { m: self.m * o.m }
    }
}

/// Rodrigues' formula.
pub fn exp(v: AlgVec3) -> Rot3 {
    let t2 = v.norm_squared();
    let theta = sqrt(t2);
    let (a, b) = if theta < SMALL_ANGLE {
        // sinθ/θ and (1 - cosθ)/θ²
        (1.0 - t2 / 6.0 * (1.0 - t2 / 20.0 * (1.0 - t2 / 42.0)), 0.5 - t2 / 24.0 * (1.0 - t2 / 30.0 * (1.0 - t2 / 56.0)))
    } else {
        let s = sin(0.5 * theta);
        (sin(theta) / theta, 2.0 * s * s / t2)
    };
    let k = hat(v);
    Rot3 { m: Mat3::IDENTITY + k.scale(a) + (k * k).scale(b) }
}

/// Principal logarithm, for rotation angles up to `π - LOG_PI_MARGIN`.
pub fn log(r: &Rot3) -> Result<AlgVec3> {
    let y = skew_part_vee(&r.m);
    let s = y.norm();
    let c = 0.5 * (r.m.trace() - 1.0);
    let theta = atan2(s, c);
    if theta > PI - LOG_PI_MARGIN {
        return Err(Error::AngleNearPi { angle: theta, component: None, segment: None });
    }
    if theta < SMALL_ANGLE {
        let t2 = theta * theta;
        // θ / sin θ
        Ok(y * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0))
    } else {
        Ok(y * (theta / s))
    }
}

/// `Ad_R(v) = R v`.
#[inline]
pub fn adjoint(r: &Rot3, v: AlgVec3) -> AlgVec3 {
    r.m.mul_vec(v)
}

/// Inner-product adjoint of `Ad_R`, which is `Ad_{Rᵀ}`.
#[inline]
pub fn adjoint_dagger(r: &Rot3, v: AlgVec3) -> AlgVec3 {
    r.m.transpose_mul_vec(v)
}

/// The Lie bracket, i.e. the cross product.
#[inline]
pub fn bracket(u: AlgVec3, v: AlgVec3) -> AlgVec3 {
    u.cross(v)
}

/// Right-trivialized tangent of `exp`: `Σ ad_u^k v / (k+1)!`.
pub fn dexp(u: AlgVec3, v: AlgVec3) -> AlgVec3 {
    let t2 = u.norm_squared();
    let theta = sqrt(t2);
    let (a, b) = if theta < SMALL_ANGLE {
        (0.5 - t2 / 24.0 * (1.0 - t2 / 30.0), 1.0 / 6.0 - t2 / 120.0 * (1.0 - t2 / 42.0))
    } else {
        ((1.0 - cos(theta)) / t2, (theta - sin(theta)) / (t2 * theta))
    };
    let uv = u.cross(v);
    v + uv * a + u.cross(uv) * b
}

/// Inverse of `dexp(u, ·)`; defined for `‖u‖ < 2π`.
pub fn dexpinv(u: AlgVec3, v: AlgVec3) -> Result<AlgVec3> {
    let t2 = u.norm_squared();
    let theta = sqrt(t2);
    if theta >= TAU - DEXPINV_POLE_MARGIN {
        return Err(Error::DexpinvPole { norm: theta });
    }
    let c = if theta < SMALL_ANGLE {
        1.0 / 12.0 + t2 / 720.0 + t2 * t2 / 30240.0
    } else {
        let half = 0.5 * theta;
        (1.0 - half / tan(half)) / t2
    };
    let uv = u.cross(v);
    Ok(v - uv * 0.5 + u.cross(uv) * c)
}

/// Adjoint of `dexp(u, ·)`; `ad_u` is skew so this is `dexp(-u, ·)`.
#[inline]
pub fn dexp_dagger(u: AlgVec3, v: AlgVec3) -> AlgVec3 {
    dexp(-u, v)
}

/// Adjoint of `dexpinv(u, ·)`, computed as `dexpinv(-u, ·)`.
#[inline]
pub fn dexpinv_dagger(u: AlgVec3, v: AlgVec3) -> Result<AlgVec3> {
    dexpinv(-u, v)
}

/// `⟨u, v⟩ = u · v`.
#[inline]
pub fn inner(u: AlgVec3, v: AlgVec3) -> f64 {
    u.dot(v)
}

#[inline]
pub fn norm(u: AlgVec3) -> f64 {
    u.norm()
}

/// An element of `SO(3)^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProdRot(pub Vec<Rot3>);

/// An element of `so(3)^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProdAlg(pub Vec<AlgVec3>);

impl ProdRot {
    pub fn identity(width: usize) -> Self {
        ProdRot(alloc::vec![Rot3::IDENTITY; width])
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn parts(&self) -> &[Rot3] {
        &self.0
    }

    pub fn inverse(&self) -> ProdRot {
        ProdRot(self.0.iter().map(Rot3::inverse).collect())
    }

    /// Componentwise product `self · other`.
    pub fn compose(&self, other: &ProdRot) -> Result<ProdRot> {
        check_width(self.width(), other.width())?;
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &ProdRot) -> ProdRot {
        ProdRot(self.0.iter().zip(&other.0).map(|(a, b)| *a * *b).collect())
    }

    /// `self · otherᵀ`, the right increment from `other` to `self`.
    pub(crate) fn right_delta(&self, other: &ProdRot) -> ProdRot {
        ProdRot(self.0.iter().zip(&other.0).map(|(a, b)| *a * b.inverse()).collect())
    }

    /// Componentwise exponential.
    pub fn exp(v: &ProdAlg) -> ProdRot {
        ProdRot(v.0.iter().map(|&x| exp(x)).collect())
    }

    /// Componentwise logarithm; errors carry the failing component.
    pub fn log(&self) -> Result<ProdAlg> {
        self.0
            .iter()
            .enumerate()
            .map(|(k, r)| log(r).map_err(|e| e.at_component(k)))
            .collect::<Result<Vec<_>>>()
            .map(ProdAlg)
    }

    /// Product geodesic distance `sqrt(Σ_k angle(a_k b_kᵀ)²)`.
    pub fn distance(&self, other: &ProdRot) -> Result<f64> {
        check_width(self.width(), other.width())?;
        Ok(sqrt(self.0.iter().zip(&other.0).map(|(a, b)| {
            let d = a.distance(b);
            d * d
        }).sum()))
    }
}

impl Index<usize> for ProdRot {
    type Output = Rot3;
    fn index(&self, k: usize) -> &Rot3 {
        &self.0[k]
    }
}

impl ProdAlg {
    pub fn zero(width: usize) -> Self {
        ProdAlg(alloc::vec![AlgVec3::ZERO; width])
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn parts(&self) -> &[AlgVec3] {
        &self.0
    }

    /// Sum of componentwise dot products.
    pub fn inner(&self, other: &ProdAlg) -> Result<f64> {
        check_width(self.width(), other.width())?;
        Ok(self.dot(other))
    }

    #[inline]
    pub fn dot(&self, other: &ProdAlg) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.dot(*b)).sum()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|a| a.norm_squared()).sum()
    }

    pub fn norm(&self) -> f64 {
        sqrt(self.norm_squared())
    }

    pub fn scale(&self, s: f64) -> ProdAlg {
        ProdAlg(self.0.iter().map(|&a| a * s).collect())
    }

    /// `self + s · other`.
    pub fn axpy(&self, s: f64, other: &ProdAlg) -> ProdAlg {
        ProdAlg(self.0.iter().zip(&other.0).map(|(&a, &b)| a + b * s).collect())
    }

    /// `a · self + b · other`.
    pub fn lincomb(&self, a: f64, other: &ProdAlg, b: f64) -> ProdAlg {
        ProdAlg(self.0.iter().zip(&other.0).map(|(&x, &y)| x * a + y * b).collect())
    }

    pub fn sub(&self, other: &ProdAlg) -> ProdAlg {
        ProdAlg(self.0.iter().zip(&other.0).map(|(&a, &b)| a - b).collect())
    }
}

impl Index<usize> for ProdAlg {
    type Output = AlgVec3;
    fn index(&self, k: usize) -> &AlgVec3 {
        &self.0[k]
    }
}

#[inline]
pub(crate) fn check_width(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::WidthMismatch { expected, found })
    }
}
