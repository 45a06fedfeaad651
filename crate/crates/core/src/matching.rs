//! Elastic matching: minimize the L² distance of SRV images over warps of
//! the second curve by dynamic programming on the grid lattice.
//!
//! A lattice path from `(0, 0)` to `(n, n)` made of steps `(Δi, Δj)` from a
//! [`SlopeSet`] induces the piecewise-linear warp through the knots
//! `(θ_i, θ_j)`. Each step contributes
//! `∫_{θ_i}^{θ_i'} ‖q0(t) - q1(φ(t)) sqrt(φ')‖² dt`, integrated exactly over
//! the cells where both piecewise-constant SRV functions are constant.

use alloc::vec::Vec;

use crate::curve::{srvt, DiscreteCurve, Reparam, SrvCurve};
use crate::error::{Error, Result};
use crate::lie::check_width;
use crate::math::sqrt;

/// Admissible lattice steps `(Δi, Δj)`, both at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeSet(Vec<(usize, usize)>);

impl SlopeSet {
    pub fn new(steps: Vec<(usize, usize)>) -> Result<Self> {
        if steps.is_empty() || steps.iter().any(|&(a, b)| a == 0 || b == 0) {
            return Err(Error::InvalidParameter("slope steps must be non-empty with positive entries"));
        }
        Ok(SlopeSet(steps))
    }

    /// `{(1,1), (1,2), (2,1), (1,3), (3,1), (2,3), (3,2)}`.
    pub fn standard() -> Self {
        SlopeSet(alloc::vec![(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)])
    }

    /// `{(1,1), (1,2), (2,1), (1,3), (3,1)}`.
    pub fn small() -> Self {
        SlopeSet(alloc::vec![(1, 1), (1, 2), (2, 1), (1, 3), (3, 1)])
    }

    pub fn steps(&self) -> &[(usize, usize)] {
        &self.0
    }
}

impl Default for SlopeSet {
    fn default() -> Self {
        SlopeSet::standard()
    }
}

/// Lattice parameters for [`dp_match`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct DpConfig {
    pub slopes: SlopeSet,
    /// Sakoe–Chiba band half-width `|i - j| <= window`; `None` searches the
    /// full lattice.
    pub window: Option<usize>,
}

/// Outcome of elastic matching.
#[derive(Clone, Debug, PartialEq)]
pub struct MatchResult {
    /// Optimal warp of the second curve.
    pub phi: Reparam,
    /// `sqrt(cost)`.
    pub shape_distance: f64,
    /// Accumulated warp cost along the optimal path.
    pub cost: f64,
    /// Lattice node indices of the optimal path, `(0, 0)` to `(n, n)`.
    pub path: Vec<(usize, usize)>,
    pub cost_matrix_shape: (usize, usize),
}

/// Cost of one lattice step from `from` to `to` on the common grid.
pub fn edge_cost(q0: &SrvCurve, q1: &SrvCurve, from: (usize, usize), to: (usize, usize)) -> f64 {
    let g = q0.grid();
    let (i, j) = from;
    let (i2, j2) = to;
    let slope = (g[j2] - g[j]) / (g[i2] - g[i]);
    let root = sqrt(slope);
    let (v0, v1) = (q0.values(), q1.values());
    let (mut a, mut b) = (i, j);
    let mut t = g[i];
    let mut total = 0.0;
    while a < i2 {
        let next_a = g[a + 1];
        let next_b = if b + 1 == j2 { g[i2] } else { g[i] + (g[b + 1] - g[j]) / slope };
        let next = next_a.min(next_b);
        let diff = v0[a].lincomb(1.0, &v1[b], -root);
        total += (next - t) * diff.norm_squared();
        t = next;
        if next_a <= next {
            a += 1;
        }
        if next_b <= next && b + 1 < j2 {
            b += 1;
        }
    }
    total
}

/// `∫ ‖q0(t) - q1(φ(t)) sqrt(φ'(t))‖² dt` for a piecewise-linear warp,
/// integrated exactly on the union of all breakpoints.
pub fn warp_cost(q0: &SrvCurve, q1: &SrvCurve, phi: &Reparam) -> Result<f64> {
    check_width(q0.width(), q1.width())?;
    let inverse = phi.inverse();
    let mut breaks: Vec<f64> = q0.grid().to_vec();
    breaks.extend(phi.knots().iter().map(|k| k.0));
    breaks.extend(q1.grid().iter().map(|&x| inverse.eval(x)));
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let cell = |grid: &[f64], t: f64| grid.partition_point(|&x| x <= t).saturating_sub(1).min(grid.len() - 2);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let a = cell(q0.grid(), mid);
        let b = cell(q1.grid(), phi.eval(mid));
        let diff = q0.values()[a].lincomb(1.0, &q1.values()[b], -sqrt(phi.slope(mid)));
        total += (w[1] - w[0]) * diff.norm_squared();
    }
    Ok(total)
}

// Step "distance from slope 1" as the ratio max/min, compared exactly.
fn milder(a: (usize, usize), b: (usize, usize)) -> core::cmp::Ordering {
    let key = |s: (usize, usize)| (s.0.max(s.1), s.0.min(s.1));
    let (an, ad) = key(a);
    let (bn, bd) = key(b);
    (an * bd).cmp(&(bn * ad))
}

/// Dynamic-programming match of SRV curves on a common grid.
pub fn dp_match_srv(q0: &SrvCurve, q1: &SrvCurve, config: &DpConfig) -> Result<MatchResult> {
    if q0.grid() != q1.grid() {
        return Err(Error::GridMismatch);
    }
    check_width(q0.width(), q1.width())?;
    let n = q0.values().len();
    if n < 2 {
        return Err(Error::GridTooSmall { n });
    }
    if config.window == Some(0) {
        return Err(Error::InvalidParameter("window must be at least 1"));
    }
    let side = n + 1;
    let idx = |i: usize, j: usize| i * side + j;
    let mut cost = alloc::vec![f64::INFINITY; side * side];
    let mut back: Vec<Option<(usize, usize)>> = alloc::vec![None; side * side];
    cost[0] = 0.0;
    let in_band = |i: usize, j: usize| config.window.is_none_or(|w| i.abs_diff(j) <= w);

    for i in 0..side {
        for j in 0..side {
            if (i == 0 && j == 0) || !in_band(i, j) {
                continue;
            }
            let mut best = f64::INFINITY;
            let mut best_step: Option<(usize, usize)> = None;
            for &(di, dj) in config.slopes.steps() {
                if di > i || dj > j {
                    continue;
                }
                let (pi, pj) = (i - di, j - dj);
                let base = cost[idx(pi, pj)];
                if !base.is_finite() {
                    continue;
                }
                let cand = base + edge_cost(q0, q1, (pi, pj), (i, j));
                let better = match best_step {
                    None => true,
                    Some(prev) => {
                        cand < best
                            || (cand == best
                                && match milder((di, dj), prev) {
                                    core::cmp::Ordering::Less => true,
                                    core::cmp::Ordering::Equal => pj < j - prev.1,
                                    core::cmp::Ordering::Greater => false,
                                })
                    }
                };
                if better {
                    best = cand;
                    best_step = Some((di, dj));
                }
            }
            if let Some(step) = best_step {
                cost[idx(i, j)] = best;
                back[idx(i, j)] = Some(step);
            }
        }
    }

    let total = cost[idx(n, n)];
    if !total.is_finite() {
        return Err(Error::InvalidParameter("no admissible lattice path for the given slopes and window"));
    }
    let mut path = alloc::vec![(n, n)];
    let (mut i, mut j) = (n, n);
    while let Some((di, dj)) = back[idx(i, j)] {
        i -= di;
        j -= dj;
        path.push((i, j));
    }
    path.reverse();
    let g = q0.grid();
    let phi = Reparam::new(path.iter().map(|&(i, j)| (g[i], g[j])).collect())?;
    Ok(MatchResult { phi, shape_distance: sqrt(total), cost: total, path, cost_matrix_shape: (side, side) })
}

/// Dynamic-programming match of two curves on a common grid; the warp acts
/// on `c1`.
pub fn dp_match(c0: &DiscreteCurve, c1: &DiscreteCurve, config: &DpConfig) -> Result<MatchResult> {
    if c0.grid() != c1.grid() {
        return Err(Error::GridMismatch);
    }
    if c0.segments() < 2 {
        return Err(Error::GridTooSmall { n: c0.segments() });
    }
    dp_match_srv(&srvt(c0)?, &srvt(c1)?, config)
}

/// Shape distance with the default lattice.
pub fn shape_distance(c0: &DiscreteCurve, c1: &DiscreteCurve) -> Result<f64> {
    Ok(dp_match(c0, c1, &DpConfig::default())?.shape_distance)
}

/// Mean of the two matching directions.
pub fn shape_distance_symmetric(c0: &DiscreteCurve, c1: &DiscreteCurve, config: &DpConfig) -> Result<f64> {
    Ok(0.5 * (dp_match(c0, c1, config)?.shape_distance + dp_match(c1, c0, config)?.shape_distance))
}
