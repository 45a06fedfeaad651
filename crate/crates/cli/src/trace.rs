//! Sphere traces `t ↦ c(t) v` of vectors carried along an `SO(3)` curve.

use elastica_core::{evaluate, AlgVec3, DiscreteCurve, ProdRot};

use crate::error::{AppError, AppResult};
use crate::output::{csv, sig17};

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<(f64, [f64; 3])>,
}

impl Trajectory {
    /// `t,x,y,z` rows with 17 significant digits.
    pub fn to_csv(&self) -> String {
        csv("t,x,y,z", self.samples.iter().map(|(t, p)| vec![sig17(*t), sig17(p[0]), sig17(p[1]), sig17(p[2])]))
    }
}

/// The single-joint curve of component `k`.
pub fn component_curve(c: &DiscreteCurve, k: usize) -> AppResult<DiscreteCurve> {
    if k >= c.width() {
        return Err(AppError::Usage(format!("joint index {k} out of range for {} joints", c.width())));
    }
    let points = c.points().iter().map(|p| ProdRot(vec![p[k]])).collect();
    DiscreteCurve::new(c.grid().to_vec(), points).map_err(|e| AppError::numeric(e, None))
}

/// Trace each vector at `samples` uniform parameters in `[0, 1]`.
pub fn trace_vectors(c: &DiscreteCurve, vectors: &[[f64; 3]], samples: usize) -> AppResult<Vec<Trajectory>> {
    if c.width() != 1 {
        return Err(AppError::Usage(format!("tracing needs a single-joint curve, got {} joints", c.width())));
    }
    if samples < 2 {
        return Err(AppError::Usage(format!("need at least 2 samples, got {samples}")));
    }
    let ts: Vec<f64> = (0..samples).map(|k| if k + 1 == samples { 1.0 } else { k as f64 / (samples - 1) as f64 }).collect();
    let rots = ts
        .iter()
        .map(|&t| evaluate(c, t).map(|p| p[0]))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| AppError::numeric(e, None))?;
    Ok(vectors
        .iter()
        .map(|v| {
            let v = AlgVec3::from_array(*v);
            Trajectory { samples: ts.iter().zip(&rots).map(|(&t, r)| (t, r.apply(v).to_array())).collect() }
        })
        .collect())
}
