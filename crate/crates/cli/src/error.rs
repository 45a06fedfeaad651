use std::path::{Path, PathBuf};

use crate::anim::Skeleton;

/// Errors surfaced by the animation tools, grouped by exit code.
#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{origin}:{line}:{column}: parse error: {message}")]
    Parse { origin: String, line: usize, column: usize, message: String },
    #[error("{0}")]
    Schema(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
}

pub type AppResult<T> = Result<T, AppError>;

impl AppError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        AppError::Io { path: path.to_path_buf(), source }
    }

    /// Process exit status: 2 for input problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Numeric(_) => 3,
            _ => 2,
        }
    }

    /// Describe a kernel error in terms of the skeleton's joints.
    pub fn numeric(err: elastica_core::Error, skeleton: Option<&Skeleton>) -> Self {
        use elastica_core::Error as E;
        let joint = |k: usize| match skeleton.and_then(|s| s.joints().get(k)) {
            Some(j) => format!("joint '{}' (index {k})", j.name),
            None => format!("component {k}"),
        };
        let message = match &err {
            E::AngleNearPi { angle, component: Some(k), segment } => {
                let at = segment.map(|s| format!(", segment {s}")).unwrap_or_default();
                format!("{}{at}: rotation angle {angle} too close to pi for logarithm", joint(*k))
            }
            _ => err.to_string(),
        };
        AppError::Numeric(message)
    }
}
