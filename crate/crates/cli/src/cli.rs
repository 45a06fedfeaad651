//! Command-line front end. Every command resamples its inputs to a uniform
//! working grid before any SRV computation and writes outputs atomically.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use elastica_core::lie::ProdRot;
use elastica_core::metric::interpolate_nudged;
use elastica_core::{
    close_curve, curve_distance, dp_match, endpoint, interpolate, regrid, resample, srvt, srvt_inverse, ClosingOptions,
    DiscreteCurve, DpConfig, GradientMode,
};

use crate::anim::{animation_to_curve, check_compatible, curve_to_animation, load_animation, Animation, Skeleton};
use crate::error::{AppError, AppResult};
use crate::fixtures;
use crate::output::{csv, shortest, write_atomic};
use crate::trace::{component_curve, trace_vectors};

/// Segments within this distance of π trigger a warning in `info`.
pub const NEAR_PI_WARNING: f64 = 0.1 * std::f64::consts::PI;

#[derive(Parser, Debug)]
#[command(name = "elastica", version, about = "Elastic shape analysis of skeletal animations as curves on SO(3)^d")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

impl Switch {
    fn on(self) -> bool {
        self == Switch::On
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// L² distance of SRV curves and, with reparametrization, the shape distance.
    Distance(DistanceArgs),
    /// Blend two animations along the SRV geodesic.
    Blend(BlendArgs),
    /// Close an animation so that its last pose returns to its first.
    Close(CloseArgs),
    /// Write sphere traces of vectors rotated along one joint's curve.
    Trace(TraceArgs),
    /// Summarize an animation file.
    Info(InfoArgs),
    /// Write a synthetic animation fixture.
    Fixture(FixtureArgs),
}

#[derive(Args, Debug)]
pub struct DistanceArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    #[arg(long, value_enum, default_value = "on")]
    pub reparam: Switch,
    /// Working grid size (segments).
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Write the optimal warp knots as `s,phi`.
    #[arg(long)]
    pub warp_csv: Option<PathBuf>,
    /// Average the two matching directions.
    #[arg(long)]
    pub symmetric: bool,
    /// Band half-width for the matching lattice.
    #[arg(long)]
    pub window: Option<usize>,
}

#[derive(Args, Debug)]
pub struct BlendArgs {
    pub first: PathBuf,
    pub second: PathBuf,
    /// Interpolation parameters in [0, 1].
    #[arg(long = "s", num_args = 1.., required = true, allow_negative_numbers = true)]
    pub s: Vec<f64>,
    #[arg(long, value_enum, default_value = "on")]
    pub reparam: Switch,
    /// Minimum working grid size; rounded up to a multiple of the first input's segments.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
    /// Replace vanishing interpolated SRV values by this multiple of the nearer endpoint's direction.
    #[arg(long)]
    pub nudge_eps: Option<f64>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct CloseArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    /// Write the `iter,phi` history here.
    #[arg(long)]
    pub report: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    #[arg(long, value_enum, default_value = "off")]
    pub line_search: Switch,
    /// Minimum working grid size; rounded up to a multiple of the input's segments.
    #[arg(long, default_value_t = 200)]
    pub grid: usize,
}

#[derive(Args, Debug)]
pub struct TraceArgs {
    pub input: PathBuf,
    /// Vectors as `x,y,z`.
    #[arg(long, num_args = 1.., required = true, allow_negative_numbers = true)]
    pub vectors: Vec<String>,
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    /// Joint name or index; required for multi-joint animations.
    #[arg(long)]
    pub joint: Option<String>,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct InfoArgs {
    pub input: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FixtureKind {
    Spiral,
    Pair,
    QuarterTurn,
    Random,
}

#[derive(Args, Debug)]
pub struct FixtureArgs {
    #[arg(value_enum)]
    pub kind: FixtureKind,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub frames: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Joint count for the random fixture.
    #[arg(long, default_value_t = 4)]
    pub joints: usize,
}

/// Parse arguments, run, print, and return the process exit status.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let _ = env_logger::Builder::from_env(env_logger::Env::new().filter_or("ELASTICA_LOG", "warn")).try_init();
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli.command) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Execute one command and return its stdout report.
pub fn run(command: &Command) -> AppResult<String> {
    match command {
        Command::Distance(a) => cmd_distance(a),
        Command::Blend(a) => cmd_blend(a),
        Command::Close(a) => cmd_close(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Info(a) => cmd_info(a),
        Command::Fixture(a) => cmd_fixture(a),
    }
}

fn positive_grid(grid: usize) -> AppResult<()> {
    if grid < 2 {
        return Err(AppError::Usage(format!("--grid must be at least 2, got {grid}")));
    }
    Ok(())
}

/// Smallest multiple of `segments` that is at least `grid`, so the original
/// frames stay nodes of the working grid.
pub fn working_segments(segments: usize, grid: usize) -> usize {
    segments * grid.div_ceil(segments).max(1)
}

fn on_grid(c: &DiscreteCurve, n: usize, skeleton: &Skeleton) -> AppResult<DiscreteCurve> {
    regrid(c, n).map_err(|e| AppError::numeric(e, Some(skeleton)))
}

fn load_pair(first: &Path, second: &Path) -> AppResult<(Animation, Animation)> {
    let a = load_animation(first)?;
    let b = load_animation(second)?;
    check_compatible(&a.skeleton, &b.skeleton)?;
    Ok((a, b))
}

fn dp_config(window: Option<usize>) -> AppResult<DpConfig> {
    if window == Some(0) {
        return Err(AppError::Usage("--window must be at least 1".into()));
    }
    Ok(DpConfig { window, ..DpConfig::default() })
}

pub fn cmd_distance(a: &DistanceArgs) -> AppResult<String> {
    positive_grid(a.grid)?;
    let (x, y) = load_pair(&a.first, &a.second)?;
    let sk = &x.skeleton;
    let num = |e| AppError::numeric(e, Some(sk));
    let c0 = on_grid(&animation_to_curve(&x)?, a.grid, sk)?;
    let c1 = on_grid(&animation_to_curve(&y)?, a.grid, sk)?;
    let config = dp_config(a.window)?;
    let mut out = String::new();
    writeln!(out, "d_P = {}", shortest(curve_distance(&c0, &c1).map_err(num)?)).unwrap();
    if a.reparam.on() {
        let m = dp_match(&c0, &c1, &config).map_err(num)?;
        let d = if a.symmetric { 0.5 * (m.shape_distance + dp_match(&c1, &c0, &config).map_err(num)?.shape_distance) } else { m.shape_distance };
        writeln!(out, "d_S = {}", shortest(d)).unwrap();
        if let Some(path) = &a.warp_csv {
            let rows = m.phi.knots().iter().map(|&(s, p)| vec![shortest(s), shortest(p)]);
            write_atomic(path, csv("s,phi", rows).as_bytes())?;
        }
    } else if a.warp_csv.is_some() {
        return Err(AppError::Usage("--warp-csv needs --reparam on".into()));
    }
    Ok(out)
}

fn blend_file_name(s: f64) -> String {
    format!("blend_s{}.json", shortest(s))
}

pub fn cmd_blend(a: &BlendArgs) -> AppResult<String> {
    positive_grid(a.grid)?;
    if let Some(s) = a.s.iter().find(|s| !(0.0..=1.0).contains(*s)) {
        return Err(AppError::Usage(format!("--s values must lie in [0, 1], got {s}")));
    }
    if a.nudge_eps.is_some_and(|e| !(e > 0.0)) {
        return Err(AppError::Usage("--nudge-eps must be positive".into()));
    }
    let (x, y) = load_pair(&a.first, &a.second)?;
    let sk = &x.skeleton;
    let num = |e| AppError::numeric(e, Some(sk));
    let base = animation_to_curve(&x)?;
    let segments = base.segments();
    let m = working_segments(segments, a.grid);
    let c0 = on_grid(&base, m, sk)?;
    let mut c1 = on_grid(&animation_to_curve(&y)?, m, sk)?;
    if a.reparam.on() {
        let matched = dp_match(&c0, &c1, &DpConfig::default()).map_err(num)?;
        c1 = resample(&c1, &matched.phi).map_err(num)?;
    }
    let start = c0.points()[0].clone();
    let mut outputs = Vec::with_capacity(a.s.len());
    for &s in &a.s {
        let blended = match a.nudge_eps {
            Some(eps) => interpolate_nudged(&c0, &c1, s, eps),
            None => interpolate(&c0, &c1, s),
        }
        .map_err(|e| match e {
            elastica_core::Error::ZeroCrossing { segment } => AppError::Numeric(format!(
                "s = {s}: interpolated SRV values vanish at segment {segment} of the working grid; pass --nudge-eps to repair"
            )),
            other => num(other),
        })?;
        let anchored = blended.right_translate(&start).map_err(num)?;
        let frames = on_grid(&anchored, segments, sk)?;
        let anim = curve_to_animation(&frames, sk, x.fps, x.root_translation.clone())?;
        outputs.push((a.out_dir.join(blend_file_name(s)), anim));
    }
    std::fs::create_dir_all(&a.out_dir).map_err(|e| AppError::io(&a.out_dir, e))?;
    let mut out = String::new();
    for (path, anim) in &outputs {
        write_atomic(path, anim.to_json_string().as_bytes())?;
        writeln!(out, "wrote {}", path.display()).unwrap();
    }
    Ok(out)
}

fn per_joint_gaps(r: &ProdRot) -> Vec<f64> {
    r.parts().iter().map(|p| p.angle()).collect()
}

pub fn cmd_close(a: &CloseArgs) -> AppResult<String> {
    positive_grid(a.grid)?;
    if !(a.step > 0.0 && a.step.is_finite()) {
        return Err(AppError::Usage(format!("--step must be positive, got {}", a.step)));
    }
    if !(a.tol > 0.0) {
        return Err(AppError::Usage(format!("--tol must be positive, got {}", a.tol)));
    }
    let anim = load_animation(&a.input)?;
    let sk = &anim.skeleton;
    let num = |e| AppError::numeric(e, Some(sk));
    let base = animation_to_curve(&anim)?;
    let segments = base.segments();
    let c = on_grid(&base, working_segments(segments, a.grid), sk)?;
    let q = srvt(&c).map_err(num)?;
    let options = ClosingOptions {
        step: a.step,
        max_iters: a.max_iters,
        tol: a.tol,
        line_search: a.line_search.on(),
        mode: GradientMode::General,
    };
    let report = close_curve(&q, &options).map_err(num)?;
    let before = per_joint_gaps(&endpoint(&q).map_err(num)?);
    let after = per_joint_gaps(&endpoint(&report.final_q).map_err(num)?);
    let closed = if report.iterations == 0 {
        anim.clone()
    } else {
        let rebuilt = srvt_inverse(&report.final_q).map_err(num)?.right_translate(&c.points()[0]).map_err(num)?;
        curve_to_animation(&on_grid(&rebuilt, segments, sk)?, sk, anim.fps, anim.root_translation.clone())?
    };
    if let Some(path) = &a.report {
        let rows = report.phi_history.iter().enumerate().map(|(i, p)| vec![i.to_string(), shortest(*p)]);
        write_atomic(path, csv("iter,phi", rows).as_bytes())?;
    }
    write_atomic(&a.output, closed.to_json_string().as_bytes())?;
    let mut out = String::new();
    writeln!(out, "iterations = {}", report.iterations).unwrap();
    writeln!(out, "converged = {}", report.converged).unwrap();
    writeln!(out, "phi_initial = {}", shortest(report.phi_history[0])).unwrap();
    writeln!(out, "phi_final = {}", shortest(*report.phi_history.last().unwrap())).unwrap();
    for ((joint, b), f) in sk.joints().iter().zip(&before).zip(&after) {
        writeln!(out, "joint {}: gap_before = {}, gap_after = {}", joint.name, shortest(*b), shortest(*f)).unwrap();
    }
    if anim.root_translation.is_some() {
        writeln!(out, "note: root translation is passed through unchanged; the clip may keep a translational seam").unwrap();
    }
    Ok(out)
}

fn parse_vector(text: &str) -> AppResult<[f64; 3]> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let bad = || AppError::Usage(format!("vector '{text}' must be x,y,z"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let mut v = [0.0; 3];
    for (slot, p) in v.iter_mut().zip(&parts) {
        *slot = p.parse().map_err(|_| bad())?;
    }
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !n.is_finite() || (n - 1.0).abs() > 1e-6 {
        return Err(AppError::Usage(format!("vector '{text}' must have unit length")));
    }
    Ok(v.map(|x| x / n))
}

fn select_joint(sk: &Skeleton, joint: Option<&str>) -> AppResult<usize> {
    match joint {
        None if sk.len() == 1 => Ok(0),
        None => Err(AppError::Usage(format!("animation has {} joints; choose one with --joint", sk.len()))),
        Some(j) => sk
            .find(j)
            .or_else(|| j.parse::<usize>().ok().filter(|&k| k < sk.len()))
            .ok_or_else(|| AppError::Usage(format!("no joint named or indexed '{j}'"))),
    }
}

pub fn cmd_trace(a: &TraceArgs) -> AppResult<String> {
    if a.samples < 2 {
        return Err(AppError::Usage(format!("--samples must be at least 2, got {}", a.samples)));
    }
    let vectors = a.vectors.iter().map(|v| parse_vector(v)).collect::<AppResult<Vec<_>>>()?;
    let anim = load_animation(&a.input)?;
    let k = select_joint(&anim.skeleton, a.joint.as_deref())?;
    let c = component_curve(&animation_to_curve(&anim)?, k)?;
    let traces = trace_vectors(&c, &vectors, a.samples)?;
    std::fs::create_dir_all(&a.out_dir).map_err(|e| AppError::io(&a.out_dir, e))?;
    let mut out = String::new();
    for (i, t) in traces.iter().enumerate() {
        let path = a.out_dir.join(format!("trace_{i}.csv"));
        write_atomic(&path, t.to_csv().as_bytes())?;
        writeln!(out, "wrote {}", path.display()).unwrap();
    }
    Ok(out)
}

pub fn cmd_info(a: &InfoArgs) -> AppResult<String> {
    let anim = load_animation(&a.input)?;
    let sk = &anim.skeleton;
    let c = animation_to_curve(&anim)?;
    let mut out = String::new();
    writeln!(out, "joints = {}", sk.len()).unwrap();
    writeln!(out, "frames = {}", anim.frame_count()).unwrap();
    writeln!(out, "segments = {}", c.segments()).unwrap();
    writeln!(out, "fps = {}", shortest(anim.fps)).unwrap();
    writeln!(out, "root_translation = {}", if anim.root_translation.is_some() { "yes" } else { "no" }).unwrap();
    let angles: Vec<Vec<f64>> = c
        .points()
        .windows(2)
        .map(|w| w[1].parts().iter().zip(w[0].parts()).map(|(b, a)| b.distance(a)).collect())
        .collect();
    let mut warnings = Vec::new();
    for (k, joint) in sk.joints().iter().enumerate() {
        let max = angles.iter().map(|s| s[k]).fold(0.0, f64::max);
        writeln!(out, "joint {}: max_segment_angle = {}", joint.name, shortest(max)).unwrap();
        if max <= elastica_core::curve::ZERO_TOLERANCE {
            warnings.push(format!("warning: joint '{}' is constant over the clip", joint.name));
        }
        for (i, s) in angles.iter().enumerate() {
            if s[k] >= std::f64::consts::PI - NEAR_PI_WARNING {
                warnings.push(format!("warning: joint '{}' rotates by {} rad over segment {i} (near pi)", joint.name, shortest(s[k])));
            }
        }
    }
    for (i, s) in angles.iter().enumerate() {
        if s.iter().all(|&x| x <= elastica_core::curve::ZERO_TOLERANCE) {
            warnings.push(format!("warning: segment {i} is degenerate (no joint moves)"));
        }
    }
    for w in warnings {
        writeln!(out, "{w}").unwrap();
    }
    Ok(out)
}

pub fn cmd_fixture(a: &FixtureArgs) -> AppResult<String> {
    let frames = a.frames.unwrap_or(match a.kind {
        FixtureKind::QuarterTurn => 11,
        FixtureKind::Random => 60,
        _ => 101,
    });
    if frames < 3 {
        return Err(AppError::Usage(format!("--frames must be at least 3, got {frames}")));
    }
    if a.kind == FixtureKind::Random && a.joints == 0 {
        return Err(AppError::Usage("--joints must be positive".into()));
    }
    let files: Vec<(&str, Animation)> = match a.kind {
        FixtureKind::Spiral => vec![("spiral.json", fixtures::spiral(frames))],
        FixtureKind::QuarterTurn => vec![("quarter_turn.json", fixtures::quarter_turn(frames))],
        FixtureKind::Pair => {
            let (x, y) = fixtures::pair(frames);
            vec![("pair_a.json", x), ("pair_b.json", y)]
        }
        FixtureKind::Random => vec![("random.json", fixtures::random(a.seed, a.joints, frames))],
    };
    std::fs::create_dir_all(&a.out_dir).map_err(|e| AppError::io(&a.out_dir, e))?;
    let mut out = String::new();
    for (name, anim) in files {
        let path = a.out_dir.join(name);
        write_atomic(&path, anim.to_json_string().as_bytes())?;
        writeln!(out, "wrote {}", path.display()).unwrap();
    }
    Ok(out)
}
