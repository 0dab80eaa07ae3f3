use serde::Serialize;

use super::quad::{t_of_a_quadrature, QuadConfig};
use super::trajectory::{Method, Sample, Trajectory};
use super::NumericError;
use crate::model::{z_of_a, CosmoParams};
use crate::scalar::{lit, to_f64, Scalar};

/// A bracket `[a_lo, a_hi]` on which `a(t)` is monotone, tied to time through
/// an anchor `a(anchor_t) = anchor_a`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotonePiece<T> {
    pub a_lo: T,
    pub a_hi: T,
    pub expanding: bool,
    pub anchor_a: T,
    pub anchor_t: T,
}

impl<T: Scalar> MonotonePiece<T> {
    pub fn new(a_lo: T, a_hi: T, expanding: bool, anchor_a: T, anchor_t: T) -> Self {
        Self {
            a_lo,
            a_hi,
            expanding,
            anchor_a,
            anchor_t,
        }
    }

    fn dir(&self) -> T {
        if self.expanding {
            T::one()
        } else {
            -T::one()
        }
    }
}

fn bisect_root<T: Scalar>(p: &CosmoParams<T>, mut lo: T, mut hi: T) -> T {
    let z_lo = z_of_a(p, lo);
    for _ in 0..300 {
        let mid = lo + (hi - lo) * lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        let z = z_of_a(p, mid);
        if z == T::zero() {
            return mid;
        }
        if (z > T::zero()) == (z_lo > T::zero()) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // keep the end on the allowed side so pieces never reach into z < 0
    if z_lo > T::zero() {
        lo
    } else {
        hi
    }
}

/// Simple roots of `z(a)` on `[a_min, a_max]`, located by a log-spaced sign
/// scan with `n_scan` cells followed by bisection.
pub fn roots_of_z<T: Scalar>(p: &CosmoParams<T>, a_min: T, a_max: T, n_scan: usize) -> Vec<T> {
    let n = n_scan.max(2);
    let (l0, l1) = (a_min.ln(), a_max.ln());
    let grid: Vec<T> = (0..=n)
        .map(|i| (l0 + (l1 - l0) * lit::<T>(i as f64) / lit::<T>(n as f64)).exp())
        .collect();
    let mut roots = Vec::new();
    for w in grid.windows(2) {
        let (za, zb) = (z_of_a(p, w[0]), z_of_a(p, w[1]));
        if za == T::zero() {
            roots.push(w[0]);
        } else if (za > T::zero()) != (zb > T::zero()) && zb != T::zero() {
            roots.push(bisect_root(p, w[0], w[1]));
        }
    }
    if z_of_a(p, a_max) == T::zero() {
        roots.push(a_max);
    }
    roots
}

/// Maximal sub-intervals of `[a_min, a_max]` on which `z > 0`.
pub fn monotone_pieces<T: Scalar>(p: &CosmoParams<T>, a_min: T, a_max: T) -> Vec<(T, T)> {
    let mut cuts = vec![a_min];
    cuts.extend(roots_of_z(p, a_min, a_max, 4096));
    cuts.push(a_max);
    cuts.windows(2)
        .filter(|w| w[1] > w[0] && z_of_a(p, w[0] + (w[1] - w[0]) * lit(0.5)) > T::zero())
        .map(|w| (w[0], w[1]))
        .collect()
}

fn map_divergence(e: NumericError) -> NumericError {
    match e {
        NumericError::EndpointNotSimpleRoot { .. } => NumericError::Divergence,
        other => other,
    }
}

/// Solves `t(a) = t` on a monotone piece, where
/// `t(a) = anchor_t ± ∫_{anchor_a}^a da/√z`.
pub fn a_of_t_inverse<T: Scalar>(
    params: &CosmoParams<T>,
    t: T,
    piece: &MonotonePiece<T>,
    cfg: &QuadConfig<T>,
) -> Result<T, NumericError> {
    let (lo, hi) = (piece.a_lo, piece.a_hi);
    if !(lo > T::zero() && lo < hi && hi.is_finite()) {
        return Err(NumericError::NoBracket { t: to_f64(t) });
    }
    let dir = piece.dir();
    let time_from = |a_ref: T, t_ref: T, a: T| -> Result<T, NumericError> {
        Ok(t_ref + dir * t_of_a_quadrature(params, a_ref, a, cfg).map_err(map_divergence)?)
    };
    let t_lo = time_from(piece.anchor_a, piece.anchor_t, lo)?;
    let t_hi = time_from(piece.anchor_a, piece.anchor_t, hi)?;
    let mid = lo + (hi - lo) * lit(0.5);
    let t_of = |a: T| -> Result<T, NumericError> {
        if a < mid {
            time_from(lo, t_lo, a)
        } else {
            time_from(hi, t_hi, a)
        }
    };
    let scale = T::one().max(t.abs());
    let edge_tol = lit::<T>(1e-13) * scale;
    let (t_min, t_max) = if t_lo < t_hi { (t_lo, t_hi) } else { (t_hi, t_lo) };
    if t < t_min - edge_tol || t > t_max + edge_tol {
        return Err(NumericError::NoBracket { t: to_f64(t) });
    }
    if (t - t_lo).abs() <= edge_tol {
        return Ok(lo);
    }
    if (t - t_hi).abs() <= edge_tol {
        return Ok(hi);
    }
    // g(a) = dir (t(a) − t) increases with a
    let g = |a: T| -> Result<T, NumericError> { Ok(dir * (t_of(a)? - t)) };
    let (mut a_l, mut a_h) = (lo, hi);
    let (g_l, g_h) = (dir * (t_lo - t), dir * (t_hi - t));
    let mut a = a_l + (a_h - a_l) * (-g_l / (g_h - g_l));
    if !(a > a_l && a < a_h) {
        a = mid;
    }
    let fine = lit::<T>(1e-14) * scale;
    let mut best = (T::infinity(), a);
    for _ in 0..200 {
        let ga = g(a)?;
        if ga.abs() < best.0 {
            best = (ga.abs(), a);
        }
        if ga.abs() <= fine {
            break;
        }
        if ga < T::zero() {
            a_l = a;
        } else {
            a_h = a;
        }
        if a_h - a_l <= lit::<T>(4.0) * T::epsilon() * a_h {
            break;
        }
        // Newton step with dt/da = dir/√z, falling back to bisection
        let z = z_of_a(params, a);
        let newton = a - ga * z.max(T::zero()).sqrt();
        a = if newton > a_l && newton < a_h && z > T::zero() {
            newton
        } else {
            a_l + (a_h - a_l) * lit(0.5)
        };
    }
    if best.0 <= lit::<T>(1e-9) * scale {
        Ok(best.1)
    } else {
        Err(NumericError::Divergence)
    }
}

const ROOT_GAP: f64 = 1e-10;
const SCAN_CELLS: usize = 256;

/// End of the monotone piece starting at `a` in direction `dir`, far enough
/// to cover `need` time units unless a turning point comes first.
///
/// Candidates are `a·exp(±x)` with `x` doubling. A candidate whose time
/// integral fails (an asymptote at a double root of `z`) becomes a barrier
/// and the search bisects towards it instead.
fn extent<T: Scalar>(
    p: &CosmoParams<T>,
    a: T,
    dir: T,
    need: T,
    cfg: &QuadConfig<T>,
) -> Result<(T, bool), NumericError> {
    let gap = lit::<T>(ROOT_GAP);
    let near_start = a * (T::one() + dir * gap);
    let floor = lit::<T>(super::A_FLOOR);
    let mut good = T::zero();
    let mut barrier: Option<T> = None;
    let mut x = lit::<T>(1.0 / 64.0);
    for _ in 0..200 {
        let cand = a * (dir * x).exp();
        if !(cand > floor) || !cand.is_finite() {
            break;
        }
        let roots = if dir > T::zero() {
            roots_of_z(p, near_start, cand, SCAN_CELLS)
        } else {
            roots_of_z(p, cand, near_start, SCAN_CELLS)
        };
        let first = if dir > T::zero() {
            roots.first()
        } else {
            roots.last()
        };
        if let Some(&r) = first {
            return Ok((r, true));
        }
        match t_of_a_quadrature(p, a, cand, cfg) {
            Ok(t) if t.is_finite() => {
                if t.abs() >= need {
                    return Ok((cand, false));
                }
                good = x;
            }
            Ok(_) | Err(NumericError::NoConvergence { .. }) | Err(NumericError::NonPositiveIntegrand { .. }) => {
                barrier = Some(x);
            }
            Err(e) => return Err(e),
        }
        x = match barrier {
            Some(b) => {
                if b - good <= lit::<T>(1e-13) * b {
                    break;
                }
                good + (b - good) * lit(0.5)
            }
            None => x * lit(2.0),
        };
    }
    Err(NumericError::TargetNotReached { a: to_f64(a) })
}

fn forward<T: Scalar>(
    p: &CosmoParams<T>,
    t_start: T,
    a_start: T,
    mut dir: T,
    times: &[T],
    cfg: &QuadConfig<T>,
) -> Result<Vec<(T, T)>, NumericError> {
    let mut out = Vec::with_capacity(times.len());
    let (mut cur_t, mut cur_a) = (t_start, a_start);
    let mut idx = 0;
    while idx < times.len() {
        let need = times[times.len() - 1] - cur_t;
        let (end_a, turning) = extent(p, cur_a, dir, need, cfg)?;
        let t_end = cur_t + t_of_a_quadrature(p, cur_a, end_a, cfg)?.abs();
        let piece = MonotonePiece::new(
            cur_a.min(end_a),
            cur_a.max(end_a),
            dir > T::zero(),
            cur_a,
            cur_t,
        );
        while idx < times.len() && times[idx] <= t_end {
            let a = a_of_t_inverse(p, times[idx], &piece, cfg)?;
            out.push((a, dir * z_of_a(p, a).max(T::zero()).sqrt()));
            idx += 1;
        }
        if idx < times.len() {
            if !turning {
                return Err(NumericError::NoBracket {
                    t: to_f64(times[idx]),
                });
            }
            cur_t = t_end;
            cur_a = end_a;
            dir = -dir;
        }
    }
    Ok(out)
}

/// Samples `a(t)` on an increasing grid by quadrature inversion from
/// `a(anchor_t) = anchor_a`, crossing turning points by reversing direction.
/// Grid points before the anchor are reached by time reversal.
pub fn quadrature_trajectory<T: Scalar>(
    params: &CosmoParams<T>,
    anchor_t: T,
    anchor_a: T,
    expanding: bool,
    grid: &[T],
    cfg: &QuadConfig<T>,
) -> Result<Trajectory<T>, NumericError> {
    if grid.is_empty() || grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(NumericError::InvalidGrid);
    }
    if !(anchor_a > T::zero()) {
        return Err(NumericError::NonPositiveScaleFactor {
            a: to_f64(anchor_a),
        });
    }
    let dir = if expanding { T::one() } else { -T::one() };
    let split = grid.partition_point(|&t| t < anchor_t);
    let back_times: Vec<T> = grid[..split]
        .iter()
        .rev()
        .map(|&t| anchor_t + anchor_t - t)
        .collect();
    let mut back = forward(params, anchor_t, anchor_a, -dir, &back_times, cfg)?;
    back.reverse();
    let fwd = forward(params, anchor_t, anchor_a, dir, &grid[split..], cfg)?;
    let samples = grid
        .iter()
        .zip(back.into_iter().map(|(a, v)| (a, -v)).chain(fwd))
        .map(|(&t, (a, adot))| Sample { t, a, adot })
        .collect();
    Ok(Trajectory::new(*params, Method::Quadrature, samples))
}
