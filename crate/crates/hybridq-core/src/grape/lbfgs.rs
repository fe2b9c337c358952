//! Limited-memory BFGS with a strong-Wolfe line search.

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};

/// Objective returning the value and gradient at a point.
pub type Objective<'a> = dyn FnMut(&[f64]) -> Result<(f64, Vec<f64>)> + 'a;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn step(x: &[f64], d: &[f64], alpha: f64) -> Vec<f64> {
    x.iter().zip(d).map(|(xi, di)| xi + alpha * di).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WolfeParams {
    pub c1: f64,
    pub c2: f64,
    pub max_evals: usize,
    pub alpha_max: f64,
}

impl WolfeParams {
    pub fn new(c1: f64, c2: f64) -> Result<Self> {
        if !(0.0 < c1 && c1 < c2 && c2 < 1.0) {
            return Err(Error::InvalidArgument(alloc::format!("Wolfe constants need 0 < c1 < c2 < 1, got c1={c1}, c2={c2}")));
        }
        Ok(Self { c1, c2, max_evals: 40, alpha_max: 1e8 })
    }
}

impl Default for WolfeParams {
    fn default() -> Self {
        Self { c1: 1e-4, c2: 0.9, max_evals: 40, alpha_max: 1e8 }
    }
}

/// Accepted step with the objective value and gradient there.
#[derive(Clone, Debug)]
pub struct LineSearchStep {
    pub alpha: f64,
    pub f: f64,
    pub grad: Vec<f64>,
    pub evals: usize,
}

fn interpolate(a_lo: f64, f_lo: f64, d_lo: f64, a_hi: f64, f_hi: f64) -> f64 {
    let h = a_hi - a_lo;
    let denom = 2.0 * (f_hi - f_lo - d_lo * h);
    let lo = a_lo.min(a_hi);
    let width = (a_hi - a_lo).abs();
    let mut a = if denom > 0.0 { a_lo - d_lo * h * h / denom } else { f64::NAN };
    if !a.is_finite() || a < lo + 0.1 * width || a > lo + 0.9 * width {
        a = 0.5 * (a_lo + a_hi);
    }
    a
}

/// Strong-Wolfe step along `d` from `x`, where `f0` and `g0` are the value and gradient at `x`.
pub fn wolfe_line_search(
    f: &mut Objective<'_>,
    x: &[f64],
    f0: f64,
    g0: &[f64],
    d: &[f64],
    alpha0: f64,
    params: &WolfeParams,
) -> Result<LineSearchStep> {
    let dphi0 = dot(g0, d);
    if !(dphi0 < 0.0) {
        return Err(Error::LineSearch);
    }
    let mut evals = 0usize;
    let mut eval = |a: f64, evals: &mut usize| -> Result<(f64, Vec<f64>, f64)> {
        *evals += 1;
        let (fa, ga) = f(&step(x, d, a))?;
        if !fa.is_finite() {
            return Err(Error::NonFinite("objective"));
        }
        let da = dot(&ga, d);
        Ok((fa, ga, da))
    };
    let suff = |a: f64, fa: f64| fa <= f0 + params.c1 * a * dphi0;
    let curv = |da: f64| da.abs() <= -params.c2 * dphi0;

    let (mut a_prev, mut f_prev, mut d_prev) = (0.0, f0, dphi0);
    let mut a = alpha0.min(params.alpha_max);
    let mut bracket: Option<(f64, f64, f64, f64, f64)> = None;
    let mut first = true;
    while evals < params.max_evals {
        let (fa, ga, da) = eval(a, &mut evals)?;
        if !suff(a, fa) || (!first && fa >= f_prev) {
            bracket = Some((a_prev, f_prev, d_prev, a, fa));
            break;
        }
        if curv(da) {
            return Ok(LineSearchStep { alpha: a, f: fa, grad: ga, evals });
        }
        if da >= 0.0 {
            bracket = Some((a, fa, da, a_prev, f_prev));
            break;
        }
        a_prev = a;
        f_prev = fa;
        d_prev = da;
        first = false;
        a = (2.0 * a).min(params.alpha_max);
        if a_prev >= params.alpha_max {
            return Err(Error::LineSearch);
        }
    }
    let (mut lo, mut flo, mut dlo, mut hi, mut fhi) = bracket.ok_or(Error::LineSearch)?;
    while evals < params.max_evals {
        let aj = interpolate(lo, flo, dlo, hi, fhi);
        if (hi - lo).abs() < 1e-16 * lo.abs().max(1e-300) {
            break;
        }
        let (fj, gj, dj) = eval(aj, &mut evals)?;
        if !suff(aj, fj) || fj >= flo {
            hi = aj;
            fhi = fj;
        } else {
            if curv(dj) {
                return Ok(LineSearchStep { alpha: aj, f: fj, grad: gj, evals });
            }
            if dj * (hi - lo) >= 0.0 {
                hi = lo;
                fhi = flo;
            }
            lo = aj;
            flo = fj;
            dlo = dj;
        }
    }
    Err(Error::LineSearch)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Target,
    GradientNorm,
    MaxIter,
    WallTime,
    LineSearchFailure,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LbfgsOptions {
    pub memory: usize,
    pub max_iter: usize,
    pub grad_tol: f64,
    /// Stop once the objective is at or below this value.
    pub f_target: f64,
    /// Seconds, measured with the supplied clock.
    pub max_wall_time: f64,
    pub wolfe: WolfeParams,
}

impl Default for LbfgsOptions {
    fn default() -> Self {
        Self {
            memory: 10,
            max_iter: 1000,
            grad_tol: 1e-10,
            f_target: f64::NEG_INFINITY,
            max_wall_time: f64::INFINITY,
            wolfe: WolfeParams::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LbfgsResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub grad_norm: f64,
    pub iterations: usize,
    pub evaluations: usize,
    /// Objective after each accepted iteration, starting with the initial value.
    pub history: Vec<f64>,
    pub skipped_pairs: usize,
    pub termination: Termination,
}

fn two_loop(g: &[f64], pairs: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q = g.to_vec();
    let mut alphas = Vec::with_capacity(pairs.len());
    for (s, y, rho) in pairs.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = pairs.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in pairs.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

/// Minimizes `f` from `x0`. `clock` returns seconds and is only consulted for the wall-time cap.
pub fn lbfgs_minimize(
    f: &mut Objective<'_>,
    x0: &[f64],
    opts: &LbfgsOptions,
    clock: Option<&dyn Fn() -> f64>,
) -> Result<LbfgsResult> {
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("initial point"));
    }
    let start = clock.map(|c| c());
    let elapsed = || match (clock, start) {
        (Some(c), Some(s)) => c() - s,
        _ => 0.0,
    };
    let mut x = x0.to_vec();
    let (mut fx, mut g) = f(&x)?;
    if !fx.is_finite() {
        return Err(Error::NonFinite("objective"));
    }
    let mut evaluations = 1;
    let mut history = alloc::vec![fx];
    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut skipped = 0;
    let mut iterations = 0;
    let mut restarted = false;
    let termination = loop {
        let gn = norm(&g);
        if fx <= opts.f_target {
            break Termination::Target;
        }
        if gn <= opts.grad_tol {
            break Termination::GradientNorm;
        }
        if iterations >= opts.max_iter {
            break Termination::MaxIter;
        }
        if elapsed() >= opts.max_wall_time {
            break Termination::WallTime;
        }
        let mut d = two_loop(&g, &pairs);
        if dot(&d, &g) >= 0.0 {
            pairs.clear();
            d = g.iter().map(|v| -v).collect();
        }
        let alpha0 = if pairs.is_empty() { (1.0 / norm(&d)).min(1.0) } else { 1.0 };
        match wolfe_line_search(f, &x, fx, &g, &d, alpha0, &opts.wolfe) {
            Ok(ls) => {
                evaluations += ls.evals;
                let x_new = step(&x, &d, ls.alpha);
                let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
                let y: Vec<f64> = ls.grad.iter().zip(&g).map(|(a, b)| a - b).collect();
                let sy = dot(&s, &y);
                if sy > 0.0 {
                    if pairs.len() == opts.memory {
                        pairs.pop_front();
                    }
                    pairs.push_back((s, y, 1.0 / sy));
                } else {
                    skipped += 1;
                }
                x = x_new;
                fx = ls.f;
                g = ls.grad;
                iterations += 1;
                history.push(fx);
                restarted = false;
            }
            Err(Error::LineSearch) => {
                if restarted || pairs.is_empty() {
                    break Termination::LineSearchFailure;
                }
                pairs.clear();
                restarted = true;
            }
            Err(e) => return Err(e),
        }
    };
    Ok(LbfgsResult { grad_norm: norm(&g), x, f: fx, iterations, evaluations, history, skipped_pairs: skipped, termination })
}
