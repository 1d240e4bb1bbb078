//! Floating point layer: sampled signals, iterated integrals, truncated
//! Fliess operators, RK4 integration of the Abel equation and the center and
//! moment checks built on them.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polyring::UPoly;
use crate::rational::to_f64;
use crate::report::CheckReport;
use crate::series::{shuffle_words, NCSeries};
use crate::words::Word;

pub const DEFAULT_BLOWUP: f64 = 1e6;
pub const DENOMINATOR_MARGIN: f64 = 1e-9;
pub const ODE_TOLERANCE: f64 = 1e-6;
pub const QUADRATURE_TOLERANCE: f64 = 1e-5;
/// Bound on `|E_x1[u](omega)|` accepted by [`center_check`].
pub const PERIOD_TOLERANCE: f64 = 1e-6;

/// `m` channels sampled on the uniform grid `k * step`, `k = 0..grid`, over
/// `[0, omega]`. Channel `i` (1-based) drives letter `x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Signal {
    omega: f64,
    step: f64,
    channels: Vec<Vec<f64>>,
}

impl Signal {
    pub fn from_channels(omega: f64, channels: Vec<Vec<f64>>) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidArgument(format!("omega must be positive, got {omega}")));
        }
        let n = channels.first().map_or(0, Vec::len);
        if n < 2 {
            return Err(Error::InvalidArgument("a signal needs at least two grid points".into()));
        }
        if channels.iter().any(|c| c.len() != n) {
            return Err(Error::ShapeMismatch("channels have different lengths".into()));
        }
        Ok(Signal { omega, step: omega / (n - 1) as f64, channels })
    }

    /// Samples `f(i, t)` for channels `i = 1..=m`.
    pub fn from_fn(m: usize, omega: f64, grid: usize, f: impl Fn(usize, f64) -> f64) -> Result<Self> {
        if m == 0 || grid < 2 {
            return Err(Error::InvalidArgument(format!("need m >= 1 and grid >= 2, got m={m}, grid={grid}")));
        }
        let step = omega / (grid - 1) as f64;
        let channels = (1..=m).map(|i| (0..grid).map(|k| f(i, k as f64 * step)).collect()).collect();
        Signal::from_channels(omega, channels)
    }

    pub fn zero(m: usize, omega: f64, grid: usize) -> Result<Self> {
        Signal::from_fn(m, omega, grid, |_, _| 0.0)
    }

    pub fn constant(values: &[f64], omega: f64, grid: usize) -> Result<Self> {
        Signal::from_fn(values.len(), omega, grid, |i, _| values[i - 1])
    }

    /// `u_1 = cos`, `u_2 = sin`, remaining channels zero.
    pub fn cos_sin(m: usize, omega: f64, grid: usize) -> Result<Self> {
        Signal::from_fn(m, omega, grid, |i, t| match i {
            1 => t.cos(),
            2 => t.sin(),
            _ => 0.0,
        })
    }

    /// `u_1 = 1`, remaining channels zero, so `E_x1[u](t) = t`.
    pub fn ramp(m: usize, omega: f64, grid: usize) -> Result<Self> {
        Signal::from_fn(m, omega, grid, |i, _| if i == 1 { 1.0 } else { 0.0 })
    }

    /// `v_i(t) = p_i(sin t) cos t`, which satisfies the composition condition
    /// whenever `sin omega = 0`.
    pub fn composition(polys: &[UPoly], omega: f64, grid: usize) -> Result<Self> {
        Signal::from_fn(polys.len(), omega, grid, |i, t| polys[i - 1].eval_f64(t.sin()) * t.cos())
    }

    /// Named inputs for the command line: `cos-sin`, `ramp`, `zero`,
    /// `composition`.
    pub fn preset(name: &str, m: usize, omega: f64, grid: usize) -> Result<Self> {
        match name {
            "cos-sin" => Signal::cos_sin(m, omega, grid),
            "ramp" => Signal::ramp(m, omega, grid),
            "zero" => Signal::zero(m, omega, grid),
            "composition" => {
                let polys: Vec<UPoly> = (1..=m).map(|i| UPoly::from_ints(&[1, 0, i as i64])).collect();
                Signal::composition(&polys, omega, grid)
            }
            _ => Err(Error::InvalidArgument(format!("unknown signal preset `{name}`"))),
        }
    }

    pub fn m(&self) -> usize {
        self.channels.len()
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn grid_size(&self) -> usize {
        self.channels[0].len()
    }

    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.grid_size() {
            self.omega
        } else {
            k as f64 * self.step
        }
    }

    /// Channel `i`, 1-based.
    pub fn channel(&self, i: usize) -> Result<&[f64]> {
        if i == 0 || i > self.m() {
            return Err(Error::LetterOutOfRange { letter: i, m: self.m() });
        }
        Ok(&self.channels[i - 1])
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }

    /// Grid position of `t` as `(index, fraction)`.
    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let slack = 1e-9 * self.omega;
        if !(t >= -slack && t <= self.omega + slack) {
            return Err(Error::OutOfGrid { t, omega: self.omega });
        }
        let x = (t / self.step).clamp(0.0, (self.grid_size() - 1) as f64);
        let k = (x.floor() as usize).min(self.grid_size() - 2);
        Ok((k, x - k as f64))
    }

    /// Linear interpolation of a trace sampled on this grid.
    pub fn sample(&self, trace: &[f64], t: f64) -> Result<f64> {
        let (k, frac) = self.locate(t)?;
        Ok(trace[k] + frac * (trace[k + 1] - trace[k]))
    }
}

/// Cumulative trapezoid `int_0^{t_k} f`.
pub fn cumtrapz(values: &[f64], step: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * step * (w[0] + w[1]);
        out.push(acc);
    }
    out
}

pub fn trapz(values: &[f64], step: f64) -> f64 {
    cumtrapz(values, step).last().copied().unwrap_or(0.0)
}

/// Memoized traces `t_k -> E_eta[u](t_k)`, keyed by word. A word reuses the
/// trace of its tail, so a sweep costs one cumulative quadrature per letter.
pub struct IntegralCache<'a> {
    u: &'a Signal,
    memo: HashMap<Word, Vec<f64>>,
}

impl<'a> IntegralCache<'a> {
    pub fn new(u: &'a Signal) -> Self {
        IntegralCache { u, memo: HashMap::new() }
    }

    pub fn signal(&self) -> &Signal {
        self.u
    }

    pub fn trace(&mut self, eta: &Word) -> Result<&[f64]> {
        self.fill(eta)?;
        Ok(&self.memo[eta])
    }

    fn fill(&mut self, eta: &Word) -> Result<()> {
        if self.memo.contains_key(eta) {
            return Ok(());
        }
        let trace = match eta.first() {
            None => vec![1.0; self.u.grid_size()],
            Some(i) => {
                let ui = self.u.channel(i)?;
                let tail = eta.tail();
                self.fill(&tail)?;
                let inner = &self.memo[&tail];
                let integrand: Vec<f64> = ui.iter().zip(inner).map(|(a, b)| a * b).collect();
                cumtrapz(&integrand, self.u.step)
            }
        };
        self.memo.insert(eta.clone(), trace);
        Ok(())
    }

    /// `E_eta[u](t)`.
    pub fn at(&mut self, eta: &Word, t: f64) -> Result<f64> {
        let (k, frac) = self.u.locate(t)?;
        let trace = self.trace(eta)?;
        Ok(trace[k] + frac * (trace[k + 1] - trace[k]))
    }

    /// `sum <c, eta> E_eta[u]` over the whole grid.
    pub fn fliess_trace(&mut self, c: &NCSeries) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.u.grid_size()];
        for (w, coeff) in c.terms() {
            let k = to_f64(coeff);
            let trace = self.trace(w)?;
            for (o, e) in out.iter_mut().zip(trace) {
                *o += k * e;
            }
        }
        Ok(out)
    }
}

/// `E_eta[u](t)` by nested trapezoidal quadrature.
pub fn iterated_integral(eta: &Word, u: &Signal, t: f64) -> Result<f64> {
    IntegralCache::new(u).at(eta, t)
}

/// Truncated Fliess operator `F_c[u](t)`.
pub fn fliess_eval(c: &NCSeries, u: &Signal, t: f64) -> Result<f64> {
    let trace = IntegralCache::new(u).fliess_trace(c)?;
    u.sample(&trace, t)
}

// Cubic Lagrange value halfway between nodes k and k+1.
fn midpoint(values: &[f64], k: usize) -> f64 {
    let n = values.len();
    if n < 4 {
        return 0.5 * (values[k] + values[k + 1]);
    }
    if k == 0 {
        (5.0 * values[0] + 15.0 * values[1] - 5.0 * values[2] + values[3]) / 16.0
    } else if k + 2 == n {
        (5.0 * values[n - 1] + 15.0 * values[n - 2] - 5.0 * values[n - 3] + values[n - 4]) / 16.0
    } else {
        (-values[k - 1] + 9.0 * values[k] + 9.0 * values[k + 1] - values[k + 2]) / 16.0
    }
}

/// RK4 on the grid of `v` for `z' = sum_{i=1}^m v_i z^{i+1}`, `z(0) = r`.
/// Off-grid coefficients at the half steps come from cubic interpolation.
pub fn integrate_abel(v: &Signal, m: usize, r: f64) -> Result<Vec<f64>> {
    integrate_abel_bounded(v, m, r, DEFAULT_BLOWUP)
}

pub fn integrate_abel_bounded(v: &Signal, m: usize, r: f64, bound: f64) -> Result<Vec<f64>> {
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // also rejects NaN
    if !(r >= 0.0) {
        return Err(Error::InvalidArgument(format!("initial value must be >= 0, got {r}")));
    }
    if m == 0 || m > v.m() {
        return Err(Error::InvalidArgument(format!("degree m={m} needs 1..={} channels", v.m())));
    }
    let n = v.grid_size();
    if n < 3 {
        return Err(Error::InvalidArgument("need at least two integration steps".into()));
    }
    let h = v.step();
    let rhs = |coeffs: &[f64], z: f64| {
        let mut acc = 0.0;
        let mut zp = z * z;
        for c in coeffs {
            acc += c * zp;
            zp *= z;
        }
        acc
    };
    let at_node = |k: usize| -> Vec<f64> { v.channels[..m].iter().map(|c| c[k]).collect() };
    let at_mid = |k: usize| -> Vec<f64> { v.channels[..m].iter().map(|c| midpoint(c, k)).collect() };

    let mut z = Vec::with_capacity(n);
    z.push(r);
    let mut cur = r;
    let mut left = at_node(0);
    for k in 0..n - 1 {
        let mid = at_mid(k);
        let right = at_node(k + 1);
        let k1 = rhs(&left, cur);
        let k2 = rhs(&mid, cur + 0.5 * h * k1);
        let k3 = rhs(&mid, cur + 0.5 * h * k2);
        let k4 = rhs(&right, cur + h * k3);
        cur += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if !cur.is_finite() || cur.abs() > bound {
            return Err(Error::Blowup { t: v.time(k + 1), bound });
        }
        z.push(cur);
        left = right;
    }
    Ok(z)
}

// 1 - r E_x1[u] on the grid, checked against the margin up to index `upto`.
fn denominators(u: &Signal, r: f64, upto: usize) -> Result<Vec<f64>> {
    let e1 = cumtrapz(u.channel(1)?, u.step());
    let d: Vec<f64> = e1.iter().map(|e| 1.0 - r * e).collect();
    if let Some(k) = (0..=upto).find(|&k| d[k] <= DENOMINATOR_MARGIN) {
        return Err(Error::DenominatorVanished { t: u.time(k), value: d[k] });
    }
    Ok(d)
}

/// `v_i = u_i - r u_{i+1} / (1 - r E_x1[u])` for `i < m`, `v_m = u_m`.
pub fn u_to_v(u: &Signal, r: f64) -> Result<Signal> {
    let d = denominators(u, r, u.grid_size() - 1)?;
    let m = u.m();
    let channels = (0..m)
        .map(|i| {
            if i + 1 == m {
                u.channels[i].clone()
            } else {
                u.channels[i].iter().zip(&u.channels[i + 1]).zip(&d).map(|((a, b), dk)| a - r * b / dk).collect()
            }
        })
        .collect();
    Signal::from_channels(u.omega(), channels)
}

/// `z(t) = r / (1 - r E_x1[u](t))`.
pub fn closed_form_solution(u: &Signal, r: f64, t: f64) -> Result<f64> {
    let (k, _) = u.locate(t)?;
    let d = denominators(u, r, (k + 1).min(u.grid_size() - 1))?;
    let dt = u.sample(&d, t)?;
    Ok(r / dt)
}

/// The closed form on every grid point.
pub fn closed_form_trace(u: &Signal, r: f64) -> Result<Vec<f64>> {
    let d = denominators(u, r, u.grid_size() - 1)?;
    Ok(d.iter().map(|dk| r / dk).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterSample {
    pub r: f64,
    pub z_end: f64,
    /// `|z(omega) - r|`.
    pub return_error: f64,
    /// `max_t |z(t) - r / (1 - r E_x1[u](t))|`.
    pub closed_form_error: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CenterReport {
    pub e_x1_at_omega: f64,
    pub samples: Vec<CenterSample>,
    pub report: CheckReport,
}

/// Integrates the Abel equation with `v = u_to_v(u, r)` for each `r` and
/// measures how far `z(omega)` lands from `r`.
pub fn center_check(u: &Signal, rs: &[f64]) -> Result<CenterReport> {
    if u.m() < 2 {
        return Err(Error::InvalidArgument("center check needs m >= 2".into()));
    }
    let e_end = trapz(u.channel(1)?, u.step());
    if e_end.abs() > PERIOD_TOLERANCE {
        return Err(Error::PreconditionFailed(format!("E_x1[u](omega) = {e_end:e} is not zero")));
    }
    let samples = rs
        .par_iter()
        .map(|&r| {
            let v = u_to_v(u, r)?;
            let z = integrate_abel(&v, u.m(), r)?;
            let exact = closed_form_trace(u, r)?;
            let closed_form_error = z.iter().zip(&exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            let z_end = *z.last().unwrap_or(&r);
            Ok(CenterSample { r, z_end, return_error: (z_end - r).abs(), closed_form_error })
        })
        .collect::<Result<Vec<_>>>()?;
    let worst = samples.iter().map(|s| s.return_error.max(s.closed_form_error)).fold(0.0, f64::max);
    let detail = samples.iter().map(|s| format!("r={}: |z(w)-r|={:.3e}", s.r, s.return_error)).collect::<Vec<_>>().join(", ");
    Ok(CenterReport { e_x1_at_omega: e_end, samples, report: CheckReport::numeric("center", worst, ODE_TOLERANCE, detail) })
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentEntry {
    pub i: usize,
    pub k: usize,
    /// `int_0^omega v_i E_x1[v]^k`.
    pub integral: f64,
    /// `k! E_{x_i x_1^k}[v](omega)`.
    pub iterated: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MomentReport {
    pub entries: Vec<MomentEntry>,
    /// Both evaluations of each moment agree.
    pub agreement: CheckReport,
    /// All moments vanish.
    pub vanishing: CheckReport,
}

/// Moments `int v_i E_x1^k` for `i = 2..m`, `k = 0..=kmax`, each computed by
/// direct quadrature and as an iterated integral.
pub fn moment_check(v: &Signal, kmax: usize, tolerance: f64) -> Result<MomentReport> {
    let mut cache = IntegralCache::new(v);
    let e1 = cache.trace(&Word::letter(1))?.to_vec();
    let mut entries = Vec::new();
    for i in 2..=v.m() {
        let vi = v.channel(i)?;
        let mut word = Word::letter(i);
        let mut fact = 1.0;
        for k in 0..=kmax {
            if k > 0 {
                word = word.append(1);
                fact *= k as f64;
            }
            let integrand: Vec<f64> = vi.iter().zip(&e1).map(|(a, e)| a * e.powi(k as i32)).collect();
            let integral = trapz(&integrand, v.step());
            let iterated = fact * cache.trace(&word)?.last().copied().unwrap_or(0.0);
            entries.push(MomentEntry { i, k, integral, iterated });
        }
    }
    let agree = entries.iter().map(|e| (e.integral - e.iterated).abs()).fold(0.0, f64::max);
    let size = entries.iter().map(|e| e.integral.abs().max(e.iterated.abs())).fold(0.0, f64::max);
    Ok(MomentReport {
        agreement: CheckReport::numeric("moment-quadrature", agree, tolerance, format!("{} moments", entries.len())),
        vanishing: CheckReport::numeric("moment-vanishing", size, tolerance, format!("largest |moment| {size:.3e}")),
        entries,
    })
}

/// Checks `E_{x_i}[v](omega) = E_{x_i}[u](omega) - r sum_k r^k k! E_{x_{i+1} x_1^k}[u](omega)`
/// for `v = u_to_v(u, r)`, summing until two consecutive terms drop below
/// `tolerance / 1000` or `kmax` is reached.
pub fn uv_moment_equivalence(u: &Signal, r: f64, kmax: usize, tolerance: f64) -> Result<CheckReport> {
    let v = u_to_v(u, r)?;
    let mut ucache = IntegralCache::new(u);
    let m = u.m();
    let mut worst: f64 = 0.0;
    let mut terms_used = 0;
    for i in 1..=m {
        let lhs = trapz(v.channel(i)?, v.step());
        let mut rhs = ucache.trace(&Word::letter(i))?.last().copied().unwrap_or(0.0);
        if i < m {
            let mut word = Word::letter(i + 1);
            let mut scale = r;
            let mut small = 0;
            for k in 0..=kmax {
                if k > 0 {
                    word = word.append(1);
                    scale *= r * k as f64;
                }
                let term = scale * ucache.trace(&word)?.last().copied().unwrap_or(0.0);
                rhs -= term;
                terms_used = terms_used.max(k + 1);
                small = if term.abs() < tolerance * 1e-3 { small + 1 } else { 0 };
                if small == 2 {
                    break;
                }
            }
        }
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(CheckReport::numeric("uv-moment-equivalence", worst, tolerance, format!("r={r}, up to {terms_used} series terms")))
}

/// Words over `x_1..x_m` of length `1..=max_len`.
pub fn words_up_to_length(m: usize, max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut layer = vec![Word::empty()];
    for _ in 0..max_len {
        layer = layer.iter().flat_map(|w| (1..=m).map(move |i| w.append(i))).collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Worst `|E_eta E_xi - E_{eta sh xi}|` at `omega` over nonempty word pairs
/// with `|eta| + |xi| <= max_total`.
pub fn shuffle_duality(u: &Signal, max_total: usize) -> Result<f64> {
    let mut cache = IntegralCache::new(u);
    let omega = u.omega();
    let words = words_up_to_length(u.m(), max_total.saturating_sub(1));
    let mut worst: f64 = 0.0;
    for a in &words {
        for b in &words {
            if a.len() + b.len() > max_total {
                continue;
            }
            let lhs = cache.at(a, omega)? * cache.at(b, omega)?;
            let mut shuffled = Vec::new();
            shuffle_words(a, b, &mut |w| shuffled.push(w));
            let mut rhs = 0.0;
            for w in &shuffled {
                rhs += cache.at(w, omega)?;
            }
            worst = worst.max((lhs - rhs).abs());
        }
    }
    Ok(worst)
}

/// Max grid error of RK4 against `z = r / (1 - r sin t)` for `z' = cos(t) z^2`
/// on `[0, omega]` with `steps` steps.
pub fn rk4_error(r: f64, omega: f64, steps: usize) -> Result<f64> {
    let v = Signal::from_fn(1, omega, steps + 1, |_, t| t.cos())?;
    let z = integrate_abel(&v, 1, r)?;
    Ok(z.iter().enumerate().map(|(k, zk)| (zk - r / (1.0 - r * v.time(k).sin())).abs()).fold(0.0, f64::max))
}

/// Error ratio when the step is halved; close to 16 for a fourth order method.
pub fn convergence_ratio(r: f64, omega: f64, steps: usize) -> Result<f64> {
    Ok(rk4_error(r, omega, steps)? / rk4_error(r, omega, 2 * steps)?)
}
