//! High-order b0 sequences, the exponential convergence law and the
//! odd/even extrapolation of approximant sequences.

use rug::Float;

use crate::error::{Error, Result};
use crate::precision::{BigReal, Precision};
use crate::vpt::{Resummation, StrongCouplingResult};

/// One order of a b0 sequence. Failed orders keep their error in place.
#[derive(Debug, Clone)]
pub struct SequencePoint {
    pub order: usize,
    pub outcome: Result<StrongCouplingResult>,
    /// `|b0 - b0'|` against the re-run at escalated precision, when requested.
    pub uncertainty: Option<BigReal>,
}

impl SequencePoint {
    pub fn b0(&self) -> Option<&BigReal> {
        self.outcome.as_ref().ok().map(|r| &r.b0)
    }
}

/// b0^(N) for N = 1..=max_order along the anchored branch.
pub fn b0_sequence(dimension: &BigReal, max_order: usize, prec: Precision, escalate: bool) -> Result<Vec<SequencePoint>> {
    if max_order < 2 {
        return Err(Error::InvalidOrder { got: max_order, min: 2 });
    }
    let run = |p: Precision| -> Result<Vec<Result<StrongCouplingResult>>> {
        let r = Resummation::new(&Float::with_val(p.bits(), dimension), max_order, p)?;
        Ok(r.b0_chain(max_order))
    };
    let (base, high) = if escalate {
        let (a, b) = rayon::join(|| run(prec), || run(prec.escalated()));
        (a?, Some(b?))
    } else {
        (run(prec)?, None)
    };
    let mut out = Vec::with_capacity(max_order);
    for (i, outcome) in base.into_iter().enumerate() {
        let uncertainty = match (&outcome, high.as_ref().map(|h| &h[i])) {
            (Ok(lo), Some(Ok(hi))) => Some(Float::with_val(prec.bits(), &lo.b0 - &hi.b0).abs()),
            _ => None,
        };
        out.push(SequencePoint {
            order: i + 1,
            outcome,
            uncertainty,
        });
    }
    Ok(out)
}

/// Ordinary least-squares line `y = intercept + slope x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearFit {
    pub intercept: f64,
    pub slope: f64,
    pub stderr_intercept: f64,
    pub stderr_slope: f64,
    pub residuals: Vec<f64>,
}

pub fn ols(x: &[f64], y: &[f64]) -> Result<LinearFit> {
    let n = x.len();
    if n < 3 || y.len() != n {
        return Err(Error::TooFewPoints { needed: 3, got: n.min(y.len()) });
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("abscissae are all equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residuals: Vec<f64> = x.iter().zip(y).map(|(a, b)| b - intercept - slope * a).collect();
    let ssr: f64 = residuals.iter().map(|r| r * r).sum();
    let sigma2 = ssr / (nf - 2.0);
    Ok(LinearFit {
        intercept,
        slope,
        stderr_intercept: (sigma2 * (1.0 / nf + mx * mx / sxx)).sqrt(),
        stderr_slope: (sigma2 / sxx).sqrt(),
        residuals,
    })
}

/// `ln(|b0^(N) - b0| / b0) ~ A - B N^(1/3)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceFitResult {
    pub a: f64,
    pub b: f64,
    pub stderr_a: f64,
    pub stderr_b: f64,
    pub fit_range: (usize, usize),
    /// `(N^(1/3), ln rel_dev)` for every fitted order.
    pub points: Vec<(f64, f64)>,
    pub residuals: Vec<f64>,
}

pub const DEFAULT_FIT_RANGE: (usize, usize) = (5, 70);

/// Relative deviations `|v - reference| / reference` with their logarithms.
///
/// Deviations within `10^10` ulps of the working precision are rejected.
pub fn log_relative_deviations(points: &[(usize, BigReal)], reference: &BigReal) -> Result<Vec<(usize, f64)>> {
    if *reference <= 0 {
        return Err(Error::NonPositive {
            what: "reference b0",
            value: reference.to_string(),
        });
    }
    let bits = reference.prec();
    let floor = Float::with_val(bits, Float::i_exp(1, -(bits as i32))) * 1e10;
    points
        .iter()
        .map(|(n, v)| {
            let rel = Float::with_val(bits, v - reference).abs() / reference;
            if rel <= floor {
                return Err(Error::DeviationBelowFloor { order: *n });
            }
            Ok((*n, rel.ln().to_f64()))
        })
        .collect()
}

pub fn convergence_fit(points: &[(usize, BigReal)], reference: &BigReal, fit_range: (usize, usize)) -> Result<ConvergenceFitResult> {
    let (lo, hi) = fit_range;
    let selected: Vec<(usize, BigReal)> = points.iter().filter(|(n, _)| *n >= lo && *n <= hi).cloned().collect();
    if selected.len() < 5 {
        return Err(Error::TooFewPoints {
            needed: 5,
            got: selected.len(),
        });
    }
    let logs = log_relative_deviations(&selected, reference)?;
    let x: Vec<f64> = logs.iter().map(|(n, _)| (*n as f64).cbrt()).collect();
    let y: Vec<f64> = logs.iter().map(|(_, l)| *l).collect();
    let fit = ols(&x, &y)?;
    Ok(ConvergenceFitResult {
        a: fit.intercept,
        b: -fit.slope,
        stderr_a: fit.stderr_intercept,
        stderr_b: fit.stderr_slope,
        fit_range,
        points: x.into_iter().zip(y).collect(),
        residuals: fit.residuals,
    })
}

/// Variable in which a parity tail is assumed to decay exponentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    /// `exp(-rate N)`: geometric convergence.
    Order,
    /// `exp(-rate N^(1/3))`: the b0 convergence law.
    CubeRootOrder,
}

impl Abscissa {
    fn at(self, n: usize, bits: u32) -> Float {
        let x = Float::with_val(bits, n);
        match self {
            Abscissa::Order => x,
            Abscissa::CubeRootOrder => x.cbrt(),
        }
    }
}

/// Tail selection and residual model for [`odd_even_extrapolate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtrapolationOptions {
    /// Number of trailing members used per parity (at least 4).
    pub tail: usize,
    pub abscissa: Abscissa,
    /// Scale each residual by the inverse local step `|v_{i+1} - v_i|`, so
    /// that every member is fitted to the same relative accuracy.
    pub step_weighted: bool,
}

impl Default for ExtrapolationOptions {
    fn default() -> Self {
        Self {
            tail: DEFAULT_TAIL,
            abscissa: Abscissa::Order,
            step_weighted: true,
        }
    }
}

/// Least-squares fit of `v_N = limit + amplitude exp(-rate t(N))`.
#[derive(Debug, Clone)]
pub struct ParityFit {
    pub limit: BigReal,
    pub amplitude: BigReal,
    pub rate: BigReal,
    pub iterations: usize,
    pub orders: Vec<usize>,
}

/// Odd and even limit estimates and their midpoint. When the parities
/// disagree the exact value is taken to lie between them.
#[derive(Debug, Clone)]
pub struct ExtrapolationResult {
    /// Per-parity tail fits; `None` for sequence-transformation estimates.
    pub fits: Option<(ParityFit, ParityFit)>,
    pub odd_limit: BigReal,
    pub even_limit: BigReal,
    pub combined: BigReal,
    pub uncertainty: BigReal,
}

pub const DEFAULT_TAIL: usize = 10;
const MAX_ITERATIONS: usize = 200;

/// Fits the last `options.tail` odd and even members of `sequence` separately.
pub fn odd_even_extrapolate(sequence: &[(usize, BigReal)], options: ExtrapolationOptions) -> Result<ExtrapolationResult> {
    let tail_length = options.tail;
    if tail_length < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: tail_length,
        });
    }
    let parity_tail = |parity: usize| -> Vec<(usize, BigReal)> {
        let mut members: Vec<(usize, BigReal)> = sequence.iter().filter(|(n, _)| n % 2 == parity).cloned().collect();
        members.sort_by_key(|(n, _)| *n);
        let skip = members.len().saturating_sub(tail_length);
        members.split_off(skip)
    };
    let odd_pts = parity_tail(1);
    let even_pts = parity_tail(0);
    for pts in [&odd_pts, &even_pts] {
        if pts.len() < 4 {
            return Err(Error::TooFewPoints { needed: 4, got: pts.len() });
        }
    }
    let (odd, even) = rayon::join(|| fit_exponential(&odd_pts, options), || fit_exponential(&even_pts, options));
    let (odd, even) = (odd?, even?);
    let bits = odd.limit.prec();
    let combined = Float::with_val(bits, &odd.limit + &even.limit) / 2u32;
    let uncertainty = Float::with_val(bits, &odd.limit - &even.limit).abs() / 2u32;
    Ok(ExtrapolationResult {
        odd_limit: odd.limit.clone(),
        even_limit: even.limit.clone(),
        fits: Some((odd, even)),
        combined,
        uncertainty,
    })
}

/// Limit estimate from Wynn's epsilon algorithm.
#[derive(Debug, Clone)]
pub struct EpsilonEstimate {
    pub value: BigReal,
    /// Even column of the epsilon table the value was taken from.
    pub column: usize,
    /// Distance to the estimate of the previous even column.
    pub spread: BigReal,
}

/// Wynn's epsilon algorithm (the iterated Shanks transform) on consecutive
/// members of a sequence. Exact for sums of finitely many geometric terms.
pub fn wynn_epsilon(values: &[BigReal]) -> Result<EpsilonEstimate> {
    if values.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            got: values.len(),
        });
    }
    let bits = values[0].prec();
    let mut prev: Vec<Float> = vec![Float::new(bits); values.len() + 1];
    let mut cur: Vec<Float> = values.to_vec();
    let mut estimates: Vec<(usize, Float)> = vec![(0, cur[cur.len() - 1].clone())];
    let mut column = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let d = Float::with_val(bits, &cur[i + 1] - &cur[i]);
            if d.is_zero() {
                break;
            }
            next.push(Float::with_val(bits, &prev[i + 1] + d.recip()));
        }
        // A vanishing difference means the column has already converged.
        if next.len() < cur.len() - 1 || next.iter().any(|v| !v.is_finite()) {
            break;
        }
        column += 1;
        prev = cur;
        cur = next;
        if column % 2 == 0 {
            estimates.push((column, cur[cur.len() - 1].clone()));
        }
    }
    let (column, value) = estimates.pop().expect("column 0 is always present");
    let spread = match estimates.last() {
        Some((_, before)) => Float::with_val(bits, &value - before).abs(),
        None => Float::new(bits),
    };
    Ok(EpsilonEstimate { value, column, spread })
}

/// Epsilon-accelerated odd/even extrapolation of a contiguous sequence.
/// Each parity is accelerated on its own; the combined value accelerates the
/// merged sequence, and the uncertainty covers both the parity gap and the
/// distance of the combined value from the parity midpoint.
pub fn epsilon_extrapolate(sequence: &[(usize, BigReal)]) -> Result<ExtrapolationResult> {
    let mut members: Vec<(usize, BigReal)> = sequence.to_vec();
    members.sort_by_key(|(n, _)| *n);
    if members.windows(2).any(|w| w[1].0 != w[0].0 + 1) {
        return Err(Error::NonContiguousSequence);
    }
    let parity_values = |parity: usize| -> Vec<BigReal> { members.iter().filter(|(n, _)| n % 2 == parity).map(|(_, v)| v.clone()).collect() };
    let all: Vec<BigReal> = members.iter().map(|(_, v)| v.clone()).collect();
    let odd = wynn_epsilon(&parity_values(1))?;
    let even = wynn_epsilon(&parity_values(0))?;
    let joint = wynn_epsilon(&all)?;
    let bits = joint.value.prec();
    let midpoint = Float::with_val(bits, &odd.value + &even.value) / 2u32;
    let half_gap = Float::with_val(bits, &odd.value - &even.value).abs() / 2u32;
    let offset = Float::with_val(bits, &joint.value - &midpoint).abs();
    let uncertainty = half_gap.max(&offset).max(&joint.spread);
    Ok(ExtrapolationResult {
        fits: None,
        odd_limit: odd.value,
        even_limit: even.value,
        combined: joint.value,
        uncertainty,
    })
}

/// Solves the weighted linear `(limit, amplitude)` problem for a fixed rate.
/// Returns `(limit, amplitude, weighted residual sum of squares)`.
fn linear_solve(t: &[Float], y: &[BigReal], w: &[Float], rate: &Float) -> (Float, Float, Float) {
    let bits = rate.prec();
    let phi: Vec<Float> = t.iter().map(|ti| Float::with_val(bits, -(Float::with_val(bits, rate * ti))).exp()).collect();
    let mut sw = Float::new(bits);
    let mut sp = Float::new(bits);
    let mut spp = Float::new(bits);
    let mut sy = Float::new(bits);
    let mut spy = Float::new(bits);
    for ((p, v), wi) in phi.iter().zip(y).zip(w) {
        let wp = Float::with_val(bits, wi * p);
        sw += wi;
        spp += Float::with_val(bits, &wp * p);
        spy += Float::with_val(bits, &wp * v);
        sp += wp;
        sy += Float::with_val(bits, wi * v);
    }
    let det = Float::with_val(bits, &sw * &spp) - Float::with_val(bits, sp.square_ref());
    let (limit, amp) = if det.is_zero() {
        (Float::with_val(bits, &sy / &sw), Float::new(bits))
    } else {
        let amp = (Float::with_val(bits, &sw * &spy) - Float::with_val(bits, &sp * &sy)) / &det;
        let limit = (Float::with_val(bits, &sy) - Float::with_val(bits, &amp * &sp)) / &sw;
        (limit, amp)
    };
    let mut ssr = Float::new(bits);
    for ((p, v), wi) in phi.iter().zip(y).zip(w) {
        let r = Float::with_val(bits, v - &limit) - Float::with_val(bits, &amp * p);
        ssr += r.square() * wi;
    }
    (limit, amp, ssr)
}

/// Weights `1 / step_i^2` from consecutive differences; the last step is
/// continued geometrically. Zero steps fall back to unit weights.
fn step_weights(y: &[BigReal]) -> Vec<Float> {
    let bits = y[0].prec();
    let mut steps: Vec<Float> = y.windows(2).map(|p| Float::with_val(bits, &p[1] - &p[0]).abs()).collect();
    let n = steps.len();
    let last = Float::with_val(bits, steps[n - 1].square_ref()) / &steps[n - 2];
    steps.push(last);
    if steps.iter().any(|d| d.is_zero() || !d.is_finite()) {
        return vec![Float::with_val(bits, 1); y.len()];
    }
    steps.into_iter().map(|d| Float::with_val(bits, d.square_ref()).recip()).collect()
}

/// Variable projection: the residual after the inner linear solve is a
/// function of the rate alone. A coarse log-spaced scan locates the basin,
/// then Gauss-Newton on all three parameters polishes to full precision.
fn fit_exponential(points: &[(usize, BigReal)], options: ExtrapolationOptions) -> Result<ParityFit> {
    let bits = points[0].1.prec();
    let orders: Vec<usize> = points.iter().map(|(n, _)| *n).collect();
    let t: Vec<Float> = orders.iter().map(|n| options.abscissa.at(*n, bits)).collect();
    let y: Vec<BigReal> = points.iter().map(|(_, v)| v.clone()).collect();

    let first = &y[0];
    if y.iter().all(|v| v == first) {
        return Ok(ParityFit {
            limit: first.clone(),
            amplitude: Float::new(bits),
            rate: Float::new(bits),
            iterations: 0,
            orders,
        });
    }

    let w = if options.step_weighted {
        step_weights(&y)
    } else {
        vec![Float::with_val(bits, 1); y.len()]
    };

    let mut best: Option<(Float, Float)> = None;
    for i in 0..=400 {
        let rate = Float::with_val(bits, 10f64.powf(-2.0 + 4.0 * i as f64 / 400.0));
        let (_, _, ssr) = linear_solve(&t, &y, &w, &rate);
        if best.as_ref().is_none_or(|(_, s)| ssr < *s) {
            best = Some((rate, ssr));
        }
    }
    let mut rate = best.expect("scan is non-empty").0;
    let (mut limit, mut amp, mut ssr) = linear_solve(&t, &y, &w, &rate);

    let tol = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 16));
    let mut lambda = Float::with_val(bits, 1e-6);
    for iter in 1..=MAX_ITERATIONS {
        // Jacobian columns: d/d limit = 1, d/d amp = e, d/d rate = -amp t e.
        let mut jtj = [[Float::new(bits), Float::new(bits), Float::new(bits)], [Float::new(bits), Float::new(bits), Float::new(bits)], [Float::new(bits), Float::new(bits), Float::new(bits)]];
        let mut jtr = [Float::new(bits), Float::new(bits), Float::new(bits)];
        for ((ti, v), wi) in t.iter().zip(&y).zip(&w) {
            let e = Float::with_val(bits, -(Float::with_val(bits, &rate * ti))).exp();
            let col = [Float::with_val(bits, 1), e.clone(), -(Float::with_val(bits, &amp * ti) * &e)];
            let r = Float::with_val(bits, v - &limit) - Float::with_val(bits, &amp * &e);
            for a in 0..3 {
                let wc = Float::with_val(bits, &col[a] * wi);
                for b in 0..3 {
                    jtj[a][b] += Float::with_val(bits, &wc * &col[b]);
                }
                jtr[a] += Float::with_val(bits, &wc * &r);
            }
        }
        let mut accepted = false;
        for _ in 0..60 {
            let mut m = jtj.clone();
            for (a, row) in m.iter_mut().enumerate() {
                let d = Float::with_val(bits, &row[a] * &lambda);
                row[a] += d;
            }
            let Some(step) = solve3(m, jtr.clone()) else {
                lambda *= 10u32;
                continue;
            };
            let new_rate = Float::with_val(bits, &rate + &step[2]);
            if new_rate <= 0 {
                lambda *= 10u32;
                continue;
            }
            let (nl, na, ns) = linear_solve(&t, &y, &w, &new_rate);
            if ns <= ssr {
                let moved = Float::with_val(bits, step[2].abs_ref());
                rate = new_rate;
                limit = nl;
                amp = na;
                ssr = ns;
                lambda /= 10u32;
                accepted = true;
                if moved <= Float::with_val(bits, rate.abs_ref()) * &tol {
                    return Ok(ParityFit {
                        limit,
                        amplitude: amp,
                        rate,
                        iterations: iter,
                        orders,
                    });
                }
                break;
            }
            lambda *= 10u32;
        }
        if !accepted {
            // No descent direction left: the rate is converged as far as the
            // residual can resolve.
            return Ok(ParityFit {
                limit,
                amplitude: amp,
                rate,
                iterations: iter,
                orders,
            });
        }
    }
    Err(Error::FitNotConverged {
        iterations: MAX_ITERATIONS,
        last_rate: rate.to_string(),
    })
}

/// Gaussian elimination with partial pivoting on a 3x3 system.
fn solve3(mut m: [[Float; 3]; 3], mut rhs: [Float; 3]) -> Option<[Float; 3]> {
    let bits = rhs[0].prec();
    for col in 0..3 {
        let pivot = (col..3).max_by(|&a, &b| m[a][col].cmp_abs(&m[b][col]).unwrap_or(std::cmp::Ordering::Equal))?;
        if m[pivot][col].is_zero() {
            return None;
        }
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..3 {
            let f = Float::with_val(bits, &m[row][col] / &m[col][col]);
            for k in col..3 {
                let d = Float::with_val(bits, &f * &m[col][k]);
                m[row][k] -= d;
            }
            let d = Float::with_val(bits, &f * &rhs[col]);
            rhs[row] -= d;
        }
    }
    let mut x = [Float::new(bits), Float::new(bits), Float::new(bits)];
    for row in (0..3).rev() {
        let mut acc = rhs[row].clone();
        for k in row + 1..3 {
            acc -= Float::with_val(bits, &m[row][k] * &x[k]);
        }
        x[row] = acc / &m[row][row];
    }
    Some(x)
}
