//! Two oracles for the per-beta imaginary-time integrals.
//!
//! `quadrature` integrates directly: `tau_1 = 0` by translation invariance,
//! the other times run over `[-L, L]`, every nested level splits at the
//! kinks set by earlier times, and the innermost time is integrated exactly
//! piece by piece. `ordering_sum` is the exact sum over time orderings of the
//! product of inverse cut rates.

use gauss_quad::GaussLegendre;
use rug::Rational;

/// Rates in lexicographic pair order, unpacked into an upper triangle.
fn triangle(n: usize, list: &[f64]) -> Vec<Vec<f64>> {
    assert_eq!(list.len(), n * (n - 1) / 2);
    let mut r = vec![vec![0.0; n]; n];
    let mut it = list.iter();
    for i in 0..n {
        for j in i + 1..n {
            r[i][j] = *it.next().unwrap();
        }
    }
    r
}

struct Nested {
    n: usize,
    r: Vec<Vec<f64>>,
    half_width: f64,
    nodes: Vec<(f64, f64)>,
    /// Decay rate of the inverse-CDF map; a quarter of the smallest rate.
    kappa: f64,
}

impl Nested {
    /// Exact integral over the last time of `exp(-sum_j r_jk |t - t_j|)`.
    fn innermost(&self, t: &[f64]) -> f64 {
        let k = self.n - 1;
        let mut kinks: Vec<(f64, f64)> = (0..k).filter(|&j| self.r[j][k] > 0.0).map(|j| (t[j], self.r[j][k])).collect();
        kinks.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut edges = vec![-self.half_width];
        edges.extend(kinks.iter().map(|p| p.0));
        edges.push(self.half_width);
        let mut total = 0.0;
        for w in edges.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            let mid = 0.5 * (lo + hi);
            let (mut slope, mut at_mid) = (0.0, 0.0);
            for &(tj, rj) in &kinks {
                slope -= rj * (mid - tj).signum();
                at_mid -= rj * (mid - tj).abs();
            }
            let h = 0.5 * (hi - lo);
            let piece = if (slope * h).abs() < 1e-8 { 2.0 * h } else { 2.0 * (slope * h).sinh() / slope };
            total += at_mid.exp() * piece;
        }
        total
    }

    fn level(&self, k: usize, t: &mut Vec<f64>) -> f64 {
        if k == self.n - 1 {
            return self.innermost(t);
        }
        let mut edges: Vec<(f64, bool)> = t[..k].iter().map(|&x| (x, true)).collect();
        edges.push((-self.half_width, false));
        edges.push((self.half_width, false));
        edges.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut total = 0.0;
        for w in edges.windows(2) {
            let ((lo, lo_kink), (hi, hi_kink)) = (w[0], w[1]);
            if hi <= lo {
                continue;
            }
            // (origin, direction, length): each half decays away from its kink.
            let halves = match (lo_kink, hi_kink) {
                (true, true) => {
                    let h = 0.5 * (hi - lo);
                    vec![(lo, 1.0, h), (hi, -1.0, h)]
                }
                (false, true) => vec![(hi, -1.0, hi - lo)],
                _ => vec![(lo, 1.0, hi - lo)],
            };
            let kappa = self.kappa;
            for (origin, dir, len) in halves {
                let span = 1.0 - (-kappa * len).exp();
                for &(x, wq) in &self.nodes {
                    let u = 0.5 * (x + 1.0);
                    let rest = 1.0 - u * span;
                    let tk = origin - dir * rest.ln() / kappa;
                    let jac = span / (kappa * rest);
                    let exponent: f64 = (0..k).map(|j| self.r[j][k] * (tk - t[j]).abs()).sum();
                    t.push(tk);
                    let inner = self.level(k + 1, t);
                    t.pop();
                    total += 0.5 * wq * jac * (-exponent).exp() * inner;
                }
            }
        }
        total
    }
}

/// Per-beta value of `I_n` by nested quadrature; `n >= 2`, connected rates.
pub fn quadrature(n: usize, rates: &[f64]) -> f64 {
    let r = triangle(n, rates);
    let smallest = rates.iter().copied().filter(|&x| x > 0.0).fold(f64::INFINITY, f64::min);
    let rule = GaussLegendre::new(if n <= 4 { 32 } else { 16 }).unwrap();
    let q = Nested {
        n,
        r,
        half_width: 40.0 / smallest,
        nodes: rule.iter().map(|(x, w)| (*x, *w)).collect(),
        kappa: 0.25 * smallest,
    };
    q.level(1, &mut vec![0.0])
}

/// Exact per-beta value of `I_n` as a sum over the `n!` time orderings.
/// Returns `None` if some ordering has a cut with zero total rate.
pub fn ordering_sum(n: usize, rates: &[Rational]) -> Option<Rational> {
    let mut r = vec![vec![Rational::new(); n]; n];
    let mut it = rates.iter();
    for i in 0..n {
        for j in i + 1..n {
            let v = it.next().unwrap().clone();
            r[j][i] = v.clone();
            r[i][j] = v;
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Rational::new();
    permute(&mut perm, 0, &r, &mut total)?;
    Some(total)
}

fn permute(perm: &mut [usize], k: usize, r: &[Vec<Rational>], total: &mut Rational) -> Option<()> {
    let n = perm.len();
    if k == n {
        let mut prod = Rational::from(1);
        for cut in 1..n {
            let mut c = Rational::new();
            for &a in &perm[..cut] {
                for &b in &perm[cut..] {
                    c += &r[a][b];
                }
            }
            if c == 0 {
                return None;
            }
            prod /= c;
        }
        *total += prod;
        return Some(());
    }
    for i in k..n {
        perm.swap(k, i);
        permute(perm, k + 1, r, total)?;
        perm.swap(k, i);
    }
    Some(())
}
