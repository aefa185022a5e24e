//! Polynomial coefficients through sample points, at working precision.

use rug::Float;

/// Coefficients `c_0 .. c_(n-1)` of the polynomial through `(x_i, y_i)`,
/// by Gaussian elimination with partial pivoting on the Vandermonde system.
pub fn coefficients(xs: &[Float], ys: &[Float]) -> Vec<Float> {
    let n = xs.len();
    assert_eq!(ys.len(), n);
    let bits = xs[0].prec();
    let mut a: Vec<Vec<Float>> = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let mut row = Vec::with_capacity(n + 1);
            let mut p = Float::with_val(bits, 1);
            for _ in 0..n {
                row.push(p.clone());
                p *= x;
            }
            row.push(y.clone());
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].clone().abs().partial_cmp(&a[j][col].clone().abs()).unwrap()).unwrap();
        a.swap(col, pivot);
        for row in col + 1..n {
            let f = Float::with_val(bits, &a[row][col] / &a[col][col]);
            for k in col..=n {
                let t = Float::with_val(bits, &a[col][k] * &f);
                a[row][k] -= t;
            }
        }
    }
    let mut c = vec![Float::new(bits); n];
    for row in (0..n).rev() {
        let mut acc = a[row][n].clone();
        for k in row + 1..n {
            acc -= Float::with_val(bits, &a[row][k] * &c[k]);
        }
        c[row] = acc / &a[row][row];
    }
    c
}
