//! Dense finite-difference eigensolver for the even ground state of
//! `-psi''/2 + (omega^2 x^2/2 + g x^4) psi = E psi` on the line.
//!
//! Grid points sit at `x_i = (i + 1/2) h` so that even parity closes the
//! five-point stencil by reflection, `psi_(-1) = psi_0`, `psi_(-2) = psi_1`.
//! The wall at `L` is Dirichlet. The discretization error is `O(h^4)`, which
//! two grids remove by Richardson extrapolation.

use nalgebra::{DMatrix, SymmetricEigen};

fn lowest(n: usize, length: f64, omega: f64, g: f64) -> f64 {
    let h = length / n as f64;
    let k = 1.0 / (24.0 * h * h);
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let x = (i as f64 + 0.5) * h;
        m[(i, i)] = 30.0 * k + 0.5 * omega * omega * x * x + g * x.powi(4);
        if i + 1 < n {
            m[(i, i + 1)] = -16.0 * k;
            m[(i + 1, i)] = -16.0 * k;
        }
        if i + 2 < n {
            m[(i, i + 2)] = k;
            m[(i + 2, i)] = k;
        }
    }
    // Reflected neighbours of the first two points.
    m[(0, 0)] -= 16.0 * k;
    m[(0, 1)] += k;
    m[(1, 0)] += k;
    SymmetricEigen::new(m).eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
}

/// Richardson combination of `n` and `2n` point grids.
pub fn ground_energy(n: usize, length: f64, omega: f64, g: f64) -> f64 {
    let coarse = lowest(n, length, omega, g);
    let fine = lowest(2 * n, length, omega, g);
    fine + (fine - coarse) / 15.0
}
