//! Cyclic Jacobi eigenvalue iteration for real symmetric matrices.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiConfig {
    /// Stop once the Frobenius norm of the off-diagonal part is below this.
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for JacobiConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_sweeps: 100 }
    }
}

fn off_diagonal_norm(a: &[f64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            s += a[i * n + j] * a[i * n + j];
        }
    }
    (2.0 * s).sqrt()
}

/// Round-robin schedule: `m − 1` rounds of `m/2` disjoint pairs covering
/// every pair of `0..m` once (`m` even).
fn tournament(m: usize) -> Vec<Vec<(usize, usize)>> {
    let mut ring: Vec<usize> = (1..m).collect();
    let mut rounds = Vec::with_capacity(m - 1);
    for _ in 0..m - 1 {
        let mut pairs = vec![(0, ring[0])];
        for i in 1..m / 2 {
            pairs.push((ring[i], ring[m - 1 - i]));
        }
        rounds.push(pairs.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect());
        ring.rotate_right(1);
    }
    rounds
}

/// Eigenvalues of the symmetric row-major `n × n` matrix `a`, ascending.
///
/// Plane rotations annihilate off-diagonal pairs until the off-diagonal
/// Frobenius norm drops below `cfg.tol`. A sweep visits every pair once, in
/// rounds of disjoint pairs so that each round updates whole rows and then
/// whole columns. Only the eigenvalues are accumulated.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize, cfg: JacobiConfig) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n, "matrix must be n × n");
    let m = n + n % 2;
    let rounds = if n > 1 { tournament(m) } else { Vec::new() };
    let mut rot: Vec<(usize, usize, f64, f64)> = Vec::with_capacity(m / 2);
    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&a, n);
        if off < cfg.tol {
            break;
        }
        if sweeps == cfg.max_sweeps {
            return Err(Error::NonConvergence { sweeps, off_norm: off });
        }
        sweeps += 1;
        for round in &rounds {
            rot.clear();
            for &(p, q) in round {
                if q >= n {
                    continue;
                }
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                rot.push((p, q, c, t * c));
            }
            if rot.is_empty() {
                continue;
            }
            // A ← JᵀA: rows p and q
            for &(p, q, c, s) in &rot {
                let (lo, hi) = a.split_at_mut(q * n);
                let row_p = &mut lo[p * n..(p + 1) * n];
                let row_q = &mut hi[..n];
                for (x, y) in row_p.iter_mut().zip(row_q.iter_mut()) {
                    let (xp, xq) = (*x, *y);
                    *x = c * xp - s * xq;
                    *y = s * xp + c * xq;
                }
            }
            // A ← AJ: columns p and q, one row at a time
            for row in a.chunks_exact_mut(n) {
                for &(p, q, c, s) in &rot {
                    let (xp, xq) = (row[p], row[q]);
                    row[p] = c * xp - s * xq;
                    row[q] = s * xp + c * xq;
                }
            }
            for &(p, q, _, _) in &rot {
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}
