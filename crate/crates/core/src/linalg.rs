//! Small self-contained dense linear algebra kernels: a packed symmetric
//! matrix type, a symmetric eigensolver (Householder tridiagonalization
//! followed by implicit-shift QL iteration), an inverse-iteration eigenvector
//! refinement, and a pivoted Gaussian solver for the Newton steps used
//! elsewhere in the crate.
//!
//! The matrix orders in this crate stay in the low hundreds, so dense
//! algorithms are both the fastest practical choice and the easiest to
//! verify.

// The kernels are written with explicit index loops to mirror their textbook
// forms; iterator chains with take/skip would obscure the index invariants.
#![allow(clippy::needless_range_loop)]

use thiserror::Error;

/// Maximum QL sweeps per eigenvalue before giving up.
const MAX_QL_SWEEPS: usize = 50;

/// Error raised by the eigensolver kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("eigenvalue iteration did not converge within {0} sweeps")]
    IterationLimit(usize),
}

/// Symmetric matrix in packed lower-triangle storage (row-major). Writing
/// entry `(i, j)` and reading `(j, i)` touch the same storage cell, so the
/// matrix is symmetric by construction rather than by discipline.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetricMatrix {
    order: usize,
    lower: Vec<f64>,
}

impl SymmetricMatrix {
    /// Zero matrix of the given order (order >= 1).
    pub fn zeros(order: usize) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        SymmetricMatrix {
            order,
            lower: vec![0.0; order * (order + 1) / 2],
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < self.order && j < self.order);
        let (r, c) = if i >= j { (i, j) } else { (j, i) };
        r * (r + 1) / 2 + c
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[self.index(i, j)]
    }

    /// Sets entry `(i, j)` and, through the shared storage, `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let idx = self.index(i, j);
        self.lower[idx] = value;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, delta: f64) {
        let idx = self.index(i, j);
        self.lower[idx] += delta;
    }

    /// Adds `value` to every diagonal entry.
    pub fn add_scalar_diagonal(&mut self, value: f64) {
        for i in 0..self.order {
            self.add_to(i, i, value);
        }
    }

    /// Frobenius norm (off-diagonal entries counted twice).
    pub fn frobenius_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.order {
            for j in 0..=i {
                let v = self.get(i, j);
                sum += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        sum.sqrt()
    }

    /// Leading `n x n` block as a new matrix.
    pub fn truncate(&self, n: usize) -> SymmetricMatrix {
        assert!(n >= 1 && n <= self.order);
        let mut out = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                out.set(i, j, self.get(i, j));
            }
        }
        out
    }

    /// Product `self * X`, where `X` is the symmetric tridiagonal matrix with
    /// zero diagonal and `X(k, k+1) = offdiag[k]`.
    ///
    /// Only the lower triangle of the product is computed; the upper triangle
    /// is implied by storage. That is valid exactly when the true product is
    /// symmetric, i.e. when `self` commutes with `X` — which holds whenever
    /// `self` is itself a polynomial in `X`, the only way this routine is
    /// used (Horner evaluation of a polynomial of `X`).
    pub fn tridiagonal_mul(&self, offdiag: &[f64]) -> SymmetricMatrix {
        let n = self.order;
        assert_eq!(offdiag.len() + 1, n, "off-diagonal length must be order-1");
        let mut out = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut v = 0.0;
                if j > 0 {
                    v += self.get(i, j - 1) * offdiag[j - 1];
                }
                if j + 1 < n {
                    v += self.get(i, j + 1) * offdiag[j];
                }
                out.set(i, j, v);
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.order);
        let mut y = vec![0.0; self.order];
        for i in 0..self.order {
            let mut sum = 0.0;
            for j in 0..self.order {
                sum += self.get(i, j) * x[j];
            }
            y[i] = sum;
        }
        y
    }

    /// Dense row-major copy (full square storage).
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.order)
            .map(|i| (0..self.order).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

/// All eigenvalues of a symmetric matrix, sorted ascending.
///
/// Householder reduction to tridiagonal form followed by implicit-shift QL
/// iteration, eigenvalues only (no eigenvector accumulation).
pub fn eigenvalues(m: &SymmetricMatrix) -> Result<Vec<f64>, LinalgError> {
    let mut dense = m.to_dense();
    let n = m.order();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut dense, &mut e);
    for i in 0..n {
        d[i] = dense[i][i];
    }
    ql_implicit_shift(&mut d, &mut e)?;
    d.sort_by(|a, b| a.partial_cmp(b).expect("eigenvalues are finite"));
    Ok(d)
}

/// Householder reduction of a dense symmetric matrix to tridiagonal form.
/// On return the diagonal of `a` holds the tridiagonal diagonal and `e[i]`
/// holds the subdiagonal entry coupling rows `i-1` and `i` (`e[0] = 0`).
fn tridiagonalize(a: &mut [Vec<f64>], e: &mut [f64]) {
    let n = a.len();
    for i in (1..n).rev() {
        let l = i - 1;
        if l == 0 {
            e[i] = a[i][0];
            continue;
        }
        let scale: f64 = a[i][..=l].iter().map(|v| v.abs()).sum();
        if scale == 0.0 {
            e[i] = a[i][l];
            continue;
        }
        let mut h = 0.0;
        for k in 0..=l {
            a[i][k] /= scale;
            h += a[i][k] * a[i][k];
        }
        let f = a[i][l];
        let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
        e[i] = scale * g;
        h -= f * g;
        a[i][l] = f - g;
        let mut tau = 0.0;
        for j in 0..=l {
            let mut g = 0.0;
            for k in 0..=j {
                g += a[j][k] * a[i][k];
            }
            for k in (j + 1)..=l {
                g += a[k][j] * a[i][k];
            }
            e[j] = g / h;
            tau += e[j] * a[i][j];
        }
        let hh = tau / (h + h);
        for j in 0..=l {
            let f = a[i][j];
            let g = e[j] - hh * f;
            e[j] = g;
            for k in 0..=j {
                a[j][k] -= f * e[k] + g * a[i][k];
            }
        }
    }
    e[0] = 0.0;
}

/// Implicit-shift QL iteration on a symmetric tridiagonal matrix
/// (`d` diagonal, `e` subdiagonal with `e[i]` coupling `i-1` and `i`).
/// Eigenvalues replace `d`, unsorted.
fn ql_implicit_shift(d: &mut [f64], e: &mut [f64]) -> Result<(), LinalgError> {
    let n = d.len();
    if n <= 1 {
        return Ok(());
    }
    // Renumber so e[i] couples rows i and i+1.
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut sweeps = 0usize;
        loop {
            // Look for a negligible subdiagonal element to split the matrix.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > MAX_QL_SWEEPS {
                return Err(LinalgError::IterationLimit(MAX_QL_SWEEPS));
            }
            // Implicit shift from the 2x2 block at l.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Solves the dense linear system `a x = b` by Gaussian elimination with
/// partial pivoting. Returns `None` when the matrix is numerically singular
/// (best pivot below `1e-14` times the largest initial entry).
pub fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = a.len();
    assert_eq!(b.len(), n);
    let scale = a
        .iter()
        .flat_map(|row| row.iter().map(|v| v.abs()))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let threshold = 1e-14 * scale;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r1, &r2| {
                a[r1][col]
                    .abs()
                    .partial_cmp(&a[r2][col].abs())
                    .expect("finite pivots")
            })
            .expect("non-empty range");
        if a[pivot_row][col].abs() < threshold {
            return None;
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for row in (col + 1)..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            a[row][col] = 0.0;
            for k in (col + 1)..n {
                a[row][k] -= factor * a[col][k];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut sum = b[row];
        for k in (row + 1)..n {
            sum -= a[row][k] * x[k];
        }
        x[row] = sum / a[row][row];
    }
    Some(x)
}

/// LU factorization with partial pivoting that replaces (near-)zero pivots
/// with a signed tiny value instead of failing. This is the standard device
/// for inverse iteration, where the shifted matrix is singular by design.
struct LuFactors {
    lu: Vec<Vec<f64>>,
    pivots: Vec<usize>,
}

impl LuFactors {
    fn factor(mut a: Vec<Vec<f64>>, pivot_floor: f64) -> LuFactors {
        let n = a.len();
        let mut pivots = vec![0usize; n];
        for col in 0..n {
            let pivot_row = (col..n)
                .max_by(|&r1, &r2| {
                    a[r1][col]
                        .abs()
                        .partial_cmp(&a[r2][col].abs())
                        .expect("finite pivots")
                })
                .expect("non-empty range");
            a.swap(col, pivot_row);
            pivots[col] = pivot_row;
            if a[col][col].abs() < pivot_floor {
                a[col][col] = if a[col][col] < 0.0 {
                    -pivot_floor
                } else {
                    pivot_floor
                };
            }
            for row in (col + 1)..n {
                let factor = a[row][col] / a[col][col];
                a[row][col] = factor;
                for k in (col + 1)..n {
                    a[row][k] -= factor * a[col][k];
                }
            }
        }
        LuFactors { lu: a, pivots }
    }

    fn solve(&self, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for col in 0..n {
            b.swap(col, self.pivots[col]);
            for row in (col + 1)..n {
                b[row] -= self.lu[row][col] * b[col];
            }
        }
        for row in (0..n).rev() {
            let mut sum = b[row];
            for k in (row + 1)..n {
                sum -= self.lu[row][k] * b[k];
            }
            b[row] = sum / self.lu[row][row];
        }
        b
    }
}

/// Lowest eigenvalue together with a unit eigenvector, the vector obtained by
/// inverse iteration at the computed eigenvalue.
pub fn lowest_eigenpair(m: &SymmetricMatrix) -> Result<(f64, Vec<f64>), LinalgError> {
    let lambda = eigenvalues(m)?[0];
    let n = m.order();
    let mut shifted = m.to_dense();
    for (i, row) in shifted.iter_mut().enumerate() {
        row[i] -= lambda;
    }
    let pivot_floor = (f64::EPSILON * m.frobenius_norm()).max(f64::MIN_POSITIVE);
    let lu = LuFactors::factor(shifted, pivot_floor);
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..3 {
        let w = lu.solve(v.clone());
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || norm == 0.0 {
            break;
        }
        v = w.into_iter().map(|x| x / norm).collect();
    }
    Ok((lambda, v))
}

/// Euclidean norm of the eigen-residual `m v - lambda v`.
pub fn eigen_residual_norm(m: &SymmetricMatrix, lambda: f64, v: &[f64]) -> f64 {
    let mv = m.mul_vec(v);
    mv.iter()
        .zip(v)
        .map(|(&mv_i, &v_i)| {
            let r = mv_i - lambda * v_i;
            r * r
        })
        .sum::<f64>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[f64]]) -> SymmetricMatrix {
        let n = rows.len();
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                assert_eq!(rows[i][j], rows[j][i], "test input must be symmetric");
                m.set(i, j, rows[i][j]);
            }
        }
        m
    }

    #[test]
    fn storage_is_symmetric_by_construction() {
        let mut m = SymmetricMatrix::zeros(3);
        m.set(0, 2, 5.0);
        assert_eq!(m.get(2, 0), 5.0);
        assert_eq!(m.get(0, 2), 5.0);
        m.add_to(2, 0, 1.0);
        assert_eq!(m.get(0, 2), 6.0);
    }

    #[test]
    fn eigenvalues_of_identity() {
        let mut m = SymmetricMatrix::zeros(5);
        m.add_scalar_diagonal(1.0);
        let evs = eigenvalues(&m).unwrap();
        for ev in evs {
            assert!((ev - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = from_rows(&[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 5.0]]);
        let evs = eigenvalues(&m).unwrap();
        assert!((evs[0] - 1.0).abs() < 1e-14);
        assert!((evs[1] - 3.0).abs() < 1e-14);
        assert!((evs[2] - 5.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_two_by_two() {
        let m = from_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let evs = eigenvalues(&m).unwrap();
        assert!((evs[0] - 1.0).abs() < 1e-14);
        assert!((evs[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_of_toeplitz_tridiagonal_match_closed_form() {
        // tri(-1, 2, -1) of order n has eigenvalues 2 - 2 cos(k pi / (n+1)).
        let n = 12;
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, 2.0);
            if i + 1 < n {
                m.set(i + 1, i, -1.0);
            }
        }
        let evs = eigenvalues(&m).unwrap();
        for (k, ev) in evs.iter().enumerate() {
            let exact =
                2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos();
            assert!(
                (ev - exact).abs() < 1e-12,
                "eigenvalue {k}: {ev} vs {exact}"
            );
        }
    }

    #[test]
    fn eigenvalue_sums_match_trace_invariants() {
        // Deterministic pseudo-random symmetric matrix.
        let n = 30;
        let mut state = 0x12345678u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, next());
            }
        }
        let evs = eigenvalues(&m).unwrap();
        let trace: f64 = (0..n).map(|i| m.get(i, i)).sum();
        let fro2 = m.frobenius_norm().powi(2);
        let sum: f64 = evs.iter().sum();
        let sum_sq: f64 = evs.iter().map(|v| v * v).sum();
        assert!((sum - trace).abs() < 1e-10 * trace.abs().max(1.0));
        assert!((sum_sq - fro2).abs() < 1e-10 * fro2.max(1.0));
    }

    #[test]
    fn lowest_eigenpair_has_small_residual() {
        let n = 40;
        let mut m = SymmetricMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, (i as f64 + 1.0) * 0.5);
            if i + 1 < n {
                m.set(i + 1, i, 0.3);
            }
            if i + 2 < n {
                m.set(i + 2, i, -0.1);
            }
        }
        let (lambda, v) = lowest_eigenpair(&m).unwrap();
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
        let residual = eigen_residual_norm(&m, lambda, &v);
        assert!(
            residual <= 1e-9 * m.frobenius_norm(),
            "residual {residual} too large"
        );
    }

    #[test]
    fn solve_dense_round_trip() {
        let a = vec![
            vec![4.0, 1.0, 0.0],
            vec![1.0, 3.0, -1.0],
            vec![0.0, -1.0, 2.0],
        ];
        let x_true = [1.0, -2.0, 0.5];
        let b: Vec<f64> = a
            .iter()
            .map(|row| row.iter().zip(&x_true).map(|(a, x)| a * x).sum())
            .collect();
        let x = solve_dense(a, b).unwrap();
        for (xi, ti) in x.iter().zip(&x_true) {
            assert!((xi - ti).abs() < 1e-12);
        }
    }

    #[test]
    fn solve_dense_detects_singular() {
        let a = vec![vec![1.0, 2.0], vec![2.0, 4.0]];
        assert!(solve_dense(a, vec![1.0, 2.0]).is_none());
    }

    #[test]
    fn truncate_keeps_leading_block() {
        let m = from_rows(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 5.0], &[3.0, 5.0, 6.0]]);
        let t = m.truncate(2);
        assert_eq!(t.order(), 2);
        assert_eq!(t.get(0, 0), 1.0);
        assert_eq!(t.get(1, 0), 2.0);
        assert_eq!(t.get(1, 1), 4.0);
    }

    #[test]
    fn tridiagonal_mul_squares_the_band_matrix() {
        // X with off-diagonal [a, b]: X^2 has diagonal [a^2, a^2+b^2, b^2]
        // and corner entries (0,2) = a*b.
        let mut x = SymmetricMatrix::zeros(3);
        let (a, b) = (0.7, 1.3);
        x.set(1, 0, a);
        x.set(2, 1, b);
        let x2 = x.tridiagonal_mul(&[a, b]);
        assert!((x2.get(0, 0) - a * a).abs() < 1e-15);
        assert!((x2.get(1, 1) - (a * a + b * b)).abs() < 1e-15);
        assert!((x2.get(2, 2) - b * b).abs() < 1e-15);
        assert!((x2.get(0, 2) - a * b).abs() < 1e-15);
        assert_eq!(x2.get(1, 0), 0.0);
    }
}
