//! Minimal eigenpair of a dense real symmetric matrix.
//!
//! The matrix is reduced to tridiagonal form by Householder reflections, the
//! lowest eigenvalue is isolated by Sturm-sequence bisection, the eigenvector
//! comes from inverse iteration on the tridiagonal factor and is mapped back
//! through the stored reflectors. A final Rayleigh quotient on the original
//! matrix sharpens the eigenvalue.

use crate::error::{Error, Result};

/// Dense symmetric matrix with exact `a[j][k] == a[k][j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymmetricMatrix {
    /// Builds the matrix from the upper triangle of `entry(j, k)`, `j ≤ k`.
    pub fn from_fn(dim: usize, mut entry: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for j in 0..dim {
            for k in j..dim {
                let v = entry(j, k);
                data[j * dim + k] = v;
                data[k * dim + j] = v;
            }
        }
        Self { dim, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidParameter("matrix is not square".into()));
        }
        for (j, row) in rows.iter().enumerate() {
            for k in (j + 1)..dim {
                if row[k] != rows[k][j] {
                    return Err(Error::NotSymmetric { row: j, col: k });
                }
            }
        }
        Ok(Self::from_fn(dim, |j, k| rows[j][k]))
    }

    /// Symmetric Toeplitz matrix with `a[j][k] = first_row[|j - k|]`.
    pub fn toeplitz(first_row: &[f64]) -> Self {
        Self::from_fn(first_row.len(), |j, k| first_row[k.abs_diff(j)])
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |j, k| if j == k { 1.0 } else { 0.0 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.dim + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim).map(|j| dot(self.row(j), v)).collect()
    }

    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        dot(v, &self.mul_vec(v))
    }
}

/// Symmetric tridiagonal matrix stored as its diagonal and first off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal needs n diagonal and n-1 off-diagonal entries, got {} and {}",
                diag.len(),
                off.len()
            )));
        }
        Ok(Self { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut s = self.diag[i] * v[i];
                if i > 0 {
                    s += self.off[i - 1] * v[i - 1];
                }
                if i + 1 < n {
                    s += self.off[i] * v[i + 1];
                }
                s
            })
            .collect()
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// Number of eigenvalues strictly below `x`.
    fn count_below(&self, x: f64, pivmin: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.dim() {
            if i > 0 {
                q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            }
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Lowest eigenvalue by Sturm bisection.
    pub fn min_eigenvalue(&self) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        let pivmin = f64::MIN_POSITIVE
            .max(self.off.iter().map(|b| b * b).fold(0.0, f64::max) * f64::MIN_POSITIVE);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * scale * 1e-3 {
                break;
            }
            if self.count_below(mid, pivmin) >= 1 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Lowest eigenpair; the eigenvector has unit norm.
    pub fn min_eigenpair(&self) -> (f64, Vec<f64>) {
        let lambda = self.min_eigenvalue();
        let n = self.dim();
        if n == 1 {
            return (self.diag[0], vec![1.0]);
        }
        let norm = self
            .diag
            .iter()
            .chain(self.off.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let shift = lambda - 4.0 * f64::EPSILON * norm.max(lambda.abs());
        let lu = ShiftedTridiagonalLu::new(self, shift);
        let mut v: Vec<f64> = (0..n).map(|i| 1.0 + 1e-3 * (i % 7) as f64).collect();
        normalize(&mut v);
        for _ in 0..4 {
            v = lu.solve(&v);
            normalize(&mut v);
        }
        let av = self.mul_vec(&v);
        (dot(&v, &av), v)
    }
}

/// LU factorization of `T - σI` with partial pivoting (LAPACK `gttrf` layout).
struct ShiftedTridiagonalLu {
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper1: Vec<f64>,
    upper2: Vec<f64>,
    swapped: Vec<bool>,
}

impl ShiftedTridiagonalLu {
    fn new(t: &SymTridiagonal, shift: f64) -> Self {
        let n = t.dim();
        let mut diag: Vec<f64> = t.diag.iter().map(|d| d - shift).collect();
        let mut upper1 = t.off.clone();
        let mut sub = t.off.clone();
        let mut upper2 = vec![0.0; n.saturating_sub(2)];
        let mut lower = vec![0.0; n.saturating_sub(1)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        let tiny = f64::EPSILON * t.diag.iter().fold(1e-300f64, |m, v| m.max(v.abs()));

        for i in 0..n.saturating_sub(1) {
            if diag[i].abs() >= sub[i].abs() {
                if diag[i] == 0.0 {
                    diag[i] = tiny;
                }
                let f = sub[i] / diag[i];
                lower[i] = f;
                diag[i + 1] -= f * upper1[i];
            } else {
                let f = diag[i] / sub[i];
                diag[i] = sub[i];
                lower[i] = f;
                let tmp = upper1[i];
                upper1[i] = diag[i + 1];
                diag[i + 1] = tmp - f * diag[i + 1];
                if i + 2 < n {
                    upper2[i] = upper1[i + 1];
                    upper1[i + 1] = -f * upper1[i + 1];
                }
                swapped[i] = true;
            }
            sub[i] = 0.0;
        }
        if n > 0 && diag[n - 1] == 0.0 {
            diag[n - 1] = tiny;
        }
        Self {
            lower,
            diag,
            upper1,
            upper2,
            swapped,
        }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            b[i + 1] -= self.lower[i] * b[i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.upper1[i] * b[i + 1];
            }
            if i + 2 < n {
                s -= self.upper2[i] * b[i + 2];
            }
            b[i] = s / self.diag[i];
        }
        b
    }
}

struct Householder {
    /// Reflector `I - β v vᵀ` acting on indices `k+1..`.
    start: usize,
    v: Vec<f64>,
    beta: f64,
}

fn tridiagonalize(a: &SymmetricMatrix) -> (SymTridiagonal, Vec<Householder>) {
    let n = a.dim();
    let mut m = a.data.clone();
    let mut reflectors = Vec::new();
    let mut off = vec![0.0; n.saturating_sub(1)];

    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let mut v: Vec<f64> = (start..n).map(|i| m[i * n + k]).collect();
        let norm = dot(&v, &v).sqrt();
        if norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let alpha = if v[0] > 0.0 { -norm } else { norm };
        v[0] -= alpha;
        let vv = dot(&v, &v);
        if vv == 0.0 {
            off[k] = m[start * n + k];
            continue;
        }
        let beta = 2.0 / vv;
        off[k] = alpha;

        // Trailing block S ← H S H with H = I - β v vᵀ.
        let len = n - start;
        let mut p = vec![0.0; len];
        for (i, pi) in p.iter_mut().enumerate() {
            let row = &m[(start + i) * n + start..(start + i) * n + n];
            *pi = beta * dot(row, &v);
        }
        let kappa = 0.5 * beta * dot(&p, &v);
        let w: Vec<f64> = p.iter().zip(&v).map(|(pi, vi)| pi - kappa * vi).collect();
        for i in 0..len {
            let row = (start + i) * n + start;
            for j in 0..len {
                m[row + j] -= v[i] * w[j] + w[i] * v[j];
            }
        }
        for i in start..n {
            m[i * n + k] = 0.0;
            m[k * n + i] = 0.0;
        }
        reflectors.push(Householder { start, v, beta });
    }
    if n >= 2 {
        off[n - 2] = m[(n - 1) * n + (n - 2)];
    }
    let diag = (0..n).map(|i| m[i * n + i]).collect();
    (SymTridiagonal { diag, off }, reflectors)
}

/// Minimal eigenvalue of `a` and a unit-norm eigenvector.
///
/// Panics if `a` is empty.
pub fn sym_eig_min(a: &SymmetricMatrix) -> (f64, Vec<f64>) {
    assert!(a.dim() >= 1, "sym_eig_min needs a non-empty matrix");
    if a.dim() == 1 {
        return (a.get(0, 0), vec![1.0]);
    }
    let (tri, reflectors) = tridiagonalize(a);
    let (_, mut v) = tri.min_eigenpair();
    for h in reflectors.iter().rev() {
        let tail = &mut v[h.start..];
        let s = h.beta * dot(&h.v, tail);
        for (t, hv) in tail.iter_mut().zip(&h.v) {
            *t -= s * hv;
        }
    }
    normalize(&mut v);
    let lambda = a.quadratic_form(&v);
    (lambda, v)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn normalize(v: &mut [f64]) {
    let n = dot(v, v).sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
}
