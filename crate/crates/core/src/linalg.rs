//! Dimension-generic small vectors and matrices with a symmetric
//! eigen-decomposition for the 2×2 and 3×3 cases.
//!
//! Everything here works on heap-backed values sized at runtime; the
//! geometric modules only ever need n = 2 or 3, but the confocal formulas
//! are dimension-generic so the containers are too.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ── Vectors ─────────────────────────────────────────────────────────────────

/// A point or direction with unitless Cartesian coordinates, n ≥ 2.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VecN(pub Vec<f64>);

impl VecN {
    pub fn zeros(n: usize) -> Self {
        VecN(vec![0.0; n])
    }

    pub fn from_slice(s: &[f64]) -> Self {
        VecN(s.to_vec())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    pub fn dot(&self, other: &VecN) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm(&self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn scaled(&self, s: f64) -> VecN {
        VecN(self.0.iter().map(|x| x * s).collect())
    }

    pub fn add(&self, other: &VecN) -> VecN {
        VecN(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &VecN) -> VecN {
        VecN(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn normalized(&self) -> Result<VecN> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidMatrix);
        }
        Ok(self.scaled(1.0 / n))
    }

    /// Cross product, 3-vectors only.
    pub fn cross(&self, other: &VecN) -> VecN {
        debug_assert_eq!(self.dim(), 3);
        let (a, b) = (&self.0, &other.0);
        VecN(vec![
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ])
    }
}

impl std::ops::Index<usize> for VecN {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl std::ops::IndexMut<usize> for VecN {
    fn index_mut(&mut self, i: usize) -> &mut f64 {
        &mut self.0[i]
    }
}

// ── General square matrices ────────────────────────────────────────────────

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatN {
    pub n: usize,
    a: Vec<f64>,
}

impl MatN {
    pub fn zeros(n: usize) -> Self {
        MatN {
            n,
            a: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_columns(cols: &[VecN]) -> Self {
        let n = cols.len();
        let mut m = Self::zeros(n);
        for (j, c) in cols.iter().enumerate() {
            debug_assert_eq!(c.dim(), n);
            for i in 0..n {
                m[(i, j)] = c[i];
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> VecN {
        VecN((0..self.n).map(|i| self[(i, j)]).collect())
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().all(|x| x.is_finite())
    }

    pub fn transpose(&self) -> MatN {
        let mut t = Self::zeros(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &VecN) -> VecN {
        let mut out = VecN::zeros(self.n);
        for i in 0..self.n {
            out[i] = (0..self.n).map(|j| self[(i, j)] * v[j]).sum();
        }
        out
    }

    pub fn mul_mat(&self, other: &MatN) -> MatN {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let s = self[(i, k)];
                if s == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += s * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.a.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Determinant by LU with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.a.clone();
        let mut det = 1.0;
        for k in 0..n {
            let mut piv = k;
            for i in k + 1..n {
                if a[i * n + k].abs() > a[piv * n + k].abs() {
                    piv = i;
                }
            }
            if a[piv * n + k] == 0.0 {
                return 0.0;
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                }
                det = -det;
            }
            det *= a[k * n + k];
            for i in k + 1..n {
                let f = a[i * n + k] / a[k * n + k];
                for j in k..n {
                    a[i * n + j] -= f * a[k * n + j];
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting.
    pub fn inverse(&self) -> Result<MatN> {
        let n = self.n;
        let mut a = self.a.clone();
        let mut inv = Self::identity(n);
        for k in 0..n {
            let mut piv = k;
            for i in k + 1..n {
                if a[i * n + k].abs() > a[piv * n + k].abs() {
                    piv = i;
                }
            }
            let p = a[piv * n + k];
            if p == 0.0 || !p.is_finite() {
                return Err(Error::DegenerateConjugateSystem);
            }
            if piv != k {
                for j in 0..n {
                    a.swap(k * n + j, piv * n + j);
                    inv.a.swap(k * n + j, piv * n + j);
                }
            }
            let d = a[k * n + k];
            for j in 0..n {
                a[k * n + j] /= d;
                inv.a[k * n + j] /= d;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = a[i * n + k];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[i * n + j] -= f * a[k * n + j];
                    inv.a[i * n + j] -= f * inv.a[k * n + j];
                }
            }
        }
        Ok(inv)
    }
}

impl std::ops::Index<(usize, usize)> for MatN {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatN {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.a[i * self.n + j]
    }
}

// ── Symmetric matrices ──────────────────────────────────────────────────────

/// Symmetric n×n matrix; only the upper triangle is stored, so symmetry is
/// exact by construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymMatN {
    pub n: usize,
    upper: Vec<f64>,
}

impl SymMatN {
    pub fn zeros(n: usize) -> Self {
        SymMatN {
            n,
            upper: vec![0.0; n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            *m.at_mut(i, i) = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                *m.at_mut(i, j) = f(i, j);
            }
        }
        m
    }

    /// Symmetrised copy of a general matrix.
    pub fn from_general(m: &MatN) -> Self {
        Self::from_fn(m.n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        // row-major packed upper triangle
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[self.idx(i, j)]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        let k = self.idx(i, j);
        &mut self.upper[k]
    }

    pub fn is_finite(&self) -> bool {
        self.upper.iter().all(|x| x.is_finite())
    }

    pub fn to_full(&self) -> MatN {
        let n = self.n;
        let mut m = MatN::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.get(i, j);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &VecN) -> VecN {
        let mut out = VecN::zeros(self.n);
        for i in 0..self.n {
            out[i] = (0..self.n).map(|j| self.get(i, j) * v[j]).sum();
        }
        out
    }

    /// vᵀ M v.
    pub fn quad_form(&self, v: &VecN) -> f64 {
        v.dot(&self.mul_vec(v))
    }

    pub fn frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let x = self.get(i, j);
                s += x * x;
            }
        }
        s.sqrt()
    }

    pub fn scaled(&self, s: f64) -> SymMatN {
        SymMatN {
            n: self.n,
            upper: self.upper.iter().map(|x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &SymMatN) -> SymMatN {
        SymMatN {
            n: self.n,
            upper: self
                .upper
                .iter()
                .zip(&other.upper)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// ‖AB − BA‖_F for two symmetric matrices.
    pub fn commutator_norm(&self, other: &SymMatN) -> f64 {
        let a = self.to_full();
        let b = other.to_full();
        let ab = a.mul_mat(&b);
        let ba = b.mul_mat(&a);
        let mut s = 0.0;
        for i in 0..a.n {
            for j in 0..a.n {
                let x = ab[(i, j)] - ba[(i, j)];
                s += x * x;
            }
        }
        s.sqrt()
    }
}

// ── Symmetric eigen-decomposition ───────────────────────────────────────────

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi
/// rotations. Eigenvalues are returned in decreasing order with the
/// matching orthonormal eigenvectors as matrix columns. The sign of each
/// eigenvector is fixed so its largest-magnitude component is positive.
///
/// Only n ∈ {2, 3} is supported; this is the ground-truth path for the
/// axis reconstructions, so it favours robustness over generality.
pub fn sym_eigen(m: &SymMatN) -> Result<(Vec<f64>, MatN)> {
    if !(2..=3).contains(&m.n) {
        return Err(Error::InvalidMatrix);
    }
    if !m.is_finite() {
        return Err(Error::InvalidMatrix);
    }
    let (vals, vecs) = jacobi(m);
    // sort decreasing
    let n = m.n;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[j].partial_cmp(&vals[i]).unwrap());
    let mut sorted_vals = Vec::with_capacity(n);
    let mut cols = Vec::with_capacity(n);
    for &k in &order {
        sorted_vals.push(vals[k]);
        let mut c = vecs.column(k);
        // canonical sign: largest-magnitude component positive
        let mut imax = 0;
        for i in 1..n {
            if c[i].abs() > c[imax].abs() {
                imax = i;
            }
        }
        if c[imax] < 0.0 {
            c = c.scaled(-1.0);
        }
        cols.push(c);
    }
    Ok((sorted_vals, MatN::from_columns(&cols)))
}

/// Cyclic Jacobi; works for any small n, converges to machine precision.
fn jacobi(m: &SymMatN) -> (Vec<f64>, MatN) {
    let n = m.n;
    let mut a = m.to_full();
    let mut v = MatN::identity(n);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[(i, j)].abs();
            }
        }
        if off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (theta - (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let vals = (0..n).map(|i| a[(i, i)]).collect();
    (vals, v)
}

/// Gram-Schmidt orthonormalisation of the given spanning vectors.
pub fn orthonormalize(vs: &[VecN]) -> Result<Vec<VecN>> {
    let mut out: Vec<VecN> = Vec::with_capacity(vs.len());
    for v in vs {
        let mut w = v.clone();
        for u in &out {
            w = w.sub(&u.scaled(u.dot(&w)));
        }
        let n = w.norm();
        if n < 1e-13 * v.norm().max(1.0) {
            return Err(Error::DegenerateConjugateSystem);
        }
        out.push(w.scaled(1.0 / n));
    }
    Ok(out)
}
