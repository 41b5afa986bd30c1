//! Lowest eigenpairs of large symmetric banded matrices.
//!
//! Shift-invert subspace iteration: one banded Cholesky factorisation of `H - σ`
//! (with `σ` below the spectrum), repeated block solves, Rayleigh-Ritz on the block.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::{GfqError, Result};

/// Symmetric matrix stored by its lower band: `band[i * (bw + 1) + k] = H[i][i - k]`.
#[derive(Clone, Debug)]
pub struct BandedSymmetric {
    n: usize,
    bw: usize,
    band: Vec<f64>,
    /// Sub-diagonal offsets that hold a nonzero entry somewhere.
    offsets: Vec<usize>,
}

impl BandedSymmetric {
    pub fn zeros(n: usize, bw: usize) -> Self {
        Self {
            n,
            bw,
            band: vec![0.0; n * (bw + 1)],
            offsets: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Set `H[i][j] = H[j][i] = v` for `|i - j| <= bw`.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let k = i - j;
        assert!(k <= self.bw, "entry outside band");
        self.band[i * (self.bw + 1) + k] = v;
        if k > 0 && v != 0.0 {
            if let Err(pos) = self.offsets.binary_search(&k) {
                self.offsets.insert(pos, k);
            }
        }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (i, j) = if i >= j { (i, j) } else { (j, i) };
        let k = i - j;
        if k > self.bw {
            0.0
        } else {
            self.band[i * (self.bw + 1) + k]
        }
    }

    pub fn diagonal_min(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).fold(f64::INFINITY, f64::min)
    }

    /// `y = H x`.
    pub fn mul(&self, x: &[f64], y: &mut [f64]) {
        let w = self.bw + 1;
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.n {
            let row = &self.band[i * w..(i + 1) * w];
            y[i] += row[0] * x[i];
            for &k in self.offsets.iter().take_while(|&&k| k <= i) {
                let a = row[k];
                y[i] += a * x[i - k];
                y[i - k] += a * x[i];
            }
        }
    }

    /// Gershgorin bound on `max |λ|`.
    pub fn norm_bound(&self) -> f64 {
        let mut row = vec![0.0; self.n];
        for i in 0..self.n {
            for k in 0..=self.bw.min(i) {
                let a = self.get(i, i - k).abs();
                row[i] += a;
                if k > 0 {
                    row[i - k] += a;
                }
            }
        }
        row.into_iter().fold(0.0, f64::max)
    }
}

/// Banded Cholesky factor `L` of a symmetric positive-definite matrix.
struct BandedCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandedCholesky {
    fn factor(a: &BandedSymmetric, shift: f64) -> Option<Self> {
        let (n, bw) = (a.n, a.bw);
        let w = bw + 1;
        let mut l = a.band.clone();
        for i in 0..n {
            l[i * w] -= shift;
        }
        // L[i][j] stored at l[i * w + (i - j)].
        for i in 0..n {
            let j0 = i.saturating_sub(bw);
            for j in j0..=i {
                let mut s = l[i * w + (i - j)];
                let kmin = j0.max(j.saturating_sub(bw));
                for k in kmin..j {
                    s -= l[i * w + (i - k)] * l[j * w + (j - k)];
                }
                if i == j {
                    if !(s > 0.0) {
                        return None;
                    }
                    l[i * w] = s.sqrt();
                } else {
                    l[i * w + (i - j)] = s / l[j * w];
                }
            }
        }
        Some(Self { n, bw, l })
    }

    /// Solve `L Lᵀ X = B` for a row-major `n × p` block, in place.
    fn solve_block(&self, x: &mut [f64], p: usize) {
        let w = self.bw + 1;
        for i in 0..self.n {
            let row = &self.l[i * w..(i + 1) * w];
            let (done, rest) = x.split_at_mut(i * p);
            let xi = &mut rest[..p];
            for k in 1..=self.bw.min(i) {
                let a = row[k];
                let xk = &done[(i - k) * p..(i - k + 1) * p];
                for (v, u) in xi.iter_mut().zip(xk) {
                    *v -= a * u;
                }
            }
            let d = row[0];
            xi.iter_mut().for_each(|v| *v /= d);
        }
        for i in (0..self.n).rev() {
            let row = &self.l[i * w..(i + 1) * w];
            let d = row[0];
            let (head, tail) = x.split_at_mut(i * p);
            let xi = &mut tail[..p];
            xi.iter_mut().for_each(|v| *v /= d);
            for k in 1..=self.bw.min(i) {
                let a = row[k];
                let xk = &mut head[(i - k) * p..(i - k + 1) * p];
                for (v, u) in xk.iter_mut().zip(xi.iter()) {
                    *v -= a * u;
                }
            }
        }
    }
}

/// Ascending eigenvalues with unit-norm eigenvectors.
#[derive(Clone, Debug)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub iterations: usize,
}

/// Lowest `k` eigenpairs of `h`, for `shift` strictly below the lowest eigenvalue.
pub fn lowest_eigenpairs(h: &BandedSymmetric, k: usize, shift: f64) -> Result<Eigenpairs> {
    let n = h.dim();
    if k == 0 || k > n {
        return Err(GfqError::Domain(format!("cannot take {k} eigenpairs of a {n}x{n} matrix")));
    }
    let chol = BandedCholesky::factor(h, shift)
        .ok_or_else(|| GfqError::Eigensolver("shifted matrix is not positive definite".into()))?;
    let p = (k + 6).min(n);
    let scale = h.norm_bound().max(1.0);
    let tol = 1e-10 * scale;

    // Deterministic, non-degenerate start block.
    let mut block = DMatrix::<f64>::from_fn(n, p, |i, j| {
        let x = (i as f64 + 1.0) * (j as f64 + 1.0);
        (0.7 * x).sin() + 0.3 * ((j + 1) as f64 * i as f64 / n as f64).cos()
    });
    let mut hx = vec![0.0; n];
    for it in 1..=1000 {
        let mut rows: Vec<f64> = (0..n * p).map(|idx| block[(idx / p, idx % p)]).collect();
        chol.solve_block(&mut rows, p);
        block = DMatrix::from_row_slice(n, p, &rows);
        let q = block.clone().qr().q();
        let mut hq = DMatrix::<f64>::zeros(n, p);
        for j in 0..p {
            let col: Vec<f64> = q.column(j).iter().copied().collect();
            h.mul(&col, &mut hx);
            hq.set_column(j, &nalgebra::DVector::from_column_slice(&hx));
        }
        let small = q.transpose() * &hq;
        let small = (&small + small.transpose()) * 0.5;
        let eig = SymmetricEigen::new(small);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let vecs = DMatrix::from_fn(p, p, |i, j| eig.eigenvectors[(i, order[j])]);
        let vals: Vec<f64> = order.iter().map(|&j| eig.eigenvalues[j]).collect();
        block = &q * &vecs;
        let hb = &hq * &vecs;

        let converged = (0..k).all(|j| {
            let r = hb.column(j) - block.column(j) * vals[j];
            r.norm() <= tol
        });
        if converged {
            return Ok(Eigenpairs {
                values: vals[..k].to_vec(),
                vectors: (0..k).map(|j| block.column(j).iter().copied().collect()).collect(),
                iterations: it,
            });
        }
    }
    Err(GfqError::Eigensolver(format!("subspace iteration did not reach residual {tol:e}")))
}
