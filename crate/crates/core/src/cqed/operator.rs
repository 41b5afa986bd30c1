use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::{GfqError, Result};

/// One tensor factor of a basis, e.g. a qubit `["0", "1"]` or a Fock ladder.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisFactor {
    pub name: String,
    pub labels: Vec<String>,
}

impl BasisFactor {
    pub fn new(name: &str, labels: &[&str]) -> Self {
        Self {
            name: name.into(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn qubit(name: &str) -> Self {
        Self::new(name, &["0", "1"])
    }

    /// `{|↓⟩, |↑⟩}` well basis.
    pub fn wells(name: &str) -> Self {
        Self::new(name, &["down", "up"])
    }

    pub fn fock(name: &str, cutoff: usize) -> Self {
        Self {
            name: name.into(),
            labels: (0..cutoff).map(|n| n.to_string()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }
}

/// Dense complex matrix on a labelled tensor-product basis; the last factor varies fastest.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub data: DMatrix<Complex64>,
    pub factors: Vec<BasisFactor>,
}

#[derive(Serialize)]
struct Entry {
    row: usize,
    col: usize,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct Dump<'a> {
    dimension: usize,
    factors: &'a [BasisFactor],
    basis: Vec<String>,
    entries: Vec<Entry>,
}

impl OperatorMatrix {
    pub fn new(data: DMatrix<Complex64>, factors: Vec<BasisFactor>) -> Result<Self> {
        let d: usize = factors.iter().map(BasisFactor::dim).product();
        if data.nrows() != d || data.ncols() != d {
            return Err(GfqError::Domain(format!(
                "matrix is {}x{} but the basis has dimension {d}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self { data, factors })
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Labels such as `1,3` for qubit 1 and three photons.
    pub fn basis_labels(&self) -> Vec<String> {
        let mut out = vec![String::new()];
        for f in &self.factors {
            out = out
                .iter()
                .flat_map(|prefix| {
                    f.labels.iter().map(move |l| {
                        if prefix.is_empty() {
                            l.clone()
                        } else {
                            format!("{prefix},{l}")
                        }
                    })
                })
                .collect();
        }
        out
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖H - H†‖ / ‖H‖` (Frobenius).
    pub fn hermiticity_error(&self) -> f64 {
        let diff = &self.data - self.data.adjoint();
        let d = diff.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let n = self.frobenius();
        if n == 0.0 {
            d
        } else {
            d / n
        }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_error() <= 1e-12
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(GfqError::Domain(format!(
                "operator is not Hermitian (relative error {:.2e})",
                self.hermiticity_error()
            )))
        }
    }

    /// Ascending eigenvalues and the matching orthonormal eigenvectors (as columns).
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<Complex64>) {
        let eig = self.data.clone().symmetric_eigen();
        let mut order: Vec<usize> = (0..self.dim()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| eig.eigenvectors[(r, order[c])]);
        (values, vectors)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().0
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.data * v
    }

    /// `‖[A, B]‖_F`.
    pub fn commutator_norm(&self, other: &OperatorMatrix) -> f64 {
        let c = &self.data * &other.data - &other.data * &self.data;
        c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Dimension, basis labels and entries with `|z| > 0`, as JSON.
    pub fn to_json(&self) -> String {
        let mut entries = Vec::new();
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                let z = self.data[(r, c)];
                if z.norm() > 0.0 {
                    entries.push(Entry {
                        row: r,
                        col: c,
                        re: z.re,
                        im: z.im,
                    });
                }
            }
        }
        let dump = Dump {
            dimension: self.dim(),
            factors: &self.factors,
            basis: self.basis_labels(),
            entries,
        };
        serde_json::to_string_pretty(&dump).expect("operator dump serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_follow_tensor_order() {
        let m = OperatorMatrix::new(
            DMatrix::identity(6, 6),
            vec![BasisFactor::qubit("q"), BasisFactor::fock("a", 3)],
        )
        .unwrap();
        assert_eq!(m.basis_labels(), ["0,0", "0,1", "0,2", "1,0", "1,1", "1,2"]);
        assert!(m.is_hermitian());
        assert!(OperatorMatrix::new(DMatrix::identity(5, 5), vec![BasisFactor::qubit("q")]).is_err());
    }
}
