use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::operator::{BasisFactor, OperatorMatrix};
use crate::spectrum::QubitSpectrum;
use crate::{GfqError, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub(crate) fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

pub(crate) fn identity(n: usize) -> DMatrix<Complex64> {
    DMatrix::identity(n, n)
}

/// Annihilation operator on a Fock space truncated at `n` levels.
pub fn annihilation(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |r, c| if c == r + 1 { re((c as f64).sqrt()) } else { re(0.0) })
}

/// `σ_z = |1⟩⟨1| - |0⟩⟨0|` with `|1⟩` the excited state.
pub fn sigma_z() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[re(-1.0), re(0.0), re(0.0), re(1.0)])
}

pub fn sigma_x() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[re(0.0), re(1.0), re(1.0), re(0.0)])
}

/// `σ_+ = |1⟩⟨0|`.
pub fn sigma_plus() -> DMatrix<Complex64> {
    DMatrix::from_row_slice(2, 2, &[re(0.0), re(0.0), re(1.0), re(0.0)])
}

pub fn sigma_minus() -> DMatrix<Complex64> {
    sigma_plus().adjoint()
}

pub fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

fn check_inputs(cutoff: usize, values: &[(&str, f64)]) -> Result<()> {
    if cutoff < 5 {
        return Err(GfqError::Domain(format!("Fock cutoff {cutoff} is below the minimum of 5")));
    }
    for (name, v) in values {
        if !(v.is_finite() && *v >= 0.0) {
            return Err(GfqError::Domain(format!("{name} must be finite and non-negative")));
        }
    }
    Ok(())
}

fn qubit_fock(cutoff: usize) -> Vec<BasisFactor> {
    vec![BasisFactor::qubit("qubit"), BasisFactor::fock("mode", cutoff)]
}

/// `ω a†a + (Δ/2) σ_z + i g σ_x (a - a†)` on qubit ⊗ Fock (`ħ = 1`).
pub fn build_qubit_resonator_h(delta: f64, g: f64, omega: f64, cutoff: usize) -> Result<OperatorMatrix> {
    check_inputs(cutoff, &[("Delta", delta), ("g", g), ("omega", omega)])?;
    let a = annihilation(cutoff);
    let n = a.adjoint() * &a;
    let h = kron(&identity(2), &n) * re(omega)
        + kron(&sigma_z(), &identity(cutoff)) * re(0.5 * delta)
        + kron(&sigma_x(), &(&a - a.adjoint())) * (I * g);
    OperatorMatrix::new(h, qubit_fock(cutoff))
}

/// Well-basis form: `ω a†a + E_↓|↓⟩⟨↓| + E_↑|↑⟩⟨↑| - t_q σ_x + i g (|↓⟩⟨↓| - |↑⟩⟨↑|)(a - a†)`.
///
/// For degenerate wells it is unitarily equivalent to [`build_qubit_resonator_h`]
/// with `Δ = 2 t_q`.
pub fn build_qubit_resonator_h_wells(
    spectrum: &QubitSpectrum,
    g: f64,
    omega: f64,
    cutoff: usize,
) -> Result<OperatorMatrix> {
    check_inputs(cutoff, &[("t_q", spectrum.t_q), ("g", g), ("omega", omega)])?;
    let a = annihilation(cutoff);
    let n = a.adjoint() * &a;
    let wells = DMatrix::from_row_slice(
        2,
        2,
        &[re(spectrum.e_down), re(-spectrum.t_q), re(-spectrum.t_q), re(spectrum.e_up)],
    );
    let sz_w = DMatrix::from_row_slice(2, 2, &[re(1.0), re(0.0), re(0.0), re(-1.0)]);
    let h = kron(&identity(2), &n) * re(omega)
        + kron(&wells, &identity(cutoff))
        + kron(&sz_w, &(&a - a.adjoint())) * (I * g);
    OperatorMatrix::new(h, vec![BasisFactor::wells("qubit"), BasisFactor::fock("mode", cutoff)])
}

/// Rotating-wave form `ω a†a + (Δ/2) σ_z - i g (a† σ_- - σ_+ a)`.
pub fn build_rwa_h(delta: f64, g: f64, omega: f64, cutoff: usize) -> Result<OperatorMatrix> {
    check_inputs(cutoff, &[("Delta", delta), ("g", g), ("omega", omega)])?;
    let a = annihilation(cutoff);
    let n = a.adjoint() * &a;
    let exchange = kron(&sigma_minus(), &a.adjoint()) - kron(&sigma_plus(), &a);
    let h = kron(&identity(2), &n) * re(omega)
        + kron(&sigma_z(), &identity(cutoff)) * re(0.5 * delta)
        - exchange * (I * g);
    OperatorMatrix::new(h, qubit_fock(cutoff))
}

/// Total excitation number `a†a + Σ_j |1⟩⟨1|_j` on `qubits` qubits ⊗ Fock.
pub fn excitation_number(qubits: usize, cutoff: usize) -> OperatorMatrix {
    let a = annihilation(cutoff);
    let n = a.adjoint() * &a;
    let excited = DMatrix::from_row_slice(2, 2, &[re(0.0), re(0.0), re(0.0), re(1.0)]);
    let dq = 1usize << qubits;
    let mut total = kron(&identity(dq), &n);
    for j in 0..qubits {
        let mut op = identity(1);
        for k in 0..qubits {
            op = if k == j { kron(&op, &excited) } else { kron(&op, &identity(2)) };
        }
        total += kron(&op, &identity(cutoff));
    }
    let mut factors: Vec<BasisFactor> = (0..qubits).map(|j| BasisFactor::qubit(&format!("q{j}"))).collect();
    factors.push(BasisFactor::fock("mode", cutoff));
    OperatorMatrix::new(total, factors).expect("dimensions match by construction")
}

/// Parameters of two qubits sharing one mode `ω₁` in the dispersive regime.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwoQubitParams {
    pub delta_l: f64,
    pub delta_r: f64,
    pub g_l: f64,
    pub g_r: f64,
    pub omega1: f64,
}

impl TwoQubitParams {
    /// `Δ'_j = Δ_j - ω₁`.
    pub fn detunings(&self) -> (f64, f64) {
        (self.delta_l - self.omega1, self.delta_r - self.omega1)
    }

    /// `Δ̃_j = Δ_j + g_j²/Δ'_j`.
    pub fn shifted_gaps(&self) -> (f64, f64) {
        let (dl, dr) = self.detunings();
        (
            self.delta_l + self.g_l * self.g_l / dl,
            self.delta_r + self.g_r * self.g_r / dr,
        )
    }

    /// `J = ½(1/Δ'_l + 1/Δ'_r) g_l g_r`.
    pub fn exchange(&self) -> f64 {
        let (dl, dr) = self.detunings();
        0.5 * (1.0 / dl + 1.0 / dr) * self.g_l * self.g_r
    }

    /// `|Δ'_j| ≥ 10 g_j` for both qubits.
    pub fn dispersive_valid(&self) -> bool {
        let (dl, dr) = self.detunings();
        dl.abs() >= 10.0 * self.g_l && dr.abs() >= 10.0 * self.g_r
    }

    fn first_violation(&self) -> (f64, f64) {
        let (dl, _) = self.detunings();
        if dl.abs() < 10.0 * self.g_l {
            (dl, self.g_l)
        } else {
            (self.detunings().1, self.g_r)
        }
    }
}

fn two_qubit_factors(cutoff: usize) -> Vec<BasisFactor> {
    vec![
        BasisFactor::qubit("left"),
        BasisFactor::qubit("right"),
        BasisFactor::fock("mode", cutoff),
    ]
}

fn on_left(op: &DMatrix<Complex64>, cutoff: usize) -> DMatrix<Complex64> {
    kron(&kron(op, &identity(2)), &identity(cutoff))
}

fn on_right(op: &DMatrix<Complex64>, cutoff: usize) -> DMatrix<Complex64> {
    kron(&kron(&identity(2), op), &identity(cutoff))
}

/// `ω₁ a†a + Σ_j (Δ̃_j/2) σ_zj + J (σ_-l σ_+r + σ_+l σ_-r)` on left ⊗ right ⊗ Fock.
///
/// Outside the dispersive regime this fails unless `force` is set.
pub fn dispersive_two_qubit_h(params: &TwoQubitParams, cutoff: usize, force: bool) -> Result<OperatorMatrix> {
    if !params.dispersive_valid() && !force {
        let (detuning, coupling) = params.first_violation();
        return Err(GfqError::DispersiveInvalid { detuning, coupling });
    }
    check_inputs(cutoff, &[("omega1", params.omega1)])?;
    let a = annihilation(cutoff);
    let n = a.adjoint() * &a;
    let (tl, tr) = params.shifted_gaps();
    let j = params.exchange();
    let swap = kron(&kron(&sigma_minus(), &sigma_plus()), &identity(cutoff))
        + kron(&kron(&sigma_plus(), &sigma_minus()), &identity(cutoff));
    let h = kron(&identity(4), &n) * re(params.omega1)
        + on_left(&sigma_z(), cutoff) * re(0.5 * tl)
        + on_right(&sigma_z(), cutoff) * re(0.5 * tr)
        + swap * re(j);
    OperatorMatrix::new(h, two_qubit_factors(cutoff))
}

/// Both qubits coupled to the mode in rotating-wave form (`-i g_j (a† σ_-j - σ_+j a)`).
pub fn tavis_cummings_h(params: &TwoQubitParams, cutoff: usize) -> Result<OperatorMatrix> {
    check_inputs(
        cutoff,
        &[
            ("omega1", params.omega1),
            ("Delta_l", params.delta_l),
            ("Delta_r", params.delta_r),
            ("g_l", params.g_l),
            ("g_r", params.g_r),
        ],
    )?;
    let a = annihilation(cutoff);
    let n = a.adjoint() * &a;
    let ad = a.adjoint();
    let exchange = |op_minus: DMatrix<Complex64>, op_plus: DMatrix<Complex64>| {
        kron(&op_minus, &ad) - kron(&op_plus, &a)
    };
    let left = exchange(kron(&sigma_minus(), &identity(2)), kron(&sigma_plus(), &identity(2)));
    let right = exchange(kron(&identity(2), &sigma_minus()), kron(&identity(2), &sigma_plus()));
    let h = kron(&identity(4), &n) * re(params.omega1)
        + on_left(&sigma_z(), cutoff) * re(0.5 * params.delta_l)
        + on_right(&sigma_z(), cutoff) * re(0.5 * params.delta_r)
        - left * (I * params.g_l)
        - right * (I * params.g_r);
    OperatorMatrix::new(h, two_qubit_factors(cutoff))
}

/// Splitting of the two single-excitation, qubit-like eigenstates of a two-qubit ⊗ mode
/// Hamiltonian: eigenstates with one excitation and photon number below ½.
pub fn exchange_splitting(h: &OperatorMatrix) -> Result<f64> {
    if h.factors.len() != 3 {
        return Err(GfqError::Domain("expected a two-qubit ⊗ mode operator".into()));
    }
    let cutoff = h.factors[2].dim();
    let nexc = excitation_number(2, cutoff);
    let a = annihilation(cutoff);
    let photons = kron(&identity(4), &(a.adjoint() * &a));
    let (vals, vecs) = h.eigh();
    let mut picked = Vec::new();
    for (k, e) in vals.iter().enumerate() {
        let v = vecs.column(k);
        let ne = (v.adjoint() * &nexc.data * v)[(0, 0)].re;
        let np = (v.adjoint() * &photons * v)[(0, 0)].re;
        if (ne - 1.0).abs() < 1e-6 && np < 0.5 {
            picked.push(*e);
        }
    }
    if picked.len() != 2 {
        return Err(GfqError::Domain(format!(
            "found {} qubit-like single-excitation states, expected 2",
            picked.len()
        )));
    }
    Ok((picked[1] - picked[0]).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupled_spectrum() {
        let (delta, omega, n) = (0.7, 1.3, 6);
        let h = build_qubit_resonator_h(delta, 0.0, omega, n).unwrap();
        let mut expect: Vec<f64> = (0..n)
            .flat_map(|m| [m as f64 * omega - 0.5 * delta, m as f64 * omega + 0.5 * delta])
            .collect();
        expect.sort_by(f64::total_cmp);
        for (a, b) in h.eigenvalues().iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn well_and_qubit_bases_share_spectrum() {
        let (delta, g, omega, n) = (1.0, 0.05, 1.1, 8);
        let spec = QubitSpectrum::new(0.0, 0.0, 0.5 * delta, 1.8).unwrap();
        let a = build_qubit_resonator_h(delta, g, omega, n).unwrap().eigenvalues();
        let b = build_qubit_resonator_h_wells(&spec, g, omega, n).unwrap().eigenvalues();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rwa_conserves_excitations() {
        let h = build_rwa_h(1.0, 0.03, 1.0, 10).unwrap();
        assert!(h.is_hermitian());
        assert!(h.commutator_norm(&excitation_number(1, 10)) < 1e-12);
        let t = tavis_cummings_h(
            &TwoQubitParams {
                delta_l: 1.1,
                delta_r: 1.05,
                g_l: 0.01,
                g_r: 0.02,
                omega1: 1.0,
            },
            6,
        )
        .unwrap();
        assert!(t.commutator_norm(&excitation_number(2, 6)) < 1e-12);
    }

    #[test]
    fn small_cutoff_rejected() {
        assert!(build_rwa_h(1.0, 0.1, 1.0, 4).is_err());
    }

    #[test]
    fn dispersive_guard() {
        let p = TwoQubitParams {
            delta_l: 1.05,
            delta_r: 1.05,
            g_l: 0.01,
            g_r: 0.01,
            omega1: 1.0,
        };
        assert!(matches!(
            dispersive_two_qubit_h(&p, 5, false),
            Err(GfqError::DispersiveInvalid { .. })
        ));
        assert!(dispersive_two_qubit_h(&p, 5, true).is_ok());
    }

    #[test]
    fn symmetric_exchange() {
        let p = TwoQubitParams {
            delta_l: 1.2,
            delta_r: 1.2,
            g_l: 0.01,
            g_r: 0.01,
            omega1: 1.0,
        };
        assert!((p.exchange() - 0.01 * 0.01 / 0.2).abs() < 1e-18);
        let h = dispersive_two_qubit_h(&p, 5, false).unwrap();
        assert!((exchange_splitting(&h).unwrap() - 2.0 * p.exchange()).abs() < 1e-13);
    }
}
