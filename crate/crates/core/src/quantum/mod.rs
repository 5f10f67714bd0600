//! Small-dimension quantum kernel: states, measurements and the behaviors
//! they generate, plus two fixed quantum correlations.

mod tables;

pub use tables::{cglmp_closed_form_success, i3322_table, make_cglmp_behavior, CGLMP_ETA};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::behaviors::{Behavior, BehaviorError, Scenario};

pub type CMatrix = DMatrix<Complex64>;

pub const MAX_DIMENSION: usize = 16;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const COMPLETENESS_TOL: f64 = 1e-10;
pub const IMAGINARY_TOL: f64 = 1e-10;

/// Measurement angles from the Z axis for the two-qubit model: Alice then Bob.
pub const I3322_ALICE_ANGLES: [f64; 3] = [0.0, PI / 3.0, 2.0 * PI / 3.0];
pub const I3322_BOB_ANGLES: [f64; 3] = [4.0 * PI / 3.0, 2.0 * PI / 3.0, PI];

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("{what} is not Hermitian (deviation {deviation:e})")]
    NotHermitian { what: String, deviation: f64 },
    #[error("state trace is {0}, expected 1")]
    Trace(f64),
    #[error("{what} has eigenvalue {eigenvalue:e} below zero")]
    NotPositive { what: String, eigenvalue: f64 },
    #[error("{party} input {input}: elements sum to identity only within {deviation:e}")]
    Completeness {
        party: &'static str,
        input: usize,
        deviation: f64,
    },
    #[error("entry ({x},{y},{a},{b}) has imaginary part {imag:e}")]
    Imaginary {
        x: usize,
        y: usize,
        a: usize,
        b: usize,
        imag: f64,
    },
    #[error(transparent)]
    Behavior(#[from] BehaviorError),
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn trace(a: &CMatrix) -> Complex64 {
    a.trace()
}

/// Largest entry of `|A - A^dagger|`.
pub fn hermitian_deviation(a: &CMatrix) -> f64 {
    (a - a.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &CMatrix) -> Vec<f64> {
    let h = (a + a.adjoint()) * c(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `Tr_B` of an operator on `C^da (x) C^db`.
pub fn partial_trace_b(rho: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(da, da, |i, j| (0..db).map(|k| rho[(i * db + k, j * db + k)]).sum())
}

/// `Tr_A` of an operator on `C^da (x) C^db`.
pub fn partial_trace_a(rho: &CMatrix, da: usize, db: usize) -> CMatrix {
    CMatrix::from_fn(db, db, |i, j| (0..da).map(|k| rho[(k * db + i, k * db + j)]).sum())
}

/// `|v><v|` for a (not necessarily normalized) vector.
pub fn ket_density(v: &[Complex64]) -> CMatrix {
    let n = v.len();
    CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
}

pub fn validate_density(rho: &CMatrix) -> Result<(), QuantumError> {
    let d = rho.nrows();
    if d == 0 || d != rho.ncols() || d > MAX_DIMENSION * MAX_DIMENSION {
        return Err(QuantumError::Dimension(format!(
            "state must be square and nonempty, got {}x{}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    let deviation = hermitian_deviation(rho);
    if deviation > HERMITIAN_TOL {
        return Err(QuantumError::NotHermitian {
            what: "state".into(),
            deviation,
        });
    }
    let tr = trace(rho);
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(QuantumError::Trace(tr.re));
    }
    let min = hermitian_eigenvalues(rho)[0];
    if min < -PSD_TOL {
        return Err(QuantumError::NotPositive {
            what: "state".into(),
            eigenvalue: min,
        });
    }
    Ok(())
}

/// Checks one party's measurements: per input, PSD Hermitian elements on
/// `C^d` summing to the identity.
pub fn validate_measurements(
    party: &'static str,
    meas: &[Vec<CMatrix>],
    d: usize,
) -> Result<(), QuantumError> {
    if meas.is_empty() || meas.iter().any(|m| m.is_empty()) {
        return Err(QuantumError::Dimension(format!("{party} needs at least one input and outcome")));
    }
    let outcomes = meas[0].len();
    let identity = CMatrix::identity(d, d);
    for (input, elements) in meas.iter().enumerate() {
        if elements.len() != outcomes {
            return Err(QuantumError::Dimension(format!(
                "{party} input {input} has {} outcomes, input 0 has {outcomes}",
                elements.len()
            )));
        }
        let mut sum = CMatrix::zeros(d, d);
        for (a, e) in elements.iter().enumerate() {
            if e.nrows() != d || e.ncols() != d {
                return Err(QuantumError::Dimension(format!(
                    "{party} element ({input},{a}) is {}x{}, expected {d}x{d}",
                    e.nrows(),
                    e.ncols()
                )));
            }
            let what = format!("{party} element ({input},{a})");
            let deviation = hermitian_deviation(e);
            if deviation > PSD_TOL {
                return Err(QuantumError::NotHermitian { what, deviation });
            }
            let min = hermitian_eigenvalues(e)[0];
            if min < -PSD_TOL {
                return Err(QuantumError::NotPositive { what, eigenvalue: min });
            }
            sum += e;
        }
        let deviation = (sum - &identity).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if deviation > COMPLETENESS_TOL {
            return Err(QuantumError::Completeness { party, input, deviation });
        }
    }
    Ok(())
}

/// A bipartite state with a measurement collection for each party.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumModel {
    state: CMatrix,
    dims: (usize, usize),
    alice: Vec<Vec<CMatrix>>,
    bob: Vec<Vec<CMatrix>>,
}

impl QuantumModel {
    pub fn new(
        state: CMatrix,
        dims: (usize, usize),
        alice: Vec<Vec<CMatrix>>,
        bob: Vec<Vec<CMatrix>>,
    ) -> Result<Self, QuantumError> {
        let (da, db) = dims;
        if da == 0 || db == 0 || da > MAX_DIMENSION || db > MAX_DIMENSION {
            return Err(QuantumError::Dimension(format!(
                "local dimensions must be in 1..={MAX_DIMENSION}, got {da} and {db}"
            )));
        }
        if state.nrows() != da * db {
            return Err(QuantumError::Dimension(format!(
                "state is {}x{}, expected {n}x{n}",
                state.nrows(),
                state.ncols(),
                n = da * db
            )));
        }
        validate_density(&state)?;
        validate_measurements("alice", &alice, da)?;
        validate_measurements("bob", &bob, db)?;
        Ok(QuantumModel { state, dims, alice, bob })
    }

    pub fn state(&self) -> &CMatrix {
        &self.state
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn alice(&self) -> &[Vec<CMatrix>] {
        &self.alice
    }

    pub fn bob(&self) -> &[Vec<CMatrix>] {
        &self.bob
    }

    pub fn scenario(&self) -> Scenario {
        Scenario {
            x_card: self.alice.len(),
            y_card: self.bob.len(),
            a_card: self.alice[0].len(),
            b_card: self.bob[0].len(),
        }
    }
}

/// `p(a,b|x,y) = Tr[(A^a_x (x) B^b_y) rho]`.
pub fn behavior_from_quantum(q: &QuantumModel) -> Result<Behavior<f64>, QuantumError> {
    let s = q.scenario();
    let mut p = Vec::with_capacity(s.len());
    for (x, ax) in q.alice.iter().enumerate() {
        for (y, by) in q.bob.iter().enumerate() {
            for (a, ea) in ax.iter().enumerate() {
                for (b, eb) in by.iter().enumerate() {
                    let z = (kron(ea, eb) * &q.state).trace();
                    if z.im.abs() > IMAGINARY_TOL {
                        return Err(QuantumError::Imaginary { x, y, a, b, imag: z.im });
                    }
                    // Round-off below the float tolerance is clamped.
                    let v = if z.re.abs() <= crate::scalar::POSITIVE_EPS { 0.0 } else { z.re };
                    p.push(v);
                }
            }
        }
    }
    Ok(Behavior::new(s, p)?)
}

/// `|phi+> = (1/sqrt d) sum_i |ii>` as a density matrix.
pub fn make_max_entangled(d: usize) -> Result<CMatrix, QuantumError> {
    if !(2..=MAX_DIMENSION).contains(&d) {
        return Err(QuantumError::Dimension(format!("need 2 <= d <= {MAX_DIMENSION}, got {d}")));
    }
    let amp = c(1.0 / (d as f64).sqrt());
    let mut v = vec![c(0.0); d * d];
    for i in 0..d {
        v[i * d + i] = amp;
    }
    Ok(ket_density(&v))
}

/// `|psi-> = (|01> - |10>)/sqrt 2`.
pub fn make_singlet() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ket_density(&[c(0.0), c(s), c(-s), c(0.0)])
}

/// Projectors `(I +- (sin t X + cos t Z))/2`; the `+` projector is outcome 0.
pub fn planar_qubit_projectors(theta: f64) -> [CMatrix; 2] {
    let (s, co) = theta.sin_cos();
    let plus = CMatrix::from_row_slice(2, 2, &[c((1.0 + co) / 2.0), c(s / 2.0), c(s / 2.0), c((1.0 - co) / 2.0)]);
    let minus = CMatrix::identity(2, 2) - &plus;
    [plus, minus]
}

/// Rank-one projectors onto the standard basis of `C^d`.
pub fn computational_basis(d: usize) -> Vec<CMatrix> {
    (0..d)
        .map(|i| {
            let mut m = CMatrix::zeros(d, d);
            m[(i, i)] = c(1.0);
            m
        })
        .collect()
}

/// Singlet with three planar measurements per party at the fixed angles
/// [`I3322_ALICE_ANGLES`] and [`I3322_BOB_ANGLES`].
pub fn make_i3322_model() -> QuantumModel {
    let meas = |angles: &[f64; 3]| -> Vec<Vec<CMatrix>> {
        angles.iter().map(|&t| planar_qubit_projectors(t).to_vec()).collect()
    };
    QuantumModel::new(
        make_singlet(),
        (2, 2),
        meas(&I3322_ALICE_ANGLES),
        meas(&I3322_BOB_ANGLES),
    )
    .expect("valid by construction")
}

/// Fourier-type qutrit bases: `|k> = (1/sqrt 3) sum_j w^(s j (k + shift)) |j>`
/// with `w = exp(2 pi i / 3)` and `s = +1` for Alice, `-1` for Bob.
fn fourier_basis(sign: f64, shift: f64) -> Vec<CMatrix> {
    let amp = 1.0 / 3f64.sqrt();
    (0..3)
        .map(|k| {
            let v: Vec<Complex64> = (0..3)
                .map(|j| Complex64::from_polar(amp, sign * 2.0 * PI / 3.0 * j as f64 * (k as f64 + shift)))
                .collect();
            ket_density(&v)
        })
        .collect()
}

/// Maximally entangled qutrits with the optimal two-setting CGLMP
/// measurements: Alice shifts 0 and 1/2, Bob shifts 1/4 and -1/4.
pub fn make_cglmp_model() -> QuantumModel {
    let phi = make_max_entangled(3).expect("d = 3 is supported");
    let alice = [0.0, 0.5].iter().map(|&s| fourier_basis(1.0, s)).collect();
    let bob = [0.25, -0.25].iter().map(|&s| fourier_basis(-1.0, s)).collect();
    QuantumModel::new(phi, (3, 3), alice, bob).expect("valid by construction")
}

/// Closed-form singlet statistics for planar projectors:
/// `p(a,b) = (1 - s_a s_b cos(tA - tB))/4` with `s_0 = +1`, `s_1 = -1`.
pub fn singlet_planar_probability(theta_a: f64, theta_b: f64, a: usize, b: usize) -> f64 {
    let sign = |o: usize| if o == 0 { 1.0 } else { -1.0 };
    (1.0 - sign(a) * sign(b) * (theta_a - theta_b).cos()) / 4.0
}
