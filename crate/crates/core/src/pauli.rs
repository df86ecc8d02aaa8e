//! One- and two-qubit Pauli operators with exact phases, and the conversion
//! between single-qubit density matrices and Bloch vectors.
//!
//! Phases are stored as an exponent of `i` modulo 4, so the algebra never
//! touches floating point. Two-qubit Paulis are written `σ_jk = σ_j ⊗ σ_k`
//! with `σ_0 = I`, `σ_1 = X`, `σ_2 = Y`, `σ_3 = Z`. The first tensor factor is
//! the most significant bit of the computational basis index.

use std::fmt;
use std::ops::{Mul, Neg};

use nalgebra::DMatrix;

use crate::{Error, Result, C64};

const HERMITIAN_TOLERANCE: f64 = 1e-12;
const TRACE_TOLERANCE: f64 = 1e-12;
const EIGENVALUE_TOLERANCE: f64 = 1e-9;
const BLOCH_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SinglePauli {
    I = 0,
    X = 1,
    Y = 2,
    Z = 3,
}

impl SinglePauli {
    pub const ALL: [SinglePauli; 4] = [SinglePauli::I, SinglePauli::X, SinglePauli::Y, SinglePauli::Z];

    pub fn from_index(index: u8) -> Option<Self> {
        Self::ALL.get(index as usize).copied()
    }

    pub fn index(self) -> u8 {
        self as u8
    }

    pub fn is_identity(self) -> bool {
        self == SinglePauli::I
    }

    /// Product `self · other` as a phase and a Pauli.
    pub fn product(self, other: SinglePauli) -> (Phase, SinglePauli) {
        use SinglePauli::*;
        match (self, other) {
            (I, p) | (p, I) => (Phase::ONE, p),
            (a, b) if a == b => (Phase::ONE, I),
            // XY = iZ, YZ = iX, ZX = iY, and the reversed orders pick up -i.
            (X, Y) => (Phase::I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, X) => (Phase::I, Y),
            (Y, X) => (Phase::MINUS_I, Z),
            (Z, Y) => (Phase::MINUS_I, X),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    pub fn commutes_with(self, other: SinglePauli) -> bool {
        self.is_identity() || other.is_identity() || self == other
    }

    pub fn matrix(self) -> DMatrix<C64> {
        let z = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let entries = match self {
            SinglePauli::I => [one, z, z, one],
            SinglePauli::X => [z, one, one, z],
            SinglePauli::Y => [z, -i, i, z],
            SinglePauli::Z => [one, z, z, -one],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }

    pub fn symbol(self) -> char {
        ['I', 'X', 'Y', 'Z'][self as usize]
    }
}

impl fmt::Display for SinglePauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A fourth root of unity `i^exponent`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_exponent(exponent: u8) -> Self {
        Phase(exponent % 4)
    }

    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn inverse(self) -> Self {
        Phase((4 - self.0) % 4)
    }

    pub fn value(self) -> C64 {
        match self.0 {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+", "+i", "-", "-i"][self.0 as usize])
    }
}

/// `phase · σ_j ⊗ σ_k`, the closure of two-qubit Paulis under multiplication.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PhasedPauliProduct {
    pub phase: Phase,
    pub factors: [SinglePauli; 2],
}

impl PhasedPauliProduct {
    pub const IDENTITY: PhasedPauliProduct =
        PhasedPauliProduct { phase: Phase::ONE, factors: [SinglePauli::I, SinglePauli::I] };

    pub fn new(phase: Phase, j: SinglePauli, k: SinglePauli) -> Self {
        PhasedPauliProduct { phase, factors: [j, k] }
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_real()
    }

    /// The signed Pauli this product equals, if its phase is `±1`.
    pub fn to_signed(&self) -> Option<SignedTwoQubitPauli> {
        match self.phase {
            Phase::ONE => Some(SignedTwoQubitPauli::new(false, self.factors[0], self.factors[1])),
            Phase::MINUS_ONE => Some(SignedTwoQubitPauli::new(true, self.factors[0], self.factors[1])),
            _ => None,
        }
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        self.factors[0].matrix().kronecker(&self.factors[1].matrix()) * self.phase.value()
    }
}

impl Mul for PhasedPauliProduct {
    type Output = PhasedPauliProduct;

    fn mul(self, rhs: PhasedPauliProduct) -> PhasedPauliProduct {
        let (p0, f0) = self.factors[0].product(rhs.factors[0]);
        let (p1, f1) = self.factors[1].product(rhs.factors[1]);
        PhasedPauliProduct { phase: self.phase * rhs.phase * p0 * p1, factors: [f0, f1] }
    }
}

impl fmt::Display for PhasedPauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.phase, self.factors[0], self.factors[1])
    }
}

/// `±σ_j ⊗ σ_k`. Always Hermitian and squares to the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedTwoQubitPauli {
    negative: bool,
    j: SinglePauli,
    k: SinglePauli,
}

impl SignedTwoQubitPauli {
    pub const fn new(negative: bool, j: SinglePauli, k: SinglePauli) -> Self {
        SignedTwoQubitPauli { negative, j, k }
    }

    pub const fn positive(j: SinglePauli, k: SinglePauli) -> Self {
        Self::new(false, j, k)
    }

    /// `+σ_jk` from indices; `None` if either index exceeds 3.
    pub fn sigma(j: u8, k: u8) -> Option<Self> {
        Some(Self::positive(SinglePauli::from_index(j)?, SinglePauli::from_index(k)?))
    }

    pub fn identity() -> Self {
        Self::positive(SinglePauli::I, SinglePauli::I)
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> i8 {
        if self.negative {
            -1
        } else {
            1
        }
    }

    pub fn first(&self) -> SinglePauli {
        self.j
    }

    pub fn second(&self) -> SinglePauli {
        self.k
    }

    /// `+σ_jk`, dropping the sign.
    pub fn unsigned(&self) -> Self {
        Self::positive(self.j, self.k)
    }

    /// The same Pauli with its tensor factors exchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.negative, self.k, self.j)
    }

    pub fn is_identity(&self) -> bool {
        self.j.is_identity() && self.k.is_identity()
    }

    /// Membership in `P±`: both factors nontrivial.
    pub fn in_p_pm(&self) -> bool {
        !self.j.is_identity() && !self.k.is_identity()
    }

    pub fn commutes_with(&self, other: &SignedTwoQubitPauli) -> bool {
        let anti = !self.j.commutes_with(other.j) as u8 + !self.k.commutes_with(other.k) as u8;
        anti.is_multiple_of(2)
    }

    pub fn to_phased(&self) -> PhasedPauliProduct {
        let phase = if self.negative { Phase::MINUS_ONE } else { Phase::ONE };
        PhasedPauliProduct::new(phase, self.j, self.k)
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        self.to_phased().matrix()
    }

    /// The index pair as written in `σ_jk`, e.g. `"13"`.
    pub fn label(&self) -> String {
        format!("{}{}", self.j.index(), self.k.index())
    }
}

impl Neg for SignedTwoQubitPauli {
    type Output = SignedTwoQubitPauli;

    fn neg(self) -> SignedTwoQubitPauli {
        SignedTwoQubitPauli { negative: !self.negative, ..self }
    }
}

impl fmt::Display for SignedTwoQubitPauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.negative { '-' } else { '+' };
        write!(f, "{sign}{}{}", self.j, self.k)
    }
}

/// Exact product of two signed Paulis.
pub fn pauli_mul(a: SignedTwoQubitPauli, b: SignedTwoQubitPauli) -> PhasedPauliProduct {
    a.to_phased() * b.to_phased()
}

#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn component(&self, pauli: SinglePauli) -> f64 {
        match pauli {
            SinglePauli::I => 1.0,
            SinglePauli::X => self.x,
            SinglePauli::Y => self.y,
            SinglePauli::Z => self.z,
        }
    }
}

impl fmt::Display for BlochVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A validated one- or two-qubit density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(DMatrix<C64>);

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols || !(rows == 2 || rows == 4) {
            return Err(Error::InvalidState(format!("density matrix must be 2x2 or 4x4, got {rows}x{cols}")));
        }
        let skew = (&matrix - matrix.adjoint()).camax();
        if skew > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {skew:e})")));
        }
        let trace = matrix.trace();
        if (trace - C64::new(1.0, 0.0)).norm() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace is {trace}, expected 1")));
        }
        let hermitian = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        let min_eigenvalue = hermitian.symmetric_eigenvalues().min();
        if min_eigenvalue < -EIGENVALUE_TOLERANCE {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_eigenvalue:e}")));
        }
        Ok(DensityMatrix(hermitian))
    }

    /// Normalizes a positive operator by its trace, symmetrizing away rounding.
    pub(crate) fn from_unnormalized(matrix: DMatrix<C64>, trace: f64) -> Self {
        let hermitian = (&matrix + matrix.adjoint()) * C64::new(0.5 / trace, 0.0);
        DensityMatrix(hermitian)
    }

    /// `|v⟩⟨v|` for a (not necessarily normalized) amplitude vector.
    pub fn pure(amplitudes: &[C64]) -> Result<Self> {
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq <= 0.0 || !norm_sq.is_finite() {
            return Err(Error::InvalidState("zero or non-finite amplitude vector".into()));
        }
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        let outer = &v * v.adjoint() * C64::new(1.0 / norm_sq, 0.0);
        DensityMatrix::new(outer)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let m = DMatrix::<C64>::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0);
        DensityMatrix::new(m)
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    /// `self ⊗ other`; both must be single-qubit.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        assert!(self.dim() == 2 && other.dim() == 2, "tensor product of two single-qubit states only");
        DensityMatrix(self.0.kronecker(&other.0))
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, unitary: &DMatrix<C64>) -> DensityMatrix {
        let m = unitary * &self.0 * unitary.adjoint();
        DensityMatrix::from_unnormalized(m, 1.0)
    }

    pub fn purity(&self) -> f64 {
        (&self.0 * &self.0).trace().re
    }

    /// `Tr(Mρ)`, real part.
    pub fn expectation(&self, observable: &DMatrix<C64>) -> f64 {
        (observable * &self.0).trace().re
    }

    /// Largest entrywise deviation.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        (&self.0 - &other.0).camax()
    }

    pub fn approx_eq(&self, other: &DensityMatrix, tolerance: f64) -> bool {
        self.dim() == other.dim() && self.distance(other) <= tolerance
    }

    /// Reduced state of qubit 1 (`keep = 0`) or qubit 2 (`keep = 1`) of a two-qubit state.
    pub fn partial_trace(&self, keep: usize) -> Result<DensityMatrix> {
        if self.dim() != 4 {
            return Err(Error::Dimension { expected: 4, rows: self.dim(), cols: self.dim() });
        }
        let mut out = DMatrix::<C64>::zeros(2, 2);
        for a in 0..2 {
            for b in 0..2 {
                for t in 0..2 {
                    let (r, c) = if keep == 0 { (2 * a + t, 2 * b + t) } else { (2 * t + a, 2 * t + b) };
                    out[(a, b)] += self.0[(r, c)];
                }
            }
        }
        Ok(DensityMatrix::from_unnormalized(out, 1.0))
    }
}

/// `(Tr(Xφ), Tr(Yφ), Tr(Zφ))`.
pub fn bloch_of(phi: &DensityMatrix) -> Result<BlochVector> {
    if phi.dim() != 2 {
        return Err(Error::Dimension { expected: 2, rows: phi.dim(), cols: phi.dim() });
    }
    let m = phi.matrix();
    // φ01 = (x - iy)/2, φ10 = (x + iy)/2
    Ok(BlochVector { x: 2.0 * m[(0, 1)].re, y: 2.0 * m[(1, 0)].im, z: (m[(0, 0)] - m[(1, 1)]).re })
}

/// `(I + xX + yY + zZ) / 2`.
pub fn density_of(v: &BlochVector) -> Result<DensityMatrix> {
    let norm = v.norm();
    if !norm.is_finite() || norm > 1.0 + BLOCH_TOLERANCE {
        return Err(Error::InvalidState(format!("Bloch vector {v} has norm {norm} > 1")));
    }
    let h = C64::new(0.5, 0.0);
    let m = DMatrix::from_row_slice(
        2,
        2,
        &[h * (1.0 + v.z), h * C64::new(v.x, -v.y), h * C64::new(v.x, v.y), h * (1.0 - v.z)],
    );
    Ok(DensityMatrix(m))
}
