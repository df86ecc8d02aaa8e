//! Postselected two-to-one circuits: apply a two-qubit Clifford, measure the
//! second qubit in the Z basis and keep the first qubit on outcome `b`.
//!
//! Everything is computed from the Kraus operator `K = (I ⊗ ⟨b|) C`, a 2×4
//! coisometry (`K K† = I`).

use std::fmt;

use nalgebra::DMatrix;

use crate::clifford::{match_single_qubit, Arity, CliffordElement};
use crate::pauli::DensityMatrix;
use crate::{Error, Result, C64, ZERO_PROBABILITY};

/// Kraus operators closer than this (after phase alignment) are equal.
pub const KRAUS_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct PostselectedCircuit {
    clifford: CliffordElement,
    bit: u8,
    kraus: DMatrix<C64>,
}

impl PartialEq for PostselectedCircuit {
    fn eq(&self, other: &Self) -> bool {
        self.bit == other.bit && self.clifford == other.clifford
    }
}

impl Eq for PostselectedCircuit {}

impl PostselectedCircuit {
    pub fn new(clifford: CliffordElement, bit: u8) -> Result<Self> {
        if clifford.arity() != Arity::Two {
            return Err(Error::ArityMismatch { expected: 2, found: clifford.arity().qubits() });
        }
        if bit > 1 {
            return Err(Error::InvalidBit(bit));
        }
        let u = clifford.matrix();
        // rows of (I ⊗ ⟨b|) C are rows 2r + b of C
        let kraus = DMatrix::from_fn(2, 4, |r, c| u[(2 * r + bit as usize, c)]);
        Ok(PostselectedCircuit { clifford, bit, kraus })
    }

    pub fn clifford(&self) -> &CliffordElement {
        &self.clifford
    }

    pub fn bit(&self) -> u8 {
        self.bit
    }

    /// `(I ⊗ ⟨b|) C`.
    pub fn kraus(&self) -> &DMatrix<C64> {
        &self.kraus
    }

    /// The same Clifford postselected on the other outcome.
    pub fn flipped(&self) -> PostselectedCircuit {
        PostselectedCircuit::new(self.clifford.clone(), 1 - self.bit).expect("valid circuit")
    }
}

impl fmt::Display for PostselectedCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.clifford, self.bit)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasuredOutput {
    pub probability: f64,
    pub state: DensityMatrix,
}

fn require_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::Dimension { expected: 4, rows: rho.dim(), cols: rho.dim() });
    }
    Ok(())
}

fn unnormalized_output(pc: &PostselectedCircuit, rho: &DensityMatrix) -> DMatrix<C64> {
    &pc.kraus * rho.matrix() * pc.kraus.adjoint()
}

/// `Q_b(C, ρ) = Tr((I ⊗ ⟨b|) C ρ C† (I ⊗ |b⟩))`.
pub fn outcome_probability(pc: &PostselectedCircuit, rho: &DensityMatrix) -> Result<f64> {
    require_two_qubit(rho)?;
    Ok(unnormalized_output(pc, rho).trace().re)
}

/// `Φ_b(C, ρ)` with its probability. Fails when the outcome cannot occur.
pub fn output_state(pc: &PostselectedCircuit, rho: &DensityMatrix) -> Result<MeasuredOutput> {
    require_two_qubit(rho)?;
    let out = unnormalized_output(pc, rho);
    let probability = out.trace().re;
    if probability <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(probability));
    }
    Ok(MeasuredOutput { probability, state: DensityMatrix::from_unnormalized(out, probability) })
}

/// Distance between `a` and the best phase-aligned multiple `c·b`, `|c| = 1`.
///
/// Infinite if the best multiple does not have unit modulus.
pub(crate) fn kraus_distance(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let norm_b = b.norm_squared();
    let overlap = b.iter().zip(a.iter()).map(|(x, y)| x.conj() * y).sum::<C64>() / norm_b;
    if (overlap.norm() - 1.0).abs() > 1e-6 {
        return f64::INFINITY;
    }
    (a - b * (overlap / overlap.norm())).camax()
}

/// `(C_a, b_a) ≡ (C_c, b_c)`: the Kraus operators agree up to a global phase.
pub fn strictly_equivalent(a: &PostselectedCircuit, c: &PostselectedCircuit) -> bool {
    kraus_distance(&a.kraus, &c.kraus) <= KRAUS_TOLERANCE
}

/// `(C_a, b_a) ∼ (C_c, b_c)`: returns the single-qubit Clifford `G` with
/// `K_a = e^{iα} G K_c`, if one exists.
///
/// Since `K_c K_c† = I`, such a `G` can only be `K_a K_c†`.
pub fn clifford_equivalent(a: &PostselectedCircuit, c: &PostselectedCircuit) -> Option<CliffordElement> {
    let candidate = &a.kraus * c.kraus.adjoint();
    let (g, _) = match_single_qubit(&candidate, 1e-8).ok()?;
    let rotated = g.matrix() * &c.kraus;
    (kraus_distance(&a.kraus, &rotated) <= KRAUS_TOLERANCE).then(|| g.clone())
}
