//! Two uses of `(CNOT, 0)` and its self-recovery.
//!
//! The ladder consumes `|H_0⟩` resources to climb through states
//! `|H_i⟩ = cos θ_i |0⟩ + sin θ_i |1⟩` with `tan θ_i = tan^{i+1}(π/8)`.
//! Success moves up one rung and failure moves down one.
//!
//! The programmable ancilla rotation applies a Z-rotation by `+γ` using the
//! resource `|γ⟩ = (|0⟩ + e^{iγ}|1⟩)/√2`. Failure rotates by `−γ` instead,
//! and a second attempt with a fresh `|γ⟩` that succeeds undoes it.

use std::f64::consts::FRAC_PI_8;

use serde::Serialize;

use crate::circuits::{output_state, MeasuredOutput, PostselectedCircuit};
use crate::clifford::{CliffordElement, Gate};
use crate::pauli::DensityMatrix;
use crate::{Result, C64};

fn cnot(bit: u8) -> PostselectedCircuit {
    let c = CliffordElement::from_word_arity2(&[Gate::Cnot]).expect("two-qubit gate");
    PostselectedCircuit::new(c, bit).expect("valid outcome")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderState {
    pub i: u32,
    pub theta: f64,
}

impl LadderState {
    /// `cos θ |0⟩ + sin θ |1⟩`.
    pub fn density(&self) -> DensityMatrix {
        angle_state(self.theta)
    }
}

fn angle_state(theta: f64) -> DensityMatrix {
    DensityMatrix::pure(&[C64::new(theta.cos(), 0.0), C64::new(theta.sin(), 0.0)]).expect("unit vector")
}

/// `θ_i = atan(tan^{i+1}(π/8))`. Loses relative precision once
/// `tan^{i+1}(π/8)` underflows, around `i ≈ 800`.
pub fn ladder_state(i: u32) -> (LadderState, DensityMatrix) {
    let theta = FRAC_PI_8.tan().powi(i as i32 + 1).atan();
    let state = LadderState { i, theta };
    (state, state.density())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Branches {
    pub success: MeasuredOutput,
    pub failure: MeasuredOutput,
}

/// `(CNOT, 0)` and `(CNOT, 1)` on `|H_i⟩ ⊗ |H_0⟩`.
pub fn ladder_step(i: u32) -> Result<Branches> {
    let input = ladder_state(i).1.tensor(&ladder_state(0).1);
    Ok(Branches { success: output_state(&cnot(0), &input)?, failure: output_state(&cnot(1), &input)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LadderRow {
    pub i: u32,
    pub theta: f64,
    pub success_prob: f64,
}

/// Rungs `0..steps` with the probability of climbing from each.
pub fn ladder_trajectory(steps: u32) -> Result<Vec<LadderRow>> {
    (0..steps)
        .map(|i| {
            let (state, _) = ladder_state(i);
            Ok(LadderRow { i, theta: state.theta, success_prob: ladder_step(i)?.success.probability })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhaseResource {
    pub gamma: f64,
}

impl PhaseResource {
    pub fn new(gamma: f64) -> Self {
        PhaseResource { gamma }
    }

    /// `(|0⟩ + e^{iγ}|1⟩)/√2`.
    pub fn density(&self) -> DensityMatrix {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[C64::new(h, 0.0), C64::from_polar(h, self.gamma)]).expect("unit vector")
    }
}

/// `(CNOT, b)` on `q ⊗ |γ⟩`: success rotates `q` by `+γ` about Z and
/// failure by `−γ`.
pub fn par_rotate(q: &DensityMatrix, gamma: f64) -> Result<Branches> {
    let input = q.tensor(&PhaseResource::new(gamma).density());
    Ok(Branches { success: output_state(&cnot(0), &input)?, failure: output_state(&cnot(1), &input)? })
}

/// `(CNOT, 0)` on `failed ⊗ |γ⟩`, which returns the original input.
pub fn par_recover(failed: &DensityMatrix, gamma: f64) -> Result<MeasuredOutput> {
    output_state(&cnot(0), &failed.tensor(&PhaseResource::new(gamma).density()))
}
