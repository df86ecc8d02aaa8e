//! Random states for property checks and the `verify` suites.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::pauli::{BlochVector, DensityMatrix};
use crate::C64;

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Uniform on the Bloch sphere, i.e. a Haar-random pure qubit.
pub fn random_pure_bloch<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let z: f64 = rng.random_range(-1.0..=1.0);
    let angle: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z * z).max(0.0).sqrt();
    BlochVector::new(r * angle.cos(), r * angle.sin(), z)
}

/// A Haar-random pure qubit whose Z component satisfies `|z| < bound`.
pub fn random_pure_bloch_with_z_below<R: Rng + ?Sized>(rng: &mut R, bound: f64) -> BlochVector {
    loop {
        let v = random_pure_bloch(rng);
        if v.z.abs() < bound {
            return v;
        }
    }
}

/// Reduced state of one qubit of a Haar-random two-qubit pure state.
pub fn random_mixed_qubit<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let amplitudes: Vec<C64> = (0..4).map(|_| complex_normal(rng)).collect();
    DensityMatrix::pure(&amplitudes)
        .and_then(|rho| rho.partial_trace(1))
        .expect("Gaussian amplitudes are almost surely nonzero")
}

/// A random full-rank two-qubit state `G G† / Tr(G G†)` with Gaussian `G`.
pub fn random_two_qubit_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    let g = DMatrix::from_fn(4, 4, |_, _| complex_normal(rng));
    let m = &g * g.adjoint();
    let trace = m.trace().re;
    DensityMatrix::new(m * C64::new(1.0 / trace, 0.0)).expect("Wishart matrix is a valid state")
}
