//! Recovery circuits for interacting postselected circuits.
//!
//! The failure branch of an interacting `(C, b)` is strictly equivalent to
//! `((G2†⊗I)·CNOT·(G1⊗G), 1)`. Feeding its output back with a fresh copy of
//! `ψ` through `((G1†⊗I)·CNOT·(G2⊗G), 0)` returns `φ`.
//!
//! Strict equivalence of one branch says nothing about the other: `C` and
//! `CZ·C` agree on outcome 0 but differ by `Z⊗I` on outcome 1. The
//! decomposition is therefore always taken from `(C, 1−b)` itself.

use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::circuits::{outcome_probability, output_state, strictly_equivalent, PostselectedCircuit};
use crate::classify::{all_circuits, canonicalize, FormKind};
use crate::clifford::{Arity, CliffordElement, Gate};
use crate::pauli::{bloch_of, density_of, BlochVector, DensityMatrix, SignedTwoQubitPauli, SinglePauli};
use crate::{Error, Result, STATE_TOLERANCE, ZERO_PROBABILITY};

/// `C′ = (G1†⊗I)·CNOT·(G2⊗G)` postselected on 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecoverySpec {
    pub circuit: PostselectedCircuit,
    pub g1: CliffordElement,
    pub g2: CliffordElement,
    /// The gate `G` applied to the resource qubit.
    pub resource_gate: CliffordElement,
}

impl fmt::Display for RecoverySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} with G1=[{}] G2=[{}] G=[{}]", self.circuit, self.g1, self.g2, self.resource_gate)
    }
}

/// Canonicalizes the failure branch `(C, 1−b)` as `(G3·CNOT·(G1⊗G2'), 0)`,
/// rewrites it as `((G2†⊗I)·CNOT·(G1⊗G), 1)` with `G = X·G2'` and `G2 = G3†`,
/// and returns `((G1†⊗I)·CNOT·(G2⊗G), 0)`.
pub fn synthesize_recovery(pc: &PostselectedCircuit) -> Result<RecoverySpec> {
    let form = canonicalize(&pc.flipped())?;
    if form.kind != FormKind::Interacting {
        return Err(Error::NotInteracting(form.kind.to_string()));
    }
    let g1 = form.g1;
    let resource_gate =
        form.g2.expect("interacting form has G2").then(&CliffordElement::gate(Arity::One, Gate::X1)?)?;
    let g2 = form.g3.inverse();
    let clifford = CliffordElement::tensor(&g2, &resource_gate)?
        .then(&CliffordElement::gate(Arity::Two, Gate::Cnot)?)?
        .then(&g1.inverse().lift(0)?)?;
    Ok(RecoverySpec { circuit: PostselectedCircuit::new(clifford, 0)?, g1, g2, resource_gate })
}

/// `Φ_{b′}(C′, Φ_{1−b}(C, φ⊗ψ) ⊗ ψ)` with both branch probabilities.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundTrip {
    pub failure_probability: f64,
    pub recovery_probability: f64,
    pub recovered: DensityMatrix,
}

pub fn round_trip(
    spec: &RecoverySpec,
    source: &PostselectedCircuit,
    phi: &DensityMatrix,
    psi: &DensityMatrix,
) -> Result<RoundTrip> {
    let failed = output_state(&source.flipped(), &phi.tensor(psi))?;
    let back = output_state(&spec.circuit, &failed.state.tensor(psi))?;
    Ok(RoundTrip {
        failure_probability: failed.probability,
        recovery_probability: back.probability,
        recovered: back.state,
    })
}

/// Success rate of a recovery whose source succeeded with probability `q_b`,
/// given `z = ⟨ψ|G†ZG|ψ⟩`: `((1 − z²)/4)/(1 − q_b)`.
pub fn recovery_success_rate(q_b: f64, z: f64) -> Result<f64> {
    let failure = 1.0 - q_b;
    if failure <= ZERO_PROBABILITY {
        return Err(Error::ZeroProbability(failure));
    }
    Ok((1.0 - z * z) / 4.0 / failure)
}

/// Closed-form probability that `spec` succeeds on the failed output of
/// `source` on `φ⊗ψ`, fed back with `ψ`. `ψ` should be pure.
pub fn recovery_probability(
    spec: &RecoverySpec,
    source: &PostselectedCircuit,
    phi: &DensityMatrix,
    psi: &DensityMatrix,
) -> Result<f64> {
    let q_b = outcome_probability(source, &phi.tensor(psi))?;
    let rotated = psi.conjugated(&spec.resource_gate.matrix());
    recovery_success_rate(q_b, bloch_of(&rotated)?.z)
}

/// The same probability obtained by running both circuits.
pub fn recovery_probability_direct(
    spec: &RecoverySpec,
    source: &PostselectedCircuit,
    phi: &DensityMatrix,
    psi: &DensityMatrix,
) -> Result<f64> {
    let failed = output_state(&source.flipped(), &phi.tensor(psi))?;
    outcome_probability(&spec.circuit, &failed.state.tensor(psi))
}

/// `(√(2/17), √(5/17), √(10/17))`.
pub fn reference_phi() -> BlochVector {
    BlochVector::new((2.0f64 / 17.0).sqrt(), (5.0f64 / 17.0).sqrt(), (10.0f64 / 17.0).sqrt())
}

/// `(√(1/11), √(3/11), √(7/11))`.
pub fn reference_psi() -> BlochVector {
    BlochVector::new((1.0f64 / 11.0).sqrt(), (3.0f64 / 11.0).sqrt(), (7.0f64 / 11.0).sqrt())
}

/// Inputs `φ` used to screen recovery candidates: the four tetrahedral
/// points, one mixed state and [`reference_phi`].
pub fn probe_inputs() -> [BlochVector; 6] {
    let t = 1.0 / 3f64.sqrt();
    [
        BlochVector::new(t, t, t),
        BlochVector::new(t, -t, -t),
        BlochVector::new(-t, t, -t),
        BlochVector::new(-t, -t, t),
        BlochVector::new(0.3, -0.2, 0.4),
        reference_phi(),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub source: String,
    pub recovery: String,
    pub candidates: usize,
    /// Candidates that restore every probe input.
    pub passers: usize,
    pub non_equivalent_passers: usize,
    pub synthesized_passes: bool,
}

impl UniquenessReport {
    pub fn holds(&self) -> bool {
        self.synthesized_passes && self.passers > 0 && self.non_equivalent_passers == 0
    }
}

/// Sweeps all 23040 postselected circuits for ones that recover `pc` on the
/// probe inputs with `ψ =` [`reference_psi`], and compares them with the
/// synthesized recovery.
pub fn uniqueness_report(pc: &PostselectedCircuit) -> Result<UniquenessReport> {
    let spec = synthesize_recovery(pc)?;
    let psi = density_of(&reference_psi())?;
    let cases = probe_inputs()
        .iter()
        .map(|v| {
            let phi = density_of(v)?;
            let failed = output_state(&pc.flipped(), &phi.tensor(&psi))?;
            Ok((phi, failed.state.tensor(&psi)))
        })
        .collect::<Result<Vec<_>>>()?;
    let recovers = |candidate: &PostselectedCircuit| {
        cases.iter().all(|(phi, input)| {
            output_state(candidate, input).is_ok_and(|out| out.state.approx_eq(phi, STATE_TOLERANCE))
        })
    };
    let circuits = all_circuits();
    let (passers, non_equivalent_passers) = circuits
        .par_iter()
        .filter(|c| recovers(c))
        .map(|c| (1usize, usize::from(!strictly_equivalent(c, &spec.circuit))))
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    Ok(UniquenessReport {
        source: pc.to_string(),
        recovery: spec.circuit.to_string(),
        candidates: circuits.len(),
        passers,
        non_equivalent_passers,
        synthesized_passes: recovers(&spec.circuit),
    })
}

/// True iff every circuit that recovers `pc` on the probe inputs is strictly
/// equivalent to the synthesized recovery.
pub fn verify_uniqueness(pc: &PostselectedCircuit) -> Result<bool> {
    Ok(uniqueness_report(pc)?.holds())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistinctnessRow {
    #[serde(serialize_with = "serialize_label")]
    pub lambda03: SignedTwoQubitPauli,
    pub a03: f64,
    pub a30: f64,
    pub a33: f64,
    pub v: f64,
}

fn serialize_label<S: serde::Serializer>(l: &SignedTwoQubitPauli, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&l.label())
}

/// `v = (a30 + a33)/(1 + a03)` for `λ_03 = ±σ_jk`, `j, k ∈ {1,2,3}`, with
/// `a30 = φ_j` from [`reference_phi`], `a33 = ±ψ_k` from [`reference_psi`]
/// and `a03 = a30·a33`. Positive signs first.
pub fn distinctness_table() -> Vec<DistinctnessRow> {
    let (phi, psi) = (reference_phi(), reference_psi());
    let paulis = [SinglePauli::X, SinglePauli::Y, SinglePauli::Z];
    let mut rows = Vec::with_capacity(18);
    for negative in [false, true] {
        for j in paulis {
            for k in paulis {
                let a30 = phi.component(j);
                let a33 = if negative { -psi.component(k) } else { psi.component(k) };
                let a03 = a30 * a33;
                rows.push(DistinctnessRow {
                    lambda03: SignedTwoQubitPauli::new(negative, j, k),
                    a03,
                    a30,
                    a33,
                    v: (a30 + a33) / (1.0 + a03),
                });
            }
        }
    }
    rows
}

/// Smallest gap between any two of the 36 values `±v`.
pub fn distinctness_margin(rows: &[DistinctnessRow]) -> f64 {
    let values: Vec<f64> = rows.iter().flat_map(|r| [r.v, -r.v]).collect();
    let mut margin = f64::INFINITY;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            margin = margin.min((a - b).abs());
        }
    }
    margin
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuits::clifford_equivalent;
    use crate::classify::{interacting_class_representatives, is_interacting};
    use crate::clifford::two_qubit_group;
    use crate::sample;
    use crate::C64;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn circuit(word: &[Gate], bit: u8) -> PostselectedCircuit {
        PostselectedCircuit::new(CliffordElement::from_word_arity2(word).unwrap(), bit).unwrap()
    }

    fn random_interacting(rng: &mut ChaCha8Rng) -> PostselectedCircuit {
        let group = two_qubit_group();
        loop {
            let c = group.elements()[rng.random_range(0..group.len())].clone();
            let pc = PostselectedCircuit::new(c, rng.random_range(0..2)).unwrap();
            if is_interacting(&pc) {
                return pc;
            }
        }
    }

    /// Round trip on state vectors: `(I⊗⟨b|)C(φ⊗ψ)`, renormalized.
    fn dense_round_trip(
        source: &PostselectedCircuit,
        recovery: &PostselectedCircuit,
        phi: [C64; 2],
        psi: [C64; 2],
    ) -> [C64; 2] {
        let apply = |pc: &PostselectedCircuit, a: [C64; 2]| {
            let input = DMatrix::from_fn(4, 1, |i, _| a[i / 2] * psi[i % 2]);
            let out = pc.clifford().matrix() * input;
            let b = pc.bit() as usize;
            let v = [out[(b, 0)], out[(2 + b, 0)]];
            let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
            [v[0] / n, v[1] / n]
        };
        apply(recovery, apply(&source.flipped(), phi))
    }

    #[test]
    fn cnot_is_its_own_recovery() {
        let spec = synthesize_recovery(&circuit(&[Gate::Cnot], 0)).unwrap();
        assert!(strictly_equivalent(&spec.circuit, &circuit(&[Gate::Cnot], 0)));
    }

    #[test]
    fn identity_has_no_recovery() {
        assert!(matches!(synthesize_recovery(&circuit(&[], 0)), Err(Error::NotInteracting(_))));
        assert!(matches!(synthesize_recovery(&circuit(&[Gate::Swap], 1)), Err(Error::NotInteracting(_))));
    }

    #[test]
    fn flipped_resource_against_dense_oracle() {
        let source = circuit(&[Gate::X2, Gate::Cnot], 0);
        let spec = synthesize_recovery(&source).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let r = |rng: &mut ChaCha8Rng| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let (a, b, c, d) = (r(&mut rng), r(&mut rng), r(&mut rng), r(&mut rng));
            let na = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let nc = (c.norm_sqr() + d.norm_sqr()).sqrt();
            let phi = [a / na, b / na];
            let psi = [c / nc, d / nc];
            let out = dense_round_trip(&source, &spec.circuit, phi, psi);
            let overlap = (out[0].conj() * phi[0] + out[1].conj() * phi[1]).norm();
            assert!((overlap - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn round_trip_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for i in 0..300 {
            let pc = random_interacting(&mut rng);
            let spec = synthesize_recovery(&pc).unwrap();
            let phi = if i % 3 == 0 {
                sample::random_mixed_qubit(&mut rng)
            } else {
                density_of(&sample::random_pure_bloch(&mut rng)).unwrap()
            };
            let psi = density_of(&sample::random_pure_bloch_with_z_below(&mut rng, 0.999)).unwrap();
            let trip = round_trip(&spec, &pc, &phi, &psi).unwrap();
            assert!(trip.recovered.approx_eq(&phi, 1e-9), "{pc} -> {spec}");
            let closed = recovery_probability(&spec, &pc, &phi, &psi).unwrap();
            assert!((closed - trip.recovery_probability).abs() < 1e-12);
            let direct = recovery_probability_direct(&spec, &pc, &phi, &psi).unwrap();
            assert!((closed - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn success_rate_values() {
        for (z2, expected) in [(0.96, 0.02), (0.5, 0.25), (0.04, 0.48), (0.0, 0.5)] {
            let rate = recovery_success_rate(0.5, f64::sqrt(z2)).unwrap();
            assert!((rate - expected).abs() < 1e-15, "{z2}: {rate}");
        }
        assert_eq!(recovery_success_rate(0.5, 1.0).unwrap(), 0.0);
        assert!(matches!(recovery_success_rate(1.0, 0.0), Err(Error::ZeroProbability(_))));
    }

    #[test]
    fn stabilizer_resource_gives_zero() {
        let source = circuit(&[Gate::Cnot], 0);
        let spec = synthesize_recovery(&source).unwrap();
        let phi = density_of(&BlochVector::new(0.6, 0.0, 0.8)).unwrap();
        let zero = density_of(&BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        assert_eq!(recovery_probability(&spec, &source, &phi, &zero).unwrap(), 0.0);
    }

    #[test]
    fn recoveries_are_interacting() {
        let reps = interacting_class_representatives();
        assert_eq!(reps.len(), 18);
        for pc in &reps {
            assert!(is_interacting(&synthesize_recovery(pc).unwrap().circuit));
        }
    }

    #[test]
    fn recovery_of_recovery_matches_the_failure_branch() {
        // flipping the bit of the second recovery gives back (C, 1−b) exactly
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let pc = random_interacting(&mut rng);
            let spec = synthesize_recovery(&pc).unwrap();
            let again = synthesize_recovery(&spec.circuit).unwrap();
            assert!(strictly_equivalent(&again.circuit.flipped(), &pc.flipped()), "{pc}");
            assert!(clifford_equivalent(&again.circuit, &pc).is_some());
        }
    }

    #[test]
    fn uniqueness_examples() {
        let cnot = uniqueness_report(&circuit(&[Gate::Cnot], 0)).unwrap();
        assert!(cnot.holds(), "{cnot:?}");
        assert_eq!(cnot.passers, 32);
        let other = circuit(&[Gate::X1, Gate::H2, Gate::Cnot], 0);
        assert!(verify_uniqueness(&other).unwrap());
        let spec = synthesize_recovery(&other).unwrap();
        assert!(verify_uniqueness(&spec.circuit).unwrap());
        assert!(matches!(verify_uniqueness(&circuit(&[], 0)), Err(Error::NotInteracting(_))));
    }

    const PAPER_V: [(bool, u8, u8, f64); 18] = [
        (false, 1, 1, 0.5841),
        (false, 1, 2, 0.7338),
        (false, 1, 3, 0.8957),
        (false, 2, 1, 0.7252),
        (false, 2, 2, 0.8296),
        (false, 2, 3, 0.9354),
        (false, 3, 1, 0.8678),
        (false, 3, 2, 0.9205),
        (false, 3, 3, 0.9708),
        (true, 1, 1, 0.0463),
        (true, 1, 2, -0.2183),
        (true, 1, 3, -0.6260),
        (true, 2, 1, 0.2879),
        (true, 2, 2, 0.0280),
        (true, 2, 3, -0.4501),
        (true, 3, 1, 0.6055),
        (true, 3, 2, 0.4083),
        (true, 3, 3, -0.0792),
    ];

    #[test]
    fn table_matches_published_values() {
        let rows = distinctness_table();
        assert_eq!(rows.len(), 18);
        for (row, &(neg, j, k, v)) in rows.iter().zip(PAPER_V.iter()) {
            let l = SignedTwoQubitPauli::sigma(j, k).unwrap();
            assert_eq!(row.lambda03, if neg { -l } else { l });
            assert!((row.v - v).abs() < 5e-5, "{}: {} vs {v}", row.lambda03, row.v);
            assert!((row.a03 - row.a30 * row.a33).abs() < 1e-15);
        }
        assert!(distinctness_margin(&rows) > 1e-3);
    }

    #[test]
    fn table_matches_projected_expectation() {
        // v = Tr(λ30 Π ρ Π)/Tr(Π ρ Π), Π = (I + λ03)/2, ρ = φ⊗ψ, λ30 = σ_j ⊗ I
        let rho = density_of(&reference_phi()).unwrap().tensor(&density_of(&reference_psi()).unwrap());
        let id = DMatrix::<C64>::identity(4, 4);
        for row in distinctness_table() {
            let pi = (&id + row.lambda03.matrix()) * C64::new(0.5, 0.0);
            let projected = &pi * rho.matrix() * &pi;
            let l30 = SignedTwoQubitPauli::positive(row.lambda03.first(), SinglePauli::I).matrix();
            let v = (l30 * &projected).trace().re / projected.trace().re;
            assert!((v - row.v).abs() < 1e-12, "{}", row.lambda03);
        }
    }
}
