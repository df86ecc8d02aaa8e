//! Acceptance gate: ten end-to-end checks with their tolerances and time
//! limits. Prints one PASS/FAIL line each and exits nonzero on any failure.

use std::collections::{HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stabrec::applications::{ladder_step, par_recover, par_rotate};
use stabrec::circuits::{outcome_probability, output_state, strictly_equivalent};
use stabrec::classify::{
    all_circuits, canonicalize, census, interacting_class_representatives, is_interacting, FormKind,
};
use stabrec::clifford::{enumerate, Arity};
use stabrec::pauli::{bloch_of, density_of, BlochVector, DensityMatrix, SinglePauli};
use stabrec::protocol::{analytic_cost, probability_sequence, simulate, ProtocolConfig};
use stabrec::recovery::{
    distinctness_table, recovery_probability, recovery_success_rate, synthesize_recovery, uniqueness_report,
};
use stabrec::{sample, PostselectedCircuit, C64};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let elapsed = start.elapsed();
    check(elapsed < limit, format!("{detail}; {:.2}s (limit {}s)", elapsed.as_secs_f64(), limit.as_secs()))
}

fn group_orders() -> Outcome {
    let start = Instant::now();
    let (one, two) = (enumerate(Arity::One).len(), enumerate(Arity::Two).len());
    check(one == 24 && two == 11520, format!("|C1| = {one}, |C2| = {two}"))?;
    within(Duration::from_secs(10), start, format!("|C1| = {one}, |C2| = {two}"))
}

/// Which `±σ_jk` equals `2Π − I`, read off from `Tr(σ_jk M)/4`.
fn dense_projector_pauli(pc: &PostselectedCircuit) -> (i8, usize, usize) {
    let u = pc.clifford().matrix();
    let b = pc.bit() as usize;
    let mut proj = DMatrix::<C64>::zeros(4, 4);
    for r in 0..2 {
        proj[(2 * r + b, 2 * r + b)] = C64::new(1.0, 0.0);
    }
    let m = u.adjoint() * proj * &u * C64::new(2.0, 0.0) - DMatrix::<C64>::identity(4, 4);
    for j in 0..4 {
        for k in 0..4 {
            let s = SinglePauli::from_index(j as u8)
                .unwrap()
                .matrix()
                .kronecker(&SinglePauli::from_index(k as u8).unwrap().matrix());
            let t = (&s * &m).trace().re / 4.0;
            if (t.abs() - 1.0).abs() < 1e-9 {
                return (t.signum() as i8, j, k);
            }
        }
    }
    panic!("{pc}: 2Π − I is not a Pauli");
}

/// The Kraus operator divided by the phase of its first sizable entry,
/// rounded, as a hashable key.
fn phase_free_key(pc: &PostselectedCircuit) -> Vec<i64> {
    let k = pc.kraus();
    let pivot = k.iter().find(|z| z.norm() > 1e-6).unwrap();
    let phase = pivot / pivot.norm();
    k.iter()
        .flat_map(|z| {
            let w = z / phase;
            [(w.re * 1e6).round() as i64, (w.im * 1e6).round() as i64]
        })
        .collect()
}

fn census_counts() -> Outcome {
    let start = Instant::now();
    let c = census().map_err(|e| e.to_string())?;
    let detail = format!(
        "{} projector classes = {} interacting + {} trivial + {} swap; {} strict interacting classes",
        c.projector_classes, c.interacting_classes, c.trivial_classes, c.swap_classes, c.strict_interacting_classes
    );
    check(
        (c.projector_classes, c.interacting_classes, c.trivial_classes, c.swap_classes, c.strict_interacting_classes)
            == (30, 18, 6, 6, 432),
        detail.clone(),
    )?;

    // dense projectors and phase-free Kraus keys, independent of the tableaux
    let mut lambdas = HashSet::new();
    let mut strict = HashSet::new();
    for pc in all_circuits() {
        let (sign, j, k) = dense_projector_pauli(pc);
        lambdas.insert((sign, j, k));
        if j != 0 && k != 0 {
            strict.insert(phase_free_key(pc));
        }
    }
    let interacting = lambdas.iter().filter(|(_, j, k)| *j != 0 && *k != 0).count();
    check(
        lambdas.len() == 30 && interacting == 18 && strict.len() == 432,
        format!(
            "dense oracle: {} projectors, {interacting} interacting, {} Kraus classes",
            lambdas.len(),
            strict.len()
        ),
    )?;
    within(Duration::from_secs(60), start, detail)
}

fn canonicalization() -> Outcome {
    let start = Instant::now();
    let circuits = all_circuits();
    let mut failures = 0;
    for pc in circuits {
        let form = canonicalize(pc).map_err(|e| format!("{pc}: {e}"))?;
        let (_, j, k) = dense_projector_pauli(pc);
        let kind = match (j, k) {
            (0, _) => FormKind::Trivial,
            (_, 0) => FormKind::Swap,
            _ => FormKind::Interacting,
        };
        let recon = form.reconstruct().map_err(|e| e.to_string())?;
        if form.kind != kind || !strictly_equivalent(&recon, pc) {
            failures += 1;
        }
    }
    let detail = format!("{} of {} reconstructions strictly equivalent", circuits.len() - failures, circuits.len());
    check(failures == 0, detail.clone())?;
    within(Duration::from_secs(300), start, detail)
}

/// `(I⊗⟨b|)C(a⊗ψ)`, normalized, on state vectors.
fn apply_vector(pc: &PostselectedCircuit, a: [C64; 2], psi: [C64; 2]) -> [C64; 2] {
    let input = DMatrix::from_fn(4, 1, |i, _| a[i / 2] * psi[i % 2]);
    let out = pc.clifford().matrix() * input;
    let b = pc.bit() as usize;
    let v = [out[(b, 0)], out[(2 + b, 0)]];
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    [v[0] / n, v[1] / n]
}

fn vector_of(v: &BlochVector) -> [C64; 2] {
    let theta = v.z.clamp(-1.0, 1.0).acos();
    [C64::new((theta / 2.0).cos(), 0.0), C64::from_polar((theta / 2.0).sin(), v.y.atan2(v.x))]
}

struct Instance {
    pc: PostselectedCircuit,
    phi: DensityMatrix,
    phi_vector: Option<[C64; 2]>,
    psi: BlochVector,
}

fn instances() -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let interacting: Vec<&PostselectedCircuit> = all_circuits().iter().filter(|pc| is_interacting(pc)).collect();
    (0..1200)
        .map(|i| {
            let pc = interacting[rng.random_range(0..interacting.len())].clone();
            let (phi, phi_vector) = if i < 1000 {
                let v = sample::random_pure_bloch(&mut rng);
                (density_of(&v).unwrap(), Some(vector_of(&v)))
            } else {
                (sample::random_mixed_qubit(&mut rng), None)
            };
            let psi = sample::random_pure_bloch_with_z_below(&mut rng, 0.999);
            Instance { pc, phi, phi_vector, psi }
        })
        .collect()
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let (mut worst_pure, mut worst_mixed) = (0.0f64, 0.0f64);
    for inst in instances() {
        let spec = synthesize_recovery(&inst.pc).map_err(|e| e.to_string())?;
        let psi = density_of(&inst.psi).unwrap();
        let failed = output_state(&inst.pc.flipped(), &inst.phi.tensor(&psi)).map_err(|e| e.to_string())?;
        let back = output_state(&spec.circuit, &failed.state.tensor(&psi)).map_err(|e| e.to_string())?;
        match inst.phi_vector {
            Some(phi) => {
                let psi_v = vector_of(&inst.psi);
                let out = apply_vector(&spec.circuit, apply_vector(&inst.pc.flipped(), phi, psi_v), psi_v);
                let fidelity = (out[0].conj() * phi[0] + out[1].conj() * phi[1]).norm();
                worst_pure = worst_pure.max(back.state.distance(&inst.phi)).max((1.0 - fidelity).abs());
            }
            None => worst_mixed = worst_mixed.max(back.state.distance(&inst.phi)),
        }
    }
    let detail = format!("1000 pure: worst error {worst_pure:.1e}; 200 mixed: worst error {worst_mixed:.1e}");
    check(worst_pure <= 1e-9 && worst_mixed <= 1e-9, detail.clone())?;
    within(Duration::from_secs(30), start, detail)
}

fn closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for inst in instances() {
        let spec = synthesize_recovery(&inst.pc).map_err(|e| e.to_string())?;
        let psi = density_of(&inst.psi).unwrap();
        let closed = recovery_probability(&spec, &inst.pc, &inst.phi, &psi).map_err(|e| e.to_string())?;
        let failed = output_state(&inst.pc.flipped(), &inst.phi.tensor(&psi)).map_err(|e| e.to_string())?;
        let direct = outcome_probability(&spec.circuit, &failed.state.tensor(&psi)).map_err(|e| e.to_string())?;
        worst = worst.max((closed - direct).abs());
    }
    let rates: Vec<f64> =
        [0.96f64, 0.5, 0.04, 0.0].iter().map(|z2| recovery_success_rate(0.5, z2.sqrt()).unwrap()).collect();
    let expected = [0.02, 0.25, 0.48, 0.5];
    let rates_ok = rates.iter().zip(expected).all(|(r, e)| (r - e).abs() < 1e-15);
    check(
        worst <= 1e-12 && rates_ok,
        format!("1200 instances: worst |closed − direct| {worst:.1e}; Q_b = 1/2 rates {rates:?}"),
    )
}

const PUBLISHED_V: [(&str, f64); 18] = [
    ("+11", 0.5841),
    ("+12", 0.7338),
    ("+13", 0.8957),
    ("+21", 0.7252),
    ("+22", 0.8296),
    ("+23", 0.9354),
    ("+31", 0.8678),
    ("+32", 0.9205),
    ("+33", 0.9708),
    ("-11", 0.0463),
    ("-12", -0.2183),
    ("-13", -0.6260),
    ("-21", 0.2879),
    ("-22", 0.0280),
    ("-23", -0.4501),
    ("-31", 0.6055),
    ("-32", 0.4083),
    ("-33", -0.0792),
];

fn table() -> Outcome {
    let rows = distinctness_table();
    let mut mismatches = Vec::new();
    for (row, (label, v)) in rows.iter().zip(PUBLISHED_V) {
        let ours = format!("{}{}", if row.lambda03.is_negative() { '-' } else { '+' }, row.lambda03.label());
        if ours != label || (row.v * 1e4).round() != (v * 1e4).round() {
            mismatches.push(format!("{label}: {:.4}", row.v));
        }
    }
    let mut values: Vec<f64> = rows.iter().flat_map(|r| [r.v, -r.v]).collect();
    values.sort_by(f64::total_cmp);
    let margin = values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    check(
        rows.len() == 18 && mismatches.is_empty() && margin > 1e-3,
        format!("{} rows, mismatches {mismatches:?}, smallest gap among 36 signed values {margin:.4}", rows.len()),
    )
}

fn uniqueness() -> Outcome {
    let start = Instant::now();
    let reps = interacting_class_representatives();
    let mut bad = Vec::new();
    let mut counts = HashMap::new();
    for pc in &reps {
        let report = uniqueness_report(pc).map_err(|e| e.to_string())?;
        *counts.entry(report.passers).or_insert(0) += 1;
        if !report.holds() {
            bad.push(pc.to_string());
        }
    }
    let detail = format!("{} classes; passing candidates per class {counts:?}; failing {bad:?}", reps.len());
    check(reps.len() == 18 && bad.is_empty(), detail.clone())?;
    within(Duration::from_secs(600), start, detail)
}

fn protocol_costs() -> Outcome {
    let mut notes = Vec::new();
    for (d, expected) in [(10.0, 22.0), (100.0, 202.0), (1000.0, 2002.0), (10000.0, 20002.0)] {
        let config = ProtocolConfig { k: 2, d, z: 0.0, q1: 0.5, trials: 100_000, seed: 7 };
        let exact = analytic_cost(&config).map_err(|e| e.to_string())?;
        check(exact == expected, format!("analytic N_2(d={d}) = {exact}, expected {expected}"))?;
        let start = Instant::now();
        let mc = simulate(&config).map_err(|e| e.to_string())?.n_k;
        let rel = (mc - exact).abs() / exact;
        check(rel < 0.02, format!("MC N_2(d={d}) = {mc:.2}, {:.2}% off", 100.0 * rel))?;
        within(Duration::from_secs(60), start, String::new())?;
        notes.push(format!("N_2(d={d}) = {exact}, MC {mc:.1}"));
    }
    let config = ProtocolConfig { k: 3, d: 1000.0, z: 0.0, q1: 0.5, trials: 100_000, seed: 7 };
    let exact = analytic_cost(&config).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mc = simulate(&config).map_err(|e| e.to_string())?.n_k;
    within(Duration::from_secs(60), start, String::new())?;
    let rel = (mc - 1503.0).abs() / 1503.0;
    notes.push(format!("N_3 analytic {exact}, MC {mc:.1} ({:.2}% off)", 100.0 * rel));
    check((exact - 1503.0).abs() < 1e-9 && rel < 0.015, notes.join("; "))
}

fn recursion() -> Outcome {
    let flat = probability_sequence(0.5, 0.0, 64).map_err(|e| e.to_string())?;
    let seq = probability_sequence(0.5, 0.96f64.sqrt(), 21).map_err(|e| e.to_string())?;
    let fixed = (1.0 - 0.96f64.sqrt()) / 2.0;
    let gap = (seq[20] - fixed).abs();
    let decreasing = seq.windows(2).all(|w| w[1] <= w[0]);
    check(
        flat.iter().all(|&q| q == 0.5) && seq[0] == 0.5 && decreasing && gap < 1e-6,
        format!("z = 0 constant 1/2 over 64 terms; z² = 0.96 decreasing, |Q_21 − fixed point| = {gap:.1e}"),
    )
}

fn demos() -> Outcome {
    let p = ladder_step(0).map_err(|e| e.to_string())?.success.probability;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let gamma = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let v = sample::random_pure_bloch(&mut rng);
        let q = density_of(&v).unwrap();
        let failed = par_rotate(&q, gamma).map_err(|e| e.to_string())?.failure.state;
        let back = bloch_of(&par_recover(&failed, gamma).map_err(|e| e.to_string())?.state).unwrap();
        worst = worst.max(back.distance(&v));
    }
    check(
        (p - 0.75).abs() < 1e-12 && worst < 1e-9,
        format!("ladder_step(0) success = {p:.15}; 100 rotation recoveries, worst error {worst:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 group orders", group_orders),
        ("2 census", census_counts),
        ("3 canonicalization soundness", canonicalization),
        ("4 recovery round trip", round_trip),
        ("5 recovery probability closed form", closed_form),
        ("6 distinctness table", table),
        ("7 recovery uniqueness", uniqueness),
        ("8 protocol cost", protocol_costs),
        ("9 probability recursion", recursion),
        ("10 ladder and rotation demos", demos),
    ];
    let mut failed = 0;
    for (name, criterion) in criteria {
        match criterion() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  criterion {name}: {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
