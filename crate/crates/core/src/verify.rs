//! Self-checks over the whole library, one suite per property.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::applications::{ladder_step, par_recover, par_rotate};
use crate::circuits::PostselectedCircuit;
use crate::classify::{
    all_circuits, canonicalize, census, interacting_class_representatives, is_interacting, reconstruction_holds,
};
use crate::clifford::{enumerate, Arity};
use crate::pauli::{bloch_of, density_of, SignedTwoQubitPauli};
use crate::protocol::{analytic_cost, probability_sequence, simulate, ProtocolConfig};
use crate::recovery::{
    distinctness_margin, distinctness_table, recovery_probability, recovery_probability_direct, recovery_success_rate,
    round_trip, synthesize_recovery, uniqueness_report,
};
use crate::sample;
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

/// Reference `v` values, rounded to 4 places, in [`distinctness_table`] order.
pub const REFERENCE_V: [f64; 18] = [
    0.5841, 0.7338, 0.8957, 0.7252, 0.8296, 0.9354, 0.8678, 0.9205, 0.9708, //
    0.0463, -0.2183, -0.6260, 0.2879, 0.0280, -0.4501, 0.6055, 0.4083, -0.0792,
];

type Suite = fn() -> Result<(bool, String)>;

pub const SUITES: [(&str, Suite); 10] = [
    ("group_orders", group_orders),
    ("census", census_counts),
    ("canonicalization", canonicalization),
    ("round_trip", recovery_round_trip),
    ("recovery_probability", closed_form_probability),
    ("distinctness_table", table),
    ("uniqueness", uniqueness),
    ("protocol_cost", protocol_cost),
    ("probability_recursion", recursion),
    ("demos", demos),
];

pub fn run_all() -> Vec<SuiteOutcome> {
    SUITES.iter().map(|(name, suite)| run(name, *suite)).collect()
}

pub fn run(name: &'static str, suite: Suite) -> SuiteOutcome {
    let start = Instant::now();
    let (passed, detail) = suite().unwrap_or_else(|e| (false, format!("error: {e}")));
    SuiteOutcome { name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn group_orders() -> Result<(bool, String)> {
    let (one, two) = (enumerate(Arity::One).len(), enumerate(Arity::Two).len());
    Ok((one == 24 && two == 11520, format!("|C1| = {one}, |C2| = {two}")))
}

fn census_counts() -> Result<(bool, String)> {
    let c = census()?;
    let ok =
        (c.projector_classes, c.interacting_classes, c.trivial_classes, c.swap_classes, c.strict_interacting_classes)
            == (30, 18, 6, 6, 432);
    Ok((
        ok,
        format!(
            "{} projector classes ({} interacting, {} trivial, {} swap), {} strict interacting classes",
            c.projector_classes, c.interacting_classes, c.trivial_classes, c.swap_classes, c.strict_interacting_classes
        ),
    ))
}

fn canonicalization() -> Result<(bool, String)> {
    let circuits = all_circuits();
    let failures =
        circuits.par_iter().filter(|pc| !canonicalize(pc).is_ok_and(|form| reconstruction_holds(pc, &form))).count();
    Ok((failures == 0, format!("{} of {} reconstructions hold", circuits.len() - failures, circuits.len())))
}

fn random_interacting(rng: &mut ChaCha8Rng) -> &'static PostselectedCircuit {
    let circuits = all_circuits();
    loop {
        let pc = &circuits[rng.random_range(0..circuits.len())];
        if is_interacting(pc) {
            return pc;
        }
    }
}

/// Worst round-trip error and worst closed-form probability error over
/// `pure` pure-state and `mixed` mixed-state instances.
fn round_trip_errors(seed: u64, pure: usize, mixed: usize) -> Result<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut state_err, mut prob_err) = (0.0f64, 0.0f64);
    for i in 0..pure + mixed {
        let pc = random_interacting(&mut rng);
        let spec = synthesize_recovery(pc)?;
        let phi = if i < pure {
            density_of(&sample::random_pure_bloch(&mut rng))?
        } else {
            sample::random_mixed_qubit(&mut rng)
        };
        let psi = density_of(&sample::random_pure_bloch_with_z_below(&mut rng, 0.999))?;
        let trip = round_trip(&spec, pc, &phi, &psi)?;
        state_err = state_err.max(trip.recovered.distance(&phi));
        let closed = recovery_probability(&spec, pc, &phi, &psi)?;
        let direct = recovery_probability_direct(&spec, pc, &phi, &psi)?;
        prob_err = prob_err.max((closed - direct).abs());
    }
    Ok((state_err, prob_err))
}

fn recovery_round_trip() -> Result<(bool, String)> {
    let (err, _) = round_trip_errors(2024, 1000, 200)?;
    Ok((err <= 1e-9, format!("1200 instances, worst state error {err:.2e}")))
}

fn closed_form_probability() -> Result<(bool, String)> {
    let (_, err) = round_trip_errors(2024, 1000, 200)?;
    let rates: Vec<f64> =
        [0.96f64, 0.5, 0.04, 0.0].iter().map(|z2| recovery_success_rate(0.5, z2.sqrt())).collect::<Result<_>>()?;
    let expected = [0.02, 0.25, 0.48, 0.5];
    let rates_ok = rates.iter().zip(expected).all(|(r, e)| (r - e).abs() < 1e-15);
    Ok((err <= 1e-12 && rates_ok, format!("worst closed-form error {err:.2e}, Q_b = 1/2 rates {rates:?}")))
}

fn table() -> Result<(bool, String)> {
    let rows = distinctness_table();
    let worst = rows.iter().zip(REFERENCE_V).map(|(r, v)| (r.v - v).abs()).fold(0.0, f64::max);
    let margin = distinctness_margin(&rows);
    Ok((worst < 5e-5 && margin > 1e-3, format!("worst deviation {worst:.1e}, smallest gap between ±v {margin:.4}")))
}

fn uniqueness() -> Result<(bool, String)> {
    let reps = interacting_class_representatives();
    let mut failing: Vec<SignedTwoQubitPauli> = Vec::new();
    let mut passers = Vec::new();
    for pc in &reps {
        let report = uniqueness_report(pc)?;
        passers.push(report.passers);
        if !report.holds() {
            failing.push(crate::classify::projector_pauli(pc).lambda03);
        }
    }
    let ok = reps.len() == 18 && failing.is_empty();
    Ok((ok, format!("{} classes, passing candidates per class {:?}, failing {:?}", reps.len(), passers, failing)))
}

fn protocol_cost() -> Result<(bool, String)> {
    let mut ok = true;
    let mut notes = Vec::new();
    for d in [10.0, 100.0, 1000.0, 10000.0] {
        let exact = analytic_cost(&ProtocolConfig { k: 2, d, ..Default::default() })?;
        ok &= exact == 2.0 * (d + 1.0);
        notes.push(format!("N_2(d={d}) = {exact}"));
    }
    let k2 = ProtocolConfig { k: 2, d: 10.0, trials: 100_000, seed: 7, ..Default::default() };
    let mc2 = simulate(&k2)?.n_k;
    let rel2 = (mc2 - 22.0).abs() / 22.0;
    ok &= rel2 < 0.02;
    let k3 = ProtocolConfig { k: 3, d: 1000.0, z: 0.0, q1: 0.5, trials: 100_000, seed: 7 };
    let exact3 = analytic_cost(&k3)?;
    let mc3 = simulate(&k3)?.n_k;
    let rel3 = (mc3 - exact3).abs() / exact3;
    ok &= (exact3 - 1503.0).abs() < 1e-9 && rel3 < 0.015;
    notes.push(format!("MC k=2 d=10: {mc2:.2}; k=3 d=1000: {mc3:.1} vs {exact3}"));
    Ok((ok, notes.join("; ")))
}

fn recursion() -> Result<(bool, String)> {
    let flat = probability_sequence(0.5, 0.0, 50)?;
    let seq = probability_sequence(0.5, 0.96f64.sqrt(), 21)?;
    let fixed = (1.0 - 0.96f64.sqrt()) / 2.0;
    let gap = (seq[20] - fixed).abs();
    let ok = flat.iter().all(|&q| q == 0.5) && seq[0] == 0.5 && gap < 1e-6;
    Ok((
        ok,
        format!(
            "z = 0 constant: {}; z² = 0.96 gap to fixed point at i = 20: {gap:.1e}",
            flat.iter().all(|&q| q == 0.5)
        ),
    ))
}

fn demos() -> Result<(bool, String)> {
    let p = ladder_step(0)?.success.probability;
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let gamma = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let q = density_of(&sample::random_pure_bloch(&mut rng))?;
        let failed = par_rotate(&q, gamma)?.failure.state;
        let back = par_recover(&failed, gamma)?.state;
        worst = worst.max(bloch_of(&back)?.distance(&bloch_of(&q)?));
    }
    Ok((
        (p - 0.75).abs() < 1e-12 && worst < 1e-9,
        format!("ladder_step(0) success {p:.15}; worst rotation recovery error {worst:.1e}"),
    ))
}
