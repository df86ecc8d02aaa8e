//! Reduction of postselected circuits to canonical forms.
//!
//! The measurement projector pulled back through `C` is
//! `Π = C†(I ⊗ |b⟩⟨b|)C = (σ_00 + λ_03)/2` for a signed Pauli `λ_03`. Circuits
//! sharing `λ_03` are Clifford equivalent, so `λ_03 = ±σ_jk` fixes the form:
//!
//! | `λ_03`          | form        | representative              |
//! |-----------------|-------------|-----------------------------|
//! | `±σ_0k`         | trivial     | `(G3⊗I)(I⊗G1)`              |
//! | `±σ_j0`         | swap        | `(G3⊗I)(I⊗G1)·SWAP`         |
//! | `±σ_jk`, j,k≠0  | interacting | `(G3⊗I)·CNOT·(G1⊗G2)`       |
//!
//! all postselected on 0. `G1` and `G2` come from a fixed lookup table, and
//! `G3` is the residual first-qubit gate making the reconstruction strictly
//! equivalent.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;

use crate::circuits::{strictly_equivalent, PostselectedCircuit};
use crate::clifford::{match_single_qubit, two_qubit_group, Arity, CliffordElement, Gate, Tableau};
use crate::pauli::{SignedTwoQubitPauli, SinglePauli};
use crate::{Error, Result};

/// Tolerance when snapping the residual gate to a Clifford matrix.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FormKind {
    Trivial,
    Swap,
    Interacting,
}

impl fmt::Display for FormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FormKind::Trivial => "trivial",
            FormKind::Swap => "swap",
            FormKind::Interacting => "interacting",
        })
    }
}

/// `2Π = σ_00 + λ_03`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectorDecomposition {
    pub lambda03: SignedTwoQubitPauli,
}

impl ProjectorDecomposition {
    pub fn kind(&self) -> FormKind {
        let l = self.lambda03;
        if l.first().is_identity() {
            FormKind::Trivial
        } else if l.second().is_identity() {
            FormKind::Swap
        } else {
            FormKind::Interacting
        }
    }
}

/// `λ_03 = (−1)^b · C† σ_03 C`.
pub fn projector_pauli(pc: &PostselectedCircuit) -> ProjectorDecomposition {
    let z2 = SignedTwoQubitPauli::positive(SinglePauli::I, SinglePauli::Z);
    let pulled = pc.clifford().inverse().tableau().conjugate(z2);
    let lambda03 = if pc.bit() == 1 { -pulled } else { pulled };
    ProjectorDecomposition { lambda03 }
}

/// A single-qubit Clifford `G` with `G† Z G = ±σ`, from a fixed table:
///
/// | target | word (circuit order) |
/// |--------|----------------------|
/// | `+Z`   | (none)               |
/// | `−Z`   | `X`                  |
/// | `+X`   | `H`                  |
/// | `−X`   | `H X`                |
/// | `+Y`   | `P Z H`              |
/// | `−Y`   | `P H`                |
pub fn z_preimage(negative: bool, pauli: SinglePauli) -> CliffordElement {
    use Gate::*;
    let word: &[Gate] = match (pauli, negative) {
        (SinglePauli::Z, false) => &[],
        (SinglePauli::Z, true) => &[X1],
        (SinglePauli::X, false) => &[H1],
        (SinglePauli::X, true) => &[H1, X1],
        (SinglePauli::Y, false) => &[P1, Z1, H1],
        (SinglePauli::Y, true) => &[P1, H1],
        (SinglePauli::I, _) => panic!("no Clifford maps Z to the identity"),
    };
    CliffordElement::from_word_arity1(word).expect("single-qubit word")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalForm {
    pub kind: FormKind,
    pub lambda03: SignedTwoQubitPauli,
    pub g1: CliffordElement,
    /// Present for the interacting form only.
    pub g2: Option<CliffordElement>,
    pub g3: CliffordElement,
    pub outcome: u8,
}

impl CanonicalForm {
    /// The canonical circuit without the residual gate `G3`.
    pub fn representative(&self) -> Result<PostselectedCircuit> {
        let clifford = representative_clifford(self.kind, &self.g1, self.g2.as_ref())?;
        PostselectedCircuit::new(clifford, self.outcome)
    }

    /// `((G3⊗I)·R, outcome)` where `R` is the representative Clifford.
    pub fn reconstruct(&self) -> Result<PostselectedCircuit> {
        let clifford = representative_clifford(self.kind, &self.g1, self.g2.as_ref())?.then(&self.g3.lift(0)?)?;
        PostselectedCircuit::new(clifford, self.outcome)
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} λ03={} G1=[{}]", self.kind, self.lambda03, self.g1)?;
        if let Some(g2) = &self.g2 {
            write!(f, " G2=[{g2}]")?;
        }
        write!(f, " G3=[{}] b={}", self.g3, self.outcome)
    }
}

fn representative_clifford(
    kind: FormKind,
    g1: &CliffordElement,
    g2: Option<&CliffordElement>,
) -> Result<CliffordElement> {
    match kind {
        FormKind::Trivial => g1.lift(1),
        FormKind::Swap => CliffordElement::gate(Arity::Two, Gate::Swap)?.then(&g1.lift(1)?),
        FormKind::Interacting => {
            let g2 = g2.ok_or_else(|| Error::InvalidState("interacting form needs G2".into()))?;
            CliffordElement::tensor(g1, g2)?.then(&CliffordElement::gate(Arity::Two, Gate::Cnot)?)
        }
    }
}

/// The Kraus residual `G3` with `K_pc = e^{iα} G3 K_rep`, snapped to a Clifford.
fn residual(pc: &PostselectedCircuit, rep: &PostselectedCircuit) -> Result<CliffordElement> {
    let m = pc.kraus() * rep.kraus().adjoint();
    let (g, _) = match_single_qubit(&m, RESIDUAL_TOLERANCE)?;
    Ok(g.clone())
}

pub fn canonicalize(pc: &PostselectedCircuit) -> Result<CanonicalForm> {
    let projector = projector_pauli(pc);
    let lambda = projector.lambda03;
    let kind = projector.kind();
    let (g1, g2) = match kind {
        FormKind::Trivial => (z_preimage(lambda.is_negative(), lambda.second()), None),
        FormKind::Swap => (z_preimage(lambda.is_negative(), lambda.first()), None),
        FormKind::Interacting => {
            (z_preimage(lambda.is_negative(), lambda.first()), Some(z_preimage(false, lambda.second())))
        }
    };
    let rep = PostselectedCircuit::new(representative_clifford(kind, &g1, g2.as_ref())?, 0)?;
    let g3 = residual(pc, &rep)?;
    Ok(CanonicalForm { kind, lambda03: lambda, g1, g2, g3, outcome: 0 })
}

/// Moves the form to the other outcome by folding an `X` into the gate
/// before the measurement: `G1 ↦ X·G1` for trivial and swap forms, and
/// `G2 ↦ X·G2` for the interacting form. `G3` is unchanged.
///
/// The result reconstructs the other branch of the reconstructed circuit.
/// For the original `(C, 1 − b)` it is Clifford equivalent but not
/// necessarily strictly equivalent.
pub fn flip_outcome(form: &CanonicalForm) -> CanonicalForm {
    let x = CliffordElement::gate(Arity::One, Gate::X1).expect("single-qubit gate");
    let mut out = form.clone();
    match form.kind {
        FormKind::Trivial | FormKind::Swap => out.g1 = form.g1.then(&x).expect("same arity"),
        FormKind::Interacting => {
            let g2 = form.g2.as_ref().expect("interacting form has G2");
            out.g2 = Some(g2.then(&x).expect("same arity"));
        }
    }
    out.lambda03 = -form.lambda03;
    out
}

pub fn is_interacting(pc: &PostselectedCircuit) -> bool {
    projector_pauli(pc).kind() == FormKind::Interacting
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Census {
    pub projector_classes: usize,
    pub interacting_classes: usize,
    pub trivial_classes: usize,
    pub swap_classes: usize,
    /// Strict-equivalence classes among interacting circuits.
    pub strict_interacting_classes: usize,
}

impl Census {
    /// `(class_kind, count)` rows in report order.
    pub fn rows(&self) -> [(&'static str, usize); 5] {
        [
            ("interacting_classes", self.interacting_classes),
            ("trivial_classes", self.trivial_classes),
            ("swap_classes", self.swap_classes),
            ("strict_interacting_classes", self.strict_interacting_classes),
            ("projector_classes", self.projector_classes),
        ]
    }
}

/// Canonicalizes all 11520 × 2 postselected circuits and counts classes.
///
/// Strict classes are keyed by `(λ_03, G3)`: the representative for each
/// `λ_03` is fixed, and `G3` is unique up to phase because the Kraus
/// operator has full row rank.
pub fn census() -> Result<Census> {
    let forms: Vec<CanonicalForm> = all_circuits().par_iter().map(canonicalize).collect::<Result<_>>()?;
    let mut kinds: HashMap<SignedTwoQubitPauli, FormKind> = HashMap::new();
    let mut strict: HashSet<(SignedTwoQubitPauli, Tableau)> = HashSet::new();
    for form in &forms {
        kinds.insert(form.lambda03, form.kind);
        if form.kind == FormKind::Interacting {
            strict.insert((form.lambda03, *form.g3.tableau()));
        }
    }
    let count = |k: FormKind| kinds.values().filter(|&&v| v == k).count();
    Ok(Census {
        projector_classes: kinds.len(),
        interacting_classes: count(FormKind::Interacting),
        trivial_classes: count(FormKind::Trivial),
        swap_classes: count(FormKind::Swap),
        strict_interacting_classes: strict.len(),
    })
}

/// Every `(C, b)` with `C` in the two-qubit Clifford group, ordered by
/// group ordinal then bit. Built once; Kraus operators are cached inside.
pub fn all_circuits() -> &'static [PostselectedCircuit] {
    static CIRCUITS: OnceLock<Vec<PostselectedCircuit>> = OnceLock::new();
    CIRCUITS.get_or_init(|| {
        two_qubit_group()
            .elements()
            .par_iter()
            .flat_map_iter(|c| (0..2).map(move |b| PostselectedCircuit::new(c.clone(), b).expect("arity-2 element")))
            .collect()
    })
}

/// The first circuit, in group order with `b = 0`, of each of the 18
/// interacting projector classes, sorted by `λ_03`.
pub fn interacting_class_representatives() -> Vec<PostselectedCircuit> {
    let mut seen: HashMap<SignedTwoQubitPauli, PostselectedCircuit> = HashMap::new();
    for c in two_qubit_group().iter() {
        let pc = PostselectedCircuit::new(c.clone(), 0).expect("arity-2 element");
        let projector = projector_pauli(&pc);
        if projector.kind() == FormKind::Interacting {
            seen.entry(projector.lambda03).or_insert(pc);
        }
    }
    let mut reps: Vec<_> = seen.into_iter().collect();
    reps.sort_by_key(|(l, _)| *l);
    reps.into_iter().map(|(_, pc)| pc).collect()
}

/// Checks the reconstruction of a canonical form against the circuit.
pub fn reconstruction_holds(pc: &PostselectedCircuit, form: &CanonicalForm) -> bool {
    form.reconstruct().map(|r| strictly_equivalent(&r, pc)).unwrap_or(false)
}
