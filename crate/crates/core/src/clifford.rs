//! One- and two-qubit Clifford elements modulo global phase.
//!
//! An element is identified by its tableau: the signed images of the
//! generator Paulis `X⊗I, Z⊗I, I⊗X, I⊗Z` under conjugation `p ↦ C p C†`.
//! Single-qubit elements act on the first wire and fix `I⊗X, I⊗Z`, so both
//! arities share one representation. Each element also carries a gate word
//! (in circuit order, first gate applied first) used to build its matrix.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use nalgebra::DMatrix;

use crate::pauli::{Phase, PhasedPauliProduct, SignedTwoQubitPauli, SinglePauli};
use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arity {
    One = 1,
    Two = 2,
}

impl Arity {
    pub fn qubits(self) -> u8 {
        self as u8
    }

    pub fn dim(self) -> usize {
        1 << (self as usize)
    }

    pub fn from_qubits(n: u8) -> Option<Arity> {
        match n {
            1 => Some(Arity::One),
            2 => Some(Arity::Two),
            _ => None,
        }
    }
}

/// Gate tokens. Subscripts name the wire; `Cnot` has control 1, target 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H1,
    H2,
    P1,
    P2,
    X1,
    X2,
    Y1,
    Y2,
    Z1,
    Z2,
    Cnot,
    Swap,
}

const SINGLE_GENERATORS: [Gate; 2] = [Gate::H1, Gate::P1];
const TWO_GENERATORS: [Gate; 5] = [Gate::H1, Gate::P1, Gate::H2, Gate::P2, Gate::Cnot];

#[derive(Clone, Copy)]
enum LocalGate {
    H,
    P,
    X,
    Y,
    Z,
}

impl LocalGate {
    fn matrix(self) -> DMatrix<C64> {
        let o = C64::new(0.0, 0.0);
        let l = C64::new(1.0, 0.0);
        let i = C64::new(0.0, 1.0);
        let r = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let entries = match self {
            LocalGate::H => [r, r, r, -r],
            LocalGate::P => [l, o, o, i],
            LocalGate::X => [o, l, l, o],
            LocalGate::Y => [o, -i, i, o],
            LocalGate::Z => [l, o, o, -l],
        };
        DMatrix::from_row_slice(2, 2, &entries)
    }

    /// Images of X and Z under conjugation.
    fn images(self) -> [(bool, SinglePauli); 2] {
        use SinglePauli::*;
        match self {
            LocalGate::H => [(false, Z), (false, X)],
            LocalGate::P => [(false, Y), (false, Z)],
            LocalGate::X => [(false, X), (true, Z)],
            LocalGate::Y => [(true, X), (true, Z)],
            LocalGate::Z => [(true, X), (false, Z)],
        }
    }
}

impl Gate {
    pub const ALL: [Gate; 12] = [
        Gate::H1,
        Gate::H2,
        Gate::P1,
        Gate::P2,
        Gate::X1,
        Gate::X2,
        Gate::Y1,
        Gate::Y2,
        Gate::Z1,
        Gate::Z2,
        Gate::Cnot,
        Gate::Swap,
    ];

    fn local(self) -> Option<(LocalGate, usize)> {
        Some(match self {
            Gate::H1 => (LocalGate::H, 0),
            Gate::H2 => (LocalGate::H, 1),
            Gate::P1 => (LocalGate::P, 0),
            Gate::P2 => (LocalGate::P, 1),
            Gate::X1 => (LocalGate::X, 0),
            Gate::X2 => (LocalGate::X, 1),
            Gate::Y1 => (LocalGate::Y, 0),
            Gate::Y2 => (LocalGate::Y, 1),
            Gate::Z1 => (LocalGate::Z, 0),
            Gate::Z2 => (LocalGate::Z, 1),
            Gate::Cnot | Gate::Swap => return None,
        })
    }

    /// Smallest arity the gate fits in.
    pub fn min_arity(self) -> Arity {
        match self.local() {
            Some((_, 0)) => Arity::One,
            _ => Arity::Two,
        }
    }

    /// The same single-qubit gate moved to wire 2.
    pub fn on_second_wire(self) -> Gate {
        match self {
            Gate::H1 => Gate::H2,
            Gate::P1 => Gate::P2,
            Gate::X1 => Gate::X2,
            Gate::Y1 => Gate::Y2,
            Gate::Z1 => Gate::Z2,
            other => other,
        }
    }

    /// Inverse as a word in circuit order.
    pub fn inverse_word(self) -> Vec<Gate> {
        match self {
            // P† = P³ = Z·P
            Gate::P1 => vec![Gate::P1, Gate::Z1],
            Gate::P2 => vec![Gate::P2, Gate::Z2],
            g => vec![g],
        }
    }

    pub fn matrix(self, arity: Arity) -> Result<DMatrix<C64>> {
        if self.min_arity() > arity {
            return Err(Error::ArityMismatch { expected: self.min_arity().qubits(), found: arity.qubits() });
        }
        let c = |re: f64| C64::new(re, 0.0);
        Ok(match (self.local(), arity) {
            (Some((g, _)), Arity::One) => g.matrix(),
            (Some((g, 0)), Arity::Two) => g.matrix().kronecker(&DMatrix::identity(2, 2)),
            (Some((g, _)), Arity::Two) => DMatrix::<C64>::identity(2, 2).kronecker(&g.matrix()),
            (None, _) => {
                let mut m = DMatrix::<C64>::zeros(4, 4);
                let perm: [usize; 4] = if self == Gate::Cnot { [0, 1, 3, 2] } else { [0, 2, 1, 3] };
                for (col, &row) in perm.iter().enumerate() {
                    m[(row, col)] = c(1.0);
                }
                m
            }
        })
    }

    fn tableau(self) -> Tableau {
        use SinglePauli::*;
        let p = |neg: bool, j, k| SignedTwoQubitPauli::new(neg, j, k);
        match self {
            Gate::Cnot => Tableau([p(false, X, X), p(false, Z, I), p(false, I, X), p(false, Z, Z)]),
            Gate::Swap => Tableau([p(false, I, X), p(false, I, Z), p(false, X, I), p(false, Z, I)]),
            _ => {
                let (g, wire) = self.local().expect("local gate");
                let [(nx, ix), (nz, iz)] = g.images();
                let mut t = Tableau::IDENTITY;
                if wire == 0 {
                    t.0[0] = p(nx, ix, I);
                    t.0[1] = p(nz, iz, I);
                } else {
                    t.0[2] = p(nx, I, ix);
                    t.0[3] = p(nz, I, iz);
                }
                t
            }
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Gate::H1 => "H1",
            Gate::H2 => "H2",
            Gate::P1 => "P1",
            Gate::P2 => "P2",
            Gate::X1 => "X1",
            Gate::X2 => "X2",
            Gate::Y1 => "Y1",
            Gate::Y2 => "Y2",
            Gate::Z1 => "Z1",
            Gate::Z2 => "Z2",
            Gate::Cnot => "CNOT",
            Gate::Swap => "SWAP",
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Gate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Gate> {
        Gate::ALL
            .into_iter()
            .find(|g| g.token().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownGate(s.to_string()))
    }
}

/// Parses a gate word, composed left to right (first token applied first).
///
/// Tokens may be separated by whitespace, `,`, `;`, `*` or `·`. The tokens
/// `I`, `II` and `I⊗I` stand for the identity and contribute no gates.
pub fn parse_word(text: &str) -> Result<Vec<Gate>> {
    text.split(|c: char| c.is_whitespace() || matches!(c, ',' | ';' | '*' | '·'))
        .filter(|t| !t.is_empty())
        .filter(|t| !matches!(t.to_ascii_uppercase().as_str(), "I" | "II" | "ID" | "I⊗I"))
        .map(str::parse)
        .collect()
}

pub fn format_word(word: &[Gate]) -> String {
    if word.is_empty() {
        return "I".to_string();
    }
    word.iter().map(|g| g.token()).collect::<Vec<_>>().join(" ")
}

/// Conjugation images of `X⊗I, Z⊗I, I⊗X, I⊗Z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau(pub [SignedTwoQubitPauli; 4]);

impl Tableau {
    pub const IDENTITY: Tableau = Tableau([
        SignedTwoQubitPauli::positive(SinglePauli::X, SinglePauli::I),
        SignedTwoQubitPauli::positive(SinglePauli::Z, SinglePauli::I),
        SignedTwoQubitPauli::positive(SinglePauli::I, SinglePauli::X),
        SignedTwoQubitPauli::positive(SinglePauli::I, SinglePauli::Z),
    ]);

    pub fn generators() -> [SignedTwoQubitPauli; 4] {
        Self::IDENTITY.0
    }

    /// `C p C†` with exact sign tracking.
    pub fn conjugate(&self, p: SignedTwoQubitPauli) -> SignedTwoQubitPauli {
        // σ_j ⊗ σ_k = i^{#Y} (X⊗I)^x1 (Z⊗I)^z1 (I⊗X)^x2 (I⊗Z)^z2, with Y = iXZ.
        let sign = if p.is_negative() { Phase::MINUS_ONE } else { Phase::ONE };
        let mut result = PhasedPauliProduct::new(sign, SinglePauli::I, SinglePauli::I);
        for (wire, factor) in [p.first(), p.second()].into_iter().enumerate() {
            let (has_x, has_z) = match factor {
                SinglePauli::I => (false, false),
                SinglePauli::X => (true, false),
                SinglePauli::Y => (true, true),
                SinglePauli::Z => (false, true),
            };
            if factor == SinglePauli::Y {
                result = result * PhasedPauliProduct::new(Phase::I, SinglePauli::I, SinglePauli::I);
            }
            if has_x {
                result = result * self.0[2 * wire].to_phased();
            }
            if has_z {
                result = result * self.0[2 * wire + 1].to_phased();
            }
        }
        result.to_signed().expect("conjugation of a Hermitian Pauli is Hermitian")
    }

    /// Tableau of "first `self`, then `next`".
    pub fn then(&self, next: &Tableau) -> Tableau {
        Tableau(self.0.map(|img| next.conjugate(img)))
    }

    pub fn inverse(&self) -> Tableau {
        // Every product of generators maps to the matching product of images;
        // invert by finding, for each generator, the subset of images whose
        // product is proportional to it.
        let gens = Self::generators();
        let mut out = Tableau::IDENTITY;
        for (slot, target) in gens.iter().enumerate() {
            let found = (1u8..16).find_map(|mask| {
                let mut img = PhasedPauliProduct::IDENTITY;
                let mut pre = PhasedPauliProduct::IDENTITY;
                for (bit, (image, gen)) in self.0.iter().zip(gens.iter()).enumerate() {
                    if mask & (1 << bit) != 0 {
                        img = img * image.to_phased();
                        pre = pre * gen.to_phased();
                    }
                }
                if img.factors == [target.first(), target.second()] {
                    // C(pre) = img = ω·target, so C⁻¹(target) = ω⁻¹·pre.
                    let mut res = pre;
                    res.phase = res.phase * img.phase.inverse();
                    res.to_signed()
                } else {
                    None
                }
            });
            out.0[slot] = found.expect("tableau of a Clifford element is invertible");
        }
        out
    }

    /// Generators whose images commute or anticommute exactly as the generators do.
    pub fn is_symplectic(&self) -> bool {
        let gens = Self::generators();
        (0..4).all(|a| (0..4).all(|b| gens[a].commutes_with(&gens[b]) == self.0[a].commutes_with(&self.0[b])))
            && self.0.iter().all(|p| !p.is_identity())
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// A Clifford group element modulo global phase.
///
/// Equality and hashing use the arity and tableau only; the word is one of
/// many that realize the element.
#[derive(Clone, Debug)]
pub struct CliffordElement {
    arity: Arity,
    tableau: Tableau,
    word: Vec<Gate>,
}

impl PartialEq for CliffordElement {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.tableau == other.tableau
    }
}

impl Eq for CliffordElement {}

impl std::hash::Hash for CliffordElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.arity.hash(state);
        self.tableau.hash(state);
    }
}

impl CliffordElement {
    pub fn identity(arity: Arity) -> Self {
        CliffordElement { arity, tableau: Tableau::IDENTITY, word: Vec::new() }
    }

    pub fn from_word(arity: Arity, word: &[Gate]) -> Result<Self> {
        let mut tableau = Tableau::IDENTITY;
        for &g in word {
            if g.min_arity() > arity {
                return Err(Error::ArityMismatch { expected: g.min_arity().qubits(), found: arity.qubits() });
            }
            tableau = tableau.then(&g.tableau());
        }
        Ok(CliffordElement { arity, tableau, word: word.to_vec() })
    }

    pub fn from_word_arity1(word: &[Gate]) -> Result<Self> {
        Self::from_word(Arity::One, word)
    }

    pub fn from_word_arity2(word: &[Gate]) -> Result<Self> {
        Self::from_word(Arity::Two, word)
    }

    pub fn gate(arity: Arity, gate: Gate) -> Result<Self> {
        Self::from_word(arity, &[gate])
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn word(&self) -> &[Gate] {
        &self.word
    }

    pub fn word_string(&self) -> String {
        format_word(&self.word)
    }

    pub fn is_identity(&self) -> bool {
        self.tableau == Tableau::IDENTITY
    }

    /// `C p C†`. Single-qubit elements accept only Paulis trivial on wire 2.
    pub fn conjugate(&self, p: SignedTwoQubitPauli) -> Result<SignedTwoQubitPauli> {
        if self.arity == Arity::One && !p.second().is_identity() {
            return Err(Error::ArityMismatch { expected: 2, found: 1 });
        }
        Ok(self.tableau.conjugate(p))
    }

    /// Image of a single-qubit Pauli under a single-qubit element.
    pub fn conjugate_single(&self, p: SinglePauli) -> Result<(bool, SinglePauli)> {
        if self.arity != Arity::One {
            return Err(Error::ArityMismatch { expected: 1, found: self.arity.qubits() });
        }
        let img = self.tableau.conjugate(SignedTwoQubitPauli::positive(p, SinglePauli::I));
        Ok((img.is_negative(), img.first()))
    }

    /// `self` followed by `next`: the unitary `next · self`.
    pub fn then(&self, next: &CliffordElement) -> Result<CliffordElement> {
        compose(self, next)
    }

    pub fn inverse(&self) -> CliffordElement {
        invert(self)
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        matrix_of(self)
    }

    /// Embeds a single-qubit element on wire 1 (`wire = 0`) or wire 2 (`wire = 1`).
    pub fn lift(&self, wire: usize) -> Result<CliffordElement> {
        if self.arity != Arity::One {
            return Err(Error::ArityMismatch { expected: 1, found: self.arity.qubits() });
        }
        if wire == 0 {
            return Ok(CliffordElement { arity: Arity::Two, ..self.clone() });
        }
        let t = self.tableau.0;
        let tableau = Tableau([t[2].swapped(), t[3].swapped(), t[0].swapped(), t[1].swapped()]);
        let word = self.word.iter().map(|g| g.on_second_wire()).collect();
        Ok(CliffordElement { arity: Arity::Two, tableau, word })
    }

    /// `g1 ⊗ g2` for single-qubit elements.
    pub fn tensor(g1: &CliffordElement, g2: &CliffordElement) -> Result<CliffordElement> {
        g1.lift(0)?.then(&g2.lift(1)?)
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.word_string())
    }
}

/// `a` followed by `b`: tableau composition, word concatenation.
pub fn compose(a: &CliffordElement, b: &CliffordElement) -> Result<CliffordElement> {
    if a.arity != b.arity {
        return Err(Error::ArityMismatch { expected: a.arity.qubits(), found: b.arity.qubits() });
    }
    let mut word = a.word.clone();
    word.extend_from_slice(&b.word);
    Ok(CliffordElement { arity: a.arity, tableau: a.tableau.then(&b.tableau), word })
}

pub fn invert(c: &CliffordElement) -> CliffordElement {
    let word = c.word.iter().rev().flat_map(|g| g.inverse_word()).collect();
    CliffordElement { arity: c.arity, tableau: c.tableau.inverse(), word }
}

/// Product of the generator matrices along the word.
pub fn matrix_of(c: &CliffordElement) -> DMatrix<C64> {
    let dim = c.arity.dim();
    c.word
        .iter()
        .fold(DMatrix::identity(dim, dim), |acc, g| g.matrix(c.arity).expect("word validated at construction") * acc)
}

/// Phase-insensitive distance between two unitaries of the same size.
pub fn distance_up_to_phase(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    let overlap = (b.adjoint() * a).trace();
    if overlap.norm() < 1e-300 {
        return f64::INFINITY;
    }
    let phase = overlap / overlap.norm();
    (a - b * phase).camax()
}

/// The Clifford group of one arity, in breadth-first order from the identity.
#[derive(Clone, Debug)]
pub struct CliffordGroupTable {
    arity: Arity,
    elements: Vec<CliffordElement>,
    index: HashMap<Tableau, usize>,
}

impl CliffordGroupTable {
    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CliffordElement] {
        &self.elements
    }

    pub fn iter(&self) -> std::slice::Iter<'_, CliffordElement> {
        self.elements.iter()
    }

    pub fn get(&self, ordinal: usize) -> Option<&CliffordElement> {
        self.elements.get(ordinal)
    }

    pub fn ordinal_of(&self, tableau: &Tableau) -> Option<usize> {
        self.index.get(tableau).copied()
    }

    /// The stored element with the same tableau, carrying its shortest word.
    pub fn canonical(&self, c: &CliffordElement) -> Option<&CliffordElement> {
        if c.arity != self.arity {
            return None;
        }
        self.ordinal_of(&c.tableau).map(|i| &self.elements[i])
    }

    /// Deterministic listing, one `ordinal,word,tableau` line per element.
    pub fn listing(&self) -> String {
        let mut out = String::from("ordinal,word,tableau\n");
        for (i, c) in self.elements.iter().enumerate() {
            out.push_str(&format!("{i},{},{}\n", c.word_string(), c.tableau));
        }
        out
    }
}

/// Breadth-first closure from the identity. Generators are tried in the
/// order `H1, P1, H2, P2, CNOT` (or `H1, P1` for one qubit).
pub fn enumerate(arity: Arity) -> CliffordGroupTable {
    let generators: &[Gate] = match arity {
        Arity::One => &SINGLE_GENERATORS,
        Arity::Two => &TWO_GENERATORS,
    };
    let gate_tableaux: Vec<Tableau> = generators.iter().map(|g| g.tableau()).collect();
    let mut elements = vec![CliffordElement::identity(arity)];
    let mut index = HashMap::from([(Tableau::IDENTITY, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (g, gt) in generators.iter().zip(&gate_tableaux) {
            let tableau = elements[i].tableau.then(gt);
            if index.contains_key(&tableau) {
                continue;
            }
            let mut word = elements[i].word.clone();
            word.push(*g);
            index.insert(tableau, elements.len());
            queue.push_back(elements.len());
            elements.push(CliffordElement { arity, tableau, word });
        }
    }
    CliffordGroupTable { arity, elements, index }
}

pub fn single_qubit_group() -> &'static CliffordGroupTable {
    static TABLE: OnceLock<CliffordGroupTable> = OnceLock::new();
    TABLE.get_or_init(|| enumerate(Arity::One))
}

pub fn two_qubit_group() -> &'static CliffordGroupTable {
    static TABLE: OnceLock<CliffordGroupTable> = OnceLock::new();
    TABLE.get_or_init(|| enumerate(Arity::Two))
}

fn single_qubit_matrices() -> &'static [DMatrix<C64>] {
    static MATRICES: OnceLock<Vec<DMatrix<C64>>> = OnceLock::new();
    MATRICES.get_or_init(|| single_qubit_group().iter().map(matrix_of).collect())
}

/// Snaps a 2×2 matrix to the nearest single-qubit Clifford up to phase.
///
/// Returns the element and the residual distance, or an error if nothing
/// lies within `tolerance`.
pub fn match_single_qubit(m: &DMatrix<C64>, tolerance: f64) -> Result<(&'static CliffordElement, f64)> {
    if m.shape() != (2, 2) {
        return Err(Error::Dimension { expected: 2, rows: m.nrows(), cols: m.ncols() });
    }
    let (best, dist) = single_qubit_matrices()
        .iter()
        .enumerate()
        .map(|(i, u)| (i, distance_up_to_phase(m, u)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("group is non-empty");
    if dist <= tolerance {
        Ok((&single_qubit_group().elements[best], dist))
    } else {
        Err(Error::NoCliffordMatch(dist))
    }
}
