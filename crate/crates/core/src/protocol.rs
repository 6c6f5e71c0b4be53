//! The two cluster-channel teleportation schemes.
//!
//! Alice holds particles 1, 2 (the unknown state) and 3, 6 (channel); Bob
//! holds 4, 5. Alice measures (1, 3) and then (2, 6) in the Bell basis, Bob
//! applies the feed-forward correction on (4, 5). Scheme 1 teleports
//! `α|00⟩ + δ|11⟩` with Pauli corrections only; scheme 2 teleports an
//! arbitrary two-qubit state and needs a CZ(4, 5) before the Paulis.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gates::{apply_cz, apply_pauli, Pauli};
use crate::measurement::{project_bell, trial_rng, BellOutcome};
use crate::statevec::{qubits, Amplitude, QubitLabel, StateVector};

/// Coefficient normalization slack accepted from callers.
pub const INPUT_NORM_TOL: f64 = 1e-9;

/// End-to-end fidelity threshold.
pub const FIDELITY_TOL: f64 = 1e-10;

/// Seed for the probe set used by [`verify_tables`].
pub const DEFAULT_PROBE_SEED: u64 = 0x5eed_c1a5;

/// Random probes per derivation, on top of the degenerate ones.
pub const RANDOM_PROBES: usize = 10;

const Q1: QubitLabel = QubitLabel(1);
const Q2: QubitLabel = QubitLabel(2);
const Q3: QubitLabel = QubitLabel(3);
const Q4: QubitLabel = QubitLabel(4);
const Q5: QubitLabel = QubitLabel(5);
const Q6: QubitLabel = QubitLabel(6);

/// Input particles map onto Bob's particles: 1 → 4, 2 → 5.
pub const OUTPUT_RELABEL: [(QubitLabel, QubitLabel); 2] = [(Q1, Q4), (Q2, Q5)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Scheme {
    /// `α|00⟩ + δ|11⟩`, Pauli corrections only.
    Scheme1,
    /// Arbitrary two-qubit state, CZ(4, 5) then Paulis.
    Scheme2,
}

impl Scheme {
    pub fn coefficient_count(self) -> usize {
        match self {
            Scheme::Scheme1 => 2,
            Scheme::Scheme2 => 4,
        }
    }

    pub fn uses_cz(self) -> bool {
        self == Scheme::Scheme2
    }
}

impl From<Scheme> for u8 {
    fn from(s: Scheme) -> u8 {
        match s {
            Scheme::Scheme1 => 1,
            Scheme::Scheme2 => 2,
        }
    }
}

impl TryFrom<u8> for Scheme {
    type Error = Error;

    fn try_from(v: u8) -> Result<Scheme> {
        match v {
            1 => Ok(Scheme::Scheme1),
            2 => Ok(Scheme::Scheme2),
            _ => Err(Error::Config(format!("unknown scheme {v}"))),
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "scheme {}", u8::from(*self))
    }
}

/// The unknown state Alice teleports: `(α, δ)` for scheme 1,
/// `(α, β, γ, δ)` for scheme 2.
#[derive(Debug, Clone, PartialEq)]
pub struct InputState {
    scheme: Scheme,
    coeffs: Vec<Amplitude>,
}

impl InputState {
    pub fn new(scheme: Scheme, coeffs: Vec<Amplitude>) -> Result<Self> {
        let expected = scheme.coefficient_count();
        if coeffs.len() != expected {
            return Err(Error::CoefficientCount {
                expected,
                got: coeffs.len(),
            });
        }
        if coeffs
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let n2: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (n2 - 1.0).abs() > INPUT_NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { scheme, coeffs })
    }

    pub fn scheme1(alpha: Amplitude, delta: Amplitude) -> Result<Self> {
        Self::new(Scheme::Scheme1, vec![alpha, delta])
    }

    pub fn scheme2(
        alpha: Amplitude,
        beta: Amplitude,
        gamma: Amplitude,
        delta: Amplitude,
    ) -> Result<Self> {
        Self::new(Scheme::Scheme2, vec![alpha, beta, gamma, delta])
    }

    /// Gaussian complex coefficients, normalized.
    pub fn random<R: Rng + ?Sized>(scheme: Scheme, rng: &mut R) -> Self {
        loop {
            let coeffs: Vec<Amplitude> = (0..scheme.coefficient_count())
                .map(|_| Amplitude::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                return Self {
                    scheme,
                    coeffs: coeffs.into_iter().map(|c| c / norm).collect(),
                };
            }
        }
    }

    /// One input per coefficient with that coefficient set to 1.
    pub fn degenerate(scheme: Scheme) -> Vec<Self> {
        let n = scheme.coefficient_count();
        (0..n)
            .map(|k| {
                let coeffs = (0..n)
                    .map(|j| Amplitude::new(if j == k { 1.0 } else { 0.0 }, 0.0))
                    .collect();
                Self { scheme, coeffs }
            })
            .collect()
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn coeffs(&self) -> &[Amplitude] {
        &self.coeffs
    }

    /// Amplitudes on `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn amplitudes(&self) -> [Amplitude; 4] {
        let z = Amplitude::new(0.0, 0.0);
        match self.scheme {
            Scheme::Scheme1 => [self.coeffs[0], z, z, self.coeffs[1]],
            Scheme::Scheme2 => [
                self.coeffs[0],
                self.coeffs[1],
                self.coeffs[2],
                self.coeffs[3],
            ],
        }
    }
}

/// The four-qubit channel `(|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩)/2` on (3, 4, 5, 6).
pub fn cluster_state() -> StateVector {
    let mut amps = vec![Amplitude::new(0.0, 0.0); 16];
    amps[0b0000] = Amplitude::new(0.5, 0.0);
    amps[0b0011] = Amplitude::new(0.5, 0.0);
    amps[0b1100] = Amplitude::new(0.5, 0.0);
    amps[0b1111] = Amplitude::new(-0.5, 0.0);
    StateVector::new(qubits(&[3, 4, 5, 6]), amps).expect("cluster state is normalized")
}

/// The unknown state on particles (1, 2).
pub fn make_input(i: &InputState) -> Result<StateVector> {
    StateVector::normalized(vec![Q1, Q2], i.amplitudes().to_vec())
}

/// Input ⊗ channel on particles (1, 2, 3, 4, 5, 6).
pub fn assemble_total(i: &InputState) -> Result<StateVector> {
    make_input(i)?.tensor(&cluster_state())
}

/// What Bob should end up holding: the input relabeled onto (4, 5).
pub fn target_state(i: &InputState) -> Result<StateVector> {
    make_input(i)?.relabeled(&OUTPUT_RELABEL)
}

/// Bob's feed-forward recipe: optional CZ(4, 5), then one Pauli per qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CorrectionOp {
    pub cz_first: bool,
    pub p4: Pauli,
    pub p5: Pauli,
}

impl CorrectionOp {
    pub const fn new(cz_first: bool, p4: Pauli, p5: Pauli) -> Self {
        Self { cz_first, p4, p5 }
    }

    /// All 16 Pauli pairs with the given CZ setting.
    pub fn all_pauli_pairs(cz_first: bool) -> impl Iterator<Item = CorrectionOp> {
        Pauli::ALL.into_iter().flat_map(move |p4| {
            Pauli::ALL
                .into_iter()
                .map(move |p5| CorrectionOp::new(cz_first, p4, p5))
        })
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        let s = if self.cz_first {
            apply_cz(s, Q4, Q5)?
        } else {
            s.clone()
        };
        apply_pauli(&apply_pauli(&s, Q4, self.p4)?, Q5, self.p5)
    }
}

impl fmt::Display for CorrectionOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cz_first {
            write!(f, "CZ45;")?;
        }
        write!(f, "{}4*{}5", self.p4, self.p5)
    }
}

impl FromStr for CorrectionOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("cannot parse correction {s:?}"));
        let (cz_first, rest) = match s.strip_prefix("CZ45;") {
            Some(r) => (true, r),
            None => (false, s),
        };
        let pauli = |t: &str, suffix: char| -> Result<Pauli> {
            let mut cs = t.chars();
            let p = match cs.next() {
                Some('I') => Pauli::I,
                Some('X') => Pauli::X,
                Some('Y') => Pauli::Y,
                Some('Z') => Pauli::Z,
                _ => return Err(bad()),
            };
            if cs.next() != Some(suffix) || cs.next().is_some() {
                return Err(bad());
            }
            Ok(p)
        };
        let (a, b) = rest.split_once('*').ok_or_else(bad)?;
        Ok(CorrectionOp::new(cz_first, pauli(a, '4')?, pauli(b, '5')?))
    }
}

impl Serialize for CorrectionOp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CorrectionOp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// One protocol branch after correction.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub outcome13: BellOutcome,
    pub outcome26: BellOutcome,
    pub probability: f64,
    pub correction: CorrectionOp,
    pub corrected_state: StateVector,
    pub fidelity: f64,
}

/// Alice's two measurements on `input ⊗ channel` for a fixed outcome pair.
///
/// Returns the joint probability and Bob's uncorrected state on (4, 5).
/// `input` must live on particles (1, 2).
pub fn collapse_state(
    input: &StateVector,
    o13: BellOutcome,
    o26: BellOutcome,
) -> Result<(f64, StateVector)> {
    let total = input.tensor(&cluster_state())?;
    let first = project_bell(&total, Q1, Q3, o13)?;
    let p13 = first.probability;
    let second = project_bell(&first.into_remainder()?, Q2, Q6, o26)?;
    let p = p13 * second.probability;
    Ok((p, second.into_remainder()?))
}

/// [`collapse_state`] for an [`InputState`].
pub fn collapse(i: &InputState, o13: BellOutcome, o26: BellOutcome) -> Result<(f64, StateVector)> {
    collapse_state(&make_input(i)?, o13, o26)
}

/// Runs one branch with an explicit correction.
pub fn run_branch_with(
    i: &InputState,
    o13: BellOutcome,
    o26: BellOutcome,
    correction: CorrectionOp,
) -> Result<TrialResult> {
    let (probability, bob) = collapse(i, o13, o26)?;
    let corrected_state = correction.apply(&bob)?;
    let fidelity = target_state(i)?.fidelity(&corrected_state)?;
    Ok(TrialResult {
        outcome13: o13,
        outcome26: o26,
        probability,
        correction,
        corrected_state,
        fidelity,
    })
}

/// Runs one branch with the first tabulated correction for the input's scheme.
pub fn run_branch(i: &InputState, o13: BellOutcome, o26: BellOutcome) -> Result<TrialResult> {
    let correction = table_lookup(i.scheme(), o13, o26)[0];
    run_branch_with(i, o13, o26, correction)
}

/// All 16 outcome pairs, (1, 3) outcome major.
pub fn outcome_pairs() -> impl Iterator<Item = (BellOutcome, BellOutcome)> {
    BellOutcome::ALL
        .into_iter()
        .flat_map(|a| BellOutcome::ALL.into_iter().map(move |b| (a, b)))
}

/// The correction table for `scheme`, including both
/// alternatives where two are listed.
pub fn table_lookup(scheme: Scheme, o13: BellOutcome, o26: BellOutcome) -> Vec<CorrectionOp> {
    use BellOutcome::*;
    use Pauli::*;

    let pairs: &[(Pauli, Pauli)] = match scheme {
        Scheme::Scheme1 => match (o13, o26) {
            (PhiPlus, PhiPlus) => &[(I, Z), (Z, I)],
            (PhiPlus, PhiMinus) => &[(I, I)],
            (PhiPlus, PsiPlus) => &[(I, X)],
            (PhiPlus, PsiMinus) => &[(I, Y), (Z, X)],
            (PhiMinus, PhiPlus) => &[(I, I)],
            (PhiMinus, PhiMinus) => &[(I, Z), (Z, I)],
            (PhiMinus, PsiPlus) => &[(I, Y), (Z, X)],
            (PhiMinus, PsiMinus) => &[(I, X)],
            (PsiPlus, PhiPlus) => &[(X, I)],
            (PsiPlus, PhiMinus) => &[(X, Z), (Y, I)],
            (PsiPlus, PsiPlus) => &[(X, Y), (Y, X)],
            (PsiPlus, PsiMinus) => &[(X, X)],
            (PsiMinus, PhiPlus) => &[(X, Z), (Y, I)],
            (PsiMinus, PhiMinus) => &[(X, I)],
            (PsiMinus, PsiPlus) => &[(X, X)],
            (PsiMinus, PsiMinus) => &[(X, Y), (Y, X)],
        },
        Scheme::Scheme2 => match (o13, o26) {
            (PhiPlus, PhiPlus) => &[(I, I)],
            (PhiPlus, PhiMinus) => &[(I, Z)],
            (PhiPlus, PsiPlus) => &[(I, X)],
            (PhiPlus, PsiMinus) => &[(I, Y)],
            (PhiMinus, PhiPlus) => &[(Z, I)],
            (PhiMinus, PhiMinus) => &[(Z, Z)],
            (PhiMinus, PsiPlus) => &[(Z, X)],
            (PhiMinus, PsiMinus) => &[(Z, Y)],
            (PsiPlus, PhiPlus) => &[(X, I)],
            (PsiPlus, PhiMinus) => &[(X, Z)],
            (PsiPlus, PsiPlus) => &[(X, X)],
            (PsiPlus, PsiMinus) => &[(X, Y)],
            (PsiMinus, PhiPlus) => &[(Y, I)],
            (PsiMinus, PhiMinus) => &[(Y, Z)],
            (PsiMinus, PsiPlus) => &[(Y, X)],
            (PsiMinus, PsiMinus) => &[(Y, Y)],
        },
    };
    pairs
        .iter()
        .map(|&(p4, p5)| CorrectionOp::new(scheme.uses_cz(), p4, p5))
        .collect()
}

/// Probe inputs for correction derivation: `RANDOM_PROBES` random draws
/// followed by the degenerate single-coefficient inputs.
pub fn default_probes(scheme: Scheme, seed: u64) -> Vec<InputState> {
    let mut rng = trial_rng(seed, u8::from(scheme) as u64);
    let mut probes: Vec<InputState> = (0..RANDOM_PROBES)
        .map(|_| InputState::random(scheme, &mut rng))
        .collect();
    probes.extend(InputState::degenerate(scheme));
    probes
}

/// Bob's uncorrected state and the target, per probe.
struct ProbeBranch {
    bob: StateVector,
    target: StateVector,
}

fn probe_branches(
    probes: &[InputState],
    o13: BellOutcome,
    o26: BellOutcome,
) -> Result<Vec<ProbeBranch>> {
    if probes.is_empty() {
        return Err(Error::NoProbes);
    }
    probes
        .iter()
        .map(|p| {
            Ok(ProbeBranch {
                bob: collapse(p, o13, o26)?.1,
                target: target_state(p)?,
            })
        })
        .collect()
}

fn min_fidelity_over(branches: &[ProbeBranch], op: CorrectionOp) -> Result<f64> {
    branches.iter().try_fold(f64::INFINITY, |acc, b| {
        Ok(acc.min(b.target.fidelity(&op.apply(&b.bob)?)?))
    })
}

/// Worst fidelity of `op` over `probes` in branch `(o13, o26)`.
pub fn min_fidelity(
    op: CorrectionOp,
    o13: BellOutcome,
    o26: BellOutcome,
    probes: &[InputState],
) -> Result<f64> {
    min_fidelity_over(&probe_branches(probes, o13, o26)?, op)
}

/// Best worst-case fidelity over the 16 Pauli pairs, with the CZ step on or
/// off, and the pair that achieves it.
pub fn best_pauli_fidelity(
    o13: BellOutcome,
    o26: BellOutcome,
    probes: &[InputState],
    cz_first: bool,
) -> Result<(f64, CorrectionOp)> {
    let branches = probe_branches(probes, o13, o26)?;
    let mut best = (
        f64::NEG_INFINITY,
        CorrectionOp::new(cz_first, Pauli::I, Pauli::I),
    );
    for op in CorrectionOp::all_pauli_pairs(cz_first) {
        let f = min_fidelity_over(&branches, op)?;
        if f > best.0 {
            best = (f, op);
        }
    }
    Ok(best)
}

/// Brute-force correction search: every Pauli pair (CZ fixed by `scheme`)
/// whose worst fidelity over `probes` reaches `1 − FIDELITY_TOL`.
pub fn derive_corrections(
    scheme: Scheme,
    o13: BellOutcome,
    o26: BellOutcome,
    probes: &[InputState],
) -> Result<Vec<CorrectionOp>> {
    let branches = probe_branches(probes, o13, o26)?;
    let mut found = Vec::new();
    for op in CorrectionOp::all_pauli_pairs(scheme.uses_cz()) {
        if min_fidelity_over(&branches, op)? >= 1.0 - FIDELITY_TOL {
            found.push(op);
        }
    }
    if found.is_empty() {
        return Err(Error::NoCorrection(format!("{scheme}, {o13}{o26}")));
    }
    Ok(found)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    ExactUpToGlobalPhase,
    SubspaceOnly,
    Mismatch,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ExactUpToGlobalPhase => "exact-up-to-global-phase",
            Verdict::SubspaceOnly => "subspace-only",
            Verdict::Mismatch => "mismatch",
        })
    }
}

/// A tabulated correction and how it fared.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ListedCheck {
    pub correction: CorrectionOp,
    /// Worst fidelity over the scheme's own probes.
    pub fidelity: f64,
    /// Scheme 1 only: behaviour on arbitrary (scheme 2) inputs.
    pub general: Option<Verdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableEntry {
    pub outcome13: BellOutcome,
    pub outcome26: BellOutcome,
    pub derived: Vec<CorrectionOp>,
    pub listed: Vec<ListedCheck>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub scheme: Scheme,
    pub entries: Vec<TableEntry>,
}

impl TableReport {
    pub fn all_exact(&self) -> bool {
        self.entries
            .iter()
            .all(|e| e.verdict == Verdict::ExactUpToGlobalPhase)
    }

    pub fn entry(&self, o13: BellOutcome, o26: BellOutcome) -> Option<&TableEntry> {
        self.entries
            .iter()
            .find(|e| e.outcome13 == o13 && e.outcome26 == o26)
    }
}

/// Cross-checks the tabulated corrections against brute-force derivation on the
/// default probe sets.
pub fn verify_tables(scheme: Scheme) -> Result<TableReport> {
    verify_tables_with(
        scheme,
        &default_probes(scheme, DEFAULT_PROBE_SEED),
        &default_probes(Scheme::Scheme2, DEFAULT_PROBE_SEED),
    )
}

/// [`verify_tables`] with explicit probe sets. `general_probes` are only
/// used for scheme 1, to test its entries against arbitrary inputs.
pub fn verify_tables_with(
    scheme: Scheme,
    probes: &[InputState],
    general_probes: &[InputState],
) -> Result<TableReport> {
    let mut entries = Vec::with_capacity(16);
    for (o13, o26) in outcome_pairs() {
        let branches = probe_branches(probes, o13, o26)?;
        let derived = derive_corrections(scheme, o13, o26, probes)?;
        let general_branches = match scheme {
            Scheme::Scheme1 => Some(probe_branches(general_probes, o13, o26)?),
            Scheme::Scheme2 => None,
        };
        let mut listed = Vec::new();
        for correction in table_lookup(scheme, o13, o26) {
            let fidelity = min_fidelity_over(&branches, correction)?;
            let general = match &general_branches {
                Some(g) => Some(if min_fidelity_over(g, correction)? >= 1.0 - FIDELITY_TOL {
                    Verdict::ExactUpToGlobalPhase
                } else {
                    Verdict::SubspaceOnly
                }),
                None => None,
            };
            listed.push(ListedCheck {
                correction,
                fidelity,
                general,
            });
        }
        let verdict = if listed.iter().all(|l| derived.contains(&l.correction)) {
            Verdict::ExactUpToGlobalPhase
        } else {
            Verdict::Mismatch
        };
        entries.push(TableEntry {
            outcome13: o13,
            outcome26: o26,
            derived,
            listed,
            verdict,
        });
    }
    Ok(TableReport { scheme, entries })
}
