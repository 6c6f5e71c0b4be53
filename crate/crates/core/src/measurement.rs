//! Bell-basis projective measurement on a pair of labeled qubits.
//!
//! A measured pair factors out of the register exactly, so projection
//! removes it: measuring `(1, 3)` and then `(2, 6)` on `[1, 2, 3, 4, 5, 6]`
//! leaves a state on `[4, 5]`.

use std::fmt;

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{contract_blocks, Amplitude, QubitLabel, StateVector, NORM_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BellOutcome {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellOutcome {
    pub const ALL: [BellOutcome; 4] = [
        BellOutcome::PhiPlus,
        BellOutcome::PhiMinus,
        BellOutcome::PsiPlus,
        BellOutcome::PsiMinus,
    ];

    /// Amplitudes on `|00⟩, |01⟩, |10⟩, |11⟩`.
    pub fn amplitudes(self) -> [Amplitude; 4] {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (z, p, m) = (0.0, h, -h);
        let v = match self {
            BellOutcome::PhiPlus => [p, z, z, p],
            BellOutcome::PhiMinus => [p, z, z, m],
            BellOutcome::PsiPlus => [z, p, p, z],
            BellOutcome::PsiMinus => [z, p, m, z],
        };
        v.map(|x| Amplitude::new(x, 0.0))
    }

    pub fn name(self) -> &'static str {
        match self {
            BellOutcome::PhiPlus => "PhiPlus",
            BellOutcome::PhiMinus => "PhiMinus",
            BellOutcome::PsiPlus => "PsiPlus",
            BellOutcome::PsiMinus => "PsiMinus",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for BellOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BellOutcome::PhiPlus => "Φ+",
            BellOutcome::PhiMinus => "Φ−",
            BellOutcome::PsiPlus => "Ψ+",
            BellOutcome::PsiMinus => "Ψ−",
        };
        f.write_str(s)
    }
}

/// Bell state on `(a, b)`, `a` first.
pub fn bell_vector(o: BellOutcome, a: QubitLabel, b: QubitLabel) -> Result<StateVector> {
    if a == b {
        return Err(Error::SameQubit(a));
    }
    StateVector::new(vec![a, b], o.amplitudes().to_vec())
}

/// Outcome of projecting a pair onto one Bell state.
///
/// `remainder` is `None` for impossible branches (probability at or below
/// `NORM_TOL`) and for a register that consisted only of the measured pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionResult {
    pub probability: f64,
    pub remainder: Option<StateVector>,
}

impl ProjectionResult {
    pub fn is_possible(&self) -> bool {
        self.probability > NORM_TOL
    }

    /// The post-measurement state, or an error for an impossible branch.
    pub fn into_remainder(self) -> Result<StateVector> {
        if !self.is_possible() {
            return Err(Error::ImpossibleBranch(self.probability));
        }
        self.remainder.ok_or(Error::RegisterSize(0))
    }
}

/// Projects `(a, b)` of `s` onto `o` and removes the pair.
pub fn project_bell(
    s: &StateVector,
    a: QubitLabel,
    b: QubitLabel,
    o: BellOutcome,
) -> Result<ProjectionResult> {
    let (rest, blocks) = s.pair_blocks(a, b)?;
    finish_projection(rest, contract_blocks(&blocks, &o.amplitudes()))
}

fn finish_projection(rest: Vec<QubitLabel>, amps: Vec<Amplitude>) -> Result<ProjectionResult> {
    let probability: f64 = amps.iter().map(|x| x.norm_sqr()).sum();
    let remainder = if probability > NORM_TOL && !rest.is_empty() {
        Some(StateVector::normalized(rest, amps)?)
    } else {
        None
    };
    Ok(ProjectionResult {
        probability: probability.min(1.0),
        remainder,
    })
}

/// Born probabilities of the four outcomes, in [`BellOutcome::ALL`] order.
pub fn bell_probabilities(s: &StateVector, a: QubitLabel, b: QubitLabel) -> Result<[f64; 4]> {
    let (_, blocks) = s.pair_blocks(a, b)?;
    Ok(BellOutcome::ALL.map(|o| {
        contract_blocks(&blocks, &o.amplitudes())
            .iter()
            .map(|x| x.norm_sqr())
            .sum()
    }))
}

/// All four projections of one pair measurement, ready for repeated draws.
#[derive(Debug, Clone)]
pub struct BellBranches {
    dist: WeightedIndex<f64>,
    branches: [ProjectionResult; 4],
}

impl BellBranches {
    pub fn new(s: &StateVector, a: QubitLabel, b: QubitLabel) -> Result<Self> {
        let (rest, blocks) = s.pair_blocks(a, b)?;
        let mut branches = Vec::with_capacity(4);
        for o in BellOutcome::ALL {
            branches.push(finish_projection(
                rest.clone(),
                contract_blocks(&blocks, &o.amplitudes()),
            )?);
        }
        let branches: [ProjectionResult; 4] = branches.try_into().expect("four outcomes");
        let probs = branches.each_ref().map(|r| r.probability);
        let dist =
            WeightedIndex::new(probs).map_err(|_| Error::ImpossibleBranch(probs.iter().sum()))?;
        Ok(Self { dist, branches })
    }

    pub fn branch(&self, o: BellOutcome) -> &ProjectionResult {
        &self.branches[o.index()]
    }

    /// Born-weighted outcome draw.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> BellOutcome {
        BellOutcome::ALL[self.dist.sample(rng)]
    }
}

/// Draws an outcome with its Born probability and returns the matching
/// projection.
pub fn sample_bell<R: Rng + ?Sized>(
    s: &StateVector,
    a: QubitLabel,
    b: QubitLabel,
    rng: &mut R,
) -> Result<(BellOutcome, ProjectionResult)> {
    let mut branches = BellBranches::new(s, a, b)?;
    let o = branches.draw(rng);
    let r = std::mem::replace(
        &mut branches.branches[o.index()],
        ProjectionResult {
            probability: 0.0,
            remainder: None,
        },
    );
    Ok((o, r))
}

/// Random stream for trial `index` under `seed`. Streams for distinct
/// indices are independent, so trials can run in any order.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}
