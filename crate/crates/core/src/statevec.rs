//! Dense complex state vectors over labeled qubit registers.
//!
//! Basis indices are MSB-first by label position: for labels `[3, 4, 5, 6]`
//! the ket `|0011⟩` sits at index 3 and `|1100⟩` at index 12.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Largest register the dense representation accepts.
pub const MAX_QUBITS: usize = 8;

/// Slack for norm and orthogonality checks.
pub const NORM_TOL: f64 = 1e-12;

/// Particle number of a qubit. Unique within a register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct QubitLabel(pub u8);

impl fmt::Display for QubitLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for building a label list from particle numbers.
pub fn qubits(ids: &[u8]) -> Vec<QubitLabel> {
    ids.iter().copied().map(QubitLabel).collect()
}

/// Normalized pure state on an ordered list of labeled qubits.
///
/// Values are immutable; every operation returns a new state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    labels: Vec<QubitLabel>,
    amps: Vec<Amplitude>,
}

fn check_labels(labels: &[QubitLabel]) -> Result<()> {
    if labels.is_empty() || labels.len() > MAX_QUBITS {
        return Err(Error::RegisterSize(labels.len()));
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(*l));
        }
    }
    Ok(())
}

fn check_amps(labels: &[QubitLabel], amps: &[Amplitude]) -> Result<()> {
    let expected = 1usize << labels.len();
    if amps.len() != expected {
        return Err(Error::LengthMismatch {
            expected,
            got: amps.len(),
        });
    }
    if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
        return Err(Error::NonFinite);
    }
    Ok(())
}

fn norm_sqr(amps: &[Amplitude]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

impl StateVector {
    /// Wraps amplitudes that must already be normalized to [`NORM_TOL`].
    pub fn new(labels: Vec<QubitLabel>, amps: Vec<Amplitude>) -> Result<Self> {
        check_labels(&labels)?;
        check_amps(&labels, &amps)?;
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(Self { labels, amps })
    }

    /// Divides `amps` by its norm. Fails on vectors with norm at or below
    /// [`NORM_TOL`], which is what an impossible measurement branch produces.
    pub fn normalized(labels: Vec<QubitLabel>, mut amps: Vec<Amplitude>) -> Result<Self> {
        check_labels(&labels)?;
        check_amps(&labels, &amps)?;
        let norm = norm_sqr(&amps).sqrt();
        if norm <= NORM_TOL {
            return Err(Error::ZeroNorm(norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { labels, amps })
    }

    /// Computational basis state `|bits⟩` over `labels`.
    pub fn basis_state(labels: &[QubitLabel], bits: &[u8]) -> Result<Self> {
        check_labels(labels)?;
        if bits.len() != labels.len() {
            return Err(Error::LengthMismatch {
                expected: labels.len(),
                got: bits.len(),
            });
        }
        let mut index = 0usize;
        for &b in bits {
            if b > 1 {
                return Err(Error::InvalidBit(b));
            }
            index = (index << 1) | b as usize;
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); 1 << labels.len()];
        amps[index] = Amplitude::new(1.0, 0.0);
        Ok(Self {
            labels: labels.to_vec(),
            amps,
        })
    }

    /// Used by the gate kernels, which preserve the norm exactly up to roundoff.
    pub(crate) fn from_parts_unchecked(labels: Vec<QubitLabel>, amps: Vec<Amplitude>) -> Self {
        debug_assert_eq!(amps.len(), 1 << labels.len());
        Self { labels, amps }
    }

    pub fn labels(&self) -> &[QubitLabel] {
        &self.labels
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// Position of `q` in the label list.
    pub fn position(&self, q: QubitLabel) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == q)
            .ok_or(Error::UnknownLabel(q))
    }

    /// Shift of `q`'s bit inside a basis index.
    pub(crate) fn bit_shift(&self, q: QubitLabel) -> Result<usize> {
        Ok(self.labels.len() - 1 - self.position(q)?)
    }

    /// `self ⊗ other`, labels concatenated in that order.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        if let Some(l) = other.labels.iter().find(|l| self.labels.contains(l)) {
            return Err(Error::DuplicateLabel(*l));
        }
        let n = self.labels.len() + other.labels.len();
        if n > MAX_QUBITS {
            return Err(Error::RegisterSize(n));
        }
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        let mut labels = self.labels.clone();
        labels.extend_from_slice(&other.labels);
        Ok(StateVector { labels, amps })
    }

    /// `⟨self|other⟩`. Label lists must match in order.
    pub fn inner(&self, other: &StateVector) -> Result<Amplitude> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch {
                left: self.labels.clone(),
                right: other.labels.clone(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Squared overlap `|⟨self|other⟩|²`, blind to global phase.
    ///
    /// `other` is permuted into `self`'s label order first, so the two only
    /// need the same label set.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        let aligned;
        let other = if self.labels == other.labels {
            other
        } else {
            aligned = other.reordered(&self.labels)?;
            &aligned
        };
        let f = self.inner(other)?.norm_sqr();
        Ok(f.min(1.0))
    }

    /// Same state with its qubits listed in `order`.
    pub fn reordered(&self, order: &[QubitLabel]) -> Result<StateVector> {
        let mismatch = || Error::LabelMismatch {
            left: self.labels.clone(),
            right: order.to_vec(),
        };
        if order.len() != self.labels.len() {
            return Err(mismatch());
        }
        let n = order.len();
        // new position of each old position
        let mut dest = Vec::with_capacity(n);
        for l in &self.labels {
            dest.push(order.iter().position(|o| o == l).ok_or_else(mismatch)?);
        }
        let mut amps = vec![Amplitude::new(0.0, 0.0); self.amps.len()];
        for (i, a) in self.amps.iter().enumerate() {
            let mut j = 0usize;
            for (p, &d) in dest.iter().enumerate() {
                let bit = (i >> (n - 1 - p)) & 1;
                j |= bit << (n - 1 - d);
            }
            amps[j] = *a;
        }
        Ok(StateVector {
            labels: order.to_vec(),
            amps,
        })
    }

    /// Renames qubits by `map` (`from → to`); unmapped labels are kept.
    pub fn relabeled(&self, map: &[(QubitLabel, QubitLabel)]) -> Result<StateVector> {
        let labels: Vec<QubitLabel> = self
            .labels
            .iter()
            .map(|l| {
                map.iter()
                    .find(|(from, _)| from == l)
                    .map_or(*l, |(_, to)| *to)
            })
            .collect();
        check_labels(&labels)?;
        Ok(StateVector {
            labels,
            amps: self.amps.clone(),
        })
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_global_phase(&self, theta: f64) -> StateVector {
        let phase = Amplitude::from_polar(1.0, theta);
        StateVector {
            labels: self.labels.clone(),
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    /// Amplitudes rotated so the first non-negligible one is real and
    /// positive. Display only; stored states keep their phase.
    pub fn display_amplitudes(&self) -> Vec<Amplitude> {
        let lead = self.amps.iter().find(|a| a.norm() > 1e-9);
        let rot = lead.map_or(Amplitude::new(1.0, 0.0), |a| a.conj() / a.norm());
        self.amps.iter().map(|a| a * rot).collect()
    }

    /// Splits the register on the pair `(a, b)`: block `k` holds the
    /// amplitudes of the remaining qubits with the pair in `|k⟩`
    /// (`a` as the high bit). Remaining labels keep their original order.
    pub(crate) fn pair_blocks(
        &self,
        a: QubitLabel,
        b: QubitLabel,
    ) -> Result<(Vec<QubitLabel>, [Vec<Amplitude>; 4])> {
        if a == b {
            return Err(Error::SameQubit(a));
        }
        let sa = self.bit_shift(a)?;
        let sb = self.bit_shift(b)?;
        let n = self.labels.len();
        let rest: Vec<QubitLabel> = self
            .labels
            .iter()
            .copied()
            .filter(|&l| l != a && l != b)
            .collect();
        let rest_shifts: Vec<usize> = (0..n).rev().filter(|&s| s != sa && s != sb).collect();
        let size = 1usize << rest.len();
        let mut blocks: [Vec<Amplitude>; 4] = Default::default();
        for blk in blocks.iter_mut() {
            blk.reserve_exact(size);
        }
        for r in 0..size {
            let mut base = 0usize;
            for (p, &s) in rest_shifts.iter().enumerate() {
                base |= ((r >> (rest_shifts.len() - 1 - p)) & 1) << s;
            }
            for (k, blk) in blocks.iter_mut().enumerate() {
                let i = base | ((k >> 1) << sa) | ((k & 1) << sb);
                blk.push(self.amps[i]);
            }
        }
        Ok((rest, blocks))
    }
}

/// `Σ_k conj(pair[k]) · blocks[k]`.
pub(crate) fn contract_blocks(
    blocks: &[Vec<Amplitude>; 4],
    pair: &[Amplitude; 4],
) -> Vec<Amplitude> {
    let bra = pair.map(|c| c.conj());
    (0..blocks[0].len())
        .map(|r| (0..4).map(|k| bra[k] * blocks[k][r]).sum())
        .collect()
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.labels.len();
        let subscript: Vec<String> = self.labels.iter().map(|l| l.to_string()).collect();
        let mut first = true;
        for (i, a) in self.display_amplitudes().iter().enumerate() {
            if a.norm() < 1e-12 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({:.6}{:+.6}i)|{:0width$b}⟩", a.re, a.im, i, width = n)?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, "_{}", subscript.join(","))
    }
}
