//! Term-by-term ket algebra used as an independent oracle.
//!
//! States are sums of `coefficient · |bits⟩` keyed by explicit bitstrings;
//! nothing here touches the dense index arithmetic under test.

#![allow(dead_code)]

use std::collections::BTreeMap;

use cluster_teleport::{Amplitude, BellOutcome, Pauli, StateVector};

#[derive(Debug, Clone)]
pub struct Kets {
    pub labels: Vec<u8>,
    pub terms: BTreeMap<Vec<u8>, Amplitude>,
}

pub fn c(re: f64, im: f64) -> Amplitude {
    Amplitude::new(re, im)
}

impl Kets {
    pub fn new(labels: &[u8], terms: &[(&[u8], Amplitude)]) -> Self {
        let mut k = Kets {
            labels: labels.to_vec(),
            terms: BTreeMap::new(),
        };
        for (bits, a) in terms {
            assert_eq!(bits.len(), labels.len());
            *k.terms.entry(bits.to_vec()).or_default() += *a;
        }
        k
    }

    /// `(|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩)/2` on 3, 4, 5, 6, written out.
    pub fn cluster() -> Self {
        Kets::new(
            &[3, 4, 5, 6],
            &[
                (&[0, 0, 0, 0], c(0.5, 0.0)),
                (&[0, 0, 1, 1], c(0.5, 0.0)),
                (&[1, 1, 0, 0], c(0.5, 0.0)),
                (&[1, 1, 1, 1], c(-0.5, 0.0)),
            ],
        )
    }

    /// `α|00⟩ + β|01⟩ + γ|10⟩ + δ|11⟩` on (1, 2).
    pub fn input(coeffs: [Amplitude; 4]) -> Self {
        Kets::new(
            &[1, 2],
            &[
                (&[0, 0], coeffs[0]),
                (&[0, 1], coeffs[1]),
                (&[1, 0], coeffs[2]),
                (&[1, 1], coeffs[3]),
            ],
        )
    }

    pub fn tensor(&self, other: &Kets) -> Kets {
        let mut labels = self.labels.clone();
        labels.extend(&other.labels);
        let mut terms = BTreeMap::new();
        for (ba, a) in &self.terms {
            for (bb, b) in &other.terms {
                let mut bits = ba.clone();
                bits.extend(bb);
                *terms.entry(bits).or_default() += a * b;
            }
        }
        Kets { labels, terms }
    }

    fn pos(&self, l: u8) -> usize {
        self.labels
            .iter()
            .position(|&x| x == l)
            .expect("label present")
    }

    /// `⟨Bell(o)|_{ab}` applied term by term; the pair is dropped.
    pub fn contract_bell(&self, a: u8, b: u8, o: BellOutcome) -> Kets {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        // ⟨Φ±| = (⟨00| ± ⟨11|)/√2, ⟨Ψ±| = (⟨01| ± ⟨10|)/√2
        let bra = |x: u8, y: u8| -> f64 {
            match (o, x, y) {
                (BellOutcome::PhiPlus, 0, 0) | (BellOutcome::PhiPlus, 1, 1) => r,
                (BellOutcome::PhiMinus, 0, 0) => r,
                (BellOutcome::PhiMinus, 1, 1) => -r,
                (BellOutcome::PsiPlus, 0, 1) | (BellOutcome::PsiPlus, 1, 0) => r,
                (BellOutcome::PsiMinus, 0, 1) => r,
                (BellOutcome::PsiMinus, 1, 0) => -r,
                _ => 0.0,
            }
        };
        let (pa, pb) = (self.pos(a), self.pos(b));
        let labels: Vec<u8> = self
            .labels
            .iter()
            .copied()
            .filter(|&l| l != a && l != b)
            .collect();
        let mut terms = BTreeMap::new();
        for (bits, amp) in &self.terms {
            let w = bra(bits[pa], bits[pb]);
            if w == 0.0 {
                continue;
            }
            let rest: Vec<u8> = bits
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != pa && *i != pb)
                .map(|(_, &x)| x)
                .collect();
            *terms.entry(rest).or_default() += amp * w;
        }
        Kets { labels, terms }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn pauli(&self, q: u8, p: Pauli) -> Kets {
        let i = self.pos(q);
        let mut terms = BTreeMap::new();
        for (bits, amp) in &self.terms {
            let mut out = bits.clone();
            // X|b⟩ = |1−b⟩, Z|b⟩ = (−1)^b|b⟩, Y|0⟩ = i|1⟩, Y|1⟩ = −i|0⟩
            let factor = match (p, bits[i]) {
                (Pauli::I, _) => c(1.0, 0.0),
                (Pauli::X, _) => c(1.0, 0.0),
                (Pauli::Z, 0) => c(1.0, 0.0),
                (Pauli::Z, _) => c(-1.0, 0.0),
                (Pauli::Y, 0) => c(0.0, 1.0),
                (Pauli::Y, _) => c(0.0, -1.0),
            };
            if matches!(p, Pauli::X | Pauli::Y) {
                out[i] ^= 1;
            }
            *terms.entry(out).or_default() += amp * factor;
        }
        Kets {
            labels: self.labels.clone(),
            terms,
        }
    }

    pub fn cz(&self, a: u8, b: u8) -> Kets {
        let (pa, pb) = (self.pos(a), self.pos(b));
        let terms = self
            .terms
            .iter()
            .map(|(bits, amp)| {
                let s = if bits[pa] == 1 && bits[pb] == 1 {
                    -1.0
                } else {
                    1.0
                };
                (bits.clone(), amp * s)
            })
            .collect();
        Kets {
            labels: self.labels.clone(),
            terms,
        }
    }

    pub fn relabel(&self, from: u8, to: u8) -> Kets {
        let mut k = self.clone();
        k.labels
            .iter_mut()
            .filter(|l| **l == from)
            .for_each(|l| *l = to);
        k
    }

    /// `|⟨self|other⟩|² / (‖self‖² ‖other‖²)`, matching labels by name.
    pub fn fidelity(&self, other: &Kets) -> f64 {
        let map: Vec<usize> = self.labels.iter().map(|&l| other.pos(l)).collect();
        let mut overlap = c(0.0, 0.0);
        for (bits, a) in &self.terms {
            let mut ob = vec![0u8; bits.len()];
            for (i, &j) in map.iter().enumerate() {
                ob[j] = bits[i];
            }
            if let Some(b) = other.terms.get(&ob) {
                overlap += a.conj() * b;
            }
        }
        overlap.norm_sqr() / (self.norm_sqr() * other.norm_sqr())
    }

    /// Reads a dense state term by term through its public amplitudes.
    pub fn from_state(s: &StateVector) -> Kets {
        let labels: Vec<u8> = s.labels().iter().map(|l| l.0).collect();
        let n = labels.len();
        let mut terms = BTreeMap::new();
        for (i, a) in s.amplitudes().iter().enumerate() {
            if a.norm() == 0.0 {
                continue;
            }
            let bits: Vec<u8> = (0..n).map(|p| ((i >> (n - 1 - p)) & 1) as u8).collect();
            terms.insert(bits, *a);
        }
        Kets { labels, terms }
    }
}

/// Oracle for one protocol branch: probability and Bob's uncorrected kets.
pub fn oracle_collapse(coeffs: [Amplitude; 4], o13: BellOutcome, o26: BellOutcome) -> (f64, Kets) {
    let total = Kets::input(coeffs).tensor(&Kets::cluster());
    let bob = total.contract_bell(1, 3, o13).contract_bell(2, 6, o26);
    (bob.norm_sqr(), bob)
}

pub fn sign(o: BellOutcome) -> f64 {
    match o {
        BellOutcome::PhiPlus | BellOutcome::PsiPlus => 1.0,
        BellOutcome::PhiMinus | BellOutcome::PsiMinus => -1.0,
    }
}

fn is_phi(o: BellOutcome) -> bool {
    matches!(o, BellOutcome::PhiPlus | BellOutcome::PhiMinus)
}

/// Bob's pre-CZ state written out in closed form for an
/// arbitrary input (unnormalized, prefactor dropped).
pub fn closed_form_pre_cz(coeffs: [Amplitude; 4], o13: BellOutcome, o26: BellOutcome) -> Kets {
    let [a, b, g, d] = coeffs;
    let (s1, s2) = (sign(o13), sign(o26));
    let t: [(&[u8], Amplitude); 4] = match (is_phi(o13), is_phi(o26)) {
        (true, true) => [
            (&[0, 0], a),
            (&[0, 1], b * s2),
            (&[1, 0], g * s1),
            (&[1, 1], -d * s1 * s2),
        ],
        (true, false) => [
            (&[0, 1], a),
            (&[0, 0], b * s2),
            (&[1, 1], -g * s1),
            (&[1, 0], d * s1 * s2),
        ],
        (false, true) => [
            (&[1, 0], a),
            (&[1, 1], -b * s2),
            (&[0, 0], g * s1),
            (&[0, 1], d * s1 * s2),
        ],
        (false, false) => [
            (&[1, 1], -a),
            (&[1, 0], b * s2),
            (&[0, 1], g * s1),
            (&[0, 0], d * s1 * s2),
        ],
    };
    Kets::new(&[4, 5], &t)
}

/// Post-CZ closed forms: the pre-CZ ones with the `|11⟩` sign flipped.
pub fn closed_form_post_cz(coeffs: [Amplitude; 4], o13: BellOutcome, o26: BellOutcome) -> Kets {
    let [a, b, g, d] = coeffs;
    let (s1, s2) = (sign(o13), sign(o26));
    let t: [(&[u8], Amplitude); 4] = match (is_phi(o13), is_phi(o26)) {
        (true, true) => [
            (&[0, 0], a),
            (&[0, 1], b * s2),
            (&[1, 0], g * s1),
            (&[1, 1], d * s1 * s2),
        ],
        (true, false) => [
            (&[0, 1], a),
            (&[0, 0], b * s2),
            (&[1, 1], g * s1),
            (&[1, 0], d * s1 * s2),
        ],
        (false, true) => [
            (&[1, 0], a),
            (&[1, 1], b * s2),
            (&[0, 0], g * s1),
            (&[0, 1], d * s1 * s2),
        ],
        (false, false) => [
            (&[1, 1], a),
            (&[1, 0], b * s2),
            (&[0, 1], g * s1),
            (&[0, 0], d * s1 * s2),
        ],
    };
    Kets::new(&[4, 5], &t)
}

/// Closed forms for the special input: `α|..⟩ ± δ|..⟩` only.
pub fn closed_form_scheme1(
    alpha: Amplitude,
    delta: Amplitude,
    o13: BellOutcome,
    o26: BellOutcome,
) -> Kets {
    let z = c(0.0, 0.0);
    closed_form_pre_cz([alpha, z, z, delta], o13, o26)
}
