//! Pauli operators and the controlled-phase gate.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::statevec::{Amplitude, QubitLabel, StateVector};

/// Unitarity slack for caller-supplied matrices.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn matrix(self) -> SingleQubitUnitary {
        pauli_matrix(self)
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Pauli::I => "I",
            Pauli::X => "X",
            Pauli::Y => "Y",
            Pauli::Z => "Z",
        };
        f.write_str(s)
    }
}

/// 2×2 unitary, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitUnitary([[Amplitude; 2]; 2]);

const fn c(re: f64, im: f64) -> Amplitude {
    Amplitude::new(re, im)
}

/// Standard Pauli matrices; `Y` is σ_y with complex entries.
pub fn pauli_matrix(p: Pauli) -> SingleQubitUnitary {
    let m = match p {
        Pauli::I => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        Pauli::X => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        Pauli::Y => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
        Pauli::Z => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
    };
    SingleQubitUnitary(m)
}

impl SingleQubitUnitary {
    /// Checks `U†U = I` to [`UNITARY_TOL`].
    pub fn new(m: [[Amplitude; 2]; 2]) -> Result<Self> {
        let u = SingleQubitUnitary(m);
        let dev = u.unitarity_deviation();
        if !dev.is_finite() || dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(u)
    }

    pub fn entries(&self) -> &[[Amplitude; 2]; 2] {
        &self.0
    }

    pub fn adjoint(&self) -> SingleQubitUnitary {
        let m = self.0;
        SingleQubitUnitary([
            [m[0][0].conj(), m[1][0].conj()],
            [m[0][1].conj(), m[1][1].conj()],
        ])
    }

    /// Largest entry-wise deviation of `U†U` from the identity.
    pub fn unitarity_deviation(&self) -> f64 {
        let p = self.adjoint() * *self;
        let mut dev: f64 = 0.0;
        for (i, row) in p.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                dev = dev.max((v - target).norm());
            }
        }
        dev
    }
}

impl Mul for SingleQubitUnitary {
    type Output = SingleQubitUnitary;

    fn mul(self, rhs: SingleQubitUnitary) -> SingleQubitUnitary {
        let (a, b) = (self.0, rhs.0);
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        SingleQubitUnitary(out)
    }
}

/// Applies `u` to qubit `q`, identity elsewhere.
pub fn apply_single(s: &StateVector, q: QubitLabel, u: &SingleQubitUnitary) -> Result<StateVector> {
    let shift = s.bit_shift(q)?;
    let dev = u.unitarity_deviation();
    if !dev.is_finite() || dev > UNITARY_TOL {
        return Err(Error::NotUnitary(dev));
    }
    let m = u.0;
    let mut amps = s.amplitudes().to_vec();
    let stride = 1usize << shift;
    for i0 in (0..amps.len()).filter(|i| i & stride == 0) {
        let i1 = i0 | stride;
        let (a0, a1) = (amps[i0], amps[i1]);
        amps[i0] = m[0][0] * a0 + m[0][1] * a1;
        amps[i1] = m[1][0] * a0 + m[1][1] * a1;
    }
    Ok(StateVector::from_parts_unchecked(s.labels().to_vec(), amps))
}

pub fn apply_pauli(s: &StateVector, q: QubitLabel, p: Pauli) -> Result<StateVector> {
    apply_single(s, q, &pauli_matrix(p))
}

/// Controlled-Z: negates every basis amplitude with both bits set.
/// Symmetric in `control` and `target`.
pub fn apply_cz(s: &StateVector, control: QubitLabel, target: QubitLabel) -> Result<StateVector> {
    if control == target {
        return Err(Error::SameQubit(control));
    }
    let mask = (1usize << s.bit_shift(control)?) | (1usize << s.bit_shift(target)?);
    let amps = s
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| if i & mask == mask { -a } else { *a })
        .collect();
    Ok(StateVector::from_parts_unchecked(s.labels().to_vec(), amps))
}
