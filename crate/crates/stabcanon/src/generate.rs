//! Seeded random inputs. Every function is deterministic in its seed.

use std::str::FromStr;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::circuit::{Circuit, Gate};
use crate::czsynth::{synth_czhat_lnn, CzHatOptions};
use crate::error::{Error, Result};
use crate::phasepoly::PhasePoly;
use crate::tableau::random_circuit;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    /// Uniform word over {H, P, CNOT, CZ}.
    Clifford,
    /// Alternating `-P-C-` rounds.
    Pc,
    /// Reversal-CZ network with random phases.
    CzHat,
}

impl FromStr for GenKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<GenKind> {
        match s {
            "clifford" => Ok(GenKind::Clifford),
            "pc" => Ok(GenKind::Pc),
            "czhat" => Ok(GenKind::CzHat),
            other => Err(Error::Unsupported(format!("unknown generator `{other}`"))),
        }
    }
}

fn check(n: usize) -> Result<()> {
    if n == 0 || n > crate::MAX_QUBITS {
        return Err(Error::UnsupportedSize(n, crate::MAX_QUBITS));
    }
    Ok(())
}

pub fn random_clifford_word(n: usize, len: usize, seed: u64) -> Result<Circuit> {
    check(n)?;
    Ok(random_circuit(n, len, &mut StdRng::seed_from_u64(seed)))
}

/// `(-P-C-)^rounds`: a random power on every qubit, then `n` random CNOTs.
pub fn random_pc_circuit(n: usize, rounds: usize, seed: u64) -> Result<Circuit> {
    check(n)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    for _ in 0..rounds {
        for q in 0..n {
            c.push_phase(q, rng.gen_range(0..4))?;
        }
        if n > 1 {
            for _ in 0..n {
                let a = rng.gen_range(0..n);
                let b = (a + rng.gen_range(1..n)) % n;
                c.push(Gate::Cnot(a, b))?;
            }
        }
    }
    Ok(c)
}

/// Random weight-at-most-2 polynomial in the prefix variables, laid out as
/// a full reversal-CZ network.
pub fn random_czhat(n: usize, seed: u64) -> Result<Circuit> {
    check(n)?;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut p = PhasePoly::new(n);
    for j in 0..n {
        for k in j..n {
            p.add(1 << j | 1 << k, rng.gen_range(0..4));
        }
    }
    synth_czhat_lnn(&p, CzHatOptions::default())
}

/// `gates` is the word length for [`GenKind::Clifford`] and the round count
/// for [`GenKind::Pc`]; it is ignored for [`GenKind::CzHat`].
pub fn generate(kind: GenKind, n: usize, gates: usize, seed: u64) -> Result<Circuit> {
    match kind {
        GenKind::Clifford => random_clifford_word(n, gates, seed),
        GenKind::Pc => random_pc_circuit(n, gates, seed),
        GenKind::CzHat => random_czhat(n, seed),
    }
}
