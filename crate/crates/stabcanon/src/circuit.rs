//! Gates, circuits, the text format and two-qubit depth.
//!
//! Text format, one gate per line, mnemonics case-insensitive:
//!
//! ```text
//! QUBITS 3
//! H 0        # comment
//! P 1
//! PDG 1
//! Z 2
//! CX 0 1
//! CZ 1 2
//! ```

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Gate {
    H(usize),
    /// `P^k` with `k` in 1..=3. `k = 2` is Z, `k = 3` is P-dagger.
    P(usize, u8),
    /// Control, target.
    Cnot(usize, usize),
    Cz(usize, usize),
}

impl Gate {
    pub fn z(q: usize) -> Gate {
        Gate::P(q, 2)
    }

    pub fn pdg(q: usize) -> Gate {
        Gate::P(q, 3)
    }

    /// `P^k` with `k` reduced mod 4; `None` when the power vanishes.
    pub fn phase(q: usize, k: u32) -> Option<Gate> {
        match k % 4 {
            0 => None,
            k => Some(Gate::P(q, k as u8)),
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cnot(..) | Gate::Cz(..))
    }

    pub fn qubits(&self) -> (usize, Option<usize>) {
        match *self {
            Gate::H(q) | Gate::P(q, _) => (q, None),
            Gate::Cnot(a, b) | Gate::Cz(a, b) => (a, Some(b)),
        }
    }

    pub fn max_qubit(&self) -> usize {
        let (a, b) = self.qubits();
        b.map_or(a, |b| a.max(b))
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::P(q, k) => Gate::P(q, 4 - k),
            g => g,
        }
    }

    /// Relabel qubits through `f`.
    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::H(q) => Gate::H(f(q)),
            Gate::P(q, k) => Gate::P(f(q), k),
            Gate::Cnot(c, t) => Gate::Cnot(f(c), f(t)),
            Gate::Cz(a, b) => Gate::Cz(f(a), f(b)),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let (a, b) = self.qubits();
        for q in std::iter::once(a).chain(b) {
            if q >= n {
                return Err(Error::QubitOutOfRange { qubit: q, n });
            }
        }
        if b == Some(a) {
            return Err(Error::RepeatedQubit(a));
        }
        if let Gate::P(_, k) = self {
            if !(1..=3).contains(k) {
                return Err(Error::Unsupported(format!("phase power {k}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::H(q) => write!(f, "H {q}"),
            Gate::P(q, 1) => write!(f, "P {q}"),
            Gate::P(q, 2) => write!(f, "Z {q}"),
            Gate::P(q, _) => write!(f, "PDG {q}"),
            Gate::Cnot(c, t) => write!(f, "CX {c} {t}"),
            Gate::Cz(a, b) => write!(f, "CZ {a} {b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Circuit {
    pub n: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Circuit {
        Circuit { n, gates: Vec::new() }
    }

    pub fn from_gates(n: usize, gates: impl IntoIterator<Item = Gate>) -> Result<Circuit> {
        let mut c = Circuit::new(n);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.check(self.n)?;
        self.gates.push(g);
        Ok(())
    }

    /// Append `P^k`, dropping it when `k = 0 mod 4`.
    pub fn push_phase(&mut self, q: usize, k: u32) -> Result<()> {
        match Gate::phase(q, k) {
            Some(g) => self.push(g),
            None => Ok(()),
        }
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Checks every gate against `n`.
    pub fn validate(&self) -> Result<()> {
        self.gates.iter().try_for_each(|g| g.check(self.n))
    }

    pub fn map_qubits(&self, f: impl Fn(usize) -> usize) -> Circuit {
        Circuit { n: self.n, gates: self.gates.iter().map(|g| g.map_qubits(&f)).collect() }
    }

    /// Rewrites every CZ as `H(b) CX(a,b) H(b)`.
    pub fn lower_cz(&self) -> Circuit {
        let mut gates = Vec::with_capacity(self.gates.len());
        for &g in &self.gates {
            match g {
                Gate::Cz(a, b) => gates.extend([Gate::H(b), Gate::Cnot(a, b), Gate::H(b)]),
                g => gates.push(g),
            }
        }
        Circuit { n: self.n, gates }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layout {
    AllToAll,
    Lnn,
}

/// Two-qubit depth under as-soon-as-possible layering. Single-qubit gates are free.
pub fn two_qubit_depth(c: &Circuit) -> usize {
    let mut level = vec![0usize; c.n];
    let mut depth = 0;
    for g in &c.gates {
        if let (a, Some(b)) = g.qubits() {
            let l = level[a].max(level[b]) + 1;
            level[a] = l;
            level[b] = l;
            depth = depth.max(l);
        }
    }
    depth
}

pub fn validate_layout(c: &Circuit, layout: Layout) -> bool {
    match layout {
        Layout::AllToAll => true,
        Layout::Lnn => c.gates.iter().all(|g| match g.qubits() {
            (a, Some(b)) => a.abs_diff(b) == 1,
            _ => true,
        }),
    }
}

pub fn invert_circuit(c: &Circuit) -> Circuit {
    Circuit { n: c.n, gates: c.gates.iter().rev().map(Gate::inverse).collect() }
}

fn parse_index(tok: Option<&str>, line: usize) -> Result<usize> {
    let tok = tok.ok_or_else(|| Error::Parse { line, msg: "missing qubit index".into() })?;
    tok.parse()
        .map_err(|_| Error::Parse { line, msg: format!("bad qubit index `{tok}`") })
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Circuit> {
        let mut circuit: Option<Circuit> = None;
        for (i, raw) in s.lines().enumerate() {
            let line = i + 1;
            let text = raw.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let mut toks = text.split_whitespace();
            let head = toks.next().unwrap_or("").to_ascii_uppercase();
            let Some(c) = circuit.as_mut() else {
                if head != "QUBITS" {
                    return Err(Error::Parse { line, msg: "expected `QUBITS n` header".into() });
                }
                let n = parse_index(toks.next(), line)?;
                if n > crate::MAX_QUBITS {
                    return Err(Error::Parse { line, msg: format!("at most 64 qubits, got {n}") });
                }
                circuit = Some(Circuit::new(n));
                if toks.next().is_some() {
                    return Err(Error::Parse { line, msg: "trailing tokens".into() });
                }
                continue;
            };
            let gate = match head.as_str() {
                "H" => Gate::H(parse_index(toks.next(), line)?),
                "P" | "S" => Gate::P(parse_index(toks.next(), line)?, 1),
                "Z" => Gate::P(parse_index(toks.next(), line)?, 2),
                "PDG" | "SDG" => Gate::P(parse_index(toks.next(), line)?, 3),
                "CX" | "CNOT" => {
                    Gate::Cnot(parse_index(toks.next(), line)?, parse_index(toks.next(), line)?)
                }
                "CZ" => Gate::Cz(parse_index(toks.next(), line)?, parse_index(toks.next(), line)?),
                "QUBITS" => return Err(Error::Parse { line, msg: "repeated header".into() }),
                other => return Err(Error::Parse { line, msg: format!("unknown gate `{other}`") }),
            };
            if toks.next().is_some() {
                return Err(Error::Parse { line, msg: "trailing tokens".into() });
            }
            c.push(gate).map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        }
        circuit.ok_or(Error::Parse { line: 1, msg: "empty input, expected `QUBITS n`".into() })
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.n)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}
