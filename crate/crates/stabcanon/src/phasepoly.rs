//! Phase polynomials over Z4.
//!
//! An H-free circuit acts as `|x> -> i^p(x) |g x>` where
//! `p(x) = sum_m u_m [m . x]` and `[m . x]` is the parity of the masked bits,
//! read as 0 or 1. Masks are `u64` bit-vectors, bit `j` standing for `x_{j+1}`.
//!
//! Dump format: one `coeff bits` line per term in ascending mask order, where
//! character `j` of `bits` is bit `j`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linear::{LinearBackend, LinearMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct PhasePoly {
    pub n: usize,
    terms: BTreeMap<u64, u8>,
}

impl PhasePoly {
    pub fn new(n: usize) -> PhasePoly {
        PhasePoly { n, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (u64, u32)>) -> PhasePoly {
        let mut p = PhasePoly::new(n);
        for (m, u) in terms {
            p.add(m, u);
        }
        p
    }

    /// Add `u * [mask . x]`. Zero masks only shift the global phase and are dropped.
    pub fn add(&mut self, mask: u64, u: u32) {
        if mask == 0 {
            return;
        }
        let c = (self.coeff(mask) as u32 + u) % 4;
        if c == 0 {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, c as u8);
        }
    }

    pub fn coeff(&self, mask: u64) -> u8 {
        self.terms.get(&mask).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, u8)> + '_ {
        self.terms.iter().map(|(&m, &u)| (m, u))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|m| m.count_ones()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x: u64) -> u8 {
        let s: u32 = self.terms().map(|(m, u)| u as u32 * ((m & x).count_ones() & 1)).sum();
        (s % 4) as u8
    }

    /// Change of variables: each mask `m` becomes the XOR of the rows of `sub`
    /// selected by `m`, i.e. `x_j` is replaced by `sub.rows[j] . y`.
    pub fn substitute(&self, sub: &LinearMatrix) -> PhasePoly {
        PhasePoly::from_terms(self.n, self.terms().map(|(m, u)| (sub.combine_rows(m), u as u32)))
    }

    /// `p(x)` rewritten as `-p(x)`.
    pub fn negate(&self) -> PhasePoly {
        PhasePoly::from_terms(self.n, self.terms().map(|(m, u)| (m, 4 - u as u32)))
    }

    /// Relabel variables `j -> n - 1 - j`.
    pub fn reverse_variables(&self) -> PhasePoly {
        let n = self.n;
        PhasePoly::from_terms(n, self.terms().map(|(m, u)| (m.reverse_bits() >> (64 - n), u as u32)))
    }

    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (m, u) in self.terms() {
            s.push_str(&format!("{u} {}\n", mask_string(m, self.n)));
        }
        s
    }
}

pub fn mask_string(m: u64, n: usize) -> String {
    (0..n).map(|j| if (m >> j) & 1 == 1 { '1' } else { '0' }).collect()
}

impl fmt::Display for PhasePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

impl FromStr for PhasePoly {
    type Err = Error;

    /// Parses the dump format; `n` is taken from the width of the first mask.
    fn from_str(s: &str) -> Result<PhasePoly> {
        let mut p: Option<PhasePoly> = None;
        for (i, line) in s.lines().enumerate() {
            let line_no = i + 1;
            let text = line.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let bad = |msg: &str| Error::Parse { line: line_no, msg: msg.to_string() };
            let (u, bits) = text.split_once(char::is_whitespace).ok_or_else(|| bad("expected `coeff bits`"))?;
            let u: u32 = u.parse().map_err(|_| bad("bad coefficient"))?;
            let bits = bits.trim();
            let poly = p.get_or_insert_with(|| PhasePoly::new(bits.len()));
            if bits.len() != poly.n || bits.len() > crate::MAX_QUBITS {
                return Err(bad("mask width differs"));
            }
            let mut m = 0u64;
            for (j, ch) in bits.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => m |= 1 << j,
                    _ => return Err(bad("mask must be over {0,1}")),
                }
            }
            poly.add(m, u);
        }
        Ok(p.unwrap_or_default())
    }
}

/// Phase polynomial and linear part of an H-free circuit.
pub fn extract(c: &Circuit) -> Result<(PhasePoly, LinearMatrix)> {
    let mut p = PhasePoly::new(c.n);
    let mut g = LinearMatrix::identity(c.n);
    for gate in &c.gates {
        match *gate {
            Gate::H(_) => return Err(Error::HadamardPresent),
            Gate::P(w, k) => p.add(g.rows[w], k as u32),
            Gate::Cz(a, b) => {
                let (ma, mb) = (g.rows[a], g.rows[b]);
                p.add(ma, 1);
                p.add(mb, 1);
                p.add(ma ^ mb, 3);
            }
            Gate::Cnot(ctl, t) => g.apply_cnot(ctl, t),
        }
    }
    Ok((p, g))
}

/// Degree reduction to masks of weight at most 2.
///
/// For weights `s` from the top down to 3, each weight-`s` term `u * [a^b^c]`
/// (a = lowest literal, b = next, c = the rest) is replaced by
/// `3u * ([a] + [b] + [c] + [a^b] + [a^c] + [b^c])`, using
/// `[a]+[b]+[c]+[a^b]+[a^c]+[b^c]+[a^b^c] = 0 mod 4`.
pub fn fold(p: &PhasePoly) -> PhasePoly {
    let mut out = p.clone();
    for s in (3..=p.max_weight()).rev() {
        let batch: Vec<(u64, u8)> = out.terms().filter(|(m, _)| m.count_ones() == s).collect();
        for (m, u) in batch {
            out.terms.remove(&m);
            let a = m & m.wrapping_neg();
            let rest = m ^ a;
            let b = rest & rest.wrapping_neg();
            let c = rest ^ b;
            let v = 3 * u as u32;
            for mask in [a, b, c, a ^ b, a ^ c, b ^ c] {
                out.add(mask, v);
            }
        }
    }
    out
}

/// Split a weight-at-most-2 polynomial into per-qubit P powers and CZ pairs:
/// `u [x_j ^ x_k]` is `P^u(j) P^u(k) CZ(j,k)` for odd `u` and `Z(j) Z(k)` for `u = 2`.
pub fn split_diagonal(p: &PhasePoly) -> Result<(Vec<u8>, Vec<(usize, usize)>)> {
    let mut powers = vec![0u8; p.n];
    let mut edges = Vec::new();
    for (m, u) in p.terms() {
        let j = m.trailing_zeros() as usize;
        match m.count_ones() {
            1 => powers[j] = (powers[j] + u) % 4,
            2 => {
                let k = (m ^ (1 << j)).trailing_zeros() as usize;
                powers[j] = (powers[j] + u) % 4;
                powers[k] = (powers[k] + u) % 4;
                if u % 2 == 1 {
                    edges.push((j, k));
                }
            }
            _ => return Err(Error::WeightTooHigh { mask: m }),
        }
    }
    Ok((powers, edges))
}

fn push_powers(c: &mut Circuit, powers: &[u8]) -> Result<()> {
    for (q, &k) in powers.iter().enumerate() {
        c.push_phase(q, k as u32)?;
    }
    Ok(())
}

fn push_edges(c: &mut Circuit, edges: &[(usize, usize)]) -> Result<()> {
    edges.iter().try_for_each(|&(a, b)| c.push(Gate::Cz(a, b)))
}

/// `-P-CZ-C-` circuit for `(p, g)`: P powers in qubit order, CZs in
/// lexicographic order, then the CNOT circuit of `g`.
pub fn synthesize_pczc(p: &PhasePoly, g: &LinearMatrix, backend: LinearBackend) -> Result<Circuit> {
    reexpress(p, g, StageOrder::Pczc, backend)
}

/// The four ways of laying out a diagonal-then-linear block.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StageOrder {
    Pczc,
    Cpcz,
    Czpc,
    Cczp,
}

impl StageOrder {
    pub const ALL: [StageOrder; 4] = [StageOrder::Pczc, StageOrder::Cpcz, StageOrder::Czpc, StageOrder::Cczp];

    pub fn linear_first(self) -> bool {
        matches!(self, StageOrder::Cpcz | StageOrder::Cczp)
    }
}

impl FromStr for StageOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<StageOrder> {
        match s.to_ascii_lowercase().as_str() {
            "pczc" => Ok(StageOrder::Pczc),
            "cpcz" => Ok(StageOrder::Cpcz),
            "czpc" => Ok(StageOrder::Czpc),
            "cczp" => Ok(StageOrder::Cczp),
            other => Err(Error::Unsupported(format!("unknown stage order `{other}`"))),
        }
    }
}

/// Diagonal over the output wires equivalent to applying `p` before `g`.
pub fn diagonal_after(p: &PhasePoly, g: &LinearMatrix) -> Result<PhasePoly> {
    Ok(fold(&p.substitute(&g.inverse()?)))
}

/// Circuit for `(p, g)` with the stages in the requested order. When the
/// linear stage comes first the polynomial is rewritten over the output-wire
/// functions through `g^-1` and folded again.
pub fn reexpress(p: &PhasePoly, g: &LinearMatrix, order: StageOrder, backend: LinearBackend) -> Result<Circuit> {
    if p.n != g.n {
        return Err(Error::DimensionMismatch(p.n, g.n));
    }
    if let Some((m, _)) = p.terms().find(|(m, _)| m.count_ones() > 2) {
        return Err(Error::WeightTooHigh { mask: m });
    }
    let q = if order.linear_first() { diagonal_after(p, g)? } else { p.clone() };
    let (powers, edges) = split_diagonal(&q)?;
    let lin = backend.synth(g)?;
    let mut c = Circuit::new(p.n);
    match order {
        StageOrder::Pczc => {
            push_powers(&mut c, &powers)?;
            push_edges(&mut c, &edges)?;
            c.extend(&lin)?;
        }
        StageOrder::Czpc => {
            push_edges(&mut c, &edges)?;
            push_powers(&mut c, &powers)?;
            c.extend(&lin)?;
        }
        StageOrder::Cpcz => {
            c.extend(&lin)?;
            push_powers(&mut c, &powers)?;
            push_edges(&mut c, &edges)?;
        }
        StageOrder::Cczp => {
            c.extend(&lin)?;
            push_edges(&mut c, &edges)?;
            push_powers(&mut c, &powers)?;
        }
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_examples() {
        assert_eq!(PhasePoly::new(3).evaluate(0b101), 0);
        let p = PhasePoly::from_terms(2, [(0b01, 1)]);
        assert_eq!(p.evaluate(0b01), 1);
        let six = PhasePoly::from_terms(3, [(1, 3), (2, 3), (4, 3), (3, 3), (5, 3), (6, 3)]);
        let one = PhasePoly::from_terms(3, [(7, 1)]);
        assert_eq!(six.evaluate(7), 1);
        assert_eq!(one.evaluate(7), 1);
    }

    #[test]
    fn extract_examples() {
        let c = Circuit::from_gates(2, [Gate::Cnot(0, 1), Gate::P(1, 1)]).unwrap();
        let (p, g) = extract(&c).unwrap();
        assert_eq!(p, PhasePoly::from_terms(2, [(0b11, 1)]));
        assert_eq!(g.rows, vec![0b01, 0b11]);

        let c = Circuit::from_gates(2, [Gate::P(0, 1), Gate::P(0, 1)]).unwrap();
        let (p, g) = extract(&c).unwrap();
        assert_eq!(p, PhasePoly::from_terms(2, [(0b01, 2)]));
        assert!(g.is_identity());

        let c = Circuit::from_gates(2, [Gate::Cz(0, 1)]).unwrap();
        assert_eq!(extract(&c).unwrap().0, PhasePoly::from_terms(2, [(1, 1), (2, 1), (3, 3)]));

        let c = Circuit::from_gates(1, [Gate::H(0)]).unwrap();
        assert_eq!(extract(&c), Err(Error::HadamardPresent));
    }

    #[test]
    fn fold_weight_three() {
        let p = PhasePoly::from_terms(3, [(0b111, 1)]);
        let want = PhasePoly::from_terms(3, [(1, 3), (2, 3), (4, 3), (3, 3), (5, 3), (6, 3)]);
        assert_eq!(fold(&p), want);
        let low = PhasePoly::from_terms(3, [(0b011, 1), (0b100, 2)]);
        assert_eq!(fold(&low), low);
    }

    #[test]
    fn fold_is_pointwise_exact_on_wide_masks() {
        let n = 16;
        let p = PhasePoly::from_terms(n, [(0xffff, 1), (0xf0f0, 3), (0x1234, 2)]);
        let f = fold(&p);
        assert!(f.max_weight() <= 2);
        for x in (0u64..1 << n).step_by(97) {
            assert_eq!(f.evaluate(x), p.evaluate(x));
        }
    }

    #[test]
    fn pczc_examples() {
        let id = LinearMatrix::identity(2);
        let p = PhasePoly::from_terms(2, [(0b11, 1)]);
        let c = synthesize_pczc(&p, &id, LinearBackend::Gauss).unwrap();
        assert_eq!(c.gates, vec![Gate::P(0, 1), Gate::P(1, 1), Gate::Cz(0, 1)]);
        let p = PhasePoly::from_terms(2, [(0b11, 2)]);
        let c = synthesize_pczc(&p, &id, LinearBackend::Gauss).unwrap();
        assert_eq!(c.gates, vec![Gate::z(0), Gate::z(1)]);
        assert!(synthesize_pczc(&PhasePoly::new(2), &id, LinearBackend::Gauss).unwrap().is_empty());
        let p = PhasePoly::from_terms(3, [(0b111, 1)]);
        assert!(matches!(
            synthesize_pczc(&p, &LinearMatrix::identity(3), LinearBackend::Gauss),
            Err(Error::WeightTooHigh { .. })
        ));
    }

    #[test]
    fn dump_round_trip() {
        let p = PhasePoly::from_terms(3, [(0b011, 1), (0b100, 2)]);
        assert_eq!(p.dump(), "1 110\n2 001\n");
        assert_eq!(p.dump().parse::<PhasePoly>().unwrap(), p);
    }
}
