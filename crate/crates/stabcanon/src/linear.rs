//! Invertible matrices over F2 and their CNOT syntheses.
//!
//! Row `i` is the mask of the linear function carried by wire `i`. A CNOT with
//! control `c` and target `t` is the row operation `row[t] ^= row[c]`.
//!
//! Text format: first line `n`, then `n` rows of `n` characters over `{0,1}`;
//! character `j` of a row is bit `j`.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearMatrix {
    pub n: usize,
    pub rows: Vec<u64>,
}

/// Which CNOT synthesis to use for a `-C-` stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LinearBackend {
    #[default]
    Gauss,
    Lnn,
}

impl LinearBackend {
    pub fn synth(self, g: &LinearMatrix) -> Result<Circuit> {
        match self {
            LinearBackend::Gauss => synth_cnot_gauss(g),
            LinearBackend::Lnn => synth_cnot_lnn(g),
        }
    }
}

/// A recorded row operation `rows[dst] ^= rows[src]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct RowOp {
    src: usize,
    dst: usize,
}

fn xor_row(rows: &mut [u64], ops: &mut Vec<RowOp>, src: usize, dst: usize) {
    rows[dst] ^= rows[src];
    ops.push(RowOp { src, dst });
}

fn reverse_bits(v: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        v.reverse_bits() >> (64 - n)
    }
}

impl LinearMatrix {
    pub fn identity(n: usize) -> LinearMatrix {
        LinearMatrix { n, rows: (0..n).map(|i| 1u64 << i).collect() }
    }

    pub fn from_rows(n: usize, rows: Vec<u64>) -> Result<LinearMatrix> {
        if rows.len() != n {
            return Err(Error::DimensionMismatch(n, rows.len()));
        }
        let m = LinearMatrix { n, rows };
        if m.rows.iter().any(|&r| r & !crate::low_mask(n) != 0) || !m.is_invertible() {
            return Err(Error::Singular);
        }
        Ok(m)
    }

    /// Wire `i` receives input `n - 1 - i`.
    pub fn reversal(n: usize) -> LinearMatrix {
        LinearMatrix { n, rows: (0..n).map(|i| 1u64 << (n - 1 - i)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r == 1 << i)
    }

    pub fn rank(&self) -> usize {
        let mut basis: Vec<u64> = Vec::new();
        for &r in &self.rows {
            let mut v = r;
            for &b in &basis {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis.push(v);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        basis.len()
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn transpose(&self) -> LinearMatrix {
        let mut rows = vec![0u64; self.n];
        for (i, &r) in self.rows.iter().enumerate() {
            for (j, out) in rows.iter_mut().enumerate() {
                *out |= ((r >> j) & 1) << i;
            }
        }
        LinearMatrix { n: self.n, rows }
    }

    /// `y_i = row_i . x` over F2.
    pub fn apply_vec(&self, x: u64) -> u64 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |y, (i, &r)| y | (((r & x).count_ones() as u64 & 1) << i))
    }

    /// XOR of the rows selected by `sel`.
    pub fn combine_rows(&self, sel: u64) -> u64 {
        let mut v = 0;
        let mut s = sel;
        while s != 0 {
            let j = s.trailing_zeros() as usize;
            v ^= self.rows[j];
            s &= s - 1;
        }
        v
    }

    pub fn inverse(&self) -> Result<LinearMatrix> {
        let ops = reduce_to_identity(&self.rows)?;
        let mut inv = LinearMatrix::identity(self.n);
        for op in ops {
            inv.rows[op.dst] ^= inv.rows[op.src];
        }
        Ok(inv)
    }

    pub fn apply_cnot(&mut self, c: usize, t: usize) {
        self.rows[t] ^= self.rows[c];
    }

    /// Linear part of an H-free circuit; diagonal gates are ignored.
    pub fn from_circuit(c: &Circuit) -> Result<LinearMatrix> {
        let mut m = LinearMatrix::identity(c.n);
        for g in &c.gates {
            match *g {
                Gate::H(_) => return Err(Error::HadamardPresent),
                Gate::Cnot(a, b) => m.apply_cnot(a, b),
                _ => {}
            }
        }
        Ok(m)
    }

    /// Relabel columns `j -> n - 1 - j`.
    pub fn reverse_columns(&self) -> LinearMatrix {
        LinearMatrix { n: self.n, rows: self.rows.iter().map(|&r| reverse_bits(r, self.n)).collect() }
    }
}

/// Matrix of applying `a` then `b`, i.e. `b * a`.
pub fn compose(a: &LinearMatrix, b: &LinearMatrix) -> Result<LinearMatrix> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    Ok(LinearMatrix { n: a.n, rows: b.rows.iter().map(|&r| a.combine_rows(r)).collect() })
}

/// Row operations taking `rows` to the identity: lower part column by column,
/// then the upper part, lowest index first.
fn reduce_to_identity(rows: &[u64]) -> Result<Vec<RowOp>> {
    let n = rows.len();
    let mut r = rows.to_vec();
    let mut ops = Vec::new();
    for c in 0..n {
        if (r[c] >> c) & 1 == 0 {
            let p = (c + 1..n).find(|&i| (r[i] >> c) & 1 == 1).ok_or(Error::Singular)?;
            xor_row(&mut r, &mut ops, p, c);
        }
        for i in c + 1..n {
            if (r[i] >> c) & 1 == 1 {
                xor_row(&mut r, &mut ops, c, i);
            }
        }
    }
    for c in 0..n {
        for i in 0..c {
            if (r[i] >> c) & 1 == 1 {
                xor_row(&mut r, &mut ops, c, i);
            }
        }
    }
    Ok(ops)
}

fn ops_to_circuit(n: usize, ops: &[RowOp]) -> Circuit {
    Circuit { n, gates: ops.iter().rev().map(|op| Gate::Cnot(op.src, op.dst)).collect() }
}

/// Gaussian elimination; at most `n^2` CNOTs, no connectivity constraint.
pub fn synth_cnot_gauss(g: &LinearMatrix) -> Result<Circuit> {
    let ops = reduce_to_identity(&g.rows)?;
    Ok(ops_to_circuit(g.n, &ops))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum BoxRule {
    /// Choose the two-CNOT box whose fill-in only touches pairs still to cross.
    Lookahead,
    /// Two-CNOT box when it clears the crossing entry, else a plain swap.
    Simple,
}

/// Swap wires `s`, `s+1` and xor the lower token into the upper one.
fn box_l(rows: &mut [u64], ops: &mut Vec<RowOp>, s: usize) {
    xor_row(rows, ops, s, s + 1);
    xor_row(rows, ops, s + 1, s);
}

/// Swap wires `s`, `s+1` and xor the upper token into the lower one.
fn box_u(rows: &mut [u64], ops: &mut Vec<RowOp>, s: usize) {
    xor_row(rows, ops, s + 1, s);
    xor_row(rows, ops, s, s + 1);
}

fn box_swap(rows: &mut [u64], ops: &mut Vec<RowOp>, s: usize) {
    xor_row(rows, ops, s + 1, s);
    xor_row(rows, ops, s, s + 1);
    xor_row(rows, ops, s + 1, s);
}

fn is_northwest(rows: &[u64]) -> bool {
    let n = rows.len();
    rows.iter().enumerate().all(|(i, &r)| r >> (n - 1 - i) == 1)
}

/// First half: bring the matrix to northwest-triangular form
/// (`row i` has leading bit `n-1-i`) with `n` rounds of odd-even transposition.
///
/// Work happens on the column-reversed matrix `M'`. A Bruhat-style
/// elimination assigns each row a destination wire; tokens are sorted to their
/// destinations and every crossing is a box of two CNOTs that also adds one
/// token into the other. `x[d]` tracks token `d` in a fixed echelon basis and
/// `pending[d]` holds the destinations token `d` has yet to cross.
fn to_northwest(rows: &mut [u64], ops: &mut Vec<RowOp>, rule: BoxRule) -> Result<()> {
    let n = rows.len();
    let mp: Vec<u64> = rows.iter().map(|&r| reverse_bits(r, n)).collect();
    let mut y = mp.clone();
    let mut by_low: Vec<Option<usize>> = vec![None; n];
    for i in (0..n).rev() {
        loop {
            if y[i] == 0 {
                return Err(Error::Singular);
            }
            let l = y[i].trailing_zeros() as usize;
            match by_low[l] {
                Some(j) => y[i] ^= y[j],
                None => {
                    by_low[l] = Some(i);
                    break;
                }
            }
        }
    }
    let sig: Vec<usize> = y.iter().map(|v| v.trailing_zeros() as usize).collect();
    let basis: Vec<u64> = by_low.iter().map(|j| y[j.expect("full rank")]).collect();
    let coeffs = |mut v: u64| {
        let mut c = 0u64;
        while v != 0 {
            let b = v.trailing_zeros() as usize;
            c |= 1 << b;
            v ^= basis[b];
        }
        c
    };
    let mut x = vec![0u64; n];
    for i in 0..n {
        x[sig[i]] = coeffs(mp[i]);
    }
    let mut pending = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            if sig[i] > sig[j] {
                pending[sig[i]] |= 1 << sig[j];
            }
        }
    }
    let mut key = sig;
    for round in 0..n {
        for s in (round % 2..n.saturating_sub(1)).step_by(2) {
            let (a, b) = (key[s], key[s + 1]);
            if a < b {
                continue;
            }
            pending[a] &= !(1 << b);
            let a_has_b = (x[a] >> b) & 1 == 1;
            let choice = match rule {
                BoxRule::Lookahead => {
                    let fill_l = (x[a] ^ x[b]) & ((1 << a) - 1);
                    let fill_u = (x[b] ^ x[a]) & ((1 << b) - 1);
                    let ok_u = fill_u & !pending[b] == 0 && !a_has_b;
                    let ok_l = fill_l & !pending[a] == 0;
                    if ok_u {
                        'U'
                    } else if ok_l || a_has_b {
                        'L'
                    } else {
                        'S'
                    }
                }
                BoxRule::Simple => {
                    if a_has_b {
                        'L'
                    } else {
                        'S'
                    }
                }
            };
            match choice {
                'U' => {
                    box_u(rows, ops, s);
                    x[b] ^= x[a];
                }
                'L' => {
                    box_l(rows, ops, s);
                    x[a] ^= x[b];
                }
                _ => box_swap(rows, ops, s),
            }
            key.swap(s, s + 1);
        }
    }
    Ok(())
}

/// Second half: northwest-triangular to identity along a full reversal
/// network. The upper token at a crossing absorbs the lower one exactly when it
/// still carries the lower token's leading bit.
fn northwest_to_identity(rows: &mut [u64], ops: &mut Vec<RowOp>) {
    let n = rows.len();
    let mut key: Vec<usize> = (0..n).map(|i| n - 1 - i).collect();
    for round in 0..n {
        for s in (round % 2..n.saturating_sub(1)).step_by(2) {
            let (a, b) = (key[s], key[s + 1]);
            if a < b {
                continue;
            }
            if (rows[s] >> b) & 1 == 1 {
                box_l(rows, ops, s);
            } else {
                box_swap(rows, ops, s);
            }
            key.swap(s, s + 1);
        }
    }
}

/// LNN CNOT synthesis of two-qubit depth at most `5n`: at most `2n` layers to
/// reach northwest-triangular form and at most `3n` to finish.
pub fn synth_cnot_lnn(g: &LinearMatrix) -> Result<Circuit> {
    if !g.is_invertible() {
        return Err(Error::Singular);
    }
    let n = g.n;
    if g.is_identity() {
        return Ok(Circuit::new(n));
    }
    if *g == LinearMatrix::reversal(n) {
        return Ok(crate::czsynth::reversal_network(n));
    }
    let mut ops = Vec::new();
    let mut rows = g.rows.clone();
    if !is_northwest(&rows) {
        to_northwest(&mut rows, &mut ops, BoxRule::Lookahead)?;
    }
    if !is_northwest(&rows) {
        ops.clear();
        rows = g.rows.clone();
        to_northwest(&mut rows, &mut ops, BoxRule::Simple)?;
        if !is_northwest(&rows) {
            return Err(Error::Internal("LNN synthesis missed northwest form".into()));
        }
    }
    northwest_to_identity(&mut rows, &mut ops);
    if !rows.iter().enumerate().all(|(i, &r)| r == 1 << i) {
        return Err(Error::Internal("LNN synthesis did not reach the identity".into()));
    }
    Ok(ops_to_circuit(n, &ops))
}

impl FromStr for LinearMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<LinearMatrix> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, head) = lines.next().ok_or(Error::Parse { line: 1, msg: "empty matrix".into() })?;
        let n: usize = head
            .parse()
            .map_err(|_| Error::Parse { line, msg: format!("bad size `{head}`") })?;
        if n > crate::MAX_QUBITS {
            return Err(Error::Parse { line, msg: format!("at most 64 rows, got {n}") });
        }
        let mut rows = Vec::with_capacity(n);
        for (line, text) in lines {
            if text.len() != n {
                return Err(Error::Parse { line, msg: format!("expected {n} columns") });
            }
            let mut r = 0u64;
            for (j, ch) in text.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => r |= 1 << j,
                    _ => return Err(Error::Parse { line, msg: format!("bad character `{ch}`") }),
                }
            }
            rows.push(r);
        }
        if rows.len() != n {
            return Err(Error::Parse { line: s.lines().count(), msg: format!("expected {n} rows") });
        }
        LinearMatrix::from_rows(n, rows)
    }
}

impl LinearMatrix {
    /// Rows as `{0,1}` strings, bit 0 first.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|&r| (0..self.n).map(|j| if (r >> j) & 1 == 1 { '1' } else { '0' }).collect())
            .collect()
    }
}

impl fmt::Display for LinearMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for r in self.row_strings() {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{two_qubit_depth, validate_layout, Layout};

    #[test]
    fn compose_basics() {
        let mut c = LinearMatrix::identity(3);
        c.apply_cnot(0, 1);
        assert_eq!(compose(&c, &c).unwrap(), LinearMatrix::identity(3));
        assert_eq!(compose(&LinearMatrix::identity(3), &c).unwrap(), c);
        let g = LinearMatrix::from_rows(3, vec![0b011, 0b110, 0b100]).unwrap();
        assert!(compose(&g, &g.inverse().unwrap()).unwrap().is_identity());
        assert!(compose(&g, &LinearMatrix::identity(2)).is_err());
    }

    #[test]
    fn gauss_small_cases() {
        assert!(synth_cnot_gauss(&LinearMatrix::identity(4)).unwrap().is_empty());
        let swap = LinearMatrix::reversal(2);
        let c = synth_cnot_gauss(&swap).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(LinearMatrix::from_circuit(&c).unwrap(), swap);
        assert_eq!(
            synth_cnot_gauss(&LinearMatrix { n: 2, rows: vec![1, 1] }),
            Err(Error::Singular)
        );
    }

    #[test]
    fn lnn_reversal_and_identity() {
        assert!(synth_cnot_lnn(&LinearMatrix::identity(5)).unwrap().is_empty());
        for n in 1..12 {
            let r = LinearMatrix::reversal(n);
            let c = synth_cnot_lnn(&r).unwrap();
            assert_eq!(LinearMatrix::from_circuit(&c).unwrap(), r);
            assert!(validate_layout(&c, Layout::Lnn));
            assert!(two_qubit_depth(&c) <= 5 * n);
        }
    }

    #[test]
    fn text_round_trip() {
        let g = LinearMatrix::from_rows(3, vec![0b011, 0b110, 0b100]).unwrap();
        assert_eq!(g.to_string(), "3\n110\n011\n001\n");
        assert_eq!(g.to_string().parse::<LinearMatrix>().unwrap(), g);
        assert!("2\n11\n11\n".parse::<LinearMatrix>().is_err());
        assert!(matches!("2\n10\n0x\n".parse::<LinearMatrix>(), Err(Error::Parse { line: 3, .. })));
    }
}
