//! Clifford tableaus: the images of the Pauli generators under conjugation.
//!
//! A Pauli operator is stored as `i^phase * prod_q X_q^{x_q} Z_q^{z_q}`, with X
//! written before Z on each qubit. Under this convention `Y = i X Z`, so a
//! Hermitian operator has `phase + popcount(x & z)` even.

use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PauliTerm {
    pub x: u64,
    pub z: u64,
    pub phase: u8,
}

#[inline]
fn bit(v: u64, q: usize) -> u64 {
    (v >> q) & 1
}

impl PauliTerm {
    pub fn x_gen(q: usize) -> PauliTerm {
        PauliTerm { x: 1 << q, z: 0, phase: 0 }
    }

    pub fn z_gen(q: usize) -> PauliTerm {
        PauliTerm { x: 0, z: 1 << q, phase: 0 }
    }

    /// Operator product `self * other`.
    pub fn mul(&self, other: &PauliTerm) -> PauliTerm {
        let swaps = (self.z & other.x).count_ones() as u8;
        PauliTerm {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * swaps) % 4,
        }
    }

    pub fn is_hermitian(&self) -> bool {
        (self.phase as u32 + (self.x & self.z).count_ones()).is_multiple_of(2)
    }

    /// True iff the two operators anticommute.
    pub fn anticommutes(&self, other: &PauliTerm) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 1
    }

    /// Replace the operator `Q` by `g Q g^dagger`.
    pub fn conjugate(&mut self, g: Gate) {
        match g {
            Gate::H(q) => {
                let (x, z) = (bit(self.x, q), bit(self.z, q));
                self.phase = (self.phase + 2 * (x & z) as u8) % 4;
                self.x = (self.x & !(1 << q)) | (z << q);
                self.z = (self.z & !(1 << q)) | (x << q);
            }
            Gate::P(q, k) => {
                for _ in 0..k {
                    let x = bit(self.x, q);
                    self.phase = (self.phase + x as u8) % 4;
                    self.z ^= x << q;
                }
            }
            Gate::Cnot(c, t) => {
                self.x ^= bit(self.x, c) << t;
                self.z ^= bit(self.z, t) << c;
            }
            Gate::Cz(a, b) => {
                let (xa, xb) = (bit(self.x, a), bit(self.x, b));
                self.phase = (self.phase + 2 * (xa & xb) as u8) % 4;
                self.z ^= (xb << a) | (xa << b);
            }
        }
    }

    /// `+XYZI`-style text; the sign is `i^(phase - #Y)`.
    pub fn dump(&self, n: usize) -> String {
        let ys = (self.x & self.z).count_ones() as i32;
        let sign = (self.phase as i32 - ys).rem_euclid(4);
        let mut s = String::from(["+", "+i", "-", "-i"][sign as usize]);
        for q in 0..n {
            s.push(match (bit(self.x, q), bit(self.z, q)) {
                (0, 0) => 'I',
                (1, 0) => 'X',
                (1, 1) => 'Y',
                _ => 'Z',
            });
        }
        s
    }
}

/// Images `U X_j U^dagger` (`xs`) and `U Z_j U^dagger` (`zs`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tableau {
    pub n: usize,
    pub xs: Vec<PauliTerm>,
    pub zs: Vec<PauliTerm>,
}

impl Tableau {
    pub fn identity(n: usize) -> Tableau {
        Tableau {
            n,
            xs: (0..n).map(PauliTerm::x_gen).collect(),
            zs: (0..n).map(PauliTerm::z_gen).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Tableau::identity(self.n)
    }

    fn check_gate(&self, g: Gate) -> Result<()> {
        let q = g.max_qubit();
        if q >= self.n {
            return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
        }
        Ok(())
    }

    /// In-place version of [`apply_gate`].
    pub fn apply(&mut self, g: Gate) -> Result<()> {
        self.check_gate(g)?;
        for p in self.xs.iter_mut().chain(self.zs.iter_mut()) {
            p.conjugate(g);
        }
        Ok(())
    }

    pub fn apply_circuit(&mut self, c: &Circuit) -> Result<()> {
        if c.n != self.n {
            return Err(Error::DimensionMismatch(self.n, c.n));
        }
        c.gates.iter().try_for_each(|&g| self.apply(g))
    }

    /// Conjugate an arbitrary Pauli operator by this Clifford.
    pub fn image_of(&self, p: &PauliTerm) -> PauliTerm {
        let mut out = PauliTerm { x: 0, z: 0, phase: p.phase };
        for q in 0..self.n {
            if bit(p.x, q) == 1 {
                out = out.mul(&self.xs[q]);
            }
            if bit(p.z, q) == 1 {
                out = out.mul(&self.zs[q]);
            }
        }
        out
    }

    /// Tableau of `self` followed by `second`.
    pub fn then(&self, second: &Tableau) -> Result<Tableau> {
        if self.n != second.n {
            return Err(Error::DimensionMismatch(self.n, second.n));
        }
        Ok(Tableau {
            n: self.n,
            xs: self.xs.iter().map(|p| second.image_of(p)).collect(),
            zs: self.zs.iter().map(|p| second.image_of(p)).collect(),
        })
    }

    pub fn inverse(&self) -> Tableau {
        let n = self.n;
        let pre = |g: &PauliTerm| {
            let mut p = PauliTerm::default();
            for q in 0..n {
                if g.anticommutes(&self.zs[q]) {
                    p.x |= 1 << q;
                }
                if g.anticommutes(&self.xs[q]) {
                    p.z |= 1 << q;
                }
            }
            let r = self.image_of(&p).phase;
            p.phase = (4 - r) % 4;
            p
        };
        Tableau {
            n,
            xs: (0..n).map(|q| pre(&PauliTerm::x_gen(q))).collect(),
            zs: (0..n).map(|q| pre(&PauliTerm::z_gen(q))).collect(),
        }
    }

    /// Checks the symplectic form: images commute exactly as the generators do.
    pub fn is_symplectic(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                if self.xs[i].anticommutes(&self.xs[j]) || self.zs[i].anticommutes(&self.zs[j]) {
                    return false;
                }
                if self.xs[i].anticommutes(&self.zs[j]) != (i == j) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_hermitian(&self) -> bool {
        self.xs.iter().chain(&self.zs).all(PauliTerm::is_hermitian)
    }

    /// The phase-free part: image bit-vectors in generator order.
    pub fn symplectic_part(&self) -> Vec<(u64, u64)> {
        self.xs.iter().chain(&self.zs).map(|p| (p.x, p.z)).collect()
    }

    /// `2n` lines in X-then-Z generator order.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for p in self.xs.iter().chain(&self.zs) {
            s.push_str(&p.dump(self.n));
            s.push('\n');
        }
        s
    }
}

pub fn apply_gate(t: &Tableau, g: Gate) -> Result<Tableau> {
    let mut out = t.clone();
    out.apply(g)?;
    Ok(out)
}

pub fn circuit_to_tableau(c: &Circuit) -> Result<Tableau> {
    let mut t = Tableau::identity(c.n);
    t.apply_circuit(c)?;
    Ok(t)
}

pub fn tableau_equal(a: &Tableau, b: &Tableau) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch(a.n, b.n));
    }
    Ok(a == b)
}

/// Random word of `len` gates over {H, P, CNOT, CZ}.
pub fn random_circuit<R: Rng>(n: usize, len: usize, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..len {
        let kind = if n == 1 { rng.gen_range(0..2) } else { rng.gen_range(0..4) };
        let a = rng.gen_range(0..n);
        let g = match kind {
            0 => Gate::H(a),
            1 => Gate::P(a, 1),
            _ => {
                let mut b = rng.gen_range(0..n - 1);
                if b >= a {
                    b += 1;
                }
                if kind == 2 {
                    Gate::Cnot(a, b)
                } else {
                    Gate::Cz(a, b)
                }
            }
        };
        c.gates.push(g);
    }
    c
}

/// The word behind [`random_clifford`]: `10 n^2` random generators.
pub fn random_clifford_circuit(n: usize, seed: u64) -> Result<Circuit> {
    if n == 0 || n > crate::MAX_QUBITS {
        return Err(Error::UnsupportedSize(n, crate::MAX_QUBITS));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    Ok(random_circuit(n, 10 * n * n, &mut rng))
}

/// Deterministic in `seed`. Not uniform, but every Clifford has nonzero probability.
pub fn random_clifford(n: usize, seed: u64) -> Result<Tableau> {
    circuit_to_tableau(&random_clifford_circuit(n, seed)?)
}

/// `|Sp(2n, F2)| = 2^(n^2) * prod_{j=1..n} (4^j - 1)`.
pub fn symplectic_order(n: usize) -> BigUint {
    let mut acc = BigUint::from(1u32) << (n * n);
    for j in 1..=n {
        acc *= (BigUint::from(1u32) << (2 * j)) - 1u32;
    }
    acc
}
