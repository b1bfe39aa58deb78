//! Independent ground truth: dense unitaries and exhaustive breadth-first search.
//!
//! Cost model for every search: two-qubit gates cost 1, single-qubit gates 0.

use std::collections::{HashSet, VecDeque};
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::circuit::{Circuit, Gate};
use crate::czsynth::{pair_index, synth_cz_optimized, CzLayer};
use crate::error::{Error, Result};
use crate::linear::LinearMatrix;
use crate::phasepoly::PhasePoly;
use crate::tableau::Tableau;

pub const DENSE_MAX_N: usize = 10;

/// `2^n x 2^n` matrix, column-major. Basis index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseUnitary {
    pub n: usize,
    data: Vec<Complex64>,
}

fn i_pow(k: u32) -> Complex64 {
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0), Complex64::new(0.0, -1.0)]
        [(k % 4) as usize]
}

fn apply_to_vector(psi: &mut [Complex64], g: Gate) {
    match g {
        Gate::H(q) => {
            let s = std::f64::consts::FRAC_1_SQRT_2;
            let bit = 1 << q;
            for i in 0..psi.len() {
                if i & bit == 0 {
                    let (a, b) = (psi[i], psi[i | bit]);
                    psi[i] = (a + b) * s;
                    psi[i | bit] = (a - b) * s;
                }
            }
        }
        Gate::P(q, k) => {
            let f = i_pow(k as u32);
            for (i, v) in psi.iter_mut().enumerate() {
                if (i >> q) & 1 == 1 {
                    *v *= f;
                }
            }
        }
        Gate::Cnot(c, t) => {
            for i in 0..psi.len() {
                if (i >> c) & 1 == 1 && (i >> t) & 1 == 0 {
                    psi.swap(i, i | 1 << t);
                }
            }
        }
        Gate::Cz(a, b) => {
            for (i, v) in psi.iter_mut().enumerate() {
                if (i >> a) & 1 == 1 && (i >> b) & 1 == 1 {
                    *v = -*v;
                }
            }
        }
    }
}

impl DenseUnitary {
    pub fn identity(n: usize) -> Result<DenseUnitary> {
        if n > DENSE_MAX_N {
            return Err(Error::UnsupportedSize(n, DENSE_MAX_N));
        }
        let dim = 1 << n;
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(DenseUnitary { n, data })
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// Entry `<row| U |col>`.
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[col * self.dim() + row]
    }

    pub fn apply_gate(&mut self, g: Gate) {
        let dim = self.dim();
        for col in self.data.chunks_mut(dim) {
            apply_to_vector(col, g);
        }
    }

    /// `|x> -> i^p(x) |g x>`.
    pub fn from_phase_poly(p: &PhasePoly, g: &LinearMatrix) -> Result<DenseUnitary> {
        if p.n != g.n {
            return Err(Error::DimensionMismatch(p.n, g.n));
        }
        let mut u = DenseUnitary::identity(p.n)?;
        let dim = u.dim();
        u.data.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for x in 0..dim {
            u.data[x * dim + g.apply_vec(x as u64) as usize] = i_pow(p.evaluate(x as u64) as u32);
        }
        Ok(u)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                let dot: Complex64 = (0..dim).map(|r| self.get(r, a).conj() * self.get(r, b)).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                if (dot - want).norm() > tol {
                    return false;
                }
            }
        }
        true
    }
}

pub fn dense_unitary(c: &Circuit) -> Result<DenseUnitary> {
    let mut u = DenseUnitary::identity(c.n)?;
    c.validate()?;
    for &g in &c.gates {
        u.apply_gate(g);
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseMode {
    Exact,
    UpToGlobalPhase,
}

pub const UNITARY_TOL: f64 = 1e-6;

pub fn unitary_equal(u: &DenseUnitary, v: &DenseUnitary, mode: PhaseMode) -> Result<bool> {
    if u.n != v.n {
        return Err(Error::DimensionMismatch(u.n, v.n));
    }
    let scale = match mode {
        PhaseMode::Exact => Complex64::new(1.0, 0.0),
        PhaseMode::UpToGlobalPhase => {
            let Some(k) = u.data.iter().position(|z| z.norm() > UNITARY_TOL) else {
                return Ok(v.data.iter().all(|z| z.norm() < UNITARY_TOL));
            };
            if v.data[k].norm() < UNITARY_TOL {
                return Ok(false);
            }
            let r = v.data[k] / u.data[k];
            r / r.norm()
        }
    };
    Ok(u.data.iter().zip(&v.data).all(|(a, b)| (a * scale - b).norm() < UNITARY_TOL))
}

// ---------------------------------------------------------------------------
// Breadth-first search.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateSet {
    CzOnly,
    CnotOnly,
    /// {P, CZ, CNOT}.
    Mixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetGroup {
    /// Keys are edge masks in [`pair_index`] order.
    CzLayers,
    /// Keys are matrices packed row-major, `n` bits per row.
    Linear,
}

pub const UNREACHED: u8 = u8::MAX;

/// Optimal two-qubit counts for every element of a target group.
#[derive(Debug, Clone)]
pub struct BfsResult {
    pub label: String,
    pub n: usize,
    /// Indexed by element key; [`UNREACHED`] marks keys that are not elements.
    pub dist: Vec<u8>,
}

impl BfsResult {
    pub fn cost(&self, key: usize) -> Option<u8> {
        self.dist.get(key).copied().filter(|&d| d != UNREACHED)
    }

    pub fn worst(&self) -> u8 {
        self.dist.iter().copied().filter(|&d| d != UNREACHED).max().unwrap_or(0)
    }

    pub fn reached(&self) -> usize {
        self.dist.iter().filter(|&&d| d != UNREACHED).count()
    }
}

pub const CZ_BFS_MAX_N: usize = 7;
pub const CNOT_BFS_MAX_N: usize = 5;
pub const MIXED_BFS_MAX_N: usize = 3;

pub fn pack_matrix(m: &LinearMatrix) -> usize {
    m.rows.iter().enumerate().fold(0, |acc, (i, &r)| acc | (r as usize) << (i * m.n))
}

pub fn unpack_matrix(n: usize, key: usize) -> LinearMatrix {
    LinearMatrix { n, rows: (0..n).map(|i| ((key >> (i * n)) & ((1 << n) - 1)) as u64).collect() }
}

fn cnot_on_packed(key: usize, n: usize, c: usize, t: usize) -> usize {
    let row_c = (key >> (c * n)) & ((1 << n) - 1);
    key ^ (row_c << (t * n))
}

fn check_size(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(Error::UnsupportedSize(n, max));
    }
    Ok(())
}

fn bfs_cz_only(n: usize) -> Result<BfsResult> {
    check_size(n, CZ_BFS_MAX_N)?;
    let pairs = n * (n - 1) / 2;
    let mut dist = vec![UNREACHED; 1 << pairs];
    let mut queue = VecDeque::from([0usize]);
    dist[0] = 0;
    while let Some(s) = queue.pop_front() {
        for p in 0..pairs {
            let t = s ^ (1 << p);
            if dist[t] == UNREACHED {
                dist[t] = dist[s] + 1;
                queue.push_back(t);
            }
        }
    }
    Ok(BfsResult { label: "CZ layers over {CZ}".into(), n, dist })
}

fn bfs_cnot_only(n: usize) -> Result<BfsResult> {
    check_size(n, CNOT_BFS_MAX_N)?;
    let mut dist = vec![UNREACHED; 1 << (n * n)];
    let start = pack_matrix(&LinearMatrix::identity(n));
    dist[start] = 0;
    let mut frontier = vec![start];
    let mut d = 0u8;
    while !frontier.is_empty() {
        d += 1;
        let mut next = Vec::new();
        for &s in &frontier {
            for c in 0..n {
                for t in 0..n {
                    if c != t {
                        let k = cnot_on_packed(s, n, c, t);
                        if dist[k] == UNREACHED {
                            dist[k] = d;
                            next.push(k);
                        }
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(BfsResult { label: "-C- over {CNOT}".into(), n, dist })
}

/// The full {P, CZ, CNOT} group for `n <= 3`. An element is keyed by its
/// phase function `x -> p(x) mod 4` on nonzero `x` (2 bits each) and its
/// matrix, which is exact: coefficient vectors are not unique but functions are.
struct MixedSpace {
    n: usize,
    table_bits: usize,
}

impl MixedSpace {
    fn key(&self, table: usize, g: usize) -> usize {
        table | g << self.table_bits
    }

    fn split(&self, key: usize) -> (usize, usize) {
        (key & ((1 << self.table_bits) - 1), key >> self.table_bits)
    }

    fn add_fn(&self, table: usize, f: impl Fn(usize) -> usize) -> usize {
        let mut out = 0;
        for x in 1..1usize << self.n {
            let v = ((table >> (2 * (x - 1))) & 3) + f(x);
            out |= (v % 4) << (2 * (x - 1));
        }
        out
    }

    fn row(&self, g: usize, w: usize) -> usize {
        (g >> (w * self.n)) & ((1 << self.n) - 1)
    }
}

fn parity(v: usize) -> usize {
    v.count_ones() as usize & 1
}

fn bfs_mixed_full(n: usize) -> Result<(MixedSpace, Vec<u8>)> {
    check_size(n, MIXED_BFS_MAX_N)?;
    let sp = MixedSpace { n, table_bits: 2 * ((1 << n) - 1) };
    let mut dist = vec![UNREACHED; 1 << (sp.table_bits + n * n)];
    let start = sp.key(0, pack_matrix(&LinearMatrix::identity(n)));
    dist[start] = 0;
    // 0-1 BFS: phase gates cost nothing.
    let mut dq = VecDeque::from([start]);
    while let Some(s) = dq.pop_front() {
        let d = dist[s];
        let (table, g) = sp.split(s);
        for w in 0..n {
            let fw = sp.row(g, w);
            let k = sp.key(sp.add_fn(table, |x| parity(fw & x)), g);
            if dist[k] > d {
                dist[k] = d;
                dq.push_front(k);
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let mut succ = vec![sp.key(table, cnot_on_packed(g, n, a, b))];
                if a < b {
                    let (fa, fb) = (sp.row(g, a), sp.row(g, b));
                    succ.push(sp.key(sp.add_fn(table, |x| 2 * (parity(fa & x) & parity(fb & x))), g));
                }
                for k in succ {
                    if dist[k] > d + 1 {
                        dist[k] = d + 1;
                        dq.push_back(k);
                    }
                }
            }
        }
    }
    Ok((sp, dist))
}

/// Exact optimal counts by breadth-first closure from the identity.
pub fn bfs_optimal(n: usize, set: GateSet, target: TargetGroup) -> Result<BfsResult> {
    match (set, target) {
        (GateSet::CzOnly, TargetGroup::CzLayers) => bfs_cz_only(n),
        (GateSet::CnotOnly, TargetGroup::Linear) => bfs_cnot_only(n),
        (GateSet::Mixed, _) => {
            let (sp, full) = bfs_mixed_full(n)?;
            let id = pack_matrix(&LinearMatrix::identity(n));
            match target {
                TargetGroup::CzLayers => {
                    let pairs = n * (n - 1) / 2;
                    let mut dist = vec![UNREACHED; 1 << pairs];
                    for (mask, slot) in dist.iter_mut().enumerate() {
                        let edges: Vec<(usize, usize)> = (0..n)
                            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                            .filter(|&(a, b)| (mask >> pair_index(n, a, b)) & 1 == 1)
                            .collect();
                        let table = sp.add_fn(0, |x| {
                            2 * edges.iter().map(|&(a, b)| (x >> a) & (x >> b) & 1).sum::<usize>()
                        });
                        *slot = full[sp.key(table, id)];
                    }
                    Ok(BfsResult { label: "CZ layers over {P,CZ,CNOT}".into(), n, dist })
                }
                TargetGroup::Linear => {
                    let dist = (0..1usize << (n * n)).map(|g| full[sp.key(0, g)]).collect();
                    Ok(BfsResult { label: "-C- over {P,CZ,CNOT}".into(), n, dist })
                }
            }
        }
        _ => Err(Error::Unsupported(format!("{set:?} does not generate {target:?}"))),
    }
}

/// Number of distinct symplectic parts reachable from the identity under
/// {H, P, CNOT}; equals `|Sp(2n, F2)|`.
pub fn symplectic_closure(n: usize) -> Result<usize> {
    check_size(n, 3)?;
    let mut gens: Vec<Gate> = (0..n).flat_map(|q| [Gate::H(q), Gate::P(q, 1)]).collect();
    for c in 0..n {
        for t in 0..n {
            if c != t {
                gens.push(Gate::Cnot(c, t));
            }
        }
    }
    let pack = |t: &Tableau| {
        t.symplectic_part().iter().fold(0u64, |acc, &(x, z)| (acc << (2 * n)) | x | z << n)
    };
    let id = Tableau::identity(n);
    let mut seen = HashSet::from([pack(&id)]);
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for t in &frontier {
            for &g in &gens {
                let mut u = t.clone();
                u.apply(g)?;
                if seen.insert(pack(&u)) {
                    next.push(u);
                }
            }
        }
        frontier = next;
    }
    Ok(seen.len())
}

// ---------------------------------------------------------------------------
// Gate-count table.
// ---------------------------------------------------------------------------

/// A reproduced value and whether it is an exact optimum or an upper bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Entry {
    pub value: u8,
    pub exact: bool,
}

impl std::fmt::Display for Entry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exact {
            write!(f, "{}", self.value)
        } else {
            write!(f, "<={}", self.value)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1Row {
    pub n: usize,
    pub cz_czonly: Entry,
    pub cz_mixed: Entry,
    pub c_cnotonly: Entry,
    pub c_mixed: Entry,
}

/// Published worst-case counts, columns as in [`Table1Row`].
pub const PUBLISHED: [(usize, [u8; 4]); 4] =
    [(2, [1, 1, 3, 3]), (3, [3, 3, 6, 6]), (4, [6, 5, 9, 9]), (5, [10, 7, 12, 12])];

pub fn published_row(n: usize) -> Option<[u8; 4]> {
    PUBLISHED.iter().find(|(m, _)| *m == n).map(|(_, v)| *v)
}

/// Worst case of [`synth_cz_optimized`] over every layer on `n` qubits.
pub fn cz_optimized_worst(n: usize) -> u8 {
    let pairs = n * (n - 1) / 2;
    (0..1u64 << pairs)
        .map(|m| synth_cz_optimized(&CzLayer::from_mask(n, m)).two_qubit_count() as u8)
        .max()
        .unwrap_or(0)
}

fn table1_row(n: usize) -> Result<Table1Row> {
    let cz_czonly = Entry { value: bfs_optimal(n, GateSet::CzOnly, TargetGroup::CzLayers)?.worst(), exact: true };
    let cnot = bfs_optimal(n, GateSet::CnotOnly, TargetGroup::Linear)?.worst();
    let c_cnotonly = Entry { value: cnot, exact: true };
    let (cz_mixed, c_mixed) = if n <= MIXED_BFS_MAX_N {
        (
            Entry { value: bfs_optimal(n, GateSet::Mixed, TargetGroup::CzLayers)?.worst(), exact: true },
            Entry { value: bfs_optimal(n, GateSet::Mixed, TargetGroup::Linear)?.worst(), exact: true },
        )
    } else {
        // Any {CNOT} circuit is a {P,CZ,CNOT} circuit, so the {CNOT} optimum bounds the -C- column.
        (Entry { value: cz_optimized_worst(n), exact: false }, Entry { value: cnot, exact: false })
    };
    Ok(Table1Row { n, cz_czonly, cz_mixed, c_cnotonly, c_mixed })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table1 {
    pub rows: Vec<Table1Row>,
}

/// Rows `n = 2..=max_n` (`max_n <= 5`), computed on up to `threads` threads.
pub fn table1_report(max_n: usize, threads: usize) -> Result<Table1> {
    if !(2..=CNOT_BFS_MAX_N).contains(&max_n) {
        return Err(Error::UnsupportedSize(max_n, CNOT_BFS_MAX_N));
    }
    let ns: Vec<usize> = (2..=max_n).collect();
    let rows = if threads <= 1 {
        ns.iter().map(|&n| table1_row(n)).collect::<Result<Vec<_>>>()?
    } else {
        let mut out = Vec::new();
        for chunk in ns.chunks(threads) {
            let part: Vec<Result<Table1Row>> = std::thread::scope(|s| {
                let hs: Vec<_> = chunk.iter().map(|&n| s.spawn(move || table1_row(n))).collect();
                hs.into_iter().map(|h| h.join().expect("table worker panicked")).collect()
            });
            for r in part {
                out.push(r?);
            }
        }
        out
    };
    Ok(Table1 { rows })
}

impl Table1 {
    /// Disagreements with the published numbers: exact entries must match,
    /// upper bounds must not exceed them.
    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        let names = ["cz_czonly", "cz_mixed", "c_cnotonly", "c_mixed"];
        for r in &self.rows {
            let Some(want) = published_row(r.n) else { continue };
            let got = [r.cz_czonly, r.cz_mixed, r.c_cnotonly, r.c_mixed];
            for ((e, w), name) in got.iter().zip(want).zip(names) {
                let ok = if e.exact { e.value == w } else { e.value <= w };
                if !ok {
                    out.push(format!("n={} {name}: got {e}, published {w}", r.n));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,cz_czonly,cz_mixed,c_cnotonly,c_mixed\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.n, r.cz_czonly.value, r.cz_mixed.value, r.c_cnotonly.value, r.c_mixed.value
            );
        }
        s
    }

    pub fn to_ascii(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:>3} | {:>10} | {:>10} | {:>10} | {:>10}", "n", "-CZ- {CZ}", "-CZ- mixed", "-C- {CNOT}", "-C- mixed");
        let _ = writeln!(s, "{}", "-".repeat(57));
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>3} | {:>10} | {:>10} | {:>10} | {:>10}",
                r.n,
                r.cz_czonly.to_string(),
                r.cz_mixed.to_string(),
                r.c_cnotonly.to_string(),
                r.c_mixed.to_string()
            );
        }
        let _ = writeln!(s, "mixed = {{P,CZ,CNOT}}; counts are two-qubit gates, P gates free; <= marks an upper bound");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hadamard_matrix() {
        let u = dense_unitary(&Circuit::from_gates(1, [Gate::H(0)]).unwrap()).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((u.get(0, 0).re - s).abs() < 1e-12 && (u.get(1, 1).re + s).abs() < 1e-12);
        assert!((u.get(0, 1).re - s).abs() < 1e-12 && (u.get(1, 0).re - s).abs() < 1e-12);
    }

    #[test]
    fn z_is_p_squared() {
        let u = dense_unitary(&Circuit::from_gates(1, [Gate::P(0, 1), Gate::P(0, 1)]).unwrap()).unwrap();
        assert_eq!(u.get(0, 0), Complex64::new(1.0, 0.0));
        assert_eq!(u.get(1, 1), Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn global_phase_modes() {
        let u = dense_unitary(&Circuit::from_gates(2, [Gate::H(0), Gate::Cnot(0, 1)]).unwrap()).unwrap();
        let mut v = u.clone();
        v.data.iter_mut().for_each(|z| *z *= Complex64::new(0.0, 1.0));
        assert!(unitary_equal(&u, &u, PhaseMode::Exact).unwrap());
        assert!(!unitary_equal(&u, &v, PhaseMode::Exact).unwrap());
        assert!(unitary_equal(&u, &v, PhaseMode::UpToGlobalPhase).unwrap());
        assert!(u.is_unitary(1e-9));
    }

    #[test]
    fn small_bfs_values() {
        assert_eq!(bfs_optimal(3, GateSet::CzOnly, TargetGroup::CzLayers).unwrap().worst(), 3);
        assert_eq!(bfs_optimal(2, GateSet::CnotOnly, TargetGroup::Linear).unwrap().worst(), 3);
        let r = bfs_optimal(3, GateSet::CnotOnly, TargetGroup::Linear).unwrap();
        assert_eq!((r.worst(), r.reached()), (6, 168));
        assert!(bfs_optimal(9, GateSet::CzOnly, TargetGroup::CzLayers).is_err());
        assert!(bfs_optimal(2, GateSet::CzOnly, TargetGroup::Linear).is_err());
    }

    #[test]
    fn mixed_group_size_n2() {
        let (sp, dist) = bfs_mixed_full(2).unwrap();
        let reached = dist.iter().filter(|&&d| d != UNREACHED).count();
        // 4^2 linear phases * 2 quadratic * |GL(2,2)| = 6.
        assert_eq!(reached, 16 * 2 * 6);
        assert_eq!(sp.table_bits, 6);
    }
}
