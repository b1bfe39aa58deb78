//! `-CZ-` stage synthesis.
//!
//! Three constructions live here:
//! * one CZ per edge ([`synth_cz_plain`]);
//! * fewer two-qubit gates over {P, CZ, CNOT} ([`synth_cz_optimized`]), by a
//!   double-star template and, for `n <= 5`, an exact meet-in-the-middle search;
//! * the reversal-CZ network ([`synth_czhat_lnn`]): repeated copies of a fixed
//!   depth-4 CNOT stage `S = S1 S2` on a line. Between copies every wire carries
//!   an interval function `x_j ^ ... ^ x_k`; each interval shows up once, so a
//!   phase gate at the right moment realises any diagonal whose terms are
//!   intervals. The network ends in the full qubit reversal.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use crate::circuit::{invert_circuit, Circuit, Gate};
use crate::error::{Error, Result};
use crate::linear::LinearMatrix;
use crate::phasepoly::{extract, fold, PhasePoly};

/// A set of qubit pairs, each receiving one CZ. Pairs are stored as `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CzLayer {
    pub n: usize,
    pub edges: BTreeSet<(usize, usize)>,
}

impl CzLayer {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<CzLayer> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::RepeatedQubit(a));
            }
            if a.max(b) >= n {
                return Err(Error::QubitOutOfRange { qubit: a.max(b), n });
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(CzLayer { n, edges: set })
    }

    pub fn complete(n: usize) -> CzLayer {
        let edges = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        CzLayer { n, edges }
    }

    /// Layer whose edge `p` (in [`pair_index`] order) is present iff bit `p` is set.
    pub fn from_mask(n: usize, mask: u64) -> CzLayer {
        let edges = pairs(n).filter(|&(a, b)| (mask >> pair_index(n, a, b)) & 1 == 1).collect();
        CzLayer { n, edges }
    }

    pub fn mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, &(a, b)| m | 1 << pair_index(self.n, a, b))
    }

    /// `sum_edges 2 x_a x_b`, written as `x_a + x_b + 3 (x_a ^ x_b)`.
    pub fn phase_poly(&self) -> PhasePoly {
        let mut p = PhasePoly::new(self.n);
        for &(a, b) in &self.edges {
            p.add(1 << a, 1);
            p.add(1 << b, 1);
            p.add((1 << a) | (1 << b), 3);
        }
        p
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

/// Index of pair `a < b` in lexicographic order.
pub fn pair_index(n: usize, a: usize, b: usize) -> usize {
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

pub fn synth_cz_plain(layer: &CzLayer) -> Circuit {
    Circuit { n: layer.n, gates: layer.edges.iter().map(|&(a, b)| Gate::Cz(a, b)).collect() }
}

/// Double-star rewrite applied greedily. Centres `a`, `b` sharing leaves `N`:
///
/// `P(a) P(b) CX(a,b) PDG(b) CZ(b,k)_{k in N} CX(a,b)` realises the edges
/// `(a,k), (b,k)` for `k in N` plus `(a,b)`, in `|N| + 2` two-qubit gates.
/// Without the edge `(a,b)` the phase gates are dropped.
pub fn synth_cz_template(layer: &CzLayer) -> Circuit {
    let n = layer.n;
    let mut edges = layer.edges.clone();
    let mut c = Circuit::new(n);
    let has = |e: &BTreeSet<(usize, usize)>, a: usize, b: usize| e.contains(&(a.min(b), a.max(b)));
    loop {
        let mut best: Option<(usize, usize, usize, Vec<usize>)> = None;
        for (a, b) in pairs(n) {
            let common: Vec<usize> =
                (0..n).filter(|&k| k != a && k != b && has(&edges, a, k) && has(&edges, b, k)).collect();
            let gain = common.len() + has(&edges, a, b) as usize;
            if gain > 2 && best.as_ref().is_none_or(|bst| gain > bst.2) {
                best = Some((a, b, gain, common));
            }
        }
        let Some((a, b, _, common)) = best else { break };
        let adjacent = edges.remove(&(a, b));
        if adjacent {
            c.gates.extend([Gate::P(a, 1), Gate::P(b, 1)]);
        }
        c.gates.push(Gate::Cnot(a, b));
        if adjacent {
            c.gates.push(Gate::pdg(b));
        }
        for &k in &common {
            edges.remove(&(a.min(k), a.max(k)));
            edges.remove(&(b.min(k), b.max(k)));
            c.gates.push(Gate::Cz(b, k));
        }
        c.gates.push(Gate::Cnot(a, b));
    }
    c.gates.extend(edges.iter().map(|&(a, b)| Gate::Cz(a, b)));
    c
}

/// Fewest two-qubit gates found: exact for `n <= 5`, template otherwise.
/// The template is kept whenever it is already optimal.
pub fn synth_cz_optimized(layer: &CzLayer) -> Circuit {
    let template = synth_cz_template(layer);
    if layer.n <= EXACT_MAX_N && layer.n >= 2 {
        if let Some(exact) = exact_cz(layer) {
            if exact.two_qubit_count() < template.two_qubit_count() {
                return exact;
            }
        }
    }
    template
}

// ---------------------------------------------------------------------------
// Exact search.
//
// A {P, CZ, CNOT} circuit is `|x> -> i^p(x) |g x>` and `p` is linear plus
// `2 * sum_{j<k} Q_jk x_j x_k`. Linear terms can always be fixed with phase
// gates at the end, so a search state is `(g, Q)`. A P gate on a wire carrying
// `f` toggles `Q` by the clique `K(f)` on the support of `f`; since P is free,
// `Q` is stored modulo `W_g = span{K(g_w)}`. CZ on wires `f_a, f_b` toggles
// `Q` by the symmetrised outer product of `f_a` and `f_b`.
//
// Moves act on `Q` by translation, so the states that reach `(I, T)` in `d`
// moves are the forward states of depth `d` shifted by `T`. One forward table
// of depth `FORWARD_DEPTH` per `n` serves every target.
// ---------------------------------------------------------------------------

const EXACT_MAX_N: usize = 5;
const FORWARD_DEPTH: u8 = 4;

fn clique(n: usize, f: u64) -> u64 {
    let mut m = 0;
    for (a, b) in pairs(n) {
        if (f >> a) & 1 == 1 && (f >> b) & 1 == 1 {
            m |= 1 << pair_index(n, a, b);
        }
    }
    m
}

fn outer_sym(n: usize, fa: u64, fb: u64) -> u64 {
    let mut m = 0;
    for (j, k) in pairs(n) {
        let v = ((fa >> j) & (fb >> k) & 1) ^ ((fa >> k) & (fb >> j) & 1);
        m |= v << pair_index(n, j, k);
    }
    m
}

struct Reducer {
    basis: Vec<u64>,
}

impl Reducer {
    fn new(n: usize, g: &[u64]) -> Reducer {
        let mut basis: Vec<u64> = Vec::new();
        for &row in &g[..n] {
            let mut v = clique(n, row);
            for &b in &basis {
                v = v.min(v ^ b);
            }
            if v != 0 {
                basis.push(v);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        Reducer { basis }
    }

    fn canon(&self, mut v: u64) -> u64 {
        for &b in &self.basis {
            v = v.min(v ^ b);
        }
        v
    }
}

fn pack_g(g: &[u64], n: usize) -> u64 {
    g.iter().enumerate().fold(0, |acc, (i, &r)| acc | r << (i * n))
}

fn unpack_g(key: u64, n: usize) -> Vec<u64> {
    (0..n).map(|i| (key >> (i * n)) & ((1 << n) - 1)).collect()
}

#[derive(Clone, Copy)]
struct Node {
    g: u64,
    q: u64,
    parent: u32,
    /// Subset of wires receiving a P gate before `gate`.
    pset: u8,
    gate: Gate,
    depth: u8,
}

struct Forward {
    n: usize,
    nodes: Vec<Node>,
    index: HashMap<(u64, u64), u32>,
    levels: Vec<std::ops::Range<usize>>,
}

fn moves(n: usize) -> Vec<Gate> {
    let mut m: Vec<Gate> = pairs(n).map(|(a, b)| Gate::Cz(a, b)).collect();
    for c in 0..n {
        for t in 0..n {
            if c != t {
                m.push(Gate::Cnot(c, t));
            }
        }
    }
    m
}

impl Forward {
    fn build(n: usize) -> Forward {
        let id: Vec<u64> = (0..n).map(|i| 1 << i).collect();
        let root = Node { g: pack_g(&id, n), q: 0, parent: u32::MAX, pset: 0, gate: Gate::H(0), depth: 0 };
        let mut nodes = vec![root];
        let mut index = HashMap::new();
        index.insert((root.g, 0), 0u32);
        let mut levels = vec![0usize..1];
        let gate_moves = moves(n);
        for d in 1..=FORWARD_DEPTH {
            let prev = levels[d as usize - 1].clone();
            let start = nodes.len();
            for i in prev {
                let node = nodes[i];
                let g = unpack_g(node.g, n);
                // Distinct P-subset toggles available before the gate.
                let mut toggles: Vec<(u8, u64)> = Vec::new();
                for s in 0u8..(1 << n) {
                    let w = (0..n).filter(|&j| (s >> j) & 1 == 1).fold(0, |acc, j| acc ^ clique(n, g[j]));
                    if !toggles.iter().any(|&(_, v)| v == w) {
                        toggles.push((s, w));
                    }
                }
                for &mv in &gate_moves {
                    match mv {
                        Gate::Cz(a, b) => {
                            let red = Reducer::new(n, &g);
                            let q = red.canon(node.q ^ outer_sym(n, g[a], g[b]));
                            if let std::collections::hash_map::Entry::Vacant(e) = index.entry((node.g, q)) {
                                e.insert(nodes.len() as u32);
                                nodes.push(Node { g: node.g, q, parent: i as u32, pset: 0, gate: mv, depth: d });
                            }
                        }
                        Gate::Cnot(c, t) => {
                            let mut g2 = g.clone();
                            g2[t] ^= g2[c];
                            let key = pack_g(&g2, n);
                            let red = Reducer::new(n, &g2);
                            for &(s, w) in &toggles {
                                let q = red.canon(node.q ^ w);
                                if let std::collections::hash_map::Entry::Vacant(e) = index.entry((key, q)) {
                                    e.insert(nodes.len() as u32);
                                    nodes.push(Node { g: key, q, parent: i as u32, pset: s, gate: mv, depth: d });
                                }
                            }
                        }
                        _ => unreachable!(),
                    }
                }
            }
            levels.push(start..nodes.len());
        }
        Forward { n, nodes, index, levels }
    }

    fn path(&self, mut i: u32) -> Vec<Node> {
        let mut out = Vec::new();
        while self.nodes[i as usize].parent != u32::MAX {
            out.push(self.nodes[i as usize]);
            i = self.nodes[i as usize].parent;
        }
        out.reverse();
        out
    }

    /// Cheapest `(node1, node2)` with `node1` deeper, meeting at target `t`.
    fn meet(&self, t: u64) -> Option<(u32, u32)> {
        let n = self.n;
        let max_d = FORWARD_DEPTH as usize;
        for total in 0..=2 * max_d {
            for d1 in total.div_ceil(2)..=total.min(max_d) {
                let d2 = total - d1;
                for i in self.levels[d1].clone() {
                    let node = &self.nodes[i];
                    let red = Reducer::new(n, &unpack_g(node.g, n));
                    if let Some(&j) = self.index.get(&(node.g, red.canon(node.q ^ t))) {
                        if self.nodes[j as usize].depth as usize <= d2 {
                            return Some((i as u32, j));
                        }
                    }
                }
            }
        }
        None
    }
}

fn forward_table(n: usize) -> &'static Forward {
    static TABLES: [OnceLock<Forward>; EXACT_MAX_N + 1] = [const { OnceLock::new() }; EXACT_MAX_N + 1];
    TABLES[n].get_or_init(|| Forward::build(n))
}

fn same_function(p: &PhasePoly, q: &PhasePoly) -> bool {
    (0..1u64 << p.n).all(|x| p.evaluate(x) == q.evaluate(x))
}

/// Quadratic part of a phase polynomial as a pair mask.
fn quadratic_part(p: &PhasePoly) -> u64 {
    let n = p.n;
    let mut m = 0;
    for (a, b) in pairs(n) {
        let v = (p.evaluate((1 << a) | (1 << b)) as i32 - p.evaluate(1 << a) as i32 - p.evaluate(1 << b) as i32)
            .rem_euclid(4);
        m |= ((v / 2) as u64) << pair_index(n, a, b);
    }
    m
}

/// P subset on wires carrying `g` whose cliques sum to `want`.
fn solve_toggle(n: usize, g: &[u64], want: u64) -> Option<u8> {
    (0u8..(1 << n)).find(|&s| {
        (0..n).filter(|&j| (s >> j) & 1 == 1).fold(0, |acc, j| acc ^ clique(n, g[j])) == want
    })
}

/// Rebuild the circuit of a forward path, choosing P gates so that the
/// quadratic part before every CNOT is the one the search assumed.
fn path_circuit(n: usize, path: &[Node], root_g: &[u64]) -> Option<Circuit> {
    let mut c = Circuit::new(n);
    let mut g = root_g.to_vec();
    let mut planned = 0u64;
    for node in path {
        if let Gate::Cnot(ctl, t) = node.gate {
            let w = (0..n).filter(|&j| (node.pset >> j) & 1 == 1).fold(0, |acc, j| acc ^ clique(n, g[j]));
            let actual = quadratic_part(&extract(&c).ok()?.0);
            let s = solve_toggle(n, &g, actual ^ planned ^ w)?;
            for j in 0..n {
                if (s >> j) & 1 == 1 {
                    c.gates.push(Gate::P(j, 1));
                }
            }
            c.gates.push(node.gate);
            g[t] ^= g[ctl];
        } else {
            c.gates.push(node.gate);
        }
        planned = node.q;
    }
    Some(c)
}

/// Append phase gates so the circuit realises exactly `target` with `g = I`.
fn finish_diagonal(mut c: Circuit, target: &PhasePoly, junction_g: &[u64], junction: usize) -> Option<Circuit> {
    let n = c.n;
    let (p, g) = extract(&c).ok()?;
    if !g.is_identity() {
        return None;
    }
    let s = solve_toggle(n, junction_g, quadratic_part(&p) ^ quadratic_part(target))?;
    let fix: Vec<Gate> = (0..n).filter(|&j| (s >> j) & 1 == 1).map(|j| Gate::P(j, 1)).collect();
    c.gates.splice(junction..junction, fix);
    let (p, _) = extract(&c).ok()?;
    for j in 0..n {
        let k = (target.evaluate(1 << j) as u32 + 4 - p.evaluate(1 << j) as u32) % 4;
        if let Some(gate) = Gate::phase(j, k) {
            c.gates.push(gate);
        }
    }
    same_function(&extract(&c).ok()?.0, target).then_some(c)
}

fn solve_exact(n: usize, mask: u64) -> Option<Circuit> {
    let fw = forward_table(n);
    let target = CzLayer::from_mask(n, mask);
    let (i, j) = fw.meet(mask)?;
    let root_g: Vec<u64> = (0..n).map(|q| 1 << q).collect();
    let c1 = path_circuit(n, &fw.path(i), &root_g)?;
    let c2 = path_circuit(n, &fw.path(j), &root_g)?;
    let junction = c1.len();
    let junction_g = unpack_g(fw.nodes[i as usize].g, n);
    let mut c = c1;
    c.gates.extend(invert_circuit(&c2).gates);
    finish_diagonal(c, &target.phase_poly(), &junction_g, junction)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == p.len() {
            out.push(p.clone());
            return;
        }
        for i in k..p.len() {
            p.swap(k, i);
            rec(k + 1, p, out);
            p.swap(k, i);
        }
    }
    rec(0, &mut p, &mut out);
    out.sort();
    out
}

fn permute_mask(n: usize, mask: u64, perm: &[usize]) -> u64 {
    let mut m = 0;
    for (a, b) in pairs(n) {
        if (mask >> pair_index(n, a, b)) & 1 == 1 {
            let (x, y) = (perm[a].min(perm[b]), perm[a].max(perm[b]));
            m |= 1 << pair_index(n, x, y);
        }
    }
    m
}

/// Optimal circuit for a layer (`2 <= n <= 5`), solved once per isomorphism class.
pub fn exact_cz(layer: &CzLayer) -> Option<Circuit> {
    let n = layer.n;
    if !(2..=EXACT_MAX_N).contains(&n) {
        return None;
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, u64), Option<Circuit>>>> = OnceLock::new();
    let mask = layer.mask();
    let (rep, perm) = permutations(n)
        .into_iter()
        .map(|p| (permute_mask(n, mask, &p), p))
        .min()
        .expect("at least one permutation");
    let cache = CACHE.get_or_init(Default::default);
    let solved = {
        let hit = cache.lock().expect("cache lock").get(&(n, rep)).cloned();
        match hit {
            Some(c) => c,
            None => {
                let c = solve_exact(n, rep);
                cache.lock().expect("cache lock").insert((n, rep), c.clone());
                c
            }
        }
    };
    let mut inv = vec![0; n];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    solved.map(|c| c.map_qubits(|q| inv[q]))
}

// ---------------------------------------------------------------------------
// Reversal-CZ network.
// ---------------------------------------------------------------------------

/// CNOT layers `(control, target)` of `S1` and `S2`.
fn s1_layers(n: usize) -> [Vec<(usize, usize)>; 2] {
    let end1 = if n.is_multiple_of(2) { n.saturating_sub(1) } else { n.saturating_sub(2) };
    [
        (0..end1).step_by(2).map(|i| (i, i + 1)).collect(),
        (1..n.saturating_sub(1)).step_by(2).map(|i| (i + 1, i)).collect(),
    ]
}

fn s2_layers(n: usize) -> [Vec<(usize, usize)>; 2] {
    let (end1, end2) = if n.is_multiple_of(2) {
        (n.saturating_sub(1), n.saturating_sub(2))
    } else {
        (n.saturating_sub(2), n.saturating_sub(1))
    };
    [
        (0..end1).step_by(2).map(|i| (i + 1, i)).collect(),
        (1..end2).step_by(2).map(|i| (i, i + 1)).collect(),
    ]
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Block {
    S,
    S1,
}

fn block_layers(n: usize, b: Block) -> Vec<Vec<(usize, usize)>> {
    let mut out: Vec<Vec<(usize, usize)>> = s1_layers(n).into();
    if b == Block::S {
        out.extend(s2_layers(n));
    }
    out
}

/// Copies of `S` (and the trailing half stage for even `n`) composing to the reversal.
fn network_blocks(n: usize) -> Vec<Block> {
    let m = n / 2;
    if n % 2 == 1 {
        vec![Block::S; m + 1]
    } else {
        let mut v = vec![Block::S; m];
        v.push(Block::S1);
        v
    }
}

fn apply_block(rows: &mut [u64], c: Option<&mut Circuit>, n: usize, b: Block) {
    let mut gates = Vec::new();
    for layer in block_layers(n, b) {
        for (ctl, t) in layer {
            rows[t] ^= rows[ctl];
            gates.push(Gate::Cnot(ctl, t));
        }
    }
    if let Some(c) = c {
        c.gates.extend(gates);
    }
}

/// One copy of the stage `S` as a circuit.
pub fn stage_s_circuit(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    let mut rows: Vec<u64> = (0..n).map(|i| 1 << i).collect();
    apply_block(&mut rows, Some(&mut c), n, Block::S);
    c
}

pub fn stage_s_matrix(n: usize) -> LinearMatrix {
    LinearMatrix::from_circuit(&stage_s_circuit(n)).expect("CNOT-only")
}

/// Full reversal `|x_1..x_n> -> |x_n..x_1>` on a line in two-qubit depth `2n + 2`.
pub fn reversal_network(n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    let mut rows: Vec<u64> = (0..n).map(|i| 1 << i).collect();
    for b in network_blocks(n) {
        apply_block(&mut rows, Some(&mut c), n, b);
    }
    c
}

/// `x_j ^ ... ^ x_k`, 1-based and inclusive as in the usual `[j,k]` notation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntervalLabel {
    pub j: usize,
    pub k: usize,
}

impl IntervalLabel {
    pub fn new(j: usize, k: usize) -> IntervalLabel {
        assert!(1 <= j && j <= k, "interval [{j},{k}]");
        IntervalLabel { j, k }
    }

    pub fn mask(&self) -> u64 {
        crate::low_mask(self.k) & !crate::low_mask(self.j - 1)
    }

    pub fn from_mask(m: u64) -> Option<IntervalLabel> {
        if m == 0 {
            return None;
        }
        let lo = m.trailing_zeros() as usize;
        let hi = 63 - m.leading_zeros() as usize;
        let l = IntervalLabel::new(lo + 1, hi + 1);
        (l.mask() == m).then_some(l)
    }
}

impl std::fmt::Display for IntervalLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{}]", self.j, self.k)
    }
}

fn labels_of(rows: &[u64]) -> Result<Vec<IntervalLabel>> {
    rows.iter()
        .map(|&r| IntervalLabel::from_mask(r).ok_or_else(|| Error::Internal(format!("non-interval row {r:#b}"))))
        .collect()
}

/// Labels on each wire after `t` copies of `S`, `0 <= t <= ceil(n/2)`.
pub fn interval_schedule(n: usize, t: usize) -> Result<Vec<IntervalLabel>> {
    if n == 0 || n > crate::MAX_QUBITS {
        return Err(Error::UnsupportedSize(n, crate::MAX_QUBITS));
    }
    if t > n.div_ceil(2) {
        return Err(Error::Unsupported(format!("t = {t} exceeds ceil(n/2) = {}", n.div_ceil(2))));
    }
    let mut rows: Vec<u64> = (0..n).map(|i| 1 << i).collect();
    for _ in 0..t {
        apply_block(&mut rows, None, n, Block::S);
    }
    labels_of(&rows)
}

/// Every phase-insertion opportunity `(t, wire, label)` in use: all labels for
/// `t < ceil(n/2)` when `n` is even (`t <= m` when odd), plus for even `n` the
/// non-singleton labels at `t = n/2`. Each `[j,k]` appears exactly once.
pub fn insertion_labels(n: usize) -> Result<Vec<(usize, usize, IntervalLabel)>> {
    let mut out = Vec::new();
    let last = if n % 2 == 1 { n / 2 } else { n / 2 - 1 };
    for t in 0..=last {
        for (i, l) in interval_schedule(n, t)?.into_iter().enumerate() {
            out.push((t, i, l));
        }
    }
    if n.is_multiple_of(2) {
        for (i, l) in interval_schedule(n, n / 2)?.into_iter().enumerate() {
            if l.j != l.k {
                out.push((n / 2, i, l));
            }
        }
    }
    Ok(out)
}

/// `y_j = x_1 ^ ... ^ x_j`: row `j` of this matrix is the x-mask of `y_j`.
pub fn prefix_matrix(n: usize) -> LinearMatrix {
    LinearMatrix { n, rows: (0..n).map(|j| crate::low_mask(j + 1)).collect() }
}

/// Rewrite a diagonal over `x` in the variables `y_j = x_1 ^ ... ^ x_j` and
/// fold it to weight at most 2, so each term is an interval of `x`.
pub fn to_y_basis(p: &PhasePoly) -> PhasePoly {
    let n = p.n;
    // x_j = y_{j-1} ^ y_j.
    let sub = LinearMatrix { n, rows: (0..n).map(|j| if j == 0 { 1 } else { 3 << (j - 1) }).collect() };
    fold(&p.substitute(&sub))
}

/// Which boundary stage of the reversal-CZ network to leave out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CzHatOptions {
    /// Output `K` with `S` then `K` equal to the full block.
    pub omit_first_s: bool,
    /// Output `K` with `K` then `S^-1` equal to the full block.
    pub omit_last_s: bool,
}

/// Phase gates into the network: each interval term is placed at the first
/// block boundary where some wire carries it, lowest wire first.
fn network_with_phases(p_int: &PhasePoly, omit_first: bool) -> Result<Circuit> {
    let n = p_int.n;
    let mut pending: HashMap<u64, u8> = p_int.terms().collect();
    let mut rows: Vec<u64> = (0..n).map(|i| 1 << i).collect();
    let mut blocks = network_blocks(n);
    if omit_first && !blocks.is_empty() {
        let first = blocks.remove(0);
        apply_block(&mut rows, None, n, first);
    }
    let mut c = Circuit::new(n);
    let place = |rows: &[u64], c: &mut Circuit, pending: &mut HashMap<u64, u8>| {
        for (i, r) in rows.iter().enumerate() {
            if let Some(u) = pending.remove(r) {
                c.gates.push(Gate::P(i, u));
            }
        }
    };
    place(&rows, &mut c, &mut pending);
    for b in blocks {
        apply_block(&mut rows, Some(&mut c), n, b);
        place(&rows, &mut c, &mut pending);
    }
    if !pending.is_empty() {
        return Err(Error::Internal("interval term not covered by the network".into()));
    }
    Ok(c)
}

/// Reversal-CZ block on a line: `|x> -> i^p(x) |x_n .. x_1>` where `p_y` is a
/// weight-at-most-2 polynomial in `y_j = x_1 ^ ... ^ x_j` (see [`to_y_basis`]).
/// Depth at most `2n + 2`, minus 4 when a boundary stage is omitted.
pub fn synth_czhat_lnn(p_y: &PhasePoly, opts: CzHatOptions) -> Result<Circuit> {
    if let Some((m, _)) = p_y.terms().find(|(m, _)| m.count_ones() > 2) {
        return Err(Error::WeightTooHigh { mask: m });
    }
    let p_int = p_y.substitute(&prefix_matrix(p_y.n));
    match (opts.omit_first_s, opts.omit_last_s) {
        (true, true) => Err(Error::Unsupported("omitting both boundary stages".into())),
        (false, true) => {
            // S^-1 after K' inverted: the block for q(x) = -p(Rx) with its first S left out.
            let q = p_int.reverse_variables().negate();
            Ok(invert_circuit(&network_with_phases(&q, true)?))
        }
        (first, false) => network_with_phases(&p_int, first),
    }
}
