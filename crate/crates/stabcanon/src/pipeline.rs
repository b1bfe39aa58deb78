//! Clifford canonical forms.
//!
//! A tableau is split as `H(T) . F_L . H(S) . F_R` (time order) with `F_L`,
//! `F_R` Hadamard-free, each Hadamard-free part is hosted as `-P-C-P-C-`,
//! giving the 11-stage form `-H-C-P-C-P-C-H-P-C-P-C-`. Folding the two
//! Hadamard-free segments yields the 8-stage form `-H-C-CZ-P-H-P-CZ-C-`, and
//! [`compile_lnn`] lays that out on a line with two-qubit depth at most `14n - 4`.

use std::fmt;
use std::str::FromStr;

use crate::circuit::{invert_circuit, Circuit, Gate};
use crate::czsynth::{stage_s_matrix, synth_czhat_lnn, to_y_basis, CzHatOptions, CzLayer};
use crate::error::{Error, Result};
use crate::linear::{compose, synth_cnot_lnn, LinearBackend, LinearMatrix};
use crate::phasepoly::{diagonal_after, fold, mask_string, split_diagonal, PhasePoly};
use crate::tableau::{circuit_to_tableau, PauliTerm, Tableau};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stage {
    /// Hadamards on the qubits of the mask.
    H(u64),
    /// `P^k` on qubit `q`, `k = powers[q]`.
    P(Vec<u8>),
    C(LinearMatrix),
    /// Diagonal of weight at most 2.
    Cz(PhasePoly),
    /// Diagonal followed, if `reversed`, by the wire reversal `j -> n-1-j`.
    CzHat { poly: PhasePoly, reversed: bool },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Tag {
    H,
    P,
    C,
    Cz,
    CzHat,
}

impl Stage {
    fn tag(&self) -> Tag {
        match self {
            Stage::H(_) => Tag::H,
            Stage::P(_) => Tag::P,
            Stage::C(_) => Tag::C,
            Stage::Cz(_) => Tag::Cz,
            Stage::CzHat { .. } => Tag::CzHat,
        }
    }

    pub fn is_identity(&self) -> bool {
        match self {
            Stage::H(m) => *m == 0,
            Stage::P(p) => p.iter().all(|&k| k % 4 == 0),
            Stage::C(g) => g.is_identity(),
            Stage::Cz(p) => zero_diagonal(p),
            Stage::CzHat { poly, reversed } => !reversed && zero_diagonal(poly),
        }
    }

    /// Gate-level realisation over all-to-all connectivity.
    pub fn to_circuit(&self, n: usize, backend: LinearBackend) -> Result<Circuit> {
        let mut c = Circuit::new(n);
        match self {
            Stage::H(m) => {
                for q in (0..n).filter(|&q| (m >> q) & 1 == 1) {
                    c.push(Gate::H(q))?;
                }
            }
            Stage::P(p) => {
                if p.len() != n {
                    return Err(Error::DimensionMismatch(n, p.len()));
                }
                for (q, &k) in p.iter().enumerate() {
                    c.push_phase(q, k as u32)?;
                }
            }
            Stage::C(g) => c = backend.synth(g)?,
            Stage::Cz(p) => c = diagonal_circuit(p)?,
            Stage::CzHat { poly, reversed } => {
                c = if *reversed {
                    synth_czhat_lnn(&to_y_basis(poly), CzHatOptions::default())?
                } else {
                    diagonal_circuit(poly)?
                }
            }
        }
        Ok(c)
    }

    /// Payload size in bits.
    pub fn payload_bits(&self, n: usize) -> usize {
        match self.tag() {
            Tag::H => n,
            Tag::P => 2 * n,
            Tag::C => n * n,
            Tag::Cz => n * n.saturating_sub(1) / 2,
            Tag::CzHat => n * n.saturating_sub(1) / 2 + 2 * n + 1,
        }
    }
}

fn zero_diagonal(p: &PhasePoly) -> bool {
    split_diagonal(p).map(|(pw, e)| e.is_empty() && pw.iter().all(|&k| k == 0)).unwrap_or(p.is_empty())
}

/// CZ gates then P gates for a weight-at-most-2 diagonal.
fn diagonal_circuit(p: &PhasePoly) -> Result<Circuit> {
    let (powers, edges) = split_diagonal(p)?;
    let mut c = Circuit::new(p.n);
    for (a, b) in edges {
        c.push(Gate::Cz(a, b))?;
    }
    for (q, &k) in powers.iter().enumerate() {
        c.push_phase(q, k as u32)?;
    }
    Ok(c)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Template {
    /// `-H-C-P-C-P-C-H-P-C-P-C-`
    Eleven,
    /// `-H-C-CZ-P-H-P-CZ-C-`
    Eight,
}

const ELEVEN: [Tag; 11] = [Tag::H, Tag::C, Tag::P, Tag::C, Tag::P, Tag::C, Tag::H, Tag::P, Tag::C, Tag::P, Tag::C];
const EIGHT: [Tag; 8] = [Tag::H, Tag::C, Tag::Cz, Tag::P, Tag::H, Tag::P, Tag::Cz, Tag::C];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StagedForm {
    pub n: usize,
    pub stages: Vec<Stage>,
}

impl StagedForm {
    pub fn template(&self) -> Option<Template> {
        let tags: Vec<Tag> = self.stages.iter().map(Stage::tag).collect();
        if tags == ELEVEN {
            Some(Template::Eleven)
        } else if tags == EIGHT {
            Some(Template::Eight)
        } else {
            None
        }
    }

    fn expect(&self, t: Template) -> Result<()> {
        match self.template() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::Template(format!("expected {t:?} form, found {got:?}"))),
        }
    }

    /// One circuit per stage.
    pub fn stage_circuits(&self, backend: LinearBackend) -> Result<Vec<Circuit>> {
        self.stages.iter().map(|s| s.to_circuit(self.n, backend)).collect()
    }

    /// Stage circuits concatenated.
    pub fn to_circuit(&self, backend: LinearBackend) -> Result<Circuit> {
        let mut c = Circuit::new(self.n);
        for s in self.stage_circuits(backend)? {
            c.extend(&s)?;
        }
        Ok(c)
    }

    pub fn tableau(&self) -> Result<Tableau> {
        circuit_to_tableau(&self.to_circuit(LinearBackend::Gauss)?)
    }

    pub fn non_identity_stages(&self) -> usize {
        self.stages.iter().filter(|s| !s.is_identity()).count()
    }

    pub fn payload_bits(&self) -> usize {
        self.stages.iter().map(|s| s.payload_bits(self.n)).sum()
    }

    /// One stage per line after an `N: n` header.
    pub fn dump(&self) -> String {
        let mut s = format!("N: {}\n", self.n);
        for st in &self.stages {
            let line = match st {
                Stage::H(m) => join("H:", (0..self.n).filter(|&q| (m >> q) & 1 == 1).map(|q| q.to_string())),
                Stage::P(p) => join(
                    "P:",
                    p.iter().enumerate().filter(|(_, &k)| k % 4 != 0).map(|(q, k)| format!("{q}^{}", k % 4)),
                ),
                Stage::C(g) => join("C:", g.row_strings().into_iter()),
                Stage::Cz(p) => join("CZ:", poly_tokens(p)),
                Stage::CzHat { poly, reversed } => {
                    join("CZHAT:", std::iter::once(if *reversed { "rev" } else { "fwd" }.to_string()).chain(poly_tokens(poly)))
                }
            };
            s.push_str(&line);
            s.push('\n');
        }
        s
    }
}

fn join(head: &str, items: impl Iterator<Item = String>) -> String {
    let mut s = head.to_string();
    for it in items {
        s.push(' ');
        s.push_str(&it);
    }
    s
}

fn poly_tokens(p: &PhasePoly) -> impl Iterator<Item = String> + '_ {
    p.terms().map(|(m, u)| format!("{u}:{}", mask_string(m, p.n)))
}

impl fmt::Display for StagedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

impl FromStr for StagedForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<StagedForm> {
        let mut n: Option<usize> = None;
        let mut stages = Vec::new();
        for (i, line) in s.lines().enumerate() {
            let line_no = i + 1;
            let bad = |msg: String| Error::Parse { line: line_no, msg };
            let text = line.split('#').next().unwrap_or("").trim();
            if text.is_empty() {
                continue;
            }
            let (head, rest) = text.split_once(':').ok_or_else(|| bad("expected `TAG: ...`".into()))?;
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if head == "N" {
                let v: usize = rest.trim().parse().map_err(|_| bad("bad qubit count".into()))?;
                if v > crate::MAX_QUBITS {
                    return Err(bad(format!("at most {} qubits", crate::MAX_QUBITS)));
                }
                n = Some(v);
                continue;
            }
            let n = n.ok_or_else(|| bad("missing `N:` header".into()))?;
            let qubit = |t: &str| -> Result<usize> {
                let q: usize = t.parse().map_err(|_| bad(format!("bad qubit `{t}`")))?;
                if q >= n {
                    return Err(bad(format!("qubit {q} out of range")));
                }
                Ok(q)
            };
            let poly = |toks: &[&str]| -> Result<PhasePoly> {
                let mut p = PhasePoly::new(n);
                for t in toks {
                    let (u, m) = t.split_once(':').ok_or_else(|| bad(format!("bad term `{t}`")))?;
                    let u: u32 = u.parse().map_err(|_| bad(format!("bad coefficient `{u}`")))?;
                    p.add(parse_bits(m, n).ok_or_else(|| bad(format!("bad mask `{m}`")))?, u);
                }
                Ok(p)
            };
            let stage = match head {
                "H" => Stage::H(toks.iter().try_fold(0u64, |m, t| qubit(t).map(|q| m | 1 << q))?),
                "P" => {
                    let mut p = vec![0u8; n];
                    for t in &toks {
                        let (q, k) = t.split_once('^').ok_or_else(|| bad(format!("bad power `{t}`")))?;
                        let k: u8 = k.parse().map_err(|_| bad(format!("bad power `{t}`")))?;
                        p[qubit(q)?] = k % 4;
                    }
                    Stage::P(p)
                }
                "C" => {
                    if toks.len() != n {
                        return Err(bad(format!("expected {n} rows")));
                    }
                    let rows = toks
                        .iter()
                        .map(|t| parse_bits(t, n).ok_or_else(|| bad(format!("bad row `{t}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    Stage::C(LinearMatrix::from_rows(n, rows).map_err(|e| bad(e.to_string()))?)
                }
                "CZ" => Stage::Cz(poly(&toks)?),
                "CZHAT" => {
                    let reversed = match toks.first() {
                        Some(&"rev") => true,
                        Some(&"fwd") => false,
                        _ => return Err(bad("expected `rev` or `fwd`".into())),
                    };
                    Stage::CzHat { poly: poly(&toks[1..])?, reversed }
                }
                other => return Err(bad(format!("unknown stage `{other}`"))),
            };
            stages.push(stage);
        }
        Ok(StagedForm { n: n.ok_or(Error::Parse { line: 0, msg: "missing `N:` header".into() })?, stages })
    }
}

fn parse_bits(s: &str, n: usize) -> Option<u64> {
    if s.len() != n {
        return None;
    }
    s.chars().enumerate().try_fold(0u64, |m, (j, c)| match c {
        '0' => Some(m),
        '1' => Some(m | 1 << j),
        _ => None,
    })
}

// ---------------------------------------------------------------------------
// Eleven stages.
// ---------------------------------------------------------------------------

fn bit(v: u64, q: usize) -> bool {
    (v >> q) & 1 == 1
}

fn h_circuit(n: usize, mask: u64) -> Circuit {
    Circuit { n, gates: (0..n).filter(|&q| bit(mask, q)).map(Gate::H).collect() }
}

/// Gauss-Jordan on the generators by their X parts. Returns the pivot
/// columns; the first `pivots.len()` generators carry them in order and
/// the rest have no X part.
fn rref_x(gens: &mut [PauliTerm], n: usize) -> Vec<usize> {
    rref_by(gens, n, |p| p.x)
}

fn rref_by(gens: &mut [PauliTerm], n: usize, key: impl Fn(&PauliTerm) -> u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    for col in 0..n {
        let r = pivots.len();
        let Some(i) = (r..gens.len()).find(|&i| bit(key(&gens[i]), col)) else { continue };
        gens.swap(r, i);
        let pivot = gens[r];
        for (j, g) in gens.iter_mut().enumerate() {
            if j != r && bit(key(g), col) {
                *g = g.mul(&pivot);
            }
        }
        pivots.push(col);
    }
    pivots
}

/// Support offset of `U^dag |0>` reduced against its direction space: the
/// unique element of the support inside the span of its own bits.
fn hadamard_set(u: &Tableau) -> Result<u64> {
    let n = u.n;
    let mut gens = u.inverse().zs;
    let xp = rref_x(&mut gens, n);
    let k = xp.len();
    let zrows = &mut gens[k..];
    let zp = rref_by(zrows, n, |p| p.z);
    let mut x0 = 0u64;
    for (row, &col) in zrows.iter().zip(&zp) {
        match row.phase {
            0 => {}
            2 => x0 |= 1 << col,
            _ => return Err(Error::Internal("Z-type stabilizer is not Hermitian".into())),
        }
    }
    for (row, &col) in gens[..k].iter().zip(&xp) {
        if bit(x0, col) {
            x0 ^= row.x;
        }
    }
    Ok(x0)
}

/// Gates `G` (no Hadamards) with `G W |0> = H(S) |0>`, given the stabilizer
/// generators of `W |0>`, whose support must contain 0. Returns `(G, S)`.
fn reduce_to_plus_state(mut gens: Vec<PauliTerm>, n: usize) -> Result<(Circuit, u64)> {
    let mut g = Circuit::new(n);
    let mut apply = |gens: &mut Vec<PauliTerm>, gate: Gate| -> Result<()> {
        g.push(gate)?;
        gens.iter_mut().for_each(|p| p.conjugate(gate));
        Ok(())
    };
    let pivots = rref_x(&mut gens, n);
    let k = pivots.len();
    let s_mask = pivots.iter().fold(0u64, |m, &s| m | 1 << s);
    for (i, &s) in pivots.iter().enumerate() {
        let others = gens[i].x & !(1u64 << s);
        for c in (0..n).filter(|&c| bit(others, c)) {
            apply(&mut gens, Gate::Cnot(s, c))?;
        }
    }
    let zp = rref_by(&mut gens[k..], n, |p| p.z);
    for (row, &c) in gens[k..].iter().zip(&zp) {
        if row.z != 1 << c || row.phase != 0 || bit(s_mask, c) {
            return Err(Error::Internal("support of the state does not contain 0".into()));
        }
    }
    let zrows: Vec<PauliTerm> = gens[k..].to_vec();
    for g in gens[..k].iter_mut() {
        for zr in &zrows {
            if g.z & zr.z != 0 {
                *g = g.mul(zr);
            }
        }
    }
    for (i, &s) in pivots.iter().enumerate() {
        for (j, &t) in pivots.iter().enumerate().skip(i + 1) {
            if bit(gens[i].z, t) {
                apply(&mut gens, Gate::Cz(s, t))?;
            }
            debug_assert!(!bit(gens[j].z, s));
        }
    }
    for (i, &s) in pivots.iter().enumerate() {
        if bit(gens[i].z, s) {
            apply(&mut gens, Gate::P(s, 1))?;
        }
        if gens[i].phase == 2 {
            apply(&mut gens, Gate::z(s))?;
        }
    }
    for (i, &s) in pivots.iter().enumerate() {
        if gens[i] != PauliTerm::x_gen(s) {
            return Err(Error::Internal("X-type generator not reduced".into()));
        }
    }
    Ok((g, s_mask))
}

/// Circuit without Hadamards for a tableau that maps every `Z_q` to a
/// Z-type Pauli with sign +.
fn synth_hadamard_free(t: &Tableau) -> Result<Circuit> {
    let n = t.n;
    let mut cur = t.clone();
    let mut appended = Circuit::new(n);
    let mut push = |cur: &mut Tableau, g: Gate| -> Result<()> {
        appended.push(g)?;
        cur.apply(g)
    };
    // Column j of the Z-image matrix is reduced with `col_a ^= col_b` = CNOT(a, b).
    let zcol = |cur: &Tableau, a: usize| cur.zs.iter().enumerate().fold(0u64, |m, (q, p)| m | ((p.z >> a) & 1) << q);
    for j in 0..n {
        if !bit(zcol(&cur, j), j) {
            let r = (j + 1..n)
                .find(|&r| bit(zcol(&cur, r), j))
                .ok_or_else(|| Error::Internal("Z images are not independent".into()))?;
            push(&mut cur, Gate::Cnot(j, r))?;
        }
        for i in (0..n).filter(|&i| i != j) {
            if bit(zcol(&cur, i), j) {
                push(&mut cur, Gate::Cnot(i, j))?;
            }
        }
    }
    for q in 0..n {
        for k in q + 1..n {
            if bit(cur.xs[q].z, k) {
                push(&mut cur, Gate::Cz(q, k))?;
            }
        }
        if bit(cur.xs[q].z, q) {
            push(&mut cur, Gate::P(q, 1))?;
        }
        if cur.xs[q].phase == 2 {
            push(&mut cur, Gate::z(q))?;
        }
    }
    if !cur.is_identity() {
        return Err(Error::Internal("Hadamard-free reduction did not reach the identity".into()));
    }
    Ok(invert_circuit(&appended))
}

/// Phase polynomial and linear part of a run of `P`, `C` and `CZ` stages.
fn hfree_function(n: usize, stages: &[Stage]) -> Result<(PhasePoly, LinearMatrix)> {
    let mut p = PhasePoly::new(n);
    let mut g = LinearMatrix::identity(n);
    for s in stages {
        match s {
            Stage::P(pw) => {
                for (q, &k) in pw.iter().enumerate() {
                    p.add(g.rows[q], k as u32);
                }
            }
            Stage::C(m) => g = compose(&g, m)?,
            Stage::Cz(d) => {
                for (m, u) in d.substitute(&g).terms() {
                    p.add(m, u as u32);
                }
            }
            _ => return Err(Error::Template("Hadamard-free segment expected".into())),
        }
    }
    Ok((p, g))
}

/// `(p, g)` as `-P(a)-C(R)-P(D)-C(M)-`: the quadratic part of `p` is
/// produced by `P(D)` acting on the wire functions `R`, with `R` upper
/// unit-triangular from the factorisation of the odd-pair adjacency.
pub fn host_pcpc(p: &PhasePoly, g: &LinearMatrix) -> Result<[Stage; 4]> {
    let n = p.n;
    let p = fold(p);
    let c: Vec<u8> = (0..n).map(|j| p.evaluate(1 << j)).collect();
    let mut adj = vec![0u64; n];
    for j in 0..n {
        for k in j + 1..n {
            let d = (4 + p.evaluate(1 << j | 1 << k) as i32 - c[j] as i32 - c[k] as i32).rem_euclid(4);
            if d % 2 != 0 {
                return Err(Error::Internal("phase function is not quadratic".into()));
            }
            if d == 2 {
                adj[j] |= 1 << k;
                adj[k] |= 1 << j;
            }
        }
    }
    // Lower unit-triangular L with (L L^T) off-diagonal = adj.
    let mut l = vec![0u64; n];
    for k in 0..n {
        l[k] |= 1 << k;
        for j in 0..k {
            let inner = (l[k] & l[j] & crate::low_mask(j)).count_ones() & 1;
            if bit(adj[k], j) as u32 ^ inner == 1 {
                l[k] |= 1 << j;
            }
        }
    }
    let r = LinearMatrix { n, rows: (0..n).map(|i| (0..n).fold(0u64, |m, k| m | ((l[k] >> i) & 1) << k)).collect() };
    let d: Vec<u8> = r.rows.iter().map(|row| (row.count_ones() >= 2) as u8).collect();
    let a: Vec<u8> = (0..n)
        .map(|j| {
            let s: u32 = (0..n).filter(|&i| d[i] == 1 && bit(r.rows[i], j)).count() as u32;
            ((4 + c[j] as u32 - s % 4) % 4) as u8
        })
        .collect();
    let m = compose(&r.inverse()?, g)?;
    Ok([Stage::P(a), Stage::C(r), Stage::P(d), Stage::C(m)])
}

fn hosted_circuit(c: &Circuit) -> Result<[Stage; 4]> {
    let (p, g) = crate::phasepoly::extract(c)?;
    host_pcpc(&p, &g)
}

/// 11-stage form `-H-C-P-C-P-C-H-P-C-P-C-` tableau-equal to `t`.
pub fn decompose_11(t: &Tableau) -> Result<StagedForm> {
    if !t.is_symplectic() || !t.is_hermitian() {
        return Err(Error::Unsupported("not a valid Clifford tableau".into()));
    }
    let n = t.n;
    let t_mask = hadamard_set(t)?;
    let w = circuit_to_tableau(&h_circuit(n, t_mask))?.then(t)?;
    let (g, s_mask) = reduce_to_plus_state(w.zs.clone(), n)?;
    let mut fl = w.clone();
    fl.apply_circuit(&g)?;
    fl.apply_circuit(&h_circuit(n, s_mask))?;
    let fr = invert_circuit(&g);

    let (h1, h2, left) = if fl.is_identity() {
        (t_mask ^ s_mask, 0, Circuit::new(n))
    } else {
        (t_mask, s_mask, synth_hadamard_free(&fl)?)
    };
    let [pa, cr, pd, cm] = hosted_circuit(&left)?;
    let right = hosted_circuit(&fr)?;
    let mut stages = vec![Stage::H(h1), Stage::C(LinearMatrix::identity(n)), pa, cr, pd, cm, Stage::H(h2)];
    stages.extend(right);
    Ok(StagedForm { n, stages })
}

// ---------------------------------------------------------------------------
// Eight stages.
// ---------------------------------------------------------------------------

fn cz_stage(n: usize, edges: Vec<(usize, usize)>) -> Result<Stage> {
    Ok(Stage::Cz(CzLayer::new(n, edges)?.phase_poly()))
}

/// `-H-C-P-C-P-C-H-P-C-P-C-` to `-H-C-CZ-P-H-P-CZ-C-`.
pub fn fold_to_8(f: &StagedForm) -> Result<StagedForm> {
    f.expect(Template::Eleven)?;
    let n = f.n;
    let (p1, g1) = hfree_function(n, &f.stages[1..6])?;
    let (p2, g2) = hfree_function(n, &f.stages[7..11])?;
    let (pow1, e1) = split_diagonal(&diagonal_after(&p1, &g1)?)?;
    let (pow2, e2) = split_diagonal(&fold(&p2))?;
    Ok(StagedForm {
        n,
        stages: vec![
            f.stages[0].clone(),
            Stage::C(g1),
            cz_stage(n, e1)?,
            Stage::P(pow1),
            f.stages[6].clone(),
            Stage::P(pow2),
            cz_stage(n, e2)?,
            Stage::C(g2),
        ],
    })
}

/// Two-qubit depth guaranteed by [`compile_lnn`].
pub fn lnn_depth_bound(n: usize) -> usize {
    (14 * n).saturating_sub(4)
}

/// Line layout of an 8-stage form over {H, P, CNOT}.
///
/// Both CZ stages become reversal-CZ blocks, the layers between them act on
/// reversed wires, the first `S` of the first block is merged into the
/// preceding `-C-` and the last `S^-1` of the second into the following one.
pub fn compile_lnn(f: &StagedForm) -> Result<Circuit> {
    f.expect(Template::Eight)?;
    let n = f.n;
    let st = &f.stages;
    let (Stage::H(h0), Stage::C(ca), Stage::Cz(cz1), Stage::P(p1), Stage::H(h1), Stage::P(p2), Stage::Cz(cz2), Stage::C(cb)) =
        (&st[0], &st[1], &st[2], &st[3], &st[4], &st[5], &st[6], &st[7])
    else {
        return Err(Error::Template("8-stage payloads".into()));
    };
    let mut c = Circuit::new(n);
    c.extend(&h_circuit(n, *h0))?;
    let middle = |c: &mut Circuit, rev: bool| -> Result<()> {
        let idx = |q: usize| if rev { n - 1 - q } else { q };
        for (q, &k) in p1.iter().enumerate() {
            c.push_phase(idx(q), k as u32)?;
        }
        for q in (0..n).filter(|&q| bit(*h1, q)) {
            c.push(Gate::H(idx(q)))?;
        }
        for (q, &k) in p2.iter().enumerate() {
            c.push_phase(idx(q), k as u32)?;
        }
        Ok(())
    };
    if cz1.is_empty() && cz2.is_empty() || n < 2 {
        if !(cz1.is_empty() && cz2.is_empty()) {
            return Err(Error::Internal("CZ stage on a single qubit".into()));
        }
        c.extend(&synth_cnot_lnn(ca)?)?;
        middle(&mut c, false)?;
        c.extend(&synth_cnot_lnn(cb)?)?;
    } else {
        let s = stage_s_matrix(n);
        c.extend(&synth_cnot_lnn(&compose(ca, &s)?)?)?;
        let first = CzHatOptions { omit_first_s: true, omit_last_s: false };
        c.extend(&synth_czhat_lnn(&to_y_basis(cz1), first)?)?;
        middle(&mut c, true)?;
        let last = CzHatOptions { omit_first_s: false, omit_last_s: true };
        c.extend(&synth_czhat_lnn(&to_y_basis(&cz2.reverse_variables()), last)?)?;
        c.extend(&synth_cnot_lnn(&compose(&s.inverse()?, cb)?)?)?;
    }
    Ok(c.lower_cz())
}

/// Canonical 8-stage form and its line layout, both tableau-equal to `c`.
pub fn canonicalize(c: &Circuit) -> Result<(StagedForm, Circuit)> {
    let t = circuit_to_tableau(c)?;
    let f8 = fold_to_8(&decompose_11(&t)?)?;
    let lnn = compile_lnn(&f8)?;
    Ok((f8, lnn))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{two_qubit_depth, validate_layout, Layout};
    use crate::tableau::random_clifford;

    #[test]
    fn identity_is_all_empty() {
        let f = decompose_11(&Tableau::identity(4)).unwrap();
        assert_eq!(f.template(), Some(Template::Eleven));
        assert_eq!(f.non_identity_stages(), 0);
        let f8 = fold_to_8(&f).unwrap();
        assert_eq!(f8.non_identity_stages(), 0);
        assert!(compile_lnn(&f8).unwrap().is_empty());
    }

    #[test]
    fn single_hadamard() {
        let c = Circuit::from_gates(3, [Gate::H(0)]).unwrap();
        let (f8, _) = canonicalize(&c).unwrap();
        assert_eq!(f8.stages[0], Stage::H(1));
        assert_eq!(f8.non_identity_stages(), 1);
    }

    #[test]
    fn random_round_trip() {
        for n in 1..=6 {
            for seed in 0..20 {
                let t = random_clifford(n, seed).unwrap();
                let f = decompose_11(&t).unwrap();
                assert_eq!(f.tableau().unwrap(), t, "11 n={n} seed={seed}");
                let f8 = fold_to_8(&f).unwrap();
                assert_eq!(f8.tableau().unwrap(), t, "8 n={n} seed={seed}");
                let c = compile_lnn(&f8).unwrap();
                assert_eq!(circuit_to_tableau(&c).unwrap(), t, "lnn n={n} seed={seed}");
                assert!(validate_layout(&c, Layout::Lnn));
                assert!(two_qubit_depth(&c) <= lnn_depth_bound(n));
            }
        }
    }

    #[test]
    fn hosting_matches_function() {
        let p = PhasePoly::from_terms(4, [(0b0011, 1), (0b0110, 3), (0b1001, 2), (0b1111, 1), (0b0100, 1)]);
        let g = LinearMatrix::from_rows(4, vec![0b0011, 0b0010, 0b0100, 0b1100]).unwrap();
        let stages = host_pcpc(&p, &g).unwrap();
        let (q, h) = hfree_function(4, &stages).unwrap();
        assert_eq!(h, g);
        assert!((0..16).all(|x| q.evaluate(x) == p.evaluate(x)));
    }

    #[test]
    fn dump_parses_back() {
        let t = random_clifford(4, 9).unwrap();
        let f8 = fold_to_8(&decompose_11(&t).unwrap()).unwrap();
        let back: StagedForm = f8.dump().parse().unwrap();
        assert_eq!(back.tableau().unwrap(), t);
        assert_eq!(back.template(), Some(Template::Eight));
    }
}
