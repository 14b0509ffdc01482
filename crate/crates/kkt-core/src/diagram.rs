//! Jacobi diagrams: trivalent multigraphs without simple loops.
//!
//! A diagram on `2n` vertices has three half-edge slots per vertex; the
//! cyclic slot order `(0, 1, 2)` is the positive vertex orientation
//! everywhere. Reversing the orientation at a vertex is realized by swapping
//! two of its slots and costs a sign (the AS relation).
//!
//! Isomorphism between diagrams is the half-edge notion: a bijection of
//! half-edges preserving the vertex partition and the edge partition,
//! orientations ignored. [`canonicalize`] picks a deterministic
//! representative per isomorphism class and reports the AS sign relating the
//! input orientation to the representative's.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;

/// Default cap on the diagram degree for enumeration and basis computation.
pub const DEFAULT_DEGREE_CAP: usize = 4;

/// A half-edge: `(vertex, slot)` with `slot ∈ {0, 1, 2}`.
pub type HalfEdge = (usize, usize);

/// Trivalent multigraph without simple loops, as a fixed-point-free
/// involution on half-edge indices `3·vertex + slot`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct JacobiDiagram {
    vertex_count: usize,
    mate: Vec<u16>,
}

impl JacobiDiagram {
    /// Build a diagram from an edge list. Every `(vertex, slot)` pair must
    /// appear in exactly one edge and no edge may join two half-edges of the
    /// same vertex.
    pub fn from_edges(vertex_count: usize, edges: &[(HalfEdge, HalfEdge)]) -> Result<Self, Error> {
        if vertex_count % 2 != 0 {
            return Err(Error::validation(format!(
                "vertex count {vertex_count} is odd; trivalent graphs have an even vertex count"
            )));
        }
        if vertex_count > 80 {
            return Err(Error::validation(format!(
                "vertex count {vertex_count} exceeds the supported maximum 80"
            )));
        }
        let n = 3 * vertex_count;
        let mut mate = vec![u16::MAX; n];
        let idx = |(v, s): HalfEdge| 3 * v + s;
        for &(a, b) in edges {
            for h in [a, b] {
                if h.0 >= vertex_count {
                    return Err(Error::validation(format!(
                        "vertex {} out of range (vertex count {vertex_count})",
                        h.0
                    )));
                }
                if h.1 >= 3 {
                    return Err(Error::validation(format!(
                        "vertex {}: slot {} out of range",
                        h.0, h.1
                    )));
                }
            }
            if a.0 == b.0 {
                return Err(Error::validation(format!(
                    "simple loop at vertex {}",
                    a.0
                )));
            }
            for h in [a, b] {
                if mate[idx(h)] != u16::MAX {
                    return Err(Error::validation(format!(
                        "vertex {}: slot {} appears in more than one edge",
                        h.0, h.1
                    )));
                }
            }
            mate[idx(a)] = idx(b) as u16;
            mate[idx(b)] = idx(a) as u16;
        }
        if let Some(h) = mate.iter().position(|&m| m == u16::MAX) {
            return Err(Error::validation(format!(
                "vertex {} is not trivalent: slot {} is unused",
                h / 3,
                h % 3
            )));
        }
        Ok(JacobiDiagram { vertex_count, mate })
    }

    fn from_mate(vertex_count: usize, mate: Vec<u16>) -> Self {
        JacobiDiagram { vertex_count, mate }
    }

    pub fn empty() -> Self {
        JacobiDiagram {
            vertex_count: 0,
            mate: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Degree: half the vertex count.
    pub fn degree(&self) -> usize {
        self.vertex_count / 2
    }

    pub fn mate_of(&self, h: HalfEdge) -> HalfEdge {
        let m = self.mate[3 * h.0 + h.1] as usize;
        (m / 3, m % 3)
    }

    /// Edges as normalized ordered pairs, sorted.
    pub fn edges(&self) -> Vec<(HalfEdge, HalfEdge)> {
        let mut out = Vec::with_capacity(self.vertex_count * 3 / 2);
        for h in 0..self.mate.len() {
            let m = self.mate[h] as usize;
            if h < m {
                out.push(((h / 3, h % 3), (m / 3, m % 3)));
            }
        }
        out.sort();
        out
    }

    /// Reverse the cyclic order at `vertex` by swapping slots 1 and 2.
    pub fn flip_orientation(&self, vertex: usize) -> Result<Self, Error> {
        if vertex >= self.vertex_count {
            return Err(Error::validation(format!(
                "vertex {vertex} out of range (vertex count {})",
                self.vertex_count
            )));
        }
        let relabel = |h: usize| -> usize {
            if h == 3 * vertex + 1 {
                3 * vertex + 2
            } else if h == 3 * vertex + 2 {
                3 * vertex + 1
            } else {
                h
            }
        };
        let mut mate = vec![0u16; self.mate.len()];
        for h in 0..self.mate.len() {
            mate[relabel(h)] = relabel(self.mate[h] as usize) as u16;
        }
        Ok(JacobiDiagram::from_mate(self.vertex_count, mate))
    }

    /// Text encoding `degree;v0s0-v1s1,...` with edges in sorted order.
    pub fn encode(&self) -> String {
        let edges: Vec<String> = self
            .edges()
            .iter()
            .map(|&((v1, s1), (v2, s2))| format!("{v1}s{s1}-{v2}s{s2}"))
            .collect();
        format!("{};{}", self.degree(), edges.join(","))
    }

    /// Parse the text encoding produced by [`encode`](Self::encode).
    pub fn parse(text: &str) -> Result<Self, Error> {
        let (deg_part, edge_part) = text
            .split_once(';')
            .ok_or_else(|| Error::validation(format!("diagram encoding '{text}': missing ';'")))?;
        let degree: usize = deg_part
            .trim()
            .parse()
            .map_err(|_| Error::validation(format!("diagram encoding '{text}': bad degree")))?;
        let mut edges = Vec::new();
        let parse_half = |t: &str| -> Result<HalfEdge, Error> {
            let (v, s) = t
                .split_once('s')
                .ok_or_else(|| Error::validation(format!("bad half-edge '{t}'")))?;
            let v = v
                .parse()
                .map_err(|_| Error::validation(format!("bad half-edge '{t}'")))?;
            let s = s
                .parse()
                .map_err(|_| Error::validation(format!("bad half-edge '{t}'")))?;
            Ok((v, s))
        };
        if !edge_part.trim().is_empty() {
            for e in edge_part.split(',') {
                let (a, b) = e
                    .trim()
                    .split_once('-')
                    .ok_or_else(|| Error::validation(format!("bad edge '{e}'")))?;
                edges.push((parse_half(a)?, parse_half(b)?));
            }
        }
        let d = JacobiDiagram::from_edges(2 * degree, &edges)?;
        Ok(d)
    }
}

impl fmt::Display for JacobiDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encode())
    }
}

/// Canonical representative of an isomorphism class of Jacobi diagrams.
///
/// `zero` is set when the class carries an orientation-reversing
/// automorphism, in which case the AS relation forces the class to vanish in
/// any vector space over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DiagramClass {
    diagram: JacobiDiagram,
    zero: bool,
}

impl DiagramClass {
    pub fn diagram(&self) -> &JacobiDiagram {
        &self.diagram
    }

    pub fn degree(&self) -> usize {
        self.diagram.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn encoding(&self) -> String {
        self.diagram.encode()
    }
}

impl fmt::Display for DiagramClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encoding())
    }
}

/// Comparison state of the current partial encoding against one stored
/// minimum.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Cmp {
    /// Strictly smaller than the stored minimum (or no minimum stored yet).
    Improves,
    /// Equal so far.
    Ties,
    /// Strictly larger; can never update this minimum.
    Dead,
}

fn cmp_step(cmp: Cmp, stored: Option<&Vec<u16>>, pos: usize, entry: u16) -> Cmp {
    match (cmp, stored) {
        (Cmp::Ties, Some(best)) => match entry.cmp(&best[pos]) {
            std::cmp::Ordering::Less => Cmp::Improves,
            std::cmp::Ordering::Equal => Cmp::Ties,
            std::cmp::Ordering::Greater => Cmp::Dead,
        },
        (c, _) => c,
    }
}

/// Minimal mate-array encodings of `d` over vertex relabelings combined with
/// arbitrary slot permutations, split by the parity of the orientation flips
/// the slot permutations perform: `.0` is the minimum over flip-even moves,
/// `.1` over flip-odd moves.
///
/// Labels are assigned in first-reference order, so besides the per-component
/// root choices the only branching is the two slot orders (one flip-even, one
/// flip-odd relative to the reference slot) at each newly referenced vertex.
fn min_encodings(d: &JacobiDiagram) -> (Vec<u16>, Vec<u16>) {
    let nv = d.vertex_count;
    assert!(nv > 0);

    struct State<'a> {
        d: &'a JacobiDiagram,
        nv: usize,
        new2old: Vec<usize>,
        old2new: Vec<Option<usize>>,
        new_slot_to_old: Vec<[usize; 3]>,
        old_slot_to_new: Vec<[usize; 3]>,
        enc: Vec<u16>,
        best_even: Option<Vec<u16>>,
        best_odd: Option<Vec<u16>>,
    }

    impl State<'_> {
        fn assign(&mut self, old_v: usize, first_old_slot: usize, swapped: bool) {
            let m = self.new2old.len();
            self.new2old.push(old_v);
            self.old2new[old_v] = Some(m);
            let f = first_old_slot;
            let fwd = if swapped {
                [f, (f + 2) % 3, (f + 1) % 3]
            } else {
                [f, (f + 1) % 3, (f + 2) % 3]
            };
            let mut inv = [0usize; 3];
            for (new_s, &old_s) in fwd.iter().enumerate() {
                inv[old_s] = new_s;
            }
            self.new_slot_to_old.push(fwd);
            self.old_slot_to_new.push(inv);
        }

        fn unassign(&mut self) {
            let old_v = self.new2old.pop().unwrap();
            self.old2new[old_v] = None;
            self.new_slot_to_old.pop();
            self.old_slot_to_new.pop();
        }

        /// `odd` is the flip parity accumulated so far.
        fn rec(&mut self, pos: usize, odd: bool, cmp_even: Cmp, cmp_odd: Cmp) {
            if pos == 3 * self.nv {
                let (slot, cmp) = if odd {
                    (&mut self.best_odd, cmp_odd)
                } else {
                    (&mut self.best_even, cmp_even)
                };
                if cmp != Cmp::Dead {
                    // the cmp state may be stale after an interior update of
                    // the minimum, so compare explicitly before storing
                    match slot {
                        Some(best) if self.enc >= *best => {}
                        _ => *slot = Some(self.enc.clone()),
                    }
                }
                return;
            }
            let t = pos / 3;
            let s = pos % 3;
            if t == self.new2old.len() {
                // new connected component: branch on root, reference slot
                // and slot order
                for w in 0..self.nv {
                    if self.old2new[w].is_some() {
                        continue;
                    }
                    for r in 0..3 {
                        for swapped in [false, true] {
                            self.assign(w, r, swapped);
                            self.rec(pos, odd ^ swapped, cmp_even, cmp_odd);
                            self.unassign();
                        }
                    }
                }
                return;
            }
            let ov = self.new2old[t];
            let os = self.new_slot_to_old[t][s];
            let (mv, ms) = self.d.mate_of((ov, os));
            match self.old2new[mv] {
                Some(m) => {
                    let entry = (3 * m + self.old_slot_to_new[m][ms]) as u16;
                    let ce = cmp_step(cmp_even, self.best_even.as_ref(), pos, entry);
                    let co = cmp_step(cmp_odd, self.best_odd.as_ref(), pos, entry);
                    if ce == Cmp::Dead && co == Cmp::Dead {
                        return;
                    }
                    self.enc.push(entry);
                    self.rec(pos + 1, odd, ce, co);
                    self.enc.pop();
                }
                None => {
                    let m = self.new2old.len();
                    let entry = (3 * m) as u16;
                    let ce = cmp_step(cmp_even, self.best_even.as_ref(), pos, entry);
                    let co = cmp_step(cmp_odd, self.best_odd.as_ref(), pos, entry);
                    if ce == Cmp::Dead && co == Cmp::Dead {
                        return;
                    }
                    self.enc.push(entry);
                    for swapped in [false, true] {
                        self.assign(mv, ms, swapped);
                        self.rec(pos + 1, odd ^ swapped, ce, co);
                        self.unassign();
                    }
                    self.enc.pop();
                }
            }
        }
    }

    let mut st = State {
        d,
        nv,
        new2old: Vec::with_capacity(nv),
        old2new: vec![None; nv],
        new_slot_to_old: Vec::with_capacity(nv),
        old_slot_to_new: Vec::with_capacity(nv),
        enc: Vec::with_capacity(3 * nv),
        best_even: None,
        best_odd: None,
    };
    st.rec(0, false, Cmp::Ties, Cmp::Ties);
    (st.best_even.unwrap(), st.best_odd.unwrap())
}

/// Canonical class of `raw` together with the AS sign carrying `raw` onto
/// the canonical representative.
///
/// The canonical representative is chosen deterministically among the (at
/// most two) orientation orbits of the class; when both orbits coincide the
/// class has an orientation-reversing automorphism and is flagged zero.
pub fn canonicalize(raw: &JacobiDiagram) -> (DiagramClass, i64) {
    if raw.vertex_count == 0 {
        return (
            DiagramClass {
                diagram: JacobiDiagram::empty(),
                zero: false,
            },
            1,
        );
    }
    let (e_plus, e_minus) = min_encodings(raw);
    if e_plus == e_minus {
        return (
            DiagramClass {
                diagram: JacobiDiagram::from_mate(raw.vertex_count, e_plus),
                zero: true,
            },
            1,
        );
    }
    let (enc, sign) = if e_plus > e_minus {
        (e_plus, 1)
    } else {
        (e_minus, -1)
    };
    (
        DiagramClass {
            diagram: JacobiDiagram::from_mate(raw.vertex_count, enc),
            zero: false,
        },
        sign,
    )
}

/// Number of half-edge permutations preserving the vertex partition and the
/// edge partition. Orientations are ignored.
pub fn automorphism_count(class: &DiagramClass) -> u64 {
    automorphisms_of(class.diagram())
}

pub(crate) const SLOT_PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

fn automorphisms_of(d: &JacobiDiagram) -> u64 {
    let nv = d.vertex_count;
    if nv == 0 {
        return 1;
    }

    struct Search<'a> {
        d: &'a JacobiDiagram,
        nv: usize,
        image: Vec<Option<usize>>,
        slot_map: Vec<[usize; 3]>,
        used: Vec<bool>,
        count: u64,
    }

    impl Search<'_> {
        fn consistent(&self, t: usize, w: usize, sp: &[usize; 3]) -> bool {
            // check edges from t to already-mapped vertices (and to t itself's
            // earlier slots via the mate involution)
            for s in 0..3 {
                let (mv, ms) = self.d.mate_of((t, s));
                if mv > t {
                    continue;
                }
                debug_assert_ne!(mv, t);
                let (iv, isl) = match self.image[mv] {
                    Some(iv) => (iv, self.slot_map[mv][ms]),
                    None => continue,
                };
                if self.d.mate_of((w, sp[s])) != (iv, isl) {
                    return false;
                }
            }
            true
        }

        fn rec(&mut self, t: usize) {
            if t == self.nv {
                self.count += 1;
                return;
            }
            for w in 0..self.nv {
                if self.used[w] {
                    continue;
                }
                for sp in &SLOT_PERMS {
                    if !self.consistent(t, w, sp) {
                        continue;
                    }
                    self.image[t] = Some(w);
                    self.slot_map[t] = *sp;
                    self.used[w] = true;
                    self.rec(t + 1);
                    self.used[w] = false;
                    self.image[t] = None;
                }
            }
        }
    }

    let mut s = Search {
        d,
        nv,
        image: vec![None; nv],
        slot_map: vec![[0, 1, 2]; nv],
        used: vec![false; nv],
        count: 0,
    };
    s.rec(0);
    s.count
}

/// The theta diagram: two vertices joined by a triple edge, both positively
/// oriented.
pub fn theta() -> DiagramClass {
    let d = JacobiDiagram::from_edges(
        2,
        &[((0, 0), (1, 0)), ((0, 1), (1, 2)), ((0, 2), (1, 1))],
    )
    .expect("theta is well formed");
    canonicalize(&d).0
}

/// All isomorphism classes of degree-`degree` diagrams (including classes
/// flagged zero), sorted by canonical key. Uses the default degree cap.
pub fn enumerate_diagrams(degree: usize) -> Result<Vec<DiagramClass>, Error> {
    enumerate_diagrams_with_cap(degree, DEFAULT_DEGREE_CAP)
}

pub fn enumerate_diagrams_with_cap(degree: usize, cap: usize) -> Result<Vec<DiagramClass>, Error> {
    if degree > cap {
        return Err(Error::DegreeCap { degree, cap });
    }
    if degree == 0 {
        return Ok(vec![canonicalize(&JacobiDiagram::empty()).0]);
    }
    let nv = 2 * degree;
    let mut classes: BTreeSet<DiagramClass> = BTreeSet::new();
    let mut adj = vec![vec![0u8; nv]; nv];
    let mut rem = vec![3u8; nv];
    fill_adjacency(0, 1, nv, &mut adj, &mut rem, &mut classes);
    Ok(classes.into_iter().collect())
}

/// Enumerate loopless trivalent adjacency matrices cell by cell (upper
/// triangle, row major); each complete matrix is slotted into a diagram and
/// canonicalized.
fn fill_adjacency(
    i: usize,
    j: usize,
    nv: usize,
    adj: &mut Vec<Vec<u8>>,
    rem: &mut Vec<u8>,
    classes: &mut BTreeSet<DiagramClass>,
) {
    if i == nv {
        classes.insert(diagram_from_adjacency(nv, adj));
        return;
    }
    if j == nv {
        if rem[i] == 0 {
            fill_adjacency(i + 1, i + 2, nv, adj, rem, classes);
        }
        return;
    }
    let capacity: u8 = rem[j..nv].iter().map(|&r| r.min(3)).sum();
    if capacity < rem[i] {
        return;
    }
    let max_m = rem[i].min(rem[j]);
    for m in 0..=max_m {
        adj[i][j] = m;
        rem[i] -= m;
        rem[j] -= m;
        fill_adjacency(i, j + 1, nv, adj, rem, classes);
        rem[i] += m;
        rem[j] += m;
        adj[i][j] = 0;
    }
}

fn diagram_from_adjacency(nv: usize, adj: &[Vec<u8>]) -> DiagramClass {
    let mut next_slot = vec![0usize; nv];
    let mut edges = Vec::with_capacity(3 * nv / 2);
    for i in 0..nv {
        for j in (i + 1)..nv {
            for _ in 0..adj[i][j] {
                edges.push(((i, next_slot[i]), (j, next_slot[j])));
                next_slot[i] += 1;
                next_slot[j] += 1;
            }
        }
    }
    let d = JacobiDiagram::from_edges(nv, &edges).expect("trivalent by construction");
    canonicalize(&d).0
}
