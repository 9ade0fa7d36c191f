//! Link diagrams as 4-valent planar maps.
//!
//! Every crossing has four slots numbered counter-clockwise. Slot `4x + s`
//! is slot `s` of crossing `x`, and `adj` pairs slots joined by an edge. The
//! under-strand occupies slots `{p, p + 2}` where `p` is the crossing's
//! under parity. Crossingless circles are counted separately since no slot
//! can carry them.
//!
//! An orientation, when present, records for each crossing the incoming slot
//! of the under-strand and of the over-strand.
//!
//! The text format is the planar-diagram code: `X(a,b,c,d)` lists edge labels
//! counter-clockwise starting at the incoming under-strand, and `U(k)` adds
//! `k` crossingless circles.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("malformed PD code at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("edge label {label} appears {count} times (expected 2)")]
    LabelMultiplicity { label: u64, count: usize },
    #[error("inconsistent orientation along edge {label}")]
    InconsistentOrientation { label: u64 },
    #[error("diagram is not oriented")]
    Unoriented,
    #[error("no crossing with index {0}")]
    InvalidCrossing(usize),
    #[error("not a 2-string tangle: {0}")]
    NotATangle(String),
    #[error("empty diagram")]
    Empty,
    #[error("malformed diagram: {0}")]
    Malformed(String),
}

const NONE: u32 = u32::MAX;

#[inline]
pub(crate) fn slot(x: usize, s: usize) -> u32 {
    (4 * x + (s & 3)) as u32
}

#[inline]
pub(crate) fn cross_of(sl: u32) -> usize {
    (sl >> 2) as usize
}

#[inline]
pub(crate) fn pos_of(sl: u32) -> usize {
    (sl & 3) as usize
}

/// Incoming slots of an oriented crossing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CrossingOrientation {
    pub under_in: u8,
    pub over_in: u8,
}

impl CrossingOrientation {
    /// +1 for a right-handed crossing, −1 for left-handed.
    pub fn sign(self) -> i8 {
        if self.over_in == (self.under_in + 3) % 4 {
            1
        } else {
            -1
        }
    }
}

/// Unoriented smoothings and the crossing change at one crossing.
#[derive(Debug, Clone)]
pub struct Resolution {
    /// The same diagram with the crossing changed.
    pub switched: Diagram,
    /// Joins each under-slot `u` with slot `u + 1`.
    pub a_smoothing: Diagram,
    /// Joins each under-slot `u` with slot `u − 1`.
    pub b_smoothing: Diagram,
}

/// A link diagram.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    adj: Vec<u32>,
    under: Vec<u8>,
    orient: Option<Vec<CrossingOrientation>>,
    free_loops: u32,
}

impl Diagram {
    /// `k ≥ 1` disjoint circles with no crossings.
    pub fn unlink(k: u32) -> Self {
        Self { adj: Vec::new(), under: Vec::new(), orient: Some(Vec::new()), free_loops: k }
    }

    pub fn unknot() -> Self {
        Self::unlink(1)
    }

    pub(crate) fn from_raw(
        adj: Vec<u32>,
        under: Vec<u8>,
        orient: Option<Vec<CrossingOrientation>>,
        free_loops: u32,
    ) -> Result<Self, DiagramError> {
        let d = Self { adj, under, orient, free_loops };
        d.validate()?;
        Ok(d)
    }

    fn validate(&self) -> Result<(), DiagramError> {
        let n = self.under.len();
        if self.adj.len() != 4 * n {
            return Err(DiagramError::Malformed("slot table size".into()));
        }
        if n == 0 && self.free_loops == 0 {
            return Err(DiagramError::Empty);
        }
        for (i, &j) in self.adj.iter().enumerate() {
            if j as usize >= self.adj.len() || j as usize == i || self.adj[j as usize] as usize != i {
                return Err(DiagramError::Malformed(format!("slot {i} is not paired")));
            }
        }
        if self.under.iter().any(|&p| p > 1) {
            return Err(DiagramError::Malformed("under parity".into()));
        }
        if let Some(o) = &self.orient {
            if o.len() != n {
                return Err(DiagramError::Malformed("orientation size".into()));
            }
            for (x, co) in o.iter().enumerate() {
                let p = self.under[x];
                if co.under_in % 2 != p || co.over_in % 2 == p || co.under_in > 3 || co.over_in > 3 {
                    return Err(DiagramError::Malformed(format!("orientation at crossing {x}")));
                }
            }
            for x in 0..n {
                for s in 0..4 {
                    let sl = slot(x, s);
                    if !self.is_in_slot(sl) {
                        let nb = self.adj[sl as usize];
                        if !self.is_in_slot(nb) {
                            return Err(DiagramError::Malformed("orientation clash on an edge".into()));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn is_in_slot(&self, sl: u32) -> bool {
        let o = self.orient.as_ref().expect("oriented")[cross_of(sl)];
        let s = pos_of(sl) as u8;
        s == o.under_in || s == o.over_in
    }

    pub fn crossing_count(&self) -> usize {
        self.under.len()
    }

    pub fn free_loops(&self) -> u32 {
        self.free_loops
    }

    pub fn is_oriented(&self) -> bool {
        self.orient.is_some()
    }

    pub fn orientation(&self) -> Option<&[CrossingOrientation]> {
        self.orient.as_deref()
    }

    pub(crate) fn adj(&self) -> &[u32] {
        &self.adj
    }

    pub(crate) fn under_parity(&self, x: usize) -> usize {
        self.under[x] as usize
    }

    /// True iff slot `s` of crossing `x` lies on the over-strand.
    #[inline]
    pub(crate) fn is_over(&self, sl: u32) -> bool {
        (pos_of(sl) + self.under[cross_of(sl)] as usize) % 2 == 1
    }

    /// Sign of crossing `x` for an oriented diagram.
    pub fn crossing_sign(&self, x: usize) -> Option<i8> {
        self.orient.as_ref().and_then(|o| o.get(x)).map(|o| o.sign())
    }

    /// Number of link components, free circles included.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.adj.len()];
        let mut k = self.free_loops as usize;
        for start in 0..self.adj.len() {
            if seen[start] {
                continue;
            }
            k += 1;
            self.walk_strand(start as u32, |sl| seen[sl as usize] = true);
        }
        k
    }

    /// Walks a link component entering at `start`, calling `f` on every
    /// entry and exit slot.
    pub(crate) fn walk_strand(&self, start: u32, mut f: impl FnMut(u32)) {
        let mut cur = start;
        loop {
            f(cur);
            let out = slot(cross_of(cur), pos_of(cur) + 2);
            f(out);
            cur = self.adj[out as usize];
            if cur == start {
                break;
            }
        }
    }

    /// Sum of crossing signs.
    pub fn writhe(&self) -> Result<i32, DiagramError> {
        let o = self.orient.as_ref().ok_or(DiagramError::Unoriented)?;
        Ok(o.iter().map(|c| c.sign() as i32).sum())
    }

    /// Switches every crossing. Writhe and orientation-dependent signs negate.
    pub fn mirror(&self) -> Self {
        let under = self.under.iter().map(|p| 1 - p).collect();
        let orient = self.orient.as_ref().map(|o| {
            o.iter()
                .map(|c| CrossingOrientation { under_in: c.over_in, over_in: c.under_in })
                .collect()
        });
        Self { adj: self.adj.clone(), under, orient, free_loops: self.free_loops }
    }

    /// Changes crossing `x` from over to under.
    pub fn switch(&self, x: usize) -> Result<Self, DiagramError> {
        if x >= self.crossing_count() {
            return Err(DiagramError::InvalidCrossing(x));
        }
        let mut d = self.clone();
        d.under[x] = 1 - d.under[x];
        if let Some(o) = &mut d.orient {
            let c = o[x];
            o[x] = CrossingOrientation { under_in: c.over_in, over_in: c.under_in };
        }
        Ok(d)
    }

    /// Same diagram with the orientation forgotten.
    pub fn unoriented(&self) -> Self {
        Self { orient: None, ..self.clone() }
    }

    /// Orients every component, keeping existing directions when present.
    ///
    /// Components are walked from their lowest slot; the walk direction
    /// becomes the orientation.
    pub fn oriented(&self) -> Self {
        if self.orient.is_some() {
            return self.clone();
        }
        let n = self.crossing_count();
        let mut o = vec![CrossingOrientation { under_in: 0, over_in: 0 }; n];
        let mut seen = vec![false; self.adj.len()];
        for start in 0..self.adj.len() {
            if seen[start] {
                continue;
            }
            let mut entries = Vec::new();
            let mut first = true;
            self.walk_strand(start as u32, |sl| {
                seen[sl as usize] = true;
                if first {
                    entries.push(sl);
                }
                first = !first;
            });
            for sl in entries {
                let x = cross_of(sl);
                if self.is_over(sl) {
                    o[x].over_in = pos_of(sl) as u8;
                } else {
                    o[x].under_in = pos_of(sl) as u8;
                }
            }
        }
        Self { orient: Some(o), ..self.clone() }
    }

    /// Reverses the direction of every component.
    pub fn reversed(&self) -> Result<Self, DiagramError> {
        let o = self.orient.as_ref().ok_or(DiagramError::Unoriented)?;
        let o = o
            .iter()
            .map(|c| CrossingOrientation { under_in: (c.under_in + 2) % 4, over_in: (c.over_in + 2) % 4 })
            .collect();
        Ok(Self { orient: Some(o), ..self.clone() })
    }

    /// Removes a set of crossings, joining their slots pairwise as given by
    /// `pairing[s]` for each removed crossing. Edges threading through the
    /// removed crossings are fused; closed-up strands become free circles.
    pub(crate) fn remove_crossings(&self, removed: &[(usize, [u8; 4])], keep_orientation: bool) -> Self {
        let n = self.crossing_count();
        let mut pairing: Vec<Option<[u8; 4]>> = vec![None; n];
        for (x, p) in removed {
            pairing[*x] = Some(*p);
        }
        let mut new_index = vec![usize::MAX; n];
        let mut kept = 0;
        for x in 0..n {
            if pairing[x].is_none() {
                new_index[x] = kept;
                kept += 1;
            }
        }
        let map = |sl: u32| slot(new_index[cross_of(sl)], pos_of(sl));
        let mut adj = vec![NONE; 4 * kept];
        let mut visited = vec![false; self.adj.len()];
        for x in 0..n {
            if pairing[x].is_some() {
                continue;
            }
            for s in 0..4 {
                let me = slot(x, s);
                let mut nb = self.adj[me as usize];
                while let Some(p) = pairing[cross_of(nb)] {
                    visited[nb as usize] = true;
                    let out = slot(cross_of(nb), p[pos_of(nb)] as usize);
                    visited[out as usize] = true;
                    nb = self.adj[out as usize];
                }
                adj[map(me) as usize] = map(nb);
            }
        }
        let mut loops = self.free_loops;
        for (x, p) in removed {
            for s in 0..4 {
                let start = slot(*x, s);
                if visited[start as usize] {
                    continue;
                }
                loops += 1;
                let mut cur = start;
                loop {
                    visited[cur as usize] = true;
                    let q = pairing[cross_of(cur)].expect("removed crossing");
                    let out = slot(cross_of(cur), q[pos_of(cur)] as usize);
                    visited[out as usize] = true;
                    cur = self.adj[out as usize];
                    if cur == start {
                        break;
                    }
                }
                let _ = p;
            }
        }
        let under = (0..n).filter(|&x| pairing[x].is_none()).map(|x| self.under[x]).collect();
        let orient = if keep_orientation {
            self.orient
                .as_ref()
                .map(|o| (0..n).filter(|&x| pairing[x].is_none()).map(|x| o[x]).collect())
        } else {
            None
        };
        Self { adj, under, orient, free_loops: loops }
    }

    /// Crossing change plus both smoothings at crossing `x`.
    pub fn resolve(&self, x: usize) -> Result<Resolution, DiagramError> {
        if x >= self.crossing_count() {
            return Err(DiagramError::InvalidCrossing(x));
        }
        let p = self.under[x];
        let a_pair = pairing_with_next(p);
        let b_pair = pairing_with_prev(p);
        let respects = self.orient.as_ref().map(|o| {
            // Orientation-respecting smoothing joins the under-strand's
            // incoming slot to the over-strand's outgoing slot.
            let c = o[x];
            (c.over_in + 2) % 4 == (c.under_in + 1) % 4
        });
        Ok(Resolution {
            switched: self.switch(x)?,
            a_smoothing: self.remove_crossings(&[(x, a_pair)], respects == Some(true)),
            b_smoothing: self.remove_crossings(&[(x, b_pair)], respects == Some(false)),
        })
    }

    /// The smoothing at `x` that is compatible with the orientation.
    pub fn oriented_smoothing(&self, x: usize) -> Result<Self, DiagramError> {
        let o = self.orient.as_ref().ok_or(DiagramError::Unoriented)?;
        if x >= self.crossing_count() {
            return Err(DiagramError::InvalidCrossing(x));
        }
        let c = o[x];
        let pairing = if (c.over_in + 2) % 4 == (c.under_in + 1) % 4 {
            pairing_with_next(self.under[x])
        } else {
            pairing_with_prev(self.under[x])
        };
        Ok(self.remove_crossings(&[(x, pairing)], true))
    }

    /// A Reidemeister-I kink: a crossing two of whose neighbouring slots are
    /// joined directly. Returns the crossing and the sign of the kink.
    pub fn detect_curl(&self) -> Option<(usize, i8)> {
        (0..self.crossing_count()).find_map(|x| self.curl_at(x).map(|s| (x, s)))
    }

    fn curl_at(&self, x: usize) -> Option<i8> {
        (0..4).find_map(|s| {
            (self.adj[slot(x, s) as usize] == slot(x, s + 1)).then(|| {
                // The kink is right-handed when the loop leaves the crossing
                // on the under-strand.
                if (s + self.under[x] as usize) % 2 == 0 {
                    1
                } else {
                    -1
                }
            })
        })
    }

    /// Removes the kink at crossing `x` by a Reidemeister-I move.
    pub fn remove_curl(&self, x: usize) -> Result<Self, DiagramError> {
        if x >= self.crossing_count() {
            return Err(DiagramError::InvalidCrossing(x));
        }
        if self.curl_at(x).is_none() {
            return Err(DiagramError::Malformed(format!("crossing {x} is not a kink")));
        }
        Ok(self.remove_crossings(&[(x, STRAIGHT)], true))
    }

    /// A Reidemeister-II bigon: crossings `x ≠ y` sharing two consecutive
    /// edges, with one strand over at both.
    pub(crate) fn find_bigon(&self) -> Option<(usize, usize)> {
        for x in 0..self.crossing_count() {
            if let Some(y) = self.bigon_at(x) {
                return Some((x, y));
            }
        }
        None
    }

    pub(crate) fn bigon_at(&self, x: usize) -> Option<usize> {
        for s in 0..4 {
            let nb = self.adj[slot(x, s) as usize];
            let y = cross_of(nb);
            if y == x {
                continue;
            }
            let t = pos_of(nb);
            if self.adj[slot(x, s + 1) as usize] == slot(y, t + 3) && self.is_over(slot(x, s)) == self.is_over(nb) {
                return Some(y);
            }
        }
        None
    }

    /// Removes a Reidemeister-II bigon between `x` and `y`.
    pub(crate) fn remove_bigon(&self, x: usize, y: usize) -> Self {
        self.remove_crossings(&[(x, STRAIGHT), (y, STRAIGHT)], true)
    }

    /// Faces of the planar map, each as the slots its boundary edges leave
    /// from, walked with the face on the left.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.adj.len()];
        let mut out = Vec::new();
        for start in 0..self.adj.len() {
            if seen[start] {
                continue;
            }
            let mut face = Vec::new();
            let mut d = start as u32;
            while !seen[d as usize] {
                seen[d as usize] = true;
                face.push(d as usize);
                let t = self.adj[d as usize];
                d = slot(cross_of(t), pos_of(t) + 3);
            }
            out.push(face);
        }
        out
    }

    /// Which way the strand runs along the edge leaving slot `sl`.
    fn leaves(&self, sl: u32) -> Option<bool> {
        self.orient.as_ref().map(|_| !self.is_in_slot(sl))
    }

    fn join(&mut self, u: u32, v: u32) {
        self.adj[u as usize] = v;
        self.adj[v as usize] = u;
    }

    fn push_oriented(&mut self, under: u8, ins: Option<(usize, usize)>) {
        self.under.push(under);
        if let (Some(o), Some((i, j))) = (&mut self.orient, ins) {
            let (under_in, over_in) = if i % 2 == under as usize { (i, j) } else { (j, i) };
            o.push(CrossingOrientation { under_in: under_in as u8, over_in: over_in as u8 });
        }
    }

    /// Reidemeister-I: puts a kink of the given sign on the edge leaving slot
    /// `edge`. `left` picks which side of the edge the loop sits on.
    pub fn add_kink(&self, edge: usize, sign: i8, left: bool) -> Result<Self, DiagramError> {
        if edge >= self.adj.len() || sign.abs() != 1 {
            return Err(DiagramError::Malformed(format!("cannot put a kink of sign {sign} on slot {edge}")));
        }
        let (a, b) = (edge as u32, self.adj[edge]);
        let x = self.crossing_count();
        // The strand enters at slot 0, leaves at 2 into the loop, comes back
        // in at `back` and leaves opposite it.
        let (lo, back) = if left { (1, 1) } else { (2, 3) };
        let exit = (back + 2) % 4;
        let p = ((lo + (sign < 0) as usize) % 2) as u8;
        let ins = self.leaves(a).map(|fwd| if fwd { (0, back) } else { (exit, 2) });
        let mut d = self.clone();
        d.adj.extend([NONE; 4]);
        d.join(a, slot(x, 0));
        d.join(b, slot(x, exit));
        d.join(slot(x, lo), slot(x, lo + 1));
        d.push_oriented(p, ins);
        Ok(d)
    }

    /// Reidemeister-II: pushes the edge leaving slot `a` across the edge
    /// leaving slot `b`, over it when `over` holds. Both edges must bound the
    /// same face.
    pub fn add_bigon(&self, a: usize, b: usize, over: bool) -> Result<Self, DiagramError> {
        let face = self
            .faces()
            .into_iter()
            .find(|f| f.contains(&a))
            .ok_or_else(|| DiagramError::Malformed(format!("no edge leaves slot {a}")))?;
        if a == b || !face.contains(&b) {
            return Err(DiagramError::Malformed(format!("slots {a} and {b} do not share a face")));
        }
        let (a, b) = (a as u32, b as u32);
        let (a2, b2) = (self.adj[a as usize], self.adj[b as usize]);
        let (px, qx) = (self.crossing_count(), self.crossing_count() + 1);
        let p = |s| slot(px, s);
        let q = |s| slot(qx, s);
        // The finger runs through slots 3, 1 of P then 1, 3 of Q; the other
        // strand runs through 0, 2 of Q then 0, 2 of P.
        let mut d = self.clone();
        d.adj.extend([NONE; 8]);
        d.join(a, p(3));
        d.join(p(1), q(1));
        d.join(q(3), a2);
        d.join(b, q(0));
        d.join(q(2), p(0));
        d.join(p(2), b2);
        let under = if over { 0 } else { 1 };
        let finger = self.leaves(a);
        let other = self.leaves(b);
        let ins = |fin: usize| finger.zip(other).map(|(f, o)| (if f { fin } else { 4 - fin }, if o { 0 } else { 2 }));
        d.push_oriented(under, ins(3));
        d.push_oriented(under, ins(1));
        Ok(d)
    }

    /// Splits the diagram into connected pieces (no free circles attached)
    /// and returns them with the free-circle count.
    pub(crate) fn split(&self) -> (Vec<Diagram>, u32) {
        let n = self.crossing_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![root];
            comp[root] = count;
            while let Some(x) = stack.pop() {
                for s in 0..4 {
                    let y = cross_of(self.adj[slot(x, s) as usize]);
                    if comp[y] == usize::MAX {
                        comp[y] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        if count <= 1 {
            let mut d = self.clone();
            let loops = d.free_loops;
            d.free_loops = 0;
            return (if n == 0 { Vec::new() } else { vec![d] }, loops);
        }
        let mut local = vec![0usize; n];
        let mut sizes = vec![0usize; count];
        for x in 0..n {
            local[x] = sizes[comp[x]];
            sizes[comp[x]] += 1;
        }
        let mut parts: Vec<Diagram> = sizes
            .iter()
            .map(|&k| Diagram {
                adj: vec![NONE; 4 * k],
                under: Vec::with_capacity(k),
                orient: self.orient.as_ref().map(|_| Vec::with_capacity(k)),
                free_loops: 0,
            })
            .collect();
        for x in 0..n {
            let part = &mut parts[comp[x]];
            part.under.push(self.under[x]);
            if let (Some(po), Some(o)) = (&mut part.orient, &self.orient) {
                po.push(o[x]);
            }
            for s in 0..4 {
                let nb = self.adj[slot(x, s) as usize];
                part.adj[slot(local[x], s) as usize] = slot(local[cross_of(nb)], pos_of(nb));
            }
        }
        (parts, self.free_loops)
    }

    /// Relabels crossings by `perm` (new index of old crossing `x` is
    /// `perm[x]`) and rotates each crossing's slots by `rot[x]` quarter turns
    /// counter-clockwise.
    pub fn relabel(&self, perm: &[usize], rot: &[u8]) -> Self {
        let n = self.crossing_count();
        assert!(perm.len() == n && rot.len() == n);
        let map = |sl: u32| {
            let x = cross_of(sl);
            slot(perm[x], pos_of(sl) + rot[x] as usize)
        };
        let mut adj = vec![NONE; 4 * n];
        let mut under = vec![0; n];
        let mut orient = self.orient.as_ref().map(|_| vec![CrossingOrientation { under_in: 0, over_in: 0 }; n]);
        for x in 0..n {
            for s in 0..4 {
                adj[map(slot(x, s)) as usize] = map(self.adj[slot(x, s) as usize]);
            }
            under[perm[x]] = (self.under[x] + rot[x]) % 2;
            if let (Some(no), Some(o)) = (&mut orient, &self.orient) {
                no[perm[x]] = CrossingOrientation {
                    under_in: (o[x].under_in + rot[x]) % 4,
                    over_in: (o[x].over_in + rot[x]) % 4,
                };
            }
        }
        Self { adj, under, orient, free_loops: self.free_loops }
    }

    /// Code of a connected diagram, minimal over all rootings. Equal for
    /// diagrams that differ only by labelling.
    pub(crate) fn connected_code(&self) -> Vec<u32> {
        let n = self.crossing_count();
        let mut best: Option<Vec<u32>> = None;
        let mut buf = Vec::with_capacity(5 * n);
        let mut order = vec![u32::MAX; n];
        let mut entry = vec![0u8; n];
        let mut queue = Vec::with_capacity(n);
        for root in 0..n {
            for r in 0..4 {
                // Root only at under-slots: every crossing has two of them.
                if (r + self.under[root] as usize) % 2 == 1 {
                    continue;
                }
                buf.clear();
                queue.clear();
                order.iter_mut().for_each(|o| *o = u32::MAX);
                order[root] = 0;
                entry[root] = r as u8;
                queue.push(root);
                let mut head = 0;
                let mut worse = false;
                let mut better = best.is_none();
                while head < queue.len() {
                    let x = queue[head];
                    head += 1;
                    let e = entry[x] as usize;
                    let mut emit = |v: u32, buf: &mut Vec<u32>| -> bool {
                        if !better {
                            let b = best.as_ref().expect("best")[buf.len()];
                            if v < b {
                                better = true;
                            } else if v > b {
                                return false;
                            }
                        }
                        buf.push(v);
                        true
                    };
                    if !emit(((e + self.under[x] as usize) % 2) as u32, &mut buf) {
                        worse = true;
                        break;
                    }
                    for k in 0..4 {
                        let nb = self.adj[slot(x, e + k) as usize];
                        let y = cross_of(nb);
                        if order[y] == u32::MAX {
                            order[y] = queue.len() as u32;
                            entry[y] = pos_of(nb) as u8;
                            queue.push(y);
                        }
                        let v = order[y] * 4 + ((pos_of(nb) + 4 - entry[y] as usize) % 4) as u32;
                        if !emit(v, &mut buf) {
                            worse = true;
                            break;
                        }
                    }
                    if worse {
                        break;
                    }
                }
                if !worse && better {
                    best = Some(buf.clone());
                }
            }
        }
        best.unwrap_or_default()
    }

    /// A byte string identifying the diagram up to relabelling of edges and
    /// crossings and reordering of components. Orientation is ignored.
    pub fn canonical_code(&self) -> Vec<u8> {
        let (parts, loops) = self.split();
        let mut codes: Vec<Vec<u32>> = parts.iter().map(|p| p.connected_code()).collect();
        codes.sort();
        let mut out = Vec::new();
        out.extend_from_slice(&loops.to_be_bytes());
        for c in codes {
            out.extend_from_slice(&(c.len() as u32).to_be_bytes());
            for v in c {
                out.extend_from_slice(&v.to_be_bytes());
            }
        }
        out
    }

    /// Renders the diagram as a PD code with edges labelled consecutively
    /// along each component. Unoriented diagrams are oriented first.
    pub fn to_pd(&self) -> String {
        let d = self.oriented();
        let o = d.orient.as_ref().expect("oriented");
        let mut label = vec![0u64; d.adj.len()];
        let mut seen = vec![false; d.adj.len()];
        let mut next = 1u64;
        for start in 0..d.adj.len() {
            if seen[start] {
                continue;
            }
            let s0 = start as u32;
            // Start the walk on an incoming slot.
            let s0 = if d.is_in_slot(s0) { s0 } else { d.adj[s0 as usize] };
            let mut cur = s0;
            loop {
                let out = slot(cross_of(cur), pos_of(cur) + 2);
                seen[cur as usize] = true;
                seen[out as usize] = true;
                let nb = d.adj[out as usize];
                label[out as usize] = next;
                label[nb as usize] = next;
                next += 1;
                cur = nb;
                if cur == s0 {
                    break;
                }
            }
        }
        let mut parts: Vec<String> = (0..d.crossing_count())
            .map(|x| {
                let u = o[x].under_in as usize;
                let l: Vec<String> = (0..4).map(|k| label[slot(x, u + k) as usize].to_string()).collect();
                format!("X({})", l.join(","))
            })
            .collect();
        if d.free_loops > 0 {
            parts.push(format!("U({})", d.free_loops));
        }
        parts.join(" ")
    }

    /// Parses a PD code; see the module docs for the format.
    pub fn parse_pd(text: &str) -> Result<Self, DiagramError> {
        let tokens = tokenize_pd(text)?;
        let mut crossings: Vec<[u64; 4]> = Vec::new();
        let mut loops = 0u32;
        for t in tokens {
            match t {
                PdToken::X(l) => crossings.push(l),
                PdToken::U(k) => loops += k,
            }
        }
        Self::from_pd(&crossings, loops)
    }

    /// Builds a diagram from PD quadruples plus free circles.
    pub fn from_pd(crossings: &[[u64; 4]], free_loops: u32) -> Result<Self, DiagramError> {
        use std::collections::BTreeMap;
        let n = crossings.len();
        if n == 0 && free_loops == 0 {
            return Err(DiagramError::Empty);
        }
        let mut occ: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for (x, c) in crossings.iter().enumerate() {
            for (s, &l) in c.iter().enumerate() {
                occ.entry(l).or_default().push(slot(x, s));
            }
        }
        let mut adj = vec![NONE; 4 * n];
        for (&label, v) in &occ {
            if v.len() != 2 {
                return Err(DiagramError::LabelMultiplicity { label, count: v.len() });
            }
            if v[0] == v[1] {
                return Err(DiagramError::LabelMultiplicity { label, count: 2 });
            }
            adj[v[0] as usize] = v[1];
            adj[v[1] as usize] = v[0];
        }
        let label_of = |sl: u32| crossings[cross_of(sl)][pos_of(sl)];
        // Under-strands are oriented 0 -> 2 by convention; propagate along
        // each component to the over-strands.
        // dir[slot] = Some(true) if the slot is incoming.
        let mut dir: Vec<Option<bool>> = vec![None; 4 * n];
        for x in 0..n {
            dir[slot(x, 0) as usize] = Some(true);
            dir[slot(x, 2) as usize] = Some(false);
        }
        let mut seen = vec![false; 4 * n];
        for start in 0..4 * n {
            if seen[start] {
                continue;
            }
            // Collect the cyclic sequence of (entry, exit) pairs.
            let mut pairs = Vec::new();
            let mut cur = start as u32;
            loop {
                let out = slot(cross_of(cur), pos_of(cur) + 2);
                seen[cur as usize] = true;
                seen[out as usize] = true;
                pairs.push((cur, out));
                cur = adj[out as usize];
                if cur == start as u32 {
                    break;
                }
            }
            // forward = walking direction agrees with the orientation.
            let mut forward: Option<bool> = None;
            for &(i, o) in &pairs {
                for (sl, incoming_if_forward) in [(i, true), (o, false)] {
                    if let Some(d) = dir[sl as usize] {
                        let f = d == incoming_if_forward;
                        match forward {
                            None => forward = Some(f),
                            Some(g) if g != f => {
                                return Err(DiagramError::InconsistentOrientation { label: label_of(sl) })
                            }
                            _ => {}
                        }
                    }
                }
            }
            let f = match forward {
                Some(f) => f,
                None => {
                    // Only over-passes: follow increasing labels.
                    let (i, o) = pairs[0];
                    let (li, lo) = (label_of(i), label_of(o));
                    let max = pairs.iter().map(|p| label_of(p.0)).max().unwrap_or(0);
                    lo == li + 1 || (li == max && lo < li)
                }
            };
            for &(i, o) in &pairs {
                dir[i as usize] = Some(f);
                dir[o as usize] = Some(!f);
            }
        }
        let orient = (0..n)
            .map(|x| {
                let over_in = if dir[slot(x, 1) as usize] == Some(true) { 1 } else { 3 };
                CrossingOrientation { under_in: 0, over_in }
            })
            .collect();
        Self::from_raw(adj, vec![0; n], Some(orient), free_loops)
    }

    /// Closure of a braid on `strands` strands. Generator `i > 0` is a
    /// right-handed crossing of strands `i − 1` and `i`; `−i` is left-handed.
    pub fn braid_closure(strands: usize, word: &[i32]) -> Result<Self, DiagramError> {
        let mut b = Builder::default();
        let tops: Vec<Port> = (0..strands).map(|_| b.wire()).collect();
        let mut ends = tops.clone();
        for &g in word {
            let i = g.unsigned_abs() as usize;
            if i == 0 || i >= strands {
                return Err(DiagramError::Malformed(format!("generator {g} out of range")));
            }
            // Slots: 0 bottom-left, 1 bottom-right, 2 top-right, 3 top-left.
            let (parity, under_in, over_in) = if g > 0 { (1, 3, 2) } else { (0, 2, 3) };
            let x = b.crossing(parity, Some(CrossingOrientation { under_in, over_in }));
            b.connect(ends[i - 1], Port::Slot(slot(x, 3)));
            b.connect(ends[i], Port::Slot(slot(x, 2)));
            ends[i - 1] = Port::Slot(slot(x, 0));
            ends[i] = Port::Slot(slot(x, 1));
        }
        for (t, e) in tops.iter().zip(&ends) {
            b.connect(*t, *e);
        }
        b.finish()
    }
}

const STRAIGHT: [u8; 4] = [2, 3, 0, 1];

pub(crate) fn pairing_with_next(p: u8) -> [u8; 4] {
    // Join u with u + 1 for the under-slots u = p, p + 2.
    let mut q = [0u8; 4];
    for u in [p, p + 2] {
        let a = u % 4;
        let b = (u + 1) % 4;
        q[a as usize] = b;
        q[b as usize] = a;
    }
    q
}

pub(crate) fn pairing_with_prev(p: u8) -> [u8; 4] {
    let mut q = [0u8; 4];
    for u in [p, p + 2] {
        let a = u % 4;
        let b = (u + 3) % 4;
        q[a as usize] = b;
        q[b as usize] = a;
    }
    q
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_pd())
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Diagram({})", self.to_pd())
    }
}

impl std::str::FromStr for Diagram {
    type Err = DiagramError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_pd(s)
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramJson {
    crossings: Vec<[u64; 4]>,
    #[serde(default)]
    free_loops: u32,
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let text = self.to_pd();
        let mut crossings = Vec::new();
        let mut free_loops = 0;
        for t in tokenize_pd(&text).map_err(serde::ser::Error::custom)? {
            match t {
                PdToken::X(l) => crossings.push(l),
                PdToken::U(k) => free_loops += k,
            }
        }
        DiagramJson { crossings, free_loops }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = DiagramJson::deserialize(d)?;
        Diagram::from_pd(&j.crossings, j.free_loops).map_err(serde::de::Error::custom)
    }
}

enum PdToken {
    X([u64; 4]),
    U(u32),
}

fn tokenize_pd(text: &str) -> Result<Vec<PdToken>, DiagramError> {
    let b = text.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let err = |pos: usize, msg: &str| DiagramError::Parse { pos, msg: msg.to_string() };
    let skip = |i: &mut usize| {
        while *i < b.len() && (b[*i].is_ascii_whitespace() || b[*i] == b',') {
            *i += 1;
        }
    };
    loop {
        skip(&mut i);
        if i >= b.len() {
            break;
        }
        let kind = b[i];
        if kind != b'X' && kind != b'U' {
            return Err(err(i, "expected X(...) or U(...)"));
        }
        i += 1;
        while i < b.len() && b[i].is_ascii_whitespace() {
            i += 1;
        }
        if i >= b.len() || (b[i] != b'(' && b[i] != b'[') {
            return Err(err(i, "expected '('"));
        }
        let close = if b[i] == b'(' { b')' } else { b']' };
        i += 1;
        let mut nums = Vec::new();
        loop {
            while i < b.len() && (b[i].is_ascii_whitespace() || b[i] == b',') {
                i += 1;
            }
            if i < b.len() && b[i] == close {
                i += 1;
                break;
            }
            let st = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            if st == i {
                return Err(err(i, "expected a positive integer label"));
            }
            let v: u64 = text[st..i].parse().map_err(|_| err(st, "label out of range"))?;
            nums.push((st, v));
        }
        match kind {
            b'X' => {
                if nums.len() != 4 {
                    return Err(err(i - 1, "a crossing needs exactly four labels"));
                }
                if let Some((p, _)) = nums.iter().find(|(_, v)| *v == 0) {
                    return Err(err(*p, "labels must be positive"));
                }
                out.push(PdToken::X([nums[0].1, nums[1].1, nums[2].1, nums[3].1]));
            }
            _ => {
                if nums.len() != 1 {
                    return Err(err(i - 1, "U takes one count"));
                }
                let k = u32::try_from(nums[0].1).map_err(|_| err(nums[0].0, "count out of range"))?;
                out.push(PdToken::U(k));
            }
        }
    }
    Ok(out)
}

/// One end of an edge while a diagram is being assembled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Port {
    Slot(u32),
    /// A point on an edge with no crossing yet; must end with degree 2.
    Wire(u32),
}

/// Assembles a diagram from crossings and edges between ports.
#[derive(Default)]
pub(crate) struct Builder {
    under: Vec<u8>,
    orient: Vec<Option<CrossingOrientation>>,
    edges: Vec<(Port, Port)>,
    wires: u32,
}

impl Builder {
    pub(crate) fn crossing(&mut self, parity: u8, orient: Option<CrossingOrientation>) -> usize {
        self.under.push(parity);
        self.orient.push(orient);
        self.under.len() - 1
    }

    pub(crate) fn wire(&mut self) -> Port {
        self.wires += 1;
        Port::Wire(self.wires - 1)
    }

    pub(crate) fn connect(&mut self, a: Port, b: Port) {
        self.edges.push((a, b));
    }

    pub(crate) fn finish(self) -> Result<Diagram, DiagramError> {
        let n = self.under.len();
        let ns = 4 * n;
        let nw = self.wires as usize;
        let idx = |p: Port| match p {
            Port::Slot(s) => s as usize,
            Port::Wire(w) => ns + w as usize,
        };
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); ns + nw];
        for &(a, b) in &self.edges {
            let (ia, ib) = (idx(a), idx(b));
            nbrs[ia].push(ib);
            nbrs[ib].push(ia);
        }
        for (i, v) in nbrs.iter().enumerate() {
            let want = if i < ns { 1 } else { 2 };
            if v.len() != want {
                return Err(DiagramError::Malformed(format!("port {i} has degree {}", v.len())));
            }
        }
        let mut adj = vec![NONE; ns];
        let mut seen = vec![false; ns + nw];
        for s in 0..ns {
            if adj[s] != NONE {
                continue;
            }
            let mut prev = s;
            let mut cur = nbrs[s][0];
            while cur >= ns {
                seen[cur] = true;
                let next = if nbrs[cur][0] == prev && nbrs[cur][1] != prev {
                    nbrs[cur][1]
                } else if nbrs[cur][1] == prev {
                    nbrs[cur][0]
                } else {
                    nbrs[cur][1]
                };
                prev = cur;
                cur = next;
            }
            adj[s] = cur as u32;
            adj[cur] = s as u32;
        }
        let mut loops = 0;
        for w in ns..ns + nw {
            if seen[w] {
                continue;
            }
            loops += 1;
            let mut prev = usize::MAX;
            let mut cur = w;
            loop {
                seen[cur] = true;
                let next = if nbrs[cur][0] != prev { nbrs[cur][0] } else { nbrs[cur][1] };
                prev = cur;
                cur = next;
                if cur == w {
                    break;
                }
            }
        }
        let orient = if self.orient.iter().all(|o| o.is_some()) {
            Some(self.orient.into_iter().map(|o| o.expect("checked")).collect())
        } else {
            None
        };
        let d = Diagram { adj, under: self.under, orient, free_loops: loops };
        d.validate()?;
        Ok(d)
    }
}
