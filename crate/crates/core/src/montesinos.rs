//! Rational tangles, Montesinos links and mutation.
//!
//! Tangle ends are NW, NE, SW, SE. A crossing used as a tangle has slots
//! `[SW, SE, NE, NW]` in counter-clockwise order. Adding a crossing on the
//! right adds 1 to the fraction; adding one below turns `F` into
//! `1/(1/F + 1)`. `M(e; β₁/α₁, …, βᵣ/αᵣ)` is the numerator closure of the
//! horizontal sum of the tangles followed by `e` horizontal half-twists. With
//! a single tangle and no half-twists the denominator closure is used, so
//! that `M(β/α)` is the two-bridge link `b(α, β)`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::diagram::{cross_of, pos_of, slot, Builder, Diagram, DiagramError, Port};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MontesinosError {
    #[error("invalid fraction {0}")]
    InvalidFraction(String),
    #[error("malformed Montesinos spec at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("a Montesinos spec needs at least one tangle")]
    NoTangles,
    #[error("no family {0}")]
    UnknownFamily(u8),
    #[error("family {family} has {size} members, asked for {variant}")]
    UnknownVariant { family: u8, variant: usize, size: usize },
    #[error("tangles {0} and {1} are not adjacent")]
    NotAdjacent(usize, usize),
    #[error("not covered by the classification: {0}")]
    NotClassifiable(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

/// `β/α` in lowest terms with `α ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "FractionRepr", into = "FractionRepr")]
pub struct Fraction {
    beta: i64,
    alpha: i64,
}

#[derive(Serialize, Deserialize)]
struct FractionRepr {
    beta: i64,
    alpha: i64,
}

impl TryFrom<FractionRepr> for Fraction {
    type Error = MontesinosError;

    fn try_from(r: FractionRepr) -> Result<Self, Self::Error> {
        Fraction::new(r.beta, r.alpha)
    }
}

impl From<Fraction> for FractionRepr {
    fn from(f: Fraction) -> Self {
        FractionRepr { beta: f.beta, alpha: f.alpha }
    }
}

impl Fraction {
    pub fn new(beta: i64, alpha: i64) -> Result<Self, MontesinosError> {
        if alpha < 1 || beta.gcd(&alpha) != 1 {
            return Err(MontesinosError::InvalidFraction(format!("{beta}/{alpha}")));
        }
        Ok(Self { beta, alpha })
    }

    pub fn beta(self) -> i64 {
        self.beta
    }

    pub fn alpha(self) -> i64 {
        self.alpha
    }

    pub fn to_ratio(self) -> Ratio<i64> {
        Ratio::new(self.beta, self.alpha)
    }

    /// `β/α mod 1` in `[0, 1)`.
    pub fn mod_one(self) -> Ratio<i64> {
        Ratio::new(self.beta.rem_euclid(self.alpha), self.alpha)
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.alpha == 1 {
            write!(f, "{}", self.beta)
        } else {
            write!(f, "{}/{}", self.beta, self.alpha)
        }
    }
}

impl FromStr for Fraction {
    type Err = MontesinosError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || MontesinosError::InvalidFraction(s.trim().to_string());
        let (b, a) = match s.split_once('/') {
            Some((b, a)) => (b.trim(), a.trim()),
            None => (s.trim(), "1"),
        };
        let beta: i64 = b.parse().map_err(|_| bad())?;
        let alpha: i64 = a.parse().map_err(|_| bad())?;
        Fraction::new(beta, alpha).map_err(|_| bad())
    }
}

/// `M(e; β₁/α₁, …, βᵣ/αᵣ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MontesinosSpec {
    #[serde(default)]
    pub e: i64,
    pub tangles: Vec<Fraction>,
}

impl MontesinosSpec {
    pub fn new(e: i64, tangles: Vec<Fraction>) -> Result<Self, MontesinosError> {
        if tangles.is_empty() {
            return Err(MontesinosError::NoTangles);
        }
        Ok(Self { e, tangles })
    }

    /// `e + Σ βᵢ/αᵢ`.
    pub fn e0(&self) -> Ratio<i64> {
        self.tangles.iter().fold(Ratio::from_integer(self.e), |acc, f| acc + f.to_ratio())
    }

    /// Crossings of the standard diagram.
    pub fn crossing_count(&self) -> usize {
        self.e.unsigned_abs() as usize
            + self
                .tangles
                .iter()
                .map(|f| continued_fraction(*f).iter().map(|a| a.unsigned_abs() as usize).sum::<usize>())
                .sum::<usize>()
    }
}

impl fmt::Display for MontesinosSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("M(")?;
        if self.e != 0 {
            write!(f, "{}; ", self.e)?;
        }
        for (i, t) in self.tangles.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for MontesinosSpec {
    type Err = MontesinosError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |pos: usize, msg: &str| MontesinosError::Parse { pos, msg: msg.to_string() };
        let t = s.trim_start();
        let lead = s.len() - t.len();
        let body = t.strip_prefix('M').ok_or_else(|| err(lead, "expected 'M('"))?;
        let body = body.trim_start();
        let open = s.len() - body.len();
        let body = body.strip_prefix('(').ok_or_else(|| err(open, "expected '('"))?;
        let body = body.trim_end();
        let inner = body.strip_suffix(')').ok_or_else(|| err(s.trim_end().len(), "expected ')'"))?;
        let start = open + 1;
        let (e, list, list_start) = match inner.split_once(';') {
            Some((e, rest)) => {
                let e: i64 = e.trim().parse().map_err(|_| err(start, "half-twist count must be an integer"))?;
                (e, rest, start + inner.find(';').expect("split") + 1)
            }
            None => (0, inner, start),
        };
        let mut tangles = Vec::new();
        let mut pos = list_start;
        for piece in list.split(',') {
            if piece.trim().is_empty() {
                return Err(err(pos, "empty tangle entry"));
            }
            let f: Fraction = piece.parse().map_err(|e: MontesinosError| err(pos, &e.to_string()))?;
            tangles.push(f);
            pos += piece.len() + 1;
        }
        MontesinosSpec::new(e, tangles)
    }
}

/// Twist counts for the rational tangle of `f`, innermost region first.
///
/// Directions alternate from the outermost region inwards; the outermost is
/// vertical when `|f| < 1` and horizontal otherwise. The innermost region
/// twists the `[0]` tangle if horizontal and the `[∞]` tangle if vertical.
/// Negative fractions negate every entry.
pub fn continued_fraction(f: Fraction) -> Vec<i64> {
    let sign = f.beta.signum();
    let (mut p, mut q) = (f.beta.abs(), f.alpha);
    // Regular expansion of p/q, outermost first.
    let mut cf = Vec::new();
    while q != 0 {
        cf.push(p / q);
        let r = p % q;
        p = q;
        q = r;
    }
    if cf.first() == Some(&0) {
        cf.remove(0);
    }
    cf.reverse();
    cf.into_iter().map(|a| a * sign).collect()
}

/// One twist region of a built diagram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistRegion {
    /// Index of the tangle, or `r` for the trailing half-twists.
    pub tangle: usize,
    pub vertical: bool,
    /// Crossings in the order they were added (innermost first).
    pub crossings: Vec<usize>,
    /// `+1` for positively twisted regions.
    pub handedness: i8,
}

/// A Montesinos diagram together with its twist regions.
#[derive(Debug, Clone)]
pub struct BuiltMontesinos {
    pub diagram: Diagram,
    pub regions: Vec<TwistRegion>,
}

/// Under parity of a crossing that twists positively. With slots
/// `[SW, SE, NE, NW]`, parity 1 puts the SW–NE strand over.
pub(crate) const POSITIVE_TWIST_PARITY: u8 = 1;

#[derive(Clone, Copy)]
struct Tangle {
    nw: Port,
    ne: Port,
    sw: Port,
    se: Port,
}

struct TangleBuilder {
    b: Builder,
    regions: Vec<TwistRegion>,
}

impl TangleBuilder {
    fn zero(&mut self) -> Tangle {
        let top = self.b.wire();
        let bottom = self.b.wire();
        Tangle { nw: top, ne: top, sw: bottom, se: bottom }
    }

    fn infinity(&mut self) -> Tangle {
        let left = self.b.wire();
        let right = self.b.wire();
        Tangle { nw: left, sw: left, ne: right, se: right }
    }

    fn twist(&mut self, t: Tangle, count: i64, vertical: bool, tangle: usize) -> Tangle {
        let parity = if count > 0 { POSITIVE_TWIST_PARITY } else { 1 - POSITIVE_TWIST_PARITY };
        let mut t = t;
        let mut crossings = Vec::new();
        for _ in 0..count.unsigned_abs() {
            let x = self.b.crossing(parity, None);
            crossings.push(x);
            let (sw, se, ne, nw) =
                (Port::Slot(slot(x, 0)), Port::Slot(slot(x, 1)), Port::Slot(slot(x, 2)), Port::Slot(slot(x, 3)));
            if vertical {
                self.b.connect(nw, t.sw);
                self.b.connect(ne, t.se);
                t = Tangle { nw: t.nw, ne: t.ne, sw, se };
            } else {
                self.b.connect(nw, t.ne);
                self.b.connect(sw, t.se);
                t = Tangle { nw: t.nw, sw: t.sw, ne, se };
            }
        }
        if !crossings.is_empty() {
            self.regions.push(TwistRegion { tangle, vertical, crossings, handedness: count.signum() as i8 });
        }
        t
    }

    fn rational(&mut self, f: Fraction, tangle: usize) -> Tangle {
        let cf = continued_fraction(f);
        let k = cf.len();
        let outer_vertical = f.beta.abs() < f.alpha;
        // Direction of entry i (innermost first).
        let vertical_at = |i: usize| outer_vertical ^ ((k - 1 - i) % 2 == 1);
        let mut t = if k > 0 && vertical_at(0) { self.infinity() } else { self.zero() };
        for (i, &a) in cf.iter().enumerate() {
            t = self.twist(t, a, vertical_at(i), tangle);
        }
        t
    }
}

/// Standard diagram of a Montesinos link, oriented by walking each component.
pub fn build_diagram(spec: &MontesinosSpec) -> Result<Diagram, MontesinosError> {
    Ok(build_with_regions(spec)?.diagram)
}

pub fn build_with_regions(spec: &MontesinosSpec) -> Result<BuiltMontesinos, MontesinosError> {
    if spec.tangles.is_empty() {
        return Err(MontesinosError::NoTangles);
    }
    let mut tb = TangleBuilder { b: Builder::default(), regions: Vec::new() };
    let mut parts: Vec<Tangle> = spec.tangles.iter().enumerate().map(|(i, f)| tb.rational(*f, i)).collect();
    if spec.e != 0 {
        let z = tb.zero();
        let t = tb.twist(z, spec.e, false, spec.tangles.len());
        parts.push(t);
    }
    for w in parts.windows(2) {
        tb.b.connect(w[0].ne, w[1].nw);
        tb.b.connect(w[0].se, w[1].sw);
    }
    let first = parts[0];
    let last = parts[parts.len() - 1];
    if parts.len() == 1 {
        // A lone tangle closes to the two-bridge link b(α, β).
        tb.b.connect(first.nw, first.sw);
        tb.b.connect(first.ne, first.se);
    } else {
        tb.b.connect(first.nw, last.ne);
        tb.b.connect(first.sw, last.se);
    }
    let diagram = tb.b.finish()?.oriented();
    Ok(BuiltMontesinos { diagram, regions: tb.regions })
}

/// Members of each mutant family, as `(β, α)` for the first three tangles.
const FAMILIES: [&[[(i64, i64); 3]]; 7] = [
    &[[(2, 3), (-2, 3), (2, 3)], [(-2, 3), (2, 3), (2, 3)]],
    &[[(1, 2), (2, 3), (-2, 3)], [(1, 2), (-2, 3), (2, 3)]],
    &[[(-2, 3), (2, 3), (2, 3)], [(2, 3), (-2, 3), (2, 3)]],
    &[[(-3, 5), (2, 3), (2, 3)], [(2, 3), (-3, 5), (2, 3)]],
    &[[(-3, 5), (-2, 3), (-2, 3)], [(-2, 3), (-3, 5), (-2, 3)]],
    &[[(1, 2), (3, 5), (-2, 3)], [(1, 2), (-2, 3), (3, 5)]],
    &[[(3, 5), (-2, 3), (2, 3)], [(3, 5), (2, 3), (-2, 3)], [(2, 3), (3, 5), (-2, 3)]],
];

/// Denominator offset of the twist tangle `1/(2n + k)` per family.
const TWIST_OFFSET: [i64; 7] = [2, 3, 3, 2, 2, 3, 2];

pub fn family_size(theorem: u8) -> Result<usize, MontesinosError> {
    FAMILIES.get((theorem as usize).wrapping_sub(1)).map(|f| f.len()).ok_or(MontesinosError::UnknownFamily(theorem))
}

/// Twist-tangle denominator `2n + 2` or `2n + 3` of a family.
pub fn twist_denominator(theorem: u8, n: u32) -> Result<i64, MontesinosError> {
    family_size(theorem)?;
    Ok(2 * n as i64 + TWIST_OFFSET[theorem as usize - 1])
}

/// Member `variant` of mutant family `theorem` (1 to 7) with parameter `n`.
pub fn family(theorem: u8, variant: usize, n: u32) -> Result<MontesinosSpec, MontesinosError> {
    let size = family_size(theorem)?;
    let members = FAMILIES[theorem as usize - 1];
    let m = members.get(variant).ok_or(MontesinosError::UnknownVariant { family: theorem, variant, size })?;
    let mut tangles: Vec<Fraction> = m.iter().map(|&(b, a)| Fraction::new(b, a).expect("coprime")).collect();
    tangles.push(Fraction::new(1, twist_denominator(theorem, n)?).expect("unit fraction"));
    MontesinosSpec::new(0, tangles)
}

/// Swaps two adjacent tangles.
pub fn mutate_spec(spec: &MontesinosSpec, i: usize, j: usize) -> Result<MontesinosSpec, MontesinosError> {
    let r = spec.tangles.len();
    if i >= r || j >= r || i.abs_diff(j) != 1 {
        return Err(MontesinosError::NotAdjacent(i, j));
    }
    let mut out = spec.clone();
    out.tangles.swap(i, j);
    Ok(out)
}

/// Axis of a half-turn applied to a tangle disk.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Ew,
    Ns,
    Vertical,
}

impl FromStr for Axis {
    type Err = MontesinosError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ew" => Ok(Axis::Ew),
            "ns" => Ok(Axis::Ns),
            "vertical" => Ok(Axis::Vertical),
            _ => Err(MontesinosError::Parse { pos: 0, msg: format!("unknown axis {s}") }),
        }
    }
}

/// Boundary slots of a crossing set in counter-clockwise order around it.
fn disk_boundary(d: &Diagram, inside: &[bool]) -> Result<Vec<u32>, DiagramError> {
    let adj = d.adj();
    let boundary: Vec<u32> = (0..adj.len() as u32)
        .filter(|&s| inside[cross_of(s)] && !inside[cross_of(adj[s as usize])])
        .collect();
    if boundary.len() != 4 {
        return Err(DiagramError::NotATangle(format!("{} edges cross the disk boundary", boundary.len())));
    }
    let mut order = vec![boundary[0]];
    let mut cur = boundary[0];
    for _ in 0..4 * adj.len() {
        let mut next = slot(cross_of(cur), pos_of(cur) + 1);
        while inside[cross_of(adj[next as usize])] {
            let far = adj[next as usize];
            next = slot(cross_of(far), pos_of(far) + 1);
        }
        if next == order[0] {
            break;
        }
        order.push(next);
        cur = next;
    }
    if order.len() != 4 {
        return Err(DiagramError::NotATangle("boundary points do not bound one disk".into()));
    }
    // Start at the point whose outside neighbour is lowest; the outside is
    // left alone by mutation, so the numbering survives it.
    let first = (0..4).min_by_key(|&i| adj[order[i] as usize]).expect("four points");
    order.rotate_left(first);
    Ok(order)
}

/// Conway mutation: turns the tangle on `disk` by a half-turn about `axis`.
///
/// Boundary points are numbered counter-clockwise, starting from the one
/// joined to the lowest outside slot. `Ns` exchanges points 0↔1 and 2↔3, `Ew` exchanges 0↔3 and 1↔2, and
/// `Vertical` exchanges opposite points. The result is re-oriented by walking
/// each component.
pub fn mutate_diagram(d: &Diagram, disk: &[usize], axis: Axis) -> Result<Diagram, MontesinosError> {
    let n = d.crossing_count();
    let mut inside = vec![false; n];
    for &x in disk {
        if x >= n {
            return Err(DiagramError::InvalidCrossing(x).into());
        }
        inside[x] = true;
    }
    if disk.is_empty() {
        return Err(DiagramError::NotATangle("empty disk".into()).into());
    }
    let order = disk_boundary(d, &inside)?;
    let adj = d.adj();
    let flip = axis != Axis::Vertical;
    let map = |s: u32| {
        let x = cross_of(s);
        if inside[x] && flip {
            slot(x, 4 - pos_of(s))
        } else {
            s
        }
    };
    let target = |i: usize| match axis {
        Axis::Vertical => (i + 2) % 4,
        Axis::Ns => [1, 0, 3, 2][i],
        Axis::Ew => [3, 2, 1, 0][i],
    };
    let mut new_adj = vec![0u32; adj.len()];
    for s in 0..adj.len() as u32 {
        new_adj[map(s) as usize] = map(adj[s as usize]);
    }
    let outside: Vec<u32> = order.iter().map(|&b| adj[b as usize]).collect();
    for (i, &b) in order.iter().enumerate() {
        let e = outside[target(i)];
        new_adj[map(b) as usize] = e;
        new_adj[e as usize] = map(b);
    }
    let under = (0..n)
        .map(|x| {
            let p = d.under_parity(x) as u8;
            if inside[x] && flip {
                1 - p
            } else {
                p
            }
        })
        .collect();
    Ok(Diagram::from_raw(new_adj, under, None, d.free_loops())?.oriented())
}

fn classifiable(s: &MontesinosSpec) -> Result<(), MontesinosError> {
    let r = s.tangles.len();
    if r < 3 {
        return Err(MontesinosError::NotClassifiable(format!("{s} has fewer than three tangles")));
    }
    let sum = s.tangles.iter().fold(Ratio::from_integer(0i64), |acc, f| acc + Ratio::new(1, f.alpha));
    if sum > Ratio::from_integer(r as i64 - 2) {
        return Err(MontesinosError::NotClassifiable(format!("{s} has Σ1/α = {sum} > {}", r - 2)));
    }
    Ok(())
}

/// Equality of Montesinos links: the fractions mod 1 agree up to rotation
/// and reversal, and `e₀` agrees.
pub fn classify_equal(s1: &MontesinosSpec, s2: &MontesinosSpec) -> Result<bool, MontesinosError> {
    classifiable(s1)?;
    classifiable(s2)?;
    if s1.e0() != s2.e0() || s1.tangles.len() != s2.tangles.len() {
        return Ok(false);
    }
    let a: Vec<Ratio<i64>> = s1.tangles.iter().map(|f| f.mod_one()).collect();
    let b: Vec<Ratio<i64>> = s2.tangles.iter().map(|f| f.mod_one()).collect();
    let r = a.len();
    let rev: Vec<Ratio<i64>> = b.iter().rev().copied().collect();
    Ok((0..r).any(|k| {
        (0..r).all(|i| a[i] == b[(i + k) % r]) || (0..r).all(|i| a[i] == rev[(i + k) % r])
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jones::jones;
    use crate::kauffman::{kauffman_f, SkeinConfig};
    use crate::laurent::LaurentPoly;

    fn spec(s: &str) -> MontesinosSpec {
        s.parse().unwrap()
    }

    #[test]
    fn fractions() {
        assert!(Fraction::new(2, 4).is_err());
        assert!(Fraction::new(1, 0).is_err());
        assert_eq!("-2/3".parse::<Fraction>().unwrap(), Fraction::new(-2, 3).unwrap());
        assert_eq!(Fraction::new(-2, 3).unwrap().mod_one(), Ratio::new(1, 3));
        assert_eq!(continued_fraction(Fraction::new(1, 2).unwrap()), vec![2]);
        assert_eq!(continued_fraction(Fraction::new(1, 4).unwrap()), vec![4]);
        assert_eq!(continued_fraction(Fraction::new(2, 3).unwrap()), vec![2, 1]);
        assert_eq!(continued_fraction(Fraction::new(-3, 5).unwrap()), vec![-2, -1, -1]);
        assert_eq!(continued_fraction(Fraction::new(7, 3).unwrap()), vec![3, 2]);
        assert_eq!(continued_fraction(Fraction::new(0, 1).unwrap()), Vec::<i64>::new());
    }

    #[test]
    fn spec_text_and_json() {
        let s = spec("M(2/3, -2/3, 2/3, 1/2)");
        assert_eq!(s.to_string(), "M(2/3,-2/3,2/3,1/2)");
        assert_eq!(spec(&s.to_string()), s);
        let e = spec("M(-1; 1/2, 1/3, 1/5)");
        assert_eq!(e.e, -1);
        assert_eq!(e.to_string(), "M(-1; 1/2,1/3,1/5)");
        assert_eq!(spec(&e.to_string()), e);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<MontesinosSpec>(&j).unwrap(), s);
        assert!(serde_json::from_str::<MontesinosSpec>(r#"{"tangles":[{"beta":2,"alpha":4}]}"#).is_err());
        assert!(matches!("M()".parse::<MontesinosSpec>(), Err(MontesinosError::Parse { .. })));
        assert!(matches!("N(1/2)".parse::<MontesinosSpec>(), Err(MontesinosError::Parse { pos: 0, .. })));
    }

    #[test]
    fn small_closures() {
        let hopf = build_diagram(&spec("M(1/2)")).unwrap();
        assert_eq!(hopf.crossing_count(), 2);
        assert_eq!(hopf.component_count(), 2);
        // b(3, 2) is a trefoil.
        let t = build_diagram(&spec("M(2/3)")).unwrap();
        assert_eq!(t.crossing_count(), 3);
        let v = jones(&t).unwrap();
        let tref: LaurentPoly = "t^-1 + t^-3 - t^-4".parse().unwrap();
        assert!(v == tref || v == tref.invert(), "{v}");
        let u = build_diagram(&spec("M(3)")).unwrap();
        assert_eq!(jones(&u).unwrap(), LaurentPoly::one());
    }

    #[test]
    fn families() {
        assert_eq!(family(1, 0, 0).unwrap(), spec("M(2/3,-2/3,2/3,1/2)"));
        assert_eq!(family(7, 2, 0).unwrap(), spec("M(2/3,3/5,-2/3,1/2)"));
        assert_eq!(family(2, 1, 1).unwrap(), spec("M(1/2,-2/3,2/3,1/5)"));
        assert!(matches!(family(8, 0, 0), Err(MontesinosError::UnknownFamily(8))));
        assert!(matches!(family(1, 2, 0), Err(MontesinosError::UnknownVariant { .. })));
        for k in 1..=7u8 {
            for n in 0..3 {
                for v in 0..family_size(k).unwrap() {
                    let s = family(k, v, n).unwrap();
                    let d = build_diagram(&s).unwrap();
                    let want = 2 * n as usize + if k <= 2 { 11 } else { 12 };
                    assert_eq!(d.crossing_count(), want);
                    assert_eq!(s.crossing_count(), want);
                    assert_eq!(d.component_count(), 1);
                }
            }
        }
    }

    #[test]
    fn printed_jones_values() {
        let v = jones(&build_diagram(&spec("M(2/3,-2/3,2/3,1/2)")).unwrap()).unwrap();
        let want: LaurentPoly =
            "-2 + 5t - 7t^2 + 11t^3 - 10t^4 + 10t^5 - 9t^6 + 5t^7 - 3t^8 + t^9".parse().unwrap();
        assert_eq!(v, want);
        let v = jones(&build_diagram(&spec("M(1/2,2/3,-2/3,1/3)")).unwrap()).unwrap();
        let want: LaurentPoly =
            "t^-8 - 4t^-7 + 5t^-6 - 7t^-5 + 8t^-4 - 6t^-3 + 7t^-2 - 4t^-1 + 2 - t".parse().unwrap();
        assert_eq!(v, want);
    }

    #[test]
    fn mutation_of_specs() {
        let s = family(1, 0, 0).unwrap();
        let m = mutate_spec(&s, 0, 1).unwrap();
        assert_eq!(m, family(1, 1, 0).unwrap());
        assert_eq!(mutate_spec(&m, 0, 1).unwrap(), s);
        assert!(matches!(mutate_spec(&s, 0, 2), Err(MontesinosError::NotAdjacent(0, 2))));
    }

    #[test]
    fn mutation_of_diagrams() {
        let cfg = SkeinConfig::default();
        let built = build_with_regions(&spec("M(2/3,-2/3,2/3,1/2)")).unwrap();
        let d = &built.diagram;
        let f = kauffman_f(d, &cfg).unwrap();
        let v = jones(d).unwrap();
        // The disk holding the first two tangles.
        let disk: Vec<usize> =
            built.regions.iter().filter(|r| r.tangle < 2).flat_map(|r| r.crossings.clone()).collect();
        for axis in [Axis::Ew, Axis::Ns, Axis::Vertical] {
            let m = mutate_diagram(d, &disk, axis).unwrap();
            assert_eq!(m.crossing_count(), d.crossing_count());
            assert_eq!(m.component_count(), 1);
            assert_eq!(jones(&m).unwrap(), v);
            let fm = kauffman_f(&m, &cfg).unwrap();
            assert_eq!(fm, f);
            let back = mutate_diagram(&m, &disk, axis).unwrap();
            assert_eq!(back.canonical_code(), d.canonical_code());
        }
        let ns_then_ew = mutate_diagram(&mutate_diagram(d, &disk, Axis::Ns).unwrap(), &disk, Axis::Ew).unwrap();
        let vert = mutate_diagram(d, &disk, Axis::Vertical).unwrap();
        assert_eq!(ns_then_ew.canonical_code(), vert.canonical_code());
        let all: Vec<usize> = (0..d.crossing_count()).collect();
        assert!(matches!(mutate_diagram(d, &all, Axis::Ns), Err(MontesinosError::Diagram(DiagramError::NotATangle(_)))));
        assert!(matches!(mutate_diagram(d, &[0, 5], Axis::Ns), Err(MontesinosError::Diagram(DiagramError::NotATangle(_)))));
    }

    #[test]
    fn classification() {
        let a = family(1, 0, 0).unwrap();
        let b = family(1, 1, 0).unwrap();
        assert_eq!(a.e0(), Ratio::new(7, 6));
        assert_eq!(b.e0(), Ratio::new(7, 6));
        assert!(!classify_equal(&a, &b).unwrap());
        let mut rot = a.clone();
        rot.tangles.rotate_left(1);
        assert!(classify_equal(&a, &rot).unwrap());
        let mut rev = a.clone();
        rev.tangles.reverse();
        assert!(classify_equal(&a, &rev).unwrap());
        let mut shifted = a.clone();
        shifted.tangles[0] = Fraction::new(5, 3).unwrap();
        shifted.e -= 1;
        assert!(classify_equal(&a, &shifted).unwrap());
        assert!(matches!(classify_equal(&spec("M(1/2,1/3)"), &a), Err(MontesinosError::NotClassifiable(_))));
        assert!(matches!(classify_equal(&spec("M(1/2,1/2,1/3)"), &a), Err(MontesinosError::NotClassifiable(_))));
        for k in 1..=7u8 {
            let size = family_size(k).unwrap();
            for i in 0..size {
                for j in 0..size {
                    let same = classify_equal(&family(k, i, 1).unwrap(), &family(k, j, 1).unwrap()).unwrap();
                    assert_eq!(same, i == j, "family {k}: {i} vs {j}");
                }
            }
        }
    }
}
