//! Jones polynomial from the bracket state sum.
//!
//! `⟨D⟩ = Σ_S A^{#A(S) − #B(S)} d^{|S| − 1}` with `d = −A² − A^{−2}`, and
//! `V(t) = (−A³)^{−w(D)} ⟨D⟩` at `A = t^{1/4}`. With this substitution V
//! satisfies `t V(L₊) − t^{−1} V(L₋) = (t^{−1/2} − t^{1/2}) V(L₀)` where `L₊`
//! has a right-handed crossing.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::diagram::{slot, Diagram, DiagramError};
use crate::laurent::{LaurentError, LaurentPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JonesError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("state sum over {0} crossings is too large")]
    TooManyCrossings(usize),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Largest diagram accepted by the state sum.
pub const MAX_STATE_SUM_CROSSINGS: usize = 30;

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        let p = parent[parent[x as usize] as usize];
        parent[x as usize] = p;
        x = p;
    }
    x
}

/// Bracket polynomial as a map from powers of `A`, stored in a
/// [`LaurentPoly`] whose exponent field holds the power of `A`.
fn bracket(d: &Diagram) -> Result<LaurentPoly, JonesError> {
    let n = d.crossing_count();
    if n > MAX_STATE_SUM_CROSSINGS {
        return Err(JonesError::TooManyCrossings(n));
    }
    if n == 0 {
        return Ok(loop_power(d.free_loops() as usize - 1));
    }
    // Number the edges; edge_of[slot] is the edge at that slot.
    let adj = d.adj();
    let mut edge_of = vec![u32::MAX; 4 * n];
    let mut e = 0;
    for s in 0..4 * n {
        if edge_of[s] == u32::MAX {
            edge_of[s] = e;
            edge_of[adj[s] as usize] = e;
            e += 1;
        }
    }
    // Edge pairs joined by the A and B smoothings at each crossing.
    let joins: Vec<[[u32; 2]; 2]> = (0..n)
        .map(|x| {
            let p = d.under_parity(x);
            let ed = |k: usize| edge_of[slot(x, p + k) as usize];
            [[ed(0), ed(1)], [ed(2), ed(3)]]
        })
        .collect();
    let joins_b: Vec<[[u32; 2]; 2]> = (0..n)
        .map(|x| {
            let p = d.under_parity(x);
            let ed = |k: usize| edge_of[slot(x, p + k) as usize];
            [[ed(0), ed(3)], [ed(1), ed(2)]]
        })
        .collect();
    let edges = e as usize;
    // counts[a][loops]: number of states with `a` A-smoothings.
    let mut counts = vec![vec![0u64; edges + 2]; n + 1];
    let mut parent = vec![0u32; edges];
    for state in 0u64..(1u64 << n) {
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u32;
        }
        let mut comps = edges;
        for x in 0..n {
            let j = if state >> x & 1 == 0 { &joins[x] } else { &joins_b[x] };
            for [u, v] in j {
                let (ru, rv) = (find(&mut parent, *u), find(&mut parent, *v));
                if ru != rv {
                    parent[ru as usize] = rv;
                    comps -= 1;
                }
            }
        }
        let a = n - state.count_ones() as usize;
        counts[a][comps] += 1;
    }
    let extra = d.free_loops() as usize;
    let mut out = LaurentPoly::zero();
    for (a, row) in counts.iter().enumerate() {
        for (loops, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let shift = 2 * a as i32 - n as i32;
            out += &loop_power(loops + extra - 1).scale(c, shift);
        }
    }
    Ok(out)
}

/// `(−A² − A^{−2})^k` with exponents in `A`.
fn loop_power(k: usize) -> LaurentPoly {
    LaurentPoly::from_terms([(2, -1), (-2, -1)]).pow(k as u32)
}

/// Jones polynomial of an oriented diagram.
pub fn jones(d: &Diagram) -> Result<LaurentPoly, JonesError> {
    let w = d.writhe()?;
    let b = bracket(d)?;
    // (−A³)^{−w} then A^k = t^{k/4}, i.e. doubled t-exponent k/2.
    let sign: i32 = if w % 2 == 0 { 1 } else { -1 };
    let b = b.scale(sign, -3 * w);
    let terms: Vec<(i32, BigInt)> = b
        .terms()
        .map(|(k, c)| {
            debug_assert!(k % 2 == 0);
            (k / 2, c.clone())
        })
        .collect();
    Ok(LaurentPoly::from_terms(terms))
}

/// The links `L₊`, `L₋`, `L₀` of the oriented skein relation at crossing `c`.
pub fn skein_triple(d: &Diagram, c: usize) -> Result<(Diagram, Diagram, Diagram), DiagramError> {
    let sign = d.crossing_sign(c).ok_or(if c < d.crossing_count() {
        DiagramError::Unoriented
    } else {
        DiagramError::InvalidCrossing(c)
    })?;
    let other = d.switch(c)?;
    let zero = d.oriented_smoothing(c)?;
    Ok(if sign > 0 { (d.clone(), other, zero) } else { (other, d.clone(), zero) })
}

/// Checks `t V₊ − t^{−1} V₋ = (t^{−1/2} − t^{1/2}) V₀`.
pub fn skein_relation_holds(vp: &LaurentPoly, vm: &LaurentPoly, v0: &LaurentPoly) -> bool {
    let lhs = &vp.scale(1, 2) - &vm.scale(1, -2);
    let rhs = &v0.scale(1, -1) - &v0.scale(1, 1);
    lhs == rhs
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotSemiAlternating,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    #[serde(with = "ratio_str")]
    pub breadth: Ratio<i64>,
    #[serde(with = "pair_str")]
    pub extreme_coeffs: (BigInt, BigInt),
    pub crossing_number: u32,
    pub verdict: Verdict,
    pub reasons: Vec<String>,
}

mod ratio_str {
    use num_rational::Ratio;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Ratio<i64>, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Ratio<i64>, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

mod pair_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(p: &(BigInt, BigInt), s: S) -> Result<S::Ok, S::Error> {
        serde::Serialize::serialize(&[p.0.to_string(), p.1.to_string()], s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<(BigInt, BigInt), D::Error> {
        let [a, b] = <[String; 2]>::deserialize(d)?;
        let p = |x: String| x.parse().map_err(serde::de::Error::custom);
        Ok((p(a)?, p(b)?))
    }
}

/// A semi-alternating diagram with `n` crossings has Jones breadth `n − 1`
/// and extreme coefficients `±1`. Since `n` is at least the crossing number
/// `c`, a breadth below `c − 1` or another extreme coefficient rules such a
/// diagram out.
pub fn semi_alternating_obstruction(v: &LaurentPoly, c: u32) -> Result<ObstructionReport, JonesError> {
    let breadth = v.breadth_t()?;
    let (lo, hi) = v.extreme_coefficients()?;
    let mut reasons = Vec::new();
    if breadth < Ratio::from_integer(c as i64 - 1) {
        reasons.push(format!("breadth {breadth} is less than crossing number minus one ({})", c as i64 - 1));
    }
    for (name, k) in [("lowest", &lo), ("highest", &hi)] {
        if !k.abs().is_one() {
            reasons.push(format!("{name} coefficient {k} is not ±1"));
        }
    }
    let verdict = if reasons.is_empty() { Verdict::Inconclusive } else { Verdict::NotSemiAlternating };
    Ok(ObstructionReport { breadth, extreme_coeffs: (lo, hi), crossing_number: c, verdict, reasons })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::{random_braid, TREFOIL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small_values() {
        assert_eq!(jones(&Diagram::unknot()).unwrap(), LaurentPoly::one());
        assert_eq!(jones(&Diagram::parse_pd("X(1,2,2,1)").unwrap()).unwrap(), LaurentPoly::one());
        assert_eq!(jones(&Diagram::unknot().mirror()).unwrap(), LaurentPoly::one());
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        // Right-handed trefoil in this variable convention.
        let want: LaurentPoly = "t^-1 + t^-3 - t^-4".parse().unwrap();
        assert_eq!(jones(&d).unwrap(), want);
        assert_eq!(jones(&d.mirror()).unwrap(), want.invert());
        let unlink = Diagram::unlink(2);
        assert_eq!(jones(&unlink).unwrap(), "-t^(-1/2) - t^(1/2)".parse().unwrap());
    }

    #[test]
    fn skein_relation_at_every_crossing() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let mut cases = vec![d];
        cases.extend((0..40).map(|_| random_braid(&mut rng, 8)));
        for d in cases {
            for c in 0..d.crossing_count() {
                let (p, m, z) = skein_triple(&d, c).unwrap();
                let (vp, vm, v0) = (jones(&p).unwrap(), jones(&m).unwrap(), jones(&z).unwrap());
                assert!(skein_relation_holds(&vp, &vm, &v0), "{d} at {c}");
            }
        }
    }

    #[test]
    fn exponent_lattice_and_mirror() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let d = random_braid(&mut rng, 8);
            let v = jones(&d).unwrap();
            if d.component_count() % 2 == 1 {
                assert!(v.has_integer_exponents());
            } else {
                assert!(v.has_half_integer_exponents());
            }
            assert_eq!(jones(&d.mirror()).unwrap(), v.invert());
        }
    }

    #[test]
    fn obstruction() {
        let r = semi_alternating_obstruction(&LaurentPoly::one(), 0).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        let v: LaurentPoly = "-2 + 5*t - 7*t^2 + 11*t^3 - 10*t^4 + 10*t^5 - 9*t^6 + 5*t^7 - 3*t^8 + t^9".parse().unwrap();
        let r = semi_alternating_obstruction(&v, 11).unwrap();
        assert_eq!(r.verdict, Verdict::NotSemiAlternating);
        assert_eq!(r.reasons.len(), 2);
        assert_eq!(r.breadth, Ratio::from_integer(9));
        let tref = jones(&Diagram::parse_pd(TREFOIL).unwrap()).unwrap();
        assert_eq!(semi_alternating_obstruction(&tref, 3).unwrap().verdict, Verdict::Inconclusive);
        let j = serde_json::to_value(&r).unwrap();
        assert_eq!(j["verdict"], "not_semi_alternating");
    }

    #[test]
    fn state_sum_guard() {
        assert!(matches!(bracket(&Diagram::braid_closure(2, &[1; 31]).unwrap()), Err(JonesError::TooManyCrossings(31))));
    }
}
