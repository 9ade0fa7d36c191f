//! Kauffman polynomial by skein recursion.
//!
//! `Λ` is an invariant of unoriented diagrams up to regular isotopy, fixed by
//!
//! - `Λ(O) = 1`,
//! - `Λ(D₊) + Λ(D₋) = z (Λ(D_A) + Λ(D_B))` for the crossing change and the
//!   two smoothings at one crossing,
//! - `Λ(D) = a^{±1} Λ(D')` when `D` is `D'` with one added right- or
//!   left-handed kink.
//!
//! `F = a^{−w(D)} Λ` is then an invariant of oriented links.
//!
//! The recursion walks every component from its lowest slot. A diagram
//! whose crossings are all first met on the over-strand is a stacked unlink
//! and evaluates to `a^{self-writhe} δ^{k−1}`. Otherwise the first crossing met
//! from below is switched, which moves the diagram towards a descending one.
//! Kinks and, optionally, Reidemeister-II bigons are removed before each
//! step, and connected pieces are memoized on their canonical code.

use rustc_hash::FxHashMap;

use crate::diagram::{cross_of, pos_of, slot, CrossingOrientation, Diagram};
use crate::laurent::{BiLaurent, BracketForm, LaurentError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KauffmanError {
    #[error("diagram has {crossings} crossings, budget is {max}")]
    BudgetExceeded { crossings: usize, max: usize },
    #[error("diagram is not oriented")]
    Unoriented,
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Which crossing to branch on when a diagram is not descending.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Strategy {
    /// The first crossing reached on its under-strand.
    FirstNonDescending,
    /// A crossing whose change creates a removable bigon, else the first.
    #[default]
    PreferBigon,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SkeinConfig {
    pub max_crossings: usize,
    pub memo_enabled: bool,
    pub strategy: Strategy,
    /// Remove Reidemeister-II bigons as well as kinks before branching.
    pub simplify_bigons: bool,
}

impl Default for SkeinConfig {
    fn default() -> Self {
        Self { max_crossings: 24, memo_enabled: true, strategy: Strategy::default(), simplify_bigons: true }
    }
}

/// The value of a split union with one extra crossingless circle.
pub fn delta() -> BiLaurent {
    BiLaurent::from_terms([((1, -1), 1), ((-1, -1), 1), ((0, 0), -1)])
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub evaluated: u64,
    pub memo_hits: u64,
}

/// Skein evaluator holding a memo table that persists across calls.
pub struct Engine {
    cfg: SkeinConfig,
    memo: FxHashMap<Vec<u32>, BiLaurent>,
    delta_pows: Vec<BiLaurent>,
    stats: EngineStats,
}

enum Shape {
    Descending { self_writhe: i32, components: usize },
    Branch(usize),
}

impl Engine {
    pub fn new(cfg: SkeinConfig) -> Self {
        Self { cfg, memo: FxHashMap::default(), delta_pows: vec![BiLaurent::one()], stats: EngineStats::default() }
    }

    pub fn config(&self) -> &SkeinConfig {
        &self.cfg
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn clear(&mut self) {
        self.memo.clear();
    }

    pub fn lambda(&mut self, d: &Diagram) -> Result<BiLaurent, KauffmanError> {
        if d.crossing_count() > self.cfg.max_crossings {
            return Err(KauffmanError::BudgetExceeded { crossings: d.crossing_count(), max: self.cfg.max_crossings });
        }
        Ok(self.eval(d.clone()))
    }

    pub fn kauffman_f(&mut self, d: &Diagram) -> Result<BiLaurent, KauffmanError> {
        let w = d.writhe().map_err(|_| KauffmanError::Unoriented)?;
        Ok(self.lambda(d)?.shift(-w, 0))
    }

    fn delta_pow(&mut self, k: usize) -> BiLaurent {
        while self.delta_pows.len() <= k {
            let next = self.delta_pows.last().expect("non-empty") * &delta();
            self.delta_pows.push(next);
        }
        self.delta_pows[k].clone()
    }

    fn eval(&mut self, d: Diagram) -> BiLaurent {
        let (d, shift) = simplify(d, self.cfg.simplify_bigons);
        let (parts, loops) = d.split();
        let pieces = parts.len() + loops as usize;
        let mut acc = self.delta_pow(pieces.saturating_sub(1));
        for p in parts {
            let v = self.connected(p);
            acc = &acc * &v;
        }
        acc.shift(shift, 0)
    }

    /// `d` is connected, has at least one crossing and no kinks.
    fn connected(&mut self, d: Diagram) -> BiLaurent {
        let key = self.cfg.memo_enabled.then(|| d.connected_code());
        if let Some(k) = &key {
            if let Some(v) = self.memo.get(k) {
                self.stats.memo_hits += 1;
                return v.clone();
            }
        }
        self.stats.evaluated += 1;
        let v = match shape(&d, self.cfg.strategy) {
            Shape::Descending { self_writhe, components } => {
                self.delta_pow(components - 1).shift(self_writhe, 0)
            }
            Shape::Branch(x) => {
                let r = d.resolve(x).expect("crossing in range");
                let sa = self.eval(r.a_smoothing.unoriented());
                let sb = self.eval(r.b_smoothing.unoriented());
                let sw = self.eval(r.switched.unoriented());
                &(&sa + &sb).shift(0, 1) - &sw
            }
        };
        if let Some(k) = key {
            self.memo.insert(k, v.clone());
        }
        v
    }
}

/// Strips kinks (and bigons if asked), returning the power of `a` collected.
fn simplify(mut d: Diagram, bigons: bool) -> (Diagram, i32) {
    let mut shift = 0;
    loop {
        if let Some((x, sign)) = d.detect_curl() {
            shift += sign as i32;
            d = d.remove_curl(x).expect("detected kink");
            continue;
        }
        if bigons {
            if let Some((x, y)) = d.find_bigon() {
                d = d.remove_bigon(x, y);
                continue;
            }
        }
        return (d, shift);
    }
}

fn shape(d: &Diagram, strategy: Strategy) -> Shape {
    let n = d.crossing_count();
    let adj = d.adj();
    let mut seen_slot = vec![false; 4 * n];
    let mut seen_cross = vec![false; n];
    let mut comp = vec![[usize::MAX; 2]; n];
    let mut orient = vec![CrossingOrientation { under_in: 0, over_in: 0 }; n];
    let mut bad = Vec::new();
    let mut components = 0;
    for start in 0..4 * n {
        if seen_slot[start] {
            continue;
        }
        let mut cur = start as u32;
        loop {
            let x = cross_of(cur);
            let out = slot(x, pos_of(cur) + 2);
            seen_slot[cur as usize] = true;
            seen_slot[out as usize] = true;
            let over = d.is_over(cur);
            if !seen_cross[x] {
                seen_cross[x] = true;
                if !over {
                    if strategy == Strategy::FirstNonDescending {
                        return Shape::Branch(x);
                    }
                    bad.push(x);
                }
            }
            let strand = over as usize;
            comp[x][strand] = components;
            if over {
                orient[x].over_in = pos_of(cur) as u8;
            } else {
                orient[x].under_in = pos_of(cur) as u8;
            }
            cur = adj[out as usize];
            if cur == start as u32 {
                break;
            }
        }
        components += 1;
    }
    if let Some(&first) = bad.first() {
        let pick = bad.iter().copied().find(|&x| switch_makes_bigon(d, x)).unwrap_or(first);
        return Shape::Branch(pick);
    }
    let self_writhe =
        (0..n).filter(|&x| comp[x][0] == comp[x][1]).map(|x| orient[x].sign() as i32).sum();
    Shape::Descending { self_writhe, components }
}

fn switch_makes_bigon(d: &Diagram, x: usize) -> bool {
    let adj = d.adj();
    (0..4).any(|s| {
        let nb = adj[slot(x, s) as usize];
        let y = cross_of(nb);
        y != x && adj[slot(x, s + 1) as usize] == slot(y, pos_of(nb) + 3) && d.is_over(slot(x, s)) != d.is_over(nb)
    })
}

/// `Λ` with a fresh memo table.
pub fn lambda(d: &Diagram, cfg: &SkeinConfig) -> Result<BiLaurent, KauffmanError> {
    Engine::new(*cfg).lambda(d)
}

/// `F = a^{−w} Λ` with a fresh memo table.
pub fn kauffman_f(d: &Diagram, cfg: &SkeinConfig) -> Result<BiLaurent, KauffmanError> {
    Engine::new(*cfg).kauffman_f(d)
}

pub fn lambda_bracket(d: &Diagram, cfg: &SkeinConfig) -> Result<BracketForm, KauffmanError> {
    Ok(lambda(d, cfg)?.bracket_form()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::{random_braid, random_relabel, TREFOIL};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> SkeinConfig {
        SkeinConfig::default()
    }

    fn lam(d: &Diagram) -> BiLaurent {
        lambda(d, &cfg()).unwrap()
    }

    #[test]
    fn unknot_and_unlink() {
        assert_eq!(lam(&Diagram::unknot()), BiLaurent::one());
        assert_eq!(lam(&Diagram::unlink(2)), delta());
        assert_eq!(lambda_bracket(&Diagram::unknot(), &cfg()).unwrap().to_string(), "[1, 1]");
    }

    #[test]
    fn delta_follows_from_the_skein_relation() {
        // One kink: the crossing change swaps kink handedness, and the two
        // smoothings give one and two circles.
        let d = Diagram::parse_pd("X(1,2,2,1)").unwrap();
        let r = d.resolve(0).unwrap();
        let sum = &lam(&d) + &lam(&r.switched);
        assert_eq!(sum, BiLaurent::from_terms([((1, 0), 1), ((-1, 0), 1)]));
        let (one, two) = if r.a_smoothing.component_count() == 1 {
            (&r.a_smoothing, &r.b_smoothing)
        } else {
            (&r.b_smoothing, &r.a_smoothing)
        };
        assert_eq!(lam(one), BiLaurent::one());
        let solved = &sum.shift(0, -1) - &BiLaurent::one();
        assert_eq!(solved, delta());
        assert_eq!(lam(two), solved);
    }

    #[test]
    fn trefoil_values() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let f = kauffman_f(&d, &cfg()).unwrap();
        // Tabulated value for one chirality; the other is its a-inverse.
        let want: BiLaurent =
            "-2*a^-2 - a^-4 + z*a^-5 + z*a^-3 + z^2*a^-4 + z^2*a^-2".parse().unwrap();
        assert!(f == want || f.invert_a() == want, "{f}");
        let fm = kauffman_f(&d.mirror(), &cfg()).unwrap();
        assert_eq!(fm, f.invert_a());
    }

    #[test]
    fn figure_eight_is_amphichiral() {
        let d = Diagram::braid_closure(3, &[1, -2, 1, -2]).unwrap();
        let f = kauffman_f(&d, &cfg()).unwrap();
        assert_eq!(f, f.invert_a());
        let want: BiLaurent =
            "-a^-2 - 1 - a^2 - z*a^-1 - z*a + z^2*a^-2 + 2*z^2 + z^2*a^2 + z^3*a^-1 + z^3*a".parse().unwrap();
        assert_eq!(f, want);
    }

    #[test]
    fn skein_identity_at_every_crossing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let d = random_braid(&mut rng, 8).unoriented();
            let l = lam(&d);
            for x in 0..d.crossing_count() {
                let r = d.resolve(x).unwrap();
                let lhs = &l + &lam(&r.switched);
                let rhs = (&lam(&r.a_smoothing) + &lam(&r.b_smoothing)).shift(0, 1);
                assert_eq!(lhs, rhs, "{d} at {x}");
            }
        }
    }

    #[test]
    fn strategies_and_memo_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let variants = [
            SkeinConfig { strategy: Strategy::FirstNonDescending, ..cfg() },
            SkeinConfig { memo_enabled: false, ..cfg() },
            SkeinConfig { simplify_bigons: false, ..cfg() },
            SkeinConfig { simplify_bigons: false, memo_enabled: false, strategy: Strategy::FirstNonDescending, ..cfg() },
        ];
        for _ in 0..30 {
            let d = random_braid(&mut rng, 8);
            let base = kauffman_f(&d, &cfg()).unwrap();
            for v in &variants {
                assert_eq!(kauffman_f(&d, v).unwrap(), base, "{d}");
            }
            assert_eq!(lam(&random_relabel(&d, &mut rng)), lam(&d));
            assert_eq!(kauffman_f(&d.reversed().unwrap(), &cfg()).unwrap(), base);
        }
    }

    #[test]
    fn kink_and_bigon_invariance() {
        // A braid word and the same word with σσ⁻¹ inserted or a trailing
        // stabilisation give the same link.
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        use rand::Rng;
        for _ in 0..30 {
            let strands = rng.gen_range(2..=3);
            let len = rng.gen_range(1..=4);
            let word: Vec<i32> = (0..len)
                .map(|_| {
                    let g = rng.gen_range(1..strands) as i32;
                    if rng.gen_bool(0.5) { g } else { -g }
                })
                .collect();
            let d = Diagram::braid_closure(strands, &word).unwrap();
            let f = kauffman_f(&d, &cfg()).unwrap();
            let mut w2 = word.clone();
            let at = rng.gen_range(0..=w2.len());
            let g = rng.gen_range(1..strands) as i32;
            w2.splice(at..at, [g, -g]);
            let r2 = Diagram::braid_closure(strands, &w2).unwrap();
            assert_eq!(kauffman_f(&r2, &cfg()).unwrap(), f);
            let mut w3 = word.clone();
            w3.push(if rng.gen_bool(0.5) { strands as i32 } else { -(strands as i32) });
            let r1 = Diagram::braid_closure(strands + 1, &w3).unwrap();
            assert_eq!(kauffman_f(&r1, &cfg()).unwrap(), f);
            let curl = Diagram::parse_pd("X(1,2,2,1)").unwrap();
            assert_eq!(kauffman_f(&curl, &cfg()).unwrap(), BiLaurent::one());
        }
    }

    #[test]
    fn invariant_under_programmatic_moves() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..40 {
            let d = random_braid(&mut rng, 7);
            if d.crossing_count() == 0 {
                continue;
            }
            let l = lam(&d);
            let v = crate::jones::jones(&d).unwrap();
            let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
            let k = d.add_kink(rng.gen_range(0..4 * d.crossing_count()), sign, rng.gen_bool(0.5)).unwrap();
            assert_eq!(lam(&k), l.shift(sign as i32, 0));
            assert_eq!(kauffman_f(&k, &cfg()).unwrap(), kauffman_f(&d, &cfg()).unwrap());
            assert_eq!(crate::jones::jones(&k).unwrap(), v);
            let faces = d.faces();
            let face = &faces[rng.gen_range(0..faces.len())];
            if face.len() < 2 {
                continue;
            }
            let b = d.add_bigon(face[0], face[face.len() - 1], rng.gen_bool(0.5)).unwrap();
            assert_eq!(lam(&b), l);
            assert_eq!(crate::jones::jones(&b).unwrap(), v);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let d = Diagram::parse_pd(TREFOIL).unwrap();
        let small = SkeinConfig { max_crossings: 2, ..cfg() };
        assert_eq!(lambda(&d, &small), Err(KauffmanError::BudgetExceeded { crossings: 3, max: 2 }));
        assert_eq!(kauffman_f(&d.unoriented(), &cfg()), Err(KauffmanError::Unoriented));
    }
}
