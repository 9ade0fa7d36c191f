//! Twist-box reductions and the one-crossing recurrences they feed.
//!
//! Resolving one crossing of the trailing twist tangle `1/m` of a family
//! member gives the member with `1/(m-2)` (after the switch and an R2 move),
//! the member with `1/(m-1)` (one smoothing) and a diagram where the rest of
//! the box collapses to kinks (the other smoothing). Stripping those kinks
//! leaves the reduced diagram `D'`.

use serde::{Deserialize, Serialize};

use crate::diagram::Diagram;
use crate::jones::jones;
use crate::kauffman::Engine;
use crate::laurent::{BiLaurent, LaurentPoly};
use crate::montesinos::{build_with_regions, family, BuiltMontesinos, Fraction};

use super::HarnessError;

/// The pieces obtained by resolving one twist-box crossing.
#[derive(Debug, Clone)]
pub struct BoxReduction {
    pub crossing: usize,
    /// The crossing changed.
    pub switched: Diagram,
    /// The smoothing that shortens the box by one crossing.
    pub odd: Diagram,
    /// The other smoothing with its kinks stripped.
    pub reduced: Diagram,
    /// Sum of the stripped kink signs: `Λ(smoothing) = a^e · Λ(reduced)`.
    pub kink_exponent: i32,
}

fn strip_kinks(mut d: Diagram) -> Result<(Diagram, i32), HarnessError> {
    let mut e = 0;
    while let Some((x, s)) = d.detect_curl() {
        e += s as i32;
        d = d.remove_curl(x)?;
    }
    Ok((d, e))
}

fn box_crossing(built: &BuiltMontesinos, tangle: usize) -> Result<usize, HarnessError> {
    built
        .regions
        .iter()
        .find(|r| r.tangle == tangle && !r.crossings.is_empty())
        .map(|r| r.crossings[0])
        .ok_or_else(|| HarnessError::Invalid(format!("tangle {tangle} has no twist crossings")))
}

/// Resolves the first crossing of the last tangle's twist box.
pub fn reduce_twist_box(built: &BuiltMontesinos) -> Result<BoxReduction, HarnessError> {
    let d = &built.diagram;
    let last = built
        .regions
        .iter()
        .map(|r| r.tangle)
        .max()
        .ok_or_else(|| HarnessError::Invalid("diagram has no twist regions".into()))?;
    let x = box_crossing(built, last)?;
    let res = d.resolve(x)?;
    let (a, ea) = strip_kinks(res.a_smoothing.clone())?;
    let (b, eb) = strip_kinks(res.b_smoothing.clone())?;
    let lost_a = res.a_smoothing.crossing_count() - a.crossing_count();
    let lost_b = res.b_smoothing.crossing_count() - b.crossing_count();
    let (odd, reduced, kink_exponent) = match (lost_a, lost_b) {
        (0, l) if l > 0 => (res.a_smoothing, b, eb),
        (l, 0) if l > 0 => (res.b_smoothing, a, ea),
        _ => return Err(HarnessError::Invalid("twist box does not collapse on either side".into())),
    };
    Ok(BoxReduction { crossing: x, switched: res.switched, odd, reduced, kink_exponent })
}

/// Family member with the twist tangle replaced by `1/m`.
pub fn member_with_box(theorem: u8, variant: usize, m: i64) -> Result<BuiltMontesinos, HarnessError> {
    let mut spec = family(theorem, variant, 0)?;
    let last = spec.tangles.len() - 1;
    spec.tangles[last] = Fraction::new(1, m)?;
    Ok(build_with_regions(&spec)?)
}

fn box_size(theorem: u8, n: u32) -> Result<i64, HarnessError> {
    Ok(crate::montesinos::twist_denominator(theorem, n)?)
}

/// Outcome of checking `Λ₂ₙ = z(Λ_odd + a^e Λ_D') − Λ₂ₙ₋₂`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LambdaRecurrence {
    pub theorem: u8,
    pub n: u32,
    pub kink_exponent: i32,
    /// The identity with every term computed from its own build.
    pub identity: bool,
    /// The smoothing with one fewer box crossing has the same Λ as the
    /// directly built member.
    pub odd_matches_build: bool,
    /// The switched diagram has the same Λ as the member with `n - 1`.
    pub switched_matches_build: bool,
    #[serde(skip)]
    pub lambda_odd: BiLaurent,
    #[serde(skip)]
    pub lambda_reduced: BiLaurent,
}

impl LambdaRecurrence {
    pub fn holds(&self) -> bool {
        self.identity && self.odd_matches_build && self.switched_matches_build
    }
}

pub fn lambda_recurrence(engine: &mut Engine, theorem: u8, n: u32) -> Result<LambdaRecurrence, HarnessError> {
    if n == 0 {
        return Err(HarnessError::Invalid("the recurrence needs n >= 1".into()));
    }
    let m = box_size(theorem, n)?;
    let top = member_with_box(theorem, 0, m)?;
    let red = reduce_twist_box(&top)?;
    let l_top = engine.lambda(&top.diagram)?;
    let l_prev = engine.lambda(&member_with_box(theorem, 0, m - 2)?.diagram)?;
    let l_odd = engine.lambda(&member_with_box(theorem, 0, m - 1)?.diagram)?;
    let l_red = engine.lambda(&red.reduced)?;
    let z = BiLaurent::monomial(1, 0, 1);
    let kinked = BiLaurent::monomial(1, red.kink_exponent, 0);
    let rhs = &(&z * &(&l_odd + &(&kinked * &l_red))) - &l_prev;
    Ok(LambdaRecurrence {
        theorem,
        n,
        kink_exponent: red.kink_exponent,
        identity: rhs == l_top,
        odd_matches_build: engine.lambda(&red.odd)? == l_odd,
        switched_matches_build: engine.lambda(&red.switched)? == l_prev,
        lambda_odd: l_odd,
        lambda_reduced: l_red,
    })
}

/// Families whose twist box carries antiparallel strands, so the oriented
/// smoothing collapses the box instead of shortening it.
pub fn antiparallel_box(theorem: u8) -> bool {
    matches!(theorem, 1 | 3)
}

/// Outcome of the one-crossing Jones recurrence.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JonesRecurrence {
    pub theorem: u8,
    pub n: u32,
    pub antiparallel: bool,
    pub identity: bool,
    #[serde(skip)]
    pub v_aux: LaurentPoly,
}

impl JonesRecurrence {
    pub fn holds(&self) -> bool {
        self.identity
    }
}

/// Antiparallel box: `V₂ₙ = t²V₂ₙ₋₂ − (t^½ − t^{3/2}) V_D'`; parallel box: `V₂ₙ = t⁻²V₂ₙ₋₂ + (t^{-3/2} − t^{-1/2}) V₂ₙ₋₁`.
pub fn jones_recurrence(theorem: u8, n: u32) -> Result<JonesRecurrence, HarnessError> {
    if n == 0 {
        return Err(HarnessError::Invalid("the recurrence needs n >= 1".into()));
    }
    let m = box_size(theorem, n)?;
    let top = member_with_box(theorem, 0, m)?;
    let v_top = jones(&top.diagram)?;
    let v_prev = jones(&member_with_box(theorem, 0, m - 2)?.diagram)?;
    let antiparallel = antiparallel_box(theorem);
    // The smoothing inherits its orientation from the full member; a separate
    // build may orient the components of the shorter box differently.
    let x = reduce_twist_box(&top)?.crossing;
    let v_aux = jones(&top.diagram.oriented_smoothing(x)?)?;
    let t = |c: i64, t2: i32| LaurentPoly::monomial(c, t2);
    let rhs = if antiparallel {
        &(&t(1, 4) * &v_prev) - &(&(&t(1, 1) - &t(1, 3)) * &v_aux)
    } else {
        &(&t(1, -4) * &v_prev) + &(&(&t(1, -3) - &t(1, -1)) * &v_aux)
    };
    Ok(JonesRecurrence { theorem, n, antiparallel, identity: rhs == v_top, v_aux })
}
