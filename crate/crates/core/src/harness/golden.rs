//! Reference polynomials on disk and the n-dependent bracket forms.
//!
//! A corpus directory holds one `thmK/` folder per family with
//! `lambda2n.bracket`, `lambda2.poly`, `lambda1.poly`, `lambdaDp.poly`,
//! `v2n.bracket`, `v2.poly` and one of `vDp.poly` / `vD1.poly`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::laurent::{BiLaurent, BracketForm, JonesTerm, LaurentPoly, Monomial};

#[derive(Debug, Error)]
pub enum GoldenError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {msg}")]
    Parse { path: PathBuf, line: usize, msg: String },
    #[error("{path}: not in canonical form (expected `{expected}`)")]
    NotCanonical { path: PathBuf, expected: String },
    #[error("{path}: zero polynomial")]
    Zero { path: PathBuf },
    #[error("{path}: bracket form {form} disagrees with full polynomial ({actual})")]
    Mismatch { path: PathBuf, form: String, actual: String },
    #[error("no family folders found in {0}")]
    Empty(PathBuf),
    #[error("{0}: missing file")]
    Missing(PathBuf),
}

/// `c + k·n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Affine {
    pub c: i64,
    pub k: i64,
}

impl Affine {
    pub const fn new(c: i64, k: i64) -> Self {
        Affine { c, k }
    }

    pub const fn constant(c: i64) -> Self {
        Affine { c, k: 0 }
    }

    pub fn at(&self, n: i64) -> i64 {
        self.c + self.k * n
    }

    pub fn is_constant(&self) -> bool {
        self.k == 0
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            0 => return write!(f, "{}", self.c),
            1 => f.write_str("n")?,
            -1 => f.write_str("-n")?,
            k => write!(f, "{k}n")?,
        }
        match self.c {
            0 => Ok(()),
            c if c > 0 => write!(f, "+{c}"),
            c => write!(f, "{c}"),
        }
    }
}

impl FromStr for Affine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err("empty exponent".into());
        }
        let mut out = Affine::default();
        let mut rest = s.as_str();
        while !rest.is_empty() {
            let neg = rest.starts_with('-');
            if rest.starts_with(['+', '-']) {
                rest = &rest[1..];
            }
            let end = rest.find(['+', '-']).unwrap_or(rest.len());
            let (tok, tail) = rest.split_at(end);
            rest = tail;
            let sign = if neg { -1 } else { 1 };
            if let Some(num) = tok.strip_suffix('n') {
                let k: i64 = if num.is_empty() {
                    1
                } else {
                    num.parse().map_err(|_| format!("bad coefficient `{num}`"))?
                };
                out.k += sign * k;
            } else {
                let c: i64 = tok.parse().map_err(|_| format!("bad integer `{tok}`"))?;
                out.c += sign * c;
            }
        }
        Ok(out)
    }
}

/// One extreme term of a bracket form: `(-1)^sign · coeff · ∏ var^exp`, each
/// part affine in n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TermTemplate {
    pub sign: Option<Affine>,
    pub coeff: Affine,
    pub vars: Vec<(char, Affine)>,
}

impl TermTemplate {
    pub fn coeff_at(&self, n: i64) -> i64 {
        let s = match self.sign {
            Some(e) if e.at(n).rem_euclid(2) == 1 => -1,
            _ => 1,
        };
        s * self.coeff.at(n)
    }

    pub fn exp_at(&self, var: char, n: i64) -> i64 {
        self.vars.iter().find(|(v, _)| *v == var).map_or(0, |(_, e)| e.at(n))
    }
}

impl fmt::Display for TermTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        let mut lead = "";
        if let Some(e) = self.sign {
            parts.push(if e == Affine::new(0, 1) { "(-1)^n".to_string() } else { format!("(-1)^({e})") });
        }
        match (self.coeff.is_constant(), self.coeff.c) {
            (true, 1) => {}
            (true, -1) => lead = "-",
            (true, c) if c < 0 => {
                lead = "-";
                parts.push((-c).to_string());
            }
            (true, c) => parts.push(c.to_string()),
            (false, _) => parts.push(format!("({})", self.coeff)),
        }
        for (v, e) in &self.vars {
            match (e.is_constant(), e.c) {
                (true, 0) => {}
                (true, 1) => parts.push(v.to_string()),
                (true, c) => parts.push(format!("{v}^{c}")),
                (false, _) => parts.push(format!("{v}^({e})")),
            }
        }
        if parts.is_empty() {
            parts.push("1".into());
        }
        write!(f, "{lead}{}", parts.join("*"))
    }
}

impl FromStr for TermTemplate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut s = s.trim();
        let mut neg = false;
        if let Some(r) = s.strip_prefix('-') {
            neg = true;
            s = r;
        }
        let mut t = TermTemplate { sign: None, coeff: Affine::constant(1), vars: Vec::new() };
        for fac in split_top(s, '*') {
            let fac = fac.trim();
            if let Some(e) = fac.strip_prefix("(-1)^") {
                t.sign = Some(unparen(e).parse()?);
            } else if fac.starts_with('(') {
                t.coeff = unparen(fac).parse()?;
            } else if fac.starts_with(|c: char| c.is_ascii_digit()) {
                t.coeff = Affine::constant(fac.parse().map_err(|_| format!("bad coefficient `{fac}`"))?);
            } else {
                let mut it = fac.chars();
                let v = it.next().ok_or("empty factor")?;
                if !matches!(v, 'a' | 'z' | 't') {
                    return Err(format!("unknown variable in `{fac}`"));
                }
                let e = match it.as_str().strip_prefix('^') {
                    Some(e) => unparen(e).parse()?,
                    None if it.as_str().is_empty() => Affine::constant(1),
                    None => return Err(format!("bad factor `{fac}`")),
                };
                t.vars.push((v, e));
            }
        }
        if neg {
            t.coeff = Affine::new(-t.coeff.c, -t.coeff.k);
        }
        Ok(t)
    }
}

fn unparen(s: &str) -> &str {
    s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s)
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// `[low, high]` with both terms depending on n.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BracketTemplate {
    pub low: TermTemplate,
    pub high: TermTemplate,
}

impl BracketTemplate {
    /// The two-variable bracket form at a given n.
    pub fn lambda_at(&self, n: i64) -> BracketForm {
        let m = |t: &TermTemplate| {
            Monomial::new(t.coeff_at(n), t.exp_at('z', n) as i32, t.exp_at('a', n) as i32)
        };
        BracketForm { low: m(&self.low), high: m(&self.high) }
    }

    /// Extreme Jones terms `((c, 2·exp), (c, 2·exp))` at a given n.
    pub fn jones_at(&self, n: i64) -> (JonesTerm, JonesTerm) {
        let m = |t: &TermTemplate| (BigInt::from(t.coeff_at(n)), 2 * t.exp_at('t', n) as i32);
        (m(&self.low), m(&self.high))
    }

    pub fn breadth_a_at(&self, n: i64) -> i64 {
        self.high.exp_at('a', n) - self.low.exp_at('a', n)
    }

    pub fn breadth_t_at(&self, n: i64) -> i64 {
        self.high.exp_at('t', n) - self.low.exp_at('t', n)
    }
}

impl fmt::Display for BracketTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.low, self.high)
    }
}

impl FromStr for BracketTemplate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or("bracket form must be enclosed in [ ]")?;
        match split_top(inner, ',').as_slice() {
            [lo, hi] => Ok(BracketTemplate { low: lo.parse()?, high: hi.parse()? }),
            _ => Err("bracket form needs exactly two terms".into()),
        }
    }
}

/// Which reference diagram the third Jones file describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxKind {
    /// The twist box smoothed away (`vDp.poly`).
    Smoothed,
    /// The odd member with one fewer crossing (`vD1.poly`).
    Odd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyGolden {
    pub family: u8,
    pub lambda2n: BracketTemplate,
    pub lambda2: BiLaurent,
    pub lambda1: BiLaurent,
    pub lambda_dp: BiLaurent,
    pub v2n: BracketTemplate,
    pub v2: LaurentPoly,
    pub v_aux: LaurentPoly,
    pub aux_kind: AuxKind,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GoldenCorpus {
    pub families: Vec<FamilyGolden>,
}

impl GoldenCorpus {
    pub fn family(&self, k: u8) -> Option<&FamilyGolden> {
        self.families.iter().find(|f| f.family == k)
    }
}

fn read(path: &Path) -> Result<String, GoldenError> {
    std::fs::read_to_string(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            GoldenError::Missing(path.to_path_buf())
        } else {
            GoldenError::Io { path: path.to_path_buf(), source }
        }
    })
}

fn canonical<T: fmt::Display>(path: &Path, text: &str, value: &T) -> Result<(), GoldenError> {
    let rendered = format!("{value}\n");
    if rendered != text {
        return Err(GoldenError::NotCanonical {
            path: path.to_path_buf(),
            expected: rendered.trim_end().to_string(),
        });
    }
    Ok(())
}

fn parse_err(path: &Path, text: &str, pos: Option<usize>, msg: String) -> GoldenError {
    let line = pos.map_or(1, |p| text[..p.min(text.len())].matches('\n').count() + 1);
    GoldenError::Parse { path: path.to_path_buf(), line, msg }
}

pub fn load_bracket(path: &Path) -> Result<BracketTemplate, GoldenError> {
    let text = read(path)?;
    let b: BracketTemplate = text.parse().map_err(|m| parse_err(path, &text, None, m))?;
    canonical(path, &text, &b)?;
    Ok(b)
}

pub fn load_lambda(path: &Path) -> Result<BiLaurent, GoldenError> {
    let text = read(path)?;
    let p: BiLaurent = text.trim_end().parse().map_err(|e: crate::laurent::LaurentError| {
        parse_err(path, &text, error_pos(&e), e.to_string())
    })?;
    if p.is_zero() {
        return Err(GoldenError::Zero { path: path.to_path_buf() });
    }
    canonical(path, &text, &p)?;
    Ok(p)
}

pub fn load_jones(path: &Path) -> Result<LaurentPoly, GoldenError> {
    let text = read(path)?;
    let p: LaurentPoly = text.trim_end().parse().map_err(|e: crate::laurent::LaurentError| {
        parse_err(path, &text, error_pos(&e), e.to_string())
    })?;
    if p.is_zero() {
        return Err(GoldenError::Zero { path: path.to_path_buf() });
    }
    canonical(path, &text, &p)?;
    Ok(p)
}

fn error_pos(e: &crate::laurent::LaurentError) -> Option<usize> {
    match e {
        crate::laurent::LaurentError::Parse(p) => Some(p.pos),
        _ => None,
    }
}

/// Loads one `thmK/` folder and checks its bracket forms against the full
/// polynomials at n = 1.
pub fn load_family(dir: &Path, family: u8) -> Result<FamilyGolden, GoldenError> {
    let f = |name: &str| dir.join(name);
    let lambda2n = load_bracket(&f("lambda2n.bracket"))?;
    let lambda2 = load_lambda(&f("lambda2.poly"))?;
    let v2n = load_bracket(&f("v2n.bracket"))?;
    let v2 = load_jones(&f("v2.poly"))?;
    let (v_aux, aux_kind) = if f("vDp.poly").exists() {
        (load_jones(&f("vDp.poly"))?, AuxKind::Smoothed)
    } else {
        (load_jones(&f("vD1.poly"))?, AuxKind::Odd)
    };

    let actual = lambda2.bracket_form().map_err(|_| GoldenError::Zero { path: f("lambda2.poly") })?;
    if actual != lambda2n.lambda_at(1) {
        return Err(GoldenError::Mismatch {
            path: f("lambda2n.bracket"),
            form: lambda2n.to_string(),
            actual: actual.to_string(),
        });
    }
    let actual = v2.bracket().map_err(|_| GoldenError::Zero { path: f("v2.poly") })?;
    if actual != v2n.jones_at(1) {
        return Err(GoldenError::Mismatch {
            path: f("v2n.bracket"),
            form: v2n.to_string(),
            actual: format!("{:?}", actual),
        });
    }

    Ok(FamilyGolden {
        family,
        lambda2n,
        lambda2,
        lambda1: load_lambda(&f("lambda1.poly"))?,
        lambda_dp: load_lambda(&f("lambdaDp.poly"))?,
        v2n,
        v2,
        v_aux,
        aux_kind,
    })
}

/// Reads every `thmK/` folder under `dir` (or `dir/golden`).
pub fn ingest_golden(dir: &Path) -> Result<GoldenCorpus, GoldenError> {
    let root = if dir.join("golden").is_dir() { dir.join("golden") } else { dir.to_path_buf() };
    let entries = std::fs::read_dir(&root).map_err(|source| GoldenError::Io { path: root.clone(), source })?;
    let mut families = Vec::new();
    for e in entries {
        let e = e.map_err(|source| GoldenError::Io { path: root.clone(), source })?;
        let name = e.file_name();
        let Some(k) = name.to_str().and_then(|n| n.strip_prefix("thm")).and_then(|k| k.parse::<u8>().ok())
        else {
            continue;
        };
        if e.path().is_dir() {
            families.push(load_family(&e.path(), k)?);
        }
    }
    if families.is_empty() {
        return Err(GoldenError::Empty(root));
    }
    families.sort_by_key(|f| f.family);
    Ok(GoldenCorpus { families })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_round_trip() {
        for s in ["2n+4", "-2n-4", "-n+1", "n", "3", "-3n-12", "0", "n+1"] {
            assert_eq!(s.parse::<Affine>().unwrap().to_string(), s);
        }
        assert_eq!("2n+4".parse::<Affine>().unwrap().at(3), 10);
    }

    #[test]
    fn bracket_round_trip_and_evaluation() {
        let cases = [
            "[z^3*a^(-2n-4), (-1)^n*2*z^2*a^5]",
            "[z^2*a^(-2n-6), (-1)^n*(2n+4)*a^4]",
            "[-z^4*a^(-2n-6), -4*a^4]",
            "[z^3*a^(-2n-5), (-1)^(n+1)*2*z*a^5]",
            "[-1, t^(2n+9)]",
            "[t^(-3n-12), 3*t^(-n-2)]",
        ];
        for c in cases {
            let b: BracketTemplate = c.parse().unwrap();
            assert_eq!(b.to_string(), c);
        }
        let b: BracketTemplate = cases[0].parse().unwrap();
        assert_eq!(b.lambda_at(1).to_string(), "[z^3*a^-6, -2*z^2*a^5]");
        assert_eq!(b.lambda_at(2).to_string(), "[z^3*a^-8, 2*z^2*a^5]");
        assert_eq!(b.breadth_a_at(3), 15);
        let b: BracketTemplate = cases[1].parse().unwrap();
        assert_eq!(b.lambda_at(3).high, Monomial::new(-10, 0, 4));
        let v: BracketTemplate = cases[4].parse().unwrap();
        assert_eq!(v.jones_at(1), ((BigInt::from(-1), 0), (BigInt::from(1), 22)));
        assert_eq!(v.breadth_t_at(2), 13);
    }

    #[test]
    fn malformed_brackets_rejected() {
        for c in ["z^3, a", "[z^3]", "[q^2, z]", "[z^(2m), z]"] {
            assert!(c.parse::<BracketTemplate>().is_err(), "{c}");
        }
    }
}
