//! Structure constants of the Neveu-Schwarz and Ramond algebras and the
//! normal-ordering rewrite built on them.
//!
//! The graded brackets are
//!
//! ```text
//! [L_m, L_n] = (m - n) L_{m+n} + c/12 (m^3 - m) δ_{m+n,0}
//! [L_m, G_r] = (m/2 - r) G_{m+r}
//! [G_r, G_s] = 2 L_{r+s} + c/3 (r^2 - 1/4) δ_{r+s,0}
//! ```
//!
//! with the central element already replaced by `c · 1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::half::HalfInt;
use crate::poly::CPoly;
use crate::scalar::{format_rational, int, rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sector {
    NeveuSchwarz,
    Ramond,
}

impl Sector {
    /// Spacing between consecutive levels of a lowest-weight module.
    pub fn level_step(self) -> HalfInt {
        match self {
            Sector::NeveuSchwarz => HalfInt::HALF,
            Sector::Ramond => HalfInt::ONE,
        }
    }

    /// Whether `r` is a legal index for an odd generator in this sector.
    pub fn admits_g_index(self, r: HalfInt) -> bool {
        match self {
            Sector::NeveuSchwarz => r.is_half_odd(),
            Sector::Ramond => r.is_integer(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Sector::NeveuSchwarz => "ns",
            Sector::Ramond => "ramond",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::NeveuSchwarz => "Neveu-Schwarz",
            Sector::Ramond => "Ramond",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Parity of a product.
    pub fn combine(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// `+1` for even, `-1` for odd.
    pub fn sign(self) -> i64 {
        match self {
            Parity::Even => 1,
            Parity::Odd => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeKind {
    L,
    G,
    Central,
}

/// A single generator: `L_n`, `G_r`, or the central element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub kind: ModeKind,
    pub index: HalfInt,
}

impl Mode {
    pub fn l(n: i64) -> Mode {
        Mode { kind: ModeKind::L, index: HalfInt::int(n) }
    }

    /// `G_r` with `r = twice / 2`.
    pub fn g_twice(twice: i64) -> Mode {
        Mode { kind: ModeKind::G, index: HalfInt::from_twice(twice) }
    }

    pub fn g(r: HalfInt) -> Mode {
        Mode { kind: ModeKind::G, index: r }
    }

    pub fn central() -> Mode {
        Mode { kind: ModeKind::Central, index: HalfInt::ZERO }
    }

    pub fn parity(self) -> Parity {
        match self.kind {
            ModeKind::G => Parity::Odd,
            _ => Parity::Even,
        }
    }

    /// The Hilbert-space adjoint generator: `L_n† = L_{-n}`, `G_r† = G_{-r}`.
    pub fn adjoint(self) -> Mode {
        Mode { kind: self.kind, index: -self.index }
    }

    /// Amount by which the mode raises the `L_0` eigenvalue.
    pub fn raising_depth(self) -> HalfInt {
        HalfInt::ZERO.max(-self.index)
    }

    pub fn validate(self, sector: Sector) -> Result<(), AlgebraError> {
        let ok = match self.kind {
            ModeKind::L => self.index.is_integer(),
            ModeKind::G => sector.admits_g_index(self.index),
            ModeKind::Central => self.index.is_zero(),
        };
        if ok {
            Ok(())
        } else {
            Err(AlgebraError::IndexSectorMismatch { mode: self, sector })
        }
    }

    /// Position in the PBW order. Creation modes come first (G's with index
    /// ≤ 0 strictly decreasing, then L's with negative index weakly
    /// decreasing), then `L_0`, then the annihilators.
    fn pbw_key(self) -> (u8, i64) {
        let block = match self.kind {
            ModeKind::G if !self.index.is_positive() => 0,
            ModeKind::L if self.index.is_negative() => 1,
            ModeKind::L if self.index.is_zero() => 2,
            ModeKind::G => 3,
            ModeKind::L => 4,
            ModeKind::Central => 5,
        };
        (block, -self.index.twice())
    }

    /// Order of two modes in normal-ordered words.
    pub fn pbw_cmp(self, other: Mode) -> Ordering {
        self.pbw_key().cmp(&other.pbw_key())
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ModeKind::L => write!(f, "L_{{{}}}", self.index),
            ModeKind::G => write!(f, "G_{{{}}}", self.index),
            ModeKind::Central => write!(f, "k"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("mode {mode} is not a generator of the {sector} algebra")]
    IndexSectorMismatch { mode: Mode, sector: Sector },
}

/// Graded bracket of two generators, split into its mode part and the
/// coefficient multiplying `c · 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketTerms {
    pub terms: Vec<(BigRational, Mode)>,
    /// Coefficient of `c` in the central term.
    pub central: BigRational,
    /// True for an anticommutator (both arguments odd).
    pub anti: bool,
}

impl BracketTerms {
    /// Sign `s` in `ab = [a, b] + s·ba`.
    pub fn swap_sign(&self) -> i64 {
        if self.anti {
            -1
        } else {
            1
        }
    }
}

/// Structure constants for `[a, b]`. Central arguments bracket to zero.
pub fn bracket_terms(a: Mode, b: Mode) -> BracketTerms {
    let anti = a.parity() == Parity::Odd && b.parity() == Parity::Odd;
    let mut out = BracketTerms { terms: Vec::new(), central: BigRational::zero(), anti };
    let sum = a.index + b.index;
    match (a.kind, b.kind) {
        (ModeKind::Central, _) | (_, ModeKind::Central) => {}
        (ModeKind::L, ModeKind::L) => {
            let m = a.index.to_rational();
            let n = b.index.to_rational();
            let coef = &m - &n;
            if !coef.is_zero() {
                out.terms.push((coef, Mode { kind: ModeKind::L, index: sum }));
            }
            if sum.is_zero() {
                out.central = (&m * &m * &m - &m) / int(12);
            }
        }
        (ModeKind::L, ModeKind::G) | (ModeKind::G, ModeKind::L) => {
            let (lm, gr, sign) = if a.kind == ModeKind::L { (a, b, 1) } else { (b, a, -1) };
            let coef = (lm.index.to_rational() / int(2) - gr.index.to_rational()) * int(sign);
            if !coef.is_zero() {
                out.terms.push((coef, Mode { kind: ModeKind::G, index: sum }));
            }
        }
        (ModeKind::G, ModeKind::G) => {
            out.terms.push((int(2), Mode { kind: ModeKind::L, index: sum }));
            if sum.is_zero() {
                let r = a.index.to_rational();
                out.central = (&r * &r - rat(1, 4)) / int(3);
            }
        }
    }
    out
}

/// A word of generators, read left to right as an operator product.
pub type Word = Vec<Mode>;

/// Linear combination of normal-ordered words with coefficients in `ℚ[c, h]`.
/// The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalCombination {
    terms: BTreeMap<Word, CPoly>,
}

impl FormalCombination {
    pub fn zero() -> Self {
        FormalCombination::default()
    }

    pub fn identity() -> Self {
        let mut out = FormalCombination::zero();
        out.add(Vec::new(), CPoly::one());
        out
    }

    pub fn add(&mut self, word: Word, coef: CPoly) {
        if coef.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&word) {
            Some(prev) => &prev + &coef,
            None => coef,
        };
        if !sum.is_zero() {
            self.terms.insert(word, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, word: &[Mode]) -> CPoly {
        self.terms.get(word).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Word, &CPoly)> {
        self.terms.iter()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let mut out = FormalCombination::zero();
        for (w, p) in &self.terms {
            out.add(w.clone(), p.scale(q));
        }
        out
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, p) in &other.terms {
            out.add(w.clone(), p.clone());
        }
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        self.plus(&other.scale(&-BigRational::one()))
    }

    /// Product of two combinations, normal ordered.
    pub fn mul(&self, other: &Self, sector: Sector) -> Result<Self, AlgebraError> {
        let mut out = FormalCombination::zero();
        for (w1, p1) in &self.terms {
            for (w2, p2) in &other.terms {
                let mut word = w1.clone();
                word.extend_from_slice(w2);
                let coef = p1 * p2;
                for (w, p) in normal_order(&word, sector)?.terms {
                    out.add(w, &p * &coef);
                }
            }
        }
        Ok(out)
    }
}

impl fmt::Display for FormalCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match p.as_constant() {
                Some(q) => write!(f, "{}", format_rational(&q))?,
                None => write!(f, "({p})")?,
            }
            if w.is_empty() {
                write!(f, "·1")?;
            }
            for m in w {
                write!(f, "·{m}")?;
            }
        }
        Ok(())
    }
}

/// Graded bracket `[a, b]` as a formal combination.
pub fn bracket(a: Mode, b: Mode, sector: Sector) -> Result<FormalCombination, AlgebraError> {
    a.validate(sector)?;
    b.validate(sector)?;
    let bt = bracket_terms(a, b);
    let mut out = FormalCombination::zero();
    for (q, m) in bt.terms {
        out.add(vec![m], CPoly::constant(q));
    }
    out.add(Vec::new(), CPoly::c().scale(&bt.central));
    Ok(out)
}

/// Rewrite a product of generators into the PBW basis.
///
/// Adjacent out-of-order pairs are swapped using `ab = s·ba + [a, b]`; a
/// repeated odd generator collapses to half its anticommutator. Central
/// elements are replaced by `c` before rewriting starts.
pub fn normal_order(word: &[Mode], sector: Sector) -> Result<FormalCombination, AlgebraError> {
    let mut start = Vec::with_capacity(word.len());
    let mut coef = CPoly::one();
    for &m in word {
        m.validate(sector)?;
        if m.kind == ModeKind::Central {
            coef = &coef * &CPoly::c();
        } else {
            start.push(m);
        }
    }

    let mut out = FormalCombination::zero();
    let mut work = vec![(start, coef)];
    while let Some((w, p)) = work.pop() {
        let pos = w.windows(2).position(|pair| match pair[0].pbw_cmp(pair[1]) {
            Ordering::Greater => true,
            Ordering::Equal => pair[0].parity() == Parity::Odd,
            Ordering::Less => false,
        });
        let Some(i) = pos else {
            out.add(w, p);
            continue;
        };
        let (a, b) = (w[i], w[i + 1]);
        let bt = bracket_terms(a, b);
        let splice = |middle: &[Mode]| {
            let mut v = Vec::with_capacity(w.len());
            v.extend_from_slice(&w[..i]);
            v.extend_from_slice(middle);
            v.extend_from_slice(&w[i + 2..]);
            v
        };
        // For a == b odd the rewrite is a·a = ½[a, a]; otherwise swap and add the bracket.
        let half = if a == b { rat(1, 2) } else { BigRational::one() };
        if a != b {
            work.push((splice(&[b, a]), p.scale(&int(bt.swap_sign()))));
        }
        for (q, m) in &bt.terms {
            work.push((splice(&[*m]), p.scale(&(q * &half))));
        }
        if !bt.central.is_zero() {
            work.push((splice(&[]), &p * &CPoly::c().scale(&(&bt.central * &half))));
        }
    }
    Ok(out)
}

/// True when `word` is already in PBW normal order.
pub fn is_normal_ordered(word: &[Mode]) -> bool {
    word.windows(2).all(|pair| match pair[0].pbw_cmp(pair[1]) {
        Ordering::Less => true,
        Ordering::Equal => pair[0].parity() == Parity::Even,
        Ordering::Greater => false,
    })
}
