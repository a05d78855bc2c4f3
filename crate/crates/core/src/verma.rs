//! Verma modules: PBW bases, the generator action, Gram matrices and
//! unitarity verdicts.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

use crate::algebra::{normal_order, AlgebraError, Mode, ModeKind, Parity, Sector};
use crate::half::HalfInt;
use crate::linalg::{congruence_diagonalize, pivot_columns, psd_verdict};
use crate::matrix::Matrix;
use crate::scalar::{format_rational, int, rat};

pub type RationalMatrix = Matrix<BigRational>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum VermaError {
    #[error("cutoff {cutoff} is not a valid level in the {sector} sector")]
    CutoffGranularity { cutoff: HalfInt, sector: Sector },
    #[error("cutoff must be non-negative, got {0}")]
    NegativeCutoff(HalfInt),
    #[error("level {level} is not a level of the module (cutoff {cutoff})")]
    LevelOutOfRange { level: HalfInt, cutoff: HalfInt },
    #[error("not unitary at (c, h) = ({c}, {h}): negative norm {norm} at level {level}")]
    NotUnitary { c: String, h: String, level: HalfInt, norm: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Sector, central charge, lowest weight and level cutoff of a module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleSpec {
    pub sector: Sector,
    pub c: BigRational,
    pub h: BigRational,
    pub cutoff: HalfInt,
}

impl ModuleSpec {
    pub fn new(sector: Sector, c: BigRational, h: BigRational, cutoff: HalfInt) -> Result<Self, VermaError> {
        if cutoff.is_negative() {
            return Err(VermaError::NegativeCutoff(cutoff));
        }
        if sector == Sector::Ramond && !cutoff.is_integer() {
            return Err(VermaError::CutoffGranularity { cutoff, sector });
        }
        Ok(ModuleSpec { sector, c, h, cutoff })
    }

    pub fn with_cutoff(&self, cutoff: HalfInt) -> Result<Self, VermaError> {
        ModuleSpec::new(self.sector, self.c.clone(), self.h.clone(), cutoff)
    }

    /// `c / 24`, the Ramond ground-state energy shift.
    pub fn casimir_shift(&self) -> BigRational {
        &self.c / int(24)
    }

    /// All levels `0, step, 2·step, …` up to the cutoff.
    pub fn levels(&self) -> Vec<HalfInt> {
        levels_up_to(self.sector, self.cutoff)
    }

    pub fn is_level(&self, level: HalfInt) -> bool {
        !level.is_negative()
            && level <= self.cutoff
            && (self.sector == Sector::NeveuSchwarz || level.is_integer())
    }
}

impl fmt::Display for ModuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} c={} h={} cutoff={}",
            self.sector.name(),
            format_rational(&self.c),
            format_rational(&self.h),
            self.cutoff
        )
    }
}

pub fn levels_up_to(sector: Sector, cutoff: HalfInt) -> Vec<HalfInt> {
    let step = sector.level_step().twice();
    (0..=cutoff.twice()).step_by(step as usize).map(HalfInt::from_twice).collect()
}

/// A PBW monomial `G_{r_1} ⋯ G_{r_k} L_{n_1} ⋯ L_{n_j} |h⟩` with
/// `r_1 > ⋯ > r_k` and `n_1 ≥ ⋯ ≥ n_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PBWMonomial {
    g_modes: Vec<HalfInt>,
    l_modes: Vec<HalfInt>,
}

impl PBWMonomial {
    pub fn vacuum() -> Self {
        PBWMonomial { g_modes: Vec::new(), l_modes: Vec::new() }
    }

    /// Validating constructor.
    pub fn new(sector: Sector, g_modes: Vec<HalfInt>, l_modes: Vec<HalfInt>) -> Option<Self> {
        let g_ok = g_modes.iter().all(|&r| sector.admits_g_index(r) && !r.is_positive())
            && g_modes.windows(2).all(|w| w[0] > w[1]);
        let l_ok = l_modes.iter().all(|&n| n.is_integer() && n.is_negative())
            && l_modes.windows(2).all(|w| w[0] >= w[1]);
        (g_ok && l_ok).then_some(PBWMonomial { g_modes, l_modes })
    }

    /// Reads a normal-ordered word of creation modes.
    pub fn from_word(sector: Sector, word: &[Mode]) -> Option<Self> {
        let split = word.iter().position(|m| m.kind != ModeKind::G).unwrap_or(word.len());
        let (g, l) = word.split_at(split);
        if l.iter().any(|m| m.kind != ModeKind::L) {
            return None;
        }
        PBWMonomial::new(sector, g.iter().map(|m| m.index).collect(), l.iter().map(|m| m.index).collect())
    }

    pub fn g_modes(&self) -> &[HalfInt] {
        &self.g_modes
    }

    pub fn l_modes(&self) -> &[HalfInt] {
        &self.l_modes
    }

    pub fn level(&self) -> HalfInt {
        self.g_modes.iter().chain(&self.l_modes).fold(HalfInt::ZERO, |acc, &i| acc - i)
    }

    pub fn parity(&self) -> Parity {
        if self.g_modes.len().is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn word(&self) -> Vec<Mode> {
        self.g_modes.iter().map(|&r| Mode::g(r)).chain(self.l_modes.iter().map(|&n| Mode::l(n.twice() / 2))).collect()
    }

    /// The leftmost mode and the monomial it acts on.
    pub fn split_first(&self) -> Option<(Mode, PBWMonomial)> {
        if let Some((&r, rest)) = self.g_modes.split_first() {
            return Some((Mode::g(r), PBWMonomial { g_modes: rest.to_vec(), l_modes: self.l_modes.clone() }));
        }
        let (&n, rest) = self.l_modes.split_first()?;
        Some((Mode::l(n.twice() / 2), PBWMonomial { g_modes: Vec::new(), l_modes: rest.to_vec() }))
    }
}

impl fmt::Display for PBWMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for m in self.word() {
            write!(f, "{m}")?;
        }
        write!(f, "|h⟩")
    }
}

/// PBW monomials grouped by level.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LevelBasis {
    by_level: BTreeMap<HalfInt, Vec<PBWMonomial>>,
}

impl LevelBasis {
    pub fn level(&self, level: HalfInt) -> &[PBWMonomial] {
        self.by_level.get(&level).map_or(&[], Vec::as_slice)
    }

    pub fn dims(&self) -> BTreeMap<HalfInt, usize> {
        self.by_level.iter().map(|(l, v)| (*l, v.len())).collect()
    }

    pub fn levels(&self) -> impl Iterator<Item = (&HalfInt, &Vec<PBWMonomial>)> {
        self.by_level.iter()
    }

    pub fn position(&self, m: &PBWMonomial) -> Option<usize> {
        self.level(m.level()).iter().position(|x| x == m)
    }
}

/// All PBW monomials up to the cutoff, ordered within a level by
/// `(gModes, lModes)` lexicographically.
pub fn enumerate_basis(spec: &ModuleSpec) -> LevelBasis {
    let n = spec.cutoff.twice();
    let g_parts: Vec<i64> = match spec.sector {
        Sector::NeveuSchwarz => (1..=n).step_by(2).collect(),
        Sector::Ramond => (0..=n).step_by(2).collect(),
    };
    let mut by_level: BTreeMap<HalfInt, Vec<PBWMonomial>> =
        spec.levels().into_iter().map(|l| (l, Vec::new())).collect();

    let mut g_sets = Vec::new();
    distinct_subsets(&g_parts, 0, n, &mut Vec::new(), &mut g_sets);
    for g in g_sets {
        let used: i64 = g.iter().sum();
        let mut partitions = Vec::new();
        // L parts are integers, i.e. even in twice-units
        partitions_twice(n - used, 2, &mut Vec::new(), &mut partitions);
        for l in partitions {
            let mut g_modes: Vec<HalfInt> = g.iter().map(|&t| HalfInt::from_twice(-t)).collect();
            g_modes.sort_by(|a, b| b.cmp(a));
            let mut l_modes: Vec<HalfInt> = l.iter().map(|&t| HalfInt::from_twice(-t)).collect();
            l_modes.sort_by(|a, b| b.cmp(a));
            let m = PBWMonomial { g_modes, l_modes };
            if let Some(v) = by_level.get_mut(&m.level()) {
                v.push(m);
            }
        }
    }
    for v in by_level.values_mut() {
        v.sort_by(|a, b| (&a.g_modes, &a.l_modes).cmp(&(&b.g_modes, &b.l_modes)));
    }
    LevelBasis { by_level }
}

fn distinct_subsets(parts: &[i64], start: usize, budget: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    out.push(cur.clone());
    for i in start..parts.len() {
        if parts[i] > budget {
            break;
        }
        cur.push(parts[i]);
        distinct_subsets(parts, i + 1, budget - parts[i], cur, out);
        cur.pop();
    }
}

/// All multisets of even parts `≥ min` with sum `≤ budget` (twice-units).
fn partitions_twice(budget: i64, min: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    out.push(cur.clone());
    let mut p = min;
    while p <= budget {
        cur.push(p);
        partitions_twice(budget - p, p, cur, out);
        cur.pop();
        p += 2;
    }
}

/// Result of applying a mode to a basis monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct ActResult {
    pub level: HalfInt,
    /// Coordinates over the basis of `level`; empty when truncated or when
    /// the level is negative (the result is then zero).
    pub coords: Vec<BigRational>,
    /// Set when the result lies above the cutoff and was discarded.
    pub truncated: bool,
}

/// A Verma module with its Gram matrices up to the cutoff.
#[derive(Clone, Debug)]
pub struct VermaModule {
    spec: ModuleSpec,
    basis: LevelBasis,
    grams: BTreeMap<HalfInt, RationalMatrix>,
}

impl VermaModule {
    pub fn new(spec: &ModuleSpec) -> Result<Self, VermaError> {
        let basis = enumerate_basis(spec);
        let mut module = VermaModule { spec: spec.clone(), basis, grams: BTreeMap::new() };
        for level in spec.levels() {
            let g = module.compute_gram(level)?;
            module.grams.insert(level, g);
        }
        Ok(module)
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn basis(&self) -> &LevelBasis {
        &self.basis
    }

    pub fn gram(&self, level: HalfInt) -> Result<&RationalMatrix, VermaError> {
        self.grams.get(&level).ok_or(VermaError::LevelOutOfRange { level, cutoff: self.spec.cutoff })
    }

    /// Coordinates of `m·v`, exact. Positive modes annihilate `|h⟩` and `L_0`
    /// acts on it as `h`.
    pub fn act(&self, m: Mode, v: &PBWMonomial) -> Result<ActResult, VermaError> {
        let target = v.level() - m.index;
        if target.is_negative() {
            return Ok(ActResult { level: target, coords: Vec::new(), truncated: false });
        }
        if target > self.spec.cutoff {
            return Ok(ActResult { level: target, coords: Vec::new(), truncated: true });
        }
        let mut word = vec![m];
        word.extend(v.word());
        let expanded = normal_order(&word, self.spec.sector)?;
        let basis = self.basis.level(target);
        let mut coords = vec![BigRational::zero(); basis.len()];
        for (w, coef) in expanded.iter() {
            let Some((mono, l0_count)) = self.reduce_on_lowest_weight(w) else {
                continue;
            };
            let value = coef.eval(&self.spec.c, &self.spec.h) * Pow::pow(&self.spec.h, l0_count);
            if value.is_zero() {
                continue;
            }
            let idx = basis.iter().position(|b| *b == mono).expect("normal-ordered creation word is a basis monomial");
            coords[idx] += value;
        }
        Ok(ActResult { level: target, coords, truncated: false })
    }

    /// Applies a normal-ordered word to `|h⟩`: returns the surviving creation
    /// monomial and the number of `L_0` factors, or `None` if it vanishes.
    fn reduce_on_lowest_weight(&self, word: &[Mode]) -> Option<(PBWMonomial, u32)> {
        let creation_end = word
            .iter()
            .position(|m| !(m.kind == ModeKind::G && !m.index.is_positive() || m.kind == ModeKind::L && m.index.is_negative()))
            .unwrap_or(word.len());
        let (creation, rest) = word.split_at(creation_end);
        let mut l0 = 0u32;
        for m in rest {
            if m.kind == ModeKind::L && m.index.is_zero() {
                l0 += 1;
            } else {
                return None;
            }
        }
        Some((PBWMonomial::from_word(self.spec.sector, creation)?, l0))
    }

    /// `m` applied to a vector of coordinates at `level`.
    pub fn act_vector(&self, m: Mode, level: HalfInt, coords: &[BigRational]) -> Result<ActResult, VermaError> {
        let target = level - m.index;
        let mut acc: Option<Vec<BigRational>> = None;
        for (mono, x) in self.basis.level(level).iter().zip(coords) {
            if x.is_zero() {
                continue;
            }
            let r = self.act(m, mono)?;
            if r.truncated || r.coords.is_empty() {
                return Ok(r);
            }
            let acc = acc.get_or_insert_with(|| vec![BigRational::zero(); r.coords.len()]);
            for (a, b) in acc.iter_mut().zip(&r.coords) {
                *a += b * x;
            }
        }
        let n = if target.is_negative() || target > self.spec.cutoff { 0 } else { self.basis.level(target).len() };
        Ok(ActResult {
            level: target,
            coords: acc.unwrap_or_else(|| vec![BigRational::zero(); n]),
            truncated: target > self.spec.cutoff,
        })
    }

    /// Gram matrix at `level`, using `⟨Y m', v⟩ = ⟨m', Y† v⟩` and the Gram
    /// matrices already known below (or, for a leading `G_0`, at) this level.
    fn compute_gram(&self, level: HalfInt) -> Result<RationalMatrix, VermaError> {
        let basis = self.basis.level(level);
        let n = basis.len();
        let mut g = Matrix::zeros(n, n);
        if level.is_zero() {
            g[(0, 0)] = BigRational::one();
        }
        let mut lowered: HashMap<Mode, Vec<ActResult>> = HashMap::new();
        let mut order: Vec<usize> = (0..n).collect();
        // rows for monomials with a leading G_0 need the others first
        order.sort_by_key(|&i| basis[i].split_first().is_some_and(|(m, _)| m.index.is_zero()));
        for i in order {
            let Some((first, rest)) = basis[i].split_first() else {
                continue;
            };
            let adj = first.adjoint();
            if let std::collections::hash_map::Entry::Vacant(slot) = lowered.entry(adj) {
                slot.insert(basis.iter().map(|b| self.act(adj, b)).collect::<Result<Vec<_>, _>>()?);
            }
            let rest_level = rest.level();
            let rest_idx = self.basis.position(&rest).expect("suffix of a monomial is a monomial");
            for (j, col) in lowered[&adj].iter().enumerate() {
                let mut entry = BigRational::zero();
                for (t, x) in col.coords.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    let inner = if rest_level == level {
                        g[(rest_idx, t)].clone()
                    } else {
                        self.grams[&rest_level][(rest_idx, t)].clone()
                    };
                    entry += inner * x;
                }
                g[(i, j)] = entry;
            }
        }
        Ok(g)
    }
}

/// Gram matrix of the Verma module at one level.
pub fn gram_matrix(spec: &ModuleSpec, level: HalfInt) -> Result<RationalMatrix, VermaError> {
    if !spec.is_level(level) {
        return Err(VermaError::LevelOutOfRange { level, cutoff: spec.cutoff });
    }
    let module = VermaModule::new(&spec.with_cutoff(level)?)?;
    Ok(module.gram(level)?.clone())
}

/// The irreducible quotient at one level.
#[derive(Clone, Debug, PartialEq)]
pub struct QuotientLevel {
    pub level: HalfInt,
    pub verma_dim: usize,
    pub dim: usize,
    /// Basis monomials whose classes span the quotient.
    pub representatives: Vec<usize>,
    /// Coordinates (dim × verma_dim) of every monomial's class in the representative basis.
    pub projection: RationalMatrix,
    /// Columns are combinations of the representatives, orthogonal for the Gram form.
    pub orthogonal_basis: RationalMatrix,
    /// Squared norms of the orthogonal basis; all positive.
    pub norms: Vec<BigRational>,
}

/// Quotient of the Verma module by the radical of its Gram form, level by level.
pub fn quotient_radical(spec: &ModuleSpec) -> Result<Vec<QuotientLevel>, VermaError> {
    let module = VermaModule::new(spec)?;
    let mut out = Vec::new();
    for level in spec.levels() {
        let g = module.gram(level)?;
        let verdict = psd_verdict(g);
        if !verdict.psd {
            return Err(VermaError::NotUnitary {
                c: format_rational(&spec.c),
                h: format_rational(&spec.h),
                level,
                norm: format_rational(&verdict.witness_norm.unwrap_or_default()),
            });
        }
        let reps = pivot_columns(g);
        let gb = g.submatrix(&reps, &reps);
        let all: Vec<usize> = (0..g.rows()).collect();
        let cross = g.submatrix(&reps, &all);
        let projection = match crate::linalg::inverse(&gb) {
            Some(inv) => &inv * &cross,
            None => Matrix::zeros(0, g.rows()),
        };
        let (orthogonal_basis, norms) = congruence_diagonalize(&gb).unwrap_or((Matrix::zeros(0, 0), Vec::new()));
        out.push(QuotientLevel {
            level,
            verma_dim: g.rows(),
            dim: reps.len(),
            representatives: reps,
            projection,
            orthogonal_basis,
            norms,
        });
    }
    Ok(out)
}

/// A negative-norm vector of a Gram form.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub vector: Vec<(PBWMonomial, BigRational)>,
    pub norm: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelVerdict {
    pub level: HalfInt,
    pub dim: usize,
    pub rank: usize,
    pub psd: bool,
    pub witness: Option<Witness>,
}

/// Exact positivity verdict of the Gram form at every level up to `cutoff`.
pub fn unitarity_scan(
    sector: Sector,
    c: &BigRational,
    h: &BigRational,
    cutoff: HalfInt,
) -> Result<Vec<LevelVerdict>, VermaError> {
    let spec = ModuleSpec::new(sector, c.clone(), h.clone(), cutoff)?;
    let module = VermaModule::new(&spec)?;
    let mut out = Vec::new();
    for level in spec.levels() {
        let g = module.gram(level)?;
        let v = psd_verdict(g);
        let witness = v.witness.map(|w| Witness {
            vector: module
                .basis
                .level(level)
                .iter()
                .cloned()
                .zip(w)
                .filter(|(_, x)| !x.is_zero())
                .collect(),
            norm: v.witness_norm.clone().unwrap_or_default(),
        });
        out.push(LevelVerdict { level, dim: g.rows(), rank: v.rank, psd: v.psd, witness });
    }
    Ok(out)
}

/// Central charge of the discrete series, `c = 3/2 (1 − 8/(m(m+2)))`.
pub fn discrete_series_central_charge(m: i64) -> Option<BigRational> {
    (m >= 2).then(|| rat(3, 2) * (BigRational::one() - rat(8, m * (m + 2))))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(sector: Sector, c: BigRational, h: BigRational, twice_cutoff: i64) -> ModuleSpec {
        ModuleSpec::new(sector, c, h, HalfInt::from_twice(twice_cutoff)).unwrap()
    }

    fn dims(b: &LevelBasis) -> Vec<usize> {
        b.dims().values().cloned().collect()
    }

    #[test]
    fn basis_dimensions() {
        let ns = enumerate_basis(&spec(Sector::NeveuSchwarz, int(1), int(0), 4));
        assert_eq!(dims(&ns), vec![1, 1, 1, 2, 3]);
        let r = enumerate_basis(&spec(Sector::Ramond, int(1), int(0), 2));
        assert_eq!(dims(&r), vec![2, 4]);
        let z = enumerate_basis(&spec(Sector::NeveuSchwarz, int(1), int(0), 0));
        assert_eq!(dims(&z), vec![1]);
        let l = ns.level(HalfInt::from_twice(3));
        assert_eq!(l[0].to_string(), "G_{-3/2}|h⟩");
        assert_eq!(l[1].to_string(), "G_{-1/2}L_{-1}|h⟩");
    }

    #[test]
    fn cutoff_granularity() {
        assert!(matches!(
            ModuleSpec::new(Sector::Ramond, int(1), int(0), HalfInt::HALF),
            Err(VermaError::CutoffGranularity { .. })
        ));
    }

    #[test]
    fn act_examples() {
        let h = rat(1, 10);
        let s = spec(Sector::NeveuSchwarz, int(1), h.clone(), 4);
        let m = VermaModule::new(&s).unwrap();
        let l1 = PBWMonomial::new(Sector::NeveuSchwarz, vec![], vec![HalfInt::int(-1)]).unwrap();
        let r = m.act(Mode::l(1), &l1).unwrap();
        assert_eq!(r.coords, vec![&h * int(2)]);
        let g = PBWMonomial::new(Sector::NeveuSchwarz, vec![HalfInt::from_twice(-1)], vec![]).unwrap();
        let r = m.act(Mode::g_twice(1), &g).unwrap();
        assert_eq!(r.coords, vec![&h * int(2)]);
        let r = m.act(Mode::l(0), &l1).unwrap();
        assert_eq!(r.coords, vec![&h + int(1)]);
        let r = m.act(Mode::l(-3), &l1).unwrap();
        assert!(r.truncated);
    }

    #[test]
    fn gram_examples() {
        let (c, h) = (rat(7, 10), rat(3, 5));
        let s = spec(Sector::NeveuSchwarz, c.clone(), h.clone(), 3);
        let g = gram_matrix(&s, HalfInt::from_twice(3)).unwrap();
        let expected = Matrix::from_rows(vec![
            vec![&h * int(2) + &c * rat(2, 3), &h * int(4)],
            vec![&h * int(4), &h * &h * int(4) + &h * int(2)],
        ]);
        assert_eq!(g, expected);
        assert_eq!(gram_matrix(&s, HalfInt::HALF).unwrap(), Matrix::from_rows(vec![vec![&h * int(2)]]));

        let r = spec(Sector::Ramond, c.clone(), h.clone(), 0);
        let g0 = gram_matrix(&r, HalfInt::ZERO).unwrap();
        assert_eq!(g0, Matrix::diagonal(&[int(1), &h - &c / int(24)]));
    }

    #[test]
    fn quotient_examples() {
        let c = rat(7, 10);
        let q = quotient_radical(&spec(Sector::Ramond, c.clone(), &c / int(24), 0)).unwrap();
        assert_eq!(q[0].dim, 1);
        let q = quotient_radical(&spec(Sector::Ramond, c.clone(), &c / int(24) + int(1), 0)).unwrap();
        assert_eq!(q[0].dim, 2);
        let q = quotient_radical(&spec(Sector::NeveuSchwarz, c, int(0), 2)).unwrap();
        assert_eq!(q[1].dim, 0);
        assert_eq!(q[2].dim, 0);
    }

    #[test]
    fn scan_reports_witness() {
        let v = unitarity_scan(Sector::NeveuSchwarz, &rat(7, 10), &int(-1), HalfInt::HALF).unwrap();
        assert!(v[0].psd);
        assert!(!v[1].psd);
        let w = v[1].witness.as_ref().unwrap();
        assert_eq!(w.norm, int(-2));
        assert_eq!(w.vector.len(), 1);
        assert_eq!(w.vector[0].0.to_string(), "G_{-1/2}|h⟩");
    }

    #[test]
    fn discrete_series() {
        assert_eq!(discrete_series_central_charge(3), Some(rat(7, 10)));
        assert_eq!(discrete_series_central_charge(2), Some(int(0)));
        assert_eq!(discrete_series_central_charge(4), Some(int(1)));
        assert_eq!(discrete_series_central_charge(1), None);
    }
}
