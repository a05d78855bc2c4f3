//! Level-by-level construction of the irreducible lowest-weight module.
//!
//! Level `ℓ` is spanned by `Y u` with `Y` one of two creation generators
//! (`G_{-1/2}`, `G_{-3/2}` in NS; `L_{-1}`, `G_{-1}` in Ramond) and `u` a
//! basis vector at a lower level. Annihilators act on such vectors through
//! `X Y u = [X, Y] u ± Y X u`, which only involves matrices already known.
//! The Gram form on the candidates follows from `⟨Y u, v⟩ = ⟨u, Y† v⟩`;
//! dividing out its radical and diagonalizing it gives an orthogonal basis of
//! the irreducible quotient with exact rational squared norms. Raising
//! matrices into level `ℓ` are the metric adjoints of the lowering ones.

use std::collections::HashMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::algebra::{bracket_terms, Mode, ModeKind, Parity, Sector};
use crate::half::HalfInt;
use crate::linalg::{congruence_diagonalize, pivot_columns};
use crate::matrix::Matrix;
use crate::scalar::{format_rational, int};
use crate::verma::ModuleSpec;

use super::operator::TruncatedOperator;
use super::RepError;

/// How to treat a Gram form with negative directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnitarityPolicy {
    /// Fail at the first level with a negative squared norm.
    RequireUnitary,
    /// Build the quotient anyway; the norms record the signature.
    AllowIndefinite,
}

/// Level structure of a truncated module: dimensions, parities and the
/// squared norms of the orthogonal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Layout {
    pub sector: Sector,
    pub c: BigRational,
    pub h: BigRational,
    pub cutoff: HalfInt,
    levels: Vec<HalfInt>,
    parities: Vec<Vec<Parity>>,
    norms: Vec<Vec<BigRational>>,
    labels: Vec<Vec<String>>,
    offsets: Vec<usize>,
}

impl Layout {
    pub fn levels(&self) -> &[HalfInt] {
        &self.levels
    }

    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn level(&self, idx: usize) -> HalfInt {
        self.levels[idx]
    }

    /// Index of `level`, if it is a level of the truncation.
    pub fn level_index(&self, level: HalfInt) -> Option<usize> {
        if level.is_negative() || level > self.cutoff {
            return None;
        }
        let step = self.sector.level_step().twice();
        (level.twice() % step == 0).then(|| (level.twice() / step) as usize)
    }

    pub fn dim(&self, idx: usize) -> usize {
        self.norms[idx].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.norms.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.offsets.last().copied().unwrap_or(0) + self.norms.last().map_or(0, Vec::len)
    }

    pub fn offset(&self, idx: usize) -> usize {
        self.offsets[idx]
    }

    pub fn parities(&self, idx: usize) -> &[Parity] {
        &self.parities[idx]
    }

    pub fn norms(&self, idx: usize) -> &[BigRational] {
        &self.norms[idx]
    }

    pub fn labels(&self, idx: usize) -> &[String] {
        &self.labels[idx]
    }

    /// `(even, odd)` dimensions at a level.
    pub fn graded_dims(&self, idx: usize) -> (usize, usize) {
        let odd = self.parities[idx].iter().filter(|p| **p == Parity::Odd).count();
        (self.dim(idx) - odd, odd)
    }

    /// True when every squared norm is positive.
    pub fn is_unitary(&self) -> bool {
        self.norms.iter().flatten().all(|d| d > &BigRational::zero())
    }

    /// Lowest level carrying a negative squared norm.
    pub fn first_negative_level(&self) -> Option<HalfInt> {
        self.norms
            .iter()
            .position(|ds| ds.iter().any(|d| d < &BigRational::zero()))
            .map(|i| self.levels[i])
    }

    /// `L_0` eigenvalue `h + ℓ` on level `idx`.
    pub fn energy(&self, idx: usize) -> BigRational {
        &self.h + self.levels[idx].to_rational()
    }
}

/// The irreducible quotient of the lowest-weight module, truncated at the
/// cutoff, with every mode realized as exact rational blocks.
#[derive(Clone, Debug)]
pub struct IrreducibleModule {
    spec: ModuleSpec,
    layout: Arc<Layout>,
    /// `(mode, input level index)` → block to level `input − index`.
    blocks: HashMap<(Mode, usize), Matrix<BigRational>>,
}

type Vector = Vec<BigRational>;

struct Candidate {
    generator: Mode,
    from: usize,
    slot: usize,
}

impl IrreducibleModule {
    pub fn build(spec: &ModuleSpec, policy: UnitarityPolicy) -> Result<Self, RepError> {
        let levels = spec.levels();
        let mut builder = Builder {
            spec,
            levels: levels.clone(),
            parities: Vec::new(),
            norms: Vec::new(),
            labels: Vec::new(),
            blocks: HashMap::new(),
        };
        for (idx, &level) in levels.iter().enumerate() {
            if idx == 0 {
                builder.ground_level();
            } else {
                builder.next_level(idx, level);
            }
            if policy == UnitarityPolicy::RequireUnitary {
                if let Some(d) = builder.norms[idx].iter().find(|d| *d < &BigRational::zero()) {
                    return Err(RepError::NotUnitary {
                        c: format_rational(&spec.c),
                        h: format_rational(&spec.h),
                        level,
                        norm: format_rational(d),
                    });
                }
            }
        }
        let mut offsets = Vec::with_capacity(levels.len());
        let mut acc = 0;
        for ds in &builder.norms {
            offsets.push(acc);
            acc += ds.len();
        }
        let layout = Layout {
            sector: spec.sector,
            c: spec.c.clone(),
            h: spec.h.clone(),
            cutoff: spec.cutoff,
            levels,
            parities: builder.parities,
            norms: builder.norms,
            labels: builder.labels,
            offsets,
        };
        Ok(IrreducibleModule { spec: spec.clone(), layout: Arc::new(layout), blocks: builder.blocks })
    }

    pub fn spec(&self) -> &ModuleSpec {
        &self.spec
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    /// Exact matrix of a mode on the orthogonal quotient basis.
    pub fn mode_operator(&self, m: Mode) -> Result<TruncatedOperator<BigRational>, RepError> {
        m.validate(self.spec.sector)?;
        let layout = &self.layout;
        let mut op = TruncatedOperator::zero(layout.clone(), m.raising_depth(), Some(m.parity()), m.to_string());
        match m.kind {
            ModeKind::Central => {
                for idx in 0..layout.level_count() {
                    let n = layout.dim(idx);
                    op.insert_block(idx, idx, Matrix::identity(n).scale(&self.spec.c));
                }
            }
            ModeKind::L if m.index.is_zero() => {
                for idx in 0..layout.level_count() {
                    let e = layout.energy(idx);
                    op.insert_block(idx, idx, Matrix::diagonal(&vec![e; layout.dim(idx)]));
                }
            }
            _ => {
                for idx in 0..layout.level_count() {
                    let Some(out) = layout.level_index(layout.level(idx) - m.index) else {
                        continue;
                    };
                    if let Some(b) = self.blocks.get(&(m, idx)) {
                        op.insert_block(out, idx, b.clone());
                    }
                }
            }
        }
        Ok(op)
    }
}

struct Builder<'a> {
    spec: &'a ModuleSpec,
    levels: Vec<HalfInt>,
    parities: Vec<Vec<Parity>>,
    norms: Vec<Vec<BigRational>>,
    labels: Vec<Vec<String>>,
    blocks: HashMap<(Mode, usize), Matrix<BigRational>>,
}

impl Builder<'_> {
    fn level_index(&self, level: HalfInt) -> Option<usize> {
        let step = self.spec.sector.level_step().twice();
        (!level.is_negative() && level.twice() % step == 0).then(|| (level.twice() / step) as usize)
    }

    fn dim(&self, idx: usize) -> usize {
        self.norms[idx].len()
    }

    fn ground_level(&mut self) {
        let c24 = &self.spec.c / int(24);
        let vac = vec!["|h⟩".to_string()];
        match self.spec.sector {
            Sector::NeveuSchwarz => {
                self.parities.push(vec![Parity::Even]);
                self.norms.push(vec![BigRational::one()]);
                self.labels.push(vac);
            }
            Sector::Ramond => {
                let gap = &self.spec.h - &c24;
                if gap.is_zero() {
                    self.parities.push(vec![Parity::Even]);
                    self.norms.push(vec![BigRational::one()]);
                    self.labels.push(vac);
                    self.blocks.insert((Mode::g_twice(0), 0), Matrix::zeros(1, 1));
                } else {
                    self.parities.push(vec![Parity::Even, Parity::Odd]);
                    self.norms.push(vec![BigRational::one(), gap.clone()]);
                    self.labels.push(vec!["|h⟩".into(), "G_{0}|h⟩".into()]);
                    let g0 = Matrix::from_rows(vec![
                        vec![BigRational::zero(), gap],
                        vec![BigRational::one(), BigRational::zero()],
                    ]);
                    self.blocks.insert((Mode::g_twice(0), 0), g0);
                }
            }
        }
    }

    /// Applies a mode to a vector at level index `from`; `None` means the
    /// result is zero because it would lie below the ground level.
    fn apply(&self, m: Mode, from: usize, v: &[BigRational]) -> Option<Vector> {
        let target = self.levels[from] - m.index;
        let out = self.level_index(target)?;
        match m.kind {
            ModeKind::Central => Some(v.iter().map(|x| x * &self.spec.c).collect()),
            ModeKind::L if m.index.is_zero() => {
                let e = &self.spec.h + self.levels[from].to_rational();
                Some(v.iter().map(|x| x * &e).collect())
            }
            _ => match self.blocks.get(&(m, from)) {
                Some(b) => Some(b.mul_vec(v)),
                None => {
                    debug_assert_eq!(self.dim(out), 0, "missing block for {m} at level {}", self.levels[from]);
                    Some(vec![BigRational::zero(); self.dim(out)])
                }
            },
        }
    }

    fn generators(&self) -> [Mode; 2] {
        match self.spec.sector {
            Sector::NeveuSchwarz => [Mode::g_twice(-1), Mode::g_twice(-3)],
            Sector::Ramond => [Mode::l(-1), Mode::g_twice(-2)],
        }
    }

    /// Annihilation modes whose image from level `level` is still a level.
    fn annihilators(&self, level: HalfInt) -> Vec<Mode> {
        let mut out = Vec::new();
        let mut t = self.spec.sector.level_step().twice();
        while t <= level.twice() {
            let n = HalfInt::from_twice(t);
            if n.is_integer() {
                out.push(Mode::l(t / 2));
            }
            if self.spec.sector.admits_g_index(n) {
                out.push(Mode::g(n));
            }
            t += self.spec.sector.level_step().twice();
        }
        out
    }

    /// `X Y u` for an annihilator `X` and a candidate `Y u`, via the bracket.
    fn lower_candidate(&self, x: Mode, cand: &Candidate) -> Vector {
        let y = cand.generator;
        let mut e = vec![BigRational::zero(); self.dim(cand.from)];
        e[cand.slot] = BigRational::one();
        let out_level = self.levels[cand.from] - y.index - x.index;
        let out_dim = self.level_index(out_level).map_or(0, |i| self.dim(i));
        let mut res = vec![BigRational::zero(); out_dim];

        let bt = bracket_terms(x, y);
        for (q, z) in &bt.terms {
            if let Some(v) = self.apply(*z, cand.from, &e) {
                for (r, vi) in res.iter_mut().zip(v) {
                    *r += q * vi;
                }
            }
        }
        if !bt.central.is_zero() {
            let k = &bt.central * &self.spec.c;
            res[cand.slot] += k;
        }
        if let Some(xu) = self.apply(x, cand.from, &e) {
            let mid = self.level_index(self.levels[cand.from] - x.index).expect("apply returned a level");
            if let Some(yxu) = self.apply(y, mid, &xu) {
                let s = int(bt.swap_sign());
                for (r, vi) in res.iter_mut().zip(yxu) {
                    *r += &s * vi;
                }
            }
        }
        res
    }

    fn next_level(&mut self, idx: usize, level: HalfInt) {
        let gens = self.generators();
        let mut cands = Vec::new();
        for g in gens {
            if let Some(from) = self.level_index(level + g.index) {
                for slot in 0..self.dim(from) {
                    cands.push(Candidate { generator: g, from, slot });
                }
            }
        }
        let annihilators = self.annihilators(level);
        let lowered: HashMap<Mode, Vec<Vector>> = annihilators
            .iter()
            .map(|&x| (x, cands.iter().map(|c| self.lower_candidate(x, c)).collect()))
            .collect();

        // ⟨Y u_a, Y' u_b⟩ = ⟨u_a, Y† Y' u_b⟩ with the diagonal metric below
        let n = cands.len();
        let gram = Matrix::from_fn(n, n, |a, b| {
            let ca = &cands[a];
            let v = &lowered[&ca.generator.adjoint()][b];
            &self.norms[ca.from][ca.slot] * &v[ca.slot]
        });
        debug_assert!(gram.is_symmetric(), "candidate Gram matrix must be symmetric");

        let reps = pivot_columns(&gram);
        let gb = gram.submatrix(&reps, &reps);
        let (m, d) = congruence_diagonalize(&gb).expect("pivot block of a Gram matrix is nonsingular");
        let r = reps.len();

        let parity_of = |c: &Candidate| {
            let p = self.parities[c.from][c.slot];
            if c.generator.parity() == Parity::Odd {
                p.flip()
            } else {
                p
            }
        };
        let mut parities = Vec::with_capacity(r);
        let mut labels = Vec::with_capacity(r);
        for k in 0..r {
            let lead = (0..r).rev().find(|&b| !m[(b, k)].is_zero()).expect("basis change is invertible");
            let c = &cands[reps[lead]];
            parities.push(parity_of(c));
            labels.push(format!("{}{}", c.generator, self.labels[c.from][c.slot]));
        }

        // lowering blocks out of this level
        for x in &annihilators {
            let out = self.level_index(level - x.index).expect("annihilator image is a level");
            let rows = self.dim(out);
            let mut block = Matrix::zeros(rows, r);
            for k in 0..r {
                let mut col = vec![BigRational::zero(); rows];
                for b in 0..r {
                    if m[(b, k)].is_zero() {
                        continue;
                    }
                    for (ci, vi) in col.iter_mut().zip(&lowered[x][reps[b]]) {
                        *ci += &m[(b, k)] * vi;
                    }
                }
                block.set_col(k, &col);
            }
            self.blocks.insert((*x, idx), block);
        }

        self.parities.push(parities);
        self.labels.push(labels);
        self.norms.push(d.clone());

        // raising blocks into this level: X_{-n} = D_ℓ^{-1} X_nᵀ D_{ℓ-n}
        for x in &annihilators {
            let from = self.level_index(level - x.index).expect("annihilator image is a level");
            let low = &self.blocks[&(*x, idx)];
            let raise = Matrix::from_fn(r, self.dim(from), |k, j| &low[(j, k)] * &self.norms[from][j] / &d[k]);
            self.blocks.insert((x.adjoint(), from), raise);
        }

        if self.spec.sector == Sector::Ramond {
            let g0 = Mode::g_twice(0);
            let mut block = Matrix::zeros(r, r);
            for k in 0..r {
                let mut col = vec![BigRational::zero(); r];
                for b in 0..r {
                    if m[(b, k)].is_zero() {
                        continue;
                    }
                    let v = self.zero_mode_on_candidate(g0, &cands[reps[b]], idx);
                    for (ci, vi) in col.iter_mut().zip(v) {
                        *ci += &m[(b, k)] * vi;
                    }
                }
                block.set_col(k, &col);
            }
            self.blocks.insert((g0, idx), block);
        }
    }

    /// `G_0 Y u = [G_0, Y] u ± Y G_0 u`, landing at level index `idx`.
    fn zero_mode_on_candidate(&self, g0: Mode, cand: &Candidate, idx: usize) -> Vector {
        let y = cand.generator;
        let mut e = vec![BigRational::zero(); self.dim(cand.from)];
        e[cand.slot] = BigRational::one();
        let mut res = vec![BigRational::zero(); self.dim(idx)];
        let bt = bracket_terms(g0, y);
        for (q, z) in &bt.terms {
            let v = self.apply(*z, cand.from, &e).expect("raising into the current level");
            for (r, vi) in res.iter_mut().zip(v) {
                *r += q * vi;
            }
        }
        let g0u = self.apply(g0, cand.from, &e).expect("zero mode preserves the level");
        let yg0u = self.apply(y, cand.from, &g0u).expect("raising into the current level");
        let s = int(bt.swap_sign());
        for (r, vi) in res.iter_mut().zip(yg0u) {
            *r += &s * vi;
        }
        res
    }
}
