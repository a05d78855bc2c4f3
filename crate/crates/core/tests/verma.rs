use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use svirlab::linalg::determinant;
use svirlab::repmat::{IrreducibleModule, UnitarityPolicy};
use svirlab::scalar::{int, rat};
use svirlab::verma::{
    discrete_series_central_charge, enumerate_basis, gram_matrix, quotient_radical, unitarity_scan, ModuleSpec,
    PBWMonomial, VermaModule,
};
use svirlab::{HalfInt, Mode, Sector};

/// Level dimensions from the generating function
/// `∏_{r ∈ G-parts} (1 + q^r) ∏_{n ≥ 1} 1/(1 − q^n)`, in twice-units.
fn partition_oracle(sector: Sector, twice_cutoff: usize) -> Vec<u64> {
    let mut coeffs = vec![0u64; twice_cutoff + 1];
    coeffs[0] = 1;
    let g_parts: Vec<usize> = match sector {
        Sector::NeveuSchwarz => (1..=twice_cutoff).step_by(2).collect(),
        Sector::Ramond => (0..=twice_cutoff).step_by(2).collect(),
    };
    for p in g_parts {
        if p == 0 {
            coeffs.iter_mut().for_each(|x| *x *= 2);
            continue;
        }
        for k in (p..=twice_cutoff).rev() {
            coeffs[k] += coeffs[k - p];
        }
    }
    for p in (2..=twice_cutoff).step_by(2) {
        for k in p..=twice_cutoff {
            coeffs[k] += coeffs[k - p];
        }
    }
    let step = match sector {
        Sector::NeveuSchwarz => 1,
        Sector::Ramond => 2,
    };
    coeffs.into_iter().step_by(step).collect()
}

#[test]
fn basis_matches_partition_oracle_to_level_eight() {
    for sector in [Sector::NeveuSchwarz, Sector::Ramond] {
        let spec = ModuleSpec::new(sector, int(1), int(0), HalfInt::int(8)).unwrap();
        let dims: Vec<u64> = enumerate_basis(&spec).dims().values().map(|&d| d as u64).collect();
        assert_eq!(dims, partition_oracle(sector, 16), "{sector}");
    }
}

/// An independent vacuum-expectation engine: generators as `(is_g, twice index)`,
/// brackets written out from the defining relations.
mod oracle {
    use super::*;

    pub type Gen = (bool, i64);
    pub type Word = Vec<Gen>;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// `[a, b]` as generator terms plus a multiple of the identity.
    fn bracket(a: Gen, b: Gen, c: &BigRational) -> (Vec<(BigRational, Gen)>, BigRational) {
        let (m, n) = (a.1, b.1);
        match (a.0, b.0) {
            (false, false) => {
                let central = if m + n == 0 {
                    let mm = m / 2;
                    c * q(mm * mm * mm - mm, 12)
                } else {
                    BigRational::zero()
                };
                (vec![(q(m - n, 2), (false, m + n))], central)
            }
            // [L_m, G_r] = (m/2 − r) G_{m+r}
            (false, true) => (vec![(q(m - 2 * n, 4), (true, m + n))], BigRational::zero()),
            (true, false) => (vec![(q(2 * m - n, 4), (true, m + n))], BigRational::zero()),
            (true, true) => {
                let central = if m + n == 0 { c * q(1, 3) * (q(m * m, 4) - q(1, 4)) } else { BigRational::zero() };
                (vec![(int(2), (false, m + n))], central)
            }
        }
    }

    fn is_odd(w: &[Gen]) -> bool {
        w.iter().filter(|g| g.0).count() % 2 == 1
    }

    /// `⟨h| w |h⟩`.
    pub fn vev(w: &[Gen], c: &BigRational, h: &BigRational) -> BigRational {
        if w.is_empty() {
            return BigRational::one();
        }
        if is_odd(w) {
            return BigRational::zero();
        }
        // move the rightmost annihilator to the right end
        if let Some(p) = w.iter().rposition(|g| g.1 > 0) {
            if p == w.len() - 1 {
                return BigRational::zero();
            }
            let (a, b) = (w[p], w[p + 1]);
            let mut total = BigRational::zero();
            let (terms, central) = bracket(a, b, c);
            let mut rest = w.to_vec();
            rest.drain(p..p + 2);
            for (k, g) in terms {
                let mut nw = rest.clone();
                nw.insert(p, g);
                total += k * vev(&nw, c, h);
            }
            total += central * vev(&rest, c, h);
            let sign = if a.0 && b.0 { -1 } else { 1 };
            let mut swapped = w.to_vec();
            swapped.swap(p, p + 1);
            return total + int(sign) * vev(&swapped, c, h);
        }
        let first = w[0];
        if first.1 < 0 {
            return BigRational::zero();
        }
        if !first.0 {
            return h * vev(&w[1..], c, h);
        }
        // leftmost G_0 with only creation or zero modes to its right
        let next = w[1];
        if next == first {
            let mut nw = vec![(false, 0)];
            nw.extend_from_slice(&w[2..]);
            let shifted = vev(&nw, c, h) - c / int(24) * vev(&w[2..], c, h);
            return shifted;
        }
        if next == (false, 0) {
            let mut nw = w.to_vec();
            nw.swap(0, 1);
            return vev(&nw, c, h);
        }
        // next is a creation mode: ⟨h| next = 0, so only the bracket survives
        let (terms, central) = bracket(first, next, c);
        let mut total = central * vev(&w[2..], c, h);
        for (k, g) in terms {
            let mut nw = vec![g];
            nw.extend_from_slice(&w[2..]);
            total += k * vev(&nw, c, h);
        }
        total
    }

    pub fn adjoint(w: &[Gen]) -> Word {
        w.iter().rev().map(|&(g, t)| (g, -t)).collect()
    }
}

fn to_oracle_word(word: &[svirlab::Mode]) -> oracle::Word {
    word.iter().map(|m| (m.kind == svirlab::ModeKind::G, m.index.twice())).collect()
}

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    rat(rng.gen_range(-40..=40), rng.gen_range(1..=12))
}

#[test]
fn gram_matches_brute_force_oracle_at_random_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for sample in 0..20 {
        let c = random_rational(&mut rng);
        let h = random_rational(&mut rng);
        for (sector, twice_top) in [(Sector::NeveuSchwarz, 5), (Sector::Ramond, 4)] {
            let spec = ModuleSpec::new(sector, c.clone(), h.clone(), HalfInt::from_twice(twice_top)).unwrap();
            let basis = enumerate_basis(&spec);
            for level in spec.levels() {
                let g = gram_matrix(&spec, level).unwrap();
                let mons = basis.level(level);
                for (i, u) in mons.iter().enumerate() {
                    for (j, v) in mons.iter().enumerate() {
                        let mut w = oracle::adjoint(&to_oracle_word(&u.word()));
                        w.extend(to_oracle_word(&v.word()));
                        let expected = oracle::vev(&w, &c, &h);
                        assert_eq!(g[(i, j)], expected, "sample {sample} {sector} level {level} ({u}, {v})");
                    }
                }
                assert_eq!(g, g.transpose());
                let oracle_gram = svirlab::Matrix::from_fn(mons.len(), mons.len(), |i, j| {
                    let mut w = oracle::adjoint(&to_oracle_word(&mons[i].word()));
                    w.extend(to_oracle_word(&mons[j].word()));
                    oracle::vev(&w, &c, &h)
                });
                assert_eq!(determinant(&g), determinant(&oracle_gram));
            }
        }
    }
}

#[test]
fn ns_level_three_halves_closed_form() {
    let (c, h) = (rat(7, 3), rat(5, 11));
    let spec = ModuleSpec::new(Sector::NeveuSchwarz, c.clone(), h.clone(), HalfInt::from_twice(3)).unwrap();
    let g = gram_matrix(&spec, HalfInt::from_twice(3)).unwrap();
    let expected = svirlab::Matrix::from_rows(vec![
        vec![int(2) * &h + int(2) * &c / int(3), int(4) * &h],
        vec![int(4) * &h, int(4) * &h * &h + int(2) * &h],
    ]);
    assert_eq!(g, expected);
}

#[test]
fn unitary_points_are_psd_to_level_four() {
    let cases = [
        (Sector::NeveuSchwarz, rat(7, 10), int(0)),
        (Sector::NeveuSchwarz, int(1), int(0)),
        (Sector::Ramond, int(1), rat(1, 24)),
        (Sector::Ramond, int(1), rat(1, 16)),
    ];
    for (sector, c, h) in cases {
        let scan = unitarity_scan(sector, &c, &h, HalfInt::int(4)).unwrap();
        assert!(scan.iter().all(|v| v.psd), "{sector} c={c} h={h}");
    }
}

#[test]
fn negative_weight_has_witness_at_level_half() {
    let scan = unitarity_scan(Sector::NeveuSchwarz, &rat(7, 10), &int(-1), HalfInt::HALF).unwrap();
    let v = &scan[1];
    assert!(!v.psd);
    let w = v.witness.as_ref().unwrap();
    assert_eq!(w.norm, int(-2));
    assert_eq!(w.vector.len(), 1);
    assert_eq!(w.vector[0].0.to_string(), "G_{-1/2}|h⟩");
}

/// `h = c/24` in the Ramond sector forces `(m+2)p = mq` for the discrete
/// series weights; for `m = 3` no such weight exists, and the scan finds
/// the negative norm.
#[test]
fn ramond_ground_state_at_seven_tenths_is_not_unitary() {
    let scan = unitarity_scan(Sector::Ramond, &rat(7, 10), &rat(7, 240), HalfInt::int(3)).unwrap();
    let first_bad = scan.iter().find(|v| !v.psd).map(|v| v.level);
    assert_eq!(first_bad, Some(HalfInt::int(3)));
    let w = scan[3].witness.as_ref().unwrap();
    assert!(w.norm < BigRational::zero());
}

#[test]
fn quotient_dims_agree_with_irreducible_module() {
    let cases = [
        (Sector::NeveuSchwarz, rat(7, 10), int(0), HalfInt::int(4)),
        (Sector::NeveuSchwarz, int(1), int(0), HalfInt::int(4)),
        (Sector::NeveuSchwarz, int(1), rat(1, 6), HalfInt::int(3)),
        (Sector::Ramond, int(1), rat(1, 24), HalfInt::int(4)),
    ];
    for (sector, c, h, cutoff) in cases {
        let spec = ModuleSpec::new(sector, c, h, cutoff).unwrap();
        let quotient = quotient_radical(&spec).unwrap();
        let module = IrreducibleModule::build(&spec, UnitarityPolicy::RequireUnitary).unwrap();
        let verma_dims: Vec<usize> = quotient.iter().map(|q| q.dim).collect();
        assert_eq!(verma_dims, module.layout().dims(), "{spec}");
    }
}

fn spec(sector: Sector, c: BigRational, h: BigRational, twice_cutoff: i64) -> ModuleSpec {
    ModuleSpec::new(sector, c, h, HalfInt::from_twice(twice_cutoff)).unwrap()
}

#[test]
fn small_basis_examples() {
    let dims = |s: &ModuleSpec| -> Vec<(i64, usize)> {
        enumerate_basis(s).dims().into_iter().map(|(l, d)| (l.twice(), d)).collect()
    };
    assert_eq!(dims(&spec(Sector::NeveuSchwarz, int(1), int(0), 4)), vec![(0, 1), (1, 1), (2, 1), (3, 2), (4, 3)]);
    assert_eq!(dims(&spec(Sector::Ramond, int(1), int(0), 2)), vec![(0, 2), (2, 4)]);
    assert_eq!(dims(&spec(Sector::NeveuSchwarz, int(1), int(0), 0)), vec![(0, 1)]);
    assert!(ModuleSpec::new(Sector::Ramond, int(1), int(0), HalfInt::HALF).is_err());
}

#[test]
fn action_examples() {
    let h = rat(3, 7);
    let s = spec(Sector::NeveuSchwarz, rat(7, 10), h.clone(), 4);
    let verma = VermaModule::new(&s).unwrap();
    for (level, mons) in verma.basis().levels() {
        for (i, v) in mons.iter().enumerate() {
            let r = verma.act(Mode::l(0), v).unwrap();
            let mut expected = vec![BigRational::zero(); mons.len()];
            expected[i] = &h + level.to_rational();
            assert_eq!(r.coords, expected);
        }
    }
    let l = PBWMonomial::from_word(Sector::NeveuSchwarz, &[Mode::l(-1)]).unwrap();
    assert_eq!(verma.act(Mode::l(1), &l).unwrap().coords, vec![int(2) * &h]);
    let g = PBWMonomial::from_word(Sector::NeveuSchwarz, &[Mode::g_twice(-1)]).unwrap();
    assert_eq!(verma.act(Mode::g_twice(1), &g).unwrap().coords, vec![int(2) * &h]);
    let top = verma.basis().level(HalfInt::int(2))[0].clone();
    let r = verma.act(Mode::l(-1), &top).unwrap();
    assert!(r.truncated && r.coords.is_empty());
}

#[test]
fn small_gram_examples() {
    let (c, h) = (rat(7, 10), rat(2, 5));
    let g = gram_matrix(&spec(Sector::NeveuSchwarz, c.clone(), h.clone(), 1), HalfInt::HALF).unwrap();
    assert_eq!(g, svirlab::Matrix::from_rows(vec![vec![int(2) * &h]]));
    let g = gram_matrix(&spec(Sector::Ramond, c.clone(), h.clone(), 0), HalfInt::ZERO).unwrap();
    assert_eq!(g, svirlab::Matrix::diagonal(&[int(1), &h - &c / int(24)]));
}

#[test]
fn quotient_examples() {
    let c = rat(7, 10);
    let q = quotient_radical(&spec(Sector::Ramond, c.clone(), &c / int(24), 0)).unwrap();
    assert_eq!(q[0].dim, 1);
    let q = quotient_radical(&spec(Sector::Ramond, c.clone(), &c / int(24) + int(1), 0)).unwrap();
    assert_eq!(q[0].dim, 2);
    let q = quotient_radical(&spec(Sector::NeveuSchwarz, c, int(0), 2)).unwrap();
    assert_eq!((q[1].dim, q[2].dim), (0, 0));
}

#[test]
fn discrete_series() {
    assert_eq!(discrete_series_central_charge(3), Some(rat(7, 10)));
    assert_eq!(discrete_series_central_charge(4), Some(int(1)));
}
