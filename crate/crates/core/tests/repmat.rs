use num_traits::Zero;
use svirlab::linalg::hermitian_eigenvalues;
use svirlab::repmat::{
    check_supercharge, energy_bound_report, graded_index, heat_trace, relation_residual, supercharge, GradedSum,
    GradingOperator, IrreducibleModule, RepError, SafeWindow, TruncatedOperator, UnitarityPolicy, WindowResidual,
};
use svirlab::scalar::{int, rat};
use svirlab::verma::{quotient_radical, ModuleSpec};
use svirlab::{HalfInt, Mode, Parity, Rational, Sector};

fn module(sector: Sector, c: Rational, h: Rational, cutoff: i64, policy: UnitarityPolicy) -> IrreducibleModule {
    let spec = ModuleSpec::new(sector, c, h, HalfInt::int(cutoff)).unwrap();
    IrreducibleModule::build(&spec, policy).unwrap()
}

fn ramond_ground(cutoff: i64) -> IrreducibleModule {
    module(Sector::Ramond, int(1), rat(1, 24), cutoff, UnitarityPolicy::RequireUnitary)
}

fn modes(sector: Sector, max_twice: i64) -> Vec<Mode> {
    let mut out = Vec::new();
    for t in -max_twice..=max_twice {
        if t % 2 == 0 {
            out.push(Mode::l(t / 2));
        }
        if sector.admits_g_index(HalfInt::from_twice(t)) {
            out.push(Mode::g_twice(t));
        }
    }
    out
}

fn negated(m: Mode) -> Mode {
    Mode { kind: m.kind, index: HalfInt::from_twice(-m.index.twice()) }
}

#[test]
fn dims_match_quotient_and_operators_are_graded() {
    let cases = [
        module(Sector::NeveuSchwarz, int(1), int(0), 4, UnitarityPolicy::RequireUnitary),
        module(Sector::NeveuSchwarz, rat(7, 10), rat(1, 10), 3, UnitarityPolicy::RequireUnitary),
        ramond_ground(4),
        module(Sector::Ramond, rat(7, 10), rat(7, 240), 4, UnitarityPolicy::AllowIndefinite),
    ];
    for m in &cases {
        let ranks: Vec<usize> = quotient_radical(m.spec()).map(|q| q.iter().map(|l| l.dim).collect()).unwrap_or_default();
        if m.layout().is_unitary() {
            assert_eq!(ranks, m.layout().dims());
        }
        let gamma = GradingOperator::new(m.layout().clone());
        assert!(gamma.signs().iter().all(|s| s.abs() == 1));
        let g2 = gamma.operator::<Rational>().compose(&gamma.operator());
        let full = SafeWindow::full(m.spec().cutoff);
        assert!(g2.residual_on(&TruncatedOperator::identity(m.layout().clone()), full).is_zero());
        for mode in modes(m.spec().sector, 6) {
            let op = m.mode_operator(mode).unwrap();
            assert!(gamma.check(&op), "{mode}");
            assert!(op.respects_depth(), "{mode}");
            assert_eq!(op.parity(), Some(mode.parity()));
        }
    }
}

#[test]
fn modes_are_adjoint_to_their_negatives() {
    for m in [module(Sector::NeveuSchwarz, int(1), int(0), 4, UnitarityPolicy::RequireUnitary), ramond_ground(4)] {
        for mode in modes(m.spec().sector, 6) {
            let window = SafeWindow::for_depth(m.spec().cutoff, mode.raising_depth() + negated(mode).raising_depth());
            let a = m.mode_operator(mode).unwrap().adjoint();
            let b = m.mode_operator(negated(mode)).unwrap();
            let res = a.residual_on(&b, window);
            assert!(res.is_zero() || res == WindowResidual::WindowEmpty, "{mode}: {res:?}");
            let fa = m.mode_operator(mode).unwrap().to_float().unwrap().adjoint().to_dense();
            let fb = m.mode_operator(negated(mode)).unwrap().to_float().unwrap().to_dense();
            let layout = m.layout();
            let cols: Vec<usize> = (0..layout.level_count())
                .filter(|&i| window.contains(layout.level(i)))
                .flat_map(|i| layout.offset(i)..layout.offset(i) + layout.dim(i))
                .collect();
            let rows: Vec<usize> = (0..layout.total_dim()).collect();
            let diff = &fa.submatrix(&rows, &cols) - &fb.submatrix(&rows, &cols);
            assert!(diff.max_abs() < 1e-12, "{mode}");
        }
    }
}

#[test]
fn relations_hold_at_cutoff_four() {
    for m in [
        module(Sector::NeveuSchwarz, int(1), int(0), 4, UnitarityPolicy::RequireUnitary),
        module(Sector::Ramond, rat(7, 10), rat(7, 240), 4, UnitarityPolicy::AllowIndefinite),
    ] {
        let ms = modes(m.spec().sector, 4);
        for &a in &ms {
            for &b in &ms {
                let r = relation_residual(a, b, &m).unwrap();
                assert!(r.residual.is_zero() || r.window.is_empty(), "[{a}, {b}] {:?}", r.residual);
            }
        }
    }
}

#[test]
fn empty_window_is_reported() {
    let m = module(Sector::NeveuSchwarz, int(1), int(0), 2, UnitarityPolicy::RequireUnitary);
    let r = relation_residual(Mode::l(-3), Mode::l(-2), &m).unwrap();
    assert_eq!(r.residual, WindowResidual::WindowEmpty);
    assert!(!r.residual.is_zero());
    let r = relation_residual(Mode::l(3), Mode::l(-1), &m).unwrap();
    assert!(r.residual.is_zero());
}

#[test]
fn virasoro_composite_on_the_window() {
    let m = module(Sector::NeveuSchwarz, int(1), rat(1, 10), 4, UnitarityPolicy::AllowIndefinite);
    let l1 = m.mode_operator(Mode::l(1)).unwrap();
    let lm1 = m.mode_operator(Mode::l(-1)).unwrap();
    let l0 = m.mode_operator(Mode::l(0)).unwrap();
    let window = SafeWindow::for_depth(HalfInt::int(4), HalfInt::ONE);
    let lhs = l1.compose(&lm1);
    let rhs = lm1.compose(&l1).add(&l0.scale(&int(2)));
    assert!(lhs.residual_on(&rhs, window).is_zero());
    let layout = m.layout();
    for idx in 0..layout.level_count() {
        let block = l0.block(idx, idx);
        let expected = &layout.h + layout.level(idx).to_rational();
        if let Some(b) = block {
            assert!((0..b.rows()).all(|i| b[(i, i)] == expected));
        }
    }
}

#[test]
fn supercharge_squares_to_the_hamiltonian() {
    for m in [ramond_ground(6), module(Sector::Ramond, rat(7, 10), rat(7, 240), 6, UnitarityPolicy::AllowIndefinite)] {
        let check = check_supercharge(&m).unwrap();
        assert!(check.passed(), "{check:?}");
    }
    let ns = module(Sector::NeveuSchwarz, int(1), int(0), 2, UnitarityPolicy::RequireUnitary);
    assert_eq!(supercharge(&ns).unwrap_err(), RepError::NoGlobalSupercharge);
}

#[test]
fn supercharge_on_the_ground_level() {
    let m = module(Sector::Ramond, rat(7, 10), rat(7, 240), 0, UnitarityPolicy::RequireUnitary);
    assert_eq!(m.layout().dims(), vec![1]);
    let q = supercharge(&m).unwrap().to_dense();
    assert!(q.is_zero());
    let m = module(Sector::Ramond, rat(7, 10), rat(7, 240) + int(1), 0, UnitarityPolicy::RequireUnitary);
    let q = supercharge(&m).unwrap().to_float().unwrap().to_dense();
    let ev = hermitian_eigenvalues(&q);
    assert_eq!(ev.len(), 2);
    assert!((ev[0] + 1.0).abs() < 1e-12 && (ev[1] - 1.0).abs() < 1e-12, "{ev:?}");
}

#[test]
fn heat_trace_multiplicities_and_monotonicity() {
    let m = module(Sector::NeveuSchwarz, rat(7, 10), int(0), 2, UnitarityPolicy::RequireUnitary);
    let ht = heat_trace(m.layout(), 1.0).unwrap();
    let expected: Vec<(HalfInt, usize)> =
        [(0, 1), (1, 0), (2, 0), (3, 1), (4, 1)].iter().map(|&(t, d)| (HalfInt::from_twice(t), d)).collect();
    assert_eq!(ht.multiplicities, expected);
    let m = module(Sector::Ramond, rat(7, 10), rat(7, 240), 0, UnitarityPolicy::RequireUnitary);
    assert_eq!(heat_trace(m.layout(), 1.0).unwrap().partial_sum(), 1.0);
    for beta in [0.5, 1.0, 2.0] {
        let small = heat_trace(ramond_ground(4).layout(), beta).unwrap().partial_sum();
        let large = heat_trace(ramond_ground(6).layout(), beta).unwrap().partial_sum();
        assert!(small <= large);
    }
    assert_eq!(heat_trace(m.layout(), 0.0).unwrap_err(), RepError::NonPositiveBeta(0.0));
}

#[test]
fn graded_index_is_one() {
    for cutoff in [4, 6] {
        for (c, h, policy) in [
            (int(1), rat(1, 24), UnitarityPolicy::RequireUnitary),
            (rat(7, 10), rat(7, 240), UnitarityPolicy::AllowIndefinite),
        ] {
            let m = module(Sector::Ramond, c, h, cutoff, policy);
            for beta in [0.5, 1.0, 2.0] {
                let idx = graded_index(&m, beta).unwrap();
                assert_eq!(idx.exact, Some(1));
                assert!((idx.value - 1.0).abs() < 1e-12);
                assert!(idx.per_level.iter().skip(1).all(|(_, e, o)| e == o));
            }
        }
    }
    let m = module(Sector::Ramond, int(1), rat(1, 16), 2, UnitarityPolicy::RequireUnitary);
    assert_eq!(graded_index(&m, 1.0).unwrap_err(), RepError::NotGraded);
}

#[test]
fn graded_sums_add_and_offsets_flip() {
    let a = ramond_ground(4);
    let mut sum = GradedSum::default();
    sum.push(&a, Parity::Even);
    sum.push(&a, Parity::Even);
    assert_eq!(sum.graded_index(1.0).unwrap().exact, Some(2));
    sum.push(&a, Parity::Odd);
    assert_eq!(sum.graded_index(1.0).unwrap().exact, Some(1));
    let single = heat_trace(a.layout(), 1.0).unwrap().partial_sum();
    assert!((sum.heat_trace(1.0).unwrap() - 3.0 * single).abs() < 1e-12);
}

#[test]
fn energy_bounds() {
    let m = ramond_ground(6);
    let r = &energy_bound_report(&m, &[Mode::g_twice(0)]).unwrap()[0];
    let closed: f64 = (1..=6).map(|l| l as f64 / (1.0 + 1.0 / 24.0 + l as f64)).fold(0.0, f64::max);
    assert!((r.norm.value.powi(2) - closed).abs() < 1e-8, "{} vs {closed}", r.norm.value.powi(2));
    assert!(r.pass && closed < 1.0);

    let m = module(Sector::NeveuSchwarz, int(1), int(0), 6, UnitarityPolicy::RequireUnitary);
    let report = energy_bound_report(&m, &[Mode::g_twice(1), Mode::l(1), Mode::l(-2)]).unwrap();
    let g = &report[0];
    assert!(g.pass);
    assert!(g.norm.value <= (2.0f64 + 1.0 / 12.0).sqrt());
    assert!((g.norm.value - 1.2535663403133517).abs() < 1e-8, "{}", g.norm.value);
    for l in &report[1..] {
        let mm = l.minimal_m.unwrap();
        assert!(mm.is_finite() && mm > 0.0);
    }
}

#[test]
fn non_unitary_points_are_rejected_by_default() {
    let spec = ModuleSpec::new(Sector::Ramond, rat(7, 10), rat(7, 240), HalfInt::int(3)).unwrap();
    match IrreducibleModule::build(&spec, UnitarityPolicy::RequireUnitary) {
        Err(RepError::NotUnitary { level, .. }) => assert_eq!(level, HalfInt::int(3)),
        other => panic!("{other:?}"),
    }
    let m = IrreducibleModule::build(&spec, UnitarityPolicy::AllowIndefinite).unwrap();
    assert_eq!(m.layout().first_negative_level(), Some(HalfInt::int(3)));
    assert!(m.mode_operator(Mode::l(-1)).unwrap().to_float().is_err());
    assert!(!m.layout().norms(0).iter().any(|n| n.is_zero()));
}
