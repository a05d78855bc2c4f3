use num_complex::Complex64;
use serde_json::{json, Value};
use svirlab::linalg::determinant;
use svirlab::repmat::{
    bracket_operator, energy_bound_report, graded_index, heat_trace, relation_residual, supercharge, IrreducibleModule,
    SafeWindow, UnitarityPolicy, WindowResidual,
};
use svirlab::scalar::format_complex_rational;
use svirlab::smeared::{
    check_admissible, lhospital_constant, raised_cosine, local_supercharge_check, resolvent_bound_experiment, scaled_cos,
    scaled_sin, smeared_cr_residual, CrPair, FieldKind, TestFunction, TrigPoly,
};
use svirlab::superderiv::{
    basic_checks, energies, identity_suite, quantum_algebra_report, smoothing_suite, submultiplicativity,
    FloatSampler, IdentityCheck, RationalSampler, SmoothingKernel, SuperContext,
};
use svirlab::verma::{enumerate_basis, gram_matrix, unitarity_scan, ModuleSpec};
use svirlab::{ComplexRational, HalfInt, Mode, Sector};

use crate::config::{Command, RunConfig};
use crate::functions::FunctionSpec;
use crate::report::{csv, q, rational_matrix, residual, Backend, Check, Report};
use crate::{CommandError, UsageError};

/// Relative tolerance of float identity checks.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

pub struct Output {
    pub report: Report,
    pub csv: Option<String>,
}

pub fn run(cfg: &RunConfig) -> Result<Output, CommandError> {
    let (results, checks, csv) = match cfg.command {
        Command::Basis => basis(cfg)?,
        Command::Gram => gram(cfg)?,
        Command::UnitaryScan => unitary_scan(cfg)?,
        Command::Relations => relations(cfg)?,
        Command::Index => index(cfg)?,
        Command::HeatTrace => heat(cfg)?,
        Command::SmearedCheck => smeared_check(cfg)?,
        Command::Bounds => bounds(cfg)?,
        Command::SuperderivReport => superderiv_report(cfg)?,
    };
    Ok(Output { report: Report::new(cfg.command.name(), cfg.echo(), results, checks), csv })
}

/// The report of a run stopped by a mathematical obstruction.
pub fn failure_report(cfg: &RunConfig, message: &str) -> Report {
    let check = Check::new("run", Backend::Exact, json!(message), Value::Null, false);
    Report::new(cfg.command.name(), cfg.echo(), json!({ "error": message }), vec![check])
}

type Parts = (Value, Vec<Check>, Option<String>);

fn spec(cfg: &RunConfig, cutoff: HalfInt) -> Result<ModuleSpec, CommandError> {
    Ok(ModuleSpec::new(cfg.sector, cfg.central_charge(), cfg.weight(), cutoff)?)
}

fn module(cfg: &RunConfig, policy: UnitarityPolicy) -> Result<IrreducibleModule, CommandError> {
    Ok(IrreducibleModule::build(&spec(cfg, cfg.cutoff)?, policy)?)
}

/// Unitarity of the truncation, reported alongside algebraic results that
/// do not need a Hilbert space.
fn unitarity_info(m: &IrreducibleModule) -> Value {
    json!({
        "unitaryToCutoff": m.layout().is_unitary(),
        "firstNegativeLevel": m.layout().first_negative_level().map(|l| l.to_string()),
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(a), Value::Object(b)) = (&mut base, extra) {
        a.extend(b);
    }
    base
}

fn basis(cfg: &RunConfig) -> Result<Parts, CommandError> {
    let b = enumerate_basis(&spec(cfg, cfg.cutoff)?);
    let dims = b.dims();
    let rows: Vec<Vec<String>> = dims.iter().map(|(l, d)| vec![l.to_string(), d.to_string()]).collect();
    let levels: Vec<Value> = dims.iter().map(|(l, d)| json!({ "level": l.to_string(), "dim": d })).collect();
    let results = json!({ "levels": levels, "total": dims.values().sum::<usize>() });
    Ok((results, Vec::new(), Some(csv(&["level", "dim"], &rows))))
}

fn gram(cfg: &RunConfig) -> Result<Parts, CommandError> {
    let level = cfg.level.expect("validated");
    let s = spec(cfg, level)?;
    let g = gram_matrix(&s, level)?;
    let labels: Vec<String> = enumerate_basis(&s).level(level).iter().map(|m| m.to_string()).collect();
    let verdict = svirlab::linalg::psd_verdict(&g);
    let results = json!({
        "level": level.to_string(),
        "basis": labels,
        "matrix": rational_matrix(&g),
        "determinant": q(&determinant(&g)),
        "rank": verdict.rank,
        "psd": verdict.psd,
    });
    let checks = vec![Check::new("symmetric", Backend::Exact, Value::Null, Value::Null, g.is_symmetric())];
    let rows: Vec<Vec<String>> =
        g.to_rows().iter().map(|r| r.iter().map(svirlab::scalar::format_rational).collect()).collect();
    Ok((results, checks, Some(csv(&[], &rows))))
}

fn unitary_scan(cfg: &RunConfig) -> Result<Parts, CommandError> {
    let scan = unitarity_scan(cfg.sector, &cfg.central_charge(), &cfg.weight(), cfg.cutoff)?;
    let mut levels = Vec::new();
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    for v in &scan {
        let witness = v.witness.as_ref().map(|w| {
            let vector: Vec<Value> =
                w.vector.iter().map(|(m, x)| json!({ "monomial": m.to_string(), "coefficient": q(x) })).collect();
            json!({ "vector": vector, "norm": q(&w.norm) })
        });
        levels.push(json!({
            "level": v.level.to_string(),
            "dim": v.dim,
            "rank": v.rank,
            "psd": v.psd,
            "witness": witness,
        }));
        let norm = v.witness.as_ref().map(|w| q(&w.norm)).unwrap_or(Value::Null);
        checks.push(Check::new(format!("psd-level-{}", v.level), Backend::Exact, json!(v.rank), norm, v.psd));
        rows.push(vec![v.level.to_string(), v.dim.to_string(), v.rank.to_string(), v.psd.to_string()]);
    }
    Ok((json!({ "levels": levels }), checks, Some(csv(&["level", "dim", "rank", "psd"], &rows))))
}

/// `L_m` with `|m| ≤ 3` and `G_r` with `|r| ≤ 5/2` (NS) or `2` (Ramond).
pub fn relation_modes(sector: Sector) -> Vec<Mode> {
    let max_g = match sector {
        Sector::NeveuSchwarz => 5,
        Sector::Ramond => 4,
    };
    let mut out: Vec<Mode> = (-3..=3).map(Mode::l).collect();
    out.extend((-max_g..=max_g).filter(|t| sector.admits_g_index(HalfInt::from_twice(*t))).map(Mode::g_twice));
    out
}

fn float_relation(a: Mode, b: Mode, m: &IrreducibleModule) -> Result<(SafeWindow, WindowResidual), CommandError> {
    let window = SafeWindow::for_depth(m.spec().cutoff, a.raising_depth() + b.raising_depth());
    if window.is_empty() {
        return Ok((window, WindowResidual::WindowEmpty));
    }
    let x = m.mode_operator(a)?.to_float()?;
    let y = m.mode_operator(b)?.to_float()?;
    let rhs = bracket_operator(a, b, m)?.to_float()?;
    Ok((window, x.graded_bracket_on(&y, window).residual_on(&rhs, window)))
}

fn relations(cfg: &RunConfig) -> Result<Parts, CommandError> {
    let policy = if cfg.float_backend { UnitarityPolicy::RequireUnitary } else { UnitarityPolicy::AllowIndefinite };
    let m = module(cfg, policy)?;
    let modes = relation_modes(cfg.sector);
    let backend = if cfg.float_backend { Backend::Float } else { Backend::Exact };
    let mut pairs = Vec::new();
    let mut checks = Vec::new();
    let mut empty = 0;
    for &a in &modes {
        for &b in &modes {
            let (window, res) = if cfg.float_backend {
                float_relation(a, b, &m)?
            } else {
                let r = relation_residual(a, b, &m)?;
                (r.window, r.residual)
            };
            let name = format!("[{a}, {b}]");
            pairs.push(json!({
                "a": a.to_string(),
                "b": b.to_string(),
                "maxInputLevel": window.max_input_level.map(|l| l.to_string()),
                "residual": residual(&res),
            }));
            if res == WindowResidual::WindowEmpty {
                empty += 1;
                continue;
            }
            let ok = if cfg.float_backend { res.within(FLOAT_TOLERANCE) } else { res.is_zero() };
            checks.push(Check::new(name, backend, Value::Null, residual(&res), ok));
        }
    }
    let results = merge(json!({ "pairs": pairs, "checked": checks.len(), "emptyWindows": empty }), unitarity_info(&m));
    Ok((results, checks, None))
}

fn index(cfg: &RunConfig) -> Result<Parts, CommandError> {
    if cfg.sector != Sector::Ramond {
        return Err(UsageError::new("sector", "the graded index is defined for the Ramond sector only".into()).into());
    }
    let m = module(cfg, UnitarityPolicy::AllowIndefinite)?;
    let mut per_beta = Vec::new();
    let mut exact_values = Vec::new();
    let mut per_level = Vec::new();
    for &beta in &cfg.betas {
        let idx = graded_index(&m, beta)?;
        per_beta.push(json!({
            "beta": beta,
            "value": idx.value,
            "exact": idx.exact.map(|e| e.to_string()),
        }));
        exact_values.push(idx.exact);
        per_level = idx.per_level.iter().map(|(l, e, o)| json!({ "level": l.to_string(), "even": e, "odd": o })).collect();
    }
    let first = exact_values[0];
    let independent = exact_values.iter().all(|e| e.is_some() && *e == first);
    let graded = match (independent, first) {
        (true, Some(v)) => json!(v.to_string()),
        _ => Value::Null,
    };
    let results = merge(json!({ "gradedIndex": graded, "perBeta": per_beta, "perLevel": per_level }), unitarity_info(&m));
    let checks = vec![
        Check::new("index-is-exact", Backend::Exact, graded.clone(), Value::Null, exact_values.iter().all(Option::is_some)),
        Check::new("beta-independent", Backend::Exact, graded, Value::Null, independent),
    ];
    Ok((results, checks, None))
}

fn heat(cfg: &RunConfig) -> Result<Parts, CommandError> {
    let m = module(cfg, UnitarityPolicy::AllowIndefinite)?;
    let layout = m.layout();
    let mut entries = Vec::new();
    let mut checks = Vec::new();
    let mut mult = Vec::new();
    for &beta in &cfg.betas {
        let ht = heat_trace(layout, beta)?;
        let prefix: Vec<f64> = (0..layout.level_count())
            .scan(0.0, |acc, idx| {
                let shift = if cfg.sector == Sector::Ramond { svirlab::RealScalar::to_f64(&layout.c) / 24.0 } else { 0.0 };
                let e = svirlab::RealScalar::to_f64(&layout.energy(idx)) - shift;
                *acc += layout.dim(idx) as f64 * (-beta * e).exp();
                Some(*acc)
            })
            .collect();
        let monotone = prefix.windows(2).all(|w| w[1] >= w[0]);
        checks.push(Check::new(format!("monotone-in-cutoff-beta-{beta}"), Backend::Float, json!(ht.partial_sum()), Value::Null, monotone));
        entries.push(json!({
            "beta": beta,
            "partialSum": ht.partial_sum(),
            "shifted": ht.shifted,
            "unshifted": ht.unshifted,
            "tailEstimate": ht.tail_estimate,
            "upperEstimate": ht.partial_sum() + ht.tail_estimate,
        }));
        mult = ht.multiplicities.clone();
    }
    let rows: Vec<Vec<String>> = mult.iter().map(|(l, d)| vec![l.to_string(), d.to_string()]).collect();
    let multiplicities: Vec<Value> = mult.iter().map(|(l, d)| json!({ "level": l.to_string(), "dim": d })).collect();
    let hamiltonian = match cfg.sector {
        Sector::Ramond => "L_0 - c/24",
        Sector::NeveuSchwarz => "L_0",
    };
    let results = merge(
        json!({ "hamiltonian": hamiltonian, "traces": entries, "multiplicities": multiplicities }),
        unitarity_info(&m),
    );
    Ok((results, checks, Some(csv(&["level", "dim"], &rows))))
}

/// Default sweep: `{1, 2cos θ, 2sin θ, cos 2θ}`, plus `2cos(θ/2)`, `2sin(θ/2)`
/// and `cos(3θ/2)` for Neveu-Schwarz `G`-smearing.
fn default_functions(sector: Sector) -> Vec<TrigPoly> {
    let two = ComplexRational::new(svirlab::scalar::int(2), svirlab::scalar::int(0));
    let mut out = vec![TrigPoly::one(), scaled_cos(2, 1), scaled_sin(2, 1), scaled_cos(1, 2)];
    if sector == Sector::NeveuSchwarz {
        out.push(TrigPoly::cos(HalfInt::HALF).scale(&two));
        out.push(TrigPoly::sin(HalfInt::HALF).scale(&two));
        out.push(TrigPoly::cos(HalfInt::from_twice(3)));
    }
    out
}

fn label(f: &TrigPoly) -> String {
    FunctionSpec::Trig(f.clone()).to_string()
}

fn smeared_check(cfg: &RunConfig) -> Result<Parts, CommandError> {
    let m = module(cfg, UnitarityPolicy::AllowIndefinite)?;
    let functions: Vec<TrigPoly> = if cfg.functions.is_empty() {
        default_functions(cfg.sector)
    } else {
        cfg.functions
            .iter()
            .map(|f| {
                f.trig().cloned().ok_or_else(|| {
                    UsageError::new("functions", "the commutation relations are checked on trigonometric polynomials".into())
                })
            })
            .collect::<Result<_, _>>()?
    };
    let admissible = |kind: FieldKind| -> Vec<&TrigPoly> {
        functions.iter().filter(|f| check_admissible(kind, cfg.sector, f).is_ok()).collect()
    };
    let (ls, gs) = (admissible(FieldKind::L), admissible(FieldKind::G));
    let mut checks = Vec::new();
    let mut records = Vec::new();
    let mut empty = 0;
    for (pair, left, right) in [(CrPair::LL, &ls, &ls), (CrPair::LG, &ls, &gs), (CrPair::GG, &gs, &gs)] {
        for f in left.iter() {
            for g in right.iter() {
                let r = smeared_cr_residual(pair, f, g, &m)?;
                let (fs, gs) = (label(f), label(g));
                records.push(json!({
                    "pair": format!("{pair:?}"),
                    "f": fs,
                    "g": gs,
                    "central": format_complex_rational(&r.central),
                    "residual": residual(&r.residual),
                }));
                if r.window.is_empty() {
                    empty += 1;
                    continue;
                }
                let name = format!("{pair:?}({fs}, {gs})");
                checks.push(Check::new(name, Backend::Exact, json!(format_complex_rational(&r.central)), residual(&r.residual), r.residual.is_zero()));
            }
        }
    }
    let phi = match (&cfg.phi, cfg.sector) {
        (Some(p), _) => Some(p.clone()),
        (None, Sector::Ramond) => Some(FunctionSpec::Trig(TrigPoly::one())),
        (None, Sector::NeveuSchwarz) => None,
    };
    let mut local = Value::Null;
    if let Some(phi) = phi {
        let policy = if phi.trig().is_some() { UnitarityPolicy::AllowIndefinite } else { UnitarityPolicy::RequireUnitary };
        let m = module(cfg, policy)?;
        let r = local_supercharge_check(&phi.to_test_function(), &m, None)?;
        let ok = if r.exact { r.residual.is_zero() } else { r.residual.within(1e-8) };
        let backend = if r.exact { Backend::Exact } else { Backend::Float };
        checks.push(Check::new("local-supercharge", backend, json!(r.constant), residual(&r.residual), ok && !r.window.is_empty()));
        local = json!({
            "phi": phi.to_string(),
            "modeCutoff": r.mode_cutoff.to_string(),
            "maxInputLevel": r.window.max_input_level.map(|l| l.to_string()),
            "constant": r.constant,
            "bandLimitError": r.band_limit_error,
            "residual": residual(&r.residual),
        });
    }
    let results = merge(
        json!({ "relations": records, "emptyWindows": empty, "localSupercharge": local }),
        unitarity_info(&m),
    );
    Ok((results, checks, None))
}

fn bounds(cfg: &RunConfig) -> Result<Parts, CommandError> {
    let m = module(cfg, UnitarityPolicy::RequireUnitary)?;
    let mut modes: Vec<Mode> = relation_modes(cfg.sector)
        .into_iter()
        .filter(|x| x.kind == svirlab::ModeKind::G && x.index.abs() <= HalfInt::int(2))
        .collect();
    modes.extend([Mode::l(-2), Mode::l(-1), Mode::l(1), Mode::l(2)]);
    let mut checks = Vec::new();
    let mut energy = Vec::new();
    for b in energy_bound_report(&m, &modes)? {
        energy.push(json!({
            "mode": b.mode.to_string(),
            "maxInputLevel": b.window.max_input_level.map(|l| l.to_string()),
            "norm": b.norm.value,
            "converged": b.norm.converged,
            "bound": b.bound,
            "minimalM": b.minimal_m,
        }));
        if b.window.is_empty() {
            continue;
        }
        let name = match b.bound {
            Some(_) => format!("energy-bound-{}", b.mode),
            None => format!("finite-M-{}", b.mode),
        };
        checks.push(Check::new(name, Backend::Float, json!(b.norm.value), json!(b.bound), b.pass));
    }
    let (f1, f2) = (cfg.f1.to_test_function(), cfg.f2.to_test_function());
    // the default f1 is periodic, so the NS sector skips it rather than failing
    let skip = match cfg.f1.trig() {
        Some(p) if cfg.f1 == FunctionSpec::Trig(raised_cosine()) => check_admissible(FieldKind::G, cfg.sector, p).err(),
        _ => None,
    };
    let mut resolvent = Vec::new();
    if let Some(e) = &skip {
        resolvent.push(json!({ "skipped": e.to_string() }));
    }
    for &alpha in cfg.alphas.iter().filter(|_| skip.is_none()) {
        let r = resolvent_bound_experiment(&f1, &f2, alpha, cfg.c_dom, &m)?;
        resolvent.push(json!({
            "alpha": alpha,
            "maxInputLevel": r.window.max_input_level.map(|l| l.to_string()),
            "normSquared": r.norm_sq,
            "cTilde": r.c_tilde,
            "cTildeSplit": r.c_tilde_split,
            "bound": r.bound,
        }));
        checks.push(Check::new(format!("resolvent-alpha-{alpha}"), Backend::Float, json!(r.norm_sq), json!(r.bound), r.holds));
    }
    let mut lhospital = Vec::new();
    let mut candidates = vec![("f2".to_string(), f2.clone())];
    if let Some(p) = cfg.f1.trig() {
        candidates.push(("f1^2".to_string(), TestFunction::TrigPoly(p.mul(p))));
    }
    for (label, f) in candidates {
        let c = lhospital_constant(&f)?;
        lhospital.push(json!({ "function": label, "value": c.value, "argmax": c.argmax, "gridPoints": c.grid_points }));
        checks.push(Check::new(format!("lhospital-{label}"), Backend::Float, json!(c.value), Value::Null, c.value.is_some()));
    }
    let results = json!({ "energyBounds": energy, "resolvent": resolvent, "lhospital": lhospital });
    Ok((results, checks, None))
}

fn identity_checks(list: Vec<IdentityCheck>, backend: Backend) -> Vec<Check> {
    list.into_iter()
        .map(|c| {
            let res = if c.exact { json!("0") } else { json!(c.max_residual) };
            Check::new(c.name, backend, json!(c.samples), res, c.pass)
        })
        .collect()
}

fn superderiv_report(cfg: &RunConfig) -> Result<Parts, CommandError> {
    let mut checks = Vec::new();
    let mut results = json!({});
    if cfg.sector == Sector::Ramond {
        let exact_module = module(cfg, UnitarityPolicy::AllowIndefinite)?;
        let q = supercharge(&exact_module)?;
        if cfg.float_backend {
            let ctx = SuperContext::<Complex64>::from_operator(&q.to_float()?)?;
            checks.extend(identity_checks(identity_suite(&ctx, cfg.samples, cfg.seed, &mut FloatSampler), Backend::Float));
        } else {
            let ctx = SuperContext::from_operator(&q)?;
            checks.extend(identity_checks(basic_checks(&ctx), Backend::Exact));
            checks.extend(identity_checks(identity_suite(&ctx, cfg.samples, cfg.seed, &mut RationalSampler), Backend::Exact));
        }
        match q.to_float() {
            Ok(fq) => {
                let ctx = SuperContext::<Complex64>::from_operator(&fq)?;
                let sub = submultiplicativity(&ctx, 50, cfg.seed)?;
                checks.push(Check::new("submultiplicativity", Backend::Float, json!(sub.worst_ratio), json!(sub.worst_excess), sub.pass));
                let kernel = SmoothingKernel::Gaussian { sigma: cfg.sigma };
                let e = energies(&exact_module);
                checks.extend(identity_checks(smoothing_suite(&ctx, &e, &kernel, 20, cfg.seed), Backend::Float));
            }
            Err(e) => checks.push(Check::new("float-backend", Backend::Float, json!(e.to_string()), Value::Null, false)),
        }
        results = merge(results, unitarity_info(&exact_module));
    }
    let m = module(cfg, UnitarityPolicy::AllowIndefinite)?;
    let phi = match &cfg.phi {
        Some(p) => Some(
            p.trig()
                .cloned()
                .ok_or_else(|| UsageError::new("phi", "the local supercharge report needs a trigonometric φ".into()))?,
        ),
        None => None,
    };
    let report = quantum_algebra_report(&m, &cfg.betas, phi.as_ref(), None, cfg.samples.min(20), cfg.seed)?;
    let heat: Vec<Value> = report
        .heat
        .iter()
        .map(|h| json!({ "beta": h.beta, "partialSum": h.partial_sum, "tailEstimate": h.tail_estimate, "upperEstimate": h.upper_estimate }))
        .collect();
    let local = report.local.as_ref().map(|l| {
        json!({
            "phi": l.phi,
            "maxInputLevel": l.window.max_input_level.map(|l| l.to_string()),
            "constant": l.constant,
            "droppedTerm": l.dropped_term,
            "phiDependence": l.phi_dependence,
        })
    });
    let qa: Vec<Check> = identity_checks(report.checks, Backend::Exact)
        .into_iter()
        .map(|mut c| {
            c.name = format!("quantum-algebra/{}", c.name);
            c
        })
        .collect();
    checks.extend(qa);
    results = merge(results, json!({ "heat": heat, "local": local }));
    Ok((results, checks, None))
}
