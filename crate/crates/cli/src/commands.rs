//! One function per command, each turning validated parameters into a report.

use cantor_core::af_embedding::{
    embed_iota, gm_include_to, gm_level_sizes, gm_v, gm_w, gm_z, gm_z_pow, permutation_block, reference_w1,
    reference_z1, BlockMatrix, EmbeddingError,
};
use cantor_core::crossed_product::CrossedElement;
use cantor_core::crossed_product::{
    equicontinuity_sup_check, hswz_commutator_decay, hswz_spectrum, hswz_summability, HSWZTriple,
};
use cantor_core::dynamics::{
    digits_to_path, odometer_as_bratteli, path_to_digits, BratteliDiagram, CantorDynamics, Direction, Extreme,
    OdometerSpec,
};
use cantor_core::fredholm::{
    even_bp_pairing, even_bp_pairing_of, even_commutator, geometric_bound, integer_value, odd_commutator,
    odd_rank_bound, odd_trace_formula, routes_agree, summability_report, synthesize_index, unbounded_lift_check,
    verify_synthesis, ChoicePair, ComponentTable, DiracExponent, FredholmError, OddInput, RouteRegistry, WeightedDirac,
};
use cantor_core::k_theory::{
    k0_equal, k0_telescope, odometer_k0_class, DimensionGroupElement, K0Equality, DEFAULT_K0_SLACK,
};
use cantor_core::linalg::{exact_rank, schatten_norm};
use cantor_core::symbolic::{metric, Alphabet, IndicatorCombination, Language, Point, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::config::{DynamicsSystem, Growth, JobConfig, K0System, Params, Settings, Space, TraceKind};
use crate::report::{format_float, Cell, Report, Table};

#[derive(Debug, Error)]
pub enum ExecError {
    #[error(transparent)]
    Fredholm(#[from] FredholmError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    KTheory(#[from] cantor_core::k_theory::KTheoryError),
    #[error(transparent)]
    Dynamics(#[from] cantor_core::dynamics::DynamicsError),
    #[error("{0}")]
    Other(String),
}

impl ExecError {
    /// Short machine-readable kind for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            ExecError::Fredholm(_) => "fredholm",
            ExecError::Embedding(_) => "embedding",
            ExecError::KTheory(_) => "k-theory",
            ExecError::Dynamics(_) => "dynamics",
            ExecError::Other(_) => "internal",
        }
    }
}

type Result<T> = std::result::Result<T, ExecError>;

pub fn execute(cfg: &JobConfig) -> Result<Report> {
    let mut r = Report::new(cfg.command.name(), &cfg.hash);
    let s = &cfg.settings;
    r.setting("tolerance", s.tolerance);
    r.setting("unitary_tolerance", s.unitary_tolerance);
    r.setting("seed", s.seed);
    match &cfg.params {
        Params::Space { space, max_level, list_level } => space_cmd(&mut r, space, *max_level, *list_level),
        Params::Dynamics { system, depth, points, steps, samples } => {
            dynamics_cmd(&mut r, s, system, *depth, points, *steps, *samples)?
        }
        Params::K0(system) => k0_cmd(&mut r, system)?,
        Params::GmDemo { level } => gm_demo_cmd(&mut r, s, *level)?,
        Params::PairEven { space, pair, words, level, order } => {
            pair_even_cmd(&mut r, space, pair, words, *level, *order)
        }
        Params::PairOdd { space, spec, powers, window, level, order, weight } => {
            pair_odd_cmd(&mut r, s, space, spec, powers, *window, *level, *order, *weight)?
        }
        Params::Trace { space, kind, orders, level, schatten } => {
            trace_cmd(&mut r, s, space, kind, orders, *level, schatten)?
        }
        Params::Summability { weight, exponent, ps, depth, growth } => {
            summability_cmd(&mut r, *weight, *exponent, ps, *depth, growth)
        }
        Params::Synthesize { space, level, target } => synthesize_cmd(&mut r, space, *level, target)?,
        Params::Crossed { odometer, pair, weight, base_p, qs, depth, bounds, head, decay_word, m_range } => {
            let t = HSWZTriple::new(pair.clone(), *weight, *base_p, odometer.clone())?;
            crossed_cmd(&mut r, &t, qs, *depth, *bounds, *head, decay_word, *m_range)?
        }
    }
    Ok(r)
}

fn space_cmd(r: &mut Report, space: &Space, max_level: usize, list_level: usize) {
    let lang = space.language();
    let a = space.alphabet();
    r.setting("alphabet", (0..a.len()).map(|i| a.symbol(i as _).unwrap_or("?")).collect::<Vec<_>>().join(" "));
    let levels: Vec<Vec<Word>> = (0..=max_level).map(|n| lang.level(n)).collect();
    let mut t = Table::new("levels", &["level", "words", "cumulative"]);
    let mut total = 0usize;
    for (n, ws) in levels.iter().enumerate() {
        total += ws.len();
        t.push(vec![n.into(), ws.len().into(), total.into()]);
    }
    r.table(t);
    let mut t = Table::new("words", &["level", "word", "children"]);
    for (n, ws) in levels.iter().enumerate().take(list_level.min(max_level) + 1) {
        for w in ws {
            let kids: Vec<String> = lang.refine(w).iter().map(|c| a.format_word(c)).collect();
            t.push(vec![n.into(), a.format_word(w).into(), kids.join(" ").into()]);
        }
    }
    r.table(t);
    // each level is partitioned by the refinements of the previous one
    let partition = levels.windows(2).all(|p| {
        let refined: Vec<Word> = p[0].iter().flat_map(|w| lang.refine(w)).collect();
        refined == p[1]
    });
    r.check("refinement-partitions-levels", partition, format!("levels 0..={max_level}"));
}

fn random_point(rng: &mut ChaCha8Rng, spec: &OdometerSpec) -> Point {
    let pre = rng.gen_range(0..6);
    let per = rng.gen_range(1..4);
    loop {
        let digits: Vec<_> = (0..pre).map(|i| rng.gen_range(0..spec.base(i)) as _).collect();
        let period: Vec<_> = (0..per).map(|i| rng.gen_range(0..spec.base(pre + i)) as _).collect();
        if let Ok(p) = Point::new(Word::new(digits), Word::new(period)) {
            if spec.validate_point(&p).is_ok() {
                return p;
            }
        }
    }
}

fn dynamics_cmd(
    r: &mut Report,
    s: &Settings,
    system: &DynamicsSystem,
    depth: usize,
    points: &[Point],
    steps: i64,
    samples: usize,
) -> Result<()> {
    match system {
        DynamicsSystem::Odometer(spec) => {
            let a = spec.alphabet();
            r.setting("system", "odometer");
            r.setting("preperiod", format!("{:?}", spec.preperiod()));
            r.setting("period", format!("{:?}", spec.period()));
            let mut t = Table::new("cylinder-permutation", &["m", "cylinders", "cycles", "single_cycle"]);
            let mut single = true;
            for m in 1..=depth {
                let p = spec.cylinder_permutation(m)?;
                let cycles = p.cycle_lengths();
                single &= p.is_single_cycle();
                let text: Vec<String> = cycles.iter().map(|c| c.to_string()).collect();
                t.push(vec![m.into(), spec.product(m).into(), text.join(" ").into(), p.is_single_cycle().into()]);
            }
            r.table(t);
            r.check("cylinder-permutation-single-cycle", single, format!("m = 1..={depth}"));
            let mut t = Table::new("orbits", &["point", "j", "image"]);
            for p in points {
                for j in [1, steps] {
                    t.push(vec![a.format_point(p).into(), j.into(), a.format_point(&spec.iterate(p, j)?).into()]);
                }
            }
            r.table(t);
            let d = odometer_as_bratteli(spec, depth)?;
            let mut ok = true;
            for path in d.all_paths(depth) {
                let w = path_to_digits(&path);
                let v = path_to_digits(&d.vershik_successor(&path)?);
                ok &= v == spec.add_to_word(&w, 1);
                ok &= digits_to_path(&d, &w)? == path;
            }
            r.check("vershik-intertwining", ok, format!("{} paths of depth {depth}", spec.product(depth)));
            let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
            let mut iso = true;
            for _ in 0..samples {
                let x = random_point(&mut rng, spec);
                let y = random_point(&mut rng, spec);
                let fx = spec.odometer_step(&x, Direction::Forward)?;
                let fy = spec.odometer_step(&y, Direction::Forward)?;
                iso &= metric(&fx, &fy) == metric(&x, &y);
            }
            r.check("isometry", iso, format!("{samples} sampled pairs"));
        }
        DynamicsSystem::GoldenMean => {
            r.setting("system", "golden-mean");
            let d = BratteliDiagram::golden_mean(depth + DEFAULT_K0_SLACK);
            let a = Alphabet::digits(3).expect("three symbols");
            let mut t = Table::new("levels", &["level", "vertices", "paths", "min_path", "cycle_length"]);
            let mut ok = true;
            for n in 1..=depth {
                let paths = d.all_paths(n);
                let min = d.extreme_paths(n, Extreme::Min)?;
                let mut p = d.vershik_successor(&min)?;
                let mut len = 1usize;
                while p != min && len <= paths.len() {
                    p = d.vershik_successor(&p)?;
                    len += 1;
                }
                ok &= len == paths.len();
                t.push(vec![
                    n.into(),
                    d.vertex_count(n).into(),
                    paths.len().into(),
                    a.format_word(&min.order_word()).into(),
                    len.into(),
                ]);
            }
            r.table(t);
            r.check("vershik-single-cycle", ok, format!("levels 1..={depth}"));
        }
    }
    Ok(())
}

fn k0_cmd(r: &mut Report, system: &K0System) -> Result<()> {
    match system {
        K0System::GoldenMean { elements, target_level } => {
            let d = BratteliDiagram::golden_mean(target_level + DEFAULT_K0_SLACK + 1);
            let mut tele = Vec::new();
            let mut t = Table::new("telescoped", &["element", "level", "vector", "target_level", "target_vector"]);
            for (i, (level, v)) in elements.iter().enumerate() {
                let e = DimensionGroupElement::new(&d, *level, v.clone())?;
                let up = k0_telescope(&d, &e, *target_level)?;
                t.push(vec![
                    i.into(),
                    (*level).into(),
                    format!("{v:?}").into(),
                    (*target_level).into(),
                    format!("{:?}", up.vector).into(),
                ]);
                tele.push(e);
            }
            r.table(t);
            let mut t = Table::new("equality", &["a", "b", "result"]);
            for i in 0..tele.len() {
                for j in i + 1..tele.len() {
                    let res = match k0_equal(&d, &tele[i], &tele[j]) {
                        K0Equality::Equal => "equal",
                        K0Equality::Distinct => "distinct",
                        K0Equality::Undecided => "undecided",
                    };
                    t.push(vec![i.into(), j.into(), res.into()]);
                }
            }
            r.table(t);
            let gens: Vec<Vec<i64>> = [[1, 0], [0, 1]]
                .iter()
                .map(|v| {
                    DimensionGroupElement::new(&d, 1, v.to_vec()).and_then(|e| k0_telescope(&d, &e, *target_level))
                })
                .map(|e| e.map(|e| e.vector))
                .collect::<std::result::Result<_, _>>()?;
            r.check("generators-independent", exact_rank(&gens) == 2, format!("telescoped to level {target_level}"));
        }
        K0System::Odometer { spec, functions } => {
            let a = spec.alphabet();
            let mut t = Table::new("classes", &["function", "class", "value"]);
            let mut additive = true;
            for f in functions {
                let c = odometer_k0_class(spec, f)?;
                t.push(vec![format_function(a, f).into(), c.to_string().into(), c.as_f64().into()]);
                for w in f.terms().keys() {
                    let whole = odometer_k0_class(spec, &IndicatorCombination::indicator(w.clone()))?;
                    let parts = IndicatorCombination::from_terms(spec.refine(w).into_iter().map(|c| (c, 1)));
                    additive &= odometer_k0_class(spec, &parts)? == whole;
                }
            }
            r.table(t);
            r.check("refinement-additivity", additive, "every word of every function");
        }
    }
    Ok(())
}

fn format_function(a: &Alphabet, f: &IndicatorCombination) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = f.terms().iter().map(|(w, c)| format!("{c}*chi[{}]", a.format_word(w))).collect();
    parts.join(" + ")
}

fn pattern_rows(m: &BlockMatrix, block: usize, tol: f64) -> Vec<String> {
    m.pattern(block, tol).iter().map(|row| row.iter().map(|&x| if x { '*' } else { '.' }).collect()).collect()
}

fn gm_demo_cmd(r: &mut Report, s: &Settings, level: usize) -> Result<()> {
    let tol = s.tolerance;
    r.setting("level", level);
    let w = gm_w(level)?;
    let mut t = Table::new("w-entries", &["block", "row", "col", "re", "im"]);
    for block in 0..2 {
        let b = w.block(block);
        for i in 0..b.nrows() {
            for j in 0..b.ncols() {
                let z = b[(i, j)];
                if z.norm() > tol && (block == 0 || i != j || (z - 1.0).norm() > tol) {
                    t.push(vec![block.into(), (i + 1).into(), (j + 1).into(), z.re.into(), z.im.into()]);
                }
            }
        }
    }
    r.table(t);
    if level == 1 {
        let reference = reference_w1();
        let mut t = Table::new("w1-pattern", &["row", "computed", "expected"]);
        for (i, (a, b)) in pattern_rows(&w, 0, tol).into_iter().zip(pattern_rows(&reference, 0, tol)).enumerate() {
            t.push(vec![(i + 1).into(), a.into(), b.into()]);
        }
        r.table(t);
        let same_pattern =
            w.pattern(0, tol) == reference.pattern(0, tol) && w.pattern(1, tol) == reference.pattern(1, tol);
        let diff = w.max_abs_diff(&reference);
        r.check(
            "w1-matches-reference",
            same_pattern && diff <= tol,
            format!("max entry difference {}", format_float(diff)),
        );
        let zd = gm_z(1)?.max_abs_diff(&reference_z1());
        r.check("z1-matches-reference", zd <= tol, format!("max entry difference {}", format_float(zd)));
        let v1 = gm_v(1)?;
        let v2 = gm_v(2)?;
        let v_ok = v1.block(0) == &permutation_block(&[4, 0, 1, 2, 3])
            && v1.block(1) == &permutation_block(&[2, 0, 1])
            && v2.block(0) == &permutation_block(&[7, 0, 1, 2, 3, 4, 5, 6])
            && v2.block(1) == &permutation_block(&[4, 0, 1, 2, 3]);
        r.check("v1-v2-match-reference", v_ok, "cyclic shifts on (5, 3) and (8, 5)");
    }
    let mut t = Table::new("root-of-swap", &["n", "z11", "zNN", "z1N", "zN1", "holds"]);
    let mut roots = true;
    for n in 1..=level {
        let mut p = gm_z(n)?;
        for _ in 0..n {
            p = p.mul(&p);
        }
        let (_, n2) = gm_level_sizes(n + 1)?;
        let b = p.block(0);
        let e = [b[(0, 0)].norm(), b[(n2, n2)].norm(), (b[(0, n2)] - 1.0).norm(), (b[(n2, 0)] - 1.0).norm()];
        let holds = e.iter().all(|&x| x <= tol) && p.distance(&gm_z_pow(n, 1 << n)?) <= tol;
        roots &= holds;
        t.push(vec![n.into(), e[0].into(), e[1].into(), e[2].into(), e[3].into(), holds.into()]);
    }
    r.table(t);
    r.check("z-power-is-swap", roots, format!("n = 1..={level}"));
    let mut unitary = true;
    let mut commute = true;
    let mut worst: f64 = 0.0;
    for m in 1..=level {
        let wm = gm_w(m)?;
        unitary &= wm.unitarity_defect() <= tol;
        for n in 1..m {
            let (a, b) = gm_level_sizes(n)?;
            for (block, size) in [(0, a), (1, b)] {
                for i in 0..size {
                    let e = gm_include_to(&BlockMatrix::matrix_unit(n, block, i, i)?, m + 1)?;
                    let c = e.commutator_norm(&wm);
                    worst = worst.max(c);
                    commute &= c <= tol;
                }
            }
        }
    }
    r.check("w-unitary", unitary, format!("w_1..w_{level}"));
    r.check("units-commute-with-w", commute, format!("worst commutator norm {}", format_float(worst)));
    let (a, b) = gm_level_sizes(level)?;
    let f = BlockMatrix::diagonal_projection(
        level,
        &(0..a).map(|i| i % 2 == 0).collect::<Vec<_>>(),
        &(0..b).map(|i| i % 3 == 1).collect::<Vec<_>>(),
    )?;
    let p = embed_iota(&f, tol)?;
    let direct = embed_iota(&cantor_core::af_embedding::gm_include(&f), tol)?;
    let stable = direct.distance(&cantor_core::af_embedding::gm_include(&p));
    r.check("iota-stable", stable <= tol && p.is_projection(tol), format!("distance {}", format_float(stable)));
    Ok(())
}

fn route_cells(results: &[(&'static str, std::result::Result<i64, FredholmError>)]) -> Vec<Cell> {
    results
        .iter()
        .map(|(_, v)| match v {
            Ok(x) => Cell::from(*x),
            Err(FredholmError::NotApplicable(_)) => Cell::text("n/a"),
            Err(e) => Cell::text(format!("error: {e}")),
        })
        .collect()
}

fn pair_even_cmd(r: &mut Report, space: &Space, pair: &ChoicePair, words: &[Word], level: usize, order: usize) {
    let lang = space.language();
    let a = space.alphabet();
    r.setting("level", level);
    r.setting("order", order);
    r.setting("restriction", pair.restriction.as_ref().map(|w| a.format_word(w)));
    let reg = RouteRegistry::standard(order, 1);
    let mut cols = vec!["word"];
    cols.extend(reg.even_names());
    cols.push("agree");
    let mut t = Table::new("routes", &cols);
    let rows = cantor_core::parallel::ordered_map(words, |mu| reg.evaluate_even(pair, lang, mu, level));
    let mut all = true;
    for (mu, res) in words.iter().zip(&rows) {
        let agree = routes_agree(res);
        all &= agree;
        let mut row = vec![Cell::text(a.format_word(mu))];
        row.extend(route_cells(res));
        row.push(agree.into());
        t.push(row);
    }
    r.table(t);
    r.check("routes-agree", all, format!("{} words", words.len()));
    if pair.restriction.is_none() {
        let bounded = words.iter().zip(&rows).all(|(mu, res)| match &res[0].1 {
            Ok(v) => v.unsigned_abs() as usize <= mu.len() && (!mu.is_empty() || *v == 0),
            Err(_) => false,
        });
        r.check("obstruction-bound", bounded, "|pairing(mu)| <= |mu| and pairing(empty) = 0");
    }
    let additive = words.iter().all(|mu| {
        let whole = even_bp_pairing(pair, mu);
        let parts: std::result::Result<i64, _> = lang.refine(mu).iter().map(|c| even_bp_pairing(pair, c)).sum();
        matches!((whole, parts), (Ok(x), Ok(y)) if x == y)
    });
    r.check("refinement-additivity", additive, "pairing(mu) = sum over children");
}

#[allow(clippy::too_many_arguments)]
fn pair_odd_cmd(
    r: &mut Report,
    s: &Settings,
    space: &Space,
    spec: &cantor_core::fredholm::OddCycleSpec,
    powers: &[i64],
    window: usize,
    level: usize,
    order: usize,
    weight: f64,
) -> Result<()> {
    let lang = space.language();
    let a = space.alphabet();
    r.setting("side", format!("{:?}", spec.side).to_lowercase());
    r.setting("N", spec.words().iter().map(|w| a.format_word(w)).collect::<Vec<_>>().join(" "));
    r.setting("window", window);
    r.setting("level", level);
    r.setting("order", order);
    let reg = RouteRegistry::standard(2, order);
    let mut cols = vec!["k"];
    cols.extend(reg.odd_names());
    cols.push("agree");
    let mut t = Table::new("routes", &cols);
    let mut all = true;
    let mut bound_ok = true;
    let mut rt = Table::new("commutator", &["k", "rank", "bound"]);
    for &k in powers {
        let f = CrossedElement::u_power(k);
        let w = window.max(k.unsigned_abs() as usize + 1);
        let input = OddInput { spec, f: &f, dynamics: None, language: lang, window: w, level };
        let res = reg.evaluate_odd(&input);
        let agree = routes_agree(&res);
        all &= agree;
        let mut row = vec![Cell::from(k)];
        row.extend(route_cells(&res));
        row.push(agree.into());
        t.push(row);
        let c = odd_commutator(spec, &f, None, lang, w, level)?;
        let rank = c.rank(s.tolerance);
        let bound = odd_rank_bound(spec, &f);
        bound_ok &= rank <= bound;
        rt.push(vec![k.into(), rank.into(), bound.into()]);
    }
    r.table(t);
    r.table(rt);
    r.check("routes-agree", all, format!("{} powers", powers.len()));
    r.check("commutator-rank-bound", bound_ok, "rank <= (K - L + 1)|N|");
    r.check(
        "unbounded-lift",
        unbounded_lift_check(spec, lang, weight, window, level),
        format!("W = {weight}: D|D|^-1 = 2P_N - 1"),
    );
    Ok(())
}

fn trace_cmd(
    r: &mut Report,
    s: &Settings,
    space: &Space,
    kind: &TraceKind,
    orders: &[usize],
    level: usize,
    schatten: &[f64],
) -> Result<()> {
    let lang = space.language();
    r.setting("level", level);
    let mut t = Table::new("trace", &["order", "re", "im", "integer"]);
    let mut values = Vec::new();
    let (expected, comm_norms): (i64, Vec<f64>) = match kind {
        TraceKind::Even { pair, f } => {
            r.setting("parity", "even");
            r.setting("function", format_function(space.alphabet(), f));
            for &n in orders {
                let z = cantor_core::fredholm::even_trace_formula(pair, lang, f, n, level)?;
                values.push((n, z));
            }
            let c = even_commutator(pair, lang, f, level)?;
            (even_bp_pairing_of(pair, f)?, schatten.iter().map(|&p| schatten_norm(&c, p)).collect())
        }
        TraceKind::Odd { spec, power, window } => {
            r.setting("parity", "odd");
            r.setting("power", *power);
            r.setting("window", *window);
            let f = CrossedElement::u_power(*power);
            for &n in orders {
                let z = odd_trace_formula(spec, &f, None, lang, n, *window, level)?;
                values.push((n, z));
            }
            let c = odd_commutator(spec, &f, None, lang, *window, level)?;
            (cantor_core::fredholm::odd_pairing(spec, *power), schatten.iter().map(|&p| schatten_norm(&c, p)).collect())
        }
    };
    let mut ok = true;
    for (n, z) in &values {
        let iv = integer_value(*z, s.tolerance).ok();
        ok &= iv == Some(expected);
        t.push(vec![(*n).into(), z.re.into(), z.im.into(), iv.into()]);
    }
    r.table(t);
    let mut st = Table::new("schatten", &["p", "norm"]);
    for (p, v) in schatten.iter().zip(comm_norms) {
        st.push(vec![(*p).into(), v.into()]);
    }
    r.table(st);
    r.check("trace-matches-count", ok, format!("combinatorial value {expected}"));
    Ok(())
}

fn growth_counts(growth: &Growth, depth: usize) -> Vec<u128> {
    match growth {
        Growth::FullShift(o) => (0..=depth as u32).map(|n| (*o as u128).pow(n)).collect(),
        Growth::Counts(c) => c.clone(),
        Growth::Language(space) => (0..=depth).map(|n| space.language().level(n).len() as u128).collect(),
    }
}

fn summability_cmd(r: &mut Report, weight: f64, exponent: DiracExponent, ps: &[f64], depth: usize, growth: &Growth) {
    r.setting("weight", weight);
    r.setting("exponent", format!("{exponent:?}").to_lowercase());
    r.setting("depth", depth);
    let counts = growth_counts(growth, depth);
    let d = WeightedDirac { weight, exponent };
    let omega = match growth {
        Growth::FullShift(o) => Some(*o),
        _ => None,
    };
    let mut t = Table::new(
        "summability",
        &["p", "w_to_p", "partial_sum", "tail_bound", "geometric_bound", "growth_min", "growth_max", "verdict"],
    );
    let mut bound_ok = true;
    for &p in ps {
        let rep = summability_report(&d, &counts, p, depth);
        let geo = omega.filter(|_| exponent == DiracExponent::Word).map(|o| geometric_bound(weight, o, p, rep.depth));
        if let Some(o) = omega.filter(|_| exponent == DiracExponent::Word) {
            for k in 1..=rep.depth {
                let part = summability_report(&d, &counts, p, k).partial_sum;
                bound_ok &= part <= geometric_bound(weight, o, p, k) * (1.0 + 1e-12);
            }
        }
        t.push(vec![
            p.into(),
            weight.powf(p).into(),
            rep.partial_sum.into(),
            rep.tail_bound.into(),
            geo.into(),
            rep.growth.0.into(),
            rep.growth.1.into(),
            rep.verdict.as_str().into(),
        ]);
    }
    r.table(t);
    if omega.is_some() && exponent == DiracExponent::Word {
        r.check("geometric-bound", bound_ok, "(2 - W^-p) sum (|Omega|/W^p)^n at every depth");
    }
}

fn synthesize_cmd(r: &mut Report, space: &Space, level: usize, target: &cantor_core::k_theory::IndexHom) -> Result<()> {
    let lang = space.language();
    let a = space.alphabet();
    r.setting("level", level);
    let desc = synthesize_index(target, lang, level)?;
    r.setting("base_word", desc.base_word.as_ref().map(|w| a.format_word(w)));
    r.setting("components", desc.components.len());
    let mut t = Table::new("components", &["component", "role", "restriction", "word", "plus", "minus"]);
    for (i, c) in desc.components.iter().enumerate() {
        let tab = ComponentTable::of(c);
        let role = if i == 0 { "main" } else { "auxiliary" };
        let restriction: Cell = tab.restriction.as_ref().map(|w| a.format_word(w)).into();
        for (w, p) in &tab.plus {
            let m = tab.minus.get(w).map(|q| a.format_point(q));
            t.push(vec![
                i.into(),
                role.into(),
                restriction.clone(),
                a.format_word(w).into(),
                a.format_point(p).into(),
                m.into(),
            ]);
        }
    }
    r.table(t);
    let mut t = Table::new("values", &["word", "target", "realized"]);
    for mu in lang.words_up_to(level) {
        let got: std::result::Result<i64, _> = desc.components.iter().map(|c| even_bp_pairing(c, &mu)).sum();
        t.push(vec![a.format_word(&mu).into(), target.value_of(lang, &mu).into(), got?.into()]);
    }
    r.table(t);
    r.check(
        "synthesis-verified",
        verify_synthesis(&desc, target, lang, level),
        format!("all words up to level {level}"),
    );
    Ok(())
}

/// `W^{2(n+|μ|)} + m²`, twice, by direct loops over `n`, `m` and the words.
fn spectrum_oracle(t: &HSWZTriple, b: cantor_core::crossed_product::SpectrumBounds) -> Vec<f64> {
    let mut out = Vec::new();
    for mu in t.odometer.words_up_to(b.word_level) {
        for n in 0..=b.n_max {
            for m in -(b.m_max as i64)..=b.m_max as i64 {
                let v = t.weight.powi(2 * (n as i32 + mu.len() as i32)) + (m * m) as f64;
                out.push(v);
                out.push(v);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

#[allow(clippy::too_many_arguments)]
fn crossed_cmd(
    r: &mut Report,
    t: &HSWZTriple,
    qs: &[f64],
    depth: usize,
    bounds: cantor_core::crossed_product::SpectrumBounds,
    head: usize,
    decay_word: &Word,
    m_range: (i64, i64),
) -> Result<()> {
    let a = t.odometer.alphabet();
    r.setting("weight", t.weight);
    r.setting("base_p", t.base_p);
    r.setting("omega", t.omega());
    r.setting("base_summable", t.base_summable());
    let spec = hswz_spectrum(t, bounds);
    let mut st = Table::new("spectrum", &["index", "eigenvalue"]);
    for (i, v) in spec.iter().take(head).enumerate() {
        st.push(vec![i.into(), (*v).into()]);
    }
    r.table(st);
    r.check(
        "spectrum-oracle",
        spec == spectrum_oracle(t, bounds),
        format!(
            "{} eigenvalues (n <= {}, |m| <= {}, words <= {})",
            spec.len(),
            bounds.n_max,
            bounds.m_max,
            bounds.word_level
        ),
    );
    let mut qt = Table::new("summability", &["q", "partial_sum", "tail_bound", "verdict"]);
    for &q in qs {
        let h = hswz_summability(t, t.omega(), q, depth);
        qt.push(vec![q.into(), h.partial_sum.into(), h.tail_bound.into(), h.verdict.as_str().into()]);
    }
    r.table(qt);
    let decay = hswz_commutator_decay(t, decay_word, m_range.0..=m_range.1)?;
    let mut dt = Table::new("decay", &["m", "orbit_word", "norm", "bound", "rank_difference"]);
    for row in &decay.rows {
        dt.push(vec![
            row.m.into(),
            a.format_word(&row.orbit_word).into(),
            row.norm.into(),
            row.bound.into(),
            row.rank_difference.into(),
        ]);
    }
    r.table(dt);
    r.setting("decay_constant", decay.bound_constant);
    r.setting("fitted_constant", decay.fitted_constant);
    r.check(
        "commutator-decay",
        decay.holds,
        format!("M = {} on m in [{}, {}]", decay.bound_constant, m_range.0, m_range.1),
    );
    let f = IndicatorCombination::indicator(decay_word.clone());
    let sup = equicontinuity_sup_check(&t.pair, &t.odometer, t.weight, &f, m_range.0..=m_range.1)?;
    r.setting("equicontinuity_sup", sup);
    Ok(())
}
