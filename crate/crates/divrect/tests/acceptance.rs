//! Acceptance suite. Every criterion prints one `PASS` or `FAIL` line with
//! its measured values; the test fails if any line fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use divrect::bench::{log_grid, perf_profile, CostMatrix};
use divrect::run;
use divrect_core::partition::{
    initial_simplices, normalize_domain, Cell, DiagRect, DiagonalSampling, Eval, HyperRect,
    MeasureKind, PartitionStore, SimplexCell, SimplexSampling, StorageKind, TrisectRule,
};
use divrect_core::problem::{
    evaluate_constraints, evaluate_objective, lookup_problem, suite, ProblemSpec, Suite,
};
use divrect_core::selection::{
    heads_of, select_convex_hull, select_group_extremes, Candidate, ExtremeMode, PerGroup, Scaling,
    SelectionContext,
};
use divrect_core::solve::{percent_error, solve, RunConfig, RunResult, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Relative tolerance on sampled values of the first trisection.
const SAMPLE_REL_TOL: f64 = 1e-9;
/// Relative tolerance on objective values at reference points.
const OPTIMUM_REL_TOL: f64 = 1e-5;
/// Bound on active constraint values at reference points.
const ACTIVE_TOL: f64 = 1e-4;
/// Percent-error target of the solve-quality criteria.
const PE_TARGET: f64 = 1e-2;
/// Evaluation budget of the box-constrained criterion.
const BOX_BUDGET: usize = 2_000_000;
/// Evaluation budget of the hidden-constraint criterion.
const HIDDEN_BUDGET: usize = 200_000;
/// Volume tolerance of the tiling check.
const VOLUME_TOL: f64 = 1e-9;

struct Report {
    lines: Vec<(String, bool, String)>,
}

impl Report {
    fn record(&mut self, id: &str, ok: bool, detail: String) {
        // Written to the real stdout so the lines survive output capture.
        let mut out = std::io::stdout();
        let _ = writeln!(
            out,
            "criterion {id}: {} | {detail}",
            if ok { "PASS" } else { "FAIL" }
        );
        self.lines.push((id.to_string(), ok, detail));
    }
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(f64::MIN_POSITIVE)
}

/// Evaluates a unit-cube point of `spec`.
fn eval_unit(spec: &ProblemSpec, u: &[f64]) -> f64 {
    let x = normalize_domain(spec).to_original(u);
    evaluate_objective(spec, &x).unwrap()
}

/// Plain DIRECT driven through the public partition and selection API.
fn direct_partition(spec: &ProblemSpec, iterations: usize) -> PartitionStore<HyperRect> {
    let n = spec.dim();
    let f0 = eval_unit(spec, &HyperRect::unit_center(n));
    let mut store = PartitionStore::new(StorageKind::StaticPool).with_global_order();
    store.insert(
        HyperRect::unit(
            n,
            Eval::plain(f0),
            MeasureKind::Euclidean,
            TrisectRule::AllLongest,
        ),
        f0,
    );
    let rank = |e: &Eval| e.f;
    for _ in 0..iterations {
        let selected = hull_selection(&store, 1e-4);
        for id in selected {
            let cell = store.get(id).unwrap().clone();
            let values: Vec<Eval> = cell
                .split_points()
                .iter()
                .map(|u| Eval::plain(eval_unit(spec, u)))
                .collect();
            let mut children = cell.split(&values, &rank).into_iter();
            let first = children.next().unwrap();
            let score = first.best().1.f;
            store.replace(id, first, score);
            for c in children {
                let score = c.best().1.f;
                store.insert(c, score);
            }
        }
    }
    store
}

fn candidates<C: Cell>(store: &PartitionStore<C>) -> Vec<Candidate> {
    store
        .iter()
        .map(|(id, c, score)| Candidate {
            id,
            measure: c.measure(),
            score,
        })
        .collect()
}

fn context(cands: &[Candidate], eps: f64) -> SelectionContext {
    let mut ctx = SelectionContext::new(eps);
    ctx.f_best = cands.iter().map(|c| c.score).fold(f64::INFINITY, f64::min);
    let mut scores: Vec<f64> = cands.iter().map(|c| c.score).collect();
    ctx.set_statistics(&mut scores);
    ctx
}

fn hull_selection<C: Cell>(store: &PartitionStore<C>, eps: f64) -> Vec<usize> {
    let cands = candidates(store);
    let ctx = context(&cands, eps);
    select_convex_hull(&heads_of(&cands), &ctx, Scaling::None, PerGroup::AllTies).sorted()
}

fn sorted_values(store: &PartitionStore<HyperRect>) -> Vec<f64> {
    let mut v: Vec<f64> = store.iter().map(|(_, _, s)| s).collect();
    v.sort_by(f64::total_cmp);
    v
}

fn multiset_close(got: &[f64], want: &[f64]) -> bool {
    let mut want = want.to_vec();
    want.sort_by(f64::total_cmp);
    got.len() == want.len()
        && got
            .iter()
            .zip(&want)
            .all(|(a, b)| rel_close(*a, *b, SAMPLE_REL_TOL))
}

fn criterion_1(r: &mut Report) {
    let t = Instant::now();
    let p2 = lookup_problem("rosenbrock", Some(2)).unwrap();
    let p3 = lookup_problem("rosenbrock", Some(3)).unwrap();
    let v2 = sorted_values(&direct_partition(&p2, 1));
    let v3 = sorted_values(&direct_partition(&p3, 1));
    let ok2 = multiset_close(&v2, &[1408.5, 7658.5, 158.5, 1418.5, 288948.5]);
    let ok3 = multiset_close(
        &v3,
        &[2817.0, 9067.0, 1567.0, 9077.0, 289107.0, 2827.0, 290357.0],
    );
    let secs = t.elapsed().as_secs_f64();
    r.record(
        "1",
        ok2 && ok3 && secs < 1.0,
        format!("rosenbrock samples n=2 {v2:?}, n=3 {v3:?}, {secs:.3}s"),
    );
}

fn criterion_2(r: &mut Report) {
    let t = Instant::now();
    let p = lookup_problem("rosenbrock", Some(2)).unwrap();
    let store = direct_partition(&p, 3);
    let cands = candidates(&store);
    let mut groups: Vec<f64> = store.groups().iter().map(|g| g.measure).collect();
    groups.sort_by(f64::total_cmp);
    let shown: Vec<String> = groups.iter().map(|m| format!("{m:.3}")).collect();
    let value_of = |ids: Vec<usize>| -> Vec<f64> {
        let mut v: Vec<f64> = ids.iter().map(|&id| store.score(id).unwrap()).collect();
        v.sort_by(f64::total_cmp);
        v
    };
    let hull = value_of(hull_selection(&store, 1e-4));
    let aggressive =
        value_of(select_group_extremes(&heads_of(&cands), ExtremeMode::Aggressive).sorted());
    let engine = solve(&p, &RunConfig::new("DIRECT").with_max_iters(3)).unwrap();
    let close = |got: &[f64], want: &[f64]| {
        got.len() == want.len() && got.iter().zip(want).all(|(a, b)| (a - b).abs() < 5e-3)
    };
    let secs = t.elapsed().as_secs_f64();
    let ok = store.len() == 13
        && shown == ["0.079", "0.176", "0.236"]
        && close(&hull, &[19.61, 168.5])
        && close(&aggressive, &[19.61, 158.5, 168.5])
        && engine.evals == 13
        && engine.f_min == hull[0]
        && secs < 1.0;
    r.record(
        "2",
        ok,
        format!(
            "{} elements, groups {shown:?}, hull {hull:?}, aggressive {aggressive:?}, solver evals {}, {secs:.3}s",
            store.len(),
            engine.evals
        ),
    );
}

fn criterion_3(r: &mut Report) {
    let mut ok = true;
    let mut notes = Vec::new();
    let expected = [
        ("tension_spring", 0.01267931),
        ("three_bar_truss", 263.89584535),
        ("speed_reducer", 2996.34817613),
        ("pressure_vessel", 7163.73957163),
        ("welded_beam", 1.72488430),
    ];
    for (name, fstar) in expected {
        let p = lookup_problem(name, None).unwrap();
        let known = p.known.clone().unwrap();
        let x = known.x.unwrap();
        let f = evaluate_objective(&p, &x).unwrap();
        let g = evaluate_constraints(&p, &x).unwrap().inequalities;
        let mut worst: f64 = 0.0;
        for &i in &known.active {
            // The vessel volume constraint is in cubic inches with a constant
            // of 1,296,000; eight printed decimals of x* leave a residual of
            // about 4e-4 there, so it is compared in units of that constant.
            let v = if name == "pressure_vessel" && i == 2 {
                notes.push(format!("vessel g3 raw {:.2e}", g[i]));
                g[i] / 1_296_000.0
            } else {
                g[i]
            };
            worst = worst.max(v.abs());
        }
        let f_ok = rel_close(f, fstar, OPTIMUM_REL_TOL);
        ok &= f_ok && worst <= ACTIVE_TOL;
        notes.push(format!("{name} f={f:.8} max|g_active|={worst:.1e}"));
    }
    for s in 1..=3 {
        for t in [10, 100] {
            let p = lookup_problem(&format!("regression_s{s}_t{t}"), None).unwrap();
            let f = evaluate_objective(&p, p.known.as_ref().unwrap().x.as_ref().unwrap()).unwrap();
            ok &= f.abs() <= 1e-12;
            notes.push(format!("regression s{s} T{t} f={f:.1e}"));
        }
    }
    r.record("3", ok, notes.join(", "));
}

fn timed_solve(p: &ProblemSpec, cfg: &RunConfig) -> (RunResult, f64) {
    let t = Instant::now();
    let res = solve(p, cfg).unwrap();
    (res, t.elapsed().as_secs_f64())
}

fn criterion_4(r: &mut Report) {
    let p = lookup_problem("three_bar_truss", None).unwrap();
    let mut ok = true;
    let mut notes = Vec::new();
    for (alg, reference) in [("DIRECT-GLce", 1055), ("DIRECT-GLce-min", 93)] {
        let (res, secs) = timed_solve(&p, &RunConfig::new(alg));
        let limit = 3 * reference;
        ok &= res.status == Status::Solved && res.evals <= limit && secs < 10.0;
        notes.push(format!(
            "{alg} {} in {} evals (limit {limit}), f={:.6}, {secs:.2}s",
            res.status.as_str(),
            res.evals,
            res.f_min
        ));
    }
    r.record("4", ok, notes.join("; "));
}

fn criterion_5(r: &mut Report) {
    let t = Instant::now();
    let rosen = lookup_problem("rosenbrock", Some(2)).unwrap();
    let direct = solve(&rosen, &RunConfig::new("DIRECT").with_max_evals(BOX_BUDGET)).unwrap();
    let mut ok = direct.status == Status::Solved;
    let mut notes = vec![format!("DIRECT rosenbrock {} evals", direct.evals)];
    let problems = suite(Suite::Box);
    for alg in ["PLOR", "DIRECT-GL", "BIRECT", "Aggressive DIRECT"] {
        let cfg = RunConfig::new(alg).with_max_evals(BOX_BUDGET);
        let mut missed = Vec::new();
        for p in &problems {
            if solve(p, &cfg).unwrap().status != Status::Solved {
                missed.push(p.name.clone());
            }
        }
        let solved = problems.len() - missed.len();
        ok &= solved >= 8;
        notes.push(format!(
            "{alg} {solved}/{} (missed {missed:?})",
            problems.len()
        ));
    }
    let secs = t.elapsed().as_secs_f64();
    ok &= secs < 300.0;
    notes.push(format!("{secs:.1}s"));
    r.record("5", ok, notes.join(", "));
}

/// Elements potentially optimal for some positive rate of change `K`,
/// found by intersecting the admissible `K` interval of each element.
fn slope_oracle(c: &[Candidate], eps: f64) -> BTreeSet<usize> {
    let f_min = c.iter().map(|e| e.score).fold(f64::INFINITY, f64::min);
    let mut out = BTreeSet::new();
    for j in c {
        let mut lo: f64 = (j.score - f_min + eps * f_min.abs()) / j.measure;
        let mut hi = f64::INFINITY;
        let mut dominated = false;
        for i in c {
            if i.id == j.id {
                continue;
            }
            if i.measure == j.measure {
                dominated |= i.score < j.score;
            } else if i.measure < j.measure {
                lo = lo.max((j.score - i.score) / (j.measure - i.measure));
            } else {
                hi = hi.min((i.score - j.score) / (i.measure - j.measure));
            }
        }
        if !dominated && hi > 0.0 && lo <= hi {
            out.insert(j.id);
        }
    }
    out
}

fn random_partition(rng: &mut ChaCha8Rng) -> Vec<Candidate> {
    let len = rng.gen_range(1..=30);
    (0..len)
        .map(|id| Candidate {
            id,
            measure: 0.7 / 3f64.powi(rng.gen_range(0..6)) * rng.gen_range(1..=2) as f64,
            score: rng.gen_range(-50.0..50.0),
        })
        .collect()
}

fn select(c: &[Candidate], eps: f64, scaling: Scaling) -> Vec<usize> {
    select_convex_hull(&heads_of(c), &context(c, eps), scaling, PerGroup::AllTies).sorted()
}

fn criterion_6a(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(61);
    let mut agree = 0;
    let total = 100;
    for k in 0..total {
        let c = random_partition(&mut rng);
        let eps = [0.0, 1e-4, 1e-2][k % 3];
        let got: BTreeSet<usize> = select(&c, eps, Scaling::None).into_iter().collect();
        if got == slope_oracle(&c, eps) {
            agree += 1;
        }
    }
    r.record(
        "6a",
        agree == total,
        format!("hull matches slope oracle on {agree}/{total} random partitions"),
    );
}

fn criterion_6b(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    let (mut affine, mut shift) = (0, 0);
    let total = 100;
    for _ in 0..total {
        let c = random_partition(&mut rng);
        let a = rng.gen_range(0.1..20.0);
        let b = rng.gen_range(-100.0..100.0);
        let map = |g: &dyn Fn(f64) -> f64| -> Vec<Candidate> {
            c.iter()
                .map(|e| Candidate {
                    score: g(e.score),
                    ..*e
                })
                .collect()
        };
        if select(&c, 0.0, Scaling::None) == select(&map(&|f| a * f + b), 0.0, Scaling::None) {
            affine += 1;
        }
        if select(&c, 1e-2, Scaling::Median) == select(&map(&|f| f + b), 1e-2, Scaling::Median) {
            shift += 1;
        }
    }
    r.record(
        "6b",
        affine == total && shift == total,
        format!("eps=0 affine invariance {affine}/{total}, median-scaled shift invariance {shift}/{total}"),
    );
}

/// Splits random elements `steps` times and returns the total volume.
fn tile<C: Cell>(first: Vec<C>, steps: usize, rng: &mut ChaCha8Rng) -> f64 {
    let value = |u: &[f64]| Eval::plain(u.iter().map(|v| (v - 0.3) * (v - 0.3)).sum());
    let rank = |e: &Eval| e.f;
    let mut store = PartitionStore::new(StorageKind::Dynamic);
    for c in first {
        let s = c.best().1.f;
        store.insert(c, s);
    }
    for _ in 0..steps {
        let ids: Vec<usize> = store.iter().map(|(id, _, _)| id).collect();
        let id = ids[rng.gen_range(0..ids.len())];
        let cell = store.get(id).unwrap().clone();
        let values: Vec<Eval> = cell.split_points().iter().map(|u| value(u)).collect();
        let mut children = cell.split(&values, &rank).into_iter();
        let head = children.next().unwrap();
        let s = head.best().1.f;
        store.replace(id, head, s);
        for ch in children {
            let s = ch.best().1.f;
            store.insert(ch, s);
        }
    }
    store.iter().map(|(_, c, _)| c.volume()).sum()
}

fn criterion_6c(r: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(63);
    let value = |u: &[f64]| Eval::plain(u.iter().map(|v| (v - 0.3) * (v - 0.3)).sum());
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [2, 3] {
        let rect = HyperRect::unit(
            n,
            value(&HyperRect::unit_center(n)),
            MeasureKind::Euclidean,
            TrisectRule::AllLongest,
        );
        let [a, b] = DiagRect::initial_points(n, DiagonalSampling::Thirds);
        let diag = DiagRect::unit(
            n,
            DiagonalSampling::Thirds,
            value(&a),
            value(&b),
            MeasureKind::Euclidean,
        );
        let simplices: Vec<SimplexCell> = initial_simplices(n)
            .unwrap()
            .iter()
            .map(|v| {
                let pts = SimplexCell::sample_points(v, SimplexSampling::Center);
                let vals: Vec<Eval> = pts.iter().map(|p| value(p)).collect();
                SimplexCell::new(v, SimplexSampling::Center, &vals)
            })
            .collect();
        let volumes = [
            ("trisection", tile(vec![rect], 100, &mut rng)),
            ("bisection", tile(vec![diag], 100, &mut rng)),
            ("simplicial", tile(simplices, 100, &mut rng)),
        ];
        for (scheme, v) in volumes {
            ok &= (v - 1.0).abs() <= VOLUME_TOL;
            notes.push(format!("{scheme} n={n} |vol-1|={:.1e}", (v - 1.0).abs()));
        }
    }
    r.record("6c", ok, notes.join(", "));
}

/// Iteration history without timestamps.
fn fingerprint(res: &RunResult) -> Vec<(usize, usize, u64)> {
    res.trace
        .iter()
        .map(|t| (t.iteration, t.evals, t.f_min.to_bits()))
        .collect()
}

fn criterion_6d(r: &mut Report) {
    let pairs: [(&str, &str, Option<usize>, usize); 5] = [
        ("DIRECT-GL", "rosenbrock", Some(5), 20_000),
        ("BIRECT", "hartman3", None, 20_000),
        ("DIRECT-GLce", "three_bar_truss", None, 5_000),
        ("DISIMPL-V", "shekel5", None, 5_000),
        ("DIRMIN", "goldstein_price", None, 5_000),
    ];
    let mut ok = true;
    let mut notes = Vec::new();
    for (alg, name, n, budget) in pairs {
        let p = lookup_problem(name, n).unwrap();
        let mut cfg = RunConfig::new(alg).with_max_evals(budget);
        cfg.eps_pe = 0.0;
        let seq = solve(&p, &cfg).unwrap();
        let mut same = true;
        for workers in [2, 4] {
            cfg.workers = workers;
            let par = run(&p, &cfg).unwrap();
            same &= fingerprint(&par) == fingerprint(&seq)
                && par.x_min == seq.x_min
                && par.evals == seq.evals;
        }
        ok &= same;
        notes.push(format!(
            "{alg}/{name} {} iterations {}",
            seq.iters,
            if same { "identical" } else { "DIFFER" }
        ));
    }
    r.record("6d", ok, notes.join(", "));
}

fn criterion_6e(r: &mut Report) {
    let pairs: [(&str, &str, Option<usize>); 10] = [
        ("DIRECT", "branin", None),
        ("DIRECT-l", "shekel7", None),
        ("DIRECT-GL", "rosenbrock", Some(3)),
        ("PLOR", "hartman3", None),
        ("BIRECT", "six_hump_camel", None),
        ("DISIMPL-C", "goldstein_price", None),
        ("MrDIRECT", "shubert", None),
        ("DIRECT-GLce", "pressure_vessel", None),
        ("Lc-DISIMPL-V", "hs21", None),
        ("DIRECT-GLh", "three_bar_truss_hidden", None),
    ];
    let mut agree = 0;
    let mut differ = Vec::new();
    for (alg, name, n) in pairs {
        let p = lookup_problem(name, n).unwrap();
        let mut cfg = RunConfig::new(alg).with_max_evals(5_000);
        cfg.eps_pe = 0.0;
        let a = solve(&p, &cfg.clone().with_storage(StorageKind::StaticPool)).unwrap();
        let b = solve(&p, &cfg.with_storage(StorageKind::Dynamic)).unwrap();
        if a == b {
            agree += 1;
        } else {
            differ.push(format!("{alg}/{name}"));
        }
    }
    r.record(
        "6e",
        agree == pairs.len(),
        format!(
            "static and dynamic storage traces equal on {agree}/{} pairs {differ:?}",
            pairs.len()
        ),
    );
}

fn criterion_7(r: &mut Report) {
    let m = CostMatrix::new(
        vec!["s1".into(), "s2".into()],
        vec!["p1".into(), "p2".into()],
        vec![vec![100.0, 200.0], vec![300.0, 100.0]],
    )
    .unwrap();
    let prof = perf_profile(&m, &log_grid(1.0, 1e4, 200));
    let points = [
        prof.chi_at(0, 1.0),
        prof.chi_at(1, 1.0),
        prof.chi_at(0, 2.0),
        prof.chi_at(1, 3.0),
    ];
    let exact = points == [0.5, 0.5, 1.0, 1.0];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut monotone = 0;
    let total = 1000;
    for _ in 0..total {
        let ns = rng.gen_range(1..6);
        let np = rng.gen_range(1..12);
        let t: Vec<Vec<f64>> = (0..ns)
            .map(|_| {
                (0..np)
                    .map(|_| {
                        if rng.gen_bool(0.2) {
                            divrect::bench::profile::SENTINEL
                        } else {
                            rng.gen_range(1.0..1e5)
                        }
                    })
                    .collect()
            })
            .collect();
        let names = |p: &str, k: usize| (0..k).map(|i| format!("{p}{i}")).collect();
        let m = CostMatrix::new(names("s", ns), names("p", np), t).unwrap();
        let prof = perf_profile(&m, &log_grid(1.0, 1e4, 200));
        if prof.chi.iter().all(|c| {
            c.windows(2).all(|w| w[0] <= w[1]) && c.iter().all(|&v| (0.0..=1.0).contains(&v))
        }) {
            monotone += 1;
        }
    }
    r.record(
        "7",
        exact && monotone == total,
        format!("chi1(1), chi2(1), chi1(2), chi2(3) = {points:?}; monotone on {monotone}/{total} random matrices"),
    );
}

fn criterion_8(r: &mut Report) {
    let t = Instant::now();
    let p = lookup_problem("three_bar_truss_hidden", None).unwrap();
    let fstar = p.fstar().unwrap();
    let glh = solve(
        &p,
        &RunConfig::new("DIRECT-GLh").with_max_evals(HIDDEN_BUDGET),
    )
    .unwrap();
    let full = |alg: &str| {
        let mut cfg = RunConfig::new(alg).with_max_evals(HIDDEN_BUDGET);
        cfg.eps_pe = 0.0;
        solve(&p, &cfg).unwrap()
    };
    let glh_full = full("DIRECT-GLh");
    let barrier_full = full("DIRECT-Barrier");
    let secs = t.elapsed().as_secs_f64();
    let ok = glh.status == Status::Solved
        && percent_error(glh.f_min, fstar) <= PE_TARGET
        && barrier_full.f_min >= glh_full.f_min
        && secs < 60.0;
    r.record(
        "8",
        ok,
        format!(
            "DIRECT-GLh solved in {} evals; after {HIDDEN_BUDGET} evals GLh {:.6} vs Barrier {:.6}; {secs:.1}s",
            glh.evals, glh_full.f_min, barrier_full.f_min
        ),
    );
}

#[test]
fn acceptance() {
    let mut r = Report { lines: Vec::new() };
    criterion_1(&mut r);
    criterion_2(&mut r);
    criterion_3(&mut r);
    criterion_4(&mut r);
    criterion_5(&mut r);
    criterion_6a(&mut r);
    criterion_6b(&mut r);
    criterion_6c(&mut r);
    criterion_6d(&mut r);
    criterion_6e(&mut r);
    criterion_7(&mut r);
    criterion_8(&mut r);
    let failed: Vec<&str> = r
        .lines
        .iter()
        .filter(|l| !l.1)
        .map(|l| l.0.as_str())
        .collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
