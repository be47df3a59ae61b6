//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Stochastic thresholds are artifact-chosen.

use std::fs;
use std::path::Path;
use std::time::{Duration, Instant};

use nsga_maximin::{
    best_contribution_removal, closed_form_value, crowding_distances, grid_oracle, line_crowding,
    maximin_solve, min_finite_cd, non_dominated_sort, peel_fronts_oracle, polynomial_mutation,
    sbx_crossover, worst_cd_removal, CrowdingDistance, CrowdingPolicy, Exact, LinePlacement,
    RandomStream, VariationConfig,
};
use nsga_maximin_cli::commands::{cmd_run, cmd_sweep, SweepOutput, SweepSettings};
use nsga_maximin_cli::manifest::{resolve_run, Manifest};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn q(n: i64, d: i64) -> Exact {
    Exact::new(n, d)
}

fn line(ts: &[Exact]) -> Vec<Vec<Exact>> {
    ts.iter().map(|&t| vec![t, q(1, 1) - t]).collect()
}

fn manifest(pairs: &[(&str, String)]) -> Manifest {
    let mut m = Manifest::new();
    for (k, v) in pairs {
        m.set(k, v);
    }
    m
}

fn sweep(dir: &Path, pairs: &[(&str, String)]) -> SweepOutput {
    let mut m = manifest(pairs);
    m.set("out", dir.display());
    cmd_sweep(&SweepSettings::resolve(m).expect("valid sweep")).expect("sweep runs")
}

fn maximin_catalog() -> Verdict {
    let start = Instant::now();
    let mut notes = Vec::new();
    let mut pass = true;
    for (n, expected) in [
        (3, 2.0),
        (4, 2.0),
        (5, 1.0),
        (6, 1.0),
        (7, 2.0 / 3.0),
        (8, 2.0 / 3.0),
        (20, 2.0 / 9.0),
    ] {
        let closed = closed_form_value::<f64>(n).unwrap();
        let solved = maximin_solve::<f64>(n - 2, 1e-12).unwrap().value;
        let ok = (closed - expected).abs() <= 1e-9 && (solved - expected).abs() <= 1e-9;
        pass &= ok;
        notes.push(format!("N={n}: {solved:.10}"));
    }
    for n in [7, 8] {
        let grid = grid_oracle::<f64>(n - 2, 0.01).unwrap().value;
        let ok = (grid - 2.0 / 3.0).abs() <= 0.04;
        pass &= ok;
        notes.push(format!("grid N={n}: {grid}"));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    verdict(pass, format!("{}; {elapsed:.2?}", notes.join(", ")))
}

fn crowding_hand_checks() -> Verdict {
    let raw = CrowdingPolicy::RAW_SUM;
    let mut pass = true;
    for x in [q(1, 10), q(3, 10), q(7, 10)] {
        let d = crowding_distances(&line(&[q(0, 1), x, q(1, 1)]), raw)
            .unwrap()
            .distances;
        pass &= d[1] == CrowdingDistance::Finite(q(2, 1));
    }
    let four = crowding_distances(&line(&[q(0, 1), q(1, 3), q(2, 3), q(1, 1)]), raw)
        .unwrap()
        .distances;
    pass &= four[1] == CrowdingDistance::Finite(q(4, 3))
        && four[2] == CrowdingDistance::Finite(q(4, 3));
    let six: Vec<Exact> = (0..6).map(|i| q(i, 5)).collect();
    let six_min = min_finite_cd(&line(&six), raw).unwrap();
    pass &= six_min == CrowdingDistance::Finite(q(4, 5));
    let opt6 = [q(0, 1), q(0, 1), q(1, 2), q(1, 2), q(1, 1), q(1, 1)];
    let opt6_min = min_finite_cd(&line(&opt6), raw).unwrap();
    pass &= opt6_min == CrowdingDistance::Finite(q(1, 1));
    let placement = LinePlacement::new(vec![q(0, 1), q(1, 2), q(1, 2), q(1, 1)]).unwrap();
    pass &= line_crowding(&placement).into_iter().min() == Some(q(1, 1));
    verdict(
        pass,
        format!("three-solution interior 2, four uniform 4/3, six uniform min {six_min}, N=6 optimum min {opt6_min}"),
    )
}

fn removal_separation() -> Verdict {
    let raw = CrowdingPolicy::RAW_SUM;
    let front = line(&[q(0, 1), q(15, 100), q(20, 100), q(85, 100), q(1, 1)]);
    let worst = worst_cd_removal(&front, raw).unwrap();
    let mut after = front.clone();
    after.remove(worst);
    let worst_value = min_finite_cd(&after, raw).unwrap();
    let (_, best_value) = best_contribution_removal(&front, raw).unwrap();
    let brute = (0..front.len())
        .map(|i| {
            let mut f = front.clone();
            f.remove(i);
            min_finite_cd(&f, raw).unwrap()
        })
        .max_by(CrowdingDistance::total_cmp)
        .unwrap();
    let mut pass = worst_value == CrowdingDistance::Finite(q(8, 5))
        && best_value == CrowdingDistance::Finite(q(17, 10))
        && brute == best_value;

    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let mut violations = 0;
    for trial in 0..10_000 {
        let k = rng.gen_range(1..=12);
        let mut ts: Vec<f64> = (0..k)
            .map(|_| {
                if trial % 2 == 0 {
                    rng.gen::<f64>()
                } else {
                    f64::from(rng.gen_range(0..=10u8)) / 10.0
                }
            })
            .collect();
        ts.extend([0.0, 1.0]);
        let f: Vec<Vec<f64>> = ts.iter().map(|&t| vec![t, 1.0 - t]).collect();
        let w = worst_cd_removal(&f, raw).unwrap();
        let mut rest = f.clone();
        rest.remove(w);
        let wv = min_finite_cd(&rest, raw).unwrap();
        let (_, bv) = best_contribution_removal(&f, raw).unwrap();
        if bv < wv {
            violations += 1;
        }
    }
    pass &= violations == 0;
    verdict(
        pass,
        format!("worst-cd leaves {worst_value}, best-contribution {best_value}, brute force {brute}; {violations} violations in 10000 fronts"),
    )
}

fn duplicate_extremes_tie_break() -> Verdict {
    let pop = vec![
        vec![0.0, 1.0],
        vec![0.0, 1.0],
        vec![0.5, 0.5],
        vec![1.0, 0.0],
        vec![1.0, 0.0],
    ];
    let report = crowding_distances(&pop, CrowdingPolicy::default()).unwrap();
    let infinite: Vec<usize> = (0..5)
        .filter(|&i| report.distances[i].is_infinite())
        .collect();
    verdict(
        report.infinite_count == 4 && infinite == [0, 1, 3, 4],
        format!(
            "{} infinite distances at {:?}",
            report.infinite_count, infinite
        ),
    )
}

fn steady_state_uniformity(root: &Path) -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for pop in [7, 9, 22] {
        let start = Instant::now();
        let out = sweep(
            &root.join(format!("uniform-{pop}")),
            &[
                ("problem", "linefront".into()),
                ("scheme", "mu1".into()),
                ("pop", pop.to_string()),
                ("offspring", "10000".into()),
                ("seed", "0".into()),
                ("runs", "10".into()),
            ],
        );
        let elapsed = start.elapsed();
        let uniform = out.runs.iter().filter(|r| r.uniform(0.25)).count();
        let dup = out.runs.iter().filter(|r| r.duplicated_extremes()).count();
        let worst_cv = out
            .runs
            .iter()
            .filter_map(|r| r.metrics.gap_cv)
            .fold(0.0, f64::max);
        pass &= uniform >= 8 && dup >= 8 && elapsed < Duration::from_secs(60);
        notes.push(format!(
            "pop {pop}: cv<=0.25 in {uniform}/10 (max {worst_cv:.4}), 2+2 at extremes in {dup}/10, {elapsed:.2?}"
        ));
    }
    verdict(pass, notes.join("; "))
}

fn scheme_contrast(root: &Path) -> Verdict {
    let mut pass = true;
    let mut notes = Vec::new();
    for (problem, nvar) in [("linefront", 1), ("dtlz1", 6)] {
        let start = Instant::now();
        let out = sweep(
            &root.join(format!("contrast-{problem}")),
            &[
                ("problem", problem.into()),
                ("nvar", nvar.to_string()),
                ("nobj", "2".into()),
                ("scheme", "both".into()),
                ("pop", "9".into()),
                // 10,000 generations of (mu+mu) at mu = 9
                ("evals", "90009".into()),
                ("seed", "0".into()),
                ("runs", "10".into()),
            ],
        );
        let lower = out.aggregate["paired_mu1_lower"].as_u64().unwrap();
        pass &= lower >= 8;
        notes.push(format!(
            "{problem}: mu1 lower in {lower}/10, {:.2?}",
            start.elapsed()
        ));
    }
    verdict(pass, notes.join("; "))
}

fn three_objective_min_cd(root: &Path) -> Verdict {
    let start = Instant::now();
    let out = sweep(
        &root.join("dtlz1-3"),
        &[
            ("problem", "dtlz1".into()),
            ("nvar", "7".into()),
            ("nobj", "3".into()),
            ("scheme", "both".into()),
            ("pop", "100".into()),
            ("evals", "1000000".into()),
            ("seed", "0".into()),
            ("runs", "10".into()),
        ],
    );
    let elapsed = start.elapsed();
    let min_cd = |scheme: &str, seed: u64| {
        out.runs
            .iter()
            .find(|r| r.scheme.name() == scheme && r.seed == seed)
            .map(|r| r.metrics.min_finite_cd)
            .unwrap()
    };
    let wins = (0..10)
        .filter(|&s| min_cd("mu1", s) > min_cd("mumu", s))
        .count();
    let mean = |scheme: &str| (0..10).map(|s| min_cd(scheme, s).to_f64()).sum::<f64>() / 10.0;
    verdict(
        wins >= 7 && elapsed < Duration::from_secs(600),
        format!(
            "mu1 larger in {wins}/10 seeds (mean {:.4} vs {:.4}), {elapsed:.2?}",
            mean("mu1"),
            mean("mumu")
        ),
    )
}

fn oracle_suites(root: &Path) -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut sort_mismatch = 0;
    for _ in 0..200 {
        let m = rng.gen_range(2..=3);
        let size = rng.gen_range(1..=64);
        let pop: Vec<Vec<f64>> = (0..size)
            .map(|_| {
                (0..m)
                    .map(|_| f64::from(rng.gen_range(0..8u8)) / 7.0)
                    .collect()
            })
            .collect();
        if non_dominated_sort(&pop).unwrap() != peel_fronts_oracle(&pop).unwrap() {
            sort_mismatch += 1;
        }
    }

    let cfg = VariationConfig::<f64>::standard(4).unwrap();
    let mut stream = RandomStream::from_seed(9);
    let (mut mean_violations, mut bound_violations) = (0, 0);
    let (mut parent_sum, mut child_sum) = (0.0, 0.0);
    for _ in 0..100_000 {
        let p1: Vec<f64> = (0..4).map(|_| rng.gen()).collect();
        let p2: Vec<f64> = (0..4).map(|_| rng.gen()).collect();
        let (c1, c2) = sbx_crossover(&p1, &p2, &cfg, &mut stream).unwrap();
        for i in 0..4 {
            let clipped = [c1[i], c2[i]].iter().any(|&c| c == 0.0 || c == 1.0);
            if !clipped && (c1[i] + c2[i] - p1[i] - p2[i]).abs() > 1e-12 {
                mean_violations += 1;
            }
            parent_sum += p1[i] + p2[i];
            child_sum += c1[i] + c2[i];
        }
        let y = polynomial_mutation(&c1, &cfg, &mut stream).unwrap();
        bound_violations += y.iter().filter(|v| !(0.0..=1.0).contains(*v)).count();
    }
    let drift = (child_sum - parent_sum).abs() / parent_sum;

    let settings = resolve_run(&manifest(&[
        ("problem", "dtlz2".into()),
        ("nobj", "3".into()),
        ("scheme", "mu1".into()),
        ("pop", "12".into()),
        ("evals", "3012".into()),
        ("seed", "77".into()),
        ("snapshot_every", "1000".into()),
        ("out", root.join("determinism").display().to_string()),
    ]))
    .unwrap();
    let read = |p: &Path| fs::read(p).unwrap();
    let first = cmd_run(&settings).unwrap();
    let (csv1, json1) = (read(&first.population_path), read(&first.metrics_path));
    let second = cmd_run(&settings).unwrap();
    let identical = csv1 == read(&second.population_path) && json1 == read(&second.metrics_path);

    verdict(
        sort_mismatch == 0 && mean_violations == 0 && bound_violations == 0 && drift < 1e-3 && identical,
        format!(
            "sort mismatches {sort_mismatch}/200; SBX mean violations {mean_violations}, relative drift {drift:.2e}; \
             mutation bound violations {bound_violations}; identical outputs {identical}"
        ),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Verdict + 'a>);

fn main() {
    let scratch = tempfile::tempdir().expect("scratch directory");
    let root = scratch.path();
    let criteria: Vec<Criterion> = vec![
        ("maximin catalog", Box::new(maximin_catalog)),
        ("crowding hand-checks", Box::new(crowding_hand_checks)),
        ("removal-policy separation", Box::new(removal_separation)),
        (
            "duplicate-extreme tie-break",
            Box::new(duplicate_extremes_tie_break),
        ),
        (
            "(mu+1) uniformity",
            Box::new(|| steady_state_uniformity(root)),
        ),
        ("scheme contrast", Box::new(|| scheme_contrast(root))),
        (
            "3-objective minimum crowding distance",
            Box::new(|| three_objective_min_cd(root)),
        ),
        ("oracle suites", Box::new(|| oracle_suites(root))),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        failures += usize::from(!v.pass);
        println!(
            "{} {}. {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            i + 1,
            v.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
