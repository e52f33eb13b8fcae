//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use serde::Deserialize;

use rainbow_core::colouring::{ColourSubgraph, ProperEdgeColouring, Vertex};
use rainbow_core::family::{FamilyRegistry, GenRequest};
use rainbow_core::forest::{build_forest, build_forest_with, ForestGoal, PathForest};
use rainbow_core::generators::{random_proper, round_robin, xor_factorization};
use rainbow_core::oracle::{
    has_rainbow_hamiltonian_path, longest_rainbow_cycle_exact, max_rainbow_forest_exact, verify_forest,
    verify_rainbow_cycle, verify_rainbow_path,
};
use rainbow_core::pipeline::{greedy_length, greedy_path, run, PipelineParams, RunReport};
use rainbow_core::rng::SplitMix64;
use rainbow_core::rotation::{rotate_extend, RotationOutcome, RotationParams};
use rainbow_core::sampling::{expansion_probe_detailed, sample_colours};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

// 1. Generator validity.

fn perfect_matching_classes(col: &ProperEdgeColouring) -> bool {
    let n = col.vertex_count();
    col.colour_count() == n - 1
        && (0..col.colour_count() as u32).all(|c| {
            let class = col.class(c);
            let touched: HashSet<u32> = class.iter().flat_map(|&(u, v)| [u, v]).collect();
            class.len() == n / 2 && touched.len() == n
        })
}

fn criterion_1() -> Verdict {
    let clock = Instant::now();
    let registry = FamilyRegistry::builtin();
    let mut checked = 0;
    let mut failures = Vec::new();
    for n in [2usize, 4, 6, 8, 16, 32, 64] {
        for family in ["roundrobin", "xor", "random", "latin"] {
            let fam = registry.get(family).unwrap();
            if !fam.supports(n) {
                continue;
            }
            let col = fam.generate(&GenRequest::new(n, n as u64)).unwrap();
            checked += 1;
            if !col.validate().is_empty() {
                failures.push(format!("{family} n={n}: violations"));
            }
            if (family == "roundrobin" || family == "xor") && !perfect_matching_classes(&col) {
                failures.push(format!("{family} n={n}: classes are not n-1 perfect matchings"));
            }
        }
    }
    let elapsed = clock.elapsed();
    let pass = failures.is_empty() && elapsed < Duration::from_secs(10);
    verdict(pass, format!("{checked} instances, failures {failures:?}, {elapsed:.2?}"))
}

// 2. Counterexample reproduction.

fn criterion_2() -> Verdict {
    let clock = Instant::now();
    let xor4 = has_rainbow_hamiltonian_path(&xor_factorization(2).unwrap()).unwrap().exists;
    let xor8 = has_rainbow_hamiltonian_path(&xor_factorization(3).unwrap()).unwrap().exists;
    let rr4_col = round_robin(4).unwrap();
    let rr4 = has_rainbow_hamiltonian_path(&rr4_col).unwrap();
    let witness_ok = rr4.witness.as_ref().is_some_and(|w| w.len() == 4 && verify_rainbow_path(&rr4_col, w).rainbow);
    let elapsed = clock.elapsed();
    let pass = !xor4 && !xor8 && rr4.exists && witness_ok && elapsed < Duration::from_secs(60);
    verdict(
        pass,
        format!("xor K4 {xor4}, xor K8 {xor8}, round-robin K4 {} (witness verified {witness_ok}), {elapsed:.2?}", rr4.exists),
    )
}

// 3. Greedy bound.

fn criterion_3() -> Verdict {
    let mut worst: Option<(usize, u64, usize, usize)> = None;
    let mut paths = 0usize;
    for n in [31usize, 64, 255, 256] {
        for seed in 0..100u64 {
            let col = random_proper(n, seed).unwrap();
            let starts: Vec<Vertex> = if n <= 64 { (0..n).collect() } else { vec![0] };
            for s in starts {
                let path = greedy_path(&col, s);
                paths += 1;
                let edges = path.len() - 1;
                if 2 * edges + 2 < n || !verify_rainbow_path(&col, &path).rainbow {
                    worst.get_or_insert((n, seed, s, edges));
                }
            }
        }
    }
    verdict(worst.is_none(), format!("{paths} greedy paths, first violation {worst:?}"))
}

// 4. Path forest at desk parameters.

fn forest_run(n: usize, family: &str) -> (usize, usize, Vec<Vec<Vertex>>, Duration) {
    let col = FamilyRegistry::builtin().generate(family, &GenRequest::new(n, 1)).unwrap();
    let clock = Instant::now();
    let forest = build_forest(&col.full_subgraph(), 0.02, 0.15).unwrap();
    let elapsed = clock.elapsed();
    (forest.path_count(), forest.edge_count(), forest.into_paths(), elapsed)
}

fn criterion_4_data() -> Vec<(usize, &'static str, usize, usize, Vec<Vec<Vertex>>)> {
    let mut out = Vec::new();
    for n in [512usize, 2048] {
        for family in ["roundrobin", "random"] {
            let (paths, edges, forest, _) = forest_run(n, family);
            out.push((n, family, paths, edges, forest));
        }
    }
    out
}

fn criterion_4() -> Verdict {
    let mut lines = Vec::new();
    let mut pass = true;
    for n in [512usize, 2048] {
        for family in ["roundrobin", "random"] {
            let (paths, edges, forest, elapsed) = forest_run(n, family);
            let col = FamilyRegistry::builtin().generate(family, &GenRequest::new(n, 1)).unwrap();
            let max_paths = (0.02 * n as f64 - 1e-9).ceil() as usize;
            let min_edges = ((1.0 - 0.6) * n as f64 - 1e-9).ceil() as usize;
            let ok = paths <= max_paths
                && edges >= min_edges
                && verify_forest(&col, &forest).rainbow
                && elapsed < Duration::from_secs(30);
            pass &= ok;
            lines.push(format!("{family} n={n}: {paths}/{max_paths} paths, {edges}/{min_edges} edges, {elapsed:.2?}"));
        }
    }
    verdict(pass, lines.join("; "))
}

// 5. Rotation-step contract.

/// Random rainbow path forest in `g`: random heads, random greedy walks.
fn random_forest(g: &ColourSubgraph<'_>, rng: &mut SplitMix64) -> PathForest {
    let n = g.vertex_count();
    let mut order: Vec<Vertex> = (0..n).collect();
    rng.shuffle(&mut order);
    let count = 2 + rng.below(4);
    let mut used_v = vec![false; n];
    let mut used_c = HashSet::new();
    let mut paths = Vec::new();
    for &head in order.iter().take(count) {
        if used_v[head] {
            continue;
        }
        used_v[head] = true;
        let mut path = vec![head];
        let cap = 1 + rng.below(n);
        while path.len() < cap {
            let last = *path.last().unwrap();
            let options: Vec<(Vertex, u32)> =
                g.neighbours(last).filter(|&(v, c)| !used_v[v] && !used_c.contains(&c)).collect();
            if options.is_empty() {
                break;
            }
            let (v, c) = options[rng.below(options.len())];
            used_v[v] = true;
            used_c.insert(c);
            path.push(v);
        }
        paths.push(path);
    }
    PathForest::from_paths(g.base(), paths).unwrap()
}

/// Exhaustive builder output with a random path moved to the front.
fn built_forest(g: &ColourSubgraph<'_>, h_colours: &rainbow_core::ColourSet, rng: &mut SplitMix64) -> PathForest {
    let col = g.base();
    let n = g.vertex_count() as f64;
    let gamma = (2 + rng.below(5)) as f64 / n;
    let h_max = col.restrict(h_colours.clone()).unwrap().max_degree();
    let delta = gamma.max((h_max + 1) as f64 / n);
    match build_forest_with(g, gamma, delta, ForestGoal::Exhaustive) {
        Ok(forest) => {
            let mut paths = forest.into_paths();
            let k = rng.below(paths.len());
            paths.swap(0, k);
            PathForest::from_paths(col, paths).unwrap()
        }
        Err(_) => random_forest(g, rng),
    }
}

fn norm(e: (Vertex, Vertex)) -> (Vertex, Vertex) {
    (e.0.min(e.1), e.0.max(e.1))
}

fn edge_set(forest: &PathForest) -> HashSet<(Vertex, Vertex)> {
    forest.edges().map(norm).collect()
}

#[derive(Debug, Default, PartialEq, Eq, Clone)]
struct RotationTally {
    extended: usize,
    done: usize,
    stuck: usize,
    violations: Vec<String>,
    fingerprint: Vec<(String, usize)>,
}

fn criterion_5_data() -> RotationTally {
    let mut tally = RotationTally::default();
    for instance in 0..1000u64 {
        let mut rng = SplitMix64::new(0xACCE_5500 + instance);
        let n = 24 + rng.below(105);
        let col = random_proper(n, rng.next_u64()).unwrap();
        let p = 0.02 + 0.5 * rng.next_f64();
        let h_colours = sample_colours(&col, p, rng.next_u64()).unwrap();
        let g = col.restrict(col.complement_colours(&h_colours).unwrap()).unwrap();
        let forest = if instance % 2 == 0 { random_forest(&g, &mut rng) } else { built_forest(&g, &h_colours, &mut rng) };
        let m = 1 + rng.below(2);
        let r = forest.path_count();
        let b = 2 * m * r + rng.below(2);
        let params = RotationParams::new(b, m, r).unwrap();
        let h = col.restrict(h_colours).unwrap();
        let outcome = rotate_extend(&forest, &h, &params).unwrap();
        let p1 = forest.path(0).len();
        tally.fingerprint.push((outcome.kind().to_string(), p1));
        match outcome {
            RotationOutcome::Extended { forest: next, e1, e2, .. } => {
                tally.extended += 1;
                let before = edge_set(&forest);
                let allowed: HashSet<_> = [norm(e1), norm(e2)].into_iter().collect();
                let added_ok = edge_set(&next).iter().all(|e| before.contains(e) || allowed.contains(e));
                let in_h = h.has_edge(e1.0, e1.1) && h.has_edge(e2.0, e2.1);
                let grew = next.path(0).len() >= p1 + m;
                let rainbow = verify_forest(&col, next.paths()).rainbow;
                if !(added_ok && in_h && grew && rainbow) {
                    tally.violations.push(format!("instance {instance}: extended contract"));
                }
            }
            RotationOutcome::Done => {
                tally.done += 1;
                if p1 + 2 * b < forest.vertex_count() {
                    tally.violations.push(format!("instance {instance}: done too early"));
                }
            }
            RotationOutcome::Stuck => tally.stuck += 1,
        }
    }
    tally
}

fn criterion_5() -> Verdict {
    let t = criterion_5_data();
    verdict(
        t.violations.is_empty(),
        format!("extended {}, done {}, stuck {}, violations {:?}", t.extended, t.done, t.stuck, t.violations),
    )
}

// 6. End-to-end pipeline against the pilot floor.

#[derive(Deserialize)]
struct PilotRun {
    seed: u64,
    cycle_length: usize,
}

#[derive(Deserialize)]
struct Pilot {
    family: String,
    n: usize,
    alpha: f64,
    runs: Vec<PilotRun>,
}

fn pilot() -> Pilot {
    serde_json::from_str(include_str!("fixtures/pilot_floor.json")).unwrap()
}

fn pipeline_run(pilot: &Pilot, seed: u64) -> (RunReport, usize, Duration) {
    let col = FamilyRegistry::builtin().generate(&pilot.family, &GenRequest::new(pilot.n, seed)).unwrap();
    let clock = Instant::now();
    let mut report = run(&col, &PipelineParams::with_seed(pilot.alpha, seed)).unwrap();
    let elapsed = clock.elapsed();
    assert!(!report.has_cycle() || verify_rainbow_cycle(&col, &report.cycle).rainbow);
    report.wallclock_ms = 0;
    (report, greedy_length(&col), elapsed)
}

fn criterion_6_data() -> Vec<RunReport> {
    let pilot = pilot();
    pilot.runs.iter().map(|r| pipeline_run(&pilot, r.seed).0).collect()
}

fn criterion_6() -> Verdict {
    let pilot = pilot();
    let mut pass = true;
    let mut lines = Vec::new();
    for floor in &pilot.runs {
        let (report, greedy, elapsed) = pipeline_run(&pilot, floor.seed);
        let verified = report.rainbow_verified;
        let beats_greedy = report.cycle_length >= greedy;
        let above_floor = report.cycle_length >= floor.cycle_length;
        let in_time = elapsed < Duration::from_secs(300);
        pass &= verified && beats_greedy && above_floor && in_time;
        lines.push(format!(
            "seed {}: cycle {} greedy {} floor {} verified {verified} ({elapsed:.2?})",
            floor.seed, report.cycle_length, greedy, floor.cycle_length
        ));
    }
    verdict(pass, lines.join("; "))
}

// 7. Random-colour expansion.

fn criterion_7_data() -> Vec<(f64, Vec<f64>)> {
    let col = round_robin(4096).unwrap();
    (0..20u64)
        .map(|s| {
            let sample = expansion_probe_detailed(&col, 0.25, 1200, 50, 0.15, s).unwrap();
            (sample.report.min_degree_ratio, sample.trial_ratios)
        })
        .collect()
}

fn criterion_7() -> Verdict {
    let clock = Instant::now();
    let data = criterion_7_data();
    let degree_ok = data.iter().all(|(d, _)| *d >= 0.85);
    let trials: Vec<f64> = data.iter().flat_map(|(_, t)| t.iter().copied()).collect();
    let good = trials.iter().filter(|&&r| r >= 0.85).count();
    let min_degree = data.iter().map(|(d, _)| *d).fold(f64::INFINITY, f64::min);
    let elapsed = clock.elapsed();
    let pass = degree_ok && good * 100 >= 95 * trials.len() && elapsed < Duration::from_secs(600);
    verdict(
        pass,
        format!("min degree ratio {min_degree:.4}, {good}/{} trials >= 0.85, {elapsed:.2?}", trials.len()),
    )
}

// 8. Oracle consistency.

/// Independent re-check: quadratic scans, no shared helpers.
fn naive_check(col: &ProperEdgeColouring, seq: &[Vertex], closed: bool) -> (bool, bool) {
    let n = col.vertex_count();
    if seq.is_empty() || (closed && seq.len() < 3) || seq.iter().any(|&v| v >= n) {
        return (false, false);
    }
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] == seq[j] {
                return (false, false);
            }
        }
    }
    let mut colours = Vec::new();
    let k = if closed { seq.len() } else { seq.len() - 1 };
    for i in 0..k {
        match col.colour(seq[i], seq[(i + 1) % seq.len()]) {
            Some(c) => colours.push(c),
            None => return (false, false),
        }
    }
    for i in 0..colours.len() {
        for j in i + 1..colours.len() {
            if colours[i] == colours[j] {
                return (true, false);
            }
        }
    }
    (true, true)
}

fn oracle_fixtures() -> Vec<(String, ProperEdgeColouring)> {
    let mut out = Vec::new();
    for n in [4usize, 6, 8] {
        out.push((format!("roundrobin {n}"), round_robin(n).unwrap()));
    }
    for k in [2u32, 3] {
        out.push((format!("xor {}", 1 << k), xor_factorization(k).unwrap()));
    }
    for n in 3..=9usize {
        for seed in 0..3u64 {
            out.push((format!("random {n}/{seed}"), random_proper(n, seed).unwrap()));
        }
    }
    out
}

fn criterion_8() -> Verdict {
    let fixtures = oracle_fixtures();
    let mut problems = Vec::new();
    let (mut pipeline_cycles, mut forests, mut checks) = (0, 0, 0);
    for (name, col) in &fixtures {
        let n = col.vertex_count();
        let exact = longest_rainbow_cycle_exact(col).unwrap();
        for seed in 0..3u64 {
            if let Ok(report) = run(col, &PipelineParams::with_seed(1.0, seed)) {
                if report.has_cycle() {
                    pipeline_cycles += 1;
                    if report.cycle_length > exact.length {
                        problems.push(format!("{name}: pipeline cycle {} > exact {}", report.cycle_length, exact.length));
                    }
                }
            }
        }
        for r in 1..=2usize.min(n) {
            let gamma = r as f64 / n as f64;
            let delta = gamma.max(0.5);
            let full = col.full_subgraph();
            if let Ok(forest) = build_forest_with(&full, gamma, delta, ForestGoal::Exhaustive) {
                forests += 1;
                let best = max_rainbow_forest_exact(&full, r).unwrap().edges;
                if forest.edge_count() > best {
                    problems.push(format!("{name} r={r}: forest {} > exact {best}", forest.edge_count()));
                }
            }
        }
        let mut rng = SplitMix64::new(n as u64 * 31 + exact.length as u64);
        let mut sequences: Vec<Vec<Vertex>> = vec![exact.witness.clone(), greedy_path(col, 0)];
        for _ in 0..40 {
            let len = 1 + rng.below(n + 1);
            sequences.push((0..len).map(|_| rng.below(n + 1)).collect());
            let mut perm: Vec<Vertex> = (0..n).collect();
            rng.shuffle(&mut perm);
            perm.truncate(len.min(n));
            sequences.push(perm);
        }
        for seq in &sequences {
            for closed in [false, true] {
                checks += 1;
                let v = if closed { verify_rainbow_cycle(col, seq) } else { verify_rainbow_path(col, seq) };
                if (v.valid_structure, v.rainbow) != naive_check(col, seq, closed) {
                    problems.push(format!("{name}: verdict mismatch on {seq:?} closed={closed}"));
                }
            }
        }
        let greedy = greedy_path(col, 0).len() - 1;
        if 2 * greedy + 2 < n {
            problems.push(format!("{name}: greedy path of {greedy} edges"));
        }
    }
    let pass = problems.is_empty() && fixtures.len() >= 20;
    verdict(
        pass,
        format!(
            "{} fixtures, {pipeline_cycles} pipeline cycles, {forests} forests, {checks} verdict checks, problems {problems:?}",
            fixtures.len()
        ),
    )
}

// 9. Determinism across repeats of 4 to 7.

fn criterion_9() -> Verdict {
    let mut same = [true; 4];
    let c4 = criterion_4_data();
    let c5 = criterion_5_data();
    let c6 = criterion_6_data();
    let c7 = criterion_7_data();
    for _ in 0..2 {
        same[0] &= criterion_4_data() == c4;
        same[1] &= criterion_5_data() == c5;
        same[2] &= criterion_6_data() == c6;
        same[3] &= criterion_7_data() == c7;
    }
    verdict(same.iter().all(|&s| s), format!("3 repeats identical for criteria 4..7: {same:?}"))
}

fn main() {
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(u32, &str, fn() -> Verdict); 9] = [
        (1, "generator validity", criterion_1),
        (2, "counterexample reproduction", criterion_2),
        (3, "greedy bound", criterion_3),
        (4, "path forest", criterion_4),
        (5, "rotation-step contract", criterion_5),
        (6, "end-to-end pipeline", criterion_6),
        (7, "random-colour expansion", criterion_7),
        (8, "oracle consistency", criterion_8),
        (9, "determinism", criterion_9),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str()) || *f == id.to_string()) {
            continue;
        }
        let v = check();
        let status = if v.pass { "PASS" } else { "FAIL" };
        println!("{status} {id} {name}: {}", v.detail);
        failed += usize::from(!v.pass);
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
