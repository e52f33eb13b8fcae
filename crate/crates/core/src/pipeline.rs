//! End to end: sample `H`, grow a rainbow path forest in the remaining
//! colours, extend the first path by rotations, then close it with an
//! `H`-edge between its first and last `b` vertices.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::colouring::{ColourSet, ColourSubgraph, HostKind, ProperEdgeColouring, Vertex};
use crate::error::{Error, Result};
use crate::forest::{build_forest_with, plan_forest, ForestGoal, PathForest};
use crate::oracle::{verify_rainbow_cycle, verify_rainbow_path};
use crate::rng::{stream, sub_seed};
use crate::rotation::{rotate_extend, RotationCase, RotationOutcome, RotationParams};
use crate::sampling::sample_colours;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineParams {
    pub alpha: f64,
    pub seed: u64,
    pub h_resample_attempts: usize,
}

impl Default for PipelineParams {
    fn default() -> Self {
        PipelineParams { alpha: 1.0, seed: 0, h_resample_attempts: 5 }
    }
}

/// Sizes resolved for a particular `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedParams {
    pub n: usize,
    pub b: usize,
    pub p: f64,
    pub r: usize,
    pub gamma: f64,
    pub m: usize,
    pub max_rotations: usize,
}

impl PipelineParams {
    pub fn with_seed(alpha: f64, seed: u64) -> Self {
        PipelineParams { alpha, seed, ..Default::default() }
    }

    /// `m` is capped at `floor(b / 2r)` so that `2mr <= b`.
    pub fn derive(&self, n: usize) -> Result<DerivedParams> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::ParamsInfeasible(format!("alpha must be positive, got {}", self.alpha)));
        }
        if n < 3 {
            return Err(Error::ParamsInfeasible(format!("n = {n} is too small for a cycle")));
        }
        let nf = n as f64;
        let b = (self.alpha * nf.powf(0.75) - 1e-9).ceil() as usize;
        let p = (4.5 * b as f64 / nf).min(0.5);
        let r = (nf.powf(0.25) - 1e-9).ceil() as usize;
        let m = ((0.5 * nf.sqrt() - 1e-9).ceil() as usize).min(b / (2 * r));
        let max_rotations = (2.0 * nf.sqrt() - 1e-9).ceil() as usize;
        if b == 0 || m == 0 || 2 * m * r > b {
            return Err(Error::ParamsInfeasible(format!(
                "need m >= 1 and 2 m r <= b; got b = {b}, r = {r}, m = {m} at n = {n}, alpha = {}",
                self.alpha
            )));
        }
        if !(p > 0.0 && p <= 0.5) {
            return Err(Error::ParamsInfeasible(format!("p = {p} outside (0, 1/2]")));
        }
        Ok(DerivedParams { n, b, p, r, gamma: r as f64 / nf, m, max_rotations })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamsEcho {
    pub alpha: f64,
    pub seed: u64,
    pub h_resample_attempts: usize,
    pub n: usize,
    pub b: usize,
    pub p: f64,
    pub r: usize,
    pub gamma: f64,
    pub m: usize,
    pub max_rotations: usize,
    pub delta: f64,
    pub h_attempts_used: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub iteration: usize,
    pub outcome: String,
    pub case_tag: Option<RotationCase>,
    pub p1_length: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub params: ParamsEcho,
    pub h_colour_count: usize,
    pub h_degree_min: usize,
    pub h_degree_max: usize,
    pub forest_edges_initial: usize,
    pub rotation_trace: Vec<TraceEntry>,
    pub colours_deleted_total: usize,
    pub final_path_length: usize,
    /// Open path left when no closing edge exists; empty otherwise.
    pub final_path: Vec<Vertex>,
    pub closing_edge: Option<(Vertex, Vertex)>,
    pub cycle: Vec<Vertex>,
    pub cycle_length: usize,
    pub rainbow_verified: bool,
    pub wallclock_ms: u64,
}

impl RunReport {
    pub fn has_cycle(&self) -> bool {
        !self.cycle.is_empty()
    }
}

/// Extends the endpoint by the smallest unvisited neighbour on an unused colour.
pub fn greedy_path(colouring: &ProperEdgeColouring, start: Vertex) -> Vec<Vertex> {
    let n = colouring.vertex_count();
    let mut visited = vec![false; n];
    let mut used = vec![false; colouring.colour_count()];
    let mut path = vec![start];
    visited[start] = true;
    loop {
        let last = *path.last().unwrap();
        let row = colouring.row(last);
        let next = (0..n).find(|&u| !visited[u] && colouring.colour(last, u).is_some_and(|c| !used[c as usize]));
        let Some(u) = next else { break };
        used[row[u] as usize] = true;
        visited[u] = true;
        path.push(u);
    }
    path
}

/// Edge count of the greedy path from vertex 0.
pub fn greedy_length(colouring: &ProperEdgeColouring) -> usize {
    greedy_path(colouring, 0).len().saturating_sub(1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedCycle {
    pub cycle: Vec<Vertex>,
    /// Path positions `(i, j)` of the closing edge.
    pub positions: (usize, usize),
    pub closing_edge: (Vertex, Vertex),
}

/// Longest cycle `path[i..=j]` closed by an `H`-edge with `i < b`,
/// `j >= len - b` and a colour absent from the path; ties go to the smaller
/// `(i, j)`.
pub fn close_cycle(path: &[Vertex], h: &ColourSubgraph<'_>, b: usize) -> Result<ClosedCycle> {
    let len = path.len();
    let base = h.base();
    let mut on_path = vec![false; base.colour_count()];
    for w in path.windows(2) {
        if let Some(c) = base.colour(w[0], w[1]) {
            on_path[c as usize] = true;
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for i in 0..b.min(len) {
        for j in (len.saturating_sub(b).max(i + 2)..len).rev() {
            if best.is_some_and(|(bi, bj)| j - i <= bj - bi) {
                break;
            }
            if h.colour(path[i], path[j]).is_some_and(|c| !on_path[c as usize]) {
                best = Some((i, j));
                break;
            }
        }
    }
    let (i, j) = best.ok_or(Error::NoClosingEdge { b })?;
    Ok(ClosedCycle { cycle: path[i..=j].to_vec(), positions: (i, j), closing_edge: (path[i], path[j]) })
}

fn with_first_reversed(colouring: &ProperEdgeColouring, forest: &PathForest) -> Result<PathForest> {
    let mut paths = forest.paths().to_vec();
    paths[0].reverse();
    PathForest::from_paths(colouring, paths)
}

struct Sampled {
    h: ColourSet,
    g: ColourSet,
    delta: f64,
    attempts: usize,
}

fn sample_h(colouring: &ProperEdgeColouring, params: &PipelineParams, d: &DerivedParams) -> Result<Sampled> {
    let nf = d.n as f64;
    let mut last_err = None;
    for attempt in 0..params.h_resample_attempts.max(1) {
        let h = sample_colours(colouring, d.p, sub_seed(params.seed, stream::EXPANDER, attempt as u64))?;
        let g = colouring.complement_colours(&h)?;
        let max_h = colouring.restrict(h.clone())?.max_degree();
        let delta = d.gamma.max((max_h + 1) as f64 / nf);
        match plan_forest(&colouring.restrict(g.clone())?, d.gamma, delta) {
            Ok(_) => return Ok(Sampled { h, g, delta, attempts: attempt + 1 }),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

pub fn run(colouring: &ProperEdgeColouring, params: &PipelineParams) -> Result<RunReport> {
    let clock = Instant::now();
    if colouring.host().kind != HostKind::Complete {
        return Err(Error::InvalidHost("the pipeline runs on complete hosts only".into()));
    }
    let d = params.derive(colouring.vertex_count())?;
    let rot = RotationParams::new(d.b, d.m, d.r)?;
    let sampled = sample_h(colouring, params, &d)?;

    let g = colouring.restrict(sampled.g.clone())?;
    let forest = build_forest_with(&g, d.gamma, sampled.delta, ForestGoal::Exhaustive)?;
    let forest_edges_initial = forest.edge_count();
    let mut paths = forest.into_paths();
    paths.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
    let mut forest = PathForest::from_paths(colouring, paths)?;

    let h_full = colouring.restrict(sampled.h.clone())?;
    let (h_degree_min, h_degree_max) = (h_full.min_degree(), h_full.max_degree());
    let mut h_live = sampled.h.clone();
    let mut trace = Vec::new();
    let mut deleted = 0;
    for iteration in 1..=d.max_rotations {
        let h = colouring.restrict(h_live.clone())?;
        let mut outcome = rotate_extend(&forest, &h, &rot)?;
        if outcome == RotationOutcome::Stuck {
            let flipped = with_first_reversed(colouring, &forest)?;
            outcome = rotate_extend(&flipped, &h, &rot)?;
        }
        match outcome {
            RotationOutcome::Extended { forest: next, e1, e2, case_tag } => {
                for (u, v) in [e1, e2] {
                    let c = colouring.colour(u, v).expect("H edge");
                    deleted += usize::from(h_live.remove(c));
                }
                forest = next;
                trace.push(TraceEntry {
                    iteration,
                    outcome: "extended".into(),
                    case_tag: Some(case_tag),
                    p1_length: forest.path(0).len(),
                });
            }
            other => {
                trace.push(TraceEntry {
                    iteration,
                    outcome: other.kind().into(),
                    case_tag: None,
                    p1_length: forest.path(0).len(),
                });
                break;
            }
        }
    }

    let path = forest.path(0).to_vec();
    if !verify_rainbow_path(colouring, &path).rainbow {
        return Err(Error::Internal("rotated path is not rainbow".into()));
    }
    let h = colouring.restrict(h_live)?;
    let (final_path, closing_edge, cycle, rainbow_verified) = match close_cycle(&path, &h, d.b) {
        Ok(closed) => {
            let verdict = verify_rainbow_cycle(colouring, &closed.cycle);
            (Vec::new(), Some(closed.closing_edge), closed.cycle, verdict.rainbow)
        }
        Err(Error::NoClosingEdge { .. }) => (path.clone(), None, Vec::new(), false),
        Err(e) => return Err(e),
    };

    Ok(RunReport {
        params: ParamsEcho {
            alpha: params.alpha,
            seed: params.seed,
            h_resample_attempts: params.h_resample_attempts,
            n: d.n,
            b: d.b,
            p: d.p,
            r: d.r,
            gamma: d.gamma,
            m: d.m,
            max_rotations: d.max_rotations,
            delta: sampled.delta,
            h_attempts_used: sampled.attempts,
        },
        h_colour_count: sampled.h.len(),
        h_degree_min,
        h_degree_max,
        forest_edges_initial,
        rotation_trace: trace,
        colours_deleted_total: deleted,
        final_path_length: path.len(),
        final_path,
        closing_edge,
        cycle_length: cycle.len(),
        cycle,
        rainbow_verified,
        wallclock_ms: clock.elapsed().as_millis() as u64,
    })
}
