//! Rainbow path forests and the augmenting-chain procedure that grows them.
//!
//! A forest with at most `r` paths is grown one edge at a time. For each
//! head `v_i` (first vertex of path `i`) the colour sets
//! `C_0 ⊆ C_1 ⊆ ... ⊆ C_r` are built: `C_0` holds the subgraph colours not on
//! the forest, and `C_i` adds the predecessor-edge colours of the non-head
//! forest vertices reachable from `v_i` through `C_{i-1}`-coloured edges. An
//! edge from `v_i` in `C_{i-1}` to a vertex outside the forest, or to the
//! head of a later path, yields a chain of edge swaps that adds exactly one
//! edge while keeping the forest rainbow.

use serde::{Deserialize, Serialize};

use crate::colouring::{Colour, ColourSet, ColourSubgraph, ProperEdgeColouring, Vertex};
use crate::error::{Error, Result};

/// Vertex-disjoint rainbow paths with colour and position indices.
///
/// `paths[i][0]` is the head of path `i`; the edge entering `paths[i][j]`
/// from `paths[i][j-1]` is that vertex's predecessor edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathForest {
    paths: Vec<Vec<Vertex>>,
    used_colours: ColourSet,
    colour_to_edge: Vec<Option<(u32, u32)>>,
    location: Vec<Option<(u32, u32)>>,
}

impl PathForest {
    /// Builds a forest from explicit paths, checking disjointness, adjacency
    /// in the host and rainbowness. Empty paths are rejected.
    pub fn from_paths(colouring: &ProperEdgeColouring, paths: Vec<Vec<Vertex>>) -> Result<Self> {
        let total = colouring.vertex_count();
        let mut location = vec![None; total];
        let mut colour_to_edge = vec![None; colour_count_of(colouring)];
        let mut used_colours = ColourSet::empty(colouring.colour_count());
        for (i, path) in paths.iter().enumerate() {
            if path.is_empty() {
                return Err(Error::Internal(format!("path {i} is empty")));
            }
            for (j, &v) in path.iter().enumerate() {
                if v >= total {
                    return Err(Error::Internal(format!("vertex {v} out of range")));
                }
                if location[v].is_some() {
                    return Err(Error::Internal(format!("vertex {v} appears twice in the forest")));
                }
                location[v] = Some((i as u32, j as u32));
                if j > 0 {
                    let c = colouring
                        .colour(path[j - 1], v)
                        .ok_or_else(|| Error::Internal(format!("{{{},{v}}} is not a host edge", path[j - 1])))?;
                    if !used_colours.insert(c) {
                        return Err(Error::Internal(format!("colour {c} used twice in the forest")));
                    }
                    colour_to_edge[c as usize] = Some((i as u32, j as u32));
                }
            }
        }
        Ok(PathForest { paths, used_colours, colour_to_edge, location })
    }

    pub fn paths(&self) -> &[Vec<Vertex>] {
        &self.paths
    }

    pub fn into_paths(self) -> Vec<Vec<Vertex>> {
        self.paths
    }

    pub fn path(&self, i: usize) -> &[Vertex] {
        &self.paths[i]
    }

    pub fn path_count(&self) -> usize {
        self.paths.len()
    }

    pub fn head(&self, i: usize) -> Vertex {
        self.paths[i][0]
    }

    pub fn edge_count(&self) -> usize {
        self.used_colours.len()
    }

    /// `|V(P)|`, the number of covered vertices.
    pub fn vertex_count(&self) -> usize {
        self.paths.iter().map(Vec::len).sum()
    }

    pub fn used_colours(&self) -> &ColourSet {
        &self.used_colours
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.location[v].is_some()
    }

    /// `(path index, position)` of a covered vertex.
    pub fn location(&self, v: Vertex) -> Option<(usize, usize)> {
        self.location[v].map(|(i, j)| (i as usize, j as usize))
    }

    /// `(path index, position)` of the vertex whose predecessor edge has colour `c`.
    pub fn edge_with_colour(&self, c: Colour) -> Option<(usize, usize)> {
        self.colour_to_edge.get(c as usize).copied().flatten().map(|(i, j)| (i as usize, j as usize))
    }

    /// Every forest edge as `(predecessor, vertex)`.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.paths.iter().flat_map(|p| p.windows(2).map(|w| (w[0], w[1])))
    }

    /// Checks every forest edge belongs to `g`.
    pub fn check_within(&self, g: &ColourSubgraph<'_>) -> Result<()> {
        for (u, v) in self.edges() {
            if !g.has_edge(u, v) {
                return Err(Error::Internal(format!("forest edge {{{u},{v}}} is not in the working subgraph")));
            }
        }
        Ok(())
    }
}

fn colour_count_of(colouring: &ProperEdgeColouring) -> usize {
    colouring.colour_count()
}

/// `r` singleton paths on vertices `0..r`.
pub fn initial_forest(g: &ColourSubgraph<'_>, r: usize) -> Result<PathForest> {
    if r == 0 || r > g.vertex_count() {
        return Err(Error::InvalidArgument(format!("path budget {r} must be in 1..={}", g.vertex_count())));
    }
    PathForest::from_paths(g.base(), (0..r).map(|v| vec![v]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainStart {
    OutsideForest,
    LaterPathStart,
}

/// The swap sequence `(x_t, i_t, c_t)`.
///
/// Path indices in `i_seq` are 1-based so that `0` can denote `C_0`:
/// `i_seq[t] = k` refers to the head of `paths[k - 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentingChain {
    pub s: usize,
    pub i_seq: Vec<usize>,
    pub x_seq: Vec<Vertex>,
    pub c_seq: Vec<Colour>,
    pub x0_kind: ChainStart,
}

impl AugmentingChain {
    /// `i_0 > i_1 > ... > i_s = 0` and pairwise distinct `x_t`.
    pub fn is_well_formed(&self) -> bool {
        let decreasing = self.i_seq.windows(2).all(|w| w[0] > w[1]);
        let mut xs = self.x_seq.clone();
        xs.sort_unstable();
        xs.dedup();
        decreasing
            && self.i_seq.len() == self.s + 1
            && self.i_seq.last() == Some(&0)
            && self.x_seq.len() == self.s
            && self.c_seq.len() == self.s
            && xs.len() == self.s
    }
}

/// The nested colour sets `C_0 ⊆ C_1 ⊆ ...`, stored as the first level at
/// which each colour enters.
#[derive(Debug, Clone)]
pub struct ColourFrontier {
    level: Vec<u32>,
    base_len: usize,
    len: usize,
}

const ABSENT: u32 = u32::MAX;

impl ColourFrontier {
    /// `C_0`: colours of `g` not used by the forest.
    pub fn new(g: &ColourSubgraph<'_>, forest: &PathForest) -> Self {
        let mut level = vec![ABSENT; g.base().colour_count()];
        let mut len = 0;
        for c in g.colours().iter() {
            if !forest.used_colours().contains(c) {
                level[c as usize] = 0;
                len += 1;
            }
        }
        ColourFrontier { level, base_len: len, len }
    }

    /// Whether `c ∈ C_i`.
    #[inline]
    pub fn contains(&self, c: Colour, i: usize) -> bool {
        (self.level[c as usize] as usize) <= i && self.level[c as usize] != ABSENT
    }

    /// Smallest `i` with `c ∈ C_i`.
    pub fn level(&self, c: Colour) -> Option<usize> {
        match self.level[c as usize] {
            ABSENT => None,
            l => Some(l as usize),
        }
    }

    fn add(&mut self, c: Colour, i: usize) {
        if self.level[c as usize] == ABSENT {
            self.level[c as usize] = i as u32;
            self.len += 1;
        }
    }

    /// `m = |C_i| - |C_0|` for the largest level built so far.
    pub fn m(&self) -> usize {
        self.len - self.base_len
    }
}

/// Searches for an augmenting chain; `Ok(None)` when no head triggers.
pub fn find_augmentation(g: &ColourSubgraph<'_>, forest: &PathForest) -> Result<Option<AugmentingChain>> {
    let r = forest.path_count();
    let mut frontier = ColourFrontier::new(g, forest);
    for i in 1..=r {
        let v = forest.head(i - 1);
        let mut trigger = None;
        for (u, c) in g.neighbours(v) {
            if !frontier.contains(c, i - 1) {
                continue;
            }
            match forest.location(u) {
                None => {
                    trigger = Some((u, ChainStart::OutsideForest));
                    break;
                }
                Some((j, 0)) if j + 1 > i => {
                    trigger = Some((u, ChainStart::LaterPathStart));
                    break;
                }
                Some((_, 0)) => {}
                Some((j, pos)) => {
                    let pred = forest.path(j)[pos - 1];
                    let pred_colour = g.base().colour(pred, u).expect("forest edge");
                    frontier.add(pred_colour, i);
                }
            }
        }
        if let Some((x0, kind)) = trigger {
            return unwind_chain(g, forest, &frontier, i, x0, kind).map(Some);
        }
    }
    Ok(None)
}

fn unwind_chain(
    g: &ColourSubgraph<'_>,
    forest: &PathForest,
    frontier: &ColourFrontier,
    i0: usize,
    x0: Vertex,
    x0_kind: ChainStart,
) -> Result<AugmentingChain> {
    let mut i_seq = vec![i0];
    let mut x_seq = vec![x0];
    let mut c_seq = Vec::new();
    loop {
        let it = *i_seq.last().unwrap();
        let xt = *x_seq.last().unwrap();
        let head = forest.head(it - 1);
        let c = g
            .colour(head, xt)
            .ok_or_else(|| Error::Internal(format!("chain edge {{{head},{xt}}} missing from subgraph")))?;
        c_seq.push(c);
        let next = frontier
            .level(c)
            .filter(|&l| l < it)
            .ok_or_else(|| Error::Internal(format!("chain colour {c} not in C_{}", it - 1)))?;
        i_seq.push(next);
        if next == 0 {
            break;
        }
        let (p, pos) = forest
            .edge_with_colour(c)
            .ok_or_else(|| Error::Internal(format!("chain colour {c} not found on the forest")))?;
        x_seq.push(forest.path(p)[pos]);
    }
    let chain = AugmentingChain { s: c_seq.len(), i_seq, x_seq, c_seq, x0_kind };
    if !chain.is_well_formed() {
        return Err(Error::Internal(format!("malformed chain {chain:?}")));
    }
    Ok(chain)
}

/// Performs the swap: adds `v_{i_t} x_t` for every `t`, removes the
/// predecessor edges `e(x_t)` for `t >= 1`, then renormalizes the paths.
pub fn apply_augmentation(forest: &PathForest, chain: &AugmentingChain, g: &ColourSubgraph<'_>) -> Result<PathForest> {
    let stale = |what: String| Error::StaleChain(what);
    if !chain.is_well_formed() {
        return Err(stale("chain is not well formed".into()));
    }
    let r = forest.path_count();
    if chain.i_seq[0] > r {
        return Err(stale(format!("path index {} out of range", chain.i_seq[0])));
    }
    for t in 0..chain.s {
        let head = forest.head(chain.i_seq[t] - 1);
        if g.colour(head, chain.x_seq[t]) != Some(chain.c_seq[t]) {
            return Err(stale(format!("edge {{{head},{}}} no longer has colour {}", chain.x_seq[t], chain.c_seq[t])));
        }
        if t >= 1 {
            let pred_colour = forest.location(chain.x_seq[t]).and_then(|(p, pos)| {
                (pos > 0).then(|| g.base().colour(forest.path(p)[pos - 1], chain.x_seq[t]).expect("forest edge"))
            });
            if pred_colour != Some(chain.c_seq[t - 1]) {
                return Err(stale(format!("vertex {} no longer enters via colour {}", chain.x_seq[t], chain.c_seq[t - 1])));
            }
        }
    }
    let fresh = *chain.c_seq.last().unwrap();
    if forest.used_colours().contains(fresh) || !g.colours().contains(fresh) {
        return Err(stale(format!("closing colour {fresh} is not free")));
    }
    let x0 = chain.x_seq[0];
    match (chain.x0_kind, forest.location(x0)) {
        (ChainStart::OutsideForest, None) => {}
        (ChainStart::LaterPathStart, Some((j, 0))) if j + 1 > chain.i_seq[0] => {}
        _ => return Err(stale(format!("start vertex {x0} changed role"))),
    }

    let total = g.vertex_count();
    let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::new(); total];
    let mut in_forest = vec![false; total];
    for path in forest.paths() {
        for &v in path {
            in_forest[v] = true;
        }
    }
    in_forest[x0] = true;
    let removed: Vec<(Vertex, Vertex)> = chain.x_seq[1..]
        .iter()
        .map(|&x| {
            let (p, pos) = forest.location(x).unwrap();
            (forest.path(p)[pos - 1], x)
        })
        .collect();
    for (u, v) in forest.edges() {
        if !removed.contains(&(u, v)) {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
    }
    for t in 0..chain.s {
        let head = forest.head(chain.i_seq[t] - 1);
        adjacency[head].push(chain.x_seq[t]);
        adjacency[chain.x_seq[t]].push(head);
    }

    let paths = linear_components(&adjacency, &in_forest)?;
    let paths = pad_with_singletons(paths, r, &in_forest);
    let next = PathForest::from_paths(g.base(), paths)?;
    if next.edge_count() != forest.edge_count() + 1 {
        return Err(Error::Internal(format!(
            "augmentation changed edge count from {} to {}",
            forest.edge_count(),
            next.edge_count()
        )));
    }
    Ok(next)
}

/// Splits a max-degree-2 acyclic edge set over `members` into paths, each
/// oriented from its smaller endpoint, ordered by head.
fn linear_components(adjacency: &[Vec<Vertex>], members: &[bool]) -> Result<Vec<Vec<Vertex>>> {
    let mut visited = vec![false; adjacency.len()];
    let mut paths = Vec::new();
    for start in 0..adjacency.len() {
        if !members[start] || visited[start] {
            continue;
        }
        if adjacency[start].len() > 2 {
            return Err(Error::Internal(format!("vertex {start} has degree {}", adjacency[start].len())));
        }
        if adjacency[start].len() == 2 {
            continue;
        }
        let mut path = vec![start];
        visited[start] = true;
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = adjacency[cur].iter().find(|&&w| w != prev) {
            if visited[next] || adjacency[next].len() > 2 {
                return Err(Error::Internal(format!("rebuilt forest is not a path forest at {next}")));
            }
            visited[next] = true;
            path.push(next);
            prev = cur;
            cur = next;
        }
        paths.push(path);
    }
    if let Some(v) = (0..adjacency.len()).find(|&v| members[v] && !visited[v]) {
        return Err(Error::Internal(format!("rebuilt forest has a cycle through {v}")));
    }
    // Each path was entered from its smaller endpoint since starts are scanned upward.
    Ok(paths)
}

/// Tops the decomposition up to `r` paths with the smallest uncovered vertices.
fn pad_with_singletons(mut paths: Vec<Vec<Vertex>>, r: usize, covered: &[bool]) -> Vec<Vec<Vertex>> {
    let mut spare = (0..covered.len()).filter(|&v| !covered[v]);
    while paths.len() < r {
        match spare.next() {
            Some(v) => paths.push(vec![v]),
            None => break,
        }
    }
    paths.sort_by_key(|p| p[0]);
    paths
}

/// How far [`build_forest_with`] keeps augmenting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ForestGoal {
    /// Stop once `|E| >= ceil((1 - 4 delta) n)`.
    Target,
    /// Keep augmenting until no chain exists.
    Exhaustive,
}

/// Parameters resolved from `(gamma, delta, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestPlan {
    pub path_budget: usize,
    pub target_edges: usize,
}

/// Checks the preconditions and derives the path budget and edge target.
pub fn plan_forest(g: &ColourSubgraph<'_>, gamma: f64, delta: f64) -> Result<ForestPlan> {
    let n = g.vertex_count();
    let nf = n as f64;
    if !(gamma > 0.0) {
        return Err(Error::PreconditionFailed(format!("gamma = {gamma} must be positive")));
    }
    if delta < gamma {
        return Err(Error::PreconditionFailed(format!("delta >= gamma fails: {delta} < {gamma}")));
    }
    let slack = 3.0 * gamma * delta - gamma * gamma / 2.0;
    if slack <= 1.0 / nf {
        return Err(Error::PreconditionFailed(format!(
            "3 gamma delta - gamma^2/2 > 1/n fails: {slack:.6} <= {:.6}",
            1.0 / nf
        )));
    }
    let min_degree = g.min_degree();
    let required = (1.0 - delta) * nf;
    if (min_degree as f64) < required {
        return Err(Error::PreconditionFailed(format!(
            "min degree >= (1 - delta) n fails: {min_degree} < {required:.3}"
        )));
    }
    let path_budget = ((gamma * nf - 1e-9).ceil() as usize).clamp(1, n);
    let target = (1.0 - 4.0 * delta) * nf;
    let target_edges = if target <= 0.0 { 0 } else { (target - 1e-9).ceil() as usize };
    Ok(ForestPlan { path_budget, target_edges })
}

/// A rainbow path forest with at most `ceil(gamma n)` paths and at least
/// `ceil((1 - 4 delta) n)` edges.
pub fn build_forest(g: &ColourSubgraph<'_>, gamma: f64, delta: f64) -> Result<PathForest> {
    build_forest_with(g, gamma, delta, ForestGoal::Target)
}

pub fn build_forest_with(g: &ColourSubgraph<'_>, gamma: f64, delta: f64, goal: ForestGoal) -> Result<PathForest> {
    let plan = plan_forest(g, gamma, delta)?;
    let mut forest = initial_forest(g, plan.path_budget)?;
    // Each augmentation adds one edge and a forest has fewer than n edges.
    for _ in 0..g.vertex_count() {
        if goal == ForestGoal::Target && forest.edge_count() >= plan.target_edges {
            break;
        }
        match find_augmentation(g, &forest)? {
            Some(chain) => forest = apply_augmentation(&forest, &chain, g)?,
            None if forest.edge_count() < plan.target_edges => {
                return Err(Error::AugmentationStalled { edges: forest.edge_count(), target: plan.target_edges })
            }
            None => break,
        }
    }
    Ok(forest)
}
