//! Rainbow checkers and exact exponential-time searches for tiny instances.

use serde::{Deserialize, Serialize};

use crate::colouring::{ColourSubgraph, ProperEdgeColouring, Vertex};
use crate::error::{Error, Result};

pub const CYCLE_LIMIT: usize = 10;
pub const HAM_PATH_LIMIT: usize = 10;
pub const FOREST_LIMIT: usize = 9;

/// Edge index (in traversal order) of the first repeated colour and its raw id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColourRepeat {
    pub position: usize,
    pub colour: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationVerdict {
    pub valid_structure: bool,
    pub rainbow: bool,
    pub first_violation: Option<ColourRepeat>,
}

impl VerificationVerdict {
    fn broken() -> Self {
        VerificationVerdict { valid_structure: false, rainbow: false, first_violation: None }
    }
}

fn edges_of(colouring: &ProperEdgeColouring, seq: &[Vertex], closed: bool, seen: &mut [bool]) -> Option<Vec<(Vertex, Vertex)>> {
    let n = colouring.vertex_count();
    for &v in seq {
        if v >= n || seen[v] {
            return None;
        }
        seen[v] = true;
    }
    let mut edges: Vec<_> = seq.windows(2).map(|w| (w[0], w[1])).collect();
    if closed {
        edges.push((seq[seq.len() - 1], seq[0]));
    }
    edges.iter().all(|&(u, v)| colouring.host().is_edge(u, v)).then_some(edges)
}

fn verdict_for(colouring: &ProperEdgeColouring, edges: &[(Vertex, Vertex)]) -> VerificationVerdict {
    let mut used = vec![false; colouring.colour_count()];
    for (position, &(u, v)) in edges.iter().enumerate() {
        let c = colouring.colour(u, v).expect("host edge") as usize;
        if used[c] {
            let colour = colouring.raw_id(c as u32);
            return VerificationVerdict {
                valid_structure: true,
                rainbow: false,
                first_violation: Some(ColourRepeat { position, colour }),
            };
        }
        used[c] = true;
    }
    VerificationVerdict { valid_structure: true, rainbow: true, first_violation: None }
}

pub fn verify_rainbow_path(colouring: &ProperEdgeColouring, path: &[Vertex]) -> VerificationVerdict {
    if path.is_empty() {
        return VerificationVerdict::broken();
    }
    let mut seen = vec![false; colouring.vertex_count()];
    match edges_of(colouring, path, false, &mut seen) {
        Some(edges) => verdict_for(colouring, &edges),
        None => VerificationVerdict::broken(),
    }
}

/// The closing edge `(last, first)` is the final position.
pub fn verify_rainbow_cycle(colouring: &ProperEdgeColouring, cycle: &[Vertex]) -> VerificationVerdict {
    if cycle.len() < 3 {
        return VerificationVerdict::broken();
    }
    let mut seen = vec![false; colouring.vertex_count()];
    match edges_of(colouring, cycle, true, &mut seen) {
        Some(edges) => verdict_for(colouring, &edges),
        None => VerificationVerdict::broken(),
    }
}

/// Paths must be non-empty and vertex-disjoint; positions count edges across
/// all paths in order.
pub fn verify_forest(colouring: &ProperEdgeColouring, paths: &[Vec<Vertex>]) -> VerificationVerdict {
    let mut seen = vec![false; colouring.vertex_count()];
    let mut edges = Vec::new();
    for path in paths {
        if path.is_empty() {
            return VerificationVerdict::broken();
        }
        match edges_of(colouring, path, false, &mut seen) {
            Some(e) => edges.extend(e),
            None => return VerificationVerdict::broken(),
        }
    }
    verdict_for(colouring, &edges)
}

fn check_limit(n: usize, limit: usize) -> Result<()> {
    if n > limit {
        return Err(Error::OverLimit { n, limit });
    }
    Ok(())
}

/// Longest rainbow cycle; `length` counts vertices (equivalently edges).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactCycle {
    pub length: usize,
    pub witness: Vec<Vertex>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonianPathResult {
    pub exists: bool,
    pub witness: Option<Vec<Vertex>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactForest {
    pub edges: usize,
    pub paths: Vec<Vec<Vertex>>,
}

/// Dense adjacency with colours as bit positions; `None` for non-edges.
struct Table {
    n: usize,
    colour: Vec<Option<u64>>,
}

impl Table {
    fn new(n: usize, colour_of: impl Fn(Vertex, Vertex) -> Option<u32>) -> Self {
        let mut colour = vec![None; n * n];
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    colour[u * n + v] = colour_of(u, v).map(|c| 1u64 << c);
                }
            }
        }
        Table { n, colour }
    }

    fn bit(&self, u: Vertex, v: Vertex) -> Option<u64> {
        self.colour[u * self.n + v]
    }
}

struct CycleSearch<'t> {
    t: &'t Table,
    start: Vertex,
    path: Vec<Vertex>,
    visited: Vec<bool>,
    best: ExactCycle,
}

impl CycleSearch<'_> {
    fn dfs(&mut self, used: u64, free: usize) {
        let last = *self.path.last().unwrap();
        let len = self.path.len();
        if len >= 3 && self.path[1] < last && len > self.best.length {
            if let Some(bit) = self.t.bit(last, self.start) {
                if used & bit == 0 {
                    self.best = ExactCycle { length: len, witness: self.path.clone() };
                }
            }
        }
        if len + free <= self.best.length {
            return;
        }
        for v in self.start + 1..self.t.n {
            if self.visited[v] {
                continue;
            }
            let Some(bit) = self.t.bit(last, v) else { continue };
            if used & bit != 0 {
                continue;
            }
            self.visited[v] = true;
            self.path.push(v);
            self.dfs(used | bit, free - 1);
            self.path.pop();
            self.visited[v] = false;
        }
    }
}

/// Exhaustive search; the witness starts at its smallest vertex with the
/// second vertex smaller than the last, and is lexicographically least.
pub fn longest_rainbow_cycle_exact(colouring: &ProperEdgeColouring) -> Result<ExactCycle> {
    let n = colouring.vertex_count();
    check_limit(n, CYCLE_LIMIT)?;
    let table = Table::new(n, |u, v| colouring.colour(u, v));
    let mut best = ExactCycle { length: 0, witness: Vec::new() };
    for start in 0..n {
        let free = n - start - 1;
        if free < best.length {
            break;
        }
        let mut search = CycleSearch { t: &table, start, path: vec![start], visited: vec![false; n], best: best.clone() };
        search.visited[start] = true;
        search.dfs(0, free);
        best = search.best;
    }
    Ok(best)
}

fn ham_dfs(t: &Table, path: &mut Vec<Vertex>, visited: &mut [bool], used: u64) -> bool {
    let last = *path.last().unwrap();
    if path.len() == t.n {
        return t.n == 1 || path[0] < last;
    }
    for v in 0..t.n {
        if visited[v] {
            continue;
        }
        let Some(bit) = t.bit(last, v) else { continue };
        if used & bit != 0 {
            continue;
        }
        visited[v] = true;
        path.push(v);
        if ham_dfs(t, path, visited, used | bit) {
            return true;
        }
        path.pop();
        visited[v] = false;
    }
    false
}

/// The witness is the lexicographically least one with first < last.
pub fn has_rainbow_hamiltonian_path(colouring: &ProperEdgeColouring) -> Result<HamiltonianPathResult> {
    let n = colouring.vertex_count();
    check_limit(n, HAM_PATH_LIMIT)?;
    let table = Table::new(n, |u, v| colouring.colour(u, v));
    for start in 0..n {
        let mut path = vec![start];
        let mut visited = vec![false; n];
        visited[start] = true;
        if ham_dfs(&table, &mut path, &mut visited, 0) {
            return Ok(HamiltonianPathResult { exists: true, witness: Some(path) });
        }
    }
    Ok(HamiltonianPathResult { exists: false, witness: None })
}

struct ForestSearch<'t> {
    t: &'t Table,
    r: usize,
    colours_total: usize,
    covered: Vec<bool>,
    paths: Vec<Vec<Vertex>>,
    best: ExactForest,
}

impl ForestSearch<'_> {
    fn edges(&self) -> usize {
        self.paths.iter().map(|p| p.len() - 1).sum()
    }

    fn bound(&self, used: u64) -> usize {
        let uncovered = self.covered.iter().filter(|&&c| !c).count();
        let colours_left = self.colours_total - used.count_ones() as usize;
        self.edges() + uncovered.min(colours_left)
    }

    fn record(&mut self) {
        let edges = self.edges();
        if edges > self.best.edges {
            self.best = ExactForest { edges, paths: self.paths.clone() };
        }
    }

    /// Opens a new path whose smaller endpoint exceeds `after`.
    fn open(&mut self, used: u64, after: Option<Vertex>) {
        if self.paths.len() == self.r || self.bound(used) <= self.best.edges {
            return;
        }
        let from = after.map_or(0, |a| a + 1);
        for a in from..self.t.n {
            if self.covered[a] {
                continue;
            }
            self.covered[a] = true;
            self.paths.push(vec![a]);
            self.extend(used);
            self.paths.pop();
            self.covered[a] = false;
        }
    }

    fn extend(&mut self, used: u64) {
        if self.bound(used) <= self.best.edges {
            return;
        }
        let path = self.paths.last().unwrap();
        let (head, last) = (path[0], *path.last().unwrap());
        for v in 0..self.t.n {
            if self.covered[v] {
                continue;
            }
            let Some(bit) = self.t.bit(last, v) else { continue };
            if used & bit != 0 {
                continue;
            }
            self.covered[v] = true;
            self.paths.last_mut().unwrap().push(v);
            if v > head {
                self.record();
                self.open(used | bit, Some(head));
            }
            self.extend(used | bit);
            self.paths.last_mut().unwrap().pop();
            self.covered[v] = false;
        }
    }
}

/// Maximum edge count of a rainbow path forest in `g` with at most `r`
/// non-trivial paths. Witness paths run from the smaller endpoint and are
/// ordered by that endpoint.
pub fn max_rainbow_forest_exact(g: &ColourSubgraph<'_>, r: usize) -> Result<ExactForest> {
    let n = g.vertex_count();
    check_limit(n, FOREST_LIMIT)?;
    let table = Table::new(n, |u, v| g.colour(u, v));
    let mut search = ForestSearch {
        t: &table,
        r,
        colours_total: g.colours().len(),
        covered: vec![false; n],
        paths: Vec::new(),
        best: ExactForest { edges: 0, paths: Vec::new() },
    };
    search.open(0, None);
    Ok(search.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colouring::{ColouringBuilder, HostGraph};
    use crate::generators::{random_proper, round_robin, xor_factorization};
    use crate::rng::SplitMix64;

    fn relabel(col: &ProperEdgeColouring, seed: u64) -> ProperEdgeColouring {
        let n = col.vertex_count();
        let mut rng = SplitMix64::new(seed);
        let mut perm: Vec<Vertex> = (0..n).collect();
        rng.shuffle(&mut perm);
        let mut cperm: Vec<u64> = (0..col.colour_count() as u64).collect();
        rng.shuffle(&mut cperm);
        let mut b = ColouringBuilder::new(col.host());
        for u in 0..n {
            for v in u + 1..n {
                b.set(perm[u], perm[v], cperm[col.colour(u, v).unwrap() as usize] * 7 + 3).unwrap();
            }
        }
        b.finish().unwrap()
    }

    #[test]
    fn xor_k4_verdicts() {
        let col = xor_factorization(2).unwrap();
        let ok = verify_rainbow_cycle(&col, &[0, 1, 2]);
        assert!(ok.valid_structure && ok.rainbow);
        let bad = verify_rainbow_cycle(&col, &[0, 1, 2, 3]);
        assert!(bad.valid_structure && !bad.rainbow);
        assert_eq!(bad.first_violation, Some(ColourRepeat { position: 2, colour: 1 }));
        let repeated = verify_rainbow_path(&col, &[0, 1, 0]);
        assert!(!repeated.valid_structure && !repeated.rainbow);
        assert!(!verify_rainbow_cycle(&col, &[0, 1]).valid_structure);
        assert!(!verify_rainbow_path(&col, &[0, 9]).valid_structure);
    }

    #[test]
    fn forest_verdicts() {
        let col = xor_factorization(3).unwrap();
        assert!(verify_forest(&col, &[vec![0, 1], vec![2, 4]]).rainbow);
        let clash = verify_forest(&col, &[vec![0, 1], vec![2, 3]]);
        assert_eq!(clash.first_violation, Some(ColourRepeat { position: 1, colour: 1 }));
        assert!(!verify_forest(&col, &[vec![0, 1], vec![1, 2]]).valid_structure);
        assert!(!verify_forest(&col, &[vec![]]).valid_structure);
    }

    #[test]
    fn bipartite_structure() {
        let col = crate::generators::latin_to_bipartite(&crate::generators::LatinSquare::cyclic(3)).unwrap();
        assert!(!verify_rainbow_path(&col, &[0, 1]).valid_structure);
        assert!(verify_rainbow_path(&col, &[0, 3, 1]).valid_structure);
    }

    #[test]
    fn longest_cycle_examples() {
        for seed in 0..5 {
            let k3 = random_proper(3, seed).unwrap();
            assert_eq!(longest_rainbow_cycle_exact(&k3).unwrap().length, 3);
        }
        let k4 = xor_factorization(2).unwrap();
        let res = longest_rainbow_cycle_exact(&k4).unwrap();
        assert_eq!(res, ExactCycle { length: 3, witness: vec![0, 1, 2] });
        assert_eq!(longest_rainbow_cycle_exact(&round_robin(2).unwrap()).unwrap().length, 0);
    }

    #[test]
    fn hamiltonian_path_examples() {
        assert!(!has_rainbow_hamiltonian_path(&xor_factorization(2).unwrap()).unwrap().exists);
        assert!(!has_rainbow_hamiltonian_path(&xor_factorization(3).unwrap()).unwrap().exists);
        assert!(!has_rainbow_hamiltonian_path(&round_robin(6).unwrap()).unwrap().exists);
        let k8 = round_robin(8).unwrap();
        let res = has_rainbow_hamiltonian_path(&k8).unwrap();
        assert!(res.exists);
        assert!(verify_rainbow_path(&k8, res.witness.as_ref().unwrap()).rainbow);
        assert_eq!(res.witness.unwrap().len(), 8);
    }

    #[test]
    fn limits_enforced() {
        let big = round_robin(12).unwrap();
        assert_eq!(longest_rainbow_cycle_exact(&big).unwrap_err(), Error::OverLimit { n: 12, limit: 10 });
        assert!(has_rainbow_hamiltonian_path(&big).is_err());
        let ten = round_robin(10).unwrap();
        assert_eq!(max_rainbow_forest_exact(&ten.full_subgraph(), 2).unwrap_err(), Error::OverLimit { n: 10, limit: 9 });
    }

    #[test]
    fn forest_examples() {
        let k3 = random_proper(3, 1).unwrap();
        let res = max_rainbow_forest_exact(&k3.full_subgraph(), 1).unwrap();
        assert_eq!(res.edges, 2);
        assert!(verify_forest(&k3, &res.paths).rainbow);
        assert_eq!(max_rainbow_forest_exact(&k3.full_subgraph(), 0).unwrap().edges, 0);
        for n in [4usize, 6, 8] {
            let col = round_robin(n).unwrap();
            let res = max_rainbow_forest_exact(&col.full_subgraph(), n / 2).unwrap();
            assert!(res.edges >= n / 2);
            assert!(verify_forest(&col, &res.paths).rainbow);
            assert!(res.paths.len() <= n / 2);
        }
    }

    #[test]
    fn k6_round_robin_forest_value() {
        let col = round_robin(6).unwrap();
        // Brute force over edge subsets gives 4; no rainbow Hamiltonian path exists.
        assert_eq!(max_rainbow_forest_exact(&col.full_subgraph(), 2).unwrap().edges, 4);
        // Without two colours the forest has at most 3 edges.
        let g = col.restrict(crate::colouring::ColourSet::from_ids(5, [0, 1, 2]).unwrap()).unwrap();
        assert_eq!(max_rainbow_forest_exact(&g, 2).unwrap().edges, 3);
    }

    #[test]
    fn relabel_invariance() {
        for seed in 0..6 {
            let n = 5 + (seed as usize % 4);
            let col = random_proper(n, seed).unwrap();
            let other = relabel(&col, seed + 100);
            assert_eq!(
                longest_rainbow_cycle_exact(&col).unwrap().length,
                longest_rainbow_cycle_exact(&other).unwrap().length
            );
            assert_eq!(
                has_rainbow_hamiltonian_path(&col).unwrap().exists,
                has_rainbow_hamiltonian_path(&other).unwrap().exists
            );
            for r in 1..3 {
                assert_eq!(
                    max_rainbow_forest_exact(&col.full_subgraph(), r).unwrap().edges,
                    max_rainbow_forest_exact(&other.full_subgraph(), r).unwrap().edges
                );
            }
        }
    }

    #[test]
    fn bipartite_host_search() {
        let col = crate::generators::latin_to_bipartite(&crate::generators::LatinSquare::cyclic(3)).unwrap();
        assert_eq!(col.host(), HostGraph::bipartite(3).unwrap());
        // Three colours cannot colour an even rainbow cycle.
        assert_eq!(longest_rainbow_cycle_exact(&col).unwrap().length, 0);
        let col = crate::generators::latin_to_bipartite(&crate::generators::LatinSquare::cyclic(4)).unwrap();
        let res = longest_rainbow_cycle_exact(&col).unwrap();
        assert!(res.length % 2 == 0 && res.length >= 4);
        assert!(verify_rainbow_cycle(&col, &res.witness).rainbow);
    }
}
