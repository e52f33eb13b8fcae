//! One rotation-extension step on the first path of a rainbow path forest.
//!
//! `H` is a colour-disjoint helper subgraph. With `v_1` the head of `P_1`
//! and `T` the vertices of the other paths holding at least `2m` vertices,
//! the step attaches at least `m` vertices of some path in `T` to `P_1`
//! using at most two `H`-edges:
//!
//! 1. an `H`-edge `v_1 x` with `x ∈ T`;
//! 2. a rotation: `v_1 v_{l+1}` in `H` plus `v_l x` with `x ∈ T`, turning
//!    `P_1` into `v_k ... v_{l+1} v_1 ... v_l x ...`;
//! 3. a detour through a vertex `s` outside the forest: `v_1 s`, `s x`.

use serde::{Deserialize, Serialize};

use crate::colouring::{Colour, ColourSubgraph, Vertex};
use crate::error::{Error, Result};
use crate::forest::PathForest;

/// `b`, `m`, `r` with `2 m r <= b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationParams {
    pub b: usize,
    pub m: usize,
    pub r: usize,
}

impl RotationParams {
    pub fn new(b: usize, m: usize, r: usize) -> Result<Self> {
        if b == 0 || m == 0 || r == 0 {
            return Err(Error::ParamsInfeasible(format!("b, m, r must be positive (b={b}, m={m}, r={r})")));
        }
        if 2 * m * r > b {
            return Err(Error::ParamsInfeasible(format!("2 m r <= b fails: 2*{m}*{r} = {} > {b}", 2 * m * r)));
        }
        Ok(RotationParams { b, m, r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationCase {
    DirectToT,
    RotateViaPredecessor,
    ViaOutsideVertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RotationOutcome {
    /// `|P_1| >= |V(forest)| - 2b`.
    Done,
    /// `P_1` grew by at least `m` vertices; only `e1` and `e2` are new edges.
    Extended { forest: PathForest, e1: (Vertex, Vertex), e2: (Vertex, Vertex), case_tag: RotationCase },
    /// None of the three cases applies to this `H`.
    Stuck,
}

impl RotationOutcome {
    pub fn kind(&self) -> &'static str {
        match self {
            RotationOutcome::Done => "done",
            RotationOutcome::Extended { .. } => "extended",
            RotationOutcome::Stuck => "stuck",
        }
    }
}

/// Splits `path` at position `at` into `(plus, minus)`: `plus` starts at the
/// split vertex and runs to the larger side (ties go toward the endpoint with
/// the smaller id); `minus` is the rest in its original order.
fn split_at(path: &[Vertex], at: usize) -> (Vec<Vertex>, Vec<Vertex>) {
    let len = path.len();
    let toward_start = at + 1;
    let toward_end = len - at;
    let go_start = match toward_start.cmp(&toward_end) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => path[0] < path[len - 1],
    };
    if go_start {
        (path[..=at].iter().rev().copied().collect(), path[at + 1..].to_vec())
    } else {
        (path[at..].to_vec(), path[..at].to_vec())
    }
}

struct Extension {
    first: Vec<Vertex>,
    target_path: usize,
    minus: Vec<Vertex>,
    e1: (Vertex, Vertex),
    e2: (Vertex, Vertex),
    case_tag: RotationCase,
}

pub fn rotate_extend(forest: &PathForest, h: &ColourSubgraph<'_>, params: &RotationParams) -> Result<RotationOutcome> {
    if let Some(c) = h.colours().iter().find(|&c| forest.used_colours().contains(c)) {
        return Err(Error::ColourOverlap(c));
    }
    if forest.path_count() == 0 {
        return Err(Error::InvalidArgument("forest has no paths".into()));
    }
    let first = forest.path(0);
    let covered = forest.vertex_count();
    if first.len() + 2 * params.b >= covered {
        return Ok(RotationOutcome::Done);
    }

    let total = h.vertex_count();
    let mut in_t = vec![false; total];
    for i in 1..forest.path_count() {
        let path = forest.path(i);
        if path.len() >= 2 * params.m {
            for &v in path {
                in_t[v] = true;
            }
        }
    }
    let v1 = first[0];

    let extension = direct_to_t(forest, h, &in_t, v1)
        .or_else(|| rotate_via_predecessor(forest, h, &in_t, v1, params.b))
        .or_else(|| via_outside_vertex(forest, h, &in_t, v1, params.b));
    let Some(ext) = extension else {
        return Ok(RotationOutcome::Stuck);
    };

    let mut paths: Vec<Vec<Vertex>> = forest.paths().to_vec();
    paths[0] = ext.first;
    if ext.minus.is_empty() {
        let mut taken = vec![false; total];
        for (i, p) in paths.iter().enumerate() {
            if i != ext.target_path {
                p.iter().for_each(|&v| taken[v] = true);
            }
        }
        match (0..total).find(|&v| !taken[v]) {
            Some(v) => paths[ext.target_path] = vec![v],
            None => {
                paths.remove(ext.target_path);
            }
        }
    } else {
        paths[ext.target_path] = ext.minus;
    }
    let next = PathForest::from_paths(h.base(), paths)?;
    Ok(RotationOutcome::Extended { forest: next, e1: ext.e1, e2: ext.e2, case_tag: ext.case_tag })
}

fn attach(forest: &PathForest, x: Vertex) -> (usize, Vec<Vertex>, Vec<Vertex>) {
    let (i, pos) = forest.location(x).expect("T vertices lie on the forest");
    let (plus, minus) = split_at(forest.path(i), pos);
    (i, plus, minus)
}

fn reversed(path: &[Vertex]) -> Vec<Vertex> {
    path.iter().rev().copied().collect()
}

fn direct_to_t(forest: &PathForest, h: &ColourSubgraph<'_>, in_t: &[bool], v1: Vertex) -> Option<Extension> {
    let (x, _) = h.neighbours(v1).find(|&(x, _)| in_t[x])?;
    let (i, plus, minus) = attach(forest, x);
    let mut first = reversed(forest.path(0));
    first.extend(plus);
    Some(Extension { first, target_path: i, minus, e1: (v1, x), e2: (v1, x), case_tag: RotationCase::DirectToT })
}

/// First `x ∈ N_H(u) ∩ T` (by id) whose edge colour differs from `avoid`.
fn t_neighbour_avoiding(h: &ColourSubgraph<'_>, in_t: &[bool], u: Vertex, avoid: Colour) -> Option<Vertex> {
    h.neighbours(u).find(|&(x, c)| in_t[x] && c != avoid).map(|(x, _)| x)
}

fn rotate_via_predecessor(
    forest: &PathForest,
    h: &ColourSubgraph<'_>,
    in_t: &[bool],
    v1: Vertex,
    b: usize,
) -> Option<Extension> {
    let first = forest.path(0);
    let on_first: Vec<usize> = (1..first.len()).filter(|&q| h.has_edge(v1, first[q])).take(b).collect();
    if on_first.len() < b {
        return None;
    }
    for q in on_first {
        if q < 2 {
            continue;
        }
        let pivot = first[q - 1];
        let c1 = h.colour(v1, first[q]).expect("H-neighbour");
        if let Some(x) = t_neighbour_avoiding(h, in_t, pivot, c1) {
            let (i, plus, minus) = attach(forest, x);
            let mut path = reversed(&first[q..]);
            path.extend_from_slice(&first[..q]);
            path.extend(plus);
            return Some(Extension {
                first: path,
                target_path: i,
                minus,
                e1: (v1, first[q]),
                e2: (pivot, x),
                case_tag: RotationCase::RotateViaPredecessor,
            });
        }
    }
    None
}

fn via_outside_vertex(
    forest: &PathForest,
    h: &ColourSubgraph<'_>,
    in_t: &[bool],
    v1: Vertex,
    b: usize,
) -> Option<Extension> {
    let outside: Vec<(Vertex, Colour)> = h.neighbours(v1).filter(|&(s, _)| !forest.contains(s)).take(b).collect();
    for (s, c1) in outside {
        if let Some(x) = t_neighbour_avoiding(h, in_t, s, c1) {
            let (i, plus, minus) = attach(forest, x);
            let mut path = reversed(forest.path(0));
            path.push(s);
            path.extend(plus);
            return Some(Extension {
                first: path,
                target_path: i,
                minus,
                e1: (v1, s),
                e2: (s, x),
                case_tag: RotationCase::ViaOutsideVertex,
            });
        }
    }
    None
}
