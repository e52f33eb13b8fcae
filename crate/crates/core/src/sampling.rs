//! Random colour-class sampling and edge-distribution measurements.
//!
//! The subgraph formed by a random set of colours behaves like a random
//! graph of the same density; the probes here measure how closely a given
//! instance follows that at a finite size.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::colouring::{ColourSet, HostKind, ProperEdgeColouring, Vertex, NONE};
use crate::error::{Error, Result};
use crate::rng::{stream, sub_seed, SplitMix64};

/// One uniform draw per colour id, in id order; id kept iff draw `< p`.
pub fn sample_colours(colouring: &ProperEdgeColouring, p: f64, seed: u64) -> Result<ColourSet> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("probability {p} outside [0, 1]")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut set = ColourSet::empty(colouring.colour_count());
    for c in 0..colouring.colour_count() as u32 {
        if rng.next_f64() < p {
            set.insert(c);
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairColourStats {
    pub a: Vec<Vertex>,
    pub b: Vec<Vertex>,
    pub edge_count: usize,
    pub distinct_colour_count: usize,
    pub rainbow_fraction: f64,
}

/// Exact edge and distinct-colour counts between two vertex sets.
pub fn pair_colour_stats(colouring: &ProperEdgeColouring, a: &[Vertex], b: &[Vertex]) -> Result<PairColourStats> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidVertexSet("both sets must be nonempty".into()));
    }
    colouring.check_pair(a, b)?;
    let mut seen = vec![false; colouring.colour_count()];
    let (edge_count, distinct) = count_pair(colouring, a, b, &mut seen);
    Ok(PairColourStats {
        a: a.to_vec(),
        b: b.to_vec(),
        edge_count,
        distinct_colour_count: distinct,
        rainbow_fraction: if edge_count == 0 { 1.0 } else { distinct as f64 / edge_count as f64 },
    })
}

/// `(edges, distinct colours)` between `a` and `b`; leaves `seen` cleared.
fn count_pair(colouring: &ProperEdgeColouring, a: &[Vertex], b: &[Vertex], seen: &mut [bool]) -> (usize, usize) {
    let mut edges = 0;
    let mut distinct = Vec::new();
    for &u in a {
        let row = colouring.row(u);
        for &v in b {
            let c = row[v];
            if c == NONE {
                continue;
            }
            edges += 1;
            if !seen[c as usize] {
                seen[c as usize] = true;
                distinct.push(c);
            }
        }
    }
    for &c in &distinct {
        seen[c as usize] = false;
    }
    (edges, distinct.len())
}

/// Fraction of part pairs `(A_i, B_j)` that are nearly rainbow, i.e. whose
/// rainbow fraction is at least `1 - epsilon`, over seeded random
/// equipartitions of `a` and `b` into parts of size `part_size`.
pub fn partition_probe(
    colouring: &ProperEdgeColouring,
    a: &[Vertex],
    b: &[Vertex],
    part_size: usize,
    epsilon: f64,
    seed: u64,
) -> Result<f64> {
    if part_size == 0 || a.len() % part_size != 0 || b.len() % part_size != 0 || a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "part size {part_size} must divide both set sizes {} and {}",
            a.len(),
            b.len()
        )));
    }
    colouring.check_pair(a, b)?;
    let mut rng = SplitMix64::new(sub_seed(seed, stream::PARTITION, 0));
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    rng.shuffle(&mut a);
    rng.shuffle(&mut b);

    let mut seen = vec![false; colouring.colour_count()];
    let mut good = 0usize;
    let mut total = 0usize;
    for part_a in a.chunks(part_size) {
        for part_b in b.chunks(part_size) {
            let (edges, distinct) = count_pair(colouring, part_a, part_b, &mut seen);
            let fraction = if edges == 0 { 1.0 } else { distinct as f64 / edges as f64 };
            if fraction >= 1.0 - epsilon {
                good += 1;
            }
            total += 1;
        }
    }
    Ok(good as f64 / total as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub n: usize,
    pub p: f64,
    pub set_size: usize,
    pub trials: usize,
    pub min_ratio: f64,
    pub mean_ratio: f64,
    pub min_degree_ratio: f64,
    pub tolerance: f64,
}

impl ExpansionReport {
    pub fn pass(&self) -> bool {
        self.min_ratio >= 1.0 - self.tolerance && self.min_degree_ratio >= 1.0 - self.tolerance
    }
}

/// A report together with the raw per-trial ratios behind it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionSample {
    pub report: ExpansionReport,
    pub trial_ratios: Vec<f64>,
    pub colours_chosen: usize,
}

/// Samples one colour set, then measures the minimum degree ratio and
/// `e_G(A,B) / (p |A||B|)` over `trials` independent disjoint pairs.
pub fn expansion_probe(
    colouring: &ProperEdgeColouring,
    p: f64,
    set_size: usize,
    trials: usize,
    tolerance: f64,
    seed: u64,
) -> Result<ExpansionReport> {
    expansion_probe_detailed(colouring, p, set_size, trials, tolerance, seed).map(|s| s.report)
}

pub fn expansion_probe_detailed(
    colouring: &ProperEdgeColouring,
    p: f64,
    set_size: usize,
    trials: usize,
    tolerance: f64,
    seed: u64,
) -> Result<ExpansionSample> {
    let host = colouring.host();
    let max_size = match host.kind {
        HostKind::Complete => host.n / 2,
        HostKind::CompleteBipartite => host.n,
    };
    if set_size == 0 || set_size > max_size {
        return Err(Error::InvalidArgument(format!("set size {set_size} infeasible, must be in 1..={max_size}")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let colours = sample_colours(colouring, p, sub_seed(seed, stream::COLOURS, 0))?;
    let colours_chosen = colours.len();
    let g = colouring.restrict(colours)?;

    let degree_scale = p * host.degree() as f64;
    let min_degree = (0..colouring.vertex_count()).into_par_iter().map(|v| g.degree(v)).min().unwrap_or(0);
    let min_degree_ratio = if degree_scale > 0.0 { min_degree as f64 / degree_scale } else { 0.0 };

    let pair_scale = p * (set_size * set_size) as f64;
    let trial_ratios: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let (a, b) = random_pair(colouring, set_size, sub_seed(seed, stream::TRIALS, t));
            let edges = g.count_between_unchecked(&a, &b);
            if pair_scale > 0.0 {
                edges as f64 / pair_scale
            } else {
                0.0
            }
        })
        .collect();

    let min_ratio = trial_ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let mean_ratio = trial_ratios.iter().sum::<f64>() / trials as f64;
    Ok(ExpansionSample {
        report: ExpansionReport {
            n: host.n,
            p,
            set_size,
            trials,
            min_ratio,
            mean_ratio,
            min_degree_ratio,
            tolerance,
        },
        trial_ratios,
        colours_chosen,
    })
}

/// Disjoint uniform pair of `size`-sets: a Fisher-Yates prefix of `2 size`
/// vertices split in half, or one prefix per side for bipartite hosts.
pub fn random_pair(colouring: &ProperEdgeColouring, size: usize, seed: u64) -> (Vec<Vertex>, Vec<Vertex>) {
    let host = colouring.host();
    let mut rng = SplitMix64::new(seed);
    match host.kind {
        HostKind::Complete => {
            let mut vertices: Vec<Vertex> = (0..host.n).collect();
            rng.shuffle_prefix(&mut vertices, 2 * size);
            (vertices[..size].to_vec(), vertices[size..2 * size].to_vec())
        }
        HostKind::CompleteBipartite => {
            let mut left: Vec<Vertex> = (0..host.n).collect();
            let mut right: Vec<Vertex> = (host.n..2 * host.n).collect();
            rng.shuffle_prefix(&mut left, size);
            rng.shuffle_prefix(&mut right, size);
            left.truncate(size);
            right.truncate(size);
            (left, right)
        }
    }
}
