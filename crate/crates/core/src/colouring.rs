//! Properly edge-coloured complete and complete-bipartite host graphs.
//!
//! A colouring is stored as a dense symmetric colour matrix plus a CSR
//! index of colour classes. Colour ids are densified to `0..colour_count`
//! in increasing order of the raw ids they were built from; the raw ids are
//! kept so files round-trip unchanged.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Colour = u32;

/// Matrix sentinel for "no edge".
pub const NONE: Colour = Colour::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HostKind {
    Complete,
    CompleteBipartite,
}

/// `K_n`, or `K_{n,n}` with left side `0..n` and right side `n..2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HostGraph {
    pub kind: HostKind,
    pub n: usize,
}

impl HostGraph {
    pub fn complete(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidHost("need at least one vertex".into()));
        }
        Ok(HostGraph { kind: HostKind::Complete, n })
    }

    pub fn bipartite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidHost("need at least one vertex per side".into()));
        }
        Ok(HostGraph { kind: HostKind::CompleteBipartite, n })
    }

    pub fn vertex_count(&self) -> usize {
        match self.kind {
            HostKind::Complete => self.n,
            HostKind::CompleteBipartite => 2 * self.n,
        }
    }

    pub fn edge_count(&self) -> usize {
        match self.kind {
            HostKind::Complete => self.n * (self.n - 1) / 2,
            HostKind::CompleteBipartite => self.n * self.n,
        }
    }

    /// Degree every vertex has in the host.
    pub fn degree(&self) -> usize {
        match self.kind {
            HostKind::Complete => self.n - 1,
            HostKind::CompleteBipartite => self.n,
        }
    }

    /// Side of a bipartite vertex (0 = left, 1 = right); always 0 for `K_n`.
    pub fn side(&self, v: Vertex) -> usize {
        match self.kind {
            HostKind::Complete => 0,
            HostKind::CompleteBipartite => usize::from(v >= self.n),
        }
    }

    pub fn is_edge(&self, u: Vertex, v: Vertex) -> bool {
        let total = self.vertex_count();
        if u >= total || v >= total || u == v {
            return false;
        }
        match self.kind {
            HostKind::Complete => true,
            HostKind::CompleteBipartite => self.side(u) != self.side(v),
        }
    }
}

/// A set of colour ids over a fixed universe `0..universe`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColourSet {
    words: Vec<u64>,
    universe: usize,
    len: usize,
}

impl ColourSet {
    pub fn empty(universe: usize) -> Self {
        ColourSet { words: vec![0; universe.div_ceil(64)], universe, len: 0 }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = ColourSet::empty(universe);
        for c in 0..universe {
            set.insert(c as Colour);
        }
        set
    }

    pub fn from_ids<I: IntoIterator<Item = Colour>>(universe: usize, ids: I) -> Result<Self> {
        let mut set = ColourSet::empty(universe);
        for c in ids {
            if c as usize >= universe {
                return Err(Error::ColourOutOfRange(c));
            }
            set.insert(c);
        }
        Ok(set)
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn contains(&self, c: Colour) -> bool {
        let c = c as usize;
        c < self.universe && self.words[c >> 6] & (1 << (c & 63)) != 0
    }

    /// Returns true if the colour was newly added.
    pub fn insert(&mut self, c: Colour) -> bool {
        let i = c as usize;
        assert!(i < self.universe, "colour {c} outside universe {}", self.universe);
        let bit = 1 << (i & 63);
        let word = &mut self.words[i >> 6];
        if *word & bit != 0 {
            return false;
        }
        *word |= bit;
        self.len += 1;
        true
    }

    /// Returns true if the colour was present.
    pub fn remove(&mut self, c: Colour) -> bool {
        let i = c as usize;
        if i >= self.universe {
            return false;
        }
        let bit = 1 << (i & 63);
        let word = &mut self.words[i >> 6];
        if *word & bit == 0 {
            return false;
        }
        *word &= !bit;
        self.len -= 1;
        true
    }

    /// Ids in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = Colour> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros();
                bits &= bits - 1;
                Some((w * 64 + tz as usize) as Colour)
            })
        })
    }

    pub fn complement(&self) -> ColourSet {
        let mut out = ColourSet::empty(self.universe);
        for c in 0..self.universe as Colour {
            if !self.contains(c) {
                out.insert(c);
            }
        }
        out
    }

    pub fn is_subset(&self, other: &ColourSet) -> bool {
        self.iter().all(|c| other.contains(c))
    }

    pub fn is_disjoint(&self, other: &ColourSet) -> bool {
        self.iter().all(|c| !other.contains(c))
    }
}

/// One way a colouring can fail to be proper or self-consistent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// `colour` appears on `count >= 2` edges at `vertex`.
    RepeatedColour { vertex: Vertex, colour: Colour, count: usize },
    /// Class index and colour matrix disagree.
    Inconsistent { detail: String },
}

/// Incremental builder taking edges with arbitrary raw colour ids.
#[derive(Debug)]
pub struct ColouringBuilder {
    host: HostGraph,
    matrix: Vec<Colour>,
    raw_lookup: HashMap<u64, Colour>,
    raw_ids: Vec<u64>,
    assigned: usize,
}

impl ColouringBuilder {
    pub fn new(host: HostGraph) -> Self {
        let total = host.vertex_count();
        ColouringBuilder {
            host,
            matrix: vec![NONE; total * total],
            raw_lookup: HashMap::new(),
            raw_ids: Vec::new(),
            assigned: 0,
        }
    }

    pub fn host(&self) -> HostGraph {
        self.host
    }

    pub fn set(&mut self, u: Vertex, v: Vertex, raw: u64) -> Result<()> {
        let total = self.host.vertex_count();
        if u >= total || v >= total {
            return Err(Error::MalformedColouring(format!("edge {{{u},{v}}} has a vertex out of range")));
        }
        if u == v {
            return Err(Error::MalformedColouring(format!("self-loop at vertex {u}")));
        }
        if !self.host.is_edge(u, v) {
            return Err(Error::MalformedColouring(format!("{{{u},{v}}} is not an edge of the host")));
        }
        if self.matrix[u * total + v] != NONE {
            return Err(Error::MalformedColouring(format!("duplicate edge {{{u},{v}}}")));
        }
        let next = self.raw_ids.len() as Colour;
        let provisional = *self.raw_lookup.entry(raw).or_insert_with(|| {
            self.raw_ids.push(raw);
            next
        });
        self.matrix[u * total + v] = provisional;
        self.matrix[v * total + u] = provisional;
        self.assigned += 1;
        Ok(())
    }

    /// Finishes with structural checks only; properness is left to
    /// [`ProperEdgeColouring::validate`].
    pub fn finish_unvalidated(self) -> Result<ProperEdgeColouring> {
        let ColouringBuilder { host, mut matrix, raw_ids, assigned, .. } = self;
        let total = host.vertex_count();
        if assigned != host.edge_count() {
            let missing = (0..total)
                .flat_map(|u| (u + 1..total).map(move |v| (u, v)))
                .find(|&(u, v)| host.is_edge(u, v) && matrix[u * total + v] == NONE)
                .expect("some edge is missing");
            return Err(Error::MalformedColouring(format!(
                "missing edge {{{},{}}} ({} of {} edges coloured)",
                missing.0,
                missing.1,
                assigned,
                host.edge_count()
            )));
        }

        let mut order: Vec<usize> = (0..raw_ids.len()).collect();
        order.sort_unstable_by_key(|&i| raw_ids[i]);
        let mut dense_of = vec![0 as Colour; raw_ids.len()];
        for (dense, &prov) in order.iter().enumerate() {
            dense_of[prov] = dense as Colour;
        }
        let sorted_raw: Vec<u64> = order.iter().map(|&i| raw_ids[i]).collect();
        for entry in matrix.iter_mut() {
            if *entry != NONE {
                *entry = dense_of[*entry as usize];
            }
        }
        Ok(ProperEdgeColouring::from_dense(host, matrix, sorted_raw))
    }

    /// Finishes and rejects improper colourings.
    pub fn finish(self) -> Result<ProperEdgeColouring> {
        let colouring = self.finish_unvalidated()?;
        colouring.ensure_proper()?;
        Ok(colouring)
    }
}

/// A (normally proper) edge colouring of a complete or complete bipartite host.
///
/// Every constructor guarantees the structural invariants: each host edge
/// has exactly one colour and ids are dense. Properness is checked by
/// [`ColouringBuilder::finish`] and the generators; [`validate`](Self::validate)
/// reports violations exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProperEdgeColouring {
    host: HostGraph,
    total: usize,
    matrix: Vec<Colour>,
    class_offsets: Vec<usize>,
    class_edges: Vec<(u32, u32)>,
    raw_ids: Vec<u64>,
}

impl ProperEdgeColouring {
    /// Builds from a dense matrix whose ids already lie in `0..raw_ids.len()`.
    pub(crate) fn from_dense(host: HostGraph, matrix: Vec<Colour>, raw_ids: Vec<u64>) -> Self {
        let total = host.vertex_count();
        let colour_count = raw_ids.len();
        let mut sizes = vec![0usize; colour_count];
        for u in 0..total {
            for v in u + 1..total {
                let c = matrix[u * total + v];
                if c != NONE {
                    sizes[c as usize] += 1;
                }
            }
        }
        let mut class_offsets = Vec::with_capacity(colour_count + 1);
        class_offsets.push(0);
        for s in &sizes {
            class_offsets.push(class_offsets.last().unwrap() + s);
        }
        let mut fill = class_offsets.clone();
        let mut class_edges = vec![(0u32, 0u32); *class_offsets.last().unwrap()];
        for u in 0..total {
            for v in u + 1..total {
                let c = matrix[u * total + v];
                if c != NONE {
                    class_edges[fill[c as usize]] = (u as u32, v as u32);
                    fill[c as usize] += 1;
                }
            }
        }
        ProperEdgeColouring { host, total, matrix, class_offsets, class_edges, raw_ids }
    }

    pub fn host(&self) -> HostGraph {
        self.host
    }

    pub fn vertex_count(&self) -> usize {
        self.total
    }

    pub fn colour_count(&self) -> usize {
        self.raw_ids.len()
    }

    #[inline]
    pub fn colour(&self, u: Vertex, v: Vertex) -> Option<Colour> {
        match self.matrix[u * self.total + v] {
            NONE => None,
            c => Some(c),
        }
    }

    /// Colour row of `v`; `NONE` marks non-edges and the diagonal.
    #[inline]
    pub fn row(&self, v: Vertex) -> &[Colour] {
        &self.matrix[v * self.total..(v + 1) * self.total]
    }

    pub fn class(&self, c: Colour) -> &[(u32, u32)] {
        let c = c as usize;
        &self.class_edges[self.class_offsets[c]..self.class_offsets[c + 1]]
    }

    pub fn raw_id(&self, c: Colour) -> u64 {
        self.raw_ids[c as usize]
    }

    pub fn dense_id(&self, raw: u64) -> Option<Colour> {
        self.raw_ids.binary_search(&raw).ok().map(|i| i as Colour)
    }

    pub fn all_colours(&self) -> ColourSet {
        ColourSet::full(self.colour_count())
    }

    /// Every (vertex, colour) repetition plus any index inconsistency.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        let k = self.colour_count();
        let mut seen = vec![0usize; k];
        let mut touched = Vec::new();
        for v in 0..self.total {
            for (u, &c) in self.row(v).iter().enumerate() {
                if c == NONE {
                    continue;
                }
                if self.matrix[u * self.total + v] != c {
                    violations.push(Violation::Inconsistent {
                        detail: format!("matrix not symmetric at {{{v},{u}}}"),
                    });
                }
                if seen[c as usize] == 0 {
                    touched.push(c);
                }
                seen[c as usize] += 1;
            }
            touched.sort_unstable();
            for &c in &touched {
                let count = seen[c as usize];
                if count >= 2 {
                    violations.push(Violation::RepeatedColour { vertex: v, colour: c, count });
                }
                seen[c as usize] = 0;
            }
            touched.clear();
        }
        let mut class_total = 0;
        for c in 0..k as Colour {
            let class = self.class(c);
            if class.is_empty() {
                violations.push(Violation::Inconsistent { detail: format!("colour {c} has an empty class") });
            }
            class_total += class.len();
            for &(u, v) in class {
                if self.colour(u as usize, v as usize) != Some(c) {
                    violations.push(Violation::Inconsistent {
                        detail: format!("class {c} lists {{{u},{v}}} but the matrix disagrees"),
                    });
                }
            }
        }
        if class_total != self.host.edge_count() {
            violations.push(Violation::Inconsistent {
                detail: format!("classes hold {class_total} edges, host has {}", self.host.edge_count()),
            });
        }
        violations
    }

    pub(crate) fn ensure_proper(&self) -> Result<()> {
        let violations = self.validate();
        match violations.first() {
            None => Ok(()),
            Some(Violation::RepeatedColour { vertex, colour, .. }) => Err(Error::ImproperColouring {
                count: violations.len(),
                vertex: *vertex,
                colour: self.raw_id(*colour),
            }),
            Some(Violation::Inconsistent { detail }) => Err(Error::Internal(detail.clone())),
        }
    }

    pub fn restrict(&self, colours: ColourSet) -> Result<ColourSubgraph<'_>> {
        check_universe(self, &colours)?;
        Ok(ColourSubgraph { base: self, colours })
    }

    pub fn full_subgraph(&self) -> ColourSubgraph<'_> {
        ColourSubgraph { base: self, colours: self.all_colours() }
    }

    /// Every colour id not in `colours`.
    pub fn complement_colours(&self, colours: &ColourSet) -> Result<ColourSet> {
        check_universe(self, colours)?;
        Ok(colours.complement())
    }

    /// Checks that `a` and `b` are disjoint vertex sets of this host, and for a
    /// bipartite host that they lie on opposite sides.
    pub fn check_pair(&self, a: &[Vertex], b: &[Vertex]) -> Result<()> {
        let mut mark = vec![0u8; self.total];
        for (tag, set) in [(1u8, a), (2u8, b)] {
            for &v in set {
                if v >= self.total {
                    return Err(Error::InvalidVertexSet(format!("vertex {v} out of range")));
                }
                if mark[v] & tag != 0 {
                    return Err(Error::InvalidVertexSet(format!("vertex {v} repeated")));
                }
                if mark[v] != 0 {
                    return Err(Error::InvalidVertexSet(format!("vertex {v} is in both sets")));
                }
                mark[v] |= tag;
            }
        }
        if self.host.kind == HostKind::CompleteBipartite {
            let sides = |set: &[Vertex]| set.iter().map(|&v| self.host.side(v)).collect::<Vec<_>>();
            let (sa, sb) = (sides(a), sides(b));
            let one_side = |s: &[usize]| s.windows(2).all(|w| w[0] == w[1]);
            if !one_side(&sa) || !one_side(&sb) || (!sa.is_empty() && !sb.is_empty() && sa[0] == sb[0]) {
                return Err(Error::InvalidVertexSet("bipartite sets must lie on opposite sides".into()));
            }
        }
        Ok(())
    }
}

fn check_universe(colouring: &ProperEdgeColouring, colours: &ColourSet) -> Result<()> {
    if colours.universe() != colouring.colour_count() {
        let bad = colours.iter().find(|&c| c as usize >= colouring.colour_count());
        return Err(match bad {
            Some(c) => Error::ColourOutOfRange(c),
            None => Error::InvalidArgument(format!(
                "colour set universe {} does not match {} colours",
                colours.universe(),
                colouring.colour_count()
            )),
        });
    }
    Ok(())
}

/// The host restricted to the edges of a chosen set of colours.
#[derive(Debug, Clone)]
pub struct ColourSubgraph<'a> {
    base: &'a ProperEdgeColouring,
    colours: ColourSet,
}

impl<'a> ColourSubgraph<'a> {
    pub fn base(&self) -> &'a ProperEdgeColouring {
        self.base
    }

    pub fn colours(&self) -> &ColourSet {
        &self.colours
    }

    pub fn vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    /// Colour of `uv` if it is an edge of this subgraph.
    #[inline]
    pub fn colour(&self, u: Vertex, v: Vertex) -> Option<Colour> {
        self.base.colour(u, v).filter(|&c| self.colours.contains(c))
    }

    #[inline]
    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.colour(u, v).is_some()
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.base.row(v).iter().filter(|&&c| c != NONE && self.colours.contains(c)).count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.vertex_count()).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> usize {
        self.degrees().into_iter().min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Neighbours of `v` in increasing vertex order, with the edge colour.
    pub fn neighbours(&self, v: Vertex) -> impl Iterator<Item = (Vertex, Colour)> + '_ {
        self.base
            .row(v)
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c != NONE && self.colours.contains(c))
            .map(|(u, &c)| (u, c))
    }

    pub fn edge_count(&self) -> usize {
        self.colours.iter().map(|c| self.base.class(c).len()).sum()
    }

    /// `e_G(A, B)`: edges of this subgraph with one end in each set.
    pub fn edges_between(&self, a: &[Vertex], b: &[Vertex]) -> Result<usize> {
        self.base.check_pair(a, b)?;
        Ok(self.count_between_unchecked(a, b))
    }

    pub(crate) fn count_between_unchecked(&self, a: &[Vertex], b: &[Vertex]) -> usize {
        let mut count = 0;
        for &u in a {
            let row = self.base.row(u);
            for &v in b {
                let c = row[v];
                if c != NONE && self.colours.contains(c) {
                    count += 1;
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{round_robin, xor_factorization};

    fn monochrome_triangle() -> ProperEdgeColouring {
        let mut b = ColouringBuilder::new(HostGraph::complete(3).unwrap());
        b.set(0, 1, 0).unwrap();
        b.set(0, 2, 0).unwrap();
        b.set(1, 2, 0).unwrap();
        b.finish_unvalidated().unwrap()
    }

    #[test]
    fn round_robin_k4_is_valid() {
        assert!(round_robin(4).unwrap().validate().is_empty());
    }

    #[test]
    fn monochrome_triangle_violates_at_every_vertex() {
        let violations = monochrome_triangle().validate();
        let vertices: Vec<Vertex> = violations
            .iter()
            .filter_map(|v| match v {
                Violation::RepeatedColour { vertex, .. } => Some(*vertex),
                _ => None,
            })
            .collect();
        assert_eq!(vertices, vec![0, 1, 2]);
    }

    #[test]
    fn builder_rejects_improper_input() {
        let mut b = ColouringBuilder::new(HostGraph::complete(3).unwrap());
        b.set(0, 1, 0).unwrap();
        b.set(0, 2, 0).unwrap();
        b.set(1, 2, 0).unwrap();
        assert!(matches!(b.finish(), Err(Error::ImproperColouring { count: 3, .. })));
    }

    #[test]
    fn xor_k8_valid_by_enumeration() {
        // Independent check: every vertex sees 7 distinct colours.
        let col = xor_factorization(3).unwrap();
        for v in 0..8 {
            let mut colours: Vec<u64> =
                (0..8).filter(|&u| u != v).map(|u| col.raw_id(col.colour(u, v).unwrap())).collect();
            colours.sort_unstable();
            colours.dedup();
            assert_eq!(colours.len(), 7);
        }
        assert!(col.validate().is_empty());
    }

    #[test]
    fn builder_structural_errors() {
        let host = HostGraph::complete(3).unwrap();
        let mut b = ColouringBuilder::new(host);
        assert!(b.set(1, 1, 0).is_err());
        assert!(b.set(0, 3, 0).is_err());
        b.set(0, 1, 5).unwrap();
        assert!(b.set(1, 0, 6).is_err());
        assert!(matches!(b.finish(), Err(Error::MalformedColouring(_))));

        let mut b = ColouringBuilder::new(HostGraph::bipartite(2).unwrap());
        assert!(b.set(0, 1, 0).is_err());
    }

    #[test]
    fn raw_ids_are_densified_in_order() {
        let mut b = ColouringBuilder::new(HostGraph::complete(3).unwrap());
        b.set(0, 1, 90).unwrap();
        b.set(0, 2, 7).unwrap();
        b.set(1, 2, 1000).unwrap();
        let col = b.finish().unwrap();
        assert_eq!(col.colour(0, 2), Some(0));
        assert_eq!(col.colour(0, 1), Some(1));
        assert_eq!(col.colour(2, 1), Some(2));
        assert_eq!(col.raw_id(2), 1000);
        assert_eq!(col.dense_id(90), Some(1));
    }

    #[test]
    fn edges_between_examples() {
        let col = round_robin(4).unwrap();
        let all = col.full_subgraph();
        assert_eq!(all.edges_between(&[0, 1], &[2, 3]).unwrap(), 4);
        let none = col.restrict(ColourSet::empty(3)).unwrap();
        assert_eq!(none.edges_between(&[0, 1], &[2, 3]).unwrap(), 0);
        let zero = col.restrict(ColourSet::from_ids(3, [0]).unwrap()).unwrap();
        assert_eq!(zero.edges_between(&[0, 1], &[2, 3]).unwrap(), 2);
        assert!(all.edges_between(&[0, 1], &[1, 2]).is_err());
    }

    #[test]
    fn restrict_and_complement() {
        let col = round_robin(4).unwrap();
        let empty = ColourSet::empty(3);
        assert_eq!(col.complement_colours(&empty).unwrap().len(), 3);
        assert!(col.complement_colours(&ColourSet::full(3)).unwrap().is_empty());
        let g = col.restrict(ColourSet::from_ids(3, [0, 1]).unwrap()).unwrap();
        assert_eq!(g.edge_count(), 4);
        assert!(col.restrict(ColourSet::empty(5)).is_err());
        assert!(ColourSet::from_ids(3, [3]).is_err());
    }

    #[test]
    fn colour_set_iterates_in_order() {
        let set = ColourSet::from_ids(200, [150, 3, 64, 63, 199]).unwrap();
        assert_eq!(set.iter().collect::<Vec<_>>(), vec![3, 63, 64, 150, 199]);
        let mut set = set;
        assert!(set.remove(64));
        assert!(!set.remove(64));
        assert_eq!(set.len(), 4);
        assert_eq!(set.complement().len(), 196);
    }

    #[test]
    fn bipartite_pairs_must_be_on_opposite_sides() {
        let col = crate::generators::latin_to_bipartite(&crate::generators::LatinSquare::cyclic(3)).unwrap();
        assert!(col.check_pair(&[0, 1], &[3, 4]).is_ok());
        assert!(col.check_pair(&[0, 1], &[2]).is_err());
        assert_eq!(col.full_subgraph().edges_between(&[0, 1], &[3, 4, 5]).unwrap(), 6);
    }
}
