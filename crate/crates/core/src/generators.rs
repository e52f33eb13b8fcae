//! Colouring families: round-robin 1-factorizations, the XOR family,
//! seeded random proper colourings and Latin-square bipartite colourings.

use std::fmt;

use crate::colouring::{Colour, HostGraph, ProperEdgeColouring, Vertex, NONE};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// Largest XOR exponent accepted (`2^14` vertices).
pub const MAX_XOR_EXPONENT: u32 = 14;

fn dense_colouring<F>(host: HostGraph, colour_count: usize, mut colour_of: F) -> ProperEdgeColouring
where
    F: FnMut(Vertex, Vertex) -> Colour,
{
    let total = host.vertex_count();
    let mut matrix = vec![NONE; total * total];
    for u in 0..total {
        for v in u + 1..total {
            if host.is_edge(u, v) {
                let c = colour_of(u, v);
                matrix[u * total + v] = c;
                matrix[v * total + u] = c;
            }
        }
    }
    ProperEdgeColouring::from_dense(host, matrix, (0..colour_count as u64).collect())
}

/// Circle-method 1-factorization of `K_n` for even `n`.
///
/// Colour `i` pairs `{n-1, i}` with `{(i+j) mod (n-1), (i-j) mod (n-1)}` for
/// `j = 1..n/2-1`.
pub fn round_robin(n: usize) -> Result<ProperEdgeColouring> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::InvalidArgument(format!("round-robin needs an even n >= 2, got {n}")));
    }
    let host = HostGraph::complete(n)?;
    let hub = n - 1;
    let mut matrix = vec![NONE; n * n];
    let mut put = |u: usize, v: usize, c: usize| {
        matrix[u * n + v] = c as Colour;
        matrix[v * n + u] = c as Colour;
    };
    for i in 0..hub {
        put(hub, i, i);
        for j in 1..n / 2 {
            put((i + j) % hub, (i + hub - j) % hub, i);
        }
    }
    Ok(ProperEdgeColouring::from_dense(host, matrix, (0..hub as u64).collect()))
}

/// `K_{2^k}` coloured by `colour({x, y}) = x XOR y`; raw colour ids are `1..2^k`.
pub fn xor_factorization(k: u32) -> Result<ProperEdgeColouring> {
    if k == 0 || k > MAX_XOR_EXPONENT {
        return Err(Error::InvalidArgument(format!("XOR exponent must be in 1..={MAX_XOR_EXPONENT}, got {k}")));
    }
    let n = 1usize << k;
    let host = HostGraph::complete(n)?;
    let mut matrix = vec![NONE; n * n];
    for u in 0..n {
        for v in 0..n {
            if u != v {
                matrix[u * n + v] = ((u ^ v) - 1) as Colour;
            }
        }
    }
    Ok(ProperEdgeColouring::from_dense(host, matrix, (1..n as u64).collect()))
}

/// Seeded proper colouring of `K_n`: a round-robin factorization (of `K_{n+1}`
/// minus its last vertex for odd `n`) with shuffled vertex and colour labels.
///
/// The vertex permutation is drawn first, then the colour permutation, both by
/// Fisher-Yates from `SplitMix64(seed)`.
pub fn random_proper(n: usize, seed: u64) -> Result<ProperEdgeColouring> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("random colouring needs n >= 2, got {n}")));
    }
    let base = round_robin(if n % 2 == 0 { n } else { n + 1 })?;
    let colour_count = base.colour_count();
    let mut rng = SplitMix64::new(seed);
    let mut vertex_perm: Vec<Vertex> = (0..n).collect();
    rng.shuffle(&mut vertex_perm);
    let mut colour_perm: Vec<Colour> = (0..colour_count as Colour).collect();
    rng.shuffle(&mut colour_perm);

    let host = HostGraph::complete(n)?;
    let mut matrix = vec![NONE; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let c = colour_perm[base.colour(u, v).expect("complete host") as usize];
            let (pu, pv) = (vertex_perm[u], vertex_perm[v]);
            matrix[pu * n + pv] = c;
            matrix[pv * n + pu] = c;
        }
    }
    Ok(ProperEdgeColouring::from_dense(host, matrix, (0..colour_count as u64).collect()))
}

/// An `n x n` array in which each symbol `0..n` occurs once per row and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u32>,
}

impl LatinSquare {
    /// Validates `cells` (row-major); the error names the first offending cell.
    pub fn new(n: usize, cells: Vec<u32>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Latin square of order 0".into()));
        }
        if cells.len() != n * n {
            return Err(Error::InvalidArgument(format!("expected {} cells, got {}", n * n, cells.len())));
        }
        let mut seen = vec![usize::MAX; n];
        for row in 0..n {
            for col in 0..n {
                let s = cells[row * n + col] as usize;
                if s >= n {
                    return Err(Error::InvalidLatinSquare { row, col, detail: format!("symbol {s} out of range") });
                }
                if seen[s] == row {
                    return Err(Error::InvalidLatinSquare { row, col, detail: format!("symbol {s} repeats in the row") });
                }
                seen[s] = row;
            }
        }
        seen.fill(usize::MAX);
        for col in 0..n {
            for row in 0..n {
                let s = cells[row * n + col] as usize;
                if seen[s] == col {
                    return Err(Error::InvalidLatinSquare {
                        row,
                        col,
                        detail: format!("symbol {s} repeats in the column"),
                    });
                }
                seen[s] = col;
            }
        }
        Ok(LatinSquare { n, cells })
    }

    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let n = rows.len();
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Error::InvalidLatinSquare { row: i, col: r.len().min(n), detail: "ragged row".into() });
        }
        LatinSquare::new(n, rows.concat())
    }

    /// `cell(j, k) = (j + k) mod n`.
    pub fn cyclic(n: usize) -> Self {
        let cells = (0..n).flat_map(|j| (0..n).map(move |k| ((j + k) % n) as u32)).collect();
        LatinSquare { n, cells }
    }

    /// Parses `n` lines of `n` whitespace-separated symbols; blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: i + 1, detail: e.to_string() })?;
            rows.push(row);
        }
        LatinSquare::from_rows(&rows)
    }

    /// Reads the square back off a bipartite colouring (`cell(j,k)` = raw colour of `x_j y_k`).
    pub fn from_bipartite(colouring: &ProperEdgeColouring) -> Result<Self> {
        let host = colouring.host();
        if host.kind != crate::colouring::HostKind::CompleteBipartite {
            return Err(Error::InvalidHost("Latin squares come from bipartite hosts".into()));
        }
        let n = host.n;
        let mut cells = Vec::with_capacity(n * n);
        for j in 0..n {
            for k in 0..n {
                let raw = colouring.raw_id(colouring.colour(j, n + k).expect("bipartite edge"));
                let symbol = u32::try_from(raw)
                    .map_err(|_| Error::InvalidLatinSquare { row: j, col: k, detail: format!("symbol {raw} too large") })?;
                cells.push(symbol);
            }
        }
        LatinSquare::new(n, cells)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn cell(&self, row: usize, col: usize) -> u32 {
        self.cells[row * self.n + col]
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.n) {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// `K_{n,n}` with a colour-`i` edge `x_j y_k` whenever `L(j, k) = i`.
pub fn latin_to_bipartite(square: &LatinSquare) -> Result<ProperEdgeColouring> {
    let n = square.order();
    let host = HostGraph::bipartite(n)?;
    Ok(dense_colouring(host, n, |u, v| {
        let (x, y) = if u < v { (u, v - n) } else { (v, u - n) };
        square.cell(x, y)
    }))
}
