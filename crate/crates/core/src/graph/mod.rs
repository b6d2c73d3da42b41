//! Bit-packed simple undirected graphs and their combinatorial certification.

mod certify;
mod distance;
mod fixtures;
pub mod graph6;

pub use certify::{
    common_neighbour_matrix, discover_partition, verify_ddg, verify_srg, DdgCertificate,
    DdgParams, Interpretation, Partition, SrgParams,
};
pub use distance::{intersection_array, IntersectionArray};
pub use fixtures::{fixture_graph, FIXTURE_NAMES};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("common neighbours of a vertex with itself are undefined (vertex {0})")]
    SameVertex(usize),
    #[error("graph is not regular: vertex {vertex} has degree {degree}, vertex 0 has {expected}")]
    NotRegular { vertex: usize, degree: usize, expected: usize },
    #[error("graph is {0}")]
    Degenerate(&'static str),
    #[error("pair ({x}, {y}) has {count} common neighbours, expected {expected}")]
    NotDivisible { x: usize, y: usize, count: usize, expected: usize },
    #[error("partition classes have unequal sizes ({0} and {1})")]
    UnequalClasses(usize, usize),
    #[error("partition has {got} labels for {n} vertices")]
    PartitionSize { got: usize, n: usize },
    #[error("no canonical partition exists")]
    NoPartition,
    #[error("not strongly regular: pair ({x}, {y}) (adjacent: {adjacent}) has {count} common neighbours, expected {expected}")]
    NotSrg { x: usize, y: usize, adjacent: bool, count: usize, expected: usize },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph is not distance-regular: {0}")]
    NotDistanceRegular(String),
    #[error("unknown fixture graph {0:?}")]
    UnknownName(String),
    #[error("graph6: {0}")]
    Graph6(String),
    #[error("adjacency matrix is not symmetric with zero diagonal at ({0}, {1})")]
    NotSimple(usize, usize),
}

/// A simple undirected graph stored as `n` rows of packed 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    origin: Option<Vec<u32>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={})", self.n, self.edge_count())
    }
}

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(64).max(1)
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = words_for(n);
        Self { n, words, bits: vec![0; n * words], origin: None }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for x in 0..n {
            for y in x + 1..n {
                g.add_edge(x, y);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        for x in 0..n {
            g.add_edge(x, (x + 1) % n);
        }
        g
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut g = Self::empty(n);
        for (x, y) in edges {
            g.add_edge(x, y);
        }
        g
    }

    /// Builds a graph from a 0/1 matrix, rejecting asymmetric input or loops.
    pub fn from_matrix(rows: &[Vec<u8>]) -> Result<Self, GraphError> {
        let n = rows.len();
        let mut g = Self::empty(n);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(GraphError::NotSimple(x, row.len()));
            }
            for (y, &a) in row.iter().enumerate() {
                if a > 1 || a != rows[y][x] || (x == y && a != 0) {
                    return Err(GraphError::NotSimple(x, y));
                }
                if a == 1 && x < y {
                    g.add_edge(x, y);
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, x: usize, y: usize) {
        assert!(x != y && x < self.n && y < self.n, "invalid edge ({x}, {y})");
        self.bits[x * self.words + y / 64] |= 1 << (y % 64);
        self.bits[y * self.words + x / 64] |= 1 << (x % 64);
    }

    #[inline]
    pub fn has_edge(&self, x: usize, y: usize) -> bool {
        self.bits[x * self.words + y / 64] >> (y % 64) & 1 == 1
    }

    /// The packed neighbourhood of `x`.
    #[inline]
    pub fn row(&self, x: usize) -> &[u64] {
        &self.bits[x * self.words..(x + 1) * self.words]
    }

    pub fn words_per_row(&self) -> usize {
        self.words
    }

    pub fn neighbours(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        iter_bits(self.row(x))
    }

    pub fn degree(&self, x: usize) -> usize {
        self.row(x).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|x| self.degree(x)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// `Some(k)` if every vertex has degree `k`.
    pub fn regular_degree(&self) -> Option<usize> {
        let k = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|x| self.degree(x) == k).then_some(k)
    }

    pub(crate) fn check_regular(&self) -> Result<usize, GraphError> {
        let k = if self.n == 0 { 0 } else { self.degree(0) };
        for x in 0..self.n {
            let d = self.degree(x);
            if d != k {
                return Err(GraphError::NotRegular { vertex: x, degree: d, expected: k });
            }
        }
        Ok(k)
    }

    #[inline]
    pub(crate) fn common_unchecked(&self, x: usize, y: usize) -> usize {
        self.row(x)
            .iter()
            .zip(self.row(y))
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// Number of common neighbours of two distinct vertices.
    pub fn common_neighbours(&self, x: usize, y: usize) -> Result<usize, GraphError> {
        for v in [x, y] {
            if v >= self.n {
                return Err(GraphError::OutOfRange { vertex: v, n: self.n });
            }
        }
        if x == y {
            return Err(GraphError::SameVertex(x));
        }
        Ok(self.common_unchecked(x, y))
    }

    pub fn complement(&self) -> Self {
        let mut g = Self::empty(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if x != y && !self.has_edge(x, y) {
                    g.bits[x * self.words + y / 64] |= 1 << (y % 64);
                }
            }
        }
        g.origin = self.origin.clone();
        g
    }

    /// Relabels vertices so that old vertex `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let mut g = Self::empty(self.n);
        for x in 0..self.n {
            for y in self.neighbours(x) {
                if x < y {
                    g.add_edge(perm[x], perm[y]);
                }
            }
        }
        if let Some(origin) = &self.origin {
            let mut moved = vec![0; self.n];
            for (v, &o) in origin.iter().enumerate() {
                moved[perm[v]] = o;
            }
            g.origin = Some(moved);
        }
        g
    }

    /// All rows concatenated.
    pub(crate) fn bit_words(&self) -> &[u64] {
        &self.bits
    }

    /// Same edges, annotations dropped. Equality on stripped graphs compares adjacency only.
    pub fn stripped(&self) -> Self {
        Self { origin: None, ..self.clone() }
    }

    /// Class-of-origin annotation recorded by the constructions.
    pub fn origin(&self) -> Option<&[u32]> {
        self.origin.as_deref()
    }

    pub fn with_origin(mut self, origin: Vec<u32>) -> Self {
        assert_eq!(origin.len(), self.n);
        self.origin = Some(origin);
        self
    }

    pub fn is_complete(&self) -> bool {
        self.n > 0 && self.edge_count() == self.n * (self.n - 1) / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Adjacency as a dense integer matrix with `diag` on the diagonal.
    pub fn shifted_matrix(&self, diag: i64) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|x| {
                (0..self.n)
                    .map(|y| if x == y { diag } else { self.has_edge(x, y) as i64 })
                    .collect()
            })
            .collect()
    }

    /// Cartesian product with vertex `(a, b)` numbered `a * other.n + b`.
    pub fn cartesian_product(&self, other: &Graph) -> Graph {
        let m = other.n;
        let mut g = Graph::empty(self.n * m);
        for a in 0..self.n {
            for b in 0..m {
                for c in other.neighbours(b) {
                    if b < c {
                        g.add_edge(a * m + b, a * m + c);
                    }
                }
                for c in self.neighbours(a) {
                    if a < c {
                        g.add_edge(a * m + b, c * m + b);
                    }
                }
            }
        }
        g
    }

    /// Line graph; vertices are the edges listed in lexicographic order.
    pub fn line_graph(&self) -> Graph {
        let edges: Vec<(usize, usize)> = (0..self.n)
            .flat_map(|x| self.neighbours(x).filter(move |&y| x < y).map(move |y| (x, y)))
            .collect();
        let mut g = Graph::empty(edges.len());
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if a == c || a == d || b == c || b == d {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

pub(crate) fn iter_bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            }
        })
    })
}
