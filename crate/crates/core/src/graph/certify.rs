//! Exhaustive divisible-design and strong-regularity checks.
//!
//! Every check counts common neighbours for all `v(v-1)/2` vertex pairs; no
//! sampling. A strongly regular graph is carried as the one-class case
//! (`m = 1`, `n = v`) with `lambda1`/`lambda2` holding the adjacent and
//! non-adjacent counts, which reduces to the usual `lambda1 = lambda2` tuple
//! whenever `lambda = mu`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DdgParams {
    pub v: u64,
    pub k: u64,
    pub lambda1: u64,
    pub lambda2: u64,
    pub m: u64,
    pub n: u64,
}

impl DdgParams {
    pub const fn new(v: u64, k: u64, lambda1: u64, lambda2: u64, m: u64, n: u64) -> Self {
        Self { v, k, lambda1, lambda2, m, n }
    }

    pub fn tuple(&self) -> (u64, u64, u64, u64, u64, u64) {
        (self.v, self.k, self.lambda1, self.lambda2, self.m, self.n)
    }

    /// `k - lambda1`, the square of the within-class eigenvalue.
    pub fn theta_f_squared(&self) -> i64 {
        self.k as i64 - self.lambda1 as i64
    }

    /// `k^2 - lambda2 v`, the square of the between-class eigenvalue.
    pub fn theta_g_squared(&self) -> i64 {
        (self.k * self.k) as i64 - (self.lambda2 * self.v) as i64
    }

    /// Walks of length two from a vertex: `k^2 = k + lambda1 (n-1) + lambda2 (v-n)`.
    pub fn satisfies_counting_identity(&self) -> bool {
        self.m * self.n == self.v
            && self.k * self.k
                == self.k + self.lambda1 * (self.n - 1) + self.lambda2 * (self.v - self.n)
    }

    pub fn is_srg_case(&self) -> bool {
        self.m == 1 || self.lambda1 == self.lambda2
    }
}

impl std::fmt::Display for DdgParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{},{},{})", self.v, self.k, self.lambda1, self.lambda2, self.m, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl SrgParams {
    pub const fn new(v: u64, k: u64, lambda: u64, mu: u64) -> Self {
        Self { v, k, lambda, mu }
    }

    pub fn tuple(&self) -> (u64, u64, u64, u64) {
        (self.v, self.k, self.lambda, self.mu)
    }

    /// Parameters of the complementary strongly regular graph.
    pub fn complement(&self) -> Self {
        let (v, k, l, m) = (self.v, self.k, self.lambda, self.mu);
        Self::new(v, v - k - 1, v + m - 2 * k - 2, v + l - 2 * k)
    }

    pub fn as_ddg(&self) -> DdgParams {
        DdgParams::new(self.v, self.k, self.lambda, self.mu, 1, self.v)
    }
}

impl std::fmt::Display for SrgParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.v, self.k, self.lambda, self.mu)
    }
}

/// A vertex partition given by class labels `0..class_count`, numbered in
/// order of first appearance.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    labels: Vec<u32>,
}

impl Partition {
    /// Relabels arbitrary class labels into first-appearance order.
    pub fn from_labels(labels: &[u32]) -> Self {
        let mut seen = std::collections::HashMap::new();
        let labels = labels
            .iter()
            .map(|l| {
                let next = seen.len() as u32;
                *seen.entry(*l).or_insert(next)
            })
            .collect();
        Self { labels }
    }

    pub fn single(n: usize) -> Self {
        Self { labels: vec![0; n] }
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn class_of(&self, x: usize) -> u32 {
        self.labels[x]
    }

    pub fn class_count(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.class_count()];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(x);
        }
        out
    }

    /// `Some(size)` when all classes have the same size.
    pub fn uniform_size(&self) -> Result<usize, GraphError> {
        let classes = self.classes();
        let first = classes.first().map_or(0, Vec::len);
        for c in &classes {
            if c.len() != first {
                return Err(GraphError::UnequalClasses(first, c.len()));
            }
        }
        Ok(first)
    }
}

/// One way of reading a graph as a divisible design graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interpretation {
    pub lambda1: u64,
    pub lambda2: u64,
    pub partition: Partition,
}

impl Interpretation {
    fn is_proper(&self) -> bool {
        let m = self.partition.class_count();
        m > 1 && m < self.partition.labels().len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DdgCertificate {
    pub params: DdgParams,
    pub partition: Partition,
    /// Set when the graph is strongly regular (including the `lambda1 = lambda2` DDG case).
    pub srg: Option<SrgParams>,
    /// All valid interpretations found during discovery; the first is `partition`.
    pub alternatives: Vec<Interpretation>,
}

/// Full table of common-neighbour counts, diagonal holding the degree.
pub fn common_neighbour_matrix(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.order())
        .into_par_iter()
        .map(|x| (0..g.order()).map(|y| g.common_unchecked(x, y) as u32).collect())
        .collect()
}

fn check_nondegenerate(g: &Graph) -> Result<usize, GraphError> {
    if g.order() < 2 {
        return Err(GraphError::Degenerate("too small"));
    }
    if g.is_edgeless() {
        return Err(GraphError::Degenerate("edgeless"));
    }
    if g.is_complete() {
        return Err(GraphError::Degenerate("complete"));
    }
    g.check_regular()
}

pub fn verify_srg(g: &Graph) -> Result<SrgParams, GraphError> {
    let k = check_nondegenerate(g)?;
    let n = g.order();
    let (mut lambda, mut mu) = (None, None);
    for x in 0..n {
        for y in x + 1..n {
            let adjacent = g.has_edge(x, y);
            let count = g.common_unchecked(x, y);
            let slot = if adjacent { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(count),
                Some(expected) if expected != count => {
                    return Err(GraphError::NotSrg { x, y, adjacent, count, expected });
                }
                _ => {}
            }
        }
    }
    let lambda = lambda.unwrap_or(0) as u64;
    let mu = mu.unwrap_or(0) as u64;
    Ok(SrgParams::new(n as u64, k as u64, lambda, mu))
}

/// All readings of `g` as a divisible design graph, proper ones (`1 < m < v`)
/// first, then by lexicographic class assignment. The one-class reading is
/// included when the graph is strongly regular.
pub fn discover_partition(g: &Graph) -> Result<Vec<Interpretation>, GraphError> {
    check_nondegenerate(g)?;
    let counts = common_neighbour_matrix(g);
    let n = g.order();
    let mut values: Vec<u32> = (0..n)
        .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
        .map(|(x, y)| counts[x][y])
        .collect();
    values.sort_unstable();
    values.dedup();

    let mut found = Vec::new();
    for &lambda1 in &values {
        if let Some(interp) = partition_for(&counts, lambda1) {
            found.push(interp);
        }
    }
    if !found.iter().any(|i| i.partition.class_count() == 1) {
        if let Ok(srg) = verify_srg(g) {
            found.push(Interpretation {
                lambda1: srg.lambda,
                lambda2: srg.mu,
                partition: Partition::single(n),
            });
        }
    }
    if found.is_empty() {
        return Err(GraphError::NoPartition);
    }
    found.sort_by(|a, b| {
        b.is_proper()
            .cmp(&a.is_proper())
            .then_with(|| a.partition.cmp(&b.partition))
    });
    Ok(found)
}

/// Tests whether "count equals `lambda1`" closes to an equivalence relation
/// with equal classes and a constant count across classes.
fn partition_for(counts: &[Vec<u32>], lambda1: u32) -> Option<Interpretation> {
    let n = counts.len();
    let mut labels = vec![u32::MAX; n];
    let mut next = 0;
    for x in 0..n {
        if labels[x] != u32::MAX {
            continue;
        }
        for y in x..n {
            if y == x || counts[x][y] == lambda1 {
                if labels[y] != u32::MAX {
                    return None;
                }
                labels[y] = next;
            }
        }
        next += 1;
    }
    let partition = Partition::from_labels(&labels);
    partition.uniform_size().ok()?;
    let mut lambda2 = None;
    for x in 0..n {
        for y in x + 1..n {
            let same = labels[x] == labels[y];
            let c = counts[x][y];
            if same != (c == lambda1) {
                return None;
            }
            if !same {
                match lambda2 {
                    None => lambda2 = Some(c),
                    Some(l) if l != c => return None,
                    _ => {}
                }
            }
        }
    }
    Some(Interpretation {
        lambda1: lambda1 as u64,
        lambda2: lambda2.unwrap_or(lambda1) as u64,
        partition,
    })
}

/// Certifies `g` as a divisible design graph. With a partition, every
/// same-class pair must share one count and every cross pair another;
/// without, the preferred discovered interpretation is used.
pub fn verify_ddg(g: &Graph, partition: Option<&Partition>) -> Result<DdgCertificate, GraphError> {
    let k = check_nondegenerate(g)? as u64;
    let v = g.order() as u64;
    let srg = verify_srg(g).ok();
    let (interp, alternatives) = match partition {
        Some(p) => {
            let interp = check_partition(g, p)?;
            (interp.clone(), vec![interp])
        }
        None => {
            let all = discover_partition(g)?;
            (all[0].clone(), all)
        }
    };
    let m = interp.partition.class_count() as u64;
    Ok(DdgCertificate {
        params: DdgParams::new(v, k, interp.lambda1, interp.lambda2, m, v / m),
        partition: interp.partition,
        srg,
        alternatives,
    })
}

fn check_partition(g: &Graph, p: &Partition) -> Result<Interpretation, GraphError> {
    let n = g.order();
    if p.labels().len() != n {
        return Err(GraphError::PartitionSize { got: p.labels().len(), n });
    }
    p.uniform_size()?;
    let (mut within, mut across) = (None, None);
    for x in 0..n {
        for y in x + 1..n {
            let slot = if p.class_of(x) == p.class_of(y) { &mut within } else { &mut across };
            let count = g.common_unchecked(x, y);
            match *slot {
                None => *slot = Some((count, x, y)),
                Some((expected, _, _)) if expected != count => {
                    return Err(GraphError::NotDivisible { x, y, count, expected });
                }
                _ => {}
            }
        }
    }
    let lambda1 = within.map_or(0, |w| w.0) as u64;
    let lambda2 = across.map_or(lambda1 as usize, |a| a.0) as u64;
    Ok(Interpretation { lambda1, lambda2, partition: Partition::from_labels(p.labels()) })
}
