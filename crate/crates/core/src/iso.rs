//! Canonical labelling by individualisation and refinement.
//!
//! Each search node holds an ordered partition of the vertices, refined to
//! be equitable and then split further by a triangle-count invariant. Leaves
//! are discrete partitions, read as a labelling; the canonical labelling is
//! the leaf with the largest (trace sequence, relabelled adjacency) pair.
//! Leaves with equal relabelled adjacency give automorphisms, which prune the
//! tree by orbits and yield the group order along the first path.

use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::graph::{graph6, Graph};

pub const MAX_ORDER: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("graph has {0} vertices, canonical labelling is capped at {MAX_ORDER}")]
    TooLarge(usize),
}

/// graph6 bytes of the canonically relabelled graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(pub Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Lowercase hex SHA-256 of the form.
    pub fn hash_hex(&self) -> String {
        Sha256::digest(&self.0).iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl std::fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

#[derive(Debug, Clone)]
pub struct Canonical {
    /// `labelling[v]` is the canonical position of vertex `v`.
    pub labelling: Vec<usize>,
    pub form: CanonicalForm,
    pub group_order: BigUint,
    /// Automorphisms as images `gen[v]`; they generate the full group.
    pub generators: Vec<Vec<usize>>,
    pub nodes: u64,
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Clone)]
struct Partition {
    order: Vec<usize>,
    /// start position of the cell holding each vertex
    cell: Vec<usize>,
    /// exclusive end of the cell starting at each start position
    end: Vec<usize>,
    cells: usize,
}

impl Partition {
    fn unit(n: usize) -> Self {
        let mut end = vec![0; n];
        if n > 0 {
            end[0] = n;
        }
        Self { order: (0..n).collect(), cell: vec![0; n], end, cells: usize::from(n > 0) }
    }

    fn is_discrete(&self) -> bool {
        self.cells == self.order.len()
    }

    fn starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.cells);
        let mut s = 0;
        while s < self.order.len() {
            out.push(s);
            s = self.end[s];
        }
        out
    }

    /// Splits the cell at `start` by `key` (ascending); returns fragment starts.
    fn split_by(&mut self, start: usize, key: &dyn Fn(usize) -> u64) -> Vec<usize> {
        let end = self.end[start];
        let slice = &mut self.order[start..end];
        slice.sort_by_key(|&v| (key(v), v));
        let mut starts = vec![start];
        for p in start + 1..end {
            if key(self.order[p]) != key(self.order[p - 1]) {
                starts.push(p);
            }
        }
        for (i, &s) in starts.iter().enumerate() {
            let e = starts.get(i + 1).copied().unwrap_or(end);
            self.end[s] = e;
            for p in s..e {
                self.cell[self.order[p]] = s;
            }
        }
        self.cells += starts.len() - 1;
        starts
    }

    /// Moves `v` to the front of its cell as a singleton.
    fn individualise(&mut self, v: usize) -> usize {
        let s = self.cell[v];
        let p = self.order[s..self.end[s]].iter().position(|&x| x == v).expect("v in its cell") + s;
        self.order.swap(s, p);
        let e = self.end[s];
        self.end[s] = s + 1;
        self.end[s + 1] = e;
        for q in s + 1..e {
            self.cell[self.order[q]] = s + 1;
        }
        self.cells += 1;
        s
    }

    fn labelling(&self) -> Vec<usize> {
        let mut lab = vec![0; self.order.len()];
        for (p, &v) in self.order.iter().enumerate() {
            lab[v] = p;
        }
        lab
    }
}

struct Refiner<'a> {
    g: &'a Graph,
    counts: Vec<u64>,
}

impl<'a> Refiner<'a> {
    fn new(g: &'a Graph) -> Self {
        Self { g, counts: vec![0; g.order()] }
    }

    /// Equitable refinement from the splitter cells in `queue`; returns the trace.
    fn equitable(&mut self, part: &mut Partition, queue: Vec<usize>, mut trace: u64) -> u64 {
        let n = part.order.len();
        let mut queued = vec![false; n];
        let mut queue: VecDeque<usize> = queue.into_iter().collect();
        for &s in &queue {
            queued[s] = true;
        }
        let mut touched_cells: Vec<usize> = Vec::new();
        let mut touched: Vec<usize> = Vec::new();
        while let Some(w) = queue.pop_front() {
            queued[w] = false;
            if part.is_discrete() {
                break;
            }
            for p in w..part.end[w] {
                for u in self.g.neighbours(part.order[p]) {
                    if self.counts[u] == 0 {
                        touched.push(u);
                        touched_cells.push(part.cell[u]);
                    }
                    self.counts[u] += 1;
                }
            }
            touched_cells.sort_unstable();
            touched_cells.dedup();
            for &x in &touched_cells {
                if part.end[x] - x == 1 {
                    continue;
                }
                let counts = &self.counts;
                let first = counts[part.order[x]];
                if part.order[x..part.end[x]].iter().all(|&v| counts[v] == first) {
                    trace = mix(trace ^ mix((w as u64) << 32 | x as u64) ^ first);
                    continue;
                }
                let frags = part.split_by(x, &|v| counts[v]);
                let mut largest = frags[0];
                for &f in &frags {
                    trace = mix(trace ^ ((f as u64) << 40) ^ ((part.end[f] - f) as u64) << 20 ^ counts[part.order[f]]);
                    if part.end[f] - f > part.end[largest] - largest {
                        largest = f;
                    }
                }
                let all = queued[x];
                for &f in &frags {
                    if !queued[f] && (all || f != largest) {
                        queued[f] = true;
                        queue.push_back(f);
                    }
                }
            }
            for &u in &touched {
                self.counts[u] = 0;
            }
            touched.clear();
            touched_cells.clear();
        }
        trace
    }

    /// Splits cells by the triangles each vertex sees inside each cell of its
    /// neighbours; returns the new fragment starts.
    fn triangle_split(&mut self, part: &mut Partition, trace: &mut u64) -> Vec<usize> {
        let n = part.order.len();
        let words = self.g.words_per_row();
        let starts = part.starts();
        let mut masks = vec![0u64; n * words];
        for &s in &starts {
            if part.end[s] - s > 1 {
                for p in s..part.end[s] {
                    let v = part.order[p];
                    masks[s * words + v / 64] |= 1 << (v % 64);
                }
            }
        }
        let mut inv = vec![0u64; n];
        for &s in &starts {
            if part.end[s] - s == 1 {
                continue;
            }
            for p in s..part.end[s] {
                let u = part.order[p];
                let ru = self.g.row(u);
                let mut acc = 0u64;
                for w in self.g.neighbours(u) {
                    let c = part.cell[w];
                    if part.end[c] - c == 1 {
                        continue;
                    }
                    let rw = self.g.row(w);
                    let mask = &masks[c * words..(c + 1) * words];
                    let t: u32 = (0..words).map(|i| (ru[i] & rw[i] & mask[i]).count_ones()).sum();
                    acc = acc.wrapping_add(mix(((c as u64) << 32) | t as u64));
                }
                inv[u] = acc;
            }
        }
        let mut fresh = Vec::new();
        for &s in &starts {
            if part.end[s] - s == 1 {
                continue;
            }
            let first = inv[part.order[s]];
            if part.order[s..part.end[s]].iter().all(|&v| inv[v] == first) {
                continue;
            }
            let frags = part.split_by(s, &|v| inv[v]);
            for &f in &frags {
                *trace = mix(*trace ^ ((f as u64) << 40) ^ inv[part.order[f]]);
            }
            fresh.extend(frags);
        }
        fresh
    }

    fn refine(&mut self, part: &mut Partition, queue: Vec<usize>, seed: u64) -> u64 {
        let mut trace = self.equitable(part, queue, seed);
        while !part.is_discrete() {
            let fresh = self.triangle_split(part, &mut trace);
            if fresh.is_empty() {
                break;
            }
            trace = self.equitable(part, fresh, trace);
        }
        mix(trace ^ part.cells as u64)
    }
}

struct Leaf {
    labelling: Vec<usize>,
    adjacency: Vec<u64>,
    traces: Vec<u64>,
    path: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    refiner: Refiner<'a>,
    first: Option<Leaf>,
    best: Option<Leaf>,
    generators: Vec<Vec<usize>>,
    path: Vec<usize>,
    traces: Vec<u64>,
    group_order: BigUint,
    nodes: u64,
}

fn common_prefix(a: &[usize], b: &[usize]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl<'a> Search<'a> {
    /// Orbit representatives under the generators fixing the current path.
    fn orbits(&self) -> Vec<usize> {
        let n = self.g.order();
        let mut parent: Vec<usize> = (0..n).collect();
        for gen in &self.generators {
            if self.path.iter().all(|&p| gen[p] == p) {
                for v in 0..n {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, gen[v]));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v)).collect()
    }

    fn relabelled(&self, labelling: &[usize]) -> Vec<u64> {
        self.g.permuted(labelling).bit_words().to_vec()
    }

    fn add_generator(&mut self, from: &[usize], to: &[usize]) {
        // vertex at position p in `from` maps to the vertex at position p in `to`
        let n = from.len();
        let mut at = vec![0; n];
        for (v, &p) in to.iter().enumerate() {
            at[p] = v;
        }
        let gen: Vec<usize> = (0..n).map(|v| at[from[v]]).collect();
        if gen.iter().enumerate().all(|(v, &w)| v == w) {
            return;
        }
        debug_assert!(is_automorphism(self.g, &gen));
        self.generators.push(gen);
    }

    fn leaf(&mut self, part: &Partition) -> Option<usize> {
        let labelling = part.labelling();
        let adjacency = self.relabelled(&labelling);
        let leaf = Leaf { labelling, adjacency, traces: self.traces.clone(), path: self.path.clone() };
        let Some(first) = &self.first else {
            self.best = Some(Leaf {
                labelling: leaf.labelling.clone(),
                adjacency: leaf.adjacency.clone(),
                traces: leaf.traces.clone(),
                path: leaf.path.clone(),
            });
            self.first = Some(leaf);
            return None;
        };
        if first.adjacency == leaf.adjacency {
            let (from, to, same_trace) = (leaf.labelling.clone(), first.labelling.clone(), first.traces == leaf.traces);
            let target = common_prefix(&leaf.path, &first.path);
            self.add_generator(&from, &to);
            if same_trace {
                return Some(target);
            }
        }
        let best = self.best.as_ref().expect("best set with first");
        match (&leaf.traces, &leaf.adjacency).cmp(&(&best.traces, &best.adjacency)) {
            std::cmp::Ordering::Greater => {
                self.best = Some(leaf);
                None
            }
            std::cmp::Ordering::Equal => {
                let (from, to) = (leaf.labelling.clone(), best.labelling.clone());
                let target = common_prefix(&leaf.path, &best.path);
                self.add_generator(&from, &to);
                Some(target)
            }
            std::cmp::Ordering::Less => None,
        }
    }

    /// Whether the node at the end of `self.traces` can still matter.
    fn keep(&self) -> bool {
        let level = self.traces.len();
        let first = self.first.as_ref().expect("first leaf exists");
        if first.traces.len() >= level && first.traces[..level] == self.traces[..] {
            return true;
        }
        let best = self.best.as_ref().expect("best leaf exists");
        let shared = level.min(best.traces.len());
        self.traces[..shared] >= best.traces[..shared]
    }

    fn visit(&mut self, part: Partition, on_first: bool) -> Option<usize> {
        self.nodes += 1;
        if part.is_discrete() {
            return self.leaf(&part);
        }
        let level = self.path.len();
        let starts = part.starts();
        let target = *starts
            .iter()
            .filter(|&&s| part.end[s] - s > 1)
            .min_by_key(|&&s| (part.end[s] - s, s))
            .expect("non-discrete partition has a non-singleton cell");
        let children: Vec<usize> = part.order[target..part.end[target]].to_vec();
        let mut explored: Vec<usize> = Vec::new();
        let mut orbits = self.orbits();
        let mut generators_seen = self.generators.len();
        for (i, &w) in children.iter().enumerate() {
            if self.generators.len() != generators_seen {
                orbits = self.orbits();
                generators_seen = self.generators.len();
            }
            if explored.iter().any(|&e| orbits[e] == orbits[w]) {
                continue;
            }
            explored.push(w);
            let mut child = part.clone();
            let cell = child.individualise(w);
            let trace = self.refiner.refine(&mut child, vec![cell], mix(cell as u64 ^ (level as u64) << 48));
            self.path.push(w);
            self.traces.push(trace);
            let jump = if self.first.is_none() || self.keep() { self.visit(child, on_first && i == 0) } else { None };
            self.path.pop();
            self.traces.pop();
            if let Some(t) = jump {
                if t < level {
                    return Some(t);
                }
            }
        }
        if on_first {
            let orbits = self.orbits();
            let size = children.iter().filter(|&&v| orbits[v] == orbits[children[0]]).count();
            self.group_order *= BigUint::from(size);
        }
        None
    }
}

pub fn is_automorphism(g: &Graph, perm: &[usize]) -> bool {
    let n = g.order();
    if perm.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    if perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
        return false;
    }
    (0..n).all(|x| g.degree(x) == g.degree(perm[x]) && g.neighbours(x).all(|y| g.has_edge(perm[x], perm[y])))
}

/// Full canonical labelling with automorphism group data.
pub fn canonical_labelling(g: &Graph) -> Result<Canonical, IsoError> {
    let n = g.order();
    if n > MAX_ORDER {
        return Err(IsoError::TooLarge(n));
    }
    let g = g.stripped();
    let mut refiner = Refiner::new(&g);
    let mut root = Partition::unit(n);
    let mut trace = 0u64;
    if n > 0 {
        let degrees = g.degrees();
        let frags = root.split_by(0, &|v| degrees[v] as u64);
        for &f in &frags {
            trace = mix(trace ^ ((f as u64) << 32) ^ degrees[root.order[f]] as u64);
        }
        trace = refiner.refine(&mut root, frags, trace);
    }
    let mut search = Search {
        g: &g,
        refiner,
        first: None,
        best: None,
        generators: Vec::new(),
        path: Vec::new(),
        traces: vec![trace],
        group_order: BigUint::from(1u32),
        nodes: 0,
    };
    search.visit(root, true);
    let best = search.best.take().expect("search reaches a leaf");
    let form = CanonicalForm(graph6::encode(&g.permuted(&best.labelling)));
    for gen in &search.generators {
        assert!(is_automorphism(&g, gen), "search produced a non-automorphism");
    }
    Ok(Canonical {
        labelling: best.labelling,
        form,
        group_order: search.group_order,
        generators: search.generators,
        nodes: search.nodes,
    })
}

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm, IsoError> {
    canonical_labelling(g).map(|c| c.form)
}

pub fn automorphism_group_order(g: &Graph) -> Result<(BigUint, Vec<Vec<usize>>), IsoError> {
    canonical_labelling(g).map(|c| (c.group_order, c.generators))
}

/// Cheap invariants compared before any search.
fn fingerprint(g: &Graph) -> (usize, Vec<usize>, Vec<(bool, usize)>) {
    let mut degrees = g.degrees();
    degrees.sort_unstable();
    let n = g.order();
    let mut pairs: Vec<(bool, usize)> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for x in 0..n {
        for y in x + 1..n {
            pairs.push((g.has_edge(x, y), g.common_unchecked(x, y)));
        }
    }
    pairs.sort_unstable();
    (n, degrees, pairs)
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> Result<bool, IsoError> {
    if a.order() != b.order() || a.edge_count() != b.edge_count() || fingerprint(a) != fingerprint(b) {
        return Ok(false);
    }
    Ok(canonical_form(a)? == canonical_form(b)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoClass {
    /// Lowest input index in the class.
    pub representative: usize,
    pub members: Vec<usize>,
    pub form_hash: String,
    pub group_order: String,
}

/// Partitions `graphs` by isomorphism, canonical forms computed in parallel.
/// Classes are ordered by representative.
pub fn classify(graphs: &[Graph]) -> Result<Vec<IsoClass>, IsoError> {
    let canon: Vec<Canonical> = graphs.par_iter().map(canonical_labelling).collect::<Result<_, _>>()?;
    let mut by_form: BTreeMap<&CanonicalForm, usize> = BTreeMap::new();
    let mut classes: Vec<IsoClass> = Vec::new();
    for (i, c) in canon.iter().enumerate() {
        match by_form.get(&c.form) {
            Some(&k) => classes[k].members.push(i),
            None => {
                by_form.insert(&c.form, classes.len());
                classes.push(IsoClass {
                    representative: i,
                    members: vec![i],
                    form_hash: c.form.hash_hex(),
                    group_order: c.group_order.to_string(),
                });
            }
        }
    }
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixture_graph, FIXTURE_NAMES};
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..n {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn brute_force_aut(g: &Graph) -> usize {
        permutations(g.order()).iter().filter(|p| is_automorphism(g, p)).count()
    }

    fn brute_force_iso(a: &Graph, b: &Graph) -> bool {
        a.order() == b.order() && permutations(a.order()).iter().any(|p| a.permuted(p).bit_words() == b.bit_words())
    }

    fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> Graph {
        let mut g = Graph::empty(n);
        for x in 0..n {
            for y in x + 1..n {
                if rng.random_bool(density) {
                    g.add_edge(x, y);
                }
            }
        }
        g
    }

    fn shuffled(g: &Graph, rng: &mut ChaCha8Rng) -> Graph {
        let mut perm: Vec<usize> = (0..g.order()).collect();
        perm.shuffle(rng);
        g.permuted(&perm)
    }

    #[test]
    fn small_group_orders() {
        let order = |g: &Graph| automorphism_group_order(g).unwrap().0;
        assert_eq!(order(&Graph::complete(4)), BigUint::from(24u32));
        assert_eq!(order(&Graph::cycle(5)), BigUint::from(10u32));
        assert_eq!(order(&Graph::empty(0)), BigUint::from(1u32));
        assert_eq!(order(&Graph::empty(3)), BigUint::from(6u32));
        assert_eq!(order(&fixture_graph("petersen").unwrap()), BigUint::from(120u32));
        assert_eq!(order(&fixture_graph("clebsch").unwrap()), BigUint::from(1920u32));
        assert_eq!(order(&fixture_graph("shrikhande").unwrap()), BigUint::from(192u32));
        assert_eq!(order(&fixture_graph("rook4x4").unwrap()), BigUint::from(1152u32));
    }

    #[test]
    fn agrees_with_brute_force_up_to_eight() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..60 {
            let n = rng.random_range(1..=7);
            let a = random_graph(&mut rng, n, 0.5);
            let b = if rng.random_bool(0.5) { shuffled(&a, &mut rng) } else { random_graph(&mut rng, n, 0.5) };
            assert_eq!(are_isomorphic(&a, &b).unwrap(), brute_force_iso(&a, &b));
            assert_eq!(automorphism_group_order(&a).unwrap().0, BigUint::from(brute_force_aut(&a)));
        }
        for _ in 0..8 {
            let a = random_graph(&mut rng, 8, 0.4);
            let b = random_graph(&mut rng, 8, 0.4);
            assert_eq!(are_isomorphic(&a, &b).unwrap(), brute_force_iso(&a, &b));
            assert_eq!(are_isomorphic(&a, &shuffled(&a, &mut rng)).unwrap(), true);
        }
    }

    #[test]
    fn relabelling_invariance_on_fixtures() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for name in FIXTURE_NAMES {
            let g = fixture_graph(name).unwrap();
            let c = canonical_labelling(&g).unwrap();
            for gen in &c.generators {
                assert!(is_automorphism(&g, gen));
            }
            for _ in 0..20 {
                assert_eq!(canonical_form(&shuffled(&g, &mut rng)).unwrap(), c.form, "{name}");
            }
        }
    }

    #[test]
    fn rook_and_shrikhande_differ() {
        let rook = fixture_graph("rook4x4").unwrap();
        let shrikhande = fixture_graph("shrikhande").unwrap();
        assert!(!are_isomorphic(&rook, &shrikhande).unwrap());
    }

    #[test]
    fn classify_groups_relabellings() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = fixture_graph("petersen").unwrap();
        let mut graphs: Vec<Graph> = (0..4).map(|_| shuffled(&p, &mut rng)).collect();
        graphs.insert(2, fixture_graph("rook4x4").unwrap());
        let classes = classify(&graphs).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].members, vec![0, 1, 3, 4]);
        assert_eq!(classes[1].representative, 2);
        assert_eq!(classes[0].group_order, "120");
    }

    #[test]
    fn cap() {
        assert_eq!(canonical_form(&Graph::empty(MAX_ORDER + 1)), Err(IsoError::TooLarge(MAX_ORDER + 1)));
    }
}
