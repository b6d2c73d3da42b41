use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::{Graph, GraphError};

/// `{b_0, ..., b_{d-1}; c_1, ..., c_d}` of a distance-regular graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionArray {
    pub b: Vec<usize>,
    pub c: Vec<usize>,
}

impl IntersectionArray {
    pub fn diameter(&self) -> usize {
        self.c.len()
    }
}

impl std::fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(",");
        write!(f, "{{{};{}}}", join(&self.b), join(&self.c))
    }
}

fn bfs(g: &Graph, source: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.order()];
    dist[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(x) = queue.pop_front() {
        let d = dist[x].unwrap();
        for y in g.neighbours(x) {
            if dist[y].is_none() {
                dist[y] = Some(d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// BFS layering from every vertex; succeeds only if `b_i` and `c_i` are global constants.
pub fn intersection_array(g: &Graph) -> Result<IntersectionArray, GraphError> {
    let n = g.order();
    if n == 0 {
        return Err(GraphError::Disconnected);
    }
    let mut b: Vec<Option<usize>> = Vec::new();
    let mut c: Vec<Option<usize>> = Vec::new();
    let mut diameter = None;
    for x in 0..n {
        let dist = bfs(g, x);
        if dist.iter().any(Option::is_none) {
            return Err(GraphError::Disconnected);
        }
        let dist: Vec<usize> = dist.into_iter().map(Option::unwrap).collect();
        let d = *dist.iter().max().unwrap();
        match diameter {
            None => {
                diameter = Some(d);
                b = vec![None; d + 1];
                c = vec![None; d + 1];
            }
            Some(e) if e != d => {
                return Err(GraphError::NotDistanceRegular(format!(
                    "eccentricity {d} at vertex {x}, {e} at vertex 0"
                )));
            }
            _ => {}
        }
        for y in 0..n {
            let i = dist[y];
            let (mut up, mut down) = (0, 0);
            for z in g.neighbours(y) {
                if dist[z] + 1 == i {
                    down += 1;
                } else if dist[z] == i + 1 {
                    up += 1;
                }
            }
            for (slot, value, name) in [(&mut b[i], up, "b"), (&mut c[i], down, "c")] {
                match *slot {
                    None => *slot = Some(value),
                    Some(prev) if prev != value => {
                        return Err(GraphError::NotDistanceRegular(format!(
                            "{name}_{i} takes values {prev} and {value} (pair {x}, {y})"
                        )));
                    }
                    _ => {}
                }
            }
        }
    }
    let d = diameter.unwrap();
    Ok(IntersectionArray {
        b: b[..d].iter().map(|v| v.unwrap()).collect(),
        c: c[1..].iter().map(|v| v.unwrap()).collect(),
    })
}
