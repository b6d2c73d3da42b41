//! Small named reference graphs.

use super::{Graph, GraphError};

pub const FIXTURE_NAMES: &[&str] =
    &["octahedron_line", "k4_cartesian_k2", "petersen", "rook4x4", "shrikhande", "clebsch"];

pub fn fixture_graph(name: &str) -> Result<Graph, GraphError> {
    match name {
        // octahedron = K_{2,2,2}: vertex i is antipodal to i ^ 1
        "octahedron_line" => {
            let octahedron = Graph::from_edges(
                6,
                (0..6).flat_map(|x| (x + 1..6).map(move |y| (x, y))).filter(|&(x, y)| x ^ 1 != y),
            );
            Ok(octahedron.line_graph())
        }
        "k4_cartesian_k2" => Ok(Graph::complete(4).cartesian_product(&Graph::complete(2))),
        "petersen" => {
            // Kneser graph K(5,2): 2-subsets adjacent when disjoint
            let pairs: Vec<(usize, usize)> =
                (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
            let mut g = Graph::empty(10);
            for (i, &(a, b)) in pairs.iter().enumerate() {
                for (j, &(c, d)) in pairs.iter().enumerate().skip(i + 1) {
                    if a != c && a != d && b != c && b != d {
                        g.add_edge(i, j);
                    }
                }
            }
            Ok(g)
        }
        "rook4x4" => Ok(Graph::complete(4).cartesian_product(&Graph::complete(4))),
        "shrikhande" => {
            // Cayley graph on Z4 x Z4 with connection set ±(1,0), ±(0,1), ±(1,1)
            let conn = [(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)];
            let mut g = Graph::empty(16);
            for a in 0..16usize {
                for (dx, dy) in conn {
                    let b = ((a / 4 + dx) % 4) * 4 + (a % 4 + dy) % 4;
                    if a < b {
                        g.add_edge(a, b);
                    }
                }
            }
            Ok(g)
        }
        "clebsch" => {
            // folded 5-cube: GF(2)^4, adjacent when differing in weight 1 or weight 4
            let mut g = Graph::empty(16);
            for a in 0..16usize {
                for b in a + 1..16 {
                    let w = (a ^ b).count_ones();
                    if w == 1 || w == 4 {
                        g.add_edge(a, b);
                    }
                }
            }
            Ok(g)
        }
        other => Err(GraphError::UnknownName(other.to_string())),
    }
}
