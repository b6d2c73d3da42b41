//! Affine designs stored as a class-by-point matrix of block labels.
//!
//! Row `j` of the matrix assigns every point the label (`0..q`) of the block
//! of parallel class `j` containing it, so `B^j(x)` is a single lookup and a
//! class is a partition of the points by construction.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::HadamardMatrix;
use crate::gf::{FieldError, FiniteField};
use crate::graph::Graph;

pub const DEFAULT_POINT_CAP: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axiom {
    /// Blocks from different classes meet in `r` points.
    Intersection,
    /// Each class is `q` disjoint equal blocks covering the points.
    ParallelClass,
}

/// Block `label` of parallel class `class`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRef {
    pub class: usize,
    pub label: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesignError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(u32),
    #[error("design would have {points} points, above the cap of {cap}")]
    TooLarge { points: usize, cap: usize },
    #[error("matrix is not a Hadamard matrix: rows {0} and {1} are not orthogonal with norm n")]
    NotHadamard(usize, usize),
    #[error("Hadamard matrix is not normalized (entry ({0}, {1}) of the first row/column is -1)")]
    NotNormalized(usize, usize),
    #[error("Hadamard order {0} is below 4")]
    HadamardTooSmall(usize),
    #[error("affine axiom {axiom:?} violated by blocks {first:?} and {second:?}: {detail}")]
    AxiomViolation { axiom: Axiom, first: BlockRef, second: BlockRef, detail: String },
    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("design text: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DesignParams {
    pub q: u64,
    pub r: u64,
    pub epsilon: u64,
    pub v: u64,
    pub b: u64,
    pub m: u64,
    pub k: u64,
    pub lambda: u64,
}

impl DesignParams {
    /// The full parameter table of an affine design with parameters `(q, r)`,
    /// or `None` when `(r - 1)/(q - 1)` is not an integer.
    pub fn from_q_r(q: u64, r: u64) -> Option<Self> {
        if q < 2 || r < 1 || (r - 1) % (q - 1) != 0 {
            return None;
        }
        let epsilon = (r - 1) / (q - 1);
        Some(Self {
            q,
            r,
            epsilon,
            v: q * q * r,
            b: q * q * q * epsilon + q * q + q,
            m: q * q * epsilon + q + 1,
            k: q * r,
            lambda: q * epsilon + 1,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineDesign {
    q: usize,
    r: usize,
    m: usize,
    v: usize,
    labels: Vec<u32>,
}

impl AffineDesign {
    /// Wraps a label matrix after range checks only; use [`verify_affine`] to certify it.
    pub fn from_labels(q: usize, r: usize, m: usize, v: usize, labels: Vec<u32>) -> Result<Self, DesignError> {
        if labels.len() != m * v {
            return Err(DesignError::Parse(format!("expected {} labels, got {}", m * v, labels.len())));
        }
        if let Some(pos) = labels.iter().position(|&l| l as usize >= q) {
            return Err(DesignError::OutOfRange(format!(
                "label {} at class {}, point {} is not below q = {q}",
                labels[pos],
                pos / v,
                pos % v
            )));
        }
        Ok(Self { q, r, m, v, labels })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn class_count(&self) -> usize {
        self.m
    }

    pub fn point_count(&self) -> usize {
        self.v
    }

    /// Label of the block of class `class` containing `point`.
    #[inline]
    pub fn label(&self, class: usize, point: usize) -> u32 {
        self.labels[class * self.v + point]
    }

    pub fn block_of(&self, class: usize, point: usize) -> Result<u32, DesignError> {
        if class >= self.m || point >= self.v {
            return Err(DesignError::OutOfRange(format!(
                "class {class} / point {point} (design has {} classes, {} points)",
                self.m, self.v
            )));
        }
        Ok(self.label(class, point))
    }

    pub fn class_labels(&self, class: usize) -> &[u32] {
        &self.labels[class * self.v..(class + 1) * self.v]
    }

    /// The design whose class `c` is this design's class `numbering[c]`.
    pub fn renumbered(&self, numbering: &[usize]) -> Result<Self, DesignError> {
        if !is_permutation(numbering, self.m) {
            return Err(DesignError::OutOfRange(format!(
                "{numbering:?} is not a permutation of 0..{}",
                self.m
            )));
        }
        let labels = numbering.iter().flat_map(|&c| self.class_labels(c).iter().copied()).collect();
        Ok(Self { labels, ..self.clone() })
    }

    /// Points, blocks and one vertex per parallel class; two designs with
    /// these graphs isomorphic are isomorphic as resolved designs.
    pub fn incidence_graph(&self) -> Graph {
        let blocks = self.m * self.q;
        let mut g = Graph::empty(self.v + blocks + self.m);
        for j in 0..self.m {
            for x in 0..self.v {
                g.add_edge(x, self.v + j * self.q + self.label(j, x) as usize);
            }
            for l in 0..self.q {
                g.add_edge(self.v + j * self.q + l, self.v + blocks + j);
            }
        }
        g
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {} {}\n", self.q, self.r, self.m, self.v);
        for j in 0..self.m {
            let row: Vec<String> = self.class_labels(j).iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, DesignError> {
        let mut nums = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .flat_map(str::split_whitespace)
            .map(|t| t.parse::<usize>().map_err(|e| DesignError::Parse(format!("{t:?}: {e}"))));
        let mut header = [0usize; 4];
        for h in header.iter_mut() {
            *h = nums.next().ok_or_else(|| DesignError::Parse("missing header `q r m v`".into()))??;
        }
        let [q, r, m, v] = header;
        let labels = nums.map(|n| n.map(|n| n as u32)).collect::<Result<Vec<_>, _>>()?;
        Self::from_labels(q, r, m, v, labels)
    }
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n && perm.iter().all(|&p| p < n && !std::mem::replace(&mut seen[p], true))
}

/// Points and hyperplanes of `AG(d, q)`.
///
/// Point `x` has coordinates given by its base-`q` digits, most significant
/// first. Classes follow the normal vectors whose first nonzero coordinate is
/// 1, in lexicographic order; the label of `x` in a class is the value of the
/// normal's linear functional at `x`.
pub fn affine_geometry_design(field: &FiniteField, d: u32) -> Result<AffineDesign, DesignError> {
    affine_geometry_design_capped(field, d, DEFAULT_POINT_CAP)
}

pub fn affine_geometry_design_capped(field: &FiniteField, d: u32, cap: usize) -> Result<AffineDesign, DesignError> {
    if d < 2 {
        return Err(DesignError::DimensionTooSmall(d));
    }
    let q = field.order() as usize;
    let v = (q as u128).pow(d);
    if v > cap as u128 {
        return Err(DesignError::TooLarge { points: usize::try_from(v).unwrap_or(usize::MAX), cap });
    }
    let v = v as usize;
    let d = d as usize;
    let coords = |x: usize| -> Vec<u32> {
        let mut c = vec![0u32; d];
        let mut x = x;
        for t in (0..d).rev() {
            c[t] = (x % q) as u32;
            x /= q;
        }
        c
    };
    let points: Vec<Vec<u32>> = (0..v).map(coords).collect();
    let normals: Vec<&Vec<u32>> = points
        .iter()
        .filter(|a| a.iter().find(|&&c| c != 0) == Some(&1))
        .collect();
    let m = normals.len();
    let mut labels = Vec::with_capacity(m * v);
    for a in &normals {
        for x in &points {
            let value = a.iter().zip(x).fold(0, |acc, (&ai, &xi)| field.add(acc, field.mul(ai, xi)));
            labels.push(value);
        }
    }
    AffineDesign::from_labels(q, q.pow(d as u32 - 2), m, v, labels)
}

/// The Hadamard 3-design of a normalized Hadamard matrix: points are the
/// columns, row `i >= 1` is a parallel class whose block 0 holds the `+1`
/// positions and block 1 the `-1` positions.
pub fn hadamard_3_design(h: &HadamardMatrix) -> Result<AffineDesign, DesignError> {
    let n = h.order();
    if n < 4 {
        return Err(DesignError::HadamardTooSmall(n));
    }
    if let Some((i, j)) = h.orthogonality_witness() {
        return Err(DesignError::NotHadamard(i, j));
    }
    for t in 0..n {
        if h.get(0, t) != 1 {
            return Err(DesignError::NotNormalized(0, t));
        }
        if h.get(t, 0) != 1 {
            return Err(DesignError::NotNormalized(t, 0));
        }
    }
    let labels = (1..n).flat_map(|i| (0..n).map(move |x| (h.get(i, x) == -1) as u32)).collect();
    AffineDesign::from_labels(2, n / 4, n - 1, n, labels)
}

/// Exhaustive check of both affine axioms and the parameter table.
pub fn verify_affine(design: &AffineDesign) -> Result<DesignParams, DesignError> {
    let (q, v, m) = (design.q, design.v, design.m);
    if q < 2 || m == 0 || v == 0 {
        return Err(DesignError::ParameterMismatch(format!("degenerate shape q={q}, m={m}, v={v}")));
    }
    let block_size = v / q;
    for j in 0..m {
        let mut sizes = vec![0usize; q];
        for &l in design.class_labels(j) {
            sizes[l as usize] += 1;
        }
        if let Some(l) = sizes.iter().position(|&s| s != block_size || v % q != 0) {
            let other = sizes.iter().position(|&s| s != sizes[l]).unwrap_or(l);
            return Err(DesignError::AxiomViolation {
                axiom: Axiom::ParallelClass,
                first: BlockRef { class: j, label: l as u32 },
                second: BlockRef { class: j, label: other as u32 },
                detail: format!("block sizes {sizes:?} do not split {v} points into {q} equal blocks"),
            });
        }
    }
    let r = design.r;
    for j1 in 0..m {
        for j2 in j1 + 1..m {
            let mut meet = vec![0usize; q * q];
            for x in 0..v {
                meet[design.label(j1, x) as usize * q + design.label(j2, x) as usize] += 1;
            }
            if let Some(pos) = meet.iter().position(|&c| c != r) {
                let first = BlockRef { class: j1, label: (pos / q) as u32 };
                let second = BlockRef { class: j2, label: (pos % q) as u32 };
                let (axiom, detail) = if meet[pos] == 0 {
                    (Axiom::ParallelClass, "disjoint blocks lie in different classes".to_string())
                } else {
                    (Axiom::Intersection, format!("blocks meet in {} points, expected r = {r}", meet[pos]))
                };
                return Err(DesignError::AxiomViolation { axiom, first, second, detail });
            }
        }
    }
    let params = DesignParams::from_q_r(q as u64, r as u64)
        .ok_or_else(|| DesignError::ParameterMismatch(format!("(r-1)/(q-1) is not an integer for q={q}, r={r}")))?;
    let check = |name: &str, got: u64, want: u64| {
        if got == want {
            Ok(())
        } else {
            Err(DesignError::ParameterMismatch(format!("{name} = {got}, table requires {want}")))
        }
    };
    check("v", v as u64, params.v)?;
    check("m", m as u64, params.m)?;
    check("b", (m * q) as u64, params.b)?;
    check("k", block_size as u64, params.k)?;
    for x in 0..v {
        for y in x + 1..v {
            let shared = (0..m).filter(|&j| design.label(j, x) == design.label(j, y)).count();
            if shared as u64 != params.lambda {
                return Err(DesignError::ParameterMismatch(format!(
                    "points {x} and {y} share {shared} blocks, table requires lambda = {}",
                    params.lambda
                )));
            }
        }
    }
    Ok(params)
}
