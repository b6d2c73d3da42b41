//! Graph assembly from affine designs, a selector square and block bijections.
//!
//! Vertices are numbered class-major: point `x` of design `i` is vertex
//! `i·q^d + x`. Distinct `x ∈ P_i`, `y ∈ P_j` are adjacent iff the block of
//! class `c = e(i,j)` through `y` is not the image under `σ_ij` of the block
//! of class `c` through `x`. Every output carries its class of origin.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::designs::{affine_geometry_design, is_permutation, AffineDesign, DesignError};
use crate::gf::{FieldError, FiniteField};
use crate::graph::{DdgParams, Graph, SrgParams};
use crate::latin::{derived_square, LatinError, Square};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Construction {
    One,
    Two,
    Three,
    Four,
}

impl Construction {
    pub fn number(self) -> u8 {
        match self {
            Self::One => 1,
            Self::Two => 2,
            Self::Three => 3,
            Self::Four => 4,
        }
    }
}

impl From<Construction> for u8 {
    fn from(c: Construction) -> u8 {
        c.number()
    }
}

impl TryFrom<u8> for Construction {
    type Error = ConstructError;

    fn try_from(n: u8) -> Result<Self, ConstructError> {
        match n {
            1 => Ok(Self::One),
            2 => Ok(Self::Two),
            3 => Ok(Self::Three),
            4 => Ok(Self::Four),
            other => Err(ConstructError::UnknownConstruction(other)),
        }
    }
}

impl std::fmt::Display for Construction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.number())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("construction {0} does not exist (expected 1-4)")]
    UnknownConstruction(u8),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bad bijection for pair ({i}, {j}): {reason}")]
    BadBijection { i: usize, j: usize, reason: String },
    #[error("selector entry at ({0}, {0}) is the join symbol; construction 4 forbids it on the diagonal")]
    DiagonalViolation(usize),
    #[error("invalid selector square: {0}")]
    InvalidSquare(String),
    #[error("degenerate dimension: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Latin(#[from] LatinError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Block bijections `σ_ij` for `i < j`, stored as label permutations of
/// `0..q`; `σ_ji` is the inverse and `σ_ii` the identity. Missing pairs are
/// the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BijectionFamily {
    perms: BTreeMap<(usize, usize), Vec<u32>>,
}

impl BijectionFamily {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Records `σ_ij = perm` (and `σ_ji = perm⁻¹`). `i == j` is accepted only
    /// for the identity.
    pub fn set(&mut self, i: usize, j: usize, perm: Vec<u32>) -> Result<(), ConstructError> {
        let as_usize: Vec<usize> = perm.iter().map(|&x| x as usize).collect();
        if !is_permutation(&as_usize, perm.len()) {
            return Err(ConstructError::BadBijection { i, j, reason: format!("{perm:?} is not a permutation") });
        }
        let identity = perm.iter().enumerate().all(|(a, &b)| a as u32 == b);
        if i == j {
            if !identity {
                return Err(ConstructError::BadBijection { i, j, reason: "σ_ii must be the identity".into() });
            }
            return Ok(());
        }
        let (key, stored) = if i < j { ((i, j), perm) } else { ((j, i), invert(&perm)) };
        if identity {
            self.perms.remove(&key);
        } else {
            self.perms.insert(key, stored);
        }
        Ok(())
    }

    /// Uniformly random family over all pairs of `classes` with block labels `0..q`.
    pub fn random<R: rand::Rng + ?Sized>(classes: usize, q: usize, rng: &mut R) -> Self {
        use rand::seq::SliceRandom;
        let mut out = Self::default();
        for i in 0..classes {
            for j in i + 1..classes {
                let mut perm: Vec<u32> = (0..q as u32).collect();
                perm.shuffle(rng);
                out.set(i, j, perm).expect("shuffled permutation");
            }
        }
        out
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&(usize, usize), &Vec<u32>)> {
        self.perms.iter()
    }

    fn check(&self, classes: usize, q: usize) -> Result<(), ConstructError> {
        for (&(i, j), perm) in &self.perms {
            if j >= classes {
                return Err(ConstructError::BadBijection { i, j, reason: format!("only {classes} designs") });
            }
            if perm.len() != q {
                return Err(ConstructError::BadBijection {
                    i,
                    j,
                    reason: format!("permutation of {} labels, blocks per class is {q}", perm.len()),
                });
            }
        }
        Ok(())
    }

    /// Dense lookup table: `table[i][j][label]`.
    fn table(&self, classes: usize, q: usize) -> Vec<Vec<Vec<u32>>> {
        let id: Vec<u32> = (0..q as u32).collect();
        let mut t = vec![vec![id; classes]; classes];
        for (&(i, j), perm) in &self.perms {
            t[j][i] = invert(perm);
            t[i][j] = perm.clone();
        }
        t
    }
}

fn invert(perm: &[u32]) -> Vec<u32> {
    let mut inv = vec![0u32; perm.len()];
    for (a, &b) in perm.iter().enumerate() {
        inv[b as usize] = a as u32;
    }
    inv
}

/// Where the selector square comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Square(Square),
    /// Construction 2: delete row/column `h` of `source`, with diagonal mask.
    Derived { source: Square, h: usize, mask: Vec<bool> },
}

impl Selector {
    pub fn square(&self) -> Result<Square, ConstructError> {
        match self {
            Self::Square(s) => Ok(s.clone()),
            Self::Derived { source, h, mask } => Ok(derived_square(source, *h, mask)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionSpec {
    pub which: Construction,
    pub q: usize,
    pub d: u32,
    pub designs: Vec<AffineDesign>,
    pub selector: Selector,
    pub bijections: BijectionFamily,
}

/// Number of parallel classes of AG(d, q): `(q^d - 1)/(q - 1)`.
pub fn class_count(q: usize, d: u32) -> usize {
    (q.pow(d) - 1) / (q - 1)
}

/// How many designs each construction takes, given the AG(d, q) class count.
pub fn design_count(which: Construction, q: usize, d: u32) -> usize {
    let m = class_count(q, d);
    match which {
        Construction::One => m,
        Construction::Two => m - 1,
        Construction::Three | Construction::Four => m + 1,
    }
}

impl ConstructionSpec {
    /// Identical copies of AG(d, q) with identity numbering and bijections.
    /// For construction 2 the selector must be [`Selector::Derived`].
    pub fn standard(which: Construction, q: usize, d: u32, selector: Selector) -> Result<Self, ConstructError> {
        if d < 2 {
            return Err(ConstructError::Degenerate(format!("d = {d} gives a single parallel class")));
        }
        let field = FiniteField::new(q as u32)?;
        let design = affine_geometry_design(&field, d)?;
        let count = design_count(which, q, d);
        Ok(Self { which, q, d, designs: vec![design; count], selector, bijections: BijectionFamily::identity() })
    }

    /// Reorders the parallel classes of design `index`.
    pub fn renumber(&mut self, index: usize, numbering: &[usize]) -> Result<(), ConstructError> {
        let count = self.designs.len();
        let design = self
            .designs
            .get_mut(index)
            .ok_or_else(|| ConstructError::DimensionMismatch(format!("design {index} of {count}")))?;
        *design = design.renumbered(numbering)?;
        Ok(())
    }

    pub fn build(&self) -> Result<Graph, ConstructError> {
        build(self)
    }
}

/// How the special symbol of constructions 3 and 4 joins two point sets.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Special {
    None,
    Empty,
    Complete,
}

fn build(spec: &ConstructionSpec) -> Result<Graph, ConstructError> {
    if spec.d < 2 {
        return Err(ConstructError::Degenerate(format!("d = {} gives a single parallel class", spec.d)));
    }
    let (q, d) = (spec.q, spec.d);
    let m = class_count(q, d);
    let points = q.pow(d);
    let r = q.pow(d - 2);
    let classes = design_count(spec.which, q, d);
    if classes < 2 {
        return Err(ConstructError::Degenerate(format!("construction {} at q = {q}, d = {d} has one design", spec.which)));
    }
    if spec.designs.len() != classes {
        return Err(ConstructError::DimensionMismatch(format!(
            "construction {} needs {classes} designs, got {}",
            spec.which,
            spec.designs.len()
        )));
    }
    for (i, des) in spec.designs.iter().enumerate() {
        if des.q() != q || des.r() != r || des.class_count() != m || des.point_count() != points {
            return Err(ConstructError::DimensionMismatch(format!(
                "design {i} has (q, r, classes, points) = ({}, {}, {}, {}), expected ({q}, {r}, {m}, {points})",
                des.q(),
                des.r(),
                des.class_count(),
                des.point_count()
            )));
        }
    }
    let selector = spec.selector.square()?;
    let (symbols, special) = match (spec.which, &spec.selector) {
        (Construction::Two, Selector::Derived { .. }) => (m, Special::None),
        (Construction::Two, _) => {
            return Err(ConstructError::InvalidSquare("construction 2 takes a derived selector".into()));
        }
        (_, Selector::Derived { .. }) => {
            return Err(ConstructError::InvalidSquare("only construction 2 takes a derived selector".into()));
        }
        (Construction::One, _) => (m, Special::None),
        (Construction::Three, _) => (m + 1, Special::Empty),
        (Construction::Four, _) => (m + 1, Special::Complete),
    };
    if selector.side() != classes {
        return Err(ConstructError::DimensionMismatch(format!(
            "selector side {} but {classes} designs",
            selector.side()
        )));
    }
    if selector.symbol_count() != symbols {
        return Err(ConstructError::InvalidSquare(format!(
            "selector uses {} symbols, construction {} needs {symbols}",
            selector.symbol_count(),
            spec.which
        )));
    }
    if !selector.is_symmetric() {
        return Err(ConstructError::InvalidSquare("selector is not symmetric".into()));
    }
    if spec.which != Construction::Two && !selector.is_latin() {
        return Err(ConstructError::InvalidSquare("selector is not a Latin square".into()));
    }
    if special == Special::Complete {
        if let Some(i) = (0..classes).find(|&i| selector.get(i, i) as usize == m) {
            return Err(ConstructError::DiagonalViolation(i));
        }
    }
    spec.bijections.check(classes, q)?;
    let sigma = spec.bijections.table(classes, q);

    let n = classes * points;
    let mut g = Graph::empty(n);
    for i in 0..classes {
        for j in i..classes {
            let c = selector.get(i, j) as usize;
            let base_i = i * points;
            let base_j = j * points;
            if c == m {
                if special == Special::Complete {
                    for x in 0..points {
                        for y in 0..points {
                            g.add_edge(base_i + x, base_j + y);
                        }
                    }
                }
                continue;
            }
            let from = spec.designs[i].class_labels(c);
            let to = spec.designs[j].class_labels(c);
            let s = &sigma[i][j];
            for x in 0..points {
                let image = s[from[x] as usize];
                let start = if i == j { x + 1 } else { 0 };
                for y in start..points {
                    if to[y] != image {
                        g.add_edge(base_i + x, base_j + y);
                    }
                }
            }
        }
    }
    let origin = (0..n).map(|v| (v / points) as u32).collect();
    Ok(g.with_origin(origin))
}

pub fn construction1(spec: &ConstructionSpec) -> Result<Graph, ConstructError> {
    expect_which(spec, Construction::One)?;
    build(spec)
}

pub fn construction2(spec: &ConstructionSpec) -> Result<Graph, ConstructError> {
    expect_which(spec, Construction::Two)?;
    build(spec)
}

pub fn construction3(spec: &ConstructionSpec) -> Result<Graph, ConstructError> {
    expect_which(spec, Construction::Three)?;
    build(spec)
}

pub fn construction4(spec: &ConstructionSpec) -> Result<Graph, ConstructError> {
    expect_which(spec, Construction::Four)?;
    build(spec)
}

fn expect_which(spec: &ConstructionSpec, which: Construction) -> Result<(), ConstructError> {
    if spec.which != which {
        return Err(ConstructError::DimensionMismatch(format!(
            "spec is for construction {}, called construction {which}",
            spec.which
        )));
    }
    Ok(())
}

/// Closed-form parameters of a construction's output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Expected {
    Ddg(DdgParams),
    Srg(SrgParams),
}

impl Expected {
    /// As a DDG tuple; SRGs use the one-class form.
    pub fn as_ddg(&self) -> DdgParams {
        match self {
            Self::Ddg(p) => *p,
            Self::Srg(p) => p.as_ddg(),
        }
    }
}

impl std::fmt::Display for Expected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Ddg(p) => write!(f, "DDG{p}"),
            Self::Srg(p) => write!(f, "SRG{p}"),
        }
    }
}

/// Parameter tuple predicted for `which` at `(q, d)`.
pub fn expected_params(which: Construction, q: u64, d: u32) -> Result<Expected, ConstructError> {
    if d < 2 {
        return Err(ConstructError::Degenerate(format!("d = {d}")));
    }
    if crate::gf::prime_power(q as u32).is_none() {
        return Err(ConstructError::Field(FieldError::NotPrimePower(q as u32)));
    }
    let pw = |e: u32| q.pow(e);
    let (qd, qd1, qd2) = (pw(d), pw(d - 1), pw(d - 2));
    Ok(match which {
        Construction::One => Expected::Ddg(DdgParams::new(
            qd * (qd - 1) / (q - 1),
            qd1 * (qd - 1),
            qd1 * (qd - qd1 - 1),
            qd2 * (q - 1) * (qd - 1),
            (qd - 1) / (q - 1),
            qd,
        )),
        Construction::Two => Expected::Ddg(DdgParams::new(
            q * qd * (qd1 - 1) / (q - 1),
            qd * (qd1 - 1),
            qd * (qd1 - qd2 - 1),
            qd1 * (q - 1) * (qd1 - 1),
            q * q * (qd1 - 1) / (q - 1),
            qd1,
        )),
        Construction::Three => {
            let v = qd * (qd + q - 2) / (q - 1);
            let k = qd1 * (qd - 1);
            if q == 2 {
                Expected::Srg(SrgParams::new(v, k, qd1 * (qd1 - 1), qd1 * (qd1 - 1)))
            } else {
                Expected::Ddg(DdgParams::new(
                    v,
                    k,
                    qd1 * (qd - qd1 - 1),
                    qd1 * (q - 1) * (qd1 - 1),
                    (qd + q - 2) / (q - 1),
                    qd,
                ))
            }
        }
        Construction::Four => {
            let lambda = qd1 * (q - 1) * (qd1 + 1);
            Expected::Srg(SrgParams::new(qd * (qd + q - 2) / (q - 1), qd1 * (qd + q - 1), lambda, lambda))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::verify_ddg;
    use crate::latin::{cayley_table, check_square};

    fn square(factors: &[usize]) -> Selector {
        Selector::Square(cayley_table(factors).unwrap())
    }

    #[test]
    fn smallest_construction1() {
        let spec = ConstructionSpec::standard(Construction::One, 2, 2, square(&[3])).unwrap();
        let g = construction1(&spec).unwrap();
        assert_eq!(g.order(), 12);
        assert_eq!(g.regular_degree(), Some(6));
        let cert = verify_ddg(&g, None).unwrap();
        assert_eq!(cert.params.tuple(), (12, 6, 2, 3, 3, 4));
        assert_eq!(g.origin().unwrap()[..4], [0, 0, 0, 0]);
    }

    #[test]
    fn expected_tables() {
        let e = |w, q, d| expected_params(w, q, d).unwrap();
        assert_eq!(e(Construction::One, 2, 2), Expected::Ddg(DdgParams::new(12, 6, 2, 3, 3, 4)));
        assert_eq!(e(Construction::One, 3, 2), Expected::Ddg(DdgParams::new(36, 24, 15, 16, 4, 9)));
        assert_eq!(e(Construction::One, 2, 3), Expected::Ddg(DdgParams::new(56, 28, 12, 14, 7, 8)));
        assert_eq!(e(Construction::Two, 2, 2), Expected::Ddg(DdgParams::new(8, 4, 0, 2, 4, 2)));
        assert_eq!(e(Construction::Two, 3, 2), Expected::Ddg(DdgParams::new(27, 18, 9, 12, 9, 3)));
        assert_eq!(e(Construction::Two, 2, 3), Expected::Ddg(DdgParams::new(48, 24, 8, 12, 12, 4)));
        assert_eq!(e(Construction::Three, 3, 2), Expected::Ddg(DdgParams::new(45, 24, 15, 12, 5, 9)));
        assert_eq!(e(Construction::Three, 2, 2), Expected::Srg(SrgParams::new(16, 6, 2, 2)));
        assert_eq!(e(Construction::Three, 2, 3), Expected::Srg(SrgParams::new(64, 28, 12, 12)));
        assert_eq!(e(Construction::Four, 2, 2), Expected::Srg(SrgParams::new(16, 10, 6, 6)));
        assert_eq!(e(Construction::Four, 2, 3), Expected::Srg(SrgParams::new(64, 36, 20, 20)));
        assert_eq!(e(Construction::Four, 3, 3), Expected::Srg(SrgParams::new(378, 261, 180, 180)));
        for which in [Construction::One, Construction::Two, Construction::Three, Construction::Four] {
            for (q, d) in [(2, 2), (3, 2), (2, 3), (4, 2), (3, 3), (5, 2)] {
                assert!(e(which, q, d).as_ddg().satisfies_counting_identity(), "{which} {q} {d}");
            }
        }
        assert!(expected_params(Construction::One, 6, 2).is_err());
        assert!(expected_params(Construction::One, 2, 1).is_err());
    }

    #[test]
    fn diagonal_violation() {
        // side 4 over symbols 1..4 with 4 on the diagonal
        let bad = check_square(&[vec![1, 2, 3, 4], vec![2, 4, 1, 3], vec![3, 1, 4, 2], vec![4, 3, 2, 1]]).unwrap();
        assert!(bad.is_latin() && bad.is_symmetric());
        let spec = ConstructionSpec::standard(Construction::Four, 2, 2, Selector::Square(bad)).unwrap();
        assert_eq!(construction4(&spec), Err(ConstructError::DiagonalViolation(1)));
        let klein = ConstructionSpec::standard(Construction::Four, 2, 2, square(&[2, 2])).unwrap();
        assert_eq!(construction4(&klein).unwrap().regular_degree(), Some(10));
    }

    #[test]
    fn input_errors() {
        let mut spec = ConstructionSpec::standard(Construction::One, 2, 2, square(&[4])).unwrap();
        assert!(matches!(construction1(&spec), Err(ConstructError::DimensionMismatch(_))));
        spec.selector = square(&[3]);
        spec.designs.pop();
        assert!(matches!(construction1(&spec), Err(ConstructError::DimensionMismatch(_))));
        let spec = ConstructionSpec::standard(Construction::One, 2, 2, square(&[3])).unwrap();
        assert!(matches!(construction3(&spec), Err(ConstructError::DimensionMismatch(_))));
        let mut fam = BijectionFamily::identity();
        assert!(matches!(fam.set(1, 1, vec![1, 0]), Err(ConstructError::BadBijection { .. })));
        assert!(matches!(fam.set(0, 1, vec![0, 0]), Err(ConstructError::BadBijection { .. })));
        fam.set(0, 1, vec![0, 1, 2]).unwrap();
        fam.set(0, 2, vec![1, 2, 0]).unwrap();
        let spec = ConstructionSpec { bijections: fam, ..spec };
        assert!(matches!(construction1(&spec), Err(ConstructError::BadBijection { .. })));
        assert!(matches!(
            ConstructionSpec::standard(Construction::One, 2, 1, square(&[1])),
            Err(ConstructError::Degenerate(_))
        ));
        let two = ConstructionSpec::standard(Construction::Two, 2, 2, square(&[2])).unwrap();
        assert!(matches!(construction2(&two), Err(ConstructError::InvalidSquare(_))));
        let not_latin = check_square(&[vec![1, 2, 3], vec![2, 1, 3], vec![3, 3, 1]]).unwrap();
        let spec = ConstructionSpec::standard(Construction::One, 2, 2, Selector::Square(not_latin)).unwrap();
        assert!(matches!(construction1(&spec), Err(ConstructError::InvalidSquare(_))));
    }

    #[test]
    fn bijection_inverse_storage() {
        let mut fam = BijectionFamily::identity();
        fam.set(2, 0, vec![1, 2, 0]).unwrap();
        let t = fam.table(3, 3);
        assert_eq!(t[2][0], vec![1, 2, 0]);
        assert_eq!(t[0][2], vec![2, 0, 1]);
        assert_eq!(t[1][1], vec![0, 1, 2]);
    }

    #[test]
    fn derived_construction2_smallest() {
        let sel = Selector::Derived { source: cayley_table(&[3]).unwrap(), h: 0, mask: vec![false, false] };
        let spec = ConstructionSpec::standard(Construction::Two, 2, 2, sel).unwrap();
        let g = construction2(&spec).unwrap();
        let cert = verify_ddg(&g, None).unwrap();
        assert_eq!(cert.params.tuple(), (8, 4, 0, 2, 4, 2));
    }
}
