//! Hadamard matrices and the graphical regular Hadamard / SRG correspondence
//! `A = (J - H)/2`, `H = J - 2A`.

use serde::{Deserialize, Serialize};

use super::AlgebraError;
use crate::graph::{verify_srg, Graph, SrgParams};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HadamardMatrix {
    n: usize,
    entries: Vec<i8>,
}

/// Which of the two parameter families `(n, n/2 ∓ √n/2, n/4 ∓ √n/2, n/4 ∓ √n/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HadamardSign {
    /// `k = n/2 - √n/2`, row sums of `H` equal to `+√n`.
    Minus,
    /// `k = n/2 + √n/2`, row sums of `H` equal to `-√n`.
    Plus,
}

impl HadamardSign {
    pub fn srg_params(self, n: u64) -> Option<SrgParams> {
        let s = integer_sqrt(n)?;
        if n % 4 != 0 || s % 2 != 0 {
            return None;
        }
        let (k, l) = match self {
            Self::Minus => (n / 2 - s / 2, (n / 4).checked_sub(s / 2)?),
            Self::Plus => (n / 2 + s / 2, n / 4 + s / 2),
        };
        Some(SrgParams::new(n, k, l, l))
    }
}

impl std::str::FromStr for HadamardSign {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "minus" | "-" => Ok(Self::Minus),
            "plus" | "+" => Ok(Self::Plus),
            other => Err(format!("unknown sign {other:?} (expected minus or plus)")),
        }
    }
}

pub fn integer_sqrt(n: u64) -> Option<u64> {
    let s = (n as f64).sqrt().round() as u64;
    (s.saturating_sub(1)..=s + 1).find(|&t| t * t == n)
}

impl HadamardMatrix {
    /// Wraps a `±1` square array without checking orthogonality.
    pub fn from_entries(n: usize, entries: Vec<i8>) -> Result<Self, AlgebraError> {
        if entries.len() != n * n {
            return Err(AlgebraError::Parse(format!("expected {} entries, got {}", n * n, entries.len())));
        }
        if entries.iter().any(|&e| e != 1 && e != -1) {
            return Err(AlgebraError::Parse("entries must be +1 or -1".into()));
        }
        Ok(Self { n, entries })
    }

    /// Sylvester matrix of order `2^k`, entry `(i, j)` equal to `(-1)^{popcount(i & j)}`.
    pub fn sylvester(k: u32) -> Self {
        let n = 1usize << k;
        let entries = (0..n * n)
            .map(|t| if ((t / n) & (t % n)).count_ones() % 2 == 0 { 1 } else { -1 })
            .collect();
        Self { n, entries }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[i8] {
        &self.entries
    }

    /// First pair of rows `(i, j)` with `(H Hᵀ)_{ij} != n δ_{ij}`.
    pub fn orthogonality_witness(&self) -> Option<(usize, usize)> {
        let n = self.n;
        for i in 0..n {
            for j in i..n {
                let dot: i64 = (0..n).map(|t| (self.get(i, t) * self.get(j, t)) as i64).sum();
                if dot != if i == j { n as i64 } else { 0 } {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_hadamard(&self) -> bool {
        self.orthogonality_witness().is_none()
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn constant_diagonal(&self) -> Option<i8> {
        let d = self.get(0, 0);
        (0..self.n).all(|i| self.get(i, i) == d).then_some(d)
    }

    pub fn is_graphical(&self) -> bool {
        self.is_symmetric() && self.constant_diagonal().is_some()
    }

    /// Common row and column sum, if there is one.
    pub fn regular_sum(&self) -> Option<i64> {
        let n = self.n;
        let row = |i: usize| (0..n).map(|j| self.get(i, j) as i64).sum::<i64>();
        let col = |j: usize| (0..n).map(|i| self.get(i, j) as i64).sum::<i64>();
        let s = row(0);
        (0..n).all(|i| row(i) == s && col(i) == s).then_some(s)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<&str> = (0..self.n).map(|j| if self.get(i, j) == 1 { "+" } else { "-" }).collect();
            out.push_str(&row.join(""));
            out.push('\n');
        }
        out
    }

    /// Reads `n` lines of `n` entries written as `+1`/`-1`, `1`/`-1` or `+`/`-`.
    pub fn from_text(text: &str) -> Result<Self, AlgebraError> {
        let rows: Vec<Vec<i8>> = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(parse_row)
            .collect::<Result<_, _>>()?;
        let n = rows.len();
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(AlgebraError::Parse(format!("row {bad} has {} entries, expected {n}", rows[bad].len())));
        }
        Self::from_entries(n, rows.concat())
    }
}

fn parse_row(line: &str) -> Result<Vec<i8>, AlgebraError> {
    let tokens: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).collect();
    let compact = tokens.len() == 1 && tokens[0].chars().all(|c| c == '+' || c == '-');
    if compact {
        return Ok(tokens[0].chars().map(|c| if c == '+' { 1 } else { -1 }).collect());
    }
    tokens
        .iter()
        .map(|t| match *t {
            "+1" | "1" | "+" => Ok(1),
            "-1" | "-" => Ok(-1),
            other => Err(AlgebraError::Parse(format!("bad Hadamard entry {other:?}"))),
        })
        .collect()
}

/// `H = J - 2A` for an SRG with one of the two Hadamard parameter tuples.
pub fn srg_to_hadamard(g: &Graph) -> Result<(HadamardMatrix, HadamardSign), AlgebraError> {
    let params = verify_srg(g).map_err(|e| AlgebraError::WrongParameters(e.to_string()))?;
    let sign = [HadamardSign::Minus, HadamardSign::Plus]
        .into_iter()
        .find(|s| s.srg_params(params.v) == Some(params))
        .ok_or_else(|| AlgebraError::WrongParameters(format!("{params} is not a Hadamard SRG tuple")))?;
    let n = g.order();
    let entries = (0..n * n)
        .map(|t| if t / n != t % n && g.has_edge(t / n, t % n) { -1 } else { 1 })
        .collect();
    let h = HadamardMatrix { n, entries };
    debug_assert!(h.is_hadamard());
    Ok((h, sign))
}

/// `A = (J - H)/2` for a graphical regular Hadamard matrix with diagonal `+1`,
/// checked against the parameter tuple selected by `sign`.
pub fn hadamard_to_srg(h: &HadamardMatrix, sign: HadamardSign) -> Result<Graph, AlgebraError> {
    if !h.is_graphical() {
        return Err(AlgebraError::NotGraphical);
    }
    if h.constant_diagonal() != Some(1) {
        return Err(AlgebraError::NotGraphical);
    }
    if h.regular_sum().is_none() {
        return Err(AlgebraError::NotRegularH);
    }
    if let Some((i, j)) = h.orthogonality_witness() {
        return Err(AlgebraError::NotHadamard(i, j));
    }
    let n = h.order();
    let mut g = Graph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if h.get(i, j) == -1 {
                g.add_edge(i, j);
            }
        }
    }
    let want = sign
        .srg_params(n as u64)
        .ok_or_else(|| AlgebraError::WrongParameters(format!("order {n} has no {sign:?} tuple")))?;
    let got = verify_srg(&g).map_err(|e| AlgebraError::WrongParameters(e.to_string()))?;
    if got != want {
        return Err(AlgebraError::WrongParameters(format!("graph is {got}, sign {sign:?} requires {want}")));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixture_graph;

    #[test]
    fn sylvester_is_hadamard() {
        for k in 0..6 {
            let h = HadamardMatrix::sylvester(k);
            assert!(h.is_hadamard(), "order {}", h.order());
            assert!(h.is_symmetric());
        }
    }

    #[test]
    fn rook_graph_gives_order_16_regular_hadamard() {
        let g = fixture_graph("rook4x4").unwrap();
        let (h, sign) = srg_to_hadamard(&g).unwrap();
        assert_eq!(sign, HadamardSign::Minus);
        assert_eq!(h.order(), 16);
        assert!(h.is_hadamard());
        assert!(h.is_graphical());
        assert_eq!(h.regular_sum(), Some(4));
        assert_eq!(hadamard_to_srg(&h, HadamardSign::Minus).unwrap(), g);
        assert!(matches!(hadamard_to_srg(&h, HadamardSign::Plus), Err(AlgebraError::WrongParameters(_))));
    }

    #[test]
    fn clebsch_complement_is_the_plus_family() {
        let g = fixture_graph("clebsch").unwrap().complement();
        let (h, sign) = srg_to_hadamard(&g).unwrap();
        assert_eq!(sign, HadamardSign::Plus);
        assert_eq!(h.regular_sum(), Some(-4));
        assert_eq!(hadamard_to_srg(&h, sign).unwrap(), g);
    }

    #[test]
    fn non_hadamard_srg_is_rejected() {
        let g = fixture_graph("petersen").unwrap();
        assert!(matches!(srg_to_hadamard(&g), Err(AlgebraError::WrongParameters(_))));
    }

    #[test]
    fn sign_tuples() {
        assert_eq!(HadamardSign::Minus.srg_params(64).unwrap().tuple(), (64, 28, 12, 12));
        assert_eq!(HadamardSign::Plus.srg_params(64).unwrap().tuple(), (64, 36, 20, 20));
        assert_eq!(HadamardSign::Minus.srg_params(36).unwrap().tuple(), (36, 15, 6, 6));
        assert!(HadamardSign::Minus.srg_params(20).is_none());
    }

    #[test]
    fn text_formats() {
        let h = HadamardMatrix::from_text("+1 +1\n+1 -1\n").unwrap();
        assert!(h.is_hadamard());
        assert_eq!(HadamardMatrix::from_text("++\n+-").unwrap(), h);
        assert_eq!(HadamardMatrix::from_text(&h.to_text()).unwrap(), h);
        assert!(HadamardMatrix::from_text("+ +\n+").is_err());
        assert!(HadamardMatrix::from_text("2 1\n1 1").is_err());
    }
}
