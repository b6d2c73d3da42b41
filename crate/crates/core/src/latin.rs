//! Symmetric Latin squares and the selector squares derived from them.
//!
//! Symbols are 0-based in memory and 1-based in text. A reduced symmetric
//! Latin square is the Cayley table of a commutative loop with identity 0.

use std::collections::{BTreeSet, VecDeque};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest side accepted by [`enumerate_reduced_symmetric`].
pub const ENUMERATION_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatinError {
    #[error("row {row} has {len} entries, expected {side}")]
    NotSquare { row: usize, len: usize, side: usize },
    #[error("entry {value} at ({row}, {col}) is outside 1..={symbols}")]
    EntryOutOfRange { row: usize, col: usize, value: i64, symbols: usize },
    #[error("enumeration is capped at side {cap}, got {side}")]
    TooLarge { side: usize, cap: usize },
    #[error("index {index} out of range for side {side}")]
    IndexOutOfRange { index: usize, side: usize },
    #[error("mask has {got} bits, expected {expected}")]
    MaskLength { got: usize, expected: usize },
    #[error("square is not {0}")]
    Requires(&'static str),
    #[error("square text: {0}")]
    Parse(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// A symmetric-or-not square of side `side` with entries below `symbols`.
/// Plain Latin squares have `symbols == side`; derived selector squares may
/// carry one extra symbol.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Square {
    side: usize,
    symbols: usize,
    entries: Vec<u32>,
    latin: bool,
    symmetric: bool,
    reduced: bool,
}

impl Square {
    fn classify(side: usize, symbols: usize, entries: Vec<u32>) -> Self {
        let at = |i: usize, j: usize| entries[i * side + j];
        let symmetric = (0..side).all(|i| (i + 1..side).all(|j| at(i, j) == at(j, i)));
        let latin = symbols == side
            && (0..side).all(|i| {
                let mut row = vec![false; side];
                let mut col = vec![false; side];
                (0..side).all(|j| {
                    let (r, c) = (at(i, j) as usize, at(j, i) as usize);
                    !std::mem::replace(&mut row[r], true) && !std::mem::replace(&mut col[c], true)
                })
            });
        let reduced = (0..side).all(|j| at(0, j) == j as u32 && at(j, 0) == j as u32);
        Self { side, symbols, entries, latin, symmetric, reduced }
    }

    /// Builds from 0-based entries, checking ranges.
    pub fn from_zero_based(rows: &[Vec<u32>], symbols: usize) -> Result<Self, LatinError> {
        let one: Vec<Vec<i64>> = rows.iter().map(|r| r.iter().map(|&x| x as i64 + 1).collect()).collect();
        check_selector(&one, symbols)
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols
    }

    /// 0-based symbol at `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.side + j]
    }

    pub fn is_latin(&self) -> bool {
        self.latin
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn diagonal(&self) -> Vec<u32> {
        (0..self.side).map(|i| self.get(i, i)).collect()
    }

    /// Rows with 1-based symbols.
    pub fn one_based_rows(&self) -> Vec<Vec<u32>> {
        (0..self.side).map(|i| (0..self.side).map(|j| self.get(i, j) + 1).collect()).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.side);
        for row in self.one_based_rows() {
            let cells: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&cells.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses `m` followed by `m` rows of 1-based symbols. Blank lines and
    /// `#` comments are ignored.
    pub fn from_text(text: &str) -> Result<Self, LatinError> {
        let mut lines = text.lines().map(|l| l.split('#').next().unwrap_or("").trim()).filter(|l| !l.is_empty());
        let side: usize = lines
            .next()
            .ok_or_else(|| LatinError::Parse("empty input".into()))?
            .parse()
            .map_err(|e| LatinError::Parse(format!("bad side: {e}")))?;
        let rows: Vec<Vec<i64>> = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<i64>().map_err(|e| LatinError::Parse(format!("bad entry {t:?}: {e}"))))
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        if rows.len() != side {
            return Err(LatinError::Parse(format!("expected {side} rows, got {}", rows.len())));
        }
        check_square(&rows)
    }

    pub fn read(path: &Path) -> Result<Self, LatinError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| LatinError::Io { path: path.display().to_string(), message: e.to_string() })?;
        Self::from_text(&text)
    }

    /// Same square with rows, columns and symbols all relabelled by `perm`
    /// (old index `x` becomes `perm[x]`).
    pub fn relabelled(&self, perm: &[usize]) -> Self {
        let mut entries = vec![0u32; self.side * self.side];
        for i in 0..self.side {
            for j in 0..self.side {
                entries[perm[i] * self.side + perm[j]] = perm[self.get(i, j) as usize] as u32;
            }
        }
        Self::classify(self.side, self.symbols, entries)
    }
}

/// Validates a square of 1-based symbols in `1..=side`.
pub fn check_square(rows: &[Vec<i64>]) -> Result<Square, LatinError> {
    check_selector(rows, rows.len())
}

/// Validates a square of 1-based symbols in `1..=symbols`.
pub fn check_selector(rows: &[Vec<i64>], symbols: usize) -> Result<Square, LatinError> {
    let side = rows.len();
    let mut entries = Vec::with_capacity(side * side);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != side {
            return Err(LatinError::NotSquare { row: i, len: row.len(), side });
        }
        for (j, &value) in row.iter().enumerate() {
            if value < 1 || value as usize > symbols {
                return Err(LatinError::EntryOutOfRange { row: i, col: j, value, symbols });
            }
            entries.push(value as u32 - 1);
        }
    }
    Ok(Square::classify(side, symbols.max(side), entries))
}

/// Cayley table of `C_{f1} × C_{f2} × ...`, elements in mixed radix with the
/// first factor most significant; the identity is symbol 0 so the table is reduced.
pub fn cayley_table(factors: &[usize]) -> Result<Square, LatinError> {
    let order: usize = factors.iter().product();
    if order == 0 || factors.contains(&0) {
        return Err(LatinError::Requires("a product of positive cyclic orders"));
    }
    if order > 4096 {
        return Err(LatinError::TooLarge { side: order, cap: 4096 });
    }
    let digits = |mut x: usize| -> Vec<usize> {
        let mut out = vec![0; factors.len()];
        for (slot, &f) in out.iter_mut().zip(factors).rev() {
            *slot = x % f;
            x /= f;
        }
        out
    };
    let index = |d: &[usize]| d.iter().zip(factors).fold(0, |acc, (&x, &f)| acc * f + x);
    let mut entries = Vec::with_capacity(order * order);
    for a in 0..order {
        let da = digits(a);
        for b in 0..order {
            let sum: Vec<usize> = da.iter().zip(digits(b)).zip(factors).map(|((&x, y), &f)| (x + y) % f).collect();
            entries.push(index(&sum) as u32);
        }
    }
    Ok(Square::classify(order, order, entries))
}

/// Steiner loop of a Steiner triple system on points `1..=v` (identity 0):
/// `x·x = 0` and `x·y` is the third point of the triple through `x, y`.
pub fn steiner_loop(points: usize, triples: &[[usize; 3]]) -> Result<Square, LatinError> {
    let side = points + 1;
    let mut entries = vec![u32::MAX; side * side];
    for x in 0..side {
        entries[x] = x as u32;
        entries[x * side] = x as u32;
        entries[x * side + x] = 0;
    }
    for t in triples {
        if t.iter().any(|&p| p == 0 || p > points) {
            return Err(LatinError::Parse(format!("triple {t:?} outside 1..={points}")));
        }
        for (a, b, c) in [(t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[2], t[0], t[1])] {
            for (x, y) in [(a, b), (b, a)] {
                if entries[x * side + y] != u32::MAX {
                    return Err(LatinError::Requires("a Steiner triple system (pair repeated)"));
                }
                entries[x * side + y] = c as u32;
            }
        }
    }
    if entries.contains(&u32::MAX) {
        return Err(LatinError::Requires("a Steiner triple system (pair uncovered)"));
    }
    Ok(Square::classify(side, side, entries))
}

/// Removes row and column `h` (0-based) and, for each set mask bit `i`,
/// replaces diagonal entry `i` by the removed entry of its original row.
pub fn derived_square(source: &Square, h: usize, mask: &[bool]) -> Result<Square, LatinError> {
    if !source.is_latin() || !source.is_symmetric() {
        return Err(LatinError::Requires("a symmetric Latin square"));
    }
    let side = source.side();
    if h >= side {
        return Err(LatinError::IndexOutOfRange { index: h, side });
    }
    if mask.len() != side - 1 {
        return Err(LatinError::MaskLength { got: mask.len(), expected: side - 1 });
    }
    let original = |i: usize| if i < h { i } else { i + 1 };
    let mut entries = Vec::with_capacity((side - 1) * (side - 1));
    for i in 0..side - 1 {
        for j in 0..side - 1 {
            let value = if i == j && mask[i] { source.get(original(i), h) } else { source.get(original(i), original(j)) };
            entries.push(value);
        }
    }
    Ok(Square::classify(side - 1, side, entries))
}

/// True iff no diagonal entry equals the 0-based `symbol`.
pub fn diagonal_avoids(square: &Square, symbol: u32) -> bool {
    (0..square.side()).all(|i| square.get(i, i) != symbol)
}

/// Lexicographically smallest relabelled table over all generating tuples of
/// minimum size; equal exactly for isomorphic commutative loops.
pub fn loop_canonical_table(table: &Square) -> Vec<u32> {
    let side = table.side();
    if side <= 1 {
        return table.entries.clone();
    }
    let op = |a: usize, b: usize| table.get(a, b) as usize;

    // BFS closure from an ordered generator tuple; `None` if it does not generate.
    let label_from = |gens: &[usize]| -> Option<Vec<usize>> {
        let mut label = vec![usize::MAX; side];
        let mut order = vec![0usize];
        label[0] = 0;
        for &g in gens {
            if label[g] == usize::MAX {
                label[g] = order.len();
                order.push(g);
            }
        }
        let mut queue: VecDeque<usize> = (0..order.len()).collect();
        while let Some(ia) = queue.pop_front() {
            for ib in 0..=ia {
                for (x, y) in [(order[ia], order[ib]), (order[ib], order[ia])] {
                    let z = op(x, y);
                    if label[z] == usize::MAX {
                        label[z] = order.len();
                        queue.push_back(order.len());
                        order.push(z);
                    }
                }
            }
        }
        (order.len() == side).then_some(order)
    };
    let relabel = |order: &[usize]| -> Vec<u32> {
        let mut pos = vec![0usize; side];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mut out = vec![0u32; side * side];
        for a in 0..side {
            for b in 0..side {
                out[pos[a] * side + pos[b]] = pos[op(a, b)] as u32;
            }
        }
        out
    };

    for size in 1..side {
        let mut best: Option<Vec<u32>> = None;
        let mut tuple = vec![1usize; size];
        loop {
            let distinct = tuple.iter().collect::<BTreeSet<_>>().len() == size;
            if distinct {
                if let Some(order) = label_from(&tuple) {
                    let t = relabel(&order);
                    if best.as_ref().is_none_or(|b| t < *b) {
                        best = Some(t);
                    }
                }
            }
            if !next_tuple(&mut tuple, side) {
                break;
            }
        }
        if let Some(b) = best {
            return b;
        }
    }
    unreachable!("the non-identity elements generate the loop")
}

/// Equivalence used to deduplicate enumerated squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Equivalence {
    /// One permutation applied to rows, columns and symbols.
    LoopIsomorphism,
    /// One permutation on rows and columns, an independent one on symbols.
    RowColumnSymbol,
}

/// Canonical key of a reduced symmetric square under `eq`.
///
/// Renaming symbols after moving row `r` to the top turns the table into the
/// principal isotope `a∘b = R_r⁻¹(a·b)`, a commutative loop with identity `r`,
/// so the coarser class is the union of those loops' isomorphism classes.
pub fn canonical_key(square: &Square, eq: Equivalence) -> Vec<u32> {
    match eq {
        Equivalence::LoopIsomorphism => loop_canonical_table(square),
        Equivalence::RowColumnSymbol => {
            let side = square.side();
            (0..side)
                .map(|r| {
                    let mut inverse = vec![0u32; side];
                    for x in 0..side {
                        inverse[square.get(r, x) as usize] = x as u32;
                    }
                    // relabel so that r becomes 0
                    let mut perm: Vec<usize> = (0..side).collect();
                    perm.swap(0, r);
                    let entries = (0..side * side)
                        .map(|c| {
                            let (a, b) = (perm[c / side], perm[c % side]);
                            perm[inverse[square.get(a, b) as usize] as usize] as u32
                        })
                        .collect();
                    loop_canonical_table(&Square::classify(side, side, entries))
                })
                .min()
                .unwrap_or_default()
        }
    }
}

/// Advances `tuple` over `1..side` in lexicographic order.
fn next_tuple(tuple: &mut [usize], side: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < side {
            return true;
        }
        *slot = 1;
    }
    false
}

/// All reduced symmetric Latin squares of side `side`, one per isomorphism
/// class of commutative loops, in increasing order of canonical table. Each
/// representative is the lexicographically least square of its class.
pub fn enumerate_reduced_symmetric(side: usize) -> Result<Vec<Square>, LatinError> {
    enumerate_reduced_symmetric_under(side, Equivalence::LoopIsomorphism)
}

/// As [`enumerate_reduced_symmetric`] under a chosen equivalence.
pub fn enumerate_reduced_symmetric_under(side: usize, eq: Equivalence) -> Result<Vec<Square>, LatinError> {
    let loops = enumerate_loops(side)?;
    if eq == Equivalence::LoopIsomorphism {
        return Ok(loops);
    }
    let mut classes: std::collections::BTreeMap<Vec<u32>, Square> = std::collections::BTreeMap::new();
    for sq in loops {
        let key = canonical_key(&sq, eq);
        match classes.get(&key) {
            Some(kept) if *kept <= sq => {}
            _ => {
                classes.insert(key, sq);
            }
        }
    }
    let mut reps: Vec<Square> = classes.into_values().collect();
    reps.sort_by(|a, b| a.entries.cmp(&b.entries));
    Ok(reps)
}

fn enumerate_loops(side: usize) -> Result<Vec<Square>, LatinError> {
    if side > ENUMERATION_CAP {
        return Err(LatinError::TooLarge { side, cap: ENUMERATION_CAP });
    }
    if side == 0 {
        return Ok(Vec::new());
    }
    let mut found: std::collections::BTreeMap<Vec<u32>, Square> = std::collections::BTreeMap::new();
    let mut entries = vec![0u32; side * side];
    let mut used = vec![0u32; side];
    for x in 0..side {
        entries[x] = x as u32;
        entries[x * side] = x as u32;
        used[x] |= 1 << x;
    }
    let cells: Vec<(usize, usize)> = (1..side).flat_map(|i| (i..side).map(move |j| (i, j))).collect();

    fn fill(
        pos: usize,
        side: usize,
        cells: &[(usize, usize)],
        entries: &mut [u32],
        used: &mut [u32],
        found: &mut std::collections::BTreeMap<Vec<u32>, Square>,
    ) {
        let Some(&(i, j)) = cells.get(pos) else {
            let sq = Square::classify(side, side, entries.to_vec());
            let key = loop_canonical_table(&sq);
            found.entry(key).or_insert(sq);
            return;
        };
        let free = !(used[i] | used[j]) & ((1u32 << side) - 1);
        let mut bits = free;
        while bits != 0 {
            let s = bits.trailing_zeros();
            bits &= bits - 1;
            entries[i * side + j] = s;
            entries[j * side + i] = s;
            used[i] |= 1 << s;
            if i != j {
                used[j] |= 1 << s;
            }
            fill(pos + 1, side, cells, entries, used, found);
            used[i] &= !(1 << s);
            if i != j {
                used[j] &= !(1 << s);
            }
        }
    }
    fill(0, side, &cells, &mut entries, &mut used, &mut found);
    Ok(found.into_values().collect())
}

/// Names of the shipped fixture squares.
pub const FIXTURE_SQUARES: &[&str] = &[
    "c3",
    "c4",
    "klein",
    "c5",
    "ls7_1",
    "ls7_2",
    "ls7_3",
    "ls7_4",
    "ls7_5",
    "ls7_6",
    "ls7_7",
    "abelian8_c8",
    "abelian8_c4xc2",
    "abelian8_c2xc2xc2",
    "c14",
    "steiner14_1",
    "steiner14_2",
    "side4_diagonal4",
];

/// Environment variable overriding the fixture root.
pub const FIXTURE_ENV: &str = "DDG_FIXTURES";

/// `$DDG_FIXTURES/latin` if set, else the `fixtures/latin` directory of this source tree.
pub fn fixture_dir() -> PathBuf {
    match std::env::var_os(FIXTURE_ENV) {
        Some(root) => PathBuf::from(root).join("latin"),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/latin"),
    }
}

/// Loads the fixture square `name` from [`fixture_dir`].
pub fn load_fixture(name: &str) -> Result<Square, LatinError> {
    Square::read(&fixture_dir().join(name))
}
