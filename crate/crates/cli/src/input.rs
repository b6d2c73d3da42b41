//! Reading graphs, squares, designs and construction specs from disk.
//!
//! File formats use 1-based indices throughout: design numbers, class
//! numbers, block labels and Latin symbols all start at 1.

use std::path::{Path, PathBuf};

use ddg_core::algebra::HadamardMatrix;
use ddg_core::construct::{BijectionFamily, Construction, ConstructionSpec, Selector};
use ddg_core::designs::{hadamard_3_design, AffineDesign};
use ddg_core::graph::{graph6, Graph};
use ddg_core::latin::{fixture_dir, Square};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// Every non-empty line of a graph6 file, in order.
pub fn read_graphs(path: &Path) -> Result<Vec<Graph>, CliError> {
    let text = read_text(path)?;
    let graphs: Vec<Graph> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| {
            graph6::decode(l.as_bytes()).map_err(|e| CliError::Input(format!("{} line {}: {e}", path.display(), i + 1)))
        })
        .collect::<Result<_, _>>()?;
    if graphs.is_empty() {
        return Err(CliError::Input(format!("{}: no graph", path.display())));
    }
    Ok(graphs)
}

pub fn read_graph(path: &Path) -> Result<Graph, CliError> {
    let mut graphs = read_graphs(path)?;
    if graphs.len() > 1 {
        return Err(CliError::Input(format!("{}: expected one graph, found {}", path.display(), graphs.len())));
    }
    Ok(graphs.remove(0))
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// A Latin square given either as a path or as the name of a shipped fixture.
pub fn resolve_square(id: &str, base: Option<&Path>) -> Result<(Square, PathBuf), CliError> {
    let direct = PathBuf::from(id);
    let mut tried = vec![];
    if let Some(b) = base {
        tried.push(b.join(&direct));
    }
    tried.push(direct.clone());
    if let Some(name) = direct.file_name() {
        tried.push(fixture_dir().join(name));
    }
    let path = tried
        .into_iter()
        .find(|p| p.is_file())
        .ok_or_else(|| CliError::Input(format!("Latin square {id:?} is neither a file nor a fixture in {}", fixture_dir().display())))?;
    let square = Square::read(&path).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((square, std::fs::canonicalize(&path).unwrap_or(path)))
}

/// `"0110"` or `"0,1,1,0"`.
pub fn parse_mask(bits: &str) -> Result<Vec<bool>, CliError> {
    bits.chars()
        .filter(|c| !matches!(c, ',' | ' ' | '_'))
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CliError::Input(format!("mask character {other:?} is not 0 or 1"))),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BijectionEntry {
    pub i: usize,
    pub j: usize,
    pub perm: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumberingEntry {
    pub design: usize,
    pub classes: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DesignSource {
    Ag,
    Hadamard,
    File,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignEntry {
    pub index: usize,
    pub source: DesignSource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// A construction request: the TOML spec file shape, also filled from flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub construction: u8,
    pub q: usize,
    pub d: u32,
    pub latin: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub prank: Vec<u64>,
    #[serde(default, rename = "bijection", skip_serializing_if = "Vec::is_empty")]
    pub bijections: Vec<BijectionEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub numbering: Vec<NumberingEntry>,
    #[serde(default, rename = "design", skip_serializing_if = "Vec::is_empty")]
    pub designs: Vec<DesignEntry>,
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("spec: {e}")))
    }
}

fn numbers(path: &Path) -> Result<Vec<Vec<usize>>, CliError> {
    read_text(path)?
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|e| CliError::Input(format!("{}: {t:?}: {e}", path.display()))))
                .collect()
        })
        .collect()
}

/// Lines of `i j s_1 ... s_q`.
pub fn read_bijections(path: &Path) -> Result<Vec<BijectionEntry>, CliError> {
    numbers(path)?
        .into_iter()
        .map(|row| match row.as_slice() {
            [i, j, perm @ ..] if !perm.is_empty() => {
                Ok(BijectionEntry { i: *i, j: *j, perm: perm.iter().map(|&x| x as u32).collect() })
            }
            _ => Err(CliError::Input(format!("{}: bijection line needs `i j perm...`", path.display()))),
        })
        .collect()
}

/// Lines of `design c_1 ... c_m`.
pub fn read_numbering(path: &Path) -> Result<Vec<NumberingEntry>, CliError> {
    numbers(path)?
        .into_iter()
        .map(|row| match row.as_slice() {
            [design, classes @ ..] if !classes.is_empty() => {
                Ok(NumberingEntry { design: *design, classes: classes.to_vec() })
            }
            _ => Err(CliError::Input(format!("{}: numbering line needs `design classes...`", path.display()))),
        })
        .collect()
}

fn zero_based(value: usize, what: &str) -> Result<usize, CliError> {
    value.checked_sub(1).ok_or_else(|| CliError::Input(format!("{what} is 1-based, got 0")))
}

fn load_design(entry: &DesignEntry, base: Option<&Path>) -> Result<Option<AffineDesign>, CliError> {
    let path = || -> Result<PathBuf, CliError> {
        let p = entry
            .path
            .as_deref()
            .ok_or_else(|| CliError::Input(format!("design {} needs a path", entry.index)))?;
        Ok(base.map_or_else(|| PathBuf::from(p), |b| b.join(p)))
    };
    match entry.source {
        DesignSource::Ag => Ok(None),
        DesignSource::File => {
            let text = read_text(&path()?)?;
            AffineDesign::from_text(&text).map(Some).map_err(|e| CliError::Input(e.to_string()))
        }
        DesignSource::Hadamard => {
            let text = read_text(&path()?)?;
            let h = HadamardMatrix::from_text(&text).map_err(|e| CliError::Input(e.to_string()))?;
            hadamard_3_design(&h).map(Some).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

/// Turns a spec into a buildable construction. Relative paths resolve
/// against `base` first.
pub fn build_spec(spec: &SpecFile, base: Option<&Path>) -> Result<(ConstructionSpec, PathBuf), CliError> {
    let which = Construction::try_from(spec.construction).map_err(|e| CliError::Input(e.to_string()))?;
    let (square, latin_path) = resolve_square(&spec.latin, base)?;
    let selector = if which == Construction::Two {
        let h = spec.h.ok_or_else(|| CliError::Input("construction 2 needs h".into()))?;
        let mask = match &spec.mask {
            Some(bits) => parse_mask(bits)?,
            None => vec![false; square.side().saturating_sub(1)],
        };
        Selector::Derived { source: square, h: zero_based(h, "h")?, mask }
    } else {
        if spec.h.is_some() || spec.mask.is_some() {
            return Err(CliError::Input(format!("h and mask apply only to construction 2, not {which}")));
        }
        Selector::Square(square)
    };
    let mut out = ConstructionSpec::standard(which, spec.q, spec.d, selector).map_err(CliError::from_construct)?;
    for entry in &spec.designs {
        let i = zero_based(entry.index, "design index")?;
        if i >= out.designs.len() {
            return Err(CliError::Input(format!("design {} of {}", entry.index, out.designs.len())));
        }
        if let Some(design) = load_design(entry, base)? {
            out.designs[i] = design;
        }
    }
    for entry in &spec.numbering {
        let classes = entry.classes.iter().map(|&c| zero_based(c, "class")).collect::<Result<Vec<_>, _>>()?;
        out.renumber(zero_based(entry.design, "design")?, &classes).map_err(CliError::from_construct)?;
    }
    let mut family = BijectionFamily::identity();
    for entry in &spec.bijections {
        let perm = entry
            .perm
            .iter()
            .map(|&x| zero_based(x as usize, "block label").map(|x| x as u32))
            .collect::<Result<Vec<_>, _>>()?;
        family
            .set(zero_based(entry.i, "i")?, zero_based(entry.j, "j")?, perm)
            .map_err(CliError::from_construct)?;
    }
    out.bijections = family;
    Ok((out, latin_path))
}
