//! Spectra predicted from divisible-design and strongly-regular parameters,
//! and their confirmation on concrete graphs.
//!
//! The eigenvalues of a DDG are `k`, `±√(k-λ1)` and `±√(k²-λ2 v)`, with the
//! `±√(k-λ1)` multiplicities summing to `m(n-1)` and the `±√(k²-λ2 v)` ones
//! summing to `m-1`. Together with a zero trace this can leave a one-parameter
//! family of splits, so prediction returns every feasible candidate and
//! [`certify_spectrum`] picks the one the graph actually has.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use super::rank::{exact_multiplicity, polynomial_nullity};
use super::AlgebraError;
use crate::graph::{DdgParams, Graph, SrgParams};

/// `(num + coef·√rad) / den` with `rad` squarefree, `rad = 1` only when `coef = 0`,
/// and `den` either 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Eigenvalue {
    num: i64,
    coef: i64,
    rad: u64,
    den: i64,
}

fn squarefree_split(s: u64) -> (u64, u64) {
    let (mut outside, mut inside) = (1u64, s);
    let mut d = 2;
    while d * d <= inside {
        while inside % (d * d) == 0 {
            inside /= d * d;
            outside *= d;
        }
        d += 1;
    }
    (outside, inside)
}

impl Eigenvalue {
    pub const fn integer(a: i64) -> Self {
        Self { num: a, coef: 0, rad: 1, den: 1 }
    }

    /// `sign · √s` for `s >= 0`.
    pub fn sqrt(s: u64, negative: bool) -> Self {
        let (outside, inside) = squarefree_split(s);
        let outside = if negative { -(outside as i64) } else { outside as i64 };
        if inside == 1 || s == 0 {
            Self::integer(if s == 0 { 0 } else { outside })
        } else {
            Self { num: 0, coef: outside, rad: inside, den: 1 }
        }
    }

    /// The two roots `(b ± √disc)/2` of `x² - b x + c` with `disc = b² - 4c >= 0`.
    fn quadratic_roots(b: i64, disc: u64) -> Option<(Self, Self)> {
        let (outside, inside) = squarefree_split(disc);
        if inside == 1 {
            let s = outside as i64;
            if (b + s) % 2 != 0 {
                return None;
            }
            return Some((Self::integer((b + s) / 2), Self::integer((b - s) / 2)));
        }
        let o = outside as i64;
        let make = |c: i64| {
            if b % 2 == 0 && o % 2 == 0 {
                Self { num: b / 2, coef: c / 2, rad: inside, den: 1 }
            } else {
                Self { num: b, coef: c, rad: inside, den: 2 }
            }
        };
        Some((make(o), make(-o)))
    }

    pub fn is_integer(&self) -> bool {
        self.coef == 0 && self.den == 1
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.is_integer().then_some(self.num)
    }

    pub fn conjugate(&self) -> Self {
        Self { coef: -self.coef, ..*self }
    }

    /// `(c0, c1)` with this value a root of `x² + c1 x + c0` over the integers,
    /// for irrational values.
    pub fn minimal_quadratic(&self) -> Option<(i64, i64)> {
        if self.coef == 0 {
            return None;
        }
        // x = (a + b√r)/d: d²x² - 2ad x + a² - b² r = 0, monic since d | 2a and d² | a² - b²r
        let (a, b, r, d) = (self.num, self.coef, self.rad as i64, self.den);
        Some(((a * a - b * b * r) / (d * d), -2 * a / d))
    }

    pub fn approx(&self) -> f64 {
        (self.num as f64 + self.coef as f64 * (self.rad as f64).sqrt()) / self.den as f64
    }

    fn times_integer(&self, t: i64) -> (i64, i64, u64, i64) {
        (self.num * t, self.coef * t, self.rad, self.den)
    }
}

impl std::fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let surd = |c: i64| match c {
            1 => format!("√{}", self.rad),
            -1 => format!("-√{}", self.rad),
            _ => format!("{c}√{}", self.rad),
        };
        match (self.coef, self.num, self.den) {
            (0, a, _) => write!(f, "{a}"),
            (c, 0, 1) => write!(f, "{}", surd(c)),
            (c, a, 1) => write!(f, "{a}{}{}", if c > 0 { "+" } else { "" }, surd(c)),
            (c, a, d) => write!(f, "({a}{}{})/{d}", if c > 0 { "+" } else { "" }, surd(c)),
        }
    }
}

impl Serialize for Eigenvalue {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SpectrumEntry {
    pub value: Eigenvalue,
    pub multiplicity: u64,
}

/// Distinct eigenvalues with positive multiplicities, largest first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Spectrum {
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (Eigenvalue, u64)>) -> Self {
        let mut merged: BTreeMap<Eigenvalue, u64> = BTreeMap::new();
        for (value, mult) in pairs {
            if mult > 0 {
                *merged.entry(value).or_default() += mult;
            }
        }
        let mut entries: Vec<SpectrumEntry> =
            merged.into_iter().map(|(value, multiplicity)| SpectrumEntry { value, multiplicity }).collect();
        entries.sort_by(|a, b| b.value.approx().total_cmp(&a.value.approx()));
        Self { entries }
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn multiplicity(&self, value: Eigenvalue) -> u64 {
        self.entries.iter().find(|e| e.value == value).map_or(0, |e| e.multiplicity)
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity).sum()
    }

    /// Exact test that the multiplicity-weighted eigenvalues sum to zero.
    pub fn trace_is_zero(&self) -> bool {
        let mut rational = 0i128; // in halves
        let mut surds: BTreeMap<u64, i128> = BTreeMap::new();
        for e in &self.entries {
            let (a, b, r, d) = e.value.times_integer(e.multiplicity as i64);
            let scale = (2 / d) as i128;
            rational += a as i128 * scale;
            if b != 0 {
                *surds.entry(r).or_default() += b as i128 * scale;
            }
        }
        rational == 0 && surds.values().all(|&c| c == 0)
    }

    pub fn distinct(&self) -> usize {
        self.entries.len()
    }
}

impl std::fmt::Display for Spectrum {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| format!("{}^{}", e.value, e.multiplicity)).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Spectrum of a strongly regular graph from its parameters.
pub fn srg_spectrum(p: &SrgParams) -> Result<Spectrum, AlgebraError> {
    let infeasible = |why: String| AlgebraError::Infeasible(format!("{p}: {why}"));
    let (v, k, l, mu) = (p.v as i64, p.k as i64, p.lambda as i64, p.mu as i64);
    if k >= v || v < 2 {
        return Err(infeasible("degree must be below v".into()));
    }
    if k * (k - l - 1) != (v - k - 1) * mu {
        return Err(infeasible("k(k-λ-1) != (v-k-1)μ".into()));
    }
    let b = l - mu;
    let disc = b * b + 4 * (k - mu);
    if disc < 0 {
        return Err(infeasible("negative discriminant".into()));
    }
    let (r, s) = Eigenvalue::quadratic_roots(b, disc as u64).ok_or_else(|| infeasible("non-integral rational eigenvalues".into()))?;
    let (f, g) = match (r.as_integer(), s.as_integer()) {
        (Some(r), Some(s)) => {
            if r == s {
                return Err(infeasible("coinciding restricted eigenvalues".into()));
            }
            // f + g = v - 1, k + f r + g s = 0
            let num = -k - (v - 1) * s;
            if num % (r - s) != 0 {
                return Err(infeasible("non-integral multiplicity".into()));
            }
            let f = num / (r - s);
            (f, v - 1 - f)
        }
        _ => {
            if 2 * k + (v - 1) * b != 0 || (v - 1) % 2 != 0 {
                return Err(infeasible("irrational eigenvalues with unequal multiplicities".into()));
            }
            ((v - 1) / 2, (v - 1) / 2)
        }
    };
    if f < 0 || g < 0 {
        return Err(infeasible("negative multiplicity".into()));
    }
    Ok(Spectrum::from_pairs([(Eigenvalue::integer(k), 1), (r, f as u64), (s, g as u64)]))
}

/// Every spectrum compatible with the DDG parameters, the multiplicity sum
/// rules and a zero trace. Errors if there is none or the tuple fails the
/// counting identity `k² = k + λ1(n-1) + λ2(v-n)`.
pub fn ddg_spectrum(p: &DdgParams) -> Result<Vec<Spectrum>, AlgebraError> {
    if p.m == 1 {
        return srg_spectrum(&SrgParams::new(p.v, p.k, p.lambda1, p.lambda2)).map(|s| vec![s]);
    }
    let infeasible = |why: &str| AlgebraError::Infeasible(format!("{p}: {why}"));
    if p.m == 0 || p.n == 0 || p.m * p.n != p.v {
        return Err(infeasible("m·n != v"));
    }
    if !p.satisfies_counting_identity() {
        return Err(infeasible("k² != k + λ1(n-1) + λ2(v-n)"));
    }
    let (ff, gg) = (p.theta_f_squared(), p.theta_g_squared());
    if ff < 0 || gg < 0 {
        return Err(infeasible("negative eigenvalue square"));
    }
    let f_total = (p.m * (p.n - 1)) as i64;
    let g_total = (p.m - 1) as i64;
    let tf = Eigenvalue::sqrt(ff as u64, false);
    let tg = Eigenvalue::sqrt(gg as u64, false);
    let k = p.k as i64;

    let splits = |total: i64, theta_zero: bool| -> Vec<i64> {
        if theta_zero {
            vec![total % 2]
        } else {
            (-total..=total).step_by(2).collect()
        }
    };
    let mut out: Vec<Spectrum> = Vec::new();
    for df in splits(f_total, ff == 0) {
        for dg in splits(g_total, gg == 0) {
            let spectrum = Spectrum::from_pairs([
                (Eigenvalue::integer(k), 1),
                (tf, ((f_total + df) / 2) as u64),
                (tf.conjugate_neg(), ((f_total - df) / 2) as u64),
                (tg, ((g_total + dg) / 2) as u64),
                (tg.conjugate_neg(), ((g_total - dg) / 2) as u64),
            ]);
            if spectrum.trace_is_zero() && !out.contains(&spectrum) {
                out.push(spectrum);
            }
        }
    }
    if out.is_empty() {
        return Err(infeasible("no integral multiplicities give a zero trace"));
    }
    Ok(out)
}

impl Eigenvalue {
    /// `-x`.
    fn conjugate_neg(&self) -> Self {
        Self { num: -self.num, coef: -self.coef, ..*self }
    }
}

/// Measured multiplicities on `g`: exact kernel dimensions of `A - θI` for
/// integer eigenvalues, and of the integer minimal quadratic for each
/// irrational conjugate pair (split evenly, as conjugates have equal
/// multiplicity in an integer matrix).
pub fn measured_multiplicities(g: &Graph, values: &[Eigenvalue]) -> Vec<(Eigenvalue, u64)> {
    let mut out = Vec::new();
    let mut done: Vec<Eigenvalue> = Vec::new();
    for &v in values {
        if done.contains(&v) {
            continue;
        }
        match v.as_integer() {
            Some(theta) => out.push((v, exact_multiplicity(g, theta) as u64)),
            None => {
                let (c0, c1) = v.minimal_quadratic().expect("irrational value");
                let pair = polynomial_nullity(g, c0, c1, 1) as u64;
                out.push((v, pair / 2));
                out.push((v.conjugate(), pair / 2));
                done.push(v.conjugate());
            }
        }
        done.push(v);
    }
    out
}

/// Selects the predicted spectrum whose every multiplicity matches the graph.
pub fn certify_spectrum(g: &Graph, candidates: &[Spectrum]) -> Result<Spectrum, AlgebraError> {
    let mut values: Vec<Eigenvalue> = candidates.iter().flat_map(|s| s.entries.iter().map(|e| e.value)).collect();
    values.sort();
    values.dedup();
    let measured: BTreeMap<Eigenvalue, u64> = measured_multiplicities(g, &values).into_iter().collect();
    let total: u64 = measured.values().sum();
    candidates
        .iter()
        .find(|s| total == g.order() as u64 && measured.iter().all(|(&v, &m)| s.multiplicity(v) == m))
        .cloned()
        .ok_or_else(|| {
            let shown: Vec<String> = measured.iter().map(|(v, m)| format!("{v}^{m}")).collect();
            AlgebraError::SpectrumMismatch(format!("measured {{{}}} matches no predicted candidate", shown.join(", ")))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixture_graph;

    fn int(a: i64) -> Eigenvalue {
        Eigenvalue::integer(a)
    }

    #[test]
    fn surd_normal_form_and_display() {
        assert_eq!(Eigenvalue::sqrt(16, false), int(4));
        assert_eq!(Eigenvalue::sqrt(0, true), int(0));
        assert_eq!(Eigenvalue::sqrt(112, false).to_string(), "4√7");
        assert_eq!(Eigenvalue::sqrt(14, true).to_string(), "-√14");
        let (r, s) = Eigenvalue::quadratic_roots(-1, 5).unwrap();
        assert_eq!((r.to_string(), s.to_string()), ("(-1+√5)/2".into(), "(-1-√5)/2".into()));
        assert_eq!(r.minimal_quadratic(), Some((-1, 1)));
        assert_eq!(Eigenvalue::sqrt(112, false).minimal_quadratic(), Some((-112, 0)));
    }

    #[test]
    fn octahedron_line_spectrum_is_forced() {
        // 6 + 2(a - b) = 0 with a + b = 9 forces a = 3, b = 6; the between-class value is 0
        let cands = ddg_spectrum(&DdgParams::new(12, 6, 2, 3, 3, 4)).unwrap();
        assert_eq!(cands.len(), 1);
        let expected = Spectrum::from_pairs([(int(6), 1), (int(2), 3), (int(0), 2), (int(-2), 6)]);
        assert_eq!(cands[0], expected);
        let g = fixture_graph("octahedron_line").unwrap();
        assert_eq!(certify_spectrum(&g, &cands).unwrap(), expected);
    }

    #[test]
    fn srg_spectra() {
        let s = srg_spectrum(&SrgParams::new(64, 28, 12, 12)).unwrap();
        assert_eq!(s, Spectrum::from_pairs([(int(28), 1), (int(4), 28), (int(-4), 35)]));
        let petersen = srg_spectrum(&SrgParams::new(10, 3, 0, 1)).unwrap();
        assert_eq!(petersen, Spectrum::from_pairs([(int(3), 1), (int(1), 5), (int(-2), 4)]));
        let c5 = srg_spectrum(&SrgParams::new(5, 2, 0, 1)).unwrap();
        assert_eq!(c5.total(), 5);
        assert!(c5.trace_is_zero());
        assert_eq!(certify_spectrum(&Graph::cycle(5), &[c5.clone()]).unwrap(), c5);
        assert!(srg_spectrum(&SrgParams::new(10, 3, 1, 1)).is_err());
    }

    #[test]
    fn one_class_ddg_reads_as_srg() {
        let s = ddg_spectrum(&DdgParams::new(10, 3, 0, 1, 1, 10)).unwrap();
        assert_eq!(s, vec![srg_spectrum(&SrgParams::new(10, 3, 0, 1)).unwrap()]);
    }

    #[test]
    fn four_cycle() {
        let cands = ddg_spectrum(&DdgParams::new(4, 2, 2, 0, 2, 2)).unwrap();
        assert_eq!(cands, vec![Spectrum::from_pairs([(int(2), 1), (int(0), 2), (int(-2), 1)])]);
    }

    #[test]
    fn swapped_56_tuple_is_infeasible() {
        // (56,28,14,12,7,8): 28 + 14·7 + 12·48 = 702, not 28²
        assert!(matches!(
            ddg_spectrum(&DdgParams::new(56, 28, 14, 12, 7, 8)),
            Err(AlgebraError::Infeasible(_))
        ));
        let cands = ddg_spectrum(&DdgParams::new(56, 28, 12, 14, 7, 8)).unwrap();
        assert_eq!(cands, vec![Spectrum::from_pairs([(int(28), 1), (int(4), 21), (int(0), 6), (int(-4), 28)])]);
    }

    #[test]
    fn five_eigenvalue_family_has_several_candidates() {
        // (45,24,15,12,5,9): 24 + 3 df + 6 dg = 0 with f1+f2 = 40, g1+g2 = 4
        let cands = ddg_spectrum(&DdgParams::new(45, 24, 15, 12, 5, 9)).unwrap();
        let mut brute = Vec::new();
        for f1 in 0..=40i64 {
            for g1 in 0..=4i64 {
                if 24 + 3 * (2 * f1 - 40) + 6 * (2 * g1 - 4) == 0 {
                    brute.push((f1, g1));
                }
            }
        }
        assert_eq!(cands.len(), brute.len());
        for c in &cands {
            assert_eq!(c.total(), 45);
            assert!(c.trace_is_zero());
        }
    }
}
