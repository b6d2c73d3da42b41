use std::collections::BTreeMap;
use std::time::Instant;

use ddg_core::algebra::{certify_spectrum, ddg_spectrum, p_rank, srg_spectrum, Spectrum};
use ddg_core::construct::Expected;
use ddg_core::graph::{verify_ddg, verify_srg, DdgParams, Graph, SrgParams};
use ddg_core::iso;
use serde::Serialize;

use crate::input::SpecFile;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Default)]
pub struct Timings(BTreeMap<String, f64>);

impl Timings {
    pub fn time<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.0.insert(name.to_string(), start.elapsed().as_secs_f64() * 1e3);
        out
    }

    pub fn into_map(self) -> BTreeMap<String, f64> {
        self.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpecEcho {
    #[serde(flatten)]
    pub spec: SpecFile,
    pub latin_path: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub classes: u64,
    pub class_size: u64,
    /// 0-based class of each vertex.
    pub labels: Vec<u32>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Alternative {
    pub lambda1: u64,
    pub lambda2: u64,
    pub classes: u64,
    pub class_size: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CanonicalReport {
    pub form_sha256: String,
    pub aut_order: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphInfo {
    pub vertices: usize,
    pub edges: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
}

/// Everything established about one graph.
#[derive(Debug, Clone, Default, Serialize)]
pub struct Certification {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ddg: Option<DdgParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub srg: Option<SrgParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<PartitionReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub alternatives: Vec<Alternative>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Spectrum>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub p_ranks: BTreeMap<u64, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical: Option<CanonicalReport>,
    /// Reasons verification failed, in the order found.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Ddg,
    Srg,
}

pub struct Request<'a> {
    pub mode: Mode,
    pub spectrum: bool,
    pub primes: &'a [u64],
    pub canonical: bool,
}

/// Exhaustive parameter check, then the requested invariants.
pub fn certify(g: &Graph, req: &Request<'_>, timings: &mut Timings) -> Certification {
    let mut out = Certification::default();
    match req.mode {
        Mode::Srg => match timings.time("verify", || verify_srg(g)) {
            Ok(p) => {
                out.srg = Some(p);
                out.ddg = Some(p.as_ddg());
            }
            Err(e) => out.failures.push(format!("not strongly regular: {e}")),
        },
        Mode::Ddg => match timings.time("verify", || verify_ddg(g, None)) {
            Ok(cert) => {
                out.ddg = Some(cert.params);
                out.srg = cert.srg;
                out.partition = Some(PartitionReport {
                    classes: cert.params.m,
                    class_size: cert.params.n,
                    labels: cert.partition.labels().to_vec(),
                });
                out.alternatives = cert
                    .alternatives
                    .iter()
                    .map(|a| {
                        let classes = a.partition.class_count() as u64;
                        Alternative {
                            lambda1: a.lambda1,
                            lambda2: a.lambda2,
                            classes,
                            class_size: g.order() as u64 / classes,
                        }
                    })
                    .collect();
            }
            Err(e) => out.failures.push(format!("not a divisible design graph: {e}")),
        },
    }
    if req.spectrum {
        if let Some(params) = out.ddg {
            let candidates = match (req.mode, out.srg) {
                (Mode::Srg, Some(p)) => srg_spectrum(&p).map(|s| vec![s]),
                _ => ddg_spectrum(&params),
            };
            match timings.time("spectrum", || candidates.and_then(|c| certify_spectrum(g, &c))) {
                Ok(s) => out.spectrum = Some(s),
                Err(e) => out.failures.push(format!("spectrum: {e}")),
            }
        }
    }
    for &p in req.primes {
        match timings.time(&format!("p_rank_{p}"), || p_rank(g, p)) {
            Ok(r) => {
                out.p_ranks.insert(p, r);
            }
            Err(e) => out.failures.push(format!("{p}-rank: {e}")),
        }
    }
    if req.canonical && g.order() <= iso::MAX_ORDER {
        if let Ok(c) = timings.time("canonical", || iso::canonical_labelling(g)) {
            out.canonical = Some(CanonicalReport { form_sha256: c.form.hash_hex(), aut_order: c.group_order.to_string() });
        }
    }
    out
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructReport {
    pub schema: u32,
    pub command: &'static str,
    pub spec: SpecEcho,
    pub graph: Option<GraphInfo>,
    pub expected: Option<Expected>,
    pub certified: Option<Certification>,
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
    pub timings_ms: BTreeMap<String, f64>,
}
