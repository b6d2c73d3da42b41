use std::io::Write;
use std::path::Path;

use ddg_core::algebra::{
    certify_spectrum, ddg_spectrum, hadamard_to_srg, p_rank, srg_spectrum, srg_to_hadamard, AlgebraError,
    HadamardMatrix, HadamardSign,
};
use ddg_core::construct::{expected_params, Construction, Expected};
use ddg_core::graph::{graph6, intersection_array, verify_ddg, verify_srg, Graph};
use ddg_core::iso;
use ddg_core::latin::{enumerate_reduced_symmetric_under, Equivalence};
use serde::Serialize;
use serde_json::json;

use crate::input::{self, SpecFile};
use crate::report::{certify, ConstructReport, GraphInfo, Mode, Request, SpecEcho, Timings, SCHEMA};
use crate::{
    ClassifyArgs, CliError, ConstructArgs, DistanceArgs, EquivalenceArg, ExpectedArgs, GraphArg, HadamardArgs,
    LatinCommand, PrankArgs, Sign, VerifyArgs,
};

fn print_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    say(&serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?)
}

/// A closed stdout pipe is not an error.
fn say(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Input(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn spec_from_args(a: &ConstructArgs) -> Result<(SpecFile, Option<std::path::PathBuf>), CliError> {
    if let Some(path) = &a.spec {
        let mut spec = SpecFile::parse(&input::read_text(path)?)?;
        spec.prank.extend(&a.primes);
        return Ok((spec, path.parent().map(Path::to_path_buf)));
    }
    let missing = |flag: &str| CliError::Input(format!("--{flag} is required without --spec"));
    let spec = SpecFile {
        construction: a.construction.ok_or_else(|| missing("construction"))?,
        q: a.q.ok_or_else(|| missing("q"))?,
        d: a.d.ok_or_else(|| missing("d"))?,
        latin: a.latin.clone().ok_or_else(|| missing("latin"))?,
        h: a.h,
        mask: a.mask.clone(),
        prank: a.primes.clone(),
        bijections: a.bijections.as_deref().map(input::read_bijections).transpose()?.unwrap_or_default(),
        numbering: a.numbering.as_deref().map(input::read_numbering).transpose()?.unwrap_or_default(),
        designs: vec![],
    };
    Ok((spec, None))
}

pub fn construct(a: &ConstructArgs) -> Result<(), CliError> {
    let (mut spec, base) = spec_from_args(a)?;
    spec.prank.sort_unstable();
    spec.prank.dedup();
    let mut timings = Timings::default();
    let mut rep = ConstructReport {
        schema: SCHEMA,
        command: "construct",
        spec: SpecEcho { spec: spec.clone(), latin_path: String::new() },
        graph: None,
        expected: None,
        certified: None,
        verified: false,
        failure: None,
        timings_ms: Default::default(),
    };
    let outcome = run_construct(a, &spec, base.as_deref(), &mut rep, &mut timings);
    rep.timings_ms = timings.into_map();
    if let Err(e) = &outcome {
        rep.failure = Some(e.to_string());
    }
    match &a.report {
        Some(path) => {
            let text = serde_json::to_string_pretty(&rep).map_err(|e| CliError::Input(e.to_string()))?;
            input::write_file(path, &(text + "\n"))?;
            if outcome.is_ok() {
                let params = rep.certified.as_ref().and_then(|c| c.ddg).map(|p| p.to_string()).unwrap_or_default();
                say(&format!("construction {} verified {params}", spec.construction))?;
            }
        }
        None => print_json(&rep)?,
    }
    outcome
}

fn run_construct(
    a: &ConstructArgs,
    spec: &SpecFile,
    base: Option<&Path>,
    rep: &mut ConstructReport,
    timings: &mut Timings,
) -> Result<(), CliError> {
    let (built, latin_path) = input::build_spec(spec, base)?;
    rep.spec.latin_path = latin_path.display().to_string();
    let expected =
        expected_params(built.which, built.q as u64, built.d).map_err(CliError::from_construct)?;
    rep.expected = Some(expected);
    let g = timings.time("build", || built.build()).map_err(CliError::from_construct)?;
    let encoded = graph6::encode_string(&g);
    let reread = match &a.out {
        Some(path) => {
            input::write_file(path, &format!("{encoded}\n"))?;
            input::read_graph(path)?
        }
        None => graph6::decode(encoded.as_bytes()).map_err(|e| CliError::Input(e.to_string()))?,
    };
    rep.graph = Some(GraphInfo {
        vertices: reread.order(),
        edges: reread.edge_count(),
        path: a.out.as_ref().map(|p| p.display().to_string()),
    });
    let mode = match built.which {
        Construction::Three | Construction::Four => Mode::Srg,
        Construction::One | Construction::Two => Mode::Ddg,
    };
    let req = Request { mode, spectrum: !a.no_spectrum, primes: &spec.prank, canonical: !a.no_canonical };
    let mut cert = certify(&reread, &req, timings);
    let matches = match expected {
        Expected::Srg(p) => cert.srg == Some(p),
        Expected::Ddg(p) => cert.ddg == Some(p),
    };
    if !matches && cert.failures.is_empty() {
        let got = cert.ddg.map(|p| p.to_string()).unwrap_or_else(|| "nothing".into());
        cert.failures.push(format!("certified {got}, expected {expected}"));
    }
    let failures = cert.failures.clone();
    rep.certified = Some(cert);
    rep.verified = failures.is_empty();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(failures.join("; ")))
    }
}

fn check_result<T: Serialize>(value: &T, failures: &[String]) -> Result<(), CliError> {
    print_json(value)?;
    if failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Check(failures.join("; ")))
    }
}

pub fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    let g = input::read_graph(&a.graph)?;
    let mode = if a.srg { Mode::Srg } else { Mode::Ddg };
    let mut timings = Timings::default();
    let cert = certify(&g, &Request { mode, spectrum: false, primes: &[], canonical: false }, &mut timings);
    let out = json!({
        "schema": SCHEMA,
        "command": "verify",
        "graph": GraphInfo { vertices: g.order(), edges: g.edge_count(), path: Some(a.graph.display().to_string()) },
        "certified": &cert,
        "verified": cert.failures.is_empty(),
        "timings_ms": timings.into_map(),
    });
    check_result(&out, &cert.failures)
}

pub fn spectrum(a: &GraphArg) -> Result<(), CliError> {
    let g = input::read_graph(&a.graph)?;
    let (params, candidates) = match verify_srg(&g) {
        Ok(p) => (p.as_ddg(), srg_spectrum(&p).map(|s| vec![s])),
        Err(_) => {
            let cert = verify_ddg(&g, None).map_err(|e| CliError::Check(format!("not a divisible design graph: {e}")))?;
            (cert.params, ddg_spectrum(&cert.params))
        }
    };
    let candidates = candidates.map_err(|e| CliError::Check(e.to_string()))?;
    let certified = certify_spectrum(&g, &candidates);
    let failures: Vec<String> = certified.as_ref().err().map(|e| e.to_string()).into_iter().collect();
    let out = json!({
        "schema": SCHEMA,
        "command": "spectrum",
        "params": params,
        "candidates": candidates,
        "spectrum": certified.ok(),
    });
    check_result(&out, &failures)
}

pub fn prank(a: &PrankArgs) -> Result<(), CliError> {
    let g = input::read_graph(&a.graph)?;
    let mut ranks = std::collections::BTreeMap::new();
    for &p in &a.primes {
        let r = p_rank(&g, p).map_err(|e| match e {
            AlgebraError::NotPrime(_) => CliError::Input(e.to_string()),
            other => CliError::Check(other.to_string()),
        })?;
        ranks.insert(p, r);
    }
    print_json(&json!({ "schema": SCHEMA, "command": "prank", "vertices": g.order(), "p_ranks": ranks }))
}

#[derive(Serialize)]
struct ClassRow {
    representative: String,
    members: Vec<String>,
    form_sha256: String,
    aut_order: String,
}

pub fn classify(a: &ClassifyArgs) -> Result<(), CliError> {
    let mut labels = vec![];
    let mut graphs = vec![];
    for path in &a.graphs {
        let file = input::read_graphs(path)?;
        let many = file.len() > 1;
        for (i, g) in file.into_iter().enumerate() {
            labels.push(if many { format!("{}:{}", path.display(), i + 1) } else { path.display().to_string() });
            graphs.push(g);
        }
    }
    let classes = iso::classify(&graphs).map_err(|e| CliError::Input(e.to_string()))?;
    let rows: Vec<ClassRow> = classes
        .into_iter()
        .map(|c| ClassRow {
            representative: labels[c.representative].clone(),
            members: c.members.iter().map(|&m| labels[m].clone()).collect(),
            form_sha256: c.form_hash,
            aut_order: c.group_order,
        })
        .collect();
    print_json(&json!({
        "schema": SCHEMA,
        "command": "classify",
        "inputs": labels.len(),
        "class_count": rows.len(),
        "classes": rows,
    }))
}

fn sign_of(s: Sign) -> HadamardSign {
    match s {
        Sign::Minus => HadamardSign::Minus,
        Sign::Plus => HadamardSign::Plus,
    }
}

pub fn hadamard(a: &HadamardArgs) -> Result<(), CliError> {
    if let Some(path) = &a.from_srg {
        let g = input::read_graph(path)?;
        let (h, sign) = srg_to_hadamard(&g).map_err(|e| CliError::Check(e.to_string()))?;
        let n = h.order() as u64;
        let inverse = hadamard_to_srg(&h, sign).map(|back| back == g.stripped()).unwrap_or(false);
        if let Some(out) = &a.out {
            input::write_file(out, &h.to_text())?;
        }
        let checks = json!({
            "hh_t_equals_n_i": h.is_hadamard(),
            "symmetric": h.is_symmetric(),
            "constant_diagonal": h.constant_diagonal(),
            "row_sum": h.regular_sum(),
            "inverts_to_input": inverse,
        });
        let mut failures = vec![];
        if !(h.is_hadamard() && h.is_symmetric() && h.constant_diagonal().is_some() && h.regular_sum().is_some() && inverse) {
            failures.push("Hadamard checks failed".to_string());
        }
        let out = json!({ "schema": SCHEMA, "command": "hadamard", "order": n, "sign": sign, "checks": checks });
        return check_result(&out, &failures);
    }
    let path = a.to_srg.as_ref().expect("clap group requires a direction");
    let h = HadamardMatrix::from_text(&input::read_text(path)?).map_err(|e| CliError::Input(e.to_string()))?;
    let sign = sign_of(a.sign);
    let g = hadamard_to_srg(&h, sign).map_err(|e| CliError::Check(e.to_string()))?;
    let params = verify_srg(&g).map_err(|e| CliError::Check(e.to_string()))?;
    let g6 = graph6::encode_string(&g);
    if let Some(out) = &a.out {
        input::write_file(out, &format!("{g6}\n"))?;
    }
    print_json(&json!({ "schema": SCHEMA, "command": "hadamard", "srg": params, "graph6": g6 }))
}

pub fn distance(a: &DistanceArgs) -> Result<(), CliError> {
    let mut g: Graph = input::read_graph(&a.graph)?;
    if a.complement {
        g = g.complement();
    }
    let ia = intersection_array(&g).map_err(|e| CliError::Check(e.to_string()))?;
    print_json(&json!({
        "schema": SCHEMA,
        "command": "distance",
        "complement": a.complement,
        "diameter": ia.diameter(),
        "intersection_array": ia.to_string(),
        "b": ia.b,
        "c": ia.c,
    }))
}

pub fn expected(a: &ExpectedArgs) -> Result<(), CliError> {
    let which = Construction::try_from(a.construction).map_err(CliError::from_construct)?;
    let e = expected_params(which, a.q, a.d).map_err(CliError::from_construct)?;
    print_json(&json!({ "schema": SCHEMA, "command": "expected", "construction": a.construction, "q": a.q, "d": a.d, "display": e.to_string(), "params": e }))
}

pub fn latin(c: &LatinCommand) -> Result<(), CliError> {
    match c {
        LatinCommand::Enumerate { side, equivalence, out_dir } => {
            let eq = match equivalence {
                EquivalenceArg::Loop => Equivalence::LoopIsomorphism,
                EquivalenceArg::RowColumnSymbol => Equivalence::RowColumnSymbol,
            };
            let squares = enumerate_reduced_symmetric_under(*side, eq).map_err(|e| CliError::Input(e.to_string()))?;
            if let Some(dir) = out_dir {
                std::fs::create_dir_all(dir).map_err(|e| CliError::Input(format!("{}: {e}", dir.display())))?;
                for (k, s) in squares.iter().enumerate() {
                    input::write_file(&dir.join(format!("square_{}", k + 1)), &s.to_text())?;
                }
            }
            let rows: Vec<_> = squares.iter().map(|s| s.one_based_rows()).collect();
            print_json(&json!({
                "schema": SCHEMA,
                "command": "latin-enumerate",
                "side": side,
                "equivalence": eq,
                "count": squares.len(),
                "squares": rows,
            }))
        }
        LatinCommand::Check { square } => {
            let (s, path) = input::resolve_square(square, None)?;
            let out = json!({
                "schema": SCHEMA,
                "command": "latin-check",
                "path": path.display().to_string(),
                "side": s.side(),
                "symbols": s.symbol_count(),
                "latin": s.is_latin(),
                "symmetric": s.is_symmetric(),
                "reduced": s.is_reduced(),
                "diagonal": s.diagonal().iter().map(|x| x + 1).collect::<Vec<_>>(),
            });
            let failures = if s.is_latin() { vec![] } else { vec!["not a Latin square".to_string()] };
            check_result(&out, &failures)
        }
    }
}
