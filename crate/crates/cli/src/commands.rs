use std::fmt::Write as _;

use cmrank::oracle::{commutes, iso_oracle, oracle_report, OracleReport, OracleVerdict};
use cmrank::regression;
use cmrank::rim::{canonical_rotation, enumerate_profiles};
use cmrank::structure::{build_iso, classify, count_indecomposables, iso_key, IsoOutcome, Verdict};
use cmrank::sweep::{coefficient_edges, key_counts, lattice_modules, oracle_classes, random_modules, tabulate};
use cmrank::{
    build_m, default_order, profile_geometry, solve_constraint, CoefficientTuple, Error, Profile,
    Rank2Module, SeriesMatrix, TruncatedSeries,
};
use serde::Serialize;

use crate::args::{
    ClassifyArgs, CountArgs, EnumerateArgs, Format, IsoArgs, ModuleArgs, OracleArgs, OracleMode,
    SuiteArgs,
};
use crate::report::{
    Agreement, CensusRow, ClassifyOut, CountOut, EnumerateOut, IsoOut, ModuleOut, OracleOut,
    StructureOut, SuiteLine, SuiteOut,
};
use crate::{CliError, EXIT_DISAGREE, EXIT_OK, EXIT_PRECISION};

/// Text to print and the exit code.
pub type Output = Result<(String, i32), CliError>;

fn checked_order(n: usize, requested: Option<usize>) -> Result<usize, CliError> {
    let order = requested.unwrap_or_else(|| default_order(n));
    if order < 2 * n {
        return Err(CliError::usage(
            "--trunc-order",
            format!("{order} is below 2n = {}", 2 * n),
        ));
    }
    Ok(order)
}

pub fn parse_profile(text: &str, n: usize, k: Option<usize>) -> Result<Profile, CliError> {
    let p = Profile::parse(text, n).map_err(|e| CliError::usage("--profile", e))?;
    if let Some(k) = k {
        if p.k() != k {
            return Err(CliError::usage(
                "--k",
                format!("profile has rims of size {}, not {k}", p.k()),
            ));
        }
    }
    Ok(p)
}

/// Parses a coefficient list; a single `_` entry is solved from the cycle
/// constraint.
pub fn parse_module(profile: &Profile, field: &str, text: &str, order: usize) -> Result<Rank2Module, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != profile.n() {
        return Err(CliError::usage(
            field,
            format!("expected {} entries, got {}", profile.n(), parts.len()),
        ));
    }
    let mut free = None;
    let mut values = Vec::with_capacity(parts.len());
    for (idx, part) in parts.iter().enumerate() {
        if *part == "_" {
            if free.is_some() {
                return Err(CliError::usage(field, "at most one `_` entry"));
            }
            free = Some(idx + 1);
            values.push(TruncatedSeries::zero(order));
        } else {
            values.push(TruncatedSeries::parse(part, order).map_err(|e| CliError::usage(field, e))?);
        }
    }
    let mut b = CoefficientTuple::new(values);
    if let Some(edge) = free {
        b = solve_constraint(profile, &b, edge).map_err(|e| CliError::from_input(field, e))?;
    }
    build_m(profile, &b).map_err(|e| CliError::from_input(field, e))
}

fn load(args: &ModuleArgs) -> Result<(Profile, Rank2Module), CliError> {
    let order = checked_order(args.n, args.trunc_order)?;
    let p = parse_profile(&args.profile, args.n, args.k)?;
    let m = parse_module(&p, "--b", &args.b, order)?;
    Ok((p, m))
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::usage("output", e))?;
    s.push('\n');
    Ok(s)
}

fn csv_rows<T: Serialize>(rows: &[T]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage("output", e.error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn oracle_verdict_name(r: &OracleReport) -> &'static str {
    match r.verdict {
        OracleVerdict::Indecomposable => "Indecomposable",
        OracleVerdict::Decomposable => "DirectSum",
    }
}

fn joined(pair: &Option<[String; 2]>) -> String {
    pair.as_ref().map_or(String::new(), |[a, b]| format!("{{{a}}}+{{{b}}}"))
}

#[derive(Serialize)]
struct ClassifyCsv<'a> {
    profile: &'a str,
    b: String,
    trunc_order: usize,
    verdict: &'a str,
    summands: String,
    iso_key: &'a str,
    case: &'a str,
    oracle: &'a str,
    agreement: String,
}

pub fn cmd_classify(args: &ClassifyArgs) -> Output {
    let (_, m) = load(&args.module)?;
    let mut out = ClassifyOut {
        command: "classify".into(),
        module: ModuleOut::new(&m),
        structure: None,
        not_applicable: None,
        oracle: None,
        verdict: String::new(),
        summands: None,
        agreement: None,
    };
    if args.oracle != OracleMode::Only {
        match classify(&m) {
            Ok(r) => out.structure = Some(StructureOut::from(&r)),
            Err(Error::NotApplicable(reason)) => out.not_applicable = Some(reason),
            Err(e) => return Err(e.into()),
        }
    }
    if args.oracle != OracleMode::Off || out.structure.is_none() {
        out.oracle = Some(oracle_report(m.representation())?);
    }
    match (&out.structure, &out.oracle) {
        (Some(s), o) => {
            out.verdict = s.verdict.clone();
            out.summands = s.summands.clone();
            if let Some(o) = o {
                let same = oracle_verdict_name(o) == s.verdict
                    && (o.summands.is_none() || o.summands == s.summands);
                out.agreement = Some(Agreement::from_bool(same));
            }
        }
        (None, Some(o)) => {
            out.verdict = oracle_verdict_name(o).into();
            out.summands = o.summands.clone();
        }
        (None, None) => unreachable!("the oracle runs whenever the criteria do not apply"),
    }
    let code = if out.agreement == Some(Agreement::Disagree) { EXIT_DISAGREE } else { EXIT_OK };
    let text = match args.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(&[ClassifyCsv {
            profile: &out.module.profile,
            b: out.module.b_tuple.join(","),
            trunc_order: out.module.trunc_order,
            verdict: &out.verdict,
            summands: joined(&out.summands),
            iso_key: out.structure.as_ref().map_or("oracle", |s| s.iso_key.as_str()),
            case: out.structure.as_ref().map_or("", |s| s.case.as_str()),
            oracle: out.oracle.as_ref().map_or("", oracle_verdict_name),
            agreement: out.agreement.map_or(String::new(), |a| a.to_string()),
        }])?,
        Format::Text => {
            let mut t = String::new();
            writeln!(t, "profile   {} (canonical {}, rotation {})", out.module.profile, out.module.canonical_profile, out.module.rotation).unwrap();
            writeln!(t, "b         {}", out.module.b_tuple.join(", ")).unwrap();
            writeln!(t, "verdict   {}", out.verdict).unwrap();
            if let Some([a, b]) = &out.summands {
                writeln!(t, "summands  L_{{{a}}} + L_{{{b}}}").unwrap();
            }
            if let Some(s) = &out.structure {
                writeln!(t, "case      {}", s.case).unwrap();
                writeln!(t, "iso_key   {}", s.iso_key).unwrap();
                writeln!(t, "criterion {}", s.theorem).unwrap();
            }
            if let Some(reason) = &out.not_applicable {
                writeln!(t, "criteria  not applicable ({reason}); oracle decides").unwrap();
            }
            if let Some(o) = &out.oracle {
                writeln!(t, "oracle    {} (End/tEnd dim {}, radical {})", oracle_verdict_name(o), o.end_mod_t_dim, o.radical_dim).unwrap();
            }
            if let Some(a) = out.agreement {
                writeln!(t, "{a}").unwrap();
            }
            t
        }
    };
    Ok((text, code))
}

fn family_literals(family: &[SeriesMatrix]) -> Vec<Vec<Vec<String>>> {
    family.iter().map(SeriesMatrix::to_literals).collect()
}

#[derive(Serialize)]
struct IsoCsv<'a> {
    profile: &'a str,
    b: String,
    c: String,
    verdict: &'a str,
    method: &'a str,
    key_1: &'a str,
    key_2: &'a str,
    phi_base: String,
    oracle: String,
    agreement: String,
}

pub fn cmd_iso(args: &IsoArgs) -> Output {
    let (p, m1) = load(&args.module)?;
    let m2 = parse_module(&p, "--c", &args.c, m1.order())?;
    let mut out = IsoOut {
        command: "iso".into(),
        module_1: ModuleOut::new(&m1),
        module_2: ModuleOut::new(&m2),
        verdict: String::new(),
        method: String::new(),
        key_1: iso_key(&m1).ok().map(|k| k.to_string()),
        key_2: iso_key(&m2).ok().map(|k| k.to_string()),
        not_applicable: None,
        base_vertex: None,
        family: None,
        commutes: None,
        oracle_isomorphic: None,
        agreement: None,
    };
    let mut structural = None;
    if args.oracle != OracleMode::Only {
        match build_iso(&m1, &m2) {
            Ok(IsoOutcome::Isomorphic { base_vertex, family }) => {
                out.commutes = Some(commutes(m1.representation(), m2.representation(), &family));
                out.base_vertex = Some(base_vertex);
                out.family = Some(family_literals(&family));
                out.method = "explicit".into();
                structural = Some(true);
            }
            Ok(IsoOutcome::NonIsomorphic) => {
                out.method = "iso-keys".into();
                structural = Some(false);
            }
            Err(Error::NotApplicable(reason)) => out.not_applicable = Some(reason),
            Err(e) => return Err(e.into()),
        }
    }
    if args.oracle != OracleMode::Off || structural.is_none() {
        out.oracle_isomorphic = Some(iso_oracle(m1.representation(), m2.representation())?);
    }
    let iso = match (structural, out.oracle_isomorphic) {
        (Some(s), Some(o)) => {
            out.agreement = Some(Agreement::from_bool(s == o));
            s
        }
        (Some(s), None) => s,
        (None, Some(o)) => {
            out.method = "oracle".into();
            o
        }
        (None, None) => unreachable!("the oracle runs whenever no construction applies"),
    };
    out.verdict = if iso { "ISO" } else { "NOT ISO" }.into();
    let failed_check = out.commutes == Some(false);
    let code = if out.agreement == Some(Agreement::Disagree) || failed_check { EXIT_DISAGREE } else { EXIT_OK };
    let phi_base = match (&out.family, out.base_vertex) {
        (Some(f), Some(v)) => format!("{:?}", f[v]),
        _ => String::new(),
    };
    let text = match args.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(&[IsoCsv {
            profile: &out.module_1.profile,
            b: out.module_1.b_tuple.join(","),
            c: out.module_2.b_tuple.join(","),
            verdict: &out.verdict,
            method: &out.method,
            key_1: out.key_1.as_deref().unwrap_or(""),
            key_2: out.key_2.as_deref().unwrap_or(""),
            phi_base,
            oracle: out.oracle_isomorphic.map_or(String::new(), |o| if o { "ISO" } else { "NOT ISO" }.into()),
            agreement: out.agreement.map_or(String::new(), |a| a.to_string()),
        }])?,
        Format::Text => {
            let mut t = String::new();
            writeln!(t, "profile  {}", out.module_1.profile).unwrap();
            writeln!(t, "b        {}", out.module_1.b_tuple.join(", ")).unwrap();
            writeln!(t, "c        {}", out.module_2.b_tuple.join(", ")).unwrap();
            writeln!(t, "verdict  {} ({})", out.verdict, out.method).unwrap();
            if let (Some(a), Some(b)) = (&out.key_1, &out.key_2) {
                writeln!(t, "keys     {a} / {b}").unwrap();
            }
            if let Some(f) = &out.family {
                for (v, phi) in f.iter().enumerate() {
                    let rows: Vec<String> = phi.iter().map(|r| format!("[{}]", r.join(", "))).collect();
                    writeln!(t, "phi_{v:<4} [{}]", rows.join(", ")).unwrap();
                }
                writeln!(t, "commutes {}", out.commutes == Some(true)).unwrap();
            }
            if let Some(o) = out.oracle_isomorphic {
                writeln!(t, "oracle   {}", if o { "ISO" } else { "NOT ISO" }).unwrap();
            }
            if let Some(a) = out.agreement {
                writeln!(t, "{a}").unwrap();
            }
            t
        }
    };
    Ok((text, code))
}

fn parse_range(text: &str) -> Result<(i64, i64), CliError> {
    let bad = || CliError::usage("--range", format!("expected `lo,hi`, got `{text}`"));
    let (lo, hi) = text.split_once(',').ok_or_else(bad)?;
    let lo: i64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: i64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

fn census(
    p: &Profile,
    range: (i64, i64),
    args: &EnumerateArgs,
    order: usize,
) -> Result<CensusRow, CliError> {
    let geom = profile_geometry(&p.i, &p.j)?;
    let free = coefficient_edges(p).len().saturating_sub(1);
    let width = (range.1 - range.0 + 1) as u128;
    let space = width.checked_pow(free as u32).unwrap_or(u128::MAX);
    let (modules, sampled) = if space <= args.max_tuples as u128 {
        (lattice_modules(p, range, args.max_tuples, order)?, false)
    } else if let Some(seed) = args.seed {
        (random_modules(p, range, args.max_tuples, seed, order)?, true)
    } else {
        return Err(CliError::usage(
            "--max-tuples",
            format!(
                "profile {p} has {space} tuples in range, above the bound {}; raise --max-tuples or pass --seed to sample",
                args.max_tuples
            ),
        ));
    };
    let rows = tabulate(&modules, args.oracle != OracleMode::Off)?;
    let keys = key_counts(&rows, &Verdict::Indecomposable);
    let oracle_keyed: Vec<Rank2Module> = modules
        .iter()
        .zip(&rows)
        .filter(|(_, r)| r.verdict == "Indecomposable" && r.iso_key == "oracle")
        .map(|(m, _)| m.clone())
        .collect();
    let keyed = keys.keys().filter(|k| k.as_str() != "oracle").count();
    let classes = keyed + oracle_classes(&oracle_keyed)?.len();
    let indecomposable = rows.iter().filter(|r| r.verdict == "Indecomposable").count();
    let expected_classes = (geom.r1 == 3 && geom.all_squared())
        .then(|| count_indecomposables([geom.box_sizes[0], geom.box_sizes[1], geom.box_sizes[2]]));
    let disagreements = (args.oracle != OracleMode::Off)
        .then(|| rows.iter().filter(|r| r.agrees() == Some(false)).count());
    Ok(CensusRow {
        profile: p.to_string(),
        box_sizes: geom.box_sizes.clone(),
        tuples: rows.len(),
        sampled,
        indecomposable,
        decomposable: rows.len() - indecomposable,
        keys,
        oracle_keyed: oracle_keyed.len(),
        classes,
        expected_classes,
        disagreements,
    })
}

#[derive(Serialize)]
struct CensusCsv<'a> {
    profile: &'a str,
    box_sizes: String,
    tuples: usize,
    sampled: bool,
    indecomposable: usize,
    decomposable: usize,
    keys: String,
    oracle_keyed: usize,
    classes: usize,
    expected_classes: Option<usize>,
    disagreements: Option<usize>,
}

pub fn cmd_enumerate(args: &EnumerateArgs) -> Output {
    let order = checked_order(args.n, args.trunc_order)?;
    let range = parse_range(&args.range)?;
    let profiles = match &args.profile {
        Some(text) => {
            let p = parse_profile(text, args.n, Some(args.k))?;
            let geom = profile_geometry(&p.i, &p.j).map_err(|e| CliError::usage("--profile", e))?;
            if geom.r1 < 3 {
                return Err(CliError::usage("--profile", format!("{} boxes, need at least 3", geom.r1)));
            }
            vec![canonical_rotation(&p).0]
        }
        None => enumerate_profiles(args.k, args.n, 3),
    };
    let rows = profiles
        .iter()
        .map(|p| census(p, range, args, order))
        .collect::<Result<Vec<_>, _>>()?;
    let mismatch = rows.iter().any(|r| {
        r.disagreements.unwrap_or(0) > 0 || r.expected_classes.is_some_and(|e| e != r.classes)
    });
    let out = EnumerateOut {
        command: "enumerate".into(),
        k: args.k,
        n: args.n,
        range: [range.0, range.1],
        seed: args.seed,
        trunc_order: order,
        profiles: rows,
    };
    let flat: Vec<CensusCsv> = out
        .profiles
        .iter()
        .map(|r| CensusCsv {
            profile: &r.profile,
            box_sizes: r.box_sizes.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            tuples: r.tuples,
            sampled: r.sampled,
            indecomposable: r.indecomposable,
            decomposable: r.decomposable,
            keys: r.keys.iter().map(|(k, v)| format!("{k}:{v}")).collect::<Vec<_>>().join(" "),
            oracle_keyed: r.oracle_keyed,
            classes: r.classes,
            expected_classes: r.expected_classes,
            disagreements: r.disagreements,
        })
        .collect();
    let text = match args.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(&flat)?,
        Format::Text => {
            let mut t = String::new();
            for r in &flat {
                let expected = r.expected_classes.map_or("-".to_string(), |e| e.to_string());
                writeln!(
                    t,
                    "{:<28} tuples {:>5}  indecomposable {:>5}  classes {:>3} (expected {expected})  keys [{}]",
                    r.profile, r.tuples, r.indecomposable, r.classes, r.keys
                )
                .unwrap();
            }
            t
        }
    };
    Ok((text, if mismatch { EXIT_DISAGREE } else { EXIT_OK }))
}

pub fn cmd_count(args: &CountArgs) -> Output {
    let sizes: [usize; 3] = match (&args.sizes, &args.profile, args.n) {
        (Some(text), _, _) => {
            let parts: Vec<usize> = text
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::usage("--sizes", e))?;
            <[usize; 3]>::try_from(parts)
                .map_err(|p| CliError::usage("--sizes", format!("expected 3 sizes, got {}", p.len())))?
        }
        (None, Some(text), Some(n)) => {
            let p = parse_profile(text, n, None)?;
            let g = profile_geometry(&p.i, &p.j).map_err(|e| CliError::usage("--profile", e))?;
            if g.r1 != 3 || !g.all_squared() {
                return Err(CliError::usage("--profile", "not a three-box profile with squared boxes"));
            }
            [g.box_sizes[0], g.box_sizes[1], g.box_sizes[2]]
        }
        _ => return Err(CliError::usage("--sizes", "give --sizes or --profile with --n")),
    };
    if sizes.contains(&0) {
        return Err(CliError::usage("--sizes", "box sizes are positive"));
    }
    let out = CountOut {
        command: "count".into(),
        sizes,
        count: count_indecomposables(sizes),
    };
    let text = match args.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(&[(sizes[0], sizes[1], sizes[2], out.count)])
            .map(|body| format!("l1,l2,l3,count\n{body}"))?,
        Format::Text => format!("{}\n", out.count),
    };
    Ok((text, EXIT_OK))
}

#[derive(Serialize)]
struct OracleCsv<'a> {
    profile: &'a str,
    b: String,
    verdict: &'a str,
    summands: String,
    end_rank: usize,
    end_mod_t_dim: usize,
    radical_dim: usize,
    ss_quotient_dim: usize,
}

pub fn cmd_oracle(args: &OracleArgs) -> Output {
    let (_, m) = load(&args.module)?;
    let out = OracleOut {
        command: "oracle".into(),
        module: ModuleOut::new(&m),
        oracle: oracle_report(m.representation())?,
    };
    let o = &out.oracle;
    let text = match args.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(&[OracleCsv {
            profile: &out.module.profile,
            b: out.module.b_tuple.join(","),
            verdict: oracle_verdict_name(o),
            summands: joined(&o.summands),
            end_rank: o.end_rank,
            end_mod_t_dim: o.end_mod_t_dim,
            radical_dim: o.radical_dim,
            ss_quotient_dim: o.ss_quotient_dim,
        }])?,
        Format::Text => {
            let mut t = format!("verdict {}\n", oracle_verdict_name(o));
            if let Some([a, b]) = &o.summands {
                writeln!(t, "summands L_{{{a}}} + L_{{{b}}}").unwrap();
            }
            writeln!(
                t,
                "End rank {}, End/tEnd dim {}, radical dim {}, semisimple quotient dim {}",
                o.end_rank, o.end_mod_t_dim, o.radical_dim, o.ss_quotient_dim
            )
            .unwrap();
            t
        }
    };
    Ok((text, EXIT_OK))
}

pub fn cmd_paper_suite(args: &SuiteArgs) -> Output {
    let checks = regression::run(args.trunc_order);
    let precision = checks.iter().any(|c| {
        matches!(&c.outcome, Err(regression::Failure::Error(Error::PrecisionExhausted { .. })))
    });
    let out = SuiteOut {
        command: "paper-suite".into(),
        trunc_order: args.trunc_order,
        passed: checks.iter().filter(|c| c.passed()).count(),
        failed: checks.iter().filter(|c| !c.passed()).count(),
        checks: checks
            .iter()
            .map(|c| SuiteLine {
                name: c.name.to_string(),
                passed: c.passed(),
                detail: c.outcome.as_ref().err().map(ToString::to_string),
            })
            .collect(),
    };
    let code = match (out.failed, precision) {
        (0, _) => EXIT_OK,
        (_, true) => EXIT_PRECISION,
        _ => EXIT_DISAGREE,
    };
    let text = match args.format {
        Format::Json => json(&out)?,
        Format::Csv => csv_rows(&out.checks)?,
        Format::Text => {
            let mut t = String::new();
            for c in &out.checks {
                match &c.detail {
                    None => writeln!(t, "[PASS] {}", c.name).unwrap(),
                    Some(d) => writeln!(t, "[FAIL] {}\n       {d}", c.name).unwrap(),
                }
            }
            writeln!(t, "{} passed, {} failed", out.passed, out.failed).unwrap();
            t
        }
    };
    Ok((text, code))
}
