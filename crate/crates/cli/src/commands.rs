use std::fmt::Write as _;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde_json::{json, Value};

use seqcomplex::{
    celcs, construct_stable, count_cubes_prop42, count_hypercubes_thm43, count_lc_lemma21, cube_structure,
    enumerate_hypercubes, extract_structure, first_critical_bruteforce, first_critical_m, is_hypercube,
    k_error_lc_bruteforce, kurosawa_m_2n, lc_form_decompose, linear_complexity, next_lower_hypercube_lc,
    standard_decompose, CelcsPoint, CountResult, CriticalReport, EnumerationMode, Error, HypercubeClass, Method,
    Modulus, PeriodicSequence,
};

use crate::verify;
use crate::{read_inputs, Command, Common, Failure, Format, Mode, OutputArgs, Record, SCHEMA};

pub(crate) struct Report {
    pub body: String,
    pub code: i32,
}

impl Report {
    pub fn ok(body: String) -> Self {
        Self { body, code: crate::exit::OK }
    }
}

pub(crate) fn output_args(command: &Command) -> &OutputArgs {
    match command {
        Command::Lc { common }
        | Command::Klc { common, .. }
        | Command::Celcs { common, .. }
        | Command::Decompose { common }
        | Command::Structure { common }
        | Command::Mcrit { common, .. }
        | Command::Verify { common, .. } => &common.output,
        Command::Count { output, .. } | Command::ConstructStable { output, .. } => output,
    }
}

pub(crate) fn dispatch(command: &Command) -> Result<Report, Failure> {
    match command {
        Command::Lc { common } => lc(common),
        Command::Klc { common, k, cap } => klc(common, *k, *cap),
        Command::Celcs { common, mode, cap } => celcs_cmd(common, *mode, *cap),
        Command::Decompose { common } => decompose(common),
        Command::Structure { common } => structure(common),
        Command::Mcrit { common, mode, cap } => mcrit(common, *mode, *cap),
        Command::Count { modulus, output, lc, edges, eps, l, enumerate, cap } => {
            let modulus = modulus.modulus()?;
            let spec = CountSpec { lc: *lc, edges: edges.clone().unwrap_or_default(), eps: *eps, l: *l };
            count(&modulus, output.format, &spec, *enumerate, *cap)
        }
        Command::ConstructStable { modulus, output, k } => stable(&modulus.modulus()?, output.format, *k),
        Command::Verify { common, suite, samples, seed, cap } => {
            verify::run(common, *suite, *samples, *seed, *cap).map(|r| Report { code: r.exit_code(), body: r.render(common.output.format) })
        }
    }
}

/// Evaluates `f` on every record in parallel, keeping input order. The
/// earliest failing record determines the error.
fn map_records<T: Send>(records: &[Record], f: impl Fn(&PeriodicSequence) -> seqcomplex::Result<T> + Sync + Send) -> Result<Vec<T>, Failure> {
    let results: Vec<seqcomplex::Result<T>> = records.par_iter().map(|r| f(&r.sequence)).collect();
    results
        .into_iter()
        .zip(records)
        .map(|(res, rec)| {
            res.map_err(|e| {
                let mut failure = Failure::from(e);
                failure.message = format!("line {}: {}", rec.line, failure.message);
                failure
            })
        })
        .collect()
}

fn inputs(common: &Common) -> Result<(Modulus, Vec<Record>), Failure> {
    let modulus = common.modulus.modulus()?;
    let records = read_inputs(&common.input, modulus)?;
    Ok((modulus, records))
}

pub(crate) fn envelope(command: &str, modulus: &Modulus, body: Value) -> String {
    let mut value = json!({ "schema": SCHEMA, "command": command, "p": modulus.p(), "n": modulus.n() });
    if let (Value::Object(map), Value::Object(extra)) = (&mut value, body) {
        map.extend(extra);
    }
    let mut text = serde_json::to_string_pretty(&value).expect("JSON values always serialize");
    text.push('\n');
    text
}

pub(crate) fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(header).expect("writing to memory");
    for row in rows {
        writer.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("CSV of UTF-8 fields")
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "-".into())
}

fn lc(common: &Common) -> Result<Report, Failure> {
    let (modulus, records) = inputs(common)?;
    let values = map_records(&records, |s| Ok(linear_complexity(s)))?;
    let body = match common.output.format {
        Format::Text => values.iter().map(|v| format!("{v}\n")).collect(),
        Format::Json => {
            let recs: Vec<Value> = records
                .iter()
                .zip(&values)
                .map(|(r, &v)| {
                    let mut rec = json!({ "line": r.line, "sequence": r.sequence.to_string(), "L": v });
                    if !modulus.is_binary() {
                        if let Ok(form) = lc_form_decompose(v, &modulus) {
                            rec["epsilon"] = json!(form.epsilon);
                            rec["exponents"] = json!(form.exponents);
                        }
                    }
                    rec
                })
                .collect();
            envelope("lc", &modulus, json!({ "records": recs }))
        }
        Format::Csv => csv_table(
            &["line", "sequence", "L"],
            records.iter().zip(&values).map(|(r, v)| vec![r.line.to_string(), r.sequence.to_string(), v.to_string()]),
        ),
    };
    Ok(Report::ok(body))
}

fn klc(common: &Common, k: usize, cap: u64) -> Result<Report, Failure> {
    let (modulus, records) = inputs(common)?;
    let values = map_records(&records, |s| k_error_lc_bruteforce(s, k, cap))?;
    let body = match common.output.format {
        Format::Text => values.iter().map(|v| format!("{v}\n")).collect(),
        Format::Json => {
            let recs: Vec<Value> = records
                .iter()
                .zip(&values)
                .map(|(r, v)| json!({ "line": r.line, "sequence": r.sequence.to_string(), "k": k, "L_k": v }))
                .collect();
            envelope("klc", &modulus, json!({ "records": recs }))
        }
        Format::Csv => csv_table(
            &["line", "sequence", "k", "L_k"],
            records
                .iter()
                .zip(&values)
                .map(|(r, v)| vec![r.line.to_string(), r.sequence.to_string(), k.to_string(), v.to_string()]),
        ),
    };
    Ok(Report::ok(body))
}

fn celcs_cmd(common: &Common, mode: Mode, cap: u64) -> Result<Report, Failure> {
    let (modulus, records) = inputs(common)?;
    let results = map_records(&records, |s| {
        let primary = match mode {
            Mode::Formula => celcs(s, Method::Formula, cap)?,
            Mode::Brute | Mode::Both => celcs(s, Method::BruteForce, cap)?,
        };
        let agrees = match mode {
            Mode::Both => Some(celcs(s, Method::Formula, cap)? == primary),
            _ => None,
        };
        Ok((primary, agrees))
    })?;
    let show = |points: &[CelcsPoint]| points.iter().map(|p| format!("({}, {})", p.k, p.lc)).collect::<Vec<_>>().join(" ");
    let body = match common.output.format {
        Format::Text => results
            .iter()
            .map(|(points, agrees)| match agrees {
                Some(true) => format!("{} formula=agree\n", show(points)),
                Some(false) => format!("{} formula=differs\n", show(points)),
                None => format!("{}\n", show(points)),
            })
            .collect(),
        Format::Json => {
            let recs: Vec<Value> = records
                .iter()
                .zip(&results)
                .map(|(r, (points, agrees))| {
                    let mut rec = json!({ "line": r.line, "sequence": r.sequence.to_string(), "points": points });
                    if let Some(a) = agrees {
                        rec["formula_agrees"] = json!(a);
                    }
                    rec
                })
                .collect();
            envelope("celcs", &modulus, json!({ "mode": format!("{mode:?}").to_lowercase(), "records": recs }))
        }
        Format::Csv => {
            if records.len() == 1 {
                csv_table(&["k", "L_k"], results[0].0.iter().map(|p| vec![p.k.to_string(), p.lc.to_string()]))
            } else {
                csv_table(
                    &["line", "k", "L_k"],
                    records.iter().zip(&results).flat_map(|(r, (points, _))| {
                        points.iter().map(move |p| vec![r.line.to_string(), p.k.to_string(), p.lc.to_string()])
                    }),
                )
            }
        }
    };
    Ok(Report::ok(body))
}

fn decompose(common: &Common) -> Result<Report, Failure> {
    let (modulus, records) = inputs(common)?;
    let results = map_records(&records, standard_decompose)?;
    let p = modulus.p() as usize;
    let body = match common.output.format {
        Format::Text => results.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"),
        Format::Json => {
            let recs: Vec<Value> = records
                .iter()
                .zip(&results)
                .map(|(r, d)| {
                    let parts: Vec<Value> = d
                        .parts
                        .iter()
                        .map(|part| json!({ "sequence": part.sequence.to_string(), "structure": part.structure, "L": part.lc }))
                        .collect();
                    json!({ "line": r.line, "sequence": r.sequence.to_string(), "parts": parts })
                })
                .collect();
            envelope("decompose", &modulus, json!({ "records": recs }))
        }
        Format::Csv => csv_table(
            &["line", "part", "sequence", "L", "m", "edges", "vertex"],
            records.iter().zip(&results).flat_map(|(r, d)| {
                d.parts.iter().enumerate().map(move |(i, part)| {
                    vec![
                        r.line.to_string(),
                        (i + 1).to_string(),
                        part.sequence.to_grouped(p),
                        part.lc.to_string(),
                        part.structure.dimension().to_string(),
                        join_edges(&part.structure.edges),
                        part.structure.vertex.kind().to_string(),
                    ]
                })
            }),
        ),
    };
    Ok(Report::ok(body))
}

fn join_edges(edges: &[u32]) -> String {
    edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

fn structure(common: &Common) -> Result<Report, Failure> {
    let (modulus, records) = inputs(common)?;
    let results = map_records(&records, |s| {
        let lc = linear_complexity(s);
        if s.modulus().is_binary() {
            let edges = cube_structure(s)?;
            let mut text = match &edges {
                Some(e) => format!("cube m={} edges={{{}}}", e.len(), join_edges(e).replace(' ', ",")),
                None => "not a cube".to_string(),
            };
            write!(text, " L={lc}").expect("writing to a String");
            let json = json!({ "cube": edges.is_some(), "edges": edges, "L": lc });
            let row = vec![edges.is_some().to_string(), opt(edges.as_ref().map(|e| e.len())), edges.as_deref().map(join_edges).unwrap_or_default(), "element".into(), lc.to_string()];
            return Ok((text, json, row));
        }
        if !is_hypercube(s)? {
            let json = json!({ "hypercube": false, "L": lc });
            return Ok((format!("not a hypercube L={lc}"), json, vec!["false".into(), "-".into(), String::new(), "-".into(), lc.to_string()]));
        }
        let h = extract_structure(s)?;
        let next = match next_lower_hypercube_lc(&h, s.modulus()) {
            Ok(next) => Some(next),
            Err(Error::NoEligibleExponent) => None,
            Err(e) => return Err(e),
        };
        let text = format!(
            "hypercube {h} L={lc} next_lower={}",
            next.map(|n| format!("{} (edge {})", n.lc, n.exponent)).unwrap_or_else(|| "none".into())
        );
        let json = json!({ "hypercube": true, "structure": h, "L": lc, "next_lower": next });
        let row = vec!["true".into(), h.dimension().to_string(), join_edges(&h.edges), h.vertex.kind().to_string(), lc.to_string()];
        Ok((text, json, row))
    })?;
    let body = match common.output.format {
        Format::Text => results.iter().map(|(t, _, _)| format!("{t}\n")).collect(),
        Format::Json => {
            let recs: Vec<Value> = records
                .iter()
                .zip(&results)
                .map(|(r, (_, j, _))| {
                    let mut rec = j.clone();
                    rec["line"] = json!(r.line);
                    rec["sequence"] = json!(r.sequence.to_string());
                    rec
                })
                .collect();
            envelope("structure", &modulus, json!({ "records": recs }))
        }
        Format::Csv => csv_table(
            &["line", "sequence", "recognized", "m", "edges", "vertex", "L"],
            records.iter().zip(&results).map(|(r, (_, _, row))| {
                let mut full = vec![r.line.to_string(), r.sequence.to_string()];
                full.extend(row.iter().cloned());
                full
            }),
        ),
    };
    Ok(Report::ok(body))
}

fn formula_report(s: &PeriodicSequence) -> seqcomplex::Result<CriticalReport> {
    if s.modulus().is_binary() {
        let m = kurosawa_m_2n(s)?;
        return Ok(CriticalReport { m, lc_after: None, m1: None, method: Method::Formula, vertex_j: None });
    }
    first_critical_m(s)
}

fn reports_agree(a: &CriticalReport, b: &CriticalReport) -> bool {
    let same = |x: Option<u64>, y: Option<u64>| x.is_none() || y.is_none() || x == y;
    a.m == b.m && same(a.lc_after, b.lc_after) && (a.lc_after.is_none() || a.m1 == b.m1)
}

fn show_report(r: &CriticalReport) -> String {
    let method = match r.method {
        Method::Formula => "formula",
        Method::BruteForce => "brute",
    };
    let mut text = format!("{method} m={} L_after={} m1={}", r.m, opt(r.lc_after), opt(r.m1));
    if let Some(j) = r.vertex_j {
        write!(text, " j={j}").expect("writing to a String");
    }
    text
}

fn mcrit(common: &Common, mode: Mode, cap: u64) -> Result<Report, Failure> {
    let (modulus, records) = inputs(common)?;
    let results = map_records(&records, |s| {
        let formula = match mode {
            Mode::Formula | Mode::Both => Some(formula_report(s)?),
            Mode::Brute => None,
        };
        let brute = match mode {
            Mode::Brute | Mode::Both => Some(first_critical_bruteforce(s, cap)?),
            Mode::Formula => None,
        };
        Ok((formula, brute))
    })?;
    let agree = |f: &Option<CriticalReport>, b: &Option<CriticalReport>| match (f, b) {
        (Some(f), Some(b)) => Some(reports_agree(f, b)),
        _ => None,
    };
    let body = match common.output.format {
        Format::Text => results
            .iter()
            .map(|(f, b)| {
                let mut parts: Vec<String> = f.iter().chain(b.iter()).map(show_report).collect();
                match agree(f, b) {
                    Some(true) => parts.push("agree".into()),
                    Some(false) => parts.push("DISAGREE".into()),
                    None => {}
                }
                format!("{}\n", parts.join(" | "))
            })
            .collect(),
        Format::Json => {
            let recs: Vec<Value> = records
                .iter()
                .zip(&results)
                .map(|(r, (f, b))| {
                    let mut rec = json!({ "line": r.line, "sequence": r.sequence.to_string() });
                    if let Some(f) = f {
                        rec["formula"] = json!(f);
                    }
                    if let Some(b) = b {
                        rec["brute_force"] = json!(b);
                    }
                    if let Some(a) = agree(f, b) {
                        rec["agree"] = json!(a);
                    }
                    rec
                })
                .collect();
            envelope("mcrit", &modulus, json!({ "records": recs }))
        }
        Format::Csv => csv_table(
            &["line", "sequence", "method", "m_s", "L_after", "m1_s", "vertex_j"],
            records.iter().zip(&results).flat_map(|(r, (f, b))| {
                f.iter().chain(b.iter()).map(move |rep| {
                    vec![
                        r.line.to_string(),
                        r.sequence.to_string(),
                        if rep.method == Method::Formula { "formula".into() } else { "brute".into() },
                        rep.m.to_string(),
                        opt(rep.lc_after),
                        opt(rep.m1),
                        opt(rep.vertex_j),
                    ]
                })
            }),
        ),
    };
    Ok(Report::ok(body))
}

pub(crate) struct CountSpec {
    pub lc: Option<u64>,
    pub edges: Vec<u32>,
    pub eps: u8,
    pub l: Option<usize>,
}

/// Closed-form count for `spec` and, on request, the enumerated count.
pub(crate) fn evaluate_count(modulus: &Modulus, spec: &CountSpec, enumerate: bool, cap: u64) -> seqcomplex::Result<(CountResult, Option<BigUint>)> {
    let exhaustive_ok = modulus.period() < 64 && (1u128 << modulus.period()) <= cap as u128;
    if let Some(lc) = spec.lc {
        let result = count_lc_lemma21(lc, modulus)?;
        let enumerated = if enumerate {
            if !exhaustive_ok {
                return Err(Error::BudgetExceeded { required: 1u128.checked_shl(modulus.period() as u32).unwrap_or(u128::MAX), cap });
            }
            let period = modulus.period();
            let found = (0u64..1 << period)
                .into_par_iter()
                .filter(|&x| {
                    let s = PeriodicSequence::from_bits(*modulus, (0..period).map(|i| (x >> i) & 1 == 1)).expect("period-length pattern");
                    linear_complexity(&s) == lc
                })
                .count();
            Some(BigUint::from(found))
        } else {
            None
        };
        return Ok((result, enumerated));
    }
    let result = if modulus.is_binary() {
        if spec.eps != 1 || spec.l.is_some() {
            return Err(Error::InvalidL { l: spec.l.unwrap_or(0), p: 2, reason: "cubes have element vertices (eps = 1)" });
        }
        count_cubes_prop42(modulus, &spec.edges)?
    } else {
        count_hypercubes_thm43(modulus, &spec.edges, spec.eps, spec.l)?
    };
    let enumerated = if enumerate {
        let class = match spec.eps {
            1 => HypercubeClass::element(spec.edges.clone()),
            _ => HypercubeClass::tuple(spec.edges.clone(), 0, spec.l),
        };
        let mode = if exhaustive_ok || modulus.is_binary() { EnumerationMode::Exhaustive } else { EnumerationMode::Constructive };
        Some(BigUint::from(enumerate_hypercubes(modulus, &class, mode, cap)?.len()))
    } else {
        None
    };
    Ok((result, enumerated))
}

fn count(modulus: &Modulus, format: Format, spec: &CountSpec, enumerate: bool, cap: u64) -> Result<Report, Failure> {
    let (result, enumerated) = evaluate_count(modulus, spec, enumerate, cap)?;
    let matched = enumerated.as_ref().map(|e| *e == result.value);
    let factored = result.factored.as_ref().map(|f| f.to_string());
    let parameters = match spec.lc {
        Some(lc) => json!({ "p": modulus.p(), "n": modulus.n(), "L": lc }),
        None => json!({ "p": modulus.p(), "n": modulus.n(), "m": spec.edges.len(), "edges": spec.edges, "eps": spec.eps, "l": spec.l }),
    };
    let body = match format {
        Format::Text => {
            let mut text = result.value.to_string();
            if let Some(f) = &factored {
                write!(text, " = {f}").expect("writing to a String");
            }
            if let (Some(e), Some(m)) = (&enumerated, matched) {
                write!(text, " enumerated={e} {}", if m { "match" } else { "MISMATCH" }).expect("writing to a String");
            }
            text.push('\n');
            text
        }
        Format::Json => {
            let mut text = serde_json::to_string_pretty(&json!({
                "schema": SCHEMA,
                "command": "count",
                "parameters": parameters,
                "formula_value": result.value.to_string(),
                "factored_form": result.factored,
                "enumerated_value": enumerated.as_ref().map(|e| e.to_string()),
                "match": matched,
            }))
            .expect("JSON values always serialize");
            text.push('\n');
            text
        }
        Format::Csv => csv_table(
            &["p", "n", "parameters", "formula_value", "factored_form", "enumerated_value", "match"],
            [vec![
                modulus.p().to_string(),
                modulus.n().to_string(),
                match spec.lc {
                    Some(lc) => format!("L={lc}"),
                    None => format!("edges={} eps={} l={}", join_edges(&spec.edges), spec.eps, opt(spec.l)),
                },
                result.value.to_string(),
                factored.unwrap_or_default(),
                enumerated.map(|e| e.to_string()).unwrap_or_default(),
                opt(matched),
            ]],
        ),
    };
    Ok(Report::ok(body))
}

fn stable(modulus: &Modulus, format: Format, k: u64) -> Result<Report, Failure> {
    let s = construct_stable(*modulus, k)?;
    let lc = linear_complexity(&s);
    let body = match format {
        Format::Text => format!("{s}\n"),
        Format::Json => envelope(
            "construct-stable",
            modulus,
            json!({ "k": k, "sequence": s.to_string(), "L": lc, "ones": s.weight() }),
        ),
        Format::Csv => csv_table(&["k", "sequence", "L"], [vec![k.to_string(), s.to_string(), lc.to_string()]]),
    };
    Ok(Report::ok(body))
}
