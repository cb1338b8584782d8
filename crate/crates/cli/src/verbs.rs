use std::collections::BTreeSet;
use std::fs;

use serde_json::{json, Value};

use endoscopy::acceptance::{run_all, run_one};
use endoscopy::exact_scalars::{LocalRing, PadicInt, RationalField, Ring, SquareRing, Zp, Zq};
use endoscopy::forms_matrices::{integral_conjugacy_transfer, TransferMode, TransferOutcome};
use endoscopy::norm_matching::{
    bc1_isogeny_check, bc_matching_check, compose_matched_pair, norm, norm_d_image_test_rational, Kind, TwistedRep,
};
use endoscopy::padic_jordan::{reduction_check, topological_jordan, twisted_jordan, JordanPair};
use endoscopy::root_datum::diagram::standard_extended_diagram;
use endoscopy::root_datum::{
    builtin_datum, classify_subdiagrams, endoscopic_datum, extended_diagram, find_isomorphism, simple_type_datum,
    standard_involution, steinberg_fixed_system, table_blocks, DynkinDiagram, Family, PinnedInvolution,
    RenderFormat, TorusPoint,
};
use endoscopy::{Error, Matrix, Result};

use crate::{Format, Input, Output, Report, Verb};

pub const DEFAULT_PRECISION: u32 = 8;

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn load(input: &Input) -> Result<Value> {
    let Some(src) = &input.input else {
        return Ok(json!({}));
    };
    let text = if src.trim_start().starts_with('{') {
        src.clone()
    } else {
        fs::read_to_string(src).map_err(|e| Error::Parse(format!("{src}: {e}")))?
    };
    serde_json::from_str(&text).map_err(parse_err)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

fn prime(input: &Input, v: &Value) -> Result<u64> {
    input
        .p
        .or_else(|| v.get("p").and_then(Value::as_u64))
        .ok_or_else(|| Error::Parse("no prime given (--p or \"p\")".into()))
}

/// `--K`, then `"K"` in the input, then `$ENDOSCOPY_PRECISION`, then 8.
fn precision(input: &Input, v: &Value) -> Result<u32> {
    if let Some(k) = input.k {
        return Ok(k);
    }
    if let Some(k) = v.get("K").and_then(Value::as_u64) {
        return Ok(k as u32);
    }
    match std::env::var("ENDOSCOPY_PRECISION") {
        Ok(s) => s.trim().parse().map_err(|_| Error::Parse(format!("ENDOSCOPY_PRECISION={s:?}"))),
        Err(_) => Ok(DEFAULT_PRECISION),
    }
}

fn zp(input: &Input, v: &Value) -> Result<Zp> {
    Zp::new(prime(input, v)?, precision(input, v)?)
}

fn exponents(v: &Value, key: &str) -> Result<Vec<i64>> {
    serde_json::from_value(field(v, key)?.clone()).map_err(parse_err)
}

fn torus_point(v: &Value) -> Result<TorusPoint> {
    let order = field(v, "order")?.as_u64().ok_or_else(|| Error::Parse("order must be a positive integer".into()))?;
    Ok(TorusPoint::roots_of_unity(order, exponents(v, "exponents")?))
}

fn render(d: &DynkinDiagram, format: Format) -> Option<String> {
    match format {
        Format::Json => None,
        Format::Ascii => Some(d.render(RenderFormat::Ascii)),
        Format::Dot => Some(d.render(RenderFormat::Dot)),
    }
}

fn simple_type(s: &str) -> Result<(char, usize)> {
    let mut chars = s.trim().chars();
    let letter = chars.next().ok_or_else(|| Error::Parse("empty type".into()))?.to_ascii_uppercase();
    let rank = chars.as_str().trim_start_matches('_').parse().map_err(|_| Error::Parse(format!("bad type {s:?}")))?;
    Ok((letter, rank))
}

fn untwisted_diagram(letter: char, rank: usize) -> Result<DynkinDiagram> {
    let d = simple_type_datum(letter, rank)?;
    extended_diagram(&d, &PinnedInvolution::identity(d.rank))
}

pub fn execute(verb: Verb) -> (Output, Result<Report>) {
    match verb {
        Verb::Datum { family, n, endoscopic, output } => (output, datum(&family, n, endoscopic)),
        Verb::Diagram { family, n, table, kind, output } => {
            let f = output.format;
            (output, diagram(family.as_deref(), n, table, kind.as_deref(), f))
        }
        Verb::FixedSystem { family, n, input, output } => (output, fixed_system(&family, n, &input)),
        Verb::Classify { kind, output } => (output, classify(&kind)),
        Verb::Norm { kind, input, output } => (output, norm_verb(kind.as_deref(), &input)),
        Verb::Jordan { twisted, input, output } => (output, jordan(twisted, &input)),
        Verb::Match { kind, input, output } => (output, match_verb(kind.as_deref(), &input)),
        Verb::Bc1 { input, output } => (output, bc1(&input)),
        Verb::Transfer { input, output } => (output, transfer(&input)),
        Verb::Selftest { seed, timings, only, output } => {
            let f = output.format;
            (output, selftest(seed, timings, &only, f))
        }
    }
}

fn datum(family: &str, n: usize, endoscopic: bool) -> Result<Report> {
    let fam: Family = family.parse()?;
    let d = builtin_datum(fam, n)?;
    if !endoscopic {
        return Ok(Report::ok(json!({ "datum": d })));
    }
    let inv = standard_involution(&d)?;
    let h = endoscopic_datum(&d, &inv)?;
    // the three series and their expected endoscopic groups
    let expected = match (fam, n % 2) {
        (Family::PGL, 1) => Some((Family::Sp, n - 1)),
        (Family::GLxGm, 0) => Some((Family::GSpinOdd, n + 1)),
        (Family::SOEven, 0) if n >= 4 => Some((Family::Sp, n - 2)),
        _ => None,
    };
    let mut out = json!({ "datum": d.name, "involution": inv, "endoscopic": h });
    let mut ok = true;
    if let Some((tf, tn)) = expected {
        let t = builtin_datum(tf, tn)?;
        let iso = find_isomorphism(&h, &t)?;
        ok = iso.is_some();
        out["expected"] = json!(t.name);
        out["isomorphic"] = json!(ok);
    }
    Ok(Report { json: out, text: None, ok })
}

fn diagram(family: Option<&str>, n: Option<usize>, table: bool, kind: Option<&str>, format: Format) -> Result<Report> {
    if table {
        let blocks = table_blocks()?;
        let mut text = String::new();
        let mut rows = Vec::new();
        let mut ok = true;
        for b in &blocks {
            text.push_str(&format!("== {} ==\n", b.title));
            for r in &b.rows {
                let m = r.matches();
                ok &= m;
                let body = match format {
                    Format::Dot => r.diagram.render(RenderFormat::Dot),
                    _ => r.diagram.render(RenderFormat::Ascii),
                };
                text.push_str(&format!("-- {} [{}]\n{}\n", r.label, if m { "ok" } else { "MISMATCH" }, body.trim_end()));
                rows.push(json!({ "block": b.title, "label": r.label, "matches": m, "diagram": r.diagram }));
            }
        }
        let text = (format != Format::Json).then_some(text);
        return Ok(Report { json: json!({ "blocks": blocks.len(), "rows": rows, "all_match": ok }), text, ok });
    }
    let d = match kind {
        Some(t) => {
            let (l, r) = simple_type(t)?;
            untwisted_diagram(l, r)?
        }
        None => {
            let fam: Family = family.expect("clap requires family").parse()?;
            let n = n.ok_or_else(|| Error::Parse("--n is required with --family".into()))?;
            standard_extended_diagram(&builtin_datum(fam, n)?)?
        }
    };
    Ok(Report { text: render(&d, format), json: json!({ "diagram": d }), ok: true })
}

fn fixed_system(family: &str, n: usize, input: &Input) -> Result<Report> {
    let v = load(input)?;
    let d = builtin_datum(family.parse()?, n)?;
    let t = torus_point(&v)?;
    let fs = steinberg_fixed_system(&d, &standard_involution(&d)?, &t)?;
    Ok(Report {
        json: json!({
            "datum": d.name,
            "point": t.describe(),
            "type": fs.kind,
            "groups": fs.kind.group_names(),
            "cartan": fs.cartan,
            "roots": fs.roots.len(),
            "norm_check": fs.norm_check,
        }),
        text: None,
        ok: fs.norm_check != Some(false),
    })
}

fn classify(kind: &str) -> Result<Report> {
    let (letter, rank) = simple_type(kind)?;
    let diag = if letter == 'A' {
        standard_extended_diagram(&builtin_datum(Family::PGL, rank + 1)?)?
    } else {
        untwisted_diagram(letter, rank)?
    };
    let types = classify_subdiagrams(&diag)?;
    let distinct: BTreeSet<Vec<String>> = types.iter().map(|t| t.kind.group_names()).collect();
    let list: Vec<Value> =
        types.iter().map(|t| json!({ "nodes": t.nodes, "type": t.kind, "groups": t.kind.group_names() })).collect();
    Ok(Report::ok(json!({ "diagram": diag.name, "count": types.len(), "distinct": distinct.len(), "types": list })))
}

fn norm_verb(kind: Option<&str>, input: &Input) -> Result<Report> {
    let v = load(input)?;
    if let Some(beta) = v.get("beta") {
        // image test over Q_p
        let q = RationalField;
        let b = Matrix::from_json(&q, beta)?;
        let verdict = norm_d_image_test_rational(&b, prime(input, &v)?)?;
        return Ok(Report::ok(json!({ "image_test": verdict })));
    }
    let r = zp(input, &v)?;
    let mut rep_json = v.clone();
    if let Some(k) = kind {
        let k: Kind = k.parse()?;
        rep_json["kind"] = json!(k);
    }
    let rep = TwistedRep::from_json(&r, &rep_json)?;
    let res = norm(&r, &rep)?;
    let mut out = res.to_json(&r);
    out["input"] = rep.to_json(&r);
    let mut ok = true;
    if rep.kind == Kind::B {
        let want = r.class_rep(&rep.h.det(&r))?;
        let spinor_ok = res.spinor_norm.as_ref().map(|s| r.equal(s, &want)).unwrap_or(false);
        out["checks"] = json!({ "spinor_norm_is_det_h": spinor_ok });
        ok = spinor_ok;
    }
    Ok(Report { json: out, text: None, ok })
}

fn jordan_json<R: Ring>(r: &R, j: &JordanPair<R::Elem>, residual_ok: bool) -> Value {
    json!({
        "g_s": j.g_s.to_json(r),
        "g_u": j.g_u.to_json(r),
        "twisted": j.twisted,
        "summary": j.summary(),
        "checks": { "reduction": residual_ok },
    })
}

fn jordan(twisted: bool, input: &Input) -> Result<Report> {
    let v = load(input)?;
    let r = zp(input, &v)?;
    let g = Matrix::from_json(&r, field(&v, "matrix")?)?;
    let j = if twisted { twisted_jordan(&r, &g)? } else { topological_jordan(&r, &g)? };
    let ok = reduction_check(&r, &g, &j);
    let mut out = jordan_json(&r, &j, ok);
    if g.rows() == 1 {
        out["scalar"] = json!({ "g_s": j.g_s.get(0, 0).centered(), "g_u": j.g_u.get(0, 0).centered() });
    }
    Ok(Report { json: out, text: None, ok })
}

fn padic_list(r: &Zp, v: &Value) -> Result<Vec<PadicInt>> {
    v.as_array().ok_or_else(|| Error::Parse("expected an array".into()))?.iter().map(|x| r.from_json(x)).collect()
}

fn match_verb(kind: Option<&str>, input: &Input) -> Result<Report> {
    let v = load(input)?;
    let kind = kind.map(str::to_string).or_else(|| v.get("kind").and_then(Value::as_str).map(str::to_string));
    if let Some(k) = kind {
        let k: Kind = k.parse()?;
        let r = zp(input, &v)?;
        let t = exponents(&v, "t")?;
        let w = padic_list(&r, field(&v, "w")?)?;
        let w_eta = match v.get("w_eta") {
            Some(x) => padic_list(&r, x)?,
            None => w.clone(),
        };
        let c = compose_matched_pair(&r, k, &t, &w, &w_eta)?;
        let ok = c.checks.all_pass();
        return Ok(Report {
            json: json!({
                "kind": c.kind,
                "twisted": c.twisted.to_json(&r),
                "eta": c.eta.to_json(&r),
                "checks": c.checks,
                "verdict": ok,
            }),
            text: None,
            ok,
        });
    }
    let order = field(&v, "order")?.as_u64().ok_or_else(|| Error::Parse("order must be a positive integer".into()))?;
    let u = TorusPoint::roots_of_unity(order, exponents(&v, "u")?);
    let w = TorusPoint::roots_of_unity(order, exponents(&v, "v")?);
    let rep = bc_matching_check(&u, &w)?;
    let ok = rep.verdict;
    Ok(Report { json: serde_json::to_value(&rep).map_err(parse_err)?, text: None, ok })
}

fn bc1_over<R: LocalRing>(r: &R, m: &Value) -> Result<Report> {
    let g = Matrix::from_json(r, m)?;
    let rep = bc1_isogeny_check(r, &g)?;
    let ok = rep.verdict;
    Ok(Report { json: serde_json::to_value(&rep).map_err(parse_err)?, text: None, ok })
}

fn bc1(input: &Input) -> Result<Report> {
    let v = load(input)?;
    let m = field(&v, "matrix")?;
    match v.get("f").and_then(Value::as_u64).unwrap_or(1) {
        1 => bc1_over(&zp(input, &v)?, m),
        f => bc1_over(&Zq::unramified(prime(input, &v)?, precision(input, &v)?, f as u32)?, m),
    }
}

fn transfer(input: &Input) -> Result<Report> {
    let v = load(input)?;
    let r = zp(input, &v)?;
    let mode: TransferMode = serde_json::from_value(field(&v, "mode")?.clone()).map_err(parse_err)?;
    let x1 = Matrix::from_json(&r, field(&v, "x1")?)?;
    let x2 = Matrix::from_json(&r, field(&v, "x2")?)?;
    let out = integral_conjugacy_transfer(&r, &x1, &x2, mode)?;
    let g = out.g();
    let conj = |src: &Matrix<PadicInt>| -> Result<bool> { Ok(g.inverse(&r)?.mul(&r, src).mul(&r, g).equal(&r, &x2)) };
    let (kind, extra, ok) = match &out {
        TransferOutcome::Conjugate { .. } => ("conjugate", json!({}), conj(&x1)?),
        TransferOutcome::Congruent { epsilon, .. } => {
            let ok = g.transpose().mul(&r, &x1).mul(&r, g).scale(&r, epsilon).equal(&r, &x2);
            ("congruent", json!({ "epsilon": r.to_json(epsilon) }), ok)
        }
        TransferOutcome::Companion { companion, classes_x1, classes_x2, .. } => (
            "companion",
            json!({
                "companion": companion.to_json(&r),
                "classes_x1": [r.to_json(&classes_x1.0), r.to_json(&classes_x1.1)],
                "classes_x2": [r.to_json(&classes_x2.0), r.to_json(&classes_x2.1)],
            }),
            conj(companion)?,
        ),
    };
    Ok(Report {
        json: json!({ "mode": mode, "outcome": kind, "g": g.to_json(&r), "details": extra, "checks": { "identity": ok } }),
        text: None,
        ok,
    })
}

fn selftest(seed: u64, timings: bool, only: &[u32], format: Format) -> Result<Report> {
    let results = if only.is_empty() {
        run_all(seed)
    } else {
        only.iter()
            .map(|&id| run_one(seed, id).ok_or_else(|| Error::Parse(format!("no criterion {id}"))))
            .collect::<Result<Vec<_>>>()?
    };
    let failed = results.iter().filter(|c| !c.passed).count();
    let mut checks: Vec<Value> = results.iter().map(|c| serde_json::to_value(c).expect("serializable")).collect();
    if timings {
        for (j, c) in checks.iter_mut().zip(&results) {
            j["elapsed_ms"] = json!(c.elapsed.as_millis() as u64);
        }
    }
    let text = (format != Format::Json).then(|| {
        results
            .iter()
            .map(|c| format!("[{}] {:>2} {:<24} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.id, c.name, c.detail))
            .collect::<String>()
    });
    Ok(Report {
        json: json!({ "seed": seed, "passed": results.len() - failed, "failed": failed, "checks": checks }),
        text,
        ok: failed == 0,
    })
}
