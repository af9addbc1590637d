//! Command dispatch.

use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use eqsing::checker::{
    analyze_family, check_ambient_tr, check_mu_criteria, check_tr, check_tr_minus, check_verdier_family, check_w,
    refute_whitney_a, w_condition_modules, whitney_a_modules, SampleTable, Verdict,
};
use eqsing::curveprobe::{check_condition_on_curve, realize, refute, replay as replay_arc, CurveCheck, RefuteOutcome, Witness};
use eqsing::grassmann::{family_map, grassmann_map, grassmann_map_named, lift_transversal, modify, TieBreak};
use eqsing::jacobian::{
    jet_truncate, jm, s_condition_modules, tr_condition_modules, verdier_family_modules, ConditionModules, Flavor,
    Transversal,
};
use eqsing::localstd::{colength_with, fitting_ideal, standard_basis, standard_basis_exact, Budget};
use eqsing::multiplicity::{br_multiplicity, icis_milnor, mu_star};
use eqsing::{parse, Submodule};
use serde_json::{json, Value};

use crate::problem::{Overrides, Problem};
use crate::report::{sha256_hex, Report, Timings};

pub const COMMANDS: &[&str] = &[
    "sb",
    "colength",
    "fitting",
    "milnor",
    "mustar",
    "mult",
    "modify",
    "lift",
    "probe",
    "check-w",
    "refute-a",
    "check-tr",
    "check-tr-minus",
    "check-family",
    "analyze-family",
    "check-ambient",
    "check-mu",
    "replay",
];

enum Output {
    Value(Value, Vec<SampleTable>),
    Verdict(Verdict),
}

fn strings<T: ToString>(v: &[T]) -> Value {
    Value::from(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn ideal(p: &Problem) -> Submodule {
    Submodule::ideal(&p.ring, p.comps.clone(), vec![])
}

fn tie(ov: &Overrides) -> Result<TieBreak> {
    match ov.tie.as_deref() {
        None | Some("smallest") => Ok(TieBreak::Smallest),
        Some("largest") => Ok(TieBreak::Largest),
        Some(o) => bail!("--tie must be smallest or largest, not `{}`", o),
    }
}

/// Splits `tr-closure(r=2)` into the name and the optional jet order.
fn split_id(id: &str) -> Result<(&str, Option<u32>)> {
    match id.split_once("(r=") {
        None => Ok((id, None)),
        Some((name, rest)) => {
            let r = rest.strip_suffix(')').and_then(|s| s.parse().ok()).ok_or_else(|| anyhow!("bad condition id `{}`", id))?;
            Ok((name, Some(r)))
        }
    }
}

/// Rebuilds the condition modules a witness refers to.
pub fn modules_by_id(p: &Problem, ov: &Overrides, id: &str, transversal: Option<&[String]>) -> Result<ConditionModules> {
    let spec = p.spec()?;
    let germ = &spec.germ;
    let (name, r) = split_id(id)?;
    let r = r.or(spec.r);
    let f = match transversal {
        Some(comps) => {
            let polys = comps.iter().map(|c| parse(c, &p.ring)).collect::<eqsing::Result<Vec<_>>>()?;
            Transversal::new(germ, polys)?
        }
        None => spec.transversal.clone().unwrap_or_else(|| Transversal::zero(germ)),
    };
    let need_r = || r.ok_or_else(|| anyhow!("condition `{}` needs a jet order", name));
    Ok(match name {
        "w-condition" => w_condition_modules(germ),
        "whitney-a-strict" => whitney_a_modules(germ),
        "tr-closure" => {
            let r = need_r()?;
            tr_condition_modules(germ, &jet_truncate(&f, r), r, Flavor::Closure)?
        }
        "tr-strict" => {
            let r = need_r()?;
            tr_condition_modules(germ, &jet_truncate(&f, r), r, Flavor::Strict)?
        }
        "s-condition" => {
            let r = need_r()?;
            let s = spec.s_ideal.as_ref().ok_or_else(|| anyhow!("s-condition needs a [singular_locus] section"))?;
            s_condition_modules(germ, s, &jet_truncate(&f, r), r)?
        }
        "verdier-family" => {
            let fam = spec.family.as_ref().ok_or_else(|| anyhow!("verdier-family needs a [family] section"))?;
            verdier_family_modules(germ, fam)?
        }
        "closure-membership" => {
            let h = ov.element.as_deref().ok_or_else(|| anyhow!("closure-membership needs --element"))?;
            let h = parse(h, &p.ring)?;
            ConditionModules {
                lhs: Submodule::ideal(&p.ring, vec![h.clone()], vec![]),
                rhs: ideal(p),
                flavor: Flavor::Closure,
                id: "closure-membership".into(),
                lhs_labels: vec![h.to_string()],
                germ: None,
                transversal: None,
            }
        }
        _ => bail!("unknown condition `{}`", id),
    })
}

fn probe(p: &Problem, ov: &Overrides) -> Result<Verdict> {
    let spec = p.spec()?;
    let id = ov.condition.clone().unwrap_or_else(|| "w-condition".into());
    let cm = modules_by_id(p, ov, &id, None)?;
    let mut ev = eqsing::checker::Evidence { conditions: vec![cm.id.clone()], ..Default::default() };
    let k = &spec.knobs;
    let fails = |w: Witness, ev| {
        let mut v = verdict_shell(eqsing::checker::Outcome::Fails, eqsing::checker::Confidence::Proven, "curve-refutation", ev);
        v.witnesses.push(w);
        v
    };
    match &spec.curve {
        Some(curve) => {
            let phi = realize(curve, &cm.lhs.quotient, k.n)?;
            match check_condition_on_curve(&cm, &phi, k.guard)? {
                CurveCheck::Refuted(w) => Ok(fails(*w, ev)),
                CurveCheck::Pass { tested } => {
                    ev.paths.push(path("curve-probe", &cm.id, format!("member along {} modulo t^{}", phi.text(), tested)));
                    Ok(verdict_shell(eqsing::checker::Outcome::Indeterminate, eqsing::checker::Confidence::Heuristic, "curve-probe", ev))
                }
                CurveCheck::Indeterminate(why) => {
                    ev.paths.push(path("curve-probe", &cm.id, why));
                    Ok(verdict_shell(eqsing::checker::Outcome::Indeterminate, eqsing::checker::Confidence::Heuristic, "curve-probe", ev))
                }
            }
        }
        None => {
            let fam = eqsing::curveprobe::FamilySpec { skeletons: spec.skeletons(&cm.lhs.quotient), ..k.curves() };
            match refute(&cm, &fam) {
                RefuteOutcome::Refuted(w) => Ok(fails(*w, ev)),
                RefuteOutcome::NoWitnessFound { probed, on_variety, indeterminate } => {
                    ev.paths.push(path(
                        "curve-refutation",
                        &cm.id,
                        format!("no witness ({} arcs probed, {} on the variety, {} indeterminate)", probed, on_variety, indeterminate),
                    ));
                    Ok(verdict_shell(eqsing::checker::Outcome::Indeterminate, eqsing::checker::Confidence::Heuristic, "no-conclusive-path", ev))
                }
            }
        }
    }
}

fn path(p: &str, c: &str, r: String) -> eqsing::checker::PathRecord {
    eqsing::checker::PathRecord { path: p.into(), condition: c.into(), result: r }
}

fn verdict_shell(
    outcome: eqsing::checker::Outcome,
    confidence: eqsing::checker::Confidence,
    criterion: &str,
    evidence: eqsing::checker::Evidence,
) -> Verdict {
    Verdict { outcome, confidence, criterion: criterion.into(), evidence, witnesses: vec![], samples: vec![] }
}

fn dispatch(command: &str, p: &Problem, ov: &Overrides) -> Result<Output> {
    let k = p.knobs;
    Ok(match command {
        "sb" => {
            let m = ideal(p);
            match standard_basis_exact(&m, Budget::for_bound(k.bound)) {
                Some(sb) => Output::Value(json!({ "value": sb.display_elems(), "truncated": false }), vec![]),
                None => Output::Value(json!({ "value": standard_basis(&m, k.bound).display_elems(), "truncated": true }), vec![]),
            }
        }
        "colength" => Output::Value(json!({ "value": colength_with(&ideal(p), k.bound) }), vec![]),
        "fitting" => {
            let germ = p.germ()?;
            let mut m = jm(&germ);
            m.quotient.clear();
            let size = ov.minors.unwrap_or(germ.p().min(m.gens.len()));
            Output::Value(json!({ "value": strings(&fitting_ideal(&m, size)?), "minors": size }), vec![])
        }
        "milnor" => Output::Value(json!({ "value": icis_milnor(&p.comps, k.sampling())? }), vec![]),
        "mustar" => {
            let ms = mu_star(&p.comps, k.sampling())?;
            Output::Value(json!({ "value": ms.sequence, "sections": ms.forms }), vec![])
        }
        "mult" => {
            let res = br_multiplicity(&ideal(p), p.ring.nvars(), k.sampling());
            let rows = res.samples.iter().map(|r| (r.point.clone(), r.value)).collect();
            let table = SampleTable::new("colength of generic combinations", res.seed, rows);
            Output::Value(json!({ "value": res.value, "exact": res.exact, "dimension": p.ring.nvars() }), vec![table])
        }
        "modify" => {
            let spec = p.spec()?;
            let germ = &spec.germ;
            let beta = match &spec.family {
                Some(fam) => family_map(germ, fam)?,
                None if !ov.chart.is_empty() => {
                    let refs: Vec<&str> = ov.chart.iter().map(|s| s.as_str()).collect();
                    grassmann_map_named(germ, &refs)?
                }
                None => grassmann_map(germ)?,
            };
            let g = modify(germ, &beta)?;
            Output::Value(
                json!({
                    "value": strings(&g.comps),
                    "xvars": g.x_names(),
                    "yvars": g.y_names(),
                    "map": beta.display(),
                }),
                vec![],
            )
        }
        "lift" => {
            let spec = p.spec()?;
            let q = spec.transversal.as_ref().ok_or_else(|| anyhow!("lift needs a [transversal] section"))?;
            let l = lift_transversal(&spec.germ, q, tie(ov)?)?;
            Output::Value(
                json!({
                    "value": l.transversal.display(),
                    "components": strings(&l.germ.comps),
                    "xvars": l.germ.x_names(),
                    "yvars": l.germ.y_names(),
                    "center": strings(&l.center),
                }),
                vec![],
            )
        }
        "probe" => Output::Verdict(probe(p, ov)?),
        "check-w" => Output::Verdict(check_w(p.spec()?)?),
        "refute-a" => {
            let spec = p.spec()?;
            Output::Verdict(refute_whitney_a(spec, &spec.knobs.curves())?)
        }
        "check-tr" => Output::Verdict(check_tr(p.spec()?)?),
        "check-tr-minus" => Output::Verdict(check_tr_minus(p.spec()?)?),
        "check-family" => Output::Verdict(check_verdier_family(p.spec()?)?),
        "analyze-family" => Output::Verdict(analyze_family(p.spec()?)?),
        "check-ambient" => Output::Verdict(check_ambient_tr(p.spec()?)?),
        "check-mu" => Output::Verdict(check_mu_criteria(p.spec()?)?),
        other => bail!("unknown command `{}`", other),
    })
}

fn with_provenance(mut evidence: Value, text: &str, ov: &Overrides) -> Value {
    if let Value::Object(m) = &mut evidence {
        m.insert("problem".into(), Value::from(text));
        m.insert("flags".into(), serde_json::to_value(ov).expect("flags serialize"));
    }
    evidence
}

/// Runs one command on the text of a problem file.
pub fn run(command: &str, text: &str, ov: &Overrides) -> Result<Report> {
    if command == "replay" {
        return replay(text);
    }
    let start = Instant::now();
    tie(ov)?;
    let p = Problem::load(text, ov)?;
    let out = dispatch(command, &p, ov)?;
    let mut report = Report {
        command: command.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        spec_hash: sha256_hex(text),
        verdict: None,
        confidence: None,
        criterion: None,
        evidence: Value::Null,
        witnesses: vec![],
        samples: vec![],
        timings: Timings { total_ms: 0 },
    };
    match out {
        Output::Value(v, tables) => {
            report.evidence = with_provenance(v, text, ov);
            report.samples = tables.iter().map(|t| serde_json::to_value(t).expect("table serializes")).collect();
        }
        Output::Verdict(v) => {
            report.verdict = Some(format!("{:?}", v.outcome));
            report.confidence = Some(format!("{:?}", v.confidence));
            report.criterion = Some(v.criterion.clone());
            report.evidence = with_provenance(serde_json::to_value(&v.evidence)?, text, ov);
            report.witnesses = v.witnesses.iter().map(|w| serde_json::to_value(w).expect("witness serializes")).collect();
            report.samples = v.samples.iter().map(|t| serde_json::to_value(t).expect("table serializes")).collect();
        }
    }
    report.timings.total_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// `run`, reusing a stored report keyed by the hash of command, problem and flags.
pub fn run_cached(command: &str, text: &str, ov: &Overrides, cache: Option<&Path>) -> Result<Report> {
    let Some(dir) = cache else { return run(command, text, ov) };
    let key = sha256_hex(&format!("{}\n{}\n{}", command, text, serde_json::to_string(ov)?));
    let file = dir.join(format!("{}.json", key));
    if let Ok(stored) = std::fs::read_to_string(&file) {
        if let Ok(r) = Report::from_json(&stored) {
            return Ok(r);
        }
    }
    let report = run(command, text, ov)?;
    std::fs::create_dir_all(dir).with_context(|| format!("creating cache directory {}", dir.display()))?;
    std::fs::write(&file, report.to_json()).with_context(|| format!("writing {}", file.display()))?;
    Ok(report)
}

/// Re-verifies every witness of a report at doubled truncation.
pub fn replay(report_text: &str) -> Result<Report> {
    let start = Instant::now();
    let stored = Report::from_json(report_text).context("reading report")?;
    if stored.witnesses.is_empty() {
        bail!("report has no witness to replay");
    }
    let text = stored.problem_text()?;
    if sha256_hex(text) != stored.spec_hash {
        bail!("embedded problem does not match spec_hash");
    }
    let ov: Overrides = match stored.evidence.get("flags") {
        Some(f) => serde_json::from_value(f.clone())?,
        None => Overrides::default(),
    };
    let p = Problem::load(text, &ov)?;
    let transversal: Option<Vec<String>> = stored
        .evidence
        .get("failing_transversal")
        .map(|v| serde_json::from_value(v.clone()))
        .transpose()?;
    let mut replayed = Vec::new();
    for w in &stored.witnesses {
        let cond = w.get("condition").and_then(Value::as_str).ok_or_else(|| anyhow!("witness without condition"))?;
        let curve = w.get("curve").and_then(Value::as_str).ok_or_else(|| anyhow!("witness without curve"))?;
        let n = w.get("n").and_then(Value::as_u64).ok_or_else(|| anyhow!("witness without n"))? as usize;
        let cm = modules_by_id(&p, &ov, cond, transversal.as_deref())?;
        match replay_arc(&cm, curve, 2 * n, p.knobs.guard)? {
            Some(again) => replayed.push(serde_json::to_value(&again)?),
            None => bail!("integrity error: witness along `{}` no longer refutes `{}` at N = {}", curve, cond, 2 * n),
        }
    }
    let evidence = json!({
        "replayed_command": stored.command,
        "replayed_at": replayed.iter().map(|w| w["n"].clone()).collect::<Vec<_>>(),
        "problem": text,
        "flags": ov,
    });
    Ok(Report {
        command: "replay".into(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        spec_hash: stored.spec_hash.clone(),
        verdict: Some("Fails".into()),
        confidence: stored.confidence.clone(),
        criterion: Some("witness-replay".into()),
        evidence,
        witnesses: replayed,
        samples: vec![],
        timings: Timings { total_ms: start.elapsed().as_millis() as u64 },
    })
}
