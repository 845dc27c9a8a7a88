use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Map, Value};
use topolog_core::heyting::{excluded_middle_demo, HeytingAlgebra, LawCheck};
use topolog_core::ls::{check_ls_derivation, infer_type, parse_ls, Signature, Term, TypeExpr};
use topolog_core::pl::{
    check_optional_axioms, check_proof, classical_rep, decide_ipc, parse_pl, parse_pl_noting,
    quantum_nondistributivity_demo, truth_value, Decision, Formula,
};
use topolog_core::presheaf::{char_morphism, hom_set, subobject_of_char, subobjects, truth_values, NatTransform, Omega};
use topolog_core::{Error, Limits};

use crate::error::CliError;
use crate::project::{parse_bindings, scope_context, Proof, Project, Representation};

/// Samples drawn per quantity when checking the optional axioms of a
/// classical system.
const OPTIONAL_AXIOM_SAMPLES: usize = 200;

pub struct Outcome {
    pub json: Value,
    pub code: u8,
    pub summary: String,
}

impl Outcome {
    fn ok(json: Value, summary: impl Into<String>) -> Self {
        Outcome {
            json,
            code: 0,
            summary: summary.into(),
        }
    }

    fn verdict(good: bool, json: Value, summary: impl Into<String>) -> Self {
        Outcome {
            json,
            code: if good { 0 } else { 1 },
            summary: summary.into(),
        }
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn load(file: &Path) -> Result<Project, CliError> {
    Project::load(file, &Limits::default())
}

fn arrow_json(arrow: &NatTransform) -> Value {
    let mut stages = Map::new();
    for (obj, pairs) in arrow.describe() {
        let table: Map<String, Value> = pairs.into_iter().map(|(x, y)| (x, Value::String(y))).collect();
        stages.insert(obj, Value::Object(table));
    }
    Value::Object(stages)
}

fn algebra_json(h: &HeytingAlgebra) -> Value {
    let report = h.check_laws(&LawCheck::default());
    json!({
        "size": h.len(),
        "boolean": h.is_boolean(),
        "laws_hold": report.passed(),
    })
}

fn formula_from(project: &Project, name: Option<String>, text: Option<String>) -> Result<Formula, CliError> {
    match (name, text) {
        (Some(n), _) => project.formula(&n).cloned(),
        (None, Some(t)) => Ok(parse_pl(&t)?),
        (None, None) => Err(CliError::Usage("give --formula or --text".into())),
    }
}

pub fn validate(file: &Path, seed: u64) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let mut good = true;
    let mut failures = Vec::new();

    let categories: Map<String, Value> = p
        .categories
        .iter()
        .map(|(n, c)| (n.clone(), json!({ "objects": c.objects().len(), "morphisms": c.morphisms().len() })))
        .collect();
    let presheaves: Map<String, Value> = p
        .presheaves
        .iter()
        .map(|(n, e)| {
            let base = e.presheaf.base();
            let sizes: Map<String, Value> = base
                .object_ids()
                .map(|a| (base.object_name(a).to_string(), json!(e.presheaf.size(a))))
                .collect();
            (n.clone(), json!({ "category": e.category, "stages": sizes }))
        })
        .collect();
    let mut algebras = Map::new();
    for (n, h) in &p.algebras {
        let v = algebra_json(h);
        if v["laws_hold"] != Value::Bool(true) {
            good = false;
            failures.push(format!("algebra `{n}` violates a law"));
        }
        algebras.insert(n.clone(), v);
    }
    let mut systems = Map::new();
    for (n, s) in &p.systems {
        let report = check_optional_axioms(s, OPTIONAL_AXIOM_SAMPLES, seed);
        if !report.passed() {
            good = false;
            failures.push(format!("system `{n}` fails an optional axiom"));
        }
        systems.insert(
            n.clone(),
            json!({
                "states": s.states(),
                "quantities": s.quantities().keys().collect::<Vec<_>>(),
                "optional_axioms": to_value(&report),
            }),
        );
    }
    let mut reps = Map::new();
    for (n, r) in &p.representations {
        let report = r.topos().validate_axioms();
        if !report.passed() {
            good = false;
            failures.push(format!("representation `{n}` fails an axiom"));
        }
        let kind = match r {
            Representation::Classical(_) => "classical",
            Representation::Topos(_) => "topos",
        };
        reps.insert(
            n.clone(),
            json!({ "kind": kind, "faithful": true, "axioms": to_value(&report), "axioms_hold": report.passed() }),
        );
    }
    let formulas: Map<String, Value> = p
        .formulas
        .iter()
        .map(|(n, f)| (n.clone(), Value::String(f.to_string())))
        .collect();
    let mut terms = Map::new();
    for (n, t) in &p.terms {
        let sig = &p.signatures[&t.signature];
        let v = match infer_type(&t.term, sig) {
            Ok(ty) => json!({ "term": t.term.to_string(), "type": ty.to_string() }),
            Err(e @ Error::Type { .. }) => {
                good = false;
                failures.push(format!("term `{n}` is ill-typed"));
                json!({ "term": t.term.to_string(), "type_error": e.to_string() })
            }
            Err(e) => return Err(CliError::Core(e)),
        };
        terms.insert(n.clone(), v);
    }
    let mut proofs = Map::new();
    for (n, pr) in &p.proofs {
        let (accepted, v) = check_one(pr);
        if !accepted {
            good = false;
            failures.push(format!("proof `{n}` is rejected"));
        }
        proofs.insert(n.clone(), v);
    }
    let json = json!({
        "valid": good,
        "failures": failures,
        "posets": p.posets.keys().collect::<Vec<_>>(),
        "categories": categories,
        "presheaves": presheaves,
        "algebras": algebras,
        "systems": systems,
        "signatures": p.signatures.keys().collect::<Vec<_>>(),
        "representations": reps,
        "formulas": formulas,
        "terms": terms,
        "proofs": proofs,
        "notes": to_value(&p.notes),
        "seed": seed,
    });
    let summary = if good {
        format!("{}: valid", file.display())
    } else {
        format!("{}: {}", file.display(), failures.join("; "))
    };
    Ok(Outcome::verdict(good, json, summary))
}

fn check_one(proof: &Proof) -> (bool, Value) {
    match proof {
        Proof::Hilbert(h) => {
            let v = check_proof(h);
            (v.accepted(), json!({ "kind": "hilbert", "result": to_value(&v) }))
        }
        Proof::Ls(l) => {
            let v = check_ls_derivation(&l.lines, &l.signature, &l.given);
            (v.accepted(), json!({ "kind": "ls", "result": to_value(&v) }))
        }
    }
}

pub fn omega(file: &Path, category: &str) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let limits = Limits::default();
    let base = p
        .categories
        .get(category)
        .ok_or_else(|| CliError::Usage(format!("no category named `{category}` in the project")))?;
    let omega = Omega::new(base, &limits)?;
    let mut stages = Map::new();
    for a in base.object_ids() {
        let sieves: Vec<String> = omega.sieves(a).iter().map(|s| base.sieve_label(s)).collect();
        let alg = omega.algebra(a);
        stages.insert(
            base.object_name(a).to_string(),
            json!({
                "sieves": sieves,
                "top": base.sieve_label(omega.sieve(a, omega.top(a))),
                "bottom": base.sieve_label(omega.sieve(a, omega.bottom(a))),
                "boolean": alg.is_boolean(),
            }),
        );
    }
    let restrict: Map<String, Value> = omega
        .presheaf()
        .describe()
        .restrict
        .into_iter()
        .map(|(m, pairs)| {
            let table: Map<String, Value> = pairs.into_iter().map(|(x, y)| (x, Value::String(y))).collect();
            (m, Value::Object(table))
        })
        .collect();
    let (gammas, algebra) = truth_values(&omega, &limits)?;
    let json = json!({
        "category": category,
        "stages": stages,
        "restrict": restrict,
        "truth_values": {
            "count": gammas.len(),
            "elements": algebra.labels(),
            "boolean": algebra.is_boolean(),
        },
    });
    let summary = format!("Omega on `{category}` has {} global truth values", gammas.len());
    Ok(Outcome::ok(json, summary))
}

pub fn sub_classify(file: &Path, presheaf: &str) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let limits = Limits::default();
    let entry = p
        .presheaves
        .get(presheaf)
        .ok_or_else(|| CliError::Usage(format!("no presheaf named `{presheaf}` in the project")))?;
    let x = &entry.presheaf;
    let omega = Omega::new(x.base(), &limits)?;
    let subs = subobjects(x, &limits)?;
    let mut round_trip = true;
    let rows: Vec<Value> = subs
        .iter()
        .map(|k| {
            let chi = char_morphism(k, &omega);
            round_trip &= subobject_of_char(&chi, &omega).is_ok_and(|back| &back == k);
            json!({ "subobject": k.label(), "characteristic": arrow_json(&chi) })
        })
        .collect();
    let homs = hom_set(x, omega.presheaf(), &limits)?.len();
    let bijection = round_trip && homs == subs.len();
    let json = json!({
        "presheaf": presheaf,
        "subobjects": rows,
        "count": subs.len(),
        "arrows_to_omega": homs,
        "bijection": bijection,
    });
    let summary = format!("`{presheaf}` has {} sub-objects and {homs} arrows to Omega", subs.len());
    Ok(Outcome::verdict(bijection, json, summary))
}

pub fn pl_parse(text: &str) -> Result<Outcome, CliError> {
    let (f, notes) = parse_pl_noting(text)?;
    let prims: Vec<String> = f.primitives().into_iter().map(|p| p.to_string()).collect();
    let json = json!({ "formula": f.to_string(), "primitives": prims, "size": f.size(), "notes": notes });
    Ok(Outcome::ok(json, f.to_string()))
}

pub fn pl_represent(
    file: &Path,
    name: Option<String>,
    text: Option<String>,
    system: Option<String>,
    algebra: Option<String>,
    assign: &[String],
) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let f = formula_from(&p, name, text)?;
    match (system, algebra) {
        (Some(s), None) => {
            let sys = p
                .systems
                .get(&s)
                .ok_or_else(|| CliError::Usage(format!("no system named `{s}` in the project")))?;
            let rep = classical_rep(sys, &Limits::default())?;
            let set = rep.represent(&f)?;
            let states: Vec<&str> = set.iter().map(|i| sys.states()[i].as_str()).collect();
            let json = json!({ "formula": f.to_string(), "system": s, "states": states });
            let summary = format!("{f} holds in {}", sys.state_label(&set));
            Ok(Outcome::ok(json, summary))
        }
        (None, Some(a)) => {
            let h = p
                .algebras
                .get(&a)
                .ok_or_else(|| CliError::Usage(format!("no algebra named `{a}` in the project")))?;
            let mut table = BTreeMap::new();
            for pair in assign {
                let (prim, elem) = pair
                    .rsplit_once('=')
                    .ok_or_else(|| CliError::Usage(format!("expected `primitive=element`, found `{pair}`")))?;
                let key = match parse_pl(prim.trim())? {
                    Formula::Prim(q) => q.to_string(),
                    _ => return Err(CliError::Usage(format!("`{prim}` is not a primitive proposition"))),
                };
                table.insert(key, h.find(elem.trim())?);
            }
            let e = topolog_core::pl::pl_represent(&f, h, &|q: &topolog_core::pl::Primitive| table.get(&q.to_string()).copied())?;
            let json = json!({ "formula": f.to_string(), "algebra": a, "element": h.label(e) });
            let summary = format!("{f} is represented by {}", h.label(e));
            Ok(Outcome::ok(json, summary))
        }
        _ => Err(CliError::Usage("give exactly one of --system or --algebra".into())),
    }
}

pub fn pl_truth(
    file: &Path,
    name: Option<String>,
    text: Option<String>,
    system: &str,
    state: &str,
) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let f = formula_from(&p, name, text)?;
    let sys = p
        .systems
        .get(system)
        .ok_or_else(|| CliError::Usage(format!("no system named `{system}` in the project")))?;
    let value = truth_value(&f, state, sys)?;
    let json = json!({ "formula": f.to_string(), "system": system, "state": state, "value": value });
    Ok(Outcome::ok(json, format!("{f} is {value} at {state}")))
}

pub fn pl_decide(text: &str) -> Result<Outcome, CliError> {
    let f = parse_pl(text)?;
    let d = decide_ipc(&f, &Limits::default())?;
    let mut json = to_value(&d);
    json["formula"] = Value::String(f.to_string());
    let summary = match &d {
        Decision::Valid => format!("{f} is intuitionistically valid"),
        Decision::Invalid { countermodel } => {
            format!("{f} is not valid; countermodel with {} worlds", countermodel.worlds.len())
        }
    };
    Ok(Outcome::verdict(d.is_valid(), json, summary))
}

fn selected<'a>(p: &'a Project, name: Option<&str>, hilbert: bool) -> Result<Vec<(&'a String, &'a Proof)>, CliError> {
    let wanted = |pr: &Proof| matches!(pr, Proof::Hilbert(_)) == hilbert;
    match name {
        Some(n) => {
            let (k, pr) = p
                .proofs
                .get_key_value(n)
                .ok_or_else(|| CliError::Usage(format!("no proof named `{n}` in the project")))?;
            if !wanted(pr) {
                return Err(CliError::Usage(format!("proof `{n}` is of the other kind")));
            }
            Ok(vec![(k, pr)])
        }
        None => Ok(p.proofs.iter().filter(|(_, pr)| wanted(pr)).collect()),
    }
}

fn check_proofs(file: &Path, name: Option<&str>, hilbert: bool) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let mut all = true;
    let mut results = Map::new();
    let chosen = selected(&p, name, hilbert)?;
    for (n, pr) in &chosen {
        let (ok, v) = check_one(pr);
        all &= ok;
        results.insert((*n).clone(), v["result"].clone());
    }
    let summary = format!(
        "{} of {} proofs accepted",
        results.values().filter(|v| v["verdict"] == "accepted").count(),
        chosen.len()
    );
    Ok(Outcome::verdict(all, json!({ "proofs": results }), summary))
}

pub fn pl_prove(file: &Path, proof: Option<&str>) -> Result<Outcome, CliError> {
    check_proofs(file, proof, true)
}

pub fn ls_derive(file: &Path, proof: Option<&str>) -> Result<Outcome, CliError> {
    check_proofs(file, proof, false)
}

/// Free variables of a term with their types.
type Bindings = Vec<(String, TypeExpr)>;

/// The term and scope named by `--term`, or parsed from `--text` against
/// `sig` with the given bindings.
fn term_from(
    p: &Project,
    name: Option<String>,
    text: Option<String>,
    sig: Option<&Signature>,
    vars: &[String],
) -> Result<(Term, Bindings, Option<String>), CliError> {
    match (name, text) {
        (Some(n), _) => {
            let t = p
                .terms
                .get(&n)
                .ok_or_else(|| CliError::Usage(format!("no term named `{n}` in the project")))?;
            Ok((t.term.clone(), t.scope.clone(), Some(t.signature.clone())))
        }
        (None, Some(text)) => {
            let sig = sig.ok_or_else(|| CliError::Usage("--text needs a signature".into()))?;
            let scope = parse_bindings(vars)?;
            let term = parse_ls(&text, sig, &scope_context(&scope))?;
            Ok((term, scope, None))
        }
        (None, None) => Err(CliError::Usage("give --term or --text".into())),
    }
}

pub fn ls_typecheck(
    file: &Path,
    name: Option<String>,
    text: Option<String>,
    signature: Option<String>,
    vars: &[String],
) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let sig = match &signature {
        Some(s) => Some(
            p.signatures
                .get(s)
                .ok_or_else(|| CliError::Usage(format!("no signature named `{s}` in the project")))?,
        ),
        None => None,
    };
    let (term, _, named_sig) = term_from(&p, name, text, sig, vars)?;
    let sig = match named_sig {
        Some(s) => &p.signatures[&s],
        None => sig.expect("checked by term_from"),
    };
    match infer_type(&term, sig) {
        Ok(ty) => {
            let json = json!({ "term": term.to_string(), "well_typed": true, "type": ty.to_string() });
            Ok(Outcome::ok(json, format!("{term} : {ty}")))
        }
        Err(e @ Error::Type { .. }) => {
            let json = json!({ "term": term.to_string(), "well_typed": false, "error": e.to_string() });
            Ok(Outcome::verdict(false, json, e.to_string()))
        }
        Err(e) => Err(e.into()),
    }
}

pub fn ls_represent(
    file: &Path,
    rep: &str,
    name: Option<String>,
    text: Option<String>,
    vars: &[String],
) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let r = p.representation_named(rep)?.topos();
    let (term, scope, _) = term_from(&p, name, text, Some(r.signature()), vars)?;
    let ty = infer_type(&term, r.signature())?;
    let mut json = json!({
        "term": term.to_string(),
        "type": ty.to_string(),
        "scope": scope.iter().map(|(x, t)| format!("{x} : {t}")).collect::<Vec<_>>(),
    });
    if scope.is_empty() {
        let g = r.interpret_closed(&term)?;
        let value: Map<String, Value> = g.labels().into_iter().map(|(a, v)| (a, Value::String(v))).collect();
        json["value"] = Value::Object(value);
    } else {
        json["arrow"] = arrow_json(&r.interpret_term(&term, &scope)?);
    }
    Ok(Outcome::ok(json, format!("interpreted {term} : {ty} in `{rep}`")))
}

pub fn ls_check_axioms(file: &Path, rep: &str) -> Result<Outcome, CliError> {
    let p = load(file)?;
    let r = p.representation_named(rep)?.topos();
    let report = r.validate_axioms();
    let failed: Vec<&str> = report.failures().map(|o| o.name.as_str()).collect();
    let summary = if failed.is_empty() {
        format!("all {} axioms of `{rep}` hold", report.outcomes.len())
    } else {
        format!("`{rep}` fails {}", failed.join(", "))
    };
    let json = json!({ "representation": rep, "holds": report.passed(), "outcomes": to_value(&report.outcomes) });
    Ok(Outcome::verdict(report.passed(), json, summary))
}

pub fn demo_excluded_middle() -> Result<Outcome, CliError> {
    let cases = excluded_middle_demo(&Limits::default())?;
    let summary = cases
        .iter()
        .map(|c| match &c.witness {
            None => format!("{}: a | ~a = top for every a", c.algebra),
            Some(w) => format!("{}: {} | {} = {} != {}", c.algebra, w.alpha, w.not_alpha, w.alpha_or_not_alpha, w.top),
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Outcome::ok(json!({ "cases": to_value(&cases) }), summary))
}

pub fn demo_nondistributivity() -> Outcome {
    let r = quantum_nondistributivity_demo();
    let summary = format!("a & (b | c) = {} but (a & b) | (a & c) = {}", r.lhs, r.rhs);
    Outcome::ok(to_value(&r), summary)
}
