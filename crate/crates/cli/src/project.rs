//! The project file: its JSON schema and the resolution of every named
//! object it declares.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Arc;

use serde::Deserialize;
use serde_json::Value;
use topolog_core::category::{CategoryTable, FiniteCategory, Poset};
use topolog_core::heyting::{build_algebra, AlgebraSpec, HeytingAlgebra};
use topolog_core::ls::{
    axiom_pack, parse_ls, parse_ls_type, parse_sequent, AxiomPack, AxiomSchema, LsLine, LsRule, Sequent, Signature,
    Term, TypeExpr, VarContext,
};
use topolog_core::pl::{parse_pl, parse_pl_noting, parse_rational, ClassicalSystem, Formula, HilbertProof, Justification, ProofLine};
use topolog_core::presheaf::{Presheaf, PresheafTable};
use topolog_core::rep::{EffectiveClassicalRep, ToposRep};
use topolog_core::Limits;

use crate::error::{pointer_of, token, CliError};

pub const SCHEMA_VERSION: u64 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProject {
    schema_version: u64,
    #[serde(default)]
    posets: Vec<RawPoset>,
    #[serde(default)]
    categories: Vec<RawCategory>,
    #[serde(default)]
    presheaves: Vec<RawPresheaf>,
    #[serde(default)]
    algebras: Vec<RawAlgebra>,
    #[serde(default)]
    systems: Vec<RawSystem>,
    #[serde(default)]
    signatures: Vec<RawSignature>,
    #[serde(default)]
    axiom_packs: Vec<RawPack>,
    #[serde(default)]
    representations: Vec<RawRepresentation>,
    #[serde(default)]
    formulas: Vec<RawFormula>,
    #[serde(default)]
    terms: Vec<RawTerm>,
    #[serde(default)]
    proofs: Vec<RawProof>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoset {
    name: String,
    elements: Vec<String>,
    #[serde(default)]
    order: Vec<(String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCategory {
    name: String,
    #[serde(default)]
    poset: Option<String>,
    #[serde(default)]
    objects: Option<Vec<String>>,
    #[serde(default)]
    morphisms: Vec<RawMorphism>,
    #[serde(default)]
    identities: BTreeMap<String, String>,
    #[serde(default)]
    compose: Vec<(String, String, String)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMorphism {
    name: String,
    dom: String,
    cod: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPresheaf {
    name: String,
    category: String,
    stages: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    restrict: BTreeMap<String, BTreeMap<String, String>>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawAlgebra {
    Powerset { name: String, base: Vec<String> },
    OpenSets { name: String, base: Vec<String>, opens: Vec<Vec<String>> },
    LowerSets { name: String, poset: String },
    Sieves { name: String, category: String, object: String },
}

impl RawAlgebra {
    fn name(&self) -> &str {
        match self {
            RawAlgebra::Powerset { name, .. }
            | RawAlgebra::OpenSets { name, .. }
            | RawAlgebra::LowerSets { name, .. }
            | RawAlgebra::Sieves { name, .. } => name,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    name: String,
    states: Vec<String>,
    quantities: BTreeMap<String, Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymbol {
    name: String,
    dom: String,
    cod: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSignature {
    name: String,
    #[serde(default)]
    grounds: Vec<String>,
    #[serde(default)]
    symbols: Vec<RawSymbol>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPack {
    name: String,
    #[serde(default)]
    symbols: Vec<RawSymbol>,
    #[serde(default)]
    variables: BTreeMap<String, String>,
    sequents: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxiom {
    name: String,
    sequent: String,
    #[serde(default)]
    variables: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawRepresentation {
    Classical {
        name: String,
        system: String,
    },
    Topos {
        name: String,
        signature: String,
        category: String,
        grounds: BTreeMap<String, String>,
        #[serde(default)]
        symbols: BTreeMap<String, BTreeMap<String, BTreeMap<String, String>>>,
        #[serde(default)]
        axiom_packs: Vec<String>,
        #[serde(default)]
        axioms: Vec<RawAxiom>,
    },
}

impl RawRepresentation {
    fn name(&self) -> &str {
        match self {
            RawRepresentation::Classical { name, .. } | RawRepresentation::Topos { name, .. } => name,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFormula {
    name: String,
    text: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    name: String,
    signature: String,
    text: String,
    #[serde(default)]
    variables: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHilbertLine {
    formula: String,
    by: Justification,
}

#[derive(Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case", deny_unknown_fields)]
enum RawLsRule {
    Axiom {
        #[serde(default)]
        schema: Option<AxiomSchema>,
    },
    Given,
    Thinning {
        from: usize,
    },
    Cut {
        left: usize,
        right: usize,
    },
    Substitution {
        from: usize,
        var: String,
        var_type: String,
        term: String,
    },
    Rewrite {
        from: usize,
        equiv: usize,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLsLine {
    sequent: String,
    by: RawLsRule,
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum RawProof {
    Hilbert {
        name: String,
        #[serde(default)]
        goal: Option<String>,
        lines: Vec<RawHilbertLine>,
    },
    Ls {
        name: String,
        signature: String,
        #[serde(default)]
        variables: BTreeMap<String, String>,
        #[serde(default)]
        axiom_packs: Vec<String>,
        #[serde(default)]
        given: Vec<String>,
        lines: Vec<RawLsLine>,
    },
}

impl RawProof {
    fn name(&self) -> &str {
        match self {
            RawProof::Hilbert { name, .. } | RawProof::Ls { name, .. } => name,
        }
    }
}

pub struct PresheafEntry {
    pub category: String,
    pub presheaf: Arc<Presheaf>,
}

pub enum Representation {
    Classical(Box<EffectiveClassicalRep>),
    Topos(Box<ToposRep>),
}

impl Representation {
    pub fn topos(&self) -> &ToposRep {
        match self {
            Representation::Classical(c) => c.rep(),
            Representation::Topos(t) => t,
        }
    }
}

pub struct TermEntry {
    pub signature: String,
    pub scope: Vec<(String, TypeExpr)>,
    pub term: Term,
}

pub struct LsProof {
    pub signature: Signature,
    pub given: Vec<Sequent>,
    pub lines: Vec<LsLine>,
}

pub enum Proof {
    Hilbert(HilbertProof),
    Ls(LsProof),
}

/// A message about input that was accepted after adjustment.
#[derive(Clone, Debug, serde::Serialize)]
pub struct Note {
    pub pointer: String,
    pub message: String,
}

/// Every object of a project file, resolved and validated. Maps are keyed
/// by name and iterate in name order.
#[derive(Default)]
pub struct Project {
    pub posets: BTreeMap<String, Poset>,
    pub categories: BTreeMap<String, Arc<FiniteCategory>>,
    pub presheaves: BTreeMap<String, PresheafEntry>,
    pub algebras: BTreeMap<String, HeytingAlgebra>,
    pub systems: BTreeMap<String, ClassicalSystem>,
    pub signatures: BTreeMap<String, Signature>,
    pub representations: BTreeMap<String, Representation>,
    pub formulas: BTreeMap<String, Formula>,
    pub terms: BTreeMap<String, TermEntry>,
    pub proofs: BTreeMap<String, Proof>,
    pub notes: Vec<Note>,
    packs: BTreeMap<String, usize>,
    raw_packs: Vec<RawPack>,
}

/// Records where each name was declared and rejects repeats, naming both
/// sites.
fn unique_names<'a>(section: &str, names: impl Iterator<Item = &'a str>) -> Result<(), CliError> {
    let mut seen: HashMap<&str, usize> = HashMap::new();
    for (i, name) in names.enumerate() {
        if let Some(j) = seen.insert(name, i) {
            return Err(CliError::schema(
                format!("/{section}/{i}/name"),
                format!("duplicate name `{name}` in {section}: declared at /{section}/{j} and /{section}/{i}"),
            ));
        }
    }
    Ok(())
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, what: &str, pointer: String) -> Result<&'a T, CliError> {
    map.get(name)
        .ok_or_else(|| CliError::reference(pointer, format!("unknown {what} `{name}`")))
}

fn parse_type_at(text: &str, pointer: String) -> Result<TypeExpr, CliError> {
    parse_ls_type(text).map_err(|e| CliError::invalid(pointer, e))
}

fn parse_variables(vars: &BTreeMap<String, String>, pointer: &str) -> Result<Vec<(String, TypeExpr)>, CliError> {
    vars.iter()
        .map(|(x, t)| Ok((x.clone(), parse_type_at(t, format!("{pointer}/{}", token(x)))?)))
        .collect()
}

fn context_of(scope: &[(String, TypeExpr)]) -> VarContext {
    scope.iter().cloned().collect()
}

/// Parses a rational given as a JSON string `"n/d"` or an integer.
fn rational_at(v: &Value, pointer: &str) -> Result<topolog_core::pl::Q, CliError> {
    let parsed = match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => n.as_i64().map(topolog_core::pl::Q::from_integer),
        _ => None,
    };
    parsed.ok_or_else(|| CliError::schema(pointer, format!("expected an exact rational such as \"5/2\", found {v}")))
}

impl Project {
    pub fn load(path: &Path, limits: &Limits) -> Result<Project, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Project::from_json(&text, limits)
    }

    pub fn from_json(text: &str, limits: &Limits) -> Result<Project, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let raw: RawProject = serde_path_to_error::deserialize(de).map_err(|e| {
            let pointer = pointer_of(e.path());
            CliError::schema(pointer, e.into_inner().to_string())
        })?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(CliError::schema(
                "/schema_version",
                format!("unsupported schema_version {}; expected {SCHEMA_VERSION}", raw.schema_version),
            ));
        }
        let mut p = Project::default();
        p.resolve(raw, limits)?;
        Ok(p)
    }

    fn resolve(&mut self, raw: RawProject, limits: &Limits) -> Result<(), CliError> {
        unique_names("posets", raw.posets.iter().map(|x| x.name.as_str()))?;
        unique_names("categories", raw.categories.iter().map(|x| x.name.as_str()))?;
        unique_names("presheaves", raw.presheaves.iter().map(|x| x.name.as_str()))?;
        unique_names("algebras", raw.algebras.iter().map(RawAlgebra::name))?;
        unique_names("systems", raw.systems.iter().map(|x| x.name.as_str()))?;
        unique_names("signatures", raw.signatures.iter().map(|x| x.name.as_str()))?;
        unique_names("axiom_packs", raw.axiom_packs.iter().map(|x| x.name.as_str()))?;
        unique_names("representations", raw.representations.iter().map(RawRepresentation::name))?;
        unique_names("formulas", raw.formulas.iter().map(|x| x.name.as_str()))?;
        unique_names("terms", raw.terms.iter().map(|x| x.name.as_str()))?;
        unique_names("proofs", raw.proofs.iter().map(RawProof::name))?;

        for (i, rp) in raw.posets.into_iter().enumerate() {
            let poset = Poset::new(rp.elements, rp.order);
            poset.closure().map_err(|e| CliError::invalid(format!("/posets/{i}"), e))?;
            self.posets.insert(rp.name, poset);
        }
        for (i, rc) in raw.categories.into_iter().enumerate() {
            let at = format!("/categories/{i}");
            let cat = self.category(rc, &at)?;
            self.categories.insert(cat.0, Arc::new(cat.1));
        }
        for (i, rp) in raw.presheaves.into_iter().enumerate() {
            let at = format!("/presheaves/{i}");
            let base = lookup(&self.categories, &rp.category, "category", format!("{at}/category"))?.clone();
            let table = PresheafTable {
                stages: rp.stages.into_iter().collect(),
                restrict: rp
                    .restrict
                    .into_iter()
                    .map(|(m, pairs)| (m, pairs.into_iter().collect()))
                    .collect(),
            };
            let presheaf = Presheaf::from_table(base, &table).map_err(|e| CliError::invalid(&at, e))?;
            self.presheaves.insert(
                rp.name,
                PresheafEntry {
                    category: rp.category,
                    presheaf: Arc::new(presheaf),
                },
            );
        }
        for (i, ra) in raw.algebras.into_iter().enumerate() {
            let at = format!("/algebras/{i}");
            let name = ra.name().to_string();
            let spec = match ra {
                RawAlgebra::Powerset { base, .. } => AlgebraSpec::Powerset(base),
                RawAlgebra::OpenSets { base, opens, .. } => AlgebraSpec::OpenSets { base, opens },
                RawAlgebra::LowerSets { poset, .. } => {
                    AlgebraSpec::LowerSets(lookup(&self.posets, &poset, "poset", format!("{at}/poset"))?.clone())
                }
                RawAlgebra::Sieves { category, object, .. } => AlgebraSpec::Sieves {
                    category: (**lookup(&self.categories, &category, "category", format!("{at}/category"))?).clone(),
                    object,
                },
            };
            let algebra = build_algebra(&spec, limits).map_err(|e| CliError::invalid(&at, e))?;
            self.algebras.insert(name, algebra);
        }
        for (i, rs) in raw.systems.into_iter().enumerate() {
            let at = format!("/systems/{i}");
            let system = self.system(rs, &at)?;
            self.systems.insert(system.0, system.1);
        }
        for (i, rs) in raw.signatures.into_iter().enumerate() {
            let at = format!("/signatures/{i}");
            let mut symbols = Vec::new();
            for (j, s) in rs.symbols.iter().enumerate() {
                let dom = parse_type_at(&s.dom, format!("{at}/symbols/{j}/dom"))?;
                let cod = parse_type_at(&s.cod, format!("{at}/symbols/{j}/cod"))?;
                symbols.push((s.name.clone(), dom, cod));
            }
            let sig = Signature::new(rs.grounds, symbols).map_err(|e| CliError::invalid(&at, e))?;
            self.signatures.insert(rs.name, sig);
        }
        for (i, rp) in raw.axiom_packs.into_iter().enumerate() {
            if axiom_pack(&rp.name).is_some() {
                return Err(CliError::schema(
                    format!("/axiom_packs/{i}/name"),
                    format!("`{}` is the name of a built-in axiom pack", rp.name),
                ));
            }
            self.packs.insert(rp.name.clone(), i);
            self.raw_packs.push(rp);
        }
        for (i, rr) in raw.representations.into_iter().enumerate() {
            let at = format!("/representations/{i}");
            let name = rr.name().to_string();
            let rep = self.representation(rr, &at, limits)?;
            self.representations.insert(name, rep);
        }
        for (i, rf) in raw.formulas.into_iter().enumerate() {
            let at = format!("/formulas/{i}/text");
            let (formula, notes) = parse_pl_noting(&rf.text).map_err(|e| CliError::invalid(&at, e))?;
            self.notes.extend(notes.into_iter().map(|message| Note {
                pointer: at.clone(),
                message,
            }));
            self.formulas.insert(rf.name, formula);
        }
        for (i, rt) in raw.terms.into_iter().enumerate() {
            let at = format!("/terms/{i}");
            let sig = lookup(&self.signatures, &rt.signature, "signature", format!("{at}/signature"))?;
            let scope = parse_variables(&rt.variables, &format!("{at}/variables"))?;
            let term = parse_ls(&rt.text, sig, &context_of(&scope)).map_err(|e| CliError::invalid(format!("{at}/text"), e))?;
            self.terms.insert(
                rt.name,
                TermEntry {
                    signature: rt.signature,
                    scope,
                    term,
                },
            );
        }
        for (i, rp) in raw.proofs.into_iter().enumerate() {
            let at = format!("/proofs/{i}");
            let name = rp.name().to_string();
            let proof = self.proof(rp, &at)?;
            self.proofs.insert(name, proof);
        }
        Ok(())
    }

    fn category(&self, rc: RawCategory, at: &str) -> Result<(String, FiniteCategory), CliError> {
        let cat = match (&rc.poset, rc.objects) {
            (Some(poset), None) => {
                if !rc.morphisms.is_empty() || !rc.identities.is_empty() || !rc.compose.is_empty() {
                    return Err(CliError::schema(at, "a category built from a poset takes no morphism tables"));
                }
                let poset = lookup(&self.posets, poset, "poset", format!("{at}/poset"))?;
                FiniteCategory::from_poset(poset)
            }
            (None, Some(objects)) => FiniteCategory::from_table(&CategoryTable {
                objects,
                morphisms: rc.morphisms.into_iter().map(|m| (m.name, m.dom, m.cod)).collect(),
                identities: rc.identities.into_iter().collect(),
                compose: rc.compose,
            }),
            _ => return Err(CliError::schema(at, "a category needs exactly one of `poset` or `objects`")),
        };
        Ok((rc.name, cat.map_err(|e| CliError::invalid(at, e))?))
    }

    fn system(&self, rs: RawSystem, at: &str) -> Result<(String, ClassicalSystem), CliError> {
        let mut quantities = BTreeMap::new();
        for (q, table) in &rs.quantities {
            let qat = format!("{at}/quantities/{}", token(q));
            let values = match table {
                Value::Array(items) => {
                    if items.len() != rs.states.len() {
                        return Err(CliError::schema(
                            &qat,
                            format!("quantity `{q}` has {} values for {} states", items.len(), rs.states.len()),
                        ));
                    }
                    items
                        .iter()
                        .enumerate()
                        .map(|(j, v)| rational_at(v, &format!("{qat}/{j}")))
                        .collect::<Result<Vec<_>, _>>()?
                }
                Value::Object(map) => {
                    if let Some(bad) = map.keys().find(|k| !rs.states.contains(k)) {
                        return Err(CliError::reference(
                            format!("{qat}/{}", token(bad)),
                            format!("quantity `{q}` gives a value for unknown state `{bad}`"),
                        ));
                    }
                    rs.states
                        .iter()
                        .map(|s| {
                            let v = map.get(s).ok_or_else(|| {
                                CliError::schema(&qat, format!("quantity `{q}` has no value for state `{s}`"))
                            })?;
                            rational_at(v, &format!("{qat}/{}", token(s)))
                        })
                        .collect::<Result<Vec<_>, _>>()?
                }
                _ => {
                    return Err(CliError::schema(
                        &qat,
                        "a quantity table is a list of values or an object keyed by state",
                    ))
                }
            };
            quantities.insert(q.clone(), values);
        }
        let system = ClassicalSystem::new(rs.states, quantities).map_err(|e| CliError::invalid(at, e))?;
        Ok((rs.name, system))
    }

    /// The pack with the given name, its symbols installed into `sig` and
    /// its sequents parsed against the result.
    fn install_pack(&self, name: &str, sig: &mut Signature, at: String) -> Result<AxiomPack, CliError> {
        if let Some(pack) = axiom_pack(name) {
            pack.install(sig).map_err(|e| CliError::invalid(&at, e))?;
            return Ok(pack);
        }
        let i = *self
            .packs
            .get(name)
            .ok_or_else(|| CliError::reference(&at, format!("unknown axiom pack `{name}`")))?;
        let rp = &self.raw_packs[i];
        let pat = format!("/axiom_packs/{i}");
        let mut symbols = Vec::new();
        for (j, s) in rp.symbols.iter().enumerate() {
            let dom = parse_type_at(&s.dom, format!("{pat}/symbols/{j}/dom"))?;
            let cod = parse_type_at(&s.cod, format!("{pat}/symbols/{j}/cod"))?;
            symbols.push((s.name.clone(), dom, cod));
        }
        let mut pack = AxiomPack {
            name: rp.name.clone(),
            symbols,
            sequents: Vec::new(),
        };
        pack.install(sig).map_err(|e| CliError::invalid(&at, e))?;
        let ctx = context_of(&parse_variables(&rp.variables, &format!("{pat}/variables"))?);
        for (n, text) in &rp.sequents {
            let seq = parse_sequent(text, sig, &ctx)
                .map_err(|e| CliError::invalid(format!("{pat}/sequents/{}", token(n)), e))?;
            pack.sequents.push((n.clone(), seq));
        }
        Ok(pack)
    }

    fn representation(&self, rr: RawRepresentation, at: &str, limits: &Limits) -> Result<Representation, CliError> {
        match rr {
            RawRepresentation::Classical { system, .. } => {
                let sys = lookup(&self.systems, &system, "system", format!("{at}/system"))?;
                let rep = EffectiveClassicalRep::new(sys.clone(), limits).map_err(|e| CliError::invalid(at, e))?;
                Ok(Representation::Classical(Box::new(rep)))
            }
            RawRepresentation::Topos {
                signature,
                category,
                grounds,
                symbols,
                axiom_packs,
                axioms,
                ..
            } => {
                let mut sig = lookup(&self.signatures, &signature, "signature", format!("{at}/signature"))?.clone();
                let base = lookup(&self.categories, &category, "category", format!("{at}/category"))?.clone();
                let mut packs = Vec::new();
                for (j, name) in axiom_packs.iter().enumerate() {
                    packs.push(self.install_pack(name, &mut sig, format!("{at}/axiom_packs/{j}"))?);
                }
                let mut assigned = BTreeMap::new();
                for (g, ps) in &grounds {
                    let gat = format!("{at}/grounds/{}", token(g));
                    let entry = lookup(&self.presheaves, ps, "presheaf", gat.clone())?;
                    if entry.category != category {
                        return Err(CliError::reference(
                            gat,
                            format!("presheaf `{ps}` lives on `{}`, not on `{category}`", entry.category),
                        ));
                    }
                    assigned.insert(g.clone(), entry.presheaf.clone());
                }
                let mut rep = ToposRep::new(sig, base, assigned, limits).map_err(|e| CliError::invalid(format!("{at}/grounds"), e))?;
                for (name, stages) in &symbols {
                    let sat = format!("{at}/symbols/{}", token(name));
                    if rep.signature().symbol(name).is_none() {
                        return Err(CliError::reference(sat, format!("`{name}` is not a symbol of the signature")));
                    }
                    let table: Vec<(String, Vec<(String, String)>)> = stages
                        .iter()
                        .map(|(a, pairs)| (a.clone(), pairs.iter().map(|(x, y)| (x.clone(), y.clone())).collect()))
                        .collect();
                    rep.assign_symbol_table(name, &table).map_err(|e| CliError::invalid(sat, e))?;
                }
                for pack in &packs {
                    for (n, seq) in &pack.sequents {
                        rep.add_axiom(&format!("{}/{n}", pack.name), seq.clone())
                            .map_err(|e| CliError::invalid(format!("{at}/axiom_packs"), e))?;
                    }
                }
                for (j, ax) in axioms.iter().enumerate() {
                    let aat = format!("{at}/axioms/{j}");
                    let ctx = context_of(&parse_variables(&ax.variables, &format!("{aat}/variables"))?);
                    let seq = parse_sequent(&ax.sequent, rep.signature(), &ctx)
                        .map_err(|e| CliError::invalid(format!("{aat}/sequent"), e))?;
                    rep.add_axiom(&ax.name, seq).map_err(|e| CliError::invalid(format!("{aat}/sequent"), e))?;
                }
                rep.check_faithful().map_err(|e| CliError::invalid(format!("{at}/symbols"), e))?;
                Ok(Representation::Topos(Box::new(rep)))
            }
        }
    }

    fn proof(&self, rp: RawProof, at: &str) -> Result<Proof, CliError> {
        match rp {
            RawProof::Hilbert { goal, lines, .. } => {
                let goal = goal
                    .map(|g| parse_pl(&g).map_err(|e| CliError::invalid(format!("{at}/goal"), e)))
                    .transpose()?;
                let lines = lines
                    .into_iter()
                    .enumerate()
                    .map(|(j, l)| {
                        Ok(ProofLine {
                            formula: parse_pl(&l.formula).map_err(|e| CliError::invalid(format!("{at}/lines/{j}/formula"), e))?,
                            by: l.by,
                        })
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                Ok(Proof::Hilbert(HilbertProof { lines, goal }))
            }
            RawProof::Ls {
                signature,
                variables,
                axiom_packs,
                given,
                lines,
                ..
            } => {
                let mut sig = lookup(&self.signatures, &signature, "signature", format!("{at}/signature"))?.clone();
                let mut given_seqs = Vec::new();
                for (j, name) in axiom_packs.iter().enumerate() {
                    let pack = self.install_pack(name, &mut sig, format!("{at}/axiom_packs/{j}"))?;
                    given_seqs.extend(pack.sequents.into_iter().map(|(_, s)| s));
                }
                let ctx = context_of(&parse_variables(&variables, &format!("{at}/variables"))?);
                for (j, g) in given.iter().enumerate() {
                    given_seqs.push(parse_sequent(g, &sig, &ctx).map_err(|e| CliError::invalid(format!("{at}/given/{j}"), e))?);
                }
                let mut out = Vec::new();
                for (j, l) in lines.into_iter().enumerate() {
                    let lat = format!("{at}/lines/{j}");
                    let sequent =
                        parse_sequent(&l.sequent, &sig, &ctx).map_err(|e| CliError::invalid(format!("{lat}/sequent"), e))?;
                    let by = match l.by {
                        RawLsRule::Axiom { schema } => LsRule::Axiom { schema },
                        RawLsRule::Given => LsRule::Given,
                        RawLsRule::Thinning { from } => LsRule::Thinning { from },
                        RawLsRule::Cut { left, right } => LsRule::Cut { left, right },
                        RawLsRule::Rewrite { from, equiv } => LsRule::Rewrite { from, equiv },
                        RawLsRule::Substitution {
                            from,
                            var,
                            var_type,
                            term,
                        } => {
                            let var_type = parse_type_at(&var_type, format!("{lat}/by/var_type"))?;
                            let term =
                                parse_ls(&term, &sig, &ctx).map_err(|e| CliError::invalid(format!("{lat}/by/term"), e))?;
                            LsRule::Substitution {
                                from,
                                var,
                                var_type,
                                term,
                            }
                        }
                    };
                    out.push(LsLine { sequent, by });
                }
                Ok(Proof::Ls(LsProof {
                    signature: sig,
                    given: given_seqs,
                    lines: out,
                }))
            }
        }
    }

    pub fn formula(&self, name: &str) -> Result<&Formula, CliError> {
        self.formulas
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no formula named `{name}` in the project")))
    }

    pub fn representation_named(&self, name: &str) -> Result<&Representation, CliError> {
        self.representations
            .get(name)
            .ok_or_else(|| CliError::Usage(format!("no representation named `{name}` in the project")))
    }
}

/// Parses `x:T` bindings given on the command line, in order.
pub fn parse_bindings(bindings: &[String]) -> Result<Vec<(String, TypeExpr)>, CliError> {
    bindings
        .iter()
        .map(|b| {
            let (x, t) = b
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("expected `name:Type`, found `{b}`")))?;
            let ty = parse_ls_type(t.trim()).map_err(CliError::Core)?;
            Ok((x.trim().to_string(), ty))
        })
        .collect()
}

pub fn scope_context(scope: &[(String, TypeExpr)]) -> VarContext {
    context_of(scope)
}
