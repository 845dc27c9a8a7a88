//! Hilbert-style proofs with modus ponens as the only rule.

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::formula::{parse_pl, Formula, Primitive};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Schema {
    K,
    S,
    AndIntro,
    AndElimLeft,
    AndElimRight,
    OrIntroLeft,
    OrIntroRight,
    OrElim,
    NegIntro,
    NegElim,
}

impl Schema {
    pub const ALL: [Schema; 10] = [
        Schema::K,
        Schema::S,
        Schema::AndIntro,
        Schema::AndElimLeft,
        Schema::AndElimRight,
        Schema::OrIntroLeft,
        Schema::OrIntroRight,
        Schema::OrElim,
        Schema::NegIntro,
        Schema::NegElim,
    ];

    /// The schema written with metavariables `a`, `b`, `c`.
    pub fn pattern_text(self) -> &'static str {
        match self {
            Schema::K => "a -> b -> a",
            Schema::S => "(a -> b -> c) -> (a -> b) -> a -> c",
            Schema::AndIntro => "a -> b -> a & b",
            Schema::AndElimLeft => "a & b -> a",
            Schema::AndElimRight => "a & b -> b",
            Schema::OrIntroLeft => "a -> a | b",
            Schema::OrIntroRight => "b -> a | b",
            Schema::OrElim => "(a -> c) -> (b -> c) -> a | b -> c",
            Schema::NegIntro => "(a -> b) -> (a -> ~b) -> ~a",
            Schema::NegElim => "~a -> a -> b",
        }
    }

    fn pattern(self) -> &'static Formula {
        static PATTERNS: OnceLock<Vec<Formula>> = OnceLock::new();
        let all = PATTERNS.get_or_init(|| {
            Schema::ALL
                .iter()
                .map(|s| parse_pl(s.pattern_text()).expect("schema pattern parses"))
                .collect()
        });
        &all[Schema::ALL.iter().position(|s| *s == self).unwrap()]
    }

    /// The instance obtained by substituting for `a`, `b` and `c`.
    pub fn instance(self, a: &Formula, b: &Formula, c: &Formula) -> Formula {
        fn go(p: &Formula, a: &Formula, b: &Formula, c: &Formula) -> Formula {
            match p {
                Formula::Prim(Primitive::Atom(x)) => match x.as_str() {
                    "a" => a.clone(),
                    "b" => b.clone(),
                    _ => c.clone(),
                },
                Formula::Prim(_) => unreachable!("patterns use atoms only"),
                Formula::Not(x) => Formula::not(go(x, a, b, c)),
                Formula::And(x, y) => Formula::and(go(x, a, b, c), go(y, a, b, c)),
                Formula::Or(x, y) => Formula::or(go(x, a, b, c), go(y, a, b, c)),
                Formula::Implies(x, y) => Formula::implies(go(x, a, b, c), go(y, a, b, c)),
            }
        }
        go(self.pattern(), a, b, c)
    }

    pub fn matches(self, f: &Formula) -> bool {
        let mut binding = HashMap::new();
        match_pattern(self.pattern(), f, &mut binding)
    }

    pub fn find(f: &Formula) -> Option<Schema> {
        Schema::ALL.into_iter().find(|s| s.matches(f))
    }
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Schema::K => "k",
            Schema::S => "s",
            Schema::AndIntro => "and_intro",
            Schema::AndElimLeft => "and_elim_left",
            Schema::AndElimRight => "and_elim_right",
            Schema::OrIntroLeft => "or_intro_left",
            Schema::OrIntroRight => "or_intro_right",
            Schema::OrElim => "or_elim",
            Schema::NegIntro => "neg_intro",
            Schema::NegElim => "neg_elim",
        })
    }
}

fn match_pattern<'a>(p: &Formula, f: &'a Formula, binding: &mut HashMap<String, &'a Formula>) -> bool {
    match (p, f) {
        (Formula::Prim(Primitive::Atom(x)), _) => match binding.get(x) {
            Some(bound) => *bound == f,
            None => {
                binding.insert(x.clone(), f);
                true
            }
        },
        (Formula::Not(x), Formula::Not(y)) => match_pattern(x, y, binding),
        (Formula::And(x1, x2), Formula::And(y1, y2))
        | (Formula::Or(x1, x2), Formula::Or(y1, y2))
        | (Formula::Implies(x1, x2), Formula::Implies(y1, y2)) => {
            match_pattern(x1, y1, binding) && match_pattern(x2, y2, binding)
        }
        _ => false,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Justification {
    /// An instance of the named schema, or of any schema when `None`.
    Axiom {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        schema: Option<Schema>,
    },
    /// Modus ponens from line `premise` (φ) and line `implication` (φ → ψ),
    /// both 1-based.
    Mp { premise: usize, implication: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofLine {
    pub formula: Formula,
    pub by: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HilbertProof {
    pub lines: Vec<ProofLine>,
    pub goal: Option<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ProofVerdict {
    Accepted { lines: usize },
    Rejected { line: usize, reason: String },
}

impl ProofVerdict {
    pub fn accepted(&self) -> bool {
        matches!(self, ProofVerdict::Accepted { .. })
    }
}

/// Checks every line in order; the first bad line (1-based) is reported.
pub fn check_proof(proof: &HilbertProof) -> ProofVerdict {
    for (k, line) in proof.lines.iter().enumerate() {
        let n = k + 1;
        let reject = |reason: String| ProofVerdict::Rejected { line: n, reason };
        match &line.by {
            Justification::Axiom { schema: Some(s) } => {
                if !s.matches(&line.formula) {
                    return reject(format!("not an instance of schema `{s}`"));
                }
            }
            Justification::Axiom { schema: None } => {
                if Schema::find(&line.formula).is_none() {
                    return reject("not an instance of any axiom schema".into());
                }
            }
            Justification::Mp { premise, implication } => {
                for cited in [premise, implication] {
                    if *cited == 0 || *cited >= n {
                        return reject(format!("cites line {cited}, which is not an earlier line"));
                    }
                }
                let phi = &proof.lines[premise - 1].formula;
                match &proof.lines[implication - 1].formula {
                    Formula::Implies(a, b) if **a == *phi && **b == line.formula => {}
                    Formula::Implies(a, _) if **a == *phi => {
                        return reject(format!("line {implication} does not conclude this formula"));
                    }
                    Formula::Implies(..) => {
                        return reject(format!("antecedent of line {implication} is not line {premise}"));
                    }
                    _ => return reject(format!("line {implication} is not an implication")),
                }
            }
        }
    }
    match (&proof.goal, proof.lines.last()) {
        (_, None) => ProofVerdict::Rejected {
            line: 0,
            reason: "empty proof".into(),
        },
        (Some(goal), Some(last)) if *goal != last.formula => ProofVerdict::Rejected {
            line: proof.lines.len(),
            reason: format!("final line is not the goal `{goal}`"),
        },
        _ => ProofVerdict::Accepted {
            lines: proof.lines.len(),
        },
    }
}

/// The standard five-line derivation of `φ → φ` from K and S.
pub fn identity_proof(phi: &Formula) -> HilbertProof {
    let imp = Formula::implies;
    let pp = imp(phi.clone(), phi.clone());
    let l1 = Schema::K.instance(phi, &pp, phi);
    let l2 = Schema::S.instance(phi, &pp, phi);
    let l3 = imp(imp(phi.clone(), pp.clone()), pp.clone());
    let l4 = Schema::K.instance(phi, phi, phi);
    let axiom = |s| Justification::Axiom { schema: Some(s) };
    HilbertProof {
        lines: vec![
            ProofLine { formula: l1, by: axiom(Schema::K) },
            ProofLine { formula: l2, by: axiom(Schema::S) },
            ProofLine {
                formula: l3,
                by: Justification::Mp { premise: 1, implication: 2 },
            },
            ProofLine { formula: l4, by: axiom(Schema::K) },
            ProofLine {
                formula: pp.clone(),
                by: Justification::Mp { premise: 4, implication: 3 },
            },
        ],
        goal: Some(pp),
    }
}
