//! The typed higher-order local language of a physical system.

mod parse;
mod sequent;
mod term;
mod types;

pub use parse::{parse_ls, parse_sequent};
pub use sequent::{
    abelian_axiom_pack, axiom_pack, check_ls_derivation, comprehension_instance, equality_instance,
    is_axiom_instance, lset_intersection, product_beta_instance, product_eta_instance, tautology_instance,
    unity_instance, AxiomPack, AxiomSchema, LsLine, LsRule, LsVerdict, Sequent,
};
pub use term::{
    alpha_eq, and, app, compr, desugar, differs_by_replacement, eq, fresh, iff, implies, infer_type, member, proj,
    substitute, var,
    Term, VarContext,
};
pub use types::{parse_ls_type, Signature, TypeExpr};
