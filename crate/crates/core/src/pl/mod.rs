//! The propositional language of a physical system: formulas built from
//! primitives `A in Δ` with `~`, `&`, `|` and `->`.

mod classical;
mod decide;
mod formula;
mod hilbert;
mod interval;
mod quantum;

pub use classical::{
    check_optional_axioms, classical_rep, pl_represent, sample_interval_set, truth_value, AxiomCheck, ClassicalRep,
    ClassicalSystem, OptionalAxiomReport,
};
pub use decide::{decide_ipc, find_countermodel, prove, Decision, KripkeModel};
pub use formula::{parse_interval_set, parse_pl, parse_pl_noting, Formula, Primitive};
pub use hilbert::{check_proof, identity_proof, HilbertProof, Justification, ProofLine, ProofVerdict, Schema};
pub use interval::{format_rational, parse_rational, Endpoint, Interval, IntervalSet, Q};
pub use quantum::{quantum_nondistributivity_demo, NondistributivityReport};
