//! The two-dimensional subspace lattice and its failure of distributivity.

use serde::{Deserialize, Serialize};

use crate::heyting::{Law, LawCheck, Subspace, SubspaceLattice2D};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondistributivityReport {
    pub a: String,
    pub b: String,
    pub c: String,
    pub b_join_c: String,
    pub a_meet_b: String,
    pub a_meet_c: String,
    /// `a ∧ (b ∨ c)`
    pub lhs: String,
    /// `(a ∧ b) ∨ (a ∧ c)`
    pub rhs: String,
    pub distributive: bool,
    /// Whether the law checker on `{0, a, b, c, plane}` flags distributivity.
    pub law_check_flags_distributivity: bool,
    pub consequence: String,
}

/// Rays through `(1,0)`, `(0,1)` and `(1,1)`: `a ∧ (b ∨ c) = a` while
/// `(a ∧ b) ∨ (a ∧ c) = 0`.
pub fn quantum_nondistributivity_demo() -> NondistributivityReport {
    let a = Subspace::ray(1, 0);
    let b = Subspace::ray(0, 1);
    let c = Subspace::ray(1, 1);
    let lhs = a.meet(b.join(c));
    let rhs = a.meet(b).join(a.meet(c));
    let lattice = SubspaceLattice2D::new([a, b, c]).to_lattice();
    let report = lattice.check_laws(&LawCheck::default());
    NondistributivityReport {
        a: a.to_string(),
        b: b.to_string(),
        c: c.to_string(),
        b_join_c: b.join(c).to_string(),
        a_meet_b: a.meet(b).to_string(),
        a_meet_c: a.meet(c).to_string(),
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        distributive: lhs == rhs,
        law_check_flags_distributivity: report.violates(Law::Distributivity),
        consequence: "the lattice of subspaces is not distributive, so no assignment of subspaces to \
                      primitive propositions can turn the distributive law into a bi-implication that \
                      holds in every representation"
            .into(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn demo_values() {
        let r = quantum_nondistributivity_demo();
        assert_eq!(r.b_join_c, "plane");
        assert_eq!(r.a_meet_b, "0");
        assert_eq!(r.lhs, "ray(1,0)");
        assert_eq!(r.rhs, "0");
        assert!(!r.distributive);
        assert!(r.law_check_flags_distributivity);
    }
}
