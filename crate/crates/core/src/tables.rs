//! Label families and the embedded rank-witness tables.
//!
//! Polynomials are stored as text in the source parameters `l`, `m`; the
//! target parameters are `lp`, `mp` and only appear in guards.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::expr::parse_ncpoly;
use crate::free_algebra::{NCMatrix, NCPoly};
use crate::label::{representative, ExtParam, OrbitLabel};
use crate::scalar::{Field, Scalar};

/// A parameterized family of classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `A_{λ,μ}`, `μ ≠ 0`
    ALm,
    /// `A_{λ,∞}`
    ALInf,
    /// `A_{∞,λ}`
    AInfL,
    /// `B_{λ,μ}`
    BLm,
    /// `B_{∞,λ}`
    BInfL,
    C,
    D,
    /// `E_λ`
    EL,
    /// `E_∞`
    EInf,
    O,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::ALm,
        Family::ALInf,
        Family::AInfL,
        Family::BLm,
        Family::BInfL,
        Family::C,
        Family::D,
        Family::EL,
        Family::EInf,
        Family::O,
    ];

    pub fn of(label: &OrbitLabel) -> Family {
        use ExtParam::Inf;
        match label {
            OrbitLabel::A(Inf, _) => Family::AInfL,
            OrbitLabel::A(_, Inf) => Family::ALInf,
            OrbitLabel::A(..) => Family::ALm,
            OrbitLabel::B(Inf, _) => Family::BInfL,
            OrbitLabel::B(..) => Family::BLm,
            OrbitLabel::C => Family::C,
            OrbitLabel::D => Family::D,
            OrbitLabel::E(Inf) => Family::EInf,
            OrbitLabel::E(_) => Family::EL,
            OrbitLabel::O => Family::O,
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Family::ALm | Family::BLm => 2,
            Family::ALInf | Family::AInfL | Family::BInfL | Family::EL => 1,
            _ => 0,
        }
    }

    /// Node name in diagram exports.
    pub fn node_name(self) -> &'static str {
        match self {
            Family::ALm => "A[l,m]",
            Family::ALInf => "A[l,inf]",
            Family::AInfL => "A[inf,l]",
            Family::BLm => "B[l,m]",
            Family::BInfL => "B[inf,l]",
            Family::C => "C",
            Family::D => "D",
            Family::EL => "E[l]",
            Family::EInf => "E[inf]",
            Family::O => "O",
        }
    }

    /// The member with the given finite parameters, if it satisfies the
    /// label invariants.
    pub fn member(self, params: &[Scalar]) -> Option<OrbitLabel> {
        let f = |k: usize| ExtParam::Fin(params[k].clone());
        assert_eq!(params.len(), self.arity(), "wrong number of parameters for {self}");
        let label = match self {
            Family::ALm => OrbitLabel::A(f(0), f(1)),
            Family::ALInf => OrbitLabel::A(f(0), ExtParam::Inf),
            Family::AInfL => OrbitLabel::A(ExtParam::Inf, f(0)),
            Family::BLm => OrbitLabel::B(f(0), f(1)),
            Family::BInfL => OrbitLabel::B(ExtParam::Inf, f(0)),
            Family::C => OrbitLabel::C,
            Family::D => OrbitLabel::D,
            Family::EL => OrbitLabel::E(f(0)),
            Family::EInf => OrbitLabel::E(ExtParam::Inf),
            Family::O => OrbitLabel::O,
        };
        label.validate().ok().map(|_| label)
    }

    /// Members with parameters drawn from `values`.
    pub fn members(self, values: &[i64]) -> Vec<OrbitLabel> {
        let scalars: Vec<Scalar> = values.iter().map(|&v| Scalar::from_i64(v)).collect();
        let tuples: Vec<Vec<Scalar>> = match self.arity() {
            0 => vec![vec![]],
            1 => scalars.iter().map(|s| vec![s.clone()]).collect(),
            _ => scalars
                .iter()
                .flat_map(|a| scalars.iter().map(move |b| vec![a.clone(), b.clone()]))
                .collect(),
        };
        tuples.iter().filter_map(|p| self.member(p)).collect()
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.node_name())
    }
}

/// The finite parameters of a label, in order.
pub fn finite_params(label: &OrbitLabel) -> Vec<Scalar> {
    let ps: Vec<&ExtParam> = match label {
        OrbitLabel::A(p, q) | OrbitLabel::B(p, q) => vec![p, q],
        OrbitLabel::E(p) => vec![p],
        _ => vec![],
    };
    ps.into_iter().filter_map(|p| p.finite().cloned()).collect()
}

/// Parameter bindings `l, m` for a source label and `lp, mp` for a target.
pub fn bindings(source: &OrbitLabel, target: &OrbitLabel) -> HashMap<String, Scalar> {
    let mut out = HashMap::new();
    for (name, v) in ["l", "m"].iter().zip(finite_params(source)) {
        out.insert(name.to_string(), v);
    }
    for (name, v) in ["lp", "mp"].iter().zip(finite_params(target)) {
        out.insert(name.to_string(), v);
    }
    out
}

/// Side conditions on the parameters of a table row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Guard {
    Always,
    /// `λ ≠ λ′`
    LNeLp,
    /// `λ = λ′`
    LEqLp,
    /// `λ = λ′`, `μ ≠ μ′`
    LEqLpMNeMp,
    /// `(λ, μ) ≠ (λ′, μ′)`
    PairNe,
    /// `λ = 0`
    LZero,
    /// `λ ≠ 0`
    LNonzero,
}

impl Guard {
    pub fn holds(self, source: &OrbitLabel, target: &OrbitLabel) -> bool {
        let s = finite_params(source);
        let t = finite_params(target);
        match self {
            Guard::Always => true,
            Guard::LNeLp => s[0] != t[0],
            Guard::LEqLp => s[0] == t[0],
            Guard::LEqLpMNeMp => s[0] == t[0] && s[1] != t[1],
            Guard::PairNe => s[..2] != t[..2],
            Guard::LZero => s[0].is_zero(),
            Guard::LNonzero => !s[0].is_zero(),
        }
    }
}

/// A printed rank value, possibly an inequality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RankSpec {
    Exact(usize),
    AtLeast(usize),
    AtMost(usize),
}

impl RankSpec {
    pub fn holds(self, r: usize) -> bool {
        match self {
            RankSpec::Exact(k) => r == k,
            RankSpec::AtLeast(k) => r >= k,
            RankSpec::AtMost(k) => r <= k,
        }
    }
}

impl fmt::Display for RankSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankSpec::Exact(k) => write!(f, "{k}"),
            RankSpec::AtLeast(k) => write!(f, ">= {k}"),
            RankSpec::AtMost(k) => write!(f, "<= {k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessTable {
    Separation,
    HomOrder,
}

/// One row of a rank-witness table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct WitnessRow {
    pub table: WitnessTable,
    pub id: &'static str,
    pub source: Family,
    pub target: Family,
    pub guard: Guard,
    pub phi: &'static str,
    pub rank_source: RankSpec,
    pub rank_target: RankSpec,
}

#[allow(clippy::too_many_arguments)]
const fn row(
    table: WitnessTable,
    id: &'static str,
    source: Family,
    target: Family,
    guard: Guard,
    phi: &'static str,
    rank_source: RankSpec,
    rank_target: RankSpec,
) -> WitnessRow {
    WitnessRow {
        table,
        id,
        source,
        target,
        guard,
        phi,
        rank_source,
        rank_target,
    }
}

use Family::*;
use RankSpec::{AtLeast, AtMost, Exact};
use WitnessTable::{HomOrder, Separation};

/// Witnesses separating classes within one letter.
pub const SEPARATION_ROWS: [WitnessRow; 12] = [
    row(
        Separation,
        "A1",
        ALm,
        ALm,
        Guard::LNeLp,
        "x2 - l*x1",
        Exact(1),
        Exact(2),
    ),
    row(
        Separation,
        "A1'",
        ALm,
        ALm,
        Guard::LEqLpMNeMp,
        "x2 - l*x1 - m*x1",
        Exact(1),
        Exact(2),
    ),
    row(
        Separation,
        "A2",
        ALInf,
        ALInf,
        Guard::LNeLp,
        "x2 - l*x1",
        Exact(1),
        Exact(2),
    ),
    row(
        Separation,
        "A3",
        AInfL,
        AInfL,
        Guard::LNeLp,
        "x2 - l*x1",
        Exact(1),
        Exact(2),
    ),
    row(Separation, "A4", ALm, ALInf, Guard::Always, "x1", Exact(2), Exact(1)),
    row(Separation, "A5", ALm, AInfL, Guard::Always, "x1", Exact(2), Exact(1)),
    row(
        Separation,
        "A6",
        ALInf,
        AInfL,
        Guard::Always,
        "x1*x2",
        Exact(0),
        Exact(1),
    ),
    row(
        Separation,
        "B1",
        BLm,
        BLm,
        Guard::PairNe,
        "x2 - l*x1 - m*x1^2",
        Exact(0),
        AtLeast(1),
    ),
    row(
        Separation,
        "B2",
        BInfL,
        BInfL,
        Guard::LNeLp,
        "x1 - l*x2^2",
        Exact(0),
        Exact(1),
    ),
    row(Separation, "B3", BLm, BInfL, Guard::Always, "x1", Exact(2), AtMost(1)),
    row(Separation, "E1", EL, EL, Guard::LNeLp, "x2 - l*x1", Exact(0), Exact(1)),
    row(Separation, "E2", EL, EInf, Guard::Always, "x1", Exact(1), Exact(0)),
];

/// Witnesses that a class of dimension 7 (or a B-class) does not
/// degenerate to a given class of lower dimension.
pub const HOM_ROWS: [WitnessRow; 11] = [
    row(HomOrder, "1", AInfL, BLm, Guard::Always, "x1", Exact(1), Exact(2)),
    row(
        HomOrder,
        "2",
        AInfL,
        BInfL,
        Guard::Always,
        "x2 - l*x1",
        Exact(1),
        Exact(2),
    ),
    row(HomOrder, "3", ALm, BLm, Guard::LNeLp, "x2 - l*x1", Exact(1), Exact(2)),
    row(
        HomOrder,
        "3'",
        ALm,
        BLm,
        Guard::LEqLp,
        "(1 + l/m)*x1 - 1/m*x2",
        Exact(1),
        Exact(2),
    ),
    row(
        HomOrder,
        "4",
        ALm,
        BInfL,
        Guard::Always,
        "x2 - l*x1",
        Exact(1),
        Exact(2),
    ),
    row(HomOrder, "5", ALInf, BLm, Guard::Always, "x1", Exact(1), Exact(2)),
    row(
        HomOrder,
        "6",
        ALInf,
        BInfL,
        Guard::Always,
        "x2 - l*x1",
        Exact(1),
        Exact(2),
    ),
    row(
        HomOrder,
        "7",
        BLm,
        EL,
        Guard::LNeLp,
        "x2 - l*x1 - m*x1^2",
        Exact(0),
        Exact(1),
    ),
    row(
        HomOrder,
        "8",
        BLm,
        EInf,
        Guard::Always,
        "x2 - l*x1 - m*x1^2",
        Exact(0),
        Exact(1),
    ),
    row(HomOrder, "9", BInfL, EL, Guard::LZero, "x1", Exact(0), Exact(1)),
    row(
        HomOrder,
        "9'",
        BInfL,
        EL,
        Guard::LNonzero,
        "x1 - l*x2^2",
        Exact(0),
        Exact(1),
    ),
];

/// Both tables, separation rows first.
pub fn all_witness_rows() -> impl Iterator<Item = &'static WitnessRow> {
    SEPARATION_ROWS.iter().chain(HOM_ROWS.iter())
}

impl WitnessRow {
    pub fn applies(&self, source: &OrbitLabel, target: &OrbitLabel) -> bool {
        Family::of(source) == self.source && Family::of(target) == self.target && self.guard.holds(source, target)
    }

    pub fn polynomial(&self, source: &OrbitLabel, target: &OrbitLabel) -> Result<NCPoly> {
        parse_ncpoly(self.phi, &bindings(source, target))
    }

    /// Ranks of the instantiated witness at both representatives.
    pub fn evaluate(&self, source: &OrbitLabel, target: &OrbitLabel, field: Field) -> Result<RowCheck> {
        let phi = NCMatrix::scalar(self.polynomial(source, target)?);
        let rank_source = phi.rank_at(&representative(source, field)?)?;
        let rank_target = phi.rank_at(&representative(target, field)?)?;
        Ok(RowCheck {
            row: self.id,
            table: self.table,
            source: source.clone(),
            target: target.clone(),
            phi: phi.to_string(),
            rank_source,
            rank_target,
            pass: self.rank_source.holds(rank_source) && self.rank_target.holds(rank_target),
        })
    }

    /// Every instance on the grid that satisfies the guard.
    pub fn instances(&self, values: &[i64]) -> Vec<(OrbitLabel, OrbitLabel)> {
        let targets = self.target.members(values);
        self.source
            .members(values)
            .into_iter()
            .flat_map(|s| targets.iter().map(move |t| (s.clone(), t.clone())))
            .filter(|(s, t)| self.guard.holds(s, t))
            .collect()
    }
}

/// The outcome of one table row at one parameter instance.
#[derive(Clone, Debug, Serialize)]
pub struct RowCheck {
    pub table: WitnessTable,
    pub row: &'static str,
    pub source: OrbitLabel,
    pub target: OrbitLabel,
    pub phi: String,
    pub rank_source: usize,
    pub rank_target: usize,
    pub pass: bool,
}

/// Evaluate every instance of every row of `rows` on the grid.
pub fn verify_witness_rows(rows: &[WitnessRow], values: &[i64], field: Field) -> Result<Vec<RowCheck>> {
    let mut out = Vec::new();
    for r in rows {
        for (s, t) in r.instances(values) {
            out.push(r.evaluate(&s, &t, field)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_members_respect_invariants() {
        let values = [-1, 0, 1];
        assert_eq!(Family::ALm.members(&values).len(), 6);
        assert_eq!(Family::BLm.members(&values).len(), 9);
        assert_eq!(Family::C.members(&values), vec![OrbitLabel::C]);
        for f in Family::ALL {
            for l in f.members(&values) {
                assert_eq!(Family::of(&l), f);
            }
        }
    }

    #[test]
    fn guards_select_the_printed_cases() {
        let a = OrbitLabel::a(1, 2);
        assert!(SEPARATION_ROWS[0].applies(&a, &OrbitLabel::a(0, 2)));
        assert!(!SEPARATION_ROWS[0].applies(&a, &OrbitLabel::a(1, 3)));
        assert!(SEPARATION_ROWS[1].applies(&a, &OrbitLabel::a(1, 3)));
        assert!(!SEPARATION_ROWS[1].applies(&a, &a));
    }

    #[test]
    fn row_seven_at_b_is_zero() {
        let b = OrbitLabel::b(1, 2);
        let phi = HOM_ROWS[7].polynomial(&b, &OrbitLabel::e(3)).unwrap();
        assert_eq!(phi.to_string(), "-x1 + x2 - 2*x1^2");
        let check = HOM_ROWS[7].evaluate(&b, &OrbitLabel::e(3), Field::Rational).unwrap();
        assert_eq!((check.rank_source, check.rank_target), (0, 1));
    }

    #[test]
    fn row_b2_vanishes_at_its_source() {
        let check = SEPARATION_ROWS[8]
            .evaluate(&OrbitLabel::inf_b(2), &OrbitLabel::inf_b(3), Field::Rational)
            .unwrap();
        assert!(check.pass);
        assert_eq!(check.rank_source, 0);
    }
}
