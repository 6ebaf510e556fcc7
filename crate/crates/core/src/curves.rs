//! Degeneration curves: conjugate a pair by `g_ε` over `K(ε)` (after
//! recombining its components by `h_ε` when given), and check that the limit
//! at `ε = 0` exists and lies in the claimed orbit.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::classify::classify_pair;
use crate::eps::{EpsMatrix, RatFunc};
use crate::error::{Error, Result};
use crate::expr::parse_eps_matrix;
use crate::group::{classify_g, g_hasse};
use crate::label::{representative, OrbitLabel};
use crate::matrix::Matrix;
use crate::order::family_hasse;
use crate::poset::Hasse;
use crate::scalar::{Field, Scalar};
use crate::tables::Family;
use crate::tuple::MatrixTuple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CurveTable {
    /// Curves in `GL3` for the edges of the orbit diagram.
    Degenerations,
    /// Curves in `GL3 × H` for the coarser diagram.
    GroupDegenerations,
    /// Curves for edges whose degeneration is otherwise argued abstractly.
    Supplementary,
}

/// A degeneration curve with its source and target label patterns. Patterns
/// use the label syntax with parameter names in place of values, e.g.
/// `B[l,m]`.
#[derive(Clone, Copy, Debug)]
pub struct CurveSpec {
    pub table: CurveTable,
    pub id: &'static str,
    pub source: &'static str,
    pub target: &'static str,
    pub g: &'static str,
    /// Acts on the tuple index before conjugation, as in `apply_gl2`.
    pub h: Option<&'static str>,
    pub params: &'static [&'static str],
    pub nonzero: &'static [&'static str],
}

impl CurveSpec {
    /// Whether the target is matched up to `GL3 × H` rather than `GL3`.
    pub fn group_level(&self) -> bool {
        self.h.is_some()
    }
}

const fn gl3(
    id: &'static str,
    source: &'static str,
    target: &'static str,
    g: &'static str,
    params: &'static [&'static str],
    nonzero: &'static [&'static str],
) -> CurveSpec {
    CurveSpec {
        table: CurveTable::Degenerations,
        id,
        source,
        target,
        g,
        h: None,
        params,
        nonzero,
    }
}

const fn gl3h(
    id: &'static str,
    source: &'static str,
    target: &'static str,
    g: &'static str,
    h: &'static str,
) -> CurveSpec {
    CurveSpec {
        table: CurveTable::GroupDegenerations,
        id,
        source,
        target,
        g,
        h: Some(h),
        params: &[],
        nonzero: &[],
    }
}

pub const DEGENERATION_CURVES: [CurveSpec; 12] = [
    gl3(
        "1",
        "A[l,m]",
        "D",
        "diag(1, eps*(l + m), eps) + eps*E12 + l*E21 + E32",
        &["l", "m"],
        &["m"],
    ),
    gl3("2", "A[l,inf]", "D", "diag(1, eps, eps) + l*E21 + E32", &["l"], &[]),
    gl3(
        "3",
        "A[inf,l]",
        "D",
        "diag(0, eps*l, eps) + eps*E12 + E21 + E32",
        &["l"],
        &[],
    ),
    gl3(
        "4",
        "A[l,m]",
        "C",
        "diag(1, 1 + l*m^-1, -eps) + eps^-1*m^-1*E21 - m^-1*E32 + eps*l*E23",
        &["l", "m"],
        &["m"],
    ),
    gl3(
        "5",
        "A[l,inf]",
        "C",
        "diag(eps, eps, eps^2) - E21 - eps^2*l*E23",
        &["l"],
        &[],
    ),
    gl3(
        "6",
        "A[inf,l]",
        "C",
        "diag(0, -eps*l, 0) - eps^2*(E12 + E23) + E31 + eps*E32",
        &["l"],
        &[],
    ),
    gl3("7", "B[l,m]", "E[l]", "diag(1, 1, eps)", &["l", "m"], &[]),
    gl3("8", "D", "E[l]", "diag(eps, 0, 0) + eps*E23 - l*E31 + E32", &["l"], &[]),
    gl3("9", "C", "E[l]", "diag(1, 1, eps) + l*E23", &["l"], &[]),
    gl3("10", "D", "E[inf]", "E12 + E23 + eps^-1*E31", &[], &[]),
    gl3("11", "C", "E[inf]", "diag(eps^-1, 1, eps) + eps^-1*E23", &[], &[]),
    gl3("12", "B[inf,l]", "E[inf]", "diag(1, 1, eps)", &["l"], &[]),
];

pub const GROUP_CURVES: [CurveSpec; 9] = [
    gl3h(
        "1",
        "A[0,inf]",
        "B[inf,1]",
        "[[1,0,0],[eps^-1,eps,0],[0,1,eps]]",
        "[[1,0],[eps^-1,1]]",
    ),
    gl3h("2", "B[0,1]", "B[0,0]", "I", "[[1,0],[0,eps]]"),
    gl3h(
        "3",
        "B[0,1]",
        "B[inf,1]",
        "[[1,0,0],[0,eps,0],[0,1,eps^2]]",
        "[[1,0],[eps^-1,-eps^-3]]",
    ),
    gl3h(
        "4",
        "A[inf,0]",
        "B[inf,1]",
        "[[1,0,0],[-eps^-1,1,0],[eps^-2,-eps^-1,eps]]",
        "[[1,0],[eps^-1,1]]",
    ),
    gl3h(
        "5",
        "B[0,0]",
        "B[inf,0]",
        "diag(eps^-2, eps^-1, 1)",
        "[[1,0],[eps^-1,1]]",
    ),
    gl3h("6", "B[inf,1]", "B[inf,0]", "diag(1, eps, eps^2)", "[[1,0],[0,eps^-1]]"),
    gl3h(
        "7",
        "B[inf,1]",
        "C",
        "[[1,0,0],[0,0,1],[0,eps^-1,0]]",
        "[[1,0],[0,eps]]",
    ),
    gl3h("8", "B[inf,1]", "D", "diag(1, eps, 1)", "[[1,0],[0,eps]]"),
    gl3h("9", "E[0]", "E[inf]", "diag(1, eps, 1)", "[[1,0],[eps^-1,1]]"),
];

pub const SUPPLEMENTARY_CURVES: [CurveSpec; 5] = [
    CurveSpec {
        table: CurveTable::Supplementary,
        id: "s1",
        source: "E[l]",
        target: "O",
        g: "diag(1, eps, 1)",
        h: None,
        params: &["l"],
        nonzero: &[],
    },
    CurveSpec {
        table: CurveTable::Supplementary,
        id: "s2",
        source: "E[inf]",
        target: "O",
        g: "diag(1, eps, 1)",
        h: None,
        params: &[],
        nonzero: &[],
    },
    CurveSpec {
        table: CurveTable::Supplementary,
        id: "s3",
        source: "A[0,1]",
        target: "A[0,inf]",
        g: "diag(1, 1, eps)",
        h: Some("[[1,0],[0,eps^-1]]"),
        params: &[],
        nonzero: &[],
    },
    CurveSpec {
        table: CurveTable::Supplementary,
        id: "s4",
        source: "A[0,1]",
        target: "A[inf,0]",
        g: "diag(1, eps, eps)",
        h: Some("[[1,0],[eps^-1,-eps^-1]]"),
        params: &[],
        nonzero: &[],
    },
    CurveSpec {
        table: CurveTable::Supplementary,
        id: "s5",
        source: "A[0,1]",
        target: "B[0,1]",
        g: "I - eps^-1*(E21 + E32)",
        h: Some("[[1,0],[0,eps]]"),
        params: &[],
        nonzero: &[],
    },
];

pub fn all_curves() -> impl Iterator<Item = &'static CurveSpec> {
    DEGENERATION_CURVES
        .iter()
        .chain(GROUP_CURVES.iter())
        .chain(SUPPLEMENTARY_CURVES.iter())
}

pub type Bindings = HashMap<String, Scalar>;

/// Substitute parameter names inside the brackets of a label pattern.
pub fn instantiate(pattern: &str, bindings: &Bindings) -> Result<OrbitLabel> {
    let Some((head, rest)) = pattern.split_once('[') else {
        return pattern.parse();
    };
    let inner = rest
        .strip_suffix(']')
        .ok_or_else(|| Error::InvalidLabel(pattern.into()))?;
    let args: Vec<String> = inner
        .split(',')
        .map(|t| {
            let t = t.trim();
            bindings.get(t).map_or_else(|| t.to_string(), |v| v.to_string())
        })
        .collect();
    format!("{head}[{}]", args.join(",")).parse()
}

/// Conjugate `a` along the curve: `g_ε · (h_ε · a) · g_ε⁻¹`.
pub fn conjugate_curve(spec: &CurveSpec, bindings: &Bindings, a: &MatrixTuple) -> Result<(EpsMatrix, EpsMatrix)> {
    if a.m() != 2 || a.n() != 3 {
        return Err(Error::ShapeMismatch("curves act on pairs of 3x3 matrices".into()));
    }
    let field = a.field();
    let g = parse_eps_matrix(spec.g, 3, field, bindings)?;
    if g.determinant().is_zero() {
        return Err(Error::SingularCurveMatrix);
    }
    let g_inv = g.inverse()?;
    let (a1, a2) = (
        EpsMatrix::from_matrix(a.component(0)),
        EpsMatrix::from_matrix(a.component(1)),
    );
    let (b1, b2) = match spec.h {
        None => (a1, a2),
        Some(h) => {
            let h = parse_eps_matrix(h, 2, field, bindings)?;
            if h.determinant().is_zero() {
                return Err(Error::SingularCurveMatrix);
            }
            let comb = |p: &RatFunc, q: &RatFunc| &a1.scale(p) + &a2.scale(q);
            (comb(h.get(0, 0), h.get(0, 1)), comb(h.get(1, 0), h.get(1, 1)))
        }
    };
    let conj = |m: &EpsMatrix| &(&g * m) * &g_inv;
    Ok((conj(&b1), conj(&b2)))
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveReport {
    pub table: CurveTable,
    pub row: &'static str,
    pub params: Vec<(String, String)>,
    pub source: String,
    pub target: String,
    /// The limit tuple at `ε = 0`, when every entry is pole-free there.
    pub limit: Option<String>,
    pub limit_label: Option<String>,
    /// The class of the curve at a generic `ε ≠ 0`; it must be the source.
    pub generic_label: Option<String>,
    pub pass: bool,
    pub error: Option<String>,
}

/// Points at which the curve is evaluated to confirm it stays in the source
/// orbit away from `ε = 0`.
const GENERIC_EPS: [i64; 4] = [7, -3, 11, 5];

fn same_class(spec: &CurveSpec, got: &OrbitLabel, want: &OrbitLabel) -> Result<bool> {
    if spec.group_level() {
        Ok(classify_g(got)? == classify_g(want)?)
    } else {
        Ok(got == want)
    }
}

/// Check one curve at concrete parameters. Classification mismatches and
/// poles are reported in the result rather than returned as errors.
pub fn verify_degeneration(spec: &CurveSpec, bindings: &Bindings, field: Field) -> CurveReport {
    let mut params: Vec<(String, String)> = spec
        .params
        .iter()
        .filter_map(|p| bindings.get(*p).map(|v| (p.to_string(), v.to_string())))
        .collect();
    params.sort();
    let mut report = CurveReport {
        table: spec.table,
        row: spec.id,
        params,
        source: spec.source.into(),
        target: spec.target.into(),
        limit: None,
        limit_label: None,
        generic_label: None,
        pass: false,
        error: None,
    };
    let outcome = (|| -> Result<bool> {
        let source = instantiate(spec.source, bindings)?;
        let target = instantiate(spec.target, bindings)?;
        report.source = source.to_string();
        report.target = target.to_string();
        let (c1, c2) = conjugate_curve(spec, bindings, &representative(&source, field)?)?;
        let generic = GENERIC_EPS
            .iter()
            .find_map(|&c| {
                let c = Scalar::from_i64(c).to_field(field).ok()?;
                Some((c1.eval(&c)?, c2.eval(&c)?))
            })
            .ok_or_else(|| Error::Internal("curve undefined at every sample point".into()))?;
        let generic = classify_pair(&MatrixTuple::pair(generic.0, generic.1)?)?;
        report.generic_label = Some(generic.to_string());
        let limit = MatrixTuple::pair(c1.eval_at_zero()?, c2.eval_at_zero()?)?;
        report.limit = Some(limit.to_string());
        let label = classify_pair(&limit)?;
        report.limit_label = Some(label.to_string());
        Ok(same_class(spec, &generic, &source)? && same_class(spec, &label, &target)?)
    })();
    match outcome {
        Ok(pass) => report.pass = pass,
        Err(e) => report.error = Some(e.to_string()),
    }
    report
}

/// Every binding of the curve's parameters to values from `values` that
/// respects its nonzero guards and yields valid labels.
pub fn parameter_instances(spec: &CurveSpec, values: &[i64]) -> Vec<Bindings> {
    let mut out = vec![Bindings::new()];
    for p in spec.params {
        out = out
            .into_iter()
            .flat_map(|b| {
                values
                    .iter()
                    .filter(|&&v| v != 0 || !spec.nonzero.contains(p))
                    .map(move |&v| {
                        let mut b = b.clone();
                        b.insert(p.to_string(), Scalar::from_i64(v));
                        b
                    })
            })
            .collect();
    }
    out.retain(|b| instantiate(spec.source, b).is_ok_and(|l| l.validate().is_ok()));
    out
}

/// Verify `specs` at every parameter instance drawn from `values`.
pub fn verify_curves(specs: &[&CurveSpec], values: &[i64], field: Field) -> Vec<CurveReport> {
    let jobs: Vec<(&CurveSpec, Bindings)> = specs
        .iter()
        .flat_map(|s| parameter_instances(s, values).into_iter().map(move |b| (*s, b)))
        .collect();
    let jobs: Vec<(&CurveSpec, Bindings)> = jobs
        .into_iter()
        .map(|(s, b)| {
            let b = b
                .into_iter()
                .map(|(k, v)| (k, v.to_field(field).unwrap_or(v)))
                .collect();
            (s, b)
        })
        .collect();
    jobs.par_iter().map(|(s, b)| verify_degeneration(s, b, field)).collect()
}

pub fn verify_all_curves(values: &[i64], field: Field) -> Vec<CurveReport> {
    let specs: Vec<&CurveSpec> = all_curves().collect();
    verify_curves(&specs, values, field)
}

/// One line per report: `table row params: source -> limit_label PASS|FAIL`.
pub fn report_line(r: &CurveReport) -> String {
    let params = r
        .params
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(",");
    let status = if r.pass { "PASS" } else { "FAIL" };
    let limit = r.limit_label.as_deref().unwrap_or("-");
    let err = r.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default();
    format!(
        "{:?} row {} [{}]: {} -> {} (target {}) {status}{err}",
        r.table, r.row, params, r.source, limit, r.target
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeCoverage {
    pub from: &'static str,
    pub to: &'static str,
    pub covered: bool,
}

fn coverage(hasse: &Hasse, realized: &BTreeSet<(usize, usize)>) -> Vec<EdgeCoverage> {
    let k = hasse.nodes().len();
    let mut reach = vec![vec![false; k]; k];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(a, b) in realized {
        reach[a][b] = true;
    }
    for m in 0..k {
        for i in 0..k {
            if reach[i][m] {
                for j in 0..k {
                    if reach[m][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    hasse
        .edges()
        .map(|(from, to)| {
            let (a, b) = (hasse.index(from).unwrap(), hasse.index(to).unwrap());
            EdgeCoverage {
                from,
                to,
                covered: reach[a][b],
            }
        })
        .collect()
}

fn realized_pairs<F>(reports: &[CurveReport], hasse: &Hasse, node: F) -> BTreeSet<(usize, usize)>
where
    F: Fn(&OrbitLabel) -> Option<&'static str>,
{
    reports
        .iter()
        .filter(|r| r.pass)
        .filter_map(|r| {
            let s: OrbitLabel = r.source.parse().ok()?;
            let t: OrbitLabel = r.limit_label.as_deref()?.parse().ok()?;
            Some((hasse.index(node(&s)?)?, hasse.index(node(&t)?)?))
        })
        .filter(|(a, b)| a != b)
        .collect()
}

/// Whether each edge of the family-level orbit diagram is realized by a
/// passing curve or a chain of them.
pub fn family_edge_coverage(reports: &[CurveReport]) -> Vec<EdgeCoverage> {
    let hasse = family_hasse();
    let realized = realized_pairs(reports, &hasse, |l| Some(Family::of(l).node_name()));
    coverage(&hasse, &realized)
}

/// The same for the `GL3 × H` diagram, projecting every passing curve.
pub fn group_edge_coverage(reports: &[CurveReport]) -> Vec<EdgeCoverage> {
    let hasse = g_hasse();
    let realized = realized_pairs(reports, &hasse, |l| classify_g(l).ok().map(|g| g.name()));
    coverage(&hasse, &realized)
}

/// A fixed tuple as an `EpsMatrix` pair, for comparisons in tests and tools.
pub fn constant_pair(a: &MatrixTuple) -> (EpsMatrix, EpsMatrix) {
    (
        EpsMatrix::from_matrix(a.component(0)),
        EpsMatrix::from_matrix(a.component(1)),
    )
}

/// `ε · m` as an `EpsMatrix`.
pub fn eps_times(m: &Matrix) -> EpsMatrix {
    EpsMatrix::from_matrix(m).scale(&RatFunc::eps(m.field()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn bind(pairs: &[(&str, i64)]) -> Bindings {
        pairs
            .iter()
            .map(|(k, v)| (k.to_string(), Scalar::from_i64(*v)))
            .collect()
    }

    fn e(i: usize, j: usize) -> Matrix {
        Matrix::unit(Q, 3, i, j)
    }

    #[test]
    fn row_seven_conjugation() {
        let b = bind(&[("l", 1), ("m", 1)]);
        let a = representative(&OrbitLabel::b(1, 1), Q).unwrap();
        let (c1, c2) = conjugate_curve(&DEGENERATION_CURVES[6], &b, &a).unwrap();
        let n = &EpsMatrix::from_matrix(&e(2, 1)) + &eps_times(&e(3, 2));
        assert_eq!(c1, n);
        assert_eq!(c2, &n + &eps_times(&e(3, 1)));
    }

    #[test]
    fn row_twelve_conjugation() {
        let b = bind(&[("l", 1)]);
        let a = representative(&OrbitLabel::inf_b(1), Q).unwrap();
        let (c1, c2) = conjugate_curve(&DEGENERATION_CURVES[11], &b, &a).unwrap();
        assert_eq!(c1, eps_times(&e(3, 1)));
        assert_eq!(c2, &EpsMatrix::from_matrix(&e(2, 1)) + &eps_times(&e(3, 2)));
    }

    #[test]
    fn identity_curve_is_constant() {
        let spec = CurveSpec {
            g: "I",
            ..DEGENERATION_CURVES[6]
        };
        let a = representative(&OrbitLabel::b(2, 3), Q).unwrap();
        assert_eq!(conjugate_curve(&spec, &bind(&[]), &a).unwrap(), constant_pair(&a));
    }

    #[test]
    fn group_row_one_matches_the_display() {
        let a = representative(&OrbitLabel::a_inf(0), Q).unwrap();
        let (c1, c2) = conjugate_curve(&GROUP_CURVES[0], &bind(&[]), &a).unwrap();
        let b = constant_pair(&representative(&OrbitLabel::inf_b(1), Q).unwrap());
        assert_eq!(c1, &b.0 + &eps_times(&e(2, 1)));
        assert_eq!(c2, b.1);
    }

    #[test]
    fn group_row_three_matches_the_display() {
        let a = representative(&OrbitLabel::b(0, 1), Q).unwrap();
        let (c1, c2) = conjugate_curve(&GROUP_CURVES[2], &bind(&[]), &a).unwrap();
        let b = constant_pair(&representative(&OrbitLabel::inf_b(1), Q).unwrap());
        assert_eq!(c1, &b.0 + &eps_times(&(&e(2, 1) + &e(3, 2))));
        assert_eq!(c2, b.1);
    }

    #[test]
    fn single_rows() {
        let r = verify_degeneration(&DEGENERATION_CURVES[6], &bind(&[("l", 1), ("m", 1)]), Q);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.limit_label.as_deref(), Some("E[1]"));
        let r = verify_degeneration(&DEGENERATION_CURVES[3], &bind(&[("l", 0), ("m", 1)]), Q);
        assert!(r.pass, "{r:?}");
        assert_eq!(r.limit_label.as_deref(), Some("C"));
        let r = verify_degeneration(&DEGENERATION_CURVES[9], &bind(&[]), Q);
        assert!(r.pass && r.error.is_none(), "{r:?}");
    }

    #[test]
    fn wrong_target_is_reported() {
        let spec = CurveSpec {
            target: "E[inf]",
            ..DEGENERATION_CURVES[6]
        };
        let r = verify_degeneration(&spec, &bind(&[("l", 1), ("m", 1)]), Q);
        assert!(!r.pass && r.error.is_none());
    }

    #[test]
    fn pole_is_reported() {
        let spec = CurveSpec {
            g: "diag(eps, 1, 1)",
            ..DEGENERATION_CURVES[6]
        };
        let r = verify_degeneration(&spec, &bind(&[("l", 1), ("m", 1)]), Q);
        assert!(!r.pass);
        assert!(r.error.unwrap().contains("pole"));
    }

    #[test]
    fn small_grid_passes_and_covers_the_diagrams() {
        let reports = verify_all_curves(&[-1, 0, 1, 2], Q);
        let failures: Vec<String> = reports.iter().filter(|r| !r.pass).map(report_line).collect();
        assert!(failures.is_empty(), "{failures:#?}");
        assert!(family_edge_coverage(&reports).iter().all(|c| c.covered));
        let g = group_edge_coverage(&reports);
        assert!(g.iter().all(|c| c.covered), "{g:?}");
    }

    #[test]
    fn instantiation() {
        let b = bind(&[("l", 2), ("m", -1)]);
        assert_eq!(instantiate("B[l,m]", &b).unwrap(), OrbitLabel::b(2, -1));
        assert_eq!(instantiate("A[inf,l]", &b).unwrap(), OrbitLabel::inf_a(2));
        assert_eq!(instantiate("C", &b).unwrap(), OrbitLabel::C);
        assert_eq!(parameter_instances(&DEGENERATION_CURVES[0], &[0, 1]).len(), 2);
    }
}
