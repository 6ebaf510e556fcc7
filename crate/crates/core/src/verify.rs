//! End-to-end verification of the embedded tables and diagrams on a parameter
//! grid.

use rayon::prelude::*;
use serde::Serialize;

use crate::curves::{
    family_edge_coverage, group_edge_coverage, report_line, verify_curves, CurveReport, CurveSpec, DEGENERATION_CURVES,
    GROUP_CURVES, SUPPLEMENTARY_CURVES,
};
use crate::error::Result;
use crate::group::{
    classify_g, classify_gl32, deg_le_g, deg_le_gl32, g_hasse, gl32_hasse, hesselink_stratum, label_orbit_dim,
    stratum_hasse, stratum_le, GL32Label, GLabel, Stratum,
};
use crate::label::{Letter, OrbitLabel};
use crate::order::{deg_le_labels, family_hasse, find_rank_witness};
use crate::scalar::Field;
use crate::tables::{verify_witness_rows, RowCheck, HOM_ROWS, SEPARATION_ROWS};

/// The grid used when none is given.
pub const DEFAULT_GRID: [i64; 6] = [-2, -1, 0, 1, 2, 3];

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: usize,
    pub total: usize,
    pub failures: Vec<String>,
}

impl Check {
    fn from_results(name: &'static str, results: impl IntoIterator<Item = (bool, String)>) -> Check {
        let mut check = Check {
            name,
            passed: 0,
            total: 0,
            failures: Vec::new(),
        };
        for (ok, line) in results {
            check.total += 1;
            if ok {
                check.passed += 1;
            } else {
                check.failures.push(line);
            }
        }
        check
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PaperReport {
    pub grid: Vec<i64>,
    pub checks: Vec<Check>,
}

impl PaperReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(Check::pass)
    }
}

fn row_line(c: &RowCheck) -> String {
    format!(
        "{:?} row {} {} -> {}: phi = {}, ranks {} / {}",
        c.table, c.row, c.source, c.target, c.phi, c.rank_source, c.rank_target
    )
}

fn curve_check(name: &'static str, specs: &[CurveSpec], grid: &[i64]) -> (Check, Vec<CurveReport>) {
    let refs: Vec<&CurveSpec> = specs.iter().collect();
    let reports = verify_curves(&refs, grid, Field::Rational);
    let check = Check::from_results(name, reports.iter().map(|r| (r.pass, report_line(r))));
    (check, reports)
}

/// Expected orbit dimension of a class, read off the levels of the orbit
/// diagram.
pub fn diagram_level(l: &OrbitLabel) -> usize {
    match l.letter() {
        Letter::A => 7,
        Letter::B | Letter::C | Letter::D => 6,
        Letter::E => 4,
        Letter::O => 0,
    }
}

fn dimension_check(labels: &[OrbitLabel]) -> Result<Check> {
    let mut results = Vec::new();
    for l in labels {
        let d = label_orbit_dim(l)?;
        results.push((
            d == diagram_level(l),
            format!("{l}: orbit dimension {d}, level {}", diagram_level(l)),
        ));
    }
    let pairs: Vec<(&OrbitLabel, &OrbitLabel)> = labels
        .iter()
        .flat_map(|a| labels.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .collect();
    for (a, b) in pairs {
        if deg_le_labels(a, b)? {
            let (da, db) = (label_orbit_dim(a)?, label_orbit_dim(b)?);
            results.push((da > db, format!("{a} -> {b}: dimensions {da} and {db}")));
        }
    }
    Ok(Check::from_results("orbit dimensions", results))
}

fn group_dimension_check() -> Result<Check> {
    let mut results = Vec::new();
    let g_levels = [9, 8, 8, 8, 7, 6, 7, 6, 6, 5, 4, 0];
    for (g, want) in GLabel::ALL.into_iter().zip(g_levels) {
        let d = g.dimension()?;
        results.push((d == want, format!("G-orbit {g}: dimension {d}, level {want}")));
    }
    for (a, b) in g_hasse().edges() {
        let (ga, gb): (GLabel, GLabel) = (a.parse()?, b.parse()?);
        let (da, db) = (ga.dimension()?, gb.dimension()?);
        results.push((da > db, format!("G-edge {a} -> {b}: dimensions {da} and {db}")));
    }
    let gl32_levels = [9, 8, 7, 6, 6, 5, 0];
    for (g, want) in GL32Label::ALL.into_iter().zip(gl32_levels) {
        let d = g.dimension()?;
        results.push((d == want, format!("GL3xGL2-orbit {g}: dimension {d}, level {want}")));
    }
    for (a, b) in gl32_hasse().edges() {
        let (ga, gb): (GL32Label, GL32Label) = (a.parse()?, b.parse()?);
        let (da, db) = (ga.dimension()?, gb.dimension()?);
        results.push((da > db, format!("GL3xGL2-edge {a} -> {b}: dimensions {da} and {db}")));
    }
    for (a, b) in stratum_hasse().edges() {
        let (sa, sb): (Stratum, Stratum) = (a.parse()?, b.parse()?);
        results.push((
            sa.dimension() > sb.dimension(),
            format!(
                "stratum edge {a} -> {b}: dimensions {} and {}",
                sa.dimension(),
                sb.dimension()
            ),
        ));
    }
    Ok(Check::from_results("coarser orbit dimensions", results))
}

fn coarsening_check(labels: &[OrbitLabel]) -> Result<Check> {
    let results: Vec<Result<(bool, String)>> = labels
        .par_iter()
        .flat_map_iter(|a| labels.iter().map(move |b| (a, b)))
        .map(|(a, b)| {
            if !deg_le_labels(a, b)? {
                return Ok((true, String::new()));
            }
            let (ga, gb) = (classify_g(a)?, classify_g(b)?);
            let (ha, hb) = (classify_gl32(a)?, classify_gl32(b)?);
            let (sa, sb) = (hesselink_stratum(a)?, hesselink_stratum(b)?);
            let ok = deg_le_g(ga, gb) && deg_le_gl32(ha, hb) && stratum_le(sa, sb);
            Ok((
                ok,
                format!("{a} -> {b}: G {ga} -> {gb}, GL3xGL2 {ha} -> {hb}, strata {sa} -> {sb}"),
            ))
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Check::from_results("coarsening and strata", results))
}

/// Every ordered pair of distinct classes is either a degeneration or is
/// separated by a rank witness.
pub fn completeness_check(labels: &[OrbitLabel]) -> Result<Check> {
    let results: Vec<Result<(bool, String)>> = labels
        .par_iter()
        .flat_map_iter(|a| labels.iter().map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| {
            let deg = deg_le_labels(a, b)?;
            let witness = find_rank_witness(a, b, Field::Rational)?;
            let ok = deg != witness.is_some();
            let desc = match &witness {
                Some(w) => format!("witness {} with ranks {} < {}", w.phi, w.rank_source, w.rank_target),
                None => "no witness".into(),
            };
            Ok((ok, format!("{a} vs {b}: degeneration {deg}, {desc}")))
        })
        .collect();
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Check::from_results("order completeness", results))
}

/// Run every check on the grid.
pub fn verify_paper(grid: &[i64]) -> Result<PaperReport> {
    let labels = OrbitLabel::grid(grid);
    let mut checks = Vec::new();
    let sep = verify_witness_rows(&SEPARATION_ROWS, grid, Field::Rational)?;
    checks.push(Check::from_results(
        "orbit separation table",
        sep.iter().map(|c| (c.pass, row_line(c))),
    ));
    let hom = verify_witness_rows(&HOM_ROWS, grid, Field::Rational)?;
    checks.push(Check::from_results(
        "hom order table",
        hom.iter().map(|c| (c.pass, row_line(c))),
    ));

    let (c1, r1) = curve_check("degeneration curves", &DEGENERATION_CURVES, grid);
    let (c2, r2) = curve_check("GL3 x H curves", &GROUP_CURVES, grid);
    let (c3, r3) = curve_check("supplementary curves", &SUPPLEMENTARY_CURVES, grid);
    checks.extend([c1, c2, c3]);
    let reports: Vec<CurveReport> = r1.into_iter().chain(r2).chain(r3).collect();
    let fam = family_edge_coverage(&reports);
    checks.push(Check::from_results(
        "orbit diagram edges realized",
        fam.iter().map(|c| (c.covered, format!("{} -> {}", c.from, c.to))),
    ));
    let grp = group_edge_coverage(&reports);
    checks.push(Check::from_results(
        "GL3 x H diagram edges realized",
        grp.iter().map(|c| (c.covered, format!("{} -> {}", c.from, c.to))),
    ));
    let fam_reduced = family_hasse().is_reduced() && g_hasse().is_reduced() && gl32_hasse().is_reduced();
    checks.push(Check::from_results(
        "diagrams are Hasse diagrams",
        [(
            fam_reduced && stratum_hasse().is_reduced(),
            "some edge is implied by others".to_string(),
        )],
    ));

    checks.push(dimension_check(&labels)?);
    checks.push(group_dimension_check()?);
    checks.push(coarsening_check(&labels)?);
    checks.push(completeness_check(&labels)?);
    Ok(PaperReport {
        grid: grid.to_vec(),
        checks,
    })
}
