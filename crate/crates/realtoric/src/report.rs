//! End-to-end maximality checking and the machine-readable report format.
//!
//! A check builds the orbit complex and the exterior complex of a validated
//! fan, runs the filtration spectral sequence, asserts the structural ties
//! between the two sides, and certifies maximality exactly when the
//! filtration spectral sequence degenerates at page one: the total mod-2
//! Betti number of the real part then attains the Thom–Smith bound, so it
//! equals the total Betti number of the complex points.
//!
//! When degeneration fails the verdict is `undetermined`, never "not
//! maximal": the bound compares against the second page, which may itself
//! overshoot the complex variety's homology.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::exterior::ExteriorComplex;
use crate::fan::Fan;
use crate::orbit::OrbitComplex;
use crate::spectral::{compute_pages, verify_g0_matches_e1, verify_g1_equals_e2, FilteredView};
use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    MaximalCertified,
    Undetermined,
}

/// Shape of the input fan, for report headers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FanSummary {
    pub cones_by_dim: Vec<usize>,
    pub lattice_dim: usize,
    pub num_rays: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct E2Summary {
    /// Nonzero dimensions as (p, q, dim), sorted.
    pub dims: Vec<(usize, usize, usize)>,
    pub sum: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PageSummary {
    /// Nonzero differential ranks as (p, q, rank), sorted.
    pub diff_ranks: Vec<(usize, usize, usize)>,
    /// Nonzero dimensions as (p, q, dim), sorted.
    pub dims: Vec<(usize, usize, usize)>,
    pub r: usize,
}

/// Everything the pipeline certifies about one fan. Serialization is
/// canonical: keys sorted, entries in (p, q, r) order, so identical inputs
/// produce identical report bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaximalityReport {
    pub betti_real: Vec<usize>,
    pub betti_real_sum: usize,
    pub degenerate_at_one: bool,
    pub e2: E2Summary,
    pub fan: FanSummary,
    pub pages: Vec<PageSummary>,
    /// The lifting condition at every position, as (p, q, holds).
    pub s_conditions: Vec<(usize, usize, bool)>,
    pub verdict: Verdict,
}

impl MaximalityReport {
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self, Error> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Runs the whole pipeline on a validated fan. `max_r` extends the page
/// range beyond the default of n+2; fewer pages are never computed since
/// the verdict needs the stable range.
pub fn run_check_fan(fan: &Fan, max_r: Option<usize>) -> Result<MaximalityReport, Error> {
    let violations = fan.validate();
    if !violations.is_empty() {
        let listing = violations
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        return Err(Error::InvalidFan(listing));
    }
    let n = fan.dim();
    let cx = OrbitComplex::build(fan);
    let ext = ExteriorComplex::build(fan);
    let view = FilteredView::new(&cx);
    let r_max = max_r.unwrap_or(0).max(n + 2);
    let report = compute_pages(&view, r_max);

    // structural ties between the two complexes; a failure here is a bug,
    // not a property of the input
    for p in 0..=n {
        let total: usize = (0..=n).map(|q| ext.dim_e1(p, q)).sum();
        if total != cx.dim_a(p) {
            return Err(Error::Consistency(format!(
                "exterior columns sum to {total} but chain degree {p} has dimension {}",
                cx.dim_a(p)
            )));
        }
    }
    if !verify_g0_matches_e1(&cx, &ext) {
        return Err(Error::Consistency(
            "page zero does not match the exterior term".into(),
        ));
    }
    let e2 = ext.e2_dims();
    if !verify_g1_equals_e2(&report, &e2) {
        return Err(Error::Consistency(
            "page one does not match exterior homology".into(),
        ));
    }
    let betti = cx.betti_real();
    if report.limit_dims_by_degree() != betti {
        return Err(Error::Consistency(
            "stable page does not converge to the Betti numbers".into(),
        ));
    }

    let betti_sum: usize = betti.iter().sum();
    let e2_dims: Vec<(usize, usize, usize)> =
        e2.entries().map(|((p, q), d)| (p, q, d)).collect();
    let e2_sum = e2.total();
    assert!(betti_sum <= e2_sum, "total bound violated");

    let pages = report
        .pages()
        .iter()
        .map(|page| PageSummary {
            diff_ranks: page
                .diff_ranks
                .iter()
                .map(|(&(p, q), &rank)| (p, q, rank))
                .collect(),
            dims: page.dims.iter().map(|(&(p, q), &d)| (p, q, d)).collect(),
            r: page.r,
        })
        .collect();
    let s_conditions = report
        .s_table()
        .iter()
        .map(|(&(p, q), &ok)| (p, q, ok))
        .collect();
    let degenerate = report.degenerates_at_one();

    Ok(MaximalityReport {
        betti_real: betti,
        betti_real_sum: betti_sum,
        degenerate_at_one: degenerate,
        e2: E2Summary {
            dims: e2_dims,
            sum: e2_sum,
        },
        fan: FanSummary {
            cones_by_dim: fan.cone_counts_by_dim(),
            lattice_dim: n,
            num_rays: fan.rays().len(),
        },
        pages,
        s_conditions,
        verdict: if degenerate {
            Verdict::MaximalCertified
        } else {
            Verdict::Undetermined
        },
    })
}

/// Reads, parses, validates and checks a fan file.
pub fn run_check_file(path: &Path, max_r: Option<usize>) -> Result<MaximalityReport, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let fan = Fan::parse(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    run_check_fan(&fan, max_r)
}

/// Writes the canonical JSON form of a report.
pub fn emit_report(report: &MaximalityReport, path: &Path) -> Result<(), Error> {
    fs::write(path, report.to_json_string())?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::Builtin;

    fn projective(k: usize) -> Fan {
        Fan::builtin(&Builtin::Projective { k }).unwrap()
    }

    #[test]
    fn projective_spaces_are_certified() {
        for k in 1..=3 {
            let report = run_check_fan(&projective(k), None).unwrap();
            assert_eq!(report.verdict, Verdict::MaximalCertified);
            assert_eq!(report.betti_real_sum, k + 1);
            assert_eq!(report.e2.sum, k + 1);
            assert_eq!(report.betti_real, vec![1; k + 1]);
        }
    }

    #[test]
    fn torus_product_report() {
        let p1 = projective(1);
        let fan = Fan::product(&p1, &p1).unwrap();
        let report = run_check_fan(&fan, None).unwrap();
        assert_eq!(report.betti_real_sum, 4);
        assert_eq!(report.e2.sum, 4);
        assert_eq!(report.verdict, Verdict::MaximalCertified);
        assert!(report.degenerate_at_one);
    }

    #[test]
    fn verdict_tracks_degeneration_flag() {
        let report = run_check_fan(&projective(2), None).unwrap();
        assert_eq!(
            report.verdict == Verdict::MaximalCertified,
            report.degenerate_at_one
        );
        // the bound always holds
        assert!(report.betti_real_sum <= report.e2.sum);
    }

    #[test]
    fn report_round_trips_byte_for_byte() {
        let report = run_check_fan(&projective(2), None).unwrap();
        let text = report.to_json_string();
        let parsed = MaximalityReport::from_json_str(&text).unwrap();
        assert_eq!(parsed, report);
        assert_eq!(parsed.to_json_string(), text);
    }

    #[test]
    fn identical_runs_produce_identical_bytes() {
        let fan = Fan::builtin(&Builtin::WeightedP112).unwrap();
        let a = run_check_fan(&fan, None).unwrap().to_json_string();
        let b = run_check_fan(&fan, None).unwrap().to_json_string();
        assert_eq!(a, b);
    }

    #[test]
    fn invalid_fans_are_rejected_with_positions() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(&path, "{\"lattice_dim\": 1,\n \"rays\": [[0]], \"cones\": []}").unwrap();
        let err = run_check_file(&path, None).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("bad.json") && msg.contains("rays[0]"), "{msg}");

        let path2 = dir.path().join("syntax.json");
        std::fs::write(&path2, "{ not json").unwrap();
        let msg2 = run_check_file(&path2, None).unwrap_err().to_string();
        assert!(msg2.contains("line"), "{msg2}");
    }

    #[test]
    fn max_r_extends_but_never_truncates() {
        let fan = projective(2);
        let low = run_check_fan(&fan, Some(1)).unwrap();
        assert!(low.pages.len() >= fan.dim() + 3);
        let high = run_check_fan(&fan, Some(7)).unwrap();
        assert_eq!(high.pages.len(), 8);
        assert_eq!(high.verdict, low.verdict);
    }
}
