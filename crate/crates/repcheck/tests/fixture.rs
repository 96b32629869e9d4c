//! Golden classification of the shipped synthetic table against expected
//! classes and interval bounds computed independently at 40 digits.

use std::collections::HashMap;
use std::path::Path;

use repcheck::dataset::{load_studies, TableFormat};
use repcheck_core::report::{figure1_rows, figure_s2_rows, SubsetFilter};
use repcheck_core::{build_report, classify_portfolio, Classification, Probability};

const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data");

struct Expected {
    class: Classification,
    lower: f64,
    upper: f64,
}

fn expected() -> HashMap<String, Expected> {
    let mut rdr =
        csv::Reader::from_path(Path::new(DATA).join("synthetic_rpp.expected.csv")).unwrap();
    rdr.records()
        .map(|r| {
            let r = r.unwrap();
            (
                r[0].to_string(),
                Expected {
                    class: r[1].parse().unwrap(),
                    lower: r[2].parse().unwrap(),
                    upper: r[3].parse().unwrap(),
                },
            )
        })
        .collect()
}

fn classified(alpha: f64) -> Vec<repcheck_core::ClassifiedStudy> {
    let table = load_studies(&Path::new(DATA).join("synthetic_rpp.csv"), TableFormat::Csv).unwrap();
    classify_portfolio(&table.records, Probability::new(alpha).unwrap()).unwrap()
}

#[test]
fn per_study_classes_and_bounds_match() {
    let want = expected();
    let got = classified(0.05);
    let mut n = 0;
    for s in &got {
        match (s.outcome, want.get(s.id())) {
            (Some((pi, class)), Some(e)) => {
                assert_eq!(class, e.class, "{}", s.id());
                assert!((pi.lower_r.get() - e.lower).abs() < 1e-9, "{}", s.id());
                assert!((pi.upper_r.get() - e.upper).abs() < 1e-9, "{}", s.id());
                n += 1;
            }
            (None, None) => {}
            (o, e) => panic!(
                "{}: outcome {:?}, expected present {}",
                s.id(),
                o,
                e.is_some()
            ),
        }
    }
    assert_eq!(n, 92);
}

#[test]
fn report_counts() {
    let alpha = Probability::new(0.05).unwrap();
    let got = classified(0.05);
    let report = build_report(&got, &[SubsetFilter::OneDf], alpha);
    let all = report.overall;
    assert_eq!((all.n_total, all.n_classifiable), (100, 92));
    assert_eq!((all.n_below, all.n_inside, all.n_above), (20, 70, 2));
    assert_eq!(all.inside().rounded_percent(), Some(76));
    assert_eq!(all.inside_or_above().rounded_percent(), Some(78));
    let one = report.subset(SubsetFilter::OneDf).unwrap();
    assert_eq!((one.n_classifiable, one.n_inside, one.n_above), (73, 51, 2));
    assert_eq!(one.inside().rounded_percent(), Some(70));
    assert_eq!(one.inside_or_above().rounded_percent(), Some(73));
}

#[test]
fn figure_tables_agree_with_report() {
    let alpha = Probability::new(0.05).unwrap();
    let got = classified(0.05);
    let report = build_report(&got, &[], alpha);
    let fig1 = figure1_rows(&got);
    let fig_s2 = figure_s2_rows(&got);
    assert_eq!(fig1.len() as u32, report.overall.n_classifiable);
    assert_eq!(fig_s2.len() as u32, report.overall.n_classifiable);
    let inside = fig1
        .iter()
        .filter(|r| r.class == Classification::Inside)
        .count() as u32;
    let above = fig_s2
        .iter()
        .filter(|r| r.class == Classification::Above)
        .count() as u32;
    assert_eq!(inside, report.overall.n_inside);
    assert_eq!(inside + above, report.overall.inside_or_above().numerator);
}

// Counts at other levels, from the same independent evaluation.
#[test]
fn counts_shift_with_alpha() {
    for (alpha, all, one_df) in [
        (0.5, (42, 30, 20), (36, 20, 17)),
        (0.2, (35, 47, 10), (30, 35, 8)),
        (0.01, (17, 73, 2), (17, 54, 2)),
    ] {
        let a = Probability::new(alpha).unwrap();
        let report = build_report(&classified(alpha), &[SubsetFilter::OneDf], a);
        let c = report.overall;
        assert_eq!((c.n_below, c.n_inside, c.n_above), all, "alpha {alpha}");
        let c = report.subset(SubsetFilter::OneDf).unwrap();
        assert_eq!((c.n_below, c.n_inside, c.n_above), one_df, "alpha {alpha}");
    }
}
