//! Aggregate counts and plot-data rows for classified portfolios and
//! simulation results. Everything here is plain data; serialization lives in
//! the `repcheck` crate.

use alloc::string::String;
use alloc::vec::Vec;

use crate::interval::{Classification, ClassifiedStudy};
use crate::simulation::SimulationResult;
use crate::special::Probability;

/// An exact fraction with a half-up integer percent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ratio {
    pub numerator: u32,
    pub denominator: u32,
}

impl Ratio {
    pub fn new(numerator: u32, denominator: u32) -> Self {
        Ratio {
            numerator,
            denominator,
        }
    }

    pub fn fraction(self) -> Option<f64> {
        (self.denominator > 0).then(|| f64::from(self.numerator) / f64::from(self.denominator))
    }

    /// `round(100 · n / d)` with ties rounded up, computed in integers.
    pub fn rounded_percent(self) -> Option<u32> {
        if self.denominator == 0 {
            return None;
        }
        let (n, d) = (u64::from(self.numerator), u64::from(self.denominator));
        Some(((200 * n + d) / (2 * d)) as u32)
    }
}

/// Which studies a set of counts covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubsetFilter {
    All,
    /// Studies flagged as one-degree-of-freedom tests.
    OneDf,
}

impl SubsetFilter {
    pub fn name(self) -> &'static str {
        match self {
            SubsetFilter::All => "all",
            SubsetFilter::OneDf => "one_df",
        }
    }

    pub fn matches(self, study: &ClassifiedStudy) -> bool {
        match self {
            SubsetFilter::All => true,
            SubsetFilter::OneDf => study.record.one_df,
        }
    }
}

impl core::str::FromStr for SubsetFilter {
    type Err = crate::Error;
    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "all" => Ok(SubsetFilter::All),
            "one_df" => Ok(SubsetFilter::OneDf),
            other => Err(crate::Error::Config(alloc::format!(
                "unknown subset `{other}`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub n_total: u32,
    pub n_classifiable: u32,
    pub n_below: u32,
    pub n_inside: u32,
    pub n_above: u32,
}

impl Counts {
    pub fn tally<'a>(studies: impl IntoIterator<Item = &'a ClassifiedStudy>) -> Self {
        let mut c = Counts::default();
        for s in studies {
            c.n_total += 1;
            if let Some(class) = s.classification() {
                c.n_classifiable += 1;
                match class {
                    Classification::Below => c.n_below += 1,
                    Classification::Inside => c.n_inside += 1,
                    Classification::Above => c.n_above += 1,
                }
            }
        }
        c
    }

    pub fn inside(&self) -> Ratio {
        Ratio::new(self.n_inside, self.n_classifiable)
    }

    /// Replications at least as strong as predicted count as consistent.
    pub fn inside_or_above(&self) -> Ratio {
        Ratio::new(self.n_inside + self.n_above, self.n_classifiable)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubsetReport {
    pub filter: SubsetFilter,
    pub counts: Counts,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisReport {
    pub alpha: Probability,
    pub overall: Counts,
    pub subsets: Vec<SubsetReport>,
}

impl AnalysisReport {
    pub fn subset(&self, filter: SubsetFilter) -> Option<&Counts> {
        self.subsets
            .iter()
            .find(|s| s.filter == filter)
            .map(|s| &s.counts)
    }
}

pub fn build_report(
    classified: &[ClassifiedStudy],
    filters: &[SubsetFilter],
    alpha: Probability,
) -> AnalysisReport {
    AnalysisReport {
        alpha,
        overall: Counts::tally(classified),
        subsets: filters
            .iter()
            .map(|&filter| SubsetReport {
                filter,
                counts: Counts::tally(classified.iter().filter(|s| filter.matches(s))),
            })
            .collect(),
    }
}

/// Original vs replication effect with the interval around each original.
#[derive(Debug, Clone, PartialEq)]
pub struct Figure1Row {
    pub id: String,
    pub r_orig: f64,
    pub r_rep: f64,
    pub pi_lower: f64,
    pub pi_upper: f64,
    pub class: Classification,
}

pub fn figure1_rows(classified: &[ClassifiedStudy]) -> Vec<Figure1Row> {
    classified
        .iter()
        .filter_map(|s| {
            let (pi, class) = s.outcome?;
            Some(Figure1Row {
                id: s.record.id.clone(),
                r_orig: s.record.r_orig?.get(),
                r_rep: s.record.signed_r_rep()?.get(),
                pi_lower: pi.lower_r.get(),
                pi_upper: pi.upper_r.get(),
                class,
            })
        })
        .collect()
}

/// Original vs replication sample size, coloured by classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureS2Row {
    pub id: String,
    pub n_orig: u32,
    pub n_rep: u32,
    pub class: Classification,
}

pub fn figure_s2_rows(classified: &[ClassifiedStudy]) -> Vec<FigureS2Row> {
    classified
        .iter()
        .filter_map(|s| {
            Some(FigureS2Row {
                id: s.record.id.clone(),
                n_orig: s.record.n_orig?,
                n_rep: s.record.n_rep?,
                class: s.classification()?,
            })
        })
        .collect()
}

/// One bar of the per-simulation significant-fraction histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramBin {
    pub fraction: f64,
    pub count: u32,
}

/// Distinct per-simulation fractions in ascending order with their
/// multiplicities. Counts sum to `n_sims`.
pub fn figure_s1_histogram(sim: &SimulationResult) -> Vec<HistogramBin> {
    let mut sorted = sim.per_sim_significant_fraction.clone();
    sorted.sort_by(f64::total_cmp);
    let mut bins: Vec<HistogramBin> = Vec::new();
    for f in sorted {
        match bins.last_mut() {
            Some(bin) if bin.fraction == f => bin.count += 1,
            _ => bins.push(HistogramBin {
                fraction: f,
                count: 1,
            }),
        }
    }
    bins
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effect::Correlation;
    use crate::interval::{classify_portfolio, StudyRecord};
    use alloc::vec;

    #[test]
    fn ratio_rounding() {
        assert_eq!(Ratio::new(51, 73).rounded_percent(), Some(70));
        assert_eq!(Ratio::new(53, 73).rounded_percent(), Some(73));
        assert_eq!(Ratio::new(1, 8).rounded_percent(), Some(13));
        assert_eq!(Ratio::new(1, 200).rounded_percent(), Some(1));
        assert_eq!(Ratio::new(0, 0).rounded_percent(), None);
        assert_eq!(Ratio::new(3, 3).rounded_percent(), Some(100));
    }

    fn rec(id: &str, r_orig: f64, r_rep: Option<f64>, one_df: bool) -> StudyRecord {
        let mut s = StudyRecord::new(id);
        s.r_orig = Some(Correlation::new(r_orig).unwrap());
        s.n_orig = Some(50);
        s.r_rep = r_rep.map(|r| Correlation::new(r).unwrap());
        s.n_rep = Some(50);
        s.one_df = one_df;
        s
    }

    #[test]
    fn counts_and_subsets() {
        let alpha = Probability::new(0.05).unwrap();
        let studies = vec![
            rec("a", 0.3, Some(0.3), true),
            rec("b", 0.3, Some(0.7), true),
            rec("c", 0.3, Some(-0.2), false),
            rec("d", 0.3, None, false),
        ];
        let classified = classify_portfolio(&studies, alpha).unwrap();
        let report = build_report(&classified, &[SubsetFilter::OneDf], alpha);
        assert_eq!(
            report.overall,
            Counts {
                n_total: 4,
                n_classifiable: 3,
                n_below: 1,
                n_inside: 1,
                n_above: 1
            }
        );
        assert_eq!(report.overall.inside_or_above(), Ratio::new(2, 3));
        let one_df = report.subset(SubsetFilter::OneDf).unwrap();
        assert_eq!(one_df.n_classifiable, 2);
        assert_eq!(one_df.inside().rounded_percent(), Some(50));
        assert!(report.subset(SubsetFilter::All).is_none());

        assert_eq!(figure1_rows(&classified).len(), 3);
        assert_eq!(figure_s2_rows(&classified).len(), 3);
    }

    #[test]
    fn all_inside_is_full_percent() {
        let alpha = Probability::new(0.05).unwrap();
        let studies = vec![
            rec("a", 0.3, Some(0.3), false),
            rec("b", 0.1, Some(0.1), false),
        ];
        let report = build_report(&classify_portfolio(&studies, alpha).unwrap(), &[], alpha);
        assert_eq!(report.overall.inside().rounded_percent(), Some(100));
    }

    #[test]
    fn empty_portfolio_has_no_rows() {
        assert!(figure1_rows(&[]).is_empty());
        assert!(figure_s2_rows(&[]).is_empty());
    }
}
