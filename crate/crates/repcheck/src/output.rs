//! CSV and JSON renderings of reports, plot data and simulation results.
//!
//! CSV headers:
//!
//! | table        | header                                                         |
//! |--------------|----------------------------------------------------------------|
//! | report       | `subset,alpha,n_total,n_classifiable,n_below,n_inside,n_above,inside,inside_pct,inside_or_above,inside_or_above_pct` |
//! | figure 1     | `id,r_orig,r_rep,pi_lower,pi_upper,class`                      |
//! | figure S2    | `id,n_orig,n_rep,class`                                        |
//! | figure S1    | `fraction,count`                                               |
//! | per sim      | `sim,fraction`                                                 |
//! | per study    | `id,significant,n_sims,fraction`                               |
//! | imputation   | `id,field,value,source`                                        |
//!
//! Ratios are written as `numerator/denominator`; percents are integers
//! rounded half up. Floats use the shortest representation that round-trips.

use std::io::Write;

use repcheck_core::report::{HistogramBin, SubsetFilter};
use repcheck_core::{
    AnalysisReport, Counts, Figure1Row, FigureS2Row, ImputationEntry, Ratio, SimulationResult,
};
use serde::Serialize;

pub const REPORT_HEADER: [&str; 11] = [
    "subset",
    "alpha",
    "n_total",
    "n_classifiable",
    "n_below",
    "n_inside",
    "n_above",
    "inside",
    "inside_pct",
    "inside_or_above",
    "inside_or_above_pct",
];
pub const FIGURE1_HEADER: [&str; 6] = ["id", "r_orig", "r_rep", "pi_lower", "pi_upper", "class"];
pub const FIGURE_S2_HEADER: [&str; 4] = ["id", "n_orig", "n_rep", "class"];
pub const FIGURE_S1_HEADER: [&str; 2] = ["fraction", "count"];

fn ratio_str(r: Ratio) -> String {
    format!("{}/{}", r.numerator, r.denominator)
}

fn pct_str(r: Ratio) -> String {
    r.rounded_percent()
        .map_or_else(|| "NA".into(), |p| p.to_string())
}

fn counts_row(name: &str, alpha: f64, c: &Counts) -> Vec<String> {
    vec![
        name.to_string(),
        alpha.to_string(),
        c.n_total.to_string(),
        c.n_classifiable.to_string(),
        c.n_below.to_string(),
        c.n_inside.to_string(),
        c.n_above.to_string(),
        ratio_str(c.inside()),
        pct_str(c.inside()),
        ratio_str(c.inside_or_above()),
        pct_str(c.inside_or_above()),
    ]
}

/// `selection` names the studies the overall counts cover.
pub fn write_report_csv<W: Write>(
    report: &AnalysisReport,
    selection: SubsetFilter,
    w: W,
) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(REPORT_HEADER)?;
    let alpha = report.alpha.get();
    w.write_record(counts_row(selection.name(), alpha, &report.overall))?;
    for s in &report.subsets {
        w.write_record(counts_row(s.filter.name(), alpha, &s.counts))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_figure1_csv<W: Write>(rows: &[Figure1Row], w: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(FIGURE1_HEADER)?;
    for r in rows {
        w.write_record([
            r.id.clone(),
            r.r_orig.to_string(),
            r.r_rep.to_string(),
            r.pi_lower.to_string(),
            r.pi_upper.to_string(),
            r.class.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_figure_s2_csv<W: Write>(rows: &[FigureS2Row], w: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(FIGURE_S2_HEADER)?;
    for r in rows {
        w.write_record([
            r.id.clone(),
            r.n_orig.to_string(),
            r.n_rep.to_string(),
            r.class.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_figure_s1_csv<W: Write>(bins: &[HistogramBin], w: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(FIGURE_S1_HEADER)?;
    for b in bins {
        w.write_record([b.fraction.to_string(), b.count.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sim_fractions_csv<W: Write>(sim: &SimulationResult, w: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["sim", "fraction"])?;
    for (i, f) in sim.per_sim_significant_fraction.iter().enumerate() {
        w.write_record([(i + 1).to_string(), f.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_sim_studies_csv<W: Write>(sim: &SimulationResult, w: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["id", "significant", "n_sims", "fraction"])?;
    let n = sim.config.n_sims;
    for c in &sim.per_study {
        w.write_record([
            c.id.clone(),
            c.significant.to_string(),
            n.to_string(),
            (f64::from(c.significant) / f64::from(n)).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_imputation_csv<W: Write>(log: &[ImputationEntry], w: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(w);
    w.write_record(["id", "field", "value", "source"])?;
    for e in log {
        w.write_record([
            e.id.clone(),
            e.field.as_str().to_string(),
            e.value.to_string(),
            e.source.as_str().to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct RatioJson {
    pub numerator: u32,
    pub denominator: u32,
    pub percent: Option<u32>,
}

impl From<Ratio> for RatioJson {
    fn from(r: Ratio) -> Self {
        RatioJson {
            numerator: r.numerator,
            denominator: r.denominator,
            percent: r.rounded_percent(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CountsJson {
    pub subset: &'static str,
    pub n_total: u32,
    pub n_classifiable: u32,
    pub n_below: u32,
    pub n_inside: u32,
    pub n_above: u32,
    pub inside: RatioJson,
    pub inside_or_above: RatioJson,
}

impl CountsJson {
    pub fn new(subset: SubsetFilter, c: &Counts) -> Self {
        CountsJson {
            subset: subset.name(),
            n_total: c.n_total,
            n_classifiable: c.n_classifiable,
            n_below: c.n_below,
            n_inside: c.n_inside,
            n_above: c.n_above,
            inside: c.inside().into(),
            inside_or_above: c.inside_or_above().into(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Figure1Json<'a> {
    pub id: &'a str,
    pub r_orig: f64,
    pub r_rep: f64,
    pub pi_lower: f64,
    pub pi_upper: f64,
    pub class: &'static str,
}

#[derive(Debug, Serialize)]
pub struct FigureS2Json<'a> {
    pub id: &'a str,
    pub n_orig: u32,
    pub n_rep: u32,
    pub class: &'static str,
}

#[derive(Debug, Serialize)]
pub struct WarningJson<'a> {
    pub line: u64,
    pub message: &'a str,
}

#[derive(Debug, Serialize)]
pub struct AnalysisJson<'a, C: Serialize> {
    pub config: &'a C,
    pub report: Vec<CountsJson>,
    pub figure1: Vec<Figure1Json<'a>>,
    pub figure_s2: Vec<FigureS2Json<'a>>,
    pub warnings: Vec<WarningJson<'a>>,
}

pub fn analysis_json<'a, C: Serialize>(
    config: &'a C,
    report: &AnalysisReport,
    selection: SubsetFilter,
    figure1: &'a [Figure1Row],
    figure_s2: &'a [FigureS2Row],
    warnings: &'a [crate::dataset::ParseWarning],
) -> AnalysisJson<'a, C> {
    let mut counts = vec![CountsJson::new(selection, &report.overall)];
    counts.extend(
        report
            .subsets
            .iter()
            .map(|s| CountsJson::new(s.filter, &s.counts)),
    );
    AnalysisJson {
        config,
        report: counts,
        figure1: figure1
            .iter()
            .map(|r| Figure1Json {
                id: &r.id,
                r_orig: r.r_orig,
                r_rep: r.r_rep,
                pi_lower: r.pi_lower,
                pi_upper: r.pi_upper,
                class: r.class.as_str(),
            })
            .collect(),
        figure_s2: figure_s2
            .iter()
            .map(|r| FigureS2Json {
                id: &r.id,
                n_orig: r.n_orig,
                n_rep: r.n_rep,
                class: r.class.as_str(),
            })
            .collect(),
        warnings: warnings
            .iter()
            .map(|w| WarningJson {
                line: w.line,
                message: &w.message,
            })
            .collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct StudyCountJson<'a> {
    pub id: &'a str,
    pub significant: u32,
}

#[derive(Debug, Serialize)]
pub struct BinJson {
    pub fraction: f64,
    pub count: u32,
}

#[derive(Debug, Serialize)]
pub struct ImputationJson<'a> {
    pub id: &'a str,
    pub field: &'static str,
    pub value: f64,
    pub source: &'static str,
}

#[derive(Debug, Serialize)]
pub struct SimulationJson<'a, C: Serialize> {
    pub config: &'a C,
    pub n_studies: usize,
    pub per_study: Vec<StudyCountJson<'a>>,
    pub per_sim_significant_fraction: &'a [f64],
    pub figure_s1: Vec<BinJson>,
    pub imputation_log: Vec<ImputationJson<'a>>,
}

pub fn simulation_json<'a, C: Serialize>(
    config: &'a C,
    sim: &'a SimulationResult,
    bins: &[HistogramBin],
) -> SimulationJson<'a, C> {
    SimulationJson {
        config,
        n_studies: sim.per_study.len(),
        per_study: sim
            .per_study
            .iter()
            .map(|c| StudyCountJson {
                id: &c.id,
                significant: c.significant,
            })
            .collect(),
        per_sim_significant_fraction: &sim.per_sim_significant_fraction,
        figure_s1: bins
            .iter()
            .map(|b| BinJson {
                fraction: b.fraction,
                count: b.count,
            })
            .collect(),
        imputation_log: sim
            .imputation_log
            .iter()
            .map(|e| ImputationJson {
                id: &e.id,
                field: e.field.as_str(),
                value: e.value,
                source: e.source.as_str(),
            })
            .collect(),
    }
}
