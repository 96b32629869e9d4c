//! Prediction intervals for a replication correlation and the three-way
//! classification of observed replication effects.
//!
//! The interval is built on the Fisher z scale, where the difference between
//! the original and replication estimates is approximately
//! `N(0, 1/(n_orig - 3) + 1/(n_rep - 3))`, and then mapped back to the
//! correlation scale with `tanh`. The result is symmetric in z but generally
//! asymmetric in r.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::effect::{fisher_z, inverse_fisher_z, Correlation, FisherZ};
use crate::special::{normal_quantile, Probability};
use crate::{Error, Result};

/// Direction of the replication effect relative to the original.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Sign {
    #[default]
    Positive,
    Negative,
}

impl Sign {
    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// One original/replication pair. Any numeric field may be missing.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRecord {
    pub id: String,
    pub r_orig: Option<Correlation>,
    pub n_orig: Option<u32>,
    pub r_rep: Option<Correlation>,
    pub n_rep: Option<u32>,
    pub df1: Option<u32>,
    pub df2: Option<u32>,
    /// Applied to `r_rep` when the table stores replication effects as
    /// magnitudes (as F-derived correlations are). Absent means positive.
    pub sign: Option<Sign>,
    /// Member of the one-degree-of-freedom test subset.
    pub one_df: bool,
}

impl StudyRecord {
    pub fn new(id: impl Into<String>) -> Self {
        StudyRecord {
            id: id.into(),
            r_orig: None,
            n_orig: None,
            r_rep: None,
            n_rep: None,
            df1: None,
            df2: None,
            sign: None,
            one_df: false,
        }
    }

    /// Replication correlation with the recorded sign applied.
    pub fn signed_r_rep(&self) -> Option<Correlation> {
        match (self.r_rep, self.sign.unwrap_or_default()) {
            (Some(r), Sign::Negative) => Some(-r),
            (r, _) => r,
        }
    }

    /// Checks the record invariants that do not depend on missingness.
    pub fn validate(&self) -> Result<()> {
        let invalid = |reason: String| Error::InvalidRecord {
            id: self.id.clone(),
            reason,
        };
        if self.id.is_empty() {
            return Err(invalid("empty id".into()));
        }
        for (name, n) in [("n_orig", self.n_orig), ("n_rep", self.n_rep)] {
            if let Some(n) = n {
                if n <= 3 {
                    return Err(invalid(format!("{name} = {n} must be greater than 3")));
                }
            }
        }
        for (name, df) in [("df1", self.df1), ("df2", self.df2)] {
            if df == Some(0) {
                return Err(invalid(format!("{name} must be at least 1")));
            }
        }
        if self.one_df {
            if let Some(df1) = self.df1 {
                if df1 != 1 {
                    return Err(invalid(format!("one_df_flag set but df1 = {df1}")));
                }
            }
        }
        Ok(())
    }
}

/// A `(1 - alpha)` prediction interval for a replication correlation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionInterval {
    pub lower_r: Correlation,
    pub upper_r: Correlation,
    pub lower_z: f64,
    pub center_z: f64,
    pub upper_z: f64,
    pub se_total: f64,
    pub alpha: Probability,
}

impl PredictionInterval {
    pub fn contains(&self, r: Correlation) -> bool {
        classify(r, self) == Classification::Inside
    }

    pub fn half_width_z(&self) -> f64 {
        self.upper_z - self.center_z
    }
}

/// Where an observed replication effect falls relative to its interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Classification {
    Below,
    Inside,
    Above,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Classification::Below => "below",
            Classification::Inside => "inside",
            Classification::Above => "above",
        }
    }
}

impl core::fmt::Display for Classification {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl core::str::FromStr for Classification {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "below" => Ok(Classification::Below),
            "inside" => Ok(Classification::Inside),
            "above" => Ok(Classification::Above),
            other => Err(Error::Config(format!("unknown classification `{other}`"))),
        }
    }
}

/// Standard error of `z_orig - z_rep`: `sqrt(1/(n_orig - 3) + 1/(n_rep - 3))`.
pub fn se_total(n_orig: u32, n_rep: u32) -> Result<f64> {
    if n_orig <= 3 {
        return Err(Error::domain("n_orig", f64::from(n_orig), "n_orig > 3"));
    }
    if n_rep <= 3 {
        return Err(Error::domain("n_rep", f64::from(n_rep), "n_rep > 3"));
    }
    let var = 1.0 / f64::from(n_orig - 3) + 1.0 / f64::from(n_rep - 3);
    Ok(libm::sqrt(var))
}

/// Prediction interval for the replication correlation given the original.
///
/// Centre `atanh(r_orig)`, half-width `se_total · Φ⁻¹(1 - alpha/2)` on the z
/// scale, bounds mapped back with `tanh`.
pub fn prediction_interval(
    r_orig: Correlation,
    n_orig: u32,
    n_rep: u32,
    alpha: Probability,
) -> Result<PredictionInterval> {
    let alpha = Probability::open(alpha.get())?;
    let se = se_total(n_orig, n_rep)?;
    let center_z = fisher_z(r_orig).get();
    let half = se * normal_quantile(1.0 - 0.5 * alpha.get())?;
    let lower_z = center_z - half;
    let upper_z = center_z + half;
    Ok(PredictionInterval {
        lower_r: inverse_fisher_z(FisherZ::new(lower_z)?)?,
        upper_r: inverse_fisher_z(FisherZ::new(upper_z)?)?,
        lower_z,
        center_z,
        upper_z,
        se_total: se,
        alpha,
    })
}

/// Bounds are inclusive: a replication exactly on a bound is `Inside`.
pub fn classify(r_rep: Correlation, interval: &PredictionInterval) -> Classification {
    let r = r_rep.get();
    if r < interval.lower_r.get() {
        Classification::Below
    } else if r > interval.upper_r.get() {
        Classification::Above
    } else {
        Classification::Inside
    }
}

/// A portfolio entry. `outcome` is `None` when the study lacks one of
/// `r_orig`, `n_orig`, `r_rep`, `n_rep` and was skipped.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedStudy {
    pub record: StudyRecord,
    pub outcome: Option<(PredictionInterval, Classification)>,
}

impl ClassifiedStudy {
    pub fn id(&self) -> &str {
        &self.record.id
    }

    pub fn classification(&self) -> Option<Classification> {
        self.outcome.map(|(_, c)| c)
    }

    pub fn interval(&self) -> Option<&PredictionInterval> {
        self.outcome.as_ref().map(|(pi, _)| pi)
    }
}

/// Classify one study, or `Ok(None)` if it is missing a required field.
pub fn classify_study(
    record: &StudyRecord,
    alpha: Probability,
) -> Result<Option<(PredictionInterval, Classification)>> {
    record.validate()?;
    let (Some(r_orig), Some(n_orig), Some(r_rep), Some(n_rep)) = (
        record.r_orig,
        record.n_orig,
        record.signed_r_rep(),
        record.n_rep,
    ) else {
        return Ok(None);
    };
    let pi =
        prediction_interval(r_orig, n_orig, n_rep, alpha).map_err(|e| Error::InvalidRecord {
            id: record.id.clone(),
            reason: format!("{e}"),
        })?;
    Ok(Some((pi, classify(r_rep, &pi))))
}

/// Classify every study in input order. Missing data is a skip; an invariant
/// violation is an error naming the record.
pub fn classify_portfolio(
    studies: &[StudyRecord],
    alpha: Probability,
) -> Result<Vec<ClassifiedStudy>> {
    studies
        .iter()
        .map(|record| {
            Ok(ClassifiedStudy {
                outcome: classify_study(record, alpha)?,
                record: record.clone(),
            })
        })
        .collect()
}
