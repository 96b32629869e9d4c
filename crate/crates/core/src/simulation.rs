//! Monte Carlo under the hypothesis that every original effect is the truth.
//!
//! For each study and simulation index a replicate Fisher z is drawn from
//! `N(atanh(r_orig), 1/(n_rep - 3))`, mapped back to a correlation, converted
//! to an `F(1, df2)` statistic and tested at `alpha_sig`. Counting how often
//! each study comes out significant, and what fraction of the portfolio is
//! significant in each simulation, shows how much a P-value based notion of
//! replication moves when nothing at all is wrong with the replications.
//!
//! Randomness is counter based: study `id` under seed `s` owns ChaCha stream
//! `fnv1a(id)` of key `s`, and simulation `i` consumes its `i`-th word pair.
//! Results therefore do not depend on study order or on how work is split
//! across threads.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::effect::{correlation_to_f, fisher_z, inverse_fisher_z, Correlation, FisherZ};
use crate::interval::{classify, prediction_interval, Classification, StudyRecord};
use crate::special::{f_tail_probability, normal_quantile, Probability};
use crate::stats::median;
use crate::{Error, Result};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x7265_7063_6865_636b;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub n_sims: u32,
    pub seed: u64,
    /// A simulated P-value counts as significant when strictly below this.
    pub alpha_sig: Probability,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        SimulationConfig {
            n_sims: 100,
            seed: DEFAULT_SEED,
            alpha_sig: Probability::new(0.05).expect("valid constant"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImputedField {
    NRep,
    ROrig,
}

impl ImputedField {
    pub fn as_str(self) -> &'static str {
        match self {
            ImputedField::NRep => "n_rep",
            ImputedField::ROrig => "r_orig",
        }
    }
}

/// Where an imputed value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImputationSource {
    NOrig,
    MedianNOrig,
    MedianROrig,
}

impl ImputationSource {
    pub fn as_str(self) -> &'static str {
        match self {
            ImputationSource::NOrig => "n_orig",
            ImputationSource::MedianNOrig => "median_n_orig",
            ImputationSource::MedianROrig => "median_r_orig",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImputationEntry {
    pub id: String,
    pub field: ImputedField,
    pub value: f64,
    pub source: ImputationSource,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StudyCount {
    pub id: String,
    pub significant: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationResult {
    pub config: SimulationConfig,
    /// In input order.
    pub per_study: Vec<StudyCount>,
    /// One entry per simulation: significant studies / simulated studies.
    pub per_sim_significant_fraction: Vec<f64>,
    pub imputation_log: Vec<ImputationEntry>,
}

impl SimulationResult {
    /// Assemble a result from per-study significance vectors, each of length
    /// `cfg.n_sims`, in the same order as `studies`.
    pub fn from_outcomes(
        studies: &[StudyRecord],
        outcomes: &[Vec<bool>],
        config: SimulationConfig,
    ) -> Result<Self> {
        if studies.is_empty() {
            return Err(Error::Config("no studies to simulate".into()));
        }
        if outcomes.len() != studies.len() {
            return Err(Error::Config(format!(
                "{} outcome vectors for {} studies",
                outcomes.len(),
                studies.len()
            )));
        }
        let n_sims = config.n_sims as usize;
        let mut per_sim = vec![0u32; n_sims];
        let mut per_study = Vec::with_capacity(studies.len());
        for (record, hits) in studies.iter().zip(outcomes) {
            if hits.len() != n_sims {
                return Err(Error::Config(format!(
                    "study `{}` has {} simulations, expected {n_sims}",
                    record.id,
                    hits.len()
                )));
            }
            let mut significant = 0;
            for (slot, &hit) in per_sim.iter_mut().zip(hits) {
                if hit {
                    *slot += 1;
                    significant += 1;
                }
            }
            per_study.push(StudyCount {
                id: record.id.clone(),
                significant,
            });
        }
        let k = studies.len() as f64;
        Ok(SimulationResult {
            config,
            per_study,
            per_sim_significant_fraction: per_sim.into_iter().map(|c| f64::from(c) / k).collect(),
            imputation_log: Vec::new(),
        })
    }

    pub fn count_for(&self, id: &str) -> Option<u32> {
        self.per_study
            .iter()
            .find(|c| c.id == id)
            .map(|c| c.significant)
    }
}

/// Fill `n_rep` and `r_orig` so every study can be simulated.
///
/// `n_rep` falls back to `n_orig`, then to the median observed `n_orig`
/// (rounded half up). `r_orig` falls back to the median observed `r_orig`.
/// Every fill is logged.
pub fn impute(studies: &[StudyRecord]) -> Result<(Vec<StudyRecord>, Vec<ImputationEntry>)> {
    let n_origs: Vec<f64> = studies
        .iter()
        .filter_map(|s| s.n_orig)
        .map(f64::from)
        .collect();
    let r_origs: Vec<f64> = studies
        .iter()
        .filter_map(|s| s.r_orig)
        .map(Correlation::get)
        .collect();
    let median_n = median(&n_origs).map(|m| libm::floor(m + 0.5) as u32);
    let median_r = median(&r_origs);

    let mut log = Vec::new();
    let mut out = Vec::with_capacity(studies.len());
    for study in studies {
        let mut s = study.clone();
        if s.n_rep.is_none() {
            let (n, source) = match (s.n_orig, median_n) {
                (Some(n), _) => (n, ImputationSource::NOrig),
                (None, Some(m)) => (m, ImputationSource::MedianNOrig),
                (None, None) => {
                    return Err(Error::Config(format!(
                        "study `{}` needs n_rep imputed but no study reports n_orig",
                        s.id
                    )))
                }
            };
            s.n_rep = Some(n);
            log.push(ImputationEntry {
                id: s.id.clone(),
                field: ImputedField::NRep,
                value: f64::from(n),
                source,
            });
        }
        if s.r_orig.is_none() {
            let m = median_r.ok_or_else(|| {
                Error::Config(format!(
                    "study `{}` needs r_orig imputed but no study reports r_orig",
                    s.id
                ))
            })?;
            s.r_orig = Some(Correlation::new(m)?);
            log.push(ImputationEntry {
                id: s.id.clone(),
                field: ImputedField::ROrig,
                value: m,
                source: ImputationSource::MedianROrig,
            });
        }
        out.push(s);
    }
    Ok((out, log))
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(FNV_PRIME)
    })
}

fn study_stream(seed: u64, id: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(id.as_bytes()));
    rng
}

/// Uniform on the open interval `(0, 1)` from 52 random bits.
fn open_unit(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

fn standard_normal(rng: &mut ChaCha8Rng) -> Result<f64> {
    normal_quantile(open_unit(rng.next_u64()))
}

/// Significance outcome of each simulated replication of one study.
///
/// Needs `r_orig` and `n_rep`; `df2` defaults to `n_rep - 2`.
pub fn simulate_study(record: &StudyRecord, cfg: &SimulationConfig) -> Result<Vec<bool>> {
    record.validate()?;
    let missing = |field: &str| Error::InvalidRecord {
        id: record.id.clone(),
        reason: format!("{field} missing; impute before simulating"),
    };
    let r_orig = record.r_orig.ok_or_else(|| missing("r_orig"))?;
    let n_rep = record.n_rep.ok_or_else(|| missing("n_rep"))?;
    let df2 = record.df2.unwrap_or(n_rep - 2);
    let mean = fisher_z(r_orig).get();
    let sd = libm::sqrt(1.0 / f64::from(n_rep - 3));
    let alpha = cfg.alpha_sig.get();

    let mut rng = study_stream(cfg.seed, &record.id);
    (0..cfg.n_sims)
        .map(|_| {
            let z = mean + sd * standard_normal(&mut rng)?;
            let r_sim = inverse_fisher_z(FisherZ::new(z)?)?;
            let stat = correlation_to_f(r_sim, 1, df2)?;
            Ok(f_tail_probability(stat.f, 1, df2)? < alpha)
        })
        .collect()
}

/// Simulate every study `cfg.n_sims` times. Studies must already be imputed.
pub fn simulate_perfect_replications(
    studies: &[StudyRecord],
    cfg: &SimulationConfig,
) -> Result<SimulationResult> {
    if cfg.n_sims == 0 {
        return Err(Error::Config("n_sims must be at least 1".into()));
    }
    let outcomes = studies
        .iter()
        .map(|s| simulate_study(s, cfg))
        .collect::<Result<Vec<_>>>()?;
    SimulationResult::from_outcomes(studies, &outcomes, *cfg)
}

/// Fraction of trials in which a simulated replication falls inside the
/// prediction interval built from a simulated original, both drawn around
/// `atanh(rho)`.
pub fn coverage_experiment(
    rho: Correlation,
    n_orig: u32,
    n_rep: u32,
    alpha: Probability,
    trials: u32,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    crate::interval::se_total(n_orig, n_rep)?;
    let mean = fisher_z(rho).get();
    let sd_orig = libm::sqrt(1.0 / f64::from(n_orig - 3));
    let sd_rep = libm::sqrt(1.0 / f64::from(n_rep - 3));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut covered = 0u32;
    for _ in 0..trials {
        let z_orig = mean + sd_orig * standard_normal(&mut rng)?;
        let z_rep = mean + sd_rep * standard_normal(&mut rng)?;
        let r_orig = inverse_fisher_z(FisherZ::new(z_orig)?)?;
        let r_rep = inverse_fisher_z(FisherZ::new(z_rep)?)?;
        let pi = prediction_interval(r_orig, n_orig, n_rep, alpha)?;
        if classify(r_rep, &pi) == Classification::Inside {
            covered += 1;
        }
    }
    Ok(f64::from(covered) / f64::from(trials))
}
