//! Conversions between correlations, Fisher z values and F statistics.

use crate::{Error, Result};

/// Largest correlation magnitude accepted from input data. Values closer to
/// ±1 make the `1/(n - 3)` variance approximation meaningless.
pub const MAX_ABS_CORRELATION: f64 = 1.0 - 1e-12;

/// A Pearson correlation strictly inside `(-1, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Correlation(f64);

impl Correlation {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r.abs() < 1.0 {
            Ok(Correlation(r))
        } else {
            Err(Error::domain("correlation", r, "-1 < r < 1"))
        }
    }

    /// Like [`Correlation::new`] but also rejects values within `1e-12` of ±1.
    pub fn checked(r: f64) -> Result<Self> {
        if r.is_finite() && r.abs() <= MAX_ABS_CORRELATION {
            Ok(Correlation(r))
        } else {
            Err(Error::domain("correlation", r, "|r| <= 1 - 1e-12"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl core::ops::Neg for Correlation {
    type Output = Correlation;
    fn neg(self) -> Correlation {
        Correlation(-self.0)
    }
}

/// A value on the Fisher z scale.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FisherZ(f64);

impl FisherZ {
    pub fn new(z: f64) -> Result<Self> {
        if z.is_finite() {
            Ok(FisherZ(z))
        } else {
            Err(Error::domain("Fisher z", z, "finite"))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// An F statistic with its numerator and denominator degrees of freedom.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FStatistic {
    pub f: f64,
    pub df1: u32,
    pub df2: u32,
}

impl FStatistic {
    pub fn new(f: f64, df1: u32, df2: u32) -> Result<Self> {
        if f.is_nan() || f < 0.0 {
            return Err(Error::domain("F statistic", f, "f >= 0"));
        }
        check_dfs(df1, df2)?;
        Ok(FStatistic { f, df1, df2 })
    }
}

fn check_dfs(df1: u32, df2: u32) -> Result<()> {
    if df1 == 0 {
        return Err(Error::domain(
            "numerator degrees of freedom",
            0.0,
            "df1 >= 1",
        ));
    }
    if df2 == 0 {
        return Err(Error::domain(
            "denominator degrees of freedom",
            0.0,
            "df2 >= 1",
        ));
    }
    Ok(())
}

/// `z = atanh(r) = ½ ln((1 + r) / (1 - r))`.
pub fn fisher_z(r: Correlation) -> FisherZ {
    FisherZ(libm::atanh(r.0))
}

/// `r = tanh(z)`. Fails if `tanh` rounds to ±1 in double precision (|z| ≳ 19).
pub fn inverse_fisher_z(z: FisherZ) -> Result<Correlation> {
    let r = libm::tanh(z.0);
    if r.abs() < 1.0 {
        Ok(Correlation(r))
    } else {
        Err(Error::domain(
            "inverse Fisher z",
            z.0,
            "tanh(z) must stay inside (-1, 1)",
        ))
    }
}

/// Correlation implied by an F statistic:
/// `r = sqrt((F·df1/df2) / (F·df1/df2 + 1)) · sqrt(1/df1)`.
///
/// The result is the nonnegative root; F carries no sign.
pub fn f_to_correlation(stat: FStatistic) -> Result<Correlation> {
    let FStatistic { f, df1, df2 } = FStatistic::new(stat.f, stat.df1, stat.df2)?;
    let (d1, d2) = (f64::from(df1), f64::from(df2));
    let scaled = f * d1 / d2;
    let r = libm::sqrt(scaled / (scaled + 1.0)) * libm::sqrt(1.0 / d1);
    Correlation::new(r)
}

/// Algebraic inverse of [`f_to_correlation`]:
/// `F = (df2/df1) · r²·df1 / (1 - r²·df1)`.
///
/// Only defined when `r²·df1 < 1`; the sign of `r` is discarded.
pub fn correlation_to_f(r: Correlation, df1: u32, df2: u32) -> Result<FStatistic> {
    check_dfs(df1, df2)?;
    let (d1, d2) = (f64::from(df1), f64::from(df2));
    let s = r.0 * r.0 * d1;
    if s >= 1.0 {
        return Err(Error::domain("r^2 * df1", s, "r^2 * df1 < 1"));
    }
    Ok(FStatistic {
        f: d2 / d1 * s / (1.0 - s),
        df1,
        df2,
    })
}
