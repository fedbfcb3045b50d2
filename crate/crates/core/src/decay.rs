//! Deterministic power-decay factors `phi(t)` with `phi(0) = 1`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum DecaySpec {
    /// `phi(t) = exp(-theta t)`.
    #[serde(rename = "exp")]
    Exponential { theta: f64 },
    /// `phi(t) = 1 / (1 + theta t)`.
    #[serde(rename = "rational")]
    Rational { theta: f64 },
    /// `phi(t) = 1`. Not a proper decay (it never vanishes); it turns the
    /// decaying threshold `s / phi(t)` into the fixed threshold `s`.
    #[serde(rename = "none")]
    NoDecay,
}

impl DecaySpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Exponential { theta } | Self::Rational { theta }
                if !(theta.is_finite() && theta > 0.0) =>
            {
                Err(Error::InvalidModel(format!("decay theta = {theta} must be positive")))
            }
            _ => Ok(()),
        }
    }

    pub fn phi(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(self.phi_unchecked(t))
    }

    pub fn phi_prime(&self, t: f64) -> Result<f64> {
        check_time(t)?;
        Ok(match *self {
            Self::Exponential { theta } => -theta * (-theta * t).exp(),
            Self::Rational { theta } => {
                let d = 1.0 + theta * t;
                -theta / (d * d)
            }
            Self::NoDecay => 0.0,
        })
    }

    /// Raw-power level a component needs at time 0 to still exceed `s` at
    /// time `t`: `s / phi(t)`.
    pub fn threshold(&self, s: f64, t: f64) -> Result<f64> {
        if !(s >= 0.0 && s.is_finite()) {
            return Err(domain(format!("power level s = {s} must be finite and >= 0")));
        }
        check_time(t)?;
        Ok(self.threshold_unchecked(s, t))
    }

    /// `sup { t >= 0 : phi(t) > level }`: how long a factor above `level`
    /// persists. Zero when `level >= 1`, infinite when `level <= 0`.
    pub fn horizon(&self, level: f64) -> f64 {
        if level >= 1.0 {
            return 0.0;
        }
        if level <= 0.0 {
            return f64::INFINITY;
        }
        match *self {
            Self::Exponential { theta } => -level.ln() / theta,
            Self::Rational { theta } => (1.0 / level - 1.0) / theta,
            Self::NoDecay => f64::INFINITY,
        }
    }

    #[inline]
    pub(crate) fn phi_unchecked(&self, t: f64) -> f64 {
        match *self {
            Self::Exponential { theta } => (-theta * t).exp(),
            Self::Rational { theta } => 1.0 / (1.0 + theta * t),
            Self::NoDecay => 1.0,
        }
    }

    #[inline]
    pub(crate) fn threshold_unchecked(&self, s: f64, t: f64) -> f64 {
        if s == 0.0 {
            return 0.0;
        }
        match *self {
            Self::Exponential { theta } => s * (theta * t).exp(),
            Self::Rational { theta } => s * (1.0 + theta * t),
            Self::NoDecay => s,
        }
    }

    /// Derivative of `s / phi(t)` in `t`, i.e. `-s phi'(t) / phi(t)^2`.
    #[inline]
    pub(crate) fn threshold_rate(&self, s: f64, t: f64) -> f64 {
        match *self {
            Self::Exponential { theta } => s * theta * (theta * t).exp(),
            Self::Rational { theta } => s * theta,
            Self::NoDecay => 0.0,
        }
    }
}

fn check_time(t: f64) -> Result<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("time t = {t} must be finite and >= 0")))
    }
}
