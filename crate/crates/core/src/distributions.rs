//! Parametric marginal laws for component lifetimes and powers.
//!
//! Every evaluation is total on the real line: arguments outside the support
//! return the limiting cdf value (and zero density) rather than an error,
//! because the reliability integrands probe thresholds such as `s / phi(t)`
//! that can land anywhere.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Marginal distribution of a lifetime `X` or a power `W`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionSpec {
    /// `F(x) = 1 - exp(-rate x)` on `[0, inf)`.
    Exponential { rate: f64 },
    /// Pareto type II: `F(x) = 1 - (1 + x/scale)^(-shape)` on `[0, inf)`.
    ParetoLomax { shape: f64, scale: f64 },
    /// Uniform on `[lo, hi]`.
    Uniform { lo: f64, hi: f64 },
}

impl DistributionSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Exponential { rate } => rate.is_finite() && rate > 0.0,
            Self::ParetoLomax { shape, scale } => {
                shape.is_finite() && shape > 0.0 && scale.is_finite() && scale > 0.0
            }
            Self::Uniform { lo, hi } => lo.is_finite() && hi.is_finite() && lo < hi,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidModel(format!("invalid distribution parameters: {self:?}")))
        }
    }

    /// Closed support `(lower, upper)`; `upper` may be infinite.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            Self::Exponential { .. } | Self::ParetoLomax { .. } => (0.0, f64::INFINITY),
            Self::Uniform { lo, hi } => (lo, hi),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-rate * x).exp_m1()
                }
            }
            Self::ParetoLomax { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    -(-shape * (x / scale).ln_1p()).exp_m1()
                }
            }
            Self::Uniform { lo, hi } => {
                if x <= lo {
                    0.0
                } else if x >= hi {
                    1.0
                } else {
                    (x - lo) / (hi - lo)
                }
            }
        }
    }

    /// `1 - cdf(x)`, evaluated directly so that far tails keep full relative
    /// precision.
    pub fn survival(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-rate * x).exp()
                }
            }
            Self::ParetoLomax { shape, scale } => {
                if x <= 0.0 {
                    1.0
                } else {
                    (-shape * (x / scale).ln_1p()).exp()
                }
            }
            Self::Uniform { lo, hi } => {
                if x <= lo {
                    1.0
                } else if x >= hi {
                    0.0
                } else {
                    (hi - x) / (hi - lo)
                }
            }
        }
    }

    pub fn pdf(&self, x: f64) -> f64 {
        match *self {
            Self::Exponential { rate } => {
                if x < 0.0 {
                    0.0
                } else {
                    rate * (-rate * x).exp()
                }
            }
            Self::ParetoLomax { shape, scale } => {
                if x < 0.0 {
                    0.0
                } else {
                    shape / scale * (-(shape + 1.0) * (x / scale).ln_1p()).exp()
                }
            }
            Self::Uniform { lo, hi } => {
                if x < lo || x > hi {
                    0.0
                } else {
                    1.0 / (hi - lo)
                }
            }
        }
    }

    /// Inverse cdf on the open unit interval.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(domain(format!("quantile level {p} is not in (0, 1)")));
        }
        Ok(match *self {
            Self::Exponential { rate } => -(-p).ln_1p() / rate,
            Self::ParetoLomax { shape, scale } => scale * (-(-p).ln_1p() / shape).exp_m1(),
            Self::Uniform { lo, hi } => lo + p * (hi - lo),
        })
    }

    /// Inverse-transform sample driven by the uniform variate `u`.
    pub fn sample(&self, u: f64) -> Result<f64> {
        self.quantile(u)
    }

    /// `integral_b^inf survival(x)^k dx`, in closed form.
    ///
    /// Infinite when the tail is too heavy (`k * shape <= 1` for the Lomax
    /// law). Used to bound the truncated tail of mean-residual-life integrals.
    pub fn survival_power_tail_integral(&self, k: u32, b: f64) -> f64 {
        let kf = f64::from(k.max(1));
        match *self {
            Self::Exponential { rate } => {
                let below = (-b).max(0.0);
                below + (-kf * rate * b.max(0.0)).exp() / (kf * rate)
            }
            Self::ParetoLomax { shape, scale } => {
                if kf * shape <= 1.0 {
                    return f64::INFINITY;
                }
                let below = (-b).max(0.0);
                let e = kf * shape - 1.0;
                below + scale / e * (-e * (b.max(0.0) / scale).ln_1p()).exp()
            }
            Self::Uniform { lo, hi } => {
                let width = hi - lo;
                if b >= hi {
                    0.0
                } else if b <= lo {
                    (lo - b) + width / (kf + 1.0)
                } else {
                    let frac = (hi - b) / width;
                    width * frac.powf(kf + 1.0) / (kf + 1.0)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXP1: DistributionSpec = DistributionSpec::Exponential { rate: 1.0 };
    const LOMAX: DistributionSpec = DistributionSpec::ParetoLomax { shape: 2.0, scale: 1.0 };
    const UNI: DistributionSpec = DistributionSpec::Uniform { lo: 2.0, hi: 5.0 };

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn cdf_examples() {
        assert_eq!(EXP1.cdf(0.0), 0.0);
        assert!(close(LOMAX.cdf(1.0), 0.75, 1e-15));
        assert!(close(UNI.cdf(3.5), 0.5, 1e-15));
    }

    #[test]
    fn pdf_examples() {
        assert!(close(LOMAX.pdf(0.0), 2.0, 1e-15));
        assert!(close(EXP1.pdf(1.0), (-1.0f64).exp(), 1e-15));
        assert_eq!(UNI.pdf(1.0), 0.0);
    }

    #[test]
    fn survival_examples() {
        assert!(close(LOMAX.survival(1.0), 0.25, 1e-15));
        assert_eq!(DistributionSpec::Exponential { rate: 2.0 }.survival(0.0), 1.0);
        assert_eq!(UNI.survival(6.0), 0.0);
    }

    #[test]
    fn quantile_examples() {
        let p = 1.0 - (-1.0f64).exp();
        assert!(close(EXP1.quantile(p).unwrap(), 1.0, 1e-14));
        assert!(close(UNI.quantile(0.5).unwrap(), 3.5, 1e-15));
        assert!(close(LOMAX.quantile(0.75).unwrap(), 1.0, 1e-14));
    }

    #[test]
    fn sample_examples() {
        assert!(close(EXP1.sample(0.5).unwrap(), 2.0f64.ln(), 1e-15));
        assert!(matches!(UNI.sample(0.0), Err(Error::Domain(_))));
        assert!(close(LOMAX.sample(0.75).unwrap(), 1.0, 1e-14));
    }

    #[test]
    fn quantile_rejects_closed_endpoints() {
        for d in [EXP1, LOMAX, UNI] {
            assert!(d.quantile(0.0).is_err());
            assert!(d.quantile(1.0).is_err());
            assert!(d.quantile(f64::NAN).is_err());
        }
    }

    #[test]
    fn validation() {
        assert!(DistributionSpec::Exponential { rate: 0.0 }.validate().is_err());
        assert!(DistributionSpec::ParetoLomax { shape: 1.0, scale: -1.0 }.validate().is_err());
        assert!(DistributionSpec::Uniform { lo: 3.0, hi: 3.0 }.validate().is_err());
        for d in [EXP1, LOMAX, UNI] {
            d.validate().unwrap();
        }
    }

    #[test]
    fn far_tail_survival_keeps_relative_precision() {
        let s = EXP1.survival(700.0);
        assert!(s > 0.0);
        assert!(close(s, (-700.0f64).exp(), 1e-15));
        assert_eq!(1.0 - EXP1.cdf(700.0), 0.0);
    }

    #[test]
    fn tail_integral_closed_forms() {
        // k = 1 is the expected excess E[(X - b)^+].
        assert!(close(EXP1.survival_power_tail_integral(1, 0.0), 1.0, 1e-15));
        assert!(close(LOMAX.survival_power_tail_integral(1, 0.0), 1.0, 1e-15));
        assert!(close(UNI.survival_power_tail_integral(1, 0.0), 3.5, 1e-15));
        assert!(close(EXP1.survival_power_tail_integral(2, 0.5), (-1.0f64).exp() / 2.0, 1e-15));
        assert!(DistributionSpec::ParetoLomax { shape: 0.5, scale: 1.0 }
            .survival_power_tail_integral(2, 0.0)
            .is_infinite());
    }
}
