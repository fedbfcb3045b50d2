//! Dependence between a component's lifetime and its power.
//!
//! Two families are supported: the product (independence) copula and the
//! Farlie-Gumbel-Morgenstern family `C(u,v) = uv[1 + alpha(1-u)(1-v)]`.
//! Besides the textbook operations, the module exposes the partial
//! derivatives of the survival copula, which is the natural coordinate system
//! for the order-statistic integrals in [`crate::reliability`].

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, domain, Error, Result};

/// Below this magnitude the FGM conditional quantile uses the linear branch.
const LINEAR_BRANCH: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CopulaSpec {
    Independence,
    Fgm { alpha: f64 },
}

impl CopulaSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Independence => Ok(()),
            Self::Fgm { alpha } if (-1.0..=1.0).contains(&alpha) => Ok(()),
            Self::Fgm { alpha } => Err(Error::InvalidModel(format!(
                "FGM alpha = {alpha} is outside [-1, 1]"
            ))),
        }
    }

    /// Upper bound of the copula density over the unit square.
    pub fn max_density(&self) -> f64 {
        match *self {
            Self::Independence => 1.0,
            Self::Fgm { alpha } => 1.0 + alpha.abs(),
        }
    }

    pub fn cdf(&self, u: f64, v: f64) -> Result<f64> {
        check_unit(u, v)?;
        Ok(match *self {
            Self::Independence => u * v,
            Self::Fgm { alpha } => u * v * (1.0 + alpha * (1.0 - u) * (1.0 - v)),
        })
    }

    /// Copula density. The corners of the square are accepted and return the
    /// limiting value of the (polynomial) density.
    pub fn density(&self, u: f64, v: f64) -> Result<f64> {
        check_unit(u, v)?;
        Ok(match *self {
            Self::Independence => 1.0,
            Self::Fgm { alpha } => 1.0 + alpha * (1.0 - 2.0 * u) * (1.0 - 2.0 * v),
        })
    }

    /// `dC/du`, i.e. `P{V <= v | U = u}`.
    pub fn partial_u(&self, u: f64, v: f64) -> Result<f64> {
        check_unit(u, v)?;
        Ok(match *self {
            Self::Independence => v,
            Self::Fgm { alpha } => v * (1.0 + alpha * (1.0 - 2.0 * u) * (1.0 - v)),
        })
    }

    /// Survival copula `C^(u,v) = u + v + C(1-u, 1-v) - 1`, so that
    /// `P{X > x, W > w} = C^(S_X(x), S_W(w))`.
    ///
    /// The FGM survival copula is again FGM with the same `alpha`, which is
    /// how it is evaluated here (no cancellation near the origin).
    pub fn survival(&self, u: f64, v: f64) -> Result<f64> {
        check_unit(u, v)?;
        Ok(self.survival_unchecked(u, v))
    }

    /// `dC^/du`, which equals `1 - dC/du(1-u, 1-v)`.
    pub fn survival_partial_u(&self, u: f64, v: f64) -> Result<f64> {
        check_unit(u, v)?;
        Ok(self.survival_partial_u_unchecked(u, v))
    }

    /// `dC^/dv`, which equals `1 - dC/dv(1-u, 1-v)`.
    pub fn survival_partial_v(&self, u: f64, v: f64) -> Result<f64> {
        check_unit(u, v)?;
        Ok(self.survival_partial_u_unchecked(v, u))
    }

    /// Density of the survival copula, `c(1-u, 1-v)`.
    pub fn survival_density(&self, u: f64, v: f64) -> Result<f64> {
        check_unit(u, v)?;
        Ok(self.survival_density_unchecked(u, v))
    }

    /// Inverse of [`partial_u`](Self::partial_u) in `v`: the `p`-quantile of
    /// `V` given `U = u`. Drives exact conditional sampling.
    pub fn conditional_quantile(&self, u: f64, p: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0 && p > 0.0 && p < 1.0) {
            return Err(domain(format!(
                "conditional quantile needs u, p in (0, 1), got u = {u}, p = {p}"
            )));
        }
        Ok(match *self {
            Self::Independence => p,
            Self::Fgm { alpha } => {
                // a v^2 - (1 + a) v + p = 0, root in [0, 1]
                let a = alpha * (1.0 - 2.0 * u);
                if a.abs() < LINEAR_BRANCH {
                    p
                } else {
                    let b = 1.0 + a;
                    2.0 * p / (b + (b * b - 4.0 * a * p).sqrt())
                }
            }
        })
    }

    // The unchecked variants are for inner quadrature loops whose arguments
    // are probabilities by construction.

    #[inline]
    pub(crate) fn survival_unchecked(&self, u: f64, v: f64) -> f64 {
        match *self {
            Self::Independence => u * v,
            Self::Fgm { alpha } => u * v * (1.0 + alpha * (1.0 - u) * (1.0 - v)),
        }
    }

    #[inline]
    pub(crate) fn survival_partial_u_unchecked(&self, u: f64, v: f64) -> f64 {
        match *self {
            Self::Independence => v,
            Self::Fgm { alpha } => v * (1.0 + alpha * (1.0 - 2.0 * u) * (1.0 - v)),
        }
    }

    #[inline]
    pub(crate) fn survival_density_unchecked(&self, u: f64, v: f64) -> f64 {
        match *self {
            Self::Independence => 1.0,
            Self::Fgm { alpha } => 1.0 + alpha * (1.0 - 2.0 * u) * (1.0 - 2.0 * v),
        }
    }
}

fn check_unit(u: f64, v: f64) -> Result<()> {
    check_probability("u", u)?;
    check_probability("v", v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const IND: CopulaSpec = CopulaSpec::Independence;
    const FGM1: CopulaSpec = CopulaSpec::Fgm { alpha: 1.0 };

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn cdf_examples() {
        assert!(close(IND.cdf(0.3, 0.8).unwrap(), 0.24, 1e-16));
        assert!(close(FGM1.cdf(0.5, 0.5).unwrap(), 0.3125, 1e-16));
        for alpha in [-1.0, -0.3, 0.0, 0.7, 1.0] {
            let c = CopulaSpec::Fgm { alpha };
            assert!(close(c.cdf(1.0, 0.7).unwrap(), 0.7, 1e-16));
        }
    }

    #[test]
    fn density_examples() {
        assert_eq!(IND.density(0.13, 0.77).unwrap(), 1.0);
        assert!(close(FGM1.density(0.0, 0.0).unwrap(), 2.0, 1e-16));
        assert!(close(CopulaSpec::Fgm { alpha: 0.5 }.density(0.5, 0.9).unwrap(), 1.0, 1e-16));
    }

    #[test]
    fn partial_u_examples() {
        for alpha in [-1.0, 0.4, 1.0] {
            let c = CopulaSpec::Fgm { alpha };
            assert!(close(c.partial_u(0.5, 0.37).unwrap(), 0.37, 1e-16));
        }
        assert_eq!(IND.partial_u(0.2, 0.6).unwrap(), 0.6);
        // v (1 + alpha (1 - v)) at u = 0
        assert!(close(FGM1.partial_u(0.0, 0.5).unwrap(), 0.75, 1e-16));
    }

    #[test]
    fn survival_examples() {
        assert!(close(IND.survival(0.4, 0.5).unwrap(), 0.20, 1e-16));
        assert!(close(FGM1.survival(0.5, 0.5).unwrap(), 0.3125, 1e-16));
        for c in [IND, FGM1, CopulaSpec::Fgm { alpha: -0.6 }] {
            assert!(close(c.survival(1.0, 0.3).unwrap(), 0.3, 1e-16));
        }
    }

    #[test]
    fn conditional_quantile_examples() {
        assert_eq!(IND.conditional_quantile(0.7, 0.25).unwrap(), 0.25);
        for alpha in [-1.0, 0.2, 1.0] {
            let c = CopulaSpec::Fgm { alpha };
            assert!(close(c.conditional_quantile(0.5, 0.8).unwrap(), 0.8, 1e-16));
        }
        // inverse of the partial_u example; u = 0 is excluded, approach it
        let v = FGM1.conditional_quantile(1e-300, 0.75).unwrap();
        assert!(close(v, 0.5, 1e-15));
    }

    #[test]
    fn domain_errors() {
        assert!(IND.cdf(-0.1, 0.5).is_err());
        assert!(FGM1.density(0.5, 1.5).is_err());
        assert!(FGM1.partial_u(f64::NAN, 0.5).is_err());
        assert!(FGM1.survival(0.5, -1e-9).is_err());
        assert!(FGM1.conditional_quantile(0.0, 0.5).is_err());
        assert!(FGM1.conditional_quantile(0.5, 1.0).is_err());
        assert!(CopulaSpec::Fgm { alpha: 1.5 }.validate().is_err());
    }

    #[test]
    fn fgm_zero_is_bit_identical_to_independence() {
        let fgm0 = CopulaSpec::Fgm { alpha: 0.0 };
        for i in 1..20 {
            for j in 1..20 {
                let (u, v) = (i as f64 / 20.0, j as f64 / 20.0);
                assert_eq!(IND.cdf(u, v), fgm0.cdf(u, v));
                assert_eq!(IND.density(u, v), fgm0.density(u, v));
                assert_eq!(IND.partial_u(u, v), fgm0.partial_u(u, v));
                assert_eq!(IND.survival(u, v), fgm0.survival(u, v));
                assert_eq!(IND.survival_partial_u(u, v), fgm0.survival_partial_u(u, v));
                assert_eq!(IND.survival_density(u, v), fgm0.survival_density(u, v));
                assert_eq!(IND.conditional_quantile(u, v), fgm0.conditional_quantile(u, v));
            }
        }
    }

    #[test]
    fn frechet_hoeffding_bounds_on_grid() {
        for c in [IND, FGM1, CopulaSpec::Fgm { alpha: -1.0 }] {
            for i in 0..=50 {
                for j in 0..=50 {
                    let (u, v) = (i as f64 / 50.0, j as f64 / 50.0);
                    let val = c.cdf(u, v).unwrap();
                    assert!(val >= (u + v - 1.0).max(0.0) - 1e-15);
                    assert!(val <= u.min(v) + 1e-15);
                }
            }
        }
    }

    #[test]
    fn survival_identity_on_grid() {
        for c in [IND, FGM1, CopulaSpec::Fgm { alpha: -0.45 }] {
            for i in 0..=40 {
                for j in 0..=40 {
                    let (u, v) = (i as f64 / 40.0, j as f64 / 40.0);
                    let lhs = c.survival(1.0 - u, 1.0 - v).unwrap();
                    let rhs = 1.0 - u - v + c.cdf(u, v).unwrap();
                    assert!(close(lhs, rhs, 1e-14), "{c:?} {u} {v}");
                }
            }
        }
    }

    #[test]
    fn partial_u_matches_central_difference() {
        let h = 1e-5;
        for c in [IND, FGM1, CopulaSpec::Fgm { alpha: -0.7 }] {
            for i in 1..10 {
                for j in 0..=10 {
                    let (u, v) = (i as f64 / 10.0, j as f64 / 10.0);
                    let fd = (c.cdf(u + h, v).unwrap() - c.cdf(u - h, v).unwrap()) / (2.0 * h);
                    assert!(close(fd, c.partial_u(u, v).unwrap(), 1e-6));
                }
            }
        }
    }

    #[test]
    fn survival_partials_match_central_difference() {
        let h = 1e-5;
        let c = CopulaSpec::Fgm { alpha: 0.8 };
        for i in 1..10 {
            for j in 1..10 {
                let (u, v) = (i as f64 / 10.0, j as f64 / 10.0);
                let du = (c.survival(u + h, v).unwrap() - c.survival(u - h, v).unwrap()) / (2.0 * h);
                let dv = (c.survival(u, v + h).unwrap() - c.survival(u, v - h).unwrap()) / (2.0 * h);
                assert!(close(du, c.survival_partial_u(u, v).unwrap(), 1e-8));
                assert!(close(dv, c.survival_partial_v(u, v).unwrap(), 1e-8));
                let duv = (c.survival(u + h, v + h).unwrap() - c.survival(u + h, v - h).unwrap()
                    - c.survival(u - h, v + h).unwrap()
                    + c.survival(u - h, v - h).unwrap())
                    / (4.0 * h * h);
                assert!(close(duv, c.survival_density(u, v).unwrap(), 1e-5));
            }
        }
    }

    proptest! {
        #[test]
        fn conditional_quantile_inverts_partial_u(
            alpha in -1.0f64..=1.0, u in 1e-6f64..(1.0 - 1e-6), p in 1e-6f64..(1.0 - 1e-6)
        ) {
            let c = CopulaSpec::Fgm { alpha };
            let v = c.conditional_quantile(u, p).unwrap();
            prop_assert!((0.0..=1.0).contains(&v));
            prop_assert!((c.partial_u(u, v).unwrap() - p).abs() <= 1e-12);
        }

        #[test]
        fn density_nonnegative_and_partial_monotone(
            alpha in -1.0f64..=1.0, u in 0.0f64..=1.0, v1 in 0.0f64..=1.0, v2 in 0.0f64..=1.0
        ) {
            let c = CopulaSpec::Fgm { alpha };
            prop_assert!(c.density(u, v1).unwrap() >= 0.0);
            let (lo, hi) = if v1 <= v2 { (v1, v2) } else { (v2, v1) };
            prop_assert!(c.partial_u(u, lo).unwrap() <= c.partial_u(u, hi).unwrap() + 1e-15);
            let pu = c.partial_u(u, v1).unwrap();
            prop_assert!((-1e-15..=1.0 + 1e-15).contains(&pu));
        }

        #[test]
        fn two_increasing(
            alpha in -1.0f64..=1.0,
            a in 0.0f64..=1.0, b in 0.0f64..=1.0, c in 0.0f64..=1.0, d in 0.0f64..=1.0
        ) {
            let cop = CopulaSpec::Fgm { alpha };
            let (u1, u2) = if a <= b { (a, b) } else { (b, a) };
            let (v1, v2) = if c <= d { (c, d) } else { (d, c) };
            let vol = cop.cdf(u2, v2).unwrap() - cop.cdf(u1, v2).unwrap()
                - cop.cdf(u2, v1).unwrap() + cop.cdf(u1, v1).unwrap();
            prop_assert!(vol >= -1e-15);
        }
    }
}
