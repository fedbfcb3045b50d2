//! Joint law of the system failure time `X_{r:n}` and the weakest power
//! among the components that are still alive, `min(W_[r:n], ..., W_[n:n])`.
//!
//! # Evaluation route
//!
//! With `S_X`, `S_W` the marginal survival functions and `C^` the survival
//! copula, conditioning on the component that attains rank `r` gives
//!
//! ```text
//! Q(t, w) = P{X_{r:n} > t, min W_[r..n] > w}
//!         = K * integral_0^{S_X(t)} (1-p)^(r-1) C^(p,q)^(n-r) dC^/dp(p,q) dp,
//!   q = S_W(w),  K = n * binom(n-1, r-1)
//! ```
//!
//! because `P{X > x, W > w} = C^(S_X(x), q)` and the conditional mass
//! `integral_w^inf f_{X,W}(x,y) dy = f_X(x) dC^/dp(S_X(x), q)`. The integrand
//! is bounded and, for the supported copulas, polynomial in `p`, so a single
//! Gauss-Kronrod panel already integrates it exactly for moderate `n`.
//!
//! Differentiating under the integral sign yields the joint density
//! `K f_X(t) f_W(w) k(S_X(t), q)` with
//! `k = d/dq [(1-p)^(r-1) C^^(n-r) dC^/dp]`, which is also the kernel of the
//! `w`-derivative needed by the residual-life density.

mod residual;

use serde::{Deserialize, Serialize};

use crate::copula::CopulaSpec;
use crate::decay::DecaySpec;
use crate::distributions::DistributionSpec;
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, QuadratureConfig};

/// Largest supported number of components.
pub const MAX_COMPONENTS: u32 = 1000;

/// Full description of an `(n-r+1)`-out-of-`n` power system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemModel {
    pub n: u32,
    pub r: u32,
    pub lifetime: DistributionSpec,
    pub power: DistributionSpec,
    pub copula: CopulaSpec,
    pub decay: DecaySpec,
}

impl SystemModel {
    pub fn new(
        n: u32,
        r: u32,
        lifetime: DistributionSpec,
        power: DistributionSpec,
        copula: CopulaSpec,
        decay: DecaySpec,
    ) -> Result<Self> {
        let m = Self { n, r, lifetime, power, copula, decay };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > MAX_COMPONENTS {
            return Err(Error::InvalidModel(format!(
                "n = {} must be in 1..={MAX_COMPONENTS}",
                self.n
            )));
        }
        if self.r == 0 || self.r > self.n {
            return Err(Error::InvalidModel(format!("r = {} must be in 1..={}", self.r, self.n)));
        }
        self.lifetime.validate()?;
        self.power.validate()?;
        self.copula.validate()?;
        self.decay.validate()?;
        if self.lifetime.support().0 < 0.0 {
            return Err(Error::InvalidModel("lifetime support must lie in [0, inf)".into()));
        }
        Ok(())
    }

    /// Analytic evaluator with default quadrature tolerances.
    pub fn analysis(&self) -> Analysis {
        Analysis::new(*self, QuadratureConfig::default())
    }

    /// Number of components that must survive: `n - r + 1`.
    pub fn required_alive(&self) -> u32 {
        self.n - self.r + 1
    }
}

/// Inspection time `t` and required power level `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub t: f64,
    pub s: f64,
}

impl EvalPoint {
    pub fn new(t: f64, s: f64) -> Result<Self> {
        check_nonneg("t", t)?;
        check_nonneg("s", s)?;
        Ok(Self { t, s })
    }
}

/// Which power threshold applies while the residual life runs past the
/// inspection time `t`.
#[derive(
    Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum,
)]
pub enum ThresholdConvention {
    /// Threshold `s / phi(x)` moves with the running time `x`.
    #[default]
    #[serde(rename = "paper")]
    #[value(name = "paper")]
    PaperLiteral,
    /// Threshold frozen at the inspection time: `s / phi(t)`.
    #[serde(rename = "inspection")]
    #[value(name = "inspection")]
    InspectionTime,
}

impl ThresholdConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::PaperLiteral => "paper",
            Self::InspectionTime => "inspection",
        }
    }
}

pub(crate) fn check_nonneg(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} = {x} must be finite and >= 0")))
    }
}

/// `binom(n, k)` as a float.
pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Quadrature-based evaluator bound to one model.
#[derive(Debug, Clone, Copy)]
pub struct Analysis {
    model: SystemModel,
    quad: QuadratureConfig,
    coef: f64,
}

impl Analysis {
    pub fn new(model: SystemModel, quad: QuadratureConfig) -> Self {
        let coef = f64::from(model.n) * binomial(model.n - 1, model.r - 1);
        Self { model, quad, coef }
    }

    pub fn model(&self) -> &SystemModel {
        &self.model
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    /// `(1-p)^(r-1) C^(p,q)^(n-r) dC^/dp(p,q)`.
    fn survival_kernel(&self, p: f64, q: f64) -> f64 {
        let m = &self.model;
        let c = &m.copula;
        (1.0 - p).powi((m.r - 1) as i32)
            * c.survival_unchecked(p, q).powi((m.n - m.r) as i32)
            * c.survival_partial_u_unchecked(p, q)
    }

    /// `d/dq` of [`survival_kernel`](Self::survival_kernel).
    fn density_kernel(&self, p: f64, q: f64) -> f64 {
        let m = &self.model;
        let c = &m.copula;
        let above = m.n - m.r;
        let joint = c.survival_unchecked(p, q);
        let mut inner = joint.powi(above as i32) * c.survival_density_unchecked(p, q);
        if above > 0 {
            inner += f64::from(above)
                * joint.powi(above as i32 - 1)
                * c.survival_partial_u_unchecked(p, q)
                * c.survival_partial_u_unchecked(q, p);
        }
        (1.0 - p).powi((m.r - 1) as i32) * inner
    }

    /// `K * integral_0^upper kernel(p, q) dp`.
    fn integrate_kernel(&self, upper: f64, q: f64, density: bool) -> Result<f64> {
        if upper <= 0.0 {
            return Ok(0.0);
        }
        let res = if density {
            integrate(|p| self.density_kernel(p, q), 0.0, upper, &self.quad)?
        } else {
            integrate(|p| self.survival_kernel(p, q), 0.0, upper, &self.quad)?
        };
        Ok(self.coef * res.value)
    }

    /// `P{X_{r:n} > t}`, i.e. the regularized incomplete beta
    /// `I_{S_X(t)}(n-r+1, r)`, summed as the binomial tail
    /// `sum_{k<r} binom(n,k) F^k S^(n-k)`.
    pub fn physical_reliability(&self, t: f64) -> Result<f64> {
        check_nonneg("t", t)?;
        let m = &self.model;
        let f = m.lifetime.cdf(t);
        let s = m.lifetime.survival(t);
        if f == 0.0 {
            return Ok(1.0);
        }
        if s == 0.0 {
            return Ok(0.0);
        }
        let (ln_f, ln_s) = (f.ln(), s.ln());
        let n = f64::from(m.n);
        let mut ln_binom = 0.0;
        let mut total = 0.0;
        for k in 0..m.r {
            let kf = f64::from(k);
            total += (ln_binom + kf * ln_f + (n - kf) * ln_s).exp();
            ln_binom += ((n - kf) / (kf + 1.0)).ln();
        }
        Ok(total.min(1.0))
    }

    /// `Q(t, w) = P{X_{r:n} > t, min(W_[r:n], ..., W_[n:n]) > w}` for a fixed
    /// power threshold `w`.
    pub fn joint_survival_fixed(&self, t: f64, w: f64) -> Result<f64> {
        check_nonneg("t", t)?;
        check_nonneg("w", w)?;
        let q = self.model.power.survival(w);
        if q == 0.0 {
            return Ok(0.0);
        }
        self.integrate_kernel(self.model.lifetime.survival(t), q, false)
    }

    /// Joint survival with decaying powers: `Q(t, s / phi(t))`.
    pub fn joint_survival(&self, p: EvalPoint) -> Result<f64> {
        let w = self.model.decay.threshold(p.s, p.t)?;
        self.joint_survival_fixed(p.t, w)
    }

    /// Closed-form joint survival for independent lifetime and power,
    /// `S_W(s/phi(t))^(n-r+1) * P{X_{r:n} > t}`.
    pub fn joint_survival_factorized(&self, p: EvalPoint) -> Result<f64> {
        if self.model.copula != CopulaSpec::Independence {
            return Err(Error::InvalidModel(
                "factorized joint survival requires the independence copula".into(),
            ));
        }
        let w = self.model.decay.threshold(p.s, p.t)?;
        let q = self.model.power.survival(w);
        Ok(q.powi(self.model.required_alive() as i32) * self.physical_reliability(p.t)?)
    }

    /// Joint density of `X_{r:n}` and `min(W_[r:n], ..., W_[n:n])` (fixed
    /// threshold; decay does not enter), the mixed partial `d2Q/dt dw`.
    pub fn joint_pdf(&self, t: f64, w: f64) -> Result<f64> {
        check_nonneg("t", t)?;
        check_nonneg("s", w)?;
        let m = &self.model;
        let fx = m.lifetime.pdf(t);
        let fw = m.power.pdf(w);
        if fx == 0.0 || fw == 0.0 {
            return Ok(0.0);
        }
        let p = m.lifetime.survival(t);
        let q = m.power.survival(w);
        Ok(self.coef * fx * fw * self.density_kernel(p, q))
    }

    /// Joint cdf `P{X_{r:n} <= t, min W_[r..n] <= w}` for a fixed threshold.
    pub fn joint_cdf_fixed(&self, t: f64, w: f64) -> Result<f64> {
        let q = self.joint_survival_fixed(t, w)?;
        Ok(1.0 - self.physical_reliability(t)? - self.min_concomitant_survival(w)? + q)
    }

    /// `D(s) = P{min(W_[r:n], ..., W_[n:n]) > s}`.
    pub fn min_concomitant_survival(&self, s: f64) -> Result<f64> {
        self.joint_survival_fixed(0.0, s)
    }

    /// `Q(t, s / phi(t)) / D(s)`.
    pub fn operational_reliability(&self, p: EvalPoint) -> Result<f64> {
        let d = self.min_concomitant_survival(p.s)?;
        if d <= 0.0 {
            return Err(Error::DegenerateConditioning(format!(
                "P{{min concomitant power > {}}} = 0",
                p.s
            )));
        }
        Ok(self.joint_survival(p)? / d)
    }
}
