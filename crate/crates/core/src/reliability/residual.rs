//! Residual operating life beyond an inspection time `t`.

use std::cell::RefCell;

use super::{check_nonneg, binomial, Analysis, EvalPoint, ThresholdConvention};
use crate::error::{domain, Error, Result};
use crate::quadrature::integrate_to_negligible;

impl Analysis {
    /// Probability of the conditioning event at inspection time `t`. Both
    /// conventions agree here: `Q(t, s / phi(t))`.
    fn conditioning(&self, t: f64, s: f64) -> Result<f64> {
        let q = self.joint_survival(EvalPoint::new(t, s)?)?;
        if q <= 0.0 {
            return Err(Error::DegenerateConditioning(format!(
                "system survives to t = {t} at power level s = {s} with probability 0"
            )));
        }
        Ok(q)
    }

    /// Survival of the residual-life numerator at running time `x`.
    fn running_survival(&self, t: f64, s: f64, x: f64, conv: ThresholdConvention) -> Result<f64> {
        match conv {
            ThresholdConvention::PaperLiteral => self.joint_survival(EvalPoint::new(x, s)?),
            ThresholdConvention::InspectionTime => {
                self.joint_survival_fixed(x, self.model.decay.threshold(s, t)?)
            }
        }
    }

    fn check_residual_args(t: f64, s: f64, x: f64) -> Result<()> {
        check_nonneg("t", t)?;
        check_nonneg("s", s)?;
        if x <= t || !x.is_finite() {
            return Err(domain(format!("residual time x = {x} must exceed t = {t}")));
        }
        Ok(())
    }

    /// `P{X_{r:n} <= x | X_{r:n} > t, power condition}` for `x > t`.
    pub fn residual_life_cdf(&self, t: f64, s: f64, x: f64, conv: ThresholdConvention) -> Result<f64> {
        Self::check_residual_args(t, s, x)?;
        let den = self.conditioning(t, s)?;
        let num = self.running_survival(t, s, x, conv)?;
        Ok(1.0 - num / den)
    }

    /// Density of the residual law: `-d/dx Q(x, .) / Q(t, s/phi(t))`.
    ///
    /// Under the moving threshold both arguments of `Q` advance with `x`, so
    /// the derivative picks up the threshold rate `-s phi'(x) / phi(x)^2`
    /// times `dQ/dw`.
    pub fn residual_life_pdf(&self, t: f64, s: f64, x: f64, conv: ThresholdConvention) -> Result<f64> {
        Self::check_residual_args(t, s, x)?;
        let den = self.conditioning(t, s)?;
        let m = &self.model;
        let w = match conv {
            ThresholdConvention::PaperLiteral => m.decay.threshold(s, x)?,
            ThresholdConvention::InspectionTime => m.decay.threshold(s, t)?,
        };
        let q = m.power.survival(w);
        if q == 0.0 {
            return Ok(0.0);
        }
        let p = m.lifetime.survival(x);
        let mut rate = self.coef * m.lifetime.pdf(x) * self.survival_kernel(p, q);
        if conv == ThresholdConvention::PaperLiteral {
            let dw = m.decay.threshold_rate(s, x);
            let fw = m.power.pdf(w);
            if dw > 0.0 && fw > 0.0 {
                rate += fw * dw * self.integrate_kernel(p, q, true)?;
            }
        }
        Ok(rate / den)
    }

    /// Operating mean residual life
    /// `E[X_{r:n} - t | X_{r:n} > t, power condition]`, evaluated as
    /// `integral_t^inf Q(x, .) dx / Q(t, s/phi(t))`.
    ///
    /// The tail beyond the integration window is bounded through
    /// `Q(x, .) <= P{X_{r:n} > x} <= binom(n, n-r+1) S_X(x)^(n-r+1)`.
    pub fn mean_residual_life(&self, t: f64, s: f64, conv: ThresholdConvention) -> Result<f64> {
        check_nonneg("t", t)?;
        check_nonneg("s", s)?;
        let den = self.conditioning(t, s)?;
        let m = &self.model;
        let k = m.required_alive();
        let subsets = binomial(m.n, k);
        let failure: RefCell<Option<Error>> = RefCell::new(None);
        let res = integrate_to_negligible(
            |x| match self.running_survival(t, s, x, conv) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            t,
            |b| subsets * m.lifetime.survival_power_tail_integral(k, b),
            &self.quad,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        Ok(res?.value / den)
    }
}
