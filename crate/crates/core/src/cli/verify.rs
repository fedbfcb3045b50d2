//! `powrel verify`: analytic values against simulation plus normalization
//! checks, as a deterministic JSON report.

use std::cell::RefCell;

use serde::Serialize;

use super::{CliError, PointSpec, Session, VerifyArgs, EXIT_OK, EXIT_VERIFY_FAILED};
use crate::config::ModelFile;
use crate::montecarlo::Estimate;
use crate::quadrature::{integrate, integrate_to_negligible, QuadratureConfig};
use crate::reliability::EvalPoint;
use crate::Error;

/// Largest accepted `|z|` for an analytic value against its estimate.
const Z_LIMIT: f64 = 3.0;
/// Normalization checks must hit 1 within this.
const NORM_TOL: f64 = 1e-6;
/// Quadrature tolerances must be this much finer than `NORM_TOL` for the
/// normalization checks to certify anything.
const TOL_MARGIN: f64 = 10.0;
const MAX_DEFAULT_POINTS: usize = 5;
/// Default points need at least this conditioning probability.
const MIN_CONDITIONING: f64 = 0.02;

/// `(lifetime quantile, power quantile)` levels tried for default points.
const CANDIDATES: [(f64, f64); 10] = [
    (0.1, 0.0),
    (0.1, 0.1),
    (0.25, 0.05),
    (0.25, 0.2),
    (0.4, 0.1),
    (0.05, 0.3),
    (0.5, 0.0),
    (0.02, 0.02),
    (0.15, 0.4),
    (0.01, 0.0),
];

#[derive(Debug, Serialize)]
struct Report {
    status: &'static str,
    convention: &'static str,
    samples: u64,
    seed: u64,
    model: ModelFile,
    tolerance: ToleranceCheck,
    points: Vec<PointReport>,
    normalization: Vec<NormCheck>,
}

#[derive(Debug, Serialize)]
struct ToleranceCheck {
    rel_tol: f64,
    abs_tol: f64,
    required: f64,
    pass: bool,
}

#[derive(Debug, Serialize)]
struct PointReport {
    t: f64,
    s: f64,
    x: f64,
    checks: Vec<Comparison>,
}

#[derive(Debug, Serialize)]
struct Comparison {
    quantity: &'static str,
    analytic: f64,
    estimate: f64,
    std_error: f64,
    z: f64,
    pass: bool,
}

impl Comparison {
    /// `z` uses the simulation error combined with the quadrature tolerance,
    /// so that an exact estimate (zero standard error) is not failed for a
    /// rounding-level analytic difference.
    fn new(quantity: &'static str, analytic: f64, est: Estimate, quad: &QuadratureConfig) -> Self {
        let diff = est.value - analytic;
        let quad_err = quad.abs_tol.max(quad.rel_tol * analytic.abs());
        let z = if diff == 0.0 { 0.0 } else { diff / est.std_error.hypot(quad_err) };
        Self {
            quantity,
            analytic,
            estimate: est.value,
            std_error: est.std_error,
            z,
            pass: z.abs() <= Z_LIMIT,
        }
    }
}

#[derive(Debug, Serialize)]
struct NormCheck {
    name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    target: f64,
    tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    pass: bool,
}

impl NormCheck {
    fn new(name: String, result: crate::Result<f64>) -> Self {
        match result {
            Ok(v) => Self {
                name,
                value: Some(v),
                target: 1.0,
                tolerance: NORM_TOL,
                error: None,
                pass: (v - 1.0).abs() <= NORM_TOL,
            },
            Err(e) => Self {
                name,
                value: None,
                target: 1.0,
                tolerance: NORM_TOL,
                error: Some(e.to_string()),
                pass: false,
            },
        }
    }
}

/// Evaluates `f`, remembering the first error so a quadrature driver that
/// only sees `f64` can report it.
struct Guard(RefCell<Option<Error>>);

impl Guard {
    fn new() -> Self {
        Self(RefCell::new(None))
    }

    fn eval(&self, r: crate::Result<f64>) -> f64 {
        r.unwrap_or_else(|e| {
            self.0.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    }

    fn finish<T>(self, r: crate::Result<T>) -> crate::Result<T> {
        match self.0.into_inner() {
            Some(e) => Err(e),
            None => r,
        }
    }
}

impl Session {
    pub(super) fn verify(&self, v: &VerifyArgs) -> Result<(i32, String), CliError> {
        let points = if v.points.is_empty() { self.default_points()? } else { v.points.clone() };
        let mc = self.monte_carlo()?;

        let mut reports = Vec::with_capacity(points.len());
        let mut normalization = vec![NormCheck::new("joint_pdf_mass".into(), self.joint_pdf_mass())];
        for p in &points {
            let ep = EvalPoint::new(p.t, p.s)?;
            let x = self.residual_probe(p.t);
            let a = &self.analysis;
            let est = mc.estimate_point(ep, x, self.conv)?;
            let checks = [
                ("joint_survival", a.joint_survival(ep)?, est.joint_survival),
                ("min_concomitant_survival", a.min_concomitant_survival(p.s)?, est.min_concomitant_survival),
                ("operational_reliability", a.operational_reliability(ep)?, est.operational_reliability),
                ("residual_cdf", a.residual_life_cdf(p.t, p.s, x, self.conv)?, est.residual_cdf),
                ("mrl", a.mean_residual_life(p.t, p.s, self.conv)?, est.mrl),
            ]
            .into_iter()
            .map(|(name, exact, e)| Comparison::new(name, exact, e, &self.quad))
            .collect();
            normalization.push(NormCheck::new(
                format!("residual_pdf_mass(t={}, s={})", p.t, p.s),
                self.residual_pdf_mass(p.t, p.s),
            ));
            reports.push(PointReport { t: p.t, s: p.s, x, checks });
        }

        let tolerance = ToleranceCheck {
            rel_tol: self.quad.rel_tol,
            abs_tol: self.quad.abs_tol,
            required: NORM_TOL / TOL_MARGIN,
            pass: self.quad.rel_tol <= NORM_TOL / TOL_MARGIN && self.quad.abs_tol <= NORM_TOL / TOL_MARGIN,
        };
        let pass = tolerance.pass
            && reports.iter().all(|r| r.checks.iter().all(|c| c.pass))
            && normalization.iter().all(|c| c.pass);
        let report = Report {
            status: if pass { "PASS" } else { "FAIL" },
            convention: self.conv.as_str(),
            samples: self.samples,
            seed: self.seed,
            model: ModelFile { quadrature: Some(self.quad), ..self.file },
            tolerance,
            points: reports,
            normalization,
        };
        let mut text = serde_json::to_string_pretty(&report).expect("reports serialize");
        text.push('\n');
        Ok((if pass { EXIT_OK } else { EXIT_VERIFY_FAILED }, text))
    }

    /// Points from marginal quantiles whose conditioning probability is not
    /// too small for a meaningful simulation comparison.
    fn default_points(&self) -> Result<Vec<PointSpec>, CliError> {
        let m = &self.model;
        let mut out = Vec::new();
        for (qt, qs) in CANDIDATES {
            let t = m.lifetime.quantile(qt)?;
            let s = if qs == 0.0 { 0.0 } else { m.power.quantile(qs)? };
            let q = self.analysis.joint_survival(EvalPoint::new(t, s)?)?;
            if q >= MIN_CONDITIONING {
                out.push(PointSpec { t, s });
            }
            if out.len() == MAX_DEFAULT_POINTS {
                break;
            }
        }
        if out.is_empty() {
            return Err(CliError::Compute(Error::DegenerateConditioning(
                "no default verification point has a usable conditioning probability; pass --points".into(),
            )));
        }
        Ok(out)
    }

    /// Running time at which the residual cdf is compared.
    fn residual_probe(&self, t: f64) -> f64 {
        t + self.model.lifetime.quantile(0.25).expect("0.25 is a valid level")
    }

    /// Total mass of the joint density, integrated over the unit square
    /// after the probability transform of both coordinates.
    fn joint_pdf_mass(&self) -> crate::Result<f64> {
        let m = &self.model;
        let guard = Guard::new();
        let density = |u: f64, v: f64| -> crate::Result<f64> {
            let t = m.lifetime.quantile(u)?;
            let w = m.power.quantile(v)?;
            Ok(self.analysis.joint_pdf(t, w)? / (m.lifetime.pdf(t) * m.power.pdf(w)))
        };
        let outer = integrate(
            |u| {
                let inner = integrate(|v| guard.eval(density(u, v)), 0.0, 1.0, &self.quad);
                guard.eval(inner.map(|r| r.value))
            },
            0.0,
            1.0,
            &self.quad,
        );
        guard.finish(outer).map(|r| r.value)
    }

    /// `integral_t^inf residual_pdf(x) dx`, with the tail beyond each window
    /// given by the residual survival function.
    fn residual_pdf_mass(&self, t: f64, s: f64) -> crate::Result<f64> {
        let a = &self.analysis;
        let guard = Guard::new();
        let res = integrate_to_negligible(
            |x| if x <= t { 0.0 } else { guard.eval(a.residual_life_pdf(t, s, x, self.conv)) },
            t,
            |b| if b <= t { 1.0 } else { guard.eval(a.residual_life_cdf(t, s, b, self.conv).map(|c| 1.0 - c)) },
            &self.quad,
        );
        guard.finish(res).map(|r| r.value)
    }
}
