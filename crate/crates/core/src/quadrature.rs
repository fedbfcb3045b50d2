//! Adaptive 7/15-point Gauss-Kronrod integration on finite intervals, plus a
//! windowed driver for semi-infinite integrals with a known tail bound.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// Kronrod abscissae on `[-1, 1]` (non-negative half). Odd indices are the
/// 7-point Gauss nodes; the last entry is the centre.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// 7-point Gauss weights for `XGK[1], XGK[3], XGK[5]` and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stop tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { rel_tol: 1e-10, abs_tol: 1e-12, max_subdivisions: 200 }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidModel(format!("rel_tol = {} must be > 0", self.rel_tol)));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidModel(format!("abs_tol = {} must be > 0", self.abs_tol)));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::InvalidModel("max_subdivisions must be >= 1".into()));
        }
        Ok(())
    }

    fn target(&self, value: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * value.abs())
    }
}

/// Integral estimate with its accumulated error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub err_est: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kronrod * 0.5;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();

    // QUADPACK error scaling
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel { a, b, value, err }
}

/// Integrates `f` over `[a, b]`, bisecting the panel with the largest error
/// estimate until `err_est <= max(abs_tol, rel_tol * |value|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(domain(format!("integration bounds [{a}, {b}] are not a finite interval")));
    }
    if a == b {
        return Ok(Integral { value: 0.0, err_est: 0.0 });
    }
    let mut panels = vec![gauss_kronrod(&f, a, b)];
    let mut splits = 0usize;
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let err_est: f64 = panels.iter().map(|p| p.err).sum();
        if !value.is_finite() || !err_est.is_finite() {
            return Err(Error::Numerical(format!("non-finite integrand on [{a}, {b}]")));
        }
        if err_est <= cfg.target(value) {
            return Ok(Integral { value, err_est });
        }
        if splits >= cfg.max_subdivisions {
            return Err(Error::NonConvergence { estimate: value, err_est });
        }
        let worst = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            // interval can no longer be bisected in floating point
            return Err(Error::NonConvergence { estimate: value, err_est });
        }
        panels.push(gauss_kronrod(&f, p.a, mid));
        panels.push(gauss_kronrod(&f, mid, p.b));
        splits += 1;
    }
}

const MAX_WINDOWS: usize = 64;

/// Integrates a non-negative `f` over `[a, inf)`.
///
/// `tail_bound(b)` must bound `integral_b^inf f`. Windows of doubling width
/// are integrated with [`integrate`] until the remaining tail bound drops
/// below `abs_tol * 1e-3`; that bound is folded into `err_est`.
pub fn integrate_to_negligible<F, T>(f: F, a: f64, tail_bound: T, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: Fn(f64) -> f64,
    T: Fn(f64) -> f64,
{
    if !a.is_finite() {
        return Err(domain(format!("lower limit {a} is not finite")));
    }
    let negligible = cfg.abs_tol * 1e-3;
    let mut value = 0.0;
    let mut err_est = 0.0;
    let mut lo = a;
    let mut width = 1.0;
    for _ in 0..MAX_WINDOWS {
        let tail = tail_bound(lo);
        if tail < negligible {
            log::trace!("tail from {lo} truncated, bound {tail:e}");
            return Ok(Integral { value, err_est: err_est + tail });
        }
        let hi = lo + width;
        let piece = integrate(&f, lo, hi, cfg).map_err(|e| match e {
            Error::NonConvergence { estimate, err_est: e2 } => {
                Error::NonConvergence { estimate: value + estimate, err_est: err_est + e2 }
            }
            other => other,
        })?;
        value += piece.value;
        err_est += piece.err_est;
        lo = hi;
        width *= 2.0;
    }
    Err(Error::NonConvergence { estimate: value, err_est: err_est + tail_bound(lo) })
}
