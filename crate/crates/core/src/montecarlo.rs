//! Simulation oracle: draws whole systems from the model and estimates each
//! analytic quantity with a standard error.
//!
//! Draws are generated in fixed-size blocks. Block `b` of an estimate tagged
//! `tag` always uses ChaCha8 stream `b` under a key derived from
//! `(seed, tag)`, and block results are merged in block order, so an estimate
//! does not depend on how many threads computed it.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reliability::{check_nonneg, EvalPoint, SystemModel, ThresholdConvention};

const BLOCK: u64 = 4096;

/// Monte Carlo value with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

impl Estimate {
    /// `(value - reference) / std_error`; zero when both the difference and
    /// the error vanish.
    pub fn z_score(&self, reference: f64) -> f64 {
        let diff = self.value - reference;
        if diff == 0.0 {
            0.0
        } else {
            diff / self.std_error
        }
    }
}

/// One simulated system, components ordered by lifetime.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemDraw {
    /// `x_{1:n} <= ... <= x_{n:n}`.
    pub lifetimes: Vec<f64>,
    /// `powers[i]` belongs to the component with lifetime `lifetimes[i]`.
    pub powers: Vec<f64>,
}

impl SystemDraw {
    /// `x_{r:n}` for 1-based rank `r`.
    pub fn order_statistic(&self, r: u32) -> f64 {
        self.lifetimes[r as usize - 1]
    }

    /// `min(w_[r:n], ..., w_[n:n])`.
    pub fn min_concomitant(&self, r: u32) -> f64 {
        self.powers[r as usize - 1..].iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Every estimate at one `(t, s)` point, all computed from the same draws.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointEstimate {
    pub joint_survival: Estimate,
    pub min_concomitant_survival: Estimate,
    pub operational_reliability: Estimate,
    /// Residual-life cdf at the running time `x` passed to
    /// [`MonteCarlo::estimate_point`].
    pub residual_cdf: Estimate,
    pub mrl: Estimate,
}

/// Seeded simulator for one model.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarlo {
    model: SystemModel,
    samples: u64,
    seed: u64,
}

impl MonteCarlo {
    pub fn new(model: SystemModel, samples: u64, seed: u64) -> Result<Self> {
        model.validate()?;
        if samples == 0 {
            return Err(Error::Domain("sample count must be >= 1".into()));
        }
        Ok(Self { model, samples, seed })
    }

    pub fn model(&self) -> &SystemModel {
        &self.model
    }

    pub fn samples(&self) -> u64 {
        self.samples
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Generator for block `block` of the estimate named `tag`.
    pub fn stream(&self, tag: &str, block: u64) -> ChaCha8Rng {
        let mut state = self.seed ^ fnv1a(tag.as_bytes()).rotate_left(17);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(block);
        rng
    }

    /// One `(lifetime, power)` pair: `U` uniform, `V` from the copula's
    /// conditional law given `U`, then both mapped through the marginal
    /// quantile functions.
    pub fn sample_pair<R: RngCore>(&self, rng: &mut R) -> (f64, f64) {
        let u = open_unit(rng);
        let p = open_unit(rng);
        let v = self
            .model
            .copula
            .conditional_quantile(u, p)
            .expect("u and p lie in (0, 1)")
            .clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
        let x = self.model.lifetime.quantile(u).expect("u lies in (0, 1)");
        let w = self.model.power.quantile(v).expect("v clamped into (0, 1)");
        (x, w)
    }

    /// `n` independent pairs sorted by lifetime, powers carried along.
    pub fn draw_system<R: RngCore>(&self, rng: &mut R) -> SystemDraw {
        let mut pairs: Vec<(f64, f64)> = (0..self.model.n).map(|_| self.sample_pair(rng)).collect();
        // stable sort: ties keep the original component order
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (lifetimes, powers) = pairs.into_iter().unzip();
        SystemDraw { lifetimes, powers }
    }

    /// `(x_{r:n}, min(w_[r:n], ..., w_[n:n]))` of a fresh draw, via partial
    /// selection instead of a full sort.
    fn draw_summary<R: RngCore>(&self, rng: &mut R, buf: &mut Vec<(f64, f64)>) -> (f64, f64) {
        buf.clear();
        buf.extend((0..self.model.n).map(|_| self.sample_pair(rng)));
        let k = self.model.r as usize - 1;
        let (_, nth, above) = buf.select_nth_unstable_by(k, |a, b| a.0.total_cmp(&b.0));
        let xr = nth.0;
        let wmin = above.iter().fold(nth.1, |m, p| m.min(p.1));
        (xr, wmin)
    }

    /// Runs `stat` over every simulated system and accumulates the first
    /// `K` moments and cross-moments.
    fn accumulate<const K: usize, F>(&self, tag: &str, stat: F) -> Moments<K>
    where
        F: Fn(f64, f64) -> [f64; K] + Sync,
    {
        let blocks = self.samples.div_ceil(BLOCK);
        let parts: Vec<Moments<K>> = (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = self.stream(tag, b);
                let count = BLOCK.min(self.samples - b * BLOCK);
                let mut buf = Vec::with_capacity(self.model.n as usize);
                let mut acc = Moments::<K>::default();
                for _ in 0..count {
                    let (xr, wmin) = self.draw_summary(&mut rng, &mut buf);
                    acc.push(stat(xr, wmin));
                }
                acc
            })
            .collect();
        parts.into_iter().fold(Moments::default(), Moments::merge)
    }

    /// Fraction of systems with `x_{r:n} > t` and
    /// `min(w_[r:n], ..., w_[n:n]) > s / phi(t)`.
    pub fn estimate_joint_survival(&self, p: EvalPoint) -> Result<Estimate> {
        let w = self.model.decay.threshold(p.s, p.t)?;
        let acc = self.accumulate("joint_survival", |xr, wmin| [indicator(xr > p.t && wmin > w)]);
        Ok(acc.mean(0))
    }

    /// Fraction of systems with `min(w_[r:n], ..., w_[n:n]) > s`.
    pub fn estimate_min_concomitant_survival(&self, s: f64) -> Result<Estimate> {
        check_nonneg("s", s)?;
        let acc = self.accumulate("min_concomitant_survival", |_, wmin| [indicator(wmin > s)]);
        Ok(acc.mean(0))
    }

    /// Ratio of the joint-survival and min-concomitant fractions over the
    /// same draws, with a delta-method standard error.
    pub fn estimate_operational_reliability(&self, p: EvalPoint) -> Result<Estimate> {
        let w = self.model.decay.threshold(p.s, p.t)?;
        let acc = self.accumulate("operational_reliability", |xr, wmin| {
            [indicator(xr > p.t && wmin > w), indicator(wmin > p.s)]
        });
        acc.ratio(0, 1)
    }

    /// Residual-life cdf at `x > t`: one minus the ratio of systems still
    /// meeting the running condition at `x` to those meeting it at `t`.
    pub fn estimate_residual_cdf(
        &self,
        t: f64,
        s: f64,
        x: f64,
        conv: ThresholdConvention,
    ) -> Result<Estimate> {
        let ev = self.residual_events(t, s, x, conv)?;
        let acc = self.accumulate("residual_cdf", |xr, wmin| {
            [indicator(ev.at_inspection(xr, wmin)), indicator(ev.at_running(xr, wmin))]
        });
        let surv = acc.ratio(1, 0)?;
        Ok(Estimate { value: 1.0 - surv.value, ..surv })
    }

    /// Mean residual life beyond `t`.
    ///
    /// Each system contributes the exact length of time past `t` during which
    /// it satisfies the running condition: `(x_{r:n} - t)` under the frozen
    /// threshold, and `(min(x_{r:n}, tau) - t)^+` under the moving one, where
    /// `tau` is the time at which `s / phi(x)` overtakes the system's weakest
    /// live power. The ratio of the mean contribution to the conditioning
    /// fraction estimates the MRL.
    pub fn estimate_mrl(&self, t: f64, s: f64, conv: ThresholdConvention) -> Result<Estimate> {
        let ev = self.residual_events(t, s, t, conv)?;
        let acc = self.accumulate("mrl", |xr, wmin| {
            [ev.residual_time(xr, wmin), indicator(ev.at_inspection(xr, wmin))]
        });
        acc.ratio(0, 1)
    }

    /// All point quantities from one pass over the draws, with the residual
    /// cdf evaluated at `x > t`.
    pub fn estimate_point(
        &self,
        p: EvalPoint,
        x: f64,
        conv: ThresholdConvention,
    ) -> Result<PointEstimate> {
        let ev = self.residual_events(p.t, p.s, x, conv)?;
        let s = p.s;
        let acc = self.accumulate("point", |xr, wmin| {
            [
                indicator(ev.at_inspection(xr, wmin)),
                indicator(wmin > s),
                indicator(ev.at_running(xr, wmin)),
                ev.residual_time(xr, wmin),
            ]
        });
        let surv = acc.ratio(2, 0)?;
        Ok(PointEstimate {
            joint_survival: acc.mean(0),
            min_concomitant_survival: acc.mean(1),
            operational_reliability: acc.ratio(0, 1)?,
            residual_cdf: Estimate { value: 1.0 - surv.value, ..surv },
            mrl: acc.ratio(3, 0)?,
        })
    }

    fn residual_events(&self, t: f64, s: f64, x: f64, conv: ThresholdConvention) -> Result<ResidualEvents> {
        check_nonneg("t", t)?;
        check_nonneg("s", s)?;
        if !(x >= t && x.is_finite()) {
            return Err(Error::Domain(format!("residual time x = {x} must exceed t = {t}")));
        }
        let decay = self.model.decay;
        let w_t = decay.threshold(s, t)?;
        let w_x = match conv {
            ThresholdConvention::PaperLiteral => decay.threshold(s, x)?,
            ThresholdConvention::InspectionTime => w_t,
        };
        Ok(ResidualEvents { t, s, x, w_t, w_x, conv, decay })
    }
}

/// Conditioning and running events of the residual-life law at one point.
#[derive(Clone, Copy)]
struct ResidualEvents {
    t: f64,
    s: f64,
    x: f64,
    w_t: f64,
    w_x: f64,
    conv: ThresholdConvention,
    decay: crate::decay::DecaySpec,
}

impl ResidualEvents {
    fn at_inspection(&self, xr: f64, wmin: f64) -> bool {
        xr > self.t && wmin > self.w_t
    }

    fn at_running(&self, xr: f64, wmin: f64) -> bool {
        xr > self.x && wmin > self.w_x
    }

    fn residual_time(&self, xr: f64, wmin: f64) -> f64 {
        match self.conv {
            ThresholdConvention::InspectionTime => {
                if self.at_inspection(xr, wmin) {
                    xr - self.t
                } else {
                    0.0
                }
            }
            ThresholdConvention::PaperLiteral => {
                let tau = if self.s == 0.0 { f64::INFINITY } else { self.decay.horizon(self.s / wmin) };
                (xr.min(tau) - self.t).max(0.0)
            }
        }
    }
}

/// Running sums and cross-products of `K` per-draw statistics.
#[derive(Debug, Clone, Copy)]
struct Moments<const K: usize> {
    n: u64,
    sum: [f64; K],
    cross: [[f64; K]; K],
}

impl<const K: usize> Default for Moments<K> {
    fn default() -> Self {
        Self { n: 0, sum: [0.0; K], cross: [[0.0; K]; K] }
    }
}

impl<const K: usize> Moments<K> {
    fn push(&mut self, y: [f64; K]) {
        self.n += 1;
        for i in 0..K {
            self.sum[i] += y[i];
            for j in 0..K {
                self.cross[i][j] += y[i] * y[j];
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.n += other.n;
        for i in 0..K {
            self.sum[i] += other.sum[i];
            for j in 0..K {
                self.cross[i][j] += other.cross[i][j];
            }
        }
        self
    }

    fn count(&self) -> f64 {
        self.n as f64
    }

    fn avg(&self, i: usize) -> f64 {
        self.sum[i] / self.count()
    }

    /// Population covariance of statistics `i` and `j`.
    fn cov(&self, i: usize, j: usize) -> f64 {
        self.cross[i][j] / self.count() - self.avg(i) * self.avg(j)
    }

    fn mean(&self, i: usize) -> Estimate {
        let se = (self.cov(i, i).max(0.0) / self.count()).sqrt();
        Estimate { value: self.avg(i), std_error: se, n_samples: self.n }
    }

    /// `mean(i) / mean(j)` with the first-order delta-method error.
    fn ratio(&self, i: usize, j: usize) -> Result<Estimate> {
        let b = self.avg(j);
        if b <= 0.0 {
            return Err(Error::DegenerateConditioning(format!(
                "no simulated system out of {} satisfies the conditioning event",
                self.n
            )));
        }
        let r = self.avg(i) / b;
        let var = self.cov(i, i) - 2.0 * r * self.cov(i, j) + r * r * self.cov(j, j);
        let se = (var.max(0.0) / self.count()).sqrt() / b;
        Ok(Estimate { value: r, std_error: se, n_samples: self.n })
    }
}

fn indicator(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

/// Uniform on the open interval `(0, 1)` with 53 random bits.
fn open_unit<R: RngCore>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}
