//! Monte-Carlo simulator of the scheduling protocol.
//!
//! Each block draws `K` independent users, collects the feedback bits, picks
//! a user uniformly among those reporting `1` (among all users when nobody
//! does), and pays rate or outage on that user's delayed channel.
//!
//! Blocks are split into fixed batches. Batch `i` is driven by a ChaCha8
//! generator seeded with the config seed on stream `i`, and per-batch moments
//! are merged in batch order, so results do not depend on the thread count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use rayon::prelude::*;

use crate::channel::{delayed_envelope, draw_cn, CorrelationParams, FadingPair};
use crate::error::{Error, Result};
use crate::outage::PowerMode;

const BATCH: u64 = 1 << 15;
const FULL_CSI_STREAMS: u64 = 1 << 40;
const NO_CSI_STREAMS: u64 = 1 << 41;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub num_users: usize,
    pub power: f64,
    pub corr: CorrelationParams<f64>,
    pub threshold: f64,
    /// Target rate for outage runs; unused for ergodic runs.
    pub rate_nats: f64,
    pub mode: PowerMode<f64>,
    pub n_blocks: u64,
    pub seed: u64,
}

impl SimConfig {
    /// Short-term power and no target rate; see [`SimConfig::with_rate`] and
    /// [`SimConfig::with_mode`].
    pub fn new(
        num_users: usize,
        power: f64,
        corr: CorrelationParams<f64>,
        threshold: f64,
        n_blocks: u64,
        seed: u64,
    ) -> Result<Self> {
        let cfg = Self {
            num_users,
            power,
            corr,
            threshold,
            rate_nats: 0.0,
            mode: PowerMode::ShortTerm,
            n_blocks,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_rate(self, rate_nats: f64) -> Self {
        Self { rate_nats, ..self }
    }

    pub fn with_mode(self, mode: PowerMode<f64>) -> Self {
        Self { mode, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_users == 0 || self.n_blocks == 0 {
            return Err(Error::domain("need at least one user and one block"));
        }
        if !(self.power.is_finite() && self.power > 0.0) {
            return Err(Error::domain(format!(
                "power must be finite and positive, got {}",
                self.power
            )));
        }
        if !(self.threshold.is_finite() && self.threshold >= 0.0) {
            return Err(Error::domain(format!(
                "threshold must be finite and >= 0, got {}",
                self.threshold
            )));
        }
        if !(self.rate_nats.is_finite() && self.rate_nats >= 0.0) {
            return Err(Error::domain(format!(
                "rate must be finite and >= 0, got {}",
                self.rate_nats
            )));
        }
        Ok(())
    }

    /// `(P1, P0)` under the configured power mode.
    pub fn powers(&self) -> Result<(f64, f64)> {
        self.mode
            .resolve(self.power, self.threshold, self.num_users)
    }
}

/// What happened in one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlockRecord {
    /// Users with `v² >= alpha`.
    pub n_above: usize,
    pub selected: usize,
    /// Position of the selected user among the qualified ones, in user order.
    pub selected_rank: usize,
    pub selected_pair: FadingPair<f64>,
    pub tx_power: f64,
    /// `log(1 + v_tau² tx_power)`, nats.
    pub achieved_log: f64,
    pub outage_flag: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

impl McEstimate {
    /// `|mean - value|` in standard errors; infinite when the estimate has
    /// zero spread but misses `value`.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = (self.mean - value).abs();
        if d == 0.0 {
            0.0
        } else {
            d / self.stderr
        }
    }
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let (a, b) = (self.n as f64, other.n as f64);
        Moments {
            n,
            mean: self.mean + d * b / n as f64,
            m2: self.m2 + other.m2 + d * d * a * b / n as f64,
        }
    }

    fn estimate(self) -> McEstimate {
        let var = if self.n > 1 {
            self.m2 / (self.n - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean: self.mean,
            stderr: (var / self.n as f64).sqrt(),
            n: self.n,
        }
    }

    fn binomial_estimate(self) -> McEstimate {
        let p = self.mean;
        McEstimate {
            mean: p,
            stderr: (p * (1.0 - p) / self.n as f64).sqrt(),
            n: self.n,
        }
    }
}

fn batch_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn batch_len(total: u64, i: u64) -> u64 {
    BATCH.min(total - i * BATCH)
}

/// Per-batch moments of `draw`, merged in batch order.
fn run<F>(n_blocks: u64, seed: u64, stream_base: u64, draw: F) -> Moments
where
    F: Fn(&mut ChaCha8Rng, &mut Vec<(f64, f64)>) -> f64 + Sync,
{
    let batches = n_blocks.div_ceil(BATCH);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|i| {
            let mut rng = batch_rng(seed, stream_base + i);
            let mut scratch = Vec::new();
            let mut m = Moments::default();
            for _ in 0..batch_len(n_blocks, i) {
                m.push(draw(&mut rng, &mut scratch));
            }
            m
        })
        .collect();
    parts.into_iter().fold(Moments::default(), Moments::merge)
}

/// Simulate one block with transmit powers `(p1, p0)`.
fn block<R: Rng + ?Sized>(
    cfg: &SimConfig,
    p1: f64,
    p0: f64,
    rng: &mut R,
    gains: &mut Vec<(f64, f64)>,
) -> BlockRecord {
    gains.clear();
    let mut n_above = 0;
    for _ in 0..cfg.num_users {
        let h: (f64, f64) = draw_cn(rng);
        if h.0 * h.0 + h.1 * h.1 >= cfg.threshold {
            n_above += 1;
        }
        gains.push(h);
    }
    let (selected, selected_rank, tx_power) = if n_above > 0 {
        let pick = rng.random_range(0..n_above);
        let idx = gains
            .iter()
            .enumerate()
            .filter(|(_, h)| h.0 * h.0 + h.1 * h.1 >= cfg.threshold)
            .nth(pick)
            .map(|(i, _)| i)
            .expect("pick < n_above");
        (idx, pick, p1)
    } else {
        let idx = rng.random_range(0..cfg.num_users);
        (idx, idx, p0)
    };
    let h = gains[selected];
    let v_tau = delayed_envelope(h, rng, cfg.corr);
    let achieved_log = (v_tau * v_tau * tx_power).ln_1p();
    BlockRecord {
        n_above,
        selected,
        selected_rank,
        selected_pair: FadingPair {
            v: h.0.hypot(h.1),
            v_tau,
        },
        tx_power,
        achieved_log,
        outage_flag: achieved_log < cfg.rate_nats,
    }
}

/// Sequential walk over the blocks of an outage/power run, using the same
/// generator streams as the estimators.
pub fn for_each_block(cfg: &SimConfig, mut f: impl FnMut(&BlockRecord)) -> Result<()> {
    cfg.validate()?;
    let (p1, p0) = cfg.powers()?;
    let mut gains = Vec::new();
    for i in 0..cfg.n_blocks.div_ceil(BATCH) {
        let mut rng = batch_rng(cfg.seed, i);
        for _ in 0..batch_len(cfg.n_blocks, i) {
            f(&block(cfg, p1, p0, &mut rng, &mut gains));
        }
    }
    Ok(())
}

/// Mean rate per block with `P1 = P` and silence when nobody reports `1`.
pub fn simulate_ergodic_rate(cfg: &SimConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let m = run(cfg.n_blocks, cfg.seed, 0, |rng, g| {
        block(cfg, cfg.power, 0.0, rng, g).achieved_log
    });
    Ok(m.estimate())
}

/// Fraction of blocks with `log(1 + v_tau² P_tx) < R`.
pub fn simulate_outage(cfg: &SimConfig) -> Result<McEstimate> {
    cfg.validate()?;
    if !(cfg.rate_nats > 0.0) {
        return Err(Error::domain("outage simulation needs a positive rate"));
    }
    let (p1, p0) = cfg.powers()?;
    let m = run(cfg.n_blocks, cfg.seed, 0, |rng, g| {
        f64::from(u8::from(block(cfg, p1, p0, rng, g).outage_flag))
    });
    Ok(m.binomial_estimate())
}

/// Mean transmit power per block under the configured power mode.
pub fn simulate_avg_power(cfg: &SimConfig) -> Result<McEstimate> {
    cfg.validate()?;
    let (p1, p0) = cfg.powers()?;
    let m = run(cfg.n_blocks, cfg.seed, 0, |rng, g| {
        block(cfg, p1, p0, rng, g).tx_power
    });
    Ok(m.estimate())
}

/// `E[log(1 + P max_k v_k²)]`: always serve the strongest user, no delay.
pub fn reference_full_csi_rate(
    k: usize,
    power: f64,
    n_blocks: u64,
    seed: u64,
) -> Result<McEstimate> {
    if k == 0 || n_blocks == 0 || !(power > 0.0) {
        return Err(Error::domain("need K >= 1, n_blocks >= 1, P > 0"));
    }
    let m = run(n_blocks, seed, FULL_CSI_STREAMS, |rng, _| {
        let best = (0..k)
            .map(|_| -> f64 { Exp1.sample(rng) })
            .fold(0.0, f64::max);
        (power * best).ln_1p()
    });
    Ok(m.estimate())
}

/// `E[log(1 + P v²)]`: a single user with no channel knowledge.
pub fn reference_no_csi_rate(power: f64, n_blocks: u64, seed: u64) -> Result<McEstimate> {
    if n_blocks == 0 || !(power > 0.0) {
        return Err(Error::domain("need n_blocks >= 1, P > 0"));
    }
    let m = run(n_blocks, seed, NO_CSI_STREAMS, |rng, _| {
        let x: f64 = Exp1.sample(rng);
        (power * x).ln_1p()
    });
    Ok(m.estimate())
}
