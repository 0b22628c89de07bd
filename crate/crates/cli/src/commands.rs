//! Per-point evaluation of the table-producing commands.

use std::f64::consts::LN_2;

use onebit::channel::{rho_from_jakes, JakesParams};
use onebit::ergodic::{
    ergodic_report, full_csi_rate, no_csi_rate, suboptimal_threshold, sum_rate, wideband_metrics,
    wideband_threshold,
};
use onebit::mcsim::{
    reference_full_csi_rate, reference_no_csi_rate, simulate_avg_power, simulate_ergodic_rate,
    simulate_outage, SimConfig,
};
use onebit::outage::{average_power, dmt_analytic, outage_outdated, DmtScheme};
use onebit::{CorrelationParams, ErgodicConfig, OutageConfig, QuadratureSpec, ThresholdPolicy};

use crate::args::{AlphaArg, Params, PowerModeArg, Quantity, SweepParam};
use crate::error::CliError;
use crate::table::Column;

pub const DEFAULT_K: usize = 16;
pub const DEFAULT_SNR_DB: f64 = 20.0;
pub const DEFAULT_RATE_BITS: f64 = 3.0;
pub const DEFAULT_N_BLOCKS: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 1;

/// One fully resolved parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub k: usize,
    pub snr_db: f64,
    pub rho: Option<f64>,
    pub doppler_hz: Option<f64>,
    pub delay_s: Option<f64>,
    pub alpha: Option<AlphaArg>,
    pub rate_nats: f64,
    pub power_mode: PowerModeArg,
    pub n_blocks: u64,
    pub seed: u64,
}

impl Point {
    pub fn from_params(p: &Params) -> Self {
        Self {
            k: p.k.unwrap_or(DEFAULT_K),
            snr_db: p.snr_db.unwrap_or(DEFAULT_SNR_DB),
            rho: p.rho,
            doppler_hz: p.doppler_hz,
            delay_s: p.delay_s,
            alpha: p.alpha,
            rate_nats: p
                .rate_nats
                .unwrap_or(p.rate_bits.unwrap_or(DEFAULT_RATE_BITS) * LN_2),
            power_mode: p.power_mode.unwrap_or(PowerModeArg::ShortTerm),
            n_blocks: p.n_blocks.unwrap_or(DEFAULT_N_BLOCKS),
            seed: p.seed.unwrap_or(DEFAULT_SEED),
        }
    }

    pub fn power(&self) -> f64 {
        10f64.powf(self.snr_db / 10.0)
    }

    fn set(&mut self, param: SweepParam, x: f64) -> Result<(), CliError> {
        match param {
            SweepParam::K => {
                let k = x.round();
                if !(k >= 1.0) {
                    return Err(CliError::usage(format!("K must be at least 1, got {x}")));
                }
                self.k = k as usize;
            }
            SweepParam::SnrDb => self.snr_db = x,
            SweepParam::Rho => {
                self.rho = Some(x);
                self.doppler_hz = None;
                self.delay_s = None;
            }
            SweepParam::DopplerHz => {
                self.doppler_hz = Some(x);
                self.rho = None;
            }
            SweepParam::DelayS => {
                self.delay_s = Some(x);
                self.rho = None;
            }
            SweepParam::Alpha => self.alpha = Some(AlphaArg::Value(x)),
            SweepParam::RateBits => self.rate_nats = x * LN_2,
            SweepParam::RateNats => self.rate_nats = x,
            SweepParam::NBlocks => {
                if !(x >= 1.0) {
                    return Err(CliError::usage("n_blocks must be positive"));
                }
                self.n_blocks = x.round() as u64;
            }
        }
        Ok(())
    }

    /// Correlation from `--rho`, from the Jakes pair, or `default_rho`.
    pub fn corr(&self, default_rho: f64) -> Result<CorrelationParams, CliError> {
        match (self.rho, self.doppler_hz, self.delay_s) {
            (Some(r), _, _) => Ok(CorrelationParams::new(r)?),
            (None, Some(fd), Some(tau)) => Ok(rho_from_jakes(JakesParams::new(fd, tau)?)?),
            (None, None, None) => Ok(CorrelationParams::new(default_rho)?),
            _ => Err(CliError::usage("--doppler-hz and --delay-s go together")),
        }
    }

    fn mode(&self) -> Result<onebit::PowerMode, CliError> {
        Ok(self.power_mode.to_mode()?)
    }

    /// Threshold for rate-oriented commands; `optimal` by default.
    pub fn ergodic_threshold(
        &self,
        c: CorrelationParams,
        q: &QuadratureSpec,
    ) -> Result<f64, CliError> {
        let policy = match self.alpha.unwrap_or(AlphaArg::Optimal) {
            AlphaArg::Value(a) => ThresholdPolicy::Fixed(a),
            AlphaArg::Optimal => ThresholdPolicy::Optimal,
            AlphaArg::Suboptimal(d) => ThresholdPolicy::Suboptimal(d),
        };
        Ok(policy.resolve(self.k, self.power(), c, q)?)
    }

    /// Threshold for outage-oriented commands: by default the smallest one
    /// that keeps "1" blocks out of outage.
    pub fn outage_threshold(&self) -> Result<f64, CliError> {
        match self.alpha {
            Some(AlphaArg::Value(a)) => Ok(a),
            Some(AlphaArg::Suboptimal(d)) => Ok(suboptimal_threshold(self.k, d)?),
            None | Some(AlphaArg::Optimal) => Ok(self
                .mode()?
                .default_threshold(self.power(), self.rate_nats)?),
        }
    }

    fn outage_config(&self, c: CorrelationParams) -> Result<OutageConfig, CliError> {
        Ok(OutageConfig::new(
            self.k,
            self.power(),
            c,
            self.rate_nats,
            self.outage_threshold()?,
            self.mode()?,
        )?)
    }
}

/// Cartesian product of the sweeps applied to `base`; the first sweep varies slowest.
pub fn expand(base: &Point, params: &Params) -> Result<Vec<Point>, CliError> {
    let mut points = vec![base.clone()];
    for sweep in &params.sweep {
        let values = sweep.values();
        let mut next = Vec::with_capacity(points.len() * values.len());
        for p in &points {
            for &x in &values {
                let mut q = p.clone();
                q.set(sweep.param, x)?;
                next.push(q);
            }
        }
        points = next;
    }
    Ok(points)
}

/// A command that turns one point into table rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableCommand {
    Ergodic,
    Wideband,
    Outage,
    Dmt(DmtScheme),
    Simulate(Quantity),
}

impl TableCommand {
    pub fn columns(&self) -> Vec<Column> {
        let c = Column::new;
        match self {
            TableCommand::Ergodic => vec![
                c("k", "users"),
                c("snr", "dB"),
                c("rho", "1"),
                c("alpha", "gain"),
                c("rate", "nats"),
                c("rate", "bits"),
                c("upper", "nats"),
                c("upper", "bits"),
                c("lower", "nats"),
                c("lower", "bits"),
                c("prob_transmit", "prob"),
            ],
            TableCommand::Wideband => vec![
                c("k", "users"),
                c("rho", "1"),
                c("alpha", "gain"),
                c("ebn0_min", "linear"),
                c("ebn0_min", "dB"),
                c("s0", "bits/3dB"),
            ],
            TableCommand::Outage => vec![
                c("k", "users"),
                c("snr", "dB"),
                c("rho", "1"),
                c("rate", "nats"),
                c("rate", "bits"),
                c("alpha", "gain"),
                c("eps", "prob"),
                c("eps1", "prob"),
                c("eps0", "prob"),
                c("p1", "power"),
                c("p0", "power"),
            ],
            TableCommand::Dmt(_) => vec![c("k", "users"), c("r", "1"), c("d", "1")],
            TableCommand::Simulate(q) => {
                let unit = match q {
                    Quantity::Outage => "prob",
                    Quantity::Power => "power",
                    _ => "nats",
                };
                vec![
                    c("k", "users"),
                    c("snr", "dB"),
                    c("rho", "1"),
                    c("alpha", "gain"),
                    c("rate", "nats"),
                    c("n_blocks", "count"),
                    c("mean", unit),
                    c("stderr", unit),
                    c("analytic", unit),
                    c("z", "se"),
                ]
            }
        }
    }

    pub fn eval(&self, p: &Point, q: &QuadratureSpec) -> Result<Vec<Vec<f64>>, CliError> {
        let k = p.k as f64;
        match *self {
            TableCommand::Ergodic => {
                let c = p.corr(1.0)?;
                let alpha = p.ergodic_threshold(c, q)?;
                let r = ergodic_report(&ErgodicConfig::new(p.k, p.power(), c, alpha)?, q)?;
                Ok(vec![vec![
                    k,
                    p.snr_db,
                    c.rho(),
                    alpha,
                    r.rate_nats,
                    r.rate_nats / LN_2,
                    r.upper_nats,
                    r.upper_nats / LN_2,
                    r.lower_nats,
                    r.lower_nats / LN_2,
                    r.prob_transmit,
                ]])
            }
            TableCommand::Wideband => {
                let c = p.corr(1.0)?;
                let alpha = match p.alpha {
                    None | Some(AlphaArg::Optimal) => wideband_threshold(p.k, c)?,
                    Some(AlphaArg::Value(a)) => a,
                    Some(AlphaArg::Suboptimal(d)) => suboptimal_threshold(p.k, d)?,
                };
                let w = wideband_metrics(alpha, p.k, c)?;
                Ok(vec![vec![
                    k,
                    c.rho(),
                    alpha,
                    w.ebn0_min_linear,
                    w.ebn0_min_db,
                    w.slope_s0,
                ]])
            }
            TableCommand::Outage => {
                let c = p.corr(1.0)?;
                let cfg = p.outage_config(c)?;
                let r = outage_outdated(&cfg)?;
                Ok(vec![vec![
                    k,
                    p.snr_db,
                    c.rho(),
                    cfg.rate_nats,
                    cfg.rate_nats / LN_2,
                    cfg.threshold,
                    r.eps,
                    r.eps1,
                    r.eps0,
                    r.p1,
                    r.p0,
                ]])
            }
            TableCommand::Dmt(scheme) => Ok(dmt_analytic::<f64>(scheme, p.k)?
                .points
                .iter()
                .map(|pt| vec![k, pt.r, pt.d])
                .collect()),
            TableCommand::Simulate(quantity) => simulate_row(quantity, p, q).map(|r| vec![r]),
        }
    }
}

fn simulate_row(quantity: Quantity, p: &Point, q: &QuadratureSpec) -> Result<Vec<f64>, CliError> {
    let c = p.corr(1.0)?;
    let power = p.power();
    let (alpha, est, analytic) = match quantity {
        Quantity::Ergodic => {
            let alpha = p.ergodic_threshold(c, q)?;
            let cfg = SimConfig::new(p.k, power, c, alpha, p.n_blocks, p.seed)?;
            let analytic = sum_rate(&ErgodicConfig::new(p.k, power, c, alpha)?, q)?;
            (alpha, simulate_ergodic_rate(&cfg)?, analytic)
        }
        Quantity::Outage | Quantity::Power => {
            let oc = p.outage_config(c)?;
            let cfg = SimConfig::new(p.k, power, c, oc.threshold, p.n_blocks, p.seed)?
                .with_rate(p.rate_nats)
                .with_mode(oc.mode);
            if quantity == Quantity::Outage {
                (
                    oc.threshold,
                    simulate_outage(&cfg)?,
                    outage_outdated(&oc)?.eps,
                )
            } else {
                let (p1, p0) = oc.powers()?;
                let analytic = average_power(p1, p0, oc.threshold, p.k);
                (oc.threshold, simulate_avg_power(&cfg)?, analytic)
            }
        }
        Quantity::FullCsi => (
            f64::NAN,
            reference_full_csi_rate(p.k, power, p.n_blocks, p.seed)?,
            full_csi_rate(p.k, power, q)?,
        ),
        Quantity::NoCsi => (
            f64::NAN,
            reference_no_csi_rate(power, p.n_blocks, p.seed)?,
            no_csi_rate(power),
        ),
    };
    Ok(vec![
        p.k as f64,
        p.snr_db,
        c.rho(),
        alpha,
        p.rate_nats,
        est.n as f64,
        est.mean,
        est.stderr,
        analytic,
        est.z_score(analytic),
    ])
}
