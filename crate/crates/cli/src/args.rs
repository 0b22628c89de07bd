use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use onebit::outage::DmtScheme;

#[derive(Debug, Parser)]
#[command(
    name = "onebit",
    version,
    about = "Rate and outage analysis of 1-bit feedback scheduling over Rayleigh broadcast channels"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ergodic sum-rate, its bounds and the probability of a "1" report
    Ergodic(Params),
    /// Minimum Eb/N0 and wideband slope
    Wideband(Params),
    /// Outage probability at a fixed rate
    Outage(Params),
    /// Diversity-multiplexing tradeoff of a feedback scheme
    Dmt(Params),
    /// Monte-Carlo estimate next to the closed form
    Simulate(Params),
    /// Write the data behind one of the figures, one file per curve
    Figure {
        #[arg(value_enum)]
        id: FigureId,
        #[command(flatten)]
        params: Params,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Ergodic(_) => "ergodic",
            Command::Wideband(_) => "wideband",
            Command::Outage(_) => "outage",
            Command::Dmt(_) => "dmt",
            Command::Simulate(_) => "simulate",
            Command::Figure { .. } => "figure",
        }
    }

    pub fn params(&self) -> &Params {
        match self {
            Command::Ergodic(p)
            | Command::Wideband(p)
            | Command::Outage(p)
            | Command::Dmt(p)
            | Command::Simulate(p) => p,
            Command::Figure { params, .. } => params,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// Number of users
    #[arg(long)]
    pub k: Option<usize>,

    /// Average SNR in dB
    #[arg(long, allow_negative_numbers = true)]
    pub snr_db: Option<f64>,

    /// Correlation between the reported and the scheduled channel
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["doppler_hz", "delay_s"])]
    pub rho: Option<f64>,

    /// Maximum Doppler shift; rho = J0(2 pi fD tau)
    #[arg(long, requires = "delay_s")]
    pub doppler_hz: Option<f64>,

    /// Feedback delay in seconds
    #[arg(long, requires = "doppler_hz")]
    pub delay_s: Option<f64>,

    /// Threshold: a number, `optimal`, or `suboptimal:<delta>` for log K - delta
    #[arg(long)]
    pub alpha: Option<AlphaArg>,

    /// Target rate in bits per channel use
    #[arg(long, conflicts_with = "rate_nats")]
    pub rate_bits: Option<f64>,

    /// Target rate in nats per channel use
    #[arg(long)]
    pub rate_nats: Option<f64>,

    /// short-term, long-term or explicit:<P1>,<P0>
    #[arg(long)]
    pub power_mode: Option<PowerModeArg>,

    /// Blocks per Monte-Carlo estimate
    #[arg(long)]
    pub n_blocks: Option<u64>,

    #[arg(long)]
    pub seed: Option<u64>,

    /// <param>=<start>:<stop>:<points>[:log], repeatable (Cartesian product)
    #[arg(long)]
    pub sweep: Vec<SweepSpec>,

    /// Output file (figure: output directory); stdout if omitted
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// DMT scheme: longterm, shortterm, full_csi, outdated, no_csi, p2p
    #[arg(long)]
    pub scheme: Option<DmtScheme>,

    /// What `simulate` estimates
    #[arg(long, value_enum)]
    pub quantity: Option<Quantity>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Ergodic,
    Outage,
    Power,
    FullCsi,
    NoCsi,
}

impl Quantity {
    pub fn as_str(&self) -> &'static str {
        match self {
            Quantity::Ergodic => "ergodic",
            Quantity::Outage => "outage",
            Quantity::Power => "power",
            Quantity::FullCsi => "full-csi",
            Quantity::NoCsi => "no-csi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl FigureId {
    pub fn as_str(&self) -> &'static str {
        match self {
            FigureId::Fig1 => "fig1",
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaArg {
    Value(f64),
    Optimal,
    Suboptimal(f64),
}

impl FromStr for AlphaArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s == "optimal" {
            return Ok(AlphaArg::Optimal);
        }
        if let Some(d) = s.strip_prefix("suboptimal:") {
            return parse_f64(d).map(AlphaArg::Suboptimal);
        }
        parse_f64(s).map(AlphaArg::Value)
    }
}

impl fmt::Display for AlphaArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaArg::Value(a) => write!(f, "{a}"),
            AlphaArg::Optimal => f.write_str("optimal"),
            AlphaArg::Suboptimal(d) => write!(f, "suboptimal:{d}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PowerModeArg {
    ShortTerm,
    LongTerm,
    Explicit(f64, f64),
}

impl PowerModeArg {
    pub fn to_mode(self) -> Result<onebit::PowerMode, onebit::Error> {
        match self {
            PowerModeArg::ShortTerm => Ok(onebit::PowerMode::ShortTerm),
            PowerModeArg::LongTerm => Ok(onebit::PowerMode::LongTermTwoLevel),
            PowerModeArg::Explicit(p1, p0) => onebit::PowerMode::explicit(p1, p0),
        }
    }
}

impl FromStr for PowerModeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "short-term" => Ok(PowerModeArg::ShortTerm),
            "long-term" => Ok(PowerModeArg::LongTerm),
            other => {
                let body = other
                    .strip_prefix("explicit:")
                    .ok_or_else(|| format!("unknown power mode '{other}'"))?;
                let (p1, p0) = body
                    .split_once(',')
                    .ok_or_else(|| "explicit power mode needs <P1>,<P0>".to_string())?;
                Ok(PowerModeArg::Explicit(parse_f64(p1)?, parse_f64(p0)?))
            }
        }
    }
}

impl fmt::Display for PowerModeArg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PowerModeArg::ShortTerm => f.write_str("short-term"),
            PowerModeArg::LongTerm => f.write_str("long-term"),
            PowerModeArg::Explicit(p1, p0) => write!(f, "explicit:{p1},{p0}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    K,
    SnrDb,
    Rho,
    DopplerHz,
    DelayS,
    Alpha,
    RateBits,
    RateNats,
    NBlocks,
}

impl SweepParam {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParam::K => "k",
            SweepParam::SnrDb => "snr_db",
            SweepParam::Rho => "rho",
            SweepParam::DopplerHz => "doppler_hz",
            SweepParam::DelayS => "delay_s",
            SweepParam::Alpha => "alpha",
            SweepParam::RateBits => "rate_bits",
            SweepParam::RateNats => "rate_nats",
            SweepParam::NBlocks => "n_blocks",
        }
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let all = [
            SweepParam::K,
            SweepParam::SnrDb,
            SweepParam::Rho,
            SweepParam::DopplerHz,
            SweepParam::DelayS,
            SweepParam::Alpha,
            SweepParam::RateBits,
            SweepParam::RateNats,
            SweepParam::NBlocks,
        ];
        all.into_iter()
            .find(|p| p.as_str() == key)
            .ok_or_else(|| format!("cannot sweep '{s}'"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log: bool,
}

impl SweepSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let t = i as f64 / last;
                if self.log {
                    (self.start.ln() + t * (self.stop / self.start).ln()).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for SweepSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| format!("sweep '{s}' is not <param>=<start>:<stop>:<points>[:log]"))?;
        let parts: Vec<&str> = range.split(':').collect();
        let log = match parts.as_slice() {
            [_, _, _] => false,
            [_, _, _, "log"] => true,
            _ => return Err(format!("bad sweep range '{range}'")),
        };
        let points: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("bad point count '{}'", parts[2]))?;
        let spec = SweepSpec {
            param: name.parse()?,
            start: parse_f64(parts[0])?,
            stop: parse_f64(parts[1])?,
            points,
            log,
        };
        if points == 0 {
            return Err("a sweep needs at least one point".into());
        }
        if log && !(spec.start > 0.0 && spec.stop > 0.0) {
            return Err("log sweeps need positive endpoints".into());
        }
        Ok(spec)
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}={}:{}:{}",
            self.param.as_str(),
            self.start,
            self.stop,
            self.points
        )?;
        if self.log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if !x.is_finite() {
        return Err(format!("'{s}' is not finite"));
    }
    Ok(x)
}
