use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Feedback schemes whose diversity-multiplexing tradeoff is known in closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DmtScheme {
    /// Instantaneous 1-bit feedback, two-level long-term power: `2K(1 - r)+` (achievable).
    LongTerm1Bit,
    /// Instantaneous 1-bit feedback, short-term power: `K(1 - r)+`.
    ShortTerm1Bit,
    /// Perfect CSI at the transmitter: `K(1 - r)+`.
    FullCsi,
    /// Outdated 1-bit feedback: `(1 - r)+`.
    Outdated1Bit,
    NoCsi,
    /// Single user with 1-bit feedback: `2(1 - r)+`.
    P2p1Bit,
}

impl DmtScheme {
    pub const ALL: [DmtScheme; 6] = [
        DmtScheme::LongTerm1Bit,
        DmtScheme::ShortTerm1Bit,
        DmtScheme::FullCsi,
        DmtScheme::Outdated1Bit,
        DmtScheme::NoCsi,
        DmtScheme::P2p1Bit,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DmtScheme::LongTerm1Bit => "longterm_1bit",
            DmtScheme::ShortTerm1Bit => "shortterm_1bit",
            DmtScheme::FullCsi => "full_csi",
            DmtScheme::Outdated1Bit => "outdated_1bit",
            DmtScheme::NoCsi => "no_csi",
            DmtScheme::P2p1Bit => "p2p_1bit",
        }
    }

    /// Diversity at `r = 0`.
    pub fn max_diversity(&self, k: usize) -> usize {
        match self {
            DmtScheme::LongTerm1Bit => 2 * k,
            DmtScheme::ShortTerm1Bit | DmtScheme::FullCsi => k,
            DmtScheme::Outdated1Bit | DmtScheme::NoCsi => 1,
            DmtScheme::P2p1Bit => 2,
        }
    }
}

impl fmt::Display for DmtScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DmtScheme {
    type Err = Error;

    /// Accepts the canonical tag, with or without the `_1bit` suffix.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        DmtScheme::ALL
            .into_iter()
            .find(|sch| {
                sch.as_str() == key || sch.as_str().strip_suffix("_1bit") == Some(key.as_str())
            })
            .ok_or_else(|| Error::domain(format!("unknown DMT scheme '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DmtPoint<T> {
    pub r: T,
    pub d: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DmtCurve<T> {
    pub scheme: DmtScheme,
    pub points: Vec<DmtPoint<T>>,
}

/// Piecewise-linear tradeoff `d(r) = d_max (1 - r)+` sampled at `r = 0, 0.1, ..., 1`.
pub fn dmt_analytic<T: Real>(scheme: DmtScheme, k: usize) -> Result<DmtCurve<T>> {
    if k == 0 {
        return Err(Error::domain("need at least one user"));
    }
    let dmax = T::from_count(scheme.max_diversity(k));
    let points = (0..=10)
        .map(|i| {
            let r = T::from_count(i) / T::lit(10.0);
            DmtPoint {
                r,
                d: dmax * (T::one() - r).max(T::zero()),
            }
        })
        .collect();
    Ok(DmtCurve { scheme, points })
}

/// Finite-SNR diversity estimate: the secant `-Δ log ε / Δ log P` between
/// `p_lo` and `p_hi`.
///
/// `eps_fn(P, R)` is evaluated at `R = r log P`. At `r = 0` that rate would be
/// zero, so a fixed rate of 1 nat is used instead.
pub fn dmt_empirical_slope<T, F>(eps_fn: F, r: T, p_lo: T, p_hi: T) -> Result<T>
where
    T: Real,
    F: Fn(T, T) -> Result<T>,
{
    if !(p_lo > T::one() && p_hi > p_lo && p_hi.is_finite()) {
        return Err(Error::domain("need 1 < P_lo < P_hi"));
    }
    if !(r >= T::zero() && r < T::one()) {
        return Err(Error::domain("multiplexing gain must lie in [0, 1)"));
    }
    let rate = |p: T| if r > T::zero() { r * p.ln() } else { T::one() };
    let floor = T::lit(1e-300);
    let lo = eps_fn(p_lo, rate(p_lo))?;
    let hi = eps_fn(p_hi, rate(p_hi))?;
    if !(lo >= floor && hi >= floor) {
        return Err(Error::Range(format!(
            "outage underflows below 1e-300 (eps = {hi:e}); lower P_hi"
        )));
    }
    Ok(-(hi.ln() - lo.ln()) / (p_hi.ln() - p_lo.ln()))
}
