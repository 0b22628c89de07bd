//! Data behind the figures: one table per curve.

use std::f64::consts::LN_2;

use rayon::prelude::*;

use onebit::ergodic::{
    affine_rate_approx, full_csi_rate, no_csi_rate, optimal_threshold, power_for_ebn0,
    solve_power_for_ebn0, sum_rate, wideband_metrics, wideband_threshold,
};
use onebit::outage::{dmt_analytic, outage_outdated, DmtScheme};
use onebit::{CorrelationParams, ErgodicConfig, OutageConfig, PowerMode, QuadratureSpec};

use crate::args::{FigureId, Params, SweepParam};
use crate::commands::DEFAULT_RATE_BITS;
use crate::error::CliError;
use crate::table::{Column, Table};

/// One curve of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub table: Table,
}

impl Series {
    fn new(name: impl Into<String>, columns: Vec<Column>, rows: Vec<Vec<f64>>) -> Self {
        let mut table = Table::new(columns);
        table.rows = rows;
        Self {
            name: name.into(),
            table,
        }
    }
}

pub const FIG1_RHOS: [f64; 4] = [1.0, 0.9, 0.5, 0.0];
pub const FIG2_RHOS: [f64; 4] = [1.0, 0.9, 0.5, 0.0];
pub const FIG4_RHOS: [f64; 5] = [0.0, 0.5, 0.9, 0.99, 1.0];

fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Grid for `param`: the user's sweep if one targets it, otherwise `default`.
fn grid(params: &Params, param: SweepParam, default: Vec<f64>) -> Vec<f64> {
    params
        .sweep
        .iter()
        .find(|s| s.param == param)
        .map_or(default, |s| s.values())
}

fn snr_grid(params: &Params) -> Vec<f64> {
    grid(
        params,
        SweepParam::SnrDb,
        (0..=20).map(|i| 2.0 * i as f64).collect(),
    )
}

fn rate_nats(params: &Params) -> f64 {
    params
        .rate_nats
        .unwrap_or(params.rate_bits.unwrap_or(DEFAULT_RATE_BITS) * LN_2)
}

fn rho_label(rho: f64) -> String {
    format!("rho_{rho}")
}

pub fn figure(id: FigureId, params: &Params) -> Result<Vec<Series>, CliError> {
    let q = QuadratureSpec::default();
    match id {
        FigureId::Fig1 => fig1(params, &q),
        FigureId::Fig2 => fig2(params, &q),
        FigureId::Fig3 => fig3(params),
        FigureId::Fig4 => fig4(params),
        FigureId::Fig5 => fig5(params),
    }
}

/// Ergodic sum-rate against K at fixed SNR: full CSI, 1-bit feedback at the
/// optimal threshold for several rho, and no CSI.
pub fn fig1(params: &Params, q: &QuadratureSpec) -> Result<Vec<Series>, CliError> {
    let power = db_to_linear(params.snr_db.unwrap_or(20.0));
    let ks: Vec<usize> = grid(
        params,
        SweepParam::K,
        (1..=10).map(|i| f64::from(1u32 << i)).collect(),
    )
    .into_iter()
    .map(|k| k.round().max(1.0) as usize)
    .collect();
    let columns = || {
        vec![
            Column::new("k", "users"),
            Column::new("rate", "nats"),
            Column::new("rate", "bits"),
        ]
    };
    let row = |k: usize, r: f64| vec![k as f64, r, r / LN_2];

    let full = ks
        .par_iter()
        .map(|&k| Ok(row(k, full_csi_rate(k, power, q)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut out = vec![Series::new("full_csi", columns(), full)];
    for rho in FIG1_RHOS {
        let c = CorrelationParams::new(rho)?;
        let rows = ks
            .par_iter()
            .map(|&k| {
                let alpha = optimal_threshold(k, power, c, q)?;
                Ok(row(
                    k,
                    sum_rate(&ErgodicConfig::new(k, power, c, alpha)?, q)?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        out.push(Series::new(
            format!("onebit_{}", rho_label(rho)),
            columns(),
            rows,
        ));
    }
    let none = ks.iter().map(|&k| row(k, no_csi_rate(power))).collect();
    out.push(Series::new("no_csi", columns(), none));
    Ok(out)
}

/// Low-SNR rate against Eb/N0: exact 1-bit curves at the wideband-optimal
/// threshold, their affine approximations, and the full/no-CSI references.
pub fn fig2(params: &Params, q: &QuadratureSpec) -> Result<Vec<Series>, CliError> {
    let k = params.k.unwrap_or(100);
    let ebn0_grid: Vec<f64> = (0..=40).map(|i| -12.0 + 0.5 * i as f64).collect();
    let columns = || {
        vec![
            Column::new("ebn0", "dB"),
            Column::new("rate", "bits"),
            Column::new("rate", "nats"),
            Column::new("snr", "dB"),
        ]
    };
    let above = |min_db: f64| -> Vec<f64> {
        ebn0_grid
            .iter()
            .copied()
            .filter(|&x| x > min_db + 0.05)
            .collect()
    };
    let solved_row =
        |ebn0_db: f64, (p, bits): (f64, f64)| vec![ebn0_db, bits, bits * LN_2, 10.0 * p.log10()];

    let mut out = Vec::new();
    let harmonic: f64 = (1..=k).map(|i| 1.0 / i as f64).sum();
    let full_min_db = 10.0 * (LN_2 / harmonic).log10();
    let rows = above(full_min_db)
        .par_iter()
        .map(|&x| {
            let s = power_for_ebn0(|p| full_csi_rate(k, p, q), db_to_linear(x))?;
            Ok(solved_row(x, s))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    out.push(Series::new("full_csi", columns(), rows));

    for rho in FIG2_RHOS {
        let c = CorrelationParams::new(rho)?;
        let alpha = wideband_threshold(k, c)?;
        let report = wideband_metrics(alpha, k, c)?;
        let xs = above(report.ebn0_min_db);
        let exact = xs
            .par_iter()
            .map(|&x| {
                Ok(solved_row(
                    x,
                    solve_power_for_ebn0(k, c, alpha, db_to_linear(x), q)?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let affine = xs
            .iter()
            .map(|&x| {
                let bits = affine_rate_approx(x, &report);
                vec![x, bits, bits * LN_2, f64::NAN]
            })
            .collect();
        out.push(Series::new(
            format!("onebit_{}", rho_label(rho)),
            columns(),
            exact,
        ));
        out.push(Series::new(
            format!("affine_{}", rho_label(rho)),
            columns(),
            affine,
        ));
    }

    let rows = above(10.0 * LN_2.log10())
        .par_iter()
        .map(|&x| {
            let s = power_for_ebn0(|p| Ok(no_csi_rate(p)), db_to_linear(x))?;
            Ok(solved_row(x, s))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    out.push(Series::new("no_csi", columns(), rows));
    Ok(out)
}

fn outage_columns() -> Vec<Column> {
    vec![Column::new("snr", "dB"), Column::new("eps", "prob")]
}

fn outage_curve(
    k: usize,
    rho: f64,
    r: f64,
    mode: PowerMode,
    snrs: &[f64],
) -> Result<Vec<Vec<f64>>, CliError> {
    let c = CorrelationParams::new(rho)?;
    snrs.par_iter()
        .map(|&s| {
            let cfg = OutageConfig::with_default_threshold(k, db_to_linear(s), c, r, mode)?;
            Ok(vec![s, outage_outdated(&cfg)?.eps])
        })
        .collect()
}

/// Outage against SNR with instantaneous feedback, both power constraints.
pub fn fig3(params: &Params) -> Result<Vec<Series>, CliError> {
    let r = rate_nats(params);
    let snrs = snr_grid(params);
    let ks = match params.k {
        Some(k) => vec![k],
        None => vec![1, 8, 16],
    };
    let mut out = Vec::new();
    for k in ks {
        for (mode, tag) in [
            (PowerMode::ShortTerm, "short_term"),
            (PowerMode::LongTermTwoLevel, "long_term"),
        ] {
            let rows = outage_curve(k, 1.0, r, mode, &snrs)?;
            out.push(Series::new(format!("k{k}_{tag}"), outage_columns(), rows));
        }
    }
    Ok(out)
}

/// Outage against SNR under the long-term constraint for several rho, with
/// the single-user no-feedback reference.
pub fn fig4(params: &Params) -> Result<Vec<Series>, CliError> {
    let k = params.k.unwrap_or(16);
    let r = rate_nats(params);
    let snrs = snr_grid(params);
    let mut out = Vec::new();
    for rho in FIG4_RHOS {
        let rows = outage_curve(k, rho, r, PowerMode::LongTermTwoLevel, &snrs)?;
        out.push(Series::new(
            format!("onebit_{}", rho_label(rho)),
            outage_columns(),
            rows,
        ));
    }
    let none = snrs
        .iter()
        .map(|&s| vec![s, -(-r.exp_m1() / db_to_linear(s)).exp_m1()])
        .collect();
    out.push(Series::new("no_csi", outage_columns(), none));
    Ok(out)
}

/// Diversity-multiplexing tradeoff curves.
pub fn fig5(params: &Params) -> Result<Vec<Series>, CliError> {
    let k = params.k.unwrap_or(16);
    DmtScheme::ALL
        .iter()
        .map(|&scheme| {
            let curve = dmt_analytic::<f64>(scheme, k)?;
            let rows = curve.points.iter().map(|p| vec![p.r, p.d]).collect();
            Ok(Series::new(
                scheme.as_str(),
                vec![Column::new("r", "1"), Column::new("d", "1")],
                rows,
            ))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig5_has_six_curves_with_expected_intercepts() {
        let s = fig5(&Params::default()).unwrap();
        assert_eq!(s.len(), 6);
        let d0 = |name: &str| s.iter().find(|c| c.name == name).unwrap().table.rows[0][1];
        assert_eq!(d0("longterm_1bit"), 32.0);
        assert_eq!(d0("shortterm_1bit"), 16.0);
        assert_eq!(d0("outdated_1bit"), 1.0);
        assert_eq!(d0("p2p_1bit"), 2.0);
    }

    #[test]
    fn fig3_long_term_wins_at_high_snr() {
        let s = fig3(&Params::default()).unwrap();
        assert_eq!(s.len(), 6);
        for pair in s.chunks(2) {
            let rows = pair[0].table.rows.iter().zip(&pair[1].table.rows);
            for (a, b) in rows.filter(|(a, _)| a[0] >= 16.0) {
                assert!(
                    b[1] <= a[1] * (1.0 + 1e-12),
                    "{} vs {}",
                    pair[0].name,
                    pair[1].name
                );
            }
        }
    }

    #[test]
    fn fig2_affine_tracks_exact_near_the_minimum() {
        let p = Params {
            k: Some(10),
            ..Params::default()
        };
        let s = fig2(&p, &QuadratureSpec::default()).unwrap();
        let exact = &s.iter().find(|c| c.name == "onebit_rho_0.9").unwrap().table;
        let affine = &s.iter().find(|c| c.name == "affine_rho_0.9").unwrap().table;
        assert_eq!(exact.rows.len(), affine.rows.len());
        let (e, a) = (&exact.rows[0], &affine.rows[0]);
        assert_eq!(e[0], a[0]);
        assert!((e[1] - a[1]).abs() <= 0.1 * e[1], "{e:?} {a:?}");
    }
}
