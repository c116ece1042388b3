//! Entanglement sudden death and birth times.
//!
//! With `|ξ|² = e^{−Γt}` and the full mode set, the atom pair loses its
//! entanglement when `|ξ|² = 1 − cot θ` and the emitted photon pair gains
//! entanglement when `|ξ|² = cot θ`. Both only happen for `θ > π/4`.

use num_complex::Complex64 as C64;
use serde::Serialize;
use std::f64::consts::FRAC_PI_4;

use super::collective::{collective_reduced, Pair};
use super::jc::{check_theta, jc_state};
use super::ww::WwPropagator;
use crate::error::{invalid, Error, Result};
use crate::measures::{q_auxiliary, ATOMS};

/// Threshold above which `Q` counts as entangled in the root finders.
pub const ENTANGLED_Q: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuddenTime {
    At(f64),
    Never,
}

impl SuddenTime {
    pub fn time(self) -> Option<f64> {
        match self {
            Self::At(t) => Some(t),
            Self::Never => None,
        }
    }
}

fn check_rate(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return invalid(format!("Γ = {gamma} must be positive"));
    }
    Ok(())
}

fn fragile(theta: f64) -> bool {
    theta > FRAC_PI_4 + 1e-15
}

/// `t_d = −ln(1 − cot θ)/Γ`.
pub fn esd_death_time(theta: f64, gamma: f64) -> Result<SuddenTime> {
    check_theta(theta)?;
    check_rate(gamma)?;
    if !fragile(theta) {
        return Ok(SuddenTime::Never);
    }
    let cot = theta.cos() / theta.sin();
    Ok(SuddenTime::At(-(1.0 - cot).ln() / gamma))
}

/// `t_b = −ln(cot θ)/Γ`.
pub fn esb_birth_time(theta: f64, gamma: f64) -> Result<SuddenTime> {
    check_theta(theta)?;
    check_rate(gamma)?;
    let cot = theta.cos() / theta.sin();
    if !fragile(theta) || cot <= 0.0 {
        return Ok(SuddenTime::Never);
    }
    Ok(SuddenTime::At(-cot.ln() / gamma))
}

fn pair_q(theta: f64, prop: &WwPropagator, t: f64, pair: Pair) -> Result<f64> {
    let (xi, lambdas) = prop.amplitudes(t);
    let chi = lambdas.iter().map(C64::norm_sqr).sum::<f64>().sqrt().min(1.0);
    q_auxiliary(&collective_reduced(theta, xi, chi, pair)?)
}

/// First time the predicate flips from its `t = 0` value, by bracket
/// doubling then bisection down to `tol`.
fn first_flip(pred: impl Fn(f64) -> Result<bool>, guess: f64, limit: f64, tol: f64) -> Result<Option<f64>> {
    let start = pred(0.0)?;
    let mut lo = 0.0;
    let mut hi = guess.max(tol);
    loop {
        if pred(hi)? != start {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > limit {
            return Ok(None);
        }
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if pred(mid)? == start {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

fn search_limit(prop: &WwPropagator, gamma: f64) -> f64 {
    prop.bath().horizon().map_or(100.0 / gamma, |h| 0.5 * h)
}

/// Death time from the atom-atom concurrence with every bath mode in the
/// collective mode. Robust states decay only asymptotically and give `Never`,
/// as does a search that reaches half the recurrence time.
pub fn death_time_numeric(theta: f64, prop: &WwPropagator, gamma: f64) -> Result<SuddenTime> {
    check_theta(theta)?;
    check_rate(gamma)?;
    if !fragile(theta) || pair_q(theta, prop, 0.0, Pair::Atoms)? <= ENTANGLED_Q {
        return Ok(SuddenTime::Never);
    }
    let pred = |t: f64| Ok(pair_q(theta, prop, t, Pair::Atoms)? > ENTANGLED_Q);
    let t = first_flip(pred, 0.25 / gamma, search_limit(prop, gamma), 1e-8 / gamma)?;
    Ok(t.map_or(SuddenTime::Never, SuddenTime::At))
}

/// Birth time of photon-photon entanglement, as [`death_time_numeric`].
pub fn birth_time_numeric(theta: f64, prop: &WwPropagator, gamma: f64) -> Result<SuddenTime> {
    check_theta(theta)?;
    check_rate(gamma)?;
    if !fragile(theta) {
        return Ok(SuddenTime::Never);
    }
    let pred = |t: f64| Ok(pair_q(theta, prop, t, Pair::Photons)? > ENTANGLED_Q);
    let t = first_flip(pred, 0.25 / gamma, search_limit(prop, gamma), 1e-8 / gamma)?;
    Ok(t.map_or(SuddenTime::Never, SuddenTime::At))
}

/// `[arcsin √cot θ, π − arcsin √cot θ]`: the `Jt` interval inside `[0, π]`
/// where the JC atom pair is disentangled.
pub fn jc_esd_window_closed(theta: f64) -> Result<Option<(f64, f64)>> {
    check_theta(theta)?;
    if !fragile(theta) {
        return Ok(None);
    }
    let a = (theta.cos() / theta.sin()).sqrt().asin();
    Ok(Some((a, std::f64::consts::PI - a)))
}

/// Numeric JC death window over one period `Jt ∈ [0, π]`, located by a grid
/// scan of the atom-atom `Q` and refined by bisection to `1e-12`.
pub fn jc_esd_window(theta: f64) -> Result<Option<(f64, f64)>> {
    check_theta(theta)?;
    // robust states only touch zero at isolated instants
    if !fragile(theta) {
        return Ok(None);
    }
    let q = |jt: f64| -> Result<f64> { q_auxiliary(&jc_state(theta, jt)?.reduced_state(&ATOMS)?) };
    let n = 1024;
    let pi = std::f64::consts::PI;
    let grid: Vec<f64> = (0..=n).map(|i| pi * i as f64 / n as f64).collect();
    let dead: Vec<bool> = grid
        .iter()
        .map(|&t| q(t).map(|v| v <= ENTANGLED_Q))
        .collect::<Result<_>>()?;
    let (Some(first), Some(last)) = (dead.iter().position(|&d| d), dead.iter().rposition(|&d| d)) else {
        return Ok(None);
    };
    if first == 0 || last == n {
        return Err(Error::Numeric("atom pair disentangled at the window edge".into()));
    }
    let bisect = |mut alive: f64, mut gone: f64| -> Result<f64> {
        while (gone - alive).abs() > 1e-12 {
            let mid = 0.5 * (alive + gone);
            if q(mid)? > ENTANGLED_Q {
                alive = mid;
            } else {
                gone = mid;
            }
        }
        Ok(0.5 * (alive + gone))
    };
    Ok(Some((
        bisect(grid[first - 1], grid[first])?,
        bisect(grid[last + 1], grid[last])?,
    )))
}
