//! Characteristic travel times and the optimal control time.

use super::profile::Profile;
use super::system::SpeedProfile;
use crate::error::{Error, Result};

/// Travel times of every family plus the two horizons built from them.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeReport {
    /// `tau[i] = ∫_0^1 dx / λ_i(x)`, 0-based.
    pub tau: Vec<f64>,
    pub t_opt: f64,
    /// `τ_k + τ_{k+1}`: the horizon that works for every boundary matrix.
    pub russell_time: f64,
}

/// Travel time of component `i` (0-based) across [0, 1].
///
/// Composite trapezoid of `1/λ_i` on the sample grid; exact for constants.
pub fn tau(speeds: &SpeedProfile, i: usize) -> Result<f64> {
    let profile = speeds.profile(i)?;
    let bad = |sample: usize, value: f64| Error::NonPositiveSpeed {
        component: i,
        sample,
        value,
    };
    match profile {
        Profile::Constant(l) => {
            if *l > 0.0 {
                Ok(1.0 / l)
            } else {
                Err(bad(0, *l))
            }
        }
        Profile::Samples(s) => {
            if let Some((j, &v)) = s.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
                return Err(bad(j, v));
            }
            let h = 1.0 / (s.len() - 1) as f64;
            let interior: f64 = s[1..s.len() - 1].iter().map(|v| 1.0 / v).sum();
            Ok(h * (0.5 / s[0] + interior + 0.5 / s[s.len() - 1]))
        }
    }
}

/// Optimal time:
/// `max{τ_1+τ_{m+1}, …, τ_k+τ_{m+k}, τ_{k+1}}` when `m >= k`, and
/// `max{τ_{k+1-m}+τ_{k+1}, …, τ_k+τ_{k+m}}` when `m < k`.
pub fn t_opt(speeds: &SpeedProfile) -> Result<TimeReport> {
    let (k, m) = (speeds.k(), speeds.m());
    if k == 0 || m == 0 || speeds.n() != k + m {
        return Err(Error::Dimension(format!(
            "need k, m >= 1 and n = k + m (k = {k}, m = {m}, n = {})",
            speeds.n()
        )));
    }
    let tau = (0..speeds.n())
        .map(|i| tau(speeds, i))
        .collect::<Result<Vec<_>>>()?;
    let t_opt = if m >= k {
        (0..k).map(|i| tau[i] + tau[m + i]).fold(tau[k], f64::max)
    } else {
        (0..m)
            .map(|j| tau[k - m + j] + tau[k + j])
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let russell_time = tau[k - 1] + tau[k];
    Ok(TimeReport {
        tau,
        t_opt,
        russell_time,
    })
}
