use serde::{Serialize, Serializer};
use statrs::distribution::{ContinuousCDF, Normal};

use super::counting::{Placements, Tally, WinCounts};
use crate::error::{HceError, Result};

/// Writes non-finite floats as the strings `"inf"`, `"-inf"` and `"nan"`.
pub fn serialize_f64<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if v.is_nan() {
        s.serialize_str("nan")
    } else if *v > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// Point estimate with a two-sided interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Estimate {
    #[serde(serialize_with = "serialize_f64")]
    pub est: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub lo: f64,
    #[serde(serialize_with = "serialize_f64")]
    pub hi: f64,
}

impl Estimate {
    pub fn point(v: f64) -> Self {
        Estimate { est: v, lo: v, hi: v }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Interval width on the log scale (for ratio estimands).
    pub fn log_width(&self) -> f64 {
        self.hi.ln() - self.lo.ln()
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo <= v && v <= self.hi
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CiMethod {
    Analytic,
    Bootstrap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WinStats {
    pub counts: WinCounts,
    /// Win probability, ties counted half.
    pub theta: Estimate,
    pub win_odds: Estimate,
    pub win_ratio: Estimate,
    pub net_benefit: Estimate,
    pub alpha: f64,
    pub ci_method: CiMethod,
    /// Set when an estimate is zero or infinite and its interval cannot be formed.
    pub degenerate: bool,
}

/// Point estimates from counts alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointEstimates {
    pub theta: f64,
    pub win_odds: f64,
    pub win_ratio: f64,
    pub net_benefit: f64,
}

impl PointEstimates {
    pub fn from_counts(c: &WinCounts) -> Self {
        let (w, l, t) = (c.wins as f64, c.losses as f64, c.ties as f64);
        let pairs = c.pairs() as f64;
        PointEstimates {
            theta: (2.0 * w + t) / (2.0 * pairs),
            // (w + t/2) / (l + t/2), scaled by two so that t = 0 reproduces w / l bit for bit
            win_odds: (2.0 * w + t) / (2.0 * l + t),
            win_ratio: w / l,
            net_benefit: (w - l) / pairs,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        let bad = |x: f64| !x.is_finite() || x == 0.0;
        bad(self.win_odds) || bad(self.win_ratio)
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(HceError::invalid(format!("alpha must be in (0, 1), got {alpha}")));
    }
    Ok(())
}

pub(crate) fn z_quantile(alpha: f64) -> f64 {
    Normal::standard().inverse_cdf(1.0 - alpha / 2.0)
}

/// Sample covariance matrix (divisor n − 1) of the win and loss fractions.
fn placement_cov(tallies: &[Tally], denom: f64) -> (f64, f64, f64) {
    let k = tallies.len() as f64;
    let xs = tallies.iter().map(|t| t.wins as f64 / denom);
    let ys = tallies.iter().map(|t| t.losses as f64 / denom);
    let mx = xs.clone().sum::<f64>() / k;
    let my = ys.clone().sum::<f64>() / k;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    (sxx / (k - 1.0), syy / (k - 1.0), sxy / (k - 1.0))
}

/// Large-sample covariance of (P̂(win), P̂(loss)) from the two-sample
/// U-statistic decomposition: Cov_active / n + Cov_control / m.
pub fn win_loss_covariance(counts: &WinCounts, placements: &Placements) -> (f64, f64, f64) {
    let (n, m) = (counts.n_active as f64, counts.n_control as f64);
    let (a_ww, a_ll, a_wl) = placement_cov(&placements.active, m);
    let (c_ww, c_ll, c_wl) = placement_cov(&placements.control, n);
    (a_ww / n + c_ww / m, a_ll / n + c_ll / m, a_wl / n + c_wl / m)
}

fn logistic(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Point estimates and analytic intervals.
///
/// θ and win odds share one interval on the logit scale, the win ratio is
/// built on the log scale with the delta method, net benefit on the identity
/// scale (clamped to [−1, 1]).
pub fn win_statistics(counts: &WinCounts, placements: &Placements, alpha: f64) -> Result<WinStats> {
    check_alpha(alpha)?;
    if counts.n_active < 2 || counts.n_control < 2 {
        return Err(HceError::degenerate(format!(
            "analytic intervals need at least 2 subjects per arm (active {}, control {}); use the bootstrap method",
            counts.n_active, counts.n_control
        )));
    }
    if placements.active.len() as u64 != counts.n_active || placements.control.len() as u64 != counts.n_control {
        return Err(HceError::invalid("placements do not match the counts"));
    }
    let pts = PointEstimates::from_counts(counts);
    let z = z_quantile(alpha);
    let pairs = counts.pairs() as f64;
    let (pw, pl) = (counts.wins as f64 / pairs, counts.losses as f64 / pairs);
    let (vww, vll, vwl) = win_loss_covariance(counts, placements);
    let var_nb = (vww + vll - 2.0 * vwl).max(0.0);
    let se_theta = var_nb.sqrt() / 2.0;

    let mut degenerate = false;
    let (theta, win_odds) = if pts.theta > 0.0 && pts.theta < 1.0 {
        let logit = pts.win_odds.ln();
        let h = z * se_theta / (pts.theta * (1.0 - pts.theta));
        (
            Estimate { est: pts.theta, lo: logistic(logit - h), hi: logistic(logit + h) },
            Estimate { est: pts.win_odds, lo: (logit - h).exp(), hi: (logit + h).exp() },
        )
    } else {
        degenerate = true;
        (Estimate::point(pts.theta), Estimate::point(pts.win_odds))
    };

    let win_ratio = if counts.wins > 0 && counts.losses > 0 {
        let log_wr = pts.win_ratio.ln();
        let var = (vww / (pw * pw) + vll / (pl * pl) - 2.0 * vwl / (pw * pl)).max(0.0);
        let h = z * var.sqrt();
        Estimate { est: pts.win_ratio, lo: (log_wr - h).exp(), hi: (log_wr + h).exp() }
    } else {
        degenerate = true;
        // 0/0 when every pair ties; report the null value
        let est = if pts.win_ratio.is_nan() { 1.0 } else { pts.win_ratio };
        Estimate::point(est)
    };

    let h_nb = z * var_nb.sqrt();
    let net_benefit = Estimate {
        est: pts.net_benefit,
        lo: (pts.net_benefit - h_nb).max(-1.0),
        hi: (pts.net_benefit + h_nb).min(1.0),
    };

    Ok(WinStats {
        counts: *counts,
        theta,
        win_odds,
        win_ratio,
        net_benefit,
        alpha,
        ci_method: CiMethod::Analytic,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counts(w: u64, l: u64, t: u64, n: u64, m: u64) -> WinCounts {
        WinCounts { wins: w, losses: l, ties: t, n_active: n, n_control: m }
    }

    #[test]
    fn hand_counted_point_estimates() {
        let p = PointEstimates::from_counts(&counts(2, 1, 1, 2, 2));
        assert_eq!(p.theta, 0.625);
        assert!((p.win_odds - 5.0 / 3.0).abs() < 1e-15);
        assert_eq!(p.win_ratio, 2.0);
        assert_eq!(p.net_benefit, 0.25);
    }

    #[test]
    fn null_counts_give_unit_ratios() {
        for t in [0, 3, 17] {
            let p = PointEstimates::from_counts(&counts(5, 5, t, 3, 9 + t / 3));
            assert_eq!(p.win_odds, 1.0);
            assert_eq!(p.win_ratio, 1.0);
            assert_eq!(p.net_benefit, 0.0);
        }
    }

    #[test]
    fn no_ties_odds_equal_ratio_exactly() {
        for (w, l) in [(7u64, 3u64), (1234, 4321), (99991, 17)] {
            let p = PointEstimates::from_counts(&counts(w, l, 0, 1, w + l));
            assert_eq!(p.win_odds.to_bits(), p.win_ratio.to_bits());
        }
    }

    #[test]
    fn all_wins_degenerate() {
        let c = counts(4, 0, 0, 2, 2);
        let placements = Placements {
            active: vec![Tally { wins: 2, ties: 0, losses: 0 }; 2],
            control: vec![Tally { wins: 2, ties: 0, losses: 0 }; 2],
        };
        let s = win_statistics(&c, &placements, 0.05).unwrap();
        assert_eq!(s.theta.est, 1.0);
        assert!(s.win_odds.est.is_infinite());
        assert!(s.win_ratio.est.is_infinite());
        assert!(s.degenerate);
        let json = serde_json::to_string(&s).unwrap();
        assert!(json.contains(r#""est":"inf""#), "{json}");
    }

    #[test]
    fn small_arms_need_bootstrap() {
        let c = counts(1, 0, 0, 1, 1);
        let p = Placements {
            active: vec![Tally { wins: 1, ..Default::default() }],
            control: vec![Tally { wins: 1, ..Default::default() }],
        };
        let err = win_statistics(&c, &p, 0.05).unwrap_err();
        assert!(err.to_string().contains("bootstrap"));
    }

    #[test]
    fn alpha_domain() {
        assert!(check_alpha(0.0).is_err());
        assert!(check_alpha(1.0).is_err());
        assert!(check_alpha(0.05).is_ok());
    }
}
