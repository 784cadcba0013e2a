use hce_core::win::{CumulativeRow, Estimate, WinStats};

/// Four significant digits.
pub fn sig4(v: f64) -> String {
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if v == 0.0 {
        return "0.000".into();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (3 - mag).max(0) as usize;
    format!("{v:.decimals$}")
}

fn interval(e: &Estimate) -> String {
    format!("{} ({} to {})", sig4(e.est), sig4(e.lo), sig4(e.hi))
}

pub fn stats_text(s: &WinStats) -> String {
    let c = &s.counts;
    let level = sig4(100.0 * (1.0 - s.alpha));
    let mut out = format!(
        "subjects: active {}, control {}\npairs: {} (wins {}, losses {}, ties {})\n",
        c.n_active,
        c.n_control,
        c.pairs(),
        c.wins,
        c.losses,
        c.ties
    );
    out += &format!(
        "interval: {level}% {}\n",
        match s.ci_method {
            hce_core::win::CiMethod::Analytic => "analytic",
            hce_core::win::CiMethod::Bootstrap => "bootstrap percentile",
        }
    );
    out += &format!("win probability  {}\n", interval(&s.theta));
    out += &format!("win odds         {}\n", interval(&s.win_odds));
    out += &format!("win ratio        {}\n", interval(&s.win_ratio));
    out += &format!("net benefit      {}\n", interval(&s.net_benefit));
    if s.degenerate {
        out += "note: some estimates are 0 or infinite; their intervals are not defined\n";
    }
    out
}

pub fn cumulative_text(rows: &[CumulativeRow]) -> String {
    let mut out = String::from("cumulative components (active win % / tie % / control win %, WO, WR):\n");
    for r in rows {
        let name = r.included_components.last().cloned().unwrap_or_default();
        out += &format!(
            "  {:>2} {:<20} {} / {} / {}  WO {}  WR {}\n",
            r.depth,
            name,
            sig4(r.win_pct_active),
            sig4(r.tie_pct),
            sig4(r.win_pct_control),
            sig4(r.stats.win_odds.est),
            sig4(r.stats.win_ratio.est)
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn four_significant_digits() {
        assert_eq!(sig4(1.22049), "1.220");
        assert_eq!(sig4(0.0123456), "0.01235");
        assert_eq!(sig4(123456.0), "123456");
        assert_eq!(sig4(-2.71828), "-2.718");
        assert_eq!(sig4(f64::INFINITY), "inf");
    }
}
