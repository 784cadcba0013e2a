use serde::Serialize;

use crate::error::{HceError, Result};
use crate::exec::Execution;
use crate::model::{compare, Arm, Comparison, HceDataset, OrderKey};

/// Pairwise comparison totals, always from the active arm's point of view.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WinCounts {
    pub wins: u64,
    pub losses: u64,
    pub ties: u64,
    pub n_active: u64,
    pub n_control: u64,
}

impl WinCounts {
    pub fn pairs(&self) -> u64 {
        self.n_active * self.n_control
    }

    /// Same comparisons seen from the control arm.
    pub fn swapped(&self) -> WinCounts {
        WinCounts {
            wins: self.losses,
            losses: self.wins,
            ties: self.ties,
            n_active: self.n_control,
            n_control: self.n_active,
        }
    }
}

/// One subject's share of the pairwise comparisons, counted from the active
/// arm's perspective: for an active subject, `wins` is how many controls it
/// beats; for a control subject, how many actives beat it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Tally {
    pub wins: u64,
    pub ties: u64,
    pub losses: u64,
}

/// Per-subject tallies, each arm in its input order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Placements {
    pub active: Vec<Tally>,
    pub control: Vec<Tally>,
}

fn check_arms(n: usize, m: usize) -> Result<()> {
    if n == 0 || m == 0 {
        return Err(HceError::degenerate(format!("both arms must be non-empty (active {n}, control {m})")));
    }
    Ok(())
}

/// Reference implementation: applies [`compare`] to all n·m pairs.
pub fn win_counts_brute(dataset: &HceDataset, exec: Execution) -> Result<WinCounts> {
    let active = dataset.values(Arm::Active);
    let control = dataset.values(Arm::Control);
    check_arms(active.len(), control.len())?;
    let config = dataset.config();
    let rows = exec.map_slice(&active, |a| {
        let mut t = Tally::default();
        for c in &control {
            match compare(a, c, config) {
                Comparison::AWins => t.wins += 1,
                Comparison::BWins => t.losses += 1,
                Comparison::Tie => t.ties += 1,
            }
        }
        t
    });
    let mut counts =
        WinCounts { wins: 0, losses: 0, ties: 0, n_active: active.len() as u64, n_control: control.len() as u64 };
    for t in rows {
        counts.wins += t.wins;
        counts.losses += t.losses;
        counts.ties += t.ties;
    }
    Ok(counts)
}

/// Sort-and-sweep counting in O((n+m) log(n+m)); identical to
/// [`win_counts_brute`].
pub fn win_counts_fast(dataset: &HceDataset) -> Result<WinCounts> {
    let (active, control) = arm_keys(dataset);
    check_arms(active.len(), control.len())?;
    Ok(count_keys(active, control))
}

/// Order keys of each arm, in dataset order.
pub fn arm_keys(dataset: &HceDataset) -> (Vec<OrderKey>, Vec<OrderKey>) {
    let config = dataset.config();
    let mut active = Vec::new();
    let mut control = Vec::new();
    for s in dataset.subjects() {
        let key = config.key(&s.value);
        match s.arm {
            Arm::Active => active.push(key),
            Arm::Control => control.push(key),
        }
    }
    (active, control)
}

/// Counts from two unsorted key vectors (consumed and sorted in place).
pub fn count_keys(mut active: Vec<OrderKey>, mut control: Vec<OrderKey>) -> WinCounts {
    active.sort_unstable();
    control.sort_unstable();
    count_sorted(&active, &control)
}

/// Merge sweep over two ascending key slices.
pub fn count_sorted(active: &[OrderKey], control: &[OrderKey]) -> WinCounts {
    let (n, m) = (active.len(), control.len());
    let (mut i, mut j) = (0usize, 0usize);
    let (mut wins, mut ties) = (0u64, 0u64);
    while i < n {
        let key = active[i];
        let mut a_g = 0u64;
        while i < n && active[i] == key {
            a_g += 1;
            i += 1;
        }
        while j < m && control[j] < key {
            j += 1;
        }
        let below = j as u64;
        let mut c_g = 0u64;
        let mut jj = j;
        while jj < m && control[jj] == key {
            c_g += 1;
            jj += 1;
        }
        wins += a_g * below;
        ties += a_g * c_g;
    }
    let pairs = (n * m) as u64;
    WinCounts { wins, losses: pairs - wins - ties, ties, n_active: n as u64, n_control: m as u64 }
}

/// Counts plus per-subject placements, via one sort of the pooled keys.
pub fn tally_keys(active: &[OrderKey], control: &[OrderKey]) -> (WinCounts, Placements) {
    let (n, m) = (active.len(), control.len());
    let mut pooled: Vec<(OrderKey, Arm, usize)> = active
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, Arm::Active, i))
        .chain(control.iter().enumerate().map(|(j, &k)| (k, Arm::Control, j)))
        .collect();
    pooled.sort_unstable_by_key(|x| x.0);

    let mut placements = Placements { active: vec![Tally::default(); n], control: vec![Tally::default(); m] };
    let (mut a_below, mut c_below) = (0u64, 0u64);
    let (mut wins, mut ties) = (0u64, 0u64);
    let (n64, m64) = (n as u64, m as u64);
    let mut start = 0;
    while start < pooled.len() {
        let key = pooled[start].0;
        let mut end = start;
        let (mut a_g, mut c_g) = (0u64, 0u64);
        while end < pooled.len() && pooled[end].0 == key {
            match pooled[end].1 {
                Arm::Active => a_g += 1,
                Arm::Control => c_g += 1,
            }
            end += 1;
        }
        for &(_, arm, idx) in &pooled[start..end] {
            match arm {
                Arm::Active => {
                    placements.active[idx] = Tally { wins: c_below, ties: c_g, losses: m64 - c_below - c_g };
                }
                Arm::Control => {
                    placements.control[idx] = Tally { wins: n64 - a_below - a_g, ties: a_g, losses: a_below };
                }
            }
        }
        wins += a_g * c_below;
        ties += a_g * c_g;
        a_below += a_g;
        c_below += c_g;
        start = end;
    }
    let counts = WinCounts { wins, losses: n64 * m64 - wins - ties, ties, n_active: n64, n_control: m64 };
    (counts, placements)
}

/// Counts and placements for a dataset.
pub fn tally(dataset: &HceDataset) -> Result<(WinCounts, Placements)> {
    let (active, control) = arm_keys(dataset);
    check_arms(active.len(), control.len())?;
    Ok(tally_keys(&active, &control))
}
