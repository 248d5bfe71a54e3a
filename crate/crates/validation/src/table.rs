//! The reference convergence grid: both hops share a data link with
//! `k = m = 1` at distance 0.5 and an interference link with `k = 4`, `m = 3`
//! at distance `d_j`; `alpha = 4` and `P_max/N0 = 20 dB`.

use gkrelay::capacity::{convergence_study, Scenario, DEFAULT_REFERENCE_ORDER};
use gkrelay::channel::{GKLink, HopChannels, SystemParams};

/// Interference-link distances (rows).
pub const INTERFERENCE_DISTANCES: [f64; 4] = [0.05, 0.1, 0.3, 0.8];
/// Interference temperatures in dB (columns).
pub const W_DB: [f64; 3] = [0.0, 10.0, 15.0];
pub const PMAX_DB: f64 = 20.0;
pub const ALPHA: f64 = 4.0;
/// Reference term counts for the grid.
pub const REFERENCE_COUNTS: [[usize; 3]; 4] = [[49, 51, 51], [52, 56, 57], [57, 58, 58], [58, 59, 60]];
/// Accepted deviation from [`REFERENCE_COUNTS`].
pub const COUNT_TOLERANCE: usize = 3;

pub fn hop(dj: f64) -> HopChannels {
    HopChannels::new(
        GKLink::new(1.0, 1.0, 0.5, ALPHA).expect("valid data link"),
        GKLink::new(4.0, 3.0, dj, ALPHA).expect("valid interference link"),
    )
}

pub fn scenario(dj: f64, w_db: f64) -> Scenario {
    let sys = SystemParams::from_db(w_db, PMAX_DB).expect("valid system parameters");
    Scenario::new(hop(dj), hop(dj), sys)
}

/// Every `(row, column, d_j, w_db)` of the grid in row-major order.
pub fn cells() -> impl Iterator<Item = (usize, usize, f64, f64)> {
    INTERFERENCE_DISTANCES
        .iter()
        .enumerate()
        .flat_map(|(r, &dj)| W_DB.iter().enumerate().map(move |(c, &w)| (r, c, dj, w)))
}

/// Convergence count of one cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Count {
    Converged(usize),
    /// No order below the reference order agreed with it.
    NotConverged,
}

impl Count {
    /// Position in the monotonicity ordering (non-converged cells last).
    fn rank(self) -> usize {
        match self {
            Count::Converged(n) => n,
            Count::NotConverged => usize::MAX,
        }
    }

    pub fn within_tolerance(self, reference: usize) -> bool {
        match self {
            Count::Converged(n) => n.abs_diff(reference) <= COUNT_TOLERANCE,
            Count::NotConverged => false,
        }
    }
}

impl std::fmt::Display for Count {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Count::Converged(n) => write!(f, "{n}"),
            Count::NotConverged => write!(f, ">{}", DEFAULT_REFERENCE_ORDER - 1),
        }
    }
}

/// Runs the convergence study on every cell.
pub fn convergence_counts() -> gkrelay::Result<[[Count; 3]; 4]> {
    let mut out = [[Count::NotConverged; 3]; 4];
    for (r, c, dj, w) in cells() {
        out[r][c] = match convergence_study(&scenario(dj, w), DEFAULT_REFERENCE_ORDER) {
            Ok(n) => Count::Converged(n),
            Err(gkrelay::Error::NotConverged { .. }) => Count::NotConverged,
            Err(e) => return Err(e),
        };
    }
    Ok(out)
}

/// Whether counts are non-decreasing along every row and every column.
pub fn is_monotone(counts: &[[Count; 3]; 4]) -> bool {
    let rows = counts
        .iter()
        .all(|row| row.windows(2).all(|p| p[0].rank() <= p[1].rank()));
    let cols = (0..3).all(|c| counts.windows(2).all(|p| p[0][c].rank() <= p[1][c].rank()));
    rows && cols
}
