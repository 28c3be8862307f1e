use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{build_eq_gadget, GadgetSpec};
use crate::algos::wl_congest;
use crate::graph::metrics;
use crate::{Error, Result};

/// Largest gadget scale the scan accepts.
pub const SCAN_MAX_N: usize = 64;
pub const SCAN_MAX_M: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub n: usize,
    pub m: usize,
    pub w: usize,
    pub path_len: usize,
    pub seed: u64,
    pub diameter: usize,
    pub rounds: usize,
    pub total_words: u64,
}

/// Runs `wl_congest` on one random gadget per `m` (bits drawn from
/// `seed + m`) for every width. Rows are ordered by `m`, then `w`.
pub fn gadget_round_scan(n: usize, ms: &[usize], ws: &[usize], path_len: usize, seed: u64) -> Result<Vec<ScanRow>> {
    if n > SCAN_MAX_N || ms.iter().any(|&m| m > SCAN_MAX_M) {
        return Err(Error::param(format!("scan limited to n <= {SCAN_MAX_N}, m <= {SCAN_MAX_M}")));
    }
    let cells: Vec<(usize, usize)> = ms.iter().flat_map(|&m| ws.iter().map(move |&w| (m, w))).collect();
    cells
        .into_par_iter()
        .map(|(m, w)| {
            let cell_seed = seed.wrapping_add(m as u64);
            let spec = GadgetSpec::random(n, m, false, cell_seed)?.with_path_len(path_len);
            let gg = build_eq_gadget(&spec)?;
            let diameter = metrics(&gg.graph).diameter.ok_or(Error::Disconnected)?;
            let (_, log) = wl_congest(&gg.graph, &gg.colors, w)?;
            Ok(ScanRow { n, m, w, path_len, seed: cell_seed, diameter, rounds: log.rounds, total_words: log.total_words })
        })
        .collect()
}

/// Rows breaking "nondecreasing in m at fixed w" or "nonincreasing in w at
/// fixed m", described one per line.
pub fn trend_violations(rows: &[ScanRow]) -> Vec<String> {
    let mut out = Vec::new();
    for a in rows {
        for b in rows {
            if (a.n, a.path_len) != (b.n, b.path_len) {
                continue;
            }
            if a.w == b.w && a.m < b.m && a.rounds > b.rounds {
                out.push(format!("w={}: m={} takes {} rounds but m={} takes {}", a.w, a.m, a.rounds, b.m, b.rounds));
            }
            if a.m == b.m && a.w < b.w && a.rounds < b.rounds {
                out.push(format!("m={}: w={} takes {} rounds but w={} takes {}", a.m, a.w, a.rounds, b.w, b.rounds));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_scan_follows_trends() {
        let rows = gadget_round_scan(4, &[4, 8, 16], &[1, 2, 4], 0, 7).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(trend_violations(&rows).is_empty(), "{:?}", trend_violations(&rows));
    }

    #[test]
    fn oversized_scan_rejected() {
        assert!(gadget_round_scan(65, &[65], &[1], 0, 0).is_err());
    }
}
