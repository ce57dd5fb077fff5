use std::collections::BTreeSet;

use super::bins::BinDecomposition;
use crate::frame::{EchoGeometry, FrameConfig};
use crate::{Error, Result};

/// Bins where Φ is not negligible when Dirichlet sidelobes beyond order D are dropped:
/// a Doppler band of half-width D·B around k_int (the block sum widens the Doppler lobe
/// B times) crossed with a delay band of half-width D around every block's delay bin.
pub fn response_support(geo: &EchoGeometry, cfg: &FrameConfig, sidelobe_order: usize) -> Result<BTreeSet<(usize, usize)>> {
    let (n, m) = (cfg.n() as i64, cfg.m() as i64);
    let d = sidelobe_order as i64;
    if 2 * d + 1 > m {
        return Err(Error::Domain(format!(
            "sidelobe order {sidelobe_order} gives a delay band wider than M = {m}"
        )));
    }
    let bd = BinDecomposition::from_geometry(geo, cfg);
    let half = (d * cfg.b() as i64).min(n / 2);
    let dopplers: BTreeSet<usize> =
        (-half..=half).map(|o| (bd.k_int as i64 + o).rem_euclid(n) as usize).collect();
    let mut out = BTreeSet::new();
    for &lb in &bd.l_int {
        for o in -d..=d {
            let l = (lb as i64 + o).rem_euclid(m) as usize;
            for &k in &dopplers {
                out.insert((k, l));
            }
        }
    }
    Ok(out)
}
