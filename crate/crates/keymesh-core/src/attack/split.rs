use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::generators::geometric_edges;
use crate::geometry::Placement;
use crate::params::RegionKind;

use super::{band_members, CaptureStrategy};

/// Result of capturing a vertical band of width `2r`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutcome {
    /// One band on the square; on the torus a second band straddles the seam.
    pub strategies: Vec<CaptureStrategy>,
    pub captured: Vec<u32>,
    /// Non-captured nodes left of the band.
    pub chunk_low: Vec<u32>,
    /// Non-captured nodes right of the band.
    pub chunk_high: Vec<u32>,
    /// Geometric edges joining the two chunks.
    pub cross_edges: usize,
}

/// Captures every node with `ell <= x <= ell + 2r` and measures whether the
/// two sides can still reach each other directly.
///
/// On the torus the band `[1-r, 1) ∪ [0, r)` is captured too, which needs
/// `r < ell` and `ell + 3r < 1`.
pub fn split_attack(placement: &Placement, radius: f64, ell: f64) -> Result<SplitOutcome> {
    if radius.is_nan() || radius <= 0.0 {
        bail!(InvalidParameter, "radius must be positive, got {radius}");
    }
    let torus = match placement.region() {
        RegionKind::UnitSquare => false,
        RegionKind::UnitTorus => true,
        RegionKind::FullVisibility => bail!(RegionMismatch, "split attack needs a disk model"),
    };
    let hi = ell + 2.0 * radius;
    let ok = if torus { radius < ell && hi + radius < 1.0 } else { ell > 0.0 && hi < 1.0 };
    if !ok {
        bail!(OutOfRange, "band start {ell} does not fit radius {radius} in the {}", placement.region().name());
    }

    let mut strategies = vec![CaptureStrategy::Region { x_low: ell, x_high: hi }];
    if torus {
        strategies.push(CaptureStrategy::Region { x_low: 1.0 - radius, x_high: 1.0 });
        strategies.push(CaptureStrategy::Region { x_low: 0.0, x_high: radius });
    }
    let n = placement.len();
    let mut captured_mask = vec![false; n];
    for s in &strategies {
        if let CaptureStrategy::Region { x_low, x_high } = *s {
            for v in band_members(placement, x_low, x_high) {
                captured_mask[v as usize] = true;
            }
        }
    }

    // 0 = captured, 1 = low chunk, 2 = high chunk.
    let mut side = vec![0u8; n];
    let (mut captured, mut chunk_low, mut chunk_high) = (Vec::new(), Vec::new(), Vec::new());
    for (i, p) in placement.coords().iter().enumerate() {
        if captured_mask[i] {
            captured.push(i as u32);
        } else if p.x < ell {
            side[i] = 1;
            chunk_low.push(i as u32);
        } else {
            side[i] = 2;
            chunk_high.push(i as u32);
        }
    }
    let cross_edges = geometric_edges(placement, radius)
        .into_iter()
        .filter(|&(i, j)| side[i as usize] * side[j as usize] == 2)
        .count();
    Ok(SplitOutcome { strategies, captured, chunk_low, chunk_high, cross_edges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{place_nodes, Point};
    use crate::params::GeoParams;
    use crate::rng::RngStream;

    #[test]
    fn no_crossing_on_either_region() {
        for region in [RegionKind::UnitSquare, RegionKind::UnitTorus] {
            let geo = GeoParams::disk(region, 0.05).unwrap();
            for seed in 0..5 {
                let pl = place_nodes(2000, &geo, &RngStream::new(seed, 0)).unwrap();
                let out = split_attack(&pl, 0.05, 0.4).unwrap();
                assert_eq!(out.cross_edges, 0);
                assert_eq!(out.captured.len() + out.chunk_low.len() + out.chunk_high.len(), 2000);
            }
        }
    }

    #[test]
    fn torus_without_seam_band_would_cross() {
        let pts = vec![Point::new(0.01, 0.5), Point::new(0.99, 0.5)];
        let pl = Placement::new(RegionKind::UnitTorus, pts).unwrap();
        let out = split_attack(&pl, 0.05, 0.4).unwrap();
        assert_eq!(out.captured, vec![0, 1]);
        assert_eq!(out.cross_edges, 0);
    }

    #[test]
    fn range_checks() {
        let geo = GeoParams::disk(RegionKind::UnitSquare, 0.05).unwrap();
        let pl = place_nodes(10, &geo, &RngStream::new(1, 0)).unwrap();
        assert!(split_attack(&pl, 0.05, 0.0).is_err());
        assert!(split_attack(&pl, 0.05, 0.95).is_err());
        let geo = GeoParams::disk(RegionKind::UnitTorus, 0.05).unwrap();
        let pl = place_nodes(10, &geo, &RngStream::new(1, 0)).unwrap();
        assert!(split_attack(&pl, 0.05, 0.04).is_err());
        assert!(split_attack(&pl, 0.05, 0.86).is_err());
    }
}
