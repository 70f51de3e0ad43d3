//! Node placement on the unit torus or unit square.

use alloc::vec::Vec;

use rand::Rng;

use crate::error::{bail, Result};
use crate::params::{GeoParams, RegionKind};
use crate::rng::{label, RngStream, StreamRng};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Positions of every node, all in `[0, 1)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    region: RegionKind,
    coords: Vec<Point>,
}

impl Placement {
    pub fn new(region: RegionKind, coords: Vec<Point>) -> Result<Self> {
        if !region.is_disk() {
            bail!(RegionMismatch, "placement is undefined under full visibility");
        }
        if let Some(p) = coords.iter().find(|p| !(0.0..1.0).contains(&p.x) || !(0.0..1.0).contains(&p.y)) {
            bail!(OutOfRange, "point ({}, {}) lies outside [0,1)^2", p.x, p.y);
        }
        Ok(Self { region, coords })
    }

    pub fn region(&self) -> RegionKind {
        self.region
    }

    pub fn coords(&self) -> &[Point] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        distance(self.coords[i], self.coords[j], self.region)
    }
}

/// Places `n` nodes independently and uniformly.
pub fn place_nodes(n: usize, geo: &GeoParams, stream: &RngStream) -> Result<Placement> {
    place_nodes_in_slot(n, geo, stream, 0)
}

pub(crate) fn place_nodes_in_slot(n: usize, geo: &GeoParams, stream: &RngStream, slot: u64) -> Result<Placement> {
    if !geo.region().is_disk() {
        bail!(RegionMismatch, "cannot place nodes under full visibility");
    }
    let mut rng = stream.fork_slot(label::PLACEMENT, slot);
    Ok(Placement { region: geo.region(), coords: uniform_points(&mut rng, n) })
}

fn uniform_points(rng: &mut StreamRng, n: usize) -> Vec<Point> {
    (0..n)
        .map(|_| {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            Point::new(x, y)
        })
        .collect()
}

/// Euclidean distance, with per-axis wrap-around on the torus.
///
/// Full visibility has no geometry; it is treated like the square.
pub fn distance(a: Point, b: Point, region: RegionKind) -> f64 {
    let (dx, dy) = axis_gaps(a, b, region);
    libm::sqrt(dx * dx + dy * dy)
}

#[inline]
pub(crate) fn axis_gaps(a: Point, b: Point, region: RegionKind) -> (f64, f64) {
    let dx = libm::fabs(a.x - b.x);
    let dy = libm::fabs(a.y - b.y);
    match region {
        RegionKind::UnitTorus => (dx.min(1.0 - dx), dy.min(1.0 - dy)),
        _ => (dx, dy),
    }
}

#[inline]
pub(crate) fn within(a: Point, b: Point, region: RegionKind, radius_sq: f64) -> bool {
    let (dx, dy) = axis_gaps(a, b, region);
    dx * dx + dy * dy <= radius_sq
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const T: RegionKind = RegionKind::UnitTorus;
    const S: RegionKind = RegionKind::UnitSquare;

    #[test]
    fn wrap_examples() {
        let a = Point::new(0.05, 0.5);
        let b = Point::new(0.95, 0.5);
        assert!((distance(a, b, T) - 0.1).abs() < 1e-12);
        assert!((distance(a, b, S) - 0.9).abs() < 1e-12);
        let c = Point::new(0.9, 0.9);
        let d = Point::new(0.1, 0.1);
        assert!((distance(c, d, T) - 0.2 * core::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn empty_and_deterministic() {
        let geo = GeoParams::disk(T, 0.1).unwrap();
        assert!(place_nodes(0, &geo, &RngStream::new(1, 0)).unwrap().is_empty());
        let a = place_nodes(2, &geo, &RngStream::new(1, 0)).unwrap();
        let b = place_nodes(2, &geo, &RngStream::new(1, 0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_full_visibility() {
        let geo = GeoParams::full_visibility();
        assert!(place_nodes(3, &geo, &RngStream::new(1, 0)).is_err());
    }

    #[test]
    fn axis_means_in_band() {
        let geo = GeoParams::disk(S, 0.1).unwrap();
        let p = place_nodes(10_000, &geo, &RngStream::new(2024, 0)).unwrap();
        let mx = p.coords().iter().map(|p| p.x).sum::<f64>() / 10_000.0;
        let my = p.coords().iter().map(|p| p.y).sum::<f64>() / 10_000.0;
        assert!((0.49..=0.51).contains(&mx), "{mx}");
        assert!((0.49..=0.51).contains(&my), "{my}");
    }

    fn pt() -> impl Strategy<Value = Point> {
        (0.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y)| Point::new(x, y))
    }

    proptest! {
        #[test]
        fn metric_axioms(a in pt(), b in pt(), c in pt()) {
            for region in [T, S] {
                let ab = distance(a, b, region);
                prop_assert!((ab - distance(b, a, region)).abs() < 1e-15);
                prop_assert!(distance(a, a, region) == 0.0);
                prop_assert!(ab <= distance(a, c, region) + distance(c, b, region) + 1e-12);
            }
            prop_assert!(distance(a, b, T) <= distance(a, b, S) + 1e-15);
            prop_assert!(distance(a, b, T) <= libm::sqrt(0.5) + 1e-15);
        }
    }
}
