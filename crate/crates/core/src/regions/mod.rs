//! Classification of z into expansion regimes and the traced geometry
//! of the z-plane (Stokes loop, anti-Stokes arc, sheet curves) and the
//! steepest paths.

pub mod paths;
pub mod trace;

pub use paths::{trace_steepest_paths, Plane};
pub use trace::{
    stokes_crossing_on_ring, trace_anti_stokes, trace_sheet_curves, trace_stokes_loop, CurveKind,
    Polyline,
};

use crate::error::Result;
use crate::numerics::complex::Complex;
use crate::phase::continuation::walk_to_target;
use crate::phase::double_points;

type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionKind {
    /// Inside the Stokes loop: only saddle 1 contributes.
    InsideD,
    /// Generic position: both saddles, one dominant (1 or 2).
    TwoSaddle { dominant: u8 },
    /// Within the coalescence radius of a double point (`plus` selects
    /// z_d^+); the two-saddle expansion degrades here.
    NearCoalescence { plus: bool },
}

#[derive(Clone, Copy, Debug)]
pub struct RegionTag {
    pub kind: RegionKind,
    pub dist_stokes: f64,
    pub dist_anti_stokes: f64,
    pub dist_double: f64,
}

/// NearCoalescence radius around a double point.
///
/// Sized so the reference-table cell at z = −0.25 (α = 1), whose error
/// visibly blows up, is flagged: 0.05·(1 + |z_d|).
pub fn coalescence_radius(z_d: f64) -> f64 {
    0.05 * (1.0 + z_d.abs())
}

/// Precomputed region geometry for one α.
pub struct Regions {
    pub alpha: f64,
    pub tol: f64,
    pub stokes: Polyline,
    pub anti_stokes: Polyline,
    pub z_d_minus: f64,
    pub z_d_plus: f64,
}

impl Regions {
    pub fn new(alpha: f64, tol: f64) -> Result<Self> {
        let stokes = trace_stokes_loop(alpha, tol)?;
        let anti_stokes = trace_anti_stokes(alpha, tol)?;
        let (zdm, zdp) = double_points(&alpha);
        Ok(Regions {
            alpha,
            tol,
            stokes,
            anti_stokes,
            z_d_minus: zdm,
            z_d_plus: zdp,
        })
    }

    pub fn classify(&self, z: &C64) -> Result<RegionTag> {
        let d_minus = (z.clone() - C64::new(self.z_d_minus, 0.0)).abs();
        let d_plus = (z.clone() - C64::new(self.z_d_plus, 0.0)).abs();
        let (dist_double, plus, z_d) = if d_minus <= d_plus {
            (d_minus, false, self.z_d_minus)
        } else {
            (d_plus, true, self.z_d_plus)
        };
        let dist_stokes = dist_to_polyline(z, &self.stokes);
        let dist_anti_stokes = dist_to_polyline(z, &self.anti_stokes);

        if dist_double < coalescence_radius(z_d) {
            return Ok(RegionTag {
                kind: RegionKind::NearCoalescence { plus },
                dist_stokes,
                dist_anti_stokes,
                dist_double,
            });
        }
        if point_in_closed_polyline(z, &self.stokes.points) {
            return Ok(RegionTag {
                kind: RegionKind::InsideD,
                dist_stokes,
                dist_anti_stokes,
                dist_double,
            });
        }
        // dominance by the branch-continued Re Δψ; ties go to saddle 1
        let walk = walk_to_target(self.alpha, z.clone())?;
        let dominant = if walk.re_delta() >= 0.0 { 1 } else { 2 };
        Ok(RegionTag {
            kind: RegionKind::TwoSaddle { dominant },
            dist_stokes,
            dist_anti_stokes,
            dist_double,
        })
    }
}

/// One-shot classification (traces the curves; reuse [`Regions`] for grids).
pub fn classify(z: &C64, alpha: f64) -> Result<RegionTag> {
    Regions::new(alpha, 1e-9)?.classify(z)
}

fn dist_to_polyline(z: &C64, poly: &Polyline) -> f64 {
    let mut best = f64::MAX;
    for w in poly.points.windows(2) {
        best = best.min(dist_to_segment(z, &w[0], &w[1]));
    }
    if poly.points.len() == 1 {
        best = (z.clone() - poly.points[0].clone()).abs();
    }
    best
}

fn dist_to_segment(z: &C64, a: &C64, b: &C64) -> f64 {
    let ab = b.clone() - a.clone();
    let az = z.clone() - a.clone();
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return az.abs();
    }
    let t = ((az.re * ab.re + az.im * ab.im) / len2).clamp(0.0, 1.0);
    (z.clone() - (a.clone() + ab.scale(&t))).abs()
}

/// Even-odd ray casting; the polyline is treated as closed.
fn point_in_closed_polyline(z: &C64, pts: &[C64]) -> bool {
    if pts.len() < 3 {
        return false;
    }
    let mut inside = false;
    let n = pts.len();
    let mut j = n - 1;
    for i in 0..n {
        let (xi, yi) = (pts[i].re, pts[i].im);
        let (xj, yj) = (pts[j].re, pts[j].im);
        if ((yi > z.im) != (yj > z.im))
            && (z.re < (xj - xi) * (z.im - yi) / (yj - yi) + xi)
        {
            inside = !inside;
        }
        j = i;
    }
    inside
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polar(r: f64, theta_over_pi: f64) -> C64 {
        C64::new(0.0, theta_over_pi * std::f64::consts::PI)
            .exp()
            .scale(&r)
    }

    #[test]
    fn classify_reference_points() {
        let regions = Regions::new(1.0, 1e-9).unwrap();
        // deep inside the loop
        let tag = regions.classify(&polar(0.06, 0.5)).unwrap();
        assert_eq!(tag.kind, RegionKind::InsideD, "0.06 e^{{iπ/2}} lies in D");
        // the positive real anchor region: two saddles, saddle 1 dominant
        let tag = regions.classify(&C64::new(0.5, 0.0)).unwrap();
        assert_eq!(tag.kind, RegionKind::TwoSaddle { dominant: 1 });
        // near the lower double point
        let tag = regions.classify(&C64::new(-0.207, 0.0)).unwrap();
        assert_eq!(tag.kind, RegionKind::NearCoalescence { plus: false });
        // the blow-up cell of the s=2 error table
        let tag = regions.classify(&C64::new(-0.25, 0.0)).unwrap();
        assert_eq!(
            tag.kind,
            RegionKind::NearCoalescence { plus: false },
            "z = −0.25 sits within the flag radius of z_d^−"
        );
    }

    #[test]
    fn whole_small_ring_is_inside_d() {
        let regions = Regions::new(1.0, 1e-9).unwrap();
        for k in 0..16 {
            let th = -1.0 + 2.0 * (k as f64 + 0.5) / 16.0;
            let tag = regions.classify(&polar(0.06, th)).unwrap();
            assert_eq!(tag.kind, RegionKind::InsideD, "θ/π = {th}");
        }
    }

    #[test]
    fn ring_010_splits_at_the_known_angle() {
        let regions = Regions::new(1.0, 1e-9).unwrap();
        let inside = regions.classify(&polar(0.10, 0.60)).unwrap();
        assert_eq!(inside.kind, RegionKind::InsideD);
        let outside = regions.classify(&polar(0.10, 0.30)).unwrap();
        assert!(matches!(outside.kind, RegionKind::TwoSaddle { .. }));
    }

    #[test]
    fn dominance_flips_across_anti_stokes() {
        let regions = Regions::new(1.0, 1e-9).unwrap();
        let mid = regions.anti_stokes.points[regions.anti_stokes.points.len() / 2].clone();
        // probe on both sides of the arc along the normal direction
        let idx = regions.anti_stokes.points.len() / 2;
        let a = regions.anti_stokes.points[idx - 1].clone();
        let b = regions.anti_stokes.points[idx + 1].clone();
        let tang = b - a;
        let n = tang.abs();
        let normal = tang.mul_i().scale(&(0.05 / n));
        let up = regions.classify(&(mid.clone() + normal.clone())).unwrap();
        let dn = regions.classify(&(mid - normal)).unwrap();
        let d_of = |k: RegionKind| match k {
            RegionKind::TwoSaddle { dominant } => dominant,
            other => panic!("expected two-saddle near the arc, got {other:?}"),
        };
        assert_ne!(d_of(up.kind), d_of(dn.kind), "dominance must swap across the arc");
    }

    #[test]
    fn curves_meet_only_at_the_double_point() {
        let regions = Regions::new(1.0, 1e-8).unwrap();
        let zdm = C64::new(regions.z_d_minus, 0.0);
        for p in &regions.stokes.points {
            if (p.clone() - zdm.clone()).abs() > 0.05 {
                let d = dist_to_polyline(p, &regions.anti_stokes);
                assert!(
                    d > 1e-4,
                    "Stokes and anti-Stokes curves intersect away from z_d^- at {p:?}"
                );
            }
        }
    }
}
