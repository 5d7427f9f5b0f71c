//! Branch continuation of saddle data along paths in the z-plane.
//!
//! All walks anchor at z₀ = α/2 on the positive real axis (the geometric
//! mean of the two double-point radii), where both saddles carry
//! principal logarithms. From there a three-leg path — an arc at the
//! anchor radius, a radial run, an arc at the target radius — reaches any
//! target while staying clear of the double points. Along the way we
//! track continuous arguments of t, 1−zt, t−1 and ψ″(t) for each saddle;
//! integer branch offsets and the square-root orientation fall out as
//! rounded differences against principal values.
//!
//! Everything here runs in f64: the tracked objects are integers plus a
//! saddle location that is later re-refined at full precision.

use crate::error::{Error, Result};
use crate::numerics::complex::Complex;
use crate::numerics::scalar::Scalar;

use super::{newton_refine, psi, psi_derivs, saddles_raw, BranchOffsets, SaddleData, SaddleLabel};

type C64 = Complex<f64>;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Clone, Debug)]
pub struct Tracked {
    pub t: C64,
    /// Continuous argument of t.
    pub arg_t: f64,
    /// Continuous argument of 1 − z t.
    pub arg_w: f64,
    /// Continuous argument of t − 1.
    pub arg_v: f64,
    /// Continuous argument of ψ″(t).
    pub arg_p2: f64,
}

impl Tracked {
    fn principal(t: C64, z: &C64, beta: &C64) -> Result<Self> {
        let w = C64::new(1.0, 0.0) - z.clone() * t.clone();
        let v = t.clone() - C64::new(1.0, 0.0);
        let p2 = psi_derivs(&t, z, beta, 2)?[1].clone();
        Ok(Tracked {
            arg_t: t.arg(),
            arg_w: w.arg(),
            arg_v: v.arg(),
            arg_p2: p2.arg(),
            t,
        })
    }

    /// Integer branch offsets relative to principal logs at the current point.
    pub fn offsets(&self, z: &C64) -> BranchOffsets {
        let w = C64::new(1.0, 0.0) - z.clone() * self.t.clone();
        let u = self.t.clone() * w.clone();
        let v = self.t.clone() - C64::new(1.0, 0.0);
        BranchOffsets {
            n_prod: ((self.arg_t + self.arg_w - u.arg()) / TWO_PI).round() as i32,
            n_t: ((self.arg_t - self.t.arg()) / TWO_PI).round() as i32,
            n_w: ((self.arg_w - w.arg()) / TWO_PI).round() as i32,
            n_v: ((self.arg_v - v.arg()) / TWO_PI).round() as i32,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Walk {
    pub alpha: f64,
    pub beta: C64,
    pub z: C64,
    /// Index 0 tracks the saddle labeled 1, index 1 the saddle labeled 2.
    pub s: [Tracked; 2],
}

/// Anchor radius: the geometric mean α/2 of the double-point radii,
/// nudged away from z = 1 where t_s2 sits exactly on the logarithmic
/// singularity t = 1.
pub fn anchor_radius(alpha: f64) -> f64 {
    let r = alpha / 2.0;
    if (r - 1.0).abs() < 0.2 {
        r + 0.35
    } else {
        r
    }
}

impl Walk {
    /// Anchor on the positive real axis with principal branches.
    pub fn start(alpha: f64) -> Result<Walk> {
        let z0 = C64::new(anchor_radius(alpha), 0.0);
        let beta = C64::new(1.0, -alpha);
        let (raw1, raw2) = saddles_raw(&z0, &alpha);
        let t1 = newton_refine(&raw1, &z0, &beta)?;
        let t2 = newton_refine(&raw2, &z0, &beta)?;
        let s = [
            Tracked::principal(t1, &z0, &beta)?,
            Tracked::principal(t2, &z0, &beta)?,
        ];
        Ok(Walk {
            alpha,
            beta,
            z: z0,
            s,
        })
    }

    /// Continued ψ(t_sj) at the current point.
    pub fn psi_cont(&self, j: usize) -> C64 {
        let tr = &self.s[j];
        let u = tr.t.clone() * (C64::new(1.0, 0.0) - self.z.clone() * tr.t.clone());
        let v = tr.t.clone() - C64::new(1.0, 0.0);
        let log_u = C64::new(u.abs().ln(), tr.arg_t + tr.arg_w);
        let log_v = C64::new(v.abs().ln(), tr.arg_v);
        log_u - self.beta.clone() * log_v
    }

    /// Re ψ(t_s1) − Re ψ(t_s2), branch-continued (dominance indicator).
    pub fn re_delta(&self) -> f64 {
        self.psi_cont(0).re - self.psi_cont(1).re
    }

    /// Im ψ(t_s1) − Im ψ(t_s2), branch-continued (Stokes indicator).
    pub fn im_delta(&self) -> f64 {
        self.psi_cont(0).im - self.psi_cont(1).im
    }

    fn try_step(&self, z_new: &C64) -> Result<[Tracked; 2]> {
        let mut next: [Option<Tracked>; 2] = [None, None];
        for j in 0..2 {
            let old = &self.s[j];
            let t = newton_step_bounded(&old.t, z_new, &self.beta)?;
            let cap = 0.1 * old.t.abs().max(1.0);
            if (t.clone() - old.t.clone()).abs() > cap {
                return Err(Error::Numerical("saddle moved too far in one step".into()));
            }
            let w_new = C64::new(1.0, 0.0) - z_new.clone() * t.clone();
            let w_old = C64::new(1.0, 0.0) - self.z.clone() * old.t.clone();
            let v_new = t.clone() - C64::new(1.0, 0.0);
            let v_old = old.t.clone() - C64::new(1.0, 0.0);
            let p2_new = psi_derivs(&t, z_new, &self.beta, 2)?[1].clone();
            let p2_old = psi_derivs(&old.t, &self.z, &self.beta, 2)?[1].clone();

            let dt_arg = (t.clone() / old.t.clone()).arg();
            let dw_arg = (w_new / w_old).arg();
            let dv_arg = (v_new / v_old).arg();
            let dp_arg = (p2_new / p2_old).arg();
            for d in [dt_arg, dw_arg, dv_arg, dp_arg] {
                if d.abs() > 1.5 {
                    return Err(Error::Numerical("argument jump too large in one step".into()));
                }
            }
            next[j] = Some(Tracked {
                t,
                arg_t: old.arg_t + dt_arg,
                arg_w: old.arg_w + dw_arg,
                arg_v: old.arg_v + dv_arg,
                arg_p2: old.arg_p2 + dp_arg,
            });
        }
        let [a, b] = next;
        let (a, b) = (a.unwrap(), b.unwrap());
        let sep = (a.t.clone() - b.t.clone()).abs();
        if sep < 1e-6 * (1.0 + a.t.abs()) {
            return Err(Error::Coalescent(format!(
                "saddles collide on the continuation path near z = {}",
                z_new
            )));
        }
        // saddles must not have swapped identities across the step
        if (a.t.clone() - self.s[1].t.clone()).abs() < (a.t.clone() - self.s[0].t.clone()).abs() {
            return Err(Error::Numerical("saddle identities crossed in one step".into()));
        }
        Ok([a, b])
    }

    /// Follow `path(s)` for s from 0 to 1 with adaptive stepping.
    /// `path(0)` must equal the current position.
    pub fn follow(&mut self, path: &dyn Fn(f64) -> C64) -> Result<()> {
        let mut s = 0.0f64;
        let mut ds = 0.05f64;
        let mut guard = 0usize;
        while s < 1.0 {
            let target = (s + ds).min(1.0);
            match self.try_step(&path(target)) {
                Ok(next) => {
                    self.s = next;
                    self.z = path(target);
                    s = target;
                    ds = (ds * 1.4).min(0.05);
                }
                Err(Error::Coalescent(e)) => return Err(Error::Coalescent(e)),
                Err(_) => {
                    ds *= 0.5;
                    if ds < 1e-9 {
                        return Err(Error::Continuation {
                            re: self.z.re,
                            im: self.z.im,
                            why: "step size underflow".into(),
                        });
                    }
                }
            }
            guard += 1;
            if guard > 2_000_000 {
                return Err(Error::Continuation {
                    re: self.z.re,
                    im: self.z.im,
                    why: "step budget exhausted".into(),
                });
            }
        }
        Ok(())
    }

    /// Move to a nearby point (used by ring bisections).
    pub fn move_to(&mut self, z_new: C64) -> Result<()> {
        let from = self.z.clone();
        let to = z_new;
        self.follow(&move |s| {
            from.clone().scale(&(1.0 - s)) + to.clone().scale(&s)
        })
    }
}

fn newton_step_bounded(t0: &C64, z: &C64, beta: &C64) -> Result<C64> {
    let mut t = t0.clone();
    for _ in 0..12 {
        let d = psi_derivs(&t, z, beta, 2)?;
        let step = d[0].clone() / d[1].clone();
        t = t.clone() - step.clone();
        if step.abs() < 1e-13 * (1.0 + t.abs()) {
            return Ok(t);
        }
    }
    Err(Error::Numerical("tracking Newton did not converge".into()))
}

/// Three-leg continuation path from the anchor to `z_target`:
/// arc at the anchor radius, radial run, arc at the target radius.
pub fn walk_to_target(alpha: f64, z_target: C64) -> Result<Walk> {
    let mut walk = Walk::start(alpha)?;
    let r0 = anchor_radius(alpha);
    let rt = z_target.abs();
    if rt < 1e-6 {
        return Err(Error::InvalidParams("target too close to z = 0".into()));
    }
    let theta_t = z_target.arg();
    let quarter = std::f64::consts::FRAC_PI_4;
    let mut theta_ray = theta_t.clamp(-quarter, quarter);
    // a radial run on the positive real axis through z = 1 would drive
    // t_s2 through the singularity t = 1; hop over it on the upper side
    // (the principal-sheet side: the sheet-crossing loci sit below)
    if theta_ray == 0.0 && (r0 - 1.0) * (rt - 1.0) < 0.0 {
        theta_ray = 0.1;
    }

    // leg 1: arc at r0 from angle 0 to theta_ray
    if theta_ray != 0.0 {
        let p = move |s: f64| C64::new(0.0, theta_ray * s).exp().scale(&r0);
        walk.follow(&p)?;
    }
    // leg 2: radial from r0 to rt along theta_ray
    if (rt - r0).abs() > 0.0 {
        let dir = C64::new(0.0, theta_ray).exp();
        let p = move |s: f64| dir.clone().scale(&(r0 + (rt - r0) * s));
        walk.follow(&p)?;
    }
    // leg 3: arc at rt from theta_ray to theta_t
    if (theta_t - theta_ray).abs() > 0.0 {
        let p = move |s: f64| {
            C64::new(0.0, theta_ray + (theta_t - theta_ray) * s)
                .exp()
                .scale(&rt)
        };
        walk.follow(&p)?;
    }
    Ok(walk)
}

/// Walk the anchor ring upward until Re ψ₁ − Re ψ₂ changes sign (the
/// anti-Stokes crossing of the ring), then bisect until the saddles are
/// within `balance` of equal modulus growth. Returns the positioned walk.
pub fn walk_to_balance_point(alpha: f64, balance: f64) -> Result<Walk> {
    let mut walk = Walk::start(alpha)?;
    let r0 = anchor_radius(alpha);
    let ring = move |theta: f64| C64::new(0.0, theta).exp().scale(&r0);

    let mut theta = 0.0f64;
    let d0 = walk.re_delta();
    let mut prev = (theta, d0);
    let mut bracket = None;
    let dth = 0.01f64;
    while theta < std::f64::consts::PI - 0.02 {
        theta = (theta + dth).min(std::f64::consts::PI - 0.02);
        walk.move_to(ring(theta))?;
        let d = walk.re_delta();
        if d == 0.0 || d.signum() != prev.1.signum() {
            bracket = Some((prev.0, theta));
            break;
        }
        prev = (theta, d);
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Err(Error::BranchAmbiguous(
            "no dominance crossing found on the anchor ring".into(),
        ));
    };
    // bisect; the walk is currently at hi
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        walk.move_to(ring(mid))?;
        let d = walk.re_delta();
        if d.abs() < balance || (hi - lo) < 1e-9 {
            return Ok(walk);
        }
        if d.signum() == prev.1.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(walk)
}

/// Assemble big-precision saddle data from a tracked f64 state.
///
/// `t` must already be Newton-refined at the working precision; the
/// integer offsets are recovered by comparing the f64 continued args with
/// the principal args of the refined values.
pub fn saddle_data_from_track<T: Scalar>(
    label: SaddleLabel,
    t: &Complex<T>,
    tracked: &Tracked,
    z: &Complex<T>,
    beta: &Complex<T>,
) -> Result<SaddleData<T>> {
    let m = &t.re;
    let one = Complex::one_like(m);
    let w = one.clone() - z.clone() * t.clone();
    let u = t.clone() * w.clone();
    let v = t.clone() - one;
    let n_prod = ((tracked.arg_t + tracked.arg_w - u.arg().to_f64()) / TWO_PI).round() as i32;
    let n_t = ((tracked.arg_t - t.arg().to_f64()) / TWO_PI).round() as i32;
    let n_w = ((tracked.arg_w - w.arg().to_f64()) / TWO_PI).round() as i32;
    let n_v = ((tracked.arg_v - v.arg().to_f64()) / TWO_PI).round() as i32;
    let psi_val = psi(t, z, beta, n_prod, n_v)?;
    let p2 = psi_derivs(t, z, beta, 2)?[1].clone();
    let sqrt_flip = ((tracked.arg_p2 - p2.arg().to_f64()) / TWO_PI).round() as i32;
    Ok(SaddleData {
        label,
        t: t.clone(),
        psi: psi_val,
        psi2: p2,
        offsets: BranchOffsets {
            n_prod,
            n_t,
            n_w,
            n_v,
        },
        sqrt_flip,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_offsets_are_zero() {
        let walk = Walk::start(1.0).unwrap();
        for j in 0..2 {
            let off = walk.s[j].offsets(&walk.z);
            assert_eq!(off, BranchOffsets::default());
        }
    }

    #[test]
    fn positive_axis_keeps_principal_branches() {
        // offsets stay (0,0) along the positive real segment between the
        // double points (z = 1 itself is excluded: the saddle t_s2 lands
        // exactly on the logarithmic singularity t = 1 there)
        for target in [0.1, 0.3, 0.9] {
            let walk = walk_to_target(1.0, C64::new(target, 0.0)).unwrap();
            for j in 0..2 {
                let off = walk.s[j].offsets(&walk.z);
                assert_eq!(off, BranchOffsets::default(), "offsets at z = {target}");
            }
        }
        // past |z| = 1 on an upper ray log t_s and log(t_s−1) are still
        // principal (the product log t(1−zt) may wind there; that is a
        // representation detail, tracked separately)
        let z = C64::new(0.0, 0.05 * std::f64::consts::PI).exp().scale(&1.15);
        let walk = walk_to_target(1.0, z).unwrap();
        for j in 0..2 {
            let off = walk.s[j].offsets(&walk.z);
            assert_eq!(off.n_t, 0);
            assert_eq!(off.n_v, 0);
        }
    }

    #[test]
    fn upper_half_plane_table_points_stay_principal() {
        // the points of the error tables in the upper half plane carry
        // principal branches (the sheet curves lie in the lower half plane)
        for (r, th) in [(0.5, 0.25), (0.5, 0.5), (0.5, 0.75), (0.5, 1.0), (0.25, 1.0)] {
            let z = C64::new(0.0, th * std::f64::consts::PI).exp().scale(&r);
            let walk = walk_to_target(1.0, z).unwrap();
            for j in 0..2 {
                let off = walk.s[j].offsets(&walk.z);
                assert_eq!(
                    off,
                    BranchOffsets::default(),
                    "offsets at r={r}, theta={th}π, saddle {j}"
                );
            }
        }
    }

    #[test]
    fn lower_half_plane_near_cut_winds() {
        // deep in the lower half plane the saddle-2 branch data leaves the
        // principal sheet; detected by continuation
        let z = C64::new(0.0, -0.99 * std::f64::consts::PI).exp().scale(&0.5);
        let walk = walk_to_target(1.0, z).unwrap();
        let off2 = walk.s[1].offsets(&walk.z);
        assert_ne!(
            off2.n_v, 0,
            "log(t_s2 - 1) should leave the principal sheet, got {off2:?}"
        );
    }

    #[test]
    fn continuation_tracks_saddles_continuously() {
        let z = C64::new(0.0, 0.6 * std::f64::consts::PI).exp().scale(&0.3);
        let walk = walk_to_target(1.0, z.clone()).unwrap();
        // both tracked saddles satisfy the saddle equation at the target
        for j in 0..2 {
            let d = psi_derivs(&walk.s[j].t, &z, &walk.beta, 1).unwrap();
            assert!(d[0].abs() < 1e-10);
        }
        // and the pair coincides with the closed-form set
        let (r1, r2) = saddles_raw(&z, &1.0);
        let t1 = walk.s[0].t.clone();
        let d1 = (t1.clone() - r1.clone()).abs().min((t1 - r2.clone()).abs());
        assert!(d1 < 1e-9, "tracked saddle not in the closed-form set");
        let _ = r1;
    }

    #[test]
    fn balance_point_exists_on_anchor_ring() {
        let walk = walk_to_balance_point(1.0, 0.02).unwrap();
        assert!(walk.re_delta().abs() < 0.02);
        assert!(walk.z.im > 0.0, "balance point should sit in the upper half plane");
    }

    #[test]
    fn anchor_dominance_gap_is_pi() {
        // on the real segment between the double points the dominance gap
        // Re ψ₁ − Re ψ₂ equals π for α = 1
        let walk = Walk::start(1.0).unwrap();
        assert!((walk.re_delta() - std::f64::consts::PI).abs() < 1e-10);
    }
}
