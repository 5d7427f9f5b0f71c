//! Implicit-curve tracing in the z-plane.
//!
//! The two organizing curves for fixed α are the loci where the two
//! saddle phases agree in imaginary part (the Stokes loop bounding the
//! one-saddle domain D, terminating at z_d^−) and in real part (the
//! anti-Stokes arc from z_d^− to z_d^+ across the upper half-plane).
//! Both are traced by a predictor–corrector on the branch-continued
//! difference Δψ, whose z-derivative is available in closed form:
//! dΔψ/dz = −t₁/(1−z t₁) + t₂/(1−z t₂).
//!
//! The two sheet-crossing curves (where log t_s2 and log(t_s2−1) leave
//! the principal branch) are located by bisection in θ on rings of
//! constant |z|.

use crate::error::{Error, Result};
use crate::numerics::complex::Complex;
use crate::phase::continuation::{anchor_radius, walk_to_balance_point, walk_to_target, Walk};
use crate::phase::double_points;

type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    /// Im ψ₁ = Im ψ₂, the closed loop around z = 0 through z_d^−.
    StokesLoop,
    /// Re ψ₁ = Re ψ₂, from z_d^− to z_d^+ in the upper half-plane.
    AntiStokes,
    /// log t_s2 leaves the principal sheet (curve issuing from z = 0).
    SheetLogT,
    /// log(t_s2 − 1) leaves the principal sheet (curve issuing from z = 1).
    SheetLogTMinusOne,
    /// Steepest-descent path (t- or w-plane).
    SteepestDescent,
    /// Steepest-ascent path.
    SteepestAscent,
}

/// Traced curve with its defining metadata.
#[derive(Clone, Debug)]
pub struct Polyline {
    pub points: Vec<C64>,
    pub kind: CurveKind,
    pub alpha: f64,
    pub tol: f64,
}

#[derive(Clone, Copy)]
enum Which {
    Stokes,
    Anti,
}

fn g_of(walk: &Walk, which: Which) -> f64 {
    match which {
        Which::Stokes => walk.im_delta(),
        Which::Anti => walk.re_delta(),
    }
}

/// dΔψ/dz at the walk's current point.
fn h_of(walk: &Walk) -> C64 {
    let one = C64::new(1.0, 0.0);
    let t1 = walk.s[0].t.clone();
    let t2 = walk.s[1].t.clone();
    -(t1.clone() / (one.clone() - walk.z.clone() * t1))
        + t2.clone() / (one - walk.z.clone() * t2)
}

/// Unit normal along which g changes at rate |h|.
fn normal_of(walk: &Walk, which: Which) -> C64 {
    let h = h_of(walk);
    let n = h.abs();
    match which {
        Which::Stokes => h.conj().mul_i().scale(&(1.0 / n)),
        Which::Anti => h.conj().scale(&(1.0 / n)),
    }
}

fn tangent_of(walk: &Walk, which: Which) -> C64 {
    let h = h_of(walk);
    let n = h.abs();
    match which {
        Which::Stokes => h.conj().scale(&(1.0 / n)),
        Which::Anti => h.conj().mul_i().scale(&(1.0 / n)),
    }
}

/// Newton steps along the normal until |g| ≤ tol.
fn correct(walk: &mut Walk, which: Which, tol: f64) -> Result<()> {
    for _ in 0..12 {
        let g = g_of(walk, which);
        if g.abs() <= tol {
            return Ok(());
        }
        let h = h_of(walk);
        let hn = h.abs();
        if hn < 1e-14 {
            return Err(Error::Trace {
                re: walk.z.re,
                im: walk.z.im,
                why: "corrector gradient vanished".into(),
            });
        }
        let delta = normal_of(walk, which).scale(&(-g / hn));
        let target = walk.z.clone() + delta;
        walk.move_to(target)?;
    }
    let g = g_of(walk, which);
    if g.abs() <= tol * 10.0 {
        Ok(())
    } else {
        Err(Error::Trace {
            re: walk.z.re,
            im: walk.z.im,
            why: format!("corrector stalled with residual {g:e}"),
        })
    }
}

/// Trace one direction until a double point is reached.
fn trace_direction(
    seed: &Walk,
    which: Which,
    dir: f64,
    tol: f64,
    alpha: f64,
) -> Result<Vec<C64>> {
    let (zdm, zdp) = double_points(&alpha);
    let zdm = C64::new(zdm, 0.0);
    let zdp = C64::new(zdp, 0.0);
    let mut walk = seed.clone();
    let mut pts: Vec<C64> = vec![walk.z.clone()];
    let mut last_dir = tangent_of(&walk, which).scale(&dir);
    let mut ds: f64 = 0.01;
    let mut stall = 0usize;

    for _ in 0..60_000 {
        let d_minus = (walk.z.clone() - zdm.clone()).abs();
        let d_plus = (walk.z.clone() - zdp.clone()).abs();
        let (d_near, z_near) = if d_minus < d_plus {
            (d_minus, zdm.clone())
        } else {
            (d_plus, zdp.clone())
        };

        if d_near < 5e-7 {
            return Ok(pts);
        }
        if d_near < 1e-3 {
            // endpoint mode: geometric shrink toward the double point,
            // re-projected onto the curve
            let snapshot = walk.clone();
            let cand = z_near.clone() + (walk.z.clone() - z_near.clone()).scale(&0.55);
            let moved = walk
                .move_to(cand)
                .and_then(|_| correct(&mut walk, which, tol));
            match moved {
                Ok(()) => {
                    pts.push(walk.z.clone());
                    stall = 0;
                    continue;
                }
                Err(_) => {
                    walk = snapshot;
                    stall += 1;
                    if stall > 25 {
                        // close enough for every consumer downstream
                        return Ok(pts);
                    }
                    continue;
                }
            }
        }

        let mut t_hat = tangent_of(&walk, which);
        // keep heading: the raw tangent sign is arbitrary
        if (t_hat.re * last_dir.re + t_hat.im * last_dir.im) < 0.0 {
            t_hat = -t_hat;
        }
        let step_cap = (0.02 * (1.0 + walk.z.abs())).min(0.5 * d_near.max(1e-4));
        let h = ds.min(step_cap);
        let snapshot = walk.clone();
        let cand = walk.z.clone() + t_hat.scale(&h);
        let ok = walk
            .move_to(cand)
            .and_then(|_| correct(&mut walk, which, tol));
        match ok {
            Ok(()) => {
                last_dir = walk.z.clone() - pts.last().unwrap().clone();
                let n = last_dir.abs();
                if n > 0.0 {
                    last_dir = last_dir.scale(&(1.0 / n));
                }
                pts.push(walk.z.clone());
                ds = (ds * 1.3).min(0.03);
                stall = 0;
            }
            Err(_) => {
                walk = snapshot;
                ds *= 0.4;
                stall += 1;
                if ds < 1e-10 || stall > 60 {
                    return Err(Error::Trace {
                        re: walk.z.re,
                        im: walk.z.im,
                        why: "step underflow while tracing".into(),
                    });
                }
            }
        }
    }
    Err(Error::Trace {
        re: walk.z.re,
        im: walk.z.im,
        why: "point budget exhausted".into(),
    })
}

/// The Stokes loop: Im ψ₁ = Im ψ₂ around z = 0, terminating at z_d^−.
pub fn trace_stokes_loop(alpha: f64, tol: f64) -> Result<Polyline> {
    // seed on the upper imaginary ray: march inward from the anchor ring
    let r0 = anchor_radius(alpha);
    let mut walk = walk_to_target(alpha, C64::new(0.0, r0))?;
    let mut r_hi = r0;
    let mut g_hi = g_of(&walk, Which::Stokes);
    let mut bracket = None;
    let mut r = r0;
    for _ in 0..60 {
        r *= 0.85;
        walk.move_to(C64::new(0.0, r))?;
        let g = g_of(&walk, Which::Stokes);
        if g == 0.0 || g.signum() != g_hi.signum() {
            bracket = Some((r, r_hi));
            break;
        }
        r_hi = r;
        g_hi = g;
        if r < 1e-4 {
            break;
        }
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Err(Error::Trace {
            re: 0.0,
            im: r,
            why: "no Stokes crossing found on the imaginary ray".into(),
        });
    };
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        walk.move_to(C64::new(0.0, mid))?;
        let g = g_of(&walk, Which::Stokes);
        if g.abs() < tol || (hi - lo) < 1e-13 {
            break;
        }
        if g.signum() == g_hi.signum() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    correct(&mut walk, Which::Stokes, tol)?;

    let fwd = trace_direction(&walk, Which::Stokes, 1.0, tol, alpha)?;
    let bwd = trace_direction(&walk, Which::Stokes, -1.0, tol, alpha)?;
    let (zdm, _) = double_points(&alpha);
    for end in [fwd.last().unwrap(), bwd.last().unwrap()] {
        if (end.clone() - C64::new(zdm, 0.0)).abs() > 1e-3 {
            return Err(Error::Trace {
                re: end.re,
                im: end.im,
                why: "Stokes loop does not terminate at the lower double point".into(),
            });
        }
    }
    let mut points: Vec<C64> = bwd.into_iter().rev().collect();
    points.extend(fwd.into_iter().skip(1));
    Ok(Polyline {
        points,
        kind: CurveKind::StokesLoop,
        alpha,
        tol,
    })
}

/// The anti-Stokes arc: Re ψ₁ = Re ψ₂ from z_d^− to z_d^+.
pub fn trace_anti_stokes(alpha: f64, tol: f64) -> Result<Polyline> {
    let mut walk = walk_to_balance_point(alpha, 1e-3)?;
    correct(&mut walk, Which::Anti, tol)?;
    let fwd = trace_direction(&walk, Which::Anti, 1.0, tol, alpha)?;
    let bwd = trace_direction(&walk, Which::Anti, -1.0, tol, alpha)?;
    let (zdm, zdp) = double_points(&alpha);
    let ends = [fwd.last().unwrap().clone(), bwd.last().unwrap().clone()];
    let near = |e: &C64, x: f64| (e.clone() - C64::new(x, 0.0)).abs() < 1e-3;
    let ok = (near(&ends[0], zdm) && near(&ends[1], zdp))
        || (near(&ends[0], zdp) && near(&ends[1], zdm));
    if !ok {
        return Err(Error::Trace {
            re: ends[0].re,
            im: ends[0].im,
            why: "anti-Stokes arc does not span the two double points".into(),
        });
    }
    // orient from z_d^− to z_d^+
    let mut points: Vec<C64>;
    if near(&ends[1], zdm) {
        points = bwd.into_iter().rev().collect();
        points.extend(fwd.into_iter().skip(1));
    } else {
        points = fwd.into_iter().rev().collect();
        points.extend(bwd.into_iter().skip(1));
    }
    Ok(Polyline {
        points,
        kind: CurveKind::AntiStokes,
        alpha,
        tol,
    })
}

/// θ at which the branch-continued Im(ψ₁−ψ₂) vanishes on the ring |z| = r,
/// scanning upward from θ = 0 (the Stokes-loop crossing of the ring).
pub fn stokes_crossing_on_ring(alpha: f64, r: f64) -> Result<f64> {
    let mut walk = walk_to_target(alpha, C64::new(r, 0.0))?;
    let ring = move |th: f64| C64::new(0.0, th).exp().scale(&r);
    let mut th = 0.0f64;
    let g0 = walk.im_delta();
    let mut prev = (th, g0);
    let mut bracket = None;
    while th < std::f64::consts::PI - 1e-3 {
        th = (th + 0.01).min(std::f64::consts::PI - 1e-3);
        walk.move_to(ring(th))?;
        let g = walk.im_delta();
        if g == 0.0 || g.signum() != prev.1.signum() {
            bracket = Some((prev.0, th));
            break;
        }
        prev = (th, g);
    }
    let Some((mut lo, mut hi)) = bracket else {
        return Err(Error::Trace {
            re: r,
            im: 0.0,
            why: "no Stokes crossing on this ring".into(),
        });
    };
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        walk.move_to(ring(mid))?;
        if walk.im_delta().signum() == g0.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The two loci where saddle 2's logs leave the principal sheet, found by
/// ring sweeps; returns (curve for log t_s2, curve for log(t_s2 − 1)).
pub fn trace_sheet_curves(alpha: f64) -> Result<(Polyline, Polyline)> {
    let (_, zdp) = double_points(&alpha);
    let mut log_t_pts: Vec<C64> = Vec::new();
    let mut log_v_pts: Vec<C64> = Vec::new();

    let n_rings = 26;
    let r_min = 0.03 * zdp.max(1.0);
    let r_max = 1.35 * zdp;
    for i in 0..n_rings {
        let f = i as f64 / (n_rings - 1) as f64;
        let r = r_min * (r_max / r_min).powf(f);
        if (r - 1.0).abs() < 0.01 || (r - zdp).abs() < 0.02 * (1.0 + zdp) {
            continue; // singular saddle at z=1; coalescence on the ring
        }
        for half in [-1.0f64, 1.0] {
            let Ok(mut walk) = walk_to_target(alpha, C64::new(r, 0.0)) else {
                continue;
            };
            let ring = move |th: f64| C64::new(0.0, th).exp().scale(&r);
            let mut th = 0.0f64;
            let mut prev_off = walk.s[1].offsets(&walk.z);
            let mut prev_th = th;
            let limit = std::f64::consts::PI - 2e-3;
            while th.abs() < limit {
                th = (th + half * 0.01).clamp(-limit, limit);
                if walk.move_to(ring(th)).is_err() {
                    break;
                }
                let off = walk.s[1].offsets(&walk.z);
                if off.n_t != prev_off.n_t || off.n_v != prev_off.n_v {
                    // bisect the bracketing interval
                    let (mut lo, mut hi) = (prev_th, th);
                    for _ in 0..40 {
                        let mid = 0.5 * (lo + hi);
                        if walk.move_to(ring(mid)).is_err() {
                            break;
                        }
                        let m_off = walk.s[1].offsets(&walk.z);
                        if m_off.n_t == prev_off.n_t && m_off.n_v == prev_off.n_v {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                        if (hi - lo).abs() < 1e-9 {
                            break;
                        }
                    }
                    let zc = ring(0.5 * (lo + hi));
                    if off.n_t != prev_off.n_t {
                        log_t_pts.push(zc.clone());
                    }
                    if off.n_v != prev_off.n_v {
                        log_v_pts.push(zc);
                    }
                    // continue the sweep from the far side
                    let _ = walk.move_to(ring(th));
                    prev_off = walk.s[1].offsets(&walk.z);
                }
                prev_th = th;
            }
        }
    }
    let by_radius = |pts: &mut Vec<C64>| {
        pts.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());
    };
    by_radius(&mut log_t_pts);
    by_radius(&mut log_v_pts);
    Ok((
        Polyline {
            points: log_t_pts,
            kind: CurveKind::SheetLogT,
            alpha,
            tol: 1e-8,
        },
        Polyline {
            points: log_v_pts,
            kind: CurveKind::SheetLogTMinusOne,
            alpha,
            tol: 1e-8,
        },
    ))
}
