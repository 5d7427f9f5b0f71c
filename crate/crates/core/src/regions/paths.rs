//! Steepest descent/ascent paths through the saddles, in the t-plane or
//! the w-plane (t = e^w, which unrolls the Riemann sheets into horizontal
//! strips of width 2π).
//!
//! Paths solve dt/ds = ∓ψ̄′/|ψ′| (constant Im ψ, monotone Re ψ). The
//! phase is integrated alongside the position so the constancy of Im ψ
//! can be enforced across branch cuts, with a transverse Newton step
//! absorbing drift.

use crate::error::{Error, Result};
use crate::numerics::complex::Complex;
use crate::phase::continuation::walk_to_target;
use crate::phase::{double_points, double_saddle, psi, psi_derivs};

use super::trace::{CurveKind, Polyline};

type C64 = Complex<f64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Plane {
    T,
    W,
}

#[derive(Clone, Copy)]
enum Sense {
    Descent,
    Ascent,
}

struct Flow<'a> {
    z: &'a C64,
    beta: &'a C64,
    plane: Plane,
}

impl Flow<'_> {
    /// ψ′ in the working plane: for w-plane, d/dw ψ(e^w) = ψ′(e^w)·e^w.
    fn dpsi(&self, x: &C64) -> Result<C64> {
        match self.plane {
            Plane::T => Ok(psi_derivs(x, self.z, self.beta, 1)?[0].clone()),
            Plane::W => {
                let t = x.exp();
                Ok(psi_derivs(&t, self.z, self.beta, 1)?[0].clone() * t)
            }
        }
    }

    fn singularities(&self) -> Vec<C64> {
        match self.plane {
            Plane::T => vec![
                C64::new(0.0, 0.0),
                C64::new(1.0, 0.0),
                self.z.inv(),
            ],
            Plane::W => {
                // w = 0 (t = 1) and the lattice of log(1/z)
                let base = self.z.inv().ln();
                let mut v = vec![C64::new(0.0, 0.0)];
                for k in -3..=3 {
                    v.push(base.clone() + C64::new(0.0, 2.0 * std::f64::consts::PI * k as f64));
                }
                v
            }
        }
    }

    fn near_terminal(&self, x: &C64, sense: Sense) -> bool {
        match (self.plane, sense) {
            (Plane::T, Sense::Descent) => {
                x.abs() < 2e-4 || (x.clone() - self.z.inv()).abs() < 2e-4 * (1.0 + self.z.inv().abs())
            }
            (Plane::T, Sense::Ascent) => {
                (x.clone() - C64::new(1.0, 0.0)).abs() < 2e-4 || x.abs() > 60.0
            }
            (Plane::W, Sense::Descent) => {
                // t = e^w → 0 means Re w → −∞; t → 1/z means w near log(1/z) lattice
                x.re < -14.0
                    || self
                        .singularities()
                        .iter()
                        .skip(1)
                        .any(|s| (x.clone() - s.clone()).abs() < 2e-4 * (1.0 + s.abs()))
            }
            (Plane::W, Sense::Ascent) => x.abs() < 2e-4 || x.re > 14.0 || x.im.abs() > 14.0,
        }
    }
}

fn integrate(
    flow: &Flow,
    start: C64,
    psi_start: C64,
    im_target: f64,
    sense: Sense,
    re_budget: f64,
) -> Result<(Vec<C64>, bool)> {
    let sgn = match sense {
        Sense::Descent => -1.0,
        Sense::Ascent => 1.0,
    };
    let mut x = start;
    let psi_start_re = psi_start.re;
    let mut ps = psi_start;
    let mut pts = vec![x.clone()];
    let sing = flow.singularities();
    let mut truncated = false;

    for _ in 0..40_000 {
        if flow.near_terminal(&x, sense) {
            break;
        }
        if (ps.re - psi_start_re).abs() > re_budget {
            break;
        }
        let d_sing = sing
            .iter()
            .map(|s| (x.clone() - s.clone()).abs())
            .fold(f64::MAX, f64::min);
        let h = (0.02 * (1.0 + x.abs())).min(0.05 * d_sing);
        if h < 1e-9 {
            truncated = true;
            break;
        }
        // RK4 on the coupled (x, ψ) system with unit-speed field
        let field = |xx: &C64| -> Result<(C64, C64)> {
            let dp = flow.dpsi(xx)?;
            let n = dp.abs();
            if n < 1e-14 {
                return Err(Error::Numerical("flow stalled at a critical point".into()));
            }
            let v = dp.conj().scale(&(sgn / n));
            let dps = dp * v.clone();
            Ok((v, dps))
        };
        let k1 = field(&x)?;
        let k2 = field(&(x.clone() + k1.0.clone().scale(&(h / 2.0))))?;
        let k3 = field(&(x.clone() + k2.0.clone().scale(&(h / 2.0))))?;
        let k4 = field(&(x.clone() + k3.0.clone().scale(&h)))?;
        let six = 6.0;
        let dx = (k1.0 + k2.0.scale(&2.0) + k3.0.scale(&2.0) + k4.0).scale(&(h / six));
        let dps = (k1.1 + k2.1.scale(&2.0) + k3.1.scale(&2.0) + k4.1).scale(&(h / six));
        x = x + dx;
        ps = ps + dps;

        // transverse Newton step to hold Im ψ at its saddle value
        let dp = flow.dpsi(&x)?;
        let n2 = dp.norm_sqr();
        if n2 > 1e-28 {
            let drift = im_target - ps.im;
            let corr = dp.conj().mul_i().scale(&(drift / n2));
            ps = ps + flow.dpsi(&x)? * corr.clone();
            x = x + corr;
        }
        pts.push(x.clone());
    }
    Ok((pts, truncated))
}

/// Steepest descent and ascent paths through the saddles at z.
///
/// At a generic z each simple saddle contributes two descent and two
/// ascent legs; at z = z_d^− the double saddle contributes three of each,
/// separated by 2π/3.
pub fn trace_steepest_paths(z: &C64, alpha: f64, plane: Plane) -> Result<Vec<Polyline>> {
    let beta = C64::new(1.0, -alpha);
    let (zdm, _) = double_points(&alpha);
    let at_double = (z.clone() - C64::new(zdm, 0.0)).abs() < 1e-9;

    let flow = Flow { z, beta: &beta, plane };
    let mut out = Vec::new();

    let mut seeds: Vec<(C64, C64, f64, Sense)> = Vec::new(); // (start, ψ_start, im_target, sense)
    if at_double {
        let sd = double_saddle(&alpha)?;
        let d3 = psi_derivs(&sd.t, z, &beta, 3)?[2].clone();
        let a3 = d3.scale(&(1.0 / 6.0)); // cubic coefficient of ψ − ψ_d
        let base = match plane {
            Plane::T => sd.t.clone(),
            Plane::W => sd.t.ln(),
        };
        let eps = 1e-5 * (1.0 + base.abs());
        for k in 0..3 {
            for (sense, phase0) in [(Sense::Descent, std::f64::consts::PI), (Sense::Ascent, 0.0)] {
                let ang = (phase0 - a3.arg() + 2.0 * std::f64::consts::PI * k as f64) / 3.0;
                // seed in the t-plane, map to the working plane
                let t_seed = sd.t.clone() + C64::new(0.0, ang).exp().scale(&eps);
                let x_seed = match plane {
                    Plane::T => t_seed.clone(),
                    Plane::W => t_seed.ln(),
                };
                let ps = psi(&t_seed, z, &beta, 0, 0)?;
                seeds.push((x_seed, ps.clone(), ps.im, sense));
            }
        }
    } else {
        let walk = walk_to_target(alpha, z.clone())?;
        for j in 0..2 {
            let t_s = walk.s[j].t.clone();
            let p2 = psi_derivs(&t_s, z, &beta, 2)?[1].clone();
            let ps_saddle = walk.psi_cont(j);
            let base = match plane {
                Plane::T => t_s.clone(),
                Plane::W => C64::new(t_s.abs().ln(), walk.s[j].arg_t),
            };
            let eps = 1e-5 * (1.0 + base.abs());
            // quadratic coefficient in the working plane:
            // ψ_w″ = ψ″ t² + ψ′ t = ψ″ t_s² at a saddle
            let p2_plane = match plane {
                Plane::T => p2.clone(),
                Plane::W => p2.clone() * t_s.clone() * t_s.clone(),
            };
            for k in 0..2 {
                for (sense, phase0) in
                    [(Sense::Descent, std::f64::consts::PI), (Sense::Ascent, 0.0)]
                {
                    let ang = (phase0 - p2_plane.arg()) / 2.0 + std::f64::consts::PI * k as f64;
                    let step = C64::new(0.0, ang).exp().scale(&eps);
                    let x_seed = base.clone() + step.clone();
                    let ps_seed = ps_saddle.clone() + step.powi(2) * p2_plane.clone().scale(&0.5);
                    seeds.push((x_seed, ps_seed, ps_saddle.im, sense));
                }
            }
        }
    }

    for (start, ps0, im_target, sense) in seeds {
        let (pts, _truncated) = integrate(&flow, start, ps0, im_target, sense, 80.0)?;
        out.push(Polyline {
            points: pts,
            kind: match sense {
                Sense::Descent => CurveKind::SteepestDescent,
                Sense::Ascent => CurveKind::SteepestAscent,
            },
            alpha,
            tol: 1e-8,
        });
    }
    Ok(out)
}
