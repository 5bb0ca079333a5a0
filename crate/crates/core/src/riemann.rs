//! Relaxation approximate Riemann solver.
//!
//! The interface problem is solved for a linearized pressure `pi` with
//! relaxation parameters `c_l`, `c_r` chosen so that the intermediate
//! depths stay positive and the discrete energy inequality holds. All
//! fields of the relaxation system are linearly degenerate, so the fan
//! consists of three waves and four constant states with closed-form
//! expressions.

use crate::error::SolverError;
use crate::model::{physical_flux, ConsState, Flux4, Params, PrimState, DRY_THRESHOLD};

/// Relaxation parameters of the two outer waves.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelaxSpeeds {
    pub c_l: f64,
    pub c_r: f64,
}

/// Resolved three-wave fan: speeds, the four constant states, the relaxed
/// pressures and the auxiliary energies carried by each segment.
#[derive(Clone, Copy, Debug)]
pub struct RiemannFan {
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
    pub state_l: PrimState,
    pub state_lstar: PrimState,
    pub state_rstar: PrimState,
    pub state_r: PrimState,
    pub pi_l: f64,
    pub pi_lstar: f64,
    pub pi_rstar: f64,
    pub pi_r: f64,
    pub c: RelaxSpeeds,
    pub ehat_l: f64,
    pub ehat_lstar: f64,
    pub ehat_rstar: f64,
    pub ehat_r: f64,
}

/// Left/right interface fluxes plus the numerical energy flux. The two
/// fluxes agree in the conservative `(h, hu)` components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FluxPair {
    pub f_l: Flux4,
    pub f_r: Flux4,
    pub energy_flux: f64,
}

/// Relaxation speeds for a wet/wet interface:
/// `c/h = a + 2 (max(0, u_l - u_r) + max(0, dP)/(h_l a_l + h_r a_r))`.
///
/// The velocity and pressure jump terms enlarge the speeds exactly enough
/// to guarantee positive intermediate depths and the energy inequality.
pub fn relaxation_speeds(
    p_l: &PrimState,
    p_r: &PrimState,
    params: &Params,
) -> Result<RelaxSpeeds, SolverError> {
    for p in [p_l, p_r] {
        if !(p.h.is_finite() && p.u.is_finite() && p.sxx.is_finite() && p.szz.is_finite()) {
            return Err(SolverError::NonFinite("relaxation_speeds"));
        }
    }
    let (ratio_l, ratio_r) = speed_ratios(p_l, p_r, params);
    Ok(RelaxSpeeds {
        c_l: p_l.h * ratio_l,
        c_r: p_r.h * ratio_r,
    })
}

/// The ratios `c_l/h_l`, `c_r/h_r`, well defined even for a dry side.
fn speed_ratios(p_l: &PrimState, p_r: &PrimState, params: &Params) -> (f64, f64) {
    let a_l = p_l.sound_speed(params);
    let a_r = p_r.sound_speed(params);
    let pr_l = p_l.pressure(params);
    let pr_r = p_r.pressure(params);
    let du_plus = (p_l.u - p_r.u).max(0.0);
    let denom = p_l.h * a_l + p_r.h * a_r;
    let dp_term = |dp: f64| if dp > 0.0 { dp / denom } else { 0.0 };
    let ratio_l = a_l + 2.0 * (du_plus + dp_term(pr_r - pr_l));
    let ratio_r = a_r + 2.0 * (du_plus + dp_term(pr_l - pr_r));
    (ratio_l, ratio_r)
}

/// Solve the interface Riemann problem for a pair of cell states.
///
/// Dry sides degenerate the fan: the corresponding outer wave collapses
/// onto the contact and the fluxes are driven by the wet side alone. An
/// intermediate depth that fails to be positive is an internal error.
pub fn solve_fan(
    q_l: &ConsState,
    q_r: &ConsState,
    params: &Params,
) -> Result<RiemannFan, SolverError> {
    for q in [q_l, q_r] {
        if !(q.h.is_finite() && q.hu.is_finite() && q.hsxx.is_finite() && q.hszz.is_finite()) {
            return Err(SolverError::NonFinite("solve_fan"));
        }
    }
    let wet_l = !q_l.is_dry(DRY_THRESHOLD);
    let wet_r = !q_r.is_dry(DRY_THRESHOLD);
    let p_l = q_l.primitive_or_dry(DRY_THRESHOLD);
    let p_r = q_r.primitive_or_dry(DRY_THRESHOLD);

    if !wet_l && !wet_r {
        return Ok(still_fan(PrimState::dry(), 0.0, 0.0, params));
    }
    // An interface between identical states resolves to the state itself;
    // keeping this case exact makes uniform regions and steady contacts
    // bit-stationary.
    if q_l == q_r {
        let a = p_l.sound_speed(params);
        return Ok(still_fan(p_l, a, p_l.h * a, params));
    }

    match (wet_l, wet_r) {
        (true, true) => wet_wet_fan(&p_l, &p_r, params),
        (true, false) => dry_right_fan(&p_l, params),
        (false, true) => dry_left_fan(&p_r, params),
        (false, false) => unreachable!(),
    }
}

/// Fan whose four states coincide.
fn still_fan(p: PrimState, ratio: f64, c: f64, params: &Params) -> RiemannFan {
    let pi = if p.h > 0.0 { p.pressure(params) } else { 0.0 };
    let e = p.internal_energy(params);
    RiemannFan {
        sigma1: p.u - ratio,
        sigma2: p.u,
        sigma3: p.u + ratio,
        state_l: p,
        state_lstar: p,
        state_rstar: p,
        state_r: p,
        pi_l: pi,
        pi_lstar: pi,
        pi_rstar: pi,
        pi_r: pi,
        c: RelaxSpeeds { c_l: c, c_r: c },
        ehat_l: e,
        ehat_lstar: e,
        ehat_rstar: e,
        ehat_r: e,
    }
}

fn wet_wet_fan(
    p_l: &PrimState,
    p_r: &PrimState,
    params: &Params,
) -> Result<RiemannFan, SolverError> {
    let (ratio_l, ratio_r) = speed_ratios(p_l, p_r, params);
    let c_l = p_l.h * ratio_l;
    let c_r = p_r.h * ratio_r;
    let c_sum = c_l + c_r;
    let pi_l = p_l.pressure(params);
    let pi_r = p_r.pressure(params);
    let du = p_r.u - p_l.u;

    let u_star = ((c_l * p_l.u + c_r * p_r.u) + (pi_l - pi_r)) / c_sum;
    let pi_star = ((c_r * pi_l + c_l * pi_r) - (c_l * c_r) * du) / c_sum;

    let h_lstar = star_depth(p_l.h, (c_r * du + (pi_l - pi_r)) / (c_l * c_sum))?;
    let h_rstar = star_depth(p_r.h, (c_l * du + (pi_r - pi_l)) / (c_r * c_sum))?;

    let state_lstar = star_state(p_l, h_lstar, u_star);
    let state_rstar = star_state(p_r, h_rstar, u_star);

    let e_l = p_l.internal_energy(params);
    let e_r = p_r.internal_energy(params);

    Ok(RiemannFan {
        sigma1: p_l.u - ratio_l,
        sigma2: u_star,
        sigma3: p_r.u + ratio_r,
        state_l: *p_l,
        state_lstar,
        state_rstar,
        state_r: *p_r,
        pi_l,
        pi_lstar: pi_star,
        pi_rstar: pi_star,
        pi_r,
        c: RelaxSpeeds { c_l, c_r },
        ehat_l: e_l,
        ehat_lstar: e_l + (pi_star * pi_star - pi_l * pi_l) / (2.0 * c_l * c_l),
        ehat_rstar: e_r + (pi_star * pi_star - pi_r * pi_r) / (2.0 * c_r * c_r),
        ehat_r: e_r,
    })
}

/// Intermediate depth from its reciprocal. A zero correction keeps the
/// input depth bit-for-bit, so isolated contacts are resolved exactly.
fn star_depth(h: f64, correction: f64) -> Result<f64, SolverError> {
    if correction == 0.0 {
        return Ok(h);
    }
    let inv = 1.0 / h + correction;
    if inv <= 0.0 {
        return Err(SolverError::DegenerateFan(inv));
    }
    Ok(1.0 / inv)
}

/// Star state on one side: transported variables are preserved, so the
/// conformation rescales with the depth ratio.
fn star_state(p: &PrimState, h_star: f64, u_star: f64) -> PrimState {
    let ratio = p.h / h_star;
    PrimState {
        h: h_star,
        u: u_star,
        sxx: p.sxx * (ratio * ratio),
        szz: p.szz / (ratio * ratio),
    }
}

/// Right side dry: the 3-wave collapses onto the contact, behind which the
/// depth vanishes.
fn dry_right_fan(p_l: &PrimState, params: &Params) -> Result<RiemannFan, SolverError> {
    let a_l = p_l.sound_speed(params);
    let pi_l = p_l.pressure(params);
    // Dry-side conventions: u = 0, P = 0, so only the velocity and
    // pressure jumps against zero enter the speed.
    let ratio_l = a_l + 2.0 * (p_l.u.max(0.0) + (-pi_l).max(0.0) / (p_l.h * a_l));
    let c_l = p_l.h * ratio_l;

    let u_star = p_l.u + pi_l / c_l;
    let h_lstar = star_depth(p_l.h, pi_l / (c_l * c_l))?;
    let state_lstar = star_state(p_l, h_lstar, u_star);
    let e_l = p_l.internal_energy(params);

    Ok(RiemannFan {
        sigma1: p_l.u - ratio_l,
        sigma2: u_star,
        sigma3: u_star,
        state_l: *p_l,
        state_lstar,
        state_rstar: PrimState::dry(),
        state_r: PrimState::dry(),
        pi_l,
        pi_lstar: 0.0,
        pi_rstar: 0.0,
        pi_r: 0.0,
        c: RelaxSpeeds { c_l, c_r: 0.0 },
        ehat_l: e_l,
        ehat_lstar: e_l + (0.0 - pi_l * pi_l) / (2.0 * c_l * c_l),
        ehat_rstar: 0.0,
        ehat_r: 0.0,
    })
}

/// Mirror image of [`dry_right_fan`].
fn dry_left_fan(p_r: &PrimState, params: &Params) -> Result<RiemannFan, SolverError> {
    let a_r = p_r.sound_speed(params);
    let pi_r = p_r.pressure(params);
    let ratio_r = a_r + 2.0 * ((-p_r.u).max(0.0) + (-pi_r).max(0.0) / (p_r.h * a_r));
    let c_r = p_r.h * ratio_r;

    let u_star = p_r.u - pi_r / c_r;
    let h_rstar = star_depth(p_r.h, pi_r / (c_r * c_r))?;
    let state_rstar = star_state(p_r, h_rstar, u_star);
    let e_r = p_r.internal_energy(params);

    Ok(RiemannFan {
        sigma1: u_star,
        sigma2: u_star,
        sigma3: p_r.u + ratio_r,
        state_l: PrimState::dry(),
        state_lstar: PrimState::dry(),
        state_rstar,
        state_r: *p_r,
        pi_l: 0.0,
        pi_lstar: 0.0,
        pi_rstar: 0.0,
        pi_r,
        c: RelaxSpeeds { c_l: 0.0, c_r },
        ehat_l: 0.0,
        ehat_lstar: 0.0,
        ehat_rstar: e_r + (0.0 - pi_r * pi_r) / (2.0 * c_r * c_r),
        ehat_r: e_r,
    })
}

/// Fan segment index at a self-similar coordinate: 0 = left, 1 = left
/// star, 2 = right star, 3 = right. A coordinate equal to a wave speed
/// selects the segment on the left of that wave.
fn segment(fan: &RiemannFan, xi: f64) -> usize {
    if xi <= fan.sigma1 {
        0
    } else if xi <= fan.sigma2 {
        1
    } else if xi <= fan.sigma3 {
        2
    } else {
        3
    }
}

fn segment_state(fan: &RiemannFan, k: usize) -> (&PrimState, f64, f64) {
    match k {
        0 => (&fan.state_l, fan.pi_l, fan.ehat_l),
        1 => (&fan.state_lstar, fan.pi_lstar, fan.ehat_lstar),
        2 => (&fan.state_rstar, fan.pi_rstar, fan.ehat_rstar),
        _ => (&fan.state_r, fan.pi_r, fan.ehat_r),
    }
}

/// Sampled solution in update variables at `xi = x/t`.
pub fn sample(fan: &RiemannFan, xi: f64) -> ConsState {
    let (p, _, _) = segment_state(fan, segment(fan, xi));
    p.to_conservative()
}

fn is_uniform(fan: &RiemannFan) -> bool {
    fan.state_l == fan.state_r && fan.state_l == fan.state_lstar && fan.state_l == fan.state_rstar
}

/// Left/right numerical fluxes of the interface.
///
/// The `(h, hu)` components are conservative and common to both sides:
/// they take the value `(h u, h u^2 + pi)` of the fan at `x/t = 0`. The
/// transported components accumulate the wave jumps weighted with
/// `min(0, speed)` on the left and `max(0, speed)` on the right.
pub fn interface_fluxes(fan: &RiemannFan, params: &Params) -> FluxPair {
    if is_uniform(fan) {
        let f = physical_flux(&fan.state_l, params);
        return FluxPair {
            f_l: f,
            f_r: f,
            energy_flux: fan.state_l.energy_flux(params),
        };
    }

    let (p0, pi0, _) = segment_state(fan, segment(fan, 0.0));
    let f_h = p0.h * p0.u;
    let f_hu = (p0.h * p0.u) * p0.u + pi0;

    // Per-segment transported quantities.
    let xs = [
        fan.state_l.h * fan.state_l.sxx,
        fan.state_lstar.h * fan.state_lstar.sxx,
        fan.state_rstar.h * fan.state_rstar.sxx,
        fan.state_r.h * fan.state_r.sxx,
    ];
    let zs = [
        fan.state_l.h * fan.state_l.szz,
        fan.state_lstar.h * fan.state_lstar.szz,
        fan.state_rstar.h * fan.state_rstar.szz,
        fan.state_r.h * fan.state_r.szz,
    ];
    let speeds = [fan.sigma1, fan.sigma2, fan.sigma3];

    let upwind = |vals: &[f64; 4]| {
        let mut left = vals[0] * fan.state_l.u;
        let mut right = vals[3] * fan.state_r.u;
        for k in 0..3 {
            let jump = vals[k + 1] - vals[k];
            left += speeds[k].min(0.0) * jump;
            right -= speeds[k].max(0.0) * jump;
        }
        (left, right)
    };
    let (fl_sxx, fr_sxx) = upwind(&xs);
    let (fl_szz, fr_szz) = upwind(&zs);

    FluxPair {
        f_l: Flux4 {
            h: f_h,
            hu: f_hu,
            hsxx: fl_sxx,
            hszz: fl_szz,
        },
        f_r: Flux4 {
            h: f_h,
            hu: f_hu,
            hsxx: fr_sxx,
            hszz: fr_szz,
        },
        energy_flux: energy_flux_numerical(fan, params),
    }
}

/// Numerical energy flux `(h u^2/2 + h e_hat + pi) u` at `x/t = 0`.
pub fn energy_flux_numerical(fan: &RiemannFan, params: &Params) -> f64 {
    if is_uniform(fan) {
        return fan.state_l.energy_flux(params);
    }
    let (p, pi, ehat) = segment_state(fan, segment(fan, 0.0));
    ((0.5 * p.h * p.u * p.u + p.h * ehat) + pi) * p.u
}

/// Maximal propagation speed of the fan.
pub fn max_speed(fan: &RiemannFan) -> f64 {
    fan.sigma1
        .abs()
        .max(fan.sigma2.abs())
        .max(fan.sigma3.abs())
}
