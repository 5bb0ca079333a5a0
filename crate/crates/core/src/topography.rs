//! Hydrostatic reconstruction: topography-aware interface fluxes.
//!
//! Depths are reconstructed against the interface bottom jump before the
//! flat-bottom solver runs, and the momentum flux is corrected with the
//! difference of cell and reconstructed hydrostatic pressures. Lakes at
//! rest then produce exactly zero updates.

use crate::error::SolverError;
use crate::model::{hydrostatic_pressure, ConsState, Flux4, Params, DRY_THRESHOLD};
use crate::riemann::{interface_fluxes, max_speed, solve_fan};

/// Topography-corrected interface fluxes plus the numerical energy flux.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TopoFluxPair {
    pub f_l: Flux4,
    pub f_r: Flux4,
    pub energy_flux: f64,
}

/// Reconstructed interface states: depths are reduced by the uphill part
/// of the bottom jump (clipped at dry), velocity and conformation are
/// carried over unchanged.
pub fn hydrostatic_reconstruct(
    q_l: &ConsState,
    q_r: &ConsState,
    delta_b: f64,
) -> (ConsState, ConsState) {
    let p_l = q_l.primitive_or_dry(DRY_THRESHOLD);
    let p_r = q_r.primitive_or_dry(DRY_THRESHOLD);
    let h_l_sharp = (p_l.h - delta_b.max(0.0)).max(0.0);
    let h_r_sharp = (p_r.h - (-delta_b).max(0.0)).max(0.0);
    // An unchanged depth passes the cell state through verbatim.
    let rebuild = |q: &ConsState, p: &crate::model::PrimState, h: f64| {
        if h == p.h {
            *q
        } else {
            ConsState {
                h,
                hu: h * p.u,
                hsxx: h * p.sxx,
                hszz: h * p.szz,
            }
        }
    };
    (
        rebuild(q_l, &p_l, h_l_sharp),
        rebuild(q_r, &p_r, h_r_sharp),
    )
}

/// Interface fluxes over a bottom step, together with the maximal wave
/// speed of the reconstructed fan (used by the CFL condition).
pub fn topo_solution(
    q_l: &ConsState,
    q_r: &ConsState,
    b_l: f64,
    b_r: f64,
    params: &Params,
) -> Result<(TopoFluxPair, f64), SolverError> {
    let delta_b = b_r - b_l;
    let (qs_l, qs_r) = hydrostatic_reconstruct(q_l, q_r, delta_b);
    let fan = solve_fan(&qs_l, &qs_r, params)?;
    let pair = interface_fluxes(&fan, params);

    // The correction is assembled as (flux - p(h_sharp)) + p(h_cell) so
    // that at rest the first difference cancels bit-for-bit; an unchanged
    // depth skips it entirely, keeping level-bottom fluxes untouched.
    let g = params.g;
    let correct = |flux: Flux4, h_sharp: f64, h_cell: f64| {
        if h_sharp == h_cell {
            flux
        } else {
            Flux4 {
                hu: (flux.hu - hydrostatic_pressure(g, h_sharp)) + hydrostatic_pressure(g, h_cell),
                ..flux
            }
        }
    };
    let f_l = correct(pair.f_l, qs_l.h, q_l.h);
    let f_r = correct(pair.f_r, qs_r.h, q_r.h);

    let b_sharp = b_l.max(b_r);
    let energy_flux = pair.energy_flux + pair.f_l.h * g * b_sharp;

    Ok((
        TopoFluxPair {
            f_l,
            f_r,
            energy_flux,
        },
        max_speed(&fan),
    ))
}

/// Topography-corrected fluxes; reduces to the flat-bottom pair when the
/// bottom is level.
pub fn topo_fluxes(
    q_l: &ConsState,
    q_r: &ConsState,
    b_l: f64,
    b_r: f64,
    params: &Params,
) -> Result<TopoFluxPair, SolverError> {
    topo_solution(q_l, q_r, b_l, b_r, params).map(|(pair, _)| pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PrimState;

    fn params(g: f64, eta_p: f64, lambda: f64) -> Params {
        Params::new(g, eta_p, lambda).unwrap()
    }

    #[test]
    fn reconstruction_level_bottom_is_identity() {
        let q_l = ConsState::new(2.0, 1.0, 2.0, 2.0);
        let q_r = ConsState::new(1.0, -0.5, 1.5, 0.5);
        let (a, b) = hydrostatic_reconstruct(&q_l, &q_r, 0.0);
        assert_eq!(a, q_l);
        assert_eq!(b, q_r);
    }

    #[test]
    fn reconstruction_uphill_step() {
        let q_l = PrimState::new(2.0, 0.25, 1.0, 1.0).to_conservative();
        let q_r = PrimState::new(1.0, 0.0, 1.0, 1.0).to_conservative();
        let (a, b) = hydrostatic_reconstruct(&q_l, &q_r, 0.5);
        assert_eq!(a.h, 1.5);
        assert_eq!(a.hu, 1.5 * 0.25);
        assert_eq!(b.h, 1.0);
    }

    #[test]
    fn reconstruction_clips_at_dry() {
        let q_l = ConsState::new(0.3, 0.0, 0.3, 0.3);
        let (a, _) = hydrostatic_reconstruct(&q_l, &ConsState::dry(), 0.5);
        assert_eq!(a, ConsState::dry());
    }

    #[test]
    fn flat_bottom_reduces_to_riemann_fluxes() {
        let pr = params(1.0, 1.0, 1.0);
        let q_l = ConsState::new(3.0, 0.0, 3.0, 3.0);
        let q_r = ConsState::new(1.0, 0.0, 1.0, 1.0);
        let fan = solve_fan(&q_l, &q_r, &pr).unwrap();
        let flat = interface_fluxes(&fan, &pr);
        let topo = topo_fluxes(&q_l, &q_r, 0.7, 0.7, &pr).unwrap();
        assert_eq!(topo.f_l.h, flat.f_l.h);
        assert_eq!(topo.f_l.hu, flat.f_l.hu);
        assert_eq!(topo.f_l.hsxx, flat.f_l.hsxx);
        assert_eq!(topo.f_r.hszz, flat.f_r.hszz);
    }

    #[test]
    fn lake_at_rest_fluxes_cancel_exactly() {
        // u = 0, h + b constant, conformation at equilibrium: the momentum
        // flux on each side is exactly the cell's own hydrostatic load.
        let pr = params(9.81, 1e-4, 1.0);
        let (b_l, b_r) = (0.0, 1.0);
        let q_l = PrimState::new(10.0, 0.0, 1.0, 1.0).to_conservative();
        let q_r = PrimState::new(9.0, 0.0, 1.0, 1.0).to_conservative();
        let pair = topo_fluxes(&q_l, &q_r, b_l, b_r, &pr).unwrap();

        assert_eq!(pair.f_l.h, 0.0);
        assert_eq!(pair.f_r.h, 0.0);
        assert_eq!(pair.f_l.hu, hydrostatic_pressure(9.81, 10.0));
        assert_eq!(pair.f_r.hu, hydrostatic_pressure(9.81, 9.0));
        assert_eq!(pair.f_l.hsxx, 0.0);
        assert_eq!(pair.f_l.hszz, 0.0);
        assert_eq!(pair.f_r.hsxx, 0.0);
        assert_eq!(pair.f_r.hszz, 0.0);
    }

    #[test]
    fn submerged_step_at_rest_is_balanced() {
        let pr = params(1.0, 1.0, 1.0);
        let q_l = PrimState::new(2.0, 0.0, 1.0, 1.0).to_conservative();
        let q_r = PrimState::new(1.5, 0.0, 1.0, 1.0).to_conservative();
        let pair = topo_fluxes(&q_l, &q_r, 0.0, 0.5, &pr).unwrap();
        assert_eq!(pair.f_l.hu, hydrostatic_pressure(1.0, 2.0));
        assert_eq!(pair.f_r.hu, hydrostatic_pressure(1.0, 1.5));
        assert_eq!(pair.f_l.h, 0.0);
    }

    #[test]
    fn reconstructed_states_stay_in_domain() {
        let q_l = ConsState::new(1.0, -3.0, 0.2, 5.0);
        let q_r = ConsState::new(0.4, 1.0, 2.0, 0.1);
        for db in [-2.0, -0.4, 0.0, 0.3, 1.5] {
            let (a, b) = hydrostatic_reconstruct(&q_l, &q_r, db);
            for q in [a, b] {
                assert!(q.h >= 0.0 && q.hsxx >= 0.0 && q.hszz >= 0.0);
            }
        }
    }
}
