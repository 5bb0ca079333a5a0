//! State representations, pressure law, eigenstructure and energy
//! functionals of the reduced shallow viscoelastic system.
//!
//! The evolved quantities per cell are `q = (h, h u, h sxx, h szz)` where
//! `sxx`, `szz` are the diagonal entries of the conformation tensor. The
//! pressure carries an elastic contribution on top of the hydrostatic one,
//! so it may be negative; its derivative at fixed transported variables
//! stays positive, which keeps the system hyperbolic.

use crate::error::SolverError;

/// Depth below which a cell is treated as dry.
pub const DRY_THRESHOLD: f64 = 1e-10;

/// Physical parameters of the model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Params {
    /// Gravitational acceleration.
    pub g: f64,
    /// Polymer viscosity. Zero selects the plain shallow-water pressure.
    pub eta_p: f64,
    /// Stress relaxation time.
    pub lambda: f64,
}

impl Params {
    pub fn new(g: f64, eta_p: f64, lambda: f64) -> Result<Self, SolverError> {
        if !(g.is_finite() && eta_p.is_finite() && lambda.is_finite()) {
            return Err(SolverError::NonFinite("Params"));
        }
        if g <= 0.0 {
            return Err(SolverError::InvalidParams(format!("g = {g} must be > 0")));
        }
        if lambda <= 0.0 {
            return Err(SolverError::InvalidParams(format!(
                "lambda = {lambda} must be > 0"
            )));
        }
        if eta_p < 0.0 {
            return Err(SolverError::InvalidParams(format!(
                "eta_p = {eta_p} must be >= 0"
            )));
        }
        Ok(Params { g, eta_p, lambda })
    }

    /// Coefficient of the elastic pressure term.
    #[inline]
    pub fn elastic_coeff(&self) -> f64 {
        0.5 * self.eta_p / self.lambda
    }

    /// Coefficient of the elastic energy term.
    #[inline]
    pub fn energy_coeff(&self) -> f64 {
        0.25 * self.eta_p / self.lambda
    }
}

impl Default for Params {
    fn default() -> Self {
        Params {
            g: 9.81,
            eta_p: 1.0,
            lambda: 1.0,
        }
    }
}

/// Hydrostatic part of the pressure. Kept as a single function so that the
/// well-balanced flux correction cancels it bit-for-bit.
#[inline]
pub(crate) fn hydrostatic_pressure(g: f64, h: f64) -> f64 {
    0.5 * g * h * h
}

/// Cell state in the update variables `(h, h u, h sxx, h szz)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConsState {
    pub h: f64,
    pub hu: f64,
    pub hsxx: f64,
    pub hszz: f64,
}

impl ConsState {
    pub const fn new(h: f64, hu: f64, hsxx: f64, hszz: f64) -> Self {
        ConsState { h, hu, hsxx, hszz }
    }

    /// Canonical dry cell: the zero vector.
    pub const fn dry() -> Self {
        ConsState {
            h: 0.0,
            hu: 0.0,
            hsxx: 0.0,
            hszz: 0.0,
        }
    }

    #[inline]
    pub fn is_dry(&self, dry_threshold: f64) -> bool {
        self.h <= dry_threshold
    }

    /// Physical variables. Depths at or below `dry_threshold` read back as
    /// the canonical dry state `(0, 0, 1, 1)`; states with negative
    /// components are rejected.
    pub fn to_primitive(&self, dry_threshold: f64) -> Result<PrimState, SolverError> {
        if !(self.h.is_finite()
            && self.hu.is_finite()
            && self.hsxx.is_finite()
            && self.hszz.is_finite())
        {
            return Err(SolverError::NonFinite("ConsState"));
        }
        for (component, value) in [
            ("h", self.h),
            ("h*sigma_xx", self.hsxx),
            ("h*sigma_zz", self.hszz),
        ] {
            if value < 0.0 {
                return Err(SolverError::NegativeComponent { component, value });
            }
        }
        Ok(self.primitive_or_dry(dry_threshold))
    }

    /// Unchecked variant of [`to_primitive`](Self::to_primitive) for the
    /// solver hot path; membership in the invariant domain is the caller's
    /// responsibility.
    #[inline]
    pub(crate) fn primitive_or_dry(&self, dry_threshold: f64) -> PrimState {
        debug_assert!(self.h >= 0.0 && self.hsxx >= 0.0 && self.hszz >= 0.0);
        if self.h <= dry_threshold {
            PrimState::dry()
        } else {
            PrimState {
                h: self.h,
                u: self.hu / self.h,
                sxx: self.hsxx / self.h,
                szz: self.hszz / self.h,
            }
        }
    }
}

/// Physical variables `(h, u, sigma_xx, sigma_zz)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrimState {
    pub h: f64,
    pub u: f64,
    pub sxx: f64,
    pub szz: f64,
}

/// Quantities that are transported with the flow and do not jump across
/// the outer waves of the Riemann fan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SVars {
    pub s_xx: f64,
    pub s_zz: f64,
}

impl PrimState {
    pub const fn new(h: f64, u: f64, sxx: f64, szz: f64) -> Self {
        PrimState { h, u, sxx, szz }
    }

    /// Dry convention: zero depth and velocity, conformation at equilibrium.
    pub const fn dry() -> Self {
        PrimState {
            h: 0.0,
            u: 0.0,
            sxx: 1.0,
            szz: 1.0,
        }
    }

    pub fn to_conservative(&self) -> ConsState {
        ConsState {
            h: self.h,
            hu: self.h * self.u,
            hsxx: self.h * self.sxx,
            hszz: self.h * self.szz,
        }
    }

    /// Pressure `g h^2/2 + eta_p/(2 lambda) h (szz - sxx)`. May be negative.
    #[inline]
    pub fn pressure(&self, params: &Params) -> f64 {
        hydrostatic_pressure(params.g, self.h) + params.elastic_coeff() * self.h * (self.szz - self.sxx)
    }

    /// Derivative of the pressure with respect to depth at fixed
    /// transported variables: `g h + eta_p/(2 lambda) (3 szz + sxx)`.
    #[inline]
    pub fn dp_dh(&self, params: &Params) -> f64 {
        params.g * self.h + params.elastic_coeff() * (3.0 * self.szz + self.sxx)
    }

    /// Characteristic speed relative to the flow.
    #[inline]
    pub fn sound_speed(&self, params: &Params) -> f64 {
        self.dp_dh(params).sqrt()
    }

    /// Eigenvalues `(u - a, u, u + a)`; the middle one is double.
    pub fn eigenvalues(&self, params: &Params) -> (f64, f64, f64) {
        let a = self.sound_speed(params);
        (self.u - a, self.u, self.u + a)
    }

    /// Internal energy per unit mass,
    /// `g h/2 + eta_p/(4 lambda) (sxx + szz - ln(sxx szz) - 2)`.
    ///
    /// The elastic part vanishes exactly at equilibrium (`sxx = szz = 1`)
    /// and is positive elsewhere. Panics on nonpositive conformation.
    pub fn internal_energy(&self, params: &Params) -> f64 {
        assert!(
            self.sxx > 0.0 && self.szz > 0.0,
            "internal energy requires positive conformation, got ({}, {})",
            self.sxx,
            self.szz
        );
        0.5 * params.g * self.h
            + params.energy_coeff() * (self.sxx + self.szz - (self.sxx * self.szz).ln() - 2.0)
    }

    /// Mechanical energy `E = h u^2/2 + h e` and its topographic extension
    /// `E + g h b`.
    pub fn total_energy(&self, b: f64, params: &Params) -> (f64, f64) {
        let e = 0.5 * self.h * self.u * self.u + self.h * self.internal_energy(params);
        (e, e + params.g * self.h * b)
    }

    /// Energy flux `G = (E + P) u`.
    pub fn energy_flux(&self, params: &Params) -> f64 {
        let (e, _) = self.total_energy(0.0, params);
        (e + self.pressure(params)) * self.u
    }

    /// Transported variables `(sxx^-1/2 / h, szz^1/2 / h)`. Undefined on a
    /// dry state.
    pub fn s_vars(&self) -> Result<SVars, SolverError> {
        if self.h <= 0.0 {
            return Err(SolverError::DryState);
        }
        Ok(SVars {
            s_xx: 1.0 / (self.sxx.sqrt() * self.h),
            s_zz: self.szz.sqrt() / self.h,
        })
    }

    /// Diagonal extra stress `tau = eta_p/(2 lambda) (sigma - I)`.
    pub fn extra_stress(&self, params: &Params) -> (f64, f64) {
        let k = params.elastic_coeff();
        (k * (self.sxx - 1.0), k * (self.szz - 1.0))
    }
}

/// Flux of the update variables across an interface; same component layout
/// as [`ConsState`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Flux4 {
    pub h: f64,
    pub hu: f64,
    pub hsxx: f64,
    pub hszz: f64,
}

impl Flux4 {
    pub const ZERO: Flux4 = Flux4 {
        h: 0.0,
        hu: 0.0,
        hsxx: 0.0,
        hszz: 0.0,
    };
}

/// Flux of the homogeneous system evaluated at a single state,
/// `(h u, h u^2 + P, h sxx u, h szz u)`.
pub fn physical_flux(p: &PrimState, params: &Params) -> Flux4 {
    Flux4 {
        h: p.h * p.u,
        hu: (p.h * p.u) * p.u + p.pressure(params),
        hsxx: (p.h * p.sxx) * p.u,
        hszz: (p.h * p.szz) * p.u,
    }
}
