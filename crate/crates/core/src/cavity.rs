//! Single-side QD–cavity reflection model.
//!
//! A photon reflected from the cavity picks up the complex coefficient
//!
//! ```text
//! r(ω) = 1 − κ[i(ω_X − ω) + γ/2] / ([i(ω_X − ω) + γ/2][i(ω_c − ω) + κ/2 + κ_s/2] + g²)
//! ```
//!
//! with `g = 0` for the uncoupled transition (`r0`) and the actual coupling
//! for the coupled one (`rh`). Spin ↑ couples to L, spin ↓ couples to R.

use crate::error::CavityError;
use crate::ops::{diag4, Op4};
use crate::scalar::{c, re, Real, C};

/// Physical cavity parameters, all in the same energy/frequency units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams<T> {
    pub g: T,
    pub kappa: T,
    pub kappa_s: T,
    pub gamma: T,
    pub omega_c: T,
    pub omega_x: T,
}

impl<T: Real> CavityParams<T> {
    /// Parameters in units of κ from the dimensionless sweep axes:
    /// coupling `g/(κ+κ_s)`, side leakage `κ_s/κ`, exciton decay `γ/κ`.
    /// The cavity and exciton are degenerate at ω = 0.
    pub fn from_ratios(g_over_total: T, kappa_s_ratio: T, gamma_ratio: T) -> Result<Self, CavityError> {
        let p = Self {
            g: g_over_total * (T::one() + kappa_s_ratio),
            kappa: T::one(),
            kappa_s: kappa_s_ratio,
            gamma: gamma_ratio,
            omega_c: T::zero(),
            omega_x: T::zero(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), CavityError> {
        let fields = [self.g, self.kappa, self.kappa_s, self.gamma, self.omega_c, self.omega_x];
        if fields.iter().any(|x| !x.is_finite()) {
            return Err(CavityError::InvalidParams("parameters must be finite".into()));
        }
        if self.kappa <= T::zero() {
            return Err(CavityError::InvalidParams(format!("kappa must be positive, got {}", self.kappa)));
        }
        if self.kappa_s < T::zero() || self.gamma < T::zero() || self.g < T::zero() {
            return Err(CavityError::InvalidParams("g, kappa_s and gamma must be non-negative".into()));
        }
        Ok(())
    }
}

/// Reflection coefficient at photon frequency `omega`. With `coupled ==
/// false` the coupling is forced to zero.
pub fn reflection_coefficient<T: Real>(p: &CavityParams<T>, omega: T, coupled: bool) -> Result<C<T>, CavityError> {
    p.validate()?;
    let half = T::lit(0.5);
    let g = if coupled { p.g } else { T::zero() };
    let dipole = c(p.gamma * half, p.omega_x - omega);
    let field = c((p.kappa + p.kappa_s) * half, p.omega_c - omega);
    let denom = dipole * field + re(g * g);
    if denom.norm() < T::lit(1e-30) {
        return Err(CavityError::DegenerateDenominator(denom.norm().as_f64()));
    }
    Ok(re(T::one()) - dipole * re(p.kappa) / denom)
}

/// Uncoupled (`r0`) and coupled (`rh`) reflection coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionPair<T> {
    pub r0: C<T>,
    pub rh: C<T>,
}

/// How a [`ReflectionPair`] becomes a scattering operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScatteringConvention {
    /// diag(−|r0|, |rh|, |rh|, −|r0|): the resonant lossy rules.
    #[default]
    SignedModuli,
    /// diag(r0, rh, rh, r0) with the complex coefficients as computed.
    FullComplex,
}

impl<T: Real> ReflectionPair<T> {
    /// Lossless resonant limit: r0 = −1, rh = +1.
    pub fn ideal() -> Self {
        Self { r0: re(-T::one()), rh: re(T::one()) }
    }

    /// Pair with the resonant signs attached to given moduli: (−m0, +mh).
    pub fn from_moduli(m0: T, mh: T) -> Self {
        Self { r0: re(-m0), rh: re(mh) }
    }

    pub fn moduli(&self) -> (T, T) {
        (self.r0.norm(), self.rh.norm())
    }

    /// The pair whose full-complex operator equals this pair's operator under
    /// `convention`. Execution always uses the full-complex form.
    pub fn with_convention(&self, convention: ScatteringConvention) -> Self {
        match convention {
            ScatteringConvention::SignedModuli => Self::from_moduli(self.r0.norm(), self.rh.norm()),
            ScatteringConvention::FullComplex => *self,
        }
    }

    pub fn is_lossless(&self) -> bool {
        let tol = T::norm_slack();
        (self.r0.norm() - T::one()).abs() <= tol && (self.rh.norm() - T::one()).abs() <= tol
    }
}

pub fn reflection_pair<T: Real>(p: &CavityParams<T>, omega: T) -> Result<ReflectionPair<T>, CavityError> {
    Ok(ReflectionPair { r0: reflection_coefficient(p, omega, false)?, rh: reflection_coefficient(p, omega, true)? })
}

pub fn ideal_reflection_pair<T: Real>() -> ReflectionPair<T> {
    ReflectionPair::ideal()
}

/// Joint operator on (photon polarization ⊗ spin) in the basis (R↑, L↑, R↓, L↓).
pub fn scattering_operator<T: Real>(pair: &ReflectionPair<T>, convention: ScatteringConvention) -> Op4<T> {
    let p = pair.with_convention(convention);
    diag4([p.r0, p.rh, p.rh, p.r0])
}

/// Exciton dephasing: coherence times in the same units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DephasingParams<T> {
    pub tau: T,
    pub t2: T,
}

impl<T: Real> DephasingParams<T> {
    pub fn new(tau: T, t2: T) -> Result<Self, CavityError> {
        if tau.is_nan() || tau < T::zero() {
            return Err(CavityError::InvalidParams(format!("tau must be >= 0, got {}", tau)));
        }
        if t2.is_nan() || t2 <= T::zero() {
            return Err(CavityError::InvalidParams(format!("T2 must be > 0, got {}", t2)));
        }
        Ok(Self { tau, t2 })
    }
}

/// Multiplicative fidelity penalty exp(−τ/T2).
pub fn dephasing_factor<T: Real>(dp: &DephasingParams<T>) -> T {
    (-dp.tau / dp.t2).exp()
}
