//! Tables of positive roots of the characteristic equations used throughout:
//! Bessel zeros, beam frequency equations and the ball's radial equations.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use super::bessel::{bessel_j, bessel_j_prime};
use super::spherical::spherical_j;
use crate::error::{domain, Result};
use crate::roots::{bisect_secant, RootTol};

/// Root families. `RadialRobin` carries the dimensionless product hR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ZeroFamily {
    /// J_m(x) = 0
    BesselJ,
    /// J_m'(x) = 0, x > 0
    BesselJPrime,
    /// ch μ cos μ = 1 (clamped–clamped and free–free beams)
    BeamClampedClamped,
    /// ch μ cos μ = −1 (cantilever)
    BeamClampedFree,
    /// tg μ = th μ (clamped–pinned)
    BeamClampedPinned,
    /// tg γ = γ (ball with Neumann surface)
    RadialTan,
    /// γ cos γ + (hR − 1) sin γ = 0 (ball with Newton cooling)
    RadialRobin(f64),
    /// j_n(x) = 0, the zeros of J_{n+1/2}
    SphericalJ,
}

impl ZeroFamily {
    fn key(self, order: u32) -> (u8, u32, u64) {
        match self {
            ZeroFamily::BesselJ => (0, order, 0),
            ZeroFamily::BesselJPrime => (1, order, 0),
            ZeroFamily::BeamClampedClamped => (2, 0, 0),
            ZeroFamily::BeamClampedFree => (3, 0, 0),
            ZeroFamily::BeamClampedPinned => (4, 0, 0),
            ZeroFamily::RadialTan => (5, 0, 0),
            ZeroFamily::RadialRobin(hr) => (6, 0, hr.to_bits()),
            ZeroFamily::SphericalJ => (7, order, 0),
        }
    }

    /// Characteristic function, scaled so that it stays O(1) near its roots.
    pub fn residual(self, order: u32, x: f64) -> f64 {
        match self {
            ZeroFamily::BesselJ => bessel_j(order, x),
            ZeroFamily::BesselJPrime => bessel_j_prime(order, x),
            ZeroFamily::BeamClampedClamped => x.cos() - 1.0 / x.cosh(),
            ZeroFamily::BeamClampedFree => x.cos() + 1.0 / x.cosh(),
            ZeroFamily::BeamClampedPinned => x.sin() - x.cos() * x.tanh(),
            ZeroFamily::RadialTan => (x.sin() - x * x.cos()) / (1.0 + x * x).sqrt(),
            ZeroFamily::RadialRobin(hr) => {
                let c = hr - 1.0;
                (x * x.cos() + c * x.sin()) / (x * x + c * c).sqrt().max(1e-300)
            }
            ZeroFamily::SphericalJ => x * spherical_j(order, x),
        }
    }

    /// Left end of the search: no positive root lies below it.
    fn search_start(self, order: u32) -> f64 {
        match self {
            ZeroFamily::BesselJ | ZeroFamily::BesselJPrime if order > 0 => order as f64,
            ZeroFamily::BesselJ => 1.0,
            ZeroFamily::BesselJPrime => 0.5,
            ZeroFamily::BeamClampedFree => 0.5,
            ZeroFamily::RadialRobin(_) => 1e-3,
            ZeroFamily::SphericalJ => order as f64 + 0.5,
            _ => 0.5,
        }
    }
}

/// Immutable ascending list of the first roots of one family.
#[derive(Debug, Clone)]
pub struct ZeroTable {
    pub family: ZeroFamily,
    pub order: u32,
    pub roots: Vec<f64>,
    pub tol: f64,
}

impl ZeroTable {
    pub const TOL: f64 = 1e-10;

    /// Compute the first `count` roots by a π/16 sign-change scan followed by
    /// secant/bisection refinement.
    pub fn build(family: ZeroFamily, order: u32, count: usize) -> Result<Self> {
        if let ZeroFamily::RadialRobin(hr) = family {
            if !(hr > 0.0) || !hr.is_finite() {
                return Err(domain("ZeroTable", format!("Robin parameter hR must be positive and finite, got {hr}")));
            }
        }
        let f = |x: f64| family.residual(order, x);
        let tol = RootTol {
            f_abs: 1e-15,
            x_abs: 1e-15,
            max_iter: 300,
        };
        let step = PI / 16.0;
        let mut roots = Vec::with_capacity(count);
        let mut x0 = family.search_start(order);
        let mut f0 = f(x0);
        while roots.len() < count {
            let x1 = x0 + step;
            let f1 = f(x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0.signum() != f1.signum() {
                roots.push(bisect_secant(f, x0, x1, tol)?);
            }
            x0 = x1;
            f0 = f1;
        }
        Ok(Self {
            family,
            order,
            roots,
            tol: Self::TOL,
        })
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// k-th root, 1-based.
    pub fn get(&self, k: usize) -> Option<f64> {
        k.checked_sub(1).and_then(|i| self.roots.get(i).copied())
    }
}

type Key = (u8, u32, u64);

fn cache() -> &'static RwLock<HashMap<Key, Arc<ZeroTable>>> {
    static CACHE: OnceLock<RwLock<HashMap<Key, Arc<ZeroTable>>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Shared table holding at least `count` roots. Tables are never mutated;
/// a request for more roots replaces the cached entry with a longer one.
pub fn zero_table(family: ZeroFamily, order: u32, count: usize) -> Result<Arc<ZeroTable>> {
    let key = family.key(order);
    if let Some(t) = cache().read().expect("zero cache poisoned").get(&key) {
        if t.len() >= count {
            return Ok(Arc::clone(t));
        }
    }
    let want = count.max(16).next_power_of_two();
    let table = Arc::new(ZeroTable::build(family, order, want)?);
    let mut guard = cache().write().expect("zero cache poisoned");
    let entry = guard.entry(key).or_insert_with(|| Arc::clone(&table));
    if entry.len() < table.len() {
        *entry = Arc::clone(&table);
    }
    Ok(Arc::clone(entry))
}

/// The k-th positive root (k ≥ 1) of the given family.
pub fn bessel_zero(family: ZeroFamily, order: u32, k: usize) -> Result<f64> {
    if k == 0 {
        return Err(domain("bessel_zero", "root index is 1-based"));
    }
    Ok(zero_table(family, order, k)?.roots[k - 1])
}
