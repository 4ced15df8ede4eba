//! Eigenvalue counting for rectangles and cubes, the Weyl estimate and the
//! free-electron Fermi energy.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::par::{self, Exec};

/// Product domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CountDomain {
    Square(f64),
    Rect(f64, f64),
    Cube(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountBc {
    Dirichlet,
    Neumann,
}

/// 𝒩(λ), the number of eigenvalues below λ counted with multiplicity, for
/// −a²Δ on a product domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingFunction {
    pub domain: CountDomain,
    pub bc: CountBc,
    pub a: f64,
    pub lambda_max: f64,
}

/// Largest k ≥ 0 with k² < y, or None when y ≤ 0. Values within 1e−9 of an
/// integer are treated as that integer.
fn max_index_below(y: f64) -> Option<u64> {
    if y <= 0.0 {
        return None;
    }
    let r = y.round();
    let y = if (y - r).abs() <= 1e-9 * y.max(1.0) { r } else { y };
    let mut k = y.sqrt().floor() as u64;
    while (k as f64) * (k as f64) >= y {
        if k == 0 {
            return None;
        }
        k -= 1;
    }
    while ((k + 1) as f64) * ((k + 1) as f64) < y {
        k += 1;
    }
    Some(k)
}

impl CountingFunction {
    pub fn new(domain: CountDomain, bc: CountBc, a: f64, lambda_max: f64) -> Result<Self> {
        let dims_ok = match domain {
            CountDomain::Square(l) | CountDomain::Cube(l) => l > 0.0 && l.is_finite(),
            CountDomain::Rect(l1, l2) => l1 > 0.0 && l2 > 0.0 && l1.is_finite() && l2.is_finite(),
        };
        if !dims_ok {
            return Err(Error::InvalidProblem(format!("domain sides must be positive, got {domain:?}")));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidProblem(format!("speed must be positive, got {a}")));
        }
        if !(lambda_max > 0.0) {
            return Err(Error::InvalidProblem(format!("lambda_max must be positive, got {lambda_max}")));
        }
        Ok(Self {
            domain,
            bc,
            a,
            lambda_max,
        })
    }

    fn first_index(&self) -> u64 {
        match self.bc {
            CountBc::Dirichlet => 1,
            CountBc::Neumann => 0,
        }
    }

    /// Sides (l_x, l_y[, l_z]).
    fn sides(&self) -> (f64, f64, Option<f64>) {
        match self.domain {
            CountDomain::Square(l) => (l, l, None),
            CountDomain::Rect(l1, l2) => (l1, l2, None),
            CountDomain::Cube(l) => (l, l, Some(l)),
        }
    }

    /// Domain measure (area or volume).
    pub fn measure(&self) -> f64 {
        match self.sides() {
            (lx, ly, None) => lx * ly,
            (lx, ly, Some(lz)) => lx * ly * lz,
        }
    }

    pub fn dimension(&self) -> u32 {
        match self.domain {
            CountDomain::Cube(_) => 3,
            _ => 2,
        }
    }

    /// Number of k ≥ first with (π a k/l)² < rest.
    fn count_line(&self, rest: f64, l: f64) -> u64 {
        let y = rest * l * l / (PI * PI * self.a * self.a);
        match max_index_below(y) {
            Some(k) if k >= self.first_index() => k - self.first_index() + 1,
            _ => 0,
        }
    }

    fn j_range(&self, lambda: f64, l: f64) -> u64 {
        (l * lambda.max(0.0).sqrt() / (PI * self.a)).ceil() as u64 + 1
    }

    /// Exact 𝒩(λ) with Exec::default().
    pub fn count_exact(&self, lambda: f64) -> Result<u64> {
        self.count_exact_with(lambda, Exec::default())
    }

    pub fn count_exact_with(&self, lambda: f64, exec: Exec) -> Result<u64> {
        if lambda > self.lambda_max {
            return Err(Error::OutOfRange {
                what: "lambda",
                value: lambda,
                limit: self.lambda_max,
            });
        }
        if !(lambda > 0.0) {
            return Ok(0);
        }
        let first = self.first_index();
        let c = (PI * self.a).powi(2);
        let (lx, ly, lz) = self.sides();
        let jn = self.j_range(lambda, lx);
        Ok(match lz {
            None => par::sum_u64(exec, (jn + 1 - first) as usize, |i| {
                let j = first + i as u64;
                self.count_line(lambda - c * (j as f64 / lx).powi(2), ly)
            }),
            Some(lz) => {
                let kn = self.j_range(lambda, ly);
                par::sum_u64(exec, (jn + 1 - first) as usize, |i| {
                    let j = first + i as u64;
                    let rj = lambda - c * (j as f64 / lx).powi(2);
                    if rj <= 0.0 {
                        return 0;
                    }
                    (first..=kn)
                        .map(|k| self.count_line(rj - c * (k as f64 / ly).powi(2), lz))
                        .sum()
                })
            }
        })
    }

    /// Distinct eigenvalues below `lambda` with their multiplicities.
    /// Square and cube eigenvalues are grouped exactly by their integer
    /// index sums; rectangles by relative agreement to 1e−12.
    pub fn samples(&self, lambda: f64) -> Result<Vec<(f64, u64)>> {
        if lambda > self.lambda_max {
            return Err(Error::OutOfRange {
                what: "lambda",
                value: lambda,
                limit: self.lambda_max,
            });
        }
        let first = self.first_index();
        let c = (PI * self.a).powi(2);
        let (lx, ly, lz) = self.sides();
        let jn = self.j_range(lambda, lx);
        let kn = self.j_range(lambda, ly);
        match self.domain {
            CountDomain::Square(l) | CountDomain::Cube(l) => {
                let mut map: BTreeMap<u64, u64> = BTreeMap::new();
                let scale = c / (l * l);
                let third: Vec<u64> = if lz.is_some() { (first..=kn).collect() } else { vec![0] };
                for j in first..=jn {
                    for k in first..=kn {
                        for &m in &third {
                            let key = j * j + k * k + m * m;
                            if (key as f64) * scale < lambda {
                                *map.entry(key).or_default() += 1;
                            }
                        }
                    }
                }
                Ok(map.into_iter().map(|(key, mult)| (key as f64 * scale, mult)).collect())
            }
            CountDomain::Rect(_, _) => {
                let mut vals = Vec::new();
                for j in first..=jn {
                    for k in first..=kn {
                        let v = c * ((j as f64 / lx).powi(2) + (k as f64 / ly).powi(2));
                        if v < lambda {
                            vals.push(v);
                        }
                    }
                }
                vals.sort_by(f64::total_cmp);
                let mut out: Vec<(f64, u64)> = Vec::new();
                for v in vals {
                    match out.last_mut() {
                        Some((w, m)) if (v - *w).abs() <= 1e-12 * v.max(1e-300) => *m += 1,
                        _ => out.push((v, 1)),
                    }
                }
                Ok(out)
            }
        }
    }

    /// Σ e^{−λ_n t} over eigenvalues below `lambda`.
    pub fn heat_trace(&self, lambda: f64, t: f64) -> Result<f64> {
        let terms: Vec<f64> = self.samples(lambda)?.iter().map(|(v, m)| *m as f64 * (-v * t).exp()).collect();
        Ok(par::pairwise_sum(&terms))
    }
}

/// Leading Weyl term V λ^{n/2} / ((4πa²)^{n/2} Γ(1 + n/2)).
pub fn weyl_estimate(measure: f64, dimension: u32, a: f64, lambda: f64) -> Result<f64> {
    let gamma = match dimension {
        1 => PI.sqrt() / 2.0,
        2 => 1.0,
        3 => 0.75 * PI.sqrt(),
        _ => return Err(domain("weyl_estimate", format!("dimension must be 1, 2 or 3, got {dimension}"))),
    };
    let n = dimension as f64;
    Ok(measure * lambda.max(0.0).powf(n / 2.0) / ((4.0 * PI * a * a).powf(n / 2.0) * gamma))
}

/// ε_F = ħ²/(2μ) (3π² n)^{2/3}.
pub fn fermi_energy(density: f64, hbar: f64, mass: f64) -> Result<f64> {
    for (what, v) in [("density", density), ("hbar", hbar), ("mass", mass)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain("fermi_energy", format!("{what} must be positive, got {v}")));
        }
    }
    Ok(hbar * hbar / (2.0 * mass) * (3.0 * PI * PI * density).powf(2.0 / 3.0))
}

/// Density whose Fermi energy is `energy`: n = (2μ ε/ħ²)^{3/2} / (3π²).
pub fn fermi_density(energy: f64, hbar: f64, mass: f64) -> Result<f64> {
    for (what, v) in [("energy", energy), ("hbar", hbar), ("mass", mass)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(domain("fermi_density", format!("{what} must be positive, got {v}")));
        }
    }
    Ok((2.0 * mass * energy / (hbar * hbar)).powf(1.5) / (3.0 * PI * PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_bound_is_strict() {
        assert_eq!(max_index_below(4.0), Some(1));
        assert_eq!(max_index_below(4.0 + 1e-12), Some(1));
        assert_eq!(max_index_below(4.1), Some(2));
        assert_eq!(max_index_below(0.5), Some(0));
        assert_eq!(max_index_below(0.0), None);
    }

    #[test]
    fn first_square_mode() {
        let cf = CountingFunction::new(CountDomain::Square(1.0), CountBc::Dirichlet, 1.0, 1e6).unwrap();
        let l1 = 2.0 * PI * PI;
        assert_eq!(cf.count_exact(l1).unwrap(), 0);
        assert_eq!(cf.count_exact(l1 * (1.0 + 1e-9)).unwrap(), 1);
        assert!(cf.count_exact(2e6).is_err());
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let cf = CountingFunction::new(CountDomain::Cube(1.3), CountBc::Neumann, 0.7, 1e5).unwrap();
        let a = cf.count_exact_with(9e4, Exec::Sequential).unwrap();
        let b = cf.count_exact_with(9e4, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        let total: u64 = cf.samples(9e4).unwrap().iter().map(|s| s.1).sum();
        assert_eq!(total, a);
    }
}
