//! Trial functions on [0, L] and the functionals evaluated on them.
//!
//! Two representations, deliberately:
//!
//! * [`SineSeries`] — u(x) = Σ aₖ sin(kπx/L), finitely many modes.  The L²
//!   norm and Dirichlet energy are *exact* by Parseval, which makes the
//!   type a strong oracle for everything quadrature-based.
//! * [`GridFunction`] — uniform samples v₀ … v_N on [0, L]; the common
//!   currency of the ODE solvers and the variational maximizer.
//!   Derivatives are formed by second-order central differences (one-sided
//!   second-order at the endpoints), functionals by the trapezoid rule, so
//!   grid functionals converge at O(N⁻²) to their continuum values.
//!
//! The quantities with no closed form — ∫|uu′| and ∫|u|^{p+1} — are
//! computed by composite Gauss–Legendre quadrature on point evaluations
//! with panel-count doubling until the relative change drops below 1e-10.
//! For ∫|uu′| the integrand has kinks at the zeros of u·u′, which would
//! stall a naive composite rule; the integral is therefore split at the
//! (bisected) sign changes of u and u′ first, leaving only smooth pieces.
//!
//! Conversion SineSeries → GridFunction is provided ([`SineSeries::to_grid`]);
//! the reverse is never needed and not provided.

use crate::error::{Error, Result};
use crate::quadrature::{self, EVAL_BUDGET};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Relative-change criterion for the panel-doubling functional quadratures.
const FUNCTIONAL_REL_TOL: f64 = 1e-10;

/// A finite Fourier-sine series u(x) = Σ_{k=1..K} aₖ sin(kπx/L) on [0, L].
///
/// Members of H¹₀(0, L) by construction: u(0) = u(L) = 0 exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SineSeries {
    length: f64,
    coeffs: Vec<f64>,
}

impl SineSeries {
    /// Builds a series from its domain length and coefficients a₁ … a_K.
    ///
    /// # Errors
    ///
    /// `Error::Domain` if the length is not positive/finite or any
    /// coefficient is non-finite.
    pub fn new(length: f64, coeffs: Vec<f64>) -> Result<Self> {
        crate::error::require_positive("length", length)?;
        if coeffs.iter().any(|a| !a.is_finite()) {
            return Err(Error::domain("sine coefficients must be finite"));
        }
        Ok(SineSeries { length, coeffs })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Point evaluation u(x) for x ∈ [0, L].
    ///
    /// # Errors
    ///
    /// `Error::Domain` if x lies outside [0, L].
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 || x > self.length {
            return Err(Error::domain(format!(
                "evaluation point {x} outside [0, {}]",
                self.length
            )));
        }
        Ok(self.value_at(x))
    }

    /// Unchecked evaluation; the boundary values are returned as exact
    /// zeros (they are structural zeros of every sine series, and tests
    /// downstream rely on u(L) not picking up a sin(kπ) rounding residue).
    pub(crate) fn value_at(&self, x: f64) -> f64 {
        if x == 0.0 || x == self.length {
            return 0.0;
        }
        let w = std::f64::consts::PI * x / self.length;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a * ((i + 1) as f64 * w).sin())
            .sum()
    }

    /// Unchecked derivative u′(x) = Σ aₖ (kπ/L) cos(kπx/L).
    pub(crate) fn deriv_at(&self, x: f64) -> f64 {
        let w = std::f64::consts::PI * x / self.length;
        let scale = std::f64::consts::PI / self.length;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let k = (i + 1) as f64;
                a * k * scale * (k * w).cos()
            })
            .sum()
    }

    /// Exact Parseval value of ∫₀ᴸ u² dx = (L/2) Σ aₖ².
    pub fn norm_l2_sq(&self) -> f64 {
        0.5 * self.length * self.coeffs.iter().map(|a| a * a).sum::<f64>()
    }

    /// Exact Parseval value of ∫₀ᴸ (u′)² dx = (π²/(2L)) Σ k² aₖ².
    pub fn dirichlet_energy(&self) -> f64 {
        let s: f64 = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let k = (i + 1) as f64;
                k * k * a * a
            })
            .sum();
        std::f64::consts::PI.powi(2) / (2.0 * self.length) * s
    }

    /// Mean value (1/L)∫₀ᴸ u dx, computed by quadrature (the closed form
    /// exists but bookkeeping it buys nothing).  Best-effort: the integrand
    /// is entire, so the doubling criterion converges far below the budget
    /// for any finite series.
    pub fn mean(&self) -> f64 {
        let out = quadrature::composite_doubling(
            |x| self.value_at(x),
            0.0,
            self.length,
            FUNCTIONAL_REL_TOL,
            EVAL_BUDGET,
        );
        out.value / self.length
    }

    /// Mixed functional ∫₀ᴸ |u u′| dx.
    ///
    /// The integrand is continuous but kinked wherever u or u′ vanishes;
    /// the domain is split at those (bisected) zeros so each composite
    /// piece is smooth, then the pieces are summed.
    pub fn opial_functional(&self) -> f64 {
        self.weighted_abs_mixed(|_| 1.0)
    }

    /// ∫₀ᴸ w(t)·|u(t) u′(t)| dt for a smooth positive weight w; shared by
    /// the plain mixed functional (w ≡ 1) and the weighted bound used in
    /// the chain checks (w = L − t).
    pub(crate) fn weighted_abs_mixed(&self, weight: impl Fn(f64) -> f64) -> f64 {
        if self.coeffs.iter().all(|&a| a == 0.0) {
            return 0.0;
        }
        let cuts = self.kink_points();
        let pieces = cuts.len() - 1;
        let budget = (EVAL_BUDGET / pieces).max(1 << 12);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi - lo <= self.length * 1e-13 {
                continue;
            }
            total += quadrature::composite_doubling(
                |x| weight(x) * (self.value_at(x) * self.deriv_at(x)).abs(),
                lo,
                hi,
                FUNCTIONAL_REL_TOL,
                budget,
            )
            .value;
        }
        total
    }

    /// Sorted cut points 0 = c₀ < … < c_m = L containing every sign change
    /// of u and of u′ (located by scan + bisection).
    fn kink_points(&self) -> Vec<f64> {
        let mut cuts = vec![0.0, self.length];
        let samples = 32 * self.coeffs.len().max(1) + 32;
        sign_changes(|x| self.value_at(x), 0.0, self.length, samples, &mut cuts);
        sign_changes(|x| self.deriv_at(x), 0.0, self.length, samples, &mut cuts);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() <= self.length * 1e-13);
        cuts
    }

    /// ∫₀ᴸ |u|^{p+1} dx for p ≥ 1, by panel-doubling quadrature.
    ///
    /// # Errors
    ///
    /// `Error::Domain` for p < 1; `Error::Accuracy` if the doubling
    /// criterion is not met within the evaluation budget.
    pub fn lp1_functional(&self, p: f64) -> Result<f64> {
        crate::error::require_exponent(p)?;
        let out = quadrature::composite_doubling(
            |x| self.value_at(x).abs().powf(p + 1.0),
            0.0,
            self.length,
            FUNCTIONAL_REL_TOL,
            EVAL_BUDGET,
        );
        if out.converged {
            Ok(out.value)
        } else {
            Err(Error::Accuracy {
                context: format!("lp1_functional(p = {p}) did not meet the doubling criterion"),
                best: out.value,
                error_estimate: out.last_change,
                evaluations: out.evaluations,
            })
        }
    }

    /// Largest absolute value of u, from a dense scan refined over the
    /// fundamental oscillation scale of the highest mode.  Used for
    /// relative thresholds (preconditions), not as a certified supremum.
    pub fn sup_abs(&self) -> f64 {
        let samples = 64 * self.coeffs.len().max(1) + 64;
        let mut best = 0.0f64;
        for i in 0..=samples {
            let x = self.length * i as f64 / samples as f64;
            best = best.max(self.value_at(x).abs());
        }
        best
    }

    /// Deterministic random series: aₖ uniform in [−1, 1] scaled by k^(−decay).
    ///
    /// # Errors
    ///
    /// `Error::Domain` if `modes` = 0, `decay` is negative/non-finite, or
    /// the length is invalid.
    pub fn sample_random(modes: usize, decay: f64, seed: u64, length: f64) -> Result<Self> {
        if modes == 0 {
            return Err(Error::domain("sample_random requires at least one mode"));
        }
        if !decay.is_finite() || decay < 0.0 {
            return Err(Error::domain(format!(
                "decay must be non-negative and finite, got {decay}"
            )));
        }
        crate::error::require_positive("length", length)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let coeffs = (1..=modes)
            .map(|k| rng.random_range(-1.0..1.0) * (k as f64).powf(-decay))
            .collect();
        Ok(SineSeries { length, coeffs })
    }

    /// Samples the series at n+1 uniform nodes (n ≥ 2 intervals).
    pub fn to_grid(&self, n: usize) -> Result<GridFunction> {
        if n < 2 {
            return Err(Error::domain(format!(
                "grid conversion needs at least 2 intervals, got {n}"
            )));
        }
        let values = (0..=n)
            .map(|i| {
                let x = if i == n {
                    self.length
                } else {
                    i as f64 * self.length / n as f64
                };
                self.value_at(x)
            })
            .collect();
        Ok(GridFunction {
            length: self.length,
            values,
        })
    }
}

/// Locates sign changes of g on [a, b] by uniform scan and bisection,
/// appending each root found to `out`.
fn sign_changes(g: impl Fn(f64) -> f64, a: f64, b: f64, samples: usize, out: &mut Vec<f64>) {
    let mut prev_x = a;
    let mut prev_g = g(a);
    for i in 1..=samples {
        let x = a + (b - a) * i as f64 / samples as f64;
        let gx = g(x);
        if prev_g == 0.0 {
            out.push(prev_x);
        } else if prev_g.signum() != gx.signum() && gx != 0.0 {
            // Bisect [prev_x, x] down to rounding scale.
            let (mut lo, mut hi) = (prev_x, x);
            let mut glo = prev_g;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let gm = g(mid);
                if gm == 0.0 {
                    lo = mid;
                    break;
                }
                if gm.signum() == glo.signum() {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_g = gx;
    }
}

/// A function sampled at uniform nodes x_i = iL/N, i = 0 … N, on [0, L].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunction {
    length: f64,
    values: Vec<f64>,
}

impl GridFunction {
    /// Wraps raw samples; needs at least N = 2 intervals (3 values).
    ///
    /// # Errors
    ///
    /// `Error::Domain` on invalid length, too few samples, or non-finite
    /// values.
    pub fn new(length: f64, values: Vec<f64>) -> Result<Self> {
        crate::error::require_positive("length", length)?;
        if values.len() < 3 {
            return Err(Error::domain(format!(
                "a grid function needs at least 3 samples, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("grid values must be finite"));
        }
        Ok(GridFunction { length, values })
    }

    /// Builds a grid function by sampling `f` at n+1 uniform nodes.
    pub fn from_fn(length: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!(
                "a grid function needs at least 2 intervals, got {n}"
            )));
        }
        crate::error::require_positive("length", length)?;
        let values: Vec<f64> = (0..=n)
            .map(|i| {
                let x = if i == n {
                    length
                } else {
                    i as f64 * length / n as f64
                };
                f(x)
            })
            .collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::domain("grid values must be finite"));
        }
        Ok(GridFunction { length, values })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Number of grid intervals N (= number of samples − 1).
    pub fn intervals(&self) -> usize {
        self.values.len() - 1
    }

    /// Grid spacing h = L/N.
    pub fn spacing(&self) -> f64 {
        self.length / self.intervals() as f64
    }

    /// The node abscissa x_i.
    pub fn node(&self, i: usize) -> f64 {
        if i == self.intervals() {
            self.length
        } else {
            i as f64 * self.length / self.intervals() as f64
        }
    }

    /// Discrete derivative: second-order central differences at interior
    /// nodes, one-sided second-order stencils at the two endpoints.
    pub fn derivative_values(&self) -> Vec<f64> {
        let v = &self.values;
        let n = v.len();
        let h = self.spacing();
        let mut d = Vec::with_capacity(n);
        d.push((-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h));
        for i in 1..n - 1 {
            d.push((v[i + 1] - v[i - 1]) / (2.0 * h));
        }
        d.push((3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h));
        d
    }

    /// Trapezoid value of ∫ u² dx.
    pub fn norm_l2_sq(&self) -> f64 {
        self.trapezoid(|v| v * v)
    }

    /// Trapezoid value of ∫ (u′)² dx with the discrete derivative above.
    pub fn dirichlet_energy(&self) -> f64 {
        let d = self.derivative_values();
        trapezoid_of(&d, self.spacing(), |x| x * x)
    }

    /// Trapezoid value of ∫ |u u′| dx.
    pub fn opial_functional(&self) -> f64 {
        let d = self.derivative_values();
        let h = self.spacing();
        let n = self.values.len();
        let mut s = 0.5 * ((self.values[0] * d[0]).abs() + (self.values[n - 1] * d[n - 1]).abs());
        for (v, dv) in self.values[1..n - 1].iter().zip(&d[1..n - 1]) {
            s += (v * dv).abs();
        }
        s * h
    }

    /// Trapezoid value of ∫ |u|^{p+1} dx, p ≥ 1.
    pub fn lp1_functional(&self, p: f64) -> Result<f64> {
        crate::error::require_exponent(p)?;
        Ok(self.trapezoid(|v| v.abs().powf(p + 1.0)))
    }

    /// Mean (1/L)∫ u dx by the trapezoid rule.
    pub fn mean(&self) -> f64 {
        self.trapezoid(|v| v) / self.length
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    fn trapezoid(&self, f: impl Fn(f64) -> f64) -> f64 {
        trapezoid_of(&self.values, self.spacing(), f)
    }

    /// Two-column CSV serialization with a one-line header, the exchange
    /// format consumed by the CLI's export path.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,u\n");
        for (i, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{},{}\n", self.node(i), v));
        }
        out
    }
}

fn trapezoid_of(values: &[f64], h: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = values.len();
    let mut s = 0.5 * (f(values[0]) + f(values[n - 1]));
    for v in &values[1..n - 1] {
        s += f(*v);
    }
    s * h
}

/// Uniform interface over both representations, used by the inequality
/// evaluators and the Rayleigh quotient.  For a [`SineSeries`] the L² and
/// Dirichlet functionals are exact (Parseval); for a [`GridFunction`] all
/// functionals are the second-order discrete forms documented on the type.
pub trait Trial {
    fn length(&self) -> f64;
    fn norm_l2_sq(&self) -> f64;
    fn dirichlet_energy(&self) -> f64;
    fn opial_functional(&self) -> f64;
    fn lp1_functional(&self, p: f64) -> Result<f64>;
    fn mean(&self) -> f64;
    fn sup_abs(&self) -> f64;
    /// (u(0), u(L)).
    fn boundary_values(&self) -> (f64, f64);
}

impl Trial for SineSeries {
    fn length(&self) -> f64 {
        self.length
    }
    fn norm_l2_sq(&self) -> f64 {
        SineSeries::norm_l2_sq(self)
    }
    fn dirichlet_energy(&self) -> f64 {
        SineSeries::dirichlet_energy(self)
    }
    fn opial_functional(&self) -> f64 {
        SineSeries::opial_functional(self)
    }
    fn lp1_functional(&self, p: f64) -> Result<f64> {
        SineSeries::lp1_functional(self, p)
    }
    fn mean(&self) -> f64 {
        SineSeries::mean(self)
    }
    fn sup_abs(&self) -> f64 {
        SineSeries::sup_abs(self)
    }
    fn boundary_values(&self) -> (f64, f64) {
        (0.0, 0.0)
    }
}

impl Trial for GridFunction {
    fn length(&self) -> f64 {
        self.length
    }
    fn norm_l2_sq(&self) -> f64 {
        GridFunction::norm_l2_sq(self)
    }
    fn dirichlet_energy(&self) -> f64 {
        GridFunction::dirichlet_energy(self)
    }
    fn opial_functional(&self) -> f64 {
        GridFunction::opial_functional(self)
    }
    fn lp1_functional(&self, p: f64) -> Result<f64> {
        GridFunction::lp1_functional(self, p)
    }
    fn mean(&self) -> f64 {
        GridFunction::mean(self)
    }
    fn sup_abs(&self) -> f64 {
        GridFunction::sup_abs(self)
    }
    fn boundary_values(&self) -> (f64, f64) {
        (self.values[0], self.values[self.values.len() - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn rel_err(x: f64, reference: f64) -> f64 {
        if reference == 0.0 {
            x.abs()
        } else {
            (x - reference).abs() / reference.abs()
        }
    }

    fn series(length: f64, coeffs: &[f64]) -> SineSeries {
        SineSeries::new(length, coeffs.to_vec()).unwrap()
    }

    #[test]
    fn eval_anchors() {
        assert!((series(1.0, &[1.0]).eval(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(series(1.0, &[1.0]).eval(0.0).unwrap(), 0.0);
        assert!((series(1.0, &[0.0, 1.0]).eval(0.25).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn eval_rejects_points_outside_domain() {
        let u = series(1.0, &[1.0]);
        assert!(u.eval(-0.1).is_err());
        assert!(u.eval(1.1).is_err());
        assert!(u.eval(f64::NAN).is_err());
    }

    #[test]
    fn boundary_values_are_exact_zero() {
        for seed in 0..20 {
            let u = SineSeries::sample_random(9, 0.7, seed, 2.5).unwrap();
            assert_eq!(u.eval(0.0).unwrap(), 0.0);
            assert_eq!(u.eval(2.5).unwrap(), 0.0);
        }
    }

    #[test]
    fn parseval_norm_anchors() {
        assert!((series(1.0, &[1.0]).norm_l2_sq() - 0.5).abs() < 1e-15);
        assert_eq!(series(1.0, &[0.0]).norm_l2_sq(), 0.0);
        assert!((series(2.0, &[1.0, 1.0]).norm_l2_sq() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn parseval_energy_anchors() {
        assert!(rel_err(series(1.0, &[1.0]).dirichlet_energy(), PI * PI / 2.0) < 1e-15);
        assert!(rel_err(series(2.0, &[1.0]).dirichlet_energy(), PI * PI / 4.0) < 1e-15);
        assert!(rel_err(series(1.0, &[0.0, 1.0]).dirichlet_energy(), 2.0 * PI * PI) < 1e-15);
    }

    #[test]
    fn opial_functional_of_first_mode_is_one() {
        // ∫₀¹ |sin(πx)·π cos(πx)| dx = (π/2)∫₀¹|sin(2πx)| dx = 1.
        assert!(rel_err(series(1.0, &[1.0]).opial_functional(), 1.0) < 1e-9);
    }

    #[test]
    fn opial_functional_of_zero_is_zero() {
        assert_eq!(series(1.0, &[0.0]).opial_functional(), 0.0);
    }

    #[test]
    fn opial_functional_on_linear_grid() {
        let g = GridFunction::from_fn(1.0, 1000, |x| x).unwrap();
        assert!((g.opial_functional() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn lp1_anchors() {
        let u = series(1.0, &[1.0]);
        assert!(rel_err(u.lp1_functional(1.0).unwrap(), 0.5) < 1e-10);
        assert!(rel_err(u.lp1_functional(3.0).unwrap(), 0.375) < 1e-10);
        assert_eq!(series(1.0, &[0.0]).lp1_functional(3.0).unwrap(), 0.0);
        assert!(u.lp1_functional(0.5).is_err());
    }

    #[test]
    fn mean_anchors() {
        assert!(series(1.0, &[0.0, 1.0]).mean().abs() < 1e-12);
        assert!(rel_err(series(1.0, &[1.0]).mean(), 2.0 / PI) < 1e-10);
        let zero_grid = GridFunction::new(1.0, vec![0.0; 11]).unwrap();
        assert_eq!(zero_grid.mean(), 0.0);
    }

    #[test]
    fn sample_random_is_deterministic_and_scaled() {
        let a = SineSeries::sample_random(8, 2.0, 42, 1.0).unwrap();
        let b = SineSeries::sample_random(8, 2.0, 42, 1.0).unwrap();
        assert_eq!(a.coeffs(), b.coeffs());
        let c = SineSeries::sample_random(8, 2.0, 43, 1.0).unwrap();
        assert_ne!(a.coeffs(), c.coeffs());
        assert!(a.coeffs()[7].abs() <= 1.0 / 64.0);
        assert!(a.coeffs().iter().all(|x| x.abs() <= 1.0));
        assert!(SineSeries::sample_random(0, 1.0, 1, 1.0).is_err());
    }

    #[test]
    fn parseval_exactness_against_quadrature() {
        // lp1 at p = 1 is ∫u² by quadrature; Parseval is exact.
        for seed in 0..50 {
            let u = SineSeries::sample_random(8, 1.0, seed, 1.7).unwrap();
            let quad = u.lp1_functional(1.0).unwrap();
            let exact = u.norm_l2_sq();
            assert!(rel_err(quad, exact) < 1e-9, "seed {seed}");
        }
    }

    #[test]
    fn opial_matches_total_variation_oracle() {
        // Independent route: ∫|u u′| = ½·TV(u²) = ½ Σ |u(z_{i+1})² − u(z_i)²|
        // over the partition by the critical points of u (zeros of u′ and
        // of u itself), since u·u′ has one sign between consecutive points.
        for seed in 0..30 {
            let u = SineSeries::sample_random(6, 0.8, seed, 1.0).unwrap();
            let mut cuts = vec![0.0, 1.0];
            sign_changes(|x| u.deriv_at(x), 0.0, 1.0, 512, &mut cuts);
            sign_changes(|x| u.value_at(x), 0.0, 1.0, 512, &mut cuts);
            cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
            cuts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12);
            let tv: f64 = cuts
                .windows(2)
                .map(|w| {
                    let a = u.value_at(w[0]).powi(2);
                    let b = u.value_at(w[1]).powi(2);
                    (b - a).abs()
                })
                .sum();
            assert!(
                rel_err(u.opial_functional(), 0.5 * tv) < 1e-8,
                "seed {seed}"
            );
        }
    }

    #[test]
    fn grid_functionals_converge_at_second_order() {
        // Fixed multi-mode series; grid functionals must approach the
        // spectral/quadrature values at least at O(N⁻²): the error at
        // N = 800 must sit at least a factor 8^1.7 below the error at 100.
        let u = series(1.3, &[1.0, 0.3, 0.1]);
        let spectral = [
            u.norm_l2_sq(),
            u.dirichlet_energy(),
            u.opial_functional(),
            u.lp1_functional(2.5).unwrap(),
            u.mean(),
        ];
        let errs = |n: usize| -> Vec<f64> {
            let g = u.to_grid(n).unwrap();
            vec![
                (g.norm_l2_sq() - spectral[0]).abs(),
                (g.dirichlet_energy() - spectral[1]).abs(),
                (g.opial_functional() - spectral[2]).abs(),
                (g.lp1_functional(2.5).unwrap() - spectral[3]).abs(),
                (g.mean() - spectral[4]).abs(),
            ]
        };
        let coarse = errs(100);
        let fine = errs(800);
        for (i, (c, f)) in coarse.iter().zip(fine.iter()).enumerate() {
            let floor = 1e-13 * spectral[i].abs().max(1e-2);
            assert!(
                *f <= c / 8f64.powf(1.7) + floor,
                "functional {i}: err(100) = {c:e}, err(800) = {f:e}"
            );
        }
    }

    #[test]
    fn to_grid_matches_eval_and_keeps_endpoints() {
        let u = series(2.0, &[0.4, -0.2, 0.05]);
        let g = u.to_grid(64).unwrap();
        assert_eq!(g.values()[0], 0.0);
        assert_eq!(g.values()[64], 0.0);
        assert_eq!(g.intervals(), 64);
        let x = g.node(17);
        assert!((g.values()[17] - u.eval(x).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn grid_validation() {
        assert!(GridFunction::new(1.0, vec![0.0, 1.0]).is_err());
        assert!(GridFunction::new(-1.0, vec![0.0, 1.0, 0.0]).is_err());
        assert!(GridFunction::new(1.0, vec![0.0, f64::NAN, 0.0]).is_err());
        assert!(GridFunction::new(1.0, vec![0.0, 1.0, 0.0]).is_ok());
    }

    #[test]
    fn grid_csv_round_trip_shape() {
        let g = GridFunction::new(1.0, vec![0.0, 1.0, 0.0]).unwrap();
        let csv = g.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("x,u"));
        assert_eq!(lines.next(), Some("0,0"));
        assert_eq!(lines.next(), Some("0.5,1"));
        assert_eq!(lines.next(), Some("1,0"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn linear_grid_derivative_is_exact() {
        let g = GridFunction::from_fn(1.0, 10, |x| 3.0 * x).unwrap();
        for d in g.derivative_values() {
            assert!((d - 3.0).abs() < 1e-12);
        }
        assert!((g.dirichlet_energy() - 9.0).abs() < 1e-12);
    }
}
