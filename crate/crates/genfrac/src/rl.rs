//! Closed-form and brute-force Riemann-Liouville differintegrals: the
//! ground-truth layer the generalized operators are validated against.

use crate::error::{Error, Result};
use crate::grid::SampledFunction;
use crate::quadrature::{finite_difference, product_convolution};
use crate::special::gamma;

/// Closed-form test functions with known transforms and differintegrals.
#[derive(Debug, Clone, PartialEq)]
pub enum ClosedFormFunction {
    /// (t - a)^mu with mu > -1.
    Power { mu: f64 },
    /// e^{k t}.
    Exponential { k: f64 },
    /// c_0 + c_1 (t - a) + c_2 (t - a)^2 + ...
    Polynomial { coeffs: Vec<f64> },
    /// The constant c.
    Constant { c: f64 },
}

impl ClosedFormFunction {
    pub fn power(mu: f64) -> Result<Self> {
        if !(mu > -1.0) {
            return Err(Error::Domain(format!(
                "power exponent must exceed -1 for integrability, got {mu}"
            )));
        }
        Ok(Self::Power { mu })
    }

    /// Value at t, measured from the reference point a.
    pub fn eval(&self, a: f64, t: f64) -> f64 {
        match self {
            Self::Power { mu } => (t - a).powf(*mu),
            Self::Exponential { k } => (k * t).exp(),
            Self::Polynomial { coeffs } => {
                let x = t - a;
                coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
            }
            Self::Constant { c } => *c,
        }
    }

    pub fn sample(&self, a: f64, b: f64, n: usize) -> Result<SampledFunction> {
        SampledFunction::from_fn(a, b, n, |t| self.eval(a, t))
    }
}

/// Closed-form fractional integral of the power function:
/// I^alpha (t - a)^mu = Gamma(mu + 1)/Gamma(mu + alpha + 1) (t - a)^(mu + alpha).
pub fn rl_integral_power(alpha: f64, mu: f64, a: f64, t: f64) -> f64 {
    gamma(mu + 1.0) / gamma(mu + alpha + 1.0) * (t - a).powf(mu + alpha)
}

/// Fractional integral of grid data by product integration: the integrand's
/// smooth factor is the linear interpolant of f, and the singular weight
/// (t - tau)^(alpha - 1) is integrated in closed form on every strip.
/// The output starts at g(t_0) = 0 (empty integral).
pub fn rl_integral_quad(f: &SampledFunction, alpha: f64) -> Result<SampledFunction> {
    if !(alpha > 0.0) {
        return Err(Error::Domain(format!(
            "integral order must be positive, got {alpha}"
        )));
    }
    let n = f.intervals();
    // constant kernel weight 1/Gamma(alpha) folded into the lag table, so
    // this path shares its arithmetic with the general-kernel one
    let w = vec![1.0 / gamma(alpha); n + 1];
    let g = product_convolution(f.values(), f.h(), alpha, &w);
    SampledFunction::new(f.a(), f.b(), g)
}

/// Fractional derivative of grid data: I^(m - alpha) f followed by an m-th
/// order-2 finite difference, with m = floor(alpha) + 1.
///
/// The data must be smooth enough for m-th differences to be meaningful;
/// that contract is documented, not checked.
pub fn rl_derivative_quad(f: &SampledFunction, alpha: f64) -> Result<SampledFunction> {
    if !(alpha >= 0.0) {
        return Err(Error::Domain(format!(
            "derivative order must be non-negative, got {alpha}"
        )));
    }
    let m = alpha.floor() as usize + 1;
    if m > 3 {
        return Err(Error::Domain(format!(
            "derivative path supports m = floor(alpha)+1 <= 3, got m = {m}"
        )));
    }
    let g = rl_integral_quad(f, m as f64 - alpha)?;
    let d = finite_difference(g.values(), g.h(), m)?;
    SampledFunction::new(f.a(), f.b(), d)
}
