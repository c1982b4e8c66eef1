//! Product integration against the weakly singular weight s^(alpha-1) and
//! order-2 finite differences.
//!
//! Every convolution quadrature in the crate funnels through
//! [`product_convolution`], so cross-module "identical algebra" claims hold
//! down to the floating-point operation order.

use crate::error::{Error, Result};

/// Moments of the weight s^(alpha-1) against the local linear basis on one
/// strip s in [s1, s0] with s0 > s1 >= 0:
///
///   M0 = integral of s^(alpha-1) ds,
///   M1 = integral of s^(alpha-1) (s0 - s) ds.
///
/// Both use the two-term antiderivative directly, which keeps the weights
/// positive and avoids subtracting nearly equal quadrature sums.
pub fn abel_moments(s0: f64, s1: f64, alpha: f64) -> (f64, f64) {
    let p0 = s0.powf(alpha);
    let p1 = s1.powf(alpha);
    let m0 = (p0 - p1) / alpha;
    let m1 = s0 * m0 - (s0 * p0 - s1 * p1) / (alpha + 1.0);
    (m0, m1)
}

/// Convolution quadrature on a uniform grid.
///
/// Computes, for every target node t_j,
///
///   g_j = integral from t_0 to t_j of (t_j - tau)^(alpha-1) S_j(tau) dtau,
///
/// where the smooth factor S_j(tau) = w(t_j - tau) f(tau) is replaced on each
/// strip by the linear interpolant of its endpoint values, and the weight
/// s^(alpha-1) is integrated exactly. `weight_at[k]` supplies w at lag k h
/// (pass all ones for a pure Riemann-Liouville weight, folding any constant
/// into the caller's scaling). g_0 = 0 by the empty integral.
///
/// Summation order is fixed (increasing lag) for determinism.
pub fn product_convolution(values: &[f64], h: f64, alpha: f64, weight_at: &[f64]) -> Vec<f64> {
    let n = values.len() - 1;
    debug_assert!(weight_at.len() >= n + 1);
    // per-lag weights: c0 multiplies the left sample, c1 the right one
    let mut c0 = vec![0.0; n + 1];
    let mut c1 = vec![0.0; n + 1];
    for k in 1..=n {
        let s0 = k as f64 * h;
        let s1 = (k - 1) as f64 * h;
        let (m0, m1) = abel_moments(s0, s1, alpha);
        c0[k] = m0 - m1 / h;
        c1[k] = m1 / h;
    }
    let mut out = vec![0.0; n + 1];
    for j in 1..=n {
        let mut acc = 0.0;
        for k in 1..=j {
            let left = weight_at[k] * values[j - k];
            let right = weight_at[k - 1] * values[j - k + 1];
            acc += left * c0[k] + right * c1[k];
        }
        out[j] = acc;
    }
    out
}

/// Single-target variant of [`product_convolution`] over arbitrary strictly
/// increasing nodes to the left of `t`. The smooth factor on strip
/// [nodes[i], nodes[i+1]] interpolates `weighted[i]`..`weighted[i+1]`, where
/// `weighted[i]` must already include any lag-dependent kernel factor
/// evaluated at t - nodes[i].
pub fn product_integral_at(t: f64, nodes: &[f64], weighted: &[f64], alpha: f64) -> f64 {
    debug_assert_eq!(nodes.len(), weighted.len());
    let mut acc = 0.0;
    for i in 0..nodes.len() - 1 {
        let s0 = t - nodes[i];
        let s1 = t - nodes[i + 1];
        if s0 <= 0.0 {
            break;
        }
        let (m0, m1) = abel_moments(s0, s1.max(0.0), alpha);
        let w = nodes[i + 1] - nodes[i];
        acc += weighted[i] * (m0 - m1 / w) + weighted[i + 1] * (m1 / w);
    }
    acc
}

/// m-th derivative of grid data by order-2 stencils, m in {1, 2, 3}.
/// Central differences in the interior, one-sided order-2 at the ends.
pub fn finite_difference(values: &[f64], h: f64, m: usize) -> Result<Vec<f64>> {
    let n = values.len() - 1;
    if n < 2 * m + 2 {
        return Err(Error::GridTooCoarse(format!(
            "order-{m} differences need at least {} intervals, got {n}",
            2 * m + 2
        )));
    }
    let v = values;
    let mut out = vec![0.0; n + 1];
    match m {
        1 => {
            out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
            for i in 1..n {
                out[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
            }
            out[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
        }
        2 => {
            let h2 = h * h;
            out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / h2;
            for i in 1..n {
                out[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / h2;
            }
            out[n] = (2.0 * v[n] - 5.0 * v[n - 1] + 4.0 * v[n - 2] - v[n - 3]) / h2;
        }
        3 => {
            let h3 = h * h * h;
            let fwd = |i: usize| {
                (-2.5 * v[i] + 9.0 * v[i + 1] - 12.0 * v[i + 2] + 7.0 * v[i + 3]
                    - 1.5 * v[i + 4])
                    / h3
            };
            let bwd = |i: usize| {
                (2.5 * v[i] - 9.0 * v[i - 1] + 12.0 * v[i - 2] - 7.0 * v[i - 3]
                    + 1.5 * v[i - 4])
                    / h3
            };
            out[0] = fwd(0);
            out[1] = fwd(1);
            for i in 2..n - 1 {
                out[i] = (v[i + 2] - 2.0 * v[i + 1] + 2.0 * v[i - 1] - v[i - 2]) / (2.0 * h3);
            }
            out[n - 1] = bwd(n - 1);
            out[n] = bwd(n);
        }
        _ => {
            return Err(Error::Domain(format!(
                "finite differences implemented for m in 1..=3, got {m}"
            )))
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moments_match_closed_forms() {
        // alpha = 1: M0 = strip length, M1 = integral of (s0 - s)
        let (m0, m1) = abel_moments(0.7, 0.4, 1.0);
        assert!((m0 - 0.3).abs() < 1e-15);
        // integral of (0.7 - s) over [0.4, 0.7] = 0.045
        assert!((m1 - 0.045).abs() < 1e-15);
        // alpha = 0.5 over [0, h]: M0 = 2 sqrt(h), M1 = s0 M0 - (2/3) h^{3/2}
        let h: f64 = 0.25;
        let (m0, m1) = abel_moments(h, 0.0, 0.5);
        assert!((m0 - 2.0 * h.sqrt()).abs() < 1e-15);
        assert!((m1 - (h * 2.0 * h.sqrt() - 2.0 / 3.0 * h.powf(1.5))).abs() < 1e-15);
    }

    #[test]
    fn convolution_exact_for_linear_data_at_integer_order() {
        // alpha = 1, f(t) = t: integral of tau dtau = t^2 / 2, exact for the
        // linear interpolant.
        let n = 64;
        let h = 1.0 / n as f64;
        let values: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let ones = vec![1.0; n + 1];
        let g = product_convolution(&values, h, 1.0, &ones);
        for (i, gi) in g.iter().enumerate() {
            let t = i as f64 * h;
            assert!((gi - t * t / 2.0).abs() < 1e-14, "node {i}");
        }
    }

    #[test]
    fn single_target_matches_uniform_path() {
        let n = 32;
        let h = 1.0 / n as f64;
        let values: Vec<f64> = (0..=n).map(|i| (i as f64 * h).cos()).collect();
        let ones = vec![1.0; n + 1];
        let alpha = 0.6;
        let g = product_convolution(&values, h, alpha, &ones);
        let nodes: Vec<f64> = (0..=n).map(|i| i as f64 * h).collect();
        let direct = product_integral_at(1.0, &nodes, &values, alpha);
        assert!((g[n] - direct).abs() < 1e-12);
    }

    #[test]
    fn differences_exact_on_polynomials() {
        let n = 16;
        let h = 0.125;
        let t = |i: usize| i as f64 * h;
        // m = 1 on t^2 -> 2t (stencils exact for quadratics)
        let v: Vec<f64> = (0..=n).map(|i| t(i) * t(i)).collect();
        let d = finite_difference(&v, h, 1).unwrap();
        for i in 0..=n {
            assert!((d[i] - 2.0 * t(i)).abs() < 1e-12);
        }
        // m = 2 on t^3 -> 6t (stencils exact for cubics)
        let v: Vec<f64> = (0..=n).map(|i| t(i).powi(3)).collect();
        let d = finite_difference(&v, h, 2).unwrap();
        for i in 0..=n {
            assert!((d[i] - 6.0 * t(i)).abs() < 1e-11);
        }
        // m = 3 on t^3 -> 6
        let d = finite_difference(&v, h, 3).unwrap();
        for i in 0..=n {
            assert!((d[i] - 6.0).abs() < 1e-10, "i={i} got {}", d[i]);
        }
    }

    #[test]
    fn differences_reject_coarse_grids() {
        let v = vec![0.0; 5];
        assert!(matches!(
            finite_difference(&v, 0.1, 2),
            Err(Error::GridTooCoarse(_))
        ));
    }
}
