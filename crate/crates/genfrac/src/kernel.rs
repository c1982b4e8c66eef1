//! Analytic kernels as coefficient sequences.
//!
//! A kernel is the power series A(x) = sum a_n x^n placed inside the
//! convolution integral; the coefficients may depend on the order pair
//! (alpha, beta). The Gamma-weighted transform
//! A_Gamma(x) = sum a_n Gamma(beta n + alpha) x^n drives everything else:
//! it is the operator's Laplace-symbol multiplier, the weight sequence of
//! the series-of-integrals representation, and the object inverted to build
//! derivative (left-inverse) kernels.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{factorial, gamma, pochhammer, recip_gamma};

/// Real order parameters: alpha > 0, beta >= 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrderPair {
    alpha: f64,
    beta: f64,
}

impl OrderPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be > 0, got {alpha}")));
        }
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

/// Cut-off policy for every infinite series in the crate: stop at the first
/// term whose absolute value falls below `tail_tol`, fail after `max_terms`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub max_terms: usize,
    pub tail_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        Self {
            max_terms: 64,
            tail_tol: 1e-12,
        }
    }
}

impl TruncationPolicy {
    pub fn new(max_terms: usize, tail_tol: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::Domain("max_terms must be positive".into()));
        }
        if !(tail_tol > 0.0) {
            return Err(Error::Domain(format!(
                "tail_tol must be positive, got {tail_tol}"
            )));
        }
        Ok(Self {
            max_terms,
            tail_tol,
        })
    }
}

/// Catalog entries of [`KernelSpec::make`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CatalogId {
    Rl,
    Prabhakar,
    Ab,
    Gpf,
    Ml,
    Explicit,
}

/// Coefficient rule backing a kernel.
#[derive(Debug, Clone, PartialEq)]
enum KernelForm {
    /// a_0 = 1/Gamma(alpha), a_n = 0 for n >= 1.
    Rl,
    /// a_n = (rho)_n omega^n / (n! Gamma(beta n + alpha)); the kernel of the
    /// three-parameter Mittag-Leffler function E^rho_{beta,alpha}(omega x).
    Prabhakar { rho: f64, omega: f64 },
    /// a_n = b/(1 - alpha) (-alpha/(1 - alpha))^n / Gamma(alpha n + 1),
    /// i.e. A(x) = b/(1-alpha) E_alpha(-alpha x / (1-alpha)); needs the
    /// calling order's alpha in (0, 1).
    Ab { b: f64 },
    /// a_n = ((rho-1)/rho)^n / (rho^alpha Gamma(alpha) n!), so that
    /// A(x) = rho^{-alpha}/Gamma(alpha) exp((rho-1)/rho x).
    Gpf { rho: f64 },
    /// Bare generalized Mittag-Leffler E^rho_{beta,alpha}(x) with parameters
    /// fixed at construction, independent of the calling order.
    Ml { beta: f64, alpha: f64, rho: f64 },
    /// Finite coefficient list; entries beyond the list are zero.
    Explicit { coeffs: Vec<f64> },
}

/// An analytic kernel: coefficient rule, radius of convergence, label.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSpec {
    form: KernelForm,
    radius: f64,
    label: String,
}

impl fmt::Display for KernelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl KernelSpec {
    /// Riemann-Liouville kernel: the constant 1/Gamma(alpha).
    pub fn rl() -> Self {
        Self {
            form: KernelForm::Rl,
            radius: f64::INFINITY,
            label: "rl".into(),
        }
    }

    /// Prabhakar kernel E^rho_{beta,alpha}(omega x), where (alpha, beta)
    /// come from the calling order. `rho` must not be a non-positive
    /// integer (the normalization has a Gamma(rho) pole there).
    pub fn prabhakar(rho: f64, omega: f64) -> Result<Self> {
        if rho <= 0.0 && rho == rho.floor() {
            return Err(Error::Pole(format!(
                "prabhakar rho = {rho} is a non-positive integer"
            )));
        }
        if !rho.is_finite() || !omega.is_finite() {
            return Err(Error::Domain("prabhakar parameters must be finite".into()));
        }
        Ok(Self {
            form: KernelForm::Prabhakar { rho, omega },
            radius: f64::INFINITY,
            label: format!("prabhakar:rho={rho},omega={omega}"),
        })
    }

    /// Mittag-Leffler kernel of the AB family with normalization constant
    /// `b` (defaults to 1 in the text grammar). The order's alpha must lie
    /// in (0, 1) when coefficients are evaluated.
    pub fn ab(b: f64) -> Result<Self> {
        if !b.is_finite() {
            return Err(Error::Domain("ab normalization must be finite".into()));
        }
        Ok(Self {
            form: KernelForm::Ab { b },
            radius: f64::INFINITY,
            label: format!("ab:b={b}"),
        })
    }

    /// Exponential kernel of the proportional model, rho in (0, 1].
    pub fn gpf(rho: f64) -> Result<Self> {
        if !(rho > 0.0 && rho <= 1.0) {
            return Err(Error::Domain(format!("gpf rho must be in (0, 1], got {rho}")));
        }
        Ok(Self {
            form: KernelForm::Gpf { rho },
            radius: f64::INFINITY,
            label: format!("gpf:rho={rho}"),
        })
    }

    /// Bare generalized Mittag-Leffler kernel with fixed parameters.
    pub fn mittag_leffler(beta: f64, alpha: f64, rho: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(beta >= 0.0) {
            return Err(Error::Domain(format!(
                "ml parameters need alpha > 0 and beta >= 0, got alpha={alpha}, beta={beta}"
            )));
        }
        if !rho.is_finite() {
            return Err(Error::Domain("ml rho must be finite".into()));
        }
        Ok(Self {
            form: KernelForm::Ml { beta, alpha, rho },
            radius: f64::INFINITY,
            label: format!("ml:beta={beta},alpha={alpha},rho={rho}"),
        })
    }

    /// Explicit finite coefficient list. Entries beyond the list are zero,
    /// so the kernel is a polynomial; `radius` records the disc on which the
    /// list is trusted (infinite when `None`).
    pub fn explicit(coeffs: Vec<f64>, radius: Option<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("explicit kernel needs coefficients".into()));
        }
        if let Some(c) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite coefficient {c}")));
        }
        let radius = radius.unwrap_or(f64::INFINITY);
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("radius must be positive, got {radius}")));
        }
        let label = format!(
            "explicit:coeffs=[{}]",
            coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        Ok(Self {
            form: KernelForm::Explicit { coeffs },
            radius,
            label,
        })
    }

    /// Catalog constructor driven by a parameter map; the typed
    /// constructors above are the preferred API.
    pub fn make(id: CatalogId, params: &[(String, f64)]) -> Result<Self> {
        let get = |key: &str| -> Result<f64> {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Domain(format!("missing parameter `{key}`")))
        };
        match id {
            CatalogId::Rl => Ok(Self::rl()),
            CatalogId::Prabhakar => Self::prabhakar(get("rho")?, get("omega")?),
            CatalogId::Ab => Self::ab(get("b").unwrap_or(1.0)),
            CatalogId::Gpf => Self::gpf(get("rho")?),
            CatalogId::Ml => Self::mittag_leffler(get("beta")?, get("alpha")?, get("rho")?),
            CatalogId::Explicit => Err(Error::Domain(
                "explicit kernels take a coefficient list; use KernelSpec::explicit".into(),
            )),
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// True when evaluation should sum the whole stored list rather than
    /// truncate adaptively.
    fn is_explicit(&self) -> bool {
        matches!(self.form, KernelForm::Explicit { .. })
    }

    fn explicit_len(&self) -> Option<usize> {
        match &self.form {
            KernelForm::Explicit { coeffs } => Some(coeffs.len()),
            _ => None,
        }
    }

    /// Coefficient a_n at the given order.
    pub fn coeff(&self, n: usize, order: OrderPair) -> Result<f64> {
        let OrderPair { alpha, beta } = order;
        match &self.form {
            KernelForm::Rl => Ok(if n == 0 { recip_gamma(alpha) } else { 0.0 }),
            KernelForm::Prabhakar { rho, omega } => {
                // (rho)_n omega^n / n! as one product to dodge overflow
                let mut p = 1.0;
                for i in 0..n {
                    p *= (rho + i as f64) * omega / (i as f64 + 1.0);
                }
                Ok(p * recip_gamma(beta * n as f64 + alpha))
            }
            KernelForm::Ab { b } => {
                if !(alpha > 0.0 && alpha < 1.0) {
                    return Err(Error::Domain(format!(
                        "ab kernel needs alpha in (0, 1), got {alpha}"
                    )));
                }
                let q = -alpha / (1.0 - alpha);
                let mut p = b / (1.0 - alpha);
                for _ in 0..n {
                    p *= q;
                }
                Ok(p * recip_gamma(alpha * n as f64 + 1.0))
            }
            KernelForm::Gpf { rho } => {
                let c = (rho - 1.0) / rho;
                // c^n / n! as one product; c = 0 at rho = 1 collapses to RL
                let mut p = 1.0;
                for i in 0..n {
                    p *= c / (i as f64 + 1.0);
                }
                Ok(p * recip_gamma(alpha) / rho.powf(alpha))
            }
            KernelForm::Ml {
                beta: bk,
                alpha: ak,
                rho,
            } => {
                let mut p = 1.0;
                for i in 0..n {
                    p *= (rho + i as f64) / (i as f64 + 1.0);
                }
                Ok(p * recip_gamma(bk * n as f64 + ak))
            }
            KernelForm::Explicit { coeffs } => Ok(coeffs.get(n).copied().unwrap_or(0.0)),
        }
    }

    /// Coefficient table a_0..a_{n-1}, the per-call realization of the
    /// per-(kernel, order) memoization: callers hold it for the duration of
    /// an operator evaluation.
    pub fn coeffs_up_to(&self, order: OrderPair, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|k| self.coeff(k, order)).collect()
    }

    /// A(x) for real x by truncated summation.
    pub fn eval_a(&self, order: OrderPair, x: f64, trunc: TruncationPolicy) -> Result<f64> {
        if x.abs() >= self.radius {
            return Err(Error::Divergence(format!(
                "|x| = {} is outside the radius {} of kernel {}",
                x.abs(),
                self.radius,
                self.label
            )));
        }
        if let Some(len) = self.explicit_len() {
            let mut sum = 0.0;
            let mut xp = 1.0;
            for n in 0..len {
                sum += self.coeff(n, order)? * xp;
                xp *= x;
            }
            return Ok(sum);
        }
        let mut sum = 0.0;
        let mut xp = 1.0;
        let mut tail = f64::INFINITY;
        for n in 0..trunc.max_terms {
            let term = self.coeff(n, order)? * xp;
            sum += term;
            tail = term.abs();
            if tail < trunc.tail_tol {
                return Ok(sum);
            }
            xp *= x;
        }
        Err(Error::Truncation {
            terms: trunc.max_terms,
            tail,
        })
    }

    /// A(x) for complex x; same policy as [`Self::eval_a`].
    pub fn eval_a_complex(
        &self,
        order: OrderPair,
        x: Complex64,
        trunc: TruncationPolicy,
    ) -> Result<Complex64> {
        if x.norm() >= self.radius {
            return Err(Error::Divergence(format!(
                "|x| = {} is outside the radius {} of kernel {}",
                x.norm(),
                self.radius,
                self.label
            )));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut xp = Complex64::new(1.0, 0.0);
        let mut tail = f64::INFINITY;
        let limit = self.explicit_len().unwrap_or(trunc.max_terms);
        for n in 0..limit {
            let term = self.coeff(n, order)? * xp;
            sum += term;
            tail = term.norm();
            if !self.is_explicit() && tail < trunc.tail_tol {
                return Ok(sum);
            }
            xp *= x;
        }
        if self.is_explicit() {
            Ok(sum)
        } else {
            Err(Error::Truncation {
                terms: trunc.max_terms,
                tail,
            })
        }
    }

    /// A_Gamma(x) = sum a_n Gamma(beta n + alpha) x^n for real x.
    ///
    /// The Prabhakar kernel gets its exact sum (1 - omega x)^(-rho), the
    /// binomial series, which extends the raw partial sums up to the branch
    /// point; other kernels are summed with divergence detection (eight
    /// consecutive strictly growing terms).
    pub fn eval_a_gamma(&self, order: OrderPair, x: f64, trunc: TruncationPolicy) -> Result<f64> {
        if x == 0.0 {
            return Ok(self.coeff(0, order)? * gamma(order.alpha));
        }
        if let KernelForm::Prabhakar { rho, omega } = self.form {
            let w = 1.0 - omega * x;
            if w <= 0.0 {
                return Err(Error::Divergence(format!(
                    "A_Gamma argument {x} reaches the branch point of kernel {}",
                    self.label
                )));
            }
            return Ok(w.powf(-rho));
        }
        let mut sum = 0.0;
        let mut xp = 1.0;
        let mut prev = f64::INFINITY;
        let mut growing = 0usize;
        let mut tail = f64::INFINITY;
        let limit = self.explicit_len().unwrap_or(trunc.max_terms);
        for n in 0..limit {
            let term = self.coeff(n, order)? * gamma(order.beta * n as f64 + order.alpha) * xp;
            sum += term;
            tail = term.abs();
            if self.is_explicit() {
                xp *= x;
                continue;
            }
            if tail < trunc.tail_tol {
                return Ok(sum);
            }
            if tail > prev {
                growing += 1;
                if growing >= 8 {
                    return Err(Error::Divergence(format!(
                        "A_Gamma series diverges at x = {x} for kernel {} \
                         (8 consecutive growing terms)",
                        self.label
                    )));
                }
            } else {
                growing = 0;
            }
            prev = tail;
            xp *= x;
        }
        if self.is_explicit() {
            Ok(sum)
        } else {
            Err(Error::Truncation {
                terms: trunc.max_terms,
                tail,
            })
        }
    }

    /// A_Gamma at a complex point; used by the transform symbols.
    pub fn eval_a_gamma_complex(
        &self,
        order: OrderPair,
        x: Complex64,
        trunc: TruncationPolicy,
    ) -> Result<Complex64> {
        if x.norm() == 0.0 {
            return Ok(Complex64::from(self.coeff(0, order)? * gamma(order.alpha)));
        }
        if let KernelForm::Prabhakar { rho, omega } = self.form {
            let w = Complex64::new(1.0, 0.0) - omega * x;
            if w.im == 0.0 && w.re <= 0.0 {
                return Err(Error::Divergence(format!(
                    "A_Gamma argument lies on the branch cut of kernel {}",
                    self.label
                )));
            }
            return Ok(w.powc(Complex64::from(-rho)));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut xp = Complex64::new(1.0, 0.0);
        let mut prev = f64::INFINITY;
        let mut growing = 0usize;
        let mut tail = f64::INFINITY;
        let limit = self.explicit_len().unwrap_or(trunc.max_terms);
        for n in 0..limit {
            let term = self.coeff(n, order)? * gamma(order.beta * n as f64 + order.alpha) * xp;
            sum += term;
            tail = term.norm();
            if self.is_explicit() {
                xp *= x;
                continue;
            }
            if tail < trunc.tail_tol {
                return Ok(sum);
            }
            if tail > prev {
                growing += 1;
                if growing >= 8 {
                    return Err(Error::Divergence(format!(
                        "A_Gamma series diverges at {x} for kernel {}",
                        self.label
                    )));
                }
            } else {
                growing = 0;
            }
            prev = tail;
            xp *= x;
        }
        if self.is_explicit() {
            Ok(sum)
        } else {
            Err(Error::Truncation {
                terms: trunc.max_terms,
                tail,
            })
        }
    }

    /// Upper bound for sup |A(x)| over |x| <= r by the coefficient majorant
    /// sum |a_n| r^n (the bound used in the operator-norm estimate).
    pub fn majorant(&self, order: OrderPair, r: f64, trunc: TruncationPolicy) -> Result<f64> {
        let mut sum = 0.0;
        let mut rp = 1.0;
        let limit = self.explicit_len().unwrap_or(trunc.max_terms);
        let mut tail = f64::INFINITY;
        for n in 0..limit {
            let term = self.coeff(n, order)?.abs() * rp;
            sum += term;
            tail = term;
            if !self.is_explicit() && term < trunc.tail_tol {
                return Ok(sum);
            }
            rp *= r;
        }
        if self.is_explicit() {
            Ok(sum)
        } else {
            Err(Error::Truncation {
                terms: trunc.max_terms,
                tail,
            })
        }
    }

    /// Gamma-weighted coefficients c_k = a_k Gamma(beta k + alpha),
    /// k < n_terms.
    pub fn a_gamma_coeffs(&self, order: OrderPair, n_terms: usize) -> Result<Vec<f64>> {
        (0..n_terms)
            .map(|k| {
                Ok(self.coeff(k, order)?
                    * gamma(order.beta * k as f64 + order.alpha))
            })
            .collect()
    }

    /// Coefficients d_k of the formal reciprocal of A_Gamma, so that
    /// sum_{i+j=k} d_i c_j = delta_{k,0}.
    pub fn a_gamma_reciprocal_coeffs(&self, order: OrderPair, n_terms: usize) -> Result<Vec<f64>> {
        let c = self.a_gamma_coeffs(order, n_terms)?;
        if c[0] == 0.0 {
            return Err(Error::NonInvertible(format!(
                "a_0 Gamma(alpha) = 0 for kernel {}",
                self.label
            )));
        }
        let mut d = vec![0.0; n_terms];
        d[0] = 1.0 / c[0];
        for k in 1..n_terms {
            let mut s = 0.0;
            for j in 1..=k {
                s += c[j] * d[k - j];
            }
            d[k] = -s / c[0];
        }
        Ok(d)
    }

    /// The reciprocal kernel of the left-inverse construction: the explicit
    /// kernel whose Gamma transform at order (m - alpha, beta) is the formal
    /// reciprocal of this kernel's A_Gamma at (alpha, beta). Requires
    /// m - alpha > 0.
    pub fn reciprocal_kernel(
        &self,
        order: OrderPair,
        m: usize,
        n_terms: usize,
    ) -> Result<KernelSpec> {
        let alpha_bar = m as f64 - order.alpha;
        if !(alpha_bar > 0.0) {
            return Err(Error::Domain(format!(
                "need m - alpha > 0, got m = {m}, alpha = {}",
                order.alpha
            )));
        }
        if n_terms == 0 {
            return Err(Error::Domain("n_terms must be positive".into()));
        }
        let d = self.a_gamma_reciprocal_coeffs(order, n_terms)?;
        let coeffs: Vec<f64> = d
            .iter()
            .enumerate()
            .map(|(k, dk)| dk * recip_gamma(order.beta * k as f64 + alpha_bar))
            .collect();
        let mut out = KernelSpec::explicit(coeffs, None)?;
        out.label = format!("recip({},m={m})", self.label);
        Ok(out)
    }

    /// Residuals of the one-parameter semigroup condition: for each
    /// k = 0..=k_max, the absolute gap between
    /// sum_{m+n=k} a_n(a1) a_m(a2) Gamma(beta n + a1) Gamma(beta m + a2)
    /// and a_k(a1 + a2) Gamma(beta k + a1 + a2).
    pub fn semigroup_residual(
        &self,
        alpha1: f64,
        alpha2: f64,
        beta: f64,
        k_max: usize,
    ) -> Result<Vec<f64>> {
        let o1 = OrderPair::new(alpha1, beta)?;
        let o2 = OrderPair::new(alpha2, beta)?;
        let o12 = OrderPair::new(alpha1 + alpha2, beta)?;
        let mut out = Vec::with_capacity(k_max + 1);
        for k in 0..=k_max {
            let mut lhs = 0.0;
            for n in 0..=k {
                let m = k - n;
                lhs += self.coeff(n, o1)?
                    * self.coeff(m, o2)?
                    * gamma(beta * n as f64 + alpha1)
                    * gamma(beta * m as f64 + alpha2);
            }
            let rhs =
                self.coeff(k, o12)? * gamma(beta * k as f64 + alpha1 + alpha2);
            out.push((lhs - rhs).abs());
        }
        Ok(out)
    }
}

// ---------------------------------------------------------------------------
// Kernel-spec text grammar: `name:key=value,key=value`, with list values in
// brackets, e.g. `prabhakar:rho=1.5,omega=-0.3` or
// `explicit:coeffs=[1.0,0.5,0.25],radius=2.0`.
// ---------------------------------------------------------------------------

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &str) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn err(&self, expected: &str) -> Error {
        let found = match self.peek() {
            Some(c) => format!("`{c}`"),
            None => "end of input".into(),
        };
        Error::Parse {
            pos: self.pos,
            expected: expected.into(),
            found,
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        if self.pos == start {
            return Err(self.err("an identifier"));
        }
        Ok(&self.text[start..self.pos])
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        if matches!(self.peek(), Some('+' | '-')) {
            self.bump();
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == '.') {
            self.bump();
        }
        if matches!(self.peek(), Some('e' | 'E')) {
            self.bump();
            if matches!(self.peek(), Some('+' | '-')) {
                self.bump();
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.bump();
            }
        }
        let s = &self.text[start..self.pos];
        s.parse::<f64>().map_err(|_| Error::Parse {
            pos: start,
            expected: "a number".into(),
            found: if s.is_empty() {
                match self.peek() {
                    Some(c) => format!("`{c}`"),
                    None => "end of input".into(),
                }
            } else {
                format!("`{s}`")
            },
        })
    }
}

/// Parsed value of one `key=...` entry.
enum ParamValue {
    Scalar(f64),
    List(Vec<f64>),
}

fn parse_params(cur: &mut Cursor) -> Result<Vec<(String, ParamValue)>> {
    let mut out = Vec::new();
    loop {
        let key = cur.ident()?.to_string();
        cur.expect('=', "`=` after parameter name")?;
        let value = if cur.eat('[') {
            let mut items = vec![cur.number()?];
            while cur.eat(',') {
                items.push(cur.number()?);
            }
            cur.expect(']', "`]` or `,` in list")?;
            ParamValue::List(items)
        } else {
            ParamValue::Scalar(cur.number()?)
        };
        out.push((key, value));
        if !cur.eat(',') {
            break;
        }
    }
    if cur.peek().is_some() {
        return Err(cur.err("`,` or end of kernel spec"));
    }
    Ok(out)
}

/// Parses the kernel-spec grammar shared with the CLI.
pub fn parse_kernel(text: &str) -> Result<KernelSpec> {
    let mut cur = Cursor { text, pos: 0 };
    let name = cur.ident()?.to_string();
    let params = if cur.eat(':') {
        parse_params(&mut cur)?
    } else if cur.peek().is_some() {
        return Err(cur.err("`:` or end of kernel spec"));
    } else {
        Vec::new()
    };
    let scalar = |key: &str| -> Result<f64> {
        params
            .iter()
            .find(|(k, _)| k == key)
            .and_then(|(_, v)| match v {
                ParamValue::Scalar(x) => Some(*x),
                ParamValue::List(_) => None,
            })
            .ok_or_else(|| Error::Domain(format!("kernel `{name}` needs scalar `{key}=`")))
    };
    match name.as_str() {
        "rl" => Ok(KernelSpec::rl()),
        "prabhakar" => KernelSpec::prabhakar(scalar("rho")?, scalar("omega")?),
        "ab" => KernelSpec::ab(scalar("b").unwrap_or(1.0)),
        "gpf" => KernelSpec::gpf(scalar("rho")?),
        "ml" => KernelSpec::mittag_leffler(scalar("beta")?, scalar("alpha")?, scalar("rho")?),
        "explicit" => {
            let coeffs = params
                .iter()
                .find(|(k, _)| k == "coeffs")
                .and_then(|(_, v)| match v {
                    ParamValue::List(items) => Some(items.clone()),
                    ParamValue::Scalar(_) => None,
                })
                .ok_or_else(|| {
                    Error::Domain("explicit kernel needs `coeffs=[...]`".into())
                })?;
            let radius = scalar("radius").ok();
            KernelSpec::explicit(coeffs, radius)
        }
        other => Err(Error::Parse {
            pos: 0,
            expected: "one of rl, prabhakar, ab, gpf, ml, explicit".into(),
            found: format!("`{other}`"),
        }),
    }
}
