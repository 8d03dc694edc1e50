//! Integrands `Φ(x, t)` evaluated on Brownian values, plus a small registry
//! of named integrands used by configs and the command line.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

type Field = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A deterministic function `Φ(x, t)` with optional derivative in `x`.
#[derive(Clone)]
pub struct Integrand {
    eval: Field,
    d_dx: Option<Field>,
    /// Claimed bound `|Φ| <= M`.
    pub sup_bound: Option<f64>,
    /// Marks integrands satisfying the fourth-moment hypothesis of the
    /// Stratonovich convergence results.
    pub fourth_moment_bounded: bool,
}

impl fmt::Debug for Integrand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Integrand")
            .field("has_derivative", &self.d_dx.is_some())
            .field("sup_bound", &self.sup_bound)
            .field("fourth_moment_bounded", &self.fourth_moment_bounded)
            .finish()
    }
}

impl Integrand {
    pub fn new(eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            d_dx: None,
            sup_bound: None,
            fourth_moment_bounded: false,
        }
    }

    pub fn with_derivative(mut self, d_dx: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.d_dx = Some(Arc::new(d_dx));
        self
    }

    pub fn with_sup_bound(mut self, bound: f64) -> Self {
        self.sup_bound = Some(bound);
        self.fourth_moment_bounded = true;
        self
    }

    pub fn with_fourth_moment_bounded(mut self, flag: bool) -> Self {
        self.fourth_moment_bounded = flag;
        self
    }

    /// `Φ(x, t) = x`.
    pub fn identity() -> Self {
        Self::new(|x, _| x)
            .with_derivative(|_, _| 1.0)
            .with_fourth_moment_bounded(true)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_, _| c)
            .with_derivative(|_, _| 0.0)
            .with_sup_bound(c.abs())
    }

    /// `Φ(x, t) = sin x`, bounded by 1.
    pub fn sin() -> Self {
        Self::new(|x, _| x.sin())
            .with_derivative(|x, _| x.cos())
            .with_sup_bound(1.0)
    }

    /// `Φ(x, t) = c_0 + c_1 x + c_2 x^2 + ...`.
    pub fn polynomial(coeffs: Vec<f64>) -> Self {
        let coeffs: Arc<[f64]> = coeffs.into();
        let dc: Arc<[f64]> = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| i as f64 * c)
            .collect::<Vec<_>>()
            .into();
        let bounded = coeffs.iter().skip(1).all(|&c| c == 0.0);
        let c0 = coeffs.first().copied().unwrap_or(0.0);
        let mut phi = Self::new(move |x, _| horner(&coeffs, x))
            .with_derivative(move |x, _| horner(&dc, x))
            .with_fourth_moment_bounded(true);
        if bounded {
            phi = phi.with_sup_bound(c0.abs());
        }
        phi
    }

    /// `a Φ₁ + b Φ₂`. The derivative is kept only if both operands have one.
    pub fn linear_combination(a: f64, lhs: &Integrand, b: f64, rhs: &Integrand) -> Self {
        let (f, g) = (lhs.eval.clone(), rhs.eval.clone());
        let mut out = Self::new(move |x, t| a * f(x, t) + b * g(x, t));
        if let (Some(df), Some(dg)) = (lhs.d_dx.clone(), rhs.d_dx.clone()) {
            out = out.with_derivative(move |x, t| a * df(x, t) + b * dg(x, t));
        }
        if let (Some(m1), Some(m2)) = (lhs.sup_bound, rhs.sup_bound) {
            out = out.with_sup_bound(a.abs() * m1 + b.abs() * m2);
        }
        out.fourth_moment_bounded = lhs.fourth_moment_bounded && rhs.fourth_moment_bounded;
        out
    }

    #[inline]
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        (self.eval)(x, t)
    }

    pub fn has_derivative(&self) -> bool {
        self.d_dx.is_some()
    }

    /// `∂Φ/∂x (x, t)`, if known.
    #[inline]
    pub fn d_dx(&self, x: f64, t: f64) -> Option<f64> {
        self.d_dx.as_ref().map(|d| d(x, t))
    }

    pub(crate) fn derivative_fn(&self) -> Option<Field> {
        self.d_dx.clone()
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Named integrand, as written in configs and on the command line:
/// `identity`, `constant:<c>`, `sin`, `poly:<c0>,<c1>,...`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum IntegrandSpec {
    Identity,
    Constant(f64),
    Sin,
    Poly(Vec<f64>),
}

impl IntegrandSpec {
    pub fn build(&self) -> Integrand {
        match self {
            IntegrandSpec::Identity => Integrand::identity(),
            IntegrandSpec::Constant(c) => Integrand::constant(*c),
            IntegrandSpec::Sin => Integrand::sin(),
            IntegrandSpec::Poly(cs) => Integrand::polynomial(cs.clone()),
        }
    }

    /// `F(x)` with `F' = Φ(·, t)` and `F(0) = 0`, for integrands that do not
    /// depend on `t`.
    pub fn antiderivative(&self, x: f64) -> f64 {
        match self {
            IntegrandSpec::Identity => 0.5 * x * x,
            IntegrandSpec::Constant(c) => c * x,
            IntegrandSpec::Sin => 1.0 - x.cos(),
            IntegrandSpec::Poly(cs) => {
                let lifted: Vec<f64> = std::iter::once(0.0)
                    .chain(cs.iter().enumerate().map(|(i, c)| c / (i + 1) as f64))
                    .collect();
                horner(&lifted, x)
            }
        }
    }
}

impl fmt::Display for IntegrandSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IntegrandSpec::Identity => f.write_str("identity"),
            IntegrandSpec::Constant(c) => write!(f, "constant:{c}"),
            IntegrandSpec::Sin => f.write_str("sin"),
            IntegrandSpec::Poly(cs) => {
                f.write_str("poly:")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for IntegrandSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let number = |a: &str| {
            a.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::InvalidArgument(format!("bad number {a:?} in integrand {s:?}")))
        };
        match (name.to_ascii_lowercase().as_str(), arg) {
            ("identity", None) => Ok(IntegrandSpec::Identity),
            ("sin", None) => Ok(IntegrandSpec::Sin),
            ("constant", Some(a)) => Ok(IntegrandSpec::Constant(number(a)?)),
            ("poly", Some(a)) => {
                let cs = a.split(',').map(number).collect::<Result<Vec<_>>>()?;
                Ok(IntegrandSpec::Poly(cs))
            }
            _ => invalid(format!(
                "unknown integrand {s:?} (expected identity, constant:<c>, sin, poly:<c0,c1,..>)"
            )),
        }
    }
}

impl TryFrom<String> for IntegrandSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<IntegrandSpec> for String {
    fn from(spec: IntegrandSpec) -> String {
        spec.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_parses_names() {
        assert_eq!(
            "identity".parse::<IntegrandSpec>().unwrap(),
            IntegrandSpec::Identity
        );
        assert_eq!("sin".parse::<IntegrandSpec>().unwrap(), IntegrandSpec::Sin);
        assert_eq!(
            "constant:2.5".parse::<IntegrandSpec>().unwrap(),
            IntegrandSpec::Constant(2.5)
        );
        assert_eq!(
            "poly:1,0,-3".parse::<IntegrandSpec>().unwrap(),
            IntegrandSpec::Poly(vec![1.0, 0.0, -3.0])
        );
        assert!("cos".parse::<IntegrandSpec>().is_err());
        assert!("constant".parse::<IntegrandSpec>().is_err());
        assert!("constant:abc".parse::<IntegrandSpec>().is_err());
        assert!("poly:1,,2".parse::<IntegrandSpec>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for spec in [
            IntegrandSpec::Identity,
            IntegrandSpec::Sin,
            IntegrandSpec::Constant(-0.125),
            IntegrandSpec::Poly(vec![0.1, 2.0, 1e-7]),
        ] {
            assert_eq!(spec.to_string().parse::<IntegrandSpec>().unwrap(), spec);
        }
    }

    #[test]
    fn polynomial_and_derivative() {
        let p = Integrand::polynomial(vec![1.0, 2.0, 3.0]);
        assert_eq!(p.eval(2.0, 0.0), 17.0);
        assert_eq!(p.d_dx(2.0, 0.0), Some(14.0));
        assert!(p.sup_bound.is_none());
        let c = Integrand::polynomial(vec![-4.0]);
        assert_eq!(c.sup_bound, Some(4.0));
    }

    #[test]
    fn sin_is_bounded_with_cos_derivative() {
        let s = Integrand::sin();
        assert_eq!(s.sup_bound, Some(1.0));
        assert_eq!(s.d_dx(0.0, 0.3), Some(1.0));
    }

    #[test]
    fn antiderivatives_vanish_at_zero_and_differentiate_back() {
        let h = 1e-6;
        for spec in [
            IntegrandSpec::Identity,
            IntegrandSpec::Sin,
            IntegrandSpec::Constant(3.0),
            IntegrandSpec::Poly(vec![1.0, -2.0, 0.5]),
        ] {
            assert_eq!(spec.antiderivative(0.0), 0.0);
            let phi = spec.build();
            for x in [-1.3, 0.2, 2.0] {
                let fd = (spec.antiderivative(x + h) - spec.antiderivative(x - h)) / (2.0 * h);
                assert!((fd - phi.eval(x, 0.0)).abs() < 1e-6, "{spec} at {x}");
            }
        }
    }

    #[test]
    fn linear_combination_evaluates() {
        let f = Integrand::linear_combination(2.0, &Integrand::identity(), -1.0, &Integrand::sin());
        let x = 0.7;
        assert_eq!(f.eval(x, 0.0), 2.0 * x - x.sin());
        assert_eq!(f.d_dx(x, 0.0), Some(2.0 - x.cos()));
    }
}
