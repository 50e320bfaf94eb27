//! Exact arithmetic: rationals, sparse polynomials and rational functions.

mod field;
mod gcd;
mod monomial;
mod poly;
pub mod rational;
mod ratfunc;

pub use field::Field;
pub use gcd::{gcd_poly, lcm_poly};
pub use monomial::{Monomial, Var, VariableTable, NVARS};
pub use poly::{MultiPoly, Poly};
pub use ratfunc::RatFunc;
pub use rational::{format_rational, parse_rational, Rational};

/// Polynomial with rational-function coefficients in the parameters.
pub type RfPoly = Poly<RatFunc>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole: denominator vanishes at {var} = {value}")]
    Pole { var: &'static str, value: String },
}

impl RfPoly {
    /// Lift a rational polynomial, moving parameter variables into the coefficients.
    pub fn from_multi(p: &MultiPoly) -> Self {
        let mut out = RfPoly::zero();
        for (m, c) in p.terms() {
            let mut main = *m;
            let mut param = Monomial::ONE;
            for v in Var::ALL {
                if v.is_parameter() {
                    param = param.with_exp(v, m.exp(v));
                    main = main.with_exp(v, 0);
                }
            }
            let coeff = RatFunc::from_poly(MultiPoly::term(param, c.clone()));
            out.add_term(main, &coeff);
        }
        out
    }

    /// Flatten to one rational polynomial, failing if a coefficient is not polynomial.
    pub fn to_multi(&self) -> Option<MultiPoly> {
        let mut out = MultiPoly::zero();
        for (m, c) in self.terms() {
            if !c.is_polynomial() {
                return None;
            }
            for (pm, pc) in c.numer().terms() {
                out.add_term(m.mul(pm), pc);
            }
        }
        Some(out)
    }

    /// Substitute a rational value for a parameter inside every coefficient.
    pub fn evaluate_param(&self, v: Var, value: &Rational) -> Result<Self, AlgebraError> {
        let mut out = RfPoly::zero();
        for (m, c) in self.terms() {
            out.add_term(*m, &c.evaluate_at(v, value)?);
        }
        Ok(out)
    }

    /// Largest term count over the coefficients.
    pub fn peak_coeff_terms(&self) -> usize {
        self.terms().map(|(_, c)| c.num_terms()).max().unwrap_or(0)
    }
}

impl std::fmt::Display for RfPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.pretty(|c| {
            let s = c.to_string();
            if c.is_polynomial() && c.numer().num_terms() <= 1 {
                s
            } else {
                format!("({s})")
            }
        }))
    }
}
