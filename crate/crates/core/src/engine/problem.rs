use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebra::{Field, Monomial, MultiPoly, RatFunc, Rational, Var};

use super::EngineError;

/// Splitting type of a bundle over `CP^n`: line summands `O(l_a)` and `O(-k_b)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BundleSpec {
    pub n: u32,
    /// Positive degrees `l_a` of the convex summands.
    pub convex: Vec<u32>,
    /// Positive integers `k_b` of the concave summands `O(-k_b)`.
    pub concave: Vec<u32>,
}

impl BundleSpec {
    pub fn new(n: u32, convex: Vec<u32>, concave: Vec<u32>) -> Result<Self, EngineError> {
        let b = BundleSpec { n, convex, concave };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.n == 0 {
            return Err(EngineError::InvalidBundle("n must be at least 1".into()));
        }
        if self.convex.is_empty() && self.concave.is_empty() {
            return Err(EngineError::InvalidBundle("empty splitting type".into()));
        }
        if self.convex.iter().chain(&self.concave).any(|&l| l == 0) {
            return Err(EngineError::InvalidBundle(
                "splitting degrees must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.convex.len() + self.concave.len()
    }

    /// Ansatz degree `(n+1)d + n - 3`, which is also the dimension of the
    /// degree-`d` stable map space.
    pub fn ansatz_degree(&self, d: u32) -> u32 {
        let n = self.n;
        ((n + 1) * d + n).saturating_sub(3)
    }

    /// Rank of the obstruction bundle in degree `d`: `sum (l d + 1) + sum (k d - 1)`.
    pub fn obstruction_rank(&self, d: u32) -> u32 {
        self.convex.iter().map(|l| l * d + 1).sum::<u32>()
            + self.concave.iter().map(|k| k * d - 1).sum::<u32>()
    }

    /// `rank(U_d) - dim`, negative values clamped to zero.
    pub fn excess(&self, d: u32) -> u32 {
        self.obstruction_rank(d).saturating_sub(self.ansatz_degree(d))
    }

    pub fn is_critical(&self) -> bool {
        (1..=3).all(|d| self.obstruction_rank(d) == self.ansatz_degree(d))
    }
}

impl fmt::Display for BundleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .convex
            .iter()
            .map(|l| format!("O({l})"))
            .chain(self.concave.iter().map(|k| format!("O(-{k})")))
            .collect();
        write!(f, "{} -> CP^{}", parts.join("+"), self.n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum OmegaKind {
    /// Euler class: the Chern variable is identically zero.
    #[default]
    Euler,
    /// Chern polynomial in the variable `x`.
    Chern,
}

impl OmegaKind {
    pub fn name(self) -> &'static str {
        match self {
            OmegaKind::Euler => "euler",
            OmegaKind::Chern => "chern",
        }
    }
}

impl fmt::Display for OmegaKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OmegaKind {
    type Err = EngineError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "euler" => Ok(OmegaKind::Euler),
            "chern" => Ok(OmegaKind::Chern),
            other => Err(EngineError::InvalidBundle(format!(
                "unknown omega kind {other:?} (expected euler or chern)"
            ))),
        }
    }
}

/// Integer polynomial `s(i)` giving the weights `lambda_i = s(i) u`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Specialization {
    /// Coefficients, constant term first.
    coeffs: Vec<i64>,
}

impl Specialization {
    pub fn from_coeffs(mut coeffs: Vec<i64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Specialization { coeffs }
    }

    /// The default `i^2 + 7i + 1`.
    pub fn standard() -> Self {
        Self::from_coeffs(vec![1, 7, 1])
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn eval(&self, i: u32) -> BigInt {
        let x = BigInt::from(i);
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &x + BigInt::from(*c))
    }

    /// Weights must be nonzero and pairwise distinct on `0..=n`.
    pub fn validate(&self, n: u32) -> Result<(), EngineError> {
        let values: Vec<BigInt> = (0..=n).map(|i| self.eval(i)).collect();
        if let Some(i) = values.iter().position(|v| v.is_zero()) {
            return Err(EngineError::InvalidSpecialization(format!(
                "s({i}) = 0 makes a weight vanish"
            )));
        }
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                if values[i] == values[j] {
                    return Err(EngineError::InvalidSpecialization(format!(
                        "s({i}) = s({j}) = {} makes two weights coincide",
                        values[i]
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Specialization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let a = c.unsigned_abs();
            let body = match (k, a) {
                (0, _) => a.to_string(),
                (1, 1) => "i".to_string(),
                (1, _) => format!("{a}*i"),
                (_, 1) => format!("i^{k}"),
                _ => format!("{a}*i^{k}"),
            };
            write!(f, "{sign}{body}")?;
            first = false;
        }
        Ok(())
    }
}

impl FromStr for Specialization {
    type Err = EngineError;

    /// Parses sums of terms like `3`, `7*i`, `i^2`, `-2*i^3`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = |why: &str| EngineError::InvalidSpecialization(format!("{why} in {text:?}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty polynomial"));
        }
        let mut coeffs: Vec<i64> = Vec::new();
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (negative, body) = match rest.as_bytes()[0] {
                b'+' => (false, &rest[1..]),
                b'-' => (true, &rest[1..]),
                _ if coeffs.is_empty() && rest.len() == compact.len() => (false, rest),
                _ => return Err(bad("expected + or -")),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            let (coef_text, power) = match term.find('i') {
                None => (term, 0u32),
                Some(pos) => {
                    let coef = term[..pos].strip_suffix('*').unwrap_or(&term[..pos]);
                    let tail = &term[pos + 1..];
                    let power = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^')
                            .and_then(|p| p.parse().ok())
                            .ok_or_else(|| bad("bad exponent"))?
                    };
                    (coef, power)
                }
            };
            let magnitude: i64 = if coef_text.is_empty() {
                if power == 0 {
                    return Err(bad("empty term"));
                }
                1
            } else {
                coef_text.parse().map_err(|_| bad("bad coefficient"))?
            };
            let k = power as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0);
            }
            coeffs[k] += if negative { -magnitude } else { magnitude };
        }
        Ok(Self::from_coeffs(coeffs))
    }
}

/// Everything that stays fixed across degrees of one computation.
#[derive(Clone, Debug)]
pub struct Problem {
    pub bundle: BundleSpec,
    pub omega: OmegaKind,
    pub spec: Specialization,
    weights: Vec<BigInt>,
}

impl Problem {
    pub fn new(bundle: BundleSpec, omega: OmegaKind, spec: Specialization) -> Result<Self, EngineError> {
        bundle.validate()?;
        spec.validate(bundle.n)?;
        let weights = (0..=bundle.n).map(|i| spec.eval(i)).collect();
        Ok(Problem {
            bundle,
            omega,
            spec,
            weights,
        })
    }

    pub fn n(&self) -> u32 {
        self.bundle.n
    }

    pub fn points(&self) -> std::ops::RangeInclusive<usize> {
        0..=self.bundle.n as usize
    }

    /// Integer `s(i)`.
    pub fn weight(&self, i: usize) -> &BigInt {
        &self.weights[i]
    }

    pub fn weight_rational(&self, i: usize) -> Rational {
        Rational::from_integer(self.weights[i].clone())
    }

    /// `lambda_i = s(i) u`.
    pub fn lambda(&self, i: usize) -> MultiPoly {
        MultiPoly::term(Monomial::var(Var::U), self.weight_rational(i))
    }

    /// `lambda_i^k` as a coefficient.
    pub fn lambda_pow(&self, i: usize, k: u32) -> RatFunc {
        let c = crate::algebra::rational::pow_rational(&self.weight_rational(i), k);
        RatFunc::from_poly(MultiPoly::term(Monomial::var_pow(Var::U, k as u16), c))
    }

    /// The Chern variable, or zero for the Euler class.
    pub fn x(&self) -> MultiPoly {
        match self.omega {
            OmegaKind::Euler => MultiPoly::zero(),
            OmegaKind::Chern => MultiPoly::var(Var::X),
        }
    }

    /// `Omega(h) = prod (x + l h) / prod (x - k h)` evaluated at `h = value`.
    pub fn omega_at(&self, value: &MultiPoly) -> Result<RatFunc, EngineError> {
        let x = self.x();
        let mut num = MultiPoly::one();
        for &l in &self.bundle.convex {
            num = &num * &(&x + &value.scale(&Rational::from_integer(l.into())));
        }
        let mut den = MultiPoly::one();
        for &k in &self.bundle.concave {
            den = &den * &(&x - &value.scale(&Rational::from_integer(k.into())));
        }
        Ok(RatFunc::new(num, den)?)
    }

    /// `Omega(lambda_i)`; nonzero because every weight is.
    pub fn omega_at_point(&self, i: usize) -> Result<RatFunc, EngineError> {
        let w = self.omega_at(&self.lambda(i))?;
        if w.is_zero() {
            return Err(EngineError::InvalidSpecialization(format!(
                "Omega vanishes at lambda_{i}"
            )));
        }
        Ok(w)
    }

    /// `(lambda_i - lambda_j) / d` as a multiple of `u`.
    pub fn step(&self, i: usize, j: usize, d: u32) -> Rational {
        Rational::new(&self.weights[i] - &self.weights[j], BigInt::from(d))
    }

    /// Special-value points of degree `d` that also lie on a gluing line
    /// `kappa = lambda_k + r alpha` (`0 < r < d`): `d (s_i - s_k) = r (s_i - s_j)`.
    /// Each such coincidence makes one special-value equation redundant.
    pub fn coincidences(&self, d: u32) -> Vec<(usize, usize, usize, u32)> {
        let mut out = Vec::new();
        for i in self.points() {
            for j in self.points().filter(|&j| j > i) {
                for k in self.points().filter(|&k| k != i && k != j) {
                    for r in 1..d {
                        let lhs = BigInt::from(d) * (&self.weights[i] - &self.weights[k]);
                        let rhs = BigInt::from(r) * (&self.weights[i] - &self.weights[j]);
                        if lhs == rhs {
                            out.push((i, j, k, r));
                        }
                    }
                }
            }
        }
        out
    }

    /// Coefficients `[c_0, ..., c_n]` with `kappa^{n+1} = sum c_j kappa^j`
    /// modulo `prod (kappa - lambda_i)`.
    pub fn kappa_relation(&self) -> Vec<MultiPoly> {
        // prod (kappa - s_i u), as dense coefficients in kappa with u-monomial entries.
        let mut prod: Vec<Rational> = vec![<Rational as One>::one()];
        for w in &self.weights {
            let mut next = vec![<Rational as Zero>::zero(); prod.len() + 1];
            for (k, c) in prod.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * Rational::from_integer(w.clone());
            }
            prod = next;
        }
        let n1 = self.weights.len();
        (0..n1)
            .map(|j| {
                let c = -prod[j].clone();
                MultiPoly::term(Monomial::var_pow(Var::U, (n1 - j) as u16), c)
            })
            .collect()
    }
}
