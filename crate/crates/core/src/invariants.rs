//! Intersection numbers `K_d` and instanton numbers `n_d` read off from the
//! Euler data.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::algebra::rational::{factorial, format_rational, int};
use crate::algebra::{AlgebraError, Monomial, MultiPoly, Rational, Var};
use crate::engine::{reduce_kappa, BundleSpec, EulerDatum, OmegaKind, Problem};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("invalid s_diff: {0}")]
    InvalidSDiff(String),
    #[error("degree {degree}: {source}")]
    Pole {
        degree: u32,
        #[source]
        source: AlgebraError,
    },
    #[error("degree {degree}: extracted value still depends on {detail}")]
    Residual { degree: u32, detail: String },
}

/// Per-degree order `s(d)` of the x-derivative applied before extraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SDiff {
    /// `c0 + c1 d`.
    Affine { c0: i64, c1: i64 },
    /// `s(1), s(2), ...`
    Table(Vec<u32>),
}

impl SDiff {
    pub fn zero() -> Self {
        SDiff::Affine { c0: 0, c1: 0 }
    }

    /// `rank(U_d)` minus the dimension of the degree-`d` stable map space.
    pub fn natural(bundle: &BundleSpec) -> Self {
        let n = bundle.n as i64;
        let slope: i64 = bundle.convex.iter().chain(&bundle.concave).map(|&l| l as i64).sum::<i64>() - (n + 1);
        let offset = bundle.convex.len() as i64 - bundle.concave.len() as i64 - n + 3;
        SDiff::Affine { c0: offset, c1: slope }
    }

    pub fn eval(&self, d: u32) -> Result<u32, InvariantError> {
        match self {
            SDiff::Affine { c0, c1 } => {
                let v = c0 + c1 * d as i64;
                u32::try_from(v).map_err(|_| InvariantError::InvalidSDiff(format!("s({d}) = {v} is negative")))
            }
            SDiff::Table(values) => values
                .get(d as usize - 1)
                .copied()
                .ok_or_else(|| InvariantError::InvalidSDiff(format!("table has no entry for degree {d}"))),
        }
    }

    /// Check `s(d) >= 0` for `d = 1..=dmax`, and `s = 0` in euler mode.
    pub fn validate(&self, omega: OmegaKind, dmax: u32) -> Result<(), InvariantError> {
        for d in 1..=dmax {
            let s = self.eval(d)?;
            if omega == OmegaKind::Euler && s != 0 {
                return Err(InvariantError::InvalidSDiff(format!("euler mode requires s = 0 (s({d}) = {s})")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SDiff::Affine { c0, c1 } => match (c0, c1) {
                (c0, 0) => write!(f, "{c0}"),
                (0, 1) => write!(f, "d"),
                (0, c1) => write!(f, "{c1}*d"),
                (c0, 1) => write!(f, "{c0}+d"),
                (c0, c1) if *c1 < 0 => write!(f, "{c0}-{}*d", -c1),
                (c0, c1) => write!(f, "{c0}+{c1}*d"),
            },
            SDiff::Table(values) => {
                let parts: Vec<String> = values.iter().map(u32::to_string).collect();
                write!(f, "table:{}", parts.join(","))
            }
        }
    }
}

impl FromStr for SDiff {
    type Err = InvariantError;

    /// Accepts `table:a,b,...` or an affine expression in `d` such as `0`, `d`, `2*d`, `1+3*d`.
    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let bad = || InvariantError::InvalidSDiff(format!("cannot parse {text:?}"));
        let text = text.trim();
        if let Some(rest) = text.strip_prefix("table:") {
            let values = rest
                .split(',')
                .map(|v| v.trim().parse::<u32>().map_err(|_| bad()))
                .collect::<Result<Vec<_>, _>>()?;
            if values.is_empty() {
                return Err(bad());
            }
            return Ok(SDiff::Table(values));
        }
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let (mut c0, mut c1) = (0i64, 0i64);
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ => (1, rest),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let term = &body[..end];
            rest = &body[end..];
            if term.is_empty() {
                return Err(bad());
            }
            if let Some(coeff) = term.strip_suffix('d') {
                let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
                let c: i64 = if coeff.is_empty() { 1 } else { coeff.parse().map_err(|_| bad())? };
                c1 += sign * c;
            } else {
                c0 += sign * term.parse::<i64>().map_err(|_| bad())?;
            }
        }
        Ok(SDiff::Affine { c0, c1 })
    }
}

/// A rational multiple of `x^{x_exp}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XValue {
    pub value: Rational,
    pub x_exp: u32,
}

impl XValue {
    pub fn new(value: Rational, x_exp: u32) -> Self {
        XValue { value, x_exp }
    }

    pub fn scalar(value: Rational) -> Self {
        XValue { value, x_exp: 0 }
    }
}

impl fmt::Display for XValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = format_rational(&self.value);
        let x = match self.x_exp {
            0 => return write!(f, "{v}"),
            1 => "x".to_string(),
            e => format!("x^{e}"),
        };
        match v.as_str() {
            "1" => write!(f, "{x}"),
            "-1" => write!(f, "-{x}"),
            _ => write!(f, "{v}*{x}"),
        }
    }
}

/// `Q_d` reduced modulo the hyperplane relation, at `u = 0`, with `kappa` renamed to `h`.
pub fn nonequivariant_restriction(problem: &Problem, datum: &EulerDatum) -> Result<MultiPoly, InvariantError> {
    let reduced = reduce_kappa(problem, &datum.q);
    let zero = Rational::zero();
    let mut out = MultiPoly::zero();
    for (m, c) in reduced.terms() {
        let at = c
            .evaluate_at(Var::U, &zero)
            .map_err(|source| InvariantError::Pole {
                degree: datum.degree,
                source,
            })?;
        let at = at.numer().scale(&at.denom().constant_term().recip());
        out = &out + &at.mul_monomial(m);
    }
    Ok(out.rename(Var::Kappa, Var::H))
}

/// `(1/s!) d^s/dx^s` at `x = 0`.
pub fn x_adjustment(j: &MultiPoly, s: u32) -> MultiPoly {
    let mut p = j.clone();
    for _ in 0..s {
        p = p.derivative(Var::X);
    }
    p.evaluate(Var::X, &Rational::zero()).scale(&factorial(s).recip())
}

/// Product `p * q` with powers of `var` above `max` dropped.
fn mul_truncated(p: &MultiPoly, q: &MultiPoly, var: Var, max: u32) -> MultiPoly {
    let mut out = MultiPoly::zero();
    for (ma, ca) in p.terms() {
        for (mb, cb) in q.terms() {
            if ma.exp(var) as u32 + mb.exp(var) as u32 <= max {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
    }
    out
}

/// Coefficients `C_0(t), ..., C_n(t)` of `z^j` in
/// `exp(-t z) prod_{m=1}^{d} (1 - z/m)^{-(n+1)}`, truncated at `z^n`.
fn series_coefficients(n: u32, d: u32) -> Vec<MultiPoly> {
    let z = Var::H;
    let exp_part = MultiPoly::from_terms((0..=n).map(|k| {
        let c = if k % 2 == 0 { Rational::one() } else { -Rational::one() };
        (Monomial::from_pairs(&[(z, k as u16), (Var::T, k as u16)]), c / factorial(k))
    }));
    let mut g = exp_part;
    for m in 1..=d {
        let geometric = MultiPoly::from_terms((0..=n).map(|r| {
            let c = Rational::new(BigInt::one(), BigInt::from(m).pow(r));
            (Monomial::var_pow(z, r as u16), c)
        }));
        for _ in 0..=n {
            g = mul_truncated(&g, &geometric, z, n);
        }
    }
    g.collect_coeffs(z).into_iter().chain(std::iter::repeat(MultiPoly::zero())).take(n as usize + 1).collect()
}

/// `[h^target]` of `J * sum_j C_j h^j alpha^{n-j}`.
fn weighted_coefficient(j_poly: &MultiPoly, series: &[MultiPoly], n: u32, target: u32) -> MultiPoly {
    let by_h = j_poly.collect_coeffs(Var::H);
    let mut out = MultiPoly::zero();
    for (j, c) in series.iter().enumerate().take(target as usize + 1) {
        let Some(part) = by_h.get(target as usize - j) else { continue };
        if part.is_zero() || c.is_zero() {
            continue;
        }
        let alpha = Monomial::var_pow(Var::Alpha, (n - j as u32) as u16);
        out = &out + &(part * c).mul_monomial(&alpha);
    }
    out
}

/// `(d!)^{n+1} (-1)^{(n+1)d}`.
fn normalization(n: u32, d: u32) -> Rational {
    let c = factorial(d).pow((n + 1) as i32);
    if ((n + 1) * d) % 2 == 1 {
        -c
    } else {
        c
    }
}

fn residual(degree: u32, got: &MultiPoly) -> InvariantError {
    let vars: Vec<String> = got.variables().iter().map(|v| v.name().to_string()).collect();
    InvariantError::Residual {
        degree,
        detail: if vars.is_empty() {
            "a non-monomial combination".to_string()
        } else {
            vars.join(", ")
        },
    }
}

/// Read `K` off `total = K * factor * alpha^{power}`, failing if `total` has any other shape.
fn extract_scalar(total: &MultiPoly, factor: &MultiPoly, power: i64, degree: u32) -> Result<Rational, InvariantError> {
    if total.is_zero() {
        return Ok(Rational::zero());
    }
    let power = u16::try_from(power).map_err(|_| residual(degree, total))?;
    let shape = factor.mul_monomial(&Monomial::var_pow(Var::Alpha, power));
    let (m, lead) = shape.leading_term().expect("nonzero normalization");
    let k = total.coeff(m) / lead;
    if &shape.scale(&k) != total {
        return Err(residual(degree, total));
    }
    Ok(k)
}

fn prepare(j_poly: &MultiPoly, s: u32) -> MultiPoly {
    debug_assert!(!j_poly.contains(Var::U));
    x_adjustment(j_poly, s)
}

/// `K_d` from the truncated-series form of the integral, `alpha^3 / (2 - d t) [h^n] poly1`.
pub fn kd_from_qd(j_poly: &MultiPoly, d: u32, n: u32, s: u32) -> Result<XValue, InvariantError> {
    let p = prepare(j_poly, s);
    let series = series_coefficients(n, d);
    let total = weighted_coefficient(&p, &series, n, n);
    // total = K c (2 - d t) alpha^{M-3}, with M = n + (n+1) d
    let c = normalization(n, d);
    let two_minus_dt = &MultiPoly::from_int(2) - &MultiPoly::term(Monomial::var(Var::T), int(d as i64));
    let power = (n + (n + 1) * d) as i64 - 3;
    let k = extract_scalar(&total, &two_minus_dt.scale(&c), power, d)?;
    Ok(XValue::new(k, s))
}

/// `K_d` from the second form, `alpha^2 [h^n] (h poly1) / d`.
pub fn kd_crosscheck(j_poly: &MultiPoly, d: u32, n: u32, s: u32) -> Result<XValue, InvariantError> {
    let p = prepare(j_poly, s);
    let series = series_coefficients(n, d);
    if n == 0 {
        return Ok(XValue::new(Rational::zero(), s));
    }
    let total = weighted_coefficient(&p, &series, n, n - 1);
    // total = K d c alpha^{M-2}
    let c = normalization(n, d) * int(d as i64);
    let power = (n + (n + 1) * d) as i64 - 2;
    let k = extract_scalar(&total, &MultiPoly::constant(c), power, d)?;
    Ok(XValue::new(k, s))
}

/// `n_d = K_d - sum_{k | d, k >= 2} n_{d/k} / k^3`, for `K_1, K_2, ...` in order.
pub fn instanton_convert(k_list: &[XValue]) -> Vec<XValue> {
    let mut out: Vec<XValue> = Vec::with_capacity(k_list.len());
    for (idx, kd) in k_list.iter().enumerate() {
        let d = idx as u64 + 1;
        let mut value = kd.value.clone();
        for k in 2..=d {
            if d.is_multiple_of(k) {
                let k3 = BigInt::from(k).pow(3);
                value -= &out[(d / k) as usize - 1].value / Rational::from_integer(k3);
            }
        }
        out.push(XValue::new(value, kd.x_exp));
    }
    out
}

/// `K_d = sum_{k | d} n_{d/k} / k^3`, the inverse of [`instanton_convert`].
pub fn multiple_cover_sum(n_list: &[XValue]) -> Vec<XValue> {
    (1..=n_list.len() as u64)
        .map(|d| {
            let mut value = Rational::zero();
            for k in (1..=d).filter(|&k| d.is_multiple_of(k)) {
                let k3 = BigInt::from(k).pow(3);
                value += &n_list[(d / k) as usize - 1].value / Rational::from_integer(k3);
            }
            XValue::new(value, n_list[d as usize - 1].x_exp)
        })
        .collect()
}

/// Both extractions for one degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeInvariant {
    pub degree: u32,
    pub k: XValue,
    pub crosscheck: XValue,
}

impl DegreeInvariant {
    pub fn agrees(&self) -> bool {
        self.k == self.crosscheck
    }
}

pub fn degree_invariant(problem: &Problem, datum: &EulerDatum, sdiff: &SDiff) -> Result<DegreeInvariant, InvariantError> {
    let d = datum.degree;
    let s = sdiff.eval(d)?;
    let j = nonequivariant_restriction(problem, datum)?;
    let n = problem.n();
    Ok(DegreeInvariant {
        degree: d,
        k: kd_from_qd(&j, d, n, s)?,
        crosscheck: kd_crosscheck(&j, d, n, s)?,
    })
}

/// Extraction for every computed degree, in parallel.
pub fn extract_all(
    problem: &Problem,
    data: &[EulerDatum],
    sdiff: &SDiff,
) -> Result<Vec<DegreeInvariant>, InvariantError> {
    data.par_iter().map(|datum| degree_invariant(problem, datum, sdiff)).collect()
}
