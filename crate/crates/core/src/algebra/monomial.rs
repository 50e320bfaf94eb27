use std::cmp::Ordering;
use std::fmt;

/// Number of variables in the alphabet.
pub const NVARS: usize = 6;

/// The fixed variable alphabet shared by every polynomial in a computation.
///
/// `U` is the specialization parameter (`lambda_i = s(i) * u`), `X` the
/// Chern-polynomial variable, `Alpha` the circle weight, `Kappa` the
/// equivariant hyperplane class, `H` its nonequivariant limit and `T` the
/// formal parameter of the integral formula for `K_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    U = 0,
    X = 1,
    Alpha = 2,
    Kappa = 3,
    H = 4,
    T = 5,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::U, Var::X, Var::Alpha, Var::Kappa, Var::H, Var::T];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        VariableTable::CANONICAL.names[self.index()]
    }

    pub fn from_name(name: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == name)
    }

    /// Parameter variables are the ones allowed inside a [`RatFunc`](super::RatFunc).
    pub fn is_parameter(self) -> bool {
        matches!(self, Var::U | Var::X)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered variable names. There is exactly one table; sharing it is what
/// makes every polynomial in a computation mutually compatible.
#[derive(Debug, PartialEq, Eq)]
pub struct VariableTable {
    pub names: [&'static str; NVARS],
}

impl VariableTable {
    pub const CANONICAL: VariableTable = VariableTable {
        names: ["u", "x", "alpha", "kappa", "h", "t"],
    };

    pub fn len(&self) -> usize {
        NVARS
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| *n == name)
    }
}

/// Exponent vector over the canonical alphabet, ordered graded-lexicographically
/// (total degree first, then lexicographic with `u` most significant).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Monomial(pub [u16; NVARS]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; NVARS]);

    pub fn var(v: Var) -> Self {
        Self::var_pow(v, 1)
    }

    pub fn var_pow(v: Var, exp: u16) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = exp;
        Monomial(e)
    }

    pub fn from_pairs(pairs: &[(Var, u16)]) -> Self {
        let mut e = [0; NVARS];
        for &(v, k) in pairs {
            e[v.index()] += k;
        }
        Monomial(e)
    }

    #[inline]
    pub fn exp(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn with_exp(mut self, v: Var, exp: u16) -> Self {
        self.0[v.index()] = exp;
        self
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, vars: &[Var]) -> u32 {
        vars.iter().map(|v| self.exp(*v) as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    #[inline]
    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = a.checked_add(*b).expect("monomial exponent overflow");
        }
        Monomial(e)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        let mut e = other.0;
        for (a, b) in e.iter_mut().zip(self.0.iter()) {
            *a -= *b;
        }
        Monomial(e)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut e = self.0;
        for (a, b) in e.iter_mut().zip(other.0.iter()) {
            *a = (*a).min(*b);
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for v in Var::ALL {
            let e = self.exp(v);
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}
