//! Exact forward elimination and back substitution over [`RatFunc`].

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::algebra::{Field, RatFunc};

/// Index of an unknown in its system.
pub type UnknownId = usize;

/// The affine form `sum coeffs[w] * w + constant`, read as `= 0` inside a system.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LinExpr {
    coeffs: BTreeMap<UnknownId, RatFunc>,
    constant: Option<RatFunc>,
}

impl LinExpr {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn constant_only(c: RatFunc) -> Self {
        let mut e = Self::new();
        e.add_constant(&c);
        e
    }

    pub fn add_term(&mut self, w: UnknownId, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&w) {
            Some(old) => {
                let sum = old.add_ref(c);
                if sum.is_zero() {
                    self.coeffs.remove(&w);
                } else {
                    *old = sum;
                }
            }
            None => {
                self.coeffs.insert(w, c.clone());
            }
        }
    }

    pub fn add_constant(&mut self, c: &RatFunc) {
        if c.is_zero() {
            return;
        }
        let sum = match &self.constant {
            Some(old) => old.add_ref(c),
            None => c.clone(),
        };
        self.constant = (!sum.is_zero()).then_some(sum);
    }

    pub fn coeff(&self, w: UnknownId) -> Option<&RatFunc> {
        self.coeffs.get(&w)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (UnknownId, &RatFunc)> {
        self.coeffs.iter().map(|(w, c)| (*w, c))
    }

    pub fn constant(&self) -> RatFunc {
        self.constant.clone().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_none()
    }

    pub fn has_unknowns(&self) -> bool {
        !self.coeffs.is_empty()
    }

    /// Number of stored entries, counting a nonzero constant.
    pub fn num_entries(&self) -> usize {
        self.coeffs.len() + usize::from(self.constant.is_some())
    }

    /// Total polynomial term count over all entries.
    pub fn num_terms(&self) -> usize {
        self.coeffs.values().chain(self.constant.iter()).map(RatFunc::num_terms).sum()
    }

    pub fn scale(&self, k: &RatFunc) -> Self {
        let mut out = Self::new();
        if k.is_zero() {
            return out;
        }
        for (w, c) in &self.coeffs {
            out.coeffs.insert(*w, c.mul_ref(k));
        }
        out.constant = self.constant.as_ref().map(|c| c.mul_ref(k));
        out
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &LinExpr, k: &RatFunc) {
        for (w, c) in &other.coeffs {
            self.add_term(*w, &c.mul_ref(k));
        }
        if let Some(c) = &other.constant {
            self.add_constant(&c.mul_ref(k));
        }
    }

    /// Value under a full assignment of the unknowns occurring in `self`.
    pub fn evaluate(&self, assignment: &BTreeMap<UnknownId, RatFunc>) -> Result<RatFunc, SolveError> {
        let mut acc = self.constant();
        for (w, c) in &self.coeffs {
            let v = assignment.get(w).ok_or(SolveError::Unassigned(*w))?;
            acc = acc.add_ref(&c.mul_ref(v));
        }
        Ok(acc)
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinearSystem {
    pub equations: Vec<LinExpr>,
    pub unknowns: Vec<UnknownId>,
}

impl LinearSystem {
    pub fn new(unknowns: Vec<UnknownId>) -> Self {
        LinearSystem {
            equations: Vec::new(),
            unknowns,
        }
    }

    pub fn push(&mut self, e: LinExpr) {
        self.equations.push(e);
    }

    /// Drop `0 = 0` and exact duplicates, keeping first occurrences in order.
    pub fn dedup(&mut self) {
        let mut seen = HashSet::new();
        self.equations.retain(|e| !e.is_zero() && seen.insert(e.clone()));
    }

    /// Every unknown used by an equation is listed.
    pub fn validate(&self) -> Result<(), SolveError> {
        let known: HashSet<_> = self.unknowns.iter().copied().collect();
        for e in &self.equations {
            for (w, _) in e.coeffs() {
                if !known.contains(&w) {
                    return Err(SolveError::Unlisted(w));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum PivotStrategy {
    /// First remaining equation, in original order, that contains the unknown.
    FirstNonzero,
    /// Remaining equation with the fewest entries; ties go to the earliest.
    #[default]
    MinTerms,
}

impl PivotStrategy {
    pub fn name(self) -> &'static str {
        match self {
            PivotStrategy::FirstNonzero => "first",
            PivotStrategy::MinTerms => "min-terms",
        }
    }
}

impl fmt::Display for PivotStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PivotStrategy {
    type Err = SolveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first" | "first-nonzero" => Ok(PivotStrategy::FirstNonzero),
            "min-terms" => Ok(PivotStrategy::MinTerms),
            other => Err(SolveError::UnknownStrategy(other.to_string())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Consistent,
    Inconsistent,
    Unchecked,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Consistent => "consistent",
            Verdict::Inconsistent => "inconsistent",
            Verdict::Unchecked => "unchecked",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("underdetermined: unknown {unknown} has no pivot ({remaining} equations remain)")]
    Underdetermined { unknown: UnknownId, remaining: usize },
    #[error("unknown {0} appears in an equation but is not listed")]
    Unlisted(UnknownId),
    #[error("unknown {0} has no assigned value")]
    Unassigned(UnknownId),
    #[error("empty system")]
    Empty,
    #[error("unknown pivot strategy {0:?} (expected first or min-terms)")]
    UnknownStrategy(String),
}

/// One eliminated unknown: `unknown = expr`, with `expr` in later unknowns only.
#[derive(Clone, Debug)]
pub struct Pivot {
    pub unknown: UnknownId,
    pub expr: LinExpr,
}

#[derive(Clone, Debug, Default)]
pub struct SolveStats {
    pub equations: usize,
    pub unknowns: usize,
    /// Largest polynomial term count of any working equation seen during elimination.
    pub peak_terms: usize,
}

#[derive(Clone, Debug)]
pub struct Triangular {
    pub pivots: Vec<Pivot>,
    /// Leftover equations; they contain no eliminated unknown.
    pub residuals: Vec<LinExpr>,
    pub stats: SolveStats,
}

pub fn triangularize(system: &LinearSystem, strategy: PivotStrategy) -> Result<Triangular, SolveError> {
    if system.equations.is_empty() {
        return Err(SolveError::Empty);
    }
    system.validate()?;
    let mut stats = SolveStats {
        equations: system.equations.len(),
        unknowns: system.unknowns.len(),
        peak_terms: system.equations.iter().map(LinExpr::num_terms).max().unwrap_or(0),
    };
    // Working equations tagged with their original index.
    let mut work: Vec<(usize, LinExpr)> = system
        .equations
        .iter()
        .filter(|e| !e.is_zero())
        .cloned()
        .enumerate()
        .collect();
    let mut pivots = Vec::with_capacity(system.unknowns.len());

    for &v in &system.unknowns {
        let candidates = work.iter().enumerate().filter(|(_, (_, e))| e.coeff(v).is_some());
        let chosen = match strategy {
            PivotStrategy::FirstNonzero => candidates.min_by_key(|(_, (idx, _))| *idx),
            PivotStrategy::MinTerms => candidates.min_by_key(|(_, (idx, e))| (e.num_entries(), *idx)),
        }
        .map(|(pos, _)| pos);
        let Some(pos) = chosen else {
            return Err(SolveError::Underdetermined {
                unknown: v,
                remaining: work.iter().filter(|(_, e)| e.has_unknowns()).count(),
            });
        };
        let (_, row) = work.remove(pos);
        let c = row.coeff(v).expect("pivot coefficient").clone();
        // v = -(row - c v) / c
        let mut rest = row;
        rest.coeffs.remove(&v);
        let minus_inv = c.inv().expect("nonzero pivot").neg_ref();
        let expr = rest.scale(&minus_inv);

        work.par_iter_mut().for_each(|(_, e)| {
            if let Some(k) = e.coeffs.remove(&v) {
                e.add_scaled(&expr, &k);
            }
        });
        work.retain(|(_, e)| !e.is_zero());
        let peak = work.par_iter().map(|(_, e)| e.num_terms()).max().unwrap_or(0);
        stats.peak_terms = stats.peak_terms.max(peak).max(expr.num_terms());
        pivots.push(Pivot { unknown: v, expr });
    }

    Ok(Triangular {
        pivots,
        residuals: work.into_iter().map(|(_, e)| e).collect(),
        stats,
    })
}

/// Resolve pivot expressions from last to first.
pub fn back_substitute(pivots: &[Pivot]) -> Result<BTreeMap<UnknownId, RatFunc>, SolveError> {
    let mut assignment = BTreeMap::new();
    for p in pivots.iter().rev() {
        let value = p.expr.evaluate(&assignment)?;
        assignment.insert(p.unknown, value);
    }
    Ok(assignment)
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub assignment: BTreeMap<UnknownId, RatFunc>,
    pub verdict: Verdict,
    pub stats: SolveStats,
}

impl Solution {
    /// Value of every equation of `system` under the assignment.
    pub fn residuals(&self, system: &LinearSystem) -> Result<Vec<RatFunc>, SolveError> {
        system.equations.iter().map(|e| e.evaluate(&self.assignment)).collect()
    }
}

pub fn solve(system: &LinearSystem, strategy: PivotStrategy, check: bool) -> Result<Solution, SolveError> {
    let tri = triangularize(system, strategy)?;
    let assignment = back_substitute(&tri.pivots)?;
    let verdict = if check {
        let mut ok = true;
        for r in &tri.residuals {
            if !r.evaluate(&assignment)?.is_zero() {
                ok = false;
                break;
            }
        }
        if ok {
            Verdict::Consistent
        } else {
            Verdict::Inconsistent
        }
    } else {
        Verdict::Unchecked
    };
    Ok(Solution {
        assignment,
        verdict,
        stats: tri.stats,
    })
}
