use crate::algebra::{Field, Poly, Var};

/// Reduce `p` modulo `var^{m} = sum_{j<m} rhs[j] var^j`, where `m = rhs.len()`.
///
/// The result has degree below `m` in `var`. Works top-down: each leading
/// power `var^k` with `k >= m` is rewritten as `var^{k-m} * rhs`.
pub fn poly_congruent<F: Field>(p: &Poly<F>, rhs: &[Poly<F>], var: Var) -> Poly<F> {
    let m = rhs.len();
    assert!(m > 0, "relation must have positive degree");
    debug_assert!(rhs.iter().all(|c| !c.contains(var)));
    let mut coeffs = p.collect_coeffs(var);
    if coeffs.len() <= m {
        return p.clone();
    }
    for k in (m..coeffs.len()).rev() {
        let top = std::mem::take(&mut coeffs[k]);
        if top.is_zero() {
            continue;
        }
        for (j, r) in rhs.iter().enumerate() {
            if !r.is_zero() {
                let add = &top * r;
                coeffs[k - m + j] = &coeffs[k - m + j] + &add;
            }
        }
    }
    coeffs.truncate(m);
    Poly::from_coeffs(var, &coeffs)
}

/// `[c_{nu,0}, ..., c_{nu,m-1}]` for `nu = 0..=max`: the reduced form of each power `var^nu`.
pub fn power_table<F: Field>(rhs: &[Poly<F>], max: usize) -> Vec<Vec<Poly<F>>> {
    let m = rhs.len();
    let mut table: Vec<Vec<Poly<F>>> = Vec::with_capacity(max + 1);
    for nu in 0..=max {
        let row = if nu < m {
            let mut row = vec![Poly::zero(); m];
            row[nu] = Poly::one();
            row
        } else {
            // var * (sum prev_j var^j): shift up, then fold var^m back.
            let prev = &table[nu - 1];
            let mut row = vec![Poly::zero(); m];
            row[1..m].clone_from_slice(&prev[..m - 1]);
            let top = &prev[m - 1];
            if !top.is_zero() {
                for (j, r) in rhs.iter().enumerate() {
                    row[j] = &row[j] + &(top * r);
                }
            }
            row
        };
        table.push(row);
    }
    table
}
