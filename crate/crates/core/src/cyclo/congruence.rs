use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::series::QSeries;
use crate::error::{Error, Result};
use crate::linalg::{column_hermite, nullspace, solve_rational, RatMatrix};
use crate::rational::{lcm_denominators, Rational};

pub const TRUNCATION_CAVEAT: &str = "membership is certified only for coefficients up to the \
truncation order; it is a necessary condition for membership in the divided congruences";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CongruenceVerdict {
    pub member_up_to_order: bool,
    /// `λ_i` with `target − Σ λ_i basis_i` integral through the truncation order.
    pub combination: Vec<Rational>,
    pub residual: QSeries,
    pub constant_constrained: bool,
    pub caveat: String,
}

/// Sturm-style heuristic `⌈k N² / 12⌉` for a weight-`k` check at level `N`.
pub fn recommended_order(weight: u32, level: u32) -> usize {
    let num = u64::from(weight) * u64::from(level) * u64::from(level);
    num.div_ceil(12) as usize
}

/// Coordinates of a series as a flat rational vector: constant first (when
/// used), then `a_1, …, a_M` in the power basis.
fn flatten(s: &QSeries, with_constant: bool) -> Vec<Rational> {
    let mut out = Vec::new();
    if with_constant {
        out.extend(s.constant().expect("constant known").coords().iter().cloned());
    }
    for c in s.coeffs() {
        out.extend(c.coords().iter().cloned());
    }
    out
}

/// Decides whether rational `λ_i` exist with `target − Σ λ_i basis_i` having
/// algebraic-integer coefficients for `n ≤ order`.
///
/// With `t` the flattened target and `A` the flattened basis (columns), the
/// question is `t ∈ col_Q(A) + Z^K`. A rational left-kernel matrix `K`
/// (`K A = 0`) turns this into `K t ∈ K Z^K`; after clearing denominators
/// row-wise that is an integer system solved through a column Hermite form.
/// The constant term takes part only when every constant involved is known.
pub fn divided_congruence_member(target: &QSeries, basis: &[QSeries], order: usize) -> Result<CongruenceVerdict> {
    for b in basis {
        if b.level() != target.level() {
            return Err(Error::InconsistentLevels(target.level(), b.level()));
        }
        if b.order() != target.order() {
            return Err(Error::InconsistentOrders(target.order(), b.order()));
        }
    }
    if target.order() != order {
        return Err(Error::InconsistentOrders(target.order(), order));
    }
    let with_constant = target.constant().is_some() && basis.iter().all(|b| b.constant().is_some());
    let t = flatten(target, with_constant);
    let columns: Vec<Vec<Rational>> = basis.iter().map(|b| flatten(b, with_constant)).collect();
    let k = t.len();
    let m = columns.len();

    let not_member = || CongruenceVerdict {
        member_up_to_order: false,
        combination: vec![Rational::zero(); m],
        residual: target.clone(),
        constant_constrained: with_constant,
        caveat: TRUNCATION_CAVEAT.to_string(),
    };

    // Rows of `kernel` span {y : yᵀ A = 0}.
    let a_transpose: RatMatrix = columns.clone();
    let kernel = if m == 0 {
        (0..k)
            .map(|i| (0..k).map(|j| Rational::from_integer(BigInt::from(u8::from(i == j)))).collect())
            .collect()
    } else {
        nullspace(&a_transpose, k)
    };

    let integer_rows: Vec<Vec<BigInt>> = kernel
        .iter()
        .map(|row| {
            let den = lcm_denominators(row.iter());
            row.iter().map(|x| (x * &den).to_integer()).collect()
        })
        .collect();
    let mut rhs = Vec::with_capacity(integer_rows.len());
    for row in &integer_rows {
        let v: Rational = row.iter().zip(&t).map(|(c, x)| x * c).sum();
        if !v.denom().is_one() {
            return Ok(not_member());
        }
        rhs.push(v.to_integer());
    }
    let Some(z) = column_hermite(&integer_rows).solve(&rhs) else {
        return Ok(not_member());
    };

    let shifted: Vec<Rational> = t
        .iter()
        .zip(&z)
        .map(|(x, zi)| x - Rational::from_integer(zi.clone()))
        .collect();
    let a: RatMatrix = (0..k).map(|i| columns.iter().map(|c| c[i].clone()).collect()).collect();
    let lambda = if m == 0 {
        vec![]
    } else {
        solve_rational(&a, &shifted, m)
            .ok_or_else(|| Error::InternalMismatch("kernel test passed but system is inconsistent".into()))?
    };

    let mut residual = target.clone();
    for (b, l) in basis.iter().zip(&lambda) {
        residual = residual.sub(&b.scale(l))?;
    }
    if !with_constant {
        residual = residual.without_constant();
    }
    if !residual.is_integral() {
        return Err(Error::InternalMismatch("congruence residual is not integral".into()));
    }
    Ok(CongruenceVerdict {
        member_up_to_order: true,
        combination: lambda,
        residual,
        constant_constrained: with_constant,
        caveat: TRUNCATION_CAVEAT.to_string(),
    })
}
