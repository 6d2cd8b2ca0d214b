use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rayon::prelude::*;

use super::field::{CycloRational, CyclotomicField};
use super::series::QSeries;
use crate::error::{Error, Result};
use crate::eta::{discriminant_sum, PolynomialLift};
use crate::lattice::EvenLattice;
use crate::rational::{int, rat, QmodZ, Rational};

/// `Σ_{d | n} (ζ^{−n/d} + sign · ζ^{n/d}) · weight(d)`.
pub fn twisted_divisor_sum(
    field: &Arc<CyclotomicField>,
    n: i64,
    sign: i64,
    weight: impl Fn(i64) -> Rational,
) -> CycloRational {
    let mut acc = CycloRational::zero(field);
    for d in (1..=n).filter(|d| n % d == 0) {
        let e = n / d;
        let mut pair = CycloRational::zeta_pow(field, -e);
        let other = CycloRational::zeta_pow(field, e);
        pair = if sign >= 0 { &pair + &other } else { &pair - &other };
        acc = &acc + &pair.scale(&weight(d));
    }
    acc
}

fn parity_sign(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

fn build(
    level: u32,
    order: usize,
    constant: Option<Rational>,
    coeff: impl Fn(&Arc<CyclotomicField>, i64) -> CycloRational + Sync,
) -> Result<QSeries> {
    let field = CyclotomicField::new(level)?;
    let coeffs = (1..=order as i64)
        .into_par_iter()
        .map(|n| coeff(&field, n))
        .collect();
    let constant = constant.map(|c| CycloRational::from_rational(&field, c));
    Ok(QSeries::new(&field, constant, coeffs))
}

/// Weight-`k` Eisenstein series for `Γ_1(N)` with coefficients
/// `a_n = −Σ_{d|n} (ζ^{−n/d} + (−1)^k ζ^{n/d}) d^{k−1}`. The constant term
/// is left unknown.
pub fn eisenstein_qexp(k: u32, level: u32, order: usize) -> Result<QSeries> {
    if k == 0 {
        return Err(Error::DomainError("Eisenstein weight must be >= 1".into()));
    }
    let sign = parity_sign(k);
    build(level, order, None, |f, n| {
        -&twisted_divisor_sum(f, n, sign, |d| Rational::from_integer(BigInt::from(d).pow(k - 1)))
    })
}

/// `S(1), …, S(max_d)` keyed by `d`.
pub fn discriminant_sums(l: &EvenLattice, max_d: i64, cap: u64) -> Result<BTreeMap<i64, QmodZ>> {
    (1..=max_d)
        .map(|d| Ok((d, discriminant_sum(l, d, cap)?)))
        .collect()
}

/// `a_n = −Σ_{d|n} (ζ^{−n/d} + (−1)^r ζ^{n/d}) · S(d)` with each `S(d)` lifted
/// to `[0, 1)`. Other lifts change `a_n` by algebraic integers.
pub fn f_invariant_series(
    l: &EvenLattice,
    d_sums: &BTreeMap<i64, QmodZ>,
    level: u32,
    order: usize,
) -> Result<QSeries> {
    if let Some(d) = (1..=order as i64).find(|d| !d_sums.contains_key(d)) {
        return Err(Error::MissingSum { d });
    }
    let sign = parity_sign(l.rank() as u32);
    build(level, order, Some(int(0)), |f, n| {
        -&twisted_divisor_sum(f, n, sign, |d| d_sums[&d].value().clone())
    })
}

pub fn f_invariant_series_for(l: &EvenLattice, level: u32, order: usize, cap: u64) -> Result<QSeries> {
    let sums = discriminant_sums(l, order as i64, cap)?;
    f_invariant_series(l, &sums, level, order)
}

/// `(1/4) Σ_{n≥1} (Σ_{d|n} (ζ^{−n/d} + ζ^{n/d}) d) q^n`, the f-invariant of ν².
pub fn nu_squared_series(level: u32, order: usize) -> Result<QSeries> {
    build(level, order, Some(int(0)), |f, n| {
        twisted_divisor_sum(f, n, 1, |d| rat(d, 4))
    })
}

/// `Σ_{n≥1} (Σ_{d|n} (ζ^{−n/d} + (−1)^r ζ^{n/d}) d^{r+1}) q^n`.
pub fn top_form_series(r: u32, level: u32, order: usize) -> Result<QSeries> {
    let sign = parity_sign(r);
    build(level, order, Some(int(0)), |f, n| {
        twisted_divisor_sum(f, n, sign, |d| Rational::from_integer(BigInt::from(d).pow(r + 1)))
    })
}

/// `Σ_{n≥1} (Σ_{d|n} (ζ^{−n/d} + (−1)^r ζ^{n/d}) P(d)) q^n` for the lift
/// polynomial `P(d) = α d^{r+1} + β d^r + γ d^{r−1}`.
pub fn lift_series(lift: &PolynomialLift, level: u32, order: usize) -> Result<QSeries> {
    let sign = parity_sign(lift.rank as u32);
    build(level, order, Some(int(0)), |f, n| {
        twisted_divisor_sum(f, n, sign, |d| lift.evaluate(d))
    })
}
