//! Brute-force reference computations that avoid the Smith lift entirely.
//!
//! Classes of `dis Λ_d` are found by scanning the grid `(1/g) Z^r ∩ [0,1)^r`
//! with `g = |d| det B` and keeping the points with `d B ρ ∈ Z^r`. Every
//! class has exactly one such point, since `[0,1)^r` is a fundamental domain
//! for `Λ = Z^r`.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::lattice::EvenLattice;
use crate::rational::{sign_pow, QmodZ, Rational};

/// `(numerators, grid)`: each class is `z / grid` with `z ∈ [0, grid)^r`.
pub fn dual_classes(l: &EvenLattice, d: i64, cap: u64) -> Result<(Vec<Vec<i64>>, i64)> {
    if d == 0 {
        return Err(Error::ZeroTwist);
    }
    let r = l.rank();
    let grid = d.abs().checked_mul(l.det()).ok_or(Error::Overflow("oracle grid"))?;
    let points = u64::try_from(grid)
        .ok()
        .and_then(|g| g.checked_pow(r as u32))
        .filter(|&p| p <= cap)
        .ok_or_else(|| Error::OrderOverflow { order: format!("{grid}^{r}"), cap })?;
    let gram = l.gram();
    let mut classes = Vec::new();
    let mut z = vec![0i64; r];
    for _ in 0..points {
        let dual = gram.iter().all(|row| {
            let s: i128 = row.iter().zip(&z).map(|(&b, &x)| i128::from(b) * i128::from(x)).sum();
            (s * i128::from(d)) % i128::from(grid) == 0
        });
        if dual {
            classes.push(z.clone());
        }
        for c in z.iter_mut() {
            *c += 1;
            if *c < grid {
                break;
            }
            *c = 0;
        }
    }
    let expected = l.discriminant_order(d).unwrap_or(0);
    if classes.len() as u128 != expected {
        return Err(Error::InternalMismatch(format!(
            "oracle found {} classes, expected {expected}",
            classes.len()
        )));
    }
    Ok((classes, grid))
}

pub fn qbar_values(l: &EvenLattice, d: i64, cap: u64) -> Result<Vec<QmodZ>> {
    let (classes, grid) = dual_classes(l, d, cap)?;
    let denom = BigInt::from(2) * BigInt::from(grid) * BigInt::from(grid);
    Ok(classes
        .iter()
        .map(|z| {
            let mut q: i128 = 0;
            for (i, row) in l.gram().iter().enumerate() {
                for (j, &b) in row.iter().enumerate() {
                    q += i128::from(z[i]) * i128::from(b) * i128::from(z[j]);
                }
            }
            QmodZ::new(Rational::new(BigInt::from(q) * BigInt::from(d), denom.clone()))
        })
        .collect())
}

/// `S(d) = Σ_ρ Q̄_d(ρ) mod Z`.
pub fn discriminant_sum(l: &EvenLattice, d: i64, cap: u64) -> Result<QmodZ> {
    Ok(qbar_values(l, d, cap)?.into_iter().sum())
}

/// `sign(d)^r Σ_ρ (1/2 − Q̄_d(ρ)) mod Z`, summed class by class.
pub fn eta(l: &EvenLattice, d: i64, cap: u64) -> Result<QmodZ> {
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let s = BigInt::from(sign_pow(d, l.rank()));
    Ok(qbar_values(l, d, cap)?
        .into_iter()
        .map(|q| QmodZ::new((&half - q.value()) * &s))
        .sum())
}
