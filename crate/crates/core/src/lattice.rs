//! Even positive-definite lattices, their rescalings `Λ_d` and discriminant
//! forms `(dis Λ_d, Q̄_d)`.
//!
//! Lattice vectors are coordinate vectors in the basis that defines the gram
//! matrix. Dual vectors have rational coordinates in the same basis.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, RatMatrix, SmithDecomposition};
use crate::rational::{QmodZ, Rational};

pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvenLattice {
    gram: IntMatrix,
    det: i64,
    smith: SmithDecomposition,
}

/// Checks symmetry, even diagonal and positive definiteness, in that order.
/// Indices in errors are 1-based.
pub fn validate_even_lattice(gram: &IntMatrix) -> Result<EvenLattice> {
    let n = gram.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    for (row, r) in gram.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare { row: row + 1, len: r.len(), expected: n });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if gram[i][j] != gram[j][i] {
                return Err(Error::NotSymmetric { i: i + 1, j: j + 1, a: gram[i][j], b: gram[j][i] });
            }
        }
    }
    for (i, row) in gram.iter().enumerate() {
        if row[i] % 2 != 0 {
            return Err(Error::NotEvenDiagonal { index: i + 1, value: row[i] });
        }
    }
    let minors = linalg::leading_minors(gram);
    if let Some((k, m)) = minors.iter().enumerate().find(|(_, m)| !m.is_positive()) {
        return Err(Error::NotPositiveDefinite { size: k + 1, value: m.to_string() });
    }
    let det = linalg::to_i64(&minors[n - 1], "determinant")?;
    let smith = linalg::smith_normal_form(gram)?;
    Ok(EvenLattice { gram: gram.clone(), det, smith })
}

impl EvenLattice {
    pub fn new(gram: IntMatrix) -> Result<Self> {
        validate_even_lattice(&gram)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    /// `det(B) = |dis Λ|` (positive).
    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn smith(&self) -> &SmithDecomposition {
        &self.smith
    }

    pub fn trace(&self) -> i64 {
        (0..self.rank()).map(|i| self.gram[i][i]).sum()
    }

    pub fn bilinear(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if self.gram[i][j] != 0 {
                    acc += xi * yj * BigInt::from(self.gram[i][j]);
                }
            }
        }
        acc
    }

    /// `Q(x) = B(x, x) / 2`.
    pub fn quadratic(&self, x: &[Rational]) -> Rational {
        self.bilinear(x, x) / BigInt::from(2)
    }

    pub fn rescale(&self, d: i64) -> Result<RescaledLattice> {
        if d == 0 {
            return Err(Error::ZeroTwist);
        }
        let gram_d = self
            .gram
            .iter()
            .map(|r| r.iter().map(|&x| x.checked_mul(d).ok_or(Error::Overflow("rescaling"))).collect())
            .collect::<Result<IntMatrix>>()?;
        Ok(RescaledLattice { base: self.clone(), twist: d, gram_d })
    }

    /// `|dis Λ_d| = |d|^r · det B`, or `None` on overflow.
    pub fn discriminant_order(&self, d: i64) -> Option<u128> {
        let mut order = u128::try_from(self.det).ok()?;
        for _ in 0..self.rank() {
            order = order.checked_mul(u128::from(d.unsigned_abs()))?;
        }
        Some(order)
    }
}

/// `Λ_d`: the same module with form `d · B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RescaledLattice {
    pub base: EvenLattice,
    pub twist: i64,
    pub gram_d: IntMatrix,
}

pub fn dual_gram_inverse(l: &EvenLattice) -> RatMatrix {
    linalg::inverse(&l.gram).expect("validated lattice is nonsingular")
}

/// The lift `R_d = { Σ k_i u_i : 1 ≤ k_i ≤ |d d_i| }` of `dis Λ_d`, where
/// `u_i = t_i / (|d| d_i)` and `t_i` is column `i` of the Smith matrix `T`.
/// The `t_i` form a basis of `Λ` and the `u_i` a basis of `(Λ_d)^∨`.
#[derive(Debug, Clone)]
pub struct SmithLift {
    twist: i64,
    moduli: Vec<u64>,
    basis: Vec<Vec<i64>>,
    exponent: u64,
    order: u64,
    gram: IntMatrix,
}

impl SmithLift {
    pub fn new(l: &EvenLattice, d: i64, cap: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::ZeroTwist);
        }
        let order = l
            .discriminant_order(d)
            .ok_or(Error::OrderOverflow { order: "overflow".into(), cap })?;
        if order > u128::from(cap) {
            return Err(Error::OrderOverflow { order: order.to_string(), cap });
        }
        let smith = l.smith();
        let moduli: Vec<u64> = smith
            .diag
            .iter()
            .map(|&di| d.unsigned_abs() * di.unsigned_abs())
            .collect();
        let basis = (0..l.rank()).map(|i| smith.t_column(i)).collect();
        let exponent = *moduli.last().expect("rank >= 1");
        Ok(SmithLift {
            twist: d,
            moduli,
            basis,
            exponent,
            order: order as u64,
            gram: l.gram.clone(),
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    /// Invariant factors of `dis Λ_d` (the `|d d_i|` exceeding one).
    pub fn invariant_factors(&self) -> Vec<u64> {
        self.moduli.iter().copied().filter(|&m| m > 1).collect()
    }

    /// Coefficients `k_i ∈ 1..=|d d_i|` of the `index`-th class.
    pub fn coefficients(&self, mut index: u64) -> Vec<u64> {
        self.moduli
            .iter()
            .map(|&m| {
                let k = index % m + 1;
                index /= m;
                k
            })
            .collect()
    }

    pub fn representative(&self, index: u64) -> Vec<Rational> {
        let r = self.basis.len();
        let mut rho = vec![Rational::zero(); r];
        for (i, k) in self.coefficients(index).into_iter().enumerate() {
            let coeff = Rational::new(BigInt::from(k), BigInt::from(self.moduli[i]));
            for (c, &t) in rho.iter_mut().zip(&self.basis[i]) {
                *c += &coeff * BigInt::from(t);
            }
        }
        rho
    }

    /// `2 L² · Q_d(ρ)` reduced modulo `2 L²`, with `L` the exponent of the group.
    fn qbar_numerator(&self, index: u64) -> i128 {
        let l = i128::from(self.exponent);
        let r = self.basis.len();
        let mut w = vec![0i128; r];
        for (i, k) in self.coefficients(index).into_iter().enumerate() {
            let scale = i128::from(k) * (l / i128::from(self.moduli[i]));
            for (c, &t) in w.iter_mut().zip(&self.basis[i]) {
                *c += scale * i128::from(t);
            }
        }
        let modulus = 2 * l * l;
        let mut acc = 0i128;
        for i in 0..r {
            let mut row = 0i128;
            for j in 0..r {
                row += i128::from(self.gram[i][j]) * w[j];
            }
            acc = (acc + (w[i] % modulus) * (row % modulus)) % modulus;
        }
        (acc * i128::from(self.twist)).rem_euclid(modulus)
    }

    fn numerator_modulus(&self) -> i128 {
        let l = i128::from(self.exponent);
        2 * l * l
    }

    pub fn qbar(&self, index: u64) -> QmodZ {
        QmodZ::new(Rational::new(
            BigInt::from(self.qbar_numerator(index)),
            BigInt::from(self.numerator_modulus()),
        ))
    }

    /// `Σ_ρ Q̄_d(ρ)` over all classes, summed exactly in parallel.
    pub fn qbar_sum(&self) -> QmodZ {
        let modulus = self.numerator_modulus();
        let total = (0..self.order)
            .into_par_iter()
            .map(|i| self.qbar_numerator(i))
            .reduce(|| 0, |a, b| (a + b) % modulus);
        QmodZ::new(Rational::new(BigInt::from(total), BigInt::from(modulus)))
    }

    /// All `Q̄_d` values in class-index order.
    pub fn qbar_values(&self) -> Vec<QmodZ> {
        (0..self.order).into_par_iter().map(|i| self.qbar(i)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiscriminantGroup {
    pub twist: i64,
    pub order: u64,
    pub invariant_factors: Vec<u64>,
    #[serde(serialize_with = "serialize_vectors")]
    pub representatives: Vec<Vec<Rational>>,
    pub qbar: Vec<QmodZ>,
}

fn serialize_vectors<S: serde::Serializer>(
    v: &[Vec<Rational>],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        let strs: Vec<String> = row.iter().map(crate::rational::format_rational).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

impl DiscriminantGroup {
    pub fn representatives_json(&self) -> Vec<Vec<String>> {
        self.representatives
            .iter()
            .map(|row| row.iter().map(crate::rational::format_rational).collect())
            .collect()
    }
}

pub fn discriminant_group(l: &EvenLattice, d: i64, cap: u64) -> Result<DiscriminantGroup> {
    let lift = SmithLift::new(l, d, cap)?;
    let representatives = (0..lift.order()).map(|i| lift.representative(i)).collect();
    Ok(DiscriminantGroup {
        twist: d,
        order: lift.order(),
        invariant_factors: lift.invariant_factors(),
        representatives,
        qbar: lift.qbar_values(),
    })
}

/// True when `d · B · ρ` is an integer vector, i.e. `ρ ∈ (Λ_d)^∨`.
pub fn in_dual(l: &EvenLattice, d: i64, rho: &[Rational]) -> bool {
    l.gram.iter().all(|row| {
        let v: Rational = row
            .iter()
            .zip(rho)
            .map(|(&b, x)| x * BigInt::from(b))
            .sum::<Rational>()
            * BigInt::from(d);
        v.is_integer()
    })
}

/// `Q̄_d(ρ) = d · Q(ρ) mod Z`.
pub fn qbar(l: &EvenLattice, d: i64, rho: &[Rational]) -> Result<QmodZ> {
    if rho.len() != l.rank() {
        return Err(Error::RankMismatch { expected: l.rank(), found: rho.len() });
    }
    if !in_dual(l, d, rho) {
        return Err(Error::NotInDual { d });
    }
    Ok(QmodZ::new(l.quadratic(rho) * BigInt::from(d)))
}

/// `Σ_ρ exp(2πi Q̄(ρ))` over `dis Λ` as `(re, im)`.
pub fn gauss_milgram_sum(l: &EvenLattice, cap: u64) -> Result<(f64, f64)> {
    let lift = SmithLift::new(l, 1, cap)?;
    let (mut re, mut im) = (0.0, 0.0);
    for q in lift.qbar_values() {
        let x = q.value().to_f64().unwrap_or(0.0) * std::f64::consts::TAU;
        re += x.cos();
        im += x.sin();
    }
    Ok((re, im))
}

/// `|Σ e^{2πi Q̄}|²` and the argument of the sum in turns, in `[0, 1)`.
pub fn gauss_milgram_invariants(l: &EvenLattice, cap: u64) -> Result<(f64, f64)> {
    let (re, im) = gauss_milgram_sum(l, cap)?;
    let phase = (im.atan2(re) / std::f64::consts::TAU).rem_euclid(1.0);
    Ok((re * re + im * im, phase))
}
