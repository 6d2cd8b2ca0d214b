//! Reduced η-invariants in the adiabatic limit, the discriminant sums
//! `S(d) = Σ_{ρ ∈ dis Λ_d} Q̄_d(ρ)` and polynomial lifts of `d ↦ S(d)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{EvenLattice, SmithLift};
use crate::rational::{self, frac, int, is_integer, rat, sign_pow, QmodZ, Rational};

/// Range on which [`rank2_lift`] is certified.
pub const RANK2_CERTIFIED_RANGE: i64 = 12;

pub fn discriminant_sum(l: &EvenLattice, d: i64, cap: u64) -> Result<QmodZ> {
    Ok(SmithLift::new(l, d, cap)?.qbar_sum())
}

/// `sign(d)^r · (|dis Λ_d| / 2 − S(d)) mod Z`.
pub fn eta_adiabatic(l: &EvenLattice, d: i64, cap: u64) -> Result<QmodZ> {
    let lift = SmithLift::new(l, d, cap)?;
    let half_order = rat(1, 2) * BigInt::from(lift.order());
    let value = (half_order - lift.qbar_sum().into_value()) * BigInt::from(sign_pow(d, l.rank()));
    Ok(QmodZ::new(value))
}

/// `ζ(0, x) = 1/2 − x` for `0 < x ≤ 1`.
pub fn hurwitz_zeta_at_zero(x: &Rational) -> Result<Rational> {
    if *x <= Rational::zero() || *x > Rational::one() {
        return Err(Error::DomainError(format!("hurwitz zeta needs 0 < x <= 1, got {x}")));
    }
    Ok(rat(1, 2) - x)
}

/// `S(d) ≡ α d^{r+1} + β d^r + γ d^{r−1} (mod Z)` for `1 ≤ d ≤ certified_range`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolynomialLift {
    #[serde(skip)]
    pub rank: usize,
    #[serde(with = "rational::as_string")]
    pub alpha: Rational,
    #[serde(with = "rational::as_string")]
    pub beta: Rational,
    #[serde(with = "rational::as_string")]
    pub gamma: Rational,
    #[serde(rename = "certified_to")]
    pub certified_range: i64,
}

impl PolynomialLift {
    pub fn evaluate(&self, d: i64) -> Rational {
        let r = self.rank as u32;
        let d = BigInt::from(d);
        &self.alpha * d.pow(r + 1) + &self.beta * d.pow(r) + &self.gamma * d.pow(r - 1)
    }

    pub fn residue_at(&self, d: i64) -> QmodZ {
        QmodZ::new(self.evaluate(d))
    }

    pub fn residues(&self) -> (QmodZ, QmodZ, QmodZ) {
        (
            QmodZ::new(self.alpha.clone()),
            QmodZ::new(self.beta.clone()),
            QmodZ::new(self.gamma.clone()),
        )
    }

    /// `2β ∈ Z` and `12γ ∈ Z`.
    pub fn admissible(&self) -> bool {
        is_integer(&(&self.beta * BigInt::from(2))) && is_integer(&(&self.gamma * BigInt::from(12)))
    }

    /// `α + β + γ`; for rank ≥ 3 the lift collapses to `(α+β+γ) d^{r+1}`.
    pub fn collapsed_coefficient(&self) -> Rational {
        &self.alpha + &self.beta + &self.gamma
    }

    /// Checks the collapsed form against the lift on the certified range.
    pub fn collapse_holds(&self) -> bool {
        let c = self.collapsed_coefficient();
        (1..=self.certified_range).all(|d| {
            let top = &c * BigInt::from(d).pow(self.rank as u32 + 1);
            is_integer(&(top - self.evaluate(d)))
        })
    }
}

/// Exact value of `Σ_{ρ ∈ R_d} Q_d(ρ)` (not reduced) for `d > 0` on the Smith
/// lift of a rank-2 lattice, as the cubic `a3 d³ + a2 d² + a1 d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rank2ClosedForm {
    pub d1: i64,
    pub d2: i64,
    /// `Q(t_1), Q(t_2), B(t_1, t_2)` with `t_i = d d_i u_i`.
    pub q1: i64,
    pub q2: i64,
    pub b12: i64,
    pub a3: Rational,
    pub a2: Rational,
    pub a1: Rational,
}

impl Rank2ClosedForm {
    pub fn new(l: &EvenLattice) -> Result<Self> {
        if l.rank() != 2 {
            return Err(Error::RankMismatch { expected: 2, found: l.rank() });
        }
        let smith = l.smith();
        let (d1, d2) = (smith.diag[0], smith.diag[1]);
        let t1 = smith.t_column(0);
        let t2 = smith.t_column(1);
        let g = l.gram();
        let form = |x: &[i64], y: &[i64]| -> i64 {
            (0..2).map(|i| (0..2).map(|j| x[i] * g[i][j] * y[j]).sum::<i64>()).sum()
        };
        let q1 = form(&t1, &t1) / 2;
        let q2 = form(&t2, &t2) / 2;
        let b12 = form(&t1, &t2);
        let dd = d1 * d2;
        let a3 = rat(dd * (q1 + q2), 3) + rat(dd * b12, 4);
        let a2 = rat(d2 * q1 + d1 * q2, 2) + rat((d1 + d2) * b12, 4);
        let a1 = rat(d2 * q1, 6 * d1) + rat(d1 * q2, 6 * d2) + rat(b12, 4);
        Ok(Rank2ClosedForm { d1, d2, q1, q2, b12, a3, a2, a1 })
    }

    pub fn evaluate(&self, d: i64) -> Rational {
        let x = int(d);
        &self.a3 * &x * &x * &x + &self.a2 * &x * &x + &self.a1 * &x
    }

    /// Reduces the cubic to `α' d³ + (|dis Λ|/4) d` modulo Z using
    /// `d² ≡ d³ (mod 2)`, `d ≡ d³ (mod 6)` and `B(t_1,t_2) ≡ d_1 d_2 (mod 2)`.
    pub fn alpha_prime(&self) -> Result<Rational> {
        let (d1, d2, q1, q2, b12) = (self.d1, self.d2, self.q1, self.q2, self.b12);
        let disc = d1 * d2;
        let claim = |ok: bool, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(Error::InternalMismatch(format!("rank-2 reduction: {what}")))
            }
        };
        claim(((d1 + d2) * b12) % 2 == 0, "(d1 + d2) B(t1, t2) is odd")?;
        claim((d2 * q1) % d1 == 0 && (d1 * q2) % d2 == 0, "d1 d2 Q(d u_i) is not integral")?;
        claim((b12 - disc) % 2 == 0, "B(t1, t2) and |dis| differ in parity")?;
        let c2 = d2 * q1 + d1 * q2 + (d1 + d2) * b12 / 2;
        let e = d2 * q1 / d1 + d1 * q2 / d2;
        Ok(&self.a3 + rat(c2, 2) + rat(e, 6) + rat(b12 - disc, 4))
    }
}

/// Rank-2 lift `S(d) ≡ α' d³ + (|dis Λ|/4) d`, certified against enumeration
/// for `d = 1..=12`. In the general shape this is `(α, β, γ) = (α', 0, |dis Λ|/4)`
/// since `d = d^{r−1}`.
pub fn rank2_lift(l: &EvenLattice, cap: u64) -> Result<PolynomialLift> {
    let closed = Rank2ClosedForm::new(l)?;
    let alpha = closed.alpha_prime()?;
    if !is_integer(&(&alpha * BigInt::from(12))) {
        return Err(Error::InternalMismatch(format!("12 alpha' = {} is not integral", &alpha * BigInt::from(12))));
    }
    let lift = PolynomialLift {
        rank: 2,
        alpha,
        beta: Rational::zero(),
        gamma: rat(l.det(), 4),
        certified_range: RANK2_CERTIFIED_RANGE,
    };
    certify(l, &lift, cap)?;
    Ok(lift)
}

fn certify(l: &EvenLattice, lift: &PolynomialLift, cap: u64) -> Result<()> {
    for d in 1..=lift.certified_range {
        let enumerated = discriminant_sum(l, d, cap)?;
        let closed = lift.residue_at(d);
        if closed != enumerated {
            return Err(Error::CertificationFailure {
                d,
                closed: closed.to_string(),
                enumerated: enumerated.to_string(),
            });
        }
    }
    Ok(())
}

/// Fits residues `(α, β, γ)` with `2β ∈ Z`, `12γ ∈ Z` and `12 |dis Λ| α ∈ Z`
/// to `S(d)` for `d = 1..=d_max`.
///
/// Candidates are scanned in the order `β ∈ {0, 1/2}`, then `γ ∈ {0, 1/12, …}`;
/// `S(1) ≡ α + β + γ` fixes `α`. The first candidate matching the whole range
/// is returned.
pub fn general_lift(l: &EvenLattice, d_max: i64, cap: u64) -> Result<PolynomialLift> {
    if d_max < 6 {
        return Err(Error::DomainError(format!("general_lift needs d_max >= 6, got {d_max}")));
    }
    let sums = (1..=d_max)
        .map(|d| discriminant_sum(l, d, cap))
        .collect::<Result<Vec<_>>>()?;
    fit_lift(l.rank(), l.det(), &sums)
}

/// Fit on precomputed `S(1), …, S(D)`.
pub fn fit_lift(rank: usize, det: i64, sums: &[QmodZ]) -> Result<PolynomialLift> {
    let alpha_denominator = BigInt::from(12) * BigInt::from(det);
    let mut furthest_failure = 1i64;
    for beta_num in 0..2 {
        for gamma_num in 0..12 {
            let beta = rat(beta_num, 2);
            let gamma = rat(gamma_num, 12);
            let alpha = frac(&(sums[0].value() - &beta - &gamma));
            if !is_integer(&(&alpha * &alpha_denominator)) {
                continue;
            }
            let candidate = PolynomialLift {
                rank,
                alpha,
                beta,
                gamma,
                certified_range: sums.len() as i64,
            };
            let failure = (1..=sums.len() as i64).find(|&d| candidate.residue_at(d) != sums[d as usize - 1]);
            match failure {
                None => return Ok(candidate),
                Some(d) => furthest_failure = furthest_failure.max(d),
            }
        }
    }
    Err(Error::FitFailure { d: furthest_failure })
}

/// `|dis Λ_d| / 2 mod Z` and `d^{r+1} |dis Λ| / 2 mod Z`.
pub fn parity_identity_sides(l: &EvenLattice, d: i64) -> (QmodZ, QmodZ) {
    let order = BigInt::from(d.unsigned_abs()).pow(l.rank() as u32) * BigInt::from(l.det());
    let lhs = QmodZ::new(Rational::new(order, BigInt::from(2)));
    let rhs = QmodZ::new(Rational::new(
        BigInt::from(d).pow(l.rank() as u32 + 1) * BigInt::from(l.det()),
        BigInt::from(2),
    ));
    (lhs, rhs)
}

/// `sign(d)^{r+1} Σ_ρ (1/2 − Q̄_{|d|}(ρ)) mod Z`, the rewriting of the
/// η-invariant in terms of the positive twist.
pub fn eta_via_positive_twist(l: &EvenLattice, d: i64, cap: u64) -> Result<QmodZ> {
    let lift = SmithLift::new(l, d.abs(), cap)?;
    let half_order = rat(1, 2) * BigInt::from(lift.order());
    let s = sign_pow(d, l.rank() + 1);
    Ok(QmodZ::new((half_order - lift.qbar_sum().into_value()) * BigInt::from(s)))
}

/// Lowest common denominator of the three lift coefficients.
pub fn lift_denominator(lift: &PolynomialLift) -> BigInt {
    [&lift.alpha, &lift.beta, &lift.gamma]
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
