use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{format_rational, is_integer, Rational};

pub fn euler_phi(n: u32) -> usize {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count()
}

/// `Φ_N` as integer coefficients, constant term first, from
/// `(x^N − 1) / Π_{m | N, m < N} Φ_m`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for m in (1..n).filter(|m| n % m == 0) {
        num = divide_monic(&num, &cyclotomic_polynomial(m));
    }
    num
}

fn divide_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        for (j, &b) in den.iter().enumerate() {
            rem[i + j] -= c * b;
        }
    }
    debug_assert!(rem.iter().all(|&x| x == 0), "cyclotomic division left a remainder");
    quot
}

/// `Q(ζ_N) = Q[x] / Φ_N` with the power basis `1, ζ, …, ζ^{φ(N)−1}`.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    level: u32,
    modulus: Vec<i64>,
    /// `x^j mod Φ_N` for `0 ≤ j < N`.
    powers: Vec<Vec<i64>>,
}

impl CyclotomicField {
    pub fn new(level: u32) -> Result<Arc<Self>> {
        if level < 2 {
            return Err(Error::DomainError(format!("level must be >= 2, got {level}")));
        }
        let modulus = cyclotomic_polynomial(level);
        let deg = modulus.len() - 1;
        let mut powers = Vec::with_capacity(level as usize);
        let mut cur = vec![0i64; deg];
        cur[0] = 1;
        for _ in 0..level {
            powers.push(cur.clone());
            // multiply by x and reduce with the monic modulus
            let top = cur[deg - 1];
            for j in (1..deg).rev() {
                cur[j] = cur[j - 1] - top * modulus[j];
            }
            cur[0] = -top * modulus[0];
        }
        Ok(Arc::new(CyclotomicField { level, modulus, powers }))
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    fn power_coords(&self, k: i64) -> &[i64] {
        &self.powers[k.rem_euclid(i64::from(self.level)) as usize]
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct CycloRational {
    field: Arc<CyclotomicField>,
    coords: Vec<Rational>,
}

impl CycloRational {
    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        CycloRational { field: field.clone(), coords: vec![Rational::zero(); field.degree()] }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: Rational) -> Self {
        let mut x = Self::zero(field);
        x.coords[0] = q;
        x
    }

    pub fn from_coords(field: &Arc<CyclotomicField>, coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::Parse(format!(
                "expected {} coordinates at level {}, got {}",
                field.degree(),
                field.level(),
                coords.len()
            )));
        }
        Ok(CycloRational { field: field.clone(), coords })
    }

    /// `ζ_N^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let coords = field
            .power_coords(k)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        CycloRational { field: field.clone(), coords }
    }

    /// Reduces a polynomial in `ζ` (constant term first) modulo `Φ_N`.
    pub fn from_poly(field: &Arc<CyclotomicField>, poly: &[Rational]) -> Self {
        let mut out = Self::zero(field);
        for (j, c) in poly.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.coords.iter_mut().zip(field.power_coords(j as i64)) {
                if p != 0 {
                    *o += c * BigInt::from(p);
                }
            }
        }
        out
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// The power basis is an integral basis, so this is integrality over Z.
    pub fn is_algebraic_integer(&self) -> bool {
        self.coords.iter().all(is_integer)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloRational {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    /// Image under `ζ ↦ ζ^a`; an automorphism when `gcd(a, N) = 1`.
    pub fn galois(&self, a: i64) -> Self {
        let mut out = Self::zero(&self.field);
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, &p) in out.coords.iter_mut().zip(self.field.power_coords(a * j as i64)) {
                if p != 0 {
                    *o += c * BigInt::from(p);
                }
            }
        }
        out
    }

    /// Multiplicative inverse by the extended Euclidean algorithm in `Q[x]`.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let modulus: Vec<Rational> = self
            .field
            .modulus
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        // invariant: s_i · self ≡ r_i (mod Φ_N)
        let (mut r0, mut r1) = (modulus, trim(self.coords.clone()));
        let (mut s0, mut s1) = (vec![], vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Φ_N is irreducible.
        let c = r1.first()?.recip();
        let s: Vec<Rational> = s1.iter().map(|x| x * &c).collect();
        Some(Self::from_poly(&self.field, &s))
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.coords.iter().map(format_rational).collect()
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let zero = Rational::zero();
    trim(
        (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect(),
    )
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = trim(a.to_vec());
    let b = trim(b.to_vec());
    let lead = b.last().expect("nonzero divisor").recip();
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let mut quot = vec![Rational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let c = rem.last().expect("nonempty") * &lead;
        for (j, y) in b.iter().enumerate() {
            rem[shift + j] -= &c * y;
        }
        quot[shift] = c;
        rem.pop();
        rem = trim(rem);
    }
    (trim(quot), rem)
}

fn same_field(a: &CycloRational, b: &CycloRational) {
    assert_eq!(a.level(), b.level(), "mixing cyclotomic levels");
}

impl<'a> Add<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn add(self, rhs: &CycloRational) -> CycloRational {
        same_field(self, rhs);
        CycloRational {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn sub(self, rhs: &CycloRational) -> CycloRational {
        same_field(self, rhs);
        CycloRational {
            field: self.field.clone(),
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a - b).collect(),
        }
    }
}

impl<'a> Mul<&'a CycloRational> for &'a CycloRational {
    type Output = CycloRational;
    fn mul(self, rhs: &CycloRational) -> CycloRational {
        same_field(self, rhs);
        let n = self.coords.len();
        let mut prod = vec![Rational::zero(); 2 * n - 1];
        for (i, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        CycloRational::from_poly(&self.field, &prod)
    }
}

impl Neg for &CycloRational {
    type Output = CycloRational;
    fn neg(self) -> CycloRational {
        CycloRational { field: self.field.clone(), coords: self.coords.iter().map(|c| -c).collect() }
    }
}

impl fmt::Debug for CycloRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(ζ_{})[{}]", self.level(), self.to_strings().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    #[test]
    fn cyclotomic_polynomial_examples() {
        assert_eq!(cyclotomic_polynomial(3), vec![1, 1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_polynomial(2), vec![1, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        for n in 2..40 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n));
        }
    }

    #[test]
    fn level_one_rejected() {
        assert!(CyclotomicField::new(1).is_err());
    }

    #[test]
    fn minimal_polynomial_laws() {
        for n in [2u32, 3, 4, 5, 6, 7, 8, 9, 12, 15] {
            let f = CyclotomicField::new(n).unwrap();
            let zeta = CycloRational::zeta_pow(&f, 1);
            let mut power = CycloRational::from_rational(&f, int(1));
            for _ in 0..n {
                power = &power * &zeta;
            }
            assert_eq!(power, CycloRational::from_rational(&f, int(1)), "ζ^N = 1 at N = {n}");
            let phi: Vec<Rational> = cyclotomic_polynomial(n).into_iter().map(int).collect();
            let mut value = CycloRational::zero(&f);
            for (j, c) in phi.iter().enumerate() {
                value = &value + &CycloRational::zeta_pow(&f, j as i64).scale(c);
            }
            assert!(value.is_zero(), "Φ_N(ζ) = 0 at N = {n}");
        }
    }

    #[test]
    fn zeta_three_identity() {
        let f = CyclotomicField::new(3).unwrap();
        let s = &CycloRational::zeta_pow(&f, 1) + &CycloRational::zeta_pow(&f, -1);
        assert_eq!(s, CycloRational::from_rational(&f, int(-1)));
    }

    #[test]
    fn inverse_examples() {
        let f = CyclotomicField::new(5).unwrap();
        let x = &CycloRational::zeta_pow(&f, 1) + &CycloRational::from_rational(&f, rat(1, 2));
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, CycloRational::from_rational(&f, int(1)));
        assert!(CycloRational::zero(&f).inverse().is_none());
    }

    fn element(level: u32) -> impl Strategy<Value = CycloRational> {
        let f = CyclotomicField::new(level).unwrap();
        let deg = f.degree();
        prop::collection::vec((-20i64..20, 1i64..6), deg).prop_map(move |v| {
            let coords = v.into_iter().map(|(p, q)| rat(p, q)).collect();
            CycloRational::from_coords(&f, coords).unwrap()
        })
    }

    proptest! {
        #[test]
        fn ring_laws(
            (a, b, c) in prop::sample::select(vec![3u32, 4, 5, 7, 12])
                .prop_flat_map(|n| (element(n), element(n), element(n)))
        ) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if let Some(inv) = a.inverse() {
                prop_assert_eq!(&a * &inv, CycloRational::from_rational(a.field(), int(1)));
            }
        }

        #[test]
        fn galois_is_multiplicative(a in element(7), b in element(7), k in 1i64..7) {
            prop_assert_eq!((&a * &b).galois(k), &a.galois(k) * &b.galois(k));
            prop_assert_eq!((&a + &b).galois(k), &a.galois(k) + &b.galois(k));
        }
    }
}
