//! Spectra of the vertical Dirac operator squared and of the base-circle
//! operator, reported in units of 2π.
//!
//! The vertical eigenvalues depend on the gram eigenvalues `ν_k`, which are
//! only known numerically; labels `(n, s)` carry the exact combinatorics. The
//! base spectrum is exactly rational.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::eta::hurwitz_zeta_at_zero;
use crate::lattice::{EvenLattice, SmithLift};
use crate::rational::{format_rational, int, rat, sign_pow, QmodZ, Rational};

pub const JACOBI_MAX_SWEEPS: usize = 50;
pub const JACOBI_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramSpectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Off-diagonal Frobenius norm at termination.
    pub residual: f64,
    pub sweeps: usize,
}

/// Cyclic Jacobi rotations on a symmetric matrix. Stops once the
/// off-diagonal norm drops below `tol · ‖A‖_F`.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>, tol: f64, max_sweeps: usize) -> Result<GramSpectrum> {
    let n = a.len();
    let norm = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let off = |a: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i][j] * a[i][j];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    loop {
        let residual = off(&a);
        if residual <= tol * norm {
            let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
            eigenvalues.sort_by(|x, y| y.total_cmp(x));
            return Ok(GramSpectrum { eigenvalues, residual, sweeps });
        }
        if sweeps == max_sweeps {
            return Err(Error::ConvergenceFailure { sweeps });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = c * x - s * y;
                    row[q] = s * x + c * y;
                }
                for k in 0..n {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = c * x - s * y;
                    a[q][k] = s * x + c * y;
                }
            }
        }
    }
}

pub fn gram_eigenvalues(l: &EvenLattice) -> Result<GramSpectrum> {
    let a = l
        .gram()
        .iter()
        .map(|r| r.iter().map(|&x| x as f64).collect())
        .collect();
    jacobi_eigenvalues(a, JACOBI_TOLERANCE, JACOBI_MAX_SWEEPS)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorTag {
    VerticalSquared,
    Base,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpectralValue {
    Approx(f64),
    Exact(Rational),
}

impl SpectralValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            SpectralValue::Approx(x) => *x,
            SpectralValue::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
        }
    }

    fn cmp_value(&self, other: &Self) -> Ordering {
        match (self, other) {
            (SpectralValue::Exact(a), SpectralValue::Exact(b)) => a.cmp(b),
            _ => self.to_f64().total_cmp(&other.to_f64()),
        }
    }
}

impl Serialize for SpectralValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SpectralValue::Approx(x) => s.serialize_f64(*x),
            SpectralValue::Exact(q) => s.serialize_str(&format_rational(q)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(untagged)]
pub enum EntryLabel {
    /// Hermite levels `n` and chirality vector `s`; one copy per class in `R_d`.
    Vertical { n: Vec<u32>, s: Vec<i8> },
    /// Winding `k` and class index in `R_d`.
    Base { k: i64, class: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub value: SpectralValue,
    pub mult: u64,
    pub label: EntryLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub operator: OperatorTag,
    pub unit: &'static str,
    pub entries: Vec<SpectrumEntry>,
}

impl SpectrumReport {
    fn new(operator: OperatorTag, mut entries: Vec<SpectrumEntry>) -> Self {
        entries.sort_by(|a, b| a.value.cmp_value(&b.value).then_with(|| a.label.cmp(&b.label)));
        SpectrumReport { operator, unit: "2*pi", entries }
    }

    /// Total multiplicity of eigenvalues `≤ bound`.
    pub fn count_at_most(&self, bound: f64) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.value.to_f64() <= bound)
            .map(|e| e.mult)
            .sum()
    }
}

/// All `n ∈ N_0^r` with `Σ n_k ≤ cap`, lexicographic.
fn level_vectors(r: usize, cap: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..=cap {
        for mut rest in level_vectors(r - 1, cap - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn chirality_vectors(r: usize) -> Vec<Vec<i8>> {
    (0..1u32 << r)
        .map(|bits| (0..r).map(|k| if bits >> k & 1 == 1 { -1 } else { 1 }).collect())
        .collect()
}

/// `(ð^V)²/2π = Σ_k (2|d| ν_k n_k + |d| ν_k (1 − sign(d) s_k))`.
pub fn vertical_eigenvalue(nu: &[f64], d: i64, n: &[u32], s: &[i8]) -> f64 {
    let ad = d.unsigned_abs() as f64;
    let sd = d.signum() as f64;
    nu.iter()
        .zip(n)
        .zip(s)
        .map(|((&v, &nk), &sk)| 2.0 * ad * v * f64::from(nk) + ad * v * (1.0 - sd * f64::from(sk)))
        .sum()
}

pub fn vertical_spectrum(l: &EvenLattice, d: i64, n_cap: u32, cap: u64) -> Result<SpectrumReport> {
    let order = SmithLift::new(l, d, cap)?.order();
    let nu = gram_eigenvalues(l)?.eigenvalues;
    let r = l.rank();
    let chiralities = chirality_vectors(r);
    let mut entries = Vec::new();
    for n in level_vectors(r, n_cap) {
        for s in &chiralities {
            entries.push(SpectrumEntry {
                value: SpectralValue::Approx(vertical_eigenvalue(&nu, d, &n, s)),
                mult: order,
                label: EntryLabel::Vertical { n: n.clone(), s: s.clone() },
            });
        }
    }
    Ok(SpectrumReport::new(OperatorTag::VerticalSquared, entries))
}

fn is_zero_eigenvalue(x: f64, scale: f64) -> bool {
    x.abs() <= 1e-9 * scale.max(1.0)
}

/// Number of zero modes of `ð^V`, checked against `|d|^r det B`.
pub fn kernel_dimension(l: &EvenLattice, d: i64, cap: u64) -> Result<u64> {
    let report = vertical_spectrum(l, d, 0, cap)?;
    let scale = l.trace() as f64 * d.unsigned_abs() as f64;
    let count: u64 = report
        .entries
        .iter()
        .filter(|e| is_zero_eigenvalue(e.value.to_f64(), scale))
        .map(|e| e.mult)
        .sum();
    let expected = l.discriminant_order(d).unwrap_or(0);
    if u128::from(count) != expected {
        return Err(Error::InternalMismatch(format!(
            "kernel count {count} differs from |d|^r det B = {expected}"
        )));
    }
    Ok(count)
}

/// Labels of the zero modes of `(ð^V)²`.
pub fn kernel_labels(report: &SpectrumReport, scale: f64) -> Vec<&EntryLabel> {
    report
        .entries
        .iter()
        .filter(|e| is_zero_eigenvalue(e.value.to_f64(), scale))
        .map(|e| &e.label)
        .collect()
}

/// `spec(ð̄^B)/2π = { sign(d)^r (k + Q̄_d(ρ)) : k_min ≤ k ≤ k_max, ρ ∈ R_d }`
/// with `Q̄_d(ρ)` lifted to `[0, 1)`.
pub fn base_spectrum(l: &EvenLattice, d: i64, k_min: i64, k_max: i64, cap: u64) -> Result<SpectrumReport> {
    if k_min > k_max {
        return Err(Error::DomainError(format!("empty k range {k_min}:{k_max}")));
    }
    let lift = SmithLift::new(l, d, cap)?;
    let sign = BigInt::from(sign_pow(d, l.rank()));
    let values = lift.qbar_values();
    let mut entries = Vec::new();
    for k in k_min..=k_max {
        for (class, q) in values.iter().enumerate() {
            entries.push(SpectrumEntry {
                value: SpectralValue::Exact((int(k) + q.value()) * &sign),
                mult: 1,
                label: EntryLabel::Base { k, class: class as u64 },
            });
        }
    }
    Ok(SpectrumReport::new(OperatorTag::Base, entries))
}

/// `(η(ð̄^B) + dim ker ð̄^B) / 2 mod Z`, assembled class by class from the
/// spectrum `sign(d)^r (Z + x)`: for `0 < x < 1` the η-function at zero is
/// `±(ζ(0, x) − ζ(0, 1 − x))` with no kernel; for `x = 0` both half-lines
/// contribute `ζ(0, 1)` and cancel, leaving one zero mode.
pub fn base_eta_reduced(l: &EvenLattice, d: i64, cap: u64) -> Result<QmodZ> {
    let lift = SmithLift::new(l, d, cap)?;
    let sign = Rational::from_integer(BigInt::from(sign_pow(d, l.rank())));
    let one = int(1);
    let mut total = Rational::zero();
    for q in lift.qbar_values() {
        let x = q.value();
        let (eta, kernel) = if x.is_zero() {
            let positive = hurwitz_zeta_at_zero(&one)?;
            let negative = hurwitz_zeta_at_zero(&one)?;
            (&sign * (positive - negative), int(1))
        } else {
            let positive = hurwitz_zeta_at_zero(x)?;
            let negative = hurwitz_zeta_at_zero(&(&one - x))?;
            (&sign * (positive - negative), Rational::zero())
        };
        total += (eta + kernel) * rat(1, 2);
    }
    Ok(QmodZ::new(total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eta::eta_adiabatic;
    use crate::lattice::DEFAULT_ENUM_CAP as CAP;

    fn lat(g: Vec<Vec<i64>>) -> EvenLattice {
        EvenLattice::new(g).unwrap()
    }

    #[test]
    fn gram_eigenvalue_examples() {
        let s = gram_eigenvalues(&lat(vec![vec![2, 0], vec![0, 2]])).unwrap();
        assert_eq!(s.eigenvalues, vec![2.0, 2.0]);
        let s = gram_eigenvalues(&lat(vec![vec![2, 1], vec![1, 2]])).unwrap();
        assert!((s.eigenvalues[0] - 3.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-12);
        assert!((s.eigenvalues.iter().sum::<f64>() - 4.0).abs() < 1e-9);
    }

    #[test]
    fn gram_eigenvalues_trace_and_det() {
        let l = lat(vec![vec![4, 2, 0, 1], vec![2, 6, -2, 0], vec![0, -2, 4, 1], vec![1, 0, 1, 2]]);
        let s = gram_eigenvalues(&l).unwrap();
        assert!(s.eigenvalues.iter().all(|&v| v > 0.0));
        assert!((s.eigenvalues.iter().sum::<f64>() - l.trace() as f64).abs() < 1e-9);
        let prod: f64 = s.eigenvalues.iter().product();
        assert!((prod - l.det() as f64).abs() / (l.det() as f64) < 1e-9);
    }

    #[test]
    fn jacobi_gives_up_after_sweep_cap() {
        let a = vec![vec![1.0, 0.5], vec![0.5, 1.0]];
        assert_eq!(
            jacobi_eigenvalues(a, 0.0, 0).unwrap_err(),
            Error::ConvergenceFailure { sweeps: 0 }
        );
    }

    #[test]
    fn vertical_spectrum_a1() {
        let report = vertical_spectrum(&lat(vec![vec![2]]), 1, 2, CAP).unwrap();
        let values: Vec<f64> = report.entries.iter().map(|e| e.value.to_f64()).collect();
        assert_eq!(values, vec![0.0, 4.0, 4.0, 8.0, 8.0, 12.0]);
        assert!(report.entries.iter().all(|e| e.mult == 2));
    }

    #[test]
    fn kernel_dimension_examples() {
        assert_eq!(kernel_dimension(&lat(vec![vec![2]]), 1, CAP).unwrap(), 2);
        assert_eq!(kernel_dimension(&lat(vec![vec![2, 1], vec![1, 2]]), 2, CAP).unwrap(), 12);
        assert_eq!(kernel_dimension(&lat(vec![vec![2, 0], vec![0, 2]]), -1, CAP).unwrap(), 4);
    }

    #[test]
    fn kernel_has_aligned_chirality() {
        for d in [-2, -1, 1, 3] {
            let l = lat(vec![vec![2, 1], vec![1, 4]]);
            let report = vertical_spectrum(&l, d, 2, CAP).unwrap();
            let labels = kernel_labels(&report, 6.0 * d.abs() as f64);
            assert_eq!(labels.len(), 1);
            let sd: i8 = if d < 0 { -1 } else { 1 };
            assert_eq!(labels[0], &EntryLabel::Vertical { n: vec![0, 0], s: vec![sd, sd] });
            assert!(report.entries.iter().all(|e| e.value.to_f64() >= 0.0));
        }
    }

    #[test]
    fn vertical_values_rebuild_from_labels() {
        let l = lat(vec![vec![2, 1], vec![1, 2]]);
        let nu = gram_eigenvalues(&l).unwrap().eigenvalues;
        let report = vertical_spectrum(&l, -2, 3, CAP).unwrap();
        for e in &report.entries {
            let EntryLabel::Vertical { n, s } = &e.label else { panic!("wrong label") };
            let rebuilt: f64 = (0..2)
                .map(|k| 4.0 * nu[k] * f64::from(n[k]) + 2.0 * nu[k] * (1.0 + f64::from(s[k])))
                .sum();
            assert!((rebuilt - e.value.to_f64()).abs() < 1e-9);
        }
    }

    #[test]
    fn weyl_count_is_monotone() {
        let report = vertical_spectrum(&lat(vec![vec![2, 1], vec![1, 2]]), 1, 6, CAP).unwrap();
        let counts: Vec<u64> = (0..20).map(|b| report.count_at_most(f64::from(b))).collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]));
        assert!(counts[19] > counts[0]);
    }

    #[test]
    fn base_spectrum_examples() {
        let exact = |r: &SpectrumReport| -> Vec<Rational> {
            r.entries
                .iter()
                .map(|e| match &e.value {
                    SpectralValue::Exact(q) => q.clone(),
                    SpectralValue::Approx(_) => panic!("expected exact"),
                })
                .collect()
        };
        let a1 = lat(vec![vec![2]]);
        assert_eq!(exact(&base_spectrum(&a1, 1, 0, 0, CAP).unwrap()), vec![int(0), rat(1, 4)]);
        let a2 = lat(vec![vec![2, 1], vec![1, 2]]);
        assert_eq!(
            exact(&base_spectrum(&a2, 1, -1, 0, CAP).unwrap()),
            vec![int(-1), rat(-2, 3), rat(-2, 3), int(0), rat(1, 3), rat(1, 3)]
        );
        assert_eq!(exact(&base_spectrum(&a1, -1, 0, 0, CAP).unwrap()), vec![rat(-3, 4), int(0)]);
        assert!(base_spectrum(&a1, 1, 1, 0, CAP).is_err());
    }

    #[test]
    fn base_eta_examples() {
        assert_eq!(base_eta_reduced(&lat(vec![vec![2]]), 1, CAP).unwrap(), QmodZ::from_ratio(3, 4));
        assert_eq!(
            base_eta_reduced(&lat(vec![vec![2, 1], vec![1, 2]]), 1, CAP).unwrap(),
            QmodZ::from_ratio(5, 6)
        );
        assert_eq!(base_eta_reduced(&lat(vec![vec![2, 0], vec![0, 2]]), 1, CAP).unwrap(), QmodZ::zero());
    }

    #[test]
    fn base_eta_matches_adiabatic_eta() {
        for g in [vec![vec![2]], vec![vec![2, 1], vec![1, 4]], vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]] {
            let l = lat(g);
            for d in [-3, -2, -1, 1, 2, 3] {
                assert_eq!(base_eta_reduced(&l, d, CAP).unwrap(), eta_adiabatic(&l, d, CAP).unwrap());
            }
        }
    }
}
