use std::sync::Arc;

use serde_json::{json, Value};

use super::field::{CycloRational, CyclotomicField};
use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

/// `c + Σ_{n=1}^{M} a_n q^n` over `Q(ζ_N)`. A `None` constant term is unknown.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QSeries {
    field: Arc<CyclotomicField>,
    constant: Option<CycloRational>,
    coeffs: Vec<CycloRational>,
}

impl QSeries {
    pub fn new(
        field: &Arc<CyclotomicField>,
        constant: Option<CycloRational>,
        coeffs: Vec<CycloRational>,
    ) -> Self {
        QSeries { field: field.clone(), constant, coeffs }
    }

    pub fn zero(field: &Arc<CyclotomicField>, order: usize) -> Self {
        QSeries {
            field: field.clone(),
            constant: Some(CycloRational::zero(field)),
            coeffs: vec![CycloRational::zero(field); order],
        }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn level(&self) -> u32 {
        self.field.level()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn constant(&self) -> Option<&CycloRational> {
        self.constant.as_ref()
    }

    /// `a_n` for `1 ≤ n ≤ M`.
    pub fn coeff(&self, n: usize) -> &CycloRational {
        &self.coeffs[n - 1]
    }

    pub fn coeffs(&self) -> &[CycloRational] {
        &self.coeffs
    }

    pub fn with_constant(mut self, constant: Option<CycloRational>) -> Self {
        self.constant = constant;
        self
    }

    /// Drops the constant term (marks it unknown).
    pub fn without_constant(self) -> Self {
        self.with_constant(None)
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries {
            field: self.field.clone(),
            constant: self.constant.clone(),
            coeffs: self.coeffs[..order.min(self.order())].to_vec(),
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.level() != other.level() {
            return Err(Error::InconsistentLevels(self.level(), other.level()));
        }
        if self.order() != other.order() {
            return Err(Error::InconsistentOrders(self.order(), other.order()));
        }
        Ok(())
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&CycloRational, &CycloRational) -> CycloRational,
    ) -> Result<Self> {
        self.check_compatible(other)?;
        let constant = match (&self.constant, &other.constant) {
            (Some(a), Some(b)) => Some(f(a, b)),
            _ => None,
        };
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| f(a, b)).collect();
        Ok(QSeries { field: self.field.clone(), constant, coeffs })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn neg(&self) -> Self {
        self.scale(&Rational::from_integer((-1).into()))
    }

    pub fn scale(&self, q: &Rational) -> Self {
        QSeries {
            field: self.field.clone(),
            constant: self.constant.as_ref().map(|c| c.scale(q)),
            coeffs: self.coeffs.iter().map(|c| c.scale(q)).collect(),
        }
    }

    pub fn mul_scalar(&self, x: &CycloRational) -> Self {
        QSeries {
            field: self.field.clone(),
            constant: self.constant.as_ref().map(|c| c * x),
            coeffs: self.coeffs.iter().map(|c| c * x).collect(),
        }
    }

    /// Truncated product; both constant terms must be known.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (Some(c0), Some(d0)) = (&self.constant, &other.constant) else {
            return Err(Error::UnknownConstant);
        };
        let m = self.order();
        let at = |s: &Self, c: &CycloRational, n: usize| -> CycloRational {
            if n == 0 {
                c.clone()
            } else {
                s.coeffs[n - 1].clone()
            }
        };
        let coeffs = (1..=m)
            .map(|n| {
                (0..=n).fold(CycloRational::zero(&self.field), |acc, i| {
                    &acc + &(&at(self, c0, i) * &at(other, d0, n - i))
                })
            })
            .collect();
        Ok(QSeries { field: self.field.clone(), constant: Some(c0 * d0), coeffs })
    }

    pub fn galois(&self, a: i64) -> Self {
        QSeries {
            field: self.field.clone(),
            constant: self.constant.as_ref().map(|c| c.galois(a)),
            coeffs: self.coeffs.iter().map(|c| c.galois(a)).collect(),
        }
    }

    /// All known coefficients (including a known constant) are algebraic integers.
    pub fn is_integral(&self) -> bool {
        self.constant.as_ref().is_none_or(CycloRational::is_algebraic_integer)
            && self.coeffs.iter().all(CycloRational::is_algebraic_integer)
    }

    /// Indices `n ≥ 1` whose coefficient is not an algebraic integer.
    pub fn non_integral_indices(&self) -> Vec<usize> {
        (1..=self.order())
            .filter(|&n| !self.coeff(n).is_algebraic_integer())
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let constant = match &self.constant {
            Some(c) => json!(c.to_strings()),
            None => json!("UNKNOWN"),
        };
        json!({
            "N": self.level(),
            "order": self.order(),
            "constant": constant,
            "coeffs": self.coeffs.iter().map(CycloRational::to_strings).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("series: {what}"));
        let level = v["N"].as_u64().ok_or_else(|| bad("missing N"))?;
        let order = v["order"].as_u64().ok_or_else(|| bad("missing order"))? as usize;
        let field = CyclotomicField::new(u32::try_from(level).map_err(|_| bad("N too large"))?)?;
        let element = |x: &Value| -> Result<CycloRational> {
            let coords = x
                .as_array()
                .ok_or_else(|| bad("coefficient is not an array"))?
                .iter()
                .map(|s| parse_rational(s.as_str().ok_or_else(|| bad("coordinate is not a string"))?))
                .collect::<Result<Vec<_>>>()?;
            CycloRational::from_coords(&field, coords)
        };
        let constant = match &v["constant"] {
            Value::String(s) if s == "UNKNOWN" => None,
            other => Some(element(other)?),
        };
        let coeffs = v["coeffs"]
            .as_array()
            .ok_or_else(|| bad("missing coeffs"))?
            .iter()
            .map(element)
            .collect::<Result<Vec<_>>>()?;
        if coeffs.len() != order {
            return Err(bad("coefficient count differs from order"));
        }
        Ok(QSeries { field, constant, coeffs })
    }
}
