use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg};

use serde::{Deserialize, Serialize};

/// Integer Laurent polynomial in `A`, stored as exponent → nonzero coefficient.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentPoly {
    terms: BTreeMap<i32, i64>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn monomial(coeff: i64, exp: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(coeff, exp);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, i64)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, coeff: i64, exp: i32) {
        if coeff == 0 {
            return;
        }
        let c = self.terms.entry(exp).or_insert(0);
        *c += coeff;
        if *c == 0 {
            self.terms.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.terms.get(&exp).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Substitutes `A → A⁻¹`.
    pub fn mirror(&self) -> Self {
        Self::from_terms(self.terms().map(|(e, c)| (-e, c)))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in o.terms() {
            out.add_term(c, e);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.terms() {
            for (e2, c2) in o.terms() {
                out.add_term(c1 * c2, e1 + e2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly::from_terms(self.terms().map(|(e, c)| (e, -c)))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let (e, c) = (*e, *c);
            let sign = if c < 0 {
                "-"
            } else if k > 0 {
                "+"
            } else {
                ""
            };
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(sign)?;
            if k > 0 {
                f.write_str(" ")?;
            }
            let mag = c.abs();
            match (mag, e) {
                (_, 0) => write!(f, "{mag}")?,
                (1, 1) => f.write_str("A")?,
                (1, _) => write!(f, "A^{e}")?,
                (_, 1) => write!(f, "{mag}A")?,
                _ => write!(f, "{mag}A^{e}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_drops_terms() {
        let p = LaurentPoly::from_terms([(2, 3), (2, -3), (0, 1)]);
        assert_eq!(p, LaurentPoly::one());
        assert_eq!(p.terms().count(), 1);
    }

    #[test]
    fn product_and_mirror() {
        // (A + A^-1)^2 = A^2 + 2 + A^-2
        let p = LaurentPoly::from_terms([(1, 1), (-1, 1)]);
        let sq = p.pow(2);
        assert_eq!(sq, LaurentPoly::from_terms([(2, 1), (0, 2), (-2, 1)]));
        assert_eq!(sq.mirror(), sq);
        let q = LaurentPoly::from_terms([(3, -1)]);
        assert_eq!(q.mirror().coeff(-3), -1);
    }

    #[test]
    fn display() {
        let p = LaurentPoly::from_terms([(-16, -1), (-12, 1), (-4, 1)]);
        assert_eq!(p.to_string(), "A^-4 + A^-12 - A^-16");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(
            LaurentPoly::from_terms([(1, 2), (0, -1)]).to_string(),
            "2A - 1"
        );
    }

    #[test]
    fn serializes_as_object() {
        let p = LaurentPoly::from_terms([(3, -1)]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"3":-1}"#);
    }
}
