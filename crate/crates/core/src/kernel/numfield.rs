//! Elements of a number field `Q[y]/(h)` in the power basis of a monic
//! integral defining polynomial `h`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::IntPolynomial;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberField {
    poly: IntPolynomial,
}

impl NumberField {
    /// `poly` must be monic of degree at least one.
    pub fn new(poly: IntPolynomial) -> Result<Arc<Self>> {
        match poly.degree() {
            Some(d) if d >= 1 && poly.leading().is_one() => Ok(Arc::new(NumberField { poly })),
            _ => Err(Error::invalid(format!(
                "defining polynomial {poly} is not monic of positive degree"
            ))),
        }
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().expect("nonzero")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NumberFieldElement {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl NumberFieldElement {
    pub fn new(field: Arc<NumberField>, coords: Vec<BigRational>) -> Result<Self> {
        if coords.len() != field.degree() {
            return Err(Error::invalid(format!(
                "{} coordinates for a degree-{} field",
                coords.len(),
                field.degree()
            )));
        }
        Ok(NumberFieldElement { field, coords })
    }

    pub fn from_rational(field: Arc<NumberField>, r: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree()];
        coords[0] = r;
        NumberFieldElement { field, coords }
    }

    pub fn from_int(field: Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    /// The class of `y`.
    pub fn generator(field: Arc<NumberField>) -> Self {
        let coords = IntPolynomial::x()
            .coeffs()
            .iter()
            .cloned()
            .map(BigRational::from_integer)
            .collect();
        reduce(field, coords)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords.iter().skip(1).all(Zero::is_zero)
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::from_int(self.field.clone(), 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// `p(self)` computed in the field.
    pub fn eval_poly(&self, p: &IntPolynomial) -> Self {
        let zero = Self::from_int(self.field.clone(), 0);
        p.coeffs().iter().rev().fold(zero, |acc, c| {
            &(&acc * self)
                + &Self::from_rational(self.field.clone(), BigRational::from_integer(c.clone()))
        })
    }

    /// Matrix of multiplication by `self`; column `j` holds `self * y^j`.
    pub fn multiplication_matrix(&self) -> Vec<Vec<BigRational>> {
        let d = self.field.degree();
        let y = Self::generator(self.field.clone());
        let mut cols = Vec::with_capacity(d);
        let mut cur = self.clone();
        for _ in 0..d {
            cols.push(cur.coords.clone());
            cur = &cur * &y;
        }
        (0..d)
            .map(|i| (0..d).map(|j| cols[j][i].clone()).collect())
            .collect()
    }

    pub fn trace(&self) -> BigRational {
        let m = self.multiplication_matrix();
        (0..m.len()).map(|i| m[i][i].clone()).sum()
    }

    /// Characteristic polynomial of multiplication by `self`, with
    /// denominators cleared to a primitive integer polynomial with positive
    /// leading coefficient. Its roots are the conjugates of `self`.
    pub fn char_poly(&self) -> IntPolynomial {
        let rational = hessenberg_char_poly(self.multiplication_matrix());
        let den = rational
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        IntPolynomial::new(
            rational
                .iter()
                .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
                .collect(),
        )
        .primitive_part()
    }

    fn same_field(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.field, &other.field) || self.field == other.field,
            "number field elements from different fields"
        );
    }
}

/// Reduce a rational coefficient vector modulo the monic defining polynomial.
fn reduce(field: Arc<NumberField>, mut coeffs: Vec<BigRational>) -> NumberFieldElement {
    let d = field.degree();
    let h = field.poly.coeffs();
    while coeffs.len() > d {
        let top = coeffs.pop().expect("nonempty");
        if top.is_zero() {
            continue;
        }
        let shift = coeffs.len() - d;
        for (j, hj) in h.iter().take(d).enumerate() {
            coeffs[shift + j] -= &top * BigRational::from_integer(hj.clone());
        }
    }
    coeffs.resize(d, BigRational::zero());
    NumberFieldElement {
        field,
        coords: coeffs,
    }
}

/// Characteristic polynomial `det(x I - M)` by reduction to Hessenberg
/// form, as rational coefficients lowest degree first.
pub(crate) fn hessenberg_char_poly(mut h: Vec<Vec<BigRational>>) -> Vec<BigRational> {
    let n = h.len();
    for m in 1..n.saturating_sub(1) {
        let Some(piv) = (m..n).find(|&i| !h[i][m - 1].is_zero()) else {
            continue;
        };
        if piv != m {
            h.swap(piv, m);
            for row in h.iter_mut() {
                row.swap(piv, m);
            }
        }
        for i in m + 1..n {
            if h[i][m - 1].is_zero() {
                continue;
            }
            let u = &h[i][m - 1] / &h[m][m - 1];
            for j in 0..n {
                let delta = &u * &h[m][j];
                h[i][j] -= delta;
            }
            for j in 0..n {
                let delta = &u * &h[j][i];
                h[j][m] += delta;
            }
        }
    }

    // p_k = charpoly of the leading k x k block
    let mut polys: Vec<Vec<BigRational>> = vec![vec![BigRational::one()]];
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut next = vec![BigRational::zero(); m + 1];
        for (k, c) in prev.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * &h[m - 1][m - 1];
        }
        let mut prod = BigRational::one();
        for i in (1..m).rev() {
            prod *= &h[i][i - 1];
            let factor = &h[i - 1][m - 1] * &prod;
            if factor.is_zero() {
                continue;
            }
            for (k, c) in polys[i - 1].iter().enumerate() {
                next[k] -= &factor * c;
            }
        }
        polys.push(next);
    }
    polys.pop().expect("nonempty")
}

impl fmt::Display for NumberFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match k {
                0 => format!("{c}"),
                1 => format!("({c})*y"),
                _ => format!("({c})*y^{k}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Add for &NumberFieldElement {
    type Output = NumberFieldElement;
    fn add(self, rhs: &NumberFieldElement) -> NumberFieldElement {
        self.same_field(rhs);
        NumberFieldElement {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &NumberFieldElement {
    type Output = NumberFieldElement;
    fn sub(self, rhs: &NumberFieldElement) -> NumberFieldElement {
        self.same_field(rhs);
        NumberFieldElement {
            field: self.field.clone(),
            coords: self
                .coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &NumberFieldElement {
    type Output = NumberFieldElement;
    fn mul(self, rhs: &NumberFieldElement) -> NumberFieldElement {
        self.same_field(rhs);
        let d = self.coords.len();
        let mut out = vec![BigRational::zero(); 2 * d - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coords.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        reduce(self.field.clone(), out)
    }
}

impl Neg for &NumberFieldElement {
    type Output = NumberFieldElement;
    fn neg(self) -> NumberFieldElement {
        NumberFieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2_field() -> Arc<NumberField> {
        NumberField::new(IntPolynomial::from_i64s(&[-2, 0, 1])).unwrap()
    }

    fn elt(field: &Arc<NumberField>, c: &[i64]) -> NumberFieldElement {
        NumberFieldElement::new(
            field.clone(),
            c.iter()
                .map(|&v| BigRational::from_integer(v.into()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn char_poly_examples() {
        let k = sqrt2_field();
        assert_eq!(
            elt(&k, &[0, 1]).char_poly(),
            IntPolynomial::from_i64s(&[-2, 0, 1])
        );
        assert_eq!(
            elt(&k, &[1, 1]).char_poly(),
            IntPolynomial::from_i64s(&[-1, -2, 1])
        );
        assert_eq!(
            elt(&k, &[3, 0]).char_poly(),
            IntPolynomial::from_i64s(&[9, -6, 1])
        );
    }

    #[test]
    fn char_poly_clears_denominators() {
        let k = sqrt2_field();
        let half = NumberFieldElement::new(
            k,
            vec![BigRational::new(1.into(), 2.into()), BigRational::zero()],
        )
        .unwrap();
        // (x - 1/2)^2 -> 4x^2 - 4x + 1
        assert_eq!(half.char_poly(), IntPolynomial::from_i64s(&[1, -4, 4]));
    }

    #[test]
    fn multiplication_reduces() {
        let k = sqrt2_field();
        let y = NumberFieldElement::generator(k.clone());
        assert_eq!(&y * &y, elt(&k, &[2, 0]));
        let a = elt(&k, &[1, 1]);
        assert_eq!(&a * &a, elt(&k, &[3, 2]));
    }

    #[test]
    fn degree_one_field_with_root_zero() {
        let k = NumberField::new(IntPolynomial::x()).unwrap();
        let y = NumberFieldElement::generator(k.clone());
        assert!(y.is_zero());
        assert_eq!(
            elt(&k, &[-2]).char_poly(),
            IntPolynomial::from_i64s(&[2, 1])
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert!(NumberField::new(IntPolynomial::from_i64s(&[1, 2])).is_err());
        assert!(NumberField::new(IntPolynomial::from_i64s(&[1])).is_err());
        assert!(NumberFieldElement::new(sqrt2_field(), vec![BigRational::zero()]).is_err());
    }
}
