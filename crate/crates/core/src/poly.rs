//! Dense univariate polynomials with exact coefficient arithmetic.
//!
//! `Poly<T>` is generic over the coefficient scalar via `num-traits`; the
//! crate-level alias `IntPoly = Poly<BigInt>` is the element type of the
//! composition nearring. Values are immutable: every operation returns a
//! fresh polynomial, so they can be shared freely between threads.

use std::error::Error;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

/// A polynomial `sum c_i x^i`, stored densely with `coeffs[i] = c_i`.
///
/// Invariant: the last entry of `coeffs` is nonzero; the zero polynomial
/// is the empty vector. The degree of the zero polynomial is `None`
/// (a distinguished "minus infinity"), never an ordinary integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly<T> {
    coeffs: Vec<T>,
}

impl<T: Zero> Poly<T> {
    /// Builds a polynomial from low-to-high coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::new(vec![c])
    }

    /// `c * x^exp`.
    pub fn monomial(c: T, exp: usize) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = Vec::with_capacity(exp + 1);
        for _ in 0..exp {
            coeffs.push(T::zero());
        }
        coeffs.push(c);
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` is the degree of the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }
}

impl<T: Zero + One> Poly<T> {
    /// The identity element `x` of composition.
    pub fn x() -> Self {
        Poly::monomial(T::one(), 1)
    }
}

impl<T: Zero + Clone> Poly<T> {
    /// Coefficient of `x^i`; zero beyond the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    /// Coefficient vector padded with zeros up to index `cap` inclusive.
    pub fn coeff_vec(&self, cap: usize) -> Vec<T> {
        (0..=cap).map(|i| self.coeff(i)).collect()
    }

    /// Inverse of [`coeff_vec`](Self::coeff_vec).
    pub fn from_coeff_vec(v: &[T]) -> Self {
        Poly::new(v.to_vec())
    }
}

impl<T> Poly<T>
where
    T: Zero + Clone + Mul<Output = T>,
{
    pub fn scale(&self, k: &T) -> Self {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    /// Substitution of `other` into `self`, evaluated by Horner's rule:
    /// one multiplication and one addition per coefficient.
    pub fn compose(&self, other: &Poly<T>) -> Poly<T> {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &Poly::constant(c.clone());
        }
        acc
    }
}

impl<'a, T> Add for &'a Poly<T>
where
    T: Zero + Clone,
{
    type Output = Poly<T>;
    fn add(self, rhs: &'a Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, T> Sub for &'a Poly<T>
where
    T: Zero + Clone + Sub<Output = T>,
{
    type Output = Poly<T>;
    fn sub(self, rhs: &'a Poly<T>) -> Poly<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, T> Neg for &'a Poly<T>
where
    T: Zero + Clone + Neg<Output = T>,
{
    type Output = Poly<T>;
    fn neg(self) -> Poly<T> {
        Poly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

impl<'a, T> Mul for &'a Poly<T>
where
    T: Zero + Clone + Mul<Output = T>,
{
    type Output = Poly<T>;
    fn mul(self, rhs: &'a Poly<T>) -> Poly<T> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let prod = a.clone() * b.clone();
                out[i + j] = std::mem::replace(&mut out[i + j], T::zero()) + prod;
            }
        }
        Poly::new(out)
    }
}

/// Syntax error in the polynomial grammar, with a byte position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at position {}: {}", self.pos, self.msg)
    }
}

impl Error for ParseError {}

struct Scanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) {
        self.pos += 1;
    }

    fn digits(&mut self) -> Option<&'a [u8]> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError { pos: self.pos, msg: msg.to_string() }
    }
}

/// Grammar: `poly := term (('+'|'-') term)*`,
/// `term := [integer] ['x' ['^' natural]]`; whitespace is insignificant,
/// a bare `x` means `1*x^1`, and a leading `-` is allowed.
impl<T> FromStr for Poly<T>
where
    T: Zero + One + Clone + Neg<Output = T> + FromStr,
{
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Self, ParseError> {
        let mut sc = Scanner::new(text);
        let mut acc: Poly<T> = Poly::zero();
        let mut first = true;
        loop {
            let negative = match sc.peek() {
                Some(b'+') if !first => {
                    sc.bump();
                    false
                }
                Some(b'-') => {
                    sc.bump();
                    true
                }
                Some(_) if first => false,
                None if first => return Err(sc.err("empty input")),
                None => break,
                Some(_) => return Err(sc.err("expected '+' or '-'")),
            };
            first = false;

            let digit_pos = {
                sc.skip_ws();
                sc.pos
            };
            let coeff: Option<T> = match sc.digits() {
                Some(ds) => {
                    let s = std::str::from_utf8(ds).unwrap();
                    Some(s.parse::<T>().map_err(|_| ParseError {
                        pos: digit_pos,
                        msg: format!("bad integer '{s}'"),
                    })?)
                }
                None => None,
            };
            let exp: usize = match sc.peek() {
                Some(b'x') => {
                    sc.bump();
                    match sc.peek() {
                        Some(b'^') => {
                            sc.bump();
                            let ds = sc.digits().ok_or_else(|| sc.err("expected exponent"))?;
                            std::str::from_utf8(ds)
                                .unwrap()
                                .parse()
                                .map_err(|_| sc.err("exponent out of range"))?
                        }
                        _ => 1,
                    }
                }
                _ => {
                    if coeff.is_none() {
                        return Err(sc.err("expected coefficient or 'x'"));
                    }
                    0
                }
            };
            let c = coeff.unwrap_or_else(T::one);
            let c = if negative { -c } else { c };
            acc = &acc + &Poly::monomial(c, exp);
        }
        Ok(acc)
    }
}

/// Canonical descending-degree rendering; `parse(render(p)) == p`.
impl<T> fmt::Display for Poly<T>
where
    T: Zero + One + Signed + Clone + fmt::Display + PartialEq,
{
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                }
                if i == 1 {
                    write!(f, "x")?;
                } else {
                    write!(f, "x^{i}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::IntPoly;

    fn p(s: &str) -> IntPoly {
        s.parse().unwrap()
    }

    #[test]
    fn parse_examples() {
        let q = p("2x^10");
        assert_eq!(q.degree(), Some(10));
        assert_eq!(q.coeff(10), 2.into());
        let q = p("4x^6-4x^3+3");
        assert_eq!(q.coeff(6), 4.into());
        assert_eq!(q.coeff(3), (-4).into());
        assert_eq!(q.coeff(0), 3.into());
        assert!(p("0").is_zero());
        assert_eq!(p("x"), IntPoly::x());
        assert_eq!(p("-3x^3+1"), &IntPoly::constant(1.into()) - &p("3x^3"));
    }

    #[test]
    fn parse_errors_carry_position() {
        assert!("".parse::<IntPoly>().is_err());
        assert!("2x^".parse::<IntPoly>().is_err());
        assert!("x + + 1".parse::<IntPoly>().is_err());
        assert!("y".parse::<IntPoly>().is_err());
        let err = "2x^2 @".parse::<IntPoly>().unwrap_err();
        assert_eq!(err.pos, 5);
    }

    #[test]
    fn render_examples() {
        assert_eq!(IntPoly::zero().to_string(), "0");
        assert_eq!(p("2x^10").to_string(), "2x^10");
        assert_eq!(p("4x^6-4x^3+3").to_string(), "4x^6 - 4x^3 + 3");
        assert_eq!(p("-3x^3+1").to_string(), "-3x^3 + 1");
        assert_eq!(p("x").to_string(), "x");
    }

    #[test]
    fn ring_plumbing() {
        let x2 = p("x^2");
        let x3 = p("x^3");
        assert_eq!((&x2 + &x3).to_string(), "x^3 + x^2");
        let q = p("5x^4-7");
        assert!((&q - &q).is_zero());
        // (x^2 + x^8)^2 = x^4 + 2x^10 + x^16
        let s = p("x^2+x^8");
        assert_eq!(&s * &s, p("x^4+2x^10+x^16"));
    }

    #[test]
    fn compose_examples() {
        assert_eq!(p("x^2+2").compose(&p("2x^3-1")), p("4x^6-4x^3+3"));
        let q = p("7x^5-3x^2+x-9");
        assert_eq!(q.compose(&IntPoly::x()), q);
        assert_eq!(IntPoly::x().compose(&q), q);
        assert_eq!(p("x^4").compose(&p("x^4")), p("x^16"));
        // constants absorb on the left
        assert_eq!(p("5").compose(&q), p("5"));
    }

    #[test]
    fn degree_of_zero_is_distinguished() {
        assert_eq!(IntPoly::zero().degree(), None);
        assert_eq!(IntPoly::constant(3.into()).degree(), Some(0));
    }

    #[test]
    fn coeff_beyond_degree_is_zero() {
        assert_eq!(p("x^2").coeff(7), 0.into());
        assert_eq!(IntPoly::zero().coeff(0), 0.into());
        assert_eq!(p("4x^6-4x^3+3").coeff(3), (-4).into());
    }
}
