//! Integer polynomials in `n` and in `(n, k)`, and rational functions built
//! from them.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Univariate polynomial in `n`, ascending coefficients, trailing zeros
/// trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![c.into()])
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, n: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| {
                acc * n + BigRational::from_integer(c.clone())
            })
    }

    pub fn eval_int(&self, n: i64) -> BigInt {
        let n = BigInt::from(n);
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &n + c)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Decimal strings, ascending powers.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(raw: &[String]) -> Result<Self, String> {
        raw.iter()
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|_| format!("bad integer {s:?}"))
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => format!("{c}"),
                1 => format!("{c}*n"),
                _ => format!("{c}*n^{i}"),
            });
        }
        f.write_str(&parts.join(" + ").replace("+ -", "- "))
    }
}

/// Polynomial in `(n, k)`: `rows[i][j]` is the coefficient of `n^i k^j`.
/// Rows may have different lengths.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BivariatePolynomial {
    rows: Vec<Vec<BigInt>>,
}

impl BivariatePolynomial {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Self {
        let mut rows: Vec<Vec<BigInt>> = rows
            .into_iter()
            .map(|mut r| {
                while r.last().is_some_and(|c| c.is_zero()) {
                    r.pop();
                }
                r
            })
            .collect();
        while rows.last().is_some_and(|r| r.is_empty()) {
            rows.pop();
        }
        BivariatePolynomial { rows }
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::new(vec![vec![c.into()]])
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.len().checked_sub(1).map(|j| i + j))
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, n: &BigRational, k: &BigRational) -> BigRational {
        self.rows
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, row| {
                let in_k = row.iter().rev().fold(BigRational::zero(), |a, c| {
                    a * k + BigRational::from_integer(c.clone())
                });
                acc * n + in_k
            })
    }

    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect()
    }

    pub fn from_strings(raw: &[Vec<String>]) -> Result<Self, String> {
        raw.iter()
            .map(|row| {
                row.iter()
                    .map(|s| {
                        s.trim()
                            .parse::<BigInt>()
                            .map_err(|_| format!("bad integer {s:?}"))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Self::new)
    }
}

/// Quotient of two bivariate polynomials; the denominator is never the zero
/// polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunction {
    num: BivariatePolynomial,
    den: BivariatePolynomial,
}

impl RationalFunction {
    pub fn new(num: BivariatePolynomial, den: BivariatePolynomial) -> Option<Self> {
        (!den.is_zero()).then_some(RationalFunction { num, den })
    }

    pub fn num(&self) -> &BivariatePolynomial {
        &self.num
    }

    pub fn den(&self) -> &BivariatePolynomial {
        &self.den
    }

    pub fn degree(&self) -> usize {
        self.num.total_degree().max(self.den.total_degree())
    }

    /// `None` when the denominator vanishes at the point.
    pub fn eval(&self, n: &BigRational, k: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(n, k);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(n, k) / d)
    }

    pub fn eval_int(&self, n: i64, k: i64) -> Option<BigRational> {
        self.eval(
            &BigRational::from_integer(n.into()),
            &BigRational::from_integer(k.into()),
        )
    }
}

/// `1` as a rational function.
pub fn one_rf() -> RationalFunction {
    RationalFunction::new(
        BivariatePolynomial::constant(BigInt::one()),
        BivariatePolynomial::constant(BigInt::one()),
    )
    .expect("nonzero")
}
