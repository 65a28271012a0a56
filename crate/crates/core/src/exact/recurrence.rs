//! Fitting linear recurrences with polynomial coefficients to exact
//! sequences.
//!
//! A recurrence of order `r` is stored as `c_0, ..., c_r` and read with
//! alternating signs,
//!
//! ```text
//! Σ_{j=0}^{r} (-1)^{r-j} c_j(n) A(n+j) = 0,
//! ```
//!
//! which for `r = 3` is `c_3 A(n+3) = c_2 A(n+2) - c_1 A(n+1) + c_0 A(n)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::poly::IntPolynomial;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecurrenceError {
    #[error("need at least {needed} values for order {order}, degree {degree}; got {got}")]
    InsufficientData {
        order: usize,
        degree: usize,
        needed: usize,
        got: usize,
    },
    #[error("order must be at least 1")]
    ZeroOrder,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Recurrence {
    /// `c_0, ..., c_order`.
    pub coeffs: Vec<IntPolynomial>,
}

impl Recurrence {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn max_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(|c| c.degree())
            .max()
            .unwrap_or(0)
    }

    /// `Σ_j (-1)^{order-j} c_j(n) A(n+j)` where `values[i] = A(first_n + i)`.
    /// `None` when the window runs past the data.
    pub fn residual(&self, values: &[BigRational], first_n: i64, n: i64) -> Option<BigRational> {
        let r = self.order();
        let base = usize::try_from(n - first_n).ok()?;
        if base + r >= values.len() {
            return None;
        }
        let nq = BigRational::from_integer(n.into());
        let mut total = BigRational::zero();
        for (j, c) in self.coeffs.iter().enumerate() {
            let term = c.eval(&nq) * &values[base + j];
            if (r - j).is_multiple_of(2) {
                total += term;
            } else {
                total -= term;
            }
        }
        Some(total)
    }

    /// First `n` at which the recurrence fails on the data, if any.
    pub fn first_failure(&self, values: &[BigRational], first_n: i64) -> Option<i64> {
        let last = first_n + values.len() as i64 - self.order() as i64;
        (first_n..last).find(|&n| {
            !self
                .residual(values, first_n, n)
                .is_some_and(|v| v.is_zero())
        })
    }

    pub fn holds_on(&self, values: &[BigRational], first_n: i64) -> bool {
        self.first_failure(values, first_n).is_none()
    }
}

/// Minimum number of values for an order/degree fit to be overdetermined.
pub fn required_len(order: usize, degree: usize) -> usize {
    (order + 1) * (degree + 1) + order + 4
}

/// Fits a recurrence of exactly the given order and coefficient degree.
/// Returns `Ok(None)` if only the zero solution exists.
///
/// Unknowns are ordered `c_order` first, ascending powers within each
/// polynomial; when the solution space has dimension above one the basis
/// vector of the first free unknown in reduced row echelon form is taken,
/// which makes the choice depend only on the solution space.
pub fn discover_recurrence(
    values: &[BigRational],
    first_n: i64,
    order: usize,
    degree: usize,
) -> Result<Option<Recurrence>, RecurrenceError> {
    if order == 0 {
        return Err(RecurrenceError::ZeroOrder);
    }
    let needed = required_len(order, degree);
    if values.len() < needed {
        return Err(RecurrenceError::InsufficientData {
            order,
            degree,
            needed,
            got: values.len(),
        });
    }
    let width = (order + 1) * (degree + 1);
    let column = |j: usize, d: usize| (order - j) * (degree + 1) + d;

    let mut rows = Vec::with_capacity(values.len() - order);
    for base in 0..values.len() - order {
        let n = BigRational::from_integer((first_n + base as i64).into());
        let mut row = vec![BigRational::zero(); width];
        for j in 0..=order {
            let signed = if (order - j).is_multiple_of(2) {
                values[base + j].clone()
            } else {
                -values[base + j].clone()
            };
            let mut n_pow = BigRational::one();
            for d in 0..=degree {
                row[column(j, d)] = &signed * &n_pow;
                n_pow *= &n;
            }
        }
        rows.push(row);
    }

    let Some(solution) = first_null_vector(rows, width) else {
        return Ok(None);
    };

    // Clear denominators and content.
    let lcm = solution
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = solution
        .iter()
        .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !content.is_zero() && !content.is_one() {
        ints.iter_mut().for_each(|x| *x /= &content);
    }
    // Leading nonzero entry from c_order downwards, highest power first,
    // is made positive.
    let lead_sign = (0..=order)
        .rev()
        .flat_map(|j| (0..=degree).rev().map(move |d| (j, d)))
        .map(|(j, d)| &ints[column(j, d)])
        .find(|x| !x.is_zero())
        .map(|x| x.is_negative())
        .unwrap_or(false);
    if lead_sign {
        ints.iter_mut().for_each(|x| *x = -x.clone());
    }
    let coeffs = (0..=order)
        .map(|j| IntPolynomial::new((0..=degree).map(|d| ints[column(j, d)].clone()).collect()))
        .collect();
    Ok(Some(Recurrence { coeffs }))
}

/// Tries every `(order, degree)` within the bounds that the data can
/// overdetermine, fewest unknowns first (ties broken by lower order), and
/// returns the first nonzero fit together with its shape.
pub fn search_recurrence(
    values: &[BigRational],
    first_n: i64,
    max_order: usize,
    max_degree: usize,
) -> Result<Option<Recurrence>, RecurrenceError> {
    if max_order == 0 {
        return Err(RecurrenceError::ZeroOrder);
    }
    let mut shapes: Vec<(usize, usize)> = (1..=max_order)
        .flat_map(|o| (0..=max_degree).map(move |d| (o, d)))
        .filter(|&(o, d)| values.len() >= required_len(o, d))
        .collect();
    if shapes.is_empty() {
        return Err(RecurrenceError::InsufficientData {
            order: 1,
            degree: 0,
            needed: required_len(1, 0),
            got: values.len(),
        });
    }
    shapes.sort_by_key(|&(o, d)| ((o + 1) * (d + 1), o));
    for (o, d) in shapes {
        if let Some(rec) = discover_recurrence(values, first_n, o, d)? {
            return Ok(Some(rec));
        }
    }
    Ok(None)
}

/// Reduced row echelon form over the rationals, then the null vector that
/// sets the first free column to 1 and every other free column to 0.
fn first_null_vector(mut rows: Vec<Vec<BigRational>>, width: usize) -> Option<Vec<BigRational>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free = (0..width).find(|c| !pivots.contains(c))?;
    let mut v = vec![BigRational::zero(); width];
    v[free] = BigRational::one();
    for (i, &pc) in pivots.iter().enumerate() {
        v[pc] = -rows[i][free].clone();
    }
    Some(v)
}
