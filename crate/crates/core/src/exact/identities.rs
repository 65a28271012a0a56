//! The scalar identity families, the alternating moment coefficients
//! `a_{2m-1,j}`, `a_{2m,j}` and the closed forms used to reduce them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::binom::{alt_sign, factorial, gen_binom, gen_binom_q, pow4};
use crate::shuffle::{lemma3_sides, ShuffleError};
use crate::words::Word;
use crate::Parity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("m and n must be positive (got m = {m}, n = {n})")]
    NonPositive { m: i64, n: i64 },
    #[error("outer sum truncated at k = {at} but term k = {k} is {value}, not 0")]
    TruncationNonzero { at: i64, k: i64, value: BigRational },
    #[error("outer limit {jmax} is below m = {m}")]
    LimitBelowM { jmax: i64, m: i64 },
    #[error("word {0} does not sit in a single T-class with constant coefficient")]
    NotInTBasis(Word),
    #[error(transparent)]
    Shuffle(#[from] ShuffleError),
}

/// The four scalar identity families compared by [`lr_sides`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Alternating `k^{2m-1}` moments against `C(4n-1, 2n+2k-1)`.
    PowerOdd,
    /// Alternating `k^{2m}` moments against `C(4n+1, 2n+2k+1)`.
    PowerEven,
    /// `C(k, m)` weights, odd weight.
    BinomOdd,
    /// `C(k, m)` weights, even weight.
    BinomEven,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::PowerOdd,
        Family::PowerEven,
        Family::BinomOdd,
        Family::BinomEven,
    ];

    pub fn parity(self) -> Parity {
        match self {
            Family::PowerOdd | Family::BinomOdd => Parity::Odd,
            Family::PowerEven | Family::BinomEven => Parity::Even,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::PowerOdd => "power-odd",
            Family::PowerEven => "power-even",
            Family::BinomOdd => "binom-odd",
            Family::BinomEven => "binom-even",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| format!("unknown family {s:?}"))
    }
}

fn q(v: BigInt) -> BigRational {
    BigRational::from_integer(v)
}

fn qi(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

/// `1 / d` for the odd denominators `2n - 2k + 1`.
fn odd_reciprocal(d: i64) -> BigRational {
    assert!(d.rem_euclid(2) == 1, "denominator {d} must be odd");
    BigRational::new(BigInt::one(), d.into())
}

fn power(k: i64, e: u32) -> BigInt {
    assert!(e >= 1, "0^0 must not arise");
    BigInt::from(k).pow(e)
}

fn check_positive(m: i64, n: i64) -> Result<(), IdentityError> {
    if m < 1 || n < 1 {
        return Err(IdentityError::NonPositive { m, n });
    }
    Ok(())
}

/// Integer value of `a_{2m-1,j}` (odd) or `a_{2m,j}` (even).
pub fn a_coeff_int(parity: Parity, m: usize, j: usize) -> BigInt {
    let (m, j) = (m as i64, j as i64);
    match parity {
        Parity::Odd => (1 - j..=j)
            .map(|k| alt_sign(k) * power(k, (2 * m - 1) as u32) * gen_binom(2 * j - 1, j - k))
            .sum(),
        Parity::Even => (-j..=j)
            .map(|k| alt_sign(k) * power(k, (2 * m) as u32) * gen_binom(2 * j, j - k))
            .sum(),
    }
}

/// `a_{2m-1,j} = Σ_{k=1-j}^{j} (-1)^k k^{2m-1} C(2j-1, j-k)` or
/// `a_{2m,j} = Σ_{k=-j}^{j} (-1)^k k^{2m} C(2j, j-k)`.
pub fn a_coeff(parity: Parity, m: usize, j: usize) -> BigRational {
    q(a_coeff_int(parity, m, j))
}

/// Right-hand side of a power family with the outer sum over `j` running to
/// `jmax` instead of `m`.
fn power_rhs(parity: Parity, m: i64, n: i64, jmax: i64) -> BigRational {
    let mut total = BigRational::zero();
    for j in 1..=jmax {
        let a = a_coeff(parity, m as usize, j as usize);
        if a.is_zero() {
            continue;
        }
        let binom = match parity {
            Parity::Odd => gen_binom_q(2 * n - 1, 2 * j - 1),
            Parity::Even => gen_binom_q(2 * n, 2 * j),
        };
        total += pow4(n - j) * odd_reciprocal(2 * n - 2 * j + 1) * binom * a;
    }
    total
}

/// Left-hand side shared by the power and binomial families: the weight
/// `w(k)` summed against `C(4n-1, 2n+2k-1)` or `C(4n+1, 2n+2k+1)`.
fn lhs_with<W: Fn(i64) -> BigInt>(parity: Parity, n: i64, weight: W) -> BigRational {
    let range = match parity {
        Parity::Odd => 1 - n..=n,
        Parity::Even => -n..=n,
    };
    range
        .map(|k| {
            let binom = match parity {
                Parity::Odd => gen_binom_q(4 * n - 1, 2 * n + 2 * k - 1),
                Parity::Even => gen_binom_q(4 * n + 1, 2 * n + 2 * k + 1),
            };
            q(alt_sign(k) * weight(k)) * odd_reciprocal(2 * n - 2 * k + 1) * binom
        })
        .sum()
}

/// Term `k` of the outer sum on the right of a binomial family.
fn binom_rhs_term(parity: Parity, m: i64, n: i64, k: i64) -> BigRational {
    let inner: BigInt = match parity {
        Parity::Odd => (1 - k..=k)
            .map(|j| alt_sign(j) * gen_binom(j, m) * gen_binom(2 * k - 1, k - j))
            .sum(),
        Parity::Even => (-k..=k)
            .map(|j| alt_sign(j) * gen_binom(j, m) * gen_binom(2 * k, k - j))
            .sum(),
    };
    if inner.is_zero() {
        return BigRational::zero();
    }
    let binom = match parity {
        Parity::Odd => gen_binom_q(2 * n - 1, 2 * k - 1),
        Parity::Even => gen_binom_q(2 * n, 2 * k),
    };
    pow4(n - k) * odd_reciprocal(2 * n - 2 * k + 1) * binom * q(inner)
}

/// Right-hand side of a binomial family. The nominally infinite outer sum is
/// cut at `k = max(m, n) + 2`; the next two terms are required to vanish.
fn binom_rhs(parity: Parity, m: i64, n: i64) -> Result<BigRational, IdentityError> {
    let cut = m.max(n) + 2;
    let total = (1..=cut).map(|k| binom_rhs_term(parity, m, n, k)).sum();
    for k in cut + 1..=cut + 2 {
        let value = binom_rhs_term(parity, m, n, k);
        if !value.is_zero() {
            return Err(IdentityError::TruncationNonzero { at: cut, k, value });
        }
    }
    Ok(total)
}

/// Both sides `(L, R)` of a scalar identity, computed exactly.
pub fn lr_sides(
    family: Family,
    m: i64,
    n: i64,
) -> Result<(BigRational, BigRational), IdentityError> {
    check_positive(m, n)?;
    let parity = family.parity();
    match family {
        Family::PowerOdd | Family::PowerEven => {
            let e = match parity {
                Parity::Odd => (2 * m - 1) as u32,
                Parity::Even => (2 * m) as u32,
            };
            let lhs = lhs_with(parity, n, |k| power(k, e));
            Ok((lhs, power_rhs(parity, m, n, m)))
        }
        Family::BinomOdd | Family::BinomEven => {
            let lhs = lhs_with(parity, n, |k| gen_binom(k, m));
            Ok((lhs, binom_rhs(parity, m, n)?))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OuterSumReport {
    pub parity: Parity,
    pub m: i64,
    pub n: i64,
    pub jmax: i64,
    pub truncated: BigRational,
    pub extended: BigRational,
    /// `j` values in `m+1..=jmax` whose term is nonzero.
    pub nonzero_extra: Vec<i64>,
    pub passed: bool,
}

/// Checks that running the power-family outer sum to `jmax >= m` instead of
/// `m` changes nothing, because `a_{., j}` vanishes for `j > m`.
pub fn replace_outer_sum_check(
    parity: Parity,
    m: i64,
    n: i64,
    jmax: i64,
) -> Result<OuterSumReport, IdentityError> {
    check_positive(m, n)?;
    if jmax < m {
        return Err(IdentityError::LimitBelowM { jmax, m });
    }
    let truncated = power_rhs(parity, m, n, m);
    let extended = power_rhs(parity, m, n, jmax);
    let nonzero_extra: Vec<i64> = (m + 1..=jmax)
        .filter(|&j| !a_coeff_int(parity, m as usize, j as usize).is_zero())
        .collect();
    let passed = truncated == extended && nonzero_extra.is_empty();
    Ok(OuterSumReport {
        parity,
        m,
        n,
        jmax,
        truncated,
        extended,
        nonzero_extra,
        passed,
    })
}

/// `(direct, closed)` for the inner sum of the odd binomial family:
/// `Σ_{j=1-k}^{k} (-1)^j C(j, m) C(2k-1, k-j)` against
/// `(-1)^m [C(2k-m-2, k-m) - C(2k-m-2, k-2)]`.
pub fn inner_sum_reduction(k: i64, m: i64) -> (BigRational, BigRational) {
    let direct: BigInt = (1 - k..=k)
        .map(|j| alt_sign(j) * gen_binom(j, m) * gen_binom(2 * k - 1, k - j))
        .sum();
    let top = 2 * k - m - 2;
    let closed = alt_sign(m) * (gen_binom(top, k - m) - gen_binom(top, k - 2));
    (q(direct), q(closed))
}

/// Closed form of the right side of the odd binomial family:
/// `Σ_{k=1}^{n} (-1)^m 4^{n-k} / (2n-2k+1) C(2n-1, 2k-1)
///  [C(2k-m-2, k-m) - C(2k-m-2, k-2)]`.
pub fn r_closed(m: i64, n: i64) -> BigRational {
    (1..=n)
        .map(|k| {
            let top = 2 * k - m - 2;
            let bracket = gen_binom(top, k - m) - gen_binom(top, k - 2);
            pow4(n - k)
                * odd_reciprocal(2 * n - 2 * k + 1)
                * gen_binom_q(2 * n - 1, 2 * k - 1)
                * q(alt_sign(m) * bracket)
        })
        .sum()
}

/// Published values of `L(m, n)` for the odd binomial family at `n = 1, 2, 3`:
/// `-δ_{m,1}`, `-5δ_{m,1} - (-1)^m`, and `-16, 0, 40/3, (-1)^m (m - 52/3)`.
pub fn expected_initial_value(m: i64, n: i64) -> Option<BigRational> {
    let delta = |v: i64| if m == 1 { qi(v) } else { BigRational::zero() };
    let sign_m = q(alt_sign(m));
    match n {
        1 => Some(-delta(1)),
        2 => Some(-delta(5) - sign_m),
        3 => Some(match m {
            1 => qi(-16),
            2 => qi(0),
            3 => BigRational::new(40.into(), 3.into()),
            _ => sign_m * (qi(m) - BigRational::new(52.into(), 3.into())),
        }),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialValueCell {
    pub m: i64,
    pub n: i64,
    pub expected: BigRational,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub passed: bool,
}

/// Compares `L(m, n)` and `R(m, n)` of the odd binomial family with
/// [`expected_initial_value`] for `n ∈ {1, 2, 3}` and `1 <= m <= m_max`.
pub fn initial_values_check(m_max: i64) -> Result<Vec<InitialValueCell>, IdentityError> {
    let mut cells = Vec::new();
    for n in 1..=3 {
        for m in 1..=m_max {
            let expected = expected_initial_value(m, n).expect("n <= 3");
            let (lhs, rhs) = lr_sides(Family::BinomOdd, m, n)?;
            let passed = lhs == expected && rhs == expected;
            cells.push(InitialValueCell {
                m,
                n,
                expected,
                lhs,
                rhs,
                passed,
            });
        }
    }
    Ok(cells)
}

/// Three exact routes to the integrated word-level identity, all scaled by
/// `(4n-1)!` (odd) or `(4n+1)!` (even) and measured in units of `π^{weight}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bookkeeping {
    /// `Σ_k` weight · `ζ({2}^a) ζ({2}^b)` with `ζ({2}^r) = π^{2r}/(2r+1)!`.
    pub shuffle_route: BigRational,
    /// The word polynomial of the right side read in the `T` basis, each
    /// `T_{2n-1,n-j}` (or `T_{2n,n-j}`) replaced by the closed value of
    /// `ζ({2}^{2j-1} ⧢ {3,1}^{n-j})` (or `ζ({2}^{2j} ⧢ {3,1}^{n-j})`).
    pub t_route: BigRational,
    /// `L` of the matching power family.
    pub scalar_lhs: BigRational,
    /// `R` of the matching power family.
    pub scalar_rhs: BigRational,
}

impl Bookkeeping {
    pub fn consistent(&self) -> bool {
        self.shuffle_route == self.t_route
            && self.t_route == self.scalar_lhs
            && self.scalar_lhs == self.scalar_rhs
    }
}

/// Closed value of `ζ({2}^a ⧢ {3,1}^b)` divided by `π^{2a+4b}`.
pub fn shuffle_value_rational(a: u64, b: u64) -> BigRational {
    let w = 4 * b + 2 * a;
    BigRational::new(
        gen_binom((2 * b + a) as i64, a as i64),
        BigInt::from(2 * b + 1) * factorial(w + 1),
    )
}

/// Integrates both sides of the word-level identity for `(parity, m, n)`
/// and compares against the scalar power family.
pub fn reduction_bookkeeping(parity: Parity, m: i64, n: i64) -> Result<Bookkeeping, IdentityError> {
    check_positive(m, n)?;
    let (lhs_poly, rhs_poly) = lemma3_sides(parity, m as usize, n as usize)?;
    let (k_lo, e, offset, scale) = match parity {
        Parity::Odd => (
            1 - n,
            (2 * m - 1) as u32,
            n - 1,
            factorial((4 * n - 1) as u64),
        ),
        Parity::Even => (-n, (2 * m) as u32, n, factorial((4 * n + 1) as u64)),
    };
    let scale = q(scale);
    let zeta_twos = |r: i64| BigRational::new(BigInt::one(), factorial((2 * r + 1) as u64));

    let shuffle_route: BigRational = (k_lo..=n)
        .map(|k| q(alt_sign(k) * power(k, e)) * zeta_twos(n - k) * zeta_twos(offset + k))
        .sum::<BigRational>()
        * &scale;

    // Read rhs_poly in the T basis: every word lies in exactly one class
    // (its AA count) and must carry the class's common coefficient.
    let weight_half = match parity {
        Parity::Odd => 2 * n - 1,
        Parity::Even => 2 * n,
    };
    let mut class_coeff: Vec<Option<BigInt>> = vec![None; n as usize + 1];
    for (w, c) in rhs_poly.terms() {
        let cls = w.count_double_a();
        match &class_coeff[cls] {
            None => class_coeff[cls] = Some(c.clone()),
            Some(prev) if prev == c => {}
            Some(_) => return Err(IdentityError::NotInTBasis(w.clone())),
        }
    }
    let mut t_route = BigRational::zero();
    for (cls, coeff) in class_coeff.iter().enumerate() {
        let Some(coeff) = coeff else { continue };
        // T_{weight_half, cls} integrates to ζ({2}^{weight_half - 2 cls} ⧢ {3,1}^{cls}).
        let twos = (weight_half - 2 * cls as i64) as u64;
        t_route += q(coeff.clone()) * shuffle_value_rational(twos, cls as u64);
    }
    t_route *= &scale;

    // The left polynomial must equal the right one for the T reading to apply.
    if let Some((w, _, _)) = lhs_poly.first_difference(&rhs_poly) {
        return Err(IdentityError::NotInTBasis(w));
    }

    let family = match parity {
        Parity::Odd => Family::PowerOdd,
        Parity::Even => Family::PowerEven,
    };
    let (scalar_lhs, scalar_rhs) = lr_sides(family, m, n)?;
    Ok(Bookkeeping {
        shuffle_route,
        t_route,
        scalar_lhs,
        scalar_rhs,
    })
}

/// Decimal string of a rational, `p/q` or `p`.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Absolute difference, for reports.
pub fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}
