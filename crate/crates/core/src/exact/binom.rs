use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Generalized binomial coefficient: 0 for `b < 0`, otherwise the falling
/// factorial `a (a-1) ... (a-b+1) / b!`, valid for negative `a`.
///
/// With this convention `C(a, b)` is not symmetric under `b -> a - b` when
/// `a < 0`; e.g. `C(-1, 0) = 1` but `C(-1, -1) = 0`.
pub fn gen_binom(a: i64, b: i64) -> BigInt {
    if b < 0 {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..b {
        // C(a, i+1) = C(a, i) (a - i) / (i + 1), exact at every step.
        r = r * BigInt::from(a - i) / BigInt::from(i + 1);
        if r.is_zero() {
            break;
        }
    }
    r
}

pub fn gen_binom_q(a: i64, b: i64) -> BigRational {
    BigRational::from_integer(gen_binom(a, b))
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `(-1)^k`
pub fn alt_sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// `4^e` for any integer `e`.
pub fn pow4(e: i64) -> BigRational {
    let p = BigInt::from(4u32).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: product of the falling factorial over b!, in rationals.
    fn falling_oracle(a: i64, b: i64) -> BigRational {
        if b < 0 {
            return BigRational::zero();
        }
        let num = (0..b).fold(BigRational::one(), |acc, i| {
            acc * BigRational::from_integer((a - i).into())
        });
        num / BigRational::from_integer(factorial(b as u64))
    }

    #[test]
    fn conventions() {
        assert_eq!(gen_binom(-1, 0), BigInt::from(1));
        assert_eq!(gen_binom(-1, -1), BigInt::from(0));
        assert_eq!(gen_binom(-2, 3), BigInt::from(-4));
        assert_eq!(gen_binom(5, 2), BigInt::from(10));
        assert_eq!(gen_binom(3, 5), BigInt::from(0));
        assert_eq!(gen_binom(0, 0), BigInt::from(1));
    }

    #[test]
    fn matches_falling_factorial_oracle() {
        for a in -12..=12 {
            for b in -2..=12 {
                assert_eq!(gen_binom_q(a, b), falling_oracle(a, b), "C({a},{b})");
            }
        }
    }

    #[test]
    fn negative_upper_index_reflection() {
        // C(-a, b) = (-1)^b C(a + b - 1, b)
        for a in 1..8i64 {
            for b in 0..8i64 {
                assert_eq!(gen_binom(-a, b), alt_sign(b) * gen_binom(a + b - 1, b));
            }
        }
    }

    #[test]
    fn powers_of_four() {
        assert_eq!(pow4(2), BigRational::from_integer(16.into()));
        assert_eq!(pow4(-1), BigRational::new(1.into(), 4.into()));
        assert_eq!(pow4(0), BigRational::one());
    }
}
