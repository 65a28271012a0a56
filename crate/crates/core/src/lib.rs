//! Exact and numerical machinery for the shuffle relation
//! `ζ({2}^m ⧢ {3,1}^n) = C(2n+m, m) π^{4n+2m} / ((2n+1) (4n+2m+1)!)`.
//!
//! * [`words`]: words over `{A, B}` and MZV index compositions.
//! * [`shuffle`]: shuffle products, word polynomials, the `T_{p+q,j}` sums and
//!   the word-level identities built from them.
//! * [`exact`]: big-rational verification of the scalar binomial identities,
//!   recurrence fitting and telescoping-certificate checking.
//! * [`numeric`]: binary64 evaluation of MZVs with rigorous truncation bounds.

use std::fmt;
use std::str::FromStr;

pub mod exact;
pub mod numeric;
pub mod shuffle;
pub mod words;

pub use exact::binom::gen_binom;
pub use shuffle::{shuffle, shuffle_poly, t_sum, WordPolynomial};
pub use words::{composition_from_word, word_from_composition, Composition, Letter, Word};

/// Selects the odd (`k^{2m-1}`) or even (`k^{2m}`) member of a paired family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub const BOTH: [Parity; 2] = [Parity::Odd, Parity::Even];
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Parity::Odd => "odd",
            Parity::Even => "even",
        })
    }
}

impl FromStr for Parity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "odd" => Ok(Parity::Odd),
            "even" => Ok(Parity::Even),
            other => Err(format!("unknown parity {other:?} (expected odd or even)")),
        }
    }
}
