//! Shuffle product on words, integer-linear combinations of words and the
//! `T_{p+q,j}` decomposition of `(AB)^p ⧢ (AB)^q`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{Deserialize, Deserializer};
use serde::ser::{Serialize, SerializeMap, Serializer};
use thiserror::Error;

use crate::exact::identities::a_coeff_int;
use crate::words::{word_from_composition, Composition, Letter, Word};
use crate::Parity;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShuffleError {
    #[error("T index j = {j} exceeds min(p, q) = {bound}")]
    TIndexTooLarge { j: usize, bound: usize },
    #[error("word-level identity needs m <= n, got m = {m}, n = {n}")]
    MExceedsN { m: usize, n: usize },
    #[error("m and n must be positive")]
    NonPositive,
    #[error("bad word in polynomial: {0}")]
    BadWord(String),
    #[error("bad coefficient {0:?}")]
    BadCoefficient(String),
}

/// Finite formal sum of words with integer coefficients. Zero coefficients
/// are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WordPolynomial {
    terms: BTreeMap<Word, BigInt>,
}

impl WordPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_word(w: Word) -> Self {
        Self::monomial(w, BigInt::one())
    }

    pub fn monomial(w: Word, coeff: BigInt) -> Self {
        let mut p = Self::zero();
        p.add_term(w, coeff);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of distinct words.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Terms in canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, w: Word, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// `self += scale * other`
    pub fn add_scaled(&mut self, other: &WordPolynomial, scale: &BigInt) {
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            let entry = self.terms.entry(w.clone()).or_default();
            *entry += c * scale;
        }
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn scaled(&self, scale: &BigInt) -> WordPolynomial {
        let mut out = WordPolynomial::zero();
        out.add_scaled(self, scale);
        out
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Sum of absolute values of the coefficients.
    pub fn abs_mass(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Same support with every coefficient replaced by 1.
    pub fn support(&self) -> WordPolynomial {
        WordPolynomial {
            terms: self
                .terms
                .keys()
                .map(|w| (w.clone(), BigInt::one()))
                .collect(),
        }
    }

    /// First word (canonical order) whose coefficient differs, together with
    /// the coefficient in `self` and in `other`.
    pub fn first_difference(&self, other: &WordPolynomial) -> Option<(Word, BigInt, BigInt)> {
        let mut keys: Vec<&Word> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter().find_map(|w| {
            let (a, b) = (self.coeff(w), other.coeff(w));
            (a != b).then(|| (w.clone(), a, b))
        })
    }
}

impl fmt::Display for WordPolynomial {
    /// Canonical text form: `+c·WORD` terms in canonical order joined by
    /// spaces; the empty word prints as `ε` and the zero polynomial as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            let sign = if c.is_negative() { '-' } else { '+' };
            let word = if w.is_empty() {
                "ε".to_string()
            } else {
                w.to_string()
            };
            write!(f, "{}{}·{}", sign, c.abs(), word)?;
        }
        Ok(())
    }
}

impl Serialize for WordPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.terms.len()))?;
        for (w, c) in &self.terms {
            map.serialize_entry(&w.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for WordPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut p = WordPolynomial::zero();
        for (w, c) in raw {
            let word: Word = w.parse().map_err(D::Error::custom)?;
            let coeff: BigInt = c
                .parse()
                .map_err(|_| D::Error::custom(ShuffleError::BadCoefficient(c.clone())))?;
            p.add_term(word, coeff);
        }
        Ok(p)
    }
}

/// Shuffle of two sequences over any ordered alphabet, with multiplicity.
///
/// Uses `u⧢v = u_0 (u'⧢v) + v_0 (u⧢v')` over suffix pairs, keeping only
/// one row of the suffix table alive at a time.
pub fn shuffle_sequences<T: Clone + Ord>(u: &[T], v: &[T]) -> BTreeMap<Vec<T>, BigInt> {
    let (nu, nv) = (u.len(), v.len());
    let single = |s: &[T]| {
        let mut m = BTreeMap::new();
        m.insert(s.to_vec(), BigInt::one());
        m
    };
    // row[j] holds u[i..] ⧢ v[j..] for the current i.
    let mut row: Vec<BTreeMap<Vec<T>, BigInt>> = (0..=nv).map(|j| single(&v[j..])).collect();
    for i in (0..nu).rev() {
        let mut next: Vec<BTreeMap<Vec<T>, BigInt>> = vec![BTreeMap::new(); nv + 1];
        next[nv] = single(&u[i..]);
        for j in (0..nv).rev() {
            let mut acc: BTreeMap<Vec<T>, BigInt> = BTreeMap::new();
            for (tail, c) in &row[j] {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(u[i].clone());
                w.extend_from_slice(tail);
                *acc.entry(w).or_default() += c;
            }
            for (tail, c) in &next[j + 1] {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(v[j].clone());
                w.extend_from_slice(tail);
                *acc.entry(w).or_default() += c;
            }
            next[j] = acc;
        }
        row = next;
    }
    row.swap_remove(0)
}

/// `u ⧢ v` as a word polynomial.
pub fn shuffle(u: &Word, v: &Word) -> WordPolynomial {
    let terms = shuffle_sequences::<Letter>(u.letters(), v.letters())
        .into_iter()
        .map(|(letters, c)| (Word::new(letters), c))
        .collect();
    WordPolynomial { terms }
}

/// Bilinear extension of [`shuffle`].
pub fn shuffle_poly(p: &WordPolynomial, q: &WordPolynomial) -> WordPolynomial {
    let mut out = WordPolynomial::zero();
    for (u, cu) in p.terms() {
        for (v, cv) in q.terms() {
            out.add_scaled(&shuffle(u, v), &(cu * cv));
        }
    }
    out
}

/// Shuffle of two compositions at the level of their argument sequences,
/// mapped to words. For example `(2) ⧢ (3,1)` gives the words of
/// `(2,3,1) + (3,2,1) + (3,1,2)`. This is the product meant by
/// `ζ({2}^m ⧢ {3,1}^n)`.
pub fn shuffle_compositions(c: &Composition, d: &Composition) -> WordPolynomial {
    shuffle_argument_sequences(c.parts(), d.parts())
}

/// As [`shuffle_compositions`] but either side may be empty.
pub fn shuffle_argument_sequences(c: &[u32], d: &[u32]) -> WordPolynomial {
    let mut out = WordPolynomial::zero();
    for (parts, mult) in shuffle_sequences(c, d) {
        if parts.is_empty() {
            out.add_term(Word::empty(), mult);
            continue;
        }
        let comp = Composition::new(parts).expect("argument shuffle of positive parts");
        out.add_term(word_from_composition(&comp), mult);
    }
    out
}

/// `T_{p+q,j}`: every distinct word of `(AB)^p ⧢ (AB)^q` containing exactly
/// `j` overlapping `AA` factors, each with coefficient 1.
pub fn t_sum(p: usize, q: usize, j: usize) -> Result<WordPolynomial, ShuffleError> {
    let bound = p.min(q);
    if j > bound {
        return Err(ShuffleError::TIndexTooLarge { j, bound });
    }
    Ok(t_sums_from(&shuffle(&Word::ab_power(p), &Word::ab_power(q)), bound).swap_remove(j))
}

/// All of `T_{p+q,0..=max_j}` from an already computed shuffle.
fn t_sums_from(sh: &WordPolynomial, max_j: usize) -> Vec<WordPolynomial> {
    let mut out = vec![WordPolynomial::zero(); max_j + 1];
    for w in sh.words() {
        let j = w.count_double_a();
        if j <= max_j {
            out[j].add_term(w.clone(), BigInt::one());
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma2Report {
    pub p: usize,
    pub q: usize,
    pub passed: bool,
    pub lhs_terms: usize,
    pub rhs_terms: usize,
    /// First differing word with its coefficient on each side.
    pub first_difference: Option<(Word, BigInt, BigInt)>,
}

/// Checks `(AB)^p ⧢ (AB)^q = Σ_j C(p+q-2j, p-j) 4^j T_{p+q,j}` as an exact
/// polynomial identity.
pub fn lemma2_check(p: usize, q: usize) -> Lemma2Report {
    let lhs = shuffle(&Word::ab_power(p), &Word::ab_power(q));
    let bound = p.min(q);
    let ts = t_sums_from(&lhs, bound);
    let mut rhs = WordPolynomial::zero();
    for (j, t) in ts.iter().enumerate() {
        let coeff = binomial_u(p + q - 2 * j, p - j) * BigInt::from(4u32).pow(j as u32);
        rhs.add_scaled(t, &coeff);
    }
    let first_difference = lhs.first_difference(&rhs);
    Lemma2Report {
        p,
        q,
        passed: first_difference.is_none(),
        lhs_terms: lhs.len(),
        rhs_terms: rhs.len(),
        first_difference,
    }
}

fn binomial_u(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

/// Both sides of the word-level alternating-moment identity.
///
/// Odd: `Σ_{k=1-n}^{n} (-1)^k k^{2m-1} (AB)^{n-k} ⧢ (AB)^{n-1+k}` against
/// `Σ_{j=1}^{m} 4^{n-j} a_{2m-1,j} T_{2n-1,n-j}`.
/// Even: `Σ_{k=-n}^{n} (-1)^k k^{2m} (AB)^{n-k} ⧢ (AB)^{n+k}` against
/// `Σ_{j=1}^{m} 4^{n-j} a_{2m,j} T_{2n,n-j}`.
///
/// The power `4^{n-j}` sits inside the sum over `j`.
pub fn lemma3_sides(
    parity: Parity,
    m: usize,
    n: usize,
) -> Result<(WordPolynomial, WordPolynomial), ShuffleError> {
    if m == 0 || n == 0 {
        return Err(ShuffleError::NonPositive);
    }
    if m > n {
        return Err(ShuffleError::MExceedsN { m, n });
    }
    let (n_i, m_u) = (n as i64, m as u32);
    let (k_lo, exponent, offset) = match parity {
        Parity::Odd => (1 - n_i, 2 * m_u - 1, n_i - 1),
        Parity::Even => (-n_i, 2 * m_u, n_i),
    };

    let mut lhs = WordPolynomial::zero();
    for k in k_lo..=n_i {
        let weight = sign(k) * BigInt::from(k).pow(exponent);
        if weight.is_zero() {
            continue;
        }
        let sh = shuffle(
            &Word::ab_power((n_i - k) as usize),
            &Word::ab_power((offset + k) as usize),
        );
        lhs.add_scaled(&sh, &weight);
    }

    // T_{2n-1, .} from (AB)^n ⧢ (AB)^{n-1}, T_{2n, .} from (AB)^n ⧢ (AB)^n.
    let (p, q) = match parity {
        Parity::Odd => (n, n - 1),
        Parity::Even => (n, n),
    };
    let ts = t_sums_from(&shuffle(&Word::ab_power(p), &Word::ab_power(q)), p.min(q));
    let mut rhs = WordPolynomial::zero();
    for j in 1..=m {
        let coeff = BigInt::from(4u32).pow((n - j) as u32) * a_coeff_int(parity, m, j);
        rhs.add_scaled(&ts[n - j], &coeff);
    }
    Ok((lhs, rhs))
}

fn sign(k: i64) -> BigInt {
    if k.rem_euclid(2) == 0 {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}
