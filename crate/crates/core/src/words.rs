//! Words over the two-letter alphabet `{A, B}` and their dictionary to MZV
//! index compositions.
//!
//! The letter `A` stands for the form `dx/x` and `B` for `dx/(1-x)`. The
//! composition `(s_1, ..., s_d)` is encoded as `A^{s_1-1} B ... A^{s_d-1} B`,
//! so `ζ(3,1)` corresponds to `AABB`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid letter {0:?}: words are written over {{A, B}}")]
    InvalidLetter(char),
    #[error("empty composition has no word")]
    EmptyComposition,
    #[error("composition part {0} is not a positive integer")]
    NonPositivePart(i64),
    #[error("invalid composition {0:?}")]
    ParseComposition(String),
    #[error("the empty word has no composition")]
    EmptyWord,
    #[error("word {0} ends in A and has no composition")]
    EndsInA(Word),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    /// `dx/x`
    A,
    /// `dx/(1-x)`
    B,
}

impl Letter {
    pub fn swap(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'A',
            Letter::B => 'B',
        }
    }
}

/// A finite word over `{A, B}`. The empty word is the unit of the shuffle
/// product.
///
/// Words are ordered length-first, then lexicographically with `A < B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// `(AB)^p`
    pub fn ab_power(p: usize) -> Self {
        Word([Letter::A, Letter::B].repeat(p))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Begins with `A` and ends with `B`.
    pub fn is_admissible(&self) -> bool {
        self.0.first() == Some(&Letter::A) && self.0.last() == Some(&Letter::B)
    }

    pub fn ends_with_b(&self) -> bool {
        self.0.last() == Some(&Letter::B)
    }

    pub fn count_b(&self) -> usize {
        self.0.iter().filter(|&&l| l == Letter::B).count()
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix_from(&self, start: usize) -> Word {
        Word(self.0[start..].to_vec())
    }

    /// Concatenation `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Number of positions `i` with `w[i] = w[i+1] = A`. Occurrences
    /// overlap, so an `A`-run of length `r` contributes `r - 1`.
    pub fn count_double_a(&self) -> usize {
        self.0
            .windows(2)
            .filter(|pair| pair[0] == Letter::A && pair[1] == Letter::A)
            .count()
    }

    /// Reverse the word and exchange `A` with `B`. This is the action of
    /// `x -> 1 - x` on iterated integrands.
    pub fn tau_reverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.swap()).collect())
    }

    /// Longest run of the given letter.
    pub fn max_run(&self, letter: Letter) -> usize {
        let mut best = 0;
        let mut run = 0;
        for &l in &self.0 {
            if l == letter {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        best
    }

    /// Exponents `(e_1, ..., e_d)` of `A^{e_1} B ... A^{e_d} B`. Requires the
    /// word to be empty or to end in `B`.
    pub fn a_exponents(&self) -> Result<Vec<u32>, WordError> {
        if !self.is_empty() && !self.ends_with_b() {
            return Err(WordError::EndsInA(self.clone()));
        }
        let mut out = Vec::with_capacity(self.count_b());
        let mut run = 0u32;
        for &l in &self.0 {
            match l {
                Letter::A => run += 1,
                Letter::B => {
                    out.push(run);
                    run = 0;
                }
            }
        }
        Ok(out)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                'A' => Ok(Letter::A),
                'B' => Ok(Letter::B),
                other => Err(WordError::InvalidLetter(other)),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

/// MZV index `(s_1, ..., s_d)` with every part at least 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Composition(Vec<u32>);

impl Composition {
    pub fn new(parts: Vec<u32>) -> Result<Self, WordError> {
        if parts.is_empty() {
            return Err(WordError::EmptyComposition);
        }
        if let Some(&bad) = parts.iter().find(|&&p| p == 0) {
            return Err(WordError::NonPositivePart(bad as i64));
        }
        Ok(Composition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `s_1 >= 2`, i.e. the defining series converges.
    pub fn is_admissible(&self) -> bool {
        self.0[0] >= 2
    }

    /// All compositions of `weight` (admissible or not), in lexicographic
    /// order of parts.
    pub fn all_of_weight(weight: u32) -> Vec<Composition> {
        fn go(rest: u32, acc: &mut Vec<u32>, out: &mut Vec<Composition>) {
            if rest == 0 {
                out.push(Composition(acc.clone()));
                return;
            }
            for part in 1..=rest {
                acc.push(part);
                go(rest - part, acc, out);
                acc.pop();
            }
        }
        let mut out = Vec::new();
        if weight > 0 {
            go(weight, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for Composition {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts = s
            .split(',')
            .map(|p| {
                let v: i64 = p
                    .trim()
                    .parse()
                    .map_err(|_| WordError::ParseComposition(s.to_string()))?;
                if v < 1 {
                    return Err(WordError::NonPositivePart(v));
                }
                u32::try_from(v).map_err(|_| WordError::ParseComposition(s.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Composition::new(parts)
    }
}

/// `(s_1, ..., s_d) -> A^{s_1-1} B ... A^{s_d-1} B`.
pub fn word_from_composition(c: &Composition) -> Word {
    let mut letters = Vec::with_capacity(c.weight() as usize);
    for &s in c.parts() {
        letters.extend(std::iter::repeat_n(Letter::A, s as usize - 1));
        letters.push(Letter::B);
    }
    Word(letters)
}

/// Inverse of [`word_from_composition`]. Words starting with `B` are accepted
/// and give `s_1 = 1`.
pub fn composition_from_word(w: &Word) -> Result<Composition, WordError> {
    if w.is_empty() {
        return Err(WordError::EmptyWord);
    }
    let exps = w.a_exponents()?;
    Composition::new(exps.into_iter().map(|e| e + 1).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    #[test]
    fn encodes_compositions() {
        assert_eq!(word_from_composition(&c("3,1")), w("AABB"));
        assert_eq!(word_from_composition(&c("2")), w("AB"));
        assert_eq!(word_from_composition(&c("2,1,1")), w("ABBB"));
        assert_eq!(composition_from_word(&w("ABBB")).unwrap(), c("2,1,1"));
    }

    #[test]
    fn decodes_words() {
        assert_eq!(composition_from_word(&w("AABB")).unwrap(), c("3,1"));
        assert_eq!(composition_from_word(&w("AB")).unwrap(), c("2"));
        let nonadmissible = composition_from_word(&w("BABB")).unwrap();
        assert_eq!(nonadmissible, c("1,2,1"));
        assert!(!nonadmissible.is_admissible());
        assert_eq!(word_from_composition(&nonadmissible), w("BABB"));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            composition_from_word(&Word::empty()),
            Err(WordError::EmptyWord)
        );
        assert!(matches!(
            composition_from_word(&w("ABA")),
            Err(WordError::EndsInA(_))
        ));
        assert_eq!(Composition::new(vec![]), Err(WordError::EmptyComposition));
        assert_eq!(
            Composition::new(vec![2, 0]),
            Err(WordError::NonPositivePart(0))
        );
        assert_eq!(
            "2,-1".parse::<Composition>(),
            Err(WordError::NonPositivePart(-1))
        );
        assert!("2,x".parse::<Composition>().is_err());
        assert_eq!("ABC".parse::<Word>(), Err(WordError::InvalidLetter('C')));
    }

    #[test]
    fn double_a_counts() {
        assert_eq!(w("AABB").count_double_a(), 1);
        assert_eq!(w("ABAB").count_double_a(), 0);
        assert_eq!(w("AAABBB").count_double_a(), 2);
        assert_eq!(Word::empty().count_double_a(), 0);
    }

    #[test]
    fn tau_reverse_examples() {
        assert_eq!(w("AB").tau_reverse(), w("AB"));
        assert_eq!(w("AABB").tau_reverse(), w("AABB"));
        assert_eq!(w("AAB").tau_reverse(), w("ABB"));
    }

    #[test]
    fn canonical_order_is_length_first() {
        let mut words = [w("BA"), w("AAB"), w("AB"), w("A"), Word::empty()];
        words.sort();
        let shown: Vec<String> = words.iter().map(|x| x.to_string()).collect();
        assert_eq!(shown, ["", "A", "AB", "BA", "AAB"]);
    }

    #[test]
    fn weight_enumeration() {
        let all = Composition::all_of_weight(5);
        assert_eq!(all.len(), 16);
        assert_eq!(all.iter().filter(|c| c.is_admissible()).count(), 8);
    }
}
