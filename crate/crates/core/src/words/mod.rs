//! Free-group words, finite presentations and Fox calculus.
//!
//! A [`Word`] is always freely reduced. Generators are referred to by index;
//! names only matter when parsing or rendering.

mod group_ring;
mod parse;
mod presentation;

pub use group_ring::{fox_derivative, GroupRingElement};
pub use parse::{parse_word, render_word};
pub use presentation::Presentation;

use std::fmt;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter { generator, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    /// Exponent as ±1.
    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word in the free group on countably many generators.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn generator(k: usize) -> Self {
        Word(vec![Letter::new(k, false)])
    }

    pub fn generator_inverse(k: usize) -> Self {
        Word(vec![Letter::new(k, true)])
    }

    /// Builds a word from arbitrary letters, freely reducing on the way.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Signed generator indices, `+(k+1)` for `x_k` and `-(k+1)` for its inverse.
    pub fn from_signed(code: &[i64]) -> Self {
        Word::from_letters(
            code.iter()
                .filter(|&&c| c != 0)
                .map(|&c| Letter::new((c.unsigned_abs() - 1) as usize, c < 0)),
        )
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

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn multiply(&self, other: &Word) -> Word {
        // Cancel at the seam only; both operands are already reduced.
        let mut left = self.0.clone();
        let mut skip = 0;
        for l in &other.0 {
            if left.last() == Some(&l.inv()) {
                left.pop();
                skip += 1;
            } else {
                break;
            }
        }
        left.extend_from_slice(&other.0[skip..]);
        Word(left)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, exponent: i64) -> Word {
        let base = if exponent < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..exponent.unsigned_abs() {
            out = out.multiply(&base);
        }
        out
    }

    /// Prefix `y_1 ... y_j` for `j` in `0..=len`.
    pub fn prefix(&self, j: usize) -> Word {
        Word(self.0[..j].to_vec())
    }

    /// Largest generator index occurring, if any.
    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.generator).max()
    }

    /// Exponent sum of generator `k`.
    pub fn exponent_sum(&self, k: usize) -> i64 {
        self.0.iter().filter(|l| l.generator == k).map(|l| l.sign()).sum()
    }

    /// Image under the endomorphism sending `x_k` to `images[k]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for l in &self.0 {
            let img = &images[l.generator];
            out = if l.inverse {
                out.multiply(&img.inverse())
            } else {
                out.multiply(img)
            };
        }
        out
    }
}

impl std::ops::Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            if l.inverse {
                write!(f, "x{}^-1", l.generator)?;
            } else {
                write!(f, "x{}", l.generator)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(code: &[i64]) -> Word {
        Word::from_signed(code)
    }

    #[test]
    fn multiply_and_invert() {
        assert_eq!(w(&[1, 2]).multiply(&w(&[-2])), w(&[1]));
        assert_eq!(w(&[1, 2]).inverse(), w(&[-2, -1]));
        assert_eq!(Word::identity().multiply(&w(&[1, -2])), w(&[1, -2]));
        assert_eq!(w(&[1, 2, -1]).multiply(&w(&[1, -2, 3])), w(&[1, 3]));
    }

    #[test]
    fn reduction_on_construction() {
        assert_eq!(w(&[1, -1, 2]), w(&[2]));
        assert_eq!(w(&[1, 2, -2, -1]), Word::identity());
        assert_eq!(w(&[1]).pow(3).len(), 3);
        assert_eq!(w(&[1, 2]).pow(-1), w(&[-2, -1]));
    }

    #[test]
    fn substitution() {
        // swap a <-> b sends the commutator to its inverse
        let comm = w(&[1, 2, -1, -2]);
        let swapped = comm.substitute(&[w(&[2]), w(&[1])]);
        assert_eq!(swapped, comm.inverse());
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        prop::collection::vec((0usize..4, any::<bool>()), 0..30)
            .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i))))
    }

    proptest! {
        #[test]
        fn reduced_words_are_reduced(u in word_strategy()) {
            for pair in u.letters().windows(2) {
                prop_assert_ne!(pair[0], pair[1].inv());
            }
            prop_assert_eq!(Word::from_letters(u.letters().iter().copied()), u.clone());
        }

        #[test]
        fn associativity(u in word_strategy(), v in word_strategy(), x in word_strategy()) {
            prop_assert_eq!(u.multiply(&v).multiply(&x), u.multiply(&v.multiply(&x)));
        }

        #[test]
        fn inverse_is_involution(u in word_strategy()) {
            prop_assert_eq!(u.inverse().inverse(), u.clone());
            prop_assert!(u.multiply(&u.inverse()).is_identity());
        }
    }
}
