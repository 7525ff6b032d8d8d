use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Word;
use crate::error::{Error, Result};

/// Element of the integral group ring of a free group: a finite formal sum
/// of reduced words with nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, BigInt>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::identity())
    }

    pub fn from_word(w: Word) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, BigInt::one());
        GroupRingElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> BigInt {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    /// Adds `c * w` in place.
    pub fn add_term(&mut self, w: Word, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Augmentation: sum of coefficients.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_default()
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        GroupRingElement {
            terms: self.terms.iter().map(|(w, c)| (w.clone(), -c)).collect(),
        }
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, a) in &self.terms {
            for (v, b) in &rhs.terms {
                out.add_term(u.multiply(v), a * b);
            }
        }
        out
    }
}

/// Fox derivative `∂w/∂x_k` in the integral group ring of the free group of
/// rank `rank`.
///
/// Uses `∂(uv) = ∂u + u ∂v`, `∂x_k/∂x_k = 1` and `∂x_k^{-1}/∂x_k = -x_k^{-1}`,
/// which for `w = y_1 ... y_m` gives a signed sum of prefixes.
pub fn fox_derivative(w: &Word, k: usize, rank: usize) -> Result<GroupRingElement> {
    if k >= rank {
        return Err(Error::IndexOutOfRange { index: k, count: rank });
    }
    if let Some(index) = w.max_generator().filter(|&g| g >= rank) {
        return Err(Error::IndexOutOfRange { index, count: rank });
    }
    let mut out = GroupRingElement::zero();
    for (j, l) in w.letters().iter().enumerate() {
        if l.generator != k {
            continue;
        }
        if l.inverse {
            out.add_term(w.prefix(j + 1), -BigInt::one());
        } else {
            out.add_term(w.prefix(j), BigInt::one());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Letter;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(code: &[i64]) -> Word {
        Word::from_signed(code)
    }

    fn elem(terms: &[(&[i64], i64)]) -> GroupRingElement {
        let mut e = GroupRingElement::zero();
        for (code, c) in terms {
            e.add_term(w(code), BigInt::from(*c));
        }
        e
    }

    #[test]
    fn fox_of_commutator() {
        // ∂(a b a^-1 b^-1)/∂a = 1 - a b a^-1
        let r = w(&[1, 2, -1, -2]);
        assert_eq!(fox_derivative(&r, 0, 2).unwrap(), elem(&[(&[], 1), (&[1, 2, -1], -1)]));
        // ∂/∂b = a - a b a^-1 b^-1
        assert_eq!(
            fox_derivative(&r, 1, 2).unwrap(),
            elem(&[(&[1], 1), (&[1, 2, -1, -2], -1)])
        );
    }

    #[test]
    fn fox_of_power_and_identity() {
        let a3 = w(&[1, 1, 1]);
        assert_eq!(
            fox_derivative(&a3, 0, 1).unwrap(),
            elem(&[(&[], 1), (&[1], 1), (&[1, 1], 1)])
        );
        assert!(fox_derivative(&Word::identity(), 0, 1).unwrap().is_zero());
        assert!(matches!(fox_derivative(&a3, 1, 1), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn cancellation_drops_terms() {
        let mut e = elem(&[(&[1], 2)]);
        e.add_term(w(&[1]), BigInt::from(-2));
        assert!(e.is_zero());
    }

    #[test]
    fn fundamental_identity_small_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let p = rng.gen_range(1..=4);
            let len = rng.gen_range(0..=20);
            let word = Word::from_letters((0..len).map(|_| Letter::new(rng.gen_range(0..p), rng.gen_bool(0.5))));
            let mut rhs = GroupRingElement::zero();
            for k in 0..p {
                let xk_minus_1 = &GroupRingElement::from_word(Word::generator(k)) - &GroupRingElement::one();
                rhs = &rhs + &(&fox_derivative(&word, k, p).unwrap() * &xk_minus_1);
            }
            let lhs = &GroupRingElement::from_word(word) - &GroupRingElement::one();
            assert_eq!(lhs, rhs);
        }
    }
}
