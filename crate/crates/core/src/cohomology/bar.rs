use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::words::{Presentation, Word};

/// Integral chain in the bar complex with trivial coefficients: a finite
/// sum of tuples `[γ_1 | ... | γ_n]`, each `γ_i` represented by a reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BarChain {
    degree: usize,
    terms: BTreeMap<Vec<Word>, i64>,
}

impl BarChain {
    pub fn new(degree: usize) -> Self {
        BarChain {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Word], i64)> {
        self.terms.iter().map(|(k, &v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, words: Vec<Word>, coeff: i64) {
        assert_eq!(words.len(), self.degree, "tuple length must equal the chain degree");
        if coeff == 0 {
            return;
        }
        let entry = self.terms.entry(words.clone()).or_insert(0);
        *entry += coeff;
        if *entry == 0 {
            self.terms.remove(&words);
        }
    }

    pub fn with_term(mut self, words: Vec<Word>, coeff: i64) -> Self {
        self.add_term(words, coeff);
        self
    }

    pub fn coefficient(&self, words: &[Word]) -> i64 {
        self.terms.get(words).copied().unwrap_or(0)
    }

    pub fn add(&self, other: &BarChain) -> BarChain {
        assert_eq!(self.degree, other.degree);
        let mut out = self.clone();
        for (k, &v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        out
    }

    pub fn scale(&self, factor: i64) -> BarChain {
        let mut out = BarChain::new(self.degree);
        for (k, &v) in &self.terms {
            out.add_term(k.clone(), v * factor);
        }
        out
    }

    /// The chain with its `index`-th term (in iteration order) removed.
    pub fn without_term(&self, index: usize) -> BarChain {
        let mut out = self.clone();
        if let Some(key) = self.terms.keys().nth(index) {
            out.terms.remove(key);
        }
        out
    }

    /// Applies `f` to every entry of every tuple.
    pub fn map_words(&self, f: impl Fn(&Word) -> Word) -> BarChain {
        let mut out = BarChain::new(self.degree);
        for (k, &v) in &self.terms {
            out.add_term(k.iter().map(&f).collect(), v);
        }
        out
    }

    /// Bar differential with trivial coefficients,
    /// `∂[γ_1|...|γ_n] = [γ_2|...|γ_n] + Σ (−1)^i [..|γ_i γ_{i+1}|..] + (−1)^n [γ_1|...|γ_{n−1}]`,
    /// with products passed through `normal_form`.
    pub fn boundary(&self, normal_form: impl Fn(&Word) -> Word) -> BarChain {
        if self.degree == 0 {
            return BarChain::new(0);
        }
        let n = self.degree;
        let mut out = BarChain::new(n - 1);
        for (tuple, &c) in &self.terms {
            out.add_term(tuple[1..].to_vec(), c);
            for i in 0..n - 1 {
                let mut t = Vec::with_capacity(n - 1);
                t.extend_from_slice(&tuple[..i]);
                t.push(normal_form(&tuple[i].multiply(&tuple[i + 1])));
                t.extend_from_slice(&tuple[i + 2..]);
                let sign = if (i + 1) % 2 == 0 { 1 } else { -1 };
                out.add_term(t, sign * c);
            }
            let sign = if n.is_multiple_of(2) { 1 } else { -1 };
            out.add_term(tuple[..n - 1].to_vec(), sign * c);
        }
        out
    }

    pub fn to_json(&self, presentation: &Presentation) -> BarChainJson {
        BarChainJson {
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(k, &v)| BarTermJson {
                    coeff: v,
                    words: k.iter().map(|w| presentation.render(w)).collect(),
                })
                .collect(),
        }
    }
}

/// `{"degree": 2, "terms": [{"coeff": 1, "words": ["a", "b"]}, ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BarChainJson {
    pub degree: usize,
    pub terms: Vec<BarTermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BarTermJson {
    pub coeff: i64,
    pub words: Vec<String>,
}

impl BarChainJson {
    pub fn into_chain(self, presentation: &Presentation) -> Result<BarChain> {
        let mut chain = BarChain::new(self.degree);
        for t in self.terms {
            if t.words.len() != self.degree {
                return Err(Error::InvalidInput(format!(
                    "bar term has {} entries, chain degree is {}",
                    t.words.len(),
                    self.degree
                )));
            }
            let words = t
                .words
                .iter()
                .map(|w| presentation.parse_word(w))
                .collect::<Result<Vec<_>>>()?;
            chain.add_term(words, t.coeff);
        }
        Ok(chain)
    }
}

/// The word-level normal form used when checking cycles: a relator or its
/// inverse maps to `e`, every other reduced word to itself.
pub fn relator_normal_form(presentation: &Presentation) -> impl Fn(&Word) -> Word + '_ {
    move |w: &Word| {
        let is_relator = presentation.relators().iter().any(|r| r == w || r.inverse() == *w);
        if is_relator {
            Word::identity()
        } else {
            w.clone()
        }
    }
}

/// Whether `∂chain = 0` exactly, after the relator normal form.
pub fn verify_cycle(chain: &BarChain, presentation: &Presentation) -> bool {
    chain.boundary(relator_normal_form(presentation)).is_zero()
}

/// `Σ coeff · evaluator(tuple)`.
pub fn pair(mut evaluator: impl FnMut(&[Word]) -> Complex64, chain: &BarChain) -> Complex64 {
    chain.terms().map(|(t, c)| evaluator(t) * c as f64).sum()
}
