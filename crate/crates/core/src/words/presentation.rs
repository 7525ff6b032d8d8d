use serde::{Deserialize, Serialize};

use super::parse::valid_name;
use super::{parse_word, render_word, Letter, Word};
use crate::error::{Error, Result};

/// A finite presentation `<x_0, ..., x_{p-1} | r_1, ..., r_m>`.
///
/// Relators are kept exactly as given (freely reduced, never cyclically
/// normalized).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PresentationJson", into = "PresentationJson")]
pub struct Presentation {
    generator_names: Vec<String>,
    relators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    generators: Vec<String>,
    relators: Vec<String>,
}

impl TryFrom<PresentationJson> for Presentation {
    type Error = Error;
    fn try_from(json: PresentationJson) -> Result<Self> {
        Presentation::parse(json.generators, &json.relators)
    }
}

impl From<Presentation> for PresentationJson {
    fn from(p: Presentation) -> Self {
        let relators = p.relators.iter().map(|r| render_word(r, &p.generator_names)).collect();
        PresentationJson {
            generators: p.generator_names,
            relators,
        }
    }
}

impl Presentation {
    pub fn new(generator_names: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        if generator_names.is_empty() {
            return Err(Error::InvalidPresentation("no generators".into()));
        }
        for (i, name) in generator_names.iter().enumerate() {
            if !valid_name(name) {
                return Err(Error::InvalidPresentation(format!("invalid generator name `{name}`")));
            }
            if generator_names[..i].contains(name) {
                return Err(Error::InvalidPresentation(format!("duplicate generator `{name}`")));
            }
        }
        let count = generator_names.len();
        for r in &relators {
            if let Some(index) = r.max_generator().filter(|&k| k >= count) {
                return Err(Error::IndexOutOfRange { index, count });
            }
        }
        Ok(Presentation {
            generator_names,
            relators,
        })
    }

    /// Builds a presentation from generator names and relator strings.
    pub fn parse<S: AsRef<str>>(generator_names: Vec<String>, relators: &[S]) -> Result<Self> {
        let words = relators
            .iter()
            .map(|r| parse_word(r.as_ref(), &generator_names))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(generator_names, words)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Free group on `p` generators named `a, b, c, ...` (or `x0, x1, ...` for p > 26).
    pub fn free(p: usize) -> Self {
        let names = if p <= 26 {
            (0..p).map(|k| ((b'a' + k as u8) as char).to_string()).collect()
        } else {
            (0..p).map(|k| format!("x{k}")).collect()
        };
        Presentation {
            generator_names: names,
            relators: Vec::new(),
        }
    }

    /// `<a, b | a b a^-1 b^-1>`.
    pub fn torus() -> Self {
        Presentation::parse(vec!["a".into(), "b".into()], &["a b A B"]).expect("static presentation")
    }

    /// Standard genus-`g` surface group: generators `a1, b1, ..., ag, bg` and the
    /// single relator `[a1, b1] ... [ag, bg]`. For `g = 1` the names are `a, b`.
    pub fn surface(genus: usize) -> Self {
        assert!(genus >= 1, "genus must be positive");
        if genus == 1 {
            return Presentation::torus();
        }
        let names = (1..=genus).flat_map(|i| [format!("a{i}"), format!("b{i}")]).collect();
        Presentation {
            generator_names: names,
            relators: vec![surface_relator(genus)],
        }
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator_count(&self) -> usize {
        self.generator_names.len()
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        parse_word(text, &self.generator_names)
    }

    pub fn render(&self, word: &Word) -> String {
        render_word(word, &self.generator_names)
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generator_names.iter().position(|n| n == name)
    }

    /// Genus if this is the standard surface presentation (letter order
    /// `a_i b_i a_i^-1 b_i^-1` with `a_i = x_{2i}`, `b_i = x_{2i+1}`).
    pub fn surface_genus(&self) -> Option<usize> {
        let p = self.generator_count();
        if !p.is_multiple_of(2) || p == 0 || self.relators.len() != 1 {
            return None;
        }
        let genus = p / 2;
        (self.relators[0] == surface_relator(genus)).then_some(genus)
    }
}

fn surface_relator(genus: usize) -> Word {
    Word::from_letters((0..genus).flat_map(|i| {
        let (a, b) = (2 * i, 2 * i + 1);
        [
            Letter::new(a, false),
            Letter::new(b, false),
            Letter::new(a, true),
            Letter::new(b, true),
        ]
    }))
}
