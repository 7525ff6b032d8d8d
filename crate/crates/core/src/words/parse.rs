use super::{Letter, Word};
use crate::error::{Error, Result};

/// Whether uppercase single letters may stand for inverses.
pub(crate) fn shorthand_enabled(names: &[String]) -> bool {
    names
        .iter()
        .all(|n| n.len() == 1 && n.chars().all(|c| c.is_ascii_lowercase()))
}

pub(crate) fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses a word such as `"a b A B"`, `"a1 b1 a1^-1"` or `"a^3 * b"`.
///
/// Tokens are separated by whitespace or `*`. A token is a generator name,
/// optionally followed by `^k` for an integer `k`. When every generator name
/// is a single lowercase letter, the uppercase letter denotes the inverse.
/// The token `1` denotes the identity.
pub fn parse_word(text: &str, names: &[String]) -> Result<Word> {
    let shorthand = shorthand_enabled(names);
    let mut letters = Vec::new();
    for token in text
        .split(|c: char| c.is_whitespace() || c == '*')
        .filter(|t| !t.is_empty())
    {
        if token == "1" {
            continue;
        }
        let (base, exponent) = match token.split_once('^') {
            Some((b, e)) => {
                let k: i64 = e
                    .parse()
                    .map_err(|_| Error::Syntax(format!("bad exponent in token `{token}`")))?;
                (b, k)
            }
            None => (token, 1),
        };
        if !valid_name(base) {
            return Err(Error::Syntax(format!("malformed token `{token}`")));
        }
        let (generator, inverse) = if let Some(k) = names.iter().position(|n| n == base) {
            (k, false)
        } else if shorthand && base.len() == 1 && base.chars().all(|c| c.is_ascii_uppercase()) {
            let lower = base.to_ascii_lowercase();
            match names.iter().position(|n| *n == lower) {
                Some(k) => (k, true),
                None => return Err(Error::UnknownGenerator(base.to_string())),
            }
        } else {
            return Err(Error::UnknownGenerator(base.to_string()));
        };
        let letter = Letter::new(generator, inverse ^ (exponent < 0));
        for _ in 0..exponent.unsigned_abs() {
            letters.push(letter);
        }
    }
    Ok(Word::from_letters(letters))
}

/// Renders a word so that [`parse_word`] reads it back unchanged.
pub fn render_word(word: &Word, names: &[String]) -> String {
    if word.is_identity() {
        return "1".to_string();
    }
    let shorthand = shorthand_enabled(names);
    word.letters()
        .iter()
        .map(|l| {
            let name = &names[l.generator];
            match (l.inverse, shorthand) {
                (false, _) => name.clone(),
                (true, true) => name.to_ascii_uppercase(),
                (true, false) => format!("{name}^-1"),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}
