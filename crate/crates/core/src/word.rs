//! Letters, words and free reduction.
//!
//! A generating set is always symmetrized: generator `i` contributes the two
//! letters `i` and `i⁻¹`. Letters are totally ordered as `a < A < b < B < …`,
//! and that order drives every shortlex choice in the crate.

use std::fmt;

use crate::error::{Error, Result};

/// A generator or its formal inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u32);

impl Letter {
    pub fn new(generator: usize, inverse: bool) -> Self {
        Letter((generator as u32) << 1 | inverse as u32)
    }

    /// The letter with position `code` in the symmetrized order.
    pub fn from_code(code: usize) -> Self {
        Letter(code as u32)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn generator(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 & 1 == 1
    }

    /// +1 for a generator, -1 for an inverse.
    pub fn sign(self) -> i64 {
        if self.is_inverse() {
            -1
        } else {
            1
        }
    }

    pub fn inverse(self) -> Self {
        Letter(self.0 ^ 1)
    }

    /// Renders the letter with lowercase names for generators and uppercase for inverses.
    pub fn render(self, names: &[String]) -> String {
        let name = names
            .get(self.generator())
            .cloned()
            .unwrap_or_else(|| format!("g{}", self.generator()));
        if self.is_inverse() {
            name.to_uppercase()
        } else {
            name
        }
    }
}

/// A finite sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.0.iter()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|l| l.render(names))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..26u8).map(|i| ((b'a' + i) as char).to_string()).collect();
        f.write_str(&self.render(&names))
    }
}

/// Appends letters to `buffer`, cancelling adjacent inverse pairs as it goes.
pub(crate) fn push_reduced(buffer: &mut Vec<Letter>, letters: impl IntoIterator<Item = Letter>) {
    for l in letters {
        if buffer.last() == Some(&l.inverse()) {
            buffer.pop();
        } else {
            buffer.push(l);
        }
    }
}

/// Returns the freely reduced word equal to `w` in the free group.
pub fn free_reduce(w: &Word) -> Word {
    let mut out = Vec::with_capacity(w.len());
    push_reduced(&mut out, w.iter().copied());
    Word(out)
}

/// Parses a word string over single-letter generator names.
///
/// Grammar: a sequence of tokens separated by optional whitespace, commas
/// are not allowed. Each token is a generator name (lowercase) or its
/// inverse (uppercase), optionally followed by `^k` with `k` a signed
/// integer. `1` and the empty string denote the identity.
pub fn parse_word(s: &str, names: &[String]) -> Result<Word> {
    let mut letters = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '1' && !next_is_exponent(&chars, i + 1) {
            i += 1;
            continue;
        }
        let lower = c.to_ascii_lowercase().to_string();
        let generator = names
            .iter()
            .position(|n| *n == lower)
            .ok_or_else(|| Error::Spec(format!("unknown generator '{c}' in word \"{s}\"")))?;
        let inverse = c.is_ascii_uppercase();
        i += 1;
        let mut exponent: i64 = 1;
        if next_is_exponent(&chars, i) {
            i += 1;
            let start = i;
            if i < chars.len() && (chars[i] == '-' || chars[i] == '+') {
                i += 1;
            }
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            exponent = text
                .parse()
                .map_err(|_| Error::Spec(format!("bad exponent '{text}' in word \"{s}\"")))?;
        }
        let letter = Letter::new(generator, inverse);
        let letter = if exponent < 0 { letter.inverse() } else { letter };
        letters.extend(std::iter::repeat_n(letter, exponent.unsigned_abs() as usize));
    }
    Ok(Word(letters))
}

fn next_is_exponent(chars: &[char], i: usize) -> bool {
    chars.get(i) == Some(&'^')
}

/// Default generator names `a, b, c, …`.
pub fn default_names(rank: usize) -> Vec<String> {
    (0..rank)
        .map(|i| ((b'a' + (i % 26) as u8) as char).to_string())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        parse_word(s, &default_names(3)).unwrap()
    }

    #[test]
    fn cancellation() {
        assert_eq!(free_reduce(&w("a A b")), w("b"));
        assert_eq!(free_reduce(&Word::empty()), Word::empty());
        assert_eq!(free_reduce(&w("a b B a")), w("a a"));
    }

    #[test]
    fn letter_order_is_a_then_inverse() {
        let a = Letter::new(0, false);
        let big_a = Letter::new(0, true);
        let b = Letter::new(1, false);
        assert!(a < big_a && big_a < b);
        assert_eq!(a.inverse(), big_a);
    }

    #[test]
    fn exponents_parse() {
        assert_eq!(w("a^3"), w("aaa"));
        assert_eq!(w("a^-2 b"), w("A A b"));
        assert_eq!(w("1"), Word::empty());
        assert!(parse_word("q", &default_names(2)).is_err());
    }

    #[test]
    fn render_round_trips() {
        let names = default_names(2);
        let word = w("a B A b");
        assert_eq!(parse_word(&word.render(&names), &names).unwrap(), word);
    }
}
