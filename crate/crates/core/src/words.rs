//! Letters, alphabets and freely reduced words.
//!
//! A generator is written as a lowercase character (`a`, `x`) or as an
//! indexed token (`x1`, `x12`); its inverse is the uppercase form (`A`,
//! `X12`). Words are stored freely reduced.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("unexpected character {ch:?} at position {pos}")]
    Lexical { ch: char, pos: usize },
    #[error("letter {letter} at position {pos} is not in the alphabet {{{alphabet}}}")]
    OutsideAlphabet {
        letter: Letter,
        pos: usize,
        alphabet: String,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("alphabet declares {0} twice")]
    DuplicateLetter(Letter),
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("line {line}: {source}")]
    Line {
        line: usize,
        #[source]
        source: Box<WordError>,
    },
}

const CHAR_LETTERS: u32 = 26;

/// A free generator. Single characters sort before indexed letters, and
/// indexed letters sort numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u32);

impl Letter {
    pub fn from_char(ch: char) -> Option<Letter> {
        ch.is_ascii_lowercase().then(|| Letter(ch as u32 - 'a' as u32))
    }

    /// The indexed letter `x<index>`, with `index >= 1`.
    pub fn indexed(index: u32) -> Letter {
        assert!(index >= 1, "indexed letters start at x1");
        Letter(CHAR_LETTERS + index - 1)
    }

    pub fn index(self) -> Option<u32> {
        (self.0 >= CHAR_LETTERS).then(|| self.0 - CHAR_LETTERS + 1)
    }

    pub fn as_char(self) -> Option<char> {
        (self.0 < CHAR_LETTERS).then(|| char::from(b'a' + self.0 as u8))
    }

    fn write_with_case(self, f: &mut fmt::Formatter<'_>, upper: bool) -> fmt::Result {
        match self.as_char() {
            Some(c) if upper => write!(f, "{}", c.to_ascii_uppercase()),
            Some(c) => write!(f, "{c}"),
            None if upper => write!(f, "X{}", self.index().unwrap()),
            None => write!(f, "x{}", self.index().unwrap()),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_with_case(f, false)
    }
}

impl FromStr for Letter {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let w = Word::parse_any(s)?;
        match w.syllables() {
            [syl] if !syl.inverse => Ok(syl.letter),
            _ => Err(WordError::Domain(format!("{s:?} is not a single letter"))),
        }
    }
}

/// A sorted set of distinct letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    letters: Vec<Letter>,
}

impl Alphabet {
    /// Builds an alphabet, rejecting duplicates and the empty list.
    pub fn new(letters: impl IntoIterator<Item = Letter>) -> Result<Alphabet, WordError> {
        let mut seen = BTreeSet::new();
        for l in letters {
            if !seen.insert(l) {
                return Err(WordError::DuplicateLetter(l));
            }
        }
        if seen.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        Ok(Alphabet {
            letters: seen.into_iter().collect(),
        })
    }

    /// Union of letters; may be empty (used for inferred alphabets).
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Alphabet {
        let set: BTreeSet<Letter> = letters.into_iter().collect();
        Alphabet {
            letters: set.into_iter().collect(),
        }
    }

    /// Parses a whitespace separated list such as `"a b c"` or `"x1 x2"`.
    pub fn parse(text: &str) -> Result<Alphabet, WordError> {
        let letters = text
            .split_whitespace()
            .map(Letter::from_str)
            .collect::<Result<Vec<_>, _>>()?;
        Alphabet::new(letters)
    }

    pub fn abc() -> Alphabet {
        Alphabet::parse("a b c").unwrap()
    }

    pub fn xy() -> Alphabet {
        Alphabet::parse("x y").unwrap()
    }

    /// `{x, y}` for two letters, otherwise `x1 .. xn`.
    pub fn standard(size: usize) -> Alphabet {
        if size == 2 {
            Alphabet::xy()
        } else {
            Alphabet::from_letters((1..=size as u32).map(Letter::indexed))
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn contains(&self, l: Letter) -> bool {
        self.letters.binary_search(&l).is_ok()
    }

    /// 1-based position of `l`.
    pub fn position(&self, l: Letter) -> Option<usize> {
        self.letters.binary_search(&l).ok().map(|i| i + 1)
    }

    pub fn union(&self, other: &Alphabet) -> Alphabet {
        Alphabet::from_letters(self.letters.iter().chain(&other.letters).copied())
    }

    /// The next indexed letter not yet in use.
    pub fn fresh_letter(&self) -> Letter {
        let max = self.letters.iter().filter_map(|l| l.index()).max().unwrap_or(0);
        Letter::indexed(max + 1)
    }

    /// Adds a fresh indexed letter and returns it.
    pub fn extend_fresh(&mut self) -> Letter {
        let l = self.fresh_letter();
        self.letters.push(l);
        self.letters.sort();
        l
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Syllable {
    pub letter: Letter,
    pub inverse: bool,
}

impl Syllable {
    pub fn new(letter: Letter, inverse: bool) -> Syllable {
        Syllable { letter, inverse }
    }

    pub fn inv(self) -> Syllable {
        Syllable {
            letter: self.letter,
            inverse: !self.inverse,
        }
    }
}

impl fmt::Display for Syllable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letter.write_with_case(f, self.inverse)
    }
}

/// A freely reduced word.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word {
    syllables: Vec<Syllable>,
}

impl Word {
    pub fn empty() -> Word {
        Word::default()
    }

    /// Freely reduces an arbitrary syllable sequence.
    pub fn reduce(syllables: impl IntoIterator<Item = Syllable>) -> Word {
        let mut out: Vec<Syllable> = Vec::new();
        for s in syllables {
            if out.last() == Some(&s.inv()) {
                out.pop();
            } else {
                out.push(s);
            }
        }
        Word { syllables: out }
    }

    pub fn letter(l: Letter) -> Word {
        Word {
            syllables: vec![Syllable::new(l, false)],
        }
    }

    /// Parses a word, checking every letter against `alphabet`.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Word, WordError> {
        let tokens = tokenize(text)?;
        for &(pos, syl) in &tokens {
            if !alphabet.contains(syl.letter) {
                return Err(WordError::OutsideAlphabet {
                    letter: syl.letter,
                    pos,
                    alphabet: alphabet.to_string(),
                });
            }
        }
        Ok(Word::reduce(tokens.into_iter().map(|(_, s)| s)))
    }

    /// Parses a word over whatever letters it uses.
    pub fn parse_any(text: &str) -> Result<Word, WordError> {
        Ok(Word::reduce(tokenize(text)?.into_iter().map(|(_, s)| s)))
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn len(&self) -> usize {
        self.syllables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.syllables.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.syllables.iter().map(|s| s.letter)
    }

    pub fn alphabet(&self) -> Alphabet {
        Alphabet::from_letters(self.letters())
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self.syllables.iter().rev().map(|s| s.inv()).collect(),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word::reduce(self.syllables.iter().chain(&other.syllables).copied())
    }

    /// `g · self · g⁻¹`
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.concat(self).concat(&g.inverse())
    }

    pub fn pow(&self, n: usize) -> Word {
        Word::reduce(std::iter::repeat_n(self.syllables.iter().copied(), n).flatten())
    }

    /// Image under the homomorphism sending each letter to `image(letter)`.
    pub fn substitute(&self, mut image: impl FnMut(Letter) -> Word) -> Word {
        let mut parts = Vec::new();
        for s in &self.syllables {
            let w = image(s.letter);
            if s.inverse {
                parts.extend(w.inverse().syllables);
            } else {
                parts.extend(w.syllables);
            }
        }
        Word::reduce(parts)
    }

    /// Cyclically reduced core and the conjugator `g` with `self = g · core · g⁻¹`.
    pub fn cyclic_reduction(&self) -> (Word, Word) {
        let s = &self.syllables;
        let mut k = 0;
        while 2 * k + 1 < s.len() && s[k] == s[s.len() - 1 - k].inv() {
            k += 1;
        }
        (
            Word {
                syllables: s[k..s.len() - k].to_vec(),
            },
            Word {
                syllables: s[..k].to_vec(),
            },
        )
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Syllable)>, WordError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if !ch.is_ascii_alphabetic() {
            return Err(WordError::Lexical { ch, pos: i });
        }
        let start = i;
        let inverse = ch.is_ascii_uppercase();
        i += 1;
        let lower = ch.to_ascii_lowercase();
        let letter = if lower == 'x' && i < chars.len() && chars[i].is_ascii_digit() {
            let mut n: u32 = 0;
            while i < chars.len() && chars[i].is_ascii_digit() {
                n = n
                    .checked_mul(10)
                    .and_then(|n| n.checked_add(chars[i].to_digit(10).unwrap()))
                    .ok_or(WordError::Lexical { ch: chars[i], pos: i })?;
                i += 1;
            }
            if n == 0 {
                return Err(WordError::Lexical {
                    ch: chars[i - 1],
                    pos: i - 1,
                });
            }
            Letter::indexed(n)
        } else {
            Letter::from_char(lower).unwrap()
        };
        out.push((start, Syllable::new(letter, inverse)));
    }
    Ok(out)
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.syllables {
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse_any(s)
    }
}

/// Image under `x ↦ c·a⁻¹`, `y ↦ c·b⁻¹`, where `x < y` are the two letters of
/// `domain`.
pub fn theta_embed(w: &Word, domain: &Alphabet) -> Result<Word, WordError> {
    if domain.len() != 2 {
        return Err(WordError::Domain(format!(
            "the bipartite embedding needs a 2-letter domain, got {{{domain}}}"
        )));
    }
    let [first, second] = [domain.letters()[0], domain.letters()[1]];
    let c = Letter::from_char('c').unwrap();
    let a = Letter::from_char('a').unwrap();
    let b = Letter::from_char('b').unwrap();
    let mut bad = None;
    let image = w.substitute(|l| {
        let target = if l == first {
            a
        } else if l == second {
            b
        } else {
            bad = Some(l);
            a
        };
        Word::reduce([Syllable::new(c, false), Syllable::new(target, true)])
    });
    match bad {
        Some(l) => Err(WordError::Domain(format!(
            "letter {l} is outside the domain {{{domain}}}"
        ))),
        None => Ok(image),
    }
}

/// Image under `x_i ↦ y⁻ⁱ·x·yⁱ`, where `i` is the 1-based position of the
/// letter in `alphabet`. This is injective, so it carries subgroups of any
/// finite-rank free group into `F(x, y)` preserving ranks of meets and joins.
pub fn rank2_embed(w: &Word, alphabet: &Alphabet) -> Result<Word, WordError> {
    let x = Word::letter(Letter::from_char('x').unwrap());
    let y = Word::letter(Letter::from_char('y').unwrap());
    let mut bad = None;
    let image = w.substitute(|l| match alphabet.position(l) {
        Some(i) => {
            let yi = y.pow(i);
            yi.inverse().concat(&x).concat(&yi)
        }
        None => {
            bad = Some(l);
            Word::empty()
        }
    });
    match bad {
        Some(l) => Err(WordError::Domain(format!(
            "letter {l} is outside the alphabet {{{alphabet}}}"
        ))),
        None => Ok(image),
    }
}

/// Contents of a subgroup file: generator words and their alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupInput {
    pub alphabet: Alphabet,
    pub generators: Vec<Word>,
}

impl SubgroupInput {
    /// Reads the line format: one word per line, `#` comments, blank lines
    /// ignored, optional `alphabet: …` header.
    pub fn parse(text: &str) -> Result<SubgroupInput, WordError> {
        let mut declared: Option<Alphabet> = None;
        let mut raw = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let wrap = |e: WordError| WordError::Line {
                line: line_no,
                source: Box::new(e),
            };
            if let Some(rest) = line.strip_prefix("alphabet:") {
                declared = Some(Alphabet::parse(rest).map_err(wrap)?);
                continue;
            }
            raw.push((line_no, line.to_string()));
        }
        let mut generators = Vec::with_capacity(raw.len());
        for (line_no, text) in &raw {
            let parsed = match &declared {
                Some(a) => Word::parse(text, a),
                None => Word::parse_any(text),
            };
            generators.push(parsed.map_err(|e| WordError::Line {
                line: *line_no,
                source: Box::new(e),
            })?);
        }
        let alphabet = declared.unwrap_or_else(|| {
            Alphabet::from_letters(generators.iter().flat_map(|w| w.letters().collect::<Vec<_>>()))
        });
        Ok(SubgroupInput { alphabet, generators })
    }
}

/// Parses a list of words given inline, e.g. `["cA", "cBcAbC"]`.
pub fn parse_words<S: AsRef<str>>(texts: &[S]) -> Result<Vec<Word>, WordError> {
    texts.iter().map(|t| Word::parse_any(t.as_ref())).collect()
}
