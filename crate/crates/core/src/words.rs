//! Graded words over the alphabet `x_1, ..., x_m` with `deg(x_i) = i`.
//!
//! Every series type in the crate is indexed by [`Word`]. The canonical term
//! order sorts by degree ascending, then by length descending, then
//! lexicographically on letter indices, so each graded component is a
//! contiguous run of an ordered map.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A single letter `x_i`, `i >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(u8);

impl Letter {
    pub fn new(index: usize) -> Result<Self> {
        if index == 0 || index > u8::MAX as usize {
            return Err(Error::InvalidArgument(format!("letter index {index} out of range")));
        }
        Ok(Letter(index as u8))
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A finite word. The degree is cached since it drives every comparison.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<u8>,
    degree: usize,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn letter(i: usize) -> Self {
        assert!(i >= 1 && i <= u8::MAX as usize, "letter index {i} out of range");
        Word { letters: vec![i as u8], degree: i }
    }

    /// Builds a word from letter indices. Panics on a zero index; use
    /// [`Word::parse`] for untrusted input.
    pub fn from_indices(indices: &[usize]) -> Self {
        let mut w = Word::empty();
        for &i in indices {
            w.push(i);
        }
        w
    }

    pub fn push(&mut self, i: usize) {
        assert!(i >= 1 && i <= u8::MAX as usize, "letter index {i} out of range");
        self.letters.push(i as u8);
        self.degree += i;
    }

    pub(crate) fn from_raw(letters: Vec<u8>, degree: usize) -> Self {
        debug_assert_eq!(letters.iter().map(|&b| b as usize).sum::<usize>(), degree);
        Word { letters, degree }
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Letter indices, left to right.
    pub fn indices(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.letters.iter().map(|&b| b as usize)
    }

    pub fn first(&self) -> Option<usize> {
        self.letters.first().map(|&b| b as usize)
    }

    pub fn last(&self) -> Option<usize> {
        self.letters.last().map(|&b| b as usize)
    }

    /// Largest letter index, 0 for the empty word.
    pub fn max_letter(&self) -> usize {
        self.letters.iter().copied().max().unwrap_or(0) as usize
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters, degree: self.degree + other.degree }
    }

    /// `x_i w`
    pub fn prepend(&self, i: usize) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(i as u8);
        letters.extend_from_slice(&self.letters);
        Word { letters, degree: self.degree + i }
    }

    /// `w x_i`
    pub fn append(&self, i: usize) -> Word {
        let mut w = self.clone();
        w.push(i);
        w
    }

    /// The word without its first letter.
    pub fn tail(&self) -> Word {
        match self.letters.split_first() {
            Some((&h, rest)) => Word { letters: rest.to_vec(), degree: self.degree - h as usize },
            None => Word::empty(),
        }
    }

    /// The word without its last letter.
    pub fn init(&self) -> Word {
        match self.letters.split_last() {
            Some((&l, rest)) => Word { letters: rest.to_vec(), degree: self.degree - l as usize },
            None => Word::empty(),
        }
    }

    pub fn check_alphabet(&self, m: usize) -> Result<()> {
        match self.letters.iter().find(|&&b| b as usize > m) {
            Some(&b) => Err(Error::LetterOutOfRange { letter: b as usize, m }),
            None => Ok(()),
        }
    }

    /// Parses `e` or dot-separated letters such as `x1.x2.x1`.
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut w = Word::empty();
        for part in s.split('.') {
            let idx = part
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1 && i <= u8::MAX as usize)
                .ok_or_else(|| Error::Parse(format!("bad letter `{part}` in word `{s}`")))?;
            w.push(idx);
        }
        Ok(w)
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then_with(|| other.letters.len().cmp(&self.letters.len()))
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (k, b) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "x{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Word::parse(s)
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Self {
        Word::letter(l.index())
    }
}

pub fn degree(w: &Word) -> usize {
    w.degree()
}

pub fn compare(a: &Word, b: &Word) -> Ordering {
    a.cmp(b)
}

/// All words over `x_1..x_m` of degree at most `max_degree`, in canonical order.
pub fn enumerate_words(m: usize, max_degree: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for d in 0..=max_degree {
        out.extend(words_of_degree(m, d));
    }
    out
}

/// Words of degree exactly `d`, canonical order.
pub fn words_of_degree(m: usize, d: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = Word::empty();
    fill_compositions(m, d, &mut cur, &mut out);
    out.sort();
    out
}

fn fill_compositions(m: usize, remaining: usize, cur: &mut Word, out: &mut Vec<Word>) {
    if remaining == 0 {
        out.push(cur.clone());
        return;
    }
    for i in 1..=m.min(remaining) {
        cur.push(i);
        fill_compositions(m, remaining - i, cur, out);
        *cur = cur.init();
    }
}
