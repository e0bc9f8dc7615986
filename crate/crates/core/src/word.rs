//! Freely reduced words in the free group `F_n`.
//!
//! Text grammar: `term := "x" <int> ["^" <signed int>]`, terms separated by
//! whitespace or `*`; the empty string is the identity.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator `x_{gen+1}` or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    /// 0-based generator index.
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The generator `x_{i+1}` (0-based `i`).
    pub fn generator(rank: usize, i: usize) -> Result<Self> {
        Self::from_letters(rank, [Letter::new(i, false)])
    }

    /// Freely reduces the given letters.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(rank: usize, letters: I) -> Result<Self> {
        let mut w = Word::identity(rank);
        for l in letters {
            if l.gen >= rank {
                return Err(Error::IndexOutOfRange {
                    index: l.gen + 1,
                    rank,
                });
            }
            w.push(l);
        }
        Ok(w)
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last().is_some_and(|&last| last.cancels(l)) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
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

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Result<Word> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        let mut out = self.clone();
        for &l in &other.letters {
            out.push(l);
        }
        Ok(out)
    }

    pub fn inv(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base).expect("same rank");
        }
        out
    }

    /// The commutator `a b a^{-1} b^{-1}`.
    pub fn commutator(a: &Word, b: &Word) -> Result<Word> {
        a.mul(b)?.mul(&a.inv())?.mul(&b.inv())
    }

    /// Exponent sums per generator (the image in `H_1(F_n; Z)`).
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut v = vec![0; self.rank];
        for l in &self.letters {
            v[l.gen] += l.sign();
        }
        v
    }

    /// Same letters viewed in a free group of larger rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        Word::from_letters(rank, self.letters.iter().copied())
    }

    pub fn parse(text: &str, rank: usize) -> Result<Word> {
        let letters = parse_letters(text, rank)?;
        Word::from_letters(rank, letters)
    }

    /// Power-compressed text form, parseable by [`Word::parse`].
    pub fn render(&self) -> String {
        let mut terms: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let e = (j - i) as i64 * l.sign();
            terms.push(if e == 1 {
                format!("x{}", l.gen + 1)
            } else {
                format!("x{}^{}", l.gen + 1, e)
            });
            i = j;
        }
        terms.join("*")
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(rank={}, {:?})", self.rank, self.render())
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            f.write_str("1")
        } else {
            f.write_str(&self.render())
        }
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_separators(&mut self) -> bool {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace() || b == b'*') {
            self.pos += 1;
        }
        self.pos > start
    }

    fn unsigned(&mut self) -> Result<u64> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse {
                pos: start,
                msg: "integer too large".into(),
            })
    }

    fn signed(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        let v = i64::try_from(self.unsigned()?).map_err(|_| Error::Parse {
            pos: start,
            msg: "integer too large".into(),
        })?;
        Ok(if neg { -v } else { v })
    }
}

fn parse_letters(text: &str, rank: usize) -> Result<Vec<Letter>> {
    let mut c = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut out = Vec::new();
    c.skip_separators();
    let mut first = true;
    while c.peek().is_some() {
        if !first && !c.skip_separators() {
            return Err(c.err("expected '*' or whitespace between terms"));
        }
        if c.peek().is_none() {
            break;
        }
        first = false;
        if c.peek() != Some(b'x') {
            return Err(c.err("expected 'x'"));
        }
        c.pos += 1;
        let idx = c.unsigned()? as usize;
        if idx == 0 || idx > rank {
            return Err(Error::IndexOutOfRange { index: idx, rank });
        }
        let exp = if c.peek() == Some(b'^') {
            c.pos += 1;
            c.signed()?
        } else {
            1
        };
        let l = Letter::new(idx - 1, exp < 0);
        out.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
    }
    Ok(out)
}

/// JSON form: `{"rank": n, "letters": [[1,1],[2,-1]]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct WordJson {
    pub rank: usize,
    pub letters: Vec<(usize, i64)>,
}

impl From<&Word> for WordJson {
    fn from(w: &Word) -> Self {
        WordJson {
            rank: w.rank,
            letters: w.letters.iter().map(|l| (l.gen + 1, l.sign())).collect(),
        }
    }
}

impl TryFrom<WordJson> for Word {
    type Error = Error;
    fn try_from(j: WordJson) -> Result<Word> {
        let letters = j
            .letters
            .iter()
            .map(|&(g, s)| {
                if g == 0 || g > j.rank {
                    return Err(Error::IndexOutOfRange {
                        index: g,
                        rank: j.rank,
                    });
                }
                match s {
                    1 => Ok(Letter::new(g - 1, false)),
                    -1 => Ok(Letter::new(g - 1, true)),
                    _ => Err(Error::Json(format!("letter sign must be ±1, got {s}"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Word::from_letters(j.rank, letters)
    }
}
