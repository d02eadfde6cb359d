//! Words over the label alphabet `{1, …, n}`.
//!
//! Labels are stored zero-based; they print one-based so that `Word([0, 1])`
//! reads as `12`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i as u8])
    }

    pub fn repeat(i: usize, k: usize) -> Self {
        Word(vec![i as u8; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> impl DoubleEndedIterator<Item = usize> + ExactSizeIterator + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&self, i: usize) -> Word {
        let mut v = self.0.clone();
        v.push(i as u8);
        Word(v)
    }

    pub fn prepend(&self, i: usize) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(i as u8);
        v.extend_from_slice(&self.0);
        Word(v)
    }

    /// `Some(rest)` when `self = prefix · rest`.
    pub fn strip_prefix(&self, prefix: &Word) -> Option<Word> {
        self.0.strip_prefix(prefix.0.as_slice()).map(|r| Word(r.to_vec()))
    }

    /// All words of length `k` over `n` letters, in lexicographic order.
    pub fn all_of_length(n: usize, k: usize) -> Vec<Word> {
        let mut out = vec![Word::empty()];
        for _ in 0..k {
            out = out.iter().flat_map(|w| (0..n).map(move |i| w.push(i))).collect();
        }
        out
    }

    /// All words of length at most `k`, length-lexicographic.
    pub fn up_to_length(n: usize, k: usize) -> Vec<Word> {
        (0..=k).flat_map(|l| Word::all_of_length(n, l)).collect()
    }

    /// Parses one-based digits (`"121"`), or dot-separated labels
    /// (`"1.12.3"`) for alphabets with more than nine letters.
    pub fn parse(s: &str, n: usize) -> Result<Word, Error> {
        let s = s.trim();
        if s.is_empty() || s == "ε" || s == "e" {
            return Ok(Word::empty());
        }
        let parts: Vec<&str> =
            if s.contains('.') { s.split('.').collect() } else { s.split("").filter(|p| !p.is_empty()).collect() };
        parts
            .into_iter()
            .map(|p| {
                let label: usize = p.parse().map_err(|_| Error::Parse(format!("bad label {p:?} in word {s:?}")))?;
                if label == 0 || label > n {
                    return Err(Error::BadLabel { label, n });
                }
                Ok((label - 1) as u8)
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "ε");
        }
        let wide = self.0.iter().any(|&l| l >= 9);
        for (k, l) in self.0.iter().enumerate() {
            if wide && k > 0 {
                write!(f, ".")?;
            }
            write!(f, "{}", l + 1)?;
        }
        Ok(())
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let labels: Vec<usize> = self.labels().map(|l| l + 1).collect();
        labels.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(deserializer)?;
        labels
            .into_iter()
            .map(|l| {
                if l == 0 || l > 255 {
                    Err(serde::de::Error::custom(format!("label {l} out of range")))
                } else {
                    Ok((l - 1) as u8)
                }
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }
}
