//! Words over a finite alphabet, their numeric codes, and the partial
//! sequences that spell a word out of joined segments.
//!
//! The code assignment is the bijective positional numbering of nonempty
//! glyph strings: words are ranked by length and then lexicographically by
//! glyph order, and the first word of length one receives code 1. Decoding
//! is therefore total on positive codes and `decode(encode(w)) == w`.
//!
//! A [`PartialSequence`] maps a segment `0..=n` of the naturals to codes and
//! reconstructs its word in *inverse* index order: entry `n` supplies the
//! leftmost segment. Two sequences are equivalent when they reconstruct the
//! same word; [`enumerate_class`] materializes the full (finite) equivalence
//! class of a word relative to a segment vocabulary.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Default rendering of the blank glyph.
pub const DEFAULT_BLANK: &str = "|||";

/// Hard cap on word length for class enumeration; classes grow as
/// `2^(len-1)`.
pub const MAX_CLASS_WORD_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodecError {
    #[error("alphabet must be nonempty")]
    EmptyAlphabet,
    #[error("duplicate glyph {0:?} in alphabet")]
    DuplicateGlyph(String),
    #[error("blank glyph {0:?} must occur in the alphabet exactly once")]
    MissingBlank(String),
    #[error("unknown glyph at byte {at} of {text:?}")]
    UnknownGlyph { text: String, at: usize },
    #[error("the empty word is not employed")]
    EmptyWord,
    #[error("code {0} does not decode to a word")]
    BadCode(u128),
    #[error("word of length {len} exceeds the enumeration cap {cap}")]
    WordTooLong { len: usize, cap: usize },
    #[error("word of length {0} overflows the code space")]
    CodeOverflow(usize),
    #[error("no segmentation of the word over the given codes")]
    NoDecomposition,
}

/// An ordered finite alphabet with a designated blank glyph.
///
/// Glyph order fixes the code assignment, so two alphabets with the same
/// glyphs in different orders encode words differently.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    glyphs: Vec<String>,
    blank: String,
}

impl Alphabet {
    pub fn new<S: Into<String>>(
        glyphs: impl IntoIterator<Item = S>,
        blank: impl Into<String>,
    ) -> Result<Self, CodecError> {
        let glyphs: Vec<String> = glyphs.into_iter().map(Into::into).collect();
        let blank = blank.into();
        if glyphs.is_empty() {
            return Err(CodecError::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for g in &glyphs {
            if !seen.insert(g.clone()) {
                return Err(CodecError::DuplicateGlyph(g.clone()));
            }
        }
        if glyphs.iter().filter(|g| **g == blank).count() != 1 {
            return Err(CodecError::MissingBlank(blank));
        }
        Ok(Alphabet { glyphs, blank })
    }

    /// Lower-case letters, the comma, and the blank glyph `|||`.
    pub fn latin() -> Self {
        let mut glyphs: Vec<String> = ('a'..='z').map(|c| c.to_string()).collect();
        glyphs.push(",".to_string());
        glyphs.push(DEFAULT_BLANK.to_string());
        Alphabet::new(glyphs, DEFAULT_BLANK).unwrap()
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn glyphs(&self) -> &[String] {
        &self.glyphs
    }

    pub fn blank(&self) -> &str {
        &self.blank
    }

    fn glyph_index(&self, g: &str) -> Option<usize> {
        self.glyphs.iter().position(|x| x == g)
    }

    /// Tokenizes `text` into glyphs, preferring the longest match at each
    /// position.
    pub fn tokenize(&self, text: &str) -> Result<Word, CodecError> {
        let mut glyphs = Vec::new();
        let mut rest = text;
        let mut at = 0;
        while !rest.is_empty() {
            let hit = self
                .glyphs
                .iter()
                .filter(|g| rest.starts_with(g.as_str()))
                .max_by_key(|g| g.len());
            match hit {
                Some(g) => {
                    glyphs.push(g.clone());
                    at += g.len();
                    rest = &rest[g.len()..];
                }
                None => {
                    return Err(CodecError::UnknownGlyph {
                        text: text.to_string(),
                        at,
                    })
                }
            }
        }
        Word::new(glyphs)
    }
}

/// A nonempty finite glyph string.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    glyphs: Vec<String>,
}

impl Word {
    pub fn new<S: Into<String>>(glyphs: impl IntoIterator<Item = S>) -> Result<Self, CodecError> {
        let glyphs: Vec<String> = glyphs.into_iter().map(Into::into).collect();
        if glyphs.is_empty() {
            return Err(CodecError::EmptyWord);
        }
        Ok(Word { glyphs })
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn glyphs(&self) -> &[String] {
        &self.glyphs
    }

    /// Juxtaposition: the glyphs of `self` followed by the glyphs of `other`.
    pub fn join(&self, other: &Word) -> Word {
        let mut glyphs = self.glyphs.clone();
        glyphs.extend(other.glyphs.iter().cloned());
        Word { glyphs }
    }

    /// The contiguous subword covering glyph positions `start..end`.
    pub fn subword(&self, start: usize, end: usize) -> Option<Word> {
        if start < end && end <= self.glyphs.len() {
            Some(Word {
                glyphs: self.glyphs[start..end].to_vec(),
            })
        } else {
            None
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.glyphs {
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

/// The positive natural assigned to a word by the fixed bijection.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct Code(pub u128);

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Encodes a word in bijective base `|alphabet|`.
pub fn encode(w: &Word, alphabet: &Alphabet) -> Result<Code, CodecError> {
    let m = alphabet.len() as u128;
    let mut value: u128 = 0;
    for g in w.glyphs() {
        let idx = alphabet
            .glyph_index(g)
            .ok_or_else(|| CodecError::UnknownGlyph {
                text: g.clone(),
                at: 0,
            })?;
        value = value
            .checked_mul(m)
            .and_then(|v| v.checked_add(idx as u128 + 1))
            .ok_or(CodecError::CodeOverflow(w.len()))?;
    }
    Ok(Code(value))
}

/// Decodes a positive code back to its word.
pub fn decode(code: Code, alphabet: &Alphabet) -> Result<Word, CodecError> {
    if code.0 == 0 {
        return Err(CodecError::BadCode(0));
    }
    let m = alphabet.len() as u128;
    let mut rest = code.0;
    let mut glyphs = Vec::new();
    while rest > 0 {
        let digit = (rest - 1) % m; // glyph index of the rightmost remaining position
        glyphs.push(alphabet.glyphs[digit as usize].clone());
        rest = (rest - 1) / m;
    }
    glyphs.reverse();
    Ok(Word { glyphs })
}

/// A map from the segment `0..=n` of the naturals into word codes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PartialSequence {
    entries: Vec<Code>,
}

impl PartialSequence {
    pub fn new(entries: Vec<Code>) -> Result<Self, CodecError> {
        if entries.is_empty() {
            return Err(CodecError::EmptyWord);
        }
        Ok(PartialSequence { entries })
    }

    /// `f(i)` for `i` in `0..=dom_upper`.
    pub fn get(&self, i: usize) -> Option<Code> {
        self.entries.get(i).copied()
    }

    /// The `n` with domain `[0, n]`.
    pub fn dom_upper(&self) -> usize {
        self.entries.len() - 1
    }

    pub fn entries(&self) -> &[Code] {
        &self.entries
    }
}

/// Reconstructs the word of a partial sequence: segments are decoded and
/// joined from entry `n` down to entry `0`.
pub fn word_of(f: &PartialSequence, alphabet: &Alphabet) -> Result<Word, CodecError> {
    let mut word: Option<Word> = None;
    for code in f.entries().iter().rev() {
        let seg = decode(*code, alphabet)?;
        word = Some(match word {
            None => seg,
            Some(w) => w.join(&seg),
        });
    }
    Ok(word.expect("domain is nonempty"))
}

/// Whether two partial sequences reconstruct the identical word.
pub fn equivalent(
    f: &PartialSequence,
    g: &PartialSequence,
    alphabet: &Alphabet,
) -> Result<bool, CodecError> {
    Ok(word_of(f, alphabet)? == word_of(g, alphabet)?)
}

/// The equivalence class of a word: every partial sequence over a segment
/// vocabulary that reconstructs it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReadableSentence {
    pub representative: Word,
    pub members: Vec<PartialSequence>,
}

impl ReadableSentence {
    /// Members lying in `H^k`, i.e. with domain `[0, k]`.
    pub fn members_with_dom_upper(&self, k: usize) -> usize {
        self.members.iter().filter(|m| m.dom_upper() == k).count()
    }
}

/// Codes of every nonempty contiguous subword, the usual segment vocabulary.
pub fn all_subword_codes(w: &Word, alphabet: &Alphabet) -> Result<BTreeSet<Code>, CodecError> {
    let mut out = BTreeSet::new();
    for start in 0..w.len() {
        for end in start + 1..=w.len() {
            out.insert(encode(&w.subword(start, end).unwrap(), alphabet)?);
        }
    }
    Ok(out)
}

/// Materializes the full equivalence class of `w` over segment codes `h`.
///
/// Each member corresponds to one way of splitting `w` into consecutive
/// segments drawn from `h`; the leftmost segment lands at the top index.
pub fn enumerate_class(
    w: &Word,
    h: &BTreeSet<Code>,
    alphabet: &Alphabet,
) -> Result<ReadableSentence, CodecError> {
    if w.len() > MAX_CLASS_WORD_LEN {
        return Err(CodecError::WordTooLong {
            len: w.len(),
            cap: MAX_CLASS_WORD_LEN,
        });
    }
    let mut members = Vec::new();
    let mut split = Vec::new();
    segmentations(w, 0, h, alphabet, &mut split, &mut members)?;
    if members.is_empty() {
        return Err(CodecError::NoDecomposition);
    }
    members.sort();
    Ok(ReadableSentence {
        representative: w.clone(),
        members,
    })
}

fn segmentations(
    w: &Word,
    from: usize,
    h: &BTreeSet<Code>,
    alphabet: &Alphabet,
    split: &mut Vec<Code>,
    out: &mut Vec<PartialSequence>,
) -> Result<(), CodecError> {
    if from == w.len() {
        // Left-to-right segments occupy descending indices.
        let entries: Vec<Code> = split.iter().rev().copied().collect();
        out.push(PartialSequence::new(entries)?);
        return Ok(());
    }
    for end in from + 1..=w.len() {
        let code = encode(&w.subword(from, end).unwrap(), alphabet)?;
        if h.contains(&code) {
            split.push(code);
            segmentations(w, end, h, alphabet, split, out)?;
            split.pop();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> Alphabet {
        Alphabet::new(["a", "b", DEFAULT_BLANK], DEFAULT_BLANK).unwrap()
    }

    fn word(alphabet: &Alphabet, text: &str) -> Word {
        alphabet.tokenize(text).unwrap()
    }

    #[test]
    fn alphabet_validation() {
        assert_eq!(
            Alphabet::new(Vec::<String>::new(), "|||"),
            Err(CodecError::EmptyAlphabet)
        );
        assert!(matches!(
            Alphabet::new(["a", "a", "|||"], "|||"),
            Err(CodecError::DuplicateGlyph(_))
        ));
        assert!(matches!(
            Alphabet::new(["a", "b"], "|||"),
            Err(CodecError::MissingBlank(_))
        ));
    }

    #[test]
    fn first_glyph_encodes_to_one() {
        let a = abc();
        let w = word(&a, "a");
        let code = encode(&w, &a).unwrap();
        assert_eq!(code, Code(1));
        assert_eq!(decode(code, &a).unwrap(), w);
    }

    #[test]
    fn encode_rejects_foreign_glyphs() {
        let a = abc();
        let w = Word::new(["z"]).unwrap();
        assert!(matches!(
            encode(&w, &a),
            Err(CodecError::UnknownGlyph { .. })
        ));
    }

    #[test]
    fn round_trip_all_short_words() {
        // Brute-force oracle: enumerate every word of length <= 3 directly.
        let a = abc();
        let mut seen = BTreeSet::new();
        for len in 1..=3usize {
            let mut stack = vec![Vec::new()];
            while let Some(prefix) = stack.pop() {
                if prefix.len() == len {
                    let w = Word::new(prefix.clone()).unwrap();
                    let code = encode(&w, &a).unwrap();
                    assert_eq!(decode(code, &a).unwrap(), w);
                    assert!(seen.insert(code), "codes must be distinct");
                    continue;
                }
                for g in a.glyphs() {
                    let mut next = prefix.clone();
                    next.push(g.clone());
                    stack.push(next);
                }
            }
        }
        // ab sits in the length-2 block, ranked after the length-1 words.
        let ab = word(&abc(), "ab");
        assert_eq!(encode(&ab, &abc()).unwrap(), Code(5));
    }

    #[test]
    fn join_concatenates() {
        let a = Alphabet::latin();
        let math = word(&a, "math");
        let ematics = word(&a, "ematics");
        assert_eq!(math.join(&ematics).to_string(), "mathematics");
        let x = word(&a, "x");
        assert_eq!(x.join(&x).len(), 2);
        let (p, q, r) = (word(&a, "p"), word(&a, "q"), word(&a, "r"));
        assert_eq!(p.join(&q).join(&r), p.join(&q.join(&r)));
    }

    #[test]
    fn word_of_reads_in_inverse_order() {
        let a = Alphabet::latin();
        let seq = |texts: &[&str]| {
            PartialSequence::new(
                texts
                    .iter()
                    .map(|t| encode(&word(&a, t), &a).unwrap())
                    .collect(),
            )
            .unwrap()
        };
        // f(3)=math, f(2)=e, f(1)=mat, f(0)=ics reconstructs the syllables
        // left to right from the top index down.
        let f = seq(&["ics", "mat", "e", "math"]);
        assert_eq!(word_of(&f, &a).unwrap().to_string(), "mathematics");

        let single = seq(&["mathematics"]);
        assert_eq!(word_of(&single, &a).unwrap().to_string(), "mathematics");

        // f(1)=code("b"), f(0)=code("a") gives "ba", not "ab".
        let f = seq(&["a", "b"]);
        assert_eq!(word_of(&f, &a).unwrap().to_string(), "ba");
    }

    #[test]
    fn word_of_rejects_code_zero() {
        let a = abc();
        let f = PartialSequence::new(vec![Code(0)]).unwrap();
        assert_eq!(word_of(&f, &a), Err(CodecError::BadCode(0)));
    }

    #[test]
    fn equivalence_examples() {
        let a = abc();
        let ab = word(&a, "ab");
        let whole = PartialSequence::new(vec![encode(&ab, &a).unwrap()]).unwrap();
        let split = PartialSequence::new(vec![
            encode(&word(&a, "b"), &a).unwrap(),
            encode(&word(&a, "a"), &a).unwrap(),
        ])
        .unwrap();
        assert!(equivalent(&whole, &split, &a).unwrap());
        assert!(equivalent(&whole, &whole, &a).unwrap());

        let ba = PartialSequence::new(vec![encode(&word(&a, "ba"), &a).unwrap()]).unwrap();
        assert!(!equivalent(&whole, &ba, &a).unwrap());
    }

    #[test]
    fn class_of_two_glyph_word() {
        let a = abc();
        let ab = word(&a, "ab");
        let h = all_subword_codes(&ab, &a).unwrap();
        let class = enumerate_class(&ab, &h, &a).unwrap();
        assert_eq!(class.members.len(), 2);
        assert_eq!(class.members_with_dom_upper(0), 1);
        assert_eq!(class.members_with_dom_upper(1), 1);
        for m in &class.members {
            assert_eq!(word_of(m, &a).unwrap(), ab);
        }
    }

    #[test]
    fn class_size_matches_composition_count() {
        let a = abc();
        let w = word(&a, "aba");
        let h = all_subword_codes(&w, &a).unwrap();
        let class = enumerate_class(&w, &h, &a).unwrap();
        assert_eq!(class.members.len(), 4); // compositions of 3
    }

    #[test]
    fn class_with_single_code() {
        let a = abc();
        let ab = word(&a, "ab");
        let h: BTreeSet<Code> = [encode(&ab, &a).unwrap()].into();
        let class = enumerate_class(&ab, &h, &a).unwrap();
        assert_eq!(class.members.len(), 1);

        let only_b: BTreeSet<Code> = [encode(&word(&a, "b"), &a).unwrap()].into();
        assert_eq!(
            enumerate_class(&ab, &only_b, &a),
            Err(CodecError::NoDecomposition)
        );
    }

    #[test]
    fn class_enumeration_is_capped() {
        let a = abc();
        let long = Word::new(vec!["a"; 17]).unwrap();
        let h: BTreeSet<Code> = [Code(1)].into();
        assert!(matches!(
            enumerate_class(&long, &h, &a),
            Err(CodecError::WordTooLong { .. })
        ));
    }

    #[test]
    fn tokenize_prefers_longest_glyph() {
        let a = Alphabet::latin();
        let w = a.tokenize("very,|||bold").unwrap();
        assert_eq!(w.len(), 5 + 1 + 4);
        assert_eq!(w.glyphs()[4], ",");
        assert_eq!(w.glyphs()[5], DEFAULT_BLANK);
        assert!(a.tokenize("Very").is_err());
    }
}
