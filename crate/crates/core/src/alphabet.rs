//! Letters, alphabets and ultimately periodic (lasso) words.
//!
//! A letter is a set of atomic propositions, encoded as a bitmask over the
//! alphabet's proposition list. An [`Alphabet`] fixes the proposition names and
//! the letter universe, which is either every subset of the propositions or a
//! caller-supplied restriction (e.g. mutually exclusive propositions).

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of atomic propositions as a bitmask over [`Alphabet::aps`].
pub type Letter = u32;

/// Mask reserved for a synthetic letter outside every proposition universe.
pub const FRESH_LETTER: Letter = u32::MAX;

pub const MAX_APS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AlphabetRepr")]
pub struct Alphabet {
    aps: Vec<String>,
    letters: Vec<Letter>,
    #[serde(skip)]
    index: HashMap<Letter, usize>,
}

#[derive(Deserialize)]
struct AlphabetRepr {
    aps: Vec<String>,
    letters: Vec<Letter>,
}

impl TryFrom<AlphabetRepr> for Alphabet {
    type Error = Error;

    fn try_from(r: AlphabetRepr) -> Result<Self> {
        Alphabet::restricted(&r.aps, r.letters)
    }
}

impl Alphabet {
    /// All subsets of `aps`, ordered by bitmask.
    pub fn full<S: AsRef<str>>(aps: &[S]) -> Result<Self> {
        if aps.len() > MAX_APS {
            return Err(Error::InvalidParameter(format!(
                "at most {MAX_APS} atomic propositions are supported"
            )));
        }
        let letters = (0..(1u32 << aps.len())).collect();
        Self::restricted(aps, letters)
    }

    /// A letter universe given explicitly; letters are kept in the given order.
    pub fn restricted<S: AsRef<str>>(aps: &[S], letters: Vec<Letter>) -> Result<Self> {
        let aps: Vec<String> = aps.iter().map(|s| s.as_ref().to_string()).collect();
        let mut seen = BTreeSet::new();
        for ap in &aps {
            if !seen.insert(ap.as_str()) {
                return Err(Error::InvalidParameter(format!("duplicate proposition `{ap}`")));
            }
        }
        if aps.len() > MAX_APS {
            return Err(Error::InvalidParameter(format!(
                "at most {MAX_APS} atomic propositions are supported"
            )));
        }
        if letters.is_empty() {
            return Err(Error::InvalidParameter("alphabet has no letters".into()));
        }
        let universe = if aps.is_empty() { 0 } else { u32::MAX >> (32 - aps.len()) };
        for &l in &letters {
            if l & !universe != 0 {
                return Err(Error::InvalidParameter(format!(
                    "letter {l:#b} uses propositions outside the declared set"
                )));
            }
        }
        let mut a = Alphabet {
            aps,
            letters,
            index: HashMap::new(),
        };
        a.rebuild_index()?;
        Ok(a)
    }

    /// The same alphabet with one extra letter that no lasso word can contain.
    /// Its index is the old `len()`.
    pub fn with_fresh_letter(&self) -> Self {
        let mut a = self.clone();
        a.letters.push(FRESH_LETTER);
        a.index.insert(FRESH_LETTER, a.letters.len() - 1);
        a
    }

    fn rebuild_index(&mut self) -> Result<()> {
        self.index.clear();
        for (i, &l) in self.letters.iter().enumerate() {
            if self.index.insert(l, i).is_some() {
                return Err(Error::InvalidParameter(format!("duplicate letter {l:#b}")));
            }
        }
        Ok(())
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn ap_index(&self, name: &str) -> Option<usize> {
        self.aps.iter().position(|a| a == name)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn letter(&self, index: usize) -> Letter {
        self.letters[index]
    }

    pub fn index_of(&self, letter: Letter) -> Option<usize> {
        self.index.get(&letter).copied()
    }

    /// Same propositions and same letter universe (order included).
    pub fn compatible(&self, other: &Alphabet) -> bool {
        self.aps == other.aps && self.letters == other.letters
    }

    /// `{a b}` style rendering used by the lasso syntax.
    pub fn letter_name(&self, letter: Letter) -> String {
        if letter == FRESH_LETTER {
            return "ε".into();
        }
        let names: Vec<&str> = (0..self.aps.len())
            .filter(|&i| letter & (1 << i) != 0)
            .map(|i| self.aps[i].as_str())
            .collect();
        format!("{{{}}}", names.join(" "))
    }

    /// Boolean rendering (`a & !b`) used in DOT labels.
    pub fn letter_formula(&self, letter: Letter) -> String {
        if letter == FRESH_LETTER {
            return "ε".into();
        }
        if self.aps.is_empty() {
            return "true".into();
        }
        let lits: Vec<String> = self
            .aps
            .iter()
            .enumerate()
            .map(|(i, ap)| {
                if letter & (1 << i) != 0 {
                    ap.clone()
                } else {
                    format!("!{ap}")
                }
            })
            .collect();
        lits.join(" & ")
    }
}

/// An ultimately periodic word `prefix · period^ω`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LassoWord {
    pub prefix: Vec<Letter>,
    pub period: Vec<Letter>,
}

impl LassoWord {
    pub fn new(prefix: Vec<Letter>, period: Vec<Letter>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::InvalidParameter("lasso period must be non-empty".into()));
        }
        Ok(LassoWord { prefix, period })
    }

    /// Number of distinct positions, `|u| + |v|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    /// Position reached after reading the letter at `pos`.
    pub fn succ(&self, pos: usize) -> usize {
        if pos + 1 < self.positions() {
            pos + 1
        } else {
            self.prefix.len()
        }
    }

    /// Letter at a folded position in `0..positions()`.
    pub fn at(&self, pos: usize) -> Letter {
        if pos < self.prefix.len() {
            self.prefix[pos]
        } else {
            self.period[pos - self.prefix.len()]
        }
    }

    /// Letter at an arbitrary moment of the infinite word.
    pub fn letter_at_moment(&self, moment: usize) -> Letter {
        self.at(self.fold(moment))
    }

    /// Folds an arbitrary moment onto `0..positions()`.
    pub fn fold(&self, moment: usize) -> usize {
        if moment < self.prefix.len() {
            moment
        } else {
            self.prefix.len() + (moment - self.prefix.len()) % self.period.len()
        }
    }

    /// The same word written as `(u·v, v)`.
    pub fn unrolled(&self) -> LassoWord {
        let mut prefix = self.prefix.clone();
        prefix.extend_from_slice(&self.period);
        LassoWord {
            prefix,
            period: self.period.clone(),
        }
    }

    /// Prepends a finite word.
    pub fn after_prefix(&self, p: &[Letter]) -> LassoWord {
        let mut prefix = p.to_vec();
        prefix.extend_from_slice(&self.prefix);
        LassoWord {
            prefix,
            period: self.period.clone(),
        }
    }

    /// Whether every letter belongs to `alphabet`.
    pub fn is_over(&self, alphabet: &Alphabet) -> bool {
        self.prefix
            .iter()
            .chain(&self.period)
            .all(|&l| l != FRESH_LETTER && alphabet.index_of(l).is_some())
    }

    /// Letter indices into `alphabet` for every folded position.
    pub fn indices(&self, alphabet: &Alphabet) -> Result<Vec<usize>> {
        (0..self.positions())
            .map(|p| {
                let l = self.at(p);
                alphabet
                    .index_of(l)
                    .filter(|_| l != FRESH_LETTER)
                    .ok_or_else(|| Error::InvalidParameter(format!("letter {l:#b} is not in the alphabet")))
            })
            .collect()
    }

    /// Shortest representation of the same infinite word: primitive period,
    /// then the prefix rolled back into the period as far as possible.
    pub fn canonical(&self) -> LassoWord {
        let mut period = self.period.clone();
        let n = period.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (0..n).all(|i| period[i] == period[i % d]) {
                period.truncate(d);
                break;
            }
        }
        let mut prefix = self.prefix.clone();
        while let Some(&last) = prefix.last() {
            if last != *period.last().expect("period non-empty") {
                break;
            }
            prefix.pop();
            period.rotate_right(1);
        }
        LassoWord { prefix, period }
    }

    /// Parses `{a b}{}...;{a}...`: prefix letters, `;`, period letters.
    pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Self> {
        let (pre, per) = text.split_once(';').ok_or(Error::Parse {
            position: text.len(),
            message: "expected `;` separating prefix and period".into(),
        })?;
        let prefix = parse_letters(pre, 0, alphabet)?;
        let period = parse_letters(per, pre.len() + 1, alphabet)?;
        if period.is_empty() {
            return Err(Error::Parse {
                position: text.len(),
                message: "period must contain at least one letter".into(),
            });
        }
        Ok(LassoWord { prefix, period })
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let mut s = String::new();
        for &l in &self.prefix {
            s.push_str(&alphabet.letter_name(l));
        }
        s.push(';');
        for &l in &self.period {
            s.push_str(&alphabet.letter_name(l));
        }
        s
    }
}

fn parse_letters(text: &str, offset: usize, alphabet: &Alphabet) -> Result<Vec<Letter>> {
    let mut letters = Vec::new();
    let mut rest = text;
    let mut pos = offset;
    loop {
        let trimmed = rest.trim_start();
        pos += rest.len() - trimmed.len();
        rest = trimmed;
        if rest.is_empty() {
            return Ok(letters);
        }
        if !rest.starts_with('{') {
            return Err(Error::Parse {
                position: pos,
                message: "expected `{`".into(),
            });
        }
        let close = rest.find('}').ok_or(Error::Parse {
            position: pos,
            message: "unterminated letter".into(),
        })?;
        let mut letter: Letter = 0;
        for name in rest[1..close].split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()) {
            let i = alphabet.ap_index(name).ok_or_else(|| Error::UnknownAtom(name.to_string()))?;
            letter |= 1 << i;
        }
        if alphabet.index_of(letter).is_none() {
            return Err(Error::Parse {
                position: pos,
                message: format!("letter {} is not in the alphabet", alphabet.letter_name(letter)),
            });
        }
        letters.push(letter);
        pos += close + 1;
        rest = &rest[close + 1..];
    }
}

/// Every distinct infinite word `u·v^ω` with `|u| ≤ max_prefix` and
/// `1 ≤ |v| ≤ max_period`, each in canonical form, in a deterministic order.
pub fn enumerate_lassos(alphabet: &Alphabet, max_prefix: usize, max_period: usize) -> Vec<LassoWord> {
    let letters = alphabet.letters();
    let words_up_to = |max: usize, min: usize| -> Vec<Vec<Letter>> {
        let mut out = Vec::new();
        let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
        for len in 0..=max {
            if len >= min {
                out.extend(layer.iter().cloned());
            }
            if len == max {
                break;
            }
            layer = layer
                .iter()
                .flat_map(|w| {
                    letters.iter().map(move |&l| {
                        let mut w = w.clone();
                        w.push(l);
                        w
                    })
                })
                .collect();
        }
        out
    };
    let prefixes = words_up_to(max_prefix, 0);
    let periods = words_up_to(max_period, 1);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for u in &prefixes {
        for v in &periods {
            let w = LassoWord {
                prefix: u.clone(),
                period: v.clone(),
            }
            .canonical();
            if seen.insert(w.clone()) {
                out.push(w);
            }
        }
    }
    out
}

/// Every finite word of length exactly `len`.
pub fn words_of_length(alphabet: &Alphabet, len: usize) -> Vec<Vec<Letter>> {
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..len {
        layer = layer
            .iter()
            .flat_map(|w| {
                alphabet.letters().iter().map(move |&l| {
                    let mut w = w.clone();
                    w.push(l);
                    w
                })
            })
            .collect();
    }
    layer
}

pub fn display_finite(alphabet: &Alphabet, word: &[Letter]) -> String {
    let mut s = String::new();
    for &l in word {
        let _ = write!(s, "{}", alphabet.letter_name(l));
    }
    s
}
