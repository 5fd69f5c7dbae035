//! The category of tapes.
//!
//! Objects are finite strings over a fixed alphabet and a morphism `A -> B`
//! is an offset at which `A` occurs as a substring of `B`. Composition adds
//! offsets. The empty string is initial: it has exactly one occurrence in
//! every string, always recorded at offset 0.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// Rendering of the empty string in all textual output.
pub const EMPTY_TAPE: &str = "(empty)";

const FORBIDDEN_SYMBOLS: [char; 3] = [',', '-', '>'];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TapeError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet has more than 256 symbols")]
    AlphabetTooLarge,
    #[error("symbol {0:?} appears twice in the alphabet")]
    DuplicateSymbol(char),
    #[error("symbol {0:?} cannot be used in an alphabet")]
    ForbiddenSymbol(char),
    #[error("symbol {symbol:?} is not in the alphabet {alphabet}")]
    UnknownSymbol { symbol: char, alphabet: String },
    #[error("strings are over different alphabets ({left} vs {right})")]
    AlphabetMismatch { left: String, right: String },
    #[error("{source_str} does not occur in {target} at offset {offset}")]
    InvalidOccurrence {
        source_str: String,
        target: String,
        offset: usize,
    },
    #[error(
        "cannot compose: {first} ends at {first_target} but {second} starts at {second_source}"
    )]
    NonComposable {
        first: String,
        first_target: String,
        second: String,
        second_source: String,
    },
}

/// A finite, ordered set of single-character cell symbols.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Alphabet {
    symbols: Vec<char>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Arc<Self>, TapeError> {
        let symbols: Vec<char> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(TapeError::EmptyAlphabet);
        }
        if symbols.len() > 256 {
            return Err(TapeError::AlphabetTooLarge);
        }
        for (i, &c) in symbols.iter().enumerate() {
            if c.is_whitespace() || c.is_control() || FORBIDDEN_SYMBOLS.contains(&c) {
                return Err(TapeError::ForbiddenSymbol(c));
            }
            if symbols[..i].contains(&c) {
                return Err(TapeError::DuplicateSymbol(c));
            }
        }
        Ok(Arc::new(Alphabet { symbols }))
    }

    /// The two-colour alphabet: `.` is a white cell, `#` a black one.
    pub fn binary() -> Arc<Self> {
        Arc::new(Alphabet {
            symbols: vec!['.', '#'],
        })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn index_of(&self, symbol: char) -> Option<u8> {
        self.symbols
            .iter()
            .position(|&s| s == symbol)
            .map(|i| i as u8)
    }

    pub fn symbol(&self, index: u8) -> char {
        self.symbols[index as usize]
    }

    fn describe(&self) -> String {
        let mut out = String::from("{");
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push(*s);
        }
        out.push('}');
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Parses a tape literal. Both `""` and `"(empty)"` denote the empty string.
pub fn parse_tape(alphabet: &Arc<Alphabet>, text: &str) -> Result<TapeString, TapeError> {
    let mut cells = Vec::with_capacity(text.len());
    for c in text.chars() {
        match alphabet.index_of(c) {
            Some(i) => cells.push(i),
            None if text == EMPTY_TAPE => return Ok(TapeString::empty(alphabet)),
            None => {
                return Err(TapeError::UnknownSymbol {
                    symbol: c,
                    alphabet: alphabet.describe(),
                })
            }
        }
    }
    Ok(TapeString::from_indices(alphabet, cells))
}

/// Every string of length at most `max_len`, shortest first and
/// lexicographic (by alphabet order) within a length.
pub fn all_strings(alphabet: &Arc<Alphabet>, max_len: usize) -> Vec<TapeString> {
    let mut out = Vec::new();
    for len in 0..=max_len {
        out.extend(strings_of_length(alphabet, len));
    }
    out
}

pub fn strings_of_length(alphabet: &Arc<Alphabet>, len: usize) -> Vec<TapeString> {
    let base = alphabet.len();
    let mut out = Vec::new();
    let mut digits = vec![0u8; len];
    loop {
        out.push(TapeString::from_indices(alphabet, digits.clone()));
        // odometer increment, rightmost digit fastest
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if (digits[i] as usize) + 1 < base {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
        }
    }
}

/// An object of the tape category.
///
/// Cheap to clone: both the alphabet and the cells are shared.
#[derive(Clone)]
pub struct TapeString {
    alphabet: Arc<Alphabet>,
    cells: Arc<[u8]>,
}

impl TapeString {
    pub fn empty(alphabet: &Arc<Alphabet>) -> Self {
        TapeString {
            alphabet: Arc::clone(alphabet),
            cells: Arc::from(Vec::new()),
        }
    }

    /// Builds a string from symbol indices.
    ///
    /// Panics if an index is outside the alphabet.
    pub fn from_indices(alphabet: &Arc<Alphabet>, cells: Vec<u8>) -> Self {
        assert!(
            cells.iter().all(|&c| (c as usize) < alphabet.len()),
            "cell index outside alphabet"
        );
        TapeString {
            alphabet: Arc::clone(alphabet),
            cells: Arc::from(cells),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = char> + '_ {
        self.cells.iter().map(|&c| self.alphabet.symbol(c))
    }

    pub fn slice(&self, start: usize, len: usize) -> TapeString {
        TapeString {
            alphabet: Arc::clone(&self.alphabet),
            cells: Arc::from(&self.cells[start..start + len]),
        }
    }

    pub fn same_alphabet(&self, other: &TapeString) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || self.alphabet == other.alphabet
    }

    fn check_alphabet(&self, other: &TapeString) -> Result<(), TapeError> {
        if self.same_alphabet(other) {
            Ok(())
        } else {
            Err(TapeError::AlphabetMismatch {
                left: self.alphabet.describe(),
                right: other.alphabet.describe(),
            })
        }
    }

    fn occurs_at(&self, target: &TapeString, offset: usize) -> bool {
        offset
            .checked_add(self.len())
            .is_some_and(|end| end <= target.len() && target.cells[offset..end] == self.cells[..])
    }
}

impl PartialEq for TapeString {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells && self.same_alphabet(other)
    }
}

impl Eq for TapeString {}

impl Hash for TapeString {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cells.hash(state);
    }
}

impl Ord for TapeString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.cells.cmp(&other.cells))
            .then_with(|| self.alphabet.cmp(&other.alphabet))
    }
}

impl PartialOrd for TapeString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TapeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str(EMPTY_TAPE);
        }
        for c in self.symbols() {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TapeString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.to_string())
    }
}

/// A morphism of the tape category: `source` occurs in `target` at `offset`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Occurrence {
    source: TapeString,
    target: TapeString,
    offset: usize,
}

impl Occurrence {
    /// Checks that `source` really occurs at `offset`. Occurrences of the
    /// empty string are canonicalized to offset 0.
    pub fn new(source: TapeString, target: TapeString, offset: usize) -> Result<Self, TapeError> {
        source.check_alphabet(&target)?;
        if source.is_empty() {
            return Ok(Occurrence {
                source,
                target,
                offset: 0,
            });
        }
        if !source.occurs_at(&target, offset) {
            return Err(TapeError::InvalidOccurrence {
                source_str: source.to_string(),
                target: target.to_string(),
                offset,
            });
        }
        Ok(Occurrence {
            source,
            target,
            offset,
        })
    }

    /// The occurrence of the slice `target[offset .. offset + len]`.
    pub fn window(target: &TapeString, offset: usize, len: usize) -> Self {
        let source = target.slice(offset, len);
        let offset = if len == 0 { 0 } else { offset };
        Occurrence {
            source,
            target: target.clone(),
            offset,
        }
    }

    pub fn identity(object: &TapeString) -> Self {
        Occurrence {
            source: object.clone(),
            target: object.clone(),
            offset: 0,
        }
    }

    /// The unique map out of the initial object.
    pub fn from_empty(target: &TapeString) -> Self {
        Occurrence {
            source: TapeString::empty(target.alphabet()),
            target: target.clone(),
            offset: 0,
        }
    }

    pub fn source(&self) -> &TapeString {
        &self.source
    }

    pub fn target(&self) -> &TapeString {
        &self.target
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn is_identity(&self) -> bool {
        self.offset == 0 && self.source == self.target
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Occurrence) -> Result<Occurrence, TapeError> {
        compose(self, next)
    }
}

impl fmt::Display for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} @ {} in {}", self.source, self.offset, self.target)
    }
}

impl fmt::Debug for Occurrence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Occurrence({self})")
    }
}

/// All occurrences of `a` in `b`, in increasing offset order.
pub fn hom(a: &TapeString, b: &TapeString) -> Result<Vec<Occurrence>, TapeError> {
    a.check_alphabet(b)?;
    Ok(hom_unchecked(a, b))
}

pub(crate) fn hom_unchecked(a: &TapeString, b: &TapeString) -> Vec<Occurrence> {
    if a.is_empty() {
        return vec![Occurrence::from_empty(b)];
    }
    if a.len() > b.len() {
        return Vec::new();
    }
    (0..=b.len() - a.len())
        .filter(|&k| a.occurs_at(b, k))
        .map(|offset| Occurrence {
            source: a.clone(),
            target: b.clone(),
            offset,
        })
        .collect()
}

/// `g ∘ f` for `f: A -> B` and `g: B -> C`.
pub fn compose(f: &Occurrence, g: &Occurrence) -> Result<Occurrence, TapeError> {
    if f.target != g.source {
        return Err(TapeError::NonComposable {
            first: f.to_string(),
            first_target: f.target.to_string(),
            second: g.to_string(),
            second_source: g.source.to_string(),
        });
    }
    let offset = if f.source.is_empty() {
        0
    } else {
        f.offset + g.offset
    };
    Ok(Occurrence {
        source: f.source.clone(),
        target: g.target.clone(),
        offset,
    })
}

pub fn identity(object: &TapeString) -> Occurrence {
    Occurrence::identity(object)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TapeString {
        parse_tape(&Alphabet::binary(), s).unwrap()
    }

    fn offsets(v: &[Occurrence]) -> Vec<usize> {
        v.iter().map(Occurrence::offset).collect()
    }

    #[test]
    fn hom_examples() {
        assert_eq!(offsets(&hom(&t("#.##"), &t("#.##.##")).unwrap()), [0, 3]);
        assert_eq!(offsets(&hom(&t(""), &t("#.")).unwrap()), [0]);
        assert!(hom(&t("#"), &t(".")).unwrap().is_empty());
        assert_eq!(offsets(&hom(&t(".."), &t("...")).unwrap()), [0, 1]);
    }

    #[test]
    fn hom_across_alphabets_fails() {
        let other = Alphabet::new(['a', 'b']).unwrap();
        let a = parse_tape(&other, "ab").unwrap();
        assert!(matches!(
            hom(&a, &t("#.")),
            Err(TapeError::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let f = Occurrence::new(t("#"), t(".#"), 1).unwrap();
        let g = Occurrence::new(t(".#"), t("#..#"), 2).unwrap();
        let h = compose(&f, &g).unwrap();
        assert_eq!(h.to_string(), "# @ 3 in #..#");

        let e = Occurrence::from_empty(&t(".#"));
        assert_eq!(compose(&e, &g).unwrap().to_string(), "(empty) @ 0 in #..#");

        assert_eq!(compose(&identity(&t(".#")), &g).unwrap(), g);
        let id = identity(&t("#."));
        assert_eq!(compose(&id, &id).unwrap(), id);
        assert_eq!(identity(&t("")).to_string(), "(empty) @ 0 in (empty)");
    }

    #[test]
    fn compose_rejects_mismatched_middle() {
        let f = Occurrence::new(t("#"), t(".#"), 1).unwrap();
        let g = Occurrence::new(t("#."), t("#..#"), 0).unwrap();
        assert!(matches!(
            compose(&f, &g),
            Err(TapeError::NonComposable { .. })
        ));
    }

    #[test]
    fn occurrence_validation() {
        assert!(Occurrence::new(t("#"), t(".#"), 0).is_err());
        assert!(Occurrence::new(t("#"), t(".#"), 2).is_err());
        let e = Occurrence::new(t(""), t("..."), 2).unwrap();
        assert_eq!(e.offset(), 0);
    }

    #[test]
    fn alphabet_rules() {
        assert_eq!(Alphabet::new([]), Err(TapeError::EmptyAlphabet));
        assert_eq!(
            Alphabet::new(['a', 'a']),
            Err(TapeError::DuplicateSymbol('a'))
        );
        for bad in [' ', ',', '-', '>', '\t'] {
            assert_eq!(
                Alphabet::new(['a', bad]),
                Err(TapeError::ForbiddenSymbol(bad))
            );
        }
        assert!(parse_tape(&Alphabet::binary(), "#x").is_err());
        assert!(parse_tape(&Alphabet::binary(), "(empty)")
            .unwrap()
            .is_empty());
    }

    #[test]
    fn string_enumeration_counts() {
        let a = Alphabet::binary();
        assert_eq!(all_strings(&a, 12).len(), 8191);
        assert_eq!(all_strings(&a, 0), vec![t("")]);
        let three = Alphabet::new(['a', 'b', 'c']).unwrap();
        assert_eq!(strings_of_length(&three, 3).len(), 27);
        let s = all_strings(&a, 4);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
    }

    fn brute_count(a: &TapeString, b: &TapeString) -> usize {
        if a.is_empty() {
            return 1;
        }
        let (a, b): (String, String) = (a.to_string(), b.to_string());
        if a.len() > b.len() {
            return 0;
        }
        (0..=b.len() - a.len())
            .filter(|&k| b[k..k + a.len()] == a)
            .count()
    }

    #[test]
    fn hom_matches_brute_force_up_to_eight() {
        let all = all_strings(&Alphabet::binary(), 8);
        for a in &all {
            for b in &all {
                let h = hom(a, b).unwrap();
                assert_eq!(h.len(), brute_count(a, b), "{a} in {b}");
                if !a.is_empty() {
                    assert!(h.len() <= (b.len() + 1).saturating_sub(a.len()));
                    if a.len() > b.len() {
                        assert!(h.is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn category_laws_exhaustive_up_to_five() {
        let all = all_strings(&Alphabet::binary(), 5);
        for a in &all {
            for b in &all {
                for f in hom(a, b).unwrap() {
                    assert_eq!(compose(&identity(a), &f).unwrap(), f);
                    assert_eq!(compose(&f, &identity(b)).unwrap(), f);
                    for c in &all {
                        for g in hom(b, c).unwrap() {
                            let gf = compose(&f, &g).unwrap();
                            for d in &all {
                                for h in hom(c, d).unwrap() {
                                    let left = compose(&gf, &h).unwrap();
                                    let right = compose(&f, &compose(&g, &h).unwrap()).unwrap();
                                    assert_eq!(left, right);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
