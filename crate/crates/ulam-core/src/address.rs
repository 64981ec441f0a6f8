//! Finite addresses in the infinite genealogical tree.

use std::fmt;
use std::str::FromStr;

use crate::UlamError;

/// A vertex of the infinite genealogical tree: a finite word of positive
/// integers, the empty word being the root. The i-th letter says which child
/// to take at depth i - 1, counting from 1.
///
/// The derived order is lexicographic with prefixes first, so ancestors sort
/// before their descendants.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UlamAddress {
    letters: Vec<u32>,
}

impl UlamAddress {
    /// The root: the empty word.
    pub fn root() -> Self {
        Self::default()
    }

    /// Builds an address from letters, all of which must be >= 1.
    pub fn from_letters(letters: Vec<u32>) -> Result<Self, UlamError> {
        if letters.contains(&0) {
            return Err(UlamError::ParseAddress {
                text: format!("{letters:?}"),
                reason: "letters must be >= 1",
            });
        }
        Ok(Self { letters })
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    /// Height of the vertex: its distance to the root, i.e. the word length.
    pub fn height(&self) -> usize {
        self.letters.len()
    }

    pub fn is_root(&self) -> bool {
        self.letters.is_empty()
    }

    /// The parent, or None for the root.
    pub fn parent(&self) -> Option<UlamAddress> {
        if self.is_root() {
            None
        } else {
            Some(Self {
                letters: self.letters[..self.letters.len() - 1].to_vec(),
            })
        }
    }

    /// Last letter of the word: the index of this vertex among its siblings.
    pub fn last_letter(&self) -> Option<u32> {
        self.letters.last().copied()
    }

    /// The i-th child (i >= 1).
    pub fn child(&self, i: u32) -> UlamAddress {
        debug_assert!(i >= 1, "child indices count from 1");
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.extend_from_slice(&self.letters);
        letters.push(i);
        Self { letters }
    }

    /// The prefix of length k (the ancestor at height k). Requires
    /// k <= height.
    pub fn prefix(&self, k: usize) -> UlamAddress {
        assert!(k <= self.letters.len(), "prefix length exceeds height");
        Self {
            letters: self.letters[..k].to_vec(),
        }
    }

    /// Whether self is an ancestor of `other` (every vertex is an ancestor
    /// of itself).
    pub fn is_prefix_of(&self, other: &UlamAddress) -> bool {
        other.letters.len() >= self.letters.len()
            && other.letters[..self.letters.len()] == self.letters[..]
    }

    /// Most recent common ancestor: the longest common prefix.
    pub fn meet(&self, other: &UlamAddress) -> UlamAddress {
        let common = self
            .letters
            .iter()
            .zip(&other.letters)
            .take_while(|(a, b)| a == b)
            .count();
        Self {
            letters: self.letters[..common].to_vec(),
        }
    }
}

impl fmt::Display for UlamAddress {
    /// Dot-separated letters; the root prints as the empty string.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, letter) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl FromStr for UlamAddress {
    type Err = UlamError;

    fn from_str(s: &str) -> Result<Self, UlamError> {
        if s.is_empty() {
            return Ok(Self::root());
        }
        let mut letters = Vec::new();
        for part in s.split('.') {
            let letter: u32 = part.parse().map_err(|_| UlamError::ParseAddress {
                text: s.to_owned(),
                reason: "components must be positive integers",
            })?;
            if letter == 0 {
                return Err(UlamError::ParseAddress {
                    text: s.to_owned(),
                    reason: "letters must be >= 1",
                });
            }
            letters.push(letter);
        }
        Ok(Self { letters })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn addr(s: &str) -> UlamAddress {
        s.parse().unwrap()
    }

    #[test]
    fn root_is_empty_word() {
        assert_eq!(UlamAddress::root().height(), 0);
        assert_eq!(UlamAddress::root().to_string(), "");
        assert_eq!(addr(""), UlamAddress::root());
    }

    #[test]
    fn display_and_parse_round_trip() {
        for s in ["", "1", "1.3.2", "7.1.1.1", "12.34"] {
            assert_eq!(addr(s).to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_zero_and_junk() {
        assert!("0".parse::<UlamAddress>().is_err());
        assert!("1.0.2".parse::<UlamAddress>().is_err());
        assert!("1..2".parse::<UlamAddress>().is_err());
        assert!("1.a".parse::<UlamAddress>().is_err());
        assert!("-1".parse::<UlamAddress>().is_err());
        assert!(" 1".parse::<UlamAddress>().is_err());
    }

    #[test]
    fn meet_is_longest_common_prefix() {
        assert_eq!(addr("1.2.1").meet(&addr("1.3")), addr("1"));
        assert_eq!(addr("1.2").meet(&addr("1.2")), addr("1.2"));
        assert_eq!(UlamAddress::root().meet(&addr("4.4")), UlamAddress::root());
        assert_eq!(addr("2.1").meet(&addr("3.1")), UlamAddress::root());
    }

    #[test]
    fn ancestors_sort_before_descendants() {
        assert!(addr("1") < addr("1.1"));
        assert!(addr("1.9") < addr("2"));
        assert!(UlamAddress::root() < addr("1"));
    }

    #[test]
    fn genealogy_accessors_agree() {
        let u = addr("1.3.2");
        assert_eq!(u.parent().unwrap(), addr("1.3"));
        assert_eq!(u.prefix(1), addr("1"));
        assert_eq!(u.child(4), addr("1.3.2.4"));
        assert_eq!(u.last_letter(), Some(2));
        assert!(addr("1.3").is_prefix_of(&u));
        assert!(!addr("1.2").is_prefix_of(&u));
        assert!(u.is_prefix_of(&u));
    }
}
