//! Boundary points of the genealogical tree: infinite paths from the root,
//! materialized letter by letter.

use crate::UlamAddress;

/// An infinite path from the root, represented by the letters materialized so
/// far plus a generator that produces the next letter on demand. The
/// generator sees the current prefix, so rays driven by random measures can
/// condition each step on where they already are.
pub struct Ray {
    letters: Vec<u32>,
    next_letter: Box<dyn FnMut(&[u32]) -> u32 + Send>,
}

impl Ray {
    /// A ray whose letters come from the given generator. The generator must
    /// return letters >= 1.
    pub fn from_fn<F>(next_letter: F) -> Self
    where
        F: FnMut(&[u32]) -> u32 + Send + 'static,
    {
        Self {
            letters: Vec::new(),
            next_letter: Box::new(next_letter),
        }
    }

    /// The ray that always takes the same child index (>= 1).
    pub fn constant(letter: u32) -> Self {
        assert!(letter >= 1, "letters must be >= 1");
        Self::from_fn(move |_| letter)
    }

    /// A ray that repeats the given pattern of letters (all >= 1).
    pub fn periodic(pattern: Vec<u32>) -> Self {
        assert!(!pattern.is_empty(), "pattern must be nonempty");
        assert!(pattern.iter().all(|&x| x >= 1), "letters must be >= 1");
        Self::from_fn(move |prefix| pattern[prefix.len() % pattern.len()])
    }

    /// Letters materialized so far.
    pub fn materialized(&self) -> &[u32] {
        &self.letters
    }

    /// The prefix of length k as an address, extending the ray as needed.
    pub fn truncate(&mut self, k: usize) -> UlamAddress {
        while self.letters.len() < k {
            let letter = (self.next_letter)(&self.letters);
            assert!(letter >= 1, "ray generator must produce letters >= 1");
            self.letters.push(letter);
        }
        UlamAddress::from_letters(self.letters[..k].to_vec())
            .expect("letters checked on production")
    }
}

impl std::fmt::Debug for Ray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ray")
            .field("materialized", &self.letters)
            .finish_non_exhaustive()
    }
}
