//! Interned-ish names for input/stack symbols and control states.
//!
//! Both [`Symbol`] and [`StateId`] wrap a shared string, so cloning them while
//! copying stacks or configurations is a reference-count bump rather than an
//! allocation. Equality, ordering and hashing go by name.

use std::fmt;
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

macro_rules! name_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(Arc<str>);

        impl $name {
            pub fn new(name: impl AsRef<str>) -> Self {
                $name(Arc::from(name.as_ref()))
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{:?}", &*self.0)
            }
        }

        impl From<&str> for $name {
            fn from(name: &str) -> Self {
                $name::new(name)
            }
        }

        impl From<String> for $name {
            fn from(name: String) -> Self {
                $name(Arc::from(name))
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
                ser.serialize_str(&self.0)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
                let s = String::deserialize(de)?;
                if s.is_empty() {
                    return Err(D::Error::custom(concat!(
                        stringify!($name),
                        " must be a non-empty string"
                    )));
                }
                Ok($name::from(s))
            }
        }
    };
}

name_type! {
    /// An input or stack symbol. The name is an arbitrary non-empty token;
    /// single characters are the common case but multi-character names such as
    /// `Z1` or `K2` are equally valid.
    Symbol
}

name_type! {
    /// A control-state name of an automaton.
    StateId
}

/// Builds a word from a plain string, one symbol per character.
pub fn word_from_chars(s: &str) -> Vec<Symbol> {
    s.chars().map(|c| Symbol::new(c.to_string())).collect()
}

/// Builds a word from explicit symbol names.
pub fn word_from_names<I, S>(names: I) -> Vec<Symbol>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    names.into_iter().map(Symbol::new).collect()
}

/// Renders a word for display. Single-character symbols are joined directly,
/// anything longer is space-separated to stay unambiguous.
pub fn format_word(word: &[Symbol]) -> String {
    if word.is_empty() {
        return String::from("ε");
    }
    if word.iter().all(|s| s.as_str().chars().count() == 1) {
        word.iter().map(Symbol::as_str).collect()
    } else {
        word.iter()
            .map(Symbol::as_str)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// All words over `alphabet` of length at most `max_len`, shortest first and
/// in alphabet order within each length. Starts with the empty word.
pub fn words_up_to(alphabet: &[Symbol], max_len: usize) -> Vec<Vec<Symbol>> {
    let mut words: Vec<Vec<Symbol>> = vec![Vec::new()];
    let mut previous_start = 0;
    for _ in 0..max_len {
        let end = words.len();
        for i in previous_start..end {
            for sym in alphabet {
                let mut next = words[i].clone();
                next.push(sym.clone());
                words.push(next);
            }
        }
        previous_start = end;
    }
    words
}

/// Picks a name based on `base` that does not occur in `taken`, by appending
/// primes until it is free.
pub fn fresh_name<'a, I>(base: &str, taken: I) -> String
where
    I: IntoIterator<Item = &'a str>,
{
    let taken: std::collections::HashSet<&str> = taken.into_iter().collect();
    let mut candidate = base.to_string();
    while taken.contains(candidate.as_str()) {
        candidate.push('\'');
    }
    candidate
}
