//! Vocabularies and predicate atoms.
//!
//! A vocabulary fixes the unary predicate symbols and the constant symbols.
//! With P predicates there are K = 2^P *atoms*: the complete conjunctions of
//! predicate literals. Every domain element of every world realises exactly
//! one atom, so an atom is the finest unary property the language can state.

use std::collections::HashMap;
use thiserror::Error;

/// Keywords of the concrete syntax; no symbol may shadow them.
pub(crate) const KEYWORDS: &[&str] = &["forall", "exists", "and", "or", "not", "true", "false"];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VocabError {
    #[error("a vocabulary needs at least one predicate")]
    NoPredicates,
    #[error("too many predicates: {0} (at most 8 supported)")]
    TooManyPredicates(usize),
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("predicate `{0}` must start with an uppercase letter")]
    BadPredicateName(String),
    #[error("constant `{0}` must start with a lowercase letter")]
    BadConstantName(String),
    #[error("`{0}` is a keyword and cannot be a symbol")]
    Keyword(String),
    #[error("symbol `{0}` contains invalid characters")]
    BadCharacters(String),
}

/// Unary predicate and constant symbols, in declaration order.
///
/// Predicate order matters: predicate `i` owns bit `i` of every [`Atom`].
#[derive(Debug, Clone)]
pub struct Vocabulary {
    predicates: Vec<String>,
    constants: Vec<String>,
    pred_index: HashMap<String, usize>,
    const_index: HashMap<String, usize>,
}

fn valid_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Vocabulary {
    pub fn new<S: Into<String>>(
        predicates: impl IntoIterator<Item = S>,
        constants: impl IntoIterator<Item = S>,
    ) -> Result<Self, VocabError> {
        let predicates: Vec<String> = predicates.into_iter().map(Into::into).collect();
        let constants: Vec<String> = constants.into_iter().map(Into::into).collect();
        if predicates.is_empty() {
            return Err(VocabError::NoPredicates);
        }
        if predicates.len() > 8 {
            return Err(VocabError::TooManyPredicates(predicates.len()));
        }
        let mut pred_index = HashMap::new();
        let mut const_index = HashMap::new();
        for (i, p) in predicates.iter().enumerate() {
            if !valid_name(p) {
                return Err(VocabError::BadCharacters(p.clone()));
            }
            if !p.starts_with(|c: char| c.is_ascii_uppercase()) {
                return Err(VocabError::BadPredicateName(p.clone()));
            }
            if pred_index.insert(p.clone(), i).is_some() {
                return Err(VocabError::Duplicate(p.clone()));
            }
        }
        for (i, c) in constants.iter().enumerate() {
            if !valid_name(c) {
                return Err(VocabError::BadCharacters(c.clone()));
            }
            if !c.starts_with(|ch: char| ch.is_ascii_lowercase()) {
                return Err(VocabError::BadConstantName(c.clone()));
            }
            if KEYWORDS.contains(&c.as_str()) {
                return Err(VocabError::Keyword(c.clone()));
            }
            if const_index.insert(c.clone(), i).is_some() || pred_index.contains_key(c) {
                return Err(VocabError::Duplicate(c.clone()));
            }
        }
        Ok(Vocabulary {
            predicates,
            constants,
            pred_index,
            const_index,
        })
    }

    pub fn predicates(&self) -> &[String] {
        &self.predicates
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    /// K = 2^P, the number of atoms.
    pub fn atom_count(&self) -> usize {
        1usize << self.predicates.len()
    }

    pub fn pred_index(&self, name: &str) -> Option<usize> {
        self.pred_index.get(name).copied()
    }

    pub fn const_index(&self, name: &str) -> Option<usize> {
        self.const_index.get(name).copied()
    }

    /// All atoms in index order.
    pub fn atoms(&self) -> impl Iterator<Item = Atom> {
        (0..self.atom_count()).map(Atom)
    }
}

/// A complete conjunction of predicate literals, encoded as a bitmask:
/// bit `i` set means predicate `i` holds.
///
/// Atom 0 is "no predicate holds"; atom K−1 is "all predicates hold".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub usize);

impl Atom {
    pub fn satisfies(self, pred: usize) -> bool {
        self.0 >> pred & 1 == 1
    }

    /// Human-readable label, e.g. `Bird&!Fly` for mask 0b01 over (Bird, Fly).
    pub fn label(self, vocab: &Vocabulary) -> String {
        vocab
            .predicates()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                if self.satisfies(i) {
                    p.clone()
                } else {
                    format!("!{p}")
                }
            })
            .collect::<Vec<_>>()
            .join("&")
    }
}
