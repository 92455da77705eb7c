//! Shared domain types: codeword symbols, problem parameters, codewords and
//! trees.
//!
//! A codeword is the pre-order label sequence of an ordered tree in which
//! every node has at most `delta` children. The root and any only child are
//! labeled `s`; within a sibling group of two or more, the leftmost child is
//! `l`, the rightmost `r`, and the ones in between `m`. All values here are
//! immutable after construction and safe to share across threads.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Default upper bound on `delta`. Table dimensions and sibling groups are
/// all bounded by `delta`, so an accidental huge value is rejected early.
pub const DEFAULT_MAX_DELTA: usize = 64;

/// One of the four codeword letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    /// Root or only child.
    S,
    /// Leftmost child of a sibling group.
    L,
    /// Middle child of a sibling group.
    M,
    /// Rightmost child of a sibling group.
    R,
}

impl Symbol {
    pub fn from_char(c: char) -> Option<Symbol> {
        match c {
            's' => Some(Symbol::S),
            'l' => Some(Symbol::L),
            'm' => Some(Symbol::M),
            'r' => Some(Symbol::R),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Symbol::S => 's',
            Symbol::L => 'l',
            Symbol::M => 'm',
            Symbol::R => 'r',
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Rejected problem parameters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamError {
    #[error("node count must be at least 1")]
    ZeroNodes,
    #[error("delta must be at least 1")]
    ZeroDelta,
    #[error("delta {delta} exceeds the configured maximum {max}")]
    DeltaTooLarge { delta: usize, max: usize },
}

/// Problem instance: `n` nodes, at most `delta` children per node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Params {
    n: usize,
    delta: usize,
}

impl Params {
    /// Validates `n >= 1` and `1 <= delta <=` [`DEFAULT_MAX_DELTA`].
    pub fn new(n: usize, delta: usize) -> Result<Params, ParamError> {
        Params::with_max_delta(n, delta, DEFAULT_MAX_DELTA)
    }

    /// Like [`new`](Params::new) with a caller-chosen cap on `delta`.
    pub fn with_max_delta(n: usize, delta: usize, max_delta: usize) -> Result<Params, ParamError> {
        if n == 0 {
            return Err(ParamError::ZeroNodes);
        }
        if delta == 0 {
            return Err(ParamError::ZeroDelta);
        }
        if delta > max_delta {
            return Err(ParamError::DeltaTooLarge { delta, max: max_delta });
        }
        Ok(Params { n, delta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }
}

/// Rejected codeword text. Positions are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty codeword")]
    EmptyInput,
    #[error("invalid character {found:?} at position {position} (alphabet is s, l, m, r)")]
    InvalidCharacter { position: usize, found: char },
    #[error("codeword must start with 's'")]
    BadRoot,
}

/// A symbol sequence starting with `s`.
///
/// Construction only checks the alphabet and the leading `s`; whether the
/// sequence is the codeword of an actual tree is decided by
/// [`codec::validate`](crate::codec::validate).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Codeword {
    symbols: Vec<Symbol>,
}

impl Codeword {
    pub fn from_symbols(symbols: Vec<Symbol>) -> Result<Codeword, ParseError> {
        match symbols.first() {
            None => Err(ParseError::EmptyInput),
            Some(Symbol::S) => Ok(Codeword { symbols }),
            Some(_) => Err(ParseError::BadRoot),
        }
    }

    /// Number of symbols, equal to the node count of the encoded tree.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty sequences
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Mutable view for the in-place successor algorithm. Callers must keep
    /// `symbols[0] == S`; the generator never writes position 0.
    pub(crate) fn symbols_mut(&mut self) -> &mut [Symbol] {
        &mut self.symbols
    }
}

impl FromStr for Codeword {
    type Err = ParseError;

    fn from_str(text: &str) -> Result<Codeword, ParseError> {
        if text.is_empty() {
            return Err(ParseError::EmptyInput);
        }
        let mut symbols = Vec::with_capacity(text.len());
        for (idx, c) in text.chars().enumerate() {
            match Symbol::from_char(c) {
                Some(s) => symbols.push(s),
                None => {
                    return Err(ParseError::InvalidCharacter { position: idx + 1, found: c });
                }
            }
        }
        Codeword::from_symbols(symbols)
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            write!(f, "{}", s.as_char())?;
        }
        Ok(())
    }
}

/// Ordered rooted tree. Degree bounds are not baked into the type; they are
/// enforced by the operations that take [`Params`].
#[derive(Clone, PartialEq, Eq)]
pub struct Tree {
    children: Vec<Tree>,
}

impl Tree {
    pub fn leaf() -> Tree {
        Tree { children: Vec::new() }
    }

    pub fn new(children: Vec<Tree>) -> Tree {
        Tree { children }
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }

    /// Number of children of the root.
    pub fn degree(&self) -> usize {
        self.children.len()
    }

    /// Total number of nodes. Iterative so that chain-shaped trees of any
    /// depth are safe.
    pub fn node_count(&self) -> usize {
        let mut count = 1;
        let mut stack: Vec<&Tree> = self.children.iter().collect();
        while let Some(t) = stack.pop() {
            count += 1;
            stack.extend(t.children.iter());
        }
        count
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Compact parenthesis form; real exports live in codec.
        write!(f, "(")?;
        for c in &self.children {
            write!(f, "{:?}", c)?;
        }
        write!(f, ")")
    }
}

// The derived drop would recurse once per level and overflow the stack on
// deep chains (decode supports millions of nodes).
impl Drop for Tree {
    fn drop(&mut self) {
        let mut stack = std::mem::take(&mut self.children);
        while let Some(mut t) = stack.pop() {
            stack.append(&mut t.children);
        }
    }
}
