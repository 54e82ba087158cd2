//! Propositional sentences, their concrete syntax, and the canonical
//! bijection between natural numbers and sentences.
//!
//! Machines emit naturals; [`enumerate`] turns each natural into a sentence.
//! The enumeration is:
//!
//! * `0` is `_|_`;
//! * for `k >= 1` let `m = k - 1`, `tag = m mod 5`, `q = m div 5`, and
//!   - tag 0: `Atom(q)`
//!   - tag 1: `Not(enumerate(q))`
//!   - tag 2/3/4: `And`/`Or`/`Implies` of `enumerate(x), enumerate(y)` where
//!     `(x, y)` is the inverse Cantor pairing of `q`.
//!
//! [`sentence_size`] is the length measure used to bound probe sentences in
//! the consistency check. It is one choice among many, and the finite-stage
//! behaviour of that check depends on it.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A propositional formula over countably many atoms.
///
/// Equality is structural; nothing is normalised on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sentence {
    Bottom,
    Atom(BigUint),
    Not(Box<Sentence>),
    And(Box<Sentence>, Box<Sentence>),
    Or(Box<Sentence>, Box<Sentence>),
    Implies(Box<Sentence>, Box<Sentence>),
}

impl Sentence {
    pub fn atom(k: u64) -> Self {
        Sentence::Atom(BigUint::from(k))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(s: Sentence) -> Self {
        Sentence::Not(Box::new(s))
    }

    pub fn and(a: Sentence, b: Sentence) -> Self {
        Sentence::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Sentence, b: Sentence) -> Self {
        Sentence::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Sentence, b: Sentence) -> Self {
        Sentence::Implies(Box::new(a), Box::new(b))
    }

    /// `_|_ -> _|_`, the filler axiom of the empty theory.
    pub fn verum() -> Self {
        Sentence::implies(Sentence::Bottom, Sentence::Bottom)
    }

    /// Visits every atom index mentioned by the sentence.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a BigUint)) {
        match self {
            Sentence::Bottom => {}
            Sentence::Atom(k) => f(k),
            Sentence::Not(s) => s.for_each_atom(f),
            Sentence::And(a, b) | Sentence::Or(a, b) | Sentence::Implies(a, b) => {
                a.for_each_atom(f);
                b.for_each_atom(f);
            }
        }
    }

    /// Largest atom index mentioned, if any.
    pub fn max_atom(&self) -> Option<BigUint> {
        let mut best: Option<&BigUint> = None;
        self.for_each_atom(&mut |k| {
            if best.is_none_or(|b| k > b) {
                best = Some(k);
            }
        });
        best.cloned()
    }

    /// Nesting depth; atoms and `_|_` have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Sentence::Bottom | Sentence::Atom(_) => 0,
            Sentence::Not(s) => 1 + s.depth(),
            Sentence::And(a, b) | Sentence::Or(a, b) | Sentence::Implies(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Truth value under an assignment given as a predicate on atoms.
    pub fn eval(&self, assignment: &impl Fn(&BigUint) -> bool) -> bool {
        match self {
            Sentence::Bottom => false,
            Sentence::Atom(k) => assignment(k),
            Sentence::Not(s) => !s.eval(assignment),
            Sentence::And(a, b) => a.eval(assignment) && b.eval(assignment),
            Sentence::Or(a, b) => a.eval(assignment) || b.eval(assignment),
            Sentence::Implies(a, b) => !a.eval(assignment) || b.eval(assignment),
        }
    }
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sentence::Bottom => f.write_str("_|_"),
            Sentence::Atom(k) => write!(f, "a{k}"),
            Sentence::Not(s) => write!(f, "!{s}"),
            Sentence::And(a, b) => write!(f, "({a} & {b})"),
            Sentence::Or(a, b) => write!(f, "({a} | {b})"),
            Sentence::Implies(a, b) => write!(f, "({a} -> {b})"),
        }
    }
}

impl std::str::FromStr for Sentence {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_sentence(s)
    }
}

/// Position in the canonical enumeration of sentences.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SentenceIndex(#[serde(with = "biguint_string")] pub BigUint);

impl SentenceIndex {
    pub fn new(k: u64) -> Self {
        SentenceIndex(BigUint::from(k))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }
}

impl From<u64> for SentenceIndex {
    fn from(k: u64) -> Self {
        SentenceIndex::new(k)
    }
}

impl From<BigUint> for SentenceIndex {
    fn from(k: BigUint) -> Self {
        SentenceIndex(k)
    }
}

impl fmt::Display for SentenceIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

const TAG_ATOM: u32 = 0;
const TAG_NOT: u32 = 1;
const TAG_AND: u32 = 2;
const TAG_OR: u32 = 3;
const TAG_IMPLIES: u32 = 4;
const TAGS: u32 = 5;

/// Cantor pairing `(x + y)(x + y + 1)/2 + y`.
pub fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    let tri = (&s * (&s + 1u32)) >> 1u32;
    tri + y
}

/// Inverse of [`pair`].
pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    // w = floor((sqrt(8z + 1) - 1) / 2)
    let root = ((z << 3u32) + 1u32).sqrt();
    let w = (root - 1u32) >> 1u32;
    let tri = (&w * (&w + 1u32)) >> 1u32;
    let y = z - tri;
    let x = w - &y;
    (x, y)
}

/// The sentence at position `k` of the canonical enumeration.
pub fn enumerate(k: &SentenceIndex) -> Sentence {
    enumerate_nat(&k.0)
}

fn enumerate_nat(k: &BigUint) -> Sentence {
    if let Some(small) = k.to_u64() {
        if small == 0 {
            return Sentence::Bottom;
        }
    }
    let m = k - 1u32;
    let tag = (&m % TAGS).to_u32().expect("remainder below 5");
    let q = m / TAGS;
    match tag {
        TAG_ATOM => Sentence::Atom(q),
        TAG_NOT => Sentence::not(enumerate_nat(&q)),
        _ => {
            let (x, y) = unpair(&q);
            let a = enumerate_nat(&x);
            let b = enumerate_nat(&y);
            match tag {
                TAG_AND => Sentence::and(a, b),
                TAG_OR => Sentence::or(a, b),
                _ => Sentence::implies(a, b),
            }
        }
    }
}

/// Position of `s` in the canonical enumeration; inverse of [`enumerate`].
pub fn sentence_index(s: &Sentence) -> SentenceIndex {
    SentenceIndex(index_nat(s))
}

fn index_nat(s: &Sentence) -> BigUint {
    let (tag, payload) = match s {
        Sentence::Bottom => return BigUint::zero(),
        Sentence::Atom(k) => (TAG_ATOM, k.clone()),
        Sentence::Not(a) => (TAG_NOT, index_nat(a)),
        Sentence::And(a, b) => (TAG_AND, pair(&index_nat(a), &index_nat(b))),
        Sentence::Or(a, b) => (TAG_OR, pair(&index_nat(a), &index_nat(b))),
        Sentence::Implies(a, b) => (TAG_IMPLIES, pair(&index_nat(a), &index_nat(b))),
    };
    payload * TAGS + tag + BigUint::one()
}

fn bit_length(k: &BigUint) -> u64 {
    k.bits().max(1)
}

/// Node count plus the bit length of every atom index (index 0 counts as one bit).
pub fn sentence_size(s: &Sentence) -> u64 {
    match s {
        Sentence::Bottom => 1,
        Sentence::Atom(k) => 1 + bit_length(k),
        Sentence::Not(a) => 1 + sentence_size(a),
        Sentence::And(a, b) | Sentence::Or(a, b) | Sentence::Implies(a, b) => 1 + sentence_size(a) + sentence_size(b),
    }
}

/// Renders a sentence in the concrete syntax accepted by [`parse_sentence`].
pub fn render_sentence(s: &Sentence) -> String {
    s.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {position}: {message}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

/// Parses the formula grammar:
///
/// ```text
/// formula := operand [ ("&" | "|" | "->") operand ]
/// operand := "!" operand | "a" digits | "_|_" | "(" formula ")"
/// ```
///
/// Binary applications nested inside another formula must be parenthesised;
/// whitespace is insignificant.
pub fn parse_sentence(text: &str) -> Result<Sentence, ParseError> {
    let mut parser = Parser { src: text.as_bytes(), pos: 0 };
    let s = parser.formula()?;
    parser.skip_ws();
    if parser.pos != parser.src.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(s)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

#[derive(Clone, Copy)]
enum BinOp {
    And,
    Or,
    Implies,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ParseError {
        ParseError { position: self.pos, message: message.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn binop(&mut self) -> Option<BinOp> {
        if self.eat("&") {
            Some(BinOp::And)
        } else if self.eat("->") {
            Some(BinOp::Implies)
        } else if self.eat("|") {
            Some(BinOp::Or)
        } else {
            None
        }
    }

    fn formula(&mut self) -> Result<Sentence, ParseError> {
        let left = self.operand()?;
        let Some(op) = self.binop() else {
            return Ok(left);
        };
        let right = self.operand()?;
        let save = self.pos;
        if self.binop().is_some() {
            self.pos = save;
            self.skip_ws();
            return Err(self.error("chained binary operators need parentheses"));
        }
        Ok(match op {
            BinOp::And => Sentence::and(left, right),
            BinOp::Or => Sentence::or(left, right),
            BinOp::Implies => Sentence::implies(left, right),
        })
    }

    fn operand(&mut self) -> Result<Sentence, ParseError> {
        self.skip_ws();
        if self.eat("!") {
            return Ok(Sentence::not(self.operand()?));
        }
        if self.eat("_|_") {
            return Ok(Sentence::Bottom);
        }
        if self.eat("(") {
            let inner = self.formula()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(inner);
        }
        self.skip_ws();
        if self.pos < self.src.len() && self.src[self.pos] == b'a' {
            let start = self.pos + 1;
            let mut end = start;
            while end < self.src.len() && self.src[end].is_ascii_digit() {
                end += 1;
            }
            if end == start {
                self.pos = start;
                return Err(self.error("expected atom index after 'a'"));
            }
            let digits = std::str::from_utf8(&self.src[start..end]).expect("ascii digits");
            self.pos = end;
            let k: BigUint = digits.parse().expect("validated digits");
            return Ok(Sentence::Atom(k));
        }
        if self.pos >= self.src.len() {
            Err(self.error("unexpected end of input"))
        } else {
            Err(self.error("expected '!', '_|_', '(' or an atom"))
        }
    }
}

/// A computably enumerated set of axioms.
#[derive(Clone)]
pub struct Theory {
    pub name: String,
    axiom_at: Arc<dyn Fn(u64) -> Sentence + Send + Sync>,
}

impl Theory {
    pub fn new(name: impl Into<String>, axiom_at: impl Fn(u64) -> Sentence + Send + Sync + 'static) -> Self {
        Theory { name: name.into(), axiom_at: Arc::new(axiom_at) }
    }

    /// Every axiom is the tautology `_|_ -> _|_`.
    pub fn empty() -> Self {
        Theory::new("empty", |_| Sentence::verum())
    }

    /// A finite axiom list, padded with `_|_ -> _|_` past its end.
    pub fn from_axioms(name: impl Into<String>, axioms: Vec<Sentence>) -> Self {
        Theory::new(name, move |n| usize::try_from(n).ok().and_then(|i| axioms.get(i).cloned()).unwrap_or_else(Sentence::verum))
    }

    pub fn axiom_at(&self, n: u64) -> Sentence {
        (self.axiom_at)(n)
    }

    pub fn first_axioms(&self, count: u64) -> Vec<Sentence> {
        (0..count).map(|n| self.axiom_at(n)).collect()
    }
}

impl fmt::Debug for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Theory").field("name", &self.name).finish_non_exhaustive()
    }
}
