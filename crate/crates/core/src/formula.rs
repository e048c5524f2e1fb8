//! Propositional syntax over a closed, ordered variable universe.
//!
//! A [`Universe`] fixes the variables and their order; that order defines the
//! bit layout of every [`Model`]. Formulae refer to variables by index, so a
//! formula is only meaningful together with the universe it was parsed in.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the universe size accepted by [`models_of`].
pub const DEFAULT_ENUMERATION_LIMIT: usize = 24;

/// Hard cap imposed by the 64-bit model representation.
pub const MAX_VARIABLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(String);

impl Variable {
    pub fn new(name: &str) -> Result<Self> {
        if is_identifier(name) && name != "true" && name != "false" {
            Ok(Variable(name.to_string()))
        } else {
            Err(Error::InvalidVariable(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Ordered, duplicate-free list of variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Universe {
    vars: Vec<Variable>,
}

impl Universe {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        if names.is_empty() {
            return Err(Error::EmptyUniverse);
        }
        if names.len() > MAX_VARIABLES {
            return Err(Error::UniverseTooLarge {
                n: names.len(),
                limit: MAX_VARIABLES,
            });
        }
        let mut vars: Vec<Variable> = Vec::with_capacity(names.len());
        for name in names {
            let v = Variable::new(name.as_ref())?;
            if vars.contains(&v) {
                return Err(Error::DuplicateVariable(v.0));
            }
            vars.push(v);
        }
        Ok(Universe { vars })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.0 == name)
    }

    pub fn name(&self, index: usize) -> &str {
        &self.vars[index].0
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.0.clone()).collect()
    }

    /// Every model of the universe, in lexicographic order.
    pub fn all_models(&self) -> impl Iterator<Item = Model> + '_ {
        let n = self.len();
        let count: u128 = 1u128 << n;
        (0..count).map(move |bits| Model {
            bits: bits as u64,
            len: n as u8,
        })
    }
}

/// Total truth assignment. Variable `i` of an `n`-variable universe lives in
/// bit `n - 1 - i`, so numeric order of `bits` is lexicographic order of the
/// assignment with `false < true`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Model {
    len: u8,
    bits: u64,
}

pub type ModelSet = BTreeSet<Model>;

impl Model {
    pub fn from_bits(bits: u64, len: usize) -> Self {
        assert!(len <= MAX_VARIABLES);
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Model {
            len: len as u8,
            bits: bits & mask,
        }
    }

    pub fn from_values(values: &[bool]) -> Self {
        let mut m = Model::from_bits(0, values.len());
        for (i, &v) in values.iter().enumerate() {
            m = m.with(i, v);
        }
        m
    }

    /// Builds a model from the set of variables it makes true.
    pub fn from_true_vars(universe: &Universe, names: &[&str]) -> Result<Self> {
        let mut m = Model::from_bits(0, universe.len());
        for name in names {
            let i = universe
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            m = m.with(i, true);
        }
        Ok(m)
    }

    /// Parses the literal-set form printed by [`Model::display`].
    pub fn from_literals<S: AsRef<str>>(universe: &Universe, literals: &[S]) -> Result<Self> {
        let mut m = Model::from_bits(0, universe.len());
        let mut seen = vec![false; universe.len()];
        for lit in literals {
            let lit = lit.as_ref().trim();
            let (name, value) = match lit.strip_prefix('!') {
                Some(rest) => (rest.trim(), false),
                None => (lit, true),
            };
            let i = universe
                .index_of(name)
                .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
            if seen[i] {
                return Err(Error::InvalidInstance(format!("variable `{name}` listed twice")));
            }
            seen[i] = true;
            m = m.with(i, value);
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInstance(format!(
                "model does not assign `{}`",
                universe.name(i)
            )));
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    fn mask(&self, index: usize) -> u64 {
        1u64 << (self.len as usize - 1 - index)
    }

    pub fn get(&self, index: usize) -> bool {
        self.bits & self.mask(index) != 0
    }

    pub fn with(mut self, index: usize, value: bool) -> Self {
        let mask = self.mask(index);
        if value {
            self.bits |= mask;
        } else {
            self.bits &= !mask;
        }
        self
    }

    pub fn values(&self) -> Vec<bool> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }

    /// Number of variables on which the two models differ.
    pub fn hamming(&self, other: &Model) -> Result<u32> {
        if self.len != other.len {
            return Err(Error::UniverseMismatch);
        }
        Ok((self.bits ^ other.bits).count_ones())
    }

    pub fn literals(&self, universe: &Universe) -> Vec<String> {
        (0..self.len())
            .map(|i| {
                if self.get(i) {
                    universe.name(i).to_string()
                } else {
                    format!("!{}", universe.name(i))
                }
            })
            .collect()
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> ModelDisplay<'a> {
        ModelDisplay {
            model: self,
            universe,
        }
    }
}

pub struct ModelDisplay<'a> {
    model: &'a Model,
    universe: &'a Universe,
}

impl fmt::Display for ModelDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.model.literals(self.universe).join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn var(index: usize) -> Self {
        Formula::Var(index)
    }

    pub fn literal(index: usize, positive: bool) -> Self {
        if positive {
            Formula::Var(index)
        } else {
            Formula::Var(index).negate()
        }
    }

    pub fn negate(self) -> Self {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Self {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Self {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Self {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn iff(self, other: Formula) -> Self {
        Formula::Iff(Box::new(self), Box::new(other))
    }

    /// Left-nested conjunction; `true` when empty.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::Const(true))
    }

    /// Left-nested disjunction; `false` when empty.
    pub fn disjunction<I: IntoIterator<Item = Formula>>(items: I) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Const(false))
    }

    /// The conjunction of literals satisfied exactly by `model`.
    pub fn term_of(model: &Model) -> Self {
        Formula::conjunction((0..model.len()).map(|i| Formula::literal(i, model.get(i))))
    }

    /// Formula whose models are exactly `models`.
    pub fn from_models<'a, I: IntoIterator<Item = &'a Model>>(models: I) -> Self {
        Formula::disjunction(models.into_iter().map(Formula::term_of))
    }

    pub fn evaluate(&self, model: &Model) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(i) => model.get(*i),
            Formula::Not(f) => !f.evaluate(model),
            Formula::And(a, b) => a.evaluate(model) && b.evaluate(model),
            Formula::Or(a, b) => a.evaluate(model) || b.evaluate(model),
            Formula::Implies(a, b) => !a.evaluate(model) || b.evaluate(model),
            Formula::Iff(a, b) => a.evaluate(model) == b.evaluate(model),
        }
    }

    /// Largest variable index mentioned, if any.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Formula::Const(_) => None,
            Formula::Var(i) => Some(*i),
            Formula::Not(f) => f.max_var(),
            Formula::And(a, b)
            | Formula::Or(a, b)
            | Formula::Implies(a, b)
            | Formula::Iff(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn fits(&self, universe: &Universe) -> bool {
        self.max_var().is_none_or(|i| i < universe.len())
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Iff(..) => 1,
            Formula::Implies(..) => 2,
            Formula::Or(..) => 3,
            Formula::And(..) => 4,
            _ => 5,
        }
    }

    pub fn display<'a>(&'a self, universe: &'a Universe) -> FormulaDisplay<'a> {
        FormulaDisplay {
            formula: self,
            universe,
        }
    }

    /// Renders in the grammar accepted by [`parse_formula`].
    pub fn to_text(&self, universe: &Universe) -> String {
        self.display(universe).to_string()
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    universe: &'a Universe,
}

impl FormulaDisplay<'_> {
    fn child(&self, f: &Formula, out: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        let d = FormulaDisplay {
            formula: f,
            universe: self.universe,
        };
        if parens {
            write!(out, "({d})")
        } else {
            write!(out, "{d}")
        }
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.formula.precedence();
        let (op, a, b, right_assoc) = match self.formula {
            Formula::Const(true) => return write!(out, "true"),
            Formula::Const(false) => return write!(out, "false"),
            Formula::Var(i) => return write!(out, "{}", self.universe.name(*i)),
            Formula::Not(f) => {
                write!(out, "!")?;
                return self.child(f, out, f.precedence() < 5);
            }
            Formula::And(a, b) => (" & ", a, b, false),
            Formula::Or(a, b) => (" | ", a, b, false),
            Formula::Implies(a, b) => (" -> ", a, b, true),
            Formula::Iff(a, b) => (" <-> ", a, b, true),
        };
        let (pa, pb) = (a.precedence(), b.precedence());
        self.child(a, out, pa < p || (right_assoc && pa == p))?;
        write!(out, "{op}")?;
        self.child(b, out, pb < p || (!right_assoc && pb == p))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Not,
    And,
    Or,
    Implies,
    Iff,
    LParen,
    RParen,
    True,
    False,
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'!' => {
                i += 1;
                Token::Not
            }
            b'&' => {
                i += 1;
                Token::And
            }
            b'|' => {
                i += 1;
                Token::Or
            }
            b'(' => {
                i += 1;
                Token::LParen
            }
            b')' => {
                i += 1;
                Token::RParen
            }
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 2;
                Token::Implies
            }
            b'<' if bytes.get(i + 1) == Some(&b'-') && bytes.get(i + 2) == Some(&b'>') => {
                i += 3;
                Token::Iff
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                match &text[start..i] {
                    "true" => Token::True,
                    "false" => Token::False,
                    word => Token::Ident(word.to_string()),
                }
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    pos: i,
                    msg: format!("unexpected character `{ch}`"),
                });
            }
        };
        tokens.push((start, tok));
    }
    Ok(tokens)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    universe: &'a Universe,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn eat(&mut self, tok: &Token) -> bool {
        if self.peek() == Some(tok) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn iff(&mut self) -> Result<Formula> {
        let lhs = self.imp()?;
        if self.eat(&Token::Iff) {
            Ok(lhs.iff(self.iff()?))
        } else {
            Ok(lhs)
        }
    }

    fn imp(&mut self) -> Result<Formula> {
        let lhs = self.or()?;
        if self.eat(&Token::Implies) {
            Ok(lhs.implies(self.imp()?))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut lhs = self.and()?;
        while self.eat(&Token::Or) {
            lhs = lhs.or(self.and()?);
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while self.eat(&Token::And) {
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        let at = self.offset();
        let tok = self.tokens.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        match tok {
            Some(Token::Not) => Ok(self.unary()?.negate()),
            Some(Token::True) => Ok(Formula::Const(true)),
            Some(Token::False) => Ok(Formula::Const(false)),
            Some(Token::Ident(name)) => self
                .universe
                .index_of(&name)
                .map(Formula::Var)
                .ok_or(Error::UnknownVariable(name)),
            Some(Token::LParen) => {
                let inner = self.iff()?;
                if !self.eat(&Token::RParen) {
                    return Err(Error::Syntax {
                        pos: self.offset(),
                        msg: "expected `)`".into(),
                    });
                }
                Ok(inner)
            }
            Some(other) => Err(Error::Syntax {
                pos: at,
                msg: format!("unexpected token {other:?}"),
            }),
            None => Err(Error::Syntax {
                pos: at,
                msg: "unexpected end of input".into(),
            }),
        }
    }
}

/// Parses `text` against a closed universe: unknown identifiers are errors.
pub fn parse_formula(text: &str, universe: &Universe) -> Result<Formula> {
    let tokens = tokenize(text)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: text.len(),
        universe,
    };
    let f = parser.iff()?;
    if parser.pos < parser.tokens.len() {
        return Err(Error::Syntax {
            pos: parser.offset(),
            msg: "trailing input".into(),
        });
    }
    Ok(f)
}

pub fn evaluate(f: &Formula, model: &Model) -> bool {
    f.evaluate(model)
}

/// Satisfying assignments of `f`, in lexicographic order.
pub fn models_of(f: &Formula, universe: &Universe) -> Result<ModelSet> {
    models_of_with_limit(f, universe, DEFAULT_ENUMERATION_LIMIT)
}

pub fn models_of_with_limit(f: &Formula, universe: &Universe, limit: usize) -> Result<ModelSet> {
    Ok(model_list(f, universe, limit)?.into_iter().collect())
}

/// Same as [`models_of_with_limit`] but returns a sorted vector.
pub fn model_list(f: &Formula, universe: &Universe, limit: usize) -> Result<Vec<Model>> {
    if universe.len() > limit {
        return Err(Error::UniverseTooLarge {
            n: universe.len(),
            limit,
        });
    }
    if !f.fits(universe) {
        return Err(Error::UniverseMismatch);
    }
    Ok(universe.all_models().filter(|m| f.evaluate(m)).collect())
}

pub fn is_satisfiable(f: &Formula, universe: &Universe) -> Result<bool> {
    if universe.len() > DEFAULT_ENUMERATION_LIMIT {
        return Err(Error::UniverseTooLarge {
            n: universe.len(),
            limit: DEFAULT_ENUMERATION_LIMIT,
        });
    }
    Ok(universe.all_models().any(|m| f.evaluate(&m)))
}

pub fn equivalent(f: &Formula, g: &Formula, universe: &Universe) -> Result<bool> {
    is_satisfiable(&f.clone().iff(g.clone()).negate(), universe).map(|sat| !sat)
}

/// Ordered list of formulae; index `i` identifies source `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    entries: Vec<Formula>,
}

impl Profile {
    pub fn new(entries: Vec<Formula>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidInstance("profile must not be empty".into()));
        }
        Ok(Profile { entries })
    }

    pub fn parse<S: AsRef<str>>(texts: &[S], universe: &Universe) -> Result<Self> {
        let entries = texts
            .iter()
            .map(|t| parse_formula(t.as_ref(), universe))
            .collect::<Result<Vec<_>>>()?;
        Profile::new(entries)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Formula] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Formula {
        &self.entries[i]
    }
}
