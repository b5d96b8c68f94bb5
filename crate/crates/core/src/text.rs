//! Concrete syntax: parser and printer for formulas, and the line-oriented
//! format for presentations and equations.
//!
//! Formula grammar, loosest binding first:
//!
//! ```text
//! formula  := imp ('<->' imp)*              left associative
//! imp      := or ('->' imp)?                right associative
//! or       := and ('|' and)*
//! and      := unary ('&' unary)*
//! unary    := '~' unary | quant | atom | '(' formula ')'
//! quant    := ('forall' | 'exists') ident+ '.' formula
//!           | 'H' '{' 'forall' ident* ';' [dep (',' dep)*] '}' '.' formula
//! dep      := ident '(' ident* ')'
//! atom     := ident '=' ident | ident '!=' ident | 'true' | 'false'
//! ```
//!
//! Quantifier bodies extend as far right as possible. `#` starts a comment
//! that runs to the end of the line. Input must be ASCII.

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::reducer::{Equation, Letter, Presentation, Word};
use crate::syntax::{self, is_ident_char, Formula, HenkinPrefix, Variable};

/// Location of a diagnostic: 1-based line and column, length in characters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Lexical,
    Syntax,
    /// Well-formed text whose structure breaks a formula or word invariant.
    Invalid,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: SourceSpan,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, span: SourceSpan, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBrace,
    RBrace,
    Dot,
    Semi,
    Comma,
    Tilde,
    Amp,
    Bar,
    Arrow,
    DoubleArrow,
    Equals,
    NotEquals,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DoubleArrow => "`<->`".into(),
            Tok::Equals => "`=`".into(),
            Tok::NotEquals => "`!=`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    span: SourceSpan,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let span = |len| SourceSpan {
            line,
            column: col,
            length: len,
        };
        if !c.is_ascii() {
            return Err(ParseError::new(
                ParseErrorKind::Lexical,
                span(1),
                format!("non-ASCII character {c:?}"),
            ));
        }
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                if !chars[i].is_ascii() {
                    return Err(ParseError::new(
                        ParseErrorKind::Lexical,
                        SourceSpan {
                            line,
                            column: col,
                            length: 1,
                        },
                        "non-ASCII character in comment",
                    ));
                }
                i += 1;
                col += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            out.push(Token {
                tok: Tok::Ident(word),
                span: span(i - start),
            });
            col += i - start;
            continue;
        }
        let rest = &chars[i..];
        let (tok, len) = if rest.starts_with(&['<', '-', '>']) {
            (Tok::DoubleArrow, 3)
        } else if rest.starts_with(&['-', '>']) {
            (Tok::Arrow, 2)
        } else if rest.starts_with(&['!', '=']) {
            (Tok::NotEquals, 2)
        } else {
            let t = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '{' => Tok::LBrace,
                '}' => Tok::RBrace,
                '.' => Tok::Dot,
                ';' => Tok::Semi,
                ',' => Tok::Comma,
                '~' => Tok::Tilde,
                '&' => Tok::Amp,
                '|' => Tok::Bar,
                '=' => Tok::Equals,
                _ => {
                    return Err(ParseError::new(
                        ParseErrorKind::Lexical,
                        span(1),
                        format!("unexpected character {c:?}"),
                    ))
                }
            };
            (t, 1)
        };
        out.push(Token {
            tok,
            span: span(len),
        });
        i += len;
        col += len;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: SourceSpan {
            line,
            column: col,
            length: 0,
        },
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::new(
            ParseErrorKind::Syntax,
            self.span(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn expect(&mut self, tok: &Tok) -> Result<SourceSpan, ParseError> {
        if self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn variable(&mut self) -> Result<(Variable, SourceSpan), ParseError> {
        let span = self.span();
        match self.peek().clone() {
            Tok::Ident(name) => {
                let v = Variable::new(name)
                    .map_err(|e| ParseError::new(ParseErrorKind::Syntax, span, e.to_string()))?;
                self.bump();
                Ok((v, span))
            }
            _ => Err(self.unexpected("a variable")),
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut left = self.implication()?;
        while self.eat(&Tok::DoubleArrow) {
            let right = self.implication()?;
            left = left.iff(right);
        }
        Ok(left)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let left = self.disjunction()?;
        if self.eat(&Tok::Arrow) {
            let right = self.implication()?;
            return Ok(left.implies(right));
        }
        Ok(left)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat(&Tok::Bar) {
            parts.push(self.conjunction()?);
        }
        Ok(Formula::or(parts))
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Tilde => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(word) => match word.as_str() {
                "true" => {
                    self.bump();
                    Ok(Formula::True)
                }
                "false" => {
                    self.bump();
                    Ok(Formula::False)
                }
                "forall" | "exists" => self.quantifier(),
                "H" if *self.peek_at(1) == Tok::LBrace => self.branch(),
                _ => self.atom(),
            },
            _ => Err(self.unexpected("a formula")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        let (left, _) = self.variable()?;
        let negated = match self.peek() {
            Tok::Equals => false,
            Tok::NotEquals => true,
            _ => return Err(self.unexpected("`=` or `!=`")),
        };
        self.bump();
        let (right, _) = self.variable()?;
        let atom = Formula::Eq(left, right);
        Ok(if negated { atom.not() } else { atom })
    }

    fn quantifier(&mut self) -> Result<Formula, ParseError> {
        let universal = self.is_keyword("forall");
        let kw_span = self.bump().span;
        let mut vars: Vec<Variable> = Vec::new();
        while matches!(self.peek(), Tok::Ident(_)) {
            let (v, span) = self.variable()?;
            if vars.contains(&v) {
                return Err(ParseError::new(
                    ParseErrorKind::Invalid,
                    span,
                    format!("`{v}` is bound twice by the same quantifier"),
                ));
            }
            vars.push(v);
        }
        if vars.is_empty() {
            return Err(ParseError::new(
                ParseErrorKind::Invalid,
                kw_span,
                "quantifier binds no variables",
            ));
        }
        self.expect(&Tok::Dot)?;
        let body = self.formula()?;
        Ok(if universal {
            Formula::forall(vars, body)
        } else {
            Formula::exists(vars, body)
        })
    }

    fn branch(&mut self) -> Result<Formula, ParseError> {
        let start = self.bump().span;
        self.expect(&Tok::LBrace)?;
        if !self.is_keyword("forall") {
            return Err(self.unexpected("`forall`"));
        }
        self.bump();
        let mut universals = Vec::new();
        while matches!(self.peek(), Tok::Ident(_)) {
            universals.push(self.variable()?.0);
        }
        self.expect(&Tok::Semi)?;
        let mut existentials = Vec::new();
        let mut deps = Vec::new();
        if self.peek() != &Tok::RBrace {
            loop {
                let (e, _) = self.variable()?;
                self.expect(&Tok::LParen)?;
                let mut list = Vec::new();
                while self.peek() != &Tok::RParen {
                    list.push(self.variable()?.0);
                    self.eat(&Tok::Comma);
                }
                self.bump();
                existentials.push(e.clone());
                deps.push((e, list));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        let end = self.expect(&Tok::RBrace)?;
        let span = SourceSpan {
            length: if end.line == start.line {
                end.column + end.length - start.column
            } else {
                1
            },
            ..start
        };
        let prefix = HenkinPrefix::new(universals, existentials, deps)
            .map_err(|e| ParseError::new(ParseErrorKind::Invalid, span, e.to_string()))?;
        self.expect(&Tok::Dot)?;
        let body = self.formula()?;
        Ok(Formula::branch(prefix, body))
    }
}

/// Parses one formula. Errors carry the location of the offending token.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if p.peek() != &Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

// Binding strength, loosest first. Quantifiers sit below everything because
// their bodies extend to the right.
const QUANT: u8 = 0;
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const NOT: u8 = 5;
const ATOM: u8 = 6;

fn level(f: &Formula) -> u8 {
    match f {
        Formula::ForAll(..) | Formula::Exists(..) | Formula::Branch(..) => QUANT,
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(_) => OR,
        Formula::And(_) => AND,
        Formula::Not(g) if matches!(**g, Formula::Eq(..)) => ATOM,
        Formula::Not(_) => NOT,
        Formula::Eq(..) | Formula::True | Formula::False => ATOM,
    }
}

/// Canonical text for a formula. Parentheses appear only where the
/// precedence table requires them, plus around nested same-operator
/// conjunctions/disjunctions and around quantifiers used as operands, so that
/// parsing the output rebuilds exactly the same tree.
pub fn print_formula(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

fn write_operand(out: &mut String, f: &Formula, min_level: u8) {
    if level(f) < min_level || level(f) == QUANT {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_vars(out: &mut String, vars: &[Variable]) {
    for v in vars {
        out.push(' ');
        out.push_str(v.name());
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::Eq(a, b) => {
            let _ = write!(out, "{a} = {b}");
        }
        Formula::True => out.push_str("true"),
        Formula::False => out.push_str("false"),
        Formula::Not(g) => match &**g {
            Formula::Eq(a, b) => {
                let _ = write!(out, "{a} != {b}");
            }
            _ => {
                out.push('~');
                write_operand(out, g, NOT);
            }
        },
        Formula::And(gs) | Formula::Or(gs) => {
            let (sep, lvl) = if matches!(f, Formula::And(_)) {
                (" & ", AND + 1)
            } else {
                (" | ", OR + 1)
            };
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                write_operand(out, g, lvl);
            }
        }
        Formula::Implies(a, b) => {
            write_operand(out, a, IMPLIES + 1);
            out.push_str(" -> ");
            write_operand(out, b, IMPLIES);
        }
        Formula::Iff(a, b) => {
            write_operand(out, a, IFF + 1);
            out.push_str(" <-> ");
            write_operand(out, b, IFF + 1);
        }
        Formula::ForAll(vs, body) | Formula::Exists(vs, body) => {
            out.push_str(if matches!(f, Formula::ForAll(..)) {
                "forall"
            } else {
                "exists"
            });
            write_vars(out, vs);
            out.push_str(" . ");
            write_formula(out, body);
        }
        Formula::Branch(prefix, body) => {
            out.push_str(&print_prefix(prefix));
            out.push_str(" . ");
            write_formula(out, body);
        }
    }
}

/// `H{ forall x z ; y(x), w(z) }`
pub fn print_prefix(prefix: &HenkinPrefix) -> String {
    let mut out = String::from("H{ forall");
    write_vars(&mut out, prefix.universals());
    out.push_str(" ;");
    for (i, (e, deps)) in prefix.dependencies().enumerate() {
        out.push_str(if i == 0 { " " } else { ", " });
        out.push_str(e.name());
        out.push('(');
        for (j, d) in deps.iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            out.push_str(d.name());
        }
        out.push(')');
    }
    out.push_str(" }");
    out
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl std::str::FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_formula(s)
    }
}

fn parse_word(text: &str, line: usize, column: usize, side: &str) -> Result<Word, ParseError> {
    let trimmed_start = text.len() - text.trim_start().len();
    let word = text.trim();
    let col = column + trimmed_start;
    if word.is_empty() {
        return Err(ParseError::new(
            ParseErrorKind::Invalid,
            SourceSpan {
                line,
                column,
                length: text.len().max(1),
            },
            format!("empty {side} word"),
        ));
    }
    let mut letters = Vec::with_capacity(word.len());
    for (k, c) in word.chars().enumerate() {
        match Letter::new(c) {
            Some(l) => letters.push(l),
            None => {
                return Err(ParseError::new(
                    ParseErrorKind::Lexical,
                    SourceSpan {
                        line,
                        column: col + k,
                        length: 1,
                    },
                    format!("illegal character {c:?} in word (letters a-z only)"),
                ))
            }
        }
    }
    Ok(Word::new(letters).expect("nonempty"))
}

fn parse_equation_line(text: &str, line: usize) -> Result<Equation, ParseError> {
    if let Some(c) = text.chars().find(|c| !c.is_ascii()) {
        let column = text.chars().position(|x| x == c).unwrap() + 1;
        return Err(ParseError::new(
            ParseErrorKind::Lexical,
            SourceSpan {
                line,
                column,
                length: 1,
            },
            format!("non-ASCII character {c:?}"),
        ));
    }
    let Some(eq) = text.find('=') else {
        return Err(ParseError::new(
            ParseErrorKind::Syntax,
            SourceSpan {
                line,
                column: 1,
                length: text.len().max(1),
            },
            "missing `=`",
        ));
    };
    let (lhs, rhs) = (&text[..eq], &text[eq + 1..]);
    if let Some(extra) = rhs.find('=') {
        return Err(ParseError::new(
            ParseErrorKind::Syntax,
            SourceSpan {
                line,
                column: eq + 2 + extra,
                length: 1,
            },
            "more than one `=`",
        ));
    }
    let lhs = parse_word(lhs, line, 1, "left")?;
    let rhs = parse_word(rhs, line, eq + 2, "right")?;
    Ok(Equation::new(lhs, rhs))
}

/// One `word = word` equation per nonblank line; `#` comments are skipped.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    let mut equations = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        equations.push(parse_equation_line(content, i + 1)?);
    }
    Ok(Presentation::new(equations))
}

/// A single `word = word` equation, e.g. a word-problem query.
pub fn parse_equation(text: &str) -> Result<Equation, ParseError> {
    let mut found = None;
    for (i, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if found.is_some() {
            return Err(ParseError::new(
                ParseErrorKind::Syntax,
                SourceSpan {
                    line: i + 1,
                    column: 1,
                    length: content.len(),
                },
                "expected a single equation",
            ));
        }
        found = Some(parse_equation_line(content, i + 1)?);
    }
    found.ok_or_else(|| {
        ParseError::new(
            ParseErrorKind::Syntax,
            SourceSpan {
                line: 1,
                column: 1,
                length: 0,
            },
            "expected an equation",
        )
    })
}

/// `print_formula` of every validation-clean formula reparses to itself; a
/// convenience check used by the command-line tool and the tests.
pub fn round_trips(f: &Formula) -> bool {
    parse_formula(&print_formula(f)).as_ref() == Ok(f)
}

/// Parses and rejects anything [`syntax::validate`] reports as an error.
pub fn parse_valid_formula(text: &str) -> Result<Formula, ParseError> {
    let f = parse_formula(text)?;
    if let Some(d) = syntax::validate(&f).into_iter().find(|d| d.is_error()) {
        return Err(ParseError::new(
            ParseErrorKind::Invalid,
            SourceSpan {
                line: 1,
                column: 1,
                length: 0,
            },
            d.message,
        ));
    }
    Ok(f)
}
