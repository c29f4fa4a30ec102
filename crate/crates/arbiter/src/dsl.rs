//! Text format for knowledge bases.
//!
//! ```text
//! beliefs:   be(operative) ~full_trashcan
//! actions:   go(5,5)
//! goals:     clean(5,5) @ 0.75
//! resources: bat = 90
//! pursuable: clean(5,5)
//! rules:     be(operative), go(5,5), res(bat,70) -> clean(5,5);
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Sections may appear
//! in any order and more than once.

use std::fmt::Write as _;

use goal_arbiter_core::kb::{KbBuilder, KbError, KnowledgeBase, Premise};
use goal_arbiter_core::literal::{Literal, ResourceAtom, Term};
use goal_arbiter_core::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DslError {
    #[error("{line}:{col}: expected {expected}")]
    Syntax {
        line: usize,
        col: usize,
        expected: String,
    },
    #[error("{0}")]
    Invalid(#[from] KbError),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Colon,
    Tilde,
    LParen,
    RParen,
    Comma,
    At,
    Eq,
    Arrow,
    Semi,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Number(s) => format!("`{s}`"),
            Tok::Colon => "`:`".into(),
            Tok::Tilde => "`~`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::At => "`@`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, DslError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let bump = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                bump(1, &mut i, &mut col);
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            _ => {}
        }
        let tok = match c {
            ':' => Some(Tok::Colon),
            '~' => Some(Tok::Tilde),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '@' => Some(Tok::At),
            '=' => Some(Tok::Eq),
            ';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(tok) = tok {
            bump(1, &mut i, &mut col);
            out.push(Spanned { tok, line: l0, col: c0 });
            continue;
        }
        if c == '-' && chars.get(i + 1) == Some(&'>') {
            bump(2, &mut i, &mut col);
            out.push(Spanned {
                tok: Tok::Arrow,
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_ascii_lowercase() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                bump(1, &mut i, &mut col);
            }
            out.push(Spanned {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        if c.is_ascii_digit() || c == '.' || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            bump(1, &mut i, &mut col);
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                bump(1, &mut i, &mut col);
            }
            out.push(Spanned {
                tok: Tok::Number(chars[start..i].iter().collect()),
                line: l0,
                col: c0,
            });
            continue;
        }
        return Err(DslError::Syntax {
            line: l0,
            col: c0,
            expected: format!("a token, found `{c}`"),
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Beliefs,
    Actions,
    Goals,
    Resources,
    Pursuable,
    Rules,
}

impl Section {
    fn from_name(s: &str) -> Option<Section> {
        Some(match s {
            "beliefs" => Section::Beliefs,
            "actions" => Section::Actions,
            "goals" => Section::Goals,
            "resources" => Section::Resources,
            "pursuable" => Section::Pursuable,
            "rules" => Section::Rules,
            _ => return None,
        })
    }
}

const SECTION_NAMES: &str = "a section header (beliefs:, actions:, goals:, resources:, pursuable:, rules:)";

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.pos + 1).min(self.toks.len() - 1)].tok
    }

    fn next(&mut self) -> &Spanned {
        let t = &self.toks[self.pos];
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &str) -> Result<T, DslError> {
        let t = &self.toks[self.pos];
        Err(DslError::Syntax {
            line: t.line,
            col: t.col,
            expected: format!("{expected}, found {}", t.tok.describe()),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), DslError> {
        if *self.peek() == tok {
            self.next();
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn at_header(&self) -> bool {
        matches!(self.peek(), Tok::Ident(s) if Section::from_name(s).is_some()) && *self.peek2() == Tok::Colon
    }

    fn at_list_end(&self) -> bool {
        *self.peek() == Tok::Eof || self.at_header()
    }

    fn ident(&mut self, what: &str) -> Result<String, DslError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            _ => self.fail(what),
        }
    }

    fn literal(&mut self) -> Result<Literal, DslError> {
        let negated = if *self.peek() == Tok::Tilde {
            self.next();
            true
        } else {
            false
        };
        let name = self.ident("a literal")?;
        let mut args = Vec::new();
        if *self.peek() == Tok::LParen {
            self.next();
            loop {
                args.push(self.term()?);
                match self.peek() {
                    Tok::Comma => {
                        self.next();
                    }
                    Tok::RParen => {
                        self.next();
                        break;
                    }
                    _ => return self.fail("`,` or `)`"),
                }
            }
        }
        let l = Literal::new(name, args);
        Ok(if negated { l.negate() } else { l })
    }

    fn term(&mut self) -> Result<Term, DslError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(Term::Ident(s))
            }
            Tok::Number(n) => match n.parse::<i64>() {
                Ok(v) => {
                    self.next();
                    Ok(Term::Int(v))
                }
                Err(_) => self.fail("an integer or identifier term"),
            },
            _ => self.fail("an integer or identifier term"),
        }
    }

    fn unsigned(&mut self, what: &str) -> Result<u64, DslError> {
        match self.peek().clone() {
            Tok::Number(n) => match n.parse::<u64>() {
                Ok(v) => {
                    self.next();
                    Ok(v)
                }
                Err(_) => self.fail(what),
            },
            _ => self.fail(what),
        }
    }

    fn skip_comma(&mut self) {
        if *self.peek() == Tok::Comma {
            self.next();
        }
    }

    fn premise(&mut self) -> Result<Premise, DslError> {
        if matches!(self.peek(), Tok::Ident(s) if s == "res") && *self.peek2() == Tok::LParen {
            self.next();
            self.next();
            let name = self.ident("a resource name")?;
            self.expect(Tok::Comma, "`,`")?;
            let amount = self.unsigned("a non-negative integer amount")?;
            self.expect(Tok::RParen, "`)`")?;
            return Ok(Premise::Resource(ResourceAtom::new(name, amount)));
        }
        if *self.peek() == Tok::Tilde
            && matches!(self.peek2(), Tok::Ident(s) if s == "res")
            && matches!(self.toks.get(self.pos + 2).map(|t| &t.tok), Some(Tok::LParen))
        {
            return self.fail("a literal (resource atoms cannot be negated)");
        }
        Ok(Premise::Literal(self.literal()?))
    }

    fn document(&mut self) -> Result<KbBuilder, DslError> {
        let mut b = KbBuilder::new();
        if *self.peek() == Tok::Eof {
            return self.fail(SECTION_NAMES);
        }
        while *self.peek() != Tok::Eof {
            if !self.at_header() {
                return self.fail(SECTION_NAMES);
            }
            let name = self.ident(SECTION_NAMES)?;
            self.next();
            let section = Section::from_name(&name).expect("header");
            while !self.at_list_end() {
                match section {
                    Section::Beliefs => {
                        let l = self.literal()?;
                        b.belief(l);
                    }
                    Section::Actions => {
                        let l = self.literal()?;
                        b.action(l);
                    }
                    Section::Pursuable => {
                        let l = self.literal()?;
                        b.pursuable(l);
                    }
                    Section::Goals => {
                        let l = self.literal()?;
                        self.expect(Tok::At, "`@` and a preference")?;
                        let value = match self.peek().clone() {
                            Tok::Number(n) => match Rational::parse_decimal(&n) {
                                Ok(v) => v,
                                Err(_) => return self.fail("a decimal preference such as 0.75"),
                            },
                            _ => return self.fail("a decimal preference such as 0.75"),
                        };
                        self.next();
                        b.goal(l, value);
                    }
                    Section::Resources => {
                        let n = self.ident("a resource name")?;
                        self.expect(Tok::Eq, "`=`")?;
                        let v = self.unsigned("a non-negative integer availability")?;
                        b.resource(n, v);
                    }
                    Section::Rules => {
                        let mut premises = Vec::new();
                        if *self.peek() != Tok::Arrow {
                            loop {
                                premises.push(self.premise()?);
                                match self.peek() {
                                    Tok::Comma => {
                                        self.next();
                                    }
                                    Tok::Arrow => break,
                                    _ => return self.fail("`,` or `->`"),
                                }
                            }
                        }
                        self.expect(Tok::Arrow, "`->`")?;
                        let head = self.literal()?;
                        self.expect(Tok::Semi, "`;`")?;
                        b.rule(premises, head);
                        continue;
                    }
                }
                self.skip_comma();
            }
        }
        Ok(b)
    }
}

/// Parses and validates a knowledge base document.
pub fn parse_kb(text: &str) -> Result<KnowledgeBase, DslError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let b = p.document()?;
    Ok(b.build()?)
}

fn sorted_section(out: &mut String, header: &str, mut entries: Vec<String>) {
    entries.sort();
    out.push_str(header);
    out.push_str(":\n");
    for e in entries {
        let _ = writeln!(out, "  {e}");
    }
}

/// Canonical text: every section in fixed order, entries sorted.
pub fn serialize(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    sorted_section(&mut out, "beliefs", kb.beliefs().iter().map(|l| l.to_string()).collect());
    sorted_section(&mut out, "actions", kb.actions().iter().map(|l| l.to_string()).collect());
    sorted_section(
        &mut out,
        "goals",
        kb.preferences().iter().map(|(g, p)| format!("{g} @ {p}")).collect(),
    );
    sorted_section(
        &mut out,
        "resources",
        kb.resources().iter().map(|(n, v)| format!("{n} = {v}")).collect(),
    );
    sorted_section(&mut out, "pursuable", kb.pursuable().iter().map(|l| l.to_string()).collect());
    sorted_section(&mut out, "rules", kb.rules().iter().map(|r| format!("{r};")).collect());
    out
}
