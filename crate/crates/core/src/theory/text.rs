//! Line-oriented theory format.
//!
//! ```text
//! % comment
//! >> fact
//! r1: a, -b => c
//! s1: -> d
//! d1: e ~> -c
//! r1 > d1
//! ```
//!
//! Statements end at a newline or `;`.

use std::fmt::Write as _;

use super::{DefeasibleTheory, Literal, Rule, RuleKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Neg,
    Comma,
    Colon,
    Arrow(RuleKind),
    Gt,
    FactMark,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Neg => "`-`".into(),
            Token::Comma => "`,`".into(),
            Token::Colon => "`:`".into(),
            Token::Arrow(k) => format!("`{}`", k.arrow()),
            Token::Gt => "`>`".into(),
            Token::FactMark => "`>>`".into(),
        }
    }
}

struct Spanned {
    token: Token,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize(statement: &str, line: usize, offset: usize) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = statement.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = offset + i + 1;
        let next = chars.get(i + 1).copied();
        let (token, width) = match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            ',' => (Token::Comma, 1),
            ':' => (Token::Colon, 1),
            '¬' => (Token::Neg, 1),
            '-' if next == Some('>') => (Token::Arrow(RuleKind::Strict), 2),
            '-' => (Token::Neg, 1),
            '=' if next == Some('>') => (Token::Arrow(RuleKind::Defeasible), 2),
            '~' if next == Some('>') => (Token::Arrow(RuleKind::Defeater), 2),
            '>' if next == Some('>') => (Token::FactMark, 2),
            '>' => (Token::Gt, 1),
            c if c.is_ascii_alphabetic() => {
                let len = chars[i..]
                    .iter()
                    .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                    .count();
                (Token::Ident(chars[i..i + len].iter().collect()), len)
            }
            other => return Err(syntax(line, column, format!("unexpected character `{other}`"))),
        };
        out.push(Spanned { token, column });
        i += width;
    }
    Ok(out)
}

struct Cursor<'a> {
    tokens: &'a [Spanned],
    pos: usize,
    line: usize,
    end_column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|s| &s.token)
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |s| s.column)
    }

    fn next(&mut self) -> Option<&'a Spanned> {
        let t = self.tokens.get(self.pos);
        self.pos += 1;
        t
    }

    fn error(&self, expected: &str) -> Error {
        let found = self
            .peek()
            .map_or_else(|| "end of statement".to_owned(), Token::describe);
        syntax(self.line, self.column(), format!("expected {expected}, found {found}"))
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Some(Token::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.error(what)),
        }
    }

    fn literal(&mut self) -> Result<Literal> {
        let positive = if self.peek() == Some(&Token::Neg) {
            self.pos += 1;
            false
        } else {
            true
        };
        let atom = self.ident("an atom")?;
        Literal::new(atom, positive)
    }

    fn finish(&self) -> Result<()> {
        if self.pos < self.tokens.len() {
            return Err(self.error("end of statement"));
        }
        Ok(())
    }
}

enum Statement {
    Fact(Literal),
    Rule(Rule),
    Superiority(String, String),
}

fn parse_statement(tokens: &[Spanned], line: usize, end_column: usize) -> Result<Statement> {
    let mut cur = Cursor {
        tokens,
        pos: 0,
        line,
        end_column,
    };
    if cur.peek() == Some(&Token::FactMark) {
        cur.next();
        let fact = cur.literal()?;
        cur.finish()?;
        return Ok(Statement::Fact(fact));
    }
    let id = cur.ident("a rule id or `>>`")?;
    match cur.next().map(|s| &s.token) {
        Some(Token::Gt) => {
            let loser = cur.ident("a rule id")?;
            cur.finish()?;
            Ok(Statement::Superiority(id, loser))
        }
        Some(Token::Colon) => {
            let mut body = Vec::new();
            let kind = loop {
                if let Some(Token::Arrow(kind)) = cur.peek() {
                    let kind = *kind;
                    cur.pos += 1;
                    break kind;
                }
                if !body.is_empty() {
                    match cur.peek() {
                        Some(Token::Comma) => cur.pos += 1,
                        _ => return Err(cur.error("`,` or an arrow")),
                    }
                }
                body.push(cur.literal()?);
            };
            let head = cur.literal()?;
            cur.finish()?;
            Ok(Statement::Rule(Rule::new(id, kind, body, head)?))
        }
        _ => {
            cur.pos -= 1;
            Err(cur.error("`:` or `>`"))
        }
    }
}

pub fn parse_theory(text: &str) -> Result<DefeasibleTheory> {
    let mut theory = DefeasibleTheory::new();
    let mut pending = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('%').next().unwrap_or("");
        let mut offset = 0;
        for stmt in content.split(';') {
            let width = stmt.chars().count();
            let tokens = tokenize(stmt, line, offset)?;
            if !tokens.is_empty() {
                let column = tokens[0].column;
                match parse_statement(&tokens, line, offset + width + 1)? {
                    Statement::Fact(f) => theory.add_fact(f),
                    Statement::Rule(r) => theory
                        .add_rule(r)
                        .map_err(|e| syntax(line, column, e.to_string()))?,
                    Statement::Superiority(w, l) => pending.push((line, column, w, l)),
                }
            }
            offset += width + 1;
        }
    }
    // Superiority may reference rules declared further down.
    for (line, column, w, l) in pending {
        theory
            .add_superiority(&w, &l)
            .map_err(|e| syntax(line, column, e.to_string()))?;
    }
    Ok(theory)
}

/// Facts, then rules by id, then superiority pairs, one statement per line.
pub fn serialize_theory(theory: &DefeasibleTheory) -> String {
    let mut out = String::new();
    for f in theory.facts() {
        let _ = writeln!(out, ">> {f}");
    }
    for r in theory.rules() {
        let _ = writeln!(out, "{r}");
    }
    for (w, l) in theory.superiority() {
        let _ = writeln!(out, "{w} > {l}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_theory() {
        let t = parse_theory("r1: => A\nr2: => -A\nr1 > r2").unwrap();
        assert_eq!(t.rule_count(), 2);
        assert!(t.rules().all(|r| r.kind == RuleKind::Defeasible && r.body.is_empty()));
        assert_eq!(t.superiority().len(), 1);
        assert!(t.is_superior("r1", "r2"));
    }

    #[test]
    fn two_body_rule() {
        let t = parse_theory("r_ce11: CNorth_g_h1_90, CNorth_e_h1_75 => CNorth_h1_78").unwrap();
        let r = t.rule("r_ce11").unwrap();
        assert_eq!(r.body.len(), 2);
        assert_eq!(r.body[0].atom(), "CNorth_g_h1_90");
        assert_eq!(r.head.to_string(), "CNorth_h1_78");
    }

    #[test]
    fn all_statement_kinds() {
        let text = "% header\n>> A ; s1: A -> B\nd1: C ~> -B   % trailing\nr1: => C\n\n";
        let t = parse_theory(text).unwrap();
        assert_eq!(t.facts().len(), 1);
        assert_eq!(t.rule("s1").unwrap().kind, RuleKind::Strict);
        assert_eq!(t.rule("d1").unwrap().kind, RuleKind::Defeater);
        assert!(!t.rule("d1").unwrap().head.is_positive());
    }

    #[test]
    fn forward_superiority_reference() {
        let t = parse_theory("r1 > r2\nr1: => A\nr2: => -A").unwrap();
        assert!(t.is_superior("r1", "r2"));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_theory("r1: => A\nr1 > rX"), Err(Error::Syntax { line: 2, .. })));
        assert!(matches!(parse_theory("r1: => A\nr1: => B"), Err(Error::Syntax { line: 2, .. })));
        match parse_theory("r1: A B => C") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (1, 7)),
            other => panic!("{other:?}"),
        }
        match parse_theory("r1: => A\nr2 => B") {
            Err(Error::Syntax { line, column, .. }) => assert_eq!((line, column), (2, 4)),
            other => panic!("{other:?}"),
        }
        assert!(parse_theory("r1: => A $").is_err());
        assert!(parse_theory("r1: =>").is_err());
        assert!(parse_theory(">> A B").is_err());
    }

    #[test]
    fn serializes_in_canonical_order() {
        let t = parse_theory("r2: => -A\nr1: B, C => A\n>> C\n>> B\nr1 > r2").unwrap();
        assert_eq!(
            serialize_theory(&t),
            ">> B\n>> C\nr1: B, C => A\nr2: => -A\nr1 > r2\n"
        );
    }
}
