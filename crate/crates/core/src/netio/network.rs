use std::collections::HashMap;
use std::fmt;

use super::expr::BoolExpr;
use super::lexer::{tokenize, Spanned, Token};
use crate::error::{ParseError, ParseErrorKind, Position, Result};
use crate::generator::GeneratorFunction;
use crate::state::DimensionCap;

const KW_VARS: &str = "vars";
const KW_NEXT: &str = "next";

/// A parsed `.abn` network: one update rule per declared variable.
///
/// `rules[i]` is the rule for `vars[i]`, whatever order the source used.
#[derive(Clone, Debug)]
pub struct NetworkDocument {
    pub vars: Vec<String>,
    pub rules: Vec<BoolExpr>,
    /// Position of each rule's `next` keyword, parallel to `rules`.
    pub spans: Vec<Position>,
    pub file: Option<String>,
}

impl PartialEq for NetworkDocument {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.rules == other.rules
    }
}

impl Eq for NetworkDocument {}

impl NetworkDocument {
    pub fn new(vars: Vec<String>, rules: Vec<BoolExpr>) -> Self {
        let spans = vec![Position { line: 0, column: 0 }; rules.len()];
        NetworkDocument {
            vars,
            rules,
            spans,
            file: None,
        }
    }

    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// Canonical source text; parsing it yields an equal document.
    pub fn serialize(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for NetworkDocument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{KW_VARS}: {}", self.vars.join(" "))?;
        for (name, rule) in self.vars.iter().zip(&self.rules) {
            writeln!(f, "{KW_NEXT} {name} = {}", rule.display(&self.vars))?;
        }
        Ok(())
    }
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
    vars: HashMap<String, usize>,
}

impl Parser {
    fn peek(&self) -> &Spanned {
        &self.tokens[self.pos]
    }

    fn advance(&mut self) -> Spanned {
        let tok = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error_here(&self, expected: &str) -> ParseError {
        let tok = self.peek();
        ParseError::new(
            tok.line,
            tok.column,
            ParseErrorKind::Syntax {
                expected: expected.to_string(),
                found: tok.token.describe(),
            },
        )
    }

    fn expect(&mut self, token: Token, expected: &str) -> Result<Spanned, ParseError> {
        if self.peek().token == token {
            Ok(self.advance())
        } else {
            Err(self.error_here(expected))
        }
    }

    fn expect_keyword(&mut self, keyword: &str) -> Result<Spanned, ParseError> {
        match &self.peek().token {
            Token::Ident(name) if name == keyword => Ok(self.advance()),
            _ => Err(self.error_here(&format!("`{keyword}`"))),
        }
    }

    fn is_keyword(&self, keyword: &str) -> bool {
        matches!(&self.peek().token, Token::Ident(name) if name == keyword)
    }

    fn expr(&mut self) -> Result<BoolExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().token {
                Token::Or => {
                    self.advance();
                    lhs = BoolExpr::or(lhs, self.term()?);
                }
                Token::Xor => {
                    self.advance();
                    lhs = BoolExpr::xor(lhs, self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<BoolExpr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek().token == Token::And {
            self.advance();
            lhs = BoolExpr::and(lhs, self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<BoolExpr, ParseError> {
        let tok = self.peek().clone();
        match &tok.token {
            Token::Not => {
                self.advance();
                Ok(BoolExpr::negate(self.factor()?))
            }
            Token::LParen => {
                self.advance();
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            Token::Zero => {
                self.advance();
                Ok(BoolExpr::Const(false))
            }
            Token::One => {
                self.advance();
                Ok(BoolExpr::Const(true))
            }
            Token::Ident(name) if name != KW_NEXT && name != KW_VARS => {
                let index = *self.vars.get(name).ok_or_else(|| {
                    ParseError::new(
                        tok.line,
                        tok.column,
                        ParseErrorKind::UndeclaredVariable(name.clone()),
                    )
                })?;
                self.advance();
                Ok(BoolExpr::Var(index))
            }
            _ => Err(self.error_here("an expression")),
        }
    }
}

/// Parses the `.abn` network format.
pub fn parse_network(text: &str) -> Result<NetworkDocument, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser {
        tokens,
        pos: 0,
        vars: HashMap::new(),
    };

    p.expect_keyword(KW_VARS)?;
    p.expect(Token::Colon, "`:`")?;
    let mut names = Vec::new();
    while let Token::Ident(name) = &p.peek().token {
        if name == KW_NEXT {
            break;
        }
        if name == KW_VARS {
            return Err(p.error_here("a variable name"));
        }
        let name = name.clone();
        let tok = p.advance();
        if p.vars.insert(name.clone(), names.len()).is_some() {
            return Err(ParseError::new(
                tok.line,
                tok.column,
                ParseErrorKind::DuplicateVariable(name),
            ));
        }
        names.push(name);
    }
    if names.is_empty() {
        return Err(p.error_here("a variable name"));
    }

    let mut rules: Vec<Option<(BoolExpr, Position)>> = vec![None; names.len()];
    loop {
        if p.peek().token == Token::Eof && rules.iter().any(Option::is_some) {
            break;
        }
        let kw = p.expect_keyword(KW_NEXT)?;
        let target_tok = p.peek().clone();
        let target = match &target_tok.token {
            Token::Ident(name) if name != KW_NEXT && name != KW_VARS => {
                *p.vars.get(name).ok_or_else(|| {
                    ParseError::new(
                        target_tok.line,
                        target_tok.column,
                        ParseErrorKind::UndeclaredVariable(name.clone()),
                    )
                })?
            }
            _ => return Err(p.error_here("a variable name")),
        };
        p.advance();
        p.expect(Token::Equals, "`=`")?;
        let expr = p.expr()?;
        if !(p.is_keyword(KW_NEXT) || p.peek().token == Token::Eof) {
            return Err(p.error_here("an operator, `next` or end of input"));
        }
        if rules[target].is_some() {
            return Err(ParseError::new(
                target_tok.line,
                target_tok.column,
                ParseErrorKind::DuplicateRule(names[target].clone()),
            ));
        }
        rules[target] = Some((
            expr,
            Position {
                line: kw.line,
                column: kw.column,
            },
        ));
    }

    let eof = p.peek().clone();
    let mut exprs = Vec::with_capacity(names.len());
    let mut spans = Vec::with_capacity(names.len());
    for (name, rule) in names.iter().zip(rules) {
        match rule {
            Some((expr, span)) => {
                exprs.push(expr);
                spans.push(span);
            }
            None => {
                return Err(ParseError::new(
                    eof.line,
                    eof.column,
                    ParseErrorKind::MissingRule(name.clone()),
                ))
            }
        }
    }
    Ok(NetworkDocument {
        vars: names,
        rules: exprs,
        spans,
        file: None,
    })
}

/// Tabulates every rule over all 2^n states.
pub fn compile(doc: &NetworkDocument) -> Result<GeneratorFunction> {
    compile_capped(doc, DimensionCap::default())
}

pub fn compile_capped(doc: &NetworkDocument, cap: DimensionCap) -> Result<GeneratorFunction> {
    let n = doc.n();
    cap.check(n)?;
    let size = 1u32 << n;
    let table: Vec<u32> = (0..size)
        .map(|e| {
            // variable i is coordinate i+1, i.e. bit n-1-i
            let value = |i: usize| e & (1u32 << (n - 1 - i)) != 0;
            doc.rules
                .iter()
                .fold(0u32, |acc, rule| (acc << 1) | u32::from(rule.eval(value)))
        })
        .collect();
    Ok(GeneratorFunction::from_table_capped(n, table, cap)?
        .with_names(doc.vars.clone())
        .with_source(doc.serialize()))
}
