//! Reader for the logical-form text format.
//!
//! ```text
//! term  := 'lambda' name [':' type] '.' term
//!        | name { '(' term {',' term} ')' }
//!        | '(' term ')' { '(' term {',' term} ')' }
//! type  := atom ['->' type]
//! atom  := 't' | 'v' | 'r' | '?' name | '(' type ')' | '<' type ',' type '>'
//! ```
//!
//! `λ` and `\` are accepted for `lambda`. A name may be written in double
//! quotes when it contains reserved characters. A two-argument application
//! `q(x, body)` whose first argument is an unbound variable-shaped name
//! (a lowercase letter other than `a`, optionally followed by digits or
//! primes) is the binder form of `q(lambda x:v. body)`.
//!
//! Every other unbound name is a constant. Constant types are inferred; what
//! the text leaves open is defaulted (see [`resolve_types`]).

use std::collections::HashMap;

use super::term::{variable_shaped, LambdaTerm, Symbol};
use super::types::{SemType, TypeSubst};
use super::typing::{infer, resolve_types, type_of};
use super::LambdaError;

#[derive(Debug, Clone)]
enum Ast {
    Name { text: String, quoted: bool },
    Lambda(String, Option<SemType>, Box<Ast>),
    Apply(Box<Ast>, Vec<Ast>),
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    metas: HashMap<String, u32>,
    next_meta: u32,
}

fn is_name_char(c: char) -> bool {
    !(c.is_whitespace()
        || matches!(
            c,
            '(' | ')' | ',' | '.' | ':' | '"' | 'λ' | '\\' | '<' | '>'
        ))
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            src,
            pos: 0,
            metas: HashMap::new(),
            next_meta: 0,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, LambdaError> {
        Err(LambdaError::Parse {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), LambdaError> {
        if self.eat(s) {
            Ok(())
        } else {
            self.err(format!("expected '{s}'"))
        }
    }

    fn name(&mut self) -> Result<(String, bool), LambdaError> {
        self.skip_ws();
        if self.peek() == Some('"') {
            self.pos += 1;
            let mut out = String::new();
            loop {
                match self.peek() {
                    None => return self.err("unterminated quoted name"),
                    Some('"') => {
                        self.pos += 1;
                        return Ok((out, true));
                    }
                    Some('\\') => {
                        self.pos += 1;
                        match self.peek() {
                            Some(c) => {
                                out.push(c);
                                self.pos += c.len_utf8();
                            }
                            None => return self.err("dangling escape"),
                        }
                    }
                    Some(c) => {
                        out.push(c);
                        self.pos += c.len_utf8();
                    }
                }
            }
        }
        let start = self.pos;
        while let Some(c) = self.peek() {
            if is_name_char(c) {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
        if start == self.pos {
            return self.err("expected a name");
        }
        Ok((self.src[start..self.pos].to_string(), false))
    }

    fn lambda_keyword(&mut self) -> bool {
        self.skip_ws();
        let r = self.rest();
        if let Some(after) = r.strip_prefix("lambda") {
            if after.chars().next().is_some_and(|c| c.is_whitespace()) {
                self.pos += "lambda".len();
                return true;
            }
        }
        self.eat("λ") || self.eat("\\")
    }

    fn term(&mut self) -> Result<Ast, LambdaError> {
        if self.lambda_keyword() {
            let (binder, _) = self.name()?;
            let ty = if self.eat(":") {
                Some(self.ty()?)
            } else {
                None
            };
            self.expect(".")?;
            let body = self.term()?;
            return Ok(Ast::Lambda(binder, ty, Box::new(body)));
        }
        let head = if self.eat("(") {
            let inner = self.term()?;
            self.expect(")")?;
            inner
        } else {
            let (text, quoted) = self.name()?;
            Ast::Name { text, quoted }
        };
        let mut out = head;
        while self.eat("(") {
            let mut args = vec![self.term()?];
            while self.eat(",") {
                args.push(self.term()?);
            }
            self.expect(")")?;
            out = Ast::Apply(Box::new(out), args);
        }
        Ok(out)
    }

    fn ty(&mut self) -> Result<SemType, LambdaError> {
        let from = self.ty_atom()?;
        if self.eat("->") {
            Ok(SemType::func(from, self.ty()?))
        } else {
            Ok(from)
        }
    }

    fn ty_atom(&mut self) -> Result<SemType, LambdaError> {
        if self.eat("(") {
            let t = self.ty()?;
            self.expect(")")?;
            return Ok(t);
        }
        if self.eat("<") {
            let a = self.ty()?;
            self.expect(",")?;
            let b = self.ty()?;
            self.expect(">")?;
            return Ok(SemType::func(a, b));
        }
        if self.eat("?") {
            let start = self.pos;
            while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                self.pos += 1;
            }
            let name = self.src[start..self.pos].to_string();
            let next = &mut self.next_meta;
            let id = *self.metas.entry(name).or_insert_with(|| {
                *next += 1;
                *next - 1
            });
            return Ok(SemType::Meta(id));
        }
        self.skip_ws();
        match self.peek() {
            Some('t') => {
                self.pos += 1;
                Ok(SemType::T)
            }
            Some('v') => {
                self.pos += 1;
                Ok(SemType::V)
            }
            Some('r') => {
                self.pos += 1;
                Ok(SemType::R)
            }
            _ => self.err("expected a type"),
        }
    }

    fn fresh(&mut self) -> SemType {
        self.next_meta += 1;
        SemType::Meta(self.next_meta - 1)
    }
}

fn elaborate(
    ast: &Ast,
    scope: &mut Vec<Symbol>,
    p: &mut Parser<'_>,
) -> Result<LambdaTerm, LambdaError> {
    match ast {
        Ast::Name { text, .. } => Ok(match scope.iter().rev().find(|s| &s.name == text) {
            Some(s) => LambdaTerm::Var(s.clone()),
            None => LambdaTerm::constant(text.clone(), p.fresh()),
        }),
        Ast::Lambda(x, ty, body) => {
            let ty = match ty {
                Some(t) => t.clone(),
                None => p.fresh(),
            };
            let binder = Symbol::new(x.clone(), ty);
            scope.push(binder.clone());
            let b = elaborate(body, scope, p);
            scope.pop();
            Ok(LambdaTerm::abs(binder, b?))
        }
        Ast::Apply(head, args) => {
            let h = elaborate(head, scope, p)?;
            if let [Ast::Name {
                text,
                quoted: false,
            }, body] = args.as_slice()
            {
                if variable_shaped(text) && !scope.iter().any(|s| &s.name == text) {
                    let binder = Symbol::new(text.clone(), SemType::V);
                    scope.push(binder.clone());
                    let b = elaborate(body, scope, p);
                    scope.pop();
                    return Ok(LambdaTerm::app(h, LambdaTerm::abs(binder, b?)));
                }
            }
            let mut out = h;
            for a in args {
                out = LambdaTerm::app(out, elaborate(a, scope, p)?);
            }
            Ok(out)
        }
    }
}

fn parse_raw(text: &str) -> Result<(LambdaTerm, u32), LambdaError> {
    let mut p = Parser::new(text);
    let ast = p.term()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.err("trailing input");
    }
    let term = elaborate(&ast, &mut Vec::new(), &mut p)?;
    Ok((term, p.next_meta))
}

/// Parses a closed logical form and resolves all of its types.
pub fn parse_term(text: &str) -> Result<LambdaTerm, LambdaError> {
    let (raw, _) = parse_raw(text)?;
    let term = resolve_types(&raw)?;
    type_of(&term)?;
    Ok(term)
}

/// Parses a rule template. Metavariables are solved as far as the template
/// itself constrains them and otherwise left open.
pub fn parse_template(text: &str) -> Result<LambdaTerm, LambdaError> {
    let (raw, floor) = parse_raw(text)?;
    let mut subst = TypeSubst::starting_at(floor);
    infer(&raw, &mut subst)?;
    Ok(raw.map_types(&mut |t| subst.apply(t)))
}

/// Parses a type expression such as `(v->t)->v` or `<r,t>`.
pub fn parse_type(text: &str) -> Result<SemType, LambdaError> {
    let mut p = Parser::new(text);
    let t = p.ty()?;
    p.skip_ws();
    if p.pos != text.len() {
        return p.err("trailing input");
    }
    Ok(t)
}
