//! Recursive-descent parser from tokens to instructions.
//!
//! Logo needs to know each procedure's arity to find where its inputs end,
//! so parsing is done against an [`Arities`] view of the current
//! environment and happens one instruction at a time.

use super::error::LogoError;
use super::token::{Operator, Token};
use super::value::Value;

pub(crate) trait Arities {
    fn arity(&self, name: &str) -> Option<usize>;
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Expr {
    Number(f64),
    Quoted(String),
    Thing(String),
    List(Vec<Value>),
    Neg(Box<Expr>),
    Binary(Operator, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Definition {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<Token>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Instr {
    Define(Definition),
    Eval(Expr),
}

pub(crate) struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
}

impl<'t> Parser<'t> {
    pub fn new(tokens: &'t [Token]) -> Self {
        Parser { tokens, pos: 0 }
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<&'t Token> {
        let tok = self.tokens.get(self.pos);
        self.pos += 1;
        tok
    }

    fn skip_newlines(&mut self) {
        while self.peek() == Some(&Token::Newline) {
            self.pos += 1;
        }
    }

    /// Next top-level instruction, or `None` at end of input.
    pub fn instruction(&mut self, env: &dyn Arities) -> Result<Option<Instr>, LogoError> {
        self.skip_newlines();
        match self.peek() {
            None => Ok(None),
            Some(Token::Word(w)) if w == "to" => {
                self.pos += 1;
                self.definition().map(|d| Some(Instr::Define(d)))
            }
            Some(Token::Word(w)) if w == "end" => Err(LogoError::EndWithoutTo),
            Some(_) => self.expression(env).map(|e| Some(Instr::Eval(e))),
        }
    }

    /// Parses every instruction up front; used for procedure bodies and
    /// instruction lists, where `to` is not allowed.
    pub fn block(mut self, env: &dyn Arities) -> Result<Vec<Expr>, LogoError> {
        let mut out = Vec::new();
        while let Some(instr) = self.instruction(env)? {
            match instr {
                Instr::Eval(e) => out.push(e),
                Instr::Define(d) => return Err(LogoError::NestedDefinition(d.name)),
            }
        }
        Ok(out)
    }

    fn definition(&mut self) -> Result<Definition, LogoError> {
        let name = match self.next() {
            Some(Token::Word(w)) => w.clone(),
            Some(Token::QuotedWord(w)) => w.clone(),
            _ => return Err(LogoError::Syntax("to needs a procedure name".into())),
        };
        let mut params = Vec::new();
        while let Some(Token::ThingRef(p)) = self.peek() {
            params.push(p.clone());
            self.pos += 1;
        }
        let start = self.pos;
        loop {
            match self.next() {
                None => return Err(LogoError::MissingEnd(name)),
                Some(Token::Word(w)) if w == "end" => break,
                Some(Token::Word(w)) if w == "to" => {
                    return Err(LogoError::NestedDefinition(name));
                }
                Some(_) => {}
            }
        }
        let body = self.tokens[start..self.pos - 1].to_vec();
        Ok(Definition { name, params, body })
    }

    pub fn expression(&mut self, env: &dyn Arities) -> Result<Expr, LogoError> {
        let mut lhs = self.additive(env)?;
        while let Some(Token::Operator(
            op @ (Operator::Less | Operator::Greater | Operator::Equal),
        )) = self.peek()
        {
            self.pos += 1;
            let rhs = self.additive(env)?;
            lhs = Expr::Binary(*op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn additive(&mut self, env: &dyn Arities) -> Result<Expr, LogoError> {
        let mut lhs = self.multiplicative(env)?;
        while let Some(Token::Operator(op @ (Operator::Add | Operator::Sub))) = self.peek() {
            self.pos += 1;
            let rhs = self.multiplicative(env)?;
            lhs = Expr::Binary(*op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn multiplicative(&mut self, env: &dyn Arities) -> Result<Expr, LogoError> {
        let mut lhs = self.unary(env)?;
        while let Some(Token::Operator(op @ (Operator::Mul | Operator::Div))) = self.peek() {
            self.pos += 1;
            let rhs = self.unary(env)?;
            lhs = Expr::Binary(*op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self, env: &dyn Arities) -> Result<Expr, LogoError> {
        if self.peek() == Some(&Token::Operator(Operator::Sub)) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary(env)?)));
        }
        self.primary(env)
    }

    fn primary(&mut self, env: &dyn Arities) -> Result<Expr, LogoError> {
        let tok = match self.next() {
            Some(tok) => tok,
            None => return Err(LogoError::MissingInput),
        };
        match tok {
            Token::Number(n) => Ok(Expr::Number(*n)),
            Token::QuotedWord(w) => Ok(Expr::Quoted(w.clone())),
            Token::ThingRef(w) => Ok(Expr::Thing(w.clone())),
            Token::OpenParen => {
                let inner = self.expression(env)?;
                match self.next() {
                    Some(Token::CloseParen) => Ok(inner),
                    None => Err(LogoError::Unclosed('(')),
                    Some(other) => Err(LogoError::Syntax(format!("expected ) but found {other}"))),
                }
            }
            Token::OpenBracket => self.list().map(Expr::List),
            Token::Word(name) => self.call(name, env),
            Token::CloseParen => Err(LogoError::Unexpected(')')),
            Token::CloseBracket => Err(LogoError::Unexpected(']')),
            Token::Operator(op) => Err(LogoError::Unexpected(op.as_char())),
            Token::Newline => {
                self.pos -= 1;
                Err(LogoError::MissingInput)
            }
        }
    }

    fn call(&mut self, name: &str, env: &dyn Arities) -> Result<Expr, LogoError> {
        if name == "to" || name == "end" {
            return Err(LogoError::Syntax(format!(
                "{name} must start an instruction"
            )));
        }
        let arity = env
            .arity(name)
            .ok_or_else(|| LogoError::UnknownWord(name.to_string()))?;
        let mut args = Vec::with_capacity(arity);
        for _ in 0..arity {
            match self.peek() {
                None | Some(Token::Newline | Token::CloseParen | Token::CloseBracket) => {
                    return Err(LogoError::NotEnoughInputs(name.to_string()));
                }
                Some(_) => args.push(self.expression(env)?),
            }
        }
        Ok(Expr::Call(name.to_string(), args))
    }

    /// Reads a bracketed list literal; the opening bracket is consumed.
    fn list(&mut self) -> Result<Vec<Value>, LogoError> {
        let mut items = Vec::new();
        loop {
            match self.next() {
                None => return Err(LogoError::Unclosed('[')),
                Some(Token::CloseBracket) => return Ok(items),
                Some(Token::OpenBracket) => items.push(Value::List(self.list()?)),
                Some(Token::Newline) => {}
                Some(tok) => items.push(Value::from_token(tok)),
            }
        }
    }
}
