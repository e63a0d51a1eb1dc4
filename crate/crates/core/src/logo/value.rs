use std::fmt;

use super::token::{Operator, Token};

/// Runtime Logo datum.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Word(String),
    List(Vec<Value>),
}

impl Value {
    pub fn truth(b: bool) -> Value {
        Value::Word(if b { "true" } else { "false" }.to_string())
    }

    /// Numbers, and words that spell a number, coerce.
    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(n) => Some(*n),
            Value::Word(w) => w.parse::<f64>().ok().filter(|n| n.is_finite()),
            Value::List(_) => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Word(w) if w == "true" => Some(true),
            Value::Word(w) if w == "false" => Some(false),
            _ => None,
        }
    }

    /// Logo equality: numeric when both sides coerce, otherwise structural
    /// with case-insensitive words.
    pub fn logo_eq(&self, other: &Value) -> bool {
        if let (Some(a), Some(b)) = (self.as_number(), other.as_number()) {
            return a == b;
        }
        match (self, other) {
            (Value::Word(a), Value::Word(b)) => a.eq_ignore_ascii_case(b),
            (Value::List(a), Value::List(b)) => {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.logo_eq(y))
            }
            _ => false,
        }
    }

    /// Text as `print` shows it: outer list brackets dropped.
    pub fn print_form(&self) -> String {
        match self {
            Value::List(items) => join_items(items),
            other => other.to_string(),
        }
    }

    pub(crate) fn from_token(tok: &Token) -> Value {
        match tok {
            Token::Number(n) => Value::Number(*n),
            Token::Word(w) => Value::Word(w.clone()),
            other => Value::Word(other.to_string()),
        }
    }

    /// Inverse of list-literal construction, used to run a list as code.
    pub(crate) fn push_tokens(&self, out: &mut Vec<Token>) {
        match self {
            Value::Number(n) => out.push(Token::Number(*n)),
            Value::List(items) => {
                out.push(Token::OpenBracket);
                for item in items {
                    item.push_tokens(out);
                }
                out.push(Token::CloseBracket);
            }
            Value::Word(w) => {
                let mut chars = w.chars();
                let tok = match (chars.next(), chars.as_str()) {
                    (Some('"'), rest) if !rest.is_empty() => Token::QuotedWord(rest.to_string()),
                    (Some(':'), rest) if !rest.is_empty() => Token::ThingRef(rest.to_string()),
                    (Some('('), "") => Token::OpenParen,
                    (Some(')'), "") => Token::CloseParen,
                    (Some(c), "") if Operator::from_char(c).is_some() => {
                        Token::Operator(Operator::from_char(c).unwrap())
                    }
                    _ => match w.parse::<f64>() {
                        Ok(n) if n.is_finite() && w.starts_with(|c: char| c.is_ascii_digit()) => {
                            Token::Number(n)
                        }
                        _ => Token::Word(w.clone()),
                    },
                };
                out.push(tok);
            }
        }
    }
}

pub(crate) fn format_number(n: f64) -> String {
    if n == 0.0 {
        return "0".to_string();
    }
    if n.fract() == 0.0 && n.abs() < 1e15 {
        format!("{}", n as i64)
    } else {
        format!("{n}")
    }
}

fn join_items(items: &[Value]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(n) => f.write_str(&format_number(*n)),
            Value::Word(w) => f.write_str(w),
            Value::List(items) => write!(f, "[{}]", join_items(items)),
        }
    }
}
