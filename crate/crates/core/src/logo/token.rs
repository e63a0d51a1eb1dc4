//! Lexer for the Logo dialect the keyboard emits.
//!
//! Words are runs of letters (and `_`); digits never continue a word, so
//! `"n4` lexes as the quoted word `n` followed by the number `4`, and `30rt`
//! as the number `30` followed by the word `rt`. This lets keyboard
//! selections concatenate without explicit separators between a spelled
//! name and a number.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Operator {
    Add,
    Sub,
    Mul,
    Div,
    Less,
    Greater,
    Equal,
}

impl Operator {
    pub fn from_char(c: char) -> Option<Operator> {
        Some(match c {
            '+' => Operator::Add,
            '-' => Operator::Sub,
            '*' => Operator::Mul,
            '/' => Operator::Div,
            '<' => Operator::Less,
            '>' => Operator::Greater,
            '=' => Operator::Equal,
            _ => return None,
        })
    }

    pub fn as_char(self) -> char {
        match self {
            Operator::Add => '+',
            Operator::Sub => '-',
            Operator::Mul => '*',
            Operator::Div => '/',
            Operator::Less => '<',
            Operator::Greater => '>',
            Operator::Equal => '=',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Token {
    Word(String),
    QuotedWord(String),
    ThingRef(String),
    Number(f64),
    OpenParen,
    CloseParen,
    OpenBracket,
    CloseBracket,
    Operator(Operator),
    Newline,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Word(w) => f.write_str(w),
            Token::QuotedWord(w) => write!(f, "\"{w}"),
            Token::ThingRef(w) => write!(f, ":{w}"),
            Token::Number(n) => write!(f, "{n}"),
            Token::OpenParen => f.write_str("("),
            Token::CloseParen => f.write_str(")"),
            Token::OpenBracket => f.write_str("["),
            Token::CloseBracket => f.write_str("]"),
            Token::Operator(op) => write!(f, "{}", op.as_char()),
            Token::Newline => f.write_str("\n"),
        }
    }
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("unexpected character {ch:?} at {pos}")]
    StrayCharacter { ch: char, pos: Position },
    #[error("{prefix:?} at {pos} must be followed by a word")]
    DanglingPrefix { prefix: char, pos: Position },
}

pub(crate) fn is_word_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_word_char(c: char) -> bool {
    is_word_start(c)
}

pub fn tokenize(source: &str) -> Result<Vec<Token>, LexError> {
    Ok(tokenize_with_positions(source)?
        .into_iter()
        .map(|(tok, _)| tok)
        .collect())
}

pub fn tokenize_with_positions(source: &str) -> Result<Vec<(Token, Position)>, LexError> {
    let mut lexer = Lexer {
        chars: source.chars().collect(),
        idx: 0,
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    while let Some(c) = lexer.peek() {
        let pos = lexer.position();
        match c {
            '\n' => {
                lexer.bump();
                out.push((Token::Newline, pos));
            }
            c if c.is_whitespace() => {
                lexer.bump();
            }
            ';' => {
                while lexer.peek().is_some_and(|c| c != '\n') {
                    lexer.bump();
                }
            }
            '(' | ')' | '[' | ']' => {
                lexer.bump();
                let tok = match c {
                    '(' => Token::OpenParen,
                    ')' => Token::CloseParen,
                    '[' => Token::OpenBracket,
                    _ => Token::CloseBracket,
                };
                out.push((tok, pos));
            }
            '"' | ':' => {
                lexer.bump();
                if !lexer.peek().is_some_and(is_word_start) {
                    return Err(LexError::DanglingPrefix { prefix: c, pos });
                }
                let word = lexer.word();
                let tok = if c == '"' {
                    Token::QuotedWord(word)
                } else {
                    Token::ThingRef(word)
                };
                out.push((tok, pos));
            }
            c if c.is_ascii_digit() => out.push((Token::Number(lexer.number()), pos)),
            '.' if lexer.peek_at(1).is_some_and(|c| c.is_ascii_digit()) => {
                out.push((Token::Number(lexer.number()), pos))
            }
            c if is_word_start(c) => out.push((Token::Word(lexer.word()), pos)),
            c => match Operator::from_char(c) {
                Some(op) => {
                    lexer.bump();
                    out.push((Token::Operator(op), pos));
                }
                None => return Err(LexError::StrayCharacter { ch: c, pos }),
            },
        }
    }
    Ok(out)
}

/// Renders tokens separated by single spaces; the result re-lexes to the
/// same token list.
pub fn render_tokens(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

struct Lexer {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
}

impl Lexer {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn peek_at(&self, offset: usize) -> Option<char> {
        self.chars.get(self.idx + offset).copied()
    }

    fn position(&self) -> Position {
        Position {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn word(&mut self) -> String {
        let mut word = String::new();
        while let Some(c) = self.peek().filter(|&c| is_word_char(c)) {
            self.bump();
            word.extend(c.to_lowercase());
        }
        word
    }

    fn number(&mut self) -> f64 {
        let mut text = String::new();
        while let Some(c) = self.peek().filter(char::is_ascii_digit) {
            self.bump();
            text.push(c);
        }
        if self.peek() == Some('.') && self.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            self.bump();
            text.push('.');
            while let Some(c) = self.peek().filter(char::is_ascii_digit) {
                self.bump();
                text.push(c);
            }
        }
        if text.starts_with('.') {
            text.insert(0, '0');
        }
        text.parse().expect("digit run with at most one dot")
    }
}
