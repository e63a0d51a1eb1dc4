use thiserror::Error;

use super::token::LexError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogoError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unexpected {0:?}")]
    Unexpected(char),
    #[error("missing input")]
    MissingInput,
    #[error("I don't know how to {0}")]
    UnknownWord(String),
    #[error("not enough inputs to {0}")]
    NotEnoughInputs(String),
    #[error("{0} has no value")]
    UnboundVariable(String),
    #[error("end without to")]
    EndWithoutTo,
    #[error("procedure {0} is missing its end")]
    MissingEnd(String),
    #[error("cannot define {0} inside another definition or list")]
    NestedDefinition(String),
    #[error("unclosed {0:?}")]
    Unclosed(char),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is a primitive and cannot be redefined")]
    BuiltinCollision(String),
    #[error("{proc} doesn't like {value} as input")]
    BadInput { proc: String, value: String },
    #[error("{0} didn't output a value")]
    NoOutput(String),
    #[error("you don't say what to do with {0}")]
    UnusedValue(String),
    #[error("{0} can only be used inside a procedure")]
    OutsideProcedure(String),
    #[error("{0} produced a non-finite number")]
    NonFinite(String),
    #[error("procedure calls nested deeper than {0}")]
    TooDeep(usize),
    #[error("evaluation exceeded {0} steps")]
    StepLimit(u64),
}

impl LogoError {
    /// Stable snake_case identifier, used as the error code on the wire.
    pub fn code(&self) -> &'static str {
        match self {
            LogoError::Lex(_) => "lex_error",
            LogoError::Syntax(_) | LogoError::Unexpected(_) | LogoError::MissingInput => {
                "syntax_error"
            }
            LogoError::UnknownWord(_) => "unknown_word",
            LogoError::NotEnoughInputs(_) => "wrong_arity",
            LogoError::UnboundVariable(_) => "unbound_variable",
            LogoError::EndWithoutTo => "end_without_to",
            LogoError::MissingEnd(_) | LogoError::NestedDefinition(_) => "bad_definition",
            LogoError::Unclosed(_) => "unclosed",
            LogoError::DivisionByZero => "division_by_zero",
            LogoError::BuiltinCollision(_) => "builtin_collision",
            LogoError::BadInput { .. } => "bad_input",
            LogoError::NoOutput(_) => "no_output",
            LogoError::UnusedValue(_) => "unused_value",
            LogoError::OutsideProcedure(_) => "outside_procedure",
            LogoError::NonFinite(_) => "non_finite",
            LogoError::TooDeep(_) => "too_deep",
            LogoError::StepLimit(_) => "step_limit",
        }
    }
}
