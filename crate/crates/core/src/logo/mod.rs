//! Embedded Logo interpreter: the command window the keyboard types into.
//!
//! The dialect is a small UCBLogo-style subset: `to`/`end` procedures,
//! `make "name value`, `:name` references, turtle motion, `repeat`/`if`,
//! and infix arithmetic with the usual precedence.

mod error;
mod parse;
pub mod svg;
pub mod token;
pub mod turtle;
mod value;

use std::collections::HashMap;
use std::fmt;

pub use error::LogoError;
pub use svg::{segments_to_svg, SvgError};
pub use token::{render_tokens, tokenize, LexError, Operator, Position, Token};
pub use turtle::{Segment, TurtleState};
pub use value::Value;

use parse::{Arities, Expr, Instr, Parser};

/// Maximum nesting of user procedure calls.
pub const MAX_DEPTH: usize = 10_000;
/// Evaluation steps allowed per `run` call before it is aborted.
pub const MAX_STEPS: u64 = 20_000_000;

/// Primitive names with their input counts.
pub const BUILTINS: &[(&str, usize)] = &[
    ("fd", 1),
    ("forward", 1),
    ("bk", 1),
    ("back", 1),
    ("rt", 1),
    ("right", 1),
    ("lt", 1),
    ("left", 1),
    ("home", 0),
    ("setheading", 1),
    ("setpos", 1),
    ("setx", 1),
    ("sety", 1),
    ("xcor", 0),
    ("ycor", 0),
    ("heading", 0),
    ("pd", 0),
    ("pendown", 0),
    ("pu", 0),
    ("penup", 0),
    ("cs", 0),
    ("clearscreen", 0),
    ("repeat", 2),
    ("if", 2),
    ("ifelse", 3),
    ("stop", 0),
    ("output", 1),
    ("and", 2),
    ("or", 2),
    ("not", 1),
    ("make", 2),
    ("thing", 1),
    ("sum", 2),
    ("difference", 2),
    ("product", 2),
    ("quotient", 2),
    ("remainder", 2),
    ("sqrt", 1),
    ("abs", 1),
    ("int", 1),
    ("round", 1),
    ("print", 1),
    ("show", 1),
    ("type", 1),
];

fn builtin_arity(name: &str) -> Option<usize> {
    BUILTINS.iter().find(|(n, _)| *n == name).map(|(_, a)| *a)
}

/// `to` and `end` are special forms rather than procedures.
pub fn is_reserved(name: &str) -> bool {
    name == "to" || name == "end" || builtin_arity(name).is_some()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Procedure {
    pub name: String,
    pub params: Vec<String>,
    pub body: Vec<Token>,
}

/// What a single `run` call produced.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    /// Segments drawn during the run. When `cleared` is set these are the
    /// segments drawn after the last clearscreen.
    pub segments: Vec<Segment>,
    pub printed: Vec<String>,
    pub cleared: bool,
}

/// A run aborted by its first error; `report` holds the effects that
/// happened before it.
#[derive(Debug, Clone, PartialEq)]
pub struct RunFailure {
    pub error: LogoError,
    pub report: RunReport,
}

impl fmt::Display for RunFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.error.fmt(f)
    }
}

impl std::error::Error for RunFailure {}

enum Unwind {
    Stop,
    Output(Value),
    Error(LogoError),
}

impl From<LogoError> for Unwind {
    fn from(e: LogoError) -> Self {
        Unwind::Error(e)
    }
}

type Flow<T> = Result<T, Unwind>;

#[derive(Debug, Clone, Default)]
pub struct Environment {
    pub variables: HashMap<String, Value>,
    pub procedures: HashMap<String, Procedure>,
    pub turtle: TurtleState,
    pub output_log: Vec<String>,
    frames: Vec<HashMap<String, Value>>,
    pending: String,
    steps: u64,
    /// Overrides [`MAX_STEPS`].
    step_limit: Option<u64>,
}

impl Arities for Environment {
    fn arity(&self, name: &str) -> Option<usize> {
        builtin_arity(name).or_else(|| self.procedures.get(name).map(|p| p.params.len()))
    }
}

impl Environment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_step_limit(limit: u64) -> Self {
        Environment {
            step_limit: Some(limit),
            ..Self::default()
        }
    }

    /// Adds or replaces a user procedure.
    pub fn define(&mut self, proc: Procedure) -> Result<(), LogoError> {
        if is_reserved(&proc.name) {
            return Err(LogoError::BuiltinCollision(proc.name));
        }
        self.procedures.insert(proc.name.clone(), proc);
        Ok(())
    }

    pub fn lookup(&self, name: &str) -> Option<&Value> {
        self.frames
            .iter()
            .rev()
            .find_map(|f| f.get(name))
            .or_else(|| self.variables.get(name))
    }

    /// Evaluates every top-level instruction of `source` in order. The
    /// first error stops the run; effects before it stay applied.
    pub fn run(&mut self, source: &str) -> Result<RunReport, RunFailure> {
        let seg_start = self.turtle.segments.len();
        let clears = self.turtle.clear_count();
        let log_start = self.output_log.len();
        self.steps = 0;

        let result = self.run_source(source);
        self.frames.clear();
        self.flush_pending();

        let cleared = self.turtle.clear_count() != clears;
        let segments = if cleared {
            self.turtle.segments.clone()
        } else {
            self.turtle.segments[seg_start..].to_vec()
        };
        let report = RunReport {
            segments,
            printed: self.output_log[log_start..].to_vec(),
            cleared,
        };
        match result {
            Ok(()) => Ok(report),
            Err(error) => Err(RunFailure { error, report }),
        }
    }

    fn run_source(&mut self, source: &str) -> Result<(), LogoError> {
        let tokens = tokenize(source)?;
        let mut parser = Parser::new(&tokens);
        while let Some(instr) = parser.instruction(self)? {
            match instr {
                Instr::Define(def) => self.define(Procedure {
                    name: def.name,
                    params: def.params,
                    body: def.body,
                })?,
                Instr::Eval(expr) => match self.exec(&expr) {
                    Ok(()) => {}
                    Err(Unwind::Error(e)) => return Err(e),
                    Err(Unwind::Stop) => return Err(LogoError::OutsideProcedure("stop".into())),
                    Err(Unwind::Output(_)) => {
                        return Err(LogoError::OutsideProcedure("output".into()))
                    }
                },
            }
        }
        Ok(())
    }

    fn flush_pending(&mut self) {
        if !self.pending.is_empty() {
            let line = std::mem::take(&mut self.pending);
            self.output_log.push(line);
        }
    }

    fn emit_line(&mut self, text: &str) {
        let mut line = std::mem::take(&mut self.pending);
        line.push_str(text);
        self.output_log.push(line);
    }

    fn exec_block(&mut self, block: &[Expr]) -> Flow<()> {
        block.iter().try_for_each(|e| self.exec(e))
    }

    fn exec(&mut self, expr: &Expr) -> Flow<()> {
        match self.eval(expr)? {
            None => Ok(()),
            Some(v) => Err(LogoError::UnusedValue(v.to_string()).into()),
        }
    }

    fn value(&mut self, expr: &Expr) -> Flow<Value> {
        match self.eval(expr)? {
            Some(v) => Ok(v),
            None => {
                let name = match expr {
                    Expr::Call(name, _) => name.clone(),
                    _ => "expression".to_string(),
                };
                Err(LogoError::NoOutput(name).into())
            }
        }
    }

    fn eval(&mut self, expr: &Expr) -> Flow<Option<Value>> {
        self.steps += 1;
        let limit = self.step_limit.unwrap_or(MAX_STEPS);
        if self.steps > limit {
            return Err(LogoError::StepLimit(limit).into());
        }
        let v = match expr {
            Expr::Number(n) => Value::Number(*n),
            Expr::Quoted(w) => Value::Word(w.clone()),
            Expr::List(items) => Value::List(items.clone()),
            Expr::Thing(name) => self
                .lookup(name)
                .cloned()
                .ok_or_else(|| LogoError::UnboundVariable(name.clone()))?,
            Expr::Neg(inner) => {
                let v = self.value(inner)?;
                Value::Number(-number("-", &v)?)
            }
            Expr::Binary(op, lhs, rhs) => {
                let a = self.value(lhs)?;
                let b = self.value(rhs)?;
                binary(*op, &a, &b)?
            }
            Expr::Call(name, args) => {
                let mut values = Vec::with_capacity(args.len());
                for arg in args {
                    values.push(self.value(arg)?);
                }
                return if builtin_arity(name).is_some() {
                    self.call_builtin(name, values)
                } else {
                    self.call_procedure(name, values)
                };
            }
        };
        Ok(Some(v))
    }

    fn call_procedure(&mut self, name: &str, args: Vec<Value>) -> Flow<Option<Value>> {
        let proc = self
            .procedures
            .get(name)
            .cloned()
            .ok_or_else(|| LogoError::UnknownWord(name.to_string()))?;
        if self.frames.len() >= MAX_DEPTH {
            return Err(LogoError::TooDeep(MAX_DEPTH).into());
        }
        let body = Parser::new(&proc.body).block(self)?;
        self.frames
            .push(proc.params.iter().cloned().zip(args).collect());
        let result = stacker::maybe_grow(128 * 1024, 4 * 1024 * 1024, || self.exec_block(&body));
        self.frames.pop();
        match result {
            Ok(()) | Err(Unwind::Stop) => Ok(None),
            Err(Unwind::Output(v)) => Ok(Some(v)),
            Err(e) => Err(e),
        }
    }

    fn run_list(&mut self, proc: &str, list: &Value) -> Flow<()> {
        let Value::List(items) = list else {
            return Err(bad_input(proc, list).into());
        };
        let mut tokens = Vec::new();
        for item in items {
            item.push_tokens(&mut tokens);
        }
        let block = Parser::new(&tokens).block(self)?;
        self.exec_block(&block)
    }

    fn call_builtin(&mut self, name: &str, args: Vec<Value>) -> Flow<Option<Value>> {
        let num = |i: usize| number(name, &args[i]);
        let out = match name {
            "fd" | "forward" => {
                self.turtle.forward(num(0)?);
                None
            }
            "bk" | "back" => {
                self.turtle.back(num(0)?);
                None
            }
            "rt" | "right" => {
                self.turtle.right(num(0)?);
                None
            }
            "lt" | "left" => {
                self.turtle.left(num(0)?);
                None
            }
            "home" => {
                self.turtle.home();
                None
            }
            "setheading" => {
                self.turtle.set_heading(num(0)?);
                None
            }
            "setpos" => {
                let (x, y) = match &args[0] {
                    Value::List(xy) if xy.len() == 2 => {
                        (number(name, &xy[0])?, number(name, &xy[1])?)
                    }
                    other => return Err(bad_input(name, other).into()),
                };
                self.turtle.move_to(x, y);
                None
            }
            "setx" => {
                let y = self.turtle.y;
                self.turtle.move_to(num(0)?, y);
                None
            }
            "sety" => {
                let x = self.turtle.x;
                self.turtle.move_to(x, num(0)?);
                None
            }
            "xcor" => Some(Value::Number(self.turtle.x)),
            "ycor" => Some(Value::Number(self.turtle.y)),
            "heading" => Some(Value::Number(self.turtle.heading)),
            "pd" | "pendown" => {
                self.turtle.pen_down = true;
                None
            }
            "pu" | "penup" => {
                self.turtle.pen_down = false;
                None
            }
            "cs" | "clearscreen" => {
                self.turtle.clear_screen();
                None
            }
            "repeat" => {
                let count = num(0)?.floor();
                let Value::List(_) = &args[1] else {
                    return Err(bad_input(name, &args[1]).into());
                };
                let mut i = 0.0;
                while i < count {
                    self.run_list(name, &args[1])?;
                    i += 1.0;
                }
                None
            }
            "if" => {
                if truth(name, &args[0])? {
                    self.run_list(name, &args[1])?;
                }
                None
            }
            "ifelse" => {
                let branch = if truth(name, &args[0])? { 1 } else { 2 };
                self.run_list(name, &args[branch])?;
                None
            }
            "stop" => {
                if self.frames.is_empty() {
                    return Err(LogoError::OutsideProcedure("stop".into()).into());
                }
                return Err(Unwind::Stop);
            }
            "output" => {
                if self.frames.is_empty() {
                    return Err(LogoError::OutsideProcedure("output".into()).into());
                }
                return Err(Unwind::Output(args[0].clone()));
            }
            "and" => Some(Value::truth(
                truth(name, &args[0])? && truth(name, &args[1])?,
            )),
            "or" => Some(Value::truth(
                truth(name, &args[0])? || truth(name, &args[1])?,
            )),
            "not" => Some(Value::truth(!truth(name, &args[0])?)),
            "make" => {
                let Value::Word(var) = &args[0] else {
                    return Err(bad_input(name, &args[0]).into());
                };
                self.assign(var, args[1].clone());
                None
            }
            "thing" => {
                let Value::Word(var) = &args[0] else {
                    return Err(bad_input(name, &args[0]).into());
                };
                Some(
                    self.lookup(var)
                        .cloned()
                        .ok_or_else(|| LogoError::UnboundVariable(var.clone()))?,
                )
            }
            "sum" => Some(binary(Operator::Add, &args[0], &args[1])?),
            "difference" => Some(binary(Operator::Sub, &args[0], &args[1])?),
            "product" => Some(binary(Operator::Mul, &args[0], &args[1])?),
            "quotient" => Some(binary(Operator::Div, &args[0], &args[1])?),
            "remainder" => {
                let (a, b) = (num(0)?, num(1)?);
                if b == 0.0 {
                    return Err(LogoError::DivisionByZero.into());
                }
                Some(Value::Number(a % b))
            }
            "sqrt" => Some(Value::Number(finite(name, num(0)?.sqrt())?)),
            "abs" => Some(Value::Number(num(0)?.abs())),
            "int" => Some(Value::Number(num(0)?.trunc())),
            "round" => Some(Value::Number(num(0)?.round())),
            "print" => {
                self.emit_line(&args[0].print_form());
                None
            }
            "show" => {
                self.emit_line(&args[0].to_string());
                None
            }
            "type" => {
                self.pending.push_str(&args[0].print_form());
                None
            }
            other => return Err(LogoError::UnknownWord(other.to_string()).into()),
        };
        Ok(out)
    }

    /// `make` rebinds the innermost visible variable, else a global.
    fn assign(&mut self, name: &str, value: Value) {
        for frame in self.frames.iter_mut().rev() {
            if let Some(slot) = frame.get_mut(name) {
                *slot = value;
                return;
            }
        }
        self.variables.insert(name.to_string(), value);
    }
}

fn bad_input(proc: &str, value: &Value) -> LogoError {
    LogoError::BadInput {
        proc: proc.to_string(),
        value: value.to_string(),
    }
}

fn number(proc: &str, value: &Value) -> Result<f64, LogoError> {
    value.as_number().ok_or_else(|| bad_input(proc, value))
}

fn truth(proc: &str, value: &Value) -> Result<bool, LogoError> {
    value.as_bool().ok_or_else(|| bad_input(proc, value))
}

fn finite(proc: &str, n: f64) -> Result<f64, LogoError> {
    if n.is_finite() {
        Ok(n)
    } else {
        Err(LogoError::NonFinite(proc.to_string()))
    }
}

fn binary(op: Operator, a: &Value, b: &Value) -> Result<Value, LogoError> {
    let sym = op.as_char().to_string();
    if op == Operator::Equal {
        return Ok(Value::truth(a.logo_eq(b)));
    }
    let (x, y) = (number(&sym, a)?, number(&sym, b)?);
    let n = match op {
        Operator::Add => x + y,
        Operator::Sub => x - y,
        Operator::Mul => x * y,
        Operator::Div => {
            if y == 0.0 {
                return Err(LogoError::DivisionByZero);
            }
            x / y
        }
        Operator::Less => return Ok(Value::truth(x < y)),
        Operator::Greater => return Ok(Value::truth(x > y)),
        Operator::Equal => unreachable!(),
    };
    Ok(Value::Number(finite(&sym, n)?))
}

/// Checks that `source` lexes and parses, without evaluating anything.
/// Procedures defined in `source` are visible to the instructions after
/// them and to every procedure body.
pub fn check_syntax(source: &str) -> Result<(), LogoError> {
    let tokens = tokenize(source)?;
    let mut scratch = Environment::new();
    let mut parser = Parser::new(&tokens);
    while let Some(instr) = parser.instruction(&scratch)? {
        if let Instr::Define(def) = instr {
            scratch.define(Procedure {
                name: def.name,
                params: def.params,
                body: def.body,
            })?;
        }
    }
    for proc in scratch.procedures.values() {
        Parser::new(&proc.body).block(&scratch)?;
    }
    Ok(())
}
