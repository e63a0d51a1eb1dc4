//! Press-count model for entering a Logo program three ways: a physical
//! keyboard, direct pointing at virtual keys, and single-switch scanning.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout::{KeyKind, Layout};
use crate::logo::{self, LexError, Token};
use crate::scanner::ScanConfig;

/// Switch presses per scanned selection: one per hierarchy level.
pub const PRESSES_PER_SCAN_SELECTION: u64 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Physical,
    Direct,
    Scanning,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Physical => "physical",
            Method::Direct => "direct",
            Method::Scanning => "scanning",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub method: Method,
    pub presses: u64,
    pub scan_ticks: u64,
    /// Scan-step time only; human reaction time is not modeled.
    pub est_time_ms: u64,
}

/// Virtual-keyboard key ids, in selection order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelectionSequence(pub Vec<String>);

impl SelectionSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    /// Concatenated key outputs, i.e. the text the selections type.
    pub fn replay(&self, layout: &Layout) -> Result<String, CostError> {
        let mut text = String::new();
        for id in self.iter() {
            let key = layout
                .lookup(id)
                .ok_or_else(|| CostError::UnknownKey(id.to_string()))?;
            text.push_str(&key.output);
        }
        Ok(text)
    }
}

/// Physical keyboard model: characters that need an extra modifier press
/// (shift or AltGr) cost one more.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhysicalModel {
    pub modifier_map: BTreeMap<char, u8>,
    pub count_newlines: bool,
}

impl PhysicalModel {
    /// Portuguese keyboard: `"` `(` `)` `:` are shifted, `[` `]` need AltGr.
    /// One Enter per line, including the last.
    pub fn portuguese() -> Self {
        PhysicalModel {
            modifier_map: ['"', '(', ')', ':', '[', ']']
                .into_iter()
                .map(|c| (c, 1))
                .collect(),
            count_newlines: true,
        }
    }
}

impl Default for PhysicalModel {
    fn default() -> Self {
        Self::portuguese()
    }
}

#[derive(Debug, Error)]
pub enum CostError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("no key in the layout produces {text:?}")]
    Unproducible { text: String },
    #[error("unknown key id {0:?}")]
    UnknownKey(String),
}

/// Text the planner matches keys against: the program's tokens, one line
/// per non-empty line, with a space only where two tokens would otherwise
/// fuse. Words typed by a command key keep that key's trailing space.
pub fn canonical_text(program: &str, layout: &Layout) -> Result<String, CostError> {
    let tokens = logo::tokenize(program)?;
    let lines: Vec<&[Token]> = tokens
        .split(|t| *t == Token::Newline)
        .filter(|line| !line.is_empty())
        .collect();
    let mut out = Vec::with_capacity(lines.len());
    for line in lines {
        let mut text = String::new();
        for tok in line {
            let piece = match tok {
                Token::Word(w) if has_command_key(layout, w) => format!("{w} "),
                other => other.to_string(),
            };
            if needs_separator(&text, &piece) {
                text.push(' ');
            }
            text.push_str(&piece);
        }
        out.push(text);
    }
    Ok(out.join("\n"))
}

fn has_command_key(layout: &Layout, word: &str) -> bool {
    layout
        .keys()
        .any(|(_, k)| k.kind == KeyKind::Command && k.output.strip_suffix(' ') == Some(word))
}

/// Whether `next` would lex together with the end of `prev`.
fn needs_separator(prev: &str, next: &str) -> bool {
    let (Some(a), Some(b)) = (prev.chars().last(), next.chars().next()) else {
        return false;
    };
    let wordy = |c: char| c.is_alphabetic() || c == '_';
    (wordy(a) && wordy(b)) || (a.is_ascii_digit() && (b.is_ascii_digit() || b == '.'))
}

/// Greedy plan: at each point take the key whose output covers the longest
/// prefix of the remaining canonical text. Line breaks become `enter`
/// selections, with none after the last line.
pub fn plan_selections(program: &str, layout: &Layout) -> Result<SelectionSequence, CostError> {
    let text = canonical_text(program, layout)?;
    let mut keys: Vec<(&str, &str)> = layout
        .keys()
        .filter(|(_, k)| !k.output.is_empty())
        .map(|(_, k)| (k.output.as_str(), k.id.as_str()))
        .collect();
    // longest first; the stable sort keeps layout order among equals
    keys.sort_by_key(|(out, _)| std::cmp::Reverse(out.len()));

    let mut seq = Vec::new();
    let mut rest = text.as_str();
    while !rest.is_empty() {
        let (output, id) = keys
            .iter()
            .find(|(out, _)| rest.starts_with(out))
            .ok_or_else(|| CostError::Unproducible {
                text: rest.chars().take(1).collect(),
            })?;
        seq.push(id.to_string());
        rest = &rest[output.len()..];
    }
    Ok(SelectionSequence(seq))
}

pub fn physical_cost(program: &str, model: &PhysicalModel) -> CostReport {
    let program = program.replace("\r\n", "\n");
    let chars = program.chars().filter(|&c| c != '\n').count() as u64;
    let enters = if model.count_newlines && !program.is_empty() {
        let breaks = program.matches('\n').count() as u64;
        if program.ends_with('\n') {
            breaks
        } else {
            breaks + 1
        }
    } else {
        0
    };
    let modifiers: u64 = program
        .chars()
        .map(|c| u64::from(model.modifier_map.get(&c).copied().unwrap_or(0)))
        .sum();
    CostReport {
        method: Method::Physical,
        presses: chars + enters + modifiers,
        scan_ticks: 0,
        est_time_ms: 0,
    }
}

pub fn direct_cost(seq: &SelectionSequence) -> CostReport {
    CostReport {
        method: Method::Direct,
        presses: seq.len() as u64,
        scan_ticks: 0,
        est_time_ms: 0,
    }
}

/// Presses and ticks for scanning each selection from the top level, as
/// with `post_select = reset_to_top`.
pub fn scanning_cost(
    seq: &SelectionSequence,
    layout: &Layout,
    config: &ScanConfig,
) -> Result<CostReport, CostError> {
    let mut ticks = 0u64;
    for id in seq.iter() {
        let path = layout
            .scan_path(id)
            .map_err(|_| CostError::UnknownKey(id.to_string()))?;
        ticks += path.tick_distance() as u64;
    }
    Ok(CostReport {
        method: Method::Scanning,
        presses: PRESSES_PER_SCAN_SELECTION * seq.len() as u64,
        scan_ticks: ticks,
        est_time_ms: ticks * config.period_ms,
    })
}

pub fn render_table(reports: &[CostReport]) -> String {
    let mut out = format!(
        "{:<10} {:>8} {:>8} {:>12}\n",
        "method", "presses", "ticks", "est_time"
    );
    for r in reports {
        let _ = writeln!(
            out,
            "{:<10} {:>8} {:>8} {:>12}",
            r.method.as_str(),
            r.presses,
            r.scan_ticks,
            format!("{} ms", r.est_time_ms)
        );
    }
    out
}
