//! Keyboard layout: groups, subgroups, rows and keys.
//!
//! Layouts are JSON documents. [`parse_layout`] validates one and builds
//! the id index; [`render`] writes the canonical form back out
//! (authored order, two-space indent).

use std::collections::HashMap;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logo;

const DEFAULT_LAYOUT: &str = include_str!("../layouts/default.json");

/// Control key ids the engine knows how to apply to the buffer.
pub const CONTROL_IDS: &[&str] = &["enter", "space", "backspace", "clear"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeyKind {
    Command,
    Letter,
    Digit,
    Symbol,
    Control,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HelpEntry {
    pub summary: String,
    /// Logo source demonstrating the key.
    pub example: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyDef {
    pub id: String,
    pub label: String,
    pub output: String,
    pub kind: KeyKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub help: Option<HelpEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Subgroup {
    pub id: String,
    pub label: String,
    pub rows: Vec<Vec<KeyDef>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Group {
    pub id: String,
    pub label: String,
    pub subgroups: Vec<Subgroup>,
}

/// Location of a key as 0-based (group, subgroup, row, key) indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ScanPath {
    pub group: usize,
    pub subgroup: usize,
    pub row: usize,
    pub key: usize,
}

impl ScanPath {
    pub fn new(group: usize, subgroup: usize, row: usize, key: usize) -> Self {
        ScanPath {
            group,
            subgroup,
            row,
            key,
        }
    }

    pub fn as_array(&self) -> [usize; 4] {
        [self.group, self.subgroup, self.row, self.key]
    }

    /// Scan steps needed to reach this key from the top: one tick per
    /// sibling skipped at each level.
    pub fn tick_distance(&self) -> usize {
        self.group + self.subgroup + self.row + self.key
    }
}

impl fmt::Display for ScanPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.group, self.subgroup, self.row, self.key
        )
    }
}

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error("layout syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate key id {0:?}")]
    DuplicateId(String),
    #[error("empty {0}")]
    Empty(String),
    #[error("key {0:?} has an empty output")]
    EmptyOutput(String),
    #[error("control key {0:?} is not one of enter, space, backspace, clear")]
    UnknownControl(String),
    #[error("help example for {id:?} does not parse: {error}")]
    BadHelpExample { id: String, error: logo::LogoError },
    #[error("unknown key id {0:?}")]
    UnknownKey(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A validated keyboard layout. Immutable once built.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "LayoutDoc")]
pub struct Layout {
    pub name: String,
    pub groups: Vec<Group>,
    #[serde(skip)]
    index: HashMap<String, ScanPath>,
}

impl PartialEq for Layout {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.groups == other.groups
    }
}

impl Eq for Layout {}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutDoc {
    name: String,
    groups: Vec<Group>,
}

impl TryFrom<LayoutDoc> for Layout {
    type Error = LayoutError;

    fn try_from(doc: LayoutDoc) -> Result<Layout, LayoutError> {
        Layout::new(doc.name, doc.groups)
    }
}

impl Layout {
    /// Validates the hierarchy and builds the id index.
    pub fn new(name: String, groups: Vec<Group>) -> Result<Layout, LayoutError> {
        if groups.is_empty() {
            return Err(LayoutError::Empty("layout (no groups)".into()));
        }
        let mut index = HashMap::new();
        for (g, group) in groups.iter().enumerate() {
            if group.subgroups.is_empty() {
                return Err(LayoutError::Empty(format!("group {:?}", group.id)));
            }
            for (s, sub) in group.subgroups.iter().enumerate() {
                if sub.rows.is_empty() {
                    return Err(LayoutError::Empty(format!("subgroup {:?}", sub.id)));
                }
                for (r, row) in sub.rows.iter().enumerate() {
                    if row.is_empty() {
                        return Err(LayoutError::Empty(format!(
                            "row {r} of subgroup {:?}",
                            sub.id
                        )));
                    }
                    for (k, key) in row.iter().enumerate() {
                        validate_key(key)?;
                        if index
                            .insert(key.id.clone(), ScanPath::new(g, s, r, k))
                            .is_some()
                        {
                            return Err(LayoutError::DuplicateId(key.id.clone()));
                        }
                    }
                }
            }
        }
        Ok(Layout {
            name,
            groups,
            index,
        })
    }

    pub fn lookup(&self, id: &str) -> Option<&KeyDef> {
        self.index.get(id).and_then(|p| self.key_at(*p))
    }

    pub fn scan_path(&self, id: &str) -> Result<ScanPath, LayoutError> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| LayoutError::UnknownKey(id.to_string()))
    }

    pub fn key_at(&self, path: ScanPath) -> Option<&KeyDef> {
        self.groups
            .get(path.group)?
            .subgroups
            .get(path.subgroup)?
            .rows
            .get(path.row)?
            .get(path.key)
    }

    /// Every key with its path, in scan order.
    pub fn keys(&self) -> impl Iterator<Item = (ScanPath, &KeyDef)> {
        self.groups.iter().enumerate().flat_map(|(g, group)| {
            group
                .subgroups
                .iter()
                .enumerate()
                .flat_map(move |(s, sub)| {
                    sub.rows.iter().enumerate().flat_map(move |(r, row)| {
                        row.iter()
                            .enumerate()
                            .map(move |(k, key)| (ScanPath::new(g, s, r, k), key))
                    })
                })
        })
    }

    pub fn key_count(&self) -> usize {
        self.index.len()
    }

    /// Number of items at a hierarchy depth (0 = groups .. 3 = keys),
    /// given the indices chosen at the shallower depths.
    pub fn sibling_count(&self, depth: usize, focus: &[usize; 4]) -> usize {
        let group = &self.groups[focus[0]];
        match depth {
            0 => self.groups.len(),
            1 => group.subgroups.len(),
            2 => group.subgroups[focus[1]].rows.len(),
            _ => group.subgroups[focus[1]].rows[focus[2]].len(),
        }
    }
}

fn validate_key(key: &KeyDef) -> Result<(), LayoutError> {
    if key.kind == KeyKind::Control {
        if !CONTROL_IDS.contains(&key.id.as_str()) {
            return Err(LayoutError::UnknownControl(key.id.clone()));
        }
    } else if key.output.is_empty() {
        return Err(LayoutError::EmptyOutput(key.id.clone()));
    }
    if let Some(help) = &key.help {
        logo::check_syntax(&help.example).map_err(|error| LayoutError::BadHelpExample {
            id: key.id.clone(),
            error,
        })?;
    }
    Ok(())
}

pub fn parse_layout(text: &str) -> Result<Layout, LayoutError> {
    let doc: LayoutDoc = serde_json::from_str(text).map_err(|e| LayoutError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    Layout::new(doc.name, doc.groups)
}

pub fn load_layout(path: &std::path::Path) -> Result<Layout, LayoutError> {
    parse_layout(&std::fs::read_to_string(path)?)
}

/// Canonical JSON form; `parse_layout(&render(l)) == l`.
pub fn render(layout: &Layout) -> String {
    let mut out = serde_json::to_string_pretty(layout).expect("layout serializes");
    out.push('\n');
    out
}

/// The built-in Logo layout: command vocabulary plus alphanumeric pages.
pub fn default_layout() -> Layout {
    static DEFAULT: OnceLock<Layout> = OnceLock::new();
    DEFAULT
        .get_or_init(|| parse_layout(DEFAULT_LAYOUT).expect("built-in layout is valid"))
        .clone()
}

/// Source text of the built-in layout document.
pub fn default_layout_document() -> &'static str {
    DEFAULT_LAYOUT
}
