//! Hierarchical single-switch scanning.
//!
//! A clock tick moves the focus to the next sibling at the current level.
//! A switch press descends one level (group, subgroup, row, key) or, at key
//! level, selects the focused key. Time is never read here: callers inject
//! ticks, so the same input sequence always yields the same events.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout::Layout;

/// Lowest accepted scan period.
pub const MIN_PERIOD_MS: u64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanLevel {
    Group,
    Subgroup,
    Row,
    Key,
}

impl ScanLevel {
    pub fn depth(self) -> usize {
        self as usize
    }

    fn from_depth(depth: usize) -> ScanLevel {
        match depth {
            0 => ScanLevel::Group,
            1 => ScanLevel::Subgroup,
            2 => ScanLevel::Row,
            _ => ScanLevel::Key,
        }
    }

    fn child(self) -> Option<ScanLevel> {
        (self != ScanLevel::Key).then(|| ScanLevel::from_depth(self.depth() + 1))
    }

    fn parent(self) -> Option<ScanLevel> {
        (self != ScanLevel::Group).then(|| ScanLevel::from_depth(self.depth() - 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanMode {
    Inactive,
    Scanning,
}

/// What happens after a key is selected by scanning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PostSelect {
    #[default]
    ResetToTop,
    StayInRow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rgb(pub [u8; 3]);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub period_ms: u64,
    pub repeat_cycles: u32,
    pub sound_on: bool,
    pub highlight_color: Rgb,
    pub post_select: PostSelect,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            period_ms: 1000,
            repeat_cycles: 3,
            sound_on: true,
            highlight_color: Rgb([255, 200, 0]),
            post_select: PostSelect::ResetToTop,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("scan period {0} ms is below the {MIN_PERIOD_MS} ms minimum")]
    PeriodTooShort(u64),
    #[error("repeat_cycles must be at least 1")]
    NoRepeatCycles,
    #[error("unknown key id {0:?}")]
    UnknownKey(String),
}

impl ScanConfig {
    pub fn validate(&self) -> Result<(), ScanError> {
        if self.period_ms < MIN_PERIOD_MS {
            return Err(ScanError::PeriodTooShort(self.period_ms));
        }
        if self.repeat_cycles == 0 {
            return Err(ScanError::NoRepeatCycles);
        }
        Ok(())
    }
}

/// Observable automaton state. `focus` entries deeper than `level` are
/// zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScannerState {
    pub mode: ScanMode,
    pub level: ScanLevel,
    pub focus: [usize; 4],
    pub wraps_at_level: u32,
}

impl ScannerState {
    fn top() -> Self {
        ScannerState {
            mode: ScanMode::Inactive,
            level: ScanLevel::Group,
            focus: [0; 4],
            wraps_at_level: 0,
        }
    }

    /// Focus indices down to the current level; empty when inactive.
    pub fn focus_path(&self) -> Vec<usize> {
        match self.mode {
            ScanMode::Inactive => Vec::new(),
            ScanMode::Scanning => self.focus[..=self.level.depth()].to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScanEventKind {
    FocusChanged {
        path: Vec<usize>,
        level: ScanLevel,
    },
    /// `path` is the entered item; `level` the level now being scanned.
    Descended {
        path: Vec<usize>,
        level: ScanLevel,
    },
    Selected {
        key_id: String,
    },
    Ascended {
        level: ScanLevel,
    },
    Deactivated,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanEvent {
    /// Clock ticks received before this event was produced.
    pub tick_index: u64,
    #[serde(flatten)]
    pub kind: ScanEventKind,
}

#[derive(Debug, Clone)]
pub struct Scanner {
    layout: Arc<Layout>,
    config: ScanConfig,
    state: ScannerState,
    ticks: u64,
}

impl Scanner {
    pub fn new(layout: Arc<Layout>, config: ScanConfig) -> Result<Scanner, ScanError> {
        config.validate()?;
        Ok(Scanner {
            layout,
            config,
            state: ScannerState::top(),
            ticks: 0,
        })
    }

    pub fn state(&self) -> &ScannerState {
        &self.state
    }

    pub fn config(&self) -> &ScanConfig {
        &self.config
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    /// Swaps the configuration; the wrap counter restarts so it stays below
    /// the new cycle limit.
    pub fn set_config(&mut self, config: ScanConfig) -> Result<(), ScanError> {
        config.validate()?;
        self.config = config;
        self.state.wraps_at_level = 0;
        Ok(())
    }

    fn event(&self, kind: ScanEventKind) -> ScanEvent {
        ScanEvent {
            tick_index: self.ticks,
            kind,
        }
    }

    fn focus_event(&self) -> ScanEvent {
        self.event(ScanEventKind::FocusChanged {
            path: self.state.focus_path(),
            level: self.state.level,
        })
    }

    fn reset_to_top(&mut self) {
        self.state = ScannerState {
            mode: ScanMode::Scanning,
            ..ScannerState::top()
        };
    }

    pub fn press(&mut self) -> Vec<ScanEvent> {
        if self.state.mode == ScanMode::Inactive {
            self.reset_to_top();
            return vec![self.focus_event()];
        }
        match self.state.level.child() {
            Some(child) => {
                let entered = self.state.focus_path();
                self.state.level = child;
                self.state.focus[child.depth()] = 0;
                self.state.wraps_at_level = 0;
                vec![
                    self.event(ScanEventKind::Descended {
                        path: entered,
                        level: child,
                    }),
                    self.focus_event(),
                ]
            }
            None => {
                let [g, s, r, k] = self.state.focus;
                let key_id = self.layout.groups[g].subgroups[s].rows[r][k].id.clone();
                let mut events = vec![self.event(ScanEventKind::Selected { key_id })];
                if self.config.post_select == PostSelect::ResetToTop {
                    self.reset_to_top();
                    events.push(self.focus_event());
                }
                events
            }
        }
    }

    pub fn tick(&mut self) -> Vec<ScanEvent> {
        self.ticks += 1;
        if self.state.mode == ScanMode::Inactive {
            return Vec::new();
        }
        let depth = self.state.level.depth();
        let siblings = self.layout.sibling_count(depth, &self.state.focus);
        let next = (self.state.focus[depth] + 1) % siblings;
        self.state.focus[depth] = next;
        if next == 0 {
            self.state.wraps_at_level += 1;
        }
        if self.state.wraps_at_level < self.config.repeat_cycles {
            return vec![self.focus_event()];
        }
        self.state.wraps_at_level = 0;
        match self.state.level.parent() {
            Some(parent) => {
                self.state.focus[depth] = 0;
                self.state.level = parent;
                vec![self.event(ScanEventKind::Ascended { level: parent })]
            }
            None => {
                self.state = ScannerState::top();
                vec![self.event(ScanEventKind::Deactivated)]
            }
        }
    }

    /// Direct selection with a pointer; scan state is untouched.
    pub fn pointer_select(&mut self, key_id: &str) -> Result<Vec<ScanEvent>, ScanError> {
        if self.layout.lookup(key_id).is_none() {
            return Err(ScanError::UnknownKey(key_id.to_string()));
        }
        Ok(vec![self.event(ScanEventKind::Selected {
            key_id: key_id.to_string(),
        })])
    }
}
