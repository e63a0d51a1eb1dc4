//! Session engine: one keyboard session per connection.
//!
//! A [`Session`] owns the layout, the scanner and a Logo environment. Every
//! input, including clock ticks, arrives as a [`ClientEvent`] and is handled
//! to completion before the next one, so a replay of the same client events
//! produces the same numbered [`ServerEvent`]s.

mod profile;
pub mod protocol;

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::layout::{self, Layout, LayoutError};
use crate::logo::{Environment, Segment};
use crate::scanner::{ScanConfig, ScanError, ScanEventKind, ScanMode, Scanner};

pub use profile::{default_profile_path, load_profile, save_profile, PROFILE_ENV};
pub use protocol::{ClientEvent, Envelope, ServerEvent};

/// `layout_path` value selecting the built-in layout.
pub const BUILTIN_LAYOUT: &str = "builtin";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    pub scan: ScanConfig,
    /// 0 is opaque, 1 fully transparent.
    pub transparency: f64,
    pub zoom_enabled: bool,
    pub voice_enabled: bool,
    pub keyboard_scale: f64,
    pub layout_path: String,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            scan: ScanConfig::default(),
            transparency: 0.0,
            zoom_enabled: true,
            voice_enabled: false,
            keyboard_scale: 1.0,
            layout_path: BUILTIN_LAYOUT.to_string(),
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        self.scan
            .validate()
            .map_err(|e| EngineError::InvalidConfig(e.to_string()))?;
        if !(0.0..=1.0).contains(&self.transparency) {
            return Err(EngineError::InvalidConfig(format!(
                "transparency {} is outside [0, 1]",
                self.transparency
            )));
        }
        if !(0.5..=3.0).contains(&self.keyboard_scale) {
            return Err(EngineError::InvalidConfig(format!(
                "keyboard_scale {} is outside [0.5, 3.0]",
                self.keyboard_scale
            )));
        }
        Ok(())
    }

    pub fn load_layout(&self) -> Result<Layout, LayoutError> {
        if self.layout_path == BUILTIN_LAYOUT {
            Ok(layout::default_layout())
        } else {
            layout::load_layout(Path::new(&self.layout_path))
        }
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error("malformed profile: {0}")]
    MalformedProfile(serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
pub struct SessionState {
    /// Logo source typed so far: the command window contents.
    pub buffer: String,
    pub env: Environment,
    pub config: EngineConfig,
}

pub struct Session {
    layout: Arc<Layout>,
    scanner: Scanner,
    state: SessionState,
    /// Outputs of the selections making up `buffer`, for backspace.
    selections: Vec<String>,
    help_cache: HashMap<String, Vec<Segment>>,
    next_seq: u64,
    profile_path: Option<PathBuf>,
}

impl Session {
    pub fn new(config: EngineConfig) -> Result<Session, EngineError> {
        config.validate()?;
        let layout = Arc::new(config.load_layout()?);
        Session::with_layout(layout, config)
    }

    pub fn with_layout(layout: Arc<Layout>, config: EngineConfig) -> Result<Session, EngineError> {
        config.validate()?;
        let scanner = Scanner::new(layout.clone(), config.scan.clone())?;
        Ok(Session {
            layout,
            scanner,
            state: SessionState {
                buffer: String::new(),
                env: Environment::new(),
                config,
            },
            selections: Vec::new(),
            help_cache: HashMap::new(),
            next_seq: 1,
            profile_path: None,
        })
    }

    /// Successful config updates are saved to `path`.
    pub fn with_profile(mut self, path: PathBuf) -> Session {
        self.profile_path = Some(path);
        self
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    pub fn scanner(&self) -> &Scanner {
        &self.scanner
    }

    pub fn layout(&self) -> &Arc<Layout> {
        &self.layout
    }

    /// Handles one wire line; malformed input becomes an error event.
    pub fn handle_line(&mut self, line: &str) -> Vec<Envelope> {
        match serde_json::from_str::<ClientEvent>(line) {
            Ok(event) => self.handle(event),
            Err(e) => self.stamp_all(vec![ServerEvent::error("bad_message", e.to_string())]),
        }
    }

    pub fn handle(&mut self, event: ClientEvent) -> Vec<Envelope> {
        let mut out = Vec::new();
        match event {
            ClientEvent::SwitchPress => {
                let events = self.scanner.press();
                self.apply_scan_events(events.into_iter().map(|e| e.kind), &mut out);
            }
            ClientEvent::ClockTick => {
                let events = self.scanner.tick();
                self.apply_scan_events(events.into_iter().map(|e| e.kind), &mut out);
            }
            ClientEvent::PointerSelect { key_id } => match self.scanner.pointer_select(&key_id) {
                Ok(events) => self.apply_scan_events(events.into_iter().map(|e| e.kind), &mut out),
                Err(e) => out.push(ServerEvent::error("unknown_key", e.to_string())),
            },
            ClientEvent::PointerHover { key_id } => self.hover(&key_id, &mut out),
            ClientEvent::RunBuffer => self.run_buffer(&mut out),
            ClientEvent::ClearBuffer => {
                self.clear_buffer();
                out.push(self.buffer_event());
            }
            ClientEvent::LoadProgram { text } => {
                self.clear_buffer();
                if !text.is_empty() {
                    self.push_selection(text);
                }
                out.push(self.buffer_event());
            }
            ClientEvent::ConfigUpdate { config } => self.update_config(config, &mut out),
            ClientEvent::RequestLayout => out.push(ServerEvent::Layout {
                layout: (*self.layout).clone(),
            }),
        }
        self.stamp_all(out)
    }

    /// Numbers events produced outside `handle`, such as startup notices.
    pub fn stamp_all(&mut self, events: Vec<ServerEvent>) -> Vec<Envelope> {
        events
            .into_iter()
            .map(|event| {
                let seq = self.next_seq;
                self.next_seq += 1;
                Envelope { seq, event }
            })
            .collect()
    }

    fn apply_scan_events(
        &mut self,
        events: impl Iterator<Item = ScanEventKind>,
        out: &mut Vec<ServerEvent>,
    ) {
        for kind in events {
            match kind {
                ScanEventKind::FocusChanged { path, level } => out.push(ServerEvent::Focus {
                    path,
                    level: Some(level),
                }),
                // the focus event that follows carries the new position
                ScanEventKind::Descended { .. } => {}
                ScanEventKind::Ascended { level } => out.push(ServerEvent::Focus {
                    path: self.scanner.state().focus_path(),
                    level: Some(level),
                }),
                ScanEventKind::Deactivated => {
                    debug_assert_eq!(self.scanner.state().mode, ScanMode::Inactive);
                    out.push(ServerEvent::Focus {
                        path: Vec::new(),
                        level: None,
                    });
                }
                ScanEventKind::Selected { key_id } => self.select(&key_id, out),
            }
        }
    }

    fn select(&mut self, key_id: &str, out: &mut Vec<ServerEvent>) {
        let Some(key) = self.layout.lookup(key_id) else {
            out.push(ServerEvent::error(
                "unknown_key",
                format!("unknown key id {key_id:?}"),
            ));
            return;
        };
        let output = key.output.clone();
        out.push(ServerEvent::KeySelected {
            key_id: key_id.to_string(),
            output: output.clone(),
        });
        match (key.kind, key_id) {
            (layout::KeyKind::Control, "enter") => self.push_selection("\n".into()),
            (layout::KeyKind::Control, "space") => self.push_selection(" ".into()),
            (layout::KeyKind::Control, "backspace") => {
                if let Some(last) = self.selections.pop() {
                    let len = self.state.buffer.len() - last.len();
                    self.state.buffer.truncate(len);
                }
            }
            (layout::KeyKind::Control, _) => self.clear_buffer(),
            _ => self.push_selection(output),
        }
        out.push(self.buffer_event());
    }

    fn push_selection(&mut self, text: String) {
        self.state.buffer.push_str(&text);
        self.selections.push(text);
    }

    fn clear_buffer(&mut self) {
        self.state.buffer.clear();
        self.selections.clear();
    }

    fn buffer_event(&self) -> ServerEvent {
        ServerEvent::BufferChanged {
            text: self.state.buffer.clone(),
        }
    }

    fn hover(&mut self, key_id: &str, out: &mut Vec<ServerEvent>) {
        let Some(key) = self.layout.lookup(key_id) else {
            out.push(ServerEvent::error(
                "unknown_key",
                format!("unknown key id {key_id:?}"),
            ));
            return;
        };
        if self.state.config.zoom_enabled {
            out.push(ServerEvent::Zoom {
                key_id: key_id.to_string(),
            });
        }
        if self.state.config.voice_enabled {
            out.push(ServerEvent::Speak {
                text: key.label.clone(),
            });
        }
        if let Some(help) = &key.help {
            let segments = self
                .help_cache
                .entry(key_id.to_string())
                .or_insert_with(|| help_segments(&help.example))
                .clone();
            out.push(ServerEvent::Help {
                key_id: key_id.to_string(),
                summary: help.summary.clone(),
                example_segments: segments,
            });
        }
    }

    fn run_buffer(&mut self, out: &mut Vec<ServerEvent>) {
        let source = std::mem::take(&mut self.state.buffer);
        self.selections.clear();
        let (report, error) = match self.state.env.run(&source) {
            Ok(report) => (report, None),
            Err(failure) => (failure.report, Some(failure.error)),
        };
        if report.cleared {
            out.push(ServerEvent::TurtleReset);
        }
        out.extend(
            report
                .printed
                .into_iter()
                .map(|line| ServerEvent::Printed { line }),
        );
        if !report.segments.is_empty() {
            out.push(ServerEvent::TurtleSegments {
                segments: report.segments,
            });
        }
        if let Some(e) = error {
            out.push(ServerEvent::error(e.code(), e.to_string()));
        }
        out.push(self.buffer_event());
    }

    fn update_config(&mut self, config: EngineConfig, out: &mut Vec<ServerEvent>) {
        if let Err(e) = config.validate() {
            out.push(ServerEvent::error("invalid_config", e.to_string()));
            return;
        }
        if config.layout_path != self.state.config.layout_path {
            let layout = match config.load_layout() {
                Ok(layout) => Arc::new(layout),
                Err(e) => {
                    out.push(ServerEvent::error("layout_error", e.to_string()));
                    return;
                }
            };
            self.scanner =
                Scanner::new(layout.clone(), config.scan.clone()).expect("scan config validated");
            self.layout = layout;
            self.help_cache.clear();
        } else {
            self.scanner
                .set_config(config.scan.clone())
                .expect("scan config validated");
        }
        self.state.config = config;
        if let Some(path) = &self.profile_path {
            if let Err(e) = save_profile(&self.state.config, path) {
                out.push(ServerEvent::error("profile_error", e.to_string()));
            }
        }
        out.push(ServerEvent::ConfigEcho {
            config: self.state.config.clone(),
        });
    }
}

/// Segments drawn by a help example on a fresh turtle. Examples that fail
/// part-way still show what they drew.
fn help_segments(example: &str) -> Vec<Segment> {
    let mut scratch = Environment::new();
    match scratch.run(example) {
        Ok(report) => report.segments,
        Err(failure) => failure.report.segments,
    }
}
