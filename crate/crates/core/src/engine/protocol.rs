//! Wire messages. Each message is one JSON object per line; clients send
//! `{"type": ...}`, the engine answers `{"seq": N, "type": ...}`.

use serde::{Deserialize, Serialize};

use super::EngineConfig;
use crate::layout::Layout;
use crate::logo::Segment;
use crate::scanner::ScanLevel;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ClientEvent {
    SwitchPress,
    PointerHover {
        key_id: String,
    },
    PointerSelect {
        key_id: String,
    },
    ClockTick,
    ConfigUpdate {
        config: EngineConfig,
    },
    RunBuffer,
    ClearBuffer,
    LoadProgram {
        text: String,
    },
    /// Asks for a `layout` event describing the active layout.
    RequestLayout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerEvent {
    /// `level` is null and `path` empty when scanning stops.
    Focus {
        path: Vec<usize>,
        level: Option<ScanLevel>,
    },
    KeySelected {
        key_id: String,
        output: String,
    },
    BufferChanged {
        text: String,
    },
    Zoom {
        key_id: String,
    },
    Speak {
        text: String,
    },
    Help {
        key_id: String,
        summary: String,
        example_segments: Vec<Segment>,
    },
    Printed {
        line: String,
    },
    TurtleSegments {
        segments: Vec<Segment>,
    },
    TurtleReset,
    ConfigEcho {
        config: EngineConfig,
    },
    Error {
        code: String,
        message: String,
    },
    Layout {
        layout: Layout,
    },
}

impl ServerEvent {
    pub fn error(code: &str, message: impl Into<String>) -> ServerEvent {
        ServerEvent::Error {
            code: code.to_string(),
            message: message.into(),
        }
    }
}

/// A server event stamped with its session sequence number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub seq: u64,
    #[serde(flatten)]
    pub event: ServerEvent,
}

impl Envelope {
    /// One line of the wire protocol, without the trailing newline.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("server events serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn client_messages_parse() {
        let ev: ClientEvent = serde_json::from_str(r#"{"type":"switch_press"}"#).unwrap();
        assert_eq!(ev, ClientEvent::SwitchPress);
        let ev: ClientEvent =
            serde_json::from_str(r#"{"type":"pointer_select","key_id":"fd"}"#).unwrap();
        assert_eq!(
            ev,
            ClientEvent::PointerSelect {
                key_id: "fd".into()
            }
        );
        assert!(serde_json::from_str::<ClientEvent>(r#"{"type":"warp"}"#).is_err());
    }

    #[test]
    fn envelope_puts_seq_first() {
        let env = Envelope {
            seq: 3,
            event: ServerEvent::Focus {
                path: vec![0],
                level: Some(ScanLevel::Group),
            },
        };
        assert_eq!(
            env.to_line(),
            r#"{"seq":3,"type":"focus","path":[0],"level":"group"}"#
        );
        let back: Envelope = serde_json::from_str(&env.to_line()).unwrap();
        assert_eq!(back, env);
    }
}
