//! UI-facing service: one [`Session`] per TCP connection.
//!
//! A connection whose first bytes are `GET ` is upgraded to a WebSocket and
//! exchanges one protocol line per text message; anything else speaks the
//! raw line-delimited protocol. The server owns the scan clock and injects
//! `clock_tick` events every `period_ms` of the session's current config.

use std::io::{self, BufRead, BufReader, Write};
use std::net::{SocketAddr, TcpListener, TcpStream};
use std::path::PathBuf;
use std::thread;
use std::time::{Duration, Instant};

use tungstenite::{Message, WebSocket};

use crate::engine::{
    default_profile_path, load_profile, ClientEvent, EngineConfig, EngineError, Envelope,
    ServerEvent, Session,
};

pub const DEFAULT_PORT: u16 = 7313;

#[derive(Debug, Clone)]
pub struct ServeOptions {
    pub profile: PathBuf,
    /// Disables the scan clock; clients then send their own `clock_tick`s.
    pub clock: bool,
}

impl Default for ServeOptions {
    fn default() -> Self {
        ServeOptions {
            profile: default_profile_path(),
            clock: true,
        }
    }
}

pub fn serve(addr: SocketAddr, options: ServeOptions) -> io::Result<()> {
    let listener = TcpListener::bind(addr)?;
    serve_on(listener, options)
}

/// Accepts connections forever, one thread per session.
pub fn serve_on(listener: TcpListener, options: ServeOptions) -> io::Result<()> {
    for stream in listener.incoming() {
        let stream = match stream {
            Ok(s) => s,
            Err(e) => {
                eprintln!("accept failed: {e}");
                continue;
            }
        };
        let options = options.clone();
        thread::spawn(move || {
            if let Err(e) = handle_connection(stream, &options) {
                if !is_disconnect(&e) {
                    eprintln!("session ended: {e}");
                }
            }
        });
    }
    Ok(())
}

/// Builds the session for a new connection. A missing profile means
/// defaults; an unreadable one also means defaults, reported as an event.
fn open_session(options: &ServeOptions) -> (Session, Vec<ServerEvent>) {
    let mut notices = Vec::new();
    let config = match load_profile(&options.profile) {
        Ok(c) => c,
        Err(EngineError::Io(e)) if e.kind() == io::ErrorKind::NotFound => EngineConfig::default(),
        Err(e) => {
            notices.push(ServerEvent::error("profile_error", e.to_string()));
            EngineConfig::default()
        }
    };
    let session = match Session::new(config) {
        Ok(s) => s,
        Err(e) => {
            notices.push(ServerEvent::error("layout_error", e.to_string()));
            Session::new(EngineConfig::default()).expect("default config is valid")
        }
    };
    (session.with_profile(options.profile.clone()), notices)
}

pub fn handle_connection(stream: TcpStream, options: &ServeOptions) -> io::Result<()> {
    stream.set_nodelay(true)?;
    let (session, notices) = open_session(options);
    if starts_with_get(&stream)? {
        let ws = tungstenite::accept(stream).map_err(io::Error::other)?;
        run_loop(WsTransport { ws }, session, notices, options.clock)
    } else {
        let reader = BufReader::new(stream.try_clone()?);
        run_loop(
            LineTransport {
                reader,
                writer: stream,
                partial: Vec::new(),
            },
            session,
            notices,
            options.clock,
        )
    }
}

fn starts_with_get(stream: &TcpStream) -> io::Result<bool> {
    let mut buf = [0u8; 4];
    loop {
        let n = stream.peek(&mut buf)?;
        if n == 0 {
            return Ok(false);
        }
        if !b"GET ".starts_with(&buf[..n]) {
            return Ok(false);
        }
        if n == 4 {
            return Ok(true);
        }
        thread::sleep(Duration::from_millis(5));
    }
}

enum Incoming {
    Line(String),
    Timeout,
    Closed,
}

trait Transport {
    fn set_timeout(&mut self, timeout: Option<Duration>) -> io::Result<()>;
    fn receive(&mut self) -> io::Result<Incoming>;
    fn send(&mut self, lines: &[Envelope]) -> io::Result<()>;
}

fn is_timeout(e: &io::Error) -> bool {
    matches!(
        e.kind(),
        io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut
    )
}

fn is_disconnect(e: &io::Error) -> bool {
    matches!(
        e.kind(),
        io::ErrorKind::ConnectionReset
            | io::ErrorKind::BrokenPipe
            | io::ErrorKind::ConnectionAborted
    )
}

struct LineTransport {
    reader: BufReader<TcpStream>,
    writer: TcpStream,
    partial: Vec<u8>,
}

impl Transport for LineTransport {
    fn set_timeout(&mut self, timeout: Option<Duration>) -> io::Result<()> {
        self.writer.set_read_timeout(timeout)
    }

    fn receive(&mut self) -> io::Result<Incoming> {
        match self.reader.read_until(b'\n', &mut self.partial) {
            Ok(0) => Ok(Incoming::Closed),
            Ok(_) if !self.partial.ends_with(b"\n") => Ok(Incoming::Closed),
            Ok(_) => {
                let bytes = std::mem::take(&mut self.partial);
                Ok(Incoming::Line(String::from_utf8_lossy(&bytes).into_owned()))
            }
            Err(e) if is_timeout(&e) => Ok(Incoming::Timeout),
            Err(e) => Err(e),
        }
    }

    fn send(&mut self, lines: &[Envelope]) -> io::Result<()> {
        let mut out = String::new();
        for env in lines {
            out.push_str(&env.to_line());
            out.push('\n');
        }
        self.writer.write_all(out.as_bytes())?;
        self.writer.flush()
    }
}

struct WsTransport {
    ws: WebSocket<TcpStream>,
}

impl Transport for WsTransport {
    fn set_timeout(&mut self, timeout: Option<Duration>) -> io::Result<()> {
        self.ws.get_ref().set_read_timeout(timeout)
    }

    fn receive(&mut self) -> io::Result<Incoming> {
        loop {
            match self.ws.read() {
                Ok(Message::Text(text)) => return Ok(Incoming::Line(text)),
                Ok(Message::Binary(bytes)) => {
                    return Ok(Incoming::Line(String::from_utf8_lossy(&bytes).into_owned()))
                }
                Ok(Message::Close(_)) => return Ok(Incoming::Closed),
                Ok(_) => continue,
                Err(tungstenite::Error::Io(e)) if is_timeout(&e) => return Ok(Incoming::Timeout),
                Err(tungstenite::Error::ConnectionClosed | tungstenite::Error::AlreadyClosed) => {
                    return Ok(Incoming::Closed)
                }
                Err(e) => return Err(io::Error::other(e)),
            }
        }
    }

    fn send(&mut self, lines: &[Envelope]) -> io::Result<()> {
        for env in lines {
            self.ws
                .write(Message::Text(env.to_line()))
                .map_err(io::Error::other)?;
        }
        self.ws.flush().map_err(io::Error::other)
    }
}

fn run_loop(
    mut transport: impl Transport,
    mut session: Session,
    notices: Vec<ServerEvent>,
    clock: bool,
) -> io::Result<()> {
    let stamped = session.stamp_all(notices);
    if !stamped.is_empty() {
        transport.send(&stamped)?;
    }
    let mut next_tick = Instant::now() + period(&session);
    loop {
        if clock {
            let wait = next_tick
                .saturating_duration_since(Instant::now())
                .max(Duration::from_millis(1));
            transport.set_timeout(Some(wait))?;
        }
        match transport.receive()? {
            Incoming::Closed => return Ok(()),
            Incoming::Line(text) => {
                for line in text.lines().filter(|l| !l.trim().is_empty()) {
                    let before = session.state().config.scan.period_ms;
                    let out = session.handle_line(line);
                    transport.send(&out)?;
                    if session.state().config.scan.period_ms != before {
                        next_tick = Instant::now() + period(&session);
                    }
                }
            }
            Incoming::Timeout => {}
        }
        if clock && Instant::now() >= next_tick {
            let out = session.handle(ClientEvent::ClockTick);
            if !out.is_empty() {
                transport.send(&out)?;
            }
            next_tick += period(&session);
            let now = Instant::now();
            if next_tick < now {
                next_tick = now + period(&session);
            }
        }
    }
}

fn period(session: &Session) -> Duration {
    Duration::from_millis(session.state().config.scan.period_ms.max(1))
}
