//! Strategies and property checks shared by the proptest suite and the
//! acceptance harness.
#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

use scanboard::layout::{Group, KeyDef, KeyKind, Layout, Subgroup};
use scanboard::logo::{render_tokens, tokenize, Environment, Operator, Token};
use scanboard::scanner::{
    PostSelect, Rgb, ScanConfig, ScanEvent, ScanEventKind, ScanLevel, ScanMode, Scanner,
};

pub const SQUARE: &str = "to square\nmake \"n 4\nrepeat (:n) [fd 30 rt 90]\nend\n";

/// Layout with the given shape; key ids are `k<g>_<s>_<r>_<k>`.
pub fn shaped_layout(shape: &[Vec<Vec<usize>>]) -> Layout {
    let groups = shape
        .iter()
        .enumerate()
        .map(|(g, subgroups)| Group {
            id: format!("g{g}"),
            label: format!("G{g}"),
            subgroups: subgroups
                .iter()
                .enumerate()
                .map(|(s, rows)| Subgroup {
                    id: format!("s{g}_{s}"),
                    label: format!("S{s}"),
                    rows: rows
                        .iter()
                        .enumerate()
                        .map(|(r, &n)| {
                            (0..n)
                                .map(|k| KeyDef {
                                    id: format!("k{g}_{s}_{r}_{k}"),
                                    label: format!("{k}"),
                                    output: "x".into(),
                                    kind: KeyKind::Letter,
                                    help: None,
                                })
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        })
        .collect();
    Layout::new("random".into(), groups).expect("generated layout is valid")
}

/// Random layout shapes up to 3 groups x 3 subgroups x 3 rows x 5 keys.
pub fn arb_shape() -> impl Strategy<Value = Vec<Vec<Vec<usize>>>> {
    prop::collection::vec(
        prop::collection::vec(prop::collection::vec(1usize..=5, 1..=3), 1..=3),
        1..=3,
    )
}

pub fn arb_scan_config() -> impl Strategy<Value = ScanConfig> {
    (
        50u64..2000,
        1u32..=4,
        any::<bool>(),
        any::<[u8; 3]>(),
        any::<bool>(),
    )
        .prop_map(
            |(period_ms, repeat_cycles, sound_on, color, stay)| ScanConfig {
                period_ms,
                repeat_cycles,
                sound_on,
                highlight_color: Rgb(color),
                post_select: if stay {
                    PostSelect::StayInRow
                } else {
                    PostSelect::ResetToTop
                },
            },
        )
}

#[derive(Debug, Clone)]
pub enum ScanOp {
    Tick,
    Press,
    /// Index into the layout's keys, wrapped; `None` is an unknown id.
    Pointer(Option<usize>),
}

pub fn arb_ops() -> impl Strategy<Value = Vec<ScanOp>> {
    prop::collection::vec(
        prop_oneof![
            6 => Just(ScanOp::Tick),
            3 => Just(ScanOp::Press),
            1 => prop::option::weighted(0.9, 0usize..1000).prop_map(ScanOp::Pointer),
        ],
        0..200,
    )
}

fn focus_valid(layout: &Layout, path: &[usize]) -> bool {
    if path.is_empty() || path.len() > 4 {
        return false;
    }
    let mut focus = [0usize; 4];
    for (depth, &i) in path.iter().enumerate() {
        if i >= layout.sibling_count(depth, &focus) {
            return false;
        }
        focus[depth] = i;
    }
    true
}

fn run_ops(layout: &Arc<Layout>, config: &ScanConfig, ops: &[ScanOp]) -> (Vec<ScanEvent>, Scanner) {
    let ids: Vec<String> = layout.keys().map(|(_, k)| k.id.clone()).collect();
    let mut scanner = Scanner::new(layout.clone(), config.clone()).unwrap();
    let mut log = Vec::new();
    for op in ops {
        match op {
            ScanOp::Tick => log.extend(scanner.tick()),
            ScanOp::Press => log.extend(scanner.press()),
            ScanOp::Pointer(Some(i)) => {
                log.extend(scanner.pointer_select(&ids[i % ids.len()]).unwrap())
            }
            ScanOp::Pointer(None) => assert!(scanner.pointer_select("no-such-key").is_err()),
        }
    }
    (log, scanner)
}

/// Two replays agree, every focus is a valid path, and each key costs
/// exactly 4 presses from an active top level.
pub fn check_scanner(
    shape: &[Vec<Vec<usize>>],
    config: &ScanConfig,
    ops: &[ScanOp],
) -> Result<(), TestCaseError> {
    let layout = Arc::new(shaped_layout(shape));
    let (log_a, a) = run_ops(&layout, config, ops);
    let (log_b, b) = run_ops(&layout, config, ops);
    prop_assert_eq!(&log_a, &log_b);
    prop_assert_eq!(a.state(), b.state());
    for ev in &log_a {
        if let ScanEventKind::FocusChanged { path, level } = &ev.kind {
            prop_assert!(focus_valid(&layout, path), "invalid focus {:?}", path);
            prop_assert_eq!(path.len(), level.depth() + 1);
        }
    }
    if a.state().mode == ScanMode::Scanning {
        prop_assert!(focus_valid(&layout, &a.state().focus_path()));
    }
    check_press_count(&layout, config)
}

fn check_press_count(layout: &Arc<Layout>, config: &ScanConfig) -> Result<(), TestCaseError> {
    for (path, key) in layout.keys() {
        let mut s = Scanner::new(layout.clone(), config.clone()).unwrap();
        s.press();
        prop_assert_eq!(s.state().level, ScanLevel::Group);
        let mut presses = 0;
        let mut selected = None;
        for count in path.as_array() {
            for _ in 0..count {
                s.tick();
            }
            presses += 1;
            for ev in s.press() {
                if let ScanEventKind::Selected { key_id } = ev.kind {
                    selected = Some(key_id);
                }
            }
        }
        prop_assert_eq!(presses, 4);
        prop_assert_eq!(selected.as_deref(), Some(key.id.as_str()));
    }
    Ok(())
}

fn run(source: &str) -> Environment {
    let mut env = Environment::new();
    env.run(source)
        .unwrap_or_else(|f| panic!("{source:?}: {f}"));
    env
}

pub fn check_fd_bk(heading: f64, distance: f64) -> Result<(), TestCaseError> {
    let env = run(&format!("rt {heading} fd {distance} bk {distance}"));
    prop_assert!(env.turtle.x.abs() <= 1e-9, "x = {}", env.turtle.x);
    prop_assert!(env.turtle.y.abs() <= 1e-9, "y = {}", env.turtle.y);
    Ok(())
}

/// `turns` are (right?, degrees); a closing turn makes the sum 360 * laps.
pub fn check_turn_sum(turns: &[(bool, f64)], laps: i32) -> Result<(), TestCaseError> {
    let mut source = String::new();
    let mut sum = 0.0;
    for &(right, deg) in turns {
        source.push_str(&format!("{} {deg}\n", if right { "rt" } else { "lt" }));
        sum += if right { deg } else { -deg };
    }
    source.push_str(&format!("rt {}\n", 360.0 * f64::from(laps) - sum));
    let h = run(&source).turtle.heading.rem_euclid(360.0);
    prop_assert!(h.min(360.0 - h) <= 1e-9, "heading {}", h);
    Ok(())
}

#[derive(Debug, Clone)]
pub enum Motion {
    Fd(u16),
    Bk(u16),
    Rt(u16),
    Lt(u16),
}

impl Motion {
    fn source(&self) -> String {
        match self {
            Motion::Fd(d) => format!("fd {d}"),
            Motion::Bk(d) => format!("bk {d}"),
            Motion::Rt(d) => format!("rt {d}"),
            Motion::Lt(d) => format!("lt {d}"),
        }
    }
}

pub fn arb_block() -> impl Strategy<Value = Vec<Motion>> {
    prop::collection::vec(
        prop_oneof![
            (0u16..200).prop_map(Motion::Fd),
            (0u16..200).prop_map(Motion::Bk),
            (0u16..360).prop_map(Motion::Rt),
            (0u16..360).prop_map(Motion::Lt),
        ],
        0..6,
    )
}

pub fn check_repeat(n: u32, block: &[Motion]) -> Result<(), TestCaseError> {
    let body: Vec<String> = block.iter().map(Motion::source).collect();
    let body = body.join(" ");
    let once = run(&body).turtle.segments.len();
    let repeated = run(&format!("repeat {n} [{body}]")).turtle.segments.len();
    prop_assert_eq!(repeated, n as usize * once);
    Ok(())
}

fn arb_name() -> impl Strategy<Value = String> {
    "[a-z_][a-z_]{0,7}"
}

pub fn arb_token() -> impl Strategy<Value = Token> {
    prop_oneof![
        arb_name().prop_map(Token::Word),
        arb_name().prop_map(Token::QuotedWord),
        arb_name().prop_map(Token::ThingRef),
        (0u32..100_000).prop_map(|n| Token::Number(f64::from(n))),
        (0u32..100_000, 1u32..1000).prop_map(|(a, b)| Token::Number(f64::from(a) / f64::from(b))),
        Just(Token::OpenParen),
        Just(Token::CloseParen),
        Just(Token::OpenBracket),
        Just(Token::CloseBracket),
        Just(Token::Newline),
        prop::sample::select(vec!['+', '-', '*', '/', '<', '>', '='])
            .prop_map(|c| Token::Operator(Operator::from_char(c).unwrap())),
    ]
}

pub fn arb_tokens() -> impl Strategy<Value = Vec<Token>> {
    prop::collection::vec(arb_token(), 0..40)
}

pub fn check_token_round_trip(tokens: &[Token]) -> Result<(), TestCaseError> {
    let text = render_tokens(tokens);
    let back = tokenize(&text).map_err(|e| TestCaseError::fail(format!("{text:?}: {e}")))?;
    prop_assert_eq!(back, tokens.to_vec());
    Ok(())
}
