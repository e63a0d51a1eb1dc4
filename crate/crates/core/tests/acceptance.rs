//! Acceptance suite: one PASS/FAIL line per primary criterion.

mod common;

use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use common::*;
use scanboard::cost::{self, CostReport, Method, SelectionSequence};
use scanboard::engine::{EngineConfig, Session};
use scanboard::layout::default_layout;
use scanboard::logo::Environment;
use scanboard::scanner::{ScanConfig, ScanEventKind, Scanner};

type Outcome = Result<(), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn simulate(method: &str, period_ms: Option<u64>) -> Result<CostReport, String> {
    let program = data("square.logo");
    let mut args = vec![
        "simulate".to_string(),
        "--program".into(),
        program.display().to_string(),
        "--method".into(),
        method.into(),
        "--json".into(),
    ];
    if let Some(p) = period_ms {
        args.extend(["--period-ms".to_string(), p.to_string()]);
    }
    let out = Command::new(env!("CARGO_BIN_EXE_scanboard"))
        .args(&args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn square_fidelity() -> Outcome {
    let start = Instant::now();
    let mut env = Environment::new();
    env.run(SQUARE).map_err(|e| e.to_string())?;
    let report = env.run("square").map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let t = &env.turtle;
    ensure(report.segments.len() == 4, || {
        format!("{} segments", report.segments.len())
    })?;
    for s in &report.segments {
        ensure((s.length() - 30.0).abs() <= 1e-9, || {
            format!("segment length {}", s.length())
        })?;
    }
    ensure(t.x.abs() <= 1e-9 && t.y.abs() <= 1e-9, || {
        format!("ended at ({}, {})", t.x, t.y)
    })?;
    let h = t.heading.rem_euclid(360.0);
    ensure(h.min(360.0 - h) <= 1e-9, || {
        format!("heading {}", t.heading)
    })?;
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })
}

fn physical_count() -> Outcome {
    let r = simulate("physical", None)?;
    ensure(r.method == Method::Physical && r.presses == 56, || {
        format!("{r:?}")
    })
}

fn scanning_ratio() -> Outcome {
    let layout = default_layout();
    let config = ScanConfig::default();
    let ids: Vec<String> = layout.keys().map(|(_, k)| k.id.clone()).collect();
    let mut runner = TestRunner::new(Config {
        cases: 500,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(
            &prop::collection::vec(prop::sample::select(ids.clone()), 0..60),
            |seq| {
                let seq = SelectionSequence(seq);
                let scan = cost::scanning_cost(&seq, &layout, &config).unwrap();
                prop_assert_eq!(scan.presses, 4 * cost::direct_cost(&seq).presses);
                Ok(())
            },
        )
        .map_err(|e| e.to_string())?;
    let seq27 = SelectionSequence(ids.iter().cycle().take(27).cloned().collect());
    let scan = cost::scanning_cost(&seq27, &layout, &config).map_err(|e| e.to_string())?;
    ensure(scan.presses == 108, || {
        format!("27 selections cost {}", scan.presses)
    })?;
    let cli = simulate("scanning", None)?;
    let direct = simulate("direct", None)?;
    ensure(cli.presses == 4 * direct.presses, || {
        format!("{cli:?} vs {direct:?}")
    })
}

fn direct_count() -> Outcome {
    let r = simulate("direct", None)?;
    ensure(r.presses == 28, || {
        format!("expected 28, got {}", r.presses)
    })?;
    ensure(r.presses.abs_diff(27) <= 2, || {
        format!("{} is not within 2 of 27", r.presses)
    })
}

fn scanner_determinism() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(
            &(arb_shape(), arb_scan_config(), arb_ops()),
            |(shape, config, ops)| check_scanner(&shape, &config, &ops),
        )
        .map_err(|e| e.to_string())
}

fn scanner_reachability() -> Outcome {
    let layout = Arc::new(default_layout());
    for (path, key) in layout.keys() {
        let mut s =
            Scanner::new(layout.clone(), ScanConfig::default()).map_err(|e| e.to_string())?;
        let mut events = Vec::new();
        for count in path.as_array() {
            events.extend(s.press());
            for _ in 0..count {
                events.extend(s.tick());
            }
        }
        events.extend(s.press());
        let selected: Vec<_> = events
            .iter()
            .filter_map(|e| match &e.kind {
                ScanEventKind::Selected { key_id } => Some(key_id.as_str()),
                _ => None,
            })
            .collect();
        ensure(selected == [key.id.as_str()], || {
            format!("{}: selected {selected:?}", key.id)
        })?;
    }
    Ok(())
}

fn interpreter_properties() -> Outcome {
    let mut runner = TestRunner::new(Config {
        cases: 200,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(-720.0f64..720.0, 0.0f64..1000.0), |(h, d)| {
            check_fd_bk(h, d)
        })
        .map_err(|e| format!("fd/bk: {e}"))?;
    runner
        .run(
            &(
                prop::collection::vec((any::<bool>(), 0.0f64..720.0), 0..12),
                -3i32..3,
            ),
            |(turns, laps)| check_turn_sum(&turns, laps),
        )
        .map_err(|e| format!("rt sum: {e}"))?;
    for n in [0, 1, 7, 100] {
        runner
            .run(&arb_block(), |block| check_repeat(n, &block))
            .map_err(|e| format!("repeat {n}: {e}"))?;
    }
    let mut tokens = TestRunner::new(Config {
        cases: 500,
        failure_persistence: None,
        ..Config::default()
    });
    tokens
        .run(&arb_tokens(), |t| check_token_round_trip(&t))
        .map_err(|e| format!("tokenizer: {e}"))
}

fn engine_replay() -> Outcome {
    let input = fs::read_to_string(data("session_200.jsonl")).map_err(|e| e.to_string())?;
    ensure(input.lines().count() == 200, || {
        "fixture is not 200 events".into()
    })?;
    let replay = || {
        let mut session = Session::new(EngineConfig::default()).unwrap();
        let mut log = String::new();
        for line in input.lines() {
            for env in session.handle_line(line) {
                log.push_str(&env.to_line());
                log.push('\n');
            }
        }
        log
    };
    let (a, b) = (replay(), replay());
    ensure(a == b, || "replays differ".into())?;
    let recorded =
        fs::read_to_string(data("session_200.expected.jsonl")).map_err(|e| e.to_string())?;
    ensure(a == recorded, || {
        "replay differs from the recorded log".into()
    })
}

/// Recorded for the square program at 600 ms on the default layout.
const SQUARE_EST_TIME_MS_AT_600: u64 = 81_600;

fn time_column() -> Outcome {
    for period in [50, 600, 1000, 2500] {
        let r = simulate("scanning", Some(period))?;
        ensure(r.est_time_ms == r.scan_ticks * period, || {
            format!("{r:?} at {period} ms")
        })?;
    }
    let r = simulate("scanning", Some(600))?;
    ensure(r.est_time_ms == SQUARE_EST_TIME_MS_AT_600, || {
        format!("{r:?}")
    })
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("square program fidelity", square_fidelity),
        ("physical count is 56", physical_count),
        ("scanning presses are 4x direct, 27 -> 108", scanning_ratio),
        ("direct count 28, within 2 of 27", direct_count),
        (
            "scanner determinism over 1000 sequences",
            scanner_determinism,
        ),
        ("scanner reachability of every key", scanner_reachability),
        ("interpreter properties", interpreter_properties),
        ("engine replay of 200 events", engine_replay),
        ("estimated time is ticks x period", time_column),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
