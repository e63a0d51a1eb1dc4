mod common;

use common::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn scanner_is_deterministic(shape in arb_shape(), config in arb_scan_config(), ops in arb_ops()) {
        check_scanner(&shape, &config, &ops)?;
    }

    #[test]
    fn fd_then_bk_returns_home(heading in -720.0f64..720.0, distance in 0.0f64..1000.0) {
        check_fd_bk(heading, distance)?;
    }

    #[test]
    fn full_turns_restore_heading(
        turns in prop::collection::vec((any::<bool>(), 0.0f64..720.0), 0..12),
        laps in -3i32..3,
    ) {
        check_turn_sum(&turns, laps)?;
    }

    #[test]
    fn repeat_multiplies_segments(n in 0u32..=1000, block in arb_block()) {
        check_repeat(n, &block)?;
    }

    #[test]
    fn tokens_round_trip(tokens in arb_tokens()) {
        check_token_round_trip(&tokens)?;
    }

    #[test]
    fn parenthesized_repeat_count(n in 0u32..50) {
        let mut a = scanboard::logo::Environment::new();
        let mut b = scanboard::logo::Environment::new();
        let ra = a.run(&format!("make \"n {n} repeat (:n) [fd 10 rt 45]")).unwrap();
        let rb = b.run(&format!("make \"n {n} repeat :n [fd 10 rt 45]")).unwrap();
        prop_assert_eq!(ra.segments, rb.segments);
    }

    #[test]
    fn clearscreen_resets_any_state(block in arb_block(), pen_up in any::<bool>()) {
        let body: Vec<String> = block.iter().map(|m| format!("{m:?}").to_lowercase().replace('(', " ").replace(')', "")).collect();
        let mut env = scanboard::logo::Environment::new();
        let pen = if pen_up { "pu" } else { "" };
        env.run(&format!("{pen} {} cs", body.join(" "))).unwrap();
        let t = &env.turtle;
        prop_assert_eq!((t.x, t.y, t.heading, t.pen_down), (0.0, 0.0, 0.0, true));
        prop_assert!(t.segments.is_empty());
    }

    #[test]
    fn plan_replays_to_same_tokens(tokens in arb_program_tokens()) {
        let layout = scanboard::layout::default_layout();
        let program = scanboard::logo::render_tokens(&tokens);
        let plan = scanboard::cost::plan_selections(&program, &layout).unwrap();
        let replayed = plan.replay(&layout).unwrap();
        prop_assert_eq!(
            without_blank_lines(scanboard::logo::tokenize(&replayed).unwrap()),
            without_blank_lines(scanboard::logo::tokenize(&program).unwrap())
        );
        let scan = scanboard::cost::scanning_cost(&plan, &layout, &Default::default()).unwrap();
        prop_assert_eq!(scan.presses, 4 * scanboard::cost::direct_cost(&plan).presses);
        let phys = scanboard::cost::physical_cost(&program, &Default::default());
        prop_assert!(phys.presses >= program.chars().filter(|&c| c != '\n').count() as u64);
    }
}

fn arb_program_tokens() -> impl Strategy<Value = Vec<scanboard::logo::Token>> {
    prop::collection::vec(arb_token(), 0..30)
}

/// The planner types no empty lines, so compare token streams with runs of
/// newlines collapsed and trimmed.
fn without_blank_lines(tokens: Vec<scanboard::logo::Token>) -> Vec<scanboard::logo::Token> {
    use scanboard::logo::Token;
    let mut out: Vec<Token> = Vec::new();
    for t in tokens {
        if t == Token::Newline && out.last().is_none_or(|l| *l == Token::Newline) {
            continue;
        }
        out.push(t);
    }
    if out.last() == Some(&Token::Newline) {
        out.pop();
    }
    out
}
