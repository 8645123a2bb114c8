//! The no-signalling linear program for a signalling game.

use macap::game::signalling;
use macap::nosignalling::{build_ns_system, max_ns_winning_prob, DEFAULT_NS_VARIABLE_CEILING};

fn main() -> macap::Result<()> {
    for (m1, m2) in [(2, 2), (2, 3), (4, 3)] {
        let game = signalling(m1, m2)?;
        let system = build_ns_system(&game, DEFAULT_NS_VARIABLE_CEILING)?;
        let (value, strategy) = max_ns_winning_prob(&game, DEFAULT_NS_VARIABLE_CEILING)?;
        println!(
            "signalling({m1}, {m2}): {} variables, {} independent marginal rows, optimum {value:.6}",
            system.variables(),
            system.equality_rows.len(),
        );
        println!("  behaviour on question 0: {:?}", strategy.block(0));
    }
    Ok(())
}
