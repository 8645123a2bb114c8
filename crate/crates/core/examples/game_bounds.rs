//! Winning probabilities and correlation-assisted capacity bounds of games.

use macap::game::{self, classical_winning_prob, correlation_bound, full_communication_winning_prob};
use macap::nosignalling::{max_ns_winning_prob, DEFAULT_NS_VARIABLE_CEILING};
use macap::{Base, DEFAULT_EVAL_CEILING};

fn main() -> macap::Result<()> {
    let games = [
        ("CHSH", game::chsh()),
        ("magic square", game::magic_square()),
        ("parity, 3 players", game::multiparty_parity(3)?),
        ("signalling 3x2", game::signalling(3, 2)?),
    ];
    for (name, g) in games {
        let classical = classical_winning_prob(&g, DEFAULT_EVAL_CEILING)?.omega;
        let ns = max_ns_winning_prob(&g, DEFAULT_NS_VARIABLE_CEILING)?.0;
        let full = full_communication_winning_prob(&g);
        let bound = Base::Bits.from_nats(correlation_bound(g.d(), classical)?);
        println!(
            "{name:18} d={:2}  classical {classical:.4}  no-signalling {ns:.4}  full {full:.4}  bound {bound:.3} bits",
            g.d()
        );
    }
    Ok(())
}
