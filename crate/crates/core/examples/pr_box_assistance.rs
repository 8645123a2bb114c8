//! A PR box turns the CHSH channel into a noiseless one.

use macap::entropy::{Base, ProbabilityVector};
use macap::game::{assisted_mac, build_game_mac, chsh, Correlation, PostProcessing};
use macap::mac::mutual_information_product;

fn main() -> macap::Result<()> {
    let game = chsh();
    let uniform = vec![ProbabilityVector::uniform(4)?, ProbabilityVector::uniform(4)?];

    let plain = build_game_mac(&game)?;
    let assisted = assisted_mac(&game, &Correlation::pr_box(&game)?, &PostProcessing::pass_through(&game)?)?;

    let before = Base::Bits.from_nats(mutual_information_product(&plain, &uniform)?);
    let after = Base::Bits.from_nats(mutual_information_product(&assisted, &uniform)?);
    println!("uniform inputs: {before:.4} bits unassisted, {after:.4} bits with a PR box");
    Ok(())
}
