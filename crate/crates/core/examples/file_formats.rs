//! Reading and writing channel and game files.

use macap::game::build_game_mac;
use macap::io::{parse_game_file, parse_mac_str, write_game, write_mac};

fn main() -> macap::Result<()> {
    let mac = parse_mac_str(include_str!("../data/nf2.mac"))?;
    println!("read channel with inputs {:?}, {} outputs", mac.input_sizes(), mac.dout());

    let game = parse_game_file("builtin:chsh")?;
    println!("game file:\n{}", write_game(&game));

    let text = write_mac(&build_game_mac(&game)?);
    let again = parse_mac_str(&text)?;
    println!("game channel round trip ok: {}", again == build_game_mac(&game)?);

    match parse_mac_str("{\"d1\": 2, \"d2\": 2, \"dout\": 2, \"transition\": [[[1, 1], [1, 1]], [[0, 0], [0, 0.5]]]}") {
        Err(e) => println!("rejected as expected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}
