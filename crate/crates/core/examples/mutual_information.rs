//! Mutual information of a two-sender channel for product inputs.

use macap::entropy::{shannon_entropy, Base, ProbabilityVector};
use macap::mac::{effective_channel, examples, mutual_information};

fn main() -> macap::Result<()> {
    let mac = examples::noise_free_one();
    let p = ProbabilityVector::new(vec![0.6, 0.4])?;
    let q = ProbabilityVector::uniform(2)?;

    let bits = mutual_information(&mac, &p, &q, Base::Bits)?;
    println!("I(p, q) = {bits:.6} bits");

    let channel = effective_channel(&mac, &q)?;
    let output = ProbabilityVector::new(channel.output(&p))?;
    println!("output distribution {:?}", output.entries());
    println!("H(Z) = {:.6} bits", shannon_entropy(&output, Base::Bits));
    Ok(())
}
