//! Sum capacity against the relaxed capacity for two noiseless channels.

use macap::capacity::{relaxed_sum_capacity, sum_capacity_d2_binary, sum_capacity_general, Method};
use macap::mac::examples;
use macap::{Mac, Stop, DEFAULT_EVAL_CEILING};

fn main() -> macap::Result<()> {
    for (name, mac) in [("first", examples::noise_free_one()), ("second", examples::noise_free_two())] {
        let sum = sum_capacity_d2_binary(&mac, Stop::Precision(0.01))?;
        let relaxed = relaxed_sum_capacity(&mac, 1e-8)?;
        println!(
            "{name}: sum capacity {:.4} nats (certified below {:.4}), relaxed {:.4} nats",
            sum.value, sum.upper_bound, relaxed.value
        );
    }

    // A ternary-input adder channel z = b1 + b2 needs the simplex search.
    let adder = Mac::from_fn(3, 3, 5, |z, b1, b2| f64::from(u8::from(z == b1 + b2)))?;
    let r = sum_capacity_general(&adder, Method::DenseCurve, 0.1, DEFAULT_EVAL_CEILING)?;
    println!(
        "adder: {:.4} nats in [{:.4}, {:.4}], q = {:?}",
        r.value,
        r.value,
        r.upper_bound,
        r.outer_point.entries()
    );
    Ok(())
}
