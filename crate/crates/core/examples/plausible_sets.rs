//! Plausible leader actions for the worked duopoly and coordination games.
//!
//! Run with `cargo run --example plausible_sets`.

use commitment_limits::families::{CoordinationParams, DuopolyParams};
use commitment_limits::plausibility::Analysis;

fn main() -> commitment_limits::Result<()> {
    for (r, d) in [(0.8, 0.0), (1.2, 0.0)] {
        let spec = DuopolyParams::new(r, d)?.spec()?;
        let a = Analysis::new(&spec)?;
        println!("{}", spec.name);
        println!("  cournot       {}", a.eq.cournot);
        println!("  stackelberg   {}", a.eq.stackelberg);
        println!("  simple        {}", a.simply_plausible_set());
        println!("  I-plausible   {}", a.i_plausible_set());
        match a.p_plausible() {
            Ok(p) => println!("  P-plausible   {}  (min U o gamma = {:.9} at x = {})", p.set, p.underline_u, p.x_hat),
            Err(e) => println!("  P-plausible   not characterized: {e}"),
        }
    }
    let spec = CoordinationParams::new(0.0)?.spec()?;
    let a = Analysis::new(&spec)?;
    println!("{}", spec.name);
    println!("  cournot       {}", a.eq.cournot);
    println!("  stackelberg   {}", a.eq.stackelberg);
    println!("  simple        {}", a.simply_plausible_set());
    println!("  I-plausible   {}", a.i_plausible_set());
    Ok(())
}
