//! Cournot and Stackelberg sets across duopoly regimes and the coordination
//! game.

use commitment_limits::equilibria::{equilibria, Direction};
use commitment_limits::families::{CoordinationParams, DuopolyParams};
use commitment_limits::plausibility::Analysis;

fn main() -> commitment_limits::Result<()> {
    let games = [
        DuopolyParams::new(0.3, 0.0)?.spec()?,
        DuopolyParams::new(0.8, 0.0)?.spec()?,
        DuopolyParams::new(1.0, 0.0)?.spec()?,
        DuopolyParams::new(1.2, 0.0)?.spec()?,
        CoordinationParams::new(0.0)?.spec()?,
    ];
    for spec in &games {
        let eq = equilibria(spec)?;
        println!("{}", spec.name);
        println!("  cournot      {}", eq.cournot);
        println!("  stackelberg  {}  (U = {:.6})", eq.stackelberg, eq.u_max);
    }
    let an = Analysis::new(&games[1])?;
    let level = an.u(5.0 / 11.0);
    println!("upper contour of U(5/11) for r = 4/5: {}", an.contour(level, Direction::Ge));
    Ok(())
}
