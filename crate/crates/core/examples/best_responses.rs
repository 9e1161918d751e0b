//! Best responses, `phi`, `U` and the deviation gain for the duopoly.
//!
//! `cargo run --example best_responses`

use commitment_limits::families::DuopolyParams;

fn main() -> commitment_limits::Result<()> {
    let spec = DuopolyParams::new(0.8, 0.0)?.spec()?;
    let xc = 5.0 / 11.0;
    println!("{:>8} {:>10} {:>10} {:>10} {:>12}", "x", "R_F(x)", "phi(x)", "U(x)", "gamma(x)");
    for i in 0..=10 {
        let x = spec.leader_space.hi * i as f64 / 10.0;
        println!(
            "{x:8.4} {:10.6} {:10.6} {:10.6} {:12.6}",
            spec.best_response_follower(x),
            spec.phi(x),
            spec.leader_value(x),
            spec.gamma(x, xc)
        );
    }
    // the leader gains by moving toward phi(x) once the follower has answered x
    let x = 1.5;
    println!("eta(phi(1.5), 1.5) = {:.6}", spec.eta(spec.phi(x), x));
    let p = spec.partials(0.3, 0.4);
    let n = spec.numeric_partials(0.3, 0.4);
    println!("u1 analytic {:.9}  numeric {:.9}", p.u1, n.u1);
    Ok(())
}
