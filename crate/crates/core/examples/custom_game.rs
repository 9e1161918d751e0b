//! A game from closures, and the same game as a sampled payoff table.

use std::sync::Arc;

use commitment_limits::families::TabulatedGame;
use commitment_limits::game::{ActionSpace, GameSpec};
use commitment_limits::optimize::linspace;
use commitment_limits::oracle::{CstFamily, EnumConfig, Oracle};
use commitment_limits::plausibility::Analysis;

fn main() -> commitment_limits::Result<()> {
    // a location game: the follower wants to sit near the leader, the
    // leader wants to be near 0.8 and away from the follower
    let space = ActionSpace::new(0.0, 1.0)?;
    let u = |x: f64, y: f64| -(x - 0.8).powi(2) + 0.5 * (x - y).powi(2) - 0.6 * x * x;
    let v = |y: f64, x: f64| -(y - 0.5 * x - 0.2).powi(2);
    let spec = GameSpec::from_fns(space, space, u, v)?.with_name("location");
    let an = Analysis::new(&spec)?;
    println!("{}: cournot {}, stackelberg {}", spec.name, an.eq.cournot, an.eq.stackelberg);
    println!("  simple {}", an.simply_plausible_set());
    println!("  I      {}", an.i_plausible_set());
    match an.p_plausible() {
        Ok(p) => println!("  P      {}", p.set),
        Err(e) => println!("  P      {e}"),
    }

    let xs = linspace(0.0, 1.0, 41);
    let ut: Vec<Vec<f64>> = xs.iter().map(|&x| xs.iter().map(|&y| u(x, y)).collect()).collect();
    let vt: Vec<Vec<f64>> = xs.iter().map(|&x| xs.iter().map(|&y| v(y, x)).collect()).collect();
    let table = Arc::new(TabulatedGame::new(xs.clone(), xs, ut, vt)?);
    let tspec = table.spec()?;
    let o = Oracle::with_landmarks(&tspec, 81, &[])?;
    let cert: Vec<f64> = (0..o.grid().len())
        .filter(|&i| o.certify(i, &[CstFamily::CutoffPartitions], EnumConfig::default()).is_some())
        .map(|i| o.grid().x(i))
        .collect();
    let (lo, hi) = (cert.first().copied().unwrap_or(f64::NAN), cert.last().copied().unwrap_or(f64::NAN));
    println!("tabulated copy: {} grid actions certified by cutoff partitions, from {lo:.4} to {hi:.4}", cert.len());
    Ok(())
}
