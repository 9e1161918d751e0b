//! Richer and finer structures, and worse simple refinements.

use commitment_limits::cst::SymbolicCst;
use commitment_limits::families::CoordinationParams;
use commitment_limits::oracle::{FiniteCst, Oracle};
use commitment_limits::plausibility::Analysis;
use commitment_limits::refinement::{is_finer, is_richer, is_worse, worse_refinement_check};

fn main() -> commitment_limits::Result<()> {
    let spec = CoordinationParams::new(0.01)?.spec()?;
    let space = spec.leader_space;
    let k = SymbolicCst::parse("{0}|(0,1)|{1}", space)?;
    let k2 = SymbolicCst::parse("[0.05,0.95]|*", space)?;
    println!("K  = {k}");
    println!("K' = {k2}");
    println!("K' finer than K: {}, richer: {}", is_finer(&k2, &k), is_richer(&k2, &k));

    let mut hints = k.endpoints();
    hints.extend(k2.endpoints());
    let o = Oracle::with_landmarks(&spec, 201, &hints)?;
    let (a, b) = (FiniteCst::from_symbolic(&k, o.grid())?, FiniteCst::from_symbolic(&k2, o.grid())?);
    println!("K' worse than K on the grid: {}", is_worse(&o, &b, &a)?);

    let an = Analysis::new(&spec)?;
    let check = worse_refinement_check(&an, &k)?;
    println!("worse refinement exists: {} (SPE payoff {:.6}, threshold {:.6})", check.exists, check.spe_min_payoff, check.threshold);
    for e in &check.elements {
        println!("  {:24} bound {:.6} at {:.6}{}", e.element, e.payoff, e.action, if e.attained { "" } else { " (not attained)" });
    }
    Ok(())
}
