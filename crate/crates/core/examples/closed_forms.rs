//! Closed-form duopoly thresholds and sets next to the numeric ones.

use commitment_limits::families::{thresholds, DuopolyClosedForms, DuopolyParams};
use commitment_limits::plausibility::Analysis;

fn main() -> commitment_limits::Result<()> {
    println!("{:>5} {:>9} {:>9} {:>9} {:>9} {:>9} {:>9}", "d", "r**", "r††", "r***", "r†††", "r†", "r*");
    for d in [0.0, 0.2, 0.4, 0.6, 0.8] {
        let t = thresholds(d);
        println!(
            "{d:5.2} {:9.6} {:9.6} {:9.6} {:9.6} {:9.6} {:9.6}  ordered: {}",
            t.r_2star, t.r_2dag, t.r_3star, t.r_3dag, t.r_dag, t.r_star, t.ordered()
        );
    }
    for (r, d) in [(0.2, 0.0), (0.5, 0.0), (0.8, 0.0), (1.2, 0.0), (0.8, 0.3)] {
        let p = DuopolyParams::new(r, d)?;
        let cf = DuopolyClosedForms::new(p)?;
        let an = Analysis::new(&p.spec()?)?;
        println!("r={r} d={d}  regime {}", cf.regime.label());
        println!("  simple     closed {:32} numeric {}", cf.simply_plausible.to_string(), an.simply_plausible_set());
        let numeric = an.p_plausible().map(|p| p.set).unwrap_or_else(|_| an.i_plausible_set());
        println!("  plausible  closed {:32} numeric {}", cf.plausible.to_string(), numeric);
    }
    Ok(())
}
