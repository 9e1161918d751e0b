//! Best plausible action for each welfare objective.

use commitment_limits::design::{solve_cdp, CstClass, Objective, ObjectiveKind};
use commitment_limits::families::{DuopolyParams, Family};

fn main() -> commitment_limits::Result<()> {
    let kinds = [
        ObjectiveKind::Leader,
        ObjectiveKind::Follower,
        ObjectiveKind::ConsumerSurplus,
        ObjectiveKind::ProducerSurplus,
        ObjectiveKind::Welfare,
    ];
    for (r, d) in [(0.4, 0.0), (0.8, 0.0), (1.3, 0.0)] {
        let family = Family::Duopoly(DuopolyParams::new(r, d)?);
        println!("duopoly r={r} d={d}");
        for kind in kinds {
            let sol = solve_cdp(&family, &Objective::new(kind)?, CstClass::All)?;
            let w = &sol.witnesses[0];
            println!(
                "  {kind:?}: x = {:?}, value {:.6}, witness {} ({})",
                sol.optimal_actions,
                sol.objective_value,
                w.cst,
                if w.verified { "verified" } else { "unverified" }
            );
        }
    }

    // any W(x, y) works for a numeric solve
    let family = Family::Duopoly(DuopolyParams::new(0.8, 0.0)?);
    let sol = solve_cdp(&family, &Objective::custom(|x, y| -(x - y).powi(2)), CstClass::Simple)?;
    println!("closest to symmetric output among simple structures: {:?}", sol.optimal_actions);
    Ok(())
}
