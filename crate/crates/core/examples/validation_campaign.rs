//! Grid oracle against the closed-form sets, point by point.

use commitment_limits::families::{CoordinationParams, DuopolyParams, Family};
use commitment_limits::validation::equivalence_campaign;

fn main() -> commitment_limits::Result<()> {
    let families = [
        Family::Duopoly(DuopolyParams::new(0.3, 0.0)?),
        Family::Duopoly(DuopolyParams::new(0.8, 0.0)?),
        Family::Duopoly(DuopolyParams::new(1.2, 0.0)?),
        Family::Coordination(CoordinationParams::new(0.0)?),
    ];
    for family in &families {
        let rep = equivalence_campaign(family, 121, 2)?;
        let certified = rep.points.iter().filter(|p| p.cutoff_certified).count();
        println!(
            "{:24} h={:.4}  simple {}  cutoff-certified {}  discrepancies {}",
            family.spec()?.name,
            rep.h,
            rep.simple,
            certified,
            rep.discrepancies.len()
        );
        for d in &rep.discrepancies {
            println!("  {:.6}: {}", d.x, d.kind);
        }
    }
    Ok(())
}
