//! Writes the U, phi and gamma panels for the worked games to `plots/`.

use std::fs;
use std::path::Path;

use commitment_limits::families::{CoordinationParams, DuopolyParams};
use commitment_limits::plausibility::Analysis;
use commitment_limits::plot::{render, Panel};

fn main() -> commitment_limits::Result<()> {
    let out = Path::new("plots");
    fs::create_dir_all(out)?;
    let games = [
        ("duopoly_r0.8", DuopolyParams::new(0.8, 0.0)?.spec()?),
        ("duopoly_r1.2", DuopolyParams::new(1.2, 0.0)?.spec()?),
        ("coordination_a0", CoordinationParams::new(0.0)?.spec()?),
    ];
    for (stem, spec) in games {
        let an = Analysis::new(&spec)?;
        for panel in Panel::ALL {
            let path = out.join(format!("{stem}_{}.svg", panel.name()));
            fs::write(&path, render(&an, panel))?;
            println!("{}", path.display());
        }
    }
    Ok(())
}
