//! Brute-force subgame perfect equilibria on a grid, and certificates for
//! single actions.

use commitment_limits::cst::SymbolicCst;
use commitment_limits::families::{CoordinationParams, DuopolyParams};
use commitment_limits::oracle::{CstFamily, EnumConfig, FiniteCst, Oracle};

fn main() -> commitment_limits::Result<()> {
    let spec = DuopolyParams::new(0.8, 0.0)?.spec()?;
    for lit in ["[0,1.5)|[1.5,5/3]", "(1/8,1/3]|[0,1/8]u(1/3,5/3]", "cournot", "stackelberg"] {
        let k = SymbolicCst::parse(lit, spec.leader_space)?;
        let o = Oracle::with_landmarks(&spec, 201, &k.endpoints())?;
        let fk = FiniteCst::from_symbolic(&k, o.grid())?;
        let spe = o.spe_outcomes(&fk);
        let best = o.spe_outcomes_leader_preferred(&fk);
        println!("{lit:30} SPE leader actions {:?}  leader-preferred {:?}", spe.leader_actions(), best.leader_actions());
    }

    // 1/3 is not simply plausible: no cutoff partition supports it, a
    // quasi-simple structure does
    let o = Oracle::with_landmarks(&spec, 121, &[1.0 / 3.0, 5.0 / 18.0])?;
    let i = o.grid().index_of(1.0 / 3.0).expect("hint on grid");
    let cfg = EnumConfig::default();
    println!("cutoff witness for 1/3: {:?}", o.certify(i, &[CstFamily::CutoffPartitions], cfg).map(|w| w.cst.describe(o.grid())));
    if let Some(w) = o.certify(i, &[CstFamily::QuasiSimpleWitness], cfg) {
        println!("quasi-simple witness:   {}", w.cst.describe(o.grid()));
    }

    let spec = CoordinationParams::new(0.0)?.spec()?;
    let o = Oracle::with_landmarks(&spec, 201, &[0.75, 0.25])?;
    let k = SymbolicCst::parse("[0,0.75]|[0.25,1]", spec.leader_space)?;
    let spe = o.spe_outcomes(&FiniteCst::from_symbolic(&k, o.grid())?);
    println!("coordination with two overlapping intervals: {:?}", spe.leader_actions());
    Ok(())
}
