//! Interval unions: algebra, predicates and the literal syntax.

use commitment_limits::game::ActionSpace;
use commitment_limits::interval::{IntervalUnion, Piece};

fn main() -> commitment_limits::Result<()> {
    let space = ActionSpace::new(0.0, 1.0)?;
    let a = IntervalUnion::from_pieces(space, vec![Piece::point(0.0), Piece::closed(0.2, 0.5)]);
    let b = IntervalUnion::from_pieces(space, vec![Piece::new(0.4, 0.8, false, true)]);
    println!("A          = {a}");
    println!("B          = {b}");
    println!("A u B      = {}", a.union(&b));
    println!("A n B      = {}", a.intersect(&b));
    println!("not A      = {}", a.complement());
    println!("A \\ B      = {}", a.difference(&b));

    // a sampled predicate, refined by bisection and with 1/3 kept exact
    let set = IntervalUnion::from_predicate(|x| (x - 0.5).abs() >= 0.3 || x == 1.0 / 3.0, space, 101, &[1.0 / 3.0], 1e-10);
    println!("|x - 1/2| >= 0.3 plus 1/3: {set}");
    println!("measure {:.6}, points {:?}", set.measure(), set.points());
    Ok(())
}
