//! Smallest useful program: one exact distance with its witness.

use ghlab::{gh_exact, FiniteMetricSpace, Result};

fn main() -> Result<()> {
    let x = FiniteMetricSpace::from_condensed(3, vec![1.0, 1.0, 1.0])?;
    let y = FiniteMetricSpace::simplex(4, 0.8);
    let (distance, witness) = gh_exact(&x, &y);
    println!("d = {distance}, matched as {:?}", witness.expand());
    Ok(())
}
