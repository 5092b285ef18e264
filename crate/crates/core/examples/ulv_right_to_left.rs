//! ULV in a right-to-left sweep. Keeping only `U₁·L₁₁` loses the
//! orthogonality that makes the errors add in quadrature, so the guaranteed
//! bound becomes the plain sum of step errors. Carrying the full column
//! `U₁·L₁₁ + U₂·L₂₁` restores the tighter bound.

use ttutv::decomp::{decompose, verify_bound, DecompConfig, Method, Retain, Sweep};
use ttutv::gen::gen_gaussian;

fn main() -> ttutv::Result<()> {
    let a = gen_gaussian(&[6, 7, 8], 3)?;
    for retain in [Retain::L11Only, Retain::FullColumn] {
        let cfg = DecompConfig::fixed_rank(Method::Ulv, Sweep::RightToLeft, vec![1, 4, 5, 1]).with_retain(retain);
        let (x, rep) = decompose(&a, &cfg)?;
        let rep = verify_bound(&a, &x, &rep)?;
        println!(
            "{retain:?}: {} bound {:.4}, achieved {:.4}",
            rep.bound_kind.name(),
            rep.bound,
            rep.achieved_error.unwrap()
        );
    }
    Ok(())
}
