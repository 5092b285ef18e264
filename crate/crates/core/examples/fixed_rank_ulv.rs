//! Fixed-rank TT-ULV in a left-to-right sweep, compared with TT-SVD.
//!
//! Run with `cargo run --example fixed_rank_ulv`.

use ttutv::decomp::{decompose, verify_bound, DecompConfig, Method, Sweep};
use ttutv::gen::gen_gaussian;
use ttutv::tt::Side;

fn main() -> ttutv::Result<()> {
    let a = gen_gaussian(&[8, 9, 10, 7], 42)?;
    let ranks = vec![1, 4, 6, 3, 1];

    for method in [Method::Svd, Method::Ulv] {
        let cfg = DecompConfig::fixed_rank(method, Sweep::LeftToRight, ranks.clone());
        let (x, report) = decompose(&a, &cfg)?;
        let report = verify_bound(&a, &x, &report)?;
        println!(
            "{:>3}: eps_k = {:.4?}  bound {:.4}  achieved {:.4}  left-orthogonality {:.1e}",
            method.name(),
            report.eps_k,
            report.bound,
            report.achieved_error.unwrap(),
            x.check_orthogonality(Side::Left).worst(),
        );
    }
    Ok(())
}
