//! Prescribed-accuracy decompositions: the ranks are chosen so that the
//! relative error stays below `eps`.

use ttutv::decomp::{decompose, DecompConfig, Method, Sweep};
use ttutv::gen::{gen_gaussian, gen_planted_tt};
use ttutv::report::format_ranks;
use ttutv::tensor::rse;

fn main() -> ttutv::Result<()> {
    // low-rank signal plus 5% noise
    let (clean, _) = gen_planted_tt(&[10, 10, 10, 10], &[1, 3, 5, 3, 1], 7)?;
    let noise = gen_gaussian(&[10, 10, 10, 10], 8)?;
    let level = 0.05 * clean.frobenius_norm() / noise.frobenius_norm();
    let a = clean.sub(&noise.scale(level))?;

    for eps in [0.5, 0.2, 0.06, 0.04] {
        for (method, sweep) in [
            (Method::Svd, Sweep::LeftToRight),
            (Method::Ulv, Sweep::LeftToRight),
            (Method::Urv, Sweep::RightToLeft),
        ] {
            let (x, _) = decompose(&a, &DecompConfig::fixed_tol(method, sweep, eps))?;
            println!(
                "eps {eps:<5} {:>3} {}: ranks {:<12} rse {:.4}",
                method.name(),
                sweep.name(),
                format_ranks(&x.ranks()),
                rse(&x.reconstruct()?, &a)?
            );
        }
    }

    // Unequal error weights push more of the budget onto the first step.
    let cfg = DecompConfig::fixed_tol(Method::Ulv, Sweep::LeftToRight, 0.1).with_weights(vec![0.8, 0.48, 0.36]);
    let (x, rep) = decompose(&a, &cfg)?;
    println!("weighted: ranks {} eps_k {:.3?}", format_ranks(&x.ranks()), rep.eps_k);
    Ok(())
}
