//! The Hilbert tensor 1/(i+j+k) has rapidly decaying TT singular values.

use ttutv::decomp::{decompose, DecompConfig, Method, Sweep};
use ttutv::gen::gen_hilbert;
use ttutv::tensor::rse;

fn main() -> ttutv::Result<()> {
    let h = gen_hilbert(&[20, 20, 20])?;
    println!("{:>3} {:>10} {:>10} {:>10}", "r", "svd", "ulv", "urv");
    for r in [1, 2, 4, 6, 8, 10] {
        let mut row = Vec::new();
        for (m, s) in [
            (Method::Svd, Sweep::LeftToRight),
            (Method::Ulv, Sweep::LeftToRight),
            (Method::Urv, Sweep::RightToLeft),
        ] {
            let (x, _) = decompose(&h, &DecompConfig::fixed_rank(m, s, vec![1, r, r, 1]))?;
            row.push(rse(&x.reconstruct()?, &h)?);
        }
        println!("{r:>3} {:>10.3e} {:>10.3e} {:>10.3e}", row[0], row[1], row[2]);
    }
    Ok(())
}
