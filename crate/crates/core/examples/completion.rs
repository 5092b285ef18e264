//! Recover a low-rank tensor from half of its entries, once per retraction.

use ttutv::completion::{complete, CompletionConfig, ObservationMask, Retraction};
use ttutv::gen::gen_planted_tt;

fn main() -> ttutv::Result<()> {
    let (truth, _) = gen_planted_tt(&[8, 8, 8], &[1, 2, 2, 1], 42)?;
    let mask = ObservationMask::sample(&truth, 0.5, 42)?;
    println!("observed {} of {} entries", mask.len(), truth.numel());

    for r in [Retraction::Svd, Retraction::Ulv, Retraction::Urv] {
        let cfg = CompletionConfig::new(vec![1, 2, 2, 1], r);
        let (_, trace) = complete(&mask, &cfg, Some(&truth))?;
        let checkpoints: Vec<String> = [1, 10, 50, 100, 200]
            .iter()
            .filter_map(|&i| trace.records.get(i - 1))
            .map(|rec| format!("{}:{:.1e}", rec.iteration, rec.rse_full.unwrap()))
            .collect();
        let last = trace.last().unwrap();
        println!(
            "{}: {} ({} iterations, {:?}), final rse {:.2e}, psnr {:.1} dB",
            r.name(),
            checkpoints.join(" "),
            trace.len(),
            trace.stop,
            last.rse_full.unwrap(),
            last.psnr.unwrap()
        );
    }
    Ok(())
}
