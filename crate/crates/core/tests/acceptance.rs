//! Acceptance suite. Each test prints one `PASS`/`FAIL` line to stderr
//! (bypassing output capture) and then asserts.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::{noisy_planted, planted_spectrum, random_fixture, svd_tail};
use ttutv::completion::{complete, CompletionConfig, ObservationMask, Retraction};
use ttutv::decomp::{
    decompose, verify_bound, BoundKind, DecompConfig, DecompReport, Method, Mode, Retain, Sweep,
};
use ttutv::factor::{factorize, rank_reveal_diag, FactorKind};
use ttutv::gen::{gen_gaussian, gen_hilbert, gen_planted_tt, rng};
use ttutv::io::{decode_tensor, decode_tt, encode_tensor, encode_tt};
use ttutv::matrix::Matrix;
use ttutv::tensor::{kron, mode_product, rse};
use ttutv::tt::{zeros as tt_zeros, Side};
use ttutv::{DenseTensor, TtTensor};

fn verdict(id: u32, name: &str, pass: bool, detail: String) {
    let line = format!(
        "\nacceptance {id:>2} {} {name}: {detail}\n",
        if pass { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn run(a: &DenseTensor, cfg: &DecompConfig) -> (TtTensor, DecompReport) {
    let (x, rep) = decompose(a, cfg).unwrap();
    let rep = verify_bound(a, &x, &rep).unwrap_or_else(|e| panic!("{e}"));
    (x, rep)
}

fn bound_fixtures() -> Vec<(DenseTensor, Vec<usize>)> {
    (0..200).map(|i| random_fixture(10_000 + i, 10, 8)).collect()
}

fn fits(achieved: f64, bound: f64, norm: f64) -> bool {
    achieved <= bound + 1e-8 * norm
}

#[test]
fn c01_bound_suite() {
    let fixtures = bound_fixtures();
    let start = Instant::now();
    let mut ok = 0;
    let mut worst: f64 = 0.0;
    let configs = [
        (Method::Ulv, Sweep::LeftToRight),
        (Method::Urv, Sweep::RightToLeft),
    ];
    for (a, ranks) in &fixtures {
        for (m, s) in configs {
            let (x, rep) = decompose(a, &DecompConfig::fixed_rank(m, s, ranks.clone())).unwrap();
            let achieved = a.sub(&x.reconstruct().unwrap()).unwrap().frobenius_norm();
            let bound = BoundKind::SqrtSumSquares.evaluate(&rep.eps_k);
            if fits(achieved, bound, rep.input_norm) {
                ok += 1;
            }
            if bound > 0.0 {
                worst = worst.max(achieved / bound);
            }
        }
    }
    let elapsed = start.elapsed();
    let total = fixtures.len() * configs.len();
    verdict(
        1,
        "bound suite",
        ok == total && elapsed < Duration::from_secs(30),
        format!(
            "{ok}/{total} runs within sqrt(sum eps_k^2), worst achieved/bound {worst:.6}, {:.2}s (limit 30s)",
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn c02_right_to_left_ulv_suite() {
    let fixtures = bound_fixtures();
    let mut sum_ok = 0;
    let mut full_ok = 0;
    for (a, ranks) in &fixtures {
        let cfg = DecompConfig::fixed_rank(Method::Ulv, Sweep::RightToLeft, ranks.clone());
        let (x, rep) = decompose(a, &cfg).unwrap();
        let achieved = a.sub(&x.reconstruct().unwrap()).unwrap().frobenius_norm();
        if rep.bound_kind == BoundKind::Sum
            && fits(achieved, rep.eps_k.iter().sum(), rep.input_norm)
        {
            sum_ok += 1;
        }
        let (x, rep) = decompose(a, &cfg.with_retain(Retain::FullColumn)).unwrap();
        let achieved = a.sub(&x.reconstruct().unwrap()).unwrap().frobenius_norm();
        let sqrt_bound = BoundKind::SqrtSumSquares.evaluate(&rep.eps_k);
        if fits(achieved, sqrt_bound, rep.input_norm) && fits(achieved, rep.eps_k.iter().sum(), rep.input_norm) {
            full_ok += 1;
        }
    }
    let n = fixtures.len();
    verdict(
        2,
        "right-to-left ULV bounds",
        sum_ok == n && full_ok == n,
        format!("keep-L11 within sum bound {sum_ok}/{n}, full-column within sqrt bound {full_ok}/{n}"),
    );
}

#[test]
fn c03_fixed_precision() {
    let mut guarantee_ok = 0;
    let mut band_ok = 0;
    let mut runs = 0;
    let mut worst: f64 = 0.0;
    for eps in [0.3, 0.1, 0.01] {
        for i in 0..50u64 {
            let seed = 20_000 + i;
            // Half flat-spectrum Gaussian tensors, half low-rank plus noise.
            let a = if i % 2 == 0 {
                random_fixture(seed, 8, 1).0
            } else {
                noisy_planted(seed, 3, 8)
            };
            for (m, s) in [(Method::Ulv, Sweep::LeftToRight), (Method::Urv, Sweep::RightToLeft)] {
                runs += 1;
                let (x, rep) = decompose(&a, &DecompConfig::fixed_tol(m, s, eps)).unwrap();
                let (_, svd_rep) = decompose(&a, &DecompConfig::fixed_tol(Method::Svd, s, eps)).unwrap();
                let e = rse(&x.reconstruct().unwrap(), &a).unwrap();
                worst = worst.max(e / eps);
                if e <= eps {
                    guarantee_ok += 1;
                }
                let close = rep
                    .ranks_chosen
                    .iter()
                    .zip(&svd_rep.ranks_chosen)
                    .all(|(&p, &q)| p.abs_diff(q) <= 2);
                if close {
                    band_ok += 1;
                }
            }
        }
    }
    verdict(
        3,
        "fixed-precision guarantee",
        guarantee_ok == runs && band_ok * 10 >= runs * 9,
        format!(
            "rse <= eps in {guarantee_ok}/{runs} (worst rse/eps {worst:.3}), ranks within +-2 of TT-SVD in {band_ok}/{runs} (need 90%)"
        ),
    );
}

/// The sweep algorithms, each as a configuration builder for a planted rank chain.
fn all_algorithms(ranks: &[usize]) -> Vec<(&'static str, DecompConfig)> {
    let fr = |m, s| DecompConfig::fixed_rank(m, s, ranks.to_vec());
    let ft = |m, s| DecompConfig::fixed_tol(m, s, 1e-12);
    vec![
        ("svd-l2r", fr(Method::Svd, Sweep::LeftToRight)),
        ("svd-r2l", fr(Method::Svd, Sweep::RightToLeft)),
        ("ulv-l2r-rank", fr(Method::Ulv, Sweep::LeftToRight)),
        ("ulv-l2r-tol", ft(Method::Ulv, Sweep::LeftToRight)),
        ("urv-r2l-rank", fr(Method::Urv, Sweep::RightToLeft)),
        ("urv-r2l-tol", ft(Method::Urv, Sweep::RightToLeft)),
        ("ulv-r2l-l11", fr(Method::Ulv, Sweep::RightToLeft)),
        (
            "ulv-r2l-full",
            fr(Method::Ulv, Sweep::RightToLeft).with_retain(Retain::FullColumn),
        ),
        ("urv-l2r-reversed", fr(Method::Urv, Sweep::LeftToRight)),
    ]
}

fn planted_fixtures() -> Vec<(DenseTensor, Vec<usize>)> {
    use rand::Rng;
    let big = vec![1, 4, 4, 4, 1];
    let mut fixtures = vec![(gen_planted_tt(&[10, 10, 10, 10], &big, 1).unwrap().0, big)];
    for i in 0..24u64 {
        let mut g = rng(30_000 + i);
        let d = g.random_range(3..=4);
        let dims: Vec<usize> = (0..d).map(|_| g.random_range(2..=10)).collect();
        let mut ranks = vec![1];
        ranks.extend((1..d).map(|_| g.random_range(1..=4)));
        ranks.push(1);
        let ranks = ttutv::decomp::clamp_ranks(&dims, &ranks).unwrap().0;
        fixtures.push((gen_planted_tt(&dims, &ranks, 30_000 + i).unwrap().0, ranks));
    }
    fixtures
}

#[test]
fn c04_exact_recovery() {
    let fixtures = planted_fixtures();
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut runs = 0;
    for (idx, (a, ranks)) in fixtures.iter().enumerate() {
        for (name, cfg) in all_algorithms(ranks) {
            runs += 1;
            let (x, rep) = decompose(a, &cfg).unwrap();
            let e = rse(&x.reconstruct().unwrap(), a).unwrap();
            worst = worst.max(e);
            let ranks_ok = matches!(cfg.mode, Mode::FixedRank(_)) || rep.ranks_chosen == *ranks;
            if e > 1e-10 || !ranks_ok {
                failures.push(format!("{name}#{idx} rse {e:e} ranks {:?}", rep.ranks_chosen));
            }
        }
    }
    let elapsed = start.elapsed();
    verdict(
        4,
        "exact recovery",
        failures.is_empty() && elapsed < Duration::from_secs(10),
        format!(
            "{}/{runs} runs at rse <= 1e-10 with planted ranks, worst rse {worst:.2e}, {:.2}s (limit 10s){}",
            runs - failures.len(),
            elapsed.as_secs_f64(),
            if failures.is_empty() { String::new() } else { format!("; {failures:?}") }
        ),
    );
}

#[test]
fn c05_orthogonality() {
    let mut inputs: Vec<(DenseTensor, Vec<usize>)> = bound_fixtures().into_iter().take(60).collect();
    inputs.extend(planted_fixtures());
    let mut worst = [0.0f64; 3];
    let mut runs = 0;
    for (a, ranks) in &inputs {
        for (_, cfg) in all_algorithms(ranks) {
            let (x, _) = decompose(a, &cfg).unwrap();
            runs += 1;
            let slot = match (cfg.method, cfg.sweep) {
                (Method::Urv, Sweep::LeftToRight) => 2,
                (_, Sweep::LeftToRight) => 0,
                (_, Sweep::RightToLeft) => 1,
            };
            let side = if cfg.sweep == Sweep::LeftToRight { Side::Left } else { Side::Right };
            worst[slot] = worst[slot].max(x.check_orthogonality(side).worst());
        }
    }
    verdict(
        5,
        "core orthogonality",
        worst.iter().all(|&w| w <= 1e-12),
        format!(
            "{runs} runs; worst deviation left {:.2e}, right {:.2e}, reversed-URV left {:.2e} (limit 1e-12)",
            worst[0], worst[1], worst[2]
        ),
    );
}

#[test]
fn c06_factor_identities() {
    use rand::Rng;
    let mut g = rng(40_000);
    let mut worst = [0.0f64; 3];
    let mut min_gap = f64::INFINITY;
    let mut bad = 0;
    for i in 0..500u64 {
        let m = g.random_range(1..=30);
        let n = g.random_range(1..=30);
        let mut a = common::gaussian_matrix(m, n, 40_000 + i);
        if i % 3 == 1 {
            // graded columns
            for j in 0..n {
                let s = 10f64.powf(-(j as f64) / 3.0);
                a.col_mut(j).iter_mut().for_each(|x| *x *= s);
            }
        } else if i % 3 == 2 {
            let k = g.random_range(1..=m.min(n));
            a = common::gaussian_matrix(m, k, 50_000 + i).matmul(&common::gaussian_matrix(k, n, 60_000 + i));
        }
        let norm = a.frobenius_norm();
        let r = g.random_range(1..=m.min(n));
        let floor = svd_tail(&a, r);
        for kind in [FactorKind::Ulv, FactorKind::Urv] {
            let f = factorize(&a, kind, 1).unwrap();
            let t = f.truncate(r).unwrap();
            let e = t.residual(&a);
            let explicit_sq = e.frobenius_norm_sq();
            let identity_sq = norm * norm - t.t11.frobenius_norm_sq();
            let rel = (explicit_sq - identity_sq).abs() / (norm * norm);
            let rel_recorded = (explicit_sq - t.residual_norm * t.residual_norm).abs() / (norm * norm);
            worst[0] = worst[0].max(rel).max(rel_recorded);
            let orth = match kind {
                FactorKind::Ulv => t.u1.t_matmul(&e).max_abs(),
                _ => e.matmul(&t.v1).max_abs(),
            } / norm;
            let slot = if kind == FactorKind::Ulv { 1 } else { 2 };
            worst[slot] = worst[slot].max(orth);
            let gap = (e.frobenius_norm() - floor) / norm;
            min_gap = min_gap.min(gap);
            if rel > 1e-10 || rel_recorded > 1e-10 || orth > 1e-10 || gap < -1e-10 {
                bad += 1;
            }
        }
    }
    verdict(
        6,
        "factor-level identities",
        bad == 0,
        format!(
            "1000 truncations, {bad} failures; residual identity {:.1e}, ULV U1'E {:.1e}, URV E V1 {:.1e}, smallest margin over SVD floor {:.1e} (all relative to the norm, tolerance 1e-10)",
            worst[0], worst[1], worst[2], min_gap
        ),
    );
}

#[test]
fn c07_rank_revealing() {
    let sigmas: Vec<f64> = (1..=15).map(|i| 2f64.powi(-i)).collect();
    let (s4, s5) = (sigmas[3], sigmas[4]);
    let mut hits = [0; 2];
    let mut worst = [(f64::INFINITY, 0.0f64); 2];
    for trial in 0..100u64 {
        let a = planted_spectrum(20, 15, &sigmas, 70_000 + 2 * trial);
        for (slot, kind) in [FactorKind::Ulv, FactorKind::Urv].into_iter().enumerate() {
            let d = rank_reveal_diag(&factorize(&a, kind, 1).unwrap(), 4).unwrap();
            let lead = d.sigma_min_t11 / s4;
            let trail = d.residual_spectral_norm / s5;
            worst[slot].0 = worst[slot].0.min(lead);
            worst[slot].1 = worst[slot].1.max(trail);
            if lead >= 0.2 && trail <= 5.0 {
                hits[slot] += 1;
            }
        }
    }
    verdict(
        7,
        "rank-revealing quality",
        hits.iter().all(|&h| h >= 95),
        format!(
            "ULV {}/100 (min sigma_min(T11)/sigma_4 {:.3}, max discarded/sigma_5 {:.3}), URV {}/100 ({:.3}, {:.3}); need 95",
            hits[0], worst[0].0, worst[0].1, hits[1], worst[1].0, worst[1].1
        ),
    );
}

#[test]
fn c08_parameter_count() {
    let dims = [18, 18, 18, 27];
    let x = tt_zeros(&dims, &[1, 15, 45, 25, 1]).unwrap();
    let one = x.param_count();
    // 18·15 + 15·18·45 + 45·18·25 + 25·27
    let oracle = 18 * 15 + 15 * 18 * 45 + 45 * 18 * 25 + 25 * 27;
    let dense: usize = dims.iter().product::<usize>() * 3;
    verdict(
        8,
        "parameter count",
        one == 33_345 && oracle == one && 3 * one == 100_035 && dense == 472_392,
        format!("one channel {one}, three channels {}, dense {dense}", 3 * one),
    );
}

#[test]
fn c09_hilbert_decay() {
    let h = gen_hilbert(&[20, 20, 20]).unwrap();
    let methods = [
        (Method::Svd, Sweep::LeftToRight),
        (Method::Ulv, Sweep::LeftToRight),
        (Method::Urv, Sweep::RightToLeft),
    ];
    let table: Vec<Vec<f64>> = methods
        .iter()
        .map(|&(m, s)| {
            [2, 4, 6, 8]
                .iter()
                .map(|&r| {
                    let (x, _) = run(&h, &DecompConfig::fixed_rank(m, s, vec![1, r, r, 1]));
                    rse(&x.reconstruct().unwrap(), &h).unwrap()
                })
                .collect()
        })
        .collect();
    let decreasing = table.iter().all(|row| row.windows(2).all(|w| w[1] < w[0]));
    let within = table[1..]
        .iter()
        .all(|row| row.iter().zip(&table[0]).all(|(u, s)| *u <= 2.0 * s));
    let fmt = |row: &Vec<f64>| row.iter().map(|v| format!("{v:.2e}")).collect::<Vec<_>>().join(" ");
    verdict(
        9,
        "Hilbert decay",
        decreasing && within,
        format!(
            "r=2,4,6,8 svd [{}] ulv [{}] urv [{}]",
            fmt(&table[0]),
            fmt(&table[1]),
            fmt(&table[2])
        ),
    );
}

#[test]
fn c10_completion() {
    let (truth, _) = gen_planted_tt(&[8, 8, 8], &[1, 2, 2, 1], 42).unwrap();
    let mask = ObservationMask::sample(&truth, 0.5, 42).unwrap();
    let start = Instant::now();
    let mut finals = Vec::new();
    let mut trend = true;
    let mut detail = Vec::new();
    for r in [Retraction::Svd, Retraction::Ulv, Retraction::Urv] {
        let cfg = CompletionConfig::new(vec![1, 2, 2, 1], r);
        let (x, trace) = complete(&mask, &cfg, Some(&truth)).unwrap();
        let final_rse = rse(&x.reconstruct().unwrap(), &truth).unwrap();
        let first = trace.records[0].rse_observed;
        let at100 = trace.records.get(99).unwrap_or(trace.last().unwrap()).rse_observed;
        trend &= at100 < first;
        detail.push(format!("{} {} iters rse {final_rse:.2e}", r.name(), trace.len()));
        finals.push(final_rse);
    }
    let elapsed = start.elapsed();
    let hi = finals.iter().cloned().fold(0.0, f64::max);
    let lo = finals.iter().cloned().fold(f64::INFINITY, f64::min);
    verdict(
        10,
        "completion fixture",
        hi <= 1e-3 && hi <= 2.0 * lo && trend && elapsed < Duration::from_secs(60),
        format!(
            "{}; max/min {:.3}, {:.2}s (limit 60s)",
            detail.join(", "),
            hi / lo,
            elapsed.as_secs_f64()
        ),
    );
}

/// `G ×_1 A_1 ··· ×_d A_d` through mode products.
fn tucker(core: &DenseTensor, factors: &[Matrix]) -> DenseTensor {
    factors
        .iter()
        .enumerate()
        .fold(core.clone(), |t, (k, a)| mode_product(&t, a, k + 1).unwrap())
}

#[test]
fn c11_determinism_and_io() {
    // Same seeds, same bytes.
    let mut identical = true;
    for (m, s) in [
        (Method::Svd, Sweep::LeftToRight),
        (Method::Ulv, Sweep::LeftToRight),
        (Method::Urv, Sweep::RightToLeft),
        (Method::Ulv, Sweep::RightToLeft),
        (Method::Urv, Sweep::LeftToRight),
    ] {
        let bytes = |_: ()| {
            let a = gen_gaussian(&[5, 6, 4, 3], 99).unwrap();
            let (x, _) = decompose(&a, &DecompConfig::fixed_rank(m, s, vec![1, 3, 4, 2, 1])).unwrap();
            encode_tt(&x)
        };
        identical &= bytes(()) == bytes(());
    }

    // Bitwise round trips.
    let t = gen_gaussian(&[3, 4, 5], 7).unwrap();
    let back = decode_tensor(&encode_tensor(&t)).unwrap();
    let tensor_rt = t.as_slice().iter().zip(back.as_slice()).all(|(a, b)| a.to_bits() == b.to_bits())
        && t.dims() == back.dims();
    let (_, x) = gen_planted_tt(&[3, 4, 5], &[1, 2, 3, 1], 7).unwrap();
    let enc = encode_tt(&x);
    let tt_rt = encode_tt(&decode_tt(&enc).unwrap()) == enc && decode_tt(&enc).unwrap() == x;

    // Unfolding of a Tucker tensor against explicit Kronecker products.
    let mut kron_worst: f64 = 0.0;
    for trial in 0..20u64 {
        let dims = [3 + (trial % 3) as usize, 4, 2 + (trial % 2) as usize];
        let core_dims = [2, 3, 2];
        let core = gen_gaussian(&core_dims, 80_000 + trial).unwrap();
        let factors: Vec<Matrix> = (0..3)
            .map(|k| common::gaussian_matrix(dims[k], core_dims[k], 81_000 + 10 * trial + k as u64))
            .collect();
        let x = tucker(&core, &factors);
        for k in 1..3 {
            let left = (0..k).rev().fold(Matrix::identity(1), |acc, j| kron(&acc, &factors[j]));
            let right = (k..3).rev().fold(Matrix::identity(1), |acc, j| kron(&acc, &factors[j]));
            let expect = left.matmul(&core.unfold(k).unwrap()).matmul_t(&right);
            let got = x.unfold(k).unwrap();
            kron_worst = kron_worst.max(got.sub(&expect).frobenius_norm() / expect.frobenius_norm());
        }
    }
    verdict(
        11,
        "determinism and I/O",
        identical && tensor_rt && tt_rt && kron_worst <= 1e-10,
        format!(
            "repeat runs identical {identical}, tensor round trip {tensor_rt}, TT round trip {tt_rt}, Kronecker identity rel. error {kron_worst:.1e}"
        ),
    );
}
