//! Binary tensor and TT files, the text importer and a CSV report.

use ttutv::decomp::{decompose, verify_bound, DecompConfig, Method, Sweep};
use ttutv::gen::gen_planted_tt;
use ttutv::io::{read_tensor, read_text_tensor, read_tt, write_tensor, write_tt};
use ttutv::report::{write_rows, ReportRow};

fn main() -> ttutv::Result<()> {
    let dir = std::env::temp_dir().join(format!("ttutv-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;

    let (a, _) = gen_planted_tt(&[5, 6, 7], &[1, 2, 3, 1], 9)?;
    write_tensor(dir.join("a.ten"), &a)?;
    let back = read_tensor(dir.join("a.ten"))?;
    assert!(a.as_slice().iter().zip(back.as_slice()).all(|(x, y)| x.to_bits() == y.to_bits()));

    let cfg = DecompConfig::fixed_tol(Method::Ulv, Sweep::LeftToRight, 1e-12);
    let (x, rep) = decompose(&back, &cfg)?;
    write_tt(dir.join("a.tt"), &x)?;
    let y = read_tt(dir.join("a.tt"))?;
    assert_eq!(x, y);

    let rep = verify_bound(&a, &y, &rep)?;
    write_rows(std::io::stdout(), &[ReportRow::from_decomp(&cfg.mode, &rep, &y, None)])?;

    std::fs::write(dir.join("small.txt"), "# 2x2 example\ndims 2 2\n1\n2\n3\n4\n")?;
    let t = read_text_tensor(dir.join("small.txt"))?;
    println!("text import: dims {:?}, entries {:?}", t.dims(), t.as_slice());

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
