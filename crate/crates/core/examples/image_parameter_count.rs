//! Storage cost of an 18x18x18x27 tensor held as a TT with ranks
//! (1, 15, 45, 25, 1), per channel and for a three-channel stack.

use ttutv::tt::zeros;

fn main() -> ttutv::Result<()> {
    let dims = [18, 18, 18, 27];
    let x = zeros(&dims, &[1, 15, 45, 25, 1])?;
    let per_channel = x.param_count();
    let dense: usize = dims.iter().product();
    println!("per channel: {per_channel} TT parameters vs {dense} dense entries");
    println!("three channels: {} vs {}", 3 * per_channel, 3 * dense);
    println!("compression ratio {:.2}", dense as f64 / per_channel as f64);
    Ok(())
}
