//! Builds a null table once, then tests dependent and independent data
//! against it.

use gmic::{null_distribution, test_independence, GmicP, Relationship, Sample, StatisticSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> gmic::Result<()> {
    let n = 150;
    let spec = StatisticSpec::gmic(GmicP::new(-1.0)?);
    let table = null_distribution(&spec, n, 500, 2024)?;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let circle = Relationship::Circle.generate(n, 0.2, &mut rng)?;

    let xs: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    let ys: Vec<f64> = (0..n).map(|_| rng.gen()).collect();
    let unrelated = Sample::new(xs, ys)?;

    for (name, sample) in [("noisy circle", &circle), ("independent", &unrelated)] {
        let result = test_independence(sample, &spec, &table, 0.05)?;
        println!("{name}:");
        println!("  gmic(-1)       = {:.4}", result.statistic);
        println!("  critical value = {:.4}", result.critical_value);
        println!("  p-value        = {:.4}", result.p_value);
        println!("  reject         = {}", result.reject);
    }
    Ok(())
}
