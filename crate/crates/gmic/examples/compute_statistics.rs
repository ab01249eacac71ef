//! Computes the whole statistic suite on one noisy quadratic sample.

use gmic::{evaluate_statistics, GmicP, Relationship, Sample, StatisticSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gmic::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let sample: Sample = Relationship::Quadratic.generate(400, 0.1, &mut rng)?;

    let specs = [
        StatisticSpec::mic(),
        StatisticSpec::minic(),
        StatisticSpec::gmic(GmicP::new(-1.0)?),
        StatisticSpec::gmic(GmicP::new(1.0)?),
        StatisticSpec::mcn(0.05),
        StatisticSpec::pearson_r2(),
        StatisticSpec::dcor(),
    ];
    let values = evaluate_statistics(&specs, &sample)?;

    println!("quadratic relationship, n = {}, noise 0.1", sample.len());
    for (spec, value) in specs.iter().zip(values) {
        println!("{:>10}  {value:.4}", spec.label());
    }
    println!();
    println!("r2 misses the parabola entirely; the grid statistics do not.");
    Ok(())
}
