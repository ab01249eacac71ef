//! Runs a reduced power study and prints the resulting power table.

use gmic::{power_study, GmicP, Relationship, SimConfig, StatisticSpec};

fn main() -> gmic::Result<()> {
    let mut config = SimConfig::power_defaults();
    config.n = 100;
    config.reps = 100;
    config.null_reps = 200;
    config.seed = 7;
    config.noise_grid = vec![0.25, 0.75, 1.5];
    config.relationships = vec![
        Relationship::Linear,
        Relationship::Quadratic,
        Relationship::SineEighth,
    ];
    config.statistics = vec![
        StatisticSpec::mic(),
        StatisticSpec::gmic(GmicP::new(-1.0)?),
        StatisticSpec::pearson_r2(),
        StatisticSpec::dcor(),
    ];

    let result = power_study(&config)?;
    println!(
        "power at level {}, n = {}, {} reps per cell",
        config.level, config.n, config.reps
    );
    println!();
    print!("{:<12} {:>6}", "", "noise");
    for (label, _) in &result.cutoffs {
        print!(" {label:>9}");
    }
    println!();
    for rel in &config.relationships {
        for &noise in &config.noise_grid {
            print!("{:<12} {noise:>6.2}", rel.name());
            for (label, _) in &result.cutoffs {
                let cell = result.cell(*rel, label, noise).expect("cell exists");
                match cell.power {
                    Some(p) => print!(" {p:>9.2}"),
                    None => print!(" {:>9}", "failed"),
                }
            }
            println!();
        }
    }
    println!();
    println!("note how r2 collapses on the quadratic and the high-frequency sine");
    Ok(())
}
