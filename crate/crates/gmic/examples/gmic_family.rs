//! Sweeps the exponent p to show how gmic interpolates between minic
//! (p = -inf) and mic (p = +inf).

use gmic::{
    approx_char_matrix, gmic, maximal_char_matrix, mic, minic, GmicP, MineParams, Relationship,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> gmic::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let sample = Relationship::SineHalf.generate(500, 0.3, &mut rng)?;

    let matrix = approx_char_matrix(&sample.ranked(), &MineParams::default())?;
    let maximal = maximal_char_matrix(&matrix);

    println!("sine (period 1/2), n = 500, noise 0.3");
    println!("minic = {:.4}, mic = {:.4}", minic(&maximal), mic(&matrix));
    println!();
    println!("{:>8}  gmic_p", "p");
    for p in [
        f64::NEG_INFINITY,
        -10.0,
        -2.0,
        -1.0,
        -0.5,
        0.0,
        0.5,
        1.0,
        2.0,
        10.0,
        f64::INFINITY,
    ] {
        let p = GmicP::new(p)?;
        println!("{:>8}  {:.4}", p.to_string(), gmic(&maximal, p));
    }
    println!();
    println!("the sweep is nondecreasing in p (generalized mean inequality)");
    Ok(())
}
