//! Fits a five-harmonic series to noisy stroke-angle samples, as one would
//! for motion-capture data, and compares it with the generating series.

use flapwing::kinematics::{fit_fourier, FourierSeries};
use rand::SeedableRng;
use rand_distr::{Distribution, Normal};

fn main() -> flapwing::Result<()> {
    let f = 17.3;
    let truth = FourierSeries::new(
        2f64.to_radians(),
        vec![
            (95f64.to_radians(), 0.0),
            (0.0, 6f64.to_radians()),
            (-3f64.to_radians(), 1f64.to_radians()),
        ],
        f,
    )?;

    // Three cycles at 1 kHz with 0.5 deg of tracking noise.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let noise = Normal::new(0.0, 0.5f64.to_radians()).unwrap();
    let samples: Vec<(f64, f64)> = (0..(3.0 * 1000.0 / f) as usize)
        .map(|i| {
            let t = i as f64 / 1000.0;
            (t, truth.angle(t) + noise.sample(&mut rng))
        })
        .collect();

    for n in [1, 3, 5] {
        let fit = fit_fourier(&samples, f, n)?;
        println!(
            "N = {n}: residual {:.3} deg, amplitude {:.2} deg",
            fit.residual_rms.to_degrees(),
            fit.series
                .peak_to_peak(flapwing::kinematics::AMPLITUDE_SAMPLES)
                .to_degrees()
        );
    }
    let fit = fit_fourier(&samples, f, 5)?;
    println!("\n{}", serde_json::to_string_pretty(&fit.series.to_spec()).unwrap());
    Ok(())
}
