use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::{Error, Result};

/// p-value of Pearson's chi-square test of `counts` against the uniform
/// distribution over the same states.
pub fn chi_square_uniformity(counts: &[u64]) -> Result<f64> {
    let k = counts.len();
    if k < 2 {
        return Err(Error::InvalidArgument("need at least two states".into()));
    }
    let total: u64 = counts.iter().sum();
    let expected = total as f64 / k as f64;
    if expected < 5.0 {
        return Err(Error::InvalidArgument(format!(
            "expected count {expected:.2} per state is below 5; collect more visits"
        )));
    }
    let stat: f64 = counts.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((k - 1) as f64).map_err(|e| Error::Numeric(e.to_string()))?;
    Ok(dist.sf(stat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng as _, SeedableRng};

    #[test]
    fn equal_counts_give_one() {
        assert_eq!(chi_square_uniformity(&[10, 10, 10]).unwrap(), 1.0);
    }

    #[test]
    fn concentrated_mass_gives_zero() {
        assert!(chi_square_uniformity(&[1000, 0, 0, 0]).unwrap() < 1e-12);
    }

    #[test]
    fn too_few_visits_is_an_error() {
        assert!(chi_square_uniformity(&[4, 4]).is_err());
        assert!(chi_square_uniformity(&[100]).is_err());
    }

    #[test]
    fn p_values_are_calibrated() {
        // Under the null the p-value is uniform: about 10% of runs fall
        // below 0.1 and the mean is about 0.5.
        let mut rng = crate::rng::Rng::seed_from_u64(11);
        let runs = 400;
        let mut below = 0;
        let mut sum = 0.0;
        for _ in 0..runs {
            let mut counts = [0u64; 8];
            for _ in 0..800 {
                counts[rng.random_range(0..8)] += 1;
            }
            let p = chi_square_uniformity(&counts).unwrap();
            sum += p;
            below += (p < 0.1) as u32;
        }
        let frac = below as f64 / runs as f64;
        assert!((0.05..0.16).contains(&frac), "{frac}");
        assert!((sum / runs as f64 - 0.5).abs() < 0.05);
    }
}
