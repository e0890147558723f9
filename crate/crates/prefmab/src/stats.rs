//! Closed forms for the means of clipped Gaussians. The simulator clips
//! every Gaussian draw, so regret accounting must use the post-clipping
//! means; these are what estimators actually converge to.

pub fn normal_pdf(z: f64) -> f64 {
    (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

pub fn normal_cdf(z: f64) -> f64 {
    0.5 * libm::erfc(-z / std::f64::consts::SQRT_2)
}

/// E[max(lo, X)] for X ~ Normal(mean, sd^2).
pub fn clipped_mean_lower(mean: f64, sd: f64, lo: f64) -> f64 {
    if sd == 0.0 {
        return mean.max(lo);
    }
    let a = (lo - mean) / sd;
    lo * normal_cdf(a) + mean * (1.0 - normal_cdf(a)) + sd * normal_pdf(a)
}

/// E[min(hi, max(lo, X))] for X ~ Normal(mean, sd^2).
pub fn clipped_mean_interval(mean: f64, sd: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(lo <= hi);
    if sd == 0.0 {
        return mean.clamp(lo, hi);
    }
    let a = (lo - mean) / sd;
    let b = (hi - mean) / sd;
    lo * normal_cdf(a)
        + hi * (1.0 - normal_cdf(b))
        + mean * (normal_cdf(b) - normal_cdf(a))
        + sd * (normal_pdf(a) - normal_pdf(b))
}
