//! Shared numeric kernels: Gaussian tail probability and log-domain
//! binomial terms that stay finite for group sizes up to 2^16 and beyond.

/// Gaussian tail Q(x) = Pr{N(0,1) > x}, via the complementary error function.
#[inline]
pub(crate) fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Binomial pmf C(n,k) p^k (1-p)^(n-k), evaluated in the log domain.
/// Far-tail terms underflow harmlessly to 0 instead of producing NaN.
pub(crate) fn binom_pmf(n: u64, k: u64, p: f64) -> f64 {
    debug_assert!(k <= n);
    debug_assert!((0.0..=1.0).contains(&p));
    if p == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if k == n { 1.0 } else { 0.0 };
    }
    // Pure powers avoid the lgamma round-off when the coefficient is 1.
    if k == 0 {
        return (1.0 - p).powi(n.min(i32::MAX as u64) as i32);
    }
    if k == n {
        return p.powi(n.min(i32::MAX as u64) as i32);
    }
    let (nf, kf) = (n as f64, k as f64);
    let ln_choose = libm::lgamma(nf + 1.0) - libm::lgamma(kf + 1.0) - libm::lgamma(nf - kf + 1.0);
    (ln_choose + kf * p.ln() + (nf - kf) * (1.0 - p).ln()).exp()
}

/// Upper binomial tail Pr{Binomial(n, p) >= k0}.
pub(crate) fn binom_tail_geq(n: u64, k0: u64, p: f64) -> f64 {
    (k0..=n).map(|k| binom_pmf(n, k, p)).sum()
}
