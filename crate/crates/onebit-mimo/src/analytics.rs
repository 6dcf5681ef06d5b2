//! Closed-form error bounds for both schemes, plus exact conditional-error
//! oracles used to validate the Monte-Carlo engine.
//!
//! The bounds evaluate binomial mixtures of Gaussian tails in the log domain
//! and stay finite for group sizes up to 2^16. Values above 1 are reported
//! as-is and flagged vacuous rather than clamped, so regressions in the
//! formulas stay visible.

use std::f64::consts::{PI, SQRT_2};

use crate::channel::{transmit_deterministic, ChannelMatrix};
use crate::csi::{p_eps_majority, CsiMatrix, PilotConfig};
use crate::error::{Error, Result};
use crate::numeric::{binom_pmf, q_function as q_impl};
use crate::schemes::{decode_rx_combine, encode_identity_scaled, encode_tx_beamform,
                     DecoderVariant};
use crate::signal::{ComplexSample, QuadSymbol, Sign};

/// Gaussian tail Q(x) = ½·erfc(x/√2).
#[inline]
pub fn q_function(x: f64) -> f64 {
    q_impl(x)
}

/// Mean of |X| for X ~ N(0, 1/2): 1/√π ≈ 0.5641896.
#[inline]
pub fn mean_abs_halfgaussian() -> f64 {
    (1.0 / PI).sqrt()
}

/// Parameters echoed into a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundParams {
    pub power: Option<f64>,
    pub pilot_power: Option<f64>,
    pub pilots: Option<usize>,
    pub tx_antennas: usize,
    pub rx_antennas: usize,
    pub p_eps: f64,
}

/// A bound evaluation: the total, its per-term contributions, and the
/// parameters it was computed from. `value` always equals the sum of
/// `components`; values above 1 are valid but vacuous as probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub value: f64,
    pub components: Vec<f64>,
    pub vacuous: bool,
    pub params: BoundParams,
}

impl BoundReport {
    fn new(components: Vec<f64>, params: BoundParams) -> BoundReport {
        let value = components.iter().sum();
        BoundReport { value, components, vacuous: value > 1.0, params }
    }
}

fn check_power(power: f64) -> Result<()> {
    crate::error::require_positive("P", power)
}

fn check_counts(m: usize, n: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::ZeroCount { name: "M" });
    }
    if n == 0 {
        return Err(Error::ZeroCount { name: "N" });
    }
    Ok(())
}

/// Effective per-quadrature noise-plus-interference variance seen by one
/// receive antenna under the beamforming scheme:
/// σ² = (P(N−1) + N) / (2N).
pub fn scheme1_noise_var(power: f64, rx_antennas: usize) -> Result<f64> {
    check_power(power)?;
    if rx_antennas == 0 {
        return Err(Error::ZeroCount { name: "N" });
    }
    let n = rx_antennas as f64;
    Ok((power * (n - 1.0) + n) / (2.0 * n))
}

/// Effective per-quadrature variance of the non-aligned terms under the
/// combining scheme: σ² = (P/(2M))·((2M−1)/2) + 1/2.
pub fn scheme2_noise_var(power: f64, tx_antennas: usize) -> Result<f64> {
    check_power(power)?;
    if tx_antennas == 0 {
        return Err(Error::ZeroCount { name: "M" });
    }
    let m = tx_antennas as f64;
    Ok(power / (2.0 * m) * ((2.0 * m - 1.0) / 2.0) + 0.5)
}

/// Per-antenna deflection coefficient of the beamformed link:
/// β = √(P/M)·(1/√π)/σ.
pub fn scheme1_beta(power: f64, tx_antennas: usize, rx_antennas: usize) -> Result<f64> {
    check_counts(tx_antennas, rx_antennas)?;
    let sigma = scheme1_noise_var(power, rx_antennas)?.sqrt();
    Ok((power / tx_antennas as f64).sqrt() * mean_abs_halfgaussian() / sigma)
}

fn check_p_eps_unit(p_eps: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p_eps) {
        return Err(Error::PepsOutOfRange(p_eps));
    }
    Ok(())
}

/// Large-array union bound on the beamforming block error, taking the CSI
/// error probability directly:
/// 2N·Σ_k C(L,k)·p^k·(1−p)^{L−k}·Q(√(P/M)·(L−2k)·(1/√π)/σ) with L = M/N.
pub fn scheme1_union_bound_from_p_eps(
    power: f64,
    p_eps: f64,
    tx_antennas: usize,
    rx_antennas: usize,
) -> Result<BoundReport> {
    check_counts(tx_antennas, rx_antennas)?;
    check_p_eps_unit(p_eps)?;
    if !tx_antennas.is_multiple_of(rx_antennas) {
        return Err(Error::GroupSplit { m: tx_antennas, n: rx_antennas });
    }
    let sigma = scheme1_noise_var(power, rx_antennas)?.sqrt();
    let group_len = (tx_antennas / rx_antennas) as u64;
    let amp = (power / tx_antennas as f64).sqrt() * mean_abs_halfgaussian() / sigma;
    let factor = 2.0 * rx_antennas as f64;
    let components = (0..=group_len)
        .map(|k| {
            let arg = amp * (group_len as f64 - 2.0 * k as f64);
            factor * binom_pmf(group_len, k, p_eps) * q_function(arg)
        })
        .collect();
    Ok(BoundReport::new(
        components,
        BoundParams {
            power: Some(power),
            pilot_power: None,
            pilots: None,
            tx_antennas,
            rx_antennas,
            p_eps,
        },
    ))
}

/// [`scheme1_union_bound_from_p_eps`] with the CSI error probability taken
/// from the pilot configuration's majority rule.
pub fn scheme1_union_bound(
    power: f64,
    pilot: &PilotConfig,
    tx_antennas: usize,
    rx_antennas: usize,
) -> Result<BoundReport> {
    let p_eps = p_eps_majority(pilot);
    let mut report = scheme1_union_bound_from_p_eps(power, p_eps, tx_antennas, rx_antennas)?;
    report.params.pilot_power = Some(pilot.pilot_power());
    report.params.pilots = Some(pilot.pilots());
    Ok(report)
}

/// Chernoff-style bound: the head of the union bound with the Gaussian tail
/// replaced by exp(−β²(L−2k)²/2), plus the raw binomial tail past k = L/2.
pub fn scheme1_chernoff_bound_from_p_eps(
    power: f64,
    p_eps: f64,
    tx_antennas: usize,
    rx_antennas: usize,
) -> Result<BoundReport> {
    check_counts(tx_antennas, rx_antennas)?;
    check_p_eps_unit(p_eps)?;
    if !tx_antennas.is_multiple_of(rx_antennas) {
        return Err(Error::GroupSplit { m: tx_antennas, n: rx_antennas });
    }
    let beta = scheme1_beta(power, tx_antennas, rx_antennas)?;
    let group_len = (tx_antennas / rx_antennas) as u64;
    let factor = 2.0 * rx_antennas as f64;
    let split = group_len / 2;
    let components = (0..=group_len)
        .map(|k| {
            let weight = factor * binom_pmf(group_len, k, p_eps);
            if k <= split {
                let d = group_len as f64 - 2.0 * k as f64;
                weight * (-beta * beta * d * d / 2.0).exp()
            } else {
                weight
            }
        })
        .collect();
    Ok(BoundReport::new(
        components,
        BoundParams {
            power: Some(power),
            pilot_power: None,
            pilots: None,
            tx_antennas,
            rx_antennas,
            p_eps,
        },
    ))
}

/// [`scheme1_chernoff_bound_from_p_eps`] with p_eps from the pilot majority
/// rule.
pub fn scheme1_chernoff_bound(
    power: f64,
    pilot: &PilotConfig,
    tx_antennas: usize,
    rx_antennas: usize,
) -> Result<BoundReport> {
    let p_eps = p_eps_majority(pilot);
    let mut report = scheme1_chernoff_bound_from_p_eps(power, p_eps, tx_antennas, rx_antennas)?;
    report.params.pilot_power = Some(pilot.pilot_power());
    report.params.pilots = Some(pilot.pilots());
    Ok(report)
}

/// Probability that at least half of n CSI quadrature estimates are wrong:
/// Pr{Binomial(n, p_eps) ≥ ⌈n/2⌉}. The per-component kernel of the
/// combining scheme's asymptotic error.
pub fn binomial_majority_tail(p_eps: f64, n: usize) -> Result<f64> {
    check_p_eps_unit(p_eps)?;
    if n == 0 {
        return Err(Error::ZeroCount { name: "N" });
    }
    let n = n as u64;
    Ok(crate::numeric::binom_tail_geq(n, n.div_ceil(2), p_eps))
}

/// Asymptotic (N → ∞) block error of the combining scheme: the majority
/// kernel unioned over the 2M codeword components. Requires p_eps < 1/2.
pub fn scheme2_asymptotic_error(
    p_eps: f64,
    rx_antennas: usize,
    tx_antennas: usize,
) -> Result<BoundReport> {
    if !(0.0..0.5).contains(&p_eps) {
        return Err(Error::PepsOutOfRange(p_eps));
    }
    check_counts(tx_antennas, rx_antennas)?;
    let n = rx_antennas as u64;
    let threshold = n.div_ceil(2);
    let factor = 2.0 * tx_antennas as f64;
    let components = (threshold..=n)
        .map(|j| factor * binom_pmf(n, j, p_eps))
        .collect();
    Ok(BoundReport::new(
        components,
        BoundParams {
            power: None,
            pilot_power: None,
            pilots: None,
            tx_antennas,
            rx_antennas,
            p_eps,
        },
    ))
}

/// Effective transmit array size after CSI errors: M(1 − 2·p_eps).
pub fn effective_tx_antennas(tx_antennas: usize, p_eps: f64) -> f64 {
    tx_antennas as f64 * (1.0 - 2.0 * p_eps)
}

fn zeros(n: usize) -> Vec<ComplexSample> {
    vec![ComplexSample::new(0.0, 0.0); n]
}

fn aligned_error(signal: f64, target: Sign) -> f64 {
    // Noise per quadrature is N(0, 1/2); the quantized output disagrees with
    // `target` with probability Q(aligned·√2).
    q_function(target.as_f64() * signal * SQRT_2)
}

/// Exact block error of the beamforming scheme conditioned on (H, G, s):
/// each receive quadrature is a deterministic signal plus N(0, 1/2) noise,
/// so the block success factorizes over the 2N quadratures.
pub fn exact_cond_error_scheme1(
    h: &ChannelMatrix,
    g: &CsiMatrix,
    s: &[QuadSymbol],
    power: f64,
) -> Result<f64> {
    if h.rows() != g.rows() || h.cols() != g.cols() {
        return Err(Error::DimensionMismatch(format!(
            "channel is {}x{}, CSI is {}x{}",
            h.rows(),
            h.cols(),
            g.rows(),
            g.cols()
        )));
    }
    let x = encode_tx_beamform(s, g)?;
    let cu = transmit_deterministic(h, &x, power, &zeros(h.rows()))?;
    let mut success = 1.0;
    for (n, y) in cu.y.iter().enumerate() {
        success *= 1.0 - aligned_error(y.re, s[n].re_sign());
        success *= 1.0 - aligned_error(y.im, s[n].im_sign());
    }
    Ok(1.0 - success)
}

/// Conditional distribution of the quantized observations for the combining
/// scheme: Pr{z quadrature = +1} per antenna, split by quadrature.
struct QuantizedLaw {
    plus_re: Vec<f64>,
    plus_im: Vec<f64>,
}

fn quantized_law(
    h: &ChannelMatrix,
    s: &[QuadSymbol],
    power: f64,
) -> Result<QuantizedLaw> {
    let x = encode_identity_scaled(s);
    let cu = transmit_deterministic(h, &x, power, &zeros(h.rows()))?;
    let plus_re = cu.y.iter().map(|y| q_function(-y.re * SQRT_2)).collect();
    let plus_im = cu.y.iter().map(|y| q_function(-y.im * SQRT_2)).collect();
    Ok(QuantizedLaw { plus_re, plus_im })
}

fn check_scheme2_dims(h: &ChannelMatrix, g: &CsiMatrix, s: &[QuadSymbol]) -> Result<()> {
    if h.rows() != g.rows() || h.cols() != g.cols() {
        return Err(Error::DimensionMismatch(format!(
            "channel is {}x{}, CSI is {}x{}",
            h.rows(),
            h.cols(),
            g.rows(),
            g.cols()
        )));
    }
    if s.len() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "codeword length {} does not match {} transmit antennas",
            s.len(),
            h.cols()
        )));
    }
    Ok(())
}

/// Largest N for which the real-combining enumeration (2·2^N patterns) runs.
pub const ENUM_BUDGET_REAL: usize = 20;
/// Largest N for which the matched-filter enumeration (2^(2N) patterns) runs.
pub const ENUM_BUDGET_MATCHED: usize = 11;

/// Exact block error of the combining scheme conditioned on (H, G, s),
/// by enumerating quantized observation patterns.
///
/// Under real combining the real and imaginary decoding families depend on
/// disjoint quadratures, so two 2^N enumerations suffice; the matched filter
/// mixes them and needs the joint 2^(2N) space. Budgets:
/// [`ENUM_BUDGET_REAL`] and [`ENUM_BUDGET_MATCHED`]. The O(N²) per-component
/// convolution in [`exact_percomp_errors_scheme2`] has no such limit.
pub fn exact_cond_error_scheme2(
    h: &ChannelMatrix,
    g: &CsiMatrix,
    s: &[QuadSymbol],
    power: f64,
    variant: DecoderVariant,
) -> Result<f64> {
    check_scheme2_dims(h, g, s)?;
    let n = h.rows();
    let law = quantized_law(h, s, power)?;
    match variant {
        DecoderVariant::RealCombining => {
            if n > ENUM_BUDGET_REAL {
                return Err(Error::EnumerationBudget { n, max: ENUM_BUDGET_REAL });
            }
            let re_ok = enumerate_family(&law.plus_re, g, s, variant, Quadrature::Re)?;
            let im_ok = enumerate_family(&law.plus_im, g, s, variant, Quadrature::Im)?;
            Ok(1.0 - re_ok * im_ok)
        }
        DecoderVariant::MatchedFilter => {
            if n > ENUM_BUDGET_MATCHED {
                return Err(Error::EnumerationBudget { n, max: ENUM_BUDGET_MATCHED });
            }
            Ok(1.0 - enumerate_joint(&law, g, s)?)
        }
    }
}

#[derive(Clone, Copy)]
enum Quadrature {
    Re,
    Im,
}

/// Probability that every component of one quadrature family decodes
/// correctly under real combining, where that family depends on a single
/// N-bit sign pattern.
fn enumerate_family(
    plus: &[f64],
    g: &CsiMatrix,
    s: &[QuadSymbol],
    variant: DecoderVariant,
    quad: Quadrature,
) -> Result<f64> {
    let n = g.rows();
    let mut total = 0.0;
    for pattern in 0u64..(1u64 << n) {
        let mut prob = 1.0;
        let z: Vec<QuadSymbol> = (0..n)
            .map(|i| {
                let sign = if (pattern >> i) & 1 == 1 { Sign::Plus } else { Sign::Minus };
                prob *= if sign == Sign::Plus { plus[i] } else { 1.0 - plus[i] };
                // The untested quadrature is irrelevant to this family.
                match quad {
                    Quadrature::Re => QuadSymbol::new(sign, Sign::Plus),
                    Quadrature::Im => QuadSymbol::new(Sign::Plus, sign),
                }
            })
            .collect();
        if prob == 0.0 {
            continue;
        }
        let decoded = decode_rx_combine(&z, g, variant)?;
        let all_ok = decoded.iter().zip(s).all(|(d, t)| match quad {
            Quadrature::Re => d.re_sign() == t.re_sign(),
            Quadrature::Im => d.im_sign() == t.im_sign(),
        });
        if all_ok {
            total += prob;
        }
    }
    Ok(total)
}

/// Probability that the whole codeword decodes correctly under the matched
/// filter, enumerating the joint 2^(2N) quadrature pattern space.
fn enumerate_joint(law: &QuantizedLaw, g: &CsiMatrix, s: &[QuadSymbol]) -> Result<f64> {
    let n = g.rows();
    let mut total = 0.0;
    for pattern in 0u64..(1u64 << (2 * n)) {
        let mut prob = 1.0;
        let z: Vec<QuadSymbol> = (0..n)
            .map(|i| {
                let re = if (pattern >> i) & 1 == 1 { Sign::Plus } else { Sign::Minus };
                let im = if (pattern >> (n + i)) & 1 == 1 { Sign::Plus } else { Sign::Minus };
                prob *= if re == Sign::Plus { law.plus_re[i] } else { 1.0 - law.plus_re[i] };
                prob *= if im == Sign::Plus { law.plus_im[i] } else { 1.0 - law.plus_im[i] };
                QuadSymbol::new(re, im)
            })
            .collect();
        if prob == 0.0 {
            continue;
        }
        let decoded = decode_rx_combine(&z, g, DecoderVariant::MatchedFilter)?;
        if decoded == s {
            total += prob;
        }
    }
    Ok(total)
}

/// Tail Pr{S ≥ threshold} of a Poisson-binomial count S over independent
/// indicators with the given success probabilities; O(n²) convolution.
fn poisson_binomial_tail(probs: &[f64], threshold: usize) -> f64 {
    let mut dist = vec![0.0; probs.len() + 1];
    dist[0] = 1.0;
    for (i, &p) in probs.iter().enumerate() {
        for j in (0..=i + 1).rev() {
            let stay = if j <= i { dist[j] * (1.0 - p) } else { 0.0 };
            let step = if j > 0 { dist[j - 1] * p } else { 0.0 };
            dist[j] = stay + step;
        }
    }
    dist[threshold.min(dist.len() - 1)..].iter().sum::<f64>().min(1.0)
}

/// Exact per-component error probabilities of the combining scheme
/// conditioned on (H, G, s), in codeword order [re0, im0, re1, im1, ...].
///
/// Each combining sum is a signed count of independent quantized quadratures;
/// its law is an O(N²) convolution, exact for any N.
pub fn exact_percomp_errors_scheme2(
    h: &ChannelMatrix,
    g: &CsiMatrix,
    s: &[QuadSymbol],
    power: f64,
    variant: DecoderVariant,
) -> Result<Vec<f64>> {
    check_scheme2_dims(h, g, s)?;
    let n = h.rows();
    let law = quantized_law(h, s, power)?;

    // Pr{coeff·z = +1} for a ±1 coefficient applied to a quantized quadrature.
    let term = |plus: f64, coeff: i32| if coeff == 1 { plus } else { 1.0 - plus };

    let mut errors = Vec::with_capacity(2 * s.len());
    for (m, sym) in s.iter().enumerate() {
        let mut probs_re = Vec::with_capacity(2 * n);
        let mut probs_im = Vec::with_capacity(2 * n);
        for row in 0..n {
            let gq = g.at(row, m);
            match variant {
                DecoderVariant::RealCombining => {
                    probs_re.push(term(law.plus_re[row], gq.re()));
                    probs_im.push(term(law.plus_im[row], gq.re()));
                }
                DecoderVariant::MatchedFilter => {
                    probs_re.push(term(law.plus_re[row], gq.re()));
                    probs_re.push(term(law.plus_im[row], gq.im()));
                    probs_im.push(term(law.plus_im[row], gq.re()));
                    probs_im.push(term(law.plus_re[row], -gq.im()));
                }
            }
        }
        for (probs, target) in [(&probs_re, sym.re_sign()), (&probs_im, sym.im_sign())] {
            // The sum is nonnegative (decodes +1) iff at least half the
            // terms are +1.
            let threshold = probs.len().div_ceil(2);
            let plus_prob = poisson_binomial_tail(probs, threshold);
            errors.push(match target {
                Sign::Plus => 1.0 - plus_prob,
                Sign::Minus => plus_prob,
            });
        }
    }
    Ok(errors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::draw_channel;
    use crate::signal::{ComplexMatrix, RngStream, Role};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn noise_variances() {
        assert_relative_eq!(scheme1_noise_var(10.0, 4).unwrap(), 4.25);
        assert_relative_eq!(scheme1_noise_var(1.0, 1).unwrap(), 0.5);
        assert_relative_eq!(scheme1_noise_var(2.0, 2).unwrap(), 1.0);
        assert_relative_eq!(scheme2_noise_var(1.0, 1).unwrap(), 0.75);
        assert_relative_eq!(scheme2_noise_var(2.0, 2).unwrap(), 1.25);
        assert_relative_eq!(scheme2_noise_var(1e-12, 3).unwrap(), 0.5, epsilon = 1e-12);
        assert!(scheme1_noise_var(0.0, 2).is_err());
        assert!(scheme2_noise_var(-1.0, 2).is_err());
    }

    #[test]
    fn half_gaussian_mean() {
        assert_relative_eq!(mean_abs_halfgaussian(), 0.564_189_583_547_756_3, max_relative = 1e-14);
        assert_relative_eq!(
            mean_abs_halfgaussian() * mean_abs_halfgaussian(),
            1.0 / PI,
            max_relative = 1e-14
        );
    }

    // Statistical oracle: sample mean of |N(0, 1/2)| at 1e6 draws.
    #[test]
    fn half_gaussian_mean_matches_samples() {
        use rand::Rng;
        use rand_distr::StandardNormal;
        let mut rng = RngStream::new(41).substream(0, Role::Channel);
        let n = 1_000_000;
        let sum: f64 = (0..n)
            .map(|_| {
                let v: f64 = rng.sample(StandardNormal);
                (v * std::f64::consts::FRAC_1_SQRT_2).abs()
            })
            .sum();
        let mean = sum / n as f64;
        let se = ((0.5 - 1.0 / PI) / n as f64).sqrt();
        assert!((mean - mean_abs_halfgaussian()).abs() < 4.0 * se);
    }

    #[test]
    fn beta_reference_values() {
        assert_relative_eq!(
            scheme1_beta(1.0, 4, 2).unwrap(),
            0.32573500793527995,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            scheme1_beta(4.0, 4, 1).unwrap(),
            0.797_884_560_802_865_4,
            max_relative = 1e-13
        );
        // Strictly decreasing in M at fixed P, N.
        let mut prev = f64::INFINITY;
        for m in [2usize, 4, 8, 16, 64, 256] {
            let b = scheme1_beta(1.0, m, 2).unwrap();
            assert!(b < prev);
            prev = b;
        }
    }

    #[test]
    fn union_bound_reference_values() {
        // Single-term evaluation with p_eps = 0; vacuous (exceeds 1).
        let report = scheme1_union_bound_from_p_eps(1.0, 0.0, 4, 2).unwrap();
        assert_relative_eq!(report.value, 1.0294862529440315, max_relative = 1e-12);
        assert!(report.vacuous);
        assert_relative_eq!(
            report.value,
            report.components.iter().sum::<f64>(),
            max_relative = 1e-15
        );

        // Direct-summation oracle at P=1, P_p=1, K=1 (p_eps = 1/4), M=64, N=2.
        let pilot = PilotConfig::new(1.0, 1).unwrap();
        let report = scheme1_union_bound(1.0, &pilot, 64, 2).unwrap();
        assert_relative_eq!(report.value, 0.453_061_760_230_017_6, max_relative = 1e-12);
        assert!(!report.vacuous);
        assert_eq!(report.params.pilots, Some(1));
    }

    #[test]
    fn union_bound_vanishes_in_m() {
        let mut prev = f64::INFINITY;
        for m in [4usize, 16, 64, 256, 1024, 4096] {
            let v = scheme1_union_bound_from_p_eps(1.0, 0.0, m, 2).unwrap().value;
            assert!(v <= prev);
            prev = v;
        }
        assert!(prev < 1e-12);
    }

    #[test]
    fn union_bound_monotone_in_m_with_csi_errors() {
        let pilot = PilotConfig::new(1.0, 1).unwrap();
        let mut prev = f64::INFINITY;
        for exp in 1..=16 {
            let m = 2usize << exp;
            let v = scheme1_union_bound(1.0, &pilot, m, 2).unwrap().value;
            assert!(v.is_finite() && v >= 0.0);
            assert!(v <= prev, "bound must not increase with M (M = {m})");
            prev = v;
        }
    }

    #[test]
    fn chernoff_bound_monotone_in_m() {
        let pilot = PilotConfig::new(1.0, 1).unwrap();
        let mut prev = f64::INFINITY;
        for exp in 1..=16 {
            let m = 2usize << exp;
            let v = scheme1_chernoff_bound(1.0, &pilot, m, 2).unwrap().value;
            assert!(v.is_finite() && v >= 0.0);
            assert!(v <= prev, "bound must not increase with M (M = {m})");
            prev = v;
        }
    }

    #[test]
    fn union_bound_rejects_bad_split() {
        assert_eq!(
            scheme1_union_bound_from_p_eps(1.0, 0.0, 10, 4).unwrap_err(),
            Error::GroupSplit { m: 10, n: 4 }
        );
    }

    #[test]
    fn chernoff_reference_values() {
        // Only k = 0 survives at p_eps = 0: 2N·exp(−β²L²/2).
        let report = scheme1_chernoff_bound_from_p_eps(1.0, 0.0, 4, 2).unwrap();
        let beta = scheme1_beta(1.0, 4, 2).unwrap();
        assert_relative_eq!(
            report.value,
            4.0 * (-beta * beta * 4.0 / 2.0).exp(),
            max_relative = 1e-13
        );

        // Direct-summation oracle at P=1, P_p=1, K=1, M=16, N=2.
        let pilot = PilotConfig::new(1.0, 1).unwrap();
        let report = scheme1_chernoff_bound(1.0, &pilot, 16, 2).unwrap();
        assert_relative_eq!(report.value, 3.084371520083124, max_relative = 1e-12);
        assert!(report.vacuous);
    }

    // exp(−x²/2) dominates Q(x) for x ≥ 0, and the tail keeps full binomial
    // weight, so the Chernoff form dominates the union bound term by term.
    #[test]
    fn chernoff_dominates_union_bound() {
        for (power, p_eps, m, n) in
            [(1.0, 0.25, 64, 2), (4.0, 0.1, 32, 4), (0.5, 0.0, 16, 1), (2.0, 0.45, 128, 2)]
        {
            let union = scheme1_union_bound_from_p_eps(power, p_eps, m, n).unwrap();
            let chern = scheme1_chernoff_bound_from_p_eps(power, p_eps, m, n).unwrap();
            assert!(
                chern.value >= union.value,
                "chernoff {} < union {} at P={power}, p={p_eps}, M={m}, N={n}",
                chern.value,
                union.value
            );
        }
    }

    #[test]
    fn bounds_stay_finite_at_large_group_sizes() {
        let l = 1usize << 16;
        for p_eps in [0.0, 0.25, 0.49] {
            let u = scheme1_union_bound_from_p_eps(1.0, p_eps, l, 1).unwrap();
            let c = scheme1_chernoff_bound_from_p_eps(1.0, p_eps, l, 1).unwrap();
            assert!(u.value.is_finite() && u.value >= 0.0);
            assert!(c.value.is_finite() && c.value >= 0.0);
        }
    }

    #[test]
    fn asymptotic_error_reference_values() {
        // Binomial-tail oracle: terms j = 2, 3, 4 of Binomial(4, 1/4).
        let report = scheme2_asymptotic_error(0.25, 4, 1).unwrap();
        assert_relative_eq!(report.value, 0.5234375, max_relative = 1e-13);

        assert_eq!(scheme2_asymptotic_error(0.0, 4, 3).unwrap().value, 0.0);
        assert!(scheme2_asymptotic_error(0.5, 4, 1).is_err());
        assert!(scheme2_asymptotic_error(-0.1, 4, 1).is_err());

        let mut prev = f64::INFINITY;
        for n in [4usize, 16, 64, 256, 1024] {
            let v = scheme2_asymptotic_error(0.25, n, 2).unwrap().value;
            assert!(v < prev);
            prev = v;
        }
        assert!(prev < 1e-10);
    }

    // Exhaustive enumeration over CSI-error patterns, N ≤ 20.
    #[test]
    fn asymptotic_error_matches_enumeration() {
        for n in [1usize, 2, 3, 5, 8, 13, 20] {
            for p in [0.25f64, 1.0 / 6.0, 0.49] {
                let mut kernel = 0.0;
                for pattern in 0u64..(1 << n) {
                    let wrong = pattern.count_ones() as usize;
                    if wrong >= n.div_ceil(2) {
                        kernel += p.powi(wrong as i32) * (1.0 - p).powi((n - wrong) as i32);
                    }
                }
                assert_relative_eq!(
                    binomial_majority_tail(p, n).unwrap(),
                    kernel,
                    max_relative = 1e-10
                );
                let report = scheme2_asymptotic_error(p, n, 3).unwrap();
                assert_relative_eq!(report.value, 6.0 * kernel, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn effective_antennas() {
        assert_relative_eq!(effective_tx_antennas(100, 0.25), 50.0);
        assert_relative_eq!(effective_tx_antennas(64, 0.0), 64.0);
        assert_relative_eq!(effective_tx_antennas(64, 1.0 / 6.0), 64.0 * 2.0 / 3.0);
    }

    fn q(re: i32, im: i32) -> QuadSymbol {
        QuadSymbol::new(Sign::of_int(re as i64), Sign::of_int(im as i64))
    }

    #[test]
    fn scheme1_oracle_single_antenna() {
        let h = ComplexMatrix::from_vec(1, 1, vec![Complex64::new(1.0, 1.0)]).unwrap();
        let g = CsiMatrix::from_fn(1, 1, |_, _| q(1, 1));
        // Closed form: both aligned signals are 1, error = 1 − (1 − Q(√2))².
        let p = exact_cond_error_scheme1(&h, &g, &[q(1, 1)], 1.0).unwrap();
        assert_relative_eq!(p, 0.151_113_446_915_623, max_relative = 1e-12);

        // Sign-flipped CSI: aligned signals negative, block error
        // 1 − Q(√2)² > 3/4.
        let g_flipped = CsiMatrix::from_fn(1, 1, |_, _| q(-1, -1));
        let p = exact_cond_error_scheme1(&h, &g_flipped, &[q(1, 1)], 1.0).unwrap();
        assert_relative_eq!(p, 0.993_814_239_865_337_9, max_relative = 1e-12);
        assert!(p > 0.5);
    }

    // With one receive antenna there is no inter-group interference, so the
    // aligned signals are sums of |h| terms, strictly positive, and the
    // block error vanishes as power grows.
    #[test]
    fn scheme1_oracle_vanishes_at_high_power() {
        let mut rng = RngStream::new(3).substream(0, Role::Channel);
        let h = draw_channel(&mut rng, 1, 8);
        let g = CsiMatrix::quantize(&h);
        let s = [q(1, -1)];
        let p = exact_cond_error_scheme1(&h, &g, &s, 1e8).unwrap();
        assert!(p < 1e-10, "exact CSI at huge power should be error-free, got {p}");
    }

    #[test]
    fn scheme2_oracle_single_antenna() {
        // h = 1, g = 1+j, s arbitrary: per-quadrature error Q(1), block
        // error 1 − (1 − Q(1))².
        let h = ComplexMatrix::from_vec(1, 1, vec![Complex64::new(1.0, 0.0)]).unwrap();
        let g = CsiMatrix::from_fn(1, 1, |_, _| q(1, 1));
        let s = [q(1, 1)];
        let p = exact_cond_error_scheme2(&h, &g, &s, 1.0, DecoderVariant::RealCombining).unwrap();
        assert_relative_eq!(p, 0.292_139_018_262_859, max_relative = 1e-12);

        let percomp =
            exact_percomp_errors_scheme2(&h, &g, &s, 1.0, DecoderVariant::RealCombining).unwrap();
        assert_relative_eq!(percomp[0], 0.15865525393145705, max_relative = 1e-12);
        assert_relative_eq!(percomp[1], 0.15865525393145705, max_relative = 1e-12);
    }

    // Real positive channel gains, no interference (M = 1): the quantized
    // observations are deterministic copies of s at huge power, and both
    // decoders recover s = 1+j, so every per-antenna error probability is 0
    // and the block error is exactly 0.
    #[test]
    fn scheme2_oracle_error_free_limit() {
        let h = ComplexMatrix::from_fn(4, 1, |r, _| Complex64::new(1.0 + r as f64, 0.0));
        let g = CsiMatrix::quantize(&h);
        let s = [q(1, 1)];
        for variant in [DecoderVariant::RealCombining, DecoderVariant::MatchedFilter] {
            let p = exact_cond_error_scheme2(&h, &g, &s, 1e12, variant).unwrap();
            assert_eq!(p, 0.0, "variant {variant:?} gave {p}");
            let percomp = exact_percomp_errors_scheme2(&h, &g, &s, 1e12, variant).unwrap();
            assert!(percomp.iter().all(|&e| e == 0.0));
        }
    }

    // The convolution marginals must agree with the enumeration joint law.
    #[test]
    fn scheme2_percomp_matches_enumeration_marginals() {
        let stream = RngStream::new(77);
        for trial in 0..20u64 {
            let mut rng = stream.substream(trial, Role::Channel);
            let n = 1 + (trial as usize % 7);
            let m = 1 + (trial as usize % 3);
            let h = draw_channel(&mut rng, n, m);
            let g = CsiMatrix::from_fn(n, m, |_, _| QuadSymbol::random(&mut rng));
            let s: Vec<QuadSymbol> = (0..m).map(|_| QuadSymbol::random(&mut rng)).collect();
            for variant in [DecoderVariant::RealCombining, DecoderVariant::MatchedFilter] {
                let percomp = exact_percomp_errors_scheme2(&h, &g, &s, 1.3, variant).unwrap();
                let marginals = enumeration_marginals(&h, &g, &s, 1.3, variant);
                for (a, b) in percomp.iter().zip(&marginals) {
                    assert_relative_eq!(a, b, max_relative = 1e-9, epsilon = 1e-12);
                }
                // The block error never exceeds the union of the marginals.
                let block = exact_cond_error_scheme2(&h, &g, &s, 1.3, variant).unwrap();
                assert!(block <= percomp.iter().sum::<f64>() + 1e-12);
                assert!(block >= percomp.iter().cloned().fold(0.0, f64::max) - 1e-12);
            }
        }
    }

    fn enumeration_marginals(
        h: &ChannelMatrix,
        g: &CsiMatrix,
        s: &[QuadSymbol],
        power: f64,
        variant: DecoderVariant,
    ) -> Vec<f64> {
        let n = h.rows();
        let law = quantized_law(h, s, power).unwrap();
        let mut errors = vec![0.0; 2 * s.len()];
        for pattern in 0u64..(1 << (2 * n)) {
            let mut prob = 1.0;
            let z: Vec<QuadSymbol> = (0..n)
                .map(|i| {
                    let re = if (pattern >> i) & 1 == 1 { Sign::Plus } else { Sign::Minus };
                    let im =
                        if (pattern >> (n + i)) & 1 == 1 { Sign::Plus } else { Sign::Minus };
                    prob *= if re == Sign::Plus { law.plus_re[i] } else { 1.0 - law.plus_re[i] };
                    prob *= if im == Sign::Plus { law.plus_im[i] } else { 1.0 - law.plus_im[i] };
                    QuadSymbol::new(re, im)
                })
                .collect();
            let decoded = decode_rx_combine(&z, g, variant).unwrap();
            for (m, (d, t)) in decoded.iter().zip(s).enumerate() {
                if d.re_sign() != t.re_sign() {
                    errors[2 * m] += prob;
                }
                if d.im_sign() != t.im_sign() {
                    errors[2 * m + 1] += prob;
                }
            }
        }
        errors
    }

    #[test]
    fn enumeration_budget_enforced() {
        let h = ComplexMatrix::from_fn(12, 1, |_, _| Complex64::new(1.0, 0.0));
        let g = CsiMatrix::from_fn(12, 1, |_, _| q(1, 1));
        let s = [q(1, 1)];
        assert!(matches!(
            exact_cond_error_scheme2(&h, &g, &s, 1.0, DecoderVariant::MatchedFilter),
            Err(Error::EnumerationBudget { .. })
        ));
        // Real combining still runs at N = 12, and the convolution at any N.
        assert!(exact_cond_error_scheme2(&h, &g, &s, 1.0, DecoderVariant::RealCombining).is_ok());
        assert!(
            exact_percomp_errors_scheme2(&h, &g, &s, 1.0, DecoderVariant::MatchedFilter).is_ok()
        );
    }
}
