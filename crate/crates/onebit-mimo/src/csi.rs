//! 1-bit channel state information: K-pilot majority-vote estimation and the
//! closed-form single-pilot and majority error probabilities.

use rand::Rng;

use crate::channel::ChannelMatrix;
use crate::error::{Error, Result};
use crate::numeric::binom_tail_geq;
use crate::signal::{complex_gaussian, csign, ComplexMatrix, QuadSymbol, Sign};

/// N×M matrix of quantized channel estimates, every entry in {±1 ± j}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsiMatrix {
    rows: usize,
    cols: usize,
    data: Vec<QuadSymbol>,
}

impl CsiMatrix {
    pub fn from_fn<F: FnMut(usize, usize) -> QuadSymbol>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> CsiMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        CsiMatrix { rows, cols, data }
    }

    /// Noiseless quantization G = csign(H); the exact-CSI diagnostic.
    pub fn quantize(h: &ChannelMatrix) -> CsiMatrix {
        CsiMatrix::from_fn(h.rows(), h.cols(), |r, c| csign(h.at(r, c)))
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn at(&self, row: usize, col: usize) -> QuadSymbol {
        self.data[row * self.cols + col]
    }
}

/// Pilot parameters: pilot power P_p > 0 and the number of pilot rounds
/// K >= 1 per antenna.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PilotConfig {
    pilot_power: f64,
    pilots: usize,
}

impl PilotConfig {
    pub fn new(pilot_power: f64, pilots: usize) -> Result<PilotConfig> {
        crate::error::require_positive("P_p", pilot_power)?;
        if pilots == 0 {
            return Err(Error::ZeroCount { name: "K" });
        }
        Ok(PilotConfig { pilot_power, pilots })
    }

    #[inline]
    pub fn pilot_power(&self) -> f64 {
        self.pilot_power
    }

    #[inline]
    pub fn pilots(&self) -> usize {
        self.pilots
    }

    /// With even K the analytic majority formula counts split votes fully as
    /// errors, while the simulator's sign(0) = +1 rule decides them; the
    /// formula is then an upper bound rather than exact.
    #[inline]
    pub fn even_majority_is_bound(&self) -> bool {
        self.pilots.is_multiple_of(2)
    }
}

/// Majority vote over per-pilot quantized observations of one matrix entry.
/// Vote sums are exact integers; a zero sum resolves to +1.
fn majority(votes_re: i64, votes_im: i64) -> QuadSymbol {
    QuadSymbol::new(Sign::of_int(votes_re), Sign::of_int(votes_im))
}

/// K-pilot 1-bit CSI estimate G = csign(Σ_k csign(√P_p·H + W_k)), with
/// fresh unit-variance complex Gaussian noise per pilot round. Pilots are
/// per-antenna orthogonal, so each entry is estimated independently.
pub fn estimate_csi<R: Rng + ?Sized>(
    h: &ChannelMatrix,
    cfg: &PilotConfig,
    rng: &mut R,
) -> CsiMatrix {
    let entries = h.rows() * h.cols();
    let amp = cfg.pilot_power.sqrt();
    let mut votes = vec![(0i64, 0i64); entries];
    for _ in 0..cfg.pilots {
        for (idx, vote) in votes.iter_mut().enumerate() {
            let w = complex_gaussian(rng);
            let obs = h.data()[idx] * amp + w;
            let q = csign(obs);
            vote.0 += i64::from(q.re());
            vote.1 += i64::from(q.im());
        }
    }
    let mut it = votes.into_iter();
    CsiMatrix::from_fn(h.rows(), h.cols(), |_, _| {
        let (re, im) = it.next().expect("vote per entry");
        majority(re, im)
    })
}

/// Same estimator with caller-supplied pilot noise matrices, one per round;
/// test plumbing mirroring `transmit_deterministic`.
pub fn estimate_csi_deterministic(
    h: &ChannelMatrix,
    cfg: &PilotConfig,
    pilot_noise: &[ComplexMatrix],
) -> Result<CsiMatrix> {
    if pilot_noise.len() != cfg.pilots {
        return Err(Error::DimensionMismatch(format!(
            "expected {} pilot noise matrices, got {}",
            cfg.pilots,
            pilot_noise.len()
        )));
    }
    for w in pilot_noise {
        if w.rows() != h.rows() || w.cols() != h.cols() {
            return Err(Error::DimensionMismatch(format!(
                "pilot noise is {}x{}, channel is {}x{}",
                w.rows(),
                w.cols(),
                h.rows(),
                h.cols()
            )));
        }
    }
    let amp = cfg.pilot_power.sqrt();
    Ok(CsiMatrix::from_fn(h.rows(), h.cols(), |r, c| {
        let mut votes = (0i64, 0i64);
        for w in pilot_noise {
            let q = csign(h.at(r, c) * amp + w.at(r, c));
            votes.0 += i64::from(q.re());
            votes.1 += i64::from(q.im());
        }
        majority(votes.0, votes.1)
    }))
}

/// Probability that a single pilot's quantized sign disagrees with the true
/// channel sign on one quadrature: 1/2 − arctan(√P_p)/π.
pub fn p_eps_single(pilot_power: f64) -> Result<f64> {
    crate::error::require_positive("P_p", pilot_power)?;
    Ok(0.5 - pilot_power.sqrt().atan() / std::f64::consts::PI)
}

/// Majority-rule CSI error probability over K pilots,
/// Pr{Binomial(K, p) >= ceil(K/2)} with p from [`p_eps_single`].
///
/// This closed form treats the K per-pilot errors as independent. In the
/// estimator they share one channel draw and are only conditionally
/// independent given |h|, so for K >= 3 this understates the measured error;
/// [`p_eps_majority_exact`] integrates the conditional law and matches the
/// simulator. The two coincide at K = 1.
///
/// For even K the tie term j = K/2 is included, making the sum an upper
/// bound on the tie-breaking simulator in that respect.
pub fn p_eps_majority(cfg: &PilotConfig) -> f64 {
    let p = p_eps_single(cfg.pilot_power).expect("PilotConfig keeps P_p > 0");
    let k = cfg.pilots as u64;
    binom_tail_geq(k, k.div_ceil(2), p)
}

/// Exact majority-rule CSI error of the physical estimator: the conditional
/// per-pilot error q(u) = Q(√P_p·|u|) is binomially combined given the
/// channel draw and then averaged over it,
/// E_u[Pr{Binomial(K, q(u)) >= ceil(K/2)}] for u ~ N(0, 1).
///
/// Evaluated by composite Simpson quadrature; accurate to ~1e-12 for K up to
/// a few hundred. At P_p = 1 this gives 3/16 for K = 3 and 5/32 for K = 5.
pub fn p_eps_majority_exact(cfg: &PilotConfig) -> f64 {
    let k = cfg.pilots as u64;
    let threshold = k.div_ceil(2);
    let amp = cfg.pilot_power.sqrt();
    let integrand = |u: f64| -> f64 {
        let q = crate::numeric::q_function(amp * u);
        let density = (-0.5 * u * u).exp() / (2.0 * std::f64::consts::PI).sqrt();
        2.0 * density * binom_tail_geq(k, threshold, q)
    };
    // The integrand decays like exp(-u^2/2); [0, 12] leaves < 1e-30 outside.
    let (a, b, steps) = (0.0f64, 12.0f64, 16_384usize);
    let h = (b - a) / steps as f64;
    let mut sum = integrand(a) + integrand(b);
    for i in 1..steps {
        let u = a + i as f64 * h;
        sum += integrand(u) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    sum * h / 3.0
}
