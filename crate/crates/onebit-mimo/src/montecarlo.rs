//! Seeded trial engine: end-to-end and conditional Monte-Carlo runs with
//! error counters, Wilson confidence intervals, and a per-bit mutual
//! information estimate.
//!
//! Determinism contract: every counter is a function of (config, seed) only.
//! Trials draw from per-(trial, role) RNG substreams and are reduced by
//! integer addition, so worker count and scheduling cannot change results.

use rayon::prelude::*;

use crate::channel::{draw_channel, transmit, transmit_deterministic, ChannelMatrix};
use crate::csi::{estimate_csi, p_eps_majority, p_eps_majority_exact, CsiMatrix, PilotConfig};
use crate::error::{Error, Result};
use crate::schemes::{decode_rx_combine, decode_rx_identity, encode_identity_scaled,
                     encode_tx_beamform, DecoderVariant, SchemeKind};
use crate::signal::{bits_to_codeword, csign, BitVector, ComplexSample, QuadSymbol, RngStream,
                    Role, TxSymbol};

/// Which end of the link consumes the 1-bit CSI.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsiSide {
    Transmitter,
    Receiver,
}

/// Non-physical switches for invariant tests: disable data noise and/or
/// replace the pilot estimate with error-free quantized CSI. Both default
/// to off and are never part of a physical scenario.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub noise_off: bool,
    pub exact_csi: bool,
}

/// Full description of one simulated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    pub scheme: SchemeKind,
    pub decoder: DecoderVariant,
    pub tx_antennas: usize,
    pub rx_antennas: usize,
    pub power: f64,
    pub pilot: PilotConfig,
    pub trials: u64,
    pub seed: u64,
    pub diagnostics: Diagnostics,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tx_antennas == 0 {
            return Err(Error::ZeroCount { name: "M" });
        }
        if self.rx_antennas == 0 {
            return Err(Error::ZeroCount { name: "N" });
        }
        crate::error::require_positive("P", self.power)?;
        if self.trials == 0 {
            return Err(Error::ZeroCount { name: "trials" });
        }
        if self.scheme == SchemeKind::TxBeamform && !self.tx_antennas.is_multiple_of(self.rx_antennas) {
            return Err(Error::GroupSplit { m: self.tx_antennas, n: self.rx_antennas });
        }
        Ok(())
    }

    /// Codeword length: N symbols towards a massive transmit array,
    /// M symbols towards a massive receive array.
    pub fn codeword_len(&self) -> usize {
        match self.scheme {
            SchemeKind::TxBeamform => self.rx_antennas,
            SchemeKind::RxCombine => self.tx_antennas,
        }
    }

    pub fn csi_side(&self) -> CsiSide {
        match self.scheme {
            SchemeKind::TxBeamform => CsiSide::Transmitter,
            SchemeKind::RxCombine => CsiSide::Receiver,
        }
    }
}

/// Scenario echo carried by every result.
#[derive(Debug, Clone, PartialEq)]
pub struct RunMetadata {
    pub config: SystemConfig,
    /// Set when K is even: the analytic majority error then counts split
    /// votes fully as errors and upper-bounds the simulator's tie rule.
    pub even_pilot_majority_is_bound: bool,
}

/// Counters and derived statistics from one batch of trials.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub trials: u64,
    pub block_errors: u64,
    /// Per-quadrature error counts in codeword order [re0, im0, re1, ...].
    pub quad_errors: Vec<u64>,
    pub block_error_rate: f64,
    pub bit_error_rate: f64,
    /// Wilson 95% half-width of the block error rate.
    pub block_ci95_halfwidth: f64,
    /// Wilson 95% half-width of the per-bit error rate.
    pub bit_ci95_halfwidth: f64,
    /// Per-bit mutual information summed over codeword positions, in bits
    /// per channel use. `None` for conditional runs, where the transmitted
    /// message is fixed rather than uniform.
    pub mutual_information_bits: Option<f64>,
    pub meta: RunMetadata,
}

/// Wilson score interval for an event probability at confidence level z.
pub fn wilson_interval(events: u64, trials: u64, z: f64) -> (f64, f64) {
    assert!(trials > 0, "Wilson interval needs at least one trial");
    let n = trials as f64;
    let p = events as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = z / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

/// Half-width of the 95% Wilson interval.
pub fn wilson_halfwidth95(events: u64, trials: u64) -> f64 {
    let (lo, hi) = wilson_interval(events, trials, 1.96);
    (hi - lo) / 2.0
}

/// Binary entropy in bits; 0 at the endpoints.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Per-trial integer counters. Merging is commutative and associative, so
/// any rayon split yields identical totals.
struct Acc {
    block_errors: u64,
    quad_errors: Vec<u64>,
    /// Joint (transmitted, decoded) bit counts per position,
    /// indexed tx*2 + rx.
    joint: Vec<[u64; 4]>,
}

impl Acc {
    fn new(width: usize) -> Acc {
        Acc { block_errors: 0, quad_errors: vec![0; width], joint: vec![[0; 4]; width] }
    }

    fn merge(mut self, other: Acc) -> Acc {
        self.block_errors += other.block_errors;
        for (a, b) in self.quad_errors.iter_mut().zip(&other.quad_errors) {
            *a += b;
        }
        for (a, b) in self.joint.iter_mut().zip(&other.joint) {
            for (cell, add) in a.iter_mut().zip(b) {
                *cell += add;
            }
        }
        self
    }

    fn record(&mut self, sent: &[QuadSymbol], decoded: &[QuadSymbol]) {
        let mut any = false;
        for (i, (tx, rx)) in sent.iter().zip(decoded).enumerate() {
            let pairs = [(2 * i, tx.re_sign(), rx.re_sign()), (2 * i + 1, tx.im_sign(), rx.im_sign())];
            for (idx, txs, rxs) in pairs {
                self.joint[idx][(txs.bit() as usize) * 2 + (rxs.bit() as usize)] += 1;
                if txs != rxs {
                    self.quad_errors[idx] += 1;
                    any = true;
                }
            }
        }
        if any {
            self.block_errors += 1;
        }
    }
}

/// Per-bit mutual information with the input entropy taken as exact.
///
/// Messages are uniform by construction, so H(X_i) = 1 bit; the conditional
/// entropy H(X_i | Y_i) is the plug-in estimate from the joint counts. An
/// error-free run therefore reports exactly 1 bit per position, and Fano's
/// inequality I_i >= 1 - H_b(p_i) holds for the empirical quantities.
fn mutual_information_bits(joint: &[[u64; 4]], trials: u64) -> f64 {
    let n = trials as f64;
    joint
        .iter()
        .map(|cell| {
            let mut cond = 0.0;
            for y in 0..2 {
                let n_y = cell[y] + cell[2 + y];
                if n_y == 0 {
                    continue;
                }
                let p_one = cell[2 + y] as f64 / n_y as f64;
                cond += (n_y as f64 / n) * binary_entropy(p_one);
            }
            1.0 - cond
        })
        .sum()
}

fn finish(cfg: &SystemConfig, acc: Acc, with_mi: bool) -> TrialStats {
    let trials = cfg.trials;
    let width = acc.quad_errors.len() as u64;
    let bit_errors: u64 = acc.quad_errors.iter().sum();
    let total_bits = trials * width;
    debug_assert!(acc
        .joint
        .iter()
        .zip(&acc.quad_errors)
        .all(|(cell, &err)| cell[1] + cell[2] == err));
    let mi = with_mi.then(|| mutual_information_bits(&acc.joint, trials));
    TrialStats {
        trials,
        block_errors: acc.block_errors,
        block_error_rate: acc.block_errors as f64 / trials as f64,
        bit_error_rate: bit_errors as f64 / total_bits as f64,
        block_ci95_halfwidth: wilson_halfwidth95(acc.block_errors, trials),
        bit_ci95_halfwidth: wilson_halfwidth95(bit_errors, total_bits),
        quad_errors: acc.quad_errors,
        mutual_information_bits: mi,
        meta: RunMetadata {
            config: cfg.clone(),
            even_pilot_majority_is_bound: cfg.pilot.even_majority_is_bound(),
        },
    }
}

fn encode(cfg: &SystemConfig, s: &[QuadSymbol], g: &CsiMatrix) -> Vec<TxSymbol> {
    match cfg.scheme {
        SchemeKind::TxBeamform => {
            encode_tx_beamform(s, g).expect("config validated before trials")
        }
        SchemeKind::RxCombine => encode_identity_scaled(s),
    }
}

fn decode(cfg: &SystemConfig, z: &[QuadSymbol], g: &CsiMatrix) -> Vec<QuadSymbol> {
    match cfg.scheme {
        SchemeKind::TxBeamform => decode_rx_identity(z),
        SchemeKind::RxCombine => {
            decode_rx_combine(z, g, cfg.decoder).expect("config validated before trials")
        }
    }
}

fn run_one(cfg: &SystemConfig, stream: &RngStream, trial: u64, acc: &mut Acc) {
    let h = draw_channel(
        &mut stream.substream(trial, Role::Channel),
        cfg.rx_antennas,
        cfg.tx_antennas,
    );
    let g = if cfg.diagnostics.exact_csi {
        CsiMatrix::quantize(&h)
    } else {
        estimate_csi(&h, &cfg.pilot, &mut stream.substream(trial, Role::PilotNoise))
    };
    let bits = BitVector::random(
        &mut stream.substream(trial, Role::Message),
        2 * cfg.codeword_len(),
    );
    let s = bits_to_codeword(&bits).expect("message length is even");
    let x = encode(cfg, &s, &g);
    let cu = if cfg.diagnostics.noise_off {
        let w = vec![ComplexSample::new(0.0, 0.0); cfg.rx_antennas];
        transmit_deterministic(&h, &x, cfg.power, &w)
    } else {
        transmit(&h, &x, cfg.power, &mut stream.substream(trial, Role::DataNoise))
    }
    .expect("config validated before trials");
    let decoded = decode(cfg, &cu.z, &g);
    acc.record(&s, &decoded);
}

/// Runs the configured number of end-to-end trials: fresh channel, fresh
/// pilot-based CSI, uniform random message, one channel use, decode.
/// Results are bit-identical for a given (config, seed) at any worker count.
pub fn run_trials(cfg: &SystemConfig) -> Result<TrialStats> {
    cfg.validate()?;
    let width = 2 * cfg.codeword_len();
    let stream = RngStream::new(cfg.seed);
    let acc = (0..cfg.trials)
        .into_par_iter()
        .fold(
            || Acc::new(width),
            |mut acc, trial| {
                run_one(cfg, &stream, trial, &mut acc);
                acc
            },
        )
        .reduce(|| Acc::new(width), Acc::merge);
    Ok(finish(cfg, acc, true))
}

/// Same engine restricted to noise-only randomness: channel, CSI, and
/// codeword are fixed by the caller. Estimates the conditional error
/// probability matched by the exact analytics oracles.
pub fn run_conditional_trials(
    cfg: &SystemConfig,
    h: &ChannelMatrix,
    g: &CsiMatrix,
    s: &[QuadSymbol],
) -> Result<TrialStats> {
    cfg.validate()?;
    if h.rows() != cfg.rx_antennas || h.cols() != cfg.tx_antennas {
        return Err(Error::DimensionMismatch(format!(
            "channel is {}x{}, config expects {}x{}",
            h.rows(),
            h.cols(),
            cfg.rx_antennas,
            cfg.tx_antennas
        )));
    }
    if g.rows() != h.rows() || g.cols() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "CSI is {}x{}, channel is {}x{}",
            g.rows(),
            g.cols(),
            h.rows(),
            h.cols()
        )));
    }
    if s.len() != cfg.codeword_len() {
        return Err(Error::DimensionMismatch(format!(
            "codeword length {} does not match scheme length {}",
            s.len(),
            cfg.codeword_len()
        )));
    }
    let width = 2 * cfg.codeword_len();
    let stream = RngStream::new(cfg.seed);
    let x = encode(cfg, s, g);
    let acc = (0..cfg.trials)
        .into_par_iter()
        .fold(
            || Acc::new(width),
            |mut acc, trial| {
                let cu = if cfg.diagnostics.noise_off {
                    let w = vec![ComplexSample::new(0.0, 0.0); cfg.rx_antennas];
                    transmit_deterministic(h, &x, cfg.power, &w)
                } else {
                    transmit(h, &x, cfg.power, &mut stream.substream(trial, Role::DataNoise))
                }
                .expect("config validated before trials");
                let decoded = decode(cfg, &cu.z, g);
                acc.record(s, &decoded);
                acc
            },
        )
        .reduce(|| Acc::new(width), Acc::merge);
    Ok(finish(cfg, acc, false))
}

/// [`run_trials`] under a name that makes the rate probe explicit; the MI
/// field of the result is always populated.
pub fn estimate_mutual_information(cfg: &SystemConfig) -> Result<TrialStats> {
    run_trials(cfg)
}

/// Measured per-quadrature CSI error rate against the majority-rule formula.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotErrorEstimate {
    /// Scalar channels estimated; each contributes two quadrature
    /// observations.
    pub samples: u64,
    pub observations: u64,
    pub errors: u64,
    pub rate: f64,
    pub ci95_halfwidth: f64,
    /// Independence-form majority probability (binomial in the single-pilot
    /// error). Matches the estimator only at K = 1.
    pub analytic: f64,
    /// Conditional-law majority probability; matches the estimator for all
    /// odd K.
    pub analytic_exact: f64,
    pub even_pilot_majority_is_bound: bool,
}

/// Estimates the per-quadrature CSI error rate over fresh scalar channels.
pub fn estimate_pilot_error(pilot: &PilotConfig, samples: u64, seed: u64) -> PilotErrorEstimate {
    assert!(samples > 0, "need at least one sample");
    let stream = RngStream::new(seed);
    let errors: u64 = (0..samples)
        .into_par_iter()
        .map(|t| {
            let h = draw_channel(&mut stream.substream(t, Role::Channel), 1, 1);
            let truth = csign(h.at(0, 0));
            let g = estimate_csi(&h, pilot, &mut stream.substream(t, Role::PilotNoise));
            let est = g.at(0, 0);
            u64::from(est.re_sign() != truth.re_sign())
                + u64::from(est.im_sign() != truth.im_sign())
        })
        .sum();
    let observations = 2 * samples;
    PilotErrorEstimate {
        samples,
        observations,
        errors,
        rate: errors as f64 / observations as f64,
        ci95_halfwidth: wilson_halfwidth95(errors, observations),
        analytic: p_eps_majority(pilot),
        analytic_exact: p_eps_majority_exact(pilot),
        even_pilot_majority_is_bound: pilot.even_majority_is_bound(),
    }
}
