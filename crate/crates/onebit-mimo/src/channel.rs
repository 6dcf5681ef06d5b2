//! Forward model of one channel use: power-scaled Rayleigh mixing, additive
//! white Gaussian noise, and 1-bit quantization of every receive quadrature.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::signal::{csign, complex_gaussian, sample_complex_gaussian, ComplexMatrix,
                    ComplexSample, QuadSymbol, TxSymbol};

/// N×M channel matrix H with i.i.d. zero-mean unit-variance complex Gaussian
/// entries (flat Rayleigh fading).
pub type ChannelMatrix = ComplexMatrix;

/// Draws a fresh N×M Rayleigh channel realization.
pub fn draw_channel<R: Rng + ?Sized>(rng: &mut R, rx: usize, tx: usize) -> ChannelMatrix {
    sample_complex_gaussian(rng, rx, tx)
}

/// Result of one channel use: the pre-quantization receive vector y and its
/// quantized image z = csign(y).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelUse {
    pub y: Vec<ComplexSample>,
    pub z: Vec<QuadSymbol>,
}

fn check_transmit(h: &ChannelMatrix, x: &[TxSymbol], power: f64) -> Result<()> {
    if x.len() != h.cols() {
        return Err(Error::DimensionMismatch(format!(
            "transmit vector length {} does not match {} channel columns",
            x.len(),
            h.cols()
        )));
    }
    crate::error::require_positive("P", power)
}

fn quantized_use(h: &ChannelMatrix, x: &[TxSymbol], power: f64, w: &[ComplexSample]) -> ChannelUse {
    let scale = (power / h.cols() as f64).sqrt();
    let mut y = Vec::with_capacity(h.rows());
    for (n, wn) in w.iter().enumerate() {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, xm) in x.iter().enumerate() {
            acc += h.at(n, m) * xm.value();
        }
        y.push(acc * scale + wn);
    }
    let z = y.iter().map(|&v| csign(v)).collect();
    ChannelUse { y, z }
}

/// One channel use y = sqrt(P/M)·H·x + w with freshly drawn noise
/// (unit total variance per receive antenna), quantized elementwise.
pub fn transmit<R: Rng + ?Sized>(
    h: &ChannelMatrix,
    x: &[TxSymbol],
    power: f64,
    rng: &mut R,
) -> Result<ChannelUse> {
    check_transmit(h, x, power)?;
    let w: Vec<ComplexSample> = (0..h.rows()).map(|_| complex_gaussian(rng)).collect();
    Ok(quantized_use(h, x, power, &w))
}

/// Same forward model with caller-supplied noise; used by the conditional
/// oracles and by noise-off diagnostics (w = 0).
pub fn transmit_deterministic(
    h: &ChannelMatrix,
    x: &[TxSymbol],
    power: f64,
    w: &[ComplexSample],
) -> Result<ChannelUse> {
    check_transmit(h, x, power)?;
    if w.len() != h.rows() {
        return Err(Error::DimensionMismatch(format!(
            "noise vector length {} does not match {} receive antennas",
            w.len(),
            h.rows()
        )));
    }
    Ok(quantized_use(h, x, power, w))
}
