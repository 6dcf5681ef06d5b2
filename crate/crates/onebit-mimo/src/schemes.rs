//! Encoders and decoders for the two single-shot transmission schemes:
//! sign beamforming from a massive transmit array, and sign combining at a
//! massive receive array.

use crate::csi::CsiMatrix;
use crate::error::{Error, Result};
use crate::signal::{QuadSymbol, Sign, TxSymbol};

/// Which side holds the massive array (and therefore the CSI).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchemeKind {
    /// Massive transmit array; CSI at the transmitter, none at the receiver.
    /// Requires N | M.
    TxBeamform,
    /// Massive receive array; CSI at the receiver, none at the transmitter.
    RxCombine,
}

/// Combining rule used by the receive-side decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderVariant {
    /// Correlate both receive quadratures against the real part of the CSI
    /// column: ŝ_m^R = sign(Σ g^R z^R), ŝ_m^I = sign(Σ g^R z^I).
    RealCombining,
    /// Full conjugate correlation Gᴴz: ŝ_m^R = sign(Σ (g^R z^R + g^I z^I)),
    /// ŝ_m^I = sign(Σ (g^R z^I − g^I z^R)).
    MatchedFilter,
}

fn group_size(m: usize, n: usize) -> Result<usize> {
    if n == 0 || m == 0 {
        return Err(Error::ZeroCount { name: if n == 0 { "N" } else { "M" } });
    }
    if !m.is_multiple_of(n) {
        return Err(Error::GroupSplit { m, n });
    }
    Ok(m / n)
}

/// Sign beamformer: antennas are split into N consecutive groups of
/// L = M/N; antenna m in group n emits
/// [x^R; x^I] = ½·[[g^R, g^I], [−g^I, g^R]]·[s^R; s^I] using that group's
/// CSI entry. Every output has exactly one live quadrature of magnitude 1.
pub fn encode_tx_beamform(s: &[QuadSymbol], g: &CsiMatrix) -> Result<Vec<TxSymbol>> {
    let n = g.rows();
    let m = g.cols();
    if s.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "codeword length {} does not match {} CSI rows",
            s.len(),
            n
        )));
    }
    let group_len = group_size(m, n)?;

    let mut x = Vec::with_capacity(m);
    for antenna in 0..m {
        let group = antenna / group_len;
        let gq = g.at(group, antenna);
        let sq = s[group];
        // Twice the quadrature values; each lands in {-2, 0, 2} and exactly
        // one of the pair is zero.
        let re2 = gq.re() * sq.re() + gq.im() * sq.im();
        let im2 = -gq.im() * sq.re() + gq.re() * sq.im();
        debug_assert!((re2 == 0) != (im2 == 0));
        x.push(if im2 == 0 {
            TxSymbol::real_axis(Sign::of_int(i64::from(re2 / 2)))
        } else {
            TxSymbol::imag_axis(Sign::of_int(i64::from(im2 / 2)))
        });
    }
    Ok(x)
}

/// Receiver for the beamforming scheme: no CSI, the quantized observation is
/// the codeword estimate. The block error event is exactly {z ≠ s}.
pub fn decode_rx_identity(z: &[QuadSymbol]) -> Vec<QuadSymbol> {
    z.to_vec()
}

/// Transmitter for the combining scheme: x = s/√2, unit energy per symbol.
pub fn encode_identity_scaled(s: &[QuadSymbol]) -> Vec<TxSymbol> {
    s.iter().map(|&q| TxSymbol::diagonal(q)).collect()
}

/// Receive-side sign combiner. All sums are exact integer arithmetic and a
/// zero sum resolves to +1, matching the quantizer's tie rule.
pub fn decode_rx_combine(
    z: &[QuadSymbol],
    g: &CsiMatrix,
    variant: DecoderVariant,
) -> Result<Vec<QuadSymbol>> {
    let n = g.rows();
    if z.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "observation length {} does not match {} CSI rows",
            z.len(),
            n
        )));
    }
    let mut decoded = Vec::with_capacity(g.cols());
    for m in 0..g.cols() {
        let mut sum_re = 0i64;
        let mut sum_im = 0i64;
        for (row, zq) in z.iter().enumerate() {
            let gq = g.at(row, m);
            match variant {
                DecoderVariant::RealCombining => {
                    sum_re += i64::from(gq.re() * zq.re());
                    sum_im += i64::from(gq.re() * zq.im());
                }
                DecoderVariant::MatchedFilter => {
                    sum_re += i64::from(gq.re() * zq.re() + gq.im() * zq.im());
                    sum_im += i64::from(gq.re() * zq.im() - gq.im() * zq.re());
                }
            }
        }
        decoded.push(QuadSymbol::new(Sign::of_int(sum_re), Sign::of_int(sum_im)));
    }
    Ok(decoded)
}
