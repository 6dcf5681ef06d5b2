//! Link-level simulator and analytic error bounds for massive MIMO links in
//! which transmit symbols, receive symbols, and channel state information
//! are all quantized to one bit per quadrature.
//!
//! The crate covers two single-shot transmission schemes — sign beamforming
//! from a massive transmit array and sign combining at a massive receive
//! array — together with K-pilot majority-vote CSI estimation, closed-form
//! error bounds, exact conditional-error oracles, and a deterministic,
//! embarrassingly parallel Monte-Carlo engine.
//!
//! Reproducibility: every random draw comes from a counter-based substream
//! keyed by (seed, trial, role), and all trial reductions are exact integer
//! sums, so results are bit-identical at any worker count.

pub mod analytics;
pub mod channel;
pub mod csi;
mod error;
pub mod montecarlo;
mod numeric;
pub mod schemes;
pub mod signal;

pub use error::{Error, Result};

pub use channel::{draw_channel, transmit, transmit_deterministic, ChannelMatrix, ChannelUse};
pub use csi::{estimate_csi, p_eps_majority, p_eps_majority_exact, p_eps_single, CsiMatrix, PilotConfig};
pub use montecarlo::{
    estimate_mutual_information, estimate_pilot_error, run_conditional_trials, run_trials,
    Diagnostics, PilotErrorEstimate, SystemConfig, TrialStats,
};
pub use schemes::{
    decode_rx_combine, decode_rx_identity, encode_identity_scaled, encode_tx_beamform,
    DecoderVariant, SchemeKind,
};
pub use signal::{
    bits_to_codeword, codeword_to_bits, csign, BitVector, ComplexMatrix, ComplexSample,
    QuadSymbol, RngStream, Role, Sign, TxSymbol,
};
