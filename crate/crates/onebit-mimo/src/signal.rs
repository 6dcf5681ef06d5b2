//! Quantized-signal primitives shared by every other module: quadrature
//! signs, the complex sign quantizer, unit-energy transmit symbols,
//! bit/codeword maps, and seeded per-trial RNG substreams.

use std::f64::consts::FRAC_1_SQRT_2;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// A complex baseband sample. Each quadrature (real/imaginary part) carries
/// one bit after quantization.
pub type ComplexSample = Complex64;

/// A quadrature sign, the single bit a 1-bit converter keeps per real
/// dimension. The boundary maps to `Plus`: sign(0) = +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// Sign of a real value with the shared tie rule sign(0) = +1.
    #[inline]
    pub fn of(v: f64) -> Sign {
        if v >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    /// Sign of an integer accumulator with the same tie rule.
    #[inline]
    pub fn of_int(v: i64) -> Sign {
        if v >= 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    #[inline]
    pub fn value(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    #[inline]
    pub fn as_f64(self) -> f64 {
        f64::from(self.value())
    }

    /// Bit convention used by the codeword maps: 1 ↔ +1, 0 ↔ −1.
    #[inline]
    pub fn from_bit(b: bool) -> Sign {
        if b {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    #[inline]
    pub fn bit(self) -> bool {
        self == Sign::Plus
    }

    #[inline]
    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One symbol of the quantized alphabet {±1 ± j}, stored as a pair of signs
/// so decoder sums stay in exact integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadSymbol {
    re: Sign,
    im: Sign,
}

impl QuadSymbol {
    /// All four symbols, in bit order 00, 01, 10, 11.
    pub const ALPHABET: [QuadSymbol; 4] = [
        QuadSymbol { re: Sign::Minus, im: Sign::Minus },
        QuadSymbol { re: Sign::Minus, im: Sign::Plus },
        QuadSymbol { re: Sign::Plus, im: Sign::Minus },
        QuadSymbol { re: Sign::Plus, im: Sign::Plus },
    ];

    #[inline]
    pub fn new(re: Sign, im: Sign) -> QuadSymbol {
        QuadSymbol { re, im }
    }

    #[inline]
    pub fn re_sign(self) -> Sign {
        self.re
    }

    #[inline]
    pub fn im_sign(self) -> Sign {
        self.im
    }

    /// Real part as an exact integer, +1 or −1.
    #[inline]
    pub fn re(self) -> i32 {
        self.re.value()
    }

    /// Imaginary part as an exact integer, +1 or −1.
    #[inline]
    pub fn im(self) -> i32 {
        self.im.value()
    }

    #[inline]
    pub fn value(self) -> ComplexSample {
        Complex64::new(self.re.as_f64(), self.im.as_f64())
    }

    /// Uniform draw over the alphabet.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> QuadSymbol {
        QuadSymbol::new(Sign::from_bit(rng.random()), Sign::from_bit(rng.random()))
    }
}

/// Complex sign quantizer: keeps the sign of each quadrature, with the
/// boundary convention sign(0) = +1 on both axes.
#[inline]
pub fn csign(c: ComplexSample) -> QuadSymbol {
    QuadSymbol::new(Sign::of(c.re), Sign::of(c.im))
}

/// One unit-energy transmit symbol.
///
/// Constructors enforce the two alphabets in use: axis symbols {±1, ±j}
/// (one quadrature silent) and diagonal symbols (±1 ± j)/√2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TxSymbol {
    re: f64,
    im: f64,
}

impl TxSymbol {
    /// Symbol ±1 + 0j: the imaginary carrier is silent.
    #[inline]
    pub fn real_axis(s: Sign) -> TxSymbol {
        TxSymbol { re: s.as_f64(), im: 0.0 }
    }

    /// Symbol 0 ± j: the real carrier is silent.
    #[inline]
    pub fn imag_axis(s: Sign) -> TxSymbol {
        TxSymbol { re: 0.0, im: s.as_f64() }
    }

    /// Symbol q/√2 with q in {±1 ± j}; both quadratures active.
    #[inline]
    pub fn diagonal(q: QuadSymbol) -> TxSymbol {
        TxSymbol {
            re: q.re.as_f64() * FRAC_1_SQRT_2,
            im: q.im.as_f64() * FRAC_1_SQRT_2,
        }
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.re
    }

    #[inline]
    pub fn im(self) -> f64 {
        self.im
    }

    #[inline]
    pub fn value(self) -> ComplexSample {
        Complex64::new(self.re, self.im)
    }

    /// Squared magnitude; exactly 1 for every constructor.
    #[inline]
    pub fn energy(self) -> f64 {
        self.re * self.re + self.im * self.im
    }
}

/// An even-length message as raw bits, indexing the codebook.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitVector(Vec<bool>);

impl BitVector {
    pub fn new(bits: Vec<bool>) -> BitVector {
        BitVector(bits)
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, len: usize) -> BitVector {
        BitVector((0..len).map(|_| rng.random()).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }
}

impl FromStr for BitVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<BitVector> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidBitChar(other)),
            })
            .collect::<Result<Vec<bool>>>()
            .map(BitVector)
    }
}

/// Maps bit pairs to symbols: symbol i has re = 2·b[2i] − 1, im = 2·b[2i+1] − 1.
/// Rejects odd-length input; inverse of [`codeword_to_bits`].
pub fn bits_to_codeword(bits: &BitVector) -> Result<Vec<QuadSymbol>> {
    if !bits.len().is_multiple_of(2) {
        return Err(Error::OddBitLength(bits.len()));
    }
    Ok(bits
        .bits()
        .chunks_exact(2)
        .map(|pair| QuadSymbol::new(Sign::from_bit(pair[0]), Sign::from_bit(pair[1])))
        .collect())
}

/// Inverse of [`bits_to_codeword`].
pub fn codeword_to_bits(symbols: &[QuadSymbol]) -> BitVector {
    let mut bits = Vec::with_capacity(symbols.len() * 2);
    for s in symbols {
        bits.push(s.re_sign().bit());
        bits.push(s.im_sign().bit());
    }
    BitVector(bits)
}

/// Roles keep the channel, pilot-noise, data-noise, and message draws on
/// statistically independent substreams within one trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Channel = 0,
    PilotNoise = 1,
    DataNoise = 2,
    Message = 3,
}

const ROLE_COUNT: u64 = 4;

/// Seeded factory of per-(trial, role) RNG substreams.
///
/// Substreams are counter-based: each (seed, trial, role) selects a distinct
/// ChaCha stream, so draws are identical no matter how trials are scheduled
/// across workers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    seed: u64,
}

impl RngStream {
    pub fn new(seed: u64) -> RngStream {
        RngStream { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn substream(&self, trial: u64, role: Role) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(trial.wrapping_mul(ROLE_COUNT).wrapping_add(role as u64));
        rng
    }
}

/// One draw of a zero-mean circularly-symmetric complex Gaussian with unit
/// total variance (1/2 per quadrature).
#[inline]
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> ComplexSample {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Dense row-major complex matrix; the shared container for channel and
/// noise matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexSample>,
}

impl ComplexMatrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<ComplexSample>) -> Result<ComplexMatrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix data length {} does not match {rows}x{cols}",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_fn<F: FnMut(usize, usize) -> ComplexSample>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> ComplexMatrix {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        ComplexMatrix { rows, cols, data }
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
    pub fn at(&self, row: usize, col: usize) -> ComplexSample {
        self.data[row * self.cols + col]
    }

    pub fn data(&self) -> &[ComplexSample] {
        &self.data
    }
}

/// Samples a rows×cols matrix of i.i.d. unit-variance complex Gaussians
/// (zero mean, variance 1/2 per quadrature). Entry order is row-major, so a
/// given RNG state yields a bit-identical matrix.
pub fn sample_complex_gaussian<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
) -> ComplexMatrix {
    let data = (0..rows * cols).map(|_| complex_gaussian(rng)).collect();
    ComplexMatrix { rows, cols, data }
}
