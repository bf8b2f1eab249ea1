//! Number-theoretic kernels for checking, numerically, each step of the
//! Hardy–Littlewood argument that bounds an exceptional real zero of a
//! Dirichlet L-function.
//!
//! Modules, bottom-up:
//!
//! * [`primes`]: segmented sieve, `π(x)`, `π(x; q, a)`, residue spectra, `Li x`
//!   and the exceptional integral.
//! * [`characters`]: totient, Jacobi symbol, real primitive characters and
//!   Gauss sums.
//! * [`expsums`]: geometric, Ramanujan and twisted Gauss sums; prime
//!   exponential sums and their second moment.
//! * [`goldbach`]: `r(N)`, the singular series, the twin-prime constant.
//! * [`lfunc`]: Hurwitz zeta, `L(s, χ)` on the real line, zero scans.
//! * [`chain`]: the first part, second part and synthesis of the argument.

// `!(a > b)` is used on purpose: it rejects NaN along with the failing case.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod chain;
pub mod characters;
pub mod error;
pub mod expsums;
pub mod goldbach;
pub mod lfunc;
pub mod numeric;
pub mod primes;

pub use chain::{BetaBound, ChainConfig, ChainReport, Constants, FirstPart, SecondPart, Synthesis};
pub use characters::{gauss_sum, is_odd_squarefree, jacobi, real_character, totient, RealCharacter};
pub use error::{Error, Result};
pub use expsums::{ComplexValue, MomentReport};
pub use goldbach::{GoldbachCounts, GoldbachRecord, Lemma1Record, SingularSeriesValue, TwinPrimeConstant};
pub use lfunc::ZeroScanResult;
pub use primes::{sieve, PrimeTable, ResidueSpectrum};
