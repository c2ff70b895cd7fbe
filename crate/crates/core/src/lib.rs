//! Numerical laboratory for Möbius correlations of analytic skew products
//! `T(x, y) = (x + α, y + h(x))` on the 2-torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: Möbius sieve, factorisation, Dirichlet character groups and
//!   pretentious distances.
//! * [`cfrac`]: continued fractions of α with exact convergents, interval
//!   certified circle norms and Liouville-type constructions.
//! * [`fourier`]: analytic circle functions as finite Fourier tables, the
//!   resonant frequency set, the resonant/non-resonant split and the
//!   continuous coboundary of the non-resonant part.
//! * [`skew`]: orbits of the skew product, the cocycle `H(n, x)` computed
//!   along two independent routes, derived prime-pair systems and the
//!   conjugation removing the non-resonant part.
//! * [`estimates`]: numerical witnesses for the cocycle deviation bound,
//!   rotation resonance and almost periodicity.
//! * [`correlate`]: Davenport sums, Möbius–orbit averages, two-prime
//!   correlations, block and character decompositions, short-interval
//!   averages.
//!
//! Shared building blocks ([`Phase`], compensated and tree reductions) live in
//! [`phase`] and [`sum`].

pub mod arith;
pub mod cfrac;
pub mod correlate;
pub mod error;
pub mod estimates;
pub mod fourier;
pub mod phase;
pub mod skew;
pub mod sum;

pub use arith::{
    character_group, conductor, divisors, euler_phi, factorize, m_nonpretentious, mobius_sieve, pretentious_distance,
    ArithmeticFunction, CharacterGroup, DirichletCharacter, Mobius, MobiusTable, MobiusTwist, PretentiousConfig,
};
pub use cfrac::{
    circle_norm, construct_liouville, expand_cf, qnorm_check, resonant_indices, ContinuedFraction, GrowthRule,
    IrrationalSpec, QnormCheck, QnormStatus,
};
pub use correlate::{CorrelationSeries, PeriodicObservable};
pub use error::{Error, Result};
pub use estimates::{DeviationReport, EstimateConfig};
pub use fourier::{AnalyticCircleFunction, ResonantSet};
pub use phase::{CertifiedPhase, Phase};
pub use skew::{Observable, SkewProduct, TorusPoint};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
