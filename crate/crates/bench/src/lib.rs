//! Benchmark fixtures shared by the criterion targets.

use skewlab_core::{AnalyticCircleFunction, IrrationalSpec, SkewProduct};

/// Golden-ratio rotation with a seeded analytic h of `m_max` modes.
pub fn golden_system(m_max: usize) -> SkewProduct {
    let h = AnalyticCircleFunction::random_analytic(1, 1.0, m_max).expect("valid parameters");
    SkewProduct::from_spec(&IrrationalSpec::golden(), h).expect("golden ratio expands")
}
