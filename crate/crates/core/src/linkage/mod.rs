//! From a linked pair (Koszul K, DGΓ resolution M of P/(K:f)) to the homotopy
//! map X: comparison maps α, β, the decomposition f = r·β₀(1) + k₁(σ), the
//! σ-maps, the auxiliary complex B with its null homotopy, and the corrected X.

mod alpha_beta;
mod bcomplex;
mod correction;
mod identities;
mod sigma;

pub use alpha_beta::{build_alpha_beta, AlphaBeta};
pub use bcomplex::{build_b_and_c, build_x0, BComplexData};
pub use correction::{correct_x, XData};
pub use identities::{check_candidate_x, verify_hypotheses, verify_identity_suite, verify_higher_multiplication};
pub use sigma::{solve_r_sigma, SigmaData};

use thiserror::Error;

use crate::complexes::ComplexError;
use crate::dga::{build_koszul, split_m3, validate_dga, DgaBundle, DgaError, M3Split};
use crate::ring::{check_regular_sequence, Poly, PolyMatrix, Ring, RingError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum LinkageError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("the M11 columns of m1 cannot be brought to the generators a by an invertible change of basis: {0}")]
    SplitNotAligned(String),
    #[error("f is not in (beta0(1)) + K: {0}")]
    NoDecomposition(String),
    #[error("{stage}: lift failed: {source}")]
    LiftFailed { stage: String, source: RingError },
    #[error("{stage}: homotopy failed: {source}")]
    HomotopyFailed { stage: String, source: ComplexError },
    #[error("{stage}: exact division failed: {source}")]
    NotDivisible { stage: String, source: RingError },
    #[error("chain map check failed: {0}")]
    ChainMapCheckFailed(String),
    #[error("internal check failed: {0}")]
    InternalCheckFailed(String),
    #[error(transparent)]
    Dga(#[from] DgaError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkageOptions {
    /// Check that `a` is a regular sequence before running.
    pub check_regular: bool,
}

impl Default for LinkageOptions {
    fn default() -> Self {
        LinkageOptions { check_regular: true }
    }
}

/// The generators a of K, the element f, and the resolution M of P/(K:f).
#[derive(Clone, Debug)]
pub struct LinkageInput {
    pub a: Vec<Poly>,
    pub f: Poly,
    pub m: DgaBundle,
    pub options: LinkageOptions,
}

/// Everything the pipeline computes, in construction order.
#[derive(Clone, Debug)]
pub struct PipelineState {
    pub ring: Ring,
    pub a: Vec<Poly>,
    pub f: Poly,
    pub k: DgaBundle,
    pub m: DgaBundle,
    pub split3: M3Split,
    pub ab: AlphaBeta,
    pub sigma: SigmaData,
    pub b: BComplexData,
    pub x: XData,
}

impl PipelineState {
    pub fn rank_m(&self, i: usize) -> usize {
        self.m.rank(i)
    }

    /// The M₁ endomorphism that keeps the given coordinates and zeroes the rest.
    pub fn coordinate_projection(&self, keep: &[usize]) -> PolyMatrix {
        let n1 = self.m.rank(1);
        let mut p = PolyMatrix::zero(self.ring, n1, n1);
        for &i in keep {
            p.set(i, i, self.ring.one());
        }
        p
    }

    pub fn proj11(&self) -> PolyMatrix {
        self.coordinate_projection(&self.m.split.m11)
    }

    pub fn proj12(&self) -> PolyMatrix {
        self.coordinate_projection(&self.m.split.m12)
    }

    /// k₁(σ) = f − r·β₀(1).
    pub fn k1_sigma(&self) -> Poly {
        self.k.d(1).mul_vec(&self.sigma.sigma)[0].clone()
    }
}

/// Checks the input invariants and validates M.
pub fn check_input(input: &LinkageInput) -> Result<(), LinkageError> {
    if input.a.len() != 4 {
        return Err(LinkageError::InvalidInput(format!("need 4 generators, got {}", input.a.len())));
    }
    let ring = input.m.ring();
    if input.a.iter().chain(std::iter::once(&input.f)).any(|p| p.ring() != ring) {
        return Err(LinkageError::InvalidInput("a, f and M must live in the same ring".into()));
    }
    if input.f.is_zero() {
        return Err(LinkageError::InvalidInput("f must be nonzero".into()));
    }
    if input.a.iter().any(|p| p.is_zero()) {
        return Err(LinkageError::InvalidInput("the generators a must be nonzero".into()));
    }
    if input.options.check_regular {
        let regular = check_regular_sequence(&input.a).map_err(|e| LinkageError::InvalidInput(e.to_string()))?;
        if !regular {
            return Err(LinkageError::InvalidInput("a is not a regular sequence".into()));
        }
    }
    let report = validate_dga(&input.m, Some(&input.a));
    if !report.passed() {
        let names: Vec<String> = report.failures().map(|c| format!("{} ({})", c.name, c.detail)).collect();
        return Err(LinkageError::InvalidInput(format!("M failed validation: {}", names.join("; "))));
    }
    Ok(())
}

/// Runs every stage up to the corrected X. Each stage asserts its own
/// postconditions, so a returned state satisfies hypotheses (a)–(e).
pub fn run_pipeline(input: &LinkageInput) -> Result<PipelineState, LinkageError> {
    check_input(input)?;
    let ring = input.m.ring();
    let k = build_koszul(&input.a);
    let m = input.m.clone();
    let split3 = split_m3(&m)?;
    let ab = build_alpha_beta(&k, &m)?;
    let sigma = solve_r_sigma(&k, &m, &ab, &split3, &input.f)?;
    let b = build_b_and_c(&k, &m, &ab)?;
    let x0 = build_x0(&m, &ab, &b)?;
    let x = correct_x(&k, &m, &ab, x0)?;
    Ok(PipelineState { ring, a: input.a.clone(), f: input.f.clone(), k, m, split3, ab, sigma, b, x })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Field;

    fn koszul_input(nvars: usize, f: impl Fn(Ring) -> Poly) -> LinkageInput {
        let r = Ring::new(Field::Prime(101), nvars);
        let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
        LinkageInput { m: build_koszul(&a), f: f(r), a, options: LinkageOptions::default() }
    }

    fn assert_all(rep: &crate::report::Report) {
        let bad: Vec<_> = rep.failures().collect();
        assert!(bad.is_empty(), "{bad:?}");
    }

    #[test]
    fn unit_r_example() {
        let st = run_pipeline(&koszul_input(4, |r| r.one().add(&r.var(0)))).unwrap();
        assert!(st.sigma.r.is_one());
        assert_eq!(st.sigma.sigma, st.k.unit_vec(1, 0));
        assert!(st.x.x.is_zero());
        assert_all(&verify_identity_suite(&st, true));
        assert_all(&verify_higher_multiplication(&st));
    }

    #[test]
    fn non_unit_r_example() {
        let st = run_pipeline(&koszul_input(5, |r| r.var(4))).unwrap();
        assert_eq!(st.sigma.r, st.ring.var(4));
        assert!(st.sigma.sigma.iter().all(|p| p.is_zero()));
        assert!(st.x.x.is_zero());
        assert_all(&verify_identity_suite(&st, true));
        assert_all(&verify_higher_multiplication(&st));
    }

    #[test]
    fn rejects_bad_input() {
        let mut input = koszul_input(4, |r| r.var(0));
        input.a.pop();
        assert!(matches!(run_pipeline(&input), Err(LinkageError::InvalidInput(_))));
        let input = koszul_input(4, |r| r.zero());
        assert!(matches!(run_pipeline(&input), Err(LinkageError::InvalidInput(_))));
    }
}
