//! The two matrix factorizations of f built from X, the mapping cone of
//! β′ : M → K with its ρ-maps, and the periodic resolutions N and Ń.

mod cone;
mod resolution;

pub use cone::{build_cone_l_rho, ConeData};
pub use resolution::{build_resolution, PeriodicResolution, ResolutionVariant};

use thiserror::Error;

use crate::linkage::PipelineState;
use crate::report::Report;
use crate::ring::{Poly, PolyMatrix};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum FactorizationError {
    #[error("r = {0} is not a unit; the reduced factorization needs a unit r")]
    RNotUnit(String),
    #[error("rank precondition failed: {0}")]
    RankMismatch(String),
    #[error("identity failed: {0}")]
    IdentityFailed(String),
    #[error("complex check failed: {0}")]
    ComplexCheckFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MfVariant {
    /// G_even = M₁,₂ ⊕ K₂ ⊕ M₃ ⊕ K₄, G_odd = M₂ ⊕ K₃ ⊕ M₄.
    Full,
    /// Ǵ_even = M₁,₂ ⊕ K₂ ⊕ M₃,₂, Ǵ_odd = M₂; needs r a unit.
    Reduced,
}

/// A pair g_even : G_even → G_odd, g_odd : G_odd → G_even with both
/// composites f·I. Layouts name each summand and its rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixFactorization {
    pub variant: MfVariant,
    pub g_even: PolyMatrix,
    pub g_odd: PolyMatrix,
    pub f: Poly,
    pub even_layout: Vec<(String, usize)>,
    pub odd_layout: Vec<(String, usize)>,
}

impl MatrixFactorization {
    pub fn rank(&self) -> usize {
        self.g_even.cols()
    }
}

fn layout(parts: &[(&str, usize)]) -> Vec<(String, usize)> {
    parts.iter().map(|&(n, r)| (n.to_string(), r)).collect()
}

/// Summand containing coordinate `i`.
fn locate(layout: &[(String, usize)], mut i: usize) -> &str {
    for (name, r) in layout {
        if i < *r {
            return name;
        }
        i -= r;
    }
    "?"
}

/// rank M₂ = 2·rank M₁ − 2 and the split sizes the factorizations rely on.
pub fn rank_precheck(st: &PipelineState) -> Result<(), FactorizationError> {
    let m = &st.m;
    let (n1, n2, n3) = (m.rank(1), m.rank(2), m.rank(3));
    if n2 + 2 != 2 * n1 {
        return Err(FactorizationError::RankMismatch(format!(
            "rank_m2: rank M₂ = {n2} but 2·rank M₁ − 2 = {}",
            (2 * n1).saturating_sub(2)
        )));
    }
    let n32 = st.split3.basis32.cols();
    if n1 < 4 || n32 != n1 - 4 {
        return Err(FactorizationError::RankMismatch(format!(
            "rank_m32: rank M₃,₂ = {n32} but rank M₁ − 4 = {}",
            n1 as isize - 4
        )));
    }
    if n3 != n1 || m.rank(4) != 1 || m.rank(0) != 1 {
        return Err(FactorizationError::RankMismatch(format!("self_dual_ranks: ranks {:?} are not self-dual of length four", m.complex.ranks())));
    }
    Ok(())
}

/// r⁻¹ when r is a nonzero constant.
pub fn r_inverse(st: &PipelineState) -> Result<Poly, FactorizationError> {
    let r = &st.sigma.r;
    r.constant_value()
        .and_then(|c| st.ring.field.inv(&c))
        .map(|c| st.ring.constant(c))
        .ok_or_else(|| FactorizationError::RNotUnit(r.to_string()))
}

/// Shared pieces: (rX − w₁)|M₁,₂, rβ₂ − Y, rX† + w₂.
pub(crate) struct Pieces {
    pub rx_w1_12: PolyMatrix,
    pub m2_12: PolyMatrix,
    pub rb2_y: PolyMatrix,
    pub rxd_w2: PolyMatrix,
}

pub(crate) fn pieces(st: &PipelineState) -> Pieces {
    let (m, sg) = (&st.m, &st.sigma);
    let r = &sg.r;
    let m12 = &m.split.m12;
    Pieces {
        rx_w1_12: st.x.x.scale(r).sub(&sg.w[1]).select_cols(m12),
        m2_12: m.d(2).select_rows(m12),
        rb2_y: st.ab.beta[2].scale(r).sub(&sg.y),
        rxd_w2: st.x.x_dagger.scale(r).add(&sg.w[2]),
    }
}

fn zero(st: &PipelineState, r: usize, c: usize) -> PolyMatrix {
    PolyMatrix::zero(st.ring, r, c)
}

fn build_full(st: &PipelineState) -> MatrixFactorization {
    let (k, m, ab, sg) = (&st.k, &st.m, &st.ab, &st.sigma);
    let r = &sg.r;
    let p = pieces(st);
    let (n12, n2, n3) = (m.split.m12.len(), m.rank(2), m.rank(3));
    let g_even = PolyMatrix::block(&[
        vec![p.rx_w1_12.clone(), ab.alpha[2].clone(), m.d(3), zero(st, n2, 1)],
        vec![zero(st, 4, n12), sg.z[2].neg(), ab.beta[3].scale(r), k.d(4).neg()],
        vec![zero(st, 1, n12), zero(st, 1, 6), sg.w[3].neg(), ab.alpha[4].clone()],
    ]);
    let g_odd = PolyMatrix::block(&[
        vec![p.m2_12.clone(), zero(st, n12, 4), zero(st, n12, 1)],
        vec![p.rb2_y.clone(), k.d(3).neg(), zero(st, 6, 1)],
        vec![p.rxd_w2.clone(), ab.alpha[3].clone(), m.d(4)],
        vec![zero(st, 1, n2), sg.z[3].clone(), ab.beta[4].scale(r)],
    ]);
    MatrixFactorization {
        variant: MfVariant::Full,
        g_even,
        g_odd,
        f: st.f.clone(),
        even_layout: layout(&[("M12", n12), ("K2", 6), ("M3", n3), ("K4", 1)]),
        odd_layout: layout(&[("M2", n2), ("K3", 4), ("M4", 1)]),
    }
}

fn build_reduced(st: &PipelineState) -> Result<MatrixFactorization, FactorizationError> {
    let (m, ab, sg, s3) = (&st.m, &st.ab, &st.sigma, &st.split3);
    let r_inv = r_inverse(st)?;
    let p = pieces(st);
    let (n12, n2) = (m.split.m12.len(), m.rank(2));
    let g_even = PolyMatrix::hstack(&[
        &p.rx_w1_12,
        &ab.alpha[2].add(&sg.w_map.scale(&r_inv)),
        &m.d(3).mul(&s3.basis32),
    ]);
    let g_odd = PolyMatrix::vstack(&[&p.m2_12, &p.rb2_y, &s3.coords32.mul(&p.rxd_w2)]);
    Ok(MatrixFactorization {
        variant: MfVariant::Reduced,
        g_even,
        g_odd,
        f: st.f.clone(),
        even_layout: layout(&[("M12", n12), ("K2", 6), ("M32", n12)]),
        odd_layout: layout(&[("M2", n2)]),
    })
}

pub fn build_mf(st: &PipelineState, variant: MfVariant) -> Result<MatrixFactorization, FactorizationError> {
    rank_precheck(st)?;
    let mf = match variant {
        MfVariant::Full => build_full(st),
        MfVariant::Reduced => build_reduced(st)?,
    };
    if mf.g_even.rows() != mf.g_even.cols() || mf.g_odd.shape() != mf.g_even.shape() {
        return Err(FactorizationError::RankMismatch(format!(
            "g_even {:?}, g_odd {:?}",
            mf.g_even.shape(),
            mf.g_odd.shape()
        )));
    }
    Ok(mf)
}

fn product_check(
    rep: &mut Report,
    name: &str,
    prod: &PolyMatrix,
    f: &Poly,
    layout: &[(String, usize)],
) {
    let expect = PolyMatrix::scalar(prod.ring(), prod.rows(), f);
    let failure = if prod.shape() != expect.shape() {
        Some(format!("shape {:?}", prod.shape()))
    } else {
        prod.first_diff(&expect).map(|(i, j)| {
            format!(
                "block ({}, {}) entry ({i},{j}): {} vs {}",
                locate(layout, i),
                locate(layout, j),
                prod.get(i, j),
                expect.get(i, j)
            )
        })
    };
    rep.push(name, failure);
}

/// Both composites compared with f·I over P.
pub fn verify_mf(mf: &MatrixFactorization) -> Report {
    let mut rep = Report::new();
    rep.push(
        "even_rank_equals_odd_rank",
        (mf.g_even.rows() != mf.g_even.cols() || mf.g_odd.rows() != mf.g_odd.cols() || mf.g_even.cols() != mf.g_odd.cols())
            .then(|| format!("g_even {:?}, g_odd {:?}", mf.g_even.shape(), mf.g_odd.shape())),
    );
    if mf.g_even.cols() != mf.g_odd.rows() || mf.g_even.rows() != mf.g_odd.cols() {
        rep.push("shapes", Some(format!("g_even {:?}, g_odd {:?}", mf.g_even.shape(), mf.g_odd.shape())));
        return rep;
    }
    product_check(&mut rep, "g_odd_g_even", &mf.g_odd.mul(&mf.g_even), &mf.f, &mf.even_layout);
    product_check(&mut rep, "g_even_g_odd", &mf.g_even.mul(&mf.g_odd), &mf.f, &mf.odd_layout);
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::build_koszul;
    use crate::linkage::{run_pipeline, LinkageInput, LinkageOptions};
    use crate::ring::{Field, Ring};

    fn state(nvars: usize, f: impl Fn(Ring) -> Poly) -> PipelineState {
        let r = Ring::new(Field::Prime(101), nvars);
        let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
        run_pipeline(&LinkageInput { m: build_koszul(&a), f: f(r), a, options: LinkageOptions::default() }).unwrap()
    }

    #[test]
    fn unit_r_factorizations() {
        let st = state(4, |r| r.one().add(&r.var(0)));
        let mf2 = build_mf(&st, MfVariant::Reduced).unwrap();
        assert_eq!(mf2.rank(), 6);
        assert!(verify_mf(&mf2).passed());
        let mf1 = build_mf(&st, MfVariant::Full).unwrap();
        assert_eq!(mf1.rank(), 11);
        assert!(verify_mf(&mf1).passed());
        let cone = build_cone_l_rho(&st).unwrap();
        assert_eq!(cone.l.ranks(), &[1, 5, 10, 10, 5, 1]);
        assert_eq!(cone.report.checks.len(), 29);
        let res = build_resolution(&st, ResolutionVariant::Acute, 10).unwrap();
        assert_eq!(res.ranks(6), vec![1, 4, 6, 6, 6, 6, 6]);
    }

    #[test]
    fn non_unit_r() {
        let st = state(5, |r| r.var(4));
        assert!(matches!(build_mf(&st, MfVariant::Reduced), Err(FactorizationError::RNotUnit(_))));
        let mf1 = build_mf(&st, MfVariant::Full).unwrap();
        assert!(verify_mf(&mf1).passed());
        let res = build_resolution(&st, ResolutionVariant::N, 10).unwrap();
        assert_eq!(res.ranks(7), vec![1, 4, 6, 10, 11, 11, 11, 11]);
        assert!(res.report.passed());
        assert_eq!(build_cone_l_rho(&st).unwrap().report.checks.len(), 29);
    }

    #[test]
    fn zeroed_entry_is_located() {
        let st = state(5, |r| r.var(4));
        let mut mf = build_mf(&st, MfVariant::Full).unwrap();
        let z = st.ring.zero();
        mf.g_even.set(7, 10, z);
        let rep = verify_mf(&mf);
        assert!(!rep.passed());
        let detail = &rep.failures().next().unwrap().detail;
        assert!(detail.contains("block"), "{detail}");
    }
}
