use crate::complexes::{reduce_mod_f, ModF};
use crate::linkage::PipelineState;
use crate::report::Report;
use crate::ring::{Poly, PolyMatrix};

use super::{build_mf, pieces, FactorizationError, MfVariant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResolutionVariant {
    /// Head n₁..n₄, then the full factorization.
    N,
    /// Head ń₁..ń₃, then the reduced factorization; needs r a unit.
    Acute,
}

/// A resolution over P/(f) given by finitely many head differentials and a
/// repeating pair. Entries are stored over P; identities hold modulo f.
#[derive(Clone, Debug)]
pub struct PeriodicResolution {
    pub variant: ResolutionVariant,
    /// n₁, n₂, … up to the start of the periodic part.
    pub head: Vec<PolyMatrix>,
    /// Differential in odd degrees past the head.
    pub odd: PolyMatrix,
    /// Differential in even degrees past the head.
    pub even: PolyMatrix,
    pub f: Poly,
    /// n_i ∘ n_{i+1} ≡ 0 (mod f) checks and the tail comparison.
    pub report: Report,
}

impl PeriodicResolution {
    /// n_i : N_i → N_{i−1}, for i ≥ 1.
    pub fn differential(&self, i: usize) -> &PolyMatrix {
        assert!(i >= 1, "differentials start in degree 1");
        if i <= self.head.len() {
            &self.head[i - 1]
        } else if i % 2 == 1 {
            &self.odd
        } else {
            &self.even
        }
    }

    /// rank N_i.
    pub fn rank(&self, i: usize) -> usize {
        if i == 0 {
            self.head[0].rows()
        } else {
            self.differential(i).cols()
        }
    }

    pub fn ranks(&self, upto: usize) -> Vec<usize> {
        (0..=upto).map(|i| self.rank(i)).collect()
    }
}

pub fn build_resolution(
    st: &PipelineState,
    variant: ResolutionVariant,
    check_len: usize,
) -> Result<PeriodicResolution, FactorizationError> {
    if check_len < 6 {
        return Err(FactorizationError::ComplexCheckFailed(format!("check length {check_len} is below 6")));
    }
    let (k, m, ab, sg) = (&st.k, &st.m, &st.ab, &st.sigma);
    let ring = st.ring;
    let m12 = &m.split.m12;
    let n12 = m12.len();
    let p = pieces(st);
    let n1 = k.d(1).neg();
    let first = ab.beta[1].scale(&sg.r).add(&sg.z[0].mul(&m.d(1))).select_cols(m12);
    let n2 = PolyMatrix::hstack(&[&first, &k.d(2).neg()]);
    let (mf_variant, head) = match variant {
        ResolutionVariant::N => {
            let n3 = PolyMatrix::block(&[
                vec![p.m2_12.clone(), PolyMatrix::zero(ring, n12, 4)],
                vec![p.rb2_y.clone(), k.d(3).neg()],
            ]);
            let mf = build_mf(st, MfVariant::Full)?;
            let n4 = mf.g_even.sub_block(0, m.rank(2) + 4, 0, mf.g_even.cols());
            (MfVariant::Full, vec![n1, n2, n3, n4])
        }
        ResolutionVariant::Acute => {
            let n3 = PolyMatrix::vstack(&[&p.m2_12, &p.rb2_y]);
            (MfVariant::Reduced, vec![n1, n2, n3])
        }
    };
    let mf = build_mf(st, mf_variant)?;
    let mut res = PeriodicResolution {
        variant,
        head,
        odd: mf.g_odd.clone(),
        even: mf.g_even.clone(),
        f: st.f.clone(),
        report: Report::new(),
    };

    let modf = ModF::new(&st.f);
    let mut report = Report::new();
    for i in 1..check_len {
        let (a, b) = (res.differential(i), res.differential(i + 1));
        let failure = if a.cols() != b.rows() {
            Some(format!("shapes {:?} and {:?} do not compose", a.shape(), b.shape()))
        } else {
            let prod = modf.matrix(&a.mul(b));
            prod.first_diff(&PolyMatrix::zero(ring, prod.rows(), prod.cols()))
                .map(|(r, c)| format!("entry ({r},{c}) ≡ {} mod f", prod.get(r, c)))
        };
        report.push(format!("n{}_n{}_mod_f", i, i + 1), failure);
    }
    let start = res.head.len() + 1;
    let (odd_at, even_at) = if start % 2 == 1 { (start, start + 1) } else { (start + 1, start) };
    report.expect_eq(
        "tail_odd_is_factorization",
        &reduce_mod_f(res.differential(odd_at), &st.f),
        &reduce_mod_f(&mf.g_odd, &st.f),
    );
    report.expect_eq(
        "tail_even_is_factorization",
        &reduce_mod_f(res.differential(even_at), &st.f),
        &reduce_mod_f(&mf.g_even, &st.f),
    );
    if let Some(c) = report.failures().next() {
        return Err(FactorizationError::ComplexCheckFailed(format!("{}: {}", c.name, c.detail)));
    }
    res.report = report;
    Ok(res)
}
