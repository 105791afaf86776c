use crate::dga::{dagger, DgaBundle};
use crate::ring::{invert_unimodular, solve_lift, Poly, PolyMatrix};

use super::identities::hypotheses_report;
use super::{AlphaBeta, LinkageError};

/// X₀ and its correction X = X₀ − m₃U, with X α₁ = 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XData {
    pub x0: PolyMatrix,
    /// u : K₁ → M₃ with m₃u = X₀α₁.
    pub u: PolyMatrix,
    /// v_i ∈ M₄ (as coordinates) with u_i · α₁(e_i) = a_i v_i.
    pub v: Vec<Poly>,
    /// u′ = u + m₄v, so that u′_i · α₁(e_i) = 0.
    pub u_prime: PolyMatrix,
    /// U : M₁ → M₃ with U α₁ = u′ and U(θ)·θ = 0.
    pub big_u: PolyMatrix,
    pub x: PolyMatrix,
    pub x_dagger: PolyMatrix,
}

fn coord4(v: &[Poly]) -> Poly {
    v[0].clone()
}

/// Checks U(b_s)·b_t + U(b_t)·b_s = 0 and U(b_s)·b_s = 0 on all basis pairs.
fn alternating(m: &DgaBundle, big_u: &PolyMatrix) -> Option<String> {
    let n1 = m.rank(1);
    let pair = |s: usize, t: usize| coord4(&m.product(3, &big_u.column(s), 1, &m.unit_vec(1, t)));
    for s in 0..n1 {
        if !pair(s, s).is_zero() {
            return Some(format!("U(b_{s})·b_{s} ≠ 0"));
        }
        for t in s + 1..n1 {
            if !pair(s, t).add(&pair(t, s)).is_zero() {
                return Some(format!("U(b_{s})·b_{t} + U(b_{t})·b_{s} ≠ 0"));
            }
        }
    }
    None
}

pub fn correct_x(k: &DgaBundle, m: &DgaBundle, ab: &AlphaBeta, x0: PolyMatrix) -> Result<XData, LinkageError> {
    let ring = m.ring();
    let (n1, n3) = (m.rank(1), m.rank(3));
    let a = k.d(1).row(0);
    let alpha1 = &ab.alpha[1];

    let target = x0.mul(alpha1);
    let u = solve_lift(&m.d(3), &target).map_err(|source| LinkageError::LiftFailed { stage: "u".into(), source })?;
    let mut v = Vec::with_capacity(4);
    for i in 0..4 {
        let prod = coord4(&m.product(3, &u.column(i), 1, &alpha1.column(i)));
        let vi = prod
            .divide_exact(&a[i])
            .map_err(|source| LinkageError::NotDivisible { stage: format!("v_{i}"), source })?;
        v.push(vi);
    }
    let v_row = PolyMatrix::from_rows(ring, vec![v.clone()]);
    let u_prime = u.add(&m.d(4).mul(&v_row));

    let mut big_u = PolyMatrix::zero(ring, n3, n1);
    let on_m11 = u_prime.mul(&ab.c_inv);
    for (kk, &col) in m.split.m11.iter().enumerate() {
        for q in 0..n3 {
            big_u.set(q, col, on_m11.get(q, kk).clone());
        }
    }
    if !m.split.m12.is_empty() {
        let g3 = PolyMatrix::from_fn(ring, n3, n1, |q, t| m.mult[3][1].get(0, q * n1 + t).clone());
        let g3_inv_t = invert_unimodular(&g3)
            .map_err(|e| LinkageError::InternalCheckFailed(format!("degree-3 pairing: {e}")))?
            .transpose();
        for &s in &m.split.m12 {
            let mut p = vec![ring.zero(); n1];
            for &j in &m.split.m11 {
                p[j] = coord4(&m.product(3, &big_u.column(j), 1, &m.unit_vec(1, s))).neg();
            }
            let col = g3_inv_t.mul_vec(&p);
            for q in 0..n3 {
                big_u.set(q, s, col[q].clone());
            }
        }
    }
    if let Some(d) = alternating(m, &big_u) {
        return Err(LinkageError::InternalCheckFailed(format!("correction U is not alternating: {d}")));
    }
    let x = x0.sub(&m.d(3).mul(&big_u));
    let x_dagger = dagger(m, &x)?;
    let report = hypotheses_report(m, ab, &x, &x_dagger);
    if let Some(c) = report.failures().next() {
        return Err(LinkageError::InternalCheckFailed(format!("hypothesis {} fails for X: {}", c.name, c.detail)));
    }
    Ok(XData { x0, u, v, u_prime, big_u, x, x_dagger })
}
