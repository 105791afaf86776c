use crate::complexes::{build_homotopy, ChainMap, FreeComplex, Homotopy, Prescription};
use crate::dga::{dagger, DgaBundle};
use crate::report::matrix_mismatch;
use crate::ring::{invert_unimodular, Poly, PolyMatrix};

use super::{AlphaBeta, LinkageError};

/// The auxiliary complex B = (M₀ ← M₁ ← Λ²M₁ ⊕ M₂ ← M₁ ⊗ M₂ ← D₂M₂), the
/// comparison map c : B → K and a null homotopy h of c.
#[derive(Clone, Debug)]
pub struct BComplexData {
    pub complex: FreeComplex,
    pub c: ChainMap,
    pub h: Homotopy,
    /// Λ²M₁ basis: pairs s < t, lexicographic.
    pub wedge_pairs: Vec<(usize, usize)>,
    /// D₂M₂ basis: pairs i ≤ j, lexicographic; (i, i) stands for b_i^(2).
    pub square_pairs: Vec<(usize, usize)>,
}

fn pairs(n: usize, strict: bool) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for s in 0..n {
        let start = if strict { s + 1 } else { s };
        for t in start..n {
            out.push((s, t));
        }
    }
    out
}

fn wedge_index(wedge: &[(usize, usize)], s: usize, t: usize) -> usize {
    wedge.iter().position(|&p| p == (s, t)).expect("wedge pair")
}

fn differentials(m: &DgaBundle, wedge: &[(usize, usize)], squares: &[(usize, usize)]) -> Vec<PolyMatrix> {
    let ring = m.ring();
    let (n1, n2) = (m.rank(1), m.rank(2));
    let (m1, m2) = (m.d(1), m.d(2));
    let nw = wedge.len();

    let mut b2 = PolyMatrix::zero(ring, n1, nw + n2);
    for (col, &(s, t)) in wedge.iter().enumerate() {
        b2.set(t, col, b2.get(t, col).add(m1.get(0, s)));
        b2.set(s, col, b2.get(s, col).sub(m1.get(0, t)));
    }
    for t in 0..n2 {
        for q in 0..n1 {
            b2.set(q, nw + t, m2.get(q, t).clone());
        }
    }

    let mut b3 = PolyMatrix::zero(ring, nw + n2, n1 * n2);
    for s in 0..n1 {
        for t in 0..n2 {
            let col = s * n2 + t;
            for q in (0..n1).filter(|&q| q != s) {
                let coeff = m2.get(q, t);
                if coeff.is_zero() {
                    continue;
                }
                // −coeff · b_s ∧ b_q
                let (row, entry) = if s < q {
                    (wedge_index(wedge, s, q), coeff.neg())
                } else {
                    (wedge_index(wedge, q, s), coeff.clone())
                };
                b3.set(row, col, b3.get(row, col).add(&entry));
            }
            b3.set(nw + t, col, m1.get(0, s).clone());
        }
    }

    let mut b4 = PolyMatrix::zero(ring, n1 * n2, squares.len());
    for (col, &(i, j)) in squares.iter().enumerate() {
        let mut bump = |q: usize, t: usize, p: &Poly| {
            let row = q * n2 + t;
            b4.set(row, col, b4.get(row, col).add(p));
        };
        for q in 0..n1 {
            bump(q, j, m2.get(q, i));
            if i != j {
                bump(q, i, m2.get(q, j));
            }
        }
    }
    vec![m1, b2, b3, b4]
}

fn comparison(
    k: &DgaBundle,
    m: &DgaBundle,
    ab: &AlphaBeta,
    wedge: &[(usize, usize)],
    squares: &[(usize, usize)],
) -> ChainMap {
    let ring = m.ring();
    let (n1, n2) = (m.rank(1), m.rank(2));
    let beta = &ab.beta;
    let b0 = &ab.beta0;
    let scaled = |v: Vec<Poly>| -> Vec<Poly> { v.iter().map(|p| p.mul(b0)).collect() };
    let sub = |x: Vec<Poly>, y: Vec<Poly>| -> Vec<Poly> { x.iter().zip(&y).map(|(a, b)| a.sub(b)).collect() };

    let c0 = PolyMatrix::zero(ring, 1, 1);
    let c1 = PolyMatrix::zero(ring, 4, n1);
    let mut c2_cols: Vec<Vec<Poly>> = wedge
        .iter()
        .map(|&(s, t)| {
            let first = scaled(beta[2].mul_vec(&m.basis_product(1, s, 1, t)));
            let second = k.product(1, &beta[1].column(s), 1, &beta[1].column(t));
            sub(first, second)
        })
        .collect();
    c2_cols.extend((0..n2).map(|_| vec![ring.zero(); 6]));
    let c2 = PolyMatrix::from_columns(ring, 6, &c2_cols);

    let c3_cols: Vec<Vec<Poly>> = (0..n1 * n2)
        .map(|col| {
            let (s, t) = (col / n2, col % n2);
            let first = scaled(beta[3].mul_vec(&m.basis_product(1, s, 2, t)));
            let second = k.product(1, &beta[1].column(s), 2, &beta[2].column(t));
            sub(first, second)
        })
        .collect();
    let c3 = PolyMatrix::from_columns(ring, 4, &c3_cols);

    let c4_cols: Vec<Vec<Poly>> = squares
        .iter()
        .map(|&(i, j)| {
            if i == j {
                let first = scaled(beta[4].mul_vec(&m.sq2.column(i)));
                sub(first, k.square2(&beta[2].column(i)))
            } else {
                let first = scaled(beta[4].mul_vec(&m.basis_product(2, i, 2, j)));
                sub(first, k.product(2, &beta[2].column(i), 2, &beta[2].column(j)))
            }
        })
        .collect();
    let c4 = PolyMatrix::from_columns(ring, 1, &c4_cols);
    ChainMap::new(vec![c0, c1, c2, c3, c4])
}

pub fn build_b_and_c(k: &DgaBundle, m: &DgaBundle, ab: &AlphaBeta) -> Result<BComplexData, LinkageError> {
    let ring = m.ring();
    let (n1, n2) = (m.rank(1), m.rank(2));
    let wedge = pairs(n1, true);
    let squares = pairs(n2, false);
    let diffs = differentials(m, &wedge, &squares);
    let ranks = vec![1, n1, wedge.len() + n2, n1 * n2, squares.len()];
    let complex = FreeComplex::new(ring, ranks, diffs)
        .map_err(|source| LinkageError::HomotopyFailed { stage: "complex B".into(), source })?;
    if !crate::complexes::check_complex(&complex) {
        return Err(LinkageError::InternalCheckFailed("B is not a complex".into()));
    }
    let c = comparison(k, m, ab, &wedge, &squares);
    let prescriptions = [
        Prescription::zero(ring, 0, vec![0], 4),
        Prescription::zero(ring, 1, (0..n1).collect(), 6),
        Prescription::zero(ring, 2, (wedge.len()..wedge.len() + n2).collect(), 4),
    ];
    let h = build_homotopy(&c, &complex, &k.complex, &prescriptions)
        .map_err(|source| LinkageError::HomotopyFailed { stage: "null homotopy of B → K".into(), source })?;
    Ok(BComplexData { complex, c, h, wedge_pairs: wedge, square_pairs: squares })
}

/// X₀ : M₁ → M₂ with [X₀(b_s) · b_t]_M read off from h₃(b_s ⊗ b_t).
pub fn build_x0(m: &DgaBundle, ab: &AlphaBeta, b: &BComplexData) -> Result<PolyMatrix, LinkageError> {
    let ring = m.ring();
    let (n1, n2) = (m.rank(1), m.rank(2));
    let beta4_inv = invert_unimodular(&ab.beta[4])
        .map_err(|e| LinkageError::InternalCheckFailed(format!("β₄ is not a unit: {e}")))?;
    let h3 = &b.h.maps[3];
    let f = PolyMatrix::from_fn(ring, n1, n2, |s, t| beta4_inv.get(0, 0).mul(h3.get(0, s * n2 + t)));
    let g22 = PolyMatrix::from_fn(ring, n2, n2, |q, t| m.mult[2][2].get(0, q * n2 + t).clone());
    let g22_inv = invert_unimodular(&g22)
        .map_err(|e| LinkageError::InternalCheckFailed(format!("degree-2 pairing: {e}")))?;
    let x0 = g22_inv.transpose().mul(&f.transpose());

    let b0 = PolyMatrix::scalar(ring, n1, &ab.beta0);
    let lhs = m.d(2).mul(&x0);
    let rhs = b0.sub(&ab.alpha[1].mul(&ab.beta[1]));
    if let Some(d) = matrix_mismatch(&lhs, &rhs) {
        return Err(LinkageError::InternalCheckFailed(format!("m₂X₀ ≠ β₀ − α₁β₁: {d}")));
    }
    let xd = dagger(m, &x0)?;
    let lhs = x0.mul(&m.d(2)).add(&m.d(3).mul(&xd));
    let rhs = PolyMatrix::scalar(ring, n2, &ab.beta0).sub(&ab.alpha[2].mul(&ab.beta[2]));
    if let Some(d) = matrix_mismatch(&lhs, &rhs) {
        return Err(LinkageError::InternalCheckFailed(format!("X₀m₂ + m₃X₀† ≠ β₀ − α₂β₂: {d}")));
    }
    Ok(x0)
}
