use std::collections::BTreeMap;

use crate::complexes::check_chain_map;
use crate::dga::{koszul_basis, pairing_gram, DgaBundle};
use crate::ring::{invert_unimodular, solve_lift, Coeff, Field, Monomial, Poly, PolyMatrix, Ring};

use super::LinkageError;

/// The comparison maps α : K → M (a DGΓ map) and β : M → K (its dual).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaBeta {
    /// α_i : K_i → M_i, i = 0..4.
    pub alpha: Vec<PolyMatrix>,
    /// β_i : M_i → K_i, i = 0..4.
    pub beta: Vec<PolyMatrix>,
    pub beta0: Poly,
    /// 4×4 change of basis with m₁|M₁,₁ · C = (a₁ … a₄).
    pub c: PolyMatrix,
    pub c_inv: PolyMatrix,
}

impl AlphaBeta {
    /// α₁(φ) for φ ∈ K₁.
    pub fn alpha1_of(&self, phi: &[Poly]) -> Vec<Poly> {
        self.alpha[1].mul_vec(phi)
    }
}

/// Solves Σ c_k·gens[k] = target with c_k in the field, if possible.
fn constant_combination(field: Field, gens: &[Poly], target: &Poly) -> Option<Vec<Coeff>> {
    let mut monos: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in gens.iter().chain(std::iter::once(target)) {
        for (m, _) in p.terms() {
            let n = monos.len();
            monos.entry(m.clone()).or_insert(n);
        }
    }
    let rows = monos.len();
    let cols = gens.len();
    // augmented system: rows = monomials, columns = unknowns + right-hand side
    let mut a = vec![vec![field.zero(); cols + 1]; rows];
    for (k, g) in gens.iter().enumerate() {
        for (m, c) in g.terms() {
            a[monos[m]][k] = c.clone();
        }
    }
    for (m, c) in target.terms() {
        a[monos[m]][cols] = c.clone();
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !field.is_zero(&a[r][col])) else { continue };
        a.swap(row, p);
        let inv = field.inv(&a[row][col]).expect("nonzero pivot");
        for x in a[row].iter_mut() {
            *x = field.mul(x, &inv);
        }
        for r in 0..rows {
            if r != row && !field.is_zero(&a[r][col]) {
                let factor = a[r][col].clone();
                for c in 0..=cols {
                    let sub = field.mul(&factor, &a[row][c]);
                    a[r][c] = field.sub(&a[r][c], &sub);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if (row..rows).any(|r| !field.is_zero(&a[r][cols])) {
        return None;
    }
    let mut sol = vec![field.zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        sol[c] = a[r][cols].clone();
    }
    Some(sol)
}

/// The change of basis C with m₁|M₁,₁ · C = a, unimodular.
fn alignment(m: &DgaBundle, a: &[Poly]) -> Result<(PolyMatrix, PolyMatrix), LinkageError> {
    let ring = m.ring();
    let m11 = m.d(1).select_cols(&m.split.m11);
    let target = PolyMatrix::from_rows(ring, vec![a.to_vec()]);
    let lifted = solve_lift(&m11, &target).map_err(|e| LinkageError::SplitNotAligned(e.to_string()))?;
    if let Ok(inv) = invert_unimodular(&lifted) {
        return Ok((lifted, inv));
    }
    // the normal-form lift may pick up syzygy terms; try constant coefficients
    let gens = m11.row(0);
    let mut c = PolyMatrix::zero(ring, 4, 4);
    for (i, ai) in a.iter().enumerate() {
        let sol = constant_combination(ring.field, &gens, ai)
            .ok_or_else(|| LinkageError::SplitNotAligned(format!("no invertible lift for generator {ai}")))?;
        for (k, ck) in sol.into_iter().enumerate() {
            c.set(k, i, ring.constant(ck));
        }
    }
    let inv = invert_unimodular(&c).map_err(|e| LinkageError::SplitNotAligned(e.to_string()))?;
    Ok((c, inv))
}

/// α_i on the Koszul basis: products of α₁-images, left to right.
fn alpha_products(k: &DgaBundle, m: &DgaBundle, alpha1: &PolyMatrix) -> Vec<PolyMatrix> {
    let ring = m.ring();
    let mut alpha = vec![PolyMatrix::identity(ring, 1), alpha1.clone()];
    for i in 2..=4 {
        let cols: Vec<Vec<Poly>> = koszul_basis(i)
            .iter()
            .map(|s| {
                let mut acc = alpha1.column(s[0]);
                for (deg, &j) in s.iter().enumerate().skip(1) {
                    acc = m.product(deg, &acc, 1, &alpha1.column(j));
                }
                acc
            })
            .collect();
        alpha.push(PolyMatrix::from_columns(ring, m.rank(i), &cols));
    }
    debug_assert_eq!(alpha.len(), 5);
    debug_assert!(alpha.iter().enumerate().all(|(i, a)| a.cols() == k.rank(i)));
    alpha
}

/// β_i from [β_i(θ) ∧ φ]_K = [θ · α_{4−i}(φ)]_M.
fn dual_maps(k: &DgaBundle, m: &DgaBundle, alpha: &[PolyMatrix]) -> Result<Vec<PolyMatrix>, LinkageError> {
    let ring = m.ring();
    let mut beta = Vec::with_capacity(5);
    for i in 0..=4 {
        let gk = pairing_gram(k, i);
        let gk_inv = invert_unimodular(&gk).map_err(|e| LinkageError::InternalCheckFailed(format!("Koszul pairing: {e}")))?;
        let j = 4 - i;
        let r = PolyMatrix::from_fn(ring, m.rank(i), k.rank(j), |u, t| {
            m.bracket(&m.product(i, &m.unit_vec(i, u), j, &alpha[j].column(t)))
        });
        beta.push(gk_inv.transpose().mul(&r.transpose()));
    }
    Ok(beta)
}

pub fn build_alpha_beta(k: &DgaBundle, m: &DgaBundle) -> Result<AlphaBeta, LinkageError> {
    let ring: Ring = m.ring();
    let a = k.d(1).row(0);
    let (c, c_inv) = alignment(m, &a)?;
    let mut alpha1 = PolyMatrix::zero(ring, m.rank(1), 4);
    for (kk, &row) in m.split.m11.iter().enumerate() {
        for i in 0..4 {
            alpha1.set(row, i, c.get(kk, i).clone());
        }
    }
    let alpha = alpha_products(k, m, &alpha1);
    let beta = dual_maps(k, m, &alpha)?;
    let beta0 = beta[0].get(0, 0).clone();
    let ab = AlphaBeta { alpha, beta, beta0, c, c_inv };

    let alpha_map = crate::complexes::ChainMap::new(ab.alpha.clone());
    let beta_map = crate::complexes::ChainMap::new(ab.beta.clone());
    let alpha_ok = check_chain_map(&alpha_map, &k.complex, &m.complex)
        .map_err(|e| LinkageError::ChainMapCheckFailed(e.to_string()))?;
    if !alpha_ok {
        return Err(LinkageError::ChainMapCheckFailed("alpha does not commute with the differentials".into()));
    }
    let beta_ok = check_chain_map(&beta_map, &m.complex, &k.complex)
        .map_err(|e| LinkageError::ChainMapCheckFailed(e.to_string()))?;
    if !beta_ok {
        return Err(LinkageError::ChainMapCheckFailed("beta does not commute with the differentials".into()));
    }
    for i in 0..=4 {
        let lhs = ab.beta[i].mul(&ab.alpha[i]);
        if lhs != PolyMatrix::scalar(ring, k.rank(i), &ab.beta0) {
            return Err(LinkageError::ChainMapCheckFailed(format!("beta_{i} alpha_{i} is not beta0(1) times the identity")));
        }
    }
    Ok(ab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::build_koszul;
    use crate::ring::Field;

    #[test]
    fn koszul_against_itself_is_identity() {
        let r = Ring::new(Field::Prime(101), 4);
        let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
        let k = build_koszul(&a);
        let ab = build_alpha_beta(&k, &k).unwrap();
        for i in 0..=4 {
            assert_eq!(ab.alpha[i], PolyMatrix::identity(r, k.rank(i)));
            assert_eq!(ab.beta[i], PolyMatrix::identity(r, k.rank(i)));
        }
        assert!(ab.beta0.is_one());
    }

    #[test]
    fn change_of_generators_is_absorbed() {
        // M = Koszul(x, y, z, w) presented against a = (x+y, x−y, z, 2w)
        let r = Ring::new(Field::Prime(101), 4);
        let v: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
        let m = build_koszul(&v);
        let a = vec![v[0].add(&v[1]), v[0].sub(&v[1]), v[2].clone(), v[3].scale(&r.field.from_i64(2))];
        let k = build_koszul(&a);
        let ab = build_alpha_beta(&k, &m).unwrap();
        assert_eq!(m.d(1).mul(&ab.alpha[1]), k.d(1));
        // β₀(1) is det C up to the orientation
        assert_eq!(ab.beta0, ab.c.det());
    }

    #[test]
    fn constant_solver() {
        let r = Ring::new(Field::Prime(101), 2);
        let (x, y) = (r.var(0), r.var(1));
        let sol = constant_combination(r.field, &[x.clone(), y.clone()], &x.sub(&y.scale(&r.field.from_i64(3)))).unwrap();
        assert_eq!(sol, vec![r.field.from_i64(1), r.field.from_i64(-3)]);
        assert!(constant_combination(r.field, std::slice::from_ref(&x), &y).is_none());
    }
}
