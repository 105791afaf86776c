use crate::dga::{DgaBundle, M3Split};
use crate::ring::{ideal_gb, ideal_normal_form, invert_unimodular, solve_lift, syzygy_module, Poly, PolyMatrix};

use super::{AlphaBeta, LinkageError};

/// The decomposition f = r·β₀(1) + k₁(σ) and the maps built from σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaData {
    pub r: Poly,
    /// σ ∈ K₁.
    pub sigma: Vec<Poly>,
    /// α₁(σ) ∈ M₁.
    pub alpha_sigma: Vec<Poly>,
    /// z_i = (− · σ) : K_i → K_{i+1}, i = 0..3.
    pub z: Vec<PolyMatrix>,
    /// w_i = (− · α₁σ) : M_i → M_{i+1}, i = 0..3.
    pub w: Vec<PolyMatrix>,
    /// Y : M₂ → K₂, z₁ ∘ (proj₁₁ α₁)⁻¹ ∘ proj₁₁ ∘ m₂.
    pub y: PolyMatrix,
    /// W : K₂ → M₂, m₃ ∘ (β₃|M₃,₁)⁻¹ ∘ z₂.
    pub w_map: PolyMatrix,
}

/// Finds r with f − r·β₀(1) ∈ K, reduced modulo (K : β₀(1)) so that r is a
/// constant whenever the coset allows it.
fn decompose(k: &DgaBundle, beta0: &Poly, f: &Poly) -> Result<Poly, LinkageError> {
    let ring = k.ring();
    let mut gens = vec![beta0.clone()];
    gens.extend(k.d(1).row(0));
    let a = PolyMatrix::from_rows(ring, vec![gens]);
    let target = PolyMatrix::from_rows(ring, vec![vec![f.clone()]]);
    let lifted = solve_lift(&a, &target).map_err(|e| LinkageError::NoDecomposition(e.to_string()))?;
    let r0 = lifted.get(0, 0).clone();
    let colon: Vec<Poly> = syzygy_module(&a).into_iter().map(|s| s[0].clone()).filter(|p| !p.is_zero()).collect();
    if colon.is_empty() {
        return Ok(r0);
    }
    Ok(ideal_normal_form(&ideal_gb(ring, &colon), &r0))
}

pub fn solve_r_sigma(
    k: &DgaBundle,
    m: &DgaBundle,
    ab: &AlphaBeta,
    split3: &M3Split,
    f: &Poly,
) -> Result<SigmaData, LinkageError> {
    let ring = k.ring();
    let r = decompose(k, &ab.beta0, f)?;
    let rest = f.sub(&r.mul(&ab.beta0));
    let k1 = k.d(1);
    let lifted = solve_lift(&k1, &PolyMatrix::from_rows(ring, vec![vec![rest.clone()]]))
        .map_err(|source| LinkageError::LiftFailed { stage: "sigma".into(), source })?;
    let sigma = lifted.column(0);
    if k1.mul_vec(&sigma)[0] != rest {
        return Err(LinkageError::InternalCheckFailed("f ≠ r·β₀(1) + k₁(σ)".into()));
    }
    let alpha_sigma = ab.alpha1_of(&sigma);
    let z: Vec<PolyMatrix> = (0..4).map(|i| k.right_mul(i, 1, &sigma)).collect();
    let w: Vec<PolyMatrix> = (0..4).map(|i| m.right_mul(i, 1, &alpha_sigma)).collect();

    let y = z[1].mul(&ab.c_inv).mul(&m.d(2).select_rows(&m.split.m11));
    let b31 = ab.beta[3].mul(&split3.basis31);
    let b31_inv = invert_unimodular(&b31)
        .map_err(|e| LinkageError::InternalCheckFailed(format!("β₃ restricted to M₃,₁ is not invertible: {e}")))?;
    let w_map = m.d(3).mul(&split3.basis31).mul(&b31_inv).mul(&z[2]);
    Ok(SigmaData { r, sigma, alpha_sigma, z, w, y, w_map })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{build_koszul, split_m3};
    use crate::linkage::build_alpha_beta;
    use crate::ring::{Field, Ring};

    #[test]
    fn unit_multiple_of_beta0() {
        let r = Ring::new(Field::Prime(101), 4);
        let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
        let k = build_koszul(&a);
        let ab = build_alpha_beta(&k, &k).unwrap();
        let s3 = split_m3(&k).unwrap();
        let f = r.one().add(&r.var(0));
        let s = solve_r_sigma(&k, &k, &ab, &s3, &f).unwrap();
        assert!(s.r.is_one());
        assert_eq!(s.sigma, k.unit_vec(1, 0));
        assert_eq!(s.z.len(), 4);
        assert_eq!(s.y.shape(), (6, 6));
        assert_eq!(s.w_map.shape(), (6, 6));
    }
}
