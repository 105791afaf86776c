use crate::ring::{invert_unimodular, PolyMatrix, RingError};

use super::{DgaBundle, DgaError};

fn not_perfect(degree: usize, e: RingError) -> DgaError {
    match e {
        RingError::NotUnimodular { det } => DgaError::NotPerfectPairing { degree, det },
        other => DgaError::Ring(other),
    }
}

/// G[s][t] = [b_s · b′_t]_M for bases of M_i and M_{4−i}.
pub fn pairing_gram(b: &DgaBundle, i: usize) -> PolyMatrix {
    let ring = b.ring();
    let (ri, rj) = (b.rank(i), b.rank(4 - i));
    PolyMatrix::from_fn(ring, ri, rj, |s, t| b.bracket(&b.basis_product(i, s, 4 - i, t)))
}

/// Inverse of the degree-i Gram matrix, or `NotPerfectPairing`.
pub fn gram_inverse(b: &DgaBundle, i: usize) -> Result<PolyMatrix, DgaError> {
    invert_unimodular(&pairing_gram(b, i)).map_err(|e| not_perfect(i, e))
}

/// For h : M_i → M_j, the map h† : M_{4−j} → M_{4−i} with h†(θ)·φ = θ·h(φ).
pub fn adjoint(b: &DgaBundle, h: &PolyMatrix, i: usize, j: usize) -> Result<PolyMatrix, DgaError> {
    let ring = b.ring();
    if h.shape() != (b.rank(j), b.rank(i)) {
        return Err(DgaError::ShapeMismatch(format!("adjoint source map is {:?}", h.shape())));
    }
    let ginv = gram_inverse(b, 4 - i)?;
    let (ru, rt) = (b.rank(4 - j), b.rank(i));
    let r = PolyMatrix::from_fn(ring, ru, rt, |u, t| {
        let ht = h.column(t);
        b.bracket(&b.product(4 - j, &b.unit_vec(4 - j, u), j, &ht))
    });
    Ok(ginv.transpose().mul(&r.transpose()))
}

/// h† : M₂ → M₃ for h : M₁ → M₂.
pub fn dagger(b: &DgaBundle, h: &PolyMatrix) -> Result<PolyMatrix, DgaError> {
    adjoint(b, h, 1, 2)
}

/// M₃ = M₃,₁ ⊕ M₃,₂, where M₃,₁ kills M₁,₂ and M₃,₂ kills M₁,₁.
#[derive(Clone, Debug)]
pub struct M3Split {
    /// rank M₃ × 4: basis of M₃,₁, dual to the M₁,₁ basis.
    pub basis31: PolyMatrix,
    /// rank M₃ × rank M₁,₂: basis of M₃,₂, dual to the M₁,₂ basis.
    pub basis32: PolyMatrix,
    /// Coordinates in the M₃,₁ basis, 4 × rank M₃.
    pub coords31: PolyMatrix,
    /// Coordinates in the M₃,₂ basis, rank M₁,₂ × rank M₃.
    pub coords32: PolyMatrix,
    pub proj31: PolyMatrix,
    pub proj32: PolyMatrix,
}

pub fn split_m3(b: &DgaBundle) -> Result<M3Split, DgaError> {
    let ring = b.ring();
    let g = pairing_gram(b, 3);
    let ginv = invert_unimodular(&g).map_err(|e| not_perfect(3, e))?;
    let dual = ginv.transpose();
    let gt = g.transpose();
    let basis31 = dual.select_cols(&b.split.m11);
    let basis32 = dual.select_cols(&b.split.m12);
    let coords31 = gt.select_rows(&b.split.m11);
    let coords32 = gt.select_rows(&b.split.m12);
    let proj31 = basis31.mul(&coords31);
    let proj32 = basis32.mul(&coords32);
    let n3 = b.rank(3);
    let split = M3Split { basis31, basis32, coords31, coords32, proj31, proj32 };
    // annihilation conditions and the paired perfection, by direct products
    let pair = |basis: &PolyMatrix, idx: &[usize]| {
        PolyMatrix::from_fn(ring, basis.cols(), idx.len(), |k, t| {
            b.bracket(&b.product(3, &basis.column(k), 1, &b.unit_vec(1, idx[t])))
        })
    };
    let checks = [
        pair(&split.basis31, &b.split.m12).is_zero(),
        pair(&split.basis32, &b.split.m11).is_zero(),
        pair(&split.basis31, &b.split.m11) == PolyMatrix::identity(ring, 4),
        pair(&split.basis32, &b.split.m12) == PolyMatrix::identity(ring, b.split.m12.len()),
        split.proj31.add(&split.proj32) == PolyMatrix::identity(ring, n3),
    ];
    if checks.iter().any(|c| !c) {
        return Err(DgaError::NotPerfectPairing { degree: 3, det: "split verification failed".into() });
    }
    Ok(split)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{build_koszul, koszul_index};
    use crate::ring::{Field, Poly, Ring};

    fn koszul() -> DgaBundle {
        let r = Ring::new(Field::Prime(101), 4);
        let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
        build_koszul(&a)
    }

    #[test]
    fn gram_degree_one_is_signed_antidiagonal() {
        let k = koszul();
        let r = k.ring();
        let g = pairing_gram(&k, 1);
        // brute force: e_i ∧ e_{[4]\i} in K4
        for i in 0..4 {
            for t in 0..4 {
                let rest: Vec<usize> = (0..4).filter(|&x| x != i).collect();
                let expect = if t == koszul_index(&rest) { r.from_i64(if i % 2 == 0 { 1 } else { -1 }) } else { r.zero() };
                assert_eq!(g.get(i, t), &expect);
            }
        }
        assert_eq!(pairing_gram(&k, 0), PolyMatrix::identity(r, 1));
        for i in 0..=4 {
            assert!(gram_inverse(&k, i).is_ok());
        }
    }

    #[test]
    fn dagger_matches_pairing() {
        let k = koszul();
        let r = k.ring();
        let mut h = PolyMatrix::zero(r, 6, 4);
        h.set(koszul_index(&[0, 1]), 2, r.one());
        let hd = dagger(&k, &h).unwrap();
        // h†(e34) = −e124
        let col = hd.column(koszul_index(&[2, 3]));
        let mut expect = vec![r.zero(); 4];
        expect[koszul_index(&[0, 1, 3])] = r.from_i64(-1);
        assert_eq!(col, expect);
        // adjointness on all basis pairs
        for u in 0..6 {
            for t in 0..4 {
                let lhs = k.bracket(&k.product(3, &hd.column(u), 1, &k.unit_vec(1, t)));
                let rhs = k.bracket(&k.product(2, &k.unit_vec(2, u), 2, &h.column(t)));
                assert_eq!(lhs, rhs);
            }
        }
        assert!(dagger(&k, &PolyMatrix::zero(r, 6, 4)).unwrap().is_zero());
    }

    #[test]
    fn koszul_split() {
        let k = koszul();
        let s = split_m3(&k).unwrap();
        assert_eq!(s.basis31.cols(), 4);
        assert_eq!(s.basis32.cols(), 0);
        assert_eq!(s.proj31, PolyMatrix::identity(k.ring(), 4));
        assert_eq!(s.proj31.mul(&s.proj31), s.proj31);
    }
}
