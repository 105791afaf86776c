use super::matrix::PolyMatrix;
use super::poly::Poly;
use super::RingError;

fn pivot_row(m: &[Vec<Poly>], col: usize, from: usize) -> Option<usize> {
    // prefer units, then the sparsest low-degree entry
    (from..m.len())
        .filter(|&i| !m[i][col].is_zero())
        .min_by_key(|&i| (!m[i][col].is_unit(), m[i][col].degree().unwrap_or(0), m[i][col].terms().len(), i))
}

pub(crate) fn bareiss_det(a: &PolyMatrix) -> Poly {
    let ring = a.ring();
    let n = a.rows();
    let mut m: Vec<Vec<Poly>> = (0..n).map(|i| a.row(i)).collect();
    let mut prev = ring.one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = pivot_row(&m, k, k) else { return ring.zero() };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.divide_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = ring.zero();
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return ring.one();
    }
    if negate {
        prev.neg()
    } else {
        prev
    }
}

/// Inverse of a matrix whose determinant is a nonzero constant.
///
/// Fraction-free Gauss–Jordan on `[A | I]` ends at `[D·I | D·A⁻¹]` with
/// `D = ±det A`; dividing by the constant `D` gives the inverse.
pub fn invert_unimodular(a: &PolyMatrix) -> Result<PolyMatrix, RingError> {
    let ring = a.ring();
    let n = a.rows();
    if a.cols() != n {
        return Err(RingError::ShapeMismatch(format!("invert of {}x{} matrix", a.rows(), a.cols())));
    }
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            let mut row = a.row(i);
            row.extend((0..n).map(|j| if i == j { ring.one() } else { ring.zero() }));
            row
        })
        .collect();
    let mut prev = ring.one();
    let mut negate = false;
    for k in 0..n {
        let Some(p) = pivot_row(&m, k, k) else {
            return Err(RingError::NotUnimodular { det: "0".into() });
        };
        if p != k {
            m.swap(p, k);
            negate = !negate;
        }
        for i in 0..n {
            if i == k {
                continue;
            }
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.divide_exact(&prev).expect("fraction-free elimination is exact");
            }
            m[i][k] = ring.zero();
        }
        prev = m[k][k].clone();
    }
    let d = if n == 0 { ring.one() } else { prev };
    let det = if negate { d.neg() } else { d.clone() };
    if !d.is_unit() {
        return Err(RingError::NotUnimodular { det: det.to_string() });
    }
    let inv_d = ring.field.inv(&d.constant_value().unwrap()).expect("unit");
    let b = PolyMatrix::from_fn(ring, n, n, |i, j| m[i][n + j].scale(&inv_d));
    let id = PolyMatrix::identity(ring, n);
    if a.mul(&b) != id || b.mul(a) != id {
        return Err(RingError::NotUnimodular { det: det.to_string() });
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{Field, Ring};

    fn r() -> Ring {
        Ring::new(Field::Prime(101), 2)
    }

    #[test]
    fn elementary_inverse() {
        let r = r();
        let x = r.var(0);
        let a = PolyMatrix::from_rows(r, vec![vec![r.one(), x.clone()], vec![r.zero(), r.one()]]);
        let b = invert_unimodular(&a).unwrap();
        assert_eq!(b, PolyMatrix::from_rows(r, vec![vec![r.one(), x.neg()], vec![r.zero(), r.one()]]));
    }

    #[test]
    fn non_unimodular() {
        let r = r();
        let a = PolyMatrix::from_rows(r, vec![vec![r.var(0), r.zero()], vec![r.zero(), r.one()]]);
        match invert_unimodular(&a) {
            Err(RingError::NotUnimodular { det }) => assert_eq!(det, "x"),
            other => panic!("{other:?}"),
        }
        let z = PolyMatrix::zero(r, 2, 2);
        assert!(invert_unimodular(&z).is_err());
    }

    #[test]
    fn det_matches_expansion() {
        let r = r();
        let (x, y) = (r.var(0), r.var(1));
        let a = PolyMatrix::from_rows(r, vec![vec![x.clone(), y.clone()], vec![y.clone(), x.clone()]]);
        assert_eq!(a.det(), x.mul(&x).sub(&y.mul(&y)));
        let s = PolyMatrix::from_rows(r, vec![vec![r.zero(), r.one()], vec![r.one(), r.zero()]]);
        assert_eq!(s.det(), r.from_i64(-1));
    }

    #[test]
    fn unimodular_with_polynomial_entries() {
        let r = r();
        let (x, y) = (r.var(0), r.var(1));
        // product of elementary matrices
        let e1 = PolyMatrix::from_rows(r, vec![vec![r.one(), x.clone()], vec![r.zero(), r.one()]]);
        let e2 = PolyMatrix::from_rows(r, vec![vec![r.one(), r.zero()], vec![y.mul(&y), r.from_i64(3)]]);
        let a = e1.mul(&e2);
        let b = invert_unimodular(&a).unwrap();
        assert_eq!(a.mul(&b), PolyMatrix::identity(r, 2));
    }
}
