//! DGΓ-algebra bundles of length four with Poincaré duality.

mod duality;
mod koszul;
mod validate;

pub use duality::{adjoint, dagger, pairing_gram, split_m3, M3Split};
pub use koszul::{build_koszul, koszul_basis, koszul_index};
pub use validate::validate_dga;

use thiserror::Error;

use crate::complexes::FreeComplex;
use crate::ring::{Poly, PolyMatrix, Ring, RingError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DgaError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("characteristic 2 requires explicit divided-square tables")]
    CharTwoNeedsTables,
    #[error("pairing in degree {degree} is not perfect (det = {det})")]
    NotPerfectPairing { degree: usize, det: String },
    #[error("invalid M1 split: {0}")]
    BadSplit(String),
    #[error(transparent)]
    Ring(#[from] RingError),
}

/// Partition of the M₁ basis indices into the M₁,₁ part (four elements) and the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub m11: Vec<usize>,
    pub m12: Vec<usize>,
}

/// A length-four DGΓ algebra: differentials, products μ_{i,j}, divided squares
/// on M₂, the orientation [b₄]_M, and the M₁ splitting.
///
/// `mult[i][j]` has shape `rank(i+j) × rank(i)·rank(j)`; the column for the
/// basis pair (s, t) is `s·rank(j) + t`. Entries with i + j > 4 have zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgaBundle {
    pub complex: FreeComplex,
    pub mult: Vec<Vec<PolyMatrix>>,
    /// `rank(4) × rank(2)`, column t is b_t^(2).
    pub sq2: PolyMatrix,
    /// [b]_M for the basis element b of M₄.
    pub orientation: Poly,
    pub split: Split,
    /// True when `sq2` was derived as (b·b)/2 rather than supplied.
    pub sq2_autofilled: bool,
}

/// Unit tables μ_{0,j} and μ_{j,0}: the identity in every degree.
pub fn unit_table(ring: Ring, rank: usize) -> PolyMatrix {
    PolyMatrix::identity(ring, rank)
}

impl DgaBundle {
    /// Validates shapes; fills the unit tables when `mult[0][j]`/`mult[j][0]`
    /// are given as `None`, and derives `sq2` as (b·b)/2 when absent.
    pub fn new(
        complex: FreeComplex,
        mult: Vec<Vec<Option<PolyMatrix>>>,
        sq2: Option<PolyMatrix>,
        orientation: Poly,
        split: Split,
    ) -> Result<Self, DgaError> {
        let ring = complex.ring();
        if complex.ranks().len() != 5 {
            return Err(DgaError::ShapeMismatch(format!("expected length 4, got {}", complex.len())));
        }
        if complex.rank(0) != 1 || complex.rank(4) != 1 {
            return Err(DgaError::ShapeMismatch("rank M0 and rank M4 must be 1".into()));
        }
        let ranks: Vec<usize> = complex.ranks().to_vec();
        let rk = |i: usize| ranks.get(i).copied().unwrap_or(0);
        let mut table: Vec<Vec<PolyMatrix>> = Vec::with_capacity(5);
        for i in 0..5 {
            let mut row = Vec::with_capacity(5);
            for j in 0..5 {
                let shape = (rk(i + j), rk(i) * rk(j));
                let given = mult.get(i).and_then(|r| r.get(j)).cloned().flatten();
                let m = match given {
                    Some(m) => m,
                    None if i == 0 => unit_table(ring, rk(j)),
                    None if j == 0 => unit_table(ring, rk(i)),
                    None => PolyMatrix::zero(ring, shape.0, shape.1),
                };
                if m.shape() != shape {
                    return Err(DgaError::ShapeMismatch(format!(
                        "mu_{i},{j} is {:?}, expected {:?}",
                        m.shape(),
                        shape
                    )));
                }
                row.push(m);
            }
            table.push(row);
        }
        let n1 = rk(1);
        let mut seen = vec![false; n1];
        for &i in split.m11.iter().chain(split.m12.iter()) {
            if i >= n1 || seen[i] {
                return Err(DgaError::BadSplit(format!("index {i} repeated or out of range")));
            }
            seen[i] = true;
        }
        if split.m11.len() != 4 || seen.iter().any(|s| !s) {
            return Err(DgaError::BadSplit("M11 must have 4 indices and the split must cover M1".into()));
        }
        let mut b = DgaBundle {
            complex,
            mult: table,
            sq2: PolyMatrix::zero(ring, 1, rk(2)),
            orientation,
            split,
            sq2_autofilled: false,
        };
        match sq2 {
            Some(s) => {
                if s.shape() != (1, rk(2)) {
                    return Err(DgaError::ShapeMismatch(format!("sq2 is {:?}, expected (1, {})", s.shape(), rk(2))));
                }
                b.sq2 = s;
            }
            None => {
                let field = ring.field;
                if field.characteristic() == 2 {
                    return Err(DgaError::CharTwoNeedsTables);
                }
                let half = field.inv(&field.from_i64(2)).expect("char != 2");
                let mut s = PolyMatrix::zero(ring, 1, rk(2));
                for t in 0..rk(2) {
                    let bb = b.basis_product(2, t, 2, t);
                    s.set(0, t, bb[0].scale(&half));
                }
                b.sq2 = s;
                b.sq2_autofilled = true;
            }
        }
        Ok(b)
    }

    pub fn ring(&self) -> Ring {
        self.complex.ring()
    }

    pub fn rank(&self, i: usize) -> usize {
        self.complex.rank(i as isize)
    }

    /// m_i : M_i → M_{i−1}
    pub fn d(&self, i: usize) -> PolyMatrix {
        self.complex.d(i as isize)
    }

    pub fn mu(&self, i: usize, j: usize) -> &PolyMatrix {
        &self.mult[i][j]
    }

    /// b_s · b_t for b_s ∈ M_i, b_t ∈ M_j, as a coordinate column of M_{i+j}.
    pub fn basis_product(&self, i: usize, s: usize, j: usize, t: usize) -> Vec<Poly> {
        if i + j > 4 {
            return Vec::new();
        }
        self.mult[i][j].column(s * self.rank(j) + t)
    }

    /// x · y for x ∈ M_i, y ∈ M_j.
    pub fn product(&self, i: usize, x: &[Poly], j: usize, y: &[Poly]) -> Vec<Poly> {
        let ring = self.ring();
        if i + j > 4 {
            return Vec::new();
        }
        let rj = self.rank(j);
        let mu = &self.mult[i][j];
        let mut out = vec![ring.zero(); mu.rows()];
        for (s, xs) in x.iter().enumerate() {
            if xs.is_zero() {
                continue;
            }
            for (t, yt) in y.iter().enumerate() {
                if yt.is_zero() {
                    continue;
                }
                let c = xs.mul(yt);
                for (r, o) in out.iter_mut().enumerate() {
                    let e = mu.get(r, s * rj + t);
                    if !e.is_zero() {
                        *o = o.add(&e.mul(&c));
                    }
                }
            }
        }
        out
    }

    /// Matrix of θ ↦ θ · y, from M_i to M_{i+j}.
    pub fn right_mul(&self, i: usize, j: usize, y: &[Poly]) -> PolyMatrix {
        let ring = self.ring();
        let cols: Vec<Vec<Poly>> = (0..self.rank(i))
            .map(|s| {
                let mut e = vec![ring.zero(); self.rank(i)];
                e[s] = ring.one();
                self.product(i, &e, j, y)
            })
            .collect();
        PolyMatrix::from_columns(ring, self.rank(i + j), &cols)
    }

    /// Matrix of θ ↦ x · θ, from M_j to M_{i+j}.
    pub fn left_mul(&self, i: usize, x: &[Poly], j: usize) -> PolyMatrix {
        let ring = self.ring();
        let cols: Vec<Vec<Poly>> = (0..self.rank(j))
            .map(|t| {
                let mut e = vec![ring.zero(); self.rank(j)];
                e[t] = ring.one();
                self.product(i, x, j, &e)
            })
            .collect();
        PolyMatrix::from_columns(ring, self.rank(i + j), &cols)
    }

    /// [v]_M for v ∈ M₄.
    pub fn bracket(&self, v: &[Poly]) -> Poly {
        v[0].mul(&self.orientation)
    }

    /// θ^(2) = Σ c_i² b_i^(2) + Σ_{i<j} c_i c_j b_i b_j, for θ ∈ M₂.
    pub fn square2(&self, x: &[Poly]) -> Vec<Poly> {
        let ring = self.ring();
        let mut acc = ring.zero();
        for (i, ci) in x.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            acc = acc.add(&ci.mul(ci).mul(self.sq2.get(0, i)));
            for (j, cj) in x.iter().enumerate().skip(i + 1) {
                if cj.is_zero() {
                    continue;
                }
                acc = acc.add(&ci.mul(cj).mul(&self.basis_product(2, i, 2, j)[0]));
            }
        }
        vec![acc]
    }

    /// Unit vector e_k in M_i.
    pub fn unit_vec(&self, i: usize, k: usize) -> Vec<Poly> {
        let ring = self.ring();
        let mut e = vec![ring.zero(); self.rank(i)];
        e[k] = ring.one();
        e
    }
}
