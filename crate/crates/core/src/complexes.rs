//! Finite free complexes, chain maps, homotopies found by lifting, mapping
//! cones, and reduction modulo a single polynomial.

use thiserror::Error;

use crate::ring::{ideal_gb, ideal_normal_form, solve_lift, GroebnerBasis, Poly, PolyMatrix, Ring, RingError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("homotopy lift failed in degree {degree}: {source}")]
    LiftFailed { degree: usize, source: RingError },
    #[error("prescribed homotopy is inconsistent in degree {degree}")]
    PrescriptionViolated { degree: usize },
    #[error("not a chain map in degree {0}")]
    NotAChainMap(usize),
}

/// `0 → C_n → … → C_0`, with `diffs[i-1] = d_i : C_i → C_{i-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    ring: Ring,
    ranks: Vec<usize>,
    diffs: Vec<PolyMatrix>,
}

impl FreeComplex {
    pub fn new(ring: Ring, ranks: Vec<usize>, diffs: Vec<PolyMatrix>) -> Result<Self, ComplexError> {
        if ranks.is_empty() || diffs.len() + 1 != ranks.len() {
            return Err(ComplexError::ShapeMismatch(format!("{} ranks but {} differentials", ranks.len(), diffs.len())));
        }
        for (i, d) in diffs.iter().enumerate() {
            if d.shape() != (ranks[i], ranks[i + 1]) {
                return Err(ComplexError::ShapeMismatch(format!(
                    "d_{} is {}x{}, expected {}x{}",
                    i + 1,
                    d.rows(),
                    d.cols(),
                    ranks[i],
                    ranks[i + 1]
                )));
            }
        }
        Ok(FreeComplex { ring, ranks, diffs })
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Index of the top nonzero module slot.
    pub fn len(&self) -> usize {
        self.ranks.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// Rank of C_i; zero outside the stored range.
    pub fn rank(&self, i: isize) -> usize {
        if i < 0 {
            0
        } else {
            self.ranks.get(i as usize).copied().unwrap_or(0)
        }
    }

    /// d_i : C_i → C_{i−1}; a zero matrix of the right shape outside 1..=len.
    pub fn d(&self, i: isize) -> PolyMatrix {
        if i >= 1 && (i as usize) <= self.diffs.len() {
            self.diffs[i as usize - 1].clone()
        } else {
            PolyMatrix::zero(self.ring, self.rank(i - 1), self.rank(i))
        }
    }

    pub fn diffs(&self) -> &[PolyMatrix] {
        &self.diffs
    }
}

/// True iff all consecutive differentials compose to zero.
pub fn check_complex(c: &FreeComplex) -> bool {
    (1..c.diffs.len()).all(|i| c.diffs[i - 1].mul(&c.diffs[i]).is_zero())
}

/// Family `f_i : C_i → D_{i+shift}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub shift: isize,
    pub maps: Vec<PolyMatrix>,
}

impl ChainMap {
    pub fn new(maps: Vec<PolyMatrix>) -> Self {
        ChainMap { shift: 0, maps }
    }

    pub fn map(&self, i: isize, source: &FreeComplex, target: &FreeComplex) -> PolyMatrix {
        if i >= 0 && (i as usize) < self.maps.len() {
            self.maps[i as usize].clone()
        } else {
            PolyMatrix::zero(source.ring(), target.rank(i + self.shift), source.rank(i))
        }
    }
}

/// True iff `d_D ∘ f_i = (−1)^shift f_{i−1} ∘ d_C` in every degree.
pub fn check_chain_map(f: &ChainMap, source: &FreeComplex, target: &FreeComplex) -> Result<bool, ComplexError> {
    for (i, m) in f.maps.iter().enumerate() {
        let expect = (target.rank(i as isize + f.shift), source.rank(i as isize));
        if m.shape() != expect {
            return Err(ComplexError::ShapeMismatch(format!("map in degree {i} is {:?}, expected {:?}", m.shape(), expect)));
        }
    }
    let top = source.len() as isize;
    for i in 1..=top {
        let lhs = target.d(i + f.shift).mul(&f.map(i, source, target));
        let rhs = f.map(i - 1, source, target).mul(&source.d(i));
        let rhs = if f.shift % 2 != 0 { rhs.neg() } else { rhs };
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Fixed columns of `h_degree`.
#[derive(Clone, Debug)]
pub struct Prescription {
    pub degree: usize,
    pub columns: Vec<usize>,
    /// `rank D_{degree+1} × columns.len()`
    pub value: PolyMatrix,
}

impl Prescription {
    pub fn zero(ring: Ring, degree: usize, columns: Vec<usize>, target_rank: usize) -> Self {
        let value = PolyMatrix::zero(ring, target_rank, columns.len());
        Prescription { degree, columns, value }
    }
}

/// Maps `h_i : C_i → D_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    pub maps: Vec<PolyMatrix>,
}

/// Finds `h` with `c_i = h_{i−1}∘b_i + d_{i+1}∘h_i` for all i, lifting degree by
/// degree from the bottom and honoring the prescribed columns.
pub fn build_homotopy(
    c: &ChainMap,
    source: &FreeComplex,
    target: &FreeComplex,
    prescribed: &[Prescription],
) -> Result<Homotopy, ComplexError> {
    let ring = source.ring();
    let mut maps: Vec<PolyMatrix> = Vec::new();
    for i in 0..=source.len() {
        let ii = i as isize;
        let prev = if i == 0 { PolyMatrix::zero(ring, target.rank(ii), source.rank(ii - 1)) } else { maps[i - 1].clone() };
        let residual = c.map(ii, source, target).sub(&prev.mul(&source.d(ii)));
        let dt = target.d(ii + 1);
        let mut h = PolyMatrix::zero(ring, target.rank(ii + 1), source.rank(ii));
        let mut fixed = vec![false; source.rank(ii)];
        for p in prescribed.iter().filter(|p| p.degree == i) {
            for (k, &col) in p.columns.iter().enumerate() {
                for r in 0..h.rows() {
                    h.set(r, col, p.value.get(r, k).clone());
                }
                fixed[col] = true;
            }
        }
        let free: Vec<usize> = (0..source.rank(ii)).filter(|&j| !fixed[j]).collect();
        let fixed_cols: Vec<usize> = (0..source.rank(ii)).filter(|&j| fixed[j]).collect();
        if !fixed_cols.is_empty() {
            let lhs = dt.mul(&h.select_cols(&fixed_cols));
            if lhs != residual.select_cols(&fixed_cols) {
                return Err(ComplexError::PrescriptionViolated { degree: i });
            }
        }
        if !free.is_empty() {
            let want = residual.select_cols(&free);
            let sol = if dt.cols() == 0 {
                if want.is_zero() {
                    PolyMatrix::zero(ring, 0, free.len())
                } else {
                    return Err(ComplexError::LiftFailed {
                        degree: i,
                        source: RingError::NotInImage { column: 0, residual: "nonzero map into a zero module".into() },
                    });
                }
            } else {
                solve_lift(&dt, &want).map_err(|source| ComplexError::LiftFailed { degree: i, source })?
            };
            for (k, &col) in free.iter().enumerate() {
                for r in 0..h.rows() {
                    h.set(r, col, sol.get(r, k).clone());
                }
            }
        }
        maps.push(h);
    }
    let hom = Homotopy { maps };
    for i in 0..=source.len() {
        if !homotopy_identity_holds(c, source, target, &hom, i) {
            return Err(ComplexError::LiftFailed {
                degree: i,
                source: RingError::NotInImage { column: 0, residual: "postcondition".into() },
            });
        }
    }
    Ok(hom)
}

fn homotopy_identity_holds(c: &ChainMap, source: &FreeComplex, target: &FreeComplex, h: &Homotopy, i: usize) -> bool {
    let ring = source.ring();
    let ii = i as isize;
    let prev = if i == 0 { PolyMatrix::zero(ring, target.rank(ii), source.rank(ii - 1)) } else { h.maps[i - 1].clone() };
    let rhs = prev.mul(&source.d(ii)).add(&target.d(ii + 1).mul(&h.maps[i]));
    rhs == c.map(ii, source, target)
}

/// Cone of `F : C → D` with `L_i = C_{i−1} ⊕ D_i` and `ℓ_i = [[c_{i−1}, 0], [F_{i−1}, −d_i]]`.
pub fn mapping_cone(f: &ChainMap, source: &FreeComplex, target: &FreeComplex) -> Result<FreeComplex, ComplexError> {
    if !check_chain_map(f, source, target)? {
        let bad = (1..=source.len() as isize)
            .find(|&i| target.d(i).mul(&f.map(i, source, target)) != f.map(i - 1, source, target).mul(&source.d(i)))
            .unwrap_or(0);
        return Err(ComplexError::NotAChainMap(bad as usize));
    }
    let ring = source.ring();
    let top = (source.len() + 1).max(target.len());
    let ranks: Vec<usize> = (0..=top as isize).map(|i| source.rank(i - 1) + target.rank(i)).collect();
    let mut diffs = Vec::new();
    for i in 1..=top as isize {
        let top_left = source.d(i - 1);
        let top_right = PolyMatrix::zero(ring, source.rank(i - 2), target.rank(i));
        let bottom_left = f.map(i - 1, source, target);
        let bottom_right = target.d(i).neg();
        diffs.push(PolyMatrix::block(&[vec![top_left, top_right], vec![bottom_left, bottom_right]]));
    }
    FreeComplex::new(ring, ranks, diffs)
}

/// Reduction of matrix entries modulo the principal ideal (f).
#[derive(Clone, Debug)]
pub struct ModF {
    gb: GroebnerBasis,
}

impl ModF {
    pub fn new(f: &Poly) -> Self {
        assert!(!f.is_zero(), "reduction modulo the zero polynomial");
        ModF { gb: ideal_gb(f.ring(), std::slice::from_ref(f)) }
    }

    pub fn poly(&self, p: &Poly) -> Poly {
        ideal_normal_form(&self.gb, p)
    }

    pub fn matrix(&self, a: &PolyMatrix) -> PolyMatrix {
        a.map(|p| self.poly(p))
    }

    pub fn is_zero(&self, a: &PolyMatrix) -> bool {
        a.entries().iter().all(|p| self.poly(p).is_zero())
    }
}

pub fn reduce_mod_f(a: &PolyMatrix, f: &Poly) -> PolyMatrix {
    ModF::new(f).matrix(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, Field};

    fn setup() -> (Ring, Vec<String>) {
        (Ring::new(Field::Prime(101), 2), vec!["x".into(), "y".into()])
    }

    fn p(s: &str) -> Poly {
        let (r, v) = setup();
        parse_poly(s, &v, r.field).unwrap()
    }

    fn one_by_one(s: &str) -> PolyMatrix {
        PolyMatrix::from_rows(setup().0, vec![vec![p(s)]])
    }

    #[test]
    fn complex_property() {
        let r = setup().0;
        let ok = FreeComplex::new(r, vec![1, 1], vec![one_by_one("x")]).unwrap();
        assert!(check_complex(&ok));
        let bad = FreeComplex::new(r, vec![1, 1, 1], vec![one_by_one("x"), one_by_one("y")]).unwrap();
        assert!(!check_complex(&bad));
        assert!(FreeComplex::new(r, vec![2, 1], vec![one_by_one("x")]).is_err());
    }

    #[test]
    fn reduction_mod_f() {
        assert_eq!(reduce_mod_f(&one_by_one("x^2"), &p("x^2 - y")), one_by_one("y"));
        assert!(reduce_mod_f(&one_by_one("x^2 - y"), &p("x^2 - y")).is_zero());
        assert_eq!(reduce_mod_f(&one_by_one("1"), &p("x^2 - y")), one_by_one("1"));
    }

    #[test]
    fn cone_of_identity() {
        let r = setup().0;
        let c = FreeComplex::new(r, vec![1], vec![]).unwrap();
        let id = ChainMap::new(vec![PolyMatrix::identity(r, 1)]);
        let l = mapping_cone(&id, &c, &c).unwrap();
        assert_eq!(l.ranks(), &[1, 1]);
        assert_eq!(l.d(1), one_by_one("1"));
        assert!(check_complex(&l));
    }

    #[test]
    fn impossible_prescription() {
        let r = setup().0;
        // C = D = P in degree 0 only; c_0 = 1 cannot be h_{-1} b_0 + d_1 h_0 since D_1 = 0
        let c = FreeComplex::new(r, vec![1], vec![]).unwrap();
        let m = ChainMap::new(vec![PolyMatrix::identity(r, 1)]);
        assert!(matches!(build_homotopy(&m, &c, &c, &[]), Err(ComplexError::LiftFailed { degree: 0, .. })));
    }
}
