//! The worked examples: E1 (r a unit), E2 (r = u) and the stretch case E3,
//! whose multiplication comes from the solver.

use crate::complexes::FreeComplex;
use crate::dg_solver::{complete_multiplication, SolverConfig, SolverError};
use crate::dga::{build_koszul, DgaBundle, Split};
use crate::linkage::{LinkageInput, LinkageOptions};
use crate::ring::{Field, Poly, PolyMatrix, Ring};

/// A linked pair ready for the pipeline.
#[derive(Clone, Debug)]
pub struct Example {
    pub name: &'static str,
    pub vars: Vec<String>,
    pub a: Vec<Poly>,
    pub f: Poly,
    pub m: DgaBundle,
}

impl Example {
    pub fn input(&self) -> LinkageInput {
        LinkageInput { a: self.a.clone(), f: self.f.clone(), m: self.m.clone(), options: LinkageOptions::default() }
    }
}

fn names(n: usize) -> Vec<String> {
    ["x", "y", "z", "w", "u"][..n].iter().map(|s| s.to_string()).collect()
}

/// F₁₀₁[x,y,z,w], K = (x,y,z,w), f = 1 + x, M = Koszul.
pub fn e1() -> Example {
    let r = Ring::new(Field::Prime(101), 4);
    let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
    Example { name: "E1", vars: names(4), m: build_koszul(&a), f: r.one().add(&r.var(0)), a }
}

/// F₁₀₁[x,y,z,w,u], K = (x,y,z,w), f = u, M = Koszul.
pub fn e2() -> Example {
    let r = Ring::new(Field::Prime(101), 5);
    let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
    Example { name: "E2", vars: names(5), m: build_koszul(&a), f: r.var(4), a }
}

/// The rank (1, 8, 14, 8, 1) resolution of F₁₀₁[x,y,z,w]/(x,y,z,w): the
/// Koszul complex plus four split strands M₂ → M₁ and four split strands
/// M₃ → M₂, with the M₁ basis twisted so that the last four generators map
/// to x², y², z², w². Returns the complex, K = (x², y², z², w²), f = xyzw and
/// the split (M₁,₁ = twisted generators, M₁,₂ = Koszul generators).
pub fn e3_complex() -> (FreeComplex, Vec<Poly>, Poly, Split) {
    let r = Ring::new(Field::Prime(101), 4);
    let v: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
    let k = build_koszul(&v);
    let (k2, k3, k4) = (k.d(2), k.d(3), k.d(4));
    let mut m1 = PolyMatrix::zero(r, 1, 8);
    let mut m2 = PolyMatrix::zero(r, 8, 14);
    let mut m3 = PolyMatrix::zero(r, 14, 8);
    let mut m4 = PolyMatrix::zero(r, 8, 1);
    for j in 0..4 {
        m1.set(0, j, v[j].clone());
        m1.set(0, 4 + j, v[j].mul(&v[j]));
        // h_j ↦ g_j = g′_j − x_j e_j
        m2.set(4 + j, 6 + j, r.one());
        m2.set(j, 6 + j, v[j].neg());
        // p_j ↦ q_j
        m3.set(10 + j, 4 + j, r.one());
        m4.set(j, 0, k4.get(j, 0).clone());
    }
    for i in 0..4 {
        for s in 0..6 {
            m2.set(i, s, k2.get(i, s).clone());
            m3.set(s, i, k3.get(s, i).clone());
        }
    }
    let complex = FreeComplex::new(r, vec![1, 8, 14, 8, 1], vec![m1, m2, m3, m4]).expect("E3 shapes");
    let a: Vec<Poly> = v.iter().map(|x| x.mul(x)).collect();
    let f = v.iter().fold(r.one(), |acc, x| acc.mul(x));
    (complex, a, f, Split { m11: vec![4, 5, 6, 7], m12: vec![0, 1, 2, 3] })
}

/// E3 with the multiplication supplied by the solver.
pub fn e3(cfg: &SolverConfig) -> Result<Example, SolverError> {
    let (c, a, f, split) = e3_complex();
    let m = complete_multiplication(&c, &c.ring().one(), &split, cfg)?;
    Ok(Example { name: "E3", vars: names(4), a, f, m })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::check_complex;

    #[test]
    fn e3_complex_is_a_complex() {
        let (c, a, f, _) = e3_complex();
        assert!(check_complex(&c));
        assert_eq!(a.len(), 4);
        assert_eq!(f.degree(), Some(4));
    }
}
