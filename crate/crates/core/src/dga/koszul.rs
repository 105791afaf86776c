use crate::complexes::FreeComplex;
use crate::ring::{Poly, PolyMatrix};

use super::{DgaBundle, Split};

/// Subsets of {0,1,2,3} of size i, each sorted, in lexicographic order.
pub fn koszul_basis(i: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u32..16 {
        if mask.count_ones() as usize == i {
            out.push((0..4).filter(|b| mask & (1 << b) != 0).collect::<Vec<usize>>());
        }
    }
    out.sort();
    out
}

/// Position of a sorted subset in `koszul_basis(subset.len())`.
pub fn koszul_index(set: &[usize]) -> usize {
    koszul_basis(set.len()).iter().position(|s| s == set).expect("valid subset")
}

/// e_S ∧ e_T = sign · e_{S∪T}, or None when S and T meet.
fn wedge(s: &[usize], t: &[usize]) -> Option<(i64, Vec<usize>)> {
    if s.iter().any(|x| t.contains(x)) {
        return None;
    }
    let inversions = s.iter().map(|&x| t.iter().filter(|&&y| x > y).count()).sum::<usize>();
    let mut u: Vec<usize> = s.iter().chain(t.iter()).copied().collect();
    u.sort();
    Some((if inversions % 2 == 0 { 1 } else { -1 }, u))
}

/// The Koszul complex on four elements as a DGΓ algebra: exterior products,
/// trivial divided squares on basis elements, orientation [e₁₂₃₄] = 1, and
/// M₁,₁ = all of K₁.
pub fn build_koszul(a: &[Poly]) -> DgaBundle {
    assert_eq!(a.len(), 4, "Koszul algebra needs four generators");
    let ring = a[0].ring();
    let ranks: Vec<usize> = (0..=4).map(|i| koszul_basis(i).len()).collect();
    let mut diffs = Vec::new();
    for i in 1..=4 {
        let src = koszul_basis(i);
        let mut d = PolyMatrix::zero(ring, ranks[i - 1], ranks[i]);
        for (col, s) in src.iter().enumerate() {
            for (p, &j) in s.iter().enumerate() {
                let rest: Vec<usize> = s.iter().copied().filter(|&x| x != j).collect();
                let row = koszul_index(&rest);
                let term = if p % 2 == 0 { a[j].clone() } else { a[j].neg() };
                d.set(row, col, d.get(row, col).add(&term));
            }
        }
        diffs.push(d);
    }
    let complex = FreeComplex::new(ring, ranks.clone(), diffs).expect("Koszul shapes");
    let mut mult: Vec<Vec<Option<PolyMatrix>>> = vec![vec![None; 5]; 5];
    for i in 0..=4 {
        for j in 0..=4 {
            if i + j > 4 {
                continue;
            }
            let bi = koszul_basis(i);
            let bj = koszul_basis(j);
            let mut m = PolyMatrix::zero(ring, ranks[i + j], ranks[i] * ranks[j]);
            for (s, x) in bi.iter().enumerate() {
                for (t, y) in bj.iter().enumerate() {
                    if let Some((sign, u)) = wedge(x, y) {
                        m.set(koszul_index(&u), s * ranks[j] + t, ring.from_i64(sign));
                    }
                }
            }
            mult[i][j] = Some(m);
        }
    }
    let sq2 = PolyMatrix::zero(ring, 1, ranks[2]);
    DgaBundle::new(complex, mult, Some(sq2), ring.one(), Split { m11: vec![0, 1, 2, 3], m12: vec![] })
        .expect("Koszul bundle is well formed")
}
