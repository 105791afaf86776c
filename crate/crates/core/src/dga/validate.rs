use crate::complexes::check_complex;
use crate::report::Report;
use crate::ring::{ideal_gb, ideal_normal_form, invert_unimodular, Poly, PolyMatrix};

use super::DgaBundle;

fn sign(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn scaled(v: &[Poly], c: i64) -> Vec<Poly> {
    v.iter().map(|p| if c == 1 { p.clone() } else { p.neg() }).collect()
}

fn add(a: &[Poly], b: &[Poly]) -> Vec<Poly> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

fn graded_commutativity(b: &DgaBundle) -> Option<String> {
    for i in 1..=4 {
        for j in 1..=4 - i {
            for s in 0..b.rank(i) {
                for t in 0..b.rank(j) {
                    let lhs = b.basis_product(i, s, j, t);
                    let rhs = scaled(&b.basis_product(j, t, i, s), sign(i * j));
                    if lhs != rhs {
                        return Some(format!("b_{s}·b_{t} in degrees ({i},{j})"));
                    }
                }
            }
        }
    }
    None
}

fn odd_squares(b: &DgaBundle) -> Option<String> {
    (0..b.rank(1))
        .find(|&s| b.basis_product(1, s, 1, s).iter().any(|p| !p.is_zero()))
        .map(|s| format!("b_{s}·b_{s} ≠ 0 in degree 1"))
}

fn associativity(b: &DgaBundle) -> Option<String> {
    for i in 1..=2 {
        for j in 1..=3 - i {
            for k in 1..=4 - i - j {
                for s in 0..b.rank(i) {
                    for t in 0..b.rank(j) {
                        let st = b.basis_product(i, s, j, t);
                        for u in 0..b.rank(k) {
                            let left = b.product(i + j, &st, k, &b.unit_vec(k, u));
                            let tu = b.basis_product(j, t, k, u);
                            let right = b.product(i, &b.unit_vec(i, s), j + k, &tu);
                            if left != right {
                                return Some(format!("degrees ({i},{j},{k}), basis ({s},{t},{u})"));
                            }
                        }
                    }
                }
            }
        }
    }
    None
}

fn leibniz(b: &DgaBundle) -> Option<String> {
    for i in 1..=3 {
        for j in 1..=4 - i {
            let (di, dj, dij) = (b.d(i), b.d(j), b.d(i + j));
            for s in 0..b.rank(i) {
                for t in 0..b.rank(j) {
                    let lhs = dij.mul_vec(&b.basis_product(i, s, j, t));
                    let first = b.product(i - 1, &di.column(s), j, &b.unit_vec(j, t));
                    let second = b.product(i, &b.unit_vec(i, s), j - 1, &dj.column(t));
                    let rhs = add(&first, &scaled(&second, sign(i)));
                    if lhs != rhs {
                        return Some(format!("d(b_{s}·b_{t}) in degrees ({i},{j})"));
                    }
                }
            }
        }
    }
    None
}

fn divided_square_boundary(b: &DgaBundle) -> Option<String> {
    let (d2, d4) = (b.d(2), b.d(4));
    (0..b.rank(2))
        .find(|&t| {
            let lhs = d4.mul_vec(&b.sq2.column(t));
            let rhs = b.product(1, &d2.column(t), 2, &b.unit_vec(2, t));
            lhs != rhs
        })
        .map(|t| format!("m4(b_{t}^(2)) ≠ m2(b_{t})·b_{t}"))
}

fn divided_square_consistency(b: &DgaBundle) -> Option<String> {
    let two = b.ring().field.from_i64(2);
    (0..b.rank(2))
        .find(|&t| b.basis_product(2, t, 2, t)[0] != b.sq2.get(0, t).scale(&two))
        .map(|t| format!("b_{t}·b_{t} ≠ 2·b_{t}^(2)"))
}

fn unit_tables(b: &DgaBundle) -> Option<String> {
    let ring = b.ring();
    (0..=4)
        .find(|&j| {
            let id = PolyMatrix::identity(ring, b.rank(j));
            *b.mu(0, j) != id || *b.mu(j, 0) != id
        })
        .map(|j| format!("unit table in degree {j}"))
}

/// Entries of the M₁,₁ columns of m₁ generate the same ideal as `k`.
fn split_generates(b: &DgaBundle, k: &[Poly]) -> Option<String> {
    let ring = b.ring();
    let m11: Vec<Poly> = b.d(1).select_cols(&b.split.m11).row(0);
    let gk = ideal_gb(ring, k);
    let gm = ideal_gb(ring, &m11);
    if let Some(p) = m11.iter().find(|p| !ideal_normal_form(&gk, p).is_zero()) {
        return Some(format!("M11 entry {p} is not in the ideal of a"));
    }
    if let Some(p) = k.iter().find(|p| !ideal_normal_form(&gm, p).is_zero()) {
        return Some(format!("a-entry {p} is not generated by the M11 columns"));
    }
    None
}

/// Runs every structural check on a bundle. With `k` supplied, also checks
/// that the M₁,₁ columns of m₁ generate the ideal (k).
pub fn validate_dga(b: &DgaBundle, k: Option<&[Poly]>) -> Report {
    let mut r = Report::new();
    r.push("complex", (!check_complex(&b.complex)).then(|| "m∘m ≠ 0".to_string()));
    r.push("unit", unit_tables(b));
    r.push("graded_commutativity", graded_commutativity(b));
    r.push("odd_squares", odd_squares(b));
    r.push("associativity", associativity(b));
    r.push("leibniz", leibniz(b));
    r.push("divided_square_boundary", divided_square_boundary(b));
    r.push("divided_square_consistency", divided_square_consistency(b));
    r.push(
        "orientation_unit",
        (!b.orientation.is_unit()).then(|| format!("orientation {} is not a unit", b.orientation)),
    );
    for i in 0..=4 {
        let g = super::pairing_gram(b, i);
        let failure = match invert_unimodular(&g) {
            Ok(_) => None,
            Err(e) => Some(e.to_string()),
        };
        r.push(format!("pairing_{i}"), failure);
    }
    r.push("split_m3", super::split_m3(b).err().map(|e| e.to_string()));
    if let Some(k) = k {
        r.push("split_generates_ideal", split_generates(b, k));
    }
    if b.sq2_autofilled {
        r.notes.push("divided squares derived as (b·b)/2".to_string());
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::build_koszul;
    use crate::ring::{Field, Ring};

    fn a() -> Vec<Poly> {
        let r = Ring::new(Field::Prime(32003), 4);
        (0..4).map(|i| r.var(i).pow(i as u32 + 1)).collect()
    }

    #[test]
    fn koszul_passes() {
        let a = a();
        let k = build_koszul(&a);
        let rep = validate_dga(&k, Some(&a));
        assert!(rep.passed(), "{:?}", rep.failures().collect::<Vec<_>>());
    }

    #[test]
    fn sign_flip_breaks_commutativity() {
        let a = a();
        let mut k = build_koszul(&a);
        let v = k.mult[1][1].get(0, 1).neg();
        k.mult[1][1].set(0, 1, v);
        let rep = validate_dga(&k, None);
        let failed: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"graded_commutativity"));
        assert!(failed.contains(&"leibniz"));
    }

    #[test]
    fn wrong_ideal_is_reported() {
        let a = a();
        let k = build_koszul(&a);
        let ring = k.ring();
        let other: Vec<Poly> = (0..4).map(|i| ring.var(i)).collect();
        let rep = validate_dga(&k, Some(&other));
        assert!(!rep.passed());
    }
}
