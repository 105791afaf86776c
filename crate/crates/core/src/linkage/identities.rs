//! Exact verification of every identity the construction relies on. Each
//! function returns a `Report` of named checks; nothing here mutates state.

use crate::dga::{koszul_basis, DgaBundle};
use crate::report::Report;
use crate::ring::{invert_unimodular, syzygy_module, Poly, PolyMatrix};

use super::{AlphaBeta, PipelineState};

/// Hypotheses (a)–(e) on a candidate X and its dagger.
pub(crate) fn hypotheses_report(m: &DgaBundle, ab: &AlphaBeta, x: &PolyMatrix, xd: &PolyMatrix) -> Report {
    let ring = m.ring();
    let (n1, n2) = (m.rank(1), m.rank(2));
    let mut r = Report::new();
    r.expect_zero("x_kills_alpha1", &x.mul(&ab.alpha[1]));
    r.expect_eq(
        "m2_x",
        &m.d(2).mul(x),
        &PolyMatrix::scalar(ring, n1, &ab.beta0).sub(&ab.alpha[1].mul(&ab.beta[1])),
    );
    r.expect_eq(
        "x_m2_plus_m3_xdagger",
        &x.mul(&m.d(2)).add(&m.d(3).mul(xd)),
        &PolyMatrix::scalar(ring, n2, &ab.beta0).sub(&ab.alpha[2].mul(&ab.beta[2])),
    );
    r.expect_zero("xdagger_x", &xd.mul(x));
    r.expect_zero("xdagger_kills_alpha2", &xd.mul(&ab.alpha[2]));
    r
}

pub fn verify_hypotheses(st: &PipelineState) -> Report {
    hypotheses_report(&st.m, &st.ab, &st.x.x, &st.x.x_dagger)
}

/// Hypotheses (a)–(e) for an arbitrary candidate X : M₁ → M₂ in the setting of `st`.
pub fn check_candidate_x(st: &PipelineState, x: &PolyMatrix) -> Result<Report, crate::dga::DgaError> {
    let xd = crate::dga::dagger(&st.m, x)?;
    Ok(hypotheses_report(&st.m, &st.ab, x, &xd))
}

fn scalar(st: &PipelineState, n: usize, p: &Poly) -> PolyMatrix {
    PolyMatrix::scalar(st.ring, n, p)
}

/// Zero map K_i → K_j or M_i → M_j when an index leaves 0..=4.
fn k_d(st: &PipelineState, i: isize) -> PolyMatrix {
    st.k.complex.d(i)
}

fn m_d(st: &PipelineState, i: isize) -> PolyMatrix {
    st.m.complex.d(i)
}

fn z_map(st: &PipelineState, i: isize, k: bool) -> PolyMatrix {
    let (src, tgt) = if k { (&st.k, &st.k) } else { (&st.m, &st.m) };
    if (0..4).contains(&i) {
        if k {
            st.sigma.z[i as usize].clone()
        } else {
            st.sigma.w[i as usize].clone()
        }
    } else {
        let rk = |b: &DgaBundle, j: isize| if (0..=4).contains(&j) { b.rank(j as usize) } else { 0 };
        PolyMatrix::zero(st.ring, rk(tgt, i + 1), rk(src, i))
    }
}

fn chain_maps(st: &PipelineState, r: &mut Report) {
    let ab = &st.ab;
    for i in 1..=4 {
        r.expect_eq(format!("beta_chain_map_{i}"), &st.k.d(i).mul(&ab.beta[i]), &ab.beta[i - 1].mul(&st.m.d(i)));
        r.expect_eq(format!("alpha_chain_map_{i}"), &st.m.d(i).mul(&ab.alpha[i]), &ab.alpha[i - 1].mul(&st.k.d(i)));
    }
    r.push(
        "beta4_is_orientation",
        (*ab.beta[4].get(0, 0) != st.m.orientation)
            .then(|| format!("β₄ = {} but the orientation is {}", ab.beta[4].get(0, 0), st.m.orientation)),
    );
}

/// β∘α = β₀(1), the duality of α∘β, the module property of β, and the M₃ split.
fn beta_alpha_family(st: &PipelineState, r: &mut Report) {
    let (k, m, ab) = (&st.k, &st.m, &st.ab);
    for i in 0..=4 {
        r.expect_eq(format!("beta_alpha_{i}"), &ab.beta[i].mul(&ab.alpha[i]), &scalar(st, k.rank(i), &ab.beta0));
    }
    let mut failure = None;
    'outer: for i in 0..=4 {
        let j = 4 - i;
        let ab_j = ab.alpha[j].mul(&ab.beta[j]);
        let ab_i = ab.alpha[i].mul(&ab.beta[i]);
        for s in 0..m.rank(i) {
            for t in 0..m.rank(j) {
                let lhs = m.product(i, &m.unit_vec(i, s), j, &ab_j.column(t));
                let rhs = m.product(i, &ab_i.column(s), j, &m.unit_vec(j, t));
                if lhs != rhs {
                    failure = Some(format!("degrees ({i},{j}), basis ({s},{t})"));
                    break 'outer;
                }
            }
        }
    }
    r.push("alpha_beta_self_dual", failure);

    let mut failure = None;
    'module: for i in 0..=4 {
        for j in 0..=i {
            let alpha_ij = &ab.alpha[i - j];
            for s in 0..m.rank(j) {
                let bj = ab.beta[j].column(s);
                for t in 0..k.rank(i - j) {
                    let lhs = ab.beta[i].mul_vec(&m.product(j, &m.unit_vec(j, s), i - j, &alpha_ij.column(t)));
                    let rhs = k.product(j, &bj, i - j, &k.unit_vec(i - j, t));
                    if lhs != rhs {
                        failure = Some(format!("β_{i}(b_{s}·α(e_{t})) with b_{s} in degree {j}"));
                        break 'module;
                    }
                }
            }
        }
    }
    r.push("beta_module_map", failure);

    let s3 = &st.split3;
    r.expect_zero("beta3_kills_m32", &ab.beta[3].mul(&s3.basis32));
    let b31 = ab.beta[3].mul(&s3.basis31);
    match invert_unimodular(&b31) {
        Ok(inv) => {
            r.expect_eq("beta3_inverse_on_m31", &s3.basis31.mul(&inv).mul(&ab.beta[3]), &s3.proj31);
            let lhs = st.sigma.w[3].mul(&s3.basis31).mul(&inv).mul(&st.sigma.z[2]);
            r.expect_zero("w3_kills_lifted_z2", &lhs);
        }
        Err(e) => r.push("beta3_inverse_on_m31", Some(e.to_string())),
    }
}

fn sigma_family(st: &PipelineState, r: &mut Report) {
    let (k, m, ab, sg) = (&st.k, &st.m, &st.ab, &st.sigma);
    let k1s = st.k1_sigma();
    r.push(
        "decomposition",
        (st.f != sg.r.mul(&ab.beta0).add(&k1s)).then(|| "f ≠ r·β₀(1) + k₁(σ)".to_string()),
    );
    for i in 0..3 {
        r.expect_zero(format!("z_squared_{i}"), &sg.z[i + 1].mul(&sg.z[i]));
        r.expect_zero(format!("w_squared_{i}"), &sg.w[i + 1].mul(&sg.w[i]));
    }
    for i in 0..4 {
        r.expect_eq(format!("alpha_intertwines_sigma_{i}"), &ab.alpha[i + 1].mul(&sg.z[i]), &sg.w[i].mul(&ab.alpha[i]));
        r.expect_eq(format!("beta_intertwines_sigma_{i}"), &ab.beta[i + 1].mul(&sg.w[i]), &sg.z[i].mul(&ab.beta[i]));
    }
    for i in 0..=4isize {
        let sign = if i % 2 == 0 { k1s.neg() } else { k1s.clone() };
        let lhs = z_map(st, i - 1, true).mul(&k_d(st, i)).sub(&k_d(st, i + 1).mul(&z_map(st, i, true)));
        r.expect_eq(format!("z_homotopy_{i}"), &lhs, &scalar(st, k.rank(i as usize), &sign));
        let lhs = z_map(st, i - 1, false).mul(&m_d(st, i)).sub(&m_d(st, i + 1).mul(&z_map(st, i, false)));
        r.expect_eq(format!("w_homotopy_{i}"), &lhs, &scalar(st, m.rank(i as usize), &sign));
    }
}

fn dagger_family(st: &PipelineState, r: &mut Report) {
    let (m, ab) = (&st.m, &st.ab);
    let (x, xd) = (&st.x.x, &st.x.x_dagger);
    r.expect_zero("beta3_xdagger", &ab.beta[3].mul(xd));
    r.expect_zero("beta2_x", &ab.beta[2].mul(x));
    r.expect_zero("w3_xdagger", &st.sigma.w[3].mul(xd));
    r.expect_zero("xdagger_lands_in_m32", &st.split3.proj31.mul(xd));
    r.expect_eq(
        "xdagger_m3_plus_alpha3_beta3",
        &xd.mul(&m.d(3)).add(&ab.alpha[3].mul(&ab.beta[3])),
        &scalar(st, m.rank(3), &ab.beta0),
    );
}

fn x_sigma_family(st: &PipelineState, r: &mut Report) {
    let (m, ab, sg, s3) = (&st.m, &st.ab, &st.sigma, &st.split3);
    let (x, xd) = (&st.x.x, &st.x.x_dagger);
    let m12 = &m.split.m12;
    let (w1, w2) = (&sg.w[1], &sg.w[2]);
    let (y, wm) = (&sg.y, &sg.w_map);
    let (m2, m3) = (m.d(2), m.d(3));
    r.expect_eq("w2_x_equals_xdagger_w1", &w2.mul(x), &xd.mul(w1));
    r.expect_zero("y_w1_on_m12", &y.mul(w1).select_cols(m12));
    r.expect_zero("beta2_w1_plus_y_x_on_m12", &ab.beta[2].mul(w1).add(&y.mul(x)).select_cols(m12));
    r.expect_eq(
        "w1_proj12_m2_plus_alpha2_y",
        &w1.mul(&st.proj12()).mul(&m2).add(&ab.alpha[2].mul(y)),
        &w1.mul(&m2),
    );
    r.expect_eq("w_beta2_plus_m3_proj32_w2", &wm.mul(&ab.beta[2]).add(&m3.mul(&s3.proj32).mul(w2)), &m3.mul(w2));
    r.expect_zero("proj32_w2_w", &s3.proj32.mul(w2).mul(wm));
    r.expect_zero("proj32_xdagger_w_plus_w2_alpha2", &s3.proj32.mul(&xd.mul(wm).add(&w2.mul(&ab.alpha[2]))));
    r.expect_eq("beta2_w_minus_y_alpha2", &ab.beta[2].mul(wm).sub(&y.mul(&ab.alpha[2])), &scalar(st, 6, &st.k1_sigma()));
}

fn factorization_prereqs(st: &PipelineState, r: &mut Report) {
    let (k, m, ab, sg) = (&st.k, &st.m, &st.ab, &st.sigma);
    let (x, xd) = (&st.x.x, &st.x.x_dagger);
    let rr = &sg.r;
    let f = &st.f;
    let m12 = &m.split.m12;
    let rb2_y = ab.beta[2].scale(rr).sub(&sg.y);
    let rx_w1 = x.scale(rr).sub(&sg.w[1]);
    r.expect_eq("r_beta2_minus_y_alpha2", &rb2_y.mul(&ab.alpha[2]).add(&k.d(3).mul(&sg.z[2])), &scalar(st, 6, f));
    let m2_12 = m.d(2).select_rows(m12);
    r.expect_eq("m2_rx_minus_w1_on_m12", &m2_12.mul(&rx_w1.select_cols(m12)), &scalar(st, m12.len(), f));
    r.expect_eq(
        "top_degree_factor",
        &sg.w[3].mul(&m.d(4)).neg().add(&ab.alpha[4].mul(&ab.beta[4]).scale(rr)),
        &scalar(st, 1, f),
    );
    let lhs = rx_w1
        .select_cols(m12)
        .mul(&m2_12)
        .add(&ab.alpha[2].mul(&rb2_y))
        .add(&m.d(3).mul(&xd.scale(rr).add(&sg.w[2])));
    r.expect_eq("degree_two_factor", &lhs, &scalar(st, m.rank(2), f));
}

fn divided_powers(st: &PipelineState, r: &mut Report) {
    let (k, m, ab) = (&st.k, &st.m, &st.ab);
    let mut failure = None;
    let basis = koszul_basis(2);
    'outer: for s in 0..basis.len() {
        if m.square2(&ab.alpha[2].column(s)).iter().any(|p| !p.is_zero()) {
            failure = Some(format!("α₂(e_{s})^(2) ≠ 0"));
            break;
        }
        for t in s + 1..basis.len() {
            let sum: Vec<Poly> = ab.alpha[2].column(s).iter().zip(ab.alpha[2].column(t)).map(|(a, b)| a.add(&b)).collect();
            let expect = ab.alpha[4].mul_vec(&k.basis_product(2, s, 2, t));
            if m.square2(&sum) != expect {
                failure = Some(format!("α₂(e_{s} + e_{t})^(2) ≠ α₄(e_{s}·e_{t})"));
                break 'outer;
            }
        }
    }
    r.push("alpha_preserves_divided_squares", failure);
}

fn syzygy_checks(st: &PipelineState, r: &mut Report) {
    let (m, ab) = (&st.m, &st.ab);
    let stacked = PolyMatrix::vstack(&[&m.d(3), &ab.beta[3]]);
    let nonzero = syzygy_module(&stacked).into_iter().any(|s| s.iter().any(|p| !p.is_zero()));
    r.push("ker_m3_meets_ker_beta3_trivially", nonzero.then(|| "nonzero common kernel element".to_string()));
    let xd = &st.x.x_dagger;
    let comp = m.d(3).mul(xd);
    let bad = syzygy_module(&comp).into_iter().any(|s| xd.mul_vec(&s).iter().any(|p| !p.is_zero()));
    r.push("ker_m3_meets_im_xdagger_trivially", bad.then(|| "m₃ kills a nonzero element of im X†".to_string()));
}

/// The full identity suite. Syzygy-based kernel checks are opt-in.
pub fn verify_identity_suite(st: &PipelineState, with_syzygies: bool) -> Report {
    let mut r = verify_hypotheses(st);
    chain_maps(st, &mut r);
    beta_alpha_family(st, &mut r);
    sigma_family(st, &mut r);
    dagger_family(st, &mut r);
    x_sigma_family(st, &mut r);
    factorization_prereqs(st, &mut r);
    divided_powers(st, &mut r);
    if with_syzygies {
        syzygy_checks(st, &mut r);
    }
    r
}

/// Left-associated product of homogeneous factors given as (degree, coordinates).
fn lprod(m: &DgaBundle, factors: &[(usize, Vec<Poly>)]) -> Vec<Poly> {
    let (mut deg, mut acc) = factors[0].clone();
    for (d, v) in &factors[1..] {
        acc = m.product(deg, &acc, *d, v);
        deg += d;
    }
    acc
}

/// The higher-order multiplication displays and the null homotopy of β₀(1) − αβ.
pub fn verify_higher_multiplication(st: &PipelineState) -> Report {
    let (m, ab) = (&st.m, &st.ab);
    let ring = st.ring;
    let (n1, n2) = (m.rank(1), m.rank(2));
    let a: Vec<(usize, Vec<Poly>)> = (0..4).map(|i| (1, ab.alpha[1].column(i))).collect();
    let full = m.bracket(&lprod(m, &a));
    let mut r = Report::new();

    let m2x = m.d(2).mul(&st.x.x);
    let mut failure = None;
    for s in 0..n1 {
        let theta = (1, m.unit_vec(1, s));
        let mut expect: Vec<Poly> = theta.1.iter().map(|p| p.mul(&full)).collect();
        for i in 0..4 {
            let mut factors = vec![theta.clone()];
            factors.extend(a.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, f)| f.clone()));
            let coeff = m.bracket(&lprod(m, &factors));
            let coeff = if i % 2 == 0 { coeff.neg() } else { coeff };
            for (e, ai) in expect.iter_mut().zip(&a[i].1) {
                *e = e.add(&coeff.mul(ai));
            }
        }
        if m2x.column(s) != expect {
            failure = Some(format!("m₂X(b_{s})"));
            break;
        }
    }
    r.push("higher_multiplication_degree_one", failure);

    // (pair in the bracket with θ₂, complementary pair multiplying θ₂′, sign)
    let terms: [((usize, usize), (usize, usize), i64); 6] = [
        ((2, 3), (0, 1), -1),
        ((1, 3), (0, 2), 1),
        ((1, 2), (0, 3), -1),
        ((0, 1), (2, 3), -1),
        ((0, 2), (1, 3), 1),
        ((0, 3), (1, 2), -1),
    ];
    let xm2 = st.x.x.mul(&m.d(2));
    let mut failure = None;
    'pairs: for s in 0..n2 {
        for t in s..n2 {
            let (th, th2) = (m.unit_vec(2, s), m.unit_vec(2, t));
            let lhs = m
                .bracket(&m.product(2, &xm2.column(s), 2, &th2))
                .add(&m.bracket(&m.product(2, &xm2.column(t), 2, &th)));
            let mut rhs = full.mul(&m.bracket(&m.product(2, &th, 2, &th2)));
            for &((i, j), (k, l), sign) in &terms {
                let left = m.bracket(&lprod(m, &[(2, th.clone()), a[i].clone(), a[j].clone()]));
                let right = m.bracket(&lprod(m, &[a[k].clone(), a[l].clone(), (2, th2.clone())]));
                let term = left.mul(&right);
                rhs = if sign > 0 { rhs.add(&term) } else { rhs.sub(&term) };
            }
            if lhs != rhs {
                failure = Some(format!("pair (b_{s}, b_{t}) in degree 2"));
                break 'pairs;
            }
        }
    }
    r.push("higher_multiplication_degree_two", failure);

    // h₀ = 0, h₁ = X, h₂ = X†, h₃ = 0
    let h = |i: isize| -> PolyMatrix {
        match i {
            1 => st.x.x.clone(),
            2 => st.x.x_dagger.clone(),
            _ => {
                let rk = |j: isize| if (0..=4).contains(&j) { m.rank(j as usize) } else { 0 };
                PolyMatrix::zero(ring, rk(i + 1), rk(i))
            }
        }
    };
    for i in 0..=4isize {
        let lhs = m_d(st, i + 1).mul(&h(i)).add(&h(i - 1).mul(&m_d(st, i)));
        let rhs = scalar(st, m.rank(i as usize), &ab.beta0).sub(&ab.alpha[i as usize].mul(&ab.beta[i as usize]));
        r.expect_eq(format!("null_homotopy_{i}"), &lhs, &rhs);
    }
    r
}
