use crate::complexes::{check_chain_map, mapping_cone, ChainMap, FreeComplex};
use crate::linkage::PipelineState;
use crate::report::Report;
use crate::ring::PolyMatrix;

use super::FactorizationError;

/// β′ : M → K, the cone L of β′, and ρ_i : L_i → L_{i+1}.
#[derive(Clone, Debug)]
pub struct ConeData {
    pub beta_prime: Vec<PolyMatrix>,
    pub l: FreeComplex,
    pub rho: Vec<PolyMatrix>,
    /// One check per block identity relating ℓ and ρ.
    pub report: Report,
}

fn rank_of(c: &FreeComplex, i: isize) -> usize {
    c.rank(i)
}

/// Summand names and ranks of L_i = M_{i−1} ⊕ K_i.
fn l_summands(st: &PipelineState, i: isize) -> [(String, usize); 2] {
    [
        (format!("M{}", i - 1), rank_of(&st.m.complex, i - 1)),
        (format!("K{i}"), rank_of(&st.k.complex, i)),
    ]
}

/// Records one check per nonempty block of `lhs` against `rhs`.
fn blockwise(
    rep: &mut Report,
    name: &str,
    lhs: &PolyMatrix,
    rhs: &PolyMatrix,
    rows: &[(String, usize)],
    cols: &[(String, usize)],
) {
    let mut r0 = 0;
    for (rn, rr) in rows {
        let mut c0 = 0;
        for (cn, cc) in cols {
            if *rr > 0 && *cc > 0 {
                let a = lhs.sub_block(r0, *rr, c0, *cc);
                let b = rhs.sub_block(r0, *rr, c0, *cc);
                rep.expect_eq(format!("{name}[{rn}<-{cn}]"), &a, &b);
            }
            c0 += cc;
        }
        r0 += rr;
    }
}

pub fn build_cone_l_rho(st: &PipelineState) -> Result<ConeData, FactorizationError> {
    let (k, m, ab, sg) = (&st.k, &st.m, &st.ab, &st.sigma);
    let ring = st.ring;
    let r = &sg.r;
    let f = &st.f;

    let beta0p = sg.r.mul(&ab.beta0).add(&st.k1_sigma());
    if &beta0p != f {
        return Err(FactorizationError::IdentityFailed(format!("β′₀(1) = {beta0p} ≠ f")));
    }
    let mut beta_prime = vec![PolyMatrix::scalar(ring, 1, f)];
    beta_prime.push(ab.beta[1].scale(r).add(&sg.z[0].mul(&m.d(1))));
    for i in 2..=4 {
        beta_prime.push(ab.beta[i].scale(r));
    }
    let bp = ChainMap::new(beta_prime.clone());
    let is_map = check_chain_map(&bp, &m.complex, &k.complex)
        .map_err(|e| FactorizationError::IdentityFailed(format!("β′: {e}")))?;
    if !is_map {
        return Err(FactorizationError::IdentityFailed("β′ is not a map of complexes".into()));
    }
    let l = mapping_cone(&bp, &m.complex, &k.complex)
        .map_err(|e| FactorizationError::ComplexCheckFailed(format!("cone of β′: {e}")))?;

    let z = |rows: usize, cols: usize| PolyMatrix::zero(ring, rows, cols);
    let (n1, n2, n3) = (m.rank(1), m.rank(2), m.rank(3));
    let rx_w1 = st.x.x.scale(r).sub(&sg.w[1]);
    let rxd_w2 = st.x.x_dagger.scale(r).add(&sg.w[2]);
    let rho = vec![
        PolyMatrix::vstack(&[&ab.alpha[0], &z(4, 1)]),
        PolyMatrix::block(&[vec![z(n1, 1), ab.alpha[1].neg()], vec![z(6, 1), sg.z[1].neg()]]),
        PolyMatrix::block(&[vec![rx_w1, ab.alpha[2].clone()], vec![z(4, n1), sg.z[2].neg()]]),
        PolyMatrix::block(&[vec![rxd_w2.neg(), ab.alpha[3].neg()], vec![z(1, n2), sg.z[3].neg()]]),
        PolyMatrix::hstack(&[&sg.w[3].neg(), &ab.alpha[4]]),
    ];
    debug_assert_eq!(rho[4].shape(), (1, n3 + 1));

    let ell = |i: isize| l.d(i);
    let scalar = |i: isize, sign: i64| {
        let n = l.rank(i);
        let s = if sign > 0 { f.clone() } else { f.neg() };
        PolyMatrix::scalar(ring, n, &s)
    };
    let mut report = Report::new();
    let s = |i: isize| l_summands(st, i);
    blockwise(&mut report, "ell1_rho0", &ell(1).mul(&rho[0]), &scalar(0, 1), &s(0), &s(0));
    for i in 1..=4isize {
        let iu = i as usize;
        let lhs = rho[iu - 1].mul(&ell(i)).sub(&ell(i + 1).mul(&rho[iu]));
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let name = format!("rho{}_ell{}_minus_ell{}_rho{}", i - 1, i, i + 1, i);
        blockwise(&mut report, &name, &lhs, &scalar(i, sign), &s(i), &s(i));
    }
    blockwise(&mut report, "rho4_ell5", &rho[4].mul(&ell(5)), &scalar(5, 1), &s(5), &s(5));
    report.expect_zero("rho1_rho0", &rho[1].mul(&rho[0]));
    for i in 1..4usize {
        let prod = rho[i + 1].mul(&rho[i]);
        let zero = PolyMatrix::zero(ring, prod.rows(), prod.cols());
        blockwise(&mut report, &format!("rho{}_rho{}", i + 1, i), &prod, &zero, &s(i as isize + 2), &s(i as isize));
    }
    if let Some(c) = report.failures().next() {
        return Err(FactorizationError::IdentityFailed(format!("{}: {}", c.name, c.detail)));
    }
    Ok(ConeData { beta_prime, l, rho, report })
}
