//! Best-effort construction of a DGΓ multiplication on a self-dual free
//! resolution of length four. Products are lifted degree by degree through the
//! differentials so that Leibniz holds by construction; degree-three
//! associativity is then repaired by a linear correction of μ₁,₂ through m₄,
//! and the result is accepted only if the full validator passes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complexes::FreeComplex;
use crate::dga::{validate_dga, DgaBundle, DgaError, Split};
use crate::report::Report;
use crate::ring::{solve_lift, Poly, PolyMatrix, Ring, RingError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("solver gave up after {attempts} attempt(s); first failing check: {first_failure}")]
    SolverGaveUp { attempts: usize, first_failure: String, report: Report },
    #[error("characteristic 2 requires explicit divided-square tables")]
    CharTwoNeedsTables,
    #[error("input is not a length-four complex with rank 1 at both ends: {0}")]
    BadInput(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolverConfig {
    /// Extra attempts after the first, each with fresh free coefficients.
    pub budget: usize,
    /// Average the lifts of (s, t) and (t, s) instead of lifting one order.
    pub symmetrize: bool,
    /// Seed for the free coefficients of the associativity correction.
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { budget: 4, symmetrize: true, seed: 0 }
    }
}

impl SolverConfig {
    /// Default configuration with the seed taken from `DGMF_SEED` when set.
    pub fn from_env() -> Self {
        let seed = std::env::var("DGMF_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(0);
        SolverConfig { seed, ..Self::default() }
    }
}

/// A product table mult[i][j] with columns indexed s·rank(j) + t.
struct Tables {
    ring: Ring,
    ranks: Vec<usize>,
    mult: Vec<Vec<Option<PolyMatrix>>>,
}

impl Tables {
    fn get(&self, i: usize, j: usize) -> &PolyMatrix {
        self.mult[i][j].as_ref().expect("table computed")
    }

    /// x · e_t for x ∈ M_i (coordinates) and e_t a basis element of M_j.
    fn left(&self, i: usize, x: &[Poly], j: usize, t: usize) -> Vec<Poly> {
        let mu = self.get(i, j);
        let rj = self.ranks[j];
        let mut out = vec![self.ring.zero(); mu.rows()];
        for (s, xs) in x.iter().enumerate() {
            if xs.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let e = mu.get(r, s * rj + t);
                if !e.is_zero() {
                    *o = o.add(&e.mul(xs));
                }
            }
        }
        out
    }

    /// e_s · y for e_s a basis element of M_i and y ∈ M_j.
    fn right(&self, i: usize, s: usize, j: usize, y: &[Poly]) -> Vec<Poly> {
        let mu = self.get(i, j);
        let rj = self.ranks[j];
        let mut out = vec![self.ring.zero(); mu.rows()];
        for (t, yt) in y.iter().enumerate() {
            if yt.is_zero() {
                continue;
            }
            for (r, o) in out.iter_mut().enumerate() {
                let e = mu.get(r, s * rj + t);
                if !e.is_zero() {
                    *o = o.add(&e.mul(yt));
                }
            }
        }
        out
    }
}

fn axpy(acc: &mut [Poly], c: &Poly, v: &[Poly]) {
    for (a, x) in acc.iter_mut().zip(v) {
        *a = a.add(&c.mul(x));
    }
}

fn unit(ring: Ring, n: usize, k: usize) -> Vec<Poly> {
    let mut e = vec![ring.zero(); n];
    e[k] = ring.one();
    e
}

/// Lifts each column of `rhs` through `d`.
fn lift(d: &PolyMatrix, rhs: &[Vec<Poly>], stage: &str) -> Result<Vec<Vec<Poly>>, String> {
    if rhs.is_empty() {
        return Ok(Vec::new());
    }
    let y = PolyMatrix::from_columns(d.ring(), d.rows(), rhs);
    let sol = solve_lift(d, &y).map_err(|e: RingError| format!("{stage}: {e}"))?;
    Ok((0..sol.cols()).map(|j| sol.column(j)).collect())
}

/// Fills a table from the values on (s, t) pairs, with (t, s) given by `sign`.
fn table_from_pairs(
    ring: Ring,
    rows: usize,
    ri: usize,
    rj: usize,
    value: impl Fn(usize, usize) -> Vec<Poly>,
) -> PolyMatrix {
    let mut cols = Vec::with_capacity(ri * rj);
    for s in 0..ri {
        for t in 0..rj {
            cols.push(value(s, t));
        }
    }
    PolyMatrix::from_columns(ring, rows, &cols)
}

fn half(ring: Ring) -> Poly {
    let f = ring.field;
    ring.constant(f.inv(&f.from_i64(2)).expect("char ≠ 2"))
}

/// μ₁,₁ with m₂(ab) = m₁(a)b − a m₁(b), alternating.
fn products_11(c: &FreeComplex, cfg: &SolverConfig) -> Result<PolyMatrix, String> {
    let ring = c.ring();
    let (n1, n2) = (c.rank(1), c.rank(2));
    let m1 = c.d(1);
    let pairs: Vec<(usize, usize)> = (0..n1).flat_map(|s| (s + 1..n1).map(move |t| (s, t))).collect();
    let rhs_of = |s: usize, t: usize| -> Vec<Poly> {
        let mut v = vec![ring.zero(); n1];
        v[t] = v[t].add(m1.get(0, s));
        v[s] = v[s].sub(m1.get(0, t));
        v
    };
    let mut rhs: Vec<Vec<Poly>> = pairs.iter().map(|&(s, t)| rhs_of(s, t)).collect();
    if cfg.symmetrize {
        rhs.extend(pairs.iter().map(|&(s, t)| rhs_of(t, s)));
    }
    let mut sol = lift(&c.d(2), &rhs, "mu_1,1")?;
    let np = pairs.len();
    let vals: Vec<Vec<Poly>> = if cfg.symmetrize {
        let h = half(ring);
        (0..np)
            .map(|k| sol[k].iter().zip(&sol[np + k]).map(|(a, b)| a.sub(b).mul(&h)).collect())
            .collect()
    } else {
        sol.drain(..np).collect()
    };
    let index = |s: usize, t: usize| pairs.iter().position(|&p| p == (s, t)).expect("pair");
    Ok(table_from_pairs(ring, n2, n1, n1, |s, t| {
        if s == t {
            vec![ring.zero(); n2]
        } else if s < t {
            vals[index(s, t)].clone()
        } else {
            vals[index(t, s)].iter().map(|p| p.neg()).collect()
        }
    }))
}

/// μ₁,₂ with m₃(a·b) = m₁(a)b − a·m₂(b).
fn products_12(c: &FreeComplex, t: &Tables) -> Result<PolyMatrix, String> {
    let ring = c.ring();
    let (n1, n2) = (c.rank(1), c.rank(2));
    let (m1, m2) = (c.d(1), c.d(2));
    let mut rhs = Vec::with_capacity(n1 * n2);
    for s in 0..n1 {
        for u in 0..n2 {
            let mut v = unit(ring, n2, u);
            v.iter_mut().for_each(|p| *p = p.mul(m1.get(0, s)));
            let sub = t.right(1, s, 1, &m2.column(u));
            for (x, y) in v.iter_mut().zip(&sub) {
                *x = x.sub(y);
            }
            rhs.push(v);
        }
    }
    let sol = lift(&c.d(3), &rhs, "mu_1,2")?;
    Ok(PolyMatrix::from_columns(ring, c.rank(3), &sol))
}

/// μ₂,₁ from graded commutativity: b·a = a·b.
fn transpose_table(ring: Ring, mu: &PolyMatrix, ri: usize, rj: usize, sign: i64) -> PolyMatrix {
    table_from_pairs(ring, mu.rows(), rj, ri, |t, s| {
        let col = mu.column(s * rj + t);
        if sign > 0 {
            col
        } else {
            col.iter().map(|p| p.neg()).collect()
        }
    })
}

/// Coordinates T with A = m₄·T for a cycle A of M₃.
fn through_m4(m4: &PolyMatrix, cols: &[Vec<Poly>]) -> Result<Vec<Poly>, String> {
    Ok(lift(m4, cols, "associator")?.into_iter().map(|v| v[0].clone()).collect())
}

/// Which free correction coefficients an attempt may fill.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum FreeFill {
    /// Only ψ(b_s, −) with b_s in M₁,₁.
    SplitRows,
    /// Every unconstrained coefficient.
    All,
}

/// Changes μ₁,₂ by m₄∘ψ so that (ab)c = a(bc) for all a, b, c ∈ M₁.
/// Coefficients of ψ that no associativity equation involves are filled with
/// seeded random constants; they decide the pairing of the split strands.
fn correct_mu12(c: &FreeComplex, t: &mut Tables, split: &Split, fill: FreeFill, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ring = c.ring();
    let (n1, n2) = (c.rank(1), c.rank(2));
    let m4 = c.d(4);
    let mu11 = t.get(1, 1).clone();
    // unknown ψ(s, u) at index s·n2 + u; ψ(c, ab) − ψ(a, bc) = −T(a, b, c)
    let mut rows: Vec<Vec<Poly>> = Vec::new();
    let mut assoc: Vec<Vec<Poly>> = Vec::new();
    for a in 0..n1 {
        for b in 0..n1 {
            for cc in 0..n1 {
                let ab = mu11.column(a * n1 + b);
                let bc = mu11.column(b * n1 + cc);
                let left = t.left(2, &ab, 1, cc);
                let right = t.right(1, a, 2, &bc);
                let diff: Vec<Poly> = left.iter().zip(&right).map(|(x, y)| x.sub(y)).collect();
                let mut row = vec![ring.zero(); n1 * n2];
                for u in 0..n2 {
                    row[cc * n2 + u] = row[cc * n2 + u].add(&ab[u]);
                    row[a * n2 + u] = row[a * n2 + u].sub(&bc[u]);
                }
                let trivial_row = row.iter().all(|p| p.is_zero());
                let trivial_rhs = diff.iter().all(|p| p.is_zero());
                if trivial_row && !trivial_rhs {
                    return Err(format!("associator of (b_{a}, b_{b}, b_{cc}) cannot be corrected"));
                }
                if !trivial_row && !rows.iter().zip(&assoc).any(|(r, d)| r == &row && d == &diff) {
                    rows.push(row);
                    assoc.push(diff);
                }
            }
        }
    }
    let mut psi = vec![ring.zero(); n1 * n2];
    if assoc.iter().any(|d| d.iter().any(|p| !p.is_zero())) {
        let tvals = through_m4(&m4, &assoc)?;
        let sys = PolyMatrix::from_rows(ring, rows.clone());
        let y = PolyMatrix::from_rows(ring, tvals.iter().map(|p| vec![p.neg()]).collect());
        let sol = solve_lift(&sys, &y).map_err(|e| format!("associativity correction: {e}"))?;
        psi = sol.column(0);
    }
    let p = ring.field.characteristic();
    let span = if p == 0 || p > 101 { 50 } else { (p as i64 - 1) / 2 };
    for (idx, v) in psi.iter_mut().enumerate() {
        let s = idx / n2;
        let constrained = rows.iter().any(|r| !r[idx].is_zero());
        let allowed = fill == FreeFill::All || split.m11.contains(&s);
        if !constrained && allowed {
            let mut k = 0;
            while k == 0 {
                k = rng.gen_range(-span..=span);
            }
            *v = ring.from_i64(k);
        }
    }
    let mut mu12 = t.get(1, 2).clone();
    let m4col = m4.column(0);
    for (col, coeff) in psi.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let mut v = mu12.column(col);
        axpy(&mut v, coeff, &m4col);
        for (r, q) in v.into_iter().enumerate() {
            mu12.set(r, col, q);
        }
    }
    t.mult[1][2] = Some(mu12);
    Ok(())
}

/// μ₁,₃ and μ₂,₂, which m₄ determines uniquely.
fn top_products(c: &FreeComplex, t: &Tables) -> Result<(PolyMatrix, PolyMatrix), String> {
    let ring = c.ring();
    let (n1, n2, n3) = (c.rank(1), c.rank(2), c.rank(3));
    let (m1, m2, m3) = (c.d(1), c.d(2), c.d(3));
    let m4 = c.d(4);
    let mut rhs = Vec::with_capacity(n1 * n3);
    for s in 0..n1 {
        for u in 0..n3 {
            let mut v = unit(ring, n3, u);
            v.iter_mut().for_each(|p| *p = p.mul(m1.get(0, s)));
            let sub = t.right(1, s, 2, &m3.column(u));
            for (x, y) in v.iter_mut().zip(&sub) {
                *x = x.sub(y);
            }
            rhs.push(v);
        }
    }
    let mu13 = PolyMatrix::from_columns(ring, 1, &lift(&m4, &rhs, "mu_1,3")?);
    let mut rhs = Vec::with_capacity(n2 * n2);
    for s in 0..n2 {
        for u in 0..n2 {
            // m₂(b)·b′ + b·m₂(b′), both through μ₁,₂
            let mut v = t.left(1, &m2.column(s), 2, u);
            let w = t.left(1, &m2.column(u), 2, s);
            for (x, y) in v.iter_mut().zip(&w) {
                *x = x.add(y);
            }
            rhs.push(v);
        }
    }
    let mu22 = PolyMatrix::from_columns(ring, 1, &lift(&m4, &rhs, "mu_2,2")?);
    Ok((mu13, mu22))
}

fn attempt(
    c: &FreeComplex,
    orientation: &Poly,
    split: &Split,
    cfg: &SolverConfig,
    fill: FreeFill,
    rng: &mut ChaCha8Rng,
) -> Result<(DgaBundle, Report), String> {
    let ring = c.ring();
    let ranks: Vec<usize> = c.ranks().to_vec();
    let (n1, n2, n3) = (ranks[1], ranks[2], ranks[3]);
    let mut t = Tables { ring, ranks: ranks.clone(), mult: vec![vec![None; 5]; 5] };
    for j in 0..5 {
        t.mult[0][j] = Some(PolyMatrix::identity(ring, ranks[j]));
        t.mult[j][0] = Some(PolyMatrix::identity(ring, ranks[j]));
    }
    t.mult[1][1] = Some(products_11(c, cfg)?);
    t.mult[1][2] = Some(products_12(c, &t)?);
    t.mult[2][1] = Some(transpose_table(ring, t.get(1, 2), n1, n2, 1));
    correct_mu12(c, &mut t, split, fill, rng)?;
    t.mult[2][1] = Some(transpose_table(ring, t.get(1, 2), n1, n2, 1));
    let (mu13, mu22) = top_products(c, &t)?;
    t.mult[3][1] = Some(transpose_table(ring, &mu13, n1, n3, -1));
    t.mult[1][3] = Some(mu13);
    t.mult[2][2] = Some(mu22);
    let bundle = DgaBundle::new(c.clone(), t.mult, None, orientation.clone(), split.clone()).map_err(|e| e.to_string())?;
    let report = validate_dga(&bundle, None);
    Ok((bundle, report))
}

/// Lifts a graded-commutative multiplication onto `c` and returns it only if
/// every validator check passes.
pub fn complete_multiplication(
    c: &FreeComplex,
    orientation: &Poly,
    split: &Split,
    cfg: &SolverConfig,
) -> Result<DgaBundle, SolverError> {
    let ring = c.ring();
    if c.ranks().len() != 5 || c.rank(0) != 1 || c.rank(4) != 1 {
        return Err(SolverError::BadInput(format!("ranks {:?}", c.ranks())));
    }
    if ring.field.characteristic() == 2 {
        return Err(SolverError::CharTwoNeedsTables);
    }
    let mut last = (String::new(), Report::new());
    for k in 0..=cfg.budget {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(k as u64));
        let fill = if k % 2 == 0 { FreeFill::SplitRows } else { FreeFill::All };
        match attempt(c, orientation, split, cfg, fill, &mut rng) {
            Ok((bundle, report)) if report.passed() => return Ok(bundle),
            Ok((_, report)) => {
                let first = report.failures().next().map(|c| format!("{} ({})", c.name, c.detail)).unwrap_or_default();
                last = (first, report);
            }
            Err(msg) => last = (msg, Report::new()),
        }
    }
    Err(SolverError::SolverGaveUp { attempts: cfg.budget + 1, first_failure: last.0, report: last.1 })
}

impl From<DgaError> for SolverError {
    fn from(e: DgaError) -> Self {
        match e {
            DgaError::CharTwoNeedsTables => SolverError::CharTwoNeedsTables,
            other => SolverError::BadInput(other.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::build_koszul;
    use crate::ring::Field;

    #[test]
    fn koszul_differentials_only() {
        let r = Ring::new(Field::Prime(101), 4);
        let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
        let k = build_koszul(&a);
        let b = complete_multiplication(&k.complex, &r.one(), &k.split, &SolverConfig::default()).unwrap();
        assert!(validate_dga(&b, Some(&a)).passed());
    }

    #[test]
    fn char_two_is_refused() {
        let r = Ring::new(Field::Prime(2), 4);
        let a: Vec<Poly> = (0..4).map(|i| r.var(i)).collect();
        let k = build_koszul(&a);
        let e = complete_multiplication(&k.complex, &r.one(), &k.split, &SolverConfig::default());
        assert_eq!(e.unwrap_err(), SolverError::CharTwoNeedsTables);
    }

    #[test]
    fn free_coefficients_decide_the_pairing() {
        let (c, _, _, split) = crate::fixtures::e3_complex();
        let cfg = SolverConfig { budget: 0, ..SolverConfig::default() };
        let one = c.ring().one();
        let b = complete_multiplication(&c, &one, &split, &cfg).unwrap();
        assert!(validate_dga(&b, None).passed());
        // with every free coefficient left at zero, the degree-one pairing degenerates
        let ranks = c.ranks().to_vec();
        let mut t = Tables { ring: c.ring(), ranks: ranks.clone(), mult: vec![vec![None; 5]; 5] };
        for j in 0..5 {
            t.mult[0][j] = Some(PolyMatrix::identity(c.ring(), ranks[j]));
            t.mult[j][0] = Some(PolyMatrix::identity(c.ring(), ranks[j]));
        }
        t.mult[1][1] = Some(products_11(&c, &cfg).unwrap());
        t.mult[1][2] = Some(products_12(&c, &t).unwrap());
        t.mult[2][1] = Some(transpose_table(c.ring(), t.get(1, 2), ranks[1], ranks[2], 1));
        let (mu13, mu22) = top_products(&c, &t).unwrap();
        t.mult[3][1] = Some(transpose_table(c.ring(), &mu13, ranks[1], ranks[3], -1));
        t.mult[1][3] = Some(mu13);
        t.mult[2][2] = Some(mu22);
        let bare = DgaBundle::new(c.clone(), t.mult, None, one, split).unwrap();
        let rep = validate_dga(&bare, None);
        assert!(!rep.get("pairing_1").unwrap().passed);
    }

    #[test]
    fn seeds_change_the_free_coefficients() {
        let (c, _, _, split) = crate::fixtures::e3_complex();
        let one = c.ring().one();
        let run = |seed| complete_multiplication(&c, &one, &split, &SolverConfig { seed, ..SolverConfig::default() }).unwrap();
        assert_eq!(run(1), run(1));
        assert_ne!(run(1).mult, run(2).mult);
    }
}
