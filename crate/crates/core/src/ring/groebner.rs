//! Buchberger's algorithm for submodules of free modules P^r, with lift records
//! and Schreyer-style syzygy collection.
//!
//! Module order is position-over-term: a lower position index is larger, ties
//! broken by grevlex on the monomial.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use super::field::Coeff;
use super::matrix::PolyMatrix;
use super::poly::{Monomial, Poly, Ring};
use super::RingError;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Term {
    pos: usize,
    mono: Monomial,
    coeff: Coeff,
}

fn term_cmp(a: &Term, b: &Term) -> Ordering {
    b.pos.cmp(&a.pos).then_with(|| a.mono.cmp(&b.mono))
}

/// Sparse module element, terms strictly decreasing in the module order.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SVec(Vec<Term>);

impl SVec {
    fn zero() -> Self {
        SVec(Vec::new())
    }

    fn unit(ring: Ring, pos: usize) -> Self {
        SVec(vec![Term { pos, mono: Monomial::one(ring.nvars), coeff: ring.field.one() }])
    }

    fn from_column(col: &[Poly]) -> Self {
        let mut terms = Vec::new();
        for (pos, p) in col.iter().enumerate() {
            for (m, c) in p.terms() {
                terms.push(Term { pos, mono: m.clone(), coeff: c.clone() });
            }
        }
        SVec(terms)
    }

    fn to_column(&self, ring: Ring, rank: usize) -> Vec<Poly> {
        let mut cols: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); rank];
        for t in &self.0 {
            cols[t.pos].push((t.mono.clone(), t.coeff.clone()));
        }
        cols.into_iter().map(|ts| ring.from_terms(ts)).collect()
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn lead(&self) -> Option<&Term> {
        self.0.first()
    }

    fn scale(&self, ring: Ring, c: &Coeff) -> SVec {
        SVec(self.0.iter().map(|t| Term { pos: t.pos, mono: t.mono.clone(), coeff: ring.field.mul(&t.coeff, c) }).collect())
    }

    fn add_scaled(&self, ring: Ring, o: &SVec, mono: &Monomial, c: &Coeff) -> SVec {
        SVec(merge(ring, &self.0, &o.0, mono, c))
    }
}

/// `a + c * mono * b` on sorted term slices.
fn merge(ring: Ring, a: &[Term], b: &[Term], mono: &Monomial, c: &Coeff) -> Vec<Term> {
    let k = ring.field;
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut bi = b.iter().map(|t| Term { pos: t.pos, mono: t.mono.mul(mono), coeff: k.mul(&t.coeff, c) }).peekable();
    loop {
        match (a.get(i), bi.peek()) {
            (None, None) => break,
            (Some(x), None) => {
                out.extend_from_slice(&a[i..]);
                let _ = x;
                break;
            }
            (None, Some(_)) => {
                out.extend(bi);
                break;
            }
            (Some(x), Some(y)) => match term_cmp(x, y) {
                Ordering::Greater => {
                    out.push(x.clone());
                    i += 1;
                }
                Ordering::Less => out.push(bi.next().unwrap()),
                Ordering::Equal => {
                    let s = k.add(&x.coeff, &y.coeff);
                    if !k.is_zero(&s) {
                        out.push(Term { pos: x.pos, mono: x.mono.clone(), coeff: s });
                    }
                    i += 1;
                    bi.next();
                }
            },
        }
    }
    out
}

#[derive(Clone, Debug)]
struct Elem {
    vec: SVec,
    lift: SVec,
}

/// Gröbner basis of a submodule of P^rank, each member carrying its expression
/// in the original generators.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    ring: Ring,
    rank: usize,
    ngens: usize,
    elems: Vec<Elem>,
}

struct Builder {
    ring: Ring,
    elems: Vec<Elem>,
    by_pos: Vec<Vec<usize>>,
}

impl Builder {
    fn find_divisor(&self, t: &Term, skip: Option<usize>) -> Option<usize> {
        self.by_pos[t.pos].iter().copied().find(|&k| Some(k) != skip && self.elems[k].vec.lead().unwrap().mono.divides(&t.mono))
    }

    /// Full reduction; returns (remainder, quotient in generator coordinates).
    fn reduce(&self, v: &SVec, track: bool, skip: Option<usize>) -> (SVec, SVec) {
        let k = self.ring.field;
        let mut work = v.0.clone();
        let mut start = 0;
        let mut rem = Vec::new();
        let mut quot = SVec::zero();
        while start < work.len() {
            let t = &work[start];
            match self.find_divisor(t, skip) {
                Some(e) => {
                    let el = &self.elems[e];
                    let qm = el.vec.lead().unwrap().mono.quotient_of(&t.mono);
                    let qc = t.coeff.clone(); // members are monic
                    work = merge(self.ring, &work[start..], &el.vec.0, &qm, &k.neg(&qc));
                    start = 0;
                    if track {
                        quot = quot.add_scaled(self.ring, &el.lift, &qm, &qc);
                    }
                }
                None => {
                    rem.push(work[start].clone());
                    start += 1;
                }
            }
        }
        (SVec(rem), quot)
    }

    fn push(&mut self, vec: SVec, lift: SVec) -> usize {
        let k = self.ring.field;
        let lc = vec.lead().unwrap().coeff.clone();
        let inv = k.inv(&lc).expect("nonzero");
        let idx = self.elems.len();
        let pos = vec.lead().unwrap().pos;
        self.elems.push(Elem { vec: vec.scale(self.ring, &inv), lift: lift.scale(self.ring, &inv) });
        self.by_pos[pos].push(idx);
        idx
    }
}

type PairKey = (u32, usize, usize, usize);

fn pair_key(elems: &[Elem], i: usize, j: usize) -> PairKey {
    let a = elems[i].vec.lead().unwrap();
    let b = elems[j].vec.lead().unwrap();
    (a.mono.lcm(&b.mono).degree(), a.pos, j, i)
}

/// Runs Buchberger; returns the basis and, when requested, syzygy generators
/// (in generator coordinates).
fn buchberger(ring: Ring, gens: &[Vec<Poly>], rank: usize, want_syz: bool) -> (GroebnerBasis, Vec<SVec>) {
    let k = ring.field;
    let mut b = Builder { ring, elems: Vec::new(), by_pos: vec![Vec::new(); rank] };
    let mut syz: Vec<SVec> = Vec::new();
    let mut pending: BTreeSet<PairKey> = BTreeSet::new();

    let add_pairs = |b: &Builder, pending: &mut BTreeSet<PairKey>, new: usize| {
        let pos = b.elems[new].vec.lead().unwrap().pos;
        for &old in &b.by_pos[pos] {
            if old != new {
                pending.insert(pair_key(&b.elems, old, new));
            }
        }
    };

    for (i, g) in gens.iter().enumerate() {
        assert_eq!(g.len(), rank, "generator rank mismatch");
        let v = SVec::from_column(g);
        let (rem, q) = b.reduce(&v, true, None);
        let lift = SVec::unit(ring, i).add_scaled(ring, &q, &Monomial::one(ring.nvars), &k.from_i64(-1));
        if rem.is_zero() {
            if want_syz {
                syz.push(lift);
            }
        } else {
            let idx = b.push(rem, lift);
            add_pairs(&b, &mut pending, idx);
        }
    }

    while let Some(key) = pending.pop_first() {
        let (_, pos, j, i) = key;
        let li = b.elems[i].vec.lead().unwrap().mono.clone();
        let lj = b.elems[j].vec.lead().unwrap().mono.clone();
        let l = li.lcm(&lj);
        // chain criterion
        let skip = b.by_pos[pos].iter().any(|&m| {
            m != i
                && m != j
                && b.elems[m].vec.lead().unwrap().mono.divides(&l)
                && !pending.contains(&ordered_key(&b.elems, i, m))
                && !pending.contains(&ordered_key(&b.elems, j, m))
        });
        if skip {
            continue;
        }
        let mi = li.quotient_of(&l);
        let mj = lj.quotient_of(&l);
        let one = k.one();
        let neg = k.from_i64(-1);
        let s = SVec::zero().add_scaled(ring, &b.elems[i].vec, &mi, &one).add_scaled(ring, &b.elems[j].vec, &mj, &neg);
        let sl = SVec::zero().add_scaled(ring, &b.elems[i].lift, &mi, &one).add_scaled(ring, &b.elems[j].lift, &mj, &neg);
        let (rem, q) = b.reduce(&s, true, None);
        let lift = sl.add_scaled(ring, &q, &Monomial::one(ring.nvars), &neg);
        if rem.is_zero() {
            if want_syz && !lift.is_zero() {
                syz.push(lift);
            }
        } else {
            let idx = b.push(rem, lift);
            add_pairs(&b, &mut pending, idx);
        }
    }

    // auto-reduce: drop members with reducible leads, then reduce tails
    let n = b.elems.len();
    let mut keep = vec![true; n];
    for x in 0..n {
        let lx = b.elems[x].vec.lead().unwrap();
        for y in 0..n {
            if x == y || !keep[y] {
                continue;
            }
            let ly = b.elems[y].vec.lead().unwrap();
            if ly.pos == lx.pos && ly.mono.divides(&lx.mono) && (ly.mono != lx.mono || y < x) {
                keep[x] = false;
                break;
            }
        }
    }
    let kept: Vec<Elem> = b.elems.iter().zip(keep.iter()).filter(|(_, &kp)| kp).map(|(e, _)| e.clone()).collect();
    let mut r = Builder { ring, elems: kept, by_pos: vec![Vec::new(); rank] };
    for (idx, e) in r.elems.iter().enumerate() {
        r.by_pos[e.vec.lead().unwrap().pos].push(idx);
    }
    for idx in 0..r.elems.len() {
        let e = r.elems[idx].clone();
        let lead = e.vec.lead().unwrap().clone();
        let tail = SVec(e.vec.0[1..].to_vec());
        let (rem, q) = r.reduce(&tail, true, Some(idx));
        let mut v = vec![lead];
        v.extend(rem.0);
        r.elems[idx] = Elem { vec: SVec(v), lift: e.lift.add_scaled(ring, &q, &Monomial::one(ring.nvars), &k.from_i64(-1)) };
    }
    (GroebnerBasis { ring, rank, ngens: gens.len(), elems: r.elems }, syz)
}

fn ordered_key(elems: &[Elem], a: usize, b: usize) -> PairKey {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    pair_key(elems, lo, hi)
}

pub fn groebner_basis(ring: Ring, gens: &[Vec<Poly>], rank: usize) -> GroebnerBasis {
    buchberger(ring, gens, rank, false).0
}

impl GroebnerBasis {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn members(&self) -> Vec<Vec<Poly>> {
        self.elems.iter().map(|e| e.vec.to_column(self.ring, self.rank)).collect()
    }

    /// Coefficients expressing each member in the original generators.
    pub fn lifts(&self) -> Vec<Vec<Poly>> {
        self.elems.iter().map(|e| e.lift.to_column(self.ring, self.ngens)).collect()
    }

    /// Leading (position, monomial) of every member.
    pub fn leading_terms(&self) -> Vec<(usize, Monomial)> {
        self.elems.iter().map(|e| {
            let t = e.vec.lead().unwrap();
            (t.pos, t.mono.clone())
        }).collect()
    }

    fn builder(&self) -> Builder {
        let mut by_pos = vec![Vec::new(); self.rank];
        for (i, e) in self.elems.iter().enumerate() {
            by_pos[e.vec.lead().unwrap().pos].push(i);
        }
        Builder { ring: self.ring, elems: self.elems.clone(), by_pos }
    }

    /// Normal form of `v` and quotient `q` (generator coordinates) with
    /// `v = A·q + nf`.
    pub fn reduce(&self, v: &[Poly]) -> (Vec<Poly>, Vec<Poly>) {
        let (rem, q) = self.builder().reduce(&SVec::from_column(v), true, None);
        (rem.to_column(self.ring, self.rank), q.to_column(self.ring, self.ngens))
    }

    pub fn normal_form(&self, v: &[Poly]) -> Vec<Poly> {
        let (rem, _) = self.builder().reduce(&SVec::from_column(v), false, None);
        rem.to_column(self.ring, self.rank)
    }

    pub fn contains(&self, v: &[Poly]) -> bool {
        self.normal_form(v).iter().all(Poly::is_zero)
    }
}

/// Normal form of a single polynomial modulo an ideal GB (rank 1).
pub fn ideal_normal_form(gb: &GroebnerBasis, p: &Poly) -> Poly {
    gb.normal_form(std::slice::from_ref(p)).pop().unwrap()
}

pub fn ideal_gb(ring: Ring, gens: &[Poly]) -> GroebnerBasis {
    let cols: Vec<Vec<Poly>> = gens.iter().map(|g| vec![g.clone()]).collect();
    groebner_basis(ring, &cols, 1)
}

/// Finds Z with A·Z = Y, reducing every column of Y against the column GB of A.
pub fn solve_lift(a: &PolyMatrix, y: &PolyMatrix) -> Result<PolyMatrix, RingError> {
    if a.rows() != y.rows() {
        return Err(RingError::ShapeMismatch(format!("solve_lift: A is {:?}, Y is {:?}", a.shape(), y.shape())));
    }
    let ring = a.ring();
    let gens: Vec<Vec<Poly>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let gb = groebner_basis(ring, &gens, a.rows());
    solve_lift_with(&gb, a, y)
}

/// As [`solve_lift`], reusing a basis already computed from the columns of A.
pub fn solve_lift_with(gb: &GroebnerBasis, a: &PolyMatrix, y: &PolyMatrix) -> Result<PolyMatrix, RingError> {
    let ring = a.ring();
    let b = gb.builder();
    let mut cols = Vec::with_capacity(y.cols());
    for j in 0..y.cols() {
        let col = y.column(j);
        let (rem, q) = b.reduce(&SVec::from_column(&col), true, None);
        if !rem.is_zero() {
            let residual = rem.to_column(ring, a.rows()).iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ");
            return Err(RingError::NotInImage { column: j, residual });
        }
        cols.push(q.to_column(ring, a.cols()));
    }
    let z = PolyMatrix::from_columns(ring, a.cols(), &cols);
    debug_assert_eq!(&a.mul(&z), y);
    Ok(z)
}

/// Generators of {v : A·v = 0}.
pub fn syzygy_module(a: &PolyMatrix) -> Vec<Vec<Poly>> {
    let ring = a.ring();
    let gens: Vec<Vec<Poly>> = (0..a.cols()).map(|j| a.column(j)).collect();
    let (_, syz) = buchberger(ring, &gens, a.rows(), true);
    let mut out: Vec<Vec<Poly>> = Vec::new();
    for s in syz {
        let col = s.to_column(ring, a.cols());
        if col.iter().any(|p| !p.is_zero()) && !out.contains(&col) {
            out.push(col);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::parse::parse_poly;
    use crate::ring::Field;

    fn ring() -> (Ring, Vec<String>) {
        (Ring::new(Field::Prime(101), 2), vec!["x".into(), "y".into()])
    }

    fn p(s: &str) -> Poly {
        let (r, v) = ring();
        parse_poly(s, &v, r.field).unwrap()
    }

    #[test]
    fn monomials_are_a_basis() {
        let (r, _) = ring();
        let gb = ideal_gb(r, &[p("x"), p("y")]);
        let m: Vec<Poly> = gb.members().into_iter().map(|c| c[0].clone()).collect();
        assert_eq!(m, vec![p("x"), p("y")]);
    }

    #[test]
    fn s_pair_closure() {
        let (r, _) = ring();
        let gb = ideal_gb(r, &[p("x^2"), p("x*y + y^2")]);
        // S(x^2, xy+y^2) = y*x^2 - x*(xy+y^2) = -xy^2 -> reduces to y^3
        assert!(gb.contains(&[p("y^3")]));
        let lifts = gb.lifts();
        let gens = [p("x^2"), p("x*y + y^2")];
        for (m, l) in gb.members().iter().zip(lifts.iter()) {
            let back = gens[0].mul(&l[0]).add(&gens[1].mul(&l[1]));
            assert_eq!(back, m[0]);
        }
        assert!(gb.members().iter().any(|m| m[0] == p("y^3")));
    }

    #[test]
    fn distinct_positions() {
        let (r, _) = ring();
        let gens = vec![vec![p("x"), p("0")], vec![p("0"), p("x")]];
        let gb = groebner_basis(r, &gens, 2);
        assert_eq!(gb.members(), gens);
    }

    #[test]
    fn lift_examples() {
        let (r, _) = ring();
        let a = PolyMatrix::from_rows(r, vec![vec![p("x"), p("y")]]);
        let y = PolyMatrix::from_rows(r, vec![vec![p("x^2 + y^2")]]);
        let z = solve_lift(&a, &y).unwrap();
        assert_eq!(z.column(0), vec![p("x"), p("y")]);
        let one = PolyMatrix::from_rows(r, vec![vec![p("1")]]);
        assert!(matches!(solve_lift(&a, &one), Err(RingError::NotInImage { column: 0, .. })));
        let xy = PolyMatrix::from_rows(r, vec![vec![p("x*y")]]);
        let z = solve_lift(&a, &xy).unwrap();
        assert_eq!(a.mul(&z), xy);
    }

    #[test]
    fn syzygy_examples() {
        let (r, _) = ring();
        let a = PolyMatrix::from_rows(r, vec![vec![p("x"), p("y")]]);
        let s = syzygy_module(&a);
        assert_eq!(s.len(), 1);
        assert!(s[0] == vec![p("y"), p("-x")] || s[0] == vec![p("-y"), p("x")]);
        assert!(syzygy_module(&PolyMatrix::identity(r, 3)).is_empty());
        let a = PolyMatrix::from_rows(r, vec![vec![p("x"), p("x")]]);
        let s = syzygy_module(&a);
        assert_eq!(s.len(), 1);
        assert!(s[0] == vec![p("1"), p("-1")] || s[0] == vec![p("-1"), p("1")]);
    }

    #[test]
    fn deterministic() {
        let (r, _) = ring();
        let gens = [p("x^2 - y"), p("x*y - 1"), p("y^2 + x")];
        let a = ideal_gb(r, &gens).members();
        let b = ideal_gb(r, &gens).members();
        assert_eq!(a, b);
    }
}
