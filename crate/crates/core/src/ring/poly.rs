use std::cmp::Ordering;

use smallvec::SmallVec;

use super::field::{Coeff, Field};
use super::RingError;

/// Exponent vector. Ordered by graded reverse lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self` divides `o`.
    pub fn quotient_of(&self, o: &Monomial) -> Monomial {
        Monomial(o.0.iter().zip(self.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(o.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, o: &Monomial) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        match self.degree().cmp(&o.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        for (a, b) in self.0.iter().zip(o.0.iter()).rev() {
            if a != b {
                // smaller exponent in the last differing variable wins
                return b.cmp(a);
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A polynomial ring: coefficient field plus number of variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    pub field: Field,
    pub nvars: usize,
}

impl Ring {
    pub fn new(field: Field, nvars: usize) -> Self {
        Ring { field, nvars }
    }

    pub fn zero(&self) -> Poly {
        Poly { ring: *self, terms: Vec::new() }
    }

    pub fn one(&self) -> Poly {
        self.constant(self.field.one())
    }

    pub fn constant(&self, c: Coeff) -> Poly {
        if self.field.is_zero(&c) {
            return self.zero();
        }
        Poly { ring: *self, terms: vec![(Monomial::one(self.nvars), c)] }
    }

    pub fn from_i64(&self, v: i64) -> Poly {
        self.constant(self.field.from_i64(v))
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly { ring: *self, terms: vec![(Monomial::var(self.nvars, i), self.field.one())] }
    }

    pub fn term(&self, m: Monomial, c: Coeff) -> Poly {
        if self.field.is_zero(&c) {
            return self.zero();
        }
        Poly { ring: *self, terms: vec![(m, c)] }
    }

    /// Builds a canonical polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms(&self, mut terms: Vec<(Monomial, Coeff)>) -> Poly {
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let k = self.field;
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = k.add(lc, &c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if k.is_zero(lc) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        if let Some((_, lc)) = out.last() {
            if k.is_zero(lc) {
                out.pop();
            }
        }
        Poly { ring: *self, terms: out }
    }
}

/// Sparse polynomial; terms strictly decreasing in grevlex, no zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Monomial, Coeff)>,
}

impl Poly {
    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    /// Constant term value if the polynomial is constant.
    pub fn constant_value(&self) -> Option<Coeff> {
        if self.terms.is_empty() {
            Some(self.ring.field.zero())
        } else if self.is_constant() {
            Some(self.terms[0].1.clone())
        } else {
            None
        }
    }

    /// A nonzero constant, i.e. a unit of the polynomial ring.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one()
    }

    pub fn is_one(&self) -> bool {
        self.is_unit() && self.ring.field.is_one(&self.terms[0].1)
    }

    pub fn leading(&self) -> Option<&(Monomial, Coeff)> {
        self.terms.first()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn neg(&self) -> Poly {
        let k = self.ring.field;
        Poly { ring: self.ring, terms: self.terms.iter().map(|(m, c)| (m.clone(), k.neg(c))).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> Poly {
        let k = self.ring.field;
        if k.is_zero(c) {
            return self.ring.zero();
        }
        Poly { ring: self.ring, terms: self.terms.iter().map(|(m, d)| (m.clone(), k.mul(c, d))).collect() }
    }

    pub fn mul_term(&self, mono: &Monomial, c: &Coeff) -> Poly {
        let k = self.ring.field;
        if k.is_zero(c) {
            return self.ring.zero();
        }
        Poly {
            ring: self.ring,
            terms: self.terms.iter().map(|(m, d)| (m.mul(mono), k.mul(c, d))).collect(),
        }
    }

    /// `self + c * mono * o`, merging sorted term lists.
    pub fn add_scaled(&self, o: &Poly, mono: &Monomial, c: &Coeff) -> Poly {
        let k = self.ring.field;
        if k.is_zero(c) || o.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let mut i = 0;
        let mut it = o.terms.iter().map(|(m, d)| (m.mul(mono), k.mul(c, d))).peekable();
        loop {
            match (self.terms.get(i), it.peek()) {
                (None, None) => break,
                (Some(a), None) => {
                    out.push(a.clone());
                    i += 1;
                }
                (None, Some(_)) => out.push(it.next().unwrap()),
                (Some(a), Some(b)) => match a.0.cmp(&b.0) {
                    Ordering::Greater => {
                        out.push(a.clone());
                        i += 1;
                    }
                    Ordering::Less => out.push(it.next().unwrap()),
                    Ordering::Equal => {
                        let s = k.add(&a.1, &b.1);
                        if !k.is_zero(&s) {
                            out.push((a.0.clone(), s));
                        }
                        i += 1;
                        it.next();
                    }
                },
            }
        }
        Poly { ring: self.ring, terms: out }
    }

    pub fn add(&self, o: &Poly) -> Poly {
        self.add_scaled(o, &Monomial::one(self.ring.nvars), &self.ring.field.one())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add_scaled(o, &Monomial::one(self.ring.nvars), &self.ring.field.from_i64(-1))
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return self.ring.zero();
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        let k = self.ring.field;
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (m, c) in &self.terms {
            for (n, d) in &o.terms {
                terms.push((m.mul(n), k.mul(c, d)));
            }
        }
        self.ring.from_terms(terms)
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = self.ring.one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multivariate division by a single polynomial; returns (quotient, remainder).
    pub fn div_rem(&self, den: &Poly) -> (Poly, Poly) {
        let k = self.ring.field;
        let (lm, lc) = den.leading().expect("division by zero polynomial").clone();
        let ilc = k.inv(&lc).expect("nonzero leading coefficient");
        let mut q = Vec::new();
        let mut rem = Vec::new();
        let mut work = self.clone();
        while let Some((m, c)) = work.terms.first().cloned() {
            if lm.divides(&m) {
                let qm = lm.quotient_of(&m);
                let qc = k.mul(&c, &ilc);
                work = work.add_scaled(den, &qm, &k.neg(&qc));
                q.push((qm, qc));
            } else {
                rem.push(work.terms.remove(0));
            }
        }
        (self.ring.from_terms(q), Poly { ring: self.ring, terms: rem })
    }

    /// Exact division; fails with the nonzero remainder as witness.
    pub fn divide_exact(&self, den: &Poly) -> Result<Poly, RingError> {
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        let (q, r) = self.div_rem(den);
        if r.is_zero() {
            Ok(q)
        } else {
            Err(RingError::NotDivisible { remainder: r.to_string() })
        }
    }

    pub fn map_coeffs(&self, ring: Ring, f: impl Fn(&Coeff) -> Coeff) -> Poly {
        ring.from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))).collect())
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let names = super::parse::default_names(self.ring.nvars);
        f.write_str(&super::parse::format_poly(self, &names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r3() -> Ring {
        Ring::new(Field::Prime(101), 3)
    }

    #[test]
    fn grevlex_order() {
        let n = 3;
        let x = Monomial::var(n, 0);
        let y = Monomial::var(n, 1);
        let z = Monomial::var(n, 2);
        assert!(x > y && y > z);
        // x*z vs y^2: same degree, last differing var z: xz has z^1 so is smaller
        assert!(y.mul(&y) > x.mul(&z));
        assert!(x.mul(&x) > x.mul(&y));
        assert!(z.mul(&z) > x);
    }

    #[test]
    fn exact_division() {
        let r = r3();
        let (x, y) = (r.var(0), r.var(1));
        let num = x.mul(&x).mul(&y).sub(&x.mul(&y).mul(&y));
        let q = num.divide_exact(&x.sub(&y)).unwrap();
        assert_eq!(q, x.mul(&y));
        assert_eq!(num.divide_exact(&r.one()).unwrap(), num);
        assert!(matches!(x.divide_exact(&y), Err(RingError::NotDivisible { .. })));
    }

    #[test]
    fn cancellation_gives_zero() {
        let r = r3();
        let p = r.var(0).add(&r.var(1));
        assert!(p.sub(&p).is_zero());
    }
}
