use super::groebner::ideal_gb;
use super::poly::Poly;
use super::RingError;

/// Krull dimension of P/(gens), read off the leading-term ideal: the largest
/// set of variables containing the support of no leading monomial.
pub fn krull_dimension(gens: &[Poly]) -> usize {
    let Some(first) = gens.first() else { return 0 };
    let ring = first.ring();
    let n = ring.nvars;
    let gb = ideal_gb(ring, gens);
    let leads: Vec<u32> = gb
        .leading_terms()
        .into_iter()
        .map(|(_, m)| m.0.iter().enumerate().filter(|(_, &e)| e > 0).fold(0u32, |acc, (i, _)| acc | (1 << i)))
        .collect();
    if leads.contains(&0) {
        // unit ideal: the empty ring, dimension -1 by convention; report 0 and let callers see the mismatch
        return 0;
    }
    let mut best = 0;
    for set in 0u32..(1u32 << n) {
        let size = set.count_ones() as usize;
        if size > best && leads.iter().all(|&l| l & !set != 0) {
            best = size;
        }
    }
    best
}

/// True iff four polynomials cut out a codimension-four locus, which in a
/// polynomial ring means they form a regular sequence.
pub fn check_regular_sequence(gens: &[Poly]) -> Result<bool, RingError> {
    if gens.len() != 4 {
        return Err(RingError::WrongLength(gens.len()));
    }
    let ring = gens[0].ring();
    if ring.nvars < 4 {
        return Ok(false);
    }
    let gb = ideal_gb(ring, gens);
    if gb.leading_terms().iter().any(|(_, m)| m.is_one()) {
        return Ok(false);
    }
    Ok(krull_dimension(gens) == ring.nvars - 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{parse_poly, Field};

    fn polys(src: &[&str]) -> Vec<Poly> {
        let v: Vec<String> = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
        src.iter().map(|s| parse_poly(s, &v, Field::Prime(101)).unwrap()).collect()
    }

    #[test]
    fn examples() {
        assert!(check_regular_sequence(&polys(&["x", "y", "z", "w"])).unwrap());
        assert!(!check_regular_sequence(&polys(&["x", "x", "y", "z"])).unwrap());
        assert!(check_regular_sequence(&polys(&["x+y", "x-y", "z^2", "w"])).unwrap());
        assert!(matches!(check_regular_sequence(&polys(&["x", "y"])), Err(RingError::WrongLength(2))));
    }
}
