//! Quadratic Hilbert symbols (a,b)_v of a real quadratic field.

use std::collections::BTreeSet;

use num_traits::Signed;

use crate::adelic::unit_representatives;
use crate::arith::{self, Rat};
use crate::error::{Error, Result};
use crate::exactfield::prime::primes_above;
use crate::exactfield::{FieldElement, Place, PrimeIdeal, TotallyRealField};

/// (a,b)_v ∈ {±1}.
pub fn hilbert_symbol(field: &TotallyRealField, a: &FieldElement, b: &FieldElement, v: &Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::invalid("Hilbert symbol of zero"));
    }
    match v {
        Place::Real(j) => {
            let neg = field.embedding_sign(a, *j)? < 0 && field.embedding_sign(b, *j)? < 0;
            Ok(if neg { -1 } else { 1 })
        }
        Place::Finite(p) if p.p != 2 => tame_symbol(field, a, b, p),
        Place::Finite(p) => dyadic_symbol(field, a, b, p),
    }
}

/// ((−1)^{αβ} a^β b^{−α} mod 𝔭)^{(N𝔭−1)/2} with α = ord a, β = ord b.
fn tame_symbol(field: &TotallyRealField, a: &FieldElement, b: &FieldElement, p: &PrimeIdeal) -> Result<i32> {
    let al = p.ord(field, a)?;
    let be = p.ord(field, b)?;
    let mut c = field.mul(&field.pow(a, be)?, &field.pow(b, -al)?);
    if (al * be) % 2 != 0 {
        c = field.neg(&c);
    }
    let r = p.residue(field, &c).ok_or_else(|| Error::Internal("tame symbol argument is not a unit".into()))?;
    Ok(p.kappa.legendre(&r))
}

fn rational_primes(x: &Rat) -> BTreeSet<u64> {
    let mut out: BTreeSet<u64> = arith::factor(x.numer()).into_iter().map(|f| f.0).collect();
    out.extend(arith::factor(x.denom()).into_iter().map(|f| f.0));
    out
}

/// The product formula, with the dyadic place the only one left out.
fn dyadic_symbol(field: &TotallyRealField, a: &FieldElement, b: &FieldElement, p: &PrimeIdeal) -> Result<i32> {
    field.require_quadratic("dyadic Hilbert symbols")?;
    if primes_above(field, 2)?.len() != 1 {
        return Err(Error::unsupported("dyadic Hilbert symbols when 2 splits"));
    }
    let mut s = 1;
    for j in 0..field.degree() {
        s *= hilbert_symbol(field, a, b, &Place::Real(j))?;
    }
    let mut primes = rational_primes(&field.norm(a).abs());
    primes.extend(rational_primes(&field.norm(b).abs()));
    for l in primes {
        if l == 2 {
            continue;
        }
        for q in primes_above(field, l)? {
            s *= tame_symbol(field, a, b, &q)?;
        }
    }
    debug_assert_eq!(p.p, 2);
    Ok(s)
}

/// Representatives of F_𝔭^×/F_𝔭^{×2}: a uniformizer and units modulo 𝔭^{2e+1}.
pub fn square_class_representatives(field: &TotallyRealField, p: &PrimeIdeal) -> Result<Vec<FieldElement>> {
    let level = if p.p == 2 { 2 * p.e + 1 } else { 1 };
    let mut reps = unit_representatives(field, p, level)?;
    reps.push(p.uniformizer.clone());
    Ok(reps)
}

/// Level c with 1 + 𝔭^c ⊆ F_𝔭^{×2}.
pub fn square_level(p: &PrimeIdeal) -> u32 {
    if p.p == 2 {
        2 * p.e + 1
    } else {
        1
    }
}

/// Is d a square in F_v?
pub fn is_local_square(field: &TotallyRealField, d: &FieldElement, v: &Place) -> Result<bool> {
    match v {
        Place::Real(j) => Ok(field.embedding_sign(d, *j)? > 0),
        Place::Finite(p) => {
            for x in square_class_representatives(field, p)? {
                if hilbert_symbol(field, &x, d, v)? < 0 {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Does v ramify in F(√d)?
pub fn is_ramified(field: &TotallyRealField, d: &FieldElement, v: &Place) -> Result<bool> {
    match v {
        Place::Real(j) => Ok(field.embedding_sign(d, *j)? < 0),
        Place::Finite(p) => {
            for x in unit_representatives(field, p, square_level(p))? {
                if hilbert_symbol(field, &x, d, v)? < 0 {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Primes of F ramified in F(√d).
pub fn ramified_primes(field: &TotallyRealField, d: &FieldElement) -> Result<Vec<PrimeIdeal>> {
    let mut cands = rational_primes(&field.norm(d).abs());
    cands.insert(2);
    let mut out = Vec::new();
    for l in cands {
        for q in primes_above(field, l)? {
            if is_ramified(field, d, &Place::Finite(q.clone()))? {
                out.push(q);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::prime::parse_prime;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn places(f: &TotallyRealField, a: &FieldElement, b: &FieldElement) -> Vec<Place> {
        let mut ls = rational_primes(&f.norm(a).abs());
        ls.extend(rational_primes(&f.norm(b).abs()));
        ls.insert(2);
        let mut v: Vec<Place> = (0..2).map(Place::Real).collect();
        for l in ls {
            v.extend(primes_above(f, l).unwrap().into_iter().map(Place::Finite));
        }
        v
    }

    #[test]
    fn base_case_over_a_split_prime() {
        // 5 splits in ℚ(√6), so (2,5)_𝔭 is the rational symbol (2,5)₅
        let f = TotallyRealField::real_quadratic(6).unwrap();
        for p in primes_above(&f, 5).unwrap() {
            assert_eq!(hilbert_symbol(&f, &f.from_int(2), &f.from_int(5), &Place::Finite(p)).unwrap(), -1);
        }
    }

    #[test]
    fn one_is_a_norm() {
        let f = TotallyRealField::real_quadratic(5).unwrap();
        let d = FieldElement::from_ints(&[-3, 1]);
        for v in places(&f, &f.one(), &d) {
            assert_eq!(hilbert_symbol(&f, &f.one(), &d, &v).unwrap(), 1);
        }
    }

    #[test]
    fn bilinear_and_symmetric() {
        for d in [2i64, 5] {
            let f = TotallyRealField::real_quadratic(d).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(d as u64);
            for _ in 0..40 {
                let mut r = || {
                    let x = FieldElement::from_ints(&[rng.gen_range(-12..=12), rng.gen_range(-12..=12)]);
                    if x.is_zero() {
                        f.one()
                    } else {
                        x
                    }
                };
                let (a, b, c) = (r(), r(), r());
                for v in places(&f, &f.mul(&a, &b), &c) {
                    let ab = hilbert_symbol(&f, &f.mul(&a, &b), &c, &v).unwrap();
                    let sep = hilbert_symbol(&f, &a, &c, &v).unwrap() * hilbert_symbol(&f, &b, &c, &v).unwrap();
                    assert_eq!(ab, sep, "{a} {b} {c} at {}", v.label());
                    assert_eq!(hilbert_symbol(&f, &c, &a, &v).unwrap(), hilbert_symbol(&f, &a, &c, &v).unwrap());
                    assert_eq!(hilbert_symbol(&f, &a, &f.neg(&a), &v).unwrap(), 1);
                }
            }
        }
    }

    #[test]
    fn norms_have_trivial_symbols() {
        let f = TotallyRealField::real_quadratic(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in [FieldElement::from_ints(&[-1, 0]), FieldElement::from_ints(&[-3, 1]), FieldElement::from_ints(&[2, -5])] {
            for _ in 0..25 {
                let x = FieldElement::from_ints(&[rng.gen_range(-9..=9), rng.gen_range(-9..=9)]);
                let y = FieldElement::from_ints(&[rng.gen_range(-9..=9), rng.gen_range(-9..=9)]);
                let a = f.sub(&f.mul(&x, &x), &f.mul(&d, &f.mul(&y, &y)));
                if a.is_zero() {
                    continue;
                }
                for v in places(&f, &a, &d) {
                    assert_eq!(hilbert_symbol(&f, &a, &d, &v).unwrap(), 1, "{a} {d} at {}", v.label());
                }
            }
        }
    }

    #[test]
    fn ramification_of_gaussian_extension() {
        let f = TotallyRealField::real_quadratic(5).unwrap();
        let r = ramified_primes(&f, &f.from_int(-1)).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].p, 2);
        let q = parse_prime(&f, "5").unwrap();
        assert!(!is_ramified(&f, &f.from_int(-1), &Place::Finite(q)).unwrap());
        let s = ramified_primes(&f, &f.from_int(-3)).unwrap();
        assert!(s.iter().any(|p| p.p == 3));
    }
}
