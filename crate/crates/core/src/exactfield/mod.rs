//! Exact arithmetic in a totally real field given by a monogenic integral basis.

pub mod class;
pub mod finite;
pub mod poly;
pub mod prime;
pub mod units;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, rat, sign_of, sign_quadratic, Rat};
use crate::error::{Error, Result};
use crate::interval::Interval;
use poly::Poly;

pub use class::{st_class_data, STClassData};
pub use prime::{Place, PrimeIdeal};
pub use units::{st_unit_basis, totally_positive_fundamental_unit, Convention, STUnitBasis};

/// Coordinates on the power basis 1, θ, …, θ^{n−1}.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(pub Vec<Rat>);

impl Serialize for FieldElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        FieldElement::parse(&v).map_err(serde::de::Error::custom)
    }
}

impl FieldElement {
    pub fn coords(&self) -> &[Rat] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, k: &Rat) -> FieldElement {
        FieldElement(self.0.iter().map(|c| c * k).collect())
    }

    pub fn from_ints(v: &[i64]) -> FieldElement {
        FieldElement(v.iter().map(|&x| rat(x)).collect())
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|c| c.is_integer())
    }

    /// Coordinates as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(arith::fmt_rat).collect()
    }

    pub fn parse(v: &[String]) -> Result<FieldElement> {
        Ok(FieldElement(v.iter().map(|s| arith::parse_rat(s)).collect::<Result<_>>()?))
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.to_strings().join(", "))
    }
}

/// Arithmetic operations accepted by [`TotallyRealField::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Mul,
    Inv,
    Neg,
}

#[derive(Clone, Debug)]
pub struct TotallyRealField {
    n: usize,
    poly: Poly,
    roots: Vec<(Rat, Rat)>,
    /// `order[j]` is the ascending-root index used by embedding `j`.
    order: Vec<usize>,
    omega_sign: i32,
    /// θ^k reduced, for k in 0..2n−1.
    powers: Vec<Vec<Rat>>,
    /// For quadratic fields: θ = (−c₁ + s·√disc)/2 with s = ∓1 by root index.
    disc: Option<Rat>,
    refinement_cap: usize,
}

impl TotallyRealField {
    /// Field generated by a root θ of the monic integer polynomial `coeffs`
    /// (constant term first). The power basis of θ is taken as the integral basis.
    pub fn new(coeffs: &[i64]) -> Result<Self> {
        let poly: Poly = coeffs.iter().map(|&c| rat(c)).collect();
        Self::from_poly(poly)
    }

    pub fn from_poly(poly: Poly) -> Result<Self> {
        let n = poly.len().checked_sub(1).ok_or_else(|| Error::invalid("empty polynomial"))?;
        if n == 0 {
            return Err(Error::invalid("constant polynomial"));
        }
        if !poly[n].is_one() || poly.iter().any(|c| !c.is_integer()) {
            return Err(Error::invalid("minimal polynomial must be monic with integer coefficients"));
        }
        if n > 3 {
            return Err(Error::unsupported("fields of degree above 3"));
        }
        if n >= 2 {
            // a rational root of a monic integer polynomial is an integer dividing c0
            let c0 = poly[0].to_integer();
            let bound = c0.abs().to_i64().ok_or_else(|| Error::Overflow("constant term".into()))?;
            let divisors = (1..=bound.max(1)).filter(|d| c0.is_zero() || bound % d == 0);
            for d in divisors {
                for s in [d, -d] {
                    if poly::eval(&poly, &rat(s)).is_zero() {
                        return Err(Error::invalid("minimal polynomial is reducible"));
                    }
                }
            }
            if c0.is_zero() {
                return Err(Error::invalid("minimal polynomial is reducible"));
            }
        }
        let roots = poly::isolate_real_roots(&poly);
        if roots.len() != n {
            return Err(Error::invalid("minimal polynomial must have only real roots"));
        }
        let disc = if n == 2 {
            let d = &poly[1] * &poly[1] - rat(4) * &poly[0];
            if arith::rat_sqrt(&d).is_some() {
                return Err(Error::invalid("minimal polynomial is reducible"));
            }
            if !prime::is_fundamental_discriminant(&d.to_integer()) {
                return Err(Error::invalid("power basis is not the maximal order"));
            }
            Some(d)
        } else {
            None
        };
        let mut f = TotallyRealField {
            n,
            poly,
            roots,
            order: (0..n).collect(),
            omega_sign: 1,
            powers: Vec::new(),
            disc,
            refinement_cap: 4000,
        };
        f.powers = (0..(2 * n).max(1)).map(|k| f.reduce_monomial(k)).collect();
        Ok(f)
    }

    /// ℚ(√d) for a squarefree d > 1 with its maximal order basis.
    pub fn real_quadratic(d: i64) -> Result<Self> {
        if d <= 1 || !is_squarefree(d) {
            return Err(Error::invalid(format!("{d} is not a squarefree integer above 1")));
        }
        if d.rem_euclid(4) == 1 {
            Self::new(&[-(d - 1) / 4, -1, 1])
        } else {
            Self::new(&[-d, 0, 1])
        }
    }

    /// Reorders embeddings: embedding `j` becomes the root with ascending index `order[j]`.
    pub fn with_place_order(mut self, order: &[usize]) -> Result<Self> {
        let mut seen = order.to_vec();
        seen.sort_unstable();
        if seen != (0..self.n).collect::<Vec<_>>() {
            return Err(Error::invalid("place order must be a permutation of the embeddings"));
        }
        self.order = order.to_vec();
        self.omega_sign = permutation_sign(order);
        Ok(self)
    }

    pub fn with_refinement_cap(mut self, cap: usize) -> Self {
        self.refinement_cap = cap;
        self
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn poly_ints(&self) -> Vec<i64> {
        self.poly.iter().map(|c| c.to_integer().to_i64().unwrap()).collect()
    }

    pub fn place_order(&self) -> &[usize] {
        &self.order
    }

    pub fn is_quadratic(&self) -> bool {
        self.n == 2
    }

    pub fn require_quadratic(&self, what: &str) -> Result<()> {
        if self.n == 2 {
            Ok(())
        } else {
            Err(Error::unsupported(format!("{what} is implemented for real quadratic fields only")))
        }
    }

    /// Embedding index at the larger root (quadratic case: where √d > 0).
    pub fn plus_embedding(&self) -> usize {
        self.order.iter().position(|&r| r + 1 == self.n).unwrap()
    }

    /// Sign of det(ρ_i(ω_j)) for the power basis.
    pub fn omega_sign(&self) -> i32 {
        self.omega_sign
    }

    /// Discriminant of the minimal polynomial (quadratic case).
    pub fn quadratic_disc(&self) -> Option<&Rat> {
        self.disc.as_ref()
    }

    fn reduce_monomial(&self, k: usize) -> Vec<Rat> {
        let n = self.n;
        let mut v = vec![Rat::zero(); k.max(n - 1) + 1];
        v[k] = Rat::one();
        for i in (n..v.len()).rev() {
            let c = v[i].clone();
            if c.is_zero() {
                continue;
            }
            for j in 0..n {
                let t = &c * &self.poly[j];
                v[i - n + j] -= t;
            }
            v[i] = Rat::zero();
        }
        v.truncate(n);
        v
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(vec![Rat::zero(); self.n])
    }

    pub fn one(&self) -> FieldElement {
        self.from_rat(&Rat::one())
    }

    pub fn from_rat(&self, x: &Rat) -> FieldElement {
        let mut v = vec![Rat::zero(); self.n];
        v[0] = x.clone();
        FieldElement(v)
    }

    pub fn from_int(&self, x: i64) -> FieldElement {
        self.from_rat(&rat(x))
    }

    /// The generator θ.
    pub fn theta(&self) -> FieldElement {
        let mut v = vec![Rat::zero(); self.n];
        if self.n > 1 {
            v[1] = Rat::one();
        } else {
            v[0] = -self.poly[0].clone();
        }
        FieldElement(v)
    }

    pub fn element(&self, coords: &[Rat]) -> Result<FieldElement> {
        if coords.len() != self.n {
            return Err(Error::invalid(format!("expected {} coordinates, got {}", self.n, coords.len())));
        }
        Ok(FieldElement(coords.to_vec()))
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement(a.0.iter().map(|x| -x).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let n = self.n;
        let mut out = vec![Rat::zero(); n];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.powers[i + j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * c;
                    }
                }
            }
        }
        FieldElement(out)
    }

    /// Matrix of multiplication by `a`: column j holds the coordinates of a·θ^j.
    pub fn mul_matrix(&self, a: &FieldElement) -> Vec<Vec<Rat>> {
        let cols: Vec<Vec<Rat>> = (0..self.n)
            .map(|j| {
                let mut e = vec![Rat::zero(); self.n];
                e[j] = Rat::one();
                self.mul(a, &FieldElement(e)).0
            })
            .collect();
        (0..self.n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
    }

    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let m = self.mul_matrix(a);
        let cols: Vec<Vec<Rat>> = (0..self.n).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect();
        let target = self.one().0;
        arith::solve_columns(&cols, &target).map(FieldElement).ok_or(Error::DivisionByZero)
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(&self, a: &FieldElement, e: i64) -> Result<FieldElement> {
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = self.one();
        let mut b = base;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn arith(&self, a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Inv => self.inv(a),
            FieldOp::Neg => Ok(self.neg(a)),
        }
    }

    pub fn norm(&self, a: &FieldElement) -> Rat {
        arith::determinant(&self.mul_matrix(a))
    }

    pub fn trace(&self, a: &FieldElement) -> Rat {
        let m = self.mul_matrix(a);
        (0..self.n).map(|i| m[i][i].clone()).sum()
    }

    /// Galois conjugate in the quadratic case.
    pub fn conjugate(&self, a: &FieldElement) -> Result<FieldElement> {
        self.require_quadratic("conjugation")?;
        // θ + θ' = −c₁
        let c1 = &self.poly[1];
        Ok(FieldElement(vec![&a.0[0] - &a.0[1] * c1, -a.0[1].clone()]))
    }

    /// Quadratic case: ρ_j(a) = p + q·√disc.
    fn quadratic_parts(&self, a: &FieldElement, j: usize) -> (Rat, Rat) {
        let c1 = &self.poly[1];
        let half = Rat::new(BigInt::one(), BigInt::from(2));
        let s = if self.order[j] == 0 { -Rat::one() } else { Rat::one() };
        let p = &a.0[0] - &a.0[1] * c1 * &half;
        let q = &a.0[1] * &half * s;
        (p, q)
    }

    /// Exact combination `A·ρ_i(x) + B·ρ_j(x)` sign for the quadratic case.
    pub fn sign_of_embedding_combination(&self, terms: &[(Rat, &FieldElement, usize)]) -> Result<i32> {
        self.require_quadratic("mixed embedding signs")?;
        let disc = self.disc.as_ref().unwrap();
        let (mut p, mut q) = (Rat::zero(), Rat::zero());
        for (c, x, j) in terms {
            let (a, b) = self.quadratic_parts(x, *j);
            p += c * a;
            q += c * b;
        }
        Ok(sign_quadratic(&p, &q, disc))
    }

    /// Certified sign of ρ_j(a).
    pub fn embedding_sign(&self, a: &FieldElement, j: usize) -> Result<i32> {
        if j >= self.n {
            return Err(Error::invalid(format!("embedding index {j} out of range")));
        }
        if a.is_zero() {
            return Ok(0);
        }
        if self.n == 1 {
            return Ok(sign_of(&a.0[0]));
        }
        if let Some(d) = &self.disc {
            let (p, q) = self.quadratic_parts(a, j);
            return Ok(sign_quadratic(&p, &q, d));
        }
        let (lo, hi) = self.refine_root(self.order[j], |lo, hi| {
            let (l, h) = poly::eval_interval(&a.0, lo, hi);
            l.is_positive() || h.is_negative()
        })?;
        let (l, _) = poly::eval_interval(&a.0, &lo, &hi);
        Ok(if l.is_positive() { 1 } else { -1 })
    }

    pub fn embedding_signs(&self, a: &FieldElement) -> Result<Vec<i32>> {
        (0..self.n).map(|j| self.embedding_sign(a, j)).collect()
    }

    pub fn is_totally_positive(&self, a: &FieldElement) -> Result<bool> {
        Ok(self.embedding_signs(a)?.iter().all(|&s| s > 0))
    }

    /// Bisects the isolating interval of root `idx` until `done(lo, hi)`.
    fn refine_root(&self, idx: usize, done: impl Fn(&Rat, &Rat) -> bool) -> Result<(Rat, Rat)> {
        let (mut lo, mut hi) = self.roots[idx].clone();
        let two = rat(2);
        for _ in 0..self.refinement_cap {
            if done(&lo, &hi) {
                return Ok((lo, hi));
            }
            let mid = (&lo + &hi) / &two;
            let fm = poly::eval(&self.poly, &mid);
            if fm.is_zero() {
                return Ok((mid.clone(), mid));
            }
            let fl = poly::eval(&self.poly, &lo);
            if fl.is_zero() || (sign_of(&fl) != sign_of(&fm)) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Err(Error::RefinementCap(self.refinement_cap))
    }

    /// Rational enclosure of ρ_j(a) of width below `2^-bits` (times scale).
    pub fn embedding_bounds(&self, a: &FieldElement, j: usize, bits: u32) -> Result<(Rat, Rat)> {
        let eps = Rat::new(BigInt::one(), BigInt::one() << bits);
        let (lo, hi) = self.refine_root(self.order[j], |lo, hi| {
            let (l, h) = poly::eval_interval(&a.0, lo, hi);
            h - l < eps
        })?;
        Ok(poly::eval_interval(&a.0, &lo, &hi))
    }

    pub fn embedding_interval(&self, a: &FieldElement, j: usize, bits: u32) -> Result<Interval> {
        let (l, h) = self.embedding_bounds(a, j, bits)?;
        Ok(Interval::from_rat_bounds(&l, &h))
    }

    pub fn embedding_f64(&self, a: &FieldElement, j: usize) -> f64 {
        if let Some(d) = &self.disc {
            let (p, q) = self.quadratic_parts(a, j);
            let (pf, qf) = (arith::to_f64(&p), arith::to_f64(&q) * arith::to_f64(d).sqrt());
            // avoid cancellation: p + q√d = (p² − q²d)/(p − q√d)
            if pf * qf < 0.0 {
                let num = arith::to_f64(&(&p * &p - &q * &q * d));
                return num / (pf - qf);
            }
            return pf + qf;
        }
        self.embedding_interval(a, j, 60).map(|i| i.mid()).unwrap_or(f64::NAN)
    }

    /// Sign of det(ρ_i(x_j)) computed as sign(det of coordinates) times the cached sign.
    pub fn orientation(&self, xs: &[&FieldElement]) -> i32 {
        assert_eq!(xs.len(), self.n, "orientation needs n vectors");
        let m: Vec<Vec<Rat>> = (0..self.n).map(|i| xs.iter().map(|x| x.0[i].clone()).collect()).collect();
        sign_of(&arith::determinant(&m)) * self.omega_sign
    }

    /// Minkowski bound √|D|/2 for the quadratic case.
    pub fn minkowski_bound(&self) -> Result<f64> {
        self.require_quadratic("Minkowski bound")?;
        Ok(arith::to_f64(self.disc.as_ref().unwrap()).sqrt() / 2.0)
    }

    /// Field discriminant (the polynomial discriminant, since the basis is integral).
    pub fn discriminant(&self) -> Result<BigInt> {
        self.require_quadratic("discriminant")?;
        Ok(self.disc.as_ref().unwrap().to_integer())
    }

    /// Squarefree d with F = ℚ(√d).
    pub fn squarefree_d(&self) -> Result<i64> {
        let disc = self.discriminant()?.to_i64().ok_or_else(|| Error::Overflow("discriminant".into()))?;
        let mut d = disc;
        let mut k = 2;
        while k * k <= d.abs() {
            while d % (k * k) == 0 {
                d /= k * k;
            }
            k += 1;
        }
        Ok(d)
    }

    /// Element √d written on the power basis.
    pub fn sqrt_d(&self) -> Result<FieldElement> {
        self.require_quadratic("√d")?;
        // 2θ + c₁ = ±√disc
        let disc = self.disc.as_ref().unwrap();
        let d = rat(self.squarefree_d()?);
        let k = arith::rat_sqrt(&(disc / &d)).ok_or_else(|| Error::Internal("disc/d not a square".into()))?;
        let two_theta_c1 = FieldElement(vec![self.poly[1].clone(), rat(2)]);
        let x = two_theta_c1.scale(&(Rat::one() / k));
        // choose the sign making it positive at the larger root
        if self.embedding_sign(&x, self.plus_embedding())? > 0 {
            Ok(x)
        } else {
            Ok(self.neg(&x))
        }
    }

    /// Is `a` a square in F (quadratic case)?
    pub fn sqrt(&self, a: &FieldElement) -> Result<Option<FieldElement>> {
        self.require_quadratic("square roots")?;
        if a.is_zero() {
            return Ok(Some(self.zero()));
        }
        if !self.is_totally_positive(a)? {
            return Ok(None);
        }
        let nrm = self.norm(a);
        let Some(sn) = arith::rat_sqrt(&nrm) else { return Ok(None) };
        // x² = a, x·x' = ±sn, so x + x' = t with t² = tr(a) ± 2 sn
        let tr = self.trace(a);
        for s in [sn.clone(), -sn] {
            let t2 = &tr + rat(2) * &s;
            let Some(t) = arith::rat_sqrt(&t2) else { continue };
            if t.is_zero() {
                continue;
            }
            // x satisfies X² − tX + s = 0 and x² = a ⇒ a − tx + s = 0 ⇒ x = (a + s)/t
            let x = self.add(a, &self.from_rat(&s)).scale(&(Rat::one() / &t));
            if self.mul(&x, &x) == *a {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

fn permutation_sign(p: &[usize]) -> i32 {
    let mut s = 1;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                s = -s;
            }
        }
    }
    s
}

pub fn is_squarefree(d: i64) -> bool {
    let d = d.abs();
    let mut k = 2;
    while k * k <= d {
        if d % (k * k) == 0 {
            return false;
        }
        k += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::ratio;

    fn sqrt5_golden_order() -> TotallyRealField {
        TotallyRealField::real_quadratic(5).unwrap().with_place_order(&[1, 0]).unwrap()
    }

    fn eps(f: &TotallyRealField) -> FieldElement {
        f.theta()
    }

    #[test]
    fn golden_ratio_identities() {
        let f = sqrt5_golden_order();
        let e = eps(&f);
        let e2 = f.mul(&e, &e);
        // (3+√5)/2 = 1 + θ
        assert_eq!(e2, FieldElement::from_ints(&[1, 1]));
        assert_eq!(f.inv(&e).unwrap(), f.sub(&e, &f.one()));
        assert_eq!(f.add(&e, &f.zero()), e);
        assert_eq!(f.inv(&f.zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn signs_of_golden_ratio() {
        let f = sqrt5_golden_order();
        let e = eps(&f);
        assert_eq!(f.embedding_sign(&e, 0).unwrap(), 1);
        assert_eq!(f.embedding_sign(&e, 1).unwrap(), -1);
        assert_eq!(f.embedding_sign(&f.zero(), 1).unwrap(), 0);
    }

    #[test]
    fn orientation_examples() {
        let f = sqrt5_golden_order();
        let s5 = f.sqrt_d().unwrap();
        assert_eq!(f.embedding_sign(&s5, 0).unwrap(), 1);
        assert_eq!(f.orientation(&[&f.one(), &s5]), -1);
        let e2 = FieldElement::from_ints(&[1, 1]);
        assert_eq!(f.orientation(&[&f.one(), &e2]), -1);
        assert_eq!(f.orientation(&[&e2, &e2]), 0);
    }

    #[test]
    fn norms_match_embedding_products() {
        let f = TotallyRealField::real_quadratic(2).unwrap();
        let x = f.element(&[ratio(3, 2), rat(-5)]).unwrap();
        let p0 = f.embedding_bounds(&x, 0, 80).unwrap();
        let p1 = f.embedding_bounds(&x, 1, 80).unwrap();
        let approx = (&p0.0 * &p1.0 - f.norm(&x)).abs();
        assert!(approx < ratio(1, 1_000_000));
    }

    #[test]
    fn cubic_field_signs() {
        let f = TotallyRealField::new(&[-1, -2, 1, 1]).unwrap();
        let t = f.theta();
        let signs = f.embedding_signs(&t).unwrap();
        assert_eq!(signs, vec![-1, -1, 1]);
        let t2 = f.mul(&t, &t);
        assert_eq!(f.norm(&t), rat(1));
        assert_eq!(f.mul(&f.inv(&t2).unwrap(), &t2), f.one());
    }

    #[test]
    fn square_roots() {
        let f = TotallyRealField::real_quadratic(5).unwrap();
        let e = f.theta();
        let e2 = f.mul(&e, &e);
        let r = f.sqrt(&e2).unwrap().unwrap();
        assert_eq!(f.mul(&r, &r), e2);
        assert!(f.sqrt(&f.from_int(5)).unwrap().is_none());
        assert!(f.sqrt(&f.from_int(-1)).unwrap().is_none());
    }

    #[test]
    fn rejects_bad_polynomials() {
        assert!(TotallyRealField::new(&[1, 0, 1]).is_err());
        assert!(TotallyRealField::new(&[-4, 0, 1]).is_err());
        assert!(TotallyRealField::new(&[-6, 1, 1]).is_err());
        // x² − 12: ℤ[√12] is not maximal
        assert!(TotallyRealField::new(&[-12, 0, 1]).is_err());
    }
}
