//! Fractional ideals as Hermite-reduced lattices, and prime ideals of real quadratic fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::finite::{Fq, ResidueField};
use super::{FieldElement, TotallyRealField};
use crate::arith::{self, hnf, rat, Rat};
use crate::error::{Error, Result};

/// `(1/den) · L` with `L` an integer lattice in Hermite form over the power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    pub den: BigInt,
    pub basis: Vec<Vec<BigInt>>,
}

impl Ideal {
    pub fn from_generators(field: &TotallyRealField, gens: &[FieldElement]) -> Result<Ideal> {
        let n = field.degree();
        let mut vecs: Vec<Vec<Rat>> = Vec::new();
        for g in gens {
            let mut x = g.clone();
            for _ in 0..n {
                vecs.push(x.0.clone());
                x = field.mul(&x, &field.theta());
            }
        }
        Self::from_rational_rows(&vecs, n)
    }

    pub fn from_rational_rows(rows: &[Vec<Rat>], n: usize) -> Result<Ideal> {
        let all: Vec<Rat> = rows.iter().flatten().cloned().collect();
        let den = arith::common_denominator(&all);
        let int_rows: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|c| (c * Rat::from_integer(den.clone())).to_integer()).collect()).collect();
        let basis = hnf(&int_rows);
        if basis.len() != n {
            return Err(Error::invalid("ideal generators do not span a full lattice"));
        }
        Ok(Ideal { den, basis }.normalized())
    }

    fn normalized(mut self) -> Ideal {
        let g = self.basis.iter().flatten().fold(self.den.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() {
            self.den /= &g;
            for row in &mut self.basis {
                for x in row.iter_mut() {
                    *x /= &g;
                }
            }
        }
        self
    }

    pub fn unit(field: &TotallyRealField) -> Ideal {
        Ideal::from_generators(field, &[field.one()]).unwrap()
    }

    /// Basis vectors as rational coordinate rows.
    pub fn rational_basis(&self) -> Vec<Vec<Rat>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| Rat::new(x.clone(), self.den.clone())).collect())
            .collect()
    }

    pub fn basis_elements(&self) -> Vec<FieldElement> {
        self.rational_basis().into_iter().map(FieldElement).collect()
    }

    pub fn mul(&self, other: &Ideal, field: &TotallyRealField) -> Ideal {
        let a = self.basis_elements();
        let b = other.basis_elements();
        let prods: Vec<Vec<Rat>> = a.iter().flat_map(|x| b.iter().map(move |y| (x, y))).map(|(x, y)| field.mul(x, y).0).collect();
        Ideal::from_rational_rows(&prods, field.degree()).expect("product of full lattices is full")
    }

    pub fn pow(&self, k: u32, field: &TotallyRealField) -> Ideal {
        let mut acc = Ideal::unit(field);
        for _ in 0..k {
            acc = acc.mul(self, field);
        }
        acc
    }

    /// Coordinates of `x` on this lattice basis (rational in general).
    pub fn coordinates(&self, x: &FieldElement) -> Vec<Rat> {
        let rows = self.rational_basis();
        let cols: Vec<Vec<Rat>> = rows;
        arith::solve_columns(&cols, &x.0).expect("lattice basis is invertible")
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.coordinates(x).iter().all(|c| c.is_integer())
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.basis_elements().iter().all(|b| other.contains(b))
    }

    /// Absolute norm: index relative to the order (may be fractional).
    pub fn norm(&self) -> Rat {
        let det = self.basis.iter().enumerate().fold(BigInt::one(), |acc, (i, r)| acc * &r[i]);
        Rat::new(det.abs(), self.den.pow(self.basis.len() as u32))
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// y·𝔞.
    pub fn scale(&self, field: &TotallyRealField, y: &FieldElement) -> Result<Ideal> {
        if y.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let rows: Vec<Vec<Rat>> = self.basis_elements().iter().map(|b| field.mul(b, y).0).collect();
        Ideal::from_rational_rows(&rows, field.degree())
    }

    /// Lattice sum 𝔞 + 𝔟.
    pub fn sum(&self, other: &Ideal) -> Ideal {
        let mut rows = self.rational_basis();
        rows.extend(other.rational_basis());
        let n = self.basis.len();
        Ideal::from_rational_rows(&rows, n).expect("sum of full lattices is full")
    }

    /// Smallest positive integer in the ideal (integral ideals).
    pub fn min_integer(&self) -> BigInt {
        // first row has pivot at coordinate 0 and the ℤ-part is generated by it
        let rows = self.rational_basis();
        let cols: Vec<Vec<Rat>> = rows;
        // intersect with ℚ·1: solve for coordinates of 1
        let c = arith::solve_columns(&cols, &{
            let mut e = vec![Rat::zero(); self.basis.len()];
            e[0] = Rat::one();
            e
        })
        .expect("basis invertible");
        let den = arith::common_denominator(&c);
        let v: Vec<BigInt> = c.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
        let g = arith::gcd_all(&v);
        den / g
    }
}

/// A prime ideal of a real quadratic field with its local data.
#[derive(Clone, Debug)]
pub struct PrimeIdeal {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    /// θ ≡ root (mod 𝔭) when f = 1.
    pub root: Option<u64>,
    pub ideal: Ideal,
    /// Element of valuation exactly one.
    pub uniformizer: FieldElement,
    /// τ with τ𝔭 ⊆ pO and ord_𝔭(τ) = e − 1.
    step: FieldElement,
    /// 𝔭-unit lying in every other prime above p.
    helper: FieldElement,
    pub kappa: ResidueField,
    pub label: String,
}

impl PartialEq for PrimeIdeal {
    fn eq(&self, o: &Self) -> bool {
        self.ideal == o.ideal
    }
}
impl Eq for PrimeIdeal {}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

impl PrimeIdeal {
    pub fn norm(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn ramification(&self) -> u32 {
        self.e
    }

    fn int_residue(&self, field: &TotallyRealField, y: &FieldElement) -> Fq {
        let p = BigInt::from(self.p);
        let c: Vec<u64> = y.0.iter().map(|x| x.to_integer().mod_floor(&p).to_u64().unwrap()).collect();
        let k = &self.kappa;
        match self.root {
            Some(r) => {
                let mut acc = k.zero();
                let mut pw = k.one();
                for ci in &c {
                    acc = k.add(&acc, &k.mul(&k.from_u64(*ci), &pw));
                    pw = k.mul(&pw, &k.from_u64(r));
                }
                acc
            }
            None => {
                let _ = field;
                [c[0] % self.p, c[1] % self.p]
            }
        }
    }

    /// Residue in κ_𝔭 of a 𝔭-integral element; `None` when ord_𝔭(x) < 0.
    pub fn residue(&self, field: &TotallyRealField, x: &FieldElement) -> Option<Fq> {
        let m = arith::common_denominator(&x.0);
        let y = x.scale(&Rat::from_integer(m.clone()));
        let pb = BigInt::from(self.p);
        let mut k = 0u32;
        let mut mprime = m;
        while (&mprime % &pb).is_zero() {
            mprime /= &pb;
            k += 1;
        }
        let mut z = y;
        let mut s_pow_res = self.kappa.one();
        if k > 0 {
            let hk = field.pow(&self.helper, k as i64).ok()?;
            z = field.mul(&z, &hk).scale(&Rat::new(BigInt::one(), pb.pow(k)));
            if !z.is_integral() {
                return None;
            }
            s_pow_res = self.kappa.pow(&self.int_residue(field, &self.helper), k as u64);
        }
        let num = self.int_residue(field, &z);
        let den = self.kappa.mul(&s_pow_res, &self.kappa.from_u64(mprime.mod_floor(&pb).to_u64().unwrap()));
        Some(self.kappa.mul(&num, &self.kappa.inv(&den)?))
    }

    /// 𝔭-adic valuation.
    pub fn ord(&self, field: &TotallyRealField, x: &FieldElement) -> Result<i64> {
        if x.is_zero() {
            return Err(Error::invalid("valuation of zero"));
        }
        let m = arith::common_denominator(&x.0);
        let mut y = x.scale(&Rat::from_integer(m.clone()));
        let pb = BigInt::from(self.p);
        let mut vm = 0i64;
        let mut mm = m;
        while (&mm % &pb).is_zero() {
            mm /= &pb;
            vm += 1;
        }
        let mut k = 0i64;
        let inv_p = Rat::new(BigInt::one(), pb.clone());
        while self.kappa.is_zero(&self.int_residue(field, &y)) {
            y = field.mul(&y, &self.step).scale(&inv_p);
            k += 1;
        }
        Ok(k - vm * self.e as i64)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.ideal.contains(x)
    }

    /// 𝔭^k for any integer k.
    pub fn ideal_power(&self, field: &TotallyRealField, k: i64) -> Result<Ideal> {
        if k >= 0 {
            return Ok(self.ideal.pow(k as u32, field));
        }
        // 𝔭·𝔭* = pO with 𝔭* the conjugate prime (or O when p is inert)
        let conj = if self.f == 2 {
            Ideal::unit(field)
        } else if self.e == 2 {
            self.ideal.clone()
        } else {
            primes_above(field, self.p)?
                .into_iter()
                .find(|q| q != self)
                .ok_or_else(|| Error::Internal("split prime without a conjugate".into()))?
                .ideal
        };
        let inv = conj.scale(field, &field.from_rat(&Rat::new(BigInt::one(), BigInt::from(self.p))))?;
        Ok(inv.pow((-k) as u32, field))
    }
}

pub fn is_fundamental_discriminant(d: &BigInt) -> bool {
    let d = match d.to_i64() {
        Some(v) => v,
        None => return false,
    };
    if d.rem_euclid(4) == 1 {
        super::is_squarefree(d)
    } else if d.rem_euclid(4) == 0 {
        let m = d / 4;
        (m.rem_euclid(4) == 2 || m.rem_euclid(4) == 3) && super::is_squarefree(m)
    } else {
        false
    }
}

/// All primes of F above the rational prime p (quadratic fields).
pub fn primes_above(field: &TotallyRealField, p: u64) -> Result<Vec<PrimeIdeal>> {
    field.require_quadratic("prime decomposition")?;
    if !arith::is_prime_u64(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    let c: Vec<i64> = field.poly_ints();
    let fp = |x: u64| -> u64 {
        let v = c[0] as i128 + c[1] as i128 * x as i128 + (x as i128) * (x as i128);
        v.rem_euclid(p as i128) as u64
    };
    let roots: Vec<u64> = (0..p).filter(|&r| fp(r) == 0).collect();
    let theta = field.theta();
    let pe = field.from_int(p as i64);
    let mut out = Vec::new();
    let make_lin = |r: u64| field.sub(&theta, &field.from_int(r as i64));
    match roots.len() {
        2 => {
            for (i, &r) in roots.iter().enumerate() {
                let other = roots[1 - i];
                let mut pi = make_lin(r);
                let pb = BigInt::from(p);
                if (field.norm(&pi).to_integer() % (&pb * &pb)).is_zero() {
                    pi = field.sub(&theta, &field.from_int((r + p) as i64));
                }
                let ideal = Ideal::from_generators(field, &[pe.clone(), pi.clone()])?;
                let helper = make_lin(other);
                out.push(PrimeIdeal {
                    p,
                    e: 1,
                    f: 1,
                    root: Some(r),
                    ideal,
                    uniformizer: pi,
                    step: helper.clone(),
                    helper,
                    kappa: ResidueField::prime(p),
                    label: format!("{p}:{r}"),
                });
            }
        }
        1 => {
            let r = roots[0];
            let pi = make_lin(r);
            let ideal = Ideal::from_generators(field, &[pe.clone(), pi.clone()])?;
            out.push(PrimeIdeal {
                p,
                e: 2,
                f: 1,
                root: Some(r),
                ideal,
                uniformizer: pi.clone(),
                step: pi,
                helper: field.one(),
                kappa: ResidueField::prime(p),
                label: format!("{p}"),
            });
        }
        _ => {
            let ideal = Ideal::from_generators(field, std::slice::from_ref(&pe))?;
            let c0 = (c[0] as i128).rem_euclid(p as i128) as u64;
            let c1 = (c[1] as i128).rem_euclid(p as i128) as u64;
            out.push(PrimeIdeal {
                p,
                e: 1,
                f: 2,
                root: None,
                ideal,
                uniformizer: pe,
                step: field.one(),
                helper: field.one(),
                kappa: ResidueField::quadratic(p, c0, c1),
                label: format!("{p}"),
            });
        }
    }
    Ok(out)
}

/// Parses `"p"` (unique prime above p) or `"p:r"` (prime containing θ − r).
pub fn parse_prime(field: &TotallyRealField, s: &str) -> Result<PrimeIdeal> {
    let s = s.trim();
    let (ps, rs) = match s.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (s, None),
    };
    let p: u64 = ps.trim().parse().map_err(|_| Error::Parse(format!("bad prime label {s:?}")))?;
    let primes = primes_above(field, p)?;
    match rs {
        None if primes.len() == 1 => Ok(primes.into_iter().next().unwrap()),
        None => Err(Error::invalid(format!("{p} splits; name a prime as \"{p}:r\""))),
        Some(r) => {
            let r: u64 = r.trim().parse().map_err(|_| Error::Parse(format!("bad prime label {s:?}")))?;
            primes
                .into_iter()
                .find(|q| q.root == Some(r % p))
                .ok_or_else(|| Error::invalid(format!("no prime above {p} contains θ − {r}")))
        }
    }
}

/// The prime of F containing a given element of prime norm (up to sign).
pub fn prime_of_element(field: &TotallyRealField, x: &FieldElement) -> Result<PrimeIdeal> {
    let nrm = field.norm(x).abs();
    if !nrm.is_integer() {
        return Err(Error::invalid("element is not integral"));
    }
    let fac = arith::factor(&nrm.to_integer());
    let p = fac.first().map(|f| f.0).ok_or_else(|| Error::invalid("unit has no prime"))?;
    for q in primes_above(field, p)? {
        if q.contains(x) {
            return Ok(q);
        }
    }
    Err(Error::Internal("element lies in no prime above its norm".into()))
}

/// A place of F: a real embedding (by index in the field's place order) or a prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Place {
    Real(usize),
    Finite(PrimeIdeal),
}

impl Place {
    pub fn label(&self) -> String {
        match self {
            Place::Real(j) => format!("inf{j}"),
            Place::Finite(p) => p.label.clone(),
        }
    }

    pub fn is_real(&self) -> bool {
        matches!(self, Place::Real(_))
    }

    pub fn parse(field: &TotallyRealField, s: &str) -> Result<Place> {
        let s = s.trim();
        if let Some(j) = s.strip_prefix("inf") {
            let j: usize = j.parse().map_err(|_| Error::Parse(format!("bad place {s:?}")))?;
            if j >= field.degree() {
                return Err(Error::invalid(format!("no real place {s}")));
            }
            return Ok(Place::Real(j));
        }
        Ok(Place::Finite(parse_prime(field, s)?))
    }
}

/// Trial search for a generator of a principal integral ideal, bounded by
/// `|ρ_j(α)| ≤ sqrt(N·η)` for the fundamental unit η.
pub fn principal_generator(field: &TotallyRealField, ideal: &Ideal, eta: &FieldElement) -> Result<Option<FieldElement>> {
    field.require_quadratic("principal generator search")?;
    let n = ideal.norm();
    let eta_big = field.embedding_f64(eta, 0).abs().max(field.embedding_f64(eta, 1).abs());
    let bound = (arith::to_f64(&n) * eta_big).sqrt() + 1.0;
    // α = a + bθ with ρ_j(α) = a + bθ_j bounded ⇒ |b| ≤ 2·bound/|θ₁−θ₂|
    let t0 = field.embedding_f64(&field.theta(), 0);
    let t1 = field.embedding_f64(&field.theta(), 1);
    let bmax = (2.0 * bound / (t0 - t1).abs()).ceil() as i64 + 1;
    let target = n.to_integer();
    for b in -bmax..=bmax {
        // a ranges so that |a + bθ₀| ≤ bound
        let lo = (-bound - b as f64 * t0).floor() as i64 - 1;
        let hi = (bound - b as f64 * t0).ceil() as i64 + 1;
        for a in lo..=hi {
            let x = FieldElement(vec![rat(a), rat(b)]);
            if x.is_zero() {
                continue;
            }
            if field.norm(&x).abs().to_integer() == target && ideal.contains(&x) {
                return Ok(Some(x));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> TotallyRealField {
        TotallyRealField::real_quadratic(5).unwrap().with_place_order(&[1, 0]).unwrap()
    }

    #[test]
    fn valuations_at_root_five() {
        let f = f5();
        let q = parse_prime(&f, "5").unwrap();
        assert_eq!(q.e, 2);
        let s5 = f.sqrt_d().unwrap();
        assert_eq!(q.ord(&f, &s5).unwrap(), 1);
        assert_eq!(q.ord(&f, &f.from_int(5)).unwrap(), 2);
        assert_eq!(q.ord(&f, &f.theta()).unwrap(), 0);
        assert_eq!(q.ord(&f, &f.from_rat(&crate::arith::ratio(1, 25))).unwrap(), -4);
        assert!(q.ord(&f, &f.zero()).is_err());
    }

    #[test]
    fn decomposition_types() {
        let f = TotallyRealField::real_quadratic(2).unwrap();
        assert_eq!(primes_above(&f, 7).unwrap().len(), 2);
        assert_eq!(primes_above(&f, 5).unwrap()[0].f, 2);
        assert_eq!(primes_above(&f, 2).unwrap()[0].e, 2);
        let g = f5();
        assert_eq!(primes_above(&g, 2).unwrap()[0].f, 2);
        assert_eq!(primes_above(&g, 11).unwrap().len(), 2);
    }

    #[test]
    fn residues_of_split_prime_fractions() {
        let f = TotallyRealField::real_quadratic(2).unwrap();
        let ps = primes_above(&f, 7).unwrap();
        let (p, q) = (&ps[0], &ps[1]);
        // 1/π_q is a p-unit with a denominator of 7 in coordinates
        let x = f.inv(&q.uniformizer).unwrap();
        let r = p.residue(&f, &x).unwrap();
        let back = p.residue(&f, &q.uniformizer).unwrap();
        assert_eq!(p.kappa.mul(&r, &back), p.kappa.one());
        assert!(q.residue(&f, &x).is_none());
    }

    #[test]
    fn ideal_norms_and_products() {
        let f = f5();
        let q = parse_prime(&f, "5").unwrap();
        let q2 = q.ideal.mul(&q.ideal, &f);
        assert_eq!(q2, Ideal::from_generators(&f, &[f.from_int(5)]).unwrap());
        assert_eq!(q2.norm(), rat(25));
        assert_eq!(q.ideal.min_integer(), BigInt::from(5));
    }

    #[test]
    fn negative_prime_powers_invert() {
        let f = TotallyRealField::real_quadratic(2).unwrap();
        for p in [2u64, 3, 7] {
            for q in primes_above(&f, p).unwrap() {
                let inv = q.ideal_power(&f, -2).unwrap();
                assert_eq!(inv.mul(&q.ideal_power(&f, 2).unwrap(), &f), Ideal::unit(&f), "{}", q.label);
            }
        }
    }
}
