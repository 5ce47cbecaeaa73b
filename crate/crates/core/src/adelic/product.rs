use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};

use super::FiniteTestFunction;
use crate::arith::{self, Rat};
use crate::error::{Error, Result};
use crate::exactfield::prime::{primes_above, Ideal};
use crate::exactfield::{FieldElement, PrimeIdeal, TotallyRealField};

/// A Schwartz–Bruhat function on one completion F_𝔭.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalFactor {
    /// 1_{O_𝔭}
    Integers,
    /// 1_{O_𝔭^×}
    Units,
    /// 1_{𝔭O_𝔭}
    Maximal,
    /// 1_{1+𝔭^m O_𝔭}
    OneUnits(u32),
    /// Σ_{x∈M} h_x with M ⊆ 𝔽_q, h_x = 1_{π⁻¹(x)} − 1_{π⁻¹(0)}
    HSum(Vec<u64>),
    /// z ↦ f(z/y), the action of the local idele y.
    Acted(FieldElement, Box<LocalFactor>),
}

impl LocalFactor {
    /// (a, b) with the factor supported on 𝔭^a and constant on cosets of 𝔭^b.
    pub fn levels(&self, field: &TotallyRealField, p: &PrimeIdeal) -> Result<(i64, i64)> {
        Ok(match self {
            LocalFactor::Integers => (0, 0),
            LocalFactor::Units => (0, 1),
            LocalFactor::Maximal => (1, 1),
            LocalFactor::OneUnits(m) => (0, *m as i64),
            LocalFactor::HSum(_) => (0, 1),
            LocalFactor::Acted(y, inner) => {
                let v = p.ord(field, y)?;
                let (a, b) = inner.levels(field, p)?;
                (a + v, b + v)
            }
        })
    }

    pub fn eval(&self, field: &TotallyRealField, p: &PrimeIdeal, z: &FieldElement) -> Result<i64> {
        if z.is_zero() {
            return Ok(match self {
                LocalFactor::Integers | LocalFactor::Maximal => 1,
                LocalFactor::Units | LocalFactor::OneUnits(_) => 0,
                LocalFactor::HSum(m) => -(m.iter().filter(|&&x| x % p.p != 0).count() as i64),
                LocalFactor::Acted(_, inner) => inner.eval(field, p, z)?,
            });
        }
        Ok(match self {
            LocalFactor::Integers => (p.ord(field, z)? >= 0) as i64,
            LocalFactor::Units => (p.ord(field, z)? == 0) as i64,
            LocalFactor::Maximal => (p.ord(field, z)? >= 1) as i64,
            LocalFactor::OneUnits(m) => {
                let w = field.sub(z, &field.one());
                (w.is_zero() || p.ord(field, &w)? >= *m as i64) as i64
            }
            LocalFactor::HSum(m) => match p.residue(field, z) {
                None => 0,
                Some(r) => {
                    let hit = m.iter().any(|&x| x % p.p != 0 && p.kappa.from_u64(x) == r) as i64;
                    let size = m.iter().filter(|&&x| x % p.p != 0).count() as i64;
                    if p.kappa.is_zero(&r) {
                        -size
                    } else {
                        hit
                    }
                }
            },
            LocalFactor::Acted(y, inner) => inner.eval(field, p, &field.div(z, y)?)?,
        })
    }
}

/// ∏_𝔭 f_𝔭 with f_𝔭 = 1_{O_𝔭} at every prime not listed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProductTestFunction {
    pub factors: Vec<(PrimeIdeal, LocalFactor)>,
}

impl ProductTestFunction {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, p: &PrimeIdeal, f: LocalFactor) -> Self {
        match self.factors.iter_mut().find(|(q, _)| q == p) {
            Some(slot) => slot.1 = f,
            None => self.factors.push((p.clone(), f)),
        }
        self
    }

    pub fn factor(&self, p: &PrimeIdeal) -> LocalFactor {
        self.factors.iter().find(|(q, _)| q == p).map_or(LocalFactor::Integers, |(_, f)| f.clone())
    }

    /// Action of the idele equal to y at 𝔭 and to 1 elsewhere.
    pub fn act_local(&self, p: &PrimeIdeal, y: &FieldElement) -> Self {
        let f = self.factor(p);
        self.clone().with(p, LocalFactor::Acted(y.clone(), Box::new(f)))
    }

    fn ideal_product(&self, field: &TotallyRealField, pick: impl Fn((i64, i64)) -> i64) -> Result<Ideal> {
        let mut acc = Ideal::unit(field);
        for (p, f) in &self.factors {
            let k = pick(f.levels(field, p)?);
            if k != 0 {
                acc = acc.mul(&p.ideal_power(field, k)?, field);
            }
        }
        Ok(acc)
    }

    pub fn support_ideal(&self, field: &TotallyRealField) -> Result<Ideal> {
        self.ideal_product(field, |(a, _)| a)
    }

    pub fn period_ideal(&self, field: &TotallyRealField) -> Result<Ideal> {
        self.ideal_product(field, |(a, b)| b - a)
    }

    fn local_product(&self, field: &TotallyRealField, x: &FieldElement) -> Result<i64> {
        let mut v = 1;
        for (p, f) in &self.factors {
            v *= f.eval(field, p, x)?;
            if v == 0 {
                break;
            }
        }
        Ok(v)
    }

    pub fn eval(&self, field: &TotallyRealField, x: &FieldElement) -> Result<i64> {
        if !x.is_zero() {
            let den = arith::common_denominator(&x.0);
            for (p, _) in arith::factor(&den) {
                for q in primes_above(field, p)? {
                    if !self.factors.iter().any(|(r, _)| *r == q) && q.ord(field, x)? < 0 {
                        return Ok(0);
                    }
                }
            }
        }
        self.local_product(field, x)
    }

    /// Single support/period/table triple.
    pub fn build(&self, field: &TotallyRealField) -> Result<FiniteTestFunction> {
        let support = self.support_ideal(field)?;
        let period = self.period_ideal(field)?;
        FiniteTestFunction::from_rule(field, support, period, |r| self.local_product(field, r))
    }
}

/// Least m ≥ 1 with −1 ∉ 1 + 𝔭^m O_𝔭.
pub fn one_unit_level(field: &TotallyRealField, p: &PrimeIdeal) -> Result<u32> {
    let v = p.ord(field, &field.from_int(-2))?;
    Ok((v + 1) as u32)
}

/// The subgroup of 𝔽_q^× of order d.
pub fn subgroup_of_order(q: &PrimeIdeal, d: u64) -> Result<Vec<u64>> {
    if q.f != 1 {
        return Err(Error::invalid(format!("{} has residue degree {}", q.label, q.f)));
    }
    let p = q.p;
    if d == 0 || !(p - 1).is_multiple_of(d) {
        return Err(Error::invalid(format!("{d} does not divide {}", p - 1)));
    }
    let g = q.kappa.generator()[0];
    let h = arith::mod_pow(g, (p - 1) / d, p);
    let mut out = Vec::new();
    let mut x = 1u64;
    for _ in 0..d {
        out.push(x);
        x = (x as u128 * h as u128 % p as u128) as u64;
    }
    out.sort_unstable();
    Ok(out)
}

fn validate_subgroup(q: &PrimeIdeal, m: &[u64]) -> Result<()> {
    let p = q.p;
    if m.iter().any(|&x| x % p == 0) {
        return Err(Error::invalid("M must lie in 𝔽_q^×"));
    }
    let set: std::collections::BTreeSet<u64> = m.iter().map(|x| x % p).collect();
    if !set.contains(&1) || set.iter().any(|&a| set.iter().any(|&b| !set.contains(&(a * b % p)))) {
        return Err(Error::invalid("M is not a subgroup of 𝔽_q^×"));
    }
    Ok(())
}

/// h_x as a product function.
pub fn h_x(q: &PrimeIdeal, x: u64) -> Result<ProductTestFunction> {
    if x >= q.p {
        return Err(Error::invalid(format!("{x} is not a reduced element of 𝔽_{}", q.p)));
    }
    let m = if x == 0 { vec![] } else { vec![x] };
    Ok(ProductTestFunction::new().with(q, LocalFactor::HSum(m)))
}

pub fn make_h_x(field: &TotallyRealField, q: &PrimeIdeal, x: u64) -> Result<FiniteTestFunction> {
    h_x(q, x)?.build(field)
}

/// f_{R,M,W}: Σ_{x∈M}h_x at 𝔮, 1_{V_𝔭} on R, 1_{O_𝔭^×} on S_f∖(W∪R), 1_{𝔭O_𝔭} on W.
pub fn f_rmw(
    field: &TotallyRealField,
    q: &PrimeIdeal,
    m: &[u64],
    s_finite: &[PrimeIdeal],
    r: &[PrimeIdeal],
    w: &[PrimeIdeal],
) -> Result<ProductTestFunction> {
    validate_subgroup(q, m)?;
    if s_finite.contains(q) {
        return Err(Error::invalid(format!("{} lies in S", q.label)));
    }
    if let Some(p) = r.iter().find(|p| w.contains(p)) {
        return Err(Error::invalid(format!("{} lies in both R and W", p.label)));
    }
    if let Some(p) = r.iter().chain(w).find(|p| !s_finite.contains(p)) {
        return Err(Error::invalid(format!("{} is not a finite place of S", p.label)));
    }
    let mut out = ProductTestFunction::new().with(q, LocalFactor::HSum(m.to_vec()));
    for p in s_finite {
        let f = if r.contains(p) {
            LocalFactor::OneUnits(one_unit_level(field, p)?)
        } else if w.contains(p) {
            LocalFactor::Maximal
        } else {
            LocalFactor::Units
        };
        out = out.with(p, f);
    }
    Ok(out)
}

pub fn make_f_rmw(
    field: &TotallyRealField,
    q: &PrimeIdeal,
    m: &[u64],
    s_finite: &[PrimeIdeal],
    r: &[PrimeIdeal],
    w: &[PrimeIdeal],
) -> Result<FiniteTestFunction> {
    f_rmw(field, q, m, s_finite, r, w)?.build(field)
}

/// Integral representatives of (O/𝔭^m)^×.
pub fn unit_representatives(field: &TotallyRealField, p: &PrimeIdeal, m: u32) -> Result<Vec<FieldElement>> {
    let lattice = p.ideal_power(field, m as i64)?;
    let diag: Vec<u64> = (0..field.degree())
        .map(|i| lattice.basis[i][i].to_u64().ok_or_else(|| Error::Overflow("residue ring".into())))
        .collect::<Result<_>>()?;
    let total: u64 = diag.iter().product();
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rem = idx;
        let mut x = field.zero();
        for (i, d) in diag.iter().enumerate() {
            let digit = rem % d;
            rem /= d;
            let mut e = vec![Rat::from_integer(BigInt::from(0)); field.degree()];
            e[i] = Rat::one();
            x = field.add(&x, &FieldElement(e).scale(&Rat::from_integer(BigInt::from(digit))));
        }
        if !x.is_zero() && p.ord(field, &x)? == 0 {
            out.push(x);
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

    fn points(n: usize, seed: u64) -> Vec<FieldElement> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let d = [1, 1, 2, 3, 7][rng.gen_range(0..5)];
                FieldElement(vec![arith::ratio(rng.gen_range(-40..=40), d), arith::ratio(rng.gen_range(-40..=40), d)])
            })
            .collect()
    }

    fn setup() -> (TotallyRealField, PrimeIdeal, Vec<PrimeIdeal>) {
        let f = TotallyRealField::real_quadratic(2).unwrap();
        let q = parse_prime(&f, "7:3").unwrap();
        let s = vec![parse_prime(&f, "2").unwrap(), parse_prime(&f, "3").unwrap()];
        (f, q, s)
    }

    #[test]
    fn one_unit_levels() {
        let (f, _, s) = setup();
        assert_eq!(one_unit_level(&f, &s[0]).unwrap(), 3);
        assert_eq!(one_unit_level(&f, &s[1]).unwrap(), 1);
    }

    #[test]
    fn table_matches_product_evaluation() {
        let (f, q, s) = setup();
        let m = subgroup_of_order(&q, 3).unwrap();
        let prod = f_rmw(&f, &q, &m, &s, &s[..1], &s[1..]).unwrap();
        let table = prod.build(&f).unwrap();
        for x in points(200, 1) {
            assert_eq!(table.eval(&x), prod.eval(&f, &x).unwrap(), "{x}");
        }
    }

    #[test]
    fn m_is_a_single_residue() {
        let (f, q, s) = setup();
        let a = f_rmw(&f, &q, &[1], &[], &[], &[]).unwrap();
        let b = h_x(&q, 1).unwrap();
        for x in points(100, 2) {
            assert_eq!(a.eval(&f, &x).unwrap(), b.eval(&f, &x).unwrap());
        }
        assert!(f_rmw(&f, &q, &[1, 2], &s, &[], &[]).is_err());
        assert!(f_rmw(&f, &q, &[1], &s, &s[..1], &s[..1]).is_err());
    }

    #[test]
    fn w_change_relation() {
        let (f, q, s) = setup();
        let m = subgroup_of_order(&q, 6).unwrap();
        for (i, p) in s.iter().enumerate() {
            let w = vec![p.clone()];
            let r: Vec<PrimeIdeal> = s.iter().filter(|x| *x != p).take(i).cloned().collect();
            let big = f_rmw(&f, &q, &m, &s, &r, &w).unwrap();
            let small = f_rmw(&f, &q, &m, &s, &r, &[]).unwrap();
            let moved = big.act_local(p, &f.inv(&p.uniformizer).unwrap());
            for x in points(50, 3) {
                let lhs = moved.eval(&f, &x).unwrap() - big.eval(&f, &x).unwrap();
                assert_eq!(lhs, small.eval(&f, &x).unwrap(), "at {x}");
            }
        }
    }

    #[test]
    fn r_change_relation() {
        let (f, q, s) = setup();
        let m = subgroup_of_order(&q, 2).unwrap();
        for p in &s {
            let lvl = one_unit_level(&f, p).unwrap();
            let with_r = f_rmw(&f, &q, &m, &s, std::slice::from_ref(p), &[]).unwrap();
            let without = f_rmw(&f, &q, &m, &s, &[], &[]).unwrap();
            let reps = unit_representatives(&f, p, lvl).unwrap();
            for x in points(100, 4) {
                let mut total = 0;
                for u in &reps {
                    total += with_r.act_local(p, u).eval(&f, &x).unwrap();
                }
                assert_eq!(total, without.eval(&f, &x).unwrap(), "{} at {x}", p.label);
            }
        }
    }

    #[test]
    fn m_change_relation() {
        let (f, q, s) = setup();
        let m1 = subgroup_of_order(&q, 2).unwrap();
        let m2 = subgroup_of_order(&q, 6).unwrap();
        let small = f_rmw(&f, &q, &m1, &s, &[], &[]).unwrap();
        let big = f_rmw(&f, &q, &m2, &s, &[], &[]).unwrap();
        // coset representatives of M₂/M₁
        let mut reps: Vec<u64> = Vec::new();
        for &a in &m2 {
            if !reps.iter().any(|&r| m1.contains(&(a * arith::mod_inv(r, q.p) % q.p))) {
                reps.push(a);
            }
        }
        assert_eq!(reps.len(), 3);
        for x in points(100, 5) {
            let total: i64 = reps.iter().map(|&a| small.act_local(&q, &f.from_int(a as i64)).eval(&f, &x).unwrap()).sum();
            assert_eq!(total, big.eval(&f, &x).unwrap(), "at {x}");
        }
    }

    #[test]
    fn constructors_are_smooth_along_admissible_directions() {
        let (f, q, s) = setup();
        let m = subgroup_of_order(&q, 6).unwrap();
        let phi = make_f_rmw(&f, &q, &m, &s, &s[..1], &[]).unwrap();
        let h = make_h_x(&f, &q, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut tested = 0;
        while tested < 10 {
            let u = FieldElement::from_ints(&[rng.gen_range(-20..=20), rng.gen_range(-20..=20)]);
            if u.is_zero() || super::super::check_admissible(&f, &q, &u).is_err() {
                continue;
            }
            assert!(phi.check_u_smooth(&u).unwrap().pass, "along {u}");
            assert!(h.check_u_smooth(&u).unwrap().pass, "along {u}");
            tested += 1;
        }
    }
}
