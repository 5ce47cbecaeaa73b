//! (S,T)-class numbers of real quadratic fields of class number one.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use super::prime::{primes_above, principal_generator, Place, PrimeIdeal};
use super::units::{fundamental_unit, s_unit_generators, TLogs};
use super::TotallyRealField;
use crate::arith::{self, hnf};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct STClassData {
    pub s: Vec<String>,
    pub t: Vec<String>,
    pub h_st: u64,
    pub gal_order: u64,
    pub n_st: i64,
}

/// Checks that every prime of norm below the Minkowski bound is principal.
pub fn class_number_is_one(field: &TotallyRealField) -> Result<bool> {
    let bound = field.minkowski_bound()?.floor() as u64;
    let eta = fundamental_unit(field)?;
    for p in 2..=bound {
        if !arith::is_prime_u64(p) {
            continue;
        }
        for q in primes_above(field, p)? {
            if q.norm() > bound {
                continue;
            }
            if principal_generator(field, &q.ideal, &eta)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// h_{S,T}, #Gal(H/F) and n_{S,T}.
///
/// With trivial class group, Cl_{S,T} is the cokernel of O_S^× → ∏_{𝔭∈T} κ_𝔭^×
/// and the S-split Hilbert class field is F itself.
pub fn st_class_data(field: &TotallyRealField, s: &[Place], t: &[PrimeIdeal]) -> Result<STClassData> {
    field.require_quadratic("(S,T)-class data")?;
    if !class_number_is_one(field)? {
        return Err(Error::unsupported("class data for fields of class number above one"));
    }
    if s.iter().filter(|v| v.is_real()).count() != field.degree() {
        return Err(Error::invalid("S must contain every real place"));
    }
    let s_finite: Vec<PrimeIdeal> = s
        .iter()
        .filter_map(|v| match v {
            Place::Finite(p) => Some(p.clone()),
            _ => None,
        })
        .collect();
    for q in t {
        if s_finite.contains(q) {
            return Err(Error::invalid(format!("{} lies in both S and T", q.label)));
        }
    }
    let h_st = if t.is_empty() {
        1
    } else {
        let gens = s_unit_generators(field, &s_finite)?;
        let logs = TLogs::new(t)?;
        let nt = t.len();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for g in &gens {
            rows.push(logs.log(field, g)?.into_iter().map(BigInt::from).collect());
        }
        for (i, &m) in logs.moduli.iter().enumerate() {
            let mut row = vec![BigInt::from(0); nt];
            row[i] = BigInt::from(m);
            rows.push(row);
        }
        let h = hnf(&rows);
        let idx = h.iter().enumerate().fold(BigInt::one(), |acc, (i, r)| acc * &r[i]);
        idx.to_u64().ok_or_else(|| Error::Overflow("class number".into()))?
    };
    let gal_order = 1u64;
    if h_st % gal_order != 0 {
        return Err(Error::Internal("n_{S,T} is not integral".into()));
    }
    Ok(STClassData {
        s: s.iter().map(Place::label).collect(),
        t: t.iter().map(|q| q.label.clone()).collect(),
        h_st,
        gal_order,
        n_st: -((h_st / gal_order) as i64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::finite::Fq;
    use crate::exactfield::prime::parse_prime;
    use std::collections::{HashSet, VecDeque};

    /// Size of ∏κ^× divided by the size of the subgroup generated by the S-units,
    /// found by closing the subgroup under multiplication.
    fn closure_oracle(field: &TotallyRealField, s_finite: &[PrimeIdeal], t: &[PrimeIdeal]) -> u64 {
        let gens = s_unit_generators(field, s_finite).unwrap();
        let imgs: Vec<Vec<Fq>> = gens.iter().map(|g| t.iter().map(|q| q.residue(field, g).unwrap()).collect()).collect();
        let one: Vec<Fq> = t.iter().map(|q| q.kappa.one()).collect();
        let mut seen = HashSet::new();
        let mut queue = VecDeque::from([one.clone()]);
        seen.insert(one);
        while let Some(x) = queue.pop_front() {
            for g in &imgs {
                let y: Vec<Fq> = x.iter().zip(g).zip(t).map(|((a, b), q)| q.kappa.mul(a, b)).collect();
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let total: u64 = t.iter().map(|q| q.norm() - 1).product();
        total / seen.len() as u64
    }

    #[test]
    fn root_five_class_data() {
        let f = TotallyRealField::real_quadratic(5).unwrap().with_place_order(&[1, 0]).unwrap();
        let t = vec![parse_prime(&f, "5").unwrap()];
        let c = st_class_data(&f, &[Place::Real(0), Place::Real(1)], &t).unwrap();
        assert_eq!((c.h_st, c.gal_order, c.n_st), (1, 1, -1));
    }

    #[test]
    fn matches_closure_enumeration() {
        let f = TotallyRealField::real_quadratic(2).unwrap();
        let cases: Vec<(Vec<&str>, Vec<&str>)> = vec![
            (vec![], vec!["7:3"]),
            (vec![], vec!["7:3", "7:4"]),
            (vec![], vec!["5"]),
            (vec!["7:3"], vec!["5"]),
            (vec![], vec!["3", "17:6"]),
        ];
        for (sf, tl) in cases {
            let sp: Vec<PrimeIdeal> = sf.iter().map(|l| parse_prime(&f, l).unwrap()).collect();
            let t: Vec<PrimeIdeal> = tl.iter().map(|l| parse_prime(&f, l).unwrap()).collect();
            let mut s = vec![Place::Real(0), Place::Real(1)];
            s.extend(sp.iter().cloned().map(Place::Finite));
            let c = st_class_data(&f, &s, &t).unwrap();
            assert_eq!(c.h_st, closure_oracle(&f, &sp, &t), "S_f = {sf:?}, T = {tl:?}");
            assert_eq!(c.n_st, -(c.h_st as i64));
        }
    }

    #[test]
    fn detects_class_number_one() {
        assert!(class_number_is_one(&TotallyRealField::real_quadratic(5).unwrap()).unwrap());
        assert!(class_number_is_one(&TotallyRealField::real_quadratic(2).unwrap()).unwrap());
        assert!(!class_number_is_one(&TotallyRealField::real_quadratic(10).unwrap()).unwrap());
    }
}
