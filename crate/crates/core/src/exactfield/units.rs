//! Fundamental units, S-units and (S,T)-unit bases of real quadratic fields.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::prime::{principal_generator, Place, PrimeIdeal};
use super::{FieldElement, TotallyRealField};
use crate::arith::{self, hnf, pivot_col, Rat};
use crate::error::{Error, Result};
use crate::interval::{self, Interval};

/// Orientation convention for the unit basis sign condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Convention {
    /// `(−1)^{#T} det(−log|u_i|_{v_j}) > 0`
    Classic,
    /// `−det(−log|u_i|_{v_j}) > 0`
    Hat,
}

#[derive(Clone, Debug)]
pub struct STUnitBasis {
    pub units: Vec<FieldElement>,
    /// v₀, …, v_r
    pub places: Vec<Place>,
    pub convention: Convention,
    /// Exponents of each unit on the generators (−1, η, π_𝔭 for 𝔭 ∈ S_f).
    pub exponents: Vec<Vec<BigInt>>,
}

/// Fundamental unit η > 1 at the embedding where √d > 0, from the continued
/// fraction of the larger root.
pub fn fundamental_unit(field: &TotallyRealField) -> Result<FieldElement> {
    field.require_quadratic("fundamental unit")?;
    let c = field.poly_ints();
    let (c0, c1) = (BigInt::from(c[0]), BigInt::from(c[1]));
    let d = &c1 * &c1 - BigInt::from(4) * &c0;
    let sd = arith::isqrt(&d);
    // x = (P + √D)/Q, starting at the larger root (−c₁ + √D)/2
    let (mut pp, mut qq) = (-c1.clone(), BigInt::from(2));
    let (mut p_prev, mut p_cur) = (BigInt::zero(), BigInt::one());
    let (mut q_prev, mut q_cur) = (BigInt::one(), BigInt::zero());
    for _ in 0..100_000 {
        let a = if qq.is_positive() {
            (&pp + &sd).div_floor(&qq)
        } else {
            -((&pp + &sd).div_floor(&(-&qq)) + BigInt::one())
        };
        let pn = &a * &p_cur + &p_prev;
        let qn = &a * &q_cur + &q_prev;
        p_prev = std::mem::replace(&mut p_cur, pn);
        q_prev = std::mem::replace(&mut q_cur, qn);
        // N(p − qθ) = p² + c₁pq + c₀q²
        let nrm = &p_cur * &p_cur + &c1 * &p_cur * &q_cur + &c0 * &q_cur * &q_cur;
        if nrm.abs().is_one() {
            let x = FieldElement(vec![Rat::from_integer(p_cur.clone()), Rat::from_integer(-q_cur.clone())]);
            return normalize_above_one(field, &x, field.plus_embedding());
        }
        pp = &a * &qq - &pp;
        qq = (&d - &pp * &pp) / &qq;
    }
    Err(Error::Internal("continued fraction did not reach a unit".into()))
}

/// Among ±x^{±1}, the element whose embedding j exceeds 1.
fn normalize_above_one(field: &TotallyRealField, x: &FieldElement, j: usize) -> Result<FieldElement> {
    let xi = field.inv(x)?;
    for c in [x.clone(), field.neg(x), xi.clone(), field.neg(&xi)] {
        if field.embedding_sign(&field.sub(&c, &field.one()), j)? > 0 {
            return Ok(c);
        }
    }
    Err(Error::invalid("element is a root of unity"))
}

/// Generator ε₊ of the totally positive units, above 1 where √d > 0.
pub fn totally_positive_fundamental_unit(field: &TotallyRealField) -> Result<FieldElement> {
    let eta = fundamental_unit(field)?;
    if field.norm(&eta) == -Rat::one() {
        Ok(field.mul(&eta, &eta))
    } else {
        Ok(eta)
    }
}

/// Generators −1, η, π_𝔭 (𝔭 ∈ S_f) of O_S^×, assuming class number one.
pub fn s_unit_generators(field: &TotallyRealField, s_finite: &[PrimeIdeal]) -> Result<Vec<FieldElement>> {
    let eta = fundamental_unit(field)?;
    let mut gens = vec![field.from_int(-1), eta.clone()];
    for p in s_finite {
        let g = principal_generator(field, &p.ideal, &eta)?
            .ok_or_else(|| Error::unsupported(format!("prime {} is not principal", p.label)))?;
        gens.push(g);
    }
    Ok(gens)
}

/// Discrete-log data of ∏_{𝔭∈T} κ_𝔭^×.
pub(crate) struct TLogs<'a> {
    primes: &'a [PrimeIdeal],
    tables: Vec<Vec<Option<u64>>>,
    pub moduli: Vec<u64>,
}

impl<'a> TLogs<'a> {
    pub fn new(primes: &'a [PrimeIdeal]) -> Result<Self> {
        let mut tables = Vec::new();
        let mut moduli = Vec::new();
        for p in primes {
            if p.norm() > 2_000_000 {
                return Err(Error::unsupported(format!("residue field of {} is too large", p.label)));
            }
            tables.push(p.kappa.log_table());
            moduli.push(p.norm() - 1);
        }
        Ok(TLogs { primes, tables, moduli })
    }

    pub fn log(&self, field: &TotallyRealField, x: &FieldElement) -> Result<Vec<u64>> {
        self.primes
            .iter()
            .zip(&self.tables)
            .map(|(p, t)| {
                let r = p.residue(field, x).ok_or_else(|| Error::invalid(format!("element is not integral at {}", p.label)))?;
                t[p.kappa.index(&r)].ok_or_else(|| Error::invalid(format!("element is not a unit at {}", p.label)))
            })
            .collect()
    }
}

/// −log|x|_v as a certified interval.
pub fn neg_log_abs(field: &TotallyRealField, x: &FieldElement, v: &Place, bits: u32) -> Result<Interval> {
    match v {
        Place::Real(j) => {
            let iv = field.embedding_interval(x, *j, bits)?.abs();
            Ok(-iv.ln().ok_or_else(|| Error::Internal("logarithm of a non-positive interval".into()))?)
        }
        Place::Finite(p) => {
            let k = p.ord(field, x)?;
            let ln = Interval::point(p.norm() as f64).ln().unwrap();
            Ok(ln.scale(k as f64))
        }
    }
}

/// det(−log|u_i|_{v_j})_{1≤i,j≤r} as a certified interval, refining until its sign is known.
pub fn log_determinant(field: &TotallyRealField, units: &[FieldElement], places: &[Place], bits: u32) -> Result<(Interval, i32)> {
    let r = units.len();
    if places.len() != r + 1 {
        return Err(Error::invalid("need #S − 1 units"));
    }
    let mut b = bits;
    loop {
        let m: Vec<Vec<Interval>> = units
            .iter()
            .map(|u| places[1..].iter().map(|v| neg_log_abs(field, u, v, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        let det = interval::det(&m);
        if let Some(s) = det.sign() {
            return Ok((det, s));
        }
        if b > 400 {
            return Err(Error::Internal("unit regulator determinant vanishes".into()));
        }
        b *= 2;
    }
}

fn required_sign(conv: Convention, t_len: usize) -> i32 {
    match conv {
        Convention::Classic if t_len % 2 == 1 => -1,
        Convention::Classic => 1,
        Convention::Hat => -1,
    }
}

/// Basis of O_{S,T}^× satisfying the sign condition of `convention`.
///
/// `places` lists S in the order v₀, …, v_r and must contain every real place.
pub fn st_unit_basis(field: &TotallyRealField, places: &[Place], t: &[PrimeIdeal], convention: Convention) -> Result<STUnitBasis> {
    field.require_quadratic("(S,T)-unit bases")?;
    let reals = places.iter().filter(|v| v.is_real()).count();
    if reals != field.degree() {
        return Err(Error::invalid("S must contain every real place"));
    }
    let s_finite: Vec<PrimeIdeal> = places
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
    let gens = s_unit_generators(field, &s_finite)?;
    let k = gens.len();
    let logs = TLogs::new(t)?;
    let a: Vec<Vec<u64>> = gens.iter().map(|g| logs.log(field, g)).collect::<Result<_>>()?;
    let nt = t.len();
    // rows (dlog(g_i) | e_i) and (m_𝔭 e_𝔭 | 0); kernel rows have pivots in the identity block
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (i, ai) in a.iter().enumerate() {
        let mut row: Vec<BigInt> = ai.iter().map(|&x| BigInt::from(x)).collect();
        row.extend((0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
        rows.push(row);
    }
    for (i, &m) in logs.moduli.iter().enumerate() {
        let mut row = vec![BigInt::zero(); nt + k];
        row[i] = BigInt::from(m);
        rows.push(row);
    }
    let h = hnf(&rows);
    let kernel: Vec<Vec<BigInt>> = h.iter().filter(|r| pivot_col(r).is_some_and(|c| c >= nt)).map(|r| r[nt..].to_vec()).collect();
    let in_kernel = |e: &[BigInt]| -> bool {
        (0..nt).all(|j| {
            let s: BigInt = e.iter().zip(&a).map(|(ei, ai)| ei * BigInt::from(ai[j])).sum();
            s.mod_floor(&BigInt::from(logs.moduli[j])).is_zero()
        })
    };
    let mut minus_one = vec![BigInt::zero(); k];
    minus_one[0] = BigInt::one();
    if in_kernel(&minus_one) {
        return Err(Error::Hypothesis {
            name: "torsion-free O_{S,T}^×".into(),
            detail: "−1 is congruent to 1 modulo every prime of T".into(),
        });
    }
    let projected: Vec<Vec<BigInt>> = kernel.iter().map(|e| e[1..].to_vec()).collect();
    let free = hnf(&projected);
    if free.len() != k - 1 {
        return Err(Error::Internal("(S,T)-unit rank defect".into()));
    }
    let mut exponents = Vec::new();
    for b in &free {
        let mut e = vec![BigInt::zero()];
        e.extend(b.iter().cloned());
        if !in_kernel(&e) {
            e[0] = BigInt::one();
        }
        debug_assert!(in_kernel(&e));
        exponents.push(e);
    }
    let mut units: Vec<FieldElement> = exponents.iter().map(|e| eval_product(field, &gens, e)).collect::<Result<_>>()?;
    let (_, s) = log_determinant(field, &units, places, 64)?;
    if s != required_sign(convention, t.len()) {
        units[0] = field.inv(&units[0])?;
        for x in exponents[0].iter_mut().skip(1) {
            *x = -x.clone();
        }
    }
    Ok(STUnitBasis { units, places: places.to_vec(), convention, exponents })
}

pub(crate) fn eval_product(field: &TotallyRealField, gens: &[FieldElement], e: &[BigInt]) -> Result<FieldElement> {
    let mut acc = field.one();
    for (g, x) in gens.iter().zip(e) {
        let k = x.to_i64().ok_or_else(|| Error::Overflow("unit exponent".into()))?;
        acc = field.mul(&acc, &field.pow(g, k)?);
    }
    Ok(acc)
}

impl STUnitBasis {
    /// Recomputes the sign condition at the given precision.
    pub fn check_sign(&self, field: &TotallyRealField, t_len: usize, bits: u32) -> Result<bool> {
        let (_, s) = log_determinant(field, &self.units, &self.places, bits)?;
        Ok(s == required_sign(self.convention, t_len))
    }

    pub fn rank(&self) -> usize {
        self.units.len()
    }
}

/// Is `u` ≡ 1 modulo every prime of T?
pub fn is_t_congruent(field: &TotallyRealField, u: &FieldElement, t: &[PrimeIdeal]) -> bool {
    let um1 = field.sub(u, &field.one());
    t.iter().all(|q| um1.is_zero() || q.ord(field, &um1).map(|k| k >= 1).unwrap_or(false))
}
