use rand::Rng;
use serde::Serialize;

use super::{phi_q, random_element, ConeChain, IrrationalDirection};
use crate::arith::rat;
use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, PrimeIdeal, TotallyRealField};

#[derive(Clone, Debug, Serialize)]
pub struct SignedFundDomain {
    #[serde(skip)]
    pub chain: ConeChain,
    pub units: Vec<FieldElement>,
    pub signs: Vec<i32>,
    /// Points z of the fiber with Σ_ε 𝓛(D)(εz).
    pub witnesses: Vec<(FieldElement, i64)>,
}

/// Small element whose embedding signs are `g`.
pub fn fiber_representative(field: &TotallyRealField, g: &[i32]) -> Result<FieldElement> {
    fiber_representative_avoiding(field, g, &[], 0)
}

/// The `skip`-th small element with signs `g` lying outside every prime in `avoid`.
pub fn fiber_representative_avoiding(field: &TotallyRealField, g: &[i32], avoid: &[PrimeIdeal], skip: usize) -> Result<FieldElement> {
    let n = field.degree();
    if g.len() != n || g.iter().any(|&s| s != 1 && s != -1) {
        return Err(Error::invalid("sign vector must have one entry ±1 per embedding"));
    }
    let mut seen = 0;
    for h in 1..50i64 {
        let mut idx = vec![-h; n];
        loop {
            if idx.iter().any(|x| x.abs() == h) {
                let x = FieldElement(idx.iter().map(|&c| rat(c)).collect());
                if !x.is_zero() && field.embedding_signs(&x)? == g && avoid.iter().all(|p| !p.contains(&x)) {
                    if seen == skip {
                        return Ok(x);
                    }
                    seen += 1;
                }
            }
            let mut k = 0;
            while k < n && idx[k] == h {
                idx[k] = -h;
                k += 1;
            }
            if k == n {
                break;
            }
            idx[k] += 1;
        }
    }
    Err(Error::Internal("no small element with the requested signs".into()))
}

fn log_ratio(field: &TotallyRealField, y: &FieldElement) -> f64 {
    field.embedding_f64(y, 0).abs().ln() - field.embedding_f64(y, 1).abs().ln()
}

/// Σ_{k∈ℤ} 𝓛(D)(ε^k z), summed over the finite window where translates can meet D.
pub fn tiling_sum(field: &TotallyRealField, d: &ConeChain, units: &[FieldElement], z: &FieldElement) -> Result<i64> {
    match field.degree() {
        1 => Ok(d.eval(z)),
        2 => {
            let eps = units.first().ok_or_else(|| Error::invalid("need one unit"))?;
            let le = log_ratio(field, eps);
            if le.abs() < 1e-9 {
                return Err(Error::invalid("unit has finite order"));
            }
            let gens: Vec<&FieldElement> = d.terms().flat_map(|(g, _)| g.iter()).collect();
            if gens.is_empty() {
                return Ok(0);
            }
            let signs0 = field.embedding_signs(gens[0])?;
            for g in &gens {
                if field.embedding_signs(g)? != signs0 {
                    return Err(Error::invalid("chain is not contained in one sign component"));
                }
            }
            let ls: Vec<f64> = gens.iter().map(|g| log_ratio(field, g)).collect();
            let lo = ls.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ls.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lz = log_ratio(field, z);
            let (a, b) = ((lo - lz) / le, (hi - lz) / le);
            let kmin = a.min(b).floor() as i64 - 1;
            let kmax = a.max(b).ceil() as i64 + 1;
            let mut total = 0;
            let mut y = field.mul(z, &field.pow(eps, kmin)?);
            for _ in kmin..=kmax {
                total += d.eval(&y);
                y = field.mul(&y, eps);
            }
            Ok(total)
        }
        _ => Err(Error::unsupported("fundamental domains beyond degree 2")),
    }
}

fn check_units(field: &TotallyRealField, units: &[FieldElement]) -> Result<()> {
    if units.len() + 1 != field.degree() {
        return Err(Error::invalid(format!("need {} units", field.degree().saturating_sub(1))));
    }
    for u in units {
        if !field.is_totally_positive(u)? {
            return Err(Error::invalid("units must be totally positive"));
        }
    }
    Ok(())
}

fn random_in_fiber<R: Rng>(field: &TotallyRealField, g: &[i32], rng: &mut R) -> Result<FieldElement> {
    for _ in 0..10_000 {
        let z = random_element(field.degree(), 12, rng);
        if !z.is_zero() && field.embedding_signs(&z)? == g {
            return Ok(z);
        }
    }
    Err(Error::Internal("could not sample the sign component".into()))
}

/// Signed fundamental domain D for the totally positive unit group generated by `units`
/// acting on the sign component g, normalized so that Σ_ε 𝓛(D)(εz) = sgn(g) there.
pub fn signed_fundamental_domain<R: Rng>(
    field: &TotallyRealField,
    units: &[FieldElement],
    g: &[i32],
    witnesses: usize,
    rng: &mut R,
) -> Result<SignedFundDomain> {
    check_units(field, units)?;
    let x = fiber_representative(field, g)?;
    signed_fundamental_domain_at(field, units, &x, witnesses, rng)
}

/// As [`signed_fundamental_domain`], with the base point x of the fiber given.
pub fn signed_fundamental_domain_at<R: Rng>(
    field: &TotallyRealField,
    units: &[FieldElement],
    x: &FieldElement,
    witnesses: usize,
    rng: &mut R,
) -> Result<SignedFundDomain> {
    let q = IrrationalDirection::embedding_axis(field.degree(), field.plus_embedding(), -1);
    signed_fundamental_domain_with(field, units, x, &q, witnesses, rng)
}

/// As [`signed_fundamental_domain_at`] with the irrational direction Q given (degree 2).
pub fn signed_fundamental_domain_with<R: Rng>(
    field: &TotallyRealField,
    units: &[FieldElement],
    x: &FieldElement,
    q: &IrrationalDirection,
    witnesses: usize,
    rng: &mut R,
) -> Result<SignedFundDomain> {
    let n = field.degree();
    if x.is_zero() {
        return Err(Error::invalid("base point must be nonzero"));
    }
    let g = field.embedding_signs(x)?;
    let g = g.as_slice();
    check_units(field, units)?;
    let sgn_g: i64 = g.iter().map(|&s| s as i64).product();
    let chain = match n {
        1 => phi_q(field, std::slice::from_ref(x), &IrrationalDirection::coordinates(vec![rat(1)]))?,
        2 => {
            let mut eps = units[0].clone();
            let jp = field.plus_embedding();
            if field.embedding_sign(&field.sub(&eps, &field.one()), jp)? < 0 {
                eps = field.inv(&eps)?;
            }
            if eps == field.one() {
                return Err(Error::invalid("unit has finite order"));
            }
            phi_q(field, &[x.clone(), field.mul(x, &eps)], q)?
        }
        _ => return Err(Error::unsupported("fundamental domains beyond degree 2")),
    };
    let t0 = tiling_sum(field, &chain, units, x)?;
    let chain = if t0 == sgn_g {
        chain
    } else if t0 == -sgn_g {
        chain.neg()
    } else {
        return Err(Error::Internal(format!("tiling sum {t0} at the base point is not ±1")));
    };
    let mut wit = vec![(x.clone(), sgn_g)];
    for _ in 0..witnesses {
        let z = random_in_fiber(field, g, rng)?;
        let t = tiling_sum(field, &chain, units, &z)?;
        if t != sgn_g {
            return Err(Error::Internal(format!("tiling identity fails at {z}: {t}")));
        }
        wit.push((z, t));
    }
    Ok(SignedFundDomain { chain, units: units.to_vec(), signs: g.to_vec(), witnesses: wit })
}
