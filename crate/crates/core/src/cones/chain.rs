use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{self, Rat};
use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, TotallyRealField};
use num_traits::Signed;

/// Integer combination of open-cone symbols [x₁,…,x_k]; generators are sorted within a term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeChain {
    terms: BTreeMap<Vec<FieldElement>, i64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainTerm {
    pub coeff: i64,
    pub generators: Vec<FieldElement>,
}

pub fn independent(vs: &[&FieldElement]) -> bool {
    let rows: Vec<Vec<Rat>> = vs.iter().map(|v| v.0.clone()).collect();
    !vs.is_empty() && arith::rank(&rows) == vs.len()
}

/// Is z = Σ a_i g_i with every a_i > 0?
pub fn cone_contains(gens: &[FieldElement], z: &FieldElement) -> Result<bool> {
    let refs: Vec<&FieldElement> = gens.iter().collect();
    if !independent(&refs) {
        return Err(Error::invalid("cone generators are linearly dependent"));
    }
    if z.is_zero() {
        return Ok(false);
    }
    let cols: Vec<Vec<Rat>> = gens.iter().map(|g| g.0.clone()).collect();
    Ok(match arith::solve_columns(&cols, &z.0) {
        Some(a) => a.iter().all(|c| c.is_positive()),
        None => false,
    })
}

impl ConeChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn symbol(gens: &[FieldElement]) -> Result<Self> {
        let mut c = Self::new();
        c.add_term(1, gens)?;
        Ok(c)
    }

    pub fn from_terms(terms: &[(i64, Vec<FieldElement>)]) -> Result<Self> {
        let mut c = Self::new();
        for (k, g) in terms {
            c.add_term(*k, g)?;
        }
        Ok(c)
    }

    pub fn add_term(&mut self, coeff: i64, gens: &[FieldElement]) -> Result<()> {
        let refs: Vec<&FieldElement> = gens.iter().collect();
        if !independent(&refs) {
            return Err(Error::invalid("cone generators are linearly dependent"));
        }
        let mut key = gens.to_vec();
        key.sort();
        self.bump(key, coeff);
        Ok(())
    }

    fn bump(&mut self, key: Vec<FieldElement>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<FieldElement>, i64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn to_terms(&self) -> Vec<ChainTerm> {
        self.terms().map(|(g, c)| ChainTerm { coeff: c, generators: g.clone() }).collect()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ConeChain) -> ConeChain {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.bump(k.clone(), *v);
        }
        out
    }

    pub fn scale(&self, k: i64) -> ConeChain {
        let mut out = ConeChain::new();
        for (g, v) in &self.terms {
            out.bump(g.clone(), v * k);
        }
        out
    }

    pub fn neg(&self) -> ConeChain {
        self.scale(-1)
    }

    pub fn sub(&self, other: &ConeChain) -> ConeChain {
        self.add(&other.neg())
    }

    /// Multiplies every generator by u.
    pub fn act(&self, field: &TotallyRealField, u: &FieldElement) -> ConeChain {
        let mut out = ConeChain::new();
        for (g, v) in &self.terms {
            let mut key: Vec<FieldElement> = g.iter().map(|x| field.mul(u, x)).collect();
            key.sort();
            out.bump(key, *v);
        }
        out
    }

    /// Value of the indicator combination at z.
    pub fn eval(&self, z: &FieldElement) -> i64 {
        self.terms
            .iter()
            .filter(|(g, _)| cone_contains(g, z).unwrap_or(false))
            .map(|(_, v)| *v)
            .sum()
    }

    /// Part with terms of exactly k generators.
    pub fn graded(&self, k: usize) -> ConeChain {
        ConeChain { terms: self.terms.iter().filter(|(g, _)| g.len() == k).map(|(g, v)| (g.clone(), *v)).collect() }
    }
}

impl fmt::Display for ConeChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (g, v) in &self.terms {
            let body = g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
            let sign = if *v < 0 { "-" } else if first { "" } else { "+" };
            let mag = v.abs();
            if !first {
                f.write_str(" ")?;
            }
            if mag == 1 {
                write!(f, "{sign}[{body}]")?;
            } else {
                write!(f, "{sign}{mag}[{body}]")?;
            }
            first = false;
        }
        Ok(())
    }
}

/// Integer combination of ordered tuples (x₁,…,x_m) in general position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TupleChain {
    terms: BTreeMap<Vec<FieldElement>, i64>,
}

/// Every subset of at most `n` entries is linearly independent.
pub fn in_general_position(xs: &[&FieldElement], n: usize) -> bool {
    let m = xs.len();
    let k = m.min(n);
    if m > 20 {
        return false;
    }
    (0u32..1 << m).filter(|s| s.count_ones() as usize == k).all(|s| {
        let sub: Vec<&FieldElement> = (0..m).filter(|i| s >> i & 1 == 1).map(|i| xs[i]).collect();
        k == 0 || independent(&sub)
    })
}

impl TupleChain {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn tuple(field: &TotallyRealField, xs: &[FieldElement]) -> Result<Self> {
        let mut c = Self::new();
        c.add_term(field, 1, xs)?;
        Ok(c)
    }

    pub fn add_term(&mut self, field: &TotallyRealField, coeff: i64, xs: &[FieldElement]) -> Result<()> {
        let refs: Vec<&FieldElement> = xs.iter().collect();
        if !in_general_position(&refs, field.degree()) {
            return Err(Error::Degenerate("tuple is not in general position".into()));
        }
        self.bump(xs.to_vec(), coeff);
        Ok(())
    }

    fn bump(&mut self, key: Vec<FieldElement>, coeff: i64) {
        if coeff == 0 {
            return;
        }
        let e = self.terms.entry(key.clone()).or_insert(0);
        *e += coeff;
        if *e == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<FieldElement>, i64)> {
        self.terms.iter().map(|(k, v)| (k, *v))
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &TupleChain) -> TupleChain {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.bump(k.clone(), *v);
        }
        out
    }

    pub fn scale(&self, k: i64) -> TupleChain {
        let mut out = TupleChain::new();
        for (g, v) in &self.terms {
            out.bump(g.clone(), v * k);
        }
        out
    }

    /// ∂(x₁,…,x_m) = Σ_j (−1)^{j−1}(x₁,…,x̂_j,…,x_m).
    pub fn boundary(&self) -> TupleChain {
        let mut out = TupleChain::new();
        for (t, v) in &self.terms {
            if t.is_empty() {
                continue;
            }
            for j in 0..t.len() {
                let mut s = t.clone();
                s.remove(j);
                let sign = if j % 2 == 0 { 1 } else { -1 };
                out.bump(s, sign * v);
            }
        }
        out
    }

    /// (w, x₁,…,x_m) termwise.
    pub fn cone_on(&self, field: &TotallyRealField, w: &FieldElement) -> Result<TupleChain> {
        let mut out = TupleChain::new();
        for (t, v) in &self.terms {
            let mut s = vec![w.clone()];
            s.extend(t.iter().cloned());
            out.add_term(field, *v, &s)?;
        }
        Ok(out)
    }

    /// Multiplies every entry by u.
    pub fn act(&self, field: &TotallyRealField, u: &FieldElement) -> TupleChain {
        let mut out = TupleChain::new();
        for (t, v) in &self.terms {
            out.bump(t.iter().map(|x| field.mul(u, x)).collect(), *v);
        }
        out
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(a: i64, b: i64) -> FieldElement {
        FieldElement::from_ints(&[a, b])
    }

    #[test]
    fn open_cone_membership() {
        let (x1, x2) = (v(1, 0), v(0, 1));
        assert!(cone_contains(std::slice::from_ref(&x1), &v(3, 0)).unwrap());
        assert!(cone_contains(&[x1.clone(), x2.clone()], &v(2, 1)).unwrap());
        assert!(!cone_contains(&[x1.clone(), x2.clone()], &v(2, 0)).unwrap());
        assert!(!cone_contains(std::slice::from_ref(&x1), &v(0, 0)).unwrap());
        assert!(cone_contains(&[x1.clone(), v(2, 0)], &v(1, 0)).is_err());
    }

    #[test]
    fn chain_cancellation_and_order() {
        let x1 = v(1, 0);
        let c = ConeChain::symbol(std::slice::from_ref(&x1)).unwrap().sub(&ConeChain::symbol(std::slice::from_ref(&x1)).unwrap());
        assert!(c.is_empty());
        assert_eq!(c.eval(&v(5, 0)), 0);
        let a = ConeChain::symbol(&[v(1, 0), v(0, 1)]).unwrap();
        let b = ConeChain::symbol(&[v(0, 1), v(1, 0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(ConeChain::symbol(&[x1]).unwrap().eval(&v(3, 0)), 1);
    }

    #[test]
    fn boundary_squares_to_zero() {
        let f = TotallyRealField::real_quadratic(5).unwrap();
        let t = TupleChain::tuple(&f, &[v(1, 0), v(0, 1), v(1, 1)]).unwrap();
        assert!(t.boundary().boundary().is_empty());
        assert!(TupleChain::tuple(&f, &[v(1, 0), v(2, 0)]).is_err());
    }
}
