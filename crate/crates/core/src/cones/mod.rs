//! Signed open-cone calculus: chains, subdivision maps and signed fundamental domains.

mod chain;
mod direction;
mod domain;

pub use chain::{cone_contains, in_general_position, independent, ChainTerm, ConeChain, TupleChain};
pub use direction::{DirectionSpace, IrrationalDirection};
pub use domain::{
    fiber_representative, fiber_representative_avoiding, signed_fundamental_domain, signed_fundamental_domain_at, signed_fundamental_domain_with, tiling_sum, SignedFundDomain,
};

use rand::Rng;

use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, TotallyRealField};

/// sgn det(ρ_i(x_j)).
pub fn orientation(field: &TotallyRealField, xs: &[&FieldElement]) -> i32 {
    field.orientation(xs)
}

fn without(xs: &[FieldElement], j: usize) -> Vec<&FieldElement> {
    xs.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, x)| x).collect()
}

/// s_j = (−1)^{j−1} r(x₁,…,x̂_j,…,x_{n+1}), 1-based j.
fn alternating_signs(field: &TotallyRealField, xs: &[FieldElement]) -> Vec<i32> {
    (0..xs.len())
        .map(|j| {
            let s = orientation(field, &without(xs, j));
            if j % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect()
}

/// Subsets I of {0..m} with 1 ≤ |I| ≤ kmax containing `required`, as sorted index lists.
fn supersets(m: usize, required: u32, kmax: usize) -> Vec<Vec<usize>> {
    (1u32..1 << m)
        .filter(|s| s & required == required && (s.count_ones() as usize) <= kmax)
        .map(|s| (0..m).filter(|i| s >> i & 1 == 1).collect())
        .collect()
}

fn pick(xs: &[FieldElement], idx: &[usize]) -> Vec<FieldElement> {
    idx.iter().map(|&i| xs[i].clone()).collect()
}

/// ψ(x₁,…,x_{n+1}) = Σ_u Σ_I u·[x_I] over I with s_j = u for every j ∉ I.
pub fn psi(field: &TotallyRealField, xs: &[FieldElement]) -> Result<ConeChain> {
    let n = field.degree();
    if xs.len() != n + 1 {
        return Err(Error::invalid(format!("ψ needs {} vectors", n + 1)));
    }
    let refs: Vec<&FieldElement> = xs.iter().collect();
    if !in_general_position(&refs, n) {
        return Err(Error::Degenerate("tuple is not in general position".into()));
    }
    let s = alternating_signs(field, xs);
    let mut out = ConeChain::new();
    for u in [1, -1] {
        let not_u: u32 = (0..xs.len()).filter(|&j| s[j] != u).fold(0, |acc, j| acc | 1 << j);
        for idx in supersets(xs.len(), not_u, n) {
            out.add_term(u as i64, &pick(xs, &idx))?;
        }
    }
    Ok(out)
}

pub fn psi_chain(field: &TotallyRealField, a: &TupleChain) -> Result<ConeChain> {
    let mut out = ConeChain::new();
    for (t, c) in a.terms() {
        out = out.add(&psi(field, t)?.scale(c));
    }
    Ok(out)
}

/// φ^Q(x₁,…,x_n) = r·Σ_I [x_I] over I containing every j with r_{x_j→Q}/r < 0.
pub fn phi_q(field: &TotallyRealField, xs: &[FieldElement], q: &IrrationalDirection) -> Result<ConeChain> {
    let n = field.degree();
    if xs.len() != n {
        return Err(Error::invalid(format!("φ^Q needs {n} vectors")));
    }
    let refs: Vec<&FieldElement> = xs.iter().collect();
    let r = orientation(field, &refs);
    if r == 0 {
        return Err(Error::Degenerate("tuple is linearly dependent".into()));
    }
    let mut required = 0u32;
    for j in 0..n {
        if q.orientation_with(field, &refs, j)? != r {
            required |= 1 << j;
        }
    }
    let mut out = ConeChain::new();
    for idx in supersets(n, required, n) {
        out.add_term(r as i64, &pick(xs, &idx))?;
    }
    Ok(out)
}

pub fn phi_q_chain(field: &TotallyRealField, a: &TupleChain, q: &IrrationalDirection) -> Result<ConeChain> {
    let mut out = ConeChain::new();
    for (t, c) in a.terms() {
        out = out.add(&phi_q(field, t, q)?.scale(c));
    }
    Ok(out)
}

/// Σ_j (−1)^{j−1} r(…x̂_j…)·1_{C(…x̂_j…)}(y).
pub fn hill_value(field: &TotallyRealField, xs: &[FieldElement], y: &FieldElement) -> Result<i64> {
    let n = field.degree();
    if xs.len() != n + 1 {
        return Err(Error::invalid(format!("Hill's identity needs {} vectors", n + 1)));
    }
    let mut all: Vec<&FieldElement> = xs.iter().collect();
    all.push(y);
    if !in_general_position(&all, n) {
        return Err(Error::Degenerate("vectors are not in general position".into()));
    }
    let s = alternating_signs(field, xs);
    let mut total = 0;
    for j in 0..xs.len() {
        let gens: Vec<FieldElement> = without(xs, j).into_iter().cloned().collect();
        if cone_contains(&gens, y)? {
            total += s[j] as i64;
        }
    }
    Ok(total)
}

/// Closed-form value of Hill's identity.
pub fn hill_case(field: &TotallyRealField, xs: &[FieldElement]) -> i64 {
    let s = alternating_signs(field, xs);
    if s.iter().all(|&x| x == 1) {
        1
    } else if s.iter().all(|&x| x == -1) {
        -1
    } else {
        0
    }
}

/// Random element with coordinates in [−h, h].
pub fn random_element<R: Rng>(n: usize, h: i64, rng: &mut R) -> FieldElement {
    FieldElement((0..n).map(|_| crate::arith::rat(rng.gen_range(-h..=h))).collect())
}

/// φ(a) = ψ(b) for a filling b of the cycle a, built by coning on a generic w.
pub fn fill_and_phi<R: Rng>(field: &TotallyRealField, cycle: &TupleChain, rng: &mut R) -> Result<ConeChain> {
    let n = field.degree();
    if cycle.is_empty() {
        return Ok(ConeChain::new());
    }
    if cycle.terms().any(|(t, _)| t.len() != n) {
        return Err(Error::invalid(format!("cycle must consist of {n}-tuples")));
    }
    if !cycle.boundary().is_empty() {
        return Err(Error::invalid("chain is not a cycle"));
    }
    for attempt in 0..1000 {
        let w = random_element(n, 3 + attempt / 50, rng);
        let ok = cycle.terms().all(|(t, _)| {
            let mut all: Vec<&FieldElement> = vec![&w];
            all.extend(t.iter());
            in_general_position(&all, n)
        });
        if ok {
            let b = cycle.cone_on(field, &w)?;
            return psi_chain(field, &b);
        }
    }
    Err(Error::Degenerate("no generic auxiliary vector found".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn v(a: i64, b: i64) -> FieldElement {
        FieldElement::from_ints(&[a, b])
    }

    fn q5() -> TotallyRealField {
        TotallyRealField::real_quadratic(5).unwrap().with_place_order(&[1, 0]).unwrap()
    }

    /// Coordinate-space field where the power basis is the embedding frame up to sign.
    fn plain() -> TotallyRealField {
        TotallyRealField::real_quadratic(2).unwrap()
    }

    #[test]
    fn psi_of_quadrant_subdivision() {
        let f = plain();
        let (x1, x2, x3) = (v(1, 0), v(0, 1), v(1, 1));
        let c = psi(&f, &[x1.clone(), x2.clone(), x3.clone()]).unwrap();
        let r = f.omega_sign() as i64;
        let expect = ConeChain::from_terms(&[
            (r, vec![x1.clone(), x2.clone()]),
            (-r, vec![x2.clone(), x3.clone()]),
            (-r, vec![x1.clone(), x3.clone()]),
            (-r, vec![x3.clone()]),
        ])
        .unwrap();
        assert_eq!(c, expect);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let z = random_element(2, 6, &mut rng);
            if !z.is_zero() {
                assert_eq!(c.eval(&z), 0);
            }
        }
    }

    #[test]
    fn psi_on_a_line_cancels() {
        let f = TotallyRealField::new(&[-2, 0, 1]).unwrap();
        let n1 = TotallyRealField::new(&[-3, 1]).unwrap();
        let c = psi(&n1, &[FieldElement(vec![rat(1)]), FieldElement(vec![rat(2)])]).unwrap();
        let expect = ConeChain::from_terms(&[(1, vec![FieldElement(vec![rat(2)])]), (-1, vec![FieldElement(vec![rat(1)])])]).unwrap();
        assert_eq!(c, expect);
        assert!(psi(&f, &[v(1, 0), v(2, 0), v(0, 1)]).is_err());
    }

    #[test]
    fn phi_q_standard_quadrant() {
        let f = plain();
        // Q ≈ (1, δ) in coordinates; orientation sign of the frame is ω
        let q = IrrationalDirection::coordinates(vec![rat(1), rat(0)]).with_perturbations(vec![vec![rat(0), rat(1)]]);
        let c = phi_q(&f, &[v(1, 0), v(0, 1)], &q).unwrap();
        let r = f.omega_sign() as i64;
        let expect = ConeChain::from_terms(&[(r, vec![v(1, 0)]), (r, vec![v(0, 1)]), (r, vec![v(1, 0), v(0, 1)])]).unwrap();
        assert_eq!(c, expect);
    }

    #[test]
    fn phi_q_golden_ratio_axis() {
        let f = q5();
        let e2 = v(1, 1);
        let q = IrrationalDirection::embedding_axis(2, 0, -1);
        let c = phi_q(&f, &[f.one(), e2.clone()], &q).unwrap();
        let expect = ConeChain::from_terms(&[(-1, vec![f.one()]), (-1, vec![f.one(), e2.clone()])]).unwrap();
        assert_eq!(c, expect);
        let q2 = IrrationalDirection::embedding_axis(2, 1, -1);
        let c2 = phi_q(&f, &[f.one(), e2.clone()], &q2).unwrap();
        let expect2 = ConeChain::from_terms(&[(-1, vec![e2.clone()]), (-1, vec![f.one(), e2])]).unwrap();
        assert_eq!(c2, expect2);
    }

    #[test]
    fn hill_examples() {
        let f = plain();
        assert_eq!(hill_value(&f, &[v(1, 0), v(0, 1), v(1, 1)], &v(2, 1)).unwrap(), 0);
        let n1 = TotallyRealField::new(&[-3, 1]).unwrap();
        let one = |k: i64| FieldElement(vec![rat(k)]);
        assert_eq!(hill_value(&n1, &[one(1), one(2)], &one(1)).unwrap(), 0);
        assert_eq!(hill_value(&n1, &[one(1), one(-2)], &one(1)).unwrap(), -1);
    }

    #[test]
    fn filling_is_independent_of_w() {
        let f = q5();
        let t = TupleChain::tuple(&f, &[v(1, 0), v(0, 1), v(1, 1)]).unwrap();
        let cycle = t.boundary();
        let mut r1 = ChaCha8Rng::seed_from_u64(7);
        let mut r2 = ChaCha8Rng::seed_from_u64(8);
        let a = fill_and_phi(&f, &cycle, &mut r1).unwrap();
        let b = fill_and_phi(&f, &cycle, &mut r2).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, psi(&f, &[v(1, 0), v(0, 1), v(1, 1)]).unwrap());
        assert!(fill_and_phi(&f, &TupleChain::new(), &mut r1).unwrap().is_empty());
    }
}
