//! Randomized invariant checks shared by the `suite` command and the acceptance tests.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adelic::{check_admissible, make_f_rmw, make_h_x, subgroup_of_order};
use crate::cones::{
    fill_and_phi, hill_case, hill_value, in_general_position, independent, phi_q_chain, psi, random_element, signed_fundamental_domain, tiling_sum,
    ConeChain, IrrationalDirection, TupleChain,
};
use crate::error::{Error, Result};
use crate::exactfield::prime::parse_prime;
use crate::exactfield::{totally_positive_fundamental_unit, FieldElement, PrimeIdeal, TotallyRealField};
use crate::solomon_hu::{integrality_report, pairing, pairing_with, DeltaChoice, PairingInput};
use crate::theta_reg::{default_instance, verify_congruence, verify_hat, HatOptions, HatSpec, ThetaOptions};

#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub trials: usize,
    pub failures: Vec<String>,
}

impl CheckOutcome {
    fn new(name: impl Into<String>) -> Self {
        CheckOutcome { name: name.into(), trials: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.trials > 0
    }

    fn record(&mut self, ok: Result<bool>, what: impl FnOnce() -> String) {
        self.trials += 1;
        match ok {
            Ok(true) => {}
            Ok(false) => self.failures.push(what()),
            Err(e) => self.failures.push(format!("{}: {e}", what())),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SuiteSize {
    Small,
    Full,
}

pub fn q_sqrt5() -> TotallyRealField {
    TotallyRealField::real_quadratic(5).expect("ℚ(√5)").with_place_order(&[1, 0]).expect("place order")
}

pub fn q_sqrt2() -> TotallyRealField {
    TotallyRealField::real_quadratic(2).expect("ℚ(√2)")
}

/// x³ − x² − 2x + 1, the cubic subfield of ℚ(ζ₇).
pub fn cubic_field() -> TotallyRealField {
    TotallyRealField::new(&[1, -2, -1, 1]).expect("cubic field")
}

fn random_totally_positive<R: Rng>(field: &TotallyRealField, h: i64, rng: &mut R) -> Result<FieldElement> {
    for _ in 0..10_000 {
        let z = random_element(field.degree(), h, rng);
        if !z.is_zero() && field.is_totally_positive(&z)? {
            return Ok(z);
        }
    }
    Err(Error::Internal("no totally positive sample".into()))
}

fn random_rational_point<R: Rng>(field: &TotallyRealField, rng: &mut R) -> Result<FieldElement> {
    for _ in 0..10_000 {
        let den = rng.gen_range(1..=9i64);
        let z = FieldElement((0..field.degree()).map(|_| crate::arith::ratio(rng.gen_range(-40..=40), den)).collect());
        if !z.is_zero() && field.is_totally_positive(&z)? {
            return Ok(z);
        }
    }
    Err(Error::Internal("no totally positive sample".into()))
}

/// Σ_ε 𝓛(D)(εz) = 1 at random totally positive rational z for the signed domain of ⟨ε₊⟩.
pub fn tiling<R: Rng>(name: &str, field: &TotallyRealField, points: usize, rng: &mut R) -> CheckOutcome {
    let mut out = CheckOutcome::new(format!("tiling {name}"));
    let dom = totally_positive_fundamental_unit(field).and_then(|e| {
        let d = signed_fundamental_domain(field, std::slice::from_ref(&e), &[1, 1], 10, rng)?;
        Ok((e, d.chain))
    });
    let (eps, chain) = match dom {
        Ok(x) => x,
        Err(e) => {
            out.record(Err(e), || "domain construction".into());
            return out;
        }
    };
    for _ in 0..points {
        let z = match random_rational_point(field, rng) {
            Ok(z) => z,
            Err(e) => {
                out.record(Err(e), || "sampling".into());
                continue;
            }
        };
        out.record(tiling_sum(field, &chain, std::slice::from_ref(&eps), &z).map(|s| s == 1), || format!("z = {z}"));
    }
    out
}

fn general_tuple<R: Rng>(field: &TotallyRealField, k: usize, extra: &[&FieldElement], rng: &mut R) -> Vec<FieldElement> {
    let n = field.degree();
    loop {
        let xs: Vec<FieldElement> = (0..k).map(|_| random_element(n, 5, rng)).collect();
        let mut all: Vec<&FieldElement> = xs.iter().collect();
        all.extend_from_slice(extra);
        if all.iter().all(|x| !x.is_zero()) && in_general_position(&all, n) {
            return xs;
        }
    }
}

/// Hill's identity: the alternating sum of cone indicators equals its closed form.
pub fn hill_identity<R: Rng>(instances: usize, rng: &mut R) -> CheckOutcome {
    let mut out = CheckOutcome::new("Hill identity");
    let fields = [q_sqrt5(), q_sqrt2(), cubic_field()];
    for i in 0..instances {
        let f = &fields[i % fields.len()];
        let n = f.degree();
        let xs = general_tuple(f, n + 1, &[], rng);
        let y = loop {
            let y = random_element(n, 7, rng);
            let mut all: Vec<&FieldElement> = xs.iter().collect();
            all.push(&y);
            if !y.is_zero() && in_general_position(&all, n) {
                break y;
            }
        };
        out.record(hill_value(f, &xs, &y).map(|v| v == hill_case(f, &xs)), || format!("xs = {xs:?}, y = {y}"));
    }
    out
}

/// 𝓛(ψ(x)) is the constant given by Hill's identity off the walls.
pub fn psi_kernel<R: Rng>(instances: usize, rng: &mut R) -> CheckOutcome {
    let mut out = CheckOutcome::new("psi kernel constancy");
    let fields = [q_sqrt5(), q_sqrt2(), cubic_field()];
    for i in 0..instances {
        let f = &fields[i % fields.len()];
        let n = f.degree();
        let xs = general_tuple(f, n + 1, &[], rng);
        let res = psi(f, &xs).map(|c| {
            let want = hill_case(f, &xs);
            (0..20).all(|_| {
                let z = random_element(n, 9, rng);
                let mut all: Vec<&FieldElement> = xs.iter().collect();
                all.push(&z);
                z.is_zero() || !in_general_position(&all, n) || c.eval(&z) == want
            })
        });
        out.record(res, || format!("xs = {xs:?}"));
    }
    out
}

/// ψ(x₁,…,x_{n+1}) = φ^Q(∂(x₁,…,x_{n+1})) as chains.
pub fn psi_is_phi_of_boundary<R: Rng>(instances: usize, rng: &mut R) -> CheckOutcome {
    let mut out = CheckOutcome::new("psi = phi^Q of boundary");
    let fields = [q_sqrt5(), q_sqrt2()];
    for i in 0..instances {
        let f = &fields[i % fields.len()];
        let xs = general_tuple(f, f.degree() + 1, &[], rng);
        let q = IrrationalDirection::random(f.degree(), rng);
        let res = (|| {
            let lhs = psi(f, &xs)?;
            let t = TupleChain::tuple(f, &xs)?;
            let rhs = phi_q_chain(f, &t.boundary(), &q)?;
            Ok(same_indicator(f, &lhs, &rhs, rng))
        })();
        out.record(res, || format!("xs = {xs:?}"));
    }
    out
}

/// Chains compared as functions at generic points.
fn same_indicator<R: Rng>(f: &TotallyRealField, a: &ConeChain, b: &ConeChain, rng: &mut R) -> bool {
    if a == b {
        return true;
    }
    (0..200).all(|_| {
        let z = random_element(f.degree(), 25, rng);
        z.is_zero() || a.eval(&z) == b.eval(&z)
    })
}

/// φ(a) computed through two independent fillings of a random cycle.
pub fn fill_independence<R: Rng>(instances: usize, rng: &mut R) -> CheckOutcome {
    let mut out = CheckOutcome::new("fill independence");
    let fields = [q_sqrt5(), q_sqrt2()];
    for i in 0..instances {
        let f = &fields[i % fields.len()];
        let res = (|| {
            let mut b = TupleChain::new();
            for _ in 0..rng.gen_range(1..=3) {
                let xs = general_tuple(f, f.degree() + 1, &[], rng);
                b.add_term(f, rng.gen_range(-2..=2i64).max(1), &xs)?;
            }
            let cycle = b.boundary();
            let mut r1 = ChaCha8Rng::seed_from_u64(rng.gen());
            let mut r2 = ChaCha8Rng::seed_from_u64(rng.gen());
            let a1 = fill_and_phi(f, &cycle, &mut r1)?;
            let a2 = fill_and_phi(f, &cycle, &mut r2)?;
            Ok(same_indicator(f, &a1, &a2, rng))
        })();
        out.record(res, || format!("instance {i}"));
    }
    out
}

/// (field, 𝔮) pairs with 𝔮 of residue degree one.
pub fn smoothing_primes() -> Vec<(TotallyRealField, PrimeIdeal)> {
    let q5 = q_sqrt5();
    let q2 = q_sqrt2();
    let q7 = TotallyRealField::real_quadratic(7).expect("ℚ(√7)");
    let p3 = crate::exactfield::prime::primes_above(&q7, 3).expect("3 splits")[0].clone();
    vec![
        (q5.clone(), parse_prime(&q5, "5").expect("(√5)")),
        (q2.clone(), parse_prime(&q2, "7:3").expect("7:3")),
        (q7, p3),
    ]
}

/// A random 1- or 2-dimensional totally positive cone with admissible generators.
fn random_admissible_cone<R: Rng>(field: &TotallyRealField, q: &PrimeIdeal, rng: &mut R) -> Result<ConeChain> {
    let dim = if rng.gen_bool(0.8) { 2 } else { 1 };
    let mut gens: Vec<FieldElement> = Vec::new();
    while gens.len() < dim {
        let z = random_totally_positive(field, 6, rng)?;
        if check_admissible(field, q, &z).is_err() {
            continue;
        }
        let mut all: Vec<&FieldElement> = gens.iter().collect();
        all.push(&z);
        if independent(&all) {
            gens.push(z);
        }
    }
    ConeChain::symbol(&gens)
}

/// Weak and strong integrality of ⟨⟨C, f_{∅,M,∅}⟩⟩ for M = {1} and M = 𝔽_q^×.
pub fn integrality<R: Rng>(instances: usize, rng: &mut R) -> CheckOutcome {
    let mut out = CheckOutcome::new("integrality");
    let cases = smoothing_primes();
    for i in 0..instances {
        let (f, q) = &cases[i % cases.len()];
        let full = rng.gen_bool(0.5);
        let m: Vec<u64> = if full { (1..q.p).collect() } else { vec![1] };
        let res = (|| {
            let mut chain = random_admissible_cone(f, q, rng)?;
            let mut phi = make_f_rmw(f, q, &m, &[], &[], &[])?;
            if rng.gen_bool(0.5) {
                // x ↦ Φ(x/y) on the cone yC
                let y = loop {
                    let y = random_totally_positive(f, 4, rng)?;
                    if !q.contains(&y) {
                        break y;
                    }
                };
                phi = phi.act(f, &y)?;
                chain = chain.act(f, &y);
            }
            let v = pairing(f, &PairingInput { chain, phi, split: vec![0, 1], admissible: Some(q.clone()) })?.value;
            let verdict = integrality_report(&v, q.norm(), f.degree() as u32, full);
            Ok(verdict.weak && verdict.strong != Some(false))
        })();
        out.record(res, || format!("{} with M = {m:?}", q.label));
    }
    out
}

/// Each pairing agrees under an independent Δ enlargement and homogeneity split.
pub fn well_definedness<R: Rng>(instances: usize, rng: &mut R) -> CheckOutcome {
    let mut out = CheckOutcome::new("varpi well-definedness");
    let cases = smoothing_primes();
    for i in 0..instances {
        let (f, q) = &cases[i % cases.len()];
        let res = (|| {
            let chain = random_admissible_cone(f, q, rng)?;
            let phi = if rng.gen_bool(0.5) {
                make_h_x(f, q, rng.gen_range(0..q.p))?
            } else {
                let k = *[1, 2, q.p - 1].choose(rng).unwrap_or(&1);
                make_f_rmw(f, q, &subgroup_of_order(q, k)?, &[], &[], &[])?
            };
            let base = PairingInput { chain, phi, split: vec![0, 1], admissible: Some(q.clone()) };
            let a = pairing(f, &base)?.value;
            let choice = DeltaChoice { lattice: rng.gen_range(1..=3), period: rng.gen_range(1..=2) };
            let splits = [vec![0], vec![1], vec![1, 0], vec![]];
            let other = PairingInput { split: splits.choose(rng).cloned().unwrap_or_default(), ..base };
            let b = pairing_with(f, &other, choice)?.value;
            Ok(a == b)
        })();
        out.record(res, || format!("instance {i} at {}", q.label));
    }
    out
}

/// Fields and quadratic d used for the Stickelberger congruence instances.
pub fn congruence_cases() -> Vec<(&'static str, TotallyRealField, &'static str, Vec<[i64; 2]>)> {
    vec![
        ("Q(sqrt5)", q_sqrt5(), "5", vec![[-1, 0], [-2, 0], [-3, 0], [-1, -1]]),
        ("Q(sqrt2)", q_sqrt2(), "7:3", vec![[-1, 0], [-2, 0], [-3, 0], [-1, -1]]),
    ]
}

/// Θ ≡ R, Θ ∈ ∏I_{G_v} and 2Θ in the congruence modulus for K = F(√d).
pub fn stickelberger_congruences(limit: usize) -> CheckOutcome {
    let mut out = CheckOutcome::new("Stickelberger congruences");
    for (name, f, q, ds) in congruence_cases() {
        for d in ds.into_iter().take(limit) {
            let res = (|| {
                let qp = parse_prime(&f, q)?;
                let spec = default_instance(&f, Some(FieldElement::from_ints(&d)), &qp, &[])?;
                Ok(verify_congruence(&spec, &ThetaOptions::default())?.pass())
            })();
            out.record(res, || format!("{name}, d = {:?}", d));
        }
    }
    out
}

/// b₀ ≡ R̂ in I_{v₁}/I_H I_{v₁}.
pub fn hat_congruences() -> CheckOutcome {
    let mut out = CheckOutcome::new("hat congruences");
    for (name, f, q) in [("Q(sqrt5)", q_sqrt5(), "5"), ("Q(sqrt2)", q_sqrt2(), "7:3")] {
        let res = (|| {
            let qp = parse_prime(&f, q)?;
            let spec = HatSpec { field: f.clone(), m: (1..qp.p).collect(), q: qp, v0: 0 };
            Ok(verify_hat(&spec, &HatOptions::default())?.equal)
        })();
        out.record(res, || name.to_string());
    }
    out
}

/// ord_𝔭(xy) = ord_𝔭(x) + ord_𝔭(y).
pub fn valuation_additivity<R: Rng>(pairs: usize, rng: &mut R) -> CheckOutcome {
    let mut out = CheckOutcome::new("valuation additivity");
    let cases = smoothing_primes();
    for i in 0..pairs {
        let (f, q) = &cases[i % cases.len()];
        let x = random_element(2, 30, rng);
        let y = random_element(2, 30, rng);
        if x.is_zero() || y.is_zero() {
            continue;
        }
        let res = (|| Ok(q.ord(f, &f.mul(&x, &y))? == q.ord(f, &x)? + q.ord(f, &y)?))();
        out.record(res, || format!("{x} * {y} at {}", q.label));
    }
    out
}

/// Every invariant suite at the given size, deterministically from `seed`.
pub fn run_suite(seed: u64, size: SuiteSize) -> Vec<CheckOutcome> {
    let k = match size {
        SuiteSize::Small => 1,
        SuiteSize::Full => 5,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        valuation_additivity(40 * k, &mut rng),
        tiling("Q(sqrt5)", &q_sqrt5(), 200 * k, &mut rng),
        tiling("Q(sqrt2)", &q_sqrt2(), 200 * k, &mut rng),
        hill_identity(40 * k, &mut rng),
        psi_kernel(20 * k, &mut rng),
        psi_is_phi_of_boundary(10 * k, &mut rng),
        fill_independence(10 * k, &mut rng),
        integrality(10 * k, &mut rng),
        well_definedness(20 * k, &mut rng),
        stickelberger_congruences(if size == SuiteSize::Small { 1 } else { 4 }),
        hat_congruences(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_checks_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for c in [hill_identity(12, &mut rng), psi_kernel(6, &mut rng), psi_is_phi_of_boundary(6, &mut rng), fill_independence(4, &mut rng)] {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
        }
        let c = tiling("Q(sqrt5)", &q_sqrt5(), 30, &mut rng);
        assert!(c.passed(), "{:?}", c.failures);
    }

    #[test]
    fn arithmetic_checks_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for c in [integrality(6, &mut rng), well_definedness(6, &mut rng), valuation_additivity(30, &mut rng)] {
            assert!(c.passed(), "{}: {:?}", c.name, c.failures);
        }
    }
}
