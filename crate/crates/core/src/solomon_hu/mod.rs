//! The functional ϖ on cone-times-lattice functions, the resulting pairing
//! ⟨⟨f,Φ⟩⟩, a numeric Abel-summation cross-check and integrality verdicts.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::adelic::{check_admissible, FiniteTestFunction};
use crate::arith::{self, fmt_rat, hnf, Rat};
use crate::cones::{independent, ConeChain};
use crate::error::{Error, Result};
use crate::exactfield::{FieldElement, PrimeIdeal, TotallyRealField};

const POINT_CAP: u128 = 200_000_000;

/// Enlargement of the minimal finite-difference operator: L_j ↦ a·L_j, P_j ↦ b·P_j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaChoice {
    pub lattice: u64,
    pub period: u64,
}

impl Default for DeltaChoice {
    fn default() -> Self {
        DeltaChoice { lattice: 1, period: 1 }
    }
}

/// c·1_{y+C(u₁,…,u_m)}(x)·Φ(x − y); with no generators, the point mass c·Φ(0) at y.
#[derive(Clone, Debug)]
pub struct VarpiTerm<'a> {
    pub coeff: i64,
    pub generators: Vec<FieldElement>,
    pub phi: &'a FiniteTestFunction,
    pub shift: Option<FieldElement>,
}

/// Δ_j = Σ_{c=0}^{N_j−1} [c·u_j/L_j] with N_j = L_j·P_j.
#[derive(Clone, Debug, Serialize)]
pub struct DeltaStep {
    pub lattice: u64,
    pub period: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TermAudit {
    pub coeff: i64,
    pub generators: Vec<FieldElement>,
    pub steps: Vec<DeltaStep>,
    /// ε(Δ) = ∏ N_j
    pub augmentation: String,
    pub points: u64,
    pub value: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingResult {
    #[serde(serialize_with = "ser_rat")]
    pub value: Rat,
    pub terms: Vec<TermAudit>,
}

fn ser_rat<S: serde::Serializer>(x: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rat(x))
}

/// Cone function f (a chain of open cones) paired with Φ.
#[derive(Clone, Debug)]
pub struct PairingInput {
    pub chain: ConeChain,
    pub phi: FiniteTestFunction,
    /// Embeddings carrying a homogeneity variable |·|_v^{−s_v}; reporting and the Abel weight only.
    pub split: Vec<usize>,
    /// Prime 𝔮 whose residue condition defines admissible cone directions.
    pub admissible: Option<PrimeIdeal>,
}

fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

fn to_u64(x: &BigInt, what: &str) -> Result<u64> {
    x.to_u64().ok_or_else(|| Error::Overflow(what.into()))
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(|| Error::Overflow(format!("{x} does not fit in 128 bits")))
}

/// Basis of {t ∈ ℚ^m : Σ t_j u_j ∈ 𝔞} from the 𝔞-coordinate rows of the u_j.
fn span_lattice(rows: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let m = rows.len();
    let n = rows[0].len();
    let den = arith::common_denominator(&rows.iter().flatten().cloned().collect::<Vec<_>>());
    let a: Vec<Vec<Rat>> = rows.iter().map(|r| r.iter().map(|x| x * Rat::from_integer(den.clone())).collect()).collect();
    // ℤ^n ∩ rowspace(A) is the integer left kernel of a basis of the right kernel of A
    let kernel = arith::nullspace(&a, n);
    let k = kernel.len();
    let kernel: Vec<Vec<BigInt>> = kernel
        .iter()
        .map(|v| {
            let d = arith::common_denominator(v);
            v.iter().map(|x| (x * Rat::from_integer(d.clone())).to_integer()).collect()
        })
        .collect();
    let aug: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigInt> = kernel.iter().map(|v| v[i].clone()).collect();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let h = hnf(&aug);
    let ints: Vec<Vec<BigInt>> = h.into_iter().filter(|r| r[..k].iter().all(Zero::is_zero)).map(|r| r[k..].to_vec()).collect();
    if ints.len() != m {
        return Err(Error::Internal("lattice of the cone span has the wrong rank".into()));
    }
    ints.iter()
        .map(|z| {
            let target: Vec<Rat> = z.iter().map(|x| Rat::from_integer(x.clone())).collect();
            let tau = arith::solve_columns(&a, &target).ok_or_else(|| Error::Internal("span lattice solve failed".into()))?;
            Ok(tau.into_iter().map(|x| x * Rat::from_integer(den.clone())).collect())
        })
        .collect()
}

/// Lattice data of one cone term.
struct ConeGrid {
    /// N_j = L_j P_j
    steps: Vec<(u64, u64)>,
    /// β-lattice {(L_j t_j)_j}, Hermite form.
    beta: Vec<Vec<i128>>,
    /// D·u_j/L_j on the basis of 𝔞, with common denominator D.
    dirs: Vec<Vec<i128>>,
    den: i128,
    base: Vec<i128>,
}

impl ConeGrid {
    fn new(phi: &FiniteTestFunction, gens: &[FieldElement], shift: &FieldElement, choice: DeltaChoice) -> Result<Self> {
        let rows: Vec<Vec<Rat>> = gens.iter().map(|u| phi.rational_coordinates(u)).collect();
        let lam = span_lattice(&rows)?;
        let m = gens.len();
        let fine = phi.fine_lattice();
        let mut steps = Vec::with_capacity(m);
        for (j, u) in gens.iter().enumerate() {
            let l = lcm_of_denominators(lam.iter().map(|t| &t[j])) * BigInt::from(choice.lattice);
            let p = lcm_of_denominators(&fine.coordinates(u)) * BigInt::from(choice.period);
            steps.push((to_u64(&l, "lattice step")?, to_u64(&p, "period")?));
        }
        let beta_rows: Vec<Vec<BigInt>> = lam
            .iter()
            .map(|t| t.iter().enumerate().map(|(j, x)| (x * Rat::from_integer(BigInt::from(steps[j].0))).to_integer()).collect())
            .collect();
        let beta: Vec<Vec<i128>> = hnf(&beta_rows).iter().map(|r| r.iter().map(to_i128).collect::<Result<_>>()).collect::<Result<_>>()?;
        let scaled: Vec<Vec<Rat>> =
            rows.iter().enumerate().map(|(j, r)| r.iter().map(|x| x / Rat::from_integer(BigInt::from(steps[j].0))).collect()).collect();
        let d = arith::common_denominator(&scaled.iter().flatten().cloned().collect::<Vec<_>>());
        let dirs: Vec<Vec<i128>> = scaled
            .iter()
            .map(|r| r.iter().map(|x| to_i128(&(x * Rat::from_integer(d.clone())).to_integer())).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        let base = phi.support_coordinates(shift).ok_or_else(|| Error::invalid("cone apex must lie in the support lattice"))?;
        Ok(ConeGrid { steps, beta, dirs, den: to_i128(&d)?, base })
    }

    fn sizes(&self) -> Vec<i128> {
        self.steps.iter().map(|&(l, p)| l as i128 * p as i128).collect()
    }

    fn count_bound(&self, hi: &[i128]) -> u128 {
        let det: u128 = self.beta.iter().enumerate().map(|(i, r)| r[i] as u128).product();
        hi.iter().map(|&h| h as u128).product::<u128>() / det.max(1) + 1
    }

    /// Calls `visit(β, 𝔞-coordinates)` for every β in the β-lattice with 1 ≤ β_j ≤ hi_j.
    fn for_each(&self, hi: &[i128], mut visit: impl FnMut(&[i128], &[i128])) -> Result<u64> {
        if self.count_bound(hi) > POINT_CAP {
            return Err(Error::unsupported("cone term needs too many lattice points"));
        }
        let m = self.beta.len();
        let n = self.base.len();
        let mut count = 0u64;
        let mut beta = vec![0i128; m];
        // k_i chosen level by level; partial[i] holds Σ_{l<i} k_l·row_l
        fn rec(
            g: &ConeGrid,
            i: usize,
            partial: &mut Vec<i128>,
            beta: &mut Vec<i128>,
            hi: &[i128],
            n: usize,
            count: &mut u64,
            visit: &mut dyn FnMut(&[i128], &[i128]),
        ) {
            let m = g.beta.len();
            if i == m {
                let mut c = vec![0i128; n];
                for (j, &b) in beta.iter().enumerate() {
                    if b != 0 {
                        for (ck, dk) in c.iter_mut().zip(&g.dirs[j]) {
                            *ck += b * dk;
                        }
                    }
                }
                for (ck, bk) in c.iter_mut().zip(&g.base) {
                    *ck = *ck / g.den + bk;
                }
                *count += 1;
                visit(beta, &c);
                return;
            }
            let d = g.beta[i][i];
            let off = partial[i];
            let kmin = (1 - off).div_euclid(d) + if (1 - off).rem_euclid(d) != 0 { 1 } else { 0 };
            let kmax = (hi[i] - off).div_euclid(d);
            for k in kmin..=kmax {
                for c in i..m {
                    partial[c] += k * g.beta[i][c];
                }
                beta[i] = partial[i];
                rec(g, i + 1, partial, beta, hi, n, count, visit);
                for c in i..m {
                    partial[c] -= k * g.beta[i][c];
                }
            }
        }
        let mut partial = vec![0i128; m];
        rec(self, 0, &mut partial, &mut beta, hi, n, &mut count, &mut visit);
        Ok(count)
    }
}

fn cone_term(field: &TotallyRealField, t: &VarpiTerm, choice: DeltaChoice) -> Result<(Rat, TermAudit)> {
    let shift = t.shift.clone().unwrap_or_else(|| field.zero());
    if t.generators.is_empty() {
        let v = Rat::from_integer(BigInt::from(t.phi.eval(&shift)));
        let audit = TermAudit {
            coeff: t.coeff,
            generators: vec![],
            steps: vec![],
            augmentation: "1".into(),
            points: 1,
            value: fmt_rat(&v),
        };
        return Ok((v, audit));
    }
    let refs: Vec<&FieldElement> = t.generators.iter().collect();
    if !independent(&refs) {
        return Err(Error::invalid("cone generators are linearly dependent"));
    }
    if choice.lattice == 0 || choice.period == 0 {
        return Err(Error::invalid("Δ enlargement factors must be positive"));
    }
    let grid = ConeGrid::new(t.phi, &t.generators, &shift, choice)?;
    let sizes = grid.sizes();
    let hi: Vec<i128> = sizes.iter().map(|s| s - 1).collect();
    let mut total: i128 = 0;
    let points = grid.for_each(&hi, |beta, c| {
        let v = t.phi.eval_coords(c) as i128;
        if v != 0 {
            let w: i128 = beta.iter().zip(&sizes).map(|(b, s)| s - b).product();
            total += v * w;
        }
    })?;
    let aug: BigInt = sizes.iter().map(|&s| BigInt::from(s)).product();
    let v = Rat::new(BigInt::from(total), aug.clone());
    let audit = TermAudit {
        coeff: t.coeff,
        generators: t.generators.clone(),
        steps: grid.steps.iter().map(|&(l, p)| DeltaStep { lattice: l, period: p }).collect(),
        augmentation: aug.to_string(),
        points,
        value: fmt_rat(&v),
    };
    Ok((v, audit))
}

/// ϖ(Σ c·1_C·Φ), each term through ϖ(g) = ϖ(Δg)/ε(Δ) with Δg finitely supported.
pub fn varpi_with(field: &TotallyRealField, terms: &[VarpiTerm], choice: DeltaChoice) -> Result<PairingResult> {
    let mut value = Rat::zero();
    let mut audits = Vec::with_capacity(terms.len());
    let mut smooth: Vec<(*const FiniteTestFunction, FieldElement)> = Vec::new();
    for t in terms {
        for u in &t.generators {
            let key = (t.phi as *const FiniteTestFunction, u.clone());
            if !smooth.contains(&key) {
                t.phi.require_smooth(u)?;
                smooth.push(key);
            }
        }
        let (v, a) = cone_term(field, t, choice)?;
        value += v * Rat::from_integer(BigInt::from(t.coeff));
        audits.push(a);
    }
    Ok(PairingResult { value, terms: audits })
}

pub fn varpi(field: &TotallyRealField, terms: &[VarpiTerm]) -> Result<PairingResult> {
    varpi_with(field, terms, DeltaChoice::default())
}

fn chain_terms<'a>(input: &'a PairingInput) -> Vec<VarpiTerm<'a>> {
    input
        .chain
        .terms()
        .map(|(g, c)| VarpiTerm { coeff: c, generators: g.clone(), phi: &input.phi, shift: None })
        .collect()
}

fn check_directions(field: &TotallyRealField, input: &PairingInput) -> Result<()> {
    if let Some(q) = &input.admissible {
        let gens: BTreeSet<&FieldElement> = input.chain.terms().flat_map(|(g, _)| g.iter()).collect();
        for u in gens {
            check_admissible(field, q, u)?;
        }
    }
    Ok(())
}

/// ⟨⟨f,Φ⟩⟩ = ϖ(f·Φ).
pub fn pairing(field: &TotallyRealField, input: &PairingInput) -> Result<PairingResult> {
    pairing_with(field, input, DeltaChoice::default())
}

pub fn pairing_with(field: &TotallyRealField, input: &PairingInput, choice: DeltaChoice) -> Result<PairingResult> {
    check_directions(field, input)?;
    varpi_with(field, &chain_terms(input), choice)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AbelBudget {
    pub levels: usize,
    pub tolerance: f64,
}

impl Default for AbelBudget {
    fn default() -> Self {
        AbelBudget { levels: 8, tolerance: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct AbelEstimate {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

/// Signs s_v making ℓ = Σ_{v∈split} s_v ρ_v positive on every generator.
fn abel_weight(field: &TotallyRealField, gens: &[FieldElement], split: &[usize]) -> Result<Vec<f64>> {
    let mut signs = Vec::with_capacity(split.len());
    for &v in split {
        if v >= field.degree() {
            return Err(Error::invalid(format!("no embedding {v}")));
        }
        let s = field.embedding_sign(&gens[0], v)?;
        for g in gens {
            if field.embedding_sign(g, v)? != s {
                return Err(Error::invalid(format!("embedding {v} changes sign on the cone")));
            }
        }
        signs.push(s as f64);
    }
    Ok(gens
        .iter()
        .map(|g| split.iter().zip(&signs).map(|(&v, s)| s * field.embedding_f64(g, v)).sum())
        .collect())
}

/// θ(t) = Σ_{x∈C} Φ(x)e^{−tℓ(x)} for one term, summed over a period box and
/// geometric series along each period vector.
struct AbelTerm {
    coeff: f64,
    points: Vec<(f64, f64)>,
    periods: Vec<f64>,
    constant: f64,
}

impl AbelTerm {
    fn theta(&self, t: f64) -> f64 {
        if self.periods.is_empty() {
            return self.coeff * self.constant;
        }
        let mut num = 0.0;
        let mut comp = 0.0;
        for &(v, l) in &self.points {
            // Kahan summation of Φ(p)(e^{−tℓ(p)} − 1); Σ Φ(p) vanishes by smoothness
            let y = v * (-t * l).exp_m1() - comp;
            let s = num + y;
            comp = (s - num) - y;
            num = s;
        }
        let den: f64 = self.periods.iter().map(|&lp| -(-t * lp).exp_m1()).product();
        self.coeff * num / den
    }
}

/// Richardson-extrapolated t → 0⁺ limit of Σ f(x)Φ(x)e^{−tℓ(x)}.
pub fn abel_oracle(field: &TotallyRealField, input: &PairingInput, budget: AbelBudget) -> Result<AbelEstimate> {
    let split: Vec<usize> = if input.split.is_empty() { (0..field.degree()).collect() } else { input.split.clone() };
    let mut terms = Vec::new();
    let mut scale = 0.0f64;
    for (gens, c) in input.chain.terms() {
        if gens.is_empty() {
            terms.push(AbelTerm { coeff: c as f64, points: vec![], periods: vec![], constant: input.phi.eval(&field.zero()) as f64 });
            continue;
        }
        let ell = abel_weight(field, gens, &split)?;
        let grid = ConeGrid::new(&input.phi, gens, &field.zero(), DeltaChoice::default())?;
        let sizes = grid.sizes();
        let mut points = Vec::new();
        let mut exact_sum: i64 = 0;
        grid.for_each(&sizes, |beta, co| {
            let v = input.phi.eval_coords(co);
            if v != 0 {
                let l: f64 = beta.iter().enumerate().map(|(j, &b)| b as f64 * ell[j] / grid.steps[j].0 as f64).sum();
                points.push((v as f64, l));
                exact_sum += v;
            }
        })?;
        if exact_sum != 0 {
            return Err(Error::NotSmooth { direction: "cone".into(), detail: "period box sum is nonzero".into() });
        }
        let periods: Vec<f64> = (0..gens.len()).map(|j| ell[j] * grid.steps[j].1 as f64).collect();
        scale = periods.iter().cloned().fold(scale, f64::max);
        terms.push(AbelTerm { coeff: c as f64, points, periods, constant: 0.0 });
    }
    let theta = |t: f64| terms.iter().map(|a| a.theta(t)).sum::<f64>();
    let t0 = if scale > 0.0 { 0.5 / scale } else { 1.0 };
    let levels = budget.levels.max(2);
    let mut table: Vec<Vec<f64>> = Vec::with_capacity(levels);
    for k in 0..levels {
        let t = t0 / f64::powi(2.0, k as i32);
        let mut row = vec![theta(t)];
        for j in 1..=k {
            let f = f64::powi(2.0, j as i32);
            let prev = &table[k - 1];
            row.push((f * row[j - 1] - prev[j - 1]) / (f - 1.0));
        }
        table.push(row);
    }
    let last = &table[levels - 1];
    let value = last[levels - 1];
    let error = (value - last[levels - 2]).abs().max((value - table[levels - 2][levels - 2]).abs());
    Ok(AbelEstimate { value, error, converged: error.is_finite() && error < budget.tolerance })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegralityVerdict {
    pub value: String,
    pub q: u64,
    pub n: u32,
    /// Denominator divides q^n.
    pub weak: bool,
    /// Value is an integer; decided only when q ≥ n + 2 and M = 𝔽_q^×.
    pub strong: Option<bool>,
}

pub fn integrality_report(value: &Rat, q: u64, n: u32, full_m: bool) -> IntegralityVerdict {
    let bound = BigInt::from(q).pow(n);
    let weak = (&bound % value.denom()).is_zero();
    let strong = (full_m && q >= n as u64 + 2).then(|| value.is_integer());
    IntegralityVerdict { value: fmt_rat(value), q, n, weak, strong }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adelic::{make_f_rmw, make_h_x};
    use crate::arith::{rat, ratio};
    use crate::exactfield::prime::{parse_prime, Ideal};

    fn q5() -> TotallyRealField {
        TotallyRealField::real_quadratic(5).unwrap().with_place_order(&[1, 0]).unwrap()
    }

    fn rationals() -> TotallyRealField {
        TotallyRealField::new(&[-3, 1]).unwrap()
    }

    fn hurwitz(field: &TotallyRealField) -> FiniteTestFunction {
        let five = Ideal::from_generators(field, &[field.from_int(5)]).unwrap();
        FiniteTestFunction::from_rule(field, Ideal::unit(field), five, |x| {
            let r = x.0[0].to_integer().mod_floor(&BigInt::from(5));
            Ok(if r.is_one() {
                1
            } else if r.is_zero() {
                -1
            } else {
                0
            })
        })
        .unwrap()
    }

    #[test]
    fn point_masses() {
        let f = q5();
        let one = FiniteTestFunction::from_rule(&f, Ideal::unit(&f), Ideal::unit(&f), |_| Ok(1)).unwrap();
        let delta = VarpiTerm { coeff: 1, generators: vec![], phi: &one, shift: None };
        assert_eq!(varpi(&f, &[delta]).unwrap().value, rat(1));
        let terms = [
            VarpiTerm { coeff: 2, generators: vec![], phi: &one, shift: Some(FieldElement::from_ints(&[1, 2])) },
            VarpiTerm { coeff: 3, generators: vec![], phi: &one, shift: Some(FieldElement::from_ints(&[0, -1])) },
        ];
        assert_eq!(varpi(&f, &terms).unwrap().value, rat(5));
    }

    #[test]
    fn hurwitz_value() {
        let f = rationals();
        let phi = hurwitz(&f);
        let input = PairingInput { chain: ConeChain::symbol(&[f.one()]).unwrap(), phi, split: vec![0], admissible: None };
        let r = pairing(&f, &input).unwrap();
        // ζ(0, a) = 1/2 − a
        let oracle = (ratio(1, 2) - ratio(1, 5)) - (ratio(1, 2) - rat(1));
        assert_eq!(r.value, oracle);
        assert_eq!(r.value, ratio(4, 5));
        let a = abel_oracle(&f, &input, AbelBudget::default()).unwrap();
        assert!((a.value - 0.8).abs() < 1e-6 && a.converged, "{a:?}");
    }

    #[test]
    fn worked_example_constants() {
        let f = q5();
        let q = parse_prime(&f, "5").unwrap();
        let phi = make_f_rmw(&f, &q, &[1, 2, 3, 4], &[], &[], &[]).unwrap();
        let eps = f.theta();
        let e2 = f.mul(&eps, &eps);
        let d1 = ConeChain::symbol(&[f.one(), eps.clone()]).unwrap();
        let d0 = ConeChain::from_terms(&[(1, vec![f.one()]), (1, vec![f.one(), e2])]).unwrap();
        let z1 = PairingInput { chain: d1, phi: phi.clone(), split: vec![0], admissible: Some(q.clone()) };
        let z0 = PairingInput { chain: d0, phi, split: vec![0, 1], admissible: Some(q) };
        assert_eq!(pairing(&f, &z1).unwrap().value, rat(-1));
        assert_eq!(pairing(&f, &z0).unwrap().value, rat(0));
        let a1 = abel_oracle(&f, &z1, AbelBudget { levels: 8, tolerance: 1e-4 }).unwrap();
        assert!((a1.value + 1.0).abs() < 1e-4, "{a1:?}");
        let a0 = abel_oracle(&f, &z0, AbelBudget { levels: 8, tolerance: 1e-4 }).unwrap();
        assert!(a0.value.abs() < 1e-4, "{a0:?}");
    }

    #[test]
    fn zero_function_pairs_to_zero() {
        let f = q5();
        let input = PairingInput {
            chain: ConeChain::symbol(&[f.one(), FieldElement::from_ints(&[1, 1])]).unwrap(),
            phi: FiniteTestFunction::zero(&f),
            split: vec![],
            admissible: None,
        };
        assert_eq!(pairing(&f, &input).unwrap().value, rat(0));
        assert_eq!(abel_oracle(&f, &input, AbelBudget::default()).unwrap().value, 0.0);
    }

    #[test]
    fn non_smooth_function_is_rejected() {
        let f = q5();
        let one = FiniteTestFunction::from_rule(&f, Ideal::unit(&f), Ideal::unit(&f), |_| Ok(1)).unwrap();
        let input = PairingInput { chain: ConeChain::symbol(&[f.one()]).unwrap(), phi: one, split: vec![], admissible: None };
        assert!(matches!(pairing(&f, &input), Err(Error::NotSmooth { .. })));
    }

    #[test]
    fn inadmissible_direction_is_rejected() {
        let f = q5();
        let q = parse_prime(&f, "5").unwrap();
        let phi = make_h_x(&f, &q, 1).unwrap();
        let input = PairingInput {
            chain: ConeChain::symbol(&[f.sqrt_d().unwrap()]).unwrap(),
            phi,
            split: vec![],
            admissible: Some(q),
        };
        assert!(matches!(pairing(&f, &input), Err(Error::Hypothesis { .. })));
    }

    #[test]
    fn delta_choice_and_subdivision() {
        let f = q5();
        let q = parse_prime(&f, "5").unwrap();
        let phi = make_h_x(&f, &q, 2).unwrap();
        let (u, w) = (FieldElement::from_ints(&[1, 1]), FieldElement::from_ints(&[1, 2]));
        let s = f.add(&u, &w);
        let whole = PairingInput { chain: ConeChain::symbol(&[u.clone(), w.clone()]).unwrap(), phi: phi.clone(), split: vec![], admissible: None };
        let a = pairing(&f, &whole).unwrap().value;
        let b = pairing_with(&f, &whole, DeltaChoice { lattice: 2, period: 3 }).unwrap().value;
        assert_eq!(a, b);
        let parts = ConeChain::from_terms(&[(1, vec![u.clone(), s.clone()]), (1, vec![s.clone()]), (1, vec![s, w])]).unwrap();
        let split = PairingInput { chain: parts, phi, split: vec![], admissible: None };
        assert_eq!(pairing(&f, &split).unwrap().value, a);
    }

    #[test]
    fn translation_invariance() {
        let f = q5();
        let q = parse_prime(&f, "5").unwrap();
        let phi = make_h_x(&f, &q, 3).unwrap();
        let gens = vec![FieldElement::from_ints(&[1, 1]), FieldElement::from_ints(&[2, -1])];
        let y = FieldElement::from_ints(&[4, -7]);
        let moved = phi.translate(&f, &y).unwrap();
        let plain = VarpiTerm { coeff: 1, generators: gens.clone(), phi: &phi, shift: None };
        let shifted = VarpiTerm { coeff: 1, generators: gens, phi: &moved, shift: Some(y) };
        let a = varpi(&f, &[plain]).unwrap().value;
        let b = varpi_with(&f, &[shifted], DeltaChoice { lattice: 3, period: 2 }).unwrap().value;
        assert_eq!(a, b);
    }

    #[test]
    fn integrality_verdicts() {
        let weak = integrality_report(&ratio(4, 5), 5, 1, false);
        assert!(weak.weak && weak.strong.is_none());
        let strong = integrality_report(&rat(-1), 5, 2, true);
        assert_eq!(strong.strong, Some(true));
        assert!(!integrality_report(&ratio(1, 25), 5, 1, false).weak);
    }
}
