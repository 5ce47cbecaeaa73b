//! Stickelberger elements from Shintani pairings, Gross regulators and the
//! congruences between them, for K = F or a quadratic extension F(√d).

pub mod hilbert;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adelic::{make_f_rmw, FiniteTestFunction};
use crate::arith::{fmt_rat, Rat};
use crate::cones::{fiber_representative_avoiding, signed_fundamental_domain_with, ConeChain, IrrationalDirection};
use crate::error::{Error, Result};
use crate::exactfield::prime::Ideal;
use crate::exactfield::units::fundamental_unit;
use crate::exactfield::{st_class_data, st_unit_basis, Convention, FieldElement, Place, PrimeIdeal, TotallyRealField};
use crate::group_algebra::{
    det, ideal_lattice, membership, reduce_mod, AugClass, FiniteAbelianGroup, GroupRingElement, IdealFactor, Lattice, MembershipCertificate,
};
use crate::solomon_hu::{pairing, PairingInput};
use hilbert::{hilbert_symbol, is_local_square, is_ramified, ramified_primes, square_level};

const SIGN_FIBERS: [[i32; 2]; 4] = [[1, 1], [1, -1], [-1, 1], [-1, -1]];

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    Trivial,
    /// K = F(√d)
    Quadratic(FieldElement),
}

#[derive(Clone, Debug)]
pub struct InstanceSpec {
    pub field: TotallyRealField,
    /// S in the order v₀, …, v_r.
    pub places: Vec<Place>,
    pub t: Vec<PrimeIdeal>,
    pub extension: Extension,
    /// Smoothing prime; a member of T of residue degree one.
    pub q: PrimeIdeal,
    /// J_v = 1 + 𝔭^c at finite v ∈ S; unlisted primes get the default level.
    pub j_levels: Vec<(PrimeIdeal, u32)>,
}

impl InstanceSpec {
    pub fn galois_group(&self) -> FiniteAbelianGroup {
        match self.extension {
            Extension::Trivial => FiniteAbelianGroup::trivial(),
            Extension::Quadratic(_) => FiniteAbelianGroup::galois_quadratic(),
        }
    }

    pub fn v0(&self) -> &Place {
        &self.places[0]
    }

    pub fn finite_places(&self) -> Vec<PrimeIdeal> {
        self.places
            .iter()
            .filter_map(|v| match v {
                Place::Finite(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    fn d(&self) -> Option<&FieldElement> {
        match &self.extension {
            Extension::Trivial => None,
            Extension::Quadratic(d) => Some(d),
        }
    }

    /// Level c of J_v = 1 + 𝔭^c.
    pub fn j_level(&self, p: &PrimeIdeal) -> Result<u32> {
        if let Some((_, c)) = self.j_levels.iter().find(|(q, _)| q == p) {
            return Ok(*c);
        }
        Ok(match self.d() {
            Some(d) if is_ramified(&self.field, d, &Place::Finite(p.clone()))? => square_level(p),
            _ => 1,
        })
    }

    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        f.require_quadratic("Stickelberger instances")?;
        if self.places.is_empty() {
            return Err(Error::invalid("S is empty"));
        }
        for j in 0..f.degree() {
            if !self.places.contains(&Place::Real(j)) {
                return Err(Error::Hypothesis { name: "S contains the infinite places".into(), detail: format!("inf{j} is missing") });
            }
        }
        for (i, v) in self.places.iter().enumerate() {
            if self.places[..i].contains(v) {
                return Err(Error::invalid(format!("place {} is listed twice", v.label())));
            }
        }
        let sf = self.finite_places();
        for p in &self.t {
            if sf.contains(p) {
                return Err(Error::Hypothesis { name: "S and T disjoint".into(), detail: format!("{} lies in both", p.label) });
            }
        }
        if !self.t.contains(&self.q) {
            return Err(Error::invalid(format!("smoothing prime {} must belong to T", self.q.label)));
        }
        if self.q.f != 1 {
            return Err(Error::unsupported(format!("smoothing prime {} must have residue degree one", self.q.label)));
        }
        if let Some(d) = self.d() {
            if d.is_zero() || f.sqrt(d)?.is_some() {
                return Err(Error::invalid("d must be a nonzero non-square"));
            }
            for p in ramified_primes(f, d)? {
                if !sf.contains(&p) {
                    return Err(Error::Hypothesis {
                        name: "S contains the ramified places".into(),
                        detail: format!("{} ramifies in K but is not in S", p.label),
                    });
                }
            }
            for p in &self.t {
                if is_ramified(f, d, &Place::Finite(p.clone()))? {
                    return Err(Error::Hypothesis { name: "T unramified".into(), detail: format!("{} ramifies in K", p.label) });
                }
            }
            for p in &sf {
                let c = self.j_level(p)?;
                if c < square_level(p) {
                    for x in crate::adelic::unit_representatives(f, p, square_level(p))? {
                        let xm1 = f.sub(&x, &f.one());
                        let deep = xm1.is_zero() || p.ord(f, &xm1)? >= c as i64;
                        if deep && hilbert_symbol(f, &x, d, &Place::Finite(p.clone()))? < 0 {
                            return Err(Error::Hypothesis {
                                name: "J_v inside ker rec_v".into(),
                                detail: format!("1 + {}^{c} is not in the kernel of the local reciprocity map", p.label),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// rec_v(u) ∈ G as (u,d)_v.
pub fn rec_at_place(spec: &InstanceSpec, u: &FieldElement, v: &Place) -> Result<usize> {
    if !spec.places.contains(v) {
        return Err(Error::invalid(format!("{} is not in S", v.label())));
    }
    match spec.d() {
        None => Ok(0),
        Some(d) => Ok(if hilbert_symbol(&spec.field, u, d, v)? < 0 { 1 } else { 0 }),
    }
}

/// Generators of the decomposition group G_v.
pub fn decomposition_group(spec: &InstanceSpec, v: &Place) -> Result<Vec<usize>> {
    match spec.d() {
        None => Ok(vec![]),
        Some(d) => Ok(if is_local_square(&spec.field, d, v)? { vec![] } else { vec![1] }),
    }
}

/// Frobenius at a prime unramified in K.
pub fn frobenius(field: &TotallyRealField, ext: &Extension, p: &PrimeIdeal) -> Result<usize> {
    match ext {
        Extension::Trivial => Ok(0),
        Extension::Quadratic(d) => {
            let v = Place::Finite(p.clone());
            if is_ramified(field, d, &v)? {
                return Err(Error::invalid(format!("{} ramifies in K", p.label)));
            }
            Ok(if hilbert_symbol(field, &p.uniformizer, d, &v)? < 0 { 1 } else { 0 })
        }
    }
}

/// Minimal polynomials of 2cos(2π/m) for m with φ(m) ∈ {1, 2, 4}, constant term first.
const CYCLOTOMIC_TRACES: [(u64, &[i64]); 7] =
    [(3, &[1, 1]), (4, &[0, 1]), (5, &[-1, 1, 1]), (6, &[-1, 1]), (8, &[-2, 0, 1]), (10, &[-1, -1, 1]), (12, &[-3, 0, 1])];

fn roots_in_field(field: &TotallyRealField, c: &[i64]) -> Result<Vec<FieldElement>> {
    let r = |n: i64| Rat::from_integer(BigInt::from(n));
    match c.len() {
        2 => Ok(vec![field.from_rat(&(-r(c[0]) / r(c[1])))]),
        3 => {
            let disc = field.from_int(c[1] * c[1] - 4 * c[0] * c[2]);
            let b = field.from_int(-c[1]);
            let inv2a = field.from_rat(&Rat::new(BigInt::one(), BigInt::from(2 * c[2])));
            Ok(match field.sqrt(&disc)? {
                Some(s) => vec![field.mul(&field.add(&b, &s), &inv2a), field.mul(&field.sub(&b, &s), &inv2a)],
                None => vec![],
            })
        }
        _ => Err(Error::Internal("unexpected cyclotomic degree".into())),
    }
}

/// #μ_K.
pub fn roots_of_unity_order(field: &TotallyRealField, ext: &Extension) -> Result<u64> {
    let d = match ext {
        Extension::Trivial => return Ok(2),
        Extension::Quadratic(d) => d,
    };
    let signs = field.embedding_signs(d)?;
    if signs.iter().any(|&s| s > 0) {
        return Ok(2);
    }
    // K is CM with real subfield F: ζ ∈ K iff t = ζ + ζ⁻¹ ∈ F and (t² − 4)/d is a square
    let mut m = 2u64;
    for (order, poly) in CYCLOTOMIC_TRACES {
        for t in roots_in_field(field, poly)? {
            let w = field.div(&field.sub(&field.mul(&t, &t), &field.from_int(4)), d)?;
            if field.sqrt(&w)?.is_some() {
                m = num_integer::lcm(m, order);
            }
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct MuTVerdict {
    pub roots_of_unity: u64,
    pub pass: bool,
    pub detail: String,
}

/// ker(μ_K → ∏_{𝔓|T}(O_K/𝔓)^×) = 1 ⟺ every p | #μ_K has some 𝔭 ∈ T with ch(𝔭) ≠ p.
pub fn mu_t_check(field: &TotallyRealField, ext: &Extension, t: &[PrimeIdeal]) -> Result<MuTVerdict> {
    let m = roots_of_unity_order(field, ext)?;
    let bad: Vec<u64> = crate::arith::factor(&BigInt::from(m)).into_iter().map(|f| f.0).filter(|&p| t.iter().all(|q| q.p == p)).collect();
    let detail = if bad.is_empty() {
        format!("#μ_K = {m}; T separates the roots of unity")
    } else {
        format!("#μ_K = {m}; no prime of T has characteristic other than {bad:?}")
    };
    Ok(MuTVerdict { roots_of_unity: m, pass: bad.is_empty(), detail })
}

/// δ_T = ∏_{𝔭∈T}(1 − N𝔭·σ_𝔭⁻¹).
pub fn delta_t(field: &TotallyRealField, ext: &Extension, t: &[PrimeIdeal]) -> Result<GroupRingElement> {
    let g = match ext {
        Extension::Trivial => FiniteAbelianGroup::trivial(),
        Extension::Quadratic(_) => FiniteAbelianGroup::galois_quadratic(),
    };
    let mut acc = GroupRingElement::one(&g);
    for p in t {
        let s = g.inv(frobenius(field, ext, p)?);
        let n = Rat::from_integer(BigInt::from(p.norm()));
        let factor = GroupRingElement::one(&g).sub(&GroupRingElement::basis(&g, s).scale(&n));
        acc = acc.mul(&factor);
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ThetaOptions {
    /// E = ⟨ε₊^k⟩.
    pub unit_power: u32,
    /// Which small fiber element serves as base point.
    pub base_skip: usize,
    pub witnesses: usize,
    pub seed: u64,
}

impl Default for ThetaOptions {
    fn default() -> Self {
        ThetaOptions { unit_power: 1, base_skip: 0, witnesses: 20, seed: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ZetaTerm {
    pub sigma: String,
    pub signs: Vec<i32>,
    pub base_point: FieldElement,
    pub pairing: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ThetaElement {
    pub value: GroupRingElement,
    /// ζ_{S,{𝔮}}(σ,0) before the δ-factor of the remaining T-primes.
    pub partial: Vec<(String, String)>,
    pub terms: Vec<ZetaTerm>,
    pub unit_index: u64,
    pub integral: bool,
    pub augmentation: String,
}

/// [O^× : ⟨ε₊⟩] and ε₊.
fn positive_unit_index(field: &TotallyRealField) -> Result<(u64, FieldElement)> {
    let eta = fundamental_unit(field)?;
    if field.norm(&eta) == -Rat::one() {
        Ok((4, field.mul(&eta, &eta)))
    } else {
        Ok((2, eta))
    }
}

/// χ(xO) restricted to the real places of S: −1 at v when ρ_v(x) < 0 and ρ_v(d) < 0.
fn infinite_character(field: &TotallyRealField, d: &FieldElement, g: &[i32]) -> Result<i32> {
    let mut s = 1;
    for (j, &gj) in g.iter().enumerate() {
        if gj < 0 && field.embedding_sign(d, j)? < 0 {
            s = -s;
        }
    }
    Ok(s)
}

/// Φ_{σ,g}: coprime to S_f, ∏_{𝔭∈S_f}(x,d)_𝔭 · χ_∞(g) = σ, smoothed at 𝔮 by Σ_{a∈𝔽_q^×} h_a.
fn class_test_function(spec: &InstanceSpec, sigma: usize, g: &[i32]) -> Result<FiniteTestFunction> {
    let f = &spec.field;
    let sf = spec.finite_places();
    let mut period = spec.q.ideal.clone();
    for p in &sf {
        period = period.mul(&p.ideal.pow(spec.j_level(p)?, f), f);
    }
    let chi_inf = match spec.d() {
        Some(d) => infinite_character(f, d, g)?,
        None => 1,
    };
    let want = if sigma == 0 { 1 } else { -1 };
    let q_weight = 1 - spec.q.norm() as i64;
    FiniteTestFunction::from_rule(f, Ideal::unit(f), period, |x| {
        if sf.iter().any(|p| p.contains(x)) {
            return Ok(0);
        }
        let mut chi = chi_inf;
        if let Some(d) = spec.d() {
            for p in &sf {
                chi *= hilbert_symbol(f, x, d, &Place::Finite(p.clone()))?;
            }
        }
        if chi != want {
            return Ok(0);
        }
        Ok(if spec.q.contains(x) { q_weight } else { 1 })
    })
}

/// ζ_{S,{𝔮}}(σ,0) = [O^×:E]⁻¹ Σ_g sgn(g)·⟨⟨D_g, Φ_{σ,g}⟩⟩.
pub fn partial_zeta0(spec: &InstanceSpec, sigma: usize, opts: &ThetaOptions) -> Result<(Rat, Vec<ZetaTerm>)> {
    let f = &spec.field;
    let g_group = spec.galois_group();
    let (index, eps) = positive_unit_index(f)?;
    let k = opts.unit_power.max(1);
    let e = f.pow(&eps, k as i64)?;
    let mut avoid = spec.finite_places();
    avoid.push(spec.q.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let q = IrrationalDirection::embedding_axis(2, f.plus_embedding(), -1);
    let mut total = Rat::zero();
    let mut terms = Vec::new();
    for g in SIGN_FIBERS {
        let x = fiber_representative_avoiding(f, &g, &avoid, opts.base_skip)?;
        let dom = signed_fundamental_domain_with(f, std::slice::from_ref(&e), &x, &q, opts.witnesses, &mut rng)?;
        let phi = class_test_function(spec, sigma, &g)?;
        let input = PairingInput { chain: dom.chain, phi, split: vec![0, 1], admissible: Some(spec.q.clone()) };
        let v = pairing(f, &input)?.value;
        let sgn = g[0] * g[1];
        total += &v * Rat::from_integer(BigInt::from(sgn));
        terms.push(ZetaTerm { sigma: g_group.label(sigma), signs: g.to_vec(), base_point: x, pairing: fmt_rat(&v) });
    }
    Ok((total / Rat::from_integer(BigInt::from(index * k as u64)), terms))
}

/// Θ_{S,T,K} = δ_{T∖{𝔮}} · Σ_σ ζ_{S,{𝔮}}(σ,0)[σ].
pub fn stickelberger_theta(spec: &InstanceSpec, opts: &ThetaOptions) -> Result<ThetaElement> {
    spec.validate()?;
    let g = spec.galois_group();
    let mut coeffs = Vec::with_capacity(g.order());
    let mut partial = Vec::new();
    let mut terms = Vec::new();
    for sigma in g.elements() {
        let (z, t) = partial_zeta0(spec, sigma, opts)?;
        partial.push((g.label(sigma), fmt_rat(&z)));
        coeffs.push(z);
        terms.extend(t);
    }
    let theta_q = GroupRingElement::from_coeffs(&g, coeffs)?;
    let others: Vec<PrimeIdeal> = spec.t.iter().filter(|p| **p != spec.q).cloned().collect();
    let value = delta_t(&spec.field, &spec.extension, &others)?.mul(&theta_q);
    let (unit_index, _) = positive_unit_index(&spec.field)?;
    Ok(ThetaElement {
        integral: value.is_integral(),
        augmentation: fmt_rat(&value.augmentation()),
        value,
        partial,
        terms,
        unit_index: unit_index * opts.unit_power.max(1) as u64,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RegulatorElement {
    pub value: GroupRingElement,
    pub class: AugClass,
    pub units: Vec<FieldElement>,
    /// rec_{v_i}(u_j) for i = 1..r.
    pub rec_matrix: Vec<Vec<String>>,
    pub h_st: u64,
    pub n_st: i64,
}

/// I_{G_H}·∏_{v∈S∖{v₀}} I_{G_v}, with H = F under class number one.
pub fn congruence_modulus(spec: &InstanceSpec) -> Result<Lattice> {
    let g = spec.galois_group();
    let mut factors = vec![IdealFactor::Augmentation];
    for v in &spec.places[1..] {
        factors.push(IdealFactor::Relative(decomposition_group(spec, v)?));
    }
    Ok(ideal_lattice(&g, &factors))
}

/// ∏_{v∈S∖{v₀}} I_{G_v}.
pub fn vanishing_lattice(spec: &InstanceSpec) -> Result<Lattice> {
    let g = spec.galois_group();
    let factors: Vec<IdealFactor> =
        spec.places[1..].iter().map(|v| decomposition_group(spec, v).map(IdealFactor::Relative)).collect::<Result<_>>()?;
    Ok(ideal_lattice(&g, &factors))
}

/// R = n_{S,T} Σ_{c∈Gal(H/F)}[c]·det(rec_{v_i}(u_j) − 1).
pub fn gross_regulator(spec: &InstanceSpec) -> Result<RegulatorElement> {
    spec.validate()?;
    let f = &spec.field;
    let g = spec.galois_group();
    let basis = st_unit_basis(f, &spec.places, &spec.t, Convention::Classic)?;
    let cd = st_class_data(f, &spec.places, &spec.t)?;
    if cd.gal_order != 1 {
        return Err(Error::unsupported("nontrivial S-split class field"));
    }
    let recs: Vec<Vec<usize>> =
        spec.places[1..].iter().map(|v| basis.units.iter().map(|u| rec_at_place(spec, u, v)).collect::<Result<_>>()).collect::<Result<_>>()?;
    let m: Vec<Vec<GroupRingElement>> = recs.iter().map(|row| row.iter().map(|&x| GroupRingElement::minus_one(&g, x)).collect()).collect();
    let value = det(&m, &g).scale(&Rat::from_integer(BigInt::from(cd.n_st)));
    let class = reduce_mod(&value, &congruence_modulus(spec)?)?;
    Ok(RegulatorElement {
        value,
        class,
        units: basis.units,
        rec_matrix: recs.iter().map(|r| r.iter().map(|&x| g.label(x)).collect()).collect(),
        h_st: cd.h_st,
        n_st: cd.n_st,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceReport {
    pub theta: ThetaElement,
    pub regulator: RegulatorElement,
    pub mu_t: MuTVerdict,
    #[serde(serialize_with = "ser_lattice")]
    pub modulus: Lattice,
    pub equal: bool,
    pub certificate: Option<MembershipCertificate>,
    /// Θ ∈ ∏_{v≠v₀} I_{G_v}
    pub vanishing: bool,
    /// 2Θ ∈ I_{G_H}∏_{v≠v₀} I_{G_v}
    pub twice_in_modulus: bool,
    pub augmentation_zero: bool,
}

fn ser_lattice<S: serde::Serializer>(l: &Lattice, s: S) -> std::result::Result<S::Ok, S::Error> {
    let rows: Vec<Vec<String>> = l.basis().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    rows.serialize(s)
}

impl CongruenceReport {
    pub fn pass(&self) -> bool {
        self.mu_t.pass && self.equal && self.vanishing && self.twice_in_modulus && self.augmentation_zero
    }
}

/// Θ_{S,T,K} ≡ R_{G,S,T} mod I_{G_H}∏_{v∈S∖{v₀}} I_{G_v}, with both sides computed independently.
pub fn verify_congruence(spec: &InstanceSpec, opts: &ThetaOptions) -> Result<CongruenceReport> {
    let mu_t = mu_t_check(&spec.field, &spec.extension, &spec.t)?;
    if !mu_t.pass {
        return Err(Error::Hypothesis { name: "ker(μ_K → ∏(O_K/𝔓)^×) trivial".into(), detail: mu_t.detail });
    }
    let theta = stickelberger_theta(spec, opts)?;
    if !theta.integral {
        return Err(Error::Hypothesis { name: "integral Stickelberger element".into(), detail: format!("Θ = {}", theta.value) });
    }
    let regulator = gross_regulator(spec)?;
    let modulus = congruence_modulus(spec)?;
    let certificate = membership(&theta.value.sub(&regulator.value), &modulus)?;
    let vanishing = membership(&theta.value, &vanishing_lattice(spec)?)?.is_some();
    let twice = theta.value.scale(&Rat::from_integer(BigInt::from(2)));
    let twice_in_modulus = membership(&twice, &modulus)?.is_some();
    let equal = certificate.as_ref().is_some_and(|c| c.verified);
    Ok(CongruenceReport {
        augmentation_zero: theta.value.augmentation().is_zero(),
        theta,
        regulator,
        mu_t,
        modulus,
        equal,
        certificate,
        vanishing,
        twice_in_modulus,
    })
}

/// Data of the idelic (hat) congruence with S = S_∞ and T = {𝔮}.
#[derive(Clone, Debug)]
pub struct HatSpec {
    pub field: TotallyRealField,
    pub q: PrimeIdeal,
    pub m: Vec<u64>,
    /// Real place v₀; N_eff = N_{v₀} × N_{v₁} is ordered (v₀, v₁).
    pub v0: usize,
}

impl HatSpec {
    fn v1(&self) -> usize {
        1 - self.v0
    }

    fn places(&self) -> Vec<Place> {
        vec![Place::Real(self.v0), Place::Real(self.v1())]
    }

    pub fn n_eff(&self) -> FiniteAbelianGroup {
        FiniteAbelianGroup::signs(2)
    }

    fn validate(&self) -> Result<()> {
        self.field.require_quadratic("hat congruence")?;
        if self.v0 > 1 {
            return Err(Error::invalid("v₀ must be inf0 or inf1"));
        }
        if self.q.f != 1 {
            return Err(Error::unsupported("𝔮 must have residue degree one"));
        }
        if !crate::exactfield::class::class_number_is_one(&self.field)? {
            return Err(Error::unsupported("hat congruence beyond class number one"));
        }
        Ok(())
    }

    /// Element of N_eff with the given signs at (v₀, v₁).
    fn sign_class(&self, s0: i32, s1: i32) -> usize {
        self.n_eff().from_signs(&[s0, s1])
    }
}

/// I_H·I_{v₁} inside ℤ[N_eff].
pub fn hat_modulus(spec: &HatSpec) -> Lattice {
    let n = spec.n_eff();
    ideal_lattice(&n, &[IdealFactor::Augmentation, IdealFactor::Relative(vec![n.generator(1)])])
}

#[derive(Clone, Debug, Serialize)]
pub struct HatRegulator {
    pub value: GroupRingElement,
    pub class: AugClass,
    pub unit: FieldElement,
    pub h_st: u64,
    pub n_st: i64,
    pub n_eff: String,
}

/// R̂_𝔮 = n_{S,{𝔮}}([f_{v₁}(u)] − [1]) in I_{v₁}/I_H I_{v₁}.
pub fn hat_regulator(spec: &HatSpec) -> Result<HatRegulator> {
    spec.validate()?;
    let f = &spec.field;
    let t = vec![spec.q.clone()];
    let basis = st_unit_basis(f, &spec.places(), &t, Convention::Hat)?;
    let cd = st_class_data(f, &spec.places(), &t)?;
    let u = basis.units[0].clone();
    let n = spec.n_eff();
    let fu = spec.sign_class(1, f.embedding_sign(&u, spec.v1())?);
    let value = GroupRingElement::minus_one(&n, fu).scale(&Rat::from_integer(BigInt::from(cd.n_st)));
    let class = reduce_mod(&value, &hat_modulus(spec))?;
    Ok(HatRegulator { value, class, unit: u, h_st: cd.h_st, n_st: cd.n_st, n_eff: "N_{v0} x N_{v1} = {±1}^2".into() })
}

#[derive(Clone, Copy, Debug)]
pub struct HatOptions {
    pub base_skip: usize,
    /// Tilt of the irrational direction Q off the v₀-axis.
    pub tilt: i64,
    pub witnesses: usize,
    pub seed: u64,
}

impl Default for HatOptions {
    fn default() -> Self {
        HatOptions { base_skip: 0, tilt: -1, witnesses: 20, seed: 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HatTheta {
    pub z0: String,
    pub z1: String,
    pub d0: Vec<(i64, Vec<FieldElement>)>,
    pub d1: Vec<FieldElement>,
    pub b0: GroupRingElement,
    pub class: AugClass,
}

/// The fundamental unit, normalized above 1 at v₀.
fn unit_above_one(field: &TotallyRealField, v0: usize) -> Result<FieldElement> {
    let eta = fundamental_unit(field)?;
    let ei = field.inv(&eta)?;
    for c in [eta.clone(), field.neg(&eta), ei.clone(), field.neg(&ei)] {
        if field.embedding_sign(&field.sub(&c, &field.one()), v0)? > 0 {
            return Ok(c);
        }
    }
    Err(Error::Internal("no unit above one".into()))
}

/// b₀ = (Z₀ − Z₁)[(+,+)] + Z₁[sgn η] from D₀ (signed domain for ⟨η²⟩) and D₁ = [1, η].
pub fn hat_theta(spec: &HatSpec, opts: &HatOptions) -> Result<HatTheta> {
    spec.validate()?;
    let f = &spec.field;
    let eta = unit_above_one(f, spec.v0)?;
    if f.norm(&eta) != -Rat::one() {
        return Err(Error::unsupported("hat chain for a fundamental unit of norm +1"));
    }
    let eps = f.mul(&eta, &eta);
    let phi = make_f_rmw(f, &spec.q, &spec.m, &[], &[], &[])?;
    let x = fiber_representative_avoiding(f, &[1, 1], std::slice::from_ref(&spec.q), opts.base_skip)?;
    let q = IrrationalDirection::embedding_axis(2, f.plus_embedding(), opts.tilt);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let d0 = signed_fundamental_domain_with(f, &[eps], &x, &q, opts.witnesses, &mut rng)?.chain;
    let d1 = vec![f.one(), eta.clone()];
    let z0 = pairing(f, &PairingInput { chain: d0.clone(), phi: phi.clone(), split: vec![spec.v0, spec.v1()], admissible: Some(spec.q.clone()) })?.value;
    let z1 = pairing(f, &PairingInput { chain: ConeChain::symbol(&d1)?, phi, split: vec![spec.v0], admissible: Some(spec.q.clone()) })?.value;
    let n = spec.n_eff();
    let s1 = f.embedding_sign(&eta, spec.v1())?;
    let b0 = GroupRingElement::basis(&n, spec.sign_class(1, 1))
        .scale(&(&z0 - &z1))
        .add(&GroupRingElement::basis(&n, spec.sign_class(1, s1)).scale(&z1));
    if !z0.is_zero() {
        return Err(Error::Hypothesis { name: "b₀ in I_{v1}".into(), detail: format!("Z₀ constant term is {}", fmt_rat(&z0)) });
    }
    let class = reduce_mod(&b0, &hat_modulus(spec))?;
    Ok(HatTheta {
        z0: fmt_rat(&z0),
        z1: fmt_rat(&z1),
        d0: d0.terms().map(|(g, c)| (c, g.clone())).collect(),
        d1,
        b0,
        class,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct HatReport {
    pub theta: HatTheta,
    pub regulator: HatRegulator,
    #[serde(serialize_with = "ser_lattice")]
    pub modulus: Lattice,
    pub equal: bool,
    pub certificate: Option<MembershipCertificate>,
}

pub fn verify_hat(spec: &HatSpec, opts: &HatOptions) -> Result<HatReport> {
    let theta = hat_theta(spec, opts)?;
    let regulator = hat_regulator(spec)?;
    let modulus = hat_modulus(spec);
    let certificate = membership(&theta.b0.sub(&regulator.value), &modulus)?;
    Ok(HatReport { equal: certificate.as_ref().is_some_and(|c| c.verified), theta, regulator, modulus, certificate })
}

/// K = F(√d) instance with S = S_∞ ∪ ramified (v₀ = inf0) and T = {𝔮} ∪ extra.
pub fn default_instance(field: &TotallyRealField, d: Option<FieldElement>, q: &PrimeIdeal, extra_t: &[PrimeIdeal]) -> Result<InstanceSpec> {
    let mut places: Vec<Place> = (0..field.degree()).map(Place::Real).collect();
    let extension = match d {
        None => Extension::Trivial,
        Some(d) => {
            places.extend(ramified_primes(field, &d)?.into_iter().map(Place::Finite));
            Extension::Quadratic(d)
        }
    };
    let mut t = vec![q.clone()];
    t.extend(extra_t.iter().cloned());
    Ok(InstanceSpec { field: field.clone(), places, t, extension, q: q.clone(), j_levels: vec![] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactfield::prime::{parse_prime, primes_above};

    fn q5() -> TotallyRealField {
        TotallyRealField::real_quadratic(5).unwrap().with_place_order(&[1, 0]).unwrap()
    }

    #[test]
    fn roots_of_unity() {
        let f = q5();
        assert_eq!(roots_of_unity_order(&f, &Extension::Trivial).unwrap(), 2);
        assert_eq!(roots_of_unity_order(&f, &Extension::Quadratic(f.from_int(-1))).unwrap(), 4);
        assert_eq!(roots_of_unity_order(&f, &Extension::Quadratic(f.from_int(-3))).unwrap(), 6);
        let r5 = parse_prime(&f, "5").unwrap();
        assert!(mu_t_check(&f, &Extension::Trivial, std::slice::from_ref(&r5)).unwrap().pass);
        assert!(!mu_t_check(&f, &Extension::Trivial, &[]).unwrap().pass);
        assert!(mu_t_check(&f, &Extension::Quadratic(f.from_int(-1)), &[r5]).unwrap().pass);
    }

    /// Brute-force oracle: x = a + b√d with a, b ∈ ½O small, x^12 = 1.
    #[test]
    fn roots_of_unity_enumeration() {
        let f = q5();
        let d = f.from_int(-1);
        let half = |v: i64| Rat::new(BigInt::from(v), BigInt::from(2));
        let mut count = 0;
        for a0 in -2..=2 {
            for a1 in -2..=2 {
                for b0 in -2..=2 {
                    for b1 in -2..=2 {
                        let a = FieldElement(vec![half(a0), half(a1)]);
                        let b = FieldElement(vec![half(b0), half(b1)]);
                        // (a + b√d)^n via pairs
                        let mul = |x: &(FieldElement, FieldElement), y: &(FieldElement, FieldElement)| {
                            (f.add(&f.mul(&x.0, &y.0), &f.mul(&d, &f.mul(&x.1, &y.1))), f.add(&f.mul(&x.0, &y.1), &f.mul(&x.1, &y.0)))
                        };
                        let x = (a, b);
                        let mut p = x.clone();
                        for _ in 1..60 {
                            p = mul(&p, &x);
                        }
                        if p.0 == f.one() && p.1.is_zero() {
                            count += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(count, roots_of_unity_order(&f, &Extension::Quadratic(d)).unwrap());
    }

    #[test]
    fn delta_factors() {
        let f = q5();
        let r5 = parse_prime(&f, "5").unwrap();
        assert_eq!(delta_t(&f, &Extension::Trivial, &[r5]).unwrap().to_string(), "-4[1]");
        assert_eq!(delta_t(&f, &Extension::Trivial, &[]).unwrap().to_string(), "[1]");
        let i = Extension::Quadratic(f.from_int(-1));
        // −1 is a square in 𝔽₉, but not in 𝔽₁₁
        let three = parse_prime(&f, "3").unwrap();
        assert_eq!(delta_t(&f, &i, std::slice::from_ref(&three)).unwrap().to_string(), "-8[1]");
        let eleven = primes_above(&f, 11).unwrap();
        assert_eq!(delta_t(&f, &i, &eleven[..1]).unwrap().to_string(), "[1]-11[σ]");
        let both = delta_t(&f, &i, &[three.clone(), eleven[0].clone()]).unwrap();
        assert_eq!(both, delta_t(&f, &i, &[three]).unwrap().mul(&delta_t(&f, &i, &eleven[..1]).unwrap()));
    }

    #[test]
    fn theta_vanishes_for_trivial_extension() {
        let f = q5();
        let r5 = parse_prime(&f, "5").unwrap();
        let spec = default_instance(&f, None, &r5, &[]).unwrap();
        let th = stickelberger_theta(&spec, &ThetaOptions::default()).unwrap();
        assert!(th.value.is_zero(), "{}", th.value);
        let rep = verify_congruence(&spec, &ThetaOptions::default()).unwrap();
        assert!(rep.pass());
    }

    #[test]
    fn gaussian_extension_desk_instance() {
        let f = q5();
        let r5 = parse_prime(&f, "5").unwrap();
        let spec = default_instance(&f, Some(f.from_int(-1)), &r5, &[]).unwrap();
        assert_eq!(spec.places.len(), 3);
        let rep = verify_congruence(&spec, &ThetaOptions::default()).unwrap();
        assert!(rep.pass(), "Θ = {}, R = {}", rep.theta.value, rep.regulator.value);
        let alt = stickelberger_theta(&spec, &ThetaOptions { unit_power: 2, base_skip: 1, ..Default::default() }).unwrap();
        assert_eq!(alt.value, rep.theta.value);
    }

    /// Θ(χ) = (1 − χ(𝔮)N𝔮)·L(χ_{d}, 0)·L(χ_{5d}, 0) with L(χ_D, 0) = 2h(D)/w(D).
    #[test]
    fn odd_character_matches_class_numbers() {
        let f = q5();
        let r5 = parse_prime(&f, "5").unwrap();
        // (d, χ(𝔮), L(χ_d,0)·L(χ_5d,0)) for D = −4, −20 and D = −8, −40
        for (d, chi_q, l) in [(-1i64, 1i64, 1i64), (-2, -1, 2)] {
            let spec = default_instance(&f, Some(f.from_int(d)), &r5, &[]).unwrap();
            let th = stickelberger_theta(&spec, &ThetaOptions::default()).unwrap();
            let odd = th.value.coeff(0) - th.value.coeff(1);
            assert_eq!(odd, Rat::from_integer(BigInt::from((1 - 5 * chi_q) * l)), "d = {d}");
        }
    }

    #[test]
    fn hat_instance() {
        let f = q5();
        let spec = HatSpec { field: f.clone(), q: parse_prime(&f, "5").unwrap(), m: vec![1, 2, 3, 4], v0: 0 };
        let rep = verify_hat(&spec, &HatOptions::default()).unwrap();
        assert_eq!(rep.theta.z0, "0");
        assert_eq!(rep.theta.z1, "-1");
        assert_eq!(rep.theta.b0.to_string(), "[(+1,+1)]-[(+1,-1)]");
        assert_eq!(rep.regulator.value.to_string(), "[(+1,+1)]-[(+1,-1)]");
        assert!(rep.equal);
        assert!(!rep.theta.class.is_zero());
    }
}
