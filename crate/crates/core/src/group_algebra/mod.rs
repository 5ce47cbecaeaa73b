//! Group rings of finite abelian groups, augmentation-type ideal lattices and
//! congruence classes modulo them.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, fmt_rat, hnf, hnf_reduce, parse_rat, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Labels {
    /// Generator names; "1" for the identity, "σ·τ^2" otherwise.
    Named(Vec<String>),
    /// ∏{±1}, written "(+1,-1)".
    Signs,
}

/// ℤ/n₁ × ⋯ × ℤ/n_k; elements are indices into the mixed-radix enumeration
/// of exponent vectors, first factor fastest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
    labels: Labels,
}

impl FiniteAbelianGroup {
    pub fn new(orders: &[u64], names: &[&str]) -> Result<Self> {
        if orders.contains(&0) || orders.len() != names.len() {
            return Err(Error::invalid("need one positive order per generator name"));
        }
        Ok(FiniteAbelianGroup { orders: orders.to_vec(), labels: Labels::Named(names.iter().map(|s| s.to_string()).collect()) })
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { orders: vec![], labels: Labels::Named(vec![]) }
    }

    /// Gal(K/F) for a quadratic K, generated by σ.
    pub fn galois_quadratic() -> Self {
        FiniteAbelianGroup { orders: vec![2], labels: Labels::Named(vec!["σ".into()]) }
    }

    pub fn signs(n: usize) -> Self {
        FiniteAbelianGroup { orders: vec![2; n], labels: Labels::Signs }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.orders.iter().product::<u64>() as usize
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn exponents(&self, mut g: usize) -> Vec<u64> {
        self.orders
            .iter()
            .map(|&n| {
                let e = g as u64 % n;
                g /= n as usize;
                e
            })
            .collect()
    }

    pub fn from_exponents(&self, e: &[i64]) -> usize {
        let mut idx = 0usize;
        for (k, &n) in self.orders.iter().enumerate().rev() {
            idx = idx * n as usize + e.get(k).copied().unwrap_or(0).rem_euclid(n as i64) as usize;
        }
        idx
    }

    pub fn generator(&self, k: usize) -> usize {
        let mut e = vec![0i64; self.orders.len()];
        e[k] = 1;
        self.from_exponents(&e)
    }

    /// The sign vector (±1 per factor) as an element of `signs(n)`.
    pub fn from_signs(&self, s: &[i32]) -> usize {
        let e: Vec<i64> = s.iter().map(|&x| if x < 0 { 1 } else { 0 }).collect();
        self.from_exponents(&e)
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        let (x, y) = (self.exponents(a), self.exponents(b));
        self.from_exponents(&x.iter().zip(&y).map(|(p, q)| (p + q) as i64).collect::<Vec<_>>())
    }

    pub fn inv(&self, a: usize) -> usize {
        self.from_exponents(&self.exponents(a).iter().map(|&p| -(p as i64)).collect::<Vec<_>>())
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order()
    }

    /// Subgroup generated by `gens`, in enumeration order.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut list = vec![0];
        let mut i = 0;
        while i < list.len() {
            for &g in gens {
                let h = self.mul(list[i], g);
                if !inside[h] {
                    inside[h] = true;
                    list.push(h);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    pub fn label(&self, g: usize) -> String {
        let e = self.exponents(g);
        match &self.labels {
            Labels::Signs => format!("({})", e.iter().map(|&x| if x == 0 { "+1" } else { "-1" }).collect::<Vec<_>>().join(",")),
            Labels::Named(names) => {
                let parts: Vec<String> = e
                    .iter()
                    .zip(names)
                    .filter(|(&x, _)| x != 0)
                    .map(|(&x, n)| if x == 1 { n.clone() } else { format!("{n}^{x}") })
                    .collect();
                if parts.is_empty() {
                    "1".into()
                } else {
                    parts.join("·")
                }
            }
        }
    }

    pub fn parse_label(&self, s: &str) -> Result<usize> {
        let s = s.trim().replace('−', "-");
        self.elements().find(|&g| self.label(g) == s).ok_or_else(|| Error::Parse(format!("unknown group element {s}")))
    }
}

/// Σ c_g [g] with rational coefficients; dense over the group enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupRingElement {
    group: FiniteAbelianGroup,
    coeffs: Vec<Rat>,
}

impl GroupRingElement {
    pub fn zero(g: &FiniteAbelianGroup) -> Self {
        GroupRingElement { group: g.clone(), coeffs: vec![Rat::zero(); g.order()] }
    }

    pub fn basis(g: &FiniteAbelianGroup, x: usize) -> Self {
        let mut e = Self::zero(g);
        e.coeffs[x] = Rat::one();
        e
    }

    pub fn one(g: &FiniteAbelianGroup) -> Self {
        Self::basis(g, g.identity())
    }

    /// [x] − 1
    pub fn minus_one(g: &FiniteAbelianGroup, x: usize) -> Self {
        Self::basis(g, x).sub(&Self::one(g))
    }

    pub fn from_int(g: &FiniteAbelianGroup, n: i64) -> Self {
        Self::one(g).scale(&Rat::from_integer(n.into()))
    }

    pub fn from_coeffs(g: &FiniteAbelianGroup, coeffs: Vec<Rat>) -> Result<Self> {
        if coeffs.len() != g.order() {
            return Err(Error::invalid("coefficient vector has the wrong length"));
        }
        Ok(GroupRingElement { group: g.clone(), coeffs })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, x: usize) -> &Rat {
        &self.coeffs[x]
    }

    pub fn add(&self, o: &Self) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, k: &Rat) -> Self {
        GroupRingElement { group: self.group.clone(), coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero(&self.group);
        for (a, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (b, cb) in o.coeffs.iter().enumerate() {
                if !cb.is_zero() {
                    out.coeffs[self.group.mul(a, b)] += ca * cb;
                }
            }
        }
        out
    }

    pub fn augmentation(&self) -> Rat {
        self.coeffs.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>> {
        if !self.is_integral() {
            return Err(Error::invalid(format!("group ring element {self} has non-integral coefficients")));
        }
        Ok(self.coeffs.iter().map(|c| c.to_integer()).collect())
    }

    /// Image under the homomorphism on groups sending g ↦ map(g).
    pub fn push_forward(&self, target: &FiniteAbelianGroup, map: impl Fn(usize) -> usize) -> Self {
        let mut out = Self::zero(target);
        for (g, c) in self.coeffs.iter().enumerate() {
            out.coeffs[map(g)] += c;
        }
        out
    }

    /// Label → coefficient string, zero coefficients omitted.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(g, c)| (self.group.label(g), fmt_rat(c))).collect()
    }

    pub fn from_map(g: &FiniteAbelianGroup, m: &BTreeMap<String, String>) -> Result<Self> {
        let mut out = Self::zero(g);
        for (k, v) in m {
            out.coeffs[g.parse_label(k)?] += parse_rat(v)?;
        }
        Ok(out)
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (g, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let k = if mag.is_one() { String::new() } else { fmt_rat(&mag) };
            write!(f, "{sign}{k}[{}]", self.group.label(g))?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_map().serialize(s)
    }
}

/// Sub-lattice of ℤ[G] ≅ ℤ^{|G|} with a Hermite basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl Lattice {
    pub fn span(dim: usize, rows: &[Vec<BigInt>]) -> Self {
        Lattice { dim, basis: hnf(rows) }
    }

    pub fn full(dim: usize) -> Self {
        let rows: Vec<Vec<BigInt>> = (0..dim).map(|i| (0..dim).map(|j| BigInt::from((i == j) as i32)).collect()).collect();
        Lattice { dim, basis: rows }
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn sum(&self, o: &Lattice) -> Lattice {
        let rows: Vec<Vec<BigInt>> = self.basis.iter().chain(&o.basis).cloned().collect();
        Lattice::span(self.dim, &rows)
    }

    pub fn scale(&self, k: i64) -> Lattice {
        let rows: Vec<Vec<BigInt>> = self.basis.iter().map(|r| r.iter().map(|x| x * k).collect()).collect();
        Lattice::span(self.dim, &rows)
    }

    /// Canonical remainder and multipliers, v = remainder + Σ c_i b_i.
    pub fn reduce(&self, v: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        hnf_reduce(&self.basis, v)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).0.iter().all(Zero::is_zero)
    }

    pub fn is_subset_of(&self, o: &Lattice) -> bool {
        self.basis.iter().all(|r| o.contains(r))
    }

    /// [o : self] for a sub-lattice of equal rank.
    pub fn index_in(&self, o: &Lattice) -> Result<BigInt> {
        if self.rank() != o.rank() || !self.is_subset_of(o) {
            return Err(Error::invalid("index needs a sub-lattice of equal rank"));
        }
        let rows: Vec<Vec<BigInt>> = self.basis.iter().map(|r| o.reduce(r).1).collect();
        Ok(arith::int_determinant(&rows).abs())
    }
}

/// Elementary ideals of ℤ[G]; products of these are the moduli.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum IdealFactor {
    /// I = ker(ℤ[G] → ℤ)
    Augmentation,
    /// I_U = ker(ℤ[G] → ℤ[G/U]) for U generated by the listed elements.
    Relative(Vec<usize>),
    /// n·ℤ[G]
    Integer(i64),
}

fn ring_lattice_mul(g: &FiniteAbelianGroup, a: &Lattice, b: &Lattice) -> Lattice {
    let n = g.order();
    let mut rows = Vec::with_capacity(a.rank() * b.rank());
    for x in &a.basis {
        let ex = GroupRingElement { group: g.clone(), coeffs: x.iter().map(|c| Rat::from_integer(c.clone())).collect() };
        for y in &b.basis {
            let ey = GroupRingElement { group: g.clone(), coeffs: y.iter().map(|c| Rat::from_integer(c.clone())).collect() };
            rows.push(ex.mul(&ey).coeffs.iter().map(|c| c.to_integer()).collect());
        }
    }
    Lattice::span(n, &rows)
}

pub fn factor_lattice(g: &FiniteAbelianGroup, f: &IdealFactor) -> Lattice {
    let n = g.order();
    let rel = |gens: &[usize]| {
        let rows: Vec<Vec<BigInt>> = g
            .elements()
            .flat_map(|h| {
                gens.iter().map(move |&u| {
                    let mut r = vec![BigInt::zero(); n];
                    r[g.mul(h, u)] += 1;
                    r[h] -= 1;
                    r
                })
            })
            .collect();
        Lattice::span(n, &rows)
    };
    match f {
        IdealFactor::Augmentation => rel(&(0..g.orders.len()).map(|k| g.generator(k)).collect::<Vec<_>>()),
        IdealFactor::Relative(gens) => rel(gens),
        IdealFactor::Integer(k) => Lattice::full(n).scale(*k),
    }
}

/// Hermite basis of the product of the listed ideals; the empty product is ℤ[G].
pub fn ideal_lattice(g: &FiniteAbelianGroup, factors: &[IdealFactor]) -> Lattice {
    factors.iter().fold(Lattice::full(g.order()), |acc, f| ring_lattice_mul(g, &acc, &factor_lattice(g, f)))
}

pub fn product_lattice(g: &FiniteAbelianGroup, a: &Lattice, b: &Lattice) -> Lattice {
    ring_lattice_mul(g, a, b)
}

/// x modulo a lattice, with its canonical normal form.
#[derive(Clone, Debug, Serialize)]
pub struct AugClass {
    pub representative: GroupRingElement,
    #[serde(serialize_with = "ser_rows")]
    pub modulus: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "ser_row")]
    pub normal_form: Vec<BigInt>,
}

fn ser_row<S: serde::Serializer>(r: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    r.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
}

fn ser_rows<S: serde::Serializer>(r: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    r.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>().serialize(s)
}

impl PartialEq for AugClass {
    fn eq(&self, o: &Self) -> bool {
        self.modulus == o.modulus && self.normal_form == o.normal_form
    }
}

impl AugClass {
    pub fn is_zero(&self) -> bool {
        self.normal_form.iter().all(Zero::is_zero)
    }

    /// The canonical representative as a group ring element.
    pub fn normal_element(&self) -> GroupRingElement {
        GroupRingElement {
            group: self.representative.group.clone(),
            coeffs: self.normal_form.iter().map(|c| Rat::from_integer(c.clone())).collect(),
        }
    }
}

pub fn reduce_mod(x: &GroupRingElement, lattice: &Lattice) -> Result<AugClass> {
    let v = x.integer_coeffs()?;
    let (nf, _) = lattice.reduce(&v);
    Ok(AugClass { representative: x.clone(), modulus: lattice.basis.clone(), normal_form: nf })
}

/// Multipliers c with x − y = Σ c_i b_i, verified by back-substitution.
#[derive(Clone, Debug, Serialize)]
pub struct MembershipCertificate {
    #[serde(serialize_with = "ser_row")]
    pub multipliers: Vec<BigInt>,
    pub verified: bool,
}

pub fn membership(x: &GroupRingElement, lattice: &Lattice) -> Result<Option<MembershipCertificate>> {
    let v = x.integer_coeffs()?;
    let (rem, mult) = lattice.reduce(&v);
    if rem.iter().any(|c| !c.is_zero()) {
        return Ok(None);
    }
    let mut back = vec![BigInt::zero(); v.len()];
    for (c, b) in mult.iter().zip(&lattice.basis) {
        for (t, bi) in back.iter_mut().zip(b) {
            *t += c * bi;
        }
    }
    Ok(Some(MembershipCertificate { verified: back == v, multipliers: mult }))
}

/// Laplace expansion along the first row.
pub fn det(m: &[Vec<GroupRingElement>], g: &FiniteAbelianGroup) -> GroupRingElement {
    let r = m.len();
    if r == 0 {
        return GroupRingElement::one(g);
    }
    let mut out = GroupRingElement::zero(g);
    for j in 0..r {
        let minor: Vec<Vec<GroupRingElement>> =
            m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect()).collect();
        let t = m[0][j].mul(&det(&minor, g));
        out = if j % 2 == 0 { out.add(&t) } else { out.sub(&t) };
    }
    out
}

/// Σ_π sgn(π) ∏ m[i][π(i)].
pub fn det_leibniz(m: &[Vec<GroupRingElement>], g: &FiniteAbelianGroup) -> GroupRingElement {
    fn perms(k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(k - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k - 1);
                out.push(q);
            }
        }
        out
    }
    let r = m.len();
    let mut out = GroupRingElement::zero(g);
    for p in perms(r) {
        let inversions = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
        let t = (0..r).fold(GroupRingElement::one(g), |acc, i| acc.mul(&m[i][p[i]]));
        out = if inversions % 2 == 0 { out.add(&t) } else { out.sub(&t) };
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DetRedVerdict {
    pub lhs: GroupRingElement,
    pub rhs: GroupRingElement,
    pub pass: bool,
    pub certificate: Option<MembershipCertificate>,
}

/// Compares det(−1 + ∏_{s≥j}[a_{i,s}]) with det(−1 + [a_{i,j}]) modulo (Σ_j I_j)·∏_j I_j,
/// where a_{i,j} lies in the subgroup U_j and I_j = I_{U_j}.
pub fn detred_congruence_check(g: &FiniteAbelianGroup, subgroups: &[Vec<usize>], images: &[Vec<usize>]) -> Result<DetRedVerdict> {
    let r = subgroups.len();
    if images.len() != r || images.iter().any(|row| row.len() != r) {
        return Err(Error::invalid("need an r×r matrix of images"));
    }
    for row in images {
        for (j, &a) in row.iter().enumerate() {
            if !g.subgroup(&subgroups[j]).contains(&a) {
                return Err(Error::invalid(format!("image {} is outside subgroup {j}", g.label(a))));
            }
        }
    }
    let full: Vec<Vec<GroupRingElement>> = images
        .iter()
        .map(|row| (0..r).map(|j| GroupRingElement::minus_one(g, row[j..].iter().fold(g.identity(), |acc, &x| g.mul(acc, x)))).collect())
        .collect();
    let diag: Vec<Vec<GroupRingElement>> = images.iter().map(|row| row.iter().map(|&x| GroupRingElement::minus_one(g, x)).collect()).collect();
    let lhs = det(&full, g);
    let rhs = det(&diag, g);
    let parts: Vec<Lattice> = subgroups.iter().map(|s| factor_lattice(g, &IdealFactor::Relative(s.clone()))).collect();
    let sum = parts.iter().fold(Lattice::span(g.order(), &[]), |acc, l| acc.sum(l));
    let modulus = parts.iter().fold(sum, |acc, l| product_lattice(g, &acc, l));
    let certificate = membership(&lhs.sub(&rhs), &modulus)?;
    Ok(DetRedVerdict { pass: certificate.as_ref().is_some_and(|c| c.verified), lhs, rhs, certificate })
}
