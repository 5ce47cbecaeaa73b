//! Locally constant, compactly supported functions on the finite adeles of F,
//! stored as a support lattice 𝔞, a period ideal 𝔪 and a table on 𝔞/𝔞𝔪.

mod product;

pub use product::{
    f_rmw, h_x, make_f_rmw, make_h_x, one_unit_level, subgroup_of_order, unit_representatives, LocalFactor,
    ProductTestFunction,
};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, hnf, Rat};
use crate::error::{Error, Result};
use crate::exactfield::prime::Ideal;
use crate::exactfield::{FieldElement, PrimeIdeal, TotallyRealField};

const TABLE_CAP: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteTestFunction {
    support: Ideal,
    period: Ideal,
    fine: Ideal,
    /// Inverse of the support basis, for coordinates on 𝔞.
    to_coords: Vec<Vec<Rat>>,
    /// 𝔞𝔪 on the basis of 𝔞, upper triangular.
    rel: Vec<Vec<i128>>,
    strides: Vec<usize>,
    table: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealSpec {
    pub den: String,
    pub basis: Vec<Vec<String>>,
}

impl IdealSpec {
    pub fn of(i: &Ideal) -> Self {
        IdealSpec { den: i.den.to_string(), basis: i.basis.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect() }
    }

    pub fn to_ideal(&self) -> Result<Ideal> {
        let den: BigInt = self.den.parse().map_err(|_| Error::Parse(format!("bad denominator {:?}", self.den)))?;
        if !den.is_positive() {
            return Err(Error::Parse("ideal denominator must be positive".into()));
        }
        let rows = self
            .basis
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| x.parse::<BigInt>().map(|v| Rat::new(v, den.clone())).map_err(|_| Error::Parse(format!("bad entry {x:?}"))))
                    .collect::<Result<Vec<Rat>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let n = rows.len();
        Ideal::from_rational_rows(&rows, n)
    }
}

/// Serializable form: the value on each coset of 𝔞/𝔞𝔪, keyed by a representative.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableSpec {
    pub support: IdealSpec,
    pub period: IdealSpec,
    pub entries: Vec<(FieldElement, i64)>,
}

fn to_i128(x: &BigInt) -> Result<i128> {
    x.to_i128().ok_or_else(|| Error::Overflow(format!("{x} does not fit in 128 bits")))
}

fn rat_to_i128(x: &Rat) -> Option<i128> {
    if x.is_integer() {
        x.to_integer().to_i128()
    } else {
        None
    }
}

impl FiniteTestFunction {
    /// Tabulates `rule` on representatives of 𝔞/𝔞𝔪.
    pub fn from_rule<F>(field: &TotallyRealField, support: Ideal, period: Ideal, mut rule: F) -> Result<Self>
    where
        F: FnMut(&FieldElement) -> Result<i64>,
    {
        let mut f = Self::skeleton(field, support, period)?;
        let size = f.size();
        let basis = f.support.basis_elements();
        let mut table = Vec::with_capacity(size);
        for idx in 0..size {
            let r = f.representative_from(&basis, field, idx);
            table.push(rule(&r)?);
        }
        f.table = table;
        Ok(f)
    }

    fn skeleton(field: &TotallyRealField, support: Ideal, period: Ideal) -> Result<Self> {
        if !period.is_integral() {
            return Err(Error::invalid("period ideal must be integral"));
        }
        let n = field.degree();
        let fine = support.mul(&period, field);
        let to_coords = arith::inverse(&support.rational_basis()).ok_or_else(|| Error::Internal("singular lattice".into()))?;
        let mut rows = Vec::new();
        for b in fine.basis_elements() {
            let c = mat_vec(&b.0, &to_coords);
            rows.push(c.iter().map(|x| x.to_integer()).collect::<Vec<BigInt>>());
        }
        let h = hnf(&rows);
        if h.len() != n {
            return Err(Error::Internal("period lattice is not of full rank".into()));
        }
        let rel: Vec<Vec<i128>> = h.iter().map(|r| r.iter().map(to_i128).collect::<Result<_>>()).collect::<Result<_>>()?;
        let mut strides = vec![0usize; n];
        let mut acc: usize = 1;
        for i in 0..n {
            strides[i] = acc;
            let d = usize::try_from(rel[i][i]).map_err(|_| Error::Overflow("period index".into()))?;
            acc = acc.checked_mul(d).filter(|&a| a <= TABLE_CAP).ok_or_else(|| Error::unsupported("test function table is too large"))?;
        }
        Ok(FiniteTestFunction { support, period, fine, to_coords, rel, strides, table: Vec::new() })
    }

    /// Identically zero function with support O and trivial period.
    pub fn zero(field: &TotallyRealField) -> Self {
        Self::from_rule(field, Ideal::unit(field), Ideal::unit(field), |_| Ok(0)).expect("trivial table")
    }

    pub fn from_spec(field: &TotallyRealField, spec: &TableSpec) -> Result<Self> {
        let mut f = Self::skeleton(field, spec.support.to_ideal()?, spec.period.to_ideal()?)?;
        let mut table = vec![None; f.size()];
        for (rep, v) in &spec.entries {
            let idx = f.index_of(rep).ok_or_else(|| Error::invalid(format!("{rep} is not in the support lattice")))?;
            if table[idx].replace(*v).is_some_and(|old| old != *v) {
                return Err(Error::invalid(format!("conflicting values for the coset of {rep}")));
            }
        }
        f.table = table.into_iter().map(|v| v.unwrap_or(0)).collect();
        Ok(f)
    }

    pub fn to_spec(&self, field: &TotallyRealField) -> TableSpec {
        let basis = self.support.basis_elements();
        TableSpec {
            support: IdealSpec::of(&self.support),
            period: IdealSpec::of(&self.period),
            entries: (0..self.size())
                .filter(|&i| self.table[i] != 0)
                .map(|i| (self.representative_from(&basis, field, i), self.table[i]))
                .collect(),
        }
    }

    pub fn support(&self) -> &Ideal {
        &self.support
    }

    pub fn period(&self) -> &Ideal {
        &self.period
    }

    /// 𝔞𝔪.
    pub fn fine_lattice(&self) -> &Ideal {
        &self.fine
    }

    pub fn table(&self) -> &[i64] {
        &self.table
    }

    pub fn size(&self) -> usize {
        self.rel.iter().enumerate().map(|(i, r)| r[i] as usize).product()
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(|&v| v == 0)
    }

    fn representative_from(&self, basis: &[FieldElement], field: &TotallyRealField, idx: usize) -> FieldElement {
        let mut x = field.zero();
        for (i, b) in basis.iter().enumerate() {
            let d = self.rel[i][i] as usize;
            let digit = (idx / self.strides[i]) % d;
            if digit != 0 {
                x = field.add(&x, &b.scale(&Rat::from_integer(BigInt::from(digit))));
            }
        }
        x
    }

    pub fn representative(&self, field: &TotallyRealField, idx: usize) -> FieldElement {
        self.representative_from(&self.support.basis_elements(), field, idx)
    }

    /// Coordinates of x on the basis of 𝔞 when x ∈ 𝔞.
    pub fn support_coordinates(&self, x: &FieldElement) -> Option<Vec<i128>> {
        mat_vec(&x.0, &self.to_coords).iter().map(rat_to_i128).collect()
    }

    /// Rational coordinates on the basis of 𝔞.
    pub fn rational_coordinates(&self, x: &FieldElement) -> Vec<Rat> {
        mat_vec(&x.0, &self.to_coords)
    }

    /// Table index of the coset with the given 𝔞-coordinates.
    pub fn index_of_coords(&self, c: &[i128]) -> usize {
        let mut c = c.to_vec();
        let n = c.len();
        for i in 0..n {
            let d = self.rel[i][i];
            let q = c[i].div_euclid(d);
            if q != 0 {
                for k in i..n {
                    c[k] -= q * self.rel[i][k];
                }
            }
        }
        (0..n).map(|i| c[i] as usize * self.strides[i]).sum()
    }

    pub fn index_of(&self, x: &FieldElement) -> Option<usize> {
        self.support_coordinates(x).map(|c| self.index_of_coords(&c))
    }

    pub fn eval_coords(&self, c: &[i128]) -> i64 {
        self.table[self.index_of_coords(c)]
    }

    pub fn eval(&self, x: &FieldElement) -> i64 {
        self.index_of(x).map_or(0, |i| self.table[i])
    }

    /// (yΦ)(yx) = Φ(x).
    pub fn act(&self, field: &TotallyRealField, y: &FieldElement) -> Result<Self> {
        let yinv = field.inv(y)?;
        let support = self.support.scale(field, y)?;
        Self::from_rule(field, support, self.period.clone(), |z| Ok(self.eval(&field.mul(&yinv, z))))
    }

    /// x ↦ Φ(x − y) for y ∈ 𝔞.
    pub fn translate(&self, field: &TotallyRealField, y: &FieldElement) -> Result<Self> {
        if !self.support.contains(y) {
            return Err(Error::invalid("translation must lie in the support lattice"));
        }
        Self::from_rule(field, self.support.clone(), self.period.clone(), |z| Ok(self.eval(&field.sub(z, y))))
    }

    /// Pointwise integer combination, tabulated on 𝔞₁+𝔞₂ modulo N(𝔞₁+𝔞₂) for an integer N
    /// with N(𝔞₁+𝔞₂) inside every 𝔞_i𝔪_i.
    pub fn combine(field: &TotallyRealField, terms: &[(i64, &FiniteTestFunction)]) -> Result<Self> {
        let Some((_, first)) = terms.first() else {
            return Ok(Self::zero(field));
        };
        let mut support = first.support.clone();
        for (_, f) in &terms[1..] {
            support = support.sum(&f.support);
        }
        let mut level = BigInt::one();
        for (_, f) in terms {
            let inv = arith::inverse(&f.fine.rational_basis()).ok_or_else(|| Error::Internal("singular lattice".into()))?;
            for b in support.basis_elements() {
                for c in mat_vec(&b.0, &inv) {
                    level = level.lcm(c.denom());
                }
            }
        }
        let period = Ideal::from_generators(field, &[field.from_rat(&Rat::from_integer(level))])?;
        Self::from_rule(field, support, period, |z| Ok(terms.iter().map(|(k, f)| k * f.eval(z)).sum()))
    }

    /// Generator w of 𝔞 ∩ ℚu with w a positive multiple of u, on the basis of 𝔞.
    fn line_step(&self, u: &FieldElement) -> Result<(Rat, Vec<i128>)> {
        if u.is_zero() {
            return Err(Error::invalid("direction must be nonzero"));
        }
        let c = self.rational_coordinates(u);
        let den = arith::common_denominator(&c);
        let ints: Vec<BigInt> = c.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect();
        let g = arith::gcd_all(&ints);
        let s = Rat::new(den, g);
        let w: Vec<i128> = c.iter().map(|x| rat_to_i128(&(x * &s)).ok_or_else(|| Error::Overflow("line step".into()))).collect::<Result<_>>()?;
        Ok((s, w))
    }

    /// Smallest K > 0 with K·w ∈ 𝔞𝔪.
    fn order_of(&self, w: &[i128]) -> usize {
        let mut acc = vec![0i128; w.len()];
        for k in 1..=self.size() {
            for (a, b) in acc.iter_mut().zip(w) {
                *a += b;
            }
            if self.index_of_coords(&acc) == 0 {
                return k;
            }
        }
        unreachable!("the quotient is finite")
    }

    /// Sum of Φ over one period of every line x + ℚu.
    pub fn check_u_smooth(&self, u: &FieldElement) -> Result<SmoothnessReport> {
        let (_, w) = self.line_step(u)?;
        let k = self.order_of(&w);
        let n = w.len();
        let mut seen = vec![false; self.size()];
        let mut defects = Vec::new();
        let mut lines = 0;
        for start in 0..self.size() {
            if seen[start] {
                continue;
            }
            lines += 1;
            let mut c = vec![0i128; n];
            for i in 0..n {
                c[i] = ((start / self.strides[i]) % self.rel[i][i] as usize) as i128;
            }
            let mut total = 0i64;
            for _ in 0..k {
                let idx = self.index_of_coords(&c);
                seen[idx] = true;
                total += self.table[idx];
                for (a, b) in c.iter_mut().zip(&w) {
                    *a += b;
                }
            }
            if total != 0 {
                defects.push(LineDefect { coset: start, sum: total });
            }
        }
        Ok(SmoothnessReport { direction: u.clone(), lines, period: k, pass: defects.is_empty(), defects })
    }

    /// Error naming the direction when Φ is not smooth along u.
    pub fn require_smooth(&self, u: &FieldElement) -> Result<()> {
        let r = self.check_u_smooth(u)?;
        if r.pass {
            Ok(())
        } else {
            Err(Error::NotSmooth {
                direction: u.to_string(),
                detail: format!("{} of {} period lines have nonzero sum", r.defects.len(), r.lines),
            })
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LineDefect {
    pub coset: usize,
    pub sum: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmoothnessReport {
    pub direction: FieldElement,
    pub lines: usize,
    pub period: usize,
    pub pass: bool,
    pub defects: Vec<LineDefect>,
}

/// Row vector times matrix.
fn mat_vec(x: &[Rat], m: &[Vec<Rat>]) -> Vec<Rat> {
    let n = m.first().map_or(0, Vec::len);
    (0..n)
        .map(|j| x.iter().zip(m).fold(Rat::zero(), |acc, (a, row)| if a.is_zero() { acc } else { acc + a * &row[j] }))
        .collect()
}

/// Directions allowed for cones: residue at 𝔮 a nonzero element of the prime field.
pub fn check_admissible(field: &TotallyRealField, q: &PrimeIdeal, u: &FieldElement) -> Result<()> {
    let fail = |detail: String| Error::Hypothesis { name: "admissible direction".into(), detail };
    match q.residue(field, u) {
        None => Err(fail(format!("{u} is not integral at {}", q.label))),
        Some(r) if q.kappa.is_zero(&r) => Err(fail(format!("{u} lies in {}", q.label))),
        Some(r) if !q.kappa.in_prime_field(&r) => Err(fail(format!("residue of {u} at {} is outside the prime field", q.label))),
        Some(_) => Ok(()),
    }
}
