//! TOML run configuration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::adelic::{make_f_rmw, make_h_x, FiniteTestFunction, TableSpec};
use crate::cones::ConeChain;
use crate::error::{Error, Result};
use crate::exactfield::prime::parse_prime;
use crate::exactfield::{FieldElement, Place, PrimeIdeal, TotallyRealField};
use crate::solomon_hu::PairingInput;
use crate::theta_reg::{Extension, HatSpec, InstanceSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub field: FieldConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairing: Option<PairingConfig>,
    #[serde(default)]
    pub engine: EngineConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    /// Monic minimal polynomial, constant term first.
    pub poly: Vec<i64>,
    /// Embedding j is the real root with ascending index place_order[j].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place_order: Option<Vec<usize>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Congruence {
    /// Θ_{S,T,K} ≡ R_{G,S,T}
    Classic,
    /// b₀ ≡ R̂_𝔮 over N_eff
    Hat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub v0: String,
    /// S, as place labels ("inf0", "inf1", "2", "7:3").
    pub places: Vec<String>,
    #[serde(default)]
    pub t: Vec<String>,
    /// K = F(√d); absent means K = F.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<Vec<String>>,
    /// Smoothing prime, defaulting to the first prime of T.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<String>,
    /// M ⊆ 𝔽_𝔮^×, defaulting to all of it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<Vec<u64>>,
    /// Level c of J_v = 1 + 𝔭^c per finite place of S.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub j_levels: BTreeMap<String, u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub congruence: Option<Congruence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainTermConfig {
    pub coeff: i64,
    pub generators: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestFunctionConfig {
    HX { q: String, x: u64 },
    FRmw {
        q: String,
        m: Vec<u64>,
        #[serde(default)]
        s: Vec<String>,
        #[serde(default)]
        r: Vec<String>,
        #[serde(default)]
        w: Vec<String>,
    },
    Table { table: TableSpec },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingConfig {
    pub chain: Vec<ChainTermConfig>,
    pub phi: TestFunctionConfig,
    #[serde(default)]
    pub split: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub admissible: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EngineConfig {
    pub seed: u64,
    pub witnesses: usize,
    pub unit_power: u32,
    pub base_skip: usize,
    pub tilt: i64,
    pub refinement_cap: usize,
    pub abel_levels: usize,
    pub abel_tolerance: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig { seed: 1, witnesses: 20, unit_power: 1, base_skip: 0, tilt: -1, refinement_cap: 4000, abel_levels: 8, abel_tolerance: 1e-6 }
    }
}

fn element(field: &TotallyRealField, v: &[String]) -> Result<FieldElement> {
    if v.len() != field.degree() {
        return Err(Error::Parse(format!("field element {v:?} needs {} coordinates", field.degree())));
    }
    FieldElement::parse(v)
}

fn primes(field: &TotallyRealField, labels: &[String]) -> Result<Vec<PrimeIdeal>> {
    labels.iter().map(|s| parse_prime(field, s)).collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<RunConfig> {
        toml::from_str(text).map_err(|e| Error::Parse(e.message().to_string()))
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Internal(e.to_string()))
    }

    pub fn build_field(&self) -> Result<TotallyRealField> {
        let mut f = TotallyRealField::new(&self.field.poly)?.with_refinement_cap(self.engine.refinement_cap);
        if let Some(order) = &self.field.place_order {
            f = f.with_place_order(order)?;
        }
        Ok(f)
    }

    pub fn instance(&self) -> Result<&InstanceConfig> {
        self.instance.as_ref().ok_or_else(|| Error::Parse("missing [instance] section".into()))
    }

    pub fn extension(&self, field: &TotallyRealField) -> Result<Extension> {
        Ok(match &self.instance()?.d {
            None => Extension::Trivial,
            Some(d) => Extension::Quadratic(element(field, d)?),
        })
    }

    pub fn t_primes(&self, field: &TotallyRealField) -> Result<Vec<PrimeIdeal>> {
        primes(field, &self.instance()?.t)
    }

    fn smoothing_prime(&self, field: &TotallyRealField) -> Result<PrimeIdeal> {
        let inst = self.instance()?;
        match (&inst.q, inst.t.first()) {
            (Some(q), _) => parse_prime(field, q),
            (None, Some(q)) => parse_prime(field, q),
            (None, None) => Err(Error::Parse("no smoothing prime: set q or a nonempty T".into())),
        }
    }

    /// S with v₀ moved to the front.
    fn places(&self, field: &TotallyRealField) -> Result<Vec<Place>> {
        let inst = self.instance()?;
        let v0 = Place::parse(field, &inst.v0)?;
        let mut s: Vec<Place> = inst.places.iter().map(|p| Place::parse(field, p)).collect::<Result<_>>()?;
        let i = s.iter().position(|p| *p == v0).ok_or_else(|| Error::Parse(format!("v0 = {} is not in S", inst.v0)))?;
        let v = s.remove(i);
        s.insert(0, v);
        Ok(s)
    }

    pub fn congruence(&self) -> Result<Congruence> {
        let inst = self.instance()?;
        Ok(inst.congruence.unwrap_or(if inst.d.is_none() { Congruence::Hat } else { Congruence::Classic }))
    }

    pub fn instance_spec(&self, field: &TotallyRealField) -> Result<InstanceSpec> {
        let inst = self.instance()?;
        let j_levels = inst.j_levels.iter().map(|(p, c)| Ok((parse_prime(field, p)?, *c))).collect::<Result<_>>()?;
        let spec = InstanceSpec {
            field: field.clone(),
            places: self.places(field)?,
            t: self.t_primes(field)?,
            extension: self.extension(field)?,
            q: self.smoothing_prime(field)?,
            j_levels,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn hat_spec(&self, field: &TotallyRealField) -> Result<HatSpec> {
        let inst = self.instance()?;
        if inst.d.is_some() {
            return Err(Error::Parse("the hat congruence takes K = F".into()));
        }
        let places = self.places(field)?;
        let v0 = match places[0] {
            Place::Real(j) => j,
            _ => return Err(Error::Parse("v0 must be a real place for the hat congruence".into())),
        };
        if places.len() != field.degree() || places.iter().any(|p| !p.is_real()) {
            return Err(Error::Parse("the hat congruence takes S = S_∞".into()));
        }
        let q = self.smoothing_prime(field)?;
        if self.t_primes(field)? != vec![q.clone()] {
            return Err(Error::Parse("the hat congruence takes T = {q}".into()));
        }
        let m = inst.m.clone().unwrap_or_else(|| (1..q.p).collect());
        Ok(HatSpec { field: field.clone(), q, m, v0 })
    }

    pub fn pairing_input(&self, field: &TotallyRealField) -> Result<(PairingInput, Option<(u64, bool)>)> {
        let p = self.pairing.as_ref().ok_or_else(|| Error::Parse("missing [pairing] section".into()))?;
        let mut chain = ConeChain::new();
        for t in &p.chain {
            let gens: Vec<FieldElement> = t.generators.iter().map(|g| element(field, g)).collect::<Result<_>>()?;
            chain.add_term(t.coeff, &gens)?;
        }
        let (phi, integrality): (FiniteTestFunction, _) = match &p.phi {
            TestFunctionConfig::HX { q, x } => (make_h_x(field, &parse_prime(field, q)?, *x)?, None),
            TestFunctionConfig::FRmw { q, m, s, r, w } => {
                let qp = parse_prime(field, q)?;
                let full = m.len() as u64 + 1 == qp.norm();
                let phi = make_f_rmw(field, &qp, m, &primes(field, s)?, &primes(field, r)?, &primes(field, w)?)?;
                let plain = s.is_empty();
                (phi, plain.then_some((qp.norm(), full)))
            }
            TestFunctionConfig::Table { table } => (FiniteTestFunction::from_spec(field, table)?, None),
        };
        let admissible = p.admissible.as_ref().map(|q| parse_prime(field, q)).transpose()?;
        let split = if p.split.is_empty() { (0..field.degree()).collect() } else { p.split.clone() };
        Ok((PairingInput { chain, phi, split, admissible }, integrality))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
[field]
poly = [-1, -1, 1]
place_order = [1, 0]

[instance]
v0 = "inf0"
places = ["inf0", "inf1"]
t = ["5"]
congruence = "hat"

[pairing]
split = [0, 1]
admissible = "5"
chain = [{ coeff = 1, generators = [["1", "0"]] }, { coeff = 1, generators = [["1", "0"], ["1", "1"]] }]
phi = { kind = "f_rmw", q = "5", m = [1, 2, 3, 4] }

[engine]
seed = 7
"#;

    #[test]
    fn round_trip() {
        let cfg = RunConfig::parse(SAMPLE).unwrap();
        assert_eq!(cfg.engine.seed, 7);
        assert_eq!(cfg.engine.witnesses, 20);
        let again = RunConfig::parse(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(again, cfg);
        let f = cfg.build_field().unwrap();
        assert_eq!(cfg.hat_spec(&f).unwrap().m, vec![1, 2, 3, 4]);
        let (input, integ) = cfg.pairing_input(&f).unwrap();
        assert_eq!(input.chain.len(), 2);
        assert_eq!(integ, Some((5, true)));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = SAMPLE.replace("seed = 7", "seed = 7\nsed = 1");
        assert!(matches!(RunConfig::parse(&bad), Err(Error::Parse(_))));
        let bad = SAMPLE.replace("q = \"5\", m", "q = \"5\", extra = 1, m");
        assert!(RunConfig::parse(&bad).is_err());
        assert!(RunConfig::parse("[field]\npoly = \"x\"").is_err());
    }

    #[test]
    fn v0_is_moved_first() {
        let text = SAMPLE.replace("v0 = \"inf0\"", "v0 = \"inf1\"").replace("congruence = \"hat\"", "d = [\"-1\", \"0\"]\nplaces_extra = 1");
        assert!(RunConfig::parse(&text).is_err());
        let text = SAMPLE
            .replace("v0 = \"inf0\"", "v0 = \"inf1\"")
            .replace("places = [\"inf0\", \"inf1\"]", "places = [\"inf0\", \"inf1\", \"2\"]")
            .replace("congruence = \"hat\"", "d = [\"-1\", \"0\"]");
        let cfg = RunConfig::parse(&text).unwrap();
        let f = cfg.build_field().unwrap();
        let spec = cfg.instance_spec(&f).unwrap();
        assert_eq!(spec.places[0], Place::Real(1));
        assert_eq!(cfg.congruence().unwrap(), Congruence::Classic);
    }
}
