//! Config-driven runner behind the `shintani` binary.

pub mod config;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::solomon_hu::{abel_oracle, integrality_report, pairing, AbelBudget};
use crate::suite::{run_suite, SuiteSize};
use crate::theta_reg::{
    gross_regulator, hat_regulator, hat_theta, mu_t_check, stickelberger_theta, verify_congruence, verify_hat, HatOptions, ThetaOptions,
};
pub use config::{Congruence, RunConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Pair,
    Theta,
    Regulator { hat: bool },
    HatTheta,
    Verify,
    Suite(SuiteSize),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Pair => "pair",
            Command::Theta => "theta",
            Command::Regulator { hat: false } => "regulator",
            Command::Regulator { hat: true } => "regulator --hat",
            Command::HatTheta => "hat-theta",
            Command::Verify => "verify",
            Command::Suite(_) => "suite",
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    /// Richardson levels of the Abel oracle.
    pub precision: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<RunConfig>,
    pub result: Value,
    pub verdict: String,
    pub pass: bool,
    pub exit_code: i32,
    pub timings_ms: BTreeMap<String, f64>,
}

impl Report {
    fn new(command: Command, seed: u64, config: Option<RunConfig>) -> Self {
        Report {
            tool: "shintani".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.name().into(),
            seed,
            config,
            result: Value::Null,
            verdict: String::new(),
            pass: false,
            exit_code: 2,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Exit code of an error: 1 for a mathematical violation, 2 for usage or configuration.
pub fn exit_code(e: &Error) -> i32 {
    if e.is_mathematical() {
        1
    } else {
        2
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<Value> {
    serde_json::to_value(x).map_err(|e| Error::Internal(e.to_string()))
}

/// Parses `config_text` (when given), runs `command` and always returns a report.
pub fn run(config_text: Option<&str>, command: Command, ov: Overrides) -> Report {
    let start = Instant::now();
    let parsed = config_text.map(RunConfig::parse).transpose();
    let mut cfg = match parsed {
        Ok(c) => c,
        Err(e) => {
            let mut r = Report::new(command, ov.seed.unwrap_or(1), None);
            fail(&mut r, &e);
            return r;
        }
    };
    if let (Some(c), Some(s)) = (cfg.as_mut(), ov.seed) {
        c.engine.seed = s;
    }
    let seed = cfg.as_ref().map(|c| c.engine.seed).or(ov.seed).unwrap_or(1);
    let mut report = Report::new(command, seed, cfg.clone());
    match dispatch(cfg.as_ref(), command, seed, ov) {
        Ok((result, verdict, pass)) => {
            report.result = result;
            report.verdict = verdict;
            report.pass = pass;
            report.exit_code = if pass { 0 } else { 1 };
        }
        Err(e) => fail(&mut report, &e),
    }
    report.timings_ms.insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
    report
}

fn fail(r: &mut Report, e: &Error) {
    let name = match e {
        Error::Hypothesis { name, .. } => Some(name.clone()),
        _ => None,
    };
    r.result = json!({ "error": e.to_string(), "precondition": name });
    r.verdict = "error".into();
    r.pass = false;
    r.exit_code = exit_code(e);
}

fn need(cfg: Option<&RunConfig>) -> Result<&RunConfig> {
    cfg.ok_or_else(|| Error::Parse("this command needs --config".into()))
}

fn theta_options(cfg: &RunConfig) -> ThetaOptions {
    ThetaOptions { unit_power: cfg.engine.unit_power, base_skip: cfg.engine.base_skip, witnesses: cfg.engine.witnesses, seed: cfg.engine.seed }
}

fn hat_options(cfg: &RunConfig) -> HatOptions {
    HatOptions { base_skip: cfg.engine.base_skip, tilt: cfg.engine.tilt, witnesses: cfg.engine.witnesses, seed: cfg.engine.seed }
}

fn dispatch(cfg: Option<&RunConfig>, command: Command, seed: u64, ov: Overrides) -> Result<(Value, String, bool)> {
    match command {
        Command::Suite(size) => {
            let outcomes = run_suite(seed, size);
            let pass = outcomes.iter().all(|c| c.passed());
            let failed = outcomes.iter().filter(|c| !c.passed()).count();
            Ok((to_value(&outcomes)?, format!("{} of {} suites pass", outcomes.len() - failed, outcomes.len()), pass))
        }
        Command::Pair => {
            let cfg = need(cfg)?;
            let f = cfg.build_field()?;
            let (input, integ) = cfg.pairing_input(&f)?;
            let exact = pairing(&f, &input)?;
            let budget = AbelBudget { levels: ov.precision.unwrap_or(cfg.engine.abel_levels), tolerance: cfg.engine.abel_tolerance };
            let abel = abel_oracle(&f, &input, budget)?;
            let exact_f = crate::arith::to_f64(&exact.value);
            let agrees = !abel.converged || (abel.value - exact_f).abs() <= budget.tolerance.max(abel.error);
            let verdict = integ.map(|(q, full)| integrality_report(&exact.value, q, f.degree() as u32, full));
            let integral = verdict.as_ref().is_none_or(|v| v.weak && v.strong != Some(false));
            let label = match (agrees, integral, abel.converged) {
                (false, _, _) => "oracle mismatch",
                (_, false, _) => "integrality violation",
                (true, true, true) => "computed; oracle agrees",
                (true, true, false) => "computed; oracle did not converge",
            };
            let result = json!({
                "exact": crate::arith::fmt_rat(&exact.value),
                "terms": to_value(&exact.terms)?,
                "float_check": to_value(&abel)?,
                "integrality": to_value(&verdict)?,
            });
            Ok((result, label.into(), agrees && integral))
        }
        Command::Theta => {
            let cfg = need(cfg)?;
            let f = cfg.build_field()?;
            let spec = cfg.instance_spec(&f)?;
            let th = stickelberger_theta(&spec, &theta_options(cfg))?;
            let label = th.value.to_string();
            Ok((to_value(&th)?, label, true))
        }
        Command::Regulator { hat } => {
            let cfg = need(cfg)?;
            let f = cfg.build_field()?;
            if hat {
                let r = hat_regulator(&cfg.hat_spec(&f)?)?;
                let label = r.value.to_string();
                Ok((to_value(&r)?, label, true))
            } else {
                let r = gross_regulator(&cfg.instance_spec(&f)?)?;
                let label = r.value.to_string();
                Ok((to_value(&r)?, label, true))
            }
        }
        Command::HatTheta => {
            let cfg = need(cfg)?;
            let f = cfg.build_field()?;
            let th = hat_theta(&cfg.hat_spec(&f)?, &hat_options(cfg))?;
            let label = th.b0.to_string();
            Ok((to_value(&th)?, label, true))
        }
        Command::Verify => {
            let cfg = need(cfg)?;
            let f = cfg.build_field()?;
            let mu = mu_t_check(&f, &cfg.extension(&f)?, &cfg.t_primes(&f)?)?;
            if !mu.pass {
                return Err(Error::Hypothesis { name: "mu_T_check".into(), detail: mu.detail });
            }
            match cfg.congruence()? {
                Congruence::Hat => {
                    let rep = verify_hat(&cfg.hat_spec(&f)?, &hat_options(cfg))?;
                    let rows: Vec<Vec<String>> = rep.modulus.basis().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                    let result = json!({
                        "value": rep.theta.b0.to_string(),
                        "theta": rep.theta.b0.to_map(),
                        "regulator": rep.regulator.value.to_map(),
                        "quotient": rows,
                        "certificate": to_value(&rep.certificate)?,
                        "details": to_value(&rep)?,
                    });
                    Ok((result, if rep.equal { "equal" } else { "not congruent" }.into(), rep.equal))
                }
                Congruence::Classic => {
                    let rep = verify_congruence(&cfg.instance_spec(&f)?, &theta_options(cfg))?;
                    let rows: Vec<Vec<String>> = rep.modulus.basis().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
                    let verdict = if rep.pass() {
                        "congruent"
                    } else if !rep.equal {
                        "not congruent"
                    } else {
                        "vanishing property fails"
                    };
                    let result = json!({
                        "value": rep.theta.value.to_string(),
                        "theta": rep.theta.value.to_map(),
                        "regulator": rep.regulator.value.to_map(),
                        "quotient": rows,
                        "certificate": to_value(&rep.certificate)?,
                        "details": to_value(&rep)?,
                    });
                    Ok((result, verdict.into(), rep.pass()))
                }
            }
        }
    }
}
