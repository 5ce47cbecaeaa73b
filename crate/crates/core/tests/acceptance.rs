//! One line per acceptance criterion, each checked at its stated tolerance and time budget.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shintani::adelic::FiniteTestFunction;
use shintani::arith::{rat, ratio, Rat};
use shintani::cones::ConeChain;
use shintani::exactfield::prime::{parse_prime, primes_above, Ideal};
use shintani::exactfield::{FieldElement, TotallyRealField};
use shintani::solomon_hu::{abel_oracle, pairing, AbelBudget, PairingInput};
use shintani::suite::{self, q_sqrt5, CheckOutcome};
use shintani::theta_reg::{
    default_instance, hat_regulator, hat_theta, verify_congruence, verify_hat, HatOptions, HatSpec, ThetaOptions,
};

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
    budget: Duration,
}

fn criterion(id: u32, name: &'static str, budget_s: u64, body: impl FnOnce() -> Result<String, String>) -> Line {
    let start = Instant::now();
    let res = body();
    let elapsed = start.elapsed();
    let budget = Duration::from_secs(budget_s);
    let (pass, detail) = match res {
        Ok(d) => (elapsed <= budget, d),
        Err(d) => (false, d),
    };
    Line { id, name, pass, detail, elapsed, budget }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn outcomes(cs: &[CheckOutcome]) -> Result<String, String> {
    let mut parts = Vec::new();
    for c in cs {
        ensure(c.passed(), || format!("{} failed {} of {}: {:?}", c.name, c.failures.len(), c.trials, &c.failures[..c.failures.len().min(3)]))?;
        parts.push(format!("{} {}/{}", c.name, c.trials, c.trials));
    }
    Ok(parts.join(", "))
}

fn golden_hat_spec() -> HatSpec {
    let f = q_sqrt5();
    HatSpec { q: parse_prime(&f, "5").unwrap(), field: f, m: vec![1, 2, 3, 4], v0: 0 }
}

fn worked_example() -> Result<String, String> {
    let spec = golden_hat_spec();
    let f = &spec.field;
    let e = |x: shintani::Error| x.to_string();
    let eps = f.theta();
    let eps2 = f.mul(&eps, &eps);
    let th = hat_theta(&spec, &HatOptions::default()).map_err(e)?;
    let want_d0 = vec![(1, vec![f.one()]), (1, vec![f.one(), eps2.clone()])];
    ensure(th.d0 == want_d0, || format!("D₀ = {:?}", th.d0))?;
    let reg = hat_regulator(&spec).map_err(e)?;
    let u = f.neg(&f.inv(&eps2).map_err(e)?);
    ensure(reg.unit == u, || format!("u = {}", reg.unit))?;
    let target = "[(+1,+1)]-[(+1,-1)]";
    ensure(th.b0.to_string() == target, || format!("hat-theta = {}", th.b0))?;
    ensure(reg.value.to_string() == target, || format!("regulator --hat = {}", reg.value))?;
    let rep = verify_hat(&spec, &HatOptions::default()).map_err(e)?;
    ensure(rep.equal && !rep.theta.class.is_zero(), || "classes differ in I_{v1}/I_H I_{v1}".into())?;
    Ok(format!("D0 = [1]+[1,e^2], u = -e^-2, hat-theta = regulator --hat = {target}, equal in I_v1/I_H I_v1"))
}

fn pairing_constants() -> Result<String, String> {
    let th = hat_theta(&golden_hat_spec(), &HatOptions::default()).map_err(|x| x.to_string())?;
    ensure(th.z0 == "0" && th.z1 == "-1", || format!("Z0 = {}, Z1 = {}", th.z0, th.z1))?;
    Ok("Z0 = 0, Z1 = -1".into())
}

fn hurwitz() -> Result<String, String> {
    let f = TotallyRealField::new(&[-3, 1]).unwrap();
    let five = Ideal::from_generators(&f, &[f.from_int(5)]).unwrap();
    let phi = FiniteTestFunction::from_rule(&f, Ideal::unit(&f), five, |x| {
        let r = x.0[0].to_integer().mod_floor(&BigInt::from(5));
        Ok(if r.is_one() {
            1
        } else if r.is_zero() {
            -1
        } else {
            0
        })
    })
    .map_err(|x| x.to_string())?;
    let input = PairingInput { chain: ConeChain::symbol(&[f.one()]).unwrap(), phi, split: vec![0], admissible: None };
    let v = pairing(&f, &input).map_err(|x| x.to_string())?.value;
    let oracle: Rat = (ratio(1, 2) - ratio(1, 5)) - (ratio(1, 2) - rat(1));
    ensure(v == oracle && v == ratio(4, 5), || format!("ϖ = {v}"))?;
    let a = abel_oracle(&f, &input, AbelBudget::default()).map_err(|x| x.to_string())?;
    ensure(a.converged && (a.value - 0.8).abs() < 1e-6, || format!("abel = {} ± {}", a.value, a.error))?;
    Ok(format!("varpi = 4/5 = zeta(0,1/5) - zeta(0,1), abel = {:.9}", a.value))
}

fn congruences() -> Result<String, String> {
    let c = suite::stickelberger_congruences(usize::MAX);
    outcomes(std::slice::from_ref(&c))?;
    ensure(c.trials >= 6, || "fewer than three d per field".into())?;
    // an additional T-prime enters through δ_T
    let f = q_sqrt5();
    let q = parse_prime(&f, "5").unwrap();
    let extra = primes_above(&f, 11).unwrap();
    let spec = default_instance(&f, Some(FieldElement::from_ints(&[-1, 0])), &q, &extra[..1]).map_err(|x| x.to_string())?;
    let rep = verify_congruence(&spec, &ThetaOptions::default()).map_err(|x| x.to_string())?;
    ensure(rep.pass(), || format!("T = {{5, 11}}: Θ = {}, R = {}", rep.theta.value, rep.regulator.value))?;
    Ok(format!("{} instances over Q(sqrt5), Q(sqrt2) plus T = {{(sqrt5), 11}}: Theta = R mod I_GH prod I_Gv, Theta in prod I_Gv, 2 Theta in modulus", c.trials))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    let lines = vec![
        criterion(1, "worked example end to end", 10, worked_example),
        criterion(2, "worked example pairing constants", 5, pairing_constants),
        criterion(3, "Hurwitz cross-oracle", 1, hurwitz),
        criterion(4, "integrality suites", 60, || outcomes(&[suite::integrality(50, &mut rng)])),
        criterion(5, "tiling property", 30, || {
            outcomes(&[suite::tiling("Q(sqrt5)", &q_sqrt5(), 1000, &mut rng), suite::tiling("Q(sqrt2)", &suite::q_sqrt2(), 1000, &mut rng)])
        }),
        criterion(6, "cone-calculus battery", 60, || {
            outcomes(&[
                suite::hill_identity(200, &mut rng),
                suite::psi_kernel(100, &mut rng),
                suite::psi_is_phi_of_boundary(50, &mut rng),
                suite::fill_independence(50, &mut rng),
            ])
        }),
        criterion(7, "Stickelberger congruence instances", 300, congruences),
        criterion(8, "well-definedness of varpi", 60, || outcomes(&[suite::well_definedness(100, &mut rng)])),
    ];
    let mut failed = 0;
    for l in &lines {
        let tag = if l.pass { "PASS" } else { "FAIL" };
        println!(
            "[{tag}] criterion {}: {} ({:.2}s of {}s): {}",
            l.id,
            l.name,
            l.elapsed.as_secs_f64(),
            l.budget.as_secs(),
            l.detail
        );
        if !l.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {} failed", lines.len() - failed, failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
