//! Dense univariate polynomials over ℚ, constant term first.

use num_traits::{One, Signed, Zero};

use crate::arith::{rat, sign_of, Rat};

pub type Poly = Vec<Rat>;

pub fn trim(p: &mut Poly) {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &Poly) -> Option<usize> {
    let mut q = p.clone();
    trim(&mut q);
    if q.len() == 1 && q[0].is_zero() || q.is_empty() {
        None
    } else {
        Some(q.len() - 1)
    }
}

pub fn eval(p: &Poly, x: &Rat) -> Rat {
    p.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

pub fn derivative(p: &Poly) -> Poly {
    if p.len() <= 1 {
        return vec![Rat::zero()];
    }
    p.iter().enumerate().skip(1).map(|(i, c)| c * rat(i as i64)).collect()
}

pub fn rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    trim(&mut r);
    let mut b = b.clone();
    trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let f = &r[dr] / &lead;
        for i in 0..=db {
            let t = &f * &b[i];
            r[dr - db + i] -= t;
        }
        r.pop();
        trim(&mut r);
        if r.len() - 1 < db {
            break;
        }
    }
    if r.is_empty() {
        r.push(Rat::zero());
    }
    r
}

pub fn is_zero(p: &Poly) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), derivative(p)];
    loop {
        let n = chain.len();
        if is_zero(&chain[n - 1]) || degree(&chain[n - 1]) == Some(0) {
            break;
        }
        let r = rem(&chain[n - 2], &chain[n - 1]);
        if is_zero(&r) {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain.retain(|q| !is_zero(q));
    chain
}

fn sign_changes(chain: &[Poly], x: &Rat) -> usize {
    let signs: Vec<i32> = chain.iter().map(|q| sign_of(&eval(q, x))).filter(|&s| s != 0).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots in the half-open interval (lo, hi].
pub fn count_roots(chain: &[Poly], lo: &Rat, hi: &Rat) -> usize {
    sign_changes(chain, lo) - sign_changes(chain, hi)
}

/// Bound on the absolute value of every root.
pub fn cauchy_bound(p: &Poly) -> Rat {
    let n = p.len() - 1;
    let lead = p[n].abs();
    let m = p[..n].iter().map(|c| c.abs() / &lead).fold(Rat::zero(), |a, b| if b > a { b } else { a });
    m + Rat::one()
}

/// Disjoint isolating intervals (lo, hi] for all real roots, ascending.
pub fn isolate_real_roots(p: &Poly) -> Vec<(Rat, Rat)> {
    let chain = sturm_chain(p);
    let b = cauchy_bound(p);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let c = count_roots(&chain, &lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push((lo, hi));
            continue;
        }
        let mid = (&lo + &hi) / rat(2);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

pub fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact interval enclosure of p on [lo, hi] via Horner with interval arithmetic.
pub fn eval_interval(p: &Poly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut acc = (Rat::zero(), Rat::zero());
    for c in p.iter().rev() {
        let cands = [&acc.0 * lo, &acc.0 * hi, &acc.1 * lo, &acc.1 * hi];
        let mn = cands.iter().min().unwrap().clone();
        let mx = cands.iter().max().unwrap().clone();
        acc = (mn + c, mx + c);
    }
    acc
}
