//! Outward-rounded f64 intervals for certified sign decisions on logarithms.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::ToPrimitive;

use crate::arith::Rat;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

fn down(x: f64) -> f64 {
    x.next_down()
}

fn up(x: f64) -> f64 {
    x.next_up()
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        assert!(lo <= hi, "empty interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    /// Encloses a rational exactly.
    pub fn from_rat(x: &Rat) -> Self {
        let f = x.to_f64().unwrap_or(f64::NAN);
        Interval { lo: down(f), hi: up(f) }
    }

    pub fn from_rat_bounds(lo: &Rat, hi: &Rat) -> Self {
        let a = lo.to_f64().unwrap_or(f64::NEG_INFINITY);
        let b = hi.to_f64().unwrap_or(f64::INFINITY);
        Interval { lo: down(a), hi: up(b) }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    /// Certified sign, or `None` when the interval straddles zero.
    pub fn sign(&self) -> Option<i32> {
        if self.lo > 0.0 {
            Some(1)
        } else if self.hi < 0.0 {
            Some(-1)
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        if self.lo >= 0.0 {
            *self
        } else if self.hi <= 0.0 {
            -*self
        } else {
            Interval { lo: 0.0, hi: self.hi.max(-self.lo) }
        }
    }

    /// Natural log of a positive interval; widened by a few ulps since `ln` is
    /// not correctly rounded.
    pub fn ln(&self) -> Option<Self> {
        if self.lo <= 0.0 {
            return None;
        }
        let mut lo = self.lo.ln();
        let mut hi = self.hi.ln();
        for _ in 0..4 {
            lo = down(lo);
            hi = up(hi);
        }
        Some(Interval { lo, hi })
    }

    pub fn scale(&self, k: f64) -> Self {
        *self * Interval::point(k)
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo + o.lo), hi: up(self.hi + o.hi) }
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        Interval { lo: down(self.lo - o.hi), hi: up(self.hi - o.lo) }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -self.hi, hi: -self.lo }
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = c.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        Interval { lo: down(lo), hi: up(hi) }
    }
}

/// Determinant by Leibniz expansion; adequate for the small sizes used here.
pub fn det(m: &[Vec<Interval>]) -> Interval {
    let n = m.len();
    if n == 0 {
        return Interval::point(1.0);
    }
    let mut total = Interval::point(0.0);
    let mut perm: Vec<usize> = (0..n).collect();
    permute(&mut perm, 0, &mut |p, sgn| {
        let mut t = Interval::point(sgn as f64);
        for (i, &j) in p.iter().enumerate() {
            t = t * m[i][j];
        }
        total = total + t;
    });
    total
}

fn permute(p: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize], i32)) {
    if k == p.len() {
        let mut sgn = 1;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    sgn = -sgn;
                }
            }
        }
        f(p, sgn);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permute(p, k + 1, f);
        p.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encloses_products_and_logs() {
        let a = Interval::point(2.0);
        let l = a.ln().unwrap();
        assert!(l.lo <= std::f64::consts::LN_2 && std::f64::consts::LN_2 <= l.hi);
        let d = det(&[vec![a, Interval::point(1.0)], vec![Interval::point(1.0), a]]);
        assert!(d.lo <= 3.0 && 3.0 <= d.hi);
        assert_eq!(d.sign(), Some(1));
    }
}
