//! Residue fields F_p and F_p[t]/(t² + c₁t + c₀) of small characteristic.

use crate::arith::mod_pow;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueField {
    pub p: u64,
    pub f: u32,
    /// Modulus t² + c1·t + c0 when f = 2.
    c0: u64,
    c1: u64,
}

/// Element a + b·t (b = 0 when f = 1).
pub type Fq = [u64; 2];

impl ResidueField {
    pub fn prime(p: u64) -> Self {
        ResidueField { p, f: 1, c0: 0, c1: 0 }
    }

    pub fn quadratic(p: u64, c0: u64, c1: u64) -> Self {
        ResidueField { p, f: 2, c0: c0 % p, c1: c1 % p }
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.f)
    }

    pub fn zero(&self) -> Fq {
        [0, 0]
    }

    pub fn one(&self) -> Fq {
        [1 % self.p, 0]
    }

    pub fn from_u64(&self, a: u64) -> Fq {
        [a % self.p, 0]
    }

    pub fn is_zero(&self, x: &Fq) -> bool {
        x[0] == 0 && x[1] == 0
    }

    pub fn add(&self, x: &Fq, y: &Fq) -> Fq {
        [(x[0] + y[0]) % self.p, (x[1] + y[1]) % self.p]
    }

    pub fn neg(&self, x: &Fq) -> Fq {
        [(self.p - x[0]) % self.p, (self.p - x[1]) % self.p]
    }

    pub fn sub(&self, x: &Fq, y: &Fq) -> Fq {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &Fq, y: &Fq) -> Fq {
        let p = self.p as u128;
        let (a, b, c, d) = (x[0] as u128, x[1] as u128, y[0] as u128, y[1] as u128);
        if self.f == 1 {
            return [((a * c) % p) as u64, 0];
        }
        // (a + bt)(c + dt) = ac + (ad + bc)t + bd t², t² = −c1 t − c0
        let bd = (b * d) % p;
        let c0 = self.c0 as u128;
        let c1 = self.c1 as u128;
        let r0 = (a * c + (p - (bd * c0) % p)) % p;
        let r1 = ((a * d + b * c) % p + (p - (bd * c1) % p)) % p;
        [r0 as u64, r1 as u64]
    }

    pub fn pow(&self, x: &Fq, mut e: u64) -> Fq {
        let mut acc = self.one();
        let mut b = *x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, x: &Fq) -> Option<Fq> {
        if self.is_zero(x) {
            None
        } else {
            Some(self.pow(x, self.order() - 2))
        }
    }

    /// Quadratic character: 1 for nonzero squares, −1 for non-squares, 0 at zero.
    pub fn legendre(&self, x: &Fq) -> i32 {
        if self.is_zero(x) {
            return 0;
        }
        if self.p == 2 {
            return 1;
        }
        let r = self.pow(x, (self.order() - 1) / 2);
        if r == self.one() {
            1
        } else {
            -1
        }
    }

    /// Enumerates all elements in a fixed order.
    pub fn elements(&self) -> Vec<Fq> {
        let mut out = Vec::with_capacity(self.order() as usize);
        let bmax = if self.f == 2 { self.p } else { 1 };
        for b in 0..bmax {
            for a in 0..self.p {
                out.push([a, b]);
            }
        }
        out
    }

    pub fn index(&self, x: &Fq) -> usize {
        (x[0] + self.p * x[1]) as usize
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, x: &Fq) -> u64 {
        let m = self.order() - 1;
        let mut ord = m;
        for (q, _) in small_factor(m) {
            while ord.is_multiple_of(q) && self.pow(x, ord / q) == self.one() {
                ord /= q;
            }
        }
        ord
    }

    pub fn generator(&self) -> Fq {
        let m = self.order() - 1;
        self.elements()
            .into_iter()
            .find(|x| !self.is_zero(x) && self.mult_order(x) == m)
            .expect("finite field has a generator")
    }

    /// Table of discrete logarithms to the base of [`Self::generator`].
    pub fn log_table(&self) -> Vec<Option<u64>> {
        let g = self.generator();
        let mut table = vec![None; self.order() as usize];
        let mut x = self.one();
        for k in 0..self.order() - 1 {
            table[self.index(&x)] = Some(k);
            x = self.mul(&x, &g);
        }
        table
    }

    /// Is `x` in the prime subfield F_p?
    pub fn in_prime_field(&self, x: &Fq) -> bool {
        x[1] == 0
    }
}

pub fn small_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn legendre_u64(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        0
    } else if p == 2 || mod_pow(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_arithmetic() {
        // t² + t + 1 over F_2
        let k = ResidueField::quadratic(2, 1, 1);
        let t = [0, 1];
        assert_eq!(k.mul(&t, &t), [1, 1]);
        assert_eq!(k.mult_order(&t), 3);
        assert_eq!(k.log_table().iter().filter(|x| x.is_some()).count(), 3);
    }

    #[test]
    fn squares_mod_five() {
        let k = ResidueField::prime(5);
        assert_eq!(k.legendre(&[2, 0]), -1);
        assert_eq!(k.legendre(&[4, 0]), 1);
        assert_eq!(legendre_u64(2, 5), -1);
    }
}
