//! Exact integer and rational linear algebra shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(p, q))
        }
        None => Ok(Rat::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn sign_of(x: &Rat) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn sign_int(x: &BigInt) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Least common multiple of all denominators.
pub fn common_denominator(v: &[Rat]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn determinant(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    det
}

pub fn int_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let q: Vec<Vec<Rat>> = m
        .iter()
        .map(|r| r.iter().map(|x| Rat::from_integer(x.clone())).collect())
        .collect();
    determinant(&q).to_integer()
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let ncol = rows[0].len();
    let mut a = rows.to_vec();
    let mut r = 0;
    for col in 0..ncol {
        let Some(piv) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(piv, r);
        let p = a[r][col].clone();
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = &a[i][col] / &p;
                for c in col..ncol {
                    let t = &f * &a[r][c];
                    a[i][c] -= t;
                }
            }
        }
        r += 1;
        if r == a.len() {
            break;
        }
    }
    r
}

/// Solves `Σ_i c_i · cols[i] = target` for a square independent system.
pub fn solve_columns(cols: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let n = target.len();
    let k = cols.len();
    // augmented matrix n x (k+1)
    let mut a: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rat> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(piv) = (r..n).find(|&i| !a[i][col].is_zero()) else {
            return None;
        };
        a.swap(piv, r);
        let p = a[r][col].clone();
        for c in col..=k {
            a[r][c] = &a[r][c] / &p;
        }
        for i in 0..n {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for c in col..=k {
                    let t = &f * &a[r][c];
                    a[i][c] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if (r..n).any(|i| !a[i][k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| a[i][k].clone()).collect())
}

/// Basis of {v : Σ_j m[i][j] v_j = 0 for every row i}.
pub fn nullspace(m: &[Vec<Rat>], ncols: usize) -> Vec<Vec<Rat>> {
    let mut a: Vec<Vec<Rat>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(piv) = (r..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(piv, r);
        let p = a[r][col].clone();
        for c in 0..ncols {
            a[r][c] = &a[r][c] / &p;
        }
        for i in 0..a.len() {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for c in 0..ncols {
                    let t = &f * &a[r][c];
                    a[i][c] -= t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![Rat::zero(); ncols];
            v[fc] = Rat::one();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[i][fc].clone();
            }
            v
        })
        .collect()
}

/// Inverse of a square rational matrix.
pub fn inverse(m: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rat>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, col);
        let p = a[col][col].clone();
        for c in 0..2 * n {
            a[col][c] = &a[col][c] / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let t = &f * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// Output rows are in echelon form with positive pivots and entries above each
/// pivot reduced into `[0, pivot)`, so equal lattices give identical output.
pub fn hnf(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut a: Vec<Vec<BigInt>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    if a.is_empty() {
        return a;
    }
    let ncol = a[0].len();
    let mut r = 0;
    for col in 0..ncol {
        if r == a.len() {
            break;
        }
        loop {
            let nz: Vec<usize> = (r..a.len()).filter(|&i| !a[i][col].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let best = *nz.iter().min_by(|&&i, &&j| a[i][col].abs().cmp(&a[j][col].abs())).unwrap();
            a.swap(r, best);
            let mut done = true;
            for i in r + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[r][col]);
                let (head, tail) = a.split_at_mut(i);
                for c in col..ncol {
                    let t = &q * &head[r][c];
                    tail[0][c] -= t;
                }
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a[r][col].is_zero() {
            continue;
        }
        if a[r][col].is_negative() {
            for c in col..ncol {
                a[r][c] = -a[r][c].clone();
            }
        }
        for i in 0..r {
            let q = a[i][col].div_floor(&a[r][col]);
            if q.is_zero() {
                continue;
            }
            let (head, tail) = a.split_at_mut(r);
            for c in col..ncol {
                let t = &q * &tail[0][c];
                head[i][c] -= t;
            }
        }
        r += 1;
    }
    a.truncate(r);
    a.retain(|row| row.iter().any(|x| !x.is_zero()));
    a
}

pub fn pivot_col(row: &[BigInt]) -> Option<usize> {
    row.iter().position(|x| !x.is_zero())
}

/// Reduces `v` against an HNF basis; returns the canonical remainder and the
/// multipliers `c` with `v = remainder + Σ c_i basis_i`.
pub fn hnf_reduce(basis: &[Vec<BigInt>], v: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
    let mut rem = v.to_vec();
    let mut mult = vec![BigInt::zero(); basis.len()];
    for (i, b) in basis.iter().enumerate() {
        let col = pivot_col(b).expect("zero row in HNF basis");
        let q = rem[col].div_floor(&b[col]);
        if q.is_zero() {
            continue;
        }
        for c in col..rem.len() {
            rem[c] -= &q * &b[c];
        }
        mult[i] = q;
    }
    (rem, mult)
}

pub fn bigint_to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::Overflow(format!("{x} does not fit in 64 bits")))
}

pub fn gcd_all(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

pub fn isqrt(n: &BigInt) -> BigInt {
    n.sqrt()
}

pub fn is_square_int(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

/// Rational square root when it exists.
pub fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    if is_square_int(n) && is_square_int(d) {
        Some(Rat::new(n.sqrt(), d.sqrt()))
    } else {
        None
    }
}

/// Exact sign of `a + b·√d` for rationals `a, b` and a non-square `d > 0`.
pub fn sign_quadratic(a: &Rat, b: &Rat, d: &Rat) -> i32 {
    let sa = sign_of(a);
    let sb = sign_of(b);
    if sb == 0 {
        return sa;
    }
    if sa == 0 || sa == sb {
        return sb;
    }
    let lhs = a * a;
    let rhs = b * b * d;
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => sa,
        std::cmp::Ordering::Less => sb,
        std::cmp::Ordering::Equal => 0,
    }
}

/// Factorization of a nonzero integer by trial division.
pub fn factor(n: &BigInt) -> Vec<(u64, u32)> {
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p: u64 = 2;
    while BigInt::from(p) * BigInt::from(p) <= m {
        let bp = BigInt::from(p);
        if (&m % &bp).is_zero() {
            let mut e = 0;
            while (&m % &bp).is_zero() {
                m /= &bp;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > BigInt::one() {
        out.push((m.to_u64().expect("prime factor exceeds 64 bits"), 1));
    }
    out
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return false;
        }
        p += 1;
    }
    true
}

pub fn mod_pow(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

pub fn rat_mod_u64(x: &Rat, p: u64) -> Option<u64> {
    let bp = BigInt::from(p);
    let den = x.denom().mod_floor(&bp);
    if den.is_zero() {
        return None;
    }
    let num = x.numer().mod_floor(&bp).to_u64().unwrap();
    let den = den.to_u64().unwrap();
    Some(((num as u128 * mod_inv(den, p) as u128) % p as u128) as u64)
}

pub fn mod_inv(a: u64, m: u64) -> u64 {
    let (g, x, _) = ext_gcd(a as i128, m as i128);
    assert_eq!(g, 1, "{a} not invertible mod {m}");
    (x.rem_euclid(m as i128)) as u64
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn hnf_is_canonical_under_generator_shuffles() {
        let a = hnf(&[iv(&[2, 4, 6]), iv(&[0, 3, 9]), iv(&[1, 1, 1])]);
        let b = hnf(&[iv(&[1, 1, 1]), iv(&[0, 3, 9]), iv(&[2, 4, 6]), iv(&[3, 5, 7])]);
        assert_eq!(a, b);
    }

    #[test]
    fn reduce_detects_membership() {
        let b = hnf(&[iv(&[2, 0]), iv(&[0, 3])]);
        let (r, m) = hnf_reduce(&b, &iv(&[4, 9]));
        assert!(r.iter().all(|x| x.is_zero()));
        assert_eq!(m, iv(&[2, 3]));
        let (r, _) = hnf_reduce(&b, &iv(&[5, 1]));
        assert_eq!(r, iv(&[1, 1]));
    }

    #[test]
    fn quadratic_signs() {
        assert_eq!(sign_quadratic(&rat(1), &rat(1), &rat(5)), 1);
        assert_eq!(sign_quadratic(&rat(1), &rat(-1), &rat(5)), -1);
        assert_eq!(sign_quadratic(&rat(3), &rat(-1), &rat(5)), 1);
        assert_eq!(sign_quadratic(&rat(0), &rat(0), &rat(5)), 0);
    }

    #[test]
    fn rationals_round_trip() {
        for s in ["3/7", "-12", "0", "-5/2"] {
            assert_eq!(fmt_rat(&parse_rat(s).unwrap()), s);
        }
        assert!(parse_rat("1/0").is_err());
    }
}
