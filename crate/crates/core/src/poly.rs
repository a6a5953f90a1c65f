//! Integer polynomials: characteristic polynomials, cyclotomic trial
//! division, a mod-p degree-pattern irreducibility sieve, and Graeffe
//! root squaring for root-modulus certificates.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::linalg::IntMatrix;

/// Dense polynomial with coefficients stored lowest degree first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<BigInt>);

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn one() -> Self {
        IntPoly(vec![BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.0.last().is_some_and(One::is_one)
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.0.is_empty() || other.0.is_empty() {
            return IntPoly(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Quotient and remainder by a monic divisor.
    pub fn div_rem_monic(&self, divisor: &IntPoly) -> (IntPoly, IntPoly) {
        assert!(divisor.is_monic(), "divisor must be monic");
        let d = divisor.0.len() - 1;
        let mut rem = self.0.clone();
        if rem.len() <= d {
            return (IntPoly(Vec::new()), IntPoly::new(rem));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = rem[k + d].clone();
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.0.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        rem.truncate(d);
        (IntPoly::new(quot), IntPoly::new(rem))
    }

    pub fn is_divisible_by(&self, divisor: &IntPoly) -> bool {
        self.div_rem_monic(divisor).1 .0.is_empty()
    }

    /// True when every nonzero coefficient sits at a degree divisible by
    /// some common `k ≥ 2`, i.e. the polynomial is a polynomial in `x^k`.
    pub fn is_polynomial_in_power(&self) -> Option<usize> {
        let support: Vec<usize> = (1..self.0.len())
            .filter(|&i| !self.0[i].is_zero())
            .collect();
        let g = support.iter().fold(0usize, |acc, &i| acc.gcd(&i));
        (g >= 2).then_some(g)
    }

    /// Polynomial whose roots are the squares of the roots of `self`.
    pub fn graeffe(&self) -> IntPoly {
        let n = match self.degree() {
            Some(n) => n,
            None => return self.clone(),
        };
        let reflected = IntPoly::new(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c })
                .collect(),
        );
        let prod = self.mul(&reflected);
        let sign = if n % 2 == 0 {
            BigInt::one()
        } else {
            -BigInt::one()
        };
        IntPoly::new(prod.0.iter().step_by(2).map(|c| c * &sign).collect())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{mag}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{mag}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// `det(xI - M)` by the Faddeev-LeVerrier recursion; all divisions are exact.
pub fn characteristic_polynomial(m: &IntMatrix) -> IntPoly {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut aux = IntMatrix::zeros(n, n);
    for k in 1..=n {
        // aux_k = M aux_{k-1} + c_{n-k+1} I
        let mut next = m.mul(&aux);
        for i in 0..n {
            next[(i, i)] += &coeffs[n - k + 1];
        }
        aux = next;
        let t = m.mul(&aux).trace();
        coeffs[n - k] = -(t / BigInt::from(k));
    }
    IntPoly::new(coeffs)
}

fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The d-th cyclotomic polynomial.
pub fn cyclotomic(d: u64) -> IntPoly {
    assert!(d >= 1);
    let mut coeffs = vec![BigInt::zero(); d as usize + 1];
    coeffs[0] = -BigInt::one();
    coeffs[d as usize] = BigInt::one();
    let mut p = IntPoly::new(coeffs);
    for e in 1..d {
        if d.is_multiple_of(e) {
            p = p.div_rem_monic(&cyclotomic(e)).0;
        }
    }
    p
}

/// All `d` with `deg Φ_d ≤ max_degree`, increasing. Since `φ(d) ≥ √(d/2)`,
/// scanning `d ≤ 2·max_degree²` is exhaustive.
pub fn cyclotomic_orders_up_to_degree(max_degree: usize) -> Vec<u64> {
    let bound = 2 * (max_degree as u64).pow(2).max(1);
    (1..=bound)
        .filter(|&d| euler_phi(d) as usize <= max_degree)
        .collect()
}

/// Orders `d` for which `Φ_d` divides `p`.
pub fn cyclotomic_divisors(p: &IntPoly) -> Vec<u64> {
    let deg = p.degree().unwrap_or(0);
    cyclotomic_orders_up_to_degree(deg)
        .into_iter()
        .filter(|&d| p.is_divisible_by(&cyclotomic(d)))
        .collect()
}

/// Smallest `k` such that after `k` Graeffe squarings some coefficient
/// exceeds the bound `C(n, j)` forced when every root has modulus ≤ 1. A
/// returned value certifies a root with `|λ| > 1`.
pub fn certify_root_outside_unit_circle(p: &IntPoly, max_squarings: u32) -> Option<u32> {
    let n = p.degree()?;
    let binom: Vec<BigInt> = {
        let mut row = vec![BigInt::one()];
        for i in 0..n {
            let next = &row[i] * BigInt::from(n - i) / BigInt::from(i + 1);
            row.push(next);
        }
        row
    };
    let mut q = p.clone();
    for k in 0..=max_squarings {
        let exceeds = q
            .coeffs()
            .iter()
            .enumerate()
            .any(|(i, c)| c.abs() > binom[n - i]);
        if exceeds {
            return Some(k);
        }
        q = q.graeffe();
    }
    None
}

// ---- arithmetic over F_p --------------------------------------------------

type ModPoly = Vec<u64>;

fn mod_trim(mut a: ModPoly) -> ModPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn mod_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, p: u64) -> u64 {
    mod_pow(a, p - 2, p)
}

fn mod_sub(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let n = a.len().max(b.len());
    mod_trim(
        (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect(),
    )
}

fn mod_mul(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    mod_trim(out)
}

fn mod_divrem(a: &ModPoly, b: &ModPoly, p: u64) -> (ModPoly, ModPoly) {
    let b = mod_trim(b.clone());
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = mod_trim(a.clone());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let inv_lead = mod_inv(*b.last().unwrap(), p);
    let d = b.len() - 1;
    let mut quot = vec![0u64; rem.len() - d];
    for k in (0..quot.len()).rev() {
        let c = rem[k + d] * inv_lead % p;
        if c == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            rem[k + j] = (rem[k + j] + p - c * y % p) % p;
        }
        quot[k] = c;
    }
    rem.truncate(d);
    (mod_trim(quot), mod_trim(rem))
}

fn mod_gcd(a: &ModPoly, b: &ModPoly, p: u64) -> ModPoly {
    let (mut x, mut y) = (mod_trim(a.clone()), mod_trim(b.clone()));
    while !y.is_empty() {
        let r = mod_divrem(&x, &y, p).1;
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = mod_inv(lead, p);
        for c in &mut x {
            *c = *c * inv % p;
        }
    }
    x
}

fn mod_powmod(base: &ModPoly, mut e: u64, modulus: &ModPoly, p: u64) -> ModPoly {
    let mut acc: ModPoly = vec![1];
    let mut b = mod_divrem(base, modulus, p).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_divrem(&mod_mul(&acc, &b, p), modulus, p).1;
        }
        b = mod_divrem(&mod_mul(&b, &b, p), modulus, p).1;
        e >>= 1;
    }
    acc
}

fn reduce_mod(poly: &IntPoly, p: u64) -> ModPoly {
    let pb = BigInt::from(p);
    mod_trim(
        poly.coeffs()
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().expect("residue fits"))
            .collect(),
    )
}

/// Degrees of the irreducible factors of `poly mod p`, or `None` when the
/// reduction drops degree or is not squarefree.
pub fn factor_degrees_mod(poly: &IntPoly, p: u64) -> Option<Vec<usize>> {
    let n = poly.degree()?;
    let f = reduce_mod(poly, p);
    if f.len() != n + 1 {
        return None;
    }
    let deriv: ModPoly = mod_trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * (i as u64 % p) % p)
            .collect(),
    );
    if mod_gcd(&f, &deriv, p).len() != 1 {
        return None;
    }

    let x: ModPoly = vec![0, 1];
    let mut rest = f;
    let mut h = x.clone();
    let mut degrees = Vec::new();
    let mut d = 1;
    while rest.len() > 2 * d {
        h = mod_powmod(&h, p, &rest, p);
        let g = mod_gcd(&mod_sub(&h, &x, p), &rest, p);
        let gdeg = g.len() - 1;
        if gdeg > 0 {
            degrees.extend(std::iter::repeat_n(d, gdeg / d));
            rest = mod_divrem(&rest, &g, p).0;
            h = mod_divrem(&h, &rest, p).1;
        }
        d += 1;
    }
    if rest.len() > 1 {
        degrees.push(rest.len() - 1);
    }
    Some(degrees)
}

fn small_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut c = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&q| q * q <= c)
            .all(|&q| !c.is_multiple_of(q))
        {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

/// Proves irreducibility over Q of a monic integer polynomial by
/// intersecting the subset sums of its factor degrees modulo many primes: a
/// rational factor of degree `d` would make `d` a subset sum for every
/// prime. `false` means "not proven", never "reducible".
pub fn proven_irreducible(poly: &IntPoly, prime_count: usize) -> bool {
    let n = match poly.degree() {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    if !poly.is_monic() {
        return false;
    }
    if n == 1 {
        return true;
    }
    // possible[d]: a rational factor of degree d is still consistent.
    let mut possible = vec![true; n + 1];
    for p in small_primes(prime_count) {
        let Some(degrees) = factor_degrees_mod(poly, p) else {
            continue;
        };
        let mut sums = vec![false; n + 1];
        sums[0] = true;
        for d in degrees {
            for s in (d..=n).rev() {
                sums[s] |= sums[s - d];
            }
        }
        for (slot, reachable) in possible.iter_mut().zip(&sums) {
            *slot &= *reachable;
        }
        if (1..n).all(|d| !possible[d]) {
            return true;
        }
    }
    false
}
