//! Exact elements of the cyclotomic field Q(zeta_m), represented in the
//! power basis 1, z, ..., z^(phi(m)-1) of Q[x]/Phi_m(x).
//!
//! Scalars of different orders interoperate by embedding into the lcm order
//! via zeta_m -> zeta_M^(M/m). A scalar whose value is rational is always
//! normalized down to order 1, so rationals have a unique representation.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{self, QPoly};
use super::ScalarError;

pub type Rational = BigRational;

/// Euler totient.
pub fn euler_phi(m: u64) -> u64 {
    let mut n = m;
    let mut result = m;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
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

fn divisors(m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            if d != m / d {
                out.push(m / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// The m-th cyclotomic polynomial Phi_m as a monic integer polynomial
/// (coefficient vector, constant term first).
pub fn cyclotomic_polynomial(m: u64) -> Vec<BigInt> {
    assert!(m >= 1, "order must be positive");
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&m) {
        return p.clone();
    }
    // Phi_m = (x^m - 1) / prod_{d | m, d < m} Phi_d, by exact division.
    let mut num: QPoly = vec![BigRational::zero(); (m + 1) as usize];
    num[0] = -BigRational::one();
    num[m as usize] = BigRational::one();
    let mut den: QPoly = vec![BigRational::one()];
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let phi_d: QPoly = cyclotomic_polynomial(d)
            .into_iter()
            .map(BigRational::from)
            .collect();
        den = poly::mul(&den, &phi_d);
    }
    let (quo, rem) = poly::divmod(&num, &den);
    assert!(rem.is_empty(), "cyclotomic division must be exact");
    let out: Vec<BigInt> = quo
        .iter()
        .map(|c| {
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect();
    assert_eq!(out.len() as u64 - 1, euler_phi(m));
    cache.lock().unwrap().insert(m, out.clone());
    out
}

fn modulus(m: u64) -> QPoly {
    cyclotomic_polynomial(m)
        .into_iter()
        .map(BigRational::from)
        .collect()
}

/// An exact element of Q(zeta_m).
#[derive(Clone)]
pub struct Cyclotomic {
    order: u64,
    /// Length phi(order); coefficients of 1, z, ..., z^(phi-1).
    coeffs: Vec<BigRational>,
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let m = self.order.lcm(&other.order);
        let (a, b) = (self.raw_embed(m), other.raw_embed(m));
        a == b
    }
}

impl Eq for Cyclotomic {}

impl Cyclotomic {
    fn make(order: u64, mut coeffs: Vec<BigRational>) -> Self {
        let phi = euler_phi(order) as usize;
        coeffs.resize(phi, BigRational::zero());
        let mut s = Cyclotomic { order, coeffs };
        s.normalize();
        s
    }

    /// Reduce to order 1 when the value is rational, so a given rational
    /// value has exactly one representation.
    fn normalize(&mut self) {
        if self.order > 1 && self.coeffs[1..].iter().all(|c| c.is_zero()) {
            self.order = 1;
            self.coeffs.truncate(1);
        }
    }

    pub fn zero() -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::zero()],
        }
    }

    pub fn one() -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![BigRational::one()],
        }
    }

    pub fn from_rational(q: BigRational) -> Self {
        Cyclotomic {
            order: 1,
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// A primitive m-th root of unity (the residue class of x mod Phi_m).
    pub fn primitive_root(m: u64) -> Self {
        assert!(m >= 1);
        let phi = euler_phi(m) as usize;
        if phi == 1 {
            // m = 1: zeta = 1; m = 2: zeta = -1.
            return if m == 1 {
                Self::one()
            } else {
                Self::from_int(-1)
            };
        }
        let mut coeffs = vec![BigRational::zero(); phi];
        coeffs[1] = BigRational::one();
        Cyclotomic { order: m, coeffs }
    }

    /// zeta_m^k, reduced.
    pub fn root_power(m: u64, k: i64) -> Self {
        let kk = k.rem_euclid(m as i64) as u64;
        let mut p: QPoly = vec![BigRational::zero(); kk as usize + 1];
        p[kk as usize] = BigRational::one();
        let r = poly::rem(&p, &modulus(m));
        Self::make(m, r)
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coeffs[0].is_one()
    }

    pub fn is_rational(&self) -> bool {
        self.order == 1
    }

    pub fn try_rational(&self) -> Option<BigRational> {
        if self.order == 1 {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    /// Embed into Q(zeta_target); target must be a multiple of the order.
    pub fn embed(&self, target: u64) -> Self {
        let mut s = Cyclotomic {
            order: target,
            coeffs: self.raw_embed(target),
        };
        s.normalize();
        s
    }

    /// Coefficient vector at the target order, padded to phi(target) and not
    /// normalized back down.
    fn raw_embed(&self, target: u64) -> Vec<BigRational> {
        assert!(
            target % self.order == 0,
            "embedding target {} not a multiple of order {}",
            target,
            self.order
        );
        let phi = euler_phi(target) as usize;
        if target == self.order {
            return self.coeffs.clone();
        }
        let k = (target / self.order) as usize;
        let mut p: QPoly = vec![BigRational::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p[i * k] = c.clone();
            }
        }
        poly::trim(&mut p);
        let mut r = poly::rem(&p, &modulus(target));
        r.resize(phi, BigRational::zero());
        r
    }

    fn common(a: &Self, b: &Self) -> (Vec<BigRational>, Vec<BigRational>, u64) {
        let m = a.order.lcm(&b.order);
        (a.raw_embed(m), b.raw_embed(m), m)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(Self::from_rational(BigRational::one() / &self.coeffs[0]));
        }
        let mut p = self.coeffs.clone();
        poly::trim(&mut p);
        let (g, s, _) = poly::ext_gcd(&p, &modulus(self.order));
        // Phi_m is irreducible over Q, so gcd with a nonzero residue is 1.
        assert_eq!(g, vec![BigRational::one()], "cyclotomic inverse failed");
        let r = poly::rem(&s, &modulus(self.order));
        Ok(Self::make(self.order, r))
    }

    pub fn pow(&self, n: i64) -> Result<Self, ScalarError> {
        if n == 0 {
            return Ok(Self::one());
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..n.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Deterministic sort key; scalars appearing together always share an
    /// ambient order (rationals are normalized to order 1), so comparing
    /// (order, coefficient vector) is a total order on the values in play.
    pub fn sort_key(&self) -> (u64, Vec<(BigInt, BigInt)>) {
        (
            self.order,
            self.coeffs
                .iter()
                .map(|c| (c.numer().clone(), c.denom().clone()))
                .collect(),
        )
    }

    /// Render as a polynomial in z, e.g. "1/2 - 1/2*z^2".
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = c.is_negative();
            if first {
                if sign {
                    out.push('-');
                }
                first = false;
            } else if sign {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if i > 0 {
                if show_coeff {
                    out.push('*');
                }
                out.push('z');
                if i > 1 {
                    out.push_str(&format!("^{}", i));
                }
            }
        }
        out
    }

    /// Parse the same grammar `render` emits, reducing powers of z modulo
    /// Phi_m for the given order.
    pub fn parse(input: &str, order: u64) -> Result<Self, ScalarError> {
        let s: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(ScalarError::Parse(input.to_string()));
        }
        let bad = || ScalarError::Parse(input.to_string());
        let mut acc = Cyclotomic::zero();
        let bytes = s.as_bytes();
        let mut i = 0;
        let mut sign = 1i64;
        if bytes[0] == b'+' {
            i = 1;
        } else if bytes[0] == b'-' {
            sign = -1;
            i = 1;
        }
        while i < bytes.len() {
            // coefficient (optional), then optional z power
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
                i += 1;
            }
            let coeff = if start == i {
                BigRational::one()
            } else {
                let txt = &s[start..i];
                let (n, d) = match txt.split_once('/') {
                    Some((n, d)) => (n, d),
                    None => (txt, "1"),
                };
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            };
            let mut power = 0i64;
            let mut saw_z = false;
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'z' {
                saw_z = true;
                i += 1;
                power = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let st = i;
                    if i < bytes.len() && bytes[i] == b'-' {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    power = s[st..i].parse().map_err(|_| bad())?;
                }
            }
            if start == i && !saw_z {
                return Err(bad());
            }
            let term = &Cyclotomic::from_rational(coeff * BigRational::from(BigInt::from(sign)))
                * &Cyclotomic::root_power(order, power);
            acc = &acc + &term;
            // separator
            if i < bytes.len() {
                match bytes[i] {
                    b'+' => sign = 1,
                    b'-' => sign = -1,
                    _ => return Err(bad()),
                }
                i += 1;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyc[m={}]({})", self.order, self.render())
    }
}

impl Add for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b, m) = Cyclotomic::common(self, rhs);
        let coeffs = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
        Cyclotomic::make(m, coeffs)
    }
}

impl Sub for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        let (a, b, m) = Cyclotomic::common(self, rhs);
        let coeffs = a.iter().zip(b.iter()).map(|(x, y)| x - y).collect();
        Cyclotomic::make(m, coeffs)
    }
}

impl Mul for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        // Order-1 fast paths dominate real workloads.
        if self.order == 1 {
            if self.coeffs[0].is_zero() {
                return Cyclotomic::zero();
            }
            let coeffs = rhs.coeffs.iter().map(|c| c * &self.coeffs[0]).collect();
            return Cyclotomic::make(rhs.order, coeffs);
        }
        if rhs.order == 1 {
            return rhs.mul(self);
        }
        let (a, b, m) = Cyclotomic::common(self, rhs);
        let prod = poly::mul(&a, &b);
        let r = poly::rem(&prod, &modulus(m));
        Cyclotomic::make(m, r)
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        (&self).add(&rhs)
    }
}

impl Sub for Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: Cyclotomic) -> Cyclotomic {
        (&self).sub(&rhs)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        (&self).mul(&rhs)
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        (&self).neg()
    }
}

impl AddAssign<&Cyclotomic> for Cyclotomic {
    fn add_assign(&mut self, rhs: &Cyclotomic) {
        *self = (&*self).add(rhs);
    }
}

impl SubAssign<&Cyclotomic> for Cyclotomic {
    fn sub_assign(&mut self, rhs: &Cyclotomic) {
        *self = (&*self).sub(rhs);
    }
}

impl MulAssign<&Cyclotomic> for Cyclotomic {
    fn mul_assign(&mut self, rhs: &Cyclotomic) {
        *self = (&*self).mul(rhs);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn phi_values() {
        for (m, phi) in [(1, 1), (2, 1), (3, 2), (4, 2), (6, 2), (12, 4), (5, 4)] {
            assert_eq!(euler_phi(m), phi);
        }
    }

    #[test]
    fn cyclotomic_poly_small() {
        // m = 1 -> x - 1 and m = 2 -> x + 1 are immediate from the definition.
        assert_eq!(
            cyclotomic_polynomial(1),
            vec![BigInt::from(-1), BigInt::from(1)]
        );
        assert_eq!(
            cyclotomic_polynomial(2),
            vec![BigInt::from(1), BigInt::from(1)]
        );
        assert_eq!(
            cyclotomic_polynomial(4),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
    }

    #[test]
    fn primitive_root_orders() {
        assert!(Cyclotomic::primitive_root(1).is_one());
        assert_eq!(Cyclotomic::primitive_root(2), Cyclotomic::from_int(-1));
        // zeta_4^2 = -1
        let z = Cyclotomic::primitive_root(4);
        assert_eq!(&z * &z, Cyclotomic::from_int(-1));
        // zeta^m = 1 and zeta^k != 1 for 0 < k < m
        for m in 1..=12u64 {
            let z = Cyclotomic::primitive_root(m);
            assert!(z.pow(m as i64).unwrap().is_one());
            for k in 1..m {
                assert!(!z.pow(k as i64).unwrap().is_one(), "m={} k={}", m, k);
            }
        }
    }

    #[test]
    fn geometric_sums_vanish() {
        // sum_{i} zeta^{ji} = 0 for m not dividing j
        for m in 2..=8u64 {
            for j in 0..m {
                let mut s = Cyclotomic::zero();
                for i in 0..m {
                    s += &Cyclotomic::root_power(m, (j * i) as i64);
                }
                if j == 0 {
                    assert_eq!(s, Cyclotomic::from_int(m as i64));
                } else {
                    assert!(s.is_zero(), "m={} j={}", m, j);
                }
            }
        }
    }

    #[test]
    fn inverse_exact() {
        // inv(1 + zeta) for m = 3, checked by multiplying back
        let z = Cyclotomic::primitive_root(3);
        let a = &Cyclotomic::one() + &z;
        let inv = a.inv().unwrap();
        assert!((&a * &inv).is_one());
        assert!(Cyclotomic::zero().inv().is_err());
    }

    #[test]
    fn embedding_is_homomorphic() {
        let z3 = Cyclotomic::primitive_root(3);
        let z6 = Cyclotomic::primitive_root(6);
        // zeta_6^2 is a primitive cube root: embedding of zeta_3 into order 6
        assert_eq!(z3.embed(6), z6.pow(2).unwrap());
        // mixed-order product embeds automatically: zeta_3 * zeta_2 = zeta_6^5
        let prod = &z3 * &Cyclotomic::from_int(-1);
        assert_eq!(prod, z6.pow(5).unwrap());
    }

    #[test]
    fn rational_normalization() {
        // zeta_4^2 collapses to the rational -1 (order 1)
        let z = Cyclotomic::primitive_root(4);
        let sq = &z * &z;
        assert_eq!(sq.order(), 1);
        assert_eq!(sq.try_rational().unwrap(), q(-1, 1));
    }

    #[test]
    fn render_parse_roundtrip() {
        let z = Cyclotomic::primitive_root(12);
        let val = &(&Cyclotomic::from_ratio(1, 2) * &z.pow(2).unwrap())
            + &Cyclotomic::from_ratio(-3, 7);
        let s = val.render();
        let back = Cyclotomic::parse(&s, 12).unwrap();
        assert_eq!(val, back);
        assert_eq!(
            Cyclotomic::parse("1/2 - 1/2*z^2", 12).unwrap().render(),
            "1/2 - 1/2*z^2"
        );
    }
}
