//! Dense univariate polynomial arithmetic over the rationals, used to
//! realize Q(zeta_m) as Q[x]/Phi_m(x).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type QPoly = Vec<BigRational>;

pub fn trim(p: &mut QPoly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

pub fn deg(p: &QPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn add(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    trim(&mut out);
    out
}

pub fn neg(a: &QPoly) -> QPoly {
    a.iter().map(|c| -c.clone()).collect()
}

pub fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += ca * cb;
            }
        }
    }
    trim(&mut out);
    out
}

pub fn scale(a: &QPoly, s: &BigRational) -> QPoly {
    if s.is_zero() {
        return vec![];
    }
    a.iter().map(|c| c * s).collect()
}

/// Euclidean division: returns (quotient, remainder) with deg r < deg b.
pub fn divmod(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut rem = a.clone();
    trim(&mut rem);
    let db = b.len() - 1;
    let lead = b.last().unwrap().clone();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quo = vec![BigRational::zero(); rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = rem.last().unwrap() / &lead;
        quo[dr - db] = c.clone();
        for i in 0..=db {
            let t = &b[i] * &c;
            rem[dr - db + i] -= t;
        }
        trim(&mut rem);
    }
    trim(&mut quo);
    (quo, rem)
}

pub fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    divmod(a, b).1
}

pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

pub fn monic(p: &QPoly) -> QPoly {
    match p.last() {
        None => vec![],
        Some(l) => {
            let inv = BigRational::one() / l;
            scale(p, &inv)
        }
    }
}

pub fn derivative(p: &QPoly) -> QPoly {
    if p.len() <= 1 {
        return vec![];
    }
    let mut out = Vec::with_capacity(p.len() - 1);
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(c * BigRational::from(BigInt::from(i)));
    }
    trim(&mut out);
    out
}

/// Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic.
pub fn ext_gcd(a: &QPoly, b: &QPoly) -> (QPoly, QPoly, QPoly) {
    let one = vec![BigRational::one()];
    let (mut r0, mut r1) = (a.clone(), b.clone());
    trim(&mut r0);
    trim(&mut r1);
    let (mut s0, mut s1) = (one.clone(), vec![]);
    let (mut t0, mut t1) = (vec![], one);
    while !r1.is_empty() {
        let (q, r) = divmod(&r0, &r1);
        let s = add(&s0, &neg(&mul(&q, &s1)));
        let t = add(&t0, &neg(&mul(&q, &t1)));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
        t0 = t1;
        t1 = t;
    }
    if let Some(l) = r0.last().cloned() {
        let inv = BigRational::one() / l;
        return (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv));
    }
    (vec![], vec![], vec![])
}

pub fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn q(n: i64) -> BigRational {
        BigRational::from_i64(n).unwrap()
    }

    #[test]
    fn divmod_roundtrip() {
        // (x^2 + 1)(x - 3) + 7
        let b = vec![q(1), q(0), q(1)];
        let quo = vec![q(-3), q(1)];
        let a = add(&mul(&b, &quo), &vec![q(7)]);
        let (qq, rr) = divmod(&a, &b);
        assert_eq!(qq, quo);
        assert_eq!(rr, vec![q(7)]);
    }

    #[test]
    fn ext_gcd_bezout() {
        let a = vec![q(-1), q(0), q(0), q(1)]; // x^3 - 1
        let b = vec![q(-1), q(1)]; // x - 1
        let (g, s, t) = ext_gcd(&a, &b);
        assert_eq!(g, vec![q(-1), q(1)]);
        let lhs = add(&mul(&s, &a), &mul(&t, &b));
        assert_eq!(lhs, g);
    }
}
