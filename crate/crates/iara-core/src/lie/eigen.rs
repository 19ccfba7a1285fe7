//! Exact eigen-decomposition of commuting operators over Q(zeta_m).
//!
//! Eigenvalues are found as roots of the minimal polynomial, computed by
//! Krylov iteration with an lcm over all basis vectors (so the result truly
//! annihilates the operator). Rational roots are extracted completely;
//! residual quadratic factors are solved inside Q(zeta_m) when the field is
//! at most quadratic over Q. Anything the search cannot split is reported as
//! NotToral together with the dimension deficit, never silently dropped.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::matrix::Mat;
use crate::scalar::{euler_phi, Cyclotomic};

use super::{Element, LieAlgebra, LieError};

/// Column-sparse matrix: cols[j] = nonzero entries of the image of e_j.
#[derive(Clone, Debug)]
pub struct SparseMat {
    pub dim_in: usize,
    pub dim_out: usize,
    pub cols: Vec<Vec<(usize, Cyclotomic)>>,
}

impl SparseMat {
    pub fn apply_dense(&self, v: &[Cyclotomic]) -> Vec<Cyclotomic> {
        let mut out = vec![Cyclotomic::zero(); self.dim_out];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, a) in &self.cols[j] {
                out[*i] += &(a * c);
            }
        }
        out
    }
}

/// The matrix of ad(t) on the algebra basis.
pub fn adjoint_matrix(alg: &LieAlgebra, t: &Element) -> Result<SparseMat, LieError> {
    let n = alg.dim();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let img = alg.bracket(t, &Element::basis(j))?;
        cols.push(img.terms.into_iter().map(|(i, c)| (i, c)).collect());
    }
    Ok(SparseMat {
        dim_in: n,
        dim_out: n,
        cols,
    })
}

/// Restrict operators to the coordinate subspace given by `indices`
/// (assumed invariant; entries leaving the subspace are an error).
pub fn restrict_to_indices(
    ops: &[SparseMat],
    indices: &[usize],
) -> Result<Vec<SparseMat>, LieError> {
    let mut pos = vec![usize::MAX; ops.first().map_or(0, |o| o.dim_in)];
    for (k, &i) in indices.iter().enumerate() {
        pos[i] = k;
    }
    let mut out = Vec::with_capacity(ops.len());
    for op in ops {
        let mut cols = Vec::with_capacity(indices.len());
        for &j in indices {
            let mut col = Vec::new();
            for (i, c) in &op.cols[j] {
                if pos[*i] == usize::MAX {
                    return Err(LieError::NotToral(
                        "operator does not preserve the degree blocks".to_string(),
                    ));
                }
                col.push((pos[*i], c.clone()));
            }
            cols.push(col);
        }
        out.push(SparseMat {
            dim_in: indices.len(),
            dim_out: indices.len(),
            cols,
        });
    }
    Ok(out)
}

// ---- polynomials over Q(zeta_m) -------------------------------------------

type KPoly = Vec<Cyclotomic>;

fn ktrim(p: &mut KPoly) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn kdivmod(a: &KPoly, b: &KPoly) -> (KPoly, KPoly) {
    assert!(!b.is_empty());
    let mut rem = a.clone();
    ktrim(&mut rem);
    let db = b.len() - 1;
    let lead_inv = b.last().unwrap().inv().expect("nonzero leading coeff");
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quo = vec![Cyclotomic::zero(); rem.len() - db];
    while rem.len() > db {
        let dr = rem.len() - 1;
        let c = rem.last().unwrap() * &lead_inv;
        quo[dr - db] = c.clone();
        for i in 0..=db {
            let t = &b[i] * &c;
            rem[dr - db + i] -= &t;
        }
        ktrim(&mut rem);
    }
    ktrim(&mut quo);
    (quo, rem)
}

fn kmul(a: &KPoly, b: &KPoly) -> KPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Cyclotomic::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if !cb.is_zero() {
                out[i + j] += &(ca * cb);
            }
        }
    }
    ktrim(&mut out);
    out
}

fn kmonic(p: &KPoly) -> KPoly {
    match p.last() {
        None => vec![],
        Some(l) => {
            let inv = l.inv().unwrap();
            p.iter().map(|c| c * &inv).collect()
        }
    }
}

fn kgcd(a: &KPoly, b: &KPoly) -> KPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    ktrim(&mut x);
    ktrim(&mut y);
    while !y.is_empty() {
        let (_, r) = kdivmod(&x, &y);
        x = y;
        y = r;
    }
    kmonic(&x)
}

fn klcm(a: &KPoly, b: &KPoly) -> KPoly {
    if a.is_empty() {
        return b.clone();
    }
    if b.is_empty() {
        return a.clone();
    }
    let g = kgcd(a, b);
    let (q, r) = kdivmod(a, &g);
    debug_assert!(r.is_empty());
    kmonic(&kmul(&q, b))
}

fn keval(p: &KPoly, x: &Cyclotomic) -> Cyclotomic {
    let mut acc = Cyclotomic::zero();
    for c in p.iter().rev() {
        acc = &(&acc * x) + c;
    }
    acc
}

// ---- minimal polynomial ----------------------------------------------------

/// Minimal polynomial of the operator, as the lcm of the annihilators of all
/// coordinate basis vectors (hence a genuine annihilator of the operator).
pub fn minimal_polynomial(op: &SparseMat) -> KPoly {
    let n = op.dim_in;
    let mut mu: KPoly = vec![];
    for start in 0..n {
        // If mu already annihilates e_start, skip the Krylov run.
        if !mu.is_empty() {
            let mut acc = vec![Cyclotomic::zero(); n];
            let mut pow = {
                let mut v = vec![Cyclotomic::zero(); n];
                v[start] = Cyclotomic::one();
                v
            };
            for c in mu.iter() {
                if !c.is_zero() {
                    for (a, p) in acc.iter_mut().zip(pow.iter()) {
                        *a += &(c * p);
                    }
                }
                pow = op.apply_dense(&pow);
            }
            if acc.iter().all(|c| c.is_zero()) {
                continue;
            }
        }
        let ann = krylov_annihilator(op, start);
        mu = klcm(&mu, &ann);
    }
    if mu.is_empty() {
        vec![Cyclotomic::one()] // zero-dimensional space
    } else {
        mu
    }
}

/// Monic polynomial of least degree with p(op) e_start = 0.
fn krylov_annihilator(op: &SparseMat, start: usize) -> KPoly {
    let n = op.dim_in;
    let mut v = vec![Cyclotomic::zero(); n];
    v[start] = Cyclotomic::one();
    // Row-reduced span of the Krylov vectors, with the expression of each
    // pivot row in terms of powers of the operator.
    let mut rows: Vec<(usize, Vec<Cyclotomic>, KPoly)> = Vec::new(); // (pivot, vec, combo)
    let mut combo: KPoly = vec![Cyclotomic::one()];
    loop {
        // reduce v against current rows
        let mut w = v.clone();
        let mut expr = combo.clone();
        for (piv, row, rc) in &rows {
            if w[*piv].is_zero() {
                continue;
            }
            let f = w[*piv].clone();
            for (wi, ri) in w.iter_mut().zip(row.iter()) {
                *wi -= &(&f * ri);
            }
            // expr -= f * rc
            if expr.len() < rc.len() {
                expr.resize(rc.len(), Cyclotomic::zero());
            }
            for (e, c) in expr.iter_mut().zip(rc.iter()) {
                *e -= &(&f * c);
            }
        }
        match w.iter().position(|c| !c.is_zero()) {
            None => {
                // dependency found: expr applied to op kills e_start
                ktrim(&mut expr);
                return kmonic(&expr);
            }
            Some(p) => {
                let inv = w[p].inv().unwrap();
                let row: Vec<Cyclotomic> = w.iter().map(|c| c * &inv).collect();
                let rc: KPoly = expr.iter().map(|c| c * &inv).collect();
                rows.push((p, row, rc));
            }
        }
        v = op.apply_dense(&v);
        // combo *= x
        combo.insert(0, Cyclotomic::zero());
    }
}

// ---- root extraction -------------------------------------------------------

fn bigint_divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs();
    if n.is_zero() {
        return Some(vec![]);
    }
    if n > BigInt::from(1_000_000_000_000u64) {
        return None; // out of honest trial-division range
    }
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

/// All rational roots of a polynomial with rational coefficients (complete).
fn rational_roots(p: &[BigRational]) -> Option<Vec<BigRational>> {
    let mut q = p.to_vec();
    while q.first().map_or(false, |c| c.is_zero()) {
        q.remove(0); // factor out x
    }
    let mut roots = Vec::new();
    if q.len() < p.len() {
        roots.push(BigRational::zero());
    }
    if q.len() <= 1 {
        return Some(roots);
    }
    // clear denominators to a primitive integer polynomial
    let mut den = BigInt::one();
    for c in &q {
        den = den.lcm(c.denom());
    }
    let ints: Vec<BigInt> = q.iter().map(|c| (c * BigRational::from(den.clone())).to_integer()).collect();
    let a0 = ints.first().unwrap().clone();
    let ad = ints.last().unwrap().clone();
    let ps = bigint_divisors(&a0)?;
    let qs = bigint_divisors(&ad)?;
    for num in &ps {
        for dq in &qs {
            for sign in [1i32, -1] {
                let cand = BigRational::new(num * BigInt::from(sign), dq.clone());
                if crate::scalar::poly::eval(&q, &cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    Some(roots)
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    let cand = BigRational::new(n, d);
    if &(&cand * &cand) == q {
        Some(cand)
    } else {
        None
    }
}

/// Square root inside Q(zeta_m), supported for phi(m) <= 2.
fn sqrt_in_field(c: &Cyclotomic, order: u64) -> Option<Cyclotomic> {
    if let Some(q) = c.try_rational() {
        if let Some(r) = rational_sqrt(&q) {
            return Some(Cyclotomic::from_rational(r));
        }
        if euler_phi(order) != 2 {
            return None;
        }
    } else if euler_phi(order) != 2 {
        return None;
    }
    // K = Q(zeta) with zeta^2 = u + v*zeta from Phi_order.
    let phi = crate::scalar::cyclotomic_polynomial(order);
    let u = -BigRational::from(phi[0].clone());
    let v = -BigRational::from(phi[1].clone());
    let cc = c.embed(order);
    let c0 = cc.coeffs()[0].clone();
    let c1 = cc.coeffs().get(1).cloned().unwrap_or_else(BigRational::zero);
    let build = |a: BigRational, b: BigRational| {
        let z = Cyclotomic::primitive_root(order);
        &Cyclotomic::from_rational(a) + &(&Cyclotomic::from_rational(b) * &z)
    };
    // (a + b z)^2 = a^2 + b^2 u + (2ab + b^2 v) z
    // b = 0: a^2 = c0 and c1 = 0
    if c1.is_zero() {
        if let Some(a) = rational_sqrt(&c0) {
            return Some(build(a, BigRational::zero()));
        }
    }
    // b != 0: a = (c1 - b^2 v) / (2b); substitute into a^2 + u b^2 = c0:
    // (v^2 + 4u) B^2 - (2 c1 v + 4 c0) B + c1^2 = 0 with B = b^2.
    let two = BigRational::from(BigInt::from(2));
    let four = BigRational::from(BigInt::from(4));
    let qa = &(&v * &v) + &(&four * &u);
    let qb = -(&(&two * &(&c1 * &v)) + &(&four * &c0));
    let qc = &c1 * &c1;
    let candidates: Vec<BigRational> = if qa.is_zero() {
        if qb.is_zero() {
            vec![]
        } else {
            vec![-&qc / &qb]
        }
    } else {
        let disc = &(&qb * &qb) - &(&four * &(&qa * &qc));
        match rational_sqrt(&disc) {
            None => vec![],
            Some(s) => {
                let da = &two * &qa;
                vec![&(-&qb + &s) / &da, &(-&qb - &s) / &da]
            }
        }
    };
    for bb in candidates {
        if bb.is_negative() {
            continue;
        }
        if let Some(b) = rational_sqrt(&bb) {
            if b.is_zero() {
                continue;
            }
            let a = &(&c1 - &(&bb * &v)) / &(&two * &b);
            let cand = build(a, b);
            if (&(&cand * &cand) - &cc).is_zero() {
                return Some(cand);
            }
        }
    }
    None
}

/// All roots of p inside Q(zeta_order). Err when the search is not complete
/// for this polynomial (degree > 2 residual with irrational roots, or a
/// larger field than the search supports).
pub fn roots_in_field(p: &KPoly, order: u64) -> Result<Vec<Cyclotomic>, LieError> {
    let mut rest = kmonic(p);
    let mut roots: Vec<Cyclotomic> = Vec::new();
    // Rational roots: a rational r is a root iff it kills every component
    // polynomial in the power-basis decomposition of the coefficients.
    let max_order = rest
        .iter()
        .map(|c| c.order())
        .fold(1u64, |a, b| a.lcm(&b));
    let width = euler_phi(max_order) as usize;
    let mut components: Vec<Vec<BigRational>> = vec![Vec::new(); width];
    for c in &rest {
        let e = c.embed(max_order);
        for (t, comp) in components.iter_mut().enumerate() {
            comp.push(e.coeffs().get(t).cloned().unwrap_or_else(BigRational::zero));
        }
    }
    let mut g: Vec<BigRational> = vec![];
    for comp in &components {
        let mut c = comp.clone();
        crate::scalar::poly::trim(&mut c);
        g = if g.is_empty() { c } else { crate::scalar::poly::gcd(&g, &c) };
    }
    let rat = rational_roots(&g).ok_or_else(|| {
        LieError::NotToral("eigenvalue search exceeded factorization range".to_string())
    })?;
    for r in rat {
        let root = Cyclotomic::from_rational(r);
        // deflate with multiplicity
        loop {
            let lin = vec![-&root, Cyclotomic::one()];
            let (q, rem) = kdivmod(&rest, &lin);
            if rem.is_empty() {
                roots.push(root.clone());
                rest = q;
            } else {
                break;
            }
        }
    }
    if rest.len() <= 1 {
        return Ok(roots);
    }
    if rest.len() == 2 {
        roots.push(-&rest[0]);
        return Ok(roots);
    }
    if rest.len() == 3 {
        // x^2 + px + q over K
        let p1 = rest[1].clone();
        let q0 = rest[0].clone();
        let disc = &(&p1 * &p1) - &(&Cyclotomic::from_int(4) * &q0);
        if let Some(s) = sqrt_in_field(&disc, order) {
            let half = Cyclotomic::from_ratio(1, 2);
            let r1 = &(&(-&p1) + &s) * &half;
            let r2 = &(&(-&p1) - &s) * &half;
            debug_assert!(keval(&rest, &r1).is_zero());
            roots.push(r1);
            if !keval(&rest, &r2).is_zero() {
                return Err(LieError::NotToral(
                    "quadratic factor with a repeated irrational root".to_string(),
                ));
            }
            roots.push(r2);
            return Ok(roots);
        }
        return Err(LieError::NotToral(
            "eigenvalues do not lie in Q(zeta_m)".to_string(),
        ));
    }
    Err(LieError::NotToral(format!(
        "cannot split residual factor of degree {} over Q(zeta_m)",
        rest.len() - 1
    )))
}

// ---- simultaneous eigenspaces ----------------------------------------------

/// Joint eigenspace decomposition of a commuting family over Q(zeta_ambient).
/// Returns pairs of (eigenvalue per operator, column basis). Errors when an
/// operator fails to split completely over the field.
pub fn simultaneous_eigenspaces(
    ops: &[SparseMat],
    dim: usize,
    ambient: u64,
) -> Result<Vec<(Vec<Cyclotomic>, Mat)>, LieError> {
    let mut blocks: Vec<(Vec<Cyclotomic>, Mat)> = vec![(vec![], Mat::identity(dim))];
    for op in ops {
        let mut next = Vec::new();
        for (evals, basis) in blocks {
            let b = basis.cols;
            if b == 0 {
                continue;
            }
            // Restriction C of op to the block: op * basis = basis * C.
            let mut c = Mat::zero(b, b);
            for j in 0..b {
                let img = op.apply_dense(&basis.column(j));
                let coords = Mat::coords_in_span(&basis, &img).ok_or_else(|| {
                    LieError::NotToral("operator does not preserve a joint block".to_string())
                })?;
                for i in 0..b {
                    *c.at_mut(i, j) = coords[i].clone();
                }
            }
            let field_order = ambient;
            let sp = SparseMat {
                dim_in: b,
                dim_out: b,
                cols: (0..b)
                    .map(|j| {
                        (0..b)
                            .filter(|&i| !c.at(i, j).is_zero())
                            .map(|i| (i, c.at(i, j).clone()))
                            .collect()
                    })
                    .collect(),
            };
            let mu = minimal_polynomial(&sp);
            let mut eigs = roots_in_field(&mu, field_order)?;
            eigs.sort_by_key(|e| e.sort_key());
            eigs.dedup();
            let mut covered = 0usize;
            for lam in eigs {
                // kernel of (C - lam I)
                let mut shifted = c.clone();
                for i in 0..b {
                    *shifted.at_mut(i, i) -= &lam;
                }
                let ker = shifted.kernel_basis();
                if ker.is_empty() {
                    continue;
                }
                covered += ker.len();
                // map kernel vectors to ambient coordinates
                let cols: Vec<Vec<Cyclotomic>> =
                    ker.iter().map(|k| basis.apply(k)).collect();
                let sub = Mat::from_columns(&cols, basis.rows);
                let mut ev = evals.clone();
                ev.push(lam);
                next.push((ev, sub));
            }
            if covered != b {
                return Err(LieError::NotToral(format!(
                    "operator splits only {} of {} dimensions",
                    covered, b
                )));
            }
        }
        blocks = next;
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    fn diag(vals: &[i64]) -> SparseMat {
        SparseMat {
            dim_in: vals.len(),
            dim_out: vals.len(),
            cols: vals
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if *v == 0 {
                        vec![]
                    } else {
                        vec![(i, c(*v))]
                    }
                })
                .collect(),
        }
    }

    #[test]
    fn min_poly_of_diagonal() {
        let m = diag(&[1, 1, 2, 0]);
        let mu = minimal_polynomial(&m);
        // (x)(x-1)(x-2), degree 3
        assert_eq!(mu.len(), 4);
        let roots = roots_in_field(&mu, 1).unwrap();
        let mut vals: Vec<String> = roots.iter().map(|r| r.render()).collect();
        vals.sort();
        assert_eq!(vals, vec!["0", "1", "2"]);
    }

    #[test]
    fn simultaneous_split() {
        let a = diag(&[1, 1, 2]);
        let b = diag(&[3, 4, 5]);
        let blocks = simultaneous_eigenspaces(&[a, b], 3, 1).unwrap();
        assert_eq!(blocks.len(), 3);
        let total: usize = blocks.iter().map(|(_, m)| m.cols).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn nondiagonalizable_detected() {
        // Jordan block [[0,1],[0,0]]
        let m = SparseMat {
            dim_in: 2,
            dim_out: 2,
            cols: vec![vec![], vec![(0, c(1))]],
        };
        let res = simultaneous_eigenspaces(&[m], 2, 1);
        assert!(res.is_err());
    }

    #[test]
    fn rational_roots_complete() {
        use num_traits::FromPrimitive;
        // 6x^2 - 5x + 1 = (2x-1)(3x-1)
        let p = vec![
            BigRational::from_i64(1).unwrap(),
            BigRational::from_i64(-5).unwrap(),
            BigRational::from_i64(6).unwrap(),
        ];
        let mut r = rational_roots(&p).unwrap();
        r.sort();
        assert_eq!(
            r,
            vec![
                BigRational::new(BigInt::from(1), BigInt::from(3)),
                BigRational::new(BigInt::from(1), BigInt::from(2)),
            ]
        );
    }

    #[test]
    fn quadratic_roots_in_gaussian_field() {
        // x^2 + 1 splits over Q(zeta_4) with roots +-zeta
        let p = vec![c(1), c(0), c(1)];
        let roots = roots_in_field(&p, 4).unwrap();
        assert_eq!(roots.len(), 2);
        let z = Cyclotomic::primitive_root(4);
        assert!(roots.contains(&z));
        assert!(roots.contains(&-&z));
        // but not over Q
        assert!(roots_in_field(&p, 1).is_err());
    }
}
