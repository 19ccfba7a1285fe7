//! The restricted toral pair (g, T^0), the fixed-point subalgebra
//! (g^0, T^0), their root systems pi(R) and R^sigma, and the verification
//! suites showing both are (division) IARAs on the window.

use std::sync::Arc;

use crate::grading::{orbit_data, zm_grading, Automorphism, Grading, OrbitData};
use crate::lie::{
    check_ia1, check_ia2_division, check_ia2_with, check_ia3, root_form, Element, LieAlgebra,
    LieError, Root, RootDecomposition, ToralPair,
};
use crate::matrix::Mat;
use crate::report::{Section, Verdict};
use crate::scalar::Cyclotomic;

/// Coordinates of a functional on a sub-toral basis: values alpha(t) for t
/// in `sub`, where alpha is given by coordinates on the pair's toral basis.
pub fn project_root(pair: &ToralPair, root: &Root, sub: &[Element]) -> Root {
    let alg = &pair.algebra;
    let n = alg.dim();
    let cols: Vec<Vec<Cyclotomic>> = pair.toral.iter().map(|t| t.to_dense(n)).collect();
    let tmat = Mat::from_columns(&cols, n);
    let coords = sub
        .iter()
        .map(|t| {
            let c = Mat::coords_in_span(&tmat, &t.to_dense(n)).expect("sub-toral inside T");
            let mut v = Cyclotomic::zero();
            for (ci, ri) in c.iter().zip(&root.coords) {
                v += &(ci * ri);
            }
            v
        })
        .collect();
    Root { coords }
}

/// The restricted pair (g, T^0) with its root space decomposition, verified
/// against the original decomposition degreewise: each g_{pi(alpha)} must be
/// exactly the sum of the g_beta with matching restriction.
pub struct RestrictedPair {
    pub pair: ToralPair,
    pub dec: RootDecomposition,
}

pub fn restricted_pair(
    base: &ToralPair,
    base_dec: &RootDecomposition,
    grading: &Grading,
    orbits: &OrbitData,
) -> Result<RestrictedPair, LieError> {
    let t0 = grading.t_components[0].clone();
    let pair = ToralPair::new(base.algebra.clone(), t0);
    let dec = pair.decompose()?;
    // dimension bookkeeping: dim g_{pi(alpha)} = sum over matching beta
    for (i, r) in dec.roots.iter().enumerate() {
        let expected: usize = base_dec
            .roots
            .iter()
            .enumerate()
            .filter(|(k, _)| project_root(base, &orbits.pi_root[*k], &pair.toral) == *r)
            .map(|(k, _)| base_dec.spaces[k].len())
            .sum();
        if expected != dec.spaces[i].len() {
            return Err(LieError::InconsistentDecomposition(format!(
                "dim g_{} is {} but the matching original spaces sum to {}",
                r.render(),
                dec.spaces[i].len(),
                expected
            )));
        }
    }
    Ok(RestrictedPair { pair, dec })
}

/// Orthogonality of distinct restricted components:
/// (g_{pi(alpha)}, g_{pi(beta)}) = 0 whenever pi(alpha) + pi(beta) != 0.
pub fn check_restricted_orthogonality(rp: &RestrictedPair) -> Verdict {
    let alg = &rp.pair.algebra;
    let stamp = window_stamp(alg);
    for (i, a) in rp.dec.roots.iter().enumerate() {
        for (j, b) in rp.dec.roots.iter().enumerate() {
            if a.add(b).is_zero() {
                continue;
            }
            for x in &rp.dec.spaces[i] {
                for y in &rp.dec.spaces[j] {
                    if !alg.form(x, y).is_zero() {
                        return Verdict::fail(
                            "restricted-orthogonality",
                            stamp,
                            format!("(g_{}, g_{}) != 0", a.render(), b.render()),
                        );
                    }
                }
            }
        }
    }
    Verdict::pass("restricted-orthogonality", stamp, "")
}

fn window_stamp(alg: &LieAlgebra) -> String {
    match alg.window {
        Some(n) => format!("window |lambda| <= {}", n),
        None => "full space".to_string(),
    }
}

/// Connectivity of the nonisotropic roots under (alpha, beta) != 0.
pub fn indecomposable(pair: &ToralPair, dec: &RootDecomposition) -> Result<bool, LieError> {
    let mut nodes = Vec::new();
    for (_, r) in dec.nonzero_roots() {
        if !root_form(pair, r, r)?.is_zero() {
            nodes.push(r.clone());
        }
    }
    if nodes.is_empty() {
        return Ok(false);
    }
    let mut seen = vec![false; nodes.len()];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..nodes.len() {
            if !seen[j] && !root_form(pair, &nodes[i], &nodes[j])?.is_zero() {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    Ok(seen.into_iter().all(|s| s))
}

/// The suite for the restricted pair: builds (g, T^0) and runs the IARA
/// axioms at the stated bound, plus orthogonality and indecomposability
/// transfer.
pub fn verify_theorem_restricted(
    base: &ToralPair,
    base_dec: &RootDecomposition,
    sigma: &Automorphism,
    bound: usize,
) -> Result<(Section, RestrictedPair), LieError> {
    let grading = zm_grading(base, sigma)?;
    let orbits = orbit_data(base_dec, &grading)?;
    let rp = restricted_pair(base, base_dec, &grading, &orbits)?;
    let mut sec = Section::new("restricted pair (g, T^0)");
    sec.line(format!(
        "restricted roots: {}  (from {} original roots)",
        rp.dec.roots.len(),
        base_dec.roots.len()
    ));
    sec.verdict(check_ia1(&rp.pair, &rp.dec));
    // IA2 witnesses live in the graded pieces pi_j(g_beta); feed those as
    // candidates ahead of the stored basis.
    let n = base.algebra.dim();
    let m = grading.m as usize;
    let candidates = |ri: usize| -> Vec<Element> {
        let r = &rp.dec.roots[ri];
        let mut out = Vec::new();
        for (k, _) in base_dec.roots.iter().enumerate() {
            if &project_root(base, &orbits.pi_root[k], &rp.pair.toral) != r {
                continue;
            }
            for x in &base_dec.spaces[k] {
                for p in grading.pi.iter().take(m) {
                    let pjx = Element::from_dense(&p.apply(&x.to_dense(n)));
                    if !pjx.is_zero() {
                        out.push(pjx);
                    }
                }
            }
        }
        out
    };
    let (v2, _) = check_ia2_with(&rp.pair, &rp.dec, &candidates)?;
    sec.verdict(v2);
    sec.verdict(check_ia3(&rp.pair, &rp.dec, bound)?.verdict);
    sec.verdict(check_restricted_orthogonality(&rp));
    if indecomposable(base, base_dec)? {
        let v = if indecomposable(&rp.pair, &rp.dec)? {
            Verdict::pass(
                "indecomposability-transfer",
                window_stamp(&base.algebra),
                "pi(R) inherits indecomposability",
            )
        } else {
            Verdict::fail(
                "indecomposability-transfer",
                window_stamp(&base.algebra),
                "R indecomposable but pi(R) is not",
            )
        };
        sec.verdict(v);
    }
    Ok((sec, rp))
}

/// The fixed-point subalgebra g^0 = ker(sigma - id) with its induced
/// structure constants, its toral part T^0 and its decomposition.
pub struct FixedSubalgebra {
    pub pair: ToralPair,
    pub dec: RootDecomposition,
    /// basis of g^0 in the coordinates of the parent algebra
    pub embedding: Vec<Element>,
}

pub fn fixed_subalgebra(
    base: &ToralPair,
    sigma: &Automorphism,
) -> Result<FixedSubalgebra, LieError> {
    let alg = &base.algebra;
    let n = alg.dim();
    let grading = zm_grading(base, sigma)?;

    // Degree-pure fixed basis when labels are present and sigma preserves
    // them; otherwise a plain basis with labels dropped.
    let sigma_preserves_degrees = match &alg.degrees {
        None => false,
        Some(degs) => (0..n).all(|i| {
            sigma.images[i]
                .terms
                .keys()
                .all(|j| degs[*j] == degs[i])
        }),
    };
    let mut basis: Vec<Element> = Vec::new();
    let mut sub_degrees: Option<Vec<crate::coeff::Degree>> = None;
    if sigma_preserves_degrees {
        let degs = alg.degrees.as_ref().unwrap();
        let mut uniq: Vec<crate::coeff::Degree> = Vec::new();
        for d in degs {
            if !uniq.contains(d) {
                uniq.push(d.clone());
            }
        }
        uniq.sort();
        let mut labels = Vec::new();
        for d in &uniq {
            let idxs: Vec<usize> = (0..n).filter(|i| &degs[*i] == d).collect();
            // columns of pi_0 restricted to this block
            let cols: Vec<Vec<Cyclotomic>> = idxs
                .iter()
                .map(|&i| grading.pi[0].apply(&Element::basis(i).to_dense(n)))
                .collect();
            for v in Mat::from_columns(&cols, n).column_space_basis() {
                basis.push(Element::from_dense(&v));
                labels.push(d.clone());
            }
        }
        sub_degrees = Some(labels);
    } else {
        basis = grading.components[0].clone();
    }

    let dim0 = basis.len();
    let names: Vec<String> = basis.iter().map(|e| alg.render(e)).collect();
    let mut sub = LieAlgebra::new(alg.order, names);
    sub.degrees = sub_degrees;
    sub.window = alg.window;
    let cols: Vec<Vec<Cyclotomic>> = basis.iter().map(|e| e.to_dense(n)).collect();
    let bmat = Mat::from_columns(&cols, n);
    for i in 0..dim0 {
        for j in i + 1..dim0 {
            match alg.bracket(&basis[i], &basis[j]) {
                Err(LieError::Truncated) => sub.set_bracket_out_of_window(i, j),
                Err(e) => return Err(e),
                Ok(br) => {
                    let coords = Mat::coords_in_span(&bmat, &br.to_dense(n)).ok_or_else(|| {
                        LieError::InconsistentDecomposition(
                            "fixed subalgebra is not closed under the bracket".to_string(),
                        )
                    })?;
                    let v = Element::from_dense(&coords);
                    if !v.is_zero() {
                        sub.set_bracket(i, j, v);
                    }
                }
            }
        }
        for j in i..dim0 {
            let f = alg.form(&basis[i], &basis[j]);
            if !f.is_zero() {
                sub.set_gram(i, j, f);
            }
        }
    }
    // T^0 in subalgebra coordinates
    let toral: Vec<Element> = grading.t_components[0]
        .iter()
        .map(|t| {
            let coords = Mat::coords_in_span(&bmat, &t.to_dense(n))
                .expect("T^0 lies inside g^0");
            Element::from_dense(&coords)
        })
        .collect();
    let pair = ToralPair::new(Arc::new(sub), toral);
    let dec = pair.decompose()?;
    Ok(FixedSubalgebra {
        pair,
        dec,
        embedding: basis,
    })
}

/// The suite for the fixed-point pair (g^0, T^0): IA1, IA2', IA3, and the
/// containment R^sigma <= pi(R).
pub fn verify_theorem_fixed(
    base: &ToralPair,
    base_dec: &RootDecomposition,
    sigma: &Automorphism,
    bound: usize,
) -> Result<(Section, FixedSubalgebra), LieError> {
    let grading = zm_grading(base, sigma)?;
    let orbits = orbit_data(base_dec, &grading)?;
    let fixed = fixed_subalgebra(base, sigma)?;
    let mut sec = Section::new("fixed-point pair (g^0, T^0)");
    sec.line(format!(
        "dim g^0 = {}, |R^sigma| = {} roots",
        fixed.pair.algebra.dim(),
        fixed.dec.roots.len()
    ));
    sec.verdict(check_ia1(&fixed.pair, &fixed.dec));
    let (v2, _) = check_ia2_division(&fixed.pair, &fixed.dec)?;
    sec.verdict(v2);
    sec.verdict(check_ia3(&fixed.pair, &fixed.dec, bound)?.verdict);

    // R^sigma <= pi(R), compared through values on the T^0 basis.
    let t0 = &grading.t_components[0];
    let pi_r: Vec<Root> = base_dec
        .roots
        .iter()
        .enumerate()
        .map(|(k, _)| project_root(base, &orbits.pi_root[k], t0))
        .collect();
    // R^sigma roots are on the subalgebra's toral basis, which corresponds
    // 1:1 to t0 (same elements in sub coordinates), so values match up.
    let containment = fixed.dec.roots.iter().all(|r| pi_r.contains(r));
    sec.verdict(if containment {
        Verdict::pass(
            "fixed-roots-inside-restricted",
            window_stamp(&base.algebra),
            "R^sigma a subset of pi(R)",
        )
    } else {
        Verdict::fail(
            "fixed-roots-inside-restricted",
            window_stamp(&base.algebra),
            "some fixed-point root is not a restricted root",
        )
    });
    Ok((sec, fixed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::GradedCoefficientAlgebra;
    use crate::grading::{kpm_involution, sl_transpose_neg, Automorphism};
    use crate::lie::{make_sl, make_sl_kpm};

    fn sl3_setup() -> (ToralPair, RootDecomposition, Automorphism) {
        let (alg, toral) = make_sl(3, 2);
        let pair = ToralPair::new(Arc::new(alg), toral);
        let dec = pair.decompose().unwrap();
        let sigma = sl_transpose_neg(3);
        (pair, dec, sigma)
    }

    #[test]
    fn identity_restriction_is_original() {
        let (alg, toral) = make_sl(3, 1);
        let pair = ToralPair::new(Arc::new(alg), toral);
        let dec = pair.decompose().unwrap();
        let sigma = Automorphism::identity(pair.algebra.dim(), 1);
        let (sec, rp) = verify_theorem_restricted(&pair, &dec, &sigma, 10).unwrap();
        assert!(sec.all_pass());
        assert_eq!(rp.dec.roots.len(), dec.roots.len());
        let (fsec, fixed) = verify_theorem_fixed(&pair, &dec, &sigma, 10).unwrap();
        assert!(fsec.all_pass());
        assert_eq!(fixed.pair.algebra.dim(), pair.algebra.dim());
    }

    #[test]
    fn sl3_involution_restricted_rank_one() {
        let (pair, dec, sigma) = sl3_setup();
        let (sec, rp) = verify_theorem_restricted(&pair, &dec, &sigma, 10).unwrap();
        assert!(sec.all_pass(), "{:?}", sec);
        // rank 1: T^0 is one-dimensional; restricted roots {0, +-a, +-2a}
        assert_eq!(rp.pair.rank(), 1);
        assert_eq!(rp.dec.roots.len(), 5);
    }

    #[test]
    fn sl3_involution_fixed_is_proper() {
        let (pair, dec, sigma) = sl3_setup();
        let (sec, fixed) = verify_theorem_fixed(&pair, &dec, &sigma, 10).unwrap();
        assert!(sec.all_pass(), "{:?}", sec);
        // fixed algebra is 3-dimensional with roots {0, +-a}: R^sigma is a
        // proper subset of pi(R) here
        assert_eq!(fixed.pair.algebra.dim(), 3);
        assert_eq!(fixed.dec.roots.len(), 3);
    }

    #[test]
    fn kpm_restricted_and_fixed() {
        let coeff = GradedCoefficientAlgebra::laurent(1);
        let kpm = make_sl_kpm(1, &coeff, 1).unwrap();
        let sigma = kpm_involution(&kpm);
        let pair = ToralPair::new(Arc::new(kpm.algebra), kpm.toral);
        let dec = pair.decompose().unwrap();
        let (sec, _rp) = verify_theorem_restricted(&pair, &dec, &sigma, 10).unwrap();
        assert!(sec.all_pass(), "{:?}", sec);
        let (fsec, _fixed) = verify_theorem_fixed(&pair, &dec, &sigma, 10).unwrap();
        assert!(fsec.all_pass(), "{:?}", fsec);
    }
}
