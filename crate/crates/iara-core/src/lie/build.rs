//! Builders: sl_n over Q(zeta_m) with the trace form and diagonal Cartan;
//! the (2k+1)-square matrix core over a graded coefficient algebra with the
//! eps-twisted trace form; and the central/derivation extension
//! g = core (+) V (+) V-dagger shared by those cores and the affinization.

use std::collections::HashMap;

use crate::coeff::{Degree, GradedCoefficientAlgebra};
use crate::scalar::Cyclotomic;

use super::{Element, LieAlgebra, LieError};

/// Basis layout of make_sl, in index order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SlKind {
    /// elementary matrix e_{i,j}, 0-based, i != j
    Off { i: usize, j: usize },
    /// h_d = e_{d,d} - e_{d+1,d+1}
    H { d: usize },
}

pub struct SlPair {
    pub algebra: LieAlgebra,
    pub toral: Vec<Element>,
    pub kinds: Vec<SlKind>,
}

type IntMatrix = HashMap<(usize, usize), i64>;

fn sl_kind_matrix(kind: &SlKind) -> IntMatrix {
    let mut m = IntMatrix::new();
    match kind {
        SlKind::Off { i, j } => {
            m.insert((*i, *j), 1);
        }
        SlKind::H { d } => {
            m.insert((*d, *d), 1);
            m.insert((*d + 1, *d + 1), -1);
        }
    }
    m
}

fn commutator(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let mut out = IntMatrix::new();
    let mut add = |key: (usize, usize), v: i64| {
        let e = out.entry(key).or_insert(0);
        *e += v;
        if *e == 0 {
            out.remove(&key);
        }
    };
    for ((i, j), x) in a {
        for ((k, l), y) in b {
            if j == k {
                add((*i, *l), x * y);
            }
            if l == i {
                add((*k, *j), -(x * y));
            }
        }
    }
    out
}

fn trace_product(a: &IntMatrix, b: &IntMatrix) -> i64 {
    let mut t = 0;
    for ((i, j), x) in a {
        if let Some(y) = b.get(&(*j, *i)) {
            t += x * y;
        }
    }
    t
}

/// Decompose a trace-free matrix into off-diagonal and telescoped h coords.
fn sl_matrix_coords(n: usize, kinds: &[SlKind], m: &IntMatrix) -> Element {
    let mut coords: Vec<(usize, Cyclotomic)> = Vec::new();
    let mut idx_of = HashMap::new();
    for (idx, k) in kinds.iter().enumerate() {
        idx_of.insert(k.clone(), idx);
    }
    let mut diag = vec![0i64; n];
    for ((i, j), v) in m {
        if i == j {
            diag[*i] = *v;
        } else {
            let idx = idx_of[&SlKind::Off { i: *i, j: *j }];
            coords.push((idx, Cyclotomic::from_int(*v)));
        }
    }
    debug_assert_eq!(diag.iter().sum::<i64>(), 0);
    let mut partial = 0i64;
    for d in 0..n - 1 {
        partial += diag[d];
        if partial != 0 {
            let idx = idx_of[&SlKind::H { d }];
            coords.push((idx, Cyclotomic::from_int(partial)));
        }
    }
    Element::from_terms(coords)
}

/// sl_n over Q(zeta_order) with the trace form and the diagonal Cartan.
pub fn make_sl(n: usize, order: u64) -> (LieAlgebra, Vec<Element>) {
    let sl = make_sl_full(n, order);
    (sl.algebra, sl.toral)
}

pub fn make_sl_full(n: usize, order: u64) -> SlPair {
    assert!(n >= 2);
    let mut kinds = Vec::new();
    let mut names = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                kinds.push(SlKind::Off { i, j });
                names.push(format!("e{}{}", i + 1, j + 1));
            }
        }
    }
    for d in 0..n - 1 {
        kinds.push(SlKind::H { d });
        names.push(format!("h{}", d + 1));
    }
    let mut alg = LieAlgebra::new(order, names);
    let mats: Vec<IntMatrix> = kinds.iter().map(sl_kind_matrix).collect();
    let dim = kinds.len();
    for a in 0..dim {
        for b in a + 1..dim {
            let c = commutator(&mats[a], &mats[b]);
            if !c.is_empty() {
                alg.set_bracket(a, b, sl_matrix_coords(n, &kinds, &c));
            }
        }
    }
    for a in 0..dim {
        for b in a..dim {
            let t = trace_product(&mats[a], &mats[b]);
            if t != 0 {
                alg.set_gram(a, b, Cyclotomic::from_int(t));
            }
        }
    }
    let toral = (0..n - 1)
        .map(|d| Element::basis(dim - (n - 1) + d))
        .collect();
    SlPair {
        algebra: alg,
        toral,
        kinds,
    }
}

/// Basis layout of the extended matrix core g = K (+) V (+) V-dagger.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KpmKind {
    /// b_t z^deg e_{row,col} (0-based positions; label = position - k)
    Off {
        row: usize,
        col: usize,
        b: usize,
        deg: Degree,
    },
    /// b_t z^deg (e_{d,d} - e_{d+1,d+1})
    Diag { d: usize, b: usize, deg: Degree },
    /// central basis vector lambda_s
    Central(usize),
    /// derivation d_s
    Deriv(usize),
}

pub struct SlKpm {
    pub algebra: LieAlgebra,
    pub toral: Vec<Element>,
    pub kinds: Vec<KpmKind>,
    /// matrix size 2k+1
    pub size: usize,
    pub core_dim: usize,
    pub v_start: usize,
    pub d_start: usize,
}

/// The Lie algebra sl_{K+-}(A) (+) V (+) V-dagger with toral part
/// span{e_ii - e_jj} (+) V (+) V-dagger, for A a commutative graded
/// coefficient algebra; truncated to the symmetric degree window.
pub fn make_sl_kpm(
    k_size: usize,
    coeff: &GradedCoefficientAlgebra,
    window: i64,
) -> Result<SlKpm, LieError> {
    if !coeff.commutative {
        return Err(LieError::Unsupported(
            "matrix core needs a commutative coefficient algebra".to_string(),
        ));
    }
    coeff
        .eps_invariant_on_window(window.min(2))
        .map_err(|e| LieError::Unsupported(format!("coefficient form not invariant: {}", e)))?;
    let one = coeff.one();
    if coeff.form_eps(&one, &one).is_zero() {
        return Err(LieError::Unsupported("eps(1,1) = 0".to_string()));
    }
    let s = 2 * k_size + 1;
    let bd = coeff.base.dim();
    let label = |p: usize| p as i64 - k_size as i64;
    let mut kinds: Vec<KpmKind> = Vec::new();
    let mut names: Vec<String> = Vec::new();
    let mut degrees: Vec<Degree> = Vec::new();
    let bname = |t: usize| {
        if bd == 1 {
            String::new()
        } else {
            format!("b{}.", t)
        }
    };
    for deg in coeff.lattice.window(window) {
        for i in 0..s {
            for j in 0..s {
                if i == j {
                    continue;
                }
                for t in 0..bd {
                    kinds.push(KpmKind::Off {
                        row: i,
                        col: j,
                        b: t,
                        deg: deg.clone(),
                    });
                    names.push(format!(
                        "{}z{:?}e({},{})",
                        bname(t),
                        deg,
                        label(i),
                        label(j)
                    ));
                    degrees.push(deg.clone());
                }
            }
        }
        for d in 0..s - 1 {
            for t in 0..bd {
                kinds.push(KpmKind::Diag {
                    d,
                    b: t,
                    deg: deg.clone(),
                });
                names.push(format!("{}z{:?}h({})", bname(t), deg, label(d)));
                degrees.push(deg.clone());
            }
        }
    }
    let core_dim = kinds.len();
    let rank = coeff.lattice.rank;

    // index lookup for (kind-of-matrix, base index, degree)
    let mut off_idx: HashMap<(usize, usize, usize, Degree), usize> = HashMap::new();
    let mut diag_idx: HashMap<(usize, usize, Degree), usize> = HashMap::new();
    for (ix, k) in kinds.iter().enumerate() {
        match k {
            KpmKind::Off { row, col, b, deg } => {
                off_idx.insert((*row, *col, *b, deg.clone()), ix);
            }
            KpmKind::Diag { d, b, deg } => {
                diag_idx.insert((*d, *b, deg.clone()), ix);
            }
            _ => unreachable!(),
        }
    }

    let matrix_of = |kind: &KpmKind| -> IntMatrix {
        let mut m = IntMatrix::new();
        match kind {
            KpmKind::Off { row, col, .. } => {
                m.insert((*row, *col), 1);
            }
            KpmKind::Diag { d, .. } => {
                m.insert((*d, *d), 1);
                m.insert((*d + 1, *d + 1), -1);
            }
            _ => {}
        }
        m
    };
    let coeff_vec = |t: usize| -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(); bd];
        v[t] = Cyclotomic::one();
        v
    };

    // coords of (c in B) * matrix at a given degree
    let assemble = |deg: &Degree, c: &[Cyclotomic], m: &IntMatrix| -> Element {
        let mut terms: Vec<(usize, Cyclotomic)> = Vec::new();
        let mut diag = vec![0i64; s];
        for ((i, j), v) in m {
            if i == j {
                diag[*i] = *v;
            } else {
                for (t, ct) in c.iter().enumerate() {
                    if !ct.is_zero() {
                        let ix = off_idx[&(*i, *j, t, deg.clone())];
                        terms.push((ix, &Cyclotomic::from_int(*v) * ct));
                    }
                }
            }
        }
        debug_assert_eq!(diag.iter().sum::<i64>(), 0);
        let mut partial = 0i64;
        for d in 0..s - 1 {
            partial += diag[d];
            if partial != 0 {
                for (t, ct) in c.iter().enumerate() {
                    if !ct.is_zero() {
                        let ix = diag_idx[&(d, t, deg.clone())];
                        terms.push((ix, &Cyclotomic::from_int(partial) * ct));
                    }
                }
            }
        }
        Element::from_terms(terms)
    };

    let mut core = LieAlgebra::new(1, names);
    core.degrees = Some(degrees);
    core.window = Some(window);

    for a in 0..core_dim {
        let (deg_a, ba) = match &kinds[a] {
            KpmKind::Off { b, deg, .. } | KpmKind::Diag { b, deg, .. } => (deg.clone(), *b),
            _ => unreachable!(),
        };
        let ma = matrix_of(&kinds[a]);
        for b in a + 1..core_dim {
            let (deg_b, bb) = match &kinds[b] {
                KpmKind::Off { b, deg, .. } | KpmKind::Diag { b, deg, .. } => (deg.clone(), *b),
                _ => unreachable!(),
            };
            let mb = matrix_of(&kinds[b]);
            let cm = commutator(&ma, &mb);
            if cm.is_empty() {
                continue;
            }
            let target = coeff.lattice.add(&deg_a, &deg_b);
            if !coeff.lattice.in_window(&target, window) {
                core.set_bracket_out_of_window(a, b);
                continue;
            }
            // coefficient: b_a * b_b * tau(deg_a, deg_b)
            let c = coeff
                .base
                .mul(&coeff.base.mul(&coeff_vec(ba), &coeff_vec(bb)), &coeff.tau(&deg_a, &deg_b));
            let v = assemble(&target, &c, &cm);
            if !v.is_zero() {
                core.set_bracket(a, b, v);
            }
        }
        // form row
        for b in a..core_dim {
            let (deg_b, bb) = match &kinds[b] {
                KpmKind::Off { b, deg, .. } | KpmKind::Diag { b, deg, .. } => (deg.clone(), *b),
                _ => unreachable!(),
            };
            if coeff
                .lattice
                .add(&deg_a, &deg_b)
                .iter()
                .any(|x| *x != 0)
            {
                continue;
            }
            let mb = matrix_of(&kinds[b]);
            let t = trace_product(&ma, &mb);
            if t == 0 {
                continue;
            }
            let e = coeff.base.eps(&coeff_vec(ba), &coeff_vec(bb));
            let val = &Cyclotomic::from_int(t) * &e;
            if !val.is_zero() {
                core.set_gram(a, b, val);
            }
        }
    }

    // Nondegeneracy of the core form (holds iff the center is zero).
    {
        use crate::matrix::Mat;
        let n = core_dim;
        let mut g = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                *g.at_mut(i, j) = core.form_basis(i, j);
            }
        }
        if g.rank() != n {
            return Err(LieError::CenterNonzero);
        }
    }

    let ext = extend_by_lattice(&core, rank)?;
    let mut kinds = kinds;
    for s_ in 0..rank {
        kinds.push(KpmKind::Central(s_));
    }
    for s_ in 0..rank {
        kinds.push(KpmKind::Deriv(s_));
    }
    // T = span{e_ii - e_jj} (+) V (+) V-dagger, with unit coefficient in A^0.
    let mut toral = Vec::new();
    let zero_deg = coeff.lattice.zero();
    let unit = coeff.base.unit();
    for d in 0..s - 1 {
        let mut e = Element::zero();
        for (t, c) in unit.iter().enumerate() {
            if !c.is_zero() {
                e = e.add(&Element::basis(diag_idx[&(d, t, zero_deg.clone())]).scale(c));
            }
        }
        toral.push(e);
    }
    for ix in ext.v_indices.iter().chain(ext.d_indices.iter()) {
        toral.push(Element::basis(*ix));
    }
    Ok(SlKpm {
        algebra: ext.algebra,
        toral,
        kinds,
        size: s,
        core_dim,
        v_start: core_dim,
        d_start: core_dim + rank,
    })
}

pub struct LatticeExtension {
    pub algebra: LieAlgebra,
    pub core_dim: usize,
    pub v_indices: Vec<usize>,
    pub d_indices: Vec<usize>,
}

/// Adjoin the central space V (basis lambda_1..lambda_r) and the degree
/// derivations V-dagger (basis d_1..d_r) to a lattice-graded core:
///   [d, x] = d(lambda) x,   [V, g] = 0,
///   [x, y] = [x, y]_core + sum_s ([d_s, x], y) lambda_s,
/// with the dual pairing (lambda_i, d_j) = delta_ij added to the form.
pub fn extend_by_lattice(core: &LieAlgebra, rank: usize) -> Result<LatticeExtension, LieError> {
    let degrees = core
        .degrees
        .as_ref()
        .ok_or_else(|| LieError::Unsupported("core carries no degree labels".to_string()))?;
    if degrees.iter().any(|d| d.len() != rank) {
        return Err(LieError::Unsupported(
            "degree labels do not match the lattice rank".to_string(),
        ));
    }
    let n = core.dim();
    let mut names = core.names.clone();
    for s in 0..rank {
        names.push(format!("lam{}", s + 1));
    }
    for s in 0..rank {
        names.push(format!("d{}", s + 1));
    }
    let mut alg = LieAlgebra::new(core.order, names);
    let mut degs = degrees.clone();
    degs.extend(std::iter::repeat(vec![0; rank]).take(2 * rank));
    alg.degrees = Some(degs);
    alg.window = core.window;

    let v_indices: Vec<usize> = (n..n + rank).collect();
    let d_indices: Vec<usize> = (n + rank..n + 2 * rank).collect();

    for i in 0..n {
        for j in i + 1..n {
            match core.bracket_basis(i, j) {
                Err(LieError::Truncated) => alg.set_bracket_out_of_window(i, j),
                Err(e) => return Err(e),
                Ok(base) => {
                    let mut v = base;
                    // central 2-cocycle term sum_s d_s(lambda_i) (x_i, x_j) lambda_s
                    let form = core.form_basis(i, j);
                    if !form.is_zero() {
                        for (s, &vi) in v_indices.iter().enumerate() {
                            let ds_li = degrees[i][s];
                            if ds_li != 0 {
                                let c = &Cyclotomic::from_int(ds_li) * &form;
                                v = v.add(&Element::basis(vi).scale(&c));
                            }
                        }
                    }
                    if !v.is_zero() {
                        alg.set_bracket(i, j, v);
                    }
                }
            }
        }
        // [d_s, x_i] = lambda_i[s] x_i
        for (s, &di) in d_indices.iter().enumerate() {
            let c = degrees[i][s];
            if c != 0 {
                alg.set_bracket(di, i, Element::basis(i).scale(&Cyclotomic::from_int(c)));
            }
        }
    }
    // forms
    for i in 0..n {
        for j in i..n {
            let f = core.form_basis(i, j);
            if !f.is_zero() {
                alg.set_gram(i, j, f);
            }
        }
    }
    for s in 0..rank {
        alg.set_gram(v_indices[s], d_indices[s], Cyclotomic::one());
    }
    Ok(LatticeExtension {
        algebra: alg,
        core_dim: n,
        v_indices,
        d_indices,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{check_ia1, check_ia2, in_span, ToralPair};
    use std::sync::Arc;

    #[test]
    fn sl2_structure() {
        let (alg, toral) = make_sl(2, 1);
        assert_eq!(alg.dim(), 3);
        // [e, f] = h, [h, e] = 2e, [h, f] = -2f with e = e12, f = e21
        let e = Element::basis(0);
        let f = Element::basis(1);
        let h = &toral[0];
        assert_eq!(alg.bracket(&e, &f).unwrap(), *h);
        assert_eq!(
            alg.bracket(h, &e).unwrap(),
            e.scale(&Cyclotomic::from_int(2))
        );
        assert_eq!(
            alg.bracket(h, &f).unwrap(),
            f.scale(&Cyclotomic::from_int(-2))
        );
    }

    #[test]
    fn sl_jacobi_and_invariance() {
        let (alg, _) = make_sl(3, 1);
        let n = alg.dim();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let x = Element::basis(i);
                    let y = Element::basis(j);
                    let z = Element::basis(k);
                    assert!(alg.jacobi_defect(&x, &y, &z).unwrap().is_zero());
                    assert!(alg.invariance_defect(&x, &y, &z).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn kpm_root_spaces() {
        // K = {1}, J = {1}, B = Q: g = sl_3(Q[z^{+-1}]) (+) V (+) V-dagger
        let coeff = GradedCoefficientAlgebra::laurent(1);
        let kpm = make_sl_kpm(1, &coeff, 2).unwrap();
        // 8 per degree * 5 degrees + lambda + d
        assert_eq!(kpm.algebra.dim(), 42);
        let pair = ToralPair::new(Arc::new(kpm.algebra), kpm.toral);
        let dec = pair.decompose().unwrap();
        // g_{alpha_ij + lambda} = A^lambda e_ij: one-dimensional
        // nonzero root count: 6 matrix roots * 5 degrees + 4 pure-lattice
        let nonzero: Vec<_> = dec.nonzero_roots().collect();
        assert_eq!(nonzero.len(), 34);
        for (i, r) in &nonzero {
            // pure-lattice roots have 2-dim spaces (trace-zero diagonals)
            let pure_lattice = r.coords[..2].iter().all(|c| c.is_zero());
            if pure_lattice {
                assert_eq!(dec.spaces[*i].len(), 2);
            } else {
                assert_eq!(dec.spaces[*i].len(), 1);
            }
        }
        assert!(check_ia1(&pair, &dec).pass);
        let (v2, wits) = check_ia2(&pair, &dec).unwrap();
        assert!(v2.pass, "{}", v2.render());
        assert!(!wits.is_empty());
    }

    #[test]
    fn kpm_t_representative_matches() {
        // t_{alpha_ij} = e_ii - e_jj for the trace-eps form
        let coeff = GradedCoefficientAlgebra::laurent(1);
        let kpm = make_sl_kpm(1, &coeff, 1).unwrap();
        let alg = Arc::new(kpm.algebra);
        let pair = ToralPair::new(alg.clone(), kpm.toral.clone());
        let dec = pair.decompose().unwrap();
        // pick the root with coords alpha(h(-1)) = ... for e(1,0):
        // alpha_{1,0}(e_ii - e_jj) values determine it; just verify each
        // representative reproduces its root values.
        for (i, r) in dec.nonzero_roots() {
            let t = crate::lie::representative(&pair, r).unwrap();
            for (ti, c) in pair.toral.iter().zip(&r.coords) {
                assert_eq!(pair.algebra.form(&t, ti), c.clone());
            }
            let _ = i;
        }
    }

    #[test]
    fn truncation_marks_out_of_window() {
        let coeff = GradedCoefficientAlgebra::laurent(1);
        let kpm = make_sl_kpm(1, &coeff, 1).unwrap();
        // [z^1 e(1,0), z^1 e(0,-1)] has degree 2: out of window
        let alg = &kpm.algebra;
        let find = |pat: &str| {
            alg.names
                .iter()
                .position(|n| n == pat)
                .unwrap_or_else(|| panic!("basis {} missing", pat))
        };
        let a = find("z[1]e(1,0)");
        let b = find("z[1]e(0,-1)");
        assert!(matches!(
            alg.bracket_basis(a, b),
            Err(LieError::Truncated)
        ));
        // but degree-compatible brackets stay exact
        let c = find("z[-1]e(0,-1)");
        let br = alg.bracket_basis(a, c).unwrap();
        assert!(!br.is_zero());
        assert!(in_span(alg, &[br], &alg.bracket_basis(a, c).unwrap()));
    }

    #[test]
    fn lattice_extension_bracket_rules() {
        let coeff = GradedCoefficientAlgebra::laurent(1);
        let kpm = make_sl_kpm(1, &coeff, 2).unwrap();
        let alg = &kpm.algebra;
        let lam = kpm.v_start;
        let d = kpm.d_start;
        // [V, g] = 0
        for j in 0..alg.dim() {
            if j != lam {
                assert!(alg.bracket_basis(lam, j).unwrap().is_zero());
            }
        }
        // [d, x] = d(lambda) x for x in degree lambda
        let find = |pat: &str| alg.names.iter().position(|n| n == pat).unwrap();
        let x = find("z[2]e(1,0)");
        assert_eq!(
            alg.bracket_basis(d, x).unwrap(),
            Element::basis(x).scale(&Cyclotomic::from_int(2))
        );
        // central term: [z e(1,0), z^-1 e(0,1)] picks up (x, y) d(1) lambda_1
        let a = find("z[1]e(1,0)");
        let b = find("z[-1]e(0,1)");
        let br = alg.bracket_basis(a, b).unwrap();
        let lam_coeff = br.coeff(lam);
        assert_eq!(lam_coeff, Cyclotomic::one());
    }
}
