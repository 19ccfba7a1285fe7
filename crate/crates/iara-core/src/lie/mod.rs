//! Structure-constant Lie algebras over Q(zeta_m) with invariant forms,
//! toral pairs and root space decompositions.
//!
//! An algebra may be the finite truncation of a lattice-graded infinite
//! algebra: basis vectors then carry degree labels and brackets whose true
//! value lives outside the window are stored as `OutOfWindow`. Every
//! verification that touches such a bracket skips the tuple instead of
//! failing, so reported failures are genuine and never truncation artifacts.

mod axioms;
mod build;
mod eigen;

pub use axioms::{
    centralizer, check_ia1, check_ia2, check_ia2_division, check_ia2_with, check_ia3, in_span, intersect_spans,
    representative, root_form, sl2_triple, Ia2Witness, Ia3Report,
};
pub use build::{
    extend_by_lattice, make_sl, make_sl_full, make_sl_kpm, KpmKind, LatticeExtension, SlKind,
    SlKpm, SlPair,
};
pub use eigen::{adjoint_matrix, simultaneous_eigenspaces, SparseMat};

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::coeff::Degree;
use crate::matrix::Mat;
use crate::scalar::Cyclotomic;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LieError {
    #[error("toral set is not ad-diagonalizable over Q(zeta_m): {0}")]
    NotToral(String),
    #[error("bracket leaves the truncation window")]
    Truncated,
    #[error("invariant form is degenerate on T")]
    DegenerateFormOnT,
    #[error("no witness: {0}")]
    NoWitness(String),
    #[error("element does not lie in the stated root space")]
    RootMismatch,
    #[error("form on the matrix core is degenerate (nonzero center)")]
    CenterNonzero,
    #[error("window must be symmetric")]
    WindowNotSymmetric,
    #[error("inconsistent decomposition: {0}")]
    InconsistentDecomposition(String),
    #[error("{0}")]
    Unsupported(String),
}

/// Sparse element: coefficients on the algebra basis, no zeros stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Element {
    pub terms: BTreeMap<usize, Cyclotomic>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(i: usize) -> Self {
        let mut e = Element::zero();
        e.terms.insert(i, Cyclotomic::one());
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Cyclotomic)>) -> Self {
        let mut e = Element::zero();
        for (i, c) in terms {
            if !c.is_zero() {
                let entry = e.terms.entry(i).or_insert_with(Cyclotomic::zero);
                *entry += &c;
                if entry.is_zero() {
                    e.terms.remove(&i);
                }
            }
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Cyclotomic {
        self.terms.get(&i).cloned().unwrap_or_else(Cyclotomic::zero)
    }

    pub fn add(&self, other: &Element) -> Element {
        let mut out = self.clone();
        for (i, c) in &other.terms {
            let entry = out.terms.entry(*i).or_insert_with(Cyclotomic::zero);
            *entry += c;
            if entry.is_zero() {
                out.terms.remove(i);
            }
        }
        out
    }

    pub fn sub(&self, other: &Element) -> Element {
        self.add(&other.scale(&Cyclotomic::from_int(-1)))
    }

    pub fn scale(&self, s: &Cyclotomic) -> Element {
        if s.is_zero() {
            return Element::zero();
        }
        Element {
            terms: self.terms.iter().map(|(i, c)| (*i, c * s)).collect(),
        }
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Cyclotomic> {
        let mut v = vec![Cyclotomic::zero(); dim];
        for (i, c) in &self.terms {
            v[*i] = c.clone();
        }
        v
    }

    pub fn from_dense(v: &[Cyclotomic]) -> Element {
        Element::from_terms(v.iter().cloned().enumerate())
    }
}

#[derive(Clone, Debug)]
enum BracketEntry {
    Elem(Element),
    OutOfWindow,
}

/// A Lie algebra given by a sparse bracket table and a sparse symmetric
/// Gram table on an indexed basis.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    /// ambient cyclotomic order: all scalars live in Q(zeta_order)
    pub order: u64,
    pub names: Vec<String>,
    /// lattice degree labels when the algebra is a windowed truncation
    pub degrees: Option<Vec<Degree>>,
    /// symmetric box bound for the labels above
    pub window: Option<i64>,
    bracket: HashMap<(usize, usize), BracketEntry>,
    gram: HashMap<(usize, usize), Cyclotomic>,
}

impl LieAlgebra {
    pub fn new(order: u64, names: Vec<String>) -> Self {
        LieAlgebra {
            order,
            names,
            degrees: None,
            window: None,
            bracket: HashMap::new(),
            gram: HashMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    /// Record [e_i, e_j] = v (i != j); the antisymmetric entry is implied.
    pub fn set_bracket(&mut self, i: usize, j: usize, v: Element) {
        assert_ne!(i, j);
        let (a, b, v) = if i < j {
            (i, j, v)
        } else {
            (j, i, v.scale(&Cyclotomic::from_int(-1)))
        };
        if v.is_zero() {
            self.bracket.remove(&(a, b));
        } else {
            self.bracket.insert((a, b), BracketEntry::Elem(v));
        }
    }

    pub fn set_bracket_out_of_window(&mut self, i: usize, j: usize) {
        assert_ne!(i, j);
        let key = if i < j { (i, j) } else { (j, i) };
        self.bracket.insert(key, BracketEntry::OutOfWindow);
    }

    pub fn set_gram(&mut self, i: usize, j: usize, v: Cyclotomic) {
        let key = if i <= j { (i, j) } else { (j, i) };
        if v.is_zero() {
            self.gram.remove(&key);
        } else {
            self.gram.insert(key, v);
        }
    }

    /// [e_i, e_j]; Err(Truncated) when the value leaves the window.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Result<Element, LieError> {
        if i == j {
            return Ok(Element::zero());
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        match self.bracket.get(&(a, b)) {
            None => Ok(Element::zero()),
            Some(BracketEntry::OutOfWindow) => Err(LieError::Truncated),
            Some(BracketEntry::Elem(v)) => Ok(if flip {
                v.scale(&Cyclotomic::from_int(-1))
            } else {
                v.clone()
            }),
        }
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element, LieError> {
        let mut out = Element::zero();
        for (i, a) in &x.terms {
            for (j, b) in &y.terms {
                let base = self.bracket_basis(*i, *j)?;
                if !base.is_zero() {
                    out = out.add(&base.scale(&(a * b)));
                }
            }
        }
        Ok(out)
    }

    pub fn form_basis(&self, i: usize, j: usize) -> Cyclotomic {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.gram
            .get(&key)
            .cloned()
            .unwrap_or_else(Cyclotomic::zero)
    }

    pub fn form(&self, x: &Element, y: &Element) -> Cyclotomic {
        let mut out = Cyclotomic::zero();
        for (i, a) in &x.terms {
            for (j, b) in &y.terms {
                let g = self.form_basis(*i, *j);
                if !g.is_zero() {
                    out += &(&(a * b) * &g);
                }
            }
        }
        out
    }

    pub fn render(&self, x: &Element) -> String {
        if x.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in &x.terms {
            let cs = c.render();
            let name = &self.names[*i];
            if cs == "1" {
                parts.push(name.clone());
            } else if cs == "-1" {
                parts.push(format!("-{}", name));
            } else if cs.contains(" + ") || cs.contains(" - ") {
                parts.push(format!("({})*{}", cs, name));
            } else {
                parts.push(format!("{}*{}", cs, name));
            }
        }
        let mut out = String::new();
        for (k, p) in parts.iter().enumerate() {
            if k == 0 {
                out.push_str(p);
            } else if let Some(rest) = p.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
        out
    }

    /// Degrees of the nonzero coordinates of x; None when unlabelled.
    pub fn degree_of(&self, x: &Element) -> Option<Degree> {
        let degs = self.degrees.as_ref()?;
        let mut it = x.terms.keys();
        let first = degs[*it.next()?].clone();
        for i in it {
            if degs[*i] != first {
                return None;
            }
        }
        Some(first)
    }

    /// Jacobi defect [[x,y],z] + [[y,z],x] + [[z,x],y]; Err when any leg
    /// leaves the window.
    pub fn jacobi_defect(
        &self,
        x: &Element,
        y: &Element,
        z: &Element,
    ) -> Result<Element, LieError> {
        let a = self.bracket(&self.bracket(x, y)?, z)?;
        let b = self.bracket(&self.bracket(y, z)?, x)?;
        let c = self.bracket(&self.bracket(z, x)?, y)?;
        Ok(a.add(&b).add(&c))
    }

    /// Invariance defect ([x,y],z) - (x,[y,z]).
    pub fn invariance_defect(
        &self,
        x: &Element,
        y: &Element,
        z: &Element,
    ) -> Result<Cyclotomic, LieError> {
        let l = self.form(&self.bracket(x, y)?, z);
        let r = self.form(x, &self.bracket(y, z)?);
        Ok(&l - &r)
    }
}

/// A root: the values of the functional on each toral basis vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub coords: Vec<Cyclotomic>,
}

impl Root {
    pub fn zero(k: usize) -> Self {
        Root {
            coords: vec![Cyclotomic::zero(); k],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn neg(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn add(&self, other: &Root) -> Root {
        Root {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Cyclotomic) -> Root {
        Root {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    pub fn sort_key(&self) -> Vec<(u64, Vec<(num_bigint::BigInt, num_bigint::BigInt)>)> {
        self.coords.iter().map(|c| c.sort_key()).collect()
    }

    pub fn render(&self) -> String {
        let inner: Vec<String> = self.coords.iter().map(|c| c.render()).collect();
        format!("({})", inner.join(", "))
    }
}

/// A toral pair (g, T): T given by a commuting, jointly ad-diagonalizable
/// list of elements.
#[derive(Clone, Debug)]
pub struct ToralPair {
    pub algebra: Arc<LieAlgebra>,
    pub toral: Vec<Element>,
}

impl ToralPair {
    pub fn new(algebra: Arc<LieAlgebra>, toral: Vec<Element>) -> Self {
        ToralPair { algebra, toral }
    }

    pub fn rank(&self) -> usize {
        self.toral.len()
    }

    /// Gram matrix of the form on the toral basis.
    pub fn toral_gram(&self) -> Mat {
        let k = self.toral.len();
        let mut g = Mat::zero(k, k);
        for i in 0..k {
            for j in 0..k {
                *g.at_mut(i, j) = self.algebra.form(&self.toral[i], &self.toral[j]);
            }
        }
        g
    }

    /// Simultaneous eigenspace decomposition of ad(T), split per lattice
    /// degree when the algebra is labelled.
    pub fn decompose(&self) -> Result<RootDecomposition, LieError> {
        decompose(self)
    }
}

/// Root space decomposition g = (+)_alpha g_alpha.
#[derive(Clone, Debug)]
pub struct RootDecomposition {
    pub roots: Vec<Root>,
    /// per root, a basis of g_alpha; vectors are degree-pure when the
    /// algebra carries lattice labels
    pub spaces: Vec<Vec<Element>>,
}

impl RootDecomposition {
    pub fn index_of(&self, r: &Root) -> Option<usize> {
        self.roots.iter().position(|x| x == r)
    }

    pub fn space_of(&self, r: &Root) -> Option<&[Element]> {
        self.index_of(r).map(|i| self.spaces[i].as_slice())
    }

    pub fn zero_index(&self) -> Option<usize> {
        self.roots.iter().position(|r| r.is_zero())
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.iter().map(|s| s.len()).sum()
    }

    pub fn nonzero_roots(&self) -> impl Iterator<Item = (usize, &Root)> {
        self.roots
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_zero())
    }
}

fn decompose(pair: &ToralPair) -> Result<RootDecomposition, LieError> {
    let alg = &pair.algebra;
    let n = alg.dim();
    // T must commute.
    for (i, s) in pair.toral.iter().enumerate() {
        for t in pair.toral.iter().skip(i + 1) {
            let b = alg.bracket(s, t).map_err(|_| {
                LieError::NotToral("toral bracket leaves the window".to_string())
            })?;
            if !b.is_zero() {
                return Err(LieError::NotToral("toral set is not abelian".to_string()));
            }
        }
    }
    // Group basis indices into blocks: per lattice degree when labelled
    // (ad(T) preserves degrees since toral elements sit in degree zero).
    let blocks: Vec<Vec<usize>> = match &alg.degrees {
        None => vec![(0..n).collect()],
        Some(degs) => {
            let mut by_deg: BTreeMap<&Degree, Vec<usize>> = BTreeMap::new();
            for (i, d) in degs.iter().enumerate() {
                by_deg.entry(d).or_default().push(i);
            }
            by_deg.into_values().collect()
        }
    };

    let ops: Vec<SparseMat> = pair
        .toral
        .iter()
        .map(|t| adjoint_matrix(alg, t))
        .collect::<Result<_, _>>()?;

    let mut accum: BTreeMap<Vec<_>, (Root, Vec<Element>)> = BTreeMap::new();
    for block in blocks {
        let sub = eigen::restrict_to_indices(&ops, &block)?;
        let pieces = simultaneous_eigenspaces(&sub, block.len(), alg.order)?;
        for (evals, basis) in pieces {
            let root = Root {
                coords: evals.clone(),
            };
            let key = root.sort_key();
            let entry = accum
                .entry(key)
                .or_insert_with(|| (root.clone(), Vec::new()));
            for col in 0..basis.cols {
                let v = basis.column(col);
                let elem = Element::from_terms(
                    v.into_iter().enumerate().map(|(r, c)| (block[r], c)),
                );
                entry.1.push(elem);
            }
        }
    }

    let mut roots = Vec::new();
    let mut spaces = Vec::new();
    for (_, (root, space)) in accum {
        roots.push(root);
        spaces.push(space);
    }
    let total: usize = spaces.iter().map(|s| s.len()).sum();
    if total != n {
        return Err(LieError::NotToral(format!(
            "eigenspace dimensions sum to {} of {}",
            total, n
        )));
    }
    // Exact verification: every claimed eigenvector is one.
    for (r, space) in roots.iter().zip(&spaces) {
        for x in space {
            for (t, val) in pair.toral.iter().zip(&r.coords) {
                let lhs = alg
                    .bracket(t, x)
                    .map_err(|_| LieError::NotToral("eigencheck truncated".into()))?;
                if lhs != x.scale(val) {
                    return Err(LieError::InconsistentDecomposition(
                        "claimed eigenvector fails exact check".to_string(),
                    ));
                }
            }
        }
    }
    Ok(RootDecomposition { roots, spaces })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_decomposition() {
        let (alg, toral) = make_sl(2, 1);
        let pair = ToralPair::new(Arc::new(alg), toral);
        let dec = pair.decompose().unwrap();
        // roots {-alpha, 0, alpha}, component dims {1, 1, 1}
        assert_eq!(dec.roots.len(), 3);
        assert!(dec.roots.iter().any(|r| r.is_zero()));
        for s in &dec.spaces {
            assert_eq!(s.len(), 1);
        }
    }

    #[test]
    fn sl3_decomposition() {
        let (alg, toral) = make_sl(3, 1);
        let pair = ToralPair::new(Arc::new(alg), toral);
        let dec = pair.decompose().unwrap();
        // 6 nonzero roots of dim 1 plus the 2-dimensional zero space
        assert_eq!(dec.roots.len(), 7);
        let zero = dec.zero_index().unwrap();
        assert_eq!(dec.spaces[zero].len(), 2);
        for (i, s) in dec.spaces.iter().enumerate() {
            if i != zero {
                assert_eq!(s.len(), 1);
            }
        }
        // [g_alpha, g_beta] <= g_{alpha+beta}
        for (i, a) in dec.roots.iter().enumerate() {
            for (j, b) in dec.roots.iter().enumerate() {
                let target = a.add(b);
                for x in &dec.spaces[i] {
                    for y in &dec.spaces[j] {
                        let br = pair.algebra.bracket(x, y).unwrap();
                        if br.is_zero() {
                            continue;
                        }
                        let idx = dec.index_of(&target);
                        assert!(idx.is_some(), "bracket lands outside the root set");
                        let space = &dec.spaces[idx.unwrap()];
                        assert!(
                            in_span(&pair.algebra, space, &br),
                            "bracket escapes g_(alpha+beta)"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn abelian_single_zero_root() {
        let mut alg = LieAlgebra::new(1, vec!["a".into(), "b".into()]);
        alg.set_gram(0, 1, Cyclotomic::one());
        let alg = Arc::new(alg);
        let toral = vec![Element::basis(0), Element::basis(1)];
        let pair = ToralPair::new(alg, toral);
        let dec = pair.decompose().unwrap();
        assert_eq!(dec.roots.len(), 1);
        assert!(dec.roots[0].is_zero());
        assert_eq!(dec.spaces[0].len(), 2);
    }
}
