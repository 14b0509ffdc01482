//! Evaluation of the clover/diagram contraction and the splitting value.
//!
//! For a diagram `Γ` with `2n` vertices and a clover with `k = 2n` pieces,
//! `contract` sums over all labelings `f` assigning to each half-edge `h` a
//! curve index in `{1, …, g_{σ(v(h))}}` the product of cross-linking factors
//! over edges and trilinear-form factors over vertices (slots read in the
//! cyclic order `0, 1, 2`). `linking_number_diagram` sums the contraction
//! over all vertex-to-piece bijections, and `z_n` assembles the degree-`n`
//! splitting value `Σ_Γ ℓ(D;Γ)/#Aut(Γ) · [Γ]` in basis coordinates.

use num_traits::Zero;

use crate::algebra::{BasisPresentation, DiagramVector};
use crate::clover::CloverData;
use crate::diagram::{
    automorphism_count, enumerate_diagrams_with_cap, DiagramClass, JacobiDiagram,
};
use crate::error::Error;
use crate::rat::{rat_int, Rational};

/// Bijection from diagram vertices to clover pieces (both 0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexAssignment(Vec<usize>);

impl VertexAssignment {
    pub fn new(map: Vec<usize>) -> Result<Self, Error> {
        let n = map.len();
        let mut seen = vec![false; n];
        for &p in &map {
            if p >= n || seen[p] {
                return Err(Error::validation(
                    "vertex assignment is not a bijection onto the pieces".to_string(),
                ));
            }
            seen[p] = true;
        }
        Ok(VertexAssignment(map))
    }

    pub fn piece_of(&self, vertex: usize) -> usize {
        self.0[vertex]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

/// The contraction `ℓ(D;Γ;σ)`: depth-first over half-edge labelings in
/// vertex-major order with zero-product pruning.
pub fn contract(
    c: &CloverData,
    d: &JacobiDiagram,
    sigma: &VertexAssignment,
) -> Result<Rational, Error> {
    let nv = d.vertex_count();
    if c.piece_count() != nv {
        return Err(Error::validation(format!(
            "size mismatch: diagram has {nv} vertices but the clover has {} pieces",
            c.piece_count()
        )));
    }
    if sigma.len() != nv {
        return Err(Error::validation(format!(
            "size mismatch: assignment covers {} vertices, diagram has {nv}",
            sigma.len()
        )));
    }
    if nv == 0 {
        return Ok(rat_int(1));
    }

    let genus: Vec<usize> = (0..nv).map(|v| c.piece(sigma.piece_of(v)).genus).collect();
    let mut labels = vec![0usize; 3 * nv];
    let mut total = Rational::zero();

    fn dfs(
        h: usize,
        acc: Rational,
        c: &CloverData,
        d: &JacobiDiagram,
        sigma: &VertexAssignment,
        genus: &[usize],
        labels: &mut Vec<usize>,
        total: &mut Rational,
    ) {
        let nv = d.vertex_count();
        if h == 3 * nv {
            *total += acc;
            return;
        }
        let vt = h / 3;
        let st = h % 3;
        'labels: for lab in 1..=genus[vt] {
            // antisymmetry: a repeated label at one vertex kills the form
            for s in 0..st {
                if labels[3 * vt + s] == lab {
                    continue 'labels;
                }
            }
            let mut factor = acc.clone();
            let (mv, ms) = d.mate_of((vt, st));
            let mh = 3 * mv + ms;
            if mh < h {
                let link = c.link(
                    sigma.piece_of(vt),
                    lab,
                    sigma.piece_of(mv),
                    labels[mh],
                );
                if link.is_zero() {
                    continue;
                }
                factor *= link;
            }
            if st == 2 {
                let form = c.piece(sigma.piece_of(vt)).form.eval(
                    labels[3 * vt],
                    labels[3 * vt + 1],
                    lab,
                );
                if form.is_zero() {
                    continue;
                }
                factor *= form;
            }
            labels[h] = lab;
            dfs(h + 1, factor, c, d, sigma, genus, labels, total);
            labels[h] = 0;
        }
    }

    dfs(
        0,
        rat_int(1),
        c,
        d,
        sigma,
        &genus,
        &mut labels,
        &mut total,
    );
    Ok(total)
}

/// `Σ_σ ℓ(D;Γ;σ)` over all vertex-to-piece bijections, evaluated on the
/// given oriented representative.
pub fn linking_number_oriented(c: &CloverData, d: &JacobiDiagram) -> Result<Rational, Error> {
    let mut total = Rational::zero();
    for perm in permutations(d.vertex_count()) {
        let sigma = VertexAssignment::new(perm)?;
        total += contract(c, d, &sigma)?;
    }
    Ok(total)
}

/// `ℓ(D;Γ)` on the canonical oriented representative of the class.
pub fn linking_number_diagram(c: &CloverData, class: &DiagramClass) -> Result<Rational, Error> {
    linking_number_oriented(c, class.diagram())
}

/// The degree-`n` splitting value in coordinates over `basis`. Returns the
/// zero vector when the clover degree exceeds `2n`; a clover degree below
/// `2n` is outside the formula and is an error.
pub fn z_n(
    c: &CloverData,
    degree: usize,
    basis: &BasisPresentation,
) -> Result<Vec<Rational>, Error> {
    if basis.degree() != degree {
        return Err(Error::validation(format!(
            "basis has degree {}, requested degree {degree}",
            basis.degree()
        )));
    }
    let k = c.piece_count();
    if k > 2 * degree {
        return Ok(vec![Rational::zero(); basis.dimension()]);
    }
    if k < 2 * degree {
        return Err(Error::NotApplicable {
            k,
            two_n: 2 * degree,
        });
    }
    // the basis construction already gated the degree cap
    let mut acc = DiagramVector::zero();
    for class in enumerate_diagrams_with_cap(degree, degree)? {
        if class.is_zero() {
            continue;
        }
        let ell = linking_number_diagram(c, &class)?;
        if ell.is_zero() {
            continue;
        }
        let aut = rat_int(automorphism_count(&class) as i64);
        acc.add_class(&class, &(ell / aut))?;
    }
    basis.reduce(&acc)
}
