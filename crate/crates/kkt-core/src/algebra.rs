//! The diagram space `A_n(∅)`: rational span of degree-`n` diagram classes
//! modulo the AS and IHX relations.
//!
//! AS is folded into canonicalization (signs and zero classes); IHX relation
//! rows are generated per (class, edge) and the quotient basis comes from
//! exact rational elimination with a deterministic pivot order.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::diagram::{
    canonicalize, enumerate_diagrams_with_cap, DiagramClass, HalfEdge, JacobiDiagram,
    DEFAULT_DEGREE_CAP,
};
use crate::error::Error;
use crate::rat::{rat_int, Rational};

/// Finitely supported exact-rational combination of diagram classes of one
/// degree. Classes flagged zero never appear.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DiagramVector {
    terms: BTreeMap<DiagramClass, Rational>,
}

impl DiagramVector {
    pub fn zero() -> Self {
        DiagramVector::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree shared by all terms; `None` for the zero vector.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next().map(|c| c.degree())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiagramClass, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, class: &DiagramClass) -> Rational {
        self.terms.get(class).cloned().unwrap_or_else(Rational::zero)
    }

    /// Add `coeff · [class]`. Zero-flagged classes and zero coefficients are
    /// dropped; mixing degrees is an error.
    pub fn add_class(&mut self, class: &DiagramClass, coeff: &Rational) -> Result<(), Error> {
        if class.is_zero() || coeff.is_zero() {
            return Ok(());
        }
        if let Some(d) = self.degree() {
            if d != class.degree() {
                return Err(Error::validation(format!(
                    "degree mismatch: vector has degree {d}, class has degree {}",
                    class.degree()
                )));
            }
        }
        let entry = self.terms.entry(class.clone()).or_insert_with(Rational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(class);
        }
        Ok(())
    }

    /// Canonicalize `raw` and add `coeff` times the signed class.
    pub fn add_diagram(&mut self, raw: &JacobiDiagram, coeff: &Rational) -> Result<(), Error> {
        let (class, sign) = canonicalize(raw);
        self.add_class(&class, &(coeff * rat_int(sign)))
    }

    pub fn add(&mut self, other: &DiagramVector) -> Result<(), Error> {
        for (class, coeff) in other.terms() {
            self.add_class(class, coeff)?;
        }
        Ok(())
    }

    pub fn scale(&mut self, factor: &Rational) {
        if factor.is_zero() {
            self.terms.clear();
            return;
        }
        for coeff in self.terms.values_mut() {
            *coeff *= factor;
        }
    }
}

/// Replace the attachments around an edge according to `route`, which lists,
/// for each of the four outer slots in the fixed order `[u+1, u+2, w+1, w+2]`,
/// the outer slot whose old attachment it receives. Returns `None` when the
/// rewiring creates a simple loop (such a term vanishes in the quotient).
fn reroute(
    d: &JacobiDiagram,
    outer: &[HalfEdge; 4],
    route: &[usize; 4],
) -> Option<JacobiDiagram> {
    let pos_of = |h: HalfEdge| outer.iter().position(|&o| o == h);
    let mut edges: Vec<(HalfEdge, HalfEdge)> = Vec::with_capacity(d.vertex_count() * 3 / 2);
    // edges not incident to any outer slot survive unchanged
    for (a, b) in d.edges() {
        if pos_of(a).is_none() && pos_of(b).is_none() {
            edges.push((a, b));
        }
    }
    // each outer slot x receives the old attachment of outer slot route[x]
    let mut seen = [false; 4];
    for x in 0..4 {
        if seen[x] {
            continue;
        }
        let src = outer[route[x]];
        let target = d.mate_of(src);
        match pos_of(target) {
            None => {
                edges.push((outer[x], target));
                seen[x] = true;
            }
            Some(z_src) => {
                // the old edge joined two outer slots; find who receives the
                // other end
                let z = route
                    .iter()
                    .position(|&r| r == z_src)
                    .expect("route is a permutation");
                if outer[x].0 == outer[z].0 {
                    return None; // simple loop
                }
                edges.push((outer[x], outer[z]));
                seen[x] = true;
                seen[z] = true;
            }
        }
    }
    Some(JacobiDiagram::from_edges(d.vertex_count(), &edges).expect("rewiring stays trivalent"))
}

/// The IHX relation row attached to one edge of one diagram: the original
/// diagram plus the two rewirings of the four half-edges around the edge,
/// with signs produced by canonicalization.
fn ihx_row(d: &JacobiDiagram, edge: (HalfEdge, HalfEdge)) -> Result<DiagramVector, Error> {
    let ((u, su), (w, sw)) = edge;
    debug_assert_ne!(u, w);
    let outer = [
        (u, (su + 1) % 3),
        (u, (su + 2) % 3),
        (w, (sw + 1) % 3),
        (w, (sw + 2) % 3),
    ];
    let mut row = DiagramVector::zero();
    row.add_diagram(d, &rat_int(1))?;
    // u keeps its first attachment; the remaining three attachments move
    // between the two alternative pairings
    let h_term = reroute(d, &outer, &[0, 2, 1, 3]);
    let x_term = reroute(d, &outer, &[0, 3, 1, 2]);
    if let Some(h) = h_term {
        row.add_diagram(&h, &rat_int(-1))?;
    }
    if let Some(x) = x_term {
        row.add_diagram(&x, &rat_int(1))?;
    }
    Ok(row)
}

/// All IHX relation rows of the given degree, one per (class, edge) pair,
/// duplicates allowed.
pub fn ihx_relations(degree: usize) -> Result<Vec<DiagramVector>, Error> {
    ihx_relations_with_cap(degree, DEFAULT_DEGREE_CAP)
}

pub fn ihx_relations_with_cap(degree: usize, cap: usize) -> Result<Vec<DiagramVector>, Error> {
    let mut rows = Vec::new();
    for class in enumerate_diagrams_with_cap(degree, cap)? {
        let d = class.diagram().clone();
        for edge in d.edges() {
            rows.push(ihx_row(&d, edge)?);
        }
    }
    Ok(rows)
}

/// Basis of `A_n(∅)` with the reduction table expressing every nonzero
/// generator class in basis coordinates.
#[derive(Debug, Clone)]
pub struct BasisPresentation {
    degree: usize,
    basis: Vec<DiagramClass>,
    table: BTreeMap<DiagramClass, Vec<Rational>>,
}

impl BasisPresentation {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[DiagramClass] {
        &self.basis
    }

    /// Coordinates of a vector over the basis. The vector must be zero or of
    /// the presentation's degree.
    pub fn reduce(&self, v: &DiagramVector) -> Result<Vec<Rational>, Error> {
        let mut out = vec![Rational::zero(); self.basis.len()];
        if v.is_zero() {
            return Ok(out);
        }
        if v.degree() != Some(self.degree) {
            return Err(Error::validation(format!(
                "degree mismatch: vector has degree {:?}, basis has degree {}",
                v.degree(),
                self.degree
            )));
        }
        for (class, coeff) in v.terms() {
            let row = self.table.get(class).ok_or_else(|| {
                Error::internal(format!("class {class} missing from reduction table"))
            })?;
            for (acc, r) in out.iter_mut().zip(row) {
                *acc += coeff * r;
            }
        }
        Ok(out)
    }
}

/// Exact reduced row echelon form in place; returns the pivot columns.
/// Pivots are chosen left to right, first nonzero row wins.
fn rref(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pivot_row) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pivot_row);
        let p = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= p.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for c2 in 0..cols {
                    let sub = &rows[r][c2] * &f;
                    rows[i][c2] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Compute the basis of `A_n(∅)` by exact elimination of the IHX relation
/// matrix over the nonzero generator classes in canonical order.
pub fn compute_basis(degree: usize) -> Result<BasisPresentation, Error> {
    compute_basis_with_cap(degree, DEFAULT_DEGREE_CAP)
}

pub fn compute_basis_with_cap(degree: usize, cap: usize) -> Result<BasisPresentation, Error> {
    let generators: Vec<DiagramClass> = enumerate_diagrams_with_cap(degree, cap)?
        .into_iter()
        .filter(|c| !c.is_zero())
        .collect();
    let index: BTreeMap<&DiagramClass, usize> =
        generators.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let n = generators.len();

    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for rel in ihx_relations_with_cap(degree, cap)? {
        if rel.is_zero() {
            continue;
        }
        let mut row = vec![Rational::zero(); n];
        for (class, coeff) in rel.terms() {
            row[index[class]] = coeff.clone();
        }
        rows.push(row);
    }

    let pivots = rref(&mut rows, n);
    let pivot_set: BTreeMap<usize, usize> =
        pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivot_set.contains_key(c)).collect();
    let basis: Vec<DiagramClass> = free.iter().map(|&c| generators[c].clone()).collect();

    let mut table = BTreeMap::new();
    for (c, class) in generators.iter().enumerate() {
        let row = match pivot_set.get(&c) {
            None => {
                let j = free.iter().position(|&f| f == c).expect("free column");
                let mut unit = vec![Rational::zero(); free.len()];
                unit[j] = rat_int(1);
                unit
            }
            Some(&r) => free.iter().map(|&f| -rows[r][f].clone()).collect(),
        };
        table.insert(class.clone(), row);
    }

    Ok(BasisPresentation {
        degree,
        basis,
        table,
    })
}
