//! Independent re-computation of the degree-2 splitting value: enumerate
//! diagrams as raw perfect matchings (no canonical dedup, no automorphism
//! counts) and reduce naively with a second elimination order. By
//! orbit-stabilizer counting,
//!
//!   Σ_Γ ℓ(D;Γ)/#Aut(Γ) · [Γ]  =  (1/(2n)!·6^{2n}) Σ_matchings ℓ(D;M) · [M],
//!
//! so the two pipelines must agree exactly, both before reduction and in
//! coordinates under either elimination order.

mod common;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use kkt_core::algebra::{compute_basis, ihx_relations, DiagramVector};
use kkt_core::clover::CloverData;
use kkt_core::diagram::{automorphism_count, enumerate_diagrams, DiagramClass, JacobiDiagram};
use kkt_core::rat::{rat_int, Rational};
use kkt_core::splitting::{linking_number_diagram, linking_number_oriented};

use common::random_diagonal_clover;

/// All loopless perfect matchings on the half-edges of `nv` labeled
/// trivalent vertices.
fn matchings(nv: usize) -> Vec<JacobiDiagram> {
    fn rec(
        pairs: &mut Vec<((usize, usize), (usize, usize))>,
        used: &mut Vec<bool>,
        nv: usize,
        out: &mut Vec<JacobiDiagram>,
    ) {
        let h = match used.iter().position(|u| !u) {
            None => {
                out.push(JacobiDiagram::from_edges(nv, pairs).unwrap());
                return;
            }
            Some(h) => h,
        };
        used[h] = true;
        for k in (h + 1)..used.len() {
            if used[k] || k / 3 == h / 3 {
                continue;
            }
            used[k] = true;
            pairs.push(((h / 3, h % 3), (k / 3, k % 3)));
            rec(pairs, used, nv, out);
            pairs.pop();
            used[k] = false;
        }
        used[h] = false;
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; 3 * nv], nv, &mut out);
    out
}

/// Naive reduction: reversed generator order and a fresh echelon pass.
struct NaiveReduction {
    generators: Vec<DiagramClass>,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl NaiveReduction {
    fn build(degree: usize) -> Self {
        let generators: Vec<DiagramClass> = enumerate_diagrams(degree)
            .unwrap()
            .into_iter()
            .filter(|c| !c.is_zero())
            .rev()
            .collect();
        let n = generators.len();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for rel in ihx_relations(degree).unwrap() {
            let row: Vec<Rational> = generators.iter().map(|g| rel.coefficient(g)).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let pv = rows[r][c].clone();
            for x in rows[r].iter_mut() {
                *x /= pv.clone();
            }
            for i in 0..rows.len() {
                if i != r && !rows[i][c].is_zero() {
                    let f = rows[i][c].clone();
                    for j in 0..n {
                        let sub = &rows[r][j] * &f;
                        rows[i][j] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        NaiveReduction {
            generators,
            rows,
            pivots,
        }
    }

    fn reduce(&self, v: &DiagramVector) -> Vec<Rational> {
        let n = self.generators.len();
        let free: Vec<usize> = (0..n).filter(|c| !self.pivots.contains(c)).collect();
        let mut coords = vec![Rational::zero(); free.len()];
        for (idx, class) in self.generators.iter().enumerate() {
            let coeff = v.coefficient(class);
            if coeff.is_zero() {
                continue;
            }
            match self.pivots.iter().position(|&p| p == idx) {
                None => {
                    let j = free.iter().position(|&f| f == idx).unwrap();
                    coords[j] += coeff;
                }
                Some(r) => {
                    for (j, &f) in free.iter().enumerate() {
                        coords[j] -= &coeff * &self.rows[r][f];
                    }
                }
            }
        }
        coords
    }
}

#[test]
fn degree_two_splitting_matches_raw_matching_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(777);
    let degree = 2usize;
    let nv = 2 * degree;
    let group_order: i64 = (1..=nv as i64).product::<i64>() * 6i64.pow(nv as u32);
    let all_matchings = matchings(nv);
    let naive = NaiveReduction::build(degree);
    let basis = compute_basis(degree).unwrap();

    for trial in 0..2 {
        let c: CloverData = random_diagonal_clover(nv, 3, &mut rng);

        // main pipeline: canonical classes with automorphism weights
        let mut main_vec = DiagramVector::zero();
        for class in enumerate_diagrams(degree).unwrap() {
            if class.is_zero() {
                continue;
            }
            let ell = linking_number_diagram(&c, &class).unwrap();
            let aut = rat_int(automorphism_count(&class) as i64);
            main_vec.add_class(&class, &(ell / aut)).unwrap();
        }

        // oracle pipeline: all labeled matchings, uniform weight
        let mut oracle_vec = DiagramVector::zero();
        for m in &all_matchings {
            let ell = linking_number_oriented(&c, m).unwrap();
            if ell.is_zero() {
                continue;
            }
            oracle_vec
                .add_diagram(m, &(ell / rat_int(group_order)))
                .unwrap();
        }

        assert_eq!(main_vec, oracle_vec, "trial {trial}: pre-reduction vectors");
        assert_eq!(
            basis.reduce(&main_vec).unwrap(),
            basis.reduce(&oracle_vec).unwrap(),
            "trial {trial}: main-basis coordinates"
        );
        assert_eq!(
            naive.reduce(&main_vec),
            naive.reduce(&oracle_vec),
            "trial {trial}: naive-basis coordinates"
        );
    }
}

#[test]
fn degree_one_splitting_matches_raw_matching_pipeline() {
    let mut rng = ChaCha8Rng::seed_from_u64(778);
    let group_order: i64 = 2 * 36;
    let all_matchings = matchings(2);
    assert_eq!(all_matchings.len(), 6);
    let basis = compute_basis(1).unwrap();
    for _ in 0..5 {
        let c = common::random_clover(2, 3, 6, &mut rng);
        let mut main_vec = DiagramVector::zero();
        for class in enumerate_diagrams(1).unwrap() {
            let ell = linking_number_diagram(&c, &class).unwrap();
            let aut = rat_int(automorphism_count(&class) as i64);
            main_vec.add_class(&class, &(ell / aut)).unwrap();
        }
        let mut oracle_vec = DiagramVector::zero();
        for m in &all_matchings {
            let ell = linking_number_oriented(&c, m).unwrap();
            oracle_vec
                .add_diagram(m, &(ell / rat_int(group_order)))
                .unwrap();
        }
        assert_eq!(main_vec, oracle_vec);
        assert_eq!(
            basis.reduce(&main_vec).unwrap(),
            basis.reduce(&oracle_vec).unwrap()
        );
    }
}
