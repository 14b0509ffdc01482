//! Exhaustive small-group checks: direct nondegeneracy and isomorphism by
//! generator-image search. These are exact and independent of the normal
//! forms in the parent module; they back the classification round trips.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::error::Error;
use crate::rat::Rational;

use super::LinkingForm;

const DEFAULT_ORDER_BOUND: u128 = 1 << 14;

/// All elements of the presented group as coordinate vectors.
pub fn elements(f: &LinkingForm) -> Result<Vec<Vec<u64>>, Error> {
    let total = f.group_order()?;
    if total > DEFAULT_ORDER_BOUND {
        return Err(Error::validation(format!(
            "group order {total} too large for exhaustive enumeration"
        )));
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut cur = vec![0u64; f.rank()];
    loop {
        out.push(cur.clone());
        let mut i = 0;
        loop {
            if i == f.rank() {
                return Ok(out);
            }
            cur[i] += 1;
            if cur[i] < f.orders()[i] {
                break;
            }
            cur[i] = 0;
            i += 1;
        }
    }
}

/// The definition of nondegeneracy, checked literally: for every element of
/// order `k > 1` some partner pairs with it to exactly `1/k`.
pub fn nondegenerate_direct(f: &LinkingForm) -> Result<bool, Error> {
    let elems = elements(f)?;
    for x in &elems {
        let k = f.element_order(x);
        if k <= 1 {
            continue;
        }
        let want = Rational::new(BigInt::from(1), BigInt::from(k));
        if !elems.iter().any(|y| f.pair(x, y) == want) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn add_elem(a: &[u64], b: &[u64], orders: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(b)
        .zip(orders)
        .map(|((&x, &y), &o)| (x + y) % o)
        .collect()
}

fn scale_elem(a: &[u64], t: u64, orders: &[u64]) -> Vec<u64> {
    a.iter()
        .zip(orders)
        .map(|(&x, &o)| ((x as u128 * t as u128) % o as u128) as u64)
        .collect()
}

/// Subgroup generated by `span ∪ {w}`, given that `span` is already a
/// subgroup.
fn grow_span(span: &BTreeSet<Vec<u64>>, w: &[u64], f: &LinkingForm) -> BTreeSet<Vec<u64>> {
    let ord = f.element_order(w);
    let mut out = BTreeSet::new();
    for t in 0..ord {
        let tw = scale_elem(w, t, f.orders());
        for s in span {
            out.insert(add_elem(s, &tw, f.orders()));
        }
    }
    out
}

/// Brute-force isomorphism search between two linking forms: assign images
/// to the generators of `f` among elements of `g` with matching orders and
/// pairings, requiring independent span growth at every step.
pub fn isomorphic(f: &LinkingForm, g: &LinkingForm) -> Result<bool, Error> {
    if f.group_order()? != g.group_order()? {
        return Ok(false);
    }
    let elems_g = elements(g)?;
    // order histograms must match
    let hist = |form: &LinkingForm, elems: &[Vec<u64>]| {
        let mut h: std::collections::BTreeMap<u64, usize> = Default::default();
        for e in elems {
            *h.entry(form.element_order(e)).or_default() += 1;
        }
        h
    };
    let elems_f = elements(f)?;
    if hist(f, &elems_f) != hist(g, &elems_g) {
        return Ok(false);
    }

    // process generators in order of decreasing order to prune early
    let mut gen_order: Vec<usize> = (0..f.rank()).collect();
    gen_order.sort_by_key(|&i| std::cmp::Reverse(f.orders()[i]));

    struct Search<'a> {
        f: &'a LinkingForm,
        g: &'a LinkingForm,
        elems_g: &'a [Vec<u64>],
        gen_order: &'a [usize],
        images: Vec<Option<Vec<u64>>>,
    }

    impl Search<'_> {
        fn unit(&self, i: usize) -> Vec<u64> {
            let mut v = vec![0u64; self.f.rank()];
            v[i] = 1;
            v
        }

        fn rec(&mut self, step: usize, span: &BTreeSet<Vec<u64>>) -> Result<bool, Error> {
            if step == self.gen_order.len() {
                return Ok(span.len() as u128 == self.g.group_order()?);
            }
            let i = self.gen_order[step];
            let ei = self.unit(i);
            let want_order = self.f.orders()[i];
            let want_self = self.f.pair(&ei, &ei);
            'candidates: for w in self.elems_g {
                if self.g.element_order(w) != want_order {
                    continue;
                }
                if self.g.pair(w, w) != want_self {
                    continue;
                }
                for prev_step in 0..step {
                    let j = self.gen_order[prev_step];
                    let wj = self.images[j].as_ref().expect("assigned");
                    if self.g.pair(w, wj) != self.f.pair(&ei, &self.unit(j)) {
                        continue 'candidates;
                    }
                }
                let grown = grow_span(span, w, self.g);
                if grown.len() != span.len() * want_order as usize {
                    continue;
                }
                self.images[i] = Some(w.clone());
                if self.rec(step + 1, &grown)? {
                    return Ok(true);
                }
                self.images[i] = None;
            }
            Ok(false)
        }
    }

    let mut search = Search {
        f,
        g,
        elems_g: &elems_g,
        gen_order: &gen_order,
        images: vec![None; f.rank()],
    };
    let mut span0 = BTreeSet::new();
    span0.insert(vec![0u64; g.rank()]);
    search.rec(0, &span0)
}
