//! Combinatorial data of a rational generalised clover: one antisymmetric
//! trilinear form per handlebody piece plus pairwise cross-linking matrices,
//! together with the small bookkeeping formulas attached to clovers.
//!
//! Basis conventions are fixed once: slot `j` of piece `i` stands for the
//! curve class `a^i_j`, and the dual curve `z^i_j` pairs with it by
//! `⟨a^i_j, z^i_k⟩ = δ_jk`. Self-linking entries within one piece are not
//! part of the model.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::Error;
use crate::rat::Rational;

/// Antisymmetric trilinear form on a `g`-dimensional space, stored on
/// strictly increasing index triples `1 ≤ j < k < l ≤ g` and extended to
/// arbitrary triples by full antisymmetry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrilinearForm {
    dim: usize,
    entries: BTreeMap<(usize, usize, usize), Rational>,
}

impl TrilinearForm {
    pub fn new(dim: usize) -> Self {
        TrilinearForm {
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Set the value on a strictly increasing triple (1-based indices).
    pub fn set(&mut self, triple: (usize, usize, usize), value: Rational) -> Result<(), Error> {
        let (j, k, l) = triple;
        if !(j < k && k < l) {
            return Err(Error::validation(format!(
                "triple ({j},{k},{l}) is not strictly increasing"
            )));
        }
        if j < 1 || l > self.dim {
            return Err(Error::validation(format!(
                "triple ({j},{k},{l}) out of range for dimension {}",
                self.dim
            )));
        }
        if value.is_zero() {
            self.entries.remove(&triple);
        } else {
            self.entries.insert(triple, value);
        }
        Ok(())
    }

    /// Evaluate on an arbitrary index triple (1-based); repeated indices give
    /// zero, permutations pick up the sign of the sorting permutation.
    pub fn eval(&self, a: usize, b: usize, c: usize) -> Rational {
        if a == b || b == c || a == c {
            return Rational::zero();
        }
        let mut idx = [a, b, c];
        let mut sign = 1i64;
        // three-element bubble sort tracks the permutation sign
        for i in 0..2 {
            for j in 0..2 - i {
                if idx[j] > idx[j + 1] {
                    idx.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        match self.entries.get(&(idx[0], idx[1], idx[2])) {
            None => Rational::zero(),
            Some(v) => {
                if sign == 1 {
                    v.clone()
                } else {
                    -v.clone()
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &Rational)> {
        self.entries.iter()
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        let mut out = TrilinearForm::new(self.dim);
        if factor.is_zero() {
            return out;
        }
        for (t, v) in &self.entries {
            out.entries.insert(*t, v * factor);
        }
        out
    }
}

/// One handlebody-replacement piece: a genus and its trilinear form.
#[derive(Debug, Clone)]
pub struct Piece {
    pub genus: usize,
    pub form: TrilinearForm,
}

/// Combinatorial clover data: `k` pieces and, for each unordered pair of
/// distinct pieces, the cross-linking matrix `L^{ij}[a][b] = ℓ(z^i_a, z^j_b)`.
#[derive(Debug, Clone)]
pub struct CloverData {
    pieces: Vec<Piece>,
    /// Keyed by `(i, j)` with `i < j` (0-based); `g_i × g_j` matrices.
    cross: BTreeMap<(usize, usize), Vec<Vec<Rational>>>,
}

impl CloverData {
    /// Assemble and validate. `linking` entries may name a pair in either
    /// order (the matrix is transposed as needed); a pair given twice must be
    /// consistent, and a missing pair means zero linking.
    pub fn new(
        pieces: Vec<Piece>,
        linking: Vec<(usize, usize, Vec<Vec<Rational>>)>,
    ) -> Result<Self, Error> {
        for (i, p) in pieces.iter().enumerate() {
            if p.form.dim() != p.genus {
                return Err(Error::validation(format!(
                    "piece {}: form dimension {} does not match genus {}",
                    i + 1,
                    p.form.dim(),
                    p.genus
                )));
            }
        }
        let k = pieces.len();
        let mut cross: BTreeMap<(usize, usize), Vec<Vec<Rational>>> = BTreeMap::new();
        for (i, j, m) in linking {
            if i >= k || j >= k {
                return Err(Error::validation(format!(
                    "linking pair ({},{}) out of range for {} pieces",
                    i + 1,
                    j + 1,
                    k
                )));
            }
            if i == j {
                return Err(Error::validation(format!(
                    "linking pair ({},{}) pairs a piece with itself",
                    i + 1,
                    j + 1
                )));
            }
            let rows = pieces[i].genus;
            let cols = pieces[j].genus;
            if m.len() != rows || m.iter().any(|r| r.len() != cols) {
                return Err(Error::validation(format!(
                    "linking matrix for pair ({},{}) is not {rows}×{cols}",
                    i + 1,
                    j + 1
                )));
            }
            let (key, normalized) = if i < j {
                ((i, j), m)
            } else {
                let mut t = vec![vec![Rational::zero(); rows]; cols];
                for (a, row) in m.iter().enumerate() {
                    for (b, v) in row.iter().enumerate() {
                        t[b][a] = v.clone();
                    }
                }
                ((j, i), t)
            };
            match cross.get(&key) {
                None => {
                    cross.insert(key, normalized);
                }
                Some(existing) => {
                    if *existing != normalized {
                        return Err(Error::validation(format!(
                            "linking pair ({},{}) is not symmetric: L^ji differs from the transpose of L^ij",
                            key.0 + 1,
                            key.1 + 1
                        )));
                    }
                }
            }
        }
        let c = CloverData { pieces, cross };
        c.validate()?;
        Ok(c)
    }

    /// Re-check all invariants.
    pub fn validate(&self) -> Result<(), Error> {
        for (i, p) in self.pieces.iter().enumerate() {
            if p.form.dim() != p.genus {
                return Err(Error::validation(format!(
                    "piece {}: form dimension {} does not match genus {}",
                    i + 1,
                    p.form.dim(),
                    p.genus
                )));
            }
        }
        for (&(i, j), m) in &self.cross {
            if i >= j || j >= self.pieces.len() {
                return Err(Error::internal(format!(
                    "cross-linking key ({i},{j}) out of order"
                )));
            }
            if m.len() != self.pieces[i].genus
                || m.iter().any(|r| r.len() != self.pieces[j].genus)
            {
                return Err(Error::validation(format!(
                    "linking matrix for pair ({},{}) has wrong shape",
                    i + 1,
                    j + 1
                )));
            }
        }
        Ok(())
    }

    pub fn piece_count(&self) -> usize {
        self.pieces.len()
    }

    pub fn piece(&self, i: usize) -> &Piece {
        &self.pieces[i]
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Cross-linking number `ℓ(z^i_a, z^j_b)` for distinct pieces `i ≠ j`
    /// (0-based pieces, 1-based curve indices).
    pub fn link(&self, i: usize, a: usize, j: usize, b: usize) -> Rational {
        debug_assert_ne!(i, j);
        let (key, row, col) = if i < j { ((i, j), a, b) } else { ((j, i), b, a) };
        match self.cross.get(&key) {
            None => Rational::zero(),
            Some(m) => m[row - 1][col - 1].clone(),
        }
    }

    /// Replace the cross-linking matrix of a pair (used by linearity probes).
    pub fn with_linking(mut self, i: usize, j: usize, m: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let pieces = std::mem::take(&mut self.pieces);
        let mut linking: Vec<(usize, usize, Vec<Vec<Rational>>)> = self
            .cross
            .iter()
            .filter(|(&key, _)| key != (i.min(j), i.max(j)))
            .map(|(&(a, b), v)| (a, b, v.clone()))
            .collect();
        linking.push((i, j, m));
        CloverData::new(pieces, linking)
    }

    /// Replace the form of one piece.
    pub fn with_form(mut self, i: usize, form: TrilinearForm) -> Result<Self, Error> {
        self.pieces[i].form = form;
        let pieces = std::mem::take(&mut self.pieces);
        let linking = self
            .cross
            .iter()
            .map(|(&(a, b), v)| (a, b, v.clone()))
            .collect();
        CloverData::new(pieces, linking)
    }
}

/// Alternating sum `Σ_J (−1)^{|J|} values(J)` over all subsets of
/// `{1, …, k}`, subsets encoded as bitmasks.
pub fn alternating_sum(k: usize, values: &BTreeMap<u32, Rational>) -> Result<Rational, Error> {
    if k > 31 {
        return Err(Error::validation(format!("subset count 2^{k} too large")));
    }
    let mut total = Rational::zero();
    for mask in 0..(1u32 << k) {
        let v = values.get(&mask).ok_or_else(|| {
            Error::validation(format!("missing value for subset mask {mask:#b}"))
        })?;
        if mask.count_ones() % 2 == 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total)
}

/// First Pontryagin bookkeeping: a base value and one integer increment per
/// piece.
#[derive(Debug, Clone)]
pub struct FramingBook {
    pub p1_base: i64,
    pub increments: Vec<i64>,
}

impl FramingBook {
    /// `p1_base + Σ_{i ∈ I} p(i)` for a subset bitmask over
    /// `{1, …, k}` (bit `i-1` set means piece `i` is replaced).
    pub fn p1_of_subset(&self, subset: u32) -> Result<i64, Error> {
        let k = self.increments.len();
        if subset >> k != 0 {
            return Err(Error::validation(format!(
                "subset mask {subset:#b} references a piece beyond {k}"
            )));
        }
        let mut total = self.p1_base;
        for (i, p) in self.increments.iter().enumerate() {
            if subset & (1 << i) != 0 {
                total += p;
            }
        }
        Ok(total)
    }
}
