//! Realization of rational symmetric matrices as linking matrices of framed
//! links in connected sums of lens spaces.
//!
//! Diagonal entries `a_ii = q_i/p_i` (lowest terms, positive denominator)
//! produce lens factors `L(p_i, −q_i)` whose canonical generator has
//! self-linking `q_i/p_i mod 1`; off-diagonal entries `a_ij = k_ij/d_ij`
//! with `d_ij > 1` produce blocks `M(d) = L(d,−1) # L(d,1) # L(d,−1)`
//! carrying a pair of classes `δ(d,k)`, `ε(d)` with zero self-linking and
//! mutual linking `k/d mod 1`. The leftover integer parts are absorbed by a
//! correction matrix standing for crossing and framing changes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Error;
use crate::rat::{mod_one, Rational};

/// Symbolic homology generator inside one connected summand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    /// `γ_{p,q}` of the lens factor attached to the given knot.
    Gamma { knot: usize },
    /// `δ(d_ij, k_ij)` inside the block of the pair `(i, j)`, `i < j`.
    Delta { i: usize, j: usize },
    /// `ε(d_ij)` inside the block of the pair `(i, j)`, `i < j`.
    Epsilon { i: usize, j: usize },
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Gamma { knot } => write!(f, "gamma[{}]", knot + 1),
            Generator::Delta { i, j } => write!(f, "delta[{},{}]", i + 1, j + 1),
            Generator::Epsilon { i, j } => write!(f, "epsilon[{},{}]", i + 1, j + 1),
        }
    }
}

/// Integer combination of symbolic generators; the homology class of one
/// knot.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KnotClass {
    pub terms: Vec<(Generator, BigInt)>,
}

/// A symbolic connected sum of lens-space blocks together with knot classes
/// and an integer correction matrix realizing a prescribed rational linking
/// matrix.
#[derive(Debug, Clone)]
pub struct LinkingRealization {
    /// `(p_i, q_i)` per knot; the summand `L(p_i, −q_i)`. `p_i = 1` denotes
    /// a standard-sphere summand.
    pub lens_factors: Vec<(BigInt, BigInt)>,
    /// `(d_ij, k_ij)` per pair `i < j` with `d_ij > 1`.
    pub m_blocks: BTreeMap<(usize, usize), (BigInt, BigInt)>,
    pub knot_classes: Vec<KnotClass>,
    /// Symmetric integer matrix of crossing and framing adjustments.
    pub correction: Vec<Vec<BigInt>>,
}

/// Self-linking `q/p mod 1 ∈ [0, 1)` of the canonical generator of
/// `L(p, −q)`.
pub fn lens_block_form(p: &BigInt, q: &BigInt) -> Result<Rational, Error> {
    if !p.is_positive() {
        return Err(Error::validation(format!("lens parameter p = {p} must be positive")));
    }
    if p.gcd(q) != BigInt::one() {
        return Err(Error::validation(format!(
            "lens parameters p = {p}, q = {q} are not coprime"
        )));
    }
    Ok(mod_one(&Rational::new(q.clone(), p.clone())))
}

/// Model pairings inside `M(d)`: `(ℓ(δ,δ), ℓ(ε,ε), ℓ(δ,ε)) = (0, 0, k/d mod 1)`.
pub fn m_block_pair(d: &BigInt, k: &BigInt) -> Result<(Rational, Rational, Rational), Error> {
    if !d.is_positive() {
        return Err(Error::validation(format!("block parameter d = {d} must be positive")));
    }
    Ok((
        Rational::zero(),
        Rational::zero(),
        mod_one(&Rational::new(k.clone(), d.clone())),
    ))
}

fn check_symmetric(a: &[Vec<Rational>]) -> Result<usize, Error> {
    let n = a.len();
    if a.iter().any(|row| row.len() != n) {
        return Err(Error::validation(format!("matrix is not {n}×{n}")));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if a[i][j] != a[j][i] {
                return Err(Error::validation(format!(
                    "matrix is not symmetric at ({},{})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(n)
}

/// Realize a symmetric rational matrix as the linking matrix of `n` knots
/// in a connected sum of lens-space blocks plus an integer correction.
pub fn realize_linking_matrix(a: &[Vec<Rational>]) -> Result<LinkingRealization, Error> {
    let n = check_symmetric(a)?;
    let mut lens_factors = Vec::with_capacity(n);
    let mut knot_classes: Vec<KnotClass> = vec![KnotClass::default(); n];
    for (i, row) in a.iter().enumerate() {
        let q = row[i].numer().clone();
        let p = row[i].denom().clone();
        lens_factors.push((p, q));
        knot_classes[i]
            .terms
            .push((Generator::Gamma { knot: i }, BigInt::one()));
    }
    let mut m_blocks = BTreeMap::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let d = a[i][j].denom().clone();
            let k = a[i][j].numer().clone();
            if d > BigInt::one() {
                m_blocks.insert((i, j), (d, k));
                knot_classes[i]
                    .terms
                    .push((Generator::Delta { i, j }, BigInt::one()));
                knot_classes[j]
                    .terms
                    .push((Generator::Epsilon { i, j }, BigInt::one()));
            }
        }
    }
    let mut pre = LinkingRealization {
        lens_factors,
        m_blocks,
        knot_classes,
        correction: vec![vec![BigInt::zero(); n]; n],
    };
    // the correction lifts the mod-1 realization to the requested matrix and
    // must come out integral
    let realized = linking_matrix_of(&pre)?;
    let mut correction = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let diff = &a[i][j] - &realized[i][j];
            if !diff.denom().is_one() {
                return Err(Error::internal(format!(
                    "correction entry ({},{}) = {diff} is not an integer",
                    i + 1,
                    j + 1
                )));
            }
            correction[i][j] = diff.numer().clone();
        }
    }
    pre.correction = correction;
    Ok(pre)
}

fn generator_pairing(
    r: &LinkingRealization,
    x: &Generator,
    y: &Generator,
) -> Result<Rational, Error> {
    match (x, y) {
        (Generator::Gamma { knot: a }, Generator::Gamma { knot: b }) => {
            if a != b {
                return Ok(Rational::zero()); // distinct summands
            }
            let (p, q) = r
                .lens_factors
                .get(*a)
                .ok_or_else(|| Error::validation(format!("no lens factor for knot {}", a + 1)))?;
            lens_block_form(p, q)
        }
        (Generator::Delta { i, j }, Generator::Epsilon { i: i2, j: j2 })
        | (Generator::Epsilon { i: i2, j: j2 }, Generator::Delta { i, j }) => {
            if (i, j) != (i2, j2) {
                return Ok(Rational::zero());
            }
            let (d, k) = r.m_blocks.get(&(*i, *j)).ok_or_else(|| {
                Error::validation(format!("no block for the pair ({},{})", i + 1, j + 1))
            })?;
            Ok(m_block_pair(d, k)?.2)
        }
        // δ and ε have zero self-linking; anything else lives in distinct
        // summands
        _ => Ok(Rational::zero()),
    }
}

/// Bilinear expansion of the knot classes over the symbolic generators plus
/// the integer correction.
pub fn linking_matrix_of(r: &LinkingRealization) -> Result<Vec<Vec<Rational>>, Error> {
    let n = r.knot_classes.len();
    if r.correction.len() != n || r.correction.iter().any(|row| row.len() != n) {
        return Err(Error::validation(format!(
            "correction matrix is not {n}×{n}"
        )));
    }
    // validate generator references up front
    for kc in &r.knot_classes {
        for (g, _) in &kc.terms {
            match g {
                Generator::Gamma { knot } => {
                    if *knot >= r.lens_factors.len() {
                        return Err(Error::validation(format!(
                            "knot class references missing lens factor {}",
                            knot + 1
                        )));
                    }
                }
                Generator::Delta { i, j } | Generator::Epsilon { i, j } => {
                    if !r.m_blocks.contains_key(&(*i, *j)) {
                        return Err(Error::validation(format!(
                            "knot class references missing block ({},{})",
                            i + 1,
                            j + 1
                        )));
                    }
                }
            }
        }
    }
    let mut out = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        for j in i..n {
            let mut acc = Rational::from_integer(r.correction[i][j].clone());
            for (gx, cx) in &r.knot_classes[i].terms {
                for (gy, cy) in &r.knot_classes[j].terms {
                    let pairing = generator_pairing(r, gx, gy)?;
                    if !pairing.is_zero() {
                        acc += Rational::from_integer(cx * cy) * pairing;
                    }
                }
            }
            out[i][j] = acc.clone();
            out[j][i] = acc;
        }
    }
    Ok(out)
}
