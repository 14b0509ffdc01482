//! Classification of nondegenerate `Q/Z`-valued linking forms on finite
//! abelian groups.
//!
//! A [`LinkingForm`] presents the group `⊕ Z/orders[i]` with a symmetric
//! Gram matrix read modulo 1. Odd primary parts decompose into cyclic
//! blocks `[p^k, s]` with `s ∈ {1, n(p)}` where `n(p)` is the smallest
//! quadratic non-residue; 2-primary parts decompose stably into blocks
//! `A^k(n)`, `n ∈ {±1, ±3}`, after adjoining a number of `A^k(1)`
//! stabilizers. [`isomorphic`] decides isomorphism exactly for odd-order
//! groups and stable isomorphism at the prime 2.

pub mod exhaustive;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::intmat::{
    congruence_nullspace, determinant, mat_mul, smith_normal_form, solve_integral, IMat,
};
use crate::modular::{inv_mod, is_prime, legendre, sqrt_mod_prime_power};
use crate::rat::{mod_one, rat_int, Rational};

/// Presentation of a finite abelian group `⊕ Z/orders[i]` with a symmetric
/// `Q/Z`-valued pairing, stored with entries reduced into `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkingForm {
    orders: Vec<u64>,
    gram: Vec<Vec<Rational>>,
}

impl LinkingForm {
    pub fn new(orders: Vec<u64>, gram: Vec<Vec<Rational>>) -> Result<Self, Error> {
        let m = orders.len();
        if let Some(&o) = orders.iter().find(|&&o| o < 2) {
            return Err(Error::validation(format!(
                "generator order {o} is smaller than 2"
            )));
        }
        if gram.len() != m || gram.iter().any(|r| r.len() != m) {
            return Err(Error::validation(format!(
                "gram matrix is not {m}×{m}"
            )));
        }
        let gram: Vec<Vec<Rational>> = gram
            .iter()
            .map(|row| row.iter().map(mod_one).collect())
            .collect();
        for i in 0..m {
            for j in 0..m {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::validation(format!(
                        "gram matrix is not symmetric mod 1 at ({},{})",
                        i + 1,
                        j + 1
                    )));
                }
                let scaled = &gram[i][j] * rat_int(orders[i] as i64);
                if !scaled.denom().is_one() {
                    return Err(Error::validation(format!(
                        "entry ({},{}) is not annihilated by the generator order {}",
                        i + 1,
                        j + 1,
                        orders[i]
                    )));
                }
            }
        }
        Ok(LinkingForm { orders, gram })
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn gram(&self) -> &[Vec<Rational>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn group_order(&self) -> Result<u128, Error> {
        let mut total: u128 = 1;
        for &o in &self.orders {
            total = total.checked_mul(o as u128).ok_or_else(|| {
                Error::validation("group order exceeds the supported range".to_string())
            })?;
        }
        Ok(total)
    }

    /// Pairing of two coordinate vectors, reduced into `[0, 1)`.
    pub fn pair(&self, x: &[u64], y: &[u64]) -> Rational {
        let mut acc = Rational::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                let prod = BigInt::from(xi) * BigInt::from(yj);
                acc += Rational::from_integer(prod) * &self.gram[i][j];
            }
        }
        mod_one(&acc)
    }

    /// Order of an element given by coordinates.
    pub fn element_order(&self, x: &[u64]) -> u64 {
        let mut ord = 1u64;
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            let o = self.orders[i] / gcd_u64(self.orders[i], xi % self.orders[i]);
            ord = lcm_u64(ord, o);
        }
        ord
    }

    /// Invariant factors of the underlying group (divisibility chain).
    pub fn invariant_factors(&self) -> Vec<u64> {
        let m = self.rank();
        let diag: IMat = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| {
                        if i == j {
                            BigInt::from(self.orders[i])
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let (_, _, d, _) = smith_normal_form(&diag);
        let mut out: Vec<u64> = (0..m)
            .map(|i| d[i][i].to_u64().expect("orders fit in u64"))
            .filter(|&f| f > 1)
            .collect();
        out.sort();
        out
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    let mut out = BTreeMap::new();
    let mut d = 2u64;
    while d * d <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

/// A cyclic summand `Z/p^k` whose generator has self-linking `unit / p^k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct CyclicBlock {
    pub prime: u64,
    pub exponent: u32,
    pub unit: i64,
}

impl CyclicBlock {
    pub fn modulus(&self) -> u64 {
        self.prime.pow(self.exponent)
    }

    /// The one-generator linking form this block denotes.
    pub fn to_form(&self) -> Result<LinkingForm, Error> {
        let m = self.modulus();
        let unit = self.unit.rem_euclid(m as i64) as u64;
        LinkingForm::new(
            vec![m],
            vec![vec![Rational::new(BigInt::from(unit), BigInt::from(m))]],
        )
    }
}

/// Orthogonal sum of block forms (block-diagonal Gram matrix).
pub fn block_sum(blocks: &[CyclicBlock]) -> Result<LinkingForm, Error> {
    let m = blocks.len();
    let mut orders = Vec::with_capacity(m);
    let mut gram = vec![vec![Rational::zero(); m]; m];
    for (i, b) in blocks.iter().enumerate() {
        let f = b.to_form()?;
        orders.push(f.orders()[0]);
        gram[i][i] = f.gram()[0][0].clone();
    }
    LinkingForm::new(orders, gram)
}

/// Nondegeneracy: every element of order `k > 1` pairs to `1/k` with some
/// element. Decided by the adjoint-map criterion over the cyclic coefficient
/// rings; small groups fall back to the direct definition.
pub fn nondegenerate(f: &LinkingForm) -> Result<bool, Error> {
    if f.group_order()? <= 2048 {
        return exhaustive::nondegenerate_direct(f);
    }
    nondegenerate_adjoint(f)
}

/// Adjoint-map criterion: the map `e_i ↦ Σ_j (n_j·g_ij) χ_j` into `⊕ Z/n_j`
/// is injective exactly when the form is nondegenerate.
pub(crate) fn nondegenerate_adjoint(f: &LinkingForm) -> Result<bool, Error> {
    let m = f.rank();
    let mut constraints: IMat = vec![vec![BigInt::zero(); m]; m];
    let mut moduli = Vec::with_capacity(m);
    for t in 0..m {
        for i in 0..m {
            let scaled = &f.gram[i][t] * rat_int(f.orders[t] as i64);
            debug_assert!(scaled.denom().is_one());
            constraints[t][i] = scaled.numer().clone();
        }
        moduli.push(BigInt::from(f.orders[t]));
    }
    let basis = congruence_nullspace(&constraints, &moduli)?;
    let lattice_index: BigInt = determinant(&basis).abs();
    let full: BigInt = f.orders.iter().map(|&o| BigInt::from(o)).product();
    Ok(lattice_index == full)
}

/// Split a nondegenerate form into its primary components. Cross-prime
/// pairings vanish; each component is presented on the scaled generators.
pub fn primary_decompose(f: &LinkingForm) -> Result<BTreeMap<u64, LinkingForm>, Error> {
    if !nondegenerate(f)? {
        return Err(Error::validation(
            "primary decomposition requires a nondegenerate form".to_string(),
        ));
    }
    let m = f.rank();
    // per prime: the list of (generator index, p-part order, CRT coefficient)
    let mut per_prime: BTreeMap<u64, Vec<(usize, u64, u64)>> = BTreeMap::new();
    for i in 0..m {
        for (&p, &a) in &factorize(f.orders[i]) {
            let pa = p.pow(a);
            let rest = f.orders[i] / pa;
            let t = inv_mod(rest % pa, pa).expect("coprime by construction");
            let c = ((rest as u128 * t as u128) % f.orders[i] as u128) as u64;
            per_prime.entry(p).or_default().push((i, pa, c));
        }
    }
    let mut out = BTreeMap::new();
    for (p, gens) in per_prime {
        let orders: Vec<u64> = gens.iter().map(|&(_, pa, _)| pa).collect();
        let mut gram = vec![vec![Rational::zero(); gens.len()]; gens.len()];
        for (a, &(i, _, ci)) in gens.iter().enumerate() {
            for (b, &(j, _, cj)) in gens.iter().enumerate() {
                let factor = Rational::from_integer(BigInt::from(ci) * BigInt::from(cj));
                gram[a][b] = mod_one(&(factor * &f.gram[i][j]));
            }
        }
        out.insert(p, LinkingForm::new(orders, gram)?);
    }
    Ok(out)
}

/// Smallest quadratic non-residue in `{2, …, p−1}` for an odd prime.
pub fn n_of_p(p: u64) -> Result<u64, Error> {
    if p == 2 || !is_prime(p) {
        return Err(Error::validation(format!("{p} is not an odd prime")));
    }
    (2..p)
        .find(|&s| legendre(s, p) == -1)
        .ok_or_else(|| Error::internal(format!("no non-residue below {p}")))
}

/// Working presentation of a `p`-group with a pairing; generators are
/// independent by construction.
struct PGroupForm {
    p: u64,
    ks: Vec<u32>,
    gram: Vec<Vec<Rational>>,
}

impl PGroupForm {
    fn from_linking_form(f: &LinkingForm, p: u64) -> Result<Self, Error> {
        let mut ks = Vec::with_capacity(f.rank());
        for &o in f.orders() {
            let fac = factorize(o);
            if fac.len() != 1 || !fac.contains_key(&p) {
                return Err(Error::validation(format!(
                    "generator order {o} is not a power of {p}"
                )));
            }
            ks.push(fac[&p]);
        }
        Ok(PGroupForm {
            p,
            ks,
            gram: f.gram().to_vec(),
        })
    }

    fn rank(&self) -> usize {
        self.ks.len()
    }

    fn max_exponent(&self) -> u32 {
        self.ks.iter().copied().max().unwrap_or(0)
    }

    fn modulus(&self, k: u32) -> Result<u64, Error> {
        self.p.checked_pow(k).ok_or_else(|| {
            Error::validation(format!(
                "prime power {}^{k} exceeds the supported range",
                self.p
            ))
        })
    }

    fn order(&self, i: usize) -> u64 {
        self.p.pow(self.ks[i])
    }

    /// Pairing of coordinate vectors (arbitrary integers), mod 1.
    fn pair(&self, x: &[BigInt], y: &[BigInt]) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc += Rational::from_integer(xi * yj) * &self.gram[i][j];
            }
        }
        mod_one(&acc)
    }

    /// `p^K · ℓ(x, e_i)` as an integer modulo `p^K`.
    fn scaled_pair_gen(&self, x: &[BigInt], i: usize, kk: u32) -> Result<u64, Error> {
        let pk = self.modulus(kk)?;
        let mut unit = vec![BigInt::zero(); self.rank()];
        unit[i] = BigInt::one();
        let v = self.pair(x, &unit) * rat_int(pk as i64);
        if !v.denom().is_one() {
            return Err(Error::internal(format!(
                "pairing with generator {i} is not annihilated by p^{kk}"
            )));
        }
        Ok((v.numer() % BigInt::from(pk))
            .to_u64()
            .expect("reduced into range"))
    }

    fn scaled_self(&self, x: &[BigInt], kk: u32) -> Result<u64, Error> {
        let pk = self.modulus(kk)?;
        let v = self.pair(x, x) * rat_int(pk as i64);
        if !v.denom().is_one() {
            return Err(Error::internal(
                "self-pairing is not annihilated by the maximal order".to_string(),
            ));
        }
        Ok((v.numer() % BigInt::from(pk))
            .to_u64()
            .expect("reduced into range"))
    }

    fn unit_vector(&self, i: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.rank()];
        v[i] = BigInt::one();
        v
    }

    /// Presentation of the orthogonal complement of the given elements:
    /// solve the pairing congruences, re-present the solution subgroup on
    /// independent generators via Smith normal form, and carry the pairing
    /// over.
    fn orthogonal_complement(&self, xs: &[Vec<BigInt>]) -> Result<PGroupForm, Error> {
        let r = self.rank();
        let kk = self.max_exponent();
        let pk = BigInt::from(self.modulus(kk)?);
        let mut constraints: IMat = Vec::with_capacity(xs.len());
        for x in xs {
            let mut row = Vec::with_capacity(r);
            for i in 0..r {
                let mut unit = vec![BigInt::zero(); r];
                unit[i] = BigInt::one();
                let v = self.pair(x, &unit) * Rational::from_integer(pk.clone());
                if !v.denom().is_one() {
                    return Err(Error::internal(
                        "constraint row is not integral".to_string(),
                    ));
                }
                row.push(v.numer().clone());
            }
            constraints.push(row);
        }
        let moduli = vec![pk.clone(); xs.len()];
        let basis = congruence_nullspace(&constraints, &moduli)?;
        // relations of the subgroup generated by the basis columns
        let diag: IMat = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        if i == j {
                            BigInt::from(self.order(i))
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let relations = solve_integral(&basis, &diag)?;
        let (_, u_inv, d, _) = smith_normal_form(&relations);
        let gen_coords = mat_mul(&basis, &u_inv);
        let mut new_ks = Vec::new();
        let mut kept: Vec<Vec<BigInt>> = Vec::new();
        for j in 0..r {
            let dj = &d[j][j];
            if dj.is_one() {
                continue;
            }
            if dj.is_zero() || dj.is_negative() {
                return Err(Error::internal(
                    "complement presentation is not finite".to_string(),
                ));
            }
            // the order of a subgroup element is a power of p
            let dj_u = dj.to_u64().ok_or_else(|| {
                Error::internal("complement order exceeds the supported range".to_string())
            })?;
            let fac = factorize(dj_u);
            if fac.len() != 1 || !fac.contains_key(&self.p) {
                return Err(Error::internal(format!(
                    "complement generator order {dj_u} is not a power of {}",
                    self.p
                )));
            }
            new_ks.push(fac[&self.p]);
            kept.push((0..r).map(|i| gen_coords[i][j].clone()).collect());
        }
        let mut gram = vec![vec![Rational::zero(); kept.len()]; kept.len()];
        for a in 0..kept.len() {
            for b in 0..kept.len() {
                gram[a][b] = self.pair(&kept[a], &kept[b]);
            }
        }
        Ok(PGroupForm {
            p: self.p,
            ks: new_ks,
            gram,
        })
    }

    /// Extend by one orthogonal cyclic generator of order `p^k` with
    /// self-linking `unit / p^k`.
    fn extended_by_block(&self, k: u32, unit: u64) -> Result<PGroupForm, Error> {
        let pk = self.modulus(k)?;
        let r = self.rank();
        let mut ks = self.ks.clone();
        ks.push(k);
        let mut gram = vec![vec![Rational::zero(); r + 1]; r + 1];
        for i in 0..r {
            for j in 0..r {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        gram[r][r] = mod_one(&Rational::new(BigInt::from(unit), BigInt::from(pk)));
        Ok(PGroupForm { p: self.p, ks, gram })
    }
}

/// Wall's classification of a nondegenerate form on an odd `p`-group:
/// orthogonal cyclic blocks `[p^k, s]` with `s ∈ {1, n(p)}`, normalized so
/// that each exponent carries at most one `n(p)` block.
pub fn classify_odd(f: &LinkingForm, p: u64) -> Result<Vec<CyclicBlock>, Error> {
    if p == 2 || !is_prime(p) {
        return Err(Error::validation(format!("{p} is not an odd prime")));
    }
    if !nondegenerate(f)? {
        return Err(Error::validation(
            "classification requires a nondegenerate form".to_string(),
        ));
    }
    let mut g = PGroupForm::from_linking_form(f, p)?;
    let np = n_of_p(p)?;
    let mut blocks = Vec::new();
    while g.rank() > 0 {
        let kk = g.max_exponent();
        let pk = g.modulus(kk)?;
        // an element of maximal order whose scaled self-linking is a unit
        let mut x: Option<Vec<BigInt>> = None;
        for i in 0..g.rank() {
            if g.ks[i] == kk {
                let s = g.scaled_self(&g.unit_vector(i), kk)?;
                if s % p != 0 {
                    x = Some(g.unit_vector(i));
                    break;
                }
            }
        }
        let x = match x {
            Some(x) => x,
            None => {
                // x + y trick: pair a maximal-order generator with a dual
                let i = (0..g.rank())
                    .find(|&i| g.ks[i] == kk)
                    .expect("some generator has maximal order");
                let xv = g.unit_vector(i);
                let j = (0..g.rank())
                    .find_map(|j| {
                        let c = g.scaled_pair_gen(&xv, j, kk).ok()?;
                        (c % p != 0).then_some((j, c))
                    })
                    .ok_or_else(|| {
                        Error::internal("no dual generator found; form is degenerate".to_string())
                    })?;
                let t = inv_mod(j.1 % pk, pk).expect("unit mod p^k");
                let mut sum = xv;
                sum[j.0] += BigInt::from(t);
                sum
            }
        };
        let s = g.scaled_self(&x, kk)?;
        if s % p == 0 {
            return Err(Error::internal(
                "selected element has non-unit self-linking".to_string(),
            ));
        }
        // rescale the generator so its self-linking becomes 1 or n(p)
        let (unit, target) = if legendre(s % p, p) == 1 {
            (1u64, s)
        } else {
            let inv_np = inv_mod(np, pk).expect("n(p) is a unit");
            (np, ((s as u128 * inv_np as u128) % pk as u128) as u64)
        };
        let root = sqrt_mod_prime_power(target, p, kk)?
            .ok_or_else(|| Error::internal("expected quadratic residue after unit split".to_string()))?;
        let tinv = inv_mod(root, pk).expect("root is a unit");
        let x_scaled: Vec<BigInt> = x.iter().map(|c| c * BigInt::from(tinv)).collect();
        let check = g.scaled_self(&x_scaled, kk)?;
        if check != unit % pk {
            return Err(Error::internal(format!(
                "rescaled self-linking {check} differs from the unit {unit}"
            )));
        }
        blocks.push(CyclicBlock {
            prime: p,
            exponent: kk,
            unit: unit as i64,
        });
        g = g.orthogonal_complement(&[x_scaled])?;
    }
    // two copies of [p^k, n(p)] are isomorphic to two copies of [p^k, 1]
    let mut by_exponent: BTreeMap<u32, (usize, usize)> = BTreeMap::new();
    for b in &blocks {
        let e = by_exponent.entry(b.exponent).or_insert((0, 0));
        if b.unit == 1 {
            e.0 += 1;
        } else {
            e.1 += 1;
        }
    }
    let mut out = Vec::new();
    for (&k, &(ones, nps)) in &by_exponent {
        let keep_np = nps % 2;
        for _ in 0..(ones + nps - keep_np) {
            out.push(CyclicBlock {
                prime: p,
                exponent: k,
                unit: 1,
            });
        }
        for _ in 0..keep_np {
            out.push(CyclicBlock {
                prime: p,
                exponent: k,
                unit: np as i64,
            });
        }
    }
    out.sort();
    Ok(out)
}

/// Canonical unit class of an odd scaled self-linking modulo the squares of
/// units of `Z/2^k`: `{1}` for `k = 1`, `{1, 3}` for `k = 2`, `{±1, ±3}`
/// for `k ≥ 3`.
fn unit_class_two(s: u64, k: u32) -> i64 {
    debug_assert!(s % 2 == 1);
    match k {
        1 => 1,
        2 => (s % 4) as i64,
        _ => match s % 8 {
            1 => 1,
            3 => 3,
            5 => -3,
            7 => -1,
            _ => unreachable!("odd residue"),
        },
    }
}

/// Result of the 2-primary stable classification: `form ⊕ (stabilizers)`
/// is isomorphic to the orthogonal sum of the blocks, where the stabilizers
/// are copies of `A^k(1)` for the listed exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoClassification {
    pub stabilizers: Vec<u32>,
    pub blocks: Vec<CyclicBlock>,
}

impl TwoClassification {
    pub fn stabilizers_added(&self) -> usize {
        self.stabilizers.len()
    }
}

/// Stable classification of a nondegenerate form on a 2-group: split off a
/// cyclic block whenever a maximal-order element has odd scaled
/// self-linking; otherwise adjoin one `A^k(1)` stabilizer and split the
/// resulting pair.
pub fn classify_two(f: &LinkingForm) -> Result<TwoClassification, Error> {
    if !nondegenerate(f)? {
        return Err(Error::validation(
            "classification requires a nondegenerate form".to_string(),
        ));
    }
    let mut g = PGroupForm::from_linking_form(f, 2)?;
    let mut stabilizers = Vec::new();
    let mut blocks = Vec::new();
    while g.rank() > 0 {
        let kk = g.max_exponent();
        let pk = g.modulus(kk)?;
        let mut odd_gen: Option<usize> = None;
        for i in 0..g.rank() {
            if g.ks[i] == kk && g.scaled_self(&g.unit_vector(i), kk)? % 2 == 1 {
                odd_gen = Some(i);
                break;
            }
        }
        if let Some(i) = odd_gen {
            let x = g.unit_vector(i);
            let s = g.scaled_self(&x, kk)?;
            blocks.push(CyclicBlock {
                prime: 2,
                exponent: kk,
                unit: unit_class_two(s, kk),
            });
            g = g.orthogonal_complement(&[x])?;
            continue;
        }
        // no odd diagonal at maximal order: adjoin a stabilizer A^k(1)
        let i = (0..g.rank())
            .find(|&i| g.ks[i] == kk)
            .expect("some generator has maximal order");
        let x = g.unit_vector(i);
        let (j, c) = (0..g.rank())
            .find_map(|j| {
                let c = g.scaled_pair_gen(&x, j, kk).ok()?;
                (c % 2 == 1).then_some((j, c))
            })
            .ok_or_else(|| {
                Error::internal("no odd dual pairing found; form is degenerate".to_string())
            })?;
        let t = inv_mod(c, pk).expect("odd scaled pairing is a unit");
        let mut y = vec![BigInt::zero(); g.rank()];
        y[j] = BigInt::from(t);
        let ext = g.extended_by_block(kk, 1)?;
        stabilizers.push(kk);
        let z = ext.rank() - 1;
        let mut x_ext: Vec<BigInt> = x.clone();
        x_ext.push(BigInt::one()); // x + z
        let mut y_ext: Vec<BigInt> = y.clone();
        y_ext.push(-BigInt::one()); // y − z
        if !ext.pair(&x_ext, &y_ext).is_zero() {
            return Err(Error::internal(
                "stabilized pair is not orthogonal".to_string(),
            ));
        }
        debug_assert_eq!(ext.ks[z], kk);
        for v in [&x_ext, &y_ext] {
            let s = ext.scaled_self(v, kk)?;
            if s % 2 == 0 {
                return Err(Error::internal(
                    "stabilized element has even self-linking".to_string(),
                ));
            }
            blocks.push(CyclicBlock {
                prime: 2,
                exponent: kk,
                unit: unit_class_two(s, kk),
            });
        }
        g = ext.orthogonal_complement(&[x_ext, y_ext])?;
    }
    blocks.sort();
    Ok(TwoClassification {
        stabilizers,
        blocks,
    })
}

/// Certified four-copy relation at the prime 2: inside `A^k(1)^4` the
/// generators `a+b+c`, `a−b+d`, `c−b−d`, `a−c−d` are pairwise orthogonal,
/// each of order `2^k` with scaled self-linking 3, and they span the group.
/// Returns the discovered right-hand side units.
fn discover_four_copy(k: u32) -> Result<Option<[i64; 4]>, Error> {
    let pk_checked = 2u64.checked_pow(k);
    let Some(pk) = pk_checked else {
        return Ok(None);
    };
    let gram: Vec<Vec<Rational>> = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    if i == j {
                        Rational::new(BigInt::one(), BigInt::from(pk))
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let g = PGroupForm {
        p: 2,
        ks: vec![k; 4],
        gram,
    };
    let coords: [[i64; 4]; 4] = [
        [1, 1, 1, 0],
        [1, -1, 0, 1],
        [0, -1, 1, -1],
        [1, 0, -1, -1],
    ];
    let gens: Vec<Vec<BigInt>> = coords
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    // span: the coordinate matrix must be invertible mod 2
    let mat: IMat = (0..4)
        .map(|i| (0..4).map(|j| gens[j][i].clone()).collect())
        .collect();
    let det = determinant(&mat);
    if (det % BigInt::from(2)).is_zero() {
        return Ok(None);
    }
    let mut units = [0i64; 4];
    for (idx, gi) in gens.iter().enumerate() {
        for gj in gens.iter().skip(idx + 1) {
            if !g.pair(gi, gj).is_zero() {
                return Ok(None);
            }
        }
        let s = g.scaled_self(gi, k)?;
        if s % 2 == 0 {
            return Ok(None);
        }
        units[idx] = unit_class_two(s, k);
    }
    Ok(Some(units))
}

type BlockMultiset = Vec<(u32, i64)>;

fn rewrite_moves(state: &BlockMultiset) -> Result<Vec<BlockMultiset>, Error> {
    let mut out = Vec::new();
    let exponents: BTreeSet<u32> = state.iter().map(|&(k, _)| k).collect();
    let mut rules: Vec<(Vec<(u32, i64)>, Vec<(u32, i64)>)> = Vec::new();
    for &k in &exponents {
        if k >= 3 {
            rules.push((vec![(k, 1), (k, 1)], vec![(k, -3), (k, -3)]));
            rules.push((vec![(k, -1), (k, -1)], vec![(k, 3), (k, 3)]));
            if let Some(units) = discover_four_copy(k)? {
                let lhs = vec![(k, 1); 4];
                let rhs: Vec<(u32, i64)> = units.iter().map(|&u| (k, u)).collect();
                rules.push((lhs, rhs));
                // mirror of the discovered relation
                let lhs_m = vec![(k, -1); 4];
                let rhs_m: Vec<(u32, i64)> = units.iter().map(|&u| (k, -u)).collect();
                rules.push((lhs_m, rhs_m));
            }
        }
    }
    let apply = |state: &BlockMultiset, from: &[(u32, i64)], to: &[(u32, i64)]| -> Option<BlockMultiset> {
        let mut s = state.clone();
        for item in from {
            let pos = s.iter().position(|x| x == item)?;
            s.remove(pos);
        }
        for item in to {
            s.push(*item);
        }
        s.sort();
        Some(s)
    };
    for (lhs, rhs) in &rules {
        if let Some(next) = apply(state, lhs, rhs) {
            out.push(next);
        }
        if let Some(next) = apply(state, rhs, lhs) {
            out.push(next);
        }
    }
    Ok(out)
}

/// Bounded rewriting closure: can `left` be transformed into `right` using
/// the two-copy and discovered four-copy relations?
fn stably_connected(left: BlockMultiset, right: BlockMultiset, bound: usize) -> Result<bool, Error> {
    let mut l = left;
    let mut r = right;
    l.sort();
    r.sort();
    if l == r {
        return Ok(true);
    }
    let mut seen: BTreeSet<BlockMultiset> = BTreeSet::new();
    let mut queue: VecDeque<BlockMultiset> = VecDeque::new();
    seen.insert(l.clone());
    queue.push_back(l);
    while let Some(state) = queue.pop_front() {
        for next in rewrite_moves(&state)? {
            if next == r {
                return Ok(true);
            }
            if seen.len() >= bound {
                return Ok(false);
            }
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

/// Isomorphism of nondegenerate linking forms: exact for odd-order parts,
/// stable at the prime 2 (an `Error::Undecided` is raised when the bounded
/// rewriting cannot connect the two 2-primary classifications).
pub fn isomorphic(f: &LinkingForm, g: &LinkingForm) -> Result<bool, Error> {
    if !nondegenerate(f)? || !nondegenerate(g)? {
        return Err(Error::validation(
            "isomorphism testing requires nondegenerate forms".to_string(),
        ));
    }
    if f.invariant_factors() != g.invariant_factors() {
        return Ok(false);
    }
    let pf = primary_decompose(f)?;
    let pg = primary_decompose(g)?;
    let primes_f: BTreeSet<u64> = pf.keys().copied().collect();
    let primes_g: BTreeSet<u64> = pg.keys().copied().collect();
    if primes_f != primes_g {
        return Ok(false);
    }
    for (&p, fp) in &pf {
        let gp = &pg[&p];
        if p == 2 {
            let cf = classify_two(fp)?;
            let cg = classify_two(gp)?;
            let mut left: BlockMultiset = cf
                .blocks
                .iter()
                .map(|b| (b.exponent, b.unit))
                .collect();
            left.extend(cg.stabilizers.iter().map(|&k| (k, 1)));
            let mut right: BlockMultiset = cg
                .blocks
                .iter()
                .map(|b| (b.exponent, b.unit))
                .collect();
            right.extend(cf.stabilizers.iter().map(|&k| (k, 1)));
            if !stably_connected(left, right, 20_000)? {
                return Err(Error::Undecided(
                    "2-primary classifications were not connected by the rewriting closure"
                        .to_string(),
                ));
            }
        } else if classify_odd(fp, p)? != classify_odd(gp, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}
