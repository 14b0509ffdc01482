//! Exact integer matrix utilities: Smith normal form with transforms,
//! Hermite-style lattice bases, and solution lattices of linear congruence
//! systems. Everything works over `BigInt`; columns are the vector
//! convention throughout.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

pub type IMat = Vec<Vec<BigInt>>;

pub fn zeros(rows: usize, cols: usize) -> IMat {
    vec![vec![BigInt::zero(); cols]; rows]
}

pub fn identity(n: usize) -> IMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = BigInt::one();
    }
    m
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    let mut out = zeros(rows, cols);
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                let t = &a[i][k] * &b[k][j];
                out[i][j] += t;
            }
        }
    }
    out
}

/// Smith normal form with transforms: returns `(u, u_inv, d, v)` such that
/// `u · a · v = d` with `u`, `v` unimodular and `d` diagonal with
/// non-negative entries, each dividing the next.
pub fn smith_normal_form(a: &IMat) -> (IMat, IMat, IMat, IMat) {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut u_inv = identity(rows);
    let mut v = identity(cols);

    // row ops keep u·a·v = d: row op E on d goes with E·u and u_inv·E⁻¹
    fn row_swap(d: &mut IMat, u: &mut IMat, u_inv: &mut IMat, i: usize, j: usize) {
        d.swap(i, j);
        u.swap(i, j);
        for r in u_inv.iter_mut() {
            r.swap(i, j);
        }
    }
    fn row_neg(d: &mut IMat, u: &mut IMat, u_inv: &mut IMat, i: usize) {
        for x in d[i].iter_mut() {
            *x = -x.clone();
        }
        for x in u[i].iter_mut() {
            *x = -x.clone();
        }
        for r in u_inv.iter_mut() {
            r[i] = -r[i].clone();
        }
    }
    /// row i -= q · row j
    fn row_sub(d: &mut IMat, u: &mut IMat, u_inv: &mut IMat, i: usize, j: usize, q: &BigInt) {
        for c in 0..d[i].len() {
            let t = q * &d[j][c];
            d[i][c] -= t;
        }
        for c in 0..u[i].len() {
            let t = q * &u[j][c];
            u[i][c] -= t;
        }
        // inverse op on columns of u_inv: col j += q · col i
        for r in u_inv.iter_mut() {
            let t = q * &r[i];
            r[j] += t;
        }
    }
    fn col_swap(d: &mut IMat, v: &mut IMat, i: usize, j: usize) {
        for r in d.iter_mut() {
            r.swap(i, j);
        }
        for r in v.iter_mut() {
            r.swap(i, j);
        }
    }
    /// col i -= q · col j
    fn col_sub(d: &mut IMat, v: &mut IMat, i: usize, j: usize, q: &BigInt) {
        for r in d.iter_mut() {
            let t = q * &r[j];
            r[i] -= t;
        }
        for r in v.iter_mut() {
            let t = q * &r[j];
            r[i] -= t;
        }
    }

    let n = rows.min(cols);
    let mut t = 0;
    while t < n {
        // find a nonzero pivot in the submatrix, smallest absolute value
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero()
                    && pivot
                        .map(|(pi, pj)| d[i][j].abs() < d[pi][pj].abs())
                        .unwrap_or(true)
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        row_swap(&mut d, &mut u, &mut u_inv, t, pi);
        col_swap(&mut d, &mut v, t, pj);
        if d[t][t].is_negative() {
            row_neg(&mut d, &mut u, &mut u_inv, t);
        }
        // clear row and column t
        let mut dirty = false;
        for i in (t + 1)..rows {
            if !d[i][t].is_zero() {
                let q = d[i][t].clone() / d[t][t].clone();
                row_sub(&mut d, &mut u, &mut u_inv, i, t, &q);
                if !d[i][t].is_zero() {
                    dirty = true;
                }
            }
        }
        for j in (t + 1)..cols {
            if !d[t][j].is_zero() {
                let q = d[t][j].clone() / d[t][t].clone();
                col_sub(&mut d, &mut v, j, t, &q);
                if !d[t][j].is_zero() {
                    dirty = true;
                }
            }
        }
        if dirty {
            continue; // smaller remainders exist; repick the pivot
        }
        // divisibility: d[t][t] must divide every later entry
        let mut fixed = true;
        'outer: for i in (t + 1)..rows {
            for j in (t + 1)..cols {
                if !(d[i][j].clone() % d[t][t].clone()).is_zero() {
                    // fold the offending row into row t and restart this pivot
                    let one = BigInt::from(-1);
                    row_sub(&mut d, &mut u, &mut u_inv, t, i, &one);
                    fixed = false;
                    break 'outer;
                }
            }
        }
        if fixed {
            t += 1;
        }
    }
    (u, u_inv, d, v)
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn determinant(a: &IMat) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut last_pivot = BigInt::one();
    for t in 0..n {
        let Some(p) = (t..n).find(|&i| !m[i][t].is_zero()) else {
            return BigInt::zero();
        };
        if p != t {
            m.swap(p, t);
            sign = -sign;
        }
        for i in (t + 1)..n {
            for j in (t + 1)..n {
                let num = &m[t][t] * &m[i][j] - &m[i][t] * &m[t][j];
                m[i][j] = num / &last_pivot;
            }
            m[i][t] = BigInt::zero();
        }
        last_pivot = m[t][t].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Column-style Hermite reduction of a generating set: given generators as
/// the columns of `gens`, return a square basis (columns) of the lattice
/// they span. The lattice must have full rank.
pub fn column_lattice_basis(gens: &IMat) -> Result<IMat, Error> {
    let rows = gens.len();
    let mut cols: Vec<Vec<BigInt>> = if rows == 0 {
        Vec::new()
    } else {
        (0..gens[0].len())
            .map(|j| (0..rows).map(|i| gens[i][j].clone()).collect())
            .collect()
    };
    let mut basis: Vec<Vec<BigInt>> = Vec::new();
    for r in 0..rows {
        // reduce all columns so that only one has a nonzero entry in row r
        loop {
            let mut nz: Vec<usize> = (0..cols.len()).filter(|&j| !cols[j][r].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&j| cols[j][r].abs());
            let (small, rest) = (nz[0], &nz[1..]);
            for &j in rest {
                let q = cols[j][r].clone() / cols[small][r].clone();
                for i in 0..rows {
                    let t = &q * &cols[small][i];
                    cols[j][i] -= t;
                }
            }
        }
        if let Some(j) = (0..cols.len()).find(|&j| !cols[j][r].is_zero()) {
            basis.push(cols.swap_remove(j));
        } else {
            return Err(Error::internal(format!(
                "lattice generators do not have full rank at row {r}"
            )));
        }
    }
    // back to column-major matrix
    let mut out = zeros(rows, basis.len());
    for (j, col) in basis.iter().enumerate() {
        for i in 0..rows {
            out[i][j] = col[i].clone();
        }
    }
    Ok(out)
}

/// Solution lattice of the congruence system `(A z)_j ≡ 0 (mod m_j)` for
/// `z ∈ Z^r`, returned as a square basis matrix (columns). `a` is `s × r`
/// with one row per congruence.
pub fn congruence_nullspace(a: &IMat, moduli: &[BigInt]) -> Result<IMat, Error> {
    let s = a.len();
    let r = if s > 0 {
        a[0].len()
    } else {
        return Err(Error::internal("empty congruence system"));
    };
    debug_assert_eq!(moduli.len(), s);
    // stack M = [A | diag(m)] as a map Z^{r+s} → Z^s; z-solutions are the
    // first r coordinates of its kernel
    let mut m = zeros(s, r + s);
    for i in 0..s {
        for j in 0..r {
            m[i][j] = a[i][j].clone();
        }
        m[i][r + i] = moduli[i].clone();
    }
    let (_, _, d, v) = smith_normal_form(&m);
    // kernel basis: columns j of v with d[j][j] = 0 or j beyond the diagonal
    let total = r + s;
    let mut gens: Vec<usize> = Vec::new();
    for j in 0..total {
        let dj = if j < s && j < d.len() && j < d[0].len() {
            d[j][j].clone()
        } else {
            BigInt::zero()
        };
        if dj.is_zero() {
            gens.push(j);
        }
    }
    let mut proj = zeros(r, gens.len());
    for (col, &j) in gens.iter().enumerate() {
        for i in 0..r {
            proj[i][col] = v[i][j].clone();
        }
    }
    column_lattice_basis(&proj)
}

/// Solve `B · X = C` exactly over the rationals and require an integral
/// result. `b` must be square and invertible.
pub fn solve_integral(b: &IMat, c: &IMat) -> Result<IMat, Error> {
    use crate::rat::Rational;
    let n = b.len();
    let cols = if n > 0 { c[0].len() } else { 0 };
    // rational Gaussian elimination on [B | C]
    let mut aug: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            b[i].iter()
                .chain(c[i].iter())
                .map(|x| Rational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    for t in 0..n {
        let p = (t..n)
            .find(|&i| !aug[i][t].is_zero())
            .ok_or_else(|| Error::internal("singular matrix in solve_integral"))?;
        aug.swap(t, p);
        let pv = aug[t][t].clone();
        for x in aug[t].iter_mut() {
            *x /= pv.clone();
        }
        for i in 0..n {
            if i != t && !aug[i][t].is_zero() {
                let f = aug[i][t].clone();
                for j in 0..n + cols {
                    let sub = &aug[t][j] * &f;
                    aug[i][j] -= sub;
                }
            }
        }
    }
    let mut out = zeros(n, cols);
    for i in 0..n {
        for j in 0..cols {
            let x = &aug[i][n + j];
            if !x.denom().is_one() {
                return Err(Error::internal(format!(
                    "expected integral solution, found {x} at ({i},{j})"
                )));
            }
            out[i][j] = x.numer().clone();
        }
    }
    Ok(out)
}

pub fn from_i64(rows: &[&[i64]]) -> IMat {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_mat(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> IMat {
        (0..rows)
            .map(|_| (0..cols).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect())
            .collect()
    }

    #[test]
    fn snf_decomposition_holds_on_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let a = random_mat(rows, cols, &mut rng);
            let (u, u_inv, d, v) = smith_normal_form(&a);
            assert_eq!(mat_mul(&mat_mul(&u, &a), &v), d, "u·a·v = d");
            assert_eq!(mat_mul(&u, &u_inv), identity(rows), "u·u_inv = 1");
            assert_eq!(determinant(&u).abs(), BigInt::one());
            assert_eq!(determinant(&v).abs(), BigInt::one());
            // diagonal, non-negative, divisibility chain
            for i in 0..rows {
                for j in 0..cols {
                    if i != j {
                        assert!(d[i][j].is_zero());
                    }
                }
            }
            for t in 1..rows.min(cols) {
                if !d[t - 1][t - 1].is_zero() {
                    assert!((d[t][t].clone() % d[t - 1][t - 1].clone()).is_zero());
                } else {
                    assert!(d[t][t].is_zero());
                }
                assert!(!d[t][t].is_negative());
            }
        }
    }

    #[test]
    fn determinant_matches_cofactor_expansion_on_small_matrices() {
        let a = from_i64(&[&[2, 3], &[1, 4]]);
        assert_eq!(determinant(&a), BigInt::from(5));
        let b = from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(determinant(&b), BigInt::from(-3));
        let c = from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(determinant(&c), BigInt::zero());
    }

    #[test]
    fn congruence_nullspace_agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..40 {
            let r = rng.gen_range(1..=3);
            let s = rng.gen_range(1..=2);
            let moduli: Vec<BigInt> = (0..s)
                .map(|_| BigInt::from(rng.gen_range(2i64..=12)))
                .collect();
            let a: IMat = (0..s)
                .map(|_| (0..r).map(|_| BigInt::from(rng.gen_range(-6i64..=6))).collect())
                .collect();
            let basis = congruence_nullspace(&a, &moduli).unwrap();
            // membership: every basis column satisfies the congruences
            for j in 0..r {
                for (i, m) in moduli.iter().enumerate() {
                    let mut dot = BigInt::zero();
                    for k in 0..r {
                        dot += &a[i][k] * &basis[k][j];
                    }
                    assert!((dot % m).is_zero());
                }
            }
            // completeness modulo the box: count solutions in the box
            // Π (0..lcm) two ways for tiny instances
            if r <= 2 {
                let lim: i64 = 12;
                let mut brute = 0u64;
                let mut in_lattice = 0u64;
                let det = determinant(&basis).abs();
                let mut z = vec![0i64; r];
                loop {
                    let sat = (0..s).all(|i| {
                        let mut dot = BigInt::zero();
                        for k in 0..r {
                            dot += &a[i][k] * BigInt::from(z[k]);
                        }
                        (dot % &moduli[i]).is_zero()
                    });
                    if sat {
                        brute += 1;
                    }
                    // lattice membership via rational solve
                    if solve_integral(
                        &basis,
                        &(0..r).map(|k| vec![BigInt::from(z[k])]).collect::<Vec<_>>(),
                    )
                    .is_ok()
                    {
                        in_lattice += 1;
                    }
                    let mut idx = 0;
                    loop {
                        if idx == r {
                            break;
                        }
                        z[idx] += 1;
                        if z[idx] < lim {
                            break;
                        }
                        z[idx] = 0;
                        idx += 1;
                    }
                    if idx == r {
                        break;
                    }
                }
                assert_eq!(brute, in_lattice, "a={a:?} moduli={moduli:?} det={det}");
            }
        }
    }

    #[test]
    fn solve_integral_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..30 {
            let n = rng.gen_range(1..=3);
            let mut b = random_mat(n, n, &mut rng);
            for (i, row) in b.iter_mut().enumerate() {
                row[i] += BigInt::from(20); // comfortably nonsingular
            }
            let x = random_mat(n, 2, &mut rng);
            let c = mat_mul(&b, &x);
            assert_eq!(solve_integral(&b, &c).unwrap(), x);
        }
    }
}
