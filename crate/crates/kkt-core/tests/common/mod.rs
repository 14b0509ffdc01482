//! Shared helpers for the integration suites: random clovers, random
//! linking forms, and small exhaustive utilities.
#![allow(dead_code)] // each suite uses its own subset

use std::collections::BTreeSet;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use kkt_core::clover::{CloverData, Piece, TrilinearForm};
use kkt_core::linkform::{block_sum, n_of_p, CyclicBlock, LinkingForm};
use kkt_core::rat::{rat, rat_int, Rational};

pub fn random_form(g: usize, max_den: i64, rng: &mut ChaCha8Rng) -> TrilinearForm {
    let mut f = TrilinearForm::new(g);
    for j in 1..=g {
        for k in (j + 1)..=g {
            for l in (k + 1)..=g {
                if rng.gen_bool(0.75) {
                    f.set(
                        (j, k, l),
                        rat(rng.gen_range(-9..=9), rng.gen_range(1..=max_den)),
                    )
                    .unwrap();
                }
            }
        }
    }
    f
}

pub fn random_matrix(rows: usize, cols: usize, max_den: i64, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| rat(rng.gen_range(-6..=6), rng.gen_range(1..=max_den)))
                .collect()
        })
        .collect()
}

pub fn random_clover(k: usize, g: usize, max_den: i64, rng: &mut ChaCha8Rng) -> CloverData {
    let pieces = (0..k)
        .map(|_| Piece {
            genus: g,
            form: random_form(g, max_den, rng),
        })
        .collect();
    let mut linking = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            linking.push((i, j, random_matrix(g, g, max_den, rng)));
        }
    }
    CloverData::new(pieces, linking).unwrap()
}

/// Random clover with diagonal cross-linking matrices; the sparse edges keep
/// exhaustive label loops affordable.
pub fn random_diagonal_clover(k: usize, g: usize, rng: &mut ChaCha8Rng) -> CloverData {
    let pieces = (0..k)
        .map(|_| {
            let mut f = TrilinearForm::new(g);
            f.set((1, 2, 3), rat(rng.gen_range(1..=6), rng.gen_range(1..=4)))
                .unwrap();
            Piece { genus: g, form: f }
        })
        .collect();
    let mut linking = Vec::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let m: Vec<Vec<Rational>> = (0..g)
                .map(|a| {
                    (0..g)
                        .map(|b| {
                            if a == b {
                                rat(rng.gen_range(-4..=4), rng.gen_range(1..=3))
                            } else {
                                rat_int(0)
                            }
                        })
                        .collect()
                })
                .collect();
            linking.push((i, j, m));
        }
    }
    CloverData::new(pieces, linking).unwrap()
}

pub fn orthogonal_sum(a: &LinkingForm, b: &LinkingForm) -> LinkingForm {
    let m = a.rank() + b.rank();
    let mut orders = a.orders().to_vec();
    orders.extend_from_slice(b.orders());
    let mut gram = vec![vec![rat_int(0); m]; m];
    for i in 0..a.rank() {
        for j in 0..a.rank() {
            gram[i][j] = a.gram()[i][j].clone();
        }
    }
    for i in 0..b.rank() {
        for j in 0..b.rank() {
            gram[a.rank() + i][a.rank() + j] = b.gram()[i][j].clone();
        }
    }
    LinkingForm::new(orders, gram).unwrap()
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Re-present a form on random generators (an automorphism of the group).
pub fn scramble(f: &LinkingForm, rng: &mut ChaCha8Rng) -> LinkingForm {
    let m = f.rank();
    let orders = f.orders();
    'retry: loop {
        let mut a = vec![vec![0u64; m]; m];
        for j in 0..m {
            for (i, row) in a.iter_mut().enumerate() {
                let step = orders[i] / gcd_u64(orders[i], orders[j]);
                let max = orders[i] / step;
                row[j] = step * rng.gen_range(0..max);
            }
        }
        let gens: Vec<Vec<u64>> = (0..m).map(|j| (0..m).map(|i| a[i][j]).collect()).collect();
        for (j, g) in gens.iter().enumerate() {
            if f.element_order(g) != orders[j] {
                continue 'retry;
            }
        }
        let mut span: BTreeSet<Vec<u64>> = BTreeSet::new();
        span.insert(vec![0u64; m]);
        for g in &gens {
            let mut grown = BTreeSet::new();
            for t in 0..f.element_order(g) {
                let tg: Vec<u64> = g
                    .iter()
                    .zip(orders)
                    .map(|(&x, &o)| ((x as u128 * t as u128) % o as u128) as u64)
                    .collect();
                for s in &span {
                    grown.insert(
                        s.iter()
                            .zip(&tg)
                            .zip(orders)
                            .map(|((&x, &y), &o)| (x + y) % o)
                            .collect::<Vec<u64>>(),
                    );
                }
            }
            span = grown;
        }
        if span.len() as u128 != f.group_order().unwrap() {
            continue 'retry;
        }
        let mut gram = vec![vec![rat_int(0); m]; m];
        for i in 0..m {
            for j in 0..m {
                gram[i][j] = f.pair(&gens[i], &gens[j]);
            }
        }
        return LinkingForm::new(orders.to_vec(), gram).unwrap();
    }
}

/// Random nondegenerate form on an odd-order group of order at most
/// `max_order`: a scrambled random block sum. Returns the form and its
/// prime.
pub fn random_odd_form(max_order: u64, rng: &mut ChaCha8Rng) -> (LinkingForm, u64) {
    let primes = [3u64, 5, 7, 11, 13];
    loop {
        let p = primes[rng.gen_range(0..primes.len())];
        let mut blocks = Vec::new();
        let mut order = 1u64;
        loop {
            let k = rng.gen_range(1..=3u32);
            let pk = p.pow(k);
            if order.saturating_mul(pk) > max_order {
                break;
            }
            order *= pk;
            let np = n_of_p(p).unwrap();
            let unit = if rng.gen_bool(0.5) { 1 } else { np as i64 };
            blocks.push(CyclicBlock {
                prime: p,
                exponent: k,
                unit,
            });
            if rng.gen_bool(0.4) {
                break;
            }
        }
        if blocks.is_empty() {
            continue;
        }
        let base = block_sum(&blocks).unwrap();
        return (scramble(&base, rng), p);
    }
}
