#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shift_bribery::election::{Election, Rule};
use shift_bribery::lp::RowKind;
use shift_bribery::oracle::brute_force_opt;
use shift_bribery::random::{random_instance, RandomFamily};
use shift_bribery::scalar::{int, Extended};
use shift_bribery::{Instance, LinearProgram, Rational};

/// Borda scores counted position by position.
pub fn borda_by_hand(election: &Election) -> Vec<i64> {
    let m = election.num_candidates();
    let mut s = vec![0i64; m];
    for order in election.orders() {
        for (pos, &c) in order.iter().enumerate() {
            s[c] += (m - 1 - pos) as i64;
        }
    }
    s
}

pub fn diffmax_by_hand(instance: &Instance) -> i64 {
    let s = borda_by_hand(instance.election());
    let p = instance.preferred();
    s.iter().map(|x| x - s[p]).max().unwrap()
}

/// `N(a, b)` counted from the orders.
pub fn prefer_count(election: &Election, a: usize, b: usize) -> usize {
    election
        .orders()
        .iter()
        .filter(|o| o.iter().position(|&c| c == a) < o.iter().position(|&c| c == b))
        .count()
}

/// Copeland scores with ties counted as `alpha`, from direct pair counts.
pub fn copeland_by_hand(election: &Election, alpha: &Rational) -> Vec<Rational> {
    let m = election.num_candidates();
    (0..m)
        .map(|c| {
            (0..m).filter(|&o| o != c).fold(Rational::zero(), |acc, o| {
                let (x, y) = (prefer_count(election, c, o), prefer_count(election, o, c));
                if x > y {
                    acc + Rational::one()
                } else if x == y {
                    acc + alpha
                } else {
                    acc
                }
            })
        })
        .collect()
}

/// Borda instance of size `m ≤ 5`, `n ≤ 5` drawn by seed.
pub fn small_borda(seed: u64, family: RandomFamily) -> Instance {
    let m = 2 + (seed % 4) as usize;
    let n = 1 + ((seed / 4) % 5) as usize;
    random_instance(seed, m, n, family)
}

pub fn finite_opt(instance: &Instance) -> Option<Rational> {
    brute_force_opt(instance, &Rule::Positional).unwrap().opt_cost.into_finite()
}

/// Uniform all-or-nothing Borda instance where every voter ranks the
/// preferred candidate `0` first or second.
pub fn near_top_aon(seed: u64, m: usize, n: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let orders = (0..n)
        .map(|_| {
            let mut order: Vec<usize> = (1..m).collect();
            order.shuffle(&mut rng);
            order.insert(rng.gen_range(0..2.min(m)), 0);
            order
        })
        .collect();
    Instance::with_uniform_aon_prices(Election::new(m, orders).unwrap(), 0).unwrap()
}

/// Solves a square system exactly; `None` if singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[col][col];
                for c in col..n {
                    let delta = &f * &a[col][c];
                    a[r][c] -= delta;
                }
                let delta = &f * &b[col];
                b[r] -= delta;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn feasible(lp: &LinearProgram, x: &[Rational]) -> bool {
    lp.rows().iter().all(|row| {
        let v: Rational = row.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match row.kind {
            RowKind::AtLeast => v >= row.rhs,
            RowKind::Equal => v == row.rhs,
        }
    })
}

/// Minimum objective over all vertices, by intersecting every `n`-subset
/// of rows; `None` if no vertex is feasible.
pub fn vertex_enumeration(lp: &LinearProgram) -> Option<Rational> {
    let n = lp.num_vars();
    let rows = lp.rows();
    let mut best: Option<Rational> = None;
    let mut idx: Vec<usize> = (0..n).collect();
    if rows.len() < n {
        return None;
    }
    loop {
        let a = idx.iter().map(|&r| rows[r].coeffs.clone()).collect();
        let b = idx.iter().map(|&r| rows[r].rhs.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(lp, &x) {
                let value: Rational = lp.objective().iter().zip(&x).map(|(c, v)| c * v).sum();
                if best.as_ref().map_or(true, |b| value < *b) {
                    best = Some(value);
                }
            }
        }
        let Some(i) = (0..n).rev().find(|&i| idx[i] < rows.len() - n + i) else { break };
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
    best
}

/// Random LP over a bounded region: lower bounds on every variable, a cap
/// on their sum, and up to `extra` random rows, some of them equalities.
pub fn random_bounded_lp(seed: u64, vars: usize, extra: usize) -> LinearProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut lp = LinearProgram::new(vars);
    lp.set_objective((0..vars).map(|_| int(rng.gen_range(-5..=5))).collect());
    for i in 0..vars {
        let mut coeffs = vec![Rational::zero(); vars];
        coeffs[i] = Rational::one();
        lp.add_row(coeffs, RowKind::AtLeast, int(rng.gen_range(-3..=1)));
    }
    lp.add_row(vec![int(-1); vars], RowKind::AtLeast, int(-rng.gen_range(2..=8)));
    for _ in 0..extra {
        let coeffs = (0..vars).map(|_| Rational::new(rng.gen_range(-4..=4).into(), rng.gen_range(1..=3).into())).collect();
        let kind = if rng.gen_range(0..4) == 0 { RowKind::Equal } else { RowKind::AtLeast };
        lp.add_row(coeffs, kind, int(rng.gen_range(-4..=3)));
    }
    lp
}

pub fn price_le(a: &shift_bribery::Price, b: &Rational) -> bool {
    match a {
        Extended::Finite(x) => x <= b,
        Extended::Infinite => false,
    }
}

pub fn family_of(seed: u64) -> RandomFamily {
    RandomFamily::ALL[(seed % 4) as usize]
}

/// Random action with `s_v ≤ π_v^{-1}(p) − 1`, ignoring prices.
pub fn random_action(instance: &Instance, seed: u64) -> shift_bribery::ShiftAction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    shift_bribery::ShiftAction::new((0..instance.num_voters()).map(|v| rng.gen_range(0..=instance.max_shift(v))).collect())
}

/// Every action whose shifts all have finite price.
pub fn finite_actions(instance: &Instance) -> Vec<shift_bribery::ShiftAction> {
    let limits: Vec<usize> = instance.prices().iter().map(|f| f.max_finite_shift()).collect();
    let mut out = vec![Vec::new()];
    for &limit in &limits {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<usize>| {
                (0..=limit).map(move |s| {
                    let mut next = prefix.clone();
                    next.push(s);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(shift_bribery::ShiftAction::new).collect()
}
