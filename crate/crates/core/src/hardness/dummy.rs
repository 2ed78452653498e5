//! Filler elections that fix Copeland scores and pairwise margins.

use crate::election::{Candidate, Election};
use crate::error::{Error, Result};

fn reversed(items: &[Candidate]) -> Vec<Candidate> {
    items.iter().rev().copied().collect()
}

/// The pair of orders over `t` (odd length) under which `c` beats the next
/// `(|t| − 1)/2` members of `t` cyclically and ties with the rest, while all
/// pairs not involving `c` tie.
pub fn half_split_orders(t: &[Candidate], c: Candidate) -> Result<(Vec<Candidate>, Vec<Candidate>)> {
    if t.len() % 2 == 0 {
        return Err(Error::InvalidReductionInput(format!("half-split orders need an odd set, got {}", t.len())));
    }
    let i = t
        .iter()
        .position(|&x| x == c)
        .ok_or_else(|| Error::InvalidReductionInput(format!("candidate {c} is not in the set")))?;
    let half = (t.len() - 1) / 2;
    let ahead: Vec<Candidate> = (1..=half).map(|j| t[(i + j) % t.len()]).collect();
    let rest: Vec<Candidate> = t.iter().copied().filter(|x| *x != c && !ahead.contains(x)).collect();

    let mut top = vec![c];
    top.extend(&ahead);
    top.extend(&rest);
    let mut bottom = reversed(&rest);
    bottom.push(c);
    bottom.extend(reversed(&ahead));
    Ok((top, bottom))
}

/// Orders of the filler election over `A ∪ B ∪ {p, d}`. Within each group
/// the canonical order is the order of the given slices, and `S` is the
/// first `a` members of `B`.
///
/// With `|A| + |B|` odd: `p` loses to every member of `A` by `2b + 1`
/// votes, `p` scores `|B| − a + 1`, `d` scores `|B|`, and every member of
/// `A ∪ B` scores at most `(|A| + |B| + 3)/2` under Copeland.
pub fn dummy_orders(
    a_set: &[Candidate],
    b_set: &[Candidate],
    p: Candidate,
    d: Candidate,
    a: usize,
    b: usize,
) -> Result<Vec<Vec<Candidate>>> {
    if (a_set.len() + b_set.len()) % 2 == 0 {
        return Err(Error::InvalidReductionInput(format!(
            "|A| + |B| must be odd, got {} + {}",
            a_set.len(),
            b_set.len()
        )));
    }
    if a > b_set.len() {
        return Err(Error::InvalidReductionInput(format!("a = {a} exceeds |B| = {}", b_set.len())));
    }
    let ab: Vec<Candidate> = a_set.iter().chain(b_set).copied().collect();
    let (s, b_rest) = b_set.split_at(a);
    let rev_a = reversed(a_set);
    let rev_b = reversed(b_set);
    let cat = |parts: &[&[Candidate]]| parts.concat();

    let mut orders = Vec::with_capacity(2 * ab.len() + 2 * b + 5);
    orders.push(cat(&[&ab, &[p, d]]));
    for _ in 0..b {
        orders.push(cat(&[a_set, &[p], b_set, &[d]]));
        orders.push(cat(&[&[d], &rev_b, &rev_a, &[p]]));
    }
    orders.push(cat(&[&[d], b_set, a_set, &[p]]));
    orders.push(cat(&[&[p], &rev_a, &[d], &rev_b]));
    orders.push(cat(&[&[p], b_rest, s, a_set, &[d]]));
    orders.push(cat(&[&[d], &rev_a, &reversed(s), &[p], &reversed(b_rest)]));
    for &c in &ab {
        let (hso, hst) = half_split_orders(&ab, c)?;
        orders.push(cat(&[&hso, &[p, d]]));
        orders.push(cat(&[&[d, p], &hst]));
    }
    Ok(orders)
}

/// [`dummy_orders`] as an election; the candidates must be exactly
/// `0..|A| + |B| + 2`.
pub fn dummy_election(
    a_set: &[Candidate],
    b_set: &[Candidate],
    p: Candidate,
    d: Candidate,
    a: usize,
    b: usize,
) -> Result<Election> {
    let orders = dummy_orders(a_set, b_set, p, d, a, b)?;
    Election::new(a_set.len() + b_set.len() + 2, orders)
        .map_err(|e| Error::InvalidReductionInput(format!("candidates must be 0..m: {e}")))
}
