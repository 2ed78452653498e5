//! Reduction generators. Each returns the generated instance, the rule it
//! is meant for, and, when a planted object is supplied or found by
//! exhaustive search, the cheap successful action it induces.

use num_traits::Zero;

use super::dummy::dummy_orders;
use super::graph::{binomial, find_clique, find_dense_subgraph, find_min_set_cover, find_vertex_cover};
use super::{Graph, SetCoverInstance};
use crate::election::{Candidate, Election, Rule, ShiftAction};
use crate::error::{Error, Result};
use crate::pricing::{is_one_inf_aon, Instance, PriceFunction};
use crate::scalar::{ceil_usize, int, Extended};
use crate::{Price, Rational};

/// Largest number of subsets tried when searching for a witness.
pub const DEFAULT_SEARCH_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Planted {
    Vertices(Vec<usize>),
    Sets(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionWitness {
    pub planted: Planted,
    pub action: ShiftAction,
    /// Cost the action is guaranteed not to exceed.
    pub cost_bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub instance: Instance,
    pub rule: Rule,
    pub witness: Option<ReductionWitness>,
    /// Named candidates worth reporting, such as `p` and `d`.
    pub labels: Vec<(String, Candidate)>,
}

fn invalid(message: impl Into<String>) -> Error {
    Error::InvalidReductionInput(message.into())
}

fn aon(max_shift: usize, finite: bool) -> PriceFunction {
    PriceFunction::all_or_nothing(max_shift, if finite { Price::from(1) } else { Extended::Infinite })
}

/// `first ≻ p ≻ ⟨rest⟩` over `0..m`, where `rest` is everything else in
/// ascending order.
fn above_p(m: usize, p: Candidate, first: &[Candidate]) -> Vec<Candidate> {
    let mut order = first.to_vec();
    order.push(p);
    order.extend((0..m).filter(|c| *c != p && !first.contains(c)));
    order
}

/// Builds a Copeland instance from gadget voters (each followed by its
/// reverse, priced `∞`) and the filler election over `A ∪ B ∪ {p, d}`
/// with `p = 0`, `d = 1`, `A = 2..2+|A|` and `B` after it.
fn copeland_instance(
    gadgets: Vec<Vec<Candidate>>,
    a_len: usize,
    b_len: usize,
    a: usize,
    b: usize,
    alpha: &Rational,
) -> Result<(Instance, Rule)> {
    assert_eq!((a_len + b_len) % 2, 1, "filler election needs |A| + |B| odd");
    let rule = Rule::copeland(alpha.clone()).map_err(|e| invalid(e.to_string()))?;
    let m = a_len + b_len + 2;
    let a_set: Vec<Candidate> = (2..2 + a_len).collect();
    let b_set: Vec<Candidate> = (2 + a_len..m).collect();
    let mut orders = Vec::new();
    let mut finite = Vec::new();
    for order in gadgets {
        let mut rev = order.clone();
        rev.reverse();
        orders.push(order);
        finite.push(true);
        orders.push(rev);
        finite.push(false);
    }
    for order in dummy_orders(&a_set, &b_set, 0, 1, a, b)? {
        orders.push(order);
        finite.push(false);
    }
    let election = Election::new(m, orders)?;
    let prices = finite
        .iter()
        .enumerate()
        .map(|(v, &f)| aon(election.rank(v, 0) - 1, f))
        .collect();
    Ok((Instance::new(election, 0, prices)?, rule))
}

/// Shift-to-top on the given voters.
fn top_on(instance: &Instance, voters: &[usize]) -> ShiftAction {
    let mut action = instance.zero_action();
    for &v in voters {
        action.set(v, instance.max_shift(v));
    }
    action
}

fn copeland_labels() -> Vec<(String, Candidate)> {
    vec![("p".into(), 0), ("d".into(), 1)]
}

/// Copeland instance with `(1,∞)`-all-or-nothing prices whose optimum is at
/// most `k` when `graph` has `k` vertices inducing `t` edges.
///
/// Candidates: `p = 0`, `d = 1`, one per edge from 2 on, then `|E| + 5`
/// dummies. Voters `2u` and `2u + 1` belong to vertex `u`.
pub fn reduce_dks_aon(
    graph: &Graph,
    k: usize,
    t: usize,
    plant: Option<&[usize]>,
    alpha: &Rational,
) -> Result<Reduction> {
    let n = graph.num_vertices();
    if k == 0 || k > n {
        return Err(invalid(format!("k must be in 1..={n}, got {k}")));
    }
    if t == 0 {
        return Err(invalid("t must be positive"));
    }
    let edges = graph.edges().len();
    let dummies = edges + 5;
    if t + 1 > dummies {
        return Err(invalid(format!("t = {t} exceeds |E| + 4 = {}", edges + 4)));
    }
    let m = 2 * edges + 7;
    let gadgets = (0..n)
        .map(|u| {
            let incident: Vec<Candidate> = graph.incident_edges(u).into_iter().map(|e| e + 2).collect();
            above_p(m, 0, &incident)
        })
        .collect();
    let (instance, rule) = copeland_instance(gadgets, edges, dummies, t + 1, 1, alpha)?;

    let chosen = match plant {
        Some(s) => {
            let mut s = s.to_vec();
            s.sort_unstable();
            s.dedup();
            if s.len() != k || s.iter().any(|&u| u >= n) {
                return Err(invalid(format!("planted subset must be {k} distinct vertices")));
            }
            if graph.induced_edges(&s).len() < t {
                return Err(invalid(format!("planted subset induces fewer than {t} edges")));
            }
            Some(s)
        }
        None => search(find_dense_subgraph(graph, k, t, DEFAULT_SEARCH_BUDGET))?,
    };
    let witness = chosen.map(|s| {
        let voters: Vec<usize> = s.iter().map(|u| 2 * u).collect();
        ReductionWitness { action: top_on(&instance, &voters), planted: Planted::Vertices(s), cost_bound: int(k as i64) }
    });
    Ok(Reduction { instance, rule, witness, labels: copeland_labels() })
}

/// A search that ran over budget yields no witness rather than an error.
fn search<T>(result: Result<Option<T>>) -> Result<Option<T>> {
    match result {
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        other => other,
    }
}

/// Copeland instance with unit prices built from a `(1,∞)`-all-or-nothing
/// one: every voter gets `B` fresh fillers (`B'` if its shifts cost `∞` or
/// it has none) directly above `p`, and all other fillers at the bottom.
pub fn aon_to_unit(instance: &Instance, b: usize, b_prime: usize) -> Result<Instance> {
    if !is_one_inf_aon(instance) {
        return Err(invalid("the input must have (1,∞)-all-or-nothing prices"));
    }
    if b > b_prime {
        return Err(invalid(format!("need B ≤ B', got {b} > {b_prime}")));
    }
    let n = instance.num_voters();
    if n < 3 {
        return Err(invalid(format!("need at least 3 voters, got {n}")));
    }
    let election = instance.election();
    let p = instance.preferred();
    let m = instance.num_candidates();
    let fillers = (b + b_prime)
        .checked_mul(n)
        .ok_or_else(|| invalid("filler count overflows"))?;
    let total = m + fillers;
    let mut next = m;
    let mut orders = Vec::with_capacity(n);
    let mut in_block = vec![false; total];
    for v in 0..n {
        let size = block_size(instance, v, b, b_prime);
        let block: Vec<Candidate> = (next..next + size).collect();
        next += size;
        let from = election.rank(v, p);
        let order = election.order(v);
        let mut out = Vec::with_capacity(total);
        out.extend_from_slice(&order[..from - 1]);
        out.extend(&block);
        out.extend_from_slice(&order[from - 1..]);
        for &f in &block {
            in_block[f] = true;
        }
        out.extend((m..total).filter(|&f| !in_block[f]));
        for &f in &block {
            in_block[f] = false;
        }
        orders.push(out);
    }
    let election = Election::new(total, orders)?;
    Instance::with_unit_prices(election, p)
}

fn block_size(instance: &Instance, v: usize, b: usize, b_prime: usize) -> usize {
    let psi = instance.price_function(v);
    if psi.max_shift() > 0 && psi.price(1).is_finite() {
        b
    } else {
        b_prime
    }
}

/// Image of an action of the all-or-nothing instance in [`aon_to_unit`]'s
/// output: every affected voter moves `p` past its block and to the top.
pub fn lift_aon_action(instance: &Instance, action: &ShiftAction, b: usize) -> Result<ShiftAction> {
    instance.validate_action(action)?;
    let shifts = (0..instance.num_voters())
        .map(|v| if action.get(v) == 0 { 0 } else { b + instance.max_shift(v) })
        .collect();
    Ok(ShiftAction::new(shifts))
}

/// Preimage of an action of [`aon_to_unit`]'s output: shifts past the
/// filler block carry over, the rest are dropped.
pub fn project_unit_action(instance: &Instance, action: &ShiftAction, b: usize, b_prime: usize) -> ShiftAction {
    let shifts = (0..instance.num_voters())
        .map(|v| action.get(v).saturating_sub(block_size(instance, v, b, b_prime)))
        .collect();
    ShiftAction::new(shifts)
}

fn lift_witness(aon: &Instance, witness: Option<ReductionWitness>, b: usize, b_cap: usize) -> Result<Option<ReductionWitness>> {
    witness
        .map(|w| {
            Ok(ReductionWitness {
                action: lift_aon_action(aon, &w.action, b)?,
                planted: w.planted,
                cost_bound: w.cost_bound * int((b + b_cap) as i64),
            })
        })
        .transpose()
}

/// Largest finite-priced shift of a `(1,∞)`-all-or-nothing instance.
fn finite_width(instance: &Instance) -> usize {
    (0..instance.num_voters())
        .filter(|&v| instance.price_function(v).price(instance.max_shift(v)).is_finite())
        .map(|v| instance.max_shift(v))
        .max()
        .unwrap_or(0)
}

/// [`reduce_dks_aon`] followed by [`aon_to_unit`] with `B = |V_G|` and
/// `B' = |V_G|⁴ + 1`. The witness bound is `(B + width)·k ≤ 2|V_G|·k`.
pub fn reduce_dks_unit(
    graph: &Graph,
    k: usize,
    t: usize,
    plant: Option<&[usize]>,
    alpha: &Rational,
) -> Result<Reduction> {
    let stage = reduce_dks_aon(graph, k, t, plant, alpha)?;
    let n = graph.num_vertices();
    let b = n;
    let b_prime = n.checked_pow(4).and_then(|x| x.checked_add(1)).ok_or_else(|| invalid("|V|⁴ overflows"))?;
    let instance = aon_to_unit(&stage.instance, b, b_prime)?;
    let witness = lift_witness(&stage.instance, stage.witness, b, finite_width(&stage.instance))?;
    Ok(Reduction { instance, rule: stage.rule, witness, labels: stage.labels })
}

/// Copeland instance with `(1,∞)`-all-or-nothing prices of width 2 whose
/// optimum is at most `C(k, 2)` when `graph` has a `k`-clique.
///
/// Candidates: `p = 0`, `d = 1`, one per vertex from 2 on, then `|V| + 5`
/// dummies. Voters `2i` and `2i + 1` belong to edge `i`.
pub fn reduce_clique_aon(graph: &Graph, k: usize, plant: Option<&[usize]>, alpha: &Rational) -> Result<Reduction> {
    let n = graph.num_vertices();
    if k < 2 || k > n {
        return Err(invalid(format!("k must be in 2..={n}, got {k}")));
    }
    let dummies = n + 5;
    let m = 2 * n + 7;
    let gadgets = graph.edges().iter().map(|&(u, v)| above_p(m, 0, &[u + 2, v + 2])).collect();
    let (instance, rule) = copeland_instance(gadgets, n, dummies, k + 1, k - 2, alpha)?;

    let chosen = match plant {
        Some(s) => {
            let mut s = s.to_vec();
            s.sort_unstable();
            s.dedup();
            if s.len() != k || s.iter().any(|&u| u >= n) || !graph.is_clique(&s) {
                return Err(invalid(format!("planted subset is not a {k}-clique")));
            }
            Some(s)
        }
        None => search(find_clique(graph, k, DEFAULT_SEARCH_BUDGET))?,
    };
    let witness = chosen.map(|s| {
        let voters: Vec<usize> = graph.induced_edges(&s).into_iter().map(|e| 2 * e).collect();
        ReductionWitness {
            action: top_on(&instance, &voters),
            planted: Planted::Vertices(s),
            cost_bound: int(binomial(k, 2) as i64),
        }
    });
    Ok(Reduction { instance, rule, witness, labels: copeland_labels() })
}

/// [`reduce_clique_aon`] followed by [`aon_to_unit`] with `B = ⌈4/δ⌉` and
/// `B' = B(|V_G|⁴ + 1)`. The witness bound is `(B + 2)·C(k, 2)`.
pub fn reduce_clique_gap(
    graph: &Graph,
    k: usize,
    delta: &Rational,
    plant: Option<&[usize]>,
    alpha: &Rational,
) -> Result<Reduction> {
    if *delta <= Rational::zero() || *delta >= int(1) {
        return Err(invalid(format!("δ must lie strictly between 0 and 1, got {delta}")));
    }
    let stage = reduce_clique_aon(graph, k, plant, alpha)?;
    let b = ceil_usize(&(int(4) / delta)).expect("positive");
    let n = graph.num_vertices();
    let b_prime = n
        .checked_pow(4)
        .and_then(|x| x.checked_add(1))
        .and_then(|x| x.checked_mul(b))
        .ok_or_else(|| invalid("B' overflows"))?;
    let instance = aon_to_unit(&stage.instance, b, b_prime)?;
    let witness = lift_witness(&stage.instance, stage.witness, b, 2)?;
    Ok(Reduction { instance, rule: stage.rule, witness, labels: stage.labels })
}

/// Copeland instance with `(1,∞)`-all-or-nothing prices whose optimum equals
/// the set-cover optimum; with `unit`, composed through [`aon_to_unit`] with
/// `B = width·M + 1` and `B' = B·M`.
///
/// Candidates: `p = 0`, `d = 1`, one per element from 2 on, then `N + 5`
/// dummies. Voters `2i` and `2i + 1` belong to set `i`.
pub fn reduce_setcover(
    sc: &SetCoverInstance,
    unit: bool,
    plant: Option<&[usize]>,
    alpha: &Rational,
) -> Result<Reduction> {
    let universe = sc.universe();
    if universe == 0 {
        return Err(invalid("the universe must not be empty"));
    }
    let dummies = universe + 5;
    let m = 2 * universe + 7;
    let gadgets = sc
        .sets()
        .iter()
        .map(|s| {
            let elements: Vec<Candidate> = s.iter().map(|x| x + 2).collect();
            above_p(m, 0, &elements)
        })
        .collect();
    let (instance, rule) = copeland_instance(gadgets, universe, dummies, universe + 1, 0, alpha)?;

    let chosen = match plant {
        Some(c) => {
            let mut c = c.to_vec();
            c.sort_unstable();
            c.dedup();
            if c.iter().any(|&i| i >= sc.sets().len()) || !sc.is_cover(&c) {
                return Err(invalid("planted sets do not cover the universe"));
            }
            Some(c)
        }
        None => search(find_min_set_cover(sc, DEFAULT_SEARCH_BUDGET))?,
    };
    let witness = chosen.map(|c| {
        let voters: Vec<usize> = c.iter().map(|i| 2 * i).collect();
        ReductionWitness {
            action: top_on(&instance, &voters),
            cost_bound: int(c.len() as i64),
            planted: Planted::Sets(c),
        }
    });
    if !unit {
        return Ok(Reduction { instance, rule, witness, labels: copeland_labels() });
    }
    let (b, b_prime) = setcover_unit_blocks(sc);
    let unit_instance = aon_to_unit(&instance, b, b_prime)?;
    let witness = lift_witness(&instance, witness, b, sc.max_set_size())?;
    Ok(Reduction { instance: unit_instance, rule, witness, labels: copeland_labels() })
}

/// `(B, B')` used by the unit-price set-cover reduction.
pub fn setcover_unit_blocks(sc: &SetCoverInstance) -> (usize, usize) {
    let b = sc.max_set_size() * sc.sets().len() + 1;
    (b, b * sc.sets().len().max(1))
}

/// Borda instance with uniform all-or-nothing prices in which bribing `k`
/// voters can make `p` win iff the 3-regular `graph` has a vertex cover of
/// size `k`.
///
/// Candidates: `p = 0`, one per edge from 1 on, then `3|V| − 1` dummies
/// whose first member is `t`. Voters `2u` and `2u + 1` belong to vertex `u`.
pub fn reduce_vc3(graph: &Graph, k: usize, plant: Option<&[usize]>) -> Result<Reduction> {
    let n = graph.num_vertices();
    if !graph.is_regular(3) {
        return Err(invalid("the graph must be 3-regular"));
    }
    if k < 3 || k >= n {
        return Err(invalid(format!("k must satisfy 3 ≤ k < {n}, got {k}")));
    }
    let edges = graph.edges().len();
    let m = 1 + edges + 3 * n - 1;
    let p = 0;
    let e_all: Vec<Candidate> = (1..=edges).collect();
    let d_all: Vec<Candidate> = (edges + 1..m).collect();
    let t = d_all[0];
    let rev = |xs: &[Candidate]| xs.iter().rev().copied().collect::<Vec<_>>();

    let mut orders = Vec::new();
    for u in 0..n {
        let incident: Vec<Candidate> = graph.incident_edges(u).into_iter().map(|e| e + 1).collect();
        let others: Vec<Candidate> = e_all.iter().copied().filter(|e| !incident.contains(e)).collect();
        orders.push([d_all.clone(), incident.clone(), vec![p], others.clone()].concat());
        orders.push([rev(&d_all), rev(&incident), vec![p], rev(&others)].concat());
    }
    let l = n + 2 * k - 5;
    for _ in 0..l {
        orders.push([e_all.clone(), vec![p], d_all.clone()].concat());
        orders.push([rev(&e_all), vec![p], rev(&d_all)].concat());
    }
    orders.push([e_all.clone(), vec![t, p], d_all[1..].to_vec()].concat());
    orders.push([rev(&e_all), vec![p], rev(&d_all)].concat());
    let election = Election::new(m, orders)?;
    let instance = Instance::with_uniform_aon_prices(election, p)?;

    let chosen = match plant {
        Some(c) => {
            let mut c = c.to_vec();
            c.sort_unstable();
            c.dedup();
            if c.len() > k || c.iter().any(|&u| u >= n) || !graph.is_vertex_cover(&c) {
                return Err(invalid(format!("planted vertices are not a vertex cover of size at most {k}")));
            }
            Some(c)
        }
        None => search(find_vertex_cover(graph, k, DEFAULT_SEARCH_BUDGET))?,
    };
    let witness = chosen.map(|mut c| {
        for u in 0..n {
            if c.len() >= k {
                break;
            }
            if !c.contains(&u) {
                c.push(u);
            }
        }
        c.sort_unstable();
        let voters: Vec<usize> = c.iter().map(|u| 2 * u).collect();
        ReductionWitness { action: top_on(&instance, &voters), planted: Planted::Vertices(c), cost_bound: int(k as i64) }
    });
    let labels = vec![("p".into(), p), ("e".into(), 1), ("d".into(), d_all[1]), ("t".into(), t)];
    Ok(Reduction { instance, rule: Rule::Positional, witness, labels })
}
