//! Elections, voting rules and shift actions.
//!
//! Candidates are dense indices `0..m`. Ranks are 1-based throughout the
//! public API: `rank(v, c) == 1` means voter `v` ranks `c` first.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::int;
use crate::Rational;

pub type Candidate = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    num_candidates: usize,
    orders: Vec<Vec<Candidate>>,
    ranks: Vec<Vec<usize>>,
    scoring: Option<Vec<Vec<Rational>>>,
}

impl Election {
    /// Builds an election from preference orders, most preferred first.
    pub fn new(num_candidates: usize, orders: Vec<Vec<Candidate>>) -> Result<Self> {
        if num_candidates == 0 {
            return Err(Error::InvalidElection("an election needs at least one candidate".into()));
        }
        if orders.is_empty() {
            return Err(Error::InvalidElection("an election needs at least one voter".into()));
        }
        let mut ranks = Vec::with_capacity(orders.len());
        for (v, order) in orders.iter().enumerate() {
            if order.len() != num_candidates {
                return Err(Error::InvalidElection(format!(
                    "voter {v} ranks {} candidates, expected {num_candidates}",
                    order.len()
                )));
            }
            let mut rank_of = vec![0usize; num_candidates];
            for (pos, &c) in order.iter().enumerate() {
                if c >= num_candidates || rank_of[c] != 0 {
                    return Err(Error::InvalidElection(format!(
                        "preference order of voter {v} is not a permutation"
                    )));
                }
                rank_of[c] = pos + 1;
            }
            ranks.push(rank_of);
        }
        Ok(Election { num_candidates, orders, ranks, scoring: None })
    }

    /// Attaches one scoring vector per voter. Each vector must be
    /// nonincreasing and nonnegative.
    pub fn with_scoring_vectors(mut self, vectors: Vec<Vec<Rational>>) -> Result<Self> {
        if vectors.len() != self.num_voters() {
            return Err(Error::InvalidElection(format!(
                "{} scoring vectors for {} voters",
                vectors.len(),
                self.num_voters()
            )));
        }
        for (v, w) in vectors.iter().enumerate() {
            if w.len() != self.num_candidates {
                return Err(Error::InvalidElection(format!(
                    "scoring vector of voter {v} has length {}",
                    w.len()
                )));
            }
            if w.iter().any(Signed::is_negative) {
                return Err(Error::InvalidElection(format!("scoring vector of voter {v} is negative")));
            }
            if w.windows(2).any(|pair| pair[0] < pair[1]) {
                return Err(Error::InvalidElection(format!(
                    "scoring vector of voter {v} is not nonincreasing"
                )));
            }
        }
        self.scoring = Some(vectors);
        Ok(self)
    }

    pub fn without_scoring_vectors(mut self) -> Self {
        self.scoring = None;
        self
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    pub fn num_voters(&self) -> usize {
        self.orders.len()
    }

    pub fn orders(&self) -> &[Vec<Candidate>] {
        &self.orders
    }

    pub fn order(&self, voter: usize) -> &[Candidate] {
        &self.orders[voter]
    }

    /// `π_v^{-1}(c)`, 1-based.
    pub fn rank(&self, voter: usize, candidate: Candidate) -> usize {
        self.ranks[voter][candidate]
    }

    /// `π_v(rank)`, 1-based.
    pub fn candidate_at(&self, voter: usize, rank: usize) -> Candidate {
        self.orders[voter][rank - 1]
    }

    pub fn prefers(&self, voter: usize, a: Candidate, b: Candidate) -> bool {
        self.ranks[voter][a] < self.ranks[voter][b]
    }

    /// `V_{a ≻ b}`.
    pub fn voters_preferring(&self, a: Candidate, b: Candidate) -> Vec<usize> {
        (0..self.num_voters()).filter(|&v| self.prefers(v, a, b)).collect()
    }

    pub fn scoring_vectors(&self) -> Option<&[Vec<Rational>]> {
        self.scoring.as_deref()
    }

    /// Points `w^v_rank`; Borda `(m-1, …, 0)` when no vectors are attached.
    pub fn weight(&self, voter: usize, rank: usize) -> Rational {
        match &self.scoring {
            Some(vectors) => vectors[voter][rank - 1].clone(),
            None => int((self.num_candidates - rank) as i64),
        }
    }

    /// `Δw^v_rank = w^v_rank − w^v_{rank+1}`; the last position drops to zero.
    pub fn weight_drop(&self, voter: usize, rank: usize) -> Rational {
        if rank >= self.num_candidates {
            return self.weight(voter, rank);
        }
        self.weight(voter, rank) - self.weight(voter, rank + 1)
    }

    /// True when every voter scores with the Borda vector.
    pub fn is_borda(&self) -> bool {
        match &self.scoring {
            None => true,
            Some(vectors) => {
                let m = self.num_candidates as i64;
                vectors
                    .iter()
                    .all(|w| w.iter().enumerate().all(|(i, x)| *x == int(m - 1 - i as i64)))
            }
        }
    }
}

/// A voting rule: positional scoring (per-voter vectors, Borda by default)
/// or Copeland^α.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Positional,
    Copeland(Rational),
}

impl Rule {
    pub fn copeland(alpha: Rational) -> Result<Self> {
        if alpha.is_negative() || alpha > BigRational::one() {
            return Err(Error::InvalidElection(format!("Copeland alpha {alpha} is outside [0, 1]")));
        }
        Ok(Rule::Copeland(alpha))
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Positional => f.write_str("positional"),
            Rule::Copeland(alpha) => write!(f, "copeland^{alpha}"),
        }
    }
}

/// Per-voter numbers of positions the preferred candidate is moved up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShiftAction(Vec<usize>);

impl ShiftAction {
    pub fn new(shifts: Vec<usize>) -> Self {
        ShiftAction(shifts)
    }

    pub fn zero(num_voters: usize) -> Self {
        ShiftAction(vec![0; num_voters])
    }

    pub fn get(&self, voter: usize) -> usize {
        self.0[voter]
    }

    pub fn set(&mut self, voter: usize, shift: usize) {
        self.0[voter] = shift;
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// `Σ_v s_v`.
    pub fn unit_shifts(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn affected_voters(&self) -> usize {
        self.0.iter().filter(|&&s| s > 0).count()
    }

    /// Pointwise `self ≤ other`.
    pub fn dominated_by(&self, other: &ShiftAction) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for ShiftAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in &self.0 {
            if !first {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
            first = false;
        }
        Ok(())
    }
}

/// Exact per-candidate scores.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScoreTable(Vec<Rational>);

impl ScoreTable {
    pub fn new(scores: Vec<Rational>) -> Self {
        ScoreTable(scores)
    }

    pub fn get(&self, candidate: Candidate) -> &Rational {
        &self.0[candidate]
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> &Rational {
        self.0.iter().max().expect("score table is never empty")
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, s| acc + s)
    }

    /// All candidates with the maximum score, ascending.
    pub fn argmax(&self) -> Vec<Candidate> {
        let best = self.max();
        (0..self.0.len()).filter(|&c| &self.0[c] == best).collect()
    }
}

/// `score(c) = Σ_v w^v_{π_v^{-1}(c)}`.
pub fn positional_scores(election: &Election) -> ScoreTable {
    let m = election.num_candidates();
    let mut scores = vec![Rational::zero(); m];
    match election.scoring_vectors() {
        Some(vectors) => {
            for (order, w) in election.orders().iter().zip(vectors) {
                for (pos, &c) in order.iter().enumerate() {
                    scores[c] += &w[pos];
                }
            }
        }
        None => {
            let mut totals = vec![0i64; m];
            for order in election.orders() {
                for (pos, &c) in order.iter().enumerate() {
                    totals[c] += (m - 1 - pos) as i64;
                }
            }
            for (s, t) in scores.iter_mut().zip(totals) {
                *s = int(t);
            }
        }
    }
    ScoreTable(scores)
}

/// Integral Borda scores. Fails unless every voter uses the Borda vector.
pub fn borda_scores(election: &Election) -> Result<Vec<i64>> {
    if !election.is_borda() {
        return Err(Error::Unsupported("this algorithm requires the Borda rule".into()));
    }
    let m = election.num_candidates();
    let mut totals = vec![0i64; m];
    for order in election.orders() {
        for (pos, &c) in order.iter().enumerate() {
            totals[c] += (m - 1 - pos) as i64;
        }
    }
    Ok(totals)
}

/// `N_E(a, b)`: number of voters preferring `a` to `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairwiseMatrix {
    num_candidates: usize,
    counts: Vec<usize>,
}

impl PairwiseMatrix {
    pub fn get(&self, a: Candidate, b: Candidate) -> usize {
        self.counts[a * self.num_candidates + b]
    }

    /// `N(a, b) − N(b, a)`.
    pub fn margin(&self, a: Candidate, b: Candidate) -> i64 {
        self.get(a, b) as i64 - self.get(b, a) as i64
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }
}

pub fn pairwise_margins(election: &Election) -> PairwiseMatrix {
    let m = election.num_candidates();
    let mut counts = vec![0usize; m * m];
    for order in election.orders() {
        for (i, &a) in order.iter().enumerate() {
            for &b in &order[i + 1..] {
                counts[a * m + b] += 1;
            }
        }
    }
    PairwiseMatrix { num_candidates: m, counts }
}

/// Maximal runs of candidates that appear contiguously and in the same
/// order in every vote, in the order of the first vote.
fn common_runs(election: &Election) -> Vec<Vec<Candidate>> {
    let m = election.num_candidates();
    let first = election.order(0);
    let mut linked = vec![true; m];
    linked[first[m - 1]] = false;
    for order in election.orders() {
        for (i, &a) in order.iter().enumerate() {
            if linked[a] {
                let expected = first[election.ranks[0][a]];
                if order.get(i + 1) != Some(&expected) {
                    linked[a] = false;
                }
            }
        }
    }
    let mut runs: Vec<Vec<Candidate>> = Vec::new();
    let mut current = Vec::new();
    for &c in first {
        current.push(c);
        if !linked[c] {
            runs.push(std::mem::take(&mut current));
        }
    }
    runs
}

/// Pairwise wins and ties per candidate. Runs of candidates that every
/// vote keeps together are compared once, so elections with large blocks of
/// filler candidates stay cheap.
pub fn copeland_record(election: &Election) -> Vec<(usize, usize)> {
    let m = election.num_candidates();
    let runs = common_runs(election);
    let reps: Vec<Candidate> = runs.iter().map(|r| r[0]).collect();
    let mut record = vec![(0usize, 0usize); m];
    for (i, run) in runs.iter().enumerate() {
        let (mut wins, mut ties) = (0usize, 0usize);
        for (j, other) in runs.iter().enumerate() {
            if i == j {
                continue;
            }
            let ahead = election.ranks.iter().filter(|r| r[reps[i]] < r[reps[j]]).count();
            match (2 * ahead).cmp(&election.num_voters()) {
                std::cmp::Ordering::Greater => wins += other.len(),
                std::cmp::Ordering::Equal => ties += other.len(),
                std::cmp::Ordering::Less => {}
            }
        }
        for (q, &c) in run.iter().enumerate() {
            record[c] = (wins + run.len() - 1 - q, ties);
        }
    }
    record
}

/// `score(c) = #wins + α·#ties`.
pub fn copeland_scores(election: &Election, alpha: &Rational) -> ScoreTable {
    ScoreTable(
        copeland_record(election)
            .into_iter()
            .map(|(wins, ties)| int(wins as i64) + alpha * int(ties as i64))
            .collect(),
    )
}

pub fn scores(election: &Election, rule: &Rule) -> ScoreTable {
    match rule {
        Rule::Positional => positional_scores(election),
        Rule::Copeland(alpha) => copeland_scores(election, alpha),
    }
}

/// The co-winner set: every candidate with the maximum score.
pub fn winners(election: &Election, rule: &Rule) -> Vec<Candidate> {
    scores(election, rule).argmax()
}

pub fn is_winner(election: &Election, rule: &Rule, candidate: Candidate) -> bool {
    let table = scores(election, rule);
    table.get(candidate) == table.max()
}

/// Moves `preferred` up by `s_v` positions in every vote `v`; the candidates
/// it passes each drop one position.
pub fn apply_shift(election: &Election, preferred: Candidate, action: &ShiftAction) -> Result<Election> {
    if preferred >= election.num_candidates() {
        return Err(Error::InvalidInstance(format!("candidate {preferred} does not exist")));
    }
    if action.len() != election.num_voters() {
        return Err(Error::ActionLength { expected: election.num_voters(), got: action.len() });
    }
    let mut orders = election.orders.clone();
    let mut ranks = election.ranks.clone();
    for (v, order) in orders.iter_mut().enumerate() {
        let shift = action.get(v);
        if shift == 0 {
            continue;
        }
        let from = election.rank(v, preferred);
        if shift >= from {
            return Err(Error::InvalidShift { voter: v, shift, max: from - 1 });
        }
        let to = from - shift;
        order[to - 1..from].rotate_right(1);
        for pos in to - 1..from {
            ranks[v][order[pos]] = pos + 1;
        }
    }
    Ok(Election { num_candidates: election.num_candidates, orders, ranks, scoring: election.scoring.clone() })
}
