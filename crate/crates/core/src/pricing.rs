//! Price functions and Shift-Bribery instances.

use num_traits::{One, Signed, Zero};

use crate::election::{apply_shift, is_winner, Candidate, Election, Rule, ShiftAction};
use crate::error::{Error, Result};
use crate::scalar::Extended;
use crate::{Price, Rational};

/// Cumulative prices `ψ(0), ψ(1), …, ψ(T)` with `ψ(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PriceFunction {
    cumulative: Vec<Price>,
}

impl PriceFunction {
    /// Builds `ψ` from its values at `1..=T`.
    pub fn new(prices: Vec<Price>) -> Result<Self> {
        let mut cumulative = Vec::with_capacity(prices.len() + 1);
        cumulative.push(Price::zero());
        cumulative.extend(prices);
        Self::from_cumulative(cumulative)
    }

    /// Builds `ψ` from `ψ(0..=T)`; `ψ(0)` must be zero.
    pub fn from_cumulative(cumulative: Vec<Price>) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidPrices { voter: usize::MAX, reason: reason.into() };
        match cumulative.first() {
            Some(Extended::Finite(x)) if x.is_zero() => {}
            _ => return Err(bad("psi(0) must be 0")),
        }
        if cumulative.iter().any(|p| p.finite().is_some_and(Signed::is_negative)) {
            return Err(bad("negative price"));
        }
        if cumulative.windows(2).any(|w| w[0] > w[1]) {
            return Err(bad("non-monotone prices"));
        }
        Ok(PriceFunction { cumulative })
    }

    pub fn unit(max_shift: usize) -> Self {
        PriceFunction { cumulative: (0..=max_shift).map(|t| Price::from(t as i64)).collect() }
    }

    /// `ψ(ℓ) = c` for every `ℓ ≥ 1`.
    pub fn all_or_nothing(max_shift: usize, price: Price) -> Self {
        let mut cumulative = vec![Price::zero()];
        cumulative.extend(std::iter::repeat(price).take(max_shift));
        PriceFunction { cumulative }
    }

    /// `T`, the largest shift in the domain.
    pub fn max_shift(&self) -> usize {
        self.cumulative.len() - 1
    }

    pub fn price(&self, shift: usize) -> &Price {
        &self.cumulative[shift]
    }

    pub fn cumulative(&self) -> &[Price] {
        &self.cumulative
    }

    /// `Δψ(ℓ) = ψ(ℓ) − ψ(ℓ − 1)` for `ℓ ≥ 1`; infinite once `ψ(ℓ)` is.
    pub fn marginal(&self, shift: usize) -> Price {
        match (&self.cumulative[shift], &self.cumulative[shift - 1]) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a - b),
            _ => Extended::Infinite,
        }
    }

    /// Largest `t` with `ψ(t) < ∞`.
    pub fn max_finite_shift(&self) -> usize {
        self.cumulative.iter().rposition(Extended::is_finite).unwrap_or(0)
    }

    fn constant_positive_price(&self) -> Option<&Price> {
        let first = self.cumulative.get(1)?;
        self.cumulative[1..].iter().all(|p| p == first).then_some(first)
    }
}

/// An election, a preferred candidate and one price function per voter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    election: Election,
    preferred: Candidate,
    prices: Vec<PriceFunction>,
}

impl Instance {
    pub fn new(election: Election, preferred: Candidate, prices: Vec<PriceFunction>) -> Result<Self> {
        if preferred >= election.num_candidates() {
            return Err(Error::InvalidInstance(format!(
                "preferred candidate {preferred} out of range (m = {})",
                election.num_candidates()
            )));
        }
        if prices.len() != election.num_voters() {
            return Err(Error::InvalidInstance(format!(
                "{} price functions for {} voters",
                prices.len(),
                election.num_voters()
            )));
        }
        for (v, psi) in prices.iter().enumerate() {
            let expected = election.rank(v, preferred) - 1;
            if psi.max_shift() != expected {
                return Err(Error::InvalidPrices {
                    voter: v,
                    reason: format!("domain has {} shifts, expected {expected}", psi.max_shift()),
                });
            }
        }
        Ok(Instance { election, preferred, prices })
    }

    /// Unit prices for every voter.
    pub fn with_unit_prices(election: Election, preferred: Candidate) -> Result<Self> {
        let prices = Self::max_shifts_of(&election, preferred)?.into_iter().map(PriceFunction::unit).collect();
        Self::new(election, preferred, prices)
    }

    /// Uniform all-or-nothing prices (`c_v = 1` for every voter).
    pub fn with_uniform_aon_prices(election: Election, preferred: Candidate) -> Result<Self> {
        let prices = Self::max_shifts_of(&election, preferred)?
            .into_iter()
            .map(|t| PriceFunction::all_or_nothing(t, Price::from(1)))
            .collect();
        Self::new(election, preferred, prices)
    }

    fn max_shifts_of(election: &Election, preferred: Candidate) -> Result<Vec<usize>> {
        if preferred >= election.num_candidates() {
            return Err(Error::InvalidInstance(format!("preferred candidate {preferred} out of range")));
        }
        Ok((0..election.num_voters()).map(|v| election.rank(v, preferred) - 1).collect())
    }

    pub fn election(&self) -> &Election {
        &self.election
    }

    pub fn preferred(&self) -> Candidate {
        self.preferred
    }

    pub fn prices(&self) -> &[PriceFunction] {
        &self.prices
    }

    pub fn price_function(&self, voter: usize) -> &PriceFunction {
        &self.prices[voter]
    }

    pub fn num_voters(&self) -> usize {
        self.election.num_voters()
    }

    pub fn num_candidates(&self) -> usize {
        self.election.num_candidates()
    }

    /// `π_v^{-1}(p)`.
    pub fn preferred_rank(&self, voter: usize) -> usize {
        self.election.rank(voter, self.preferred)
    }

    /// `π_v^{-1}(p) − 1`.
    pub fn max_shift(&self, voter: usize) -> usize {
        self.preferred_rank(voter) - 1
    }

    /// `|I| = mn`.
    pub fn size(&self) -> usize {
        self.num_candidates() * self.num_voters()
    }

    pub fn zero_action(&self) -> ShiftAction {
        ShiftAction::zero(self.num_voters())
    }

    /// Shifts the preferred candidate to the top of every vote.
    pub fn top_action(&self) -> ShiftAction {
        ShiftAction::new((0..self.num_voters()).map(|v| self.max_shift(v)).collect())
    }

    pub fn validate_action(&self, action: &ShiftAction) -> Result<()> {
        if action.len() != self.num_voters() {
            return Err(Error::ActionLength { expected: self.num_voters(), got: action.len() });
        }
        for v in 0..self.num_voters() {
            if action.get(v) > self.max_shift(v) {
                return Err(Error::InvalidShift { voter: v, shift: action.get(v), max: self.max_shift(v) });
            }
        }
        Ok(())
    }

    /// The same election and preferred candidate under new prices.
    pub fn with_prices(&self, prices: Vec<PriceFunction>) -> Result<Instance> {
        Instance::new(self.election.clone(), self.preferred, prices)
    }

    pub fn shifted_election(&self, action: &ShiftAction) -> Result<Election> {
        apply_shift(&self.election, self.preferred, action)
    }

    pub fn is_successful(&self, action: &ShiftAction, rule: &Rule) -> Result<bool> {
        is_successful(self, action, rule)
    }
}

/// `p ∈ R(shf(E, s))`.
pub fn is_successful(instance: &Instance, action: &ShiftAction, rule: &Rule) -> Result<bool> {
    let shifted = instance.shifted_election(action)?;
    Ok(is_winner(&shifted, rule, instance.preferred()))
}

/// `Σ_v ψ_v(s_v)`.
pub fn cost(instance: &Instance, action: &ShiftAction) -> Result<Price> {
    instance.validate_action(action)?;
    Ok(action
        .as_slice()
        .iter()
        .zip(instance.prices())
        .map(|(&s, psi)| psi.price(s).clone())
        .sum())
}

/// The highest finite price occurring in the instance.
pub fn psi_max(instance: &Instance) -> Rational {
    instance
        .prices()
        .iter()
        .flat_map(|psi| psi.cumulative().iter().filter_map(|p| p.finite()))
        .max()
        .cloned()
        .unwrap_or_else(Rational::zero)
}

/// Price family tags, most specific first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PriceFamily {
    Unit,
    UniformAllOrNothing,
    OneInfAllOrNothing,
    /// `c_v` per voter; `None` for voters whose price domain is `{0}`.
    AllOrNothing(Vec<Option<Price>>),
    General,
}

impl PriceFamily {
    pub fn name(&self) -> &'static str {
        match self {
            PriceFamily::Unit => "unit",
            PriceFamily::UniformAllOrNothing => "uniform-aon",
            PriceFamily::OneInfAllOrNothing => "one-inf-aon",
            PriceFamily::AllOrNothing(_) => "aon",
            PriceFamily::General => "general",
        }
    }
}

pub fn is_unit(instance: &Instance) -> bool {
    instance
        .prices()
        .iter()
        .all(|psi| *psi == PriceFunction::unit(psi.max_shift()))
}

/// `c_v` for every voter if all price functions are all-or-nothing.
pub fn all_or_nothing_prices(instance: &Instance) -> Option<Vec<Option<Price>>> {
    instance
        .prices()
        .iter()
        .map(|psi| {
            if psi.max_shift() == 0 {
                Some(None)
            } else {
                psi.constant_positive_price().map(|c| Some(c.clone()))
            }
        })
        .collect()
}

pub fn is_one_inf_aon(instance: &Instance) -> bool {
    all_or_nothing_prices(instance).is_some_and(|cs| {
        cs.iter().flatten().all(|c| c.is_infinite() || c.finite().is_some_and(One::is_one))
    })
}

pub fn is_uniform_aon(instance: &Instance) -> bool {
    all_or_nothing_prices(instance)
        .is_some_and(|cs| cs.iter().flatten().all(|c| c.finite().is_some_and(One::is_one)))
}

pub fn classify_prices(instance: &Instance) -> PriceFamily {
    if is_unit(instance) {
        return PriceFamily::Unit;
    }
    match all_or_nothing_prices(instance) {
        Some(cs) => {
            if cs.iter().flatten().all(|c| c.finite().is_some_and(One::is_one)) {
                PriceFamily::UniformAllOrNothing
            } else if cs
                .iter()
                .flatten()
                .all(|c| c.is_infinite() || c.finite().is_some_and(One::is_one))
            {
                PriceFamily::OneInfAllOrNothing
            } else {
                PriceFamily::AllOrNothing(cs)
            }
        }
        None => PriceFamily::General,
    }
}

/// Largest `π_v^{-1}(p) − 1` over voters with `c_v = 1` in a
/// (1,∞)-all-or-nothing instance.
pub fn width(instance: &Instance) -> Result<usize> {
    if !is_one_inf_aon(instance) {
        return Err(Error::Unsupported("width is defined for (1,inf)-all-or-nothing prices only".into()));
    }
    Ok(instance
        .prices()
        .iter()
        .filter(|psi| psi.max_shift() > 0 && psi.price(1).finite().is_some_and(One::is_one))
        .map(PriceFunction::max_shift)
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

    fn two_voter() -> Instance {
        let e = Election::new(3, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        Instance::with_unit_prices(e, 2).unwrap()
    }

    #[test]
    fn cost_examples() {
        let i = two_voter();
        assert_eq!(cost(&i, &i.zero_action()).unwrap(), Price::zero());
        assert_eq!(cost(&i, &ShiftAction::new(vec![2, 1])).unwrap(), Price::from(3));
        assert!(cost(&i, &ShiftAction::new(vec![3, 0])).is_err());

        let prices = vec![
            PriceFunction::all_or_nothing(2, Price::from(1)),
            PriceFunction::all_or_nothing(2, Price::Infinite),
        ];
        let aon = i.with_prices(prices).unwrap();
        assert_eq!(cost(&aon, &ShiftAction::new(vec![2, 0])).unwrap(), Price::from(1));
        assert_eq!(cost(&aon, &ShiftAction::new(vec![0, 1])).unwrap(), Price::Infinite);
    }

    #[test]
    fn price_validation() {
        assert!(PriceFunction::new(vec![Price::from(1), Price::from(0)]).is_err());
        assert!(PriceFunction::new(vec![Price::Infinite, Price::from(3)]).is_err());
        assert!(PriceFunction::new(vec![Price::Finite(ratio(-1, 2))]).is_err());
        let psi = PriceFunction::new(vec![Price::from(1), Price::Infinite, Price::Infinite]).unwrap();
        assert_eq!(psi.max_finite_shift(), 1);
        assert_eq!(psi.marginal(1), Price::from(1));
        assert_eq!(psi.marginal(2), Price::Infinite);
        let wrong_len = two_voter().with_prices(vec![PriceFunction::unit(1), PriceFunction::unit(2)]);
        assert!(wrong_len.is_err());
    }

    #[test]
    fn psi_max_examples() {
        assert_eq!(psi_max(&two_voter()), int(2));
        let top = Election::new(2, vec![vec![1, 0]; 3]).unwrap();
        assert_eq!(psi_max(&Instance::with_unit_prices(top, 1).unwrap()), int(0));
        let e = Election::new(3, vec![vec![0, 1, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(psi_max(&Instance::with_uniform_aon_prices(e, 2).unwrap()), int(1));
    }

    #[test]
    fn width_examples() {
        let e = Election::new(3, vec![vec![0, 2, 1], vec![2, 0, 1], vec![1, 2, 0]]).unwrap();
        let i = Instance::with_uniform_aon_prices(e.clone(), 2).unwrap();
        assert_eq!(width(&i).unwrap(), 1);
        let mixed = Instance::new(
            Election::new(3, vec![vec![0, 1, 2], vec![0, 2, 1]]).unwrap(),
            2,
            vec![
                PriceFunction::all_or_nothing(2, Price::Infinite),
                PriceFunction::all_or_nothing(1, Price::from(1)),
            ],
        )
        .unwrap();
        assert_eq!(width(&mixed).unwrap(), 1);
        assert!(width(&two_voter()).is_err());
        let general = two_voter()
            .with_prices(vec![
                PriceFunction::new(vec![Price::from(1), Price::from(3)]).unwrap(),
                PriceFunction::unit(2),
            ])
            .unwrap();
        assert!(width(&general).is_err());
    }

    #[test]
    fn classification_order() {
        assert_eq!(classify_prices(&two_voter()), PriceFamily::Unit);
        let e = Election::new(3, vec![vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        let uni = Instance::with_uniform_aon_prices(e, 2).unwrap();
        assert_eq!(classify_prices(&uni), PriceFamily::UniformAllOrNothing);
        let one_inf = uni
            .with_prices(vec![
                PriceFunction::all_or_nothing(2, Price::from(1)),
                PriceFunction::all_or_nothing(2, Price::Infinite),
            ])
            .unwrap();
        assert_eq!(classify_prices(&one_inf), PriceFamily::OneInfAllOrNothing);
        let aon = uni
            .with_prices(vec![
                PriceFunction::all_or_nothing(2, Price::from(4)),
                PriceFunction::all_or_nothing(2, Price::from(1)),
            ])
            .unwrap();
        assert!(matches!(classify_prices(&aon), PriceFamily::AllOrNothing(_)));
        let general = uni
            .with_prices(vec![
                PriceFunction::new(vec![Price::from(1), Price::from(3)]).unwrap(),
                PriceFunction::new(vec![Price::from(2), Price::from(3)]).unwrap(),
            ])
            .unwrap();
        assert_eq!(classify_prices(&general), PriceFamily::General);
    }
}
