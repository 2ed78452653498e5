//! Text formats for instances, shift actions, graphs and set-cover inputs.
//!
//! Instance file:
//!
//! ```text
//! shiftbribery v1
//! 3 2
//! p 2
//! rule borda
//! 0 1 2
//! prices: 1 2
//! 1 0 2
//! prices: 1 2
//! ```
//!
//! Each voter line lists candidates from most to least preferred and may end
//! in `| w: <m rationals>` when the rule is `scoring`. The following
//! `prices:` line gives the cumulative prices `ψ(1) … ψ(T)`; `inf` is the
//! infinite price.

use std::fmt::Write as _;

use crate::election::{Election, Rule, ShiftAction};
use crate::error::{Error, Result};
use crate::hardness::{Graph, SetCoverInstance};
use crate::pricing::{Instance, PriceFunction};
use crate::scalar::{parse_price, parse_rational};
use crate::Rational;

pub const HEADER: &str = "shiftbribery v1";

/// An instance together with the voting rule it is meant for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub instance: Instance,
    pub rule: Rule,
}

impl InstanceFile {
    pub fn new(instance: Instance, rule: Rule) -> Self {
        InstanceFile { instance, rule }
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse_instance(text)
    }

    pub fn serialize(&self) -> String {
        serialize_instance(&self.instance, &self.rule)
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Non-empty lines with their 1-based line numbers; `#` starts a comment.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_usize(line: usize, token: &str, what: &str) -> Result<usize> {
    token.parse().map_err(|_| parse_error(line, format!("{what} must be a nonnegative integer, got {token:?}")))
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let mut lines = content_lines(text);
    let last_line = text.lines().count().max(1);
    let mut next = |what: &str| lines.next().ok_or_else(|| parse_error(last_line, format!("missing {what}")));

    let (ln, header) = next("header")?;
    if header != HEADER {
        return Err(parse_error(ln, "missing header"));
    }

    let (ln, dims) = next("dimensions line")?;
    let dims: Vec<&str> = dims.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(parse_error(ln, "expected \"m n\""));
    }
    let m = parse_usize(ln, dims[0], "m")?;
    let n = parse_usize(ln, dims[1], "n")?;
    if m == 0 || n == 0 {
        return Err(parse_error(ln, "m and n must be positive"));
    }

    let (ln, p_line) = next("preferred candidate line")?;
    let p = match p_line.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["p", idx] => parse_usize(ln, idx, "p")?,
        _ => return Err(parse_error(ln, "expected \"p <index>\"")),
    };
    if p >= m {
        return Err(parse_error(ln, format!("p out of range: {p} with m = {m}")));
    }

    let (ln, rule_line) = next("rule line")?;
    let tokens: Vec<&str> = rule_line.split_whitespace().collect();
    let (rule, weighted) = match tokens.as_slice() {
        ["rule", "borda"] => (Rule::Positional, false),
        ["rule", "scoring"] => (Rule::Positional, true),
        ["rule", "copeland", alpha] => {
            let alpha = parse_rational(alpha).map_err(|e| parse_error(ln, e.to_string()))?;
            (Rule::copeland(alpha).map_err(|e| parse_error(ln, e.to_string()))?, false)
        }
        _ => return Err(parse_error(ln, "expected \"rule borda|scoring|copeland <alpha>\"")),
    };

    let mut orders = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut price_lines = Vec::with_capacity(n);
    for v in 0..n {
        let (ln, vote) = next(&format!("preference order of voter {v}"))?;
        let (order_part, weight_part) = match vote.split_once('|') {
            Some((o, w)) => (o, Some(w.trim())),
            None => (vote, None),
        };
        let order = order_part
            .split_whitespace()
            .map(|t| parse_usize(ln, t, "candidate"))
            .collect::<Result<Vec<usize>>>()?;
        let mut seen = vec![false; m];
        if order.len() != m || order.iter().any(|&c| c >= m || std::mem::replace(&mut seen[c], true)) {
            return Err(parse_error(ln, format!("preference order of voter {v} is not a permutation of 0..{m}")));
        }
        orders.push(order);
        match (weighted, weight_part) {
            (true, Some(w)) => {
                let w = w
                    .strip_prefix("w:")
                    .ok_or_else(|| parse_error(ln, "expected \"| w: <m rationals>\""))?;
                let w = w
                    .split_whitespace()
                    .map(|t| parse_rational(t).map_err(|e| parse_error(ln, e.to_string())))
                    .collect::<Result<Vec<Rational>>>()?;
                if w.len() != m {
                    return Err(parse_error(ln, format!("scoring vector has {} entries, expected {m}", w.len())));
                }
                vectors.push(w);
            }
            (true, None) => return Err(parse_error(ln, "rule scoring needs a scoring vector on every voter line")),
            (false, Some(_)) => return Err(parse_error(ln, "scoring vectors are only allowed with rule scoring")),
            (false, None) => {}
        }

        let (ln, prices) = next(&format!("prices of voter {v}"))?;
        let values = prices
            .strip_prefix("prices:")
            .ok_or_else(|| parse_error(ln, "expected \"prices: …\""))?;
        let values = values
            .split_whitespace()
            .map(|t| parse_price(t).map_err(|e| parse_error(ln, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        price_lines.push((ln, values));
    }
    if let Some((ln, extra)) = lines.next() {
        return Err(parse_error(ln, format!("unexpected trailing content {extra:?}")));
    }

    let mut election = Election::new(m, orders).map_err(|e| parse_error(1, e.to_string()))?;
    if weighted {
        election = election.with_scoring_vectors(vectors).map_err(|e| parse_error(1, e.to_string()))?;
    }
    let mut prices = Vec::with_capacity(n);
    for (v, (ln, values)) in price_lines.into_iter().enumerate() {
        let expected = election.rank(v, p) - 1;
        if values.len() != expected {
            return Err(parse_error(ln, format!("voter {v} needs {expected} prices, got {}", values.len())));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(parse_error(ln, "non-monotone prices"));
        }
        prices.push(PriceFunction::new(values).map_err(|e| match e {
            Error::InvalidPrices { reason, .. } => parse_error(ln, reason),
            other => parse_error(ln, other.to_string()),
        })?);
    }
    let instance = Instance::new(election, p, prices).map_err(|e| parse_error(1, e.to_string()))?;
    Ok(InstanceFile { instance, rule })
}

/// Canonical text form; `parse_instance` inverts it exactly.
pub fn serialize_instance(instance: &Instance, rule: &Rule) -> String {
    let election = instance.election();
    let mut out = String::new();
    writeln!(out, "{HEADER}").unwrap();
    writeln!(out, "{} {}", instance.num_candidates(), instance.num_voters()).unwrap();
    writeln!(out, "p {}", instance.preferred()).unwrap();
    let weighted = matches!(rule, Rule::Positional) && election.scoring_vectors().is_some();
    match rule {
        Rule::Positional if weighted => writeln!(out, "rule scoring").unwrap(),
        Rule::Positional => writeln!(out, "rule borda").unwrap(),
        Rule::Copeland(alpha) => writeln!(out, "rule copeland {alpha}").unwrap(),
    }
    for v in 0..instance.num_voters() {
        out.push_str(&join(election.order(v)));
        if weighted {
            let w = &election.scoring_vectors().expect("weighted")[v];
            write!(out, " | w: {}", join(w)).unwrap();
        }
        out.push('\n');
        let prices = &instance.price_function(v).cumulative()[1..];
        if prices.is_empty() {
            out.push_str("prices:\n");
        } else {
            writeln!(out, "prices: {}", join(prices)).unwrap();
        }
    }
    out
}

fn join<T: std::fmt::Display>(items: &[T]) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

/// Whitespace-separated shift counts.
pub fn parse_action(text: &str) -> Result<ShiftAction> {
    let shifts = text
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Syntax(format!("not a shift count: {t:?}"))))
        .collect::<Result<Vec<usize>>>()?;
    Ok(ShiftAction::new(shifts))
}

pub fn format_action(action: &ShiftAction) -> String {
    join(action.as_slice())
}

/// `n m` followed by `m` lines `u v` with 0-based vertices.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (ln, head) = lines.next().ok_or_else(|| parse_error(1, "missing \"n m\" line"))?;
    let head: Vec<&str> = head.split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_error(ln, "expected \"n m\""));
    }
    let n = parse_usize(ln, head[0], "n")?;
    let m = parse_usize(ln, head[1], "m")?;
    let mut edges = Vec::with_capacity(m);
    for i in 0..m {
        let (ln, line) = lines.next().ok_or_else(|| parse_error(ln, format!("missing edge {i}")))?;
        let ends: Vec<&str> = line.split_whitespace().collect();
        if ends.len() != 2 {
            return Err(parse_error(ln, "expected \"u v\""));
        }
        edges.push((parse_usize(ln, ends[0], "vertex")?, parse_usize(ln, ends[1], "vertex")?));
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_error(ln, "more edges than declared"));
    }
    Graph::new(n, edges).map_err(|e| parse_error(1, e.to_string()))
}

pub fn serialize_graph(graph: &Graph) -> String {
    let mut out = format!("{} {}\n", graph.num_vertices(), graph.edges().len());
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// `N M` followed by `M` lines of element indices. Blank lines are read as
/// empty sets only in the body.
pub fn parse_setcover(text: &str) -> Result<SetCoverInstance> {
    let mut raw = text.lines().enumerate().map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()));
    let (ln, head) = raw
        .by_ref()
        .find(|(_, l)| !l.is_empty())
        .ok_or_else(|| parse_error(1, "missing \"N M\" line"))?;
    let head: Vec<&str> = head.split_whitespace().collect();
    if head.len() != 2 {
        return Err(parse_error(ln, "expected \"N M\""));
    }
    let universe = parse_usize(ln, head[0], "N")?;
    let count = parse_usize(ln, head[1], "M")?;
    let mut sets = Vec::with_capacity(count);
    for i in 0..count {
        let (ln, line) = raw.next().ok_or_else(|| parse_error(ln, format!("missing set {i}")))?;
        let set = line
            .split_whitespace()
            .map(|t| parse_usize(ln, t, "element"))
            .collect::<Result<Vec<usize>>>()?;
        sets.push(set);
    }
    if let Some((ln, _)) = raw.find(|(_, l)| !l.is_empty()) {
        return Err(parse_error(ln, "more sets than declared"));
    }
    SetCoverInstance::new(universe, sets).map_err(|e| parse_error(1, e.to_string()))
}
