//! Acceptance checks. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use num_traits::{One, Zero};
use shift_bribery::borda::{fpt_exact, greedy_uniform_aon, ptas_unit};
use shift_bribery::election::{Rule, ShiftAction};
use shift_bribery::hardness::{
    aon_to_unit, dummy_election, reduce_clique_aon, reduce_clique_gap, reduce_dks_aon, reduce_setcover, reduce_vc3,
    Graph, SetCoverInstance,
};
use shift_bribery::lp::{count_tight_independent, LpOutcome};
use shift_bribery::oracle::brute_force_opt;
use shift_bribery::random::{random_instance, random_scoring_instance, RandomFamily};
use shift_bribery::scalar::{int, ratio};
use shift_bribery::scoring_ptas::{eptas_unit, lp_additive_unit_run, ptas_general_run, EptasBranch};
use shift_bribery::{cost, width, Instance, Price, Rational};

type Outcome = Result<String, String>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn finite(price: &Price) -> Rational {
    price.finite().cloned().expect("finite price")
}

fn unit_corpus(count: usize) -> Vec<(u64, Instance, Rational)> {
    (0u64..)
        .map(|seed| {
            let i = small_borda(seed, RandomFamily::Unit);
            let opt = finite_opt(&i).expect("unit prices always allow p to reach the top");
            (seed, i, opt)
        })
        .take(count)
        .collect()
}

fn fpt_matches_oracle() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for seed in 0u64.. {
        if checked >= 320 {
            break;
        }
        let family = RandomFamily::ALL[(seed % 4) as usize];
        let instance = small_borda(seed, family);
        let oracle = brute_force_opt(&instance, &Rule::Positional).unwrap();
        if oracle.opt_cost.is_infinite() {
            continue;
        }
        let fpt = fpt_exact(&instance).unwrap();
        ensure(fpt.cost == oracle.opt_cost, || format!("seed {seed}: fpt {} vs oracle {}", fpt.cost, oracle.opt_cost))?;
        let action = fpt.action.unwrap();
        ensure(instance.is_successful(&action, &Rule::Positional).unwrap(), || format!("seed {seed}: unsuccessful"))?;
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(120), || format!("took {elapsed:?}"))?;
    Ok(format!("{checked} instances equal to the oracle in {:.1}s", elapsed.as_secs_f64()))
}

fn ptas_ratio() -> Outcome {
    let corpus = unit_corpus(220);
    let mut runs = 0;
    for eps in [ratio(1, 4), ratio(1, 2), int(1)] {
        for (seed, instance, opt) in &corpus {
            let action = ptas_unit(instance, &eps).unwrap();
            let limit = ((Rational::one() + &eps) * opt).floor().to_integer();
            ensure(instance.is_successful(&action, &Rule::Positional).unwrap(), || format!("seed {seed}: unsuccessful"))?;
            ensure(int(action.unit_shifts() as i64) <= Rational::from_integer(limit.clone()), || {
                format!("seed {seed}, eps {eps}: {} shifts > {limit}", action.unit_shifts())
            })?;
            runs += 1;
        }
    }
    Ok(format!("{runs} runs over eps 1/4, 1/2, 1, zero violations"))
}

fn lpu_additive() -> Outcome {
    let corpus = unit_corpus(220);
    let mut lp_runs = 0;
    for (seed, instance, opt) in &corpus {
        let run = lp_additive_unit_run(instance).unwrap();
        let o = opt.to_integer().try_into().unwrap_or(0usize);
        ensure(instance.is_successful(&run.action, &Rule::Positional).unwrap(), || format!("seed {seed}: unsuccessful"))?;
        ensure(run.action.unit_shifts() <= o + o.isqrt(), || {
            format!("seed {seed}: {} shifts > {o} + {}", run.action.unit_shifts(), o.isqrt())
        })?;
        if let Some(k) = run.k {
            let bound = (k as usize).isqrt();
            ensure(run.nonintegral_voters <= bound, || {
                format!("seed {seed}: {} non-integral voters > isqrt({k})", run.nonintegral_voters)
            })?;
            lp_runs += 1;
        }
    }
    Ok(format!("{} instances, {lp_runs} reached the LP", corpus.len()))
}

fn eptas_dispatch() -> Outcome {
    let corpus = unit_corpus(220);
    let mut counts = [0usize; 2];
    for eps in [ratio(1, 4), ratio(1, 2)] {
        for (seed, instance, opt) in &corpus {
            let (action, branch) = eptas_unit(instance, &eps).unwrap();
            let d = diffmax_by_hand(instance);
            let expected = if int(d) * &eps * &eps < int(2) { EptasBranch::Combinatorial } else { EptasBranch::LinearProgram };
            ensure(branch == expected, || format!("seed {seed}, eps {eps}: diffmax {d} took {branch:?}"))?;
            ensure(instance.is_successful(&action, &Rule::Positional).unwrap(), || format!("seed {seed}: unsuccessful"))?;
            let c = finite(&cost(instance, &action).unwrap());
            ensure(c <= (Rational::one() + &eps) * opt, || format!("seed {seed}, eps {eps}: cost {c} vs opt {opt}"))?;
            counts[usize::from(branch == EptasBranch::LinearProgram)] += 1;
        }
    }
    Ok(format!("{} runs, {} combinatorial and {} LP branches", counts[0] + counts[1], counts[0], counts[1]))
}

fn greedy_uniform() -> Outcome {
    let mut checked = 0;
    for seed in 0u64.. {
        if checked >= 220 {
            break;
        }
        let instance = small_borda(seed, RandomFamily::UniformAon);
        let Some(opt) = finite_opt(&instance) else { continue };
        let action = greedy_uniform_aon(&instance).unwrap();
        ensure(instance.is_successful(&action, &Rule::Positional).unwrap(), || format!("seed {seed}: unsuccessful"))?;
        let c = finite(&cost(&instance, &action).unwrap());
        ensure(c <= ratio(3, 2) * &opt + int(1), || format!("seed {seed}: cost {c} vs opt {opt}"))?;
        checked += 1;
    }
    let mut exact = 0;
    for seed in 0..120u64 {
        let instance = near_top_aon(seed, 2 + (seed % 4) as usize, 1 + (seed % 5) as usize);
        let opt = finite_opt(&instance).unwrap();
        let action = greedy_uniform_aon(&instance).unwrap();
        let c = finite(&cost(&instance, &action).unwrap());
        ensure(c == opt, || format!("rank-2 seed {seed}: cost {c} vs opt {opt}"))?;
        exact += 1;
    }
    Ok(format!("{checked} instances within 1.5*opt+1, {exact} rank-at-most-2 instances exact"))
}

fn general_ptas() -> Outcome {
    let start = Instant::now();
    let eps = int(1);
    let mut checked = 0;
    let mut worst_bad = 0;
    let mut worst_nonint = 0;
    for seed in 0u64..50 {
        let m = 2 + (seed % 3) as usize;
        let n = 1 + ((seed / 3) % 5) as usize;
        let instance = random_scoring_instance(seed, m, n, RandomFamily::General);
        let opt = finite_opt(&instance).expect("general prices are finite");
        let run = ptas_general_run(&instance, &eps).unwrap();
        ensure(instance.is_successful(&run.action, &Rule::Positional).unwrap(), || format!("seed {seed}: unsuccessful"))?;
        ensure(run.cost <= int(2) * &opt, || format!("seed {seed}: cost {} vs opt {opt}", run.cost))?;
        ensure(run.max_bad < 2, || format!("seed {seed}: |C_bad| = {}", run.max_bad))?;
        ensure(run.max_nonintegral < 3, || format!("seed {seed}: {} non-integral voters", run.max_nonintegral))?;
        worst_bad = worst_bad.max(run.max_bad);
        worst_nonint = worst_nonint.max(run.max_nonintegral);
        checked += 1;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(600), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{checked} instances within 2*opt, max |C_bad| {worst_bad}, max non-integral {worst_nonint}, {:.1}s",
        elapsed.as_secs_f64()
    ))
}

fn filler_election_grid() -> Outcome {
    let mut elections = 0;
    for total in (3..=15).step_by(2) {
        for a_len in 0..=total {
            let b_len = total - a_len;
            let a_set: Vec<usize> = (2..2 + a_len).collect();
            let b_set: Vec<usize> = (2 + a_len..2 + total).collect();
            for a in 0..=b_len {
                for b in 0..=3 {
                    let e = dummy_election(&a_set, &b_set, 0, 1, a, b).unwrap();
                    let tag = || format!("|A|={a_len} |B|={b_len} a={a} b={b}");
                    ensure(e.num_voters() == 2 * total + 2 * b + 5, || format!("{}: {} voters", tag(), e.num_voters()))?;
                    for &c in &a_set {
                        let margin = prefer_count(&e, c, 0) as i64 - prefer_count(&e, 0, c) as i64;
                        ensure(margin == 2 * b as i64 + 1, || format!("{}: margin {margin} against {c}", tag()))?;
                    }
                    let s = copeland_by_hand(&e, &ratio(1, 2));
                    ensure(s[0] == int((b_len - a + 1) as i64), || format!("{}: p scores {}", tag(), s[0]))?;
                    ensure(s[1] == int(b_len as i64), || format!("{}: d scores {}", tag(), s[1]))?;
                    let cap = ratio((total + 3) as i64, 2);
                    ensure(s[2..].iter().all(|x| *x <= cap), || format!("{}: a member of A or B exceeds {cap}", tag()))?;
                    let library = shift_bribery::copeland_scores(&e, &ratio(1, 2));
                    ensure(library.as_slice() == s.as_slice(), || format!("{}: library scores differ", tag()))?;
                    elections += 1;
                }
            }
        }
    }
    Ok(format!("{elections} filler elections, all four properties exact"))
}

fn min_cover_by_hand(sc: &SetCoverInstance) -> Option<usize> {
    let m = sc.sets().len();
    (0u32..1 << m)
        .filter(|mask| {
            let chosen: Vec<usize> = (0..m).filter(|i| mask & (1 << i) != 0).collect();
            sc.is_cover(&chosen)
        })
        .map(u32::count_ones)
        .min()
        .map(|c| c as usize)
}

fn reduction_completeness() -> Outcome {
    let half = ratio(1, 2);
    let k4 = Graph::complete(4);

    let dks = reduce_dks_aon(&k4, 3, 3, Some(&[0, 1, 2]), &half).unwrap();
    let w = dks.witness.as_ref().unwrap();
    ensure(dks.instance.is_successful(&w.action, &dks.rule).unwrap(), || "(a) witness fails".into())?;
    ensure(cost(&dks.instance, &w.action).unwrap() == Price::from(3), || "(a) witness cost is not 3".into())?;
    let dummies = 6 + 5;
    let p_score = shift_bribery::copeland_scores(dks.instance.election(), &half).get(0).clone();
    ensure(p_score == int(dummies - 3), || format!("(a) p scores {p_score}"))?;

    let aon = reduce_clique_aon(&k4, 3, Some(&[0, 1, 2]), &half).unwrap();
    let w = aon.witness.as_ref().unwrap();
    ensure(cost(&aon.instance, &w.action).unwrap() == Price::from(3), || "(b) AON witness cost is not 3".into())?;
    let unit = reduce_clique_gap(&k4, 3, &half, Some(&[0, 1, 2]), &half).unwrap();
    let w = unit.witness.as_ref().unwrap();
    ensure(unit.instance.is_successful(&w.action, &unit.rule).unwrap(), || "(b) unit witness fails".into())?;
    let unit_cost = finite(&cost(&unit.instance, &w.action).unwrap());
    ensure(unit_cost <= int(30), || format!("(b) unit witness cost {unit_cost}"))?;

    let mut covers = 0;
    for seed in 0u64..40 {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=4);
        let sets = (0..m).map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect()).collect();
        let sc = SetCoverInstance::new(n, sets).unwrap();
        let r = reduce_setcover(&sc, false, None, &half).unwrap();
        let expected = min_cover_by_hand(&sc);
        let oracle = brute_force_opt(&r.instance, &r.rule).unwrap();
        match expected {
            Some(c) => {
                ensure(oracle.opt_cost == Price::from(c as i64), || format!("(c) seed {seed}: oracle {} vs cover {c}", oracle.opt_cost))?;
                let w = r.witness.as_ref().unwrap();
                ensure(cost(&r.instance, &w.action).unwrap() == Price::from(c as i64), || format!("(c) seed {seed}: witness cost"))?;
                ensure(r.instance.is_successful(&w.action, &r.rule).unwrap(), || format!("(c) seed {seed}: witness fails"))?;
                covers += 1;
            }
            None => ensure(oracle.opt_cost.is_infinite(), || format!("(c) seed {seed}: no cover but finite opt"))?,
        }
    }

    let vc = reduce_vc3(&k4, 3, Some(&[0, 1, 2])).unwrap();
    let s = borda_by_hand(vc.instance.election());
    let named: Vec<i64> = vc.labels.iter().map(|(_, c)| s[*c]).collect();
    ensure(named == vec![155, 198, 156, 157], || format!("(d) scores {named:?}"))?;
    let w = vc.witness.as_ref().unwrap();
    ensure(w.action.affected_voters() == 3, || "(d) witness bribes more than 3 voters".into())?;
    ensure(vc.instance.is_successful(&w.action, &vc.rule).unwrap(), || "(d) cover bribe fails".into())?;
    Ok(format!("(a)-(d) hold; {covers} set-cover instances matched the oracle"))
}

fn aon_sandwich() -> Outcome {
    let mut checked = 0;
    let mut nontrivial = 0;
    let mut voter_checks = 0;
    for seed in 0u64.. {
        if checked >= 12 {
            break;
        }
        let n = 3 + (seed % 2) as usize;
        let instance = random_instance(seed, 3, n, RandomFamily::OneInfAon);
        let alpha = [int(0), ratio(1, 2), int(1)][(seed % 3) as usize].clone();
        let rule = Rule::copeland(alpha).unwrap();
        let Some(opt) = brute_force_opt(&instance, &rule).unwrap().opt_cost.into_finite() else { continue };
        let b_width = width(&instance).unwrap();
        for b in [2usize, 3] {
            let b_prime = 5 * b;
            let unit = aon_to_unit(&instance, b, b_prime).unwrap();
            let result = brute_force_opt(&unit, &rule).unwrap();
            let opt_unit = finite(&result.opt_cost);
            let lower = int(b_prime as i64).min(int(b as i64) * &opt);
            let upper = int((b + b_width) as i64) * &opt;
            ensure(lower <= opt_unit && opt_unit <= upper, || {
                format!("seed {seed}, B={b}: {lower} <= {opt_unit} <= {upper} fails")
            })?;
            if int(b as i64) > int(b_width as i64) * &opt {
                let affected = result.witness.as_ref().map_or(0, ShiftAction::affected_voters);
                ensure(int(affected as i64) <= opt, || format!("seed {seed}, B={b}: witness affects {affected} voters"))?;
                voter_checks += 1;
            }
        }
        if !opt.is_zero() {
            nontrivial += 1;
        }
        checked += 1;
    }
    ensure(nontrivial > 0, || "no instance had a positive optimum".into())?;
    Ok(format!("{checked} instances ({nontrivial} with positive opt), {voter_checks} affected-voter checks"))
}

fn lp_solver() -> Outcome {
    let mut optimal = 0;
    let mut infeasible = 0;
    for seed in 0u64..150 {
        let vars = 1 + (seed % 6) as usize;
        let extra = ((seed / 6) % 4) as usize;
        let lp = random_bounded_lp(seed, vars, extra);
        let expected = vertex_enumeration(&lp);
        match (lp.solve(), expected) {
            (LpOutcome::Optimal(sol), Some(best)) => {
                ensure(sol.objective == best, || format!("seed {seed}: {} vs {best}", sol.objective))?;
                ensure(lp.is_feasible(&sol.x), || format!("seed {seed}: infeasible point"))?;
                let rank = count_tight_independent(&sol, &lp);
                ensure(rank == vars, || format!("seed {seed}: tight rank {rank} of {vars}"))?;
                optimal += 1;
            }
            (LpOutcome::Infeasible, None) => infeasible += 1,
            (outcome, expected) => {
                return Err(format!("seed {seed}: solver {:?} vs enumeration {expected:?}", std::mem::discriminant(&outcome)))
            }
        }
    }
    Ok(format!("{optimal} optimal and {infeasible} infeasible LPs agree with vertex enumeration"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("fpt equals oracle", fpt_matches_oracle),
        ("combinatorial ptas ratio", ptas_ratio),
        ("lp-u additive bound", lpu_additive),
        ("eptas dispatch", eptas_dispatch),
        ("greedy uniform all-or-nothing", greedy_uniform),
        ("general ptas", general_ptas),
        ("filler election exactness", filler_election_grid),
        ("reduction completeness", reduction_completeness),
        ("all-or-nothing to unit sandwich", aon_sandwich),
        ("lp solver correctness", lp_solver),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|panic| {
            let message = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {message}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}) [{secs:.1}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}) [{secs:.1}s]", i + 1);
            }
        }
    }
    if failures > 0 {
        println!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 10 acceptance criteria passed");
}
