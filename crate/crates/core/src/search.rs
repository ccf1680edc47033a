//! Search for quadratic base fields with prescribed split primes.
//!
//! With the split set fixed, the tower value is
//! `-(sum_split 2 log p/(p-1)) / (1/2 sum_ramified log p)`, so the best
//! radicand is the admissible `t`-subset of the pool with the smallest
//! product. Admissibility is the mod-4/mod-8 congruence plus the splitting
//! condition at every prescribed prime.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::Objective;
use crate::error::{Error, Result};
use crate::primes::{is_prime, pow_mod, primes_up_to};
use crate::towers::{
    evaluate_seed, split_ok, tower_feasible, FeasibilityConfig, QuadraticSeed, Sign, TowerSeed,
};

/// Above this many candidate subsets the search switches to branch and bound.
pub const EXHAUSTIVE_LIMIT: u128 = 10_000_000;
/// Node budget of the branch-and-bound search.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchSpec {
    pub split_primes: Vec<u64>,
    pub ramified_count: usize,
    /// Largest prime allowed in the radicand.
    pub pool_bound: u64,
    pub sign: Sign,
    pub top_k: usize,
    #[serde(skip)]
    pub predicate: FeasibilityConfig,
    #[serde(default = "default_budget")]
    pub node_budget: u64,
}

fn default_budget() -> u64 {
    DEFAULT_NODE_BUDGET
}

impl SearchSpec {
    pub fn new(split_primes: Vec<u64>, ramified_count: usize, pool_bound: u64, sign: Sign) -> Self {
        SearchSpec {
            split_primes,
            ramified_count,
            pool_bound,
            sign,
            top_k: 10,
            predicate: FeasibilityConfig::default(),
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }

    pub fn with_top_k(mut self, k: usize) -> Self {
        self.top_k = k;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchHit {
    pub seed: QuadraticSeed,
    pub value: f64,
    pub feasible: bool,
    pub congruences_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    /// Ascending by value, ties to the smaller radicand.
    pub hits: Vec<SearchHit>,
    /// Every subset of the pool was examined.
    pub exhaustive: bool,
    /// The branch-and-bound run finished within its budget, so the hits are
    /// optimal for the pool. Always true for exhaustive runs.
    pub complete: bool,
    pub pool: Vec<u64>,
    pub candidates_examined: u64,
    pub admissible: u64,
    /// How many of the `t` smallest pool primes the best hit leaves out.
    pub smallest_skipped: Option<usize>,
    /// Results depend on the built-in feasibility predicate.
    pub conditional_on_predicate: bool,
}

/// Per-prime residues needed for the congruence checks.
struct Residues {
    // modulus 8, then each odd split prime
    moduli: Vec<u64>,
    table: Vec<Vec<u64>>,
    logs: Vec<f64>,
}

impl Residues {
    fn new(pool: &[u64], split: &[u64]) -> Self {
        let mut moduli = vec![8];
        moduli.extend(split.iter().copied().filter(|&p| p != 2));
        let table = pool
            .iter()
            .map(|&p| moduli.iter().map(|&m| p % m).collect())
            .collect();
        Residues {
            moduli,
            table,
            logs: pool.iter().map(|&p| (p as f64).ln()).collect(),
        }
    }

    fn unit(&self) -> Vec<u64> {
        self.moduli.iter().map(|&m| 1 % m).collect()
    }

    fn admissible(&self, prod: &[u64], sign: Sign, need_mod8: bool) -> bool {
        let signed = |r: u64, m: u64| match sign {
            Sign::Positive => r,
            Sign::Negative => (m - r) % m,
        };
        let d8 = signed(prod[0], 8);
        if d8 % 4 != 1 || (need_mod8 && d8 != 1) {
            return false;
        }
        self.moduli[1..].iter().zip(&prod[1..]).all(|(&p, &r)| {
            let d = signed(r, p);
            d != 0 && pow_mod(d, (p - 1) / 2, p) == 1
        })
    }
}

#[derive(Debug, Clone)]
struct Candidate {
    indices: Vec<usize>,
    log_sum: f64,
}

fn compare(a: &Candidate, b: &Candidate, pool: &[u64]) -> Ordering {
    if (a.log_sum - b.log_sum).abs() > 1e-9 * a.log_sum.max(1.0) {
        return a.log_sum.total_cmp(&b.log_sum);
    }
    let product = |c: &Candidate| {
        c.indices
            .iter()
            .try_fold(1u128, |acc, &i| acc.checked_mul(pool[i] as u128))
    };
    match (product(a), product(b)) {
        (Some(x), Some(y)) if x != y => x.cmp(&y),
        _ => a.indices.cmp(&b.indices),
    }
}

struct TopK<'a> {
    k: usize,
    pool: &'a [u64],
    items: Vec<Candidate>,
}

impl<'a> TopK<'a> {
    fn new(k: usize, pool: &'a [u64]) -> Self {
        TopK {
            k,
            pool,
            items: Vec::with_capacity(k + 1),
        }
    }

    fn worst_log(&self) -> Option<f64> {
        (self.items.len() == self.k).then(|| self.items[self.k - 1].log_sum)
    }

    fn offer(&mut self, c: Candidate) {
        let pos = self
            .items
            .partition_point(|x| compare(x, &c, self.pool) == Ordering::Less);
        if pos < self.k {
            self.items.insert(pos, c);
            self.items.truncate(self.k);
        }
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

pub fn search_quadratic(spec: &SearchSpec) -> Result<SearchReport> {
    let t = spec.ramified_count;
    let s = spec.split_primes.len();
    if t == 0 {
        return Err(Error::InfeasibleSearch("ramified count must be positive".into()));
    }
    if spec.top_k == 0 {
        return Err(Error::InfeasibleSearch("top_k must be positive".into()));
    }
    if spec.split_primes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InfeasibleSearch(
            "split primes must be strictly ascending".into(),
        ));
    }
    if let Some(p) = spec.split_primes.iter().find(|&&p| !is_prime(p)) {
        return Err(Error::InfeasibleSearch(format!("split entry {p} is not prime")));
    }
    if !tower_feasible(t, s, &spec.predicate) {
        let hint = if spec.predicate.is_default() {
            format!(
                "t - 1 - s = {} but the predicate needs at least 2 + 2 sqrt(s + 2) = {:.4}",
                t as i64 - 1 - s as i64,
                2.0 + 2.0 * ((s + 2) as f64).sqrt()
            )
        } else {
            "the configured predicate rejects this (t, s)".to_string()
        };
        return Err(Error::InfeasibleSearch(format!(
            "no field with {t} ramified and {s} split primes passes the tower predicate: {hint}"
        )));
    }

    let pool: Vec<u64> = primes_up_to(spec.pool_bound)?
        .into_iter()
        .filter(|&p| p != 2 && spec.split_primes.binary_search(&p).is_err())
        .collect();
    if pool.len() < t {
        return Err(Error::InfeasibleSearch(format!(
            "pool up to {} has only {} admissible primes, need {t}",
            spec.pool_bound,
            pool.len()
        )));
    }

    let residues = Residues::new(&pool, &spec.split_primes);
    let need_mod8 = spec.split_primes.first() == Some(&2);
    let total = binomial(pool.len(), t);
    let exhaustive = total <= EXHAUSTIVE_LIMIT;

    let (best, examined, admissible, complete) = if exhaustive {
        let (best, examined, admissible) =
            enumerate_all(&pool, t, &residues, spec.sign, need_mod8, spec.top_k);
        (best, examined, admissible, true)
    } else {
        branch_and_bound(&pool, t, &residues, spec, need_mod8)
    };

    let hits = best
        .iter()
        .map(|c| make_hit(c, &pool, spec))
        .collect::<Result<Vec<_>>>()?;
    let smallest_skipped = best
        .first()
        .map(|c| (0..t).filter(|i| !c.indices.contains(i)).count());

    Ok(SearchReport {
        hits,
        exhaustive,
        complete,
        pool,
        candidates_examined: examined,
        admissible,
        smallest_skipped,
        conditional_on_predicate: spec.predicate.is_default(),
    })
}

fn make_hit(c: &Candidate, pool: &[u64], spec: &SearchSpec) -> Result<SearchHit> {
    let seed = QuadraticSeed::new(
        spec.sign,
        c.indices.iter().map(|&i| pool[i]).collect(),
        spec.split_primes.clone(),
    );
    let congruences_ok = spec
        .split_primes
        .iter()
        .try_fold(true, |ok, &p| Ok::<_, Error>(ok && split_ok(&seed, p)?))?;
    let tower = TowerSeed::from_quadratic(&seed.describe(), &seed, "search")?;
    Ok(SearchHit {
        value: evaluate_seed(&tower, Objective::GAMMA)?,
        feasible: tower_feasible(spec.ramified_count, spec.split_primes.len(), &spec.predicate),
        congruences_ok,
        seed,
    })
}

fn mul_residues(acc: &[u64], row: &[u64], moduli: &[u64]) -> Vec<u64> {
    acc.iter()
        .zip(row)
        .zip(moduli)
        .map(|((&a, &b), &m)| a * b % m)
        .collect()
}

/// Lexicographic enumeration of all `t`-subsets, split by first element
/// across threads and merged in a fixed order.
fn enumerate_all(
    pool: &[u64],
    t: usize,
    res: &Residues,
    sign: Sign,
    need_mod8: bool,
    k: usize,
) -> (Vec<Candidate>, u64, u64) {
    let n = pool.len();
    let parts: Vec<(Vec<Candidate>, u64, u64)> = (0..=n - t)
        .into_par_iter()
        .map(|first| {
            let mut top = TopK::new(k, pool);
            let mut counts = (0u64, 0u64);
            let mut chosen = vec![first];
            let prod = mul_residues(&res.unit(), &res.table[first], &res.moduli);
            walk(
                pool,
                t,
                res,
                sign,
                need_mod8,
                first + 1,
                &mut chosen,
                &prod,
                res.logs[first],
                &mut top,
                &mut counts,
            );
            (top.items, counts.0, counts.1)
        })
        .collect();

    let mut merged = TopK::new(k, pool);
    let (mut examined, mut admissible) = (0, 0);
    for (items, e, a) in parts {
        examined += e;
        admissible += a;
        for c in items {
            merged.offer(c);
        }
    }
    (merged.items, examined, admissible)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    pool: &[u64],
    t: usize,
    res: &Residues,
    sign: Sign,
    need_mod8: bool,
    next: usize,
    chosen: &mut Vec<usize>,
    prod: &[u64],
    log_sum: f64,
    top: &mut TopK,
    counts: &mut (u64, u64),
) {
    if chosen.len() == t {
        counts.0 += 1;
        if res.admissible(prod, sign, need_mod8) {
            counts.1 += 1;
            top.offer(Candidate {
                indices: chosen.clone(),
                log_sum,
            });
        }
        return;
    }
    let remaining = t - chosen.len();
    for i in next..=pool.len() - remaining {
        chosen.push(i);
        let p = mul_residues(prod, &res.table[i], &res.moduli);
        walk(
            pool,
            t,
            res,
            sign,
            need_mod8,
            i + 1,
            chosen,
            &p,
            log_sum + res.logs[i],
            top,
            counts,
        );
        chosen.pop();
    }
}

/// Depth-first over ascending primes, pruning any branch whose cheapest
/// completion (the next smallest primes) cannot beat the current k-th best.
/// Congruence failures at the leaves backtrack into the next smallest choice.
fn branch_and_bound(
    pool: &[u64],
    t: usize,
    res: &Residues,
    spec: &SearchSpec,
    need_mod8: bool,
) -> (Vec<Candidate>, u64, u64, bool) {
    // prefix[i] = sum of logs[0..i]
    let mut prefix = vec![0.0];
    for &l in &res.logs {
        prefix.push(prefix.last().unwrap() + l);
    }
    struct State<'a> {
        top: TopK<'a>,
        nodes: u64,
        leaves: u64,
        admissible: u64,
        exhausted: bool,
    }
    let mut st = State {
        top: TopK::new(spec.top_k, pool),
        nodes: 0,
        leaves: 0,
        admissible: 0,
        exhausted: false,
    };

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        pool: &[u64],
        t: usize,
        res: &Residues,
        sign: Sign,
        need_mod8: bool,
        budget: u64,
        prefix: &[f64],
        next: usize,
        chosen: &mut Vec<usize>,
        prod: &[u64],
        log_sum: f64,
        st: &mut State,
    ) {
        if st.exhausted {
            return;
        }
        st.nodes += 1;
        if st.nodes > budget {
            st.exhausted = true;
            return;
        }
        if chosen.len() == t {
            st.leaves += 1;
            if res.admissible(prod, sign, need_mod8) {
                st.admissible += 1;
                st.top.offer(Candidate {
                    indices: chosen.clone(),
                    log_sum,
                });
            }
            return;
        }
        let remaining = t - chosen.len();
        for i in next..=pool.len() - remaining {
            let bound = log_sum + prefix[i + remaining] - prefix[i];
            if let Some(worst) = st.top.worst_log() {
                if bound > worst + 1e-12 {
                    // later i only raise the bound
                    break;
                }
            }
            chosen.push(i);
            let p = mul_residues(prod, &res.table[i], &res.moduli);
            dfs(
                pool,
                t,
                res,
                sign,
                need_mod8,
                budget,
                prefix,
                i + 1,
                chosen,
                &p,
                log_sum + res.logs[i],
                st,
            );
            chosen.pop();
            if st.exhausted {
                return;
            }
        }
    }

    let mut chosen = Vec::with_capacity(t);
    dfs(
        pool,
        t,
        res,
        spec.sign,
        need_mod8,
        spec.node_budget,
        &prefix,
        0,
        &mut chosen,
        &res.unit(),
        0.0,
        &mut st,
    );
    let complete = !st.exhausted;
    (st.top.items, st.leaves, st.admissible, complete)
}
