//! Solving the translation program.
//!
//! The default engine exploits the program's structure: in a weakly
//! reversible solution every edge target is also a source, so the vertices in
//! use are exactly the distinct original sources. What remains is a choice,
//! per reaction, of a multiset of at most `q` nontrivial targets, plus the
//! stoichiometric columns `ỹ`, which for fixed targets decouple into one small
//! LP per species. A depth-first search over target multisets, bounded by
//! those LPs and pruned by a reachability test, finds the optimum exactly; the
//! result is lifted to a full assignment of the encoded program and checked
//! against every constraint before it is decoded.
//!
//! The generic engine hands the encoded program to the branch-and-bound
//! solver (or an external one) unchanged.

use std::collections::VecDeque;
use std::path::PathBuf;

use serde::Serialize;
use splitnet_milp::{
    solve, solve_lp, LinExpr, Lp, LpStatus, MilpModel, Rational, Relation, SolveConfig, SolveError, SolveStatus,
    VarKind, Violation,
};

use super::{decode, encode, source_classes, DecodeError, EncodingParams, Layout, ParamError, SplitTranslation};
use crate::network::ReactionNetwork;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Engine {
    Structured,
    Generic,
    External(PathBuf),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub engine: Engine,
    pub node_limit: Option<u64>,
    /// How many times big-M may be multiplied by 10 after saturation.
    pub big_m_retries: u32,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { engine: Engine::Structured, node_limit: None, big_m_retries: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum QStatus {
    Found,
    Infeasible,
    NodeLimit,
}

/// Outcome for one slice count. Infeasibility is relative to the vertex
/// budget and big-M recorded alongside it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QRecord {
    pub q: usize,
    pub status: QStatus,
    pub objective: Option<String>,
    pub nodes: u64,
    #[serde(rename = "nVertices")]
    pub n_vertices: usize,
    #[serde(rename = "bigM")]
    pub big_m: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Found {
    pub q: usize,
    pub translation: SplitTranslation,
    pub objective: Rational,
    /// Parameters of the accepted solve (big-M after any retries).
    pub params: EncodingParams,
    /// Full assignment of the encoded program.
    pub values: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub found: Option<Found>,
    pub records: Vec<QRecord>,
}

impl SearchOutcome {
    pub fn hit_node_limit(&self) -> bool {
        self.records.iter().any(|r| r.status == QStatus::NodeLimit)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SearchError {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("decoding failed: {0}")]
    Decode(#[from] DecodeError),
    #[error("constructed assignment violates the program: {0}")]
    Verification(Violation),
    #[error("big-M still saturated at {0} after the allowed retries")]
    BigMSaturated(Rational),
}

enum QResult {
    Optimal { values: Vec<Rational>, nodes: u64 },
    Infeasible { nodes: u64 },
    NodeLimit { nodes: u64 },
    Saturated,
}

/// Tries each slice count in `qs` in order and returns the first for which
/// an optimal weakly reversible split translation exists, with one record
/// per slice count attempted.
pub fn find_wr_split_translation(
    net: &ReactionNetwork,
    qs: &[usize],
    base: &EncodingParams,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SearchError> {
    let mut records = Vec::new();
    for &q in qs {
        let mut p = EncodingParams { q, ..base.clone() };
        let mut retries = 0;
        loop {
            let enc = encode(net, &p)?;
            let res = match &cfg.engine {
                Engine::Structured => structured(net, &p, &enc.model, &enc.layout, cfg.node_limit)?,
                Engine::Generic => generic(&enc.model, &enc.layout, cfg, None)?,
                Engine::External(exe) => generic(&enc.model, &enc.layout, cfg, Some(exe.clone()))?,
            };
            let record = |status, objective: Option<&Rational>, nodes| QRecord {
                q,
                status,
                objective: objective.map(ToString::to_string),
                nodes,
                n_vertices: p.n_vertices,
                big_m: p.big_m.to_string(),
            };
            match res {
                QResult::Saturated => {
                    if retries >= cfg.big_m_retries {
                        return Err(SearchError::BigMSaturated(p.big_m));
                    }
                    retries += 1;
                    log::warn!("big-M {} saturated at q = {q}; retrying with 10x", p.big_m);
                    p.big_m = &p.big_m * &Rational::from(10);
                }
                QResult::Infeasible { nodes } => {
                    records.push(record(QStatus::Infeasible, None, nodes));
                    break;
                }
                QResult::NodeLimit { nodes } => {
                    records.push(record(QStatus::NodeLimit, None, nodes));
                    break;
                }
                QResult::Optimal { values, nodes } => {
                    let objective = enc.model.objective_value(&values);
                    records.push(record(QStatus::Found, Some(&objective), nodes));
                    let translation = decode(net, &p, &enc.layout, &values)?;
                    return Ok(SearchOutcome {
                        found: Some(Found { q, translation, objective, params: p, values }),
                        records,
                    });
                }
            }
        }
    }
    Ok(SearchOutcome { found: None, records })
}

fn saturated(lay: &Layout, values: &[Rational], big_m: &Rational) -> bool {
    lay.saturable().any(|j| values[j] >= *big_m)
}

fn generic(model: &MilpModel, lay: &Layout, cfg: &SearchConfig, external: Option<PathBuf>) -> Result<QResult, SearchError> {
    let sc = SolveConfig { node_limit: cfg.node_limit, external_solver: external, ..SolveConfig::default() };
    let sol = solve(model, &sc)?;
    Ok(match sol.status {
        SolveStatus::Infeasible => QResult::Infeasible { nodes: sol.node_count },
        SolveStatus::BoundExceeded => QResult::NodeLimit { nodes: sol.node_count },
        SolveStatus::Optimal => {
            let big = big_m_of(model, lay);
            if saturated(lay, &sol.values, &big) {
                QResult::Saturated
            } else {
                QResult::Optimal { values: sol.values, nodes: sol.node_count }
            }
        }
    })
}

fn big_m_of(model: &MilpModel, lay: &Layout) -> Rational {
    model.variables()[lay.y(0, 0).0].upper.clone().unwrap_or_else(|| Rational::from(i64::MAX))
}

/// Smallest injective labeling of source classes by vertices `0..n`
/// satisfying the lowest-available-index rows, or the identity when those
/// rows are not imposed.
pub(crate) fn class_labeling(cls: &[usize], nv: usize, n: usize, symmetry: bool) -> Option<Vec<usize>> {
    if nv > n {
        return None;
    }
    if !symmetry {
        return Some((0..nv).collect());
    }
    // Reaction k becomes checkable once every class among reactions 0..=k
    // is labeled; classes are numbered by first appearance.
    let mut ready: Vec<Vec<usize>> = vec![Vec::new(); nv];
    let mut top = 0;
    for (k, &c) in cls.iter().enumerate() {
        top = top.max(c);
        ready[top].push(k);
    }
    fn ok(k: usize, n: usize, cls: &[usize], label: &[usize]) -> bool {
        // 1-based: every vertex j ≤ n with label(k) < j ≤ k sources an earlier reaction.
        let lk = label[cls[k]] + 1;
        let kk = (k + 1).min(n);
        (lk + 1..=kk).all(|j| (0..k).any(|kp| label[cls[kp]] + 1 == j))
    }
    fn dfs(c: usize, nv: usize, n: usize, cls: &[usize], ready: &[Vec<usize>], label: &mut Vec<usize>, used: &mut [bool]) -> bool {
        if c == nv {
            return true;
        }
        for v in 0..n {
            if used[v] {
                continue;
            }
            label.push(v);
            used[v] = true;
            if ready[c].iter().all(|&k| ok(k, n, cls, label)) && dfs(c + 1, nv, n, cls, ready, label, used) {
                return true;
            }
            used[v] = false;
            label.pop();
        }
        false
    }
    let mut label = Vec::with_capacity(nv);
    let mut used = vec![false; n];
    dfs(0, nv, n, cls, &ready, &mut label, &mut used).then_some(label)
}

const PAIR_TABLE_LIMIT: usize = 200_000;

/// Per-species optimum: value and the point attaining it.
#[derive(Clone)]
struct SpeciesLp {
    value: Rational,
    point: Vec<Rational>,
}

struct Best {
    objective: Rational,
    choice: Vec<usize>,
    y: Vec<SpeciesLp>,
}

struct Search<'a> {
    m: usize,
    nv: usize,
    q: usize,
    cls: &'a [usize],
    gamma: Vec<Vec<Rational>>,
    options: Vec<Vec<Vec<usize>>>,
    /// Reactions whose reaction vector is nonzero (at least one nontrivial target).
    moving: Vec<bool>,
    species_order: Vec<usize>,
    /// Flat option ids: option `o` of reaction `k` is `base[k] + o`.
    base: Vec<usize>,
    /// Per flat option, the options of other reactions it is pairwise compatible with.
    compat: Vec<Vec<u64>>,
    lower: Vec<Vec<Rational>>,
    big_m: Rational,
    integral: bool,
    node_limit: Option<u64>,
    nodes: u64,
    aborted: bool,
    choice: Vec<Option<usize>>,
    remaining: Vec<usize>,
    best: Option<Best>,
}

/// Multisets of size `s` over `items`, each ascending, in lexicographic order.
fn multisets(items: &[usize], s: usize) -> Vec<Vec<usize>> {
    fn rec(items: &[usize], from: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in from..items.len() {
            cur.push(items[i]);
            rec(items, i, s, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, 0, s, &mut Vec::new(), &mut out);
    out
}

impl Search<'_> {
    fn targets(&self, k: usize) -> Option<&[usize]> {
        self.choice[k].map(|o| self.options[k][o].as_slice())
    }

    /// LP for species `i` under the current partial assignment.
    fn species_lp(&self, i: usize) -> Option<SpeciesLp> {
        let nv = self.nv;
        if self.lower.iter().any(|lb| lb[i] > self.big_m) {
            return None;
        }
        let mut lp = Lp::with_vars(nv);
        for c in 0..nv {
            lp.cost[c] = Rational::one();
            lp.lower[c] = self.lower[c][i].clone();
            lp.upper[c] = Some(self.big_m.clone());
        }
        let qq = Rational::from(self.q);
        for k in 0..self.cls.len() {
            let c = self.cls[k];
            let g = &self.gamma[k][i];
            match self.targets(k) {
                Some([]) => {}
                Some(ts) => {
                    let mut coef = vec![Rational::zero(); nv];
                    for &t in ts {
                        coef[t] += Rational::one();
                    }
                    coef[c] -= Rational::from(ts.len());
                    let row = coef.into_iter().enumerate().filter(|(_, a)| !a.is_zero()).collect();
                    lp.add_row(row, Relation::Eq, g.clone());
                }
                // Σ_T ỹ_t = Γ + s·ỹ_c ≥ Γ + ỹ_c and Σ_T ỹ_t ≤ q·Σ_{t≠c} ỹ_t.
                None if self.moving[k] => {
                    let mut row: Vec<(usize, Rational)> = (0..nv).filter(|&t| t != c).map(|t| (t, qq.clone())).collect();
                    row.push((c, -Rational::one()));
                    lp.add_row(row, Relation::Ge, g.clone());
                }
                None => {}
            }
        }
        let sol = solve_lp(&lp);
        (sol.status == LpStatus::Optimal).then_some(SpeciesLp { value: sol.objective, point: sol.values })
    }

    fn row_holds(&self, k: usize, i: usize, point: &[Rational]) -> bool {
        let ts = self.targets(k).unwrap();
        if ts.is_empty() {
            return true;
        }
        let c = self.cls[k];
        let mut lhs: Rational = ts.iter().map(|&t| point[t].clone()).sum();
        lhs -= &point[c] * &Rational::from(ts.len());
        lhs == self.gamma[k][i]
    }

    /// Every assigned edge `u → v` can still be closed into a cycle, where a
    /// class with unassigned reactions may later point anywhere.
    fn reachable_ok(&self) -> bool {
        let nv = self.nv;
        let mut adj = vec![Vec::new(); nv];
        for k in 0..self.cls.len() {
            if let Some(ts) = self.targets(k) {
                for &t in ts {
                    if !adj[self.cls[k]].contains(&t) {
                        adj[self.cls[k]].push(t);
                    }
                }
            }
        }
        let open: Vec<bool> = (0..nv).map(|c| self.remaining[c] > 0).collect();
        let mut cache: Vec<Option<Vec<bool>>> = vec![None; nv];
        for u in 0..nv {
            for &v in &adj[u] {
                let seen = cache[v].get_or_insert_with(|| {
                    let mut seen = vec![false; nv];
                    let mut stack = vec![v];
                    seen[v] = true;
                    while let Some(x) = stack.pop() {
                        for &w in &adj[x] {
                            if !seen[w] {
                                seen[w] = true;
                                stack.push(w);
                            }
                        }
                    }
                    seen
                });
                if !seen[u] && !(0..nv).any(|w| seen[w] && open[w]) {
                    return false;
                }
            }
        }
        true
    }

    fn option_allowed(allowed: &[u64], id: usize) -> bool {
        allowed[id / 64] >> (id % 64) & 1 == 1
    }

    /// Solves (or inherits) the species LPs after assigning reaction `k`.
    fn child_lps(&mut self, k: usize, lps: &[SpeciesLp]) -> Option<Vec<SpeciesLp>> {
        // Species that recently proved infeasible are tried first.
        let mut child: Vec<Option<SpeciesLp>> = vec![None; self.m];
        for idx in 0..self.m {
            let i = self.species_order[idx];
            if self.row_holds(k, i, &lps[i].point) {
                child[i] = Some(lps[i].clone());
            } else {
                match self.species_lp(i) {
                    Some(l) => child[i] = Some(l),
                    None => {
                        self.species_order[..=idx].rotate_right(1);
                        return None;
                    }
                }
            }
        }
        Some(child.into_iter().map(Option::unwrap).collect())
    }

    /// Smallest number of nontrivial targets still open to each unassigned
    /// reaction other than `skip`, summed; `None` if one has no option left.
    fn pending_targets(&self, allowed: &[u64], skip: usize) -> Option<usize> {
        let mut total = 0;
        for k in 0..self.cls.len() {
            if k == skip || self.choice[k].is_some() {
                continue;
            }
            let o = (0..self.options[k].len()).find(|&o| Self::option_allowed(allowed, self.base[k] + o))?;
            total += self.options[k][o].len();
        }
        Some(total)
    }

    /// Depth-first search; the next reaction is the unassigned one with the
    /// fewest options compatible with the assignment so far.
    fn dfs(&mut self, allowed: &[u64], lps: &[SpeciesLp], fixed: &Rational) {
        if self.aborted {
            return;
        }
        let mut pick: Option<(usize, usize)> = None;
        for k in 0..self.cls.len() {
            if self.choice[k].is_some() {
                continue;
            }
            let count = (0..self.options[k].len()).filter(|&o| Self::option_allowed(allowed, self.base[k] + o)).count();
            if pick.is_none_or(|(_, c)| count < c) {
                pick = Some((k, count));
            }
        }
        let Some((k, count)) = pick else {
            self.leaf(lps, fixed);
            return;
        };
        if count == 0 {
            return;
        }
        let c = self.cls[k];
        let Some(pending) = self.pending_targets(allowed, k) else {
            return;
        };
        // Child LP values never drop below the parent's, and options come in
        // order of increasing size, so this bound lets the loop stop early.
        let lp_sum: Rational = lps.iter().map(|l| l.value.clone()).sum();
        let base_bound = &lp_sum + fixed + Rational::from(pending);
        for o in 0..self.options[k].len() {
            let id = self.base[k] + o;
            if !Self::option_allowed(allowed, id) {
                continue;
            }
            let s = self.options[k][o].len();
            if self.best.as_ref().is_some_and(|b| &base_bound + &Rational::from(s) >= b.objective) {
                break;
            }
            if let Some(limit) = self.node_limit {
                if self.nodes >= limit {
                    self.aborted = true;
                    return;
                }
            }
            self.nodes += 1;
            self.choice[k] = Some(o);
            let next: Vec<u64> = allowed.iter().zip(&self.compat[id]).map(|(a, b)| a & b).collect();
            let fixed_child = fixed + &Rational::from(s);
            let pending_child = self.pending_targets(&next, usize::MAX);
            let quick = pending_child.map(|p| &lp_sum + &fixed_child + Rational::from(p));
            let promising = match (&quick, &self.best) {
                (None, _) => false,
                (Some(qb), Some(b)) => *qb < b.objective,
                (Some(_), None) => true,
            };
            self.remaining[c] -= 1;
            if promising && self.reachable_ok() {
                if let Some(child) = self.child_lps(k, lps) {
                    let bound: Rational = child.iter().map(|l| l.value.clone()).sum::<Rational>()
                        + &fixed_child
                        + Rational::from(pending_child.unwrap());
                    if self.best.as_ref().is_none_or(|b| bound < b.objective) {
                        self.dfs(&next, &child, &fixed_child);
                    }
                }
            }
            self.remaining[c] += 1;
            self.choice[k] = None;
            if self.aborted {
                return;
            }
        }
    }

    /// Whether the species LPs stay feasible with exactly these reactions assigned.
    fn jointly_feasible(&mut self, assign: &[(usize, usize)]) -> bool {
        for &(k, o) in assign {
            self.choice[k] = Some(o);
        }
        let ok = (0..self.m).all(|i| self.species_lp(i).is_some());
        for &(k, _) in assign {
            self.choice[k] = None;
        }
        ok
    }

    /// Drops options infeasible on their own, then tabulates pairwise
    /// compatibility (skipped when the table would be too large).
    fn prepare(&mut self) {
        let r = self.cls.len();
        for k in 0..r {
            let keep: Vec<bool> = (0..self.options[k].len()).map(|o| self.jointly_feasible(&[(k, o)])).collect();
            let mut it = keep.iter();
            self.options[k].retain(|_| *it.next().unwrap());
        }
        self.base = Vec::with_capacity(r);
        let mut total = 0;
        for k in 0..r {
            self.base.push(total);
            total += self.options[k].len();
        }
        let words = total.div_ceil(64).max(1);
        let mut full = vec![0u64; words];
        for id in 0..total {
            full[id / 64] |= 1 << (id % 64);
        }
        self.compat = vec![full; total];
        let pairs: usize = (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).map(|(a, b)| self.options[a].len() * self.options[b].len()).sum();
        if pairs > PAIR_TABLE_LIMIT {
            log::debug!("skipping pairwise table ({pairs} pairs)");
            return;
        }
        for a in 0..r {
            for b in a + 1..r {
                for oa in 0..self.options[a].len() {
                    for ob in 0..self.options[b].len() {
                        if !self.jointly_feasible(&[(a, oa), (b, ob)]) {
                            let (ia, ib) = (self.base[a] + oa, self.base[b] + ob);
                            self.compat[ia][ib / 64] &= !(1 << (ib % 64));
                            self.compat[ib][ia / 64] &= !(1 << (ia % 64));
                        }
                    }
                }
            }
        }
    }

    fn leaf(&mut self, lps: &[SpeciesLp], fixed: &Rational) {
        let y: Vec<SpeciesLp> = if self.integral {
            let mut out = Vec::with_capacity(self.m);
            for (i, l) in lps.iter().enumerate() {
                if l.point.iter().all(Rational::is_integer) {
                    out.push(l.clone());
                } else {
                    match self.species_integer(i) {
                        Some(s) => out.push(s),
                        None => return,
                    }
                }
            }
            out
        } else {
            lps.to_vec()
        };
        let objective = y.iter().map(|l| l.value.clone()).sum::<Rational>() + fixed;
        if self.best.as_ref().is_none_or(|b| objective < b.objective) {
            let choice = self.choice.iter().map(|c| c.unwrap()).collect();
            self.best = Some(Best { objective, choice, y });
        }
    }

    /// Integer version of the species LP at a leaf.
    fn species_integer(&self, i: usize) -> Option<SpeciesLp> {
        let mut model = MilpModel::new();
        let vars: Vec<_> = (0..self.nv)
            .map(|c| model.add_variable(format!("y{c}"), VarKind::Integer, Some(self.big_m.clone())).unwrap())
            .collect();
        for c in 0..self.nv {
            if self.lower[c][i].is_positive() {
                let e = LinExpr::new().with(vars[c], 1);
                model.add_constraint(format!("lb{c}"), e, Relation::Ge, self.lower[c][i].clone()).unwrap();
            }
        }
        for k in 0..self.cls.len() {
            let ts = self.targets(k).unwrap();
            if ts.is_empty() {
                continue;
            }
            let mut e = LinExpr::new();
            for &t in ts {
                e.add_term(vars[t], Rational::one());
            }
            e.add_term(vars[self.cls[k]], -Rational::from(ts.len()));
            model.add_constraint(format!("r{k}"), e, Relation::Eq, self.gamma[k][i].clone()).unwrap();
        }
        model.set_objective(LinExpr::from_terms(vars.iter().map(|&v| (v, Rational::one())))).unwrap();
        let sol = solve(&model, &SolveConfig::default()).ok()?;
        sol.is_optimal().then(|| SpeciesLp { value: sol.objective.unwrap(), point: sol.values })
    }
}

fn structured(
    net: &ReactionNetwork,
    p: &EncodingParams,
    model: &MilpModel,
    lay: &Layout,
    node_limit: Option<u64>,
) -> Result<QResult, SearchError> {
    let (cls, nv) = source_classes(net);
    let (m, r, q) = (net.num_species(), net.num_reactions(), p.q);
    let Some(label) = class_labeling(&cls, nv, p.n_vertices, p.symmetry_breaking) else {
        return Ok(QResult::Infeasible { nodes: 0 });
    };
    let gamma: Vec<Vec<Rational>> = (0..r).map(|k| net.reaction_vector0(k)).collect();
    let options: Vec<Vec<Vec<usize>>> = (0..r)
        .map(|k| {
            let others: Vec<usize> = (0..nv).filter(|&c| c != cls[k]).collect();
            let zero = gamma[k].iter().all(Rational::is_zero);
            let from = if zero { 0 } else { 1 };
            (from..=q).flat_map(|s| multisets(&others, s)).collect()
        })
        .collect();
    let moving: Vec<bool> = gamma.iter().map(|g| g.iter().any(|x| !x.is_zero())).collect();
    let qq = Rational::from(q);
    let mut lower = vec![vec![Rational::zero(); m]; nv];
    for k in 0..r {
        for i in 0..m {
            if gamma[k][i].is_negative() {
                let b = -&gamma[k][i] / &qq;
                if b > lower[cls[k]][i] {
                    lower[cls[k]][i] = b;
                }
            }
        }
    }
    let mut remaining = vec![0; nv];
    for &c in &cls {
        remaining[c] += 1;
    }
    let mut s = Search {
        m,
        nv,
        q,
        cls: &cls,
        gamma,
        options,
        moving,
        species_order: (0..m).collect(),
        base: Vec::new(),
        compat: Vec::new(),
        lower,
        big_m: p.big_m.clone(),
        integral: p.integral_complexes,
        node_limit,
        nodes: 0,
        aborted: false,
        choice: vec![None; r],
        remaining,
        best: None,
    };
    let mut root = Vec::with_capacity(m);
    for i in 0..m {
        match s.species_lp(i) {
            Some(l) => root.push(l),
            None => return Ok(QResult::Infeasible { nodes: 1 }),
        }
    }
    s.prepare();
    let all = vec![u64::MAX; s.compat.first().map_or(1, Vec::len)];
    s.dfs(&all, &root, &Rational::zero());
    let nodes = s.nodes;
    if s.aborted {
        return Ok(QResult::NodeLimit { nodes });
    }
    let Some(best) = s.best.take() else {
        return Ok(QResult::Infeasible { nodes });
    };
    log::debug!("structured search: optimum {} after {nodes} nodes", best.objective);

    let targets: Vec<Vec<usize>> = (0..r)
        .map(|k| {
            let mut t = s.options[k][best.choice[k]].clone();
            t.resize(q, cls[k]);
            t
        })
        .collect();
    let values = lift(p, lay, &cls, &label, &targets, &best.y);
    if saturated(lay, &values, &p.big_m) || lay.flows().any(|j| values[j] > p.big_m) {
        return Ok(QResult::Saturated);
    }
    model.check(&values).map_err(SearchError::Verification)?;
    debug_assert_eq!(model.objective_value(&values), best.objective);
    Ok(QResult::Optimal { values, nodes })
}

/// Full program assignment for a class-level solution; `targets[k][l]` is
/// the class targeted by reaction `k` on slice `l`.
fn lift(
    p: &EncodingParams,
    lay: &Layout,
    cls: &[usize],
    label: &[usize],
    targets: &[Vec<usize>],
    y: &[SpeciesLp],
) -> Vec<Rational> {
    let (m, r, q) = (lay.m, lay.r, lay.q);
    let nv = label.len();
    let mut v = vec![Rational::zero(); lay.num_vars()];
    let one = Rational::one();
    for i in 0..m {
        for c in 0..nv {
            v[lay.y(i, label[c]).0] = y[i].point[c].clone();
        }
        for k in 0..r {
            v[lay.gs(i, k).0] = y[i].point[cls[k]].clone();
            for l in 0..q {
                v[lay.gt(i, k, l).0] = y[i].point[targets[k][l]].clone();
            }
        }
    }
    for k in 0..r {
        let src = label[cls[k]];
        v[lay.as_(src, k).0] = one.clone();
        for l in 0..q {
            let t = label[targets[k][l]];
            v[lay.at(t, k, l).0] = one.clone();
            if t != src {
                v[lay.d(src, k, l).0] = one.clone();
                v[lay.d(t, k, l).0] = one.clone();
                v[lay.lam(k, l).0] = one.clone();
            }
        }
    }

    // Circulation: every nontrivial piece (k, t) sends ε·multiplicity around
    // a shortest cycle through it.
    let eps = &p.epsilon;
    let mut pieces: Vec<(usize, usize, usize)> = Vec::new();
    for k in 0..r {
        for &t in &targets[k] {
            if t == cls[k] {
                continue;
            }
            match pieces.iter_mut().find(|(kk, tt, _)| *kk == k && *tt == t) {
                Some(pc) => pc.2 += 1,
                None => pieces.push((k, t, 1)),
            }
        }
    }
    let mut flow = vec![Rational::zero(); pieces.len()];
    for (idx, &(k, t, mult)) in pieces.iter().enumerate() {
        let amount = eps * &Rational::from(mult);
        flow[idx] += &amount;
        // BFS over pieces from class t back to class cls[k].
        let goal = cls[k];
        let mut prev: Vec<Option<usize>> = vec![None; nv];
        let mut seen = vec![false; nv];
        seen[t] = true;
        let mut queue = VecDeque::from([t]);
        while let Some(x) = queue.pop_front() {
            if x == goal {
                break;
            }
            for (pi, &(kk, tt, _)) in pieces.iter().enumerate() {
                if cls[kk] == x && !seen[tt] {
                    seen[tt] = true;
                    prev[tt] = Some(pi);
                    queue.push_back(tt);
                }
            }
        }
        let mut x = goal;
        while x != t {
            let pi = prev[x].expect("weakly reversible solution has a return path");
            flow[pi] += &amount;
            x = cls[pieces[pi].0];
        }
    }
    for k in 0..r {
        let src = label[cls[k]];
        let loops = targets[k].iter().filter(|&&t| t == cls[k]).count();
        let self_part = eps * &Rational::from(loops);
        let mut out = self_part.clone();
        v[lay.bt(src, k).0] = self_part;
        for (idx, &(kk, t, _)) in pieces.iter().enumerate() {
            if kk == k {
                v[lay.bt(label[t], k).0] = flow[idx].clone();
                out += &flow[idx];
            }
        }
        v[lay.bs(src, k).0] = out;
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiset_enumeration() {
        assert_eq!(multisets(&[1, 3], 2), vec![vec![1, 1], vec![1, 3], vec![3, 3]]);
        assert_eq!(multisets(&[1, 3], 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn labeling_respects_lowest_index_rows() {
        // Single class: any vertex is allowed for reaction 1 (k = 1 ≥ j only for j = 1).
        assert_eq!(class_labeling(&[0], 1, 3, true), Some(vec![0]));
        assert_eq!(class_labeling(&[0, 1], 2, 1, true), None);
        assert_eq!(class_labeling(&[0, 1, 2], 3, 3, false), Some(vec![0, 1, 2]));
    }
}
