//! Independent branch-and-bound oracle: exact maximum sum-free and
//! (k,l)-free cardinalities, full enumeration of maximum sets, and
//! automorphism-orbit reduction.
//!
//! The search decides elements one at a time in a fixed order, keeping the
//! partial set and the set of elements excluded by propagation as flat
//! bitmasks. For a sum-free partial set `A`, the elements that can no longer
//! be added are exactly `(A+A) ∪ (A−A) ∪ {y : 2y ∈ A} ∪ {0}`, which is
//! maintained incrementally.

use crate::group::{enumerate_automorphisms, Group};
use crate::subset::Subset;
use crate::{Error, Result};
use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

/// Fixed-width bitmask covering up to 512 elements.
const WORDS: usize = 8;
pub(crate) const MAX_SEARCH_ORDER: usize = WORDS * 64;

#[derive(Copy, Clone, PartialEq, Eq)]
struct Mask {
    w: [u64; WORDS],
}

impl Mask {
    const EMPTY: Mask = Mask { w: [0; WORDS] };

    #[inline]
    fn get(&self, i: usize) -> bool {
        self.w[i >> 6] >> (i & 63) & 1 == 1
    }

    #[inline]
    fn set(&mut self, i: usize) {
        self.w[i >> 6] |= 1u64 << (i & 63);
    }

    fn count(&self) -> usize {
        self.w.iter().map(|x| x.count_ones() as usize).sum()
    }

    fn ones(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        self.w
            .iter()
            .enumerate()
            .flat_map(move |(wi, &word)| {
                let mut word = word;
                std::iter::from_fn(move || {
                    if word == 0 {
                        None
                    } else {
                        let b = word.trailing_zeros() as usize;
                        word &= word - 1;
                        Some(wi * 64 + b)
                    }
                })
            })
            .take_while(move |&i| i < n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Exact maximum cardinality, one witness.
    MaxSize,
    /// All sets of maximum cardinality.
    EnumerateAll,
    /// All maximum sets reduced to one canonical representative per
    /// automorphism orbit.
    EnumerateOrbits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// decided + undecided
    Naive,
    /// decided + largest selection of undecided elements avoiding the
    /// doubling pairs (x, 2x)
    Pairing,
}

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub budget: Duration,
    pub bound: BoundKind,
    /// Fold negation into the orbit reduction (matching statements phrased
    /// "E or -E"). Off by default: plain group-action orbits.
    pub orbit_negation: bool,
    /// Order caps; searches on larger groups are refused.
    pub max_order: u64,
    pub enumerate_max_order: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::MaxSize,
            budget: Duration::from_secs(300),
            bound: BoundKind::Pairing,
            orbit_negation: false,
            max_order: 500,
            enumerate_max_order: 150,
        }
    }
}

impl SearchConfig {
    pub fn with_mode(mode: SearchMode) -> Self {
        SearchConfig {
            mode,
            ..Default::default()
        }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub optimum: usize,
    pub witnesses: Vec<Subset>,
    /// Number of orbits (only meaningful in orbit mode; 0 otherwise).
    pub orbit_count: usize,
    pub nodes_expanded: u64,
    pub complete: bool,
}

/// Shared tables for one group.
struct Tables {
    n: usize,
    add: Vec<u16>,
    neg: Vec<u16>,
    halves: Vec<Vec<u16>>,
    order: Vec<u16>,
    /// cycles of the doubling permutation on nonzero elements (odd order only)
    cycles: Vec<Vec<u16>>,
    odd: bool,
}

impl Tables {
    fn build(g: &Arc<Group>) -> Tables {
        let n = g.order() as usize;
        let mut add = vec![0u16; n * n];
        for a in 0..n {
            for b in a..n {
                let s = g.add(a, b) as u16;
                add[a * n + b] = s;
                add[b * n + a] = s;
            }
        }
        let neg: Vec<u16> = (0..n).map(|x| g.neg(x) as u16).collect();
        let mut halves = vec![Vec::new(); n];
        for y in 0..n {
            halves[add[y * n + y] as usize].push(y as u16);
        }
        // Branch order: decreasing conflict degree (number of distinct triples
        // {x, y, x+y} avoiding 0 through each element), ties by index.
        let mut degree = vec![0u32; n];
        for x in 1..n {
            for y in x..n {
                let z = add[x * n + y] as usize;
                if z == 0 {
                    continue;
                }
                let mut members = vec![x, y, z];
                members.sort_unstable();
                members.dedup();
                for &e in &members {
                    degree[e] += 1;
                }
            }
        }
        let mut order: Vec<u16> = (0..n as u16).collect();
        order.sort_by(|&a, &b| degree[b as usize].cmp(&degree[a as usize]).then(a.cmp(&b)));
        let odd = g.order() % 2 == 1;
        let mut cycles = Vec::new();
        if odd {
            let mut seen = vec![false; n];
            for start in 1..n {
                if seen[start] {
                    continue;
                }
                let mut cycle = Vec::new();
                let mut x = start;
                while !seen[x] {
                    seen[x] = true;
                    cycle.push(x as u16);
                    x = add[x * n + x] as usize;
                }
                cycles.push(cycle);
            }
        }
        Tables {
            n,
            add,
            neg,
            halves,
            order,
            cycles,
            odd,
        }
    }

    #[inline]
    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.n + b] as usize
    }

    #[inline]
    fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b] as usize)
    }

    /// Admissible upper bound on how many elements of `cand` can join a
    /// sum-free set. The pairing variant forbids both ends of each doubling
    /// pair (x, 2x); on odd groups those pairs form disjoint cycles, where the
    /// largest selection is computed exactly per membership run.
    fn bound(&self, cand: &Mask, kind: BoundKind) -> usize {
        let total = cand.count();
        match kind {
            BoundKind::Naive => total,
            BoundKind::Pairing if self.odd => {
                let mut picked = 0usize;
                for cycle in &self.cycles {
                    let len = cycle.len();
                    let inside = cycle.iter().filter(|&&x| cand.get(x as usize)).count();
                    if inside == 0 {
                        continue;
                    }
                    if inside == len {
                        picked += len / 2;
                        continue;
                    }
                    // runs of consecutive members along the cycle, wrapping
                    let mut runs = 0usize;
                    let mut i = 0;
                    // rotate to start at a gap
                    while cand.get(cycle[i] as usize) {
                        i += 1;
                    }
                    let mut run = 0usize;
                    for off in 0..len {
                        let x = cycle[(i + off) % len] as usize;
                        if cand.get(x) {
                            run += 1;
                        } else if run > 0 {
                            runs += run.div_ceil(2);
                            run = 0;
                        }
                    }
                    if run > 0 {
                        runs += run.div_ceil(2);
                    }
                    picked += runs;
                }
                // bound counts selectable nonzero elements; 0 is never usable
                picked + usize::from(cand.get(0)) // admissible, 0 only pads
            }
            BoundKind::Pairing => {
                // even order: greedy matching on the doubling edges
                let mut matched = Mask::EMPTY;
                let mut pairs = 0usize;
                for x in cand.ones(self.n) {
                    if x == 0 || matched.get(x) {
                        continue;
                    }
                    let y = self.add(x, x);
                    if y != 0 && y != x && cand.get(y) && !matched.get(y) {
                        matched.set(x);
                        matched.set(y);
                        pairs += 1;
                    }
                }
                total - pairs
            }
        }
    }
}

struct Engine<'t> {
    t: &'t Tables,
    bound_kind: BoundKind,
    deadline: Instant,
    nodes: u64,
    aborted: bool,
    /// enumeration target size; None = maximize
    target: Option<usize>,
    best: usize,
    best_witness: Mask,
    witnesses: Vec<Mask>,
    full: Mask,
}

impl<'t> Engine<'t> {
    fn new(t: &'t Tables, bound_kind: BoundKind, deadline: Instant, target: Option<usize>) -> Self {
        let mut full = Mask::EMPTY;
        for i in 0..t.n {
            full.set(i);
        }
        Engine {
            t,
            bound_kind,
            deadline,
            nodes: 0,
            aborted: false,
            target,
            best: 0,
            best_witness: Mask::EMPTY,
            witnesses: Vec::new(),
            full,
        }
    }

    fn run(&mut self) {
        if Instant::now() >= self.deadline {
            self.aborted = true;
            return;
        }
        let mut forbidden = Mask::EMPTY;
        if self.t.n > 0 {
            forbidden.set(0); // 0 + 0 = 0, so 0 never joins a sum-free set
        }
        self.dfs(Mask::EMPTY, forbidden, 0, 0);
    }

    fn dfs(&mut self, chosen: Mask, forbidden: Mask, ptr: usize, count: usize) {
        self.nodes += 1;
        if self.nodes.is_multiple_of(8192) {
            if Instant::now() >= self.deadline {
                self.aborted = true;
            }
            if self.nodes.is_multiple_of(1 << 22) {
                log::debug!("search: {} nodes, best {}", self.nodes, self.best);
            }
        }
        if self.aborted {
            return;
        }
        if count > self.best {
            self.best = count;
            self.best_witness = chosen;
        }
        if let Some(t) = self.target {
            if count == t {
                self.witnesses.push(chosen);
                return; // maximum sets admit no sum-free superset
            }
        }
        let mut ptr = ptr;
        while ptr < self.t.n {
            let x = self.t.order[ptr] as usize;
            if !chosen.get(x) && !forbidden.get(x) {
                break;
            }
            ptr += 1;
        }
        if ptr == self.t.n {
            return;
        }

        // candidates: everything undecided and unblocked
        let mut cand = Mask::EMPTY;
        for i in 0..WORDS {
            cand.w[i] = self.full.w[i] & !(chosen.w[i] | forbidden.w[i]);
        }
        let ub = count + self.t.bound(&cand, self.bound_kind);
        match self.target {
            Some(t) => {
                if ub < t {
                    return;
                }
            }
            None => {
                if ub <= self.best {
                    return;
                }
            }
        }

        let x = self.t.order[ptr] as usize;

        // include x
        let mut chosen2 = chosen;
        chosen2.set(x);
        let mut forb2 = forbidden;
        for a in chosen2.ones(self.t.n) {
            forb2.set(self.t.add(x, a));
            forb2.set(self.t.sub(a, x));
            forb2.set(self.t.sub(x, a));
        }
        for &y in &self.t.halves[x] {
            forb2.set(y as usize);
        }
        self.dfs(chosen2, forb2, ptr + 1, count + 1);

        // exclude x
        let mut forb3 = forbidden;
        forb3.set(x);
        self.dfs(chosen, forb3, ptr + 1, count);
    }
}

fn mask_to_subset(g: &Arc<Group>, m: &Mask, n: usize) -> Subset {
    let mut s = Subset::empty(g);
    for i in m.ones(n) {
        s.insert(i);
    }
    s
}

fn check_order(g: &Arc<Group>, cap: u64) -> Result<()> {
    if g.order() > cap || g.order() as usize > MAX_SEARCH_ORDER {
        return Err(Error::BoundExceeded {
            order: g.order(),
            bound: cap.min(MAX_SEARCH_ORDER as u64),
        });
    }
    Ok(())
}

/// Exact maximum sum-free cardinality with one witness.
pub fn max_sumfree(g: &Arc<Group>, cfg: &SearchConfig) -> Result<SearchResult> {
    check_order(g, cfg.max_order)?;
    let tables = Tables::build(g);
    let deadline = Instant::now() + cfg.budget;
    let mut engine = Engine::new(&tables, cfg.bound, deadline, None);
    engine.run();
    if engine.aborted {
        return Err(Error::IncompleteSearch {
            nodes: engine.nodes,
        });
    }
    Ok(SearchResult {
        optimum: engine.best,
        witnesses: vec![mask_to_subset(g, &engine.best_witness, tables.n)],
        orbit_count: 0,
        nodes_expanded: engine.nodes,
        complete: true,
    })
}

/// All maximum sum-free sets; in orbit mode, one canonical representative per
/// orbit under the automorphism group (optionally extended by negation).
/// Canonical = the orbit member with the least sorted index list.
pub fn enumerate_max_sumfree(g: &Arc<Group>, cfg: &SearchConfig) -> Result<SearchResult> {
    check_order(g, cfg.enumerate_max_order)?;
    let tables = Tables::build(g);
    let deadline = Instant::now() + cfg.budget;

    let mut probe = Engine::new(&tables, cfg.bound, deadline, None);
    probe.run();
    if probe.aborted {
        return Err(Error::IncompleteSearch { nodes: probe.nodes });
    }
    let optimum = probe.best;

    let mut engine = Engine::new(&tables, cfg.bound, deadline, Some(optimum));
    engine.run();
    if engine.aborted {
        return Err(Error::IncompleteSearch {
            nodes: probe.nodes + engine.nodes,
        });
    }
    let nodes = probe.nodes + engine.nodes;

    let mut witness_lists: Vec<Vec<u16>> = engine
        .witnesses
        .iter()
        .map(|m| m.ones(tables.n).map(|i| i as u16).collect())
        .collect();
    witness_lists.sort_unstable();

    let mut orbit_count = 0;
    let witnesses: Vec<Subset> = match cfg.mode {
        SearchMode::MaxSize | SearchMode::EnumerateAll => witness_lists
            .iter()
            .map(|ixs| {
                Subset::from_indices(g, &ixs.iter().map(|&i| i as usize).collect::<Vec<_>>())
                    .expect("indices in range")
            })
            .collect(),
        SearchMode::EnumerateOrbits => {
            let autos = enumerate_automorphisms(g)?;
            let mut maps: Vec<Vec<u16>> = autos
                .iter()
                .map(|a| a.permutation().iter().map(|&i| i as u16).collect())
                .collect();
            if cfg.orbit_negation {
                let extra: Vec<Vec<u16>> = maps
                    .iter()
                    .map(|p| p.iter().map(|&i| tables.neg[i as usize]).collect())
                    .collect();
                maps.extend(extra);
            }
            let mut reps: BTreeMap<Vec<u16>, ()> = BTreeMap::new();
            for ixs in &witness_lists {
                let canon = maps
                    .iter()
                    .map(|p| {
                        let mut image: Vec<u16> = ixs.iter().map(|&i| p[i as usize]).collect();
                        image.sort_unstable();
                        image
                    })
                    .min()
                    .expect("at least the identity map");
                reps.entry(canon).or_insert(());
            }
            orbit_count = reps.len();
            reps.keys()
                .map(|ixs| {
                    Subset::from_indices(g, &ixs.iter().map(|&i| i as usize).collect::<Vec<_>>())
                        .expect("indices in range")
                })
                .collect()
        }
    };

    Ok(SearchResult {
        optimum,
        witnesses,
        orbit_count,
        nodes_expanded: nodes,
        complete: true,
    })
}

/// Admissible upper bound on the total size of the best sum-free completion:
/// `|decided_in|` plus a bound over the undecided elements.
pub fn upper_bound(
    g: &Arc<Group>,
    decided_in: &Subset,
    undecided: &Subset,
    kind: BoundKind,
) -> usize {
    let base = decided_in.len();
    match kind {
        BoundKind::Naive => base + undecided.len(),
        BoundKind::Pairing => {
            if g.order() % 2 == 1 {
                // walk the doubling cycles; runs of undecided members along a
                // cycle admit ceil(run/2) picks, full cycles floor(len/2)
                let n = g.order() as usize;
                let mut seen = vec![false; n];
                let mut picked = usize::from(undecided.contains(0));
                for start in 1..n {
                    if seen[start] {
                        continue;
                    }
                    let mut cycle = Vec::new();
                    let mut x = start;
                    while !seen[x] {
                        seen[x] = true;
                        cycle.push(x);
                        x = g.add(x, x);
                    }
                    let len = cycle.len();
                    let inside = cycle.iter().filter(|&&x| undecided.contains(x)).count();
                    if inside == 0 {
                        continue;
                    }
                    if inside == len {
                        picked += len / 2;
                        continue;
                    }
                    let mut i = 0;
                    while undecided.contains(cycle[i]) {
                        i += 1;
                    }
                    let mut run = 0usize;
                    for off in 0..len {
                        if undecided.contains(cycle[(i + off) % len]) {
                            run += 1;
                        } else if run > 0 {
                            picked += run.div_ceil(2);
                            run = 0;
                        }
                    }
                    if run > 0 {
                        picked += run.div_ceil(2);
                    }
                }
                base + picked
            } else {
                let mut matched = vec![false; g.order() as usize];
                let mut pairs = 0;
                for x in undecided.iter() {
                    if x == 0 || matched[x] {
                        continue;
                    }
                    let y = g.add(x, x);
                    if y != 0 && y != x && undecided.contains(y) && !matched[y] {
                        matched[x] = true;
                        matched[y] = true;
                        pairs += 1;
                    }
                }
                base + undecided.len() - pairs
            }
        }
    }
}

/// Exact maximum (k,l)-free cardinality. Feasibility per node recomputes the
/// iterated sumsets incrementally from the parent node.
pub fn max_klfree(g: &Arc<Group>, k: u64, l: u64, cfg: &SearchConfig) -> Result<SearchResult> {
    if !(k > l && l >= 1) {
        return Err(Error::InvalidArgument(format!(
            "(k,l)-free search requires k > l >= 1, got ({k},{l})"
        )));
    }
    if num::integer::gcd(g.order(), k - l) != 1 {
        return Err(Error::InvalidArgument(format!(
            "(k,l)-free search requires gcd(n, k-l) = 1; n = {}",
            g.order()
        )));
    }
    check_order(g, cfg.max_order)?;
    let tables = Tables::build(g);
    let deadline = Instant::now() + cfg.budget;

    struct KlEngine<'t> {
        t: &'t Tables,
        k: usize,
        l: usize,
        deadline: Instant,
        nodes: u64,
        aborted: bool,
        best: usize,
        best_witness: Mask,
    }

    impl<'t> KlEngine<'t> {
        /// folds[t] = (t+1)-fold sumset of the chosen set
        fn dfs(&mut self, chosen: Mask, folds: &[Mask], next: usize, count: usize) {
            self.nodes += 1;
            if self.nodes.is_multiple_of(4096) && Instant::now() >= self.deadline {
                self.aborted = true;
            }
            if self.aborted {
                return;
            }
            if count > self.best {
                self.best = count;
                self.best_witness = chosen;
            }
            if next == self.t.n {
                return;
            }
            // naive bound: everything still undecided could join
            if count + (self.t.n - next) <= self.best {
                return;
            }
            // include `next` when the folds stay disjoint
            let mut new_folds = folds.to_vec();
            let mut chosen2 = chosen;
            chosen2.set(next);
            new_folds[0].set(next);
            for t in 1..self.k {
                // (t+1)A' = (t+1)A ∪ (tA' + next)
                let prev = new_folds[t - 1];
                let mut grown = new_folds[t];
                for e in prev.ones(self.t.n) {
                    grown.set(self.t.add(e, next));
                }
                new_folds[t] = grown;
            }
            let kf = &new_folds[self.k - 1];
            let lf = &new_folds[self.l - 1];
            let disjoint = (0..WORDS).all(|i| kf.w[i] & lf.w[i] == 0);
            if disjoint {
                self.dfs(chosen2, &new_folds, next + 1, count + 1);
            }
            self.dfs(chosen, folds, next + 1, count);
        }
    }

    let mut engine = KlEngine {
        t: &tables,
        k: k as usize,
        l: l as usize,
        deadline,
        nodes: 0,
        aborted: false,
        best: 0,
        best_witness: Mask::EMPTY,
    };
    let folds = vec![Mask::EMPTY; k as usize];
    engine.dfs(Mask::EMPTY, &folds, 0, 0);
    if engine.aborted {
        return Err(Error::IncompleteSearch {
            nodes: engine.nodes,
        });
    }
    Ok(SearchResult {
        optimum: engine.best,
        witnesses: vec![mask_to_subset(g, &engine.best_witness, tables.n)],
        orbit_count: 0,
        nodes_expanded: engine.nodes,
        complete: true,
    })
}
