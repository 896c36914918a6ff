//! The orbit signalizer graph and the order problem.
//!
//! Vertices are pairs `(s, t)` of canonical transformations. The edge at
//! letter `x` records the index `m` and period `ℓ` of the sequence
//! `(s·tⁱ)(x)`, and leads to `(r@x, tˡ@r(x))` with `r = s·tᵐ`. Starting from
//! `(1, t)`, the graph is finite for every transformation of bounded
//! activity. A cycle carrying an edge with `m > 0` or `ℓ > 1` proves that
//! `t` has infinite order; otherwise the walk costs bound the index and give
//! the period of `t`.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::activity::{classify, GrowthClass};
use crate::error::{Error, Result};
use crate::graph::{tarjan, Sccs};
use crate::machine::{check_letter, Transformation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OsgVertex {
    pub s: Transformation,
    pub t: Transformation,
}

/// Edge of the orbit signalizer graph between vertex indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OsgEdge {
    pub from: usize,
    /// 1-based.
    pub letter: usize,
    /// `m`: steps before the letter orbit enters its cycle.
    pub index: usize,
    /// `ℓ ≥ 1`: length of that cycle.
    pub period: usize,
    pub to: usize,
}

impl OsgEdge {
    pub fn is_costly(&self) -> bool {
        self.index > 0 || self.period > 1
    }
}

/// The outgoing edge of a vertex at one letter, before the target is
/// interned in a graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LetterTransition {
    pub letter: usize,
    pub index: usize,
    pub period: usize,
    pub target: OsgVertex,
}

pub fn letter_transition(v: &OsgVertex, x: usize) -> Result<LetterTransition> {
    letter_transition_capped(v, x, usize::MAX)
}

/// [`letter_transition`] whose intermediate products may have at most
/// `max_states` states.
pub fn letter_transition_capped(
    v: &OsgVertex,
    x: usize,
    max_states: usize,
) -> Result<LetterTransition> {
    let k = v.s.alphabet_size();
    check_letter(x, k)?;
    // (s·tⁱ)(x) = σ_tⁱ(s(x)), so the orbit lives on single letters
    let sigma = v.t.letter_map();
    let mut seen = vec![usize::MAX; k + 1];
    let mut orbit = Vec::with_capacity(k + 1);
    let mut y = v.s.output(0, x);
    let (index, period) = loop {
        if seen[y] != usize::MAX {
            break (seen[y], orbit.len() - seen[y]);
        }
        seen[y] = orbit.len();
        orbit.push(y);
        y = sigma[y - 1];
    };
    let r =
        v.s.compose_capped(&v.t.power_capped(index as u64, max_states)?, max_states)?;
    let y_index = orbit[index];
    debug_assert_eq!(r.output(0, x), y_index);
    let target = OsgVertex {
        s: r.section(&[x])?,
        t: v.t
            .power_capped(period as u64, max_states)?
            .section(&[y_index])?,
    };
    Ok(LetterTransition {
        letter: x,
        index,
        period,
        target,
    })
}

#[derive(Debug, Clone)]
pub struct OsgGraph {
    alphabet_size: usize,
    vertices: Vec<OsgVertex>,
    edges: Vec<OsgEdge>,
    expanded: usize,
    complete: bool,
    state_cap_hit: bool,
}

impl OsgGraph {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    /// Vertex 0 is the root `(1, t)`.
    pub fn vertices(&self) -> &[OsgVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[OsgEdge] {
        &self.edges
    }

    /// Vertices whose outgoing edges have been built.
    pub fn expanded(&self) -> usize {
        self.expanded
    }

    /// True when every vertex has its `k` outgoing edges.
    pub fn is_complete(&self) -> bool {
        self.complete
    }

    /// True when exploration stopped because expanding a vertex needed a
    /// product above the state cap.
    pub fn hit_state_cap(&self) -> bool {
        self.state_cap_hit
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            adj[e.from].push(e.to);
        }
        adj
    }
}

/// Breadth-first construction of `Φ(t)`, one vertex at a time, letters in
/// increasing order.
#[derive(Debug, Clone)]
pub struct OsgBuilder {
    graph: OsgGraph,
    index: HashMap<OsgVertex, usize>,
    state_cap: usize,
}

impl OsgBuilder {
    pub fn new(t: &Transformation) -> Self {
        Self::with_state_cap(t, usize::MAX)
    }

    /// A builder that stops when expanding a vertex needs a product of more
    /// than `state_cap` states. Components of successive vertices can grow
    /// geometrically, so a vertex count alone does not bound the work.
    pub fn with_state_cap(t: &Transformation, state_cap: usize) -> Self {
        let k = t.alphabet_size();
        let root = OsgVertex {
            s: Transformation::identity(k),
            t: t.clone(),
        };
        let mut index = HashMap::new();
        index.insert(root.clone(), 0);
        OsgBuilder {
            graph: OsgGraph {
                alphabet_size: k,
                vertices: vec![root],
                edges: Vec::new(),
                expanded: 0,
                complete: false,
                state_cap_hit: false,
            },
            index,
            state_cap,
        }
    }

    pub fn has_pending(&self) -> bool {
        self.graph.expanded < self.graph.vertices.len()
    }

    pub fn hit_state_cap(&self) -> bool {
        self.graph.state_cap_hit
    }

    /// Builds the outgoing edges of the next unexpanded vertex. Returns
    /// false when there is none.
    pub fn expand_next(&mut self) -> bool {
        if !self.has_pending() || self.graph.state_cap_hit {
            return false;
        }
        let from = self.graph.expanded;
        let v = &self.graph.vertices[from];
        let mut transitions = Vec::with_capacity(self.graph.alphabet_size);
        for x in 1..=self.graph.alphabet_size {
            match letter_transition_capped(v, x, self.state_cap) {
                Ok(tr) => transitions.push(tr),
                Err(Error::StateBlowup { .. }) => {
                    self.graph.state_cap_hit = true;
                    return false;
                }
                Err(e) => unreachable!("letter within alphabet: {e}"),
            }
        }
        for tr in transitions {
            let to = match self.index.get(&tr.target) {
                Some(&i) => i,
                None => {
                    let i = self.graph.vertices.len();
                    self.index.insert(tr.target.clone(), i);
                    self.graph.vertices.push(tr.target);
                    i
                }
            };
            self.graph.edges.push(OsgEdge {
                from,
                letter: tr.letter,
                index: tr.index,
                period: tr.period,
                to,
            });
        }
        self.graph.expanded += 1;
        true
    }

    /// The graph built so far.
    pub fn graph(&self) -> &OsgGraph {
        &self.graph
    }

    pub fn finish(mut self) -> OsgGraph {
        self.graph.complete = !self.has_pending();
        self.graph
    }
}

/// Builds `Φ(t)`, expanding at most `max_vertices` vertices.
pub fn build_osg(t: &Transformation, max_vertices: usize) -> OsgGraph {
    build_osg_capped(t, max_vertices, usize::MAX)
}

/// [`build_osg`] that also stops at the first vertex whose expansion needs
/// a product of more than `state_cap` states.
pub fn build_osg_capped(t: &Transformation, max_vertices: usize, state_cap: usize) -> OsgGraph {
    let mut builder = OsgBuilder::with_state_cap(t, state_cap);
    while builder.graph.expanded < max_vertices && builder.expand_next() {}
    builder.finish()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleFlag {
    Trivial,
    /// Some internal edge has `m > 0` or `ℓ > 1`.
    Costly,
}

#[derive(Debug, Clone)]
pub struct CycleFlags {
    pub sccs: Sccs,
    pub flags: Vec<CycleFlag>,
    /// A costly edge inside a strongly connected component, if any.
    pub witness: Option<OsgEdge>,
}

impl CycleFlags {
    pub fn any_costly(&self) -> bool {
        self.witness.is_some()
    }
}

pub fn cycle_flags(g: &OsgGraph) -> CycleFlags {
    let sccs = tarjan(&g.adjacency());
    let mut flags = vec![CycleFlag::Trivial; sccs.count];
    let mut witness = None;
    for e in &g.edges {
        let c = sccs.component[e.from];
        if c == sccs.component[e.to] && e.is_costly() {
            flags[c] = CycleFlag::Costly;
            witness.get_or_insert(*e);
        }
    }
    CycleFlags {
        sccs,
        flags,
        witness,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCost {
    pub i_minus: BigUint,
    pub i_plus: BigUint,
    pub period: BigUint,
}

impl WalkCost {
    pub fn empty() -> Self {
        WalkCost {
            i_minus: BigUint::zero(),
            i_plus: BigUint::zero(),
            period: BigUint::one(),
        }
    }
}

/// Maxima of the index costs and lcm of the period costs over all walks
/// from the root.
///
/// Requires every cycle to be trivial: cycle edges then carry `(0, 1)` and
/// contribute nothing, so walks reduce to paths in the condensation.
pub fn walk_costs(g: &OsgGraph) -> Result<WalkCost> {
    let flags = cycle_flags(g);
    if flags.any_costly() {
        return Err(Error::InfiniteCosts);
    }
    let Sccs { component, count } = &flags.sccs;
    let count = *count;
    let mut out: Vec<Vec<&OsgEdge>> = vec![Vec::new(); count];
    for e in &g.edges {
        if component[e.from] != component[e.to] {
            out[component[e.from]].push(e);
        }
    }

    // sup-index and period: backward over the condensation, sinks first
    let mut i_plus = vec![BigUint::zero(); count];
    let mut period = vec![BigUint::one(); count];
    for c in 0..count {
        let mut best = BigUint::zero();
        let mut lcm = BigUint::one();
        for e in &out[c] {
            let d = component[e.to];
            let cand = BigUint::from(e.index) + BigUint::from(e.period) * &i_plus[d];
            if cand > best {
                best = cand;
            }
            lcm = lcm.lcm(&(BigUint::from(e.period) * &period[d]));
        }
        i_plus[c] = best;
        period[c] = lcm;
    }

    // inf-index: each term depends on the product of the periods before
    // it, so propagate (product -> best prefix cost) forward from the root
    let root = component[0];
    let mut frontier: Vec<HashMap<BigUint, BigUint>> = vec![HashMap::new(); count];
    frontier[root].insert(BigUint::one(), BigUint::zero());
    let mut i_minus = BigUint::zero();
    for c in (0..=root).rev() {
        let states = std::mem::take(&mut frontier[c]);
        for (product, cost) in states {
            if cost > i_minus {
                i_minus = cost.clone();
            }
            for e in &out[c] {
                let mut next_cost = cost.clone();
                if e.index > 0 {
                    next_cost += BigUint::from(e.index - 1) * &product + 1u32;
                }
                let next_product = &product * BigUint::from(e.period);
                let slot = frontier[component[e.to]]
                    .entry(next_product)
                    .or_insert_with(BigUint::zero);
                if next_cost > *slot {
                    *slot = next_cost;
                }
            }
        }
    }

    Ok(WalkCost {
        i_minus,
        i_plus: i_plus[root].clone(),
        period: period[root].clone(),
    })
}

/// Index and period of the cyclic semigroup generated by a transformation:
/// the least `index ≥ 1` and `period ≥ 1` with `t^index = t^(index+period)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerCycle {
    pub index: u64,
    pub period: u64,
}

/// Computes `t, t², t³, …` up to `t^max_power` and returns the first
/// repetition.
pub fn power_cycle(
    t: &Transformation,
    max_power: u64,
    state_cap: usize,
) -> Result<Option<PowerCycle>> {
    let mut seen: HashMap<Transformation, u64> = HashMap::new();
    let mut current = t.clone();
    for j in 1..=max_power {
        if current.state_count() > state_cap {
            return Err(Error::StateBlowup { limit: state_cap });
        }
        if let Some(&i) = seen.get(&current) {
            return Ok(Some(PowerCycle {
                index: i,
                period: j - i,
            }));
        }
        let next = current.compose(t)?;
        seen.insert(current, j);
        current = next;
    }
    Ok(None)
}

/// Least `i ≥ 1` with `t^i = t^(i+period_hint)`, searched up to
/// `max_index`, together with the least true period at that index.
///
/// `None` when no such `i ≤ max_index` exists.
pub fn power_oracle(
    t: &Transformation,
    period_hint: u64,
    max_index: u64,
    state_cap: usize,
) -> Result<Option<PowerCycle>> {
    assert!(period_hint >= 1, "period hint must be positive");
    let found = power_cycle(t, max_index.saturating_add(period_hint), state_cap)?;
    Ok(found.filter(|c| c.index <= max_index && period_hint.is_multiple_of(c.period)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderVerdict {
    Infinite {
        /// A costly edge lying on a cycle.
        witness: OsgEdge,
        witness_vertex: OsgVertex,
    },
    Finite {
        period: BigUint,
        index_lower: BigUint,
        index_upper: BigUint,
        /// Least `i ≥ 0` with `t^i = t^(i+period)`, where `t⁰` is the
        /// identity.
        exact_index: Option<BigUint>,
    },
    Inconclusive {
        vertices_explored: usize,
    },
}

#[derive(Debug, Clone)]
pub struct OrderConfig {
    /// Cap on expanded vertices of the orbit signalizer graph.
    pub max_vertices: usize,
    /// Cap on the size of the products built while expanding a vertex.
    pub max_vertex_states: usize,
    /// Run the power oracle to pin down the exact index.
    pub exact_index: bool,
    /// Per-power state cap for the oracle.
    pub oracle_state_cap: usize,
    /// Upper limit on the index the oracle will search for.
    pub oracle_max_index: u64,
}

impl Default for OrderConfig {
    fn default() -> Self {
        OrderConfig {
            max_vertices: 10_000,
            max_vertex_states: 20_000,
            exact_index: true,
            oracle_state_cap: 100_000,
            oracle_max_index: 100_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrderReport {
    pub verdict: OrderVerdict,
    /// Activity class, when it could be computed. Bounded classes
    /// (`SPol(0)` and below) guarantee a finite graph.
    pub class: Option<GrowthClass>,
    pub graph: OsgGraph,
    pub costs: Option<WalkCost>,
    /// The oracle's raw answer, when it was run and succeeded.
    pub oracle: Option<PowerCycle>,
    /// Why the exact index is missing, if it is.
    pub oracle_error: Option<Error>,
}

impl OrderReport {
    pub fn guaranteed_finite_graph(&self) -> bool {
        matches!(self.class, Some(GrowthClass::Polynomial { degree }) if degree <= 0)
    }
}

pub fn decide_order(t: &Transformation, config: &OrderConfig) -> OrderReport {
    let class = classify(t).ok();
    let mut builder = OsgBuilder::with_state_cap(t, config.max_vertex_states);
    let mut checkpoint = 1;
    let mut early = None;
    while builder.graph().expanded() < config.max_vertices && builder.expand_next() {
        // a costly cycle in the explored part is already conclusive
        if builder.graph().expanded() == checkpoint {
            checkpoint *= 2;
            let flags = cycle_flags(builder.graph());
            if let Some(w) = flags.witness {
                early = Some(w);
                break;
            }
        }
    }
    let graph = builder.finish();
    let witness = early.or_else(|| cycle_flags(&graph).witness);

    let mut report = OrderReport {
        verdict: OrderVerdict::Inconclusive {
            vertices_explored: graph.expanded(),
        },
        class,
        costs: None,
        oracle: None,
        oracle_error: None,
        graph,
    };
    if let Some(w) = witness {
        report.verdict = OrderVerdict::Infinite {
            witness: w,
            witness_vertex: report.graph.vertices[w.from].clone(),
        };
        return report;
    }
    if !report.graph.is_complete() {
        return report;
    }
    let costs = walk_costs(&report.graph).expect("no costly cycle");
    let mut exact_index = None;
    if config.exact_index {
        match exact_index_of(t, &costs, config) {
            Ok((cycle, index)) => {
                report.oracle = Some(cycle);
                exact_index = Some(index);
            }
            Err(e) => report.oracle_error = Some(e),
        }
    }
    report.verdict = OrderVerdict::Finite {
        period: costs.period.clone(),
        index_lower: costs.i_minus.clone(),
        index_upper: costs.i_plus.clone(),
        exact_index,
    };
    report.costs = Some(costs);
    report
}

fn exact_index_of(
    t: &Transformation,
    costs: &WalkCost,
    config: &OrderConfig,
) -> Result<(PowerCycle, BigUint)> {
    let cap = Error::StateBlowup {
        limit: config.oracle_state_cap,
    };
    let period = costs.period.to_u64().ok_or_else(|| cap.clone())?;
    let bound = costs
        .i_plus
        .to_u64()
        .map(|i| i.min(config.oracle_max_index).max(1))
        .unwrap_or(config.oracle_max_index);
    let cycle = power_oracle(t, period, bound, config.oracle_state_cap)?.ok_or(cap)?;
    let index = if cycle.index == 1 && t.power(period).is_identity() {
        0
    } else {
        cycle.index
    };
    Ok((cycle, BigUint::from(index)))
}
