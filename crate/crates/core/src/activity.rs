//! Activity growth of a transformation.
//!
//! The activity `α(n)` counts output words of length `n` produced by runs
//! that end in a nontrivial state. It equals the number of length-`n` paths
//! from the root of the subset construction applied to the pruned output
//! automaton, which is what [`DetOut`] holds. Classification reads the
//! SCC structure of that automaton:
//!
//! * an SCC with more internal edges than vertices makes the growth
//!   exponential, at the rate of its Perron eigenvalue;
//! * otherwise the growth is polynomial, of degree one less than the longest
//!   chain of cyclic SCCs.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::{tarjan, Sccs};
use crate::machine::{Transformation, Words};

#[derive(Debug, Clone, PartialEq)]
pub struct ActivityConfig {
    /// Cap on the number of subsets built by determinization.
    pub max_subsets: usize,
    /// Cap on `k^n` for brute-force enumeration.
    pub brute_force_budget: u128,
    /// Relative precision of the Perron eigenvalue.
    pub precision: f64,
    pub max_iterations: usize,
}

impl Default for ActivityConfig {
    fn default() -> Self {
        ActivityConfig {
            max_subsets: 1_000_000,
            brute_force_budget: 1_000_000,
            precision: 1e-9,
            max_iterations: 100_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct NfaTransition {
    pub from: usize,
    /// Output letter, 1-based.
    pub label: usize,
    pub to: usize,
    /// Number of input letters producing this transition.
    pub multiplicity: usize,
}

/// Output automaton of a canonical machine with the identity state removed.
///
/// States are the machine's canonical state indices; all are final.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrunedOutputNfa {
    alphabet_size: usize,
    states: Vec<usize>,
    transitions: Vec<NfaTransition>,
    // machine state * k + label (0-based) -> sorted distinct targets
    successors: Vec<Vec<usize>>,
}

impl PrunedOutputNfa {
    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn states(&self) -> &[usize] {
        &self.states
    }

    pub fn transitions(&self) -> &[NfaTransition] {
        &self.transitions
    }

    pub fn contains_state(&self, q: usize) -> bool {
        self.states.binary_search(&q).is_ok()
    }

    /// Nontrivial states reachable from `q` by one transition labeled
    /// `label` (1-based).
    pub fn successors(&self, q: usize, label: usize) -> &[usize] {
        self.successors
            .get(q * self.alphabet_size + label - 1)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }
}

pub fn pruned_output(t: &Transformation) -> PrunedOutputNfa {
    let k = t.alphabet_size();
    let n = t.state_count();
    let identity = t.identity_state();
    let states: Vec<usize> = (0..n).filter(|&q| Some(q) != identity).collect();
    let mut counts: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut successors = vec![Vec::new(); n * k];
    for &p in &states {
        for x in 1..=k {
            let q = t.target(p, x);
            if Some(q) == identity {
                continue;
            }
            let y = t.output(p, x);
            *counts.entry((p, y, q)).or_default() += 1;
            successors[p * k + y - 1].push(q);
        }
    }
    for s in &mut successors {
        s.sort_unstable();
        s.dedup();
    }
    let transitions = counts
        .into_iter()
        .map(|((from, label, to), multiplicity)| NfaTransition {
            from,
            label,
            to,
            multiplicity,
        })
        .collect();
    PrunedOutputNfa {
        alphabet_size: k,
        states,
        transitions,
        successors,
    }
}

/// Subset construction of a [`PrunedOutputNfa`], restricted to subsets
/// reachable from its roots.
///
/// Subset 0 is the first root when the automaton is nonempty; path counts
/// are taken from it. Empty successor sets are not stored; the transition
/// is simply absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DetOut {
    alphabet_size: usize,
    subsets: Vec<Vec<usize>>,
    table: Vec<Option<usize>>,
    roots: Vec<usize>,
}

/// Accessible subset construction from the single root `{root_state}`.
///
/// A trivial root gives the empty automaton.
pub fn determinize(nfa: &PrunedOutputNfa, root_state: usize, max_subsets: usize) -> Result<DetOut> {
    if nfa.contains_state(root_state) {
        determinize_from(nfa, &[root_state], max_subsets)
    } else {
        determinize_from(nfa, &[], max_subsets)
    }
}

/// Subset construction of the whole automaton: every singleton `{q}` of a
/// nontrivial state is a root, in canonical order. This is the automaton
/// whose restriction to the subsets reachable from `{q}` counts the
/// activity of state `q`.
pub fn determinize_all(nfa: &PrunedOutputNfa, max_subsets: usize) -> Result<DetOut> {
    determinize_from(nfa, nfa.states(), max_subsets)
}

fn determinize_from(nfa: &PrunedOutputNfa, roots: &[usize], max_subsets: usize) -> Result<DetOut> {
    let k = nfa.alphabet_size;
    let mut det = DetOut {
        alphabet_size: k,
        subsets: Vec::new(),
        table: Vec::new(),
        roots: Vec::new(),
    };
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut intern = |det: &mut DetOut, subset: Vec<usize>| -> Result<usize> {
        if let Some(&id) = index.get(&subset) {
            return Ok(id);
        }
        if det.subsets.len() >= max_subsets {
            return Err(Error::SubsetBlowup { limit: max_subsets });
        }
        let id = det.subsets.len();
        index.insert(subset.clone(), id);
        det.subsets.push(subset);
        Ok(id)
    };
    let mut i = 0;
    for &root in roots {
        let id = intern(&mut det, vec![root])?;
        det.roots.push(id);
        while i < det.subsets.len() {
            for y in 1..=k {
                let mut next: Vec<usize> = det.subsets[i]
                    .iter()
                    .flat_map(|&p| nfa.successors(p, y).iter().copied())
                    .collect();
                if next.is_empty() {
                    det.table.push(None);
                    continue;
                }
                next.sort_unstable();
                next.dedup();
                let id = intern(&mut det, next)?;
                det.table.push(Some(id));
            }
            i += 1;
        }
    }
    Ok(det)
}

impl DetOut {
    /// Determinization of `t`'s pruned output automaton from its root.
    pub fn of(t: &Transformation, max_subsets: usize) -> Result<DetOut> {
        determinize(&pruned_output(t), 0, max_subsets)
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subsets(&self) -> &[Vec<usize>] {
        &self.subsets
    }

    /// Indices of the root subsets.
    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Successor of subset `i` on `letter` (1-based), if nonempty.
    pub fn successor(&self, i: usize, letter: usize) -> Option<usize> {
        self.table[i * self.alphabet_size + letter - 1]
    }

    /// `(from, letter, to)` for every stored transition, letters 1-based.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let k = self.alphabet_size;
        self.table
            .iter()
            .enumerate()
            .filter_map(move |(i, to)| to.map(|to| (i / k, i % k + 1, to)))
    }

    pub fn transition_count(&self) -> usize {
        self.table.iter().filter(|t| t.is_some()).count()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (from, _, to) in self.edges() {
            adj[from].push(to);
        }
        adj
    }

    /// `α(1..=upto)`: numbers of paths of each length from the root.
    pub fn series(&self, upto: usize) -> Vec<BigUint> {
        let n = self.len();
        let mut ways = vec![BigUint::one(); n];
        let mut series = Vec::with_capacity(upto);
        for _ in 0..upto {
            if n == 0 {
                series.push(BigUint::zero());
                continue;
            }
            let next: Vec<BigUint> = (0..n)
                .map(|i| {
                    (1..=self.alphabet_size)
                        .filter_map(|y| self.successor(i, y))
                        .fold(BigUint::zero(), |acc, j| acc + &ways[j])
                })
                .collect();
            ways = next;
            series.push(ways[0].clone());
        }
        series
    }

    /// Number of length-`n` paths from the root; `α(0)` is 1 unless the
    /// automaton is empty.
    pub fn path_count(&self, n: usize) -> BigUint {
        if n == 0 {
            return if self.is_empty() {
                BigUint::zero()
            } else {
                BigUint::one()
            };
        }
        self.series(n).pop().unwrap_or_default()
    }

    /// SCC statistics used by classification.
    pub fn structure(&self) -> Structure {
        let adj = self.adjacency();
        let sccs = tarjan(&adj);
        let mut vertices = vec![0usize; sccs.count];
        let mut internal = vec![0usize; sccs.count];
        for (v, out) in adj.iter().enumerate() {
            let c = sccs.component[v];
            vertices[c] += 1;
            internal[c] += out.iter().filter(|&&w| sccs.component[w] == c).count();
        }
        let cyclic: Vec<bool> = internal.iter().map(|&e| e > 0).collect();
        let entangled: Vec<bool> = internal
            .iter()
            .zip(&vertices)
            .map(|(&e, &v)| e > v)
            .collect();
        // longest chain of cyclic components, sinks first
        let mut chain = vec![0usize; sccs.count];
        let members = sccs.members();
        for c in 0..sccs.count {
            let best = members[c]
                .iter()
                .flat_map(|&v| adj[v].iter())
                .map(|&w| sccs.component[w])
                .filter(|&d| d != c)
                .map(|d| chain[d])
                .max()
                .unwrap_or(0);
            chain[c] = best + usize::from(cyclic[c]);
        }
        let longest_chain = if self.is_empty() {
            0
        } else {
            chain[sccs.component[0]]
        };
        Structure {
            sccs,
            cyclic,
            entangled,
            longest_chain,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Structure {
    pub sccs: Sccs,
    /// Component has at least one internal edge.
    pub cyclic: Vec<bool>,
    /// Component is not a single simple cycle (more edges than vertices).
    pub entangled: Vec<bool>,
    /// Maximum number of cyclic components on a path from the root.
    pub longest_chain: usize,
}

impl Structure {
    pub fn is_exponential(&self) -> bool {
        self.entangled.iter().any(|&e| e)
    }

    pub fn cyclic_count(&self) -> usize {
        self.cyclic.iter().filter(|&&c| c).count()
    }
}

/// `α(n)` for `t`, computed by path counting on [`DetOut`].
pub fn activity(t: &Transformation, n: usize) -> Result<BigUint> {
    Ok(DetOut::of(t, ActivityConfig::default().max_subsets)?.path_count(n))
}

/// `α(1..=upto)` for `t`.
pub fn activity_series(
    t: &Transformation,
    upto: usize,
    config: &ActivityConfig,
) -> Result<Vec<BigUint>> {
    Ok(DetOut::of(t, config.max_subsets)?.series(upto))
}

/// `α(n)` straight from the definition, by enumerating all `k^n` inputs.
pub fn brute_force_activity(t: &Transformation, n: usize, budget: u128) -> Result<BigUint> {
    let k = t.alphabet_size();
    let needed = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let mut images: HashSet<Vec<usize>> = HashSet::new();
    for u in Words::new(k, n) {
        let q = t.state_after(&u)?;
        if !t.is_identity_state(q) {
            images.insert(t.apply(&u)?);
        }
    }
    Ok(BigUint::from(images.len()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GrowthClass {
    /// Activity bounded by a polynomial of this degree; `-1` means the
    /// activity is eventually zero.
    Polynomial { degree: i64 },
    /// Activity grows like `lambda^n`; `rate = ln(lambda)`.
    Exponential { lambda: f64, rate: f64 },
}

impl GrowthClass {
    pub fn degree(&self) -> Option<i64> {
        match *self {
            GrowthClass::Polynomial { degree } => Some(degree),
            GrowthClass::Exponential { .. } => None,
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, GrowthClass::Polynomial { .. })
    }
}

impl fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthClass::Polynomial { degree } => write!(f, "SPol({degree})"),
            GrowthClass::Exponential { lambda, rate } => {
                write!(f, "SExp(rate={rate:.6}, lambda={lambda:.6})")
            }
        }
    }
}

pub fn classify(t: &Transformation) -> Result<GrowthClass> {
    let config = ActivityConfig::default();
    classify_detout(&DetOut::of(t, config.max_subsets)?, &config)
}

pub fn classify_detout(det: &DetOut, config: &ActivityConfig) -> Result<GrowthClass> {
    let structure = det.structure();
    if structure.is_exponential() {
        let g = perron_of_structure(det, &structure, config)?;
        Ok(GrowthClass::Exponential {
            lambda: g.lambda,
            rate: g.rate,
        })
    } else {
        Ok(GrowthClass::Polynomial {
            degree: structure.longest_chain as i64 - 1,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRate {
    pub lambda: f64,
    /// Natural logarithm of `lambda`.
    pub rate: f64,
    /// Certified bracket around `lambda`.
    pub lower: f64,
    pub upper: f64,
}

/// Perron eigenvalue of `t`'s [`DetOut`] adjacency matrix; `1` for
/// polynomial growth.
pub fn growth_rate(t: &Transformation, precision: f64) -> Result<GrowthRate> {
    let config = ActivityConfig {
        precision,
        ..ActivityConfig::default()
    };
    growth_rate_detout(&DetOut::of(t, config.max_subsets)?, &config)
}

pub fn growth_rate_detout(det: &DetOut, config: &ActivityConfig) -> Result<GrowthRate> {
    let structure = det.structure();
    if !structure.is_exponential() {
        return Ok(GrowthRate {
            lambda: 1.0,
            rate: 0.0,
            lower: 1.0,
            upper: 1.0,
        });
    }
    perron_of_structure(det, &structure, config)
}

/// The spectral radius of a reducible matrix is the largest radius of its
/// irreducible diagonal blocks, so each entangled SCC is handled alone.
fn perron_of_structure(
    det: &DetOut,
    structure: &Structure,
    config: &ActivityConfig,
) -> Result<GrowthRate> {
    let members = structure.sccs.members();
    let mut best: Option<GrowthRate> = None;
    for (c, vs) in members.iter().enumerate() {
        if !structure.entangled[c] {
            continue;
        }
        let mut local = HashMap::with_capacity(vs.len());
        for (i, &v) in vs.iter().enumerate() {
            local.insert(v, i);
        }
        let mut edges = Vec::new();
        for &v in vs {
            for y in 1..=det.alphabet_size {
                if let Some(w) = det.successor(v, y) {
                    if let Some(&j) = local.get(&w) {
                        edges.push((local[&v], j));
                    }
                }
            }
        }
        let g = perron_irreducible(vs.len(), &edges, config.precision, config.max_iterations)?;
        if best.is_none_or(|b| g.lambda > b.lambda) {
            best = Some(g);
        }
    }
    Ok(best.expect("an entangled component exists"))
}

/// Power iteration on `A + I` for an irreducible nonnegative `A` given by
/// its edge list. The shift makes the matrix primitive so the iteration
/// converges; the Collatz–Wielandt quotients `min (Mx)_i/x_i` and
/// `max (Mx)_i/x_i` bracket the eigenvalue at every step.
pub fn perron_irreducible(
    n: usize,
    edges: &[(usize, usize)],
    precision: f64,
    max_iterations: usize,
) -> Result<GrowthRate> {
    let mut x = vec![1.0f64; n];
    let mut y = vec![0.0f64; n];
    let (mut lower, mut upper) = (0.0f64, f64::INFINITY);
    for _ in 0..max_iterations {
        y.copy_from_slice(&x);
        for &(i, j) in edges {
            y[i] += x[j];
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        lower = lower.max(lo - 1.0);
        upper = upper.min(hi - 1.0);
        if upper - lower <= precision * upper.max(1.0) {
            let lambda = 0.5 * (lower + upper);
            return Ok(GrowthRate {
                lambda,
                rate: lambda.ln(),
                lower,
                upper,
            });
        }
        let scale = y.iter().cloned().fold(0.0f64, f64::max);
        for i in 0..n {
            x[i] = y[i] / scale;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iterations,
        lower,
        upper,
    })
}
