//! Mutation-graph search, periodicity detection and audits.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seed::QuantumSeed;
use crate::torus::{ExponentVector, TorusElement};
use crate::wire::{content_key, SeedState};

/// Node budgets and search knobs for [`mutation_graph`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExploreOptions {
    /// Longest mutation sequence explored.
    pub depth: usize,
    /// Identify seeds that agree up to a permutation of exchangeable indices.
    pub fold: bool,
    /// Expand each BFS level on the rayon pool.
    pub parallel: bool,
    pub max_nodes: usize,
    /// Largest number of terms allowed in a single cluster variable.
    pub max_terms: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        Self {
            depth: 4,
            fold: false,
            parallel: false,
            max_nodes: 10_000,
            max_terms: 50_000,
        }
    }
}

impl ExploreOptions {
    pub fn depth(depth: usize) -> Self {
        Self {
            depth,
            ..Self::default()
        }
    }
}

/// Largest index set for which relabeling is searched (`|K_ex|!` candidates).
pub const MAX_FOLD_RANK: usize = 8;

#[derive(Clone, Debug)]
pub struct GraphNode {
    pub seed: QuantumSeed,
    /// BFS distance from the root.
    pub depth: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct GraphEdge {
    pub from: usize,
    pub k: usize,
    pub to: usize,
}

/// Seeds reached from a root by mutation; node 0 is the root.
#[derive(Clone, Debug)]
pub struct MutationGraph {
    pub nodes: Vec<GraphNode>,
    /// Sorted; every edge `(u, k, w)` has a partner `(w, k', u)`.
    pub edges: Vec<GraphEdge>,
    pub folded: bool,
}

impl MutationGraph {
    pub fn root(&self) -> &QuantumSeed {
        &self.nodes[0].seed
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Every edge has a reverse edge.
    pub fn is_symmetric(&self) -> bool {
        let set: BTreeSet<(usize, usize)> = self.edges.iter().map(|e| (e.from, e.to)).collect();
        self.edges.iter().all(|e| set.contains(&(e.to, e.from)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Node {
            id: usize,
            depth: usize,
            seed: SeedState,
        }
        #[derive(Serialize)]
        struct Graph<'a> {
            folded: bool,
            nodes: Vec<Node>,
            edges: &'a [GraphEdge],
        }
        serde_json::to_value(Graph {
            folded: self.folded,
            nodes: self
                .nodes
                .iter()
                .enumerate()
                .map(|(id, n)| Node {
                    id,
                    depth: n.depth,
                    seed: SeedState::of(&n.seed),
                })
                .collect(),
            edges: &self.edges,
        })
        .expect("graph serializes")
    }

    /// The exchange graph in DOT, one undirected edge per mutation pair.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph exchange {\n");
        for (id, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(out, "  n{id} [label=\"{id}\\nd={}\"];", n.depth);
        }
        for e in &self.edges {
            if e.from <= e.to {
                let _ = writeln!(out, "  n{} -- n{} [label=\"{}\"];", e.from, e.to, e.k);
            }
        }
        out.push_str("}\n");
        out
    }
}

fn canonical_key(seed: &QuantumSeed, fold: bool) -> String {
    if !fold {
        return content_key(seed);
    }
    seed.relabelings()
        .iter()
        .map(|p| content_key(&seed.permuted(p)))
        .min()
        .expect("at least the identity relabeling")
}

fn check_terms(seed: &QuantumSeed, max_terms: usize) -> Result<()> {
    match seed.vars().iter().map(TorusElement::term_count).max() {
        Some(t) if t > max_terms => Err(Error::BudgetExceeded(format!(
            "cluster variable with {t} terms exceeds the limit of {max_terms}"
        ))),
        _ => Ok(()),
    }
}

/// Breadth-first closure of all mutation sequences of length `<= depth`,
/// with nodes deduplicated by exact seed content (or up to relabeling when
/// `fold` is set). Node numbering is independent of `parallel`.
pub fn mutation_graph(seed: &QuantumSeed, opts: &ExploreOptions) -> Result<MutationGraph> {
    if opts.fold && seed.indices().len() > MAX_FOLD_RANK {
        return Err(Error::BudgetExceeded(format!(
            "relabeling search supports at most {MAX_FOLD_RANK} indices"
        )));
    }
    let directions = seed.indices().ex_labels();
    let mut nodes = vec![GraphNode {
        seed: seed.clone(),
        depth: 0,
    }];
    let mut index: HashMap<String, usize> = HashMap::new();
    index.insert(canonical_key(seed, opts.fold), 0);
    let mut edges = BTreeSet::new();
    let mut frontier = vec![0usize];

    for level in 1..=opts.depth {
        let tasks: Vec<(usize, usize)> = frontier
            .iter()
            .flat_map(|&u| directions.iter().map(move |&k| (u, k)))
            .collect();
        let expand = |&(u, k): &(usize, usize)| -> Result<(QuantumSeed, String)> {
            let child = nodes[u].seed.mutate(k)?;
            check_terms(&child, opts.max_terms)?;
            let key = canonical_key(&child, opts.fold);
            Ok((child, key))
        };
        let results: Vec<Result<(QuantumSeed, String)>> = if opts.parallel {
            tasks.par_iter().map(expand).collect()
        } else {
            tasks.iter().map(expand).collect()
        };

        let mut next = Vec::new();
        for (&(u, k), res) in tasks.iter().zip(results) {
            let (child, key) = res?;
            let w = match index.get(&key) {
                Some(&w) => w,
                None => {
                    if nodes.len() >= opts.max_nodes {
                        return Err(Error::BudgetExceeded(format!(
                            "more than {} nodes",
                            opts.max_nodes
                        )));
                    }
                    let w = nodes.len();
                    nodes.push(GraphNode {
                        seed: child.clone(),
                        depth: level,
                    });
                    index.insert(key, w);
                    next.push(w);
                    w
                }
            };
            let back = if opts.fold {
                let perm = child
                    .relabeling_to(&nodes[w].seed)
                    .ok_or(Error::InternalMismatch("folded seeds with no relabeling"))?;
                let idx = child.indices();
                idx.label(perm[idx.position(k).expect("direction in K")])
            } else {
                k
            };
            edges.insert(GraphEdge { from: u, k, to: w });
            edges.insert(GraphEdge {
                from: w,
                k: back,
                to: u,
            });
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    Ok(MutationGraph {
        nodes,
        edges: edges.into_iter().collect(),
        folded: opts.fold,
    })
}

/// All cluster variables occurring in the graph, deduplicated and sorted.
pub fn collect_variables(graph: &MutationGraph) -> Vec<TorusElement> {
    let set: BTreeSet<&TorusElement> = graph.nodes.iter().flat_map(|n| n.seed.vars()).collect();
    set.into_iter().cloned().collect()
}

/// Smallest number of mutations, applying `sequence` cyclically, after which
/// the starting seed recurs (exactly, or up to relabeling with `fold`).
/// `None` when no recurrence happens within `bound` mutations.
///
/// Steps are first screened with the classical shadow of the seed: `(L, B̃)`
/// together with the values of the variables at `v = 1` at a fixed point
/// modulo a prime. A recurring seed has a recurring shadow, so only steps
/// that pass the screen are compared exactly.
pub fn detect_period(
    seed: &QuantumSeed,
    sequence: &[usize],
    bound: usize,
    fold: bool,
) -> Result<Option<usize>> {
    if sequence.is_empty() {
        return Err(Error::Parse("empty mutation sequence".into()));
    }
    if fold && seed.indices().len() > MAX_FOLD_RANK {
        return Err(Error::BudgetExceeded(format!(
            "relabeling search supports at most {MAX_FOLD_RANK} indices"
        )));
    }
    for &k in sequence {
        seed.indices().ex_slot(k)?;
    }
    let candidates = match shadow::candidates(seed, sequence, bound, fold)? {
        Some(c) => c,
        None => (1..=bound).collect(),
    };
    let Some(&last) = candidates.last() else {
        return Ok(None);
    };
    let mut current = seed.clone();
    for step in 1..=last {
        current = current.mutate(sequence[(step - 1) % sequence.len()])?;
        if candidates.binary_search(&step).is_err() {
            continue;
        }
        let recurs = if fold {
            current.relabeling_to(seed).is_some()
        } else {
            current == *seed
        };
        if recurs {
            return Ok(Some(step));
        }
    }
    Ok(None)
}

/// Classical mutation of cluster values in `Z/p` for `p = 2^61 - 1`.
mod shadow {
    use super::*;
    use crate::mutation::CompatiblePair;

    const P: u64 = (1 << 61) - 1;

    fn mul(a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % P as u128) as u64
    }

    fn pow(mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(a: u64) -> Option<u64> {
        (a != 0).then(|| pow(a, P - 2))
    }

    /// Deterministic, unstructured starting values (splitmix64).
    fn point(n: usize) -> Vec<u64> {
        let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
        (0..n)
            .map(|_| {
                state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
                (z ^ (z >> 31)) % (P - 2) + 2
            })
            .collect()
    }

    fn mutate(pair: &CompatiblePair, x: &mut [u64], k: usize) -> Result<Option<CompatiblePair>> {
        let (kp, kc) = pair.indices().ex_slot(k)?;
        let b = pair.b();
        let (mut plus, mut minus) = (1, 1);
        for (i, &xi) in x.iter().enumerate() {
            let e = b[(i, kc)];
            if e > 0 {
                plus = mul(plus, pow(xi, e as u64));
            } else if e < 0 {
                minus = mul(minus, pow(xi, e.unsigned_abs()));
            }
        }
        let Some(inv_k) = inv(x[kp]) else {
            return Ok(None);
        };
        x[kp] = mul((plus + minus) % P, inv_k);
        pair.mutate(k).map(Some)
    }

    /// Steps at which the shadow recurs, or `None` if the shadow is
    /// unusable (a value vanished modulo `p`).
    pub(super) fn candidates(
        seed: &QuantumSeed,
        sequence: &[usize],
        bound: usize,
        fold: bool,
    ) -> Result<Option<Vec<usize>>> {
        let start = point(seed.indices().len());
        let mut sorted_start = start.clone();
        sorted_start.sort_unstable();
        let mut pair = seed.pair().clone();
        let mut x = start.clone();
        let mut out = Vec::new();
        for step in 1..=bound {
            let k = sequence[(step - 1) % sequence.len()];
            pair = match mutate(&pair, &mut x, k)? {
                Some(p) => p,
                None => return Ok(None),
            };
            let hit = if fold {
                let mut sorted = x.clone();
                sorted.sort_unstable();
                sorted == sorted_start
            } else {
                pair == *seed.pair() && x == start
            };
            if hit {
                out.push(step);
            }
        }
        Ok(Some(out))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum AuditKind {
    NotLaurent,
    NotPositive,
    NotBarInvariant,
    QuasiCommutation {
        with: usize,
        expected: i64,
        found: Option<i64>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditFailure {
    pub node: usize,
    /// Label of the offending variable.
    pub index: usize,
    #[serde(flatten)]
    pub kind: AuditKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub nodes: usize,
    pub variables_checked: usize,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every variable at every node: nonzero element of the root torus,
/// coefficients in `Z_{≥0}[v^±1]`, bar-invariance, and quasi-commutation
/// against the node's `L`.
pub fn audit_graph(graph: &MutationGraph) -> Result<AuditReport> {
    let root_torus = graph.root().torus().clone();
    let mut failures = Vec::new();
    let mut checked = 0;
    for (id, node) in graph.nodes.iter().enumerate() {
        let seed = &node.seed;
        let labels = seed.indices().labels();
        let vars = seed.vars();
        for (i, x) in vars.iter().enumerate() {
            checked += 1;
            let fail = |kind| AuditFailure {
                node: id,
                index: labels[i],
                kind,
            };
            if x.is_zero() || x.ambient() != root_torus.matrix() {
                failures.push(fail(AuditKind::NotLaurent));
            }
            if !x.has_nonneg_coefficients() {
                failures.push(fail(AuditKind::NotPositive));
            }
            if !x.is_bar_invariant() {
                failures.push(fail(AuditKind::NotBarInvariant));
            }
            for (j, y) in vars.iter().enumerate().skip(i + 1) {
                let expected = seed.l()[(i, j)];
                let found = x.qcommute(y)?;
                if found != Some(expected) {
                    failures.push(fail(AuditKind::QuasiCommutation {
                        with: labels[j],
                        expected,
                        found,
                    }));
                }
            }
        }
    }
    Ok(AuditReport {
        nodes: graph.nodes.len(),
        variables_checked: checked,
        failures,
    })
}

/// The classical shadow at `v = 1`: a commutative Laurent polynomial.
pub fn specialize_at_one(x: &TorusElement) -> BTreeMap<ExponentVector, BigInt> {
    x.terms()
        .map(|(a, c)| (a.clone(), c.eval_at_one()))
        .filter(|(_, c)| c != &BigInt::default())
        .collect()
}

/// Summary numbers for a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub nodes: usize,
    pub edges: usize,
    pub max_depth: usize,
    pub distinct_variables: usize,
    pub max_terms: usize,
}

pub fn graph_stats(graph: &MutationGraph) -> GraphStats {
    let vars = collect_variables(graph);
    GraphStats {
        nodes: graph.nodes.len(),
        edges: graph.edges.len(),
        max_depth: graph.nodes.iter().map(|n| n.depth).max().unwrap_or(0),
        distinct_variables: vars.len(),
        max_terms: vars.iter().map(TorusElement::term_count).max().unwrap_or(0),
    }
}
