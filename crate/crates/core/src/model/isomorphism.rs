//! Configuration isomorphism: a bijection on object ids preserving classes
//! and every link. Object ids are artifacts of construction order, so two
//! configurations built in different orders compare equal here.

use std::collections::{BTreeMap, HashMap};
use std::hash::{DefaultHasher, Hash, Hasher};

use super::class::{AssociationKind, ClassName};
use super::fact::{Fact, ObjectId};
use super::state::ConfigurationState;

/// Compact adjacency view: objects renumbered 0..n in id order.
struct Graph {
    ids: Vec<ObjectId>,
    classes: Vec<ClassName>,
    /// (association kind, neighbour index, direction: true = this is the first endpoint)
    adj: Vec<Vec<(AssociationKind, usize, bool)>>,
    edges: std::collections::HashSet<(AssociationKind, usize, usize)>,
}

impl Graph {
    fn new(state: &ConfigurationState) -> Graph {
        let ids: Vec<ObjectId> = state.objects().map(|(id, _)| id).collect();
        let classes = state.objects().map(|(_, c)| c).collect();
        let index: HashMap<ObjectId, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
        let mut adj = vec![Vec::new(); ids.len()];
        let mut edges = std::collections::HashSet::new();
        for fact in state.facts() {
            if let Some((kind, a, b)) = fact.as_link() {
                let (ia, ib) = (index[&a], index[&b]);
                adj[ia].push((kind, ib, true));
                adj[ib].push((kind, ia, false));
                edges.insert((kind, ia, ib));
            }
        }
        Graph { ids, classes, adj, edges }
    }

    /// Colour refinement seeded by class; returns stable colours.
    fn refine(&self) -> Vec<u64> {
        let mut colors: Vec<u64> = self.classes.iter().map(|c| *c as u64).collect();
        let mut distinct = count_distinct(&colors);
        loop {
            let next: Vec<u64> = (0..self.ids.len())
                .map(|v| {
                    let mut around: Vec<(AssociationKind, bool, u64)> = self.adj[v]
                        .iter()
                        .map(|&(k, u, dir)| (k, dir, colors[u]))
                        .collect();
                    around.sort();
                    let mut h = DefaultHasher::new();
                    colors[v].hash(&mut h);
                    around.hash(&mut h);
                    h.finish()
                })
                .collect();
            let d = count_distinct(&next);
            colors = next;
            if d == distinct {
                return colors;
            }
            distinct = d;
        }
    }
}

fn count_distinct(colors: &[u64]) -> usize {
    let mut v = colors.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// An isomorphism-invariant fingerprint. Isomorphic states always share it;
/// different fingerprints prove non-isomorphism.
pub fn invariant(state: &ConfigurationState) -> u64 {
    let g = Graph::new(state);
    let mut colors = g.refine();
    colors.sort_unstable();
    let mut h = DefaultHasher::new();
    colors.hash(&mut h);
    state.fact_count().hash(&mut h);
    h.finish()
}

pub fn are_isomorphic(a: &ConfigurationState, b: &ConfigurationState) -> bool {
    find_isomorphism(a, b).is_some()
}

/// Returns a mapping from ids of `a` to ids of `b`, if one exists.
pub fn find_isomorphism(
    a: &ConfigurationState,
    b: &ConfigurationState,
) -> Option<BTreeMap<ObjectId, ObjectId>> {
    if a.len() != b.len() || a.fact_count() != b.fact_count() {
        return None;
    }
    let (ga, gb) = (Graph::new(a), Graph::new(b));
    let (ca, cb) = (ga.refine(), gb.refine());
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return None;
    }
    // Match rarest colour classes first to keep the search narrow.
    let mut freq: HashMap<u64, usize> = HashMap::new();
    for c in &ca {
        *freq.entry(*c).or_default() += 1;
    }
    let mut order: Vec<usize> = (0..ga.ids.len()).collect();
    order.sort_by_key(|&v| (freq[&ca[v]], ca[v], v));

    let n = ga.ids.len();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    if extend(&ga, &gb, &ca, &cb, &order, 0, &mut map, &mut used) {
        Some(
            (0..n)
                .map(|v| (ga.ids[v], gb.ids[map[v]]))
                .collect(),
        )
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    ga: &Graph,
    gb: &Graph,
    ca: &[u64],
    cb: &[u64],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(depth) else { return true };
    for w in 0..gb.ids.len() {
        if used[w] || cb[w] != ca[v] {
            continue;
        }
        let consistent = ga.adj[v].iter().all(|&(kind, u, first)| {
            let mu = map[u];
            if mu == usize::MAX {
                return true;
            }
            let edge = if first { (kind, w, mu) } else { (kind, mu, w) };
            gb.edges.contains(&edge)
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend(ga, gb, ca, cb, order, depth + 1, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[w] = false;
    }
    false
}

/// Renames the objects of `state` by `mapping` (old id -> new id). Used to
/// produce permuted copies in tests and by callers comparing layouts.
pub fn relabel(
    state: &ConfigurationState,
    mapping: &BTreeMap<ObjectId, ObjectId>,
) -> Result<ConfigurationState, super::state::ModelError> {
    let facts: Vec<Fact> = state
        .facts()
        .into_iter()
        .map(|f| match f {
            Fact::IsA(id, c) => Fact::IsA(mapping[&id], c),
            Fact::RackFrame(a, b) => Fact::RackFrame(mapping[&a], mapping[&b]),
            Fact::FrameModule(a, b) => Fact::FrameModule(mapping[&a], mapping[&b]),
            Fact::ElementModule(a, b) => Fact::ElementModule(mapping[&a], mapping[&b]),
        })
        .collect();
    ConfigurationState::from_facts(&facts)
}
