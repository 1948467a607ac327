//! Monolithic generate-and-test: guess object counts within the domain
//! size, then backtrack over module placements, and test each complete
//! candidate with the validity checker. No step semantics.

use std::time::{Duration, Instant};

use crate::model::{
    is_valid, AssociationKind, ClassName, ConfigurationState, Fact, ObjectId,
    FRAME_MODULE_CAPACITY,
};

use super::{run_one, Approach, BenchResult, Instance};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaselineOutcome {
    Found(ConfigurationState),
    Exhausted,
    Timeout,
}

pub fn baseline_generate_and_test(instance: &Instance, timeout: Duration) -> BenchResult {
    run_one(Approach::Baseline, instance, timeout)
}

struct Shape {
    modules: Vec<ClassName>,
    /// element owning each module
    owners: Vec<ObjectId>,
    module_v: usize,
    singles: usize,
    doubles: usize,
}

impl Shape {
    fn frames(&self) -> usize {
        4 * self.singles + 8 * self.doubles
    }
}

/// Searches complete configurations of at most `domainsize` objects that
/// extend `initial`, which must hold elements only.
pub fn baseline_search(
    initial: &ConfigurationState,
    domainsize: usize,
    deadline: Option<Instant>,
) -> BaselineOutcome {
    if initial.objects().any(|(_, c)| !c.is_element()) {
        log::warn!("baseline search expects an input made of elements only");
        return BaselineOutcome::Exhausted;
    }
    let mut modules = Vec::new();
    let mut owners = Vec::new();
    for (e, c) in initial.objects() {
        let (m, n) = c.requirement().expect("element");
        for _ in 0..n {
            modules.push(m);
            owners.push(e);
        }
    }
    let elements = initial.len();
    let module_ii = modules.iter().filter(|&&m| m == ClassName::ModuleII).count();
    let fixed = elements + modules.len();
    if modules.is_empty() && fixed <= domainsize {
        return BaselineOutcome::Found(initial.clone());
    }
    let mut search = Placement { deadline, nodes: 0, timed_out: false };
    for total in fixed..=domainsize {
        let budget = total - fixed;
        for singles in 0..=budget / 5 {
            for doubles in 0..=(budget - 5 * singles) / 9 {
                let used = 5 * singles + 9 * doubles;
                let module_v = budget - used;
                let shape = Shape {
                    modules: modules.clone(),
                    owners: owners.clone(),
                    module_v,
                    singles,
                    doubles,
                };
                let frames = shape.frames();
                let feasible = frames > 0
                    && module_v <= frames
                    && module_v <= module_ii
                    && (module_ii == 0 || 4 * module_v >= module_ii)
                    && shape.modules.len() + module_v <= FRAME_MODULE_CAPACITY * frames;
                if !feasible {
                    continue;
                }
                if let Some(state) = search.run(initial, &shape) {
                    return BaselineOutcome::Found(state);
                }
                if search.timed_out {
                    return BaselineOutcome::Timeout;
                }
            }
        }
    }
    BaselineOutcome::Exhausted
}

struct Placement {
    deadline: Option<Instant>,
    nodes: u64,
    timed_out: bool,
}

impl Placement {
    fn run(&mut self, initial: &ConfigurationState, shape: &Shape) -> Option<ConfigurationState> {
        let frames = shape.frames();
        // moduleV k sits in frame k
        let mut load: Vec<usize> = (0..frames).map(|f| usize::from(f < shape.module_v)).collect();
        let mut has_ii = vec![false; frames];
        let mut assign = vec![usize::MAX; shape.modules.len()];
        let ii_left = shape.modules.iter().filter(|&&m| m == ClassName::ModuleII).count();
        self.place(initial, shape, 0, ii_left, &mut load, &mut has_ii, &mut assign)
    }

    #[allow(clippy::too_many_arguments)]
    fn place(
        &mut self,
        initial: &ConfigurationState,
        shape: &Shape,
        next: usize,
        ii_left: usize,
        load: &mut [usize],
        has_ii: &mut [bool],
        assign: &mut [usize],
    ) -> Option<ConfigurationState> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return None;
        }
        let lacking = (0..shape.module_v).filter(|&f| !has_ii[f]).count();
        if lacking > ii_left {
            return None;
        }
        if next == shape.modules.len() {
            let state = build(initial, shape, assign);
            return is_valid(&state).then_some(state);
        }
        let is_ii = shape.modules[next] == ClassName::ModuleII;
        let frames = if is_ii { shape.module_v } else { load.len() };
        let mut tried_empty = false;
        for f in 0..frames {
            if load[f] >= FRAME_MODULE_CAPACITY {
                continue;
            }
            if load[f] == 0 {
                // empty frames are interchangeable
                if tried_empty {
                    continue;
                }
                tried_empty = true;
            }
            load[f] += 1;
            let before = has_ii[f];
            has_ii[f] |= is_ii;
            assign[next] = f;
            let found = self.place(
                initial,
                shape,
                next + 1,
                ii_left - usize::from(is_ii),
                load,
                has_ii,
                assign,
            );
            if found.is_some() {
                return found;
            }
            load[f] -= 1;
            has_ii[f] = before;
            if self.timed_out {
                return None;
            }
        }
        None
    }
}

fn build(initial: &ConfigurationState, shape: &Shape, assign: &[usize]) -> ConfigurationState {
    let mut facts = initial.facts();
    let mut next = initial.next_id().0;
    let mut fresh = |class: ClassName, facts: &mut Vec<Fact>| {
        let id = ObjectId(next);
        next += 1;
        facts.push(Fact::IsA(id, class));
        id
    };
    let module_ids: Vec<ObjectId> =
        shape.modules.iter().map(|&m| fresh(m, &mut facts)).collect();
    let v_ids: Vec<ObjectId> =
        (0..shape.module_v).map(|_| fresh(ClassName::ModuleV, &mut facts)).collect();
    let frame_ids: Vec<ObjectId> =
        (0..shape.frames()).map(|_| fresh(ClassName::Frame, &mut facts)).collect();
    let racks: Vec<(ObjectId, usize)> = std::iter::repeat_n((ClassName::RackSingle, 4), shape.singles)
        .chain(std::iter::repeat_n((ClassName::RackDouble, 8), shape.doubles))
        .map(|(c, cap)| (fresh(c, &mut facts), cap))
        .collect();
    for (i, &m) in module_ids.iter().enumerate() {
        facts.push(Fact::link(AssociationKind::ElementModule, shape.owners[i], m));
        facts.push(Fact::link(AssociationKind::FrameModule, frame_ids[assign[i]], m));
    }
    for (k, &v) in v_ids.iter().enumerate() {
        facts.push(Fact::link(AssociationKind::FrameModule, frame_ids[k], v));
    }
    let mut frames = frame_ids.iter();
    for (rack, cap) in racks {
        for f in frames.by_ref().take(cap) {
            facts.push(Fact::link(AssociationKind::RackFrame, rack, *f));
        }
    }
    ConfigurationState::from_facts(&facts).expect("baseline builds well-formed configurations")
}
