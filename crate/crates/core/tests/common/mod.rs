//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's checker or bounds; states are read through their facts.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet, VecDeque};

use rackconf_core::engine::{Action, ActionKind};
use rackconf_core::model::{
    hard_violations, AssociationKind, ClassName, ConfigurationState, ElementCounts, Fact,
    ObjectId,
};
use rackconf_core::strategies::{generic_actions, Strategy};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Checks the eight constraints of the domain description directly on a
/// fact list.
pub fn brute_force_valid(facts: &[Fact]) -> bool {
    let mut class = BTreeMap::new();
    for f in facts {
        if let Fact::IsA(id, c) = f {
            class.insert(*id, *c);
        }
    }
    let links = |pick: fn(&Fact) -> Option<(ObjectId, ObjectId)>| -> Vec<(ObjectId, ObjectId)> {
        facts.iter().filter_map(pick).collect()
    };
    let rf = links(|f| if let Fact::RackFrame(a, b) = f { Some((*a, *b)) } else { None });
    let fm = links(|f| if let Fact::FrameModule(a, b) = f { Some((*a, *b)) } else { None });
    let em = links(|f| if let Fact::ElementModule(a, b) = f { Some((*a, *b)) } else { None });
    let is_module = |c: ClassName| {
        matches!(
            c,
            ClassName::ModuleI
                | ClassName::ModuleII
                | ClassName::ModuleIII
                | ClassName::ModuleIV
                | ClassName::ModuleV
        )
    };
    for (&id, &c) in &class {
        let frames_of_rack = rf.iter().filter(|(r, _)| *r == id).count();
        match c {
            // a rackSingle contains exactly 4 frames
            ClassName::RackSingle if frames_of_rack != 4 => return false,
            // a rackDouble contains exactly 8 frames
            ClassName::RackDouble if frames_of_rack != 8 => return false,
            ClassName::Frame => {
                let inside: Vec<ClassName> =
                    fm.iter().filter(|(f, _)| *f == id).map(|(_, m)| class[m]).collect();
                // up to 5 modules
                if inside.len() > 5 {
                    return false;
                }
                // contained in exactly one rack
                if rf.iter().filter(|(_, f)| *f == id).count() != 1 {
                    return false;
                }
                // holds a moduleII iff it holds exactly one moduleV
                let has_ii = inside.contains(&ClassName::ModuleII);
                let v = inside.iter().filter(|&&m| m == ClassName::ModuleV).count();
                if has_ii != (v == 1) {
                    return false;
                }
            }
            _ => {}
        }
        if is_module(c) {
            // contained in exactly one frame
            if fm.iter().filter(|(_, m)| *m == id).count() != 1 {
                return false;
            }
            // requires zero or one element
            if em.iter().filter(|(_, m)| *m == id).count() > 1 {
                return false;
            }
        }
        let required = match c {
            ClassName::ElementA => Some((ClassName::ModuleI, 1)),
            ClassName::ElementB => Some((ClassName::ModuleII, 2)),
            ClassName::ElementC => Some((ClassName::ModuleIII, 3)),
            ClassName::ElementD => Some((ClassName::ModuleIV, 4)),
            _ => None,
        };
        if let Some((module, n)) = required {
            let linked: Vec<ClassName> =
                em.iter().filter(|(e, _)| *e == id).map(|(_, m)| class[m]).collect();
            if linked.len() != n || linked.iter().any(|&m| m != module) {
                return false;
            }
        }
    }
    true
}

/// Fewest facts a valid configuration extending `counts` elements can add,
/// with the configuration that attains it. Every moduleII frame holds one
/// moduleV and up to four moduleII; racks are as large as possible.
pub fn constructive_minimum(counts: &ElementCounts) -> (usize, ConfigurationState) {
    let initial = ConfigurationState::with_elements(counts);
    let mut facts = initial.facts();
    let mut next = initial.next_id().0;
    let mut fresh = |c: ClassName, facts: &mut Vec<Fact>| {
        let id = ObjectId(next);
        next += 1;
        facts.push(Fact::IsA(id, c));
        id
    };
    // modules, each linked to its element
    let mut plain = Vec::new();
    let mut twos = Vec::new();
    for (e, c) in initial.objects() {
        let (module, n) = match c {
            ClassName::ElementA => (ClassName::ModuleI, 1),
            ClassName::ElementB => (ClassName::ModuleII, 2),
            ClassName::ElementC => (ClassName::ModuleIII, 3),
            _ => (ClassName::ModuleIV, 4),
        };
        for _ in 0..n {
            let m = fresh(module, &mut facts);
            facts.push(Fact::ElementModule(e, m));
            if module == ClassName::ModuleII { twos.push(m) } else { plain.push(m) }
        }
    }
    let module_count = plain.len() + twos.len();
    let v_count = twos.len().div_ceil(4);
    let mut frame_count = (module_count + v_count).div_ceil(5).max(v_count);
    frame_count = frame_count.div_ceil(4) * 4;
    let frames: Vec<ObjectId> = (0..frame_count).map(|_| fresh(ClassName::Frame, &mut facts)).collect();
    let mut load = vec![0usize; frame_count];
    // moduleV k in frame k with up to four moduleII
    for (k, chunk) in twos.chunks(4).enumerate() {
        let v = fresh(ClassName::ModuleV, &mut facts);
        facts.push(Fact::FrameModule(frames[k], v));
        for &m in chunk {
            facts.push(Fact::FrameModule(frames[k], m));
        }
        load[k] = 1 + chunk.len();
    }
    for m in plain {
        let f = (0..frame_count).find(|&f| load[f] < 5).expect("enough frames");
        facts.push(Fact::FrameModule(frames[f], m));
        load[f] += 1;
    }
    let mut remaining = frame_count;
    let mut frame_iter = frames.iter();
    while remaining > 0 {
        let (class, cap) = if remaining >= 8 { (ClassName::RackDouble, 8) } else { (ClassName::RackSingle, 4) };
        let r = fresh(class, &mut facts);
        for f in frame_iter.by_ref().take(cap) {
            facts.push(Fact::RackFrame(r, *f));
        }
        remaining -= cap;
    }
    let state = ConfigurationState::from_facts(&facts).expect("well-formed");
    let formula = 3 * module_count + 2 * v_count + 2 * frame_count + frame_count.div_ceil(8);
    assert_eq!(state.fact_count() - initial.fact_count(), formula);
    (formula, state)
}

/// Facts any valid extension still has to add, counted from scratch in
/// disjoint groups: element_module links, new modules with their isA and
/// frame_module facts, frame_module links of unframed modules, new moduleV
/// for moduleII frames without one, and frames and racks needed to hold
/// every module in full racks.
fn fact_bound(facts: &[Fact]) -> usize {
    let mut class = BTreeMap::new();
    let (mut em, mut fm, mut rf) = (Vec::new(), Vec::new(), Vec::new());
    for f in facts {
        match *f {
            Fact::IsA(id, c) => {
                class.insert(id, c);
            }
            Fact::ElementModule(e, m) => em.push((e, m)),
            Fact::FrameModule(fr, m) => fm.push((fr, m)),
            Fact::RackFrame(r, f) => rf.push((r, f)),
        }
    }
    let mut h = 0;
    let mut need: BTreeMap<ClassName, usize> = BTreeMap::new();
    for (&id, &c) in &class {
        let (module, n) = match c {
            ClassName::ElementA => (ClassName::ModuleI, 1),
            ClassName::ElementB => (ClassName::ModuleII, 2),
            ClassName::ElementC => (ClassName::ModuleIII, 3),
            ClassName::ElementD => (ClassName::ModuleIV, 4),
            _ => continue,
        };
        let missing = n - em.iter().filter(|(e, _)| *e == id).count();
        h += missing;
        *need.entry(module).or_default() += missing;
    }
    let mut new_modules = 0;
    for (module, n) in need {
        let free = class
            .iter()
            .filter(|&(id, &c)| c == module && !em.iter().any(|(_, m)| m == id))
            .count();
        new_modules += n.saturating_sub(free);
    }
    let framed = |m: &ObjectId| fm.iter().any(|(_, x)| x == m);
    let unframed = class.iter().filter(|&(id, &c)| c.is_module() && !framed(id)).count();
    // moduleII frames lacking a moduleV, beyond the unframed moduleV at hand
    let frame_has = |fr: ObjectId, c: ClassName| fm.iter().any(|&(f, m)| f == fr && class[&m] == c);
    let lacking_v = class
        .iter()
        .filter(|&(&id, &c)| c == ClassName::Frame && frame_has(id, ClassName::ModuleII) && !frame_has(id, ClassName::ModuleV))
        .count();
    let loose_v = class.iter().filter(|&(id, &c)| c == ClassName::ModuleV && !framed(id)).count();
    let new_v = lacking_v.saturating_sub(loose_v);
    h += 2 * (new_modules + new_v) + unframed;
    let modules = class.values().filter(|c| c.is_module()).count() + new_modules + new_v;
    let frames = class.values().filter(|&&c| c == ClassName::Frame).count();
    let capacity: usize = class
        .values()
        .map(|c| match c {
            ClassName::RackSingle => 4,
            ClassName::RackDouble => 8,
            _ => 0,
        })
        .sum();
    let total_frames = modules.div_ceil(5).max(frames).max(capacity).div_ceil(4) * 4;
    let unracked = class
        .iter()
        .filter(|&(id, &c)| c == ClassName::Frame && !rf.iter().any(|(_, f)| f == id))
        .count();
    h + 2 * (total_frames - frames) + unracked + (total_frames - capacity).div_ceil(8)
}

type ModuleKey = (ClassName, Option<usize>);
type FrameKey = Vec<ModuleKey>;
type Canonical = (Vec<ClassName>, Vec<(ClassName, Vec<FrameKey>)>, Vec<FrameKey>, Vec<ModuleKey>);

/// Exact isomorphism key. Once elements carry labels the remaining graph
/// is a forest (a module has at most one frame and one element, a frame at
/// most one rack), so sorted nested multisets describe it exactly; the key
/// is the least such description over all labelings of the elements.
fn canonical(facts: &[Fact]) -> Canonical {
    let mut class = BTreeMap::new();
    let mut element_of = BTreeMap::new();
    let mut frame_of = BTreeMap::new();
    let mut rack_of = BTreeMap::new();
    for f in facts {
        match *f {
            Fact::IsA(id, c) => {
                class.insert(id, c);
            }
            Fact::ElementModule(e, m) => {
                element_of.insert(m, e);
            }
            Fact::FrameModule(fr, m) => {
                frame_of.insert(m, fr);
            }
            Fact::RackFrame(r, fr) => {
                rack_of.insert(fr, r);
            }
        }
    }
    let elements: Vec<ObjectId> =
        class.iter().filter(|(_, c)| c.requirement().is_some()).map(|(&id, _)| id).collect();
    let mut best: Option<Canonical> = None;
    for order in permutations(elements.len()) {
        let labels: Vec<ClassName> = order.iter().map(|&i| class[&elements[i]]).collect();
        if let Some(b) = &best {
            if labels > b.0 {
                continue;
            }
        }
        let label = |e: &ObjectId| order.iter().position(|&i| elements[i] == *e);
        let mut frames: BTreeMap<ObjectId, FrameKey> =
            class.iter().filter(|(_, &c)| c == ClassName::Frame).map(|(&id, _)| (id, Vec::new())).collect();
        let mut loose = Vec::new();
        for (&id, &c) in class.iter().filter(|(_, c)| c.is_module()) {
            let key = (c, element_of.get(&id).and_then(label));
            match frame_of.get(&id) {
                Some(fr) => frames.get_mut(fr).expect("frame").push(key),
                None => loose.push(key),
            }
        }
        let mut racks: BTreeMap<ObjectId, (ClassName, Vec<FrameKey>)> = class
            .iter()
            .filter(|(_, c)| matches!(c, ClassName::RackSingle | ClassName::RackDouble))
            .map(|(&id, &c)| (id, (c, Vec::new())))
            .collect();
        let mut unracked = Vec::new();
        for (id, mut key) in frames {
            key.sort();
            match rack_of.get(&id) {
                Some(r) => racks.get_mut(r).expect("rack").1.push(key),
                None => unracked.push(key),
            }
        }
        let mut racks: Vec<_> = racks
            .into_values()
            .map(|(c, mut fs)| {
                fs.sort();
                (c, fs)
            })
            .collect();
        racks.sort();
        unracked.sort();
        loose.sort();
        let key = (labels, racks, unracked, loose);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    best.expect("at least the identity ordering")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Minimum number of generic steps from `initial` to a state the brute
/// force checker accepts, searching breadth-first up to `upper` steps.
///
/// States are merged up to isomorphism (generic actions are offered
/// uniformly over object identities, so isomorphic states have isomorphic
/// successors) and branches whose fact bound exceeds the remaining steps
/// are dropped.
pub fn bfs_min_generic_steps(initial: &ConfigurationState, upper: usize) -> Option<usize> {
    let mut queue = VecDeque::from([(initial.clone(), 0usize)]);
    let mut seen: HashSet<Canonical> = HashSet::from([canonical(&initial.facts())]);
    while let Some((state, depth)) = queue.pop_front() {
        let facts = state.facts();
        if brute_force_valid(&facts) {
            return Some(depth);
        }
        if depth == upper {
            continue;
        }
        let violations = rackconf_core::model::detect_violations(&state);
        for action in generic_actions(&state, &violations) {
            let next = action.apply(&state).expect("offered actions apply");
            let nf = next.facts();
            if depth + 1 + fact_bound(&nf) > upper {
                continue;
            }
            if seen.insert(canonical(&nf)) {
                queue.push_back((next, depth + 1));
            }
        }
    }
    None
}

/// Random action walk; after every step the raw facts plus the chosen
/// action's effects are checked for hard violations before applying.
/// Returns the number of steps taken.
pub fn random_walk(strategy: Strategy, seed: u64, max_len: usize) -> Result<usize, String> {
    walk(strategy, seed, max_len).map(|(steps, _)| steps)
}

/// The state a random walk ends in.
pub fn walk_state(strategy: Strategy, seed: u64, max_len: usize) -> ConfigurationState {
    walk(strategy, seed, max_len).expect("walk stays within the hard constraints").1
}

fn walk(strategy: Strategy, seed: u64, max_len: usize) -> Result<(usize, ConfigurationState), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let counts = ElementCounts::new(
        rng.random_range(0..=2),
        rng.random_range(0..=1),
        rng.random_range(0..=1),
        rng.random_range(0..=1),
    );
    let mut state = ConfigurationState::with_elements(&counts);
    for step in 0..max_len {
        let violations = rackconf_core::model::detect_violations(&state);
        let actions = strategy.generate(&state, &violations);
        let Some(action) = actions.choose(&mut rng) else { return Ok((step, state)) };
        check_action(&state, action).map_err(|e| format!("seed {seed}, step {step}: {e}"))?;
        state = action.apply(&state).map_err(|e| e.to_string())?;
    }
    Ok((max_len, state))
}

pub fn check_action(state: &ConfigurationState, action: &Action) -> Result<(), String> {
    let mut raw = state.facts();
    raw.extend(action.effects.iter().map(|e| e.fact()));
    let hard = hard_violations(&raw);
    if hard.is_empty() {
        Ok(())
    } else {
        Err(format!("{} breaks {:?}", action.kind, hard))
    }
}

/// All configurations with at most `max_objects` objects: every class
/// multiset, every rack choice per frame, every frame and type-matched
/// element choice per module. Calls `visit` with the fact list.
pub fn for_each_small_configuration(max_objects: usize, mut visit: impl FnMut(&[Fact])) {
    let mut classes = Vec::new();
    multisets(&mut classes, 0, max_objects, &mut |cs| links_for(cs, &mut visit));
}

fn multisets(cur: &mut Vec<ClassName>, from: usize, left: usize, f: &mut dyn FnMut(&[ClassName])) {
    f(cur);
    if left == 0 {
        return;
    }
    for i in from..ClassName::LEAVES.len() {
        cur.push(ClassName::LEAVES[i]);
        multisets(cur, i, left - 1, f);
        cur.pop();
    }
}

fn links_for(classes: &[ClassName], visit: &mut dyn FnMut(&[Fact])) {
    let ids: Vec<(ObjectId, ClassName)> =
        classes.iter().enumerate().map(|(i, &c)| (ObjectId(i as u32 + 1), c)).collect();
    let racks: Vec<ObjectId> = ids.iter().filter(|(_, c)| c.is_rack()).map(|(i, _)| *i).collect();
    let frames: Vec<ObjectId> = ids.iter().filter(|(_, c)| c.is_frame()).map(|(i, _)| *i).collect();
    let elements: Vec<(ObjectId, ClassName)> =
        ids.iter().filter(|(_, c)| c.is_element()).copied().collect();
    // choice slots: (kind, subject, options)
    let mut slots: Vec<Vec<Option<Fact>>> = Vec::new();
    for &f in &frames {
        let mut opts = vec![None];
        opts.extend(racks.iter().map(|&r| Some(Fact::link(AssociationKind::RackFrame, r, f))));
        slots.push(opts);
    }
    for &(m, mc) in ids.iter().filter(|(_, c)| c.is_module()) {
        let mut opts = vec![None];
        opts.extend(frames.iter().map(|&f| Some(Fact::link(AssociationKind::FrameModule, f, m))));
        slots.push(opts);
        let mut opts = vec![None];
        opts.extend(
            elements
                .iter()
                .filter(|(_, ec)| AssociationKind::ElementModule.accepts(*ec, mc))
                .map(|&(e, _)| Some(Fact::link(AssociationKind::ElementModule, e, m))),
        );
        slots.push(opts);
    }
    let base: Vec<Fact> = ids.iter().map(|&(i, c)| Fact::IsA(i, c)).collect();
    let mut facts = base.clone();
    choose(&slots, 0, &mut facts, visit);
}

fn choose(slots: &[Vec<Option<Fact>>], i: usize, facts: &mut Vec<Fact>, visit: &mut dyn FnMut(&[Fact])) {
    if i == slots.len() {
        visit(facts);
        return;
    }
    for opt in &slots[i] {
        if let Some(f) = opt {
            facts.push(*f);
            choose(slots, i + 1, facts, visit);
            facts.pop();
        } else {
            choose(slots, i + 1, facts, visit);
        }
    }
}

/// The id-ordered generic action sequence that rebuilds `target` from
/// `initial`: creations first, then links.
pub fn generic_rebuild(initial: &ConfigurationState, target: &ConfigurationState) -> Vec<ActionKind> {
    let mut out = Vec::new();
    for (id, c) in target.objects() {
        if initial.class_of(id).is_none() {
            out.push(ActionKind::CreateObject(c));
        }
    }
    for f in target.facts() {
        if let Some((k, a, b)) = f.as_link() {
            if !initial.contains(&f) {
                out.push(ActionKind::Associate(k, a, b));
            }
        }
    }
    out
}

/// The element counts of every input with at most `n` elements in total.
pub fn inputs_up_to(n: u32) -> Vec<ElementCounts> {
    ElementCounts::enumerate(n).filter(|c| c.total() <= n).collect()
}
