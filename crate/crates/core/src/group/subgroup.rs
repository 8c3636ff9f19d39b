use std::collections::BTreeSet;
use std::sync::Arc;

use super::finite::{Element, FiniteGroup};
use crate::error::{Error, Result};

/// A subgroup of a finite group, stored as a sorted member list.
#[derive(Debug, Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    members: Vec<Element>,
    is_normal: bool,
}

impl Subgroup {
    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn is_normal(&self) -> bool {
        self.is_normal
    }

    pub fn is_whole_group(&self) -> bool {
        self.members.len() == self.parent.order()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.members.binary_search(&x).is_ok()
    }

    fn from_members(parent: Arc<FiniteGroup>, members: BTreeSet<Element>) -> Self {
        let members: Vec<Element> = members.into_iter().collect();
        let is_normal = is_conjugation_closed(&parent, &members);
        Subgroup { parent, members, is_normal }
    }
}

fn is_conjugation_closed(g: &FiniteGroup, members: &[Element]) -> bool {
    members
        .iter()
        .all(|&h| (0..g.order()).all(|x| members.binary_search(&g.conjugate(h, x)).is_ok()))
}

/// Smallest subgroup containing `seeds` (breadth-first closure).
pub fn generated_subgroup(group: &Arc<FiniteGroup>, seeds: &[Element]) -> Result<Subgroup> {
    if seeds.is_empty() {
        return Err(Error::EmptySeed);
    }
    for &s in seeds {
        group.check(s)?;
    }
    let mut gens: Vec<Element> = seeds.to_vec();
    gens.extend(seeds.iter().map(|&s| group.inverse(s)));
    gens.sort_unstable();
    gens.dedup();

    let mut members = BTreeSet::from([group.identity()]);
    let mut frontier = vec![group.identity()];
    while let Some(x) = frontier.pop() {
        for &s in &gens {
            let y = group.mul(x, s);
            if members.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(Subgroup::from_members(group.clone(), members))
}

/// Smallest normal subgroup containing `seeds`.
pub fn normal_closure(group: &Arc<FiniteGroup>, seeds: &[Element]) -> Result<Subgroup> {
    if seeds.is_empty() {
        return Err(Error::EmptySeed);
    }
    for &s in seeds {
        group.check(s)?;
    }
    let conjugates: BTreeSet<Element> = seeds
        .iter()
        .flat_map(|&s| (0..group.order()).map(move |g| group.conjugate(s, g)))
        .collect();
    let seeds: Vec<Element> = conjugates.into_iter().collect();
    let sub = generated_subgroup(group, &seeds)?;
    debug_assert!(sub.is_normal);
    Ok(sub)
}

/// All normal subgroups, sorted by order then members.
pub fn normal_subgroups(group: &Arc<FiniteGroup>) -> Vec<Subgroup> {
    let mut found: BTreeSet<Vec<Element>> = BTreeSet::new();
    let mut queue: Vec<Vec<Element>> = Vec::new();
    for x in 0..group.order() {
        let n = normal_closure(group, &[x]).expect("nonempty seed");
        if found.insert(n.members.clone()) {
            queue.push(n.members);
        }
    }
    // Joins of normal subgroups are normal closures of unions.
    let mut i = 0;
    while i < queue.len() {
        let a = queue[i].clone();
        let snapshot: Vec<Vec<Element>> = found.iter().cloned().collect();
        for b in snapshot {
            let union: Vec<Element> = a.iter().chain(b.iter()).copied().collect();
            let join = generated_subgroup(group, &union).expect("nonempty seed");
            if found.insert(join.members.clone()) {
                queue.push(join.members);
            }
        }
        i += 1;
    }
    let mut subs: Vec<Subgroup> = found
        .into_iter()
        .map(|m| Subgroup::from_members(group.clone(), m.into_iter().collect()))
        .collect();
    subs.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members.cmp(&b.members)));
    subs
}
