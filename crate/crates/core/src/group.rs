//! Finite groups given by explicit multiplication tables, and their
//! subgroup lattices.
//!
//! Elements are indices `0..order` into a Cayley table.  Loading a group
//! validates the table completely for small orders (identity, inverses,
//! closure, associativity), so downstream code can rely on the axioms.

use std::collections::BTreeSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{parse_json, read_to_string, Error, Result};

/// Largest order for which associativity is checked exhaustively; above this
/// the check samples triples instead.
const EXHAUSTIVE_ASSOC_BOUND: usize = 64;

/// Default cap on the order accepted by subgroup enumeration.
pub const SUBGROUP_ENUMERATION_BOUND: usize = 64;

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GroupFile {
    name: String,
    order: usize,
    identity: usize,
    element_names: Vec<String>,
    table: Vec<Vec<usize>>,
    generators: Vec<usize>,
}

/// A finite group with a fully validated Cayley table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    identity: usize,
    element_names: Vec<String>,
    table: Vec<Vec<usize>>,
    generators: Vec<usize>,
    inverses: Vec<usize>,
    conjugacy_classes: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_to_string(path)?;
        let file: GroupFile = parse_json(path, &text)?;
        Self::from_parts(
            file.name,
            file.identity,
            file.element_names,
            file.table,
            file.generators,
        )
        .map_err(|e| match e {
            Error::InvalidGroup(msg) => {
                Error::InvalidGroup(format!("{}: {msg}", path.display()))
            }
            other => other,
        })
    }

    pub fn from_parts(
        name: String,
        identity: usize,
        element_names: Vec<String>,
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
    ) -> Result<Self> {
        let order = table.len();
        if order == 0 {
            return Err(Error::InvalidGroup(format!("group {name}: empty table")));
        }
        if element_names.len() != order {
            return Err(Error::InvalidGroup(format!(
                "group {name}: {} element names for order {order}",
                element_names.len()
            )));
        }
        if identity >= order {
            return Err(Error::InvalidGroup(format!(
                "group {name}: identity index {identity} out of range"
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != order {
                return Err(Error::InvalidGroup(format!(
                    "group {name}: row {i} has length {}, expected {order}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if v >= order {
                    return Err(Error::InvalidGroup(format!(
                        "group {name}: table[{i}][{j}] = {v} out of range"
                    )));
                }
            }
        }
        for (g, row) in table.iter().enumerate() {
            if table[identity][g] != g || row[identity] != g {
                return Err(Error::InvalidGroup(format!(
                    "group {name}: element {identity} is not a two-sided identity at {g}"
                )));
            }
        }
        let mut inverses = vec![usize::MAX; order];
        for g in 0..order {
            let inv = (0..order).find(|&h| table[g][h] == identity && table[h][g] == identity);
            match inv {
                Some(h) => inverses[g] = h,
                None => {
                    return Err(Error::InvalidGroup(format!(
                        "group {name}: element {g} has no two-sided inverse"
                    )))
                }
            }
        }
        if order <= EXHAUSTIVE_ASSOC_BOUND {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        if table[table[a][b]][c] != table[a][table[b][c]] {
                            return Err(Error::InvalidGroup(format!(
                                "group {name}: associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        } else {
            // Light's test would be cheaper, but a deterministic stride sample
            // keeps this simple and catches gross corruption.
            let stride = order / 16 + 1;
            for a in (0..order).step_by(stride) {
                for b in 0..order {
                    for c in (0..order).step_by(stride) {
                        if table[table[a][b]][c] != table[a][table[b][c]] {
                            return Err(Error::InvalidGroup(format!(
                                "group {name}: associativity fails at ({a}, {b}, {c})"
                            )));
                        }
                    }
                }
            }
        }
        for &g in &generators {
            if g >= order {
                return Err(Error::InvalidGroup(format!(
                    "group {name}: generator {g} out of range"
                )));
            }
        }
        let conjugacy_classes = compute_conjugacy_classes(&table, &inverses);
        let group = FiniteGroup {
            name,
            order,
            identity,
            element_names,
            table,
            generators,
            inverses,
            conjugacy_classes,
        };
        let generated = group.closure(&group.generators);
        if generated.len() != order {
            return Err(Error::InvalidGroup(format!(
                "group {}: declared generators span only {} of {} elements",
                group.name,
                generated.len(),
                order
            )));
        }
        Ok(group)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element_name(&self, g: usize) -> &str {
        &self.element_names[g]
    }

    pub fn element_names(&self) -> &[String] {
        &self.element_names
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    /// `s g s^{-1}`.
    pub fn conjugate(&self, s: usize, g: usize) -> usize {
        self.mul(self.mul(s, g), self.inverse(s))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, g);
            n += 1;
        }
        n
    }

    /// Number of solutions of `g * g = identity` (identity included).
    pub fn square_root_count_of_identity(&self) -> usize {
        (0..self.order)
            .filter(|&g| self.mul(g, g) == self.identity)
            .count()
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.conjugacy_classes
    }

    /// Smallest subgroup containing `seed`, as a sorted element list.
    pub fn closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut members: BTreeSet<usize> = BTreeSet::new();
        members.insert(self.identity);
        members.extend(seed.iter().copied());
        loop {
            let snapshot: Vec<usize> = members.iter().copied().collect();
            let before = snapshot.len();
            for &a in &snapshot {
                members.insert(self.inverse(a));
                for &b in &snapshot {
                    members.insert(self.mul(a, b));
                }
            }
            if members.len() == before {
                break;
            }
        }
        members.into_iter().collect()
    }

    /// Every subgroup, sorted by (order, member list).  Starts from all
    /// cyclic subgroups and closes under pairwise join, which reaches every
    /// subgroup because each is generated by its own cyclic parts.
    pub fn all_subgroups(&self, order_bound: usize) -> Result<Vec<Subgroup>> {
        if self.order > order_bound {
            return Err(Error::OrderBound {
                order: self.order,
                bound: order_bound,
            });
        }
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for g in 0..self.order {
            seen.insert(self.closure(&[g]));
        }
        loop {
            let snapshot: Vec<Vec<usize>> = seen.iter().cloned().collect();
            let before = seen.len();
            for (i, a) in snapshot.iter().enumerate() {
                for b in snapshot.iter().skip(i + 1) {
                    let mut seed = a.clone();
                    seed.extend_from_slice(b);
                    seen.insert(self.closure(&seed));
                }
            }
            if seen.len() == before {
                break;
            }
        }
        let mut subs: Vec<Subgroup> = seen
            .into_iter()
            .map(|members| Subgroup::from_sorted_members(self, members))
            .collect::<Result<_>>()?;
        subs.sort_by(|a, b| {
            a.order()
                .cmp(&b.order())
                .then_with(|| a.members().cmp(b.members()))
        });
        Ok(subs)
    }
}

fn compute_conjugacy_classes(table: &[Vec<usize>], inverses: &[usize]) -> Vec<Vec<usize>> {
    let order = table.len();
    let mut assigned = vec![false; order];
    let mut classes = Vec::new();
    for g in 0..order {
        if assigned[g] {
            continue;
        }
        let mut class = BTreeSet::new();
        for s in 0..order {
            class.insert(table[table[s][g]][inverses[s]]);
        }
        let class: Vec<usize> = class.into_iter().collect();
        for &x in &class {
            assigned[x] = true;
        }
        classes.push(class);
    }
    classes
}

/// A subgroup, stored as a sorted list of element indices of its parent.
///
/// The struct does not hold a reference to the parent group; methods that
/// need the multiplication table take it as an argument, which keeps
/// subgroups cheap to clone and serialize.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    members: Vec<usize>,
}

impl Subgroup {
    /// Validate `members` as a subgroup of `group`.  The list may be in any
    /// order; duplicates are rejected.
    pub fn new(group: &FiniteGroup, members: &[usize]) -> Result<Self> {
        let set: BTreeSet<usize> = members.iter().copied().collect();
        if set.len() != members.len() {
            return Err(Error::InvalidSubgroup(
                "duplicate elements in subgroup member list".into(),
            ));
        }
        Self::from_sorted_members(group, set.into_iter().collect())
    }

    fn from_sorted_members(group: &FiniteGroup, members: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = members.iter().find(|&&g| g >= group.order()) {
            return Err(Error::InvalidSubgroup(format!(
                "element index {bad} out of range for group {} of order {}",
                group.name(),
                group.order()
            )));
        }
        if !members.contains(&group.identity()) {
            return Err(Error::InvalidSubgroup(format!(
                "subgroup of {} omits the identity",
                group.name()
            )));
        }
        for &a in &members {
            if members.binary_search(&group.inverse(a)).is_err() {
                return Err(Error::InvalidSubgroup(format!(
                    "subgroup of {} is missing the inverse of {}",
                    group.name(),
                    group.element_name(a)
                )));
            }
            for &b in &members {
                if members.binary_search(&group.mul(a, b)).is_err() {
                    return Err(Error::InvalidSubgroup(format!(
                        "subgroup of {} is not closed: {} * {} escapes",
                        group.name(),
                        group.element_name(a),
                        group.element_name(b)
                    )));
                }
            }
        }
        Ok(Subgroup { members })
    }

    pub fn trivial(group: &FiniteGroup) -> Self {
        Subgroup {
            members: vec![group.identity()],
        }
    }

    pub fn full(group: &FiniteGroup) -> Self {
        Subgroup {
            members: (0..group.order()).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&g| other.contains(g))
    }

    pub fn index_in_group(&self, group: &FiniteGroup) -> usize {
        group.order() / self.order()
    }

    /// `s H s^{-1}` as a new subgroup.
    pub fn conjugate_by(&self, group: &FiniteGroup, s: usize) -> Subgroup {
        let mut members: Vec<usize> = self
            .members
            .iter()
            .map(|&h| group.conjugate(s, h))
            .collect();
        members.sort_unstable();
        Subgroup { members }
    }

    pub fn is_normal(&self, group: &FiniteGroup) -> bool {
        (0..group.order()).all(|s| self.conjugate_by(group, s).members == self.members)
    }

    /// Whether `ambient` normalises `self`, i.e. `s H s^{-1} = H` for every
    /// `s` in `ambient`.
    pub fn is_normal_within(&self, group: &FiniteGroup, ambient: &Subgroup) -> bool {
        ambient
            .members()
            .iter()
            .all(|&s| self.conjugate_by(group, s).members == self.members)
    }

    /// One representative per left coset `gH` in the whole group; each
    /// representative is the smallest index in its coset, and the list is
    /// sorted.
    pub fn left_coset_reps(&self, group: &FiniteGroup) -> Vec<usize> {
        self.left_coset_reps_within(group, &Subgroup::full(group))
    }

    /// One representative per left coset `g * self` with `g` ranging over
    /// `ambient`, which must contain `self`.  Representatives are coset
    /// minima, listed in increasing order.
    pub fn left_coset_reps_within(&self, group: &FiniteGroup, ambient: &Subgroup) -> Vec<usize> {
        debug_assert!(self.is_subgroup_of(ambient));
        let mut covered = vec![false; group.order()];
        let mut reps = Vec::with_capacity(ambient.order() / self.order());
        for &g in ambient.members() {
            if covered[g] {
                continue;
            }
            reps.push(g);
            for &h in &self.members {
                covered[group.mul(g, h)] = true;
            }
        }
        reps
    }

    /// The smallest element of the coset `g * self`; used as the canonical
    /// representative everywhere a coset must be named.
    pub fn canonical_coset_rep(&self, group: &FiniteGroup, g: usize) -> usize {
        self.members
            .iter()
            .map(|&h| group.mul(g, h))
            .min()
            .expect("subgroup is nonempty")
    }
}
