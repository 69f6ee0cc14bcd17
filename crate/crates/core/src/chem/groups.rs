//! Assignment of UNIFAC structural groups to heavy atoms.
//!
//! Each table group carries a fragment pattern of bracket atoms with exact
//! hydrogen counts (`[CH3]`, `[c][CH2]`, `[CH3][OH]`, ...). A molecule is
//! covered by non-overlapping pattern embeddings; groups are tried in
//! descending priority and the search backtracks when a branch leaves an atom
//! that nothing can cover.

use serde::Serialize;
use thiserror::Error;

use super::smiles::{parse_fragment, MolecularGraph};
use crate::activity::{GroupCounts, UnifacParameterTable};

const SEARCH_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum DecompositionError {
    #[error("atoms {atoms:?} cannot be covered by the table's groups")]
    DecompositionFailed { atoms: Vec<usize> },
    #[error("pattern `{pattern}` of group {group} is invalid: {message}")]
    BadPattern {
        group: String,
        pattern: String,
        message: String,
    },
}

struct CompiledGroup {
    name: String,
    priority: i32,
    pattern: MolecularGraph,
}

fn compile(table: &UnifacParameterTable) -> Result<Vec<CompiledGroup>, DecompositionError> {
    let mut out = Vec::new();
    for def in table.groups() {
        let Some(pattern) = &def.pattern else { continue };
        let graph = parse_fragment(pattern).map_err(|e| DecompositionError::BadPattern {
            group: def.name.clone(),
            pattern: pattern.clone(),
            message: e.to_string(),
        })?;
        out.push(CompiledGroup {
            name: def.name.clone(),
            priority: def.priority,
            pattern: graph,
        });
    }
    // stable: ties keep table order
    out.sort_by_key(|g| std::cmp::Reverse(g.priority));
    Ok(out)
}

fn atom_matches(pattern: &MolecularGraph, p: usize, mol: &MolecularGraph, m: usize) -> bool {
    let pa = &pattern.atoms()[p];
    let ma = &mol.atoms()[m];
    pa.element == ma.element
        && pa.aromatic == ma.aromatic
        && pa.hydrogens == ma.hydrogens
        && pa.charge == ma.charge
}

/// All embeddings of `pattern` that use atom `anchor` and only unassigned atoms.
fn embeddings(
    pattern: &MolecularGraph,
    mol: &MolecularGraph,
    anchor: usize,
    assigned: &[bool],
) -> Vec<Vec<usize>> {
    let n = pattern.atom_count();
    let mut found: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if !atom_matches(pattern, start, mol, anchor) {
            continue;
        }
        // pattern atoms in BFS order from `start`, each with an already-placed neighbor
        let mut order = vec![start];
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for &(w, _) in pattern.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                }
            }
        }
        let mut map = vec![usize::MAX; n];
        map[start] = anchor;
        extend(pattern, mol, &order, 1, &mut map, assigned, &mut found);
    }
    for f in found.iter_mut() {
        f.sort_unstable();
    }
    found.sort();
    found.dedup();
    found
}

fn extend(
    pattern: &MolecularGraph,
    mol: &MolecularGraph,
    order: &[usize],
    depth: usize,
    map: &mut Vec<usize>,
    assigned: &[bool],
    found: &mut Vec<Vec<usize>>,
) {
    if depth == order.len() {
        found.push(map.clone());
        return;
    }
    let p = order[depth];
    let (placed_nb, pattern_bond) = pattern
        .neighbors(p)
        .iter()
        .find(|(w, _)| map[*w] != usize::MAX)
        .map(|&(w, b)| (w, b))
        .expect("BFS order places a neighbor first");
    let anchor = map[placed_nb];
    for &(cand, mol_bond) in mol.neighbors(anchor) {
        if assigned[cand] || map.contains(&cand) || !atom_matches(pattern, p, mol, cand) {
            continue;
        }
        if mol.bonds()[mol_bond].order != pattern.bonds()[pattern_bond].order {
            continue;
        }
        // every other pattern bond to an already placed atom must exist in the molecule
        let consistent = pattern.neighbors(p).iter().all(|&(w, b)| {
            map[w] == usize::MAX
                || mol
                    .bond_between(cand, map[w])
                    .is_some_and(|mb| mb.order == pattern.bonds()[b].order)
        });
        if !consistent {
            continue;
        }
        map[p] = cand;
        extend(pattern, mol, order, depth + 1, map, assigned, found);
        map[p] = usize::MAX;
    }
}

/// Counts of each table group in a complete, non-overlapping cover of all
/// heavy atoms.
pub fn decompose_groups(
    graph: &MolecularGraph,
    table: &UnifacParameterTable,
) -> Result<GroupCounts, DecompositionError> {
    let groups = compile(table)?;
    let n = graph.atom_count();

    // atoms no group can reach at all
    let none_assigned = vec![false; n];
    let unreachable: Vec<usize> = (0..n)
        .filter(|&a| {
            groups
                .iter()
                .all(|g| embeddings(&g.pattern, graph, a, &none_assigned).is_empty())
        })
        .collect();
    if !unreachable.is_empty() {
        return Err(DecompositionError::DecompositionFailed { atoms: unreachable });
    }

    let mut assigned = vec![false; n];
    let mut chosen: Vec<usize> = Vec::new();
    let mut budget = SEARCH_BUDGET;
    if cover(graph, &groups, &mut assigned, &mut chosen, &mut budget) {
        let mut counts = GroupCounts::new();
        for g in chosen {
            *counts.entry(groups[g].name.clone()).or_insert(0) += 1;
        }
        Ok(counts)
    } else {
        Err(DecompositionError::DecompositionFailed {
            atoms: (0..n).collect(),
        })
    }
}

fn cover(
    graph: &MolecularGraph,
    groups: &[CompiledGroup],
    assigned: &mut [bool],
    chosen: &mut Vec<usize>,
    budget: &mut usize,
) -> bool {
    let Some(anchor) = assigned.iter().position(|a| !a) else {
        return true;
    };
    for (gi, group) in groups.iter().enumerate() {
        for emb in embeddings(&group.pattern, graph, anchor, assigned) {
            if *budget == 0 {
                return false;
            }
            *budget -= 1;
            for &a in &emb {
                assigned[a] = true;
            }
            chosen.push(gi);
            if cover(graph, groups, assigned, chosen, budget) {
                return true;
            }
            chosen.pop();
            for &a in &emb {
                assigned[a] = false;
            }
        }
    }
    false
}

/// Heavy atoms covered by one occurrence of each group, from its pattern.
pub fn pattern_atom_count(table: &UnifacParameterTable, group: &str) -> Option<usize> {
    let def = table.group(group)?;
    parse_fragment(def.pattern.as_deref()?).ok().map(|g| g.atom_count())
}
