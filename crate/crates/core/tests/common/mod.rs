//! Brute-force oracles shared by the integration tests and the acceptance
//! suite. The oracles find cocones and occurrences by direct search and
//! never call the gluing code they check.

#![allow(dead_code)]

use std::sync::Arc;

use gandy::colimit::{GlueResult, TapeDiagram};
use gandy::tape::{all_strings, Alphabet, TapeString};

/// Start positions of `a` inside `b`, by direct comparison.
pub fn positions(a: &TapeString, b: &TapeString) -> Vec<usize> {
    if a.is_empty() {
        return vec![0];
    }
    if a.len() > b.len() {
        return Vec::new();
    }
    (0..=b.len() - a.len())
        .filter(|&i| &b.cells()[i..i + a.len()] == a.cells())
        .collect()
}

/// Every cocone from `d` to `z`, as one offset per node (empty nodes sit
/// at 0).
pub fn cocones(d: &TapeDiagram, z: &TapeString) -> Vec<Vec<usize>> {
    let nodes = d.nodes();
    let index = |id: &str| nodes.iter().position(|(n, _)| n == id).unwrap();
    let edges: Vec<(usize, usize, usize)> = d
        .edges()
        .iter()
        .map(|e| (index(&e.from), index(&e.to), e.offset))
        .collect();
    let choices: Vec<Vec<usize>> = nodes.iter().map(|(_, s)| positions(s, z)).collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(nodes.len());
    fn go(
        k: usize,
        nodes: &[(String, TapeString)],
        edges: &[(usize, usize, usize)],
        choices: &[Vec<usize>],
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == nodes.len() {
            out.push(current.clone());
            return;
        }
        for &c in &choices[k] {
            current.push(c);
            let ok = edges.iter().all(|&(f, t, off)| {
                f.max(t) > k || nodes[f].1.is_empty() || current[f] == current[t] + off
            });
            if ok {
                go(k + 1, nodes, edges, choices, current, out);
            }
            current.pop();
        }
    }
    go(0, nodes, &edges, &choices, &mut current, &mut out);
    out
}

/// Every tape up to some length, with the occurrences of every short tape
/// inside it precomputed as bit masks.
pub struct ZTable {
    pub strings: Vec<TapeString>,
    short_len: usize,
    masks: Vec<Vec<u32>>,
}

impl ZTable {
    pub fn new(alphabet: &Arc<Alphabet>, max_z: usize, short_len: usize) -> Self {
        let strings = all_strings(alphabet, max_z);
        let short = all_strings(alphabet, short_len);
        let masks = strings
            .iter()
            .map(|z| {
                short
                    .iter()
                    .map(|s| positions(s, z).iter().fold(0u32, |m, &p| m | 1 << p))
                    .collect()
            })
            .collect();
        ZTable {
            strings,
            short_len,
            masks,
        }
    }

    /// Position of `s` in shortlex order.
    fn short_index(&self, s: &TapeString) -> usize {
        let k = s.alphabet().len();
        let below: usize = (0..s.len()).map(|i| k.pow(i as u32)).sum();
        below + s.cells().iter().fold(0, |acc, &c| acc * k + c as usize)
    }
}

/// Checks that `result` is a colimit of `d` against every tape `Z` of
/// length at most `max_z`: the cocones into `Z` are exactly the legs
/// shifted along the occurrences of the glued value, each once.
pub fn check_universal(d: &TapeDiagram, result: &GlueResult, max_z: usize) -> Result<(), String> {
    let short = d.nodes().iter().map(|(_, s)| s.len()).max().unwrap_or(0);
    check_universal_in(d, result, &ZTable::new(d.alphabet(), max_z, short), max_z)
}

pub fn check_universal_in(
    d: &TapeDiagram,
    result: &GlueResult,
    table: &ZTable,
    max_z: usize,
) -> Result<(), String> {
    let l = &result.value;
    let nodes = d.nodes();
    assert!(nodes.len() <= 8 && nodes.iter().all(|(_, s)| s.len() <= table.short_len));
    let mut legs = Vec::with_capacity(nodes.len());
    for (id, s) in nodes {
        let leg = &result.legs[id];
        if leg.source() != s || leg.target() != l || !positions(s, l).contains(&leg.offset()) {
            return Err(format!("leg of {id} is not an occurrence of {s} in {l}"));
        }
        legs.push(leg.offset());
    }
    let index: Vec<usize> = nodes.iter().map(|(_, s)| table.short_index(s)).collect();
    let empty: Vec<bool> = nodes.iter().map(|(_, s)| s.is_empty()).collect();
    let position = |id: &str| nodes.iter().position(|(n, _)| n == id).unwrap();
    let edges: Vec<(usize, usize, usize)> = d
        .edges()
        .iter()
        .filter(|e| !d.node(&e.from).unwrap().is_empty())
        .map(|e| (position(&e.from), position(&e.to), e.offset))
        .collect();

    let pack = |offsets: &[usize]| offsets.iter().fold(0u64, |acc, &o| acc << 8 | o as u64);
    let mut found = Vec::new();
    let mut induced = Vec::new();
    let mut current = vec![0usize; nodes.len()];
    for (zi, z) in table.strings.iter().enumerate() {
        if z.len() > max_z {
            break;
        }
        let masks = &table.masks[zi];
        // legs are occurrences, so l cannot occur where some node does not
        if index.iter().any(|&i| masks[i] == 0) {
            continue;
        }
        found.clear();
        induced.clear();
        search(0, &index, masks, &edges, &mut current, &mut |c| {
            found.push(pack(c))
        });
        for u in positions(l, z) {
            let c: Vec<usize> = legs
                .iter()
                .zip(&empty)
                .map(|(&leg, &e)| if e { 0 } else { u + leg })
                .collect();
            induced.push(pack(&c));
        }
        found.sort_unstable();
        induced.sort_unstable();
        let before = induced.len();
        induced.dedup();
        if induced.len() != before && empty.iter().any(|e| !e) {
            return Err(format!("two maps {l} -> {z} induce the same cocone"));
        }
        if found != induced {
            return Err(format!(
                "into {z}: {} cocones, {} of them through {l}",
                found.len(),
                induced
                    .iter()
                    .filter(|c| found.binary_search(c).is_ok())
                    .count()
            ));
        }
    }
    Ok(())
}

fn search(
    k: usize,
    index: &[usize],
    masks: &[u32],
    edges: &[(usize, usize, usize)],
    current: &mut [usize],
    emit: &mut impl FnMut(&[usize]),
) {
    if k == index.len() {
        emit(current);
        return;
    }
    let mut bits = masks[index[k]];
    while bits != 0 {
        let c = bits.trailing_zeros() as usize;
        bits &= bits - 1;
        current[k] = c;
        let ok = edges
            .iter()
            .all(|&(f, t, off)| f.max(t) != k || current[f] == current[t] + off);
        if ok {
            search(k + 1, index, masks, edges, current, emit);
        }
    }
}

/// Every diagram with `1..=max_nodes` nodes of length at most `max_len`,
/// node labels listed in shortlex order, and at most one edge for each
/// ordered pair of distinct nodes.
pub fn for_each_small_diagram(
    alphabet: &Arc<Alphabet>,
    max_nodes: usize,
    max_len: usize,
    mut f: impl FnMut(&TapeDiagram),
) {
    let strings = all_strings(alphabet, max_len);
    for k in 1..=max_nodes {
        let mut pick = vec![0usize; k];
        loop {
            let labels: Vec<&TapeString> = pick.iter().map(|&i| &strings[i]).collect();
            let mut options = Vec::new();
            for i in 0..k {
                for j in 0..k {
                    if i != j {
                        let mut o: Vec<Option<usize>> = vec![None];
                        o.extend(positions(labels[i], labels[j]).into_iter().map(Some));
                        options.push((i, j, o));
                    }
                }
            }
            let mut choice = vec![0usize; options.len()];
            loop {
                let mut d = TapeDiagram::new(alphabet);
                for (i, s) in labels.iter().enumerate() {
                    d.add_node(format!("v{i}"), (*s).clone()).unwrap();
                }
                for ((i, j, o), &c) in options.iter().zip(&choice) {
                    if let Some(off) = o[c] {
                        d.add_edge(&format!("v{i}"), &format!("v{j}"), off).unwrap();
                    }
                }
                f(&d);
                if !advance(&mut choice, |p| options[p].2.len()) {
                    break;
                }
            }
            if !next_multiset(&mut pick, strings.len()) {
                break;
            }
        }
    }
}

/// Next nondecreasing sequence over `0..n`.
fn next_multiset(pick: &mut [usize], n: usize) -> bool {
    for p in (0..pick.len()).rev() {
        if pick[p] + 1 < n {
            let v = pick[p] + 1;
            pick[p..].iter_mut().for_each(|x| *x = v);
            return true;
        }
    }
    false
}

fn advance(choice: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for p in (0..choice.len()).rev() {
        choice[p] += 1;
        if choice[p] < radix(p) {
            return true;
        }
        choice[p] = 0;
    }
    false
}

#[derive(Debug, Default)]
pub struct UniversalityTally {
    pub diagrams: usize,
    pub glued: usize,
    pub violations: Vec<String>,
}

/// Criterion-sized sweep: every small diagram that glues must be universal
/// among cocones into tapes no longer than the total node length.
pub fn colimit_universality_sweep(max_nodes: usize, max_len: usize) -> UniversalityTally {
    let alphabet = Alphabet::binary();
    let table = ZTable::new(&alphabet, max_nodes * max_len, max_len);
    let mut tally = UniversalityTally::default();
    for_each_small_diagram(&alphabet, max_nodes, max_len, |d| {
        tally.diagrams += 1;
        if let Ok(result) = gandy::glue(d) {
            tally.glued += 1;
            let total: usize = d.nodes().iter().map(|(_, s)| s.len()).sum();
            let max_z = match rigid_hull(d) {
                Some(h) => (h.max(result.value.len()) + 1).min(total.max(result.value.len())),
                None => total,
            };
            if let Err(e) = check_universal_in(d, &result, &table, max_z) {
                tally.violations.push(format!("{}{e}", d.to_text()));
            }
        }
    });
    tally
}

/// If the edges between non-empty nodes fix every relative offset, the
/// length spanned by any cocone. Each cocone then lives in a window of that
/// length, so larger targets add nothing to the universality check.
pub fn rigid_hull(d: &TapeDiagram) -> Option<usize> {
    let nodes: Vec<&(String, TapeString)> =
        d.nodes().iter().filter(|(_, s)| !s.is_empty()).collect();
    if nodes.is_empty() {
        return Some(0);
    }
    let position = |id: &str| nodes.iter().position(|(n, _)| n == id);
    let edges: Vec<(usize, usize, isize)> = d
        .edges()
        .iter()
        .filter_map(|e| Some((position(&e.from)?, position(&e.to)?, e.offset as isize)))
        .collect();
    let mut rel: Vec<Option<isize>> = vec![None; nodes.len()];
    rel[0] = Some(0);
    let mut changed = true;
    while changed {
        changed = false;
        for &(f, t, off) in &edges {
            match (rel[f], rel[t]) {
                (Some(a), Some(b)) if a != b + off => return None,
                (None, Some(b)) => {
                    rel[f] = Some(b + off);
                    changed = true;
                }
                (Some(a), None) => {
                    rel[t] = Some(a - off);
                    changed = true;
                }
                _ => {}
            }
        }
    }
    let rel: Vec<isize> = rel.into_iter().collect::<Option<_>>()?;
    let lo = *rel.iter().min().unwrap();
    let hi = rel
        .iter()
        .zip(&nodes)
        .map(|(r, (_, s))| r + s.len() as isize)
        .max()
        .unwrap();
    Some((hi - lo) as usize)
}
