//! Colimits of finite diagrams of tapes.
//!
//! Cells of all nodes are identified along the edge occurrences with a
//! union-find; the quotient inherits left-to-right adjacency from the
//! nodes and must come out as a single simple path. Anything else has no
//! colimit in the tape category and is reported as an error.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Write};
use std::sync::Arc;

use thiserror::Error;

use crate::fincat::{
    comma_enumerate, ConstantFunctor, FinCatPresentation, Functor, TapeCategory, TapeSubcategory,
};
use crate::tape::{parse_tape, Alphabet, Occurrence, TapeError, TapeString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("duplicate node {0:?}")]
    DuplicateNode(String),
    #[error("unknown node {0:?}")]
    UnknownNode(String),
    #[error("invalid node id {0:?}")]
    InvalidNodeId(String),
    #[error("edge {from} -> {to}: {source}")]
    BadEdge {
        from: String,
        to: String,
        source: Box<TapeError>,
    },
    #[error("node {node}: {source}")]
    BadNode {
        node: String,
        source: Box<TapeError>,
    },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GlueError {
    #[error("glued cells carry different symbols (nodes {})", .nodes.join(", "))]
    LabelConflict { nodes: Vec<String> },
    #[error("quotient is not a simple path (nodes {})", .nodes.join(", "))]
    NotLinear { nodes: Vec<String> },
    #[error("quotient has {} separate pieces ({})", .components.len(), describe_components(.components))]
    Disconnected { components: Vec<Vec<String>> },
}

fn describe_components(components: &[Vec<String>]) -> String {
    components
        .iter()
        .map(|c| format!("[{}]", c.join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Cell `k` of `from` is identified with cell `offset + k` of `to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramEdge {
    pub from: String,
    pub to: String,
    pub offset: usize,
}

/// A finite diagram in the tape category. Edges need not be closed under
/// composition.
#[derive(Debug, Clone)]
pub struct TapeDiagram {
    alphabet: Arc<Alphabet>,
    nodes: Vec<(String, TapeString)>,
    index: HashMap<String, usize>,
    edges: Vec<DiagramEdge>,
}

impl TapeDiagram {
    pub fn new(alphabet: &Arc<Alphabet>) -> Self {
        TapeDiagram {
            alphabet: Arc::clone(alphabet),
            nodes: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn add_node(
        &mut self,
        id: impl Into<String>,
        value: TapeString,
    ) -> Result<(), DiagramError> {
        let id = id.into();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(DiagramError::InvalidNodeId(id));
        }
        if !value.same_alphabet(&TapeString::empty(&self.alphabet)) {
            return Err(DiagramError::BadNode {
                node: id,
                source: Box::new(TapeError::AlphabetMismatch {
                    left: value.alphabet().to_string(),
                    right: self.alphabet.to_string(),
                }),
            });
        }
        if self.index.contains_key(&id) {
            return Err(DiagramError::DuplicateNode(id));
        }
        self.index.insert(id.clone(), self.nodes.len());
        self.nodes.push((id, value));
        Ok(())
    }

    /// Adds an edge saying `from` occurs in `to` at `offset`.
    pub fn add_edge(&mut self, from: &str, to: &str, offset: usize) -> Result<(), DiagramError> {
        let source = self.node(from)?.clone();
        let target = self.node(to)?.clone();
        let occurrence =
            Occurrence::new(source, target, offset).map_err(|source| DiagramError::BadEdge {
                from: from.to_owned(),
                to: to.to_owned(),
                source: Box::new(source),
            })?;
        self.edges.push(DiagramEdge {
            from: from.to_owned(),
            to: to.to_owned(),
            offset: occurrence.offset(),
        });
        Ok(())
    }

    /// Identifies the cells of `from` with those of `to` starting at
    /// `offset` without comparing symbols. Only the lengths must fit; a
    /// clash shows up as [`GlueError::LabelConflict`] when gluing.
    pub fn add_gluing(&mut self, from: &str, to: &str, offset: usize) -> Result<(), DiagramError> {
        let (source, target) = (self.node(from)?, self.node(to)?);
        let offset = if source.is_empty() { 0 } else { offset };
        if offset
            .checked_add(source.len())
            .is_none_or(|end| end > target.len())
        {
            return Err(DiagramError::BadEdge {
                from: from.to_owned(),
                to: to.to_owned(),
                source: Box::new(TapeError::InvalidOccurrence {
                    source_str: source.to_string(),
                    target: target.to_string(),
                    offset,
                }),
            });
        }
        self.edges.push(DiagramEdge {
            from: from.to_owned(),
            to: to.to_owned(),
            offset,
        });
        Ok(())
    }

    pub fn node(&self, id: &str) -> Result<&TapeString, DiagramError> {
        self.index
            .get(id)
            .map(|&i| &self.nodes[i].1)
            .ok_or_else(|| DiagramError::UnknownNode(id.to_owned()))
    }

    pub fn nodes(&self) -> &[(String, TapeString)] {
        &self.nodes
    }

    pub fn edges(&self) -> &[DiagramEdge] {
        &self.edges
    }

    /// The sub-diagram on the nodes accepted by `keep`, with every edge
    /// between kept nodes.
    pub fn restrict(&self, mut keep: impl FnMut(&str) -> bool) -> TapeDiagram {
        let mut out = TapeDiagram::new(&self.alphabet);
        for (id, s) in &self.nodes {
            if keep(id) {
                out.add_node(id.clone(), s.clone()).unwrap();
            }
        }
        for e in &self.edges {
            if out.index.contains_key(&e.from) && out.index.contains_key(&e.to) {
                out.edges.push(e.clone());
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (id, s) in &self.nodes {
            writeln!(out, "node {id} {s}").unwrap();
        }
        for e in &self.edges {
            writeln!(out, "edge {} {} {}", e.from, e.to, e.offset).unwrap();
        }
        out
    }
}

/// Parses `node ID STRING` and `edge FROM TO OFFSET` lines. Nodes must be
/// declared before edges that use them.
pub fn parse_diagram(alphabet: &Arc<Alphabet>, text: &str) -> Result<TapeDiagram, DiagramError> {
    let mut d = TapeDiagram::new(alphabet);
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let syntax = |message: String| DiagramError::Syntax { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with("//") {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens.as_slice() {
            ["node", id, value] => {
                let value =
                    parse_tape(alphabet, value).map_err(|source| DiagramError::BadNode {
                        node: id.to_string(),
                        source: Box::new(source),
                    })?;
                d.add_node(*id, value)?;
            }
            ["edge", from, to, offset] => {
                let offset: usize = offset
                    .parse()
                    .map_err(|_| syntax(format!("bad offset {offset:?}")))?;
                d.add_edge(from, to, offset)?;
            }
            _ => return Err(syntax(format!("cannot parse {trimmed:?}"))),
        }
    }
    Ok(d)
}

/// A colimiting cocone: the glued tape and the leg of every node into it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GlueResult {
    pub value: TapeString,
    pub legs: BTreeMap<String, Occurrence>,
}

impl fmt::Display for GlueResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "value {}", self.value)?;
        for (id, leg) in &self.legs {
            writeln!(f, "leg {id} {}", leg.offset())?;
        }
        Ok(())
    }
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(size: usize) -> Self {
        DisjointSet {
            parent: (0..size).collect(),
            rank: vec![0; size],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Computes the colimit of `diagram` in the tape category.
pub fn glue(diagram: &TapeDiagram) -> Result<GlueResult, GlueError> {
    let nodes = &diagram.nodes;
    let mut base = Vec::with_capacity(nodes.len());
    let mut total = 0;
    for (_, s) in nodes {
        base.push(total);
        total += s.len();
    }
    let mut owner = Vec::with_capacity(total);
    for (n, (_, s)) in nodes.iter().enumerate() {
        owner.extend(std::iter::repeat_n(n, s.len()));
    }

    let mut dsu = DisjointSet::new(total);
    for e in &diagram.edges {
        let (from, to) = (diagram.index[&e.from], diagram.index[&e.to]);
        for k in 0..nodes[from].1.len() {
            dsu.union(base[from] + k, base[to] + e.offset + k);
        }
    }

    // Number the classes in order of first cell.
    let mut class_of_root = HashMap::new();
    let mut class = Vec::with_capacity(total);
    for cell in 0..total {
        let r = dsu.find(cell);
        let next = class_of_root.len();
        class.push(*class_of_root.entry(r).or_insert(next));
    }
    let classes = class_of_root.len();

    let mut members: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); classes];
    for cell in 0..total {
        members[class[cell]].insert(owner[cell]);
    }
    let names = |set: &BTreeSet<usize>| -> Vec<String> {
        let mut v: Vec<String> = set.iter().map(|&n| nodes[n].0.clone()).collect();
        v.sort();
        v
    };

    let mut label: Vec<Option<u8>> = vec![None; classes];
    for (n, (_, s)) in nodes.iter().enumerate() {
        for (k, &sym) in s.cells().iter().enumerate() {
            let c = class[base[n] + k];
            match label[c] {
                None => label[c] = Some(sym),
                Some(l) if l != sym => {
                    return Err(GlueError::LabelConflict {
                        nodes: names(&members[c]),
                    })
                }
                _ => {}
            }
        }
    }

    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); classes];
    let mut pred: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); classes];
    for (n, (_, s)) in nodes.iter().enumerate() {
        for k in 1..s.len() {
            let (a, b) = (class[base[n] + k - 1], class[base[n] + k]);
            succ[a].insert(b);
            pred[b].insert(a);
        }
    }
    for c in 0..classes {
        if succ[c].len() > 1 || pred[c].len() > 1 || succ[c].contains(&c) {
            let mut involved = members[c].clone();
            for &d in succ[c].iter().chain(pred[c].iter()) {
                involved.extend(members[d].iter().copied());
            }
            return Err(GlueError::NotLinear {
                nodes: names(&involved),
            });
        }
    }

    // Connected components of the undirected adjacency graph.
    let mut component = vec![usize::MAX; classes];
    let mut components = 0;
    for start in 0..classes {
        if component[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component[start] = components;
        while let Some(c) = stack.pop() {
            for &d in succ[c].iter().chain(pred[c].iter()) {
                if component[d] == usize::MAX {
                    component[d] = components;
                    stack.push(d);
                }
            }
        }
        components += 1;
    }
    if components > 1 {
        let mut groups: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); components];
        for c in 0..classes {
            groups[component[c]].extend(members[c].iter().copied());
        }
        let mut listed: Vec<Vec<String>> = groups.iter().map(names).collect();
        listed.sort();
        return Err(GlueError::Disconnected { components: listed });
    }

    let mut position = vec![usize::MAX; classes];
    let mut cells = Vec::with_capacity(classes);
    if classes > 0 {
        let Some(start) = (0..classes).find(|&c| pred[c].is_empty()) else {
            let all: BTreeSet<usize> = (0..nodes.len())
                .filter(|&n| !nodes[n].1.is_empty())
                .collect();
            return Err(GlueError::NotLinear { nodes: names(&all) });
        };
        let mut cur = Some(start);
        while let Some(c) = cur {
            if position[c] != usize::MAX {
                break;
            }
            position[c] = cells.len();
            cells.push(label[c].expect("every class has a cell"));
            cur = succ[c].iter().next().copied();
        }
        if cells.len() != classes {
            let all: BTreeSet<usize> = (0..nodes.len())
                .filter(|&n| !nodes[n].1.is_empty())
                .collect();
            return Err(GlueError::NotLinear { nodes: names(&all) });
        }
    }

    let value = TapeString::from_indices(&diagram.alphabet, cells);
    let legs = nodes
        .iter()
        .enumerate()
        .map(|(n, (id, s))| {
            let offset = if s.is_empty() {
                0
            } else {
                position[class[base[n]]]
            };
            let leg = Occurrence::new(s.clone(), value.clone(), offset)
                .expect("leg lands inside the glued path");
            (id.clone(), leg)
        })
        .collect();
    Ok(GlueResult { value, legs })
}

/// Outcome of checking that a tape is recovered from its generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityOutcome {
    pub holds: bool,
    pub diagnostic: Option<String>,
}

/// The diagram of all ways the generators occur in `x`: one node per
/// occurrence (named `n<i>` in enumeration order) and one edge per
/// generator morphism that makes the triangle over `x` commute.
pub fn generator_diagram(
    x: &TapeString,
    generators: &TapeSubcategory,
) -> (TapeDiagram, Vec<Occurrence>) {
    let over = ConstantFunctor {
        source: FinCatPresentation::terminal(),
        target: TapeCategory::new(generators.alphabet()),
        value: x.clone(),
    };
    let comma = comma_enumerate(&generators.inclusion, &over, Some(x.len()))
        .expect("bound given and sources are finite");
    let mut d = TapeDiagram::new(generators.alphabet());
    let mut placements = Vec::with_capacity(comma.objects.len());
    for (i, o) in comma.objects.iter().enumerate() {
        let a = generators
            .inclusion
            .on_obj(&o.left)
            .expect("inclusion is total");
        d.add_node(format!("n{i}"), a).unwrap();
        placements.push(o.mid.clone());
    }
    for m in &comma.morphisms {
        let occ = generators
            .inclusion
            .on_mor(&m.left)
            .expect("inclusion is total");
        d.add_edge(&format!("n{}", m.from), &format!("n{}", m.to), occ.offset())
            .unwrap();
    }
    (d, placements)
}

/// Checks that `x` is the colimit of its canonical diagram of generators,
/// with legs equal to the generator occurrences.
pub fn density_check(x: &TapeString, generators: &TapeSubcategory) -> DensityOutcome {
    let (diagram, placements) = generator_diagram(x, generators);
    match glue(&diagram) {
        Err(e) => DensityOutcome {
            holds: false,
            diagnostic: Some(e.to_string()),
        },
        Ok(result) if &result.value != x => DensityOutcome {
            holds: false,
            diagnostic: Some(format!("glued {} instead of {x}", result.value)),
        },
        Ok(result) => {
            for (i, p) in placements.iter().enumerate() {
                let leg = &result.legs[&format!("n{i}")];
                if leg.offset() != p.offset() {
                    return DensityOutcome {
                        holds: false,
                        diagnostic: Some(format!("leg of n{i} is {leg}, expected {p}")),
                    };
                }
            }
            DensityOutcome {
                holds: true,
                diagnostic: None,
            }
        }
    }
}
