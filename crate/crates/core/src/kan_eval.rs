//! Evaluating a machine without its rule.
//!
//! Given only the precomputed [`ShapeCategory`], the update of `X` is the
//! colimit of the generators whose explaining windows occur in `X`: every
//! placement of a window becomes a node labelled by its generator, and the
//! shape morphisms between generators of adjacent sizes say how the nodes
//! overlap.

use std::collections::HashMap;
use std::fmt;
use std::ops::Range;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::colimit::{glue, GlueError, GlueResult, TapeDiagram};
use crate::fincat::TapeSubcategory;
use crate::machine::{
    shape_category, Explanation, Machine, MachineError, ShapeCategory, ShapeMorphism,
};
use crate::tape::{self, all_strings, Occurrence, TapeError, TapeString};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Tape(#[from] TapeError),
    #[error(transparent)]
    Glue(#[from] GlueError),
}

/// A window of the shape category placed in the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexedNode {
    pub object: usize,
    pub placement: Occurrence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEdge {
    pub from: usize,
    pub to: usize,
    pub morphism: ShapeMorphism,
}

#[derive(Debug, Clone)]
pub struct EvalTrace {
    pub input: TapeString,
    pub nodes: Vec<IndexedNode>,
    pub edges: Vec<TraceEdge>,
    pub diagram: TapeDiagram,
    pub output: Result<GlueResult, GlueError>,
}

pub fn node_id(index: usize) -> String {
    format!("n{index}")
}

impl EvalTrace {
    pub fn value(&self) -> Result<&TapeString, &GlueError> {
        self.output.as_ref().map(|r| &r.value)
    }

    /// Rechecks every edge: the source placement must factor through the
    /// target placement along the window occurrence.
    pub fn edges_commute(&self, shape: &ShapeCategory) -> bool {
        self.edges.iter().all(|e| {
            let w = shape.window_occurrence(&e.morphism);
            tape::compose(&w, &self.nodes[e.to].placement).ok().as_ref()
                == Some(&self.nodes[e.from].placement)
        })
    }

    pub fn render(&self, shape: &ShapeCategory) -> String {
        let mut out = String::new();
        use std::fmt::Write;
        writeln!(out, "input {}", self.input).unwrap();
        for (i, n) in self.nodes.iter().enumerate() {
            writeln!(
                out,
                "place {} {} {}",
                node_id(i),
                shape.objects[n.object].name(),
                n.placement.offset()
            )
            .unwrap();
        }
        out.push_str(&self.diagram.to_text());
        match &self.output {
            Ok(r) => {
                for (i, _) in self.nodes.iter().enumerate() {
                    let id = node_id(i);
                    writeln!(out, "leg {id} {}", r.legs[&id].offset()).unwrap();
                }
                writeln!(out, "output {}", r.value).unwrap();
            }
            Err(e) => writeln!(out, "error {e}").unwrap(),
        }
        out
    }
}

/// Builds the diagram of placed windows and glues it.
pub fn evaluate_traced(shape: &ShapeCategory, x: &TapeString) -> Result<EvalTrace, EvalError> {
    if !x.same_alphabet(&TapeString::empty(shape.alphabet())) {
        return Err(TapeError::AlphabetMismatch {
            left: x.alphabet().to_string(),
            right: shape.alphabet().to_string(),
        }
        .into());
    }

    let mut nodes = Vec::new();
    let mut by_placement: HashMap<(usize, usize), usize> = HashMap::new();
    let mut per_object: Vec<Vec<usize>> = vec![Vec::new(); shape.objects.len()];
    for (k, obj) in shape.objects.iter().enumerate() {
        for placement in tape::hom(&obj.window, x)? {
            by_placement.insert((k, placement.offset()), nodes.len());
            per_object[k].push(nodes.len());
            nodes.push(IndexedNode {
                object: k,
                placement,
            });
        }
    }

    let mut edges = Vec::new();
    for m in &shape.morphisms {
        let (from, to) = (&shape.objects[m.from], &shape.objects[m.to]);
        if to.generator.len() != from.generator.len() + 1 {
            continue;
        }
        for &target in &per_object[m.to] {
            let offset = if from.window.is_empty() {
                0
            } else {
                nodes[target].placement.offset() + m.offset
            };
            let source = by_placement[&(m.from, offset)];
            edges.push(TraceEdge {
                from: source,
                to: target,
                morphism: *m,
            });
        }
    }

    let mut diagram = TapeDiagram::new(shape.alphabet());
    for (i, n) in nodes.iter().enumerate() {
        diagram
            .add_node(node_id(i), shape.objects[n.object].generator.clone())
            .expect("fresh ids");
    }
    for e in &edges {
        diagram
            .add_edge(&node_id(e.from), &node_id(e.to), e.morphism.offset)
            .expect("shape morphisms restrict to generator occurrences");
    }
    let output = glue(&diagram);
    Ok(EvalTrace {
        input: x.clone(),
        nodes,
        edges,
        diagram,
        output,
    })
}

/// The update of `x` computed from the shape category alone.
pub fn evaluate(shape: &ShapeCategory, x: &TapeString) -> Result<TapeString, EvalError> {
    let trace = evaluate_traced(shape, x)?;
    Ok(trace.output?.value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub input: TapeString,
    pub expected: TapeString,
    pub got: Result<TapeString, String>,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.got {
            Ok(v) => write!(
                f,
                "{}: oracle {} categorical {}",
                self.input, self.expected, v
            ),
            Err(e) => write!(
                f,
                "{}: oracle {} categorical error: {e}",
                self.input, self.expected
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub inputs: usize,
    pub max_len: usize,
    /// In input order.
    pub mismatches: Vec<Mismatch>,
    pub elapsed: Duration,
}

impl SweepReport {
    pub fn passes(&self) -> bool {
        self.mismatches.is_empty()
    }

    /// The stable one-line summary, without timing.
    pub fn summary(&self) -> String {
        format!(
            "inputs={} mismatches={} max_len={}",
            self.inputs,
            self.mismatches.len(),
            self.max_len
        )
    }
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} elapsed={:.3}s",
            self.summary(),
            self.elapsed.as_secs_f64()
        )
    }
}

/// Compares [`evaluate`] with the machine's own update on every tape of
/// length at most `max_len`.
pub fn equivalence_sweep(machine: &Machine, shape: &ShapeCategory, max_len: usize) -> SweepReport {
    let start = Instant::now();
    let inputs = all_strings(machine.alphabet(), max_len);
    let mismatches: Vec<Mismatch> = inputs
        .par_iter()
        .filter_map(|x| {
            let expected = machine.apply(x).expect("same alphabet");
            let got = evaluate(shape, x).map_err(|e| e.to_string());
            (got.as_ref() != Ok(&expected)).then(|| Mismatch {
                input: x.clone(),
                expected,
                got,
            })
        })
        .collect();
    SweepReport {
        inputs: inputs.len(),
        max_len,
        mismatches,
        elapsed: start.elapsed(),
    }
}

/// [`equivalence_sweep`] against the shape category over the canonical
/// generators.
pub fn canonical_sweep(machine: &Machine, max_len: usize) -> SweepReport {
    let generators = TapeSubcategory::canonical(machine.alphabet());
    let shape = shape_category(machine, &generators);
    equivalence_sweep(machine, &shape, max_len)
}

/// The causal neighbourhood of the cells `range` of `U(x)`.
pub fn explain(
    machine: &Machine,
    x: &TapeString,
    range: Range<usize>,
) -> Result<Explanation, MachineError> {
    let ux = machine.apply(x)?;
    if range.start > range.end || range.end > ux.len() {
        return Err(MachineError::RangeOutOfBounds {
            start: range.start,
            end: range.end,
            len: ux.len(),
        });
    }
    let p = Occurrence::window(&ux, range.start, range.len());
    machine.causal_neighbourhood(&p, x)
}
