//! Machines given by a local rule, their causal neighbourhoods, and bounded
//! checks of the machine axioms.
//!
//! A [`Machine`] updates a tape by replacing every window of `2r + 1` cells
//! with the rule's output and dropping the `r` outermost cells on each side.
//! The part `p: A -> U(X)` of an updated tape is explained by the window of
//! `X` that sits at the same offset and is `2r` cells longer; the codomain
//! component of the unit is always the identity on `X`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::fincat::{
    occurrence_name, tape_object_name, FinCatPresentation, Functor, FunctorData, TapeCategory,
    TapeSubcategory, ValidationReport,
};
use crate::tape::{
    self, all_strings, strings_of_length, Alphabet, Occurrence, TapeError, TapeString,
};

mod config;

pub use config::{parse_config, render_config, ConfigError};

/// Windows beyond this many entries are refused.
const MAX_RULE_ENTRIES: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error(transparent)]
    Tape(#[from] TapeError),
    #[error("{part} does not land in the update {expected} of the given state")]
    TargetMismatch { part: String, expected: String },
    #[error("cells {start}..{end} are outside the updated tape of length {len}")]
    RangeOutOfBounds {
        start: usize,
        end: usize,
        len: usize,
    },
    #[error("mutated neighbourhood is unavailable for {0}")]
    MutationUnavailable(String),
}

/// A machine as read from a config file; not necessarily total.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineSpec {
    pub alphabet: Arc<Alphabet>,
    pub radius: usize,
    pub rule: Vec<(String, char)>,
}

impl MachineSpec {
    /// Tabulates `rule` over every window.
    pub fn from_fn(
        alphabet: &Arc<Alphabet>,
        radius: usize,
        rule: impl Fn(&[char]) -> char,
    ) -> Self {
        let entries = strings_of_length(alphabet, 2 * radius + 1)
            .into_iter()
            .map(|w| {
                let chars: Vec<char> = w.symbols().collect();
                (chars.iter().collect::<String>(), rule(&chars))
            })
            .collect();
        MachineSpec {
            alphabet: Arc::clone(alphabet),
            radius,
            rule: entries,
        }
    }

    /// Radius 1 over `{., #}`: a white cell turns black when a neighbour is
    /// black, black cells stay black. Listed in the same order as the
    /// bundled `machines/spread.machine`.
    pub fn black_spread() -> Self {
        let alphabet = Alphabet::binary();
        let mut spec = Self::from_fn(&alphabet, 1, |w| if w.contains(&'#') { '#' } else { '.' });
        spec.rule.reverse();
        spec
    }

    /// Radius 0, every cell unchanged.
    pub fn identity(alphabet: &Arc<Alphabet>) -> Self {
        Self::from_fn(alphabet, 0, |w| w[0])
    }

    pub fn window_len(&self) -> usize {
        self.radius.saturating_mul(2).saturating_add(1)
    }

    pub fn to_config(&self) -> String {
        render_config(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MachineIssue {
    MissingWindow(String),
    BadSymbol { window: String, symbol: char },
    WrongWindowLength { window: String, expected: usize },
    DuplicateWindow(String),
    TooLarge { entries: u128 },
}

impl fmt::Display for MachineIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MachineIssue::MissingWindow(w) => write!(f, "no rule for window {w}"),
            MachineIssue::BadSymbol { window, symbol } => {
                write!(
                    f,
                    "rule entry {window}: symbol {symbol:?} is not in the alphabet"
                )
            }
            MachineIssue::WrongWindowLength { window, expected } => {
                write!(f, "rule entry {window} should have {expected} cells")
            }
            MachineIssue::DuplicateWindow(w) => write!(f, "window {w} is listed twice"),
            MachineIssue::TooLarge { entries } => {
                write!(f, "rule table would need {entries} entries")
            }
        }
    }
}

fn rule_size(alphabet: &Alphabet, window_len: usize) -> u128 {
    let entries =
        u32::try_from(window_len).map_or(u128::MAX, |n| (alphabet.len() as u128).saturating_pow(n));
    // a one-symbol alphabet has a single window, but it can still be huge
    entries.max(window_len as u128)
}

/// Structural checks on a rule table: every window present exactly once,
/// correct lengths, symbols from the alphabet.
pub fn validate_machine(spec: &MachineSpec) -> ValidationReport<MachineIssue> {
    let mut report = ValidationReport::default();
    let len = spec.window_len();
    let size = rule_size(&spec.alphabet, len);
    if size > MAX_RULE_ENTRIES as u128 {
        report.push(MachineIssue::TooLarge { entries: size });
        return report;
    }
    let mut seen = BTreeSet::new();
    for (window, out) in &spec.rule {
        let mut fine = true;
        for c in window.chars().chain(std::iter::once(*out)) {
            if spec.alphabet.index_of(c).is_none() {
                report.push(MachineIssue::BadSymbol {
                    window: window.clone(),
                    symbol: c,
                });
                fine = false;
            }
        }
        if window.chars().count() != len {
            report.push(MachineIssue::WrongWindowLength {
                window: window.clone(),
                expected: len,
            });
            fine = false;
        }
        if fine && !seen.insert(window.clone()) {
            report.push(MachineIssue::DuplicateWindow(window.clone()));
        }
    }
    for w in strings_of_length(&spec.alphabet, len) {
        let name: String = w.symbols().collect();
        if !seen.contains(&name) {
            report.push(MachineIssue::MissingWindow(name));
        }
    }
    report
}

/// A validated machine with a dense rule table.
#[derive(Debug, Clone)]
pub struct Machine {
    spec: MachineSpec,
    table: Vec<u8>,
}

impl Machine {
    pub fn new(spec: MachineSpec) -> Result<Self, ValidationReport<MachineIssue>> {
        let report = validate_machine(&spec);
        if !report.is_ok() {
            return Err(report);
        }
        let size = rule_size(&spec.alphabet, spec.window_len()) as usize;
        let mut table = vec![0u8; size];
        for (window, out) in &spec.rule {
            let idx = window.chars().fold(0usize, |acc, c| {
                acc * spec.alphabet.len() + spec.alphabet.index_of(c).unwrap() as usize
            });
            table[idx] = spec.alphabet.index_of(*out).unwrap();
        }
        Ok(Machine { spec, table })
    }

    pub fn spec(&self) -> &MachineSpec {
        &self.spec
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.spec.alphabet
    }

    pub fn radius(&self) -> usize {
        self.spec.radius
    }

    fn check_alphabet(&self, x: &TapeString) -> Result<(), MachineError> {
        if x.same_alphabet(&TapeString::empty(self.alphabet())) {
            Ok(())
        } else {
            Err(TapeError::AlphabetMismatch {
                left: x.alphabet().to_string(),
                right: self.alphabet().to_string(),
            }
            .into())
        }
    }

    fn lookup(&self, window: &[u8]) -> u8 {
        let base = self.alphabet().len();
        let idx = window
            .iter()
            .fold(0usize, |acc, &c| acc * base + c as usize);
        self.table[idx]
    }

    /// One update step: `U(X)`.
    pub fn apply(&self, x: &TapeString) -> Result<TapeString, MachineError> {
        self.check_alphabet(x)?;
        Ok(self.apply_unchecked(x))
    }

    fn apply_unchecked(&self, x: &TapeString) -> TapeString {
        let w = self.spec.window_len();
        if x.len() < w {
            return TapeString::empty(self.alphabet());
        }
        let cells = x.cells().windows(w).map(|win| self.lookup(win)).collect();
        TapeString::from_indices(self.alphabet(), cells)
    }

    /// The action on morphisms: `U(f): U(X) -> U(Y)` keeps the offset of
    /// `f`, or is the canonical map when `U(X)` is empty.
    pub fn apply_morphism(&self, f: &Occurrence) -> Result<Occurrence, MachineError> {
        self.check_alphabet(f.target())?;
        let ux = self.apply_unchecked(f.source());
        let uy = self.apply_unchecked(f.target());
        Ok(Occurrence::new(ux, uy, f.offset())?)
    }

    /// The causal neighbourhood of `p: A -> U(X)`.
    pub fn causal_neighbourhood(
        &self,
        p: &Occurrence,
        x: &TapeString,
    ) -> Result<Explanation, MachineError> {
        let ux = self.apply(x)?;
        if p.target() != &ux {
            return Err(MachineError::TargetMismatch {
                part: p.to_string(),
                expected: ux.to_string(),
            });
        }
        let a = p.source();
        let window = if a.is_empty() {
            Occurrence::from_empty(x)
        } else {
            Occurrence::window(x, p.offset(), a.len() + 2 * self.radius())
        };
        let un = self.apply_unchecked(window.source());
        let unit = Occurrence::new(a.clone(), un, 0)?;
        Ok(Explanation {
            part: p.clone(),
            state: x.clone(),
            window,
            unit,
        })
    }

    /// Every window `N` of length `|A| + 2r` with `U(N) = A`; `{ε}` for the
    /// empty string.
    pub fn shape_table(&self, a: &TapeString) -> Result<Vec<TapeString>, MachineError> {
        self.check_alphabet(a)?;
        if a.is_empty() {
            return Ok(vec![a.clone()]);
        }
        Ok(
            strings_of_length(self.alphabet(), a.len() + 2 * self.radius())
                .into_iter()
                .filter(|n| &self.apply_unchecked(n) == a)
                .collect(),
        )
    }
}

/// `U` as a functor on the tape category.
#[derive(Debug, Clone)]
pub struct UpdateFunctor<'a> {
    machine: &'a Machine,
    category: TapeCategory,
}

impl<'a> UpdateFunctor<'a> {
    pub fn new(machine: &'a Machine) -> Self {
        UpdateFunctor {
            machine,
            category: TapeCategory::new(machine.alphabet()),
        }
    }
}

impl Functor for UpdateFunctor<'_> {
    type Src = TapeCategory;
    type Tgt = TapeCategory;

    fn source(&self) -> &TapeCategory {
        &self.category
    }

    fn target(&self) -> &TapeCategory {
        &self.category
    }

    fn on_obj(&self, o: &TapeString) -> Option<TapeString> {
        self.machine.apply(o).ok()
    }

    fn on_mor(&self, m: &Occurrence) -> Option<Occurrence> {
        self.machine.apply_morphism(m).ok()
    }
}

/// The value of the causal-neighbourhood assignment at a part
/// `p: A -> U(X)`: a window `N -> X` and the unit `A -> U(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Explanation {
    pub part: Occurrence,
    pub state: TapeString,
    pub window: Occurrence,
    pub unit: Occurrence,
}

impl Explanation {
    pub fn neighbourhood(&self) -> &TapeString {
        self.window.source()
    }

    /// `U(window) ∘ unit == part`.
    pub fn unit_commutes(&self, machine: &Machine) -> bool {
        machine
            .apply_morphism(&self.window)
            .ok()
            .and_then(|uw| tape::compose(&self.unit, &uw).ok())
            .is_some_and(|c| c == self.part)
    }
}

impl fmt::Display for Explanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "part   {}", self.part)?;
        writeln!(f, "state  {}", self.state)?;
        writeln!(f, "window {}", self.window)?;
        write!(f, "unit   {}", self.unit)
    }
}

/// A rule for choosing neighbourhoods. [`CausalNeighbourhood`] is the real
/// one; [`ShiftedWindow`] is a deliberately wrong one used to make sure the
/// universality checker notices.
pub trait NeighbourhoodAssignment: Sync {
    fn explain(
        &self,
        machine: &Machine,
        p: &Occurrence,
        x: &TapeString,
    ) -> Result<Explanation, MachineError>;
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CausalNeighbourhood;

impl NeighbourhoodAssignment for CausalNeighbourhood {
    fn explain(
        &self,
        machine: &Machine,
        p: &Occurrence,
        x: &TapeString,
    ) -> Result<Explanation, MachineError> {
        machine.causal_neighbourhood(p, x)
    }
}

/// Fault injection: moves the window by `shift` cells and uses the first
/// occurrence of the part in the shifted window's update as the unit.
#[derive(Debug, Clone, Copy)]
pub struct ShiftedWindow {
    pub shift: isize,
}

impl NeighbourhoodAssignment for ShiftedWindow {
    fn explain(
        &self,
        machine: &Machine,
        p: &Occurrence,
        x: &TapeString,
    ) -> Result<Explanation, MachineError> {
        let honest = machine.causal_neighbourhood(p, x)?;
        let n = honest.neighbourhood();
        if n.is_empty() {
            return Ok(honest);
        }
        let unavailable = || MachineError::MutationUnavailable(p.to_string());
        let start = honest.window.offset() as isize + self.shift;
        if start < 0 || start as usize + n.len() > x.len() {
            return Err(unavailable());
        }
        let window = Occurrence::window(x, start as usize, n.len());
        let un = machine.apply_unchecked(window.source());
        let unit = tape::hom(p.source(), &un)?
            .into_iter()
            .next()
            .ok_or_else(unavailable)?;
        Ok(Explanation {
            part: p.clone(),
            state: x.clone(),
            window,
            unit,
        })
    }
}

/// Another explanation of `p`: a tape `g: M -> Z` with `γ = (a, b)`,
/// `a: A -> U(M)`, `b: X -> Z`, such that `U(g) ∘ a == U(b) ∘ p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateExplanation {
    pub g: Occurrence,
    pub a: Occurrence,
    pub b: Occurrence,
}

impl fmt::Display for CandidateExplanation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g = {}, a = {}, b = {}", self.g, self.a, self.b)
    }
}

/// A map of explanations `(u, v)` from the chosen window to a candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mediator {
    pub u: Occurrence,
    pub v: Occurrence,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UniversalityBounds {
    pub max_m: usize,
    pub max_z: usize,
}

impl UniversalityBounds {
    /// `|A| + 2r + 2` and `|X| + 2`.
    pub fn default_for(machine: &Machine, part_len: usize, state_len: usize) -> Self {
        UniversalityBounds {
            max_m: part_len + 2 * machine.radius() + 2,
            max_z: state_len + 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateFailure {
    pub candidate: CandidateExplanation,
    pub mediators: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalityReport {
    pub part: Occurrence,
    pub state: TapeString,
    pub bounds: UniversalityBounds,
    /// `Err` holds the reason no explanation could be produced.
    pub explanation: Result<Explanation, String>,
    pub candidates: usize,
    pub failures: Vec<CandidateFailure>,
}

impl UniversalityReport {
    pub fn passes(&self) -> bool {
        self.explanation.is_ok() && self.failures.is_empty()
    }

    pub fn first_counterexample(&self) -> Option<String> {
        if let Err(e) = &self.explanation {
            return Some(format!("part {} over {}: {e}", self.part, self.state));
        }
        self.failures.first().map(|f| {
            format!(
                "part {} over {}: candidate [{}] has {} mediators",
                self.part, self.state, f.candidate, f.mediators
            )
        })
    }
}

/// Every tape of length at most `|x| + extra` that contains `x`.
fn superstrings(x: &TapeString, extra: usize) -> BTreeSet<TapeString> {
    let alphabet = x.alphabet();
    let mut out = BTreeSet::new();
    for total in 0..=extra {
        for pad in strings_of_length(alphabet, total) {
            for split in 0..=total {
                let mut cells = Vec::with_capacity(x.len() + total);
                cells.extend_from_slice(&pad.cells()[..split]);
                cells.extend_from_slice(x.cells());
                cells.extend_from_slice(&pad.cells()[split..]);
                out.insert(TapeString::from_indices(alphabet, cells));
            }
        }
    }
    out
}

/// Every mediator from `explanation` to `candidate`: pairs `(u: N -> M,
/// v: X -> Z)` with `g ∘ u == v ∘ window`, `U(u) ∘ unit == a` and
/// `v ∘ id_X == b`.
pub fn mediators(
    machine: &Machine,
    explanation: &Explanation,
    candidate: &CandidateExplanation,
) -> Vec<Mediator> {
    let n = explanation.neighbourhood();
    let (m, z) = (candidate.g.source(), candidate.g.target());
    let mut out = Vec::new();
    for u in tape::hom_unchecked(n, m) {
        let Ok(uu) = machine.apply_morphism(&u) else {
            continue;
        };
        if tape::compose(&explanation.unit, &uu).ok().as_ref() != Some(&candidate.a) {
            continue;
        }
        let gu = tape::compose(&u, &candidate.g).expect("u lands in M");
        for v in tape::hom_unchecked(&explanation.state, z) {
            let vw = tape::compose(&explanation.window, &v).expect("window lands in X");
            if gu == vw && v == candidate.b {
                out.push(Mediator { u: u.clone(), v });
            }
        }
    }
    out
}

/// Checks the universal property of the explanation of `p` against every
/// candidate explanation within `bounds`: each must receive exactly one
/// mediator.
pub fn universality_check(
    machine: &Machine,
    assignment: &dyn NeighbourhoodAssignment,
    p: &Occurrence,
    x: &TapeString,
    bounds: UniversalityBounds,
) -> Result<UniversalityReport, MachineError> {
    let ux = machine.apply(x)?;
    if p.target() != &ux {
        return Err(MachineError::TargetMismatch {
            part: p.to_string(),
            expected: ux.to_string(),
        });
    }
    let mut report = UniversalityReport {
        part: p.clone(),
        state: x.clone(),
        bounds,
        explanation: Err(String::new()),
        candidates: 0,
        failures: Vec::new(),
    };
    let explanation = match assignment.explain(machine, p, x) {
        Ok(e) => e,
        Err(e) => {
            report.explanation = Err(e.to_string());
            return Ok(report);
        }
    };
    let a_obj = p.source();
    for z in superstrings(x, bounds.max_z.saturating_sub(x.len())) {
        let uz = machine.apply_unchecked(&z);
        for b in tape::hom_unchecked(x, &z) {
            let ub = Occurrence::new(ux.clone(), uz.clone(), b.offset())?;
            let ub_p = tape::compose(p, &ub)?;
            // every (M, g: M -> Z) with |M| <= max_m
            for len in 0..=bounds.max_m.min(z.len()) {
                let starts = if len == 0 { 1 } else { z.len() - len + 1 };
                for start in 0..starts {
                    let g = Occurrence::window(&z, start, len);
                    let um = machine.apply_unchecked(g.source());
                    let ug = Occurrence::new(um.clone(), uz.clone(), g.offset())?;
                    for a in tape::hom_unchecked(a_obj, &um) {
                        if tape::compose(&a, &ug)? != ub_p {
                            continue;
                        }
                        report.candidates += 1;
                        let candidate = CandidateExplanation {
                            g: g.clone(),
                            a,
                            b: b.clone(),
                        };
                        let count = mediators(machine, &explanation, &candidate).len();
                        if count != 1 {
                            report.failures.push(CandidateFailure {
                                candidate,
                                mediators: count,
                            });
                        }
                    }
                }
            }
        }
    }
    report.explanation = Ok(explanation);
    Ok(report)
}

#[derive(Debug, Clone, Default)]
pub struct AdjunctionSweep {
    pub states: usize,
    pub parts: usize,
    pub candidates: usize,
    /// Failing reports, in state order then part order.
    pub failures: Vec<UniversalityReport>,
}

impl AdjunctionSweep {
    pub fn passes(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs [`universality_check`] at default bounds for every part
/// `p: A -> U(X)` with `A` a generator and `|X| <= max_len`.
pub fn adjunction_sweep(
    machine: &Machine,
    assignment: &dyn NeighbourhoodAssignment,
    generators: &TapeSubcategory,
    max_len: usize,
) -> AdjunctionSweep {
    adjunction_sweep_bounded(machine, assignment, generators, max_len, None, None)
}

/// [`adjunction_sweep`] with either bound replaced by a fixed value.
pub fn adjunction_sweep_bounded(
    machine: &Machine,
    assignment: &dyn NeighbourhoodAssignment,
    generators: &TapeSubcategory,
    max_len: usize,
    max_m: Option<usize>,
    max_z: Option<usize>,
) -> AdjunctionSweep {
    let states = all_strings(machine.alphabet(), max_len);
    let per_state: Vec<AdjunctionSweep> = states
        .par_iter()
        .map(|x| {
            let mut acc = AdjunctionSweep {
                states: 1,
                ..Default::default()
            };
            let ux = machine.apply_unchecked(x);
            for a in &generators.strings {
                for p in tape::hom_unchecked(a, &ux) {
                    let mut bounds = UniversalityBounds::default_for(machine, a.len(), x.len());
                    bounds.max_m = max_m.unwrap_or(bounds.max_m);
                    bounds.max_z = max_z.unwrap_or(bounds.max_z);
                    let report = universality_check(machine, assignment, &p, x, bounds)
                        .expect("part lands in U(X)");
                    acc.parts += 1;
                    acc.candidates += report.candidates;
                    if !report.passes() {
                        acc.failures.push(report);
                    }
                }
            }
            acc
        })
        .collect();
    per_state
        .into_iter()
        .fold(AdjunctionSweep::default(), |mut acc, s| {
            acc.states += s.states;
            acc.parts += s.parts;
            acc.candidates += s.candidates;
            acc.failures.extend(s.failures);
            acc
        })
}

/// Proper sub-windows `N' -> N` of a shape-table window that would also
/// explain `A` at the same position. Must be empty for a lawful machine.
pub fn minimality_violations(
    machine: &Machine,
    a: &TapeString,
) -> Result<Vec<Occurrence>, MachineError> {
    let mut out = Vec::new();
    let unit = |n: &TapeString| Occurrence::new(a.clone(), machine.apply_unchecked(n), 0);
    for n in machine.shape_table(a)? {
        if a.is_empty() {
            continue;
        }
        let unit_n = unit(&n)?;
        for len in 0..n.len() {
            let starts = if len == 0 { 1 } else { n.len() - len + 1 };
            for start in 0..starts {
                let sub = Occurrence::window(&n, start, len);
                let usub = machine.apply_morphism(&sub)?;
                let compatible = tape::hom_unchecked(a, usub.source())
                    .iter()
                    .any(|u| tape::compose(u, &usub).ok().as_ref() == Some(&unit_n));
                if compatible {
                    out.push(sub);
                }
            }
        }
    }
    Ok(out)
}

/// An object of the shape category: a generator `A` and a window `N`
/// with `U(N) = A`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ShapeObject {
    pub generator: TapeString,
    pub window: TapeString,
}

impl ShapeObject {
    pub fn name(&self) -> String {
        format!("{},{}", self.generator, self.window)
    }
}

/// `(A, N) -> (A', N')` at `offset`: `A` sits in `A'` and `N` in `N'`
/// at the same offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShapeMorphism {
    pub from: usize,
    pub to: usize,
    pub offset: usize,
}

/// The precomputed category of explained generators. It depends only on
/// the machine and the generators, never on the tape being evaluated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapeCategory {
    alphabet: Arc<Alphabet>,
    pub objects: Vec<ShapeObject>,
    pub morphisms: Vec<ShapeMorphism>,
}

/// Builds the shape category over `generators`.
pub fn shape_category(machine: &Machine, generators: &TapeSubcategory) -> ShapeCategory {
    // Bucket windows by their update so each length is enumerated once.
    let mut by_update: HashMap<TapeString, Vec<TapeString>> = HashMap::new();
    let lengths: BTreeSet<usize> = generators
        .strings
        .iter()
        .filter(|a| !a.is_empty())
        .map(|a| a.len() + 2 * machine.radius())
        .collect();
    for len in lengths {
        for n in strings_of_length(machine.alphabet(), len) {
            by_update
                .entry(machine.apply_unchecked(&n))
                .or_default()
                .push(n);
        }
    }
    let mut objects = Vec::new();
    for a in &generators.strings {
        let windows = if a.is_empty() {
            vec![a.clone()]
        } else {
            by_update.get(a).cloned().unwrap_or_default()
        };
        objects.extend(windows.into_iter().map(|window| ShapeObject {
            generator: a.clone(),
            window,
        }));
    }

    let mut morphisms = Vec::new();
    for (i, s) in objects.iter().enumerate() {
        for (j, t) in objects.iter().enumerate() {
            if s.generator.is_empty() {
                morphisms.push(ShapeMorphism {
                    from: i,
                    to: j,
                    offset: 0,
                });
                continue;
            }
            for w in tape::hom_unchecked(&s.window, &t.window) {
                let Ok(g) = Occurrence::new(s.generator.clone(), t.generator.clone(), w.offset())
                else {
                    continue;
                };
                // unit_t ∘ g == U(w) ∘ unit_s, with both units at offset 0
                let unit_s = Occurrence::new(s.generator.clone(), s.generator.clone(), 0).unwrap();
                let unit_t = Occurrence::new(t.generator.clone(), t.generator.clone(), 0).unwrap();
                let uw = machine.apply_morphism(&w).expect("same alphabet");
                let lhs = tape::compose(&g, &unit_t).unwrap();
                let rhs = tape::compose(&unit_s, &uw).unwrap();
                if lhs == rhs {
                    morphisms.push(ShapeMorphism {
                        from: i,
                        to: j,
                        offset: w.offset(),
                    });
                }
            }
        }
    }
    ShapeCategory {
        alphabet: Arc::clone(machine.alphabet()),
        objects,
        morphisms,
    }
}

impl ShapeCategory {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn find(&self, generator: &TapeString, window: &TapeString) -> Option<usize> {
        self.objects
            .iter()
            .position(|o| &o.generator == generator && &o.window == window)
    }

    pub fn windows_for(&self, generator: &TapeString) -> Vec<TapeString> {
        self.objects
            .iter()
            .filter(|o| &o.generator == generator)
            .map(|o| o.window.clone())
            .collect()
    }

    /// A copy with object `index` and every morphism touching it removed.
    pub fn without_object(&self, index: usize) -> ShapeCategory {
        let remap = |k: usize| if k > index { k - 1 } else { k };
        ShapeCategory {
            alphabet: Arc::clone(&self.alphabet),
            objects: self
                .objects
                .iter()
                .enumerate()
                .filter(|(k, _)| *k != index)
                .map(|(_, o)| o.clone())
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .filter(|m| m.from != index && m.to != index)
                .map(|m| ShapeMorphism {
                    from: remap(m.from),
                    to: remap(m.to),
                    offset: m.offset,
                })
                .collect(),
        }
    }

    fn morphism_name(&self, m: &ShapeMorphism) -> String {
        format!(
            "{}@{}>{}",
            self.objects[m.from].name(),
            m.offset,
            self.objects[m.to].name()
        )
    }

    fn composite(&self, f: &ShapeMorphism, g: &ShapeMorphism) -> ShapeMorphism {
        let offset = if self.objects[f.from].generator.is_empty() {
            0
        } else {
            f.offset + g.offset
        };
        ShapeMorphism {
            from: f.from,
            to: g.to,
            offset,
        }
    }

    pub fn presentation(&self) -> FinCatPresentation {
        let mut p = FinCatPresentation::new();
        for o in &self.objects {
            p.add_object(o.name()).unwrap();
        }
        let index: HashMap<ShapeMorphism, usize> = self
            .morphisms
            .iter()
            .enumerate()
            .map(|(k, m)| (*m, k))
            .collect();
        for m in &self.morphisms {
            p.add_morphism(
                self.morphism_name(m),
                self.objects[m.from].name(),
                self.objects[m.to].name(),
            )
            .unwrap();
        }
        for (i, o) in self.objects.iter().enumerate() {
            let id = ShapeMorphism {
                from: i,
                to: i,
                offset: 0,
            };
            if index.contains_key(&id) {
                p.set_identity(o.name(), self.morphism_name(&id)).unwrap();
            }
        }
        for f in &self.morphisms {
            for g in self.morphisms.iter().filter(|g| g.from == f.to) {
                let h = self.composite(f, g);
                if let Some(&k) = index.get(&h) {
                    p.set_composite(
                        self.morphism_name(g),
                        self.morphism_name(f),
                        self.morphism_name(&self.morphisms[k]),
                    )
                    .unwrap();
                }
            }
        }
        p
    }

    pub fn generator_occurrence(&self, m: &ShapeMorphism) -> Occurrence {
        Occurrence::new(
            self.objects[m.from].generator.clone(),
            self.objects[m.to].generator.clone(),
            m.offset,
        )
        .expect("shape morphisms restrict to generator occurrences")
    }

    pub fn window_occurrence(&self, m: &ShapeMorphism) -> Occurrence {
        Occurrence::new(
            self.objects[m.from].window.clone(),
            self.objects[m.to].window.clone(),
            m.offset,
        )
        .expect("shape morphisms are window occurrences")
    }

    /// `(A, N) ↦ A` into the generator presentation.
    pub fn generator_functor(&self) -> FunctorData<FinCatPresentation, FinCatPresentation> {
        let generators: Vec<TapeString> = {
            let set: BTreeSet<TapeString> =
                self.objects.iter().map(|o| o.generator.clone()).collect();
            set.into_iter().collect()
        };
        let target = TapeSubcategory::full(&self.alphabet, generators);
        FunctorData {
            source: self.presentation(),
            target: target.presentation().clone(),
            object_map: self
                .objects
                .iter()
                .map(|o| (o.name(), tape_object_name(&o.generator)))
                .collect(),
            morphism_map: self
                .morphisms
                .iter()
                .map(|m| {
                    (
                        self.morphism_name(m),
                        occurrence_name(&self.generator_occurrence(m)),
                    )
                })
                .collect(),
        }
    }

    /// `(A, N) ↦ N` into the tape category.
    pub fn window_functor(&self) -> FunctorData<FinCatPresentation, TapeCategory> {
        FunctorData {
            source: self.presentation(),
            target: TapeCategory::new(&self.alphabet),
            object_map: self
                .objects
                .iter()
                .map(|o| (o.name(), o.window.clone()))
                .collect(),
            morphism_map: self
                .morphisms
                .iter()
                .map(|m| (self.morphism_name(m), self.window_occurrence(m)))
                .collect(),
        }
    }
}
