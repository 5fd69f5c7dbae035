//! Finitely presented categories, functors and comma categories.
//!
//! Categories are accessed through the [`Category`] trait so that explicit
//! presentations and the infinite tape category can be mixed: a comma
//! category over tapes is always enumerated up to an explicit size bound.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::tape::{self, all_strings, Alphabet, Occurrence, TapeString};

mod text;

pub use text::{parse_presentation, PresentationParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FinCatError {
    #[error("an explicit size bound is required to enumerate an infinite category")]
    BoundRequired,
    #[error("duplicate object name {0:?}")]
    DuplicateObject(String),
    #[error("duplicate morphism name {0:?}")]
    DuplicateMorphism(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
    #[error("unknown morphism {0:?}")]
    UnknownMorphism(String),
    #[error("invalid name {0:?}: names must be non-empty and contain no whitespace")]
    InvalidName(String),
}

/// Read access to a category.
///
/// Lookups return `None` when the category cannot answer, e.g. a missing
/// composition table entry in an unlawful presentation.
pub trait Category {
    type Obj: Clone + Eq + Ord + fmt::Debug + fmt::Display;
    type Mor: Clone + Eq + Ord + fmt::Debug + fmt::Display;

    fn dom(&self, m: &Self::Mor) -> Option<Self::Obj>;
    fn cod(&self, m: &Self::Mor) -> Option<Self::Obj>;
    fn identity(&self, o: &Self::Obj) -> Option<Self::Mor>;
    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Option<Self::Mor>;
    fn hom(&self, a: &Self::Obj, b: &Self::Obj) -> Vec<Self::Mor>;
    /// All objects, or all objects of size at most `bound`. Infinite
    /// categories fail with [`FinCatError::BoundRequired`] when no bound is given.
    fn objects(&self, bound: Option<usize>) -> Result<Vec<Self::Obj>, FinCatError>;
    fn object_size(&self, _o: &Self::Obj) -> usize {
        0
    }
    fn is_finite(&self) -> bool;
}

/// The tape category over a fixed alphabet; object size is string length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TapeCategory {
    alphabet: Arc<Alphabet>,
}

impl TapeCategory {
    pub fn new(alphabet: &Arc<Alphabet>) -> Self {
        TapeCategory {
            alphabet: Arc::clone(alphabet),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }
}

impl Category for TapeCategory {
    type Obj = TapeString;
    type Mor = Occurrence;

    fn dom(&self, m: &Occurrence) -> Option<TapeString> {
        Some(m.source().clone())
    }

    fn cod(&self, m: &Occurrence) -> Option<TapeString> {
        Some(m.target().clone())
    }

    fn identity(&self, o: &TapeString) -> Option<Occurrence> {
        Some(Occurrence::identity(o))
    }

    fn compose(&self, g: &Occurrence, f: &Occurrence) -> Option<Occurrence> {
        tape::compose(f, g).ok()
    }

    fn hom(&self, a: &TapeString, b: &TapeString) -> Vec<Occurrence> {
        tape::hom(a, b).unwrap_or_default()
    }

    fn objects(&self, bound: Option<usize>) -> Result<Vec<TapeString>, FinCatError> {
        bound
            .map(|b| all_strings(&self.alphabet, b))
            .ok_or(FinCatError::BoundRequired)
    }

    fn object_size(&self, o: &TapeString) -> usize {
        o.len()
    }

    fn is_finite(&self) -> bool {
        false
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MorphismDecl {
    pub name: String,
    pub dom: String,
    pub cod: String,
}

/// An explicit finite category: named objects and morphisms, chosen
/// identities and a composition table keyed by `(g, f)` for `g ∘ f`.
#[derive(Debug, Clone, Default)]
pub struct FinCatPresentation {
    objects: Vec<String>,
    morphisms: Vec<MorphismDecl>,
    identities: BTreeMap<String, String>,
    composition: BTreeMap<(String, String), String>,
    object_index: HashMap<String, usize>,
    morphism_index: HashMap<String, usize>,
}

impl PartialEq for FinCatPresentation {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.composition == other.composition
    }
}

impl Eq for FinCatPresentation {}

fn check_name(name: &str) -> Result<(), FinCatError> {
    if name.is_empty() || name.chars().any(char::is_whitespace) {
        Err(FinCatError::InvalidName(name.to_owned()))
    } else {
        Ok(())
    }
}

impl FinCatPresentation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> Result<(), FinCatError> {
        let name = name.into();
        check_name(&name)?;
        if self.object_index.contains_key(&name) {
            return Err(FinCatError::DuplicateObject(name));
        }
        self.object_index.insert(name.clone(), self.objects.len());
        self.objects.push(name);
        Ok(())
    }

    pub fn add_morphism(
        &mut self,
        name: impl Into<String>,
        dom: impl Into<String>,
        cod: impl Into<String>,
    ) -> Result<(), FinCatError> {
        let (name, dom, cod) = (name.into(), dom.into(), cod.into());
        check_name(&name)?;
        if self.morphism_index.contains_key(&name) {
            return Err(FinCatError::DuplicateMorphism(name));
        }
        for o in [&dom, &cod] {
            if !self.object_index.contains_key(o) {
                return Err(FinCatError::UnknownObject(o.clone()));
            }
        }
        self.morphism_index
            .insert(name.clone(), self.morphisms.len());
        self.morphisms.push(MorphismDecl { name, dom, cod });
        Ok(())
    }

    /// Records `morphism` as the identity of `object`. Only existence is
    /// checked here; typing and unit laws are left to [`validate_category`].
    pub fn set_identity(
        &mut self,
        object: impl Into<String>,
        morphism: impl Into<String>,
    ) -> Result<(), FinCatError> {
        let (object, morphism) = (object.into(), morphism.into());
        if !self.object_index.contains_key(&object) {
            return Err(FinCatError::UnknownObject(object));
        }
        if !self.morphism_index.contains_key(&morphism) {
            return Err(FinCatError::UnknownMorphism(morphism));
        }
        self.identities.insert(object, morphism);
        Ok(())
    }

    /// Records `g ∘ f = h`. Typing is checked by [`validate_category`].
    pub fn set_composite(
        &mut self,
        g: impl Into<String>,
        f: impl Into<String>,
        h: impl Into<String>,
    ) -> Result<(), FinCatError> {
        let (g, f, h) = (g.into(), f.into(), h.into());
        for m in [&g, &f, &h] {
            if !self.morphism_index.contains_key(m) {
                return Err(FinCatError::UnknownMorphism(m.clone()));
            }
        }
        self.composition.insert((g, f), h);
        Ok(())
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_decls(&self) -> &[MorphismDecl] {
        &self.morphisms
    }

    pub fn identities(&self) -> &BTreeMap<String, String> {
        &self.identities
    }

    pub fn composition_table(&self) -> &BTreeMap<(String, String), String> {
        &self.composition
    }

    pub fn morphism(&self, name: &str) -> Option<&MorphismDecl> {
        self.morphism_index.get(name).map(|&i| &self.morphisms[i])
    }

    pub fn has_object(&self, name: &str) -> bool {
        self.object_index.contains_key(name)
    }

    /// The one-object category with only an identity.
    pub fn terminal() -> Self {
        Self::terminal_named("*", "id_*")
    }

    pub fn terminal_named(object: &str, identity: &str) -> Self {
        let mut c = Self::new();
        c.add_object(object).unwrap();
        c.add_morphism(identity, object, object).unwrap();
        c.set_identity(object, identity).unwrap();
        c.set_composite(identity, identity, identity).unwrap();
        c
    }

    pub fn to_text(&self) -> String {
        text::render(self)
    }

    /// The presentation with `objects` removed, together with every
    /// morphism and table entry that mentions them.
    pub fn without(&self, objects: &BTreeSet<String>) -> FinCatPresentation {
        let mut out = FinCatPresentation::new();
        for o in self.objects.iter().filter(|o| !objects.contains(*o)) {
            out.add_object(o.clone()).unwrap();
        }
        let mut kept = BTreeSet::new();
        for m in &self.morphisms {
            if !objects.contains(&m.dom) && !objects.contains(&m.cod) {
                out.add_morphism(m.name.clone(), m.dom.clone(), m.cod.clone())
                    .unwrap();
                kept.insert(m.name.clone());
            }
        }
        for (o, m) in &self.identities {
            if kept.contains(m) && out.has_object(o) {
                out.set_identity(o.clone(), m.clone()).unwrap();
            }
        }
        for ((g, f), h) in &self.composition {
            if kept.contains(g) && kept.contains(f) && kept.contains(h) {
                out.set_composite(g.clone(), f.clone(), h.clone()).unwrap();
            }
        }
        out
    }
}

impl Category for FinCatPresentation {
    type Obj = String;
    type Mor = String;

    fn dom(&self, m: &String) -> Option<String> {
        self.morphism(m).map(|d| d.dom.clone())
    }

    fn cod(&self, m: &String) -> Option<String> {
        self.morphism(m).map(|d| d.cod.clone())
    }

    fn identity(&self, o: &String) -> Option<String> {
        self.identities.get(o).cloned()
    }

    fn compose(&self, g: &String, f: &String) -> Option<String> {
        self.composition.get(&(g.clone(), f.clone())).cloned()
    }

    fn hom(&self, a: &String, b: &String) -> Vec<String> {
        self.morphisms
            .iter()
            .filter(|m| &m.dom == a && &m.cod == b)
            .map(|m| m.name.clone())
            .collect()
    }

    fn objects(&self, _bound: Option<usize>) -> Result<Vec<String>, FinCatError> {
        Ok(self.objects.clone())
    }

    fn is_finite(&self) -> bool {
        true
    }
}

/// A list of law violations; empty means lawful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport<V> {
    pub violations: Vec<V>,
}

impl<V> Default for ValidationReport<V> {
    fn default() -> Self {
        ValidationReport {
            violations: Vec::new(),
        }
    }
}

impl<V> ValidationReport<V> {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn len(&self) -> usize {
        self.violations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(&mut self, v: V) {
        self.violations.push(v);
    }
}

impl<V: fmt::Display> fmt::Display for ValidationReport<V> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("ok");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawViolation {
    MissingIdentity {
        object: String,
    },
    IdentityNotEndo {
        object: String,
        morphism: String,
    },
    MissingComposite {
        g: String,
        f: String,
    },
    /// The table binds `g ∘ f` to a morphism of the wrong type.
    Closure {
        g: String,
        f: String,
        composite: String,
        expected: (String, String),
        found: (String, String),
    },
    /// A table entry for a pair that is not composable.
    NotComposable {
        g: String,
        f: String,
    },
    LeftUnit {
        morphism: String,
    },
    RightUnit {
        morphism: String,
    },
    Associativity {
        h: String,
        g: String,
        f: String,
    },
    // Functor laws.
    FunctorUndefined {
        item: String,
    },
    FunctorTyping {
        morphism: String,
    },
    FunctorIdentity {
        object: String,
    },
    FunctorComposition {
        g: String,
        f: String,
    },
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use LawViolation::*;
        match self {
            MissingIdentity { object } => write!(f, "object {object} has no identity"),
            IdentityNotEndo { object, morphism } => {
                write!(
                    f,
                    "identity {morphism} of {object} is not an endomorphism of {object}"
                )
            }
            MissingComposite { g, f: ff } => write!(f, "composite {g} ∘ {ff} is missing"),
            Closure {
                g,
                f: ff,
                composite,
                expected,
                found,
            } => write!(
                f,
                "composite {g} ∘ {ff} = {composite} has type {} -> {}, expected {} -> {}",
                found.0, found.1, expected.0, expected.1
            ),
            NotComposable { g, f: ff } => {
                write!(f, "table entry for non-composable pair {g} ∘ {ff}")
            }
            LeftUnit { morphism } => write!(f, "id ∘ {morphism} != {morphism}"),
            RightUnit { morphism } => write!(f, "{morphism} ∘ id != {morphism}"),
            Associativity { h, g, f: ff } => {
                write!(f, "({h} ∘ {g}) ∘ {ff} != {h} ∘ ({g} ∘ {ff})")
            }
            FunctorUndefined { item } => write!(f, "functor is undefined on {item}"),
            FunctorTyping { morphism } => {
                write!(f, "functor does not preserve the endpoints of {morphism}")
            }
            FunctorIdentity { object } => {
                write!(f, "functor does not preserve the identity of {object}")
            }
            FunctorComposition { g, f: ff } => {
                write!(f, "functor does not preserve the composite {g} ∘ {ff}")
            }
        }
    }
}

/// Checks identities, closure of the composition table, unit laws and
/// associativity. Each broken table entry is reported once; unit and
/// associativity checks skip instances that depend on a broken entry.
pub fn validate_category(c: &FinCatPresentation) -> ValidationReport<LawViolation> {
    let mut report = ValidationReport::default();
    let morph = |n: &String| c.morphism(n).expect("table names are declared");

    for o in &c.objects {
        match c.identities.get(o) {
            None => report.push(LawViolation::MissingIdentity { object: o.clone() }),
            Some(id) => {
                let d = morph(id);
                if &d.dom != o || &d.cod != o {
                    report.push(LawViolation::IdentityNotEndo {
                        object: o.clone(),
                        morphism: id.clone(),
                    });
                }
            }
        }
    }

    // A table entry is "good" when it exists and has the right type.
    let mut good: HashMap<(&str, &str), &str> = HashMap::new();
    for ((g, f), h) in &c.composition {
        let (gd, fd, hd) = (morph(g), morph(f), morph(h));
        if fd.cod != gd.dom {
            report.push(LawViolation::NotComposable {
                g: g.clone(),
                f: f.clone(),
            });
            continue;
        }
        if hd.dom != fd.dom || hd.cod != gd.cod {
            report.push(LawViolation::Closure {
                g: g.clone(),
                f: f.clone(),
                composite: h.clone(),
                expected: (fd.dom.clone(), gd.cod.clone()),
                found: (hd.dom.clone(), hd.cod.clone()),
            });
            continue;
        }
        good.insert((g.as_str(), f.as_str()), h.as_str());
    }

    let mut outgoing: HashMap<&str, Vec<&MorphismDecl>> = HashMap::new();
    for m in &c.morphisms {
        outgoing.entry(m.dom.as_str()).or_default().push(m);
    }
    let after = |m: &MorphismDecl| -> Vec<&MorphismDecl> {
        outgoing.get(m.cod.as_str()).cloned().unwrap_or_default()
    };

    for f in &c.morphisms {
        for g in after(f) {
            if !c
                .composition
                .contains_key(&(g.name.clone(), f.name.clone()))
            {
                report.push(LawViolation::MissingComposite {
                    g: g.name.clone(),
                    f: f.name.clone(),
                });
            }
        }
    }

    for m in &c.morphisms {
        let idl = c.identities.get(&m.cod);
        let idr = c.identities.get(&m.dom);
        if let Some(idl) = idl {
            if let Some(h) = good.get(&(idl.as_str(), m.name.as_str())) {
                if *h != m.name {
                    report.push(LawViolation::LeftUnit {
                        morphism: m.name.clone(),
                    });
                }
            }
        }
        if let Some(idr) = idr {
            if let Some(h) = good.get(&(m.name.as_str(), idr.as_str())) {
                if *h != m.name {
                    report.push(LawViolation::RightUnit {
                        morphism: m.name.clone(),
                    });
                }
            }
        }
    }

    for f in &c.morphisms {
        for g in after(f) {
            let Some(gf) = good.get(&(g.name.as_str(), f.name.as_str())) else {
                continue;
            };
            for h in after(g) {
                let Some(hg) = good.get(&(h.name.as_str(), g.name.as_str())) else {
                    continue;
                };
                let left = good.get(&(*hg, f.name.as_str()));
                let right = good.get(&(h.name.as_str(), *gf));
                if let (Some(l), Some(r)) = (left, right) {
                    if l != r {
                        report.push(LawViolation::Associativity {
                            h: h.name.clone(),
                            g: g.name.clone(),
                            f: f.name.clone(),
                        });
                    }
                }
            }
        }
    }
    report
}

/// Object and morphism maps between two categories.
pub trait Functor {
    type Src: Category;
    type Tgt: Category;

    fn source(&self) -> &Self::Src;
    fn target(&self) -> &Self::Tgt;
    fn on_obj(&self, o: &<Self::Src as Category>::Obj) -> Option<<Self::Tgt as Category>::Obj>;
    fn on_mor(&self, m: &<Self::Src as Category>::Mor) -> Option<<Self::Tgt as Category>::Mor>;
}

/// A functor given by explicit tables.
#[derive(Debug, Clone)]
pub struct FunctorData<S: Category, T: Category> {
    pub source: S,
    pub target: T,
    pub object_map: BTreeMap<S::Obj, T::Obj>,
    pub morphism_map: BTreeMap<S::Mor, T::Mor>,
}

impl<S: Category, T: Category> Functor for FunctorData<S, T> {
    type Src = S;
    type Tgt = T;

    fn source(&self) -> &S {
        &self.source
    }

    fn target(&self) -> &T {
        &self.target
    }

    fn on_obj(&self, o: &S::Obj) -> Option<T::Obj> {
        self.object_map.get(o).cloned()
    }

    fn on_mor(&self, m: &S::Mor) -> Option<T::Mor> {
        self.morphism_map.get(m).cloned()
    }
}

#[derive(Debug, Clone)]
pub struct IdentityFunctor<C>(pub C);

impl<C: Category> Functor for IdentityFunctor<C> {
    type Src = C;
    type Tgt = C;

    fn source(&self) -> &C {
        &self.0
    }

    fn target(&self) -> &C {
        &self.0
    }

    fn on_obj(&self, o: &C::Obj) -> Option<C::Obj> {
        Some(o.clone())
    }

    fn on_mor(&self, m: &C::Mor) -> Option<C::Mor> {
        Some(m.clone())
    }
}

/// The functor sending everything to one object and its identity.
#[derive(Debug, Clone)]
pub struct ConstantFunctor<S: Category, T: Category> {
    pub source: S,
    pub target: T,
    pub value: T::Obj,
}

impl<S: Category, T: Category> Functor for ConstantFunctor<S, T> {
    type Src = S;
    type Tgt = T;

    fn source(&self) -> &S {
        &self.source
    }

    fn target(&self) -> &T {
        &self.target
    }

    fn on_obj(&self, _o: &S::Obj) -> Option<T::Obj> {
        Some(self.value.clone())
    }

    fn on_mor(&self, _m: &S::Mor) -> Option<T::Mor> {
        self.target.identity(&self.value)
    }
}

/// Every morphism of `c` among `objects`, grouped by (dom, cod) in object order.
fn morphisms_among<C: Category>(c: &C, objects: &[C::Obj]) -> Vec<C::Mor> {
    let mut out = Vec::new();
    for a in objects {
        for b in objects {
            out.extend(c.hom(a, b));
        }
    }
    out
}

/// Checks that `functor` preserves endpoints, identities and composites.
/// Sources that are infinite are checked on objects of size at most `bound`.
pub fn validate_functor<F: Functor>(
    functor: &F,
    bound: Option<usize>,
) -> Result<ValidationReport<LawViolation>, FinCatError> {
    let src = functor.source();
    let tgt = functor.target();
    let objects = src.objects(bound)?;
    let mut report = ValidationReport::default();

    for o in &objects {
        let (Some(fo), Some(id)) = (functor.on_obj(o), src.identity(o)) else {
            report.push(LawViolation::FunctorUndefined {
                item: o.to_string(),
            });
            continue;
        };
        if functor.on_mor(&id) != tgt.identity(&fo) {
            report.push(LawViolation::FunctorIdentity {
                object: o.to_string(),
            });
        }
    }

    let morphisms = morphisms_among(src, &objects);
    let mut by_dom: BTreeMap<SObj<F>, Vec<&SMor<F>>> = BTreeMap::new();
    for m in &morphisms {
        if let Some(d) = src.dom(m) {
            by_dom.entry(d).or_default().push(m);
        }
    }
    for m in &morphisms {
        let Some(fm) = functor.on_mor(m) else {
            report.push(LawViolation::FunctorUndefined {
                item: m.to_string(),
            });
            continue;
        };
        let expect_dom = src.dom(m).and_then(|d| functor.on_obj(&d));
        let expect_cod = src.cod(m).and_then(|c| functor.on_obj(&c));
        if tgt.dom(&fm) != expect_dom || tgt.cod(&fm) != expect_cod {
            report.push(LawViolation::FunctorTyping {
                morphism: m.to_string(),
            });
        }
    }
    for f in &morphisms {
        let Some(mid) = src.cod(f) else { continue };
        for g in by_dom.get(&mid).into_iter().flatten() {
            let Some(gf) = src.compose(g, f) else {
                continue;
            };
            let image = functor.on_mor(&gf);
            let composed = match (functor.on_mor(g), functor.on_mor(f)) {
                (Some(fg), Some(ff)) => tgt.compose(&fg, &ff),
                _ => None,
            };
            if image.is_none() || image != composed {
                report.push(LawViolation::FunctorComposition {
                    g: g.to_string(),
                    f: f.to_string(),
                });
            }
        }
    }
    Ok(report)
}

/// An object `(left, mid: F(left) -> G(right), right)` of `F ↓ G`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CommaObject<L, M, R> {
    pub left: L,
    pub mid: M,
    pub right: R,
}

/// A commuting square between two comma objects, given by index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CommaMorphism<LM, RM> {
    pub from: usize,
    pub to: usize,
    pub left: LM,
    pub right: RM,
}

type SObj<F> = <<F as Functor>::Src as Category>::Obj;
type SMor<F> = <<F as Functor>::Src as Category>::Mor;
type TMor<F> = <<F as Functor>::Tgt as Category>::Mor;

/// A finite fragment of a comma category.
#[derive(Debug, Clone)]
pub struct CommaCategory<LO, LM, M, RO, RM> {
    pub objects: Vec<CommaObject<LO, M, RO>>,
    pub morphisms: Vec<CommaMorphism<LM, RM>>,
}

/// Enumerates `F ↓ G`: every comma object whose middle morphism has a
/// codomain of size at most `bound`, and every comma morphism among them.
/// The bound is mandatory when either source category is infinite.
#[allow(clippy::type_complexity)]
pub fn comma_enumerate<F, G>(
    f: &F,
    g: &G,
    bound: Option<usize>,
) -> Result<CommaCategory<SObj<F>, SMor<F>, TMor<F>, SObj<G>, SMor<G>>, FinCatError>
where
    F: Functor,
    G: Functor<Tgt = F::Tgt>,
{
    if (!f.source().is_finite() || !g.source().is_finite()) && bound.is_none() {
        return Err(FinCatError::BoundRequired);
    }
    let c = f.target();
    let lefts = f.source().objects(bound)?;
    let rights = g.source().objects(bound)?;

    let mut objects = Vec::new();
    for x in &lefts {
        let Some(fx) = f.on_obj(x) else { continue };
        for y in &rights {
            let Some(gy) = g.on_obj(y) else { continue };
            if bound.is_some_and(|b| c.object_size(&gy) > b) {
                continue;
            }
            for p in c.hom(&fx, &gy) {
                objects.push(CommaObject {
                    left: x.clone(),
                    mid: p,
                    right: y.clone(),
                });
            }
        }
    }

    let mut morphisms = Vec::new();
    for (i, a) in objects.iter().enumerate() {
        for (j, b) in objects.iter().enumerate() {
            for lf in f.source().hom(&a.left, &b.left) {
                let Some(flf) = f.on_mor(&lf) else { continue };
                let Some(lower) = c.compose(&b.mid, &flf) else {
                    continue;
                };
                for rg in g.source().hom(&a.right, &b.right) {
                    let Some(grg) = g.on_mor(&rg) else { continue };
                    if c.compose(&grg, &a.mid).as_ref() == Some(&lower) {
                        morphisms.push(CommaMorphism {
                            from: i,
                            to: j,
                            left: lf.clone(),
                            right: rg,
                        });
                    }
                }
            }
        }
    }
    Ok(CommaCategory { objects, morphisms })
}

impl<LO, LM, M, RO, RM> CommaCategory<LO, LM, M, RO, RM>
where
    LO: Clone + Ord,
    LM: Clone + Ord + fmt::Display,
    RO: Clone + Ord,
    RM: Clone + Ord + fmt::Display,
{
    fn object_name(i: usize) -> String {
        format!("c{i}")
    }

    fn morphism_name(k: usize) -> String {
        format!("m{k}")
    }

    /// The fragment as an explicit presentation. Objects are named `c<i>`
    /// and morphisms `m<k>` after their enumeration index. Composites that
    /// fall outside the enumerated fragment are left out of the table.
    pub fn to_presentation<L, R>(&self, left: &L, right: &R) -> FinCatPresentation
    where
        L: Category<Obj = LO, Mor = LM>,
        R: Category<Obj = RO, Mor = RM>,
    {
        let mut p = FinCatPresentation::new();
        for i in 0..self.objects.len() {
            p.add_object(Self::object_name(i)).unwrap();
        }
        let mut index: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (k, m) in self.morphisms.iter().enumerate() {
            p.add_morphism(
                Self::morphism_name(k),
                Self::object_name(m.from),
                Self::object_name(m.to),
            )
            .unwrap();
            index.entry((m.from, m.to)).or_default().push(k);
        }
        for (i, o) in self.objects.iter().enumerate() {
            let (Some(lid), Some(rid)) = (left.identity(&o.left), right.identity(&o.right)) else {
                continue;
            };
            if let Some(&k) = index
                .get(&(i, i))
                .into_iter()
                .flatten()
                .find(|&&k| self.morphisms[k].left == lid && self.morphisms[k].right == rid)
            {
                p.set_identity(Self::object_name(i), Self::morphism_name(k))
                    .unwrap();
            }
        }
        for (a, fm) in self.morphisms.iter().enumerate() {
            for (b, gm) in self.morphisms.iter().enumerate() {
                if fm.to != gm.from {
                    continue;
                }
                let (Some(l), Some(r)) = (
                    left.compose(&gm.left, &fm.left),
                    right.compose(&gm.right, &fm.right),
                ) else {
                    continue;
                };
                let found = index
                    .get(&(fm.from, gm.to))
                    .into_iter()
                    .flatten()
                    .find(|&&k| self.morphisms[k].left == l && self.morphisms[k].right == r);
                if let Some(&k) = found {
                    p.set_composite(
                        Self::morphism_name(b),
                        Self::morphism_name(a),
                        Self::morphism_name(k),
                    )
                    .unwrap();
                }
            }
        }
        p
    }

    /// The domain projection `F ↓ G -> source(F)` as explicit functor data
    /// over [`Self::to_presentation`].
    pub fn domain_projection<L, R>(&self, left: &L, right: &R) -> FunctorData<FinCatPresentation, L>
    where
        L: Category<Obj = LO, Mor = LM> + Clone,
        R: Category<Obj = RO, Mor = RM>,
    {
        FunctorData {
            source: self.to_presentation(left, right),
            target: left.clone(),
            object_map: self
                .objects
                .iter()
                .enumerate()
                .map(|(i, o)| (Self::object_name(i), o.left.clone()))
                .collect(),
            morphism_map: self
                .morphisms
                .iter()
                .enumerate()
                .map(|(k, m)| (Self::morphism_name(k), m.left.clone()))
                .collect(),
        }
    }

    /// The codomain projection `F ↓ G -> source(G)`.
    pub fn codomain_projection<L, R>(
        &self,
        left: &L,
        right: &R,
    ) -> FunctorData<FinCatPresentation, R>
    where
        L: Category<Obj = LO, Mor = LM>,
        R: Category<Obj = RO, Mor = RM> + Clone,
    {
        FunctorData {
            source: self.to_presentation(left, right),
            target: right.clone(),
            object_map: self
                .objects
                .iter()
                .enumerate()
                .map(|(i, o)| (Self::object_name(i), o.right.clone()))
                .collect(),
            morphism_map: self
                .morphisms
                .iter()
                .enumerate()
                .map(|(k, m)| (Self::morphism_name(k), m.right.clone()))
                .collect(),
        }
    }
}

/// Name of a tape string used as an object name in presentations.
pub fn tape_object_name(s: &TapeString) -> String {
    s.to_string()
}

/// Name of an occurrence used as a morphism name in presentations:
/// `SRC@OFFSET>TGT`.
pub fn occurrence_name(o: &Occurrence) -> String {
    format!("{}@{}>{}", o.source(), o.offset(), o.target())
}

/// A full subcategory of tapes on finitely many strings, together with its
/// inclusion functor.
#[derive(Debug, Clone)]
pub struct TapeSubcategory {
    pub strings: Vec<TapeString>,
    pub inclusion: FunctorData<FinCatPresentation, TapeCategory>,
}

impl TapeSubcategory {
    /// The full subcategory on `strings`, with every occurrence among them.
    pub fn full(alphabet: &Arc<Alphabet>, strings: Vec<TapeString>) -> Self {
        let mut p = FinCatPresentation::new();
        let mut object_map = BTreeMap::new();
        let mut morphism_map = BTreeMap::new();
        for s in &strings {
            let name = tape_object_name(s);
            p.add_object(name.clone()).unwrap();
            object_map.insert(name, s.clone());
        }
        let mut occurrences = Vec::new();
        for a in &strings {
            for b in &strings {
                for o in tape::hom(a, b).expect("same alphabet") {
                    let name = occurrence_name(&o);
                    p.add_morphism(name.clone(), tape_object_name(a), tape_object_name(b))
                        .unwrap();
                    morphism_map.insert(name, o.clone());
                    occurrences.push(o);
                }
            }
        }
        for s in &strings {
            p.set_identity(
                tape_object_name(s),
                occurrence_name(&Occurrence::identity(s)),
            )
            .unwrap();
        }
        for f in &occurrences {
            for g in &occurrences {
                if let Ok(gf) = tape::compose(f, g) {
                    p.set_composite(occurrence_name(g), occurrence_name(f), occurrence_name(&gf))
                        .unwrap();
                }
            }
        }
        TapeSubcategory {
            strings,
            inclusion: FunctorData {
                source: p,
                target: TapeCategory::new(alphabet),
                object_map,
                morphism_map,
            },
        }
    }

    /// The dense generators: the empty string and every string of length
    /// one or two.
    pub fn canonical(alphabet: &Arc<Alphabet>) -> Self {
        Self::full(alphabet, all_strings(alphabet, 2))
    }

    pub fn presentation(&self) -> &FinCatPresentation {
        &self.inclusion.source
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.inclusion.target.alphabet()
    }

    pub fn contains(&self, s: &TapeString) -> bool {
        self.strings.contains(s)
    }
}
