//! Normalized rule tables built from a set of axioms.
//!
//! Complex class expressions are replaced by auxiliary class nodes. A node
//! produced by [`SchemaIndex::lhs`] is derived whenever its expression is
//! recognized; a node produced by [`SchemaIndex::rhs`] carries the
//! consequences of its expression. Every rule records the id of the axiom it
//! came from, so derivations can be traced back to axioms.

use std::collections::HashMap;

use crate::model::{Axiom, Characteristic, ClassExpression, Iri};

pub(crate) type ClassId = u32;
pub(crate) type PropId = u32;
pub(crate) type AxId = u32;

pub(crate) const BOTTOM: ClassId = 0;
pub(crate) const TOP: ClassId = 1;

/// A property or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct PNode {
    pub prop: PropId,
    pub inv: bool,
}

impl PNode {
    pub fn fwd(prop: PropId) -> Self {
        PNode { prop, inv: false }
    }
    pub fn bwd(prop: PropId) -> Self {
        PNode { prop, inv: true }
    }
    pub fn flip(self) -> Self {
        PNode {
            prop: self.prop,
            inv: !self.inv,
        }
    }
    pub fn index(self) -> usize {
        self.prop as usize * 2 + self.inv as usize
    }
}

/// `exists_lhs` entry: `∃p.filler ⊑ target`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct ExistsLhs {
    pub filler: ClassId,
    pub target: ClassId,
    pub ax: AxId,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Restriction {
    pub prop: PropId,
    pub filler: ClassId,
    pub ax: AxId,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct MaxCard {
    pub n: u32,
    pub prop: PropId,
    pub filler: ClassId,
    pub ax: AxId,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Disjoint {
    pub a: ClassId,
    pub b: ClassId,
    pub ax: AxId,
    /// Comes from `A ⊑ ¬B` rather than a disjointness axiom.
    pub complement: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Conj {
    pub ops: Vec<ClassId>,
    pub target: ClassId,
    pub ax: AxId,
}

/// `first ∘ second ⊑ target`; longer chains are folded through auxiliary
/// properties.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Chain {
    pub first: PropId,
    pub second: PropId,
    pub target: PropId,
    pub ax: AxId,
}

#[derive(Default)]
pub(crate) struct SchemaIndex {
    pub axioms: Vec<Axiom>,
    pub class_names: Vec<Option<Iri>>,
    pub class_exprs: Vec<ClassExpression>,
    class_ids: HashMap<Iri, ClassId>,
    expr_cache: HashMap<(ClassExpression, AxId, bool), ClassId>,
    pub prop_names: Vec<Option<Iri>>,
    prop_ids: HashMap<Iri, PropId>,

    pub edges: Vec<Vec<(ClassId, AxId)>>,
    pub exists_rhs: Vec<Vec<Restriction>>,
    pub forall_rhs: Vec<Vec<Restriction>>,
    pub max_card: Vec<Vec<MaxCard>>,
    pub disjoint: Vec<Disjoint>,
    pub conj: Vec<Conj>,
    /// Keyed by property.
    pub exists_lhs: HashMap<PropId, Vec<ExistsLhs>>,
    /// Indexed by [`PNode::index`]; the backward node of `p` holds its ranges.
    pub prop_edges: Vec<Vec<(PNode, AxId)>>,
    pub domains: Vec<Vec<(ClassId, AxId)>>,
    pub domain_exprs: Vec<Vec<(ClassExpression, AxId)>>,
    pub characteristics: Vec<Vec<(Characteristic, AxId)>>,
    pub chains: Vec<Chain>,
    /// Class node of each class assertion, keyed by axiom id.
    pub assertion_class: HashMap<AxId, ClassId>,
}

impl SchemaIndex {
    pub fn new() -> Self {
        let mut ix = SchemaIndex::default();
        ix.new_class(None, ClassExpression::Bottom);
        ix.new_class(None, ClassExpression::Top);
        ix
    }

    pub fn build<'a>(axioms: impl IntoIterator<Item = &'a Axiom>) -> Self {
        let mut ix = SchemaIndex::new();
        for axiom in axioms {
            ix.add(axiom.clone());
        }
        ix
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    pub fn prop_count(&self) -> usize {
        self.prop_names.len()
    }

    fn new_class(&mut self, name: Option<Iri>, expr: ClassExpression) -> ClassId {
        let id = self.class_names.len() as ClassId;
        self.class_names.push(name);
        self.class_exprs.push(expr);
        self.edges.push(Vec::new());
        self.exists_rhs.push(Vec::new());
        self.forall_rhs.push(Vec::new());
        self.max_card.push(Vec::new());
        id
    }

    pub fn class(&mut self, iri: &Iri) -> ClassId {
        if let Some(&id) = self.class_ids.get(iri) {
            return id;
        }
        let id = self.new_class(Some(iri.clone()), ClassExpression::Named(iri.clone()));
        self.class_ids.insert(iri.clone(), id);
        id
    }

    pub fn class_id(&self, iri: &Iri) -> Option<ClassId> {
        self.class_ids.get(iri).copied()
    }

    fn new_prop(&mut self, name: Option<Iri>) -> PropId {
        let id = self.prop_names.len() as PropId;
        self.prop_names.push(name);
        for _ in 0..2 {
            self.prop_edges.push(Vec::new());
            self.domains.push(Vec::new());
            self.domain_exprs.push(Vec::new());
        }
        self.characteristics.push(Vec::new());
        id
    }

    pub fn prop(&mut self, iri: &Iri) -> PropId {
        if let Some(&id) = self.prop_ids.get(iri) {
            return id;
        }
        let id = self.new_prop(Some(iri.clone()));
        self.prop_ids.insert(iri.clone(), id);
        id
    }

    pub fn prop_id(&self, iri: &Iri) -> Option<PropId> {
        self.prop_ids.get(iri).copied()
    }

    /// A fresh class node with no rules attached.
    pub fn aux_node(&mut self, description: ClassExpression) -> ClassId {
        self.new_class(None, description)
    }

    fn aux(&mut self, expr: &ClassExpression, ax: AxId, lhs: bool) -> (ClassId, bool) {
        let key = (expr.clone(), ax, lhs);
        if let Some(&id) = self.expr_cache.get(&key) {
            return (id, false);
        }
        let id = self.new_class(None, expr.clone());
        self.expr_cache.insert(key, id);
        (id, true)
    }

    /// A node derived for everything recognized as an instance of `ce`, or
    /// `None` when the rule fragment cannot recognize `ce`.
    pub fn lhs(&mut self, ce: &ClassExpression, ax: AxId) -> Option<ClassId> {
        match ce {
            ClassExpression::Top => Some(TOP),
            ClassExpression::Bottom => Some(BOTTOM),
            ClassExpression::Named(iri) => Some(self.class(iri)),
            ClassExpression::MinCardinality { n: 0, .. } => Some(TOP),
            _ => {
                let (node, fresh) = self.aux(ce, ax, true);
                if !fresh {
                    return Some(node);
                }
                match ce {
                    ClassExpression::UnionOf(ops) => {
                        for op in ops {
                            if let Some(o) = self.lhs(op, ax) {
                                self.edges[o as usize].push((node, ax));
                            }
                        }
                        Some(node)
                    }
                    ClassExpression::IntersectionOf(ops) => {
                        let ids: Option<Vec<ClassId>> = ops.iter().map(|op| self.lhs(op, ax)).collect();
                        let mut ids = ids?;
                        ids.sort_unstable();
                        ids.dedup();
                        self.conj.push(Conj {
                            ops: ids,
                            target: node,
                            ax,
                        });
                        Some(node)
                    }
                    ClassExpression::SomeValuesFrom { property, filler }
                    | ClassExpression::MinCardinality {
                        n: 1,
                        property,
                        filler,
                    } => {
                        let f = self.lhs(filler, ax)?;
                        let p = self.prop(property);
                        self.exists_lhs.entry(p).or_default().push(ExistsLhs {
                            filler: f,
                            target: node,
                            ax,
                        });
                        Some(node)
                    }
                    _ => None,
                }
            }
        }
    }

    /// A node whose instances satisfy `ce`, with the consequences of `ce`
    /// attached as rules.
    pub fn rhs(&mut self, ce: &ClassExpression, ax: AxId) -> ClassId {
        match ce {
            ClassExpression::Top => TOP,
            ClassExpression::Bottom => BOTTOM,
            ClassExpression::Named(iri) => self.class(iri),
            ClassExpression::MinCardinality { n: 0, .. } => TOP,
            _ => {
                let (node, fresh) = self.aux(ce, ax, false);
                if !fresh {
                    return node;
                }
                match ce {
                    ClassExpression::IntersectionOf(ops) => {
                        for op in ops {
                            let o = self.rhs(op, ax);
                            self.edges[node as usize].push((o, ax));
                        }
                    }
                    ClassExpression::ComplementOf(inner) => {
                        if let Some(f) = self.lhs(inner, ax) {
                            self.disjoint.push(Disjoint {
                                a: node,
                                b: f,
                                ax,
                                complement: true,
                            });
                        }
                    }
                    ClassExpression::SomeValuesFrom { property, filler }
                    | ClassExpression::MinCardinality {
                        property, filler, ..
                    } => {
                        let prop = self.prop(property);
                        let filler = self.rhs(filler, ax);
                        self.exists_rhs[node as usize].push(Restriction { prop, filler, ax });
                    }
                    ClassExpression::ExactCardinality { n, property, filler } => {
                        let prop = self.prop(property);
                        if *n > 0 {
                            let f = self.rhs(filler, ax);
                            self.exists_rhs[node as usize].push(Restriction {
                                prop,
                                filler: f,
                                ax,
                            });
                        }
                        if let Some(f) = self.lhs(filler, ax) {
                            self.max_card[node as usize].push(MaxCard {
                                n: *n,
                                prop,
                                filler: f,
                                ax,
                            });
                        }
                    }
                    ClassExpression::AllValuesFrom { property, filler } => {
                        let prop = self.prop(property);
                        let filler = self.rhs(filler, ax);
                        self.forall_rhs[node as usize].push(Restriction { prop, filler, ax });
                    }
                    ClassExpression::MaxCardinality { n, property, filler } => {
                        let prop = self.prop(property);
                        if let Some(f) = self.lhs(filler, ax) {
                            self.max_card[node as usize].push(MaxCard {
                                n: *n,
                                prop,
                                filler: f,
                                ax,
                            });
                        }
                    }
                    // Disjunctions carry no rule in this fragment.
                    _ => {}
                }
                node
            }
        }
    }

    fn prop_edge(&mut self, from: PNode, to: PNode, ax: AxId) {
        self.prop_edges[from.index()].push((to, ax));
        self.prop_edges[from.flip().index()].push((to.flip(), ax));
    }

    fn subclass(&mut self, sub: &ClassExpression, sup: &ClassExpression, ax: AxId) {
        if let Some(l) = self.lhs(sub, ax) {
            let r = self.rhs(sup, ax);
            if l != r {
                self.edges[l as usize].push((r, ax));
            }
        }
    }

    /// Adds an axiom and returns its id. Assertions produce no rules; the
    /// ABox engine interprets them.
    pub fn add(&mut self, axiom: Axiom) -> AxId {
        let ax = self.axioms.len() as AxId;
        self.axioms.push(axiom.clone());
        match &axiom {
            Axiom::SubClassOf { sub, sup } => self.subclass(sub, sup, ax),
            Axiom::EquivalentClasses(ops) => {
                for (i, a) in ops.iter().enumerate() {
                    for (j, b) in ops.iter().enumerate() {
                        if i != j {
                            self.subclass(a, b, ax);
                        }
                    }
                }
            }
            Axiom::DisjointClasses(ops) => {
                let ids: Vec<Option<ClassId>> = ops.iter().map(|op| self.lhs(op, ax)).collect();
                for i in 0..ids.len() {
                    for j in i + 1..ids.len() {
                        if let (Some(a), Some(b)) = (ids[i], ids[j]) {
                            self.disjoint.push(Disjoint {
                                a,
                                b,
                                ax,
                                complement: false,
                            });
                        }
                    }
                }
            }
            Axiom::SubObjectPropertyOf { sub, sup } => {
                let (p, q) = (self.prop(sub), self.prop(sup));
                self.prop_edge(PNode::fwd(p), PNode::fwd(q), ax);
            }
            Axiom::EquivalentObjectProperties(ps) => {
                let ids: Vec<PropId> = ps.iter().map(|p| self.prop(p)).collect();
                for &a in &ids {
                    for &b in &ids {
                        if a != b {
                            self.prop_edge(PNode::fwd(a), PNode::fwd(b), ax);
                        }
                    }
                }
            }
            Axiom::InverseObjectProperties(p, q) => {
                let (p, q) = (self.prop(p), self.prop(q));
                self.prop_edge(PNode::fwd(p), PNode::bwd(q), ax);
                self.prop_edge(PNode::bwd(q), PNode::fwd(p), ax);
            }
            Axiom::ObjectPropertyDomain { property, domain } => {
                let p = self.prop(property);
                let d = self.rhs(domain, ax);
                self.domains[PNode::fwd(p).index()].push((d, ax));
                self.domain_exprs[PNode::fwd(p).index()].push((domain.clone(), ax));
            }
            Axiom::ObjectPropertyRange { property, range } => {
                let p = self.prop(property);
                let r = self.rhs(range, ax);
                self.domains[PNode::bwd(p).index()].push((r, ax));
                self.domain_exprs[PNode::bwd(p).index()].push((range.clone(), ax));
            }
            Axiom::Characteristic {
                property,
                characteristic,
            } => {
                let p = self.prop(property);
                self.characteristics[p as usize].push((*characteristic, ax));
                if *characteristic == Characteristic::Symmetric {
                    self.prop_edge(PNode::fwd(p), PNode::bwd(p), ax);
                }
            }
            Axiom::SubPropertyChainOf { chain, sup } => {
                let target = self.prop(sup);
                let ids: Vec<PropId> = chain.iter().map(|p| self.prop(p)).collect();
                match ids.len() {
                    0 => {}
                    1 => self.prop_edge(PNode::fwd(ids[0]), PNode::fwd(target), ax),
                    n => {
                        let mut current = ids[0];
                        for &next in &ids[1..n - 1] {
                            let aux = self.new_prop(None);
                            self.chains.push(Chain {
                                first: current,
                                second: next,
                                target: aux,
                                ax,
                            });
                            current = aux;
                        }
                        self.chains.push(Chain {
                            first: current,
                            second: ids[n - 1],
                            target,
                            ax,
                        });
                    }
                }
            }
            Axiom::ClassAssertion { class, .. } => {
                let node = self.rhs(class, ax);
                self.assertion_class.insert(ax, node);
            }
            Axiom::ObjectPropertyAssertion { property, .. } => {
                self.prop(property);
            }
        }
        ax
    }
}
