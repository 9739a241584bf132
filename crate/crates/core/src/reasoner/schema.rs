//! Schema classification: class and property hierarchies, unsatisfiability
//! and the materialized closure.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::index::{AxId, ClassId, PNode, PropId, SchemaIndex, BOTTOM, TOP};
use super::{Conclusion, Justification, SchemaClosure, UnsatReport};
use crate::model::{Axiom, Characteristic, ClassExpression, EntityRef, Iri, Ontology, Provenance};

/// Saturated schema state.
pub(crate) struct Analysis {
    pub ix: SchemaIndex,
    /// Per property node, every node reachable from it (itself included).
    prop_anc: Vec<Vec<PNode>>,
    prop_scc: Vec<usize>,
    adj: Vec<Vec<(ClassId, usize)>>,
    reasons: Vec<Vec<AxId>>,
    known_edges: HashSet<(ClassId, ClassId)>,
    scc_of: Vec<usize>,
    anc_scc: Vec<Vec<ClassId>>,
    dom_nodes: Vec<(ClassId, ClassId)>,
    pub unsat_props: BTreeMap<PropId, Vec<AxId>>,
}

fn union(parts: &[&[AxId]]) -> Vec<AxId> {
    let mut out: Vec<AxId> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

impl Analysis {
    pub fn new<'a>(axioms: impl IntoIterator<Item = &'a Axiom>) -> Self {
        let ix = SchemaIndex::build(axioms);
        let mut a = Analysis {
            ix,
            prop_anc: Vec::new(),
            prop_scc: Vec::new(),
            adj: Vec::new(),
            reasons: vec![Vec::new()],
            known_edges: HashSet::new(),
            scc_of: Vec::new(),
            anc_scc: Vec::new(),
            dom_nodes: Vec::new(),
            unsat_props: BTreeMap::new(),
        };
        a.close_properties();
        a.build_class_graph();
        a.saturate();
        a
    }

    fn close_properties(&mut self) {
        let n = self.ix.prop_count() * 2;
        let node = |i: usize| PNode {
            prop: (i / 2) as PropId,
            inv: i % 2 == 1,
        };
        let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
        for _ in 0..n {
            g.add_node(());
        }
        for i in 0..n {
            for (to, _) in &self.ix.prop_edges[i] {
                g.add_edge(NodeIndex::new(i), NodeIndex::new(to.index()), ());
            }
        }
        self.prop_scc = vec![0; n];
        for (c, comp) in tarjan_scc(&g).into_iter().enumerate() {
            for v in comp {
                self.prop_scc[v.index()] = c;
            }
        }
        self.prop_anc = (0..n)
            .map(|i| {
                let mut seen = vec![false; n];
                let mut queue = VecDeque::from([i]);
                seen[i] = true;
                let mut out = Vec::new();
                while let Some(v) = queue.pop_front() {
                    out.push(node(v));
                    for (to, _) in &self.ix.prop_edges[v] {
                        if !seen[to.index()] {
                            seen[to.index()] = true;
                            queue.push_back(to.index());
                        }
                    }
                }
                out.sort_unstable();
                out
            })
            .collect();
    }

    pub fn prop_ancestors(&self, n: PNode) -> &[PNode] {
        &self.prop_anc[n.index()]
    }

    pub fn same_prop_scc(&self, a: PNode, b: PNode) -> bool {
        self.prop_scc[a.index()] == self.prop_scc[b.index()]
    }

    /// Axioms on a shortest property-graph path.
    pub fn prop_path(&self, from: PNode, to: PNode) -> Vec<AxId> {
        if from == to {
            return Vec::new();
        }
        let n = self.ix.prop_count() * 2;
        let mut parent: Vec<Option<(usize, AxId)>> = vec![None; n];
        let mut queue = VecDeque::from([from.index()]);
        let mut seen = vec![false; n];
        seen[from.index()] = true;
        while let Some(v) = queue.pop_front() {
            if v == to.index() {
                break;
            }
            for (next, ax) in &self.ix.prop_edges[v] {
                if !seen[next.index()] {
                    seen[next.index()] = true;
                    parent[next.index()] = Some((v, *ax));
                    queue.push_back(next.index());
                }
            }
        }
        let mut out = Vec::new();
        let mut v = to.index();
        while let Some((p, ax)) = parent[v] {
            out.push(ax);
            v = p;
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn add_edge(&mut self, from: ClassId, to: ClassId, reason: Vec<AxId>) -> bool {
        if from == to || !self.known_edges.insert((from, to)) {
            return false;
        }
        let id = if reason.is_empty() {
            0
        } else {
            self.reasons.push(reason);
            self.reasons.len() - 1
        };
        self.adj[from as usize].push((to, id));
        true
    }

    fn build_class_graph(&mut self) {
        let props = self.ix.prop_count();
        for p in 0..props as PropId {
            let name = self.ix.prop_names[p as usize]
                .clone()
                .unwrap_or_else(|| Iri::new_unchecked("urn:kgdistill:aux"));
            let dom = self.ix.aux_node(ClassExpression::some(name.clone(), ClassExpression::Top));
            let ran = self.ix.aux_node(ClassExpression::some(name, ClassExpression::Top));
            self.dom_nodes.push((dom, ran));
        }
        self.adj = vec![Vec::new(); self.ix.class_count()];
        for c in 0..self.ix.class_count() {
            for (to, ax) in self.ix.edges[c].clone() {
                self.add_edge(c as ClassId, to, vec![ax]);
            }
            if c as ClassId != TOP && c as ClassId != BOTTOM {
                self.add_edge(c as ClassId, TOP, Vec::new());
            }
        }
        for p in 0..props as PropId {
            let (dom, ran) = self.dom_nodes[p as usize];
            for (start, node) in [(PNode::fwd(p), dom), (PNode::bwd(p), ran)] {
                for n in self.prop_anc[start.index()].clone() {
                    let path = self.prop_path(start, n);
                    for (d, dax) in self.ix.domains[n.index()].clone() {
                        self.add_edge(node, d, union(&[&path, &[dax]]));
                    }
                }
            }
        }
    }

    fn compute_ancestors(&mut self) {
        let n = self.adj.len();
        let mut g = DiGraph::<(), ()>::with_capacity(n, 0);
        for _ in 0..n {
            g.add_node(());
        }
        for (from, tos) in self.adj.iter().enumerate() {
            for (to, _) in tos {
                g.add_edge(NodeIndex::new(from), NodeIndex::new(*to as usize), ());
            }
        }
        // Components come out in reverse topological order: successors first.
        let sccs = tarjan_scc(&g);
        self.scc_of = vec![0; n];
        for (c, comp) in sccs.iter().enumerate() {
            for v in comp {
                self.scc_of[v.index()] = c;
            }
        }
        self.anc_scc = Vec::with_capacity(sccs.len());
        for (c, comp) in sccs.iter().enumerate() {
            let mut set: Vec<ClassId> = comp.iter().map(|v| v.index() as ClassId).collect();
            for v in comp {
                for (to, _) in &self.adj[v.index()] {
                    let tc = self.scc_of[*to as usize];
                    if tc != c {
                        set.extend_from_slice(&self.anc_scc[tc]);
                    }
                }
            }
            set.sort_unstable();
            set.dedup();
            self.anc_scc.push(set);
        }
    }

    /// Direct edges of the saturated class graph with their reasons.
    pub fn successors(&self, c: ClassId) -> impl Iterator<Item = (ClassId, &[AxId])> {
        self.adj[c as usize]
            .iter()
            .map(|&(to, reason)| (to, self.reasons[reason].as_slice()))
    }

    /// Every class `c` is subsumed by, itself and `⊤` included.
    pub fn ancestors(&self, c: ClassId) -> &[ClassId] {
        &self.anc_scc[self.scc_of[c as usize]]
    }

    pub fn subsumed(&self, c: ClassId, d: ClassId) -> bool {
        self.ancestors(c).binary_search(&d).is_ok()
    }

    pub fn class_unsat(&self, c: ClassId) -> bool {
        self.subsumed(c, BOTTOM)
    }

    pub fn same_class_scc(&self, a: ClassId, b: ClassId) -> bool {
        self.scc_of[a as usize] == self.scc_of[b as usize]
    }

    /// Axioms on a shortest path in the class graph.
    pub fn class_path(&self, from: ClassId, to: ClassId) -> Vec<AxId> {
        if from == to {
            return Vec::new();
        }
        let mut parent: HashMap<ClassId, (ClassId, usize)> = HashMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = HashSet::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &(next, reason) in &self.adj[v as usize] {
                if seen.insert(next) {
                    parent.insert(next, (v, reason));
                    queue.push_back(next);
                }
            }
        }
        let mut out = Vec::new();
        let mut v = to;
        while let Some(&(p, reason)) = parent.get(&v) {
            out.extend_from_slice(&self.reasons[reason]);
            v = p;
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn saturate(&mut self) {
        loop {
            self.compute_ancestors();
            let props_changed = self.update_unsat_props();
            let edges = self.derive();
            if edges.is_empty() && !props_changed {
                break;
            }
            for (from, to, reason) in edges {
                self.add_edge(from, to, reason);
            }
        }
    }

    fn derive(&self) -> Vec<(ClassId, ClassId, Vec<AxId>)> {
        let mut conj_by_member: HashMap<ClassId, Vec<usize>> = HashMap::new();
        for (i, rule) in self.ix.conj.iter().enumerate() {
            if let Some(&first) = rule.ops.first() {
                conj_by_member.entry(first).or_default().push(i);
            }
        }
        let mut disjoint_by_member: HashMap<ClassId, Vec<usize>> = HashMap::new();
        for (i, d) in self.ix.disjoint.iter().enumerate() {
            disjoint_by_member.entry(d.a).or_default().push(i);
        }

        let mut out = Vec::new();
        let mut chosen: HashSet<(ClassId, ClassId)> = HashSet::new();
        for a in 0..self.adj.len() as ClassId {
            if a == BOTTOM || self.class_unsat(a) {
                continue;
            }
            let anc = self.ancestors(a);
            let mut propose = |to: ClassId, reason: &dyn Fn() -> Vec<AxId>| {
                if anc.binary_search(&to).is_err() && chosen.insert((a, to)) {
                    out.push((a, to, reason()));
                }
            };
            for &c in anc {
                if let Some(rules) = conj_by_member.get(&c) {
                    for &i in rules {
                        let rule = &self.ix.conj[i];
                        if rule.ops.iter().all(|op| anc.binary_search(op).is_ok()) {
                            propose(rule.target, &|| {
                                let mut parts: Vec<Vec<AxId>> =
                                    rule.ops.iter().map(|&op| self.class_path(a, op)).collect();
                                parts.push(vec![rule.ax]);
                                let refs: Vec<&[AxId]> = parts.iter().map(|v| v.as_slice()).collect();
                                union(&refs)
                            });
                        }
                    }
                }
                if let Some(rules) = disjoint_by_member.get(&c) {
                    for &i in rules {
                        let d = self.ix.disjoint[i];
                        if anc.binary_search(&d.b).is_ok() {
                            propose(BOTTOM, &|| {
                                union(&[&self.class_path(a, d.a), &self.class_path(a, d.b), &[d.ax]])
                            });
                        }
                    }
                }
                for r in &self.ix.exists_rhs[c as usize] {
                    let to_c = || self.class_path(a, c);
                    if let Some(support) = self.unsat_props.get(&r.prop) {
                        propose(BOTTOM, &|| union(&[&to_c(), &[r.ax], support]));
                    }
                    if self.class_unsat(r.filler) {
                        propose(BOTTOM, &|| {
                            union(&[&to_c(), &[r.ax], &self.class_path(r.filler, BOTTOM)])
                        });
                    }
                    let start = PNode::fwd(r.prop);
                    for &n in self.prop_ancestors(start) {
                        for &(d, dax) in &self.ix.domains[n.index()] {
                            propose(d, &|| {
                                union(&[&to_c(), &[r.ax], &self.prop_path(start, n), &[dax]])
                            });
                        }
                        if n.inv {
                            continue;
                        }
                        let Some(lhs) = self.ix.exists_lhs.get(&n.prop) else {
                            continue;
                        };
                        for e in lhs {
                            if e.filler == TOP || self.subsumed(r.filler, e.filler) {
                                propose(e.target, &|| {
                                    union(&[
                                        &to_c(),
                                        &[r.ax],
                                        &self.prop_path(start, n),
                                        &self.class_path(r.filler, e.filler),
                                        &[e.ax],
                                    ])
                                });
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Recomputes the unsatisfiable properties; returns whether the set grew.
    fn update_unsat_props(&mut self) -> bool {
        let before = self.unsat_props.len();
        let props = self.ix.prop_count() as PropId;
        let with = |c: Characteristic| -> Vec<(PropId, AxId)> {
            self.ix
                .characteristics
                .iter()
                .enumerate()
                .flat_map(|(p, cs)| {
                    cs.iter()
                        .filter(move |(k, _)| *k == c)
                        .map(move |(_, ax)| (p as PropId, *ax))
                })
                .collect()
        };
        let reflexive = with(Characteristic::Reflexive);
        let mut found: Vec<(PropId, Vec<AxId>)> = Vec::new();
        for p in 0..props {
            if self.unsat_props.contains_key(&p) {
                continue;
            }
            let start = PNode::fwd(p);
            let inherited = |c: Characteristic| {
                self.prop_ancestors(start).iter().find_map(|&n| {
                    self.ix.characteristics[n.prop as usize]
                        .iter()
                        .find(|(k, _)| *k == c)
                        .map(|(_, ax)| union(&[&self.prop_path(start, n), &[*ax]]))
                })
            };
            let asym = inherited(Characteristic::Asymmetric);
            let irr = inherited(Characteristic::Irreflexive);
            let sym = self
                .prop_ancestors(start)
                .binary_search(&PNode::bwd(p))
                .is_ok()
                .then(|| self.prop_path(start, PNode::bwd(p)));
            let refl = reflexive.iter().find_map(|&(q, ax)| {
                let from = PNode::fwd(q);
                [PNode::fwd(p), PNode::bwd(p)].into_iter().find_map(|target| {
                    self.prop_ancestors(from)
                        .binary_search(&target)
                        .is_ok()
                        .then(|| union(&[&self.prop_path(from, target), &[ax]]))
                })
            });
            let conflict = match (&sym, &asym, &refl, &irr) {
                (Some(s), Some(a), _, _) => Some(union(&[s, a])),
                (_, _, Some(r), Some(i)) => Some(union(&[r, i])),
                (_, Some(a), Some(r), _) => Some(union(&[r, a])),
                _ => None,
            };
            if let Some(support) = conflict {
                found.push((p, support));
                continue;
            }
            let (dom, ran) = self.dom_nodes[p as usize];
            if let Some(node) = [dom, ran].into_iter().find(|&n| self.class_unsat(n)) {
                found.push((p, self.class_path(node, BOTTOM)));
            }
        }
        self.unsat_props.extend(found);
        // A property below an unsatisfiable one is unsatisfiable too.
        loop {
            let mut more = Vec::new();
            for p in 0..props {
                if self.unsat_props.contains_key(&p) {
                    continue;
                }
                let start = PNode::fwd(p);
                for &n in self.prop_ancestors(start) {
                    if let Some(support) = self.unsat_props.get(&n.prop) {
                        more.push((p, union(&[&self.prop_path(start, n), support])));
                        break;
                    }
                }
            }
            if more.is_empty() {
                break;
            }
            self.unsat_props.extend(more);
        }
        self.unsat_props.len() != before
    }

    pub fn unsat_class_iris(&self) -> BTreeSet<Iri> {
        (0..self.ix.class_count() as ClassId)
            .filter(|&c| self.class_unsat(c))
            .filter_map(|c| self.ix.class_names[c as usize].clone())
            .collect()
    }

    pub fn unsat_prop_iris(&self) -> BTreeSet<Iri> {
        self.unsat_props
            .keys()
            .filter_map(|&p| self.ix.prop_names[p as usize].clone())
            .collect()
    }

    fn support_of(&self, entity: &EntityRef) -> Option<Vec<AxId>> {
        match entity.kind {
            crate::model::EntityKind::Class => {
                let c = self.ix.class_id(&entity.iri)?;
                self.class_unsat(c).then(|| self.class_path(c, BOTTOM))
            }
            crate::model::EntityKind::ObjectProperty => {
                let p = self.ix.prop_id(&entity.iri)?;
                self.unsat_props.get(&p).cloned()
            }
            _ => None,
        }
    }

    fn is_unsat(&self, entity: &EntityRef) -> bool {
        match entity.kind {
            crate::model::EntityKind::Class => self
                .ix
                .class_id(&entity.iri)
                .is_some_and(|c| self.class_unsat(c)),
            crate::model::EntityKind::ObjectProperty => self
                .ix
                .prop_id(&entity.iri)
                .is_some_and(|p| self.unsat_props.contains_key(&p)),
            _ => false,
        }
    }

    fn axioms_of(&self, ids: &[AxId]) -> Vec<Axiom> {
        let mut out: Vec<Axiom> = ids
            .iter()
            .filter_map(|&i| self.ix.axioms.get(i as usize).cloned())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// Greedily drops axioms from `support` while `holds` keeps returning true.
pub(crate) fn minimize(mut support: Vec<Axiom>, holds: impl Fn(&[Axiom]) -> bool) -> Vec<Axiom> {
    let mut i = 0;
    while i < support.len() {
        let mut candidate = support.clone();
        candidate.remove(i);
        if holds(&candidate) {
            support = candidate;
        } else {
            i += 1;
        }
    }
    support
}

/// Finds unsatisfiable named classes and object properties, each with one
/// minimized justification.
pub fn detect_unsatisfiable(ontology: &Ontology) -> UnsatReport {
    let analysis = Analysis::new(ontology.schema_axioms());
    let mut report = UnsatReport::default();
    let entities: Vec<EntityRef> = analysis
        .unsat_class_iris()
        .into_iter()
        .map(EntityRef::class)
        .chain(analysis.unsat_prop_iris().into_iter().map(EntityRef::object_property))
        .collect();
    for entity in entities {
        let support = analysis
            .support_of(&entity)
            .map(|ids| analysis.axioms_of(&ids))
            .unwrap_or_default();
        let support = minimize(support, |candidate| {
            Analysis::new(candidate.iter()).is_unsat(&entity)
        });
        match entity.kind {
            crate::model::EntityKind::Class => {
                report.unsatisfiable_classes.insert(entity.iri.clone());
            }
            _ => {
                report.unsatisfiable_properties.insert(entity.iri.clone());
            }
        }
        report.justifications.insert(
            entity.clone(),
            vec![Justification {
                support,
                conclusion: Conclusion::Unsatisfiable(entity),
            }],
        );
    }
    report
}

/// Removes every axiom that mentions a flagged entity. Other axioms are kept
/// unchanged.
pub fn remove_unsatisfiable(ontology: &Ontology, report: &UnsatReport) -> Ontology {
    if report.is_empty() {
        return ontology.clone();
    }
    let flagged = report.entities();
    let mut out = ontology.clone();
    out.retain(|axiom| !axiom.signature().intersects(&flagged));
    out
}

/// Computes the schema closure and the inferred axioms not already present
/// in `ontology`. Unsatisfiable entities are skipped.
pub fn materialize_schema(ontology: &Ontology) -> (SchemaClosure, Vec<Axiom>) {
    let a = Analysis::new(ontology.schema_axioms());
    let ix = &a.ix;
    let mut closure = SchemaClosure::default();

    let named_classes: Vec<(ClassId, &Iri)> = (0..ix.class_count() as ClassId)
        .filter(|&c| !a.class_unsat(c))
        .filter_map(|c| ix.class_names[c as usize].as_ref().map(|iri| (c, iri)))
        .collect();
    let mut class_sccs: BTreeMap<usize, BTreeSet<Iri>> = BTreeMap::new();
    for &(c, iri) in &named_classes {
        class_sccs
            .entry(a.scc_of[c as usize])
            .or_default()
            .insert(iri.clone());
        for &d in a.ancestors(c) {
            if d == c || d == TOP {
                continue;
            }
            if let Some(sup) = &ix.class_names[d as usize] {
                closure.subsumptions.insert((iri.clone(), sup.clone()));
            }
        }
    }
    closure.equivalence_classes = class_sccs.into_values().collect();
    closure.equivalence_classes.sort();

    let named_props: Vec<(PropId, &Iri)> = (0..ix.prop_count() as PropId)
        .filter(|p| !a.unsat_props.contains_key(p))
        .filter_map(|p| ix.prop_names[p as usize].as_ref().map(|iri| (p, iri)))
        .collect();
    let prop_name = |p: PropId| {
        if a.unsat_props.contains_key(&p) {
            None
        } else {
            ix.prop_names[p as usize].clone()
        }
    };
    let mut prop_sccs: BTreeMap<usize, BTreeSet<Iri>> = BTreeMap::new();
    for &(p, iri) in &named_props {
        let start = PNode::fwd(p);
        prop_sccs
            .entry(a.prop_scc[start.index()])
            .or_default()
            .insert(iri.clone());
        for &n in a.prop_ancestors(start) {
            if n.prop == p {
                continue;
            }
            let Some(other) = prop_name(n.prop) else {
                continue;
            };
            if !n.inv {
                closure.property_hierarchy.insert((iri.clone(), other.clone()));
            } else if a.same_prop_scc(start, n) {
                let pair = if iri <= &other {
                    (iri.clone(), other)
                } else {
                    (other, iri.clone())
                };
                closure.inverse_pairs.insert(pair);
            }
        }
        for (side, target) in [
            (start, &mut closure.entailed_domains),
            (start.flip(), &mut closure.entailed_ranges),
        ] {
            let mut exprs = BTreeSet::new();
            for &n in a.prop_ancestors(side) {
                for (expr, _) in &ix.domain_exprs[n.index()] {
                    if *expr != ClassExpression::Top && !expr_mentions_unsat(expr, &a) {
                        exprs.insert(expr.clone());
                    }
                }
            }
            if !exprs.is_empty() {
                target.insert(iri.clone(), exprs);
            }
        }
        let mut chars = BTreeSet::new();
        for n in [start, start.flip()] {
            for &m in a.prop_ancestors(n) {
                if !a.same_prop_scc(start, m) && !a.same_prop_scc(start.flip(), m) {
                    continue;
                }
                // m is equivalent to p (or to p⁻ when reached from p⁻).
                let flipped = m.inv != n.inv;
                for &(c, _) in &ix.characteristics[m.prop as usize] {
                    chars.insert(if flipped { c.for_inverse() } else { c });
                }
            }
        }
        if a.same_prop_scc(start, start.flip()) {
            chars.insert(Characteristic::Symmetric);
        }
        if !chars.is_empty() {
            closure.entailed_characteristics.insert(iri.clone(), chars);
        }
    }
    closure.equivalent_properties = prop_sccs.into_values().collect();
    closure.equivalent_properties.sort();

    let inferred = closure_axioms(&closure, &a, ontology);
    (closure, inferred)
}

fn expr_mentions_unsat(expr: &ClassExpression, a: &Analysis) -> bool {
    let mut sig = crate::model::Signature::new();
    expr.collect_signature(&mut sig);
    let unsat = sig.iter().any(|e| a.is_unsat(e));
    unsat
}

fn closure_axioms(closure: &SchemaClosure, a: &Analysis, ontology: &Ontology) -> Vec<Axiom> {
    let mut out: BTreeSet<Axiom> = BTreeSet::new();
    let class_of = |iri: &Iri| a.ix.class_id(iri).expect("closure classes are indexed");
    for (sub, sup) in &closure.subsumptions {
        if !a.same_class_scc(class_of(sub), class_of(sup)) {
            out.insert(Axiom::subclass(
                ClassExpression::Named(sub.clone()),
                ClassExpression::Named(sup.clone()),
            ));
        }
    }
    for group in &closure.equivalence_classes {
        if group.len() > 1 {
            out.insert(Axiom::EquivalentClasses(
                group.iter().cloned().map(ClassExpression::Named).collect(),
            ));
        }
    }
    let prop_of = |iri: &Iri| PNode::fwd(a.ix.prop_id(iri).expect("closure properties are indexed"));
    for (sub, sup) in &closure.property_hierarchy {
        if !a.same_prop_scc(prop_of(sub), prop_of(sup)) {
            out.insert(Axiom::SubObjectPropertyOf {
                sub: sub.clone(),
                sup: sup.clone(),
            });
        }
    }
    for group in &closure.equivalent_properties {
        if group.len() > 1 {
            out.insert(Axiom::EquivalentObjectProperties(group.iter().cloned().collect()));
        }
    }
    for (p, q) in &closure.inverse_pairs {
        out.insert(Axiom::InverseObjectProperties(p.clone(), q.clone()));
    }
    for (p, exprs) in &closure.entailed_domains {
        for e in exprs {
            out.insert(Axiom::ObjectPropertyDomain {
                property: p.clone(),
                domain: e.clone(),
            });
        }
    }
    for (p, exprs) in &closure.entailed_ranges {
        for e in exprs {
            out.insert(Axiom::ObjectPropertyRange {
                property: p.clone(),
                range: e.clone(),
            });
        }
    }
    for (p, chars) in &closure.entailed_characteristics {
        for c in chars {
            out.insert(Axiom::Characteristic {
                property: p.clone(),
                characteristic: *c,
            });
        }
    }
    out.into_iter()
        .map(Axiom::canonical)
        .filter(|ax| !ax.is_tautology() && !ontology.contains(ax))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Adds `inferred` to a copy of `ontology` with provenance `Inferred`.
pub fn with_inferred(ontology: &Ontology, inferred: &[Axiom]) -> Ontology {
    let mut out = ontology.clone();
    for axiom in inferred {
        out.insert(axiom.clone(), Provenance::Inferred);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(format!("http://e/{s}")).unwrap()
    }
    fn c(s: &str) -> ClassExpression {
        ClassExpression::Named(iri(s))
    }
    fn sub(a: &str, b: &str) -> Axiom {
        Axiom::subclass(c(a), c(b))
    }
    fn ch(p: &str, k: Characteristic) -> Axiom {
        Axiom::Characteristic {
            property: iri(p),
            characteristic: k,
        }
    }

    #[test]
    fn transitivity() {
        let o = Ontology::from_axioms([sub("A", "B"), sub("B", "C")]);
        let (closure, inferred) = materialize_schema(&o);
        assert!(inferred.contains(&sub("A", "C")));
        assert_eq!(inferred.len(), 1);
        assert_eq!(closure.subsumptions.len(), 3);
    }

    #[test]
    fn cycle_becomes_equivalence() {
        let o = Ontology::from_axioms([sub("A", "B"), sub("B", "A")]);
        let (closure, inferred) = materialize_schema(&o);
        assert!(closure
            .equivalence_classes
            .contains(&BTreeSet::from([iri("A"), iri("B")])));
        assert_eq!(
            inferred,
            vec![Axiom::EquivalentClasses(vec![c("A"), c("B")])]
        );
        assert!(!inferred.contains(&sub("A", "A")));
    }

    #[test]
    fn domain_inherited_from_superproperty() {
        let o = Ontology::from_axioms([
            Axiom::SubObjectPropertyOf {
                sub: iri("q"),
                sup: iri("p"),
            },
            Axiom::ObjectPropertyDomain {
                property: iri("p"),
                domain: c("C"),
            },
        ]);
        let (_, inferred) = materialize_schema(&o);
        assert!(inferred.contains(&Axiom::ObjectPropertyDomain {
            property: iri("q"),
            domain: c("C")
        }));
    }

    #[test]
    fn range_through_inverse() {
        let o = Ontology::from_axioms([
            Axiom::InverseObjectProperties(iri("p"), iri("q")),
            Axiom::ObjectPropertyDomain {
                property: iri("p"),
                domain: c("C"),
            },
        ]);
        let (closure, inferred) = materialize_schema(&o);
        assert!(inferred.contains(&Axiom::ObjectPropertyRange {
            property: iri("q"),
            range: c("C")
        }));
        assert!(closure.inverse_pairs.contains(&(iri("p"), iri("q"))));
    }

    #[test]
    fn characteristic_follows_equivalence_and_inverse() {
        let o = Ontology::from_axioms([
            Axiom::EquivalentObjectProperties(vec![iri("p"), iri("r")]),
            Axiom::InverseObjectProperties(iri("p"), iri("q")),
            ch("p", Characteristic::Functional),
            ch("p", Characteristic::Transitive),
        ]);
        let (closure, inferred) = materialize_schema(&o);
        assert!(inferred.contains(&ch("r", Characteristic::Functional)));
        assert!(inferred.contains(&ch("q", Characteristic::InverseFunctional)));
        assert!(inferred.contains(&ch("q", Characteristic::Transitive)));
        assert!(!closure.entailed_characteristics[&iri("q")].contains(&Characteristic::Functional));
    }

    #[test]
    fn existential_with_domain_gives_subsumption() {
        // A ⊑ ∃r.B, ∃r.B ⊑ E
        let o = Ontology::from_axioms([
            Axiom::subclass(c("A"), ClassExpression::some(iri("r"), c("B"))),
            Axiom::subclass(ClassExpression::some(iri("r"), c("B")), c("E")),
            Axiom::ObjectPropertyDomain {
                property: iri("r"),
                domain: c("D"),
            },
        ]);
        let (closure, _) = materialize_schema(&o);
        assert!(closure.subsumptions.contains(&(iri("A"), iri("E"))));
        assert!(closure.subsumptions.contains(&(iri("A"), iri("D"))));
    }

    #[test]
    fn textbook_disjointness_clash() {
        let axioms = vec![
            sub("C", "A"),
            sub("C", "B"),
            Axiom::DisjointClasses(vec![c("A"), c("B")]),
            sub("D", "A"),
        ];
        let report = detect_unsatisfiable(&Ontology::from_axioms(axioms.clone()));
        assert_eq!(report.unsatisfiable_classes, BTreeSet::from([iri("C")]));
        let just = &report.justifications[&EntityRef::class(iri("C"))][0];
        let mut expected: Vec<Axiom> = axioms[..3].iter().cloned().map(Axiom::canonical).collect();
        expected.sort();
        assert_eq!(just.support, expected);
    }

    #[test]
    fn clean_schema_has_empty_report() {
        assert!(detect_unsatisfiable(&Ontology::from_axioms([sub("A", "B")])).is_empty());
    }

    #[test]
    fn symmetric_and_asymmetric_property() {
        let o = Ontology::from_axioms([
            ch("p", Characteristic::Symmetric),
            ch("p", Characteristic::Asymmetric),
        ]);
        let report = detect_unsatisfiable(&o);
        assert_eq!(report.unsatisfiable_properties, BTreeSet::from([iri("p")]));
        assert_eq!(report.justifications[&EntityRef::object_property(iri("p"))][0].support.len(), 2);
    }

    #[test]
    fn property_with_unsat_domain() {
        let o = Ontology::from_axioms([
            Axiom::ObjectPropertyDomain {
                property: iri("p"),
                domain: c("A"),
            },
            Axiom::ObjectPropertyDomain {
                property: iri("p"),
                domain: c("B"),
            },
            Axiom::DisjointClasses(vec![c("A"), c("B")]),
            Axiom::SubObjectPropertyOf {
                sub: iri("q"),
                sup: iri("p"),
            },
        ]);
        let report = detect_unsatisfiable(&o);
        assert_eq!(
            report.unsatisfiable_properties,
            BTreeSet::from([iri("p"), iri("q")])
        );
        assert!(report.unsatisfiable_classes.is_empty());
    }

    #[test]
    fn existential_on_unsat_filler() {
        let o = Ontology::from_axioms([
            Axiom::subclass(c("U"), ClassExpression::Bottom),
            Axiom::subclass(c("A"), ClassExpression::some(iri("r"), c("U"))),
        ]);
        let report = detect_unsatisfiable(&o);
        assert_eq!(
            report.unsatisfiable_classes,
            BTreeSet::from([iri("A"), iri("U")])
        );
    }

    #[test]
    fn complement_clash() {
        let o = Ontology::from_axioms([
            Axiom::subclass(c("A"), ClassExpression::complement(c("B"))),
            sub("C", "A"),
            sub("C", "B"),
        ]);
        let report = detect_unsatisfiable(&o);
        assert_eq!(report.unsatisfiable_classes, BTreeSet::from([iri("C")]));
    }

    #[test]
    fn removal_reaches_fixpoint() {
        let o = Ontology::from_axioms([
            sub("C", "A"),
            sub("C", "B"),
            Axiom::DisjointClasses(vec![c("A"), c("B")]),
            sub("X", "C"),
            sub("A", "Z"),
        ]);
        let mut current = o.clone();
        loop {
            let report = detect_unsatisfiable(&current);
            if report.is_empty() {
                break;
            }
            current = remove_unsatisfiable(&current, &report);
        }
        assert!(current.contains(&sub("A", "Z")));
        assert!(!current.contains(&sub("X", "C")));
        let again = remove_unsatisfiable(&current, &detect_unsatisfiable(&current));
        assert_eq!(again, current);
    }
}
