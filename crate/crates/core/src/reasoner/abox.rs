//! ABox materialization, clash detection and realization.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use super::index::{AxId, Chain, ClassId, ExistsLhs, PNode, PropId, BOTTOM, TOP};
use super::schema::{minimize, Analysis};
use super::{Clash, ClashKind, Conclusion, JustifiedClash, Justification, ReasonerError};
use crate::model::{Axiom, BoxKind, Characteristic, ClassExpression, Iri, Ontology};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConsistencyOptions {
    /// Treat distinct IRIs as distinct individuals. Without it the
    /// functional and cardinality clash kinds are not reported.
    pub una: bool,
    /// Shrink each justification to a subset-minimal support set.
    pub minimize: bool,
}

impl Default for ConsistencyOptions {
    fn default() -> Self {
        ConsistencyOptions {
            una: true,
            minimize: true,
        }
    }
}

type Ind = u32;
type FactId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Fact {
    Type(Ind, ClassId),
    Rel(Ind, PropId, Ind),
}

struct Derivation {
    axioms: Vec<AxId>,
    premises: Vec<FactId>,
}

struct Engine<'a> {
    a: &'a Analysis,
    inds: Vec<Iri>,
    ind_ids: HashMap<Iri, Ind>,
    facts: Vec<Fact>,
    derivs: Vec<Derivation>,
    ids: HashMap<Fact, FactId>,
    types_of: Vec<Vec<ClassId>>,
    members: HashMap<ClassId, Vec<Ind>>,
    out: HashMap<(Ind, PropId), Vec<Ind>>,
    inn: HashMap<(Ind, PropId), Vec<Ind>>,
    queue: VecDeque<FactId>,
    conj_by_member: HashMap<ClassId, Vec<usize>>,
    lhs_by_filler: HashMap<ClassId, Vec<(PropId, ExistsLhs)>>,
    chains_by_first: HashMap<PropId, Vec<Chain>>,
    chains_by_second: HashMap<PropId, Vec<Chain>>,
    transitive: HashMap<PropId, AxId>,
}

impl<'a> Engine<'a> {
    fn new(a: &'a Analysis) -> Self {
        let ix = &a.ix;
        let mut conj_by_member: HashMap<ClassId, Vec<usize>> = HashMap::new();
        for (i, rule) in ix.conj.iter().enumerate() {
            for &op in &rule.ops {
                conj_by_member.entry(op).or_default().push(i);
            }
        }
        let mut lhs_by_filler: HashMap<ClassId, Vec<(PropId, ExistsLhs)>> = HashMap::new();
        for (&p, entries) in &ix.exists_lhs {
            for e in entries {
                lhs_by_filler.entry(e.filler).or_default().push((p, *e));
            }
        }
        let mut chains_by_first: HashMap<PropId, Vec<Chain>> = HashMap::new();
        let mut chains_by_second: HashMap<PropId, Vec<Chain>> = HashMap::new();
        for c in &ix.chains {
            chains_by_first.entry(c.first).or_default().push(*c);
            chains_by_second.entry(c.second).or_default().push(*c);
        }
        let mut transitive = HashMap::new();
        for (p, chars) in ix.characteristics.iter().enumerate() {
            if let Some(&(_, ax)) = chars.iter().find(|(c, _)| *c == Characteristic::Transitive) {
                transitive.insert(p as PropId, ax);
            }
        }
        Engine {
            a,
            inds: Vec::new(),
            ind_ids: HashMap::new(),
            facts: Vec::new(),
            derivs: Vec::new(),
            ids: HashMap::new(),
            types_of: Vec::new(),
            members: HashMap::new(),
            out: HashMap::new(),
            inn: HashMap::new(),
            queue: VecDeque::new(),
            conj_by_member,
            lhs_by_filler,
            chains_by_first,
            chains_by_second,
            transitive,
        }
    }

    fn ind(&mut self, iri: &Iri) -> Ind {
        if let Some(&id) = self.ind_ids.get(iri) {
            return id;
        }
        let id = self.inds.len() as Ind;
        self.inds.push(iri.clone());
        self.ind_ids.insert(iri.clone(), id);
        self.types_of.push(Vec::new());
        self.add(Fact::Type(id, TOP), Vec::new(), Vec::new());
        id
    }

    fn add(&mut self, fact: Fact, axioms: Vec<AxId>, premises: Vec<FactId>) {
        if self.ids.contains_key(&fact) {
            return;
        }
        let id = self.facts.len();
        self.facts.push(fact);
        self.derivs.push(Derivation { axioms, premises });
        self.ids.insert(fact, id);
        match fact {
            Fact::Type(x, c) => {
                self.types_of[x as usize].push(c);
                self.members.entry(c).or_default().push(x);
            }
            Fact::Rel(x, p, y) => {
                self.out.entry((x, p)).or_default().push(y);
                self.inn.entry((y, p)).or_default().push(x);
            }
        }
        self.queue.push_back(id);
    }

    fn type_fact(&self, x: Ind, c: ClassId) -> Option<FactId> {
        self.ids.get(&Fact::Type(x, c)).copied()
    }

    fn rel_fact(&self, x: Ind, p: PropId, y: Ind) -> FactId {
        self.ids[&Fact::Rel(x, p, y)]
    }

    fn targets(map: &HashMap<(Ind, PropId), Vec<Ind>>, x: Ind, p: PropId) -> Vec<Ind> {
        map.get(&(x, p)).cloned().unwrap_or_default()
    }

    fn load(&mut self) {
        let a = self.a;
        for (ax, axiom) in a.ix.axioms.iter().enumerate() {
            let ax = ax as AxId;
            match axiom {
                Axiom::ClassAssertion { individual, .. } => {
                    let x = self.ind(individual);
                    let c = a.ix.assertion_class[&ax];
                    self.add(Fact::Type(x, c), vec![ax], Vec::new());
                }
                Axiom::ObjectPropertyAssertion {
                    subject,
                    property,
                    object,
                } => {
                    let x = self.ind(subject);
                    let y = self.ind(object);
                    let p = a.ix.prop_id(property).expect("assertion properties are indexed");
                    self.add(Fact::Rel(x, p, y), vec![ax], Vec::new());
                }
                _ => {}
            }
        }
    }

    fn run(&mut self) {
        while let Some(f) = self.queue.pop_front() {
            match self.facts[f] {
                Fact::Type(x, c) => self.type_rules(f, x, c),
                Fact::Rel(x, p, y) => self.rel_rules(f, x, p, y),
            }
        }
    }

    fn type_rules(&mut self, f: FactId, x: Ind, c: ClassId) {
        let a = self.a;
        if c == BOTTOM {
            return;
        }
        for (d, reason) in a.successors(c) {
            self.add(Fact::Type(x, d), reason.to_vec(), vec![f]);
        }
        if let Some(rules) = self.conj_by_member.get(&c).cloned() {
            for i in rules {
                let rule = &a.ix.conj[i];
                let premises: Option<Vec<FactId>> =
                    rule.ops.iter().map(|&op| self.type_fact(x, op)).collect();
                if let Some(premises) = premises {
                    self.add(Fact::Type(x, rule.target), vec![rule.ax], premises);
                }
            }
        }
        for r in &a.ix.forall_rhs[c as usize] {
            for y in Self::targets(&self.out, x, r.prop) {
                let rel = self.rel_fact(x, r.prop, y);
                self.add(Fact::Type(y, r.filler), vec![r.ax], vec![f, rel]);
            }
        }
        if let Some(entries) = self.lhs_by_filler.get(&c).cloned() {
            for (p, e) in entries {
                for z in Self::targets(&self.inn, x, p) {
                    let rel = self.rel_fact(z, p, x);
                    self.add(Fact::Type(z, e.target), vec![e.ax], vec![rel, f]);
                }
            }
        }
    }

    fn rel_rules(&mut self, f: FactId, x: Ind, p: PropId, y: Ind) {
        let a = self.a;
        for &(n, ax) in &a.ix.prop_edges[PNode::fwd(p).index()] {
            let fact = if n.inv {
                Fact::Rel(y, n.prop, x)
            } else {
                Fact::Rel(x, n.prop, y)
            };
            self.add(fact, vec![ax], vec![f]);
        }
        for &(d, ax) in &a.ix.domains[PNode::fwd(p).index()] {
            self.add(Fact::Type(x, d), vec![ax], vec![f]);
        }
        for &(d, ax) in &a.ix.domains[PNode::bwd(p).index()] {
            self.add(Fact::Type(y, d), vec![ax], vec![f]);
        }
        if let Some(entries) = a.ix.exists_lhs.get(&p) {
            for e in entries {
                if let Some(t) = self.type_fact(y, e.filler) {
                    self.add(Fact::Type(x, e.target), vec![e.ax], vec![f, t]);
                }
            }
        }
        for c in self.types_of[x as usize].clone() {
            for r in &a.ix.forall_rhs[c as usize] {
                if r.prop == p {
                    let t = self.type_fact(x, c).expect("indexed type");
                    self.add(Fact::Type(y, r.filler), vec![r.ax], vec![t, f]);
                }
            }
        }
        if let Some(&ax) = self.transitive.get(&p) {
            for z in Self::targets(&self.out, y, p) {
                let next = self.rel_fact(y, p, z);
                self.add(Fact::Rel(x, p, z), vec![ax], vec![f, next]);
            }
            for w in Self::targets(&self.inn, x, p) {
                let prev = self.rel_fact(w, p, x);
                self.add(Fact::Rel(w, p, y), vec![ax], vec![prev, f]);
            }
        }
        if let Some(chains) = self.chains_by_first.get(&p).cloned() {
            for ch in chains {
                for z in Self::targets(&self.out, y, ch.second) {
                    let next = self.rel_fact(y, ch.second, z);
                    self.add(Fact::Rel(x, ch.target, z), vec![ch.ax], vec![f, next]);
                }
            }
        }
        if let Some(chains) = self.chains_by_second.get(&p).cloned() {
            for ch in chains {
                for w in Self::targets(&self.inn, x, ch.first) {
                    let prev = self.rel_fact(w, ch.first, x);
                    self.add(Fact::Rel(w, ch.target, y), vec![ch.ax], vec![prev, f]);
                }
            }
        }
    }

    /// Axioms used to derive `roots`.
    fn support(&self, roots: &[FactId]) -> Vec<AxId> {
        let mut seen: HashSet<FactId> = HashSet::new();
        let mut stack: Vec<FactId> = roots.to_vec();
        let mut out = Vec::new();
        while let Some(f) = stack.pop() {
            if !seen.insert(f) {
                continue;
            }
            out.extend_from_slice(&self.derivs[f].axioms);
            stack.extend_from_slice(&self.derivs[f].premises);
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn by_name(&self, mut inds: Vec<Ind>) -> Vec<Ind> {
        inds.sort_by(|x, y| self.inds[*x as usize].cmp(&self.inds[*y as usize]));
        inds.dedup();
        inds
    }

    fn names(&self, inds: &[Ind]) -> Vec<Iri> {
        inds.iter().map(|&i| self.inds[i as usize].clone()).collect()
    }

    fn prop_name(&self, p: PropId) -> Option<Iri> {
        self.a.ix.prop_names[p as usize].clone()
    }

    fn expr(&self, c: ClassId) -> ClassExpression {
        self.a.ix.class_exprs[c as usize].clone()
    }

    /// Every clash in the saturated fact base, with the axioms behind it.
    fn clashes(&self, una: bool) -> BTreeMap<Clash, Vec<AxId>> {
        let a = self.a;
        let mut found: BTreeMap<Clash, Vec<AxId>> = BTreeMap::new();
        let mut report = |clash: Clash, roots: &[FactId], extra: &[AxId]| {
            found.entry(clash).or_insert_with(|| {
                let mut support = self.support(roots);
                support.extend_from_slice(extra);
                support.sort_unstable();
                support.dedup();
                support
            });
        };

        if let Some(xs) = self.members.get(&BOTTOM) {
            for &x in xs {
                let clash = Clash {
                    kind: ClashKind::BottomInstance,
                    individuals: self.names(&[x]),
                    property: None,
                    classes: Vec::new(),
                };
                report(clash, &[self.ids[&Fact::Type(x, BOTTOM)]], &[]);
            }
        }

        for d in &a.ix.disjoint {
            let (Some(xs), Some(_)) = (self.members.get(&d.a), self.members.get(&d.b)) else {
                continue;
            };
            for &x in xs {
                let Some(tb) = self.type_fact(x, d.b) else {
                    continue;
                };
                let ta = self.ids[&Fact::Type(x, d.a)];
                let mut classes = vec![self.expr(d.a), self.expr(d.b)];
                if !d.complement {
                    classes.sort();
                }
                let kind = if d.complement {
                    ClashKind::ComplementInstance
                } else {
                    ClashKind::DisjointInstance
                };
                let clash = Clash {
                    kind,
                    individuals: self.names(&[x]),
                    property: None,
                    classes,
                };
                report(clash, &[ta, tb], &[d.ax]);
            }
        }

        let mut rels_by_prop: HashMap<PropId, Vec<(Ind, Ind)>> = HashMap::new();
        for fact in &self.facts {
            if let Fact::Rel(x, p, y) = *fact {
                rels_by_prop.entry(p).or_default().push((x, y));
            }
        }
        for (p, chars) in a.ix.characteristics.iter().enumerate() {
            let p = p as PropId;
            let Some(rels) = rels_by_prop.get(&p) else {
                continue;
            };
            for &(c, ax) in chars {
                match c {
                    Characteristic::Irreflexive => {
                        for &(x, y) in rels.iter().filter(|(x, y)| x == y) {
                            let clash = Clash {
                                kind: ClashKind::IrreflexiveSelfLoop,
                                individuals: self.names(&[x]),
                                property: self.prop_name(p),
                                classes: Vec::new(),
                            };
                            report(clash, &[self.rel_fact(x, p, y)], &[ax]);
                        }
                    }
                    Characteristic::Asymmetric => {
                        for &(x, y) in rels {
                            if self.inds[x as usize] > self.inds[y as usize] {
                                continue;
                            }
                            if let Some(&back) = self.ids.get(&Fact::Rel(y, p, x)) {
                                let clash = Clash {
                                    kind: ClashKind::AsymmetricPair,
                                    individuals: self.names(&self.by_name(vec![x, y])),
                                    property: self.prop_name(p),
                                    classes: Vec::new(),
                                };
                                report(clash, &[self.rel_fact(x, p, y), back], &[ax]);
                            }
                        }
                    }
                    Characteristic::Functional | Characteristic::InverseFunctional if una => {
                        let forward = c == Characteristic::Functional;
                        let (map, kind) = if forward {
                            (&self.out, ClashKind::FunctionalFanOut)
                        } else {
                            (&self.inn, ClashKind::InverseFunctionalFanIn)
                        };
                        let hubs: BTreeSet<Ind> = rels
                            .iter()
                            .map(|&(x, y)| if forward { x } else { y })
                            .collect();
                        for hub in hubs {
                            let others = &map[&(hub, p)];
                            if others.len() < 2 {
                                continue;
                            }
                            let witnesses: Vec<Ind> =
                                self.by_name(others.clone()).into_iter().take(2).collect();
                            let roots: Vec<FactId> = witnesses
                                .iter()
                                .map(|&w| {
                                    if forward {
                                        self.rel_fact(hub, p, w)
                                    } else {
                                        self.rel_fact(w, p, hub)
                                    }
                                })
                                .collect();
                            let mut individuals = vec![hub];
                            individuals.extend(witnesses);
                            let clash = Clash {
                                kind,
                                individuals: self.names(&individuals),
                                property: self.prop_name(p),
                                classes: Vec::new(),
                            };
                            report(clash, &roots, &[ax]);
                        }
                    }
                    _ => {}
                }
            }
        }

        if una {
            for (c, bounds) in a.ix.max_card.iter().enumerate() {
                let c = c as ClassId;
                if bounds.is_empty() {
                    continue;
                }
                let Some(xs) = self.members.get(&c) else {
                    continue;
                };
                for &x in xs {
                    for mc in bounds {
                        let fillers: Vec<Ind> = Self::targets(&self.out, x, mc.prop)
                            .into_iter()
                            .filter(|&y| self.type_fact(y, mc.filler).is_some())
                            .collect();
                        if fillers.len() as u64 <= mc.n as u64 {
                            continue;
                        }
                        let witnesses: Vec<Ind> = self
                            .by_name(fillers)
                            .into_iter()
                            .take(mc.n as usize + 1)
                            .collect();
                        let mut roots = vec![self.ids[&Fact::Type(x, c)]];
                        for &w in &witnesses {
                            roots.push(self.rel_fact(x, mc.prop, w));
                            if mc.filler != TOP {
                                roots.push(self.ids[&Fact::Type(w, mc.filler)]);
                            }
                        }
                        let mut individuals = vec![x];
                        individuals.extend(witnesses);
                        let clash = Clash {
                            kind: ClashKind::MaxCardinalityViolation,
                            individuals: self.names(&individuals),
                            property: self.prop_name(mc.prop),
                            classes: vec![self.expr(c)],
                        };
                        report(clash, &roots, &[mc.ax]);
                    }
                }
            }
        }
        found
    }
}

fn split(axioms: &[Axiom]) -> (Vec<Axiom>, Vec<Axiom>) {
    axioms
        .iter()
        .cloned()
        .partition(|ax| ax.box_kind() != BoxKind::ABox)
}

fn evaluate(schema: &[Axiom], abox: &[Axiom], una: bool) -> Vec<(Clash, Vec<Axiom>)> {
    let analysis = Analysis::new(schema.iter().chain(abox.iter()));
    let mut engine = Engine::new(&analysis);
    engine.load();
    engine.run();
    engine
        .clashes(una)
        .into_iter()
        .map(|(clash, ids)| {
            let mut support: Vec<Axiom> = ids
                .into_iter()
                .map(|i| analysis.ix.axioms[i as usize].clone())
                .collect();
            support.sort();
            support.dedup();
            (clash, support)
        })
        .collect()
}

fn reproduces(candidate: &[Axiom], clash: &Clash, una: bool) -> bool {
    let (schema, abox) = split(candidate);
    evaluate(&schema, &abox, una)
        .iter()
        .any(|(c, _)| c == clash)
}

/// Materializes the ABox consequences of `schema` and reports every clash,
/// each with one justification.
pub fn check_consistency(
    schema: &Ontology,
    abox: &[Axiom],
    options: &ConsistencyOptions,
) -> Vec<JustifiedClash> {
    let schema_axioms: Vec<Axiom> = schema.schema_axioms().cloned().collect();
    let abox: Vec<Axiom> = abox.iter().cloned().map(Axiom::canonical).collect();
    evaluate(&schema_axioms, &abox, options.una)
        .into_iter()
        .map(|(clash, support)| {
            let support = if options.minimize {
                minimize(support, |candidate| reproduces(candidate, &clash, options.una))
            } else {
                support
            };
            JustifiedClash {
                justification: Justification {
                    support,
                    conclusion: Conclusion::Clash(clash.clone()),
                },
                clash,
            }
        })
        .collect()
}

/// Returns the entailed named class assertions that are not asserted. Fails
/// if the input has any clash.
pub fn realize(schema: &Ontology, abox: &[Axiom]) -> Result<Vec<Axiom>, ReasonerError> {
    let schema_axioms: Vec<Axiom> = schema.schema_axioms().cloned().collect();
    let abox: Vec<Axiom> = abox.iter().cloned().map(Axiom::canonical).collect();
    let analysis = Analysis::new(schema_axioms.iter().chain(abox.iter()));
    let mut engine = Engine::new(&analysis);
    engine.load();
    engine.run();
    let clashes = engine.clashes(true);
    if !clashes.is_empty() {
        return Err(ReasonerError::Inconsistent(clashes.len()));
    }
    let asserted: HashSet<&Axiom> = abox.iter().collect();
    let mut out: BTreeSet<Axiom> = BTreeSet::new();
    for fact in &engine.facts {
        let Fact::Type(x, c) = *fact else {
            continue;
        };
        if c == TOP || c == BOTTOM {
            continue;
        }
        let Some(name) = &analysis.ix.class_names[c as usize] else {
            continue;
        };
        let axiom = Axiom::class_assertion(
            engine.inds[x as usize].clone(),
            ClassExpression::Named(name.clone()),
        );
        if !asserted.contains(&axiom) {
            out.insert(axiom);
        }
    }
    Ok(out.into_iter().collect())
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
    fn ty(x: &str, class: &str) -> Axiom {
        Axiom::class_assertion(iri(x), c(class))
    }
    fn rel(x: &str, p: &str, y: &str) -> Axiom {
        Axiom::relation(iri(x), iri(p), iri(y))
    }
    fn ch(p: &str, k: Characteristic) -> Axiom {
        Axiom::Characteristic {
            property: iri(p),
            characteristic: k,
        }
    }
    fn check(schema: Vec<Axiom>, abox: Vec<Axiom>) -> Vec<JustifiedClash> {
        check_consistency(
            &Ontology::from_axioms(schema),
            &abox,
            &ConsistencyOptions::default(),
        )
    }

    #[test]
    fn disjoint_instance() {
        let disjoint = Axiom::DisjointClasses(vec![c("A"), c("B")]);
        let clashes = check(vec![disjoint.clone()], vec![ty("x", "A"), ty("x", "B")]);
        assert_eq!(clashes.len(), 1);
        assert_eq!(clashes[0].clash.kind, ClashKind::DisjointInstance);
        let mut expected = vec![disjoint, ty("x", "A"), ty("x", "B")];
        expected.sort();
        assert_eq!(clashes[0].justification.support, expected);
    }

    #[test]
    fn irreflexive_self_loop() {
        let clashes = check(
            vec![ch("p", Characteristic::Irreflexive)],
            vec![rel("x", "p", "x")],
        );
        assert_eq!(clashes.len(), 1);
        assert_eq!(clashes[0].clash.kind, ClashKind::IrreflexiveSelfLoop);
    }

    #[test]
    fn functional_fan_out_respects_una_flag() {
        let schema = vec![ch("p", Characteristic::Functional)];
        let abox = vec![rel("x", "p", "y"), rel("x", "p", "z")];
        let clashes = check(schema.clone(), abox.clone());
        assert_eq!(clashes.len(), 1);
        assert_eq!(clashes[0].clash.kind, ClashKind::FunctionalFanOut);
        assert_eq!(clashes[0].justification.support.len(), 3);
        let no_una = check_consistency(
            &Ontology::from_axioms(schema),
            &abox,
            &ConsistencyOptions {
                una: false,
                minimize: true,
            },
        );
        assert!(no_una.is_empty());
    }

    #[test]
    fn asymmetric_pair_via_inverse() {
        let clashes = check(
            vec![
                ch("p", Characteristic::Asymmetric),
                Axiom::InverseObjectProperties(iri("p"), iri("q")),
            ],
            vec![rel("x", "p", "y"), rel("x", "q", "y")],
        );
        assert_eq!(clashes.len(), 1);
        assert_eq!(clashes[0].clash.kind, ClashKind::AsymmetricPair);
        assert_eq!(clashes[0].justification.support.len(), 4);
    }

    #[test]
    fn complement_and_domain_typing() {
        let clashes = check(
            vec![
                Axiom::ObjectPropertyDomain {
                    property: iri("p"),
                    domain: c("A"),
                },
                Axiom::subclass(c("B"), ClassExpression::complement(c("A"))),
            ],
            vec![ty("x", "B"), rel("x", "p", "y")],
        );
        assert_eq!(clashes.len(), 1);
        assert_eq!(clashes[0].clash.kind, ClashKind::ComplementInstance);
        assert_eq!(clashes[0].justification.support.len(), 4);
    }

    #[test]
    fn max_cardinality() {
        let bound = ClassExpression::MaxCardinality {
            n: 1,
            property: iri("p"),
            filler: Box::new(ClassExpression::Top),
        };
        let clashes = check(
            vec![Axiom::subclass(c("A"), bound)],
            vec![
                ty("x", "A"),
                rel("x", "p", "a"),
                rel("x", "p", "b"),
                rel("x", "p", "c"),
            ],
        );
        assert_eq!(clashes.len(), 1);
        let clash = &clashes[0].clash;
        assert_eq!(clash.kind, ClashKind::MaxCardinalityViolation);
        assert_eq!(clash.individuals, vec![iri("x"), iri("a"), iri("b")]);
        assert_eq!(clashes[0].justification.support.len(), 4);
    }

    #[test]
    fn chain_and_transitivity_feed_clashes() {
        let clashes = check(
            vec![
                Axiom::SubPropertyChainOf {
                    chain: vec![iri("p"), iri("p")],
                    sup: iri("q"),
                },
                ch("q", Characteristic::Irreflexive),
            ],
            vec![rel("x", "p", "y"), rel("y", "p", "x")],
        );
        assert_eq!(clashes.len(), 2);
        assert!(clashes.iter().all(|j| j.clash.kind == ClashKind::IrreflexiveSelfLoop));
    }

    #[test]
    fn justification_replays() {
        let schema = vec![
            Axiom::subclass(c("A"), c("B")),
            Axiom::DisjointClasses(vec![c("B"), c("C")]),
            Axiom::ObjectPropertyRange {
                property: iri("r"),
                range: c("C"),
            },
            Axiom::subclass(c("Z"), c("A")),
        ];
        let abox = vec![ty("x", "A"), rel("y", "r", "x"), ty("w", "Z")];
        let clashes = check(schema, abox);
        assert_eq!(clashes.len(), 1);
        let j = &clashes[0].justification;
        assert!(reproduces(&j.support, &clashes[0].clash, true));
        assert_eq!(j.support.len(), 5);
        assert_eq!(j.assertions().count(), 2);
    }

    #[test]
    fn existential_lhs_typing() {
        let schema = Ontology::from_axioms([Axiom::subclass(
            ClassExpression::some(iri("r"), c("D")),
            c("E"),
        )]);
        let inferred = realize(&schema, &[rel("x", "r", "y"), ty("y", "D")]).unwrap();
        assert_eq!(inferred, vec![ty("x", "E")]);
    }

    #[test]
    fn range_then_subclass() {
        let schema = Ontology::from_axioms([
            Axiom::ObjectPropertyRange {
                property: iri("p"),
                range: c("C"),
            },
            Axiom::subclass(c("C"), c("D")),
        ]);
        let inferred = realize(&schema, &[rel("x", "p", "y")]).unwrap();
        assert_eq!(inferred, vec![ty("y", "C"), ty("y", "D")]);
    }

    #[test]
    fn realize_skips_asserted_and_refuses_clashes() {
        let schema = Ontology::from_axioms([
            Axiom::subclass(c("A"), c("B")),
            Axiom::DisjointClasses(vec![c("B"), c("C")]),
        ]);
        assert!(realize(&schema, &[ty("x", "B")]).unwrap().is_empty());
        assert!(matches!(
            realize(&schema, &[ty("x", "A"), ty("x", "C")]),
            Err(ReasonerError::Inconsistent(1))
        ));
    }

    #[test]
    fn universal_and_intersection() {
        let schema = Ontology::from_axioms([
            Axiom::subclass(c("A"), ClassExpression::only(iri("r"), c("B"))),
            Axiom::subclass(
                ClassExpression::intersection(vec![c("B"), c("C")]).unwrap(),
                c("BC"),
            ),
        ]);
        let inferred = realize(&schema, &[ty("x", "A"), rel("x", "r", "y"), ty("y", "C")]).unwrap();
        assert_eq!(inferred, vec![ty("y", "B"), ty("y", "BC")]);
    }
}
