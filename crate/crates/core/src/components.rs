//! Butterfly graphs, their components, and checks against the
//! classification theorems.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::ops::RangeInclusive;
use std::str::FromStr;

use num_integer::Roots;
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};

use crate::butterfly::{admissible_finite, apply, apply_complete, reduced_move, MoveLabel};
use crate::error::{PrymError, Result};
use crate::prototypes::{
    enumerate, enumerate_complete, enumerate_reduced, reduced_to_prototype, CompletePrototype, Model, Prototype,
    ReducedClass,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetKind {
    P,
    Q,
    S,
}

impl FromStr for SetKind {
    type Err = PrymError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P" => Ok(SetKind::P),
            "Q" => Ok(SetKind::Q),
            "S" => Ok(SetKind::S),
            _ => Err(PrymError::Parse(format!("unknown set {s:?}, expected P, Q or S"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Node {
    Proto(Prototype),
    Complete(CompletePrototype),
    Reduced(ReducedClass),
}

impl Node {
    pub fn label(&self) -> String {
        match self {
            Node::Proto(p) => format!("{},{},{},{}", p.w, p.h, p.t, p.e),
            Node::Complete(c) => {
                let p = c.proto;
                let s = if c.eps > 0 { "+" } else { "-" };
                format!("{},{},{},{},{}", p.w, p.h, p.t, p.e, s)
            }
            Node::Reduced(r) => r.e.to_string(),
        }
    }

    pub fn e(&self) -> i64 {
        match self {
            Node::Proto(p) => p.e,
            Node::Complete(c) => c.proto.e,
            Node::Reduced(r) => r.e,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ButterflyGraph {
    pub disc: i64,
    pub genus: u8,
    pub set: SetKind,
    pub nodes: Vec<Node>,
    pub edges: Vec<(usize, usize, MoveLabel)>,
}

pub fn build_graph(disc: i64, genus: u8, set: SetKind) -> Result<ButterflyGraph> {
    let nodes: Vec<Node> = match set {
        SetKind::P => enumerate(disc, genus, Model::A).into_iter().map(Node::Proto).collect(),
        SetKind::Q => {
            if genus != 3 {
                return Err(PrymError::InvalidPrototype("complete prototypes are genus 3".into()));
            }
            enumerate_complete(disc).into_iter().map(Node::Complete).collect()
        }
        SetKind::S => enumerate_reduced(disc, genus).into_iter().map(Node::Reduced).collect(),
    };
    let index: HashMap<Node, usize> = nodes.iter().enumerate().map(|(i, n)| (*n, i)).collect();
    let find = |n: Node| {
        index
            .get(&n)
            .copied()
            .ok_or_else(|| PrymError::Consistency(format!("move image {} missing from node set", n.label())))
    };
    let mut edges = Vec::new();
    for (i, node) in nodes.iter().enumerate() {
        match node {
            Node::Proto(p) => {
                for q in moves_of(p) {
                    edges.push((i, find(Node::Proto(apply(p, q)?))?, q));
                }
            }
            Node::Complete(c) => {
                for q in moves_of(&c.proto) {
                    edges.push((i, find(Node::Complete(apply_complete(c, q)?))?, q));
                }
            }
            Node::Reduced(r) => {
                let bound = (disc.sqrt() + r.e.abs()) / 4 + 1;
                for q in 1..=bound {
                    if let Some(im) = reduced_move(r, q) {
                        edges.push((i, find(Node::Reduced(im))?, MoveLabel::Finite(q)));
                    }
                }
            }
        }
    }
    Ok(ButterflyGraph {
        disc,
        genus,
        set,
        nodes,
        edges,
    })
}

fn moves_of(p: &Prototype) -> Vec<MoveLabel> {
    let mut v: Vec<MoveLabel> = admissible_finite(p).into_iter().map(MoveLabel::Finite).collect();
    v.push(MoveLabel::Infinity);
    v
}

impl ButterflyGraph {
    /// Components of the underlying undirected graph, each sorted, ordered by
    /// their smallest node index.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.nodes.len();
        let mut uf = UnionFind::<usize>::new(n);
        for &(a, b, _) in &self.edges {
            uf.union(a, b);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut root_min: HashMap<usize, usize> = HashMap::new();
        for i in 0..n {
            let r = uf.find(i);
            let key = *root_min.entry(r).or_insert(i);
            groups.entry(key).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Sorted `(from, to, move)` triples with node labels.
    pub fn labeled_edges(&self) -> Vec<(String, String, String)> {
        let mut v: Vec<_> = self
            .edges
            .iter()
            .map(|&(a, b, q)| (self.nodes[a].label(), self.nodes[b].label(), q.to_string()))
            .collect();
        v.sort();
        v
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    /// Whether a component admits a 2-colouring (no closed walk of odd length).
    pub fn is_bipartite(&self, component: &[usize]) -> bool {
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(a, b, _) in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut colour: HashMap<usize, u8> = HashMap::new();
        let Some(&start) = component.first() else {
            return true;
        };
        colour.insert(start, 0);
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            let c = colour[&v];
            for &u in adj.get(&v).map(Vec::as_slice).unwrap_or(&[]) {
                match colour.get(&u) {
                    Some(&cu) if cu == c => return false,
                    Some(_) => {}
                    None => {
                        colour.insert(u, 1 - c);
                        stack.push(u);
                    }
                }
            }
        }
        true
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let name = match self.set {
            SetKind::P => "P",
            SetKind::Q => "Q",
            SetKind::S => "S",
        };
        let _ = writeln!(s, "digraph {}_{} {{", name, self.disc);
        for (i, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "  n{} [label=\"{}\"];", i, n.label());
        }
        for (a, b, q) in &self.edges {
            let _ = writeln!(s, "  n{} -> n{} [label=\"{}\"];", a, b, q);
        }
        s.push_str("}\n");
        s
    }
}

pub fn component_count(disc: i64, genus: u8, set: SetKind) -> Result<usize> {
    Ok(build_graph(disc, genus, set)?.component_count())
}

/// Components of `𝒬_D` predicted from the `𝒫_D` graph: one per
/// non-bipartite component, two per bipartite component.
pub fn q_components_via_parity(disc: i64) -> Result<usize> {
    let g = build_graph(disc, 3, SetKind::P)?;
    Ok(g.components()
        .iter()
        .map(|c| if g.is_bipartite(c) { 2 } else { 1 })
        .sum())
}

/// Exceptional discriminants with their `𝒮_D` component counts, genus 3.
pub const SD_EXCEPTIONS: [(i64, usize); 15] = [
    (20, 1),
    (36, 1),
    (41, 2),
    (73, 2),
    (97, 2),
    (112, 2),
    (148, 3),
    (196, 3),
    (244, 3),
    (292, 3),
    (304, 2),
    (436, 3),
    (484, 3),
    (676, 3),
    (1684, 3),
];

pub const PD_EXCEPTIONS: [i64; 3] = [41, 68, 100];

pub const QD_EVEN_EXCEPTIONS: [i64; 3] = [48, 68, 100];

/// Exceptional discriminants for `𝒮̃_D`, genus 4.
pub const SD_TILDE_EXCEPTIONS: [i64; 42] = [
    12, 16, 17, 20, 25, 28, 36, 73, 88, 97, 105, 112, 121, 124, 136, 145, 148, 169, 172, 184, 193, 196, 201, 217, 220,
    241, 244, 265, 268, 292, 304, 316, 364, 385, 436, 484, 556, 604, 676, 796, 844, 1684,
];

pub const PD_TILDE_EXCEPTIONS: [i64; 6] = [36, 41, 52, 68, 84, 100];

/// Whether `D` falls under the classification statements of the given genus.
pub fn is_classified(disc: i64, genus: u8) -> bool {
    match genus {
        3 => disc > 16 && matches!(disc.rem_euclid(8), 0 | 1 | 4),
        4 => disc >= 12 && matches!(disc.rem_euclid(4), 0 | 1),
        _ => false,
    }
}

/// Predicted partition of `𝒮_D` by a congruence class of `e`, when the
/// theorem gives one.
fn s_class(disc: i64, genus: u8, e: i64) -> Option<i64> {
    match genus {
        3 => {
            if SD_EXCEPTIONS.iter().any(|&(d, _)| d == disc) {
                None
            } else if disc.rem_euclid(16) == 4 {
                Some(e.rem_euclid(8))
            } else {
                Some(0)
            }
        }
        _ => {
            if SD_TILDE_EXCEPTIONS.contains(&disc) {
                return None;
            }
            let r = e.rem_euclid(8);
            Some(match disc.rem_euclid(8) {
                4 => match r {
                    0 | 4 => 0,
                    2 => 2,
                    _ => 6,
                },
                1 => {
                    if r == 1 || r == 3 {
                        1
                    } else {
                        7
                    }
                }
                0 => {
                    if r == 0 || r == 4 {
                        0
                    } else {
                        2
                    }
                }
                _ => 0,
            })
        }
    }
}

pub fn predicted_s(disc: i64, genus: u8) -> Option<usize> {
    if !is_classified(disc, genus) {
        return None;
    }
    match genus {
        3 => SD_EXCEPTIONS
            .iter()
            .find(|&&(d, _)| d == disc)
            .map(|&(_, c)| c)
            .or(Some(if disc.rem_euclid(16) == 4 { 2 } else { 1 })),
        _ => {
            if SD_TILDE_EXCEPTIONS.contains(&disc) {
                None
            } else {
                Some(match disc.rem_euclid(8) {
                    4 => 3,
                    0 | 1 => 2,
                    _ => 1,
                })
            }
        }
    }
}

pub fn predicted_p(disc: i64, genus: u8) -> Option<usize> {
    if !is_classified(disc, genus) {
        return None;
    }
    Some(match genus {
        3 => {
            if PD_EXCEPTIONS.contains(&disc) {
                2
            } else {
                1
            }
        }
        _ => {
            if PD_TILDE_EXCEPTIONS.contains(&disc) {
                3
            } else if disc == 12 || disc == 16 || disc % 2 == 1 {
                1
            } else {
                2
            }
        }
    })
}

pub fn predicted_q(disc: i64) -> Option<usize> {
    if !is_classified(disc, 3) {
        return None;
    }
    Some(match disc {
        41 => 4,
        48 | 68 | 100 => 2,
        d if d % 2 == 1 => 2,
        _ => 1,
    })
}

/// Which sets to compute in a classification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sets {
    pub p: bool,
    pub q: bool,
    pub s: bool,
}

impl Sets {
    pub const ALL: Sets = Sets {
        p: true,
        q: true,
        s: true,
    };
    pub const S_ONLY: Sets = Sets {
        p: false,
        q: false,
        s: true,
    };
    pub const P_ONLY: Sets = Sets {
        p: true,
        q: false,
        s: false,
    };
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub disc: i64,
    pub genus: u8,
    pub n_p: Option<usize>,
    pub n_q: Option<usize>,
    pub n_s: Option<usize>,
    pub comp_p: Option<usize>,
    pub comp_q: Option<usize>,
    pub comp_s: Option<usize>,
    pub comp_q_parity: Option<usize>,
    pub s_components: Vec<Vec<i64>>,
    pub p_representatives: Vec<[i64; 4]>,
    pub predicted_p: Option<usize>,
    pub predicted_q: Option<usize>,
    pub predicted_s: Option<usize>,
    pub flags: Vec<String>,
}

impl ClassificationReport {
    pub fn agrees(&self) -> bool {
        self.flags.is_empty()
    }
}

pub fn verify_classification(disc: i64, genus: u8) -> Result<ClassificationReport> {
    classify(disc, genus, Sets::ALL)
}

pub fn classify(disc: i64, genus: u8, sets: Sets) -> Result<ClassificationReport> {
    let mut rep = ClassificationReport {
        disc,
        genus,
        n_p: None,
        n_q: None,
        n_s: None,
        comp_p: None,
        comp_q: None,
        comp_s: None,
        comp_q_parity: None,
        s_components: Vec::new(),
        p_representatives: Vec::new(),
        predicted_p: None,
        predicted_q: None,
        predicted_s: None,
        flags: Vec::new(),
    };
    let mut s_graph = None;
    if sets.s {
        let g = build_graph(disc, genus, SetKind::S)?;
        let comps: Vec<Vec<i64>> = g
            .components()
            .iter()
            .map(|c| c.iter().map(|&i| g.nodes[i].e()).collect())
            .collect();
        rep.n_s = Some(g.nodes.len());
        rep.comp_s = Some(comps.len());
        rep.predicted_s = predicted_s(disc, genus);
        if let Some(p) = rep.predicted_s {
            if p != comps.len() {
                rep.flags
                    .push(format!("S: {} components, predicted {}", comps.len(), p));
            }
        }
        if is_classified(disc, genus) && !comps.is_empty() {
            if let Some(msg) = congruence_mismatch(&comps, |e| s_class(disc, genus, e)) {
                rep.flags.push(format!("S: {msg}"));
            }
        }
        if is_classified(disc, genus) && comps.is_empty() {
            rep.flags.push("S: empty".into());
        }
        rep.s_components = comps;
        s_graph = Some(g);
    }
    if sets.p {
        let g = build_graph(disc, genus, SetKind::P)?;
        let comps = g.components();
        rep.n_p = Some(g.nodes.len());
        rep.comp_p = Some(comps.len());
        rep.predicted_p = predicted_p(disc, genus);
        if let Some(p) = rep.predicted_p {
            if p != comps.len() {
                rep.flags
                    .push(format!("P: {} components, predicted {}", comps.len(), p));
            }
        }
        if genus == 4 && disc % 2 == 0 && !PD_TILDE_EXCEPTIONS.contains(&disc) && disc > 16 {
            let e_comps: Vec<Vec<i64>> = comps
                .iter()
                .map(|c| c.iter().map(|&i| g.nodes[i].e()).collect())
                .collect();
            if let Some(msg) = congruence_mismatch(&e_comps, |e| Some(e.rem_euclid(4))) {
                rep.flags.push(format!("P: {msg}"));
            }
        }
        let mut comp_of = vec![0usize; g.nodes.len()];
        for (k, c) in comps.iter().enumerate() {
            for &i in c {
                comp_of[i] = k;
            }
            let rep_node = c
                .iter()
                .map(|&i| g.nodes[i])
                .find(|n| matches!(n, Node::Proto(p) if p.is_reduced()));
            match rep_node {
                Some(Node::Proto(p)) => rep.p_representatives.push(p.tuple()),
                _ => rep.flags.push(format!("P: component {k} has no reduced prototype")),
            }
        }
        if let Some(sg) = &s_graph {
            let index: HashMap<[i64; 4], usize> = g
                .nodes
                .iter()
                .enumerate()
                .filter_map(|(i, n)| match n {
                    Node::Proto(p) => Some((p.tuple(), i)),
                    _ => None,
                })
                .collect();
            let lift = |n: &Node| -> Option<usize> {
                match n {
                    Node::Reduced(r) => reduced_to_prototype(r)
                        .ok()
                        .and_then(|p| index.get(&p.tuple()).copied()),
                    _ => None,
                }
            };
            for &(a, b, _) in &sg.edges {
                match (lift(&sg.nodes[a]), lift(&sg.nodes[b])) {
                    (Some(x), Some(y)) if comp_of[x] == comp_of[y] => {}
                    _ => rep.flags.push(format!(
                        "S edge {} ~ {} not realized in P",
                        sg.nodes[a].label(),
                        sg.nodes[b].label()
                    )),
                }
            }
        }
        if genus == 3 && disc > 8 {
            let parity: usize = comps.iter().map(|c| if g.is_bipartite(c) { 2 } else { 1 }).sum();
            rep.comp_q_parity = Some(parity);
        }
    }
    if sets.q && genus == 3 {
        let g = build_graph(disc, 3, SetKind::Q)?;
        rep.n_q = Some(g.nodes.len());
        let c = g.component_count();
        rep.comp_q = Some(c);
        rep.predicted_q = predicted_q(disc);
        if let Some(p) = rep.predicted_q {
            if p != c {
                rep.flags.push(format!("Q: {c} components, predicted {p}"));
            }
        }
        if let Some(par) = rep.comp_q_parity {
            if par != c {
                rep.flags.push(format!("Q: parity rule gives {par}, graph gives {c}"));
            }
        }
    }
    Ok(rep)
}

/// Checks that components coincide with the classes of `class`; returns a
/// description of the first mismatch.
fn congruence_mismatch(comps: &[Vec<i64>], class: impl Fn(i64) -> Option<i64>) -> Option<String> {
    let mut seen: HashMap<i64, usize> = HashMap::new();
    for (k, c) in comps.iter().enumerate() {
        let labels: Vec<Option<i64>> = c.iter().map(|&e| class(e)).collect();
        let first = labels[0]?;
        if labels.iter().any(|l| *l != Some(first)) {
            return Some(format!("component {c:?} mixes congruence classes"));
        }
        if let Some(prev) = seen.insert(first, k) {
            return Some(format!("components {prev} and {k} share a congruence class"));
        }
    }
    None
}

/// Execution strategy for sweeps; the default is parallel when the
/// `parallel` feature is on.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[cfg_attr(not(feature = "parallel"), default)]
    Sequential,
    #[cfg(feature = "parallel")]
    #[default]
    Parallel,
}

/// Maps `f` over `items`, in parallel when requested; output order follows
/// input order.
pub fn map_exec<T, R, F>(items: &[T], exec: Exec, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        Exec::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
    }
}

/// Reports for every classified discriminant in `range`.
pub fn sweep(range: RangeInclusive<i64>, genus: u8, sets: Sets, exec: Exec) -> Result<Vec<ClassificationReport>> {
    let discs: Vec<i64> = range.filter(|&d| is_classified(d, genus)).collect();
    map_exec(&discs, exec, |&d| classify(d, genus, sets))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge_set(g: &ButterflyGraph) -> Vec<(String, String, String)> {
        g.labeled_edges()
    }

    #[test]
    fn graph_48() {
        let g = build_graph(48, 3, SetKind::P).unwrap();
        let e = edge_set(&g);
        let has = |a: &str, b: &str, q: &str| e.contains(&(a.into(), b.into(), q.into()));
        assert!(has("2,2,1,-4", "4,1,0,-4", "B1"));
        assert!(has("2,2,1,-4", "4,1,0,-4", "Binf"));
        assert!(has("4,1,0,-4", "2,2,1,-4", "B2"));
        assert!(has("4,1,0,-4", "6,1,0,0", "B1"));
        assert!(has("4,1,0,-4", "6,1,0,0", "Binf"));
        assert!(has("6,1,0,0", "4,1,0,-4", "B1"));
        assert!(has("6,1,0,0", "4,1,0,-4", "Binf"));
        assert_eq!(g.component_count(), 1);
        assert_eq!(component_count(48, 3, SetKind::Q).unwrap(), 2);
    }

    #[test]
    fn graphs_68_100() {
        for (d, nodes) in crate::reference::FIGURE_GRAPHS {
            let g = build_graph(d, 3, SetKind::P).unwrap();
            assert_eq!(edge_set(&g), crate::reference::figure_edge_set(&nodes), "D={d}");
        }
    }

    #[test]
    fn small_counts() {
        assert_eq!(component_count(41, 3, SetKind::S).unwrap(), 2);
        assert_eq!(component_count(68, 3, SetKind::P).unwrap(), 2);
        assert_eq!(component_count(100, 3, SetKind::P).unwrap(), 2);
        assert_eq!(component_count(41, 3, SetKind::P).unwrap(), 2);
        assert_eq!(component_count(41, 3, SetKind::Q).unwrap(), 4);
        assert_eq!(q_components_via_parity(48).unwrap(), 2);
    }

    #[test]
    fn reports_112_73() {
        let r = verify_classification(112, 3).unwrap();
        let mut comps = r.s_components.clone();
        for c in comps.iter_mut() {
            c.sort();
        }
        comps.sort();
        assert_eq!(comps, vec![vec![-8, 4], vec![-4, 0]]);
        assert!(r.agrees(), "{:?}", r.flags);
        let r = verify_classification(73, 3).unwrap();
        let mut comps = r.s_components.clone();
        for c in comps.iter_mut() {
            c.sort();
        }
        comps.sort();
        assert_eq!(comps, vec![vec![-7, -3, -1, 3], vec![-5, 1]]);
        assert_eq!(r.comp_p, Some(1));
    }

    #[test]
    fn dot_labels() {
        let g = build_graph(68, 3, SetKind::P).unwrap();
        let dot = g.to_dot();
        assert!(dot.contains("[label=\"2,2,1,-6\"]"));
        assert!(dot.contains("[label=\"B1\"]"));
    }
}
