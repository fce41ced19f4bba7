//! Adjacency graphs of register cycles and the spanning trees that rules induce.

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fsr::{CycleRecord, FeedbackFunction};
use crate::generator::{fired_pairs, ConjugatePair};
use crate::rules::Rule;
use crate::word::BitWord;

/// Relations used to orient fired pairs. `compare(a, b) == Less` means `a` lies
/// nearer the root, so a tree edge runs from `b` to `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleOrder {
    /// Heavier cycles are parents; root `(1)`.
    WeightTowardHeavier,
    /// Lighter cycles are parents; root `(0)`.
    WeightTowardLighter,
    /// Smaller least state is the parent; root is the cycle of `0^n`.
    Lexicographic,
    /// Longer maximal zero run is the parent; root `(0)`.
    Run,
    /// Smaller necklace is the parent; root `(0)`.
    Necklace,
    /// Heavier is the parent, ties broken by smaller necklace.
    Mixed,
}

impl CycleOrder {
    /// `None` when the relation leaves the two cycles unordered.
    pub fn compare(self, a: &CycleRecord, b: &CycleRecord) -> Option<Ordering> {
        let ord = match self {
            CycleOrder::WeightTowardHeavier => b.weight.cmp(&a.weight),
            CycleOrder::WeightTowardLighter => a.weight.cmp(&b.weight),
            CycleOrder::Lexicographic => a.representative.cmp(&b.representative),
            CycleOrder::Run => b.necklace.max_zero_run().cmp(&a.necklace.max_zero_run()),
            CycleOrder::Necklace => a.necklace.cmp(&b.necklace),
            CycleOrder::Mixed => b
                .weight
                .cmp(&a.weight)
                .then_with(|| a.necklace.cmp(&b.necklace)),
        };
        match ord {
            Ordering::Equal if a != b => None,
            o => Some(o),
        }
    }

    /// The unique cycle that precedes every other, if there is one.
    pub fn extreme(self, cycles: &[CycleRecord]) -> Option<usize> {
        let mut found = None;
        for (i, c) in cycles.iter().enumerate() {
            let least = cycles
                .iter()
                .enumerate()
                .all(|(j, d)| i == j || self.compare(c, d) == Some(Ordering::Less));
            if least {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub fn name(self) -> &'static str {
        match self {
            CycleOrder::WeightTowardHeavier => "weight (toward heavier)",
            CycleOrder::WeightTowardLighter => "weight (toward lighter)",
            CycleOrder::Lexicographic => "lexicographic",
            CycleOrder::Run => "run",
            CycleOrder::Necklace => "necklace",
            CycleOrder::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdjacencyEdge {
    /// Cycle holding `pair.zero`.
    pub a: usize,
    /// Cycle holding `pair.one`.
    pub b: usize,
    pub pair: ConjugatePair,
}

/// Undirected multigraph: cycles joined by each conjugate pair that straddles two of them.
#[derive(Clone, Debug, Serialize)]
pub struct AdjacencyGraph {
    pub vertices: Vec<CycleRecord>,
    pub edges: Vec<AdjacencyEdge>,
}

pub fn adjacency_graph(f: &FeedbackFunction) -> Result<AdjacencyGraph> {
    let idx = f.cycle_index()?;
    let n = f.order();
    let half = 1u64 << (n - 1);
    let mut edges = Vec::new();
    for suffix in 0..half {
        let (a, b) = (idx.cycle_id(suffix), idx.cycle_id(suffix | half));
        if a != b {
            edges.push(AdjacencyEdge {
                a,
                b,
                pair: ConjugatePair::from_suffix(n, suffix),
            });
        }
    }
    Ok(AdjacencyGraph {
        vertices: idx.cycles,
        edges,
    })
}

impl AdjacencyGraph {
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph adjacency {\n  node [shape=box, style=rounded];\n");
        for v in &self.vertices {
            writeln!(out, "  \"{}\" [label=\"({})\"];", v.necklace, v.necklace).unwrap();
        }
        for e in &self.edges {
            writeln!(
                out,
                "  \"{}\" -- \"{}\" [label=\"{}\"];",
                self.vertices[e.a].necklace, self.vertices[e.b].necklace, e.pair.zero
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.vertices.iter().map(|v| v.necklace.to_string()).collect::<Vec<_>>(),
            "edges": self.edges.iter().map(|e| serde_json::json!({
                "a": self.vertices[e.a].necklace.to_string(),
                "b": self.vertices[e.b].necklace.to_string(),
                "pair": [e.pair.zero.to_string(), e.pair.one.to_string()],
            })).collect::<Vec<_>>(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub child: usize,
    pub parent: usize,
    /// Member of the fired pair lying in the child cycle.
    pub label: BitWord,
    pub pair: ConjugatePair,
}

/// Directed tree on the cycles, every edge pointing toward the root.
#[derive(Clone, Debug, Serialize)]
pub struct SpanningTree {
    pub order: CycleOrder,
    pub root: usize,
    pub vertices: Vec<CycleRecord>,
    pub edges: Vec<TreeEdge>,
}

/// Orients each fired pair by the rule's cycle order and checks the result is a spanning tree.
pub fn induced_tree(rule: &Rule) -> Result<SpanningTree> {
    let f = rule.base_function();
    let idx = f.cycle_index()?;
    let order = rule.spec().family.order();
    let pairs = fired_pairs(rule)?;
    let vertices = idx.cycles.clone();
    let mut parent: Vec<Option<usize>> = vec![None; vertices.len()];
    let mut edges = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let (a, b) = (
            idx.cycle_id(pair.zero.value()),
            idx.cycle_id(pair.one.value()),
        );
        if a == b {
            return Err(Error::NotATree(format!(
                "fired pair {pair} lies inside cycle ({})",
                vertices[a].necklace
            )));
        }
        let (child, par, label) = match order.compare(&vertices[a], &vertices[b]) {
            Some(Ordering::Less) => (b, a, pair.one),
            Some(Ordering::Greater) => (a, b, pair.zero),
            _ => {
                return Err(Error::NotATree(format!(
                    "fired pair {pair} joins ({}) and ({}), which the {} order leaves unordered",
                    vertices[a].necklace,
                    vertices[b].necklace,
                    order.name()
                )))
            }
        };
        if let Some(prev) = parent[child] {
            return Err(Error::NotATree(format!(
                "cycle ({}) has two outgoing edges, to ({}) and ({})",
                vertices[child].necklace, vertices[prev].necklace, vertices[par].necklace
            )));
        }
        parent[child] = Some(par);
        edges.push(TreeEdge {
            child,
            parent: par,
            label,
            pair,
        });
    }
    let roots: Vec<usize> = (0..vertices.len())
        .filter(|&i| parent[i].is_none())
        .collect();
    if roots.len() != 1 {
        let names: Vec<String> = roots
            .iter()
            .map(|&i| format!("({})", vertices[i].necklace))
            .collect();
        return Err(Error::NotATree(format!(
            "{} cycles have no outgoing edge: {}",
            roots.len(),
            names.join(" ")
        )));
    }
    let root = roots[0];
    // Each step toward the root must end there within |V| steps.
    for start in 0..vertices.len() {
        let (mut v, mut steps) = (start, 0);
        while let Some(p) = parent[v] {
            v = p;
            steps += 1;
            if steps > vertices.len() {
                return Err(Error::NotATree(format!(
                    "directed cycle through ({})",
                    vertices[start].necklace
                )));
            }
        }
    }
    if let Some(expected) = order.extreme(&vertices) {
        if expected != root {
            return Err(Error::NotATree(format!(
                "root is ({}) but the {} order's extreme cycle is ({})",
                vertices[root].necklace,
                order.name(),
                vertices[expected].necklace
            )));
        }
    }
    Ok(SpanningTree {
        order,
        root,
        vertices,
        edges,
    })
}

impl SpanningTree {
    pub fn root_cycle(&self) -> &CycleRecord {
        &self.vertices[self.root]
    }

    /// `(child necklace, parent necklace, label)` for every edge.
    pub fn edge_triples(&self) -> Vec<(String, String, String)> {
        self.edges
            .iter()
            .map(|e| {
                (
                    self.vertices[e.child].necklace.to_string(),
                    self.vertices[e.parent].necklace.to_string(),
                    e.label.to_string(),
                )
            })
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tree {\n  node [shape=box, style=rounded];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let extra = if i == self.root {
                ", peripheries=2"
            } else {
                ""
            };
            writeln!(
                out,
                "  \"{}\" [label=\"({})\"{extra}];",
                v.necklace, v.necklace
            )
            .unwrap();
        }
        for (c, p, l) in self.edge_triples() {
            writeln!(out, "  \"{c}\" -> \"{p}\" [label=\"{l}\"];").unwrap();
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "order": self.order,
            "root": self.vertices[self.root].necklace.to_string(),
            "vertices": self.vertices.iter().map(|v| v.necklace.to_string()).collect::<Vec<_>>(),
            "edges": self.edge_triples().into_iter().map(|(c, p, l)| serde_json::json!({
                "from": c, "to": p, "label": l,
            })).collect::<Vec<_>>(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::{Family, RuleSpec};

    fn w(s: &str) -> BitWord {
        s.parse().unwrap()
    }

    #[test]
    fn adjacency_examples() {
        let g = adjacency_graph(&FeedbackFunction::pcr(6).unwrap()).unwrap();
        assert_eq!(g.vertices.len(), 14);
        let g = adjacency_graph(&FeedbackFunction::psr(6).unwrap()).unwrap();
        assert_eq!(g.vertices.len(), 10);
        let g = adjacency_graph(&FeedbackFunction::pcr(2).unwrap()).unwrap();
        let mut ends: Vec<(String, String)> = g
            .edges
            .iter()
            .map(|e| {
                (
                    g.vertices[e.a].necklace.to_string(),
                    g.vertices[e.b].necklace.to_string(),
                )
            })
            .collect();
        ends.sort();
        assert_eq!(
            ends,
            [("00".into(), "01".into()), ("01".into(), "11".into())]
        );
        assert_eq!(g.to_dot().matches(" -- ").count(), 2);
    }

    #[test]
    fn order_comparators() {
        let f = FeedbackFunction::psr(6).unwrap();
        let cycles = f.decompose().unwrap();
        let by = |s: &str| cycles.iter().find(|c| c.necklace == w(s)).unwrap();
        // Run order: (0000101) has run 4, (0011011) has run 2.
        assert_eq!(
            CycleOrder::Run.compare(by("0000101"), by("0011011")),
            Some(Ordering::Less)
        );
        assert_eq!(CycleOrder::Run.compare(by("0011101"), by("0011011")), None);
        let mut mixed = cycles.clone();
        mixed.sort_by(|a, b| CycleOrder::Mixed.compare(a, b).unwrap());
        let names: Vec<String> = mixed.iter().map(|c| c.necklace.to_string()).collect();
        assert_eq!(
            names,
            [
                "0111111", "0001111", "0010111", "0011011", "0011101", "0101011", "0000011",
                "0000101", "0001001", "0000000"
            ]
        );
        assert_eq!(
            CycleOrder::Mixed
                .extreme(&cycles)
                .map(|i| cycles[i].necklace),
            Some(w("0111111"))
        );
        assert_eq!(
            CycleOrder::Run.extreme(&cycles).map(|i| cycles[i].necklace),
            Some(w("0000000"))
        );
    }

    #[test]
    fn tree_for_lz_rule() {
        let rule = RuleSpec::new(6, Family::PcrLzPrev).compile().unwrap();
        let t = induced_tree(&rule).unwrap();
        assert_eq!(t.edges.len(), 13);
        assert_eq!(t.root_cycle().necklace, w("111111"));
        assert_eq!(t.to_dot().matches(" -> ").count(), 13);
    }

    #[test]
    fn small_trees() {
        for fam in [
            Family::PcrLzK { k: 0 },
            Family::PcrEoK { k: 2 },
            Family::PsrRunK { k: 1 },
            Family::PsrEoK { k: 1 },
            Family::PsrMixedK { k: 0 },
            Family::Jfb {
                f: FeedbackFunction::csr(3).unwrap(),
            },
        ] {
            let rule = RuleSpec::new(3, fam).compile().unwrap();
            let t = induced_tree(&rule).unwrap();
            assert_eq!(t.edges.len(), t.vertices.len() - 1, "{}", rule.spec());
        }
    }
}
