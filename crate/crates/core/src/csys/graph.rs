//! The bipartite program graph and its strongly connected components.

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::{Form, System, VarId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SccKind {
    /// A single vertex without a self-loop.
    Transient,
    /// Exactly one elementary cycle up to rotation.
    Cyclic,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scc {
    pub vars: Vec<VarId>,
    /// Constraint indices, ascending.
    pub constraints: Vec<usize>,
    pub kind: SccKind,
}

/// Vertices are variables and constraints; edges run `input → c → output`.
#[derive(Clone, Debug)]
pub struct ProgramGraph {
    pub sccs: Vec<Scc>,
    var_scc: Vec<usize>,
    constraint_scc: Vec<usize>,
    flat: bool,
}

impl ProgramGraph {
    /// No SCC holds two constraints with the same output variable.
    pub fn is_flat(&self) -> bool {
        self.flat
    }

    pub fn scc_of_var(&self, v: VarId) -> &Scc {
        &self.sccs[self.var_scc[v.index()]]
    }

    pub fn scc_of_constraint(&self, c: usize) -> &Scc {
        &self.sccs[self.constraint_scc[c]]
    }
}

pub fn analyze_graph<F: Form>(sys: &System<F>) -> ProgramGraph {
    let nv = sys.var_count();
    let nc = sys.constraint_count();
    let mut g = DiGraph::<(), ()>::with_capacity(nv + nc, nc * 3);
    for _ in 0..nv + nc {
        g.add_node(());
    }
    for (i, c) in sys.constraints().iter().enumerate() {
        let cn = NodeIndex::new(nv + i);
        for v in &c.inputs {
            g.add_edge(NodeIndex::new(v.index()), cn, ());
        }
        g.add_edge(cn, NodeIndex::new(c.output.index()), ());
    }

    let mut var_scc = vec![0; nv];
    let mut constraint_scc = vec![0; nc];
    let mut sccs = Vec::new();
    for (k, comp) in tarjan_scc(&g).into_iter().enumerate() {
        let mut vars = Vec::new();
        let mut constraints = Vec::new();
        for node in comp {
            let i = node.index();
            if i < nv {
                vars.push(VarId::from(i));
                var_scc[i] = k;
            } else {
                constraints.push(i - nv);
                constraint_scc[i - nv] = k;
            }
        }
        vars.sort();
        constraints.sort();
        sccs.push(Scc { vars, constraints, kind: SccKind::Other });
    }

    let mut flat = true;
    for (k, scc) in sccs.iter_mut().enumerate() {
        let nodes = scc.vars.len() + scc.constraints.len();
        let mut edges = 0;
        let mut outputs = Vec::new();
        for &ci in &scc.constraints {
            let c = sys.constraint(ci);
            edges += c.inputs.iter().filter(|v| var_scc[v.index()] == k).count();
            if var_scc[c.output.index()] == k {
                edges += 1;
            }
            outputs.push(c.output);
        }
        outputs.sort();
        if outputs.windows(2).any(|w| w[0] == w[1]) {
            flat = false;
        }
        // A strongly connected digraph with as many edges as vertices is a
        // single elementary cycle; bipartite graphs have no self-loops.
        scc.kind = if nodes == 1 {
            SccKind::Transient
        } else if edges == nodes {
            SccKind::Cyclic
        } else {
            SccKind::Other
        };
    }
    ProgramGraph { sccs, var_scc, constraint_scc, flat }
}
